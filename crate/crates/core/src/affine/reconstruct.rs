//! Planes from sample points, and points from planes.

use num_integer::Integer;

use super::{argmax_sigma_min, k_subsets, make_affine, AffineError, AffinePlane};
use crate::exact::spectral::sigma_min_nonzero;
use crate::exact::{sqrt_enclosure, vecs, Dyadic, DyadicInterval, RatMatrix, Rational};
use crate::grassmann::GrassPoint;

/// The unique affine plane through k+1 points in general position: the
/// direction is the span of the differences to the first point, the
/// translation follows from the first point itself.
pub fn plane_from_points(points: &[Vec<Rational>]) -> Result<AffinePlane, AffineError> {
    let Some(first) = points.first() else {
        return Err(AffineError::DegeneratePointSet);
    };
    let n = first.len();
    let k = points.len() - 1;
    if points.iter().any(|p| p.len() != n) {
        return Err(AffineError::DimensionMismatch("points of unequal dimension".into()));
    }
    if k == 0 || k >= n {
        return Err(AffineError::TrivialDirection);
    }
    let diffs: Vec<Vec<Rational>> = points[1..].iter().map(|p| vecs::sub(p, first)).collect();
    let m = RatMatrix::from_columns(diffs.clone()).expect("uniform lengths");
    if m.rank() < k {
        return Err(AffineError::DegeneratePointSet);
    }
    let v = GrassPoint::span(&diffs)?;
    make_affine(&v, first)
}

/// Smallest integer s with s^2 >= m.
fn int_sqrt_ceil(m: usize) -> i64 {
    let mut s = (m as f64).sqrt() as i64;
    while s * s < m as i64 {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= m as i64 {
        s -= 1;
    }
    s
}

/// Smallest multiple of 2^-p that is >= x.
fn dyadic_ceil(x: &Rational, p: i64) -> Dyadic {
    let scaled = x * &Rational::pow2(p);
    Dyadic::new(scaled.numer().div_ceil(scaled.denom()), -p)
}

/// Conversion constant between the two plane metrics, from module
/// configuration: the sphere-distance bounds used below are turned into
/// operator-norm bounds through it.
pub fn metric_conversion_constant() -> Rational {
    Rational::new(3, 2).expect("nonzero")
}

/// Reconstruct a plane from k+1 interval boxes of width at most 2^-r
/// around unknown true points. The box centers serve as the representative
/// exact points; the second return value is a certified bound on
/// rho_affine between the true plane and the reconstructed one.
///
/// The bound follows the constructive error chain: each center differs
/// from its true point by at most 2^-r (per coordinate, half of it), so
/// the spanning differences are off by at most 2^(1-r) and the direction
/// moves by at most n/sigma * 2^(1-r) in sphere distance, where sigma
/// lower-bounds the smallest singular value of the true difference matrix.
/// The conversion constant C turns that into operator distance, the base
/// point contributes 2 * 2^(1-r) directly, and the translation inherits
/// the direction error scaled by |p0|, giving
/// (C n/sigma + 2 + 2 |p0| (C n/sigma) C) * 2^(1-r).
pub fn plane_from_boxes(
    boxes: &[Vec<DyadicInterval>],
    r: i64,
) -> Result<(AffinePlane, DyadicInterval), AffineError> {
    if r < 1 {
        return Err(AffineError::DimensionMismatch("resolution exponent must be >= 1".into()));
    }
    let Some(first) = boxes.first() else {
        return Err(AffineError::DegeneratePointSet);
    };
    let n = first.len();
    let k = boxes.len() - 1;
    if boxes.iter().any(|b| b.len() != n) {
        return Err(AffineError::DimensionMismatch("boxes of unequal dimension".into()));
    }
    if k == 0 || k >= n {
        return Err(AffineError::TrivialDirection);
    }
    let cap = Dyadic::pow2(-r);
    for b in boxes {
        for iv in b {
            if iv.width() > cap {
                return Err(AffineError::BoxTooWide);
            }
        }
    }
    let centers: Vec<Vec<Rational>> =
        boxes.iter().map(|b| b.iter().map(|iv| iv.midpoint().to_rational()).collect()).collect();
    let plane = plane_from_points(&centers)?;

    let diffs: Vec<Vec<Rational>> =
        centers[1..].iter().map(|p| vecs::sub(p, &centers[0])).collect();
    let m = RatMatrix::from_columns(diffs).expect("uniform lengths");
    let sigma = sigma_min_nonzero(&m, r + 8)?;
    // each difference-matrix entry is off by at most 2^-r, so the smallest
    // singular value of the true matrix is within sqrt(nk) 2^-r of ours
    let slack = Rational::from_int(int_sqrt_ceil(n * k)) * Rational::pow2(-r);
    let sigma_true = sigma.lo().to_rational() - slack;
    if !sigma_true.is_positive() {
        // independence of the true points cannot be certified at this width
        return Err(AffineError::DegeneratePointSet);
    }
    let inv_sigma = sigma_true.recip().expect("positive");
    let c = metric_conversion_constant();
    let n_rat = Rational::from_int(n as i64);
    let p0_norm = sqrt_enclosure(&vecs::norm_sq(&centers[0]), r + 8).hi().to_rational()
        + Rational::from_int(int_sqrt_ceil(n)) * Rational::pow2(-r - 1);
    let direction_part = &c * &n_rat * &inv_sigma;
    let bound = (&direction_part
        + &(Rational::from_int(2) + Rational::from_int(2) * &p0_norm * &c * &direction_part))
        * Rational::pow2(1 - r);
    let hi = dyadic_ceil(&bound, r + 8);
    let raw = DyadicInterval::new(Dyadic::zero(), hi, 0)?;
    let prec = raw.fit_precision();
    let certified = DyadicInterval::new(raw.lo().clone(), raw.hi().clone(), prec)?;
    Ok((plane, certified))
}

/// Columns the chart embedding walks along: the projected axis tuple with
/// the best certified conditioning (ties lexicographic).
fn chart_columns(p: &AffinePlane) -> Vec<Vec<Rational>> {
    let (n, k) = (p.n(), p.k());
    let proj = p.direction().projection();
    let subsets = k_subsets(n, k);
    let mats: Vec<RatMatrix> = subsets
        .iter()
        .map(|s| {
            RatMatrix::from_columns(s.iter().map(|&i| proj.col(i)).collect())
                .expect("uniform lengths")
        })
        .collect();
    let best = argmax_sigma_min(&mats, k, 24).expect("projection has rank k on some axis subset");
    subsets[best].iter().map(|&i| proj.col(i)).collect()
}

fn embed(p: &AffinePlane, columns: &[Vec<Rational>], coords: &[Rational]) -> Vec<Rational> {
    let mut x = p.translation();
    for (col, c) in columns.iter().zip(coords) {
        x = vecs::add(&x, &vecs::scale(col, c));
    }
    x
}

/// Embed chart coordinates into a point of the plane: x = V x' + t where
/// x' places the coordinates on the coordinate k-plane whose projected
/// axis tuple has the best certified conditioning (ties lexicographic).
/// The result lies on the plane exactly.
pub fn point_on_plane(p: &AffinePlane, coords: &[Rational]) -> Result<Vec<Rational>, AffineError> {
    if coords.len() != p.k() {
        return Err(AffineError::DimensionMismatch(format!(
            "expected {} chart coordinates, got {}",
            p.k(),
            coords.len()
        )));
    }
    Ok(embed(p, &chart_columns(p), coords))
}

/// point_on_plane over many coordinate tuples of one plane. The chart is
/// selected once; every output point lies on the plane exactly.
pub fn points_on_plane(
    p: &AffinePlane,
    coords: &[Vec<Rational>],
) -> Result<Vec<Vec<Rational>>, AffineError> {
    if let Some(bad) = coords.iter().find(|c| c.len() != p.k()) {
        return Err(AffineError::DimensionMismatch(format!(
            "expected {} chart coordinates, got {}",
            p.k(),
            bad.len()
        )));
    }
    let columns = chart_columns(p);
    Ok(coords.iter().map(|c| embed(p, &columns, c)).collect())
}
