//! Hyperplane intersections and how they degrade under input noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    hyperplane_to_affine, make_affine, rho_affine, AffineError, AffinePlane, HyperplaneParams,
};
use crate::exact::{sqrt_enclosure, vecs, Dyadic, DyadicInterval, RatMatrix, Rational};
use crate::grassmann::GrassPoint;

/// The (n-2)-plane where two non-parallel hyperplanes meet, solved exactly
/// from the two normal equations.
pub fn hyperplane_intersection(
    p1: &AffinePlane,
    p2: &AffinePlane,
) -> Result<AffinePlane, AffineError> {
    let n = p1.n();
    if p2.n() != n {
        return Err(AffineError::DimensionMismatch(format!(
            "ambient dimensions {} and {}",
            n,
            p2.n()
        )));
    }
    if p1.k() + 1 != n || p2.k() + 1 != n {
        return Err(AffineError::DimensionMismatch("both arguments must be hyperplanes".into()));
    }
    if p1.direction() == p2.direction() {
        return Err(if p1 == p2 {
            AffineError::IdenticalPlanes
        } else {
            AffineError::ParallelPlanes
        });
    }
    if n < 3 {
        // two lines in the plane meet in a point, which is out of scope
        return Err(AffineError::TrivialDirection);
    }
    let u1 = p1.basis().vectors()[0].clone();
    let u2 = p2.basis().vectors()[0].clone();
    let rhs = vec![vecs::dot(&u1, &p1.translation()), vecs::dot(&u2, &p2.translation())];
    let a = RatMatrix::from_rows(vec![u1, u2])?;
    let x0 = a.solve(&rhs).expect("normals of distinct hyperplanes are independent");
    let v = GrassPoint::span(&a.null_space())?;
    make_affine(&v, &x0)
}

/// One row of the noise-sensitivity experiment around an intersection.
///
/// `t` is read off the affine distance between the two input hyperplanes
/// (floor of -log2 of the enclosure midpoint); nearly parallel inputs have
/// large t and amplify input noise accordingly. The reading is labeled
/// observational: it is a metric stand-in, not a certified parameter.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntersectionReport {
    pub t: i64,
    pub r: i64,
    pub observed_error: DyadicInterval,
    pub predicted_scale: Dyadic,
    pub label: String,
}

/// 2^e <= x < 2^(e+1).
fn log2_floor(x: &Rational) -> i64 {
    debug_assert!(x.is_positive());
    let mut e = x.numer().bits() as i64 - x.denom().bits() as i64;
    while Rational::pow2(e + 1) <= *x {
        e += 1;
    }
    while Rational::pow2(e) > *x {
        e -= 1;
    }
    e
}

fn perturbed_params(hp: &HyperplaneParams, r: i64, rng: &mut ChaCha8Rng) -> HyperplaneParams {
    let noise = |rng: &mut ChaCha8Rng| {
        Rational::from_int(rng.gen_range(-15i64..=15)) * Rational::pow2(-r - 4)
    };
    HyperplaneParams { a: hp.a.iter().map(|x| x + &noise(rng)).collect(), b: &hp.b + &noise(rng) }
}

/// Perturb both hyperplanes by noise of size at most 2^-r, intersect the
/// perturbed pair, and measure how far the intersection moved at a point:
/// the observed error is the distance from `x_on_both` to the perturbed
/// intersection plane, reported against the predicted scale 2^-(r-t).
pub fn intersection_precision_report(
    hp1: &HyperplaneParams,
    hp2: &HyperplaneParams,
    x_on_both: &[Rational],
    r: i64,
    seed: u64,
) -> Result<IntersectionReport, AffineError> {
    assert!(r >= 1, "noise exponent must be positive");
    let p1 = hyperplane_to_affine(hp1)?;
    let p2 = hyperplane_to_affine(hp2)?;
    if !p1.contains(x_on_both) || !p2.contains(x_on_both) {
        return Err(AffineError::PointOffPlane);
    }
    let gap = rho_affine(&p1, &p2, (r + 8).max(16))?;
    let mid = gap.value.midpoint().to_rational();
    if !mid.is_positive() {
        return Err(AffineError::IdenticalPlanes);
    }
    let e = log2_floor(&mid);
    let t = if mid == Rational::pow2(e) { -e } else { -e - 1 };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q1 = hyperplane_to_affine(&perturbed_params(hp1, r, &mut rng))?;
    let q2 = hyperplane_to_affine(&perturbed_params(hp2, r, &mut rng))?;
    let moved = hyperplane_intersection(&q1, &q2)?;
    // nearest point of the moved intersection: project the displacement
    // onto its direction and add back the translation
    let shifted = vecs::sub(x_on_both, &moved.translation());
    let nearest =
        vecs::add(&moved.translation(), &moved.direction().projection().mul_vec(&shifted));
    let observed_error = sqrt_enclosure(&vecs::norm_sq(&vecs::sub(&nearest, x_on_both)), r + 16);
    Ok(IntersectionReport {
        t,
        r,
        observed_error,
        predicted_scale: Dyadic::pow2(t - r),
        label: "observational t".into(),
    })
}
