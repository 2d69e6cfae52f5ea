//! Affine k-planes in R^n, represented as a direction plane V in G(n, k)
//! plus a translation t in V-perp. The translation is stored through its
//! exact coordinates in a canonical basis of V-perp, so equal planes have
//! equal representations and equality stays decidable.

mod intersect;
mod params;
mod reconstruct;

pub use intersect::{hyperplane_intersection, intersection_precision_report, IntersectionReport};
pub use params::{
    affine_to_hyperplane, affine_to_line, hyperplane_to_affine, line_to_affine, HyperplaneParams,
    LineParams,
};
pub use reconstruct::{plane_from_boxes, plane_from_points, point_on_plane, points_on_plane};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::spectral::{sigma_min_nonzero, smallest_eigenvalue_at_least};
use crate::exact::{sqrt_enclosure, vecs, ExactError, RatMatrix, Rational};
use crate::grassmann::{rho, GrassError, GrassPoint, MetricMethod, MetricSample};

#[derive(Debug, Error, PartialEq)]
pub enum AffineError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("direction must be a proper nontrivial subspace (1 <= k < n)")]
    TrivialDirection,
    #[error("points do not span a plane of the expected dimension")]
    DegeneratePointSet,
    #[error("line is perpendicular to the x1-axis, not a graph over x1")]
    VerticalLine,
    #[error("hyperplane is not a graph over the first n-1 coordinates")]
    VerticalHyperplane,
    #[error("hyperplanes are parallel")]
    ParallelPlanes,
    #[error("hyperplanes are identical")]
    IdenticalPlanes,
    #[error("point does not lie on both hyperplanes")]
    PointOffPlane,
    #[error("interval box wider than the stated resolution")]
    BoxTooWide,
    #[error(transparent)]
    Grass(#[from] GrassError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

fn check_direction(v: &GrassPoint) -> Result<(), AffineError> {
    if v.k() == 0 || v.k() == v.n() {
        return Err(AffineError::TrivialDirection);
    }
    Ok(())
}

/// All k-element subsets of {0, .., n-1} in lexicographic order.
pub(crate) fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        let advanced = loop {
            if i == 0 {
                break false;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break true;
            }
        };
        if !advanced {
            return out;
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Index of the full-rank candidate whose certified smallest singular
/// value has the largest lower bound; ties keep the earliest candidate, so
/// lexicographic enumeration order decides them.
pub(crate) fn argmax_sigma_min(candidates: &[RatMatrix], rank: usize, p: i64) -> Option<usize> {
    let mut best: Option<(crate::exact::Dyadic, usize)> = None;
    for (i, m) in candidates.iter().enumerate() {
        if m.rank() < rank {
            continue;
        }
        let enc = sigma_min_nonzero(m, p).expect("full-rank matrix is nonzero");
        match &best {
            Some((lo, _)) if enc.lo() <= lo => {}
            _ => best = Some((enc.lo().clone(), i)),
        }
    }
    best.map(|(_, i)| i)
}

/// A basis of V-perp with certified conditioning: every vector has norm in
/// [1/2, 2] (decided exactly on squared norms), the vectors are
/// independent, and the smallest singular value of the column matrix is at
/// least 1/2 (decided exactly as lambda_min of the Gram matrix >= 1/4).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementBasis {
    vectors: Vec<Vec<Rational>>,
}

impl ComplementBasis {
    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// The n x (n-k) matrix with the basis vectors as columns.
    pub fn matrix(&self) -> RatMatrix {
        RatMatrix::from_columns(self.vectors.clone()).expect("uniform vector lengths")
    }

    /// Re-check the three conditioning conditions from scratch.
    pub fn verify(&self) -> bool {
        tuple_is_certified(&self.vectors)
    }
}

/// The three conditions a complement tuple must pass, all decided exactly.
fn tuple_is_certified(vectors: &[Vec<Rational>]) -> bool {
    if vectors.is_empty() {
        return false;
    }
    let quarter = Rational::new(1, 4).expect("nonzero");
    let four = Rational::from_int(4);
    for v in vectors {
        let ns = vecs::norm_sq(v);
        if ns < quarter || ns > four {
            return false;
        }
    }
    let m = match RatMatrix::from_columns(vectors.to_vec()) {
        Ok(m) => m,
        Err(_) => return false,
    };
    if m.rank() < vectors.len() {
        return false;
    }
    let gram = m.transpose().matmul(&m).expect("shapes agree");
    smallest_eigenvalue_at_least(&gram, &quarter)
}

/// A certified basis of V-perp, deterministic in V.
///
/// The search order is fixed: first the projections q - Vq of every
/// (n-k)-subset of the standard basis, subsets in lexicographic order;
/// if no subset passes the conditioning checks, dyadic approximations of
/// an exact orthogonalization of V-perp at increasing depth. The second
/// phase converges to an orthonormal tuple, which passes with strict
/// margins, so the search halts.
pub fn complement_basis(v: &GrassPoint) -> Result<ComplementBasis, AffineError> {
    check_direction(v)?;
    let n = v.n();
    let d = n - v.k();
    let p = v.projection();
    for subset in k_subsets(n, d) {
        let vectors: Vec<Vec<Rational>> = subset
            .iter()
            .map(|&i| {
                let col = p.col(i);
                (0..n)
                    .map(|j| {
                        let delta = Rational::from_int((i == j) as i64);
                        delta - &col[j]
                    })
                    .collect()
            })
            .collect();
        if tuple_is_certified(&vectors) {
            return Ok(ComplementBasis { vectors });
        }
    }
    // Exact orthogonalization of a kernel basis of P, without the
    // (irrational) normalization.
    let raw = p.null_space();
    debug_assert_eq!(raw.len(), d);
    let mut ortho: Vec<Vec<Rational>> = Vec::with_capacity(d);
    for w in raw {
        let mut u = w;
        for prev in &ortho {
            let c = vecs::dot(&u, prev) / vecs::norm_sq(prev);
            u = vecs::sub(&u, &vecs::scale(prev, &c));
        }
        ortho.push(u);
    }
    let q = v.orthogonal_complement();
    for depth in 2..=64i64 {
        let vectors: Vec<Vec<Rational>> = ortho
            .iter()
            .map(|w| {
                let scale = sqrt_enclosure(&vecs::norm_sq(w), depth + 6).midpoint().to_rational();
                let rounded: Vec<Rational> =
                    w.iter().map(|c| dyadic_round(&(c / &scale), depth)).collect();
                // project back so the vector lies in V-perp exactly
                q.projection().mul_vec(&rounded)
            })
            .collect();
        if tuple_is_certified(&vectors) {
            return Ok(ComplementBasis { vectors });
        }
    }
    unreachable!("dyadic refinement certifies an orthonormal tuple at finite depth")
}

/// Nearest multiple of 2^-depth (ties round up).
fn dyadic_round(x: &Rational, depth: i64) -> Rational {
    let scaled = x * &Rational::pow2(depth);
    let half = Rational::new(1, 2).expect("nonzero");
    Rational::from_int((scaled + half).floor()) * Rational::pow2(-depth)
}

/// Projection onto V-perp: the identity minus the projection onto V.
pub fn complement_projection(v: &GrassPoint) -> Result<GrassPoint, AffineError> {
    check_direction(v)?;
    Ok(v.orthogonal_complement())
}

/// The tuple {e_i - V e_i : i in S} over (n-k)-subsets S that maximizes the
/// certified smallest singular value (ties lexicographic). Spanning it is
/// an independent way to build V-perp; kept as a cross-check against
/// `complement_projection`.
pub fn complement_span_tuple(v: &GrassPoint) -> Result<Vec<Vec<Rational>>, AffineError> {
    check_direction(v)?;
    let n = v.n();
    let d = n - v.k();
    let p = v.projection();
    let subsets = k_subsets(n, d);
    let tuples: Vec<Vec<Vec<Rational>>> = subsets
        .iter()
        .map(|subset| {
            subset
                .iter()
                .map(|&i| {
                    let col = p.col(i);
                    (0..n).map(|j| Rational::from_int((i == j) as i64) - &col[j]).collect()
                })
                .collect()
        })
        .collect();
    let mats: Vec<RatMatrix> = tuples
        .iter()
        .map(|t| RatMatrix::from_columns(t.clone()).expect("uniform lengths"))
        .collect();
    let best = argmax_sigma_min(&mats, d, 24)
        .expect("some standard-basis subset projects onto a basis of the complement");
    Ok(tuples[best].clone())
}

#[derive(Debug, Clone, Deserialize)]
struct RawAffinePlane {
    direction: GrassPoint,
    basis: ComplementBasis,
    coords: Vec<Rational>,
}

/// An affine k-plane { x : x - t in V } with t in V-perp. `coords` are the
/// exact coordinates of t in the canonical complement basis of V.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawAffinePlane")]
pub struct AffinePlane {
    direction: GrassPoint,
    basis: ComplementBasis,
    coords: Vec<Rational>,
}

impl TryFrom<RawAffinePlane> for AffinePlane {
    type Error = String;

    fn try_from(raw: RawAffinePlane) -> Result<Self, String> {
        let basis = complement_basis(&raw.direction).map_err(|e| e.to_string())?;
        if basis != raw.basis {
            return Err("basis is not the canonical complement basis of the direction".into());
        }
        if raw.coords.len() != basis.len() {
            return Err(format!(
                "expected {} translation coordinates, got {}",
                basis.len(),
                raw.coords.len()
            ));
        }
        Ok(Self { direction: raw.direction, basis, coords: raw.coords })
    }
}

impl AffinePlane {
    pub fn n(&self) -> usize {
        self.direction.n()
    }

    pub fn k(&self) -> usize {
        self.direction.k()
    }

    pub fn direction(&self) -> &GrassPoint {
        &self.direction
    }

    pub fn basis(&self) -> &ComplementBasis {
        &self.basis
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// The translation t = sum coords_i * basis_i, orthogonal to V exactly.
    pub fn translation(&self) -> Vec<Rational> {
        let mut t = vecs::zeros(self.n());
        for (c, b) in self.coords.iter().zip(self.basis.vectors()) {
            t = vecs::add(&t, &vecs::scale(b, c));
        }
        t
    }

    /// Exact membership: x is on the plane iff x - t is fixed by V.
    pub fn contains(&self, x: &[Rational]) -> bool {
        if x.len() != self.n() {
            return false;
        }
        let w = vecs::sub(x, &self.translation());
        self.direction.projection().mul_vec(&w) == w
    }
}

/// The affine plane through `point` with direction `v`: the translation is
/// the component of the point orthogonal to V, written in the canonical
/// complement basis by solving the rational linear system.
pub fn make_affine(v: &GrassPoint, point: &[Rational]) -> Result<AffinePlane, AffineError> {
    if point.len() != v.n() {
        return Err(AffineError::DimensionMismatch(format!(
            "point has {} coordinates, ambient dimension is {}",
            point.len(),
            v.n()
        )));
    }
    let basis = complement_basis(v)?;
    let projected = v.projection().mul_vec(point);
    let t = vecs::sub(point, &projected);
    let coords = basis.matrix().solve(&t).expect("t lies in the span of the complement basis");
    Ok(AffinePlane { direction: v.clone(), basis, coords })
}

/// Distance on affine planes: rho of the directions plus the euclidean
/// distance of the translations, as an interval sum of the two certified
/// parts. Width at most 2^-p.
pub fn rho_affine(a: &AffinePlane, b: &AffinePlane, p: i64) -> Result<MetricSample, AffineError> {
    if a.n() != b.n() || a.k() != b.k() {
        return Err(AffineError::DimensionMismatch(format!(
            "planes have shapes ({}, {}) and ({}, {})",
            a.n(),
            a.k(),
            b.n(),
            b.k()
        )));
    }
    let directions = rho(&a.direction, &b.direction, p + 1)?;
    let dt = vecs::sub(&a.translation(), &b.translation());
    let shift = sqrt_enclosure(&vecs::norm_sq(&dt), p + 1);
    let value = directions.value.add(&shift, p);
    Ok(MetricSample { value, method: MetricMethod::Spectral, precision: p })
}
