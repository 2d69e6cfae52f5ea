//! Points of the Grassmannian G(n, k), stored as rational orthogonal
//! projection matrices. The representation makes membership decidable:
//! a matrix V names a k-plane iff V = V^T = V^2 and tr V = k, and all four
//! conditions are checked in exact arithmetic.

mod metric;

pub use metric::{
    certify_equivalent, compare_rho, is_perpendicular_reach, m_dist, m_dist_grid,
    perturbation_bound_check, rho, rho_grid, rho_spectral, rho_squared_single_angle,
    schedule_depth, MetricMethod, MetricSample,
};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{ExactError, RatMatrix, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrassError {
    #[error("projection matrix must be square")]
    NotSquare,
    #[error("projection matrix must be symmetric")]
    NotSymmetric,
    #[error("projection matrix must be idempotent")]
    NotIdempotent,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("spanning vectors are linearly dependent")]
    DependentSpan,
    #[error("empty spanning set")]
    EmptyBasis,
    #[error("operation needs a nonzero subspace")]
    TrivialSubspace,
    #[error("grid enumeration too large: {0}")]
    GridTooLarge(String),
    #[error("certification inconclusive at precision 2^-{0}")]
    Inconclusive(i64),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A k-plane through the origin in R^n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGrassPoint")]
pub struct GrassPoint {
    n: usize,
    k: usize,
    proj: RatMatrix,
}

#[derive(Deserialize)]
struct RawGrassPoint {
    n: usize,
    k: usize,
    proj: RatMatrix,
}

impl TryFrom<RawGrassPoint> for GrassPoint {
    type Error = GrassError;

    fn try_from(raw: RawGrassPoint) -> Result<Self, GrassError> {
        let point = GrassPoint::from_projection(raw.proj)?;
        if point.n != raw.n || point.k != raw.k {
            return Err(GrassError::DimensionMismatch(format!(
                "declared ({}, {}) but projection is a {}-plane in R^{}",
                raw.n, raw.k, point.k, point.n
            )));
        }
        Ok(point)
    }
}

impl GrassPoint {
    /// Accepts exactly the matrices that represent a plane: symmetric,
    /// idempotent, square. The trace of such a matrix is its rank, so k
    /// needs no separate input.
    pub fn from_projection(proj: RatMatrix) -> Result<Self, GrassError> {
        if !proj.is_square() {
            return Err(GrassError::NotSquare);
        }
        if !proj.is_symmetric() {
            return Err(GrassError::NotSymmetric);
        }
        if proj.matmul(&proj).expect("square") != proj {
            return Err(GrassError::NotIdempotent);
        }
        let n = proj.rows();
        let trace = proj.trace();
        // symmetric idempotent => trace = rank, an integer in 0..=n
        let k = (0..=n)
            .find(|&k| trace == Rational::from_int(k as i64))
            .expect("trace of a projection is its rank");
        Ok(Self { n, k, proj })
    }

    /// The plane spanned by the given column vectors, which must be
    /// linearly independent. The projection B (B^T B)^-1 B^T does not
    /// depend on the basis choice.
    pub fn span(columns: &[Vec<Rational>]) -> Result<Self, GrassError> {
        if columns.is_empty() {
            return Err(GrassError::EmptyBasis);
        }
        let b = RatMatrix::from_columns(columns.to_vec())?;
        let n = b.rows();
        let k = b.cols();
        let bt = b.transpose();
        let gram_inv = bt
            .matmul(&b)
            .expect("shapes agree")
            .inverse()
            .map_err(|_| GrassError::DependentSpan)?;
        let proj = b.matmul(&gram_inv).expect("shapes agree").matmul(&bt).expect("shapes agree");
        debug_assert!(proj.is_symmetric());
        Ok(Self { n, k, proj })
    }

    /// The line spanned by a single nonzero vector.
    pub fn line_through(direction: &[Rational]) -> Result<Self, GrassError> {
        Self::span(&[direction.to_vec()])
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate_plane(n: usize, axes: &[usize]) -> Result<Self, GrassError> {
        let mut seen = vec![false; n];
        for &a in axes {
            if a >= n {
                return Err(GrassError::DimensionMismatch(format!(
                    "axis {a} out of range for R^{n}"
                )));
            }
            if seen[a] {
                return Err(GrassError::DependentSpan);
            }
            seen[a] = true;
        }
        let mut proj = RatMatrix::zeros(n, n);
        for &a in axes {
            proj.set(a, a, Rational::one());
        }
        Ok(Self { n, k: axes.len(), proj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn projection(&self) -> &RatMatrix {
        &self.proj
    }

    /// The orthogonal complement, an (n-k)-plane.
    pub fn orthogonal_complement(&self) -> Self {
        let proj = RatMatrix::identity(self.n).sub(&self.proj).expect("same shape");
        Self { n: self.n, k: self.n - self.k, proj }
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.n, "vector must live in the ambient space");
        self.proj.mul_vec(v) == v
    }
}

/// Whether a rational matrix names a point of G(n, k): square, symmetric,
/// idempotent, trace k. Fully decidable, no tolerance involved.
pub fn is_grassmann(q: &RatMatrix, k: usize) -> bool {
    matches!(GrassPoint::from_projection(q.clone()), Ok(ref p) if p.k() == k)
}

/// A uniform-ish random k-plane with small integer spanning vectors;
/// deterministic for a fixed generator state. Meant for tests and
/// experiment sampling, not for any particular distribution on G(n, k).
pub fn random_grass(n: usize, k: usize, rng: &mut impl Rng) -> GrassPoint {
    assert!(k >= 1 && k <= n, "need 1 <= k <= n");
    loop {
        let columns: Vec<Vec<Rational>> = (0..k)
            .map(|_| (0..n).map(|_| Rational::from_int(rng.gen_range(-4..=4))).collect())
            .collect();
        let b = RatMatrix::from_columns(columns.clone()).expect("rectangular");
        if b.rank() == k {
            return GrassPoint::span(&columns).expect("independent by rank check");
        }
    }
}

/// Deterministic sampling: the same seed always yields the same plane.
pub fn seeded_grass(n: usize, k: usize, seed: u64) -> GrassPoint {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    random_grass(n, k, &mut rng)
}
