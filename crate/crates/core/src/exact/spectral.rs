//! Spectral quantities of rational matrices: operator norms and extreme
//! singular values, as certified dyadic enclosures or exact comparisons.
//!
//! Everything routes through the characteristic polynomial of the Gram
//! matrix, so no floating point enters any decision.

use std::cmp::Ordering;

use super::dyadic::{sqrt_enclosure, Dyadic, DyadicInterval};
use super::matrix::RatMatrix;
use super::polynomial::{count_roots_above, count_roots_below, RatPolynomial};
use super::rational::Rational;
use super::roots::{isolate_real_roots, RootEnclosure};
use super::ExactError;

/// Square root of a nonnegative root, as an interval of width at most 2^-p.
///
/// The eigenvalue interval is first narrowed to width 2^-(2p+4); since
/// sqrt(a) - sqrt(b) <= sqrt(a - b) for a >= b >= 0, the image interval then
/// fits the budget with room for the endpoint sqrt slack. A root pinned
/// exactly takes the direct path and can come back as a point.
pub fn sqrt_root_enclosure(mut enc: RootEnclosure, p: i64) -> DyadicInterval {
    enc.refine_dyadic(2 * p + 4);
    if let Some(v) = enc.exact_value() {
        return sqrt_enclosure(v, p);
    }
    let lo = if enc.lo().is_negative() { Rational::zero() } else { enc.lo().clone() };
    let lo_iv = sqrt_enclosure(&lo, p + 2);
    let hi_iv = sqrt_enclosure(enc.hi(), p + 2);
    DyadicInterval::new(lo_iv.lo().clone(), hi_iv.hi().clone(), p)
        .expect("sqrt preserves endpoint order")
}

/// Operator norm ||M|| = sqrt(lambda_max(M^T M)), width at most 2^-p.
pub fn op_norm_enclosure(m: &RatMatrix, p: i64) -> DyadicInterval {
    if m.is_zero() {
        return DyadicInterval::point(Dyadic::zero(), p);
    }
    let gram = m.transpose().matmul(m).expect("transpose shapes agree");
    let roots = isolate_real_roots(&gram.char_poly()).expect("characteristic polynomial nonzero");
    let top = roots.into_iter().next_back().expect("real spectrum nonempty");
    sqrt_root_enclosure(top, p)
}

/// Split off the zero eigenvalues: returns (poly / x^j, j) where j is the
/// multiplicity of the root 0.
pub fn strip_zero_root(poly: &RatPolynomial) -> (RatPolynomial, usize) {
    let coeffs = poly.coeffs();
    let j = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    (RatPolynomial::new(coeffs[j..].to_vec()), j)
}

/// Smallest nonzero singular value, width at most 2^-p. The zero matrix has
/// none and is rejected.
pub fn sigma_min_nonzero(m: &RatMatrix, p: i64) -> Result<DyadicInterval, ExactError> {
    if m.is_zero() {
        return Err(ExactError::ZeroMatrix);
    }
    let gram = m.transpose().matmul(m).expect("transpose shapes agree");
    let (nonzero_part, _) = strip_zero_root(&gram.char_poly());
    let roots = isolate_real_roots(&nonzero_part)?;
    let bottom = roots.into_iter().next().expect("nonzero matrix has a positive eigenvalue");
    Ok(sqrt_root_enclosure(bottom, p))
}

/// lambda_max of a symmetric matrix against a rational threshold, decided
/// exactly by Sturm counts.
pub fn compare_largest_eigenvalue(g: &RatMatrix, c: &Rational) -> Ordering {
    assert!(g.is_symmetric(), "spectrum comparison needs a symmetric matrix");
    let sqf = g.char_poly().squarefree_part().expect("characteristic polynomial nonzero");
    if sqf.sign_at(c) == 0 {
        // c is an eigenvalue; the largest one iff nothing lies above it.
        let rest = sqf.divide_root(c).expect("c is a root");
        if rest.is_zero() || rest.degree() == Some(0) {
            return Ordering::Equal;
        }
        let above = count_roots_above(&rest.sturm_chain(), c);
        return if above > 0 { Ordering::Greater } else { Ordering::Equal };
    }
    let above = count_roots_above(&sqf.sturm_chain(), c);
    if above > 0 {
        return Ordering::Greater;
    }
    // no eigenvalue above c and c itself is none: lambda_max < c
    Ordering::Less
}

/// Whether every eigenvalue of a symmetric matrix is >= c, decided exactly.
/// An eigenvalue equal to c passes.
pub fn smallest_eigenvalue_at_least(g: &RatMatrix, c: &Rational) -> bool {
    assert!(g.is_symmetric(), "spectrum comparison needs a symmetric matrix");
    let mut sqf = g.char_poly().squarefree_part().expect("characteristic polynomial nonzero");
    if sqf.sign_at(c) == 0 {
        sqf = sqf.divide_root(c).expect("c is a root");
        if sqf.is_zero() || sqf.degree() == Some(0) {
            return true;
        }
    }
    count_roots_below(&sqf.sturm_chain(), c) == 0
}

/// ||M|| against a rational threshold, exactly.
pub fn compare_op_norm(m: &RatMatrix, q: &Rational) -> Ordering {
    if q.is_negative() {
        return Ordering::Greater;
    }
    if m.is_zero() {
        return if q.is_zero() { Ordering::Equal } else { Ordering::Less };
    }
    let gram = m.transpose().matmul(m).expect("transpose shapes agree");
    compare_largest_eigenvalue(&gram, &q.square())
}

/// sqrt(alpha) + sqrt(beta) against q, exactly, by squaring twice:
/// with t = q^2 - alpha - beta the comparison reduces to 4*alpha*beta vs t^2
/// once t >= 0; t < 0 already decides it.
pub fn compare_sqrt_sum(alpha: &Rational, beta: &Rational, q: &Rational) -> Ordering {
    assert!(!alpha.is_negative() && !beta.is_negative(), "radicands must be nonnegative");
    if q.is_negative() {
        return Ordering::Greater;
    }
    let t = q.square() - alpha - beta;
    if t.is_negative() {
        return Ordering::Greater;
    }
    let lhs = Rational::from_int(4) * alpha * beta;
    lhs.cmp_value(&t.square())
}
