//! Certified isolation and refinement of real polynomial roots.
//!
//! Every distinct real root is boxed in a rational interval that contains
//! exactly one root, established by Sturm counts rather than floating point.
//! Refinement bisects with exact sign evaluation, so an interval either
//! shrinks below any requested width or collapses onto a root it hits
//! exactly.

use super::polynomial::{count_roots_between, RatPolynomial};
use super::rational::Rational;
use super::ExactError;

/// An interval around a single root of a squarefree polynomial.
///
/// Invariant: either `lo == hi` and the value is the root, or `lo < hi`,
/// neither endpoint is a root, and exactly one root lies strictly inside.
#[derive(Debug, Clone)]
pub struct RootEnclosure {
    poly: RatPolynomial,
    lo: Rational,
    hi: Rational,
}

impl RootEnclosure {
    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// The root itself, when it has been pinned down exactly.
    pub fn exact_value(&self) -> Option<&Rational> {
        if self.is_exact() {
            Some(&self.lo)
        } else {
            None
        }
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn to_f64_mid(&self) -> f64 {
        ((&self.lo + &self.hi) / Rational::from_int(2)).to_f64()
    }

    /// Bisect until the width is at most `target` or the root is hit
    /// exactly. Signs are evaluated exactly, so the enclosure invariant is
    /// preserved at every step.
    pub fn refine(&mut self, target: &Rational) {
        assert!(target.is_positive(), "refinement target must be positive");
        let two = Rational::from_int(2);
        while !self.is_exact() && self.width() > *target {
            let mid = (&self.lo + &self.hi) / &two;
            match self.poly.sign_at(&mid) {
                0 => {
                    self.lo = mid.clone();
                    self.hi = mid;
                }
                s if s == self.poly.sign_at(&self.lo) => self.lo = mid,
                _ => self.hi = mid,
            }
        }
    }

    /// Refine to width at most 2^-p.
    pub fn refine_dyadic(&mut self, p: i64) {
        self.refine(&Rational::pow2(-p));
    }
}

/// A split point in (a, b) where `poly` does not vanish. Candidates walk a
/// dyadic grid from the center outward; a polynomial has finitely many
/// roots, so some candidate at a fine enough level survives.
fn nonroot_split(poly: &RatPolynomial, a: &Rational, b: &Rational) -> Rational {
    let span = b - a;
    for level in 1..64i64 {
        let denom = Rational::pow2(level);
        let half = 1i64 << (level - 1);
        let mut odds: Vec<i64> = (1..(1i64 << level)).step_by(2).collect();
        odds.sort_by_key(|j| (j - half).abs());
        for j in odds {
            let m = a + &(&span * &(Rational::from_int(j) / &denom));
            if poly.sign_at(&m) != 0 {
                return m;
            }
        }
    }
    unreachable!("ran out of split candidates for a finite root set")
}

fn subdivide(
    sqf: &RatPolynomial,
    chain: &[RatPolynomial],
    a: &Rational,
    b: &Rational,
    out: &mut Vec<RootEnclosure>,
) {
    match count_roots_between(chain, a, b) {
        0 => {}
        1 => out.push(RootEnclosure { poly: sqf.clone(), lo: a.clone(), hi: b.clone() }),
        _ => {
            let m = nonroot_split(sqf, a, b);
            subdivide(sqf, chain, a, &m, out);
            subdivide(sqf, chain, &m, b, out);
        }
    }
}

/// Enclosures of all distinct real roots, in increasing order. Multiple
/// roots are collapsed first, so each enclosure holds a simple root of the
/// squarefree part.
pub fn isolate_real_roots(poly: &RatPolynomial) -> Result<Vec<RootEnclosure>, ExactError> {
    if poly.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    let sqf = poly.squarefree_part()?;
    if sqf.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let chain = sqf.sturm_chain();
    let bound = sqf.root_bound();
    let mut out = Vec::new();
    subdivide(&sqf, &chain, &-&bound, &bound, &mut out);
    Ok(out)
}

/// The (lo, hi) endpoints of each root enclosure, refined to width at most
/// 2^-p unless hit exactly first.
pub fn isolate_real_root_intervals(
    poly: &RatPolynomial,
    p: i64,
) -> Result<Vec<(Rational, Rational)>, ExactError> {
    let mut roots = isolate_real_roots(poly)?;
    for r in &mut roots {
        r.refine_dyadic(p);
    }
    Ok(roots.into_iter().map(|r| (r.lo, r.hi)).collect())
}

/// Multiplicity of q as a root (0 when q is not a root).
pub fn rational_root_multiplicity(poly: &RatPolynomial, q: &Rational) -> usize {
    let mut cur = poly.clone();
    let mut mult = 0;
    while let Some(next) = cur.divide_root(q) {
        mult += 1;
        cur = next;
    }
    mult
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn p(coeffs: &[i64]) -> RatPolynomial {
        RatPolynomial::from_ints(coeffs)
    }

    #[test]
    fn sqrt_two_bisection_digits() {
        // x^2 - 2: roots -sqrt(2), sqrt(2); digits frozen from a separate
        // bisection run: sqrt(2) = 1.41421356...
        let mut roots = isolate_real_roots(&p(&[-2, 0, 1])).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &mut roots {
            r.refine_dyadic(40);
        }
        let hi_root = &roots[1];
        assert!(hi_root.lo() > &rat(14142135623, 10_000_000_000));
        assert!(hi_root.hi() < &rat(14142135624, 10_000_000_000));
        assert!(hi_root.lo().square() < rat(2, 1));
        assert!(hi_root.hi().square() > rat(2, 1));
        // symmetry of the negative root
        assert!(roots[0].hi() < &rat(-14142135623, 10_000_000_000));
    }

    #[test]
    fn quadratic_formula_digits() {
        // x^2 - 3x + 1: roots (3 +- sqrt(5))/2 by the quadratic formula,
        // sqrt(5) = 2.2360679775 gives 0.38196601125 and 2.61803398875.
        let mut roots = isolate_real_roots(&p(&[1, -3, 1])).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &mut roots {
            r.refine_dyadic(40);
        }
        assert!(roots[0].lo() > &rat(38196601124, 100_000_000_000));
        assert!(roots[0].hi() < &rat(38196601126, 100_000_000_000));
        assert!(roots[1].lo() > &rat(261803398874, 100_000_000_000));
        assert!(roots[1].hi() < &rat(261803398876, 100_000_000_000));
    }

    #[test]
    fn no_real_roots() {
        let roots = isolate_real_roots(&p(&[1, 0, 1])).unwrap();
        assert!(roots.is_empty());
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(
            isolate_real_roots(&RatPolynomial::zero()).unwrap_err(),
            ExactError::ZeroPolynomial
        );
    }

    #[test]
    fn multiple_root_collapsed_and_counted() {
        // (x-1)^2 (x+2) = x^3 - 3x + 2
        let f = p(&[2, -3, 0, 1]);
        assert_eq!(rational_root_multiplicity(&f, &rat(1, 1)), 2);
        assert_eq!(rational_root_multiplicity(&f, &rat(-2, 1)), 1);
        assert_eq!(rational_root_multiplicity(&f, &rat(3, 1)), 0);

        let mut roots = isolate_real_roots(&f).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &mut roots {
            r.refine_dyadic(20);
        }
        assert!(roots[0].contains(&rat(-2, 1)));
        assert!(roots[1].contains(&rat(1, 1)));
    }

    #[test]
    fn exact_hit_collapses_to_point() {
        // x - 1 over the bound interval (-2, 2): the second bisection
        // midpoint lands on the root.
        let mut roots = isolate_real_roots(&p(&[-1, 1])).unwrap();
        assert_eq!(roots.len(), 1);
        roots[0].refine_dyadic(10);
        assert!(roots[0].is_exact());
        assert_eq!(roots[0].exact_value(), Some(&rat(1, 1)));
    }

    #[test]
    fn split_point_avoids_root_at_center() {
        // x(x-1)(x+1): the midpoint of (-2, 2) is the root 0, forcing the
        // splitter to move off center.
        let f = p(&[0, -1, 0, 1]);
        let mut roots = isolate_real_roots(&f).unwrap();
        assert_eq!(roots.len(), 3);
        for r in &mut roots {
            r.refine_dyadic(20);
        }
        assert!(roots[0].contains(&rat(-1, 1)));
        assert!(roots[1].contains(&rat(0, 1)));
        assert!(roots[2].contains(&rat(1, 1)));
        assert!(roots[0].hi() < roots[1].lo());
        assert!(roots[1].hi() < roots[2].lo());
    }

    #[test]
    fn interval_wrapper_orders_and_refines() {
        let ivs = isolate_real_root_intervals(&p(&[-2, 0, 1]), 20).unwrap();
        assert_eq!(ivs.len(), 2);
        assert!(ivs[0].1 < ivs[1].0);
        for (lo, hi) in &ivs {
            assert!(hi - lo <= Rational::pow2(-20));
        }
    }
}
