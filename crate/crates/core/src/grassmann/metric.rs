//! Two metrics on G(n, k) and certified ways to evaluate them.
//!
//! `rho` is the operator norm of the difference of projections. `m_dist` is
//! the directed sup-inf distance between unit spheres: how far the worst
//! unit vector of the first plane is from the second plane's sphere. Both
//! come back as dyadic enclosures; `compare_rho` decides thresholds exactly.
//!
//! Each metric has two independent routes: a spectral one through the
//! characteristic polynomial of a Gram matrix, and a grid one that walks
//! dyadic near-unit vectors and pays for its certainty with a Lipschitz
//! padding. They are kept separate so they can be checked against each
//! other.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{GrassError, GrassPoint};
use crate::exact::spectral::{
    compare_op_norm, op_norm_enclosure, sigma_min_nonzero, sqrt_root_enclosure, strip_zero_root,
};
use crate::exact::vecs;
use crate::exact::{
    isolate_real_roots, sqrt_enclosure, Dyadic, DyadicInterval, RatMatrix, RatPolynomial, Rational,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricMethod {
    Spectral,
    Grid,
}

/// A certified metric evaluation: the true value lies in `value`, whose
/// width is at most 2^-precision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricSample {
    pub value: DyadicInterval,
    pub method: MetricMethod,
    pub precision: i64,
}

impl MetricSample {
    fn new(value: DyadicInterval, method: MetricMethod, precision: i64) -> Self {
        debug_assert!(value.width_within(precision), "enclosure wider than advertised");
        Self { value, method, precision }
    }
}

fn check_same_ambient(a: &GrassPoint, b: &GrassPoint) -> Result<(), GrassError> {
    if a.n() != b.n() {
        return Err(GrassError::DimensionMismatch(format!(
            "points live in R^{} and R^{}",
            a.n(),
            b.n()
        )));
    }
    Ok(())
}

fn check_same_shape(a: &GrassPoint, b: &GrassPoint) -> Result<(), GrassError> {
    check_same_ambient(a, b)?;
    if a.k() != b.k() {
        return Err(GrassError::DimensionMismatch(format!(
            "planes have dimensions {} and {}",
            a.k(),
            b.k()
        )));
    }
    Ok(())
}

/// rho^2 as an exact rational, available when both planes are lines or
/// hyperplanes. The difference of the projections is then traceless
/// symmetric of rank at most 2, so its eigenvalues are a plus-minus pair
/// and ||D||^2 = ||D||_F^2 / 2.
pub fn rho_squared_single_angle(a: &GrassPoint, b: &GrassPoint) -> Option<Rational> {
    if a.n() != b.n() || a.k() != b.k() {
        return None;
    }
    if a.k() != 1 && a.k() + 1 != a.n() {
        return None;
    }
    let d = a.projection().sub(b.projection()).expect("same shape");
    Some(d.frobenius_sq() / Rational::from_int(2))
}

/// rho(a, b) = ||P_a - P_b||, width at most 2^-p. Single-angle pairs take
/// the exact rational route; everything else goes through the spectrum of
/// the Gram matrix.
pub fn rho(a: &GrassPoint, b: &GrassPoint, p: i64) -> Result<MetricSample, GrassError> {
    check_same_shape(a, b)?;
    if let Some(r2) = rho_squared_single_angle(a, b) {
        return Ok(MetricSample::new(sqrt_enclosure(&r2, p), MetricMethod::Spectral, p));
    }
    let d = a.projection().sub(b.projection()).expect("same shape");
    Ok(MetricSample::new(op_norm_enclosure(&d, p), MetricMethod::Spectral, p))
}

/// rho via the spectral route unconditionally, without the single-angle
/// shortcut. Used to cross-check the shortcut.
pub fn rho_spectral(a: &GrassPoint, b: &GrassPoint, p: i64) -> Result<MetricSample, GrassError> {
    check_same_shape(a, b)?;
    let d = a.projection().sub(b.projection()).expect("same shape");
    Ok(MetricSample::new(op_norm_enclosure(&d, p), MetricMethod::Spectral, p))
}

/// rho(a, b) against a rational threshold, decided exactly.
pub fn compare_rho(a: &GrassPoint, b: &GrassPoint, q: &Rational) -> Result<Ordering, GrassError> {
    check_same_shape(a, b)?;
    if let Some(r2) = rho_squared_single_angle(a, b) {
        if q.is_negative() {
            return Ok(Ordering::Greater);
        }
        return Ok(r2.cmp_value(&q.square()));
    }
    let d = a.projection().sub(b.projection()).expect("same shape");
    Ok(compare_op_norm(&d, q))
}

/// Characteristic polynomial of P_a P_b P_a with the zero eigenvalues
/// stripped, plus the kernel excess j: the dimension of { v in a : P_b v = 0 }.
/// j > 0 is exactly the case where some unit vector of `a` is orthogonal to
/// all of `b`, which pins the sup-inf distance at sqrt(2).
fn restriction_spectrum(
    a: &GrassPoint,
    b: &GrassPoint,
) -> Result<(RatPolynomial, usize), GrassError> {
    check_same_ambient(a, b)?;
    if a.k() == 0 || b.k() == 0 {
        return Err(GrassError::TrivialSubspace);
    }
    let t = a
        .projection()
        .matmul(b.projection())
        .expect("same shape")
        .matmul(a.projection())
        .expect("same shape");
    let (nonzero, zero_mult) = strip_zero_root(&t.char_poly());
    // T vanishes on the complement of a, contributing n - k zeros; any
    // excess lives inside a.
    let j = zero_mult - (a.n() - a.k());
    Ok((nonzero, j))
}

/// Whether some unit vector of `a` is orthogonal to the whole of `b`
/// (equivalently m_dist(a, b) = sqrt(2)), decided exactly.
pub fn is_perpendicular_reach(a: &GrassPoint, b: &GrassPoint) -> Result<bool, GrassError> {
    Ok(restriction_spectrum(a, b)?.1 > 0)
}

/// Directed sphere distance m(a, b) = sup over unit v in a of the distance
/// from v to the unit sphere of b, width at most 2^-p. The plane dimensions
/// may differ.
///
/// For unit v the nearest point of b's sphere is P_b v normalized, at
/// distance sqrt(2 - 2 |P_b v|), so the extremal overlap sigma =
/// min |P_b v| on a's sphere gives m = sqrt(2 - 2 sigma). sigma^2 is the
/// smallest restriction eigenvalue of P_a P_b P_a on a. When some unit
/// vector of a projects to zero the inf is attained by any unit vector of
/// b at distance sqrt(2), which is returned directly.
pub fn m_dist(a: &GrassPoint, b: &GrassPoint, p: i64) -> Result<MetricSample, GrassError> {
    let (nonzero, j) = restriction_spectrum(a, b)?;
    if j > 0 {
        let iv = sqrt_enclosure(&Rational::from_int(2), p);
        return Ok(MetricSample::new(iv, MetricMethod::Spectral, p));
    }
    let roots = isolate_real_roots(&nonzero)?;
    let bottom = roots.into_iter().next().expect("restriction has a positive eigenvalue");
    // sigma to width 2^-(2p+4): m = sqrt(2 - 2 sigma) then lands within
    // 2^-(p+1) before the outer sqrt slack of 2^-(p+1).
    let sigma = sqrt_root_enclosure(bottom, 2 * p + 4);
    let two = Rational::from_int(2);
    let m2_lo = {
        let v = &two - &(&two * &sigma.hi().to_rational());
        if v.is_negative() {
            Rational::zero()
        } else {
            v
        }
    };
    // sigma.lo() <= sigma <= 1, so this stays nonnegative
    let m2_hi = &two - &(&two * &sigma.lo().to_rational());
    let lo_iv = sqrt_enclosure(&m2_lo, p + 2);
    let hi_iv = sqrt_enclosure(&m2_hi, p + 2);
    let iv = DyadicInterval::new(lo_iv.lo().clone(), hi_iv.hi().clone(), p)
        .expect("sqrt preserves endpoint order");
    Ok(MetricSample::new(iv, MetricMethod::Spectral, p))
}

/// Certify C^-1 rho <= m <= C rho by shrinking both enclosures until the
/// inequalities are decided. Errors out if still inconclusive at max_p.
pub fn certify_equivalent(
    a: &GrassPoint,
    b: &GrassPoint,
    c: &Rational,
    max_p: i64,
) -> Result<bool, GrassError> {
    assert!(c.is_positive(), "equivalence constant must be positive");
    let mut p = 16i64.min(max_p);
    loop {
        let r = rho(a, b, p)?.value;
        let m = m_dist(a, b, p)?.value;
        let (r_lo, r_hi) = (r.lo().to_rational(), r.hi().to_rational());
        let (m_lo, m_hi) = (m.lo().to_rational(), m.hi().to_rational());
        if r_hi <= c * &m_lo && m_hi <= c * &r_lo {
            return Ok(true);
        }
        if r_lo > c * &m_hi || m_lo > c * &r_hi {
            return Ok(false);
        }
        if p >= max_p {
            return Err(GrassError::Inconclusive(p));
        }
        p = (2 * p).min(max_p);
    }
}

/// Conditioning check: a perturbation of a spanning set by less than eps
/// moves the spanned plane by at most n * eps / sigma_min in the sphere
/// distance.
/// Returns whether the certified upper bound of m(V, V') clears the bound's
/// certified lower estimate; refines until it can tell (or max_p).
pub fn perturbation_bound_check(
    basis: &[Vec<Rational>],
    perturbed: &[Vec<Rational>],
    eps: &Rational,
    max_p: i64,
) -> Result<bool, GrassError> {
    if basis.len() != perturbed.len() || basis.is_empty() {
        return Err(GrassError::DimensionMismatch(
            "perturbation check needs matching nonempty spanning sets".into(),
        ));
    }
    if !eps.is_positive() {
        return Err(GrassError::DimensionMismatch("eps must be positive".into()));
    }
    let eps_sq = eps.square();
    for (b, q) in basis.iter().zip(perturbed) {
        if vecs::norm_sq(&vecs::sub(b, q)) >= eps_sq {
            return Err(GrassError::DimensionMismatch(format!("perturbation exceeds eps = {eps}")));
        }
    }
    let v = GrassPoint::span(basis)?;
    let w = GrassPoint::span(perturbed)?;
    let n = Rational::from_int(v.n() as i64);
    let cols = RatMatrix::from_columns(basis.to_vec())?;
    let mut p = 24i64.min(max_p);
    loop {
        let sigma = sigma_min_nonzero(&cols, p)?;
        let m = m_dist(&v, &w, p)?.value;
        // certified: m_true <= m_hi and n eps / sigma_hi <= bound_true
        let bound_lo = &n * eps / sigma.hi().to_rational();
        if m.hi().to_rational() <= bound_lo {
            return Ok(true);
        }
        // certified violation: even the loosest reading of the bound is
        // below the tightest reading of the distance
        let bound_hi = &n * eps / sigma.lo().to_rational();
        if m.lo().to_rational() > bound_hi {
            return Ok(false);
        }
        if p >= max_p {
            return Err(GrassError::Inconclusive(p));
        }
        p = (2 * p).min(max_p);
    }
}

/// Integer model of a rational matrix: (N, d) with M = N / d, for the grid
/// walk's overflow-free inner loop. None when the common denominator
/// exceeds the cap.
fn integer_model(p: &RatMatrix, cap: i128) -> Option<(Vec<i128>, i128)> {
    let mut d = BigInt::from(1);
    for i in 0..p.rows() {
        for j in 0..p.cols() {
            d = d.lcm(p.get(i, j).denom());
        }
    }
    let d_small = d.to_i128().filter(|v| *v <= cap)?;
    let mut entries = Vec::with_capacity(p.rows() * p.cols());
    for i in 0..p.rows() {
        for j in 0..p.cols() {
            let e = p.get(i, j);
            let scaled = e.numer() * (&d / e.denom());
            entries.push(scaled.to_i128().expect("entry bounded by denominator"));
        }
    }
    Some((entries, d_small))
}

fn isqrt(x: i64) -> i64 {
    debug_assert!(x >= 0);
    let mut r = (x as f64).sqrt() as i64;
    while r > 0 && r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Shared geometry of the dyadic grid walks: points are g / 2^s for integer
/// vectors g with |g| in the shell [2^s - 2^depth, 2^s + 2^depth], i.e.
/// | |x| - 1 | <= delta'^2 for delta' = 2^-depth and spacing delta'^3.
struct GridShell {
    n: usize,
    s: i64,
    shell_lo: i64,
    shell_hi: i64,
    coord_bound: i64,
}

impl GridShell {
    fn new(n: usize, depth: u32) -> Result<Self, GrassError> {
        assert!(depth >= 1, "grid depth must be at least 1");
        let i = depth as i64;
        if n as i64 > 1 << (2 * i) {
            return Err(GrassError::GridTooLarge(format!(
                "depth {depth} too coarse for R^{n}: rounding slack would exceed the shell"
            )));
        }
        let s = 3 * i;
        let coord_bound = (1i64 << s) + (1i64 << i);
        let side = 2 * coord_bound + 1;
        if (side as f64).powi(n as i32) > 2e9 {
            return Err(GrassError::GridTooLarge(format!("{side}^{n} candidate points")));
        }
        let inner = (1i64 << s) - (1i64 << i);
        Ok(Self { n, s, shell_lo: inner * inner, shell_hi: coord_bound * coord_bound, coord_bound })
    }

    fn walk(&self, visit: &mut impl FnMut(&[i64], i64)) {
        let mut g = vec![0i64; self.n];
        self.walk_rec(0, 0, &mut g, visit);
    }

    fn walk_rec(&self, idx: usize, sumsq: i64, g: &mut [i64], visit: &mut impl FnMut(&[i64], i64)) {
        if idx == self.n {
            if sumsq >= self.shell_lo {
                visit(g, sumsq);
            }
            return;
        }
        let bound = isqrt(self.shell_hi - sumsq).min(self.coord_bound);
        for c in -bound..=bound {
            g[idx] = c;
            self.walk_rec(idx + 1, sumsq + c * c, g, visit);
        }
        g[idx] = 0;
    }
}

/// rho by certified grid search: |(P_a - P_b) x| is maximized over dyadic
/// near-unit vectors, exactly (the maximand is sqrt of a rational that is
/// monotone in the integer numerator, so the walk compares integers and a
/// single square root is taken at the end).
///
/// Padding: x -> |(P_a - P_b) x| is Lipschitz with constant ||P_a - P_b||
/// <= 2. Rounding a unit vector onto the grid moves it by at most
/// (sqrt(n)/2) delta'^3 <= delta'^2 / 2 and keeps it in the shell, so the
/// true supremum is at most the grid maximum plus delta'^2; conversely a
/// shell point is within delta'^2 of its normalization, so the grid
/// maximum overshoots by at most 2 delta'^2.
pub fn rho_grid(a: &GrassPoint, b: &GrassPoint, depth: u32) -> Result<MetricSample, GrassError> {
    check_same_shape(a, b)?;
    let shell = GridShell::new(a.n(), depth)?;
    let diff = a.projection().sub(b.projection()).expect("same shape");
    let cap = 1i128 << 32;
    let (nd, d) = integer_model(&diff, cap)
        .ok_or_else(|| GrassError::GridTooLarge("projection denominators exceed 2^32".into()))?;
    let n = shell.n;
    let mut best: i128 = -1;
    shell.walk(&mut |g, _sumsq| {
        let mut num: i128 = 0;
        for r in 0..n {
            let mut t: i128 = 0;
            for c in 0..n {
                t += nd[r * n + c] * g[c] as i128;
            }
            num += t * t;
        }
        if num > best {
            best = num;
        }
    });
    debug_assert!(best >= 0, "shell is never empty");
    // best / (d^2 4^s) = max |D x|^2 over the grid
    let i = depth as i64;
    let max_sq = Rational::new(best, d * d).expect("d > 0") * Rational::pow2(-2 * shell.s);
    let fprec = 2 * i + 8;
    let root = sqrt_enclosure(&max_sq, fprec);
    let pad = Dyadic::pow2(-2 * i);
    let lo = root.lo() - &(&pad + &pad);
    let lo = if lo.is_negative() { Dyadic::zero() } else { lo };
    let hi = root.hi() + &pad;
    let prec = (2 * i - 2).max(0);
    let iv = DyadicInterval::new(lo, hi, prec).expect("padding keeps order");
    Ok(MetricSample::new(iv, MetricMethod::Grid, prec))
}

struct SphereDistanceModel {
    shell: GridShell,
    n1: Vec<i128>,
    d1: i128,
    n2: Vec<i128>,
    d2: i128,
    v1_tol: i128, // |d1 g - N1 g|^2 <= v1_tol keeps x within delta'^2 of a
    fprec: i64,
}

impl SphereDistanceModel {
    /// Evaluate one accepted shell point and fold its sphere-distance
    /// enclosure into the running maxima.
    fn process(&self, g: &[i64], sumsq: i64, acc: &mut Option<(Dyadic, Dyadic)>) {
        let n = self.shell.n;
        let mut dist_num: i128 = 0;
        for r in 0..n {
            let mut t: i128 = self.d1 * g[r] as i128;
            for c in 0..n {
                t -= self.n1[r * n + c] * g[c] as i128;
            }
            dist_num += t * t;
        }
        if dist_num > self.v1_tol {
            return;
        }
        // f(x)^2 = |x|^2 - 2 |P_b x| + 1 with x = g / 2^s
        let mut b_num: i128 = 0;
        for r in 0..n {
            let mut t: i128 = 0;
            for c in 0..n {
                t += self.n2[r * n + c] * g[c] as i128;
            }
            b_num += t * t;
        }
        let beta = Rational::new(b_num, self.d2 * self.d2).expect("nonzero denominator")
            * Rational::pow2(-2 * self.shell.s);
        let xsq = Rational::from_int(sumsq) * Rational::pow2(-2 * self.shell.s);
        let c = xsq + Rational::one();
        let overlap = sqrt_enclosure(&beta, self.fprec);
        let two = Rational::from_int(2);
        let f2_lo = {
            let v = &c - &(&two * &overlap.hi().to_rational());
            if v.is_negative() {
                Rational::zero()
            } else {
                v
            }
        };
        let f2_hi = &c - &(&two * &overlap.lo().to_rational());
        let f_lo = sqrt_enclosure(&f2_lo, self.fprec).lo().clone();
        let f_hi = sqrt_enclosure(&f2_hi, self.fprec).hi().clone();
        match acc {
            None => *acc = Some((f_lo, f_hi)),
            Some((lo, hi)) => {
                if f_lo > *lo {
                    *lo = f_lo;
                }
                if f_hi > *hi {
                    *hi = f_hi;
                }
            }
        }
    }
}

/// m(a, b) by certified grid search instead of the spectrum: enumerate the
/// shell grid within delta'^2 of the plane a, take the largest distance to
/// b's sphere, and pad by the Lipschitz slack.
///
/// Soundness of the padding: distances to b's sphere are 1-Lipschitz in
/// the base point. Rounding any unit v in a onto the grid moves it by at
/// most (sqrt(n)/2) delta'^3 <= delta'^2 / 2, and the rounded point passes
/// both shell and proximity tests, so the true supremum is at most the
/// grid maximum plus delta'^2. Conversely every accepted grid point is
/// within 3 delta'^2 of some unit vector of a (delta'^2 to the plane, then
/// at most 2 delta'^2 of renormalization), so the grid maximum overshoots
/// the supremum by at most 3 delta'^2.
pub fn m_dist_grid(a: &GrassPoint, b: &GrassPoint, depth: u32) -> Result<MetricSample, GrassError> {
    check_same_ambient(a, b)?;
    if a.k() == 0 || b.k() == 0 {
        return Err(GrassError::TrivialSubspace);
    }
    let shell = GridShell::new(a.n(), depth)?;
    let i = depth as i64;
    let cap = 1i128 << 32;
    let (n1, d1) = integer_model(a.projection(), cap)
        .ok_or_else(|| GrassError::GridTooLarge("projection denominators exceed 2^32".into()))?;
    let (n2, d2) = integer_model(b.projection(), cap)
        .ok_or_else(|| GrassError::GridTooLarge("projection denominators exceed 2^32".into()))?;
    let model = SphereDistanceModel {
        shell,
        v1_tol: (1i128 << (2 * i)) * d1 * d1,
        n1,
        d1,
        n2,
        d2,
        fprec: 4 * i + 12,
    };
    let mut acc = None;
    model.shell.walk(&mut |g, sumsq| model.process(g, sumsq, &mut acc));
    let (f_lo, f_hi) = acc.expect("unit sphere of a nonzero plane meets the grid shell");
    let pad_hi = Dyadic::pow2(-2 * i);
    let pad_lo = &(&pad_hi + &pad_hi) + &pad_hi;
    let lo = &f_lo - &pad_lo;
    let lo = if lo.is_negative() { Dyadic::zero() } else { lo };
    let hi = &f_hi + &pad_hi;
    let prec = (2 * i - 3).max(0);
    let iv = DyadicInterval::new(lo, hi, prec).expect("padding keeps order");
    Ok(MetricSample::new(iv, MetricMethod::Grid, prec))
}

/// The grid depth the density schedule asks for at target resolution
/// delta: the largest power of 1/2 strictly below min(delta / n, 1 / (8n)).
/// Fine targets quickly make the walk infeasible; the explicit-depth entry
/// points exist for that reason.
pub fn schedule_depth(delta: &Rational, n: usize) -> u32 {
    assert!(delta.is_positive(), "target resolution must be positive");
    let n_rat = Rational::from_int(n as i64);
    let cap = Rational::new(1, 8 * n as i64).expect("n > 0");
    let target = {
        let scaled = delta / &n_rat;
        if scaled < cap {
            scaled
        } else {
            cap
        }
    };
    let mut d = 1u32;
    while Rational::pow2(-(d as i64)) >= target {
        d += 1;
    }
    d
}
