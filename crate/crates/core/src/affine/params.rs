//! Graph parameterizations: lines as x1 -> (x1, a x1 + b) and hyperplanes
//! as x_n = a . (x1, .., x_{n-1}) + b. Planes perpendicular to the graph
//! axis have no such form and convert to typed errors; callers are
//! expected to rotate coordinates instead.

use serde::{Deserialize, Serialize};

use super::{plane_from_points, AffineError, AffinePlane};
use crate::exact::{vecs, Rational};

/// A non-vertical line in R^n: x1 |-> (x1, a1 x1 + b1, .., a_{n-1} x1 + b_{n-1}).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineParams {
    pub slopes: Vec<Rational>,
    pub intercepts: Vec<Rational>,
}

/// A non-vertical hyperplane in R^n: x_n = a . (x1, .., x_{n-1}) + b.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperplaneParams {
    pub a: Vec<Rational>,
    pub b: Rational,
}

/// The affine line a parameter pair names, built from the two graph points
/// at x1 = 0 and x1 = 1.
pub fn line_to_affine(lp: &LineParams) -> Result<AffinePlane, AffineError> {
    if lp.slopes.len() != lp.intercepts.len() {
        return Err(AffineError::DimensionMismatch(format!(
            "{} slopes vs {} intercepts",
            lp.slopes.len(),
            lp.intercepts.len()
        )));
    }
    if lp.slopes.is_empty() {
        return Err(AffineError::DimensionMismatch("need ambient dimension at least 2".into()));
    }
    let mut p0 = vec![Rational::zero()];
    p0.extend(lp.intercepts.iter().cloned());
    let mut p1 = vec![Rational::one()];
    p1.extend(lp.slopes.iter().zip(&lp.intercepts).map(|(a, b)| a + b));
    plane_from_points(&[p0, p1])
}

/// Graph parameters of an affine line, when the line is a graph over x1.
pub fn affine_to_line(p: &AffinePlane) -> Result<LineParams, AffineError> {
    if p.k() != 1 {
        return Err(AffineError::DimensionMismatch(format!(
            "expected a line, got a {}-plane",
            p.k()
        )));
    }
    // the direction is vertical iff e1 projects to zero
    let d = p.direction().projection().col(0);
    if vecs::is_zero(&d) {
        return Err(AffineError::VerticalLine);
    }
    // d[0] = |P e1|^2 > 0 here
    let slopes: Vec<Rational> = d[1..].iter().map(|c| c / &d[0]).collect();
    let t = p.translation();
    // walk along the line to the point with x1 = 0
    let s = -(&t[0] / &d[0]);
    let at_zero = vecs::add(&t, &vecs::scale(&d, &s));
    debug_assert!(at_zero[0].is_zero());
    Ok(LineParams { slopes, intercepts: at_zero[1..].to_vec() })
}

/// The affine hyperplane a parameter pair names, built from the n graph
/// points over 0, e1, .., e_{n-1}.
pub fn hyperplane_to_affine(hp: &HyperplaneParams) -> Result<AffinePlane, AffineError> {
    let n = hp.a.len() + 1;
    if hp.a.is_empty() {
        return Err(AffineError::DimensionMismatch("need ambient dimension at least 2".into()));
    }
    let mut points = Vec::with_capacity(n);
    let mut base = vecs::zeros(n);
    base[n - 1] = hp.b.clone();
    points.push(base);
    for i in 0..n - 1 {
        let mut q = vecs::zeros(n);
        q[i] = Rational::one();
        q[n - 1] = &hp.a[i] + &hp.b;
        points.push(q);
    }
    plane_from_points(&points)
}

/// Graph parameters of an affine hyperplane, when it is a graph over the
/// first n-1 coordinates.
pub fn affine_to_hyperplane(p: &AffinePlane) -> Result<HyperplaneParams, AffineError> {
    let n = p.n();
    if p.k() + 1 != n {
        return Err(AffineError::DimensionMismatch(format!(
            "expected a hyperplane in R^{}, got a {}-plane",
            n,
            p.k()
        )));
    }
    let normal = &p.basis().vectors()[0];
    let last = &normal[n - 1];
    if last.is_zero() {
        return Err(AffineError::VerticalHyperplane);
    }
    let a: Vec<Rational> = normal[..n - 1].iter().map(|u| -(u / last)).collect();
    let b = vecs::dot(normal, &p.translation()) / last;
    Ok(HyperplaneParams { a, b })
}
