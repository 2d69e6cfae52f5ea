//! Small helpers for rational vectors (`Vec<Rational>` / `&[Rational]`).

use super::rational::Rational;

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    assert_eq!(a.len(), b.len(), "dot product of unequal lengths");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    assert_eq!(a.len(), b.len(), "difference of unequal lengths");
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    assert_eq!(a.len(), b.len(), "sum of unequal lengths");
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[Rational], c: &Rational) -> Vec<Rational> {
    a.iter().map(|x| x * c).collect()
}

pub fn norm_sq(a: &[Rational]) -> Rational {
    a.iter().map(|x| x.square()).sum()
}

pub fn is_zero(a: &[Rational]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn zeros(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

/// Standard basis vector e_i in dimension n.
pub fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = zeros(n);
    v[i] = Rational::one();
    v
}
