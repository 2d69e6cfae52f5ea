//! Univariate polynomials over the rationals, with the division, gcd, and
//! Sturm-chain operations needed for exact real root counting.

use std::fmt;

use super::rational::Rational;
use super::ExactError;

/// Coefficients ascending by degree; the vector never ends in a zero, and
/// the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq)]
pub struct RatPolynomial {
    coeffs: Vec<Rational>,
}

impl RatPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn from_ints(ascending: &[i64]) -> Self {
        Self::new(ascending.iter().map(|&c| Rational::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> i32 {
        self.eval(x).signum()
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &Rational::from_int(i as i64))
            .collect();
        Self::new(coeffs)
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_default();
            let b = other.coeffs.get(i).cloned().unwrap_or_default();
            out.push(a + b);
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = l.recip().expect("leading coefficient nonzero");
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division: self = q*d + r with deg r < deg d.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), ExactError> {
        if d.is_zero() {
            return Err(ExactError::ZeroPolynomial);
        }
        let dd = d.degree().unwrap();
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let factor = rem.last().unwrap() / &lead;
            if !factor.is_zero() {
                for i in 0..dd {
                    let sub = &factor * &d.coeffs[i];
                    rem[k + i] -= &sub;
                }
            }
            rem.pop();
            quo[k] = factor;
        }
        Ok((Self::new(quo), Self::new(rem)))
    }

    /// Monic gcd via Euclid's algorithm.
    pub fn gcd_monic(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// self / gcd(self, self'): same root set, all roots simple.
    pub fn squarefree_part(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::ZeroPolynomial);
        }
        if self.degree() == Some(0) {
            return Ok(self.monic());
        }
        let g = self.gcd_monic(&self.derivative());
        let (q, r) = self.div_rem(&g)?;
        debug_assert!(r.is_zero());
        Ok(q.monic())
    }

    /// If q is a root, the exact quotient by (x - q); otherwise None.
    pub fn divide_root(&self, q: &Rational) -> Option<Self> {
        if self.is_zero() || !self.eval(q).is_zero() {
            return None;
        }
        // synthetic division, top down
        let mut out = vec![Rational::zero(); self.coeffs.len() - 1];
        let mut carry = Rational::zero();
        for i in (1..self.coeffs.len()).rev() {
            carry = &self.coeffs[i] + &(&carry * q);
            out[i - 1] = carry.clone();
        }
        debug_assert!((&self.coeffs[0] + &(carry * q)).is_zero());
        Some(Self::new(out))
    }

    /// Strict bound B: every real root satisfies |root| < B.
    pub fn root_bound(&self) -> Rational {
        let lead = self.leading().expect("nonzero polynomial").abs();
        let mut m = Rational::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let ratio = c.abs() / &lead;
            if ratio > m {
                m = ratio;
            }
        }
        m + Rational::one()
    }

    /// Sturm chain of a squarefree polynomial: p, p', then negated
    /// remainders until a (nonzero) constant.
    pub fn sturm_chain(&self) -> Vec<Self> {
        let mut chain = vec![self.clone(), self.derivative()];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            let r = chain[n - 2].div_rem(&chain[n - 1]).expect("nonzero divisor").1;
            chain.push(r.neg());
        }
        chain.pop(); // drop trailing zero
        chain
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

pub fn variations_at(chain: &[RatPolynomial], x: &Rational) -> usize {
    variations(chain.iter().map(|p| p.sign_at(x)))
}

pub fn variations_at_pos_inf(chain: &[RatPolynomial]) -> usize {
    variations(chain.iter().map(|p| p.leading().map_or(0, |l| l.signum())))
}

pub fn variations_at_neg_inf(chain: &[RatPolynomial]) -> usize {
    variations(chain.iter().map(|p| {
        let s = p.leading().map_or(0, |l| l.signum());
        match p.degree() {
            Some(d) if d % 2 == 1 => -s,
            _ => s,
        }
    }))
}

/// Distinct real roots of the (squarefree) chain head in the open interval
/// (a, b). Endpoints must not be roots.
pub fn count_roots_between(chain: &[RatPolynomial], a: &Rational, b: &Rational) -> usize {
    debug_assert!(a < b);
    debug_assert!(chain[0].sign_at(a) != 0 && chain[0].sign_at(b) != 0);
    variations_at(chain, a) - variations_at(chain, b)
}

/// Distinct real roots in (c, +inf); c must not be a root.
pub fn count_roots_above(chain: &[RatPolynomial], c: &Rational) -> usize {
    debug_assert!(chain[0].sign_at(c) != 0);
    variations_at(chain, c) - variations_at_pos_inf(chain)
}

/// Distinct real roots in (-inf, c); c must not be a root.
pub fn count_roots_below(chain: &[RatPolynomial], c: &Rational) -> usize {
    debug_assert!(chain[0].sign_at(c) != 0);
    variations_at_neg_inf(chain) - variations_at(chain, c)
}

impl fmt::Debug for RatPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})x"),
                _ => format!("({c})x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
