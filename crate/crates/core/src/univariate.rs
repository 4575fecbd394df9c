//! Dense univariate polynomials over a [`Scalar`] field.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::scalar::{lcm_bigint, Scalar};

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UniPoly<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> UniPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// `t - r`
    pub fn linear_root(r: F) -> Self {
        Self::new(vec![-r, F::one()])
    }

    /// `c · t^k`
    pub fn monomial(c: F, k: usize) -> Self {
        let mut coeffs = vec![F::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn eval(&self, t: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * d.clone();
            }
            quot[k] = c;
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Exact quotient, if `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.divrem(divisor);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(F::one() / self.leading()))
    }

    /// Monic greatest common divisor (zero when both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.clone() * F::from_int(k as i64)).collect())
    }

    /// `t^{-v} · self` where `v` is the lowest exponent present, and `v`.
    pub fn strip_low_powers(&self) -> (Self, usize) {
        let v = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
        (Self { coeffs: self.coeffs[v..].to_vec() }, v)
    }

    fn sign_changes(seq: &[Self], t: &F) -> usize {
        let signs: Vec<bool> =
            seq.iter().map(|p| p.eval(t)).filter(|v| !v.is_zero()).map(|v| v.is_positive()).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Every root with multiplicity when all roots are rational, else `None`.
    /// Roots are returned in increasing order.
    pub fn rational_roots_if_split(&self) -> Option<Vec<(F, u32)>> {
        let deg = self.degree()?;
        if deg == 0 {
            return Some(Vec::new());
        }
        let squarefree = self.div_exact(&self.gcd(&self.derivative())).expect("gcd divides");
        let distinct = squarefree_rational_roots(&squarefree)?;
        let mut rest = self.clone();
        let mut out = Vec::new();
        for r in distinct {
            let factor = Self::linear_root(r.clone());
            let mut m = 0;
            while let Some(q) = rest.div_exact(&factor) {
                rest = q;
                m += 1;
            }
            out.push((r, m));
        }
        (rest.degree() == Some(0)).then_some(out)
    }
}

/// Distinct roots of a squarefree polynomial, `None` unless all are rational.
fn squarefree_rational_roots<F: Scalar>(s: &UniPoly<F>) -> Option<Vec<F>> {
    let deg = s.degree()?;
    // clear denominators: roots then have denominators dividing the leading coefficient
    let denom_lcm = s.coeffs.iter().fold(BigInt::one(), |acc, c| lcm_bigint(&acc, &c.numer_denom().1));
    let scale = F::from_rational(&num_rational::BigRational::from_integer(denom_lcm))?;
    let ints = s.scale(&scale);
    let lead = ints.leading().abs();
    let grid = F::one() / lead.clone();

    let bound = ints.coeffs.iter().map(|c| c.abs() / lead.clone()).max().unwrap_or_else(F::zero) + F::one();
    let mut seq = vec![ints.clone(), ints.derivative()];
    while !seq.last().expect("nonempty").is_zero() {
        let n = seq.len();
        let r = seq[n - 2].divrem(&seq[n - 1]).1.neg();
        seq.push(r);
    }
    seq.pop();

    let lo0 = -bound.clone() - F::one();
    let hi0 = bound;
    let count = |lo: &F, hi: &F| UniPoly::sign_changes(&seq, lo) - UniPoly::sign_changes(&seq, hi);
    if count(&lo0, &hi0) != deg {
        return None;
    }
    let mut roots = Vec::with_capacity(deg);
    let mut stack = vec![(lo0, hi0)];
    let two = F::from_int(2);
    while let Some((lo, hi)) = stack.pop() {
        let n = count(&lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 && hi.clone() - lo.clone() < grid {
            // the only grid point that can lie in (lo, hi]
            let candidate = (Scalar::floor(&(lo.clone() * lead.clone())) + F::one()) * grid.clone();
            if candidate > hi || !ints.eval(&candidate).is_zero() {
                return None;
            }
            roots.push(candidate);
            continue;
        }
        let mid = (lo.clone() + hi.clone()) / two.clone();
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    roots.sort();
    Some(roots)
}

impl<F: Scalar> fmt::Display for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let coeff = crate::scalar::format_scalar(&mag);
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{coeff}")?,
                (_, true) => {}
                (_, false) => write!(f, "{coeff}*")?,
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;
    type P = UniPoly<Q>;

    fn p(cs: &[i64]) -> P {
        P::new(cs.iter().map(|&c| Q::from_int(c)).collect())
    }

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn division_and_gcd() {
        // (t^2 - 1) / (t - 1) = t + 1
        let (quot, rem) = p(&[-1, 0, 1]).divrem(&p(&[-1, 1]));
        assert_eq!(quot, p(&[1, 1]));
        assert!(rem.is_zero());
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[1, 2, 1])), p(&[1, 1]));
        assert_eq!(p(&[1, 1]).gcd(&p(&[2])), p(&[1]));
        assert!(p(&[1, 0, 1]).div_exact(&p(&[1, 1])).is_none());
    }

    #[test]
    fn roots_of_split_polynomials() {
        // 6 (t - 1/2)^2 (t + 3) (t - 2/3)
        let f = p(&[-1, 2])
            .mul(&p(&[-1, 2]))
            .mul(&p(&[3, 1]))
            .mul(&p(&[-2, 3]))
            .scale(&q(3, 2));
        let roots = f.rational_roots_if_split().unwrap();
        assert_eq!(roots, vec![(q(-3, 1), 1), (q(1, 2), 2), (q(2, 3), 1)]);
    }

    #[test]
    fn irrational_or_complex_roots_rejected() {
        assert!(p(&[-2, 0, 1]).rational_roots_if_split().is_none());
        assert!(p(&[1, 0, 1]).rational_roots_if_split().is_none());
        assert!(p(&[-2, 0, 1]).mul(&p(&[1, 1])).rational_roots_if_split().is_none());
        assert_eq!(p(&[5]).rational_roots_if_split(), Some(vec![]));
        assert!(P::zero().rational_roots_if_split().is_none());
    }

    #[test]
    fn close_roots_separated() {
        // roots 1/1000 and 1/999
        let f = p(&[-1, 1000]).mul(&p(&[-1, 999]));
        let roots = f.rational_roots_if_split().unwrap();
        assert_eq!(roots, vec![(q(1, 1000), 1), (q(1, 999), 1)]);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -1, 0, 2]).to_string(), "2*t^3 - t + 1");
        assert_eq!(P::zero().to_string(), "0");
    }
}
