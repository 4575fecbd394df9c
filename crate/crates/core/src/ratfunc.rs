//! Fractions whose denominators are products of integer linear forms —
//! the localization of the polynomial ring at nonzero linear forms.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::poly::{GradedPoly, LinearForm, PolyError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatFuncError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("zero linear form in a denominator")]
    ZeroDenominator,
}

/// Product of primitive linear forms with multiplicities.
pub type Denominator = BTreeMap<LinearForm, u32>;

/// Normalizes arbitrary nonzero forms to primitive ones; returns the scalar pulled out.
pub fn normalize_denominator<F: Scalar>(
    factors: impl IntoIterator<Item = (LinearForm, u32)>,
) -> Result<(F, Denominator), RatFuncError> {
    let mut scale = F::one();
    let mut den = Denominator::new();
    for (l, m) in factors {
        if m == 0 {
            continue;
        }
        let (s, p) = l.primitive().ok_or(RatFuncError::ZeroDenominator)?;
        for _ in 0..m {
            scale = scale * F::from_int(s);
        }
        *den.entry(p).or_insert(0) += m;
    }
    Ok((scale, den))
}

pub fn denominator_poly<F: Scalar>(num_vars: usize, den: &Denominator) -> GradedPoly<F> {
    den.iter().fold(GradedPoly::one(num_vars), |acc, (l, &m)| acc.mul(&l.to_poly::<F>().pow(m)))
}

/// `(common, a_factor, b_factor)` with `common = den_a · a_factor = den_b · b_factor`.
pub fn common_denominator(a: &Denominator, b: &Denominator) -> (Denominator, Denominator, Denominator) {
    let mut common = a.clone();
    for (l, &m) in b {
        let e = common.entry(l.clone()).or_insert(0);
        *e = (*e).max(m);
    }
    let missing = |d: &Denominator| -> Denominator {
        common
            .iter()
            .filter_map(|(l, &m)| {
                let have = d.get(l).copied().unwrap_or(0);
                (m > have).then(|| (l.clone(), m - have))
            })
            .collect()
    };
    let (fa, fb) = (missing(a), missing(b));
    (common, fa, fb)
}

/// `num / ∏ ℓ^m`; every scalar lives in the numerator.
#[derive(Clone, Debug)]
pub struct RationalFunction<F> {
    num: GradedPoly<F>,
    den: Denominator,
}

impl<F: Scalar> RationalFunction<F> {
    pub fn from_poly(p: GradedPoly<F>) -> Self {
        Self { num: p, den: Denominator::new() }
    }

    pub fn zero(num_vars: usize) -> Self {
        Self::from_poly(GradedPoly::zero(num_vars))
    }

    pub fn new(
        num: GradedPoly<F>,
        den: impl IntoIterator<Item = (LinearForm, u32)>,
    ) -> Result<Self, RatFuncError> {
        let (scale, den) = normalize_denominator::<F>(den)?;
        for l in den.keys() {
            if l.num_vars() != num.num_vars() {
                return Err(PolyError::ArityMismatch { left: num.num_vars(), right: l.num_vars() }.into());
            }
        }
        let mut r = Self { num: num.scale(&(F::one() / scale)), den };
        r.reduce();
        Ok(r)
    }

    pub fn numerator(&self) -> &GradedPoly<F> {
        &self.num
    }

    pub fn denominator(&self) -> &Denominator {
        &self.den
    }

    pub fn num_vars(&self) -> usize {
        self.num.num_vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Cancels every denominator factor dividing the numerator.
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let forms: Vec<LinearForm> = self.den.keys().cloned().collect();
        for l in forms {
            while self.den.get(&l).is_some_and(|&m| m > 0) {
                let Some(q) = self.num.div_linear(&l) else { break };
                self.num = q;
                let m = self.den.get_mut(&l).expect("present");
                *m -= 1;
                if *m == 0 {
                    self.den.remove(&l);
                }
            }
        }
    }

    /// The polynomial when the denominator has cleared.
    pub fn as_polynomial(&self) -> Option<&GradedPoly<F>> {
        self.den.is_empty().then_some(&self.num)
    }

    fn check(&self, other: &Self) -> Result<(), RatFuncError> {
        if self.num_vars() == other.num_vars() {
            Ok(())
        } else {
            Err(PolyError::ArityMismatch { left: self.num_vars(), right: other.num_vars() }.into())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RatFuncError> {
        self.check(other)?;
        let (den, fa, fb) = common_denominator(&self.den, &other.den);
        let r = self.num_vars();
        let num = self
            .num
            .checked_mul(&denominator_poly(r, &fa))?
            .checked_add(&other.num.checked_mul(&denominator_poly(r, &fb))?)?;
        let mut out = Self { num, den };
        out.reduce();
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, RatFuncError> {
        self.check(other)?;
        let num = self.num.checked_mul(&other.num)?;
        let mut den = self.den.clone();
        for (l, &m) in &other.den {
            *den.entry(l.clone()).or_insert(0) += m;
        }
        let mut out = Self { num, den };
        out.reduce();
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("matching arity")
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("matching arity")
    }

    pub fn neg(&self) -> Self {
        Self { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `None` when a denominator factor vanishes at the point.
    pub fn eval(&self, point: &[F]) -> Result<Option<F>, PolyError> {
        let d = denominator_poly::<F>(self.num_vars(), &self.den).eval(point)?;
        if d.is_zero() {
            return Ok(None);
        }
        Ok(Some(self.num.eval(point)? / d))
    }

    /// Cross-multiplied comparison.
    pub fn cross_equal(&self, other: &Self) -> bool {
        let r = self.num_vars();
        r == other.num_vars()
            && self.num.mul(&denominator_poly(r, &other.den)) == other.num.mul(&denominator_poly(r, &self.den))
    }
}

impl<F: Scalar> PartialEq for RationalFunction<F> {
    fn eq(&self, other: &Self) -> bool {
        self.cross_equal(other)
    }
}

impl<F: Scalar> Eq for RationalFunction<F> {}

pub(crate) fn format_denominator(den: &Denominator) -> String {
    den.iter()
        .map(|(l, &m)| {
            let base = if l.coeffs().iter().filter(|&&c| c != 0).count() == 1 && l.coeffs().iter().all(|&c| c >= 0) {
                l.to_string()
            } else {
                format!("({l})")
            };
            if m == 1 {
                base
            } else {
                format!("{base}^{m}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// `num` alone when the denominator is trivial, else `(num)/(den)`.
impl<F: Scalar> fmt::Display for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, format_denominator(&self.den))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;
    type R = RationalFunction<Q>;

    fn lf(c: &[i64]) -> LinearForm {
        LinearForm::new(c.to_vec())
    }

    fn x(r: usize, i: usize) -> GradedPoly<Q> {
        GradedPoly::var(r, i)
    }

    #[test]
    fn p1_residues_cancel() {
        let a = R::new(GradedPoly::one(2), [(lf(&[-1, 1]), 1)]).unwrap();
        let b = R::new(GradedPoly::one(2), [(lf(&[1, -1]), 1)]).unwrap();
        assert!(a.add(&b).is_zero());
        // (-x1)/(x2-x1) + (-x2)/(x1-x2) = 1
        let c = R::new(x(2, 0).neg(), [(lf(&[-1, 1]), 1)]).unwrap();
        let d = R::new(x(2, 1).neg(), [(lf(&[1, -1]), 1)]).unwrap();
        assert_eq!(c.add(&d).as_polynomial(), Some(&GradedPoly::one(2)));
    }

    #[test]
    fn normalization_and_display() {
        let r = R::new(x(2, 0), [(lf(&[-2, 2]), 2)]).unwrap();
        assert_eq!(r.to_string(), "(1/4*x1)/((x1 - x2)^2)");
        let s = R::new(x(2, 0).mul(&x(2, 1)), [(lf(&[0, 3]), 1)]).unwrap();
        assert_eq!(s.to_string(), "1/3*x1");
        assert!(R::new(x(2, 0), [(lf(&[0, 0]), 1)]).is_err());
        let t = R::new(GradedPoly::one(2), [(lf(&[1, 0]), 1), (lf(&[0, 1]), 3)]).unwrap();
        assert_eq!(t.to_string(), "(1)/(x2^3*x1)");
    }

    #[test]
    fn evaluation_and_equality() {
        let r = R::new(x(2, 0).add(&x(2, 1)), [(lf(&[1, -1]), 1)]).unwrap();
        let p = [Q::from_int(3), Q::from_int(1)];
        assert_eq!(r.eval(&p).unwrap(), Some(Q::from_int(2)));
        assert_eq!(r.eval(&[Q::from_int(1), Q::from_int(1)]).unwrap(), None);
        let doubled = R::new(x(2, 0).add(&x(2, 1)).scale(&Q::from_int(2)), [(lf(&[2, -2]), 1)]).unwrap();
        assert_eq!(r, doubled);
        assert!(r.checked_add(&R::zero(3)).is_err());
    }
}
