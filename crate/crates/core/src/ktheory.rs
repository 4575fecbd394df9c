//! Representation-ring side: Laurent polynomials, `λ₋₁` denominators and
//! fixed-point sums.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::parse::ExprRing;
use crate::poly::write_terms;
use crate::scalar::Scalar;
use crate::univariate::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KError {
    #[error("point {point}: conormal character {index} is trivial")]
    TrivialCharacter { point: usize, index: usize },
    #[error("exact simplification needs one variable, got {num_vars}")]
    MultivariateUnsupported { num_vars: usize },
    #[error("the sum does not reduce to a character, so it cannot be evaluated at 1")]
    PoleAtOne,
    #[error("arity mismatch: {expected} variables expected, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("no fixed points given")]
    Empty,
}

/// Finite sum `Σ c_a t^a` with integer exponent vectors `a`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentPoly<F> {
    num_vars: usize,
    terms: BTreeMap<Vec<i64>, F>,
}

impl<F: Scalar> LaurentPoly<F> {
    pub fn zero(num_vars: usize) -> Self {
        Self { num_vars, terms: BTreeMap::new() }
    }

    pub fn one(num_vars: usize) -> Self {
        Self::monomial(vec![0; num_vars], F::one())
    }

    pub fn monomial(exponent: Vec<i64>, c: F) -> Self {
        let mut p = Self::zero(exponent.len());
        p.add_term(exponent, c);
        p
    }

    pub fn from_terms(num_vars: usize, terms: impl IntoIterator<Item = (Vec<i64>, F)>) -> Result<Self, KError> {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            if e.len() != num_vars {
                return Err(KError::ArityMismatch { expected: num_vars, got: e.len() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<i64>, c: F) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(F::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, F> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { num_vars: self.num_vars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut out = Self::zero(self.num_vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone() * s.clone());
        }
        out
    }

    /// `t^shift · self`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        Self {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Sum of coefficients: the virtual dimension.
    pub fn evaluate_at_one(&self) -> F {
        self.terms.values().fold(F::zero(), |acc, c| acc + c.clone())
    }

    /// Unit monomials `c·t^a` only.
    pub fn inverse_monomial(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        Some(Self::monomial(e.iter().map(|a| -a).collect(), F::one() / c.clone()))
    }

    /// Univariate view `t^low · u(t)` with `u(0) ≠ 0`.
    fn to_uni(&self) -> (UniPoly<F>, i64) {
        debug_assert_eq!(self.num_vars, 1);
        let Some(low) = self.terms.keys().map(|e| e[0]).min() else {
            return (UniPoly::zero(), 0);
        };
        let high = self.terms.keys().map(|e| e[0]).max().expect("nonempty");
        let mut coeffs = vec![F::zero(); (high - low) as usize + 1];
        for (e, c) in &self.terms {
            coeffs[(e[0] - low) as usize] = c.clone();
        }
        (UniPoly::new(coeffs), low)
    }

    fn from_uni(u: &UniPoly<F>, low: i64) -> Self {
        let mut p = Self::zero(1);
        for (k, c) in u.coeffs().iter().enumerate() {
            p.add_term(vec![low + k as i64], c.clone());
        }
        p
    }
}

impl<F: Scalar> ExprRing for LaurentPoly<F> {
    fn constant(&self, q: &BigRational) -> Option<Self> {
        Some(Self::monomial(vec![0; self.num_vars], F::from_rational(q)?))
    }

    fn variable(&self, index: usize) -> Option<Self> {
        let mut e = vec![0; self.num_vars];
        *e.get_mut(index)? = 1;
        Some(Self::monomial(e, F::one()))
    }

    fn add(&self, other: &Self) -> Self {
        LaurentPoly::add(self, other)
    }

    fn sub(&self, other: &Self) -> Self {
        LaurentPoly::sub(self, other)
    }

    fn mul(&self, other: &Self) -> Self {
        LaurentPoly::mul(self, other)
    }

    fn neg(&self) -> Self {
        LaurentPoly::neg(self)
    }

    fn pow(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inverse_monomial()? } else { self.clone() };
        Some((0..e.unsigned_abs()).fold(Self::one(self.num_vars), |acc, _| acc.mul(&base)))
    }
}

/// Descending exponent order; `t` when univariate, else `t1, t2, …`.
impl<F: Scalar> fmt::Display for LaurentPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.num_vars;
        write_terms(f, self.terms.iter().rev(), |e: &Vec<i64>| {
            let parts: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(i, &a)| {
                    let name = if r == 1 { "t".to_string() } else { format!("t{}", i + 1) };
                    if a == 1 {
                        name
                    } else {
                        format!("{name}^{a}")
                    }
                })
                .collect();
            (!parts.is_empty()).then(|| parts.join("*"))
        })
    }
}

/// `num / den` in the fraction field of the representation ring.
#[derive(Clone, Debug)]
pub struct LaurentRational<F> {
    num: LaurentPoly<F>,
    den: LaurentPoly<F>,
}

impl<F: Scalar> LaurentRational<F> {
    pub fn new(num: LaurentPoly<F>, den: LaurentPoly<F>) -> Result<Self, KError> {
        if den.is_zero() {
            return Err(KError::ZeroDenominator);
        }
        if num.num_vars != den.num_vars {
            return Err(KError::ArityMismatch { expected: num.num_vars, got: den.num_vars });
        }
        let mut r = Self { num, den };
        r.normalize();
        Ok(r)
    }

    pub fn from_poly(p: LaurentPoly<F>) -> Self {
        let den = LaurentPoly::one(p.num_vars);
        Self { num: p, den }
    }

    pub fn numerator(&self) -> &LaurentPoly<F> {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly<F> {
        &self.den
    }

    pub fn num_vars(&self) -> usize {
        self.num.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Univariate: cancel the gcd, move monomials to the numerator, and make
    /// the denominator's constant term one. Multivariate: only a monomial
    /// denominator is absorbed.
    fn normalize(&mut self) {
        let r = self.num_vars();
        if self.num.is_zero() {
            self.den = LaurentPoly::one(r);
            return;
        }
        if r != 1 {
            if let Some(inv) = self.den.inverse_monomial() {
                self.num = self.num.mul(&inv);
                self.den = LaurentPoly::one(r);
            }
            return;
        }
        let (n, a) = self.num.to_uni();
        let (d, b) = self.den.to_uni();
        let g = n.gcd(&d);
        let (n, d) = (n.div_exact(&g).expect("gcd divides"), d.div_exact(&g).expect("gcd divides"));
        let c = F::one() / d.coeff(0);
        self.num = LaurentPoly::from_uni(&n.scale(&c), a - b);
        self.den = LaurentPoly::from_uni(&d.scale(&c), 0);
    }

    pub fn add(&self, other: &Self) -> Result<Self, KError> {
        if self.num_vars() != other.num_vars() {
            return Err(KError::ArityMismatch { expected: self.num_vars(), got: other.num_vars() });
        }
        if self.den == other.den {
            return Self::new(self.num.add(&other.num), self.den.clone());
        }
        Self::new(self.num.mul(&other.den).add(&other.num.mul(&self.den)), self.den.mul(&other.den))
    }

    pub fn cross_equal(&self, other: &Self) -> bool {
        self.num_vars() == other.num_vars() && self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl<F: Scalar> PartialEq for LaurentRational<F> {
    fn eq(&self, other: &Self) -> bool {
        self.cross_equal(other)
    }
}

impl<F: Scalar> fmt::Display for LaurentRational<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == LaurentPoly::one(self.num_vars()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Local datum at an isolated fixed point: the fiber character and the
/// conormal weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KFixedPoint<F> {
    fiber: LaurentPoly<F>,
    conormal: Vec<Vec<i64>>,
}

impl<F: Scalar> KFixedPoint<F> {
    pub fn new(fiber: LaurentPoly<F>, conormal: Vec<Vec<i64>>) -> Result<Self, KError> {
        let p = Self::new_unchecked(fiber, conormal);
        p.validate(0)?;
        Ok(p)
    }

    pub fn new_unchecked(fiber: LaurentPoly<F>, conormal: Vec<Vec<i64>>) -> Self {
        Self { fiber, conormal }
    }

    fn validate(&self, point: usize) -> Result<(), KError> {
        let r = self.fiber.num_vars;
        for (index, w) in self.conormal.iter().enumerate() {
            if w.len() != r {
                return Err(KError::ArityMismatch { expected: r, got: w.len() });
            }
            if w.iter().all(|&a| a == 0) {
                return Err(KError::TrivialCharacter { point, index });
            }
        }
        Ok(())
    }

    pub fn fiber(&self) -> &LaurentPoly<F> {
        &self.fiber
    }

    pub fn conormal(&self) -> &[Vec<i64>] {
        &self.conormal
    }

    pub fn num_vars(&self) -> usize {
        self.fiber.num_vars
    }
}

/// `∏_w (1 − t^w)` over the conormal characters.
pub fn lambda_minus_one<F: Scalar>(p: &KFixedPoint<F>) -> Result<LaurentPoly<F>, KError> {
    p.validate(0)?;
    let r = p.num_vars();
    Ok(p.conormal.iter().fold(LaurentPoly::one(r), |acc, w| {
        acc.mul(&LaurentPoly::one(r).sub(&LaurentPoly::monomial(w.clone(), F::one())))
    }))
}

/// `Σ_p fiber_p / λ₋₁(N_p^∨)`.
pub fn fixed_point_sum<F: Scalar>(points: &[KFixedPoint<F>]) -> Result<LaurentRational<F>, KError> {
    let first = points.first().ok_or(KError::Empty)?;
    let r = first.num_vars();
    let mut total = LaurentRational::from_poly(LaurentPoly::zero(r));
    for (i, p) in points.iter().enumerate() {
        if p.num_vars() != r {
            return Err(KError::ArityMismatch { expected: r, got: p.num_vars() });
        }
        p.validate(i)?;
        let term = LaurentRational::new(p.fiber.clone(), lambda_minus_one(p)?)?;
        total = total.add(&term)?;
    }
    Ok(total)
}

/// The Laurent polynomial when the reduced denominator is a unit.
pub fn is_character<F: Scalar>(r: &LaurentRational<F>) -> Result<Option<LaurentPoly<F>>, KError> {
    if r.num_vars() != 1 {
        return Err(KError::MultivariateUnsupported { num_vars: r.num_vars() });
    }
    Ok(r.den.inverse_monomial().map(|inv| r.num.mul(&inv)))
}

pub fn evaluate_at_one<F: Scalar>(r: &LaurentRational<F>) -> Result<F, KError> {
    is_character(r)?.map(|c| c.evaluate_at_one()).ok_or(KError::PoleAtOne)
}

/// `O(d)` on `Pⁿ` along the one-parameter subgroup with weights `0..n`:
/// at point `i` the conormal characters are `i − j` and the fiber is `t^{−d·i}`.
pub fn projective_space_dataset<F: Scalar>(n: usize, d: i64) -> Vec<KFixedPoint<F>> {
    (0..=n as i64)
        .map(|i| {
            let conormal = (0..=n as i64).filter(|&j| j != i).map(|j| vec![i - j]).collect();
            KFixedPoint::new(LaurentPoly::monomial(vec![-d * i], F::one()), conormal).expect("nonzero weights")
        })
        .collect()
}
