//! Multivariate polynomials over a [`Scalar`] field, each variable in
//! cohomological degree two, and integer linear forms.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::parse::ExprRing;
use crate::scalar::{format_scalar, gcd_bigint, lcm_bigint, Scalar};
use crate::univariate::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("arity mismatch: {left} vs {right} variables")]
    ArityMismatch { left: usize, right: usize },
}

/// Exponent vector, ordered graded-lex (total degree first, then `x1 > x2 > …`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(r: usize) -> Self {
        Monomial(vec![0; r])
    }

    pub fn var(r: usize, i: usize) -> Self {
        let mut e = vec![0; r];
        e[i] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree().cmp(&other.total_degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GradedPoly<F> {
    num_vars: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Scalar> GradedPoly<F> {
    pub fn zero(num_vars: usize) -> Self {
        Self { num_vars, terms: BTreeMap::new() }
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, F::one())
    }

    pub fn constant(num_vars: usize, c: F) -> Self {
        Self::monomial(Monomial::one(num_vars), c)
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        assert!(i < num_vars, "variable index out of range");
        Self::monomial(Monomial::var(num_vars, i), F::one())
    }

    pub fn monomial(m: Monomial, c: F) -> Self {
        let num_vars = m.0.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { num_vars, terms }
    }

    pub fn from_terms(num_vars: usize, terms: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut p = Self::zero(num_vars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), num_vars, "exponent vector of wrong length");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, F> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> F {
        self.terms.get(&Monomial::one(self.num_vars)).cloned().unwrap_or_else(F::zero)
    }

    pub fn as_constant(&self) -> Option<F> {
        match self.terms.len() {
            0 => Some(F::zero()),
            1 => self.terms.get(&Monomial::one(self.num_vars)).cloned(),
            _ => None,
        }
    }

    /// Largest total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::total_degree)
    }

    /// Polynomial degree when homogeneous (cohomological degree is twice this).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::total_degree);
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    fn check(&self, other: &Self) -> Result<(), PolyError> {
        if self.num_vars == other.num_vars {
            Ok(())
        } else {
            Err(PolyError::ArityMismatch { left: self.num_vars, right: other.num_vars })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = Self::zero(self.num_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    /// Panicking shorthands for callers that already share an arity.
    pub fn add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("matching arity")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("matching arity")
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("matching arity")
    }

    pub fn neg(&self) -> Self {
        Self { num_vars: self.num_vars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero(self.num_vars);
        }
        Self {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.clone() * s.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.num_vars), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, point: &[F]) -> Result<F, PolyError> {
        if point.len() != self.num_vars {
            return Err(PolyError::ArityMismatch { left: self.num_vars, right: point.len() });
        }
        Ok(self.terms.iter().fold(F::zero(), |acc, (m, c)| {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    v = v * x.clone();
                }
            }
            acc + v
        }))
    }

    /// Largest exponent of `x_k`.
    pub fn degree_in(&self, k: usize) -> u32 {
        self.terms.keys().map(|m| m.0[k]).max().unwrap_or(0)
    }

    /// Coefficient of `x_k^e`, as a polynomial not involving `x_k`.
    pub fn coefficient_in(&self, k: usize, e: u32) -> Self {
        Self::from_terms(
            self.num_vars,
            self.terms.iter().filter(|(m, _)| m.0[k] == e).map(|(m, c)| {
                let mut m = m.clone();
                m.0[k] = 0;
                (m, c.clone())
            }),
        )
    }

    /// Exact quotient by a nonzero linear form, if it divides.
    pub fn div_linear(&self, l: &LinearForm) -> Option<Self> {
        assert_eq!(l.num_vars(), self.num_vars, "arity mismatch");
        let k = l.leading_index()?;
        let a = F::from_int(l.coeffs[k]);
        let lp = l.to_poly::<F>();
        let mut rest = self.clone();
        let mut quot = Self::zero(self.num_vars);
        while !rest.is_zero() {
            let e = rest.degree_in(k);
            if e == 0 {
                return None;
            }
            let part = Self::from_terms(
                self.num_vars,
                rest.terms.iter().filter(|(m, _)| m.0[k] == e).map(|(m, c)| {
                    let mut m = m.clone();
                    m.0[k] -= 1;
                    (m, c.clone() / a.clone())
                }),
            );
            rest = rest.sub(&lp.mul(&part));
            quot = quot.add(&part);
        }
        Some(quot)
    }

    /// `t ↦ self(x_k = t, x_i = 1, others 0)`.
    fn specialize(&self, k: usize, i: usize) -> UniPoly<F> {
        let mut coeffs = vec![F::zero(); self.degree_in(k) as usize + 1];
        for (m, c) in &self.terms {
            if m.0.iter().enumerate().all(|(j, &e)| e == 0 || j == k || j == i) {
                let slot = &mut coeffs[m.0[k] as usize];
                *slot = slot.clone() + c.clone();
            }
        }
        UniPoly::new(coeffs)
    }

    /// Writes `self = c · ∏ ℓ^m` with primitive linear forms `ℓ`, if possible.
    pub fn factor_linear(&self) -> Option<(F, BTreeMap<LinearForm, u32>)> {
        let mut factors = BTreeMap::new();
        let c = self.factor_from(0, &mut factors)?;
        Some((c, factors))
    }

    fn factor_from(&self, k: usize, out: &mut BTreeMap<LinearForm, u32>) -> Option<F> {
        if self.is_zero() {
            return None;
        }
        if let Some(c) = self.as_constant() {
            return Some(c);
        }
        if k >= self.num_vars {
            return None;
        }
        let e = self.degree_in(k);
        if e == 0 {
            return self.factor_from(k + 1, out);
        }
        // factors free of x_k all divide the top coefficient in x_k
        let mut rest = self.clone();
        let mut lead_factors = BTreeMap::new();
        self.coefficient_in(k, e).factor_from(k + 1, &mut lead_factors)?;
        for (l, m) in lead_factors {
            for _ in 0..m {
                rest = rest.div_linear(&l)?;
            }
            *out.entry(l).or_insert(0) += m;
        }
        // now rest = c · ∏ (x_k + Σ_{i>k} b_i x_i)
        while rest.degree_in(k) > 0 {
            let mut root_sets = Vec::new();
            for i in k + 1..self.num_vars {
                let roots = rest.specialize(k, i).rational_roots_if_split()?;
                root_sets.push(roots.into_iter().map(|(r, _)| r).collect::<Vec<_>>());
            }
            let found = candidate_forms(self.num_vars, k, &root_sets)
                .into_iter()
                .find_map(|l| rest.div_linear(&l).map(|q| (l, q)));
            let (l, q) = found?;
            rest = q;
            *out.entry(l).or_insert(0) += 1;
        }
        rest.as_constant()
    }
}

/// Forms `x_k - Σ r_i x_i` for every choice of one root per later variable.
fn candidate_forms<F: Scalar>(r: usize, k: usize, root_sets: &[Vec<F>]) -> Vec<LinearForm> {
    let mut combos: Vec<Vec<F>> = vec![Vec::new()];
    for roots in root_sets {
        combos = combos
            .into_iter()
            .flat_map(|prefix| {
                roots.iter().map(move |root| {
                    let mut next = prefix.clone();
                    next.push(root.clone());
                    next
                })
            })
            .collect();
    }
    combos
        .into_iter()
        .filter_map(|choice| {
            let mut v = vec![F::zero(); r];
            v[k] = F::one();
            for (offset, root) in choice.into_iter().enumerate() {
                v[k + 1 + offset] = -root;
            }
            primitive_integer_vector(&v).map(LinearForm::new)
        })
        .collect()
}

/// Clears denominators and divides by the content; `None` on overflow or zero.
pub fn primitive_integer_vector<F: Scalar>(v: &[F]) -> Option<Vec<i64>> {
    let parts: Vec<(BigInt, BigInt)> = v.iter().map(Scalar::numer_denom).collect();
    let l = parts.iter().fold(BigInt::one(), |acc, (_, d)| lcm_bigint(&acc, d));
    let ints: Vec<BigInt> = parts.iter().map(|(n, d)| n * (&l / d)).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| gcd_bigint(&acc, x));
    if g.is_zero() {
        return None;
    }
    ints.iter().map(|x| (x / &g).to_i64()).collect()
}

impl<F: Scalar> ExprRing for GradedPoly<F> {
    fn constant(&self, q: &BigRational) -> Option<Self> {
        Some(Self::constant(self.num_vars, F::from_rational(q)?))
    }

    fn variable(&self, index: usize) -> Option<Self> {
        (index < self.num_vars).then(|| Self::var(self.num_vars, index))
    }

    fn add(&self, other: &Self) -> Self {
        GradedPoly::add(self, other)
    }

    fn sub(&self, other: &Self) -> Self {
        GradedPoly::sub(self, other)
    }

    fn mul(&self, other: &Self) -> Self {
        GradedPoly::mul(self, other)
    }

    fn neg(&self) -> Self {
        GradedPoly::neg(self)
    }

    fn pow(&self, e: i64) -> Option<Self> {
        Some(GradedPoly::pow(self, u32::try_from(e).ok()?))
    }
}

/// Writes signed terms in the given order, rendering each monomial with `mono`.
pub(crate) fn write_terms<'a, F: Scalar, M: 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a M, &'a F)>,
    mono: impl Fn(&M) -> Option<String>,
) -> fmt::Result {
    let mut first = true;
    for (m, c) in terms {
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
        match mono(m) {
            None => write!(f, "{}", format_scalar(&mag))?,
            Some(s) if mag.is_one() => write!(f, "{s}")?,
            Some(s) => write!(f, "{}*{s}", format_scalar(&mag))?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

fn render_monomial(m: &Monomial) -> Option<String> {
    let parts: Vec<String> = m
        .0
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
        .collect();
    (!parts.is_empty()).then(|| parts.join("*"))
}

/// Terms in descending graded-lex order, e.g. `x1^2 + 2*x1*x2 - 3`.
impl<F: Scalar> fmt::Display for GradedPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().rev(), render_monomial)
    }
}

/// An integer linear form `Σ aᵢ xᵢ`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LinearForm {
    coeffs: Vec<i64>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Self { coeffs }
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut coeffs = vec![0; num_vars];
        coeffs[i] = 1;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn num_vars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn leading_index(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    /// `self = scale · primitive` with gcd 1 and a positive first coefficient.
    pub fn primitive(&self) -> Option<(i64, LinearForm)> {
        let k = self.leading_index()?;
        let g = self.coeffs.iter().fold(0i64, |acc, c| acc.gcd(c));
        let s = if self.coeffs[k] < 0 { -g } else { g };
        Some((s, LinearForm::new(self.coeffs.iter().map(|c| c / s).collect())))
    }

    pub fn eval<F: Scalar>(&self, point: &[F]) -> F {
        self.coeffs.iter().zip(point).fold(F::zero(), |acc, (&c, x)| acc + F::from_int(c) * x.clone())
    }

    pub fn to_poly<F: Scalar>(&self) -> GradedPoly<F> {
        let r = self.coeffs.len();
        GradedPoly::from_terms(r, self.coeffs.iter().enumerate().map(|(i, &c)| (Monomial::var(r, i), F::from_int(c))))
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(usize, BigRational)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, BigRational::from_integer(c.into())))
            .collect();
        write_terms(f, terms.iter().map(|(i, c)| (i, c)), |i| Some(format!("x{}", i + 1)))
    }
}
