//! Equivariant cohomology of fixed components after inverting all nonzero
//! linear forms: Euler classes, their inverses, and fixed-point integration.
//!
//! A fixed component `F` is modelled by a finite-dimensional graded algebra
//! `A = H^*(F)` (with basis `b_0..b_{n-1}`) tensored with the polynomial ring
//! `R = k[x_1..x_r]`. Elements are `Σ p_i b_i / D` with `D` a product of
//! linear forms.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::linalg::{image_basis, kernel_basis, Matrix};
use crate::poly::{primitive_integer_vector, GradedPoly, LinearForm};
use crate::ratfunc::{common_denominator, denominator_poly, normalize_denominator, Denominator, RatFuncError, RationalFunction};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivariantError {
    #[error("invalid component algebra: {0}")]
    InvalidAlgebra(String),
    #[error("arity mismatch: {expected} variables expected, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("elements live over different component algebras")]
    AlgebraMismatch,
    #[error("weight {index} is zero")]
    ZeroWeight { index: usize },
    #[error("not invertible after inverting linear forms: {reason}")]
    NotInvertible { reason: String },
    #[error("subtorus basis spans the whole weight space")]
    NotProper,
    #[error("invalid fixed component: {0}")]
    InvalidComponent(String),
    #[error("component {index}: {source}")]
    Component { index: usize, source: Box<EquivariantError> },
    #[error(transparent)]
    RatFunc(#[from] RatFuncError),
}

/// Finite-dimensional, evenly graded, commutative, unital algebra with
/// nilpotent positive part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentAlgebra<F> {
    degrees: Vec<u32>,
    /// `table[i][j][k]`: coefficient of `b_k` in `b_i · b_j`.
    table: Vec<Vec<Vec<F>>>,
    unit: usize,
    nilpotency: u32,
}

impl<F: Scalar> ComponentAlgebra<F> {
    pub fn new(degrees: Vec<u32>, table: Vec<Vec<Vec<F>>>) -> Result<Self, EquivariantError> {
        let bad = |m: String| Err(EquivariantError::InvalidAlgebra(m));
        let n = degrees.len();
        if degrees.iter().any(|d| d % 2 != 0) {
            return bad("basis degrees must be even".into());
        }
        let units: Vec<usize> = (0..n).filter(|&i| degrees[i] == 0).collect();
        if units.len() != 1 {
            return bad(format!("expected exactly one degree-0 basis element, found {}", units.len()));
        }
        let unit = units[0];
        if table.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|v| v.len() != n)) {
            return bad(format!("multiplication table must be {n}x{n}x{n}"));
        }
        let alg = Self { degrees, table, unit, nilpotency: 0 };
        let e = |i: usize| {
            let mut v = vec![F::zero(); n];
            v[i] = F::one();
            v
        };
        for i in 0..n {
            if alg.mul(&e(unit), &e(i)) != e(i) || alg.mul(&e(i), &e(unit)) != e(i) {
                return bad(format!("b{unit} is not a unit for b{i}"));
            }
            for j in 0..n {
                if alg.table[i][j] != alg.table[j][i] {
                    return bad(format!("b{i}*b{j} != b{j}*b{i}"));
                }
                for (k, c) in alg.table[i][j].iter().enumerate() {
                    if !c.is_zero() && alg.degrees[k] != alg.degrees[i] + alg.degrees[j] {
                        return bad(format!("b{i}*b{j} has a component in the wrong degree"));
                    }
                }
                for k in 0..n {
                    let left = alg.mul(&alg.mul(&e(i), &e(j)), &e(k));
                    let right = alg.mul(&e(i), &alg.mul(&e(j), &e(k)));
                    if left != right {
                        return bad(format!("(b{i}*b{j})*b{k} != b{i}*(b{j}*b{k})"));
                    }
                }
            }
        }
        let nilpotency = alg.compute_nilpotency();
        Ok(Self { nilpotency, ..alg })
    }

    /// `k` in degree zero.
    pub fn point() -> Self {
        Self::new(vec![0], vec![vec![vec![F::one()]]]).expect("valid")
    }

    /// `k[h]/h^{k+1}` with `deg h = 2`, basis `1, h, …, h^k`.
    pub fn truncated(k: usize) -> Self {
        let exps: Vec<Vec<u32>> = (0..=k as u32).map(|e| vec![e]).collect();
        Self::monomial(&exps).expect("downward closed")
    }

    /// Monomial algebra on a downward-closed set of exponent vectors
    /// (generators in degree 2; products leaving the set vanish).
    pub fn monomial(exponents: &[Vec<u32>]) -> Result<Self, EquivariantError> {
        let index: BTreeMap<&Vec<u32>, usize> = exponents.iter().enumerate().map(|(i, e)| (e, i)).collect();
        if index.len() != exponents.len() {
            return Err(EquivariantError::InvalidAlgebra("repeated monomial".into()));
        }
        for e in exponents {
            for i in 0..e.len() {
                if e[i] > 0 {
                    let mut d = e.clone();
                    d[i] -= 1;
                    if !index.contains_key(&d) {
                        return Err(EquivariantError::InvalidAlgebra("monomial set not downward closed".into()));
                    }
                }
            }
        }
        let n = exponents.len();
        let degrees = exponents.iter().map(|e| 2 * e.iter().sum::<u32>()).collect();
        let table = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut v = vec![F::zero(); n];
                        let s: Vec<u32> = exponents[i].iter().zip(&exponents[j]).map(|(a, b)| a + b).collect();
                        if let Some(&k) = index.get(&s) {
                            v[k] = F::one();
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        Self::new(degrees, table)
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn top_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// Least `N` with `m^N = 0` for the positive-degree ideal `m`.
    pub fn nilpotency_order(&self) -> u32 {
        self.nilpotency
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<F>>] {
        &self.table
    }

    pub fn mul(&self, a: &[F], b: &[F]) -> Vec<F> {
        let n = self.dim();
        let mut out = vec![F::zero(); n];
        for i in (0..n).filter(|&i| !a[i].is_zero()) {
            for j in (0..n).filter(|&j| !b[j].is_zero()) {
                let c = a[i].clone() * b[j].clone();
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] = out[k].clone() + c.clone() * t.clone();
                    }
                }
            }
        }
        out
    }

    fn compute_nilpotency(&self) -> u32 {
        let n = self.dim();
        let positive: Vec<Vec<F>> = (0..n)
            .filter(|&i| i != self.unit)
            .map(|i| {
                let mut v = vec![F::zero(); n];
                v[i] = F::one();
                v
            })
            .collect();
        let mut power = positive.clone();
        let mut order = 1;
        while !power.is_empty() {
            let products: Vec<Vec<F>> =
                power.iter().flat_map(|v| positive.iter().map(|g| self.mul(v, g))).collect();
            power = if products.is_empty() {
                Vec::new()
            } else {
                image_basis(&Matrix::from_columns(n, &products).expect("columns of length n"))
            };
            order += 1;
        }
        order
    }
}

/// `Σ p_i b_i / D` over a component algebra.
#[derive(Clone, Debug)]
pub struct EquivariantElement<F> {
    algebra: Arc<ComponentAlgebra<F>>,
    num_vars: usize,
    coeffs: Vec<GradedPoly<F>>,
    den: Denominator,
}

impl<F: Scalar> EquivariantElement<F> {
    pub fn new(
        algebra: Arc<ComponentAlgebra<F>>,
        coeffs: Vec<GradedPoly<F>>,
        den: impl IntoIterator<Item = (LinearForm, u32)>,
    ) -> Result<Self, EquivariantError> {
        if coeffs.len() != algebra.dim() {
            return Err(EquivariantError::InvalidComponent(format!(
                "{} coefficients for an algebra of dimension {}",
                coeffs.len(),
                algebra.dim()
            )));
        }
        let num_vars = coeffs.first().map_or(0, GradedPoly::num_vars);
        for p in &coeffs {
            if p.num_vars() != num_vars {
                return Err(EquivariantError::ArityMismatch { expected: num_vars, got: p.num_vars() });
            }
        }
        let den: Vec<(LinearForm, u32)> = den.into_iter().collect();
        for (l, _) in &den {
            if l.num_vars() != num_vars {
                return Err(EquivariantError::ArityMismatch { expected: num_vars, got: l.num_vars() });
            }
        }
        let (scale, den) = normalize_denominator::<F>(den)?;
        let inv = F::one() / scale;
        let mut e = Self { algebra, num_vars, coeffs: coeffs.iter().map(|p| p.scale(&inv)).collect(), den };
        e.reduce();
        Ok(e)
    }

    pub fn zero(algebra: Arc<ComponentAlgebra<F>>, num_vars: usize) -> Self {
        let coeffs = vec![GradedPoly::zero(num_vars); algebra.dim()];
        Self { algebra, num_vars, coeffs, den: Denominator::new() }
    }

    /// `p · b_i`.
    pub fn basis_times(algebra: Arc<ComponentAlgebra<F>>, i: usize, p: GradedPoly<F>) -> Self {
        let mut e = Self::zero(algebra, p.num_vars());
        e.coeffs[i] = p;
        e
    }

    pub fn from_poly(algebra: Arc<ComponentAlgebra<F>>, p: GradedPoly<F>) -> Self {
        let u = algebra.unit_index();
        Self::basis_times(algebra, u, p)
    }

    pub fn unit(algebra: Arc<ComponentAlgebra<F>>, num_vars: usize) -> Self {
        Self::from_poly(algebra, GradedPoly::one(num_vars))
    }

    pub fn algebra(&self) -> &Arc<ComponentAlgebra<F>> {
        &self.algebra
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn coefficients(&self) -> &[GradedPoly<F>] {
        &self.coeffs
    }

    pub fn denominator(&self) -> &Denominator {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(GradedPoly::is_zero)
    }

    /// Coefficient of the unit, as a fraction.
    pub fn leading_part(&self) -> RationalFunction<F> {
        let p = self.coeffs[self.algebra.unit_index()].clone();
        RationalFunction::new(p, self.den.clone()).expect("normalized denominator")
    }

    /// Part supported on positive-degree basis elements (denominator kept).
    pub fn nilpotent_part(&self) -> Self {
        let mut e = self.clone();
        e.coeffs[self.algebra.unit_index()] = GradedPoly::zero(self.num_vars);
        e.reduce();
        e
    }

    fn reduce(&mut self) {
        if self.is_zero() {
            self.den.clear();
            return;
        }
        let forms: Vec<LinearForm> = self.den.keys().cloned().collect();
        for l in forms {
            while self.den.contains_key(&l) {
                let Some(qs) = self.coeffs.iter().map(|p| p.div_linear(&l)).collect::<Option<Vec<_>>>() else {
                    break;
                };
                self.coeffs = qs;
                let m = self.den.get_mut(&l).expect("present");
                *m -= 1;
                if *m == 0 {
                    self.den.remove(&l);
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<(), EquivariantError> {
        if self.algebra != other.algebra {
            return Err(EquivariantError::AlgebraMismatch);
        }
        if self.num_vars != other.num_vars {
            return Err(EquivariantError::ArityMismatch { expected: self.num_vars, got: other.num_vars });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, EquivariantError> {
        self.check(other)?;
        let (den, fa, fb) = common_denominator(&self.den, &other.den);
        let pa = denominator_poly::<F>(self.num_vars, &fa);
        let pb = denominator_poly::<F>(self.num_vars, &fb);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.mul(&pa).add(&b.mul(&pb))).collect();
        let mut e = Self { algebra: self.algebra.clone(), num_vars: self.num_vars, coeffs, den };
        e.reduce();
        Ok(e)
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(GradedPoly::neg).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, EquivariantError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, EquivariantError> {
        self.check(other)?;
        let n = self.algebra.dim();
        let mut coeffs = vec![GradedPoly::zero(self.num_vars); n];
        for i in (0..n).filter(|&i| !self.coeffs[i].is_zero()) {
            for j in (0..n).filter(|&j| !other.coeffs[j].is_zero()) {
                let p = self.coeffs[i].mul(&other.coeffs[j]);
                for (k, t) in self.algebra.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        coeffs[k] = coeffs[k].add(&p.scale(t));
                    }
                }
            }
        }
        let mut den = self.den.clone();
        for (l, &m) in &other.den {
            *den.entry(l.clone()).or_insert(0) += m;
        }
        let mut e = Self { algebra: self.algebra.clone(), num_vars: self.num_vars, coeffs, den };
        e.reduce();
        Ok(e)
    }

    pub fn scale_poly(&self, p: &GradedPoly<F>) -> Self {
        let mut e = Self { coeffs: self.coeffs.iter().map(|c| c.mul(p)).collect(), ..self.clone() };
        e.reduce();
        e
    }

    pub fn pow(&self, k: u32) -> Result<Self, EquivariantError> {
        let mut acc = Self::unit(self.algebra.clone(), self.num_vars);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Cohomological degree when every term has the same one.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let den_deg: u32 = self.den.values().sum();
        let mut degs = self.coeffs.iter().enumerate().flat_map(|(i, p)| {
            let bd = self.algebra.degrees[i] as i64;
            p.terms().keys().map(move |m| bd + 2 * m.total_degree() as i64)
        });
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d - 2 * den_deg as i64)
    }

    /// Equality by cross-multiplication.
    pub fn equals(&self, other: &Self) -> bool {
        if self.check(other).is_err() {
            return false;
        }
        let da = denominator_poly::<F>(self.num_vars, &self.den);
        let db = denominator_poly::<F>(self.num_vars, &other.den);
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.mul(&db) == b.mul(&da))
    }
}

impl<F: Scalar> PartialEq for EquivariantElement<F> {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl<F: Scalar> fmt::Display for EquivariantElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| format!("({p})*b{i}"))
            .collect();
        let num = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        if self.den.is_empty() {
            write!(f, "{num}")
        } else {
            write!(f, "[{num}]/({})", crate::ratfunc::format_denominator(&self.den))
        }
    }
}

/// `e⁻¹` in `A ⊗ R[S⁻¹]`, where `e = (u·1 + n)/D` with `u` a scalar times a
/// product of linear forms and `n` nilpotent.
pub fn invert_localized<F: Scalar>(e: &EquivariantElement<F>) -> Result<EquivariantElement<F>, EquivariantError> {
    let not_inv = |reason: &str| EquivariantError::NotInvertible { reason: reason.to_string() };
    let alg = e.algebra.clone();
    let r = e.num_vars;
    let p0 = &e.coeffs[alg.unit_index()];
    if p0.is_zero() {
        return Err(not_inv("leading part is zero"));
    }
    let (c, forms) = p0.factor_linear().ok_or_else(|| not_inv("leading part is not a product of linear forms"))?;
    let n_order = alg.nilpotency_order();
    // with e·D = p0·(1 + m/p0):  e⁻¹ = D · Σ_{i<N} (−m)^i p0^{N−1−i} / p0^N
    let mut m = EquivariantElement { den: Denominator::new(), ..e.clone() };
    m.coeffs[alg.unit_index()] = GradedPoly::zero(r);
    let minus_m = m.neg();
    let mut sum = EquivariantElement::zero(alg.clone(), r);
    let mut term = EquivariantElement::unit(alg.clone(), r);
    for i in 0..n_order {
        sum = sum.add(&term.scale_poly(&p0.pow(n_order - 1 - i)))?;
        term = term.mul(&minus_m)?;
    }
    let d = denominator_poly::<F>(r, &e.den);
    let mut cn = F::one();
    for _ in 0..n_order {
        cn = cn * c.clone();
    }
    let numer = sum.scale_poly(&d.scale(&(F::one() / cn)));
    let den: Vec<(LinearForm, u32)> = forms.into_iter().map(|(l, mu)| (l, mu * n_order)).collect();
    let inv = EquivariantElement::new(alg.clone(), numer.coeffs, den)?;
    if inv.mul(e)? != EquivariantElement::unit(alg, r) {
        return Err(not_inv("inverse failed to multiply back to the unit"));
    }
    Ok(inv)
}

#[derive(Clone, Debug)]
pub struct RoundtripReport<F> {
    pub pushed: EquivariantElement<F>,
    pub recovered: EquivariantElement<F>,
    pub exact: bool,
}

/// `(β·e)·e⁻¹ = β`: pushing forward then restricting multiplies by the Euler
/// class, which becomes invertible after localization.
pub fn self_intersection_roundtrip<F: Scalar>(
    beta: &EquivariantElement<F>,
    e: &EquivariantElement<F>,
) -> Result<RoundtripReport<F>, EquivariantError> {
    let inv = invert_localized(e)?;
    let pushed = beta.mul(e)?;
    let recovered = pushed.mul(&inv)?;
    let exact = recovered == *beta;
    Ok(RoundtripReport { pushed, recovered, exact })
}

/// Fixed component: its cohomology algebra, normal weights, nilpotent Chern
/// corrections and integration functional.
#[derive(Clone, Debug)]
pub struct FixedComponent<F> {
    algebra: Arc<ComponentAlgebra<F>>,
    num_vars: usize,
    weights: Vec<(LinearForm, u32)>,
    corrections: Vec<Option<EquivariantElement<F>>>,
    integral: Vec<F>,
}

impl<F: Scalar> FixedComponent<F> {
    pub fn new(
        algebra: Arc<ComponentAlgebra<F>>,
        num_vars: usize,
        weights: Vec<(LinearForm, u32)>,
        corrections: Vec<Option<EquivariantElement<F>>>,
        integral: Vec<F>,
    ) -> Result<Self, EquivariantError> {
        if let Some(index) = weights.iter().position(|(l, _)| l.is_zero()) {
            return Err(EquivariantError::ZeroWeight { index });
        }
        let fc = Self::new_unchecked(algebra, num_vars, weights, corrections, integral);
        fc.validate_shape()?;
        Ok(fc)
    }

    /// Skips every check, including the nonzero-weight requirement.
    pub fn new_unchecked(
        algebra: Arc<ComponentAlgebra<F>>,
        num_vars: usize,
        weights: Vec<(LinearForm, u32)>,
        mut corrections: Vec<Option<EquivariantElement<F>>>,
        integral: Vec<F>,
    ) -> Self {
        corrections.resize(weights.len(), None);
        Self { algebra, num_vars, weights, corrections, integral }
    }

    /// An isolated fixed point with the given tangent weights.
    pub fn point(num_vars: usize, weights: Vec<LinearForm>) -> Result<Self, EquivariantError> {
        Self::new(
            Arc::new(ComponentAlgebra::point()),
            num_vars,
            weights.into_iter().map(|w| (w, 1)).collect(),
            Vec::new(),
            vec![F::one()],
        )
    }

    fn validate_shape(&self) -> Result<(), EquivariantError> {
        let bad = |m: String| Err(EquivariantError::InvalidComponent(m));
        for (l, _) in &self.weights {
            if l.num_vars() != self.num_vars {
                return Err(EquivariantError::ArityMismatch { expected: self.num_vars, got: l.num_vars() });
            }
        }
        if self.corrections.len() != self.weights.len() {
            return bad("one correction slot per weight".into());
        }
        for c in self.corrections.iter().flatten() {
            if *c.algebra != *self.algebra {
                return Err(EquivariantError::AlgebraMismatch);
            }
            if c.num_vars != self.num_vars {
                return Err(EquivariantError::ArityMismatch { expected: self.num_vars, got: c.num_vars });
            }
        }
        if self.integral.len() != self.algebra.dim() {
            return bad(format!("integration functional has {} entries, expected {}", self.integral.len(), self.algebra.dim()));
        }
        let top = self.algebra.top_degree();
        if self.integral.iter().zip(&self.algebra.degrees).any(|(c, &d)| !c.is_zero() && d != top) {
            return bad("integration functional must vanish below the top degree".into());
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<ComponentAlgebra<F>> {
        &self.algebra
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn weights(&self) -> &[(LinearForm, u32)] {
        &self.weights
    }

    pub fn corrections(&self) -> &[Option<EquivariantElement<F>>] {
        &self.corrections
    }

    pub fn integral(&self) -> &[F] {
        &self.integral
    }

    /// Complex codimension: total multiplicity of the normal weights.
    pub fn codimension(&self) -> u32 {
        self.weights.iter().map(|(_, m)| m).sum()
    }

    pub fn unit(&self) -> EquivariantElement<F> {
        EquivariantElement::unit(self.algebra.clone(), self.num_vars)
    }
}

/// `∏_j (χ_j^{m_j}·1 + n_j)`.
pub fn euler_class<F: Scalar>(fc: &FixedComponent<F>) -> Result<EquivariantElement<F>, EquivariantError> {
    let mut e = fc.unit();
    for (index, ((l, m), corr)) in fc.weights.iter().zip(&fc.corrections).enumerate() {
        if l.is_zero() {
            return Err(EquivariantError::ZeroWeight { index });
        }
        let mut factor = EquivariantElement::from_poly(fc.algebra.clone(), l.to_poly::<F>().pow(*m));
        if let Some(n) = corr {
            factor = factor.add(n)?;
        }
        e = e.mul(&factor)?;
    }
    Ok(e)
}

/// Applies the integration functional basiswise.
pub fn component_integral<F: Scalar>(
    fc: &FixedComponent<F>,
    el: &EquivariantElement<F>,
) -> Result<RationalFunction<F>, EquivariantError> {
    if *el.algebra != *fc.algebra {
        return Err(EquivariantError::AlgebraMismatch);
    }
    let num = el
        .coeffs
        .iter()
        .zip(&fc.integral)
        .fold(GradedPoly::zero(el.num_vars), |acc, (p, c)| acc.add(&p.scale(c)));
    Ok(RationalFunction::new(num, el.den.clone())?)
}

/// `Σ_F ∫_F α|_F / e(N_F)`.
pub fn abbv_integrate<F: Scalar>(
    components: &[FixedComponent<F>],
    restrictions: &[EquivariantElement<F>],
) -> Result<RationalFunction<F>, EquivariantError> {
    if components.len() != restrictions.len() {
        return Err(EquivariantError::InvalidComponent(format!(
            "{} components but {} restrictions",
            components.len(),
            restrictions.len()
        )));
    }
    let r = components.first().map_or(0, |c| c.num_vars);
    let mut total = RationalFunction::zero(r);
    for (index, (fc, alpha)) in components.iter().zip(restrictions).enumerate() {
        let wrap = |source: EquivariantError| EquivariantError::Component { index, source: Box::new(source) };
        if fc.num_vars != r {
            return Err(wrap(EquivariantError::ArityMismatch { expected: r, got: fc.num_vars }));
        }
        let summand = euler_class(fc)
            .and_then(|e| invert_localized(&e))
            .and_then(|inv| alpha.mul(&inv))
            .and_then(|x| component_integral(fc, &x))
            .map_err(wrap)?;
        total = total.add(&summand);
    }
    Ok(total)
}

/// A nonzero integer form vanishing on the span of `subtorus_basis`.
pub fn orbit_annihilation_witness<F: Scalar>(
    num_vars: usize,
    subtorus_basis: &[Vec<i64>],
) -> Result<LinearForm, EquivariantError> {
    for v in subtorus_basis {
        if v.len() != num_vars {
            return Err(EquivariantError::ArityMismatch { expected: num_vars, got: v.len() });
        }
    }
    let rows: Vec<Vec<F>> = subtorus_basis.iter().map(|v| v.iter().map(|&c| F::from_int(c)).collect()).collect();
    let kernel = kernel_basis(&Matrix::from_rows(num_vars, &rows).expect("lengths checked"));
    let first = kernel.first().ok_or(EquivariantError::NotProper)?;
    let coeffs = primitive_integer_vector(first)
        .ok_or_else(|| EquivariantError::InvalidComponent("witness coefficients overflow".into()))?;
    let (_, form) = LinearForm::new(coeffs).primitive().expect("kernel vector is nonzero");
    Ok(form)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentVerdict {
    pub index: usize,
    pub passed: bool,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcentrationReport {
    pub components: Vec<ComponentVerdict>,
}

impl ConcentrationReport {
    pub fn passed(&self) -> bool {
        self.components.iter().all(|c| c.passed)
    }
}

/// Checks that every Euler class is a localized unit.
pub fn concentration_check<F: Scalar>(components: &[FixedComponent<F>]) -> ConcentrationReport {
    let verdict = |fc: &FixedComponent<F>| -> Option<String> {
        if fc.weights.iter().any(|(l, _)| l.is_zero()) {
            return Some("trivial weight".into());
        }
        let unit = fc.algebra.unit_index();
        if fc.corrections.iter().flatten().any(|n| !n.coeffs[unit].is_zero()) {
            return Some("non-nilpotent remainder".into());
        }
        match euler_class(fc).and_then(|e| invert_localized(&e)) {
            Ok(_) => None,
            Err(err) => Some(err.to_string()),
        }
    };
    ConcentrationReport {
        components: components
            .iter()
            .enumerate()
            .map(|(index, fc)| {
                let reason = verdict(fc);
                ComponentVerdict { index, passed: reason.is_none(), reason }
            })
            .collect(),
    }
}

/// The `n+1` coordinate points of `Pⁿ` under the diagonal torus in
/// `x_1..x_{n+1}`; the tangent weights at point `i` are `x_j − x_i`.
pub fn projective_space_components<F: Scalar>(n: usize) -> Vec<FixedComponent<F>> {
    let r = n + 1;
    (0..r)
        .map(|i| {
            let weights = (0..r)
                .filter(|&j| j != i)
                .map(|j| {
                    let mut c = vec![0; r];
                    c[j] = 1;
                    c[i] = -1;
                    LinearForm::new(c)
                })
                .collect();
            FixedComponent::point(r, weights).expect("nonzero weights")
        })
        .collect()
}

/// Restrictions of `c₁ᵀ(O(1))`: `−x_i` at point `i`.
pub fn projective_space_o1_restrictions<F: Scalar>(components: &[FixedComponent<F>]) -> Vec<EquivariantElement<F>> {
    components
        .iter()
        .enumerate()
        .map(|(i, fc)| EquivariantElement::from_poly(fc.algebra.clone(), GradedPoly::var(fc.num_vars, i).neg()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;
    use num_rational::BigRational;

    type Q = BigRational;
    type E = EquivariantElement<Q>;

    fn poly(s: &str, r: usize) -> GradedPoly<Q> {
        parse_expr(s, 'x', r).unwrap().eval(&GradedPoly::zero(r)).unwrap()
    }

    fn lf(c: &[i64]) -> LinearForm {
        LinearForm::new(c.to_vec())
    }

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn algebra_validation() {
        let a = ComponentAlgebra::<Q>::truncated(3);
        assert_eq!(a.dim(), 4);
        assert_eq!(a.nilpotency_order(), 4);
        assert_eq!(ComponentAlgebra::<Q>::point().nilpotency_order(), 1);
        let two = ComponentAlgebra::<Q>::monomial(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(two.nilpotency_order(), 3);
        // non-associative / wrong degree tables are rejected
        let bad_deg = vec![
            vec![vec![q(1), q(0)], vec![q(0), q(1)]],
            vec![vec![q(0), q(1)], vec![q(1), q(0)]],
        ];
        assert!(ComponentAlgebra::new(vec![0, 2], bad_deg).is_err());
        assert!(ComponentAlgebra::<Q>::new(vec![0, 0], vec![]).is_err());
        assert!(ComponentAlgebra::<Q>::monomial(&[vec![0], vec![2]]).is_err());
    }

    #[test]
    fn euler_classes() {
        let p = FixedComponent::<Q>::point(2, vec![lf(&[-1, 1])]).unwrap();
        assert_eq!(euler_class(&p).unwrap().coefficients()[0], poly("x2 - x1", 2));
        let p = FixedComponent::<Q>::point(2, vec![lf(&[1, 0]), lf(&[0, 1])]).unwrap();
        let e = euler_class(&p).unwrap();
        assert_eq!(e.coefficients()[0], poly("x1*x2", 2));
        assert_eq!(e.homogeneous_degree(), Some(4));
        assert_eq!(
            FixedComponent::<Q>::point(2, vec![lf(&[1, 0]), lf(&[0, 0])]).unwrap_err(),
            EquivariantError::ZeroWeight { index: 1 }
        );
    }

    #[test]
    fn inversion_with_nilpotent() {
        let a = Arc::new(ComponentAlgebra::<Q>::truncated(1));
        // x1·(1 + b)
        let e = E::new(a.clone(), vec![poly("x1", 1), poly("x1", 1)], []).unwrap();
        let inv = invert_localized(&e).unwrap();
        let expect = E::new(a.clone(), vec![poly("1", 1), poly("-1", 1)], [(lf(&[1]), 1)]).unwrap();
        assert_eq!(inv, expect);
        assert_eq!(inv.to_string(), "[(1)*b0 + (-1)*b1]/(x1)");

        let single = E::from_poly(a.clone(), poly("x1", 1));
        assert_eq!(invert_localized(&single).unwrap(), E::new(a.clone(), vec![poly("1", 1), poly("0", 1)], [(lf(&[1]), 1)]).unwrap());

        let zero = E::zero(a.clone(), 1);
        assert!(matches!(invert_localized(&zero), Err(EquivariantError::NotInvertible { .. })));
        let b = E::basis_times(a.clone(), 1, poly("1", 1));
        assert!(matches!(invert_localized(&b), Err(EquivariantError::NotInvertible { .. })));
        let a2 = Arc::new(ComponentAlgebra::<Q>::point());
        let sq = E::from_poly(a2, poly("x1^2 + x2^2", 2));
        assert!(matches!(invert_localized(&sq), Err(EquivariantError::NotInvertible { .. })));
    }

    #[test]
    fn inversion_with_denominator() {
        let a = Arc::new(ComponentAlgebra::<Q>::truncated(2));
        let e = E::new(a.clone(), vec![poly("3*x1*(x1 - x2)", 2), poly("x2", 2), poly("x1 + 5", 2)], [(lf(&[0, 2]), 1)])
            .unwrap();
        let inv = invert_localized(&e).unwrap();
        assert_eq!(inv.mul(&e).unwrap(), E::unit(a, 2));
    }

    #[test]
    fn inversion_when_nilpotent_part_cancels_denominator() {
        let a = Arc::new(ComponentAlgebra::<Q>::truncated(1));
        let e = E::new(a.clone(), vec![poly("5/2", 1), poly("-1/2*x1^2", 1)], [(lf(&[1]), 1)]).unwrap();
        let inv = invert_localized(&e).unwrap();
        assert_eq!(inv.mul(&e).unwrap(), E::unit(a, 1));
    }

    #[test]
    fn roundtrip() {
        let a = Arc::new(ComponentAlgebra::<Q>::truncated(1));
        let e = E::new(a.clone(), vec![poly("x1", 1), poly("2", 1)], []).unwrap();
        let beta = E::basis_times(a.clone(), 1, poly("1", 1));
        assert!(self_intersection_roundtrip(&beta, &e).unwrap().exact);
        assert!(self_intersection_roundtrip(&E::unit(a.clone(), 1), &e).unwrap().exact);
        assert!(self_intersection_roundtrip(&beta, &E::zero(a, 1)).is_err());
    }

    #[test]
    fn integrals_over_components() {
        let pt = FixedComponent::<Q>::point(2, vec![lf(&[1, 0])]).unwrap();
        let el = E::from_poly(pt.algebra().clone(), poly("x1 + x2^2", 2));
        assert_eq!(component_integral(&pt, &el).unwrap().as_polynomial(), Some(&poly("x1 + x2^2", 2)));

        let a = Arc::new(ComponentAlgebra::<Q>::truncated(2));
        let fc = FixedComponent::new(a.clone(), 2, vec![(lf(&[1, 0]), 1)], vec![], vec![q(0), q(0), q(1)]).unwrap();
        let low = E::basis_times(a.clone(), 1, poly("x1", 2));
        assert!(component_integral(&fc, &low).unwrap().is_zero());
        let top = E::new(a.clone(), vec![poly("0", 2), poly("0", 2), poly("x1", 2)], [(lf(&[0, 1]), 1)]).unwrap();
        let got = component_integral(&fc, &top).unwrap();
        assert_eq!(got, RationalFunction::new(poly("x1", 2), [(lf(&[0, 1]), 1)]).unwrap());
        assert!(FixedComponent::new(a, 2, vec![], vec![], vec![q(1), q(0), q(0)]).is_err());
    }

    #[test]
    fn p1_abbv() {
        let comps = projective_space_components::<Q>(1);
        let units: Vec<E> = comps.iter().map(FixedComponent::unit).collect();
        assert!(abbv_integrate(&comps, &units).unwrap().is_zero());
        let eulers: Vec<E> = comps.iter().map(|c| euler_class(c).unwrap()).collect();
        assert_eq!(abbv_integrate(&comps, &eulers).unwrap().as_polynomial(), Some(&poly("2", 2)));
        let o1 = projective_space_o1_restrictions(&comps);
        assert_eq!(abbv_integrate(&comps, &o1).unwrap().as_polynomial(), Some(&poly("1", 2)));
        assert!(abbv_integrate(&comps, &o1[..1]).is_err());
    }

    #[test]
    fn p2_with_a_line_component() {
        // P² under a one-dimensional torus fixing a line L and a point p.
        let line = Arc::new(ComponentAlgebra::<Q>::truncated(1));
        let h = E::basis_times(line.clone(), 1, poly("1", 1));
        let fl = FixedComponent::new(line.clone(), 1, vec![(lf(&[1]), 1)], vec![Some(h.clone())], vec![q(0), q(1)]).unwrap();
        let fp = FixedComponent::<Q>::new(Arc::new(ComponentAlgebra::point()), 1, vec![(lf(&[-1]), 2)], vec![], vec![q(1)]).unwrap();
        let comps = vec![fl.clone(), fp.clone()];
        let one = abbv_integrate(&comps, &[fl.unit(), fp.unit()]).unwrap();
        assert!(one.is_zero());
        let eulers: Vec<E> = comps.iter().map(|c| euler_class(c).unwrap()).collect();
        // χ(P¹) · 1 + 1 = 3 after the line's own tangent class is included
        let tangent_l = E::new(line.clone(), vec![poly("0", 1), poly("2", 1)], []).unwrap();
        let e_total_l = eulers[0].mul(&tangent_l).unwrap();
        let e_total_p = eulers[1].clone();
        assert_eq!(abbv_integrate(&comps, &[e_total_l, e_total_p]).unwrap().as_polynomial(), Some(&poly("3", 1)));
        // H restricts to h on the line and −x at the point; ∫H² = 1
        let hp = E::from_poly(fp.algebra().clone(), poly("-x1", 1));
        let h2 = abbv_integrate(&comps, &[h.mul(&h).unwrap(), hp.mul(&hp).unwrap()]).unwrap();
        assert_eq!(h2.as_polynomial(), Some(&poly("1", 1)));
        assert!(concentration_check(&comps).passed());
    }

    #[test]
    fn witnesses() {
        assert_eq!(orbit_annihilation_witness::<Q>(2, &[vec![1, 0]]).unwrap(), lf(&[0, 1]));
        assert_eq!(orbit_annihilation_witness::<Q>(1, &[]).unwrap(), lf(&[1]));
        assert_eq!(orbit_annihilation_witness::<Q>(2, &[vec![1, 0], vec![0, 1]]), Err(EquivariantError::NotProper));
        let w = orbit_annihilation_witness::<Q>(3, &[vec![1, 2, 3]]).unwrap();
        assert_eq!(w.coeffs()[0] + 2 * w.coeffs()[1] + 3 * w.coeffs()[2], 0);
    }

    #[test]
    fn concentration_failures() {
        let bad = FixedComponent::<Q>::new_unchecked(
            Arc::new(ComponentAlgebra::point()),
            1,
            vec![(lf(&[0]), 1)],
            vec![],
            vec![q(1)],
        );
        let report = concentration_check(&[bad]);
        assert_eq!(report.components[0].reason.as_deref(), Some("trivial weight"));
        let a = Arc::new(ComponentAlgebra::<Q>::truncated(1));
        let corr = E::unit(a.clone(), 1);
        let fc = FixedComponent::new(a, 1, vec![(lf(&[1]), 1)], vec![Some(corr)], vec![q(0), q(1)]).unwrap();
        let report = concentration_check(&[fc]);
        assert!(!report.passed());
        assert_eq!(report.components[0].reason.as_deref(), Some("non-nilpotent remainder"));
    }
}
