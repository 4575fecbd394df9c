//! Cochain complexes with constant field coefficients.
//!
//! Sign convention: for a `(d+1)`-simplex `τ = (v_0 < ... < v_{d+1})`,
//! `(δf)(τ) = Σ_i (-1)^i f(τ \ v_i)`. Relative, quotient and tensor
//! complexes are all derived from this one matrix.

use thiserror::Error;

use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;
use crate::simplicial::{
    boundary_faces, embed_by_labels, validate, ComplexError, SimplicialComplex,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CochainError {
    #[error("differential {degree} has shape {got:?}, expected {expected:?}")]
    Shape { degree: usize, expected: (usize, usize), got: (usize, usize) },
    #[error("d{next} ∘ d{degree} is not zero")]
    NotAComplex { degree: usize, next: usize },
    #[error("{0} differentials given for {1} degrees")]
    Length(usize, usize),
    #[error("basis index {index} out of range in degree {degree}")]
    IndexOutOfRange { degree: usize, index: usize },
    #[error("supported coordinates in degree {degree} are not closed under the differential")]
    NotClosed { degree: usize },
}

/// `C^0 → C^1 → ... → C^top`, with `differentials[d] : C^d → C^{d+1}` stored as
/// a `dims[d+1] × dims[d]` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainComplex<F> {
    dims: Vec<usize>,
    differentials: Vec<Matrix<F>>,
}

impl<F: Scalar> CochainComplex<F> {
    pub fn new(dims: Vec<usize>, differentials: Vec<Matrix<F>>) -> Result<Self, CochainError> {
        if differentials.len() != dims.len().saturating_sub(1) {
            return Err(CochainError::Length(differentials.len(), dims.len()));
        }
        for (d, m) in differentials.iter().enumerate() {
            let expected = (dims[d + 1], dims[d]);
            if (m.rows(), m.cols()) != expected {
                return Err(CochainError::Shape { degree: d, expected, got: (m.rows(), m.cols()) });
            }
        }
        for d in 0..differentials.len().saturating_sub(1) {
            let composite = differentials[d + 1].mul(&differentials[d]).expect("shapes checked");
            if !composite.is_zero() {
                return Err(CochainError::NotAComplex { degree: d, next: d + 1 });
            }
        }
        Ok(Self { dims, differentials })
    }

    pub fn zero() -> Self {
        Self { dims: Vec::new(), differentials: Vec::new() }
    }

    /// Dimension of `C^d`; zero outside the stored range.
    pub fn dim(&self, d: i64) -> usize {
        usize::try_from(d).ok().and_then(|d| self.dims.get(d)).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// One past the highest stored degree.
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// `C^d → C^{d+1}` for any integer `d`, zero outside the stored range.
    pub fn differential(&self, d: i64) -> Matrix<F> {
        match usize::try_from(d).ok().and_then(|d| self.differentials.get(d)) {
            Some(m) => m.clone(),
            None => Matrix::zeros(self.dim(d + 1), self.dim(d)),
        }
    }

    pub fn differentials(&self) -> &[Matrix<F>] {
        &self.differentials
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(d, &n)| sign(d) * n as i64).sum()
    }

    /// `dim H^d` from ranks alone.
    pub fn betti(&self, d: i64) -> usize {
        let n = self.dim(d);
        n - self.differential(d).rank() - self.differential(d - 1).rank()
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        (0..self.len() as i64).map(|d| self.betti(d)).collect()
    }

    /// Keeps the listed basis indices in each degree. The caller guarantees
    /// the kept coordinates span a subcomplex or a quotient complex.
    pub(crate) fn restrict(&self, keep: &[Vec<usize>]) -> Self {
        let dims: Vec<usize> = keep.iter().map(|k| k.len()).collect();
        let differentials =
            (0..dims.len().saturating_sub(1)).map(|d| self.differential(d as i64).submatrix(&keep[d + 1], &keep[d])).collect();
        Self { dims, differentials }
    }
}

fn sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Constant-coefficient simplicial cochains of `x`.
pub fn cochain_complex<F: Scalar>(x: &SimplicialComplex) -> Result<CochainComplex<F>, ComplexError> {
    let report = validate(x);
    if !report.is_valid() {
        return Err(ComplexError::InvalidComplex(report));
    }
    let dims: Vec<usize> = (0..x.num_levels()).map(|d| x.simplices(d).len()).collect();
    let differentials = (0..dims.len().saturating_sub(1))
        .map(|d| {
            let mut m = Matrix::zeros(dims[d + 1], dims[d]);
            for (row, tau) in x.simplices(d + 1).iter().enumerate() {
                for (i, face) in boundary_faces(tau).iter().enumerate() {
                    let col = x.simplex_index(face).expect("validated complex is closed");
                    m[(row, col)] = F::from_int(sign(i));
                }
            }
            m
        })
        .collect();
    Ok(CochainComplex::new(dims, differentials).expect("d∘d = 0 for simplicial cochains"))
}

/// A cochain complex together with a coordinate subcomplex: in every degree
/// a set of basis indices whose span is closed under the differential.
///
/// The span is the relative (supported) complex, and the remaining
/// coordinates form the quotient complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainPair<F> {
    absolute: CochainComplex<F>,
    supported: Vec<Vec<usize>>,
    complement: Vec<Vec<usize>>,
}

impl<F: Scalar> CochainPair<F> {
    pub fn new(absolute: CochainComplex<F>, supported: Vec<Vec<usize>>) -> Result<Self, CochainError> {
        if supported.len() > absolute.len() {
            return Err(CochainError::Length(supported.len(), absolute.len()));
        }
        let mut supported = supported;
        supported.resize(absolute.len(), Vec::new());
        for (d, s) in supported.iter_mut().enumerate() {
            s.sort_unstable();
            s.dedup();
            if let Some(&index) = s.last().filter(|&&i| i >= absolute.dim(d as i64)) {
                return Err(CochainError::IndexOutOfRange { degree: d, index });
            }
        }
        let complement: Vec<Vec<usize>> = supported
            .iter()
            .enumerate()
            .map(|(d, s)| (0..absolute.dim(d as i64)).filter(|i| s.binary_search(i).is_err()).collect())
            .collect();
        for d in 0..absolute.len().saturating_sub(1) {
            // supported span must be closed: no entry from supported columns into complement rows
            let leak = absolute.differential(d as i64).submatrix(&complement[d + 1], &supported[d]);
            if !leak.is_zero() {
                return Err(CochainError::NotClosed { degree: d });
            }
        }
        Ok(Self { absolute, supported, complement })
    }

    /// The pair `(X, C)` for a subcomplex `c` of `x` (matched by labels).
    pub fn simplicial(x: &SimplicialComplex, c: &SimplicialComplex) -> Result<Self, ComplexError> {
        let absolute = cochain_complex(x)?;
        let report = validate(c);
        if !report.is_valid() {
            return Err(ComplexError::InvalidComplex(report));
        }
        let mut in_c = embed_by_labels(x, c)?;
        in_c.resize(absolute.len(), Vec::new());
        let supported = in_c
            .iter_mut()
            .enumerate()
            .map(|(d, idx)| {
                idx.sort_unstable();
                (0..absolute.dim(d as i64)).filter(|i| idx.binary_search(i).is_err()).collect()
            })
            .collect();
        Ok(Self::new(absolute, supported).expect("relative cochains of a subcomplex form a subcomplex"))
    }

    /// Product pair: supported where both factors are supported.
    pub fn tensor(a: &Self, b: &Self) -> Self {
        let t = TensorComplex::new(&a.absolute, &b.absolute);
        let supported = (0..t.complex.len())
            .map(|n| {
                let mut idx = Vec::new();
                for p in t.bidegrees(n) {
                    let q = n - p;
                    for &i in a.supported_indices(p) {
                        for &j in b.supported_indices(q) {
                            idx.push(t.index(p, i, q, j));
                        }
                    }
                }
                idx.sort_unstable();
                idx
            })
            .collect();
        Self::new(t.complex, supported).expect("tensor of subcomplexes is a subcomplex")
    }

    pub fn absolute(&self) -> &CochainComplex<F> {
        &self.absolute
    }

    pub fn supported_indices(&self, d: usize) -> &[usize] {
        self.supported.get(d).map_or(&[], |v| v.as_slice())
    }

    pub fn complement_indices(&self, d: usize) -> &[usize] {
        self.complement.get(d).map_or(&[], |v| v.as_slice())
    }

    pub fn relative(&self) -> CochainComplex<F> {
        self.absolute.restrict(&self.supported)
    }

    pub fn quotient(&self) -> CochainComplex<F> {
        self.absolute.restrict(&self.complement)
    }

    /// Supported coordinates → absolute cochain.
    pub fn include(&self, d: i64, v: &[F]) -> Vector<F> {
        let mut out = vec![F::zero(); self.absolute.dim(d)];
        if let Ok(d) = usize::try_from(d) {
            for (x, &i) in v.iter().zip(self.supported_indices(d)) {
                out[i] = x.clone();
            }
        }
        out
    }

    /// Absolute cochain → supported coordinates (assumes it vanishes elsewhere).
    pub fn supported_part(&self, d: i64, v: &[F]) -> Vector<F> {
        usize::try_from(d).map_or_else(|_| Vec::new(), |d| self.supported_indices(d).iter().map(|&i| v[i].clone()).collect())
    }

    /// Absolute cochain → quotient coordinates (restriction to the complement).
    pub fn restrict_to_complement(&self, d: i64, v: &[F]) -> Vector<F> {
        usize::try_from(d).map_or_else(|_| Vec::new(), |d| self.complement_indices(d).iter().map(|&i| v[i].clone()).collect())
    }

    /// Quotient coordinates → absolute cochain, extended by zero.
    pub fn extend_by_zero(&self, d: i64, v: &[F]) -> Vector<F> {
        let mut out = vec![F::zero(); self.absolute.dim(d)];
        if let Ok(d) = usize::try_from(d) {
            for (x, &i) in v.iter().zip(self.complement_indices(d)) {
                out[i] = x.clone();
            }
        }
        out
    }
}

/// Cochains of `x` vanishing on the simplices of the subcomplex `c`.
pub fn relative_cochain_complex<F: Scalar>(
    x: &SimplicialComplex,
    c: &SimplicialComplex,
) -> Result<CochainComplex<F>, ComplexError> {
    Ok(CochainPair::simplicial(x, c)?.relative())
}

/// `A ⊗ B` with the block layout needed to place elementary tensors.
///
/// Degree `n` is ordered by `p` ascending, then by the index in `A^p`, then
/// by the index in `B^{n-p}`.
#[derive(Debug, Clone)]
pub struct TensorComplex<F> {
    pub complex: CochainComplex<F>,
    a_dims: Vec<usize>,
    b_dims: Vec<usize>,
    offsets: Vec<Vec<usize>>,
}

impl<F: Scalar> TensorComplex<F> {
    pub fn new(a: &CochainComplex<F>, b: &CochainComplex<F>) -> Self {
        let a_dims = a.dims().to_vec();
        let b_dims = b.dims().to_vec();
        let top = if a_dims.is_empty() || b_dims.is_empty() { 0 } else { a_dims.len() + b_dims.len() - 1 };
        let mut offsets = vec![Vec::new(); top];
        let mut dims = vec![0usize; top];
        for n in 0..top {
            offsets[n] = vec![0; a_dims.len()];
            for p in Self::range(&a_dims, &b_dims, n) {
                offsets[n][p] = dims[n];
                dims[n] += a_dims[p] * b_dims[n - p];
            }
        }
        let mut t = Self { complex: CochainComplex::zero(), a_dims, b_dims, offsets };
        let differentials = (0..top.saturating_sub(1))
            .map(|n| {
                let mut m = Matrix::zeros(dims[n + 1], dims[n]);
                for p in t.bidegrees(n) {
                    let q = n - p;
                    let da = a.differential(p as i64);
                    let db = b.differential(q as i64);
                    let s = F::from_int(sign(p));
                    for i in 0..t.a_dims[p] {
                        for j in 0..t.b_dims[q] {
                            let col = t.index(p, i, q, j);
                            // d_A x ⊗ y lands in (p+1, q)
                            if p + 1 < t.a_dims.len() {
                                for i2 in 0..t.a_dims[p + 1] {
                                    let c = &da[(i2, i)];
                                    if !c.is_zero() {
                                        m[(t.index(p + 1, i2, q, j), col)] = c.clone();
                                    }
                                }
                            }
                            // (-1)^p x ⊗ d_B y lands in (p, q+1)
                            if q + 1 < t.b_dims.len() {
                                for j2 in 0..t.b_dims[q + 1] {
                                    let c = &db[(j2, j)];
                                    if !c.is_zero() {
                                        m[(t.index(p, i, q + 1, j2), col)] = s.clone() * c.clone();
                                    }
                                }
                            }
                        }
                    }
                }
                m
            })
            .collect();
        t.complex = CochainComplex::new(dims, differentials).expect("Leibniz rule gives d∘d = 0");
        t
    }

    fn range(a_dims: &[usize], b_dims: &[usize], n: usize) -> std::ops::RangeInclusive<usize> {
        let lo = n.saturating_sub(b_dims.len().saturating_sub(1));
        let hi = n.min(a_dims.len().saturating_sub(1));
        lo..=hi
    }

    /// Values of `p` with a block in total degree `n`.
    pub fn bidegrees(&self, n: usize) -> std::ops::RangeInclusive<usize> {
        Self::range(&self.a_dims, &self.b_dims, n)
    }

    pub fn index(&self, p: usize, i: usize, q: usize, j: usize) -> usize {
        self.offsets[p + q][p] + i * self.b_dims[q] + j
    }

    /// `x ⊗ y` with `x ∈ A^p`, `y ∈ B^q`, as a vector in degree `p + q`.
    pub fn embed(&self, p: usize, x: &[F], q: usize, y: &[F]) -> Vector<F> {
        let n = p + q;
        let mut out = vec![F::zero(); self.complex.dim(n as i64)];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    out[self.index(p, i, q, j)] = xi.clone() * yj.clone();
                }
            }
        }
        out
    }
}

pub fn tensor_complex<F: Scalar>(a: &CochainComplex<F>, b: &CochainComplex<F>) -> CochainComplex<F> {
    TensorComplex::new(a, b).complex
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{complement_subcomplex, full_subcomplex};
    use num_rational::BigRational;

    type Q = BigRational;

    fn cc(x: &SimplicialComplex) -> CochainComplex<Q> {
        cochain_complex(x).unwrap()
    }

    #[test]
    fn absolute_examples() {
        let p = cc(&SimplicialComplex::point());
        assert_eq!(p.dims(), &[1]);
        assert!(p.differentials().is_empty());

        let circle = cc(&SimplicialComplex::polygon(4));
        assert_eq!(circle.dims(), &[4, 4]);
        assert_eq!(circle.differential(0).rank(), 3);

        let tri = cc(&SimplicialComplex::simplex(2));
        assert_eq!(tri.dims(), &[3, 3, 1]);
        assert_eq!(tri.betti_numbers(), vec![1, 0, 0]);
    }

    #[test]
    fn coboundary_signs() {
        // edge (0,1): δ(v0*) = -e*, δ(v1*) = +e*
        let x = SimplicialComplex::simplex(1);
        let d0 = cc(&x).differential(0);
        assert_eq!(d0, Matrix::from_i64_rows(&[&[-1, 1]]));
    }

    #[test]
    fn invalid_complex_rejected() {
        let broken = SimplicialComplex::from_parts(vec!["a".into(), "b".into()], vec![vec![vec![0]], vec![vec![0, 1]]]);
        assert!(matches!(cochain_complex::<Q>(&broken), Err(ComplexError::InvalidComplex(_))));
    }

    #[test]
    fn constructor_checks() {
        let m = Matrix::<Q>::from_i64_rows(&[&[1]]);
        assert!(matches!(CochainComplex::new(vec![1, 1, 1], vec![m.clone(), m.clone()]), Err(CochainError::NotAComplex { .. })));
        assert!(matches!(CochainComplex::new(vec![1, 2], vec![m]), Err(CochainError::Shape { .. })));
        assert!(matches!(CochainComplex::<Q>::new(vec![1, 2], vec![]), Err(CochainError::Length(0, 2))));
    }

    #[test]
    fn relative_examples() {
        let x = SimplicialComplex::polygon(4);
        let c = complement_subcomplex(&x, &full_subcomplex(&x, [0, 2]).unwrap());
        let rel: CochainComplex<Q> = relative_cochain_complex(&x, &c).unwrap();
        assert_eq!(rel.dims(), &[2, 4]);
        assert_eq!(rel.betti_numbers(), vec![0, 2]);

        let rel: CochainComplex<Q> = relative_cochain_complex(&x, &SimplicialComplex::empty()).unwrap();
        assert_eq!(rel, cc(&x));

        let rel: CochainComplex<Q> = relative_cochain_complex(&x, &x).unwrap();
        assert_eq!(rel.dims(), &[0, 0]);
        assert!(rel.is_empty());

        let other = SimplicialComplex::simplex(1);
        // labels v0, v1 exist in x and edge v0v1 too
        assert!(relative_cochain_complex::<Q>(&x, &other).is_ok());
        let chord = SimplicialComplex::new(vec!["v0".into(), "v2".into()], &[vec![0, 1]]).unwrap();
        assert!(matches!(relative_cochain_complex::<Q>(&x, &chord), Err(ComplexError::NotSubcomplex(_))));
    }

    #[test]
    fn pair_dimensions_split() {
        let x = SimplicialComplex::simplex_boundary(3);
        let c = complement_subcomplex(&x, &full_subcomplex(&x, [1]).unwrap());
        let pair = CochainPair::<Q>::simplicial(&x, &c).unwrap();
        let q = pair.quotient();
        assert_eq!(q, cc(&c));
        for d in 0..3 {
            assert_eq!(pair.absolute().dim(d), pair.relative().dim(d) + q.dim(d));
        }
    }

    #[test]
    fn tensor_examples() {
        let p = cc(&SimplicialComplex::point());
        assert_eq!(tensor_complex(&p, &p).dims(), &[1]);

        let circle = cc(&SimplicialComplex::polygon(4));
        assert_eq!(tensor_complex(&circle, &p), circle);
        assert_eq!(tensor_complex(&p, &circle), circle);

        let torus = tensor_complex(&circle, &circle);
        assert_eq!(torus.dims(), &[16, 32, 16]);
        assert_eq!(torus.betti_numbers(), vec![1, 2, 1]);
        assert_eq!(tensor_complex(&circle, &CochainComplex::zero()).dims(), &[] as &[usize]);
    }
}
