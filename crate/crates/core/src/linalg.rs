//! Exact dense linear algebra over a [`Scalar`] field.
//!
//! Row reduction always takes the first nonzero entry in a column as the
//! pivot. With exact arithmetic there is nothing to stabilise, and a fixed
//! pivot rule makes every basis this module returns reproducible.

use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: String, got: String },
    #[error("direction vectors are linearly dependent")]
    DependentDirections,
}

pub type Vector<F> = Vec<F>;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    entries: Vec<F>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<F>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Shape {
                expected: format!("{} entries", rows * cols),
                got: format!("{} entries", entries.len()),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds a matrix from row vectors; `cols` is needed when `rows` is empty.
    pub fn from_rows(cols: usize, rows: &[Vector<F>]) -> Result<Self, LinalgError> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::Shape {
                    expected: format!("row of length {cols}"),
                    got: format!("row of length {}", r.len()),
                });
            }
            entries.extend(r.iter().cloned());
        }
        Ok(Self { rows: rows.len(), cols, entries })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vector<F>]) -> Result<Self, LinalgError> {
        Ok(Self::from_rows(rows, columns)?.transpose())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vector<F>> =
            rows.iter().map(|r| r.iter().map(|&x| F::from_int(x)).collect()).collect();
        Self::from_rows(cols, &rows).expect("ragged integer rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[F] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape {
                expected: format!("{} rows", self.cols),
                got: format!("{} rows", other.rows),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F]) -> Result<Vector<F>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Shape {
                expected: format!("vector of length {}", self.cols),
                got: format!("vector of length {}", v.len()),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    /// Keeps the listed rows and columns, in the listed order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;

    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.entries[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.entries[i * self.cols + j]
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[F]> = (0..self.rows).map(|i| &self.entries[i * self.cols..(i + 1) * self.cols]).collect();
        f.debug_struct("Matrix").field("rows", &self.rows).field("cols", &self.cols).field("entries", &rows).finish()
    }
}

/// Reduced row-echelon form and the pivot columns in increasing order.
pub fn rref<F: Scalar>(m: &Matrix<F>) -> (Matrix<F>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.entries.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = F::one() / a[(r, c)].clone();
        for j in c..cols {
            if !a[(r, j)].is_zero() {
                a[(r, j)] = a[(r, j)].clone() * inv.clone();
            }
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let factor = a[(i, c)].clone();
            for j in c..cols {
                if !a[(r, j)].is_zero() {
                    a[(i, j)] = a[(i, j)].clone() - factor.clone() * a[(r, j)].clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Canonical free-variable basis of the null space: one vector per free
/// column, with that variable set to one and the other free variables zero.
pub fn kernel_basis<F: Scalar>(m: &Matrix<F>) -> Vec<Vector<F>> {
    let (r, pivots) = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![F::zero(); m.cols];
            v[free] = F::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, free)].clone();
            }
            v
        })
        .collect()
}

/// Column-space basis made of the pivot columns of `m` itself.
pub fn image_basis<F: Scalar>(m: &Matrix<F>) -> Vec<Vector<F>> {
    let (_, pivots) = rref(m);
    pivots.into_iter().map(|c| m.column(c)).collect()
}

/// Particular solution of `m x = b` with every free variable zero, or
/// `None` when the system is inconsistent.
pub fn solve_affine<F: Scalar>(m: &Matrix<F>, b: &[F]) -> Result<Option<Vector<F>>, LinalgError> {
    if b.len() != m.rows {
        return Err(LinalgError::Shape {
            expected: format!("right-hand side of length {}", m.rows),
            got: format!("length {}", b.len()),
        });
    }
    let mut aug = Matrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, m.cols)] = b[i].clone();
    }
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![F::zero(); m.cols];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r[(row, m.cols)].clone();
    }
    Ok(Some(x))
}

pub fn are_independent<F: Scalar>(dim: usize, vectors: &[Vector<F>]) -> bool {
    match Matrix::from_columns(dim, vectors) {
        Ok(m) => m.rank() == vectors.len(),
        Err(_) => false,
    }
}

pub fn add_vec<F: Scalar>(a: &[F], b: &[F]) -> Vector<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub_vec<F: Scalar>(a: &[F], b: &[F]) -> Vector<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn scale_vec<F: Scalar>(s: &F, a: &[F]) -> Vector<F> {
    a.iter().map(|x| s.clone() * x.clone()).collect()
}

/// `Σ coeffs[i] · vectors[i]` in a space of dimension `dim`.
pub fn combine<F: Scalar>(dim: usize, coeffs: &[F], vectors: &[Vector<F>]) -> Vector<F> {
    let mut out = vec![F::zero(); dim];
    for (c, v) in coeffs.iter().zip(vectors) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o = o.clone() + c.clone() * x.clone();
            }
        }
    }
    out
}

/// An affine subspace `base_point + span(directions)` with independent
/// directions, so that every member has unique coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSubspace<F> {
    ambient_dim: usize,
    base_point: Vector<F>,
    directions: Vec<Vector<F>>,
    direction_matrix: Matrix<F>,
}

impl<F: Scalar> AffineSubspace<F> {
    pub fn new(base_point: Vector<F>, directions: Vec<Vector<F>>) -> Result<Self, LinalgError> {
        let ambient_dim = base_point.len();
        if let Some(bad) = directions.iter().find(|d| d.len() != ambient_dim) {
            return Err(LinalgError::Shape {
                expected: format!("direction of length {ambient_dim}"),
                got: format!("length {}", bad.len()),
            });
        }
        let direction_matrix = Matrix::from_columns(ambient_dim, &directions)?;
        if direction_matrix.rank() != directions.len() {
            return Err(LinalgError::DependentDirections);
        }
        Ok(Self { ambient_dim, base_point, directions, direction_matrix })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn base_point(&self) -> &[F] {
        &self.base_point
    }

    pub fn directions(&self) -> &[Vector<F>] {
        &self.directions
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    /// Coordinates of `v - base_point` in the direction basis, if `v` is a member.
    pub fn membership(&self, v: &[F]) -> Result<Option<Vector<F>>, LinalgError> {
        if v.len() != self.ambient_dim {
            return Err(LinalgError::Shape {
                expected: format!("vector of length {}", self.ambient_dim),
                got: format!("length {}", v.len()),
            });
        }
        solve_affine(&self.direction_matrix, &sub_vec(v, &self.base_point))
    }

    pub fn point(&self, coords: &[F]) -> Vector<F> {
        add_vec(&self.base_point, &combine(self.ambient_dim, coords, &self.directions))
    }
}
