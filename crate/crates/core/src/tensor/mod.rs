//! Dense order-k tensors on ℝⁿ.
//!
//! Storage is row-major over the multi-index with the last index fastest:
//! the 0-based multi-index `(i_0, ..., i_{k-1})` lives at
//! `Σ_s i_s · n^(k-1-s)`. Order 0 is a scalar, order 1 a vector, order 2 an
//! `n × n` matrix. Every module in the crate relies on this layout.

mod action;
mod multilinear;
mod partition;
mod project;

pub use action::{conjugate, permutation_matrix};
pub use multilinear::{apply, apply_vectors, contract_last_pair};
pub use partition::Partition;
pub use project::{is_block_constant, is_block_constant_approx, project, project_block};

use crate::error::{Error, Result};

/// Order-2 tensors. Kept as an alias so matrices flow through every tensor
/// operation unchanged.
pub type Matrix = Tensor;

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    order: usize,
    dim: usize,
    data: Vec<f64>,
}

/// Advances a row-major multi-index over `{0..n-1}^k`. Returns `false` once
/// the last index has been passed (the index is then back at all zeros).
#[inline]
pub fn next_index(idx: &mut [usize], n: usize) -> bool {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < n {
            return true;
        }
        *slot = 0;
    }
    false
}

impl Tensor {
    pub fn zeros(order: usize, dim: usize) -> Self {
        assert!(dim >= 1, "tensor dimension must be positive");
        Tensor {
            order,
            dim,
            data: vec![0.0; dim.pow(order as u32)],
        }
    }

    pub fn from_data(order: usize, dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::shape("tensor", "dim >= 1", "dim = 0"));
        }
        let expected = dim
            .checked_pow(order as u32)
            .ok_or_else(|| Error::shape("tensor", "n^order to fit in memory", format!("{dim}^{order}")))?;
        if data.len() != expected {
            return Err(Error::shape(
                "tensor data",
                format!("{expected} entries (= {dim}^{order})"),
                format!("{} entries", data.len()),
            ));
        }
        Ok(Tensor { order, dim, data })
    }

    pub fn from_fn(order: usize, dim: usize, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let mut t = Tensor::zeros(order, dim);
        let mut idx = vec![0; order];
        for slot in t.data.iter_mut() {
            *slot = f(&idx);
            next_index(&mut idx, dim);
        }
        t
    }

    pub fn scalar(value: f64, dim: usize) -> Self {
        Tensor {
            order: 0,
            dim,
            data: vec![value],
        }
    }

    pub fn vector(data: Vec<f64>) -> Result<Self> {
        let n = data.len();
        Tensor::from_data(1, n, data)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Matrix> {
        let n = rows.len();
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::shape(
                "matrix",
                format!("square {n}x{n} rows"),
                format!("row {} has {} entries", i + 1, row.len()),
            ));
        }
        Tensor::from_data(2, n, rows.iter().flatten().copied().collect())
    }

    pub fn identity(n: usize) -> Matrix {
        Tensor::from_fn(2, n, |i| if i[0] == i[1] { 1.0 } else { 0.0 })
    }

    /// The standard basis matrix `H_pq` (0-based `p`, `q`).
    pub fn basis_matrix(n: usize, p: usize, q: usize) -> Matrix {
        let mut m = Tensor::zeros(2, n);
        m.data[p * n + q] = 1.0;
        m
    }

    /// `Diag x`.
    pub fn diag_matrix(x: &[f64]) -> Matrix {
        let n = x.len();
        let mut m = Tensor::zeros(2, n);
        for (i, &v) in x.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.order);
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) {
        let off = self.offset(idx);
        self.data[off] = value;
    }

    pub fn shape_string(&self) -> String {
        format!("order {} on R^{}", self.order, self.dim)
    }

    pub fn same_shape(&self, other: &Tensor) -> bool {
        self.order == other.order && self.dim == other.dim
    }

    pub(crate) fn check_matrix(&self, context: &'static str) -> Result<()> {
        if self.order != 2 {
            return Err(Error::shape(context, "a matrix (order 2)", self.shape_string()));
        }
        Ok(())
    }

    /// Entry `(i, j)` of a matrix.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        debug_assert_eq!(self.order, 2);
        self.data[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        debug_assert_eq!(self.order, 2);
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Result<Matrix> {
        self.check_matrix("transpose")?;
        let n = self.dim;
        Ok(Tensor::from_fn(2, n, |i| self.data[i[1] * n + i[0]]))
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_matrix("matmul")?;
        other.check_matrix("matmul")?;
        if self.dim != other.dim {
            return Err(Error::shape(
                "matmul",
                format!("{0}x{0}", self.dim),
                format!("{0}x{0}", other.dim),
            ));
        }
        let n = self.dim;
        let mut out = Tensor::zeros(2, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for p in 0..n {
                    acc += self.data[i * n + p] * other.data[p * n + j];
                }
                out.data[i * n + j] = acc;
            }
        }
        Ok(out)
    }

    /// `diag M` as a vector.
    pub fn diagonal(&self) -> Vec<f64> {
        debug_assert_eq!(self.order, 2);
        (0..self.dim).map(|i| self.at(i, i)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, a: f64) -> Tensor {
        self.map(|v| a * v)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Tensor {
        Tensor {
            order: self.order,
            dim: self.dim,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `a·self + b·other`.
    pub fn lin_comb(&self, a: f64, other: &Tensor, b: f64) -> Result<Tensor> {
        self.check_same_shape(other, "linear combination")?;
        Ok(Tensor {
            order: self.order,
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.lin_comb(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        self.lin_comb(1.0, other, -1.0)
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Tensor) -> Result<f64> {
        self.check_same_shape(other, "comparison")?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (x, y)| m.max((x - y).abs())))
    }

    pub(crate) fn check_same_shape(&self, other: &Tensor, context: &'static str) -> Result<()> {
        if !self.same_shape(other) {
            return Err(Error::shape(context, self.shape_string(), other.shape_string()));
        }
        Ok(())
    }

    /// Max-norm of `X - X^T`.
    pub fn asymmetry(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.at(i, j) - self.at(j, i)).abs());
            }
        }
        worst
    }

    /// Max-norm of `U^T U - I`.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n).map(|p| self.at(p, i) * self.at(p, j)).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// `⟨T1, T2⟩ = Σ T1^{i} T2^{i}`.
pub fn inner(a: &Tensor, b: &Tensor) -> Result<f64> {
    a.check_same_shape(b, "inner product")?;
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x * y).sum())
}

/// `‖T‖ = √⟨T, T⟩`.
pub fn norm(t: &Tensor) -> f64 {
    t.data.iter().map(|x| x * x).sum::<f64>().sqrt()
}
