//! Sparse vectors and sparse graded linear maps.

use num_traits::Zero;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::graded::GradedSpace;

pub type SparseVec = BTreeMap<usize, Scalar>;

/// `v[i] += c`, dropping the entry when it cancels.
pub fn add_entry(f: &Field, v: &mut SparseVec, i: usize, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(i).or_insert_with(Scalar::zero);
    *e = f.add(e, c);
    if e.is_zero() {
        v.remove(&i);
    }
}

/// `v += c * w`.
pub fn axpy(f: &Field, v: &mut SparseVec, c: &Scalar, w: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (i, x) in w {
        add_entry(f, v, *i, &f.mul(c, x));
    }
}

pub fn scale(f: &Field, c: &Scalar, w: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    axpy(f, &mut out, c, w);
    out
}

/// Scale so that the lowest-index nonzero entry is one.
pub fn normalize_leading(f: &Field, v: &SparseVec) -> SparseVec {
    match v.values().next() {
        None => SparseVec::new(),
        Some(lead) => scale(f, &f.inv(lead), v),
    }
}

/// A linear map between finite-dimensional spaces, stored by columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMap {
    source_dim: usize,
    target_dim: usize,
    degree: i64,
    cols: Vec<SparseVec>,
}

impl SparseMap {
    pub fn zero(source_dim: usize, target_dim: usize, degree: i64) -> Self {
        SparseMap { source_dim, target_dim, degree, cols: vec![SparseVec::new(); source_dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = SparseMap::zero(dim, dim, 0);
        for (i, c) in m.cols.iter_mut().enumerate() {
            c.insert(i, Scalar::from_integer(1.into()));
        }
        m
    }

    pub fn from_columns(target_dim: usize, degree: i64, cols: Vec<SparseVec>) -> Self {
        debug_assert!(cols.iter().all(|c| c.keys().all(|&r| r < target_dim)));
        SparseMap { source_dim: cols.len(), target_dim, degree, cols }
    }

    /// Build from `(target, source, value)` triplets; repeated positions accumulate.
    pub fn from_triplets(
        f: &Field,
        source_dim: usize,
        target_dim: usize,
        degree: i64,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self> {
        let mut m = SparseMap::zero(source_dim, target_dim, degree);
        for (r, c, v) in triplets {
            if r >= target_dim || c >= source_dim {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({r},{c}) outside {target_dim}x{source_dim}"
                )));
            }
            add_entry(f, &mut m.cols[c], r, &v);
        }
        Ok(m)
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn with_degree(mut self, degree: i64) -> Self {
        self.degree = degree;
        self
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn add_to(&mut self, f: &Field, row: usize, col: usize, c: &Scalar) {
        add_entry(f, &mut self.cols[col], row, c);
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.cols[col].get(&row).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.cols.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn apply(&self, f: &Field, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, x) in v {
            axpy(f, &mut out, x, &self.cols[*j]);
        }
        out
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, f: &Field, rhs: &SparseMap) -> SparseMap {
        assert_eq!(rhs.target_dim, self.source_dim, "composition dimension mismatch");
        let cols = rhs.cols.iter().map(|c| self.apply(f, c)).collect();
        SparseMap { source_dim: rhs.source_dim, target_dim: self.target_dim, degree: self.degree + rhs.degree, cols }
    }

    pub fn add(&self, f: &Field, rhs: &SparseMap) -> SparseMap {
        self.add_scaled(f, &f.one(), rhs)
    }

    pub fn sub(&self, f: &Field, rhs: &SparseMap) -> SparseMap {
        self.add_scaled(f, &f.neg(&f.one()), rhs)
    }

    /// `self + c * rhs`.
    pub fn add_scaled(&self, f: &Field, c: &Scalar, rhs: &SparseMap) -> SparseMap {
        assert_eq!((self.source_dim, self.target_dim), (rhs.source_dim, rhs.target_dim));
        let mut out = self.clone();
        for (a, b) in out.cols.iter_mut().zip(&rhs.cols) {
            axpy(f, a, c, b);
        }
        out
    }

    pub fn scaled(&self, f: &Field, c: &Scalar) -> SparseMap {
        let cols = self.cols.iter().map(|col| scale(f, c, col)).collect();
        SparseMap { cols, ..self.clone() }
    }

    /// Rows as `(column, value)` lists; the transpose in column form.
    pub fn rows(&self) -> Vec<Vec<(usize, Scalar)>> {
        let mut rows = vec![Vec::new(); self.target_dim];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                rows[*i].push((j, v.clone()));
            }
        }
        rows
    }

    /// Restrict to the given source columns and target rows (in the given order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMap {
        let row_pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let out = cols
            .iter()
            .map(|&c| {
                self.cols[c]
                    .iter()
                    .filter_map(|(r, v)| row_pos.get(r).map(|&i| (i, v.clone())))
                    .collect()
            })
            .collect();
        SparseMap { source_dim: cols.len(), target_dim: rows.len(), degree: self.degree, cols: out }
    }

    /// Check that every entry joins basis elements whose degrees differ by `degree`.
    pub fn check_degrees(&self, source: &GradedSpace, target: &GradedSpace) -> Result<()> {
        if source.dim() != self.source_dim || target.dim() != self.target_dim {
            return Err(Error::DimensionMismatch(format!(
                "map is {}x{} but spaces have dims {} -> {}",
                self.target_dim,
                self.source_dim,
                source.dim(),
                target.dim()
            )));
        }
        let g = source.grading();
        for (r, c, _) in self.entries() {
            if !g.eq_deg(target.degree(r), source.degree(c) + self.degree) {
                return Err(Error::DegreeViolation(format!(
                    "entry {} <- {} does not have degree {}",
                    target.label(r),
                    source.label(c),
                    self.degree
                )));
            }
        }
        Ok(())
    }

    /// Describe the first nonzero entry, for residual reports.
    pub fn first_nonzero(&self) -> Option<(usize, usize, Scalar)> {
        self.entries().next().map(|(r, c, v)| (r, c, v.clone()))
    }
}
