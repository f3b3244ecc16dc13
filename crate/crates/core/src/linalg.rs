//! Exact rank, kernel, image and linear solving over the configured field.
//!
//! Columns are reduced left to right. A reduced column is keyed by its
//! lowest-index nonzero row, and later columns are cleared against those keys.
//! The policy is deterministic, so representatives are stable across runs.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::sparse::{add_entry, axpy, normalize_leading, SparseMap, SparseVec};

/// Column reduction of a matrix, optionally tracking source combinations.
#[derive(Debug, Clone)]
pub struct Reduction {
    field: Field,
    source_dim: usize,
    /// lowest row -> index into `reduced`
    pivots: BTreeMap<usize, usize>,
    reduced: Vec<SparseVec>,
    /// source combination producing each reduced pivot column
    combos: Vec<SparseVec>,
    pivot_cols: Vec<usize>,
    kernel: Vec<SparseVec>,
    track: bool,
}

impl Reduction {
    pub fn new(f: &Field, m: &SparseMap, track: bool) -> Self {
        let mut r = Reduction {
            field: *f,
            source_dim: m.source_dim(),
            pivots: BTreeMap::new(),
            reduced: Vec::new(),
            combos: Vec::new(),
            pivot_cols: Vec::new(),
            kernel: Vec::new(),
            track,
        };
        for (j, col) in m.columns().iter().enumerate() {
            let mut combo = SparseVec::new();
            if track {
                combo.insert(j, f.one());
            }
            let v = r.clear(col.clone(), &mut combo);
            match v.keys().next().copied() {
                Some(low) => {
                    r.pivots.insert(low, r.reduced.len());
                    r.reduced.push(v);
                    r.combos.push(combo);
                    r.pivot_cols.push(j);
                }
                None => {
                    if track {
                        r.kernel.push(normalize_leading(f, &combo));
                    }
                }
            }
        }
        r
    }

    /// Clear `v` against the pivots; `combo` accumulates the subtracted source combination.
    fn clear(&self, mut v: SparseVec, combo: &mut SparseVec) -> SparseVec {
        let f = &self.field;
        let mut from = 0usize;
        loop {
            let next = v.range(from..).find(|(r, _)| self.pivots.contains_key(r)).map(|(r, c)| (*r, c.clone()));
            let Some((row, c)) = next else { break };
            let p = self.pivots[&row];
            let pv = &self.reduced[p];
            let coeff = f.neg(&f.mul(&c, &f.inv(&pv[&row])));
            axpy(f, &mut v, &coeff, pv);
            if self.track {
                axpy(f, combo, &coeff, &self.combos[p]);
            }
            from = row + 1;
        }
        v
    }

    pub fn rank(&self) -> usize {
        self.reduced.len()
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivot_cols
    }

    /// Kernel basis, one vector per non-pivot column. Requires tracking.
    pub fn kernel(&self) -> &[SparseVec] {
        assert!(self.track, "kernel requested from an untracked reduction");
        &self.kernel
    }

    /// Solve `m x = rhs`. Free variables are zero. On failure returns the
    /// normal form of `rhs` modulo the image.
    pub fn solve(&self, rhs: &SparseVec) -> std::result::Result<SparseVec, SparseVec> {
        assert!(self.track, "solve requested from an untracked reduction");
        let mut combo = SparseVec::new();
        let residual = self.clear(rhs.clone(), &mut combo);
        if residual.is_empty() {
            let f = &self.field;
            Ok(combo.into_iter().map(|(i, c)| (i, f.neg(&c))).filter(|(_, c)| !c.is_zero()).collect())
        } else {
            Err(residual)
        }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankKernelImage {
    pub rank: usize,
    pub kernel: Vec<SparseVec>,
    pub image: Vec<SparseVec>,
}

pub fn rank(f: &Field, m: &SparseMap) -> usize {
    Reduction::new(f, m, false).rank()
}

pub fn rank_kernel_image(f: &Field, m: &SparseMap) -> RankKernelImage {
    let r = Reduction::new(f, m, true);
    let image = r.pivot_columns().iter().map(|&j| m.column(j).clone()).collect();
    RankKernelImage { rank: r.rank(), kernel: r.kernel().to_vec(), image }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Solved(SparseVec),
    /// `rhs` is not in the image; carries its normal form modulo the image.
    Obstructed(SparseVec),
}

pub fn solve_inhomogeneous(f: &Field, m: &SparseMap, rhs: &SparseVec) -> Result<Solution> {
    if let Some((&i, _)) = rhs.iter().next_back() {
        if i >= m.target_dim() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side index {i} outside target of dimension {}",
                m.target_dim()
            )));
        }
    }
    let r = Reduction::new(f, m, true);
    Ok(match r.solve(rhs) {
        Ok(x) => Solution::Solved(x),
        Err(res) => Solution::Obstructed(res),
    })
}

/// Incrementally built span in echelon form, keyed by lowest nonzero index.
#[derive(Debug, Clone)]
pub struct Span {
    field: Field,
    rows: BTreeMap<usize, SparseVec>,
}

impl Span {
    pub fn new(f: &Field) -> Self {
        Span { field: *f, rows: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Normal form of `v` modulo the span.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let f = &self.field;
        let mut v = v.clone();
        let mut from = 0usize;
        loop {
            let next = v.range(from..).find(|(i, _)| self.rows.contains_key(i)).map(|(i, c)| (*i, c.clone()));
            let Some((i, c)) = next else { break };
            // rows are normalized with leading coefficient 1
            axpy(f, &mut v, &f.neg(&c), &self.rows[&i]);
            from = i + 1;
        }
        v
    }

    /// Add `v` to the span; returns the normalized new row if `v` was independent.
    pub fn insert(&mut self, v: &SparseVec) -> Option<SparseVec> {
        let r = self.reduce(v);
        let lead = *r.keys().next()?;
        let r = normalize_leading(&self.field, &r);
        self.rows.insert(lead, r.clone());
        Some(r)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }
}

/// `Σ c_i v_i` for a combination indexed into `vs`.
pub fn combine(f: &Field, vs: &[SparseVec], coeffs: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (i, c) in coeffs {
        axpy(f, &mut out, c, &vs[*i]);
    }
    out
}

pub fn unit_vec(f: &Field, i: usize) -> SparseVec {
    let mut v = SparseVec::new();
    add_entry(f, &mut v, i, &f.one());
    v
}

pub fn scalar_vec(entries: impl IntoIterator<Item = (usize, Scalar)>) -> SparseVec {
    entries.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}
