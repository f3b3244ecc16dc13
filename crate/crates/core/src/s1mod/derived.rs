//! `Rhom_{S¹}(M, N)` and `N ⊗^L_{S¹} M` on degree windows.

use std::collections::HashMap;

use super::{S1Complex, S1Morphism};
use crate::complex::{TruncatedComplex, Truncation};
use crate::error::{Error, Result};
use crate::graded::{GradedSpace, Grading};
use crate::sparse::{add_entry, SparseMap, SparseVec};

type Range = (i64, i64);

/// Occupied degree range of both complexes, or `None` if either is zero.
fn joint_bounds(m: &S1Complex, n: &S1Complex) -> Result<Option<(Range, Range)>> {
    Ok(match (m.bounds()?, n.bounds()?) {
        (Some(a), Some(b)) => Some((a, b)),
        _ => None,
    })
}

fn check_window(window: (i64, i64)) -> Result<()> {
    if window.0 > window.1 {
        return Err(Error::Input(format!("empty window [{}, {}]", window.0, window.1)));
    }
    Ok(())
}

/// Pre-morphisms `M → N` of degrees `a − 1 ..= b + 1`, with `∂`; homology exact on `[a, b]`.
#[derive(Debug, Clone)]
pub struct Rhom {
    pub complex: TruncatedComplex,
    /// `(j, n, m)`: the component of `F^j` sending basis vector `m` to `n`.
    cells: Vec<(usize, usize, usize)>,
    index: HashMap<(usize, usize, usize), usize>,
    source: S1Complex,
    target: S1Complex,
}

impl Rhom {
    pub fn cells(&self) -> &[(usize, usize, usize)] {
        &self.cells
    }

    /// Coordinates of a pre-morphism whose degree lies in the built range.
    pub fn vector(&self, fm: &S1Morphism) -> Result<SparseVec> {
        let f = self.complex.field;
        let mut v = SparseVec::new();
        for (j, t) in fm.terms().iter().enumerate() {
            for (r, c, x) in t.entries() {
                let i = self.index.get(&(j, r, c)).ok_or_else(|| {
                    Error::WindowExceedsTruncation {
                        req_lo: fm.degree(),
                        req_hi: fm.degree(),
                        lo: self.complex.truncation.window.0 - 1,
                        hi: self.complex.truncation.window.1 + 1,
                    }
                })?;
                add_entry(&f, &mut v, *i, x);
            }
        }
        Ok(v)
    }

    /// The pre-morphism of the given degree with these coordinates.
    pub fn morphism(&self, v: &SparseVec, degree: i64) -> Result<S1Morphism> {
        let f = self.complex.field;
        let mut terms: Vec<SparseMap> = Vec::new();
        for (&i, x) in v {
            let (j, r, c) = self.cells[i];
            if self.complex.space.degree(i) != degree {
                return Err(Error::DegreeViolation(format!("coordinate {} is not in degree {degree}", self.complex.space.label(i))));
            }
            while terms.len() <= j {
                let e = degree - 2 * terms.len() as i64;
                terms.push(SparseMap::zero(self.source.dim(), self.target.dim(), e));
            }
            terms[j].add_to(&f, r, c, x);
        }
        S1Morphism::new(&self.source, &self.target, degree, terms)
    }
}

pub fn rhom_complex(m: &S1Complex, n: &S1Complex, window: (i64, i64)) -> Result<Rhom> {
    check_window(window)?;
    let f = m.field();
    let (lo, hi) = (window.0 - 1, window.1 + 1);
    let mut cells = Vec::new();
    let mut basis = Vec::new();
    if let Some(((m_lo, m_hi), (n_lo, n_hi))) = joint_bounds(m, n)? {
        let (min_diff, max_diff) = (n_lo - m_hi, n_hi - m_lo);
        for k in lo..=hi {
            let j_lo = (k - max_diff).max(0).div_euclid(2) + i64::from((k - max_diff).max(0) % 2 != 0);
            let j_hi = (k - min_diff).div_euclid(2);
            for j in j_lo..=j_hi {
                let e = k - 2 * j;
                for (c, bm) in m.space().basis().iter().enumerate() {
                    for &r in n.space().in_degree(bm.degree + e) {
                        cells.push((j as usize, r, c));
                        basis.push((format!("F{j}:{}↦{}", bm.label, n.space().label(r)), k));
                    }
                }
            }
        }
    }
    let index: HashMap<_, _> = cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let mrows: Vec<Vec<Vec<(usize, crate::field::Scalar)>>> = m.deltas().iter().map(SparseMap::rows).collect();
    let cols = cells
        .iter()
        .enumerate()
        .map(|(i, &(j, r, c))| {
            let k = basis[i].1;
            let sign = f.neg(&f.sign(k));
            let mut col = SparseVec::new();
            for (s_minus_j, rows) in mrows.iter().enumerate() {
                for (c2, v) in &rows[c] {
                    if let Some(&t) = index.get(&(j + s_minus_j, r, *c2)) {
                        add_entry(&f, &mut col, t, v);
                    }
                }
            }
            for (s_minus_j, dn) in n.deltas().iter().enumerate() {
                for (r2, v) in dn.column(r) {
                    if let Some(&t) = index.get(&(j + s_minus_j, *r2, c)) {
                        add_entry(&f, &mut col, t, &f.mul(&sign, v));
                    }
                }
            }
            col
        })
        .collect();
    let space = GradedSpace::new(Grading::Z, basis)?;
    let d = SparseMap::from_columns(cells.len(), 1, cols);
    let complex = TruncatedComplex::new(f, space, d, Truncation { length_bound: None, window })?;
    Ok(Rhom { complex, cells, index, source: m.clone(), target: n.clone() })
}

/// `N ⊗^L_{S¹} M` on degrees `a − 1 ..= b + 1`, with basis `n ⊗ Λ^d ⊗ m`.
#[derive(Debug, Clone)]
pub struct DerivedTensor {
    pub complex: TruncatedComplex,
    /// `(n, d, m)`.
    cells: Vec<(usize, usize, usize)>,
    index: HashMap<(usize, usize, usize), usize>,
}

impl DerivedTensor {
    pub fn cells(&self) -> &[(usize, usize, usize)] {
        &self.cells
    }

    pub fn index_of(&self, cell: (usize, usize, usize)) -> Option<usize> {
        self.index.get(&cell).copied()
    }

    /// `F♯(n ⊗ Λ^d ⊗ m) = Σ_j n ⊗ Λ^{d−j} ⊗ F^j m`, for `F` acting on the right factor.
    pub fn push_right(&self, fm: &S1Morphism, target: &DerivedTensor) -> SparseMap {
        let f = self.complex.field;
        let cols = self
            .cells
            .iter()
            .map(|&(n, d, m)| {
                let mut col = SparseVec::new();
                for j in 0..=d.min(fm.terms().len().saturating_sub(1)) {
                    let Some(t) = fm.terms().get(j) else { break };
                    for (m2, v) in t.column(m) {
                        if let Some(i) = target.index_of((n, d - j, *m2)) {
                            add_entry(&f, &mut col, i, v);
                        }
                    }
                }
                col
            })
            .collect();
        SparseMap::from_columns(target.cells.len(), fm.degree(), cols)
    }

    /// `F♯(m ⊗ Λ^d ⊗ n) = Σ_j (−1)^{deg F·|n|} F^j m ⊗ Λ^{d−j} ⊗ n`, for `F` acting on the left factor.
    pub fn push_left(&self, fm: &S1Morphism, right: &S1Complex, target: &DerivedTensor) -> SparseMap {
        let f = self.complex.field;
        let cols = self
            .cells
            .iter()
            .map(|&(m, d, n)| {
                let sign = f.sign(fm.degree() * right.space().degree(n));
                let mut col = SparseVec::new();
                for j in 0..=d.min(fm.terms().len().saturating_sub(1)) {
                    let Some(t) = fm.terms().get(j) else { break };
                    for (m2, v) in t.column(m) {
                        if let Some(i) = target.index_of((*m2, d - j, n)) {
                            add_entry(&f, &mut col, i, &f.mul(&sign, v));
                        }
                    }
                }
                col
            })
            .collect();
        SparseMap::from_columns(target.cells.len(), fm.degree(), cols)
    }
}

/// `∂(n⊗Λ^d⊗m) = Σ_i (−1)^{|m|} δ_i n ⊗ Λ^{d−i} ⊗ m + n ⊗ Λ^{d−i} ⊗ δ_i m`.
pub fn tensor_derived(n: &S1Complex, m: &S1Complex, window: (i64, i64)) -> Result<DerivedTensor> {
    check_window(window)?;
    let f = m.field();
    let (lo, hi) = (window.0 - 1, window.1 + 1);
    let mut cells = Vec::new();
    let mut basis = Vec::new();
    if let Some(((_, m_hi), (_, n_hi))) = joint_bounds(m, n)? {
        let d_max = ((m_hi + n_hi - lo).max(0) / 2) as usize;
        for d in 0..=d_max {
            for (a, bn) in n.space().basis().iter().enumerate() {
                for (c, bm) in m.space().basis().iter().enumerate() {
                    let deg = bn.degree + bm.degree - 2 * d as i64;
                    if (lo..=hi).contains(&deg) {
                        cells.push((a, d, c));
                        basis.push((format!("{}⊗Λ^{d}⊗{}", bn.label, bm.label), deg));
                    }
                }
            }
        }
    }
    let index: HashMap<_, _> = cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let cols = cells
        .iter()
        .map(|&(a, d, c)| {
            let sign = f.sign(m.space().degree(c));
            let mut col = SparseVec::new();
            for i in 0..=d.min(n.top().max(m.top())) {
                for (a2, v) in n.delta(i).column(a) {
                    if let Some(&t) = index.get(&(*a2, d - i, c)) {
                        add_entry(&f, &mut col, t, &f.mul(&sign, v));
                    }
                }
                for (c2, v) in m.delta(i).column(c) {
                    if let Some(&t) = index.get(&(a, d - i, *c2)) {
                        add_entry(&f, &mut col, t, v);
                    }
                }
            }
            col
        })
        .collect();
    let space = GradedSpace::new(Grading::Z, basis)?;
    let dmap = SparseMap::from_columns(cells.len(), 1, cols);
    let complex = TruncatedComplex::new(f, space, dmap, Truncation { length_bound: None, window })?;
    Ok(DerivedTensor { complex, cells, index })
}
