//! Finite cochain complexes with truncation metadata, and their homology.

use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{GradedSpace, Grading};
use crate::linalg::{Reduction, Span};
use crate::sparse::{SparseMap, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truncation {
    /// Word-length bound, when the complex is a length truncation.
    pub length_bound: Option<usize>,
    /// Degrees on which homology is exactly computed by this finite model.
    pub window: (i64, i64),
}

#[derive(Debug, Clone)]
pub struct TruncatedComplex {
    pub field: Field,
    pub space: GradedSpace,
    pub differential: SparseMap,
    pub truncation: Truncation,
    pub certified: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub dim: usize,
    /// Cycles independent modulo boundaries, normalized to leading coefficient one.
    pub reps: Vec<SparseVec>,
}

impl TruncatedComplex {
    /// Build and check `d ∘ d = 0` and the degree rule.
    pub fn new(field: Field, space: GradedSpace, differential: SparseMap, truncation: Truncation) -> Result<Self> {
        if differential.degree() != 1 {
            return Err(Error::DegreeViolation(format!("differential has degree {}", differential.degree())));
        }
        differential.check_degrees(&space, &space)?;
        let dd = differential.compose(&field, &differential);
        if let Some((r, c, v)) = dd.first_nonzero() {
            return Err(Error::IdentityViolated(format!(
                "d∘d ≠ 0: coefficient {} of {} in d²({})",
                field.format(&v),
                space.label(r),
                space.label(c)
            )));
        }
        Ok(TruncatedComplex { field, space, differential, truncation, certified: true, note: None })
    }

    /// A complex whose window is every occupied degree, certified.
    pub fn exact(field: Field, space: GradedSpace, differential: SparseMap) -> Result<Self> {
        let window = space.degree_range().unwrap_or((0, 0));
        let window = match space.grading() {
            Grading::Z => window,
            Grading::Z2 => (0, 1),
        };
        Self::new(field, space, differential, Truncation { length_bound: None, window })
    }

    pub fn grading(&self) -> Grading {
        self.space.grading()
    }

    fn check_window(&self, window: (i64, i64)) -> Result<Vec<i64>> {
        let (lo, hi) = self.truncation.window;
        let (a, b) = window;
        if self.grading() == Grading::Z2 {
            return Ok(vec![0, 1]);
        }
        if a < lo || b > hi {
            return Err(Error::WindowExceedsTruncation { req_lo: a, req_hi: b, lo, hi });
        }
        Ok((a..=b).collect())
    }

    /// Block of the differential from degree `d` to `d + 1`.
    pub fn block(&self, d: i64) -> SparseMap {
        let src = self.space.in_degree(d);
        let tgt = self.space.in_degree(d + 1);
        self.differential.submatrix(tgt, src).with_degree(1)
    }

    fn rank_at(&self, d: i64) -> usize {
        Reduction::new(&self.field, &self.block(d), false).rank()
    }

    /// Homology dimensions per degree in the window.
    pub fn betti(&self, window: (i64, i64)) -> Result<BTreeMap<i64, usize>> {
        let degs = self.check_window(window)?;
        Ok(degs
            .par_iter()
            .map(|&d| {
                let n = self.space.dim_in_degree(d);
                let out = if n == 0 { 0 } else { self.rank_at(d) };
                let inc = if n == 0 { 0 } else { self.rank_at(d - 1) };
                (d, n - out - inc)
            })
            .collect())
    }

    /// Homology with representatives, indexed in the full basis.
    pub fn homology(&self, window: (i64, i64)) -> Result<BTreeMap<i64, HomologyGroup>> {
        let degs = self.check_window(window)?;
        Ok(degs.par_iter().map(|&d| (d, self.homology_at(d))).collect())
    }

    pub fn homology_at(&self, d: i64) -> HomologyGroup {
        let idx = self.space.in_degree(d);
        if idx.is_empty() {
            return HomologyGroup { dim: 0, reps: Vec::new() };
        }
        let red = Reduction::new(&self.field, &self.block(d), true);
        let mut span = self.boundaries_at(d);
        let base = span.dim();
        let mut reps = Vec::new();
        for k in red.kernel() {
            let lifted: SparseVec = k.iter().map(|(i, c)| (idx[*i], c.clone())).collect();
            if let Some(r) = span.insert(&lifted) {
                reps.push(r);
            }
        }
        debug_assert_eq!(span.dim() - base, reps.len());
        HomologyGroup { dim: reps.len(), reps }
    }

    /// Echelon span of the boundaries landing in degree `d`, full-basis indices.
    pub fn boundaries_at(&self, d: i64) -> Span {
        let mut span = Span::new(&self.field);
        for &j in self.space.in_degree(d - 1) {
            span.insert(self.differential.column(j));
        }
        span
    }

    pub fn is_cycle(&self, v: &SparseVec) -> bool {
        self.differential.apply(&self.field, v).is_empty()
    }

    pub fn is_boundary(&self, v: &SparseVec, d: i64) -> bool {
        self.boundaries_at(d).contains(v)
    }

    /// Mark the complex uncertified with a stability note.
    pub fn uncertify(mut self, note: impl Into<String>) -> Self {
        self.certified = false;
        self.note = Some(note.into());
        self
    }
}

/// Rank of the map induced on homology in degree `d` by a chain map `f`.
pub fn induced_rank(f: &SparseMap, src: &TruncatedComplex, tgt: &TruncatedComplex, d: i64) -> usize {
    let field = &src.field;
    let h = src.homology_at(d);
    let mut span = tgt.boundaries_at(d + f.degree());
    h.reps.iter().filter(|r| span.insert(&f.apply(field, r)).is_some()).count()
}

/// Check that `f` is a chain map of its degree: `d f = (−1)^{deg f} f d`.
pub fn check_chain_map(f: &SparseMap, src: &TruncatedComplex, tgt: &TruncatedComplex) -> Result<()> {
    let field = &src.field;
    let lhs = tgt.differential.compose(field, f);
    let rhs = f.compose(field, &src.differential).scaled(field, &field.sign(f.degree()));
    let diff = lhs.sub(field, &rhs);
    match diff.first_nonzero() {
        None => Ok(()),
        Some((r, c, v)) => Err(Error::NotAChainMap(format!(
            "coefficient {} of {} in (d f ∓ f d)({})",
            field.format(&v),
            tgt.space.label(r),
            src.space.label(c)
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(f: &Field, degs: &[i64], entries: &[(usize, usize, i64)]) -> TruncatedComplex {
        let basis = degs.iter().enumerate().map(|(i, d)| (format!("v{i}"), *d)).collect();
        let space = GradedSpace::new(Grading::Z, basis).unwrap();
        let n = degs.len();
        let d = SparseMap::from_triplets(f, n, n, 1, entries.iter().map(|&(r, c, v)| (r, c, f.from_i64(v)))).unwrap();
        TruncatedComplex::exact(*f, space, d).unwrap()
    }

    #[test]
    fn point_complex() {
        let f = Field::Rational;
        let c = chain(&f, &[0], &[]);
        assert_eq!(c.betti((0, 0)).unwrap()[&0], 1);
    }

    #[test]
    fn acyclic_pair() {
        let f = Field::Rational;
        let c = chain(&f, &[0, 1], &[(1, 0, 1)]);
        assert_eq!(c.betti((0, 1)).unwrap().values().sum::<usize>(), 0);
    }

    #[test]
    fn zero_then_identity() {
        let f = Field::Rational;
        let c = chain(&f, &[0, 1, 2], &[(2, 1, 1)]);
        let h = c.homology((0, 2)).unwrap();
        assert_eq!(h.values().map(|g| g.dim).collect::<Vec<_>>(), vec![1, 0, 0]);
        assert_eq!(h[&0].reps[0].keys().copied().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn window_outside_truncation() {
        let f = Field::Rational;
        let c = chain(&f, &[0, 1], &[]);
        assert!(matches!(c.betti((0, 3)), Err(Error::WindowExceedsTruncation { .. })));
    }

    #[test]
    fn nonzero_square_rejected() {
        let f = Field::Rational;
        let space = GradedSpace::new(Grading::Z, vec![("a".into(), 0), ("b".into(), 1), ("c".into(), 2)]).unwrap();
        let d = SparseMap::from_triplets(&f, 3, 3, 1, vec![(1, 0, f.one()), (2, 1, f.one())]).unwrap();
        assert!(TruncatedComplex::exact(f, space, d).is_err());
    }
}
