//! Length-truncated Hochschild cochains `CH^*(C, P)` with bimodule coefficients.

use std::collections::HashMap;

use crate::ainfty::{AInfCategory, Tuple};
use crate::complex::{TruncatedComplex, Truncation};
use crate::error::{Error, Result};
use crate::graded::GradedSpace;
use crate::hochschild::{regime, Regime};
use crate::sparse::{add_entry, SparseMap, SparseVec};

use super::bimodule::AInfBimodule;

/// `φ(w) = p` for a composable word `w` from `source` (written order) and `p` parallel to it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CochainCell {
    pub source: usize,
    pub word: Tuple,
    pub element: usize,
}

#[derive(Debug, Clone)]
pub struct CochainComplex {
    bimodule: AInfBimodule,
    cells: Vec<CochainCell>,
    index: HashMap<CochainCell, usize>,
    complex: TruncatedComplex,
}

impl CochainComplex {
    pub fn complex(&self) -> &TruncatedComplex {
        &self.complex
    }

    pub fn bimodule(&self) -> &AInfBimodule {
        &self.bimodule
    }

    pub fn cells(&self) -> &[CochainCell] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &CochainCell {
        &self.cells[i]
    }

    pub fn index_of(&self, cell: &CochainCell) -> Option<usize> {
        self.index.get(cell).copied()
    }

    pub fn length_bound(&self) -> usize {
        self.complex.truncation.length_bound.unwrap_or(0)
    }
}

/// Composable words of length `1..=l`, grouped by `(source, target)`.
pub(crate) fn words_up_to(c: &AInfCategory, l: usize) -> Vec<Tuple> {
    let mut out = Vec::new();
    let mut layer: Vec<Tuple> = if l == 0 { Vec::new() } else { (0..c.generators().len()).map(|g| vec![g]).collect() };
    while !layer.is_empty() {
        out.extend(layer.iter().cloned());
        if layer[0].len() == l {
            break;
        }
        let mut next = Vec::new();
        for w in &layer {
            let tgt = c.gen(w[0]).target;
            for g in 0..c.generators().len() {
                if c.gen(g).source == tgt {
                    let mut v = vec![g];
                    v.extend_from_slice(w);
                    next.push(v);
                }
            }
        }
        layer = next;
    }
    out
}

fn word_label(c: &AInfCategory, source: usize, w: &[usize]) -> String {
    if w.is_empty() {
        format!("()_{}", c.objects()[source])
    } else {
        c.fmt_tuple(w)
    }
}

/// `CH^*(C, P)` on words of length `≤ L`, with `δφ = μ∘φ − (−1)^{|φ|−1} φ∘μ` computed
/// in the square-zero extension.
///
/// The truncation is the quotient by cochains supported on longer words. It is
/// certified when those cochains avoid the degrees `[a, b+1]`; `TruncationTooSmall`
/// is raised when the degree regime admits a certificate that `L` does not reach.
pub fn hochschild_cochains(p: &AInfBimodule, l: usize, window: (i64, i64)) -> Result<CochainComplex> {
    let cc = cochains_unchecked(p, l, window)?;
    let reg = regime(p.over());
    if !cc.complex.certified && reg != Regime::Indefinite {
        let (lo, hi) = window;
        return Err(Error::TruncationTooSmall(format!(
            "cochains on words of length > {l} reach the window [{lo}, {hi}] in the {reg} regime"
        )));
    }
    Ok(cc)
}

/// Like [`hochschild_cochains`] without the window test.
pub fn cochains_unchecked(p: &AInfBimodule, l: usize, window: (i64, i64)) -> Result<CochainComplex> {
    let c = p.over();
    let f = c.field();
    let grading = c.grading();
    let mut cells = Vec::new();
    for x in 0..c.objects().len() {
        for e in p.space(x, x) {
            cells.push(CochainCell { source: x, word: Vec::new(), element: e });
        }
    }
    for w in words_up_to(c, l) {
        let (src, tgt) = c.ends(&w);
        for e in p.space(tgt, src) {
            cells.push(CochainCell { source: src, word: w.clone(), element: e });
        }
    }
    let index: HashMap<CochainCell, usize> = cells.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    let degree = |cell: &CochainCell| p.element(cell.element).degree - c.rsum(&cell.word);
    let basis = cells
        .iter()
        .map(|cell| (format!("{}↦{}", word_label(c, cell.source, &cell.word), p.element(cell.element).label), degree(cell)))
        .collect();
    let space = GradedSpace::new(grading, basis)?;
    let by_output = c.output_index();
    let cols: Vec<SparseVec> = cells
        .iter()
        .map(|cell| {
            let mut col = SparseVec::new();
            let g = degree(cell) - 1;
            for ((a, _, right), out) in p.actions_on(cell.element) {
                if a.len() + cell.word.len() + right.len() > l {
                    continue;
                }
                let mut w = a.clone();
                w.extend_from_slice(&cell.word);
                w.extend_from_slice(right);
                let source = right.last().map(|&r| c.gen(r).source).unwrap_or(cell.source);
                let s = f.sign(g * c.rsum(right));
                for (q, v) in out {
                    let i = index[&CochainCell { source, word: w.clone(), element: *q }];
                    add_entry(&f, &mut col, i, &f.mul(&s, v));
                }
            }
            for pos in 0..cell.word.len() {
                for (inner, v) in &by_output[cell.word[pos]] {
                    if cell.word.len() - 1 + inner.len() > l {
                        continue;
                    }
                    let mut w = cell.word[..pos].to_vec();
                    w.extend_from_slice(inner);
                    w.extend_from_slice(&cell.word[pos + 1..]);
                    let s = f.neg(&f.sign(g + c.rsum(&cell.word[pos + 1..])));
                    let i = index[&CochainCell { source: cell.source, word: w, element: cell.element }];
                    add_entry(&f, &mut col, i, &f.mul(&s, v));
                }
            }
            col
        })
        .collect();
    let d = SparseMap::from_columns(cells.len(), 1, cols);
    let mut complex = TruncatedComplex::new(f, space, d, Truncation { length_bound: Some(l), window })?;
    let (lo, hi) = window;
    let pdeg: Vec<i64> = p.elements().iter().map(|e| e.degree).collect();
    let r: Vec<i64> = (0..c.generators().len()).map(|g| c.rdeg(g)).collect();
    let n = l as i64 + 1;
    let reg = if p.dim() == 0 { Regime::Positive } else { regime(c) };
    let certified = match reg {
        _ if p.dim() == 0 || r.is_empty() => true,
        Regime::Positive => pdeg.iter().max().unwrap() - n * r.iter().min().unwrap() < lo,
        Regime::Negative => pdeg.iter().min().unwrap() - n * r.iter().max().unwrap() > hi + 1,
        Regime::Indefinite => false,
    };
    if !certified {
        complex = complex.uncertify(format!("uncertified: {reg} regime at length bound {l}"));
    }
    Ok(CochainComplex { bimodule: p.clone(), cells, index, complex })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::fixtures::*;
    use crate::cy::bimodule::{diagonal_bimodule, dual_diagonal, yoneda_bimodule, AInfBimodule};
    use crate::field::Field;

    #[test]
    fn ground_field_hh0_is_the_unit() {
        let c = ground_field(Field::Rational);
        let cc = hochschild_cochains(&diagonal_bimodule(&c).unwrap(), 6, (0, 4)).unwrap();
        let x = cc.complex();
        assert!(x.certified);
        let b = x.betti((0, 4)).unwrap();
        assert_eq!(b.values().copied().collect::<Vec<_>>(), vec![1, 0, 0, 0, 0]);
        let rep = &x.homology_at(0).reps[0];
        let unit = cc.index_of(&CochainCell { source: 0, word: vec![], element: 0 }).unwrap();
        assert!(rep.contains_key(&unit));
    }

    #[test]
    fn zero_bimodule_gives_zero() {
        let c = exterior(Field::Rational, 1);
        let z = AInfBimodule::new(c, Vec::new(), Vec::new()).unwrap();
        let cc = hochschild_cochains(&z, 3, (-2, 2)).unwrap();
        assert_eq!(cc.complex().space.dim(), 0);
        assert!(cc.complex().certified);
    }

    #[test]
    fn square_zero_on_fixtures() {
        let cats = vec![
            exterior(Field::Rational, 1),
            quiver(Field::Rational),
            a_p(Field::Prime(3), 3).unwrap(),
            exterior(Field::Prime(2), 1),
        ];
        for c in cats {
            let k = c.objects().len();
            let mut ps = vec![diagonal_bimodule(&c).unwrap(), dual_diagonal(&c, 1).unwrap()];
            for a in 0..k {
                for b in 0..k {
                    ps.push(yoneda_bimodule(&c, a, b).unwrap());
                }
            }
            for p in ps {
                let cc = hochschild_cochains(&p, 4, (-2, 2));
                match cc {
                    Ok(cc) => assert!(cc.complex().differential.compose(&c.field(), &cc.complex().differential).is_zero()),
                    Err(Error::TruncationTooSmall(_)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn negative_regime_requires_long_words() {
        let c = ground_field(Field::Rational);
        let p = diagonal_bimodule(&c).unwrap();
        assert!(matches!(hochschild_cochains(&p, 3, (0, 4)), Err(Error::TruncationTooSmall(_))));
    }

    #[test]
    fn exterior_is_uncertified() {
        let c = exterior(Field::Rational, 1);
        let cc = hochschild_cochains(&diagonal_bimodule(&c).unwrap(), 4, (-1, 1)).unwrap();
        assert!(!cc.complex().certified);
    }
}
