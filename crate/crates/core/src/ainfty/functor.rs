//! A∞ functors and their equations.
//!
//! Convention: for every composable `x_d, …, x_1`
//!
//! `Σ μ'^r(F(x_d, …), …, F(…, x_1)) = Σ (−1)^{✠_n} F(x_d, …, μ^m(x_{n+m}, …, x_{n+1}), x_n, …, x_1)`
//!
//! with no sign on the left. The Hochschild pushforward is checked against
//! this choice by the chain-map property.

use std::collections::BTreeMap;

use crate::ainfty::{AInfCategory, Tuple};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::report::ValidationReport;
use crate::sparse::{add_entry, axpy, SparseVec};

#[derive(Debug, Clone)]
pub struct AInfFunctor {
    source: AInfCategory,
    target: AInfCategory,
    object_map: Vec<usize>,
    terms: BTreeMap<Tuple, SparseVec>,
}

impl AInfFunctor {
    pub fn new(
        source: AInfCategory,
        target: AInfCategory,
        object_map: Vec<usize>,
        terms: impl IntoIterator<Item = (Tuple, SparseVec)>,
    ) -> Result<Self> {
        if source.field() != target.field() {
            return Err(Error::Input("functor between categories over different fields".into()));
        }
        if object_map.len() != source.objects().len() || object_map.iter().any(|&o| o >= target.objects().len()) {
            return Err(Error::Input("object map does not match the categories".into()));
        }
        let f = source.field();
        let g = source.grading();
        let mut table: BTreeMap<Tuple, SparseVec> = BTreeMap::new();
        for (key, out) in terms {
            if key.is_empty() || key.iter().any(|&x| x >= source.generators().len()) || !source.composable(&key) {
                return Err(Error::DegreeViolation(format!("functor input {key:?} is not a composable tuple")));
            }
            let entry = table.entry(key).or_default();
            for (o, c) in out {
                if o >= target.generators().len() {
                    return Err(Error::Input("functor output refers to an unknown generator".into()));
                }
                add_entry(&f, entry, o, &f.reduce(&c)?);
            }
        }
        table.retain(|_, v| !v.is_empty());
        for (key, out) in &table {
            let (s, t) = source.ends(key);
            let want = g.normalize(source.tuple_degree(key) + 1 - key.len() as i64);
            for &o in out.keys() {
                let y = target.gen(o);
                if y.source != object_map[s] || y.target != object_map[t] || g.normalize(y.degree) != want {
                    return Err(Error::DegreeViolation(format!(
                        "F{} has output {} of the wrong degree or hom space",
                        source.fmt_tuple(key),
                        y.label
                    )));
                }
            }
        }
        Ok(AInfFunctor { source, target, object_map, terms: table })
    }

    /// A functor with only a linear term, given by the image of each source generator.
    pub fn strict(source: AInfCategory, target: AInfCategory, object_map: Vec<usize>, images: Vec<SparseVec>) -> Result<Self> {
        let terms: Vec<(Tuple, SparseVec)> = images.into_iter().enumerate().map(|(g, v)| (vec![g], v)).collect();
        AInfFunctor::new(source, target, object_map, terms)
    }

    pub fn identity(c: &AInfCategory) -> Self {
        let f = c.field();
        let images = (0..c.generators().len()).map(|g| [(g, f.one())].into_iter().collect()).collect();
        let objects = (0..c.objects().len()).collect();
        AInfFunctor::strict(c.clone(), c.clone(), objects, images).expect("identity functor")
    }

    pub fn source(&self) -> &AInfCategory {
        &self.source
    }

    pub fn target(&self) -> &AInfCategory {
        &self.target
    }

    pub fn object_map(&self) -> &[usize] {
        &self.object_map
    }

    pub fn term(&self, t: &[usize]) -> Option<&SparseVec> {
        self.terms.get(t)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Tuple, &SparseVec)> {
        self.terms.iter()
    }

    pub fn max_arity(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// `Σ μ'(F…F) − Σ ± F(…μ…)`, keyed by source tuple; zero entries dropped.
    pub fn residuals(&self) -> BTreeMap<Tuple, SparseVec> {
        let f = self.source.field();
        let mut res: BTreeMap<Tuple, SparseVec> = BTreeMap::new();

        let mut by_output: Vec<Vec<(&Tuple, &Scalar)>> = vec![Vec::new(); self.target.generators().len()];
        for (k, out) in &self.terms {
            for (o, c) in out {
                by_output[*o].push((k, c));
            }
        }
        for (key, val) in self.target.mu_entries() {
            // choose F-blocks from the right end of `key`
            let mut stack: Vec<(usize, Tuple, Scalar)> = vec![(key.len(), Vec::new(), f.one())];
            while let Some((remaining, tuple, coeff)) = stack.pop() {
                if remaining == 0 {
                    axpy(&f, res.entry(tuple).or_default(), &coeff, val);
                    continue;
                }
                for (block, c) in &by_output[key[remaining - 1]] {
                    if let Some(&first) = tuple.first() {
                        if self.source.gen(*block.last().unwrap()).source != self.source.gen(first).target {
                            continue;
                        }
                    }
                    let mut t = (*block).clone();
                    t.extend_from_slice(&tuple);
                    stack.push((remaining - 1, t, f.mul(&coeff, c)));
                }
            }
        }

        let mu_by_output = self.source.output_index();
        for (outer, val) in &self.terms {
            for pos in 0..outer.len() {
                let sign = f.neg(&f.sign(self.source.rsum(&outer[pos + 1..])));
                for (inner, c) in &mu_by_output[outer[pos]] {
                    let mut t = outer[..pos].to_vec();
                    t.extend_from_slice(inner);
                    t.extend_from_slice(&outer[pos + 1..]);
                    axpy(&f, res.entry(t).or_default(), &f.mul(&sign, c), val);
                }
            }
        }
        res.retain(|_, v| !v.is_empty());
        res
    }
}

pub fn check_functor(func: &AInfFunctor) -> ValidationReport {
    let res = func.residuals();
    let examined = func.terms.len();
    match res.iter().next() {
        None => ValidationReport::pass("functor_equations", examined),
        Some((t, v)) => ValidationReport::fail(
            "functor_equations",
            examined,
            format!("equation at {} has residual {}", func.source.fmt_tuple(t), func.target.fmt_vec(v)),
        ),
    }
}
