//! Stage-by-stage search for S¹-equivariant enhancements of chain maps.

use super::{premorphism_differential, S1Complex, S1Morphism};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{solve_inhomogeneous, Solution};
use crate::sparse::{add_entry, SparseMap, SparseVec};

/// Basis of `Hom^e(M, N)`: pairs `(n, m)` with `|n| − |m| = e`.
fn hom_cells(m: &S1Complex, n: &S1Complex, e: i64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (c, bm) in m.space().basis().iter().enumerate() {
        for &r in n.space().in_degree(bm.degree + e) {
            out.push((r, c));
        }
    }
    out
}

fn vectorize(cells: &[(usize, usize)], x: &SparseMap) -> SparseVec {
    cells.iter().enumerate().filter_map(|(i, &(r, c))| x.column(c).get(&r).map(|v| (i, v.clone()))).collect()
}

fn matrix(f: &Field, cells: &[(usize, usize)], v: &SparseVec, m: &S1Complex, n: &S1Complex, e: i64) -> SparseMap {
    let trip = v.iter().map(|(&i, x)| (cells[i].0, cells[i].1, x.clone()));
    SparseMap::from_triplets(f, m.dim(), n.dim(), e, trip).expect("cells index the hom space")
}

/// A failed stage: `D(F^s) = −R_s` has no solution.
#[derive(Debug, Clone)]
pub struct Obstruction {
    pub stage: usize,
    /// `R_s = Σ_{i<s} F^i δ^M_{s−i} − (−1)^k Σ_{j<s} δ^N_{s−j} F^j`.
    pub residual: SparseMap,
    /// Normal form of `R_s` modulo the image of `D`, as a map `M → N`.
    pub class: SparseMap,
    /// Set when the stage lies beyond `J_max` and only the zero term was allowed.
    pub beyond_jmax: bool,
    /// The terms found before the failing stage.
    pub partial: S1Morphism,
}

impl Obstruction {
    /// `"m↦c*n"` entries of the class.
    pub fn describe(&self) -> String {
        let src = self.partial.source();
        let tgt = self.partial.target();
        let f = src.field();
        let parts: Vec<String> = self
            .class
            .entries()
            .map(|(r, c, v)| format!("{}↦{}*{}", src.space().label(c), f.format(v), tgt.space().label(r)))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

#[derive(Debug, Clone)]
pub enum Enhancement {
    Closed(S1Morphism),
    Obstructed(Obstruction),
}

/// Extend a chain map `f: (M, δ_0) → (N, δ_0)` to a closed morphism `{F^0 = f, F^1, …}`.
///
/// Stage `s` solves `F^s δ_0 − (−1)^k δ_0 F^s = −R_s`. Terms beyond `j_max` are held at
/// zero; stages run until the hom spaces involved are empty.
pub fn find_enhancement(f0: &SparseMap, m: &S1Complex, n: &S1Complex, j_max: usize) -> Result<Enhancement> {
    let f = m.field();
    let k = f0.degree();
    let start = S1Morphism::strict(m, n, f0.clone())?;
    let d0 = premorphism_differential(&start).term(0);
    if let Some((r, c, v)) = d0.first_nonzero() {
        return Err(Error::NotAChainMap(format!(
            "coefficient {} of {} in (f δ_0 ∓ δ_0 f)({})",
            f.format(&v),
            n.space().label(r),
            m.space().label(c)
        )));
    }
    let (Some((_, m_hi)), Some((n_lo, _))) = (m.bounds()?, n.bounds()?) else {
        return Ok(Enhancement::Closed(start));
    };
    let min_diff = n_lo - m_hi;
    let last = ((k + 1 - min_diff).max(0) / 2) as usize;
    let sign = f.neg(&f.sign(k));
    let mut terms = vec![f0.clone()];
    for s in 1..=last {
        let e = k - 2 * s as i64;
        let mut r = SparseMap::zero(m.dim(), n.dim(), e + 1);
        for (i, t) in terms.iter().enumerate() {
            r = r.add(&f, &t.compose(&f, &m.delta(s - i)));
            r = r.add_scaled(&f, &sign, &n.delta(s - i).compose(&f, t));
        }
        let src = hom_cells(m, n, e);
        let tgt = hom_cells(m, n, e + 1);
        let rhs = vectorize(&tgt, &r.scaled(&f, &f.from_i64(-1)));
        let cols = src
            .iter()
            .map(|&(rr, cc)| {
                let x = SparseMap::from_triplets(&f, m.dim(), n.dim(), e, [(rr, cc, f.one())]).expect("unit matrix");
                let dx = x.compose(&f, &m.delta(0)).add_scaled(&f, &sign, &n.delta(0).compose(&f, &x));
                vectorize(&tgt, &dx)
            })
            .collect();
        let dmat = SparseMap::from_columns(tgt.len(), 1, cols);
        let allowed = s <= j_max;
        let outcome = if allowed { solve_inhomogeneous(&f, &dmat, &rhs)? } else if rhs.is_empty() {
            Solution::Solved(SparseVec::new())
        } else {
            match solve_inhomogeneous(&f, &dmat, &rhs)? {
                Solution::Solved(_) => Solution::Obstructed(rhs.clone()),
                other => other,
            }
        };
        match outcome {
            Solution::Solved(x) => terms.push(matrix(&f, &src, &x, m, n, e)),
            Solution::Obstructed(res) => {
                let mut class = SparseVec::new();
                for (i, v) in &res {
                    add_entry(&f, &mut class, *i, &f.neg(v));
                }
                return Ok(Enhancement::Obstructed(Obstruction {
                    stage: s,
                    residual: r,
                    class: matrix(&f, &tgt, &class, m, n, e + 1),
                    beyond_jmax: !allowed,
                    partial: S1Morphism::new(m, n, k, terms)?,
                }));
            }
        }
    }
    let out = S1Morphism::new(m, n, k, terms)?;
    if let Some((s, t)) = premorphism_differential(&out).terms().iter().enumerate().find(|(_, t)| !t.is_zero()) {
        let (r, c, v) = t.first_nonzero().expect("nonzero term");
        return Err(Error::IdentityViolated(format!(
            "enhancement equation {s} has coefficient {} of {} on {}",
            f.format(&v),
            n.space().label(r),
            m.space().label(c)
        )));
    }
    Ok(Enhancement::Closed(out))
}
