//! Cap product of Yoneda-coefficient cochains with cyclic bar chains, evaluated in `hom(K, L)`.
//!
//! For a check word `[w_0, …, w_{d−1}]` (bold `w_0`) and a cochain cell
//! `φ(w_i…w_{j−1}) = x ⊗ y`, the left action collapses `w_{d−l}, …, w_{i−1}` into
//! `x′ ⊗ y′ = μ(w_{d−l}, …, w_0, …, w_{i−1}, x ⊗ y)` and the term is `μ(y′, w_j, …, w_{d−l−1}, x′)`.
//! The sign is `(−1)^{g·R + Z·(r + p + M + 1 + ||w_0||) + p + M + ||x′||·|y′| + 1}` with
//! `g = |φ| − 1`, `R` the letters right of the block, `Z` the letters wrapped into the collapse,
//! `r` the remaining letters, `M` the letters between bold and block and `p = g + ||block||`.
//! It satisfies `μ¹(φ ∩ σ) + (−1)^g (δφ) ∩ σ + φ ∩ (bσ) = 0` exactly.

use crate::ainfty::AInfCategory;
use crate::complex::TruncatedComplex;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::hochschild::NuComplex;
use crate::linalg::{solve_inhomogeneous, Solution};
use crate::sparse::{add_entry, axpy, SparseMap, SparseVec};

use super::cochains::CochainComplex;

/// `μ¹` on `hom(K, L)`; basis in the order of `c.hom(k, l)`.
pub fn hom_complex(c: &AInfCategory, k: usize, l: usize) -> Result<TruncatedComplex> {
    let f = c.field();
    let gens = c.hom(k, l);
    let pos = |g: usize| gens.iter().position(|&h| h == g).expect("μ¹ preserves hom spaces");
    let cols = gens
        .iter()
        .map(|&g| c.mu(&[g]).map(|v| v.iter().map(|(o, x)| (pos(*o), x.clone())).collect()).unwrap_or_default())
        .collect();
    TruncatedComplex::exact(f, c.hom_space(k, l), SparseMap::from_columns(gens.len(), 1, cols))
}

/// `φ_cell ∩ w` as a combination of generators of the underlying category.
fn cap_cell_word(cc: &CochainComplex, cell: usize, w: &[usize]) -> SparseVec {
    let p = cc.bimodule();
    let c = p.over();
    let f = c.field();
    let yon = p.yoneda().expect("cap product needs Yoneda coefficients");
    let cl = cc.cell(cell);
    let d = w.len();
    let g = cc.complex().space.degree(cell) - 1;
    let x0 = c.rdeg(w[0]);
    let mut out = SparseVec::new();
    for i in 1..=d {
        for j in i..=d {
            if w[i..j] != cl.word[..] || (i == j && c.gen(w[i - 1]).source != cl.source) {
                continue;
            }
            let between = c.rsum(&w[1..i]);
            let pn = g + c.rsum(&w[i..j]);
            let right = c.rsum(&w[j..d]);
            for l in 0..=d - j {
                let mut z = w[d - l..].to_vec();
                z.extend_from_slice(&w[..i]);
                let Some(act) = p.action(&z, cl.element, &[]) else { continue };
                let rest = &w[j..d - l];
                let (zs, rs) = (c.rsum(&w[d - l..]), c.rsum(rest));
                for (q, cq) in act {
                    let (x1, y1) = yon.factors[*q];
                    let mut key = vec![y1];
                    key.extend_from_slice(rest);
                    key.push(x1);
                    let Some(v) = c.mu(&key) else { continue };
                    let e = g * right + zs * (rs + pn + between + 1 + x0) + pn + between + c.rdeg(x1) * c.degree(y1) + 1;
                    axpy(&f, &mut out, &f.mul(&f.sign(e), cq), v);
                }
            }
        }
    }
    out
}

/// Chain-level `ε(φ ∩ σ)` for a cochain `φ` and check words `σ`.
pub fn cap_chain(cc: &CochainComplex, phi: &SparseVec, sigma: &[(Vec<usize>, Scalar)]) -> SparseVec {
    let f = cc.bimodule().field();
    let mut out = SparseVec::new();
    for (cell, a) in phi {
        for (w, b) in sigma {
            axpy(&f, &mut out, &f.mul(a, b), &cap_cell_word(cc, *cell, w));
        }
    }
    out
}

fn to_hom_basis(c: &AInfCategory, k: usize, l: usize, v: SparseVec) -> SparseVec {
    let gens = c.hom(k, l);
    v.into_iter().map(|(g, x)| (gens.iter().position(|&h| h == g).expect("cap lands in hom(K, L)"), x)).collect()
}

/// `φ ↦ ε(φ ∩ σ)` as a map from the cochain complex to `hom(K, L)`, of degree `deg`.
pub fn cap_map(cc: &CochainComplex, sigma: &[(Vec<usize>, Scalar)], deg: i64) -> SparseMap {
    let yon = cc.bimodule().yoneda().expect("cap product needs Yoneda coefficients");
    let c = cc.bimodule().over();
    let f = c.field();
    let cols = (0..cc.cells().len())
        .map(|cell| to_hom_basis(c, yon.a, yon.b, cap_chain(cc, &[(cell, f.one())].into_iter().collect(), sigma)))
        .collect();
    SparseMap::from_columns(c.hom(yon.a, yon.b).len(), deg, cols)
}

/// A check-sector cycle homologous to the `CH^nu` cycle `sigma`, found by solving
/// `b′ k = (hat part)` and subtracting `b^nu k̂`.
pub fn check_representative(nu: &NuComplex, sigma: &SparseVec) -> Result<Vec<(Vec<usize>, Scalar)>> {
    let f = nu.field();
    if !nu.complex().is_cycle(sigma) {
        return Err(Error::NotACycle(format!("b^nu σ ≠ 0 for σ = {}", nu.format_vec(sigma))));
    }
    let n = nu.n_check();
    let hat: SparseVec = sigma.range(n..).map(|(i, x)| (i - n, x.clone())).collect();
    let mut v: SparseVec = sigma.range(..n).map(|(i, x)| (*i, x.clone())).collect();
    if !hat.is_empty() {
        let k = match solve_inhomogeneous(&f, &nu.b_prime(), &hat)? {
            Solution::Solved(k) => k,
            Solution::Obstructed(_) => {
                return Err(Error::NotACycle("hat component is not a b′-boundary on the truncation".into()));
            }
        };
        for (i, x) in nu.d_wedge().apply(&f, &k) {
            add_entry(&f, &mut v, i, &f.neg(&x));
        }
    }
    Ok(v.into_iter().map(|(i, x)| (nu.word(i).gens.clone(), x)).collect())
}

/// The value of a cap product and whether it is nonzero in `H(hom(K, L))`.
#[derive(Debug, Clone)]
pub struct CapValue {
    /// Coefficients on `hom(K, L)` in the order of `c.hom(K, L)`.
    pub chain: SparseVec,
    pub nonzero_in_homology: bool,
}

/// `[φ ∩ σ]` for a cocycle `φ` with Yoneda coefficients and a `CH^nu` cycle `σ`.
pub fn cap_product(cc: &CochainComplex, phi: &SparseVec, nu: &NuComplex, sigma: &SparseVec) -> Result<CapValue> {
    if !cc.complex().is_cycle(phi) {
        return Err(Error::NotACycle("δφ ≠ 0".into()));
    }
    let words = check_representative(nu, sigma)?;
    let yon = cc.bimodule().yoneda().ok_or_else(|| Error::Input("cap product needs Yoneda coefficients".into()))?;
    let c = cc.bimodule().over();
    let chain = to_hom_basis(c, yon.a, yon.b, cap_chain(cc, phi, &words));
    let hom = hom_complex(c, yon.a, yon.b)?;
    let nonzero = match chain.keys().next() {
        None => false,
        Some(&i) => !hom.is_boundary(&chain, hom.space.degree(i)),
    };
    Ok(CapValue { chain, nonzero_in_homology: nonzero })
}
