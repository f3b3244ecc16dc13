//! Smooth Calabi–Yau structures: co-traces and the cap-product isomorphism.
//!
//! Verdicts assume the category is homologically smooth; that hypothesis is not checked.

use rayon::prelude::*;
use serde::Serialize;

use crate::ainfty::AInfCategory;
use crate::complex::induced_rank;
use crate::cyclic::nu_s1_complex;
use crate::equivariant::fixed;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::hochschild::{build_nu_unchecked, NuComplex, Word};
use crate::report::Verdict;
use crate::sparse::{add_entry, SparseVec};

use super::bimodule::yoneda_bimodule;
use super::cap::{cap_map, check_representative, hom_complex};
use super::cochains::hochschild_cochains;
use super::proper::{check_pure, fmt_word, Functional};

/// `σ̃ = Σ_k σ_k u^k` in the fixed-point complex of `CH^nu`, with `|σ_k| = −n − 2k`.
#[derive(Debug, Clone)]
pub struct CotraceData {
    pub n: i64,
    pub terms: Vec<Functional>,
}

impl CotraceData {
    pub fn new(c: &AInfCategory, n: i64, terms: Vec<Functional>) -> Result<Self> {
        for (k, t) in terms.iter().enumerate() {
            check_pure(c, t, -n - 2 * k as i64, &format!("σ_{k}"))?;
        }
        Ok(CotraceData { n, terms })
    }

    /// `ι(σ̃) = σ_0`.
    pub fn sigma(&self) -> &[(Word, Scalar)] {
        self.terms.first().map(|t| t.as_slice()).unwrap_or(&[])
    }
}

/// `[∩σ]: HH^d(C, Y^l_K ⊗ Y^r_L) → H^{d−n}(hom(K, L))` in one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CapBlock {
    pub k: String,
    pub l: String,
    pub degree: i64,
    pub hh_dim: usize,
    pub hom_dim: usize,
    pub rank: usize,
}

impl CapBlock {
    pub fn is_iso(&self) -> bool {
        self.hh_dim == self.hom_dim && self.rank == self.hh_dim
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SmoothReport {
    pub verdict: Verdict,
    pub n: i64,
    /// Smoothness of the category is assumed, not verified.
    pub conditional: bool,
    pub length_bound: usize,
    pub certified: bool,
    /// Whether every block agrees at length bounds `L` and `L + 1`.
    pub stable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub blocks: Vec<CapBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

fn to_chain(nu: &NuComplex, sigma: &[(Word, Scalar)]) -> Result<SparseVec> {
    let f = nu.field();
    let mut v = SparseVec::new();
    for (w, x) in sigma {
        let i = nu.index_of(w).ok_or_else(|| {
            Error::Input(format!("word {} is not in the length-{} truncation", fmt_word(nu.category(), w), nu.length_bound()))
        })?;
        add_entry(&f, &mut v, i, x);
    }
    Ok(v)
}

fn cap_blocks(
    c: &AInfCategory,
    sigma: &[(Word, Scalar)],
    n: i64,
    pairs: &[(usize, usize)],
    l: usize,
    window: (i64, i64),
) -> Result<(Vec<CapBlock>, bool)> {
    let nu = build_nu_unchecked(c, l, (-n, -n))?;
    let words = check_representative(&nu, &to_chain(&nu, sigma)?)?;
    let per_pair = pairs
        .par_iter()
        .map(|&(k, ll)| {
            let cc = hochschild_cochains(&yoneda_bimodule(c, k, ll)?, l, window)?;
            let m = cap_map(&cc, &words, -n);
            let hom = hom_complex(c, k, ll)?;
            let blocks = (window.0..=window.1)
                .map(|d| CapBlock {
                    k: c.objects()[k].clone(),
                    l: c.objects()[ll].clone(),
                    degree: d,
                    hh_dim: cc.complex().homology_at(d).dim,
                    hom_dim: hom.homology_at(c.grading().normalize(d - n)).dim,
                    rank: induced_rank(&m, cc.complex(), &hom, d),
                })
                .collect::<Vec<_>>();
            Ok((blocks, cc.complex().certified))
        })
        .collect::<Result<Vec<_>>>()?;
    let certified = per_pair.iter().all(|(_, cert)| *cert);
    Ok((per_pair.into_iter().flat_map(|(b, _)| b).collect(), certified))
}

/// Whether `[∩σ]` is an isomorphism on `window` for each pair `(K, L)`; all pairs when `pairs` is `None`.
pub fn weak_smooth_cy_check(
    c: &AInfCategory,
    n: i64,
    sigma: &[(Word, Scalar)],
    pairs: Option<&[(usize, usize)]>,
    l: usize,
    window: (i64, i64),
) -> Result<SmoothReport> {
    check_pure(c, &sigma.to_vec(), -n, "σ")?;
    let k = c.objects().len();
    let all: Vec<(usize, usize)> = (0..k).flat_map(|a| (0..k).map(move |b| (a, b))).collect();
    let pairs = pairs.unwrap_or(&all);
    let (blocks, certified) = cap_blocks(c, sigma, n, pairs, l, window)?;
    let (next, _) = cap_blocks(c, sigma, n, pairs, l + 1, window)?;
    let stable = next == blocks;
    let witness = blocks.iter().find(|b| !b.is_iso()).map(|b| {
        format!(
            "({}, {}) degree {}: HH dim {}, hom dim {}, cap rank {}",
            b.k, b.l, b.degree, b.hh_dim, b.hom_dim, b.rank
        )
    });
    let note = if certified {
        None
    } else {
        Some(format!("uncertified: {} at (L, L+1) = ({l}, {})", if stable { "stable" } else { "not stable" }, l + 1))
    };
    Ok(SmoothReport {
        verdict: Verdict::from_bool(witness.is_none()),
        n,
        conditional: true,
        length_bound: l,
        certified,
        stable,
        note,
        blocks,
        witness,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SmoothLiftReport {
    pub verdict: Verdict,
    /// `b_eq σ̃ = 0` on words shorter than the length bound.
    pub cycle: bool,
    /// Nonzero terms of `b_eq σ̃` on words of maximal length, not decided by the truncation.
    pub boundary_terms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weak: Option<SmoothReport>,
}

/// `b_eq σ̃ = 0` in the fixed-point complex below the length bound, then the weak check for `ι(σ̃)`.
pub fn smooth_cy_lift_check(c: &AInfCategory, t: &CotraceData, l: usize, window: (i64, i64)) -> Result<SmoothLiftReport> {
    let f = c.field();
    let n = t.n;
    let nu = build_nu_unchecked(c, l, (-n, -n))?;
    let fx = fixed(&nu_s1_complex(&nu)?, (-n, -n))?;
    let mut v = SparseVec::new();
    for (k, term) in t.terms.iter().enumerate() {
        for (i, x) in to_chain(&nu, term)? {
            let cell = fx.index_of(i, k as i64).ok_or_else(|| Error::Input(format!("σ_{k} leaves the fixed-point window")))?;
            add_entry(&f, &mut v, cell, &x);
        }
    }
    // Terms on words of length L can be cancelled by b of longer words, outside the truncation.
    let (top, r): (Vec<_>, Vec<_>) =
        fx.complex.differential.apply(&f, &v).into_iter().partition(|(i, _)| nu.word(fx.cells()[*i].0).gens.len() == l);
    let boundary_terms = top.len();
    if !r.is_empty() {
        let shown: Vec<String> = r.iter().take(4).map(|(i, x)| format!("{}·{}", f.format(x), fx.complex.space.label(*i))).collect();
        let residual = Some(shown.join(" + "));
        return Ok(SmoothLiftReport { verdict: Verdict::Fail, cycle: false, boundary_terms, residual, weak: None });
    }
    let weak = weak_smooth_cy_check(c, n, t.sigma(), None, l, window)?;
    Ok(SmoothLiftReport { verdict: weak.verdict, cycle: true, boundary_terms, residual: None, weak: Some(weak) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::fixtures::*;
    use crate::field::Field;
    use crate::linalg::{solve_inhomogeneous, Solution};
    use crate::sparse::scale;

    fn words(nu: &NuComplex, v: &SparseVec) -> Functional {
        v.iter().map(|(i, x)| (nu.word(*i).clone(), x.clone())).collect()
    }

    fn unit_word(c: &AInfCategory) -> Functional {
        vec![(Word::check(vec![c.index_of("e").unwrap()]), c.field().one())]
    }

    #[test]
    fn ground_field_unit_word_is_a_cotrace() {
        let c = ground_field(Field::Rational);
        let r = weak_smooth_cy_check(&c, 0, &unit_word(&c), None, 3, (0, 0)).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.certified && r.stable && r.conditional);
        assert_eq!(r.blocks, vec![CapBlock { k: "pt".into(), l: "pt".into(), degree: 0, hh_dim: 1, hom_dim: 1, rank: 1 }]);
    }

    #[test]
    fn zero_cotrace_fails() {
        let c = ground_field(Field::Rational);
        let r = weak_smooth_cy_check(&c, 0, &[], None, 3, (0, 0)).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.witness.unwrap().contains("cap rank 0"));
    }

    #[test]
    fn exterior_candidate_reports_stability() {
        let c = exterior(Field::Rational, 1);
        let sigma = vec![(Word::check(vec![c.index_of("1").unwrap()]), c.field().one())];
        let r = weak_smooth_cy_check(&c, 0, &sigma, None, 3, (0, 1)).unwrap();
        assert!(!r.certified);
        assert!(r.note.unwrap().contains("at (L, L+1) = (3, 4)"));
        assert_eq!(r.blocks.len(), 2);
    }

    #[test]
    fn pairs_can_be_restricted() {
        let c = quiver(Field::Rational);
        let sigma = vec![(Word::check(vec![c.index_of("eA").unwrap()]), c.field().one())];
        let r = weak_smooth_cy_check(&c, 0, &sigma, Some(&[(1, 1)]), 3, (0, 0)).unwrap();
        assert!(r.blocks.iter().all(|b| b.k == "B" && b.l == "B"));
    }

    #[test]
    fn non_cycles_and_wrong_degrees_are_rejected() {
        let c = exterior(Field::Rational, 1);
        let one = (Word::check(vec![c.index_of("1").unwrap()]), c.field().one());
        assert!(matches!(weak_smooth_cy_check(&c, 1, std::slice::from_ref(&one), None, 3, (0, 0)), Err(Error::DegreeMismatch(_))));
        let nu = build_nu_unchecked(&c, 3, (0, 0)).unwrap();
        let w = (0..nu.dim()).find(|&i| !nu.b_nu().column(i).is_empty()).unwrap();
        let n = -nu.space().degree(w);
        let bad = vec![(nu.word(w).clone(), c.field().one())];
        assert!(matches!(weak_smooth_cy_check(&c, n, &bad, None, 3, (0, 0)), Err(Error::NotACycle(_))));
    }

    #[test]
    fn constant_series_reduces_to_the_weak_check() {
        let c = exterior(Field::Rational, 1);
        let nu = build_nu_unchecked(&c, 3, (0, 0)).unwrap();
        let h = nu.index_of_label("H:eps").unwrap();
        let sigma: SparseVec = [(h, c.field().one())].into_iter().collect();
        assert!(nu.big_b().apply(&c.field(), &sigma).is_empty());
        let t = CotraceData::new(&c, 0, vec![words(&nu, &sigma)]).unwrap();
        let r = smooth_cy_lift_check(&c, &t, 3, (0, 0)).unwrap();
        assert!(r.cycle);
        let weak = weak_smooth_cy_check(&c, 0, t.sigma(), None, 3, (0, 0)).unwrap();
        assert_eq!(r.verdict, weak.verdict);
    }

    #[test]
    fn unit_word_lifts_with_corrections() {
        let c = ground_field(Field::Rational);
        let f = c.field();
        let l = 5;
        let bare = CotraceData::new(&c, 0, vec![unit_word(&c)]).unwrap();
        let r = smooth_cy_lift_check(&c, &bare, l, (0, 0)).unwrap();
        assert!(!r.cycle && r.residual.is_some());
        assert_eq!(r.verdict, Verdict::Fail);

        let nu = build_nu_unchecked(&c, l, (0, 0)).unwrap();
        let mut sigma: SparseVec = [(nu.index_of_label("C:e").unwrap(), f.one())].into_iter().collect();
        let mut terms = vec![words(&nu, &sigma)];
        loop {
            let rhs = scale(&f, &f.neg(&f.one()), &nu.big_b().apply(&f, &sigma));
            if rhs.is_empty() {
                break;
            }
            let Solution::Solved(next) = solve_inhomogeneous(&f, nu.b_nu(), &rhs).unwrap() else { break };
            sigma = next;
            terms.push(words(&nu, &sigma));
        }
        assert!(terms.len() > 1 && !terms[1].is_empty());
        let t = CotraceData::new(&c, 0, terms).unwrap();
        let r = smooth_cy_lift_check(&c, &t, l, (0, 0)).unwrap();
        assert!(r.cycle, "{:?}", r.residual);
        assert!(r.boundary_terms > 0);
        assert_eq!(r.verdict, Verdict::Pass);
    }
}
