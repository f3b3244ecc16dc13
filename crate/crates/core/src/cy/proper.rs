//! Proper Calabi–Yau structures: traces on Hochschild chains and their cyclic lifts.

use std::collections::HashMap;

use serde::Serialize;

use crate::ainfty::AInfCategory;
use crate::cyclic::nu_s1_complex;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::hochschild::{build_nu_unchecked, check_degree, hat_degree, Word};
use crate::linalg::{combine, Reduction};
use crate::report::Verdict;
use crate::sparse::{SparseMap, SparseVec};

use super::cap::hom_complex;

/// A functional on `CH^nu`, as coefficients on check and hat words.
pub type Functional = Vec<(Word, Scalar)>;

/// `t̃r = Σ_k tr^k u^k`, with `tr^k` supported on words of degree `n + 2k`.
#[derive(Debug, Clone)]
pub struct TraceData {
    pub n: i64,
    pub terms: Vec<Functional>,
}

pub(crate) fn word_degree(c: &AInfCategory, w: &Word) -> i64 {
    if w.hat {
        hat_degree(c, &w.gens)
    } else {
        check_degree(c, &w.gens)
    }
}

pub(crate) fn fmt_word(c: &AInfCategory, w: &Word) -> String {
    format!("{}:{}", if w.hat { "H" } else { "C" }, c.fmt_tuple(&w.gens))
}

pub(crate) fn check_pure(c: &AInfCategory, f: &Functional, deg: i64, what: &str) -> Result<()> {
    let f0 = c.field();
    for (w, x) in f {
        let d = word_degree(c, w);
        if *x != f0.zero() && !c.grading().eq_deg(d, deg) {
            return Err(Error::DegreeMismatch(format!("{what} is nonzero on {} of degree {d}, expected {deg}", fmt_word(c, w))));
        }
    }
    Ok(())
}

impl TraceData {
    pub fn new(c: &AInfCategory, n: i64, terms: Vec<Functional>) -> Result<Self> {
        for (k, t) in terms.iter().enumerate() {
            check_pure(c, t, n + 2 * k as i64, &format!("tr^{k}"))?;
        }
        Ok(TraceData { n, terms })
    }

    /// `tr^0`, the underlying trace.
    pub fn tr0(&self) -> &[(Word, Scalar)] {
        self.terms.first().map(|t| t.as_slice()).unwrap_or(&[])
    }
}

/// The pairing `H^p(hom(X, Y)) ⊗ H^{n−p}(hom(Y, X)) → k` for one degree.
#[derive(Debug, Clone, Serialize)]
pub struct PairingBlock {
    pub x: String,
    pub y: String,
    pub degree: i64,
    pub dims: (usize, usize),
    pub rank: usize,
    /// Rows indexed by classes of `hom(X, Y)`, columns by classes of `hom(Y, X)`.
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProperReport {
    pub verdict: Verdict,
    pub n: i64,
    /// Every block square and of full rank.
    pub perfect: bool,
    pub rank: usize,
    pub dims: (usize, usize),
    pub blocks: Vec<PairingBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

fn fmt_hom(c: &AInfCategory, v: &SparseVec) -> String {
    c.fmt_vec(v)
}

/// Non-degeneracy of `⟨a, b⟩ = tr([μ²(a, b)])` on morphism homology, for every pair of objects.
///
/// PASS when every block has rank `min(dims)`; `perfect` records whether the pairing is
/// in addition a perfect duality.
pub fn weak_proper_cy_check(c: &AInfCategory, n: i64, tr0: &[(Word, Scalar)]) -> Result<ProperReport> {
    let f = c.field();
    let tr0 = tr0.to_vec();
    check_pure(c, &tr0, n, "tr^0")?;
    let on_letters: HashMap<usize, Scalar> =
        tr0.iter().filter(|(w, _)| !w.hat && w.gens.len() == 1).map(|(w, x)| (w.gens[0], x.clone())).collect();
    let k = c.objects().len();
    let mut blocks = Vec::new();
    let mut witness = None;
    let (mut rank, mut dims, mut perfect) = (0, (0, 0), true);
    for x in 0..k {
        for y in 0..k {
            let hxy = hom_complex(c, x, y)?;
            let hyx = hom_complex(c, y, x)?;
            let mut degs: Vec<i64> = hxy.space.degrees().collect();
            degs.sort_unstable();
            degs.dedup();
            for p in degs {
                let q = c.grading().normalize(n - p);
                let left = hxy.homology_at(p);
                let right = hyx.homology_at(q);
                let gx: Vec<usize> = c.hom(x, y);
                let gy: Vec<usize> = c.hom(y, x);
                let lift = |v: &SparseVec, gens: &[usize]| -> SparseVec { v.iter().map(|(i, a)| (gens[*i], a.clone())).collect() };
                let pair = |a: &SparseVec, b: &SparseVec| -> Scalar {
                    let mut s = f.zero();
                    for (ga, xa) in a {
                        for (gb, xb) in b {
                            if let Some(out) = c.mu(&[*ga, *gb]) {
                                for (z, xz) in out {
                                    if let Some(t) = on_letters.get(z) {
                                        s = f.add(&s, &f.mul(&f.mul(xa, xb), &f.mul(xz, t)));
                                    }
                                }
                            }
                        }
                    }
                    s
                };
                let la: Vec<SparseVec> = left.reps.iter().map(|v| lift(v, &gx)).collect();
                let rb: Vec<SparseVec> = right.reps.iter().map(|v| lift(v, &gy)).collect();
                let entries: Vec<Vec<Scalar>> = la.iter().map(|a| rb.iter().map(|b| pair(a, b)).collect()).collect();
                let (na, nb) = (la.len(), rb.len());
                // Columns over the smaller side, so a kernel vector is a degenerate class.
                let (cols, reps, other) = if na <= nb {
                    let cols = (0..na).map(|i| (0..nb).map(|j| (j, entries[i][j].clone())).filter(|(_, s)| *s != f.zero()).collect()).collect();
                    (cols, &left.reps, nb)
                } else {
                    let cols = (0..nb).map(|j| (0..na).map(|i| (i, entries[i][j].clone())).filter(|(_, s)| *s != f.zero()).collect()).collect();
                    (cols, &right.reps, na)
                };
                let m = SparseMap::from_columns(other, 0, cols);
                let red = Reduction::new(&f, &m, true);
                let r = red.rank();
                let full = r == na.min(nb);
                if !full && witness.is_none() {
                    let class = combine(&f, reps, &red.kernel()[0]);
                    let gens = if na <= nb { &gx } else { &gy };
                    witness = Some(format!(
                        "({}, {}) degree {p}: rank {r} of {}; class {} pairs to zero",
                        c.objects()[x],
                        c.objects()[y],
                        na.min(nb),
                        fmt_hom(c, &lift(&class, gens))
                    ));
                }
                perfect &= full && na == nb;
                rank += r;
                dims = (dims.0 + na, dims.1 + nb);
                blocks.push(PairingBlock {
                    x: c.objects()[x].clone(),
                    y: c.objects()[y].clone(),
                    degree: p,
                    dims: (na, nb),
                    rank: r,
                    matrix: entries.iter().map(|row| row.iter().map(|s| f.format(s)).collect()).collect(),
                });
            }
        }
    }
    Ok(ProperReport { verdict: Verdict::from_bool(witness.is_none()), n, perfect, rank, dims, blocks, witness })
}

/// `Σ_k tr^{j−k} ∘ δ_k` on words of degree `n + 2j − 1`.
#[derive(Debug, Clone, Serialize)]
pub struct UResidual {
    pub u: usize,
    pub examined: usize,
    pub nonzero: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StrongProperReport {
    pub verdict: Verdict,
    pub chain_map: bool,
    pub length_bound: usize,
    pub residuals: Vec<UResidual>,
    pub weak: ProperReport,
}

fn as_row(f: &Field, nu: &crate::hochschild::NuComplex, t: &Functional) -> Result<HashMap<usize, Scalar>> {
    let mut row = HashMap::new();
    for (w, x) in t {
        let i = nu.index_of(w).ok_or_else(|| {
            Error::Input(format!("trace word {} is not in the length-{} truncation", fmt_word(nu.category(), w), nu.length_bound()))
        })?;
        let e = row.entry(i).or_insert_with(|| f.zero());
        *e = f.add(e, x);
    }
    Ok(row)
}

/// `t̃r ∘ b_eq = 0` on the homotopy-orbit complex of `CH^nu` truncated at length `l`, and
/// the weak check for `tr^0`.
pub fn strong_proper_cy_check(c: &AInfCategory, t: &TraceData, l: usize) -> Result<StrongProperReport> {
    let f = c.field();
    let n = t.n;
    let top = (n + 2 * t.terms.len() as i64 + 1).max(n);
    let nu = build_nu_unchecked(c, l, (n - 1, top))?;
    let s1 = nu_s1_complex(&nu)?;
    let rows = t.terms.iter().map(|x| as_row(&f, &nu, x)).collect::<Result<Vec<_>>>()?;
    let deltas = s1.deltas();
    let mut residuals = Vec::new();
    for j in 0..=t.terms.len() {
        let d = n + 2 * j as i64 - 1;
        let words = nu.space().in_degree(d);
        let mut bad = Vec::new();
        for &a in words {
            let mut s = f.zero();
            for (k, delta) in deltas.iter().enumerate() {
                let Some(row) = j.checked_sub(k).and_then(|i| rows.get(i)) else { continue };
                for (o, x) in delta.column(a) {
                    if let Some(tv) = row.get(o) {
                        s = f.add(&s, &f.mul(tv, x));
                    }
                }
            }
            if s != f.zero() {
                bad.push((a, s));
            }
        }
        let witness = bad.first().map(|(a, s)| format!("{} ↦ {}", nu.label(*a), f.format(s)));
        residuals.push(UResidual { u: j, examined: words.len(), nonzero: bad.len(), witness });
    }
    let chain_map = residuals.iter().all(|r| r.nonzero == 0);
    let weak = weak_proper_cy_check(c, n, t.tr0())?;
    let verdict = Verdict::from_bool(chain_map && weak.verdict == Verdict::Pass);
    Ok(StrongProperReport { verdict, chain_map, length_bound: l, residuals, weak })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::fixtures::*;

    fn letter(c: &AInfCategory, g: &str, x: i64) -> (Word, Scalar) {
        (Word::check(vec![c.index_of(g).unwrap()]), c.field().from_i64(x))
    }

    #[test]
    fn exterior_trace_pairs_perfectly() {
        let c = exterior(Field::Rational, 1);
        let r = weak_proper_cy_check(&c, 1, &[letter(&c, "eps", 1), letter(&c, "1", 0)]).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!((r.rank, r.dims), (2, (2, 2)));
        assert!(r.perfect);
    }

    #[test]
    fn zero_trace_fails_with_witness() {
        let c = exterior(Field::Rational, 1);
        let r = weak_proper_cy_check(&c, 1, &[]).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.rank, 0);
        assert!(r.witness.unwrap().contains("pairs to zero"));
    }

    #[test]
    fn wrong_degree_is_rejected() {
        let c = exterior(Field::Rational, 1);
        assert!(matches!(weak_proper_cy_check(&c, 0, &[letter(&c, "eps", 1)]), Err(Error::DegreeMismatch(_))));
        assert!(matches!(TraceData::new(&c, 1, vec![vec![], vec![letter(&c, "eps", 1)]]), Err(Error::DegreeMismatch(_))));
    }

    #[test]
    fn ground_field_and_quiver() {
        let g = ground_field(Field::Rational);
        let r = weak_proper_cy_check(&g, 0, &[letter(&g, "e", 1)]).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let q = quiver(Field::Rational);
        let r = weak_proper_cy_check(&q, 0, &[letter(&q, "eA", 1), letter(&q, "eB", 1)]).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(!r.perfect);
    }

    #[test]
    fn rescaled_trace_has_the_same_verdict() {
        let c = exterior(Field::Prime(5), 1);
        for s in 1..5 {
            let r = weak_proper_cy_check(&c, 1, &[letter(&c, "eps", s)]).unwrap();
            assert_eq!(r.verdict, Verdict::Pass);
        }
    }

    #[test]
    fn strong_check_on_exterior() {
        let c = exterior(Field::Rational, 1);
        let t = TraceData::new(&c, 1, vec![vec![letter(&c, "eps", 1)], vec![]]).unwrap();
        let r = strong_proper_cy_check(&c, &t, 4).unwrap();
        assert!(r.chain_map, "{:?}", r.residuals);
        assert_eq!(r.verdict, Verdict::Pass);
        let zero = TraceData::new(&c, 1, vec![]).unwrap();
        let r = strong_proper_cy_check(&c, &zero, 4).unwrap();
        assert!(r.chain_map);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn corrupted_tr1_breaks_the_u1_equation() {
        let c = exterior(Field::Rational, 5);
        let (one, eps) = (c.index_of("1").unwrap(), c.index_of("eps").unwrap());
        let tr0 = vec![letter(&c, "eps", 1)];
        let good = TraceData::new(&c, 5, vec![tr0.clone()]).unwrap();
        assert!(strong_proper_cy_check(&c, &good, 4).unwrap().chain_map);
        let bad = TraceData::new(&c, 5, vec![tr0, vec![(Word::check(vec![one, one, eps, eps]), c.field().one())]]).unwrap();
        let r = strong_proper_cy_check(&c, &bad, 4).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.weak.verdict, Verdict::Pass);
        assert!(r.residuals[1].nonzero > 0 && r.residuals[1].witness.is_some());
    }
}
