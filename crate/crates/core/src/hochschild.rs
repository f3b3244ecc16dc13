//! Cyclic bar and non-unital Hochschild complexes with their circle action.
//!
//! A word `[x_d, …, x_1]` is stored in written order, so `x_m = w[d − m]`.
//! Check words have degree `Σ ||x_i|| + 1`, hat words one less. Every
//! operator here preserves or shortens word length, so the span of words of
//! length at most `L` is closed under all of them.

use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};

use crate::ainfty::{strip_units, AInfCategory, AInfFunctor};
use crate::complex::{TruncatedComplex, Truncation};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::graded::{GradedSpace, Grading};
use crate::sparse::{add_entry, SparseMap, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub hat: bool,
    pub gens: Vec<usize>,
}

impl Word {
    pub fn check(gens: Vec<usize>) -> Self {
        Word { hat: false, gens }
    }

    pub fn hat(gens: Vec<usize>) -> Self {
        Word { hat: true, gens }
    }
}

/// Output of a word-level operator: target words with coefficients.
pub type Terms = Vec<(Vec<usize>, Scalar)>;

/// `✠_a^b = Σ_{m=a}^{b} ||x_m||` for one word.
struct Dagger {
    prefix: Vec<i64>,
}

impl Dagger {
    fn new(c: &AInfCategory, w: &[usize]) -> Self {
        let d = w.len();
        let mut prefix = vec![0; d + 1];
        for m in 1..=d {
            prefix[m] = prefix[m - 1] + c.rdeg(w[d - m]);
        }
        Dagger { prefix }
    }

    fn sum(&self, a: usize, b: usize) -> i64 {
        if a > b {
            0
        } else {
            self.prefix[b] - self.prefix[a - 1]
        }
    }

    /// `||x_m||`
    fn r(&self, m: usize) -> i64 {
        self.sum(m, m)
    }
}

pub fn cyclically_composable(c: &AInfCategory, w: &[usize]) -> bool {
    !w.is_empty() && c.composable(w) && c.gen(w[0]).target == c.gen(w[w.len() - 1]).source
}

/// All cyclically composable words of length `1..=max_len`, ordered by length then lexicographically.
pub fn cyclic_words(c: &AInfCategory, max_len: usize) -> Vec<Vec<usize>> {
    let n = c.generators().len();
    let mut out = Vec::new();
    // paths in written order, grown on the left: the new letter x must have source = target of current head
    let mut frontier: Vec<Vec<usize>> = (0..n).map(|g| vec![g]).collect();
    for len in 1..=max_len {
        let mut level: Vec<Vec<usize>> = frontier.iter().filter(|w| cyclically_composable(c, w)).cloned().collect();
        level.sort();
        out.extend(level);
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for w in &frontier {
            let head = c.gen(w[0]).target;
            for g in 0..n {
                if c.gen(g).source == head {
                    let mut v = Vec::with_capacity(w.len() + 1);
                    v.push(g);
                    v.extend_from_slice(w);
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    out
}

pub fn check_degree(c: &AInfCategory, w: &[usize]) -> i64 {
    c.grading().normalize(c.rsum(w) + 1)
}

pub fn hat_degree(c: &AInfCategory, w: &[usize]) -> i64 {
    c.grading().normalize(c.rsum(w))
}

fn push_mu(c: &AInfCategory, out: &mut Terms, key: &[usize], sign: i64, build: impl Fn(usize) -> Vec<usize>) {
    if let Some(v) = c.mu(key) {
        let f = c.field();
        let s = f.sign(sign);
        for (g, coeff) in v {
            out.push((build(*g), f.mul(&s, coeff)));
        }
    }
}

/// Cyclic bar differential `b` on a check word.
pub fn b_word(c: &AInfCategory, w: &[usize]) -> Terms {
    let d = w.len();
    let dg = Dagger::new(c, w);
    let mut out = Terms::new();
    // wrap-around: μ^{d−i}(x_k, …, x_1, x_d, …, x_{k+i+1}) ⊗ x_{k+i} ⊗ … ⊗ x_{k+1}
    for k in 0..d {
        for i in 0..(d - k) {
            let mut key = w[d - k..].to_vec();
            key.extend_from_slice(&w[..d - k - i]);
            let sign = dg.sum(1, k) * (1 + dg.sum(k + 1, d)) + dg.sum(k + 1, d - 1) + 1;
            let rest = &w[d - k - i..d - k];
            push_mu(c, &mut out, &key, sign, |g| {
                let mut v = vec![g];
                v.extend_from_slice(rest);
                v
            });
        }
    }
    // interior blocks μ^j(x_{s+j}, …, x_{s+1}) away from x_d
    for s in 0..d {
        for j in 1..d.saturating_sub(s) {
            push_block(c, &dg, w, s, j, &mut out);
        }
    }
    out
}

fn push_block(c: &AInfCategory, dg: &Dagger, w: &[usize], s: usize, j: usize, out: &mut Terms) {
    let d = w.len();
    let key = &w[d - s - j..d - s];
    push_mu(c, out, key, dg.sum(1, s), |g| {
        let mut v = w[..d - s - j].to_vec();
        v.push(g);
        v.extend_from_slice(&w[d - s..]);
        v
    });
}

/// Bar differential `b′` on a hat word: every contiguous block, no wrap-around.
pub fn b_prime_word(c: &AInfCategory, w: &[usize]) -> Terms {
    let d = w.len();
    let dg = Dagger::new(c, w);
    let mut out = Terms::new();
    for s in 0..d {
        for j in 1..=(d - s) {
            push_block(c, &dg, w, s, j, &mut out);
        }
    }
    out
}

/// `d∧∨` from a hat word to check words.
pub fn d_wedge_word(c: &AInfCategory, w: &[usize]) -> Terms {
    let d = w.len();
    let f = c.field();
    let dg = Dagger::new(c, w);
    let tail = dg.sum(2, d);
    let mut rot = vec![w[d - 1]];
    rot.extend_from_slice(&w[..d - 1]);
    vec![(rot, f.sign(tail + dg.r(1) * tail + 1)), (w.to_vec(), f.sign(dg.sum(1, d - 1)))]
}

/// Cyclic permutation `t(x_k ⊗ … ⊗ x_1) = ± x_1 ⊗ x_k ⊗ … ⊗ x_2`.
pub fn t_word(c: &AInfCategory, w: &[usize]) -> (Vec<usize>, i64) {
    let k = w.len();
    let dg = Dagger::new(c, w);
    let mut rot = vec![w[k - 1]];
    rot.extend_from_slice(&w[..k - 1]);
    (rot, dg.r(1) * dg.sum(2, k) + dg.r(1) + dg.r(k))
}

/// Sign exponent of `s^nu` (and of unit insertion) on a word: `✠_1^d + ||x_d|| + 1`.
pub fn s_sign(c: &AInfCategory, w: &[usize]) -> i64 {
    let d = w.len();
    let dg = Dagger::new(c, w);
    dg.sum(1, d) + dg.r(d) + 1
}

/// `N = Σ t^i` on a check word, as signed rotations.
pub fn norm_word(c: &AInfCategory, w: &[usize]) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::with_capacity(w.len());
    let mut cur = w.to_vec();
    let mut sign = 0;
    for _ in 0..w.len() {
        out.push((cur.clone(), sign));
        let (next, s) = t_word(c, &cur);
        sign += s;
        cur = next;
    }
    out
}

/// Which homology computations are exact on a window, given a length bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub regime: Regime,
    /// No word of length `> L` has degree in `[a − 1, b]`.
    pub hochschild: bool,
    /// No word of length `> L` has degree `≤ b`.
    pub fixed: bool,
    /// No word of length `> L` has degree `≥ a − 1`, or the complex splits by length
    /// over Q and no word of length `> L` has degree `< b`.
    pub orbits: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Every generator has `||x|| ≥ 1`; word degrees grow with length.
    Positive,
    /// Every generator has `||x|| ≤ −1`; word degrees fall with length.
    Negative,
    /// Some generator has `||x|| = 0`, the reduced degrees have mixed signs, or the grading is Z/2.
    Indefinite,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Positive => "positive",
            Regime::Negative => "negative",
            Regime::Indefinite => "indefinite",
        })
    }
}

pub fn regime(c: &AInfCategory) -> Regime {
    if c.grading() == Grading::Z2 || c.generators().is_empty() {
        return if c.generators().is_empty() { Regime::Positive } else { Regime::Indefinite };
    }
    let r: Vec<i64> = (0..c.generators().len()).map(|g| c.rdeg(g)).collect();
    if r.iter().all(|&x| x >= 1) {
        Regime::Positive
    } else if r.iter().all(|&x| x <= -1) {
        Regime::Negative
    } else {
        Regime::Indefinite
    }
}

/// Degree bounds for words of length `> L` in either sector.
fn long_word_bounds(c: &AInfCategory, l: usize) -> (Option<i64>, Option<i64>) {
    let n = l as i64 + 1;
    let r: Vec<i64> = (0..c.generators().len()).map(|g| c.rdeg(g)).collect();
    match regime(c) {
        Regime::Positive if r.is_empty() => (None, None),
        Regime::Positive => (Some(n * r.iter().min().unwrap()), None),
        Regime::Negative => (None, Some(n * r.iter().max().unwrap() + 1)),
        Regime::Indefinite => (None, None),
    }
}

pub fn certify(c: &AInfCategory, l: usize, window: (i64, i64)) -> Certificate {
    let (a, b) = window;
    let reg = regime(c);
    if c.generators().is_empty() {
        return Certificate { regime: reg, hochschild: true, fixed: true, orbits: true };
    }
    let (min_long, max_long) = long_word_bounds(c, l);
    let above = min_long.is_some_and(|m| m > b);
    let below = max_long.is_some_and(|m| m < a - 1);
    let split = c.field().characteristic() == 0 && length_graded(c);
    let orbits = below || (split && min_long.is_some_and(|m| m >= b));
    Certificate { regime: reg, hochschild: above || below, fixed: above, orbits }
}

/// `μ^d = 0` for `d ≥ 2`, so every operator on `CH^nu` preserves word length.
pub fn length_graded(c: &AInfCategory) -> bool {
    c.mu_entries().all(|(t, v)| t.len() < 2 || v.is_empty())
}

fn word_label(c: &AInfCategory, w: &Word) -> String {
    let parts: Vec<&str> = w.gens.iter().map(|&g| c.label(g)).collect();
    format!("{}:{}", if w.hat { "H" } else { "C" }, parts.join("|"))
}

/// The non-unital Hochschild complex truncated to word length `≤ L`, with `B^nu`.
#[derive(Debug, Clone)]
pub struct NuComplex {
    category: AInfCategory,
    length_bound: usize,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    n_check: usize,
    complex: TruncatedComplex,
    big_b: SparseMap,
    certificate: Certificate,
}

impl NuComplex {
    pub fn category(&self) -> &AInfCategory {
        &self.category
    }

    pub fn field(&self) -> Field {
        self.category.field()
    }

    pub fn length_bound(&self) -> usize {
        self.length_bound
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word(&self, i: usize) -> &Word {
        &self.words[i]
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.complex.space.index_of(label)
    }

    pub fn label(&self, i: usize) -> &str {
        self.complex.space.label(i)
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn n_check(&self) -> usize {
        self.n_check
    }

    pub fn space(&self) -> &GradedSpace {
        &self.complex.space
    }

    /// `(CH^nu, b^nu)` as a truncated complex.
    pub fn complex(&self) -> &TruncatedComplex {
        &self.complex
    }

    pub fn b_nu(&self) -> &SparseMap {
        &self.complex.differential
    }

    pub fn big_b(&self) -> &SparseMap {
        &self.big_b
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    fn check_indices(&self) -> Vec<usize> {
        (0..self.n_check).collect()
    }

    /// The cyclic bar complex `(CH, b)`, the check-sector subcomplex.
    pub fn check_complex(&self) -> Result<TruncatedComplex> {
        let idx = self.check_indices();
        let basis = idx.iter().map(|&i| (self.label(i).to_string(), self.space().degree(i))).collect();
        let space = GradedSpace::new(self.category.grading(), basis)?;
        let d = self.b_nu().submatrix(&idx, &idx).with_degree(1);
        let mut c = TruncatedComplex::new(self.field(), space, d, self.complex.truncation.clone())?;
        c.certified = self.complex.certified;
        c.note = self.complex.note.clone();
        Ok(c)
    }

    fn terms_to_vec(&self, terms: Terms, hat: bool) -> SparseVec {
        let f = self.field();
        let mut v = SparseVec::new();
        for (g, c) in terms {
            let w = Word { hat, gens: g };
            let i = *self.index.get(&w).expect("operator output stays in the length truncation");
            add_entry(&f, &mut v, i, &c);
        }
        v
    }

    fn map_words(&self, degree: i64, col: impl Fn(&Word) -> SparseVec + Sync + Send) -> SparseMap {
        let cols: Vec<SparseVec> = self.words.par_iter().map(col).collect();
        SparseMap::from_columns(self.dim(), degree, cols)
    }

    /// Cyclic permutation `t` on check words, zero on hat words.
    pub fn operator_t(&self) -> SparseMap {
        let c = &self.category;
        let f = self.field();
        self.map_words(0, |w| {
            if w.hat {
                return SparseVec::new();
            }
            let (r, s) = t_word(c, &w.gens);
            self.terms_to_vec(vec![(r, f.sign(s))], false)
        })
    }

    /// Norm `N = 1 + t + … + t^{k−1}` on check words, zero on hat words.
    pub fn operator_n(&self) -> SparseMap {
        let c = &self.category;
        let f = self.field();
        self.map_words(0, |w| {
            if w.hat {
                return SparseVec::new();
            }
            let terms = norm_word(c, &w.gens).into_iter().map(|(r, s)| (r, f.sign(s))).collect();
            self.terms_to_vec(terms, false)
        })
    }

    /// `s^nu`: check words to signed hat copies, hat words to zero.
    pub fn operator_s_nu(&self) -> SparseMap {
        let c = &self.category;
        let f = self.field();
        self.map_words(-1, |w| {
            if w.hat {
                return SparseVec::new();
            }
            self.terms_to_vec(vec![(w.gens.clone(), f.sign(s_sign(c, &w.gens)))], true)
        })
    }

    /// Restriction of `b^nu` to the hat sector followed by projection to hat: `b′`.
    pub fn b_prime(&self) -> SparseMap {
        let hat: Vec<usize> = (self.n_check..self.dim()).collect();
        self.b_nu().submatrix(&hat, &hat).with_degree(1)
    }

    /// The off-diagonal block `d∧∨`: hat to check.
    pub fn d_wedge(&self) -> SparseMap {
        let hat: Vec<usize> = (self.n_check..self.dim()).collect();
        self.b_nu().submatrix(&self.check_indices(), &hat).with_degree(1)
    }

    /// The check-sector block `b`.
    pub fn b(&self) -> SparseMap {
        let chk = self.check_indices();
        self.b_nu().submatrix(&chk, &chk).with_degree(1)
    }

    pub fn format_vec(&self, v: &SparseVec) -> String {
        crate::ainfty::fmt_combination(&self.field(), v, |i| self.label(i).to_string())
    }
}

fn first_violation(f: &Field, m: &SparseMap, what: &str, label: impl Fn(usize) -> String) -> Result<()> {
    match m.first_nonzero() {
        None => Ok(()),
        Some((r, c, v)) => Err(Error::IdentityViolated(format!(
            "{what}: coefficient {} of {} on {}",
            f.format(&v),
            label(r),
            label(c)
        ))),
    }
}

/// Build `CH^nu` truncated at length `L`; asserts all circle-action identities.
///
/// Fails with `TruncationTooSmall` when the category is in a certifiable regime
/// but words longer than `L` reach the window.
pub fn build_nu(c: &AInfCategory, l: usize, window: (i64, i64)) -> Result<NuComplex> {
    let cert = certify(c, l, window);
    if cert.regime != Regime::Indefinite && !cert.hochschild {
        return Err(Error::TruncationTooSmall(format!(
            "length bound {l} does not reach the degree window [{}, {}] ({} regime)",
            window.0, window.1, cert.regime
        )));
    }
    build_nu_unchecked(c, l, window)
}

/// Like [`build_nu`] without the window test; the result carries the certificate as computed.
pub fn build_nu_unchecked(c: &AInfCategory, l: usize, window: (i64, i64)) -> Result<NuComplex> {
    let f = c.field();
    let cyc = cyclic_words(c, l);
    let n_check = cyc.len();
    let mut words: Vec<Word> = cyc.iter().cloned().map(Word::check).collect();
    words.extend(cyc.into_iter().map(Word::hat));
    let index: HashMap<Word, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let basis = words
        .iter()
        .map(|w| {
            let deg = if w.hat { hat_degree(c, &w.gens) } else { check_degree(c, &w.gens) };
            (word_label(c, w), deg)
        })
        .collect();
    let space = GradedSpace::new(c.grading(), basis)?;
    let cert = certify(c, l, window);

    let mut nu = NuComplex {
        category: c.clone(),
        length_bound: l,
        words,
        index,
        n_check,
        complex: TruncatedComplex::exact(f, space.clone(), SparseMap::zero(2 * n_check, 2 * n_check, 1))?,
        big_b: SparseMap::zero(2 * n_check, 2 * n_check, -1),
        certificate: cert.clone(),
    };

    let d = nu.map_words(1, |w| {
        if w.hat {
            let mut v = nu.terms_to_vec(b_prime_word(c, &w.gens), true);
            for (i, x) in nu.terms_to_vec(d_wedge_word(c, &w.gens), false) {
                add_entry(&f, &mut v, i, &x);
            }
            v
        } else {
            nu.terms_to_vec(b_word(c, &w.gens), false)
        }
    });
    d.check_degrees(&space, &space)?;
    let big_b = nu.map_words(-1, |w| {
        if w.hat {
            return SparseVec::new();
        }
        let terms = norm_word(c, &w.gens).into_iter().map(|(r, s)| {
            let e = s + s_sign(c, &r);
            (r, f.sign(e))
        });
        nu.terms_to_vec(terms.collect(), true)
    });
    big_b.check_degrees(&space, &space)?;

    let label = |i: usize| space.label(i).to_string();
    first_violation(&f, &d.compose(&f, &d), "(b^nu)² ≠ 0", label)?;
    first_violation(&f, &big_b.compose(&f, &big_b), "(B^nu)² ≠ 0", label)?;
    let anti = d.compose(&f, &big_b).add(&f, &big_b.compose(&f, &d));
    first_violation(&f, &anti, "b^nu B^nu + B^nu b^nu ≠ 0", label)?;

    let truncation = Truncation { length_bound: Some(l), window };
    let mut complex = TruncatedComplex::new(f, space, d, truncation)?;
    complex.certified = cert.hochschild;
    if !cert.hochschild {
        complex.note = Some(format!("uncertified: {} regime at length bound {l}", cert.regime));
    }
    nu.complex = complex;
    nu.big_b = big_b;
    Ok(nu)
}

/// The cyclic bar complex `(CH, b)` truncated at length `L`.
pub fn build_hochschild(c: &AInfCategory, l: usize, window: (i64, i64)) -> Result<TruncatedComplex> {
    build_nu(c, l, window)?.check_complex()
}

/// The reduced complex of a strictly unital category, in the basis of `CH^nu` of its
/// non-unit part through the bijection `f(e⊗w) = ŵ`, `f(w) = w̌`.
#[derive(Debug, Clone)]
pub struct ReducedModel {
    pub nu: NuComplex,
    /// Reduced differential transported along `f`.
    pub differential: SparseMap,
    /// `B^red = sN` transported along `f`.
    pub big_b: SparseMap,
}

/// Build the reduced model and check that `f` intertwines it with `(b^nu, B^nu)`.
pub fn reduced_b(c: &AInfCategory, l: usize, window: (i64, i64)) -> Result<ReducedModel> {
    let units = c.units().ok_or_else(|| Error::MissingUnit(c.objects().first().cloned().unwrap_or_default()))?.to_vec();
    let stripped = strip_units(c)?;
    let nu = build_nu_unchecked(&stripped, l, window)?;
    let f = c.field();
    // stripped index -> original index and back
    let to_orig: Vec<usize> = (0..c.generators().len()).filter(|g| !units.contains(g)).collect();
    let from_orig: HashMap<usize, usize> = to_orig.iter().enumerate().map(|(i, &g)| (g, i)).collect();

    let lift = |w: &Word| -> Vec<usize> {
        let mut v: Vec<usize> = w.gens.iter().map(|&g| to_orig[g]).collect();
        if w.hat {
            let x = c.gen(v[0]).target;
            v.insert(0, units[x]);
        }
        v
    };
    let project = |terms: Vec<(Vec<usize>, Scalar)>| -> SparseVec {
        let mut out = SparseVec::new();
        for (u, coeff) in terms {
            if u[1..].iter().any(|g| units.contains(g)) || (u.len() == 1 && units.contains(&u[0])) {
                continue;
            }
            let w = if units.contains(&u[0]) {
                Word::hat(u[1..].iter().map(|g| from_orig[g]).collect())
            } else {
                Word::check(u.iter().map(|g| from_orig[g]).collect())
            };
            let i = nu.index_of(&w).expect("reduced word within the truncation");
            add_entry(&f, &mut out, i, &coeff);
        }
        out
    };
    let cols: Vec<SparseVec> = nu.words().par_iter().map(|w| project(b_word(c, &lift(w)))).collect();
    let differential = SparseMap::from_columns(nu.dim(), 1, cols);
    let cols: Vec<SparseVec> = nu
        .words()
        .par_iter()
        .map(|w| {
            let u = lift(w);
            let mut terms = Vec::new();
            for (r, s) in norm_word(c, &u) {
                let e = units[c.gen(r[0]).target];
                let sign = s + s_sign(c, &r);
                let mut v = vec![e];
                v.extend_from_slice(&r);
                terms.push((v, f.sign(sign)));
            }
            project(terms)
        })
        .collect();
    let big_b = SparseMap::from_columns(nu.dim(), -1, cols);
    let label = |i: usize| nu.label(i).to_string();
    first_violation(&f, &differential.sub(&f, nu.b_nu()), "f does not intertwine the differentials", label)?;
    first_violation(&f, &big_b.sub(&f, nu.big_b()), "f B^red f⁻¹ ≠ B^nu", label)?;
    Ok(ReducedModel { nu, differential, big_b })
}

/// Bar-style pushforward of a written-order word: all splittings into functor blocks.
/// `min_first` bounds the length of the leftmost block from below; each term
/// also reports the length of its leftmost block.
fn bar_push(func: &AInfFunctor, w: &[usize], min_first: usize) -> Vec<(Vec<usize>, Scalar, usize)> {
    let f = func.source().field();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<usize>, Scalar, usize)> = vec![(0, Vec::new(), f.one(), 0)];
    while let Some((pos, acc, coeff, first)) = stack.pop() {
        if pos == w.len() {
            out.push((acc, coeff, first));
            continue;
        }
        let lo = if pos == 0 { min_first.max(1) } else { 1 };
        for end in (pos + lo)..=w.len() {
            if let Some(v) = func.term(&w[pos..end]) {
                let first = if pos == 0 { end } else { first };
                for (g, c) in v {
                    let mut a = acc.clone();
                    a.push(*g);
                    stack.push((end, a, f.mul(&coeff, c), first));
                }
            }
        }
    }
    out
}

/// `F♯^nu = (F♯, F♯′)` between truncated non-unital complexes.
#[derive(Debug, Clone)]
pub struct Pushforward {
    pub source: NuComplex,
    pub target: NuComplex,
    pub map: SparseMap,
}

/// Pushforward along an A∞ functor; checks that it commutes with `b^nu` and `B^nu`.
pub fn functor_pushforward(func: &AInfFunctor, l: usize, window: (i64, i64)) -> Result<Pushforward> {
    let src = build_nu_unchecked(func.source(), l, window)?;
    let tgt = build_nu_unchecked(func.target(), l, window)?;
    let c = func.source();
    let f = c.field();
    let cols: Vec<SparseVec> = src
        .words()
        .par_iter()
        .map(|w| {
            let mut out = SparseVec::new();
            let mut push = |word: Vec<usize>, hat: bool, coeff: Scalar| {
                let i = tgt.index_of(&Word { hat, gens: word }).expect("pushforward never lengthens words");
                add_entry(&f, &mut out, i, &coeff);
            };
            if w.hat {
                for (u, coeff, _) in bar_push(func, &w.gens, 1) {
                    push(u, true, coeff);
                }
            } else {
                // the leftmost block carries the old x_d together with the j wrapped letters
                let d = w.gens.len();
                let dg = Dagger::new(c, &w.gens);
                for j in 0..d {
                    let mut r = w.gens[d - j..].to_vec();
                    r.extend_from_slice(&w.gens[..d - j]);
                    for (u, coeff, first) in bar_push(func, &r, j + 1) {
                        let e = dg.sum(1, j) * dg.sum(j + 1, d) + dg.r(d) + c.rsum(&r[..first]);
                        push(u, false, f.mul(&f.sign(e), &coeff));
                    }
                }
            }
            out
        })
        .collect();
    let map = SparseMap::from_columns(tgt.dim(), 0, cols);
    map.check_degrees(src.space(), tgt.space())?;
    let chain = tgt.b_nu().compose(&f, &map).sub(&f, &map.compose(&f, src.b_nu()));
    if let Some((r, col, v)) = chain.first_nonzero() {
        return Err(Error::NotAChainMap(format!(
            "coefficient {} of {} in (b F♯ − F♯ b)({})",
            f.format(&v),
            tgt.label(r),
            src.label(col)
        )));
    }
    let comm = tgt.big_b().compose(&f, &map).sub(&f, &map.compose(&f, src.big_b()));
    if let Some((r, col, v)) = comm.first_nonzero() {
        return Err(Error::IdentityViolated(format!(
            "coefficient {} of {} in (B F♯ − F♯ B)({})",
            f.format(&v),
            tgt.label(r),
            src.label(col)
        )));
    }
    Ok(Pushforward { source: src, target: tgt, map })
}

/// Homology dimensions at two length bounds, with certification and stability.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct StableTable {
    pub length_bound: usize,
    pub window: (i64, i64),
    pub dims: BTreeMap<i64, usize>,
    pub dims_next: BTreeMap<i64, usize>,
    pub stable: bool,
    pub certified: bool,
    pub note: String,
}

impl StableTable {
    pub fn new(l: usize, window: (i64, i64), dims: BTreeMap<i64, usize>, dims_next: BTreeMap<i64, usize>, certified: bool) -> Self {
        let stable = dims == dims_next;
        let note = if certified {
            format!("certified at length bound {l}")
        } else if stable {
            format!("stable at ({l}, {})", l + 1)
        } else {
            format!("unstable between {l} and {}", l + 1)
        };
        StableTable { length_bound: l, window, dims, dims_next, stable, certified, note }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    /// The cyclic bar complex alone.
    Check,
    /// The full non-unital complex.
    Nu,
}

/// Hochschild homology on a window, computed at `L` and `L + 1`.
pub fn hh(c: &AInfCategory, l: usize, window: (i64, i64), sector: Sector) -> Result<StableTable> {
    let dims_at = |len: usize| -> Result<(BTreeMap<i64, usize>, bool)> {
        let nu = if len == l { build_nu(c, len, window)? } else { build_nu_unchecked(c, len, window)? };
        let cx = match sector {
            Sector::Check => nu.check_complex()?,
            Sector::Nu => nu.complex().clone(),
        };
        Ok((cx.betti(window)?, cx.certified))
    };
    let (dims, certified) = dims_at(l)?;
    let (dims_next, _) = dims_at(l + 1)?;
    Ok(StableTable::new(l, window, dims, dims_next, certified))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::fixtures::*;

    fn idx(c: &AInfCategory, labels: &[&str]) -> Vec<usize> {
        labels.iter().map(|l| c.index_of(l).unwrap()).collect()
    }

    #[test]
    fn length_one_differential_is_minus_mu1() {
        let c = crate::ainfty::CategoryBuilder::new()
            .object("X")
            .generator("a", 0, "X", "X")
            .generator("b", 1, "X", "X")
            .mu(&["a"], &[(1, "b")])
            .build(Field::Rational, Grading::Z)
            .unwrap();
        let t = b_word(&c, &idx(&c, &["a"]));
        assert_eq!(t, vec![(idx(&c, &["b"]), Field::Rational.from_i64(-1))]);
    }

    #[test]
    fn t_signs() {
        let q = Field::Rational;
        let c = exterior(q, 1);
        let e = idx(&c, &["eps"]);
        assert_eq!(t_word(&c, &e), (e.clone(), 0));
        let ee = idx(&c, &["eps", "eps"]);
        let (r, s) = t_word(&c, &ee);
        assert_eq!(r, ee);
        assert_eq!(s % 2, 0);
    }

    #[test]
    fn s_nu_on_eps_and_unit() {
        let c = exterior(Field::Rational, 1);
        assert_eq!(s_sign(&c, &idx(&c, &["eps"])).rem_euclid(2), 1);
        assert_eq!(s_sign(&c, &idx(&c, &["1"])).rem_euclid(2), 1);
    }

    #[test]
    fn norm_of_eps_squared() {
        for (f, want) in [(Field::Rational, 2i64), (Field::Prime(2), 0)] {
            let nu = build_nu_unchecked(&exterior(f, 1), 2, (-2, 2)).unwrap();
            let w = nu.index_of(&Word::check(idx(nu.category(), &["eps", "eps"]))).unwrap();
            let col = nu.operator_n().column(w).clone();
            assert_eq!(col.get(&w).cloned().unwrap_or_default(), f.from_i64(want));
        }
    }

    #[test]
    fn b_squared_vanishes_on_eps_cubed() {
        let c = exterior(Field::Rational, 1);
        let nu = build_nu_unchecked(&c, 3, (-3, 3)).unwrap();
        let w = nu.index_of(&Word::check(idx(&c, &["eps", "eps", "eps"]))).unwrap();
        let b = nu.b();
        let once = b.column(w).clone();
        assert!(b.apply(&c.field(), &once).is_empty());
    }

    #[test]
    fn identities_on_fixtures() {
        let q = Field::Rational;
        for c in [ground_field(q), exterior(q, 1), exterior_nonunital(q, 1), square_zero(q, 2), quiver(q), a_p(Field::Prime(2), 2).unwrap()] {
            build_nu_unchecked(&c, 4, (-4, 4)).unwrap();
        }
    }

    #[test]
    fn reduced_model_matches_nu() {
        let q = Field::Rational;
        for c in [exterior(q, 1), quiver(q), ground_field(q), a_p(Field::Prime(3), 3).unwrap()] {
            reduced_b(&c, 3, (-3, 3)).unwrap();
        }
    }

    #[test]
    fn ground_field_hh() {
        let t = hh(&ground_field(Field::Rational), 6, (-3, 0), Sector::Check).unwrap();
        assert_eq!(t.dims[&0], 1);
        assert!(t.certified);
        assert_eq!(t.dims.values().sum::<usize>(), 1);
    }

    #[test]
    fn square_zero_certified_window() {
        let c = square_zero(Field::Rational, 2);
        assert!(certify(&c, 7, (0, 6)).hochschild);
        assert!(matches!(build_nu(&c, 3, (0, 6)), Err(Error::TruncationTooSmall(_))));
        assert_eq!(regime(&exterior(Field::Rational, 1)), Regime::Indefinite);
    }

    #[test]
    fn length_graded_orbits_certificate() {
        let c = square_zero(Field::Rational, 2);
        assert!(length_graded(&c));
        assert!(certify(&c, 7, (0, 6)).orbits);
        assert!(!certify(&c, 4, (0, 6)).orbits);
        assert!(!certify(&square_zero(Field::Prime(2), 2), 7, (0, 6)).orbits);
        assert!(!length_graded(&exterior_nonunital(Field::Rational, 1)));
    }

    #[test]
    fn strict_functors_push_forward() {
        let q = Field::Rational;
        functor_pushforward(&AInfFunctor::identity(&quiver(q)), 3, (-3, 3)).unwrap();
        functor_pushforward(&quiver_rescale(q), 3, (-3, 3)).unwrap();
        functor_pushforward(&quiver_collapse(q), 3, (-3, 3)).unwrap();
    }

    #[test]
    fn higher_functor_terms_commute_with_circle_action() {
        let q = Field::Rational;
        let c = crate::ainfty::CategoryBuilder::new()
            .object("X")
            .generator("p", 2, "X", "X")
            .generator("r", 3, "X", "X")
            .generator("s", 4, "X", "X")
            .build(q, Grading::Z)
            .unwrap();
        let one = |g: usize| -> SparseVec { [(g, q.one())].into_iter().collect() };
        let terms = vec![
            (vec![0], one(0)),
            (vec![1], one(1)),
            (vec![2], one(2)),
            (vec![0, 0], one(1)),
            (vec![0, 1], [(2, q.from_i64(3))].into_iter().collect()),
            (vec![1, 0], one(2)),
            (vec![0, 0, 0], one(2)),
        ];
        let func = AInfFunctor::new(c.clone(), c, vec![0], terms).unwrap();
        assert!(crate::ainfty::functor::check_functor(&func).passed);
        functor_pushforward(&func, 4, (0, 8)).unwrap();
    }
}
