//! Homotopy orbits, fixed points and Tate complexes of an S¹-complex in the
//! u-linear model, the maps `pr` and `ι`, induced maps, and the Gysin and
//! norm long exact sequences.

use std::collections::HashMap;

use serde::Serialize;

use crate::complex::{check_chain_map, TruncatedComplex, Truncation};
use crate::error::{Error, Result};
use crate::graded::{GradedSpace, Grading};
use crate::linalg::{solve_inhomogeneous, Solution, Span};
use crate::report::Verdict;
use crate::s1mod::{S1Complex, S1Morphism};
use crate::sparse::{add_entry, SparseMap, SparseVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// `M((u))/uM[[u]]`, u-exponents `≤ 0`.
    Orbits,
    /// `M[[u]]`, u-exponents `≥ 0`.
    Fixed,
    /// `M((u))`, every exponent.
    Tate,
}

impl Flavor {
    pub fn allows(self, i: i64) -> bool {
        match self {
            Flavor::Orbits => i <= 0,
            Flavor::Fixed => i >= 0,
            Flavor::Tate => true,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "orbits" | "plus" => Ok(Flavor::Orbits),
            "fixed" | "minus" => Ok(Flavor::Fixed),
            "tate" | "periodic" | "infinity" => Ok(Flavor::Tate),
            _ => Err(Error::Input(format!("unknown flavor {s:?}"))),
        }
    }
}

impl std::fmt::Display for Flavor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Flavor::Orbits => "orbits",
            Flavor::Fixed => "fixed",
            Flavor::Tate => "tate",
        })
    }
}

/// `(M ⊗ u-powers, δ_eq = Σ δ_k u^k)` on degrees `a − 1 ..= b + 1`; homology exact on `[a, b]`.
#[derive(Debug, Clone)]
pub struct EquivariantComplex {
    pub flavor: Flavor,
    pub base: S1Complex,
    pub complex: TruncatedComplex,
    /// `(α, i)` for the basis vector `α·u^i`.
    cells: Vec<(usize, i64)>,
    index: HashMap<(usize, i64), usize>,
}

impl EquivariantComplex {
    pub fn cells(&self) -> &[(usize, i64)] {
        &self.cells
    }

    pub fn index_of(&self, alpha: usize, i: i64) -> Option<usize> {
        self.index.get(&(alpha, i)).copied()
    }

    pub fn window(&self) -> (i64, i64) {
        self.complex.truncation.window
    }

    /// Smallest and largest u-exponent present in degree `d`.
    pub fn u_window(&self, d: i64) -> Option<(i64, i64)> {
        let is = self.complex.space.in_degree(d).iter().map(|&j| self.cells[j].1);
        let v: Vec<i64> = is.collect();
        Some((*v.iter().min()?, *v.iter().max()?))
    }
}

fn built_range(window: (i64, i64)) -> Result<(i64, i64)> {
    if window.0 > window.1 {
        return Err(Error::Input(format!("empty window [{}, {}]", window.0, window.1)));
    }
    Ok((window.0 - 1, window.1 + 1))
}

pub fn equivariant(m: &S1Complex, flavor: Flavor, window: (i64, i64)) -> Result<EquivariantComplex> {
    let (lo, hi) = built_range(window)?;
    m.bounds()?;
    let f = m.field();
    let mut cells = Vec::new();
    let mut basis = Vec::new();
    for d in lo..=hi {
        for (a, b) in m.space().basis().iter().enumerate() {
            let diff = d - b.degree;
            if diff % 2 == 0 && flavor.allows(diff / 2) {
                cells.push((a, diff / 2));
                basis.push((format!("{}·u^{}", b.label, diff / 2), d));
            }
        }
    }
    let index: HashMap<_, _> = cells.iter().enumerate().map(|(j, c)| (*c, j)).collect();
    let cols = cells
        .iter()
        .map(|&(a, i)| {
            let mut col = SparseVec::new();
            for (k, delta) in m.deltas().iter().enumerate() {
                for (r, v) in delta.column(a) {
                    if let Some(&t) = index.get(&(*r, i + k as i64)) {
                        add_entry(&f, &mut col, t, v);
                    }
                }
            }
            col
        })
        .collect();
    let space = GradedSpace::new(Grading::Z, basis)?;
    let d = SparseMap::from_columns(cells.len(), 1, cols);
    let complex = TruncatedComplex::new(f, space, d, Truncation { length_bound: None, window })?;
    Ok(EquivariantComplex { flavor, base: m.clone(), complex, cells, index })
}

pub fn orbits(m: &S1Complex, window: (i64, i64)) -> Result<EquivariantComplex> {
    equivariant(m, Flavor::Orbits, window)
}

pub fn fixed(m: &S1Complex, window: (i64, i64)) -> Result<EquivariantComplex> {
    equivariant(m, Flavor::Fixed, window)
}

pub fn tate(m: &S1Complex, window: (i64, i64)) -> Result<EquivariantComplex> {
    equivariant(m, Flavor::Tate, window)
}

/// `(M, δ_0)` restricted to degrees `a − 1 ..= b + 1`, and the kept basis indices.
pub fn restricted_base(m: &S1Complex, window: (i64, i64)) -> Result<(TruncatedComplex, Vec<usize>)> {
    let (lo, hi) = built_range(window)?;
    m.bounds()?;
    let keep: Vec<usize> = (0..m.dim()).filter(|&i| (lo..=hi).contains(&m.space().degree(i))).collect();
    let basis = keep.iter().map(|&i| (m.space().label(i).to_string(), m.space().degree(i))).collect();
    let d = m.delta(0).submatrix(&keep, &keep).with_degree(1);
    let space = GradedSpace::new(Grading::Z, basis)?;
    let complex = TruncatedComplex::new(m.field(), space, d, Truncation { length_bound: None, window })?;
    Ok((complex, keep))
}

/// A map between finite complexes, with its degree carried by `map`.
#[derive(Debug, Clone)]
pub struct ChainMap {
    pub source: TruncatedComplex,
    pub target: TruncatedComplex,
    pub map: SparseMap,
}

impl ChainMap {
    pub fn check(&self) -> Result<()> {
        check_chain_map(&self.map, &self.source, &self.target)
    }
}

/// `pr: M → M_{hS¹}`, `α ↦ α·u^0`.
pub fn pr_map(m: &S1Complex, window: (i64, i64)) -> Result<ChainMap> {
    let (base, keep) = restricted_base(m, window)?;
    let orb = orbits(m, window)?;
    let cols = keep.iter().map(|&a| orb.index_of(a, 0).map(|t| (t, m.field().one())).into_iter().collect()).collect();
    let map = SparseMap::from_columns(orb.cells.len(), 0, cols);
    Ok(ChainMap { source: base, target: orb.complex, map })
}

/// `ι: M^{hS¹} → M`, `Σ α_i u^i ↦ α_0`.
pub fn iota_map(m: &S1Complex, window: (i64, i64)) -> Result<ChainMap> {
    let (base, keep) = restricted_base(m, window)?;
    let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(p, &a)| (a, p)).collect();
    let fx = fixed(m, window)?;
    let cols = fx
        .cells
        .iter()
        .map(|&(a, i)| if i == 0 { pos.get(&a).map(|&p| (p, m.field().one())).into_iter().collect() } else { SparseVec::new() })
        .collect();
    let map = SparseMap::from_columns(keep.len(), 0, cols);
    Ok(ChainMap { source: fx.complex, target: base, map })
}

/// `α·u^i ↦ Σ_j F^j(α)·u^{i+j}`, from the flavor complex of the source on `window` to
/// that of the target on `window` shifted by `deg F`.
pub fn induced_map(fm: &S1Morphism, flavor: Flavor, window: (i64, i64)) -> Result<ChainMap> {
    let k = fm.degree();
    let src = equivariant(fm.source(), flavor, window)?;
    let tgt = equivariant(fm.target(), flavor, (window.0 + k, window.1 + k))?;
    let field = fm.source().field();
    let cols = src
        .cells
        .iter()
        .map(|&(a, i)| {
            let mut col = SparseVec::new();
            for (j, t) in fm.terms().iter().enumerate() {
                for (r, v) in t.column(a) {
                    if let Some(p) = tgt.index_of(*r, i + j as i64) {
                        add_entry(&field, &mut col, p, v);
                    }
                }
            }
            col
        })
        .collect();
    let map = SparseMap::from_columns(tgt.cells.len(), k, cols);
    Ok(ChainMap { source: src.complex, target: tgt.complex, map })
}

/// `α·u^i ↦ α·u^{i+1}` into `target`, dropping exponents it does not contain; degree 2.
fn u_shift(src: &EquivariantComplex, target: &EquivariantComplex, keep: impl Fn(i64) -> bool) -> SparseMap {
    let one = src.base.field().one();
    let cols = src
        .cells
        .iter()
        .map(|&(a, i)| {
            if !keep(i) {
                return SparseVec::new();
            }
            target.index_of(a, i + 1).map(|p| (p, one.clone())).into_iter().collect()
        })
        .collect();
    SparseMap::from_columns(target.cells.len(), 2, cols)
}

/// One position of a long exact sequence `… → H^d(A) → H^d(B) → H^{d+2}(C) → H^{d+1}(A) → …`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Slot {
    pub object: String,
    pub degree: i64,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub sequence: String,
    pub window: (i64, i64),
    pub slots: Vec<Slot>,
}

impl ExactnessReport {
    /// No tested slot failed.
    pub fn passed(&self) -> bool {
        self.slots.iter().all(|s| s.verdict != Verdict::Fail)
    }

    pub fn tested(&self) -> usize {
        self.slots.iter().filter(|s| s.verdict != Verdict::Untested).count()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Pos {
    A,
    B,
    C,
}

/// A short exact sequence `0 → A →f B →g C → 0` with `deg f = 0`, `deg g = 2`.
struct Ses<'a> {
    a: &'a TruncatedComplex,
    b: &'a TruncatedComplex,
    c: &'a TruncatedComplex,
    f: &'a SparseMap,
    g: &'a SparseMap,
    names: [&'a str; 3],
}

impl Ses<'_> {
    fn cx(&self, p: Pos) -> &TruncatedComplex {
        match p {
            Pos::A => self.a,
            Pos::B => self.b,
            Pos::C => self.c,
        }
    }

    /// Chain-level representative of the map out of slot `(p, d)`.
    fn out(&self, p: Pos, d: i64, v: &SparseVec) -> Result<SparseVec> {
        let field = self.a.field;
        match p {
            Pos::A => Ok(self.f.apply(&field, v)),
            Pos::B => Ok(self.g.apply(&field, v)),
            Pos::C => {
                // lift along g, apply d_B, pull back along f
                let rows_c = self.c.space.in_degree(d);
                let cols_b = self.b.space.in_degree(d - 2);
                let gb = self.g.submatrix(rows_c, cols_b);
                let local = |idx: &[usize], v: &SparseVec| -> SparseVec {
                    let pos: HashMap<usize, usize> = idx.iter().enumerate().map(|(p, &i)| (i, p)).collect();
                    v.iter().map(|(i, x)| (pos[i], x.clone())).collect()
                };
                let Solution::Solved(x) = solve_inhomogeneous(&field, &gb, &local(rows_c, v))? else {
                    return Err(Error::IdentityViolated("g is not surjective in the short exact sequence".into()));
                };
                let lift: SparseVec = x.into_iter().map(|(p, c)| (cols_b[p], c)).collect();
                let db = self.b.differential.apply(&field, &lift);
                let rows_b = self.b.space.in_degree(d - 1);
                let cols_a = self.a.space.in_degree(d - 1);
                let fa = self.f.submatrix(rows_b, cols_a);
                let Solution::Solved(y) = solve_inhomogeneous(&field, &fa, &local(rows_b, &db))? else {
                    return Err(Error::IdentityViolated("ker g ≠ im f in the short exact sequence".into()));
                };
                Ok(y.into_iter().map(|(p, c)| (cols_a[p], c)).collect())
            }
        }
    }

    fn next(p: Pos, d: i64) -> (Pos, i64) {
        match p {
            Pos::A => (Pos::B, d),
            Pos::B => (Pos::C, d + 2),
            Pos::C => (Pos::A, d - 1),
        }
    }

    fn prev(p: Pos, d: i64) -> (Pos, i64) {
        match p {
            Pos::A => (Pos::C, d + 1),
            Pos::B => (Pos::A, d),
            Pos::C => (Pos::B, d - 2),
        }
    }

    /// Dimension of the span of `vs` in `H^d` of the slot complex.
    fn class_rank(&self, p: Pos, d: i64, vs: &[SparseVec]) -> usize {
        let mut span: Span = self.cx(p).boundaries_at(d);
        vs.iter().filter(|v| span.insert(v).is_some()).count()
    }

    fn report(&self, sequence: &str, window: (i64, i64)) -> Result<ExactnessReport> {
        let (a, b) = window;
        let inside = |d: i64| (a..=b).contains(&d);
        let mut slots = Vec::new();
        for d in a..=b {
            for (p, deg) in [(Pos::A, d), (Pos::B, d), (Pos::C, d + 2)] {
                let (pp, dp) = Self::prev(p, deg);
                let (pn, dn) = Self::next(p, deg);
                let name = self.names[p as usize].to_string();
                if !(inside(deg) && inside(dp) && inside(dn)) {
                    let dim = if inside(deg) { self.cx(p).homology_at(deg).dim } else { 0 };
                    slots.push(Slot { object: name, degree: deg, dim, rank_in: 0, rank_out: 0, verdict: Verdict::Untested });
                    continue;
                }
                let here = self.cx(p).homology_at(deg);
                let before = self.cx(pp).homology_at(dp);
                let incoming: Vec<SparseVec> = before.reps.iter().map(|r| self.out(pp, dp, r)).collect::<Result<_>>()?;
                let outgoing: Vec<SparseVec> = here.reps.iter().map(|r| self.out(p, deg, r)).collect::<Result<_>>()?;
                let composite: Vec<SparseVec> = incoming.iter().map(|v| self.out(p, deg, v)).collect::<Result<_>>()?;
                let rank_in = self.class_rank(p, deg, &incoming);
                let rank_out = self.class_rank(pn, dn, &outgoing);
                let zero = self.class_rank(pn, dn, &composite) == 0;
                let ok = zero && rank_in + rank_out == here.dim;
                slots.push(Slot { object: name, degree: deg, dim: here.dim, rank_in, rank_out, verdict: Verdict::from_bool(ok) });
            }
        }
        Ok(ExactnessReport { sequence: sequence.into(), window, slots })
    }
}

/// `0 → M →pr M_{hS¹} →u M_{hS¹}[2] → 0` and its long exact sequence.
pub fn gysin_les(m: &S1Complex, window: (i64, i64)) -> Result<ExactnessReport> {
    let (lo, hi) = built_range(window)?;
    let (base, keep) = restricted_base(m, window)?;
    let orb = orbits(m, window)?;
    let pr = pr_map(m, window)?;
    debug_assert_eq!(keep.len(), base.space.dim());
    let u = u_shift(&orb, &orb, |i| i < 0);
    pr.check()?;
    check_chain_map(&u, &orb.complex, &orb.complex)?;
    let ses = Ses { a: &base, b: &orb.complex, c: &orb.complex, f: &pr.map, g: &u, names: ["M", "orbits", "orbits[2]"] };
    check_short_exact_between(&ses, lo, hi - 2)?;
    ses.report("gysin", window)
}

/// `0 → M^{hS¹} → M^{Tate} → M_{hS¹}[2] → 0` and its long exact sequence.
pub fn norm_les(m: &S1Complex, window: (i64, i64)) -> Result<ExactnessReport> {
    let (lo, hi) = built_range(window)?;
    let fx = fixed(m, window)?;
    let tt = tate(m, window)?;
    let orb = orbits(m, window)?;
    let field = m.field();
    let cols = fx.cells.iter().map(|&(a, i)| [(tt.index_of(a, i).expect("fixed ⊂ tate"), field.one())].into_iter().collect()).collect();
    let inc = SparseMap::from_columns(tt.cells.len(), 0, cols);
    let g = u_shift(&tt, &orb, |i| i < 0);
    check_chain_map(&inc, &fx.complex, &tt.complex)?;
    check_chain_map(&g, &tt.complex, &orb.complex)?;
    let ses = Ses { a: &fx.complex, b: &tt.complex, c: &orb.complex, f: &inc, g: &g, names: ["fixed", "tate", "orbits[2]"] };
    check_short_exact_between(&ses, lo, hi - 2)?;
    ses.report("norm", window)
}

/// Checks `g∘f = 0`, injectivity of `f`, surjectivity of `g` and exactness in the middle, degreewise.
fn check_short_exact_between(s: &Ses, lo: i64, hi: i64) -> Result<()> {
    let field = s.a.field;
    if !s.g.compose(&field, s.f).is_zero() {
        return Err(Error::IdentityViolated("g∘f ≠ 0".into()));
    }
    for d in lo..=hi {
        let fa = s.f.submatrix(s.b.space.in_degree(d), s.a.space.in_degree(d));
        let gb = s.g.submatrix(s.c.space.in_degree(d + 2), s.b.space.in_degree(d));
        let rf = crate::linalg::rank(&field, &fa);
        let rg = crate::linalg::rank(&field, &gb);
        let (na, nb, nc) = (s.a.space.dim_in_degree(d), s.b.space.dim_in_degree(d), s.c.space.dim_in_degree(d + 2));
        if rf != na || rg != nc || rf + rg != nb {
            return Err(Error::IdentityViolated(format!("sequence is not short exact in degree {d}")));
        }
    }
    Ok(())
}
