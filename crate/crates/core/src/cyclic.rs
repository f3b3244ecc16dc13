//! Positive, negative and periodic cyclic homology, and the u-filtration
//! spectral sequence from Hochschild homology to homotopy orbits.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::ainfty::{strip_units, AInfCategory};
use crate::equivariant::{equivariant, orbits, EquivariantComplex, Flavor};
use crate::error::{Error, Result};
use crate::graded::GradedSpace;
use crate::hochschild::{build_nu_unchecked, reduced_b, NuComplex, Regime, StableTable};
use crate::linalg::{Reduction, Span};
use crate::s1mod::S1Complex;
use crate::sparse::{SparseMap, SparseVec};

/// Which chain model of the cyclic complex to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// `(CH^nu, b^nu, B^nu)` of the category itself.
    Nu,
    /// For strictly unital categories whose products have no unit components: one unit
    /// word per object with trivial action, plus `CH^nu` of the non-unit part.
    Reduced,
}

impl Model {
    /// `Reduced` when the category admits it, `Nu` otherwise.
    pub fn auto(c: &AInfCategory) -> Model {
        if c.units().is_some() && strip_units(c).is_ok() {
            Model::Reduced
        } else {
            Model::Nu
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "nu" => Ok(Model::Nu),
            "reduced" => Ok(Model::Reduced),
            _ => Err(Error::Input(format!("unknown model {s:?}"))),
        }
    }
}

/// `(C, b + uB)` in one flavor, on a degree window.
#[derive(Debug, Clone)]
pub struct CyclicComplexSlice {
    pub model: Model,
    /// The non-unital complex the slice is built from; for `Reduced`, that of the non-unit part.
    pub nu: NuComplex,
    pub s1: S1Complex,
    pub equivariant: EquivariantComplex,
    pub certified: bool,
}

/// `(CH^nu, δ_0 = b^nu, δ_1 = B^nu)`.
pub fn nu_s1_complex(nu: &NuComplex) -> Result<S1Complex> {
    S1Complex::new(nu.field(), nu.space().clone(), vec![nu.b_nu().clone(), nu.big_b().clone()])
}

/// The unit words `e_X` in degree 0, followed by `CH^nu` of the non-unit part.
fn reduced_s1_complex(c: &AInfCategory, nu: &NuComplex) -> Result<S1Complex> {
    let units = c.units().ok_or_else(|| Error::MissingUnit(c.objects().first().cloned().unwrap_or_default()))?;
    let k = units.len();
    let mut basis: Vec<(String, i64)> = units.iter().map(|&e| (format!("C:{}", c.label(e)), 0)).collect();
    basis.extend(nu.space().basis().iter().map(|b| (b.label.clone(), b.degree)));
    let shift = |m: &SparseMap| {
        let mut cols = vec![SparseVec::new(); k];
        cols.extend(m.columns().iter().map(|v| v.iter().map(|(i, x)| (i + k, x.clone())).collect()));
        SparseMap::from_columns(k + m.target_dim(), m.degree(), cols)
    };
    let space = GradedSpace::new(c.grading(), basis)?;
    S1Complex::new(c.field(), space, vec![shift(nu.b_nu()), shift(nu.big_b())])
}

fn flavor_certified(nu: &NuComplex, flavor: Flavor) -> bool {
    let c = nu.certificate();
    match flavor {
        Flavor::Orbits => c.orbits,
        Flavor::Fixed => c.fixed,
        Flavor::Tate => c.orbits && c.fixed,
    }
}

/// Whether a larger length bound would certify the flavor on the window.
fn attainable(regime: Regime, flavor: Flavor) -> bool {
    matches!((regime, flavor), (Regime::Positive, Flavor::Fixed) | (Regime::Negative, Flavor::Orbits))
}

fn model_s1(c: &AInfCategory, model: Model, l: usize, window: (i64, i64)) -> Result<(NuComplex, S1Complex)> {
    match model {
        Model::Nu => {
            let nu = build_nu_unchecked(c, l, window)?;
            let s1 = nu_s1_complex(&nu)?;
            Ok((nu, s1))
        }
        Model::Reduced => {
            let nu = reduced_b(c, l, window)?.nu;
            let s1 = reduced_s1_complex(c, &nu)?;
            Ok((nu, s1))
        }
    }
}

pub fn hc_slice(c: &AInfCategory, flavor: Flavor, model: Model, l: usize, window: (i64, i64)) -> Result<CyclicComplexSlice> {
    let (nu, s1) = model_s1(c, model, l, window)?;
    let certified = flavor_certified(&nu, flavor);
    let regime = nu.certificate().regime;
    if !certified && attainable(regime, flavor) {
        return Err(Error::TruncationTooSmall(format!(
            "length bound {l} does not reach the {flavor} window [{}, {}] ({regime} regime)",
            window.0, window.1
        )));
    }
    let mut eq = equivariant(&s1, flavor, window)?;
    eq.complex.certified = certified;
    if !certified {
        eq.complex.note = Some(format!("uncertified: {regime} regime at length bound {l}"));
    }
    Ok(CyclicComplexSlice { model, nu, s1, equivariant: eq, certified })
}

/// Cyclic homology dimensions of one flavor at `L` and `L + 1`.
pub fn hc(c: &AInfCategory, flavor: Flavor, model: Model, l: usize, window: (i64, i64)) -> Result<StableTable> {
    let s = hc_slice(c, flavor, model, l, window)?;
    let dims = s.equivariant.complex.betti(window)?;
    let (_, next) = model_s1(c, model, l + 1, window)?;
    let next = equivariant(&next, flavor, window)?;
    Ok(StableTable::new(l, window, dims, next.complex.betti(window)?, s.certified))
}

/// One entry `E_r^{p,d}`; `p` is minus the u-exponent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PageEntry {
    pub p: i64,
    pub degree: i64,
    pub dim: usize,
}

/// `d_r: E_r^{p,d} → E_r^{p−r,d+1}` in the chosen bases of the two entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PageDifferential {
    pub from: (i64, i64),
    pub to: (i64, i64),
    pub rank: usize,
    #[serde(skip)]
    pub map: SparseMap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralPage {
    pub r: usize,
    pub entries: Vec<PageEntry>,
    /// Differentials with both ends in the window and both entries nonzero.
    pub differentials: Vec<PageDifferential>,
}

impl SpectralPage {
    pub fn dim(&self, p: i64, d: i64) -> usize {
        self.entries.iter().find(|e| e.p == p && e.degree == d).map_or(0, |e| e.dim)
    }

    pub fn first_nonzero(&self) -> Option<&PageDifferential> {
        self.differentials.iter().find(|d| d.rank > 0)
    }
}

struct Entry {
    denom: Span,
    reps: Vec<SparseVec>,
    coords: Reduction,
}

/// Filtered-complex page formulas on the orbit complex:
/// `E_r^p = Z_r^p / (Z_{r−1}^{p−1} + d Z_{r−1}^{p+r−1})`, `Z_r^p = {x ∈ F_p : dx ∈ F_{p−r}}`.
struct Filtered {
    orb: EquivariantComplex,
    z: HashMap<(usize, i64, i64), Vec<SparseVec>>,
}

impl Filtered {
    fn filt(&self, cell: usize) -> i64 {
        -self.orb.cells()[cell].1
    }

    fn max_p(&self, d: i64) -> Option<i64> {
        self.orb.u_window(d).map(|(lo, _)| -lo)
    }

    fn z(&mut self, r: usize, p: i64, d: i64) -> Vec<SparseVec> {
        if let Some(v) = self.z.get(&(r, p, d)) {
            return v.clone();
        }
        let f = self.orb.complex.field;
        let cols: Vec<usize> = self.orb.complex.space.in_degree(d).iter().copied().filter(|&j| self.filt(j) <= p).collect();
        let diff = &self.orb.complex.differential;
        let floor = p - r as i64;
        let projected = cols
            .iter()
            .map(|&j| diff.column(j).iter().filter(|(i, _)| self.filt(**i) > floor).map(|(i, v)| (*i, v.clone())).collect())
            .collect();
        let m = SparseMap::from_columns(diff.target_dim(), 1, projected);
        let red = Reduction::new(&f, &m, true);
        let out: Vec<SparseVec> = red.kernel().iter().map(|k| k.iter().map(|(i, v)| (cols[*i], v.clone())).collect()).collect();
        self.z.insert((r, p, d), out.clone());
        out
    }

    fn entry(&mut self, r: usize, p: i64, d: i64) -> Entry {
        let f = self.orb.complex.field;
        let mut denom = Span::new(&f);
        if p >= 1 {
            for v in self.z(r - 1, p - 1, d) {
                denom.insert(&v);
            }
        }
        let diff = self.orb.complex.differential.clone();
        for v in self.z(r - 1, p + r as i64 - 1, d - 1) {
            denom.insert(&diff.apply(&f, &v));
        }
        let mut all = denom.clone();
        let mut reps = Vec::new();
        let mut reduced = Vec::new();
        for v in self.z(r, p, d) {
            if all.insert(&v).is_some() {
                reduced.push(denom.reduce(&v));
                reps.push(v);
            }
        }
        let coords = Reduction::new(&f, &SparseMap::from_columns(self.orb.complex.space.dim(), 0, reduced), true);
        Entry { denom, reps, coords }
    }
}

fn default_r_max(m: &S1Complex, window: (i64, i64)) -> Result<usize> {
    let amp = m.bounds()?.map_or(0, |(lo, hi)| hi - lo);
    Ok((((window.1 - window.0) / 2 + 1).max((amp + 1) / 2 + 1)).max(1) as usize)
}

/// Pages `E_1 … E_{r_max + 1}` of the u-filtration on `orbits(M)`, exact on the window.
///
/// `r_max = None` uses the larger of `span/2 + 1` and the bound past which `d_r` has no
/// room in the degrees of `M`.
pub fn nchdr_pages(m: &S1Complex, r_max: Option<usize>, window: (i64, i64)) -> Result<Vec<SpectralPage>> {
    let r_max = match r_max {
        Some(r) => r.max(1),
        None => default_r_max(m, window)?,
    };
    let f = m.field();
    let mut fc = Filtered { orb: orbits(m, window)?, z: HashMap::new() };
    let base = m.underlying()?;
    let (a, b) = window;
    let mut pages = Vec::new();
    for r in 1..=r_max + 1 {
        let mut entries = Vec::new();
        let mut bases = BTreeMap::new();
        for d in a..=b {
            let Some(top) = fc.max_p(d) else { continue };
            for p in 0..=top {
                let e = fc.entry(r, p, d);
                if r == 1 {
                    let want = base.homology_at(d + 2 * p).dim;
                    if e.reps.len() != want {
                        return Err(Error::IdentityViolated(format!(
                            "E_1 at (p = {p}, degree {d}) has dimension {} but H^{}(M) has dimension {want}",
                            e.reps.len(),
                            d + 2 * p
                        )));
                    }
                }
                entries.push(PageEntry { p, degree: d, dim: e.reps.len() });
                bases.insert((p, d), e);
            }
        }
        let mut differentials = Vec::new();
        let ri = r as i64;
        for (&(p, d), src) in &bases {
            let Some(tgt) = bases.get(&(p - ri, d + 1)) else { continue };
            if src.reps.is_empty() || tgt.reps.is_empty() {
                continue;
            }
            let mut cols = Vec::new();
            for x in &src.reps {
                let y = tgt.denom.reduce(&fc.orb.complex.differential.apply(&f, x));
                let c = tgt.coords.solve(&y).map_err(|_| {
                    Error::IdentityViolated(format!("d_{r} from (p = {p}, degree {d}) leaves Z_{r}"))
                })?;
                cols.push(c);
            }
            let map = SparseMap::from_columns(tgt.reps.len(), 1, cols);
            let rank = crate::linalg::rank(&f, &map);
            differentials.push(PageDifferential { from: (p, d), to: (p - ri, d + 1), rank, map });
        }
        pages.push(SpectralPage { r, entries, differentials });
    }
    check_pages(&pages, window)?;
    Ok(pages)
}

/// `E_{r+1} = H(E_r, d_r)` on entries whose incoming and outgoing differentials stay in the window.
fn check_pages(pages: &[SpectralPage], window: (i64, i64)) -> Result<()> {
    for w in pages.windows(2) {
        let (cur, next) = (&w[0], &w[1]);
        let r = cur.r as i64;
        for e in &cur.entries {
            if e.degree <= window.0 || e.degree >= window.1 {
                continue;
            }
            let rank = |from: (i64, i64)| cur.differentials.iter().find(|x| x.from == from).map_or(0, |x| x.rank);
            let expect = e.dim - rank((e.p, e.degree)) - rank((e.p + r, e.degree - 1));
            let got = next.dim(e.p, e.degree);
            if got != expect {
                return Err(Error::IdentityViolated(format!(
                    "E_{} at (p = {}, degree {}) has dimension {got}, homology of E_{} has {expect}",
                    cur.r + 1,
                    e.p,
                    e.degree,
                    cur.r
                )));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Degeneration {
    Degenerate,
    NotDegenerate,
}

impl std::fmt::Display for Degeneration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Degeneration::Degenerate => "DEGENERATE",
            Degeneration::NotDegenerate => "NOT DEGENERATE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegenerationReport {
    pub verdict: Degeneration,
    pub window: (i64, i64),
    pub orbit_dims: BTreeMap<i64, usize>,
    /// `Σ_{i≥0} dim H^{d+2i}(M)`.
    pub expected_dims: BTreeMap<i64, usize>,
    pub first_failing_degree: Option<i64>,
    /// First page carrying a nonzero differential inside the window.
    pub first_nonzero_page: Option<usize>,
    pub witness: Option<PageDifferential>,
    /// Whether `E_1 = E_∞` on the window, read off the pages.
    pub pages_degenerate: bool,
    pub pages: Vec<SpectralPage>,
}

impl DegenerationReport {
    /// The dimension count and the pages give the same answer.
    pub fn criteria_agree(&self) -> bool {
        (self.verdict == Degeneration::Degenerate) == self.pages_degenerate
    }
}

pub fn degeneration_check(m: &S1Complex, window: (i64, i64)) -> Result<DegenerationReport> {
    let orb = orbits(m, window)?;
    let orbit_dims = orb.complex.betti(window)?;
    let base = m.underlying()?;
    let top = m.bounds()?.map_or(0, |(_, hi)| hi);
    let expected_dims: BTreeMap<i64, usize> = (window.0..=window.1)
        .map(|d| (d, (0..).map(|i| d + 2 * i).take_while(|&e| e <= top).map(|e| base.homology_at(e).dim).sum()))
        .collect();
    let first_failing_degree = (window.0..=window.1).find(|d| orbit_dims.get(d) != expected_dims.get(d));
    let pages = nchdr_pages(m, None, window)?;
    let (first, last) = (&pages[0], &pages[pages.len() - 1]);
    let pages_degenerate = first.entries.iter().all(|e| last.dim(e.p, e.degree) == e.dim);
    let hit = pages.iter().find_map(|pg| pg.first_nonzero().map(|d| (pg.r, d.clone())));
    let verdict = if first_failing_degree.is_none() { Degeneration::Degenerate } else { Degeneration::NotDegenerate };
    Ok(DegenerationReport {
        verdict,
        window,
        orbit_dims,
        expected_dims,
        first_failing_degree,
        first_nonzero_page: hit.as_ref().map(|h| h.0),
        witness: hit.map(|h| h.1),
        pages_degenerate,
        pages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::fixtures::*;
    use crate::complex::TruncatedComplex;
    use crate::field::Field;
    use crate::graded::{GradedSpace, Grading};
    use crate::s1mod::fixtures::*;
    use crate::s1mod::trivialize;

    #[test]
    fn trivial_ground_pages() {
        let pages = nchdr_pages(&ground(Field::Rational), None, (-8, 0)).unwrap();
        for pg in &pages {
            assert!(pg.differentials.iter().all(|d| d.rank == 0));
            for d in (-8..=0).step_by(2) {
                assert_eq!(pg.dim(-d / 2, d), 1);
            }
        }
        assert_eq!(pages[0].entries.iter().map(|e| e.dim).sum::<usize>(), 5);
    }

    #[test]
    fn free_module_has_nonzero_d1() {
        for f in [Field::Rational, Field::Prime(2)] {
            let pages = nchdr_pages(&xy(f), None, (-6, 0)).unwrap();
            let d1 = pages[0].differentials.iter().find(|d| d.from == (1, -2)).unwrap();
            assert_eq!(d1.to, (0, -1));
            assert_eq!(d1.map.get(0, 0), f.one());
            assert_eq!(pages[1].dim(1, -2), 0);
            assert_eq!(pages[1].dim(0, -1), 0);
            assert_eq!(pages[1].dim(0, 0), 1);
        }
    }

    #[test]
    fn degeneration_dichotomy() {
        let f = Field::Rational;
        let space = GradedSpace::new(Grading::Z, vec![("a".into(), 0), ("b".into(), 1), ("c".into(), -2)]).unwrap();
        let c = TruncatedComplex::exact(f, space, SparseMap::from_triplets(&f, 3, 3, 1, [(1, 0, f.one())]).unwrap()).unwrap();
        let t = degeneration_check(&trivialize(&c), (-6, 2)).unwrap();
        assert_eq!(t.verdict, Degeneration::Degenerate);
        assert!(t.criteria_agree());
        assert!(t.witness.is_none());
        let x = degeneration_check(&xy(f), (-6, 2)).unwrap();
        assert_eq!(x.verdict, Degeneration::NotDegenerate);
        assert_eq!(x.first_nonzero_page, Some(1));
        assert!(x.criteria_agree());
        assert_eq!(x.first_failing_degree, Some(-6));
    }

    #[test]
    fn convergence_bookkeeping() {
        let f = Field::Rational;
        for m in [ground(f), xy(f), exterior_module(f), zero(f)] {
            let w = (-5, 3);
            let pages = nchdr_pages(&m, None, w).unwrap();
            let h = orbits(&m, w).unwrap().complex.betti(w).unwrap();
            let last = pages.last().unwrap();
            for d in w.0..=w.1 {
                let s: usize = last.entries.iter().filter(|e| e.degree == d).map(|e| e.dim).sum();
                assert_eq!(s, h[&d]);
            }
            for pair in pages.windows(2) {
                for e in &pair[0].entries {
                    assert!(pair[1].dim(e.p, e.degree) <= e.dim);
                }
            }
        }
    }

    #[test]
    fn ground_field_hc() {
        let f = Field::Rational;
        let c = ground_field(f);
        let w = (-8, 0);
        assert!(matches!(hc(&c, Flavor::Orbits, Model::Nu, 6, w), Err(Error::TruncationTooSmall(_))));
        let plus = hc(&c, Flavor::Orbits, Model::Nu, 10, w).unwrap();
        assert!(plus.certified);
        let hh = crate::hochschild::hh(&c, 10, (-8, 10), crate::hochschild::Sector::Nu).unwrap();
        for d in w.0..=w.1 {
            let want: usize = (0..).map(|i| d + 2 * i).take_while(|&e| e <= 10).map(|e| hh.dims[&e]).sum();
            assert_eq!(plus.dims[&d], want, "degree {d}");
        }
        let s = hc_slice(&c, Flavor::Orbits, Model::Nu, 10, w).unwrap();
        let deg = degeneration_check(&s.s1, w).unwrap();
        assert_eq!(deg.verdict, Degeneration::Degenerate);
        assert!(deg.criteria_agree());
    }

    #[test]
    fn negative_tower_on_ground_field() {
        let f = Field::Rational;
        let t = hc(&ground_field(f), Flavor::Fixed, Model::Reduced, 2, (0, 10)).unwrap();
        assert!(t.certified);
        for d in 0..=10 {
            assert_eq!(t.dims[&d], usize::from(d % 2 == 0), "degree {d}");
        }
    }

    #[test]
    fn square_zero_stabilizes() {
        let f = Field::Rational;
        let c = square_zero(f, 2);
        let t = hc(&c, Flavor::Fixed, Model::Nu, 6, (0, 6)).unwrap();
        assert!(t.stable);
        assert!(matches!(hc(&c, Flavor::Fixed, Model::Nu, 1, (0, 6)), Err(Error::TruncationTooSmall(_))));
        let p = hc(&c, Flavor::Orbits, Model::Nu, 7, (0, 6)).unwrap();
        assert!(p.certified && p.stable);
        for d in 0..=6 {
            assert_eq!(p.dims[&d], usize::from(d > 0 && d % 2 == 0), "degree {d}");
        }
        let p = hc(&square_zero(Field::Prime(2), 2), Flavor::Orbits, Model::Nu, 7, (0, 6)).unwrap();
        assert!(!p.certified);
        assert!(p.note.starts_with("stable") || p.note.starts_with("unstable"));
    }

    #[test]
    fn nu_truncation_loses_the_negative_tower() {
        let f = Field::Rational;
        let t = hc(&ground_field(f), Flavor::Fixed, Model::Nu, 8, (0, 4)).unwrap();
        assert!(!t.certified);
        assert_eq!(t.dims[&0], 0);
    }

    #[test]
    fn reduced_and_nu_orbits_agree() {
        let f = Field::Rational;
        let w = (-6, 0);
        let nu = hc(&ground_field(f), Flavor::Orbits, Model::Nu, 8, w).unwrap();
        let red = hc(&ground_field(f), Flavor::Orbits, Model::Reduced, 8, w).unwrap();
        assert_eq!(nu.dims, red.dims);
        assert_eq!(Model::auto(&square_zero(f, 2)), Model::Nu);
        let c = crate::ainfty::CategoryBuilder::new()
            .object("X")
            .generator("e", 0, "X", "X")
            .generator("x", 2, "X", "X")
            .mu(&["e", "e"], &[(1, "e")])
            .mu(&["e", "x"], &[(1, "x")])
            .mu(&["x", "e"], &[(1, "x")])
            .unit("X", "e")
            .build(f, Grading::Z)
            .unwrap();
        assert_eq!(Model::auto(&c), Model::Reduced);
        let w = (0, 6);
        let a = hc(&c, Flavor::Fixed, Model::Nu, 3, w).unwrap();
        let b = hc(&c, Flavor::Fixed, Model::Reduced, 7, w).unwrap();
        assert!(b.certified && b.stable);
        assert!(!a.certified);
    }

    #[test]
    fn b_eq_squares_to_zero() {
        let f = Field::Prime(3);
        let s = hc_slice(&exterior(f, 1), Flavor::Tate, Model::Nu, 3, (-2, 2)).unwrap();
        let d = &s.equivariant.complex.differential;
        assert!(d.compose(&f, d).is_zero());
    }

    #[test]
    fn zero_category() {
        let f = Field::Rational;
        let c = crate::ainfty::CategoryBuilder::new().build(f, Grading::Z).unwrap();
        for flavor in [Flavor::Orbits, Flavor::Fixed, Flavor::Tate] {
            let t = hc(&c, flavor, Model::Nu, 3, (-3, 3)).unwrap();
            assert!(t.dims.values().all(|&d| d == 0));
        }
    }
}
