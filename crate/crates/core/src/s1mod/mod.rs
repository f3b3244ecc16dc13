//! S¹-complexes: graded spaces with operators `δ_k` of degree `1 − 2k` satisfying
//! `Σ_{i+j=s} δ_i δ_j = 0`, their pre-morphisms, composition and differential.

mod derived;
mod enhance;
pub mod fixtures;

pub use derived::{rhom_complex, tensor_derived, DerivedTensor, Rhom};
pub use enhance::{find_enhancement, Enhancement, Obstruction};

use crate::complex::TruncatedComplex;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{GradedSpace, Grading};
use crate::report::ValidationReport;
use crate::sparse::SparseMap;

#[derive(Debug, Clone)]
pub struct S1Complex {
    field: Field,
    space: GradedSpace,
    deltas: Vec<SparseMap>,
}

impl S1Complex {
    /// Checks dimensions and `deg δ_k = 1 − 2k`; trailing zero operators are dropped.
    /// The hierarchy equations are checked by [`validate_s1`], not here.
    pub fn new(field: Field, space: GradedSpace, deltas: Vec<SparseMap>) -> Result<Self> {
        let mut deltas = deltas;
        for (k, d) in deltas.iter_mut().enumerate() {
            let want = 1 - 2 * k as i64;
            if d.degree() != want {
                return Err(Error::DegreeViolation(format!("δ_{k} has degree {}, expected {want}", d.degree())));
            }
            d.check_degrees(&space, &space)?;
        }
        while deltas.len() > 1 && deltas.last().is_some_and(SparseMap::is_zero) {
            deltas.pop();
        }
        if deltas.is_empty() {
            deltas.push(SparseMap::zero(space.dim(), space.dim(), 1));
        }
        Ok(S1Complex { field, space, deltas })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Index of the highest nonzero operator.
    pub fn top(&self) -> usize {
        self.deltas.len() - 1
    }

    pub fn deltas(&self) -> &[SparseMap] {
        &self.deltas
    }

    /// `δ_k`, zero beyond the top.
    pub fn delta(&self, k: usize) -> SparseMap {
        self.deltas.get(k).cloned().unwrap_or_else(|| SparseMap::zero(self.dim(), self.dim(), 1 - 2 * k as i64))
    }

    /// `(M, δ_0)` as a chain complex over every occupied degree.
    pub fn underlying(&self) -> Result<TruncatedComplex> {
        TruncatedComplex::exact(self.field, self.space.clone(), self.deltas[0].clone())
    }

    /// Lowest and highest occupied degree; errors in Z/2 mode.
    pub fn bounds(&self) -> Result<Option<(i64, i64)>> {
        if self.space.grading() == Grading::Z2 {
            return Err(Error::UnboundedInput("Z/2-graded S¹-complexes have unbounded u-series".into()));
        }
        Ok(self.space.degree_range())
    }
}

pub fn validate_s1(m: &S1Complex) -> ValidationReport {
    let f = m.field;
    let top = 2 * m.top();
    for s in 0..=top {
        let mut sum = SparseMap::zero(m.dim(), m.dim(), 2 - 2 * s as i64);
        for i in 0..=s {
            sum = sum.add(&f, &m.delta(i).compose(&f, &m.delta(s - i)));
        }
        if let Some((r, c, v)) = sum.first_nonzero() {
            return ValidationReport::fail(
                "s1_hierarchy",
                s + 1,
                format!(
                    "Σ δ_i δ_{{{s}−i}} has coefficient {} of {} on {}",
                    f.format(&v),
                    m.space.label(r),
                    m.space.label(c)
                ),
            );
        }
    }
    ValidationReport::pass("s1_hierarchy", top + 1)
}

/// `δ_0 = d`, `δ_{>0} = 0`.
pub fn trivialize(c: &TruncatedComplex) -> S1Complex {
    S1Complex::new(c.field, c.space.clone(), vec![c.differential.clone()]).expect("a complex is a trivial S¹-complex")
}

/// `M ⊗ N` with `δ_k(m⊗n) = (−1)^{|n|} δ_k m ⊗ n + m ⊗ δ_k n`; basis `m⊗n` in row-major order.
pub fn diagonal_tensor(m: &S1Complex, n: &S1Complex) -> Result<S1Complex> {
    if m.field != n.field || m.space.grading() != n.space.grading() {
        return Err(Error::Input("tensor factors over different fields or gradings".into()));
    }
    let f = m.field;
    let g = m.space.grading();
    let (dm, dn) = (m.dim(), n.dim());
    let mut basis = Vec::with_capacity(dm * dn);
    for a in m.space.basis() {
        for b in n.space.basis() {
            basis.push((format!("{}⊗{}", a.label, b.label), g.normalize(a.degree + b.degree)));
        }
    }
    let space = GradedSpace::new(g, basis)?;
    let top = m.top().max(n.top());
    let mut deltas = Vec::new();
    for k in 0..=top {
        let (deltm, deltn) = (m.delta(k), n.delta(k));
        let mut cols = Vec::with_capacity(dm * dn);
        for i in 0..dm {
            for j in 0..dn {
                let mut col = crate::sparse::SparseVec::new();
                let sign = f.sign(n.space.degree(j));
                for (r, v) in deltm.column(i) {
                    crate::sparse::add_entry(&f, &mut col, r * dn + j, &f.mul(&sign, v));
                }
                for (r, v) in deltn.column(j) {
                    crate::sparse::add_entry(&f, &mut col, i * dn + r, v);
                }
                cols.push(col);
            }
        }
        deltas.push(SparseMap::from_columns(dm * dn, 1 - 2 * k as i64, cols));
    }
    S1Complex::new(f, space, deltas)
}

/// A pre-morphism `F = {F^j}` of degree `k`, with `deg F^j = k − 2j`.
#[derive(Debug, Clone)]
pub struct S1Morphism {
    source: S1Complex,
    target: S1Complex,
    degree: i64,
    terms: Vec<SparseMap>,
}

impl S1Morphism {
    pub fn new(source: &S1Complex, target: &S1Complex, degree: i64, terms: Vec<SparseMap>) -> Result<Self> {
        if source.field != target.field {
            return Err(Error::Input("morphism between complexes over different fields".into()));
        }
        let mut terms = terms;
        for (j, t) in terms.iter_mut().enumerate() {
            if t.degree() != degree - 2 * j as i64 {
                return Err(Error::DegreeViolation(format!("F^{j} has degree {}, expected {}", t.degree(), degree - 2 * j as i64)));
            }
            t.check_degrees(&source.space, &target.space)?;
        }
        while terms.last().is_some_and(SparseMap::is_zero) {
            terms.pop();
        }
        Ok(S1Morphism { source: source.clone(), target: target.clone(), degree, terms })
    }

    pub fn identity(m: &S1Complex) -> Self {
        S1Morphism::new(m, m, 0, vec![SparseMap::identity(m.dim())]).expect("identity morphism")
    }

    /// The strict morphism `{F^0 = f}`.
    pub fn strict(source: &S1Complex, target: &S1Complex, f: SparseMap) -> Result<Self> {
        let d = f.degree();
        S1Morphism::new(source, target, d, vec![f])
    }

    pub fn source(&self) -> &S1Complex {
        &self.source
    }

    pub fn target(&self) -> &S1Complex {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn terms(&self) -> &[SparseMap] {
        &self.terms
    }

    /// `F^j`, zero beyond the last stored term.
    pub fn term(&self, j: usize) -> SparseMap {
        self.terms.get(j).cloned().unwrap_or_else(|| {
            SparseMap::zero(self.source.dim(), self.target.dim(), self.degree - 2 * j as i64)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        premorphism_differential(self).is_zero()
    }
}

/// `(∂F)^s = Σ F^i δ^M_{s−i} − (−1)^{deg F} Σ δ^N_{s−j} F^j`.
pub fn premorphism_differential(fm: &S1Morphism) -> S1Morphism {
    let f = fm.source.field;
    let sign = f.neg(&f.sign(fm.degree));
    let len = fm.terms.len() + fm.source.top().max(fm.target.top());
    let terms = (0..len.max(1))
        .map(|s| {
            let mut acc = SparseMap::zero(fm.source.dim(), fm.target.dim(), fm.degree + 1 - 2 * s as i64);
            for i in 0..=s.min(fm.terms.len().saturating_sub(1)) {
                if fm.terms.is_empty() {
                    break;
                }
                acc = acc.add(&f, &fm.terms[i].compose(&f, &fm.source.delta(s - i)));
                acc = acc.add_scaled(&f, &sign, &fm.target.delta(s - i).compose(&f, &fm.terms[i]));
            }
            acc
        })
        .collect();
    S1Morphism::new(&fm.source, &fm.target, fm.degree + 1, terms).expect("∂ preserves the degree rule")
}

/// `(G∘F)^s = Σ G^{s−j} F^j`.
pub fn compose(g: &S1Morphism, fm: &S1Morphism) -> Result<S1Morphism> {
    if g.source.dim() != fm.target.dim() || g.source.space.basis() != fm.target.space.basis() {
        return Err(Error::DimensionMismatch("composition of morphisms with mismatched middle complex".into()));
    }
    let f = fm.source.field;
    let len = (g.terms.len() + fm.terms.len()).saturating_sub(1);
    let terms = (0..len)
        .map(|s| {
            let mut acc = SparseMap::zero(fm.source.dim(), g.target.dim(), g.degree + fm.degree - 2 * s as i64);
            for j in 0..=s {
                if j < fm.terms.len() && s - j < g.terms.len() {
                    acc = acc.add(&f, &g.terms[s - j].compose(&f, &fm.terms[j]));
                }
            }
            acc
        })
        .collect();
    S1Morphism::new(&fm.source, &g.target, g.degree + fm.degree, terms)
}

/// `F + c·G` for morphisms of equal degree between the same complexes.
pub fn add_scaled(fm: &S1Morphism, c: &crate::field::Scalar, g: &S1Morphism) -> S1Morphism {
    let f = fm.source.field;
    let len = fm.terms.len().max(g.terms.len());
    let terms = (0..len).map(|j| fm.term(j).add_scaled(&f, c, &g.term(j))).collect();
    S1Morphism::new(&fm.source, &fm.target, fm.degree, terms).expect("sum of morphisms of one degree")
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn fixtures_validate() {
        for f in [Field::Rational, Field::Prime(2)] {
            for m in [ground(f), xy(f), exterior_module(f), y_line(f)] {
                assert!(validate_s1(&m).passed);
            }
        }
    }

    #[test]
    fn broken_hierarchy_reports_stage() {
        let f = Field::Rational;
        let space = GradedSpace::new(Grading::Z, vec![("a".into(), 1), ("b".into(), 0), ("c".into(), -1)]).unwrap();
        let d1 = SparseMap::from_triplets(&f, 3, 3, -1, [(1, 0, f.one()), (2, 1, f.one())]).unwrap();
        let m = S1Complex::new(f, space, vec![SparseMap::zero(3, 3, 1), d1]).unwrap();
        let r = validate_s1(&m);
        assert!(!r.passed);
        assert!(r.witness.unwrap().contains("δ_{2−i}"));
    }

    #[test]
    fn operator_degrees_enforced() {
        let f = Field::Rational;
        let space = GradedSpace::new(Grading::Z, vec![("a".into(), 0)]).unwrap();
        assert!(matches!(
            S1Complex::new(f, space, vec![SparseMap::zero(1, 1, 0)]),
            Err(Error::DegreeViolation(_))
        ));
    }

    #[test]
    fn diagonal_tensor_validates() {
        let f = Field::Rational;
        let m = xy(f);
        let mm = diagonal_tensor(&m, &m).unwrap();
        assert_eq!(mm.dim(), 4);
        assert!(validate_s1(&mm).passed);
        let mk = diagonal_tensor(&m, &ground(f)).unwrap();
        assert_eq!(mk.deltas()[1].nnz(), m.deltas()[1].nnz());
        let triv = diagonal_tensor(&ground(f), &ground(f)).unwrap();
        assert_eq!(triv.top(), 0);
    }

    #[test]
    fn differential_squares_to_zero_and_is_a_derivation() {
        use rand::{Rng, SeedableRng};
        let f = Field::Rational;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let m = xy(f);
        let n = exterior_module(f);
        let random = |rng: &mut rand_chacha::ChaCha8Rng, src: &S1Complex, tgt: &S1Complex, deg: i64| {
            let terms = (0..3)
                .map(|j| {
                    let e = deg - 2 * j;
                    let trip: Vec<_> = (0..src.dim())
                        .flat_map(|c| (0..tgt.dim()).map(move |r| (r, c)))
                        .filter(|&(r, c)| tgt.space().degree(r) - src.space().degree(c) == e)
                        .map(|(r, c)| (r, c, f.from_i64(rng.gen_range(-3..=3))))
                        .collect();
                    SparseMap::from_triplets(&f, src.dim(), tgt.dim(), e, trip).unwrap()
                })
                .collect();
            S1Morphism::new(src, tgt, deg, terms).unwrap()
        };
        for _ in 0..10 {
            for deg in [-1, 0, 1, 2] {
                let a = random(&mut rng, &m, &n, deg);
                assert!(premorphism_differential(&premorphism_differential(&a)).is_zero());
                let b = random(&mut rng, &n, &m, 1 - deg);
                let lhs = premorphism_differential(&compose(&b, &a).unwrap());
                let rhs = add_scaled(
                    &compose(&b, &premorphism_differential(&a)).unwrap(),
                    &f.sign(deg),
                    &compose(&premorphism_differential(&b), &a).unwrap(),
                );
                let diff = add_scaled(&lhs, &f.from_i64(-1), &rhs);
                assert!(diff.is_zero());
            }
        }
    }

    #[test]
    fn identity_is_closed_and_u_squared_is_degree_four() {
        let f = Field::Rational;
        let k = ground(f);
        assert!(S1Morphism::identity(&xy(f)).is_closed());
        let u = S1Morphism::new(&k, &k, 2, vec![SparseMap::zero(1, 1, 2), SparseMap::identity(1).with_degree(0)]).unwrap();
        assert!(u.is_closed());
        let uu = compose(&u, &u).unwrap();
        assert_eq!(uu.degree(), 4);
        assert_eq!(uu.terms().len(), 3);
        assert!(uu.term(0).is_zero() && uu.term(1).is_zero());
        assert_eq!(uu.term(2).get(0, 0), f.one());
    }

    #[test]
    fn differential_of_random_premorphism_by_hand() {
        let f = Field::Rational;
        let m = xy(f);
        let e = SparseMap::from_triplets(&f, 2, 2, 0, [(0, 0, f.one())]).unwrap();
        let d = premorphism_differential(&S1Morphism::strict(&m, &m, e).unwrap());
        assert_eq!(d.term(1).get(1, 0), f.from_i64(-1));
        assert_eq!(d.term(1).nnz(), 1);
    }
}
