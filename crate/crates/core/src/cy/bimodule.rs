//! A∞ bimodules over a category, stored as the square-zero extension `C ⊕ P`.
//!
//! An element `p ∈ P(K, L)` is an arrow `L → K` of the extension, so the action
//! `μ^{s|1|t}(a_s, …, a_1, p, b_t, …, b_1)` is the `μ` entry on the written tuple
//! `[a_s, …, a_1, p, b_t, …, b_1]`. The bimodule equations are exactly the
//! A∞ relations of the extension with one bimodule letter.

use std::collections::BTreeMap;

use crate::ainfty::{check_ainfty, AInfCategory, Generator, Tuple};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::GradedSpace;
use crate::report::ValidationReport;
use crate::sparse::{add_entry, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BimoduleElement {
    pub label: String,
    pub degree: i64,
    /// `K` in `P(K, L)`.
    pub left: usize,
    /// `L` in `P(K, L)`.
    pub right: usize,
}

/// Key of an action: letters left of the module element, the element, letters right of it.
pub type ActionKey = (Tuple, usize, Tuple);

#[derive(Debug, Clone)]
pub struct AInfBimodule {
    over: AInfCategory,
    elements: Vec<BimoduleElement>,
    actions: BTreeMap<ActionKey, SparseVec>,
    extension: AInfCategory,
    yoneda: Option<Yoneda>,
}

/// Factorization data of `Y^l_A ⊗ Y^r_B`: element `p` is `x ⊗ y` with `x ∈ hom(A, K)`, `y ∈ hom(L, B)`.
#[derive(Debug, Clone)]
pub struct Yoneda {
    pub a: usize,
    pub b: usize,
    pub factors: Vec<(usize, usize)>,
}

impl AInfBimodule {
    /// Assemble a bimodule; fails if an action is not composable, has the wrong degree,
    /// or the bimodule equations do not hold.
    pub fn new(
        over: AInfCategory,
        elements: Vec<BimoduleElement>,
        actions: impl IntoIterator<Item = (ActionKey, SparseVec)>,
    ) -> Result<Self> {
        let b = Self::assemble(over, elements, actions)?;
        let report = b.validate();
        if !report.passed {
            return Err(Error::IdentityViolated(report.witness.unwrap_or_default()));
        }
        Ok(b)
    }

    pub(crate) fn assemble(
        over: AInfCategory,
        elements: Vec<BimoduleElement>,
        actions: impl IntoIterator<Item = (ActionKey, SparseVec)>,
    ) -> Result<Self> {
        let f = over.field();
        let n = over.generators().len();
        let mut table: BTreeMap<ActionKey, SparseVec> = BTreeMap::new();
        for (key, out) in actions {
            if key.1 >= elements.len() || out.keys().any(|&o| o >= elements.len()) {
                return Err(Error::Input("bimodule action refers to an unknown element".into()));
            }
            let entry = table.entry(key).or_default();
            for (o, c) in out {
                add_entry(&f, entry, o, &f.reduce(&c)?);
            }
        }
        table.retain(|_, v| !v.is_empty());
        let mut gens = over.generators().to_vec();
        for e in &elements {
            if e.left >= over.objects().len() || e.right >= over.objects().len() {
                return Err(Error::Input(format!("bimodule element {} refers to an unknown object", e.label)));
            }
            gens.push(Generator { label: format!("⟨{}⟩", e.label), degree: e.degree, source: e.right, target: e.left });
        }
        let mut mu: Vec<(Tuple, SparseVec)> = over.mu_entries().map(|(k, v)| (k.clone(), v.clone())).collect();
        for ((l, p, r), out) in &table {
            let mut key = l.clone();
            key.push(n + p);
            key.extend_from_slice(r);
            mu.push((key, out.iter().map(|(o, c)| (n + o, c.clone())).collect()));
        }
        let extension = AInfCategory::new(f, over.grading(), over.objects().to_vec(), gens, mu, None)?;
        let elements = elements
            .into_iter()
            .map(|mut e| {
                e.degree = over.grading().normalize(e.degree);
                e
            })
            .collect();
        Ok(AInfBimodule { over, elements, actions: table, extension, yoneda: None })
    }

    /// The bimodule equations, checked as the relations of the square-zero extension.
    pub fn validate(&self) -> ValidationReport {
        let mut r = check_ainfty(&self.extension);
        r.check = "bimodule_relations".into();
        r
    }

    pub fn over(&self) -> &AInfCategory {
        &self.over
    }

    pub fn field(&self) -> Field {
        self.over.field()
    }

    pub fn elements(&self) -> &[BimoduleElement] {
        &self.elements
    }

    pub fn element(&self, p: usize) -> &BimoduleElement {
        &self.elements[p]
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// Elements of `P(K, L)` in index order.
    pub fn space(&self, k: usize, l: usize) -> Vec<usize> {
        (0..self.elements.len()).filter(|&p| self.elements[p].left == k && self.elements[p].right == l).collect()
    }

    pub fn graded_space(&self, k: usize, l: usize) -> GradedSpace {
        let basis = self.space(k, l).into_iter().map(|p| (self.elements[p].label.clone(), self.elements[p].degree)).collect();
        GradedSpace::new(self.over.grading(), basis).expect("element labels are unique")
    }

    pub fn action(&self, left: &[usize], p: usize, right: &[usize]) -> Option<&SparseVec> {
        self.actions.get(&(left.to_vec(), p, right.to_vec()))
    }

    pub fn actions(&self) -> impl Iterator<Item = (&ActionKey, &SparseVec)> {
        self.actions.iter()
    }

    /// Actions whose module input is `p`.
    pub fn actions_on(&self, p: usize) -> impl Iterator<Item = (&ActionKey, &SparseVec)> {
        self.actions.iter().filter(move |((_, q, _), _)| *q == p)
    }

    pub fn yoneda(&self) -> Option<&Yoneda> {
        self.yoneda.as_ref()
    }

    /// The square-zero extension `C ⊕ P`; element `p` is generator `over.generators().len() + p`.
    pub fn extension(&self) -> &AInfCategory {
        &self.extension
    }
}

/// `C_Δ(K, L) = hom(L, K)` with `μ^{s|1|t} = μ^{s+1+t}`.
pub fn diagonal_bimodule(c: &AInfCategory) -> Result<AInfBimodule> {
    let elements = c
        .generators()
        .iter()
        .map(|g| BimoduleElement { label: g.label.clone(), degree: g.degree, left: g.target, right: g.source })
        .collect();
    let mut actions = Vec::new();
    for (key, out) in c.mu_entries() {
        for pos in 0..key.len() {
            actions.push(((key[..pos].to_vec(), key[pos], key[pos + 1..].to_vec()), out.clone()));
        }
    }
    AInfBimodule::new(c.clone(), elements, actions)
}

/// `C^∨[n](K, L) = hom(K, L)^∨` shifted by `n`: the dual of `g ∈ hom(K, L)` has degree `n − |g|`.
///
/// `μ(a_s…a_1, g^∨, b_t…b_1) = Σ_h ± ⟨g, μ(b_t…b_1, h, a_s…a_1)⟩ h^∨`.
pub fn dual_diagonal(c: &AInfCategory, n: i64) -> Result<AInfBimodule> {
    let f = c.field();
    let elements = c
        .generators()
        .iter()
        .map(|g| BimoduleElement { label: format!("{}^", g.label), degree: n - g.degree, left: g.source, right: g.target })
        .collect();
    let mut actions: BTreeMap<ActionKey, SparseVec> = BTreeMap::new();
    for (key, out) in c.mu_entries() {
        for pos in 0..key.len() {
            let h = key[pos];
            let b = &key[..pos];
            let a = &key[pos + 1..];
            let sa = c.rsum(a);
            let sb = c.rsum(b);
            for (g, coef) in out {
                let e = sa * (n + 1) + sb + c.rdeg(*g);
                let entry = actions.entry((a.to_vec(), *g, b.to_vec())).or_default();
                add_entry(&f, entry, h, &f.mul(&f.sign(e), coef));
            }
        }
    }
    AInfBimodule::new(c.clone(), elements, actions)
}

/// `Y^l_A ⊗ Y^r_B (K, L) = hom(A, K) ⊗ hom(L, B)`, with `μ^{s|1|0}` acting on the first
/// factor, `μ^{0|1|t}` on the second, and all mixed actions zero.
pub fn yoneda_bimodule(c: &AInfCategory, a: usize, b: usize) -> Result<AInfBimodule> {
    if a >= c.objects().len() || b >= c.objects().len() {
        return Err(Error::Input("Yoneda bimodule refers to an unknown object".into()));
    }
    let f = c.field();
    let mut elements = Vec::new();
    let mut index = BTreeMap::new();
    let mut factors = Vec::new();
    for (x, gx) in c.generators().iter().enumerate() {
        if gx.source != a {
            continue;
        }
        for (y, gy) in c.generators().iter().enumerate() {
            if gy.target != b {
                continue;
            }
            index.insert((x, y), elements.len());
            factors.push((x, y));
            elements.push(BimoduleElement {
                label: format!("{}⊗{}", gx.label, gy.label),
                degree: gx.degree + gy.degree,
                left: gx.target,
                right: gy.source,
            });
        }
    }
    let mut actions: BTreeMap<ActionKey, SparseVec> = BTreeMap::new();
    for (key, out) in c.mu_entries() {
        let (&last, rest) = key.split_last().expect("μ inputs are nonempty");
        if c.gen(last).source == a {
            for (&(_, y), &p) in index.range((last, 0)..(last + 1, 0)) {
                let e = c.degree(y);
                let entry = actions.entry((rest.to_vec(), p, Vec::new())).or_default();
                for (o, coef) in out {
                    add_entry(&f, entry, index[&(*o, y)], &f.mul(&f.sign(e), coef));
                }
            }
        }
        let (&first, rest) = key.split_first().expect("μ inputs are nonempty");
        if c.gen(first).target == b {
            for (&(x, y), &p) in &index {
                if y != first {
                    continue;
                }
                let entry = actions.entry((Vec::new(), p, rest.to_vec())).or_default();
                for (o, coef) in out {
                    add_entry(&f, entry, index[&(x, *o)], coef);
                }
            }
        }
    }
    let mut m = AInfBimodule::new(c.clone(), elements, actions)?;
    m.yoneda = Some(Yoneda { a, b, factors });
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::fixtures::*;

    fn fixtures() -> Vec<AInfCategory> {
        vec![
            ground_field(Field::Rational),
            exterior(Field::Rational, 1),
            exterior(Field::Rational, 3),
            quiver(Field::Rational),
            a_p(Field::Prime(3), 3).unwrap(),
            a_p(Field::Prime(2), 2).unwrap(),
        ]
    }

    #[test]
    fn diagonal_passes_on_every_fixture() {
        for c in fixtures() {
            let d = diagonal_bimodule(&c).unwrap();
            assert!(d.validate().passed);
            assert_eq!(d.dim(), c.generators().len());
        }
    }

    #[test]
    fn diagonal_actions_match_mu() {
        let c = exterior(Field::Rational, 1);
        let d = diagonal_bimodule(&c).unwrap();
        let (one, eps) = (c.index_of("1").unwrap(), c.index_of("eps").unwrap());
        assert_eq!(d.action(&[one], eps, &[]), c.mu(&[one, eps]));
        assert_eq!(d.action(&[], one, &[eps]), c.mu(&[one, eps]));
        assert_eq!(d.action(&[eps], eps, &[]), None);
    }

    #[test]
    fn dual_and_yoneda_validate() {
        for c in fixtures() {
            for n in [0, 1, 2, 3] {
                assert!(dual_diagonal(&c, n).unwrap().validate().passed);
            }
            let k = c.objects().len();
            for a in 0..k {
                for b in 0..k {
                    assert!(yoneda_bimodule(&c, a, b).unwrap().validate().passed);
                }
            }
        }
    }

    #[test]
    fn ground_field_bimodules_are_one_dimensional() {
        let c = ground_field(Field::Rational);
        assert_eq!(diagonal_bimodule(&c).unwrap().dim(), 1);
        assert_eq!(dual_diagonal(&c, 0).unwrap().dim(), 1);
        assert_eq!(yoneda_bimodule(&c, 0, 0).unwrap().dim(), 1);
    }

    #[test]
    fn yoneda_dimensions_over_quiver() {
        let c = quiver(Field::Rational);
        for a in 0..2 {
            for b in 0..2 {
                let y = yoneda_bimodule(&c, a, b).unwrap();
                for k in 0..2 {
                    for l in 0..2 {
                        assert_eq!(y.space(k, l).len(), c.hom(a, k).len() * c.hom(l, b).len());
                    }
                }
            }
        }
    }

    #[test]
    fn corrupted_action_is_rejected() {
        let c = exterior(Field::Rational, 1);
        let d = diagonal_bimodule(&c).unwrap();
        let mut acts: Vec<_> = d.actions().map(|(k, v)| (k.clone(), v.clone())).collect();
        let f = c.field();
        acts[0].1 = acts[0].1.iter().map(|(i, v)| (*i, f.add(v, v))).collect();
        let err = AInfBimodule::new(c.clone(), d.elements().to_vec(), acts).unwrap_err();
        assert!(matches!(err, Error::IdentityViolated(_)));
    }
}
