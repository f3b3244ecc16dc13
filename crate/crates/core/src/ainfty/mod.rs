//! A∞ categories with finitely many objects and generators.
//!
//! Composition inputs are stored in written order `[x_d, …, x_1]` with
//! `x_i ∈ hom(X_{i−1}, X_i)`, so neighbouring entries satisfy
//! `source(x_{i+1}) = target(x_i)`. Signs use the reduced degree `||x|| = |x| − 1`.

pub mod fixtures;
pub mod functor;

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::graded::{GradedSpace, Grading};
use crate::report::ValidationReport;
use crate::sparse::{add_entry, axpy, SparseVec};

pub use functor::AInfFunctor;

pub type Tuple = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub degree: i64,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone)]
pub struct AInfCategory {
    field: Field,
    grading: Grading,
    objects: Vec<String>,
    gens: Vec<Generator>,
    mu: BTreeMap<Tuple, SparseVec>,
    units: Option<Vec<usize>>,
}

impl AInfCategory {
    /// Build a category, reducing scalars into the field and checking
    /// composability and the degree rule of every `μ^d` entry.
    pub fn new(
        field: Field,
        grading: Grading,
        objects: Vec<String>,
        mut gens: Vec<Generator>,
        mu: impl IntoIterator<Item = (Tuple, SparseVec)>,
        units: Option<Vec<usize>>,
    ) -> Result<Self> {
        let mut labels = HashMap::new();
        for (i, g) in gens.iter_mut().enumerate() {
            if labels.insert(g.label.clone(), i).is_some() {
                return Err(Error::Input(format!("duplicate generator label {:?}", g.label)));
            }
            if g.source >= objects.len() || g.target >= objects.len() {
                return Err(Error::Input(format!("generator {} refers to an unknown object", g.label)));
            }
            g.degree = grading.normalize(g.degree);
        }
        let mut table: BTreeMap<Tuple, SparseVec> = BTreeMap::new();
        for (key, out) in mu {
            let entry = table.entry(key).or_default();
            for (o, c) in out {
                add_entry(&field, entry, o, &field.reduce(&c)?);
            }
        }
        table.retain(|_, v| !v.is_empty());
        let c = AInfCategory { field, grading, objects, gens, mu: table, units };
        c.check_structure()?;
        if let Some(u) = &c.units {
            if u.len() != c.objects.len() {
                return Err(Error::Input("unit list must name one generator per object".into()));
            }
            for (x, &e) in u.iter().enumerate() {
                let g = c.gens.get(e).ok_or_else(|| Error::Input("unit index out of range".into()))?;
                if g.source != x || g.target != x || g.degree != 0 {
                    return Err(Error::DegreeViolation(format!("unit {} is not a degree-0 endomorphism of {}", g.label, c.objects[x])));
                }
            }
        }
        Ok(c)
    }

    fn check_structure(&self) -> Result<()> {
        for (key, out) in &self.mu {
            if key.is_empty() {
                return Err(Error::Input("μ^0 is not allowed".into()));
            }
            if key.iter().chain(out.keys()).any(|&g| g >= self.gens.len()) {
                return Err(Error::Input("μ entry refers to an unknown generator".into()));
            }
            if !self.composable(key) {
                return Err(Error::DegreeViolation(format!("μ input {} is not composable", self.fmt_tuple(key))));
            }
            let (src, tgt) = self.ends(key);
            let want = self.grading.normalize(self.tuple_degree(key) + 2 - key.len() as i64);
            for &o in out.keys() {
                let g = &self.gens[o];
                if g.source != src || g.target != tgt {
                    return Err(Error::DegreeViolation(format!(
                        "μ{} has output {} in the wrong hom space",
                        self.fmt_tuple(key),
                        g.label
                    )));
                }
                if g.degree != want {
                    return Err(Error::DegreeViolation(format!(
                        "μ{} has output {} of degree {}, expected {}",
                        self.fmt_tuple(key),
                        g.label,
                        g.degree,
                        want
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn gen(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.gens[i].label
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.label == label)
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn degree(&self, g: usize) -> i64 {
        self.gens[g].degree
    }

    /// Reduced degree `||x|| = |x| − 1`.
    pub fn rdeg(&self, g: usize) -> i64 {
        self.gens[g].degree - 1
    }

    pub fn tuple_degree(&self, t: &[usize]) -> i64 {
        t.iter().map(|&g| self.gens[g].degree).sum()
    }

    /// `Σ ||x||` over a slice.
    pub fn rsum(&self, t: &[usize]) -> i64 {
        t.iter().map(|&g| self.rdeg(g)).sum()
    }

    pub fn composable(&self, t: &[usize]) -> bool {
        t.windows(2).all(|w| self.gens[w[0]].source == self.gens[w[1]].target)
    }

    /// `(source(x_1), target(x_d))` of a written-order tuple.
    pub fn ends(&self, t: &[usize]) -> (usize, usize) {
        (self.gens[*t.last().unwrap()].source, self.gens[t[0]].target)
    }

    pub fn mu(&self, t: &[usize]) -> Option<&SparseVec> {
        self.mu.get(t)
    }

    pub fn mu_entries(&self) -> impl Iterator<Item = (&Tuple, &SparseVec)> {
        self.mu.iter()
    }

    pub fn max_arity(&self) -> usize {
        self.mu.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn units(&self) -> Option<&[usize]> {
        self.units.as_deref()
    }

    pub fn is_unit(&self, g: usize) -> bool {
        self.units.as_ref().is_some_and(|u| u.contains(&g))
    }

    pub fn unit_of(&self, x: usize) -> Option<usize> {
        self.units.as_ref().map(|u| u[x])
    }

    /// Generators of `hom(x, y)` in index order.
    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.gens.len()).filter(|&g| self.gens[g].source == x && self.gens[g].target == y).collect()
    }

    pub fn hom_space(&self, x: usize, y: usize) -> GradedSpace {
        let basis = self.hom(x, y).into_iter().map(|g| (self.gens[g].label.clone(), self.gens[g].degree)).collect();
        GradedSpace::new(self.grading, basis).expect("generator labels are unique")
    }

    /// Generators that have `g` in the output of `μ`, grouped by output generator.
    pub(crate) fn output_index(&self) -> Vec<Vec<(&Tuple, &Scalar)>> {
        let mut idx = vec![Vec::new(); self.gens.len()];
        for (k, out) in &self.mu {
            for (o, c) in out {
                idx[*o].push((k, c));
            }
        }
        idx
    }

    /// Left-hand side of every quadratic relation, keyed by input tuple; zero entries dropped.
    pub fn relation_residuals(&self) -> BTreeMap<Tuple, SparseVec> {
        let f = &self.field;
        let by_output = self.output_index();
        let mut res: BTreeMap<Tuple, SparseVec> = BTreeMap::new();
        for (outer, val) in &self.mu {
            for pos in 0..outer.len() {
                let sign = f.sign(self.rsum(&outer[pos + 1..]));
                for (inner, c) in &by_output[outer[pos]] {
                    let mut t = outer[..pos].to_vec();
                    t.extend_from_slice(inner);
                    t.extend_from_slice(&outer[pos + 1..]);
                    axpy(f, res.entry(t).or_default(), &f.mul(&sign, c), val);
                }
            }
        }
        res.retain(|_, v| !v.is_empty());
        res
    }

    pub fn fmt_tuple(&self, t: &[usize]) -> String {
        let parts: Vec<&str> = t.iter().map(|&g| self.gens[g].label.as_str()).collect();
        format!("({})", parts.join(", "))
    }

    pub fn fmt_vec(&self, v: &SparseVec) -> String {
        fmt_combination(&self.field, v, |g| self.gens[g].label.clone())
    }

    /// The same category with the unit designation removed.
    pub fn forget_units(&self) -> AInfCategory {
        AInfCategory { units: None, ..self.clone() }
    }

    /// Reinterpret over another field; structure constants must reduce.
    pub fn over(&self, field: Field) -> Result<AInfCategory> {
        AInfCategory::new(field, self.grading, self.objects.clone(), self.gens.clone(), self.mu.clone(), self.units.clone())
    }
}

pub fn fmt_combination(f: &Field, v: &SparseVec, label: impl Fn(usize) -> String) -> String {
    if v.is_empty() {
        return "0".into();
    }
    let terms: Vec<String> = v.iter().map(|(i, c)| format!("{}*{}", f.format(c), label(*i))).collect();
    terms.join(" + ")
}

/// Check the quadratic A∞ relations `Σ (−1)^{✠_n} μ(…, μ(…), x_n, …, x_1) = 0`.
pub fn check_ainfty(c: &AInfCategory) -> ValidationReport {
    let res = c.relation_residuals();
    let examined = c.mu.len();
    match res.iter().next() {
        None => ValidationReport::pass("ainfty_relations", examined),
        Some((t, v)) => {
            ValidationReport::fail("ainfty_relations", examined, format!("relation at {} = {}", c.fmt_tuple(t), c.fmt_vec(v)))
        }
    }
}

/// Check the strict unit equations on every generator.
pub fn check_strict_units(c: &AInfCategory) -> Result<ValidationReport> {
    let units = match c.units() {
        Some(u) => u.to_vec(),
        None => return Err(Error::MissingUnit(c.objects.first().cloned().unwrap_or_default())),
    };
    let f = &c.field;
    let name = "strict_units";
    let mut examined = 0;
    let expect = |key: Vec<usize>, want: SparseVec, examined: &mut usize| -> Option<String> {
        *examined += 1;
        let got = c.mu(&key).cloned().unwrap_or_default();
        (got != want).then(|| format!("μ{} = {}, expected {}", c.fmt_tuple(&key), c.fmt_vec(&got), c.fmt_vec(&want)))
    };
    for &e in &units {
        if let Some(w) = expect(vec![e], SparseVec::new(), &mut examined) {
            return Ok(ValidationReport::fail(name, examined, w));
        }
    }
    for y in 0..c.gens.len() {
        let g = &c.gens[y];
        let left: SparseVec = [(y, f.sign(g.degree))].into_iter().collect();
        if let Some(w) = expect(vec![units[g.target], y], left, &mut examined) {
            return Ok(ValidationReport::fail(name, examined, w));
        }
        let right: SparseVec = [(y, f.one())].into_iter().collect();
        if let Some(w) = expect(vec![y, units[g.source]], right, &mut examined) {
            return Ok(ValidationReport::fail(name, examined, w));
        }
    }
    for (key, out) in &c.mu {
        if key.len() > 2 && key.iter().any(|g| units.contains(g)) {
            examined += 1;
            return Ok(ValidationReport::fail(name, examined, format!("μ{} = {}, expected 0", c.fmt_tuple(key), c.fmt_vec(out))));
        }
    }
    Ok(ValidationReport::pass(name, examined))
}

pub fn unit_label(object: &str) -> String {
    format!("e+_{object}")
}

/// Adjoin a strict unit `e+_X` to every object.
pub fn augment_units(c: &AInfCategory) -> Result<AInfCategory> {
    if c.units.is_some() {
        return Err(Error::AlreadyUnital);
    }
    let f = c.field;
    let mut gens = c.gens.clone();
    let mut units = Vec::new();
    for (x, name) in c.objects.iter().enumerate() {
        let label = unit_label(name);
        if c.index_of(&label).is_some() {
            return Err(Error::Input(format!("label {label} already in use")));
        }
        units.push(gens.len());
        gens.push(Generator { label, degree: 0, source: x, target: x });
    }
    let mut mu = c.mu.clone();
    for (y, g) in gens.iter().enumerate() {
        mu.insert(vec![units[g.target], y], [(y, f.sign(g.degree))].into_iter().collect());
        mu.insert(vec![y, units[g.source]], [(y, f.one())].into_iter().collect());
    }
    AInfCategory::new(f, c.grading, c.objects.clone(), gens, mu, Some(units))
}

/// Remove the designated units. Fails if some composition of non-units outputs a unit.
pub fn strip_units(c: &AInfCategory) -> Result<AInfCategory> {
    let units = c.units().ok_or_else(|| Error::MissingUnit(c.objects.first().cloned().unwrap_or_default()))?;
    let keep: Vec<usize> = (0..c.gens.len()).filter(|g| !units.contains(g)).collect();
    let new_index: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let gens = keep.iter().map(|&g| c.gens[g].clone()).collect();
    let mut mu = BTreeMap::new();
    for (key, out) in &c.mu {
        if key.iter().any(|g| units.contains(g)) {
            continue;
        }
        if let Some(u) = out.keys().find(|g| units.contains(g)) {
            return Err(Error::Input(format!("μ{} has a unit component {}", c.fmt_tuple(key), c.label(*u))));
        }
        let k: Tuple = key.iter().map(|g| new_index[g]).collect();
        let o: SparseVec = out.iter().map(|(g, s)| (new_index[g], s.clone())).collect();
        mu.insert(k, o);
    }
    AInfCategory::new(c.field, c.grading, c.objects.clone(), gens, mu, None)
}

type LabelledTerms = Vec<(Scalar, String)>;

/// Label-based construction helper used by fixtures and the input reader.
#[derive(Debug, Clone, Default)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    gens: Vec<Generator>,
    mu: Vec<(Vec<String>, LabelledTerms)>,
    units: Vec<(String, String)>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(mut self, name: &str) -> Self {
        self.objects.push(name.to_string());
        self
    }

    pub fn generator(mut self, label: &str, degree: i64, source: &str, target: &str) -> Self {
        let s = self.objects.iter().position(|o| o == source).expect("unknown source object");
        let t = self.objects.iter().position(|o| o == target).expect("unknown target object");
        self.gens.push(Generator { label: label.to_string(), degree, source: s, target: t });
        self
    }

    /// `μ(inputs) += Σ c · out`, inputs in written order.
    pub fn mu(mut self, inputs: &[&str], out: &[(i64, &str)]) -> Self {
        let out = out.iter().map(|(c, l)| (Scalar::from_integer((*c).into()), l.to_string())).collect();
        self.mu.push((inputs.iter().map(|s| s.to_string()).collect(), out));
        self
    }

    pub fn mu_scalar(mut self, inputs: Vec<String>, out: Vec<(Scalar, String)>) -> Self {
        self.mu.push((inputs, out));
        self
    }

    pub fn unit(mut self, object: &str, label: &str) -> Self {
        self.units.push((object.to_string(), label.to_string()));
        self
    }

    pub fn build(self, field: Field, grading: Grading) -> Result<AInfCategory> {
        let idx: HashMap<&str, usize> = self.gens.iter().enumerate().map(|(i, g)| (g.label.as_str(), i)).collect();
        let look = |l: &str| idx.get(l).copied().ok_or_else(|| Error::Input(format!("unknown generator {l:?}")));
        let mut mu = Vec::new();
        for (inputs, out) in &self.mu {
            let key = inputs.iter().map(|l| look(l)).collect::<Result<Tuple>>()?;
            let mut v = SparseVec::new();
            for (c, l) in out {
                let c = field.reduce(c)?;
                add_entry(&field, &mut v, look(l)?, &c);
            }
            mu.push((key, v));
        }
        let units = if self.units.is_empty() {
            None
        } else {
            let mut u = vec![usize::MAX; self.objects.len()];
            for (o, l) in &self.units {
                let x = self.objects.iter().position(|n| n == o).ok_or_else(|| Error::Input(format!("unknown object {o:?}")))?;
                u[x] = look(l)?;
            }
            if let Some(x) = u.iter().position(|&e| e == usize::MAX) {
                return Err(Error::MissingUnit(self.objects[x].clone()));
            }
            Some(u)
        };
        AInfCategory::new(field, grading, self.objects, self.gens, mu, units)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn fixtures_satisfy_relations() {
        let q = Field::Rational;
        for c in [ground_field(q), exterior(q, 1), exterior(q, 3), square_zero(q, 2), quiver(q)] {
            assert!(check_ainfty(&c).passed, "{:?}", check_ainfty(&c));
        }
    }

    #[test]
    fn exterior_units() {
        let c = exterior(Field::Rational, 1);
        assert!(check_strict_units(&c).unwrap().passed);
        assert!(check_strict_units(&ground_field(Field::Prime(3))).unwrap().passed);
        assert!(matches!(check_strict_units(&square_zero(Field::Rational, 2)), Err(Error::MissingUnit(_))));
    }

    #[test]
    fn a_p_depends_on_characteristic() {
        for p in [2u64, 3, 5] {
            let fp = a_p(Field::Prime(p), p as usize).unwrap();
            assert!(check_ainfty(&fp).passed);
            let q = a_p(Field::Rational, p as usize).unwrap();
            let r = check_ainfty(&q);
            assert!(!r.passed);
            assert!(r.witness.unwrap().contains(&format!("{p}*z")));
        }
    }

    #[test]
    fn degree_rule_enforced() {
        let r = CategoryBuilder::new()
            .object("X")
            .generator("x", 1, "X", "X")
            .mu(&["x", "x"], &[(1, "x")])
            .build(Field::Rational, Grading::Z);
        assert!(matches!(r, Err(Error::DegreeViolation(_))));
    }

    #[test]
    fn corrupted_unit_detected() {
        let c = CategoryBuilder::new()
            .object("X")
            .generator("1", 0, "X", "X")
            .generator("x", 1, "X", "X")
            .generator("y", 1, "X", "X")
            .mu(&["1", "1"], &[(1, "1")])
            .mu(&["1", "x"], &[(-1, "x")])
            .mu(&["x", "1"], &[(1, "x")])
            .mu(&["1", "y"], &[(-1, "y")])
            .mu(&["y", "1"], &[(1, "y")])
            .mu(&["1", "x", "y"], &[(1, "x")])
            .unit("X", "1")
            .build(Field::Rational, Grading::Z)
            .unwrap();
        let r = check_strict_units(&c).unwrap();
        assert!(!r.passed);
        assert!(r.witness.unwrap().contains("(1, x, y)"));
    }

    #[test]
    fn augmentation_dimensions() {
        let q = Field::Rational;
        let plain = exterior_nonunital(q, 1);
        let plus = augment_units(&plain).unwrap();
        assert_eq!(plus.hom(0, 0).len(), 3);
        assert!(check_ainfty(&plus).passed);
        assert!(check_strict_units(&plus).unwrap().passed);
        assert_eq!(augment_units(&plus).unwrap_err(), Error::AlreadyUnital);
        let g = augment_units(&ground_field(q).forget_units()).unwrap();
        assert_eq!(g.generators().len(), 2);
        let ap = augment_units(&a_p_nonunital(Field::Prime(3), 3).unwrap()).unwrap();
        assert!(check_ainfty(&ap).passed);
    }

    #[test]
    fn strip_then_augment_is_stable() {
        let c = exterior(Field::Rational, 1);
        let s = strip_units(&c).unwrap();
        let again = strip_units(&augment_units(&s).unwrap()).unwrap();
        assert_eq!(s.generators().len(), again.generators().len());
        assert!(strip_units(&square_zero(Field::Rational, 2)).is_err());
    }
}
