//! JSON input documents: categories, S¹-complexes, traces, co-traces and job parameters.
//!
//! Scalars are strings (`"a/b"` over `Q`, integers over `F_p`). Documents produced by
//! [`InputDocument::canonical`] round-trip byte for byte.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ainfty::{AInfCategory, CategoryBuilder};
use crate::cy::{CotraceData, Functional, TraceData};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{GradedSpace, Grading};
use crate::hochschild::Word;
use crate::s1mod::S1Complex;
use crate::sparse::SparseMap;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub schema_version: u32,
    /// `"Q"` or `"F_p"`.
    pub field: String,
    #[serde(default)]
    pub grading: Grading,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<CategoryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s1_complex: Option<S1Doc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enhancement: Option<EnhancementDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<SeriesDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cotrace: Option<SeriesDoc>,
    #[serde(default)]
    pub job: JobDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub label: String,
    pub degree: i64,
    pub source: String,
    pub target: String,
}

/// `μ(inputs) = Σ coeff · label`, inputs in written order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MuDoc {
    pub inputs: Vec<String>,
    pub output: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    pub objects: Vec<String>,
    pub generators: Vec<GeneratorDoc>,
    pub mu: Vec<MuDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub units: BTreeMap<String, String>,
}

/// `(target, source, coeff)` by basis label.
pub type EntryDoc = (String, String, String);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct S1Doc {
    pub basis: Vec<(String, i64)>,
    /// `deltas[k]` lists the entries of `δ_k`.
    pub deltas: Vec<Vec<EntryDoc>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnhancementDoc {
    pub source: S1Doc,
    pub target: S1Doc,
    #[serde(default)]
    pub degree: i64,
    pub map: Vec<EntryDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub word: Vec<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub hat: bool,
    pub coeff: String,
}

/// `Σ_k terms[k] u^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDoc {
    pub n: i64,
    pub terms: Vec<Vec<TermDoc>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobDoc {
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(i64, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flavor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_max: Option<usize>,
}

pub fn parse_field(s: &str) -> Result<Field> {
    match s {
        "Q" => Ok(Field::Rational),
        _ => {
            let p = s
                .strip_prefix("F_")
                .and_then(|p| p.parse::<u64>().ok())
                .ok_or_else(|| Error::Input(format!("unknown field {s:?}; expected \"Q\" or \"F_p\"")))?;
            Field::prime(p)
        }
    }
}

impl InputDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: InputDocument = serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed input: {e}")))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::Input(format!("unsupported schema_version {}", doc.schema_version)));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize") + "\n"
    }

    pub fn field(&self) -> Result<Field> {
        parse_field(&self.field)
    }

    pub fn category(&self) -> Result<AInfCategory> {
        let doc = self.category.as_ref().ok_or_else(|| Error::Input("document has no category".into()))?;
        let f = self.field()?;
        let mut b = CategoryBuilder::new();
        for o in &doc.objects {
            b = b.object(o);
        }
        for g in &doc.generators {
            for end in [&g.source, &g.target] {
                if !doc.objects.contains(end) {
                    return Err(Error::Input(format!("generator {} refers to unknown object {end:?}", g.label)));
                }
            }
            b = b.generator(&g.label, g.degree, &g.source, &g.target);
        }
        for m in &doc.mu {
            let out = m.output.iter().map(|(c, l)| Ok((f.parse(c)?, l.clone()))).collect::<Result<Vec<_>>>()?;
            b = b.mu_scalar(m.inputs.clone(), out);
        }
        for (o, e) in &doc.units {
            b = b.unit(o, e);
        }
        b.build(f, self.grading)
    }

    pub fn s1_complex(&self) -> Result<S1Complex> {
        let doc = self.s1_complex.as_ref().ok_or_else(|| Error::Input("document has no s1_complex".into()))?;
        s1_from_doc(self.field()?, self.grading, doc)
    }

    /// `(f_0, M, N)` for the enhancement problem.
    pub fn enhancement(&self) -> Result<(SparseMap, S1Complex, S1Complex)> {
        let doc = self.enhancement.as_ref().ok_or_else(|| Error::Input("document has no enhancement".into()))?;
        let f = self.field()?;
        let m = s1_from_doc(f, self.grading, &doc.source)?;
        let n = s1_from_doc(f, self.grading, &doc.target)?;
        let map = entries_to_map(f, &doc.map, m.space(), n.space(), doc.degree)?;
        Ok((map, m, n))
    }

    pub fn trace(&self, c: &AInfCategory) -> Result<TraceData> {
        let doc = self.trace.as_ref().ok_or_else(|| Error::Input("document has no trace".into()))?;
        TraceData::new(c, doc.n, series_terms(c, doc)?)
    }

    pub fn cotrace(&self, c: &AInfCategory) -> Result<CotraceData> {
        let doc = self.cotrace.as_ref().ok_or_else(|| Error::Input("document has no cotrace".into()))?;
        CotraceData::new(c, doc.n, series_terms(c, doc)?)
    }

    /// The document obtained by re-serializing every parsed part.
    pub fn canonical(&self) -> Result<InputDocument> {
        let f = self.field()?;
        let mut out = self.clone();
        if self.category.is_some() {
            let c = self.category()?;
            out.category = Some(category_doc(&c));
            if let Some(t) = &self.trace {
                out.trace = Some(series_doc(&c, t.n, &self.trace(&c)?.terms));
            }
            if let Some(t) = &self.cotrace {
                out.cotrace = Some(series_doc(&c, t.n, &self.cotrace(&c)?.terms));
            }
        }
        if self.s1_complex.is_some() {
            out.s1_complex = Some(s1_doc(&self.s1_complex()?));
        }
        if let Some(e) = &self.enhancement {
            let (map, m, n) = self.enhancement()?;
            out.enhancement = Some(EnhancementDoc { source: s1_doc(&m), target: s1_doc(&n), degree: e.degree, map: map_doc(&f, &map, m.space(), n.space()) });
        }
        out.field = f.to_string();
        Ok(out)
    }
}

fn label_index(space: &GradedSpace, label: &str) -> Result<usize> {
    space.index_of(label).ok_or_else(|| Error::Input(format!("unknown basis label {label:?}")))
}

fn entries_to_map(f: Field, entries: &[EntryDoc], src: &GradedSpace, tgt: &GradedSpace, degree: i64) -> Result<SparseMap> {
    let trip = entries
        .iter()
        .map(|(t, s, x)| Ok((label_index(tgt, t)?, label_index(src, s)?, f.parse(x)?)))
        .collect::<Result<Vec<_>>>()?;
    SparseMap::from_triplets(&f, src.dim(), tgt.dim(), degree, trip)
}

fn s1_from_doc(f: Field, grading: Grading, doc: &S1Doc) -> Result<S1Complex> {
    let space = GradedSpace::new(grading, doc.basis.clone())?;
    let deltas = doc
        .deltas
        .iter()
        .enumerate()
        .map(|(k, e)| entries_to_map(f, e, &space, &space, 1 - 2 * k as i64))
        .collect::<Result<Vec<_>>>()?;
    S1Complex::new(f, space, deltas)
}

fn series_terms(c: &AInfCategory, doc: &SeriesDoc) -> Result<Vec<Functional>> {
    let f = c.field();
    doc.terms
        .iter()
        .map(|t| {
            t.iter()
                .map(|x| {
                    let gens = x
                        .word
                        .iter()
                        .map(|l| c.index_of(l).ok_or_else(|| Error::Input(format!("unknown generator {l:?}"))))
                        .collect::<Result<Vec<_>>>()?;
                    Ok((Word { hat: x.hat, gens }, f.parse(&x.coeff)?))
                })
                .collect()
        })
        .collect()
}

pub fn category_doc(c: &AInfCategory) -> CategoryDoc {
    let f = c.field();
    let obj = |i: usize| c.objects()[i].clone();
    CategoryDoc {
        objects: c.objects().to_vec(),
        generators: c
            .generators()
            .iter()
            .map(|g| GeneratorDoc { label: g.label.clone(), degree: g.degree, source: obj(g.source), target: obj(g.target) })
            .collect(),
        mu: c
            .mu_entries()
            .map(|(k, v)| MuDoc {
                inputs: k.iter().map(|&g| c.label(g).to_string()).collect(),
                output: v.iter().map(|(g, x)| (f.format(x), c.label(*g).to_string())).collect(),
            })
            .collect(),
        units: c.units().map(|u| u.iter().enumerate().map(|(x, &e)| (obj(x), c.label(e).to_string())).collect()).unwrap_or_default(),
    }
}

fn map_doc(f: &Field, m: &SparseMap, src: &GradedSpace, tgt: &GradedSpace) -> Vec<EntryDoc> {
    m.entries().map(|(r, c, x)| (tgt.label(r).to_string(), src.label(c).to_string(), f.format(x))).collect()
}

pub fn s1_doc(m: &S1Complex) -> S1Doc {
    let f = m.field();
    S1Doc {
        basis: m.space().basis().iter().map(|b| (b.label.clone(), b.degree)).collect(),
        deltas: m.deltas().iter().map(|d| map_doc(&f, d, m.space(), m.space())).collect(),
    }
}

pub fn series_doc(c: &AInfCategory, n: i64, terms: &[Functional]) -> SeriesDoc {
    let f = c.field();
    SeriesDoc {
        n,
        terms: terms
            .iter()
            .map(|t| {
                t.iter()
                    .map(|(w, x)| TermDoc { word: w.gens.iter().map(|&g| c.label(g).to_string()).collect(), hat: w.hat, coeff: f.format(x) })
                    .collect()
            })
            .collect(),
    }
}

fn empty_document(f: Field, grading: Grading) -> InputDocument {
    InputDocument {
        schema_version: SCHEMA_VERSION,
        field: f.to_string(),
        grading,
        category: None,
        s1_complex: None,
        enhancement: None,
        trace: None,
        cotrace: None,
        job: JobDoc::default(),
    }
}

/// A document holding only `c`.
pub fn category_document(c: &AInfCategory) -> InputDocument {
    InputDocument { category: Some(category_doc(c)), ..empty_document(c.field(), c.grading()) }
}

/// A document holding only `m`.
pub fn s1_document(m: &S1Complex) -> InputDocument {
    InputDocument { s1_complex: Some(s1_doc(m)), ..empty_document(m.field(), m.space().grading()) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::check_ainfty;
    use crate::ainfty::fixtures::*;
    use crate::s1mod::fixtures::xy;

    #[test]
    fn fixtures_round_trip() {
        for c in [ground_field(Field::Rational), exterior(Field::Rational, 1), quiver(Field::Prime(5)), a_p(Field::Prime(3), 3).unwrap()] {
            let text = category_document(&c).to_json();
            let doc = InputDocument::from_json(&text).unwrap();
            let back = doc.category().unwrap();
            assert!(check_ainfty(&back).passed);
            assert_eq!(doc.canonical().unwrap().to_json(), text);
        }
        let text = s1_document(&xy(Field::Rational)).to_json();
        let doc = InputDocument::from_json(&text).unwrap();
        assert_eq!(doc.canonical().unwrap().to_json(), text);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(InputDocument::from_json("{").is_err());
        assert!(InputDocument::from_json(r#"{"schema_version": 2, "field": "Q"}"#).is_err());
        assert!(InputDocument::from_json(r#"{"schema_version": 1, "field": "Q", "extra": 0}"#).is_err());
        let doc = InputDocument::from_json(r#"{"schema_version": 1, "field": "F_4"}"#).unwrap();
        assert!(doc.field().is_err());
        let doc = InputDocument::from_json(
            r#"{"schema_version": 1, "field": "Q", "category": {"objects": ["X"], "generators": [{"label": "a", "degree": 0, "source": "X", "target": "Y"}], "mu": []}}"#,
        )
        .unwrap();
        assert!(matches!(doc.category(), Err(Error::Input(_))));
    }

    #[test]
    fn scalars_are_exact() {
        let doc = InputDocument::from_json(
            r#"{"schema_version": 1, "field": "Q", "category": {"objects": ["X"], "generators": [{"label": "e", "degree": 0, "source": "X", "target": "X"}], "mu": [{"inputs": ["e", "e"], "output": [["2/3", "e"]]}]}}"#,
        )
        .unwrap();
        let c = doc.category().unwrap();
        let v = c.mu(&[0, 0]).unwrap();
        assert_eq!(Field::Rational.format(&v[&0]), "2/3");
    }
}
