//! Command drivers behind the `cyclic` binary, and their reports.
//!
//! A report has a canonical JSON section, byte-identical across runs, and a timing trailer.

use std::time::Duration;

use serde::Serialize;
use serde_json::{json, Value};

use crate::ainfty::{check_ainfty, check_strict_units};
use crate::cy::{smooth_cy_lift_check, strong_proper_cy_check, weak_proper_cy_check, weak_smooth_cy_check};
use crate::cyclic::{degeneration_check, hc, nchdr_pages, nu_s1_complex, Degeneration, Model};
use crate::equivariant::{equivariant, gysin_les, norm_les, Flavor};
use crate::error::{Error, Result};
use crate::hochschild::{build_nu_unchecked, hh, Sector};
use crate::io::{InputDocument, SCHEMA_VERSION};
use crate::report::Verdict;
use crate::s1mod::{find_enhancement, Enhancement};
use crate::s1mod::{validate_s1, S1Complex, S1Morphism};

pub const DEFAULT_LENGTH: usize = 4;
pub const DEFAULT_WINDOW: (i64, i64) = (0, 4);
pub const DEFAULT_JMAX: usize = 3;

/// Exit codes of the binary.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const UNCERTIFIED: i32 = 3;
}

/// Flags shared by the commands; unset values fall back to the document's `job` section.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub length: Option<usize>,
    pub window: Option<(i64, i64)>,
    pub flavor: Option<String>,
    pub model: Option<String>,
    pub r_max: Option<usize>,
    pub j_max: Option<usize>,
    pub mode: Option<String>,
}

impl Options {
    fn length(&self, doc: &InputDocument) -> usize {
        self.length.or(doc.job.length).unwrap_or(DEFAULT_LENGTH)
    }

    fn window(&self, doc: &InputDocument) -> (i64, i64) {
        self.window.or(doc.job.window).unwrap_or(DEFAULT_WINDOW)
    }

    fn flavor(&self, doc: &InputDocument) -> Option<String> {
        self.flavor.clone().or_else(|| doc.job.flavor.clone())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub input: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified: Option<bool>,
    pub verdicts: Vec<(String, Verdict)>,
    pub result: Value,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.verdicts.iter().any(|(_, v)| *v == Verdict::Fail)
    }

    pub fn exit_code(&self, require_certified: bool) -> i32 {
        if require_certified && self.certified == Some(false) {
            exit::UNCERTIFIED
        } else if self.failed() {
            exit::FAIL
        } else {
            exit::PASS
        }
    }

    /// The canonical section.
    pub fn canonical(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn trailer(&self) -> String {
        format!("# elapsed_ms: {}\n", self.elapsed.as_millis())
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

/// Run `command` on a parsed document. `input` is echoed into the report.
pub fn run(command: &str, doc: &InputDocument, input: &str, opts: &Options) -> Result<Report> {
    let start = std::time::Instant::now();
    let (echo, certified, verdicts, result) = match command {
        "validate" => validate(doc)?,
        "hh" => cmd_hh(doc, opts)?,
        "hc" => cmd_hc(doc, opts)?,
        "equiv" => cmd_equiv(doc, opts)?,
        "enhance" => cmd_enhance(doc, opts)?,
        "ss" => cmd_ss(doc, opts)?,
        "cy" => cmd_cy(doc, opts)?,
        _ => return Err(Error::Input(format!("unknown command {command:?}"))),
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command: format!("{command}{echo}"),
        input: input.to_string(),
        certified,
        verdicts,
        result,
        elapsed: start.elapsed(),
    })
}

type Outcome = (String, Option<bool>, Vec<(String, Verdict)>, Value);

fn validate(doc: &InputDocument) -> Result<Outcome> {
    let mut verdicts = Vec::new();
    let mut reports = Vec::new();
    if doc.category.is_some() {
        let c = doc.category()?;
        reports.push(check_ainfty(&c));
        if c.units().is_some() {
            reports.push(check_strict_units(&c)?);
        }
    }
    if doc.s1_complex.is_some() {
        reports.push(validate_s1(&doc.s1_complex()?));
    }
    if doc.enhancement.is_some() {
        let (_, m, n) = doc.enhancement()?;
        reports.push(validate_s1(&m));
        reports.push(validate_s1(&n));
    }
    if reports.is_empty() {
        return Err(Error::Input("nothing to validate".into()));
    }
    for r in &reports {
        verdicts.push((r.check.clone(), Verdict::from_bool(r.passed)));
    }
    Ok((String::new(), None, verdicts, to_value(&reports)))
}

fn cmd_hh(doc: &InputDocument, opts: &Options) -> Result<Outcome> {
    let c = doc.category()?;
    let (l, w) = (opts.length(doc), opts.window(doc));
    let check = hh(&c, l, w, Sector::Check)?;
    let nu = hh(&c, l, w, Sector::Nu)?;
    let certified = check.certified && nu.certified;
    let echo = format!(" --L {l} --window {} {}", w.0, w.1);
    Ok((echo, Some(certified), Vec::new(), json!({ "check": check, "nu": nu })))
}

fn cmd_hc(doc: &InputDocument, opts: &Options) -> Result<Outcome> {
    let c = doc.category()?;
    let (l, w) = (opts.length(doc), opts.window(doc));
    let flavor = Flavor::parse(&opts.flavor(doc).unwrap_or_else(|| "orbits".into()))?;
    let model = match opts.model.as_deref().unwrap_or("auto") {
        "auto" => Model::auto(&c),
        s => Model::parse(s)?,
    };
    let table = hc(&c, flavor, model, l, w)?;
    let echo = format!(" --flavor {flavor} --model {} --L {l} --window {} {}", to_value(&model).as_str().unwrap_or(""), w.0, w.1);
    Ok((echo, Some(table.certified), Vec::new(), json!({ "flavor": flavor, "model": model, "table": table })))
}

fn cmd_equiv(doc: &InputDocument, opts: &Options) -> Result<Outcome> {
    let m = doc.s1_complex()?;
    let w = opts.window(doc);
    let flavors = match opts.flavor(doc) {
        Some(s) => vec![Flavor::parse(&s)?],
        None => vec![Flavor::Orbits, Flavor::Fixed, Flavor::Tate],
    };
    let mut dims = serde_json::Map::new();
    for fl in &flavors {
        dims.insert(fl.to_string(), to_value(&equivariant(&m, *fl, w)?.complex.betti(w)?));
    }
    let gysin = gysin_les(&m, w)?;
    let norm = norm_les(&m, w)?;
    let verdicts = vec![("gysin".to_string(), Verdict::from_bool(gysin.passed())), ("norm".to_string(), Verdict::from_bool(norm.passed()))];
    let echo = format!(" --window {} {}", w.0, w.1);
    Ok((echo, None, verdicts, json!({ "dims": dims, "gysin": gysin, "norm": norm })))
}

fn morphism_value(fm: &S1Morphism) -> Value {
    let f = fm.source().field();
    let terms: Vec<Value> = fm
        .terms()
        .iter()
        .map(|t| {
            let entries: Vec<(String, String, String)> = t
                .entries()
                .map(|(r, c, x)| (fm.target().space().label(r).to_string(), fm.source().space().label(c).to_string(), f.format(x)))
                .collect();
            to_value(&entries)
        })
        .collect();
    json!({ "degree": fm.degree(), "terms": terms })
}

fn cmd_enhance(doc: &InputDocument, opts: &Options) -> Result<Outcome> {
    let (f0, m, n) = doc.enhancement()?;
    let j_max = opts.j_max.or(doc.job.j_max).unwrap_or(DEFAULT_JMAX);
    let echo = format!(" --jmax {j_max}");
    Ok(match find_enhancement(&f0, &m, &n, j_max)? {
        Enhancement::Closed(fm) => {
            (echo, None, vec![("enhancement".into(), Verdict::Pass)], json!({ "status": "closed", "morphism": morphism_value(&fm) }))
        }
        Enhancement::Obstructed(o) => {
            let v = json!({
                "status": "obstructed",
                "stage": o.stage,
                "class": o.describe(),
                "beyond_jmax": o.beyond_jmax,
                "partial": morphism_value(&o.partial),
            });
            (echo, None, vec![("enhancement".into(), Verdict::Fail)], v)
        }
    })
}

fn ss_complex(doc: &InputDocument, l: usize, w: (i64, i64)) -> Result<(S1Complex, Option<bool>)> {
    if doc.s1_complex.is_some() {
        return Ok((doc.s1_complex()?, None));
    }
    let c = doc.category()?;
    let nu = build_nu_unchecked(&c, l, w)?;
    let cert = nu.certificate().orbits;
    Ok((nu_s1_complex(&nu)?, Some(cert)))
}

fn cmd_ss(doc: &InputDocument, opts: &Options) -> Result<Outcome> {
    let (l, w) = (opts.length(doc), opts.window(doc));
    let (m, certified) = ss_complex(doc, l, w)?;
    let mut rep = degeneration_check(&m, w)?;
    let r_max = opts.r_max.or(doc.job.r_max);
    if r_max.is_some() {
        rep.pages = nchdr_pages(&m, r_max, w)?;
    }
    let verdicts = vec![
        ("degeneration".to_string(), Verdict::from_bool(rep.verdict == Degeneration::Degenerate)),
        ("criteria_agree".to_string(), Verdict::from_bool(rep.criteria_agree())),
    ];
    let mut echo = format!(" --window {} {}", w.0, w.1);
    if let Some(r) = r_max {
        echo += &format!(" --rmax {r}");
    }
    if certified.is_some() {
        echo += &format!(" --L {l}");
    }
    Ok((echo, certified, verdicts, to_value(&rep)))
}

fn cmd_cy(doc: &InputDocument, opts: &Options) -> Result<Outcome> {
    let c = doc.category()?;
    let (l, w) = (opts.length(doc), opts.window(doc));
    let mode = opts.mode.clone().unwrap_or_else(|| "proper".into());
    let echo = format!(" --mode {mode} --L {l} --window {} {}", w.0, w.1);
    match mode.as_str() {
        "proper" => {
            let t = doc.trace(&c)?;
            let r = weak_proper_cy_check(&c, t.n, t.tr0())?;
            Ok((echo, None, vec![("weak_proper".into(), r.verdict)], to_value(&r)))
        }
        "strong-proper" => {
            let t = doc.trace(&c)?;
            let r = strong_proper_cy_check(&c, &t, l)?;
            let v = vec![
                ("chain_map".into(), Verdict::from_bool(r.chain_map)),
                ("weak_proper".into(), r.weak.verdict),
                ("strong_proper".into(), r.verdict),
            ];
            Ok((echo, None, v, to_value(&r)))
        }
        "smooth" => {
            let t = doc.cotrace(&c)?;
            let r = weak_smooth_cy_check(&c, t.n, t.sigma(), None, l, w)?;
            Ok((echo, Some(r.certified), vec![("weak_smooth".into(), r.verdict)], to_value(&r)))
        }
        "smooth-lift" => {
            let t = doc.cotrace(&c)?;
            let r = smooth_cy_lift_check(&c, &t, l, w)?;
            let cert = r.weak.as_ref().map(|x| x.certified);
            Ok((echo, cert, vec![("cycle".into(), Verdict::from_bool(r.cycle)), ("smooth_lift".into(), r.verdict)], to_value(&r)))
        }
        _ => Err(Error::Input(format!("unknown cy mode {mode:?}"))),
    }
}
