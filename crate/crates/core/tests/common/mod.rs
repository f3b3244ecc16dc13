#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cyclic_core::field::Field;
use cyclic_core::graded::{GradedSpace, Grading};
use cyclic_core::s1mod::S1Complex;
use cyclic_core::sparse::SparseMap;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random strict mixed complex (`δ_k = 0` for `k ≥ 2`) of dimension at most `max_dim`
/// with degrees in `[-4, 4]`.
///
/// It is a sum of blocks: a point, a `δ_0` pair, a `δ_1` pair and the square
/// `a ↦ δ_0 a = b, δ_1 a = c, δ_0 c = e = -δ_1 b`, conjugated by random elementary
/// degree-preserving basis changes.
pub fn random_mixed(f: Field, max_dim: usize, rng: &mut ChaCha8Rng) -> S1Complex {
    let mut degs: Vec<i64> = Vec::new();
    let mut d0: Vec<(usize, usize, i64)> = Vec::new();
    let mut d1: Vec<(usize, usize, i64)> = Vec::new();
    loop {
        let kind = rng.gen_range(0..4);
        let size = [1, 2, 2, 4][kind];
        if degs.len() + size > max_dim {
            if degs.is_empty() {
                continue;
            }
            break;
        }
        let d = rng.gen_range(-3..=3);
        let i = degs.len();
        match kind {
            0 => degs.push(d),
            1 => {
                degs.extend([d, d + 1]);
                d0.push((i + 1, i, 1));
            }
            2 => {
                degs.extend([d, d - 1]);
                d1.push((i + 1, i, 1));
            }
            _ => {
                degs.extend([d, d + 1, d - 1, d]);
                d0.push((i + 1, i, 1));
                d1.push((i + 2, i, 1));
                d0.push((i + 3, i + 2, 1));
                d1.push((i + 3, i + 1, -1));
            }
        }
        if rng.gen_bool(0.3) {
            break;
        }
    }
    let n = degs.len();
    let build = |trip: &[(usize, usize, i64)], deg| {
        SparseMap::from_triplets(&f, n, n, deg, trip.iter().map(|&(r, c, v)| (r, c, f.from_i64(v)))).unwrap()
    };
    let (mut m0, mut m1) = (build(&d0, 1), build(&d1, -1));
    for _ in 0..2 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j || degs[i] != degs[j] {
            continue;
        }
        let c = rng.gen_range(-2i64..=2);
        let e = build(&[(i, i, 1), (j, j, 1), (i, j, c)].iter().copied().chain((0..n).filter(|&k| k != i && k != j).map(|k| (k, k, 1))).collect::<Vec<_>>(), 0);
        let e_inv = build(&[(i, i, 1), (j, j, 1), (i, j, -c)].iter().copied().chain((0..n).filter(|&k| k != i && k != j).map(|k| (k, k, 1))).collect::<Vec<_>>(), 0);
        m0 = e.compose(&f, &m0).compose(&f, &e_inv).with_degree(1);
        m1 = e.compose(&f, &m1).compose(&f, &e_inv).with_degree(-1);
    }
    let basis = degs.iter().enumerate().map(|(i, &d)| (format!("m{i}"), d)).collect();
    let space = GradedSpace::new(Grading::Z, basis).unwrap();
    S1Complex::new(f, space, vec![m0, m1]).unwrap()
}

/// `(golden, exit code, arguments)`.
pub const GOLDENS: &[(&str, i32, &[&str])] = &[
    ("validate_exterior", 0, &["validate", "exterior.json"]),
    ("validate_a3_f3", 0, &["validate", "a3_f3.json"]),
    ("hh_exterior", 0, &["hh", "exterior.json"]),
    ("hh_square_zero", 0, &["hh", "square_zero.json"]),
    ("hc_minus_ground_field", 0, &["hc", "ground_field.json", "--flavor", "minus", "--window", "0", "10"]),
    ("hc_plus_square_zero", 0, &["hc", "square_zero.json"]),
    ("hc_quiver", 0, &["hc", "quiver.json", "--flavor", "plus"]),
    ("equiv_trivial", 0, &["equiv", "trivial.json"]),
    ("equiv_xy", 0, &["equiv", "xy.json"]),
    ("enhance_obstructed", 1, &["enhance", "enhance_obstructed.json"]),
    ("ss_xy", 1, &["ss", "xy.json"]),
    ("ss_trivial", 0, &["ss", "trivial.json"]),
    ("cy_proper_exterior", 0, &["cy", "exterior.json", "--mode", "proper"]),
    ("cy_strong_proper_exterior", 0, &["cy", "exterior.json", "--mode", "strong-proper"]),
    ("cy_proper_zero_trace", 1, &["cy", "exterior_zero_trace.json", "--mode", "proper"]),
    ("cy_smooth_ground_field", 0, &["cy", "ground_field.json", "--mode", "smooth", "--window", "0", "0"]),
];

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn cyclic(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cyclic")).args(args).current_dir(fixtures()).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf-8 report"))
}

pub fn canonical(report: &str) -> String {
    report.lines().filter(|l| !l.starts_with("# ")).map(|l| format!("{l}\n")).collect()
}
