//! Small S¹-complexes.

use super::S1Complex;
use crate::field::Field;
use crate::graded::{GradedSpace, Grading};
use crate::sparse::SparseMap;

/// `(k, entries of δ_k)`.
type Delta<'a> = (usize, &'a [(usize, usize, i64)]);

fn build(f: Field, basis: &[(&str, i64)], deltas: &[Delta]) -> S1Complex {
    let n = basis.len();
    let space = GradedSpace::new(Grading::Z, basis.iter().map(|(l, d)| (l.to_string(), *d)).collect()).expect("fixture basis");
    let top = deltas.iter().map(|(k, _)| *k).max().unwrap_or(0);
    let ops = (0..=top)
        .map(|k| {
            let trip = deltas.iter().filter(|(j, _)| *j == k).flat_map(|(_, e)| e.iter());
            SparseMap::from_triplets(&f, n, n, 1 - 2 * k as i64, trip.map(|&(r, c, v)| (r, c, f.from_i64(v)))).expect("fixture operator")
        })
        .collect();
    S1Complex::new(f, space, ops).expect("fixture S¹-complex")
}

/// `k` with trivial action, in degree 0.
pub fn ground(f: Field) -> S1Complex {
    build(f, &[("1", 0)], &[])
}

/// `k·x ⊕ k·y`, `|x| = 0`, `|y| = −1`, `δ_1 x = y`: a free rank-one module.
pub fn xy(f: Field) -> S1Complex {
    build(f, &[("x", 0), ("y", -1)], &[(1, &[(1, 0, 1)])])
}

/// `k[Λ]/Λ²` acting on itself: `δ_1 1 = Λ`.
pub fn exterior_module(f: Field) -> S1Complex {
    build(f, &[("1", 0), ("Λ", -1)], &[(1, &[(1, 0, 1)])])
}

/// `k·y` in degree −1 with trivial action; target of the designed obstruction.
pub fn y_line(f: Field) -> S1Complex {
    build(f, &[("y", -1)], &[])
}

/// The zero complex.
pub fn zero(f: Field) -> S1Complex {
    build(f, &[], &[])
}

/// Projection `xy → y_line`, `x ↦ 0`, `y ↦ y`; a chain map with no enhancement.
pub fn project_to_y(f: Field) -> SparseMap {
    SparseMap::from_triplets(&f, 2, 1, 0, [(0, 1, f.one())]).expect("projection")
}
