//! Small categories used throughout the test suite and shipped with the CLI.

use crate::ainfty::{AInfCategory, AInfFunctor, CategoryBuilder};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::Grading;
use crate::sparse::SparseVec;

/// One object `pt` with `hom = k·e`, `μ²(e, e) = e`, `e` a strict unit.
pub fn ground_field(f: Field) -> AInfCategory {
    CategoryBuilder::new()
        .object("pt")
        .generator("e", 0, "pt", "pt")
        .mu(&["e", "e"], &[(1, "e")])
        .unit("pt", "e")
        .build(f, Grading::Z)
        .expect("ground field fixture")
}

fn exterior_builder(n: i64) -> CategoryBuilder {
    assert!(n % 2 != 0, "exterior generator must have odd degree");
    CategoryBuilder::new()
        .object("X")
        .generator("1", 0, "X", "X")
        .generator("eps", n, "X", "X")
        .mu(&["1", "1"], &[(1, "1")])
        .mu(&["1", "eps"], &[(-1, "eps")])
        .mu(&["eps", "1"], &[(1, "eps")])
}

/// `Λ(ε)` with `|ε| = n` odd and strict unit `1`.
pub fn exterior(f: Field, n: i64) -> AInfCategory {
    exterior_builder(n).unit("X", "1").build(f, Grading::Z).expect("exterior fixture")
}

/// `Λ(ε)` with `1` present but not designated as a strict unit.
pub fn exterior_nonunital(f: Field, n: i64) -> AInfCategory {
    exterior_builder(n).build(f, Grading::Z).expect("exterior fixture")
}

/// `Λ(ε)` in Z/2-graded mode.
pub fn exterior_z2(f: Field) -> AInfCategory {
    exterior_builder(1).unit("X", "1").build(f, Grading::Z2).expect("exterior fixture")
}

/// The augmentation ideal `⟨x⟩` of `k[x]/x²`: one generator of degree `deg`, all `μ` zero.
/// Adjoining units gives `k[x]/x²` itself.
pub fn square_zero(f: Field, deg: i64) -> AInfCategory {
    CategoryBuilder::new().object("X").generator("x", deg, "X", "X").build(f, Grading::Z).expect("square-zero fixture")
}

fn a_p_builder(p: usize) -> Result<CategoryBuilder> {
    if p < 2 {
        return Err(Error::Input("A_p needs p ≥ 2".into()));
    }
    let mut b = CategoryBuilder::new()
        .object("X")
        .generator("x", 1, "X", "X")
        .generator("y", 2, "X", "X")
        .generator("z", 3, "X", "X");
    b = b.mu(&vec!["x"; p], &[(1, "y")]);
    for pos in 0..p {
        let mut key = vec!["x"; p];
        key[pos] = "y";
        b = b.mu(&key, &[(1, "z")]);
    }
    Ok(b)
}

/// Non-unital `A_p`: `μ^p(x, …, x) = y` and `μ^p` of `p − 1` copies of `x` and one `y` is `z`.
/// The only nonzero relation has arity `2p − 1` and equals `p·z`.
pub fn a_p_nonunital(f: Field, p: usize) -> Result<AInfCategory> {
    a_p_builder(p)?.build(f, Grading::Z)
}

/// `A_p` with an adjoined strict unit `e`.
pub fn a_p(f: Field, p: usize) -> Result<AInfCategory> {
    let mut b = a_p_builder(p)?.generator("e", 0, "X", "X").unit("X", "e").mu(&["e", "e"], &[(1, "e")]);
    for (y, deg) in [("x", 1), ("y", 2), ("z", 3)] {
        let s = if deg % 2 == 0 { 1 } else { -1 };
        b = b.mu(&["e", y], &[(s, y)]).mu(&[y, "e"], &[(1, y)]);
    }
    b.build(f, Grading::Z)
}

/// Two objects `A`, `B` with units and one arrow `a: A → B` of degree 0.
pub fn quiver(f: Field) -> AInfCategory {
    CategoryBuilder::new()
        .object("A")
        .object("B")
        .generator("eA", 0, "A", "A")
        .generator("eB", 0, "B", "B")
        .generator("a", 0, "A", "B")
        .mu(&["eA", "eA"], &[(1, "eA")])
        .mu(&["eB", "eB"], &[(1, "eB")])
        .mu(&["eB", "a"], &[(1, "a")])
        .mu(&["a", "eA"], &[(1, "a")])
        .unit("A", "eA")
        .unit("B", "eB")
        .build(f, Grading::Z)
        .expect("quiver fixture")
}

fn images(f: &Field, c: &AInfCategory, target: &AInfCategory, rule: &[(&str, i64, &str)]) -> Vec<SparseVec> {
    (0..c.generators().len())
        .map(|g| {
            let (_, s, out) = rule.iter().find(|(l, _, _)| *l == c.label(g)).expect("functor rule covers every generator");
            [(target.index_of(out).expect("image generator"), f.from_i64(*s))].into_iter().collect()
        })
        .collect()
}

/// Quiver endofunctor with `a ↦ 2a` and units fixed.
pub fn quiver_rescale(f: Field) -> AInfFunctor {
    let c = quiver(f);
    let im = images(&f, &c, &c, &[("eA", 1, "eA"), ("eB", 1, "eB"), ("a", 2, "a")]);
    AInfFunctor::strict(c.clone(), c, vec![0, 1], im).expect("rescale functor")
}

/// Quiver → ground field, collapsing both objects and sending every generator to `e`.
pub fn quiver_collapse(f: Field) -> AInfFunctor {
    let c = quiver(f);
    let g = ground_field(f);
    let im = images(&f, &c, &g, &[("eA", 1, "e"), ("eB", 1, "e"), ("a", 1, "e")]);
    AInfFunctor::strict(c, g, vec![0, 0], im).expect("collapse functor")
}

/// `x ↦ 2x` on unital `A_p`, other generators fixed. Not an A∞ functor without corrections.
pub fn a_p_rescale(f: Field, p: usize) -> Result<AInfFunctor> {
    let c = a_p(f, p)?;
    let im = images(&f, &c, &c, &[("x", 2, "x"), ("y", 1, "y"), ("z", 1, "z"), ("e", 1, "e")]);
    AInfFunctor::strict(c.clone(), c, vec![0], im)
}
