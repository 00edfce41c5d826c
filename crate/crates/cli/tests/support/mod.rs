#![allow(dead_code, clippy::needless_range_loop)]

use std::path::PathBuf;

use grope_norm::operators::InfectionOperator;
use grope_norm::seifert::{change_basis, IntMatrix, SeifertMatrix};
use grope_norm::{BoundaryKind, Branch, BranchGrope, MultiGrope, Rational, SymmetricTree};
use rand::Rng;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn random_q(rng: &mut impl Rng) -> Rational {
    let d = rng.gen_range(1..=7i64);
    q(rng.gen_range(d..=5 * d), d)
}

pub fn tree(rng: &mut impl Rng, height: u32, max_genus: u64) -> SymmetricTree {
    let genus = rng.gen_range(1..=max_genus);
    if height == 1 {
        return SymmetricTree::leaf(genus);
    }
    let children = (0..2 * genus)
        .map(|_| tree(rng, height - 1, max_genus))
        .collect();
    SymmetricTree::new(genus, children)
}

pub fn branch_grope(rng: &mut impl Rng, kind: BoundaryKind, max_branches: usize) -> BranchGrope {
    let n = rng.gen_range(0..=max_branches);
    BranchGrope::new(
        kind,
        (0..n).map(|_| match rng.gen_range(0..=3) {
            0 => Branch::bare(),
            len => Branch::pair(tree(rng, len, 3), tree(rng, len, 3)),
        }),
    )
}

pub fn multi_grope(rng: &mut impl Rng, kind: BoundaryKind, components: usize) -> MultiGrope {
    MultiGrope::new(
        (0..components)
            .map(|_| branch_grope(rng, kind, 4))
            .collect(),
    )
}

/// Algebraic winding zero operator with height one or two η-gropes.
pub fn winding_zero_operator(rng: &mut impl Rng) -> InfectionOperator {
    let outputs = rng.gen_range(1..=3);
    let slots = rng.gen_range(1..=3);
    let winding = (0..outputs)
        .map(|_| (0..slots).map(|_| rng.gen_range(0..=3)).collect())
        .collect();
    let h = rng.gen_range(1..=2);
    let eta = (0..slots).map(|_| Some(tree(rng, h, 2))).collect();
    InfectionOperator::new(
        winding,
        vec![vec![0; slots]; outputs],
        eta,
        rng.gen_bool(0.5),
    )
    .expect("valid operator")
}

/// Random Seifert matrix `S + U` of the given genus, conjugated by a
/// random unimodular matrix.
pub fn seifert(rng: &mut impl Rng, genus: usize, entry: i64) -> SeifertMatrix {
    let n = 2 * genus;
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(-entry..=entry);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    for i in 0..genus {
        rows[2 * i][2 * i + 1] += 1;
    }
    let a = SeifertMatrix::from_i64(&rows).expect("valid by construction");
    if n < 2 {
        return a;
    }
    let mut p: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i64).collect())
        .collect();
    for _ in 0..3 {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = if rng.gen_bool(0.5) { 1 } else { -1 };
        for k in 0..n {
            p[i][k] += c * p[j][k];
        }
    }
    change_basis(&a, &IntMatrix::from_i64(&p)).expect("unimodular")
}
