#![allow(dead_code, clippy::needless_range_loop)]

use grope_norm::seifert::{IntMatrix, SeifertMatrix};
use grope_norm::{BoundaryKind, Branch, BranchGrope, MultiGrope, Rational, SymmetricTree};
use rand::Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Random symmetric tree of exact height, genera in `1..=max_genus`.
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

pub fn branch(rng: &mut impl Rng, max_length: u32, max_genus: u64) -> Branch {
    let length = rng.gen_range(0..=max_length);
    if length == 0 {
        Branch::bare()
    } else {
        Branch::pair(tree(rng, length, max_genus), tree(rng, length, max_genus))
    }
}

pub fn branch_grope(rng: &mut impl Rng, kind: BoundaryKind, max_branches: usize) -> BranchGrope {
    let n = rng.gen_range(0..=max_branches);
    BranchGrope::new(kind, (0..n).map(|_| branch(rng, 3, 3)))
}

pub fn multi_grope(rng: &mut impl Rng, kind: BoundaryKind, components: usize) -> MultiGrope {
    MultiGrope::new(
        (0..components)
            .map(|_| branch_grope(rng, kind, 4))
            .collect(),
    )
}

/// Random rational `q ≥ 1`.
pub fn random_q(rng: &mut impl Rng) -> Rational {
    let d = rng.gen_range(1..=7i64);
    let n = rng.gen_range(d..=5 * d);
    q(n, d)
}

/// `S + U` with `S` symmetric and `U` the standard symplectic upper half,
/// so `A − Aᵀ` is the standard symplectic form; optionally conjugated by
/// a random unimodular matrix.
pub fn seifert(rng: &mut impl Rng, genus: usize, entry: i64, conjugate: bool) -> SeifertMatrix {
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
    if conjugate && n > 0 {
        let p = unimodular(rng, n, 3);
        grope_norm::seifert::change_basis(&a, &p).expect("unimodular")
    } else {
        a
    }
}

/// Product of elementary row operations.
pub fn unimodular(rng: &mut impl Rng, n: usize, steps: usize) -> IntMatrix {
    let mut rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i64).collect())
        .collect();
    if n < 2 {
        return IntMatrix::from_i64(&rows);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let c = if rng.gen_bool(0.5) { 1 } else { -1 };
        for k in 0..n {
            rows[i][k] += c * rows[j][k];
        }
    }
    IntMatrix::from_i64(&rows)
}
