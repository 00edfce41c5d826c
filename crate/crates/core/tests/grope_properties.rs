mod common;

use common::{multi_grope, q, random_q};
use grope_norm::format::{parse_grope, print_grope};
use grope_norm::{
    glue, length_q, split_branch, split_full, validate, BoundaryKind, Branch, BranchGrope,
    MultiGrope, Rational, Scalar, Side, SymmetricTree,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// Total genus per depth, found by walking every surface.
fn genera_by_walk(tree: &SymmetricTree, depth: usize, out: &mut Vec<u128>) {
    if out.len() <= depth {
        out.push(0);
    }
    out[depth] += tree.genus() as u128;
    for child in tree.children() {
        genera_by_walk(child, depth + 1, out);
    }
}

fn brute_force_length(g: &MultiGrope, q: &Rational) -> Rational {
    let mut total = Rational::from_int(0);
    for component in g.components() {
        for branch in component.branches() {
            let mut sums = Vec::new();
            for side in [branch.left(), branch.right()].into_iter().flatten() {
                genera_by_walk(side, 0, &mut sums);
            }
            let mut bracket = Rational::from_int(1);
            for s in &sums {
                bracket -= Rational::from_count(1) / Rational::from_count(*s);
            }
            total += bracket / q.powu(sums.len() as u32);
        }
    }
    total
}

fn lengths(g: &BranchGrope) -> Vec<u32> {
    let mut v: Vec<u32> = g.branches().map(|b| b.length()).collect();
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closed_formula_matches_brute_force(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = multi_grope(&mut r, BoundaryKind::KnotSlice, 2);
        let q = random_q(&mut r);
        prop_assert_eq!(length_q(&g, &q).unwrap(), brute_force_length(&g, &q));
    }

    #[test]
    fn length_is_nonnegative_and_zero_only_without_branches(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = multi_grope(&mut r, BoundaryKind::KnotSlice, 2);
        let len = length_q(&g, &random_q(&mut r)).unwrap();
        prop_assert!(len >= q(0, 1));
        prop_assert_eq!(len == q(0, 1), g.branch_count() == 0);
    }

    #[test]
    fn branch_terms_lie_in_the_genus_window(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = multi_grope(&mut r, BoundaryKind::KnotSlice, 1);
        let q = random_q(&mut r);
        for b in g.components()[0].branches() {
            let n = b.length();
            let t: Rational = b.term(&q);
            prop_assert!(t >= Rational::from_int(1) / (Rational::from_int(2) * q.clone()).powu(n));
            prop_assert!(t <= Rational::from_int(1) / q.powu(n));
        }
    }

    #[test]
    fn length_is_monotone_in_q(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = multi_grope(&mut r, BoundaryKind::KnotSlice, 2);
        let a = random_q(&mut r);
        let b = random_q(&mut r);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(length_q(&g, &hi).unwrap() <= length_q(&g, &lo).unwrap());
    }

    #[test]
    fn glue_is_additive(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = multi_grope(&mut r, BoundaryKind::Concordance, 2);
        let b = multi_grope(&mut r, BoundaryKind::Concordance, 2);
        let q = random_q(&mut r);
        let glued = glue(&a, &b).unwrap();
        prop_assert!(validate(&glued).is_ok());
        prop_assert_eq!(
            length_q(&glued, &q).unwrap(),
            length_q(&a, &q).unwrap() + length_q(&b, &q).unwrap()
        );
    }

    #[test]
    fn stage_sums_at_least_double(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = multi_grope(&mut r, BoundaryKind::KnotSlice, 2);
        for c in g.components() {
            for b in c.branches() {
                let mut prev = 1u128;
                for (k, s) in b.stage_sums().into_iter().enumerate() {
                    prop_assert!(s >= 2 * prev);
                    prop_assert!(s >= 1u128 << (k + 1));
                    prev = s;
                }
            }
        }
    }

    #[test]
    fn split_branch_invariants(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = multi_grope(&mut r, BoundaryKind::KnotSlice, 1).into_components().remove(0);
        for (i, b) in g.branches().enumerate() {
            for side in [Side::Left, Side::Right] {
                match b.side(side) {
                    Some(t) if t.genus() >= 2 => {
                        let s = split_branch(&g, i as u64, side).unwrap();
                        prop_assert!(validate(&MultiGrope::single(s.clone())).is_ok());
                        prop_assert_eq!(s.first_stage_genus(), g.first_stage_genus() + 1);
                        let mut expected = lengths(&g);
                        expected.push(b.length());
                        expected.sort();
                        prop_assert_eq!(lengths(&s), expected);
                    }
                    _ => prop_assert!(split_branch(&g, i as u64, side).is_err()),
                }
            }
        }
    }

    #[test]
    fn split_full_invariants(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = (seed % 4) as usize;
        let g = BranchGrope::new(BoundaryKind::KnotSlice, (0..n).map(|_| common::branch(&mut r, 3, 2)));
        let out = grope_norm::grope::split_full_traced(&g).unwrap();
        let s = &out.grope;
        prop_assert!(validate(&MultiGrope::single(s.clone())).is_ok());
        prop_assert_eq!(s.first_stage_genus(), g.first_stage_genus() + out.root_splits);
        for b in s.branches() {
            for side in [b.left(), b.right()].into_iter().flatten() {
                let mut genera = Vec::new();
                genera_by_walk(side, 0, &mut genera);
                // all surfaces above the first stage are genus one
                let surfaces = side.tip_count() / 2;
                prop_assert_eq!(genera.last().copied(), Some(surfaces));
                prop_assert!(all_genus_one(side));
            }
        }
        let mut before: Vec<u32> = lengths(&g);
        before.dedup();
        let mut after = lengths(s);
        after.dedup();
        prop_assert_eq!(before, after);
        prop_assert_eq!(split_full(s).unwrap(), s.clone());
    }

    #[test]
    fn text_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let kind = if seed % 2 == 0 { BoundaryKind::KnotSlice } else { BoundaryKind::Concordance };
        let g = multi_grope(&mut r, kind, 3);
        let text = print_grope(&g);
        let back = parse_grope(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(print_grope(&back), text);
    }

    #[test]
    fn float_and_exact_lengths_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = multi_grope(&mut r, BoundaryKind::KnotSlice, 2);
        let exact: Rational = length_q(&g, &q(3, 2)).unwrap();
        let float: f64 = length_q(&g, &1.5f64).unwrap();
        let exact_f = num_traits::ToPrimitive::to_f64(&exact).unwrap();
        prop_assert!((exact_f - float).abs() < 1e-9);
    }
}

fn all_genus_one(t: &SymmetricTree) -> bool {
    t.genus() == 1 && t.children().iter().all(all_genus_one)
}

#[test]
fn q_below_one_is_rejected() {
    let g = MultiGrope::single(BranchGrope::surface(BoundaryKind::KnotSlice, 1));
    assert!(length_q(&g, &q(1, 2)).is_err());
}

#[test]
fn genus_one_height_n_grope() {
    for n in 1..12u32 {
        let g = MultiGrope::single(BranchGrope::new(
            BoundaryKind::KnotSlice,
            [Branch::genus_one(n - 1)],
        ));
        let g = if n == 1 {
            MultiGrope::single(BranchGrope::surface(BoundaryKind::KnotSlice, 1))
        } else {
            g
        };
        assert_eq!(length_q(&g, &q(1, 1)).unwrap(), q(1, 1 << (n - 1)));
    }
}
