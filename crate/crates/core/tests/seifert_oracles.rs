mod common;

use grope_norm::seifert::{
    alexander, arf, arf_quadratic_form, change_basis, connected_sum, is_alexander_root,
    levine_tristram, levine_tristram_float, levine_tristram_pivoting, max_abs_signature,
    mirror_reverse, SeifertMatrix, UnitRootAngle,
};
use num_integer::Integer;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_angle(r: &mut impl Rng, d_max: i64) -> UnitRootAngle {
    loop {
        let d = r.gen_range(2..=d_max);
        let p = r.gen_range(1..d);
        if p.gcd(&d) == 1 {
            return UnitRootAngle::new(p, d).unwrap();
        }
    }
}

fn matrix(r: &mut impl Rng, max_genus: usize) -> SeifertMatrix {
    let genus = r.gen_range(1..=max_genus);
    let conjugate = r.gen_bool(0.5);
    common::seifert(r, genus, 2, conjugate)
}

// Arf by counting: the form takes its majority value on 2^{2g-1} + 2^{g-1} vectors.
fn arf_by_counting(a: &SeifertMatrix) -> u8 {
    let n = a.size();
    let m = a.matrix();
    let mut zeros = 0u64;
    for x in 0u32..(1 << n) {
        let mut v = 0i64;
        for i in 0..n {
            for j in 0..n {
                if x >> i & 1 == 1 && x >> j & 1 == 1 {
                    v += i64::try_from(m.get(i, j)).unwrap();
                }
            }
        }
        if v.rem_euclid(2) == 0 {
            zeros += 1;
        }
    }
    if 2 * zeros > 1 << n {
        0
    } else {
        1
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn exact_signature_matches_eigenvalues(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = matrix(&mut r, 3);
        for _ in 0..4 {
            let w = random_angle(&mut r, 12);
            if is_alexander_root(&a, w) {
                prop_assert!(levine_tristram(&a, w).is_err());
                continue;
            }
            let exact = levine_tristram(&a, w).unwrap();
            prop_assert_eq!(exact % 2, 0);
            prop_assert!(exact.unsigned_abs() as usize <= a.size());
            let float = levine_tristram_float(&a, w.radians());
            if float.min_abs_eigenvalue > 1e-6 {
                prop_assert_eq!(exact, float.signature);
            }
            prop_assert_eq!(levine_tristram(&a, w.conjugate()).unwrap(), exact);
        }
    }

    #[test]
    fn minor_signs_match_full_pivoting(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = if r.gen_bool(0.2) {
            // zero diagonal: leading minors vanish and the fallback runs
            let g = r.gen_range(1..=2);
            let mut rows = vec![vec![0i64; 2 * g]; 2 * g];
            for i in 0..g {
                rows[2 * i][2 * i + 1] = 1;
            }
            SeifertMatrix::from_i64(&rows).unwrap()
        } else {
            matrix(&mut r, 3)
        };
        for _ in 0..4 {
            let w = random_angle(&mut r, 40);
            match levine_tristram(&a, w) {
                Ok(s) => prop_assert_eq!(levine_tristram_pivoting(&a, w).unwrap(), s),
                Err(_) => prop_assert!(levine_tristram_pivoting(&a, w).is_err()),
            }
        }
    }

    #[test]
    fn witt_cancellation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = matrix(&mut r, 2);
        let k = connected_sum(&a, &mirror_reverse(&a));
        for _ in 0..3 {
            let w = random_angle(&mut r, 10);
            if !is_alexander_root(&k, w) {
                prop_assert_eq!(levine_tristram(&k, w).unwrap(), 0);
            }
        }
        prop_assert_eq!(arf(&k), 0);
    }

    #[test]
    fn arf_oracles_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = matrix(&mut r, 4);
        let murasugi = arf(&a);
        prop_assert_eq!(murasugi, arf_quadratic_form(&a));
        if a.size() <= 6 {
            prop_assert_eq!(murasugi, arf_by_counting(&a));
        }
    }

    #[test]
    fn arf_is_additive(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = matrix(&mut r, 2);
        let b = matrix(&mut r, 2);
        prop_assert_eq!(arf(&connected_sum(&a, &b)), arf(&a) ^ arf(&b));
    }

    #[test]
    fn alexander_is_a_basis_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = matrix(&mut r, 3);
        let p = common::unimodular(&mut r, a.size(), 4);
        let b = change_basis(&a, &p).unwrap();
        prop_assert_eq!(alexander(&b), alexander(&a));
        let delta = alexander(&a);
        // Δ(1) = ±1 for knots, symmetric up to sign
        prop_assert_eq!(delta.eval(&1.into()).magnitude().clone(), 1u32.into());
        let coeffs = delta.coeffs();
        let reversed: Vec<_> = coeffs.iter().rev().cloned().collect();
        prop_assert!(coeffs == reversed.as_slice() || coeffs.iter().zip(&reversed).all(|(x, y)| *x == -y));
    }

    #[test]
    fn signature_is_constant_between_roots(seed in any::<u64>()) {
        // the scan maximum is attained and never exceeds the matrix size
        let mut r = rng(seed);
        let a = matrix(&mut r, 2);
        let scan = max_abs_signature(&a, 12);
        prop_assert!(scan.max_abs as usize <= a.size());
        if let Some(w) = scan.at {
            prop_assert_eq!(levine_tristram(&a, w).unwrap().abs(), scan.max_abs);
        }
    }
}

#[test]
fn torus_knot_signature() {
    // T(2,5): Seifert matrix of the (2,5) torus knot, σ(−1) = ±4
    let a = SeifertMatrix::from_i64(&[
        vec![-1, 1, 0, 0],
        vec![0, -1, 1, 0],
        vec![0, 0, -1, 1],
        vec![0, 0, 0, -1],
    ]);
    let a = a.unwrap();
    assert_eq!(alexander(&a).coeffs().len(), 5);
    assert_eq!(
        levine_tristram(&a, UnitRootAngle::minus_one())
            .unwrap()
            .abs(),
        4
    );
    assert_eq!(arf(&a), arf_quadratic_form(&a));
    assert_eq!(arf(&a), 1);
}
