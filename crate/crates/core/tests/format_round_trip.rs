mod common;

use common::{multi_grope, q, seifert, tree};
use grope_norm::bounds::{BoundEvidence, EvidenceKind};
use grope_norm::format::{
    parse_evidence, parse_grope, parse_operator, parse_seifert, parse_tree, print_evidence,
    print_grope, print_operator, print_seifert,
};
use grope_norm::operators::InfectionOperator;
use grope_norm::BoundaryKind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kind(rng: &mut impl Rng) -> BoundaryKind {
    if rng.gen_bool(0.5) {
        BoundaryKind::KnotSlice
    } else {
        BoundaryKind::Concordance
    }
}

#[test]
fn trees_and_gropes() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..200 {
        let h = rng.gen_range(1..=3);
        let t = tree(&mut rng, h, 3);
        assert_eq!(parse_tree(&t.to_string()).unwrap(), t);

        let k = kind(&mut rng);
        let n = rng.gen_range(1..=3);
        let g = multi_grope(&mut rng, k, n);
        let text = print_grope(&g);
        let back = parse_grope(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(print_grope(&back), text);
    }
}

#[test]
fn seifert_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..200 {
        let genus = rng.gen_range(0..=4);
        let conj = rng.gen_bool(0.5);
        let a = seifert(&mut rng, genus, 4, conj);
        let text = print_seifert(&a);
        assert_eq!(parse_seifert(&text).unwrap(), a);
    }
}

#[test]
fn operators() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let outputs = rng.gen_range(1..=3);
        let slots = rng.gen_range(1..=3);
        let winding: Vec<Vec<u64>> = (0..outputs)
            .map(|_| (0..slots).map(|_| rng.gen_range(0..=4)).collect())
            .collect();
        let algebraic = winding
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&w| rng.gen_range(-(w as i64)..=w as i64))
                    .collect()
            })
            .collect();
        let h = rng.gen_range(0..=2);
        let eta = (0..slots)
            .map(|_| (h > 0).then(|| tree(&mut rng, h, 2)))
            .collect();
        let op = InfectionOperator::new(winding, algebraic, eta, rng.gen_bool(0.5)).unwrap();
        let text = print_operator(&op);
        assert_eq!(parse_operator(&text).unwrap(), op);
    }
}

#[test]
fn evidence_ledgers() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let words = ["computed", "asserted by hand", "table lookup", "x"];
    for _ in 0..200 {
        let list: Vec<BoundEvidence> = (0..rng.gen_range(0..=6))
            .map(|_| {
                let kind = match rng.gen_range(0..6) {
                    0 => EvidenceKind::Signature {
                        sigma_max: 2 * rng.gen_range(0..=5),
                        arf: rng.gen_range(0..=1),
                    },
                    1 => EvidenceKind::Filtration {
                        n: rng.gen_range(2..=9),
                    },
                    2 => EvidenceKind::Rho {
                        n: rng.gen_range(0..=5),
                        inf_abs_rho: q(rng.gen_range(0..=40), rng.gen_range(1..=9)),
                    },
                    3 => EvidenceKind::SliceGenus(rng.gen_range(0..=4)),
                    4 => EvidenceKind::TopologicallySlice,
                    _ => {
                        let k = kind(&mut rng);
                        let n = rng.gen_range(1..=2);
                        EvidenceKind::Witness(multi_grope(&mut rng, k, n))
                    }
                };
                let provenance = if rng.gen_bool(0.2) {
                    String::new()
                } else {
                    words[rng.gen_range(0..words.len())].to_string()
                };
                BoundEvidence::new(kind, provenance)
            })
            .collect();
        let text = print_evidence(&list);
        assert_eq!(parse_evidence(&text).unwrap(), list, "{text}");
    }
}

#[test]
fn printing_is_deterministic() {
    let mut a = ChaCha8Rng::seed_from_u64(25);
    let mut b = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..50 {
        let x = multi_grope(&mut a, BoundaryKind::KnotSlice, 2);
        let y = multi_grope(&mut b, BoundaryKind::KnotSlice, 2);
        assert_eq!(print_grope(&x), print_grope(&y));
    }
}
