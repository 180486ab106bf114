use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use proptest::prelude::*;

use trigon::document::{load_document, save_document, Document, Mode};
use trigon::ffield::{make_field, FieldElement};
use trigon::fgroup::make_cyclic;
use trigon::grouptools::{abelianization, export_presentation, parse_presentation, smith_diagonal, Format};
use trigon::linkgraph::{FSet, LinkGraph};
use trigon::permgrp::{PermGroup, Permutation};
use trigon::tripres::{build_from_lambda, left_translation, TrianglePresentation};

fn presentation() -> impl Strategy<Value = TrianglePresentation> {
    (1usize..6).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, 0..n), 0..12)
            .prop_map(move |ts| TrianglePresentation::closed(n, ts).unwrap())
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn export_round_trips(t in presentation()) {
        for f in [Format::Gap, Format::Magma, Format::Json] {
            let doc = parse_presentation(&export_presentation(&t, f), f).unwrap();
            prop_assert_eq!(doc.to_t().unwrap(), t.clone());
        }
    }

    #[test]
    fn document_round_trips(t in presentation(), base in 0usize..2) {
        let doc = Document::from_t(t.clone(), base);
        let back = Document::parse(&doc.to_string_pretty(), Mode::Strict).unwrap();
        prop_assert!(back.warnings.is_empty());
        prop_assert_eq!(back.doc, doc);
    }

    #[test]
    fn action_inverts((t, sigma) in presentation().prop_flat_map(|t| { let n = t.n(); (Just(t), permutation(n)) })) {
        let id = Permutation::identity(t.n());
        prop_assert_eq!(t.act(&sigma, false).act(&sigma.inverse(), false), t.clone());
        prop_assert_eq!(t.act(&id, true).act(&id, true), t.clone());
        prop_assert_eq!(abelianization(&t.act(&sigma, false)), abelianization(&t));
    }

    #[test]
    fn smith_diagonal_divides(rows in prop::collection::vec(prop::collection::vec(-6i64..7, 3), 3)) {
        let m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let d = smith_diagonal(m, 3);
        for w in d.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        // full rank: the product is |det|
        let det = |a: &Vec<Vec<i64>>| {
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        };
        let dt = det(&rows);
        if dt != 0 {
            prop_assert_eq!(d.len(), 3);
            prop_assert_eq!(d.iter().product::<BigInt>(), BigInt::from(dt.abs()));
        } else {
            prop_assert!(d.len() < 3);
        }
    }

    #[test]
    fn zero_eigenvalues_count_components(n in 1usize..7, bits in prop::collection::vec(any::<bool>(), 36)) {
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| bits[i * 6 + j]).collect();
        let f = FSet::new(n, edges).unwrap();
        let g = LinkGraph::from_f(&f);
        let zeros = g.laplacian_spectrum().iter().filter(|x| x.abs() < 1e-9).count();
        prop_assert_eq!(zeros, g.components());
    }

    #[test]
    fn stabilizer_chain_order(gens in prop::collection::vec(permutation(6), 1..4)) {
        let g = PermGroup::new(6, gens).unwrap();
        let product: BigUint = g.orbit_lengths().iter().map(|&l| BigUint::from(l)).product();
        prop_assert_eq!(&product, g.order());
        prop_assert_eq!(BigUint::from(g.elements().len()), g.order().clone());
        let stab = g.stabilizer(0);
        prop_assert_eq!(stab.order() * BigUint::from(g.orbit(0).len()), g.order().clone());
    }

    #[test]
    fn trace_is_frobenius_invariant(i in 0u64..729) {
        let field = make_field(3, 6, None, false).unwrap();
        let x = FieldElement::from_index(&field, i);
        let tr = x.trace_to_subfield(9).unwrap();
        prop_assert_eq!(x.pow(9).trace_to_subfield(9).unwrap(), tr.clone());
        prop_assert!(tr.in_subfield(9));
    }
}

/// For λ = ·k on S = {1, k, k²} ⊆ Z/m the presentation is translation-invariant, and
/// so is its abelianization.
#[test]
fn abelianization_is_translation_invariant() {
    for m in [7usize, 13, 19, 21, 31] {
        let g = make_cyclic(m).unwrap();
        for k in (2..m).filter(|k| (1 + k + k * k) % m == 0) {
            let s = vec![1, k, k * k % m];
            let lambda: BTreeMap<usize, usize> = s.iter().map(|&x| (x, x * k % m)).collect();
            let t = build_from_lambda(&g, &s, &lambda).unwrap();
            let ab = abelianization(&t);
            for a in 0..m {
                let moved = t.act(&left_translation(&g, a), false);
                assert_eq!(moved, t);
                assert_eq!(abelianization(&moved), ab);
            }
        }
    }
}

#[test]
fn save_then_load_table_one() {
    let doc = trigon::tables::golden(1).unwrap().document().unwrap();
    let path = std::env::temp_dir().join(format!("trigon-table1-{}.json", std::process::id()));
    save_document(&doc, &path).unwrap();
    let back = load_document(&path, Mode::Strict).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(back.doc.t, doc.t);
    assert_eq!(back.doc, doc);
}
