use proptest::prelude::*;
use statesum_cli::model::{
    AlgebraSpec, BimoduleSpec, CrossingSpec, FamilyName, FrobeniusSpec, GradingSpec, InvolutionName, InvolutionSpec,
    ModelFile, RingName,
};
use statesum_cli::{build_model, parse_range};

fn scalar() -> impl Strategy<Value = String> {
    prop_oneof![
        (-9i64..=9).prop_map(|p| p.to_string()),
        (-9i64..=9, 1i64..=9).prop_map(|(p, q)| format!("{p}/{q}")),
        prop::collection::vec(-3i64..=3, 2).prop_map(|c| format!("cyclo(4)[{},{}]", c[0], c[1])),
    ]
}

fn key() -> impl Strategy<Value = String> {
    "[A-Za-z][A-Za-z0-9_]{0,6}"
}

fn algebra() -> impl Strategy<Value = AlgebraSpec> {
    let ring = prop::sample::select(vec![RingName::R, RingName::CR, RingName::HR, RingName::C]);
    prop_oneof![
        (1usize..4, ring, prop::option::of(prop_oneof![Just(GradingSpec::DivisionRing), (1usize..3).prop_map(|p| GradingSpec::Block { p })]))
            .prop_map(|(n, ring, grading)| AlgebraSpec::Matrix { n, ring, grading }),
        (1usize..7).prop_map(|n| AlgebraSpec::Cyclic { n }),
        prop::collection::vec(1u32..5, 1..3).prop_map(|orders| AlgebraSpec::Abelian { orders }),
        prop::collection::vec(key(), 1..3).prop_map(|summands| AlgebraSpec::DirectSum { summands }),
    ]
}

fn frobenius() -> impl Strategy<Value = FrobeniusSpec> {
    (
        key(),
        prop::sample::select(vec![FamilyName::Fhk, FamilyName::Group, FamilyName::Element, FamilyName::Raw]),
        scalar(),
        prop::option::of(prop::collection::vec(scalar(), 1..4)),
        prop::option::of(prop::collection::vec(scalar(), 1..4)),
    )
        .prop_map(|(algebra, family, r, x, eps)| FrobeniusSpec { algebra, family, r, x, diag: None, eps })
}

fn model_file() -> impl Strategy<Value = ModelFile> {
    let involution = (key(), prop::sample::select(vec![InvolutionName::Transpose, InvolutionName::Hermitian]), prop::option::of(prop::collection::vec(scalar(), 1..3)))
        .prop_map(|(frobenius, kind, conjugate_by)| InvolutionSpec { frobenius, kind, conjugate_by });
    let crossing = prop_oneof![
        key().prop_map(|frobenius| CrossingSpec::Canonical { frobenius }),
        (key(), prop::collection::vec(prop::collection::vec(scalar(), 1..3), 1..3))
            .prop_map(|(frobenius, values)| CrossingSpec::Bicharacter { frobenius, values }),
    ];
    let bimodule = (key(), prop::sample::select(vec![1i64, -1])).prop_map(|(frobenius, sign)| BimoduleSpec { frobenius, sign });
    (
        prop::collection::btree_map(key(), algebra(), 0..4),
        prop::collection::btree_map(key(), frobenius(), 0..3),
        prop::collection::btree_map(key(), involution, 0..2),
        prop::collection::btree_map(key(), crossing, 0..2),
        prop::collection::btree_map(key(), bimodule, 0..2),
    )
        .prop_map(|(algebras, frobenius, involutions, crossings, bimodules)| ModelFile { algebras, frobenius, involutions, crossings, bimodules })
}

proptest! {
    #[test]
    fn printing_then_parsing_is_the_identity(m in model_file()) {
        let text = m.to_json();
        let back = ModelFile::from_json(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn ranges_are_sorted_and_inclusive(a in 0usize..20, len in 0usize..6, extra in 0usize..30) {
        let b = a + len;
        let got = parse_range(&format!("{extra},{a}..{b}")).unwrap();
        let mut want: Vec<usize> = (a..=b).chain([extra]).collect();
        want.sort_unstable();
        want.dedup();
        prop_assert_eq!(got, want);
    }
}

#[test]
fn printed_standard_model_rebuilds() {
    let text = r#"{
      "algebras": {
        "H": { "kind": "matrix", "n": 1, "ring": "H_R", "grading": "division_ring" },
        "P": { "kind": "pauli", "n": 2 },
        "S": { "kind": "direct_sum", "summands": ["H", "P"] }
      },
      "frobenius": {
        "FH": { "algebra": "H", "family": "element", "diag": ["4"], "r": "1" },
        "FP": { "algebra": "P", "family": "fhk", "r": "1/2" }
      },
      "involutions": { "Q": { "frobenius": "FH", "kind": "quaternionic" } },
      "crossings": { "X": { "kind": "bicharacter", "frobenius": "FH", "values": [["-1", "1"], ["1", "-1"]] } }
    }"#;
    let (file, model) = statesum_cli::parse_model(text).unwrap();
    assert_eq!(model.algebras["S"].dim(), 8);
    let again = build_model(&ModelFile::from_json(&file.to_json()).unwrap()).unwrap();
    assert_eq!(again.frobenius.keys().collect::<Vec<_>>(), model.frobenius.keys().collect::<Vec<_>>());
    assert_eq!(again.frobenius["FP"].eps(), model.frobenius["FP"].eps());
    assert_eq!(again.crossings["X"].curl_map(), model.crossings["X"].curl_map());
}

#[test]
fn structure_constants_from_labels() {
    // k[x]/(x^2 - 1) written out by hand equals the group algebra of Z_2
    let text = r#"{
      "algebras": {
        "D": { "kind": "structure", "labels": ["1", "x"], "unit": ["1", "0"],
               "products": [
                 { "left": "1", "right": "1", "terms": { "1": "1" } },
                 { "left": "1", "right": "x", "terms": { "x": "1" } },
                 { "left": "x", "right": "1", "terms": { "x": "1" } },
                 { "left": "x", "right": "x", "terms": { "1": "1" } }
               ] }
      },
      "frobenius": { "F": { "algebra": "D", "family": "raw", "eps": ["1", "0"], "r": "1/2" } }
    }"#;
    let (_, model) = statesum_cli::parse_model(text).unwrap();
    let f = &model.frobenius["F"];
    assert!(f.is_special());
    assert_eq!(f.closed_genus_invariant(2).unwrap(), statesum::Cyclo::from_int(8));
    let broken = text.replace(r#""terms": { "1": "1" } }
               ]"#, r#""terms": { "x": "1" } }
               ]"#);
    assert!(statesum_cli::parse_model(&broken).is_err());
}
