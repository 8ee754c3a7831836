//! The shipped DSL files must parse to exactly the models the library
//! builds, and survive a print/parse round trip.

use std::path::PathBuf;

use cdga_cli::dsl::{parse_document, print_document, Item, SpecDocument};
use cdga_core::corpus;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn load(name: &str) -> SpecDocument {
    let path = corpus_dir().join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{name}: {e}"));
    parse_document(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn algebra_of<'d>(doc: &'d SpecDocument, item: &str) -> &'d cdga_core::Cdga {
    match doc.get(item) {
        Some(Item::Algebra(c)) => c,
        _ => panic!("expected algebra `{item}`"),
    }
}

fn fibration_of<'d>(doc: &'d SpecDocument, item: &str) -> &'d cdga_core::RelativeModel {
    match doc.get(item) {
        Some(Item::Fibration { model, .. }) => model,
        _ => panic!("expected fibration `{item}`"),
    }
}

#[test]
fn algebra_files_match_programmatic_corpus() {
    assert_eq!(algebra_of(&load("t2.alg"), "t2"), &corpus::torus_model(2));
    assert_eq!(algebra_of(&load("t3.alg"), "t3"), &corpus::torus_model(3));
    assert_eq!(algebra_of(&load("t4.alg"), "t4"), &corpus::torus_model(4));
    assert_eq!(
        algebra_of(&load("heis3_model.alg"), "heis3"),
        &corpus::heisenberg_model()
    );
    assert_eq!(algebra_of(&load("kt.alg"), "kt"), &corpus::kt_model());
    assert_eq!(algebra_of(&load("s2.alg"), "s2"), &corpus::s2_model());
    assert_eq!(algebra_of(&load("cp2.alg"), "cp2"), &corpus::cp_model(2));
    assert_eq!(algebra_of(&load("cp3.alg"), "cp3"), &corpus::cp_model(3));
    assert_eq!(
        algebra_of(&load("s2xs2.alg"), "s2xs2"),
        &corpus::s2xs2_model()
    );
    assert_eq!(
        algebra_of(&load("s2xs4.alg"), "s2xs4"),
        &corpus::s2xs4_model()
    );
}

#[test]
fn lie_files_match_programmatic_corpus() {
    for (file, item, expected) in [
        ("lie_abelian1.alg", "abelian1", corpus::lie_abelian(1)),
        ("lie_abelian2.alg", "abelian2", corpus::lie_abelian(2)),
        ("lie_abelian3.alg", "abelian3", corpus::lie_abelian(3)),
        ("lie_abelian4.alg", "abelian4", corpus::lie_abelian(4)),
        ("lie_heis3.alg", "heis3", corpus::lie_heis3()),
        ("lie_kt.alg", "kt", corpus::lie_kt()),
        ("lie_heis5.alg", "heis5", corpus::lie_heis5()),
        ("lie_filiform6.alg", "filiform6", corpus::lie_filiform6()),
    ] {
        let doc = load(file);
        match doc.get(item) {
            Some(Item::Lie(l)) => assert_eq!(l, &expected, "{file}"),
            _ => panic!("expected lie item in {file}"),
        }
    }
}

#[test]
fn fibration_files_match_programmatic_corpus() {
    assert_eq!(
        fibration_of(&load("x_bundle.alg"), "x"),
        &corpus::x_bundle_model()
    );
    assert_eq!(
        fibration_of(&load("twisted7.alg"), "twisted7"),
        &corpus::twisted7_corrected()
    );
    assert_eq!(
        fibration_of(&load("twisted7_verbatim.alg"), "twisted7_verbatim"),
        &corpus::twisted7_verbatim()
    );
    assert_eq!(
        fibration_of(&load("twisted19.alg"), "twisted19"),
        &corpus::twisted19_model()
    );
    assert_eq!(
        fibration_of(&load("t2xs2.alg"), "t2xs2"),
        &corpus::product_t2_s2()
    );
    assert_eq!(
        fibration_of(&load("t1xs2.alg"), "t1xs2"),
        &corpus::product_t1_s2()
    );
    assert_eq!(
        fibration_of(&load("t1xs2xs2.alg"), "t1xs2xs2"),
        &corpus::product_t1_s2xs2()
    );
    assert_eq!(
        fibration_of(&load("s1cp2.alg"), "s1cp2"),
        &corpus::s1_cp2_exact_twist()
    );
    assert_eq!(
        fibration_of(&load("s1s2xs4.alg"), "s1s2xs4"),
        &corpus::s1_s2xs4_twisted()
    );
}

#[test]
fn ring_files_match_programmatic_corpus() {
    for (file, item, expected) in [
        ("ring_cp2.alg", "cp2h", corpus::cp_ring(2)),
        ("ring_cp3.alg", "cp3h", corpus::cp_ring(3)),
        ("ring_s2xs4.alg", "s2xs4h", corpus::s2xs4_ring()),
        ("ring_s2xs2.alg", "s2xs2h", corpus::s2xs2_ring()),
        ("ring_connsum.alg", "connsum", corpus::connected_sum_ring()),
    ] {
        let doc = load(file);
        match doc.get(item) {
            Some(Item::Ring(r)) => {
                assert_eq!(r.generators(), expected.generators(), "{file}");
                assert_eq!(r.relations(), expected.relations(), "{file}");
                assert_eq!(r.top_degree(), expected.top_degree(), "{file}");
            }
            _ => panic!("expected ring item in {file}"),
        }
    }
}

#[test]
fn every_corpus_file_round_trips() {
    for entry in std::fs::read_dir(corpus_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|e| e != "alg") {
            continue;
        }
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = parse_document(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let printed = print_document(&doc);
        let doc2 = parse_document(&printed).unwrap_or_else(|e| panic!("{name} reparse: {e}"));
        assert_eq!(doc.items.len(), doc2.items.len(), "{name}");
        for ((n1, i1), (n2, i2)) in doc.items.iter().zip(doc2.items.iter()) {
            assert_eq!(n1, n2, "{name}");
            match (i1, i2) {
                (Item::Algebra(a), Item::Algebra(b)) => assert_eq!(a, b, "{name}/{n1}"),
                (Item::Lie(a), Item::Lie(b)) => assert_eq!(a, b, "{name}/{n1}"),
                (Item::Fibration { model: a, .. }, Item::Fibration { model: b, .. }) => {
                    assert_eq!(a, b, "{name}/{n1}")
                }
                (Item::Ring(a), Item::Ring(b)) => {
                    assert_eq!(a.generators(), b.generators(), "{name}/{n1}");
                    assert_eq!(a.relations(), b.relations(), "{name}/{n1}");
                    assert_eq!(a.top_degree(), b.top_degree(), "{name}/{n1}");
                }
                _ => panic!("{name}/{n1}: kind changed in round trip"),
            }
        }
    }
}
