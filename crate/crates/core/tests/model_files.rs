//! The shipped model files load and behave as their comments say.

use std::path::PathBuf;

use quasiset::metric::{audit_axioms, Axiom};
use quasiset::model::{Model, SpaceRef};

fn load(name: &str) -> Model {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models").join(name);
    Model::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn at_least_five_models_ship() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models");
    let count = std::fs::read_dir(dir)
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "qm"))
        .count();
    assert!(count >= 5);
}

#[test]
fn valid_eprb_passes() {
    let m = load("valid_eprb.qm");
    assert!(m.check().errors.is_empty());
    let s = &m.eprb_space("S").unwrap().space;
    assert!(audit_axioms(&s.to_quasi_metric_space()).unwrap().passed);
    assert_eq!(s.universe().quasi_cardinality(s.pair()).unwrap().value(), 2);
}

#[test]
fn a2_violation_fails_only_the_triangle() {
    let m = load("a2_violation.qm");
    let report = m.check();
    assert!(report.errors.is_empty());
    assert_eq!(report.notes.len(), 1);
    let s = &m.eprb_space("S").unwrap().space;
    let audit = audit_axioms(&s.to_quasi_metric_space()).unwrap();
    assert!(!audit.passed);
    for axiom in Axiom::ALL {
        assert_eq!(audit.holds(axiom), axiom != Axiom::Triangle);
    }
}

#[test]
fn unsaturated_qset_expectations_hold() {
    let m = load("unsaturated_qset.qm");
    assert!(m.check().errors.is_empty());
    let u = m.universe();
    assert_eq!(u.quasi_cardinality(m.entity("partial").unwrap()).unwrap().value(), 1);
    assert_eq!(u.quasi_cardinality(m.entity("pair").unwrap()).unwrap().value(), 2);
}

#[test]
fn quasi_function_violation_is_reported() {
    let m = load("quasi_function_violation.qm");
    let errors = m.check().errors;
    assert_eq!(errors.len(), 1);
    assert!(errors[0].message.contains("`f`"));
}

#[test]
fn formula_corpus_expectations_hold() {
    let m = load("formula_corpus.qm");
    assert!(m.formulas().len() >= 15);
    assert!(m.check().errors.is_empty(), "{:?}", m.check().errors);
}

#[test]
fn finite_spaces_audit() {
    for (file, space, passes) in [("classical.qm", "E", true), ("borderline.qm", "D", true)] {
        let m = load(file);
        let Some(SpaceRef::Finite(decl)) = m.space(space) else {
            panic!("{file}: no finite space {space}")
        };
        let s = m.finite_space(decl).unwrap();
        assert_eq!(audit_axioms(&s).unwrap().passed, passes, "{file}");
    }
}
