//! Loading a model file, validating it and auditing its spaces.

use quasiset::metric::audit_axioms;
use quasiset::model::{Model, SpaceRef};

const MODEL: &str = r#"
species electron
micro e1 electron
micro e2 electron
macro lab "laboratory"
weakpair w = [e1, e2]
qset X = { e1, e2, lab }

space D carrier X
dist D e1 e2 0
dist D e1 lab 1
dist D e2 lab 1

region V dim 1
ball V 0 1
sample V 6 seed 2
eprb S region V c 1 species electron

formula saturated expect true : forall t . (t in w <-> t ~ e1)
formula identity expect ill-formed : e1 = e2
"#;

fn main() {
    let model = match Model::parse(MODEL) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    let report = model.check();
    println!("check: {} errors", report.errors.len());
    for name in model.space_names() {
        let summary = match model.space(name).expect("declared") {
            SpaceRef::Eprb(decl) => audit_axioms(&decl.space.to_quasi_metric_space()).map(|r| r.summary()),
            SpaceRef::Finite(decl) => {
                let s = model.finite_space(decl).expect("complete matrix");
                audit_axioms(&s).map(|r| r.summary())
            }
        };
        println!("space {name}: {}", summary.expect("valid carrier"));
    }
}
