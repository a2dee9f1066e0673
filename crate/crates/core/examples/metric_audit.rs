//! Auditing a finite distance matrix against the quasi-metric axioms.

use quasiset::metric::{audit_axioms, QuasiMetricSpace};
use quasiset::{Species, Universe};

fn main() -> quasiset::Result<()> {
    let mut u = Universe::new([Species::new("electron", "")])?;
    let x1 = u.add_micro_atom("electron")?;
    let x2 = u.add_micro_atom("electron")?;
    let a = u.add_macro_atom("a")?;
    let b = u.add_macro_atom("b")?;
    let carrier = u.make_qset([x1, x2, a, b])?;

    let good = vec![
        vec![0.0, 0.0, 1.0, 1.0],
        vec![0.0, 0.0, 1.0, 1.0],
        vec![1.0, 1.0, 0.0, 1.5],
        vec![1.0, 1.0, 1.5, 0.0],
    ];
    let s = QuasiMetricSpace::dense(&u, carrier, good)?;
    println!("consistent: {}", audit_axioms(&s)?.summary());

    // Indistinguishable atoms at positive distance, and a long side.
    let bad = vec![
        vec![0.0, 0.5, 1.0, 1.0],
        vec![0.5, 0.0, 1.0, 1.0],
        vec![1.0, 1.0, 0.0, 3.0],
        vec![1.0, 1.0, 3.0, 0.0],
    ];
    let s = QuasiMetricSpace::dense(&u, carrier, bad)?;
    let report = audit_axioms(&s)?;
    println!("defective: {}", report.summary());
    for v in report.violations.iter().take(4) {
        let w: Vec<String> = v.witnesses.iter().map(|h| h.to_string()).collect();
        println!("  {}: {} {:?}", v.axiom, w.join(" "), v.values);
    }
    println!("  congruence flags: {}", report.congruence_flags.len());
    Ok(())
}
