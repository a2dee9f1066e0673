//! Indistinguishable electrons, weak pairs and quasi-cardinality.

use quasiset::{Species, Universe};

fn main() -> quasiset::Result<()> {
    let mut u = Universe::new([
        Species::new("electron", "spin-1/2 fermion"),
        Species::new("photon", "massless boson"),
    ])?;
    let e1 = u.add_micro_atom("electron")?;
    let e2 = u.add_micro_atom("electron")?;
    let p = u.add_micro_atom("photon")?;
    let lab = u.add_macro_atom("laboratory")?;

    println!("e1 ~ e2: {}", u.indistinguishable(e1, e2)?);
    println!("e1 ~ p:  {}", u.indistinguishable(e1, p)?);
    match u.extensionally_equal(e1, e2) {
        Ok(v) => println!("e1 =E e2: {v}"),
        Err(e) => println!("e1 =E e2: {e}"),
    }

    // The weak singleton of e1 collects every electron, so its
    // quasi-cardinality is 2 even though it is "the singleton of e1".
    let s = u.weak_singleton(e1)?;
    println!("qc([e1]) = {}", u.quasi_cardinality(s)?.value());
    let pair = u.weak_pair(e1, lab)?;
    println!("qc([e1, lab]) = {}", u.quasi_cardinality(pair)?.value());

    let a = u.make_qset([e1, lab])?;
    let b = u.make_qset([lab, e1])?;
    println!("{{e1, lab}} =E {{lab, e1}}: {}", u.extensionally_equal(a, b)?);
    Ok(())
}
