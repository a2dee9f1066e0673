//! A quasi-function must send indistinguishable inputs to indistinguishable
//! outputs; its image of an input is a whole class of values.

use quasiset::relations::{domain, is_quasi_function, is_total, qf_image, QRelation};
use quasiset::{Species, Universe};

fn main() -> quasiset::Result<()> {
    let mut u = Universe::new([Species::new("electron", ""), Species::new("photon", "")])?;
    let e1 = u.add_micro_atom("electron")?;
    let e2 = u.add_micro_atom("electron")?;
    let p1 = u.add_micro_atom("photon")?;
    let p2 = u.add_micro_atom("photon")?;
    let up = u.add_macro_atom("up")?;
    let down = u.add_macro_atom("down")?;
    let electrons = u.make_qset([e1, e2])?;
    let photons = u.make_qset([p1, p2])?;
    let detectors = u.make_qset([up, down])?;

    let emit = QRelation::new(electrons, photons, [(e1, p1), (e2, p2)]);
    println!("emit is a quasi-function: {}", is_quasi_function(&u, &emit)?);
    let img = qf_image(&mut u, &emit, e1)?;
    println!("qc(image of e1) = {}", u.quasi_cardinality(img)?.value());

    let detect = QRelation::new(electrons, detectors, [(e1, up), (e2, down)]);
    println!(
        "detect is total: {}, quasi-function: {}",
        is_total(&u, &detect)?,
        is_quasi_function(&u, &detect)?
    );
    let dom = domain(&mut u, &detect)?;
    println!("qc(Dom detect) = {}", u.quasi_cardinality(dom)?.value());
    Ok(())
}
