//! The EPRB space: a two-ball region of the plane joined with the weak
//! singleton of an entangled electron pair.

use quasiset::eprb::{build_eprb, counterexample_unbounded, validate_diameter, Ball, RegionV, Site};
use quasiset::metric::audit_axioms;
use quasiset::{Species, Universe};

fn main() -> quasiset::Result<()> {
    let balls = vec![Ball::new(vec![0.0, 0.0], 1.0)?, Ball::new(vec![4.0, 0.0], 1.0)?];
    let region = RegionV::sampled(2, balls, 12, 1)?;
    let check = validate_diameter(&region, 2.0);
    println!(
        "sup-diameter {} -> c = 2 admissible: {}, minimal c = {}",
        check.sup_diameter,
        check.admissible,
        check.minimal_c()
    );

    let universe = Universe::new([Species::new("electron", "")])?;
    let space = build_eprb(universe, region, 3.0, "electron")?;
    let [x1, x2] = space.atoms();
    let v = &space.region().sample_points()[0];
    println!("d(x1, x2) = {}", space.distance(Site::Entity(x1), Site::Entity(x2))?);
    println!("d(x1, v0) = {}", space.distance(Site::Entity(x1), Site::Point(v))?);
    let report = audit_axioms(&space.to_quasi_metric_space())?;
    println!("audit: {}", report.summary());

    // With V the whole space, two far points break the triangle inequality.
    let ce = counterexample_unbounded(1.0, 2)?;
    println!("{}", ce.diagnostic());
    Ok(())
}
