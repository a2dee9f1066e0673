//! Exact singlet statistics next to seeded samples.

use quasiset::spinlab::{correlation, joint_distribution, sample_outcomes, Axis, OUTCOMES};

fn main() -> quasiset::Result<()> {
    let z = Axis::Z;
    for (name, b) in [
        ("z", Axis::Z),
        ("60 deg", Axis::normalized([3f64.sqrt() / 2.0, 0.0, 0.5])?),
        ("x", Axis::X),
        ("-z", Axis::Z.opposite()),
    ] {
        let p = joint_distribution(&z, &b);
        let cells: Vec<String> = OUTCOMES
            .iter()
            .map(|&(s1, s2)| format!("{}{}={:.4}", s1.symbol(), s2.symbol(), p.get(s1, s2)))
            .collect();
        let tally = sample_outcomes(&z, &b, 100_000, 7)?;
        println!(
            "b = {name:<6} E = {:+.4}  [{}]  sampled E = {:+.4}",
            correlation(&z, &b),
            cells.join(" "),
            tally.correlation()
        );
    }
    Ok(())
}
