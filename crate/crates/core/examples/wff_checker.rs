//! Parsing formulas and checking them for the identity restriction.

use quasiset::formula::{check_wff, parse, SortContext};
use quasiset::Sort;

fn main() {
    let ctx = SortContext::new()
        .with("x", Sort::Micro)
        .with("y", Sort::Micro)
        .with("a", Sort::Macro)
        .with("z", Sort::Qset);
    for src in [
        "x ~ y",
        "x = y",
        "a = a & z = z",
        "forall t:MICRO . (t in z -> exists u . (u ~ t))",
        "forall t:MICRO . t = t",
        "∀t . (t ∈ z → Q(z))",
        "x ~",
    ] {
        let verdict = match parse(src) {
            Ok(f) => match check_wff(&f, &ctx) {
                Ok(()) => format!("WELL-FORMED   {f}"),
                Err(d) => format!("rejected      {d}"),
            },
            Err(d) => format!("syntax error  {d}"),
        };
        println!("{src:<52} {verdict}");
    }
}
