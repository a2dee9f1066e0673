//! A sorted first-order language over quasi-set universes.
//!
//! Concrete syntax (ASCII; the Unicode aliases `∀ ∃ ¬ ∧ ∨ → ↔ ≡ ∈` are also
//! accepted):
//!
//! ```text
//! forall x . phi      exists x:MICRO . phi     !phi
//! phi & psi           phi | psi                phi -> psi      phi <-> psi
//! x ~ y   (≡)         x = y                    x in y
//! m(x)    MM(x)       Q(x)                     pair(u, v) in f
//! ```
//!
//! Precedence from tightest: `!`, `&`, `|`, `->` (right-associative), `<->`.
//! A quantifier body extends as far right as possible.
//!
//! Identity between terms that may denote micro-atoms is not well formed;
//! [`check_wff`] rejects such `=` atoms while accepting `~` on every sort.

mod ast;
mod eval;
mod parser;

use std::collections::BTreeMap;
use std::fmt;

pub use ast::{Atom, Binder, Formula, Span, Term, TermKind};
pub use eval::{evaluate, Assignment, EvalError};
pub use parser::parse;

use crate::universe::Sort;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub code: &'static str,
    pub message: String,
}

impl Diagnostic {
    pub(crate) fn new(span: Span, code: &'static str, message: String) -> Self {
        Diagnostic {
            offset: span.start,
            line: span.line,
            column: span.column,
            code,
            message,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: error[{}]: {}",
            self.line, self.column, self.code, self.message
        )
    }
}

impl std::error::Error for Diagnostic {}

/// Sorts of free names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SortContext(BTreeMap<String, Sort>);

impl SortContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: impl Into<String>, sort: Sort) -> Self {
        self.insert(name, sort);
        self
    }

    pub fn insert(&mut self, name: impl Into<String>, sort: Sort) {
        self.0.insert(name.into(), sort);
    }

    pub fn get(&self, name: &str) -> Option<Sort> {
        self.0.get(name).copied()
    }

    /// Parses `name:SORT,name:SORT,...`. An empty string is the empty
    /// context.
    pub fn parse(spec: &str) -> Result<Self, String> {
        let mut ctx = SortContext::new();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, sort) = item
                .split_once(':')
                .ok_or_else(|| format!("expected `name:SORT`, got `{item}`"))?;
            let sort = Sort::parse(sort.trim())
                .ok_or_else(|| format!("unknown sort `{}` in `{item}`", sort.trim()))?;
            ctx.insert(name.trim(), sort);
        }
        Ok(ctx)
    }
}

impl FromIterator<(String, Sort)> for SortContext {
    fn from_iter<I: IntoIterator<Item = (String, Sort)>>(iter: I) -> Self {
        SortContext(iter.into_iter().collect())
    }
}

fn operand_sort(t: &Term, ctx: &SortContext) -> Option<Sort> {
    match t.kind {
        TermKind::Variable => t.sort,
        TermKind::Constant => ctx.get(&t.name),
    }
}

/// Accepts `f` unless some `=` atom has an operand that is, or may be, a
/// micro-atom. A variable bound by an unsorted quantifier ranges over the
/// whole universe and so may be one; so may a free name missing from `ctx`.
pub fn check_wff(f: &Formula, ctx: &SortContext) -> Result<(), Diagnostic> {
    for atom in f.atoms() {
        let Atom::Equal(lhs, rhs) = atom else { continue };
        for t in [lhs, rhs] {
            let reason = match operand_sort(t, ctx) {
                Some(Sort::Micro) => "is sorted MICRO".to_string(),
                None if t.kind == TermKind::Variable => {
                    "ranges over the whole universe and may denote an m-atom".to_string()
                }
                None => "is unsorted and may denote an m-atom".to_string(),
                Some(_) => continue,
            };
            return Err(Diagnostic::new(
                lhs.span,
                "micro-identity",
                format!(
                    "`{} = {}` is not well formed: `{}` {reason}; identity is undefined \
                     for m-atoms (use `~`)",
                    lhs.name, rhs.name, t.name
                ),
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_needs_non_micro_operands() {
        let f = parse("x = y").unwrap();
        let ok = SortContext::new().with("x", Sort::Macro).with("y", Sort::Macro);
        assert!(check_wff(&f, &ok).is_ok());
        let bad = SortContext::new().with("x", Sort::Micro).with("y", Sort::Macro);
        let d = check_wff(&f, &bad).unwrap_err();
        assert_eq!(d.code, "micro-identity");
        assert!(d.message.contains("MICRO"));
        assert_eq!(d.offset, 0);
        assert!(check_wff(&f, &SortContext::new()).is_err());
    }

    #[test]
    fn indistinguishability_is_always_well_formed() {
        let f = parse("x ~ y").unwrap();
        let ctx = SortContext::new().with("x", Sort::Micro).with("y", Sort::Micro);
        assert!(check_wff(&f, &ctx).is_ok());
        assert!(check_wff(&parse("forall x . forall y . x ~ y").unwrap(), &SortContext::new()).is_ok());
    }

    #[test]
    fn quantified_identity() {
        let ctx = SortContext::new();
        assert!(check_wff(&parse("forall x . x = x").unwrap(), &ctx).is_err());
        assert!(check_wff(&parse("forall x:QSET . x = x").unwrap(), &ctx).is_ok());
        assert!(check_wff(&parse("forall x:MICRO . x = x").unwrap(), &ctx).is_err());
        let shadow = parse("forall x:MACRO . forall x . x = x").unwrap();
        assert!(check_wff(&shadow, &ctx).is_err());
    }

    #[test]
    fn diagnostic_points_at_the_atom() {
        let src = "Q(z) & (a = b)";
        let ctx = SortContext::new().with("a", Sort::Micro).with("b", Sort::Qset);
        let d = check_wff(&parse(src).unwrap(), &ctx).unwrap_err();
        assert_eq!(d.offset, 8);
        assert_eq!(d.column, 9);
    }

    #[test]
    fn sort_context_syntax() {
        let ctx = SortContext::parse("x:MICRO, y:macro,z:QSET").unwrap();
        assert_eq!(ctx.get("x"), Some(Sort::Micro));
        assert_eq!(ctx.get("y"), Some(Sort::Macro));
        assert_eq!(ctx.get("z"), Some(Sort::Qset));
        assert_eq!(SortContext::parse("").unwrap(), SortContext::new());
        assert!(SortContext::parse("x").is_err());
        assert!(SortContext::parse("x:ATOM").is_err());
    }
}
