use std::fmt;

use crate::universe::Sort;

/// Byte range in the source text, with the 1-based line and column of its
/// start.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermKind {
    /// Bound by an enclosing quantifier.
    Variable,
    /// Free; resolved through the evaluation context.
    Constant,
}

/// A name occurring in a formula. `sort` is known only for variables bound
/// by a sorted quantifier.
#[derive(Clone, Debug)]
pub struct Term {
    pub name: String,
    pub kind: TermKind,
    pub sort: Option<Sort>,
    pub span: Span,
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.kind == other.kind && self.sort == other.sort
    }
}

impl Term {
    pub fn variable(name: impl Into<String>, sort: Option<Sort>) -> Self {
        Term {
            name: name.into(),
            kind: TermKind::Variable,
            sort,
            span: Span::default(),
        }
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term {
            name: name.into(),
            kind: TermKind::Constant,
            sort: None,
            span: Span::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Atom {
    /// `m(t)`
    Micro(Term),
    /// `M(t)`, spelled `MM(t)` in concrete syntax.
    Macro(Term),
    /// `Q(t)`
    Qset(Term),
    /// `t ≡ t'`
    Indistinguishable(Term, Term),
    /// `t = t'`, read as extensional equality.
    Equal(Term, Term),
    /// `t ∈ t'`
    Member(Term, Term),
    /// `⟨t, t'⟩ ∈ f` for a named relation `f`.
    PairIn(Term, Term, Term),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Binder {
    pub name: String,
    pub sort: Option<Sort>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Binder, Box<Formula>),
    Exists(Binder, Box<Formula>),
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Visits every atom, outermost first, left to right.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Formula::Atom(a) => out.push(a),
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => f.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Names of free terms (constants), in order of first occurrence.
    pub fn free_names(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for atom in self.atoms() {
            for t in atom.terms() {
                if t.kind == TermKind::Constant && !out.contains(&t.name.as_str()) {
                    out.push(&t.name);
                }
            }
        }
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Forall(..) | Formula::Exists(..) => 0,
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(..) => 5,
            Formula::Atom(..) => 6,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, context: u8) -> fmt::Result {
        let wrap = self.precedence() < context;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Formula::Atom(a) => write!(f, "{a}")?,
            Formula::Not(g) => {
                f.write_str("!")?;
                g.write(f, 5)?;
            }
            Formula::And(a, b) => binary(f, a, " & ", b, 4, 5)?,
            Formula::Or(a, b) => binary(f, a, " | ", b, 3, 4)?,
            Formula::Implies(a, b) => binary(f, a, " -> ", b, 3, 2)?,
            Formula::Iff(a, b) => binary(f, a, " <-> ", b, 1, 2)?,
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let q = if matches!(self, Formula::Forall(..)) { "forall" } else { "exists" };
                write!(f, "{q} {}", v.name)?;
                if let Some(s) = v.sort {
                    write!(f, ":{s}")?;
                }
                f.write_str(" . ")?;
                body.write(f, 0)?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn binary(
    f: &mut fmt::Formatter<'_>,
    a: &Formula,
    op: &str,
    b: &Formula,
    left: u8,
    right: u8,
) -> fmt::Result {
    a.write(f, left)?;
    f.write_str(op)?;
    b.write(f, right)
}

impl Atom {
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::Micro(t) | Atom::Macro(t) | Atom::Qset(t) => vec![t],
            Atom::Indistinguishable(a, b) | Atom::Equal(a, b) | Atom::Member(a, b) => vec![a, b],
            Atom::PairIn(a, b, r) => vec![a, b, r],
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Micro(t) => write!(f, "m({})", t.name),
            Atom::Macro(t) => write!(f, "MM({})", t.name),
            Atom::Qset(t) => write!(f, "Q({})", t.name),
            Atom::Indistinguishable(a, b) => write!(f, "{} ~ {}", a.name, b.name),
            Atom::Equal(a, b) => write!(f, "{} = {}", a.name, b.name),
            Atom::Member(a, b) => write!(f, "{} in {}", a.name, b.name),
            Atom::PairIn(a, b, r) => write!(f, "pair({}, {}) in {}", a.name, b.name, r.name),
        }
    }
}

/// Prints in the ASCII concrete syntax accepted by [`super::parse`], with
/// the fewest parentheses that parse back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}
