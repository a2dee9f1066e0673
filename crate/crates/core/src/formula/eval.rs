use std::collections::BTreeMap;

use thiserror::Error;

use super::ast::{Atom, Binder, Formula, Term, TermKind};
use super::{check_wff, Diagnostic, SortContext};
use crate::relations::QRelation;
use crate::universe::{Handle, Universe};

/// Interpretation of a formula's free names: entity constants and named
/// relations (for `pair(u, v) in f`).
#[derive(Clone, Debug, Default)]
pub struct Assignment {
    entities: BTreeMap<String, Handle>,
    relations: BTreeMap<String, QRelation>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(mut self, name: impl Into<String>, h: Handle) -> Self {
        self.entities.insert(name.into(), h);
        self
    }

    pub fn relation(mut self, name: impl Into<String>, r: QRelation) -> Self {
        self.relations.insert(name.into(), r);
        self
    }

    pub fn set(&mut self, name: impl Into<String>, h: Handle) {
        self.entities.insert(name.into(), h);
    }

    pub fn set_relation(&mut self, name: impl Into<String>, r: QRelation) {
        self.relations.insert(name.into(), r);
    }

    pub fn get(&self, name: &str) -> Option<Handle> {
        self.entities.get(name).copied()
    }
}

#[derive(Debug, Clone, Error)]
pub enum EvalError {
    #[error("free name `{0}` has no assigned entity")]
    Unbound(String),
    #[error("`{0}` does not name a relation")]
    NotARelation(String),
    #[error("{0}")]
    IllFormed(Diagnostic),
    #[error(transparent)]
    Kernel(#[from] crate::error::Error),
}

/// Tarskian truth value over a finite universe. Quantifiers range over every
/// registered entity, or over one sort when the binder is sorted. `=` is
/// extensional equality.
///
/// Free names used as entities must be assigned; their sorts are taken from
/// the universe and the formula is checked for well-formedness first.
pub fn evaluate(f: &Formula, u: &Universe, assignment: &Assignment) -> Result<bool, EvalError> {
    let mut ctx = SortContext::new();
    for atom in f.atoms() {
        let (entity_terms, relation) = match atom {
            Atom::PairIn(a, b, r) => (vec![a, b], Some(r)),
            _ => (atom.terms(), None),
        };
        for t in entity_terms.into_iter().filter(|t| t.kind == TermKind::Constant) {
            let h = assignment
                .get(&t.name)
                .ok_or_else(|| EvalError::Unbound(t.name.clone()))?;
            ctx.insert(t.name.clone(), u.sort(h)?);
        }
        if let Some(r) = relation {
            if r.kind == TermKind::Variable || !assignment.relations.contains_key(&r.name) {
                return Err(EvalError::NotARelation(r.name.clone()));
            }
        }
    }
    check_wff(f, &ctx).map_err(EvalError::IllFormed)?;
    let mut scope = Vec::new();
    Evaluator { u, assignment }.eval(f, &mut scope)
}

struct Evaluator<'a> {
    u: &'a Universe,
    assignment: &'a Assignment,
}

type Scope<'s> = Vec<(&'s str, Handle)>;

impl<'a> Evaluator<'a> {
    fn lookup(&self, t: &Term, scope: &Scope<'_>) -> Result<Handle, EvalError> {
        if t.kind == TermKind::Variable {
            if let Some((_, h)) = scope.iter().rev().find(|(n, _)| *n == t.name) {
                return Ok(*h);
            }
        }
        self.assignment
            .get(&t.name)
            .ok_or_else(|| EvalError::Unbound(t.name.clone()))
    }

    fn atom(&self, atom: &Atom, scope: &Scope<'_>) -> Result<bool, EvalError> {
        let u = self.u;
        Ok(match atom {
            Atom::Micro(t) => u.is_micro(self.lookup(t, scope)?)?,
            Atom::Macro(t) => u.is_macro(self.lookup(t, scope)?)?,
            Atom::Qset(t) => u.is_qset(self.lookup(t, scope)?)?,
            Atom::Indistinguishable(a, b) => {
                u.indistinguishable(self.lookup(a, scope)?, self.lookup(b, scope)?)?
            }
            Atom::Equal(a, b) => {
                u.extensionally_equal(self.lookup(a, scope)?, self.lookup(b, scope)?)?
            }
            Atom::Member(a, b) => {
                let (t, q) = (self.lookup(a, scope)?, self.lookup(b, scope)?);
                // nothing is a member of an atom
                u.is_qset(q)? && u.member_of(t, q)?
            }
            Atom::PairIn(a, b, r) => {
                let rel = self
                    .assignment
                    .relations
                    .get(&r.name)
                    .ok_or_else(|| EvalError::NotARelation(r.name.clone()))?;
                rel.contains(self.lookup(a, scope)?, self.lookup(b, scope)?)
            }
        })
    }

    fn range(&self, binder: &Binder) -> Vec<Handle> {
        match binder.sort {
            Some(s) => self.u.handles_of(s).collect(),
            None => self.u.handles().collect(),
        }
    }

    fn eval<'s>(&self, f: &'s Formula, scope: &mut Scope<'s>) -> Result<bool, EvalError> {
        Ok(match f {
            Formula::Atom(a) => self.atom(a, scope)?,
            Formula::Not(g) => !self.eval(g, scope)?,
            Formula::And(a, b) => self.eval(a, scope)? && self.eval(b, scope)?,
            Formula::Or(a, b) => self.eval(a, scope)? || self.eval(b, scope)?,
            Formula::Implies(a, b) => !self.eval(a, scope)? || self.eval(b, scope)?,
            Formula::Iff(a, b) => self.eval(a, scope)? == self.eval(b, scope)?,
            Formula::Forall(binder, body) => {
                for h in self.range(binder) {
                    scope.push((&binder.name, h));
                    let v = self.eval(body, scope);
                    scope.pop();
                    if !v? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Exists(binder, body) => {
                for h in self.range(binder) {
                    scope.push((&binder.name, h));
                    let v = self.eval(body, scope);
                    scope.pop();
                    if v? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }
}
