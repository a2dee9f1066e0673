//! Quasi-relations between qsets, their domain and range, and the
//! quasi-function predicate.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::universe::{Handle, Universe};

/// `⟨first, second⟩`
#[derive(Clone, Copy, Debug)]
pub struct OrderedPair {
    pub first: Handle,
    pub second: Handle,
}

/// A finite set of ordered pairs drawn from `source × target`.
///
/// Pairs are stored by handle; adding the same pair twice keeps one copy.
#[derive(Clone, Debug)]
pub struct QRelation {
    source: Handle,
    target: Handle,
    pairs: BTreeSet<(u32, u32)>,
}

impl QRelation {
    pub fn new(
        source: Handle,
        target: Handle,
        pairs: impl IntoIterator<Item = (Handle, Handle)>,
    ) -> Self {
        QRelation {
            source,
            target,
            pairs: pairs.into_iter().map(|(a, b)| (a.0, b.0)).collect(),
        }
    }

    pub fn source(&self) -> Handle {
        self.source
    }

    pub fn target(&self) -> Handle {
        self.target
    }

    pub fn insert(&mut self, first: Handle, second: Handle) {
        self.pairs.insert((first.0, second.0));
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = OrderedPair> + '_ {
        self.pairs.iter().map(|&(a, b)| OrderedPair {
            first: Handle(a),
            second: Handle(b),
        })
    }

    /// `⟨first, second⟩ ∈ w`, by handle.
    pub fn contains(&self, first: Handle, second: Handle) -> bool {
        self.pairs.contains(&(first.0, second.0))
    }

    /// Handles of first components, deduplicated.
    pub fn domain_members(&self) -> Vec<Handle> {
        let set: BTreeSet<u32> = self.pairs.iter().map(|p| p.0).collect();
        set.into_iter().map(Handle).collect()
    }

    /// Handles of second components, deduplicated.
    pub fn range_members(&self) -> Vec<Handle> {
        let set: BTreeSet<u32> = self.pairs.iter().map(|p| p.1).collect();
        set.into_iter().map(Handle).collect()
    }

    fn validate(&self, u: &Universe) -> Result<()> {
        if let Some(bad) = self.misplaced(u)? {
            return Err(bad);
        }
        Ok(())
    }

    fn misplaced(&self, u: &Universe) -> Result<Option<Error>> {
        let source = u.member_set(self.source)?;
        let target = u.member_set(self.target)?;
        for p in self.pairs() {
            u.sort(p.first)?;
            u.sort(p.second)?;
            if !source.contains(&p.first.0) {
                return Ok(Some(Error::InvalidRelation {
                    handle: p.first,
                    side: "source",
                }));
            }
            if !target.contains(&p.second.0) {
                return Ok(Some(Error::InvalidRelation {
                    handle: p.second,
                    side: "target",
                }));
            }
        }
        Ok(None)
    }
}

/// `R(w)`: every pair has its first component in the source and its second in
/// the target.
pub fn is_relation(u: &Universe, w: &QRelation) -> Result<bool> {
    Ok(w.misplaced(u)?.is_none())
}

/// `Dom(w)` as a newly registered qset.
pub fn domain(u: &mut Universe, w: &QRelation) -> Result<Handle> {
    w.validate(u)?;
    u.make_qset(w.domain_members())
}

/// `Rang(w)` as a newly registered qset.
pub fn range(u: &mut Universe, w: &QRelation) -> Result<Handle> {
    w.validate(u)?;
    u.make_qset(w.range_members())
}

/// Congruence half of the quasi-function predicate: `u ≡ u'` implies `v ≡ v'`
/// for every two pairs.
pub fn is_congruent(u: &Universe, f: &QRelation) -> Result<bool> {
    f.validate(u)?;
    let pairs: Vec<OrderedPair> = f.pairs().collect();
    for p in &pairs {
        for q in &pairs {
            if u.indistinguishable(p.first, q.first)? && !u.indistinguishable(p.second, q.second)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Totality half: every source element occurs as a first component.
pub fn is_total(u: &Universe, f: &QRelation) -> Result<bool> {
    f.validate(u)?;
    let firsts: BTreeSet<u32> = f.pairs.iter().map(|p| p.0).collect();
    Ok(u.member_set(f.source)?.iter().all(|x| firsts.contains(x)))
}

/// The quasi-function predicate: a relation that is total on its source and
/// maps indistinguishable inputs to indistinguishable outputs.
pub fn is_quasi_function(u: &Universe, f: &QRelation) -> Result<bool> {
    Ok(is_total(u, f)? && is_congruent(u, f)?)
}

/// Every `v` with some `⟨u', v⟩ ∈ f` and `u' ≡ x`.
pub fn qf_image_members(u: &Universe, f: &QRelation, x: Handle) -> Result<Vec<Handle>> {
    f.validate(u)?;
    u.sort(x)?;
    let mut out = BTreeSet::new();
    for p in f.pairs() {
        if u.indistinguishable(p.first, x)? {
            out.insert(p.second.0);
        }
    }
    if out.is_empty() {
        return Err(Error::Unmapped(x));
    }
    Ok(out.into_iter().map(Handle).collect())
}

/// Image of `x` under a quasi-function, registered as a qset. The result is
/// the whole class of values reachable from inputs indistinguishable from
/// `x`; no representative is chosen.
pub fn qf_image(u: &mut Universe, f: &QRelation, x: Handle) -> Result<Handle> {
    let members = qf_image_members(u, f, x)?;
    u.make_qset(members)
}
