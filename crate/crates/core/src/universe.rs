//! Finite universes of micro-atoms, macro-atoms and qsets.
//!
//! Entities are addressed through opaque [`Handle`]s. A handle names a
//! *registration*, not an object: two micro-atoms of the same species are
//! indistinguishable, yet they occupy two registrations so that a qset can
//! hold both of them. `Handle` implements neither `PartialEq`
//! nor `Hash`; the only comparisons the kernel offers are
//! [`Universe::indistinguishable`] (defined on every sort) and
//! [`Universe::extensionally_equal`] (which refuses micro-atoms).

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Opaque reference to an entity registered in a [`Universe`].
#[derive(Clone, Copy, Debug)]
pub struct Handle(pub(crate) u32);

impl Handle {
    pub(crate) fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Handle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// The three sorts of the universe, corresponding to the predicates
/// `m(x)`, `M(x)` and `Q(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Micro,
    Macro,
    Qset,
}

impl Sort {
    pub const ALL: [Sort; 3] = [Sort::Micro, Sort::Macro, Sort::Qset];

    pub fn name(self) -> &'static str {
        match self {
            Sort::Micro => "MICRO",
            Sort::Macro => "MACRO",
            Sort::Qset => "QSET",
        }
    }

    /// Parses `MICRO`, `MACRO` or `QSET` (case-insensitive).
    pub fn parse(s: &str) -> Option<Sort> {
        match s.to_ascii_uppercase().as_str() {
            "MICRO" => Some(Sort::Micro),
            "MACRO" => Some(Sort::Macro),
            "QSET" => Some(Sort::Qset),
            _ => None,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Species {
    pub id: String,
    pub description: String,
}

impl Species {
    pub fn new(id: impl Into<String>, description: impl Into<String>) -> Self {
        Species {
            id: id.into(),
            description: description.into(),
        }
    }
}

/// Quasi-cardinality of a qset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cardinal(pub usize);

impl Cardinal {
    pub fn value(self) -> usize {
        self.0
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Debug)]
enum Entity {
    Micro { species: usize },
    Macro { label: String },
    Qset { members: BTreeSet<u32> },
}

impl Entity {
    fn sort(&self) -> Sort {
        match self {
            Entity::Micro { .. } => Sort::Micro,
            Entity::Macro { .. } => Sort::Macro,
            Entity::Qset { .. } => Sort::Qset,
        }
    }
}

/// A finite universe. Construction methods take `&mut self`; every query is
/// a pure function of `&self`.
#[derive(Clone, Debug)]
pub struct Universe {
    species: Vec<Species>,
    entities: Vec<Entity>,
}

impl Universe {
    pub fn new(species: impl IntoIterator<Item = Species>) -> Result<Self> {
        let mut table: Vec<Species> = Vec::new();
        for s in species {
            if table.iter().any(|t| t.id == s.id) {
                return Err(Error::DuplicateSpecies(s.id));
            }
            table.push(s);
        }
        Ok(Universe {
            species: table,
            entities: Vec::new(),
        })
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    /// Every registered handle, in registration order.
    pub fn handles(&self) -> impl ExactSizeIterator<Item = Handle> + '_ {
        (0..self.entities.len() as u32).map(Handle)
    }

    /// Registered handles of one sort, in registration order.
    pub fn handles_of(&self, sort: Sort) -> impl Iterator<Item = Handle> + '_ {
        self.handles().filter(move |h| self.entities[h.index()].sort() == sort)
    }

    fn push(&mut self, entity: Entity) -> Handle {
        let handle = Handle(self.entities.len() as u32);
        self.entities.push(entity);
        handle
    }

    fn entity(&self, h: Handle) -> Result<&Entity> {
        self.entities.get(h.index()).ok_or(Error::DanglingHandle(h))
    }

    pub fn add_micro_atom(&mut self, species: &str) -> Result<Handle> {
        let idx = self
            .species
            .iter()
            .position(|s| s.id == species)
            .ok_or_else(|| Error::UnknownSpecies(species.to_string()))?;
        Ok(self.push(Entity::Micro { species: idx }))
    }

    pub fn add_macro_atom(&mut self, label: &str) -> Result<Handle> {
        if label.is_empty() {
            return Err(Error::EmptyLabel);
        }
        Ok(self.push(Entity::Macro {
            label: label.to_string(),
        }))
    }

    /// Registers a qset with the given members. Repeated handles collapse.
    pub fn make_qset(&mut self, members: impl IntoIterator<Item = Handle>) -> Result<Handle> {
        let mut set = BTreeSet::new();
        for m in members {
            self.entity(m)?;
            set.insert(m.0);
        }
        Ok(self.push(Entity::Qset { members: set }))
    }

    pub fn sort(&self, h: Handle) -> Result<Sort> {
        Ok(self.entity(h)?.sort())
    }

    /// `m(h)`
    pub fn is_micro(&self, h: Handle) -> Result<bool> {
        Ok(self.sort(h)? == Sort::Micro)
    }

    /// `M(h)`
    pub fn is_macro(&self, h: Handle) -> Result<bool> {
        Ok(self.sort(h)? == Sort::Macro)
    }

    /// `Q(h)`
    pub fn is_qset(&self, h: Handle) -> Result<bool> {
        Ok(self.sort(h)? == Sort::Qset)
    }

    /// Species of a micro-atom; `None` for other sorts.
    pub fn species_of(&self, h: Handle) -> Result<Option<&Species>> {
        Ok(match self.entity(h)? {
            Entity::Micro { species } => Some(&self.species[*species]),
            _ => None,
        })
    }

    /// Label of a macro-atom; `None` for other sorts.
    pub fn label_of(&self, h: Handle) -> Result<Option<&str>> {
        Ok(match self.entity(h)? {
            Entity::Macro { label } => Some(label.as_str()),
            _ => None,
        })
    }

    pub(crate) fn member_set(&self, q: Handle) -> Result<&BTreeSet<u32>> {
        match self.entity(q)? {
            Entity::Qset { members } => Ok(members),
            other => Err(Error::NotAQset {
                handle: q,
                found: other.sort(),
            }),
        }
    }

    /// Members of a qset, in registration order.
    pub fn members(&self, q: Handle) -> Result<Vec<Handle>> {
        Ok(self.member_set(q)?.iter().map(|&i| Handle(i)).collect())
    }

    /// The indistinguishability relation `≡`.
    ///
    /// Micro-atoms are indistinguishable iff they share a species, macro-atoms
    /// iff they share a label, qsets iff they are extensionally equal. Entities
    /// of different sorts are never indistinguishable.
    pub fn indistinguishable(&self, x: Handle, y: Handle) -> Result<bool> {
        let (ex, ey) = (self.entity(x)?, self.entity(y)?);
        Ok(match (ex, ey) {
            (Entity::Micro { species: a }, Entity::Micro { species: b }) => a == b,
            (Entity::Macro { label: a }, Entity::Macro { label: b }) => a == b,
            (Entity::Qset { members: a }, Entity::Qset { members: b }) => a == b,
            _ => false,
        })
    }

    /// Extensional equality `=_E`, defined only when neither side is a
    /// micro-atom.
    pub fn extensionally_equal(&self, x: Handle, y: Handle) -> Result<bool> {
        let (ex, ey) = (self.entity(x)?, self.entity(y)?);
        if let Entity::Micro { .. } = ex {
            return Err(Error::IdentityUndefined(x));
        }
        if let Entity::Micro { .. } = ey {
            return Err(Error::IdentityUndefined(y));
        }
        Ok(match (ex, ey) {
            (Entity::Qset { members: a }, Entity::Qset { members: b }) => a == b,
            (Entity::Macro { .. }, Entity::Macro { .. }) => self.indistinguishable(x, y)?,
            _ => false,
        })
    }

    /// Every registered entity indistinguishable from `x` or from `y`, without
    /// registering anything.
    pub fn weak_pair_members(&self, x: Handle, y: Handle) -> Result<Vec<Handle>> {
        self.entity(x)?;
        self.entity(y)?;
        let mut out = Vec::new();
        for t in self.handles() {
            if self.indistinguishable(t, x)? || self.indistinguishable(t, y)? {
                out.push(t);
            }
        }
        Ok(out)
    }

    /// The weak pair `[x, y]`: a new qset holding every entity
    /// indistinguishable from `x` or from `y`.
    pub fn weak_pair(&mut self, x: Handle, y: Handle) -> Result<Handle> {
        let members = self.weak_pair_members(x, y)?;
        self.make_qset(members)
    }

    /// The weak singleton `[x]`. Its quasi-cardinality may exceed 1.
    pub fn weak_singleton(&mut self, x: Handle) -> Result<Handle> {
        self.weak_pair(x, x)
    }

    /// `qc(q)`
    pub fn quasi_cardinality(&self, q: Handle) -> Result<Cardinal> {
        Ok(Cardinal(self.member_set(q)?.len()))
    }

    /// `t ∈ q`, decided by handle.
    pub fn member_of(&self, t: Handle, q: Handle) -> Result<bool> {
        self.entity(t)?;
        Ok(self.member_set(q)?.contains(&t.0))
    }

    pub fn qset_union(&mut self, a: Handle, b: Handle) -> Result<Handle> {
        let mut set = self.member_set(a)?.clone();
        set.extend(self.member_set(b)?.iter().copied());
        Ok(self.push(Entity::Qset { members: set }))
    }
}
