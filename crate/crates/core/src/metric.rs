//! Quasi-metric spaces over finite carriers and the axiom audit.
//!
//! A quasi-metric space is a nonempty qset `X` with a real-valued distance on
//! `X × X` that vanishes exactly on indistinguishable pairs, is positive on
//! distinguishable ones, is symmetric, and satisfies the triangle inequality.
//! [`audit_axioms`] checks all six conditions exhaustively and records every
//! failure with its witnesses.
//!
//! Tolerance policy: `ε` is applied only where it makes a check more lenient,
//! so a space that passes at some `ε` passes at every larger one. Concretely,
//! an indistinguishable pair must have `|d| ≤ ε` and a distinguishable pair
//! must have `d > 0` exactly; symmetry allows a gap of `ε`; the triangle
//! inequality allows a slack of `ε`.


// Checks are written as negated comparisons so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::universe::{Handle, Universe};

pub const DEFAULT_EPSILON: f64 = 1e-9;

type DistanceFn<'u> = Box<dyn Fn(Handle, Handle) -> f64 + Send + Sync + 'u>;

enum DistanceMap<'u> {
    /// Row-major over carrier positions.
    Dense(Vec<f64>),
    Callable(DistanceFn<'u>),
}

/// A carrier qset together with a distance on ordered pairs of its members.
pub struct QuasiMetricSpace<'u> {
    universe: &'u Universe,
    carrier: Handle,
    members: Vec<Handle>,
    position: HashMap<u32, usize>,
    distance: DistanceMap<'u>,
}

impl fmt::Debug for QuasiMetricSpace<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuasiMetricSpace")
            .field("carrier", &self.carrier)
            .field("members", &self.members)
            .finish_non_exhaustive()
    }
}

impl<'u> QuasiMetricSpace<'u> {
    fn carrier_parts(universe: &Universe, carrier: Handle) -> Result<(Vec<Handle>, HashMap<u32, usize>)> {
        let members = universe.members(carrier)?;
        let position = members.iter().enumerate().map(|(i, h)| (h.0, i)).collect();
        Ok((members, position))
    }

    /// Distances given as a square matrix indexed by the carrier's members in
    /// registration order (the order of [`Universe::members`]).
    pub fn dense(universe: &'u Universe, carrier: Handle, matrix: Vec<Vec<f64>>) -> Result<Self> {
        let (members, position) = Self::carrier_parts(universe, carrier)?;
        let n = members.len();
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::BadDistanceMatrix { expected: n });
        }
        Ok(QuasiMetricSpace {
            universe,
            carrier,
            members,
            position,
            distance: DistanceMap::Dense(matrix.into_iter().flatten().collect()),
        })
    }

    /// Distances computed on demand by a closure over member handles.
    pub fn from_fn<F>(universe: &'u Universe, carrier: Handle, distance: F) -> Result<Self>
    where
        F: Fn(Handle, Handle) -> f64 + Send + Sync + 'u,
    {
        let (members, position) = Self::carrier_parts(universe, carrier)?;
        Ok(QuasiMetricSpace {
            universe,
            carrier,
            members,
            position,
            distance: DistanceMap::Callable(Box::new(distance)),
        })
    }

    pub fn universe(&self) -> &'u Universe {
        self.universe
    }

    pub fn carrier(&self) -> Handle {
        self.carrier
    }

    pub fn members(&self) -> &[Handle] {
        &self.members
    }

    fn pos(&self, h: Handle) -> Result<usize> {
        self.position.get(&h.0).copied().ok_or(Error::NotInCarrier(h))
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        match &self.distance {
            DistanceMap::Dense(m) => m[i * self.members.len() + j],
            DistanceMap::Callable(f) => f(self.members[i], self.members[j]),
        }
    }

    /// `d(x, y)`
    pub fn distance(&self, x: Handle, y: Handle) -> Result<f64> {
        Ok(self.at(self.pos(x)?, self.pos(y)?))
    }
}

/// `d(x, y)` for members of the carrier.
pub fn qm_distance(s: &QuasiMetricSpace<'_>, x: Handle, y: Handle) -> Result<f64> {
    s.distance(x, y)
}

/// The six conditions of a quasi-metric space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axiom {
    NonEmptyCarrier,
    RealValued,
    ZeroIffIndistinguishable,
    PositiveIffDistinguishable,
    Symmetry,
    Triangle,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::NonEmptyCarrier,
        Axiom::RealValued,
        Axiom::ZeroIffIndistinguishable,
        Axiom::PositiveIffDistinguishable,
        Axiom::Symmetry,
        Axiom::Triangle,
    ];

    /// Item number, 1 through 6.
    pub fn id(self) -> u8 {
        self as u8 + 1
    }

    pub fn description(self) -> &'static str {
        match self {
            Axiom::NonEmptyCarrier => "carrier is nonempty",
            Axiom::RealValued => "d is a real-valued function on X x X",
            Axiom::ZeroIffIndistinguishable => "d(x,y) = 0 iff x ~ y",
            Axiom::PositiveIffDistinguishable => "d(x,y) > 0 iff not x ~ y",
            Axiom::Symmetry => "d(x,y) = d(y,x)",
            Axiom::Triangle => "d(x,z) <= d(x,y) + d(y,z)",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "axiom {} ({})", self.id(), self.description())
    }
}

/// One failed check. `witnesses` lists the carrier members involved, and
/// `values` the distances the check looked at: `[d(x,y)]` for pair checks,
/// `[d(x,y), d(y,x)]` for symmetry, `[d(x,z), d(x,y), d(y,z)]` for the
/// triangle inequality.
#[derive(Clone, Debug)]
pub struct Violation {
    pub axiom: Axiom,
    pub witnesses: Vec<Handle>,
    pub values: Vec<f64>,
}

/// `x ≡ x'` but `d(x, y)` and `d(x', y)` differ by more than `ε`. Not one of
/// the six axioms; it follows from items 3, 5 and 6 and is reported on the
/// side.
#[derive(Clone, Debug)]
pub struct CongruenceFlag {
    pub x: Handle,
    pub x_prime: Handle,
    pub y: Handle,
    pub values: [f64; 2],
}

#[derive(Clone, Debug)]
pub struct AuditReport {
    pub passed: bool,
    pub violations: Vec<Violation>,
    pub congruence_flags: Vec<CongruenceFlag>,
    pub carrier_size: usize,
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub epsilon: f64,
}

impl AuditReport {
    pub fn violations_of(&self, axiom: Axiom) -> impl Iterator<Item = &Violation> + '_ {
        self.violations.iter().filter(move |v| v.axiom == axiom)
    }

    pub fn holds(&self, axiom: Axiom) -> bool {
        self.violations_of(axiom).next().is_none()
    }

    /// Number of axioms with no recorded violation.
    pub fn axioms_verified(&self) -> usize {
        Axiom::ALL.iter().filter(|&&a| self.holds(a)).count()
    }

    pub fn summary(&self) -> String {
        format!(
            "{}/6 axioms verified, {} pairs, {} triples",
            self.axioms_verified(),
            self.pairs_checked,
            self.triples_checked
        )
    }
}

pub fn audit_axioms(s: &QuasiMetricSpace<'_>) -> Result<AuditReport> {
    audit_axioms_with(s, DEFAULT_EPSILON)
}

/// Exhaustive audit: `|X|²` pair checks (items 2 through 5) and `|X|³`
/// triangle checks. Every violation is recorded.
pub fn audit_axioms_with(s: &QuasiMetricSpace<'_>, epsilon: f64) -> Result<AuditReport> {
    let u = s.universe;
    let n = s.members.len();
    let mut violations = Vec::new();

    if n == 0 {
        violations.push(Violation {
            axiom: Axiom::NonEmptyCarrier,
            witnesses: vec![s.carrier],
            values: vec![],
        });
    }

    let mut d = vec![0.0; n * n];
    let mut same = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            d[i * n + j] = s.at(i, j);
            same[i * n + j] = u.indistinguishable(s.members[i], s.members[j])?;
        }
    }
    let dist = |i: usize, j: usize| d[i * n + j];
    let pair = |i: usize, j: usize| vec![s.members[i], s.members[j]];

    for i in 0..n {
        for j in 0..n {
            let v = dist(i, j);
            if !v.is_finite() {
                violations.push(Violation {
                    axiom: Axiom::RealValued,
                    witnesses: pair(i, j),
                    values: vec![v],
                });
            }
            let indist = same[i * n + j];
            // item 3: x ≡ y ⇒ d ≈ 0, and d = 0 ⇒ x ≡ y
            if (indist && !(v.abs() <= epsilon)) || (!indist && v == 0.0) {
                violations.push(Violation {
                    axiom: Axiom::ZeroIffIndistinguishable,
                    witnesses: pair(i, j),
                    values: vec![v],
                });
            }
            // item 4: ¬(x ≡ y) ⇒ d > 0, and d > 0 ⇒ ¬(x ≡ y)
            if (!indist && !(v > 0.0)) || (indist && v > epsilon) {
                violations.push(Violation {
                    axiom: Axiom::PositiveIffDistinguishable,
                    witnesses: pair(i, j),
                    values: vec![v],
                });
            }
            if i < j {
                let w = dist(j, i);
                if !((v - w).abs() <= epsilon) {
                    violations.push(Violation {
                        axiom: Axiom::Symmetry,
                        witnesses: pair(i, j),
                        values: vec![v, w],
                    });
                }
            }
        }
    }

    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (xz, xy, yz) = (dist(i, k), dist(i, j), dist(j, k));
                if !(xz <= xy + yz + epsilon) {
                    violations.push(Violation {
                        axiom: Axiom::Triangle,
                        witnesses: vec![s.members[i], s.members[j], s.members[k]],
                        values: vec![xz, xy, yz],
                    });
                }
            }
        }
    }

    let mut congruence_flags = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || !same[i * n + j] {
                continue;
            }
            for k in 0..n {
                let (a, b) = (dist(i, k), dist(j, k));
                if !((a - b).abs() <= epsilon) {
                    congruence_flags.push(CongruenceFlag {
                        x: s.members[i],
                        x_prime: s.members[j],
                        y: s.members[k],
                        values: [a, b],
                    });
                }
            }
        }
    }

    Ok(AuditReport {
        passed: violations.is_empty(),
        violations,
        congruence_flags,
        carrier_size: n,
        pairs_checked: n * n,
        triples_checked: n * n * n,
        epsilon,
    })
}
