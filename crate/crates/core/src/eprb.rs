//! The EPRB space `M = V ∪ [x]₂`.
//!
//! `V` is a union of open balls in `ℝⁿ` (the regions occupied by the two
//! spin-measurement devices), represented for auditing by finitely many
//! sample points, each registered as a macro-atom. `[x]₂` is a weak
//! singleton of two indistinguishable micro-atoms. Distances:
//!
//! | pair            | `d_q`                 |
//! |-----------------|-----------------------|
//! | point, point    | Euclidean distance    |
//! | atom, point     | `c`                   |
//! | atom, atom      | `0`                   |
//!
//! The triangle inequality through an atom bounds every Euclidean distance in
//! `V` by `2c`, which is why `V` must be bounded and why
//! [`validate_diameter`] checks the closed-form sup-diameter against `2c`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::metric::QuasiMetricSpace;
use crate::universe::{Handle, Species, Universe};

/// Relative margin a sample point must keep from a ball's boundary.
pub const INTERIOR_MARGIN: f64 = 1e-9;

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// An open ball in `ℝⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    center: Vec<f64>,
    radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::BadRadius(radius));
        }
        if center.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        Ok(Ball { center, radius })
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dimension(&self) -> usize {
        self.center.len()
    }

    /// Strict interior membership, keeping a relative margin of
    /// [`INTERIOR_MARGIN`] from the boundary.
    pub fn strictly_contains(&self, p: &[f64]) -> bool {
        p.len() == self.center.len()
            && euclidean(p, &self.center) < self.radius * (1.0 - INTERIOR_MARGIN)
    }
}

/// The region `V`: a nonempty union of open balls plus finitely many sample
/// points inside it.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionV {
    dimension: usize,
    balls: Vec<Ball>,
    sample_points: Vec<Vec<f64>>,
}

impl RegionV {
    pub fn new(dimension: usize, balls: Vec<Ball>, sample_points: Vec<Vec<f64>>) -> Result<Self> {
        if balls.is_empty() {
            return Err(Error::NoBalls);
        }
        for b in &balls {
            if b.dimension() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: b.dimension(),
                });
            }
        }
        let region = RegionV {
            dimension,
            balls,
            sample_points: Vec::new(),
        };
        for p in &sample_points {
            if p.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: p.len(),
                });
            }
            if region.owner(p).is_none() {
                return Err(Error::SampleOutsideBalls(p.clone()));
            }
        }
        Ok(RegionV {
            sample_points,
            ..region
        })
    }

    /// Draws `count` sample points uniformly from the balls, assigning them to
    /// balls round-robin. Deterministic in `seed`.
    pub fn sampled(dimension: usize, balls: Vec<Ball>, count: usize, seed: u64) -> Result<Self> {
        let empty = RegionV::new(dimension, balls, Vec::new())?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..count)
            .map(|i| sample_in_ball(&empty.balls[i % empty.balls.len()], &mut rng))
            .collect();
        RegionV::new(dimension, empty.balls, points)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn sample_points(&self) -> &[Vec<f64>] {
        &self.sample_points
    }

    /// First ball strictly containing `p`.
    pub fn owner(&self, p: &[f64]) -> Option<usize> {
        self.balls.iter().position(|b| b.strictly_contains(p))
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        self.owner(p).is_some()
    }

    /// Least upper bound of Euclidean distances between points of `V`, with
    /// the ball pair attaining it. For balls `i`, `j` the bound is
    /// `|c_i - c_j| + r_i + r_j` (which is `2 r_i` when `i = j`); it is never
    /// attained because the balls are open.
    pub fn sup_diameter(&self) -> (f64, (usize, usize)) {
        let mut best = (f64::NEG_INFINITY, (0, 0));
        for (i, a) in self.balls.iter().enumerate() {
            for (j, b) in self.balls.iter().enumerate().skip(i) {
                let d = euclidean(&a.center, &b.center) + a.radius + b.radius;
                if d > best.0 {
                    best = (d, (i, j));
                }
            }
        }
        best
    }

    /// Applies `p ↦ R p + t` to every ball center and sample point.
    pub fn transformed(&self, rotation: &[Vec<f64>], translation: &[f64]) -> Result<Self> {
        let map = |p: &[f64]| -> Vec<f64> {
            rotation
                .iter()
                .zip(translation)
                .map(|(row, t)| row.iter().zip(p).map(|(r, x)| r * x).sum::<f64>() + t)
                .collect()
        };
        let balls = self
            .balls
            .iter()
            .map(|b| Ball::new(map(&b.center), b.radius))
            .collect::<Result<Vec<_>>>()?;
        let points = self.sample_points.iter().map(|p| map(p)).collect();
        RegionV::new(self.dimension, balls, points)
    }
}

fn sample_in_ball(ball: &Ball, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = ball.dimension();
    let dir: Vec<f64> = loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            break v.into_iter().map(|x| x / norm).collect();
        }
    };
    let u: f64 = rng.random();
    let r = ball.radius * u.powf(1.0 / n as f64) * (1.0 - 1e-6);
    ball.center
        .iter()
        .zip(dir)
        .map(|(c, d)| c + r * d)
        .collect()
}

/// Outcome of checking `sup-diameter(V) ≤ 2c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiameterCheck {
    pub admissible: bool,
    pub sup_diameter: f64,
    /// Ball pair realizing the sup-diameter.
    pub witness: (usize, usize),
}

impl DiameterCheck {
    /// Smallest `c` the region admits: `D / 2`.
    pub fn minimal_c(&self) -> f64 {
        self.sup_diameter / 2.0
    }
}

/// Checks `sup-diameter(V) ≤ 2c` in closed form. The boundary case is
/// accepted: the sup over open balls is not attained.
pub fn validate_diameter(region: &RegionV, c: f64) -> DiameterCheck {
    let (sup_diameter, witness) = region.sup_diameter();
    DiameterCheck {
        admissible: sup_diameter <= 2.0 * c,
        sup_diameter,
        witness,
    }
}

/// An argument to [`eprb_distance`]: a registered entity of the space, or a
/// point of `V` given by coordinates.
#[derive(Clone, Copy, Debug)]
pub enum Site<'a> {
    Entity(Handle),
    Point(&'a [f64]),
}

enum Resolved<'a> {
    Atom,
    Point(&'a [f64]),
}

/// A concrete EPRB space with its own universe.
#[derive(Clone, Debug)]
pub struct EprbSpace {
    universe: Universe,
    region: RegionV,
    c: f64,
    atoms: [Handle; 2],
    pair: Handle,
    points: Vec<Handle>,
    point_index: HashMap<u32, usize>,
    carrier: Handle,
}

/// Builds `M = V ∪ [x]₂` after checking `c > 0` and `sup-diameter(V) ≤ 2c`.
///
/// Two micro-atoms of `species` are registered in `universe`; their weak
/// singleton must have quasi-cardinality exactly 2, so the universe must not
/// already hold atoms of that species.
pub fn build_eprb(universe: Universe, region: RegionV, c: f64, species: &str) -> Result<EprbSpace> {
    check_c(c)?;
    let check = validate_diameter(&region, c);
    if !check.admissible {
        return Err(Error::DiameterExceeded {
            sup_diameter: check.sup_diameter,
            c,
            witness: check.witness,
        });
    }
    build_eprb_unchecked(universe, region, c, species)
}

/// Same as [`build_eprb`] but skips the diameter check, for planting A2
/// defects that the audit should then catch.
pub fn build_eprb_unchecked(
    mut universe: Universe,
    region: RegionV,
    c: f64,
    species: &str,
) -> Result<EprbSpace> {
    check_c(c)?;
    let x1 = universe.add_micro_atom(species)?;
    let x2 = universe.add_micro_atom(species)?;
    let pair = universe.weak_pair(x1, x2)?;
    let qc = universe.quasi_cardinality(pair)?.value();
    if qc != 2 {
        return Err(Error::PairCardinality(qc));
    }
    let mut points = Vec::with_capacity(region.sample_points.len());
    let mut point_index = HashMap::new();
    for (i, p) in region.sample_points.iter().enumerate() {
        let h = universe.add_macro_atom(&coordinate_label(p))?;
        point_index.insert(h.0, i);
        points.push(h);
    }
    let vq = universe.make_qset(points.iter().copied())?;
    let carrier = universe.qset_union(vq, pair)?;
    Ok(EprbSpace {
        universe,
        region,
        c,
        atoms: [x1, x2],
        pair,
        points,
        point_index,
        carrier,
    })
}

fn check_c(c: f64) -> Result<()> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveC(c))
    }
}

/// Label of the macro-atom standing for a point: its coordinates, so that
/// coincident sample points are indistinguishable.
pub fn coordinate_label(p: &[f64]) -> String {
    let parts: Vec<String> = p.iter().map(|x| format!("{}", x + 0.0)).collect();
    format!("({})", parts.join(", "))
}

impl EprbSpace {
    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn region(&self) -> &RegionV {
        &self.region
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// The weak singleton `[x]₂`.
    pub fn pair(&self) -> Handle {
        self.pair
    }

    pub fn atoms(&self) -> [Handle; 2] {
        self.atoms
    }

    /// Macro-atoms standing for the sample points, in sample order.
    pub fn point_handles(&self) -> &[Handle] {
        &self.points
    }

    /// The finite carrier: sample points ∪ `[x]₂`.
    pub fn carrier(&self) -> Handle {
        self.carrier
    }

    fn resolve<'a>(&'a self, site: Site<'a>) -> Result<Resolved<'a>> {
        match site {
            Site::Entity(h) => {
                if self.universe.member_of(h, self.pair)? {
                    Ok(Resolved::Atom)
                } else if let Some(&i) = self.point_index.get(&h.0) {
                    Ok(Resolved::Point(&self.region.sample_points[i]))
                } else {
                    Err(Error::NotInCarrier(h))
                }
            }
            Site::Point(p) => {
                if p.len() == self.region.dimension && self.region.contains(p) {
                    Ok(Resolved::Point(p))
                } else {
                    Err(Error::OutsideRegion(p.to_vec()))
                }
            }
        }
    }

    /// `d_q(x, y)`
    pub fn distance(&self, x: Site<'_>, y: Site<'_>) -> Result<f64> {
        Ok(match (self.resolve(x)?, self.resolve(y)?) {
            (Resolved::Atom, Resolved::Atom) => 0.0,
            (Resolved::Atom, Resolved::Point(_)) | (Resolved::Point(_), Resolved::Atom) => self.c,
            (Resolved::Point(a), Resolved::Point(b)) => euclidean(a, b),
        })
    }

    /// The space as a [`QuasiMetricSpace`] over its finite carrier.
    pub fn to_quasi_metric_space(&self) -> QuasiMetricSpace<'_> {
        QuasiMetricSpace::from_fn(&self.universe, self.carrier, move |a, b| {
            self.distance(Site::Entity(a), Site::Entity(b))
                .expect("carrier members always resolve")
        })
        .expect("carrier is a qset")
    }
}

pub fn eprb_distance(s: &EprbSpace, x: Site<'_>, y: Site<'_>) -> Result<f64> {
    s.distance(x, y)
}

pub fn to_quasi_metric_space(s: &EprbSpace) -> QuasiMetricSpace<'_> {
    s.to_quasi_metric_space()
}

/// Two points of `ℝⁿ` farther apart than `2c`, together with the 3-element
/// space `{a, x, b}` (with `m(x)`) in which the triangle inequality
/// `d(a, b) ≤ d(a, x) + d(x, b) = 2c` fails. Shows that `V` cannot be all of
/// `ℝⁿ`.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: f64,
    pub euclidean: f64,
    universe: Universe,
    handles: [Handle; 3],
    carrier: Handle,
}

pub fn counterexample_unbounded(c: f64, n: usize) -> Result<Counterexample> {
    check_c(c)?;
    if n == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    let a = vec![0.0; n];
    let mut b = vec![0.0; n];
    b[0] = 2.0 * c + 1.0;
    let mut universe = Universe::new([Species::new("x", "entangled pair member")])?;
    let ha = universe.add_macro_atom(&coordinate_label(&a))?;
    let hx = universe.add_micro_atom("x")?;
    let hb = universe.add_macro_atom(&coordinate_label(&b))?;
    let carrier = universe.make_qset([ha, hx, hb])?;
    Ok(Counterexample {
        euclidean: euclidean(&a, &b),
        a,
        b,
        c,
        universe,
        handles: [ha, hx, hb],
        carrier,
    })
}

impl Counterexample {
    /// `d_E(a, b) - 2c`, positive by construction.
    pub fn deficit(&self) -> f64 {
        self.euclidean - 2.0 * self.c
    }

    /// `(a, x, b)`, the triple whose triangle check fails.
    pub fn triple(&self) -> [Handle; 3] {
        self.handles
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn diagnostic(&self) -> String {
        format!(
            "d_E(a, b) = {} > d_q(a, x) + d_q(x, b) = 2c = {}; triangle deficit {}",
            self.euclidean,
            2.0 * self.c,
            self.deficit()
        )
    }

    pub fn space(&self) -> QuasiMetricSpace<'_> {
        let [ha, hx, hb] = self.handles;
        let (c, e) = (self.c, self.euclidean);
        let kind = move |h: Handle| {
            if h.0 == hx.0 {
                0
            } else if h.0 == ha.0 {
                1
            } else {
                debug_assert_eq!(h.0, hb.0);
                2
            }
        };
        QuasiMetricSpace::from_fn(&self.universe, self.carrier, move |x, y| {
            match (kind(x), kind(y)) {
                (0, 0) => 0.0,
                (0, _) | (_, 0) => c,
                (p, q) if p == q => 0.0,
                _ => e,
            }
        })
        .expect("carrier is a qset")
    }
}
