//! Two-electron spin singlet and its measurement statistics.
//!
//! Joint probabilities are obtained from the 4-dimensional state vector by
//! projector arithmetic: `P(s₁, s₂) = ⟨ψ| Π_a(s₁) ⊗ Π_b(s₂) |ψ⟩` with
//! `Π_n(s) = (I + s n·σ) / 2`. The state itself is never rotated.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Spin outcome along a measurement axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Up, Spin::Down];

    pub fn sign(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }

    fn bit(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Spin::Up => '+',
            Spin::Down => '-',
        }
    }
}

/// All four outcome cells in basis order `++, +-, -+, --`.
pub const OUTCOMES: [(Spin, Spin); 4] = [
    (Spin::Up, Spin::Up),
    (Spin::Up, Spin::Down),
    (Spin::Down, Spin::Up),
    (Spin::Down, Spin::Down),
];

fn cell(s1: Spin, s2: Spin) -> usize {
    2 * s1.bit() + s2.bit()
}

/// A unit 3-vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis([f64; 3]);

impl Axis {
    pub const Z: Axis = Axis([0.0, 0.0, 1.0]);
    pub const X: Axis = Axis([1.0, 0.0, 0.0]);

    /// Accepts only vectors of unit norm (within 1e-12).
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(direction: [f64; 3]) -> Result<Self> {
        let norm = norm3(direction);
        if !((norm - 1.0).abs() <= 1e-12) {
            return Err(Error::NonUnitAxis(norm));
        }
        Ok(Axis(direction))
    }

    /// Normalizes any nonzero finite vector.
    pub fn normalized(direction: [f64; 3]) -> Result<Self> {
        let norm = norm3(direction);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::DegenerateAxis);
        }
        Ok(Axis(direction.map(|x| x / norm)))
    }

    pub fn direction(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &Axis) -> f64 {
        self.0.iter().zip(other.0).map(|(a, b)| a * b).sum()
    }

    pub fn opposite(&self) -> Axis {
        Axis(self.0.map(|x| -x))
    }
}

fn norm3(v: [f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Amplitudes over the product basis `++, +-, -+, --` (quantization axis z).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingletState {
    amplitudes: [Complex64; 4],
}

/// `(|z+; z-⟩ - |z-; z+⟩) / √2`
pub fn singlet_state() -> SingletState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    SingletState {
        amplitudes: [
            Complex64::new(0.0, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(-h, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    }
}

impl SingletState {
    pub fn amplitude(&self, s1: Spin, s2: Spin) -> Complex64 {
        self.amplitudes[cell(s1, s2)]
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        self.amplitudes
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

type Mat2 = [[Complex64; 2]; 2];
type Mat4 = [[Complex64; 4]; 4];

/// `Π_n(s) = (I + s n·σ) / 2`
fn projector(axis: &Axis, s: Spin) -> Mat2 {
    let [x, y, z] = axis.0;
    let k = 0.5 * s.sign();
    let c = |re: f64, im: f64| Complex64::new(re, im);
    // n·σ = [[z, x - i y], [x + i y, -z]]
    [
        [c(0.5 + k * z, 0.0), c(k * x, -k * y)],
        [c(k * x, k * y), c(0.5 - k * z, 0.0)],
    ]
}

fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn expectation(psi: &[Complex64; 4], op: &Mat4) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            acc += psi[i].conj() * op[i][j] * psi[j];
        }
    }
    acc
}

/// `P(s₁, s₂)` for the four cells, in [`OUTCOMES`] order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JointDistribution(pub [f64; 4]);

impl JointDistribution {
    pub fn get(&self, s1: Spin, s2: Spin) -> f64 {
        self.0[cell(s1, s2)]
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// Joint outcome distribution for measuring particle 1 along `a` and
/// particle 2 along `b` in the singlet state.
pub fn joint_distribution(a: &Axis, b: &Axis) -> JointDistribution {
    let psi = singlet_state().amplitudes;
    let mut p = [0.0; 4];
    for (s1, s2) in OUTCOMES {
        let op = kron(&projector(a, s1), &projector(b, s2));
        p[cell(s1, s2)] = expectation(&psi, &op).re;
    }
    JointDistribution(p)
}

/// `E(a, b) = Σ s₁ s₂ P(s₁, s₂)`
pub fn correlation(a: &Axis, b: &Axis) -> f64 {
    let p = joint_distribution(a, b);
    OUTCOMES
        .iter()
        .map(|&(s1, s2)| s1.sign() * s2.sign() * p.get(s1, s2))
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct OutcomeTally {
    counts: [u64; 4],
    total: u64,
}

impl OutcomeTally {
    pub fn count(&self, s1: Spin, s2: Spin) -> u64 {
        self.counts[cell(s1, s2)]
    }

    pub fn counts(&self) -> [u64; 4] {
        self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn frequency(&self, s1: Spin, s2: Spin) -> f64 {
        self.count(s1, s2) as f64 / self.total as f64
    }

    /// Empirical `E(a, b)`.
    pub fn correlation(&self) -> f64 {
        OUTCOMES
            .iter()
            .map(|&(s1, s2)| s1.sign() * s2.sign() * self.frequency(s1, s2))
            .sum()
    }
}

impl fmt::Display for OutcomeTally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s1, s2)) in OUTCOMES.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}{}={}", s1.symbol(), s2.symbol(), self.count(*s1, *s2))?;
        }
        write!(f, " total={}", self.total)
    }
}

/// Cells below this probability are floating-point residue of exact zeros
/// and are never sampled.
const CELL_FLOOR: f64 = 1e-14;

/// Draws `n` joint outcomes. Deterministic in `(a, b, n, seed)`; the stream
/// comes from ChaCha8 seeded with `seed`.
pub fn sample_outcomes(a: &Axis, b: &Axis, n: u64, seed: u64) -> Result<OutcomeTally> {
    if n == 0 {
        return Err(Error::NoSamples);
    }
    let mut p = joint_distribution(a, b).0.map(|x| if x < CELL_FLOOR { 0.0 } else { x });
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    let mut cumulative = [0.0; 4];
    let mut acc = 0.0;
    for (c, x) in cumulative.iter_mut().zip(p) {
        acc += x;
        *c = acc;
    }
    let last = p.iter().rposition(|&x| x > 0.0).unwrap_or(3);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [0u64; 4];
    for _ in 0..n {
        let u: f64 = rng.random();
        let k = (0..4).find(|&k| p[k] > 0.0 && u < cumulative[k]).unwrap_or(last);
        counts[k] += 1;
    }
    Ok(OutcomeTally { counts, total: n })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn axis_at(theta: f64) -> Axis {
        Axis::new([theta.sin(), 0.0, theta.cos()]).unwrap()
    }

    #[test]
    fn state() {
        let s = singlet_state();
        assert!((s.norm_squared() - 1.0).abs() < TOL);
        assert_eq!(s.amplitude(Spin::Up, Spin::Up), Complex64::new(0.0, 0.0));
        assert_eq!(s.amplitude(Spin::Down, Spin::Down), Complex64::new(0.0, 0.0));
        assert!((s.amplitude(Spin::Up, Spin::Down).re - 1.0 / 2f64.sqrt()).abs() < TOL);
        assert_eq!(
            s.amplitude(Spin::Up, Spin::Down),
            -s.amplitude(Spin::Down, Spin::Up)
        );
    }

    #[test]
    fn parallel_axes_anticorrelate() {
        let p = joint_distribution(&Axis::Z, &Axis::Z);
        assert!(p.get(Spin::Up, Spin::Up).abs() < TOL);
        assert!(p.get(Spin::Down, Spin::Down).abs() < TOL);
        assert!((p.get(Spin::Up, Spin::Down) - 0.5).abs() < TOL);
        assert!((p.get(Spin::Down, Spin::Up) - 0.5).abs() < TOL);
        assert!((correlation(&Axis::Z, &Axis::Z) + 1.0).abs() < TOL);
    }

    #[test]
    fn perpendicular_axes_are_uniform() {
        let p = joint_distribution(&Axis::Z, &Axis::X);
        for v in p.0 {
            assert!((v - 0.25).abs() < TOL);
        }
        assert!(correlation(&Axis::Z, &Axis::X).abs() < TOL);
    }

    #[test]
    fn sixty_and_one_twenty_degrees() {
        let p = joint_distribution(&Axis::Z, &axis_at(std::f64::consts::PI / 3.0));
        assert!((p.get(Spin::Up, Spin::Up) - 0.125).abs() < TOL);
        let e = correlation(&Axis::Z, &axis_at(2.0 * std::f64::consts::PI / 3.0));
        assert!((e - 0.5).abs() < TOL);
    }

    #[test]
    fn axis_validation() {
        assert!(matches!(Axis::new([1.0, 1.0, 0.0]), Err(Error::NonUnitAxis(_))));
        assert!(Axis::normalized([0.0, 0.0, 0.0]).is_err());
        let a = Axis::normalized([0.0, 3.0, 4.0]).unwrap();
        assert!((a.dot(&a) - 1.0).abs() < TOL);
        assert!((correlation(&a, &a.opposite()) - 1.0).abs() < TOL);
    }

    #[test]
    fn sampling() {
        assert!(matches!(sample_outcomes(&Axis::Z, &Axis::Z, 0, 1), Err(Error::NoSamples)));
        let t = sample_outcomes(&Axis::Z, &Axis::Z, 5000, 7).unwrap();
        assert_eq!(t.count(Spin::Up, Spin::Up), 0);
        assert_eq!(t.count(Spin::Down, Spin::Down), 0);
        assert_eq!(t.counts().iter().sum::<u64>(), t.total());
        assert_eq!(t, sample_outcomes(&Axis::Z, &Axis::Z, 5000, 7).unwrap());
        assert_ne!(t, sample_outcomes(&Axis::Z, &Axis::Z, 5000, 8).unwrap());
        assert!(t.to_string().starts_with("++=0 +-="));
    }
}
