//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the kernel's comparison operations; universes are described by plain
//! data and every verdict is recomputed from that description.

#![allow(dead_code)]

use std::collections::BTreeSet;

use quasiset::{Handle, Species, Universe};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// An entity described by value: species index, label index, or the
/// indices of earlier entities that a qset holds.
#[derive(Clone, Debug)]
pub enum Desc {
    Micro(usize),
    Macro(usize),
    Qset(Vec<usize>),
}

pub struct Built {
    pub universe: Universe,
    pub handles: Vec<Handle>,
    pub desc: Vec<Desc>,
}

pub fn species_table(n: usize) -> Vec<Species> {
    (0..n).map(|i| Species::new(format!("s{i}"), "")).collect()
}

pub fn build(species: usize, desc: &[Desc]) -> Built {
    let mut u = Universe::new(species_table(species)).unwrap();
    let mut handles: Vec<Handle> = Vec::new();
    for d in desc {
        let h = match d {
            Desc::Micro(s) => u.add_micro_atom(&format!("s{s}")).unwrap(),
            Desc::Macro(l) => u.add_macro_atom(&format!("L{l}")).unwrap(),
            Desc::Qset(ms) => u.make_qset(ms.iter().map(|&i| handles[i])).unwrap(),
        };
        handles.push(h);
    }
    Built {
        universe: u,
        handles,
        desc: desc.to_vec(),
    }
}

pub fn members(desc: &[Desc], i: usize) -> BTreeSet<usize> {
    match &desc[i] {
        Desc::Qset(ms) => ms.iter().copied().collect(),
        _ => BTreeSet::new(),
    }
}

/// ≡ read off the description: same species, same label, or the same
/// member registrations.
pub fn oracle_indist(desc: &[Desc], i: usize, j: usize) -> bool {
    match (&desc[i], &desc[j]) {
        (Desc::Micro(a), Desc::Micro(b)) => a == b,
        (Desc::Macro(a), Desc::Macro(b)) => a == b,
        (Desc::Qset(_), Desc::Qset(_)) => members(desc, i) == members(desc, j),
        _ => false,
    }
}

pub fn is_micro(desc: &[Desc], i: usize) -> bool {
    matches!(desc[i], Desc::Micro(_))
}

/// Position of a handle among the registered ones, by its display form.
pub fn index_of(handles: &[Handle], h: Handle) -> usize {
    let key = h.to_string();
    handles
        .iter()
        .position(|x| x.to_string() == key)
        .expect("handle from this universe")
}

pub fn index_set(handles: &[Handle], hs: &[Handle]) -> BTreeSet<usize> {
    hs.iter().map(|&h| index_of(handles, h)).collect()
}

/// Random universe with `n` entities over `species` species. Qsets hold
/// earlier entities only.
pub fn random_desc(rng: &mut ChaCha8Rng, species: usize, n: usize) -> Vec<Desc> {
    let mut desc = Vec::with_capacity(n);
    for i in 0..n {
        let d = match rng.random_range(0..4u8) {
            0 | 1 => Desc::Micro(rng.random_range(0..species)),
            2 => Desc::Macro(rng.random_range(0..3)),
            _ if i == 0 => Desc::Macro(rng.random_range(0..3)),
            _ => {
                let k = rng.random_range(0..=i.min(4));
                Desc::Qset((0..k).map(|_| rng.random_range(0..i)).collect())
            }
        };
        desc.push(d);
    }
    desc
}

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Sup-diameter of a union of open balls from first principles: the
/// farthest points of balls i and j lie on the line through both centers.
pub fn oracle_sup_diameter(balls: &[(Vec<f64>, f64)]) -> f64 {
    let mut best = 0.0f64;
    for (i, (ci, ri)) in balls.iter().enumerate() {
        for (cj, rj) in &balls[i..] {
            best = best.max(euclid(ci, cj) + ri + rj);
        }
    }
    best
}

/// Independent check of the six quasi-metric conditions on an explicit
/// matrix, with `indist[i][j]` giving ≡. Returns the failing item numbers.
pub fn oracle_axioms(d: &[Vec<f64>], indist: &[Vec<bool>], eps: f64) -> BTreeSet<u8> {
    let n = d.len();
    let mut bad = BTreeSet::new();
    if n == 0 {
        bad.insert(1);
    }
    for i in 0..n {
        for j in 0..n {
            let v = d[i][j];
            if !v.is_finite() {
                bad.insert(2);
                continue;
            }
            if indist[i][j] && v.abs() > eps {
                bad.insert(3);
                bad.insert(4);
            }
            if !indist[i][j] && v <= 0.0 {
                bad.insert(3);
                bad.insert(4);
            }
            if (v - d[j][i]).abs() > eps {
                bad.insert(5);
            }
            for (xz, yz) in d[i].iter().zip(&d[j]) {
                if xz.is_finite() && yz.is_finite() && *xz > v + yz + eps {
                    bad.insert(6);
                }
            }
        }
    }
    bad
}
