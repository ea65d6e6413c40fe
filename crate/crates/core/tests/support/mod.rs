//! Shared generators and brute-force references for the integration tests.

#![allow(dead_code)]

use bifree_core::{BivariateCdf, ProjectionPairLaw};
use rand::Rng;

/// `n` strictly increasing breaks with random gaps.
pub fn random_breaks<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut x = rng.gen_range(-3.0..3.0);
    (0..n)
        .map(|_| {
            x += rng.gen_range(0.05..1.5);
            x
        })
        .collect()
}

/// `(x, y, mass)` triples.
pub type Atoms = Vec<(f64, f64, f64)>;

/// Random atoms `(x, y, mass)` on a random grid of at most `max_dim` breaks
/// per axis. Roughly `zero_prob` of the grid points carry no mass.
pub fn random_atoms<R: Rng>(
    rng: &mut R,
    max_dim: usize,
    zero_prob: f64,
) -> (Vec<f64>, Vec<f64>, Atoms) {
    let nx = rng.gen_range(1..=max_dim);
    let ny = rng.gen_range(1..=max_dim);
    let xs = random_breaks(rng, nx);
    let ys = random_breaks(rng, ny);
    let mut atoms = Vec::new();
    for &x in &xs {
        for &y in &ys {
            if !rng.gen_bool(zero_prob) {
                atoms.push((x, y, rng.gen_range(0.01..1.0)));
            }
        }
    }
    if atoms.is_empty() {
        atoms.push((xs[nx - 1], ys[ny - 1], 1.0));
    }
    let total: f64 = atoms.iter().map(|a| a.2).sum();
    for a in &mut atoms {
        a.2 /= total;
    }
    (xs, ys, atoms)
}

/// CDF on the given grid by summing atom masses below each grid point.
pub fn cdf_from_atoms(xs: &[f64], ys: &[f64], atoms: &[(f64, f64, f64)]) -> BivariateCdf {
    BivariateCdf::from_fn(xs.to_vec(), ys.to_vec(), |i, j| {
        atoms
            .iter()
            .filter(|a| a.0 <= xs[i] && a.1 <= ys[j])
            .map(|a| a.2)
            .sum::<f64>()
            .min(1.0)
    })
    .unwrap()
}

pub fn random_cdf<R: Rng>(rng: &mut R, max_dim: usize) -> BivariateCdf {
    let zero_prob = rng.gen_range(0.0..0.6);
    let (xs, ys, atoms) = random_atoms(rng, max_dim, zero_prob);
    cdf_from_atoms(&xs, &ys, &atoms)
}

pub fn random_law<R: Rng>(rng: &mut R) -> ProjectionPairLaw {
    let p: f64 = rng.gen();
    let q: f64 = rng.gen();
    let lo = (p + q - 1.0).max(0.0);
    let hi = p.min(q);
    ProjectionPairLaw::new(p, q, lo + (hi - lo) * rng.gen::<f64>()).unwrap()
}

pub fn max_abs_diff(a: &BivariateCdf, b: &BivariateCdf) -> f64 {
    assert_eq!(a.x_breaks(), b.x_breaks());
    assert_eq!(a.y_breaks(), b.y_breaks());
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
