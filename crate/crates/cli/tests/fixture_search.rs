//! Regenerates `fixtures/root_failure.json`:
//! `cargo test -p bifree --test fixture_search -- --ignored --nocapture`

use bifree_core::{nth_root, BivariateCdf, RootOutcome, Violation, DEFAULT_EPS_CDF};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 2024;

/// CDF of random atoms on the grid {0, 1, 2}^2 with dyadic weights.
fn random_3x3(rng: &mut ChaCha8Rng) -> BivariateCdf {
    let mut w: Vec<u32> = (0..9).map(|_| rng.gen_range(0..4)).collect();
    w[8] += 1;
    let total: u32 = w.iter().sum();
    let grid = vec![0.0, 1.0, 2.0];
    BivariateCdf::from_fn(grid.clone(), grid, |i, j| {
        let mut s = 0;
        for a in 0..=i {
            for b in 0..=j {
                s += w[3 * a + b];
            }
        }
        f64::from(s) / f64::from(total)
    })
    .unwrap()
}

#[test]
#[ignore]
fn search_root_failure() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for attempt in 0..10_000 {
        let f = random_3x3(&mut rng);
        if let RootOutcome::NotDivisible(v) = nth_root(&f, 2, DEFAULT_EPS_CDF).unwrap() {
            if v.iter().any(|v| matches!(v, Violation::Rectangle { .. })) {
                println!("attempt {attempt}");
                for v in &v {
                    println!("  {v}");
                }
                let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/root_failure.json");
                bifree::write_bivariate(path.as_ref(), &f).unwrap();
                println!("wrote {path}");
                return;
            }
        }
    }
    panic!("no failure instance found");
}
