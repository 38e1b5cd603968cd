//! Fixed inputs shared by the criterion benchmarks.

use cubetest::{planted, seeded, Cochain, Result, Sign};

/// `theta * delta alpha` with each edge flipped with probability `p`.
pub fn noisy_z1(n: usize, p: f64, seed: u64) -> Result<Cochain> {
    let mut rng = seeded(seed);
    let mut f = planted::z1(n, Sign::MINUS, &mut rng)?;
    planted::flip_random(&mut f, p, &mut rng);
    Ok(f)
}

/// `-[-1] delta f` with each square flipped with probability `p`.
pub fn noisy_z2(n: usize, p: f64, seed: u64) -> Result<Cochain> {
    let mut rng = seeded(seed);
    let mut g = planted::z2(n, Sign::MINUS, Sign::MINUS, &mut rng)?;
    planted::flip_random(&mut g, p, &mut rng);
    Ok(g)
}
