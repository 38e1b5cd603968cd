//! Random instances with known structure: coboundaries, cocycles, noise.

use rand::Rng;

use crate::cochain::{
    bracket_cochain, delta, eta_head, order_function, Cochain, DirectedCochain, VertexOrder,
};
use crate::error::Result;
use crate::sign::Sign;

/// `delta a` for a uniformly random `(d-1)`-cochain `a`, `d` in 1..=3.
pub fn coboundary<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Cochain> {
    if d == 0 || d > 3 {
        return Err(crate::Error::UnsupportedDimension(d));
    }
    delta(&Cochain::random(n, d - 1, rng)?)
}

/// A random element of `B^1`.
pub fn b1<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Cochain> {
    coboundary(n, 1, rng)
}

/// A random element of `B^2`.
pub fn b2<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Cochain> {
    coboundary(n, 2, rng)
}

/// `theta * delta a` for a random `a`.
pub fn z1<R: Rng + ?Sized>(n: usize, theta: Sign, rng: &mut R) -> Result<Cochain> {
    Ok(&b1(n, rng)? * theta)
}

/// `theta * [pi] * delta f` for a random `f`, with `[.]` taken in the natural order.
pub fn z2<R: Rng + ?Sized>(n: usize, theta: Sign, pi: Sign, rng: &mut R) -> Result<Cochain> {
    let br = bracket_cochain(pi, &VertexOrder::natural(n))?;
    Ok(&(&b2(n, rng)? * &br) * theta)
}

/// A random directed cochain whose norm is a cocycle: `f * eta_h(a) * psi^b`.
pub fn symmetric_kernel<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DirectedCochain> {
    let f = DirectedCochain::embed(&Cochain::random(n, 1, rng)?)?;
    let mut out = &f * &eta_head(&Cochain::random(n, 0, rng)?)?;
    if rng.random_bool(0.5) {
        out = &out * &order_function(&VertexOrder::random(n, rng));
    }
    Ok(out)
}

/// Flips each entry independently with probability `p`; returns the number flipped.
pub fn flip_random<R: Rng + ?Sized>(c: &mut Cochain, p: f64, rng: &mut R) -> usize {
    let mut flipped = 0;
    for i in 0..c.len() {
        if rng.random_bool(p) {
            c.flip(i);
            flipped += 1;
        }
    }
    flipped
}

/// Flips exactly `count` distinct entries chosen uniformly.
pub fn flip_exact<R: Rng + ?Sized>(c: &mut Cochain, count: usize, rng: &mut R) {
    let count = count.min(c.len());
    let picked = rand::seq::index::sample(rng, c.len(), count);
    for i in picked.iter() {
        c.flip(i);
    }
}
