//! One-sided testers and constructive decoders for `Z^1` and `Z^2`.
//!
//! The testers read one random cell of the next dimension and check the
//! differential there. The decoders reconstruct a nearby cocycle and report
//! the distance achieved next to the certified bound `c * ||delta g||`
//! (`c = 3` in degree one, `c = 1504` in degree two).

use rand::Rng;

use crate::cochain::{
    bracket_cochain, cochain_norm_sampled, delta, Cochain, NormValue, TupleFunction, VertexOrder,
};
use crate::complex::{Cell, CellIndex, Vertex};
use crate::detectors::{
    delta_double_prime, delta_prime, delta_triangle, estimate_constant, select_vertex, Condition,
    DetectorReport, VertexChoice,
};
use crate::error::{Error, Result};
use crate::sign::Sign;
use crate::Ratio;

/// Constant relating the distance to `Z^1` to the differential's norm.
pub const B1_CONSTANT: u64 = 3;
/// Constant relating the distance to `Z^2` to the differential's norm.
pub const Z2_CONSTANT: u64 = 1504;

/// Sampling limits for the decoders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Tuples drawn per majority estimate; also split across candidates in vertex selection.
    pub samples: u64,
    /// Cells drawn when the differential is too large to evaluate in full.
    pub norm_samples: u64,
    /// Largest differential (in cells) evaluated exactly.
    pub exact_cell_limit: u64,
}

impl Budget {
    /// `64 n^2` tuples per estimate.
    pub fn for_vertices(n: usize) -> Self {
        Budget {
            samples: 64 * (n as u64) * (n as u64),
            norm_samples: 1 << 20,
            exact_cell_limit: 4_000_000,
        }
    }

    /// Per-candidate budget for vertex selection, never below 256.
    fn per_vertex(&self, n: usize) -> u64 {
        (self.samples / n as u64).max(256)
    }
}

/// Outcome of a tester run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestVerdict {
    pub accepted: bool,
    pub trials: u64,
    pub queries_per_trial: u32,
    pub rejections: u64,
    pub rejecting_witness: Option<Cell>,
}

impl TestVerdict {
    pub fn rejection_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.rejections as f64 / self.trials as f64
        }
    }
}

fn expect(g: &Cochain, d: usize, min_n: usize, what: &'static str) -> Result<()> {
    if g.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: format!("{d}-cochain"),
            got: format!("{}-cochain", g.dim()),
        });
    }
    if g.n() < min_n {
        return Err(Error::TooFewVertices {
            what,
            n: g.n(),
            min: min_n,
        });
    }
    Ok(())
}

fn run_tester<R: Rng + ?Sized>(g: &Cochain, trials: u64, rng: &mut R) -> Result<TestVerdict> {
    let d = g.dim();
    let up = CellIndex::new(g.n(), d + 1)?;
    let walls = crate::complex::shape(d + 1).walls();
    let mut t = [0; 8];
    let mut sub = [0; 8];
    let mut rejections = 0;
    let mut witness = None;
    for _ in 0..trials {
        let cell = up.sample(rng);
        up.labeling_at(cell, &mut t);
        let mut parity = false;
        for w in walls {
            for (s, &p) in sub.iter_mut().zip(w) {
                *s = t[p as usize];
            }
            parity ^= g.bits().get(g.index().index_of_labeling(&sub[..w.len()]));
        }
        if parity {
            rejections += 1;
            if witness.is_none() {
                witness = Some(up.cell(cell));
            }
        }
    }
    Ok(TestVerdict {
        accepted: rejections == 0,
        trials,
        queries_per_trial: walls.len() as u32,
        rejections,
        rejecting_witness: witness,
    })
}

/// Four queries per trial: one random square.
pub fn test_b1<R: Rng + ?Sized>(f: &Cochain, trials: u64, rng: &mut R) -> Result<TestVerdict> {
    expect(f, 1, 4, "degree-one tester")?;
    run_tester(f, trials, rng)
}

/// Six queries per trial: one random cube.
pub fn test_z2<R: Rng + ?Sized>(g: &Cochain, trials: u64, rng: &mut R) -> Result<TestVerdict> {
    expect(g, 2, 8, "degree-two tester")?;
    run_tester(g, trials, rng)
}

/// Outcome of a decoder.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodeReport {
    pub theta: Sign,
    /// Only set in degree two.
    pub pi: Option<Sign>,
    /// `alpha` (a 0-cochain) in degree one, `f` (a 1-cochain) in degree two.
    pub recovered: Cochain,
    /// The cocycle built from the recovered data; `achieved_distance` is measured to it.
    pub approximant: Cochain,
    pub delta_norm: NormValue,
    pub certified_bound: NormValue,
    pub achieved_distance: Ratio,
    /// `[a]` in degree one, `[a0, b0]` in degree two.
    pub vertices: Vec<Vertex>,
    pub detectors: Vec<DetectorReport>,
    pub choices: Vec<VertexChoice>,
    /// Edges reset to +1 when the directed reconstruction disagreed across directions.
    pub symmetrization_changes: Option<Ratio>,
}

impl DecodeReport {
    pub fn achieved_f64(&self) -> f64 {
        *self.achieved_distance.numer() as f64 / *self.achieved_distance.denom() as f64
    }

    /// Whether `achieved <= bound`; exact when the norm was computed exactly.
    pub fn certificate_holds(&self) -> bool {
        match self.certified_bound.exact() {
            Some(b) => self.achieved_distance <= b,
            None => self.achieved_f64() <= self.certified_bound.value(),
        }
    }

    /// `achieved / ||delta g||`, `0` when both vanish.
    pub fn ratio(&self) -> f64 {
        let p = self.delta_norm.value();
        let a = self.achieved_f64();
        if p > 0.0 {
            a / p
        } else if a > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    }
}

fn differential_norm<R: Rng + ?Sized>(
    g: &Cochain,
    force_exact: bool,
    budget: &Budget,
    rng: &mut R,
) -> Result<NormValue> {
    let cells = crate::complex::cell_count(g.n(), g.dim() + 1);
    if force_exact || cells <= budget.exact_cell_limit {
        Ok(NormValue::Exact(delta(g)?.norm()))
    } else {
        Ok(NormValue::Estimated(sampled_differential_norm(
            g,
            budget.norm_samples,
            rng,
        )?))
    }
}

/// Fraction of sampled cells of the next dimension where `delta g` is -1.
pub fn sampled_differential_norm<R: Rng + ?Sized>(
    g: &Cochain,
    samples: u64,
    rng: &mut R,
) -> Result<crate::cochain::Estimate> {
    let v = run_tester(g, samples, rng)?;
    Ok(crate::cochain::Estimate::from_counts(v.rejections, samples))
}

fn all_vertices(n: usize) -> Vec<Vertex> {
    (0..n as Vertex).collect()
}

/// Decodes a 1-cochain to `theta * delta alpha`.
///
/// Estimates `theta` from triangles, picks the vertex `a` whose triangles
/// agree best, and reads `alpha_j = theta f_{ja}`.
pub fn decode_b1<R: Rng + ?Sized>(
    f: &Cochain,
    budget: &Budget,
    rng: &mut R,
) -> Result<DecodeReport> {
    expect(f, 1, 5, "degree-one decoder")?;
    let mut report = decode_b1_core(f, budget, rng)?;
    let delta_norm = differential_norm(f, f.n() <= 16, budget, rng)?;
    report.certified_bound = delta_norm.scaled(B1_CONSTANT);
    report.delta_norm = delta_norm;
    Ok(report)
}

fn decode_b1_core<R: Rng + ?Sized>(
    f: &Cochain,
    budget: &Budget,
    rng: &mut R,
) -> Result<DecodeReport> {
    let n = f.n();
    let tri_report = estimate_constant(&delta_triangle(f)?, budget.samples, rng);
    let theta = tri_report.estimated_constant;
    let fp = f * theta;
    let tri = delta_triangle(&fp)?;
    let choice = select_vertex(
        &[Condition::new(&tri, 0)],
        &all_vertices(n),
        budget.per_vertex(n),
        rng,
    )?;
    let a = choice.vertex;
    let alpha = Cochain::from_fn(n, 0, |t| {
        if t[0] == a {
            Sign::PLUS
        } else {
            fp.edge(t[0], a)
        }
    })?;
    let approximant = &delta(&alpha)? * theta;
    let zero = NormValue::Exact(Ratio::from_integer(0));
    Ok(DecodeReport {
        theta,
        pi: None,
        achieved_distance: f.distance(&approximant)?,
        recovered: alpha,
        approximant,
        certified_bound: zero,
        delta_norm: zero,
        vertices: vec![a],
        detectors: vec![tri_report],
        choices: vec![choice],
        symmetrization_changes: None,
    })
}

/// `h_{xy} = g'(a0, rest[x], b0, rest[y])` on the `n - 2` remaining vertices.
fn link_cochain(gp: &Cochain, a0: Vertex, b0: Vertex, rest: &[Vertex]) -> Result<Cochain> {
    Cochain::from_fn(rest.len(), 1, |t| {
        gp.at(&[a0, rest[t[0] as usize], b0, rest[t[1] as usize]])
    })
}

/// Builds `f` from `beta` on the whole vertex set.
///
/// Directed values are `f'_{a0 j} = 1`, `f'_{b0 j} = beta_j`, and
/// `f'_{ij} = beta_i g'(a0, b0, i, j)` elsewhere; an edge keeps its value
/// when both directions agree and becomes +1 otherwise.
fn assemble_edges(gp: &Cochain, a0: Vertex, b0: Vertex, beta: &[Sign]) -> Result<(Cochain, u64)> {
    let n = gp.n();
    let directed = |i: Vertex, j: Vertex| -> Sign {
        if i == a0 || j == a0 {
            Sign::PLUS
        } else if i == b0 {
            beta[j as usize]
        } else if j == b0 {
            beta[i as usize]
        } else {
            beta[i as usize] * gp.at(&[a0, b0, i, j])
        }
    };
    let mut changes = 0;
    let f = Cochain::from_fn(n, 1, |t| {
        let (x, y) = (directed(t[0], t[1]), directed(t[1], t[0]));
        if x == y {
            x
        } else {
            changes += 1;
            Sign::PLUS
        }
    })?;
    Ok((f, changes))
}

fn twist(n: usize, theta: Sign, pi: Sign) -> Result<Cochain> {
    Ok(&bracket_cochain(pi, &VertexOrder::natural(n))? * theta)
}

/// Decodes a 2-cochain to `theta [pi] delta f`.
pub fn decode_z2<R: Rng + ?Sized>(
    g: &Cochain,
    budget: &Budget,
    rng: &mut R,
) -> Result<DecodeReport> {
    expect(g, 2, 12, "degree-two decoder")?;
    let dp = estimate_constant(&delta_prime(g)?, budget.samples, rng);
    let ddp = estimate_constant(&delta_double_prime(g)?, budget.samples, rng);
    let theta = dp.estimated_constant;
    let pi = theta * ddp.estimated_constant;
    let mut report = decode_z2_core(g, theta, pi, budget, rng)?;
    report.detectors.splice(0..0, [dp, ddp]);
    let delta_norm = differential_norm(g, g.n() <= 12, budget, rng)?;
    report.certified_bound = delta_norm.scaled(Z2_CONSTANT);
    report.delta_norm = delta_norm;
    Ok(report)
}

/// Runs the degree-two decoder with `theta` and `pi` given instead of estimated.
///
/// The norm fields are left at zero; only the reconstruction is computed.
pub fn decode_z2_in_class<R: Rng + ?Sized>(
    g: &Cochain,
    theta: Sign,
    pi: Sign,
    budget: &Budget,
    rng: &mut R,
) -> Result<DecodeReport> {
    expect(g, 2, 12, "degree-two decoder")?;
    decode_z2_core(g, theta, pi, budget, rng)
}

fn decode_z2_core<R: Rng + ?Sized>(
    g: &Cochain,
    theta: Sign,
    pi: Sign,
    budget: &Budget,
    rng: &mut R,
) -> Result<DecodeReport> {
    let n = g.n();
    let tw = twist(n, theta, pi)?;
    let gp = g * &tw;

    let (p, pp) = (delta_prime(&gp)?, delta_double_prime(&gp)?);
    let per_vertex = budget.per_vertex(n);
    let a_conds = [
        Condition::new(&p, 0),
        Condition::new(&pp, 0),
        Condition::new(&pp, 2),
    ];
    let a_choice = select_vertex(&a_conds, &all_vertices(n), per_vertex, rng)?;
    let a0 = a_choice.vertex;
    let b_conds = [
        Condition::new(&p, 2).with_fixed(0, a0),
        Condition::new(&pp, 1).with_fixed(0, a0),
        Condition::new(&pp, 2).with_fixed(0, a0),
    ];
    let others: Vec<Vertex> = all_vertices(n).into_iter().filter(|&v| v != a0).collect();
    let b_choice = select_vertex(&b_conds, &others, per_vertex, rng)?;
    let b0 = b_choice.vertex;

    let rest: Vec<Vertex> = others.iter().copied().filter(|&v| v != b0).collect();
    let h = link_cochain(&gp, a0, b0, &rest)?;
    let inner = decode_b1_core(&h, budget, rng)?;
    let mut beta = vec![Sign::PLUS; n];
    for (x, &v) in rest.iter().enumerate() {
        beta[v as usize] = inner.recovered.get(x);
    }
    let (f, changes) = assemble_edges(&gp, a0, b0, &beta)?;
    let approximant = &delta(&f)? * &tw;
    let zero = NormValue::Exact(Ratio::from_integer(0));
    let mut choices = vec![a_choice, b_choice];
    choices.extend(inner.choices);
    Ok(DecodeReport {
        theta,
        pi: Some(pi),
        achieved_distance: g.distance(&approximant)?,
        recovered: f,
        approximant,
        certified_bound: zero,
        delta_norm: zero,
        vertices: vec![a0, b0],
        detectors: inner.detectors,
        choices,
        symmetrization_changes: Some(Ratio::new(changes, crate::complex::cell_count(n, 1))),
    })
}

/// Exact class of a 2-cocycle: `(theta, pi, f)` with `g = theta [pi] delta f`.
///
/// Reads the detectors at a single tuple and reconstructs `f` without
/// sampling. Fails with [`Error::NotACocycle`] unless `delta g = 1`.
pub fn classify_exact(g: &Cochain) -> Result<(Sign, Sign, Cochain)> {
    expect(g, 2, 10, "exact classification")?;
    let n = g.n();
    let violations = delta(g)?.minus_count();
    if violations > 0 {
        return Err(Error::NotACocycle { violations });
    }
    let theta = delta_prime(g)?.eval(&[0, 1, 2, 3]);
    let pi = theta * delta_double_prime(g)?.eval(&[0, 1, 2, 3, 4]);
    let tw = twist(n, theta, pi)?;
    let gp = g * &tw;
    let (a0, b0) = (0, 1);
    let rest: Vec<Vertex> = (2..n as Vertex).collect();
    let h = link_cochain(&gp, a0, b0, &rest)?;
    let mut beta = vec![Sign::PLUS; n];
    for (x, &v) in rest.iter().enumerate().skip(1) {
        beta[v as usize] = h.edge(x as Vertex, 0);
    }
    let (f, _) = assemble_edges(&gp, a0, b0, &beta)?;
    if delta(&f)? != gp {
        return Err(Error::Consistency(
            "reconstructed coboundary differs from input".into(),
        ));
    }
    Ok((theta, pi, f))
}

/// Exact norm of `delta g` when affordable, a sampled estimate otherwise.
pub fn delta_norm<R: Rng + ?Sized>(g: &Cochain, budget: &Budget, rng: &mut R) -> Result<NormValue> {
    differential_norm(g, false, budget, rng)
}

/// Sampled norm of a cochain (convenience for large instances).
pub fn norm_estimate<R: Rng + ?Sized>(g: &Cochain, samples: u64, rng: &mut R) -> NormValue {
    NormValue::Estimated(cochain_norm_sampled(g, samples, rng))
}
