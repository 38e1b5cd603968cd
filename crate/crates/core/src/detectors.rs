//! Detecting maps and the statistics built on them.
//!
//! Each detector is a product of a few cochain entries over a tuple of
//! distinct vertices. On cocycles it is constant, and the constant names
//! the cohomology class:
//!
//! | input      | triangle | square triple | bipartite triple |
//! |------------|----------|---------------|------------------|
//! | `-1`       | -1       | -1            | -1               |
//! | `[-1]`     |          | +1            | -1               |
//! | coboundary | +1       | +1            | +1               |
//!
//! The bipartite triple uses the slot order `(a, b, i, j, k)`: the pair
//! `{a, b}` and the triple `{i, j, k}` are the two sides of `K_{2,3}`.

use rand::Rng;

use crate::cochain::{for_each_distinct_tuple, Cochain, TupleFunction};
use crate::complex::{sample_tuple_into, Vertex};
use crate::error::{Error, Result};
use crate::sign::Sign;
use crate::Ratio;

fn require(f: &Cochain, d: usize, min_n: usize, what: &'static str) -> Result<()> {
    if f.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: format!("{d}-cochain"),
            got: format!("{}-cochain", f.dim()),
        });
    }
    if f.n() < min_n {
        return Err(Error::TooFewVertices {
            what,
            n: f.n(),
            min: min_n,
        });
    }
    Ok(())
}

/// `(Delta f)_{ijk} = f_ij f_jk f_ki`.
#[derive(Clone, Copy)]
pub struct Delta<'a>(&'a Cochain);

/// `(Delta' g)_{ijkl} = g_{ijkl} g_{ikjl} g_{ijlk}`: the three squares on four vertices.
#[derive(Clone, Copy)]
pub struct DeltaPrime<'a>(&'a Cochain);

/// `(Delta'' g)_{ab;ijk} = g_{aibj} g_{ajbk} g_{akbi}`.
#[derive(Clone, Copy)]
pub struct DeltaDoublePrime<'a>(&'a Cochain);

pub fn delta_triangle(f: &Cochain) -> Result<Delta<'_>> {
    require(f, 1, 3, "triangle detector")?;
    Ok(Delta(f))
}

pub fn delta_prime(g: &Cochain) -> Result<DeltaPrime<'_>> {
    require(g, 2, 4, "square-triple detector")?;
    Ok(DeltaPrime(g))
}

pub fn delta_double_prime(g: &Cochain) -> Result<DeltaDoublePrime<'_>> {
    require(g, 2, 5, "bipartite-triple detector")?;
    Ok(DeltaDoublePrime(g))
}

impl TupleFunction for Delta<'_> {
    fn n(&self) -> usize {
        self.0.n()
    }
    fn arity(&self) -> usize {
        3
    }
    #[inline]
    fn eval(&self, t: &[Vertex]) -> Sign {
        let f = self.0;
        f.edge(t[0], t[1]) * f.edge(t[1], t[2]) * f.edge(t[2], t[0])
    }
}

impl TupleFunction for DeltaPrime<'_> {
    fn n(&self) -> usize {
        self.0.n()
    }
    fn arity(&self) -> usize {
        4
    }
    #[inline]
    fn eval(&self, t: &[Vertex]) -> Sign {
        let g = self.0;
        let (i, j, k, l) = (t[0], t[1], t[2], t[3]);
        g.at(&[i, j, k, l]) * g.at(&[i, k, j, l]) * g.at(&[i, j, l, k])
    }
}

impl TupleFunction for DeltaDoublePrime<'_> {
    fn n(&self) -> usize {
        self.0.n()
    }
    fn arity(&self) -> usize {
        5
    }
    #[inline]
    fn eval(&self, t: &[Vertex]) -> Sign {
        let g = self.0;
        let (a, b, i, j, k) = (t[0], t[1], t[2], t[3], t[4]);
        g.at(&[a, i, b, j]) * g.at(&[a, j, b, k]) * g.at(&[a, k, b, i])
    }
}

/// Majority vote over a stream of signs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DetectorReport {
    pub estimated_constant: Sign,
    /// Fraction of the samples that disagree with the constant.
    pub empirical_error: Ratio,
    pub samples: u64,
}

impl DetectorReport {
    pub fn error_f64(&self) -> f64 {
        *self.empirical_error.numer() as f64 / *self.empirical_error.denom() as f64
    }
}

/// Majority constant of the stream; ties go to +1.
pub fn majority_constant<I: IntoIterator<Item = Sign>>(values: I) -> DetectorReport {
    let (mut plus, mut minus) = (0u64, 0u64);
    for v in values {
        if v.is_minus() {
            minus += 1;
        } else {
            plus += 1;
        }
    }
    let samples = plus + minus;
    let (constant, disagree) = if minus > plus {
        (Sign::MINUS, plus)
    } else {
        (Sign::PLUS, minus)
    };
    DetectorReport {
        estimated_constant: constant,
        empirical_error: Ratio::new(disagree, samples.max(1)),
        samples,
    }
}

/// Number of k-tuples of distinct entries from `m` elements.
fn falling(m: usize, k: usize) -> u64 {
    (0..k)
        .try_fold(1u64, |acc, i| {
            (m as u64)
                .checked_sub(i as u64)
                .and_then(|x| acc.checked_mul(x))
        })
        .unwrap_or(u64::MAX)
}

/// Majority constant of `f`, by full enumeration of `X^[k]` when that fits in
/// `samples` evaluations, by uniform sampling otherwise.
pub fn estimate_constant<F: TupleFunction + ?Sized, R: Rng + ?Sized>(
    f: &F,
    samples: u64,
    rng: &mut R,
) -> DetectorReport {
    let (n, k) = (f.n(), f.arity());
    if falling(n, k) <= samples {
        let mut vals = Vec::new();
        for_each_distinct_tuple(n, k, |t| vals.push(f.eval(t)));
        return majority_constant(vals);
    }
    let mut t = vec![0; k];
    majority_constant((0..samples).map(|_| {
        sample_tuple_into(n, &[], rng, &mut t).expect("arity fits");
        f.eval(&t)
    }))
}

/// A tuple function with some slots pinned and one slot left for the candidate vertex.
pub struct Condition<'a> {
    pub func: &'a dyn TupleFunction,
    pub fixed: Vec<(usize, Vertex)>,
    pub slot: usize,
}

impl<'a> Condition<'a> {
    pub fn new(func: &'a dyn TupleFunction, slot: usize) -> Self {
        Condition {
            func,
            fixed: Vec::new(),
            slot,
        }
    }

    pub fn with_fixed(mut self, slot: usize, v: Vertex) -> Self {
        self.fixed.push((slot, v));
        self
    }

    /// Fraction of completions with `slot = a` where the function is -1.
    ///
    /// The free slots range over distinct vertices avoiding `a` and every
    /// pinned vertex. Enumerates all completions if there are at most
    /// `budget` of them, otherwise samples `budget` of them.
    pub fn conditional_error<R: Rng + ?Sized>(&self, a: Vertex, budget: u64, rng: &mut R) -> f64 {
        let n = self.func.n();
        let k = self.func.arity();
        let mut pinned: Vec<(usize, Vertex)> = self.fixed.clone();
        pinned.push((self.slot, a));
        let taken: Vec<Vertex> = pinned.iter().map(|&(_, v)| v).collect();
        let free_slots: Vec<usize> = (0..k)
            .filter(|s| pinned.iter().all(|p| p.0 != *s))
            .collect();
        let mut t = vec![0 as Vertex; k];
        for &(s, v) in &pinned {
            t[s] = v;
        }
        let avail: Vec<Vertex> = (0..n as Vertex).filter(|v| !taken.contains(v)).collect();
        let total = falling(avail.len(), free_slots.len());
        if total == 0 {
            return 0.0;
        }
        let mut bad = 0u64;
        let mut seen = 0u64;
        if total <= budget {
            for_each_distinct_tuple(avail.len(), free_slots.len(), |c| {
                for (&s, &ci) in free_slots.iter().zip(c) {
                    t[s] = avail[ci as usize];
                }
                bad += self.func.eval(&t).is_minus() as u64;
                seen += 1;
            });
        } else {
            let mut c = vec![0 as Vertex; free_slots.len()];
            for _ in 0..budget {
                sample_tuple_into(n, &taken, rng, &mut c).expect("enough free vertices");
                for (&s, &v) in free_slots.iter().zip(&c) {
                    t[s] = v;
                }
                bad += self.func.eval(&t).is_minus() as u64;
                seen += 1;
            }
        }
        bad as f64 / seen as f64
    }
}

/// Outcome of [`select_vertex`].
#[derive(Clone, Debug, PartialEq)]
pub struct VertexChoice {
    pub vertex: Vertex,
    /// Largest ratio (conditional error at the vertex) / (global error) over the conditions.
    pub max_ratio: f64,
    /// `conditional_errors[c][i]` is condition `c` at `candidates[i]`.
    pub conditional_errors: Vec<Vec<f64>>,
    /// Mean conditional error of each condition over the candidates.
    pub global_errors: Vec<f64>,
}

impl VertexChoice {
    /// Whether the selected vertex meets slack `s` on every condition.
    pub fn within_slack(&self, s: f64) -> bool {
        self.max_ratio <= s
    }
}

fn ratio(cond: f64, global: f64) -> f64 {
    if global > 0.0 {
        cond / global
    } else if cond > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// The candidate minimizing the worst conditional-to-global error ratio.
///
/// Ties go to the smallest id. `budget` bounds the evaluations per
/// (condition, candidate) pair.
pub fn select_vertex<R: Rng + ?Sized>(
    conditions: &[Condition<'_>],
    candidates: &[Vertex],
    budget: u64,
    rng: &mut R,
) -> Result<VertexChoice> {
    if conditions.is_empty() || candidates.is_empty() {
        return Err(Error::Consistency(
            "vertex selection needs at least one condition and one candidate".into(),
        ));
    }
    let mut sorted = candidates.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let conditional_errors: Vec<Vec<f64>> = conditions
        .iter()
        .map(|c| {
            sorted
                .iter()
                .map(|&a| c.conditional_error(a, budget, rng))
                .collect()
        })
        .collect();
    let global_errors: Vec<f64> = conditional_errors
        .iter()
        .map(|row| row.iter().sum::<f64>() / row.len() as f64)
        .collect();
    let mut best = (f64::INFINITY, 0usize);
    for i in 0..sorted.len() {
        let worst = conditional_errors
            .iter()
            .zip(&global_errors)
            .map(|(row, &g)| ratio(row[i], g))
            .fold(0.0, f64::max);
        if worst < best.0 || (i == 0 && best.0.is_infinite()) {
            best = (worst, i);
        }
    }
    Ok(VertexChoice {
        vertex: sorted[best.1],
        max_ratio: best.0,
        conditional_errors,
        global_errors,
    })
}

/// Checks `(delta f)_{ijkl} = (Delta f)_{ijl} (Delta f)_{jkl}` on every 4-tuple.
///
/// Returns the number of tuples checked. A violation is a bug, never a
/// property of the input.
pub fn verify_delta1_factorization(f: &Cochain) -> Result<u64> {
    require(f, 1, 4, "factorization check")?;
    let tri = Delta(f);
    let mut checked = 0;
    let mut bad = None;
    for_each_distinct_tuple(f.n(), 4, |t| {
        let (i, j, k, l) = (t[0], t[1], t[2], t[3]);
        let lhs = f.edge(i, j) * f.edge(j, k) * f.edge(k, l) * f.edge(l, i);
        let rhs = tri.eval(&[i, j, l]) * tri.eval(&[j, k, l]);
        if lhs != rhs && bad.is_none() {
            bad = Some([i, j, k, l]);
        }
        checked += 1;
    });
    match bad {
        Some(t) => Err(Error::Consistency(format!("factorization fails at {t:?}"))),
        None => Ok(checked),
    }
}
