//! Cochains over {+1, -1} and the maps between them.
//!
//! A [`Cochain`] is a total function from the canonical d-cells of the
//! complete complex to signs, stored one bit per cell. A
//! [`DirectedCochain`] lives on ordered pairs of distinct vertices. Anything
//! defined on raw tuples of distinct vertices is a [`TupleFunction`],
//! evaluated lazily from its defining formula.

use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use rand::Rng;

use crate::bits::BitVec;
use crate::complex::{sample_tuple_into, shape, Cell, CellIndex, Vertex};
use crate::error::{Error, Result};
use crate::sign::Sign;
use crate::Ratio;

/// Largest cochain we are willing to allocate, in cells.
pub const MAX_CELLS: usize = 1 << 32;

/// Failure probability used for Hoeffding half-widths.
pub const HOEFFDING_DELTA: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    index: CellIndex,
    bits: BitVec,
}

fn checked_index(n: usize, d: usize) -> Result<CellIndex> {
    let index = CellIndex::new(n, d)?;
    if index.len() > MAX_CELLS {
        return Err(Error::TooLarge {
            what: "cochain",
            size: index.len() as u128,
            limit: MAX_CELLS as u128,
        });
    }
    Ok(index)
}

impl Cochain {
    /// The constant +1 cochain.
    pub fn ones(n: usize, d: usize) -> Result<Self> {
        let index = checked_index(n, d)?;
        let bits = BitVec::zeros(index.len());
        Ok(Cochain { index, bits })
    }

    pub fn constant(n: usize, d: usize, s: Sign) -> Result<Self> {
        let mut c = Self::ones(n, d)?;
        if s.is_minus() {
            c.bits = c.bits.not();
        }
        Ok(c)
    }

    /// Builds a cochain from its value on each canonical cell labeling.
    pub fn from_fn(n: usize, d: usize, mut f: impl FnMut(&[Vertex]) -> Sign) -> Result<Self> {
        let mut c = Self::ones(n, d)?;
        let size = c.index.cell_size();
        let mut t = [0; 8];
        for i in 0..c.len() {
            c.index.labeling_at(i, &mut t);
            if f(&t[..size]).is_minus() {
                c.bits.set(i, true);
            }
        }
        Ok(c)
    }

    /// Uniformly random cochain.
    pub fn random<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Self> {
        let mut c = Self::ones(n, d)?;
        for i in 0..c.len() {
            if rng.random::<bool>() {
                c.bits.set(i, true);
            }
        }
        Ok(c)
    }

    pub(crate) fn from_bits(index: CellIndex, bits: BitVec) -> Self {
        assert_eq!(index.len(), bits.len());
        Cochain { index, bits }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.index.n()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.index.dim()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn index(&self) -> &CellIndex {
        &self.index
    }

    #[inline]
    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    #[inline]
    pub fn get(&self, idx: usize) -> Sign {
        Sign::from_bit(self.bits.get(idx))
    }

    #[inline]
    pub fn set(&mut self, idx: usize, s: Sign) {
        self.bits.set(idx, s.is_minus());
    }

    #[inline]
    pub fn flip(&mut self, idx: usize) {
        self.bits.flip(idx);
    }

    /// Value on the cell with shape-order labeling `t` (any representative).
    #[inline]
    pub fn at(&self, t: &[Vertex]) -> Sign {
        self.get(self.index.index_of_labeling(t))
    }

    /// Value on a vertex pair; shorthand for 1-cochains.
    #[inline]
    pub fn edge(&self, i: Vertex, j: Vertex) -> Sign {
        self.at(&[i, j])
    }

    pub fn value(&self, cell: &Cell) -> Result<Sign> {
        Ok(self.get(self.index.index(cell)?))
    }

    /// Number of cells carrying -1.
    pub fn minus_count(&self) -> u64 {
        self.bits.count_ones()
    }

    pub fn is_ones(&self) -> bool {
        self.bits.is_zero()
    }

    /// Fraction of cells carrying -1.
    pub fn norm(&self) -> Ratio {
        Ratio::new(self.minus_count(), self.len() as u64)
    }

    /// `norm(self * other)`.
    pub fn distance(&self, other: &Cochain) -> Result<Ratio> {
        self.check_same_space(other)?;
        Ok(Ratio::new(
            self.bits.xor_count(&other.bits),
            self.len() as u64,
        ))
    }

    pub fn check_same_space(&self, other: &Cochain) -> Result<()> {
        if self.n() != other.n() || self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("cochain n={} d={}", self.n(), self.dim()),
                got: format!("cochain n={} d={}", other.n(), other.dim()),
            });
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Cochain) -> Result<Cochain> {
        self.check_same_space(other)?;
        Ok(Cochain {
            index: self.index.clone(),
            bits: &self.bits ^ &other.bits,
        })
    }

    /// Iterator over canonical cell labelings paired with values.
    pub fn iter(&self) -> impl Iterator<Item = (Cell, Sign)> + '_ {
        (0..self.len()).map(|i| (self.index.cell(i), self.get(i)))
    }
}

impl Mul for &Cochain {
    type Output = Cochain;
    /// Pointwise product. Panics if the cochains live on different spaces.
    fn mul(self, rhs: &Cochain) -> Cochain {
        self.try_mul(rhs).expect("cochain spaces differ")
    }
}

impl Mul<Sign> for &Cochain {
    type Output = Cochain;
    fn mul(self, s: Sign) -> Cochain {
        if s.is_plus() {
            self.clone()
        } else {
            -self
        }
    }
}

impl Neg for &Cochain {
    type Output = Cochain;
    fn neg(self) -> Cochain {
        Cochain {
            index: self.index.clone(),
            bits: self.bits.not(),
        }
    }
}

/// Product of `f` over the `d`-faces of each `target`-cell.
fn face_product(f: &Cochain, target: usize, faces: &[Vec<u8>]) -> Result<Cochain> {
    let index = checked_index(f.n(), target)?;
    let mut bits = BitVec::zeros(index.len());
    let mut t = [0; 8];
    let mut sub = [0; 8];
    for i in 0..index.len() {
        index.labeling_at(i, &mut t);
        let mut parity = false;
        for face in faces {
            for (s, &p) in sub.iter_mut().zip(face) {
                *s = t[p as usize];
            }
            parity ^= f.bits.get(f.index.index_of_labeling(&sub[..face.len()]));
        }
        if parity {
            bits.set(i, true);
        }
    }
    Ok(Cochain::from_bits(index, bits))
}

/// The differential: `(delta f)_c` is the product of `f` over the walls of `c`.
pub fn delta(f: &Cochain) -> Result<Cochain> {
    let d = f.dim();
    if d >= 3 {
        return Err(Error::UnsupportedDimension(d + 1));
    }
    face_product(f, d + 1, shape(d + 1).walls())
}

/// Generalized differential: product of `f` over all `d`-faces of each `target`-cell.
pub fn delta_general(f: &Cochain, target: usize) -> Result<Cochain> {
    let d = f.dim();
    if target <= d {
        return Err(Error::DimensionMismatch {
            expected: format!("target dimension above {d}"),
            got: target.to_string(),
        });
    }
    if target > 3 {
        return Err(Error::UnsupportedDimension(target));
    }
    face_product(f, target, &shape(target).faces[d])
}

/// Function on ordered pairs of distinct vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedCochain {
    n: usize,
    bits: BitVec,
}

impl DirectedCochain {
    pub fn ones(n: usize) -> Self {
        DirectedCochain {
            n,
            bits: BitVec::zeros(n * n.saturating_sub(1)),
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(Vertex, Vertex) -> Sign) -> Self {
        let mut out = Self::ones(n);
        for i in 0..n as Vertex {
            for j in 0..n as Vertex {
                if i != j && f(i, j).is_minus() {
                    let k = out.slot(i, j);
                    out.bits.set(k, true);
                }
            }
        }
        out
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self::from_fn(n, |_, _| Sign::from_bit(rng.random()))
    }

    /// A symmetric cochain viewed as a directed one.
    pub fn embed(f: &Cochain) -> Result<Self> {
        expect_dim(f, 1)?;
        Ok(Self::from_fn(f.n(), |i, j| f.edge(i, j)))
    }

    #[inline]
    pub(crate) fn slot(&self, i: Vertex, j: Vertex) -> usize {
        debug_assert!(i != j && (i as usize) < self.n && (j as usize) < self.n);
        let (i, j) = (i as usize, j as usize);
        i * (self.n - 1) + j - usize::from(j > i)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: Vertex, j: Vertex) -> Sign {
        Sign::from_bit(self.bits.get(self.slot(i, j)))
    }

    pub fn set(&mut self, i: Vertex, j: Vertex, s: Sign) {
        let k = self.slot(i, j);
        self.bits.set(k, s.is_minus());
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub(crate) fn from_bits(n: usize, bits: BitVec) -> Self {
        assert_eq!(bits.len(), n * n.saturating_sub(1));
        DirectedCochain { n, bits }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n as Vertex)
            .all(|i| (i + 1..self.n as Vertex).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn try_mul(&self, other: &DirectedCochain) -> Result<DirectedCochain> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: format!("directed cochain n={}", self.n),
                got: format!("directed cochain n={}", other.n),
            });
        }
        Ok(DirectedCochain {
            n: self.n,
            bits: &self.bits ^ &other.bits,
        })
    }

    /// Back to an undirected cochain, if symmetric.
    pub fn to_symmetric(&self) -> Option<Cochain> {
        if !self.is_symmetric() {
            return None;
        }
        Cochain::from_fn(self.n, 1, |t| self.get(t[0], t[1])).ok()
    }
}

impl Mul for &DirectedCochain {
    type Output = DirectedCochain;
    fn mul(self, rhs: &DirectedCochain) -> DirectedCochain {
        self.try_mul(rhs).expect("directed cochain sizes differ")
    }
}

fn expect_dim(f: &Cochain, d: usize) -> Result<()> {
    if f.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: format!("{d}-cochain"),
            got: format!("{}-cochain", f.dim()),
        });
    }
    Ok(())
}

/// The norm map: `(N f)_{ij} = f_{ij} f_{ji}`.
pub fn norm_map(f: &DirectedCochain) -> Cochain {
    Cochain::from_fn(f.n, 1, |t| f.get(t[0], t[1]) * f.get(t[1], t[0]))
        .expect("a directed cochain has at least one edge")
}

/// `(eta_h a)_{ij} = a_i`.
pub fn eta_head(alpha: &Cochain) -> Result<DirectedCochain> {
    expect_dim(alpha, 0)?;
    Ok(DirectedCochain::from_fn(alpha.n(), |i, _| {
        alpha.get(i as usize)
    }))
}

/// `(eta_t a)_{ij} = a_j`.
pub fn eta_tail(alpha: &Cochain) -> Result<DirectedCochain> {
    expect_dim(alpha, 0)?;
    Ok(DirectedCochain::from_fn(alpha.n(), |_, j| {
        alpha.get(j as usize)
    }))
}

/// A linear order on the vertices, stored as the rank of each vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexOrder {
    rank: Vec<u32>,
}

impl VertexOrder {
    /// The order of the ids themselves.
    pub fn natural(n: usize) -> Self {
        VertexOrder {
            rank: (0..n as u32).collect(),
        }
    }

    /// `increasing` lists every vertex once, smallest first.
    pub fn from_sequence(increasing: &[Vertex]) -> Result<Self> {
        let n = increasing.len();
        let mut rank = vec![u32::MAX; n];
        for (r, &v) in increasing.iter().enumerate() {
            if v as usize >= n || rank[v as usize] != u32::MAX {
                return Err(Error::InvalidCell(format!(
                    "{increasing:?} is not a permutation of 0..{n}"
                )));
            }
            rank[v as usize] = r as u32;
        }
        Ok(VertexOrder { rank })
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut seq: Vec<Vertex> = (0..n as Vertex).collect();
        for i in (1..n).rev() {
            seq.swap(i, rng.random_range(0..=i));
        }
        Self::from_sequence(&seq).unwrap()
    }

    pub fn n(&self) -> usize {
        self.rank.len()
    }

    #[inline]
    pub fn less(&self, a: Vertex, b: Vertex) -> bool {
        self.rank[a as usize] < self.rank[b as usize]
    }

    /// Whether some rotation or reflection of the 4-cycle is increasing.
    pub fn reads_increasing(&self, cycle: &[Vertex]) -> bool {
        shape(2)
            .group
            .iter()
            .any(|g| (0..3).all(|i| self.less(cycle[g[i] as usize], cycle[g[i + 1] as usize])))
    }
}

/// The order function: `psi_{ij} = +1` iff `i < j`.
pub fn order_function(order: &VertexOrder) -> DirectedCochain {
    DirectedCochain::from_fn(order.n(), |i, j| Sign::from_bit(!order.less(i, j)))
}

/// `[+1]` is constant +1; `[-1]` is +1 exactly on squares whose cycle reads increasing.
pub fn bracket_cochain(sign: Sign, order: &VertexOrder) -> Result<Cochain> {
    let n = order.n();
    if sign.is_plus() {
        return Cochain::ones(n, 2);
    }
    Cochain::from_fn(n, 2, |t| Sign::from_bit(!order.reads_increasing(t)))
}

/// A μ₂-valued function on k-tuples of distinct vertices.
pub trait TupleFunction {
    fn n(&self) -> usize;
    fn arity(&self) -> usize;
    /// `t` has `arity()` distinct entries below `n()`.
    fn eval(&self, t: &[Vertex]) -> Sign;
}

impl<T: TupleFunction + ?Sized> TupleFunction for &T {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn eval(&self, t: &[Vertex]) -> Sign {
        (**self).eval(t)
    }
}

/// A tuple function given by a closure.
pub struct FnTuple<F> {
    n: usize,
    arity: usize,
    f: F,
}

impl<F: Fn(&[Vertex]) -> Sign> FnTuple<F> {
    pub fn new(n: usize, arity: usize, f: F) -> Self {
        FnTuple { n, arity, f }
    }
}

impl<F: Fn(&[Vertex]) -> Sign> TupleFunction for FnTuple<F> {
    fn n(&self) -> usize {
        self.n
    }
    fn arity(&self) -> usize {
        self.arity
    }
    fn eval(&self, t: &[Vertex]) -> Sign {
        (self.f)(t)
    }
}

/// Calls `f` on every tuple of `k` distinct vertices below `n`, in lexicographic order.
pub fn for_each_distinct_tuple(n: usize, k: usize, mut f: impl FnMut(&[Vertex])) {
    fn rec(n: usize, buf: &mut Vec<Vertex>, k: usize, f: &mut dyn FnMut(&[Vertex])) {
        if buf.len() == k {
            f(buf);
            return;
        }
        for v in 0..n as Vertex {
            if !buf.contains(&v) {
                buf.push(v);
                rec(n, buf, k, f);
                buf.pop();
            }
        }
    }
    if k <= n {
        rec(n, &mut Vec::with_capacity(k), k, &mut f);
    }
}

/// A Monte Carlo estimate of a probability with a Hoeffding half-width.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub half_width: f64,
    pub samples: u64,
}

impl Estimate {
    pub fn from_counts(hits: u64, samples: u64) -> Self {
        let value = if samples == 0 {
            0.0
        } else {
            hits as f64 / samples as f64
        };
        let half_width = if samples == 0 {
            1.0
        } else {
            ((2.0 / HOEFFDING_DELTA).ln() / (2.0 * samples as f64)).sqrt()
        };
        Estimate {
            value,
            half_width,
            samples,
        }
    }

    pub fn lower(&self) -> f64 {
        (self.value - self.half_width).max(0.0)
    }

    pub fn upper(&self) -> f64 {
        (self.value + self.half_width).min(1.0)
    }
}

/// A norm, either computed exactly or estimated by sampling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormValue {
    Exact(Ratio),
    Estimated(Estimate),
}

impl NormValue {
    pub fn value(&self) -> f64 {
        match self {
            NormValue::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            NormValue::Estimated(e) => e.value,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, NormValue::Exact(_))
    }

    pub fn exact(&self) -> Option<Ratio> {
        match self {
            NormValue::Exact(r) => Some(*r),
            NormValue::Estimated(_) => None,
        }
    }

    /// Multiplies by an integer constant (certified bounds are `c * p`).
    pub fn scaled(&self, c: u64) -> NormValue {
        match self {
            NormValue::Exact(r) => NormValue::Exact(*r * c),
            NormValue::Estimated(e) => NormValue::Estimated(Estimate {
                value: e.value * c as f64,
                half_width: e.half_width * c as f64,
                samples: e.samples,
            }),
        }
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormValue::Exact(r) => write!(f, "{}", r),
            NormValue::Estimated(e) => write!(f, "{:.6}~{:.6}", e.value, e.half_width),
        }
    }
}

/// Exact fraction of tuples where `f` is -1 (enumerates all of `X^[k]`).
pub fn tuple_norm_exact<F: TupleFunction + ?Sized>(f: &F) -> Ratio {
    let mut total = 0u64;
    let mut minus = 0u64;
    for_each_distinct_tuple(f.n(), f.arity(), |t| {
        total += 1;
        minus += f.eval(t).is_minus() as u64;
    });
    Ratio::new(minus, total.max(1))
}

pub fn tuple_norm_sampled<F: TupleFunction + ?Sized, R: Rng + ?Sized>(
    f: &F,
    samples: u64,
    rng: &mut R,
) -> Result<Estimate> {
    let mut t = vec![0; f.arity()];
    let mut minus = 0;
    for _ in 0..samples {
        sample_tuple_into(f.n(), &[], rng, &mut t)?;
        minus += f.eval(&t).is_minus() as u64;
    }
    Ok(Estimate::from_counts(minus, samples))
}

/// Sampled norm of a cochain over uniformly random cells.
pub fn cochain_norm_sampled<R: Rng + ?Sized>(f: &Cochain, samples: u64, rng: &mut R) -> Estimate {
    let mut minus = 0;
    for _ in 0..samples {
        minus += f.bits.get(f.index.sample(rng)) as u64;
    }
    Estimate::from_counts(minus, samples)
}

/// The directed differential on 4-tuples:
/// `f_{i i'} f_{i'' i'} f_{i'' i'''} f_{i i'''}` for the tuple `(i, i', i'', i''')`.
#[derive(Clone, Copy)]
pub struct DirectedSquare<'a> {
    f: &'a DirectedCochain,
}

pub fn vdelta1(f: &DirectedCochain) -> DirectedSquare<'_> {
    DirectedSquare { f }
}

impl TupleFunction for DirectedSquare<'_> {
    fn n(&self) -> usize {
        self.f.n
    }
    fn arity(&self) -> usize {
        4
    }
    #[inline]
    fn eval(&self, t: &[Vertex]) -> Sign {
        let f = self.f;
        f.get(t[0], t[1]) * f.get(t[2], t[1]) * f.get(t[2], t[3]) * f.get(t[0], t[3])
    }
}

impl DirectedSquare<'_> {
    /// First canonical square where the value changes under rotation.
    ///
    /// The formula is already invariant under swapping opposite corners, so
    /// invariance under one rotation gives the full dihedral symmetry.
    pub fn asymmetry_witness(&self) -> Option<[Vertex; 4]> {
        let n = self.f.n;
        let index = CellIndex::new(n, 2).ok()?;
        let mut t = [0; 4];
        (0..index.len()).find_map(|i| {
            index.labeling_at(i, &mut t);
            let rotated = [t[1], t[2], t[3], t[0]];
            (self.eval(&t) != self.eval(&rotated)).then_some(t)
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry_witness().is_none()
    }

    /// Materializes as a 2-cochain after checking square symmetry.
    pub fn to_cochain(&self) -> Result<Cochain> {
        if let Some(tuple) = self.asymmetry_witness() {
            return Err(Error::Asymmetric { tuple });
        }
        Cochain::from_fn(self.f.n, 2, |t| self.eval(t))
    }
}

/// Largest coset enumerated by [`coset_norm`], as a power of two.
pub const MAX_COSET_GENERATORS: usize = 20;

/// `min` of the norm over the coset `f * <basis>`, by Gray-code enumeration.
pub fn coset_norm(f: &Cochain, basis: &[Cochain]) -> Result<Ratio> {
    if basis.len() > MAX_COSET_GENERATORS {
        return Err(Error::CosetTooLarge {
            generators: basis.len(),
        });
    }
    for b in basis {
        f.check_same_space(b)?;
    }
    let mut cur = f.bits.clone();
    let mut best = cur.count_ones();
    for step in 1u64..(1u64 << basis.len()) {
        cur ^= &basis[step.trailing_zeros() as usize].bits;
        best = best.min(cur.count_ones());
    }
    Ok(Ratio::new(best, f.len() as u64))
}

/// A cochain together with the `key=value` metadata of its header line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainFile {
    pub cochain: Cochain,
    pub meta: Vec<(String, String)>,
}

impl CochainFile {
    pub fn new(cochain: Cochain) -> Self {
        CochainFile {
            cochain,
            meta: Vec::new(),
        }
    }
}

impl fmt::Display for CochainFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.cochain;
        write!(f, "CUBECHAIN n={} d={}", c.n(), c.dim())?;
        for (k, v) in &self.meta {
            write!(f, " {k}={v}")?;
        }
        writeln!(f)?;
        let mut t = [0; 8];
        let size = c.index.cell_size();
        for i in 0..c.len() {
            c.index.labeling_at(i, &mut t);
            for v in &t[..size] {
                write!(f, "{v} ")?;
            }
            writeln!(f, "{}", c.get(i))?;
        }
        Ok(())
    }
}

impl FromStr for CochainFile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
        let mut tokens = header.split_whitespace();
        if tokens.next() != Some("CUBECHAIN") {
            return Err(Error::parse(1, "expected `CUBECHAIN n=<n> d=<d>` header"));
        }
        let mut n = None;
        let mut d = None;
        let mut meta = Vec::new();
        for tok in tokens {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::parse(1, format!("malformed header field `{tok}`")))?;
            match k {
                "n" => n = Some(v.parse::<usize>().map_err(|_| Error::parse(1, "bad n"))?),
                "d" => d = Some(v.parse::<usize>().map_err(|_| Error::parse(1, "bad d"))?),
                _ => meta.push((k.to_string(), v.to_string())),
            }
        }
        let (n, d) = match (n, d) {
            (Some(n), Some(d)) => (n, d),
            _ => return Err(Error::parse(1, "header must set n and d")),
        };
        let mut cochain = Cochain::ones(n, d).map_err(|e| Error::parse(1, e.to_string()))?;
        let size = 1usize << d;
        let mut seen = BitVec::zeros(cochain.len());
        let mut last = 1;
        let mut t = vec![0 as Vertex; size];
        for (line_no, line) in lines {
            last = line_no;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            if toks.len() != size + 1 {
                return Err(Error::parse(
                    line_no,
                    format!(
                        "expected {size} vertex ids and a sign, got {} fields",
                        toks.len()
                    ),
                ));
            }
            for (slot, tok) in t.iter_mut().zip(&toks[..size]) {
                let v: usize = tok
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad vertex id `{tok}`")))?;
                if v >= n {
                    return Err(Error::parse(line_no, format!("vertex {v} out of range")));
                }
                *slot = v as Vertex;
            }
            if let Some(dup) = (0..size).find(|&i| t[..i].contains(&t[i])) {
                return Err(Error::parse(line_no, format!("repeated vertex {}", t[dup])));
            }
            let sign: Sign = toks[size]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad sign `{}`", toks[size])))?;
            let idx = cochain.index.index_of_labeling(&t);
            if seen.get(idx) {
                return Err(Error::parse(line_no, "duplicate cell"));
            }
            seen.set(idx, true);
            cochain.set(idx, sign);
        }
        let missing = cochain.len() as u64 - seen.count_ones();
        if missing > 0 {
            return Err(Error::parse(
                last + 1,
                format!("{missing} cells missing; cochains must be total"),
            ));
        }
        Ok(CochainFile { cochain, meta })
    }
}
