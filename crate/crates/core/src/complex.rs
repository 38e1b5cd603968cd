//! Cells of the complete cubical complex and their dense indexing.
//!
//! A d-cell is a set of `2^d` vertices carrying the graph structure of the
//! d-cube. In the complete complex every such vertex set carries every
//! possible cube structure, so a cell is a labeling of the cube's corners
//! taken up to the cube's automorphisms. We store the lexicographically
//! least labeling in each orbit.
//!
//! Labelings are given in "shape order":
//!
//! * vertex: `[v]`
//! * edge: `[i, j]`
//! * square: the 4-cycle `[i, j, k, l]` with edges ij, jk, kl, li
//! * cube: `[v_0, ..., v_7]` where `v_c` sits on the corner whose bits are `c`
//!   (bit 0 = x, bit 1 = y, bit 2 = z)
//!
//! Index of a cell = colex rank of its vertex subset times the number of
//! cube structures per subset, plus the rank of its structure.

use std::fmt;
use std::sync::OnceLock;

use rand::Rng;

use crate::error::{Error, Result};

pub type Vertex = u32;

/// Maximum supported cell dimension.
pub const MAX_DIM: usize = 3;

/// Shape-order position tuples of one cube type, with its symmetry data.
#[derive(Debug)]
pub(crate) struct Shape {
    pub(crate) size: usize,
    /// Position permutations; applying `g` to `t` yields `t[g[0]], t[g[1]], ...`.
    pub(crate) group: Vec<Vec<u8>>,
    /// Indexed by the Lehmer rank of a local permutation.
    perm_to_orbit: Vec<u16>,
    /// Canonical local tuple of each orbit, in increasing lexicographic order.
    pub(crate) reps: Vec<Vec<u8>>,
    /// `faces[k]` lists the k-faces as position tuples in the k-shape order.
    pub(crate) faces: Vec<Vec<Vec<u8>>>,
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

fn lehmer_rank(p: &[u8]) -> usize {
    let k = p.len();
    let mut rank = 0;
    for i in 0..k {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count();
        rank = rank * (k - i) + smaller;
    }
    rank
}

fn all_perms(k: usize) -> Vec<Vec<u8>> {
    // lexicographic order
    let mut out = Vec::with_capacity(factorial(k));
    let mut p: Vec<u8> = (0..k as u8).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            break;
        };
        let j = (i + 1..k).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
    out
}

fn apply(t: &[u8], g: &[u8]) -> Vec<u8> {
    g.iter().map(|&pos| t[pos as usize]).collect()
}

fn cube_group() -> Vec<Vec<u8>> {
    let bit_perms = all_perms(3);
    let mut group = Vec::with_capacity(48);
    for bp in &bit_perms {
        for mask in 0u8..8 {
            let g: Vec<u8> = (0u8..8)
                .map(|c| {
                    let mut out = 0u8;
                    for (b, &to) in bp.iter().enumerate() {
                        if c >> b & 1 == 1 {
                            out |= 1 << to;
                        }
                    }
                    out ^ mask
                })
                .collect();
            group.push(g);
        }
    }
    group
}

fn square_group() -> Vec<Vec<u8>> {
    let mut group = Vec::with_capacity(8);
    for k in 0..4u8 {
        group.push((0..4u8).map(|i| (i + k) % 4).collect());
        group.push((0..4u8).map(|i| (k + 4 - i) % 4).collect());
    }
    group
}

/// The 4-cycle of a cube face with `bit` fixed to `value`.
fn cube_face(bit: u8, value: u8) -> Vec<u8> {
    let free: Vec<u8> = (0..3).filter(|&b| b != bit).collect();
    let (p, q) = (free[0], free[1]);
    let corner = |x: u8, y: u8| (value << bit) | (x << p) | (y << q);
    vec![corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)]
}

impl Shape {
    fn build(d: usize) -> Shape {
        let size = 1usize << d;
        let group = match d {
            0 => vec![vec![0]],
            1 => vec![vec![0, 1], vec![1, 0]],
            2 => square_group(),
            3 => cube_group(),
            _ => unreachable!(),
        };
        let mut faces: Vec<Vec<Vec<u8>>> = vec![Vec::new(); d + 1];
        faces[d] = vec![(0..size as u8).collect()];
        if d >= 1 {
            faces[0] = (0..size as u8).map(|c| vec![c]).collect();
        }
        match d {
            2 => faces[1] = (0..4u8).map(|i| vec![i, (i + 1) % 4]).collect(),
            3 => {
                faces[1] = (0..3u8)
                    .flat_map(|b| {
                        (0..8u8)
                            .filter(move |c| c >> b & 1 == 0)
                            .map(move |c| vec![c, c | (1 << b)])
                    })
                    .collect();
                faces[2] = (0..3u8)
                    .flat_map(|b| (0..2u8).map(move |v| cube_face(b, v)))
                    .collect();
            }
            _ => {}
        }

        let perms = all_perms(size);
        let mut perm_to_orbit = vec![u16::MAX; perms.len()];
        let mut reps = Vec::new();
        // Visiting permutations in lexicographic order means the first member
        // seen of each orbit is its least element.
        for p in &perms {
            let r = lehmer_rank(p);
            if perm_to_orbit[r] != u16::MAX {
                continue;
            }
            let id = reps.len() as u16;
            for g in &group {
                perm_to_orbit[lehmer_rank(&apply(p, g))] = id;
            }
            reps.push(p.clone());
        }
        Shape {
            size,
            group,
            perm_to_orbit,
            reps,
            faces,
        }
    }

    #[inline]
    pub(crate) fn orbits(&self) -> usize {
        self.reps.len()
    }

    /// Orbit of a labeling with distinct entries.
    #[inline]
    fn orbit_of(&self, t: &[Vertex]) -> usize {
        let mut local = [0u8; 8];
        for i in 0..self.size {
            local[i] = t[..self.size].iter().filter(|&&x| x < t[i]).count() as u8;
        }
        self.perm_to_orbit[lehmer_rank(&local[..self.size])] as usize
    }

    pub(crate) fn walls(&self) -> &[Vec<u8>] {
        let d = self.faces.len() - 1;
        &self.faces[d - 1]
    }
}

pub(crate) fn shape(d: usize) -> &'static Shape {
    static SHAPES: [OnceLock<Shape>; 4] = [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ];
    SHAPES[d].get_or_init(|| Shape::build(d))
}

/// An undirected edge, stored with the smaller id first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge([Vertex; 2]);

/// A 2-cell: a 4-cycle in canonical (lexicographically least) form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Square([Vertex; 4]);

/// A 3-cell: a labeling of the corners of {0,1}^3 in canonical form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube3([Vertex; 8]);

fn check_distinct(t: &[Vertex]) -> Result<()> {
    for i in 0..t.len() {
        if t[..i].contains(&t[i]) {
            return Err(Error::InvalidCell(format!(
                "repeated vertex {} in {:?}",
                t[i], t
            )));
        }
    }
    Ok(())
}

/// Lexicographic minimum of the orbit of `t` under `shape(d)`'s group.
fn canonical_tuple(d: usize, t: &[Vertex], out: &mut [Vertex]) {
    let sh = shape(d);
    let orbit = sh.orbit_of(t);
    let mut sorted = [0 as Vertex; 8];
    sorted[..sh.size].copy_from_slice(&t[..sh.size]);
    sorted[..sh.size].sort_unstable();
    for (o, &p) in out.iter_mut().zip(&sh.reps[orbit]) {
        *o = sorted[p as usize];
    }
}

impl Edge {
    pub fn new(i: Vertex, j: Vertex) -> Result<Self> {
        check_distinct(&[i, j])?;
        Ok(Edge([i.min(j), i.max(j)]))
    }
    pub fn vertices(&self) -> [Vertex; 2] {
        self.0
    }
}

/// Canonical form of the square with cycle `i j k l`.
pub fn canonical_square(i: Vertex, j: Vertex, k: Vertex, l: Vertex) -> Result<Square> {
    let t = [i, j, k, l];
    check_distinct(&t)?;
    let mut out = [0; 4];
    canonical_tuple(2, &t, &mut out);
    Ok(Square(out))
}

/// Canonical form of a cube labeling (`labeling[c]` sits on corner `c`).
pub fn canonical_cube(labeling: [Vertex; 8]) -> Result<Cube3> {
    check_distinct(&labeling)?;
    let mut out = [0; 8];
    canonical_tuple(3, &labeling, &mut out);
    Ok(Cube3(out))
}

impl Square {
    pub fn vertices(&self) -> [Vertex; 4] {
        self.0
    }
}

impl Cube3 {
    pub fn vertices(&self) -> [Vertex; 8] {
        self.0
    }
}

/// A cell of dimension 0..=3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Vertex(Vertex),
    Edge(Edge),
    Square(Square),
    Cube(Cube3),
}

impl Cell {
    /// Builds the canonical cell from a shape-order labeling of length 1, 2, 4 or 8.
    pub fn from_labeling(t: &[Vertex]) -> Result<Cell> {
        check_distinct(t)?;
        let d = match t.len() {
            1 => 0,
            2 => 1,
            4 => 2,
            8 => 3,
            k => {
                return Err(Error::InvalidCell(format!(
                    "{k} vertices is not a cube size"
                )))
            }
        };
        let mut out = [0; 8];
        canonical_tuple(d, t, &mut out[..t.len()]);
        Ok(Cell::from_canonical(d, &out[..t.len()]))
    }

    fn from_canonical(d: usize, t: &[Vertex]) -> Cell {
        match d {
            0 => Cell::Vertex(t[0]),
            1 => Cell::Edge(Edge([t[0], t[1]])),
            2 => Cell::Square(Square(t.try_into().unwrap())),
            _ => Cell::Cube(Cube3(t.try_into().unwrap())),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Cell::Vertex(_) => 0,
            Cell::Edge(_) => 1,
            Cell::Square(_) => 2,
            Cell::Cube(_) => 3,
        }
    }

    /// Vertices in shape order.
    pub fn vertices(&self) -> &[Vertex] {
        match self {
            Cell::Vertex(v) => std::slice::from_ref(v),
            Cell::Edge(e) => &e.0,
            Cell::Square(s) => &s.0,
            Cell::Cube(c) => &c.0,
        }
    }

    /// The faces of dimension `k` (k <= dim), each in canonical form.
    pub fn faces(&self, k: usize) -> Vec<Cell> {
        let d = self.dim();
        assert!(k <= d, "face dimension {k} exceeds cell dimension {d}");
        let t = self.vertices();
        shape(d).faces[k]
            .iter()
            .map(|pos| {
                let sub: Vec<Vertex> = pos.iter().map(|&p| t[p as usize]).collect();
                Cell::from_labeling(&sub).expect("faces of a valid cell are valid")
            })
            .collect()
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// The 2d walls of a d-cell (d >= 1).
pub fn walls(cell: &Cell) -> Vec<Cell> {
    let d = cell.dim();
    if d == 0 {
        return Vec::new();
    }
    cell.faces(d - 1)
}

/// `C(n, k)` with saturation on overflow.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).unwrap_or(u64::MAX)
}

/// Number of d-cells of the complete complex: `C(n, 2^d) (2^d)! / (2^d d!)`.
pub fn cell_count(n: usize, d: usize) -> u64 {
    let size = 1u64 << d;
    let per = factorial(1 << d) as u64 / (size * factorial(d) as u64);
    binomial(n as u64, size).saturating_mul(per)
}

/// Dense bijection between the canonical d-cells on `n` vertices and `0..len`.
#[derive(Clone, Debug)]
pub struct CellIndex {
    n: usize,
    d: usize,
    orbits: usize,
    len: usize,
    /// binom[v][j] = C(v, j) for v <= n, j <= 2^d
    binom: Vec<[u64; 9]>,
}

impl PartialEq for CellIndex {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.d == other.d
    }
}

impl Eq for CellIndex {}

impl CellIndex {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if d > MAX_DIM {
            return Err(Error::UnsupportedDimension(d));
        }
        let need = 1usize << d;
        if n < need {
            return Err(Error::EmptyComplex { n, d, need });
        }
        if n > u32::MAX as usize {
            return Err(Error::TooManyVertices {
                what: "cell indexing",
                n,
                max: u32::MAX as usize,
            });
        }
        let count = cell_count(n, d);
        let len = usize::try_from(count).map_err(|_| Error::TooLarge {
            what: "cell index",
            size: count as u128,
            limit: usize::MAX as u128,
        })?;
        let binom = (0..=n as u64)
            .map(|v| std::array::from_fn(|j| binomial(v, j as u64)))
            .collect();
        Ok(CellIndex {
            n,
            d,
            orbits: shape(d).orbits(),
            len,
            binom,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Vertices per cell.
    #[inline]
    pub fn cell_size(&self) -> usize {
        1 << self.d
    }

    /// Index of the cell with shape-order labeling `t` (any representative).
    ///
    /// `t` must hold `2^d` distinct ids below `n`; this is only checked in
    /// debug builds. Use [`CellIndex::index`] for validated input.
    #[inline]
    pub fn index_of_labeling(&self, t: &[Vertex]) -> usize {
        let size = self.cell_size();
        debug_assert_eq!(t.len(), size);
        debug_assert!(t.iter().all(|&v| (v as usize) < self.n));
        let orbit = shape(self.d).orbit_of(t);
        let mut sorted = [0 as Vertex; 8];
        sorted[..size].copy_from_slice(t);
        sorted[..size].sort_unstable();
        let mut rank = 0u64;
        for (i, &v) in sorted[..size].iter().enumerate() {
            rank += self.binom[v as usize][i + 1];
        }
        rank as usize * self.orbits + orbit
    }

    pub fn index(&self, cell: &Cell) -> Result<usize> {
        if cell.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: format!("{}-cell", self.d),
                got: format!("{}-cell", cell.dim()),
            });
        }
        if let Some(&v) = cell.vertices().iter().find(|&&v| v as usize >= self.n) {
            return Err(Error::InvalidCell(format!(
                "vertex {v} out of range for n = {}",
                self.n
            )));
        }
        Ok(self.index_of_labeling(cell.vertices()))
    }

    /// Writes the canonical labeling of cell `idx` into `out[..2^d]`.
    pub fn labeling_at(&self, idx: usize, out: &mut [Vertex]) {
        assert!(idx < self.len, "cell index {idx} out of range");
        let size = self.cell_size();
        let orbit = idx % self.orbits;
        let mut r = (idx / self.orbits) as u64;
        let mut sorted = [0 as Vertex; 8];
        let mut hi = self.n;
        for i in (0..size).rev() {
            // largest v < hi with C(v, i+1) <= r
            let mut v = hi - 1;
            while self.binom[v][i + 1] > r {
                v -= 1;
            }
            sorted[i] = v as Vertex;
            r -= self.binom[v][i + 1];
            hi = v;
        }
        for (o, &p) in out.iter_mut().zip(&shape(self.d).reps[orbit]) {
            *o = sorted[p as usize];
        }
    }

    pub fn cell(&self, idx: usize) -> Cell {
        let mut t = [0; 8];
        self.labeling_at(idx, &mut t);
        Cell::from_canonical(self.d, &t[..self.cell_size()])
    }

    pub fn iter(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.len).map(|i| self.cell(i))
    }

    /// Uniform random cell index.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        rng.random_range(0..self.len)
    }
}

/// Every canonical d-cell on `n` vertices, in index order.
pub fn enumerate_cells(n: usize, d: usize) -> Result<Vec<Cell>> {
    let index = CellIndex::new(n, d)?;
    Ok(index.iter().collect())
}

/// Uniform element of `X^[k]`: a k-tuple of distinct vertices.
pub fn sample_tuple<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Vec<Vertex>> {
    let mut out = vec![0; k];
    sample_tuple_into(n, &[], rng, &mut out)?;
    Ok(out)
}

/// Fills `out` with a uniform tuple of distinct vertices avoiding `exclude`.
pub fn sample_tuple_into<R: Rng + ?Sized>(
    n: usize,
    exclude: &[Vertex],
    rng: &mut R,
    out: &mut [Vertex],
) -> Result<()> {
    let k = out.len();
    let excluded = exclude.iter().filter(|&&v| (v as usize) < n).count();
    let available = n - excluded.min(n);
    if k > available {
        return Err(Error::TupleTooLong { k, available });
    }
    if 2 * k <= available {
        let mut filled = 0;
        while filled < k {
            let v = rng.random_range(0..n) as Vertex;
            if !exclude.contains(&v) && !out[..filled].contains(&v) {
                out[filled] = v;
                filled += 1;
            }
        }
    } else {
        let mut pool: Vec<Vertex> = (0..n as Vertex).filter(|v| !exclude.contains(v)).collect();
        for i in 0..k {
            let j = rng.random_range(i..pool.len());
            pool.swap(i, j);
            out[i] = pool[i];
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded;
    use proptest::prelude::*;
    use std::collections::{BTreeSet, HashMap};

    #[test]
    fn shape_orbit_counts() {
        assert_eq!(shape(0).orbits(), 1);
        assert_eq!(shape(1).orbits(), 1);
        assert_eq!(shape(2).orbits(), 3);
        assert_eq!(shape(3).orbits(), 840);
        assert_eq!(shape(3).group.len(), 48);
    }

    #[test]
    fn cube_group_preserves_adjacency() {
        for g in &shape(3).group {
            for a in 0..8u8 {
                for b in 0..8u8 {
                    let adjacent = (a ^ b).count_ones() == 1;
                    let image = (g[a as usize] ^ g[b as usize]).count_ones() == 1;
                    assert_eq!(adjacent, image);
                }
            }
        }
    }

    #[test]
    fn enumerate_small_counts() {
        assert_eq!(enumerate_cells(4, 2).unwrap().len(), 3);
        assert_eq!(enumerate_cells(2, 1).unwrap().len(), 1);
        assert_eq!(enumerate_cells(8, 3).unwrap().len(), 840);
        assert_eq!(
            enumerate_cells(3, 2),
            Err(Error::EmptyComplex {
                n: 3,
                d: 2,
                need: 4
            })
        );
    }

    /// Orbit oracle: count labelings of {0..7} by the edge set they induce.
    /// Two labelings are the same cube iff their edge sets agree.
    #[test]
    fn cube_orbits_by_edge_sets() {
        let edge_set = |t: &[u32]| -> BTreeSet<(u32, u32)> {
            shape(3).faces[1]
                .iter()
                .map(|e| {
                    let (a, b) = (t[e[0] as usize], t[e[1] as usize]);
                    (a.min(b), a.max(b))
                })
                .collect()
        };
        let mut classes: HashMap<BTreeSet<(u32, u32)>, Cube3> = HashMap::new();
        for p in all_perms(8) {
            let t: Vec<u32> = p.iter().map(|&x| x as u32).collect();
            let c = canonical_cube(t.clone().try_into().unwrap()).unwrap();
            let prev = classes.entry(edge_set(&t)).or_insert(c);
            assert_eq!(*prev, c);
        }
        assert_eq!(classes.len(), 40320 / 48);
        let distinct: BTreeSet<_> = classes.values().collect();
        assert_eq!(distinct.len(), 840);
    }

    #[test]
    fn canonical_square_examples() {
        let s = canonical_square(1, 2, 3, 4).unwrap();
        assert_eq!(s.vertices(), [1, 2, 3, 4]);
        assert_eq!(canonical_square(3, 2, 1, 4).unwrap(), s);
        assert_ne!(canonical_square(1, 3, 2, 4).unwrap(), s);
        assert!(matches!(
            canonical_square(1, 1, 2, 3),
            Err(Error::InvalidCell(_))
        ));
    }

    #[test]
    fn canonical_cube_examples() {
        let id = canonical_cube([0, 1, 2, 3, 4, 5, 6, 7]).unwrap();
        assert_eq!(id.vertices(), [0, 1, 2, 3, 4, 5, 6, 7]);
        // reflection x -> 1 - x swaps corners c and c ^ 1
        let refl: [u32; 8] = std::array::from_fn(|c| (c ^ 1) as u32);
        assert_eq!(canonical_cube(refl).unwrap(), id);
        // swapping two non-symmetric corners changes the edge set
        let other = canonical_cube([0, 1, 2, 3, 4, 5, 7, 6]).unwrap();
        assert_ne!(other, id);
        assert!(canonical_cube([0, 1, 2, 3, 4, 5, 6, 6]).is_err());
    }

    #[test]
    fn walls_examples() {
        let s = Cell::Square(canonical_square(1, 2, 3, 4).unwrap());
        let w: BTreeSet<Cell> = walls(&s).into_iter().collect();
        let expected: BTreeSet<Cell> = [(1, 2), (2, 3), (3, 4), (1, 4)]
            .into_iter()
            .map(|(a, b)| Cell::Edge(Edge::new(a, b).unwrap()))
            .collect();
        assert_eq!(w, expected);

        let c = Cell::Cube(canonical_cube([0, 1, 2, 3, 4, 5, 6, 7]).unwrap());
        let w = walls(&c);
        assert_eq!(w.len(), 6);
        assert!(w.iter().all(|x| x.dim() == 2));

        let e = Cell::Edge(Edge::new(5, 2).unwrap());
        assert_eq!(walls(&e), vec![Cell::Vertex(2), Cell::Vertex(5)]);
    }

    /// Each codimension-2 face lies in exactly two walls.
    #[test]
    fn thin_walls() {
        for d in 2..=3 {
            let index = CellIndex::new(8, d).unwrap();
            for idx in (0..index.len()).step_by(7) {
                let cell = index.cell(idx);
                let mut count: HashMap<Cell, usize> = HashMap::new();
                for w in walls(&cell) {
                    for f in walls(&w) {
                        *count.entry(f).or_default() += 1;
                    }
                }
                assert_eq!(count.len(), cell.faces(d - 2).len());
                assert!(count.values().all(|&c| c == 2));
            }
        }
    }

    #[test]
    fn closed_form_counts() {
        for n in 1..=12 {
            for d in 0..=3 {
                match CellIndex::new(n, d) {
                    Ok(ix) => {
                        assert_eq!(ix.len() as u64, cell_count(n, d));
                        if ix.len() < 200_000 {
                            let set: BTreeSet<Cell> = ix.iter().collect();
                            assert_eq!(set.len(), ix.len());
                        }
                    }
                    Err(_) => assert!(n < 1 << d),
                }
            }
        }
    }

    #[test]
    fn index_round_trip_exhaustive_small() {
        for (n, d) in [(5, 0), (6, 1), (7, 2), (9, 3)] {
            let ix = CellIndex::new(n, d).unwrap();
            for i in 0..ix.len() {
                let c = ix.cell(i);
                assert_eq!(ix.index(&c).unwrap(), i);
                if i > 0 {
                    // cells come out in index order, colex on subsets
                    assert_ne!(ix.cell(i - 1), c);
                }
            }
        }
    }

    #[test]
    fn tuple_sampling_uniform() {
        let mut rng = seeded(11);
        let draws = 60_000;
        let mut counts: HashMap<Vec<u32>, usize> = HashMap::new();
        for _ in 0..draws {
            *counts
                .entry(sample_tuple(3, 2, &mut rng).unwrap())
                .or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        let expect = draws as f64 / 6.0;
        let sigma = (draws as f64 * (1.0 / 6.0) * (5.0 / 6.0)).sqrt();
        for c in counts.values() {
            assert!((*c as f64 - expect).abs() < 3.0 * sigma, "{counts:?}");
        }
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - expect).powi(2) / expect)
            .sum();
        // 5 degrees of freedom, 0.999 quantile is 20.5
        assert!(chi2 < 20.5, "chi2 = {chi2}");
    }

    #[test]
    fn tuple_sampling_edges() {
        let mut rng = seeded(1);
        let mut p = sample_tuple(6, 6, &mut rng).unwrap();
        p.sort();
        assert_eq!(p, vec![0, 1, 2, 3, 4, 5]);
        assert!(sample_tuple(3, 4, &mut rng).is_err());
        let a: Vec<_> = (0..5)
            .map(|_| sample_tuple(9, 4, &mut seeded(3)).unwrap())
            .collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let mut out = [0; 3];
        for _ in 0..100 {
            sample_tuple_into(6, &[0, 5], &mut rng, &mut out).unwrap();
            assert!(out.iter().all(|v| *v != 0 && *v != 5));
        }
    }

    proptest! {
        #[test]
        fn canonical_is_orbit_constant(seed in any::<u64>(), d in 2usize..=3) {
            let mut rng = seeded(seed);
            let size = 1 << d;
            let t = sample_tuple(12, size, &mut rng).unwrap();
            let canon = Cell::from_labeling(&t).unwrap();
            // idempotent
            prop_assert_eq!(Cell::from_labeling(canon.vertices()).unwrap(), canon);
            // constant on the orbit, and every orbit element is >= the canonical form
            for g in &shape(d).group {
                let img: Vec<u32> = g.iter().map(|&p| t[p as usize]).collect();
                prop_assert_eq!(Cell::from_labeling(&img).unwrap(), canon);
                prop_assert!(canon.vertices() <= &img[..]);
            }
            // a random relabeling outside the orbit gives a different cell iff not in orbit
            let mut other = t.clone();
            other.swap(0, 1);
            let in_orbit = shape(d).group.iter().any(|g| {
                g.iter().map(|&p| t[p as usize]).collect::<Vec<_>>() == other
            });
            prop_assert_eq!(Cell::from_labeling(&other).unwrap() == canon, in_orbit);
        }
    }
}
