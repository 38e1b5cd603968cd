//! Incidence geometries with elements of three types.
//!
//! Elements are numbered per type. Incidence between distinct types is
//! stored in both directions; every element is incident to itself and,
//! in a pre-geometry, to no other element of its type.

use std::fmt;
use std::str::FromStr;

use crate::bits::BitVec;
use crate::cochain::Cochain;
use crate::complex::{shape, CellIndex};
use crate::error::{Error, Result};
use crate::lab::BooleanMatrix;
use crate::sign::Sign;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geometry3 {
    counts: [usize; 3],
    /// `adj[a][b][x]`: neighbours of type `b` of element `x` of type `a`.
    adj: [[Vec<Vec<u32>>; 3]; 3],
    /// Distinct same-type pairs that were declared incident.
    same_type: usize,
}

/// Predicates computed by [`Geometry3::validate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeometryReport {
    pub is_pregeometry: bool,
    pub is_geometry: bool,
    pub is_even: bool,
    pub is_thin: bool,
    /// Largest number of type-1 elements below a type-2 element.
    pub max_degree: usize,
}

impl fmt::Display for GeometryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "is_pregeometry {}", self.is_pregeometry)?;
        writeln!(f, "is_geometry {}", self.is_geometry)?;
        writeln!(f, "is_even {}", self.is_even)?;
        writeln!(f, "is_thin {}", self.is_thin)?;
        writeln!(f, "max_degree {}", self.max_degree)
    }
}

impl Geometry3 {
    pub fn new(counts: [usize; 3]) -> Self {
        let adj = std::array::from_fn(|a| std::array::from_fn(|_| vec![Vec::new(); counts[a]]));
        Geometry3 {
            counts,
            adj,
            same_type: 0,
        }
    }

    pub fn count(&self, ty: usize) -> usize {
        self.counts[ty]
    }

    fn check(&self, ty: usize, id: usize) -> Result<()> {
        if ty > 2 || id >= self.counts[ty] {
            return Err(Error::InvalidCell(format!("no element {id} of type {ty}")));
        }
        Ok(())
    }

    /// Declares `(ta, a)` and `(tb, b)` incident. Repeats are ignored.
    pub fn add_incidence(&mut self, ta: usize, a: usize, tb: usize, b: usize) -> Result<()> {
        self.check(ta, a)?;
        self.check(tb, b)?;
        if ta == tb {
            if a != b {
                self.same_type += 1;
            }
            return Ok(());
        }
        if !self.adj[ta][tb][a].contains(&(b as u32)) {
            self.adj[ta][tb][a].push(b as u32);
            self.adj[tb][ta][b].push(a as u32);
        }
        Ok(())
    }

    pub fn neighbors(&self, ty: usize, id: usize, other: usize) -> &[u32] {
        &self.adj[ty][other][id]
    }

    pub fn incident(&self, ta: usize, a: usize, tb: usize, b: usize) -> bool {
        if ta == tb {
            return a == b;
        }
        self.adj[ta][tb][a].contains(&(b as u32))
    }

    pub fn validate(&self) -> GeometryReport {
        let is_pregeometry = self.same_type == 0;
        let mut flags = true;
        'outer: for ta in 0..3 {
            for a in 0..self.counts[ta] {
                if (0..3).all(|tb| tb == ta || self.adj[ta][tb][a].is_empty()) {
                    flags = false;
                    break 'outer;
                }
                for tb in ta + 1..3 {
                    let tc = 3 - ta - tb;
                    for &b in &self.adj[ta][tb][a] {
                        let extends = self.adj[ta][tc][a]
                            .iter()
                            .any(|&c| self.incident(tb, b as usize, tc, c as usize));
                        if !extends {
                            flags = false;
                            break 'outer;
                        }
                    }
                }
            }
        }
        let (mut even, mut thin) = (true, true);
        let mut between = vec![0u32; self.counts[0]];
        for z in 0..self.counts[2] {
            for &y in &self.adj[2][1][z] {
                for &x in &self.adj[1][0][y as usize] {
                    between[x as usize] += 1;
                }
            }
            for c in between.iter_mut() {
                even &= *c % 2 == 0;
                thin &= *c == 0 || *c == 2;
                *c = 0;
            }
        }
        let max_degree = self.adj[2][1].iter().map(Vec::len).max().unwrap_or(0);
        GeometryReport {
            is_pregeometry,
            is_geometry: is_pregeometry && flags,
            is_even: even,
            is_thin: thin,
            max_degree,
        }
    }

    /// Matrix of `delta^i`: rows are type `i + 1`, columns type `i`.
    pub fn differential_matrix(&self, i: usize) -> Result<BooleanMatrix> {
        if i > 1 {
            return Err(Error::UnsupportedDimension(i + 1));
        }
        let mut m = BooleanMatrix::zeros(self.counts[i + 1], self.counts[i]);
        for y in 0..self.counts[i + 1] {
            for &x in &self.adj[i + 1][i][y] {
                m.set(y, x as usize, true);
            }
        }
        Ok(m)
    }
}

impl fmt::Display for Geometry3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in 0..3 {
            writeln!(f, "G{t} {}", self.counts[t])?;
        }
        for ta in 0..3 {
            for tb in ta + 1..3 {
                for a in 0..self.counts[ta] {
                    let mut nb = self.adj[ta][tb][a].clone();
                    nb.sort_unstable();
                    for b in nb {
                        writeln!(f, "{ta} {a} {tb} {b}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for Geometry3 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let mut counts = [0; 3];
        for (t, c) in counts.iter_mut().enumerate() {
            let (no, line) = lines
                .next()
                .ok_or_else(|| Error::parse(t + 1, "missing element count header"))?;
            let mut parts = line.split_whitespace();
            if parts.next() != Some(&format!("G{t}")[..]) {
                return Err(Error::parse(no, format!("expected `G{t} <count>`")));
            }
            *c = parts
                .next()
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| Error::parse(no, "bad element count"))?;
        }
        let mut g = Geometry3::new(counts);
        for (no, line) in lines {
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|x| x.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::parse(no, "expected four integers"))?;
            let [ta, a, tb, b] = nums[..] else {
                return Err(Error::parse(no, "expected `type id type id`"));
            };
            g.add_incidence(ta, a, tb, b)
                .map_err(|e| Error::parse(no, e.to_string()))?;
        }
        Ok(g)
    }
}

/// Signs on the elements of one type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometryCochain {
    pub ty: usize,
    pub values: Vec<Sign>,
}

impl GeometryCochain {
    pub fn ones(geom: &Geometry3, ty: usize) -> Self {
        GeometryCochain {
            ty,
            values: vec![Sign::PLUS; geom.count(ty)],
        }
    }

    pub fn is_ones(&self) -> bool {
        self.values.iter().all(|s| s.is_plus())
    }

    fn bits(&self) -> BitVec {
        BitVec::from_fn(self.values.len(), |i| self.values[i].is_minus())
    }
}

/// `(delta f)(y)` is the product of `f(x)` over the elements `x` of type `i` below `y`.
pub fn geom_delta(geom: &Geometry3, f: &GeometryCochain) -> Result<GeometryCochain> {
    let i = f.ty;
    if i > 1 {
        return Err(Error::UnsupportedDimension(i + 1));
    }
    if f.values.len() != geom.count(i) {
        return Err(Error::DimensionMismatch {
            expected: format!("{} values", geom.count(i)),
            got: f.values.len().to_string(),
        });
    }
    let values = (0..geom.count(i + 1))
        .map(|y| {
            Sign::product(
                geom.neighbors(i + 1, y, i)
                    .iter()
                    .map(|&x| f.values[x as usize]),
            )
        })
        .collect();
    Ok(GeometryCochain { ty: i + 1, values })
}

/// Geometry of the linearity test on `V = F_2^m`.
///
/// Type 0: the `m` coordinate functionals. Type 1: nonzero vectors, element
/// `v - 1` for vector `v`. Type 2: triples `{a, b, c}` with `a + b + c = 0`,
/// listed with `a < b < c` in lexicographic order. A functional is below a
/// vector where it evaluates to 1, and below a triple when it is below one of
/// its vectors.
pub fn blr_geometry(m: usize) -> Result<Geometry3> {
    if m < 2 {
        return Err(Error::TooFewVertices {
            what: "linearity-test geometry (dimension of V)",
            n: m,
            min: 2,
        });
    }
    if m > 12 {
        return Err(Error::TooManyVertices {
            what: "linearity-test geometry (dimension of V)",
            n: m,
            max: 12,
        });
    }
    let size = 1usize << m;
    let lines = blr_lines(m);
    let mut g = Geometry3::new([m, size - 1, lines.len()]);
    for v in 1..size {
        for t in 0..m {
            if v >> t & 1 == 1 {
                g.add_incidence(0, t, 1, v - 1)?;
            }
        }
    }
    for (z, line) in lines.iter().enumerate() {
        for &v in line {
            g.add_incidence(1, v - 1, 2, z)?;
            for t in 0..m {
                if v >> t & 1 == 1 {
                    g.add_incidence(0, t, 2, z)?;
                }
            }
        }
    }
    Ok(g)
}

/// The triples `a < b < c` of nonzero vectors with `a ^ b ^ c = 0`.
pub fn blr_lines(m: usize) -> Vec<[usize; 3]> {
    let size = 1usize << m;
    let mut out = Vec::new();
    for a in 1..size {
        for b in a + 1..size {
            let c = a ^ b;
            if c > b {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// `dim H^1` of the linearity-test geometry, by rank computation.
pub fn blr_cohomology(m: usize) -> Result<usize> {
    if !(2..=4).contains(&m) {
        return Err(Error::UnsupportedDimension(m));
    }
    geometry_h1(&blr_geometry(m)?)
}

/// `dim Z^1 - dim B^1` for any geometry.
pub fn geometry_h1(geom: &Geometry3) -> Result<usize> {
    let dim_z = geom.count(1) - geom.differential_matrix(1)?.rank();
    let dim_b = geom.differential_matrix(0)?.rank();
    dim_z.checked_sub(dim_b).ok_or_else(|| {
        Error::Consistency("coboundaries exceed cocycles; geometry is not even".into())
    })
}

/// The `d`-th incidence geometry of the complete complex: cells of dimension
/// `d - 1`, `d` and `d + 1`, incident when one is a face of the other.
pub fn cubical_geometry(n: usize, d: usize) -> Result<Geometry3> {
    if !(1..=2).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let idx: Vec<CellIndex> = (d - 1..=d + 1)
        .map(|k| CellIndex::new(n, k))
        .collect::<Result<_>>()?;
    let mut g = Geometry3::new([idx[0].len(), idx[1].len(), idx[2].len()]);
    let mut t = [0; 8];
    let mut sub = [0; 8];
    for (upper, lower) in [(1usize, 0usize), (2, 1), (2, 0)] {
        let faces = &shape(d - 1 + upper).faces[d - 1 + lower];
        for y in 0..idx[upper].len() {
            idx[upper].labeling_at(y, &mut t);
            for face in faces {
                for (s, &p) in sub.iter_mut().zip(face) {
                    *s = t[p as usize];
                }
                let x = idx[lower].index_of_labeling(&sub[..face.len()]);
                g.add_incidence(lower, x, upper, y)?;
            }
        }
    }
    Ok(g)
}

/// Geometry cochain of type `ty` carrying the values of `f`, in cell-index order.
pub fn from_cochain(f: &Cochain, ty: usize) -> GeometryCochain {
    GeometryCochain {
        ty,
        values: (0..f.len()).map(|i| f.get(i)).collect(),
    }
}

/// Checks that `geom_delta` agrees with the matrix of the same differential.
pub fn delta_matches_matrix(geom: &Geometry3, f: &GeometryCochain) -> Result<bool> {
    let m = geom.differential_matrix(f.ty)?;
    let img = geom_delta(geom, f)?;
    Ok(m.mul_vec(&f.bits()) == img.bits())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::delta;
    use crate::seeded;
    use rand::Rng;

    fn random_cochain<R: Rng>(g: &Geometry3, ty: usize, rng: &mut R) -> GeometryCochain {
        GeometryCochain {
            ty,
            values: (0..g.count(ty))
                .map(|_| Sign::from_bit(rng.random()))
                .collect(),
        }
    }

    #[test]
    fn blr_counts() {
        let g = blr_geometry(2).unwrap();
        assert_eq!((g.count(0), g.count(1), g.count(2)), (2, 3, 1));
        let g = blr_geometry(3).unwrap();
        assert_eq!((g.count(1), g.count(2)), (7, 7));
        assert_eq!(blr_lines(4).len(), 35);
        assert!(blr_geometry(1).is_err());
    }

    #[test]
    fn blr_is_a_thin_geometry() {
        for m in 2..=4 {
            let r = blr_geometry(m).unwrap().validate();
            assert!(
                r.is_pregeometry && r.is_geometry && r.is_even && r.is_thin,
                "{m}: {r:?}"
            );
            assert_eq!(r.max_degree, 3);
        }
    }

    #[test]
    fn blr_first_cohomology_vanishes() {
        for m in 2..=4 {
            assert_eq!(blr_cohomology(m).unwrap(), 0);
        }
        assert!(blr_cohomology(5).is_err());
    }

    #[test]
    fn blr_second_differential_is_sum_on_lines() {
        let g = blr_geometry(3).unwrap();
        let mut rng = seeded(1);
        let f = random_cochain(&g, 1, &mut rng);
        let df = geom_delta(&g, &f).unwrap();
        for (z, [a, b, c]) in blr_lines(3).into_iter().enumerate() {
            assert_eq!(
                df.values[z],
                f.values[a - 1] * f.values[b - 1] * f.values[c - 1]
            );
        }
    }

    #[test]
    fn cubical_geometries_are_thin() {
        for (n, d) in [(4, 1), (6, 1), (8, 2)] {
            let r = cubical_geometry(n, d).unwrap().validate();
            assert!(
                r.is_pregeometry && r.is_geometry && r.is_thin && r.is_even,
                "{n} {d}: {r:?}"
            );
            assert_eq!(r.max_degree, 2 * (d + 1));
        }
    }

    #[test]
    fn cubical_adapter_matches_cochain_differentials() {
        let mut rng = seeded(3);
        for (n, d) in [(5, 1), (8, 1), (8, 2)] {
            let g = cubical_geometry(n, d).unwrap();
            for ty in 0..2 {
                let f = Cochain::random(n, d - 1 + ty, &mut rng).unwrap();
                let via_geom = geom_delta(&g, &from_cochain(&f, ty)).unwrap();
                assert_eq!(via_geom, from_cochain(&delta(&f).unwrap(), ty + 1));
                assert!(delta_matches_matrix(&g, &from_cochain(&f, ty)).unwrap());
            }
        }
    }

    #[test]
    fn even_geometries_compose_to_ones() {
        let mut rng = seeded(4);
        for g in [blr_geometry(3).unwrap(), cubical_geometry(6, 1).unwrap()] {
            for _ in 0..20 {
                let f = random_cochain(&g, 0, &mut rng);
                let ddf = geom_delta(&g, &geom_delta(&g, &f).unwrap()).unwrap();
                assert!(ddf.is_ones());
            }
        }
        let g = blr_geometry(2).unwrap();
        assert!(geom_delta(&g, &GeometryCochain::ones(&g, 0))
            .unwrap()
            .is_ones());
    }

    #[test]
    fn odd_middle_count_is_not_even() {
        // x - y - z with a single middle element
        let mut g = Geometry3::new([1, 1, 1]);
        g.add_incidence(0, 0, 1, 0).unwrap();
        g.add_incidence(1, 0, 2, 0).unwrap();
        g.add_incidence(0, 0, 2, 0).unwrap();
        let r = g.validate();
        assert!(r.is_geometry);
        assert!(!r.is_even && !r.is_thin);
    }

    #[test]
    fn flag_and_pregeometry_failures() {
        let mut g = Geometry3::new([1, 2, 1]);
        g.add_incidence(0, 0, 1, 0).unwrap();
        g.add_incidence(1, 1, 2, 0).unwrap();
        g.add_incidence(0, 0, 2, 0).unwrap();
        // (x, y0) has no type-2 element above both
        assert!(!g.validate().is_geometry);
        g.add_incidence(1, 0, 1, 1).unwrap();
        assert!(!g.validate().is_pregeometry);
        assert!(g.add_incidence(0, 3, 1, 0).is_err());
    }

    #[test]
    fn interchange_round_trip() {
        let g = blr_geometry(3).unwrap();
        let text = g.to_string();
        assert!(text.starts_with("G0 3\nG1 7\nG2 7\n"));
        let back: Geometry3 = text.parse().unwrap();
        assert_eq!(back.to_string(), text);
        assert_eq!(back.validate(), g.validate());
        let err = "G0 1\nG1 1\nG2 1\n0 0 1\n"
            .parse::<Geometry3>()
            .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
        assert!("G0 1\nG2 1\n".parse::<Geometry3>().is_err());
    }
}
