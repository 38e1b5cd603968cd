//! Cohomological property testing on complete cubical complexes over {+1, -1}.
//!
//! The crate is organised bottom-up:
//!
//! * [`complex`]: canonical cells, dense cell indexing, uniform sampling.
//! * [`cochain`]: cochains, directed cochains, differentials, the order
//!   function and the `[-1]` cochain, norms and the text file format.
//! * [`detectors`]: the detecting maps on 3-, 4- and 5-tuples, majority
//!   estimation and vertex selection.
//! * [`testers`]: one-sided testers and the constructive decoders with their
//!   certified error bounds.
//! * [`lab`]: exact linear algebra over the two-element field: ranks,
//!   cohomology dimensions, expansion constants.
//! * [`planted`]: random instances with known structure.
//! * [`geometry`]: three-type incidence geometries, including the linearity
//!   test geometry and the cubical adapters.

pub mod bits;
pub mod cochain;
pub mod complex;
pub mod detectors;
pub mod error;
pub mod geometry;
pub mod lab;
pub mod planted;
pub mod sign;
pub mod testers;

pub use bits::BitVec;
pub use cochain::{
    bracket_cochain, coset_norm, delta, delta_general, eta_head, eta_tail, norm_map,
    order_function, vdelta1, Cochain, CochainFile, DirectedCochain, Estimate, NormValue,
    TupleFunction, VertexOrder,
};
pub use complex::{
    canonical_cube, canonical_square, enumerate_cells, sample_tuple, walls, Cell, CellIndex, Cube3,
    Edge, Square, Vertex,
};
pub use detectors::{
    delta_double_prime, delta_prime, delta_triangle, majority_constant, select_vertex, Condition,
    DetectorReport, VertexChoice,
};
pub use error::{Error, Result};
pub use geometry::{
    blr_geometry, cubical_geometry, geom_delta, Geometry3, GeometryCochain, GeometryReport,
};
pub use lab::{
    cohomology, differential_matrix, expansion_exact, expansion_probe, membership_b2vec,
    verify_z2_structure, BooleanMatrix, CohomologyReport, ExpansionReport, Z2Structure,
};
pub use sign::Sign;
pub use testers::{
    classify_exact, decode_b1, decode_z2, test_b1, test_z2, Budget, DecodeReport, TestVerdict,
};

/// Seeded generator used throughout; ChaCha keeps streams identical across platforms.
pub type SeededRng = rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    use rand::SeedableRng;
    SeededRng::seed_from_u64(seed)
}

/// Ratio type used for exact norms.
pub type Ratio = num_rational::Ratio<u64>;
