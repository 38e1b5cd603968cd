//! Algebraic identities checked on random inputs at ten vertices.

use cubetest::cochain::{for_each_distinct_tuple, TupleFunction};
use cubetest::detectors::verify_delta1_factorization;
use cubetest::{
    delta, delta_general, delta_prime, delta_triangle, norm_map, planted, sample_tuple, seeded,
    vdelta1, Cochain, Sign, Vertex,
};
use rand::Rng;

const N: usize = 10;
const INPUTS: usize = 100;

#[test]
fn delta_squared_is_trivial() {
    let mut rng = seeded(100);
    for _ in 0..INPUTS {
        let a = Cochain::random(N, 0, &mut rng).unwrap();
        assert!(delta(&delta(&a).unwrap()).unwrap().is_ones());
        let f = Cochain::random(N, 1, &mut rng).unwrap();
        assert!(delta(&delta(&f).unwrap()).unwrap().is_ones());
    }
}

#[test]
fn vertex_to_cube_differentials_agree() {
    let mut rng = seeded(101);
    for _ in 0..INPUTS {
        let a = Cochain::random(N, 0, &mut rng).unwrap();
        let direct = delta_general(&a, 3).unwrap();
        let via_edges = delta_general(&delta(&a).unwrap(), 3).unwrap();
        let via_squares = delta(&delta_general(&a, 2).unwrap()).unwrap();
        assert_eq!(direct, via_edges);
        assert_eq!(direct, via_squares);
    }
}

#[test]
fn triangle_factorization() {
    let mut rng = seeded(103);
    for _ in 0..INPUTS {
        let f = Cochain::random(N, 1, &mut rng).unwrap();
        assert_eq!(verify_delta1_factorization(&f).unwrap(), 5040);
    }
}

/// Cube with top face cycle `top` and bottom face cycle `bottom`, `top[k]` above `bottom[k]`.
fn cube(top: [Vertex; 4], bottom: [Vertex; 4]) -> [Vertex; 8] {
    [
        top[0], top[1], top[3], top[2], bottom[0], bottom[1], bottom[3], bottom[2],
    ]
}

#[test]
fn three_cube_identity() {
    let mut rng = seeded(104);
    for _ in 0..INPUTS {
        let g = Cochain::random(N, 2, &mut rng).unwrap();
        let dg = delta(&g).unwrap();
        let dp = delta_prime(&g).unwrap();
        for _ in 0..20 {
            let t = sample_tuple(N, 8, &mut rng).unwrap();
            let (i, j, k, l) = (t[0], t[1], t[2], t[3]);
            let (i2, j2, k2, l2) = (t[4], t[5], t[6], t[7]);
            let lhs = dp.eval(&[i, j, k, l]) * dp.eval(&[i2, j2, k2, l2]);
            let rhs = dg.at(&cube([i, j, k, l], [i2, j2, k2, l2]))
                * dg.at(&cube([i, k, j, l], [i2, k2, j2, l2]))
                * dg.at(&cube([i, j, l, k], [i2, j2, l2, k2]));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn square_triple_after_directed_differential() {
    let mut rng = seeded(105);
    for _ in 0..INPUTS {
        let f = planted::symmetric_kernel(N, &mut rng).unwrap();
        let g = vdelta1(&f).to_cochain().unwrap();
        let dp = delta_prime(&g).unwrap();
        let nf = norm_map(&f);
        let tri = delta_triangle(&nf).unwrap();
        for _ in 0..50 {
            let t = sample_tuple(N, 4, &mut rng).unwrap();
            assert_eq!(dp.eval(&t), tri.eval(&t[1..]));
        }
    }
}

fn four_square_product(g: &Cochain, t: &[Vertex]) -> Sign {
    let (a, b, i, j, j2, i2) = (t[0], t[1], t[2], t[3], t[4], t[5]);
    g.at(&[a, i, b, j]) * g.at(&[a, j, b, j2]) * g.at(&[a, j2, b, i2]) * g.at(&[a, i2, b, i])
}

#[test]
fn four_square_identity_on_cocycles() {
    let mut rng = seeded(106);
    for k in 0..INPUTS {
        let g = if k % 4 == 3 {
            delta_general(&Cochain::random(N, 0, &mut rng).unwrap(), 2).unwrap()
        } else {
            let theta = Sign::from_bit(rng.random());
            let pi = Sign::from_bit(rng.random());
            planted::z2(N, theta, pi, &mut rng).unwrap()
        };
        if k == 0 {
            for_each_distinct_tuple(N, 6, |t| assert!(four_square_product(&g, t).is_plus()));
        } else {
            for _ in 0..500 {
                let t = sample_tuple(N, 6, &mut rng).unwrap();
                assert!(four_square_product(&g, &t).is_plus());
            }
        }
    }
}

#[test]
fn four_square_identity_fails_off_cocycles() {
    let mut rng = seeded(107);
    let g = Cochain::random(N, 2, &mut rng).unwrap();
    let mut minus = 0;
    for_each_distinct_tuple(N, 6, |t| {
        minus += four_square_product(&g, t).is_minus() as u32
    });
    assert!(minus > 0);
}
