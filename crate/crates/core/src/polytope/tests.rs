use super::*;
use crate::lattice::ivec;
use num_traits::{One, ToPrimitive};

fn poly(pts: &[&[i64]]) -> Polytope {
    let n = pts[0].len();
    Polytope::from_points(n, &pts.iter().map(|p| ivec(p)).collect::<Vec<_>>()).unwrap()
}

fn verts(p: &Polytope) -> Vec<Vec<i64>> {
    p.integral_vertices().unwrap().iter().map(|v| v.iter().map(|x| x.to_i64().unwrap()).collect()).collect()
}

fn facets_i64(p: &Polytope) -> Vec<(Vec<i64>, i64)> {
    p.facets()
        .unwrap()
        .iter()
        .map(|f| (f.normal.iter().map(|x| x.to_i64().unwrap()).collect(), f.offset.to_i64().unwrap()))
        .collect()
}

fn square() -> Polytope {
    poly(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]])
}

fn triangle() -> Polytope {
    poly(&[&[-1, -1], &[1, 0], &[0, 1]])
}

/// Supporting hyperplanes through pairs of vertices in the plane.
fn brute_force_facets_2d(vs: &[Vec<i64>]) -> Vec<(Vec<i64>, i64)> {
    let mut out = Vec::new();
    for i in 0..vs.len() {
        for j in 0..vs.len() {
            if i == j {
                continue;
            }
            let (a, b) = (&vs[i], &vs[j]);
            let mut n = vec![-(b[1] - a[1]), b[0] - a[0]];
            let g = num_integer::gcd(n[0], n[1]);
            n = vec![n[0] / g, n[1] / g];
            let off = -(n[0] * a[0] + n[1] * a[1]);
            if vs.iter().all(|v| n[0] * v[0] + n[1] * v[1] + off >= 0) && !out.contains(&(n.clone(), off)) {
                out.push((n, off));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn segment_facets() {
    let s = poly(&[&[-1], &[1]]);
    assert_eq!(facets_i64(&s), vec![(vec![-1], 1), (vec![1], 1)]);
}

#[test]
fn square_facets() {
    let f = facets_i64(&square());
    assert_eq!(f, vec![(vec![-1, 0], 1), (vec![0, -1], 1), (vec![0, 1], 1), (vec![1, 0], 1)]);
}

#[test]
fn triangle_facets_match_oracle() {
    let t = triangle();
    let mut got = facets_i64(&t);
    got.sort();
    assert_eq!(got, brute_force_facets_2d(&verts(&t)));
    assert_eq!(got.len(), 3);
}

#[test]
fn lower_dimensional_facets_error() {
    let seg = poly(&[&[0, 0], &[2, 2]]);
    assert!(matches!(seg.facets(), Err(Error::NotFullDimensional { affine_dim: 1, ambient_dim: 2 })));
}

#[test]
fn redundant_points_are_dropped() {
    let p = poly(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1], &[0, 0], &[1, 0]]);
    assert_eq!(p.vertices().len(), 4);
}

#[test]
fn duals() {
    let s = poly(&[&[-1], &[1]]);
    assert_eq!(verts(&s.dual().unwrap()), vec![vec![-1], vec![1]]);
    assert_eq!(verts(&square().dual().unwrap()), vec![vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]]);
    assert_eq!(verts(&triangle().dual().unwrap()), vec![vec![-1, -1], vec![-1, 2], vec![2, -1]]);
    assert_eq!(triangle().dual().unwrap().dual().unwrap(), triangle());
}

#[test]
fn dual_requires_interior_origin() {
    let p = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
    assert!(matches!(p.dual(), Err(Error::OriginNotInterior)));
}

#[test]
fn reflexivity() {
    assert!(square().is_reflexive());
    assert!(triangle().is_reflexive());
    let c = poly(&[&[2, 0], &[-2, 0], &[0, 1], &[0, -1]]);
    let cert = c.reflexivity();
    assert!(!cert.is_reflexive && cert.origin_interior);
    let w = cert.witness.unwrap();
    assert_eq!(w.den, BigInt::from(2));
}

#[test]
fn order_reversal() {
    let big = square();
    let small = poly(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
    assert!(small.is_subset_of(&big));
    assert!(big.dual().unwrap().is_subset_of(&small.dual().unwrap()));
}

#[test]
fn lattice_points_examples() {
    assert_eq!(square().lattice_points().unwrap().len(), 9);
    let seg = poly(&[&[0, 0], &[2, 2]]);
    assert_eq!(seg.lattice_points().unwrap(), vec![ivec(&[0, 0]), ivec(&[1, 1]), ivec(&[2, 2])]);
    assert_eq!(poly(&[&[0, 0], &[1, 0], &[0, 1]]).lattice_points().unwrap().len(), 3);
    assert_eq!(poly(&[&[3, -2, 5]]).lattice_points().unwrap(), vec![ivec(&[3, -2, 5])]);
}

fn brute_points(p: &Polytope) -> Vec<IntVec> {
    let n = p.ambient_dim();
    let vs = p.vertices();
    let lo: Vec<i64> = (0..n).map(|j| vs.iter().map(|v| v.coord(j).floor().to_integer().to_i64().unwrap()).min().unwrap()).collect();
    let hi: Vec<i64> = (0..n).map(|j| vs.iter().map(|v| v.coord(j).ceil().to_integer().to_i64().unwrap()).max().unwrap()).collect();
    let mut out = Vec::new();
    let mut cur = lo.clone();
    loop {
        let v = ivec(&cur);
        if p.contains_point(&v) {
            out.push(v);
        }
        let mut j = 0;
        loop {
            if j == n {
                return out;
            }
            cur[j] += 1;
            if cur[j] <= hi[j] {
                break;
            }
            cur[j] = lo[j];
            j += 1;
        }
    }
}

#[test]
fn lattice_points_match_bounding_box() {
    let cases = vec![
        triangle(),
        triangle().dual().unwrap(),
        poly(&[&[0, 0, 0], &[2, 1, 0], &[1, 3, 1], &[0, 1, 2]]),
        poly(&[&[1, 0, 1], &[3, 2, 1], &[0, 5, 1]]),
        poly(&[&[0, 0, 0, 0], &[2, 1, 1, 0], &[1, 3, 0, 2], &[0, 1, 2, 1], &[1, 1, 1, 1]]),
        poly(&[&[0, 0, 0], &[2, 2, 2], &[4, 0, 2]]),
    ];
    for p in cases {
        let mut b = brute_points(&p);
        b.sort();
        assert_eq!(p.lattice_points().unwrap(), b);
    }
}

#[test]
fn lattice_points_of_fractional_polytope() {
    let p = Polytope::from_rat_points(
        2,
        &[RatPoint::new(ivec(&[1, 1]), BigInt::from(2)), RatPoint::new(ivec(&[5, 1]), BigInt::from(2)), RatPoint::new(ivec(&[1, 7]), BigInt::from(2))],
    )
    .unwrap();
    let mut b = brute_points(&p);
    b.sort();
    assert_eq!(p.lattice_points().unwrap(), b);
}

#[test]
fn minkowski() {
    let a = poly(&[&[-1, 0], &[1, 0]]);
    let b = poly(&[&[0, -1], &[0, 1]]);
    assert_eq!(a.minkowski_sum(&b).unwrap(), square());
    let z = poly(&[&[0, 0]]);
    assert_eq!(square().minkowski_sum(&z).unwrap(), square());
    let simplex = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
    let seg = poly(&[&[0, 0], &[1, 0]]);
    let sum = simplex.minkowski_sum(&seg).unwrap();
    for x in -1..4 {
        for y in -1..4 {
            let expect = y >= 0 && x >= 0 && y <= 1 && x + y <= 2;
            assert_eq!(sum.contains_point(&ivec(&[x, y])), expect, "{x} {y}");
        }
    }
    assert!(matches!(square().minkowski_sum(&poly(&[&[0]])), Err(Error::LatticeMismatch)));
}

#[test]
fn slices() {
    let q = slice(&[ivec(&[1, 0]), ivec(&[0, 1])], &[(ivec(&[1, 1]), BigInt::one())], 2).unwrap();
    assert_eq!(verts(&q), vec![vec![0, 1], vec![1, 0]]);
    assert!(matches!(slice(&[ivec(&[1, 0]), ivec(&[0, 1])], &[(ivec(&[1, 0]), BigInt::one())], 2), Err(Error::Unbounded)));
}

#[test]
fn from_hrep_roundtrip() {
    let t = triangle();
    let h = Polytope::from_hrep(2, t.facets().unwrap(), &[]).unwrap();
    assert_eq!(h, t);
}
