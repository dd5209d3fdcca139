//! Small built-in nef-partitions used by the examples and tests.

use crate::error::Result;
use crate::lattice::ivec;
use crate::nef_partition::{validate_nef_partition, NefPartition};
use crate::polytope::Polytope;

fn poly(pts: &[&[i64]]) -> Result<Polytope> {
    let n = pts[0].len();
    Polytope::from_points(n, &pts.iter().map(|p| ivec(p)).collect::<Vec<_>>())
}

/// `conv{±e_1}` and `conv{±e_2}`: the square as a sum of two segments.
pub fn two_segment() -> Result<NefPartition> {
    validate_nef_partition(vec![poly(&[&[-1, 0], &[1, 0]])?, poly(&[&[0, -1], &[0, 1]])?])
}

/// The square `conv{(±1, ±1)}` as a partition of length one.
pub fn square() -> Result<NefPartition> {
    validate_nef_partition(vec![poly(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]])?])
}

/// `conv{0, e_1, e_2} + conv{0, e_3, -e_1 - e_2 - e_3}` in `Z^3`.
pub fn p3_split() -> Result<NefPartition> {
    validate_nef_partition(vec![
        poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]])?,
        poly(&[&[0, 0, 0], &[0, 0, 1], &[-1, -1, -1]])?,
    ])
}

/// `conv{0, e_1, e_2} + conv{0, e_3, e_4} + conv{0, -e_1 - e_2 - e_3 - e_4}` in `Z^4`.
pub fn p4_three_parts() -> Result<NefPartition> {
    validate_nef_partition(vec![
        poly(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0]])?,
        poly(&[&[0, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]])?,
        poly(&[&[0, 0, 0, 0], &[-1, -1, -1, -1]])?,
    ])
}

pub fn by_name(name: &str) -> Option<Result<NefPartition>> {
    match name {
        "two-segment" => Some(two_segment()),
        "square" => Some(square()),
        "p3-split" => Some(p3_split()),
        "p4-three-parts" => Some(p4_three_parts()),
        _ => None,
    }
}

pub const NAMES: [&str; 4] = ["two-segment", "square", "p3-split", "p4-three-parts"];
