//! Exact rational polytopes in basis coordinates of a lattice.
//!
//! A [`Polytope`] stores its extreme points; the inequality description is
//! computed on first use and cached.

pub mod dd;
mod hull;
mod points;

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

pub use dd::extreme_rays;
pub use hull::{Equation, Facet, HRep, RatPoint};

use crate::error::{Error, Result};
use crate::lattice::{dot, IntVec};

#[derive(Debug)]
pub struct Polytope {
    ambient: usize,
    vertices: Vec<RatPoint>,
    hrep: OnceLock<HRep>,
}

impl Clone for Polytope {
    fn clone(&self) -> Self {
        let hrep = OnceLock::new();
        if let Some(h) = self.hrep.get() {
            let _ = hrep.set(h.clone());
        }
        Polytope { ambient: self.ambient, vertices: self.vertices.clone(), hrep }
    }
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

/// Outcome of a reflexivity test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflexivityCertificate {
    pub is_reflexive: bool,
    pub origin_interior: bool,
    pub lattice_polytope: bool,
    /// Dual vertices when all are integral.
    pub dual_vertices: Vec<IntVec>,
    /// First non-integral dual vertex, if any.
    pub witness: Option<RatPoint>,
}

impl Polytope {
    /// Hull of integer points.
    pub fn from_points(ambient: usize, points: &[IntVec]) -> Result<Self> {
        let pts: Vec<RatPoint> = points.iter().map(|p| RatPoint::integral(p.clone())).collect();
        Self::from_rat_points(ambient, &pts)
    }

    pub fn from_rat_points(ambient: usize, points: &[RatPoint]) -> Result<Self> {
        if points.iter().any(|p| p.dim() != ambient) {
            return Err(Error::Dimension(format!("points must have {ambient} coordinates")));
        }
        let (vertices, hrep) = hull::hull(points)?;
        let cell = OnceLock::new();
        let _ = cell.set(hrep);
        Ok(Polytope { ambient, vertices, hrep: cell })
    }

    /// Polytope `{x : <x, f.normal> >= -f.offset, equations}`.
    pub fn from_hrep(ambient: usize, facets: &[Facet], equations: &[Equation]) -> Result<Self> {
        let vertices = hull::vertices_from_hrep(ambient, facets, equations)?;
        Ok(Polytope { ambient, vertices, hrep: OnceLock::new() })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn vertices(&self) -> &[RatPoint] {
        &self.vertices
    }

    /// Vertices as integer vectors; `None` if some vertex is fractional.
    pub fn integral_vertices(&self) -> Option<Vec<IntVec>> {
        self.vertices.iter().map(|v| v.is_integral().then(|| v.num.clone())).collect()
    }

    pub fn is_lattice_polytope(&self) -> bool {
        self.vertices.iter().all(RatPoint::is_integral)
    }

    pub fn hrep(&self) -> &HRep {
        self.hrep.get_or_init(|| {
            hull::hull(&self.vertices).map(|(_, h)| h).expect("vertices of a valid polytope have a hull")
        })
    }

    pub fn dim(&self) -> usize {
        self.hrep().dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Irredundant facets, full-dimensional polytopes only.
    pub fn facets(&self) -> Result<&[Facet]> {
        let h = self.hrep();
        if h.dim != self.ambient {
            return Err(Error::NotFullDimensional { affine_dim: h.dim, ambient_dim: self.ambient });
        }
        Ok(&h.facets)
    }

    pub fn contains(&self, p: &RatPoint) -> bool {
        self.hrep().contains(p)
    }

    pub fn contains_point(&self, p: &[BigInt]) -> bool {
        self.contains(&RatPoint::integral(p.to_vec()))
    }

    pub fn contains_origin(&self) -> bool {
        self.contains(&RatPoint::integral(vec![BigInt::zero(); self.ambient]))
    }

    pub fn origin_interior(&self) -> bool {
        match self.facets() {
            Ok(fs) => fs.iter().all(|f| f.offset.is_positive()),
            Err(_) => false,
        }
    }

    /// `{y : <x, y> >= -1 for all x}`.
    pub fn dual(&self) -> Result<Polytope> {
        let fs = self.facets()?;
        if !fs.iter().all(|f| f.offset.is_positive()) {
            return Err(Error::OriginNotInterior);
        }
        let mut verts: Vec<RatPoint> = fs.iter().map(|f| RatPoint::new(f.normal.clone(), f.offset.clone())).collect();
        verts.sort_by(|a, b| a.lex_cmp(b));
        Ok(Polytope { ambient: self.ambient, vertices: verts, hrep: OnceLock::new() })
    }

    pub fn reflexivity(&self) -> ReflexivityCertificate {
        let lattice_polytope = self.is_lattice_polytope();
        let origin_interior = self.origin_interior();
        let mut cert = ReflexivityCertificate {
            is_reflexive: false,
            origin_interior,
            lattice_polytope,
            dual_vertices: Vec::new(),
            witness: None,
        };
        if !origin_interior {
            return cert;
        }
        let dual = self.dual().expect("origin is interior");
        match dual.vertices.iter().find(|v| !v.is_integral()) {
            Some(w) => cert.witness = Some(w.clone()),
            None => {
                cert.dual_vertices = dual.vertices.iter().map(|v| v.num.clone()).collect();
                cert.is_reflexive = lattice_polytope;
            }
        }
        cert
    }

    pub fn is_reflexive(&self) -> bool {
        self.reflexivity().is_reflexive
    }

    /// Lattice points, sorted lexicographically.
    pub fn lattice_points(&self) -> Result<Vec<IntVec>> {
        points::enumerate(&self.vertices, self.hrep())
    }

    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        if self.ambient != other.ambient {
            return Err(Error::LatticeMismatch);
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a.add(b));
            }
        }
        Polytope::from_rat_points(self.ambient, &pts)
    }

    pub fn minkowski_sum_all(parts: &[Polytope]) -> Result<Polytope> {
        let mut it = parts.iter();
        let first = it.next().ok_or(Error::Empty)?.clone();
        it.try_fold(first, |acc, p| acc.minkowski_sum(p))
    }

    pub fn translate(&self, t: &[BigInt]) -> Polytope {
        let tp = RatPoint::integral(t.to_vec());
        Polytope { ambient: self.ambient, vertices: self.vertices.iter().map(|v| v.add(&tp)).collect(), hrep: OnceLock::new() }
    }

    /// Minimum of `<x, y>` over the polytope.
    pub fn min_pairing(&self, y: &[BigInt]) -> num_rational::BigRational {
        self.vertices.iter().map(|v| v.pair(y)).min().expect("polytopes are non-empty")
    }

    /// Same vertex set.
    pub fn same_vertices(&self, other: &Polytope) -> bool {
        self == other
    }

    /// Hull of the union.
    pub fn convex_union(parts: &[Polytope]) -> Result<Polytope> {
        let ambient = parts.first().ok_or(Error::Empty)?.ambient;
        let pts: Vec<RatPoint> = parts.iter().flat_map(|p| p.vertices.iter().cloned()).collect();
        Polytope::from_rat_points(ambient, &pts)
    }

    /// Whether every vertex of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &Polytope) -> bool {
        self.vertices.iter().all(|v| other.contains(v))
    }
}

/// Facets of the hull of `vertices`; the hull must be full-dimensional.
pub fn facet_enumeration(ambient: usize, vertices: &[IntVec]) -> Result<Vec<Facet>> {
    let p = Polytope::from_points(ambient, vertices)?;
    Ok(p.facets()?.to_vec())
}

/// Facets of the cone generated by `generators`, as inward normals.
pub fn cone_facets(generators: &[IntVec], dim: usize) -> Result<Vec<IntVec>> {
    let rays = extreme_rays(generators, dim).map_err(|e| match e {
        Error::Unbounded => Error::NotFullDimensional { affine_dim: crate::lattice::rank_of_rows(generators, dim), ambient_dim: dim },
        other => other,
    })?;
    Ok(rays)
}

/// `{x in cone : <x, phi> = t for each (phi, t)}`, where the cone is given by
/// inward facet normals.
pub fn slice_hrep(facet_normals: &[IntVec], functionals: &[(IntVec, BigInt)], dim: usize) -> Result<Polytope> {
    let facets: Vec<Facet> = facet_normals.iter().map(|a| Facet { normal: a.clone(), offset: BigInt::zero() }).collect();
    let eqs: Vec<Equation> = functionals.iter().map(|(phi, t)| Equation { normal: phi.clone(), offset: -t }).collect();
    Polytope::from_hrep(dim, &facets, &eqs)
}

/// `{x in cone(generators) : <x, phi> = t for each (phi, t)}`.
pub fn slice(generators: &[IntVec], functionals: &[(IntVec, BigInt)], dim: usize) -> Result<Polytope> {
    let normals = cone_facets(generators, dim)?;
    slice_hrep(&normals, functionals, dim)
}

/// Whether `x` lies in the cone with the given inward facet normals.
pub fn in_cone(facet_normals: &[IntVec], x: &[BigInt]) -> bool {
    facet_normals.iter().all(|a| !dot(a, x).is_negative())
}

#[cfg(test)]
mod tests;
