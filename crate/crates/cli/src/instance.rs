//! Instance files: a lattice, one of polytope / nef-partition / cone, and
//! optional coefficients. Integers are JSON integers or decimal strings;
//! coefficient values may also be `"num/den"` strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Map, Value};

use toric_bridge::field::parse_rational;
use toric_bridge::gorenstein_cone::{build_cone, product_projective, GorensteinConePair};
use toric_bridge::lattice::{DualPairing, IntMatrix, IntVec, LatticeEmbedding};
use toric_bridge::nef_partition::{validate_nef_partition, NefPartition};
use toric_bridge::polytope::Polytope;
use toric_bridge::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeKind {
    Full,
    /// `M = {x : rows x = 0}`.
    Kernel,
    /// `M = Z^n / span(rows)`.
    Quotient,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSpec {
    pub ambient_rank: usize,
    pub kind: LatticeKind,
    pub rows: Vec<IntVec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSpec {
    pub generators: Vec<IntVec>,
    pub deg: Option<IntVec>,
    pub deg_dual: Option<IntVec>,
    /// Rays of the dual cone in the order decompositions are enumerated.
    pub dual_generators: Option<Vec<IntVec>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Body {
    Polytope(Vec<IntVec>),
    NefPartition(Vec<Vec<IntVec>>),
    Cone(ConeSpec),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Prime(u64),
    Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientSpec {
    pub field: FieldSpec,
    pub seed: Option<u64>,
    /// Explicit values keyed by ambient coordinates of slice points.
    pub values: Vec<(IntVec, BigRational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub lattice: LatticeSpec,
    pub body: Body,
    pub coefficients: Option<CoefficientSpec>,
}

fn bad(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Input(format!("{path}: {msg}"))
}

pub fn int_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(x) => json!(x),
        None => json!(n.to_string()),
    }
}

pub fn vec_value(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int_value).collect())
}

pub fn rows_value(rows: &[IntVec]) -> Value {
    Value::Array(rows.iter().map(|r| vec_value(r)).collect())
}

pub fn rational_value(q: &BigRational) -> Value {
    if q.is_integer() {
        int_value(q.numer())
    } else {
        json!(format!("{}/{}", q.numer(), q.denom()))
    }
}

fn parse_int(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(bad(path, "floating point numbers are not accepted"))
            }
        }
        Value::String(s) => {
            let q = parse_rational(s).ok_or_else(|| bad(path, format!("cannot parse {s:?} as a number")))?;
            if q.is_integer() {
                Ok(q.to_integer())
            } else {
                Err(bad(path, format!("{s:?} is not an integer")))
            }
        }
        _ => Err(bad(path, "expected an integer")),
    }
}

fn parse_rat(v: &Value, path: &str) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s).ok_or_else(|| bad(path, format!("cannot parse {s:?} as a number"))),
        _ => Ok(BigRational::from_integer(parse_int(v, path)?)),
    }
}

fn parse_u64(v: &Value, path: &str) -> Result<u64> {
    parse_int(v, path)?.to_u64().ok_or_else(|| bad(path, "expected a nonnegative 64-bit integer"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(path, "expected an array"))
}

fn parse_vec(v: &Value, path: &str, len: Option<usize>) -> Result<IntVec> {
    let a = array(v, path)?;
    if let Some(n) = len {
        if a.len() != n {
            return Err(bad(path, format!("expected {n} coordinates, found {}", a.len())));
        }
    }
    a.iter().enumerate().map(|(i, x)| parse_int(x, &format!("{path}[{i}]"))).collect()
}

fn parse_rows(v: &Value, path: &str, len: Option<usize>) -> Result<Vec<IntVec>> {
    array(v, path)?.iter().enumerate().map(|(i, r)| parse_vec(r, &format!("{path}[{i}]"), len)).collect()
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| bad(path, "expected an object"))
}

fn check_keys(obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(bad(path, format!("unknown field {k:?}"))),
        None => Ok(()),
    }
}

/// Length of the first vector found in the body, used when no lattice is given.
fn first_vector_len(obj: &Map<String, Value>) -> Option<usize> {
    let first = |v: &Value| v.as_array().and_then(|a| a.first()).cloned();
    let v = if let Some(p) = obj.get("polytope") {
        first(p)
    } else if let Some(np) = obj.get("nef_partition") {
        first(np).and_then(|part| first(&part))
    } else {
        obj.get("cone").and_then(|c| c.get("generators")).and_then(first)
    };
    v.and_then(|x| x.as_array().map(Vec::len))
}

impl Instance {
    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| Error::Input(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = object(v, "instance")?;
        check_keys(obj, "instance", &["lattice", "polytope", "nef_partition", "cone", "coefficients"])?;
        let lattice = match obj.get("lattice") {
            Some(l) => {
                let lo = object(l, "lattice")?;
                check_keys(lo, "lattice", &["ambient_rank", "kind", "equations", "relations"])?;
                let rank_v = lo.get("ambient_rank").ok_or_else(|| bad("lattice", "missing ambient_rank"))?;
                let ambient_rank = parse_u64(rank_v, "lattice.ambient_rank")? as usize;
                let kind = match lo.get("kind").and_then(Value::as_str).unwrap_or("full") {
                    "full" => LatticeKind::Full,
                    "kernel" => LatticeKind::Kernel,
                    "quotient" => LatticeKind::Quotient,
                    other => return Err(bad("lattice.kind", format!("unknown kind {other:?}"))),
                };
                let rows = match (&kind, lo.get("equations"), lo.get("relations")) {
                    (LatticeKind::Full, None, None) => Vec::new(),
                    (LatticeKind::Kernel, Some(r), None) => parse_rows(r, "lattice.equations", Some(ambient_rank))?,
                    (LatticeKind::Quotient, None, Some(r)) => parse_rows(r, "lattice.relations", Some(ambient_rank))?,
                    _ => {
                        return Err(bad(
                            "lattice",
                            "kernel lattices take \"equations\", quotient lattices take \"relations\", full lattices neither",
                        ))
                    }
                };
                LatticeSpec { ambient_rank, kind, rows }
            }
            None => {
                let n = first_vector_len(obj).ok_or_else(|| bad("instance", "cannot infer the ambient rank"))?;
                LatticeSpec { ambient_rank: n, kind: LatticeKind::Full, rows: Vec::new() }
            }
        };
        let n = Some(lattice.ambient_rank);
        let bodies = ["polytope", "nef_partition", "cone"].iter().filter(|k| obj.contains_key(**k)).count();
        if bodies != 1 {
            return Err(bad("instance", "exactly one of polytope, nef_partition or cone is required"));
        }
        let body = if let Some(p) = obj.get("polytope") {
            Body::Polytope(parse_rows(p, "polytope", n)?)
        } else if let Some(np) = obj.get("nef_partition") {
            let parts = array(np, "nef_partition")?
                .iter()
                .enumerate()
                .map(|(i, part)| parse_rows(part, &format!("nef_partition[{i}]"), n))
                .collect::<Result<Vec<_>>>()?;
            Body::NefPartition(parts)
        } else {
            let c = object(&obj["cone"], "cone")?;
            check_keys(c, "cone", &["generators", "deg", "deg_dual", "dual_generators"])?;
            let generators =
                parse_rows(c.get("generators").ok_or_else(|| bad("cone", "missing generators"))?, "cone.generators", n)?;
            Body::Cone(ConeSpec {
                generators,
                deg: c.get("deg").map(|d| parse_vec(d, "cone.deg", n)).transpose()?,
                deg_dual: c.get("deg_dual").map(|d| parse_vec(d, "cone.deg_dual", n)).transpose()?,
                dual_generators: c.get("dual_generators").map(|d| parse_rows(d, "cone.dual_generators", n)).transpose()?,
            })
        };
        let coefficients = obj.get("coefficients").map(parse_coefficients).transpose()?;
        Ok(Instance { lattice, body, coefficients })
    }

    pub fn to_json(&self) -> Value {
        let mut lattice = Map::new();
        lattice.insert("ambient_rank".into(), json!(self.lattice.ambient_rank));
        let kind = match self.lattice.kind {
            LatticeKind::Full => "full",
            LatticeKind::Kernel => "kernel",
            LatticeKind::Quotient => "quotient",
        };
        lattice.insert("kind".into(), json!(kind));
        match self.lattice.kind {
            LatticeKind::Full => {}
            LatticeKind::Kernel => {
                lattice.insert("equations".into(), rows_value(&self.lattice.rows));
            }
            LatticeKind::Quotient => {
                lattice.insert("relations".into(), rows_value(&self.lattice.rows));
            }
        }
        let mut out = Map::new();
        out.insert("lattice".into(), Value::Object(lattice));
        match &self.body {
            Body::Polytope(v) => {
                out.insert("polytope".into(), rows_value(v));
            }
            Body::NefPartition(parts) => {
                out.insert("nef_partition".into(), Value::Array(parts.iter().map(|p| rows_value(p)).collect()));
            }
            Body::Cone(c) => {
                let mut m = Map::new();
                m.insert("generators".into(), rows_value(&c.generators));
                if let Some(d) = &c.deg {
                    m.insert("deg".into(), vec_value(d));
                }
                if let Some(d) = &c.deg_dual {
                    m.insert("deg_dual".into(), vec_value(d));
                }
                if let Some(d) = &c.dual_generators {
                    m.insert("dual_generators".into(), rows_value(d));
                }
                out.insert("cone".into(), Value::Object(m));
            }
        }
        if let Some(c) = &self.coefficients {
            let mut m = Map::new();
            match c.field {
                FieldSpec::Prime(p) => {
                    m.insert("field".into(), json!("prime"));
                    m.insert("prime".into(), json!(p));
                }
                FieldSpec::Rational => {
                    m.insert("field".into(), json!("rational"));
                }
            }
            if let Some(s) = c.seed {
                m.insert("seed".into(), json!(s));
            }
            if !c.values.is_empty() {
                let vals = c
                    .values
                    .iter()
                    .map(|(p, q)| json!({"point": vec_value(p), "value": rational_value(q)}))
                    .collect();
                m.insert("values".into(), Value::Array(vals));
            }
            out.insert("coefficients".into(), Value::Object(m));
        }
        Value::Object(out)
    }

    /// `M` and its dual `N`.
    pub fn lattices(&self) -> Result<(LatticeEmbedding, LatticeEmbedding)> {
        let n = self.lattice.ambient_rank;
        let rows = IntMatrix::from_rows(&self.lattice.rows, n);
        match self.lattice.kind {
            LatticeKind::Full => Ok((LatticeEmbedding::full(n), LatticeEmbedding::full(n))),
            LatticeKind::Kernel => {
                let p = DualPairing::kernel_and_quotient(rows)?;
                Ok((p.primal, p.dual))
            }
            LatticeKind::Quotient => {
                let p = DualPairing::kernel_and_quotient(rows)?;
                let p = DualPairing::new(p.dual, p.primal)?;
                Ok((p.primal, p.dual))
            }
        }
    }

    fn m_coords(&self, m: &LatticeEmbedding, pts: &[IntVec], path: &str) -> Result<Vec<IntVec>> {
        pts.iter()
            .enumerate()
            .map(|(i, p)| m.to_coords(p).ok_or_else(|| bad(&format!("{path}[{i}]"), "point is not in the lattice")))
            .collect()
    }

    pub fn polytope(&self) -> Result<Polytope> {
        let Body::Polytope(pts) = &self.body else {
            return Err(Error::Input("instance does not contain a polytope".into()));
        };
        let (m, _) = self.lattices()?;
        Polytope::from_points(m.rank(), &self.m_coords(&m, pts, "polytope")?)
    }

    pub fn nef_partition(&self) -> Result<NefPartition> {
        let Body::NefPartition(parts) = &self.body else {
            return Err(Error::Input("instance does not contain a nef-partition".into()));
        };
        let (m, _) = self.lattices()?;
        let polys = parts
            .iter()
            .enumerate()
            .map(|(i, p)| Polytope::from_points(m.rank(), &self.m_coords(&m, p, &format!("nef_partition[{i}]"))?))
            .collect::<Result<Vec<_>>>()?;
        validate_nef_partition(polys)
    }

    pub fn cone_pair(&self) -> Result<GorensteinConePair> {
        match &self.body {
            Body::NefPartition(_) => build_cone(&self.nef_partition()?),
            Body::Cone(c) => {
                let (m, n) = self.lattices()?;
                let gens = self.m_coords(&m, &c.generators, "cone.generators")?;
                let deg = c
                    .deg
                    .as_ref()
                    .map(|d| m.to_coords(d).ok_or_else(|| bad("cone.deg", "not in the lattice")))
                    .transpose()?;
                let to_n = |v: &IntVec, path: &str| n.to_coords(v).ok_or_else(|| bad(path, "not in the dual lattice"));
                let deg_dual = c.deg_dual.as_ref().map(|d| to_n(d, "cone.deg_dual")).transpose()?;
                let pair = GorensteinConePair::from_generators(m.clone(), n.clone(), gens, deg, deg_dual)?;
                match &c.dual_generators {
                    Some(rays) => {
                        let rays = rays
                            .iter()
                            .enumerate()
                            .map(|(i, r)| to_n(r, &format!("cone.dual_generators[{i}]")))
                            .collect::<Result<Vec<_>>>()?;
                        pair.with_dual_order(rays)
                    }
                    None => Ok(pair),
                }
            }
            Body::Polytope(_) => Err(Error::Input("a polytope instance does not define a cone".into())),
        }
    }
}

fn parse_coefficients(v: &Value) -> Result<CoefficientSpec> {
    let o = object(v, "coefficients")?;
    check_keys(o, "coefficients", &["field", "prime", "seed", "values"])?;
    let field = match o.get("field").and_then(Value::as_str).unwrap_or("prime") {
        "prime" => FieldSpec::Prime(match o.get("prime") {
            Some(p) => parse_u64(p, "coefficients.prime")?,
            None => crate::DEFAULT_PRIME,
        }),
        "rational" => FieldSpec::Rational,
        other => return Err(bad("coefficients.field", format!("unknown field {other:?}"))),
    };
    let seed = o.get("seed").map(|s| parse_u64(s, "coefficients.seed")).transpose()?;
    let values = match o.get("values") {
        Some(vals) => array(vals, "coefficients.values")?
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let path = format!("coefficients.values[{i}]");
                let eo = object(e, &path)?;
                let point = parse_vec(eo.get("point").ok_or_else(|| bad(&path, "missing point"))?, &format!("{path}.point"), None)?;
                let value = parse_rat(eo.get("value").ok_or_else(|| bad(&path, "missing value"))?, &format!("{path}.value"))?;
                Ok((point, value))
            })
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    Ok(CoefficientSpec { field, seed, values })
}

/// The `product-projective` instance: `Z_{>=0}^{nt}` cut by equal block sums.
pub fn product_projective_instance(n: usize, t: usize) -> Result<Instance> {
    if n < 2 || t < 2 {
        return Err(Error::Input("product-projective needs n >= 2 and t >= 2".into()));
    }
    let pair = product_projective(n, t)?;
    let amb = n * t;
    let rows: Vec<IntVec> = (1..t)
        .map(|j| {
            (0..amb)
                .map(|c| {
                    let b = c / n;
                    BigInt::from(if b == 0 { 1 } else if b == j { -1 } else { 0 })
                })
                .collect()
        })
        .collect();
    let amb_m = |x: &IntVec| pair.lattice_bar_m.from_coords(x);
    let unit = |c: usize| -> IntVec { (0..amb).map(|j| if j == c { BigInt::one() } else { BigInt::from(0) }).collect() };
    Ok(Instance {
        lattice: LatticeSpec { ambient_rank: amb, kind: LatticeKind::Kernel, rows },
        body: Body::Cone(ConeSpec {
            generators: pair.k_generators.iter().map(amb_m).collect(),
            deg: Some(amb_m(&pair.deg)),
            deg_dual: Some((0..amb).map(|c| BigInt::from((c < n) as i64)).collect()),
            dual_generators: Some((0..amb).map(unit).collect()),
        }),
        coefficients: None,
    })
}

/// A built-in nef-partition as an instance file.
pub fn nef_instance(np: &NefPartition) -> Result<Instance> {
    let parts = np
        .parts()
        .iter()
        .map(|p| p.integral_vertices().ok_or_else(|| Error::Input("non-integral vertex".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Instance {
        lattice: LatticeSpec { ambient_rank: np.dim(), kind: LatticeKind::Full, rows: Vec::new() },
        body: Body::NefPartition(parts),
        coefficients: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use toric_bridge::lattice::ivec;

    #[test]
    fn ambient_rank_is_inferred() {
        let inst = Instance::parse(r#"{"polytope":[[1,0],[0,1],[-1,-1]]}"#).unwrap();
        assert_eq!(inst.lattice.ambient_rank, 2);
        assert_eq!(inst.lattice.kind, LatticeKind::Full);
        assert!(inst.polytope().unwrap().is_reflexive());
    }

    #[test]
    fn numbers_may_be_strings_but_not_floats() {
        let inst = Instance::parse(r#"{"polytope":[["1",0],[0,"2/2"],[-1,-1]]}"#).unwrap();
        assert_eq!(inst.body, Body::Polytope(vec![ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[-1, -1])]));
        let err = Instance::parse(r#"{"polytope":[[1.0,0]]}"#).unwrap_err().to_string();
        assert!(err.contains("polytope[0][0]"), "{err}");
        assert!(Instance::parse(r#"{"polytope":[["1/2",0]]}"#).is_err());
    }

    #[test]
    fn structural_errors_name_the_location() {
        let cases = [
            (r#"{"polytope":[[1,0]],"cone":{"generators":[[1,0]]}}"#, "exactly one"),
            (r#"{"polytope":[[1,0]],"colour":1}"#, "colour"),
            (r#"{"lattice":{"ambient_rank":2},"polytope":[[1,0,0]]}"#, "polytope[0]"),
            (r#"{"lattice":{"ambient_rank":2,"kind":"kernel"},"polytope":[[1,0]]}"#, "equations"),
            (r#"{"polytope":[[1,0]],"coefficients":{"field":"real"}}"#, "coefficients.field"),
            ("{\n  \"polytope\": [\n", "line 3"),
        ];
        for (text, needle) in cases {
            let err = Instance::parse(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{text}: {err}");
        }
    }

    #[test]
    fn to_json_round_trips() {
        let text = r#"{"lattice":{"ambient_rank":3,"kind":"kernel","equations":[[1,1,1]]},
            "cone":{"generators":[[1,-1,0],[0,1,-1]],"deg":[1,0,-1]},
            "coefficients":{"field":"prime","prime":101,"seed":3,"values":[{"point":[1,-1,0],"value":"2/3"}]}}"#;
        let inst = Instance::parse(text).unwrap();
        assert_eq!(Instance::from_json(&inst.to_json()).unwrap(), inst);
        let pp = product_projective_instance(3, 3).unwrap();
        assert_eq!(Instance::from_json(&pp.to_json()).unwrap(), pp);
    }

    #[test]
    fn product_projective_instance_rebuilds_the_cone() {
        let inst = product_projective_instance(3, 2).unwrap();
        let pair = inst.cone_pair().unwrap();
        let direct = product_projective(3, 2).unwrap();
        assert_eq!(pair.dim(), direct.dim());
        assert_eq!(pair.index, direct.index);
        assert_eq!(pair.k_generators.len(), direct.k_generators.len());
        assert_eq!(pair.k_dual_generators, direct.k_dual_generators);
        assert!(product_projective_instance(1, 3).is_err());
    }

    #[test]
    fn quotient_lattices_swap_roles() {
        let text = r#"{"lattice":{"ambient_rank":3,"kind":"quotient","relations":[[1,1,1]]},
            "polytope":[[1,0,0],[0,1,0],[0,0,1]]}"#;
        let inst = Instance::parse(text).unwrap();
        let (m, n) = inst.lattices().unwrap();
        assert_eq!((m.rank(), n.rank()), (2, 2));
        assert!(m.is_quotient());
        // e1, e2, e3 sum to zero in the quotient: the triangle of P^2
        assert!(inst.polytope().unwrap().is_reflexive());
    }

    #[test]
    fn integers_beyond_i64_render_as_strings() {
        let huge: BigInt = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(int_value(&huge), json!("123456789012345678901234567890"));
        assert_eq!(int_value(&BigInt::from(-7)), json!(-7));
        assert_eq!(rational_value(&BigRational::new(BigInt::from(6), BigInt::from(4))), json!("3/2"));
    }
}
