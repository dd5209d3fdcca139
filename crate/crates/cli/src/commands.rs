use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use toric_bridge::double_mirror::{
    build_bridge, degree_one_points, enumerate_decompositions, BridgeData, CoefficientAssignment, Decomposition,
};
use toric_bridge::field::{Field, PrimeField, Rationals};
use toric_bridge::gorenstein_cone::{
    cone_to_nef_partition, polar_sum_check, verify_reflexive_gorenstein, ConeOrigin, GorensteinConePair,
};
use toric_bridge::laurent::LaurentPoly;
use toric_bridge::nef_partition::{check_duality, dual_nef_partition};
use toric_bridge::polytope::{Polytope, RatPoint};
use toric_bridge::verify::birationality_evidence;
use toric_bridge::{Error, Result};

use crate::instance::{int_value, rows_value, vec_value, Body, FieldSpec, Instance};
use crate::DEFAULT_PRIME;

/// Flags shared by the pipeline commands.
#[derive(Clone, Debug, Default)]
pub struct Options {
    /// 1-based decomposition indices.
    pub pair: Option<(usize, usize)>,
    pub samples: usize,
    pub prime: Option<u64>,
    pub seed: Option<u64>,
}

/// A command result: the payload, hypothesis warnings, and an invariant
/// failure detected after the payload was assembled.
#[derive(Debug)]
pub struct Outcome {
    pub result: Value,
    pub warnings: Vec<String>,
    pub failure: Option<Error>,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome { result, warnings: Vec::new(), failure: None }
    }
}

fn rat_value(p: &RatPoint) -> Value {
    if p.is_integral() {
        vec_value(&p.num)
    } else {
        Value::Array(
            p.num
                .iter()
                .map(|x| {
                    let q = num_rational::BigRational::new(x.clone(), p.den.clone());
                    crate::instance::rational_value(&q)
                })
                .collect(),
        )
    }
}

fn vertices_value(p: &Polytope) -> Value {
    Value::Array(p.vertices().iter().map(rat_value).collect())
}

fn poly_value<F: Field>(p: &LaurentPoly<F>) -> Value {
    Value::Array(p.render_terms().into_iter().map(|(e, c)| json!([e, c])).collect())
}

pub fn dualize(inst: &Instance) -> Result<Outcome> {
    let p = inst.polytope()?;
    if !p.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let cert = p.reflexivity();
    let dual = p.dual()?;
    Ok(Outcome::ok(json!({
        "ambient_dim": p.ambient_dim(),
        "vertices": vertices_value(&p),
        "dual_vertices": vertices_value(&dual),
        "reflexive": cert.is_reflexive,
        "lattice_polytope": cert.lattice_polytope,
        "origin_interior": cert.origin_interior,
        "witness": cert.witness.as_ref().map(rat_value),
    })))
}

pub fn nefdual(inst: &Instance) -> Result<Outcome> {
    let np = inst.nef_partition()?;
    let dual = dual_nef_partition(&np)?;
    check_duality(&np, &dual)?;
    let dual_np = dual.as_nef_partition()?;
    Ok(Outcome::ok(json!({
        "length": np.len(),
        "dim": np.dim(),
        "parts": np.parts().iter().map(vertices_value).collect::<Vec<_>>(),
        "dual_parts": dual.parts.iter().map(vertices_value).collect::<Vec<_>>(),
        "sum_vertices": vertices_value(np.sum()),
        "dual_sum_vertices": vertices_value(dual_np.sum()),
        "sum_reflexive": np.sum().is_reflexive(),
        "dual_sum_reflexive": dual_np.sum().is_reflexive(),
    })))
}

fn ambient_m(pair: &GorensteinConePair, v: &[BigInt]) -> Value {
    vec_value(&pair.lattice_bar_m.from_coords(v))
}

fn ambient_n(pair: &GorensteinConePair, v: &[BigInt]) -> Value {
    vec_value(&pair.lattice_bar_n.from_coords(v))
}

fn cone_value(pair: &GorensteinConePair) -> Result<Value> {
    let (ok, index) = verify_reflexive_gorenstein(pair);
    let origin = match pair.origin {
        ConeOrigin::NefPartition { s } => json!({"kind": "nef_partition", "s": s}),
        ConeOrigin::Direct => json!({"kind": "direct"}),
    };
    Ok(json!({
        "origin": origin,
        "rank": pair.dim(),
        "lattice_basis": rows_value(&pair.lattice_bar_m.basis().row_vecs()),
        "generators": pair.k_generators.iter().map(|g| ambient_m(pair, g)).collect::<Vec<_>>(),
        "dual_generators": pair.k_dual_generators.iter().map(|g| ambient_n(pair, g)).collect::<Vec<_>>(),
        "generator_count": pair.k_generators.len(),
        "dual_generator_count": pair.k_dual_generators.len(),
        "deg": ambient_m(pair, &pair.deg),
        "deg_dual": ambient_n(pair, &pair.deg_dual),
        "index": int_value(&index),
        "reflexive_gorenstein": ok,
        "degree_slice_points": degree_one_points(pair)?.len(),
    }))
}

pub fn cone(inst: &Instance) -> Result<Outcome> {
    Ok(Outcome::ok(cone_value(&inst.cone_pair()?)?))
}

fn one_based(blocks: &[Vec<usize>]) -> Value {
    json!(blocks.iter().map(|b| b.iter().map(|i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn decomposition_value(pair: &GorensteinConePair, k: usize, d: &Decomposition, full: bool) -> Result<Value> {
    let mut m = Map::new();
    m.insert("index".into(), json!(k + 1));
    m.insert("trivial".into(), json!(d.trivial));
    m.insert("summands".into(), Value::Array(d.summands.iter().map(|e| ambient_n(pair, e)).collect()));
    m.insert("p".into(), rows_value(&d.p));
    m.insert("blocks".into(), one_based(&d.blocks));
    m.insert("r".into(), json!(d.r));
    m.insert("block_sizes".into(), json!(d.block_sizes));
    if full {
        let rep = polar_sum_check(pair, &d.summands)?;
        m.insert(
            "polar_check".into(),
            json!({
                "reflexive": rep.reflexive,
                "tbar_vertices": rep.tbar_vertices,
                "tbar_facets": rep.tbar_facets,
                "failure": rep.failure,
            }),
        );
        let parts = cone_to_nef_partition(pair, &d.summands)?;
        m.insert("nef_partition".into(), Value::Array(parts.iter().map(vertices_value).collect()));
    }
    Ok(Value::Object(m))
}

pub fn decompose(inst: &Instance) -> Result<Outcome> {
    let pair = inst.cone_pair()?;
    let decs = enumerate_decompositions(&pair)?;
    let list = decs
        .iter()
        .enumerate()
        .map(|(k, d)| decomposition_value(&pair, k, d, true))
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::ok(json!({"count": decs.len(), "decompositions": list})))
}

enum Coefficients {
    Prime(CoefficientAssignment<PrimeField>),
    Rational(CoefficientAssignment<Rationals>),
}

fn assign<F: Field>(
    f: &F,
    inst: &Instance,
    pair: &GorensteinConePair,
    seed: u64,
) -> Result<CoefficientAssignment<F>> {
    let mut c = CoefficientAssignment::random(f, degree_one_points(pair)?, seed);
    if let Some(spec) = &inst.coefficients {
        for (i, (point, q)) in spec.values.iter().enumerate() {
            let path = format!("coefficients.values[{i}]");
            let coords = pair
                .lattice_bar_m
                .to_coords(point)
                .ok_or_else(|| Error::Input(format!("{path}: point is not in the lattice")))?;
            let value = f
                .from_rational(q)
                .ok_or_else(|| Error::Input(format!("{path}: value is not defined over {}", f.name())))?;
            c.set(&coords, value).map_err(|e| Error::Input(format!("{path}: {e}")))?;
        }
    }
    Ok(c)
}

fn coefficients(inst: &Instance, pair: &GorensteinConePair, opts: &Options) -> Result<Coefficients> {
    let spec = inst.coefficients.as_ref();
    let seed = opts.seed.or(spec.and_then(|s| s.seed)).unwrap_or(0);
    let field = match (opts.prime, spec.map(|s| &s.field)) {
        (Some(p), _) => FieldSpec::Prime(p),
        (None, Some(f)) => f.clone(),
        (None, None) => FieldSpec::Prime(DEFAULT_PRIME),
    };
    match field {
        FieldSpec::Prime(p) => {
            let f = PrimeField::new(p).ok_or_else(|| Error::Input(format!("{p} is not a prime below 2^32")))?;
            Ok(Coefficients::Prime(assign(&f, inst, pair, seed)?))
        }
        FieldSpec::Rational => Ok(Coefficients::Rational(assign(&Rationals, inst, pair, seed)?)),
    }
}

fn select_pair(decs: &[Decomposition], opts: &Options) -> Result<(usize, usize)> {
    let (i, j) = opts.pair.unwrap_or(if decs.len() >= 2 { (1, 2) } else { (1, 1) });
    let n = decs.len();
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::Input(format!("pair ({i}, {j}) is out of range: there are {n} decompositions")));
    }
    Ok((i - 1, j - 1))
}

fn degenerate_warnings<F: Field>(b: &BridgeData<F>) -> Vec<String> {
    b.determinants
        .iter()
        .enumerate()
        .filter(|(_, d)| d.is_zero())
        .map(|(k, _)| format!("det A_{} vanishes identically for these coefficients; resample", k + 1))
        .collect()
}

fn bridge_value<F: Field>(pair: &GorensteinConePair, b: &BridgeData<F>, full: bool) -> Value {
    let ctx = &b.context;
    let al = &ctx.alignment;
    let mut m = Map::new();
    m.insert("field".into(), json!(b.coefficients.field.name()));
    m.insert("seed".into(), json!(b.coefficients.seed));
    m.insert("s".into(), json!(ctx.s()));
    m.insert("r".into(), json!(ctx.r()));
    m.insert("blocks".into(), one_based(&al.blocks));
    m.insert("block_sizes".into(), json!(al.blocks.iter().map(Vec::len).collect::<Vec<_>>()));
    m.insert("sigma".into(), json!(al.sigma.iter().map(|i| i + 1).collect::<Vec<_>>()));
    m.insert("saturation_index".into(), int_value(&ctx.aux.index));
    m.insert("ann_rank".into(), json!(ctx.rank()));
    m.insert(
        "identities".into(),
        json!({
            "row_identities": b.identities.row_identities,
            "column_identities": b.identities.column_identities,
            "row_partitions": b.identities.row_partitions,
            "column_partitions": b.identities.column_partitions,
            "passed": b.identities.passed(),
        }),
    );
    m.insert(
        "matrix_sizes".into(),
        json!(b.matrices.iter().map(Vec::len).collect::<Vec<_>>()),
    );
    m.insert(
        "determinant_degrees".into(),
        Value::Array(
            b.determinants
                .iter()
                .map(|d| {
                    let range = d.exponent_range();
                    json!({
                        "terms": d.len(),
                        "total_degrees": d.total_degrees(),
                        "min_exponents": range.as_ref().map(|r| r.0.clone()),
                        "max_exponents": range.as_ref().map(|r| r.1.clone()),
                    })
                })
                .collect(),
        ),
    );
    if full {
        m.insert("elementary_divisors".into(), vec_value(&ctx.aux.elementary_divisors));
        m.insert("n_prime_basis".into(), rows_value(&ctx.aux.basis.row_vecs()));
        m.insert(
            "ann_e_etilde".into(),
            Value::Array(ctx.ann_e_etilde.row_vecs().iter().map(|r| ambient_m(pair, r)).collect()),
        );
        let vectors = |vs: &[Vec<Vec<BigInt>>], from: usize| -> Value {
            let mut out = Vec::new();
            for (k, block) in vs.iter().enumerate() {
                for (pos, v) in block.iter().enumerate().skip(from) {
                    out.push(json!({"block": k + 1, "index": pos + 1, "vector": vec_value(v)}));
                }
            }
            Value::Array(out)
        };
        m.insert("w_vectors".into(), vectors(&ctx.vectors.w, 1));
        m.insert("u_vectors".into(), vectors(&ctx.vectors.u, 0));
        m.insert(
            "matrices".into(),
            Value::Array(
                b.matrices
                    .iter()
                    .map(|a| Value::Array(a.iter().map(|row| Value::Array(row.iter().map(poly_value).collect())).collect()))
                    .collect(),
            ),
        );
        m.insert("determinants".into(), Value::Array(b.determinants.iter().map(poly_value).collect()));
        m.insert(
            "witnesses".into(),
            Value::Array(
                b.witnesses
                    .iter()
                    .map(|w| {
                        json!({
                            "block": w.block + 1,
                            "points": w.points.iter().map(|p| ambient_m(pair, p)).collect::<Vec<_>>(),
                            "exponent": w.exponent,
                            "generic_nonzero": w.generic_nonzero,
                            "nonzero_for_values": w.nonzero_for_values,
                        })
                    })
                    .collect(),
            ),
        );
    }
    Value::Object(m)
}

pub fn bridge(inst: &Instance, opts: &Options) -> Result<Outcome> {
    let pair = inst.cone_pair()?;
    let decs = enumerate_decompositions(&pair)?;
    let (i, j) = select_pair(&decs, opts)?;
    let (e, et) = (&decs[i].summands, &decs[j].summands);
    let (mut value, warnings) = match coefficients(inst, &pair, opts)? {
        Coefficients::Prime(c) => {
            let b = build_bridge(&pair, e, et, c)?;
            (bridge_value(&pair, &b, true), degenerate_warnings(&b))
        }
        Coefficients::Rational(c) => {
            let b = build_bridge(&pair, e, et, c)?;
            (bridge_value(&pair, &b, true), degenerate_warnings(&b))
        }
    };
    value["pair"] = json!([i + 1, j + 1]);
    Ok(Outcome { result: value, warnings, failure: None })
}

fn prime_bridge(inst: &Instance, pair: &GorensteinConePair, opts: &Options, i: usize, j: usize) -> Result<BridgeData<PrimeField>> {
    let decs = enumerate_decompositions(pair)?;
    match coefficients(inst, pair, opts)? {
        Coefficients::Prime(c) => build_bridge(pair, &decs[i].summands, &decs[j].summands, c),
        Coefficients::Rational(_) => Err(Error::Input("sampling needs a prime field; pass --prime".into())),
    }
}

fn evidence(b: &BridgeData<PrimeField>, opts: &Options) -> Result<(Value, Vec<String>, Option<Error>)> {
    let seed = opts.seed.or(b.coefficients.seed).unwrap_or(0);
    let rep = birationality_evidence(b, opts.samples, seed)?;
    let failure = (rep.invariant_failures() > 0).then(|| {
        Error::Internal(format!(
            "{} reconstructed fiber points violate an equation or the projection",
            rep.invariant_failures()
        ))
    });
    let warnings = rep.warnings.clone();
    let value = serde_json::to_value(&rep).map_err(|e| Error::Internal(e.to_string()))?;
    Ok((value, warnings, failure))
}

pub fn verify(inst: &Instance, opts: &Options) -> Result<Outcome> {
    let pair = inst.cone_pair()?;
    let decs = enumerate_decompositions(&pair)?;
    let (i, j) = select_pair(&decs, opts)?;
    let b = prime_bridge(inst, &pair, opts, i, j)?;
    let (mut result, warnings, failure) = evidence(&b, opts)?;
    result["pair"] = json!([i + 1, j + 1]);
    Ok(Outcome { result, warnings, failure })
}

pub fn pipeline(inst: &Instance, opts: &Options) -> Result<Outcome> {
    let mut out = Map::new();
    if let Body::NefPartition(_) = inst.body {
        let np = inst.nef_partition()?;
        let dual = dual_nef_partition(&np)?;
        check_duality(&np, &dual)?;
        out.insert("dual_nef_partition".into(), Value::Array(dual.parts.iter().map(vertices_value).collect()));
    }
    let pair = inst.cone_pair()?;
    let (ok, index) = verify_reflexive_gorenstein(&pair);
    out.insert(
        "cone".into(),
        json!({
            "rank": pair.dim(),
            "generator_count": pair.k_generators.len(),
            "dual_generator_count": pair.k_dual_generators.len(),
            "index": int_value(&index),
            "reflexive_gorenstein": ok,
        }),
    );
    let decs = enumerate_decompositions(&pair)?;
    out.insert(
        "decompositions".into(),
        Value::Array(
            decs.iter()
                .enumerate()
                .map(|(k, d)| decomposition_value(&pair, k, d, false))
                .collect::<Result<Vec<_>>>()?,
        ),
    );
    out.insert("decomposition_count".into(), json!(decs.len()));
    if decs.len() < 2 && opts.pair.is_none() {
        out.insert("notice".into(), json!("no nontrivial double mirror: only one decomposition exists"));
        return Ok(Outcome::ok(Value::Object(out)));
    }
    let (i, j) = select_pair(&decs, opts)?;
    out.insert("pair".into(), json!([i + 1, j + 1]));
    let b = prime_bridge(inst, &pair, opts, i, j)?;
    out.insert("bridge".into(), bridge_value(&pair, &b, false));
    let (ev, warnings, failure) = evidence(&b, opts)?;
    out.insert("evidence".into(), ev);
    Ok(Outcome { result: Value::Object(out), warnings, failure })
}
