//! JSON and JSONL formats. Integers and rationals are written as decimal
//! strings so they survive any JSON reader.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::approx2d::{BestApproxRecord, BoundaryPoint, Chain, PointClass};
use crate::builder::{ConstructionResult, StepCertificate, TargetInterval};
use crate::exact::{format_rational, parse_rational, Rational, RealExpr, Surd};
use crate::lattice3::IVec3;
use crate::{Error, Result};

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub fn int_str(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

pub fn rat_str(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn vec_json(u: &IVec3) -> Value {
    json!([u[0].to_string(), u[1].to_string(), u[2].to_string()])
}

fn surd_str(s: &Surd) -> Value {
    match s.as_rational() {
        Some(r) => rat_str(r),
        None => Value::String(RealExpr::from_surd(s).to_string()),
    }
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(format!("{what} must be a string")))
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| bad(format!("missing field {key:?}")))
}

fn parse_int(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.to_string().parse().map_err(|_| bad(format!("{what} must be an integer"))),
        _ => as_str(v, what)?.trim().parse().map_err(|_| bad(format!("{what} must be an integer"))),
    }
}

fn parse_rat(v: &Value, what: &str) -> Result<Rational> {
    match v {
        Value::Number(n) => parse_rational(&n.to_string()),
        _ => parse_rational(as_str(v, what)?),
    }
}

fn parse_vec(v: &Value, what: &str) -> Result<IVec3> {
    let a = v.as_array().filter(|a| a.len() == 3).ok_or_else(|| bad(format!("{what} must be a triple")))?;
    Ok([parse_int(&a[0], what)?, parse_int(&a[1], what)?, parse_int(&a[2], what)?])
}

/// A number that must be rational or a quadratic surd: plain rationals,
/// decimals, or prefix expressions such as `(- (/ 2 (sqrt 3)) 1/20)`.
pub fn parse_surd(v: &Value, what: &str) -> Result<Surd> {
    if let Value::Number(n) = v {
        return Ok(Surd::rational(parse_rational(&n.to_string())?));
    }
    let s = as_str(v, what)?;
    if let Ok(r) = parse_rational(s) {
        return Ok(Surd::rational(r));
    }
    let e = RealExpr::parse(s)?;
    e.surd().cloned().ok_or_else(|| bad(format!("{what} must be rational or a quadratic surd")))
}

/// Targets file: either a list `[{"lo": .., "hi": ..}, ..]` or the shorthand
/// `{"lambda": .., "halfwidth": .., "n": ..}` repeating one interval n times.
pub fn parse_targets(text: &str) -> Result<Vec<TargetInterval>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::parse(e.column(), e.to_string()))?;
    targets_from_json(&v)
}

pub fn targets_from_json(v: &Value) -> Result<Vec<TargetInterval>> {
    match v {
        Value::Array(items) => items
            .iter()
            .map(|t| TargetInterval::new(parse_surd(field(t, "lo")?, "lo")?, parse_surd(field(t, "hi")?, "hi")?))
            .collect(),
        Value::Object(_) => {
            let lambda = parse_surd(field(v, "lambda")?, "lambda")?;
            let hw = parse_rat(field(v, "halfwidth")?, "halfwidth")?;
            let n = field(v, "n")?.as_u64().ok_or_else(|| bad("n must be a non-negative integer"))? as usize;
            Ok(vec![TargetInterval::around(&lambda, &hw)?; n])
        }
        _ => Err(bad("targets must be a list or an object")),
    }
}

pub fn targets_to_json(targets: &[TargetInterval]) -> Value {
    Value::Array(targets.iter().map(|t| json!({"lo": surd_str(&t.lo), "hi": surd_str(&t.hi)})).collect())
}

/// One JSONL line per chain record.
pub fn chain_record_json(r: &BestApproxRecord) -> Value {
    let r2 = match r.r2_next.as_rational() {
        Some(x) => rat_str(x),
        None => Value::String(format!("{:.17e}", r.r2_next.to_f64())),
    };
    let vop = match &r.v_over_pi {
        None => Value::Null,
        Some(p) => match p.as_rational() {
            Some(x) => rat_str(x),
            None => Value::String(format!("{:.17e}", p.to_f64())),
        },
    };
    let mut m = Map::new();
    m.insert("n".into(), json!(r.n));
    m.insert("q".into(), int_str(&r.q));
    m.insert("p".into(), json!([r.p[0].to_string(), r.p[1].to_string()]));
    m.insert("R2".into(), r2);
    m.insert("V_over_pi".into(), vop);
    if let Some(p) = &r.v_over_pi {
        m.insert("V_over_pi_approx".into(), json!(p.to_f64()));
    }
    if r.ambiguous {
        m.insert("ambiguous".into(), json!(true));
    }
    Value::Object(m)
}

pub fn chain_jsonl(chain: &Chain) -> String {
    let mut out = String::new();
    for r in &chain.records {
        out.push_str(&chain_record_json(r).to_string());
        out.push('\n');
    }
    out
}

fn kind_str(k: PointClass) -> &'static str {
    match k {
        PointClass::Interior => "interior",
        PointClass::Lateral => "lateral",
        PointClass::BackFace => "back_face",
        PointClass::FrontFace => "front_face",
        PointClass::Outside => "outside",
    }
}

fn kind_of(s: &str) -> Result<PointClass> {
    Ok(match s {
        "interior" => PointClass::Interior,
        "lateral" => PointClass::Lateral,
        "back_face" => PointClass::BackFace,
        "front_face" => PointClass::FrontFace,
        "outside" => PointClass::Outside,
        _ => return Err(bad(format!("unknown boundary kind {s:?}"))),
    })
}

pub fn certificate_json(c: &StepCertificate) -> Value {
    let rats = |v: &[Rational]| Value::Array(v.iter().map(rat_str).collect());
    let boundary: Vec<Value> = c
        .boundary
        .iter()
        .map(|pts| Value::Array(pts.iter().map(|b| json!({"point": vec_json(&b.point), "kind": kind_str(b.kind)})).collect()))
        .collect();
    json!({
        "n": c.n,
        "w": vec_json(&c.w),
        "branch": u8::from(c.branch),
        "side": int_str(&c.side),
        "R2": rats(&c.r2),
        "V_over_pi": rats(&c.v_over_pi),
        "V_over_pi_approx": c.v_over_pi.last().map(crate::exact::to_f64),
        "step2": rat_str(&c.step2),
        "step2_bound": rat_str(&c.step2_bound),
        "drift_bound": rat_str(&c.drift_bound),
        "boundary": boundary,
        "tested": c.tested,
        "rejected": c.rejected,
    })
}

pub fn certificate_from_json(v: &Value) -> Result<StepCertificate> {
    let rats = |key: &str| -> Result<Vec<Rational>> {
        field(v, key)?.as_array().ok_or_else(|| bad(format!("{key} must be a list")))?.iter().map(|x| parse_rat(x, key)).collect()
    };
    let mut boundary = Vec::new();
    for pts in field(v, "boundary")?.as_array().ok_or_else(|| bad("boundary must be a list"))? {
        let mut list = Vec::new();
        for b in pts.as_array().ok_or_else(|| bad("boundary entries must be lists"))? {
            list.push(BoundaryPoint { point: parse_vec(field(b, "point")?, "point")?, kind: kind_of(as_str(field(b, "kind")?, "kind")?)? });
        }
        boundary.push(list);
    }
    let mut rejected = [0usize; 6];
    if let Some(a) = v.get("rejected").and_then(|r| r.as_array()) {
        for (slot, x) in rejected.iter_mut().zip(a) {
            *slot = x.as_u64().unwrap_or(0) as usize;
        }
    }
    Ok(StepCertificate {
        n: field(v, "n")?.as_u64().ok_or_else(|| bad("n must be an integer"))? as usize,
        w: parse_vec(field(v, "w")?, "w")?,
        branch: field(v, "branch")?.as_u64() == Some(1),
        side: parse_int(field(v, "side")?, "side")?,
        r2: rats("R2")?,
        v_over_pi: rats("V_over_pi")?,
        step2: parse_rat(field(v, "step2")?, "step2")?,
        step2_bound: parse_rat(field(v, "step2_bound")?, "step2_bound")?,
        drift_bound: parse_rat(field(v, "drift_bound")?, "drift_bound")?,
        boundary,
        tested: v.get("tested").and_then(|t| t.as_u64()).unwrap_or(0) as usize,
        rejected,
    })
}

fn bits_str(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Result bundle of a construction run.
pub fn result_json(r: &ConstructionResult) -> Value {
    let st = &r.state;
    json!({
        "steps": st.n(),
        "v": [rat_str(&r.v[0]), rat_str(&r.v[1])],
        "v_approx": [crate::exact::to_f64(&r.v[0]), crate::exact::to_f64(&r.v[1])],
        "error_bound": rat_str(&r.error_bound),
        "targets": targets_to_json(&st.targets),
        "branches": bits_str(&st.branches),
        "records": Value::Array(st.records.iter().map(vec_json).collect()),
        "certificates": Value::Array(st.certificates.iter().map(certificate_json).collect()),
    })
}

/// Parsed bundle: the raw records plus the certificates as written.
#[derive(Debug, Clone)]
pub struct Bundle {
    pub records: Vec<IVec3>,
    pub targets: Vec<TargetInterval>,
    pub branches: Vec<bool>,
    pub v: [Rational; 2],
    pub error_bound: Rational,
    pub certificates: Vec<StepCertificate>,
}

pub fn parse_bundle(text: &str) -> Result<Bundle> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::parse(e.column(), e.to_string()))?;
    let records =
        field(&v, "records")?.as_array().ok_or_else(|| bad("records must be a list"))?.iter().map(|r| parse_vec(r, "record")).collect::<Result<Vec<_>>>()?;
    if records.is_empty() {
        return Err(bad("bundle has no records"));
    }
    let branches = as_str(field(&v, "branches")?, "branches")?
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(bad("branches must be a 0/1 string")),
        })
        .collect::<Result<Vec<_>>>()?;
    let vv = field(&v, "v")?.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("v must be a pair"))?;
    let certificates = field(&v, "certificates")?
        .as_array()
        .ok_or_else(|| bad("certificates must be a list"))?
        .iter()
        .map(certificate_from_json)
        .collect::<Result<Vec<_>>>()?;
    Ok(Bundle {
        records,
        targets: targets_from_json(field(&v, "targets")?)?,
        branches,
        v: [parse_rat(&vv[0], "v")?, parse_rat(&vv[1], "v")?],
        error_bound: parse_rat(field(&v, "error_bound")?, "error_bound")?,
        certificates,
    })
}
