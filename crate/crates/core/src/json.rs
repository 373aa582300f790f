//! JSON forms of the algebraic objects. Scalars and rational functions are
//! canonical strings, so serialize∘parse is the identity on serialized output.

use num_rational::Rational64;
use serde_json::{json, Map, Value};

use crate::bethe::{BetheSolution, BetheSystem};
use crate::diffop::{DifferenceOperator, FirstOrderFactorization};
use crate::error::{Error, Result};
use crate::poly::{Body, Poly};
use crate::qpoly::QuasiPolynomial;
use crate::ratfunc::RatFunc;
use crate::reconstruct::{Collection, Preframe};
use crate::scalars::{Field, Scalar};

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn field_of<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| schema(format!("missing field `{key}`")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(format!("{what}: expected an array")))
}

fn string<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| schema(format!("{what}: expected a string")))
}

fn uint(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| schema(format!("{what}: expected a non-negative integer")))
}

pub fn scalar_to_json(c: &Scalar) -> Value {
    Value::String(c.canonical())
}

pub fn scalar_from_json(field: &Field, v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => field.parse(s),
        Value::Number(n) if n.is_i64() => Ok(field.int(n.as_i64().unwrap())),
        _ => Err(schema("scalar: expected a string")),
    }
}

pub fn rational_to_json(r: Rational64) -> Value {
    Value::String(r.to_string())
}

pub fn rational_from_json(v: &Value) -> Result<Rational64> {
    match v {
        Value::String(s) => s.trim().parse::<Rational64>().map_err(|e| schema(format!("rational `{s}`: {e}"))),
        Value::Number(n) if n.is_i64() => Ok(Rational64::from_integer(n.as_i64().unwrap())),
        _ => Err(schema("rational: expected a string such as \"1/2\"")),
    }
}

/// Coefficient strings, constant term first.
pub fn poly_to_json(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(scalar_to_json).collect())
}

pub fn poly_from_json(field: &Field, v: &Value) -> Result<Poly> {
    let c = array(v, "polynomial")?.iter().map(|c| scalar_from_json(field, c)).collect::<Result<Vec<_>>>()?;
    Ok(Poly::from_coeffs(c))
}

/// `[[x-degree, s-degree, coefficient]]`, highest `(x, s)` first.
pub fn body_to_json(b: &Body) -> Value {
    let mut t = b.terms();
    t.sort_by(|a, b| (b.0, b.1).cmp(&(a.0, a.1)));
    Value::Array(t.iter().map(|(xd, sd, c)| json!([xd, sd, c.canonical()])).collect())
}

pub fn body_from_json(field: &Field, v: &Value) -> Result<Body> {
    let mut terms = Vec::new();
    for t in array(v, "body")? {
        let t = array(t, "body term")?;
        if t.len() != 3 {
            return Err(schema("body term: expected [x-degree, s-degree, coefficient]"));
        }
        terms.push((uint(&t[0], "x-degree")?, uint(&t[1], "s-degree")?, scalar_from_json(field, &t[2])?));
    }
    Ok(Body::from_terms(&terms))
}

pub fn qp_to_json(f: &QuasiPolynomial) -> Value {
    json!({
        "exponent": f.exponent().map(rational_to_json).unwrap_or(Value::Null),
        "body": body_to_json(f.body()),
    })
}

pub fn qp_from_json(field: &Field, v: &Value) -> Result<QuasiPolynomial> {
    let body = body_from_json(field, field_of(v, "body")?)?;
    if body.is_zero() {
        return Ok(QuasiPolynomial::zero());
    }
    let e = field_of(v, "exponent")?;
    if e.is_null() {
        return Err(schema("nonzero quasi-polynomial without an exponent"));
    }
    let a = rational_from_json(e)?;
    field.lattice(a)?;
    Ok(QuasiPolynomial::new(a, body))
}

pub fn system_to_json(sys: &BetheSystem) -> Value {
    json!({
        "N": sys.n,
        "lambda": sys.lambda.iter().map(|r| rational_to_json(*r)).collect::<Vec<_>>(),
        "T": sys.t.iter().map(poly_to_json).collect::<Vec<_>>(),
        "l": sys.l,
    })
}

pub fn system_from_json(field: &Field, v: &Value) -> Result<BetheSystem> {
    let n = uint(field_of(v, "N")?, "N")?;
    let lambda = array(field_of(v, "lambda")?, "lambda")?.iter().map(rational_from_json).collect::<Result<Vec<_>>>()?;
    let t = array(field_of(v, "T")?, "T")?.iter().map(|p| poly_from_json(field, p)).collect::<Result<Vec<_>>>()?;
    let l = array(field_of(v, "l")?, "l")?.iter().map(|x| uint(x, "l")).collect::<Result<Vec<_>>>()?;
    if lambda.len() != n {
        return Err(schema(format!("lambda has {} entries, expected N = {n}", lambda.len())));
    }
    BetheSystem::new(field, lambda, t, l)
}

pub fn solution_to_json(sol: &BetheSolution) -> Value {
    let mut m = Map::new();
    m.insert("p".into(), Value::Array(sol.p.iter().map(poly_to_json).collect()));
    if let Some(roots) = &sol.roots {
        let r = roots.iter().map(|rs| Value::Array(rs.iter().map(scalar_to_json).collect())).collect();
        m.insert("roots".into(), Value::Array(r));
    }
    Value::Object(m)
}

pub fn solution_from_json(field: &Field, v: &Value) -> Result<BetheSolution> {
    let p = array(field_of(v, "p")?, "p")?.iter().map(|p| poly_from_json(field, p)).collect::<Result<Vec<_>>>()?;
    let sol = BetheSolution::new(p)?;
    match v.get("roots") {
        None | Some(Value::Null) => Ok(sol),
        Some(r) => {
            let roots = array(r, "roots")?
                .iter()
                .map(|rs| array(rs, "roots")?.iter().map(|c| scalar_from_json(field, c)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            sol.with_roots(roots)
        }
    }
}

pub fn collection_to_json(u: &Collection) -> Value {
    json!({
        "lambda": u.lambda().into_iter().map(rational_to_json).collect::<Vec<_>>(),
        "u": u.u().iter().map(qp_to_json).collect::<Vec<_>>(),
    })
}

/// `lambda` is optional on input; when present it must match the exponents.
pub fn collection_from_json(field: &Field, v: &Value) -> Result<Collection> {
    let u = array(field_of(v, "u")?, "u")?.iter().map(|f| qp_from_json(field, f)).collect::<Result<Vec<_>>>()?;
    let c = Collection::new(field, u)?;
    if let Some(l) = v.get("lambda").filter(|l| !l.is_null()) {
        let given = array(l, "lambda")?.iter().map(rational_from_json).collect::<Result<Vec<_>>>()?;
        if given != c.lambda() {
            return Err(schema("lambda does not match the exponents of u"));
        }
    }
    Ok(c)
}

pub fn preframe_to_json(t: &Preframe) -> Value {
    json!({ "T": t.t.iter().map(poly_to_json).collect::<Vec<_>>() })
}

pub fn preframe_from_json(field: &Field, v: &Value) -> Result<Preframe> {
    let t = array(field_of(v, "T")?, "T")?.iter().map(|p| poly_from_json(field, p)).collect::<Result<Vec<_>>>()?;
    Preframe::new(t)
}

pub fn operator_to_json(d: &DifferenceOperator, factors: Option<&FirstOrderFactorization>) -> Value {
    let mut m = Map::new();
    m.insert("order".into(), json!(d.order()));
    m.insert("coefficients".into(), Value::Array(d.coeffs().iter().map(|a| Value::String(a.to_string())).collect()));
    if let Some(f) = factors {
        m.insert("factors".into(), Value::Array(f.factors.iter().map(|g| Value::String(g.to_string())).collect()));
    }
    Value::Object(m)
}

pub fn operator_from_json(field: &Field, v: &Value) -> Result<(DifferenceOperator, Option<FirstOrderFactorization>)> {
    let coeffs = array(field_of(v, "coefficients")?, "coefficients")?
        .iter()
        .map(|a| RatFunc::parse(field, string(a, "coefficient")?))
        .collect::<Result<Vec<_>>>()?;
    let d = DifferenceOperator::new(coeffs)?;
    if let Some(n) = v.get("order") {
        if uint(n, "order")? != d.order() {
            return Err(schema("order does not match the number of coefficients"));
        }
    }
    let factors = match v.get("factors") {
        None | Some(Value::Null) => None,
        Some(f) => Some(FirstOrderFactorization {
            factors: array(f, "factors")?
                .iter()
                .map(|g| RatFunc::parse(field, string(g, "factor")?))
                .collect::<Result<Vec<_>>>()?,
        }),
    };
    Ok((d, factors))
}

pub fn error_to_json(e: &Error) -> Value {
    let kind = format!("{e:?}");
    let kind = kind.split(['(', ' ', '{']).next().unwrap_or("Error").to_string();
    json!({ "error": { "kind": kind, "message": e.to_string() } })
}
