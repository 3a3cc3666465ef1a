//! JSON documents for every value type.
//!
//! Rationals are strings `"p/q"` in canonical form, complex numbers are
//! `{"re": f, "im": f}`. Exact fields round-trip losslessly. Decoding
//! failures are reported as [`Error::Parse`]; structurally valid documents
//! that violate a value invariant surface the constructor's own error.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::algebra::{AlgebraElement, TensorElement, Word};
use crate::error::{Error, Result};
use crate::fock::{StateSpec, Weighting};
use crate::group::GroupElement;
use crate::lie::{CurrentElement, LieElement, StepFunction};
use crate::poly::Poly;
use crate::regions::{Interval, Partition, Region};
use crate::scalar::{format_rational, parse_rational, ComplexValue, Rational};

/// `#[serde(with = "...")]` adapter for `{"re", "im"}` complex values.
pub mod complex {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        Repr { re: z.re, im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let r = Repr::deserialize(d)?;
        Ok(Complex64::new(r.re, r.im))
    }
}

fn parse_err(what: &str, v: &Value) -> Error {
    Error::Parse(format!("expected {what}, got {v}"))
}

pub fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(what, v))
}

pub fn usize_from_json(v: &Value) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| parse_err("a non-negative integer", v))
}

pub fn rational_to_json(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

/// Accepts `"p/q"`, `"p"`, or a JSON integer.
pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap().into())),
        _ => Err(parse_err("a rational string \"p/q\"", v)),
    }
}

pub fn complex_to_json(z: &ComplexValue) -> Value {
    json!({"re": z.re, "im": z.im})
}

pub fn complex_from_json(v: &Value) -> Result<ComplexValue> {
    let part = |k: &str| {
        field(v, k)?
            .as_f64()
            .ok_or_else(|| parse_err("a number", v))
    };
    Ok(Complex64::new(part("re")?, part("im")?))
}

pub fn poly_to_json(p: &Poly) -> Value {
    json!({
        "n": p.degree_bound(),
        "coeffs": p.coeffs().iter().map(rational_to_json).collect::<Vec<_>>(),
    })
}

pub fn poly_from_json(v: &Value) -> Result<Poly> {
    let n = usize_from_json(field(v, "n")?)?;
    let coeffs = array(field(v, "coeffs")?, "a coefficient list")?
        .iter()
        .map(rational_from_json)
        .collect::<Result<Vec<_>>>()?;
    Poly::new(n, coeffs)
}

pub fn group_to_json(g: &GroupElement) -> Value {
    json!({
        "n": g.degree_bound(),
        "u": rational_to_json(&g.u),
        "P": poly_to_json(&g.p),
    })
}

pub fn group_from_json(v: &Value) -> Result<GroupElement> {
    let n = usize_from_json(field(v, "n")?)?;
    let u = rational_from_json(field(v, "u")?)?;
    let p = poly_from_json(field(v, "P")?)?;
    if p.degree_bound() != n {
        return Err(Error::DegreeMismatch {
            left: n,
            right: p.degree_bound(),
        });
    }
    Ok(GroupElement::new(u, p))
}

/// Floating image of a rescaled element; not re-parseable as an exact value.
pub fn group_f64_to_json(g: &GroupElement<f64>) -> Value {
    json!({
        "n": g.degree_bound(),
        "u": g.u,
        "P": {"n": g.degree_bound(), "coeffs": g.p.coeffs()},
    })
}

pub fn lie_to_json(x: &LieElement) -> Value {
    json!({
        "n": x.degree_bound(),
        "u": rational_to_json(&x.u),
        "a": x.a.iter().map(rational_to_json).collect::<Vec<_>>(),
    })
}

pub fn lie_from_json(v: &Value) -> Result<LieElement> {
    let n = usize_from_json(field(v, "n")?)?;
    let u = rational_from_json(field(v, "u")?)?;
    let a = array(field(v, "a")?, "a coefficient list")?
        .iter()
        .map(rational_from_json)
        .collect::<Result<Vec<_>>>()?;
    if a.len() != n + 1 {
        return Err(Error::Shape(format!("n = {n} needs {} coefficients", n + 1)));
    }
    LieElement::new(u, a)
}

pub fn lie_f64_to_json(x: &LieElement<f64>) -> Value {
    json!({"n": x.degree_bound(), "u": x.u, "a": x.a})
}

pub fn interval_to_json(i: &Interval) -> Value {
    json!({"lo": rational_to_json(i.lo()), "hi": rational_to_json(i.hi())})
}

pub fn interval_from_json(v: &Value) -> Result<Interval> {
    Interval::new(
        rational_from_json(field(v, "lo")?)?,
        rational_from_json(field(v, "hi")?)?,
    )
}

/// A region is a list of intervals.
pub fn region_to_json(r: &Region) -> Value {
    Value::Array(r.intervals().iter().map(interval_to_json).collect())
}

pub fn region_from_json(v: &Value) -> Result<Region> {
    let intervals = array(v, "a list of intervals")?
        .iter()
        .map(interval_from_json)
        .collect::<Result<Vec<_>>>()?;
    Ok(Region::new(intervals))
}

pub fn partition_to_json(p: &Partition) -> Value {
    json!({
        "of": region_to_json(p.of()),
        "cells": p.cells().iter().map(region_to_json).collect::<Vec<_>>(),
    })
}

pub fn partition_from_json(v: &Value) -> Result<Partition> {
    let of = region_from_json(field(v, "of")?)?;
    let cells = array(field(v, "cells")?, "a list of cells")?
        .iter()
        .map(region_from_json)
        .collect::<Result<Vec<_>>>()?;
    Partition::new(of, cells)
}

pub fn step_to_json(f: &StepFunction) -> Value {
    Value::Array(
        f.pieces()
            .iter()
            .map(|(i, val)| {
                json!({
                    "lo": rational_to_json(i.lo()),
                    "hi": rational_to_json(i.hi()),
                    "val": rational_to_json(val),
                })
            })
            .collect(),
    )
}

pub fn step_from_json(v: &Value) -> Result<StepFunction> {
    let pieces = array(v, "a list of pieces")?
        .iter()
        .map(|p| Ok((interval_from_json(p)?, rational_from_json(field(p, "val")?)?)))
        .collect::<Result<Vec<_>>>()?;
    StepFunction::new(pieces)
}

/// `{"n", "l0", "fields"}` with `fields[k-1]` the step function of `L_k`.
pub fn current_to_json(x: &CurrentElement) -> Value {
    let n = x.degree_bound();
    json!({
        "n": n,
        "l0": rational_to_json(x.l0()),
        "fields": (1..=n + 1).map(|k| step_to_json(x.field(k))).collect::<Vec<_>>(),
    })
}

pub fn current_from_json(v: &Value) -> Result<CurrentElement> {
    let n = usize_from_json(field(v, "n")?)?;
    let l0 = rational_from_json(field(v, "l0")?)?;
    let fields = array(field(v, "fields")?, "a list of step functions")?
        .iter()
        .map(step_from_json)
        .collect::<Result<Vec<_>>>()?;
    CurrentElement::new(n, l0, fields)
}

/// A single-cell factor: a list of `{"g", "c"}` terms.
pub fn algebra_to_json(x: &AlgebraElement) -> Value {
    Value::Array(
        x.terms()
            .map(|(g, c)| json!({"g": group_to_json(g), "c": complex_to_json(c)}))
            .collect(),
    )
}

pub fn algebra_from_json(n: usize, v: &Value) -> Result<AlgebraElement> {
    let terms = array(v, "a list of {g, c} terms")?
        .iter()
        .map(|t| Ok((group_from_json(field(t, "g")?)?, complex_from_json(field(t, "c")?)?)))
        .collect::<Result<Vec<_>>>()?;
    AlgebraElement::from_terms(n, terms)
}

/// Each stored word is written with one single-term factor per cell, so the
/// document re-parses to the same element.
pub fn tensor_to_json(t: &TensorElement) -> Value {
    let one = Complex64::new(1.0, 0.0);
    let words: Vec<Value> = t
        .words()
        .map(|(w, c)| {
            let factors: Vec<Value> = w
                .iter()
                .map(|g| json!([{"g": group_to_json(g), "c": complex_to_json(&one)}]))
                .collect();
            json!({"coeff": complex_to_json(c), "factors": factors})
        })
        .collect();
    json!({
        "n": t.degree_bound(),
        "partition": partition_to_json(t.partition()),
        "words": words,
    })
}

/// Factors may be arbitrary sums per cell; they are expanded multilinearly.
/// `"n"` is optional when some factor carries a label.
pub fn tensor_from_json(v: &Value) -> Result<TensorElement> {
    let partition = partition_from_json(field(v, "partition")?)?;
    let words = array(field(v, "words")?, "a list of words")?;
    let n = match v.get("n") {
        Some(n) => usize_from_json(n)?,
        None => infer_degree(words)?,
    };
    let mut total = TensorElement::zero(n, partition.clone());
    for w in words {
        let coeff = complex_from_json(field(w, "coeff")?)?;
        let factors = array(field(w, "factors")?, "a list of factors")?
            .iter()
            .map(|f| algebra_from_json(n, f))
            .collect::<Result<Vec<_>>>()?;
        let term = TensorElement::elementary(partition.clone(), &factors)?.scale(coeff);
        total = total.add(&term)?;
    }
    Ok(total)
}

fn infer_degree(words: &[Value]) -> Result<usize> {
    for w in words {
        for f in array(field(w, "factors")?, "a list of factors")? {
            if let Some(t) = array(f, "a list of {g, c} terms")?.first() {
                return usize_from_json(field(field(t, "g")?, "n")?);
            }
        }
    }
    Err(Error::Parse("cannot infer n from an empty tensor; give \"n\"".into()))
}

pub fn word_to_json(w: &Word) -> Value {
    Value::Array(w.iter().map(group_to_json).collect())
}

pub fn state_to_json(s: &StateSpec) -> Value {
    let weighting = match s.weighting() {
        Weighting::Uniform => json!("uniform"),
        Weighting::Density(p) => json!({"density": step_to_json(p)}),
        Weighting::LengthProportional => json!("length_proportional"),
    };
    json!({"n": s.degree_bound(), "weighting": weighting})
}

/// `weighting` defaults to `"uniform"`.
pub fn state_from_json(v: &Value) -> Result<StateSpec> {
    let n = usize_from_json(field(v, "n")?)?;
    let weighting = match v.get("weighting") {
        None => Weighting::Uniform,
        Some(Value::String(s)) if s == "uniform" => Weighting::Uniform,
        Some(Value::String(s)) if s == "length_proportional" => Weighting::LengthProportional,
        Some(w @ Value::Object(_)) => Weighting::Density(step_from_json(field(w, "density")?)?),
        Some(w) => return Err(parse_err("a weighting", w)),
    };
    StateSpec::new(n, weighting)
}
