//! Verb dispatch for the `polyheis` binary.
//!
//! Every verb except `nogo` reads one JSON document from standard input and
//! writes one JSON document to standard output. Exit codes: 0 success, 1
//! domain error, 2 malformed input, 3 a checked identity failed.

use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use polyheis::algebra::{embed_generator, embed_refine, LocalizedElement};
use polyheis::fock::{factorizability_defect, fock_eval, gram_psd_check, nogo_experiment, product_over_cells, state_eval, NogoConfig};
use polyheis::group::{khat_apply, khat_inverse, RescaleMap, Rescaled};
use polyheis::json::*;
use polyheis::lie::{bracket_current, bracket_one_mode, jacobi_defect, preserves_brackets, rescaling_constants, Rescaling, RescalingParams};
use polyheis::oscillator::oracle_matrix_check;
use polyheis::poly::{s_apply, t_apply, t_inv_apply};
use polyheis::regions::is_refinement;
use polyheis::scalar::{format_rational, parse_rational, Rational, Scalar};
use polyheis::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Verb {
    Compose,
    Invert,
    Tw,
    Shift,
    Khat,
    Bracket,
    Jacobi,
    RescaleConstants,
    Embed,
    Refine,
    CocycleCheck,
    State,
    FactorCheck,
    Nogo,
    Gram,
    Oracle,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "polyheis", version, about = "Polynomial Heisenberg group calculator with JSON I/O")]
pub struct Cli {
    pub verb: Verb,
    /// Degree bound (nogo).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fixed number of partition cells (nogo).
    #[arg(long)]
    pub cells: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Fixed quadratic coefficient a_2, as "p/q" or a decimal (nogo).
    #[arg(long, value_parser = parse_decimal)]
    pub a2: Option<Rational>,
    /// Fixed A = a_2 / 2, as "p/q" or a decimal (nogo).
    #[arg(long, value_parser = parse_decimal, conflicts_with = "a2")]
    pub quad_a: Option<Rational>,
    /// Indented output.
    #[arg(long)]
    pub pretty: bool,
}

impl Cli {
    pub fn reads_stdin(&self) -> bool {
        self.verb != Verb::Nogo
    }
}

/// Exact value of `"p/q"`, `"p"`, or a plain decimal such as `"-1.25"`.
pub fn parse_decimal(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if let Ok(q) = parse_rational(s) {
        return Ok(q);
    }
    let (int_part, frac) = s
        .split_once('.')
        .ok_or_else(|| format!("not a rational or decimal: {s:?}"))?;
    let digits = frac.len() as u32;
    if digits == 0 || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("not a rational or decimal: {s:?}"));
    }
    let negative = int_part.starts_with('-');
    let whole = match int_part.trim_start_matches(['-', '+']) {
        "" => "0".to_string(),
        w => w.to_string(),
    };
    let mut q = parse_rational(&format!("{whole}{frac}/1{}", "0".repeat(digits as usize)))
        .map_err(|e| e.to_string())?;
    if negative {
        q = -q;
    }
    Ok(q)
}

pub struct Outcome {
    pub code: i32,
    pub output: String,
}

fn exit_code(e: &Error) -> i32 {
    if e.is_malformed_input() {
        2
    } else {
        1
    }
}

fn render(v: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(v).expect("JSON values always serialize")
    } else {
        v.to_string()
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types always serialize")
}

/// Runs one command against the raw standard-input text.
pub fn run(cli: &Cli, input: &str) -> Outcome {
    let payload = if cli.reads_stdin() {
        match serde_json::from_str::<Value>(input) {
            Ok(v) => v,
            Err(e) => {
                return Outcome {
                    code: 2,
                    output: render(&json!({"error": format!("invalid JSON: {e}")}), cli.pretty),
                }
            }
        }
    } else {
        Value::Null
    };
    match dispatch(cli, &payload) {
        Ok((v, ok)) => Outcome {
            code: if ok { 0 } else { 3 },
            output: render(&v, cli.pretty),
        },
        Err(e) => Outcome {
            code: exit_code(&e),
            output: render(&json!({"error": e.to_string()}), cli.pretty),
        },
    }
}

/// `payload[key]`, or the whole payload when it has no such key.
fn arg<'a>(payload: &'a Value, key: &str) -> &'a Value {
    payload.get(key).unwrap_or(payload)
}

fn flag(payload: &Value, key: &str) -> bool {
    payload.get(key).and_then(Value::as_bool).unwrap_or(false)
}

fn rescaled_to_json(r: &Rescaled) -> Value {
    match r {
        Rescaled::Exact(g) => json!({"exact": true, "value": group_to_json(g)}),
        Rescaled::Approx(g) => json!({"exact": false, "value": group_f64_to_json(g)}),
    }
}

fn params_to_json<T: Scalar>(p: &RescalingParams<T>, scalar: impl Fn(&T) -> Value) -> Value {
    json!({
        "length": rational_to_json(&p.length),
        "a": rational_to_json(&p.a),
        "b": scalar(&p.b),
        "c": p.c.iter().map(&scalar).collect::<Vec<_>>(),
        "satisfies_structure": p.satisfies_structure(),
    })
}

fn is_current(v: &Value) -> bool {
    v.get("fields").is_some()
}

type Dispatched = (Value, bool);

fn dispatch(cli: &Cli, p: &Value) -> polyheis::Result<Dispatched> {
    Ok(match cli.verb {
        Verb::Compose => {
            let g = group_from_json(field(p, "g")?)?;
            let h = group_from_json(field(p, "h")?)?;
            (group_to_json(&g.compose(&h)?), true)
        }
        Verb::Invert => (group_to_json(&group_from_json(arg(p, "g"))?.inverse()), true),
        Verb::Tw => {
            let w = rational_from_json(field(p, "w")?)?;
            let poly = poly_from_json(field(p, "P")?)?;
            let out = if flag(p, "inverse") {
                t_inv_apply(&w, &poly)
            } else {
                t_apply(&w, &poly)
            };
            (poly_to_json(&out), true)
        }
        Verb::Shift => {
            let u = rational_from_json(field(p, "u")?)?;
            let poly = poly_from_json(field(p, "P")?)?;
            (poly_to_json(&s_apply(&u, &poly)), true)
        }
        Verb::Khat => {
            let m = RescaleMap::new(rational_from_json(field(p, "length")?)?)?;
            let g = group_from_json(field(p, "g")?)?;
            let r = if flag(p, "inverse") {
                khat_inverse(&m, &g)
            } else {
                khat_apply(&m, &g)
            };
            (rescaled_to_json(&r), true)
        }
        Verb::Bracket => {
            let (x, y) = (field(p, "x")?, field(p, "y")?);
            if is_current(x) {
                let out = bracket_current(&current_from_json(x)?, &current_from_json(y)?)?;
                (current_to_json(&out), true)
            } else {
                let out = bracket_one_mode(&lie_from_json(x)?, &lie_from_json(y)?)?;
                (lie_to_json(&out), true)
            }
        }
        Verb::Jacobi => {
            let x = current_from_json(field(p, "x")?)?;
            let y = current_from_json(field(p, "y")?)?;
            let z = current_from_json(field(p, "z")?)?;
            let d = jacobi_defect(&x, &y, &z)?;
            let zero = d.is_zero();
            (json!({"defect": current_to_json(&d), "zero": zero}), zero)
        }
        Verb::RescaleConstants => {
            let length = rational_from_json(field(p, "length")?)?;
            let a = match p.get("a") {
                Some(v) => rational_from_json(v)?,
                None => Rational::from_integer(1.into()),
            };
            let n = usize_from_json(field(p, "n")?)?;
            let unit = polyheis::regions::Region::interval(Rational::from_integer(0.into()), length.clone())?;
            let (mut v, exact, ok) = match rescaling_constants(&length, &a, n)? {
                Rescaling::Exact(params) => {
                    let ok = preserves_brackets(&params, &unit)?;
                    (params_to_json(&params, rational_to_json), true, ok)
                }
                Rescaling::Approx(params) => {
                    let ok = preserves_brackets(&params, &unit)?;
                    (params_to_json(&params, |x: &f64| json!(x)), false, ok)
                }
            };
            v["exact"] = json!(exact);
            v["preserves_brackets"] = json!(ok);
            (v, ok)
        }
        Verb::Embed => {
            let target = partition_from_json(field(p, "partition")?)?;
            let region = region_from_json(field(p, "region")?)?;
            let n = usize_from_json(field(p, "n")?)?;
            let elem = algebra_from_json(n, field(p, "elem")?)?;
            let t = embed_generator(&target, &LocalizedElement::new(region, elem)?)?;
            (tensor_to_json(&t), true)
        }
        Verb::Refine => {
            let t = tensor_from_json(field(p, "tensor")?)?;
            let finer = partition_from_json(field(p, "finer")?)?;
            (tensor_to_json(&embed_refine(&t, &finer)?), true)
        }
        Verb::CocycleCheck => {
            // refining step by step along the chain must agree with refining
            // straight to every later partition
            let t = tensor_from_json(field(p, "tensor")?)?;
            let chain = field(p, "chain")?
                .as_array()
                .ok_or_else(|| Error::Parse("\"chain\" must be a list of partitions".into()))?
                .iter()
                .map(partition_from_json)
                .collect::<polyheis::Result<Vec<_>>>()?;
            let mut stepwise = t.clone();
            let mut consistent = true;
            let mut prev = t.partition().clone();
            for part in &chain {
                if !is_refinement(part, &prev)? {
                    return Err(Error::NotRefinement("chain partitions must refine their predecessor".into()));
                }
                stepwise = embed_refine(&stepwise, part)?;
                consistent &= stepwise == embed_refine(&t, part)?;
                prev = part.clone();
            }
            (json!({"consistent": consistent, "steps": chain.len(), "result": tensor_to_json(&stepwise)}), consistent)
        }
        Verb::State => {
            let spec = state_from_json(field(p, "state")?)?;
            let z = if let Some(t) = p.get("tensor") {
                state_eval(&spec, &tensor_from_json(t)?)?
            } else {
                let region = region_from_json(field(p, "region")?)?;
                fock_eval(&spec, &region, &group_from_json(field(p, "g")?)?)?
            };
            (complex_to_json(&z), true)
        }
        Verb::FactorCheck => {
            let spec = state_from_json(field(p, "state")?)?;
            let partition = partition_from_json(field(p, "partition")?)?;
            let g = group_from_json(field(p, "g")?)?;
            let region = partition.of().clone();
            let whole = fock_eval(&spec, &region, &g)?;
            let product = product_over_cells(&spec, &partition, &g)?;
            let defect = factorizability_defect(&spec, &region, &partition, &g)?;
            (
                json!({
                    "whole": complex_to_json(&whole),
                    "product": complex_to_json(&product),
                    "defect": defect,
                }),
                true,
            )
        }
        Verb::Nogo => {
            let n = cli.n.ok_or_else(|| Error::Parse("nogo needs --n".into()))?;
            let mut cfg = NogoConfig::new(n, cli.trials, cli.seed);
            cfg.cells = cli.cells;
            cfg.tolerance = cli.tolerance;
            cfg.a2 = cli
                .a2
                .clone()
                .or_else(|| cli.quad_a.as_ref().map(|a| a * Rational::from_integer(2.into())));
            let report = nogo_experiment(&cfg)?;
            let mut v = to_value(&report);
            if let Some(a2) = &cfg.a2 {
                v["a2"] = json!(format_rational(a2));
            }
            (v, report.passed)
        }
        Verb::Gram => {
            let spec = state_from_json(field(p, "state")?)?;
            let region = region_from_json(field(p, "region")?)?;
            let elems = field(p, "elems")?
                .as_array()
                .ok_or_else(|| Error::Parse("\"elems\" must be a list".into()))?
                .iter()
                .map(group_from_json)
                .collect::<polyheis::Result<Vec<_>>>()?;
            let min = gram_psd_check(&spec, &elems, &region)?;
            let psd = min >= -cli.tolerance.unwrap_or(1e-9);
            (json!({"min_eigenvalue": min, "psd": psd}), psd)
        }
        Verb::Oracle => {
            let g = group_from_json(field(p, "g")?)?;
            let h = group_from_json(field(p, "h")?)?;
            let n = match p.get("n") {
                Some(v) => usize_from_json(v)?,
                None => g.degree_bound(),
            };
            let trunc = match p.get("truncation") {
                Some(v) => usize_from_json(v)?,
                None => 64,
            };
            let report = oracle_matrix_check(n, &g, &h, trunc)?;
            let ok = report.within(cli.tolerance.unwrap_or(1e-3));
            (to_value(&report), ok)
        }
    })
}
