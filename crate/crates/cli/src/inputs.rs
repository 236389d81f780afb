//! Reading elements, codes, environments and numbers from the command line.
//!
//! An element is given as a built-in name, a JSON table or a path to a file
//! holding either. Tables are `[v0, v1, …]` (default 0 past the end) or
//! `{"values": [...], "default": d}`.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use num_traits::ToPrimitive;
use serde_json::Value;

use realiz::analysis::{parse_rat, CauchyReal, GaussianRat, Rat};
use realiz::compact::CompactCode;
use realiz::formula::{parse, Formula};
use realiz::k2::{associate_of, pair_fun, Baire, ContinuousMap};
use realiz::nat::{nat, Nat};
use realiz::witness::Environment;

/// A file's contents, or the argument itself when no such file exists.
pub fn text_or_file(arg: &str) -> Result<String> {
    let p = Path::new(arg);
    if p.is_file() {
        fs::read_to_string(p).with_context(|| format!("reading {arg}"))
    } else {
        Ok(arg.to_string())
    }
}

pub fn read_formula(path: &str) -> Result<Formula> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    parse(&text).map_err(|e| anyhow!("{path}: {e}"))
}

pub fn json_arg(arg: &str) -> Result<Value> {
    let text = text_or_file(arg)?;
    serde_json::from_str(&text).with_context(|| format!("`{arg}` is not JSON or a JSON file"))
}

fn to_nat(v: &Value) -> Result<Nat> {
    match v {
        Value::Number(n) => n.as_u64().map(nat).ok_or_else(|| anyhow!("{n} is not a natural number")),
        Value::String(s) => s.parse().map_err(|_| anyhow!("`{s}` is not a natural number")),
        other => bail!("expected a natural number, got {other}"),
    }
}

fn table(values: &[Value], default: &Value) -> Result<Baire> {
    let vals = values.iter().map(to_nat).collect::<Result<Vec<_>>>()?;
    let d = to_nat(default)?;
    Ok(Baire::new(format!("table{}", Value::Array(values.to_vec())), move |n| {
        Ok(n.to_usize().and_then(|i| vals.get(i).cloned()).unwrap_or_else(|| d.clone()))
    }))
}

/// Continuous maps available to `assoc:` and `choice:` elements.
pub fn named_map(name: &str) -> Result<ContinuousMap> {
    Ok(match name {
        "identity" => ContinuousMap::identity(),
        "fst" => ContinuousMap::fst(),
        "swap-pair" => ContinuousMap::swap_pair(),
        "succ" => ContinuousMap::pointwise("succ", |n: &Nat| n + 1u32),
        "double" => ContinuousMap::pointwise("double", |n: &Nat| n * 2u32),
        "zeros" => ContinuousMap::constant(Baire::zeros()),
        _ => bail!("unknown map `{name}` (identity, fst, swap-pair, succ, double, zeros)"),
    })
}

/// `Λξ.Λγ.⟨F(ξ), 0⟩`, a realizer of `∀ξ(B → ∃ζ A)` whenever `F` is a choice function for `A`.
pub fn choice_realizer(f: ContinuousMap) -> Baire {
    let inner = ContinuousMap::traced(format!("choice:{}", f.label()), move |xi: &Baire, n: &Nat| {
        let concl = pair_fun(&f.apply(xi), &Baire::zeros());
        associate_of(&ContinuousMap::constant(concl)).get(n)
    });
    associate_of(&inner)
}

/// The Lifschitz counterpart: `Λξ.Λγ.[{⟨F(ξ), 0⟩}]`, a singleton set of realizers.
pub fn singleton_choice_realizer(f: ContinuousMap) -> Baire {
    let inner = ContinuousMap::traced(format!("lchoice:{}", f.label()), move |xi: &Baire, n: &Nat| {
        let set = CompactCode::singleton(&pair_fun(&f.apply(xi), &Baire::zeros())).code;
        associate_of(&ContinuousMap::constant(set)).get(n)
    });
    associate_of(&inner)
}

pub fn element_value(v: &Value) -> Result<Baire> {
    match v {
        Value::Array(vals) => table(vals, &Value::from(0)),
        Value::Object(m) => {
            let vals = m.get("values").and_then(Value::as_array).ok_or_else(|| anyhow!("table without `values`"))?;
            table(vals, m.get("default").unwrap_or(&Value::from(0)))
        }
        Value::String(s) => named_element(s),
        other => bail!("not an element: {other}"),
    }
}

fn named_element(name: &str) -> Result<Baire> {
    if let Some(b) = Baire::named(name) {
        return Ok(b);
    }
    if let Some(code) = name.strip_prefix("code:") {
        return Ok(named_code(code)?.code);
    }
    if let Some(m) = name.strip_prefix("assoc:") {
        return Ok(associate_of(&named_map(m)?));
    }
    if let Some(m) = name.strip_prefix("choice:") {
        return Ok(choice_realizer(named_map(m)?));
    }
    if let Some(m) = name.strip_prefix("lchoice:") {
        return Ok(singleton_choice_realizer(named_map(m)?));
    }
    bail!("unknown element `{name}`")
}

/// An element from a name, inline JSON or a JSON file.
pub fn element(arg: &str) -> Result<Baire> {
    let text = text_or_file(arg)?;
    let t = text.trim();
    if t.starts_with('[') || t.starts_with('{') {
        element_value(&serde_json::from_str(t).with_context(|| format!("parsing `{t}`"))?)
    } else {
        named_element(t)
    }
}

fn named_code(name: &str) -> Result<CompactCode> {
    CompactCode::named(name).ok_or_else(|| {
        anyhow!("unknown code `{name}` (full-binary, no-consecutive-ones, only-ones, cut-off:N, singleton:ELEM)")
    })
}

/// A compact code: a built-in name, `{"bound": B, "forbidden": [[...], ...]}`
/// for sequences below an element `B` avoiding the listed windows, or any
/// element read directly as a code.
pub fn code(arg: &str) -> Result<CompactCode> {
    let text = text_or_file(arg)?;
    let t = text.trim();
    if let Some(c) = CompactCode::named(t) {
        return Ok(c);
    }
    if t.starts_with('{') {
        let v: Value = serde_json::from_str(t)?;
        if let Some(forbidden) = v.get("forbidden") {
            let bound = match v.get("bound") {
                None => Baire::ones(),
                Some(Value::Number(n)) => Baire::constant(n.as_u64().ok_or_else(|| anyhow!("bad bound {n}"))?),
                Some(b) => element_value(b)?,
            };
            let windows: Vec<Vec<Nat>> = forbidden
                .as_array()
                .ok_or_else(|| anyhow!("`forbidden` must be a list of windows"))?
                .iter()
                .map(|w| w.as_array().ok_or_else(|| anyhow!("window {w} is not a list"))?.iter().map(to_nat).collect())
                .collect::<Result<_>>()?;
            return Ok(CompactCode::from_predicate("forbidden-windows", bound, move |s| {
                !windows.iter().any(|w| !w.is_empty() && s.windows(w.len()).any(|x| x == w.as_slice()))
            }));
        }
    }
    Ok(CompactCode::new(element(t)?))
}

/// `{"x": 3, "xi": [1, 2], "eta": "identity"}`: numbers bind number
/// variables, anything else binds a function variable.
pub fn environment(arg: Option<&str>) -> Result<Environment> {
    let mut env = Environment::new();
    let Some(arg) = arg else { return Ok(env) };
    let v = json_arg(arg)?;
    let m = v.as_object().ok_or_else(|| anyhow!("the environment must be a JSON object"))?;
    for (name, value) in m {
        match value {
            Value::Number(_) => env.set_num(name, to_nat(value)?),
            _ => env.set_fun(name, element_value(value).with_context(|| format!("variable `{name}`"))?),
        }
    }
    Ok(env)
}

pub fn rational(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s).ok_or_else(|| anyhow!("`{s}` is not a rational p/q")),
        Value::Number(n) => n
            .as_i64()
            .map(|k| Rat::from_integer(k.into()))
            .ok_or_else(|| anyhow!("{n} is not an integer; write rationals as \"p/q\"")),
        other => bail!("expected a rational, got {other}"),
    }
}

/// `"p/q"` or `{"sqrt": "p/q"}`.
pub fn real(v: &Value) -> Result<CauchyReal> {
    if let Some(q) = v.get("sqrt") {
        let q = rational(q)?;
        if q < Rat::from_integer(0.into()) {
            bail!("square root of a negative rational");
        }
        return Ok(CauchyReal::sqrt_of(q));
    }
    Ok(CauchyReal::from_rat(rational(v)?))
}

/// `[re, im]` or a plain rational.
pub fn gaussian(v: &Value) -> Result<GaussianRat> {
    match v {
        Value::Array(parts) if parts.len() == 2 => Ok(GaussianRat::new(rational(&parts[0])?, rational(&parts[1])?)),
        _ => Ok(GaussianRat::new(rational(v)?, Rat::from_integer(0.into()))),
    }
}

pub fn list(v: &Value, what: &str) -> Result<Vec<Value>> {
    v.as_array().cloned().ok_or_else(|| anyhow!("expected a list of {what}"))
}
