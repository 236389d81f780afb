//! The analysis demos. Rationals go in and come out as `"p/q"` strings.

use anyhow::{anyhow, bail, Result};
use serde_json::{json, Value};

use realiz::analysis::{
    cauchy_to_dedekind, compare, fta_root_exact, matrix_inverse, seq_dichotomy, seq_sqrt, sqrt_residual,
    lpo_probe, Comparison, ComplexC, LpoOutcome, GaussianRat, Matrix, Polynomial, Rat, RatMatrix,
};

use crate::inputs::{element_value, gaussian, list, rational, real};
use crate::{Config, DemoKind, Report};

fn rat_str(q: &Rat) -> Value {
    Value::String(q.to_string())
}

fn gauss_str(z: &GaussianRat) -> Value {
    json!([z.re.to_string(), z.im.to_string()])
}

/// A list of pairs, or a single pair.
fn pairs(input: &Value) -> Result<Vec<(Value, Value)>> {
    let items = list(input, "pairs")?;
    let as_pair = |v: &Value| -> Result<(Value, Value)> {
        match v.as_array().map(Vec::as_slice) {
            Some([a, b]) => Ok((a.clone(), b.clone())),
            _ => Err(anyhow!("expected a pair [a, b], got {v}")),
        }
    };
    if items.len() == 2 && !items[0].is_array() {
        return Ok(vec![as_pair(input)?]);
    }
    items.iter().map(as_pair).collect()
}

fn one_or_many(input: &Value) -> Vec<Value> {
    match input {
        Value::Array(items) => items.clone(),
        other => vec![other.clone()],
    }
}

pub fn run(kind: DemoKind, input: &Value, cfg: &Config) -> Result<Report> {
    match kind {
        DemoKind::Dichotomy => {
            let ps = pairs(input)?;
            let reals = ps.iter().map(|(a, b)| Ok((real(a)?, real(b)?))).collect::<Result<Vec<_>>>()?;
            let bits = seq_dichotomy(&reals, cfg.depth)?;
            let rows: Vec<Value> = ps
                .iter()
                .zip(&bits)
                .map(|((a, b), bit)| {
                    let claim = if *bit == 0 { "a <= b" } else { "a >= b" };
                    json!({"a": a, "b": b, "bit": bit, "claim": claim})
                })
                .collect();
            Ok(Report::done(json!({"depth": cfg.depth, "bits": bits, "pairs": rows})))
        }
        DemoKind::Trichotomy => {
            if let Some(seq) = input.get("lpo") {
                let outcome = lpo_probe(&element_value(seq)?, cfg.fuel)?;
                let open = matches!(outcome, LpoOutcome::AllZeroSoFar { .. });
                return Ok(Report { body: json!({"fuel": cfg.fuel, "sequence": seq, "lpo": outcome}), open });
            }
            let ps = pairs(input)?;
            let mut open = false;
            let mut rows = Vec::new();
            for (a, b) in &ps {
                let c = compare(&real(a)?, &real(b)?, cfg.fuel);
                open |= matches!(c, Comparison::EqSoFar { .. });
                rows.push(json!({"a": a, "b": b, "comparison": c}));
            }
            Ok(Report { body: json!({"fuel": cfg.fuel, "pairs": rows}), open })
        }
        DemoKind::Dedekind => {
            let mut out = Vec::new();
            for v in one_or_many(input) {
                let path = cauchy_to_dedekind(&real(&v)?, cfg.depth)?;
                let lower: Vec<Value> = path.lower().into_iter().map(rat_str).collect();
                let upper: Vec<Value> = path.upper().into_iter().map(rat_str).collect();
                out.push(json!({"input": v, "path": path, "lower": lower, "upper": upper}));
            }
            Ok(Report::done(json!({"depth": cfg.depth, "cuts": out})))
        }
        DemoKind::Sqrt => {
            let zs = one_or_many(input).iter().map(gaussian).collect::<Result<Vec<_>>>()?;
            let inputs: Vec<ComplexC> = zs.iter().cloned().map(ComplexC::from_gaussian).collect();
            let outputs = seq_sqrt(&inputs);
            let s = cfg.stage;
            let rows: Vec<Value> = zs
                .iter()
                .zip(inputs.iter().zip(&outputs))
                .map(|(z, (zc, w))| {
                    let (re, im) = sqrt_residual(zc, w, s);
                    json!({"input": gauss_str(z), "root": gauss_str(&w.at(s)), "residual": [re.to_string(), im.to_string()]})
                })
                .collect();
            Ok(Report::done(json!({"stage": s, "roots": rows})))
        }
        DemoKind::Fta => {
            let coeffs = match input.get("coefficients") {
                Some(c) => list(c, "coefficients")?,
                None => list(input, "coefficients")?,
            };
            if coeffs.is_empty() {
                bail!("a monic polynomial needs at least one coefficient below the leading 1");
            }
            let tail = coeffs.iter().map(gaussian).collect::<Result<Vec<_>>>()?;
            let p = Polynomial::monic(&tail);
            let root = fta_root_exact(&p, cfg.stage)?;
            let value = p.eval(&root.root);
            let norm2 = value.re.clone() * &value.re + value.im.clone() * &value.im;
            Ok(Report::done(json!({
                "degree": p.degree(),
                "coefficients": p.coeffs().iter().map(gauss_str).collect::<Vec<_>>(),
                "root": root,
                "value": gauss_str(&value),
                "value_norm_squared": rat_str(&norm2),
            })))
        }
        DemoKind::Cramer => {
            let rows = list(input, "rows")?
                .iter()
                .map(|r| list(r, "entries")?.iter().map(rational).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let m: RatMatrix = Matrix::from_rows(rows)?;
            let inv = matrix_inverse(&m)?;
            let show = |m: &RatMatrix| -> Vec<Vec<Value>> { m.rows().iter().map(|r| r.iter().map(rat_str).collect()).collect() };
            let identity = m.mul(&inv)? == Matrix::identity(m.size());
            Ok(Report::done(json!({
                "matrix": show(&m),
                "determinant": rat_str(&m.determinant()),
                "inverse": show(&inv),
                "product_is_identity": identity,
            })))
        }
    }
}
