//! Semantic realizability on concrete instances: desk-scale truth, checking
//! that an element realizes a formula, the canonical self-realizers `ω_B`, and
//! the choice-extraction recipes.
//!
//! Every check is bounded. Number quantifiers are checked below `depth`,
//! function quantifiers against a finite [`Battery`], and compact sets on the
//! admissible nodes of length `fan_depth`; a `Verified` answer means verified
//! within those bounds.

mod eval;
mod extract;
mod omega;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::classify::{bounded_expansion, in_class, BoundedExpansion, FormulaClass, Rejection};
use crate::compact::{CompactCode, CompactError};
use crate::formula::Formula;
use crate::k2::{apply_fun, constant_map_value, defined_to_depth, proj, tail, Baire, EvalFault, Side};
use crate::nat::{self, nat};
use crate::translate::Mode;

pub use eval::{eval_fun_at, eval_num, eval_qf, Environment, REC_LIMIT};
pub use extract::{extract_choice, extract_choice_lrf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// Prefix interrogation limit for each application.
    pub fuel: u64,
    /// Instances checked for `∀x`, and the depth of Π⁰₁ certification.
    pub depth: u64,
    /// Length of the nodes whose members represent a compact set.
    pub fan_depth: u64,
    /// Candidates tried for an unbounded number witness.
    pub search: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { fuel: 64, depth: 8, fan_depth: 4, search: 256 }
    }
}

/// The finite family of elements standing in for all of Baire space.
#[derive(Clone, Debug)]
pub struct Battery {
    pub seed: u64,
    elements: Arc<Vec<(String, Baire)>>,
}

impl Battery {
    /// `zeros`, `ones`, `identity`, `const:2` and four seeded random tables.
    pub fn standard(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut elements: Vec<(String, Baire)> = ["zeros", "ones", "identity", "const:2"]
            .iter()
            .map(|n| (n.to_string(), Baire::named(n).expect("built-in element")))
            .collect();
        for i in 0..4 {
            let len = rng.gen_range(1..=12);
            let values: Vec<u64> = (0..len).map(|_| rng.gen_range(0..4)).collect();
            let default = rng.gen_range(0..4);
            elements.push((format!("random:{seed}:{i}"), Baire::table(&values, default)));
        }
        Battery { seed, elements: Arc::new(elements) }
    }

    pub fn new(seed: u64, elements: Vec<(String, Baire)>) -> Self {
        Battery { seed, elements: Arc::new(elements) }
    }

    pub fn elements(&self) -> &[(String, Baire)] {
        &self.elements
    }
}

/// Three-valued desk-scale truth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    fn and(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::False, _) | (_, Truth::False) => Truth::False,
            (Truth::True, Truth::True) => Truth::True,
            _ => Truth::Unknown,
        }
    }

    fn implies(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::False, _) | (_, Truth::True) => Truth::True,
            (Truth::True, Truth::False) => Truth::False,
            _ => Truth::Unknown,
        }
    }

    fn from_bool(b: bool) -> Truth {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum CheckResult {
    Verified,
    Refuted { path: String, clause: String },
    Unknown { path: String, reason: String },
}

impl CheckResult {
    pub fn is_verified(&self) -> bool {
        matches!(self, CheckResult::Verified)
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, CheckResult::Refuted { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("no value for free variable(s): {}", .0.join(", "))]
    Unassigned(Vec<String>),
    #[error("{} (at `{}`: {})", .0.clause, .0.path, .0.subformula)]
    NotInClass(Rejection),
    #[error("could not certify `{0}` within the search bounds")]
    NotCertified(String),
    #[error(transparent)]
    Fault(#[from] EvalFault),
    #[error(transparent)]
    Compact(#[from] CompactError),
}

impl WitnessError {
    /// The error as a fault inside a lazily evaluated element; probe faults
    /// pass through unchanged so that associates can ask for more input.
    pub(crate) fn into_fault(self) -> EvalFault {
        match self {
            WitnessError::Fault(e) | WitnessError::Compact(CompactError::Fault(e)) => e,
            other => EvalFault::Other(other.to_string()),
        }
    }
}

/// The checking context: interpretation, bounds and test battery.
#[derive(Clone, Debug)]
pub struct Checker {
    pub mode: Mode,
    pub bounds: Bounds,
    pub battery: Battery,
}

/// Path bookkeeping for refutations.
struct Trail(Vec<String>);

impl Trail {
    fn refuted(&self, clause: impl Into<String>) -> CheckResult {
        CheckResult::Refuted { path: self.0.join("/"), clause: clause.into() }
    }

    fn unknown(&self, reason: impl Into<String>) -> CheckResult {
        CheckResult::Unknown { path: self.0.join("/"), reason: reason.into() }
    }

    fn within(&mut self, step: impl Into<String>, k: impl FnOnce(&mut Trail) -> CheckResult) -> CheckResult {
        self.0.push(step.into());
        let r = k(self);
        self.0.pop();
        r
    }
}

/// Conjunction of checks: the first refutation wins, then the first unknown.
fn all(results: impl IntoIterator<Item = CheckResult>) -> CheckResult {
    let mut unknown = None;
    for r in results {
        match r {
            CheckResult::Verified => {}
            CheckResult::Refuted { .. } => return r,
            CheckResult::Unknown { .. } => {
                unknown.get_or_insert(r);
            }
        }
    }
    unknown.unwrap_or(CheckResult::Verified)
}

/// `∀z₁…∀z_k A` split into the variables and `A`, when `A` is quantifier-free.
pub(crate) fn universal_prefix(f: &Formula) -> Option<(Vec<String>, &Formula)> {
    let mut vars = Vec::new();
    let mut g = f;
    while let Formula::ForallNum(z, body) = g {
        vars.push(z.clone());
        g = body;
    }
    g.is_quantifier_free().then_some((vars, g))
}

impl Checker {
    pub fn new(mode: Mode, bounds: Bounds, battery: Battery) -> Self {
        Checker { mode, bounds, battery }
    }

    /// The hypothesis class of the interpretation: N_K or N_L.
    pub fn self_realizing_class(&self) -> FormulaClass {
        match self.mode {
            Mode::Kleene => FormulaClass::NK,
            Mode::Lifschitz => FormulaClass::NL,
        }
    }

    fn covered(&self, f: &Formula, env: &Environment) -> Result<(), WitnessError> {
        let missing = env.missing(f);
        if missing.is_empty() {
            Ok(())
        } else {
            Err(WitnessError::Unassigned(missing))
        }
    }

    /// Desk-scale truth of `f` in `env`.
    pub fn decide(&self, f: &Formula, env: &Environment) -> Result<Truth, WitnessError> {
        self.covered(f, env)?;
        Ok(self.truth(&f.desugar(), env))
    }

    pub(crate) fn truth(&self, f: &Formula, env: &Environment) -> Truth {
        use Formula::*;
        match f {
            Eq(..) => eval_qf(f, env).map_or(Truth::Unknown, Truth::from_bool),
            And(a, b) => {
                let l = self.truth(a, env);
                if l == Truth::False {
                    return l;
                }
                l.and(self.truth(b, env))
            }
            Imp(a, b) => {
                let h = self.truth(a, env);
                if h == Truth::False {
                    return Truth::True;
                }
                h.implies(self.truth(b, env))
            }
            ForallNum(x, a) => {
                let mut acc = Truth::True;
                for v in 0..self.bounds.depth {
                    acc = acc.and(self.truth(a, &env.with_num(x, nat(v))));
                    if acc == Truth::False {
                        break;
                    }
                }
                acc
            }
            ForallFun(xi, a) => {
                let mut acc = Truth::True;
                for (_, b) in self.battery.elements() {
                    acc = acc.and(self.truth(a, &env.with_fun(xi, b.clone())));
                    if acc == Truth::False {
                        break;
                    }
                }
                acc
            }
            ExistsNum(x, a) => {
                if let Some(BoundedExpansion::Num { bound, body, .. }) = bounded_expansion(f) {
                    let Ok(t) = eval_num(bound, env) else { return Truth::Unknown };
                    let exhaustive = t <= nat(self.bounds.search);
                    let top = nat::to_u64(&t).unwrap_or(u64::MAX).min(self.bounds.search);
                    let mut any_unknown = !exhaustive;
                    for v in 0..=top {
                        match self.truth(body, &env.with_num(x, nat(v))) {
                            Truth::True => return Truth::True,
                            Truth::Unknown => any_unknown = true,
                            Truth::False => {}
                        }
                    }
                    return if any_unknown { Truth::Unknown } else { Truth::False };
                }
                for v in 0..=self.bounds.search {
                    if self.truth(a, &env.with_num(x, nat(v))) == Truth::True {
                        return Truth::True;
                    }
                }
                Truth::Unknown
            }
            ExistsFun(xi, a) => {
                if let Some(b @ BoundedExpansion::Fun { body, .. }) = bounded_expansion(f) {
                    if let Some((quants, matrix)) = universal_prefix(body) {
                        let tree = self.witness_tree(&b, &quants, matrix, env);
                        return match tree.leftmost_path(self.bounds.depth) {
                            Ok(Some(_)) => Truth::True,
                            Ok(None) => Truth::False,
                            Err(_) => Truth::Unknown,
                        };
                    }
                }
                for (_, b) in self.battery.elements() {
                    if self.truth(a, &env.with_fun(xi, b.clone())) == Truth::True {
                        return Truth::True;
                    }
                }
                Truth::Unknown
            }
            _ => self.truth(&f.desugar(), env),
        }
    }

    /// Whether `alpha` realizes `f` in `env` under the checker's interpretation.
    pub fn realizes(&self, alpha: &Baire, f: &Formula, env: &Environment) -> Result<CheckResult, WitnessError> {
        self.covered(f, env)?;
        Ok(self.check(alpha, &f.desugar(), env, &mut Trail(Vec::new())))
    }

    fn check(&self, alpha: &Baire, f: &Formula, env: &Environment, trail: &mut Trail) -> CheckResult {
        use Formula::*;
        match f {
            Eq(..) => match eval_qf(f, env) {
                Ok(true) => CheckResult::Verified,
                Ok(false) => trail.refuted(format!("atomic formula is false: {f}")),
                Err(e) => trail.unknown(e.to_string()),
            },
            And(a, b) => all([
                trail.within("and.0", |t| self.check(&proj(alpha, Side::Fst), a, env, t)),
                trail.within("and.1", |t| self.check(&proj(alpha, Side::Snd), b, env, t)),
            ]),
            Imp(a, b) => self.check_implication(alpha, a, b, env, trail),
            ForallNum(x, a) => all((0..self.bounds.depth).map(|v| {
                trail.within(format!("forall-num {x}={v}"), |t| {
                    self.check(&crate::k2::component(alpha, v), a, &env.with_num(x, nat(v)), t)
                })
            })),
            ForallFun(xi, a) => all(self.battery.elements().iter().map(|(name, beta)| {
                trail.within(format!("forall-fun {xi}={name}"), |t| {
                    self.check_application(alpha, beta, a, &env.with_fun(xi, beta.clone()), t)
                })
            })),
            ExistsNum(x, a) => match self.mode {
                Mode::Kleene => match alpha.at(0) {
                    Ok(w) => trail.within(format!("exists-num {x}:={w}"), |t| {
                        self.check(&tail(alpha), a, &env.with_num(x, w.clone()), t)
                    }),
                    Err(e) => trail.unknown(e.to_string()),
                },
                Mode::Lifschitz => self.check_compact(alpha, trail, |beta, t| match beta.at(0) {
                    Ok(w) => t.within(format!("exists-num {x}:={w}"), |t| {
                        self.check(&tail(beta), a, &env.with_num(x, w.clone()), t)
                    }),
                    Err(e) => t.unknown(e.to_string()),
                }),
            },
            ExistsFun(xi, a) => {
                let witness = |beta: &Baire, t: &mut Trail| {
                    t.within(format!("exists-fun {xi}"), |t| {
                        let env2 = env.with_fun(xi, proj(beta, Side::Fst));
                        self.check(&proj(beta, Side::Snd), a, &env2, t)
                    })
                };
                match self.mode {
                    Mode::Kleene => witness(alpha, trail),
                    Mode::Lifschitz => self.check_compact(alpha, trail, witness),
                }
            }
            _ => self.check(alpha, &f.desugar(), env, trail),
        }
    }

    /// `α|β↓ ∧ α|β ⊩ B`, with definedness checked below `depth`.
    fn check_application(&self, alpha: &Baire, beta: &Baire, b: &Formula, env: &Environment, trail: &mut Trail) -> CheckResult {
        match defined_to_depth(alpha, beta, self.bounds.fuel, self.bounds.depth) {
            Ok(true) => self.check(&apply_fun(alpha, beta, self.bounds.fuel), b, env, trail),
            Ok(false) => trail.unknown(format!(
                "application undefined within fuel {} below position {}",
                self.bounds.fuel, self.bounds.depth
            )),
            Err(e) => trail.unknown(e.to_string()),
        }
    }

    /// Hypotheses in the self-realizing class are realized by `ω_A` exactly when
    /// true; others are sampled from the battery.
    fn check_implication(&self, alpha: &Baire, a: &Formula, b: &Formula, env: &Environment, trail: &mut Trail) -> CheckResult {
        // `α|β` is the same element for every `β`
        if let Some(c) = constant_map_value(alpha) {
            let r = trail.within("imp.1 b=any", |t| self.check(c, b, env, t));
            if r.is_verified() {
                return r;
            }
        }
        let hyps: Vec<(String, Baire)> = if in_class(a, self.self_realizing_class()) {
            match self.truth(a, env) {
                Truth::False => return CheckResult::Verified,
                Truth::Unknown => return trail.unknown(format!("truth of hypothesis not certified: {a}")),
                Truth::True => match self.omega_core(a, env) {
                    Ok(w) => vec![("omega".to_string(), w)],
                    Err(e) => return trail.unknown(e.to_string()),
                },
            }
        } else {
            self.battery
                .elements()
                .iter()
                .filter(|(_, beta)| self.check(beta, a, env, &mut Trail(Vec::new())).is_verified())
                .cloned()
                .collect()
        };
        all(hyps.iter().map(|(name, beta)| {
            trail.within(format!("imp.1 b={name}"), |t| self.check_application(alpha, beta, b, env, t))
        }))
    }

    /// `[α] ≠ ∅ ∧ ∀β ∈ [α] P(β)`: nonemptiness to `depth + fan_depth`, and `P` on one
    /// member through each admissible node of length `fan_depth`. Nodes that die
    /// out before twice that depth are skipped when their member is inconclusive.
    fn check_compact(
        &self,
        alpha: &Baire,
        trail: &mut Trail,
        mut member: impl FnMut(&Baire, &mut Trail) -> CheckResult,
    ) -> CheckResult {
        let code = CompactCode::new(alpha.clone());
        let confirm = self.bounds.depth + self.bounds.fan_depth;
        match code.leftmost_path(confirm) {
            Ok(Some(_)) => {}
            Ok(None) => return trail.refuted(format!("compact set is empty at depth {confirm}")),
            Err(e) => return trail.unknown(e.to_string()),
        }
        let nodes = match code.nodes_at_depth(self.bounds.fan_depth) {
            Ok(n) => n,
            Err(e) => return trail.unknown(e.to_string()),
        };
        let mut results = Vec::new();
        for (i, node) in nodes.iter().enumerate() {
            let r = match code.member_through(node, confirm) {
                Ok(Some(beta)) => trail.within(format!("member {i}"), |t| member(&beta, t)),
                Ok(None) => continue,
                Err(e) => trail.unknown(e.to_string()),
            };
            // a node with no admissible extension deeper down has no members
            if matches!(r, CheckResult::Unknown { .. }) && matches!(code.extend_leftmost(node, 2 * confirm), Ok(None)) {
                continue;
            }
            if r.is_refuted() {
                return r;
            }
            results.push(r);
        }
        all(results)
    }
}

#[cfg(test)]
mod tests;
