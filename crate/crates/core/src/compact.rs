//! Compact-set codes `[α]`: `fst α` bounds each value and `snd α` tests finite
//! prefixes, with `ξ ∈ [α]` iff `∀n(ξ(n) ≤ fst α(n) ∧ snd α(ξ̄n) = 0)`.
//!
//! Everything here is finitary: nonemptiness is certified to a depth, and the
//! image operator works on the finitely many admissible prefixes of that depth.

use std::collections::BTreeSet;
use std::sync::{Arc, Mutex};

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::k2::{apply_num, cons, pack_seq, pair_fun, proj, Baire, Completion, EvalFault, PartialResult, Side};
use crate::nat::{self, nat, Nat};

/// Largest bound value a search will branch over.
pub const MAX_BRANCHING: u64 = 1 << 16;

/// Limit on the number of nodes a single enumeration visits.
pub const NODE_BUDGET: usize = 1 << 20;

/// Positions a greedy member completion will compute before giving up.
pub const GREEDY_CAP: usize = 1 << 12;

/// Levels of lookahead for each greedy step.
pub const GREEDY_LOOKAHEAD: u64 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompactError {
    #[error("code {index} has no admissible node at depth {depth}")]
    Empty { index: usize, depth: u64 },
    #[error("bound {bound} at level {level} is too large to branch over")]
    BoundTooLarge { level: u64, bound: Nat },
    #[error("enumeration exceeded {0} nodes")]
    NodeBudget(usize),
    #[error(transparent)]
    Fault(#[from] EvalFault),
}

#[derive(Clone, Debug)]
pub struct CompactCode {
    pub code: Baire,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "depth", rename_all = "kebab-case")]
pub enum Nonemptiness {
    NonemptyToDepth(u64),
    EmptyAtDepth(u64),
}

/// The admissible nodes of a code up to some depth, level by level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTreeView {
    pub depth: u64,
    pub bounds: Vec<Nat>,
    pub levels: Vec<Vec<Vec<Nat>>>,
}

fn accept(ok: bool) -> Nat {
    if ok {
        Nat::zero()
    } else {
        nat(1)
    }
}

impl CompactCode {
    pub fn new(code: Baire) -> Self {
        CompactCode { code }
    }

    pub fn from_parts(bound: &Baire, test: &Baire) -> Self {
        CompactCode { code: pair_fun(bound, test) }
    }

    /// Code from a bound and a predicate on finite sequences. The test also
    /// rejects entries above the bound, so the result satisfies the tree
    /// condition whenever the predicate is prefix-closed.
    pub fn from_predicate(
        label: &str,
        bound: Baire,
        admissible: impl Fn(&[Nat]) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self::from_test(label, bound, move |s| Ok(admissible(s)))
    }

    /// As [`CompactCode::from_predicate`], with a predicate that may fault.
    pub fn from_test(
        label: &str,
        bound: Baire,
        admissible: impl Fn(&[Nat]) -> Result<bool, EvalFault> + Send + Sync + 'static,
    ) -> Self {
        let b = bound.clone();
        let test = Baire::new(format!("test:{label}"), move |c| {
            let Some(s) = nat::decode(c) else { return Ok(nat(1)) };
            for (i, v) in s.iter().enumerate() {
                if *v > b.at(i as u64)? {
                    return Ok(nat(1));
                }
            }
            Ok(accept(admissible(&s)?))
        });
        Self::from_parts(&bound, &test)
    }

    /// The same code, able to complete admissible prefixes to members.
    pub fn with_completion(
        self,
        completion: impl Fn(&[Nat]) -> Result<Option<Baire>, EvalFault> + Send + Sync + 'static,
    ) -> Self {
        let c: Arc<Completion> = Arc::new(completion);
        CompactCode { code: self.code.with_completion(c) }
    }

    /// Bound 1, every binary sequence admissible.
    pub fn full_binary() -> Self {
        Self::from_predicate("full", Baire::ones(), |_| true)
    }

    /// Binary sequences without two consecutive 1s.
    pub fn no_consecutive_ones() -> Self {
        Self::from_predicate("no-11", Baire::ones(), |s| {
            s.windows(2).all(|w| !(w[0] == nat(1) && w[1] == nat(1)))
        })
    }

    /// The single binary sequence of all 1s.
    pub fn only_ones() -> Self {
        Self::from_predicate("only-1s", Baire::ones(), |s| s.iter().all(|x| *x == nat(1)))
    }

    /// `{ξ}`
    pub fn singleton(xi: &Baire) -> Self {
        let x = xi.clone();
        let test = Baire::new(format!("test:={}", xi.label()), move |c| {
            let Some(s) = nat::decode(c) else { return Ok(nat(1)) };
            for (i, v) in s.iter().enumerate() {
                if x.at(i as u64)? != *v {
                    return Ok(nat(1));
                }
            }
            Ok(Nat::zero())
        });
        let member = xi.clone();
        Self::from_parts(xi, &test).with_completion(move |_| Ok(Some(member.clone())))
    }

    /// A code whose test rejects every sequence of length `len` or more.
    pub fn cut_off(len: usize) -> Self {
        Self::from_predicate(&format!("cut-{len}"), Baire::ones(), move |s| s.len() < len)
    }

    pub fn named(name: &str) -> Option<Self> {
        match name {
            "full-binary" => Some(Self::full_binary()),
            "no-consecutive-ones" => Some(Self::no_consecutive_ones()),
            "only-ones" => Some(Self::only_ones()),
            _ => {
                if let Some(n) = name.strip_prefix("cut-off:") {
                    n.parse().ok().map(Self::cut_off)
                } else {
                    name.strip_prefix("singleton:").and_then(Baire::named).map(|b| Self::singleton(&b))
                }
            }
        }
    }

    pub fn bound_elem(&self) -> Baire {
        proj(&self.code, Side::Fst)
    }

    pub fn test_elem(&self) -> Baire {
        proj(&self.code, Side::Snd)
    }

    pub fn bound(&self, level: u64) -> Result<Nat, EvalFault> {
        self.code.get(&nat(2 * level))
    }

    /// `snd α` at the code `c`.
    pub fn test(&self, c: &Nat) -> Result<Nat, EvalFault> {
        self.code.get(&((c << 1u32) + 1u32))
    }

    fn small_bound(&self, level: u64) -> Result<u64, CompactError> {
        let b = self.bound(level)?;
        b.to_u64()
            .filter(|&v| v <= MAX_BRANCHING)
            .ok_or(CompactError::BoundTooLarge { level, bound: b })
    }

    /// Every entry within its bound and every prefix, including `s` itself, passing the test.
    pub fn admissible(&self, s: &[Nat]) -> Result<bool, EvalFault> {
        let mut code = nat::empty_code();
        if !self.test(&code)?.is_zero() {
            return Ok(false);
        }
        for (i, v) in s.iter().enumerate() {
            if *v > self.bound(i as u64)? {
                return Ok(false);
            }
            code = nat::snoc(&code, v);
            if !self.test(&code)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The membership clauses for `n < d`, with the test also applied to `ξ̄d`.
    pub fn member_at_depth(&self, xi: &Baire, d: u64) -> Result<bool, EvalFault> {
        self.admissible(&xi.prefix(d)?)
    }

    /// Depth-first, smallest value first: the leftmost admissible node of length `d`.
    pub fn leftmost_path(&self, d: u64) -> Result<Option<Vec<Nat>>, CompactError> {
        let mut found = None;
        let mut budget = NODE_BUDGET;
        self.dfs(d, &mut Vec::new(), &nat::empty_code(), &mut budget, &mut |s| {
            found = Some(s.to_vec());
            false
        })?;
        Ok(found)
    }

    pub fn nonempty_to_depth(&self, d: u64) -> Result<Nonemptiness, CompactError> {
        Ok(match self.leftmost_path(d)? {
            Some(_) => Nonemptiness::NonemptyToDepth(d),
            None => Nonemptiness::EmptyAtDepth(d),
        })
    }

    /// All admissible nodes of length `d`, in lexicographic order.
    pub fn nodes_at_depth(&self, d: u64) -> Result<Vec<Vec<Nat>>, CompactError> {
        let mut out = Vec::new();
        let mut budget = NODE_BUDGET;
        self.dfs(d, &mut Vec::new(), &nat::empty_code(), &mut budget, &mut |s| {
            out.push(s.to_vec());
            true
        })?;
        Ok(out)
    }

    pub fn tree_view(&self, d: u64) -> Result<FiniteTreeView, CompactError> {
        let mut levels = vec![Vec::new(); d as usize + 1];
        let mut budget = NODE_BUDGET;
        let mut stack = vec![(Vec::new(), nat::empty_code())];
        if !self.test(&nat::empty_code())?.is_zero() {
            stack.clear();
        }
        while let Some((s, code)) = stack.pop() {
            budget = budget.checked_sub(1).ok_or(CompactError::NodeBudget(NODE_BUDGET))?;
            let level = s.len() as u64;
            if level < d {
                let b = self.small_bound(level)?;
                for v in (0..=b).rev() {
                    let child = nat::snoc(&code, &nat(v));
                    if self.test(&child)?.is_zero() {
                        let mut t = s.clone();
                        t.push(nat(v));
                        stack.push((t, child));
                    }
                }
            }
            levels[level as usize].push(s);
        }
        for l in &mut levels {
            l.sort();
        }
        let bounds = (0..d).map(|i| self.bound(i)).collect::<Result<_, _>>()?;
        Ok(FiniteTreeView { depth: d, bounds, levels })
    }

    /// The leftmost admissible extension of `prefix` to length `len`; `prefix`
    /// itself is assumed admissible.
    pub fn extend_leftmost(&self, prefix: &[Nat], len: u64) -> Result<Option<Vec<Nat>>, CompactError> {
        let mut found = None;
        let mut budget = NODE_BUDGET;
        let mut s = prefix.to_vec();
        self.dfs(len, &mut s, &nat::encode(prefix), &mut budget, &mut |t| {
            found = Some(t.to_vec());
            false
        })?;
        Ok(found)
    }

    /// A member through `prefix`, extended greedily: each further value is the
    /// least one that keeps an admissible node [`GREEDY_LOOKAHEAD`] levels
    /// deeper. Reading past [`GREEDY_CAP`] positions, or reaching a dead end,
    /// faults.
    pub fn greedy_member(&self, prefix: Vec<Nat>) -> Baire {
        let code = self.clone();
        let known = Mutex::new(prefix);
        Baire::new(format!("greedy({})", self.code.label()), move |n| {
            let Some(i) = n.to_usize().filter(|&i| i < GREEDY_CAP) else {
                return Err(EvalFault::Other(format!("greedy completion is limited to {GREEDY_CAP} positions")));
            };
            let mut s = known.lock().unwrap();
            while s.len() <= i {
                let target = s.len() as u64 + 1 + GREEDY_LOOKAHEAD;
                let next = match code.extend_leftmost(&s, target) {
                    Ok(Some(ext)) => ext[s.len()].clone(),
                    Ok(None) => {
                        return Err(EvalFault::Other(format!("no admissible continuation at level {}", s.len())))
                    }
                    Err(CompactError::Fault(e)) => return Err(e),
                    Err(e) => return Err(EvalFault::Other(e.to_string())),
                };
                s.push(next);
            }
            Ok(s[i].clone())
        })
    }

    /// A member of the set through `prefix`, confirmed admissible to length
    /// `confirm`. Uses the code's own completion, started from `prefix` (or its
    /// leftmost one-step extension when empty), when it carries one, and
    /// [`CompactCode::greedy_member`] otherwise. `None` when `prefix` is not
    /// admissible or no member through it survives to `confirm`.
    pub fn member_through(&self, prefix: &[Nat], confirm: u64) -> Result<Option<Baire>, CompactError> {
        if !self.admissible(prefix)? {
            return Ok(None);
        }
        if let Some(complete) = self.code.completion() {
            let Some(ext) = self.extend_leftmost(prefix, confirm.max(prefix.len() as u64).max(1))? else {
                return Ok(None);
            };
            let start = if prefix.is_empty() { &ext[..1] } else { prefix };
            return match complete(start)? {
                Some(m) if self.member_at_depth(&m, confirm.max(prefix.len() as u64))? => Ok(Some(m)),
                _ => Ok(None),
            };
        }
        Ok(self
            .extend_leftmost(prefix, confirm.max(prefix.len() as u64))?
            .map(|ext| self.greedy_member(ext)))
    }

    /// Visits admissible length-`d` extensions of `s`; `visit` returns whether to continue.
    fn dfs(
        &self,
        d: u64,
        s: &mut Vec<Nat>,
        code: &Nat,
        budget: &mut usize,
        visit: &mut dyn FnMut(&[Nat]) -> bool,
    ) -> Result<bool, CompactError> {
        *budget = budget.checked_sub(1).ok_or(CompactError::NodeBudget(NODE_BUDGET))?;
        if !self.test(code)?.is_zero() {
            return Ok(true);
        }
        let level = s.len() as u64;
        if level == d {
            return Ok(visit(s));
        }
        let b = self.small_bound(level)?;
        for v in 0..=b {
            let x = nat(v);
            let child = nat::snoc(code, &x);
            s.push(x);
            let go_on = self.dfs(d, s, &child, budget, visit)?;
            s.pop();
            if !go_on {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The tree condition `∀x,y(α(x⌢⟨y⟩) = 0 → α(x) = 0 ∧ y ≤ β(|x|))` for nodes
    /// `x` of length below `d` with entries up to one past their bound, and `y`
    /// up to one past its bound.
    pub fn is_tree(&self, d: u64) -> Result<bool, CompactError> {
        let mut budget = NODE_BUDGET;
        let mut stack = vec![(0u64, nat::empty_code())];
        while let Some((len, code)) = stack.pop() {
            budget = budget.checked_sub(1).ok_or(CompactError::NodeBudget(NODE_BUDGET))?;
            if len >= d {
                continue;
            }
            let parent_ok = self.test(&code)?.is_zero();
            let b = self.small_bound(len)?;
            for y in 0..=b + 1 {
                let child = nat::snoc(&code, &nat(y));
                if self.test(&child)?.is_zero() && (!parent_ok || y > b) {
                    return Ok(false);
                }
                stack.push((len + 1, child));
            }
        }
        Ok(true)
    }
}

/// The image of a code under `φ|·`, valid for members up to `depth`.
#[derive(Clone, Debug)]
pub struct ImageCode {
    pub code: CompactCode,
    pub depth: u64,
    /// The image prefixes of length `depth`, sorted.
    pub images: Vec<Vec<Nat>>,
}

/// The positions of `φ|ξ` determined by the finite prefix `s`, in order, up to `max`.
fn determined_prefix(phi: &Baire, s: &[Nat], max: u64, fuel: u64) -> Result<Vec<Nat>, CompactError> {
    let (probe, id) = Baire::probe(s.to_vec());
    let mut out = Vec::new();
    for n in 0..max {
        match apply_num(phi, &cons(nat(n), &probe), fuel) {
            Ok(PartialResult::Defined { value, .. }) => out.push(value),
            Ok(PartialResult::FuelExhausted { fuel }) => {
                return Err(EvalFault::FuelExhausted { position: nat(n), fuel }.into())
            }
            Err(EvalFault::OutOfPrefix { probe, .. }) if probe == id => break,
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

/// `[ι|⟨φ, α⟩]` by fan evaluation: every admissible node of length `d` is fed
/// to `φ`, the image depth is the shortest determined image prefix, and the
/// result admits exactly the image prefixes up to that depth (bound `0` and no
/// restriction beyond it).
pub fn image_code(phi: &Baire, code: &CompactCode, d: u64, fuel: u64) -> Result<ImageCode, CompactError> {
    let nodes = code.nodes_at_depth(d)?;
    if nodes.is_empty() {
        return Err(CompactError::Empty { index: 0, depth: d });
    }
    let mut prefixes = Vec::with_capacity(nodes.len());
    for s in &nodes {
        prefixes.push(determined_prefix(phi, s, d, fuel)?);
    }
    let depth = prefixes.iter().map(|p| p.len() as u64).min().unwrap_or(0);
    let images: BTreeSet<Vec<Nat>> =
        prefixes.iter().map(|p| p[..depth as usize].to_vec()).collect();
    let images: Vec<Vec<Nat>> = images.into_iter().collect();

    let mut bounds = vec![Nat::zero(); depth as usize];
    for img in &images {
        for (b, v) in bounds.iter_mut().zip(img) {
            if v > b {
                *b = v.clone();
            }
        }
    }
    let bound = Baire::new("image-bound", move |n| {
        Ok(n.to_usize().and_then(|i| bounds.get(i).cloned()).unwrap_or_default())
    });
    let accepted = images.clone();
    let dl = depth as usize;
    let test = Baire::new("image-test", move |c| {
        let Some(t) = nat::decode(c) else { return Ok(nat(1)) };
        let head = &t[..t.len().min(dl)];
        Ok(accept(accepted.iter().any(|img| img.starts_with(head))))
    });
    Ok(ImageCode { code: CompactCode::from_parts(&bound, &test), depth, images })
}

/// For each `n < count`, the leftmost admissible node of length `d` in `codes(n)`.
pub fn select_across(
    codes: impl Fn(u64) -> CompactCode,
    count: u64,
    d: u64,
) -> Result<Vec<Vec<Nat>>, CompactError> {
    (0..count)
        .map(|n| {
            codes(n)
                .leftmost_path(d)?
                .ok_or(CompactError::Empty { index: n as usize, depth: d })
        })
        .collect()
}

/// Packs finite selections into one element, each extended by zeros.
pub fn pack_selection(selection: Vec<Vec<Nat>>) -> Baire {
    pack_seq("selection", move |m| {
        Baire::extend_by_zeros(selection.get(m as usize).cloned().unwrap_or_default())
    })
}
