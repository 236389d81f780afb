use super::{Checker, Environment, WitnessError};
use crate::compact::{image_code, CompactCode, ImageCode};
use crate::formula::Formula;
use crate::k2::{apply_fun, associate_of, proj, Baire, ContinuousMap, Side};

/// `ω_B|ξ`, then `β|ξ|(ω_B|ξ)`: the realizer of the conclusion at `ξ`.
fn conclusion_realizer(
    checker: &Checker,
    beta: &Baire,
    b: &Formula,
    xi_var: &str,
    xi: &Baire,
    env: &Environment,
) -> Result<Baire, WitnessError> {
    let omega = checker.build_omega(b, &env.with_fun(xi_var, xi.clone()))?;
    let fuel = checker.bounds.fuel;
    Ok(apply_fun(&apply_fun(beta, xi, fuel), &omega, fuel))
}

/// The witness `ζ = fst(β|ξ|(ω_B|ξ))` from a realizer `β` of
/// `∀ξ(B(ξ) → ∃ζ A(ξ, ζ))`. Values fault where an application runs out of fuel.
pub fn extract_choice(
    checker: &Checker,
    beta: &Baire,
    b: &Formula,
    xi_var: &str,
    xi: &Baire,
    env: &Environment,
) -> Result<Baire, WitnessError> {
    let gamma = conclusion_realizer(checker, beta, b, xi_var, xi, env)?;
    Ok(proj(&gamma, Side::Fst))
}

/// The Lifschitz version: `β|ξ|(ω_B|ξ)` codes a set of realizers of `∃ζ A`,
/// and its image under `fst` is the set of witnesses, here to length `depth`.
pub fn extract_choice_lrf(
    checker: &Checker,
    beta: &Baire,
    b: &Formula,
    xi_var: &str,
    xi: &Baire,
    env: &Environment,
    depth: u64,
) -> Result<ImageCode, WitnessError> {
    let gamma = conclusion_realizer(checker, beta, b, xi_var, xi, env)?;
    let fst = associate_of(&ContinuousMap::fst());
    Ok(image_code(&fst, &CompactCode::new(gamma), 2 * depth, checker.bounds.fuel)?)
}
