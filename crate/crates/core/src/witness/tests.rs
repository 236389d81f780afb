use super::*;
use crate::compact::{select_across, CompactCode};
use crate::formula::parse;
use crate::k2::{associate_of, cons, pair_fun, ContinuousMap};
use crate::nat::Nat;

fn checker(mode: Mode) -> Checker {
    Checker::new(mode, Bounds::default(), Battery::standard(7))
}

fn first_zero_at(k: u64) -> Baire {
    let mut v = vec![1; k as usize];
    v.push(0);
    Baire::table(&v, 1)
}

fn xi_env(xi: Baire) -> Environment {
    Environment::new().with_fun("xi", xi)
}

const EXISTS_ZERO: &str = "(exists-num x (= (ev xi x) 0))";
const MARKOV: &str = "(imp (not (not (exists-num x (= (ev xi x) 0)))) (exists-num x (= (ev xi x) 0)))";

#[test]
fn atomic_truths_are_realized_by_anything() {
    let c = checker(Mode::Kleene);
    let f = parse("(= 0 0)").unwrap();
    for b in ["zeros", "identity", "const:9"] {
        let r = c.realizes(&Baire::named(b).unwrap(), &f, &Environment::new()).unwrap();
        assert_eq!(r, CheckResult::Verified);
    }
    let r = c.realizes(&Baire::zeros(), &parse("(= 0 1)").unwrap(), &Environment::new()).unwrap();
    assert!(r.is_refuted());
}

#[test]
fn number_existential_reads_its_witness() {
    let c = checker(Mode::Kleene);
    let f = parse(EXISTS_ZERO).unwrap();
    let env = xi_env(first_zero_at(3));
    let good = cons(nat(3), &Baire::identity());
    assert_eq!(c.realizes(&good, &f, &env).unwrap(), CheckResult::Verified);
    let bad = cons(nat(2), &Baire::identity());
    match c.realizes(&bad, &f, &env).unwrap() {
        CheckResult::Refuted { path, clause } => {
            assert_eq!(path, "exists-num x:=2");
            assert!(clause.contains("atomic"), "{clause}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn omega_for_existential_is_least_witness() {
    let c = checker(Mode::Kleene);
    let f = parse(EXISTS_ZERO).unwrap();
    let env = xi_env(first_zero_at(3));
    let w = c.build_omega(&f, &env).unwrap();
    assert_eq!(w.at(0).unwrap(), nat(3));
    assert_eq!(c.realizes(&w, &f, &env).unwrap(), CheckResult::Verified);
    let never = xi_env(Baire::ones());
    assert!(matches!(c.build_omega(&f, &never), Err(WitnessError::NotCertified(_))));
}

#[test]
fn omega_for_tautology_and_markov() {
    let c = checker(Mode::Kleene);
    let taut = parse("(forall-num x (= x x))").unwrap();
    let w = c.build_omega(&taut, &Environment::new()).unwrap();
    assert_eq!(c.realizes(&w, &taut, &Environment::new()).unwrap(), CheckResult::Verified);

    let m = parse(MARKOV).unwrap();
    let env = xi_env(first_zero_at(5));
    let w = c.build_omega(&m, &env).unwrap();
    assert_eq!(c.realizes(&w, &m, &env).unwrap(), CheckResult::Verified);
    // the conclusion's witness is 5
    let concl = apply_fun(&w, &Baire::zeros(), 4);
    assert_eq!(concl.at(0).unwrap(), nat(5));
}

#[test]
fn omega_rejects_formulas_outside_the_class() {
    let c = checker(Mode::Kleene);
    let f = parse("(exists-num x (forall-num y (= (ev xi (app add x y)) 0)))").unwrap();
    assert!(matches!(c.build_omega(&f, &xi_env(Baire::zeros())), Err(WitnessError::NotInClass(_))));
    let g = parse("(= (ev eta 0) 0)").unwrap();
    assert_eq!(c.realizes(&Baire::zeros(), &g, &Environment::new()), Err(WitnessError::Unassigned(vec!["eta".into()])));
}

#[test]
fn wrong_implication_realizer_is_refuted() {
    let c = checker(Mode::Kleene);
    // (0 = 0 → ∃x ξ(x) = 0) realized by Λ.⟨2⟩⌢0 while the first zero is at 3
    let f = parse(&format!("(imp (= 0 0) {EXISTS_ZERO})")).unwrap();
    let env = xi_env(first_zero_at(3));
    let wrong = associate_of(&ContinuousMap::constant(cons(nat(2), &Baire::zeros())));
    assert!(c.realizes(&wrong, &f, &env).unwrap().is_refuted());
    let right = associate_of(&ContinuousMap::constant(cons(nat(3), &Baire::zeros())));
    assert!(c.realizes(&right, &f, &env).unwrap().is_verified());
    // an everywhere-undefined realizer is never refuted, only unknown
    let r = c.realizes(&Baire::zeros(), &f, &env).unwrap();
    assert!(matches!(r, CheckResult::Unknown { .. }), "{r:?}");
}

#[test]
fn decide_is_three_valued() {
    let c = checker(Mode::Kleene);
    let f = parse(EXISTS_ZERO).unwrap();
    assert_eq!(c.decide(&f, &xi_env(first_zero_at(4))).unwrap(), Truth::True);
    assert_eq!(c.decide(&f, &xi_env(Baire::ones())).unwrap(), Truth::Unknown);
    let bdd = parse("(exists-num-bdd x 3 (= (ev xi x) 0))").unwrap();
    assert_eq!(c.decide(&bdd, &xi_env(first_zero_at(4))).unwrap(), Truth::False);
    assert_eq!(c.decide(&bdd, &xi_env(first_zero_at(3))).unwrap(), Truth::True);
    let all = parse("(forall-num n (= (ev xi n) 1))").unwrap();
    // ∀ is checked below depth 8
    assert_eq!(c.decide(&all, &xi_env(first_zero_at(8))).unwrap(), Truth::True);
    assert_eq!(c.decide(&all, &xi_env(first_zero_at(7))).unwrap(), Truth::False);
}

/// `∃y ≤ 1 ∀n ξ(2n + y) = 0` for `ξ` with at most one nonzero value.
const LLPO: &str = "(exists-num-bdd y 1 (forall-num n (= (ev xi (app add (app mul 2 n) y)) 0)))";

#[test]
fn lifschitz_omega_for_bounded_existential() {
    let c = checker(Mode::Lifschitz);
    let f = parse(LLPO).unwrap();
    for (nonzero_at, witnesses) in [(Some(4u64), vec![1u64]), (Some(3), vec![0]), (None, vec![0, 1])] {
        let xi = match nonzero_at {
            Some(k) => Baire::from_fn("spike", move |n| u64::from(n == k)),
            None => Baire::zeros(),
        };
        let env = xi_env(xi);
        let w = c.build_omega(&f, &env).unwrap();
        assert_eq!(c.realizes(&w, &f, &env).unwrap(), CheckResult::Verified);
        let code = CompactCode::new(w);
        let mut heads: Vec<u64> = code
            .nodes_at_depth(c.confirm_depth())
            .unwrap()
            .iter()
            .map(|s| crate::nat::to_u64(&s[0]).unwrap())
            .collect();
        heads.dedup();
        assert_eq!(heads, witnesses);
    }
}

#[test]
fn lifschitz_rejects_a_set_with_a_bad_member() {
    let c = checker(Mode::Lifschitz);
    let f = parse(EXISTS_ZERO).unwrap();
    let env = xi_env(first_zero_at(3));
    // members ⟨3⟩⌢0 and ⟨4⟩⌢0
    let bad = CompactCode::from_predicate("3-or-4", cons(nat(4), &Baire::zeros()), |s| {
        s.first().is_none_or(|x| *x == nat(3) || *x == nat(4))
    });
    assert!(c.realizes(&bad.code, &f, &env).unwrap().is_refuted());
    let good = CompactCode::singleton(&cons(nat(3), &Baire::zeros()));
    assert!(c.realizes(&good.code, &f, &env).unwrap().is_verified());
}

#[test]
fn function_bounded_existential_tree() {
    let c = checker(Mode::Lifschitz);
    // a binary ζ that is 1 exactly where ξ is nonzero
    let f = parse("(exists-fun-bdd z (lam k 1) (forall-num n (= (ev z n) (app sg (ev xi n)))))").unwrap();
    let xi = Baire::table(&[0, 3, 0, 5], 0);
    let env = xi_env(xi);
    let w = c.build_omega(&f, &env).unwrap();
    assert_eq!(c.realizes(&w, &f, &env).unwrap(), CheckResult::Verified);
    let member = CompactCode::new(w).member_through(&[], 12).unwrap().unwrap();
    assert_eq!(proj(&member, Side::Fst).prefix(6).unwrap(), Baire::table(&[0, 1, 0, 1], 0).prefix(6).unwrap());
}

#[test]
fn kleene_realizer_as_singleton_is_lifschitz_realizer() {
    let (k, l) = (checker(Mode::Kleene), checker(Mode::Lifschitz));
    let f = parse("(exists-num x (and (= (ev xi x) 0) (= (ev xi (succ x)) 1)))").unwrap();
    let env = xi_env(Baire::table(&[1, 1, 0, 1], 0));
    let r = k.build_omega(&f, &env).unwrap();
    assert!(k.realizes(&r, &f, &env).unwrap().is_verified());
    let single = CompactCode::singleton(&r).code;
    assert!(l.realizes(&single, &f, &env).unwrap().is_verified());
}

/// `Λξ.Λγ.⟨F(ξ), 0⟩`, realizing `∀ξ(B → ∃ζ A)` whenever `F` is a choice function for `A`.
fn choice_realizer(f: ContinuousMap) -> Baire {
    let inner = ContinuousMap::traced(format!("choice:{}", f.label()), move |xi: &Baire, n: &Nat| {
        let concl = pair_fun(&f.apply(xi), &Baire::zeros());
        associate_of(&ContinuousMap::constant(concl)).get(n)
    });
    associate_of(&inner)
}

#[test]
fn extraction_recovers_choice_functions() {
    let c = checker(Mode::Kleene);
    let b = parse("(= 0 0)").unwrap();
    let id = choice_realizer(ContinuousMap::identity());
    let zero = choice_realizer(ContinuousMap::constant(Baire::zeros()));
    let bump = choice_realizer(ContinuousMap::with_modulus("bump", |_| 1, |xi: &Baire, n: &Nat| {
        Ok(if *n == Nat::from(0u32) { xi.at(0)? + 1u32 } else { Nat::from(0u32) })
    }));
    let xi = Baire::table(&[5, 1, 4, 1, 5, 9, 2, 6], 3);
    let env = Environment::new();
    let z = extract_choice(&c, &id, &b, "xi", &xi, &env).unwrap();
    assert!(z.agrees_to(&xi, 32).unwrap());
    let z = extract_choice(&c, &zero, &b, "xi", &xi, &env).unwrap();
    assert!(z.agrees_to(&Baire::zeros(), 32).unwrap());
    for seed in 0..10u64 {
        let t = Baire::table(&[seed * 7 % 11, seed], seed);
        let z = extract_choice(&c, &bump, &b, "xi", &t, &env).unwrap();
        assert_eq!(z.at(0).unwrap(), nat(seed * 7 % 11 + 1));
    }
    let a = parse("(forall-num n (= (ev zeta n) (ev xi n)))").unwrap();
    let whole = Formula::forall_fun("xi", Formula::imp(b.clone(), Formula::exists_fun("zeta", a)));
    assert!(c.realizes(&id, &whole, &env).unwrap().is_verified());
}

/// `Λξ.Λγ.K` with `K` coding `{⟨ζ, 0⟩ : ζ ∈ S}`.
fn set_realizer(k: CompactCode) -> Baire {
    let inner = associate_of(&ContinuousMap::constant(k.code));
    associate_of(&ContinuousMap::constant(inner))
}

fn constant_streams(values: &'static [u64]) -> CompactCode {
    let top = *values.iter().max().unwrap();
    let bound = pair_fun(&Baire::constant(top), &Baire::zeros());
    CompactCode::from_predicate("streams", bound, move |s| {
        let evens: Vec<&Nat> = s.iter().step_by(2).collect();
        let odds_zero = s.iter().skip(1).step_by(2).all(|v| *v == Nat::from(0u32));
        let same = evens.windows(2).all(|w| w[0] == w[1]);
        let allowed = evens.first().is_none_or(|v| values.iter().any(|x| nat(*x) == **v));
        odds_zero && same && allowed
    })
}

#[test]
fn lifschitz_extraction_gives_witness_sets() {
    let c = checker(Mode::Lifschitz);
    let b = parse("(= 0 0)").unwrap();
    let env = Environment::new();
    let two = set_realizer(constant_streams(&[0, 1]));
    let img = extract_choice_lrf(&c, &two, &b, "xi", &Baire::zeros(), &env, 8).unwrap();
    assert_eq!(img.depth, 8);
    let members = img.code.nodes_at_depth(8).unwrap();
    assert_eq!(members, vec![vec![nat(0); 8], vec![nat(1); 8]]);

    let one = set_realizer(constant_streams(&[2]));
    let img = extract_choice_lrf(&c, &one, &b, "xi", &Baire::zeros(), &env, 8).unwrap();
    assert_eq!(img.code.nodes_at_depth(8).unwrap(), vec![vec![nat(2); 8]]);

    let xis: Vec<Baire> = (0..4).map(Baire::constant).collect();
    let codes: Vec<CompactCode> = xis
        .iter()
        .map(|x| extract_choice_lrf(&c, &two, &b, "xi", x, &env, 8).unwrap().code)
        .collect();
    let sel = select_across(|n| codes[n as usize].clone(), 4, 8).unwrap();
    assert!(sel.iter().all(|s| *s == vec![nat(0); 8]));
}

#[test]
fn results_are_stable_under_larger_bounds() {
    let f = parse(MARKOV).unwrap();
    let env = xi_env(first_zero_at(5));
    let small = checker(Mode::Kleene);
    let mut big = small.clone();
    big.bounds = Bounds { fuel: 128, depth: 16, fan_depth: 6, search: 512 };
    let w = small.build_omega(&f, &env).unwrap();
    assert_eq!(small.realizes(&w, &f, &env).unwrap(), big.realizes(&w, &f, &env).unwrap());
    let bad = associate_of(&ContinuousMap::constant(cons(nat(4), &Baire::zeros())));
    assert!(small.realizes(&bad, &f, &env).unwrap().is_refuted());
    assert!(big.realizes(&bad, &f, &env).unwrap().is_refuted());
}
