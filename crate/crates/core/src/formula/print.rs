use std::fmt;

use super::{Formula, FunTerm, NumTerm};

impl fmt::Display for NumTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(k) = self.as_numeral() {
            return write!(f, "{k}");
        }
        match self {
            NumTerm::Var(x) => f.write_str(x),
            NumTerm::Zero => f.write_str("0"),
            NumTerm::App(sym, args) => {
                write!(f, "(app {}", sym.name())?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            NumTerm::Eval(g, t) if **g == FunTerm::Succ => write!(f, "(succ {t})"),
            NumTerm::Eval(g, t) => write!(f, "(ev {g} {t})"),
        }
    }
}

impl fmt::Display for FunTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunTerm::Var(x) => f.write_str(x),
            FunTerm::Succ => f.write_str("succ"),
            FunTerm::Lambda(x, body) => write!(f, "(lam {x} {body})"),
            FunTerm::Rec(t, g) => write!(f, "(rec {t} {g})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "(= {a} {b})"),
            Formula::DefNum(a, b) => write!(f, "(def-num {a} {b})"),
            Formula::DefFun(a, b) => write!(f, "(def-fun {a} {b})"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Imp(a, b) => write!(f, "(imp {a} {b})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
            Formula::Iff(a, b) => write!(f, "(iff {a} {b})"),
            Formula::Not(a) => write!(f, "(not {a})"),
            Formula::ForallNum(x, a) => write!(f, "(forall-num {x} {a})"),
            Formula::ForallFun(x, a) => write!(f, "(forall-fun {x} {a})"),
            Formula::ExistsNum(x, a) => write!(f, "(exists-num {x} {a})"),
            Formula::ExistsFun(x, a) => write!(f, "(exists-fun {x} {a})"),
            Formula::ExistsNumBdd(x, t, a) => write!(f, "(exists-num-bdd {x} {t} {a})"),
            Formula::ExistsFunBdd(x, t, a) => write!(f, "(exists-fun-bdd {x} {t} {a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms_and_compounds() {
        let e = Formula::eq(NumTerm::Zero, NumTerm::Zero);
        assert_eq!(e.to_string(), "(= 0 0)");
        assert_eq!(Formula::and(e.clone(), e).to_string(), "(and (= 0 0) (= 0 0))");
    }

    #[test]
    fn successor_forms() {
        assert_eq!(NumTerm::numeral(3).to_string(), "3");
        assert_eq!(NumTerm::var("x").succ().to_string(), "(succ x)");
        let t = FunTerm::Rec(Box::new(NumTerm::Zero), Box::new(FunTerm::Succ));
        assert_eq!(t.to_string(), "(rec 0 succ)");
    }
}
