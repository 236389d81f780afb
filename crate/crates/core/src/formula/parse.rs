//! Reader for the s-expression syntax. Sorts of variables are inferred from the
//! position they occur in; `;` starts a comment that runs to the end of the line.

use std::fmt;

use thiserror::Error;

use super::{Formula, FunTerm, NumTerm};
use crate::symbols::SymId;

/// Largest decimal numeral accepted; numerals expand to successor chains.
pub const MAX_NUMERAL: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{symbol}` takes {expected} arguments, found {found}")]
    Arity { symbol: String, expected: usize, found: usize },
    #[error("bound variable occurs in bound term: `{0}`")]
    BoundVariableInBound(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.kind)
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Debug)]
enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

fn err<T>(pos: Pos, kind: ParseErrorKind) -> Result<T, ParseError> {
    Err(ParseError { kind, line: pos.line, col: pos.col })
}

fn syntax<T>(pos: Pos, msg: impl Into<String>) -> Result<T, ParseError> {
    err(pos, ParseErrorKind::Syntax(msg.into()))
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        Reader { chars: text.chars().peekable(), line: 1, col: 1 }
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_blank(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Sexp, ParseError> {
        self.skip_blank();
        let start = self.pos();
        match self.chars.peek().copied() {
            None => syntax(start, "unexpected end of input"),
            Some(')') => syntax(start, "unexpected `)`"),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_blank();
                    match self.chars.peek() {
                        None => return syntax(start, "unclosed `(`"),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items, start));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(_) => {
                let mut atom = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    atom.push(c);
                    self.bump();
                }
                Ok(Sexp::Atom(atom, start))
            }
        }
    }

    fn read_only(mut self) -> Result<Sexp, ParseError> {
        let s = self.read()?;
        self.skip_blank();
        if self.chars.peek().is_some() {
            return syntax(self.pos(), "trailing input after expression");
        }
        Ok(s)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    s != "succ" && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

fn variable(s: &Sexp) -> Result<String, ParseError> {
    match s {
        Sexp::Atom(a, _) if is_identifier(a) => Ok(a.clone()),
        _ => syntax(s.pos(), "expected a variable name"),
    }
}

fn head(items: &[Sexp], pos: Pos) -> Result<&str, ParseError> {
    match items.first() {
        Some(Sexp::Atom(a, _)) => Ok(a.as_str()),
        Some(other) => syntax(other.pos(), "expected an operator"),
        None => syntax(pos, "empty list"),
    }
}

fn expect_len(items: &[Sexp], n: usize, form: &str, pos: Pos) -> Result<(), ParseError> {
    if items.len() != n + 1 {
        return syntax(pos, format!("`{form}` takes {n} operands, found {}", items.len() - 1));
    }
    Ok(())
}

fn num_term(s: &Sexp) -> Result<NumTerm, ParseError> {
    match s {
        Sexp::Atom(a, pos) => {
            if a.chars().all(|c| c.is_ascii_digit()) {
                match a.parse::<u64>() {
                    Ok(k) if k <= MAX_NUMERAL => Ok(NumTerm::numeral(k)),
                    _ => syntax(*pos, format!("numeral `{a}` exceeds {MAX_NUMERAL}")),
                }
            } else if is_identifier(a) {
                Ok(NumTerm::Var(a.clone()))
            } else {
                syntax(*pos, format!("`{a}` is not a number term"))
            }
        }
        Sexp::List(items, pos) => match head(items, *pos)? {
            "ev" => {
                expect_len(items, 2, "ev", *pos)?;
                Ok(NumTerm::Eval(Box::new(fun_term(&items[1])?), Box::new(num_term(&items[2])?)))
            }
            "succ" => {
                expect_len(items, 1, "succ", *pos)?;
                Ok(num_term(&items[1])?.succ())
            }
            "app" => {
                let name = match items.get(1) {
                    Some(Sexp::Atom(n, _)) => n,
                    _ => return syntax(*pos, "`app` needs a symbol name"),
                };
                let Some(id) = SymId::named(name) else {
                    return err(items[1].pos(), ParseErrorKind::UnknownSymbol(name.clone()));
                };
                let args = items[2..].iter().map(num_term).collect::<Result<Vec<_>, _>>()?;
                if args.len() != id.arity() {
                    return err(
                        *pos,
                        ParseErrorKind::Arity {
                            symbol: name.clone(),
                            expected: id.arity(),
                            found: args.len(),
                        },
                    );
                }
                Ok(NumTerm::App(id, args))
            }
            other => syntax(*pos, format!("`{other}` does not form a number term")),
        },
    }
}

fn fun_term(s: &Sexp) -> Result<FunTerm, ParseError> {
    match s {
        Sexp::Atom(a, _) if a == "succ" => Ok(FunTerm::Succ),
        Sexp::Atom(a, pos) => {
            if is_identifier(a) {
                Ok(FunTerm::Var(a.clone()))
            } else {
                syntax(*pos, format!("`{a}` is not a function term"))
            }
        }
        Sexp::List(items, pos) => match head(items, *pos)? {
            "lam" => {
                expect_len(items, 2, "lam", *pos)?;
                Ok(FunTerm::Lambda(variable(&items[1])?, Box::new(num_term(&items[2])?)))
            }
            "rec" => {
                expect_len(items, 2, "rec", *pos)?;
                Ok(FunTerm::Rec(Box::new(num_term(&items[1])?), Box::new(fun_term(&items[2])?)))
            }
            other => syntax(*pos, format!("`{other}` does not form a function term")),
        },
    }
}

fn formula(s: &Sexp) -> Result<Formula, ParseError> {
    let (items, pos) = match s {
        Sexp::List(items, pos) => (items, *pos),
        Sexp::Atom(a, pos) => return syntax(*pos, format!("expected a formula, found `{a}`")),
    };
    let bin = |f: fn(Formula, Formula) -> Formula, name: &str| -> Result<Formula, ParseError> {
        expect_len(items, 2, name, pos)?;
        Ok(f(formula(&items[1])?, formula(&items[2])?))
    };
    match head(items, pos)? {
        "=" => {
            expect_len(items, 2, "=", pos)?;
            Ok(Formula::Eq(num_term(&items[1])?, num_term(&items[2])?))
        }
        "def-num" => {
            expect_len(items, 2, "def-num", pos)?;
            Ok(Formula::DefNum(fun_term(&items[1])?, fun_term(&items[2])?))
        }
        "def-fun" => {
            expect_len(items, 2, "def-fun", pos)?;
            Ok(Formula::DefFun(fun_term(&items[1])?, fun_term(&items[2])?))
        }
        "and" => bin(Formula::and, "and"),
        "imp" => bin(Formula::imp, "imp"),
        "or" => bin(Formula::or, "or"),
        "iff" => bin(Formula::iff, "iff"),
        "not" => {
            expect_len(items, 1, "not", pos)?;
            Ok(Formula::not(formula(&items[1])?))
        }
        q @ ("forall-num" | "forall-fun" | "exists-num" | "exists-fun") => {
            expect_len(items, 2, q, pos)?;
            let x = variable(&items[1])?;
            let body = formula(&items[2])?;
            Ok(match q {
                "forall-num" => Formula::forall_num(x, body),
                "forall-fun" => Formula::forall_fun(x, body),
                "exists-num" => Formula::exists_num(x, body),
                _ => Formula::exists_fun(x, body),
            })
        }
        "exists-num-bdd" => {
            expect_len(items, 3, "exists-num-bdd", pos)?;
            let x = variable(&items[1])?;
            let t = num_term(&items[2])?;
            if t.free_vars().num.contains(&x) {
                return err(items[2].pos(), ParseErrorKind::BoundVariableInBound(x));
            }
            Ok(Formula::ExistsNumBdd(x, t, Box::new(formula(&items[3])?)))
        }
        "exists-fun-bdd" => {
            expect_len(items, 3, "exists-fun-bdd", pos)?;
            let x = variable(&items[1])?;
            let t = fun_term(&items[2])?;
            if t.free_vars().fun.contains(&x) {
                return err(items[2].pos(), ParseErrorKind::BoundVariableInBound(x));
            }
            Ok(Formula::ExistsFunBdd(x, t, Box::new(formula(&items[3])?)))
        }
        other => syntax(pos, format!("unknown formula former `{other}`")),
    }
}

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    formula(&Reader::new(text).read_only()?)
}

pub fn parse_num_term(text: &str) -> Result<NumTerm, ParseError> {
    num_term(&Reader::new(text).read_only()?)
}

pub fn parse_fun_term(text: &str) -> Result<FunTerm, ParseError> {
    fun_term(&Reader::new(text).read_only()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_literal() {
        assert_eq!(parse("(= 0 0)").unwrap(), Formula::eq(NumTerm::Zero, NumTerm::Zero));
    }

    #[test]
    fn existential_over_evaluation() {
        let f = parse("(exists-num x (= (ev xi x) 0))").unwrap();
        let want = Formula::exists_num(
            "x",
            Formula::eq(
                NumTerm::Eval(Box::new(FunTerm::var("xi")), Box::new(NumTerm::var("x"))),
                NumTerm::Zero,
            ),
        );
        assert_eq!(f, want);
    }

    #[test]
    fn bound_variable_in_its_bound_is_rejected() {
        let e = parse("(exists-fun-bdd zeta (lam n (ev zeta n)) (forall-num z (= z z)))")
            .unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::BoundVariableInBound(ref v) if v == "zeta"));
        assert!(e.to_string().contains("bound variable occurs in bound term"));
        let e = parse("(exists-num-bdd x (succ x) (= x x))").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::BoundVariableInBound(_)));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("(and (= 0 0)\n  (= 0 (app frob 1)))").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownSymbol("frob".into()));
        assert_eq!((e.line, e.col), (2, 13));

        let e = parse("(= (app add 1) 0)").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Arity { expected: 2, found: 1, .. }));

        let e = parse("(= 0 0").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        let e = parse("(= 0 0) (= 0 0)").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn comments_and_whitespace() {
        let f = parse("; a comment\n(= 0 ; inline\n 0)").unwrap();
        assert_eq!(f, Formula::eq(NumTerm::Zero, NumTerm::Zero));
    }

    #[test]
    fn sorts_follow_position() {
        let f = parse("(forall-fun a (= (ev (rec 0 succ) x) (ev a 3)))").unwrap();
        let fv = f.free_vars();
        assert!(fv.num.contains("x"));
        assert!(fv.fun.is_empty());
    }

    #[test]
    fn print_then_parse() {
        for text in [
            "(imp (not (not (exists-num x (= (ev a x) 0)))) (exists-num x (= (ev a x) 0)))",
            "(exists-num-bdd y 1 (forall-num n (= (app mul y (ev xi n)) 0)))",
            "(forall-fun xi (def-fun (lam k (succ k)) xi))",
            "(iff (or (= x 2) (= x 0)) (def-num alpha (rec 4 (lam m (app pred m)))))",
        ] {
            let f = parse(text).unwrap();
            assert_eq!(f.to_string(), text);
            assert_eq!(parse(&f.to_string()).unwrap(), f);
        }
    }
}
