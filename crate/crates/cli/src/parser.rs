//! Recursive descent over the operator grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' '-'? int)?
//! atom   := int | 'D' | ident | ident '(' expr ')' | '(' expr ')' | '-' atom
//! ```

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use thiserror::Error;
use umbra_core::operator::{canonical, CATALOG};
use umbra_core::Rat;

use crate::ast::{BinOp, Expr, Func};

/// Offsets are 1-based byte positions into the source text.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected one of {}; found {found}", .expected.join(", "))]
    Syntax { offset: usize, expected: Vec<String>, found: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("operator `{operator}` at byte {offset} needs parameter `{param}`; bind it with --param {param}=<rational>")]
    UnboundParameter { operator: String, param: String, offset: usize },
    #[error("exponent at byte {offset} is out of range")]
    ExponentRange { offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::UnboundParameter { offset, .. }
            | ParseError::ExponentRange { offset } => *offset,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigUint),
    Ident(String),
    Sym(char),
    Bad(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Sym(c) | Tok::Bad(c) => format!("`{c}`"),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(src: &str) -> Vec<(Tok, usize)> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = src[i..].chars().next().unwrap();
        let start = i;
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Int(src[start..i].parse().unwrap()), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if "+-*/^()".contains(c) {
            i += 1;
            out.push((Tok::Sym(c), start));
        } else {
            i += c.len_utf8();
            out.push((Tok::Bad(c), start));
        }
    }
    out.push((Tok::End, src.len()));
    out
}

const ATOM_START: [&str; 5] = ["integer", "`D`", "identifier", "`(`", "`-`"];

struct Parser<'a> {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    params: &'a BTreeMap<String, Rat>,
    // tokens that would also have been accepted at the current position
    follow: BTreeSet<&'static str>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].1 + 1
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        self.follow.clear();
        t
    }

    fn eat(&mut self, c: char, label: &'static str) -> bool {
        if self.peek() == &Tok::Sym(c) {
            self.bump();
            true
        } else {
            self.follow.insert(label);
            false
        }
    }

    fn fail(&self, required: &[&str]) -> ParseError {
        let mut expected: BTreeSet<String> = self.follow.iter().map(|s| s.to_string()).collect();
        expected.extend(required.iter().map(|s| s.to_string()));
        ParseError::Syntax { offset: self.offset(), expected: expected.into_iter().collect(), found: self.peek().describe() }
    }

    fn expect(&mut self, c: char, label: &'static str) -> Result<(), ParseError> {
        if self.eat(c, label) {
            Ok(())
        } else {
            Err(self.fail(&[]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+', "`+`") {
                BinOp::Add
            } else if self.eat('-', "`-`") {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            lhs = Expr::binary(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = if self.eat('*', "`*`") {
                BinOp::Mul
            } else if self.eat('/', "`/`") {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            lhs = Expr::binary(op, lhs, self.factor()?);
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat('^', "`^`") {
            return Ok(base);
        }
        let at = self.offset();
        let negative = self.eat('-', "`-`");
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                let k = i64::try_from(&n).map_err(|_| ParseError::ExponentRange { offset: at })?;
                Ok(Expr::Pow(Box::new(base), if negative { -k } else { k }))
            }
            _ => Err(self.fail(&["integer"])),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')', "`)`")?;
                Ok(e)
            }
            Tok::Sym('-') => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.atom()?)))
            }
            Tok::Ident(name) => {
                self.bump();
                self.identifier(name, at)
            }
            _ => Err(self.fail(&ATOM_START)),
        }
    }

    fn argument(&mut self) -> Result<Expr, ParseError> {
        self.expect('(', "`(`")?;
        let e = self.expr()?;
        self.expect(')', "`)`")?;
        Ok(e)
    }

    fn identifier(&mut self, name: String, at: usize) -> Result<Expr, ParseError> {
        if name == "D" {
            return Ok(Expr::D);
        }
        if name == "exp" || name == "log" {
            let func = if name == "exp" { Func::Exp } else { Func::Log };
            return Ok(Expr::Call(func, Box::new(self.argument()?)));
        }
        if let Some(canon) = canonical(&name) {
            let needs = CATALOG.iter().find(|(n, _)| *n == canon).and_then(|(_, p)| *p);
            if let Some(p) = needs.filter(|p| !self.params.contains_key(*p)) {
                return Err(ParseError::UnboundParameter { operator: name, param: p.to_string(), offset: at });
            }
            if self.peek() == &Tok::Sym('(') {
                return Ok(Expr::Call(Func::Compose(name), Box::new(self.argument()?)));
            }
            self.follow.insert("`(`");
            return Ok(Expr::Named(name));
        }
        if self.params.contains_key(&name) {
            return Ok(Expr::Param(name));
        }
        Err(ParseError::UnknownIdentifier { name, offset: at })
    }
}

/// Parses an operator expression; identifiers other than the built-in
/// names must be bound in `params`.
pub fn parse_operator(text: &str, params: &BTreeMap<String, Rat>) -> Result<Expr, ParseError> {
    let mut p = Parser { tokens: tokenize(text), pos: 0, params, follow: BTreeSet::new() };
    let e = p.expr()?;
    if p.peek() != &Tok::End {
        return Err(p.fail(&["end of input"]));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use umbra_core::numbers::frac;

    fn parse(s: &str) -> Result<Expr, ParseError> {
        let params = BTreeMap::from([("b".to_string(), frac(1, 2)), ("a".to_string(), frac(2, 1))]);
        parse_operator(s, &params)
    }

    #[test]
    fn precedence_and_rendering() {
        assert_eq!(parse("exp(D)-1").unwrap().to_string(), "exp(D) - 1");
        assert_eq!(parse("D*exp(b*D)").unwrap().to_string(), "D * exp(b * D)");
        assert_eq!(parse("D/(exp(D)-1)").unwrap().to_string(), "D / (exp(D) - 1)");
        assert_eq!(parse("1-(D-D^2)").unwrap().to_string(), "1 - (D - D^2)");
        assert_eq!(parse("(1-D)-D").unwrap().to_string(), "1 - D - D");
        assert_eq!(parse("-D^2").unwrap(), Expr::Pow(Box::new(Expr::Neg(Box::new(Expr::D))), 2));
        assert_eq!(parse("(D^2)^-3").unwrap().to_string(), "(D^2)^-3");
        assert_eq!(parse("delta(abel)").unwrap().to_string(), "delta(abel)");
        assert_eq!(parse("shift").unwrap(), Expr::Named("shift".into()));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("exp(").unwrap_err();
        assert_eq!(e.offset(), 5);
        match e {
            ParseError::Syntax { expected, found, .. } => {
                assert!(expected.contains(&"`D`".to_string()));
                assert!(expected.contains(&"integer".to_string()));
                assert_eq!(found, "end of input");
            }
            other => panic!("{other:?}"),
        }
        let e = parse("(D+1").unwrap_err();
        assert_eq!(e.offset(), 5);
        assert!(e.to_string().contains("`)`"), "{e}");
        assert!(e.to_string().contains("`^`"), "{e}");
        assert_eq!(parse("D + foo").unwrap_err(), ParseError::UnknownIdentifier { name: "foo".into(), offset: 5 });
        let unbound = parse_operator("abel", &BTreeMap::new()).unwrap_err();
        assert!(matches!(unbound, ParseError::UnboundParameter { ref param, offset: 1, .. } if param == "b"));
        assert_eq!(parse("D ? 1").unwrap_err().offset(), 3);
        assert_eq!(parse("D^x").unwrap_err().offset(), 3);
        assert!(parse("D D").unwrap_err().to_string().contains("end of input"));
        assert_eq!(parse("").unwrap_err().offset(), 1);
    }

    fn leaf() -> impl Strategy<Value = Expr> {
        prop_oneof![
            (0u32..50).prop_map(|n| Expr::Int(n.into())),
            Just(Expr::D),
            Just(Expr::Param("b".into())),
            prop::sample::select(vec!["delta", "nabla", "laguerre", "abel", "shift"]).prop_map(|s| Expr::Named(s.into())),
        ]
    }

    fn expr() -> impl Strategy<Value = Expr> {
        leaf().prop_recursive(5, 40, 2, |inner| {
            let ops = prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div]);
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (ops, inner.clone(), inner.clone()).prop_map(|(op, l, r)| Expr::binary(op, l, r)),
                (inner.clone(), -4i64..5).prop_map(|(e, k)| Expr::Pow(Box::new(e), k)),
                inner.clone().prop_map(|e| Expr::Call(Func::Exp, Box::new(e))),
                inner.clone().prop_map(|e| Expr::Call(Func::Log, Box::new(e))),
                inner.prop_map(|e| Expr::Call(Func::Compose("delta".into()), Box::new(e))),
            ]
        })
    }

    proptest! {
        #[test]
        fn pretty_print_round_trips(e in expr()) {
            let text = e.to_string();
            prop_assert_eq!(parse(&text).unwrap(), e);
        }
    }
}
