use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::atoms::{expand_atom, AtomKind};
use crate::error::{Error, Result};
use crate::model::{Signature, Value, VarId};
use crate::syntax::ast::{Bound, Cmp, CoFormula, Formula, Intervention, Literal, PcoFormula, ProbAtom, ProbTerm};
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(String),
    LBrack,
    RBrack,
    LParen,
    RParen,
    Comma,
    Semi,
    Bar,
    Tilde,
    Slash,
    Assign,
    Eq,
    EqEq,
    Ne,
    Ge,
    Gt,
    Le,
    Lt,
    Arrow,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.to_string() };
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let two = |n: u8| bytes.get(i + 1) == Some(&n);
        let (tok, len) = match c {
            '[' => (Tok::LBrack, 1),
            ']' => (Tok::RBrack, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ',' => (Tok::Comma, 1),
            ';' => (Tok::Semi, 1),
            '|' => (Tok::Bar, 1),
            '~' => (Tok::Tilde, 1),
            '/' => (Tok::Slash, 1),
            ':' if two(b'=') => (Tok::Assign, 2),
            '=' if two(b'=') => (Tok::EqEq, 2),
            '=' if two(b'>') => (Tok::Arrow, 2),
            '=' => (Tok::Eq, 1),
            '!' if two(b'=') => (Tok::Ne, 2),
            '>' if two(b'=') => (Tok::Ge, 2),
            '>' => (Tok::Gt, 1),
            '<' if two(b'=') => (Tok::Le, 2),
            '<' => (Tok::Lt, 1),
            _ if c.is_ascii_digit() || (c == '-' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) => {
                let mut j = i + 1;
                while j < bytes.len() && (bytes[j].is_ascii_digit() || bytes[j] == b'.') {
                    j += 1;
                }
                (Tok::Num(text[i..j].to_string()), j - i)
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i + 1;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                (Tok::Ident(text[i..j].to_string()), j - i)
            }
            _ => return Err(err(start, &format!("unexpected character `{c}`"))),
        };
        out.push((tok, start));
        i += len;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

#[derive(Clone, Debug)]
enum Node {
    Lit(Literal),
    And(Box<Sp>, Box<Sp>),
    Or(Box<Sp>, Box<Sp>),
    GOr(Box<Sp>, Box<Sp>),
    Implies(Box<Sp>, Box<Sp>),
    Cf(Intervention, Box<Sp>),
    Prob(ProbAtom),
    Pco(PcoFormula),
}

#[derive(Clone, Debug)]
struct Sp {
    node: Node,
    pos: usize,
}

fn is_co(n: &Sp) -> bool {
    match &n.node {
        Node::Lit(_) => true,
        Node::And(a, b) | Node::Or(a, b) | Node::Implies(a, b) => is_co(a) && is_co(b),
        Node::Cf(_, a) => is_co(a),
        Node::GOr(..) | Node::Prob(_) | Node::Pco(_) => false,
    }
}

fn to_co(n: &Sp) -> Result<CoFormula> {
    Ok(match &n.node {
        Node::Lit(l) => CoFormula::Lit(*l),
        Node::And(a, b) => CoFormula::and(to_co(a)?, to_co(b)?),
        Node::Or(a, b) => CoFormula::or(to_co(a)?, to_co(b)?),
        Node::Implies(a, b) => CoFormula::implies(to_co(a)?, to_co(b)?),
        Node::Cf(iv, a) => CoFormula::cf(iv.clone(), to_co(a)?),
        Node::GOr(..) | Node::Prob(_) | Node::Pco(_) => {
            return Err(Error::Parse {
                pos: n.pos,
                msg: "two-level violation: a probabilistic formula appears where a CO formula is required".into(),
            })
        }
    })
}

fn to_pco(n: &Sp) -> Result<PcoFormula> {
    Ok(match &n.node {
        Node::Lit(l) => PcoFormula::Lit(*l),
        Node::And(a, b) => PcoFormula::and(to_pco(a)?, to_pco(b)?),
        Node::GOr(a, b) => PcoFormula::gor(to_pco(a)?, to_pco(b)?),
        Node::Or(..) => {
            return Err(Error::Parse {
                pos: n.pos,
                msg: "tensor `or` joins probabilistic formulas; use `gor` or move it inside `Pr(...)`".into(),
            })
        }
        Node::Implies(a, b) => PcoFormula::implies(to_co(a)?, to_pco(b)?),
        Node::Cf(iv, a) => PcoFormula::cf(iv.clone(), to_pco(a)?),
        Node::Prob(p) => PcoFormula::Prob(p.clone()),
        Node::Pco(p) => p.clone(),
    })
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    i: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> usize {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn formula(&mut self) -> Result<Sp> {
        let pos = self.pos();
        let left = self.disj()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.formula()?;
            return Ok(Sp { node: Node::Implies(Box::new(left), Box::new(right)), pos });
        }
        Ok(left)
    }

    fn disj(&mut self) -> Result<Sp> {
        let pos = self.pos();
        let mut left = self.conj()?;
        loop {
            let global = if self.is_kw("or") {
                false
            } else if self.is_kw("gor") {
                true
            } else {
                return Ok(left);
            };
            self.bump();
            let right = self.conj()?;
            let node = if global {
                Node::GOr(Box::new(left), Box::new(right))
            } else {
                Node::Or(Box::new(left), Box::new(right))
            };
            left = Sp { node, pos };
        }
    }

    fn conj(&mut self) -> Result<Sp> {
        let pos = self.pos();
        let mut left = self.prefix()?;
        while self.is_kw("and") {
            self.bump();
            let right = self.prefix()?;
            left = Sp { node: Node::And(Box::new(left), Box::new(right)), pos };
        }
        Ok(left)
    }

    fn prefix(&mut self) -> Result<Sp> {
        let pos = self.pos();
        if *self.peek() == Tok::LBrack {
            self.bump();
            let mut iv = Vec::new();
            if *self.peek() != Tok::RBrack {
                loop {
                    let (v, _) = self.var()?;
                    self.expect(Tok::Assign, "`:=`")?;
                    let x = self.value(v)?;
                    iv.push((v, x));
                    if *self.peek() == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
            self.expect(Tok::RBrack, "`]`")?;
            let body = self.prefix()?;
            return Ok(Sp { node: Node::Cf(iv, Box::new(body)), pos });
        }
        self.primary()
    }

    fn var(&mut self) -> Result<(VarId, usize)> {
        let pos = self.pos();
        match self.bump() {
            Tok::Ident(name) => match self.sig.var_index(&name) {
                Some(v) => Ok((v, pos)),
                None => Err(Error::UnknownVariable(name)),
            },
            _ => Err(Error::Parse { pos, msg: "expected a variable".into() }),
        }
    }

    fn value(&mut self, v: VarId) -> Result<usize> {
        let pos = self.pos();
        let text = match self.bump() {
            Tok::Ident(s) | Tok::Num(s) => s,
            _ => return Err(Error::Parse { pos, msg: "expected a value".into() }),
        };
        self.sig.value_index_text(v, &text).ok_or_else(|| Error::UnknownValue {
            var: self.sig.var_name(v).to_string(),
            value: text,
        })
    }

    fn vars(&mut self) -> Result<Vec<VarId>> {
        let mut out = vec![self.var()?.0];
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.var()?.0);
        }
        Ok(out)
    }

    fn primary(&mut self) -> Result<Sp> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) if *self.peek_at(1) == Tok::LParen && name == "Pr" => {
                let atom = self.prob_atom()?;
                Ok(Sp { node: Node::Prob(atom), pos })
            }
            Tok::Ident(name) if *self.peek_at(1) == Tok::LParen && ["dep", "indep", "mi"].contains(&name.as_str()) => {
                self.bump();
                self.bump();
                let xs = self.vars()?;
                self.expect(Tok::Semi, "`;`")?;
                let ys = self.vars()?;
                let zs = if *self.peek() == Tok::Bar {
                    self.bump();
                    Some(self.vars()?)
                } else {
                    None
                };
                self.expect(Tok::RParen, "`)`")?;
                let kind = match (name.as_str(), zs.is_some()) {
                    ("dep", false) => AtomKind::Dep,
                    ("mi", false) => AtomKind::Mi,
                    ("indep", false) => AtomKind::Indep,
                    ("indep", true) => AtomKind::CondIndep,
                    _ => return Err(Error::Parse { pos, msg: format!("`{name}` takes no condition") }),
                };
                let f = expand_atom(kind, &xs, &ys, zs.as_deref().unwrap_or(&[]), self.sig)?;
                Ok(Sp { node: Node::Pco(f), pos })
            }
            Tok::Ident(_) if *self.peek_at(1) == Tok::Tilde => {
                let (x, _) = self.var()?;
                self.bump();
                let (y, _) = self.var()?;
                let f = expand_atom(AtomKind::Mi, &[x], &[y], &[], self.sig)?;
                Ok(Sp { node: Node::Pco(f), pos })
            }
            Tok::Ident(_) => {
                let (v, _) = self.var()?;
                let negated = match self.bump() {
                    Tok::Eq => false,
                    Tok::Ne => true,
                    _ => return Err(Error::Parse { pos, msg: "expected `=` or `!=` after variable".into() }),
                };
                let val = self.value(v)?;
                Ok(Sp { node: Node::Lit(Literal { var: v, val, negated }), pos })
            }
            _ => self.error("expected a formula"),
        }
    }

    fn prob_term(&mut self) -> Result<ProbTerm> {
        self.bump();
        self.expect(Tok::LParen, "`(`")?;
        let arg = self.formula()?;
        let given = if *self.peek() == Tok::Bar {
            self.bump();
            Some(self.formula()?)
        } else {
            None
        };
        self.expect(Tok::RParen, "`)`")?;
        Ok(ProbTerm { arg: to_co(&arg)?, given: given.as_ref().map(to_co).transpose()? })
    }

    fn prob_atom(&mut self) -> Result<ProbAtom> {
        let lhs = self.prob_term()?;
        let cmp = match self.bump() {
            Tok::Ge => Cmp::Ge,
            Tok::Gt => Cmp::Gt,
            Tok::Le => Cmp::Le,
            Tok::Lt => Cmp::Lt,
            Tok::EqEq | Tok::Eq => Cmp::Eq,
            Tok::Ne => Cmp::Ne,
            _ => return Err(Error::Parse { pos: self.toks[self.i - 1].1, msg: "expected a comparison".into() }),
        };
        let rhs = if self.is_kw("Pr") && *self.peek_at(1) == Tok::LParen {
            Bound::Term(self.prob_term()?)
        } else {
            let pos = self.pos();
            let r = self.number()?;
            if r < Rational::zero() || r > Rational::one() {
                return Err(Error::Parse { pos, msg: format!("constant {r} is outside [0,1]") });
            }
            Bound::Const(r)
        };
        Ok(ProbAtom { lhs, cmp, rhs })
    }

    fn number(&mut self) -> Result<Rational> {
        let pos = self.pos();
        let first = match self.bump() {
            Tok::Num(s) => s,
            _ => return Err(Error::Parse { pos, msg: "expected a number".into() }),
        };
        let num = parse_decimal(&first).ok_or_else(|| Error::Parse { pos, msg: format!("bad number `{first}`") })?;
        if *self.peek() == Tok::Slash {
            self.bump();
            let dpos = self.pos();
            let den = match self.bump() {
                Tok::Num(s) => parse_decimal(&s),
                _ => None,
            };
            match den {
                Some(d) if !d.is_zero() => Ok(num / d),
                _ => Err(Error::Parse { pos: dpos, msg: "bad denominator".into() }),
            }
        } else {
            Ok(num)
        }
    }
}

/// Exact value of a decimal literal such as `3`, `-2` or `0.125`.
pub fn parse_decimal(s: &str) -> Option<Rational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int.is_empty() || frac.contains('.') {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().ok()?;
    let d = num_traits::pow(BigInt::from(10), frac.len());
    let r = Rational::new(n, d);
    Some(if neg { -r } else { r })
}

fn parse_node(text: &str, sig: &Signature) -> Result<Sp> {
    let mut p = Parser { toks: lex(text)?, i: 0, sig };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.error("unexpected trailing input");
    }
    Ok(f)
}

/// Parses and binds a formula. Pure CO text yields [`Formula::Co`].
pub fn parse(text: &str, sig: &Signature) -> Result<Formula> {
    let n = parse_node(text, sig)?;
    if is_co(&n) {
        Ok(Formula::Co(to_co(&n)?))
    } else {
        Ok(Formula::Pco(to_pco(&n)?))
    }
}

pub fn parse_co(text: &str, sig: &Signature) -> Result<CoFormula> {
    to_co(&parse_node(text, sig)?)
}

pub fn parse_pco(text: &str, sig: &Signature) -> Result<PcoFormula> {
    to_pco(&parse_node(text, sig)?)
}

/// Guesses a signature from the literals and interventions in `text`: variables in
/// order of first use. A variable written only with integers ranges over every integer
/// from `min(0, smallest)` to `max(1, largest)`; otherwise over the values written for it.
pub fn infer_signature(text: &str) -> Result<Signature> {
    let toks = lex(text)?;
    let mut vars: Vec<(String, Vec<Value>)> = Vec::new();
    for w in toks.windows(3) {
        let (Tok::Ident(name), op, val) = (&w[0].0, &w[1].0, &w[2].0) else { continue };
        if !matches!(op, Tok::Eq | Tok::Ne | Tok::Assign) {
            continue;
        }
        let value = match val {
            Tok::Num(s) => Value::Int(s.parse().map_err(|_| Error::Parse {
                pos: w[2].1,
                msg: format!("value `{s}` is not an integer"),
            })?),
            Tok::Ident(s) => Value::Str(s.clone()),
            _ => continue,
        };
        match vars.iter_mut().find(|(n, _)| n == name) {
            Some((_, range)) => {
                if !range.contains(&value) {
                    range.push(value);
                }
            }
            None => vars.push((name.clone(), vec![value])),
        }
    }
    if vars.is_empty() {
        return Err(Error::Signature("no literals to infer a signature from".into()));
    }
    for (_, range) in &mut vars {
        let ints: Vec<i64> = range.iter().filter_map(|v| if let Value::Int(i) = v { Some(*i) } else { None }).collect();
        if ints.len() == range.len() {
            let lo = ints.iter().copied().min().unwrap_or(0).min(0);
            let hi = ints.iter().copied().max().unwrap_or(1).max(1);
            *range = (lo..=hi).map(Value::Int).collect();
        }
    }
    Signature::new(vars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::printer::print;

    fn sig() -> Signature {
        Signature::int_ranges(&[("X", &[0, 1, 2]), ("Y", &[1, 2, 3]), ("Z", &[1, 2, 3, 4, 5])]).unwrap()
    }

    #[test]
    fn counterfactual_over_atom() {
        let f = parse("[Y:=1] Pr(Z=3) >= 1/2", &sig()).unwrap();
        let Formula::Pco(PcoFormula::Cf(iv, body)) = f else { panic!() };
        assert_eq!(iv, vec![(1, 0)]);
        assert!(matches!(*body, PcoFormula::Prob(ProbAtom { cmp: Cmp::Ge, .. })));
    }

    #[test]
    fn implication_with_comparison() {
        let s = Signature::binary(&["X", "Y"]).unwrap();
        let f = parse("X=1 => Pr(Y=1) >= Pr(Y=0)", &s).unwrap();
        assert!(matches!(f, Formula::Pco(PcoFormula::Implies(_, _))));
    }

    #[test]
    fn nested_probability_is_rejected() {
        let s = Signature::binary(&["X"]).unwrap();
        let err = parse("Pr(Pr(X=1)>=1)>=1", &s).unwrap_err();
        assert!(matches!(err, Error::Parse { ref msg, .. } if msg.contains("two-level")));
    }

    #[test]
    fn constants_outside_unit_interval_are_rejected() {
        let s = Signature::binary(&["X"]).unwrap();
        assert!(parse("Pr(X=1) >= 3/2", &s).is_err());
        assert!(parse("Pr(X=1) >= 0.25", &s).is_ok());
    }

    #[test]
    fn unknown_names_are_reported() {
        let s = Signature::binary(&["X"]).unwrap();
        assert_eq!(parse("W=1", &s).unwrap_err(), Error::UnknownVariable("W".into()));
        assert!(matches!(parse("X=7", &s).unwrap_err(), Error::UnknownValue { .. }));
    }

    #[test]
    fn precedence_and_associativity() {
        let s = Signature::binary(&["A", "B", "C"]).unwrap();
        let f = parse("A=1 and B=1 or C=1 => A=0 => B=0", &s).unwrap();
        let Formula::Co(CoFormula::Implies(l, r)) = f else { panic!() };
        assert!(matches!(*l, CoFormula::Or(..)));
        assert!(matches!(*r, CoFormula::Implies(..)));
    }

    #[test]
    fn tensor_between_probabilities_is_rejected() {
        let s = Signature::binary(&["X"]).unwrap();
        assert!(parse("Pr(X=1) >= 1/2 or Pr(X=0) >= 1/2", &s).is_err());
        assert!(parse("Pr(X=1) >= 1/2 gor Pr(X=0) >= 1/2", &s).is_ok());
    }

    #[test]
    fn prints_back_canonically() {
        let s = Signature::binary(&["A", "B", "C", "X", "Y", "Z"]).unwrap();
        for text in [
            "(A=1 and B=1) => Pr(C=1) >= 1/2",
            "A=1 => (B=1 => Pr(C=1) >= 1/2)",
            "Pr((X!=1 and Y!=1)) >= 3/4",
            "[X:=1]([X:=0,Z:=1] Pr(Y=1) > 0)",
            "Pr([X:=1] Y=1) >= 1/2 gor Pr([X:=1] Y=0) >= 1/2",
            "Pr(X=1 | Y=1) >= Pr(X=1 | Y=0)",
            "X=0 or X!=0",
            "Pr(X=1) == 1/3 and Pr(Y=0) != Pr(Z=1)",
        ] {
            let f = parse(text, &s).unwrap();
            assert_eq!(print(&f, &s), text);
            assert_eq!(parse(&print(&f, &s), &s).unwrap(), f);
        }
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_decimal("0.125").unwrap(), Rational::new(1.into(), 8.into()));
        assert_eq!(parse_decimal("-2").unwrap(), Rational::from_integer((-2).into()));
        assert!(parse_decimal("1.2.3").is_none());
    }

    #[test]
    fn infers_signature_from_text() {
        let s = infer_signature("[Y:=1] Pr(Z=3 | X=a) >= Pr(Y=2)").unwrap();
        assert_eq!(s.var_names(), &["Y".to_string(), "Z".into(), "X".into()]);
        assert_eq!(s.range_len(0), 3);
        assert_eq!(s.range_len(1), 4);
        assert_eq!(s.range_len(2), 1);
        assert_eq!(infer_signature("X=1").unwrap().range_len(0), 2);
    }
}
