use std::fmt::{self, Write};

use crate::model::Signature;
use crate::syntax::ast::{Bound, CoFormula, Formula, Intervention, Literal, PcoFormula, ProbAtom, ProbTerm};
use crate::Rational;

fn lit(out: &mut String, sig: &Signature, l: &Literal) {
    let op = if l.negated { "!=" } else { "=" };
    let _ = write!(out, "{}{}{}", sig.var_name(l.var), op, sig.value(l.var, l.val));
}

fn intervention(out: &mut String, sig: &Signature, iv: &Intervention) {
    out.push('[');
    for (i, &(v, x)) in iv.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{}:={}", sig.var_name(v), sig.value(v, x));
    }
    out.push(']');
}

pub fn rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn co_is_binary(a: &CoFormula) -> bool {
    matches!(a, CoFormula::And(..) | CoFormula::Or(..) | CoFormula::Implies(..))
}

/// Prints `a` as an operand: binary nodes get parentheses.
fn co_operand(out: &mut String, sig: &Signature, a: &CoFormula) {
    if co_is_binary(a) {
        out.push('(');
        co(out, sig, a);
        out.push(')');
    } else {
        co(out, sig, a);
    }
}

fn co(out: &mut String, sig: &Signature, a: &CoFormula) {
    match a {
        CoFormula::Lit(l) => lit(out, sig, l),
        CoFormula::And(x, y) => {
            if matches!(**x, CoFormula::And(..)) {
                co(out, sig, x);
            } else {
                co_operand(out, sig, x);
            }
            out.push_str(" and ");
            co_operand(out, sig, y);
        }
        CoFormula::Or(x, y) => {
            if matches!(**x, CoFormula::Or(..)) {
                co(out, sig, x);
            } else {
                co_operand(out, sig, x);
            }
            out.push_str(" or ");
            co_operand(out, sig, y);
        }
        CoFormula::Implies(x, y) => {
            co_operand(out, sig, x);
            out.push_str(" => ");
            co_operand(out, sig, y);
        }
        CoFormula::Cf(iv, body) => {
            intervention(out, sig, iv);
            if matches!(**body, CoFormula::Lit(_)) {
                out.push(' ');
                co(out, sig, body);
            } else {
                out.push('(');
                co(out, sig, body);
                out.push(')');
            }
        }
    }
}

fn term(out: &mut String, sig: &Signature, t: &ProbTerm) {
    out.push_str("Pr(");
    co_operand(out, sig, &t.arg);
    if let Some(g) = &t.given {
        out.push_str(" | ");
        co_operand(out, sig, g);
    }
    out.push(')');
}

fn atom(out: &mut String, sig: &Signature, a: &ProbAtom) {
    term(out, sig, &a.lhs);
    let _ = write!(out, " {} ", a.cmp.symbol());
    match &a.rhs {
        Bound::Const(r) => out.push_str(&rational(r)),
        Bound::Term(t) => term(out, sig, t),
    }
}

fn pco_is_binary(f: &PcoFormula) -> bool {
    matches!(f, PcoFormula::And(..) | PcoFormula::GOr(..) | PcoFormula::Implies(..))
}

fn pco_operand(out: &mut String, sig: &Signature, f: &PcoFormula) {
    if pco_is_binary(f) {
        out.push('(');
        pco(out, sig, f);
        out.push(')');
    } else {
        pco(out, sig, f);
    }
}

fn pco(out: &mut String, sig: &Signature, f: &PcoFormula) {
    match f {
        PcoFormula::Lit(l) => lit(out, sig, l),
        PcoFormula::Prob(a) => atom(out, sig, a),
        PcoFormula::And(x, y) => {
            if matches!(**x, PcoFormula::And(..)) {
                pco(out, sig, x);
            } else {
                pco_operand(out, sig, x);
            }
            out.push_str(" and ");
            pco_operand(out, sig, y);
        }
        PcoFormula::GOr(x, y) => {
            if matches!(**x, PcoFormula::GOr(..)) {
                pco(out, sig, x);
            } else {
                pco_operand(out, sig, x);
            }
            out.push_str(" gor ");
            pco_operand(out, sig, y);
        }
        PcoFormula::Implies(x, y) => {
            co_operand(out, sig, x);
            out.push_str(" => ");
            pco_operand(out, sig, y);
        }
        PcoFormula::Cf(iv, body) => {
            intervention(out, sig, iv);
            if matches!(**body, PcoFormula::Lit(_) | PcoFormula::Prob(_)) {
                out.push(' ');
                pco(out, sig, body);
            } else {
                out.push('(');
                pco(out, sig, body);
                out.push(')');
            }
        }
    }
}

pub fn print_co(a: &CoFormula, sig: &Signature) -> String {
    let mut out = String::new();
    co(&mut out, sig, a);
    out
}

pub fn print_pco(f: &PcoFormula, sig: &Signature) -> String {
    let mut out = String::new();
    pco(&mut out, sig, f);
    out
}

/// Canonical text of a formula.
pub fn print(f: &Formula, sig: &Signature) -> String {
    match f {
        Formula::Co(a) => print_co(a, sig),
        Formula::Pco(p) => print_pco(p, sig),
    }
}

/// [`fmt::Display`] adapter pairing a formula with its signature.
pub struct Printed<'a> {
    f: &'a Formula,
    sig: &'a Signature,
}

impl Formula {
    pub fn display<'a>(&'a self, sig: &'a Signature) -> Printed<'a> {
        Printed { f: self, sig }
    }
}

impl fmt::Display for Printed<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self.f, self.sig))
    }
}
