//! Free magma terms, their K-linear combinations, and the equation DSL.
//!
//! An equation is a linear combination of bracketed binary products over a
//! finite variable set. Products are strictly binary and nonassociative, so
//! the DSL requires explicit `*` and parentheses for every nested product:
//! `(x*x)*y - x*(x*y)`. Coefficients are integer or rational literals and
//! are mapped into the session field.

use crate::scalars::{FieldSpec, Scalar};
use std::collections::BTreeMap;
use std::cmp::Ordering;
use std::fmt;
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquationError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("equation is identically zero")]
    EmptyEquation,
    #[error("unknown variety `{0}`")]
    UnknownVariety(String),
}

/// A bracketed product tree: a leaf is a variable (by index into the
/// equation's sorted variable list), a node is a binary product.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MagmaTerm {
    Leaf(u8),
    Node(Rc<MagmaTerm>, Rc<MagmaTerm>),
}

impl MagmaTerm {
    pub fn leaf(v: u8) -> Rc<MagmaTerm> {
        Rc::new(MagmaTerm::Leaf(v))
    }

    pub fn node(l: Rc<MagmaTerm>, r: Rc<MagmaTerm>) -> Rc<MagmaTerm> {
        Rc::new(MagmaTerm::Node(l, r))
    }

    /// Number of leaves.
    pub fn weight(&self) -> u32 {
        match self {
            MagmaTerm::Leaf(_) => 1,
            MagmaTerm::Node(l, r) => l.weight() + r.weight(),
        }
    }

    /// Recursively swaps every product: `Node(l, r) -> Node(rev r, rev l)`.
    pub fn reverse(&self) -> Rc<MagmaTerm> {
        match self {
            MagmaTerm::Leaf(v) => MagmaTerm::leaf(*v),
            MagmaTerm::Node(l, r) => MagmaTerm::node(r.reverse(), l.reverse()),
        }
    }

    /// Canonical order: by weight, then leaf < node, then recursively left
    /// and right. Leaf indices follow variable-name order by construction.
    fn cmp_structural(&self, other: &MagmaTerm) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| match (self, other) {
                (MagmaTerm::Leaf(a), MagmaTerm::Leaf(b)) => a.cmp(b),
                (MagmaTerm::Leaf(_), MagmaTerm::Node(_, _)) => Ordering::Less,
                (MagmaTerm::Node(_, _), MagmaTerm::Leaf(_)) => Ordering::Greater,
                (MagmaTerm::Node(a, b), MagmaTerm::Node(c, d)) => {
                    a.cmp_structural(c).then_with(|| b.cmp_structural(d))
                }
            })
    }
}

impl PartialOrd for MagmaTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MagmaTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_structural(other)
    }
}

/// A K-linear combination of magma terms; no zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MagmaPolynomial {
    pub field: FieldSpec,
    terms: BTreeMap<MagmaTerm, Scalar>,
}

impl MagmaPolynomial {
    pub fn zero(field: FieldSpec) -> Self {
        MagmaPolynomial { field, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MagmaTerm, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, t: MagmaTerm, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &MagmaPolynomial, c: &Scalar) {
        for (t, s) in &other.terms {
            self.add_term(t.clone(), &s.mul(c));
        }
    }

    /// Bilinear product of polynomials (term trees are joined by `Node`).
    pub fn product(&self, other: &MagmaPolynomial) -> MagmaPolynomial {
        let mut out = MagmaPolynomial::zero(self.field);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(
                    MagmaTerm::Node(Rc::new(a.clone()), Rc::new(b.clone())),
                    &ca.mul(cb),
                );
            }
        }
        out
    }

    /// The reversal involution applied termwise.
    pub fn reverse(&self) -> MagmaPolynomial {
        let mut out = MagmaPolynomial::zero(self.field);
        for (t, c) in &self.terms {
            out.add_term(t.reverse().as_ref().clone(), c);
        }
        out
    }

    /// Largest number of leaves over the terms.
    pub fn max_weight(&self) -> u32 {
        self.terms.keys().map(|t| t.weight()).max().unwrap_or(0)
    }
}

/// A named equation over a sorted variable set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub label: String,
    pub vars: Vec<String>,
    pub poly: MagmaPolynomial,
}

impl Equation {
    /// Maximum degree of any single variable in any term.
    pub fn max_variable_degree(&self) -> u32 {
        fn count(t: &MagmaTerm, v: u8) -> u32 {
            match t {
                MagmaTerm::Leaf(w) => u32::from(*w == v),
                MagmaTerm::Node(l, r) => count(l, v) + count(r, v),
            }
        }
        let mut best = 0;
        for (t, _) in self.poly.terms() {
            for v in 0..self.vars.len() as u8 {
                best = best.max(count(t, v));
            }
        }
        best
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Star,
    Plus,
    Minus,
    Slash,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, EquationError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let v: i64 = text[start..i].parse().map_err(|_| EquationError::Syntax {
                    pos: start,
                    message: "integer literal out of range".into(),
                })?;
                out.push((start, Tok::Int(v)));
            }
            _ if c.is_ascii_alphabetic() => {
                let start = i;
                i += 1;
                while i < bytes.len() && (bytes[i] as char).is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => {
                return Err(EquationError::Syntax {
                    pos: i,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
    vars: &'a [String],
    field: FieldSpec,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t);
        self.pos += 1;
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, EquationError> {
        Err(EquationError::Syntax { pos: self.here(), message: message.into() })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), EquationError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn var_id(&self, name: &str) -> u8 {
        self.vars.iter().position(|v| v == name).unwrap() as u8
    }

    // factor := var | "(" product ")"
    fn factor(&mut self) -> Result<Rc<MagmaTerm>, EquationError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(MagmaTerm::leaf(self.var_id(&name)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let l = self.factor()?;
                self.expect(Tok::Star, "`*` inside parenthesized product")?;
                let r = self.factor()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(MagmaTerm::node(l, r))
            }
            Some(Tok::Int(_)) => self.err("number not allowed as a term"),
            _ => self.err("expected a variable or `(`"),
        }
    }

    // signed_term := [coeff "*"] factor ["*" factor]
    // (a top-level product may appear unparenthesized)
    fn signed_term(&mut self) -> Result<(Rc<MagmaTerm>, Scalar), EquationError> {
        let coeff = if let Some(Tok::Int(n)) = self.peek().cloned() {
            self.pos += 1;
            let c = if self.peek() == Some(&Tok::Slash) {
                self.pos += 1;
                match self.bump().cloned() {
                    Some(Tok::Int(d)) => {
                        self.field.from_fraction(n, d).map_err(|_| EquationError::Syntax {
                            pos: self.here(),
                            message: "bad rational coefficient".into(),
                        })?
                    }
                    _ => return self.err("expected denominator"),
                }
            } else {
                self.field.from_i64(n)
            };
            self.expect(Tok::Star, "`*` after coefficient")?;
            c
        } else {
            self.field.one()
        };
        let first = self.factor()?;
        let term = if self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let second = self.factor()?;
            MagmaTerm::node(first, second)
        } else {
            first
        };
        Ok((term, coeff))
    }
}

/// Parses one equation. The returned variable set is sorted by name, and the
/// term leaves refer to positions in it.
pub fn parse_equation(text: &str, field: FieldSpec) -> Result<Equation, EquationError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(EquationError::Syntax { pos: 0, message: "empty input".into() });
    }
    let mut vars: Vec<String> = toks
        .iter()
        .filter_map(|(_, t)| match t {
            Tok::Ident(s) => Some(s.clone()),
            _ => None,
        })
        .collect();
    vars.sort();
    vars.dedup();

    let mut p = Parser { toks: &toks, pos: 0, end: text.len(), vars: &vars, field };
    let mut poly = MagmaPolynomial::zero(field);
    let mut sign = field.one();
    if p.peek() == Some(&Tok::Minus) {
        p.pos += 1;
        sign = sign.neg();
    } else if p.peek() == Some(&Tok::Plus) {
        p.pos += 1;
    }
    loop {
        let (term, coeff) = p.signed_term()?;
        poly.add_term(term.as_ref().clone(), &coeff.mul(&sign));
        match p.peek() {
            None => break,
            Some(Tok::Plus) => {
                p.pos += 1;
                sign = field.one();
            }
            Some(Tok::Minus) => {
                p.pos += 1;
                sign = field.one().neg();
            }
            _ => return p.err("expected `+`, `-`, or end of equation"),
        }
    }
    if poly.is_zero() {
        return Err(EquationError::EmptyEquation);
    }
    Ok(Equation { label: String::new(), vars, poly })
}

// ---------------------------------------------------------------------------
// Printing

fn format_factor(t: &MagmaTerm, vars: &[String], out: &mut String) {
    match t {
        MagmaTerm::Leaf(v) => out.push_str(&vars[*v as usize]),
        MagmaTerm::Node(l, r) => {
            out.push('(');
            format_factor(l, vars, out);
            out.push('*');
            format_factor(r, vars, out);
            out.push(')');
        }
    }
}

/// Formats a term as DSL text, without redundant outer parentheses.
pub fn format_term(t: &MagmaTerm, vars: &[String]) -> String {
    let mut s = String::new();
    match t {
        MagmaTerm::Leaf(_) => format_factor(t, vars, &mut s),
        MagmaTerm::Node(l, r) => {
            format_factor(l, vars, &mut s);
            s.push('*');
            format_factor(r, vars, &mut s);
        }
    }
    s
}

/// Canonical DSL text of a polynomial: terms in descending canonical order.
pub fn format_polynomial(poly: &MagmaPolynomial, vars: &[String]) -> String {
    use crate::scalars::is_display_negative;
    if poly.is_zero() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (idx, (t, c)) in poly.terms().rev().enumerate() {
        let neg = is_display_negative(c);
        let abs = if neg { c.neg() } else { c.clone() };
        if idx == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let body = format_term(t, vars);
        if abs.is_one() {
            s.push_str(&body);
        } else {
            // a product term needs parentheses after an explicit coefficient
            match t {
                MagmaTerm::Leaf(_) => s.push_str(&format!("{abs}*{body}")),
                MagmaTerm::Node(_, _) => s.push_str(&format!("{abs}*({body})")),
            }
        }
    }
    s
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_polynomial(&self.poly, &self.vars))
    }
}

// ---------------------------------------------------------------------------
// Built-in varieties

/// Names resolvable by the CLI, with their defining equations.
pub const BUILTIN_VARIETIES: &[&str] = &[
    "mag", "triv", "ass", "com", "comass", "lie", "leib", "lev", "alt", "leftalt", "cube",
];

/// Resolves a built-in variety name to its list of defining equations.
pub fn builtin_variety(name: &str, field: FieldSpec) -> Result<Vec<Equation>, EquationError> {
    let eqs: &[&str] = match name {
        "mag" => &[],
        "triv" => &["x*y"],
        "ass" => &["(x*y)*z - x*(y*z)"],
        "com" => &["x*y - y*x"],
        "comass" => &["x*y - y*x", "(x*y)*z - x*(y*z)"],
        "lie" => &["x*x", "(x*y)*z + (y*z)*x + (z*x)*y"],
        "leib" => &["(x*y)*z - x*(y*z) - (x*z)*y"],
        "lev" => &["x*y - y*x", "(w*x)*(y*z) - (w*y)*(x*z)"],
        "alt" => &["(x*x)*y - x*(x*y)", "(x*y)*y - x*(y*y)"],
        "leftalt" => &["(x*x)*y - x*(x*y)"],
        "cube" => &["(x*x)*x"],
        _ => return Err(EquationError::UnknownVariety(name.to_string())),
    };
    let mut out = Vec::new();
    for (i, text) in eqs.iter().enumerate() {
        let mut eq = parse_equation(text, field).expect("builtin equation parses");
        eq.label = if eqs.len() == 1 {
            name.to_string()
        } else {
            format!("{name}.{}", i + 1)
        };
        out.push(eq);
    }
    Ok(out)
}

/// Parses a variety file: one equation per line, `#` starts a comment.
pub fn parse_variety_file(text: &str, field: FieldSpec) -> Result<Vec<Equation>, EquationError> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut eq = parse_equation(line, field)?;
        eq.label = format!("eq{}", out.len() + 1);
        out.push(eq);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn parse_left_alternative_law() {
        let eq = parse_equation("(x*x)*y - x*(x*y)", Q).unwrap();
        assert_eq!(eq.vars, vec!["x", "y"]);
        assert_eq!(eq.poly.num_terms(), 2);
        assert_eq!(eq.to_string(), "(x*x)*y - x*(x*y)");
    }

    #[test]
    fn parse_commutativity() {
        let eq = parse_equation("x*y - y*x", Q).unwrap();
        assert_eq!(eq.vars, vec!["x", "y"]);
        // canonical print puts the greater term (y*x) first
        assert_eq!(eq.to_string(), "-y*x + x*y");
        let back = parse_equation(&eq.to_string(), Q).unwrap();
        assert_eq!(back.poly, eq.poly);
    }

    #[test]
    fn self_cancellation_is_rejected() {
        let err = parse_equation("((x*y)*z) - ((x*y)*z)", Q).unwrap_err();
        assert_eq!(err, EquationError::EmptyEquation);
    }

    #[test]
    fn syntax_error_carries_position() {
        match parse_equation("x*y - y*", Q).unwrap_err() {
            EquationError::Syntax { pos, .. } => assert_eq!(pos, 8),
            e => panic!("unexpected {e:?}"),
        }
        assert!(parse_equation("x*y*z", Q).is_err(), "ternary product must be bracketed");
        assert!(parse_equation("3", Q).is_err());
    }

    #[test]
    fn rational_coefficients() {
        let eq = parse_equation("1/2*(x*y) + 3*x", Q).unwrap();
        let printed = eq.to_string();
        let back = parse_equation(&printed, Q).unwrap();
        assert_eq!(back.poly, eq.poly);
    }

    #[test]
    fn coefficients_reduce_into_prime_field() {
        let f2 = FieldSpec::prime_field(2).unwrap();
        // 2*(x*y) vanishes over F2, leaving x alone; as an equation it is fine
        let eq = parse_equation("2*(x*y) + x", f2).unwrap();
        assert_eq!(eq.poly.num_terms(), 1);
        // and an equation that cancels entirely is rejected
        assert_eq!(
            parse_equation("2*(x*y)", f2).unwrap_err(),
            EquationError::EmptyEquation
        );
    }

    #[test]
    fn weight_of_terms() {
        let eq = parse_equation("(x*y)*z", Q).unwrap();
        let (t, _) = eq.poly.terms().next().unwrap();
        assert_eq!(t.weight(), 3);
        let x = parse_equation("x", Q).unwrap();
        assert_eq!(x.poly.terms().next().unwrap().0.weight(), 1);
        // left-bracketed fifth power
        let p5 = parse_equation("(((x*x)*x)*x)*x", Q).unwrap();
        assert_eq!(p5.poly.terms().next().unwrap().0.weight(), 5);
    }

    #[test]
    fn reversal_examples() {
        // (xy)z -> z(yx)
        let eq = parse_equation("(x*y)*z", Q).unwrap();
        let rev = eq.poly.reverse();
        let expect = parse_equation("z*(y*x)", Q).unwrap();
        assert_eq!(rev, expect.poly);

        // left alternative law -> right alternative law in renamed variables
        let left = parse_equation("(x*x)*y - x*(x*y)", Q).unwrap();
        let rev = left.poly.reverse();
        let right_renamed = parse_equation("y*(x*x) - (y*x)*x", Q).unwrap();
        assert_eq!(rev, right_renamed.poly);

        // commutativity is antisymmetric under reversal
        let com = parse_equation("x*y - y*x", Q).unwrap();
        let mut neg = MagmaPolynomial::zero(Q);
        neg.add_assign_scaled(&com.poly, &Q.from_i64(-1));
        assert_eq!(com.poly.reverse(), neg);
    }

    #[test]
    fn reverse_is_an_involution() {
        for text in ["(x*y)*z - x*(y*z)", "(w*x)*(y*z) - (w*y)*(x*z)", "(x*x)*x + 2*(x*x)"] {
            let eq = parse_equation(text, Q).unwrap();
            assert_eq!(eq.poly.reverse().reverse(), eq.poly);
        }
    }

    #[test]
    fn builtin_names_resolve() {
        for name in BUILTIN_VARIETIES {
            let eqs = builtin_variety(name, Q).unwrap();
            if *name == "mag" {
                assert!(eqs.is_empty());
            } else {
                assert!(!eqs.is_empty());
            }
        }
        assert!(builtin_variety("nope", Q).is_err());
    }
}
