//! Multivariate commutative polynomials in formal parameters.
//!
//! Used for generic-point expansion: substituting `x -> sum t_{x,i} e_i`
//! turns an identity check or a relation extraction into bookkeeping over
//! these polynomials. Degrees stay tiny (bounded by equation weight), so a
//! dense exponent vector keyed in a `BTreeMap` is all that is needed.

use crate::scalars::{FieldSpec, Scalar};
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector, one slot per formal parameter.
pub type ParamMonomial = Vec<u8>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamPoly {
    field: FieldSpec,
    arity: usize,
    terms: BTreeMap<ParamMonomial, Scalar>,
}

impl ParamPoly {
    pub fn zero(field: FieldSpec, arity: usize) -> Self {
        ParamPoly { field, arity, terms: BTreeMap::new() }
    }

    pub fn constant(field: FieldSpec, arity: usize, c: Scalar) -> Self {
        let mut p = Self::zero(field, arity);
        if !c.is_zero() {
            p.terms.insert(vec![0; arity], c);
        }
        p
    }

    /// The parameter `t_i` as a polynomial.
    pub fn parameter(field: FieldSpec, arity: usize, i: usize) -> Self {
        let mut exp = vec![0u8; arity];
        exp[i] = 1;
        let mut p = Self::zero(field, arity);
        p.terms.insert(exp, field.one());
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &ParamMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_assign_term(&mut self, m: ParamMonomial, c: &Scalar) {
        debug_assert_eq!(m.len(), self.arity);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
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

    pub fn add_assign_scaled(&mut self, other: &ParamPoly, c: &Scalar) {
        for (m, s) in &other.terms {
            self.add_assign_term(m.clone(), &s.mul(c));
        }
    }

    pub fn mul(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero(self.field, self.arity);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: ParamMonomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_assign_term(m, &ca.mul(cb));
            }
        }
        out
    }

    /// Evaluates at a concrete point, one scalar per parameter.
    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&point[i]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Maximum exponent of the parameter `i` across all terms.
    pub fn degree_in(&self, i: usize) -> u8 {
        self.terms.keys().map(|m| m[i]).max().unwrap_or(0)
    }
}

/// Renders an exponent vector with the given parameter names, e.g. `x1^2*y2`.
pub fn format_monomial(m: &ParamMonomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names: Vec<String> = (0..self.arity).map(|i| format!("t{i}")).collect();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{c}*{}", format_monomial(m, &names)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_multiplication() {
        let f = FieldSpec::Rationals;
        // (t0 + t1)^2 = t0^2 + 2 t0 t1 + t1^2
        let mut s = ParamPoly::parameter(f, 2, 0);
        s.add_assign_scaled(&ParamPoly::parameter(f, 2, 1), &f.one());
        let sq = s.mul(&s);
        assert_eq!(sq.coefficient(&vec![2, 0]), f.from_i64(1));
        assert_eq!(sq.coefficient(&vec![1, 1]), f.from_i64(2));
        assert_eq!(sq.coefficient(&vec![0, 2]), f.from_i64(1));
        assert_eq!(sq.evaluate(&[f.from_i64(2), f.from_i64(3)]), f.from_i64(25));
    }

    #[test]
    fn cancellation_removes_terms() {
        let f = FieldSpec::Rationals;
        let t0 = ParamPoly::parameter(f, 1, 0);
        let mut p = t0.clone();
        p.add_assign_scaled(&t0, &f.from_i64(-1));
        assert!(p.is_zero());
    }
}
