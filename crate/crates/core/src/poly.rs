//! Sparse multivariate polynomials over a ground field.
//!
//! Terms are kept in a BTreeMap keyed by the deglex order, so iteration is
//! always canonical (deglex ascending) and the first key of a nonzero
//! polynomial is its initial exponent.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed};

use crate::error::{Error, Result};
use crate::field::{FieldElem, GroundField, Rat};
use crate::monomial::{Monomial, TermOrder};

#[derive(Clone, Debug)]
pub struct Polynomial {
    field: GroundField,
    vars: Vec<String>,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl Polynomial {
    pub fn zero(field: GroundField, vars: Vec<String>) -> Self {
        Polynomial { field, vars, terms: BTreeMap::new() }
    }

    pub fn one(field: GroundField, vars: Vec<String>) -> Self {
        let c = field.one();
        Polynomial::constant(field, vars, c)
    }

    pub fn constant(field: GroundField, vars: Vec<String>, c: FieldElem) -> Self {
        let n = vars.len();
        let mut p = Polynomial::zero(field, vars);
        p.insert(Monomial::one(n), c);
        p
    }

    pub fn var(field: GroundField, vars: Vec<String>, i: usize) -> Self {
        let n = vars.len();
        let one = field.one();
        let mut p = Polynomial::zero(field, vars);
        p.insert(Monomial::var(n, i), one);
        p
    }

    pub fn var_by_name(field: GroundField, vars: Vec<String>, name: &str) -> Result<Self> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownSymbol(name.into()))?;
        Ok(Polynomial::var(field, vars, i))
    }

    pub fn field(&self) -> &GroundField {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownSymbol(name.into()))
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, FieldElem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .first_key_value()
                .map_or(false, |(m, c)| m.is_one() && self.field.is_one(c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `Some(c)` when the polynomial is a constant (including zero).
    pub fn constant_value(&self) -> Option<FieldElem> {
        match self.terms.len() {
            0 => Some(self.field.zero()),
            1 => {
                let (m, c) = self.terms.first_key_value().unwrap();
                if m.is_one() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn insert(&mut self, m: Monomial, c: FieldElem) {
        debug_assert_eq!(m.len(), self.vars.len());
        if !self.field.is_zero(&c) {
            self.terms.insert(m, c);
        }
    }

    pub fn add_term(mut self, m: Monomial, c: FieldElem) -> Self {
        match self.terms.remove(&m) {
            Some(old) => {
                let sum = self.field.add(&old, &c);
                self.insert(m, sum);
            }
            None => self.insert(m, c),
        }
        self
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_ring(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out = out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.field.clone(), self.vars.clone());
        for (m, c) in &self.terms {
            out.insert(m.clone(), self.field.neg(c));
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_ring(other);
        let mut out = Polynomial::zero(self.field.clone(), self.vars.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out = out.add_term(m1.mul(m2), self.field.mul(c1, c2));
            }
        }
        out
    }

    pub fn mul_term(&self, m: &Monomial, c: &FieldElem) -> Polynomial {
        let mut out = Polynomial::zero(self.field.clone(), self.vars.clone());
        for (m1, c1) in &self.terms {
            out.insert(m1.mul(m), self.field.mul(c1, c));
        }
        out
    }

    pub fn scale(&self, c: &FieldElem) -> Polynomial {
        let mut out = Polynomial::zero(self.field.clone(), self.vars.clone());
        for (m1, c1) in &self.terms {
            out.insert(m1.clone(), self.field.mul(c1, c));
        }
        out
    }

    pub fn scale_rat(&self, r: &Rat) -> Polynomial {
        self.scale(&FieldElem::Rat(r.clone()))
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::one(self.field.clone(), self.vars.clone());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Maximum total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Minimum total degree (the order of vanishing at the origin).
    pub fn min_degree(&self) -> Option<u32> {
        // first key is deglex-smallest, hence of minimal degree
        self.terms.first_key_value().map(|(m, _)| m.degree())
    }

    /// Deglex-smallest exponent of the support; `None` for zero.
    pub fn initial_exponent(&self) -> Option<&Monomial> {
        self.terms.first_key_value().map(|(m, _)| m)
    }

    /// Largest term with respect to the given order.
    pub fn leading_term(&self, order: &TermOrder) -> Option<(&Monomial, &FieldElem)> {
        match order {
            TermOrder::DegLex => self.terms.last_key_value(),
            _ => self.terms.iter().max_by(|(a, _), (b, _)| order.cmp(a, b)),
        }
    }

    pub fn equals(&self, other: &Polynomial) -> bool {
        self.sub(other).is_zero()
    }

    /// Partial derivative with respect to the i-th variable. Field
    /// parameters are never differentiated.
    pub fn partial(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.field.clone(), self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            let factor = self.field.from_rat(Rat::from(num::BigInt::from(e)));
            out = out.add_term(m2, self.field.mul(c, &factor));
        }
        out
    }

    pub fn eval(&self, point: &[FieldElem]) -> FieldElem {
        debug_assert_eq!(point.len(), self.vars.len());
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = self.field.mul(&t, &point[i]);
                }
            }
            acc = self.field.add(&acc, &t);
        }
        acc
    }

    /// Substitute each variable by the given image polynomial (all images in
    /// one common target ring).
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.vars.len());
        let (tf, tv) = match images.first() {
            Some(p) => (p.field.clone(), p.vars.clone()),
            None => (self.field.clone(), vec![]),
        };
        let mut out = Polynomial::zero(tf.clone(), tv.clone());
        // memoized powers per variable
        let mut pows: Vec<Vec<Polynomial>> =
            images.iter().map(|p| vec![Polynomial::one(tf.clone(), tv.clone()), p.clone()]).collect();
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(tf.clone(), tv.clone(), c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                while pows[i].len() <= e as usize {
                    let next = pows[i].last().unwrap().mul(&images[i]);
                    pows[i].push(next);
                }
                if e > 0 {
                    t = t.mul(&pows[i][e as usize]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// x_i -> x_i + a_i, moving the given point to the origin.
    pub fn translate(&self, point: &[FieldElem]) -> Polynomial {
        let images: Vec<Polynomial> = (0..self.vars.len())
            .map(|i| {
                Polynomial::var(self.field.clone(), self.vars.clone(), i).add_term(
                    Monomial::one(self.vars.len()),
                    point[i].clone(),
                )
            })
            .collect();
        self.substitute(&images)
    }

    /// Smallest exponent of variable i across the support; `None` for zero.
    pub fn var_min_exponent(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[i]).min()
    }

    /// Exact division by x_i^e; `None` when not divisible.
    pub fn div_var_pow(&self, i: usize, e: u32) -> Option<Polynomial> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if self.var_min_exponent(i)? < e {
            return None;
        }
        let mut out = Polynomial::zero(self.field.clone(), self.vars.clone());
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            m2.0[i] -= e;
            out.insert(m2, c.clone());
        }
        Some(out)
    }

    /// Coefficient of x_i^j, as a polynomial in the same ring without x_i.
    pub fn coeff_of_var_pow(&self, i: usize, j: u32) -> Polynomial {
        let mut out = Polynomial::zero(self.field.clone(), self.vars.clone());
        for (m, c) in &self.terms {
            if m.0[i] == j {
                let mut m2 = m.clone();
                m2.0[i] = 0;
                out.insert(m2, c.clone());
            }
        }
        out
    }

    pub fn max_var_exponent(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn involves_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    /// Remove a variable the polynomial does not involve.
    pub fn drop_var(&self, i: usize) -> Result<Polynomial> {
        if self.involves_var(i) {
            return Err(Error::Invalid(format!(
                "polynomial involves `{}`",
                self.vars[i]
            )));
        }
        let mut vars = self.vars.clone();
        vars.remove(i);
        let mut out = Polynomial::zero(self.field.clone(), vars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.remove(i);
            out.insert(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Re-express in a (super)ring given by `new_vars`; every variable this
    /// polynomial involves must appear there.
    pub fn reindex(&self, new_vars: &[String]) -> Result<Polynomial> {
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| new_vars.iter().position(|w| w == v))
            .collect();
        let mut out = Polynomial::zero(self.field.clone(), new_vars.to_vec());
        for (m, c) in &self.terms {
            let mut e = vec![0u32; new_vars.len()];
            for (i, &exp) in m.0.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                let j = map[i]
                    .ok_or_else(|| Error::UnknownSymbol(self.vars[i].clone()))?;
                e[j] += exp;
            }
            out.insert(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Reinterpret coefficients in another field with the same element
    /// representation (flat base extension Q -> any field, or a field whose
    /// parameters extend the current ones via the given images).
    pub fn map_coefficients(
        &self,
        target: &GroundField,
        f: &mut dyn FnMut(&FieldElem) -> Result<FieldElem>,
    ) -> Result<Polynomial> {
        let mut out = Polynomial::zero(target.clone(), self.vars.clone());
        for (m, c) in &self.terms {
            let c2 = f(c)?;
            if !target.is_zero(&c2) {
                out.terms.insert(m.clone(), c2);
            }
        }
        Ok(out)
    }

    /// Scale so the leading coefficient for the order becomes 1.
    pub fn monic(&self, order: &TermOrder) -> Polynomial {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.field.inv(c).expect("leading coefficient nonzero");
                self.scale(&inv)
            }
        }
    }

    fn assert_same_ring(&self, other: &Polynomial) {
        assert_eq!(self.vars, other.vars, "polynomial rings differ");
        assert!(self.field == other.field, "ground fields differ");
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // deglex descending, conventional reading order
        for (m, c) in self.terms.iter().rev() {
            let mut mono = String::new();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                if e == 1 {
                    mono.push_str(&self.vars[i]);
                } else {
                    mono.push_str(&format!("{}^{}", self.vars[i], e));
                }
            }
            let (sign, coeff_str) = match c {
                FieldElem::Rat(r) => {
                    if r < &num::Zero::zero() {
                        ("-", (-r).to_string())
                    } else {
                        ("+", r.to_string())
                    }
                }
                ext => ("+", ext.to_string()),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign == "-" {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff_is_one = matches!(c, FieldElem::Rat(r) if r.clone().abs() == Rat::one());
            if mono.is_empty() {
                write!(f, "{}", coeff_str)?;
            } else if coeff_is_one {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "{}*{}", coeff_str, mono)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat_int;

    fn xy() -> (GroundField, Vec<String>) {
        (GroundField::rationals(), vec!["x".into(), "y".into()])
    }

    fn p(s: &str) -> Polynomial {
        let (f, v) = xy();
        crate::parse::parse_polynomial(s, &v, &f).unwrap()
    }

    #[test]
    fn arithmetic_and_display() {
        let a = p("y^2 - x^3");
        let b = p("x^3");
        assert_eq!(a.add(&b).to_string(), "y^2");
        assert_eq!(a.to_string(), "-x^3 + y^2");
        assert_eq!(p("2*x").mul(&p("3*y")).to_string(), "6*x*y");
    }

    #[test]
    fn initial_exponent_is_deglex_smallest() {
        assert_eq!(p("y^2 - x^3").initial_exponent().unwrap().0, vec![0, 2]);
        assert_eq!(p("x*y + x^3").initial_exponent().unwrap().0, vec![1, 1]);
        assert!(p("0").initial_exponent().is_none());
    }

    #[test]
    fn translate_moves_point_to_origin() {
        let (f, _) = xy();
        let a = p("y^2 - x^3");
        let t = a.translate(&[f.from_rat(rat_int(1)), f.from_rat(rat_int(1))]);
        // (y+1)^2 - (x+1)^3 vanishes at the origin, has a linear part
        assert!(f.is_zero(&t.eval(&[f.zero(), f.zero()])));
        assert_eq!(t.min_degree(), Some(1));
    }

    #[test]
    fn derivative_and_division() {
        let a = p("x^2*y^3");
        assert_eq!(a.partial(0).to_string(), "2*x*y^3");
        assert_eq!(a.partial(1).to_string(), "3*x^2*y^2");
        assert_eq!(a.div_var_pow(1, 3).unwrap().to_string(), "x^2");
        assert!(a.div_var_pow(0, 3).is_none());
        assert_eq!(a.var_min_exponent(1), Some(3));
    }

    #[test]
    fn coeff_extraction() {
        let a = p("x^2 + x*y + y^3");
        let c1 = a.coeff_of_var_pow(0, 1);
        assert_eq!(c1.to_string(), "y");
        let c0 = a.coeff_of_var_pow(0, 0);
        assert_eq!(c0.to_string(), "y^3");
    }
}
