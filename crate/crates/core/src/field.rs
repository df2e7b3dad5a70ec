//! Ground fields: Q, or the fraction field of an affine domain
//! Q[x_1..x_r]/p presented by a reduced Groebner basis of a prime ideal p.
//!
//! Field elements are exact. Equality is decidable via normal forms of
//! cross-multiplied numerators. No floating point anywhere.

use std::fmt;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ideal::normal_form;
use crate::monomial::{Monomial, TermOrder};
use crate::poly::Polynomial;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// How the primality of the presentation ideal was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Primality {
    /// The zero ideal.
    Trivial,
    /// Principal with an irreducibility check over Q.
    Checked,
    /// Produced as the kernel of a ring homomorphism (elimination).
    ByConstruction,
    /// Accepted with primality asserted by the caller.
    Asserted,
}

#[derive(Debug)]
enum FieldRepr {
    Rationals,
    Fraction {
        params: Vec<String>,
        /// Reduced deglex Groebner basis of the prime ideal, over Q.
        prime: Vec<Polynomial>,
        primality: Primality,
        /// Monomial basis of Q[x]/p when the quotient is a finite-dimensional
        /// Q-vector space; used to rationalize denominators.
        staircase: Option<Vec<Monomial>>,
    },
}

/// A supported ground field. Cheap to clone; immutable after construction.
#[derive(Clone, Debug)]
pub struct GroundField(Arc<FieldRepr>);

impl PartialEq for GroundField {
    fn eq(&self, other: &Self) -> bool {
        match (&*self.0, &*other.0) {
            (FieldRepr::Rationals, FieldRepr::Rationals) => true,
            (
                FieldRepr::Fraction { params: p1, prime: g1, .. },
                FieldRepr::Fraction { params: p2, prime: g2, .. },
            ) => {
                p1 == p2
                    && g1.len() == g2.len()
                    && g1.iter().zip(g2).all(|(a, b)| a.equals(b))
            }
            _ => false,
        }
    }
}
impl Eq for GroundField {}

impl GroundField {
    pub fn rationals() -> Self {
        GroundField(Arc::new(FieldRepr::Rationals))
    }

    /// Fraction field of Q[params]/(gens). `gens` are polynomials over Q in
    /// the parameter variables. Primality is checked for the supported
    /// presentations: the zero ideal, and a principal ideal generated by a
    /// univariate polynomial of degree <= 3 (no rational root). Anything
    /// else is accepted with primality recorded per `asserted_prime`.
    pub fn fraction(
        params: Vec<String>,
        gens: Vec<Polynomial>,
        by_construction: bool,
    ) -> Result<Self> {
        for g in &gens {
            if g.vars() != params.as_slice() {
                return Err(Error::Invalid(
                    "prime generators must live in the parameter ring".into(),
                ));
            }
            if !g.field().is_rationals() {
                return Err(Error::Invalid(
                    "prime generators must have rational coefficients".into(),
                ));
            }
        }
        let gb = crate::ideal::groebner(&gens, &TermOrder::DegLex, crate::ideal::DEFAULT_DEGREE_CAP)?;
        let primality = if gb.is_empty() {
            Primality::Trivial
        } else if by_construction {
            Primality::ByConstruction
        } else if gb.len() == 1 && univariate_irreducible(&gb[0]) == Some(true) {
            Primality::Checked
        } else if gb.len() == 1 && univariate_irreducible(&gb[0]) == Some(false) {
            return Err(Error::Invalid(
                "presentation ideal is not prime: generator has a rational root".into(),
            ));
        } else {
            Primality::Asserted
        };
        let staircase = staircase_basis(&gb, params.len());
        Ok(GroundField(Arc::new(FieldRepr::Fraction {
            params,
            prime: gb,
            primality,
            staircase,
        })))
    }

    pub fn is_rationals(&self) -> bool {
        matches!(&*self.0, FieldRepr::Rationals)
    }

    pub fn params(&self) -> &[String] {
        match &*self.0 {
            FieldRepr::Rationals => &[],
            FieldRepr::Fraction { params, .. } => params,
        }
    }

    pub fn prime_basis(&self) -> &[Polynomial] {
        match &*self.0 {
            FieldRepr::Rationals => &[],
            FieldRepr::Fraction { prime, .. } => prime,
        }
    }

    pub fn primality(&self) -> Primality {
        match &*self.0 {
            FieldRepr::Rationals => Primality::Trivial,
            FieldRepr::Fraction { primality, .. } => *primality,
        }
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::Rat(Rat::zero())
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::Rat(Rat::one())
    }

    pub fn from_rat(&self, r: Rat) -> FieldElem {
        FieldElem::Rat(r)
    }

    /// The field element represented by the parameter with the given name.
    pub fn param(&self, name: &str) -> Result<FieldElem> {
        match &*self.0 {
            FieldRepr::Rationals => Err(Error::UnknownSymbol(name.into())),
            FieldRepr::Fraction { params, .. } => {
                let i = params
                    .iter()
                    .position(|p| p == name)
                    .ok_or_else(|| Error::UnknownSymbol(name.into()))?;
                let num = Polynomial::var(GroundField::rationals(), params.clone(), i);
                self.reduce(num, Polynomial::one(GroundField::rationals(), params.clone()))
            }
        }
    }

    /// Build an element from a polynomial expression in the parameters.
    pub fn from_param_poly(&self, num: Polynomial) -> Result<FieldElem> {
        match &*self.0 {
            FieldRepr::Rationals => match num.constant_value() {
                Some(FieldElem::Rat(r)) => Ok(FieldElem::Rat(r)),
                _ => Err(Error::Invalid("nonconstant element over Q".into())),
            },
            FieldRepr::Fraction { params, .. } => {
                self.reduce(num, Polynomial::one(GroundField::rationals(), params.clone()))
            }
        }
    }

    fn nf(&self, p: Polynomial) -> Polynomial {
        let basis = self.prime_basis();
        if basis.is_empty() {
            p
        } else {
            normal_form(&p, basis, &TermOrder::DegLex)
        }
    }

    /// Canonicalize a numerator/denominator pair over the parameter ring.
    fn reduce(&self, num: Polynomial, den: Polynomial) -> Result<FieldElem> {
        let params = self.params().to_vec();
        let num = self.nf(num);
        if num.is_zero() {
            return Ok(FieldElem::Rat(Rat::zero()));
        }
        let den = self.nf(den);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // constant denominator: absorb it
        if let Some(FieldElem::Rat(c)) = den.constant_value() {
            let num = num.scale_rat(&(Rat::one() / c));
            if let Some(FieldElem::Rat(r)) = num.constant_value() {
                return Ok(FieldElem::Rat(r));
            }
            return Ok(FieldElem::Ext {
                num: Box::new(num),
                den: Box::new(Polynomial::one(GroundField::rationals(), params)),
            });
        }
        // finite quotient: rationalize the denominator
        if let FieldRepr::Fraction { staircase: Some(basis), prime, .. } = &*self.0 {
            if let Some(u) = invert_mod_prime(&den, prime, basis) {
                let num = self.nf(num.mul(&u));
                if let Some(FieldElem::Rat(r)) = num.constant_value() {
                    return Ok(FieldElem::Rat(r));
                }
                return Ok(FieldElem::Ext {
                    num: Box::new(num),
                    den: Box::new(Polynomial::one(GroundField::rationals(), params)),
                });
            }
        }
        // single transcendental parameter: cancel the univariate gcd
        let (mut num, mut den) = (num, den);
        if params.len() == 1 && self.prime_basis().is_empty() {
            let g = univariate_gcd(&num, &den);
            if g.degree().unwrap_or(0) > 0 {
                num = univariate_div_exact(&num, &g);
                den = univariate_div_exact(&den, &g);
            }
            // the cancellation may leave a constant denominator
            if let Some(FieldElem::Rat(c)) = den.constant_value() {
                let num = num.scale_rat(&(Rat::one() / c));
                if let Some(FieldElem::Rat(r)) = num.constant_value() {
                    return Ok(FieldElem::Rat(r));
                }
                return Ok(FieldElem::Ext {
                    num: Box::new(num),
                    den: Box::new(Polynomial::one(GroundField::rationals(), params)),
                });
            }
        }
        // make the denominator monic (deglex-leading coefficient 1)
        if let Some((_, FieldElem::Rat(lc))) = den.leading_term(&TermOrder::DegLex) {
            let lc = lc.clone();
            num = num.scale_rat(&(Rat::one() / lc.clone()));
            den = den.scale_rat(&(Rat::one() / lc));
        }
        Ok(FieldElem::Ext { num: Box::new(num), den: Box::new(den) })
    }

    fn promote(&self, e: &FieldElem) -> (Polynomial, Polynomial) {
        let params = self.params().to_vec();
        match e {
            FieldElem::Rat(r) => (
                Polynomial::constant(
                    GroundField::rationals(),
                    params.clone(),
                    FieldElem::Rat(r.clone()),
                ),
                Polynomial::one(GroundField::rationals(), params),
            ),
            FieldElem::Ext { num, den } => ((**num).clone(), (**den).clone()),
        }
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        match (a, b) {
            (FieldElem::Rat(x), FieldElem::Rat(y)) => FieldElem::Rat(x + y),
            _ => {
                let (n1, d1) = self.promote(a);
                let (n2, d2) = self.promote(b);
                self.reduce(n1.mul(&d2).add(&n2.mul(&d1)), d1.mul(&d2))
                    .expect("denominators nonzero")
            }
        }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        match a {
            FieldElem::Rat(x) => FieldElem::Rat(-x),
            FieldElem::Ext { num, den } => FieldElem::Ext {
                num: Box::new(num.neg()),
                den: den.clone(),
            },
        }
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        match (a, b) {
            (FieldElem::Rat(x), FieldElem::Rat(y)) => FieldElem::Rat(x * y),
            _ => {
                let (n1, d1) = self.promote(a);
                let (n2, d2) = self.promote(b);
                self.reduce(n1.mul(&n2), d1.mul(&d2))
                    .expect("denominators nonzero")
            }
        }
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        match a {
            FieldElem::Rat(x) => {
                if x.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(FieldElem::Rat(Rat::one() / x))
                }
            }
            FieldElem::Ext { num, den } => self.reduce((**den).clone(), (**num).clone()),
        }
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn is_zero(&self, a: &FieldElem) -> bool {
        match a {
            FieldElem::Rat(x) => x.is_zero(),
            // numerators are kept in normal form modulo the prime
            FieldElem::Ext { num, .. } => num.is_zero(),
        }
    }

    pub fn is_one(&self, a: &FieldElem) -> bool {
        self.is_zero(&self.sub(a, &self.one()))
    }

    pub fn eq(&self, a: &FieldElem, b: &FieldElem) -> bool {
        self.is_zero(&self.sub(a, b))
    }
}

/// An exact element of a ground field.
#[derive(Clone, Debug)]
pub enum FieldElem {
    Rat(Rat),
    /// num/den with num, den in Q[params], num in normal form mod the prime.
    Ext { num: Box<Polynomial>, den: Box<Polynomial> },
}

impl FieldElem {
    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            FieldElem::Rat(r) => Some(r),
            FieldElem::Ext { .. } => None,
        }
    }

    /// Numerator/denominator over the parameter ring, for serialization.
    pub fn num_den_strings(&self) -> (String, String) {
        match self {
            FieldElem::Rat(r) => (r.to_string(), "1".into()),
            FieldElem::Ext { num, den } => (num.to_string(), den.to_string()),
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rat(r) => write!(f, "{}", r),
            FieldElem::Ext { num, den } => {
                if den.is_one() {
                    write!(f, "({})", num)
                } else {
                    write!(f, "(({})/({}))", num, den)
                }
            }
        }
    }
}

/// Irreducibility of a univariate polynomial over Q, decided for degree <= 3
/// via the rational root theorem. `None` when the test does not apply.
fn univariate_irreducible(p: &Polynomial) -> Option<bool> {
    let used: Vec<usize> = (0..p.vars().len())
        .filter(|&i| p.terms().keys().any(|m| m.0[i] > 0))
        .collect();
    if used.len() != 1 {
        return None;
    }
    let v = used[0];
    let deg = p.degree()?;
    if deg < 2 || deg > 3 {
        return if deg == 1 { Some(true) } else { None };
    }
    // integer coefficients c_0..c_deg
    let mut coeffs: Vec<Rat> = vec![Rat::zero(); (deg + 1) as usize];
    for (m, c) in p.terms() {
        coeffs[m.0[v] as usize] = c.as_rat()?.clone();
    }
    let mut denlcm = BigInt::one();
    for c in &coeffs {
        denlcm = num::integer::lcm(denlcm, c.denom().clone());
    }
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * Rat::from(denlcm.clone())).to_integer()).collect();
    let a0 = ints[0].clone();
    let an = ints[deg as usize].clone();
    if a0.is_zero() {
        return Some(false); // root at 0
    }
    let dmax = BigInt::from(1_000_000u32);
    if a0.abs() > dmax || an.abs() > dmax {
        return None;
    }
    let ps = small_divisors(&a0.abs());
    let qs = small_divisors(&an.abs());
    for pnum in &ps {
        for qden in &qs {
            for sign in [1i64, -1] {
                let cand = Rat::new(pnum * BigInt::from(sign), qden.clone());
                let mut val = Rat::zero();
                for c in ints.iter().rev() {
                    val = val * cand.clone() + Rat::from(c.clone());
                }
                if val.is_zero() {
                    return Some(false);
                }
            }
        }
    }
    Some(true)
}

pub(crate) fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            out.push(n / &d);
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    out
}

/// Monomial basis of Q[x]/p under the deglex staircase, when finite and small.
fn staircase_basis(gb: &[Polynomial], nparams: usize) -> Option<Vec<Monomial>> {
    if gb.is_empty() || nparams == 0 {
        return None;
    }
    let lts: Vec<Monomial> = gb
        .iter()
        .filter_map(|g| g.leading_term(&TermOrder::DegLex).map(|(m, _)| m.clone()))
        .collect();
    // zero-dimensional iff each variable has a pure-power leading term
    let mut bounds = vec![None; nparams];
    for lt in &lts {
        let used: Vec<usize> = (0..nparams).filter(|&i| lt.0[i] > 0).collect();
        if used.len() == 1 {
            let i = used[0];
            let e = lt.0[i];
            if bounds[i].map_or(true, |b| e < b) {
                bounds[i] = Some(e);
            }
        }
    }
    if bounds.iter().any(|b| b.is_none()) {
        return None;
    }
    let bounds: Vec<u32> = bounds.into_iter().map(|b| b.unwrap()).collect();
    let size: u64 = bounds.iter().map(|&b| b as u64).product();
    if size == 0 || size > 128 {
        return None;
    }
    let mut basis = Vec::new();
    let mut cur = vec![0u32; nparams];
    loop {
        let m = Monomial(cur.clone());
        if !lts.iter().any(|lt| lt.divides(&m)) {
            basis.push(m);
        }
        // odometer
        let mut i = 0;
        loop {
            if i == nparams {
                basis.sort();
                return Some(basis);
            }
            cur[i] += 1;
            if cur[i] < bounds[i] {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// Solve u * den == 1 mod p by linear algebra over the staircase basis.
fn invert_mod_prime(
    den: &Polynomial,
    prime: &[Polynomial],
    basis: &[Monomial],
) -> Option<Polynomial> {
    let qf = GroundField::rationals();
    let vars = den.vars().to_vec();
    let n = basis.len();
    // columns: images NF(den * b_i) expressed over the basis
    let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(n);
    for b in basis {
        let prod = den.mul_term(b, &FieldElem::Rat(Rat::one()));
        let nf = normal_form(&prod, prime, &TermOrder::DegLex);
        let mut col = vec![Rat::zero(); n];
        for (m, c) in nf.terms() {
            let idx = basis.iter().position(|bm| bm == m)?;
            col[idx] = c.as_rat()?.clone();
        }
        cols.push(col);
    }
    // solve cols * u = e_0  (basis[0] is the monomial 1)
    let one_idx = basis.iter().position(|m| m.is_one())?;
    let mut aug: Vec<Vec<Rat>> = (0..n)
        .map(|r| {
            let mut row: Vec<Rat> = (0..n).map(|c| cols[c][r].clone()).collect();
            row.push(if r == one_idx { Rat::one() } else { Rat::zero() });
            row
        })
        .collect();
    // Gaussian elimination
    let mut rank_row = 0;
    let mut pivot_of_col = vec![usize::MAX; n];
    for col in 0..n {
        let mut piv = None;
        for r in rank_row..n {
            if !aug[r][col].is_zero() {
                piv = Some(r);
                break;
            }
        }
        let Some(piv) = piv else { continue };
        aug.swap(rank_row, piv);
        let inv = Rat::one() / aug[rank_row][col].clone();
        for x in aug[rank_row].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for r in 0..n {
            if r != rank_row && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for cidx in 0..=n {
                    let sub = aug[rank_row][cidx].clone() * f.clone();
                    aug[r][cidx] = aug[r][cidx].clone() - sub;
                }
            }
        }
        pivot_of_col[col] = rank_row;
        rank_row += 1;
    }
    // read off solution; inconsistent rows mean den is a zero divisor
    for r in rank_row..n {
        if !aug[r][n].is_zero() {
            return None;
        }
    }
    let mut u = Polynomial::zero(qf, vars);
    for (col, b) in basis.iter().enumerate() {
        let pr = pivot_of_col[col];
        if pr != usize::MAX && !aug[pr][n].is_zero() {
            u = u.add_term(b.clone(), FieldElem::Rat(aug[pr][n].clone()));
        }
    }
    if u.is_zero() {
        None
    } else {
        Some(u)
    }
}

pub(crate) fn univariate_gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let r = univariate_rem(&a, &b);
        a = b;
        b = r;
    }
    // monic
    if let Some((_, FieldElem::Rat(lc))) = a.leading_term(&TermOrder::DegLex) {
        let lc = lc.clone();
        a = a.scale_rat(&(Rat::one() / lc));
    }
    a
}

fn univariate_rem(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut r = a.clone();
    let (bm, bc) = b.leading_term(&TermOrder::DegLex).expect("nonzero divisor");
    let (bm, bc) = (bm.clone(), bc.clone());
    loop {
        let Some((rm, rc)) = r.leading_term(&TermOrder::DegLex) else {
            return r;
        };
        let Some(q) = bm.try_div(rm) else {
            return r;
        };
        let f = r.field().clone();
        let c = f.div(rc, &bc).expect("leading coeff nonzero");
        let sub = b.mul_term(&q, &c);
        r = r.sub(&sub);
    }
}

fn univariate_div_exact(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut r = a.clone();
    let mut q = Polynomial::zero(a.field().clone(), a.vars().to_vec());
    let (bm, bc) = b.leading_term(&TermOrder::DegLex).expect("nonzero divisor");
    let (bm, bc) = (bm.clone(), bc.clone());
    while let Some((rm, rc)) = r.leading_term(&TermOrder::DegLex) {
        let qm = bm.try_div(rm).expect("exact division");
        let f = r.field().clone();
        let c = f.div(rc, &bc).expect("leading coeff nonzero");
        q = q.add_term(qm.clone(), c.clone());
        let sub = b.mul_term(&qm, &c);
        r = r.sub(&sub);
    }
    q
}
