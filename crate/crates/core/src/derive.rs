//! Derivative ideals, their logarithmic variants along a divisor set,
//! weighted sums, coefficient ideals, and maximal contact hypersurfaces.
//!
//! Derivatives are taken with respect to chart coordinates only; parameters
//! of the ground field are opaque constants.

use num::integer::lcm;

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::marked::MarkedIdeal;
use crate::poly::Polynomial;

/// One derivative step: I + all first partials of the generators. With
/// `log_vars`, those coordinates contribute x_i * d/dx_i instead.
pub fn derivative_step(ideal: &Ideal, log_vars: &[usize]) -> Result<Ideal> {
    let mut gens = ideal.gens().to_vec();
    let n = ideal.vars().len();
    for g in ideal.gens() {
        for i in 0..n {
            let mut p = g.partial(i);
            if log_vars.contains(&i) {
                let xi = Polynomial::var(ideal.field().clone(), ideal.vars().to_vec(), i);
                p = p.mul(&xi);
            }
            if !p.is_zero() {
                gens.push(p);
            }
        }
    }
    Ideal::new(ideal.field().clone(), ideal.vars().to_vec(), gens)
}

/// D^j(I) with plain derivatives.
pub fn derivative_ideal(ideal: &Ideal, times: u32) -> Result<Ideal> {
    derivative_tower(ideal, times, &[])
}

/// D_E^j(I): iterate the derivative step, logarithmic along `log_vars`.
pub fn derivative_tower(ideal: &Ideal, times: u32, log_vars: &[usize]) -> Result<Ideal> {
    let mut cur = ideal.clone();
    for _ in 0..times {
        cur = derivative_step(&cur, log_vars)?;
    }
    Ok(cur)
}

/// I^k, generated by the k-fold products of the generators.
pub fn ideal_power(ideal: &Ideal, k: u32) -> Result<Ideal> {
    if k == 0 {
        return Ideal::new(
            ideal.field().clone(),
            ideal.vars().to_vec(),
            vec![Polynomial::one(ideal.field().clone(), ideal.vars().to_vec())],
        );
    }
    let base = ideal.gens();
    let mut gens = Vec::new();
    // multisets of generator indices, nondecreasing
    let mut stack: Vec<(usize, u32, Polynomial)> = vec![(
        0,
        0,
        Polynomial::one(ideal.field().clone(), ideal.vars().to_vec()),
    )];
    while let Some((start, depth, acc)) = stack.pop() {
        if depth == k {
            gens.push(acc);
            continue;
        }
        for (i, g) in base.iter().enumerate().skip(start) {
            stack.push((i, depth + 1, acc.mul(g)));
        }
    }
    Ideal::new(ideal.field().clone(), ideal.vars().to_vec(), gens)
}

/// A summand (I_i, d_i) of a weighted sum of marked ideals on one chart.
#[derive(Clone, Debug)]
pub struct WeightedPart {
    pub ideal: Ideal,
    pub mark: u32,
}

/// Equilibrate marks to e = lcm(d_i) and return (sum of I_i^(e/d_i), e).
pub fn weighted_sum(parts: &[WeightedPart]) -> Result<(Ideal, u32)> {
    let mut parts: Vec<&WeightedPart> =
        parts.iter().filter(|p| !p.ideal.is_zero_ideal()).collect();
    parts.retain(|p| p.mark > 0);
    let first = parts.first().ok_or(Error::MarkUnderflow)?;
    if parts.iter().any(|p| p.mark == 0) {
        return Err(Error::MarkUnderflow);
    }
    let e = parts.iter().fold(1u32, |acc, p| lcm(acc, p.mark));
    let mut gens = Vec::new();
    for p in &parts {
        gens.extend(ideal_power(&p.ideal, e / p.mark)?.gens().to_vec());
    }
    Ok((
        Ideal::new(
            first.ideal.field().clone(),
            first.ideal.vars().to_vec(),
            gens,
        )?,
        e,
    ))
}

/// Coefficient ideal C_E(I, d) = sum over j < d of (D_E^j(I), d - j),
/// equilibrated. Same chart, N and divisors; mark lcm(1..d).
pub fn coefficient_ideal(m: &MarkedIdeal) -> Result<MarkedIdeal> {
    if m.d == 0 {
        return Err(Error::MarkUnderflow);
    }
    let log_vars: Vec<usize> = m
        .divisors
        .iter()
        .map(|dv| m.chart.var_index(&dv.var))
        .collect::<Result<_>>()?;
    let mut parts = Vec::new();
    let mut tower = m.ideal.clone();
    for j in 0..m.d {
        if j > 0 {
            tower = derivative_step(&tower, &log_vars)?;
        }
        parts.push(WeightedPart { ideal: tower.clone(), mark: m.d - j });
    }
    let (combined, e) = weighted_sum(&parts)?;
    MarkedIdeal::new(
        m.chart.clone(),
        m.n_vanishing.clone(),
        m.divisors.clone(),
        combined,
        e,
    )
}

/// Find a maximal contact coordinate: an order-one element z of D^(d-1)(I)
/// of the triangular shape c*x_i + r with r free of x_i, and straighten it
/// to the coordinate hyperplane {x_i = 0} by the substitution
/// x_i -> x_i - r/c. Returns the contact variable and the marked ideal in
/// the new coordinates.
pub fn maximal_contact(m: &MarkedIdeal) -> Result<(String, MarkedIdeal)> {
    if m.d == 0 {
        return Err(Error::MarkUnderflow);
    }
    let w = derivative_ideal(&m.ideal, m.d - 1)?;
    let field = m.chart.field.clone();
    let vars = m.chart.vars.clone();
    for g in w.gens() {
        if g.min_degree() != Some(1) {
            continue;
        }
        let linear: Vec<&crate::monomial::Monomial> =
            g.terms().keys().filter(|mo| mo.degree() == 1).collect();
        if linear.len() != 1 {
            continue;
        }
        let i = linear[0].0.iter().position(|&e| e == 1).unwrap();
        if m.n_vanishing.contains(&vars[i]) {
            continue;
        }
        let c = g.terms().get(linear[0]).unwrap().clone();
        let rest = g.sub(&Polynomial::var(field.clone(), vars.clone(), i).scale(&c));
        if rest.involves_var(i) {
            continue;
        }
        // x_i -> x_i - rest/c, so that the new x_i equals g/c
        let h = rest.scale(&field.inv(&c)?);
        let mut images: Vec<Polynomial> = (0..vars.len())
            .map(|j| Polynomial::var(field.clone(), vars.clone(), j))
            .collect();
        images[i] = images[i].sub(&h);
        let gens: Vec<Polynomial> = m
            .ideal
            .gens()
            .iter()
            .map(|f| f.substitute(&images))
            .collect();
        let ideal = Ideal::new(field.clone(), vars.clone(), gens)?;
        let out = MarkedIdeal::new(
            m.chart.clone(),
            m.n_vanishing.clone(),
            m.divisors.clone(),
            ideal,
            m.d,
        )?;
        return Ok((vars[i].clone(), out));
    }
    Err(Error::NoTriangularContact)
}

/// Restrict to the coordinate hypersurface {var = 0}: substitute 0 for the
/// variable and add it to the equations of N.
pub fn restrict_to_hypersurface(m: &MarkedIdeal, var: &str) -> Result<MarkedIdeal> {
    let i = m.chart.var_index(var)?;
    if m.n_vanishing.contains(&var.to_string()) {
        return Err(Error::Invalid(format!("`{}` already cuts out N", var)));
    }
    if let Some(dv) = m.divisors.iter().find(|dv| dv.var == var) {
        return Err(Error::UnsupportedHypersurface(format!(
            "`{}` is a divisor variable",
            dv.var
        )));
    }
    let field = m.chart.field.clone();
    let vars = m.chart.vars.clone();
    let mut images: Vec<Polynomial> = (0..vars.len())
        .map(|j| Polynomial::var(field.clone(), vars.clone(), j))
        .collect();
    images[i] = Polynomial::zero(field.clone(), vars.clone());
    let gens: Vec<Polynomial> = m
        .ideal
        .gens()
        .iter()
        .map(|g| g.substitute(&images))
        .collect();
    let ideal = Ideal::new(field, vars, gens)?;
    let mut n_vanishing = m.n_vanishing.clone();
    n_vanishing.push(var.to_string());
    MarkedIdeal::new(m.chart.clone(), n_vanishing, m.divisors.clone(), ideal, m.d)
}

/// Coefficient ideal in the normal direction to {var = 0}: expand each
/// generator in powers of the variable, collect the coefficient of the j-th
/// power for j < d as a summand of weight d - j, equilibrate, and place the
/// result on the hypersurface. A pure d-th power leaves the zero ideal.
pub fn coefficient_ideal_normal_variant(m: &MarkedIdeal, var: &str) -> Result<MarkedIdeal> {
    if m.d == 0 {
        return Err(Error::MarkUnderflow);
    }
    let i = m.chart.var_index(var)?;
    if m.n_vanishing.contains(&var.to_string()) {
        return Err(Error::Invalid(format!("`{}` already cuts out N", var)));
    }
    let field = m.chart.field.clone();
    let vars = m.chart.vars.clone();
    let mut parts = Vec::new();
    for j in 0..m.d {
        let coeffs: Vec<Polynomial> = m
            .ideal
            .gens()
            .iter()
            .map(|g| g.coeff_of_var_pow(i, j))
            .filter(|c| !c.is_zero())
            .collect();
        if coeffs.is_empty() {
            continue;
        }
        parts.push(WeightedPart {
            ideal: Ideal::new(field.clone(), vars.clone(), coeffs)?,
            mark: m.d - j,
        });
    }
    let mut n_vanishing = m.n_vanishing.clone();
    n_vanishing.push(var.to_string());
    let (combined, e) = if parts.is_empty() {
        (Ideal::zero(field, vars), m.d)
    } else {
        weighted_sum(&parts)?
    };
    MarkedIdeal::new(m.chart.clone(), n_vanishing, m.divisors.clone(), combined, e)
}
