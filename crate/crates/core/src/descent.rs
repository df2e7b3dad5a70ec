//! Descent of coefficients to a model over Q: replace the non-rational
//! coefficients of a marked ideal over a fraction field K by fresh symbols,
//! compute the prime of relations among them (the kernel of evaluation), and
//! package the result as a family over T = Spec Q[symbols]/prime whose
//! generic fibre recovers the input up to field embedding.

use serde_json::{json, Value};

use crate::derive::derivative_step;
use crate::error::{Error, Result};
use crate::field::{FieldElem, GroundField, Rat};
use crate::ideal::{fresh_name, Ideal};
use crate::marked::{field_json, Chart, MarkedIdeal};
use crate::monomial::Monomial;
use crate::poly::Polynomial;

/// Reinterpret the non-kept variables of an ideal over Q as parameters of
/// the target field (whose parameter list must contain them all).
pub fn vars_into_field(ideal: &Ideal, kept: &[String], target: &GroundField) -> Result<Ideal> {
    if !ideal.field().is_rationals() {
        return Err(Error::Invalid(
            "reinterpreting variables requires rational coefficients".into(),
        ));
    }
    let dropped: Vec<String> = ideal
        .vars()
        .iter()
        .filter(|v| !kept.contains(v))
        .cloned()
        .collect();
    for v in &dropped {
        if !target.params().contains(v) && !target.is_rationals() {
            return Err(Error::UnknownSymbol(v.clone()));
        }
        if target.is_rationals() {
            return Err(Error::Invalid(format!(
                "no field parameter to absorb `{}`",
                v
            )));
        }
    }
    let kept_vars: Vec<String> = ideal
        .vars()
        .iter()
        .filter(|v| kept.contains(v))
        .cloned()
        .collect();
    let param_names = if target.is_rationals() {
        vec![]
    } else {
        target.params().to_vec()
    };
    let mut new_gens = Vec::new();
    for g in ideal.gens() {
        let mut out = Polynomial::zero(target.clone(), kept_vars.clone());
        for (m, c) in g.terms() {
            let mut kept_exp = vec![0u32; kept_vars.len()];
            let mut param_poly = Polynomial::one(GroundField::rationals(), param_names.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = &ideal.vars()[i];
                if let Some(kpos) = kept_vars.iter().position(|v| v == name) {
                    kept_exp[kpos] = e;
                } else {
                    let ppos = param_names.iter().position(|v| v == name).unwrap();
                    let v = Polynomial::var(GroundField::rationals(), param_names.clone(), ppos);
                    param_poly = param_poly.mul(&v.pow(e));
                }
            }
            let rat = c
                .as_rat()
                .ok_or_else(|| Error::Invalid("expected rational coefficient".into()))?
                .clone();
            let coeff = target.from_param_poly(param_poly.scale_rat(&rat))?;
            out = out.add_term(Monomial(kept_exp), coeff);
        }
        if !out.is_zero() {
            new_gens.push(out);
        }
    }
    Ideal::new(target.clone(), kept_vars, new_gens)
}

/// The descent of a marked ideal over a fraction field K to a family over a
/// Q-model. `z_gens` live over Q in `chart_vars` followed by `symbols`;
/// `prime` lives over Q in the symbols alone.
#[derive(Clone, Debug)]
pub struct DescentModel {
    pub base_field: GroundField,
    pub chart_vars: Vec<String>,
    pub n_vanishing: Vec<String>,
    pub symbols: Vec<String>,
    pub values: Vec<FieldElem>,
    pub prime: Ideal,
    pub z_gens: Vec<Polynomial>,
    pub d: u32,
}

impl DescentModel {
    /// All variables of the total space Z, chart variables first.
    pub fn z_vars(&self) -> Vec<String> {
        let mut vs = self.chart_vars.clone();
        vs.extend(self.symbols.iter().cloned());
        vs
    }

    /// Defining ideal of Z inside A^(chart) x A^(symbols): the rewritten
    /// generators together with the relations among the symbols.
    pub fn z_ideal(&self) -> Result<Ideal> {
        let vars = self.z_vars();
        let mut gens = self.z_gens.clone();
        for q in self.prime.gens() {
            gens.push(q.reindex(&vars)?);
        }
        Ideal::new(GroundField::rationals(), vars, gens)
    }

    /// Function field Q(T) of the parameter space, with the symbols as
    /// parameters.
    pub fn function_field(&self) -> Result<GroundField> {
        if self.symbols.is_empty() {
            return Ok(GroundField::rationals());
        }
        GroundField::fraction(self.symbols.clone(), self.prime.gens().to_vec(), true)
    }

    /// Generic fibre of Z -> T: the chart variables stay coordinates, the
    /// symbols become parameters of Q(T).
    pub fn generic_fibre(&self) -> Result<MarkedIdeal> {
        let field = self.function_field()?;
        let raw = Ideal::new(
            GroundField::rationals(),
            self.z_vars(),
            self.z_gens.clone(),
        )?;
        let fibre = if self.symbols.is_empty() {
            raw
        } else {
            vars_into_field(&raw, &self.chart_vars, &field)?
        };
        let chart = Chart::new(fibre.field().clone(), fibre.vars().to_vec());
        MarkedIdeal::new(chart, self.n_vanishing.clone(), vec![], fibre, self.d)
    }

    /// Base change along a field embedding Q(T) -> target given by images of
    /// the symbols; the relations must map to zero.
    pub fn base_change(
        &self,
        target: &GroundField,
        images: &[FieldElem],
    ) -> Result<MarkedIdeal> {
        if images.len() != self.symbols.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} symbols",
                images.len(),
                self.symbols.len()
            )));
        }
        for q in self.prime.gens() {
            let v = eval_symbol_poly(q, target, images)?;
            if !target.is_zero(&v) {
                return Err(Error::InvalidEmbedding);
            }
        }
        let gens: Result<Vec<Polynomial>> = self
            .z_gens
            .iter()
            .map(|g| specialize_symbols(g, &self.chart_vars, target, images))
            .collect();
        let ideal = Ideal::new(target.clone(), self.chart_vars.clone(), gens?)?;
        let chart = Chart::new(target.clone(), self.chart_vars.clone());
        MarkedIdeal::new(chart, self.n_vanishing.clone(), vec![], ideal, self.d)
    }

    /// Recover the input marked ideal by sending each symbol to its value.
    pub fn recover(&self) -> Result<MarkedIdeal> {
        self.base_change(&self.base_field, &self.values)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base_field": field_json(&self.base_field),
            "chart_vars": self.chart_vars,
            "N": self.n_vanishing,
            "symbols": self
                .symbols
                .iter()
                .zip(self.values.iter())
                .map(|(s, v)| {
                    let (num, den) = v.num_den_strings();
                    json!({ "name": s, "num": num, "den": den })
                })
                .collect::<Vec<_>>(),
            "prime": self
                .prime
                .gens()
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>(),
            "Z_gens": self
                .z_gens
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>(),
            "d": self.d,
        })
    }
}

/// Evaluate a polynomial in the symbols at the given images.
fn eval_symbol_poly(
    q: &Polynomial,
    target: &GroundField,
    images: &[FieldElem],
) -> Result<FieldElem> {
    if q.vars().len() != images.len() {
        return Err(Error::DimensionMismatch(
            "symbol count mismatch in evaluation".into(),
        ));
    }
    let mut lifted = Polynomial::zero(target.clone(), q.vars().to_vec());
    for (m, c) in q.terms() {
        let r = c
            .as_rat()
            .ok_or_else(|| Error::Invalid("expected rational coefficient".into()))?;
        lifted = lifted.add_term(m.clone(), target.from_rat(r.clone()));
    }
    Ok(lifted.eval(images))
}

/// Substitute field elements for the trailing symbol variables of a Z-chart
/// polynomial, leaving the chart variables alone.
fn specialize_symbols(
    g: &Polynomial,
    chart_vars: &[String],
    target: &GroundField,
    images: &[FieldElem],
) -> Result<Polynomial> {
    let nc = chart_vars.len();
    let mut out = Polynomial::zero(target.clone(), chart_vars.to_vec());
    for (m, c) in g.terms() {
        let r = c
            .as_rat()
            .ok_or_else(|| Error::Invalid("expected rational coefficient".into()))?;
        let mut coeff = target.from_rat(r.clone());
        for (k, img) in images.iter().enumerate() {
            let e = m.0[nc + k];
            for _ in 0..e {
                coeff = target.mul(&coeff, img);
            }
        }
        let cm = Monomial(m.0[..nc].to_vec());
        let prev = out;
        out = prev.add_term(cm, coeff);
    }
    Ok(out)
}

/// Build the descent model of a marked ideal over a fraction field. Each
/// distinct non-rational coefficient (up to a rational factor) becomes one
/// symbol; the prime of relations is the kernel of evaluating the symbols in
/// K, computed by elimination from the graph ideal.
pub fn descend(m: &MarkedIdeal) -> Result<DescentModel> {
    if !m.divisors.is_empty() {
        return Err(Error::UnsupportedDivisor(
            "descent is defined for marked ideals without divisors".into(),
        ));
    }
    let field = m.chart.field.clone();
    let chart_vars = m.chart.vars.clone();
    // first pass: find the distinct non-rational coefficients
    let mut values: Vec<FieldElem> = Vec::new();
    for g in m.ideal.gens() {
        for c in g.terms().values() {
            if c.as_rat().is_some() {
                continue;
            }
            let known = values.iter().any(|v| {
                matches!(field.div(c, v), Ok(FieldElem::Rat(_)))
            });
            if !known {
                values.push(c.clone());
            }
        }
    }
    let mut symbols = Vec::new();
    {
        let mut taken = chart_vars.clone();
        for k in 0..values.len() {
            let name = fresh_name(&taken, &format!("x{}", k + 1));
            taken.push(name.clone());
            symbols.push(name);
        }
    }
    // second pass: rewrite the generators over Q
    let mut z_vars = chart_vars.clone();
    z_vars.extend(symbols.iter().cloned());
    let nc = chart_vars.len();
    let mut z_gens = Vec::new();
    for g in m.ideal.gens() {
        let mut out = Polynomial::zero(GroundField::rationals(), z_vars.clone());
        for (mo, c) in g.terms() {
            let mut exp = vec![0u32; z_vars.len()];
            exp[..nc].copy_from_slice(&mo.0);
            let rat: Rat = match c.as_rat() {
                Some(r) => r.clone(),
                None => {
                    let (k, factor) = values
                        .iter()
                        .enumerate()
                        .find_map(|(k, v)| match field.div(c, v) {
                            Ok(FieldElem::Rat(r)) => Some((k, r)),
                            _ => None,
                        })
                        .expect("coefficient recorded in first pass");
                    exp[nc + k] = 1;
                    factor
                }
            };
            out = out.add_term(Monomial(exp), FieldElem::Rat(rat));
        }
        z_gens.push(out);
    }
    let prime = kernel_prime(&field, &symbols, &values)?;
    let model = DescentModel {
        base_field: field,
        chart_vars,
        n_vanishing: m.n_vanishing.clone(),
        symbols,
        values,
        prime,
        z_gens,
        d: m.d,
    };
    // round-trip: specializing the symbols must recover the input
    let back = model.recover()?;
    if !back.ideal.equals(&m.ideal)? {
        return Err(Error::RoundTripFailure);
    }
    Ok(model)
}

/// Kernel of Q[symbols] -> K, symbol_k -> value_k, for K the fraction field
/// of Q[params]/q: eliminate the parameters from the graph ideal
/// (q, den_k * symbol_k - num_k), saturated at the denominators.
pub fn kernel_prime(
    field: &GroundField,
    symbols: &[String],
    values: &[FieldElem],
) -> Result<Ideal> {
    if symbols.is_empty() {
        return Ok(Ideal::zero(GroundField::rationals(), vec![]));
    }
    let params = field.params().to_vec();
    let mut all_vars = params.clone();
    all_vars.extend(symbols.iter().cloned());
    for s in symbols {
        if params.contains(s) {
            return Err(Error::Invalid(format!(
                "symbol `{}` collides with a field parameter",
                s
            )));
        }
    }
    let qf = GroundField::rationals();
    let mut gens: Vec<Polynomial> = field
        .prime_basis()
        .iter()
        .map(|g| g.reindex(&all_vars))
        .collect::<Result<_>>()?;
    let mut den_product = Polynomial::one(qf.clone(), all_vars.clone());
    for (s, v) in symbols.iter().zip(values.iter()) {
        let (num, den) = match v {
            FieldElem::Rat(r) => (
                Polynomial::constant(qf.clone(), params.clone(), FieldElem::Rat(r.clone())),
                Polynomial::one(qf.clone(), params.clone()),
            ),
            FieldElem::Ext { num, den } => ((**num).clone(), (**den).clone()),
        };
        let num = num.reindex(&all_vars)?;
        let den = den.reindex(&all_vars)?;
        let sym = Polynomial::var_by_name(qf.clone(), all_vars.clone(), s)?;
        gens.push(den.mul(&sym).sub(&num));
        if den.degree().unwrap_or(0) > 0 {
            den_product = den_product.mul(&den);
        }
    }
    let graph = Ideal::new(qf, all_vars, gens)?;
    let graph = if den_product.degree().unwrap_or(0) > 0 {
        graph.saturate(&den_product)?
    } else {
        graph
    };
    let eliminated = graph.eliminate(symbols)?;
    Ok(eliminated)
}

/// Per-symbol record of the factorization of evaluation through the model:
/// Q[symbols] -> Q[symbols]/prime -> K.
#[derive(Clone, Debug)]
pub struct FactorizationRecord {
    /// Each relation among the symbols evaluates to zero in K.
    pub relations_vanish: bool,
    /// Specializing the symbols recovers the input generators.
    pub round_trip: bool,
}

pub fn factorization_record(model: &DescentModel, input: &MarkedIdeal) -> Result<FactorizationRecord> {
    let mut relations_vanish = true;
    for q in model.prime.gens() {
        let v = eval_symbol_poly(q, &model.base_field, &model.values)?;
        if !model.base_field.is_zero(&v) {
            relations_vanish = false;
        }
    }
    let back = model.recover()?;
    let round_trip = back.ideal.equals(&input.ideal)?;
    Ok(FactorizationRecord { relations_vanish, round_trip })
}

/// Compare the order of the generic fibre at the origin with the order of
/// the total space along the closure of that point, computed by two
/// independent routes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderInvarianceReport {
    pub fibre_order: Option<u32>,
    pub upstairs_order: Option<u32>,
    pub agree: bool,
}

pub fn order_invariance_report(model: &DescentModel, cap: u32) -> Result<OrderInvarianceReport> {
    let fibre = model.generic_fibre()?;
    let origin: Vec<FieldElem> = fibre
        .chart
        .vars
        .iter()
        .map(|_| fibre.chart.field.zero())
        .collect();
    let fibre_order = fibre.order_at(&origin)?;
    // upstairs: smallest j with D^j of the rewritten generators not inside
    // (chart vars) + prime, differentiating with respect to chart variables
    // and symbols alike; the prime relations themselves are not part of the
    // ideal here (they cut out the smooth base, not the variety in it)
    let z = Ideal::new(
        GroundField::rationals(),
        model.z_vars(),
        model.z_gens.clone(),
    )?;
    let chart_set: Vec<String> = model.chart_vars.clone();
    let mut upstairs_order = None;
    let mut cur = z;
    for j in 0..=cap {
        if !ideal_in_fibre_prime(&cur, &chart_set, &model.prime)? {
            upstairs_order = Some(j);
            break;
        }
        cur = derivative_step(&cur, &[])?;
    }
    let agree = fibre_order == upstairs_order;
    Ok(OrderInvarianceReport { fibre_order, upstairs_order, agree })
}

/// Membership of every generator in the prime (chart vars) + p: kill the
/// chart variables and reduce the remainder modulo p.
fn ideal_in_fibre_prime(ideal: &Ideal, chart_vars: &[String], prime: &Ideal) -> Result<bool> {
    let vars = ideal.vars().to_vec();
    let field = ideal.field().clone();
    let images: Vec<Polynomial> = vars
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if chart_vars.contains(v) {
                Polynomial::zero(field.clone(), vars.clone())
            } else {
                Polynomial::var(field.clone(), vars.clone(), i)
            }
        })
        .collect();
    for g in ideal.gens() {
        let tail = g.substitute(&images);
        if tail.is_zero() {
            continue;
        }
        if prime.gens().is_empty() {
            return Ok(false);
        }
        let tail = tail.reindex(prime.vars())?;
        if !prime.contains(&tail)? {
            return Ok(false);
        }
    }
    Ok(true)
}
