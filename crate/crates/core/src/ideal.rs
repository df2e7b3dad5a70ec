//! Ideals, Groebner bases and the degree-truncated linear algebra used for
//! diagrams of initial exponents.
//!
//! Two leading-term conventions coexist and are never mixed: the Groebner
//! engine pivots on the deglex-LARGEST term (membership, elimination), while
//! `truncation_basis` pivots on the deglex-SMALLEST monomial (initial
//! exponents). An `Ideal` caches at most one Groebner basis, for the deglex
//! convention.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::{FieldElem, GroundField};
use crate::monomial::{Monomial, TermOrder};
use crate::poly::Polynomial;

/// Default degree cap for Groebner computations. Exceeding it raises a
/// capacity error rather than silently truncating.
pub const DEFAULT_DEGREE_CAP: u32 = 24;

#[derive(Clone, Debug)]
pub struct Ideal {
    field: GroundField,
    vars: Vec<String>,
    gens: Vec<Polynomial>,
    gb_deglex: OnceLock<std::result::Result<Vec<Polynomial>, Error>>,
}

impl Ideal {
    pub fn new(field: GroundField, vars: Vec<String>, gens: Vec<Polynomial>) -> Result<Self> {
        for g in &gens {
            if g.vars() != vars.as_slice() {
                return Err(Error::Invalid(
                    "generators must share the ambient variable list".into(),
                ));
            }
            if g.field() != &field {
                return Err(Error::Invalid(
                    "generators must share the ground field".into(),
                ));
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal { field, vars, gens, gb_deglex: OnceLock::new() })
    }

    pub fn zero(field: GroundField, vars: Vec<String>) -> Self {
        Ideal { field, vars, gens: vec![], gb_deglex: OnceLock::new() }
    }

    pub fn field(&self) -> &GroundField {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    /// Reduced Groebner basis for the deglex-largest convention, cached.
    pub fn groebner_basis(&self) -> Result<&[Polynomial]> {
        let res = self
            .gb_deglex
            .get_or_init(|| groebner(&self.gens, &TermOrder::DegLex, DEFAULT_DEGREE_CAP));
        match res {
            Ok(b) => Ok(b),
            Err(e) => Err(e.clone()),
        }
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        Ok(normal_form(f, self.groebner_basis()?, &TermOrder::DegLex))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    pub fn is_unit_ideal(&self) -> Result<bool> {
        let gb = self.groebner_basis()?;
        Ok(gb.len() == 1 && gb[0].degree() == Some(0))
    }

    /// Intersection with the polynomial ring in `keep` variables, via a
    /// block elimination order.
    pub fn eliminate(&self, keep: &[String]) -> Result<Ideal> {
        for k in keep {
            if !self.vars.contains(k) {
                return Err(Error::UnknownSymbol(k.clone()));
            }
        }
        let eliminated: Vec<usize> = (0..self.vars.len())
            .filter(|i| !keep.contains(&self.vars[*i]))
            .collect();
        if eliminated.is_empty() {
            return Ok(self.clone());
        }
        let order = TermOrder::Block { eliminated: eliminated.clone() };
        let gb = groebner(&self.gens, &order, DEFAULT_DEGREE_CAP)?;
        let keep_vars: Vec<String> = self
            .vars
            .iter()
            .filter(|v| keep.contains(v))
            .cloned()
            .collect();
        let mut out = Vec::new();
        for g in gb {
            if eliminated.iter().all(|&i| !g.involves_var(i)) {
                let mut h = g;
                // drop eliminated vars, highest index first
                let mut elim_sorted = eliminated.clone();
                elim_sorted.sort_unstable_by(|a, b| b.cmp(a));
                for i in elim_sorted {
                    h = h.drop_var(i)?;
                }
                out.push(h);
            }
        }
        Ideal::new(self.field.clone(), keep_vars, out)
    }

    /// Radical membership via the Rabinowitsch trick: f in sqrt(I) iff
    /// I + (1 - z f) is the unit ideal.
    pub fn radical_contains(&self, f: &Polynomial) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        let mut vars = self.vars.clone();
        let zname = fresh_name(&vars, "zrab");
        vars.push(zname.clone());
        let mut gens: Vec<Polynomial> = self
            .gens
            .iter()
            .map(|g| g.reindex(&vars))
            .collect::<Result<_>>()?;
        let z = Polynomial::var_by_name(self.field.clone(), vars.clone(), &zname)?;
        let one = Polynomial::one(self.field.clone(), vars.clone());
        gens.push(one.sub(&z.mul(&f.reindex(&vars)?)));
        Ideal::new(self.field.clone(), vars, gens)?.is_unit_ideal()
    }

    /// Saturation (I : f^infinity), computed by elimination.
    pub fn saturate(&self, f: &Polynomial) -> Result<Ideal> {
        if f.is_zero() {
            return Ok(self.clone());
        }
        let mut vars = self.vars.clone();
        let zname = fresh_name(&vars, "zsat");
        vars.push(zname.clone());
        let mut gens: Vec<Polynomial> = self
            .gens
            .iter()
            .map(|g| g.reindex(&vars))
            .collect::<Result<_>>()?;
        let z = Polynomial::var_by_name(self.field.clone(), vars.clone(), &zname)?;
        let one = Polynomial::one(self.field.clone(), vars.clone());
        gens.push(one.sub(&z.mul(&f.reindex(&vars)?)));
        Ideal::new(self.field.clone(), vars, gens)?.eliminate(&self.vars)
    }
}

pub fn fresh_name(vars: &[String], base: &str) -> String {
    if !vars.iter().any(|v| v == base) {
        return base.to_string();
    }
    let mut i = 1;
    loop {
        let cand = format!("{}{}", base, i);
        if !vars.iter().any(|v| v == &cand) {
            return cand;
        }
        i += 1;
    }
}

/// Full normal form of `f` modulo `basis` for the given order: every term is
/// reduced, not just the leading one.
pub fn normal_form(f: &Polynomial, basis: &[Polynomial], order: &TermOrder) -> Polynomial {
    if basis.is_empty() || f.is_zero() {
        return f.clone();
    }
    let field = f.field().clone();
    let leads: Vec<(Monomial, FieldElem)> = basis
        .iter()
        .map(|b| {
            let (m, c) = b.leading_term(order).expect("basis elements nonzero");
            (m.clone(), c.clone())
        })
        .collect();
    let mut rem = Polynomial::zero(field.clone(), f.vars().to_vec());
    let mut work = f.clone();
    'outer: while let Some((m, c)) = work.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        for (i, (lm, lc)) in leads.iter().enumerate() {
            if lm.divides(&m) {
                let q = lm.try_div(&m).unwrap();
                let factor = field.div(&c, lc).expect("leading coeff nonzero");
                work = work.sub(&basis[i].mul_term(&q, &factor));
                continue 'outer;
            }
        }
        // irreducible leading term: move it to the remainder
        rem = rem.add_term(m.clone(), c.clone());
        let single = Polynomial::zero(field.clone(), f.vars().to_vec()).add_term(m, c);
        work = work.sub(&single);
    }
    rem
}

/// Buchberger's algorithm with the coprimality criterion, returning the
/// unique reduced basis (monic, interreduced, sorted by leading term).
pub fn groebner(gens: &[Polynomial], order: &TermOrder, degree_cap: u32) -> Result<Vec<Polynomial>> {
    let mut basis: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if basis.is_empty() {
        return Ok(vec![]);
    }
    let field = basis[0].field().clone();
    for g in &basis {
        if g.degree().unwrap_or(0) > degree_cap {
            return Err(Error::Capacity(format!(
                "generator degree exceeds cap {}",
                degree_cap
            )));
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (mi, ci) = {
            let (m, c) = basis[i].leading_term(order).unwrap();
            (m.clone(), c.clone())
        };
        let (mj, cj) = {
            let (m, c) = basis[j].leading_term(order).unwrap();
            (m.clone(), c.clone())
        };
        let lcm = mi.lcm(&mj);
        // Buchberger's first criterion: coprime leading monomials
        if lcm.degree() == mi.degree() + mj.degree() {
            continue;
        }
        if lcm.degree() > degree_cap {
            return Err(Error::Capacity(format!(
                "S-pair degree {} exceeds cap {}",
                lcm.degree(),
                degree_cap
            )));
        }
        let qi = mi.try_div(&lcm).unwrap();
        let qj = mj.try_div(&lcm).unwrap();
        let inv_ci = field.inv(&ci).expect("leading coeff nonzero");
        let inv_cj = field.inv(&cj).expect("leading coeff nonzero");
        let s = basis[i]
            .mul_term(&qi, &inv_ci)
            .sub(&basis[j].mul_term(&qj, &inv_cj));
        let r = normal_form(&s, &basis, order);
        if r.is_zero() {
            continue;
        }
        if r.degree().unwrap_or(0) > degree_cap {
            return Err(Error::Capacity(format!(
                "basis element degree exceeds cap {}",
                degree_cap
            )));
        }
        let k = basis.len();
        for idx in 0..k {
            pairs.push((idx, k));
        }
        basis.push(r);
    }
    // drop elements whose leading monomial is generated by another's
    // (first occurrence wins among equal leading monomials)
    let mut minimal: Vec<Polynomial> = Vec::new();
    'outer: for i in 0..basis.len() {
        let mi = basis[i].leading_term(order).unwrap().0.clone();
        for (j, other) in basis.iter().enumerate() {
            if j == i {
                continue;
            }
            let mj = other.leading_term(order).unwrap().0;
            if mj.divides(&mi) && (*mj != mi || j < i) {
                continue 'outer;
            }
        }
        minimal.push(basis[i].clone());
    }
    basis = minimal;
    // tail-reduce to the unique reduced basis; leading terms are pairwise
    // incomparable, so nothing reduces to zero here
    loop {
        let mut changed = false;
        let mut next: Vec<Polynomial> = Vec::with_capacity(basis.len());
        for i in 0..basis.len() {
            let others: Vec<Polynomial> = basis
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, p)| p.clone())
                .collect();
            let r = normal_form(&basis[i], &others, order);
            if !r.equals(&basis[i]) {
                changed = true;
            }
            next.push(r);
        }
        basis = next;
        if !changed {
            break;
        }
    }
    let mut basis: Vec<Polynomial> = basis.iter().map(|b| b.monic(order)).collect();
    basis.sort_by(|a, b| {
        let ma = a.leading_term(order).unwrap().0;
        let mb = b.leading_term(order).unwrap().0;
        order.cmp(ma, mb)
    });
    Ok(basis)
}

/// Pivot monomials of the degree-<= k truncation of I inside K[[X]].
///
/// Row-reduces the span of { m * g : deg(m) + mindeg(g) <= k }, truncated at
/// degree k, pivoting on the deglex-SMALLEST monomial of each reduced row.
/// The pivot set equals the diagram of initial exponents of I * K[[X]]
/// restricted to degrees <= k, because the order is degree-compatible.
pub fn truncation_basis(ideal: &Ideal, k: u32) -> Result<Vec<Monomial>> {
    let field = ideal.field().clone();
    let n = ideal.vars().len();
    // rows keyed by pivot (smallest) monomial
    let mut rows: BTreeMap<Monomial, BTreeMap<Monomial, FieldElem>> = BTreeMap::new();
    let insert_row = |row: BTreeMap<Monomial, FieldElem>,
                          rows: &mut BTreeMap<Monomial, BTreeMap<Monomial, FieldElem>>| {
        let mut row = row;
        loop {
            let Some((pivot, lead)) = row.first_key_value().map(|(m, c)| (m.clone(), c.clone()))
            else {
                return;
            };
            match rows.get(&pivot) {
                None => {
                    // normalize pivot coefficient to 1
                    let inv = field.inv(&lead).expect("pivot nonzero");
                    let mut norm = BTreeMap::new();
                    for (m, c) in row {
                        let c2 = field.mul(&c, &inv);
                        if !field.is_zero(&c2) {
                            norm.insert(m, c2);
                        }
                    }
                    rows.insert(pivot, norm);
                    return;
                }
                Some(existing) => {
                    // eliminate the pivot using the stored (monic) row
                    let mut next = row.clone();
                    for (m, c) in existing {
                        let delta = field.mul(&lead, c);
                        let cur = next.remove(m).unwrap_or_else(|| field.zero());
                        let val = field.sub(&cur, &delta);
                        if !field.is_zero(&val) {
                            next.insert(m.clone(), val);
                        }
                    }
                    next.remove(&pivot);
                    row = next;
                }
            }
        }
    };
    for g in ideal.gens() {
        let Some(ord) = g.min_degree() else { continue };
        if ord > k {
            continue;
        }
        for m in Monomial::all_up_to_degree(n, k - ord) {
            let prod = g.mul_term(&m, &field.one());
            let mut row = BTreeMap::new();
            for (mm, c) in prod.terms() {
                if mm.degree() <= k {
                    row.insert(mm.clone(), c.clone());
                }
            }
            insert_row(row, &mut rows);
        }
    }
    Ok(rows.into_keys().collect())
}

/// Minimal elements (under divisibility) of a monomial set.
pub fn minimal_monomials(mut mons: Vec<Monomial>) -> Vec<Monomial> {
    mons.sort();
    let mut out: Vec<Monomial> = Vec::new();
    for m in mons {
        if !out.iter().any(|v| v.divides(&m)) {
            out.push(m);
        }
    }
    out
}
