//! Marked ideals (Z, N, E, I, d) on affine charts: an ambient chart Z, a
//! smooth subvariety N cut out by a subset of the chart variables, an ordered
//! list E of coordinate divisors, an ideal I on N, and a mark d >= 1.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::derive::derivative_ideal;
use crate::error::{Error, Result};
use crate::field::{FieldElem, GroundField};
use crate::ideal::Ideal;
use crate::poly::Polynomial;

/// An affine chart: a ground field and an ordered list of coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub field: GroundField,
    pub vars: Vec<String>,
}

impl Chart {
    pub fn new(field: GroundField, vars: Vec<String>) -> Self {
        Chart { field, vars }
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownSymbol(name.into()))
    }
}

/// Where a divisor in E came from; the index is its birth order within its
/// kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DivisorOrigin {
    Original(usize),
    Exceptional(usize),
    Horizontal(usize),
}

/// A coordinate divisor {var = 0} on the chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor {
    pub var: String,
    pub origin: DivisorOrigin,
}

/// A marked ideal. Generators live in the chart coordinates but may not
/// involve the variables cutting out N; divisor variables are disjoint from
/// those as well (E meets N transversally in these charts).
#[derive(Clone, Debug)]
pub struct MarkedIdeal {
    pub chart: Chart,
    /// Chart variables whose vanishing cuts out N.
    pub n_vanishing: Vec<String>,
    /// Ordered exceptional data; order is part of the structure.
    pub divisors: Vec<Divisor>,
    pub ideal: Ideal,
    pub d: u32,
}

impl MarkedIdeal {
    pub fn new(
        chart: Chart,
        n_vanishing: Vec<String>,
        divisors: Vec<Divisor>,
        ideal: Ideal,
        d: u32,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::Invalid("mark d must be positive".into()));
        }
        if ideal.vars() != chart.vars.as_slice() || ideal.field() != &chart.field {
            return Err(Error::MismatchedAmbient(
                "ideal must live on the chart's coordinate ring".into(),
            ));
        }
        for v in &n_vanishing {
            let i = chart.var_index(v)?;
            for g in ideal.gens() {
                if g.involves_var(i) {
                    return Err(Error::Invalid(format!(
                        "generator involves `{}` which cuts out N",
                        v
                    )));
                }
            }
        }
        for dv in &divisors {
            chart.var_index(&dv.var)?;
            if n_vanishing.contains(&dv.var) {
                return Err(Error::Invalid(format!(
                    "divisor variable `{}` cuts out N",
                    dv.var
                )));
            }
        }
        {
            let mut seen = std::collections::BTreeSet::new();
            for dv in &divisors {
                if !seen.insert(&dv.var) {
                    return Err(Error::Invalid(format!(
                        "duplicate divisor variable `{}`",
                        dv.var
                    )));
                }
            }
        }
        Ok(MarkedIdeal { chart, n_vanishing, divisors, ideal, d })
    }

    /// Marked ideal on the full chart (N = Z), no divisors.
    pub fn on_chart(chart: Chart, ideal: Ideal, d: u32) -> Result<Self> {
        MarkedIdeal::new(chart, vec![], vec![], ideal, d)
    }

    /// Number of exceptional blow-ups recorded so far.
    pub fn exceptional_count(&self) -> usize {
        self.divisors
            .iter()
            .filter_map(|dv| match dv.origin {
                DivisorOrigin::Exceptional(i) => Some(i + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn horizontal_count(&self) -> usize {
        self.divisors
            .iter()
            .filter_map(|dv| match dv.origin {
                DivisorOrigin::Horizontal(i) => Some(i + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Chart variables that are coordinates on N.
    pub fn n_vars(&self) -> Vec<String> {
        self.chart
            .vars
            .iter()
            .filter(|v| !self.n_vanishing.contains(v))
            .cloned()
            .collect()
    }

    fn check_point_on_n(&self, point: &[FieldElem]) -> Result<()> {
        if point.len() != self.chart.vars.len() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, chart has {}",
                point.len(),
                self.chart.vars.len()
            )));
        }
        for v in &self.n_vanishing {
            let i = self.chart.var_index(v)?;
            if !self.chart.field.is_zero(&point[i]) {
                return Err(Error::PointNotOnVariety);
            }
        }
        Ok(())
    }

    /// Order of I at a rational point of N; None encodes infinite order.
    pub fn order_at(&self, point: &[FieldElem]) -> Result<Option<u32>> {
        self.check_point_on_n(point)?;
        let mut best: Option<u32> = None;
        for g in self.ideal.gens() {
            if let Some(o) = g.translate(point).min_degree() {
                best = Some(best.map_or(o, |b| b.min(o)));
            }
        }
        Ok(best)
    }

    /// Order of I along a coordinate divisor {var = 0}; None for the zero
    /// ideal.
    pub fn order_along(&self, var: &str) -> Result<Option<u32>> {
        let i = self.chart.var_index(var).map_err(|_| {
            Error::UnsupportedHypersurface(format!(
                "`{}` is not a chart coordinate",
                var
            ))
        })?;
        let mut best: Option<u32> = None;
        for g in self.ideal.gens() {
            if let Some(o) = g.var_min_exponent(i) {
                best = Some(best.map_or(o, |b| b.min(o)));
            }
        }
        Ok(best)
    }

    /// Defining ideal (on the chart) of cosupp(I, d) = {a in N : ord_a I >= d}:
    /// the (d-1)-st derivative ideal together with the equations of N.
    pub fn cosupport_ideal(&self) -> Result<Ideal> {
        let mut gens = if self.d >= 1 {
            derivative_ideal(&self.ideal, self.d - 1)?.gens().to_vec()
        } else {
            self.ideal.gens().to_vec()
        };
        for v in &self.n_vanishing {
            gens.push(Polynomial::var_by_name(
                self.chart.field.clone(),
                self.chart.vars.clone(),
                v,
            )?);
        }
        Ideal::new(self.chart.field.clone(), self.chart.vars.clone(), gens)
    }

    /// Whether the point lies in cosupp(I, d).
    pub fn point_in_cosupport(&self, point: &[FieldElem]) -> Result<bool> {
        match self.order_at(point)? {
            None => Ok(true),
            Some(o) => Ok(o >= self.d),
        }
    }

    /// Maximal order: ord_a I <= d for every a in N, decided by the unit
    /// ideal test on the d-th derivative ideal plus the equations of N.
    pub fn is_maximal_order(&self) -> Result<bool> {
        if self.ideal.is_zero_ideal() {
            return Ok(false);
        }
        let mut gens = derivative_ideal(&self.ideal, self.d)?.gens().to_vec();
        for v in &self.n_vanishing {
            gens.push(Polynomial::var_by_name(
                self.chart.field.clone(),
                self.chart.vars.clone(),
                v,
            )?);
        }
        let probe = Ideal::new(self.chart.field.clone(), self.chart.vars.clone(), gens)?;
        probe.is_unit_ideal()
    }

    /// Pull back along a smooth morphism into the chart.
    pub fn pullback(&self, morphism: &SmoothPullback) -> Result<MarkedIdeal> {
        match morphism {
            SmoothPullback::Identity => Ok(self.clone()),
            SmoothPullback::ProductWithAffine { k } => self.pullback_product(*k),
            SmoothPullback::FieldExtension { target } => self.pullback_field_extension(target),
            SmoothPullback::GenericFibreLocalization { kept } => {
                self.pullback_generic_fibre(kept)
            }
        }
    }

    /// Z x A^k -> Z: append k fresh coordinates (no new divisors).
    fn pullback_product(&self, k: usize) -> Result<MarkedIdeal> {
        let mut vars = self.chart.vars.clone();
        for _ in 0..k {
            vars.push(crate::ideal::fresh_name(&vars, "w"));
        }
        let chart = Chart::new(self.chart.field.clone(), vars.clone());
        let gens: Result<Vec<Polynomial>> =
            self.ideal.gens().iter().map(|g| g.reindex(&vars)).collect();
        let ideal = Ideal::new(chart.field.clone(), vars, gens?)?;
        MarkedIdeal::new(
            chart,
            self.n_vanishing.clone(),
            self.divisors.clone(),
            ideal,
            self.d,
        )
    }

    /// Base change along Q -> K for a fraction field K: coefficients embed
    /// unchanged.
    fn pullback_field_extension(&self, target: &GroundField) -> Result<MarkedIdeal> {
        if !self.chart.field.is_rationals() {
            return Err(Error::UnsupportedMorphism(
                "field extension pullback starts from Q".into(),
            ));
        }
        for p in target.params() {
            if self.chart.vars.contains(p) {
                return Err(Error::Invalid(format!(
                    "field parameter `{}` collides with a chart variable",
                    p
                )));
            }
        }
        let chart = Chart::new(target.clone(), self.chart.vars.clone());
        let gens: Result<Vec<Polynomial>> = self
            .ideal
            .gens()
            .iter()
            .map(|g| g.map_coefficients(target, &mut |c| Ok(c.clone())))
            .collect();
        let ideal = Ideal::new(target.clone(), self.chart.vars.clone(), gens?)?;
        MarkedIdeal::new(
            chart,
            self.n_vanishing.clone(),
            self.divisors.clone(),
            ideal,
            self.d,
        )
    }

    /// Localize at the generic point of the coordinate subspace spanned by
    /// the dropped variables: kept variables stay as coordinates, the others
    /// move into the ground field. Divisors along dropped variables do not
    /// pass through the generic point and are removed.
    fn pullback_generic_fibre(&self, kept: &[String]) -> Result<MarkedIdeal> {
        if !self.chart.field.is_rationals() {
            return Err(Error::UnsupportedMorphism(
                "generic fibre localization is supported over Q".into(),
            ));
        }
        for v in kept {
            self.chart.var_index(v)?;
        }
        for v in &self.n_vanishing {
            if !kept.contains(v) {
                return Err(Error::UnsupportedMorphism(format!(
                    "variable `{}` cutting out N must be kept",
                    v
                )));
            }
        }
        let vanishing: Vec<String> = self
            .chart
            .vars
            .iter()
            .filter(|v| kept.contains(v))
            .cloned()
            .collect();
        let localized = crate::diagram::localize_at_coordinate_subspace(
            &self.ideal,
            &vanishing,
        )?;
        let chart = Chart::new(localized.field().clone(), localized.vars().to_vec());
        let divisors: Vec<Divisor> = self
            .divisors
            .iter()
            .filter(|dv| kept.contains(&dv.var))
            .cloned()
            .collect();
        MarkedIdeal::new(chart, self.n_vanishing.clone(), divisors, localized, self.d)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": field_json(&self.chart.field),
            "vars": self.chart.vars,
            "N": self.n_vanishing,
            "E": self
                .divisors
                .iter()
                .map(|dv| {
                    let (kind, index) = match dv.origin {
                        DivisorOrigin::Original(i) => ("original", i),
                        DivisorOrigin::Exceptional(i) => ("exceptional", i),
                        DivisorOrigin::Horizontal(i) => ("horizontal", i),
                    };
                    json!({ "gen": dv.var, "origin": kind, "index": index })
                })
                .collect::<Vec<_>>(),
            "gens": self
                .ideal
                .gens()
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>(),
            "d": self.d,
        })
    }
}

pub fn field_json(field: &GroundField) -> Value {
    if field.is_rationals() {
        json!({ "kind": "Q" })
    } else {
        json!({
            "kind": "fraction",
            "params": field.params(),
            "prime": field
                .prime_basis()
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>(),
        })
    }
}

/// Supported smooth morphisms for pullback.
#[derive(Clone, Debug)]
pub enum SmoothPullback {
    Identity,
    ProductWithAffine { k: usize },
    FieldExtension { target: GroundField },
    GenericFibreLocalization { kept: Vec<String> },
}
