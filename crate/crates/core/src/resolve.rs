//! Resolution driver for marked ideals of small dimension, and the
//! functoriality and Hilbert-Samuel checks that ride on its traces.

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::derive::{coefficient_ideal_normal_variant, maximal_contact};
use crate::descent::DescentModel;
use crate::diagram::{hilbert_samuel_at_point, HsFunction};
use crate::error::{Error, Result};
use crate::field::{small_divisors, univariate_gcd, FieldElem, Rat};
use crate::ideal::Ideal;
use crate::marked::{MarkedIdeal, SmoothPullback};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::transform::{
    controlled_transform, ideal_in_coordinate_prime, BlowupCenter,
};

#[derive(Clone, Copy, Debug)]
pub struct ResolveOptions {
    pub step_cap: usize,
    pub allow_divisorial: bool,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        ResolveOptions { step_cap: 32, allow_divisorial: false }
    }
}

/// One blow-up in a resolution: where it happened (the chart path, as the
/// list of exceptional variables chosen from the root) and with which centre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionStep {
    pub path: Vec<String>,
    pub center: BlowupCenter,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionTrace {
    pub steps: Vec<ResolutionStep>,
    pub resolved: bool,
}

impl ResolutionTrace {
    pub fn to_json(&self) -> Value {
        json!({
            "steps": self
                .steps
                .iter()
                .map(|s| json!({ "path": s.path, "center": s.center.vars }))
                .collect::<Vec<_>>(),
            "resolved": self.resolved,
        })
    }
}

/// Blow up admissible centres until the cosupport is empty on every chart.
/// Charts are processed depth-first in the deterministic chart order of the
/// transform, so traces are reproducible.
pub fn resolve_maximal_order(m: &MarkedIdeal, opts: &ResolveOptions) -> Result<ResolutionTrace> {
    let mut steps = Vec::new();
    resolve_rec(m.clone(), Vec::new(), &mut steps, opts)?;
    Ok(ResolutionTrace { steps, resolved: true })
}

fn resolve_rec(
    m: MarkedIdeal,
    path: Vec<String>,
    steps: &mut Vec<ResolutionStep>,
    opts: &ResolveOptions,
) -> Result<()> {
    let co = m.cosupport_ideal()?;
    if co.is_unit_ideal()? {
        return Ok(());
    }
    if steps.len() >= opts.step_cap {
        return Err(Error::StepCap(opts.step_cap));
    }
    let (m2, center) = choose_center(&m, opts)?;
    if center.vars.len() < 2 && !opts.allow_divisorial {
        return Err(Error::DegenerateCenter);
    }
    steps.push(ResolutionStep { path: path.clone(), center: center.clone() });
    let charts = controlled_transform(&m2, &center, opts.allow_divisorial)?;
    for ch in charts {
        if let Some(mm) = ch.marked {
            let mut p = path.clone();
            p.push(ch.exceptional_var);
            resolve_rec(mm, p, steps, opts)?;
        }
    }
    Ok(())
}

/// Pick the next centre. The marked ideal may come back in new coordinates
/// (after straightening a maximal contact element or translating a point to
/// the origin); the centre is a coordinate subspace of that chart.
pub fn choose_center(
    m: &MarkedIdeal,
    opts: &ResolveOptions,
) -> Result<(MarkedIdeal, BlowupCenter)> {
    if let Some(c) = recognize_cosupport_subspace(m)? {
        return Ok((m.clone(), c));
    }
    if let Ok((zvar, m2)) = maximal_contact(m) {
        if let Some(c) = recognize_cosupport_subspace(&m2)? {
            return Ok((m2, c));
        }
        let coeff = coefficient_ideal_normal_variant(&m2, &zvar)?;
        if coeff.ideal.is_zero_ideal() {
            // the cosupport is the whole contact hypersurface inside N
            let mut vars = m2.n_vanishing.clone();
            vars.push(zvar);
            return Ok((m2, BlowupCenter::new(vars)));
        }
        if let Some(c) = recognize_cosupport_subspace(&coeff)? {
            // centre of the coefficient ideal lifts with the same variables
            return Ok((m2, c));
        }
    }
    if m.n_vars().len() == 1 {
        return dim_one_center(m, opts);
    }
    Err(Error::Undecomposable(
        "no coordinate centre found for the cosupport".into(),
    ))
}

/// Recognize the cosupport as a coordinate subspace V(S): every variable of
/// S lies in the radical of the cosupport ideal, and the cosupport ideal is
/// contained in (S).
pub fn recognize_cosupport_subspace(m: &MarkedIdeal) -> Result<Option<BlowupCenter>> {
    let j = m.cosupport_ideal()?;
    let mut s = Vec::new();
    let mut idx = Vec::new();
    for (i, v) in m.chart.vars.iter().enumerate() {
        let p = Polynomial::var(m.chart.field.clone(), m.chart.vars.clone(), i);
        if j.radical_contains(&p)? {
            s.push(v.clone());
            idx.push(i);
        }
    }
    if s.is_empty() {
        return Ok(None);
    }
    if ideal_in_coordinate_prime(&j, &idx) {
        Ok(Some(BlowupCenter::new(s)))
    } else {
        Ok(None)
    }
}

/// One-dimensional N: the cosupport is a finite set of points of the line.
/// Find its rational points, translate the smallest to the origin and blow
/// it up.
fn dim_one_center(
    m: &MarkedIdeal,
    _opts: &ResolveOptions,
) -> Result<(MarkedIdeal, BlowupCenter)> {
    let u = m.n_vars()[0].clone();
    let ui = m.chart.var_index(&u)?;
    if m.divisors.iter().any(|dv| dv.var == u) {
        return Err(Error::Undecomposable(
            "cannot translate a divisor coordinate".into(),
        ));
    }
    let j = m.cosupport_ideal()?;
    // gcd of the generators that are univariate in u
    let mut g: Option<Polynomial> = None;
    for cand in j.gens() {
        let pure = cand
            .terms()
            .keys()
            .all(|mo| mo.0.iter().enumerate().all(|(k, &e)| k == ui || e == 0));
        if !pure || cand.degree() == Some(0) {
            continue;
        }
        g = Some(match g {
            None => cand.clone(),
            Some(prev) => univariate_gcd(&prev, cand),
        });
    }
    let g = g.ok_or_else(|| {
        Error::Undecomposable("no univariate cosupport equation".into())
    })?;
    let mut roots = rational_roots(&g, ui)?;
    if roots.is_empty() {
        return Err(Error::Undecomposable(
            "cosupport has no rational point on the line".into(),
        ));
    }
    roots.sort();
    let a = roots[0].clone();
    let field = m.chart.field.clone();
    let vars = m.chart.vars.clone();
    let translated = if a.is_zero() {
        m.clone()
    } else {
        let mut images: Vec<Polynomial> = (0..vars.len())
            .map(|k| Polynomial::var(field.clone(), vars.clone(), k))
            .collect();
        let shift = Polynomial::constant(field.clone(), vars.clone(), field.from_rat(a));
        images[ui] = images[ui].add(&shift);
        let gens: Vec<Polynomial> = m
            .ideal
            .gens()
            .iter()
            .map(|p| p.substitute(&images))
            .collect();
        let ideal = Ideal::new(field, vars, gens)?;
        MarkedIdeal::new(
            m.chart.clone(),
            m.n_vanishing.clone(),
            m.divisors.clone(),
            ideal,
            m.d,
        )?
    };
    let mut cvars = m.n_vanishing.clone();
    cvars.push(u);
    Ok((translated, BlowupCenter::new(cvars)))
}

/// Rational roots of a polynomial that is univariate in the i-th variable.
fn rational_roots(p: &Polynomial, i: usize) -> Result<Vec<Rat>> {
    let deg = p.max_var_exponent(i);
    let mut coeffs: Vec<Rat> = vec![Rat::zero(); deg as usize + 1];
    for (m, c) in p.terms() {
        let r = c
            .as_rat()
            .ok_or_else(|| Error::Undecomposable("nonrational coefficient".into()))?;
        coeffs[m.0[i] as usize] = r.clone();
    }
    let mut denlcm = BigInt::one();
    for c in &coeffs {
        denlcm = num::integer::lcm(denlcm, c.denom().clone());
    }
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * Rat::from(denlcm.clone())).to_integer())
        .collect();
    let mut roots = Vec::new();
    let mut low = 0usize;
    while low < ints.len() && ints[low].is_zero() {
        low += 1;
    }
    if low > 0 {
        roots.push(Rat::zero());
    }
    if low >= ints.len() {
        return Ok(roots);
    }
    let a0 = ints[low].abs();
    let an = ints.last().unwrap().abs();
    for pnum in small_divisors(&a0) {
        for qden in small_divisors(&an) {
            for sign in [1i64, -1] {
                let cand = Rat::new(&pnum * BigInt::from(sign), qden.clone());
                let mut val = Rat::zero();
                for c in ints.iter().rev() {
                    val = val * cand.clone() + Rat::from(c.clone());
                }
                if val.is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    Ok(roots)
}

/// Functoriality under products with affine space: resolving M x A^k must
/// use the same centres in the same order as resolving M, and the
/// Hilbert-Samuel function at the origin must be the k-fold partial sum of
/// the one downstairs.
#[derive(Clone, Debug)]
pub struct PullbackProductReport {
    pub base: ResolutionTrace,
    pub pulled_back: ResolutionTrace,
    pub centers_match: bool,
    pub hs_identity: bool,
}

pub fn check_pullback_product_line(
    m: &MarkedIdeal,
    k: usize,
    k_max: u32,
    opts: &ResolveOptions,
) -> Result<PullbackProductReport> {
    let base = resolve_maximal_order(m, opts)?;
    let mp = m.pullback(&SmoothPullback::ProductWithAffine { k })?;
    let pulled_back = resolve_maximal_order(&mp, opts)?;
    let centers_match = base.steps == pulled_back.steps;
    let origin: Vec<FieldElem> =
        m.chart.vars.iter().map(|_| m.chart.field.zero()).collect();
    let h = hilbert_samuel_at_point(&m.ideal, &origin, k_max)?;
    let origin_up: Vec<FieldElem> =
        mp.chart.vars.iter().map(|_| mp.chart.field.zero()).collect();
    let h_up = hilbert_samuel_at_point(&mp.ideal, &origin_up, k_max)?;
    let hs_identity = h_up.prefix(k_max)? == h.lambda(k as u32).prefix(k_max)?;
    Ok(PullbackProductReport { base, pulled_back, centers_match, hs_identity })
}

/// Functoriality under passing to the generic fibre of a descent model with
/// trivial relation prime: centres of the total-space resolution that
/// dominate the parameter space (no symbol in the centre or on the chart
/// path) must localize to exactly the fibre resolution; the others blow up
/// loci inside special fibres and disappear.
#[derive(Clone, Debug)]
pub struct PullbackFibreReport {
    pub total: ResolutionTrace,
    pub fibre: ResolutionTrace,
    pub skipped_steps: usize,
    pub centers_match: bool,
}

pub fn check_pullback_generic_fibre(
    model: &DescentModel,
    opts: &ResolveOptions,
) -> Result<PullbackFibreReport> {
    if !model.prime.is_zero_ideal() {
        return Err(Error::UnsupportedMorphism(
            "generic fibre functoriality check requires a trivial relation prime".into(),
        ));
    }
    let z = Ideal::new(
        crate::field::GroundField::rationals(),
        model.z_vars(),
        model.z_gens.clone(),
    )?;
    let z_marked = MarkedIdeal::new(
        crate::marked::Chart::new(z.field().clone(), z.vars().to_vec()),
        model.n_vanishing.clone(),
        vec![],
        z,
        model.d,
    )?;
    let total = resolve_maximal_order(&z_marked, opts)?;
    let fibre_marked = model.generic_fibre()?;
    let fibre = resolve_maximal_order(&fibre_marked, opts)?;
    let dominant: Vec<&ResolutionStep> = total
        .steps
        .iter()
        .filter(|s| {
            s.center.vars.iter().all(|v| !model.symbols.contains(v))
                && s.path.iter().all(|v| !model.symbols.contains(v))
        })
        .collect();
    let skipped_steps = total.steps.len() - dominant.len();
    let centers_match = dominant.len() == fibre.steps.len()
        && dominant
            .iter()
            .zip(fibre.steps.iter())
            .all(|(a, b)| a.path == b.path && a.center == b.center);
    Ok(PullbackFibreReport { total, fibre, skipped_steps, centers_match })
}

/// Behaviour of the Hilbert-Samuel function under one permissible blow-up:
/// it must be constant along the centre, and must not increase (truncated
/// lexicographically) at the origin of any chart of the strict transform.
#[derive(Clone, Debug)]
pub struct BennettChart {
    pub exceptional_var: String,
    /// None when the origin of the chart is off the strict transform.
    pub h_after: Option<Vec<u64>>,
    pub no_increase: bool,
}

#[derive(Clone, Debug)]
pub struct BennettReport {
    pub h_center: Vec<u64>,
    pub charts: Vec<BennettChart>,
    pub ok: bool,
}

pub fn bennett_check(ideal: &Ideal, center: &BlowupCenter, k_max: u32) -> Result<BennettReport> {
    let field = ideal.field().clone();
    let vars = ideal.vars().to_vec();
    let cidx: Vec<usize> = center
        .vars
        .iter()
        .map(|v| {
            vars.iter()
                .position(|w| w == v)
                .ok_or_else(|| Error::UnknownSymbol(v.clone()))
        })
        .collect::<Result<_>>()?;
    // centre must lie on the variety
    {
        let images: Vec<Polynomial> = (0..vars.len())
            .map(|k| {
                if cidx.contains(&k) {
                    Polynomial::zero(field.clone(), vars.clone())
                } else {
                    Polynomial::var(field.clone(), vars.clone(), k)
                }
            })
            .collect();
        for g in ideal.gens() {
            if !g.substitute(&images).is_zero() {
                return Err(Error::NotAdmissible(
                    "centre does not lie on the variety".into(),
                ));
            }
        }
    }
    // probe the centre: origin, and one unit step along each free direction
    let origin: Vec<FieldElem> = vars.iter().map(|_| field.zero()).collect();
    let h_center = hilbert_samuel_at_point(ideal, &origin, k_max)?.prefix(k_max)?;
    for (k, _) in vars.iter().enumerate() {
        if cidx.contains(&k) {
            continue;
        }
        let mut p = origin.clone();
        p[k] = field.from_rat(crate::field::rat_int(1));
        let h = hilbert_samuel_at_point(ideal, &p, k_max)?.prefix(k_max)?;
        if h != h_center {
            return Err(Error::CenterHNotConstant);
        }
    }
    // strict transform chart by chart, via saturation at the exceptional
    let mut charts = Vec::new();
    let mut ok = true;
    for &e in &cidx {
        let mut images: Vec<Polynomial> = (0..vars.len())
            .map(|k| Polynomial::var(field.clone(), vars.clone(), k))
            .collect();
        let exc = images[e].clone();
        for &k in &cidx {
            if k != e {
                images[k] = images[k].mul(&exc);
            }
        }
        let total: Vec<Polynomial> = ideal
            .gens()
            .iter()
            .map(|g| g.substitute(&images))
            .collect();
        let strict = Ideal::new(field.clone(), vars.clone(), total)?.saturate(&exc)?;
        let entry = match hilbert_samuel_at_point(&strict, &origin, k_max) {
            Ok(h) => {
                let h_after = h.prefix(k_max)?;
                let no_increase = h_after <= h_center;
                if !no_increase {
                    ok = false;
                }
                BennettChart {
                    exceptional_var: vars[e].clone(),
                    h_after: Some(h_after),
                    no_increase,
                }
            }
            Err(Error::PointNotOnVariety) => BennettChart {
                exceptional_var: vars[e].clone(),
                h_after: None,
                no_increase: true,
            },
            Err(e) => return Err(e),
        };
        charts.push(entry);
    }
    Ok(BennettReport { h_center, charts, ok })
}

/// First term of the refined invariant at the origin for a monomial ideal:
/// the number of irreducible components through the point, paired with
/// Lambda^(dmax - dmin) of the Hilbert-Samuel function there.
#[derive(Clone, Debug)]
pub struct InvSharpFirstTerm {
    pub components: usize,
    pub h: HsFunction,
    pub min_dim: usize,
    pub max_dim: usize,
}

pub fn inv_sharp_first_term(ideal: &Ideal, k_max: u32) -> Result<InvSharpFirstTerm> {
    let n = ideal.vars().len();
    let mut supports: Vec<Vec<usize>> = Vec::new();
    for g in ideal.gens() {
        if g.num_terms() != 1 {
            return Err(Error::Undecomposable(
                "component counting is supported for monomial ideals".into(),
            ));
        }
        let m: &Monomial = g.terms().keys().next().unwrap();
        supports.push((0..n).filter(|&i| m.0[i] > 0).collect());
    }
    if supports.iter().any(|s| s.is_empty()) {
        return Err(Error::Undecomposable("unit ideal has no components".into()));
    }
    // minimal covers of the supports = minimal primes
    let mut covers: Vec<u64> = Vec::new();
    for mask in 1u64..(1 << n) {
        if supports
            .iter()
            .all(|s| s.iter().any(|&i| mask & (1 << i) != 0))
        {
            covers.push(mask);
        }
    }
    let minimal: Vec<u64> = covers
        .iter()
        .copied()
        .filter(|&m| !covers.iter().any(|&o| o != m && (o & m) == o))
        .collect();
    let sizes: Vec<usize> = minimal.iter().map(|m| m.count_ones() as usize).collect();
    let min_dim = n - sizes.iter().max().copied().unwrap_or(0);
    let max_dim = n - sizes.iter().min().copied().unwrap_or(0);
    let origin: Vec<FieldElem> = ideal
        .vars()
        .iter()
        .map(|_| ideal.field().zero())
        .collect();
    let h0 = hilbert_samuel_at_point(ideal, &origin, k_max)?;
    Ok(InvSharpFirstTerm {
        components: minimal.len(),
        h: h0.lambda((max_dim - min_dim) as u32),
        min_dim,
        max_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derive;
    use crate::descent::descend;
    use crate::field::GroundField;
    use crate::marked::Chart;
    use crate::parse::parse_polynomial;

    fn marked(gens: &[&str], vars: &[&str], d: u32) -> MarkedIdeal {
        let f = GroundField::rationals();
        let vs: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let gs: Vec<Polynomial> = gens
            .iter()
            .map(|g| parse_polynomial(g, &vs, &f).unwrap())
            .collect();
        let i = Ideal::new(f.clone(), vs.clone(), gs).unwrap();
        MarkedIdeal::on_chart(Chart::new(f, vs), i, d).unwrap()
    }

    fn center(vars: &[&str]) -> BlowupCenter {
        BlowupCenter::new(vars.iter().map(|s| s.to_string()).collect())
    }

    #[test]
    fn cusp_resolves_in_one_step() {
        let m = marked(&["y^2 - x^3"], &["x", "y"], 2);
        let t = resolve_maximal_order(&m, &ResolveOptions::default()).unwrap();
        assert!(t.resolved);
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.steps[0].path, Vec::<String>::new());
        assert_eq!(t.steps[0].center, center(&["x", "y"]));
    }

    #[test]
    fn odd_power_family_needs_exactly_k_steps() {
        for k in 1..=4u32 {
            let gen = format!("x^2 + y^{}", 2 * k + 1);
            let m = marked(&[&gen], &["x", "y"], 2);
            let t = resolve_maximal_order(&m, &ResolveOptions::default()).unwrap();
            assert_eq!(t.steps.len(), k as usize, "k = {}", k);
            assert!(t
                .steps
                .iter()
                .all(|s| s.center == center(&["x", "y"])));
        }
    }

    #[test]
    fn step_cap_is_enforced() {
        let m = marked(&["y^2 - x^3"], &["x", "y"], 2);
        let opts = ResolveOptions { step_cap: 0, ..Default::default() };
        assert!(matches!(
            resolve_maximal_order(&m, &opts),
            Err(Error::StepCap(0))
        ));
    }

    #[test]
    fn contact_route_reaches_divisorial_center() {
        let m = marked(&["(x + y^2)^2"], &["x", "y"], 2);
        // default options refuse the codimension-one centre
        assert!(matches!(
            resolve_maximal_order(&m, &ResolveOptions::default()),
            Err(Error::DegenerateCenter)
        ));
        let opts = ResolveOptions { allow_divisorial: true, ..Default::default() };
        let t = resolve_maximal_order(&m, &opts).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.steps[0].center, center(&["x"]));
    }

    #[test]
    fn off_origin_point_is_translated() {
        // N = {y = 0} inside the (x, y) chart; cosupport is the point x = 1
        let f = GroundField::rationals();
        let vs: Vec<String> = vec!["x".into(), "y".into()];
        let g = parse_polynomial("(x - 1)^2", &vs, &f).unwrap();
        let i = Ideal::new(f.clone(), vs.clone(), vec![g]).unwrap();
        let m = MarkedIdeal::new(Chart::new(f, vs), vec!["y".into()], vec![], i, 2).unwrap();
        let t = resolve_maximal_order(&m, &ResolveOptions::default()).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.steps[0].center, center(&["x", "y"]));
    }

    #[test]
    fn product_with_plane_is_functorial() {
        let m = marked(&["y^2 - x^3"], &["x", "y"], 2);
        for k in 1..=2usize {
            let rep =
                check_pullback_product_line(&m, k, 8, &ResolveOptions::default()).unwrap();
            assert!(rep.centers_match, "k = {}", k);
            assert!(rep.hs_identity, "k = {}", k);
            assert_eq!(rep.base.steps.len(), rep.pulled_back.steps.len());
        }
    }

    #[test]
    fn generic_fibre_skips_nondominant_centers() {
        let qt = GroundField::fraction(vec!["t".into()], vec![], false).unwrap();
        let vs: Vec<String> = vec!["x".into(), "y".into()];
        let g = parse_polynomial("y^2 - t*x^3", &vs, &qt).unwrap();
        let i = Ideal::new(qt.clone(), vs.clone(), vec![g]).unwrap();
        let m = MarkedIdeal::on_chart(Chart::new(qt, vs), i, 2).unwrap();
        let model = descend(&m).unwrap();
        let rep = check_pullback_generic_fibre(&model, &ResolveOptions::default()).unwrap();
        assert!(rep.centers_match);
        assert!(rep.skipped_steps >= 1);
        assert_eq!(rep.fibre.steps.len(), rep.total.steps.len() - rep.skipped_steps);
    }

    #[test]
    fn bennett_no_increase_for_cusp() {
        let f = GroundField::rationals();
        let vs: Vec<String> = vec!["x".into(), "y".into()];
        let g = parse_polynomial("y^2 - x^3", &vs, &f).unwrap();
        let i = Ideal::new(f, vs, vec![g]).unwrap();
        let rep = bennett_check(&i, &center(&["x", "y"]), 8).unwrap();
        assert!(rep.ok);
        assert_eq!(&rep.h_center[..4], &[1, 3, 5, 7]);
        // x-chart strict transform y^2 - x is smooth through the origin
        let cx = &rep.charts[0];
        assert_eq!(cx.h_after.as_deref().map(|h| h[..3].to_vec()), Some(vec![1, 2, 3]));
        assert!(cx.no_increase);
    }

    #[test]
    fn bennett_rejects_inconstant_center() {
        // y(y - x) has order 2 at the origin but order 1 elsewhere on V(y)
        let f = GroundField::rationals();
        let vs: Vec<String> = vec!["x".into(), "y".into()];
        let g = parse_polynomial("y^2 - x*y", &vs, &f).unwrap();
        let i = Ideal::new(f, vs, vec![g]).unwrap();
        let c = BlowupCenter::new(vec!["y".into()]);
        assert!(matches!(
            bennett_check(&i, &c, 6),
            Err(Error::CenterHNotConstant)
        ));
    }

    #[test]
    fn inv_sharp_for_two_lines() {
        let f = GroundField::rationals();
        let vs: Vec<String> = vec!["x".into(), "y".into()];
        let g = parse_polynomial("x*y", &vs, &f).unwrap();
        let i = Ideal::new(f, vs, vec![g]).unwrap();
        let inv = inv_sharp_first_term(&i, 6).unwrap();
        assert_eq!(inv.components, 2);
        assert_eq!(inv.min_dim, 1);
        assert_eq!(inv.max_dim, 1);
        assert_eq!(inv.h.prefix(3).unwrap(), vec![1, 3, 5, 7]);
    }

    #[test]
    fn inv_sharp_mixed_dimensions() {
        // V(x) union V(y, z): a plane and a line through the origin
        let f = GroundField::rationals();
        let vs: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
        let gs = ["x*y", "x*z"]
            .iter()
            .map(|s| parse_polynomial(s, &vs, &f).unwrap())
            .collect();
        let i = Ideal::new(f, vs, gs).unwrap();
        let inv = inv_sharp_first_term(&i, 6).unwrap();
        assert_eq!(inv.components, 2);
        assert_eq!(inv.min_dim, 1);
        assert_eq!(inv.max_dim, 2);
    }

    #[test]
    fn normal_variant_feeds_the_driver() {
        // ensure the coefficient-ideal route is consistent with the direct
        // recognition on the cusp
        let m = marked(&["y^2 - x^3"], &["x", "y"], 2);
        let (z, m2) = derive::maximal_contact(&m).unwrap();
        assert_eq!(z, "y");
        let c = derive::coefficient_ideal_normal_variant(&m2, &z).unwrap();
        let got = recognize_cosupport_subspace(&c).unwrap().unwrap();
        assert_eq!(got, center(&["x", "y"]));
    }
}
