//! Blow-ups with coordinate centres, controlled transforms of marked ideals,
//! the auxiliary test transformations (product with a line, blow-up of an
//! intersection of exceptional divisors), and test-sequence equivalence.

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::marked::{Divisor, DivisorOrigin, MarkedIdeal};
use crate::monomial::Monomial;
use crate::poly::Polynomial;

/// A coordinate subspace centre V(vars).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BlowupCenter {
    pub vars: Vec<String>,
}

impl BlowupCenter {
    pub fn new(mut vars: Vec<String>) -> Self {
        vars.sort();
        vars.dedup();
        BlowupCenter { vars }
    }

    pub fn label(&self) -> String {
        format!("({})", self.vars.join(","))
    }
}

/// Does every term of every generator lie in the prime generated by the
/// given variables? Exact membership test for variable-generated primes.
pub fn ideal_in_coordinate_prime(ideal: &Ideal, var_indices: &[usize]) -> bool {
    ideal.gens().iter().all(|g| {
        g.terms()
            .keys()
            .all(|m: &Monomial| var_indices.iter().any(|&i| m.0[i] > 0))
    })
}

/// One chart of a transform; `marked` is None when the strict transform of N
/// does not meet the chart.
#[derive(Clone, Debug)]
pub struct TransformedChart {
    pub exceptional_var: String,
    pub marked: Option<MarkedIdeal>,
}

/// Is the centre admissible for the marked ideal: contained in N and in
/// cosupp(I, d)? Coordinate centres have normal crossings with the
/// coordinate divisors automatically.
pub fn is_admissible(m: &MarkedIdeal, center: &BlowupCenter) -> Result<bool> {
    for v in &center.vars {
        m.chart.var_index(v)?;
    }
    for v in &m.n_vanishing {
        if !center.vars.contains(v) {
            return Ok(false);
        }
    }
    let idx: Vec<usize> = center
        .vars
        .iter()
        .map(|v| m.chart.var_index(v))
        .collect::<Result<_>>()?;
    let co = m.cosupport_ideal()?;
    Ok(ideal_in_coordinate_prime(&co, &idx))
}

/// Substitution images for the chart of `exc` in the blow-up with the given
/// centre: centre variables other than `exc` are multiplied by it.
fn chart_images(m: &MarkedIdeal, center: &BlowupCenter, exc: &str) -> Result<Vec<Polynomial>> {
    let field = m.chart.field.clone();
    let vars = m.chart.vars.clone();
    let e = m.chart.var_index(exc)?;
    let mut images: Vec<Polynomial> = (0..vars.len())
        .map(|j| Polynomial::var(field.clone(), vars.clone(), j))
        .collect();
    let exc_poly = images[e].clone();
    for v in &center.vars {
        let j = m.chart.var_index(v)?;
        if j != e {
            images[j] = images[j].mul(&exc_poly);
        }
    }
    Ok(images)
}

/// Divisor list after a blow-up chart: strict transforms keep their variable,
/// the divisor along the chart variable leaves the chart, and the new
/// exceptional divisor is appended last.
fn transform_divisors(m: &MarkedIdeal, exc: &str) -> Vec<Divisor> {
    let mut out: Vec<Divisor> = m
        .divisors
        .iter()
        .filter(|dv| dv.var != exc)
        .cloned()
        .collect();
    out.push(Divisor {
        var: exc.to_string(),
        origin: DivisorOrigin::Exceptional(m.exceptional_count()),
    });
    out
}

/// Controlled transform: blow up an admissible centre and divide the total
/// transform exactly by the d-th power of the exceptional coordinate in each
/// chart.
pub fn controlled_transform(
    m: &MarkedIdeal,
    center: &BlowupCenter,
    allow_divisorial: bool,
) -> Result<Vec<TransformedChart>> {
    if center.vars.len() < 2 && !allow_divisorial {
        return Err(Error::DegenerateCenter);
    }
    if center.vars.is_empty() {
        return Err(Error::DegenerateCenter);
    }
    if !is_admissible(m, center)? {
        return Err(Error::NotAdmissible(format!(
            "centre {} is not inside cosupp",
            center.label()
        )));
    }
    let mut charts = Vec::new();
    for exc in &center.vars {
        if m.n_vanishing.contains(exc) {
            charts.push(TransformedChart {
                exceptional_var: exc.clone(),
                marked: None,
            });
            continue;
        }
        let images = chart_images(m, center, exc)?;
        let e = m.chart.var_index(exc)?;
        let mut gens = Vec::new();
        for g in m.ideal.gens() {
            let total = g.substitute(&images);
            let divided = total
                .div_var_pow(e, m.d)
                .ok_or(Error::DivisibilityFailure)?;
            gens.push(divided);
        }
        let ideal = Ideal::new(m.chart.field.clone(), m.chart.vars.clone(), gens)?;
        let marked = MarkedIdeal::new(
            m.chart.clone(),
            m.n_vanishing.clone(),
            transform_divisors(m, exc),
            ideal,
            m.d,
        )?;
        charts.push(TransformedChart {
            exceptional_var: exc.clone(),
            marked: Some(marked),
        });
    }
    Ok(charts)
}

/// Test transformation: product with a line. A fresh coordinate is appended
/// and recorded as a horizontal divisor, placed last in E.
pub fn product_with_line(m: &MarkedIdeal) -> Result<MarkedIdeal> {
    let p = m.pullback(&crate::marked::SmoothPullback::ProductWithAffine { k: 1 })?;
    let new_var = p.chart.vars.last().unwrap().clone();
    let mut divisors = p.divisors.clone();
    divisors.push(Divisor {
        var: new_var,
        origin: DivisorOrigin::Horizontal(m.horizontal_count()),
    });
    MarkedIdeal::new(p.chart, p.n_vanishing, divisors, p.ideal, p.d)
}

/// Test transformation: blow up the intersection of the i-th and j-th
/// divisors of E. The ideal is pulled back without division; the mark is
/// unchanged.
pub fn exceptional_blowup(m: &MarkedIdeal, i: usize, j: usize) -> Result<Vec<TransformedChart>> {
    if i == j {
        return Err(Error::IndexError("divisor indices must differ".into()));
    }
    let get = |k: usize| -> Result<&Divisor> {
        m.divisors
            .get(k)
            .ok_or_else(|| Error::IndexError(format!("no divisor with index {}", k)))
    };
    let a = get(i)?.var.clone();
    let b = get(j)?.var.clone();
    let center = BlowupCenter::new(vec![a, b]);
    let mut charts = Vec::new();
    for exc in &center.vars {
        let images = chart_images(m, &center, exc)?;
        let gens: Vec<Polynomial> = m
            .ideal
            .gens()
            .iter()
            .map(|g| g.substitute(&images))
            .collect();
        let ideal = Ideal::new(m.chart.field.clone(), m.chart.vars.clone(), gens)?;
        let marked = MarkedIdeal::new(
            m.chart.clone(),
            m.n_vanishing.clone(),
            transform_divisors(m, exc),
            ideal,
            m.d,
        )?;
        charts.push(TransformedChart {
            exceptional_var: exc.clone(),
            marked: Some(marked),
        });
    }
    Ok(charts)
}

/// Where candidate centres come from when exploring test sequences.
#[derive(Clone, Debug)]
pub enum CandidatePolicy {
    Explicit(Vec<BlowupCenter>),
    /// All coordinate subspaces of codimension >= 2 containing N.
    AllSubspaces,
}

/// Candidate centres at a node, in deterministic order: by codimension, then
/// by the variable list.
pub fn candidate_centers(m: &MarkedIdeal, policy: &CandidatePolicy) -> Vec<BlowupCenter> {
    match policy {
        CandidatePolicy::Explicit(cs) => cs.clone(),
        CandidatePolicy::AllSubspaces => {
            let vars = &m.chart.vars;
            let n = vars.len();
            let mut out = Vec::new();
            for mask in 1u64..(1 << n) {
                let subset: Vec<String> = (0..n)
                    .filter(|&i| mask & (1 << i) != 0)
                    .map(|i| vars[i].clone())
                    .collect();
                if subset.len() < 2 {
                    continue;
                }
                if m.n_vanishing.iter().any(|v| !subset.contains(v)) {
                    continue;
                }
                out.push(BlowupCenter::new(subset));
            }
            out.sort_by_key(|c| (c.vars.len(), c.vars.clone()));
            out
        }
    }
}

/// Outcome of a depth-bounded equivalence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    EquivalentToDepth(u32),
    NotEquivalent { witness: String },
}

/// Depth-bounded test-sequence equivalence: the two marked ideals must live
/// on the same chart with the same N and E, and admit exactly the same
/// admissible centres at every node of the test tree explored to the given
/// depth. The verdict is only ever "equivalent to this depth".
pub fn equivalence_check(
    a: &MarkedIdeal,
    b: &MarkedIdeal,
    depth: u32,
    policy: &CandidatePolicy,
) -> Result<Equivalence> {
    if a.chart != b.chart {
        return Err(Error::MismatchedAmbient("charts differ".into()));
    }
    if a.n_vanishing != b.n_vanishing {
        return Err(Error::MismatchedAmbient("subvarieties N differ".into()));
    }
    if a.divisors != b.divisors {
        return Err(Error::MismatchedAmbient("divisor lists differ".into()));
    }
    match check_node(a, b, depth, policy, "root")? {
        Some(witness) => Ok(Equivalence::NotEquivalent { witness }),
        None => Ok(Equivalence::EquivalentToDepth(depth)),
    }
}

/// Returns a witness description when the trees differ, None otherwise.
fn check_node(
    a: &MarkedIdeal,
    b: &MarkedIdeal,
    depth: u32,
    policy: &CandidatePolicy,
    path: &str,
) -> Result<Option<String>> {
    let candidates = candidate_centers(a, policy);
    let mut admissible = Vec::new();
    for c in &candidates {
        let ok_a = is_admissible(a, c)?;
        let ok_b = is_admissible(b, c)?;
        if ok_a != ok_b {
            return Ok(Some(format!(
                "at {}: centre {} admissible for one side only",
                path,
                c.label()
            )));
        }
        if ok_a {
            admissible.push(c.clone());
        }
    }
    if depth == 0 {
        return Ok(None);
    }
    for c in &admissible {
        let ca = controlled_transform(a, c, false)?;
        let cb = controlled_transform(b, c, false)?;
        for (ta, tb) in ca.iter().zip(cb.iter()) {
            match (&ta.marked, &tb.marked) {
                (Some(ma), Some(mb)) => {
                    let sub = format!("{} > blowup {} chart {}", path, c.label(), ta.exceptional_var);
                    if let Some(w) = check_node(ma, mb, depth - 1, policy, &sub)? {
                        return Ok(Some(w));
                    }
                }
                (None, None) => {}
                _ => {
                    return Ok(Some(format!(
                        "at {} > blowup {} chart {}: N survives on one side only",
                        path,
                        c.label(),
                        ta.exceptional_var
                    )))
                }
            }
        }
    }
    {
        let pa = product_with_line(a)?;
        let pb = product_with_line(b)?;
        let sub = format!("{} > product with line", path);
        if let Some(w) = check_node(&pa, &pb, depth - 1, policy, &sub)? {
            return Ok(Some(w));
        }
    }
    for i in 0..a.divisors.len() {
        for j in (i + 1)..a.divisors.len() {
            let ea = exceptional_blowup(a, i, j)?;
            let eb = exceptional_blowup(b, i, j)?;
            for (ta, tb) in ea.iter().zip(eb.iter()) {
                let (Some(ma), Some(mb)) = (&ta.marked, &tb.marked) else {
                    continue;
                };
                let sub = format!(
                    "{} > divisor blowup ({},{}) chart {}",
                    path, i, j, ta.exceptional_var
                );
                if let Some(w) = check_node(ma, mb, depth - 1, policy, &sub)? {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
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

    fn origin_center() -> BlowupCenter {
        BlowupCenter::new(vec!["x".into(), "y".into()])
    }

    #[test]
    fn cusp_blowup_both_charts() {
        let m = marked(&["y^2 - x^3"], &["x", "y"], 2);
        let charts = controlled_transform(&m, &origin_center(), false).unwrap();
        assert_eq!(charts.len(), 2);
        let cx = charts[0].marked.as_ref().unwrap();
        assert_eq!(charts[0].exceptional_var, "x");
        let expect = parse_polynomial("y^2 - x", &cx.chart.vars, &cx.chart.field).unwrap();
        assert!(cx.ideal.gens()[0].equals(&expect));
        assert_eq!(cx.divisors.len(), 1);
        assert_eq!(cx.divisors[0].var, "x");
        assert_eq!(cx.divisors[0].origin, DivisorOrigin::Exceptional(0));
        let cy = charts[1].marked.as_ref().unwrap();
        assert_eq!(charts[1].exceptional_var, "y");
        let expect = parse_polynomial("1 - x^3*y", &cy.chart.vars, &cy.chart.field).unwrap();
        assert!(cy.ideal.gens()[0].equals(&expect));
        // the y-chart transform is a unit at the origin: the singular point
        // of the cusp is resolved there
        let f = &cy.chart.field;
        assert_eq!(cy.order_at(&[f.zero(), f.zero()]).unwrap(), Some(0));
    }

    #[test]
    fn inadmissible_center_rejected() {
        // (x, 2) has empty cosupport, so no centre is admissible
        let m = marked(&["x"], &["x", "y"], 2);
        assert!(matches!(
            controlled_transform(&m, &origin_center(), false),
            Err(Error::NotAdmissible(_))
        ));
        // codimension-one centres are rejected by default
        let m = marked(&["x^2"], &["x", "y"], 1);
        let c = BlowupCenter::new(vec!["x".into()]);
        assert!(matches!(
            controlled_transform(&m, &c, false),
            Err(Error::DegenerateCenter)
        ));
    }

    #[test]
    fn divisorial_blowup_when_allowed() {
        let m = marked(&["x^2"], &["x", "y"], 1);
        let c = BlowupCenter::new(vec!["x".into()]);
        let charts = controlled_transform(&m, &c, true).unwrap();
        assert_eq!(charts.len(), 1);
        let t = charts[0].marked.as_ref().unwrap();
        let expect = parse_polynomial("x", &t.chart.vars, &t.chart.field).unwrap();
        assert!(t.ideal.gens()[0].equals(&expect));
        assert_eq!(t.divisors.len(), 1);
    }

    #[test]
    fn product_with_line_appends_horizontal_divisor() {
        let m = marked(&["y^2 - x^3"], &["x", "y"], 2);
        let p = product_with_line(&m).unwrap();
        assert_eq!(p.chart.vars, vec!["x", "y", "w"]);
        let last = p.divisors.last().unwrap();
        assert_eq!(last.var, "w");
        assert_eq!(last.origin, DivisorOrigin::Horizontal(0));
        assert_eq!(p.d, 2);
    }

    #[test]
    fn exceptional_blowup_is_pure_pullback() {
        let f = GroundField::rationals();
        let vs: Vec<String> = vec!["x".into(), "y".into()];
        let g = parse_polynomial("x*y", &vs, &f).unwrap();
        let i = Ideal::new(f.clone(), vs.clone(), vec![g]).unwrap();
        let divisors = vec![
            Divisor { var: "x".into(), origin: DivisorOrigin::Exceptional(0) },
            Divisor { var: "y".into(), origin: DivisorOrigin::Exceptional(1) },
        ];
        let m = MarkedIdeal::new(Chart::new(f, vs), vec![], divisors, i, 1).unwrap();
        let charts = exceptional_blowup(&m, 0, 1).unwrap();
        let cx = charts[0].marked.as_ref().unwrap();
        // no division: x * (x y) = x^2 y
        let expect = parse_polynomial("x^2*y", &cx.chart.vars, &cx.chart.field).unwrap();
        assert!(cx.ideal.gens()[0].equals(&expect));
        assert_eq!(cx.divisors.len(), 2);
        assert_eq!(cx.divisors[0].var, "y");
        assert_eq!(cx.divisors[1].var, "x");
        assert_eq!(cx.divisors[1].origin, DivisorOrigin::Exceptional(2));
        assert!(matches!(exceptional_blowup(&m, 0, 0), Err(Error::IndexError(_))));
    }

    #[test]
    fn equivalence_of_identical_and_scaled() {
        let a = marked(&["x"], &["x", "y"], 1);
        let b = marked(&["2*x"], &["x", "y"], 1);
        let v = equivalence_check(&a, &b, 2, &CandidatePolicy::AllSubspaces).unwrap();
        assert_eq!(v, Equivalence::EquivalentToDepth(2));
    }

    #[test]
    fn inequivalence_detected_one_level_down() {
        let a = marked(&["x"], &["x", "y"], 1);
        let b = marked(&["y"], &["x", "y"], 1);
        // same admissible set at the root, different after blowing up (x,y)
        let v = equivalence_check(&a, &b, 0, &CandidatePolicy::AllSubspaces).unwrap();
        assert_eq!(v, Equivalence::EquivalentToDepth(0));
        let v = equivalence_check(&a, &b, 1, &CandidatePolicy::AllSubspaces).unwrap();
        assert!(matches!(v, Equivalence::NotEquivalent { .. }));
    }

    #[test]
    fn mismatched_ambient_is_an_error() {
        let a = marked(&["x"], &["x", "y"], 1);
        let b = marked(&["x"], &["x", "z"], 1);
        assert!(matches!(
            equivalence_check(&a, &b, 1, &CandidatePolicy::AllSubspaces),
            Err(Error::MismatchedAmbient(_))
        ));
    }
}
