//! Diagrams of initial exponents, the counting function H_N, the Lambda
//! (partial-sum) operator, and Hilbert-Samuel functions at points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElem, GroundField};
use crate::ideal::{minimal_monomials, truncation_basis, Ideal};
use crate::monomial::Monomial;
use crate::poly::Polynomial;

/// Hard cap on truncation levels, mirroring the Groebner degree cap.
pub const DEFAULT_LEVEL_CAP: u32 = 24;

/// A monomial staircase N = vertices + N^n, stored by its vertex antichain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub n: usize,
    /// Finite antichain under divisibility, sorted deglex ascending.
    pub vertices: Vec<Monomial>,
    /// The vertex set is provably complete up to this truncation level.
    pub certified_bound: u32,
    /// Heuristic: no new vertex for two consecutive levels below the bound.
    pub stable: bool,
}

impl Diagram {
    pub fn new(n: usize, vertices: Vec<Monomial>, certified_bound: u32, stable: bool) -> Self {
        let mut vertices = minimal_monomials(vertices);
        vertices.sort();
        Diagram { n, vertices, certified_bound, stable }
    }

    pub fn empty(n: usize) -> Self {
        Diagram { n, vertices: vec![], certified_bound: u32::MAX, stable: true }
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.vertices.iter().any(|v| v.divides(m))
    }

    pub fn max_vertex_degree(&self) -> u32 {
        self.vertices.iter().map(|v| v.degree()).max().unwrap_or(0)
    }

    /// N^p x self, with p new coordinates prepended as free directions.
    pub fn product_with_free_space(&self, p: usize) -> Diagram {
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                let mut e = vec![0u32; p];
                e.extend_from_slice(&v.0);
                Monomial(e)
            })
            .collect();
        Diagram {
            n: self.n + p,
            vertices,
            certified_bound: self.certified_bound,
            stable: self.stable,
        }
    }

    /// The lexicographic order on staircases: compare the sorted vertex
    /// sequences; a strict prefix counts as smaller.
    pub fn lex_cmp(&self, other: &Diagram) -> std::cmp::Ordering {
        self.vertices.cmp(&other.vertices)
    }
}

/// H_N(k) = #{ alpha in N^n \ N : |alpha| <= k }.
pub fn h_of_diagram(diagram: &Diagram, k: u32) -> u64 {
    let mut count = 0u64;
    for m in Monomial::all_up_to_degree(diagram.n, k) {
        if !diagram.contains(&m) {
            count += 1;
        }
    }
    count
}

/// A Hilbert-Samuel function: either Lambda^shift of a diagram count, or an
/// explicit finite prefix of values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HsFunction {
    DiagramBacked { diagram: Diagram, shift: u32 },
    Prefix { values: Vec<u64> },
}

impl HsFunction {
    pub fn from_diagram(diagram: Diagram) -> Self {
        HsFunction::DiagramBacked { diagram, shift: 0 }
    }

    pub fn from_values(values: Vec<u64>) -> Self {
        HsFunction::Prefix { values }
    }

    /// Evaluate H(0..=k) as a prefix vector.
    pub fn prefix(&self, k: u32) -> Result<Vec<u64>> {
        match self {
            HsFunction::DiagramBacked { diagram, shift } => {
                let base: Vec<u64> = (0..=k).map(|j| h_of_diagram(diagram, j)).collect();
                Ok(iterated_partial_sums(&base, *shift))
            }
            HsFunction::Prefix { values } => {
                if (k as usize) < values.len() {
                    Ok(values[..=(k as usize)].to_vec())
                } else {
                    Err(Error::Capacity(format!(
                        "prefix of length {} cannot be evaluated at {}",
                        values.len(),
                        k
                    )))
                }
            }
        }
    }

    pub fn value(&self, k: u32) -> Result<u64> {
        Ok(*self.prefix(k)?.last().unwrap())
    }

    /// Lambda^j: representation-level shift for diagram-backed functions,
    /// prefix partial sums otherwise.
    pub fn lambda(&self, j: u32) -> HsFunction {
        match self {
            HsFunction::DiagramBacked { diagram, shift } => HsFunction::DiagramBacked {
                diagram: diagram.clone(),
                shift: shift + j,
            },
            HsFunction::Prefix { values } => HsFunction::Prefix {
                values: iterated_partial_sums(values, j),
            },
        }
    }

    /// Bound used for truncated lexicographic comparison:
    /// n + 2 * (max vertex degree across both operands) + shift.
    pub fn comparison_bound(&self, other: &HsFunction) -> u32 {
        let part = |h: &HsFunction| -> (u32, u32, u32) {
            match h {
                HsFunction::DiagramBacked { diagram, shift } => {
                    (diagram.n as u32, diagram.max_vertex_degree(), *shift)
                }
                HsFunction::Prefix { values } => (0, values.len().saturating_sub(1) as u32, 0),
            }
        };
        let (n1, d1, s1) = part(self);
        let (n2, d2, s2) = part(other);
        n1.max(n2) + 2 * d1.max(d2) + s1.max(s2)
    }

    /// Truncated lexicographic comparison of value sequences. The bound is
    /// pragmatic, not a theorem; callers should report it.
    pub fn lex_cmp_bounded(
        &self,
        other: &HsFunction,
        bound: Option<u32>,
    ) -> Result<std::cmp::Ordering> {
        let b = bound.unwrap_or_else(|| self.comparison_bound(other));
        let a = self.prefix(b)?;
        let c = other.prefix(b)?;
        Ok(a.cmp(&c))
    }
}

pub fn iterated_partial_sums(values: &[u64], times: u32) -> Vec<u64> {
    let mut v = values.to_vec();
    for _ in 0..times {
        let mut acc = 0u64;
        for x in v.iter_mut() {
            acc += *x;
            *x = acc;
        }
    }
    v
}

/// Vertices of the diagram of initial exponents of I * K[[X]], up to k_max.
pub fn diagram_of_ideal(ideal: &Ideal, k_max: u32) -> Result<Diagram> {
    if k_max > DEFAULT_LEVEL_CAP {
        return Err(Error::Capacity(format!(
            "truncation level {} exceeds cap {}",
            k_max, DEFAULT_LEVEL_CAP
        )));
    }
    let max_gen_degree = ideal
        .gens()
        .iter()
        .filter_map(|g| g.degree())
        .max()
        .unwrap_or(0);
    if k_max < max_gen_degree {
        return Err(Error::Invalid(format!(
            "k_max {} is below the maximum generator degree {}",
            k_max, max_gen_degree
        )));
    }
    let pivots = truncation_basis(ideal, k_max)?;
    let vertices = minimal_monomials(pivots);
    let maxdeg = vertices.iter().map(|v| v.degree()).max().unwrap_or(0);
    let stable = k_max >= 2 && maxdeg <= k_max.saturating_sub(2);
    Ok(Diagram::new(ideal.vars().len(), vertices, k_max, stable))
}

/// The §-style identity H_{N^p x N*} = Lambda^p (H_{N*}), verified up to
/// k_max by direct evaluation of both sides.
pub fn product_h_identity_check(base: &Diagram, p: usize, k_max: u32) -> bool {
    let product = base.product_with_free_space(p);
    let lhs: Vec<u64> = (0..=k_max).map(|k| h_of_diagram(&product, k)).collect();
    let rhs_base: Vec<u64> = (0..=k_max).map(|k| h_of_diagram(base, k)).collect();
    let rhs = iterated_partial_sums(&rhs_base, p as u32);
    lhs == rhs
}

/// H^(0) at a rational point of V(I): translate the point to the origin and
/// count under the diagram of the translated ideal.
pub fn hilbert_samuel_at_point(
    ideal: &Ideal,
    point: &[FieldElem],
    k_max: u32,
) -> Result<HsFunction> {
    if point.len() != ideal.vars().len() {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, ambient has {} variables",
            point.len(),
            ideal.vars().len()
        )));
    }
    let field = ideal.field();
    for g in ideal.gens() {
        if !field.is_zero(&g.eval(point)) {
            return Err(Error::PointNotOnVariety);
        }
    }
    let translated: Vec<Polynomial> = ideal.gens().iter().map(|g| g.translate(point)).collect();
    let ideal0 = Ideal::new(field.clone(), ideal.vars().to_vec(), translated)?;
    let diagram = diagram_of_ideal(&ideal0, effective_level(&ideal0, k_max))?;
    Ok(HsFunction::from_diagram(diagram))
}

fn effective_level(ideal: &Ideal, k_max: u32) -> u32 {
    let gd = ideal
        .gens()
        .iter()
        .filter_map(|g| g.degree())
        .max()
        .unwrap_or(0);
    k_max.max(gd)
}

/// A supported non-closed point: the generic point of a coordinate subspace,
/// or the generic point of the (irreducible) variety itself.
#[derive(Clone, Debug)]
pub enum SupportedPrime {
    /// Prime generated by a subset of the ambient variables.
    CoordinateSubspace { vanishing: Vec<String> },
    /// The generic point of V(I) itself, for I prime (asserted by caller for
    /// the supported presentations: principal irreducible, or linear).
    GenericPointOfVariety,
}

/// Hilbert-Samuel function at a supported non-closed point: localize by
/// moving the free coordinates into the ground field, compute H^(0) of the
/// localized ring at the origin, then shift by the dimension of the closure.
pub fn hs_at_nonclosed_point(
    ideal: &Ideal,
    prime: &SupportedPrime,
    k_max: u32,
) -> Result<HsFunction> {
    match prime {
        SupportedPrime::GenericPointOfVariety => {
            // localization at the generic point of an irreducible variety is
            // a field: H^(0) is constantly 1, shifted by dim of the closure
            let n = ideal.vars().len();
            if ideal.is_zero_ideal() {
                let h0 = HsFunction::from_diagram(Diagram::empty(0));
                return Ok(h0.lambda(n as u32));
            }
            let l = variety_dimension(ideal)?;
            let h0 = HsFunction::from_diagram(Diagram::empty(0));
            Ok(h0.lambda(l as u32))
        }
        SupportedPrime::CoordinateSubspace { vanishing } => {
            for v in vanishing {
                if !ideal.vars().contains(v) {
                    return Err(Error::UnknownSymbol(v.clone()));
                }
            }
            // check I is contained in the prime (the point lies on V(I))
            for g in ideal.gens() {
                let on_subspace = g
                    .terms()
                    .keys()
                    .all(|m| vanishing.iter().any(|v| m.0[ideal.vars().iter().position(|w| w == v).unwrap()] > 0));
                if !on_subspace {
                    return Err(Error::UnsupportedPrime(format!(
                        "ideal not contained in the coordinate prime ({})",
                        vanishing.join(",")
                    )));
                }
            }
            let localized = localize_at_coordinate_subspace(ideal, vanishing)?;
            let l = (ideal.vars().len() - vanishing.len()) as u32;
            let diagram = diagram_of_ideal(&localized, effective_level(&localized, k_max))?;
            Ok(HsFunction::from_diagram(diagram).lambda(l))
        }
    }
}

/// Move the non-vanishing coordinates into the ground field (the generic
/// fibre of the projection along the subspace), keeping the vanishing ones
/// as chart variables. Supported over Q only.
pub fn localize_at_coordinate_subspace(ideal: &Ideal, vanishing: &[String]) -> Result<Ideal> {
    let field = ideal.field();
    if !field.is_rationals() {
        return Err(Error::UnsupportedPrime(
            "localization at a coordinate subspace is supported over Q".into(),
        ));
    }
    let free: Vec<String> = ideal
        .vars()
        .iter()
        .filter(|v| !vanishing.contains(v))
        .cloned()
        .collect();
    let new_field = GroundField::fraction(free, vec![], false)?;
    crate::descent::vars_into_field(ideal, vanishing, &new_field)
}

/// Dimension of V(I) for the supported presentations: a principal ideal in
/// n variables has dimension n-1; the zero ideal has dimension n.
fn variety_dimension(ideal: &Ideal) -> Result<usize> {
    let n = ideal.vars().len();
    if ideal.is_zero_ideal() {
        return Ok(n);
    }
    let gb = ideal.groebner_basis()?;
    if gb.len() == 1 {
        return Ok(n - 1);
    }
    // linear generators: dimension is n minus the rank of the linear system
    if gb.iter().all(|g| g.degree() == Some(1)) {
        return Ok(n - gb.len());
    }
    Err(Error::UnsupportedPrime(
        "dimension computation supports principal or linear presentations".into(),
    ))
}

/// Minimal embedding dimension e = H(1) - 1.
pub fn min_embedding_dim(h: &HsFunction) -> Result<u64> {
    Ok(h.value(1)? - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat_int;
    use crate::parse::parse_polynomial;

    fn ideal(gens: &[&str], vars: &[&str]) -> Ideal {
        let f = GroundField::rationals();
        let vs: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let gs = gens
            .iter()
            .map(|g| parse_polynomial(g, &vs, &f).unwrap())
            .collect();
        Ideal::new(f, vs, gs).unwrap()
    }

    #[test]
    fn initial_exponent_examples() {
        let f = GroundField::rationals();
        let vs = vec!["x".to_string(), "y".to_string()];
        assert!(parse_polynomial("0", &vs, &f).unwrap().initial_exponent().is_none());
        let p = parse_polynomial("x*y + x^3", &vs, &f).unwrap();
        assert_eq!(p.initial_exponent().unwrap().0, vec![1, 1]);
        let q = parse_polynomial("y^2 - x^3", &vs, &f).unwrap();
        assert_eq!(q.initial_exponent().unwrap().0, vec![0, 2]);
    }

    #[test]
    fn diagram_examples() {
        let d = diagram_of_ideal(&ideal(&["x^2", "x*y"], &["x", "y"]), 4).unwrap();
        assert_eq!(
            d.vertices,
            vec![Monomial(vec![1, 1]), Monomial(vec![2, 0])]
        );
        assert!(d.stable);
        let d = diagram_of_ideal(&ideal(&["y^2 - x^3"], &["x", "y"]), 5).unwrap();
        assert_eq!(d.vertices, vec![Monomial(vec![0, 2])]);
        assert!(d.stable);
        let d = diagram_of_ideal(&ideal(&["1"], &["x", "y"]), 2).unwrap();
        assert_eq!(d.vertices, vec![Monomial(vec![0, 0])]);
    }

    #[test]
    fn h_of_diagram_examples() {
        let empty = Diagram::empty(1);
        assert_eq!(
            (0..5).map(|k| h_of_diagram(&empty, k)).collect::<Vec<_>>(),
            vec![1, 2, 3, 4, 5]
        );
        let d = Diagram::new(2, vec![Monomial(vec![0, 2])], 8, true);
        assert_eq!(
            (0..4).map(|k| h_of_diagram(&d, k)).collect::<Vec<_>>(),
            vec![1, 3, 5, 7]
        );
        let d = Diagram::new(2, vec![Monomial(vec![1, 1]), Monomial(vec![2, 0])], 8, true);
        assert_eq!(h_of_diagram(&d, 2), 4);
    }

    #[test]
    fn lambda_examples() {
        let h = HsFunction::from_values(vec![1, 1, 1, 1]);
        assert_eq!(h.lambda(1).prefix(3).unwrap(), vec![1, 2, 3, 4]);
        let d = Diagram::new(1, vec![Monomial(vec![2])], 8, true);
        let h = HsFunction::from_diagram(d);
        assert_eq!(h.prefix(3).unwrap(), vec![1, 2, 2, 2]);
        assert_eq!(h.lambda(1).prefix(3).unwrap(), vec![1, 3, 5, 7]);
        assert_eq!(h.lambda(0).prefix(3).unwrap(), h.prefix(3).unwrap());
    }

    #[test]
    fn product_identity_examples() {
        let base = Diagram::new(1, vec![Monomial(vec![2])], 8, true);
        assert!(product_h_identity_check(&base, 1, 6));
        let empty = Diagram::empty(1);
        assert!(product_h_identity_check(&empty, 2, 6));
    }

    #[test]
    fn hs_at_point_examples() {
        let f = GroundField::rationals();
        let i = ideal(&["y - x^2"], &["x", "y"]);
        let h = hilbert_samuel_at_point(&i, &[f.zero(), f.zero()], 6).unwrap();
        assert_eq!(h.prefix(4).unwrap(), vec![1, 2, 3, 4, 5]);
        let i = ideal(&["y^2 - x^3"], &["x", "y"]);
        let h = hilbert_samuel_at_point(&i, &[f.zero(), f.zero()], 6).unwrap();
        assert_eq!(h.prefix(3).unwrap(), vec![1, 3, 5, 7]);
        let i = ideal(&["x"], &["x", "y"]);
        let res = hilbert_samuel_at_point(&i, &[f.from_rat(rat_int(1)), f.zero()], 6);
        assert!(matches!(res, Err(Error::PointNotOnVariety)));
    }

    #[test]
    fn hs_at_nonclosed_point_examples() {
        // generic point of the cusp: localization is a field, l = 1
        let i = ideal(&["y^2 - x^3"], &["x", "y"]);
        let h = hs_at_nonclosed_point(&i, &SupportedPrime::GenericPointOfVariety, 6).unwrap();
        assert_eq!(h.prefix(3).unwrap(), vec![1, 2, 3, 4]);
        // X = V(xy) at the generic point of V(y): localize at Q(x)
        let i = ideal(&["x*y"], &["x", "y"]);
        let h = hs_at_nonclosed_point(
            &i,
            &SupportedPrime::CoordinateSubspace { vanishing: vec!["y".into()] },
            6,
        )
        .unwrap();
        assert_eq!(h.prefix(3).unwrap(), vec![1, 2, 3, 4]);
        // closed rational point recovers hilbert_samuel_at_point
        let f = GroundField::rationals();
        let i = ideal(&["y^2 - x^3"], &["x", "y"]);
        let closed = hilbert_samuel_at_point(&i, &[f.zero(), f.zero()], 6).unwrap();
        let noncl = hs_at_nonclosed_point(
            &i,
            &SupportedPrime::CoordinateSubspace {
                vanishing: vec!["x".into(), "y".into()],
            },
            6,
        )
        .unwrap();
        assert_eq!(closed.prefix(6).unwrap(), noncl.prefix(6).unwrap());
    }

    #[test]
    fn min_embedding_dim_examples() {
        assert_eq!(min_embedding_dim(&HsFunction::from_values(vec![1, 2, 3])).unwrap(), 1);
        assert_eq!(min_embedding_dim(&HsFunction::from_values(vec![1, 3, 5])).unwrap(), 2);
        assert_eq!(min_embedding_dim(&HsFunction::from_values(vec![1, 1, 1])).unwrap(), 0);
    }
}
