//! Acceptance suite: each test prints one `criterion NN ...: pass` line
//! (visible with `--nocapture`) and fails loudly otherwise. The Hilbert
//! function oracle here is an independent dense-linear-algebra computation,
//! not the staircase pivoting the library uses.

use desingular::derive::coefficient_ideal;
use desingular::descent::{descend, factorization_record, order_invariance_report};
use desingular::diagram::{
    diagram_of_ideal, h_of_diagram, hilbert_samuel_at_point, iterated_partial_sums,
    product_h_identity_check,
};
use desingular::parse::parse_polynomial;
use desingular::resolve::{
    bennett_check, check_pullback_generic_fibre, check_pullback_product_line,
    resolve_maximal_order, ResolutionStep, ResolveOptions,
};
use desingular::transform::{
    candidate_centers, controlled_transform, exceptional_blowup, is_admissible,
    product_with_line,
};
use desingular::{
    BlowupCenter, CandidatePolicy, Chart, Equivalence, FieldElem, GroundField, Ideal,
    MarkedIdeal, Monomial, Polynomial,
};

fn q() -> GroundField {
    GroundField::rationals()
}

fn qt() -> GroundField {
    GroundField::fraction(vec!["t".into()], vec![], false).unwrap()
}

fn qs() -> GroundField {
    let prime = parse_polynomial("s^2 - 2", &["s".into()], &q()).unwrap();
    GroundField::fraction(vec!["s".into()], vec![prime], false).unwrap()
}

fn mk_ideal(field: &GroundField, vars: &[&str], gens: &[&str]) -> Ideal {
    let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    let gens: Vec<Polynomial> = gens
        .iter()
        .map(|g| parse_polynomial(g, &vars, field).unwrap())
        .collect();
    Ideal::new(field.clone(), vars, gens).unwrap()
}

fn mk_marked(field: &GroundField, vars: &[&str], gens: &[&str], d: u32) -> MarkedIdeal {
    let ideal = mk_ideal(field, vars, gens);
    let chart = Chart::new(field.clone(), ideal.vars().to_vec());
    MarkedIdeal::new(chart, vec![], vec![], ideal, d).unwrap()
}

fn origin(field: &GroundField, n: usize) -> Vec<FieldElem> {
    (0..n).map(|_| field.zero()).collect()
}

/// Rank of a matrix over the ground field by straightforward Gaussian
/// elimination.
fn rank(field: &GroundField, mut rows: Vec<Vec<FieldElem>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut col = 0;
    while col < ncols && rank < rows.len() {
        if let Some(p) = (rank..rows.len()).find(|&i| !field.is_zero(&rows[i][col])) {
            rows.swap(rank, p);
            let inv = field.inv(&rows[rank][col]).unwrap();
            for c in col..ncols {
                rows[rank][c] = field.mul(&rows[rank][c], &inv);
            }
            for i in rank + 1..rows.len() {
                if !field.is_zero(&rows[i][col]) {
                    let f = rows[i][col].clone();
                    for c in col..ncols {
                        let t = field.mul(&rows[rank][c], &f);
                        rows[i][c] = field.sub(&rows[i][c], &t);
                    }
                }
            }
            rank += 1;
        }
        col += 1;
    }
    rank
}

/// dim_k R_{<=k} / pi_{<=k}(I), computed from the truncations of all products
/// m*g whose low-degree part survives the cut.
fn h_oracle(ideal: &Ideal, k: u32) -> u64 {
    let n = ideal.vars().len();
    let field = ideal.field();
    let cols = Monomial::all_up_to_degree(n, k);
    let col_index: std::collections::HashMap<&Monomial, usize> =
        cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    for g in ideal.gens() {
        let Some(min) = g.min_degree() else { continue };
        if min > k {
            continue;
        }
        for m in Monomial::all_up_to_degree(n, k - min) {
            let prod = g.mul_term(&m, &field.one());
            let mut row = vec![field.zero(); cols.len()];
            let mut nonzero = false;
            for (mono, c) in prod.terms() {
                if mono.degree() <= k {
                    row[col_index[mono]] = c.clone();
                    nonzero = true;
                }
            }
            if nonzero {
                rows.push(row);
            }
        }
    }
    cols.len() as u64 - rank(field, rows) as u64
}

fn corpus_ideals() -> Vec<Ideal> {
    let q = q();
    let qt = qt();
    let qs = qs();
    let mut out = Vec::new();
    let q2: &[&[&str]] = &[
        &["y^2 - x^3"],
        &["x"],
        &["x^2"],
        &["x*y"],
        &["x + y"],
        &["x^2 + y^2"],
        &["x^2 - y^2"],
        &["x^3 - y^4"],
        &["y^2 - x^2 - x^3"],
        &["x^2*y"],
        &["x^2", "y^3"],
        &["x^2", "x*y", "y^2"],
        &["y^2 - x^5"],
        &["y^3 - x^5"],
        &["x^4 + y^4"],
        &["x*y - x^3"],
        &["y^2 - x^4 + x^5"],
        &["x^3 + y^3"],
    ];
    for gens in q2 {
        out.push(mk_ideal(&q, &["x", "y"], gens));
    }
    let q3: &[&[&str]] = &[
        &["z^2 - x*y"],
        &["z^2 - x*y^2"],
        &["x^2 + y^2 + z^2"],
        &["x*y", "y*z", "x*z"],
        &["z^3 - x*y"],
        &["x + y + z"],
        &["x^2", "y^2", "z^2"],
        &["z^2 - x^2 - y^2"],
    ];
    for gens in q3 {
        out.push(mk_ideal(&q, &["x", "y", "z"], gens));
    }
    for gens in [
        ["y^2 - t*x^3"],
        ["y^2 - t*x^2"],
        ["x^2 + t*y^2"],
        ["t*x + y^2"],
    ] {
        out.push(mk_ideal(&qt, &["x", "y"], &gens));
    }
    out.push(mk_ideal(&qt, &["x", "y", "z"], &["z^2 - t*x*y"]));
    for gens in [
        ["y^2 - s*x^3"],
        ["x^2 - s*y^2"],
        ["s*x^2 + y^3"],
        ["y^2 + s*x*y + x^3"],
    ] {
        out.push(mk_ideal(&qs, &["x", "y"], &gens));
    }
    out
}

#[test]
fn criterion_01_diagram_h_matches_rank_oracle() {
    let ideals = corpus_ideals();
    assert!(ideals.len() >= 30, "need at least 30 corpus ideals");
    for ideal in &ideals {
        let diagram = diagram_of_ideal(ideal, 8).unwrap();
        for k in 0..=8 {
            let from_diagram = h_of_diagram(&diagram, k);
            let from_rank = h_oracle(ideal, k);
            assert_eq!(
                from_diagram, from_rank,
                "H mismatch at k={} for gens {:?}",
                k,
                ideal.gens().iter().map(|g| format!("{:?}", g)).collect::<Vec<_>>()
            );
        }
    }
    println!("criterion 01 diagram H vs rank oracle on {} ideals: pass", ideals.len());
}

#[test]
fn criterion_02_product_h_is_lambda_of_base() {
    for ideal in corpus_ideals() {
        let diagram = diagram_of_ideal(&ideal, 12).unwrap();
        let base: Vec<u64> = (0..=10).map(|k| h_of_diagram(&diagram, k)).collect();
        for p in 1..=2usize {
            assert!(product_h_identity_check(&diagram, p, 10));
            let lifted = diagram.product_with_free_space(p);
            let expected = iterated_partial_sums(&base, p as u32);
            for k in 0..=10u32 {
                assert_eq!(
                    h_of_diagram(&lifted, k),
                    expected[k as usize],
                    "Lambda^{} mismatch at k={}",
                    p,
                    k
                );
            }
        }
    }
    println!("criterion 02 product H = Lambda^p(H) for p in {{1,2}}: pass");
}

/// Every branch of the depth-bounded test-sequence tree: blow-ups at all
/// admissible coordinate centres, products with a line, and blow-ups of
/// exceptional intersections. All controlled transforms must divide exactly.
fn walk_test_sequences(m: &MarkedIdeal, depth: u32) -> usize {
    if depth == 0 {
        return 0;
    }
    let mut visited = 0;
    for c in candidate_centers(m, &CandidatePolicy::AllSubspaces) {
        if !is_admissible(m, &c).unwrap() {
            continue;
        }
        let charts = controlled_transform(m, &c, false).unwrap();
        visited += 1;
        for ch in charts {
            if let Some(mm) = ch.marked {
                visited += walk_test_sequences(&mm, depth - 1);
            }
        }
    }
    let lined = product_with_line(m).unwrap();
    visited += 1 + walk_test_sequences(&lined, depth - 1);
    let ne = m.exceptional_count();
    for i in 0..ne {
        for j in i + 1..ne {
            let charts = exceptional_blowup(m, i, j).unwrap();
            visited += 1;
            for ch in charts {
                if let Some(mm) = ch.marked {
                    visited += walk_test_sequences(&mm, depth - 1);
                }
            }
        }
    }
    visited
}

#[test]
fn criterion_03_controlled_transforms_divide_exactly() {
    let q = q();
    let entries = [
        mk_marked(&q, &["x", "y"], &["y^2 - x^3"], 2),
        mk_marked(&q, &["x", "y"], &["x^2 + y^5"], 2),
        mk_marked(&q, &["x", "y"], &["x*y"], 2),
        mk_marked(&q, &["x", "y", "z"], &["z^2 - x*y^2"], 2),
    ];
    let mut total = 0;
    for m in &entries {
        total += walk_test_sequences(m, 2);
    }
    println!(
        "criterion 03 exact division along {} depth-2 test transforms: pass",
        total
    );
}

#[test]
fn criterion_04_coefficient_ideal_equivalent_to_input() {
    let q = q();
    let entries = [
        mk_marked(&q, &["x", "y"], &["y^2 - x^3"], 2),
        mk_marked(&q, &["x", "y"], &["x^2 + y^5"], 2),
        mk_marked(&q, &["x", "y"], &["x*y"], 2),
    ];
    for m in &entries {
        assert!(m.is_maximal_order().unwrap());
        let coeff = coefficient_ideal(m).unwrap();
        let verdict = equivalence_check(m, &coeff, 2, &CandidatePolicy::AllSubspaces).unwrap();
        match verdict {
            Equivalence::EquivalentToDepth(d) => assert_eq!(d, 2),
            Equivalence::NotEquivalent { witness } => {
                panic!("coefficient ideal not equivalent: {}", witness)
            }
        }
    }
    println!("criterion 04 equivalence with coefficient ideal to depth 2: pass");
}

use desingular::transform::equivalence_check;

fn descent_entries() -> Vec<MarkedIdeal> {
    let qt = qt();
    let qs = qs();
    vec![
        mk_marked(&qt, &["x", "y"], &["y^2 - t*x^3"], 2),
        mk_marked(&qt, &["x", "y"], &["y^2 - t*x^2"], 2),
        mk_marked(&qt, &["x", "y"], &["x^2 + t*y^2"], 2),
        mk_marked(&qs, &["x", "y"], &["y^2 - s*x^3"], 2),
        mk_marked(&qs, &["x", "y"], &["x^3 + s*x*y + y^3"], 2),
        mk_marked(&qt, &["x", "y", "z"], &["z^2 - t*x*y^2"], 2),
    ]
}

#[test]
fn criterion_05_order_invariance_under_descent() {
    let entries = descent_entries();
    assert!(entries.len() >= 5);
    for m in &entries {
        let model = descend(m).unwrap();
        let report = order_invariance_report(&model, 12).unwrap();
        assert!(
            report.agree,
            "order mismatch: fibre {:?} vs upstairs {:?}",
            report.fibre_order, report.upstairs_order
        );
    }
    println!(
        "criterion 05 order invariance on {} descent examples: pass",
        entries.len()
    );
}

#[test]
fn criterion_06_descent_round_trip_is_exact() {
    for m in &descent_entries() {
        let model = descend(m).unwrap();
        let record = factorization_record(&model, m).unwrap();
        assert!(record.relations_vanish);
        assert!(record.round_trip);
    }
    println!("criterion 06 exact descent round trip on all entries: pass");
}

#[test]
fn criterion_07_model_h_is_lambda_of_fibre_h() {
    let qt = qt();
    let entries = [
        mk_marked(&qt, &["x", "y"], &["y^2 - t*x^3"], 2),
        mk_marked(&qt, &["x", "y", "z"], &["z^2 - t*x*y^2"], 2),
    ];
    for m in &entries {
        let model = descend(m).unwrap();
        let p = model.symbols.len() as u32;
        let z = model.z_ideal().unwrap();
        let h_total = hilbert_samuel_at_point(&z, &origin(z.field(), z.vars().len()), 8)
            .unwrap()
            .prefix(8)
            .unwrap();
        let fibre = model.generic_fibre().unwrap();
        let h_fibre = hilbert_samuel_at_point(
            &fibre.ideal,
            &origin(fibre.ideal.field(), fibre.ideal.vars().len()),
            8,
        )
        .unwrap()
        .prefix(8)
        .unwrap();
        assert_eq!(h_total, iterated_partial_sums(&h_fibre, p));
    }
    println!("criterion 07 model-point H = Lambda^p(fibre-point H): pass");
}

/// Re-run the trace from scratch: at every node re-check admissibility and
/// re-apply the transform, independently of the driver's bookkeeping.
fn replay<'a>(
    m: &MarkedIdeal,
    path: &[String],
    steps: &mut std::slice::Iter<'a, ResolutionStep>,
) {
    let co = m.cosupport_ideal().unwrap();
    if co.is_unit_ideal().unwrap() {
        return;
    }
    let step = steps.next().expect("trace ended while cosupport nonempty");
    assert_eq!(step.path, path, "replay path diverged");
    assert!(is_admissible(m, &step.center).unwrap(), "recorded centre not admissible");
    let charts = controlled_transform(m, &step.center, false).unwrap();
    for ch in charts {
        if let Some(mm) = ch.marked {
            let mut p = path.to_vec();
            p.push(ch.exceptional_var);
            replay(&mm, &p, steps);
        }
    }
}

#[test]
fn criterion_08_odd_power_family_resolves_in_k_steps() {
    let q = q();
    for k in 1..=4u32 {
        let gen = format!("x^2 + y^{}", 2 * k + 1);
        let m = mk_marked(&q, &["x", "y"], &[&gen], 2);
        let trace = resolve_maximal_order(&m, &ResolveOptions::default()).unwrap();
        assert!(trace.resolved);
        assert_eq!(trace.steps.len(), k as usize, "wrong step count for k={}", k);
        let mut it = trace.steps.iter();
        replay(&m, &[], &mut it);
        assert!(it.next().is_none(), "trace had unused steps");
    }
    println!("criterion 08 (x^2 + y^(2k+1), 2) resolves in exactly k steps, replay-verified: pass");
}

#[test]
fn criterion_09_pullback_center_correspondence() {
    let q = q();
    let opts = ResolveOptions::default();
    for gens in [["y^2 - x^3"], ["x^2 + y^5"]] {
        let m = mk_marked(&q, &["x", "y"], &gens, 2);
        for k in 1..=2 {
            let rep = check_pullback_product_line(&m, k, 8, &opts).unwrap();
            assert!(rep.centers_match, "product-line centres diverged, k={}", k);
            assert!(rep.hs_identity, "product-line H identity failed, k={}", k);
        }
    }
    let cusp_qt = mk_marked(&qt(), &["x", "y"], &["y^2 - t*x^3"], 2);
    let model = descend(&cusp_qt).unwrap();
    let rep = check_pullback_generic_fibre(&model, &opts).unwrap();
    assert!(rep.centers_match, "generic-fibre centres diverged");
    assert!(
        rep.skipped_steps >= 1,
        "expected at least one non-dominating centre to be skipped"
    );
    println!("criterion 09 centre correspondence under both pullbacks: pass");
}

#[test]
fn criterion_10_bennett_no_h_increase() {
    let q = q();
    let cases: Vec<(Ideal, Vec<&str>)> = vec![
        (mk_ideal(&q, &["x", "y"], &["y^2 - x^3"]), vec!["x", "y"]),
        (mk_ideal(&q, &["x", "y", "z"], &["z^2 - x*y^2"]), vec!["y", "z"]),
        (mk_ideal(&q, &["x", "y"], &["x*y"]), vec!["x", "y"]),
        (mk_ideal(&q, &["x", "y"], &["x^2 + y^2"]), vec!["x", "y"]),
        (mk_ideal(&q, &["x", "y"], &["y^3 - x^5"]), vec!["x", "y"]),
        (mk_ideal(&q, &["x", "y", "z"], &["z^2 - x*y"]), vec!["x", "y", "z"]),
    ];
    assert!(cases.len() >= 5);
    for (ideal, center) in &cases {
        let c = BlowupCenter::new(center.iter().map(|s| s.to_string()).collect());
        let report = bennett_check(ideal, &c, 8).unwrap();
        assert!(report.ok, "lex H increase over centre {:?}", center);
        for chart in &report.charts {
            assert!(chart.no_increase);
        }
    }
    println!(
        "criterion 10 no lex H increase after blow-up on {} examples: pass",
        cases.len()
    );
}
