//! Worked examples for each operation, with the expected values in closed form.

mod common;

use std::f64::consts::PI;

use qgraph_core::conditions::{condition_rows, dual, kernel_basis_ast, kernel_dimension_combinatorial};
use qgraph_core::graph::builtin::builtin;
use qgraph_core::graph::{analyze, cut_vertex, cycle_basis, has_independent_cycles, tree_diameter, EdgeDecl};
use qgraph_core::oracle::{discrete_spectrum, finite_difference_spectrum, symmetric_eigenvalues, von_below_metric_spectrum, SymmetricMatrix};
use qgraph_core::secular::{apply_momentum, assemble, eigenfunctions, first_eigenvalues, residual, solve_zero_modes};
use qgraph_core::theorems::{
    assign_tree_phases, check_cycle_sign_condition, rational_cycle_counterexample, verify, TheoremId, Verdict,
    VerifyParams,
};
use qgraph_core::{dirichlet_spectrum, find_spectrum, ConditionKind, ConditionSpec, EdgeWave, Error, MetricGraph, SolverOptions, VertexId};

use common::rel_close;

const P2: f64 = PI * PI;

fn g(name: &str, params: &[f64]) -> MetricGraph {
    builtin(name, params).unwrap()
}

fn spectrum_pairs(graph: &MetricGraph, spec: &ConditionSpec, lambda_max: f64) -> Vec<(f64, usize)> {
    find_spectrum(graph, spec, lambda_max, &SolverOptions::default())
        .unwrap()
        .records
        .iter()
        .map(|r| (r.lambda, r.multiplicity))
        .collect()
}

fn assert_pairs(found: &[(f64, usize)], expected: &[(f64, usize)]) {
    assert_eq!(found.len(), expected.len(), "{found:?}");
    for (&(l, m), &(el, em)) in found.iter().zip(expected) {
        assert_eq!(m, em, "{found:?}");
        assert!((l - el).abs() <= 1e-8 * el + 1e-12, "{found:?}");
    }
}

// graph model

#[test]
fn build_single_interval() {
    let p = MetricGraph::build([EdgeDecl::new("e1", "u", "v", 1.0)]).unwrap();
    assert_eq!((p.vertex_count(), p.edge_count()), (2, 1));
}

#[test]
fn build_star_and_loop() {
    let star = MetricGraph::build((1..=3).map(|i| EdgeDecl::new(format!("e{i}"), "c", format!("x{i}"), 1.0))).unwrap();
    assert_eq!(star.degree(star.vertex_by_label("c").unwrap()), 3);
    let lp = MetricGraph::build([EdgeDecl::new("e1", "v", "v", 2.0)]).unwrap();
    assert_eq!(lp.vertex_count(), 1);
    assert_eq!(lp.degree(VertexId(0)), 2);
}

#[test]
fn build_errors() {
    let dup = MetricGraph::build([EdgeDecl::new("e", "a", "b", 1.0), EdgeDecl::new("e", "b", "c", 1.0)]);
    assert_eq!(dup, Err(Error::DuplicateEdge("e".into())));
    for bad in [0.0, -1.0, f64::INFINITY, f64::NAN] {
        assert!(matches!(
            MetricGraph::build([EdgeDecl::new("e", "a", "b", bad)]),
            Err(Error::InvalidLength { .. })
        ));
    }
    assert_eq!(MetricGraph::build(Vec::<EdgeDecl>::new()), Err(Error::EmptyGraph));
}

#[test]
fn analyze_triangle_lasso_tree() {
    let a = analyze(&g("cycle", &[1.0; 3]));
    assert!(!a.bipartite);
    assert_eq!(a.betti, 1);
    assert!(a.boundary.is_empty());

    let lasso = g("lasso", &[2.0, 1.0]);
    let a = analyze(&lasso);
    assert!(a.bipartite);
    assert_eq!(a.betti, 1);
    assert_eq!(a.boundary, vec![lasso.vertex_by_label("v1").unwrap()]);

    let tree = g("path", &[1.0, 2.0, 0.5]);
    let a = analyze(&tree);
    assert_eq!(a.betti, 0);
    assert_eq!(a.bridge_edges.len(), 3);
    assert_eq!(a.doubly_connected_length, 0.0);
}

#[test]
fn cycle_basis_small_cases() {
    assert!(cycle_basis(&g("star", &[4.0, 1.0])).unwrap().fundamental_cycles.is_empty());
    let lp = cycle_basis(&g("loop", &[1.0])).unwrap();
    assert_eq!(lp.fundamental_cycles.len(), 1);
    assert_eq!(lp.fundamental_cycles[0].len(), 1);
}

#[test]
fn independence_of_cycles() {
    assert!(has_independent_cycles(&g("flower", &[1.0, 2.0])));
    assert!(!has_independent_cycles(&g("theta", &[1.0, 1.0, 1.0])));
    assert!(has_independent_cycles(&g("lasso", &[2.0, 1.0])));
}

#[test]
fn cuts() {
    let lp = g("loop", &[2.5]);
    let v = VertexId(0);
    let eps = &lp.vertex(v).endpoints;
    let path = cut_vertex(&lp, v, &eps[..1], &eps[1..]).unwrap();
    let a = analyze(&path);
    assert!(a.is_tree());
    assert_eq!(path.total_length(), 2.5);

    let sq = g("cycle", &[1.0; 4]);
    let v = VertexId(0);
    let eps = &sq.vertex(v).endpoints;
    let cut = cut_vertex(&sq, v, &eps[..1], &eps[1..]).unwrap();
    assert_eq!(analyze(&cut).betti, 0);
    assert_eq!(cut.edge_count(), 4);

    let leaf = g("path", &[1.0]);
    let eps = &leaf.vertex(VertexId(0)).endpoints;
    assert!(matches!(cut_vertex(&leaf, VertexId(0), eps, &[]), Err(Error::InvalidCut(_))));
}

#[test]
fn diameters() {
    assert_eq!(tree_diameter(&g("path", &[1.0, 2.0])).unwrap(), 3.0);
    assert_eq!(tree_diameter(&g("star", &[3.0, 1.0])).unwrap(), 2.0);
    assert_eq!(tree_diameter(&g("cycle", &[1.0; 3])), Err(Error::NotATree));
}

#[test]
fn named_graphs() {
    let s = g("star", &[3.0, 1.0]);
    assert_eq!((s.edge_count(), s.equilateral_length()), (3, Some(1.0)));
    let c = g("cycle", &[1.0, 3.0]);
    assert_eq!((c.vertex_count(), c.total_length()), (2, 4.0));
    let c = g("cycle", &[5.0, 3.0, 2.0, 2.0]);
    assert_eq!(c.edges().iter().map(|e| e.length).collect::<Vec<_>>(), vec![5.0, 3.0, 2.0, 2.0]);
}

// vertex conditions

#[test]
fn rows_at_leaves_and_degree_three() {
    let v = VertexId(0);
    let st = condition_rows(v, 1, &ConditionSpec::standard()).unwrap();
    assert_eq!((st.value_rows.nrows(), st.derivative_rows[(0, 0)]), (0, 1.0));
    let ast = condition_rows(v, 1, &ConditionSpec::anti_standard()).unwrap();
    assert_eq!((ast.derivative_rows.nrows(), ast.value_rows[(0, 0)]), (0, 1.0));
    let st3 = condition_rows(v, 3, &ConditionSpec::standard()).unwrap();
    assert_eq!(st3.value_rows.nrows(), 2);
    for i in 0..2 {
        assert!(st3.value_rows.row(i).sum().abs() < 1e-15);
    }
    for j in 0..3 {
        assert!((st3.derivative_rows[(0, j)] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }
}

#[test]
fn duals() {
    assert_eq!(dual(&ConditionSpec::standard()).kind, ConditionKind::AntiStandard);
    let b = [VertexId(1), VertexId(3)];
    let d = dual(&ConditionSpec::standard_dirichlet(b));
    assert_eq!(d, ConditionSpec::anti_standard_neumann(b));
    assert_eq!(dual(&d), ConditionSpec::standard_dirichlet(b));
}

#[test]
fn combinatorial_kernels() {
    let tree = g("star", &[3.0, 1.0]);
    assert_eq!(kernel_dimension_combinatorial(&tree, &ConditionSpec::anti_standard()).unwrap(), 0);
    let tri = g("cycle", &[1.0; 3]);
    assert_eq!(kernel_dimension_combinatorial(&tri, &ConditionSpec::anti_standard()).unwrap(), 0);
    let path = g("path", &[1.0, 2.0]);
    let b = analyze(&path).boundary;
    assert_eq!(b.len(), 2);
    assert_eq!(kernel_dimension_combinatorial(&path, &ConditionSpec::anti_standard_neumann(b)).unwrap(), 1);
}

#[test]
fn alternating_kernel_functions() {
    assert!(kernel_basis_ast(&g("path", &[1.0, 2.0])).unwrap().is_empty());
    for lengths in [&[1.0, 3.0][..], &[1.0; 4][..]] {
        let c = g("cycle", lengths);
        let basis = kernel_basis_ast(&c).unwrap();
        assert_eq!(basis.len(), 1);
        let values: Vec<f64> = basis[0].coeffs.iter().map(|p| p.0).collect();
        for w in values.windows(2) {
            assert_eq!(w[0], -w[1]);
        }
        assert!(residual(&c, &ConditionSpec::anti_standard(), &basis[0]).unwrap() < 1e-14);
    }
    assert_eq!(kernel_basis_ast(&g("cycle", &[1.0; 3])), Err(Error::NotBipartite));
}

// secular solver

#[test]
fn assembled_matrices() {
    let m = assemble(&g("path", &[PI]), &ConditionSpec::dirichlet(), 1.0).unwrap();
    assert_eq!(m.singular_values().iter().filter(|&&s| s < 1e-12).count(), 1);
    let m = assemble(&g("path", &[1.0]), &ConditionSpec::standard(), PI).unwrap();
    assert_eq!(m.singular_values().iter().filter(|&&s| s < 1e-12).count(), 1);
}

#[test]
fn star_spectrum() {
    let found = spectrum_pairs(&g("star", &[3.0, 1.0]), &ConditionSpec::standard(), 4.0 * P2 + 0.1);
    assert_pairs(&found, &[(0.0, 1), (P2 / 4.0, 2), (P2, 1), (9.0 * P2 / 4.0, 2), (4.0 * P2, 1)]);
}

#[test]
fn loop_second_eigenvalue_scales() {
    for ell in [0.5, 1.0, 3.0] {
        let st = first_eigenvalues(&g("loop", &[ell]), &ConditionSpec::standard(), 3).unwrap();
        assert!(rel_close(st[1], 4.0 * P2 / (ell * ell), 1e-9));
        assert!(rel_close(st[2], st[1], 1e-9));
    }
}

#[test]
fn two_edge_cycle_second_eigenvalue() {
    let st = first_eigenvalues(&g("cycle", &[1.0, 3.0]), &ConditionSpec::standard(), 2).unwrap();
    assert!(rel_close(st[1], P2 / 4.0, 1e-9));
}

#[test]
fn zero_modes() {
    let (n, _) = solve_zero_modes(&g("kbip", &[2.0, 3.0, 0.7]), &ConditionSpec::standard()).unwrap();
    assert_eq!(n, 1);
    let (n, basis) = solve_zero_modes(&g("cycle", &[1.0; 4]), &ConditionSpec::anti_standard()).unwrap();
    assert_eq!((n, basis.len()), (1, 1));
    let (n, _) = solve_zero_modes(&g("cycle", &[1.0; 3]), &ConditionSpec::anti_standard()).unwrap();
    assert_eq!(n, 0);
}

#[test]
fn interval_eigenfunction_is_cosine() {
    let f = eigenfunctions(&g("path", &[1.0]), &ConditionSpec::standard(), PI).unwrap();
    assert_eq!(f.len(), 1);
    let (a, b) = f[0].coeffs[0];
    assert!(b.abs() < 1e-9 && (a.abs() - 2f64.sqrt()).abs() < 1e-9);
}

#[test]
fn star_eigenfunctions_vanish_on_an_edge() {
    let star = g("star", &[3.0, 1.0]);
    let st = ConditionSpec::standard();
    let fs = eigenfunctions(&star, &st, PI / 2.0).unwrap();
    assert_eq!(fs.len(), 2);
    // The centre is the low end of every edge, so each eigenfunction is
    // b sin(kx) per edge with Σ b = 0.
    for f in &fs {
        assert!(residual(&star, &st, f).unwrap() < 1e-9);
        for &(a, _) in &f.coeffs {
            assert!(a.abs() < 1e-9);
        }
        assert!((f.coeffs.iter().map(|c| c.1).sum::<f64>()).abs() < 1e-9);
    }
    // Some combination of the two vanishes identically on each edge.
    for e in 0..3 {
        let (x, y) = (fs[0].coeffs[e].1, fs[1].coeffs[e].1);
        let combo: Vec<f64> = (0..3).map(|j| y * fs[0].coeffs[j].1 - x * fs[1].coeffs[j].1).collect();
        assert!(combo[e].abs() < 1e-12);
        assert!(combo.iter().any(|c| c.abs() > 1e-3));
    }
}

#[test]
fn square_multiplicity_at_pi() {
    let fs = eigenfunctions(&g("cycle", &[1.0; 4]), &ConditionSpec::standard(), PI).unwrap();
    assert_eq!(fs.len(), 2);
}

#[test]
fn momentum_map() {
    let interval = g("path", &[1.0]);
    let f = EdgeWave { k: PI, coeffs: vec![(1.0, 0.0)] };
    let df = apply_momentum(&interval, &f).unwrap();
    assert_eq!(df.coeffs[0].0, 0.0);
    assert_eq!(df.coeffs[0].1.abs(), 1.0);
    assert!(residual(&interval, &ConditionSpec::dirichlet(), &df).unwrap() < 1e-12);

    let star = g("star", &[3.0, 1.0]);
    for f in eigenfunctions(&star, &ConditionSpec::standard(), PI / 2.0).unwrap() {
        let df = apply_momentum(&star, &f).unwrap();
        assert!(residual(&star, &ConditionSpec::anti_standard(), &df).unwrap() < 1e-9);
        let ddf = apply_momentum(&star, &df).unwrap();
        for (x, y) in ddf.coeffs.iter().zip(&f.coeffs) {
            assert_eq!((x.0, x.1), (-y.0, -y.1));
        }
    }
    assert_eq!(apply_momentum(&g("cycle", &[1.0; 3]), &f), Err(Error::NotBipartite));
}

#[test]
fn residual_detects_perturbation() {
    let interval = g("path", &[1.0]);
    let st = ConditionSpec::standard();
    let exact = EdgeWave { k: PI, coeffs: vec![(1.0, 0.0)] };
    assert!(residual(&interval, &st, &exact).unwrap() < 1e-12);
    let mut bent = exact.clone();
    bent.coeffs[0].1 += 0.1;
    assert!(residual(&interval, &st, &bent).unwrap() > 0.05);
}

#[test]
fn dirichlet_closed_forms() {
    let d = dirichlet_spectrum(&g("kbip", &[2.0, 2.0, 1.0]), 4.0 * P2 + 0.1).unwrap();
    assert_pairs(&d.records.iter().map(|r| (r.lambda, r.multiplicity)).collect::<Vec<_>>(), &[(P2, 4), (4.0 * P2, 4)]);
    let d = dirichlet_spectrum(&g("cycle", &[1.0, 3.0]), 2.0).unwrap();
    assert!(rel_close(d.nth(1).unwrap(), P2 / 9.0, 1e-12));
    let d = dirichlet_spectrum(&g("star", &[3.0, 1.0]), 4.0 * P2 + 0.1).unwrap();
    assert_pairs(&d.records.iter().map(|r| (r.lambda, r.multiplicity)).collect::<Vec<_>>(), &[(P2, 3), (4.0 * P2, 3)]);
}

// discrete oracle

#[test]
fn normalized_laplacian_spectra() {
    let close = |got: Vec<f64>, want: &[f64]| {
        assert_eq!(got.len(), want.len());
        for (x, y) in got.iter().zip(want) {
            assert!((x - y).abs() < 1e-12, "{got:?}");
        }
    };
    close(discrete_spectrum(&g("path", &[1.0, 1.0])).unwrap(), &[0.0, 1.0, 2.0]);
    close(discrete_spectrum(&g("cycle", &[1.0; 3])).unwrap(), &[0.0, 1.5, 1.5]);
    close(discrete_spectrum(&g("star", &[3.0, 1.0])).unwrap(), &[0.0, 1.0, 1.0, 2.0]);
}

#[test]
fn jacobi_trivial_inputs() {
    let id = SymmetricMatrix::from_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
    assert_eq!(symmetric_eigenvalues(&id), vec![1.0; 3]);
    let d = SymmetricMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 0.0]]).unwrap();
    assert_eq!(symmetric_eigenvalues(&d), vec![0.0, 2.0]);
    assert!(matches!(
        SymmetricMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]),
        Err(Error::NotSymmetric(_))
    ));
}

#[test]
fn von_below_examples() {
    let kmax2 = 4.0 * P2 * (1.0 + 1e-9);
    let star = von_below_metric_spectrum(&g("star", &[3.0, 1.0]), kmax2).unwrap();
    let pairs: Vec<_> = star.records.iter().map(|r| (r.lambda, r.multiplicity)).collect();
    assert_pairs(&pairs, &[(0.0, 1), (P2 / 4.0, 2), (P2, 1), (9.0 * P2 / 4.0, 2), (4.0 * P2, 1)]);
    let tri = von_below_metric_spectrum(&g("cycle", &[1.0; 3]), kmax2).unwrap();
    assert!(tri.records.iter().all(|r| !rel_close(r.lambda, P2, 1e-6)));
    assert_eq!(tri.records.last().map(|r| (rel_close(r.lambda, 4.0 * P2, 1e-12), r.multiplicity)), Some((true, 2)));
    assert_eq!(von_below_metric_spectrum(&g("cycle", &[1.0, 3.0]), 10.0), Err(Error::NotEquilateral));
}

#[test]
fn finite_difference_examples() {
    let st = ConditionSpec::standard();
    let fd = finite_difference_spectrum(&g("path", &[1.0]), &st, 2000.0, 2).unwrap();
    assert!(rel_close(fd[1], P2, 1e-4));
    let fd = finite_difference_spectrum(&g("star", &[3.0, 1.0]), &st, 2000.0, 2).unwrap();
    assert!(rel_close(fd[1], P2 / 4.0, 1e-4));
    let fd = finite_difference_spectrum(&g("cycle", &[1.0, 3.0]), &ConditionSpec::dirichlet(), 2000.0, 1).unwrap();
    assert!(rel_close(fd[0], P2 / 9.0, 1e-4));
    assert!(matches!(
        finite_difference_spectrum(&g("path", &[1.0]), &ConditionSpec::anti_standard(), 2000.0, 2),
        Err(Error::UnsupportedCondition(_))
    ));
}

// theorems

#[test]
fn equilateral_triangle_violations() {
    let r = verify(TheoremId::EquiFried, &g("cycle", &[1.0; 3]), &VerifyParams::with_count(9)).unwrap();
    assert_eq!(r.verdict, Verdict::Violated);
    assert_eq!(r.violated_indices(), vec![3, 9]);
    assert_eq!(r.predicted_violations, Some(vec![3, 9]));
}

#[test]
fn star_tree_friedlander_is_sharp() {
    let star = g("star", &[3.0, 1.0]);
    let r = verify(TheoremId::TreeFried, &star, &VerifyParams::with_count(10)).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    let st = first_eigenvalues(&star, &ConditionSpec::standard(), 4).unwrap();
    let d = dirichlet_spectrum(&star, 40.0).unwrap();
    assert!(rel_close(st[3], d.nth(3).unwrap(), 1e-9));
}

#[test]
fn two_edge_cycle_checks() {
    let c = g("cycle", &[1.0, 3.0]);
    let r = verify(TheoremId::EquiFried, &c, &VerifyParams::with_count(10)).unwrap();
    assert!(matches!(r.verdict, Verdict::Inapplicable(_)));
    let r = verify(TheoremId::AstLeDir, &c, &VerifyParams::with_count(10)).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    let st = first_eigenvalues(&c, &ConditionSpec::standard(), 2).unwrap();
    assert!(st[1] > dirichlet_spectrum(&c, 2.0).unwrap().nth(1).unwrap());
}

#[test]
fn gluing_on_unsatisfiable_cycle() {
    let c = g("cycle", &[5.0, 3.0, 2.0, 2.0]);
    let r = verify(TheoremId::Gluing, &c, &VerifyParams::with_count(20)).unwrap();
    assert!(matches!(r.verdict, Verdict::Inapplicable(_)));
    assert!(r.violations.is_empty());
    assert_eq!(r.checked, Some((1, 20)));
}

#[test]
fn tree_phases() {
    let p = assign_tree_phases(&g("path", &[1.0, 1.0])).unwrap();
    let mut ph = p.phases.clone();
    ph.sort_by(f64::total_cmp);
    assert_eq!(ph[0], 0.0);
    assert!((ph[1] - PI).abs() < 1e-15);
    let s = assign_tree_phases(&g("star", &[3.0, 1.0])).unwrap();
    let mut ph = s.phases.clone();
    ph.sort_by(f64::total_cmp);
    for (x, y) in ph.iter().zip([0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]) {
        assert!((x - y).abs() < 1e-15);
    }
    assert_eq!(assign_tree_phases(&g("lasso", &[2.0, 1.0])), Err(Error::NotATree));
}

#[test]
fn sign_condition_examples() {
    let w = check_cycle_sign_condition(&g("cycle", &[1.0; 4])).unwrap();
    for r in &w.cycles[0].references {
        assert_eq!(r.signs.as_deref(), Some(&[1, 1, 1, -1][..]));
    }
    let w = check_cycle_sign_condition(&g("cycle", &[5.0, 3.0, 2.0, 2.0])).unwrap();
    let refs = &w.cycles[0].references;
    assert_eq!(refs[0].signs, None);
    assert_eq!(refs[1].signs.as_deref(), Some(&[1, -1, 1, 1][..]));
    assert_eq!(refs[1].quotient, Some(2));
}

#[test]
fn two_unit_edges_satisfy_both_conditions() {
    let w = check_cycle_sign_condition(&g("cycle", &[1.0, 1.0])).unwrap();
    let c = &w.cycles[0];
    assert!(c.zero_sum_condition());
    assert_eq!(c.references[0].signs.as_deref(), Some(&[1, 1][..]));
    assert_eq!(c.references[0].quotient, Some(2));
}

#[test]
fn rational_cycles() {
    let r = rational_cycle_counterexample(&g("cycle", &[1.0, 3.0]), &VerifyParams::with_count(4)).unwrap();
    assert_eq!(r.predicted_violations, None);
    assert_eq!(r.violated_indices().first(), Some(&1));

    let r = rational_cycle_counterexample(&g("cycle", &[1.0; 3]), &VerifyParams::with_count(4)).unwrap();
    assert_eq!(r.predicted_violations, Some(vec![3]));
    assert!(r.violated_indices().contains(&3));

    let r = rational_cycle_counterexample(&g("cycle", &[0.5; 5]), &VerifyParams::with_count(6)).unwrap();
    assert_eq!(r.predicted_violations, Some(vec![5]));
    assert!(r.violated_indices().contains(&5));

    assert_eq!(
        rational_cycle_counterexample(&g("star", &[3.0, 1.0]), &VerifyParams::default()),
        Err(Error::NotACycle)
    );
    assert!(matches!(
        rational_cycle_counterexample(&g("cycle", &[1.0, PI]), &VerifyParams::default()),
        Err(Error::NotRational(_))
    ));
}
