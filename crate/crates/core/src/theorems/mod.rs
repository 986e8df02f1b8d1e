//! Executable checks of eigenvalue identities and inequalities.
//!
//! Every check computes the spectra it needs with the secular solver and
//! compares them index by index, counting eigenvalues with multiplicity from 1.

mod phases;
mod signs;

pub use phases::{assign_tree_phases, PhaseAssignment};
pub use signs::{
    check_cycle_sign_condition, exact_rational, integer_lengths, CycleSignWitness, CycleWitness,
    ReferenceWitness, MAX_CYCLE_EDGES,
};

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::conditions::{kernel_dimension_combinatorial, ConditionSpec};
use crate::error::{Error, Result};
use crate::graph::builtin::builtin;
use crate::graph::{analyze, cut_vertex, has_independent_cycles, tree_diameter, Endpoint, GraphAnalysis, MetricGraph, VertexId};
use crate::secular::{find_spectrum, lowest_eigenvalues, solve_zero_modes, SolverOptions};
use crate::spectrum::{dirichlet_spectrum, Spectrum};

/// Relative tolerance for equalities between eigenvalues.
pub const EQUAL_REL: f64 = 1e-8;
/// Absolute floor for equalities, so that zero modes compare equal.
pub const EQUAL_ABS: f64 = 1e-10;
/// `a ≤ b` passes when `a ≤ b (1 + INEQ_REL) + INEQ_ABS`.
pub const INEQ_REL: f64 = 1e-9;
pub const INEQ_ABS: f64 = 1e-12;
/// Largest refined cycle size checked by `RATIONAL_CYCLE`.
pub const MAX_REFINED_EDGES: u64 = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    Shift,
    PosIso,
    Ker,
    IsoIff,
    TreeShift,
    TreeFried,
    MixedShift,
    MixedTree,
    AstLeDir,
    EquiFried,
    Gluing,
    CutMono,
    ChopShift,
    TreeBounds,
    DcBounds,
    RationalCycle,
}

impl TheoremId {
    pub const ALL: [TheoremId; 16] = [
        Self::Shift,
        Self::PosIso,
        Self::Ker,
        Self::IsoIff,
        Self::TreeShift,
        Self::TreeFried,
        Self::MixedShift,
        Self::MixedTree,
        Self::AstLeDir,
        Self::EquiFried,
        Self::Gluing,
        Self::CutMono,
        Self::ChopShift,
        Self::TreeBounds,
        Self::DcBounds,
        Self::RationalCycle,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Self::Shift => "SHIFT",
            Self::PosIso => "POS_ISO",
            Self::Ker => "KER",
            Self::IsoIff => "ISO_IFF",
            Self::TreeShift => "TREE_SHIFT",
            Self::TreeFried => "TREE_FRIED",
            Self::MixedShift => "MIXED_SHIFT",
            Self::MixedTree => "MIXED_TREE",
            Self::AstLeDir => "AST_LE_DIR",
            Self::EquiFried => "EQUI_FRIED",
            Self::Gluing => "GLUING",
            Self::CutMono => "CUT_MONO",
            Self::ChopShift => "CHOP_SHIFT",
            Self::TreeBounds => "TREE_BOUNDS",
            Self::DcBounds => "DC_BOUNDS",
            Self::RationalCycle => "RATIONAL_CYCLE",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Self::Shift => "λ_{k+β}(ast) = λ_{k+1}(st) on bipartite graphs",
            Self::PosIso => "st and ast share positive eigenvalues and eigenspaces on bipartite graphs",
            Self::Ker => "numerical kernel dimensions match the combinatorial formulas",
            Self::IsoIff => "st and ast isospectral iff bipartite with β = 1",
            Self::TreeShift => "λ_k(ast) = λ_{k+1}(st) on trees",
            Self::TreeFried => "λ_{k+1}(st) ≤ λ_k(st,D(∂Γ)) on trees",
            Self::MixedShift => "λ_{k+β+|B|-1}(ast,N(B)) = λ_k(st,D(B)) on bipartite graphs",
            Self::MixedTree => "λ_k(st,D(B)) ≤ λ_{k+|B|-1}(st,D(∂Γ∖B)) on trees",
            Self::AstLeDir => "λ_n(ast) ≤ λ_n(D)",
            Self::EquiFried => "equilateral: λ_{n+1}(st) ≤ λ_n(D) fails exactly at n = (2m+1)E unless bipartite",
            Self::Gluing => "independent cycles with the sign condition: λ_{n+1}(st) ≤ λ_n(D)",
            Self::CutMono => "cutting a vertex lowers st and raises ast eigenvalues",
            Self::ChopShift => "after a cut: λ_{m+1}(st) = λ_{m+β-1}(ast)",
            Self::TreeBounds => "lower and upper bounds on ast eigenvalues of trees",
            Self::DcBounds => "λ_{β+1}(ast) bounded below by dumbbell and lasso λ_2(st)",
            Self::RationalCycle => "rational cycle with odd refined edge count violates λ_{n+1}(st) ≤ λ_n(D)",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.token() == s)
            .ok_or_else(|| Error::InvalidParameter {
                name: "theorem".into(),
                reason: format!("unknown theorem id `{s}`"),
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Holds,
    Violated,
    Inapplicable(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Equal,
    AtMost,
    AtLeast,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Self::Equal => "=",
            Self::AtMost => "<=",
            Self::AtLeast => ">=",
        }
    }
}

/// One failed comparison `lhs relation rhs` at index `index`.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub index: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub label: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub theorem: TheoremId,
    pub verdict: Verdict,
    /// Inclusive index range compared, if any comparison ran.
    pub checked: Option<(usize, usize)>,
    pub violations: Vec<Violation>,
    /// Largest relative defect over all comparisons (0 when all are exact).
    pub max_residual: f64,
    /// Indices where the theorem predicts the inequality to fail.
    pub predicted_violations: Option<Vec<usize>>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn violated_indices(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.violations.iter().map(|v| v.index).collect();
        set.into_iter().collect()
    }

    fn inapplicable(theorem: TheoremId, reason: impl Into<String>) -> Self {
        Self {
            theorem,
            verdict: Verdict::Inapplicable(reason.into()),
            checked: None,
            violations: Vec::new(),
            max_residual: 0.0,
            predicted_violations: None,
            notes: Vec::new(),
        }
    }
}

/// A vertex split into two endpoint classes.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexCut {
    pub vertex: VertexId,
    pub class_a: Vec<Endpoint>,
    pub class_b: Vec<Endpoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyParams {
    /// Number of indices to compare.
    pub count: usize,
    /// `B ⊆ ∂Γ` for the mixed checks.
    pub boundary: Option<Vec<VertexId>>,
    pub cut: Option<VertexCut>,
    /// Spectral window for `ISO_IFF`.
    pub lambda_max: Option<f64>,
    pub solver: SolverOptions,
}

impl Default for VerifyParams {
    fn default() -> Self {
        Self {
            count: 10,
            boundary: None,
            cut: None,
            lambda_max: None,
            solver: SolverOptions::default(),
        }
    }
}

impl VerifyParams {
    pub fn with_count(count: usize) -> Self {
        Self {
            count,
            ..Self::default()
        }
    }
}

/// Accumulates comparisons into a report.
struct Checker {
    theorem: TheoremId,
    violations: Vec<Violation>,
    max_residual: f64,
    lo: usize,
    hi: usize,
    notes: Vec<String>,
}

impl Checker {
    fn new(theorem: TheoremId) -> Self {
        Self {
            theorem,
            violations: Vec::new(),
            max_residual: 0.0,
            lo: usize::MAX,
            hi: 0,
            notes: Vec::new(),
        }
    }

    fn record(&mut self, index: usize, residual: f64, ok: bool, v: Violation) {
        self.lo = self.lo.min(index);
        self.hi = self.hi.max(index);
        self.max_residual = self.max_residual.max(residual);
        if !ok {
            self.violations.push(v);
        }
    }

    fn equal(&mut self, index: usize, lhs: f64, rhs: f64, label: &'static str) {
        let diff = (lhs - rhs).abs();
        let scale = lhs.abs().max(rhs.abs());
        let residual = if diff == 0.0 { 0.0 } else { diff / scale };
        let ok = diff <= EQUAL_REL * scale + EQUAL_ABS;
        self.record(index, residual, ok, Violation { index, lhs, rhs, relation: Relation::Equal, label });
    }

    fn at_most(&mut self, index: usize, lhs: f64, rhs: f64, label: &'static str) {
        let excess = (lhs - rhs).max(0.0);
        let residual = if excess == 0.0 { 0.0 } else { excess / rhs.abs().max(f64::MIN_POSITIVE) };
        let ok = lhs <= rhs * (1.0 + INEQ_REL) + INEQ_ABS;
        self.record(index, residual, ok, Violation { index, lhs, rhs, relation: Relation::AtMost, label });
    }

    fn at_least(&mut self, index: usize, lhs: f64, rhs: f64, label: &'static str) {
        let excess = (rhs - lhs).max(0.0);
        let residual = if excess == 0.0 { 0.0 } else { excess / lhs.abs().max(f64::MIN_POSITIVE) };
        let ok = rhs <= lhs * (1.0 + INEQ_REL) + INEQ_ABS;
        self.record(index, residual, ok, Violation { index, lhs, rhs, relation: Relation::AtLeast, label });
    }

    fn finish(self) -> VerificationReport {
        self.finish_with(None)
    }

    fn finish_with(self, predicted: Option<Vec<usize>>) -> VerificationReport {
        VerificationReport {
            theorem: self.theorem,
            verdict: if self.violations.is_empty() { Verdict::Holds } else { Verdict::Violated },
            checked: (self.lo <= self.hi).then_some((self.lo, self.hi)),
            violations: self.violations,
            max_residual: self.max_residual,
            predicted_violations: predicted,
            notes: self.notes,
        }
    }
}

/// The first `n` eigenvalues with multiplicity.
fn lowest(g: &MetricGraph, spec: &ConditionSpec, n: usize, opts: &SolverOptions) -> Result<Vec<f64>> {
    let mut v = lowest_eigenvalues(g, spec, n.max(1), opts)?.expanded();
    v.truncate(n);
    Ok(v)
}

fn lowest_dirichlet(g: &MetricGraph, n: usize) -> Result<Vec<f64>> {
    let longest = g.edges().iter().map(|e| e.length).fold(0.0, f64::max);
    let k = PI * n as f64 / longest * 1.000001;
    let mut v = dirichlet_spectrum(g, k * k)?.expanded();
    v.truncate(n);
    Ok(v)
}

/// `λ` (1-based) from a 0-based list.
fn at(list: &[f64], n: usize) -> f64 {
    list[n - 1]
}

/// Comparisons `λ_{n+1}(st) ≤ λ_n(D)` for `n = 1..=count`.
pub fn friedlander_comparisons(g: &MetricGraph, count: usize, opts: &SolverOptions) -> Result<VerificationReport> {
    let mut c = Checker::new(TheoremId::EquiFried);
    friedlander_into(&mut c, g, count, opts)?;
    Ok(c.finish())
}

fn friedlander_into(c: &mut Checker, g: &MetricGraph, count: usize, opts: &SolverOptions) -> Result<()> {
    let st = lowest(g, &ConditionSpec::standard(), count + 1, opts)?;
    let dir = lowest_dirichlet(g, count)?;
    for n in 1..=count {
        c.at_most(n, at(&st, n + 1), at(&dir, n), "λ_{n+1}(st) <= λ_n(D)");
    }
    Ok(())
}

fn resolve_boundary(g: &MetricGraph, a: &GraphAnalysis, params: &VerifyParams, default_all: bool) -> Result<Vec<VertexId>> {
    let b = match &params.boundary {
        Some(b) => b.clone(),
        None if default_all => a.boundary.clone(),
        None => a.boundary.iter().take(1).copied().collect(),
    };
    if let Some(&v) = b.iter().find(|v| !a.boundary.contains(v)) {
        return Err(Error::BoundaryNotLeaf(g.vertex(v).label.clone()));
    }
    Ok(b)
}

/// Cut from the parameters, or `None` when missing.
fn apply_cut(g: &MetricGraph, params: &VerifyParams) -> Result<Option<MetricGraph>> {
    match &params.cut {
        Some(c) => Ok(Some(cut_vertex(g, c.vertex, &c.class_a, &c.class_b)?)),
        None => Ok(None),
    }
}

/// Midpoint between the first `need` eigenvalues and the next distinct one.
fn window_after(s: &Spectrum, need: usize) -> Option<f64> {
    let mut seen = 0;
    for w in s.records.windows(2) {
        seen += w[0].multiplicity;
        if seen >= need {
            return Some(0.5 * (w[0].lambda + w[1].lambda));
        }
    }
    None
}

pub fn verify(theorem: TheoremId, g: &MetricGraph, params: &VerifyParams) -> Result<VerificationReport> {
    use TheoremId::*;
    let a = analyze(g);
    let opts = &params.solver;
    let count = params.count;
    let st = ConditionSpec::standard();
    let ast = ConditionSpec::anti_standard();
    let mut c = Checker::new(theorem);
    let needs_connected = !matches!(theorem, AstLeDir | CutMono);
    if needs_connected && !a.connected {
        return Ok(VerificationReport::inapplicable(theorem, "graph is not connected"));
    }
    match theorem {
        Shift | PosIso | MixedShift | ChopShift | DcBounds if !a.bipartite => {
            Ok(VerificationReport::inapplicable(theorem, "graph is not bipartite"))
        }
        TreeShift | TreeFried | MixedTree | TreeBounds if !a.is_tree() => {
            Ok(VerificationReport::inapplicable(theorem, "graph is not a tree"))
        }
        Shift => {
            let beta = a.betti;
            let s = lowest(g, &st, count + 1, opts)?;
            let t = lowest(g, &ast, count + beta, opts)?;
            for k in 1..=count {
                c.equal(k, at(&t, k + beta), at(&s, k + 1), "λ_{k+β}(ast) = λ_{k+1}(st)");
            }
            Ok(c.finish())
        }
        PosIso => pos_iso(c, g, count, opts),
        Ker => {
            let mut specs = vec![("st", st.clone()), ("ast", ast.clone()), ("dir", ConditionSpec::dirichlet())];
            let b = resolve_boundary(g, &a, params, true)?;
            if !b.is_empty() {
                specs.push(("stD", ConditionSpec::standard_dirichlet(b.iter().copied())));
                if a.bipartite {
                    specs.push(("astN", ConditionSpec::anti_standard_neumann(b.iter().copied())));
                }
            }
            for (i, (name, spec)) in specs.iter().enumerate() {
                let numeric = solve_zero_modes(g, spec)?.0;
                let formula = kernel_dimension_combinatorial(g, spec)?;
                c.notes.push(format!("{name}: numerical {numeric}, combinatorial {formula}"));
                c.equal(i + 1, numeric as f64, formula as f64, "dim ker (numerical = combinatorial)");
            }
            Ok(c.finish())
        }
        IsoIff => {
            let lmax = params.lambda_max.unwrap_or(40.0);
            let s = find_spectrum(g, &st, lmax, opts)?;
            let t = find_spectrum(g, &ast, lmax, opts)?;
            let iso = s.records.len() == t.records.len()
                && s.records.iter().zip(&t.records).all(|(x, y)| {
                    x.multiplicity == y.multiplicity
                        && (x.lambda - y.lambda).abs() <= EQUAL_REL * x.lambda.max(y.lambda) + EQUAL_ABS
                });
            let predicted = a.bipartite && a.betti == 1;
            c.notes.push(format!(
                "isospectral up to λ = {lmax}: {iso}; bipartite with β = 1: {predicted}"
            ));
            c.equal(1, iso as u8 as f64, predicted as u8 as f64, "isospectral = (bipartite and β = 1)");
            Ok(c.finish())
        }
        TreeShift => {
            let s = lowest(g, &st, count + 1, opts)?;
            let t = lowest(g, &ast, count, opts)?;
            for k in 1..=count {
                c.equal(k, at(&t, k), at(&s, k + 1), "λ_k(ast) = λ_{k+1}(st)");
            }
            Ok(c.finish())
        }
        TreeFried => {
            let s = lowest(g, &st, count + 1, opts)?;
            let d = lowest(g, &ConditionSpec::standard_dirichlet(a.boundary.iter().copied()), count, opts)?;
            let mut equalities = Vec::new();
            for k in 1..=count {
                let (l, r) = (at(&s, k + 1), at(&d, k));
                if (l - r).abs() <= EQUAL_REL * r {
                    equalities.push(k);
                }
                c.at_most(k, l, r, "λ_{k+1}(st) <= λ_k(st,D(∂Γ))");
            }
            if !equalities.is_empty() {
                c.notes.push(format!("equality at k = {equalities:?}"));
            }
            Ok(c.finish())
        }
        MixedShift => {
            let b = resolve_boundary(g, &a, params, true)?;
            if b.is_empty() {
                return Ok(VerificationReport::inapplicable(theorem, "B is empty"));
            }
            let shift = a.betti + b.len() - 1;
            let d = lowest(g, &ConditionSpec::standard_dirichlet(b.iter().copied()), count, opts)?;
            let n = lowest(g, &ConditionSpec::anti_standard_neumann(b.iter().copied()), count + shift, opts)?;
            for k in 1..=count {
                c.equal(k, at(&n, k + shift), at(&d, k), "λ_{k+β+|B|-1}(ast,N(B)) = λ_k(st,D(B))");
            }
            Ok(c.finish())
        }
        MixedTree => {
            let b = resolve_boundary(g, &a, params, false)?;
            let rest: Vec<VertexId> = a.boundary.iter().copied().filter(|v| !b.contains(v)).collect();
            let start = if b.is_empty() { 2 } else { 1 };
            let shift = b.len() as isize - 1;
            let top = (count as isize + shift).max(0) as usize;
            let left = lowest(g, &ConditionSpec::standard_dirichlet(b.iter().copied()), count, opts)?;
            let right = lowest(g, &ConditionSpec::standard_dirichlet(rest), top, opts)?;
            for k in start..=count {
                let j = (k as isize + shift) as usize;
                c.at_most(k, at(&left, k), at(&right, j), "λ_k(st,D(B)) <= λ_{k+|B|-1}(st,D(∂Γ∖B))");
            }
            Ok(c.finish())
        }
        AstLeDir => {
            let t = lowest(g, &ast, count, opts)?;
            let d = lowest_dirichlet(g, count)?;
            for n in 1..=count {
                c.at_most(n, at(&t, n), at(&d, n), "λ_n(ast) <= λ_n(D)");
            }
            Ok(c.finish())
        }
        EquiFried => {
            if g.equilateral_length().is_none() {
                return Ok(VerificationReport::inapplicable(theorem, "graph is not equilateral"));
            }
            let e = g.edge_count();
            let predicted: Vec<usize> = if a.bipartite {
                Vec::new()
            } else {
                (0..).map(|m| (2 * m + 1) * e).take_while(|&n| n <= count).collect()
            };
            friedlander_into(&mut c, g, count, opts)?;
            let observed: Vec<usize> = c.violations.iter().map(|v| v.index).collect();
            c.notes.push(if observed == predicted {
                "violated indices match the prediction".to_string()
            } else {
                format!("violated indices {observed:?} differ from the prediction {predicted:?}")
            });
            Ok(c.finish_with(Some(predicted)))
        }
        Gluing => {
            if !has_independent_cycles(g) {
                return Ok(VerificationReport::inapplicable(theorem, "graph has dependent cycles"));
            }
            let w = check_cycle_sign_condition(g)?;
            friedlander_into(&mut c, g, count, opts)?;
            for (i, cyc) in w.cycles.iter().enumerate() {
                for r in cyc.references.iter().filter(|r| r.signs.is_none()) {
                    c.notes.push(format!(
                        "cycle {}: no signs for reference edge `{}`; achievable sums {:?}",
                        i + 1,
                        g.edge(r.reference).name,
                        r.achievable_sums
                    ));
                }
                if cyc.zero_sum_condition() {
                    c.notes.push(format!("cycle {}: zero-sum signs {:?}", i + 1, cyc.zero_sum.as_ref().unwrap()));
                }
            }
            if w.hypothesis_holds() {
                Ok(c.finish())
            } else {
                let direct = if c.violations.is_empty() { "holds" } else { "fails" };
                c.notes.push(format!("direct inequality {direct} for n <= {count}"));
                let mut r = c.finish();
                r.verdict = Verdict::Inapplicable("sign condition unsatisfiable".into());
                Ok(r)
            }
        }
        CutMono => {
            let Some(cut) = apply_cut(g, params)? else {
                return Ok(VerificationReport::inapplicable(theorem, "no vertex cut given"));
            };
            let s0 = lowest(g, &st, count, opts)?;
            let s1 = lowest(&cut, &st, count, opts)?;
            let t0 = lowest(g, &ast, count, opts)?;
            let t1 = lowest(&cut, &ast, count, opts)?;
            for k in 1..=count {
                c.at_least(k, at(&s0, k), at(&s1, k), "λ_k(st,Γ) >= λ_k(st,Γ')");
                c.at_most(k, at(&t0, k), at(&t1, k), "λ_k(ast,Γ) <= λ_k(ast,Γ')");
            }
            Ok(c.finish())
        }
        ChopShift => {
            let Some(cut) = apply_cut(g, params)? else {
                return Ok(VerificationReport::inapplicable(theorem, "no vertex cut given"));
            };
            let beta = a.betti;
            let start = 1.max(2 - beta.min(2));
            let s = lowest(&cut, &st, count + 1, opts)?;
            let t = lowest(&cut, &ast, count + beta - 1 + usize::from(beta == 0), opts)?;
            for m in start..=count {
                c.equal(m, at(&s, m + 1), at(&t, m + beta - 1), "λ_{m+1}(st,Γ') = λ_{m+β-1}(ast,Γ')");
            }
            Ok(c.finish())
        }
        TreeBounds => {
            let t = lowest(g, &ast, count, opts)?;
            let total = g.total_length();
            let diam = tree_diameter(g)?;
            let e = g.edge_count() as f64;
            for k in 1..=count {
                let kf = k as f64;
                let lam = at(&t, k);
                c.at_least(k, lam, (kf + 1.0).powi(2) * PI * PI / (4.0 * total * total), "λ_k(ast) >= (k+1)²π²/4L²");
                c.at_most(k, lam, kf * kf * PI * PI / (diam * diam), "λ_k(ast) <= k²π²/diam²");
                if g.edge_count() >= 2 {
                    c.at_most(k, lam, kf * kf * e * e * PI * PI / (4.0 * total * total), "λ_k(ast) <= k²E²π²/4L²");
                }
            }
            Ok(c.finish())
        }
        DcBounds => {
            if a.betti == 0 {
                return Ok(VerificationReport::inapplicable(theorem, "graph has no cycles"));
            }
            let total = g.total_length();
            let beta = a.betti;
            let lam = at(&lowest(g, &ast, beta + 1, opts)?, beta + 1);
            let dumbbell = builtin("dumbbell", &[total, a.doubly_connected_length / 2.0])?;
            let d2 = at(&lowest(&dumbbell, &st, 2, opts)?, 2);
            c.notes.push(format!("dumbbell: total {total}, loops {}", a.doubly_connected_length / 2.0));
            c.at_least(beta + 1, lam, d2, "λ_{β+1}(ast) >= λ_2(st, dumbbell)");
            for (i, comp) in doubly_connected_components(g, &a).into_iter().enumerate() {
                let tail = total - comp;
                let lasso = if tail > 1e-12 * total {
                    builtin("lasso", &[comp, tail])?
                } else {
                    builtin("loop", &[total])?
                };
                let l2 = at(&lowest(&lasso, &st, 2, opts)?, 2);
                c.notes.push(format!("lasso for component {}: loop {comp}, tail {tail}", i + 1));
                c.at_least(beta + 1, lam, l2, "λ_{β+1}(ast) >= λ_2(st, lasso)");
            }
            Ok(c.finish())
        }
        RationalCycle => rational_cycle_counterexample(g, params),
    }
}

/// Lengths of the connected components of the non-bridge subgraph.
fn doubly_connected_components(g: &MetricGraph, a: &GraphAnalysis) -> Vec<f64> {
    let bridge: BTreeSet<_> = a.bridge_edges.iter().copied().collect();
    let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let cyclic: Vec<_> = g.edge_ids().filter(|e| !bridge.contains(e)).collect();
    for &e in &cyclic {
        let (x, y) = (find(&mut parent, g.edge(e).low.0), find(&mut parent, g.edge(e).high.0));
        parent[x] = y;
    }
    let mut lengths: std::collections::BTreeMap<usize, f64> = Default::default();
    for &e in &cyclic {
        let r = find(&mut parent, g.edge(e).low.0);
        *lengths.entry(r).or_default() += g.edge(e).length;
    }
    lengths.into_values().collect()
}

fn pos_iso(mut c: Checker, g: &MetricGraph, count: usize, opts: &SolverOptions) -> Result<VerificationReport> {
    use crate::secular::{apply_momentum, eigenfunctions, residual};
    let st = ConditionSpec::standard();
    let ast = ConditionSpec::anti_standard();
    let probe = lowest_eigenvalues(g, &st, count + 3, opts)?;
    let zero = probe.zero_modes();
    let lmax = match window_after(&probe, count + zero) {
        Some(l) => l,
        None => probe.complete_up_to,
    };
    let s = find_spectrum(g, &st, lmax, opts)?;
    let t = find_spectrum(g, &ast, lmax, opts)?;
    let sp: Vec<_> = s.records.iter().filter(|r| r.k > 0.0).collect();
    let tp: Vec<_> = t.records.iter().filter(|r| r.k > 0.0).collect();
    if sp.len() != tp.len() {
        c.notes.push(format!(
            "{} distinct positive st eigenvalues against {} ast eigenvalues below {lmax}",
            sp.len(),
            tp.len()
        ));
    }
    let mut index = 1;
    for (i, x) in sp.iter().enumerate() {
        match tp.get(i) {
            Some(y) => {
                c.equal(index, y.lambda, x.lambda, "positive λ(ast) = λ(st)");
                c.equal(index, y.multiplicity as f64, x.multiplicity as f64, "multiplicity(ast) = multiplicity(st)");
            }
            None => c.equal(index, f64::NAN, x.lambda, "positive λ(ast) = λ(st)"),
        }
        let mut worst = 0.0f64;
        for f in eigenfunctions(g, &st, x.k)? {
            let df = apply_momentum(g, &f)?;
            worst = worst.max(residual(g, &ast, &df)?);
        }
        c.at_most(index, worst, 1e-8, "momentum image residual <= 1e-8");
        index += x.multiplicity;
    }
    Ok(c.finish())
}

/// Example of a rational cycle: refine into unit edges and, when the refined
/// edge count `ñ` is odd, check that `λ_{n+1}(st) ≤ λ_n(D)` fails at `n = ñ`.
/// The comparison is also run directly for `n ≤ max(count, ñ)`.
pub fn rational_cycle_counterexample(g: &MetricGraph, params: &VerifyParams) -> Result<VerificationReport> {
    let theorem = TheoremId::RationalCycle;
    let a = analyze(g);
    if !(a.connected && a.betti == 1 && a.degrees.iter().all(|&d| d == 2)) {
        return Err(Error::NotACycle);
    }
    let lengths: Vec<f64> = g.edges().iter().map(|e| e.length).collect();
    let Some((ints, x)) = integer_lengths(&lengths) else {
        let bad = lengths
            .iter()
            .copied()
            .find(|&l| exact_rational(l).is_err())
            .unwrap_or(lengths[0]);
        return Err(Error::NotRational(bad));
    };
    let refined: i128 = ints.iter().sum();
    if refined as u64 > MAX_REFINED_EDGES {
        return Ok(VerificationReport::inapplicable(
            theorem,
            format!("refined cycle has {refined} edges, above the limit {MAX_REFINED_EDGES}"),
        ));
    }
    let refined = refined as usize;
    let mut c = Checker::new(theorem);
    c.notes.push(format!("x = {x}, refined edge count {refined}"));
    let odd = refined % 2 == 1;
    let n = if odd { params.count.max(refined) } else { params.count };
    friedlander_into(&mut c, g, n, &params.solver)?;
    if odd {
        let hit = c.violations.iter().any(|v| v.index == refined);
        c.notes.push(format!(
            "predicted violation at n = {refined} {}",
            if hit { "confirmed" } else { "not observed" }
        ));
    } else {
        c.notes.push("refined edge count is even; no prediction".into());
    }
    Ok(c.finish_with(odd.then(|| vec![refined])))
}
