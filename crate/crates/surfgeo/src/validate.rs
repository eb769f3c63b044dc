//! The full invariant suite: named, deterministic checks covering jet
//! arithmetic, the expression pipeline, the surface catalog, frames and
//! curvature identities, the normal-bundle pipeline, and the estimate
//! experiments. `run_all` executes every check in a fixed order; results
//! carry a one-line detail string with the measured numbers.
//!
//! Every check is seeded and thread-count-independent, so two runs produce
//! identical results (and identical serialized reports) byte for byte.

use crate::analysis::analyze_point_with_gauge;
use crate::bundle::{flatness_scan_with_gauge, synthesize_torsion_free};
use crate::error::Result;
use crate::estimates::{
    dirichlet_energy_and_geodesic_radius, heinz_quantity_r3, kn_quantity_rn, pmc_residual,
    MeanCurvatureField,
};
use crate::expr::{self, Expr};
use crate::fdiff::{close, fd_jet};
use crate::grid::DiscGrid;
use crate::jet::{Jet, Var};
use crate::surface::{regularity_check, Builtin, Surface, SurfaceSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

/// Outcome of one named invariant check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    fn from(name: &'static str, out: Result<(bool, String)>) -> CheckResult {
        match out {
            Ok((pass, detail)) => CheckResult { name, pass, detail },
            Err(e) => CheckResult { name, pass: false, detail: format!("error: {e}") },
        }
    }
}

/// Run the complete invariant suite in a fixed, documented order.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        CheckResult::from("jet_fd_corpus", jet_fd_corpus()),
        CheckResult::from("jet_algebra_laws", jet_algebra_laws()),
        CheckResult::from("jet_mul_recip", jet_mul_recip()),
        CheckResult::from("expr_roundtrip", expr_roundtrip()),
        CheckResult::from("expr_const_eval", expr_const_eval()),
        CheckResult::from("expr_parser_fuzz", expr_parser_fuzz()),
        CheckResult::from("catalog_regularity", catalog_regularity()),
        CheckResult::from("catalog_conformality", catalog_conformality()),
        CheckResult::from("graph_identity_lift", graph_identity_lift()),
        CheckResult::from("frame_invariants", frame_invariants()),
        CheckResult::from("metric_inverse", metric_inverse()),
        CheckResult::from("eigen_consistency", eigen_consistency()),
        CheckResult::from("weingarten_residual_catalog", weingarten_residual_catalog()),
        CheckResult::from("conformal_r3_curvature_equality", conformal_r3_curvature_equality()),
        CheckResult::from("flatness_gauge_covariance", flatness_gauge_covariance()),
        CheckResult::from("curvature_tensor_curl_identity", curvature_tensor_curl_identity()),
        CheckResult::from("ricci_residual_catalog", ricci_residual_catalog()),
        CheckResult::from("synthesis_path_independence", synthesis_path_independence()),
        CheckResult::from("torsion_antisymmetry", torsion_antisymmetry()),
        CheckResult::from("sigma_grid_consistency", sigma_grid_consistency()),
        CheckResult::from("gauss_curvature_origin_bound", gauss_curvature_origin_bound()),
        CheckResult::from("curvature_sq_origin_bound_r3", curvature_sq_origin_bound_r3()),
        CheckResult::from("dilation_invariance", dilation_invariance()),
        CheckResult::from("energy_quadrature_convergence", energy_quadrature_convergence()),
        CheckResult::from("pmc_minimal_residual", pmc_minimal_residual()),
    ]
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.pass)
}

// ---------------------------------------------------------------------------
// Shared fixtures.
// ---------------------------------------------------------------------------

/// Composite expressions exercising every operator and elementary function,
/// all well-defined at the sample points below.
const CORPUS: [&str; 24] = [
    "u^2 + v^2",
    "u*v - 3*u + 2",
    "(u + v)^3",
    "u^3*v - v^3*u",
    "sin(u)*cos(v)",
    "exp(u - v^2)",
    "log(2 + u^2 + v^2)",
    "sqrt(1 + u^2 + v^2)",
    "1/(1 + u^2 + v^2)",
    "(u^2 - v^2)/(2 + u*v)",
    "sin(u*v) + cos(u - v)",
    "exp(sin(u) + cos(v))",
    "log(3 + sin(u)*v)",
    "sqrt(4 + sin(u - v))",
    "u/(v + 3)",
    "cos(u)^2 + sin(u)^2",
    "u^5 - 3*u^2*v^2 + v^4",
    "sin(cos(u + v))",
    "exp(u)*log(2 + v)",
    "sqrt((u - 2)^2 + 1)",
    "sin(2*u)*exp(v/3)",
    "log(exp(u) + exp(v))",
    "(1 + u*v)^4/(2 + u)",
    "-u^2 + v*(u - 1)^2",
];

const SAMPLE_POINTS: [(f64, f64); 3] = [(0.3, -0.4), (0.7, 0.2), (-0.5, 0.6)];

fn n4_catalog() -> Vec<Surface> {
    [Builtin::Plane, Builtin::W2, Builtin::Clifford, Builtin::Sphere, Builtin::Z3]
        .iter()
        .map(|b| Surface::builtin(*b))
        .collect()
}

fn full_catalog() -> Vec<Surface> {
    Builtin::ALL.iter().map(|b| Surface::builtin(*b)).collect()
}

fn xy_graph() -> Result<Surface> {
    Surface::from_spec(&SurfaceSpec {
        kind: "graph".into(),
        name: Some("xy".into()),
        id: None,
        n: Some(3),
        radius: Some(1.0),
        params: None,
        components: Some(vec!["x*y".into()]),
    })
}

// ---------------------------------------------------------------------------
// Jet arithmetic.
// ---------------------------------------------------------------------------

/// Every jet coefficient of the expression corpus matches a
/// Richardson-extrapolated finite-difference jet of the plain evaluation.
fn jet_fd_corpus() -> Result<(bool, String)> {
    let mut compared = 0usize;
    let mut worst: f64 = 0.0;
    let mut worst_at = String::new();
    let mut pass = true;
    for src in CORPUS {
        let e = expr::parse_expression(src, &["u", "v"])?;
        for &(u, v) in &SAMPLE_POINTS {
            let jet = expr::evaluate_on_jets(
                &e,
                &[("u", Jet::variable(Var::U, u)), ("v", Jet::variable(Var::V, v))],
            )?;
            let plain = |uu: f64, vv: f64| -> f64 {
                expr::evaluate_values(&e, &[("u", uu), ("v", vv)]).expect("corpus is total")
            };
            let fd = fd_jet(&plain, u, v);
            for (k, (a, b)) in jet.coeffs().iter().zip(fd.iter()).enumerate() {
                compared += 1;
                let dev = (a - b).abs() / a.abs().max(b.abs()).max(1.0);
                if dev > worst {
                    worst = dev;
                    worst_at = format!("`{src}` coeff {k} at ({u}, {v})");
                }
                if !close(*a, *b, 1e-5, 1e-6) {
                    pass = false;
                }
            }
        }
    }
    Ok((pass, format!("{compared} coefficients, max rel dev {worst:.3e} ({worst_at})")))
}

fn random_jet(rng: &mut ChaCha20Rng, lo: f64, hi: f64) -> Jet {
    let mut c = [0.0; 10];
    for x in &mut c {
        *x = rng.gen_range(lo..hi);
    }
    Jet::from_coeffs(c)
}

/// Commutativity and associativity of jet add/mul at rounding level.
fn jet_algebra_laws() -> Result<(bool, String)> {
    let mut rng = ChaCha20Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let a = random_jet(&mut rng, -2.0, 2.0);
        let b = random_jet(&mut rng, -2.0, 2.0);
        let c = random_jet(&mut rng, -2.0, 2.0);
        let pairs = [
            (a + b, b + a),
            (a * b, b * a),
            ((a + b) + c, a + (b + c)),
            ((a * b) * c, a * (b * c)),
        ];
        for (x, y) in pairs {
            for (p, q) in x.coeffs().iter().zip(y.coeffs().iter()) {
                worst = worst.max((p - q).abs() / p.abs().max(q.abs()).max(1.0));
            }
        }
    }
    Ok((worst <= 1e-14, format!("200 triples, max rel dev {worst:.3e} (tol 1e-14)")))
}

/// a · (1/a) equals the constant-1 jet when the value is away from zero.
fn jet_mul_recip() -> Result<(bool, String)> {
    let mut rng = ChaCha20Rng::seed_from_u64(202);
    let one = Jet::constant(1.0);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let mut a = random_jet(&mut rng, -1.0, 1.0);
        let mut c = a.coeffs();
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        c[0] = sign * rng.gen_range(0.5..2.0);
        a = Jet::from_coeffs(c);
        let prod = a * a.recip().expect("value away from zero");
        for (p, q) in prod.coeffs().iter().zip(one.coeffs().iter()) {
            worst = worst.max((p - q).abs());
        }
    }
    Ok((worst <= 1e-12, format!("200 jets, max abs dev {worst:.3e} (tol 1e-12)")))
}

// ---------------------------------------------------------------------------
// Expression pipeline.
// ---------------------------------------------------------------------------

/// pretty-print → reparse is the identity on the corpus ASTs.
fn expr_roundtrip() -> Result<(bool, String)> {
    let extra = [
        "1 - 2 - 3",
        "2^3^2",
        "-u^2",
        "(-u)^2",
        "2*(u + v)",
        "-(u*v)/(u - v - 7)",
        "u - (v - 1)",
        "1/2/3",
    ];
    let mut count = 0usize;
    for src in CORPUS.iter().chain(extra.iter()) {
        let first = expr::parse_expression(src, &["u", "v"])?;
        let printed = expr::pretty(&first);
        let second = expr::parse_expression(&printed, &["u", "v"])?;
        if first != second {
            return Ok((false, format!("`{src}` → `{printed}` reparsed differently")));
        }
        count += 1;
    }
    Ok((true, format!("{count} expressions round-tripped")))
}

/// Jet evaluation restricted to values matches plain float evaluation.
fn expr_const_eval() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for src in CORPUS {
        let e = expr::parse_expression(src, &["u", "v"])?;
        for &(u, v) in &SAMPLE_POINTS {
            let jet = expr::evaluate_on_jets(
                &e,
                &[("u", Jet::constant(u)), ("v", Jet::constant(v))],
            )?;
            let plain = expr::evaluate_values(&e, &[("u", u), ("v", v)])?;
            let dev = (jet.value() - plain).abs() / jet.value().abs().max(plain.abs()).max(1.0);
            worst = worst.max(dev);
        }
    }
    Ok((worst <= 1e-14, format!("max rel dev {worst:.3e} (tol 1e-14)")))
}

/// The parser returns errors — never panics — on random byte soup.
fn expr_parser_fuzz() -> Result<(bool, String)> {
    let charset: Vec<char> =
        "uvw+-*/^()0123456789. sincoexplgqrt,_".chars().collect();
    let mut rng = ChaCha20Rng::seed_from_u64(303);
    let mut parsed = 0usize;
    for i in 0..10_000 {
        let len = rng.gen_range(0..24);
        let s: String =
            (0..len).map(|_| charset[rng.gen_range(0..charset.len())]).collect();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
            expr::parse_expression(&s, &["u", "v"]).is_ok()
        }));
        match outcome {
            Ok(ok) => parsed += ok as usize,
            Err(_) => return Ok((false, format!("panic on fuzz input #{i}: `{s}`"))),
        }
    }
    Ok((true, format!("10000 inputs, no panics, {parsed} parsed cleanly")))
}

// ---------------------------------------------------------------------------
// Surface catalog.
// ---------------------------------------------------------------------------

/// Every catalog surface is a regular immersion on its documented domain.
fn catalog_regularity() -> Result<(bool, String)> {
    let grid = DiscGrid::new(33, 1.0)?;
    let mut min_w = f64::INFINITY;
    for s in full_catalog() {
        let rep = regularity_check(&s, &grid)?;
        if rep.failures > 0 {
            return Ok((false, format!("{}: {} degenerate nodes", s.name, rep.failures)));
        }
        min_w = min_w.min(rep.min_w);
    }
    Ok((true, format!("6 surfaces regular on 33×33; min W {min_w:.6}")))
}

/// The plane and (w, w²) satisfy the conformality relations exactly.
fn catalog_conformality() -> Result<(bool, String)> {
    let grid = DiscGrid::new(33, 1.0)?;
    let mut worst: f64 = 0.0;
    for b in [Builtin::Plane, Builtin::W2] {
        let rep = regularity_check(&Surface::builtin(b), &grid)?;
        worst = worst.max(rep.max_conformality_defect);
    }
    Ok((worst <= 1e-12, format!("max conformality defect {worst:.3e} (tol 1e-12)")))
}

/// Graph components 1 and 2 evaluate to the exact coordinate jets.
fn graph_identity_lift() -> Result<(bool, String)> {
    let s = xy_graph()?;
    for &(u, v) in &SAMPLE_POINTS {
        let x = s.jet3_at(u, v)?;
        if x.comps[0].coeffs() != Jet::variable(Var::U, u).coeffs()
            || x.comps[1].coeffs() != Jet::variable(Var::V, v).coeffs()
        {
            return Ok((false, format!("coordinate jets not exact at ({u}, {v})")));
        }
    }
    Ok((true, "coordinate jets exact at all sample points".into()))
}

// ---------------------------------------------------------------------------
// Frames and curvature identities.
// ---------------------------------------------------------------------------

fn vdot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Frame normals are unit, mutually orthogonal, and tangent-orthogonal.
fn frame_invariants() -> Result<(bool, String)> {
    let grid = DiscGrid::new(17, 1.0)?;
    let mut worst: f64 = 0.0;
    for s in full_catalog() {
        for node in grid.nodes() {
            let a = analyze_point_with_gauge(&s, node.u, node.v, None)?;
            let normals = a.frame.values();
            let xu = a.x.d1_values(0);
            let xv = a.x.d1_values(1);
            for (i, n1) in normals.iter().enumerate() {
                worst = worst.max((vdot(n1, n1) - 1.0).abs());
                worst = worst.max(vdot(n1, &xu).abs());
                worst = worst.max(vdot(n1, &xv).abs());
                for n2 in normals.iter().skip(i + 1) {
                    worst = worst.max(vdot(n1, n2).abs());
                }
            }
        }
    }
    Ok((worst <= 1e-10, format!("max orthonormality dev {worst:.3e} (tol 1e-10)")))
}

/// g · g⁻¹ = identity at rounding level.
fn metric_inverse() -> Result<(bool, String)> {
    let grid = DiscGrid::new(17, 1.0)?;
    let mut worst: f64 = 0.0;
    for s in full_catalog() {
        for node in grid.nodes() {
            let a = analyze_point_with_gauge(&s, node.u, node.v, None)?;
            let (g, gi) = (a.ff.g, a.ff.g_inv);
            for i in 0..2 {
                for j in 0..2 {
                    let prod = g[i][0] * gi[0][j] + g[i][1] * gi[1][j];
                    let id = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((prod - id).abs());
                }
            }
        }
    }
    Ok((worst <= 1e-12, format!("max |g·g⁻¹ − I| {worst:.3e} (tol 1e-12)")))
}

/// trace(g⁻¹L_Σ) = 2H_Σ and det(g⁻¹L_Σ) = K_Σ.
fn eigen_consistency() -> Result<(bool, String)> {
    let grid = DiscGrid::new(17, 1.0)?;
    let mut worst: f64 = 0.0;
    for s in full_catalog() {
        for node in grid.nodes() {
            let a = analyze_point_with_gauge(&s, node.u, node.v, None)?;
            for sec in &a.sections {
                let gi = a.ff.g_inv;
                let l = sec.l;
                // m = g⁻¹ · L_Σ (the shape operator).
                let m = [
                    [gi[0][0] * l[0][0] + gi[0][1] * l[1][0], gi[0][0] * l[0][1] + gi[0][1] * l[1][1]],
                    [gi[1][0] * l[0][0] + gi[1][1] * l[1][0], gi[1][0] * l[0][1] + gi[1][1] * l[1][1]],
                ];
                let tr = m[0][0] + m[1][1];
                let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
                let dev_h = (tr - 2.0 * sec.h).abs() / tr.abs().max(2.0 * sec.h.abs()).max(1.0);
                let dev_k = (det - sec.k).abs() / det.abs().max(sec.k.abs()).max(1.0);
                worst = worst.max(dev_h).max(dev_k);
            }
        }
    }
    Ok((worst <= 1e-10, format!("max rel dev {worst:.3e} (tol 1e-10)")))
}

/// The Weingarten decomposition residual stays at rounding level on the
/// catalog.
fn weingarten_residual_catalog() -> Result<(bool, String)> {
    let grid = DiscGrid::new(33, 1.0)?;
    let mut worst: f64 = 0.0;
    let mut at = String::new();
    for s in full_catalog() {
        for node in grid.nodes() {
            let a = analyze_point_with_gauge(&s, node.u, node.v, None)?;
            if a.weingarten_residual > worst {
                worst = a.weingarten_residual;
                at = format!("{} at ({}, {})", s.name, node.u, node.v);
            }
        }
    }
    Ok((worst <= 1e-8, format!("max residual {worst:.3e} ({at}, tol 1e-8)")))
}

/// For ℝ³ surfaces in conformal parameters, κ₁² + κ₂² = |∇N|²/W (with
/// inequality slack never below −1e−8).
fn conformal_r3_curvature_equality() -> Result<(bool, String)> {
    let grid = DiscGrid::new(17, 1.0)?;
    let s = Surface::builtin(Builtin::Enneper);
    let mut worst_eq: f64 = 0.0;
    let mut worst_slack: f64 = f64::INFINITY;
    for node in grid.nodes() {
        let a = analyze_point_with_gauge(&s, node.u, node.v, None)?;
        let sec = &a.sections[0];
        let ksq = sec.kappa[0] * sec.kappa[0] + sec.kappa[1] * sec.kappa[1];
        let normal = crate::geometry::unit_normal_r3(&a.x)?;
        let bound = crate::geometry::grad_norm_sq_r3(&normal) / a.ff.w;
        worst_slack = worst_slack.min(bound - ksq);
        worst_eq = worst_eq.max((bound - ksq).abs() / bound.abs().max(ksq.abs()).max(1.0));
    }
    let pass = worst_eq <= 1e-8 && worst_slack >= -1e-8;
    Ok((pass, format!("max rel gap {worst_eq:.3e}, min slack {worst_slack:.3e}")))
}

// ---------------------------------------------------------------------------
// Normal bundle.
// ---------------------------------------------------------------------------

/// The flatness verdict does not depend on the frame gauge.
fn flatness_gauge_covariance() -> Result<(bool, String)> {
    let grid = DiscGrid::new(17, 1.0)?;
    let gauges = ["0.3*u - 0.2*v", "u*v", "sin(u)*cos(v)"];
    let mut details = Vec::new();
    let mut pass = true;
    for (b, expect_flat) in [(Builtin::W2, false), (Builtin::Clifford, true)] {
        let s = Surface::builtin(b);
        let base = flatness_scan_with_gauge(&s, &grid, None)?;
        if base.flat != expect_flat {
            pass = false;
        }
        for g in gauges {
            let phi: Expr = expr::parse_expression(g, &["u", "v"])?;
            let rep = flatness_scan_with_gauge(&s, &grid, Some(&phi))?;
            if rep.flat != base.flat {
                pass = false;
            }
        }
        details.push(format!("{} flat={}", s.name, base.flat));
    }
    Ok((pass, format!("{} under 3 gauges + identity", details.join(", "))))
}

/// S_{1,12}² equals the torsion curl ∂_v σ_{1,1}² − ∂_u σ_{1,2}²: the
/// quadratic connection terms cancel in codimension two.
fn curvature_tensor_curl_identity() -> Result<(bool, String)> {
    let grid = DiscGrid::new(17, 1.0)?;
    let mut worst: f64 = 0.0;
    for s in n4_catalog() {
        for node in grid.nodes() {
            let a = analyze_point_with_gauge(&s, node.u, node.v, None)?;
            let t = a.torsion.as_ref().expect("n = 4");
            let nc = a.curvature.as_ref().expect("n = 4");
            let curl = t.sigma[0][0][1].d(1) - t.sigma[0][1][1].d(0);
            worst = worst.max((nc.s_1_12_2() - curl).abs());
        }
    }
    Ok((worst <= 1e-9, format!("max |S − curl σ| {worst:.3e} (tol 1e-9)")))
}

/// The Ricci identity: S matches its second-fundamental-form expression.
fn ricci_residual_catalog() -> Result<(bool, String)> {
    let grid = DiscGrid::new(17, 1.0)?;
    let mut worst: f64 = 0.0;
    let mut at = String::new();
    for s in n4_catalog() {
        for node in grid.nodes() {
            let a = analyze_point_with_gauge(&s, node.u, node.v, None)?;
            let rc = a.ricci.as_ref().expect("n = 4");
            if rc.residual > worst {
                worst = rc.residual;
                at = format!("{} at ({}, {})", s.name, node.u, node.v);
            }
        }
    }
    Ok((worst <= 1e-7, format!("max residual {worst:.3e} ({at}, tol 1e-7)")))
}

/// On flat bundles the two staircase integration orders agree to O(h²).
fn synthesis_path_independence() -> Result<(bool, String)> {
    let mut details = Vec::new();
    let mut pass = true;
    // The sphere grid stays inside the unit circle, where its frame seed
    // is smooth; see the surface catalog documentation.
    for (b, radius) in [(Builtin::Plane, 1.0), (Builtin::Clifford, 1.0), (Builtin::Sphere, 0.9)] {
        let s = Surface::builtin(b);
        let grid = DiscGrid::new(33, radius)?;
        let rep = synthesize_torsion_free(&s, &grid)?;
        let bound = 10.0 * rep.spacing * rep.spacing * (2.0 * radius);
        if rep.path_disagreement_max > bound || !rep.success {
            pass = false;
        }
        details.push(format!(
            "{} disagreement {:.3e} (bound {:.3e})",
            s.name, rep.path_disagreement_max, bound
        ));
    }
    Ok((pass, details.join(", ")))
}

/// σ and S are antisymmetric in the section indices; S also in (i, j).
fn torsion_antisymmetry() -> Result<(bool, String)> {
    let grid = DiscGrid::new(9, 0.9)?;
    let mut worst: f64 = 0.0;
    for s in n4_catalog() {
        for node in grid.nodes() {
            let a = analyze_point_with_gauge(&s, node.u, node.v, None)?;
            let t = a.torsion.as_ref().expect("n = 4");
            let nc = a.curvature.as_ref().expect("n = 4");
            for sig in 0..2 {
                for om in 0..2 {
                    for i in 0..2 {
                        worst = worst
                            .max((t.sigma[sig][i][om].value() + t.sigma[om][i][sig].value()).abs());
                        for j in 0..2 {
                            worst = worst.max((nc.s[sig][i][j][om] + nc.s[om][i][j][sig]).abs());
                            worst = worst.max((nc.s[sig][i][j][om] + nc.s[sig][j][i][om]).abs());
                        }
                    }
                }
            }
        }
    }
    Ok((worst <= 1e-10, format!("max antisymmetry dev {worst:.3e} (tol 1e-10)")))
}

/// Jet-computed torsion agrees with central differences of the frame field.
fn sigma_grid_consistency() -> Result<(bool, String)> {
    let cases = [
        (Builtin::W2, 0.3, -0.2),
        (Builtin::Clifford, 0.2, 0.4),
        (Builtin::Z3, -0.3, 0.25),
    ];
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    for (b, u, v) in cases {
        let s = Surface::builtin(b);
        let center = analyze_point_with_gauge(&s, u, v, None)?;
        let t = center.torsion.as_ref().expect("n = 4");
        let n2 = &center.frame.values()[1];
        for i in 0..2 {
            let (du, dv) = if i == 0 { (h, 0.0) } else { (0.0, h) };
            let plus = analyze_point_with_gauge(&s, u + du, v + dv, None)?.frame.values();
            let minus = analyze_point_with_gauge(&s, u - du, v - dv, None)?.frame.values();
            let mut fd = 0.0;
            for k in 0..4 {
                fd += (plus[0][k] - minus[0][k]) / (2.0 * h) * n2[k];
            }
            worst = worst.max((fd - t.sigma[0][i][1].value()).abs());
        }
    }
    Ok((worst <= 1e-3, format!("max |σ_jet − σ_grid| {worst:.3e} (tol 1e-3)")))
}

// ---------------------------------------------------------------------------
// Estimates.
// ---------------------------------------------------------------------------

/// |K_Σ(0,0)| ≤ (|X_uu||X_vv| + |X_uv|²)/W² at the origin for every
/// (conformal) catalog surface.
fn gauss_curvature_origin_bound() -> Result<(bool, String)> {
    let mut worst_slack = f64::INFINITY;
    for s in full_catalog() {
        let rep = kn_quantity_rn(&s, 1.0, 9)?;
        for k in &rep.k_abs {
            worst_slack = worst_slack.min(rep.k_bound_origin - k);
        }
    }
    Ok((worst_slack >= -1e-10, format!("min slack {worst_slack:.3e} (≥ −1e-10)")))
}

/// κ₁² + κ₂² ≤ |∇N|²/W at the origin for ℝ³ conformal graphs, with
/// equality in conformal parameters.
fn curvature_sq_origin_bound_r3() -> Result<(bool, String)> {
    let mut worst_slack = f64::INFINITY;
    let mut worst_eq: f64 = 0.0;
    for s in [Surface::builtin(Builtin::Enneper), xy_graph()?] {
        let rep = heinz_quantity_r3(&s, 1.0)?;
        worst_slack = worst_slack.min(rep.bound_quantity - rep.quantity);
        worst_eq = worst_eq.max(
            (rep.bound_quantity - rep.quantity).abs()
                / rep.bound_quantity.abs().max(rep.quantity.abs()).max(1.0),
        );
    }
    let pass = worst_slack >= -1e-10 && worst_eq <= 1e-8;
    Ok((pass, format!("min slack {worst_slack:.3e}, max rel gap {worst_eq:.3e}")))
}

/// The scaled quantities are invariant under ambient dilation.
fn dilation_invariance() -> Result<(bool, String)> {
    let xy = xy_graph()?;
    let w2 = Surface::builtin(Builtin::W2);
    let h_base = heinz_quantity_r3(&xy, 1.0)?.quantity;
    let k_base = kn_quantity_rn(&w2, 100.0, 65)?.quantities;
    let mut worst: f64 = 0.0;
    for lambda in [0.5, 2.0, 10.0] {
        let h = heinz_quantity_r3(&xy.scaled(lambda)?, lambda)?.quantity;
        worst = worst.max((h - h_base).abs() / h_base.abs().max(1e-300));
        let k = kn_quantity_rn(&w2.scaled(lambda)?, lambda * 100.0, 65)?.quantities;
        for (a, b) in k.iter().zip(k_base.iter()) {
            worst = worst.max((a - b).abs() / b.abs().max(1e-300));
        }
    }
    Ok((worst <= 1e-9, format!("max rel drift {worst:.3e} over λ ∈ {{0.5, 2, 10}}")))
}

/// The midpoint-rule energy converges under grid refinement.
fn energy_quadrature_convergence() -> Result<(bool, String)> {
    let mut details = Vec::new();
    let mut pass = true;
    for b in [Builtin::Plane, Builtin::W2, Builtin::Clifford] {
        let s = Surface::builtin(b);
        let e65 = dirichlet_energy_and_geodesic_radius(&s, &DiscGrid::new(65, 1.0)?)?
            .dirichlet_energy;
        let e129 = dirichlet_energy_and_geodesic_radius(&s, &DiscGrid::new(129, 1.0)?)?
            .dirichlet_energy;
        let e257 = dirichlet_energy_and_geodesic_radius(&s, &DiscGrid::new(257, 1.0)?)?
            .dirichlet_energy;
        let first = (e129 - e65).abs();
        let second = (e257 - e129).abs();
        if second > 4.0 * first + 1e-12 {
            pass = false;
        }
        details.push(format!("{} Δ {:.3e} → {:.3e}", s.name, first, second));
    }
    Ok((pass, details.join(", ")))
}

/// Harmonic catalog surfaces satisfy the minimal-surface system exactly.
fn pmc_minimal_residual() -> Result<(bool, String)> {
    let zero = MeanCurvatureField::zero();
    let grid = DiscGrid::new(33, 1.0)?;
    let mut worst: f64 = 0.0;
    for b in [Builtin::Plane, Builtin::W2, Builtin::Z3] {
        let rep = pmc_residual(&Surface::builtin(b), &zero, &grid)?;
        worst = worst.max(rep.max_residual);
    }
    Ok((worst <= 1e-9, format!("max residual {worst:.3e} (tol 1e-9)")))
}
