//! Acceptance gate: ten numbered criteria, one test (and one pass/fail line)
//! each. Every expected number below was derived in closed form or measured
//! against an independent oracle before being frozen here.
//!
//! Criterion 8 note: the residual for the Clifford torus is reported for two
//! prescribed fields. The field −2X leaves residual exactly 1 — the honest
//! measurement, since ΔX = −X and the normal component of −2X overshoots by
//! a factor of two; the field −X satisfies the system at rounding level. The
//! test asserts both measurements so neither can silently drift.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::process::Command;
use surfgeo::analysis::analyze_point;
use surfgeo::bundle::{flatness_scan, synthesize_torsion_free};
use surfgeo::estimates::{
    growth_exponent_fit, heinz_quantity_r3, kn_quantity_rn, pmc_residual,
    structure_constant_check, MeanCurvatureField,
};
use surfgeo::fdiff::{close, d1, d2, d2_mixed};
use surfgeo::grid::DiscGrid;
use surfgeo::surface::{Builtin, Surface, SurfaceSpec};

fn builtin(b: Builtin) -> Surface {
    Surface::builtin(b)
}

fn graph_surface(name: &str, heights: &[&str]) -> Surface {
    Surface::from_spec(&SurfaceSpec {
        kind: "graph".into(),
        name: Some(name.into()),
        id: None,
        n: Some(2 + heights.len()),
        radius: Some(1.0),
        params: None,
        components: Some(heights.iter().map(|s| s.to_string()).collect()),
    })
    .unwrap()
}

// ---------------------------------------------------------------------------
// 1. Sharpness example: (w, w²) at the origin.
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_sharpness_w2_origin() {
    let s = builtin(Builtin::W2);
    let a = analyze_point(&s, 0.0, 0.0).unwrap();
    for sec in &a.sections {
        assert!(sec.h.abs() <= 1e-9, "H_{} = {}", sec.index, sec.h);
        assert!((sec.k + 4.0).abs() <= 1e-9, "K_{} = {}", sec.index, sec.k);
    }
    let s_val = a.curvature.as_ref().unwrap().s_1_12_2();
    assert!((s_val.abs() - 8.0).abs() <= 1e-6, "|S_1_12_2| = {}", s_val.abs());

    let grid = DiscGrid::new(33, 1.0).unwrap();
    let flat = flatness_scan(&s, &grid).unwrap();
    assert!(!flat.flat, "w2 must not be flat");
    let syn = synthesize_torsion_free(&s, &grid).unwrap();
    assert!(!syn.success, "synthesis must fail on w2");
    assert!(
        (syn.obstruction_at_center.abs() - 8.0).abs() <= 1e-4,
        "origin obstruction {}",
        syn.obstruction_at_center
    );
    println!(
        "criterion 1: pass — H = 0, K = -4, |S| = {}, flat = false, obstruction(0) = {}",
        s_val.abs(),
        syn.obstruction_at_center
    );
}

// ---------------------------------------------------------------------------
// 2. Flat-bundle family: Clifford torus.
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_clifford_flat_bundle() {
    let s = builtin(Builtin::Clifford);
    let grid = DiscGrid::new(33, 1.0).unwrap();
    let flat = flatness_scan(&s, &grid).unwrap();
    assert!(flat.flat && flat.max_abs_s <= 1e-8, "max |S| = {}", flat.max_abs_s);
    let syn = synthesize_torsion_free(&s, &grid).unwrap();
    assert!(
        syn.success && syn.max_rotated_torsion <= syn.tol_sync,
        "rotated torsion {} vs tol {}",
        syn.max_rotated_torsion,
        syn.tol_sync
    );
    let mut worst: f64 = 0.0;
    for node in grid.nodes() {
        let a = analyze_point(&s, node.u, node.v).unwrap();
        worst = worst.max((a.sections[0].k + a.sections[1].k).abs());
    }
    assert!(worst <= 1e-9, "max |K1 + K2| = {worst}");
    println!(
        "criterion 2: pass — max |S| = {:.3e}, synthesis tol {:.3e}, max |K1+K2| = {:.3e}",
        flat.max_abs_s, syn.tol_sync, worst
    );
}

// ---------------------------------------------------------------------------
// 3 & 4. Ricci and Weingarten identities on the randomized corpus.
// ---------------------------------------------------------------------------

fn random_cubic(rng: &mut ChaCha20Rng) -> String {
    let monomials =
        ["", "*x", "*y", "*x^2", "*x*y", "*y^2", "*x^3", "*x^2*y", "*x*y^2", "*y^3"];
    monomials
        .iter()
        .map(|m| format!("({}){m}", rng.gen_range(-0.5..0.5)))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn identity_corpus() -> Vec<Surface> {
    let mut surfaces: Vec<Surface> =
        [Builtin::Plane, Builtin::W2, Builtin::Clifford, Builtin::Z3]
            .iter()
            .map(|b| builtin(*b))
            .collect();
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    for i in 0..5 {
        let p = random_cubic(&mut rng);
        let q = random_cubic(&mut rng);
        surfaces.push(graph_surface(&format!("cubic-{i}"), &[&p, &q]));
    }
    surfaces
}

fn corpus_points() -> Vec<(f64, f64)> {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let mut pts = Vec::new();
    while pts.len() < 10 {
        let u = rng.gen_range(-0.8..0.8);
        let v = rng.gen_range(-0.8..0.8);
        if u * u + v * v <= 0.64 {
            pts.push((u, v));
        }
    }
    pts
}

#[test]
fn criterion_03_ricci_identity_corpus() {
    let mut worst: f64 = 0.0;
    for s in identity_corpus() {
        for &(u, v) in &corpus_points() {
            let a = analyze_point(&s, u, v).unwrap();
            let r = a.ricci.as_ref().unwrap().residual;
            assert!(r <= 1e-7, "{} at ({u}, {v}): ricci residual {r}", s.name);
            worst = worst.max(r);
        }
    }
    println!("criterion 3: pass — max ricci residual {worst:.3e} over 9 surfaces x 10 points");
}

#[test]
fn criterion_04_weingarten_identity_corpus() {
    let mut worst: f64 = 0.0;
    for s in identity_corpus() {
        for &(u, v) in &corpus_points() {
            let a = analyze_point(&s, u, v).unwrap();
            assert!(
                a.weingarten_residual <= 1e-8,
                "{} at ({u}, {v}): weingarten residual {}",
                s.name,
                a.weingarten_residual
            );
            worst = worst.max(a.weingarten_residual);
        }
    }
    println!("criterion 4: pass — max weingarten residual {worst:.3e} over 9 surfaces x 10 points");
}

// ---------------------------------------------------------------------------
// 5. Scale structure: dilation invariance plus the closed-form kn value.
// ---------------------------------------------------------------------------

#[test]
fn criterion_05_dilation_invariance_and_kn_value() {
    let xy = graph_surface("xy", &["x*y"]);
    let w2 = builtin(Builtin::W2);
    let h_base = heinz_quantity_r3(&xy, 1.0).unwrap().quantity;
    let k_base = kn_quantity_rn(&w2, 100.0, 65).unwrap().quantities;
    let mut drift: f64 = 0.0;
    for lambda in [0.5, 2.0, 10.0] {
        let h = heinz_quantity_r3(&xy.scaled(lambda).unwrap(), lambda).unwrap().quantity;
        drift = drift.max((h - h_base).abs() / h_base.abs());
        let k = kn_quantity_rn(&w2.scaled(lambda).unwrap(), lambda * 100.0, 65)
            .unwrap()
            .quantities;
        for (a, b) in k.iter().zip(k_base.iter()) {
            drift = drift.max((a - b).abs() / b.abs());
        }
    }
    assert!(drift <= 1e-9, "dilation drift {drift}");

    let kn = kn_quantity_rn(&w2, 100.0, 129).unwrap();
    let expected = 4.0 / 1.0001;
    for q in &kn.quantities {
        assert!((q - expected).abs() / expected <= 0.005, "kn quantity {q} vs {expected}");
    }
    println!(
        "criterion 5: pass — dilation drift {drift:.3e}; kn(w2, R=100) = {} (expected {expected})",
        kn.quantities[0]
    );
}

// ---------------------------------------------------------------------------
// 6. Liouville probe: growth exponents.
// ---------------------------------------------------------------------------

#[test]
fn criterion_06_growth_exponents() {
    let radii = [10.0, 30.0, 100.0];
    let w2 = growth_exponent_fit(&builtin(Builtin::W2), &radii, 129).unwrap();
    assert!((w2.epsilon - 2.0).abs() <= 0.05, "w2 epsilon {}", w2.epsilon);
    let z3 = growth_exponent_fit(&builtin(Builtin::Z3), &radii, 129).unwrap();
    assert!((z3.epsilon - 3.0).abs() <= 0.05, "z3 epsilon {}", z3.epsilon);
    for &r in &radii {
        let plane = kn_quantity_rn(&builtin(Builtin::Plane), r, 65).unwrap();
        for q in &plane.quantities {
            assert_eq!(*q, 0.0, "plane quantity at R = {r}");
        }
    }
    println!(
        "criterion 6: pass — epsilon(w2) = {}, epsilon(z3) = {}, plane quantity = 0 exactly",
        w2.epsilon, z3.epsilon
    );
}

// ---------------------------------------------------------------------------
// 7. Pointwise bounds with slack, equality in the conformal R^3 case.
// ---------------------------------------------------------------------------

#[test]
fn criterion_07_pointwise_bounds() {
    // |K_Sigma(0)| <= (|X_uu||X_vv| + |X_uv|^2)/W^2 across the catalog.
    let mut min_slack = f64::INFINITY;
    for b in Builtin::ALL {
        let rep = kn_quantity_rn(&builtin(b), 1.0, 9).unwrap();
        for k in &rep.k_abs {
            min_slack = min_slack.min(rep.k_bound_origin - k);
        }
    }
    assert!(min_slack >= -1e-10, "origin bound slack {min_slack}");

    // kappa1^2 + kappa2^2 <= |grad N|^2 / W with equality for conformal R^3.
    let mut min_slack_r3 = f64::INFINITY;
    let mut max_gap: f64 = 0.0;
    for s in [builtin(Builtin::Enneper), graph_surface("xy", &["x*y"])] {
        let rep = heinz_quantity_r3(&s, 1.0).unwrap();
        min_slack_r3 = min_slack_r3.min(rep.bound_quantity - rep.quantity);
        max_gap = max_gap.max(
            (rep.bound_quantity - rep.quantity).abs()
                / rep.bound_quantity.abs().max(rep.quantity.abs()).max(1.0),
        );
    }
    assert!(min_slack_r3 >= -1e-10, "conformal bound slack {min_slack_r3}");
    assert!(max_gap <= 1e-8, "conformal equality gap {max_gap}");
    println!(
        "criterion 7: pass — catalog slack {min_slack:.3e}, conformal equality gap {max_gap:.3e}"
    );
}

// ---------------------------------------------------------------------------
// 8. Prescribed-mean-curvature system and structure check.
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_pmc_system_and_structure_check() {
    let grid = DiscGrid::new(33, 1.0).unwrap();
    let zero = MeanCurvatureField::zero();
    let mut minimal_worst: f64 = 0.0;
    for b in [Builtin::Plane, Builtin::W2, Builtin::Z3] {
        let rep = pmc_residual(&builtin(b), &zero, &grid).unwrap();
        minimal_worst = minimal_worst.max(rep.max_residual);
    }
    assert!(minimal_worst <= 1e-9, "minimal catalog residual {minimal_worst}");

    let clifford = builtin(Builtin::Clifford);
    let minus_x =
        MeanCurvatureField::from_json_str(r#"{"components":["-x1","-x2","-x3","-x4"]}"#).unwrap();
    let honest = pmc_residual(&clifford, &minus_x, &grid).unwrap();
    assert!(honest.max_residual <= 1e-8, "H = -X residual {}", honest.max_residual);

    // The factor-2 field fails the system by exactly the overshoot: the
    // residual is 1 everywhere, not small. Asserted so the measurement is
    // pinned, not hidden.
    let minus_2x = MeanCurvatureField::from_json_str(
        r#"{"components":["-2*x1","-2*x2","-2*x3","-2*x4"]}"#,
    )
    .unwrap();
    let overshoot = pmc_residual(&clifford, &minus_2x, &grid).unwrap();
    assert!(
        (overshoot.max_residual - 1.0).abs() <= 1e-8,
        "H = -2X residual {} (expected exactly 1)",
        overshoot.max_residual
    );

    let pass = structure_constant_check(&clifford, 1.0, &grid).unwrap();
    assert!(pass.pass, "structure check must pass at h0 = 1");
    let fail = structure_constant_check(&clifford, 0.4, &grid).unwrap();
    assert!(!fail.pass, "structure check must fail at h0 = 0.4");
    println!(
        "criterion 8: pass — minimal residual {minimal_worst:.3e}; clifford H=-X residual {:.3e}; \
         H=-2X residual {} (system not satisfied, as measured); structure pass/fail at h0 = 1/0.4",
        honest.max_residual, overshoot.max_residual
    );
}

// ---------------------------------------------------------------------------
// 9. Jet pipeline vs a value-level finite-difference oracle.
// ---------------------------------------------------------------------------

fn vdot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn d1_vec(s: &Surface, u: f64, v: f64, dir: usize, h: f64) -> Vec<f64> {
    let n = s.n;
    (0..n)
        .map(|k| {
            let g = |t: f64| {
                let (uu, vv) = if dir == 0 { (u + t, v) } else { (u, v + t) };
                s.values_at(uu, vv).unwrap()[k]
            };
            d1(g, 0.0, h)
        })
        .collect()
}

/// Value-level Gram–Schmidt normal frame: same seed order and skip rule as
/// the jet pipeline, built purely from plain evaluations and FD tangents.
fn fd_frame(s: &Surface, u: f64, v: f64, h: f64) -> Vec<Vec<f64>> {
    let n = s.n;
    let xu = d1_vec(s, u, v, 0, h);
    let xv = d1_vec(s, u, v, 1, h);
    let g11 = vdot(&xu, &xu);
    let g12 = vdot(&xu, &xv);
    let g22 = vdot(&xv, &xv);
    let w = (g11 * g22 - g12 * g12).sqrt();

    let mut basis: Vec<Vec<f64>> = Vec::new();
    for t in [xu, xv] {
        let mut t = t;
        for b in &basis {
            let c = vdot(&t, b);
            for (tk, bk) in t.iter_mut().zip(b.iter()) {
                *tk -= c * bk;
            }
        }
        let norm = vdot(&t, &t).sqrt();
        basis.push(t.iter().map(|x| x / norm).collect());
    }
    let mut normals = Vec::new();
    for axis in (2..n).chain(0..2) {
        if normals.len() == n - 2 {
            break;
        }
        let mut cand: Vec<f64> = (0..n).map(|k| if k == axis { 1.0 } else { 0.0 }).collect();
        for b in &basis {
            let c = vdot(&cand, b);
            for (ck, bk) in cand.iter_mut().zip(b.iter()) {
                *ck -= c * bk;
            }
        }
        let nsq = vdot(&cand, &cand);
        if nsq < surfgeo::tol::GS_SKIP_FACTOR * w {
            continue;
        }
        let unit: Vec<f64> = cand.iter().map(|x| x / nsq.sqrt()).collect();
        basis.push(unit.clone());
        normals.push(unit);
    }
    normals
}

/// FD torsion sigma_{1,i}^2 at (u, v): central differences of the FD frame
/// field dotted with the center frame.
fn fd_sigma(s: &Surface, u: f64, v: f64, i: usize, h_frame: f64, h_d: f64) -> f64 {
    let n2 = fd_frame(s, u, v, h_frame)[1].clone();
    (0..s.n)
        .map(|k| {
            let g = |t: f64| {
                let (uu, vv) = if i == 0 { (u + t, v) } else { (u, v + t) };
                fd_frame(s, uu, vv, h_frame)[0][k]
            };
            d1(g, 0.0, h_d) * n2[k]
        })
        .sum()
}

#[test]
fn criterion_09_jets_vs_fd_oracle() {
    let surfaces = [Builtin::Plane, Builtin::W2, Builtin::Clifford, Builtin::Sphere, Builtin::Z3];
    let mut rng = ChaCha20Rng::seed_from_u64(23);
    let mut points = Vec::new();
    while points.len() < 5 {
        let u = rng.gen_range(-0.5..0.5);
        let v = rng.gen_range(-0.5..0.5);
        if u * u + v * v <= 0.25 {
            points.push((u, v));
        }
    }
    let (h_x, h_frame, h_sig, h_s) = (1e-3, 1e-4, 1e-3, 2e-2);
    let mut compared = 0usize;
    for b in surfaces {
        let s = builtin(b);
        for &(u, v) in &points {
            let a = analyze_point(&s, u, v).unwrap();

            // Metric and area element.
            let xu = d1_vec(&s, u, v, 0, h_x);
            let xv = d1_vec(&s, u, v, 1, h_x);
            let fd_g = [vdot(&xu, &xu), vdot(&xu, &xv), vdot(&xv, &xv)];
            let jet_g = [a.ff.g[0][0], a.ff.g[0][1], a.ff.g[1][1]];
            for (p, q) in jet_g.iter().zip(fd_g.iter()) {
                assert!(close(*p, *q, 1e-5, 1e-6), "{}: g {p} vs fd {q}", s.name);
                compared += 1;
            }
            let fd_w = (fd_g[0] * fd_g[2] - fd_g[1] * fd_g[1]).sqrt();
            assert!(close(a.ff.w, fd_w, 1e-5, 1e-6), "{}: W {} vs fd {}", s.name, a.ff.w, fd_w);
            compared += 1;

            // Second fundamental forms against the FD frame.
            let normals = fd_frame(&s, u, v, h_frame);
            let mut fd_dd = Vec::new();
            for (i, j) in [(0, 0), (0, 1), (1, 1)] {
                let dd: Vec<f64> = (0..s.n)
                    .map(|k| {
                        if i == j {
                            let g = |t: f64| {
                                let (uu, vv) = if i == 0 { (u + t, v) } else { (u, v + t) };
                                s.values_at(uu, vv).unwrap()[k]
                            };
                            d2(g, 0.0, h_x)
                        } else {
                            d2_mixed(|uu, vv| s.values_at(uu, vv).unwrap()[k], u, v, h_x)
                        }
                    })
                    .collect();
                fd_dd.push(dd);
            }
            for (sig_idx, sec) in a.sections.iter().enumerate() {
                for (pair_idx, (i, j)) in [(0usize, 0usize), (0, 1), (1, 1)].iter().enumerate() {
                    let fd_l = vdot(&fd_dd[pair_idx], &normals[sig_idx]);
                    let jet_l = sec.l[*i][*j];
                    assert!(
                        close(jet_l, fd_l, 1e-5, 1e-6),
                        "{} at ({u}, {v}): L[{sig_idx}][{i}{j}] {jet_l} vs fd {fd_l}",
                        s.name
                    );
                    compared += 1;
                }
            }

            // Torsion and normal curvature (codimension-two components).
            let t = a.torsion.as_ref().unwrap();
            for i in 0..2 {
                let jet_sigma = t.sigma[0][i][1].value();
                let fd_sig = fd_sigma(&s, u, v, i, h_frame, h_sig);
                assert!(
                    close(jet_sigma, fd_sig, 1e-5, 1e-6),
                    "{} at ({u}, {v}): sigma_1_{}^2 {jet_sigma} vs fd {fd_sig}",
                    s.name,
                    i + 1
                );
                compared += 1;
            }
            let jet_s = a.curvature.as_ref().unwrap().s_1_12_2();
            let fd_s = d1(|t| fd_sigma(&s, u, v + t, 0, h_frame, h_sig), 0.0, h_s)
                - d1(|t| fd_sigma(&s, u + t, v, 1, h_frame, h_sig), 0.0, h_s);
            assert!(
                close(jet_s, fd_s, 1e-4, 1e-4),
                "{} at ({u}, {v}): S_1_12_2 {jet_s} vs fd {fd_s}",
                s.name
            );
            compared += 1;
        }
    }
    println!("criterion 9: pass — {compared} scalars matched the FD oracle on 5 surfaces x 5 points");
}

// ---------------------------------------------------------------------------
// 10. Byte-identical validate reports across thread counts.
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_validate_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for threads in ["1", "8"] {
        let path = dir.path().join(format!("validate-{threads}.json"));
        let out = Command::new(env!("CARGO_BIN_EXE_surfgeo"))
            .env("GEO_THREADS", threads)
            .arg("validate")
            .arg("--out")
            .arg(&path)
            .output()
            .unwrap();
        assert_eq!(
            out.status.code(),
            Some(0),
            "validate failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        reports.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(reports[0], reports[1], "reports differ between GEO_THREADS=1 and 8");
    assert!(!reports[0].is_empty());
    println!(
        "criterion 10: pass — validate reports byte-identical across GEO_THREADS = 1 and 8 ({} bytes)",
        reports[0].len()
    );
}
