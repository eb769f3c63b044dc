//! Quantitative curvature-estimate experiments.
//!
//! Each function here turns one analytic estimate into a measurable number
//! on a concrete surface: pointwise curvature bounds with their slack,
//! dilation-invariant quantities, growth exponents of the sup norm, residuals
//! of the prescribed-mean-curvature system, Dirichlet energy with a
//! ray-based geodesic-radius upper bound, normal-direction angles, and a
//! Hölder-condition falsifier for prescribed fields.

use crate::analysis::analyze_point_with_gauge;
use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::geometry::{first_fundamental_form, grad_norm_sq_r3, unit_normal_r3};
use crate::grid::DiscGrid;
use crate::surface::{dot, Surface};
use crate::tol;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

// ---------------------------------------------------------------------------
// Prescribed mean-curvature fields.
// ---------------------------------------------------------------------------

/// Raw JSON document for a prescribed field 𝓗: ℝ⁴ → ℝ⁴ with its structure
/// constants: `h0` (sup bound), `h1`, `h2`, `alpha` (Hölder data).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub components: Vec<String>,
    #[serde(default)]
    pub h0: f64,
    #[serde(default)]
    pub h1: f64,
    #[serde(default)]
    pub h2: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

fn default_alpha() -> f64 {
    1.0
}

/// A compiled prescribed mean-curvature field. The four components are
/// expressions in the ambient position variables `x1 … x4`.
#[derive(Debug, Clone)]
pub struct MeanCurvatureField {
    pub components: Vec<Expr>,
    pub h0: f64,
    pub h1: f64,
    pub h2: f64,
    pub alpha: f64,
}

impl MeanCurvatureField {
    /// The zero field (minimal-surface system).
    pub fn zero() -> MeanCurvatureField {
        let zero = expr::parse_expression("0", &[]).expect("constant parses");
        MeanCurvatureField {
            components: vec![zero.clone(), zero.clone(), zero.clone(), zero],
            h0: 0.0,
            h1: 0.0,
            h2: 0.0,
            alpha: 1.0,
        }
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<MeanCurvatureField> {
        if spec.components.len() != 4 {
            return Err(Error::Spec(format!(
                "a mean-curvature field needs 4 components, got {}",
                spec.components.len()
            )));
        }
        if !(spec.alpha > 0.0 && spec.alpha <= 1.0) {
            return Err(Error::Spec(format!(
                "alpha must lie in (0, 1], got {}",
                spec.alpha
            )));
        }
        let components = spec
            .components
            .iter()
            .map(|src| expr::parse_expression(src, &["x1", "x2", "x3", "x4"]))
            .collect::<Result<Vec<_>>>()?;
        Ok(MeanCurvatureField {
            components,
            h0: spec.h0,
            h1: spec.h1,
            h2: spec.h2,
            alpha: spec.alpha,
        })
    }

    pub fn from_json_str(text: &str) -> Result<MeanCurvatureField> {
        let spec: FieldSpec =
            serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        MeanCurvatureField::from_spec(&spec)
    }

    pub fn load(path: &std::path::Path) -> Result<MeanCurvatureField> {
        let text = std::fs::read_to_string(path)?;
        MeanCurvatureField::from_json_str(&text)
    }

    /// Evaluate the field at an ambient position.
    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        let bindings = [
            ("x1", x.first().copied().unwrap_or(0.0)),
            ("x2", x.get(1).copied().unwrap_or(0.0)),
            ("x3", x.get(2).copied().unwrap_or(0.0)),
            ("x4", x.get(3).copied().unwrap_or(0.0)),
        ];
        self.components
            .iter()
            .map(|c| expr::evaluate_values(c, &bindings))
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Pointwise curvature bounds and scale-invariant quantities.
// ---------------------------------------------------------------------------

/// Curvature data of an ℝ³ surface at the disc center, scaled by R².
#[derive(Debug, Clone, Serialize)]
pub struct HeinzReport {
    pub surface: String,
    pub r: f64,
    /// κ₁² + κ₂² at the origin.
    pub kappa_sq_sum: f64,
    /// |∇N|²/W at the origin (= κ₁² + κ₂² in conformal parameters).
    pub grad_bound: f64,
    /// (κ₁² + κ₂²)(0) · R² — the dilation-invariant quantity.
    pub quantity: f64,
    /// |∇N|²/W (0) · R².
    pub bound_quantity: f64,
    pub conformality_defect: f64,
}

/// The scale-invariant curvature quantity (κ₁² + κ₂²)(0)·R² for a conformal
/// ℝ³ immersion that is a graph over the disc of radius `r_graph`.
pub fn heinz_quantity_r3(surface: &Surface, r_graph: f64) -> Result<HeinzReport> {
    if surface.n != 3 {
        return Err(Error::Dimension { expected: 3, got: surface.n });
    }
    // The κ² + κ² ≤ Θ/R² statement presumes conformal parameters at the
    // center, so this gate is tighter than the grid-wide conformality gate.
    const TOL_CENTER: f64 = 1e-8;
    let defect = {
        let x = surface.jet3_at(0.0, 0.0)?;
        let ff = first_fundamental_form(&x)?;
        ((ff.g[0][0] - ff.g[1][1]).abs().max(ff.g[0][1].abs())) / ff.w.max(tol::EPS_REG)
    };
    if defect > TOL_CENTER {
        return Err(Error::NonConformal { u: 0.0, v: 0.0, defect, tol: TOL_CENTER });
    }
    let a = analyze_point_with_gauge(surface, 0.0, 0.0, None)?;
    let sec = &a.sections[0];
    let ksq = sec.kappa[0] * sec.kappa[0] + sec.kappa[1] * sec.kappa[1];
    let normal = unit_normal_r3(&a.x)?;
    let bound = grad_norm_sq_r3(&normal) / a.ff.w;
    Ok(HeinzReport {
        surface: surface.name.clone(),
        r: r_graph,
        kappa_sq_sum: ksq,
        grad_bound: bound,
        quantity: ksq * r_graph * r_graph,
        bound_quantity: bound * r_graph * r_graph,
        conformality_defect: defect,
    })
}

/// Per-section Gauss-curvature quantity |K_Σ(0)|·R⁴/‖X‖²_{C⁰(B_R)}.
#[derive(Debug, Clone, Serialize)]
pub struct KnReport {
    pub surface: String,
    pub r: f64,
    pub grid_size: usize,
    pub sup_norm: f64,
    /// |K_Σ(0)| per normal section.
    pub k_abs: Vec<f64>,
    /// |K_Σ(0)|·R⁴ / sup².
    pub quantities: Vec<f64>,
    /// Pointwise bound at the origin: (|X_uu||X_vv| + |X_uv|²)/W².
    pub k_bound_origin: f64,
    /// |ΔX(0)| — zero for harmonic (minimal, conformal) immersions.
    pub harmonicity_residual: f64,
}

fn sup_norm_on_grid(surface: &Surface, grid: &DiscGrid) -> Result<f64> {
    let nodes = grid.nodes();
    let norms: Vec<f64> = nodes
        .par_iter()
        .map(|n| {
            let x = surface.values_at(n.u, n.v)?;
            Ok(dot(&x, &x).sqrt())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sup: f64 = 0.0;
    for v in norms {
        sup = sup.max(v);
    }
    Ok(sup)
}

/// Compute the Gauss-curvature quantity of every normal section. `r_graph`
/// is the ambient graph radius; for a surface dilated by λ the parameter
/// grid keeps radius `r_graph`/λ, so dilation leaves the quantity invariant.
pub fn kn_quantity_rn(surface: &Surface, r_graph: f64, grid_size: usize) -> Result<KnReport> {
    if !(r_graph > 0.0) || !r_graph.is_finite() {
        return Err(Error::Config(format!("R must be positive, got {r_graph}")));
    }
    let grid = DiscGrid::new(grid_size, r_graph / surface.scale())?;
    let sup = sup_norm_on_grid(surface, &grid)?;
    if !(sup > 1e-300) {
        return Err(Error::Numerics(
            "sup norm of the immersion vanishes on the sample grid".into(),
        ));
    }
    let a = analyze_point_with_gauge(surface, 0.0, 0.0, None)?;
    let k_abs: Vec<f64> = a.sections.iter().map(|s| s.k.abs()).collect();
    let r4 = r_graph * r_graph * r_graph * r_graph;
    let quantities: Vec<f64> = k_abs.iter().map(|k| k * r4 / (sup * sup)).collect();
    let xuu = a.x.d2_values(0, 0);
    let xvv = a.x.d2_values(1, 1);
    let xuv = a.x.d2_values(0, 1);
    let k_bound = (dot(&xuu, &xuu).sqrt() * dot(&xvv, &xvv).sqrt() + dot(&xuv, &xuv))
        / (a.ff.w * a.ff.w);
    let lap: Vec<f64> = xuu.iter().zip(xvv.iter()).map(|(a, b)| a + b).collect();
    Ok(KnReport {
        surface: surface.name.clone(),
        r: r_graph,
        grid_size,
        sup_norm: sup,
        k_abs,
        quantities,
        k_bound_origin: k_bound,
        harmonicity_residual: dot(&lap, &lap).sqrt(),
    })
}

/// Least-squares fit of ‖X‖_{C⁰(B_R)} ≈ Ω·R^ε from a radius sweep.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthFit {
    pub surface: String,
    pub grid_size: usize,
    /// (R, sup norm) pairs actually measured.
    pub points: Vec<(f64, f64)>,
    pub omega: f64,
    pub epsilon: f64,
    /// True when all sup norms coincide; then epsilon is reported as 0.
    pub degenerate: bool,
}

pub fn growth_exponent_fit(
    surface: &Surface,
    radii: &[f64],
    grid_size: usize,
) -> Result<GrowthFit> {
    if radii.len() < 3 {
        return Err(Error::Config(
            "growth fit needs at least three radii (pass --R a,b,c,…)".into(),
        ));
    }
    let mut points = Vec::with_capacity(radii.len());
    for &r in radii {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Config(format!("radii must be positive, got {r}")));
        }
        let grid = DiscGrid::new(grid_size, r / surface.scale())?;
        let sup = sup_norm_on_grid(surface, &grid)?;
        if !(sup > 1e-300) {
            return Err(Error::Numerics(format!(
                "sup norm vanishes on the grid of radius {r}"
            )));
        }
        points.push((r, sup));
    }
    // Degenerate sweep: identical sup norms carry no slope information.
    let s0 = points[0].1;
    if points.iter().all(|(_, s)| (s - s0).abs() <= 1e-14 * s0.abs()) {
        return Ok(GrowthFit {
            surface: surface.name.clone(),
            grid_size,
            points,
            omega: s0,
            epsilon: 0.0,
            degenerate: true,
        });
    }
    // Least squares on (ln R, ln sup).
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for (r, s) in &points {
        let (x, y) = (r.ln(), s.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return Err(Error::Config("growth fit needs distinct radii".into()));
    }
    let epsilon = (n * sxy - sx * sy) / denom;
    let omega = ((sy - epsilon * sx) / n).exp();
    Ok(GrowthFit {
        surface: surface.name.clone(),
        grid_size,
        points,
        omega,
        epsilon,
        degenerate: false,
    })
}

// ---------------------------------------------------------------------------
// Prescribed mean-curvature system and structure condition.
// ---------------------------------------------------------------------------

/// Residual of ΔX = 2H₁WN₁ + 2H₂WN₂ with H_Σ = 𝓗(X)·N_Σ over a grid.
#[derive(Debug, Clone, Serialize)]
pub struct PmcReport {
    pub surface: String,
    pub grid_size: usize,
    pub radius: f64,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub argmax_u: f64,
    pub argmax_v: f64,
    pub max_conformality_defect: f64,
}

pub fn pmc_residual(
    surface: &Surface,
    field: &MeanCurvatureField,
    grid: &DiscGrid,
) -> Result<PmcReport> {
    if surface.n != 4 {
        return Err(Error::Dimension { expected: 4, got: surface.n });
    }
    let nodes = grid.nodes();
    let rows: Vec<(f64, f64)> = nodes
        .par_iter()
        .map(|node| {
            let a = analyze_point_with_gauge(surface, node.u, node.v, None)?;
            if a.conformality_defect > tol::TOL_CONFORMAL {
                return Err(Error::NonConformal {
                    u: node.u,
                    v: node.v,
                    defect: a.conformality_defect,
                    tol: tol::TOL_CONFORMAL,
                });
            }
            let pos = a.x.values();
            let h_vec = field.eval(&pos)?;
            let frame = a.frame.values();
            let h1 = dot(&h_vec, &frame[0]);
            let h2 = dot(&h_vec, &frame[1]);
            let xuu = a.x.d2_values(0, 0);
            let xvv = a.x.d2_values(1, 1);
            let mut resid_sq = 0.0;
            for c in 0..4 {
                let lap = xuu[c] + xvv[c];
                let want = 2.0 * a.ff.w * (h1 * frame[0][c] + h2 * frame[1][c]);
                resid_sq += (lap - want) * (lap - want);
            }
            Ok((resid_sq.sqrt(), a.conformality_defect))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut max_res: f64 = 0.0;
    let mut argmax = (0.0, 0.0);
    let mut sum = 0.0;
    let mut max_defect: f64 = 0.0;
    for (node, (res, defect)) in nodes.iter().zip(rows.iter()) {
        if *res > max_res {
            max_res = *res;
            argmax = (node.u, node.v);
        }
        sum += res;
        max_defect = max_defect.max(*defect);
    }
    Ok(PmcReport {
        surface: surface.name.clone(),
        grid_size: grid.size,
        radius: grid.radius,
        max_residual: max_res,
        mean_residual: if nodes.is_empty() { 0.0 } else { sum / nodes.len() as f64 },
        argmax_u: argmax.0,
        argmax_v: argmax.1,
        max_conformality_defect: max_defect,
    })
}

/// Check of the structure condition |ΔX| ≤ 2h₀·|∇X|² over a grid.
#[derive(Debug, Clone, Serialize)]
pub struct StructureReport {
    pub surface: String,
    pub grid_size: usize,
    pub radius: f64,
    pub h0: f64,
    /// max over the grid of |ΔX| / |∇X|².
    pub max_ratio: f64,
    pub argmax_u: f64,
    pub argmax_v: f64,
    /// max_ratio ≤ 2h₀ (up to rounding slack).
    pub pass: bool,
}

pub fn structure_constant_check(
    surface: &Surface,
    h0: f64,
    grid: &DiscGrid,
) -> Result<StructureReport> {
    if !(h0 >= 0.0) || !h0.is_finite() {
        return Err(Error::Config(format!("h0 must be nonnegative, got {h0}")));
    }
    let nodes = grid.nodes();
    let ratios: Vec<f64> = nodes
        .par_iter()
        .map(|node| {
            let x = surface.jet3_at(node.u, node.v)?;
            let ff = first_fundamental_form(&x)?;
            let xuu = x.d2_values(0, 0);
            let xvv = x.d2_values(1, 1);
            let lap: Vec<f64> = xuu.iter().zip(xvv.iter()).map(|(a, b)| a + b).collect();
            // |∇X|² = g11 + g22 ≥ 2W > 0 at regular points.
            Ok(dot(&lap, &lap).sqrt() / (ff.g[0][0] + ff.g[1][1]))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut max_ratio: f64 = 0.0;
    let mut argmax = (0.0, 0.0);
    for (node, r) in nodes.iter().zip(ratios.iter()) {
        if *r > max_ratio {
            max_ratio = *r;
            argmax = (node.u, node.v);
        }
    }
    Ok(StructureReport {
        surface: surface.name.clone(),
        grid_size: grid.size,
        radius: grid.radius,
        h0,
        max_ratio,
        argmax_u: argmax.0,
        argmax_v: argmax.1,
        pass: max_ratio <= 2.0 * h0 + 1e-10,
    })
}

// ---------------------------------------------------------------------------
// Normal-direction angles.
// ---------------------------------------------------------------------------

/// Minimum angle between the normal directions and the first coordinate
/// axis: min over grid nodes and frame normals of arccos |N_Σ · e₁|.
#[derive(Debug, Clone, Serialize)]
pub struct OssermanReport {
    pub surface: String,
    pub grid_size: usize,
    pub radius: f64,
    pub min_angle: f64,
    /// sin of the minimum angle (the same minimizer: both are monotone on
    /// [0, π/2]).
    pub min_sin: f64,
    pub argmin_u: f64,
    pub argmin_v: f64,
    /// 1-based index of the normal achieving the minimum.
    pub section: usize,
    pub per_section_min: Vec<f64>,
}

pub fn osserman_angle(surface: &Surface, grid: &DiscGrid) -> Result<OssermanReport> {
    let nodes = grid.nodes();
    let rows: Vec<Vec<f64>> = nodes
        .par_iter()
        .map(|node| {
            let a = analyze_point_with_gauge(surface, node.u, node.v, None)?;
            Ok(a.frame
                .values()
                .iter()
                .map(|n| n[0].abs().clamp(0.0, 1.0).acos())
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let m = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut per_section = vec![f64::INFINITY; m];
    let mut min_angle = f64::INFINITY;
    let mut argmin = (0.0, 0.0);
    let mut section = 1;
    for (node, angles) in nodes.iter().zip(rows.iter()) {
        for (s, &ang) in angles.iter().enumerate() {
            if ang < per_section[s] {
                per_section[s] = ang;
            }
            if ang < min_angle {
                min_angle = ang;
                argmin = (node.u, node.v);
                section = s + 1;
            }
        }
    }
    Ok(OssermanReport {
        surface: surface.name.clone(),
        grid_size: grid.size,
        radius: grid.radius,
        min_angle,
        min_sin: min_angle.sin(),
        argmin_u: argmin.0,
        argmin_v: argmin.1,
        section,
        per_section_min: per_section,
    })
}

// ---------------------------------------------------------------------------
// Dirichlet energy and geodesic radius.
// ---------------------------------------------------------------------------

/// Midpoint-rule Dirichlet energy and a ray-based upper bound for the
/// geodesic distance from the center to the domain boundary.
#[derive(Debug, Clone, Serialize)]
pub struct EnergyReport {
    pub surface: String,
    pub grid_size: usize,
    pub radius: f64,
    /// ∫_B |∇X|² over cells whose centers lie in the disc.
    pub dirichlet_energy: f64,
    /// min over rays of the curve length t ↦ X(t·ω), an upper bound for the
    /// geodesic radius of the image around X(0).
    pub geodesic_radius_upper: f64,
    /// energy / r_upper² — a lower bound for the density constant d₀ in
    /// "energy ≤ d₀·r²".
    pub d0_estimate: f64,
    pub rays: usize,
    pub ray_samples: usize,
}

pub fn dirichlet_energy_and_geodesic_radius(
    surface: &Surface,
    grid: &DiscGrid,
) -> Result<EnergyReport> {
    let h = grid.spacing();
    let cells = grid.cell_centers();
    let densities: Vec<f64> = cells
        .par_iter()
        .map(|(u, v)| {
            let x = surface.jet3_at(*u, *v)?;
            let ff = first_fundamental_form(&x)?;
            Ok(ff.g[0][0] + ff.g[1][1])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut energy = 0.0;
    for d in &densities {
        energy += d * h * h;
    }

    const RAYS: usize = 64;
    const SAMPLES: usize = 256;
    let rho = grid.radius;
    let lengths: Vec<f64> = (0..RAYS)
        .into_par_iter()
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / RAYS as f64;
            let (st, ct) = theta.sin_cos();
            let dt = rho / SAMPLES as f64;
            let mut len = 0.0;
            for s in 0..SAMPLES {
                let t = (s as f64 + 0.5) * dt;
                let x = surface.jet3_at(t * ct, t * st)?;
                let xu = x.d1_values(0);
                let xv = x.d1_values(1);
                let mut speed_sq = 0.0;
                for c in 0..x.n() {
                    let d = ct * xu[c] + st * xv[c];
                    speed_sq += d * d;
                }
                len += speed_sq.sqrt() * dt;
            }
            Ok(len)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut r_upper = f64::INFINITY;
    for l in lengths {
        r_upper = r_upper.min(l);
    }

    Ok(EnergyReport {
        surface: surface.name.clone(),
        grid_size: grid.size,
        radius: grid.radius,
        dirichlet_energy: energy,
        geodesic_radius_upper: r_upper,
        d0_estimate: energy / (r_upper * r_upper),
        rays: RAYS,
        ray_samples: SAMPLES,
    })
}

// ---------------------------------------------------------------------------
// Hölder-condition falsifier.
// ---------------------------------------------------------------------------

/// One sampled argument pair for the Hölder check: positions X in a box,
/// directions Z on the unit sphere S³.
#[derive(Debug, Clone, Serialize)]
pub struct HolderSample {
    pub x1: [f64; 4],
    pub z1: [f64; 4],
    pub x2: [f64; 4],
    pub z2: [f64; 4],
}

/// Deterministic sample pairs: X uniform in the cube [−bound, bound]⁴,
/// Z uniform on S³ (normalized rejection sampling).
pub fn sample_pairs(seed: u64, count: usize, bound: f64) -> Vec<HolderSample> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    fn box_point(rng: &mut ChaCha20Rng, bound: f64) -> [f64; 4] {
        [
            rng.gen_range(-bound..bound),
            rng.gen_range(-bound..bound),
            rng.gen_range(-bound..bound),
            rng.gen_range(-bound..bound),
        ]
    }
    fn sphere_point(rng: &mut ChaCha20Rng) -> [f64; 4] {
        loop {
            let p = box_point(rng, 1.0);
            let norm = p.iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm > 1e-3 && norm <= 1.0 {
                return [p[0] / norm, p[1] / norm, p[2] / norm, p[3] / norm];
            }
        }
    }
    (0..count)
        .map(|_| HolderSample {
            x1: box_point(&mut rng, bound),
            z1: sphere_point(&mut rng),
            x2: box_point(&mut rng, bound),
            z2: sphere_point(&mut rng),
        })
        .collect()
}

/// Result of testing the Hölder condition of the scalar H(X, Z) = 𝓗(X)·Z:
/// |H(X₁,Z₁) − H(X₂,Z₂)| ≤ h₁·|X₁−X₂|^α + h₂·|Z₁−Z₂|, rearranged as a
/// quotient against h₁. A sampled falsifier, not a proof.
#[derive(Debug, Clone, Serialize)]
pub struct HolderReport {
    pub pairs: usize,
    pub skipped: usize,
    /// max over pairs of (|H(X₁,Z₁) − H(X₂,Z₂)| − h₂|Z₁−Z₂|)/|X₁−X₂|^α.
    pub max_quotient: f64,
    /// Index of the maximizing pair, if any pair was usable.
    pub witness: Option<usize>,
    /// max_quotient ≤ h₁ within 1e-6 relative slack.
    pub pass: bool,
}

pub fn holder_field_check(
    field: &MeanCurvatureField,
    samples: &[HolderSample],
) -> Result<HolderReport> {
    let mut max_q = f64::NEG_INFINITY;
    let mut witness = None;
    let mut skipped = 0usize;
    for (idx, s) in samples.iter().enumerate() {
        let dx: f64 = s
            .x1
            .iter()
            .zip(s.x2.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if dx < 1e-12 {
            skipped += 1;
            continue;
        }
        let dz: f64 = s
            .z1
            .iter()
            .zip(s.z2.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let h_at_1 = dot(&field.eval(&s.x1)?, &s.z1);
        let h_at_2 = dot(&field.eval(&s.x2)?, &s.z2);
        let q = ((h_at_1 - h_at_2).abs() - field.h2 * dz) / dx.powf(field.alpha);
        if q > max_q {
            max_q = q;
            witness = Some(idx);
        }
    }
    if witness.is_none() {
        return Ok(HolderReport {
            pairs: samples.len(),
            skipped,
            max_quotient: 0.0,
            witness: None,
            pass: true,
        });
    }
    Ok(HolderReport {
        pairs: samples.len(),
        skipped,
        max_quotient: max_q,
        witness,
        pass: max_q <= field.h1 * (1.0 + 1e-6) + 1e-12,
    })
}
