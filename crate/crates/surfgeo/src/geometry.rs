//! Pointwise differential geometry of an immersion: fundamental forms,
//! orthonormal normal frames, curvatures, and the Weingarten consistency
//! residual.
//!
//! The normal frame is built by Gram–Schmidt *in jet arithmetic*: every frame
//! vector is a vector of order-2 jets, so its first derivatives (needed for
//! torsion coefficients) and second derivatives (needed for the normal
//! curvature tensor) come out of the same computation with no extra
//! differentiation step.

use crate::error::{Error, Result};
use crate::jet::{Jet1, Jet2};
use crate::surface::{dot, VectorJet};
use crate::tol;
use serde::Serialize;

/// First fundamental form at a point: g, its inverse, and W = √(det g).
#[derive(Debug, Clone, Serialize)]
pub struct FirstForm {
    /// Metric coefficients [[g11, g12], [g12, g22]].
    pub g: [[f64; 2]; 2],
    /// Inverse metric.
    pub g_inv: [[f64; 2]; 2],
    /// Area element W = √(g11·g22 − g12²).
    pub w: f64,
}

/// Compute the first fundamental form; fails when det g ≤ ε_reg² (the
/// immersion is numerically degenerate at the point).
pub fn first_fundamental_form(x: &VectorJet) -> Result<FirstForm> {
    let xu = x.d1_values(0);
    let xv = x.d1_values(1);
    let g11 = dot(&xu, &xu);
    let g12 = dot(&xu, &xv);
    let g22 = dot(&xv, &xv);
    let det = g11 * g22 - g12 * g12;
    if !(det > tol::EPS_REG * tol::EPS_REG) {
        return Err(Error::Regularity { u: x.u, v: x.v, w: det.max(0.0).sqrt() });
    }
    Ok(FirstForm {
        g: [[g11, g12], [g12, g22]],
        g_inv: [[g22 / det, -g12 / det], [-g12 / det, g11 / det]],
        w: det.sqrt(),
    })
}

// ---------------------------------------------------------------------------
// Jet-vector helpers (component-wise order-2 jet arithmetic on ℝⁿ vectors).
// ---------------------------------------------------------------------------

fn dot2(a: &[Jet2], b: &[Jet2]) -> Jet2 {
    let mut acc = Jet2::constant(0.0);
    for (x, y) in a.iter().zip(b.iter()) {
        acc = acc + *x * *y;
    }
    acc
}

fn sub_scaled(target: &mut [Jet2], coeff: &Jet2, dir: &[Jet2]) {
    for (t, d) in target.iter_mut().zip(dir.iter()) {
        *t = *t - *coeff * *d;
    }
}

fn normalize(vec: &[Jet2], norm_sq: &Jet2) -> Result<Vec<Jet2>> {
    let norm = norm_sq.sqrt().map_err(|e| Error::Numerics(e.to_string()))?;
    vec.iter()
        .map(|c| c.div(&norm).map_err(|e| Error::Numerics(e.to_string())))
        .collect()
}

/// Orthonormal normal frame N₁, …, N_{n−2} along the surface as order-2 jets.
#[derive(Debug, Clone)]
pub struct NormalFrame {
    /// `normals[σ][k]` = k-th ambient component of N_{σ+1}.
    pub normals: Vec<Vec<Jet2>>,
}

impl NormalFrame {
    pub fn count(&self) -> usize {
        self.normals.len()
    }

    /// Plain value vectors of every frame normal.
    pub fn values(&self) -> Vec<Vec<f64>> {
        self.normals
            .iter()
            .map(|n| n.iter().map(|c| c.value()).collect())
            .collect()
    }
}

/// Build the normal frame by Gram–Schmidt over the tangent jets followed by
/// the deterministic seed sequence e₃, e₄, …, e_n, e₁, e₂. A seed whose
/// residual squared norm falls below `GS_SKIP_FACTOR · W` is skipped (it is
/// numerically inside the span built so far); if the seeds run out before
/// n − 2 normals are found the frame is degenerate.
///
/// The seed order and skip rule are fixed, which makes the frame a
/// deterministic function of the point — and a smooth one wherever the same
/// seeds survive, which is what the torsion/curvature derivatives require.
pub fn normal_frame(x: &VectorJet, ff: &FirstForm) -> Result<NormalFrame> {
    let n = x.n();
    let mut basis: Vec<Vec<Jet2>> = Vec::with_capacity(n);

    // Orthonormalized tangent directions (not returned, only projected out).
    for i in 0..2 {
        let mut t = x.tangent(i);
        for b in &basis {
            let coeff = dot2(&t, b);
            sub_scaled(&mut t, &coeff, b);
        }
        let nsq = dot2(&t, &t);
        if !(nsq.value() > tol::EPS_REG * tol::EPS_REG) {
            return Err(Error::Regularity { u: x.u, v: x.v, w: ff.w });
        }
        basis.push(normalize(&t, &nsq)?);
    }

    // Seed order: ambient axes e₃ … e_n first, then e₁, e₂.
    let seed_order: Vec<usize> = (2..n).chain(0..2).collect();
    let threshold = tol::GS_SKIP_FACTOR * ff.w;
    let mut normals: Vec<Vec<Jet2>> = Vec::with_capacity(n - 2);
    for axis in seed_order {
        if normals.len() == n - 2 {
            break;
        }
        let mut w: Vec<Jet2> = (0..n)
            .map(|k| Jet2::constant(if k == axis { 1.0 } else { 0.0 }))
            .collect();
        for b in &basis {
            let coeff = dot2(&w, b);
            sub_scaled(&mut w, &coeff, b);
        }
        let nsq = dot2(&w, &w);
        if nsq.value() < threshold {
            continue;
        }
        let unit = normalize(&w, &nsq)?;
        basis.push(unit.clone());
        normals.push(unit);
    }
    if normals.len() < n - 2 {
        return Err(Error::FrameDegeneracy { u: x.u, v: x.v, needed: n - 2 });
    }
    Ok(NormalFrame { normals })
}

/// Second fundamental form and curvature scalars of one normal section.
#[derive(Debug, Clone, Serialize)]
pub struct SectionData {
    /// 1-based index of the normal direction this section belongs to.
    pub index: usize,
    /// L_{Σ,ij} = X_{u^i u^j} · N_Σ.
    pub l: [[f64; 2]; 2],
    /// Mean curvature H_Σ = (g22·L11 − 2g12·L12 + g11·L22) / (2W²).
    pub h: f64,
    /// Gauss curvature K_Σ = det L_Σ / W².
    pub k: f64,
    /// Principal curvatures: eigenvalues of g⁻¹·L_Σ, i.e. H ± √(H² − K).
    pub kappa: [f64; 2],
}

/// Second fundamental forms of every normal section against a given frame.
pub fn second_fundamental_forms(
    x: &VectorJet,
    ff: &FirstForm,
    frame_values: &[Vec<f64>],
) -> Vec<SectionData> {
    let w2 = ff.w * ff.w;
    let (g11, g12, g22) = (ff.g[0][0], ff.g[0][1], ff.g[1][1]);
    frame_values
        .iter()
        .enumerate()
        .map(|(idx, normal)| {
            let mut l = [[0.0; 2]; 2];
            for i in 0..2 {
                for j in i..2 {
                    let val = dot(&x.d2_values(i, j), normal);
                    l[i][j] = val;
                    l[j][i] = val;
                }
            }
            let h = (g22 * l[0][0] - 2.0 * g12 * l[0][1] + g11 * l[1][1]) / (2.0 * w2);
            let k = (l[0][0] * l[1][1] - l[0][1] * l[0][1]) / w2;
            // Eigenvalues of the shape operator g⁻¹L: trace 2H, determinant K.
            let disc = (h * h - k).max(0.0).sqrt();
            SectionData { index: idx + 1, l, h, k, kappa: [h - disc, h + disc] }
        })
        .collect()
}

/// Torsion coefficient values σ_{Σ,i}^Ω = N_{Σ,u^i} · N_Ω for a general
/// normal frame (any codimension), flattened as [Σ][i][Ω].
pub fn torsion_values(frame: &NormalFrame) -> Vec<Vec<[f64; 2]>> {
    let m = frame.count();
    let mut out = vec![vec![[0.0; 2]; m]; m];
    for s in 0..m {
        for o in 0..m {
            for i in 0..2 {
                let mut acc = 0.0;
                for k in 0..frame.normals[s].len() {
                    acc += frame.normals[s][k].d(i) * frame.normals[o][k].value();
                }
                out[s][o][i] = acc;
            }
        }
    }
    out
}

/// Residual of the frame's derivative equations: how far N_{Σ,u^i} is from
/// −L_{Σ,ij} g^{jk} X_{u^k} + σ_{Σ,i}^Ω N_Ω, maximized over Σ and i. For an
/// exact orthonormal frame this vanishes identically; the computed value
/// measures accumulated floating-point error in the whole pipeline.
pub fn weingarten_residual(
    x: &VectorJet,
    ff: &FirstForm,
    frame: &NormalFrame,
    sections: &[SectionData],
    sigma: &[Vec<[f64; 2]>],
) -> f64 {
    let n = x.n();
    let m = frame.count();
    let frame_vals = frame.values();
    let xu = [x.d1_values(0), x.d1_values(1)];
    let mut worst: f64 = 0.0;
    for s in 0..m {
        for i in 0..2 {
            let mut resid_sq = 0.0;
            for c in 0..n {
                let mut want = 0.0;
                for j in 0..2 {
                    for k in 0..2 {
                        want -= sections[s].l[i][j] * ff.g_inv[j][k] * xu[k][c];
                    }
                }
                for o in 0..m {
                    want += sigma[s][o][i] * frame_vals[o][c];
                }
                let diff = frame.normals[s][c].d(i) - want;
                resid_sq += diff * diff;
            }
            worst = worst.max(resid_sq.sqrt());
        }
    }
    worst
}

/// Unit normal of a surface in ℝ³ as order-1 jets, oriented along Xu × Xv.
pub fn unit_normal_r3(x: &VectorJet) -> Result<Vec<Jet1>> {
    if x.n() != 3 {
        return Err(Error::Dimension { expected: 3, got: x.n() });
    }
    let xu: Vec<Jet1> = x.comps.iter().map(|c| c.deriv(0).trunc1()).collect();
    let xv: Vec<Jet1> = x.comps.iter().map(|c| c.deriv(1).trunc1()).collect();
    let cross = vec![
        xu[1] * xv[2] - xu[2] * xv[1],
        xu[2] * xv[0] - xu[0] * xv[2],
        xu[0] * xv[1] - xu[1] * xv[0],
    ];
    let mut nsq = Jet1::constant(0.0);
    for c in &cross {
        nsq = nsq + *c * *c;
    }
    if !(nsq.value() > tol::EPS_REG * tol::EPS_REG) {
        return Err(Error::Regularity { u: x.u, v: x.v, w: nsq.value().max(0.0).sqrt() });
    }
    let norm = nsq.sqrt().map_err(|e| Error::Numerics(e.to_string()))?;
    cross
        .iter()
        .map(|c| c.div(&norm).map_err(|e| Error::Numerics(e.to_string())))
        .collect()
}

/// |∇N|² = Σ_c (∂u N_c)² + (∂v N_c)² for the ℝ³ unit normal.
pub fn grad_norm_sq_r3(normal: &[Jet1]) -> f64 {
    normal
        .iter()
        .map(|c| c.d(0) * c.d(0) + c.d(1) * c.d(1))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{Builtin, Surface};

    fn geo(b: Builtin, u: f64, v: f64) -> (VectorJet, FirstForm, NormalFrame) {
        let s = Surface::builtin(b);
        let x = s.jet3(u, v).unwrap();
        let ff = first_fundamental_form(&x).unwrap();
        let frame = normal_frame(&x, &ff).unwrap();
        (x, ff, frame)
    }

    #[test]
    fn w2_first_form_is_conformal() {
        // g = (1 + 4(u²+v²))·I for the w² graph.
        let (_, ff, _) = geo(Builtin::W2, 0.3, -0.2);
        let lam = 1.0 + 4.0 * (0.3f64 * 0.3 + 0.2 * 0.2);
        assert!((ff.g[0][0] - lam).abs() < 1e-14);
        assert!((ff.g[1][1] - lam).abs() < 1e-14);
        assert!(ff.g[0][1].abs() < 1e-14);
        assert!((ff.w - lam).abs() < 1e-13);
    }

    #[test]
    fn degenerate_point_is_a_regularity_error() {
        let s = Surface::from_json_str(
            r#"{"kind": "parametric", "n": 4, "components": ["u", "u", "0", "0"]}"#,
        )
        .unwrap();
        let x = s.jet3(0.1, 0.1).unwrap();
        assert!(matches!(first_fundamental_form(&x), Err(Error::Regularity { .. })));
    }

    #[test]
    fn frame_is_orthonormal_with_jet_consistency() {
        // Orthonormality must hold not only in values but as jets: the
        // derivative of N·N is 2N'·N, which must vanish too.
        for b in [Builtin::W2, Builtin::Clifford, Builtin::Sphere, Builtin::Z3] {
            let (x, _ff, frame) = geo(b, 0.4, 0.25);
            let m = frame.count();
            for s in 0..m {
                for o in 0..m {
                    let d = dot2(&frame.normals[s], &frame.normals[o]);
                    let want = if s == o { 1.0 } else { 0.0 };
                    assert!((d.value() - want).abs() < 1e-12, "{b:?} N{s}·N{o}");
                    assert!(d.d(0).abs() < 1e-11);
                    assert!(d.d(1).abs() < 1e-11);
                }
            }
            // Tangency: N ⟂ Xu, Xv.
            for s in 0..m {
                for i in 0..2 {
                    let t: f64 = frame.normals[s]
                        .iter()
                        .zip(x.d1_values(i).iter())
                        .map(|(n, t)| n.value() * t)
                        .sum();
                    assert!(t.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn w2_frame_and_sections_at_origin() {
        let (_x, _ff, frame) = geo(Builtin::W2, 0.0, 0.0);
        // At the origin the Gram–Schmidt seeds e₃, e₄ are already normal.
        let vals = frame.values();
        assert_eq!(vals[0], vec![0.0, 0.0, 1.0, 0.0]);
        assert_eq!(vals[1], vec![0.0, 0.0, 0.0, 1.0]);
        let (x, ff, frame) = geo(Builtin::W2, 0.0, 0.0);
        let secs = second_fundamental_forms(&x, &ff, &frame.values());
        assert_eq!(secs[0].l, [[2.0, 0.0], [0.0, -2.0]]);
        assert_eq!(secs[1].l, [[0.0, 2.0], [2.0, 0.0]]);
        assert!((secs[0].h).abs() < 1e-15);
        assert!((secs[1].h).abs() < 1e-15);
        assert!((secs[0].k - -4.0).abs() < 1e-15);
        assert!((secs[1].k - -4.0).abs() < 1e-15);
        assert_eq!(secs[0].kappa, [-2.0, 2.0]);
    }

    #[test]
    fn clifford_explicit_frame_curvatures() {
        // With the explicit frame {X, (cos u, sin u, −cos v, −sin v)/√2} the
        // sections have L₁ = −(1/2)I (so H₁ = −1, K₁ = 1) and
        // L₂ = diag(−1/2, 1/2) (so H₂ = 0, K₂ = −1).
        let s = Surface::builtin(Builtin::Clifford);
        let (u, v) = (0.7, -0.4);
        let x = s.jet3(u, v).unwrap();
        let ff = first_fundamental_form(&x).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let n1 = vec![r * u.cos(), r * u.sin(), r * v.cos(), r * v.sin()];
        let n2 = vec![r * u.cos(), r * u.sin(), -r * v.cos(), -r * v.sin()];
        let secs = second_fundamental_forms(&x, &ff, &[n1, n2]);
        assert!((secs[0].h - -1.0).abs() < 1e-12);
        assert!((secs[0].k - 1.0).abs() < 1e-12);
        assert!((secs[1].h).abs() < 1e-12);
        assert!((secs[1].k - -1.0).abs() < 1e-12);
        // Gauge invariance of K₁ + K₂ (here 0) regardless of frame choice.
        let frame = normal_frame(&x, &ff).unwrap();
        let gs = second_fundamental_forms(&x, &ff, &frame.values());
        assert!((gs[0].k + gs[1].k).abs() < 1e-12);
    }

    #[test]
    fn sphere_is_totally_umbilic_with_unit_curvature() {
        // Round unit sphere: every normal section through N₁ (the sphere
        // normal) has κ₁ = κ₂ = ±1 and K₁ = 1; the e₄ section is flat.
        let (x, ff, frame) = geo(Builtin::Sphere, 0.3, -0.5);
        let secs = second_fundamental_forms(&x, &ff, &frame.values());
        assert!((secs[0].k - 1.0).abs() < 1e-12);
        assert!((secs[0].kappa[0] - secs[0].kappa[1]).abs() < 1e-7);
        assert!(secs[1].k.abs() < 1e-13);
        assert!(secs[1].h.abs() < 1e-13);
    }

    #[test]
    fn weingarten_residual_is_rounding_level() {
        for b in [Builtin::W2, Builtin::Clifford, Builtin::Sphere, Builtin::Z3] {
            let (x, ff, frame) = geo(b, -0.35, 0.15);
            let secs = second_fundamental_forms(&x, &ff, &frame.values());
            let sigma = torsion_values(&frame);
            let r = weingarten_residual(&x, &ff, &frame, &secs, &sigma);
            assert!(r < 1e-10, "{b:?}: residual {r}");
        }
    }

    #[test]
    fn r3_normal_matches_closed_form_for_enneper() {
        let s = Surface::builtin(Builtin::Enneper);
        let x = s.jet3(0.0, 0.0).unwrap();
        let n = unit_normal_r3(&x).unwrap();
        // At the origin Xu = e₁, Xv = −e₂, so Xu × Xv = −e₃.
        assert!((n[0].value()).abs() < 1e-15);
        assert!((n[1].value()).abs() < 1e-15);
        assert!((n[2].value() + 1.0).abs() < 1e-15);
        // |∇N|²/W = 2(κ₁² + κ₂²)/2 … sanity: strictly positive here.
        assert!(grad_norm_sq_r3(&n) > 0.1);
        let four = Surface::builtin(Builtin::W2);
        assert!(matches!(
            unit_normal_r3(&four.jet3(0.0, 0.0).unwrap()),
            Err(Error::Dimension { .. })
        ));
    }
}
