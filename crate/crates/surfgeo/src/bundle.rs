//! Normal-bundle analysis for surfaces in ℝ⁴: torsion coefficients of the
//! normal connection, the normal curvature tensor, its Ricci-identity
//! cross-check, frame rotations, and synthesis of torsion-free frames.
//!
//! Codimension two is the first interesting case: the normal connection has
//! a single independent torsion pair σ_{1,i}² and a single curvature scalar
//! S_{1,12}², and the bundle is flat exactly when a frame rotation can make
//! the torsion vanish identically.

use crate::analysis::{analyze_point_with_gauge, PointAnalysis};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::{FirstForm, NormalFrame, SectionData};
use crate::grid::DiscGrid;
use crate::jet::{Jet1, Jet2};
use crate::surface::Surface;
use crate::tol;
use rayon::prelude::*;
use serde::Serialize;

/// Torsion coefficients at a point as order-1 jets:
/// `sigma[Σ][i][Ω]` = σ_{Σ+1, i+1}^{Ω+1} = N_{Σ,u^i} · N_Ω.
#[derive(Debug, Clone)]
pub struct TorsionPoint {
    pub sigma: [[[Jet1; 2]; 2]; 2],
}

impl TorsionPoint {
    /// σ_{1,i}² — the only independent off-diagonal pair in codimension 2.
    pub fn s12(&self, i: usize) -> Jet1 {
        self.sigma[0][i][1]
    }
}

/// Torsion coefficients of a codimension-2 normal frame, with derivatives.
pub fn torsion_coefficients(frame: &NormalFrame) -> Result<TorsionPoint> {
    if frame.count() != 2 {
        return Err(Error::Dimension { expected: 4, got: frame.count() + 2 });
    }
    let zero = Jet1::constant(0.0);
    let mut sigma = [[[zero; 2]; 2]; 2];
    for s in 0..2 {
        for i in 0..2 {
            for o in 0..2 {
                let mut acc = Jet1::constant(0.0);
                for k in 0..frame.normals[s].len() {
                    acc = acc + frame.normals[s][k].deriv(i) * frame.normals[o][k].trunc1();
                }
                sigma[s][i][o] = acc;
            }
        }
    }
    Ok(TorsionPoint { sigma })
}

/// Normal curvature tensor values S_{Σ,ij}^Ω, indexed `[Σ][i][j][Ω]`.
#[derive(Debug, Clone, Serialize)]
pub struct NormalCurvature {
    pub s: [[[[f64; 2]; 2]; 2]; 2],
}

impl NormalCurvature {
    pub fn s_1_12_2(&self) -> f64 {
        self.s[0][0][1][1]
    }

    pub fn s_2_12_1(&self) -> f64 {
        self.s[1][0][1][0]
    }

    pub fn max_abs(&self) -> f64 {
        let mut m: f64 = 0.0;
        for a in &self.s {
            for b in a {
                for c in b {
                    for &d in c {
                        m = m.max(d.abs());
                    }
                }
            }
        }
        m
    }
}

/// Curvature of the normal connection from the torsion jets:
/// S_{Σ,ij}^Ω = ∂_{u^j} σ_{Σ,i}^Ω − ∂_{u^i} σ_{Σ,j}^Ω
///            + σ_{Σ,i}^Θ σ_{Θ,j}^Ω − σ_{Σ,j}^Θ σ_{Θ,i}^Ω.
/// (In codimension 2 the quadratic terms cancel identically because σ is
/// antisymmetric in Σ, Ω; they are kept for fidelity to the general formula.)
pub fn normal_curvature_tensor(t: &TorsionPoint) -> NormalCurvature {
    let mut s = [[[[0.0; 2]; 2]; 2]; 2];
    for sig in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                for om in 0..2 {
                    let mut val =
                        t.sigma[sig][i][om].d(j) - t.sigma[sig][j][om].d(i);
                    for th in 0..2 {
                        val += t.sigma[sig][i][th].value() * t.sigma[th][j][om].value()
                            - t.sigma[sig][j][th].value() * t.sigma[th][i][om].value();
                    }
                    s[sig][i][j][om] = val;
                }
            }
        }
    }
    NormalCurvature { s }
}

/// Ricci-identity cross-check: S_{Σ,12}^Ω must equal
/// (L_{Σ,1j} L_{Ω,k2} − L_{Σ,2j} L_{Ω,k1}) g^{jk}.
#[derive(Debug, Clone, Serialize)]
pub struct RicciCheck {
    /// Right-hand side per (Σ, Ω).
    pub rhs: [[f64; 2]; 2],
    /// max over Σ, Ω of |S_{Σ,12}^Ω − rhs|.
    pub residual: f64,
}

pub fn ricci_residual(
    nc: &NormalCurvature,
    sections: &[SectionData],
    ff: &FirstForm,
) -> RicciCheck {
    let mut rhs = [[0.0; 2]; 2];
    let mut residual: f64 = 0.0;
    for s in 0..2 {
        for o in 0..2 {
            let (ls, lo) = (&sections[s].l, &sections[o].l);
            let mut acc = 0.0;
            for j in 0..2 {
                for k in 0..2 {
                    acc += (ls[0][j] * lo[k][1] - ls[1][j] * lo[k][0]) * ff.g_inv[j][k];
                }
            }
            rhs[s][o] = acc;
            residual = residual.max((nc.s[s][0][1][o] - acc).abs());
        }
    }
    RicciCheck { rhs, residual }
}

/// Rotate a codimension-2 frame through the angle jet φ:
/// Ñ₁ = cos φ · N₁ + sin φ · N₂, Ñ₂ = sin φ · N₁ − cos φ · N₂.
/// (The matrix has determinant −1; the torsion transformation law below
/// picks up the corresponding sign.)
pub fn rotate_frame(frame: &NormalFrame, phi: &Jet2) -> Result<NormalFrame> {
    if frame.count() != 2 {
        return Err(Error::Dimension { expected: 4, got: frame.count() + 2 });
    }
    let c = phi.cos();
    let s = phi.sin();
    let n1 = &frame.normals[0];
    let n2 = &frame.normals[1];
    let rot1: Vec<Jet2> = n1.iter().zip(n2.iter()).map(|(a, b)| c * *a + s * *b).collect();
    let rot2: Vec<Jet2> = n1.iter().zip(n2.iter()).map(|(a, b)| s * *a - c * *b).collect();
    Ok(NormalFrame { normals: vec![rot1, rot2] })
}

/// Fit of the torsion transformation law σ̃_{1,i}² = s · (σ_{1,i}² + ∂iφ)
/// with s ∈ {+1, −1}: reports the sign with the smaller residual.
#[derive(Debug, Clone, Serialize)]
pub struct TransformCheck {
    pub sign: f64,
    pub residual: f64,
}

pub fn torsion_transform_check(
    before: &TorsionPoint,
    after: &TorsionPoint,
    phi: &Jet2,
) -> TransformCheck {
    let mut best = TransformCheck { sign: 1.0, residual: f64::INFINITY };
    for sign in [1.0, -1.0] {
        let mut r: f64 = 0.0;
        for i in 0..2 {
            let predicted = sign * (before.s12(i).value() + phi.d(i));
            r = r.max((after.s12(i).value() - predicted).abs());
        }
        if r < best.residual {
            best = TransformCheck { sign, residual: r };
        }
    }
    best
}

/// Per-node record of a flatness scan.
#[derive(Debug, Clone, Serialize)]
pub struct FlatnessPoint {
    pub u: f64,
    pub v: f64,
    pub s_1_12_2: f64,
    pub s_2_12_1: f64,
    pub ricci_residual: f64,
}

/// Result of scanning the normal curvature over a grid.
#[derive(Debug, Clone, Serialize)]
pub struct FlatnessReport {
    pub surface: String,
    pub grid_size: usize,
    pub radius: f64,
    pub tol_flat: f64,
    /// True when max |S| over the grid stays below `tol_flat`.
    pub flat: bool,
    pub max_abs_s: f64,
    pub argmax_u: f64,
    pub argmax_v: f64,
    pub max_ricci_residual: f64,
    #[serde(skip)]
    pub points: Vec<FlatnessPoint>,
}

/// Scan S over the grid and return a flatness verdict. `gauge` optionally
/// rotates the frame by φ(u, v) before the torsion is measured — the verdict
/// is gauge-covariant, so this exists for covariance testing.
pub fn flatness_scan_with_gauge(
    surface: &Surface,
    grid: &DiscGrid,
    gauge: Option<&Expr>,
) -> Result<FlatnessReport> {
    if surface.n != 4 {
        return Err(Error::Dimension { expected: 4, got: surface.n });
    }
    let nodes = grid.nodes();
    let analyzed: Vec<(FlatnessPoint, f64)> = nodes
        .par_iter()
        .map(|node| {
            let a: PointAnalysis = analyze_point_with_gauge(surface, node.u, node.v, gauge)?;
            let nc = a.curvature.as_ref().expect("n = 4 analysis carries S");
            let ricci = a.ricci.as_ref().expect("n = 4 analysis carries Ricci");
            Ok((
                FlatnessPoint {
                    u: node.u,
                    v: node.v,
                    s_1_12_2: nc.s_1_12_2(),
                    s_2_12_1: nc.s_2_12_1(),
                    ricci_residual: ricci.residual,
                },
                nc.max_abs(),
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut max_abs_s: f64 = 0.0;
    let mut argmax = (0.0, 0.0);
    let mut max_ricci: f64 = 0.0;
    for (p, s_abs) in &analyzed {
        if *s_abs > max_abs_s {
            max_abs_s = *s_abs;
            argmax = (p.u, p.v);
        }
        max_ricci = max_ricci.max(p.ricci_residual);
    }
    Ok(FlatnessReport {
        surface: surface.name.clone(),
        grid_size: grid.size,
        radius: grid.radius,
        tol_flat: tol::TOL_FLAT,
        flat: max_abs_s <= tol::TOL_FLAT,
        max_abs_s,
        argmax_u: argmax.0,
        argmax_v: argmax.1,
        max_ricci_residual: max_ricci,
        points: analyzed.into_iter().map(|(p, _)| p).collect(),
    })
}

pub fn flatness_scan(surface: &Surface, grid: &DiscGrid) -> Result<FlatnessReport> {
    flatness_scan_with_gauge(surface, grid, None)
}

/// Result of attempting to rotate the frame torsion-free over a grid.
#[derive(Debug, Clone, Serialize)]
pub struct SynthesisReport {
    pub surface: String,
    pub grid_size: usize,
    pub radius: f64,
    pub spacing: f64,
    /// Quadrature-limited acceptance threshold max(1e-6, 4h²·diam).
    pub tol_sync: f64,
    /// True when the rotated frame's torsion stays below `tol_sync`.
    pub success: bool,
    /// max |σ̃_{1,i}²| of the rotated frame, measured by grid central
    /// differences of the rotated frame field.
    pub max_rotated_torsion: f64,
    /// max |∂v σ_{1,1}² − ∂u σ_{1,2}²| over the grid: the integrability
    /// obstruction for the rotation angle.
    pub max_integrability_residual: f64,
    /// The obstruction at the grid center.
    pub obstruction_at_center: f64,
    /// max |φ_row-first − φ_column-first|: path dependence of the integral,
    /// another face of the same obstruction.
    pub path_disagreement_max: f64,
    /// Range [min, max] of the synthesized angle.
    pub phi_range: [f64; 2],
}

struct SynthNode {
    s11: f64,
    s12: f64,
    /// ∂v σ_{1,1}² − ∂u σ_{1,2}².
    curl: f64,
    n1: Vec<f64>,
    n2: Vec<f64>,
}

/// Try to synthesize a torsion-free normal frame: integrate the angle field
/// φ with ∇φ = −(σ_{1,1}², σ_{1,2}²) from the grid center by trapezoidal
/// staircase paths, rotate the frame by φ at every node, then *measure* the
/// rotated torsion with grid central differences. When the normal bundle is
/// flat the measured torsion vanishes to quadrature accuracy; a curvature
/// obstruction leaves an O(|S|) remainder no rotation can remove.
pub fn synthesize_torsion_free(surface: &Surface, grid: &DiscGrid) -> Result<SynthesisReport> {
    if surface.n != 4 {
        return Err(Error::Dimension { expected: 4, got: surface.n });
    }
    let size = grid.size;
    let h = grid.spacing();

    // Analyze every in-disc node; the lattice keeps None outside the disc.
    let all: Vec<Option<(usize, usize, f64, f64)>> = {
        let mut v = Vec::with_capacity(size * size);
        for iv in 0..size {
            for iu in 0..size {
                let (uu, vv) = (grid.coord(iu), grid.coord(iv));
                v.push(if grid.in_disc(uu, vv) { Some((iu, iv, uu, vv)) } else { None });
            }
        }
        v
    };
    let lattice: Vec<Option<SynthNode>> = all
        .par_iter()
        .map(|slot| -> Result<Option<SynthNode>> {
            let Some((_, _, u, v)) = slot else { return Ok(None) };
            let a = analyze_point_with_gauge(surface, *u, *v, None)?;
            let t = a.torsion.as_ref().expect("n = 4 analysis carries torsion");
            let (s11, s12) = (t.s12(0), t.s12(1));
            let vals = a.frame.values();
            Ok(Some(SynthNode {
                s11: s11.value(),
                s12: s12.value(),
                curl: s11.d(1) - s12.d(0),
                n1: vals[0].clone(),
                n2: vals[1].clone(),
            }))
        })
        .collect::<Result<Vec<_>>>()?;

    let (ic, _) = grid.center();

    // Integrate φ along vertical-then-horizontal staircase paths (and the
    // transposed order for the path-dependence diagnostic). Every in-disc
    // node is reachable because rows and columns of a disc are contiguous
    // and the center row/column span the full disc.
    let trapezoid = |f_prev: f64, f_next: f64| 0.5 * h * (f_prev + f_next);
    let integrate = |row_first: bool| -> Vec<Option<f64>> {
        let mut phi: Vec<Option<f64>> = vec![None; size * size];
        phi[ic * size + ic] = Some(0.0);
        // Axis sweep: center column (or row) first.
        for dir in [1i64, -1i64] {
            let mut prev = ic as i64;
            loop {
                let next = prev + dir;
                if next < 0 || next >= size as i64 {
                    break;
                }
                let (p, q) = (prev as usize, next as usize);
                let (idx_p, idx_q) = if row_first {
                    (ic * size + p, ic * size + q) // walk along the center row: u varies
                } else {
                    (p * size + ic, q * size + ic) // walk along the center column: v varies
                };
                let (node_p, node_q) = (lattice[idx_p].as_ref(), lattice[idx_q].as_ref());
                let (Some(np), Some(nq)) = (node_p, node_q) else { break };
                let (fp, fq) = if row_first {
                    (-np.s11, -nq.s11)
                } else {
                    (-np.s12, -nq.s12)
                };
                let base = phi[idx_p].expect("axis is filled in order");
                phi[idx_q] = Some(base + dir as f64 * trapezoid(fp, fq));
                prev = next;
            }
        }
        // Sweep each line off the axis.
        for fixed in 0..size {
            for dir in [1i64, -1i64] {
                let mut prev = ic as i64;
                loop {
                    let next = prev + dir;
                    if next < 0 || next >= size as i64 {
                        break;
                    }
                    let (p, q) = (prev as usize, next as usize);
                    let (idx_p, idx_q) = if row_first {
                        (p * size + fixed, q * size + fixed) // v varies at fixed u
                    } else {
                        (fixed * size + p, fixed * size + q) // u varies at fixed v
                    };
                    let (node_p, node_q) = (lattice[idx_p].as_ref(), lattice[idx_q].as_ref());
                    let (Some(np), Some(nq)) = (node_p, node_q) else { break };
                    let Some(base) = phi[idx_p] else { break };
                    let (fp, fq) = if row_first {
                        (-np.s12, -nq.s12)
                    } else {
                        (-np.s11, -nq.s11)
                    };
                    phi[idx_q] = Some(base + dir as f64 * trapezoid(fp, fq));
                    prev = next;
                }
            }
        }
        phi
    };

    let phi_a = integrate(true);
    let phi_b = integrate(false);

    let mut path_disagreement: f64 = 0.0;
    let mut phi_min = f64::INFINITY;
    let mut phi_max = f64::NEG_INFINITY;
    for idx in 0..size * size {
        if let (Some(a), Some(b)) = (phi_a[idx], phi_b[idx]) {
            path_disagreement = path_disagreement.max((a - b).abs());
            phi_min = phi_min.min(a);
            phi_max = phi_max.max(a);
        }
    }

    // Rotate the frame by φ at every node (values only) …
    let rotated: Vec<Option<(Vec<f64>, Vec<f64>)>> = (0..size * size)
        .map(|idx| {
            let (node, angle) = (lattice[idx].as_ref()?, phi_a[idx]?);
            let (s, c) = angle.sin_cos();
            let r1: Vec<f64> =
                node.n1.iter().zip(node.n2.iter()).map(|(a, b)| c * a + s * b).collect();
            let r2: Vec<f64> =
                node.n1.iter().zip(node.n2.iter()).map(|(a, b)| s * a - c * b).collect();
            Some((r1, r2))
        })
        .collect();

    // … and measure its torsion with central differences.
    let mut max_rot: f64 = 0.0;
    let mut max_curl: f64 = 0.0;
    let mut center_curl = 0.0;
    for iv in 0..size {
        for iu in 0..size {
            let idx = iv * size + iu;
            let Some(node) = lattice[idx].as_ref() else { continue };
            max_curl = max_curl.max(node.curl.abs());
            if iu == ic && iv == ic {
                center_curl = node.curl;
            }
            let Some((_, here_n2)) = rotated[idx].as_ref() else { continue };
            // u-direction.
            if iu > 0 && iu + 1 < size {
                if let (Some((left, _)), Some((right, _))) =
                    (rotated[idx - 1].as_ref(), rotated[idx + 1].as_ref())
                {
                    let mut acc = 0.0;
                    for k in 0..4 {
                        acc += (right[k] - left[k]) / (2.0 * h) * here_n2[k];
                    }
                    max_rot = max_rot.max(acc.abs());
                }
            }
            // v-direction.
            if iv > 0 && iv + 1 < size {
                if let (Some((down, _)), Some((up, _))) =
                    (rotated[idx - size].as_ref(), rotated[idx + size].as_ref())
                {
                    let mut acc = 0.0;
                    for k in 0..4 {
                        acc += (up[k] - down[k]) / (2.0 * h) * here_n2[k];
                    }
                    max_rot = max_rot.max(acc.abs());
                }
            }
        }
    }

    let tol_sync = tol::tol_sync(h, 2.0 * grid.radius);
    Ok(SynthesisReport {
        surface: surface.name.clone(),
        grid_size: size,
        radius: grid.radius,
        spacing: h,
        tol_sync,
        success: max_rot <= tol_sync,
        max_rotated_torsion: max_rot,
        max_integrability_residual: max_curl,
        obstruction_at_center: center_curl,
        path_disagreement_max: path_disagreement,
        phi_range: [phi_min, phi_max],
    })
}
