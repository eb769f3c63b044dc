//! One-stop pointwise analysis: evaluate the immersion and derive every
//! geometric quantity the reports need, in one pass.

use crate::bundle::{
    normal_curvature_tensor, ricci_residual, rotate_frame, torsion_coefficients, NormalCurvature,
    RicciCheck, TorsionPoint,
};
use crate::error::Result;
use crate::expr::{self, Expr};
use crate::geometry::{
    first_fundamental_form, normal_frame, second_fundamental_forms, torsion_values,
    weingarten_residual, FirstForm, NormalFrame, SectionData,
};
use crate::jet::{Jet, Var};
use crate::surface::{Surface, VectorJet};

/// Everything the library knows about a surface at one parameter point.
#[derive(Debug, Clone)]
pub struct PointAnalysis {
    pub u: f64,
    pub v: f64,
    pub x: VectorJet,
    pub ff: FirstForm,
    pub conformality_defect: f64,
    pub frame: NormalFrame,
    pub sections: Vec<SectionData>,
    /// General-codimension torsion values [Σ][Ω][i].
    pub sigma: Vec<Vec<[f64; 2]>>,
    pub weingarten_residual: f64,
    /// Present only for n = 4.
    pub torsion: Option<TorsionPoint>,
    pub curvature: Option<NormalCurvature>,
    pub ricci: Option<RicciCheck>,
}

/// Analyze the surface at an in-domain point.
pub fn analyze_point(surface: &Surface, u: f64, v: f64) -> Result<PointAnalysis> {
    surface.jet3(u, v)?;
    analyze_point_with_gauge(surface, u, v, None)
}

/// Like [`analyze_point`] but without the domain check (grid sweeps manage
/// their own domains) and with an optional gauge rotation: when `gauge` is
/// given and n = 4, the normal frame is rotated by the angle φ(u, v) before
/// any torsion-derived quantity is computed.
pub fn analyze_point_with_gauge(
    surface: &Surface,
    u: f64,
    v: f64,
    gauge: Option<&Expr>,
) -> Result<PointAnalysis> {
    let x = surface.jet3_at(u, v)?;
    let ff = first_fundamental_form(&x)?;
    let mut frame = normal_frame(&x, &ff)?;
    if let Some(phi_expr) = gauge {
        if x.n() == 4 {
            let phi = expr::evaluate_on_jets(
                phi_expr,
                &[("u", Jet::variable(Var::U, u)), ("v", Jet::variable(Var::V, v))],
            )?
            .trunc2();
            frame = rotate_frame(&frame, &phi)?;
        }
    }
    let sections = second_fundamental_forms(&x, &ff, &frame.values());
    let sigma = torsion_values(&frame);
    let wein = weingarten_residual(&x, &ff, &frame, &sections, &sigma);

    let defect = {
        let e = ff.g[0][0];
        let g = ff.g[1][1];
        let f = ff.g[0][1];
        ((e - g).abs().max(f.abs())) / ff.w.max(crate::tol::EPS_REG)
    };

    let (torsion, curvature, ricci) = if x.n() == 4 {
        let t = torsion_coefficients(&frame)?;
        let nc = normal_curvature_tensor(&t);
        let rc = ricci_residual(&nc, &sections, &ff);
        (Some(t), Some(nc), Some(rc))
    } else {
        (None, None, None)
    };

    Ok(PointAnalysis {
        u,
        v,
        x,
        ff,
        conformality_defect: defect,
        frame,
        sections,
        sigma,
        weingarten_residual: wein,
        torsion,
        curvature,
        ricci,
    })
}
