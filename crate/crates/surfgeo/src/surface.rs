//! Surface specifications and their evaluation as derivative jets.
//!
//! A surface is an immersion X: B → ℝⁿ on a closed parameter disc B of some
//! radius. Three kinds are supported:
//!
//! - `builtin`: a named catalog surface whose ten derivative coefficients per
//!   component are hand-coded closed forms. The catalog deliberately does not
//!   go through the expression evaluator, so it doubles as an independent
//!   oracle for the expression → jet pipeline.
//! - `graph`: components `(u, v, φ¹(u,v), …, φ^{n−2}(u,v))` with the φ given
//!   as expressions in the graph variables `x, y` (bound to u, v). The two
//!   coordinate components are exact coordinate jets.
//! - `parametric`: all n components given as expressions in `u, v`.
//!
//! A uniform dilation factor can be attached programmatically with
//! [`Surface::scaled`]; it multiplies every component (builtins also accept
//! it as the spec parameter `scale`).

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::grid::DiscGrid;
use crate::jet::{Jet, Jet2, JetError, Var};
use crate::tol;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Raw spec document, as stored in JSON files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

/// Catalog of built-in surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    /// Flat plane (u, v, 0, 0) in ℝ⁴.
    Plane,
    /// Holomorphic graph (u, v, u²−v², 2uv) in ℝ⁴ — the graph of w².
    W2,
    /// Clifford torus (cos u, sin u, cos v, sin v)/√2 in ℝ⁴.
    Clifford,
    /// Unit sphere in the x¹x²x³-hyperplane of ℝ⁴, via stereographic
    /// (conformal) parameters: (2u, 2v, u²+v²−1, 0)/(1+u²+v²).
    Sphere,
    /// Holomorphic graph (u, v, Re z³, Im z³) in ℝ⁴ — the graph of z³.
    Z3,
    /// Enneper's minimal surface (u−u³/3+uv², −v+v³/3−u²v, u²−v²) in ℝ³.
    Enneper,
}

impl Builtin {
    pub fn from_id(id: &str) -> Option<Builtin> {
        match id {
            "plane" => Some(Builtin::Plane),
            "w2" => Some(Builtin::W2),
            "clifford" => Some(Builtin::Clifford),
            "sphere" => Some(Builtin::Sphere),
            "z3" => Some(Builtin::Z3),
            "enneper" => Some(Builtin::Enneper),
            _ => None,
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            Builtin::Plane => "plane",
            Builtin::W2 => "w2",
            Builtin::Clifford => "clifford",
            Builtin::Sphere => "sphere",
            Builtin::Z3 => "z3",
            Builtin::Enneper => "enneper",
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Builtin::Enneper => 3,
            _ => 4,
        }
    }

    pub const ALL: [Builtin; 6] = [
        Builtin::Plane,
        Builtin::W2,
        Builtin::Clifford,
        Builtin::Sphere,
        Builtin::Z3,
        Builtin::Enneper,
    ];

    /// Hand-coded order-3 jets of every component. These are closed-form
    /// derivatives, written out term by term — not produced by jet
    /// arithmetic — so they can serve as an oracle for it.
    fn jets(&self, u: f64, v: f64) -> Vec<Jet> {
        match self {
            Builtin::Plane => vec![
                Jet::variable(Var::U, u),
                Jet::variable(Var::V, v),
                Jet::constant(0.0),
                Jet::constant(0.0),
            ],
            Builtin::W2 => vec![
                Jet::variable(Var::U, u),
                Jet::variable(Var::V, v),
                Jet::from_coeffs([
                    u * u - v * v,
                    2.0 * u,
                    -2.0 * v,
                    2.0,
                    0.0,
                    -2.0,
                    0.0,
                    0.0,
                    0.0,
                    0.0,
                ]),
                Jet::from_coeffs([
                    2.0 * u * v,
                    2.0 * v,
                    2.0 * u,
                    0.0,
                    2.0,
                    0.0,
                    0.0,
                    0.0,
                    0.0,
                    0.0,
                ]),
            ],
            Builtin::Clifford => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                let (su, cu) = u.sin_cos();
                let (sv, cv) = v.sin_cos();
                vec![
                    Jet::from_coeffs([
                        s * cu,
                        -s * su,
                        0.0,
                        -s * cu,
                        0.0,
                        0.0,
                        s * su,
                        0.0,
                        0.0,
                        0.0,
                    ]),
                    Jet::from_coeffs([
                        s * su,
                        s * cu,
                        0.0,
                        -s * su,
                        0.0,
                        0.0,
                        -s * cu,
                        0.0,
                        0.0,
                        0.0,
                    ]),
                    Jet::from_coeffs([
                        s * cv,
                        0.0,
                        -s * sv,
                        0.0,
                        0.0,
                        -s * cv,
                        0.0,
                        0.0,
                        0.0,
                        s * sv,
                    ]),
                    Jet::from_coeffs([
                        s * sv,
                        0.0,
                        s * cv,
                        0.0,
                        0.0,
                        -s * sv,
                        0.0,
                        0.0,
                        0.0,
                        -s * cv,
                    ]),
                ]
            }
            Builtin::Sphere => {
                let r = 1.0 / (1.0 + u * u + v * v);
                let (r2, r3) = (r * r, r * r * r);
                let r4 = r3 * r;
                let ru = -2.0 * u * r2;
                let rv = -2.0 * v * r2;
                let ruu = -2.0 * r2 + 8.0 * u * u * r3;
                let ruv = 8.0 * u * v * r3;
                let rvv = -2.0 * r2 + 8.0 * v * v * r3;
                let ruuu = 24.0 * u * r3 - 48.0 * u * u * u * r4;
                let ruuv = 8.0 * v * r3 - 48.0 * u * u * v * r4;
                let ruvv = 8.0 * u * r3 - 48.0 * u * v * v * r4;
                let rvvv = 24.0 * v * r3 - 48.0 * v * v * v * r4;
                vec![
                    // x¹ = 2u·r, expanded with the Leibniz rule on (2u)·r.
                    Jet::from_coeffs([
                        2.0 * u * r,
                        2.0 * r + 2.0 * u * ru,
                        2.0 * u * rv,
                        4.0 * ru + 2.0 * u * ruu,
                        2.0 * rv + 2.0 * u * ruv,
                        2.0 * u * rvv,
                        6.0 * ruu + 2.0 * u * ruuu,
                        4.0 * ruv + 2.0 * u * ruuv,
                        2.0 * rvv + 2.0 * u * ruvv,
                        2.0 * u * rvvv,
                    ]),
                    // x² = 2v·r.
                    Jet::from_coeffs([
                        2.0 * v * r,
                        2.0 * v * ru,
                        2.0 * r + 2.0 * v * rv,
                        2.0 * v * ruu,
                        2.0 * ru + 2.0 * v * ruv,
                        4.0 * rv + 2.0 * v * rvv,
                        2.0 * v * ruuu,
                        2.0 * ruu + 2.0 * v * ruuv,
                        4.0 * ruv + 2.0 * v * ruvv,
                        6.0 * rvv + 2.0 * v * rvvv,
                    ]),
                    // x³ = 1 − 2r.
                    Jet::from_coeffs([
                        1.0 - 2.0 * r,
                        -2.0 * ru,
                        -2.0 * rv,
                        -2.0 * ruu,
                        -2.0 * ruv,
                        -2.0 * rvv,
                        -2.0 * ruuu,
                        -2.0 * ruuv,
                        -2.0 * ruvv,
                        -2.0 * rvvv,
                    ]),
                    Jet::constant(0.0),
                ]
            }
            Builtin::Z3 => vec![
                Jet::variable(Var::U, u),
                Jet::variable(Var::V, v),
                Jet::from_coeffs([
                    u * u * u - 3.0 * u * v * v,
                    3.0 * u * u - 3.0 * v * v,
                    -6.0 * u * v,
                    6.0 * u,
                    -6.0 * v,
                    -6.0 * u,
                    6.0,
                    0.0,
                    -6.0,
                    0.0,
                ]),
                Jet::from_coeffs([
                    3.0 * u * u * v - v * v * v,
                    6.0 * u * v,
                    3.0 * u * u - 3.0 * v * v,
                    6.0 * v,
                    6.0 * u,
                    -6.0 * v,
                    0.0,
                    6.0,
                    0.0,
                    -6.0,
                ]),
            ],
            Builtin::Enneper => vec![
                Jet::from_coeffs([
                    u - u * u * u / 3.0 + u * v * v,
                    1.0 - u * u + v * v,
                    2.0 * u * v,
                    -2.0 * u,
                    2.0 * v,
                    2.0 * u,
                    -2.0,
                    0.0,
                    2.0,
                    0.0,
                ]),
                Jet::from_coeffs([
                    -v + v * v * v / 3.0 - u * u * v,
                    -2.0 * u * v,
                    -1.0 + v * v - u * u,
                    -2.0 * v,
                    -2.0 * u,
                    2.0 * v,
                    0.0,
                    -2.0,
                    0.0,
                    2.0,
                ]),
                Jet::from_coeffs([
                    u * u - v * v,
                    2.0 * u,
                    -2.0 * v,
                    2.0,
                    0.0,
                    -2.0,
                    0.0,
                    0.0,
                    0.0,
                    0.0,
                ]),
            ],
        }
    }

    /// Component values only, via the same closed forms.
    fn values(&self, u: f64, v: f64) -> Vec<f64> {
        match self {
            Builtin::Plane => vec![u, v, 0.0, 0.0],
            Builtin::W2 => vec![u, v, u * u - v * v, 2.0 * u * v],
            Builtin::Clifford => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                vec![s * u.cos(), s * u.sin(), s * v.cos(), s * v.sin()]
            }
            Builtin::Sphere => {
                let r = 1.0 / (1.0 + u * u + v * v);
                vec![2.0 * u * r, 2.0 * v * r, 1.0 - 2.0 * r, 0.0]
            }
            Builtin::Z3 => vec![
                u,
                v,
                u * u * u - 3.0 * u * v * v,
                3.0 * u * u * v - v * v * v,
            ],
            Builtin::Enneper => vec![
                u - u * u * u / 3.0 + u * v * v,
                -v + v * v * v / 3.0 - u * u * v,
                u * u - v * v,
            ],
        }
    }
}

#[derive(Debug, Clone)]
enum Form {
    Builtin(Builtin),
    Graph(Vec<Expr>),
    Parametric(Vec<Expr>),
}

/// A validated, evaluable surface.
#[derive(Debug, Clone)]
pub struct Surface {
    pub name: String,
    pub n: usize,
    pub radius: f64,
    scale: f64,
    form: Form,
}

/// The order-3 jet of the immersion at one parameter point: one scalar jet
/// per ambient component.
#[derive(Debug, Clone)]
pub struct VectorJet {
    pub u: f64,
    pub v: f64,
    pub comps: Vec<Jet>,
}

impl VectorJet {
    pub fn n(&self) -> usize {
        self.comps.len()
    }

    /// Position values X(u, v).
    pub fn values(&self) -> Vec<f64> {
        self.comps.iter().map(|c| c.value()).collect()
    }

    /// First-derivative values of every component: the tangent vector X_{u^i}.
    pub fn d1_values(&self, i: usize) -> Vec<f64> {
        self.comps.iter().map(|c| c.d(i)).collect()
    }

    /// Second-derivative values X_{u^i u^j}.
    pub fn d2_values(&self, i: usize, j: usize) -> Vec<f64> {
        self.comps.iter().map(|c| c.dd(i, j)).collect()
    }

    /// The tangent field X_{u^i} as order-2 jets.
    pub fn tangent(&self, i: usize) -> Vec<Jet2> {
        self.comps.iter().map(|c| c.deriv(i)).collect()
    }
}

fn positive(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(Error::Spec(format!("`{name}` must be positive and finite, got {x}")))
    }
}

impl Surface {
    /// Validate and compile a raw spec document.
    pub fn from_spec(spec: &SurfaceSpec) -> Result<Surface> {
        let radius = positive("radius", spec.radius.unwrap_or(1.0))?;
        match spec.kind.as_str() {
            "builtin" => {
                let id = spec.id.as_deref().ok_or_else(|| {
                    Error::Spec("kind `builtin` requires an `id` field".into())
                })?;
                let b = Builtin::from_id(id).ok_or_else(|| {
                    let known: Vec<&str> = Builtin::ALL.iter().map(|b| b.id()).collect();
                    Error::Spec(format!(
                        "unknown builtin `{id}` (known: {})",
                        known.join(", ")
                    ))
                })?;
                if spec.components.is_some() {
                    return Err(Error::Spec(
                        "`components` is not allowed for kind `builtin`".into(),
                    ));
                }
                if let Some(n) = spec.n {
                    if n != b.n() {
                        return Err(Error::Spec(format!(
                            "builtin `{id}` lives in R^{}, but the spec says n = {n}",
                            b.n()
                        )));
                    }
                }
                let mut scale = 1.0;
                if let Some(params) = &spec.params {
                    for (key, value) in params {
                        match key.as_str() {
                            "scale" => scale = positive("params.scale", *value)?,
                            other => {
                                return Err(Error::Spec(format!(
                                    "builtin `{id}` does not accept parameter `{other}`"
                                )))
                            }
                        }
                    }
                }
                Ok(Surface {
                    name: spec.name.clone().unwrap_or_else(|| id.to_string()),
                    n: b.n(),
                    radius,
                    scale,
                    form: Form::Builtin(b),
                })
            }
            "graph" => {
                let comps = spec.components.as_ref().ok_or_else(|| {
                    Error::Spec("kind `graph` requires `components`".into())
                })?;
                let n = spec.n.unwrap_or(comps.len() + 2);
                if n < 3 {
                    return Err(Error::Spec(format!("n must be at least 3, got {n}")));
                }
                if comps.len() != n - 2 {
                    return Err(Error::Spec(format!(
                        "graph immersion into R^{n} needs {} component expression(s), got {}",
                        n - 2,
                        comps.len()
                    )));
                }
                let parsed = comps
                    .iter()
                    .map(|src| expr::parse_expression(src, &["x", "y"]))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Surface {
                    name: spec.name.clone().unwrap_or_else(|| "graph".into()),
                    n,
                    radius,
                    scale: 1.0,
                    form: Form::Graph(parsed),
                })
            }
            "parametric" => {
                let comps = spec.components.as_ref().ok_or_else(|| {
                    Error::Spec("kind `parametric` requires `components`".into())
                })?;
                let n = spec.n.unwrap_or(comps.len());
                if n < 3 {
                    return Err(Error::Spec(format!("n must be at least 3, got {n}")));
                }
                if comps.len() != n {
                    return Err(Error::Spec(format!(
                        "parametric immersion into R^{n} needs {n} component expressions, got {}",
                        comps.len()
                    )));
                }
                let parsed = comps
                    .iter()
                    .map(|src| expr::parse_expression(src, &["u", "v"]))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Surface {
                    name: spec.name.clone().unwrap_or_else(|| "parametric".into()),
                    n,
                    radius,
                    scale: 1.0,
                    form: Form::Parametric(parsed),
                })
            }
            other => Err(Error::Spec(format!(
                "unknown kind `{other}` (expected builtin, graph, or parametric)"
            ))),
        }
    }

    /// Parse a JSON spec document and compile it.
    pub fn from_json_str(text: &str) -> Result<Surface> {
        let spec: SurfaceSpec =
            serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        Surface::from_spec(&spec)
    }

    /// Read and compile a spec file.
    pub fn load(path: &std::path::Path) -> Result<Surface> {
        let text = std::fs::read_to_string(path)?;
        Surface::from_json_str(&text)
    }

    /// Catalog surface with defaults (radius 1, scale 1).
    pub fn builtin(b: Builtin) -> Surface {
        Surface {
            name: b.id().to_string(),
            n: b.n(),
            radius: 1.0,
            scale: 1.0,
            form: Form::Builtin(b),
        }
    }

    /// The same surface dilated in the ambient space: X ↦ λ·X.
    pub fn scaled(&self, lambda: f64) -> Result<Surface> {
        let lambda = positive("scale", lambda)?;
        let mut s = self.clone();
        s.scale *= lambda;
        Ok(s)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn check_domain(&self, u: f64, v: f64) -> Result<()> {
        if u * u + v * v <= self.radius * self.radius * (1.0 + tol::EPS_DOMAIN) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { u, v, radius: self.radius })
        }
    }

    /// Order-3 jet of the immersion at an in-domain point.
    pub fn jet3(&self, u: f64, v: f64) -> Result<VectorJet> {
        self.check_domain(u, v)?;
        self.jet3_at(u, v)
    }

    /// Order-3 jet without the domain check. Estimate sweeps use this with
    /// grids whose radius is an experiment parameter rather than the spec's.
    pub fn jet3_at(&self, u: f64, v: f64) -> Result<VectorJet> {
        let at = |e: JetError| Error::EvalDomain { source: e, u, v, offset: None };
        let mut comps = match &self.form {
            Form::Builtin(b) => b.jets(u, v),
            Form::Graph(phis) => {
                let uj = Jet::variable(Var::U, u);
                let vj = Jet::variable(Var::V, v);
                let bindings = [("x", uj), ("y", vj)];
                let mut comps = vec![uj, vj];
                for phi in phis {
                    comps.push(locate(expr::evaluate_on_jets(phi, &bindings), u, v)?);
                }
                comps
            }
            Form::Parametric(exprs) => {
                let bindings =
                    [("u", Jet::variable(Var::U, u)), ("v", Jet::variable(Var::V, v))];
                exprs
                    .iter()
                    .map(|e| locate(expr::evaluate_on_jets(e, &bindings), u, v))
                    .collect::<Result<Vec<_>>>()?
            }
        };
        if self.scale != 1.0 {
            for c in comps.iter_mut() {
                *c = *c * self.scale;
            }
        }
        for c in &comps {
            if !c.is_finite() {
                return Err(at(JetError::Domain { func: "evaluate", value: f64::NAN }));
            }
        }
        Ok(VectorJet { u, v, comps })
    }

    /// Component values only, computed along the plain-float path (closed
    /// forms for builtins, float expression evaluation otherwise). This is a
    /// path independent of jet arithmetic.
    pub fn values_at(&self, u: f64, v: f64) -> Result<Vec<f64>> {
        let mut vals = match &self.form {
            Form::Builtin(b) => b.values(u, v),
            Form::Graph(phis) => {
                let bindings = [("x", u), ("y", v)];
                let mut vals = vec![u, v];
                for phi in phis {
                    vals.push(locate(expr::evaluate_values(phi, &bindings), u, v)?);
                }
                vals
            }
            Form::Parametric(exprs) => {
                let bindings = [("u", u), ("v", v)];
                exprs
                    .iter()
                    .map(|e| locate(expr::evaluate_values(e, &bindings), u, v))
                    .collect::<Result<Vec<_>>>()?
            }
        };
        if self.scale != 1.0 {
            for x in vals.iter_mut() {
                *x *= self.scale;
            }
        }
        Ok(vals)
    }

    /// How far the parametrization is from conformal at a point:
    /// max(| |Xu|² − |Xv|² |, |Xu·Xv|) / max(W, ε_reg). Zero means isothermal
    /// parameters; the quantity is invariant under uniform dilation.
    pub fn conformality_defect(&self, u: f64, v: f64) -> Result<f64> {
        let x = self.jet3(u, v)?;
        let xu = x.d1_values(0);
        let xv = x.d1_values(1);
        let e = dot(&xu, &xu);
        let g = dot(&xv, &xv);
        let f = dot(&xu, &xv);
        let det = e * g - f * f;
        let w = det.max(0.0).sqrt();
        Ok(((e - g).abs().max(f.abs())) / w.max(tol::EPS_REG))
    }
}

fn locate<T>(r: Result<T>, u: f64, v: f64) -> Result<T> {
    r.map_err(|e| match e {
        Error::EvalDomain { source, offset, .. } => Error::EvalDomain { source, u, v, offset },
        other => other,
    })
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Summary of a regularity sweep over a grid.
#[derive(Debug, Clone, Serialize)]
pub struct RegularityReport {
    pub surface: String,
    pub grid_size: usize,
    pub radius: f64,
    pub points: usize,
    /// Nodes where det g fell below the regularity threshold.
    pub failures: usize,
    pub min_w: f64,
    pub argmin_u: f64,
    pub argmin_v: f64,
    pub max_conformality_defect: f64,
    pub mean_conformality_defect: f64,
    pub ok: bool,
}

/// Evaluate W and the conformality defect on every in-disc node. A node
/// fails when det g ≤ ε_reg²; the report aggregates rather than erroring, so
/// degenerate test specs can be inspected.
pub fn regularity_check(surface: &Surface, grid: &DiscGrid) -> Result<RegularityReport> {
    use rayon::prelude::*;
    let nodes = grid.nodes();
    let samples: Vec<(f64, Option<f64>)> = nodes
        .par_iter()
        .map(|node| {
            let x = surface.jet3_at(node.u, node.v)?;
            let xu = x.d1_values(0);
            let xv = x.d1_values(1);
            let e = dot(&xu, &xu);
            let g = dot(&xv, &xv);
            let f = dot(&xu, &xv);
            let det = e * g - f * f;
            let w = det.max(0.0).sqrt();
            let defect = if det > tol::EPS_REG * tol::EPS_REG {
                Some(((e - g).abs().max(f.abs())) / w)
            } else {
                None
            };
            Ok((w, defect))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut failures = 0usize;
    let mut min_w = f64::INFINITY;
    let mut argmin = (0.0, 0.0);
    let mut max_defect: f64 = 0.0;
    let mut defect_sum = 0.0;
    let mut defect_count = 0usize;
    for (node, (w, defect)) in nodes.iter().zip(samples.iter()) {
        if *w < min_w {
            min_w = *w;
            argmin = (node.u, node.v);
        }
        match defect {
            Some(d) => {
                max_defect = max_defect.max(*d);
                defect_sum += d;
                defect_count += 1;
            }
            None => failures += 1,
        }
    }
    Ok(RegularityReport {
        surface: surface.name.clone(),
        grid_size: grid.size,
        radius: grid.radius,
        points: nodes.len(),
        failures,
        min_w,
        argmin_u: argmin.0,
        argmin_v: argmin.1,
        max_conformality_defect: max_defect,
        mean_conformality_defect: if defect_count > 0 {
            defect_sum / defect_count as f64
        } else {
            0.0
        },
        ok: failures == 0,
    })
}
