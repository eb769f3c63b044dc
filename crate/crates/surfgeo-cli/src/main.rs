//! Command-line front door for the surfgeo library: load a surface spec, run
//! one analysis or experiment, and emit a machine report.
//!
//! Output policy (deterministic, byte-identical across runs and thread
//! counts):
//! - with `--out PATH`, the machine report (JSON, or CSV for tabular
//!   reports) is written to PATH and a short human summary goes to stdout;
//! - without `--out`, the machine report itself goes to stdout.
//!
//! Exit codes: 0 success; 1 invalid input (bad spec, bad arguments,
//! out-of-domain point); 2 regularity failure; 3 numerical failure;
//! 4 `validate` found failing invariants.

// `!(x > 0.0)` deliberately routes NaN into the rejecting branch; the
// "clearer" `x <= 0.0` would accept NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::{Path, PathBuf};
use surfgeo::analysis::{analyze_point, PointAnalysis};
use surfgeo::bundle::{flatness_scan, synthesize_torsion_free, NormalCurvature, RicciCheck};
use surfgeo::bundle::{FlatnessReport, SynthesisReport};
use surfgeo::error::{Error, ErrorClass, Result};
use surfgeo::estimates::{
    dirichlet_energy_and_geodesic_radius, growth_exponent_fit, heinz_quantity_r3, kn_quantity_rn,
    osserman_angle, pmc_residual, structure_constant_check, MeanCurvatureField,
};
use surfgeo::geometry::{FirstForm, SectionData};
use surfgeo::grid::DiscGrid;
use surfgeo::surface::Surface;
use surfgeo::validate::{run_all, CheckResult};

#[derive(Parser)]
#[command(
    name = "surfgeo",
    version,
    about = "Outer differential geometry of immersed 2-surfaces in R^n",
    long_about = None
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full pointwise geometry report at one parameter point.
    Inspect {
        /// Surface spec document (JSON).
        spec: PathBuf,
        /// Evaluation point as `u,v`.
        #[arg(long, default_value = "0,0", value_name = "u,v")]
        at: String,
        /// Write the JSON report here instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// CSV table of geometry fields over the parameter disc (row-major).
    Scan {
        spec: PathBuf,
        /// Grid size per axis; odd, at least 9 (default 65).
        #[arg(long, value_name = "N")]
        grid: Option<usize>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Normal-bundle flatness verdict plus a torsion-free synthesis attempt.
    Flatness {
        spec: PathBuf,
        #[arg(long, value_name = "N")]
        grid: Option<usize>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run one curvature-estimate experiment.
    Estimate {
        spec: PathBuf,
        #[arg(long, value_enum)]
        experiment: Experiment,
        /// Grid size per axis (defaults: 129 for kn/growth/energy, 65 for
        /// pmc/structure/osserman; heinz is pointwise and takes none).
        #[arg(long, value_name = "N")]
        grid: Option<usize>,
        /// Radii for sweep experiments, comma-separated, positive, strictly
        /// increasing (heinz default 1; kn/growth default 10,30,100).
        #[arg(long = "R", value_name = "a,b,c")]
        radii: Option<String>,
        /// Prescribed-mean-curvature field document (pmc only; default is
        /// the zero field).
        #[arg(long, value_name = "PATH")]
        field: Option<PathBuf>,
        /// Mean-curvature sup bound for the structure check (default 1).
        #[arg(long = "h0", value_name = "X")]
        h0: Option<f64>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run the complete invariant suite across the builtin catalog.
    Validate {
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Experiment {
    Heinz,
    Kn,
    Growth,
    Pmc,
    Structure,
    Osserman,
    Energy,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version land here too; those are not errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    surfgeo::init_thread_pool_from_env();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e.class() {
                ErrorClass::InvalidInput => 1,
                ErrorClass::Regularity => 2,
                ErrorClass::Numerical => 3,
            }
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Inspect { spec, at, out } => cmd_inspect(&spec, &at, out.as_deref()),
        Cmd::Scan { spec, grid, out } => cmd_scan(&spec, grid.unwrap_or(65), out.as_deref()),
        Cmd::Flatness { spec, grid, out } => {
            cmd_flatness(&spec, grid.unwrap_or(65), out.as_deref())
        }
        Cmd::Estimate { spec, experiment, grid, radii, field, h0, out } => {
            cmd_estimate(&spec, experiment, grid, radii.as_deref(), field.as_deref(), h0, out.as_deref())
        }
        Cmd::Validate { out } => cmd_validate(out.as_deref()),
    }
}

// ---------------------------------------------------------------------------
// Argument parsing helpers.
// ---------------------------------------------------------------------------

fn parse_point(raw: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Config(format!("--at expects `u,v`, got `{raw}`")));
    }
    let u: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("--at: `{}` is not a number", parts[0])))?;
    let v: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("--at: `{}` is not a number", parts[1])))?;
    if !u.is_finite() || !v.is_finite() {
        return Err(Error::Config(format!("--at: point must be finite, got `{raw}`")));
    }
    Ok((u, v))
}

fn parse_radii(raw: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in raw.split(',') {
        let r: f64 = part
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("--R: `{part}` is not a number")))?;
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Config(format!("--R: radii must be positive, got {r}")));
        }
        out.push(r);
    }
    if out.is_empty() {
        return Err(Error::Config("--R: expected at least one radius".into()));
    }
    if out.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(format!("--R: radii must be strictly increasing, got `{raw}`")));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Report emission.
// ---------------------------------------------------------------------------

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Numerics(format!("report serialization: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn wants_csv(out: Option<&Path>) -> bool {
    out.and_then(Path::extension).is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

/// Write the machine report to `--out` and the summary to stdout, or print
/// the machine report to stdout when no `--out` was given.
fn emit(out: Option<&Path>, machine: &str, summary: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, machine.as_bytes())?;
            println!("{summary}");
            println!("report written to {}", path.display());
        }
        None => print!("{machine}"),
    }
    Ok(())
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = String::new();
    s.push_str(&header.join(","));
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    experiment: &'static str,
    report: T,
}

fn envelope<T: Serialize>(experiment: &'static str, report: T) -> Result<String> {
    to_json(&Envelope { experiment, report })
}

// ---------------------------------------------------------------------------
// inspect
// ---------------------------------------------------------------------------

/// Serializable flat view of a [`PointAnalysis`].
#[derive(Serialize)]
struct InspectReport {
    surface: String,
    n: usize,
    u: f64,
    v: f64,
    /// X(u, v).
    position: Vec<f64>,
    /// ∂X/∂u and ∂X/∂v.
    d_u: Vec<f64>,
    d_v: Vec<f64>,
    first_form: FirstForm,
    conformality_defect: f64,
    /// Orthonormal normal frame values, one vector per section.
    normals: Vec<Vec<f64>>,
    sections: Vec<SectionData>,
    /// Torsion values indexed [Sigma][Omega][i]: N_Sigma,u^i · N_Omega.
    torsion_sigma: Vec<Vec<[f64; 2]>>,
    weingarten_residual: f64,
    /// S_{1,12}^2 — only for surfaces in R^4.
    #[serde(skip_serializing_if = "Option::is_none")]
    s_1_12_2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    normal_curvature: Option<NormalCurvature>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ricci: Option<RicciCheck>,
}

impl InspectReport {
    fn build(surface: &Surface, a: &PointAnalysis) -> InspectReport {
        InspectReport {
            surface: surface.name.clone(),
            n: surface.n,
            u: a.u,
            v: a.v,
            position: a.x.values(),
            d_u: a.x.d1_values(0),
            d_v: a.x.d1_values(1),
            first_form: a.ff.clone(),
            conformality_defect: a.conformality_defect,
            normals: a.frame.values(),
            sections: a.sections.clone(),
            torsion_sigma: a.sigma.clone(),
            weingarten_residual: a.weingarten_residual,
            s_1_12_2: a.curvature.as_ref().map(|c| c.s_1_12_2()),
            normal_curvature: a.curvature.clone(),
            ricci: a.ricci.clone(),
        }
    }
}

fn cmd_inspect(spec: &Path, at: &str, out: Option<&Path>) -> Result<i32> {
    if wants_csv(out) {
        return Err(Error::Config("inspect reports are JSON; use a non-.csv --out path".into()));
    }
    let surface = Surface::load(spec)?;
    let (u, v) = parse_point(at)?;
    let a = analyze_point(&surface, u, v)?;
    let report = InspectReport::build(&surface, &a);
    let mut summary = format!(
        "{} (n = {}) at (u, v) = ({}, {})\nW = {}, conformality defect = {:.3e}\n",
        report.surface, report.n, u, v, report.first_form.w, report.conformality_defect
    );
    for s in &report.sections {
        summary.push_str(&format!(
            "section {}: H = {}, K = {}, kappa = [{}, {}]\n",
            s.index, s.h, s.k, s.kappa[0], s.kappa[1]
        ));
    }
    if let Some(s) = report.s_1_12_2 {
        summary.push_str(&format!("S_1_12_2 = {s}\n"));
    }
    if let Some(rc) = &report.ricci {
        summary.push_str(&format!("ricci residual = {:.3e}\n", rc.residual));
    }
    summary.push_str(&format!("weingarten residual = {:.3e}", report.weingarten_residual));
    emit(out, &to_json(&report)?, &summary)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// scan
// ---------------------------------------------------------------------------

fn cmd_scan(spec: &Path, grid_size: usize, out: Option<&Path>) -> Result<i32> {
    let surface = Surface::load(spec)?;
    let grid = DiscGrid::new(grid_size, surface.radius)?;
    let sections = surface.n - 2;

    let mut header: Vec<String> = ["iu", "iv", "u", "v"].iter().map(|s| s.to_string()).collect();
    for k in 1..=surface.n {
        header.push(format!("x_{k}"));
    }
    header.extend(
        ["g11", "g12", "g22", "w", "conformality_defect", "weingarten_residual"]
            .iter()
            .map(|s| s.to_string()),
    );
    for s in 1..=sections {
        header.extend([
            format!("h_{s}"),
            format!("k_{s}"),
            format!("kappa1_{s}"),
            format!("kappa2_{s}"),
        ]);
    }
    if surface.n == 4 {
        header.extend(
            ["sigma_1_1_2", "sigma_1_2_2", "s_1_12_2", "ricci_residual"]
                .iter()
                .map(|s| s.to_string()),
        );
    }

    let mut rows = Vec::new();
    for node in grid.nodes() {
        let a = analyze_point(&surface, node.u, node.v)?;
        let mut row: Vec<String> = vec![
            node.iu.to_string(),
            node.iv.to_string(),
            node.u.to_string(),
            node.v.to_string(),
        ];
        for x in a.x.values() {
            row.push(x.to_string());
        }
        row.extend([
            a.ff.g[0][0].to_string(),
            a.ff.g[0][1].to_string(),
            a.ff.g[1][1].to_string(),
            a.ff.w.to_string(),
            a.conformality_defect.to_string(),
            a.weingarten_residual.to_string(),
        ]);
        for s in &a.sections {
            row.extend([
                s.h.to_string(),
                s.k.to_string(),
                s.kappa[0].to_string(),
                s.kappa[1].to_string(),
            ]);
        }
        if surface.n == 4 {
            row.extend([
                a.sigma[0][1][0].to_string(),
                a.sigma[0][1][1].to_string(),
                a.curvature.as_ref().map(|c| c.s_1_12_2()).unwrap_or(f64::NAN).to_string(),
                a.ricci.as_ref().map(|r| r.residual).unwrap_or(f64::NAN).to_string(),
            ]);
        }
        rows.push(row);
    }

    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let csv = csv_table(&header_refs, &rows);
    let summary = format!(
        "{}: {} in-disc nodes on a {}x{} grid, {} columns",
        surface.name,
        rows.len(),
        grid_size,
        grid_size,
        header.len()
    );
    emit(out, &csv, &summary)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// flatness
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct FlatnessCommandReport {
    flatness: FlatnessReport,
    synthesis: SynthesisReport,
}

fn cmd_flatness(spec: &Path, grid_size: usize, out: Option<&Path>) -> Result<i32> {
    if wants_csv(out) {
        return Err(Error::Config("flatness reports are JSON; use a non-.csv --out path".into()));
    }
    let surface = Surface::load(spec)?;
    let grid = DiscGrid::new(grid_size, surface.radius)?;
    let flatness = flatness_scan(&surface, &grid)?;
    let synthesis = synthesize_torsion_free(&surface, &grid)?;
    let summary = format!(
        "{}: flat = {} (max |S| = {:.6e} at ({}, {}), tol {:.1e})\n\
         synthesis success = {} (max rotated torsion = {:.6e}, tol {:.3e})\n\
         integrability obstruction at center = {}",
        flatness.surface,
        flatness.flat,
        flatness.max_abs_s,
        flatness.argmax_u,
        flatness.argmax_v,
        flatness.tol_flat,
        synthesis.success,
        synthesis.max_rotated_torsion,
        synthesis.tol_sync,
        synthesis.obstruction_at_center
    );
    let report = FlatnessCommandReport { flatness, synthesis };
    emit(out, &to_json(&report)?, &summary)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// estimate
// ---------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
fn cmd_estimate(
    spec: &Path,
    experiment: Experiment,
    grid: Option<usize>,
    radii: Option<&str>,
    field: Option<&Path>,
    h0: Option<f64>,
    out: Option<&Path>,
) -> Result<i32> {
    // Flags that only apply to specific experiments are rejected elsewhere,
    // not silently ignored.
    if field.is_some() && experiment != Experiment::Pmc {
        return Err(Error::Config("--field only applies to --experiment pmc".into()));
    }
    if h0.is_some() && experiment != Experiment::Structure {
        return Err(Error::Config("--h0 only applies to --experiment structure".into()));
    }
    if radii.is_some()
        && !matches!(experiment, Experiment::Heinz | Experiment::Kn | Experiment::Growth)
    {
        return Err(Error::Config("--R only applies to heinz, kn, and growth".into()));
    }
    if grid.is_some() && experiment == Experiment::Heinz {
        return Err(Error::Config(
            "heinz is evaluated at the origin only; --grid does not apply".into(),
        ));
    }
    let csv = wants_csv(out);
    if csv && !matches!(experiment, Experiment::Heinz | Experiment::Kn | Experiment::Growth) {
        return Err(Error::Config(
            "CSV output is only defined for the sweep experiments heinz, kn, and growth".into(),
        ));
    }

    let surface = Surface::load(spec)?;
    let r_list = match radii {
        Some(raw) => parse_radii(raw)?,
        None => match experiment {
            Experiment::Heinz => vec![1.0],
            Experiment::Kn | Experiment::Growth => vec![10.0, 30.0, 100.0],
            _ => Vec::new(),
        },
    };

    match experiment {
        Experiment::Heinz => {
            let rows = r_list
                .iter()
                .map(|&r| heinz_quantity_r3(&surface, r))
                .collect::<Result<Vec<_>>>()?;
            let mut summary = String::new();
            let mut csv_rows = Vec::new();
            for rep in &rows {
                summary.push_str(&format!(
                    "R = {}: (kappa1^2 + kappa2^2)(0) * R^2 = {} (conformal bound {})\n",
                    rep.r, rep.quantity, rep.bound_quantity
                ));
                csv_rows.push(vec![
                    rep.r.to_string(),
                    rep.kappa_sq_sum.to_string(),
                    rep.grad_bound.to_string(),
                    rep.quantity.to_string(),
                    rep.bound_quantity.to_string(),
                ]);
            }
            let table = csv_table(
                &["r", "kappa_sq_sum", "grad_bound", "quantity", "bound_quantity"],
                &csv_rows,
            );
            let machine = if csv || out.is_none() { table } else { envelope("heinz", &rows)? };
            emit(out, &machine, summary.trim_end())?;
        }
        Experiment::Kn => {
            let grid_size = grid.unwrap_or(129);
            let rows = r_list
                .iter()
                .map(|&r| kn_quantity_rn(&surface, r, grid_size))
                .collect::<Result<Vec<_>>>()?;
            let mut summary = String::new();
            let mut csv_rows = Vec::new();
            for rep in &rows {
                summary.push_str(&format!(
                    "R = {}: quantity per section = {:?}, sup |X| = {}, origin bound = {}\n",
                    rep.r, rep.quantities, rep.sup_norm, rep.k_bound_origin
                ));
                for (i, (k_abs, q)) in rep.k_abs.iter().zip(rep.quantities.iter()).enumerate() {
                    csv_rows.push(vec![
                        rep.r.to_string(),
                        rep.grid_size.to_string(),
                        rep.sup_norm.to_string(),
                        (i + 1).to_string(),
                        k_abs.to_string(),
                        q.to_string(),
                        rep.k_bound_origin.to_string(),
                        rep.harmonicity_residual.to_string(),
                    ]);
                }
            }
            let table = csv_table(
                &[
                    "r",
                    "grid_size",
                    "sup_norm",
                    "section",
                    "k_abs",
                    "quantity",
                    "k_bound_origin",
                    "harmonicity_residual",
                ],
                &csv_rows,
            );
            let machine = if csv || out.is_none() { table } else { envelope("kn", &rows)? };
            emit(out, &machine, summary.trim_end())?;
        }
        Experiment::Growth => {
            let grid_size = grid.unwrap_or(129);
            let fit = growth_exponent_fit(&surface, &r_list, grid_size)?;
            let summary = format!(
                "growth fit over {} radii: epsilon = {}, omega = {}, degenerate = {}",
                fit.points.len(),
                fit.epsilon,
                fit.omega,
                fit.degenerate
            );
            let machine = if csv {
                let rows: Vec<Vec<String>> = fit
                    .points
                    .iter()
                    .map(|(r, sup)| vec![r.to_string(), sup.to_string()])
                    .collect();
                csv_table(&["r", "sup_norm"], &rows)
            } else {
                envelope("growth", &fit)?
            };
            emit(out, &machine, &summary)?;
        }
        Experiment::Pmc => {
            let grid_size = grid.unwrap_or(65);
            let g = DiscGrid::new(grid_size, surface.radius)?;
            let f = match field {
                Some(path) => MeanCurvatureField::load(path)?,
                None => MeanCurvatureField::zero(),
            };
            let rep = pmc_residual(&surface, &f, &g)?;
            let summary = format!(
                "max residual {} at ({}, {}); mean residual {}",
                rep.max_residual, rep.argmax_u, rep.argmax_v, rep.mean_residual
            );
            emit(out, &envelope("pmc", &rep)?, &summary)?;
        }
        Experiment::Structure => {
            let grid_size = grid.unwrap_or(65);
            let g = DiscGrid::new(grid_size, surface.radius)?;
            let rep = structure_constant_check(&surface, h0.unwrap_or(1.0), &g)?;
            let summary = format!(
                "max |laplacian| / |gradient|^2 = {} at ({}, {}); h0 = {}: {}",
                rep.max_ratio,
                rep.argmax_u,
                rep.argmax_v,
                rep.h0,
                if rep.pass { "pass" } else { "fail" }
            );
            emit(out, &envelope("structure", &rep)?, &summary)?;
        }
        Experiment::Osserman => {
            let grid_size = grid.unwrap_or(65);
            let g = DiscGrid::new(grid_size, surface.radius)?;
            let rep = osserman_angle(&surface, &g)?;
            let summary = format!(
                "min normal angle {} (sin = {}) at ({}, {}), section {}",
                rep.min_angle, rep.min_sin, rep.argmin_u, rep.argmin_v, rep.section
            );
            emit(out, &envelope("osserman", &rep)?, &summary)?;
        }
        Experiment::Energy => {
            let grid_size = grid.unwrap_or(129);
            let g = DiscGrid::new(grid_size, surface.radius)?;
            let rep = dirichlet_energy_and_geodesic_radius(&surface, &g)?;
            let summary = format!(
                "dirichlet energy {}; geodesic radius upper bound {}; d0 lower bound {}",
                rep.dirichlet_energy, rep.geodesic_radius_upper, rep.d0_estimate
            );
            emit(out, &envelope("energy", &rep)?, &summary)?;
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ValidateReport {
    total: usize,
    passed: usize,
    failed: Vec<&'static str>,
    ok: bool,
    checks: Vec<CheckResult>,
}

fn cmd_validate(out: Option<&Path>) -> Result<i32> {
    if wants_csv(out) {
        return Err(Error::Config("validate reports are JSON; use a non-.csv --out path".into()));
    }
    let checks = run_all();
    let failed: Vec<&'static str> =
        checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
    let report = ValidateReport {
        total: checks.len(),
        passed: checks.len() - failed.len(),
        failed: failed.clone(),
        ok: failed.is_empty(),
        checks,
    };
    let mut summary = String::new();
    for c in &report.checks {
        summary.push_str(&format!(
            "{} {} — {}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        ));
    }
    summary.push_str(&format!("{}/{} invariants passed", report.passed, report.total));
    emit(out, &to_json(&report)?, &summary)?;
    if report.ok {
        Ok(0)
    } else {
        eprintln!("failed invariants: {}", failed.join(", "));
        Ok(4)
    }
}
