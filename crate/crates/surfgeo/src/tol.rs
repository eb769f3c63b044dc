//! Centralized numerical thresholds.
//!
//! Every tolerance that affects a verdict (regularity, flatness, synthesis,
//! conformality) lives here with its rationale, so behavior is auditable and
//! consistent across the library, the CLI, and the test suites.

/// Immersion regularity: the first fundamental form is accepted when
/// det g = W² exceeds the square of this bound, i.e. W > 1e-10. Surfaces at
/// this scale are numerically rank-deficient and every downstream quantity
/// (g⁻¹, normal frame, curvatures) would be garbage.
pub const EPS_REG: f64 = 1e-10;

/// Verdict threshold for a flat normal bundle: max |S| over the scanned grid
/// must stay below this. Exact-arithmetic flat cases (Clifford torus, plane,
/// round sphere) land near 1e-16; genuinely curved bundles sit at O(1), so
/// the gap is ten orders of magnitude.
pub const TOL_FLAT: f64 = 1e-6;

/// Gram–Schmidt seed rejection: a candidate normal direction is skipped when
/// its squared norm after projection falls below 1e-8 · W. Scaled by the area
/// element so the rule is invariant under uniform dilation of the surface.
pub const GS_SKIP_FACTOR: f64 = 1e-8;

/// Conformality gate used by operations that require isothermal parameters
/// (mean-curvature-system residuals): defect must not exceed this.
pub const TOL_CONFORMAL: f64 = 1e-6;

/// Relative slack for the domain-membership test |p| ≤ R·(1 + EPS_DOMAIN),
/// so boundary grid nodes generated by exact arithmetic stay inside.
pub const EPS_DOMAIN: f64 = 1e-12;

/// Tolerance for the synthesized rotation to count as torsion-free:
/// max(1e-6, 4h²·diam) where h is the grid spacing and diam the parameter
/// domain diameter. The measurement is quadrature-limited: φ is integrated
/// with the trapezoidal rule and the rotated frame is differentiated with
/// central differences, both O(h²).
pub fn tol_sync(h: f64, diam: f64) -> f64 {
    (4.0 * h * h * diam).max(1e-6)
}
