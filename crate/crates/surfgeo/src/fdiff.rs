//! Richardson-extrapolated central finite differences.
//!
//! This module is the *independent* cross-check for the jet pipeline: it
//! never touches jet arithmetic, only pointwise function values. Each rule
//! combines two (or three) central stencils at steps h and h/2 (and h/4) to
//! cancel the leading error terms.
//!
//! Step sizes are chosen per derivative order to balance truncation against
//! rounding: first and second derivatives use h = 1e-3 (truncation ~1e-13
//! after extrapolation, rounding ~1e-10 for second order), third derivatives
//! use h = 2e-2 with two extrapolation levels (the h³ in the denominator
//! makes smaller steps drown in rounding noise).

/// Default step for first/second derivatives.
pub const STEP_LOW: f64 = 1e-3;
/// Default step for third derivatives.
pub const STEP_THIRD: f64 = 2e-2;

/// First derivative: central difference with one Richardson level, O(h⁴).
pub fn d1<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let stencil = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    (4.0 * stencil(h / 2.0) - stencil(h)) / 3.0
}

/// Second derivative: three-point stencil with one Richardson level, O(h⁴).
pub fn d2<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let stencil = |h: f64| (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    (4.0 * stencil(h / 2.0) - stencil(h)) / 3.0
}

/// Third derivative: five-point antisymmetric stencil with two Richardson
/// levels, O(h⁶) truncation.
pub fn d3<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let stencil = |h: f64| {
        (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h)
    };
    let r1 = (4.0 * stencil(h / 2.0) - stencil(h)) / 3.0;
    let r2 = (4.0 * stencil(h / 4.0) - stencil(h / 2.0)) / 3.0;
    (16.0 * r2 - r1) / 15.0
}

/// Mixed second derivative ∂u∂v via the four-corner stencil with one
/// Richardson level.
pub fn d2_mixed<F: Fn(f64, f64) -> f64>(f: F, u: f64, v: f64, h: f64) -> f64 {
    let stencil = |h: f64| {
        (f(u + h, v + h) - f(u + h, v - h) - f(u - h, v + h) + f(u - h, v - h)) / (4.0 * h * h)
    };
    (4.0 * stencil(h / 2.0) - stencil(h)) / 3.0
}

/// All ten derivative coefficients of f(u, v) through order 3, in jet storage
/// order (value, ∂u, ∂v, ∂uu, ∂uv, ∂vv, ∂uuu, ∂uuv, ∂uvv, ∂vvv), computed
/// purely from point evaluations.
///
/// Mixed third derivatives are built as an outer second difference of an
/// inner first difference (e.g. ∂uuv = ∂uu applied to the FD field v ↦ ∂v f),
/// with the outer step widened so inner noise is not amplified.
pub fn fd_jet<F: Fn(f64, f64) -> f64>(f: &F, u: f64, v: f64) -> [f64; 10] {
    let value = f(u, v);
    let fu = d1(|x| f(x, v), u, STEP_LOW);
    let fv = d1(|y| f(u, y), v, STEP_LOW);
    let fuu = d2(|x| f(x, v), u, STEP_LOW);
    let fvv = d2(|y| f(u, y), v, STEP_LOW);
    let fuv = d2_mixed(f, u, v, STEP_LOW);
    let fuuu = d3(|x| f(x, v), u, STEP_THIRD);
    let fvvv = d3(|y| f(u, y), v, STEP_THIRD);
    let fuuv = d2(|x| d1(|y| f(x, y), v, STEP_THIRD), u, STEP_THIRD);
    let fuvv = d2(|y| d1(|x| f(x, y), u, STEP_THIRD), v, STEP_THIRD);
    [value, fu, fv, fuu, fuv, fvv, fuuu, fuuv, fuvv, fvvv]
}

/// Comparison metric for FD-vs-analytic checks: relative error with a unit
/// floor, |a − b| ≤ tol · max(|a|, |b|, 1). Coefficients whose magnitudes are
/// both below `skip` are considered indistinguishable from zero and pass.
pub fn close(a: f64, b: f64, tol: f64, skip: f64) -> bool {
    if a.abs() < skip && b.abs() < skip {
        return true;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_derivative_of_exp() {
        let d = d1(|x: f64| x.exp(), 0.7, STEP_LOW);
        assert!((d - 0.7_f64.exp()).abs() < 1e-11);
    }

    #[test]
    fn second_derivative_of_sin() {
        let d = d2(|x: f64| x.sin(), 0.4, STEP_LOW);
        assert!((d + 0.4_f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn third_derivative_of_cubic_is_exact_constant() {
        // Truncation vanishes for a cubic; what remains is rounding noise
        // from the h/4 stencil, at the 1e-8 scale.
        let d = d3(|x: f64| x * x * x, 1.3, STEP_THIRD);
        assert!((d - 6.0).abs() < 1e-7);
    }

    #[test]
    fn third_derivative_of_exp2u() {
        // d³/du³ exp(2u) = 8 exp(2u); a stiff case for FD noise.
        let d = d3(|x: f64| (2.0 * x).exp(), 0.9, STEP_THIRD);
        let want = 8.0 * (1.8_f64).exp();
        assert!((d - want).abs() < 1e-6 * want, "got {d}, want {want}");
    }

    #[test]
    fn mixed_second_derivative() {
        // ∂u∂v sin(u)cos(v) = −cos(u)sin(v).
        let d = d2_mixed(|u: f64, v: f64| u.sin() * v.cos(), 0.3, -0.6, STEP_LOW);
        let want = -(0.3_f64.cos()) * (-0.6_f64).sin();
        assert!((d - want).abs() < 1e-9);
    }

    #[test]
    fn fd_jet_of_polynomial() {
        // f = u³ − 3uv², the real part of (u + iv)³: all ten coefficients
        // have closed forms.
        let f = |u: f64, v: f64| u.powi(3) - 3.0 * u * v * v;
        let (u, v) = (0.6, -0.3);
        let got = fd_jet(&f, u, v);
        let want = [
            u.powi(3) - 3.0 * u * v * v,
            3.0 * u * u - 3.0 * v * v,
            -6.0 * u * v,
            6.0 * u,
            -6.0 * v,
            -6.0 * u,
            6.0,
            0.0,
            -6.0,
            0.0,
        ];
        for (i, (g, w)) in got.iter().zip(want.iter()).enumerate() {
            assert!(close(*g, *w, 1e-6, 1e-7), "coeff {i}: got {g}, want {w}");
        }
    }
}
