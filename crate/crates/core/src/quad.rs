//! Small quadrature toolbox: Gauss-Legendre panels plus helpers for
//! endpoint-singular and semi-infinite integrands.
//!
//! Used by the test oracles (characteristic-function inversion, per-term
//! power integrals, moment expectations), not by the estimator itself.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GlTable {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn legendre_table(n: usize) -> GlTable {
    // Newton iteration on P_n roots, seeded by the Chebyshev-like estimate.
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // P_n(x) and P_n'(x) by the three-term recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    GlTable { nodes, weights }
}

pub fn gl16() -> &'static GlTable {
    static T: OnceLock<GlTable> = OnceLock::new();
    T.get_or_init(|| legendre_table(16))
}

pub fn gl32() -> &'static GlTable {
    static T: OnceLock<GlTable> = OnceLock::new();
    T.get_or_init(|| legendre_table(32))
}

/// Single Gauss-Legendre panel over [a, b].
pub fn gl_panel<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, table: &GlTable) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in table.nodes.iter().zip(&table.weights) {
        acc += w * f(c + h * x);
    }
    acc * h
}

/// Integral over [0, a] of an integrand that is smooth away from 0 but may
/// have fractional-power behaviour at 0 (value 0 there). Dyadic panels
/// toward the origin, each integrated with a 32-point rule.
pub fn integrate_to_zero<F: FnMut(f64) -> f64>(mut f: F, a: f64) -> f64 {
    if a <= 0.0 {
        return 0.0;
    }
    let table = gl32();
    let mut total = 0.0;
    let mut hi = a;
    for _ in 0..80 {
        let lo = hi * 0.5;
        let piece = gl_panel(&mut f, lo, hi, table);
        total += piece;
        hi = lo;
        if piece.abs() < 1e-18 * total.abs().max(1e-300) {
            break;
        }
    }
    total
}

/// Integral over [a, infinity) of a decaying integrand, by log-spaced panels
/// of ratio `ratio`, stopping when panel contributions fall below a relative
/// floor. Errors if the integrand has not decayed after `max_panels`.
pub fn integrate_log_tail<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    ratio: f64,
    max_panels: usize,
) -> Result<f64> {
    debug_assert!(a > 0.0 && ratio > 1.0);
    let table = gl32();
    let mut total = 0.0;
    let mut lo = a;
    let mut last = f64::INFINITY;
    for _ in 0..max_panels {
        let hi = lo * ratio;
        let piece = gl_panel(&mut f, lo, hi, table);
        total += piece;
        lo = hi;
        let scale = total.abs().max(1e-300);
        if piece.abs() < 1e-15 * scale && last < 1e-14 * scale {
            return Ok(total);
        }
        last = piece.abs();
    }
    Err(Error::QuadratureFailure(format!(
        "tail integral from {a} did not settle within {max_panels} panels"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_tables_integrate_polynomials_exactly() {
        // x^29 over [0,1] is exact for GL16 (degree < 2*16)
        let mut f = |x: f64| x.powi(29);
        let got = gl_panel(&mut f, 0.0, 1.0, gl16());
        assert!((got - 1.0 / 30.0).abs() < 1e-15);
        let mut g = |x: f64| x.powi(63);
        let got = gl_panel(&mut g, 0.0, 1.0, gl32());
        assert!((got - 1.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn fractional_power_to_zero() {
        // integral of u^2.5 on [0, 1.7] = 1.7^3.5/3.5
        let got = integrate_to_zero(|u| u.powf(2.5), 1.7);
        let want = 1.7f64.powf(3.5) / 3.5;
        assert!((got - want).abs() < 1e-13 * want);
    }

    #[test]
    fn power_tail() {
        // integral of u^-3.5 on [2, inf) = 2^-2.5/2.5
        let got = integrate_log_tail(|u| u.powf(-3.5), 2.0, 2.0, 200).unwrap();
        let want = 2.0f64.powf(-2.5) / 2.5;
        assert!((got - want).abs() < 1e-12 * want, "{got} vs {want}");
    }

    #[test]
    fn non_decaying_tail_errors() {
        assert!(integrate_log_tail(|_| 1.0, 1.0, 2.0, 50).is_err());
    }
}
