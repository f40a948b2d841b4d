//! Parameter vector for stable laws and the regime split at `alpha = 1`.
//!
//! The distribution is parameterized by `(alpha, beta, tau, c_tilde)`. The
//! scale `c_tilde` is chosen so that the standardized variable
//! `u = (x - tau) / c_tilde` has the one-parameter-family characteristic
//! function `exp(-|z|^alpha * exp(-i * skew_angle * sgn z))`; see
//! [`StableParams::skew_angle`]. The usual scale `c` of the characteristic
//! function is recovered by [`StableParams::scale_c`].

use crate::error::{Error, Result};

/// Smallest admissible `alpha`.
pub const ALPHA_MIN: f64 = 1e-3;
/// Half-width of the excluded band around `alpha = 1` and the gap below `2`.
pub const ALPHA_GAP: f64 = 1e-6;
/// Largest admissible `|beta|`.
pub const BETA_MAX: f64 = 1.0 - 1e-9;

/// The two `alpha` ranges handled by separate series expansions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `1 < alpha < 2`
    Upper,
    /// `0 < alpha < 1`
    Lower,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::Upper => write!(f, "upper"),
            Regime::Lower => write!(f, "lower"),
        }
    }
}

/// Validated parameter vector `(alpha, beta, tau, c_tilde)`.
///
/// Construction enforces the guard bands
/// `alpha ∈ [1e-3, 1-1e-6] ∪ [1+1e-6, 2-1e-6]`, `|beta| ≤ 1-1e-9` and
/// `c_tilde > 0`, so every constructed value is safe for the series
/// evaluators downstream. Values are immutable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableParams {
    alpha: f64,
    beta: f64,
    tau: f64,
    c_tilde: f64,
}

impl StableParams {
    pub fn new(alpha: f64, beta: f64, tau: f64, c_tilde: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < ALPHA_MIN || alpha > 2.0 - ALPHA_GAP {
            return Err(Error::InvalidParam {
                field: "alpha",
                value: alpha,
                constraint: "alpha in [1e-3, 1-1e-6] or [1+1e-6, 2-1e-6]",
            });
        }
        if (alpha - 1.0).abs() < ALPHA_GAP {
            return Err(Error::InvalidParam {
                field: "alpha",
                value: alpha,
                constraint: "alpha = 1 (Cauchy band) is unsupported",
            });
        }
        if !beta.is_finite() || beta.abs() > BETA_MAX {
            return Err(Error::InvalidParam {
                field: "beta",
                value: beta,
                constraint: "|beta| <= 1 - 1e-9",
            });
        }
        if !tau.is_finite() {
            return Err(Error::InvalidParam {
                field: "tau",
                value: tau,
                constraint: "tau finite",
            });
        }
        if !c_tilde.is_finite() || c_tilde <= 0.0 {
            return Err(Error::InvalidParam {
                field: "c_tilde",
                value: c_tilde,
                constraint: "c_tilde > 0",
            });
        }
        Ok(Self { alpha, beta, tau, c_tilde })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn c_tilde(&self) -> f64 {
        self.c_tilde
    }

    /// `Upper` iff `1 < alpha < 2`, `Lower` iff `0 < alpha < 1`.
    pub fn regime(&self) -> Regime {
        if self.alpha > 1.0 {
            Regime::Upper
        } else {
            Regime::Lower
        }
    }

    /// Skewness angle of the standardized characteristic function.
    ///
    /// For `z > 0` the standardized variable `u = (x - tau)/c_tilde` has
    /// `E exp(izu) = exp(-z^alpha * exp(-i * skew_angle))` with
    /// `skew_angle = -pi*beta*(2-alpha)/2` in the upper regime and
    /// `+pi*alpha*beta/2` in the lower regime. The angle stays strictly
    /// inside `(-pi/2, pi/2)` for every admissible parameter vector.
    pub fn skew_angle(&self) -> f64 {
        match self.regime() {
            Regime::Upper => -std::f64::consts::PI * self.beta * (2.0 - self.alpha) / 2.0,
            Regime::Lower => std::f64::consts::PI * self.alpha * self.beta / 2.0,
        }
    }

    /// Index `a = 1 + 2*skew_angle/(pi*alpha)` driving every series sine.
    ///
    /// Upper regime: `a = 1 - beta*(2-alpha)/alpha`; lower: `a = 1 + beta`.
    /// The central series uses `sin(pi*n*a/2)`, the right-tail series
    /// `sin(pi*n*alpha*a/2)`; the left side uses the mirrored value `2 - a`.
    pub fn series_index(&self) -> f64 {
        match self.regime() {
            Regime::Upper => 1.0 - self.beta * (2.0 - self.alpha) / self.alpha,
            Regime::Lower => 1.0 + self.beta,
        }
    }

    /// Scale `c` of the characteristic function, from `c_tilde`.
    ///
    /// `c = cos(pi*beta*(2-alpha)/2) * c_tilde^alpha` in the upper regime and
    /// `c = cos(pi*alpha*beta/2) * c_tilde^alpha` in the lower regime; the
    /// cosine argument lies in `(-pi/2, pi/2)`, so `c > 0` always.
    pub fn scale_c(&self) -> f64 {
        self.skew_angle().cos() * self.c_tilde.powf(self.alpha)
    }

    /// `u = (y - tau) / c_tilde`.
    pub fn standardize(&self, y: f64) -> f64 {
        (y - self.tau) / self.c_tilde
    }

    /// Inverse of [`standardize`](Self::standardize): `y = tau + c_tilde * u`.
    pub fn unstandardize(&self, u: f64) -> f64 {
        self.tau + self.c_tilde * u
    }

    /// Same law reflected about `tau`: negates `beta`.
    ///
    /// If `x` follows this law then `2*tau - x` follows the mirrored one,
    /// which is how every left-side series formula is obtained from the
    /// right-side one.
    pub fn mirrored(&self) -> StableParams {
        StableParams {
            alpha: self.alpha,
            beta: -self.beta,
            tau: self.tau,
            c_tilde: self.c_tilde,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructs_inside_admissible_box() {
        for &(a, b) in &[(1.5, 0.0), (1.999_999, 0.95), (0.001, -0.95), (0.999_999, 0.5)] {
            assert!(StableParams::new(a, b, 0.0, 1.0).is_ok(), "({a}, {b})");
        }
    }

    #[test]
    fn rejects_alpha_one_and_out_of_range() {
        for bad in [1.0, 1.0 + 5e-7, 0.0, -0.5, 2.0, 2.5, f64::NAN] {
            let err = StableParams::new(bad, 0.0, 0.0, 1.0).unwrap_err();
            match err {
                Error::InvalidParam { field, .. } => assert_eq!(field, "alpha"),
                other => panic!("unexpected error {other:?}"),
            }
        }
    }

    #[test]
    fn rejects_bad_beta_and_scale() {
        match StableParams::new(1.5, 1.0, 0.0, 1.0).unwrap_err() {
            Error::InvalidParam { field, .. } => assert_eq!(field, "beta"),
            other => panic!("unexpected error {other:?}"),
        }
        match StableParams::new(1.5, 0.0, 0.0, 0.0).unwrap_err() {
            Error::InvalidParam { field, .. } => assert_eq!(field, "c_tilde"),
            other => panic!("unexpected error {other:?}"),
        }
        match StableParams::new(1.5, 0.0, f64::INFINITY, 1.0).unwrap_err() {
            Error::InvalidParam { field, .. } => assert_eq!(field, "tau"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn regime_is_deterministic_from_alpha() {
        assert_eq!(StableParams::new(1.5, 0.0, 0.0, 1.0).unwrap().regime(), Regime::Upper);
        assert_eq!(StableParams::new(0.5, 0.0, 0.0, 1.0).unwrap().regime(), Regime::Lower);
    }

    #[test]
    fn scale_c_trivial_cases() {
        // beta = 0 kills the cosine argument
        let p = StableParams::new(1.5, 0.0, 0.0, 1.0).unwrap();
        assert!((p.scale_c() - 1.0).abs() < 1e-15);
        let p = StableParams::new(0.5, 0.0, 0.0, 2.0).unwrap();
        assert!((p.scale_c() - 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn scale_c_two_factor_value() {
        // cos(pi*0.4*(2-1.5)/2) * 1.3^1.5, pinned from a high-precision evaluation
        let p = StableParams::new(1.5, 0.4, 0.0, 1.3).unwrap();
        assert!((p.scale_c() - 1.409_682_648_088_171_6).abs() < 1e-14);
    }

    #[test]
    fn scale_c_increasing_in_c_tilde() {
        let mut last = 0.0;
        for i in 1..200 {
            let c = StableParams::new(1.7, 0.6, 0.0, i as f64 * 0.05)
                .unwrap()
                .scale_c();
            assert!(c > last);
            last = c;
        }
    }

    #[test]
    fn standardize_roundtrip() {
        let p = StableParams::new(1.5, 0.3, 1.0, 0.5).unwrap();
        assert_eq!(p.standardize(p.tau()), 0.0);
        assert_eq!(p.standardize(p.tau() + p.c_tilde()), 1.0);
        assert_eq!(p.standardize(3.0), 4.0);
        for y in [-17.25, -0.3, 0.0, 2.5, 1e6] {
            let back = p.unstandardize(p.standardize(y));
            assert!((back - y).abs() <= 1e-12 * y.abs().max(1.0));
        }
    }
}
