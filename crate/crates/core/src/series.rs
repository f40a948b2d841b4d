//! Truncated series evaluators for the standardized stable density, the
//! characteristic function, and the truncation-order search.
//!
//! All expansions are in the standardized variable `u = (x - tau)/c_tilde`
//! and are driven by a single index `a` (see [`StableParams::series_index`]):
//!
//! * central series: `(1/pi) * sum (-1)^(n-1) G(n/alpha+1)/n! *
//!   sin(pi*n*a/2) * u^(n-1)` — convergent on all of `R` in the upper
//!   regime, asymptotic as `u -> 0` in the lower regime;
//! * tail series (`u > 0`): `(1/pi) * sum (-1)^(n-1) G(n*alpha+1)/n! *
//!   sin(pi*n*alpha*a/2) * u^(-n*alpha-1)` — asymptotic as `u -> inf` in the
//!   upper regime, convergent for every `u > 0` in the lower regime.
//!
//! Left-side values come from the reflection `u -> -u`, `beta -> -beta`,
//! applied verbatim so the duality holds bit-for-bit.
//!
//! Terms are computed in log space (`ln G` + `ln |u|`) and exponentiated one
//! by one: the gamma factors overflow `f64` long before the summands do.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::moments::RegionConfig;
use crate::params::{Regime, StableParams};
use crate::special::ln_gamma;

const LN_PI: f64 = 1.144_729_885_849_400_2;
/// Overflow guard for per-term exponentiation.
const LN_TERM_MAX: f64 = 700.0;

/// Which part of the region split a density value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Zone {
    RightTail,
    LeftTail,
    Central,
}

/// A density value together with how it was produced.
#[derive(Debug, Clone, Copy)]
pub struct SeriesEval {
    /// Density value; may be slightly negative at truncation level.
    pub value: f64,
    /// Number of series terms actually summed (>= 1).
    pub order_used: u32,
    pub regime: Regime,
    pub zone: Zone,
}

/// Series truncation selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncationPolicy {
    /// Sum exactly this many terms.
    Fixed(u32),
    /// Choose the order per evaluation: convergent series are summed until
    /// the term envelope falls below noise level, asymptotic series are cut
    /// at their smallest term. `l` is the geometric-domination ratio used by
    /// [`truncation_order`]; `safety_cap` bounds every sum.
    Adaptive { l: f64, safety_cap: u32 },
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy::Adaptive { l: 4.0, safety_cap: 600 }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            TruncationPolicy::Fixed(n) if n < 1 => Err(Error::InvalidArgument(
                "fixed truncation order must be >= 1".into(),
            )),
            TruncationPolicy::Adaptive { l, safety_cap } if l <= 1.0 || safety_cap < 1 => {
                Err(Error::InvalidArgument(
                    "adaptive policy requires l > 1 and safety_cap >= 1".into(),
                ))
            }
            _ => Ok(()),
        }
    }
}

/// Convergence character of a series in a given regime/zone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SeriesKind {
    Convergent,
    Asymptotic,
}

pub(crate) fn central_kind(regime: Regime) -> SeriesKind {
    match regime {
        Regime::Upper => SeriesKind::Convergent,
        Regime::Lower => SeriesKind::Asymptotic,
    }
}

pub(crate) fn tail_kind(regime: Regime) -> SeriesKind {
    match regime {
        Regime::Upper => SeriesKind::Asymptotic,
        Regime::Lower => SeriesKind::Convergent,
    }
}

/// Sum `term(1) + term(2) + ...` with the stopping rule appropriate to the
/// series kind. `ln_env(n)` must be the log of the term magnitude ignoring
/// sine factors (a smooth envelope), `value(n)` the signed term.
///
/// Convergent: stop once the envelope is below noise level and past its
/// hump; reaching the cap with a still-large envelope is an error.
/// Asymptotic: stop just before the envelope first grows (optimal
/// truncation); the cap is a hard bound.
pub(crate) fn sum_series(
    kind: SeriesKind,
    cap: u32,
    mut ln_env: impl FnMut(u32) -> f64,
    mut value: impl FnMut(u32) -> f64,
) -> Result<(f64, u32)> {
    debug_assert!(cap >= 1);
    let mut sum = 0.0;
    let mut prev_env = f64::INFINITY;
    for n in 1..=cap {
        let le = ln_env(n);
        if le > LN_TERM_MAX {
            return Err(Error::TruncationFailure(format!(
                "series term {n} overflows (ln magnitude {le:.1})"
            )));
        }
        let env = le.exp();
        if kind == SeriesKind::Asymptotic && n >= 2 && env > prev_env {
            // first growth: the sum through n-1 is the optimal truncation
            return Ok((sum, n - 1));
        }
        sum += value(n);
        if env <= 1e-17 * (1.0 + sum.abs()) && env <= prev_env {
            return Ok((sum, n));
        }
        prev_env = env;
    }
    match kind {
        SeriesKind::Asymptotic => Ok((sum, cap)),
        SeriesKind::Convergent => {
            if prev_env <= 1e-10 * (1.0 + sum.abs()) {
                Ok((sum, cap))
            } else {
                Err(Error::TruncationFailure(format!(
                    "convergent series not settled after {cap} terms (term magnitude {prev_env:.3e})"
                )))
            }
        }
    }
}

fn parity(n: u32) -> f64 {
    if n % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// Log envelope and signed value of the n-th central-series term at `u >= 0`.
pub(crate) struct CentralTerms {
    inv_alpha: f64,
    ln_u: f64,
    u_is_zero: bool,
    half_pi_a: f64,
}

impl CentralTerms {
    pub(crate) fn new(u: f64, alpha: f64, series_index: f64) -> Self {
        debug_assert!(u >= 0.0);
        Self {
            inv_alpha: 1.0 / alpha,
            ln_u: if u > 0.0 { u.ln() } else { f64::NEG_INFINITY },
            u_is_zero: u == 0.0,
            half_pi_a: std::f64::consts::FRAC_PI_2 * series_index,
        }
    }

    pub(crate) fn ln_env(&self, n: u32) -> f64 {
        let nf = n as f64;
        if self.u_is_zero {
            if n == 1 {
                return ln_gamma(self.inv_alpha + 1.0) - LN_PI;
            }
            return f64::NEG_INFINITY;
        }
        ln_gamma(nf * self.inv_alpha + 1.0) - ln_gamma(nf + 1.0) + (nf - 1.0) * self.ln_u - LN_PI
    }

    pub(crate) fn value(&self, n: u32) -> f64 {
        let env = self.ln_env(n).exp();
        if env == 0.0 {
            return 0.0;
        }
        parity(n) * (self.half_pi_a * n as f64).sin() * env
    }
}

/// Log envelope and signed value of the n-th tail-series term at `u > 0`.
pub(crate) struct TailTerms {
    alpha: f64,
    ln_u: f64,
    half_pi_alpha_a: f64,
}

impl TailTerms {
    pub(crate) fn new(u: f64, alpha: f64, series_index: f64) -> Self {
        debug_assert!(u > 0.0);
        Self {
            alpha,
            ln_u: u.ln(),
            half_pi_alpha_a: std::f64::consts::FRAC_PI_2 * alpha * series_index,
        }
    }

    pub(crate) fn ln_env(&self, n: u32) -> f64 {
        let nf = n as f64;
        ln_gamma(nf * self.alpha + 1.0) - ln_gamma(nf + 1.0) - (nf * self.alpha + 1.0) * self.ln_u
            - LN_PI
    }

    pub(crate) fn value(&self, n: u32) -> f64 {
        parity(n) * (self.half_pi_alpha_a * n as f64).sin() * self.ln_env(n).exp()
    }
}

/// Characteristic function `exp[-c|z|^a (1 - i b_eff tan(pi a/2) sgn z) + i tau z]`
/// with `c` from [`StableParams::scale_c`]; in polar form the standardized
/// exponent is `-|z|^alpha exp(-i * skew_angle * sgn z)`.
pub fn char_fn(z: f64, params: &StableParams) -> Complex64 {
    if z == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let g = params.skew_angle();
    let mag = (params.c_tilde() * z.abs()).powf(params.alpha());
    let re = -mag * g.cos();
    let im = z.signum() * mag * g.sin() + params.tau() * z;
    Complex64::new(re, im).exp()
}

/// Central (power) series with exactly `n_terms` terms.
///
/// Valid for all `u` in the upper regime; the lower-regime form is the
/// small-`u` asymptotic expansion and the caller is responsible for staying
/// in its zone.
pub fn central_series(u: f64, params: &StableParams, n_terms: u32) -> Result<f64> {
    if n_terms < 1 {
        return Err(Error::InvalidArgument("n_terms must be >= 1".into()));
    }
    if u < 0.0 {
        return central_series(-u, &params.mirrored(), n_terms);
    }
    let t = CentralTerms::new(u, params.alpha(), params.series_index());
    Ok((1..=n_terms).map(|n| t.value(n)).sum())
}

/// Tail series with exactly `n_terms` terms; `u = 0` is rejected.
pub fn tail_series(u: f64, params: &StableParams, n_terms: u32) -> Result<f64> {
    if n_terms < 1 {
        return Err(Error::InvalidArgument("n_terms must be >= 1".into()));
    }
    if u == 0.0 {
        return Err(Error::InvalidArgument(
            "tail series is singular at u = 0".into(),
        ));
    }
    if u < 0.0 {
        return tail_series(-u, &params.mirrored(), n_terms);
    }
    let t = TailTerms::new(u, params.alpha(), params.series_index());
    Ok((1..=n_terms).map(|n| t.value(n)).sum())
}

/// Smallest `n0` such that `G(n/alpha+1)/n! * M^(n-1) <= L^(-n)` holds from
/// `n0` on (checked over a 64-term verification window). Together with the
/// geometric sum `sum_{n>=N} L^(-n) = L^(-N)/(1-1/L)` this bounds the
/// central-series tail in the upper regime.
pub fn truncation_order(m_bound: f64, l: f64, alpha: f64, safety_cap: u32) -> Result<u32> {
    if !(m_bound > 0.0) {
        return Err(Error::InvalidArgument("M must be > 0".into()));
    }
    if !(l > 1.0) {
        return Err(Error::InvalidArgument("L must be > 1".into()));
    }
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::InvalidArgument(
            "truncation_order applies to 1 < alpha < 2".into(),
        ));
    }
    const WINDOW: u32 = 64;
    let mut run_start: Option<u32> = None;
    for n in 1..=safety_cap.saturating_add(WINDOW) {
        if lemma_bound_holds(n, m_bound, l, alpha) {
            let start = *run_start.get_or_insert(n);
            if start > safety_cap {
                break;
            }
            if n - start >= WINDOW {
                return Ok(start);
            }
        } else {
            run_start = None;
        }
    }
    Err(Error::TruncationFailure(format!(
        "no truncation order below cap {safety_cap} for M = {m_bound}, L = {l}, alpha = {alpha}; \
         bring the region cuts closer to tau"
    )))
}

/// The inequality of the truncation lemma at a single `n`.
pub fn lemma_bound_holds(n: u32, m_bound: f64, l: f64, alpha: f64) -> bool {
    let nf = n as f64;
    ln_gamma(nf / alpha + 1.0) - ln_gamma(nf + 1.0) + (nf - 1.0) * m_bound.ln() + nf * l.ln()
        <= 0.0
}

/// Region-switching density of the standardized variable `u`.
///
/// The y-space cuts of `region` are mapped to u-space; `u` at or beyond the
/// right cut uses the tail series, the middle uses the central series, and
/// `u < 0` is evaluated through the exact reflection (so
/// `density(u; beta) == density(-u; -beta)` bitwise).
pub fn density(
    u: f64,
    params: &StableParams,
    region: &RegionConfig,
    policy: &TruncationPolicy,
) -> Result<SeriesEval> {
    policy.validate()?;
    region.validate_for(params)?;
    if u < 0.0 {
        let mirrored = density(
            -u,
            &params.mirrored(),
            &region.mirrored_about(params.tau()),
            policy,
        )?;
        return Ok(SeriesEval {
            zone: match mirrored.zone {
                Zone::RightTail => Zone::LeftTail,
                z => z,
            },
            ..mirrored
        });
    }
    let regime = params.regime();
    let r1u = params.standardize(region.r1());
    if u >= r1u {
        let terms = TailTerms::new(u, params.alpha(), params.series_index());
        let (value, order_used) = match *policy {
            TruncationPolicy::Fixed(n) => ((1..=n).map(|k| terms.value(k)).sum(), n),
            TruncationPolicy::Adaptive { safety_cap, .. } => sum_series(
                tail_kind(regime),
                safety_cap,
                |n| terms.ln_env(n),
                |n| terms.value(n),
            )?,
        };
        Ok(SeriesEval { value, order_used, regime, zone: Zone::RightTail })
    } else {
        let terms = CentralTerms::new(u, params.alpha(), params.series_index());
        let (value, order_used) = match *policy {
            TruncationPolicy::Fixed(n) => ((1..=n).map(|k| terms.value(k)).sum(), n),
            TruncationPolicy::Adaptive { safety_cap, .. } => sum_series(
                central_kind(regime),
                safety_cap,
                |n| terms.ln_env(n),
                |n| terms.value(n),
            )?,
        };
        Ok(SeriesEval { value, order_used, regime, zone: Zone::Central })
    }
}
