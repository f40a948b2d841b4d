//! Box-constrained Nelder-Mead simplex search.
//!
//! The box is enforced through a bijective sigmoid reparameterization: the
//! simplex lives in unconstrained coordinates `t` and candidates are mapped
//! by `x_i = lo_i + (hi_i - lo_i) / (1 + exp(-t_i))`, so every point handed
//! to the objective lies strictly inside the box and the simplex geometry is
//! never broken by clipping. Standard reflection/expansion/contraction/
//! shrink coefficients (1, 2, 0.5, 0.5); after convergence the simplex is
//! rebuilt around the incumbent at smaller scale (degenerate simplices
//! restart), a fixed number of times. Fully deterministic.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BoxBounds {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl BoxBounds {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::InvalidArgument(
                "bounds must be two equal-length nonempty vectors".into(),
            ));
        }
        for (l, h) in lo.iter().zip(&hi) {
            if !(l.is_finite() && h.is_finite() && l < h) {
                return Err(Error::InvalidArgument(format!(
                    "each bound pair must satisfy lo < hi, got [{l}, {h}]"
                )));
            }
        }
        Ok(BoxBounds { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(v, (l, h))| v >= l && v <= h)
    }

    fn to_unconstrained(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(v, (l, h))| {
                let fr = ((v - l) / (h - l)).clamp(1e-9, 1.0 - 1e-9);
                (fr / (1.0 - fr)).ln()
            })
            .collect()
    }

    fn to_box(&self, t: &[f64]) -> Vec<f64> {
        t.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(v, (l, h))| l + (h - l) / (1.0 + (-v).exp()))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct OptimizerSettings {
    /// Convergence threshold on the simplex diameter in box coordinates.
    pub x_tolerance: f64,
    /// Convergence threshold on the simplex value spread.
    pub f_tolerance: f64,
    pub max_evaluations: usize,
    /// Initial simplex step per dimension (unconstrained coordinates). A
    /// single entry is broadcast to every dimension.
    pub simplex_init_scale: Vec<f64>,
    /// Rebuilds of the simplex around the incumbent after convergence.
    pub restarts: u32,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        OptimizerSettings {
            x_tolerance: 1e-7,
            f_tolerance: 1e-13,
            max_evaluations: 6000,
            simplex_init_scale: vec![0.25],
            restarts: 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MinimizeResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub evaluations: usize,
    pub converged: bool,
}

struct Vertex {
    t: Vec<f64>,
    f: f64,
}

/// Minimize `f` over the box from `x0`. Never returns a point worse than
/// the start; `converged` is false only when the evaluation budget ran out
/// before any tolerance was met.
pub fn minimize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    bounds: &BoxBounds,
    settings: &OptimizerSettings,
) -> Result<MinimizeResult> {
    let dim = bounds.dim();
    if x0.len() != dim {
        return Err(Error::InvalidArgument(
            "x0 dimension does not match bounds".into(),
        ));
    }
    if !bounds.contains(x0) {
        return Err(Error::InvalidArgument(
            "x0 must lie inside the bounds".into(),
        ));
    }
    if settings.max_evaluations < dim + 1 {
        return Err(Error::InvalidArgument(
            "max_evaluations must be at least dim + 1".into(),
        ));
    }
    let scales: Vec<f64> = match settings.simplex_init_scale.len() {
        1 => vec![settings.simplex_init_scale[0]; dim],
        n if n == dim => settings.simplex_init_scale.clone(),
        _ => {
            return Err(Error::InvalidArgument(
                "simplex_init_scale must have 1 or dim entries".into(),
            ))
        }
    };
    if scales.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::InvalidArgument(
            "simplex_init_scale entries must be positive".into(),
        ));
    }

    let mut evals = 0usize;
    let budget = settings.max_evaluations;
    let mut eval = |t: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let v = f(&bounds.to_box(t));
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let t0 = bounds.to_unconstrained(x0);
    let f0 = eval(&t0, &mut evals);
    let mut best_t = t0.clone();
    let mut best_f = f0;
    let mut converged = false;

    'rounds: for round in 0..=settings.restarts {
        let shrink_scale = 0.5f64.powi(round as i32);
        let mut simplex: Vec<Vertex> = Vec::with_capacity(dim + 1);
        simplex.push(Vertex { t: best_t.clone(), f: best_f });
        for i in 0..dim {
            let mut t = best_t.clone();
            t[i] += scales[i] * shrink_scale;
            if evals >= budget {
                break 'rounds;
            }
            let fv = eval(&t, &mut evals);
            simplex.push(Vertex { t, f: fv });
        }

        loop {
            simplex.sort_by(|a, b| a.f.total_cmp(&b.f));
            if simplex[0].f < best_f {
                best_f = simplex[0].f;
                best_t = simplex[0].t.clone();
            }
            // convergence in mapped coordinates and in value spread
            let x_best = bounds.to_box(&simplex[0].t);
            let diameter = simplex[1..]
                .iter()
                .map(|v| {
                    bounds
                        .to_box(&v.t)
                        .iter()
                        .zip(&x_best)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            let spread = simplex[dim].f - simplex[0].f;
            if diameter < settings.x_tolerance || spread < settings.f_tolerance {
                converged = true;
                continue 'rounds;
            }
            if evals + 2 > budget {
                break 'rounds;
            }

            let centroid: Vec<f64> = (0..dim)
                .map(|j| simplex[..dim].iter().map(|v| v.t[j]).sum::<f64>() / dim as f64)
                .collect();
            let worst = simplex[dim].f;
            let second_worst = simplex[dim - 1].f;
            let reflect: Vec<f64> = centroid
                .iter()
                .zip(&simplex[dim].t)
                .map(|(c, w)| c + (c - w))
                .collect();
            let f_reflect = eval(&reflect, &mut evals);

            if f_reflect < simplex[0].f {
                let expand: Vec<f64> = centroid
                    .iter()
                    .zip(&simplex[dim].t)
                    .map(|(c, w)| c + 2.0 * (c - w))
                    .collect();
                let f_expand = eval(&expand, &mut evals);
                simplex[dim] = if f_expand < f_reflect {
                    Vertex { t: expand, f: f_expand }
                } else {
                    Vertex { t: reflect, f: f_reflect }
                };
            } else if f_reflect < second_worst {
                simplex[dim] = Vertex { t: reflect, f: f_reflect };
            } else {
                let contract: Vec<f64> = if f_reflect < worst {
                    centroid
                        .iter()
                        .zip(&reflect)
                        .map(|(c, r)| c + 0.5 * (r - c))
                        .collect()
                } else {
                    centroid
                        .iter()
                        .zip(&simplex[dim].t)
                        .map(|(c, w)| c - 0.5 * (c - w))
                        .collect()
                };
                let f_contract = eval(&contract, &mut evals);
                if f_contract < worst.min(f_reflect) {
                    simplex[dim] = Vertex { t: contract, f: f_contract };
                } else {
                    // shrink toward the best vertex
                    let anchor = simplex[0].t.clone();
                    for v in simplex.iter_mut().skip(1) {
                        for (tj, aj) in v.t.iter_mut().zip(&anchor) {
                            *tj = aj + 0.5 * (*tj - *aj);
                        }
                        if evals >= budget {
                            break 'rounds;
                        }
                        v.f = eval(&v.t, &mut evals);
                    }
                }
            }
        }
    }

    Ok(MinimizeResult {
        x: bounds.to_box(&best_t),
        f: best_f,
        evaluations: evals,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(max_evals: usize) -> OptimizerSettings {
        OptimizerSettings {
            max_evaluations: max_evals,
            ..OptimizerSettings::default()
        }
    }

    #[test]
    fn convex_quadratic() {
        let bounds = BoxBounds::new(vec![0.0; 4], vec![1.0; 4]).unwrap();
        let r = minimize(
            |x| x.iter().map(|v| (v - 0.3).powi(2)).sum(),
            &[0.9, 0.9, 0.9, 0.9],
            &bounds,
            &settings(4000),
        )
        .unwrap();
        assert!(r.converged);
        for v in &r.x {
            assert!((v - 0.3).abs() < 1e-5, "{:?}", r.x);
        }
        assert!(r.f <= 4.0 * (0.9f64 - 0.3).powi(2));
    }

    #[test]
    fn rosenbrock_4d() {
        let bounds = BoxBounds::new(vec![-2.5; 4], vec![3.0; 4]).unwrap();
        let rosen = |x: &[f64]| -> f64 {
            x.windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
                .sum()
        };
        let r = minimize(rosen, &[-1.2, 1.0, -1.2, 1.0], &bounds, &settings(10_000)).unwrap();
        assert!(r.f < 1e-6, "f = {}", r.f);
        assert!(r.evaluations <= 10_000);
    }

    #[test]
    fn constant_function_converges_quickly() {
        let bounds = BoxBounds::new(vec![-1.0; 3], vec![1.0; 3]).unwrap();
        let r = minimize(|_| 5.0, &[0.1, 0.2, 0.3], &bounds, &settings(1000)).unwrap();
        assert!(r.converged);
        assert_eq!(r.f, 5.0);
        for (got, want) in r.x.iter().zip(&[0.1, 0.2, 0.3]) {
            assert!((got - want).abs() < 1e-6);
        }
        assert!(r.evaluations < 100);
    }

    #[test]
    fn candidates_stay_inside_box_and_never_worse_than_start() {
        let bounds = BoxBounds::new(vec![-1.0, 2.0], vec![1.5, 4.0]).unwrap();
        let mut violations = 0;
        let r = minimize(
            |x| {
                if !(x[0] >= -1.0 && x[0] <= 1.5 && x[1] >= 2.0 && x[1] <= 4.0) {
                    violations += 1;
                }
                (x[0] - 2.0).powi(2) + (x[1] - 1.0).powi(2) // minimum outside the box
            },
            &[0.0, 3.0],
            &bounds,
            &settings(3000),
        )
        .unwrap();
        assert_eq!(violations, 0);
        let f0 = (0.0f64 - 2.0).powi(2) + (3.0f64 - 1.0).powi(2);
        assert!(r.f <= f0);
        // pushed toward the active bounds
        assert!(r.x[0] > 1.2 && r.x[1] < 2.3, "{:?}", r.x);
    }

    #[test]
    fn deterministic() {
        let bounds = BoxBounds::new(vec![-2.0; 3], vec![2.0; 3]).unwrap();
        let f = |x: &[f64]| x.iter().enumerate().map(|(i, v)| (v - 0.1 * i as f64).powi(2)).sum();
        let a = minimize(f, &[1.0, 1.0, 1.0], &bounds, &settings(2000)).unwrap();
        let b = minimize(f, &[1.0, 1.0, 1.0], &bounds, &settings(2000)).unwrap();
        assert_eq!(a.x, b.x);
        assert_eq!(a.evaluations, b.evaluations);
    }

    #[test]
    fn budget_exhaustion_reports_not_converged() {
        let bounds = BoxBounds::new(vec![-2.5; 4], vec![3.0; 4]).unwrap();
        let rosen = |x: &[f64]| -> f64 {
            x.windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
                .sum()
        };
        let r = minimize(rosen, &[-1.2, 1.0, -1.2, 1.0], &bounds, &settings(30)).unwrap();
        assert!(!r.converged);
        assert!(r.f.is_finite());
    }
}
