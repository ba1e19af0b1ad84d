//! Multistart maximization of `|H_{3,1}|` and `|J_n|` over atomic Herglotz
//! measures, compared against the closed-form bounds.
//!
//! Every iterate is a probability measure on the circle, so every evaluated
//! coefficient sequence is feasible by construction. Weights are
//! parametrized as `u_j² / Σ u_k²` and angles are free.

mod simplex;

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{bound, BoundResult, Functional};
use crate::caratheodory::{sample_measure_with, CaratheodoryCoeffs, HerglotzMeasure};
use crate::coeffs::{
    bounded_turning_coeffs_to, class_coeffs, harmonic_m_coeffs, rational_string, ClassKind,
    ClassSpec,
};
use crate::error::{Error, Result};
use crate::functionals::{hankel, zalcman};

pub use simplex::{minimize, Outcome};

/// Initial simplex edge for each refinement round; later rounds shrink it.
const INITIAL_STEP: f64 = 0.3;
const STEP_DECAY: f64 = 0.1;
const SIMPLEX_FTOL: f64 = 1e-16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchConfig {
    pub class: ClassSpec,
    pub functional: Functional,
    pub restarts: usize,
    pub atoms: usize,
    pub refine_iters: usize,
    pub seed: u64,
    pub tol: f64,
    /// Fix the first atom at angle 0. `|H_{3,1}|` and `|J_n|` are
    /// rotation invariant, so this only removes a redundant dimension.
    pub pin_first_angle: bool,
    /// Worker threads for restarts; `None` uses the global rayon pool.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl SearchConfig {
    pub fn new(class: ClassSpec, functional: Functional) -> Self {
        Self {
            class,
            functional,
            restarts: 200,
            atoms: 4,
            refine_iters: 500,
            seed: 0,
            tol: 1e-9,
            pin_first_angle: true,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts < 1 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.atoms < 1 {
            return Err(Error::InvalidConfig("atoms must be at least 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidConfig("thread count must be at least 1".into()));
        }
        bound(&self.class, self.functional).map(|_| ())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub class: ClassSpec,
    pub functional: Functional,
    pub best_magnitude: f64,
    pub best_measure: HerglotzMeasure,
    pub best_p: CaratheodoryCoeffs,
    pub bound: f64,
    /// Exact bound as `num/den`.
    pub bound_exact: Option<String>,
    pub gap: f64,
    pub evaluations: u64,
    /// Restart that produced the best value.
    pub best_restart: usize,
}

impl SearchReport {
    /// `best_magnitude ≤ bound + tol`.
    pub fn respects_bound(&self, tol: f64) -> bool {
        self.gap >= -tol
    }
}

/// `|F(p)|` for the configured class and functional.
pub fn evaluate(class: &ClassSpec, functional: Functional, p: &CaratheodoryCoeffs) -> Result<f64> {
    let alpha = class.alpha_f64();
    let value = match functional {
        Functional::H31 | Functional::H31HPart => {
            hankel(3, 1, class_coeffs(class, p)?.analytic().as_slice())?
        }
        Functional::H31GPart => {
            if class.kind() != ClassKind::HarmonicM {
                return Err(unsupported(class, functional));
            }
            hankel(3, 1, &harmonic_m_coeffs(alpha, p)?.g)?
        }
        Functional::Zalcman(n) if class.kind() == ClassKind::BoundedTurning => {
            zalcman(n, bounded_turning_coeffs_to(alpha, p, 2 * n - 1)?.as_slice())?
        }
        Functional::Zalcman(n) => zalcman(n, class_coeffs(class, p)?.analytic().as_slice())?,
    };
    Ok(value.magnitude)
}

fn unsupported(class: &ClassSpec, functional: Functional) -> Error {
    Error::UnsupportedFunctional {
        class: class.to_string(),
        functional: functional.to_string(),
    }
}

/// Maps unconstrained parameters to a measure: `atoms` weight parameters
/// followed by the free angles.
struct Parametrization {
    atoms: usize,
    pin_first_angle: bool,
}

impl Parametrization {
    fn dim(&self) -> usize {
        2 * self.atoms - usize::from(self.pin_first_angle)
    }

    fn measure(&self, x: &[f64]) -> HerglotzMeasure {
        let (u, free) = x.split_at(self.atoms);
        let total: f64 = u.iter().map(|v| v * v).sum();
        let weights: Vec<f64> = if total > 0.0 {
            u.iter().map(|v| v * v / total).collect()
        } else {
            vec![1.0 / self.atoms as f64; self.atoms]
        };
        let angles = if self.pin_first_angle {
            std::iter::once(0.0).chain(free.iter().copied()).collect::<Vec<_>>()
        } else {
            free.to_vec()
        };
        HerglotzMeasure::new(weights.into_iter().zip(angles))
            .expect("normalized weights form a probability measure")
    }

    fn start<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let m = sample_measure_with(rng, self.atoms);
        let mut x: Vec<f64> = m.atoms().iter().map(|a| a.weight.sqrt()).collect();
        let skip = usize::from(self.pin_first_angle);
        x.extend(m.atoms().iter().skip(skip).map(|a| a.angle));
        x
    }
}

struct RestartResult {
    magnitude: f64,
    measure: HerglotzMeasure,
    evaluations: u64,
}

fn run_restart(config: &SearchConfig, index: usize, needed: usize) -> RestartResult {
    let param = Parametrization {
        atoms: config.atoms,
        pin_first_angle: config.pin_first_angle,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let mut x = param.start(&mut rng);

    let objective = |x: &[f64]| -> f64 {
        let p = param.measure(x).coeffs(needed);
        -evaluate(&config.class, config.functional, &p).unwrap_or(0.0)
    };

    let mut value = objective(&x);
    let mut evaluations = 1u64;
    let mut budget = config.refine_iters;
    let mut step = INITIAL_STEP;
    while budget > 0 && param.dim() > 0 {
        let out = minimize(objective, &x, step, budget, SIMPLEX_FTOL);
        evaluations += out.evaluations as u64;
        budget -= out.iterations.min(budget);
        let improved = out.value < value;
        if improved {
            x = out.x;
            value = out.value;
        }
        if out.iterations == 0 || (!improved && step < 1e-12) {
            break;
        }
        // restarting the simplex around the incumbent escapes collapse
        step = if improved { step.max(1e-6) * STEP_DECAY.sqrt() } else { step * STEP_DECAY };
    }

    RestartResult {
        magnitude: -value,
        measure: param.measure(&x),
        evaluations,
    }
}

pub fn maximize(config: &SearchConfig) -> Result<SearchReport> {
    config.validate()?;
    let bound_result: BoundResult = bound(&config.class, config.functional)?;
    let needed = config.functional.required_p();

    let run = || -> Vec<RestartResult> {
        (0..config.restarts)
            .into_par_iter()
            .map(|i| run_restart(config, i, needed))
            .collect()
    };
    let results = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?
            .install(run),
        None => run(),
    };

    let evaluations = results.iter().map(|r| r.evaluations).sum();
    // first index wins ties, so the reduction is independent of scheduling
    let (best_restart, best) = results
        .into_iter()
        .enumerate()
        .reduce(|a, b| if b.1.magnitude > a.1.magnitude { b } else { a })
        .expect("at least one restart");

    let bound_f64 = bound_result.value.to_f64();
    Ok(SearchReport {
        class: config.class.clone(),
        functional: config.functional,
        best_magnitude: best.magnitude,
        best_p: best.measure.coeffs(needed),
        best_measure: best.measure,
        bound: bound_f64,
        bound_exact: bound_result.value.exact().map(rational_string),
        gap: bound_f64 - best.magnitude,
        evaluations,
        best_restart,
    })
}

/// One search per α, rows in increasing α. `template` supplies everything
/// except the class.
pub fn alpha_sweep(
    kind: ClassKind,
    alphas: &[BigRational],
    template: &SearchConfig,
) -> Result<Vec<SearchReport>> {
    let mut alphas = alphas.to_vec();
    alphas.sort();
    let classes = alphas
        .into_iter()
        .map(|a| ClassSpec::new(kind, a))
        .collect::<Result<Vec<_>>>()?;
    classes
        .into_iter()
        .map(|class| {
            maximize(&SearchConfig {
                class,
                ..template.clone()
            })
        })
        .collect()
}

/// Parses an inclusive `start:stop:step` grid of exact rationals. Points at
/// or above 1 are dropped, since every class requires `α < 1`.
pub fn parse_alpha_grid(spec: &str) -> Result<Vec<BigRational>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(Error::InvalidConfig(format!(
            "alpha grid `{spec}` is not of the form start:stop:step"
        )));
    };
    let start = crate::coeffs::parse_rational(start)?;
    let stop = crate::coeffs::parse_rational(stop)?;
    let step = crate::coeffs::parse_rational(step)?;
    if step <= BigRational::from_integer(BigInt::from(0)) {
        return Err(Error::InvalidConfig(format!("alpha grid step must be positive in `{spec}`")));
    }
    let one = BigRational::from_integer(BigInt::from(1));
    let mut out = Vec::new();
    let mut a = start;
    while a <= stop && a < one {
        out.push(a.clone());
        a += &step;
    }
    Ok(out)
}

/// Random angles in `[0, 2π)` for rotation checks.
pub fn random_angles(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(0.0..TAU)).collect()
}
