//! Projected stochastic subgradient ascent on the concave relaxation.
//!
//! Starting from a feasible point, each step draws a batch of unbiased
//! supergradient samples of `F̄`, takes an ascent step under the configured
//! rule, and projects back onto the matroid base polytope. The average of the
//! iterates is rounded with randomized pipage rounding.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, RngCore};
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::matroid::{DiagonalMetric, Matroid};
use crate::pipage::pipage_round;
use crate::point::{check_dim, FractionalPoint, Subgradient};
use crate::rng::substream;

/// A monotone objective given as an expectation, accessed through samples.
pub trait StochasticObjective: Sync {
    fn dim(&self) -> usize;

    /// One sample `g` with `E[g] ∈ ∂F̄(x)`.
    fn sample_subgradient(&self, x: &FractionalPoint, rng: &mut dyn RngCore)
        -> Result<Subgradient>;

    /// Adds `scale` times one fresh sample to `acc`. Sparse samplers override this.
    fn accumulate_subgradient(
        &self,
        x: &FractionalPoint,
        rng: &mut dyn RngCore,
        scale: f64,
        acc: &mut [f64],
    ) -> Result<()> {
        let g = self.sample_subgradient(x, rng)?;
        for (a, v) in acc.iter_mut().zip(g.iter()) {
            *a += scale * v;
        }
        Ok(())
    }

    /// Monte Carlo estimate of `F̄(x)`.
    fn estimate_value(
        &self,
        x: &FractionalPoint,
        n_samples: usize,
        rng: &mut dyn RngCore,
    ) -> Result<f64>;

    /// Monte Carlo estimate of the multilinear extension `F(x)`.
    fn estimate_multilinear(
        &self,
        x: &FractionalPoint,
        n_samples: usize,
        rng: &mut dyn RngCore,
    ) -> Result<f64>;

    /// `F̄(x)` when it is cheap to compute exactly.
    fn exact_value(&self, _x: &FractionalPoint) -> Option<f64> {
        None
    }

    /// Almost-sure bound `ρ` on the norm of one sample.
    fn gradient_bound(&self) -> f64;
}

#[derive(Clone, Debug, PartialEq)]
pub enum StepRule {
    /// `η_t = eta0 · B / (ρ √t)`.
    Sgd {
        eta0: f64,
    },
    AdaGrad {
        eta0: f64,
        eps: f64,
    },
    Adam {
        eta0: f64,
        beta1: f64,
        beta2: f64,
        eps: f64,
    },
}

impl StepRule {
    pub fn sgd() -> Self {
        StepRule::Sgd { eta0: 1.0 }
    }

    pub fn adagrad() -> Self {
        StepRule::AdaGrad {
            eta0: 0.1,
            eps: 1e-8,
        }
    }

    pub fn adam() -> Self {
        StepRule::Adam {
            eta0: 0.1,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            StepRule::Sgd { eta0 } => eta0 > 0.0,
            StepRule::AdaGrad { eta0, eps } => eta0 > 0.0 && eps > 0.0,
            StepRule::Adam {
                eta0,
                beta1,
                beta2,
                eps,
            } => {
                eta0 > 0.0
                    && eps > 0.0
                    && (0.0..1.0).contains(&beta1)
                    && (0.0..1.0).contains(&beta2)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(format!("invalid step rule {self:?}")))
        }
    }
}

/// Per-coordinate step rates.
#[derive(Clone, Debug, PartialEq)]
pub enum Rates {
    Scalar(f64),
    PerCoordinate(Vec<f64>),
}

/// Step-size state for one run.
#[derive(Clone, Debug)]
pub struct StepController {
    rule: StepRule,
    radius: f64,
    rho: f64,
    /// AdaGrad: running `Σ g²`. Adam: second moment.
    second: Vec<f64>,
    /// Adam first moment.
    first: Vec<f64>,
}

impl StepController {
    pub fn new(rule: StepRule, dim: usize, radius: f64, rho: f64) -> Self {
        StepController {
            rule,
            radius,
            rho,
            second: vec![0.0; dim],
            first: vec![0.0; dim],
        }
    }

    /// Rates at step `t ≥ 1` given the accumulated state. For Adam the rates
    /// apply to the bias-corrected first moment rather than to `g`.
    pub fn rates(&self, t: usize) -> Rates {
        let t = t.max(1) as f64;
        match self.rule {
            StepRule::Sgd { eta0 } => Rates::Scalar(eta0 * self.radius / (self.rho * t.sqrt())),
            StepRule::AdaGrad { eta0, eps } => Rates::PerCoordinate(
                self.second
                    .iter()
                    .map(|s| eta0 / (s + eps).sqrt())
                    .collect(),
            ),
            StepRule::Adam {
                eta0, beta2, eps, ..
            } => {
                let corr = 1.0 - beta2.powf(t);
                Rates::PerCoordinate(
                    self.second
                        .iter()
                        .map(|v| eta0 / ((v / corr).sqrt() + eps))
                        .collect(),
                )
            }
        }
    }

    /// Folds `g` into the state and returns the ascent displacement for step `t`.
    pub fn step(&mut self, t: usize, g: &[f64]) -> Vec<f64> {
        match self.rule {
            StepRule::Sgd { .. } => {
                let Rates::Scalar(eta) = self.rates(t) else {
                    unreachable!()
                };
                g.iter().map(|v| eta * v).collect()
            }
            StepRule::AdaGrad { .. } => {
                for (s, v) in self.second.iter_mut().zip(g) {
                    *s += v * v;
                }
                let Rates::PerCoordinate(r) = self.rates(t) else {
                    unreachable!()
                };
                r.iter().zip(g).map(|(r, v)| r * v).collect()
            }
            StepRule::Adam { beta1, beta2, .. } => {
                for ((m, s), v) in self.first.iter_mut().zip(self.second.iter_mut()).zip(g) {
                    *m = beta1 * *m + (1.0 - beta1) * v;
                    *s = beta2 * *s + (1.0 - beta2) * v * v;
                }
                let corr = 1.0 - beta1.powf(t.max(1) as f64);
                let Rates::PerCoordinate(r) = self.rates(t) else {
                    unreachable!()
                };
                r.iter()
                    .zip(&self.first)
                    .map(|(r, m)| r * m / corr)
                    .collect()
            }
        }
    }

    /// Metric for the projection after a step. AdaGrad projects in the norm
    /// induced by its accumulated squared gradients.
    fn metric(&self) -> Option<DiagonalMetric> {
        match self.rule {
            StepRule::AdaGrad { eps, .. } => {
                DiagonalMetric::new(self.second.iter().map(|s| (s + eps).sqrt()).collect()).ok()
            }
            _ => None,
        }
    }
}

/// `⌈B²ρ²/ε²⌉`, the iteration count after which the expected gap of the
/// averaged iterate is at most `ε` under the SGD rule.
pub fn required_iterations(radius: f64, rho: f64, eps: f64) -> Result<usize> {
    if !(radius > 0.0 && rho > 0.0 && eps > 0.0) {
        return Err(invalid(format!(
            "B = {radius}, rho = {rho}, eps = {eps} must all be positive"
        )));
    }
    Ok(ceil_absorbing((radius * rho / eps).powi(2)).max(1.0) as usize)
}

/// Ceiling that absorbs floating-point noise around exact integers, e.g. (√3)².
pub(crate) fn ceil_absorbing(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() <= 1e-9 * v.abs().max(1.0) {
        r
    } else {
        v.ceil()
    }
}

#[derive(Clone, Debug)]
pub struct OptimizerConfig {
    pub rule: StepRule,
    pub iterations: usize,
    pub batch_size: usize,
    /// Polytope radius `B`; defaults to `√rank`.
    pub radius: Option<f64>,
    /// Gradient norm bound `ρ`; defaults to the objective's own bound.
    pub rho: Option<f64>,
    /// Average only the second half of the iterates.
    pub tail_average: bool,
    /// Trace every this many iterations; defaults to `max(1, T/200)`.
    pub trace_every: Option<usize>,
    pub trace_samples: usize,
    pub snapshot_iterates: bool,
    /// Worker threads for batch sampling. Results do not depend on it.
    pub threads: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            rule: StepRule::sgd(),
            iterations: 1000,
            batch_size: 1,
            radius: None,
            rho: None,
            tail_average: false,
            trace_every: None,
            trace_samples: 256,
            snapshot_iterates: false,
            threads: 1,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(invalid("iterations must be at least 1"));
        }
        if self.batch_size == 0 {
            return Err(invalid("batch size must be at least 1"));
        }
        if self.threads == 0 {
            return Err(invalid("threads must be at least 1"));
        }
        for (name, v) in [("radius", self.radius), ("rho", self.rho)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(invalid(format!("{name} = {v} must be positive")));
                }
            }
        }
        self.rule.validate()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    pub seconds: f64,
    pub utility: f64,
    pub snapshot: Option<Vec<f64>>,
}

/// Time-stamped utility estimates along a run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunTrace {
    records: Vec<TraceRecord>,
}

impl RunTrace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a record. Iterations must strictly increase and time must not
    /// go backwards.
    pub fn push(&mut self, record: TraceRecord) -> Result<()> {
        if let Some(last) = self.records.last() {
            if record.iteration <= last.iteration || record.seconds < last.seconds {
                return Err(invalid(format!(
                    "trace record {} at {}s follows {} at {}s",
                    record.iteration, record.seconds, last.iteration, last.seconds
                )));
            }
        }
        self.records.push(record);
        Ok(())
    }

    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    pub fn best_so_far(&self) -> Vec<f64> {
        self.records
            .iter()
            .scan(f64::NEG_INFINITY, |best, r| {
                *best = best.max(r.utility);
                Some(*best)
            })
            .collect()
    }

    /// CSV with header `iter,seconds,utility`; the utility column holds the
    /// best value seen so far.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "iter,seconds,utility")?;
        for (r, best) in self.records.iter().zip(self.best_so_far()) {
            writeln!(w, "{},{:.6},{}", r.iteration, r.seconds, best)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub x_bar: FractionalPoint,
    /// Rounded base.
    pub selected: Vec<usize>,
    pub trace: RunTrace,
}

/// Runs projected stochastic subgradient ascent on `obj` over the base
/// polytope of `c`, averages the iterates and rounds the average.
pub fn maximize<O, R>(obj: &O, c: &Matroid, cfg: &OptimizerConfig, rng: &mut R) -> Result<Solution>
where
    O: StochasticObjective + ?Sized,
    R: Rng + ?Sized,
{
    cfg.validate()?;
    check_dim(c.n(), obj.dim())?;
    let n = c.n();
    let t_max = cfg.iterations;
    let radius = cfg.radius.unwrap_or_else(|| c.radius());
    let rho = match cfg.rho {
        Some(r) => r,
        None => {
            let r = obj.gradient_bound();
            if r > 0.0 && r.is_finite() {
                r
            } else {
                1.0
            }
        }
    };
    let trace_every = cfg.trace_every.unwrap_or((t_max / 200).max(1)).max(1);
    let master = rng.next_u64();
    let pool = if cfg.threads > 1 && cfg.batch_size > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.threads)
                .build()
                .map_err(|e| invalid(e.to_string()))?,
        )
    } else {
        None
    };

    let identity = DiagonalMetric::identity(n);
    let mut steps = StepController::new(cfg.rule.clone(), n, radius, rho);
    let mut x = c.initial_point();
    let mut sum = vec![0.0; n];
    let averaged_from = if cfg.tail_average { t_max / 2 + 1 } else { 1 };
    let start = Instant::now();
    let mut trace = RunTrace::new();

    let record = |trace: &mut RunTrace, t: usize, x: &FractionalPoint| -> Result<()> {
        let mut r = substream(master, t as u64, u64::MAX);
        let utility = obj.estimate_multilinear(x, cfg.trace_samples, &mut r)?;
        trace.push(TraceRecord {
            iteration: t,
            seconds: start.elapsed().as_secs_f64(),
            utility,
            snapshot: cfg.snapshot_iterates.then(|| x.as_slice().to_vec()),
        })
    };
    record(&mut trace, 0, &x)?;

    let scale = 1.0 / cfg.batch_size as f64;
    for t in 0..t_max {
        let g = match &pool {
            Some(pool) => {
                let xr = &x;
                let samples: Vec<Result<Subgradient>> = pool.install(|| {
                    (0..cfg.batch_size)
                        .into_par_iter()
                        .map(|i| {
                            obj.sample_subgradient(xr, &mut substream(master, t as u64, i as u64))
                        })
                        .collect()
                });
                let mut g = vec![0.0; n];
                for s in samples {
                    for (a, v) in g.iter_mut().zip(s?.iter()) {
                        *a += scale * v;
                    }
                }
                g
            }
            None => {
                let mut g = vec![0.0; n];
                for i in 0..cfg.batch_size {
                    let mut r = substream(master, t as u64, i as u64);
                    obj.accumulate_subgradient(&x, &mut r, scale, &mut g)?;
                }
                g
            }
        };
        if let Some(i) = g.iter().position(|v| !v.is_finite()) {
            return Err(Error::Objective(format!(
                "non-finite subgradient entry {i} at iteration {t}"
            )));
        }
        let delta = steps.step(t + 1, &g);
        let y: Vec<f64> = x.iter().zip(&delta).map(|(a, d)| a + d).collect();
        x = match steps.metric() {
            Some(m) => c.project(&y, &m)?,
            None => c.project(&y, &identity)?,
        };
        if t + 1 >= averaged_from {
            for (s, v) in sum.iter_mut().zip(x.iter()) {
                *s += v;
            }
        }
        if (t + 1) % trace_every == 0 || t + 1 == t_max {
            record(&mut trace, t + 1, &x)?;
        }
    }

    let count = (t_max + 1 - averaged_from) as f64;
    let x_bar = FractionalPoint::new(sum.iter().map(|s| (s / count).clamp(0.0, 1.0)).collect())?;
    let rounded = pipage_round(&x_bar, c, rng)?;
    Ok(Solution {
        x_bar,
        selected: rounded.selected,
        trace,
    })
}
