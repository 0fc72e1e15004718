//! Weighted coverage functions.
//!
//! A weighted coverage function over a ground set `V = {0..n}` is given by a
//! universe `U` with nonnegative weights `w(u)` and, for every `u`, the set
//! `P_u ⊆ V` of ground elements that cover it:
//!
//! ```text
//! f(S)    = Σ_u w(u) · [P_u ∩ S ≠ ∅]
//! F(x)    = Σ_u w(u) · (1 − Π_{i∈P_u} (1 − x_i))      multilinear extension
//! F̄(x)    = Σ_u w(u) · min{1, Σ_{i∈P_u} x_i}          concave upper bound
//! ```
//!
//! with `(1 − 1/e)·F̄ ≤ F ≤ F̄` on the unit cube and equality on its vertices.

use std::fmt::Write as _;
use std::path::Path;

use rand::distributions::{Distribution, WeightedIndex};
use rand::RngCore;

use crate::error::{invalid, parse_err, Result};
use crate::optimizer::StochasticObjective;
use crate::point::{check_dim, FractionalPoint, Subgradient, COORD_TOL};

#[derive(Clone, Debug)]
pub struct WeightedCoverage {
    n_ground: usize,
    weights: Vec<f64>,
    /// `P_u`, strictly increasing.
    incidence: Vec<Vec<usize>>,
    /// Transpose of `incidence`: the universe elements each ground element covers.
    covers: Vec<Vec<usize>>,
}

impl WeightedCoverage {
    /// Builds a coverage function, sorting and deduplicating each `P_u`.
    pub fn new(n_ground: usize, weights: Vec<f64>, incidence: Vec<Vec<usize>>) -> Result<Self> {
        if weights.len() != incidence.len() {
            return Err(invalid(format!(
                "{} weights for {} universe elements",
                weights.len(),
                incidence.len()
            )));
        }
        for (u, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(invalid(format!("weight of universe element {u} is {w}")));
            }
        }
        let mut incidence = incidence;
        let mut covers = vec![Vec::new(); n_ground];
        for (u, set) in incidence.iter_mut().enumerate() {
            set.sort_unstable();
            set.dedup();
            if let Some(&i) = set.last() {
                if i >= n_ground {
                    return Err(invalid(format!(
                        "universe element {u} references ground index {i} >= {n_ground}"
                    )));
                }
            }
            for &i in set.iter() {
                covers[i].push(u);
            }
        }
        Ok(WeightedCoverage {
            n_ground,
            weights,
            incidence,
            covers,
        })
    }

    pub fn n_ground(&self) -> usize {
        self.n_ground
    }

    pub fn n_universe(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn incidence(&self, u: usize) -> &[usize] {
        &self.incidence[u]
    }

    /// Universe elements covered by ground element `i`.
    pub fn covers(&self, i: usize) -> &[usize] {
        &self.covers[i]
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `(max_u |P_u|)^{1/2} · Σ_u w(u)`, a bound on the norm of any supergradient
    /// of `F̄`.
    pub fn gradient_norm_bound(&self) -> f64 {
        let max_len = self.incidence.iter().map(Vec::len).max().unwrap_or(0);
        (max_len as f64).sqrt() * self.total_weight()
    }

    pub fn eval_set(&self, set: &[usize]) -> Result<f64> {
        let mut chosen = vec![false; self.n_ground];
        for &i in set {
            if i >= self.n_ground {
                return Err(invalid(format!(
                    "index {i} out of range for ground set of size {}",
                    self.n_ground
                )));
            }
            chosen[i] = true;
        }
        Ok(self
            .incidence
            .iter()
            .zip(&self.weights)
            .filter(|(p, _)| p.iter().any(|&i| chosen[i]))
            .map(|(_, w)| w)
            .sum())
    }

    pub fn multilinear(&self, x: &FractionalPoint) -> Result<f64> {
        check_dim(self.n_ground, x.len())?;
        Ok(self
            .incidence
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * (1.0 - p.iter().map(|&i| 1.0 - x[i]).product::<f64>()))
            .sum())
    }

    pub fn concave_upper(&self, x: &FractionalPoint) -> Result<f64> {
        check_dim(self.n_ground, x.len())?;
        Ok(self
            .incidence
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * p.iter().map(|&i| x[i]).sum::<f64>().min(1.0))
            .sum())
    }

    /// Supergradient of `F̄` at `x`. A term whose mass `Σ_{i∈P_u} x_i` has
    /// reached 1 contributes nothing.
    pub fn subgrad_upper(&self, x: &FractionalPoint) -> Result<Subgradient> {
        check_dim(self.n_ground, x.len())?;
        let mut g = vec![0.0; self.n_ground];
        for (p, &w) in self.incidence.iter().zip(&self.weights) {
            if p.iter().map(|&i| x[i]).sum::<f64>() < 1.0 {
                for &i in p {
                    g[i] += w;
                }
            }
        }
        Ok(Subgradient(g))
    }

    /// Parses the `wcf <n_ground> <n_universe>` text format.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| parse_err(origin, 1, "missing `wcf` header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "wcf" {
            return Err(parse_err(
                origin,
                hline,
                "expected `wcf <n_ground> <n_universe>`",
            ));
        }
        let n_ground: usize = fields[1]
            .parse()
            .map_err(|_| parse_err(origin, hline, format!("bad ground size `{}`", fields[1])))?;
        let n_universe: usize = fields[2]
            .parse()
            .map_err(|_| parse_err(origin, hline, format!("bad universe size `{}`", fields[2])))?;

        let mut weights = Vec::with_capacity(n_universe);
        let mut incidence = Vec::with_capacity(n_universe);
        for (lineno, line) in lines {
            if weights.len() == n_universe {
                return Err(parse_err(
                    origin,
                    lineno,
                    "more universe lines than declared",
                ));
            }
            let mut tok = line.split_whitespace();
            let w_str = tok.next().unwrap_or_default();
            let w: f64 = w_str
                .parse()
                .map_err(|_| parse_err(origin, lineno, format!("bad weight `{w_str}`")))?;
            if !w.is_finite() || w < 0.0 {
                return Err(parse_err(
                    origin,
                    lineno,
                    format!("weight {w} must be nonnegative"),
                ));
            }
            let mut set = Vec::new();
            for t in tok {
                let i: usize = t
                    .parse()
                    .map_err(|_| parse_err(origin, lineno, format!("bad index `{t}`")))?;
                if i >= n_ground {
                    return Err(parse_err(
                        origin,
                        lineno,
                        format!("index {i} >= n_ground {n_ground}"),
                    ));
                }
                set.push(i);
            }
            weights.push(w);
            incidence.push(set);
        }
        if weights.len() != n_universe {
            return Err(parse_err(
                origin,
                text.lines().count().max(1),
                format!(
                    "declared {n_universe} universe lines, found {}",
                    weights.len()
                ),
            ));
        }
        Self::new(n_ground, weights, incidence)
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("wcf {} {}\n", self.n_ground, self.n_universe());
        for (w, p) in self.weights.iter().zip(&self.incidence) {
            let _ = write!(out, "{w}");
            for i in p {
                let _ = write!(out, " {i}");
            }
            out.push('\n');
        }
        out
    }
}

/// `(α, β) = (1 − Π(1 − x_i), min{1, Σ x_i})` for `x ∈ [0, 1]^ℓ`.
pub fn lemma1_pair(x: &[f64]) -> Result<(f64, f64)> {
    let mut prod = 1.0;
    let mut sum = 0.0;
    for (i, &xi) in x.iter().enumerate() {
        if !xi.is_finite() || !(-COORD_TOL..=1.0 + COORD_TOL).contains(&xi) {
            return Err(invalid(format!("coordinate {i} = {xi} is outside [0, 1]")));
        }
        let xi = xi.clamp(0.0, 1.0);
        prod *= 1.0 - xi;
        sum += xi;
    }
    Ok((1.0 - prod, sum.min(1.0)))
}

impl StochasticObjective for WeightedCoverage {
    fn dim(&self) -> usize {
        self.n_ground
    }

    fn sample_subgradient(
        &self,
        x: &FractionalPoint,
        _rng: &mut dyn RngCore,
    ) -> Result<Subgradient> {
        self.subgrad_upper(x)
    }

    fn estimate_value(
        &self,
        x: &FractionalPoint,
        _n: usize,
        _rng: &mut dyn RngCore,
    ) -> Result<f64> {
        self.concave_upper(x)
    }

    fn estimate_multilinear(
        &self,
        x: &FractionalPoint,
        _n: usize,
        _rng: &mut dyn RngCore,
    ) -> Result<f64> {
        self.multilinear(x)
    }

    fn exact_value(&self, x: &FractionalPoint) -> Option<f64> {
        self.concave_upper(x).ok()
    }

    fn gradient_bound(&self) -> f64 {
        self.gradient_norm_bound()
    }
}

/// Stochastic view of a coverage function: each sample draws one universe
/// element `u` with probability `w(u)/W` and returns `W·1_{P_u}` when the term
/// is unsaturated. The mean is exactly [`WeightedCoverage::subgrad_upper`].
pub struct SampledCoverage<'a> {
    wcf: &'a WeightedCoverage,
    picker: Option<WeightedIndex<f64>>,
    total: f64,
}

impl<'a> SampledCoverage<'a> {
    pub fn new(wcf: &'a WeightedCoverage) -> Self {
        let total = wcf.total_weight();
        let picker = WeightedIndex::new(wcf.weights()).ok();
        SampledCoverage { wcf, picker, total }
    }

    fn draw(&self, rng: &mut dyn RngCore) -> Option<&'a [usize]> {
        self.picker
            .as_ref()
            .map(|p| self.wcf.incidence(p.sample(rng)))
    }
}

impl StochasticObjective for SampledCoverage<'_> {
    fn dim(&self) -> usize {
        self.wcf.n_ground()
    }

    fn sample_subgradient(
        &self,
        x: &FractionalPoint,
        rng: &mut dyn RngCore,
    ) -> Result<Subgradient> {
        let mut g = vec![0.0; self.dim()];
        self.accumulate_subgradient(x, rng, 1.0, &mut g)?;
        Ok(Subgradient(g))
    }

    fn accumulate_subgradient(
        &self,
        x: &FractionalPoint,
        rng: &mut dyn RngCore,
        scale: f64,
        acc: &mut [f64],
    ) -> Result<()> {
        check_dim(self.dim(), x.len())?;
        if let Some(p) = self.draw(rng) {
            if p.iter().map(|&i| x[i]).sum::<f64>() < 1.0 {
                for &i in p {
                    acc[i] += scale * self.total;
                }
            }
        }
        Ok(())
    }

    fn estimate_value(&self, x: &FractionalPoint, n: usize, rng: &mut dyn RngCore) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        let n = n.max(1);
        let mut acc = 0.0;
        for _ in 0..n {
            if let Some(p) = self.draw(rng) {
                acc += p.iter().map(|&i| x[i]).sum::<f64>().min(1.0);
            }
        }
        Ok(self.total * acc / n as f64)
    }

    fn estimate_multilinear(
        &self,
        x: &FractionalPoint,
        n: usize,
        rng: &mut dyn RngCore,
    ) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        let n = n.max(1);
        let mut acc = 0.0;
        for _ in 0..n {
            if let Some(p) = self.draw(rng) {
                acc += 1.0 - p.iter().map(|&i| 1.0 - x[i]).product::<f64>();
            }
        }
        Ok(self.total * acc / n as f64)
    }

    fn gradient_bound(&self) -> f64 {
        self.wcf.gradient_norm_bound()
    }
}
