//! Uniform and partition matroids, their base polytopes, and projection onto
//! those polytopes under a diagonal Mahalanobis norm.

use crate::error::{invalid, Error, Result};
use crate::point::{check_dim, FractionalPoint};

/// Metric entries at or below this are rejected.
const MIN_METRIC: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Matroid {
    /// Bases are the `k`-subsets of `{0..n}`.
    Uniform { n: usize, k: usize },
    /// Bases take exactly `caps[b]` elements from each block `blocks[b]`.
    Partition {
        n: usize,
        blocks: Vec<Vec<usize>>,
        caps: Vec<usize>,
    },
}

impl Matroid {
    pub fn uniform(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::Infeasible(format!("rank {k} must lie in [1, {n}]")));
        }
        Ok(Matroid::Uniform { n, k })
    }

    /// Blocks must be disjoint, cover `{0..n}`, and satisfy `1 ≤ cap ≤ |block|`.
    /// Indices within each block are sorted.
    pub fn partition(n: usize, blocks: Vec<Vec<usize>>, caps: Vec<usize>) -> Result<Self> {
        if blocks.len() != caps.len() {
            return Err(Error::Infeasible(format!(
                "{} blocks but {} caps",
                blocks.len(),
                caps.len()
            )));
        }
        let mut seen = vec![false; n];
        let mut blocks = blocks;
        for (b, (block, &cap)) in blocks.iter_mut().zip(&caps).enumerate() {
            block.sort_unstable();
            for &i in block.iter() {
                if i >= n {
                    return Err(Error::Infeasible(format!("block {b} has index {i} >= {n}")));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::Infeasible(format!(
                        "index {i} appears in more than one block"
                    )));
                }
            }
            if cap == 0 || cap > block.len() {
                return Err(Error::Infeasible(format!(
                    "block {b} has cap {cap} but {} elements",
                    block.len()
                )));
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::Infeasible(format!("index {i} is in no block")));
        }
        Ok(Matroid::Partition { n, blocks, caps })
    }

    /// Parses `"0-9:1;10-19:2"`: inclusive index ranges (or single indices,
    /// comma-separated within a block) followed by the block cap.
    pub fn parse_partition(n: usize, spec: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut caps = Vec::new();
        for part in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (range, cap) = part
                .rsplit_once(':')
                .ok_or_else(|| Error::Infeasible(format!("block `{part}` lacks `:cap`")))?;
            let cap: usize = cap
                .trim()
                .parse()
                .map_err(|_| Error::Infeasible(format!("bad cap in `{part}`")))?;
            let mut block = Vec::new();
            for piece in range.split(',').map(str::trim) {
                let bad = || Error::Infeasible(format!("bad range `{piece}`"));
                match piece.split_once('-') {
                    Some((a, b)) => {
                        let a: usize = a.trim().parse().map_err(|_| bad())?;
                        let b: usize = b.trim().parse().map_err(|_| bad())?;
                        if a > b {
                            return Err(bad());
                        }
                        block.extend(a..=b);
                    }
                    None => block.push(piece.parse().map_err(|_| bad())?),
                }
            }
            blocks.push(block);
            caps.push(cap);
        }
        Self::partition(n, blocks, caps)
    }

    pub fn n(&self) -> usize {
        match self {
            Matroid::Uniform { n, .. } | Matroid::Partition { n, .. } => *n,
        }
    }

    /// Size of every base.
    pub fn rank(&self) -> usize {
        match self {
            Matroid::Uniform { k, .. } => *k,
            Matroid::Partition { caps, .. } => caps.iter().sum(),
        }
    }

    /// `max_{x∈P} ‖x‖ = √rank`.
    pub fn radius(&self) -> f64 {
        (self.rank() as f64).sqrt()
    }

    /// Blocks with caps; a uniform matroid is a single block.
    pub fn blocks(&self) -> Vec<(Vec<usize>, usize)> {
        match self {
            Matroid::Uniform { n, k } => vec![((0..*n).collect(), *k)],
            Matroid::Partition { blocks, caps, .. } => {
                blocks.iter().cloned().zip(caps.iter().copied()).collect()
            }
        }
    }

    /// `block_of[i]` and the cap of each block.
    pub fn block_index(&self) -> (Vec<usize>, Vec<usize>) {
        match self {
            Matroid::Uniform { n, k } => (vec![0; *n], vec![*k]),
            Matroid::Partition { n, blocks, caps } => {
                let mut of = vec![0; *n];
                for (b, block) in blocks.iter().enumerate() {
                    for &i in block {
                        of[i] = b;
                    }
                }
                (of, caps.clone())
            }
        }
    }

    /// Box constraints and every block-sum equality hold within `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.n() || x.iter().any(|&v| !(v >= -tol && v <= 1.0 + tol)) {
            return false;
        }
        match self {
            Matroid::Uniform { k, .. } => (x.iter().sum::<f64>() - *k as f64).abs() <= tol,
            Matroid::Partition { blocks, caps, .. } => blocks
                .iter()
                .zip(caps)
                .all(|(b, &c)| (b.iter().map(|&i| x[i]).sum::<f64>() - c as f64).abs() <= tol),
        }
    }

    /// The symmetric feasible point: `cap/|block|` on every coordinate of a block.
    pub fn initial_point(&self) -> FractionalPoint {
        let mut x = vec![0.0; self.n()];
        match self {
            Matroid::Uniform { n, k } => x.fill(*k as f64 / *n as f64),
            Matroid::Partition { blocks, caps, .. } => {
                for (b, &c) in blocks.iter().zip(caps) {
                    let v = c as f64 / b.len() as f64;
                    for &i in b {
                        x[i] = v;
                    }
                }
            }
        }
        FractionalPoint::from_raw(x)
    }

    /// Projection of `y` onto the base polytope in the norm `‖·‖_G`.
    pub fn project(&self, y: &[f64], metric: &DiagonalMetric) -> Result<FractionalPoint> {
        match self {
            Matroid::Uniform { k, .. } => {
                check_dim(self.n(), y.len())?;
                project_uniform(y, metric, *k)
            }
            Matroid::Partition { .. } => project_partition(y, metric, self),
        }
    }
}

/// Diagonal of a positive definite metric `G`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalMetric(Vec<f64>);

impl DiagonalMetric {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if let Some((i, g)) = entries
            .iter()
            .enumerate()
            .find(|(_, &g)| !(g.is_finite() && g > MIN_METRIC))
        {
            return Err(invalid(format!("metric entry {i} = {g} is not positive")));
        }
        Ok(DiagonalMetric(entries))
    }

    pub fn identity(n: usize) -> Self {
        DiagonalMetric(vec![1.0; n])
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `‖a − b‖_G`.
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(a.iter().zip(b))
            .map(|(g, (x, y))| g * (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }
}

/// Projects `y` onto `{x : Σ x_i = k, 0 ≤ x_i ≤ 1}` minimizing `(x−y)ᵀG(x−y)`.
///
/// With `c_i = g_i^{-1/2}` the problem becomes an orthogonal projection onto
/// `{u : cᵀu = k, 0 ≤ u_i ≤ 1/c_i}` in `u = G^{1/2}x`. Its solution is
/// `u_i(α) = clamp(w_i − α c_i, 0, 1/c_i)` for the `α` with `cᵀu(α) = k`,
/// i.e. `x_i(α) = clamp(y_i − α/g_i, 0, 1)`. The piecewise-linear `h(α)`
/// changes slope only at `α̲_i = (y_i − 1) g_i` and `ᾱ_i = y_i g_i`, so one
/// sorted sweep over the breakpoints finds `α*` in `O(n log n)`.
pub fn project_uniform(y: &[f64], metric: &DiagonalMetric, k: usize) -> Result<FractionalPoint> {
    let n = y.len();
    check_dim(n, metric.len())?;
    if k == 0 || k > n {
        return Err(invalid(format!("rank {k} must lie in [1, {n}]")));
    }
    if let Some(i) = y.iter().position(|v| !v.is_finite()) {
        return Err(invalid(format!("y[{i}] is not finite")));
    }
    if k == n {
        return Ok(FractionalPoint::from_raw(vec![1.0; n]));
    }
    let g = metric.entries();

    // (α, slope change). Entering the free region at α̲_i the slope of h drops
    // by c_i² = 1/g_i; leaving it at ᾱ_i the slope recovers.
    let mut bps: Vec<(f64, f64)> = Vec::with_capacity(2 * n);
    for i in 0..n {
        let s = 1.0 / g[i];
        bps.push(((y[i] - 1.0) * g[i], -s));
        bps.push((y[i] * g[i], s));
    }
    bps.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

    let k = k as f64;
    let mut h = n as f64;
    let mut slope = 0.0;
    let mut alpha = bps[0].0 - 1.0;
    let mut alpha_star = bps[bps.len() - 1].0;
    let mut idx = 0;
    while idx < bps.len() {
        let a = bps[idx].0;
        let h_next = h + (a - alpha) * slope;
        if h_next < k && k <= h {
            alpha_star = alpha + (a - alpha) * (h - k) / (h - h_next);
            break;
        }
        // Merge coincident breakpoints.
        while idx < bps.len() && bps[idx].0 == a {
            slope += bps[idx].1;
            idx += 1;
        }
        h = h_next;
        alpha = a;
    }

    // One Newton correction on the exact sum removes the drift accumulated by
    // the incremental sweep.
    let (sum, free_slope) = h_at(y, g, alpha_star);
    if free_slope > 0.0 {
        alpha_star += (sum - k) / free_slope;
    }
    let x = (0..n)
        .map(|i| (y[i] - alpha_star / g[i]).clamp(0.0, 1.0))
        .collect();
    Ok(FractionalPoint::from_raw(x))
}

/// `h(α)` and the magnitude of its slope at `α`.
fn h_at(y: &[f64], g: &[f64], alpha: f64) -> (f64, f64) {
    let mut sum = 0.0;
    let mut slope = 0.0;
    for (yi, gi) in y.iter().zip(g) {
        let v = yi - alpha / gi;
        if v >= 1.0 {
            sum += 1.0;
        } else if v > 0.0 {
            sum += v;
            slope += 1.0 / gi;
        }
    }
    (sum, slope)
}

/// Blockwise [`project_uniform`]; the objective separates over blocks.
pub fn project_partition(
    y: &[f64],
    metric: &DiagonalMetric,
    c: &Matroid,
) -> Result<FractionalPoint> {
    let Matroid::Partition { n, blocks, caps } = c else {
        return Err(invalid("project_partition needs a partition matroid"));
    };
    check_dim(*n, y.len())?;
    check_dim(*n, metric.len())?;
    let g = metric.entries();
    let mut x = vec![0.0; *n];
    for (block, &cap) in blocks.iter().zip(caps) {
        let yb: Vec<f64> = block.iter().map(|&i| y[i]).collect();
        let gb = DiagonalMetric(block.iter().map(|&i| g[i]).collect());
        let xb = project_uniform(&yb, &gb, cap)?;
        for (&i, v) in block.iter().zip(xb.iter()) {
            x[i] = *v;
        }
    }
    Ok(FractionalPoint::from_raw(x))
}
