//! Randomized pipage rounding for uniform and partition matroids.
//!
//! Each step takes two fractional coordinates and moves mass between them,
//! keeping their sum fixed, until one of them becomes integral. The move is
//! randomized so that every coordinate keeps its expectation.

use rand::Rng;

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::point::FractionalPoint;

/// Distance from 0 or 1 below which a coordinate counts as integral.
pub const INTEGRAL_TOL: f64 = 1e-9;

/// Feasibility tolerance for inputs.
pub const FEASIBLE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundingResult {
    /// Sorted.
    pub selected: Vec<usize>,
    /// Pairwise merge steps performed.
    pub iterations: usize,
}

fn is_integral(v: f64) -> bool {
    !(INTEGRAL_TOL..=1.0 - INTEGRAL_TOL).contains(&v)
}

fn snap(v: f64) -> f64 {
    if v < 0.5 {
        0.0
    } else {
        1.0
    }
}

/// Rounds `y` in place over the coordinates `idx`, whose sum is integral.
/// Returns the number of merge steps.
fn round_block<R: Rng + ?Sized>(y: &mut [f64], idx: &[usize], rng: &mut R) -> usize {
    let mut stack = Vec::with_capacity(idx.len());
    for &i in idx {
        if is_integral(y[i]) {
            y[i] = snap(y[i]);
        } else {
            stack.push(i);
        }
    }
    let mut steps = 0;
    while stack.len() >= 2 {
        let j = stack.pop().unwrap();
        let i = stack.pop().unwrap();
        // Both new values are computed from the pre-step pair.
        let (yi, yj) = (y[i], y[j]);
        let sum = yi + yj;
        let (ni, nj) = if sum < 1.0 {
            if rng.gen::<f64>() < yj / sum {
                (0.0, sum)
            } else {
                (sum, 0.0)
            }
        } else if rng.gen::<f64>() < (1.0 - yi) / (2.0 - sum) {
            (sum - 1.0, 1.0)
        } else {
            (1.0, sum - 1.0)
        };
        y[i] = ni;
        y[j] = nj;
        steps += 1;
        for t in [i, j] {
            if is_integral(y[t]) {
                y[t] = snap(y[t]);
            } else {
                stack.push(t);
            }
        }
    }
    // A lone leftover can only come from rounding drift in an input whose
    // sum is within tolerance of an integer.
    if let Some(i) = stack.pop() {
        y[i] = snap(y[i]);
    }
    steps
}

pub fn pipage_round_uniform<R: Rng + ?Sized>(
    x: &FractionalPoint,
    k: usize,
    rng: &mut R,
) -> Result<RoundingResult> {
    let c = Matroid::uniform(x.len(), k)?;
    pipage_round(x, &c, rng)
}

pub fn pipage_round_partition<R: Rng + ?Sized>(
    x: &FractionalPoint,
    c: &Matroid,
    rng: &mut R,
) -> Result<RoundingResult> {
    if !matches!(c, Matroid::Partition { .. }) {
        return Err(Error::InvalidInput("expected a partition matroid".into()));
    }
    pipage_round(x, c, rng)
}

/// Rounds a point of the base polytope of `c` to a base, block by block.
pub fn pipage_round<R: Rng + ?Sized>(
    x: &FractionalPoint,
    c: &Matroid,
    rng: &mut R,
) -> Result<RoundingResult> {
    if !c.contains(x, FEASIBLE_TOL) {
        return Err(Error::InvalidInput(
            "point is not in the matroid base polytope".into(),
        ));
    }
    let mut y = x.as_slice().to_vec();
    let mut iterations = 0;
    for (block, _) in c.blocks() {
        iterations += round_block(&mut y, &block, rng);
    }
    let selected = y
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == 1.0)
        .map(|(i, _)| i)
        .collect();
    Ok(RoundingResult {
        selected,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn pt(v: &[f64]) -> FractionalPoint {
        FractionalPoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn integral_input_is_returned() {
        let mut rng = seeded(1);
        let r = pipage_round_uniform(&pt(&[1.0, 0.0, 1.0]), 2, &mut rng).unwrap();
        assert_eq!(r.selected, vec![0, 2]);
        assert_eq!(r.iterations, 0);

        let c = Matroid::partition(4, vec![vec![0, 1], vec![2, 3]], vec![1, 1]).unwrap();
        let r = pipage_round_partition(&pt(&[0.0, 1.0, 1.0, 0.0]), &c, &mut rng).unwrap();
        assert_eq!(r.selected, vec![1, 2]);
    }

    #[test]
    fn rejects_infeasible() {
        let mut rng = seeded(1);
        assert!(pipage_round_uniform(&pt(&[0.5, 0.6]), 1, &mut rng).is_err());
        let c = Matroid::partition(2, vec![vec![0], vec![1]], vec![1, 1]).unwrap();
        assert!(pipage_round_partition(&pt(&[1.0, 0.5]), &c, &mut rng).is_err());
    }

    #[test]
    fn symmetric_pair_chi_square() {
        let mut rng = seeded(2);
        let n = 10_000;
        let mut zero = 0;
        for _ in 0..n {
            let r = pipage_round_uniform(&pt(&[0.5, 0.5]), 1, &mut rng).unwrap();
            assert_eq!(r.selected.len(), 1);
            if r.selected == [0] {
                zero += 1;
            }
        }
        let e = n as f64 / 2.0;
        let chi2 = 2.0 * (zero as f64 - e).powi(2) / e;
        // χ²(1) upper 0.001 quantile.
        assert!(chi2 < 10.828, "chi2 = {chi2}");
    }

    #[test]
    fn marginals_uniform_and_partition() {
        let mut rng = seeded(3);
        let n = 10_000;
        let x = pt(&[0.7, 0.3, 0.6, 0.4]);
        let hits = (0..n)
            .filter(|_| {
                pipage_round_uniform(&x, 2, &mut rng)
                    .unwrap()
                    .selected
                    .contains(&0)
            })
            .count();
        assert!((hits as f64 / n as f64 - 0.7).abs() <= 0.015);

        let c = Matroid::partition(4, vec![vec![0, 1], vec![2, 3]], vec![1, 1]).unwrap();
        let x = pt(&[0.2, 0.8, 0.5, 0.5]);
        let mut hits = 0;
        for _ in 0..n {
            let r = pipage_round_partition(&x, &c, &mut rng).unwrap();
            assert_eq!(r.selected.iter().filter(|&&i| i < 2).count(), 1);
            hits += r.selected.contains(&1) as usize;
        }
        assert!((hits as f64 / n as f64 - 0.8).abs() <= 0.015);

        let c = Matroid::partition(3, vec![vec![0], vec![1, 2]], vec![1, 1]).unwrap();
        for _ in 0..100 {
            let r = pipage_round_partition(&pt(&[1.0, 0.5, 0.5]), &c, &mut rng).unwrap();
            assert!(r.selected == [0, 1] || r.selected == [0, 2]);
        }
    }

    #[test]
    fn cardinality_and_step_bound() {
        use rand::Rng;
        let mut rng = seeded(4);
        for _ in 0..2000 {
            let n = rng.gen_range(2..=30);
            let k = rng.gen_range(1..n);
            let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..2.0)).collect();
            let x = Matroid::uniform(n, k)
                .unwrap()
                .project(&y, &crate::DiagonalMetric::identity(n))
                .unwrap();
            let r = pipage_round_uniform(&x, k, &mut rng).unwrap();
            assert_eq!(r.selected.len(), k);
            assert!(r.iterations < n);
        }
    }
}
