//! Discrete baselines: greedy, lazy greedy, stochastic greedy, random bases.
//!
//! Ties between equal marginal gains always go to the smallest index, so
//! greedy and lazy greedy agree exactly.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use rand::seq::index::sample;
use rand::RngCore;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::facility::FacilityInstance;
use crate::matroid::Matroid;
use crate::optimizer::ceil_absorbing;
use crate::wcf::WeightedCoverage;

/// Set function with incremental marginal evaluation.
///
/// `State` summarizes a set; `gain` must equal `value(S ∪ {e}) − value(S)`.
pub trait SetOracle: Sync {
    type State: Clone + Send + Sync;

    fn ground_size(&self) -> usize;
    fn empty_state(&self) -> Self::State;
    fn gain(&self, state: &Self::State, e: usize) -> f64;
    fn commit(&self, state: &mut Self::State, e: usize);
    fn state_value(&self, state: &Self::State) -> f64;

    fn value(&self, set: &[usize]) -> f64 {
        let mut st = self.empty_state();
        for &e in set {
            self.commit(&mut st, e);
        }
        self.state_value(&st)
    }

    fn marginal(&self, set: &[usize], e: usize) -> f64 {
        let mut st = self.empty_state();
        for &s in set {
            self.commit(&mut st, s);
        }
        self.gain(&st, e)
    }
}

#[derive(Clone, Debug)]
pub struct CoverageState {
    covered: Vec<bool>,
    value: f64,
}

impl SetOracle for WeightedCoverage {
    type State = CoverageState;

    fn ground_size(&self) -> usize {
        self.n_ground()
    }

    fn empty_state(&self) -> CoverageState {
        CoverageState {
            covered: vec![false; self.n_universe()],
            value: 0.0,
        }
    }

    fn gain(&self, st: &CoverageState, e: usize) -> f64 {
        let w = self.weights();
        self.covers(e)
            .iter()
            .filter(|&&u| !st.covered[u])
            .map(|&u| w[u])
            .sum()
    }

    fn commit(&self, st: &mut CoverageState, e: usize) {
        st.value += self.gain(st, e);
        for &u in self.covers(e) {
            st.covered[u] = true;
        }
    }

    fn state_value(&self, st: &CoverageState) -> f64 {
        st.value
    }
}

#[derive(Clone, Debug)]
pub struct FacilityState {
    best: Vec<f64>,
}

impl SetOracle for FacilityInstance {
    type State = FacilityState;

    fn ground_size(&self) -> usize {
        self.n_facilities()
    }

    fn empty_state(&self) -> FacilityState {
        FacilityState {
            best: vec![0.0; self.n_customers()],
        }
    }

    fn gain(&self, st: &FacilityState, e: usize) -> f64 {
        if st.best.is_empty() {
            return 0.0;
        }
        let total: f64 = st
            .best
            .iter()
            .enumerate()
            .map(|(y, &b)| (self.weights(y)[e] - b).max(0.0))
            .sum();
        total / st.best.len() as f64
    }

    fn commit(&self, st: &mut FacilityState, e: usize) {
        for (y, b) in st.best.iter_mut().enumerate() {
            *b = b.max(self.weights(y)[e]);
        }
    }

    fn state_value(&self, st: &FacilityState) -> f64 {
        if st.best.is_empty() {
            0.0
        } else {
            st.best.iter().sum::<f64>() / st.best.len() as f64
        }
    }
}

/// Additive set function.
#[derive(Clone, Debug)]
pub struct Modular(pub Vec<f64>);

impl SetOracle for Modular {
    type State = f64;

    fn ground_size(&self) -> usize {
        self.0.len()
    }

    fn empty_state(&self) -> f64 {
        0.0
    }

    fn gain(&self, _: &f64, e: usize) -> f64 {
        self.0[e]
    }

    fn commit(&self, st: &mut f64, e: usize) {
        *st += self.0[e];
    }

    fn state_value(&self, st: &f64) -> f64 {
        *st
    }
}

#[derive(Clone, Debug)]
pub struct GreedyRun {
    /// Elements in the order they were added.
    pub order: Vec<usize>,
    /// Oracle value after each addition.
    pub prefix_values: Vec<f64>,
    /// Wall-clock seconds after each addition.
    pub step_seconds: Vec<f64>,
    pub value: f64,
    pub oracle_calls: usize,
}

impl GreedyRun {
    pub fn selected(&self) -> Vec<usize> {
        let mut s = self.order.clone();
        s.sort_unstable();
        s
    }
}

fn check_ground<O: SetOracle>(oracle: &O, c: &Matroid) -> Result<()> {
    if oracle.ground_size() != c.n() {
        return Err(invalid(format!(
            "oracle has {} elements but constraint has {}",
            oracle.ground_size(),
            c.n()
        )));
    }
    Ok(())
}

const PARALLEL_THRESHOLD: usize = 512;

/// Plain greedy: add the feasible element with the largest gain until no
/// feasible addition remains.
pub fn greedy<O: SetOracle>(oracle: &O, c: &Matroid) -> Result<GreedyRun> {
    check_ground(oracle, c)?;
    let n = c.n();
    let (block_of, caps) = c.block_index();
    let mut used = vec![0usize; caps.len()];
    let mut taken = vec![false; n];
    let mut st = oracle.empty_state();
    let start = Instant::now();
    let mut order = Vec::new();
    let (mut prefix_values, mut step_seconds) = (Vec::new(), Vec::new());
    let mut calls = 0;
    loop {
        let candidates: Vec<usize> = (0..n)
            .filter(|&e| !taken[e] && used[block_of[e]] < caps[block_of[e]])
            .collect();
        if candidates.is_empty() {
            break;
        }
        calls += candidates.len();
        let gains: Vec<f64> = if candidates.len() >= PARALLEL_THRESHOLD {
            candidates
                .par_iter()
                .map(|&e| oracle.gain(&st, e))
                .collect()
        } else {
            candidates.iter().map(|&e| oracle.gain(&st, e)).collect()
        };
        let mut best = 0;
        for i in 1..gains.len() {
            if gains[i] > gains[best] {
                best = i;
            }
        }
        let e = candidates[best];
        oracle.commit(&mut st, e);
        taken[e] = true;
        used[block_of[e]] += 1;
        order.push(e);
        prefix_values.push(oracle.state_value(&st));
        step_seconds.push(start.elapsed().as_secs_f64());
    }
    Ok(GreedyRun {
        order,
        prefix_values,
        step_seconds,
        value: oracle.state_value(&st),
        oracle_calls: calls,
    })
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    bound: f64,
    elem: usize,
    /// Size of the set the bound was computed against.
    stamp: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then_with(|| other.elem.cmp(&self.elem))
    }
}

/// Greedy with stale upper bounds in a max-heap. Same output as [`greedy`].
pub fn lazy_greedy<O: SetOracle>(oracle: &O, c: &Matroid) -> Result<GreedyRun> {
    check_ground(oracle, c)?;
    let n = c.n();
    let (block_of, caps) = c.block_index();
    let mut used = vec![0usize; caps.len()];
    let mut st = oracle.empty_state();
    let start = Instant::now();
    let mut order = Vec::new();
    let (mut prefix_values, mut step_seconds) = (Vec::new(), Vec::new());
    let mut calls = n;
    let mut heap: BinaryHeap<Entry> = (0..n)
        .filter(|&e| caps[block_of[e]] > 0)
        .map(|e| Entry {
            bound: oracle.gain(&st, e),
            elem: e,
            stamp: 0,
        })
        .collect();
    while let Some(top) = heap.pop() {
        let b = block_of[top.elem];
        if used[b] >= caps[b] {
            continue;
        }
        if top.stamp == order.len() {
            oracle.commit(&mut st, top.elem);
            used[b] += 1;
            order.push(top.elem);
            prefix_values.push(oracle.state_value(&st));
            step_seconds.push(start.elapsed().as_secs_f64());
        } else {
            calls += 1;
            heap.push(Entry {
                bound: oracle.gain(&st, top.elem),
                elem: top.elem,
                stamp: order.len(),
            });
        }
    }
    Ok(GreedyRun {
        order,
        prefix_values,
        step_seconds,
        value: oracle.state_value(&st),
        oracle_calls: calls,
    })
}

/// Candidate-set size per stochastic-greedy step, before capping.
pub fn stochastic_sample_size(n: usize, k: usize, eps: f64) -> usize {
    if k == 0 {
        return 0;
    }
    ceil_absorbing(n as f64 / k as f64 * (1.0 / eps).ln()).max(1.0) as usize
}

/// Stochastic greedy under a cardinality constraint.
pub fn stochastic_greedy<O: SetOracle>(
    oracle: &O,
    c: &Matroid,
    eps: f64,
    rng: &mut dyn RngCore,
) -> Result<GreedyRun> {
    check_ground(oracle, c)?;
    let k = match c {
        Matroid::Uniform { k, .. } => *k,
        Matroid::Partition { .. } => {
            return Err(Error::Unsupported(
                "stochastic greedy supports cardinality constraints only".into(),
            ))
        }
    };
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("eps = {eps} must lie in (0, 1)")));
    }
    let n = c.n();
    let size = stochastic_sample_size(n, k, eps);
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut st = oracle.empty_state();
    let start = Instant::now();
    let mut order = Vec::with_capacity(k);
    let (mut prefix_values, mut step_seconds) = (Vec::new(), Vec::new());
    let mut calls = 0;
    for _ in 0..k {
        if remaining.is_empty() {
            break;
        }
        let m = size.min(remaining.len());
        let mut picks: Vec<usize> = sample(rng, remaining.len(), m).into_iter().collect();
        picks.sort_unstable();
        calls += picks.len();
        let mut best = picks[0];
        let mut best_gain = oracle.gain(&st, remaining[best]);
        for &p in &picks[1..] {
            let g = oracle.gain(&st, remaining[p]);
            if g > best_gain {
                best = p;
                best_gain = g;
            }
        }
        let e = remaining.remove(best);
        oracle.commit(&mut st, e);
        order.push(e);
        prefix_values.push(oracle.state_value(&st));
        step_seconds.push(start.elapsed().as_secs_f64());
    }
    Ok(GreedyRun {
        order,
        prefix_values,
        step_seconds,
        value: oracle.state_value(&st),
        oracle_calls: calls,
    })
}

/// `⌈8·H²·(k·ln n + ln(2/δ))/ε²⌉` samples for a uniform `ε` bound over all
/// greedy queries with probability `1 − δ`.
pub fn prop2_sample_size(h: f64, n: f64, k: usize, eps: f64, delta: f64) -> Result<usize> {
    if !(h > 0.0 && n > 0.0 && k > 0 && eps > 0.0 && delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!(
            "need H, n, k, eps > 0 and 0 < delta < 1 (got H = {h}, n = {n}, k = {k}, eps = {eps}, delta = {delta})"
        )));
    }
    let v = 8.0 * h * h * (k as f64 * n.ln() + (2.0 / delta).ln()) / (eps * eps);
    Ok(ceil_absorbing(v).max(1.0) as usize)
}

/// A uniformly random base: `cap` elements drawn without replacement from
/// every block.
pub fn random_baseline(c: &Matroid, rng: &mut dyn RngCore) -> Vec<usize> {
    let mut set = Vec::with_capacity(c.rank());
    for (block, cap) in c.blocks() {
        let m = cap.min(block.len());
        set.extend(sample(rng, block.len(), m).into_iter().map(|i| block[i]));
    }
    set.sort_unstable();
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::ONE_MINUS_INV_E;
    use proptest::prelude::*;
    use rand::Rng;

    fn random_wcf(rng: &mut impl Rng, n: usize, m: usize) -> WeightedCoverage {
        let weights = (0..m).map(|_| rng.gen_range(0.0..3.0)).collect();
        let incidence = (0..m)
            .map(|_| {
                let size = rng.gen_range(1..=3.min(n));
                sample(rng, n, size).into_vec()
            })
            .collect();
        WeightedCoverage::new(n, weights, incidence).unwrap()
    }

    /// Best value over all independent sets, by enumeration.
    fn brute_opt<O: SetOracle>(o: &O, c: &Matroid) -> f64 {
        let n = c.n();
        let mut best: f64 = 0.0;
        for mask in 0u32..1 << n {
            let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let x: Vec<f64> = (0..n).map(|i| (mask >> i & 1) as f64).collect();
            if is_independent(c, &x) {
                best = best.max(o.value(&set));
            }
        }
        best
    }

    fn is_independent(c: &Matroid, x: &[f64]) -> bool {
        c.blocks()
            .iter()
            .all(|(b, cap)| b.iter().map(|&i| x[i]).sum::<f64>() <= *cap as f64 + 0.5)
    }

    #[test]
    fn modular_examples() {
        let o = Modular(vec![5.0, 1.0, 3.0]);
        let c = Matroid::uniform(3, 2).unwrap();
        assert_eq!(greedy(&o, &c).unwrap().selected(), vec![0, 2]);
        assert_eq!(lazy_greedy(&o, &c).unwrap().selected(), vec![0, 2]);
        let o = Modular(vec![1.0, 7.0, 2.0, 7.0, 4.0]);
        let c = Matroid::uniform(5, 3).unwrap();
        let run = lazy_greedy(&o, &c).unwrap();
        assert_eq!(run.order, vec![1, 3, 4]);
    }

    #[test]
    fn ties_go_to_smallest_index() {
        let o = Modular(vec![1.0; 6]);
        let c = Matroid::uniform(6, 2).unwrap();
        assert_eq!(greedy(&o, &c).unwrap().order, vec![0, 1]);
        assert_eq!(lazy_greedy(&o, &c).unwrap().order, vec![0, 1]);
    }

    #[test]
    fn respects_partition_caps() {
        let o = Modular(vec![9.0, 8.0, 7.0, 1.0, 2.0]);
        let c = Matroid::partition(5, vec![vec![0, 1, 2], vec![3, 4]], vec![1, 2]).unwrap();
        let run = greedy(&o, &c).unwrap();
        assert_eq!(run.selected(), vec![0, 3, 4]);
        assert_eq!(lazy_greedy(&o, &c).unwrap().selected(), vec![0, 3, 4]);
        assert!(greedy(&Modular(vec![1.0; 4]), &c).is_err());
    }

    #[test]
    fn lazy_matches_greedy_on_random_instances() {
        let mut rng = seeded(31);
        for trial in 0..200 {
            let n = rng.gen_range(2..=12);
            let m = rng.gen_range(1..=15);
            let f = random_wcf(&mut rng, n, m);
            let c = if trial % 2 == 0 {
                Matroid::uniform(n, rng.gen_range(1..=n)).unwrap()
            } else {
                let cut = rng.gen_range(1..n);
                Matroid::partition(
                    n,
                    vec![(0..cut).collect(), (cut..n).collect()],
                    vec![rng.gen_range(1..=cut), rng.gen_range(1..=n - cut)],
                )
                .unwrap()
            };
            let g = greedy(&f, &c).unwrap();
            let l = lazy_greedy(&f, &c).unwrap();
            assert_eq!(g.order, l.order);
            assert_eq!(g.value, l.value);
            assert!(l.oracle_calls <= g.oracle_calls);
        }
    }

    #[test]
    fn lazy_saves_calls_with_decay() {
        // Elements overlap heavily, so gains drop after the first pick.
        let n = 40;
        let incidence = (0..n).map(|u| vec![u % n, (u + 1) % n]).collect();
        let f =
            WeightedCoverage::new(n, (0..n).map(|u| 1.0 + u as f64).collect(), incidence).unwrap();
        let c = Matroid::uniform(n, 10).unwrap();
        let g = greedy(&f, &c).unwrap();
        let l = lazy_greedy(&f, &c).unwrap();
        assert_eq!(g.order, l.order);
        assert!(l.oracle_calls < g.oracle_calls);
    }

    #[test]
    fn approximation_guarantees() {
        let mut rng = seeded(32);
        for _ in 0..60 {
            let n = rng.gen_range(4..=12);
            let f = random_wcf(&mut rng, n, 12);
            let k = rng.gen_range(1..=4.min(n));
            let c = Matroid::uniform(n, k).unwrap();
            let opt = brute_opt(&f, &c);
            assert!(greedy(&f, &c).unwrap().value >= ONE_MINUS_INV_E * opt - 1e-12);

            let cut = n / 2;
            let p = Matroid::partition(n, vec![(0..cut).collect(), (cut..n).collect()], vec![1, 2])
                .unwrap();
            let opt = brute_opt(&f, &p);
            assert!(greedy(&f, &p).unwrap().value >= 0.5 * opt - 1e-12);
        }
    }

    #[test]
    fn facility_oracle_matches_direct_value() {
        let mut rng = seeded(33);
        let w: Vec<Vec<f64>> = (0..5)
            .map(|_| (0..6).map(|_| rng.gen_range(0.0..4.0)).collect())
            .collect();
        let f = FacilityInstance::new(6, w).unwrap();
        for set in [vec![], vec![2], vec![0, 5], vec![1, 3, 4]] {
            assert!((f.value(&set) - f.facility_value(&set).unwrap()).abs() < 1e-12);
        }
        assert!((f.marginal(&[1], 3) - (f.value(&[1, 3]) - f.value(&[1]))).abs() < 1e-12);
        let c = Matroid::uniform(6, 2).unwrap();
        assert_eq!(
            greedy(&f, &c).unwrap().order,
            lazy_greedy(&f, &c).unwrap().order
        );
    }

    #[test]
    fn stochastic_sample_sizes() {
        assert_eq!(stochastic_sample_size(4, 1, 0.5), 3);
        assert!(stochastic_sample_size(50, 5, 1e-9) >= 50);
    }

    #[test]
    fn stochastic_picks_optimum_three_quarters_of_the_time() {
        let o = Modular(vec![1.0, 4.0, 2.0, 3.0]);
        let c = Matroid::uniform(4, 1).unwrap();
        let mut rng = seeded(34);
        let trials = 20_000;
        let hits = (0..trials)
            .filter(|_| stochastic_greedy(&o, &c, 0.5, &mut rng).unwrap().order == vec![1])
            .count();
        let p = hits as f64 / trials as f64;
        let sd = (0.75f64 * 0.25 / trials as f64).sqrt();
        assert!((p - 0.75).abs() < 4.0 * sd, "p = {p}");
    }

    #[test]
    fn stochastic_full_candidates_equals_greedy() {
        let mut rng = seeded(35);
        for _ in 0..20 {
            let f = random_wcf(&mut rng, 10, 12);
            let c = Matroid::uniform(10, 3).unwrap();
            let s = stochastic_greedy(&f, &c, 1e-12, &mut rng).unwrap();
            assert_eq!(s.order, greedy(&f, &c).unwrap().order);
        }
    }

    #[test]
    fn stochastic_mean_value_guarantee() {
        let mut rng = seeded(36);
        let eps = 0.2;
        for _ in 0..5 {
            let f = random_wcf(&mut rng, 12, 14);
            let c = Matroid::uniform(12, 3).unwrap();
            let opt = brute_opt(&f, &c);
            let mean: f64 = (0..100)
                .map(|s| {
                    stochastic_greedy(&f, &c, eps, &mut seeded(s))
                        .unwrap()
                        .value
                })
                .sum::<f64>()
                / 100.0;
            assert!(mean >= (ONE_MINUS_INV_E - eps) * opt);
        }
    }

    #[test]
    fn stochastic_rejects_partition() {
        let c = Matroid::partition(2, vec![vec![0], vec![1]], vec![1, 1]).unwrap();
        let err = stochastic_greedy(&Modular(vec![1.0, 2.0]), &c, 0.1, &mut seeded(0)).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
        let u = Matroid::uniform(2, 1).unwrap();
        assert!(stochastic_greedy(&Modular(vec![1.0, 2.0]), &u, 1.0, &mut seeded(0)).is_err());
    }

    #[test]
    fn prop2_examples() {
        let e = std::f64::consts::E;
        assert_eq!(prop2_sample_size(1.0, e, 1, 1.0, 2.0 / e).unwrap(), 16);
        let a = prop2_sample_size(2.0, 100.0, 5, 0.2, 0.05).unwrap() as f64;
        let b = prop2_sample_size(2.0, 100.0, 5, 0.1, 0.05).unwrap() as f64;
        assert!((b / a - 4.0).abs() < 1e-3);
        assert!(prop2_sample_size(0.0, 10.0, 1, 0.1, 0.1).is_err());
        assert!(prop2_sample_size(1.0, 10.0, 1, 0.1, 1.0).is_err());
        assert!(prop2_sample_size(1.0, 10.0, 0, 0.1, 0.5).is_err());
    }

    #[test]
    fn sample_average_concentration() {
        use crate::influence::{erdos_renyi, IcModel};
        let (eps, delta, k) = (0.25, 0.2, 2);
        let mut rng = seeded(37);
        let g = erdos_renyi(8, 1.5, &mut rng);
        let model = IcModel::uniform(g, 0.3).unwrap();
        let s = prop2_sample_size(1.0, 8.0, k, eps, delta).unwrap();
        let truth = model.sample_average_oracle(200_000, &mut rng).unwrap();
        let pairs: Vec<Vec<usize>> = (0..8)
            .flat_map(|a| (a + 1..8).map(move |b| vec![a, b]))
            .collect();
        let mut failures = 0;
        for _ in 0..200 {
            let fhat = model.sample_average_oracle(s, &mut rng).unwrap();
            let bad = pairs
                .iter()
                .any(|p| (fhat.value(p) - truth.value(p)).abs() > eps);
            failures += bad as usize;
        }
        assert!(failures as f64 <= delta * 200.0, "{failures} failures");
    }

    #[test]
    fn random_baseline_is_a_base() {
        let c = Matroid::partition(7, vec![vec![0, 1, 2], vec![3, 4, 5, 6]], vec![2, 1]).unwrap();
        let mut rng = seeded(38);
        for _ in 0..50 {
            let s = random_baseline(&c, &mut rng);
            assert_eq!(s.len(), 3);
            assert_eq!(s.iter().filter(|&&e| e < 3).count(), 2);
        }
        let u = Matroid::uniform(5, 5).unwrap();
        assert_eq!(random_baseline(&u, &mut rng), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn random_baseline_distribution() {
        let mut rng = seeded(39);
        let u = Matroid::uniform(4, 1).unwrap();
        let draws = 10_000;
        let mut counts = [0usize; 4];
        for _ in 0..draws {
            counts[random_baseline(&u, &mut rng)[0]] += 1;
        }
        let sd = (0.25f64 * 0.75 / draws as f64).sqrt();
        for c in counts {
            assert!((c as f64 / draws as f64 - 0.25).abs() < 4.0 * sd);
        }

        let p = Matroid::partition(5, vec![vec![0, 1], vec![2, 3, 4]], vec![1, 1]).unwrap();
        let mut outcomes = std::collections::BTreeMap::new();
        for _ in 0..draws {
            *outcomes
                .entry(random_baseline(&p, &mut rng))
                .or_insert(0usize) += 1;
        }
        assert_eq!(outcomes.len(), 6);
        let sd = (1.0f64 / 6.0 * 5.0 / 6.0 / draws as f64).sqrt();
        for (_, c) in outcomes {
            assert!((c as f64 / draws as f64 - 1.0 / 6.0).abs() < 4.0 * sd);
        }
    }

    proptest! {
        #[test]
        fn oracle_marginal_is_value_difference(
            seed in 0u64..10_000,
            picks in proptest::collection::vec(0usize..9, 0..5),
            e in 0usize..9,
        ) {
            let mut rng = seeded(seed);
            let f = random_wcf(&mut rng, 9, 10);
            let mut set = picks.clone();
            set.sort_unstable();
            set.dedup();
            let mut with = set.clone();
            with.push(e);
            prop_assert!((f.marginal(&set, e) - (f.value(&with) - f.value(&set))).abs() < 1e-12);
            prop_assert!((f.value(&set) - f.eval_set(&set).unwrap()).abs() < 1e-12);
            prop_assert_eq!(f.value(&[]), 0.0);
        }
    }
}
