//! Facility location and exemplar-based clustering.
//!
//! Each customer `y` contributes `f_y(S) = max_{s∈S} w_{s,y}`. With that
//! customer's weights sorted as `m_1 ≥ … ≥ m_n`, `m_{n+1} = 0`, `f_y` is a
//! coverage function over a chain and
//!
//! ```text
//! F_y(x) = Σ_i (m_i − m_{i+1}) (1 − Π_{j≤i} (1 − x_j))
//! F̄_y(x) = Σ_i (m_i − m_{i+1}) min{1, Σ_{j≤i} x_j}
//! ```
//!
//! in sorted coordinates. The objective is the average over customers.

use std::path::Path;

use rand::{Rng, RngCore};

use crate::error::{invalid, parse_err, Result};
use crate::optimizer::StochasticObjective;
use crate::point::{check_dim, FractionalPoint, Subgradient};
use crate::wcf::WeightedCoverage;

#[derive(Clone, Debug)]
pub struct FacilityInstance {
    n_facilities: usize,
    /// `weights[y][s] = w_{s,y}`.
    weights: Vec<Vec<f64>>,
    /// `order[y]` lists facilities by descending weight, ties by index.
    order: Vec<Vec<usize>>,
}

impl FacilityInstance {
    /// `weights[y]` holds the weight of every facility for customer `y`.
    pub fn new(n_facilities: usize, weights: Vec<Vec<f64>>) -> Result<Self> {
        for (y, row) in weights.iter().enumerate() {
            if row.len() != n_facilities {
                return Err(invalid(format!(
                    "customer {y} has {} weights, expected {n_facilities}",
                    row.len()
                )));
            }
            if let Some((s, w)) = row
                .iter()
                .enumerate()
                .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
            {
                return Err(invalid(format!(
                    "weight w[{s},{y}] = {w} must be nonnegative"
                )));
            }
        }
        let order = weights
            .iter()
            .map(|row| {
                let mut o: Vec<usize> = (0..n_facilities).collect();
                o.sort_by(|&a, &b| row[b].total_cmp(&row[a]));
                o
            })
            .collect();
        Ok(FacilityInstance {
            n_facilities,
            weights,
            order,
        })
    }

    pub fn n_facilities(&self) -> usize {
        self.n_facilities
    }

    pub fn n_customers(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self, y: usize) -> &[f64] {
        &self.weights[y]
    }

    /// Facilities of customer `y` in descending weight order.
    pub fn order(&self, y: usize) -> &[usize] {
        &self.order[y]
    }

    /// `(m_1, …, m_n)` for customer `y`.
    fn sorted_weights(&self, y: usize) -> impl Iterator<Item = f64> + '_ {
        self.order[y].iter().map(move |&s| self.weights[y][s])
    }

    fn check_set(&self, set: &[usize]) -> Result<()> {
        match set.iter().find(|&&s| s >= self.n_facilities) {
            Some(s) => Err(invalid(format!(
                "facility {s} out of range for {}",
                self.n_facilities
            ))),
            None => Ok(()),
        }
    }

    /// Average best weight; the empty set scores 0.
    pub fn facility_value(&self, set: &[usize]) -> Result<f64> {
        self.check_set(set)?;
        if set.is_empty() || self.weights.is_empty() {
            return Ok(0.0);
        }
        let total: f64 = self
            .weights
            .iter()
            .map(|row| set.iter().map(|&s| row[s]).fold(0.0, f64::max))
            .sum();
        Ok(total / self.n_customers() as f64)
    }

    pub fn customer_concave(&self, y: usize, x: &FractionalPoint) -> Result<f64> {
        check_dim(self.n_facilities, x.len())?;
        let m: Vec<f64> = self.sorted_weights(y).collect();
        let mut cum = 0.0;
        let mut total = 0.0;
        for (i, &s) in self.order[y].iter().enumerate() {
            cum += x[s];
            let next = m.get(i + 1).copied().unwrap_or(0.0);
            total += (m[i] - next) * cum.min(1.0);
        }
        Ok(total)
    }

    pub fn customer_multilinear(&self, y: usize, x: &FractionalPoint) -> Result<f64> {
        check_dim(self.n_facilities, x.len())?;
        let m: Vec<f64> = self.sorted_weights(y).collect();
        let mut miss = 1.0;
        let mut total = 0.0;
        for (i, &s) in self.order[y].iter().enumerate() {
            miss *= 1.0 - x[s];
            let next = m.get(i + 1).copied().unwrap_or(0.0);
            total += (m[i] - next) * (1.0 - miss);
        }
        Ok(total)
    }

    fn average(&self, f: impl Fn(usize) -> Result<f64>) -> Result<f64> {
        if self.weights.is_empty() {
            return Ok(0.0);
        }
        let mut total = 0.0;
        for y in 0..self.n_customers() {
            total += f(y)?;
        }
        Ok(total / self.n_customers() as f64)
    }

    /// Average of the per-customer concave bounds.
    pub fn facility_concave(&self, x: &FractionalPoint) -> Result<f64> {
        self.average(|y| self.customer_concave(y, x))
    }

    pub fn facility_multilinear(&self, x: &FractionalPoint) -> Result<f64> {
        self.average(|y| self.customer_multilinear(y, x))
    }

    /// Supergradient of `F̄_y` at `x`, in facility indices: with `h` the first
    /// sorted position whose cumulative mass reaches 1 (`n+1` if none),
    /// `g_sorted = (m_1 − m_h, …, m_{h−1} − m_h, 0, …)`.
    pub fn customer_supergradient(&self, y: usize, x: &FractionalPoint) -> Result<Vec<f64>> {
        check_dim(self.n_facilities, x.len())?;
        let mut g = vec![0.0; self.n_facilities];
        self.add_customer_supergradient(y, x, 1.0, &mut g);
        Ok(g)
    }

    fn add_customer_supergradient(&self, y: usize, x: &[f64], scale: f64, acc: &mut [f64]) {
        let order = &self.order[y];
        let row = &self.weights[y];
        let mut cum = 0.0;
        let mut h = order.len();
        for (i, &s) in order.iter().enumerate() {
            cum += x[s];
            if cum >= 1.0 {
                h = i;
                break;
            }
        }
        let m_h = order.get(h).map_or(0.0, |&s| row[s]);
        for &s in &order[..h] {
            acc[s] += scale * (row[s] - m_h);
        }
    }

    /// Exact supergradient of the averaged bound.
    pub fn concave_supergradient(&self, x: &FractionalPoint) -> Result<Subgradient> {
        check_dim(self.n_facilities, x.len())?;
        let mut g = vec![0.0; self.n_facilities];
        let scale = 1.0 / self.n_customers().max(1) as f64;
        for y in 0..self.n_customers() {
            self.add_customer_supergradient(y, x, scale, &mut g);
        }
        Ok(Subgradient(g))
    }

    /// One sample: a uniform customer's supergradient.
    pub fn facility_subgradient<R: RngCore + ?Sized>(
        &self,
        x: &FractionalPoint,
        rng: &mut R,
    ) -> Result<Subgradient> {
        check_dim(self.n_facilities, x.len())?;
        let mut g = vec![0.0; self.n_facilities];
        if self.n_customers() > 0 {
            let y = rng.gen_range(0..self.n_customers());
            self.add_customer_supergradient(y, x, 1.0, &mut g);
        }
        Ok(Subgradient(g))
    }

    /// Gradient of `F_y` at `x`, in facility indices.
    ///
    /// In sorted coordinates `∂F_y/∂x_i = P_{i−1} · S_i`, where
    /// `P_{i−1} = Π_{j<i} (1 − x_j)` and `S_i = d_i + (1 − x_{i+1}) S_{i+1}`
    /// with `d_i = m_i − m_{i+1}`, which avoids dividing by `1 − x_i`.
    pub fn facility_multilinear_grad(&self, y: usize, x: &FractionalPoint) -> Result<Vec<f64>> {
        check_dim(self.n_facilities, x.len())?;
        if y >= self.n_customers() {
            return Err(invalid(format!("customer {y} out of range")));
        }
        let order = &self.order[y];
        let n = order.len();
        let m: Vec<f64> = self.sorted_weights(y).collect();
        let xs: Vec<f64> = order.iter().map(|&s| x[s]).collect();
        let mut suffix = vec![0.0; n];
        for i in (0..n).rev() {
            let d = m[i] - m.get(i + 1).copied().unwrap_or(0.0);
            suffix[i] = d + if i + 1 < n {
                (1.0 - xs[i + 1]) * suffix[i + 1]
            } else {
                0.0
            };
        }
        let mut g = vec![0.0; self.n_facilities];
        let mut prefix = 1.0;
        for i in 0..n {
            g[order[i]] = prefix * suffix[i];
            prefix *= 1.0 - xs[i];
        }
        Ok(g)
    }

    /// `f_y` as a coverage function over the chain: universe element `i` has
    /// weight `m_i − m_{i+1}` and is covered by the `i` best facilities.
    pub fn chain_coverage(&self, y: usize) -> Result<WeightedCoverage> {
        let m: Vec<f64> = self.sorted_weights(y).collect();
        let n = m.len();
        let weights = (0..n)
            .map(|i| m[i] - m.get(i + 1).copied().unwrap_or(0.0))
            .collect();
        let incidence = (0..n).map(|i| self.order[y][..=i].to_vec()).collect();
        WeightedCoverage::new(self.n_facilities, weights, incidence)
    }

    /// Max norm of a single customer's supergradient.
    pub fn gradient_norm_bound(&self) -> f64 {
        self.weights
            .iter()
            .map(|row| row.iter().map(|w| w * w).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    /// `facility <nX> <nY>` header then `nY` rows of `nX` weights.
    pub fn parse_matrix(text: &str, origin: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines
            .next()
            .ok_or_else(|| parse_err(origin, 1, "missing `facility` header"))?;
        let f: Vec<&str> = header.split_whitespace().collect();
        if f.len() != 3 || f[0] != "facility" {
            return Err(parse_err(origin, hl, "expected `facility <nX> <nY>`"));
        }
        let nx: usize = f[1]
            .parse()
            .map_err(|_| parse_err(origin, hl, "bad facility count"))?;
        let ny: usize = f[2]
            .parse()
            .map_err(|_| parse_err(origin, hl, "bad customer count"))?;
        let mut rows = Vec::with_capacity(ny);
        let mut last = hl;
        for (ln, line) in lines {
            last = ln;
            let row = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .ok()
                        .filter(|w| w.is_finite() && *w >= 0.0)
                        .ok_or_else(|| parse_err(origin, ln, format!("bad weight `{t}`")))
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != nx {
                return Err(parse_err(
                    origin,
                    ln,
                    format!("expected {nx} weights, found {}", row.len()),
                ));
            }
            rows.push(row);
        }
        if rows.len() != ny {
            return Err(parse_err(
                origin,
                last,
                format!("expected {ny} rows, found {}", rows.len()),
            ));
        }
        Self::new(nx, rows)
    }

    pub fn read_matrix(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_matrix(&text, &path.display().to_string())
    }
}

impl StochasticObjective for FacilityInstance {
    fn dim(&self) -> usize {
        self.n_facilities
    }

    fn sample_subgradient(
        &self,
        x: &FractionalPoint,
        rng: &mut dyn RngCore,
    ) -> Result<Subgradient> {
        self.facility_subgradient(x, rng)
    }

    fn accumulate_subgradient(
        &self,
        x: &FractionalPoint,
        rng: &mut dyn RngCore,
        scale: f64,
        acc: &mut [f64],
    ) -> Result<()> {
        check_dim(self.n_facilities, x.len())?;
        if self.n_customers() > 0 {
            let y = rng.gen_range(0..self.n_customers());
            self.add_customer_supergradient(y, x, scale, acc);
        }
        Ok(())
    }

    fn estimate_value(&self, x: &FractionalPoint, n: usize, rng: &mut dyn RngCore) -> Result<f64> {
        if self.n_customers() == 0 {
            return Ok(0.0);
        }
        let n = n.max(1);
        let mut acc = 0.0;
        for _ in 0..n {
            acc += self.customer_concave(rng.gen_range(0..self.n_customers()), x)?;
        }
        Ok(acc / n as f64)
    }

    fn estimate_multilinear(
        &self,
        x: &FractionalPoint,
        n: usize,
        rng: &mut dyn RngCore,
    ) -> Result<f64> {
        if self.n_customers() == 0 {
            return Ok(0.0);
        }
        let n = n.max(1);
        let mut acc = 0.0;
        for _ in 0..n {
            acc += self.customer_multilinear(rng.gen_range(0..self.n_customers()), x)?;
        }
        Ok(acc / n as f64)
    }

    fn exact_value(&self, x: &FractionalPoint) -> Option<f64> {
        self.facility_concave(x).ok()
    }

    fn gradient_bound(&self) -> f64 {
        self.gradient_norm_bound()
    }
}

/// Points for exemplar-based clustering.
#[derive(Clone, Debug)]
pub struct ExemplarDataset {
    points: Vec<Vec<f64>>,
}

impl ExemplarDataset {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(invalid(format!(
                    "point {i} has dimension {}, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(invalid(format!("point {i} has a non-finite coordinate")));
            }
        }
        Ok(ExemplarDataset { points })
    }

    /// One point per CSV row. A first row that does not parse as numbers is
    /// treated as a header.
    pub fn parse_csv(text: &str, origin: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut points = Vec::new();
        for (i, rec) in reader.records().enumerate() {
            let line = i + 1;
            let rec = rec.map_err(|e| parse_err(origin, line, e.to_string()))?;
            let row: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
            match row {
                Ok(r) => points.push(r),
                Err(_) if i == 0 => continue,
                Err(e) => return Err(parse_err(origin, line, e.to_string())),
            }
        }
        Self::new(points).map_err(|e| parse_err(origin, 0, e.to_string()))
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_csv(&text, &path.display().to_string())
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    /// `T(x) = (3/√m)·1 + (x − x̄)/‖x − x̄‖`.
    pub fn transformed(&self) -> Result<Vec<Vec<f64>>> {
        if self.points.is_empty() {
            return Err(invalid("empty dataset"));
        }
        let m = self.dim();
        let mut mean = vec![0.0; m];
        for p in &self.points {
            for (a, v) in mean.iter_mut().zip(p) {
                *a += v / self.points.len() as f64;
            }
        }
        let shift = 3.0 / (m as f64).sqrt();
        self.points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let dev: Vec<f64> = p.iter().zip(&mean).map(|(a, b)| a - b).collect();
                let norm = dev.iter().map(|d| d * d).sum::<f64>().sqrt();
                if norm == 0.0 || !norm.is_finite() {
                    return Err(invalid(format!(
                        "point {i} coincides with the dataset mean"
                    )));
                }
                Ok(dev.iter().map(|d| shift + d / norm).collect())
            })
            .collect()
    }
}

pub(crate) fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Facility instance whose value is `L({e_0}) − L(S ∪ {e_0})`, with `L` the
/// mean distance from each transformed point to its nearest exemplar and
/// the phantom exemplar `e_0 = 0`.
///
/// Customer `y` scores exemplar `s` as `‖T(y)‖ − ‖T(y) − T(s)‖`, floored at
/// zero where the phantom is closer; that keeps every weight nonnegative.
pub fn exemplar_objective(data: &ExemplarDataset) -> Result<FacilityInstance> {
    let t = data.transformed()?;
    let weights = t
        .iter()
        .map(|ty| {
            let to_phantom = ty.iter().map(|v| v * v).sum::<f64>().sqrt();
            t.iter()
                .map(|ts| (to_phantom - euclid(ty, ts)).max(0.0))
                .collect()
        })
        .collect();
    FacilityInstance::new(t.len(), weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn pt(v: &[f64]) -> FractionalPoint {
        FractionalPoint::new(v.to_vec()).unwrap()
    }

    fn one(w: &[f64]) -> FacilityInstance {
        FacilityInstance::new(w.len(), vec![w.to_vec()]).unwrap()
    }

    #[test]
    fn value_examples() {
        assert_eq!(one(&[3.0, 2.0, 1.0]).facility_value(&[1]).unwrap(), 2.0);
        let two = FacilityInstance::new(2, vec![vec![1.0, 4.0], vec![5.0, 0.0]]).unwrap();
        assert_eq!(two.facility_value(&[0]).unwrap(), 3.0);
        assert_eq!(two.facility_value(&[0, 1]).unwrap(), 4.5);
        assert_eq!(two.facility_value(&[]).unwrap(), 0.0);
        assert!(two.facility_value(&[2]).is_err());
    }

    #[test]
    fn concave_examples() {
        let f = one(&[3.0, 2.0, 1.0]);
        assert_eq!(f.facility_concave(&pt(&[1.0, 0.0, 0.0])).unwrap(), 3.0);
        // Term-by-term: 1·min(1,0.4) + 1·min(1,1.1) + 1·min(1,1.2).
        assert_abs_diff_eq!(
            f.facility_concave(&pt(&[0.4, 0.7, 0.1])).unwrap(),
            2.4,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            one(&[2.0, 1.0]).facility_concave(&pt(&[0.5, 0.5])).unwrap(),
            1.5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn supergradient_examples() {
        let f = one(&[3.0, 2.0, 1.0]);
        let x = [0.4, 0.7, 0.1];
        let g = f.customer_supergradient(0, &pt(&x)).unwrap();
        assert_eq!(g, vec![1.0, 0.0, 0.0]);
        let h = 1e-6;
        for i in 0..3 {
            let mut up = x;
            let mut dn = x;
            up[i] += h;
            dn[i] -= h;
            let fd = (f.facility_concave(&pt(&up)).unwrap()
                - f.facility_concave(&pt(&dn)).unwrap())
                / (2.0 * h);
            assert_abs_diff_eq!(fd, g[i], epsilon = 1e-6);
        }
        assert_eq!(
            f.customer_supergradient(0, &pt(&[1.0, 0.0, 0.0])).unwrap(),
            vec![0.0; 3]
        );
        assert_eq!(
            f.customer_supergradient(0, &pt(&[0.0; 3])).unwrap(),
            vec![3.0, 2.0, 1.0]
        );
        // Unsorted facility order is handled by the stored permutation.
        let u = one(&[1.0, 3.0, 2.0]);
        assert_eq!(
            u.customer_supergradient(0, &pt(&[0.1, 0.4, 0.7])).unwrap(),
            vec![0.0, 1.0, 0.0]
        );
    }

    #[test]
    fn multilinear_grad_examples() {
        let f = one(&[5.0]);
        for v in [0.0, 0.3, 1.0] {
            assert_eq!(
                f.facility_multilinear_grad(0, &pt(&[v])).unwrap(),
                vec![5.0]
            );
        }
        let g = one(&[2.0, 1.0])
            .facility_multilinear_grad(0, &pt(&[0.5, 0.5]))
            .unwrap();
        assert_abs_diff_eq!(g[0], 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(g[1], 0.5, epsilon = 1e-15);
        // Past the first x = 1 everything is zero.
        let g = one(&[3.0, 2.0, 1.0])
            .facility_multilinear_grad(0, &pt(&[0.2, 1.0, 0.4]))
            .unwrap();
        assert_eq!(g[2], 0.0);
    }

    #[test]
    fn multilinear_grad_matches_finite_differences() {
        let mut rng = seeded(8);
        for _ in 0..100 {
            let n = rng.gen_range(1..=8);
            let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..5.0)).collect();
            let f = one(&w);
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..0.99)).collect();
            let g = f.facility_multilinear_grad(0, &pt(&x)).unwrap();
            for i in 0..n {
                let mut up = x.clone();
                let mut dn = x.clone();
                up[i] += 1e-5;
                dn[i] -= 1e-5;
                let fd = (f.customer_multilinear(0, &pt(&up)).unwrap()
                    - f.customer_multilinear(0, &pt(&dn)).unwrap())
                    / 2e-5;
                assert!((fd - g[i]).abs() < 1e-6, "fd {fd} vs {}", g[i]);
            }
        }
    }

    #[test]
    fn chain_reduction_and_sandwich() {
        let mut rng = seeded(9);
        for _ in 0..50 {
            let n = rng.gen_range(1..=8);
            let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0..4) as f64).collect();
            let f = one(&w);
            let c = f.chain_coverage(0).unwrap();
            for mask in 0u32..1 << n {
                let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                let direct = set.iter().map(|&s| w[s]).fold(0.0, f64::max);
                assert_abs_diff_eq!(c.eval_set(&set).unwrap(), direct, epsilon = 1e-12);
            }
            let x = pt(&(0..n).map(|_| rng.gen::<f64>()).collect::<Vec<_>>());
            let z = pt(&(0..n).map(|_| rng.gen::<f64>()).collect::<Vec<_>>());
            let lo = f.customer_multilinear(0, &x).unwrap();
            let hi = f.customer_concave(0, &x).unwrap();
            assert!(crate::ONE_MINUS_INV_E * hi <= lo + 1e-12 && lo <= hi + 1e-12);
            assert_abs_diff_eq!(hi, c.concave_upper(&x).unwrap(), epsilon = 1e-12);
            let g = f.customer_supergradient(0, &x).unwrap();
            let lin: f64 = g
                .iter()
                .zip(z.iter().zip(x.iter()))
                .map(|(g, (a, b))| g * (a - b))
                .sum();
            assert!(f.customer_concave(0, &z).unwrap() <= hi + lin + 1e-9);
        }
    }

    #[test]
    fn permutation_sorts_with_stable_ties() {
        let f = one(&[1.0, 3.0, 1.0, 3.0]);
        assert_eq!(f.order(0), &[1, 3, 0, 2]);
        let order = f.order(0);
        let mut gathered = vec![0.0; 4];
        let scattered: Vec<f64> = order.iter().map(|&s| f.weights(0)[s]).collect();
        for (i, &s) in order.iter().enumerate() {
            gathered[s] = scattered[i];
        }
        assert_eq!(gathered, f.weights(0));
    }

    #[test]
    fn sampled_subgradient_is_unbiased() {
        let f = FacilityInstance::new(
            3,
            vec![
                vec![3.0, 1.0, 2.0],
                vec![0.0, 4.0, 1.0],
                vec![2.0, 2.0, 5.0],
            ],
        )
        .unwrap();
        let x = pt(&[0.3, 0.5, 0.4]);
        let exact = f.concave_supergradient(&x).unwrap();
        let mut rng = seeded(10);
        let n = 100_000;
        let mut sum = [0.0; 3];
        let mut sq = [0.0; 3];
        for _ in 0..n {
            let g = f.facility_subgradient(&x, &mut rng).unwrap();
            for i in 0..3 {
                sum[i] += g[i];
                sq[i] += g[i] * g[i];
            }
        }
        for i in 0..3 {
            let mean = sum[i] / n as f64;
            let sd = (sq[i] / n as f64 - mean * mean).max(0.0).sqrt();
            assert!((mean - exact[i]).abs() <= 4.0 * sd / (n as f64).sqrt() + 1e-12);
        }
    }

    #[test]
    fn matrix_format() {
        let f = FacilityInstance::parse_matrix("facility 2 2\n1 4\n5 0\n", "m").unwrap();
        assert_eq!(f.facility_value(&[0]).unwrap(), 3.0);
        let err = FacilityInstance::parse_matrix("facility 2 2\n1 4\n5\n", "fac.txt").unwrap_err();
        assert_eq!(err.to_string(), "fac.txt:3: expected 2 weights, found 1");
        assert!(FacilityInstance::parse_matrix("facility 2 2\n1 -4\n5 1\n", "m").is_err());
        assert!(FacilityInstance::new(2, vec![vec![1.0]]).is_err());
    }

    fn toy() -> ExemplarDataset {
        ExemplarDataset::new(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.2],
            vec![0.3, 2.0],
            vec![-1.5, 0.7],
            vec![2.2, -1.1],
        ])
        .unwrap()
    }

    /// `L(S) = mean_y min_{s∈S} ‖T(y) − s‖` over exemplar points `S`.
    fn loss(t: &[Vec<f64>], exemplars: &[Vec<f64>]) -> f64 {
        t.iter()
            .map(|y| {
                exemplars
                    .iter()
                    .map(|s| euclid(y, s))
                    .fold(f64::INFINITY, f64::min)
            })
            .sum::<f64>()
            / t.len() as f64
    }

    #[test]
    fn exemplar_transform_and_reduction() {
        let data = toy();
        let t = data.transformed().unwrap();
        for p in &t {
            let norm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((2.0..=4.0).contains(&norm));
        }
        let f = exemplar_objective(&data).unwrap();
        assert_eq!(f.facility_value(&[]).unwrap(), 0.0);
        let phantom = vec![0.0; 2];
        let base = loss(&t, std::slice::from_ref(&phantom));
        for mask in 0u32..32 {
            let set: Vec<usize> = (0..5).filter(|i| mask >> i & 1 == 1).collect();
            let mut ex: Vec<Vec<f64>> = set.iter().map(|&i| t[i].clone()).collect();
            ex.push(phantom.clone());
            let direct = base - loss(&t, &ex);
            assert_abs_diff_eq!(f.facility_value(&set).unwrap(), direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn exemplar_errors_and_csv() {
        let bad = ExemplarDataset::new(vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let err = bad.transformed().unwrap_err();
        assert!(err.to_string().contains("point 0"));
        assert!(ExemplarDataset::new(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(exemplar_objective(&ExemplarDataset::new(vec![]).unwrap()).is_err());

        let d = ExemplarDataset::parse_csv("x,y\n1,2\n3, 4\n", "p.csv").unwrap();
        assert_eq!(d.points(), &[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert!(ExemplarDataset::parse_csv("1,2\n3,z\n", "p.csv").is_err());
    }
}
