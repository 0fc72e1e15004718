//! Seeded synthetic graphs for desk-scale experiments.

use rand::seq::SliceRandom;
use rand::Rng;

use super::graph::DirectedGraph;

/// Directed `G(n, m)` with `m = round(n · avg_out_degree)` edge draws, no
/// self-loops; duplicate draws are merged.
pub fn erdos_renyi<R: Rng + ?Sized>(n: usize, avg_out_degree: f64, rng: &mut R) -> DirectedGraph {
    let mut out = vec![Vec::new(); n];
    if n >= 2 {
        let m = (n as f64 * avg_out_degree.max(0.0)).round() as usize;
        for _ in 0..m {
            let s = rng.gen_range(0..n);
            let mut d = rng.gen_range(0..n - 1);
            if d >= s {
                d += 1;
            }
            out[s].push(d);
        }
    }
    DirectedGraph::from_out_lists(out)
}

/// Preferential attachment: each arriving node picks `m` distinct earlier
/// nodes with probability proportional to `1 + out-degree` and receives an
/// edge from each of them, so early hubs accumulate large out-degree.
pub fn preferential_attachment<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> DirectedGraph {
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    // Every node appears once, plus once per out-edge.
    let mut urn: Vec<usize> = Vec::with_capacity(n * (m + 1));
    let mut picked = Vec::with_capacity(m);
    for v in 0..n {
        if v > 0 {
            let want = m.min(v);
            picked.clear();
            if want == v {
                picked.extend(0..v);
            } else {
                while picked.len() < want {
                    let u = *urn.choose(rng).expect("urn holds every earlier node");
                    if !picked.contains(&u) {
                        picked.push(u);
                    }
                }
            }
            for &u in &picked {
                out[u].push(v);
                urn.push(u);
            }
        }
        urn.push(v);
    }
    DirectedGraph::from_out_lists(out)
}
