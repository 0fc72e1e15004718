use std::cell::RefCell;
use std::collections::VecDeque;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{invalid, parse_err, Result};

/// Directed graph with forward and reverse adjacency. Parallel edges are
/// merged on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

impl DirectedGraph {
    pub fn new(n_nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out = vec![Vec::new(); n_nodes];
        for (s, d) in edges {
            if s >= n_nodes || d >= n_nodes {
                return Err(invalid(format!(
                    "edge {s}->{d} out of range for {n_nodes} nodes"
                )));
            }
            out[s].push(d);
        }
        Ok(Self::from_out_lists(out))
    }

    pub(crate) fn from_out_lists(mut out: Vec<Vec<usize>>) -> Self {
        let mut inn = vec![Vec::new(); out.len()];
        for (s, list) in out.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            for &d in list.iter() {
                inn[d].push(s);
            }
        }
        DirectedGraph { out, inn }
    }

    pub fn n_nodes(&self) -> usize {
        self.out.len()
    }

    pub fn n_edges(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(s, l)| l.iter().map(move |&d| (s, d)))
    }

    pub(crate) fn check_node(&self, v: usize) -> Result<()> {
        if v >= self.n_nodes() {
            return Err(invalid(format!(
                "node {v} out of range for {} nodes",
                self.n_nodes()
            )));
        }
        Ok(())
    }

    /// Nodes reachable from `sources`, sources included, in BFS order.
    pub fn forward_reachable(&self, sources: &[usize]) -> Result<Vec<usize>> {
        for &s in sources {
            self.check_node(s)?;
        }
        Ok(with_marks(self.n_nodes(), |marks| {
            bfs(sources, marks, |v, push| {
                for &w in &self.out[v] {
                    push(w);
                }
            })
        }))
    }

    /// Nodes with a directed path to `v`, `v` included.
    pub fn ancestors(&self, v: usize) -> Result<Vec<usize>> {
        self.check_node(v)?;
        Ok(with_marks(self.n_nodes(), |marks| {
            bfs(&[v], marks, |u, push| {
                for &w in &self.inn[u] {
                    push(w);
                }
            })
        }))
    }

    /// Edge list: one `src<TAB>dst` pair per line. Blank lines and `#`
    /// comments are skipped; the node count is the largest id plus one.
    pub fn parse_edge_list(text: &str, origin: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut n = 0;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tok = line.split_whitespace();
            let mut id = |what: &str| -> Result<usize> {
                let t = tok
                    .next()
                    .ok_or_else(|| parse_err(origin, i + 1, format!("missing {what} node")))?;
                t.parse()
                    .map_err(|_| parse_err(origin, i + 1, format!("bad {what} node `{t}`")))
            };
            let s = id("source")?;
            let d = id("target")?;
            if tok.next().is_some() {
                return Err(parse_err(origin, i + 1, "expected exactly two columns"));
            }
            n = n.max(s + 1).max(d + 1);
            edges.push((s, d));
        }
        Self::new(n, edges)
    }

    pub fn read_edge_list(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_edge_list(&text, &path.display().to_string())
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for (a, b) in self.edges() {
            let _ = writeln!(s, "{a}\t{b}");
        }
        s
    }
}

/// Fraction of nodes reachable from `set`.
pub fn influence_of_set(g: &DirectedGraph, set: &[usize]) -> Result<f64> {
    if g.n_nodes() == 0 {
        return Ok(0.0);
    }
    Ok(g.forward_reachable(set)?.len() as f64 / g.n_nodes() as f64)
}

/// Epoch-stamped visited marks, reused across calls on one thread.
pub(crate) struct Marks {
    stamp: Vec<u32>,
    epoch: u32,
}

impl Marks {
    pub(crate) fn is_marked(&self, v: usize) -> bool {
        self.stamp[v] == self.epoch
    }

    /// Marks `v`; false if it was already marked in this epoch.
    pub(crate) fn mark(&mut self, v: usize) -> bool {
        if self.stamp[v] == self.epoch {
            false
        } else {
            self.stamp[v] = self.epoch;
            true
        }
    }
}

thread_local! {
    static MARKS: RefCell<Marks> = const { RefCell::new(Marks { stamp: Vec::new(), epoch: 0 }) };
}

/// Runs `f` with a fresh set of marks over `n` nodes. Not reentrant.
pub(crate) fn with_marks<T>(n: usize, f: impl FnOnce(&mut Marks) -> T) -> T {
    MARKS.with(|cell| {
        let mut m = cell.borrow_mut();
        if m.stamp.len() < n {
            m.stamp.resize(n, 0);
        }
        m.epoch = m.epoch.wrapping_add(1);
        if m.epoch == 0 {
            m.stamp.fill(0);
            m.epoch = 1;
        }
        f(&mut m)
    })
}

/// Generic BFS; `expand(v, push)` offers the successors of `v`.
pub(crate) fn bfs(
    sources: &[usize],
    marks: &mut Marks,
    mut expand: impl FnMut(usize, &mut dyn FnMut(usize)),
) -> Vec<usize> {
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    for &s in sources {
        if marks.mark(s) {
            order.push(s);
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        expand(v, &mut |w| {
            if marks.mark(w) {
                order.push(w);
                queue.push_back(w);
            }
        });
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn influence_examples() {
        let g = DirectedGraph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(influence_of_set(&g, &[1]).unwrap(), 0.75);
        assert_eq!(influence_of_set(&g, &[0, 1, 2, 3]).unwrap(), 1.0);
        let empty = DirectedGraph::new(10, []).unwrap();
        assert_eq!(influence_of_set(&empty, &[3]).unwrap(), 0.1);
        assert!(influence_of_set(&g, &[4]).is_err());
    }

    #[test]
    fn dedups_parallel_edges() {
        let g = DirectedGraph::new(3, [(0, 1), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.n_edges(), 2);
        assert_eq!(g.in_neighbors(1), &[0]);
        assert!(DirectedGraph::new(2, [(0, 2)]).is_err());
    }

    #[test]
    fn edge_list_format() {
        let g = DirectedGraph::parse_edge_list("# comment\n0\t1\n1\t4\n\n", "g.txt").unwrap();
        assert_eq!(g.n_nodes(), 5);
        assert_eq!(
            DirectedGraph::parse_edge_list(&g.to_edge_list(), "x").unwrap(),
            g
        );
        let err = DirectedGraph::parse_edge_list("0\t1\n1\tx\n", "g.txt").unwrap_err();
        assert_eq!(err.to_string(), "g.txt:2: bad target node `x`");
        assert!(DirectedGraph::parse_edge_list("0\t1\t2\n", "g").is_err());
        assert!(DirectedGraph::parse_edge_list("0\n", "g").is_err());
    }
}
