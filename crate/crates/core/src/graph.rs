//! Dense simple graphs stored as bit rows, plus partitions, quotient
//! matrices and switching.

use crate::error::{invalid, Error, Result};
use std::collections::VecDeque;
use std::fmt::Write as _;

/// A finite simple undirected graph on vertices `0..n`.
///
/// Adjacency is kept as one bitset row per vertex. Graphs are immutable once
/// built; all operations return new graphs.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.edge_count())
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph { n, words, bits: vec![0; n * words] }
    }

    pub fn complete(n: usize) -> Self {
        Graph::empty(n).complement()
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return invalid(format!("edge ({u},{v}) out of range for order {n}"));
            }
            if u == v {
                return invalid(format!("loop at vertex {u}"));
            }
            if g.has_edge(u, v) {
                return invalid(format!("duplicate edge ({u},{v})"));
            }
            g.set(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from a symmetric predicate evaluated on pairs `u < v`.
    pub fn from_fn(n: usize, mut adj: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if adj(u, v) {
                    g.set(u, v);
                }
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        Graph::from_fn(n, |u, v| v - u == 1 || (u == 0 && v == n - 1 && n > 2))
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Graph::from_fn(a + b, |u, v| u < a && v >= a)
    }

    pub fn petersen() -> Self {
        // Kneser graph K(5,2): 2-subsets of a 5-set, adjacent when disjoint.
        let pairs: Vec<(usize, usize)> =
            (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect();
        Graph::from_fn(10, |u, v| {
            let (a, b) = pairs[u];
            let (c, d) = pairs[v];
            a != c && a != d && b != c && b != d
        })
    }

    fn set(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
        self.bits[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// The bitset row of `u`; bit `v` is set iff `u ~ v`.
    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(u).iter().enumerate().flat_map(|(w, &word)| {
            let mut x = word;
            std::iter::from_fn(move || {
                if x == 0 {
                    return None;
                }
                let t = x.trailing_zeros() as usize;
                x &= x - 1;
                Some(w * 64 + t)
            })
        })
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.degrees().iter().sum::<usize>() / 2
    }

    /// Number of common neighbours of `u` and `v`, i.e. `A²[u][v]`.
    #[inline]
    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
            .collect()
    }

    pub fn complement(&self) -> Self {
        Graph::from_fn(self.n, |u, v| !self.has_edge(u, v))
    }

    /// Adds an apex adjacent to every vertex; the apex is the last vertex.
    pub fn cone(&self) -> Self {
        let n = self.n;
        Graph::from_fn(n + 1, |u, v| v == n || self.has_edge(u, v))
    }

    /// Subgraph induced on `vertices`, relabelled in the given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Self> {
        if vertices.is_empty() {
            return invalid("empty vertex set");
        }
        let mut seen = vec![false; self.n];
        for &v in vertices {
            if v >= self.n {
                return invalid(format!("vertex {v} out of range"));
            }
            if std::mem::replace(&mut seen[v], true) {
                return invalid(format!("vertex {v} repeated"));
            }
        }
        Ok(Graph::from_fn(vertices.len(), |i, j| self.has_edge(vertices[i], vertices[j])))
    }

    /// Relabels vertex `u` as `perm[u]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return invalid("permutation length differs from order");
        }
        let mut inv = vec![usize::MAX; self.n];
        for (u, &p) in perm.iter().enumerate() {
            if p >= self.n || inv[p] != usize::MAX {
                return invalid("not a permutation");
            }
            inv[p] = u;
        }
        Ok(Graph::from_fn(self.n, |a, b| self.has_edge(inv[a], inv[b])))
    }

    /// Complements adjacency between the two cells of `sigma`.
    pub fn switch(&self, sigma: &VertexPartition) -> Result<Self> {
        if sigma.cells().len() != 2 || sigma.order() != self.n {
            return invalid("switching needs a 2-cell partition of the vertex set");
        }
        let cell = sigma.cell_index();
        Ok(Graph::from_fn(self.n, |u, v| self.has_edge(u, v) ^ (cell[u] != cell[v])))
    }

    pub fn is_connected(&self) -> bool {
        self.components() <= 1
    }

    fn components(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut count = 0;
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for w in self.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        count
    }

    pub fn is_bipartite(&self) -> bool {
        let mut side = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for w in self.neighbors(u) {
                    if side[w] == u8::MAX {
                        side[w] = 1 - side[u];
                        queue.push_back(w);
                    } else if side[w] == side[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Parses the edge-list text format: the order on the first line, then
    /// one `u v` pair per line with `u < v`. The text must end with a newline.
    pub fn parse(text: &str) -> Result<Self> {
        if !text.is_empty() && !text.ends_with('\n') {
            return Err(Error::Parse { line: text.lines().count(), msg: "missing final newline".into() });
        }
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing order".into() })?;
        let n: usize = first
            .trim()
            .parse()
            .map_err(|_| Error::Parse { line: 1, msg: format!("bad order {first:?}") })?;
        if n == 0 {
            return Err(Error::Parse { line: 1, msg: "order must be positive".into() });
        }
        let mut g = Graph::empty(n);
        for (i, line) in lines {
            let err = |msg: String| Error::Parse { line: i + 1, msg };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [a, b] = fields[..] else {
                return Err(err(format!("expected two vertices, got {line:?}")));
            };
            let u: usize = a.parse().map_err(|_| err(format!("bad vertex {a:?}")))?;
            let v: usize = b.parse().map_err(|_| err(format!("bad vertex {b:?}")))?;
            if u >= n || v >= n {
                return Err(err(format!("vertex out of range in {line:?}")));
            }
            if u == v {
                return Err(err(format!("loop at {u}")));
            }
            if u > v {
                return Err(err(format!("expected u < v in {line:?}")));
            }
            if g.has_edge(u, v) {
                return Err(err(format!("duplicate edge {u} {v}")));
            }
            g.set(u, v);
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }
}

/// An ordered list of disjoint nonempty cells covering `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    n: usize,
    cells: Vec<Vec<usize>>,
}

impl VertexPartition {
    pub fn new(n: usize, cells: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for cell in &cells {
            if cell.is_empty() {
                return invalid("empty cell");
            }
            for &v in cell {
                if v >= n {
                    return invalid(format!("vertex {v} out of range"));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return invalid(format!("vertex {v} in two cells"));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return invalid("cells do not cover the vertex set");
        }
        Ok(VertexPartition { n, cells })
    }

    /// Two cells: `first` and everything else.
    pub fn split(n: usize, first: &[usize]) -> Result<Self> {
        let mut mark = vec![false; n];
        for &v in first {
            if v < n {
                mark[v] = true;
            }
        }
        let rest = (0..n).filter(|&v| !mark[v]).collect();
        VertexPartition::new(n, vec![first.to_vec(), rest])
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.n];
        for (i, cell) in self.cells.iter().enumerate() {
            for &v in cell {
                idx[v] = i;
            }
        }
        idx
    }
}

/// `entries[i][j]` is the number of neighbours in cell `j` of any vertex of cell `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientMatrix {
    pub entries: Vec<Vec<i64>>,
}

/// Cells of equal degree, ordered by decreasing degree.
pub fn valency_partition(g: &Graph) -> VertexPartition {
    let deg = g.degrees();
    let mut distinct: Vec<usize> = deg.clone();
    distinct.sort_unstable_by(|a, b| b.cmp(a));
    distinct.dedup();
    let cells = distinct
        .iter()
        .map(|&d| (0..g.order()).filter(|&v| deg[v] == d).collect())
        .collect();
    VertexPartition { n: g.order(), cells }
}

/// Returns the quotient matrix when `pi` is equitable, `None` otherwise.
pub fn is_equitable(g: &Graph, pi: &VertexPartition) -> Result<Option<QuotientMatrix>> {
    if pi.order() != g.order() {
        return invalid("partition order differs from graph order");
    }
    let idx = pi.cell_index();
    let t = pi.cells().len();
    let mut entries = vec![vec![0i64; t]; t];
    for (i, cell) in pi.cells().iter().enumerate() {
        for (pos, &u) in cell.iter().enumerate() {
            let mut counts = vec![0i64; t];
            for w in g.neighbors(u) {
                counts[idx[w]] += 1;
            }
            if pos == 0 {
                entries[i] = counts;
            } else if entries[i] != counts {
                return Ok(None);
            }
        }
    }
    Ok(Some(QuotientMatrix { entries }))
}
