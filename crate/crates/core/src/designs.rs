//! Incidence structures, 2-designs, quasi-symmetric designs and the graphs
//! built from them.
//!
//! Composite graphs put the points first (incidence row order) and the
//! blocks second (column order).

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use num_rational::Ratio;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

/// Largest block count `all_k_subsets_design` will build.
pub const MAX_BLOCKS: u64 = 200_000;

/// A `v × b` 0/1 incidence matrix with no empty block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceStructure {
    v: usize,
    b: usize,
    m: Vec<bool>,
}

impl IncidenceStructure {
    pub fn new(v: usize, b: usize, m: Vec<bool>) -> Result<Self> {
        if m.len() != v * b {
            return invalid("incidence matrix has wrong size");
        }
        if v == 0 || b == 0 {
            return invalid("empty incidence structure");
        }
        if let Some(j) = (0..b).find(|&j| (0..v).all(|i| !m[i * b + j])) {
            return invalid(format!("block {j} is empty"));
        }
        Ok(IncidenceStructure { v, b, m })
    }

    pub fn from_blocks(v: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let b = blocks.len();
        let mut m = vec![false; v * b];
        for (j, blk) in blocks.iter().enumerate() {
            for &p in blk {
                if p >= v {
                    return invalid(format!("point {p} out of range"));
                }
                m[p * b + j] = true;
            }
        }
        IncidenceStructure::new(v, b, m)
    }

    pub fn points(&self) -> usize {
        self.v
    }

    pub fn blocks(&self) -> usize {
        self.b
    }

    #[inline]
    pub fn incident(&self, point: usize, block: usize) -> bool {
        self.m[point * self.b + block]
    }

    pub fn block(&self, j: usize) -> Vec<usize> {
        (0..self.v).filter(|&i| self.incident(i, j)).collect()
    }

    fn block_size(&self, j: usize) -> usize {
        (0..self.v).filter(|&i| self.incident(i, j)).count()
    }

    fn replication(&self, i: usize) -> usize {
        (0..self.b).filter(|&j| self.incident(i, j)).count()
    }

    /// `(MᵀM)[i][j]`.
    pub fn meet(&self, i: usize, j: usize) -> usize {
        (0..self.v).filter(|&p| self.incident(p, i) && self.incident(p, j)).count()
    }

    /// Strict text format: `v b`, then `v` lines of `b` characters in {0,1}.
    pub fn parse(text: &str) -> Result<Self> {
        let err = |line: usize, msg: String| Error::Parse { line, msg };
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| err(1, "missing header".into()))?;
        let dims: Vec<&str> = header.split(' ').collect();
        let [vs, bs] = dims[..] else {
            return Err(err(1, format!("expected `v b`, got {header:?}")));
        };
        let v: usize = vs.parse().map_err(|_| err(1, format!("bad v {vs:?}")))?;
        let b: usize = bs.parse().map_err(|_| err(1, format!("bad b {bs:?}")))?;
        let mut m = Vec::with_capacity(v * b);
        for i in 0..v {
            let line = lines.next().ok_or_else(|| err(i + 2, "missing row".into()))?;
            if line.len() != b {
                return Err(err(i + 2, format!("expected {b} entries, got {}", line.len())));
            }
            for ch in line.chars() {
                match ch {
                    '0' => m.push(false),
                    '1' => m.push(true),
                    other => return Err(err(i + 2, format!("invalid entry {other:?}"))),
                }
            }
        }
        if let Some(extra) = lines.next() {
            return Err(err(v + 2, format!("trailing content {extra:?}")));
        }
        IncidenceStructure::new(v, b, m).map_err(|e| err(1, e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.v, self.b);
        for i in 0..self.v {
            for j in 0..self.b {
                out.push(if self.incident(i, j) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

/// Reads a design file in the incidence text format.
pub fn ingest_design(path: &Path) -> Result<IncidenceStructure> {
    IncidenceStructure::parse(&std::fs::read_to_string(path)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Design2Params {
    pub v: i64,
    pub k: i64,
    pub lambda: i64,
    pub b: i64,
    pub r: i64,
}

/// Parameters `(v,k,λ;b,r,{x,y})`; `x` is the intersection number whose
/// block graph is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QsdParams {
    pub base: Design2Params,
    pub x: i64,
    pub y: i64,
}

impl QsdParams {
    pub fn new(v: i64, k: i64, lambda: i64, b: i64, r: i64, x: i64, y: i64) -> Self {
        QsdParams { base: Design2Params { v, k, lambda, b, r }, x, y }
    }
}

impl std::fmt::Display for QsdParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let d = self.base;
        let (lo, hi) = (self.x.min(self.y), self.x.max(self.y));
        write!(f, "({},{},{};{},{},{{{},{}}})", d.v, d.k, d.lambda, d.b, d.r, lo, hi)
    }
}

/// 2-design parameters when block sizes, replication numbers and pair
/// counts are all constant.
pub fn verify_2design(m: &IncidenceStructure) -> Option<Design2Params> {
    let (v, b) = (m.v, m.b);
    let k = m.block_size(0);
    let r = m.replication(0);
    if (0..b).any(|j| m.block_size(j) != k) || (0..v).any(|i| m.replication(i) != r) {
        return None;
    }
    if v < 2 {
        return None;
    }
    // MMᵀ = rI + λ(J − I)
    let pair = |i: usize, j: usize| (0..b).filter(|&c| m.incident(i, c) && m.incident(j, c)).count();
    let lambda = pair(0, 1);
    for i in 0..v {
        for j in i + 1..v {
            if pair(i, j) != lambda {
                return None;
            }
        }
    }
    let d = Design2Params { v: v as i64, k: k as i64, lambda: lambda as i64, b: b as i64, r: r as i64 };
    (d.v * d.r == d.b * d.k && d.lambda * (d.v - 1) == d.r * (d.k - 1)).then_some(d)
}

/// Distinct block intersection sizes.
pub fn intersection_profile(m: &IncidenceStructure) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for i in 0..m.b {
        for j in i + 1..m.b {
            out.insert(m.meet(i, j));
        }
    }
    out
}

/// Checks that `m` is quasi-symmetric without repeated blocks and that `x`
/// is one of its intersection numbers.
fn qsd_check(m: &IncidenceStructure, x: usize) -> Result<()> {
    let profile = intersection_profile(m);
    if !profile.contains(&x) {
        return invalid(format!("{x} is not an intersection number"));
    }
    if profile.len() > 2 {
        return invalid("design is not quasi-symmetric");
    }
    let k = m.block_size(0);
    if (0..m.b).any(|j| m.block_size(j) != k) || profile.contains(&k) {
        return invalid("repeated or unequal blocks");
    }
    Ok(())
}

/// Blocks adjacent when they meet in exactly `x` points.
pub fn block_graph(m: &IncidenceStructure, x: usize) -> Result<Graph> {
    qsd_check(m, x)?;
    Ok(Graph::from_fn(m.b, |i, j| m.meet(i, j) == x))
}

/// Eigenvalues of the `x`-block graph and their multiplicities `(1, v−1, b−v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockSpectrum {
    pub e0: Ratio<i64>,
    pub e1: Ratio<i64>,
    pub e2: Ratio<i64>,
    pub multiplicities: [i64; 3],
}

pub fn block_spectrum_formula(q: &QsdParams) -> Result<BlockSpectrum> {
    let Design2Params { v, k, lambda, b, r } = q.base;
    let (x, y) = (q.x, q.y);
    if x == y {
        return invalid("intersection numbers coincide");
    }
    let d = x - y;
    Ok(BlockSpectrum {
        e0: Ratio::new(k * (r - 1) - y * (b - 1), d),
        e1: Ratio::new(r - lambda - k + y, d),
        e2: Ratio::new(y - k, d),
        multiplicities: [1, v - 1, b - v],
    })
}

/// `[[P, M], [Mᵀ, B_x]]` where `P` is empty (`complete = false`) or `J − I`.
fn composite(m: &IncidenceStructure, x: usize, complete: bool) -> Result<Graph> {
    qsd_check(m, x)?;
    let v = m.v;
    let meets: Vec<Vec<usize>> = (0..m.b).map(|i| (0..m.b).map(|j| m.meet(i, j)).collect()).collect();
    Ok(Graph::from_fn(v + m.b, |a, c| match (a < v, c < v) {
        (true, true) => complete,
        (true, false) => m.incident(a, c - v),
        (false, false) => meets[a - v][c - v] == x,
        (false, true) => unreachable!("from_fn visits a < c"),
    }))
}

pub fn total_graph(m: &IncidenceStructure, x: usize) -> Result<Graph> {
    composite(m, x, false)
}

pub fn whole_graph(m: &IncidenceStructure, x: usize) -> Result<Graph> {
    composite(m, x, true)
}

/// `[[O, M], [Mᵀ, J − I]]` for a symmetric 2-(λ³−λ+1, λ², λ) design.
pub fn rank8_graph(m: &IncidenceStructure) -> Result<Graph> {
    let d = verify_2design(m).ok_or_else(|| Error::InvalidArgument("not a 2-design".into()))?;
    let l = d.lambda;
    if d.b != d.v || l < 2 || d.v != l * l * l - l + 1 || d.k != l * l {
        return invalid(format!("expected a symmetric 2-(λ³−λ+1,λ²,λ) design, got {d:?}"));
    }
    let v = m.v;
    Ok(Graph::from_fn(2 * v, |a, c| match (a < v, c < v) {
        (true, true) => false,
        (true, false) => m.incident(a, c - v),
        _ => true,
    }))
}

pub fn complement_design(m: &IncidenceStructure) -> Result<IncidenceStructure> {
    IncidenceStructure::new(m.v, m.b, m.m.iter().map(|&x| !x).collect())
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    let mut acc: u64 = 1;
    for i in 0..k.min(n - k) {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Blocks are all `k`-subsets of `0..n` in lexicographic order.
pub fn all_k_subsets_design(n: usize, k: usize) -> Result<IncidenceStructure> {
    if k == 0 || k > n {
        return invalid("need 1 ≤ k ≤ n");
    }
    match binomial(n as u64, k as u64) {
        Some(c) if c <= MAX_BLOCKS => {}
        _ => return invalid(format!("C({n},{k}) exceeds the block cap {MAX_BLOCKS}")),
    }
    let mut blocks = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        blocks.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else { break };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    IncidenceStructure::from_blocks(n, &blocks)
}

/// The Fano plane: points are the nonzero vectors of F₂³ (point `i` is
/// vector `i+1`), lines are `{a, b, a⊕b}` sorted lexicographically.
pub fn fano() -> IncidenceStructure {
    let mut lines: BTreeSet<Vec<usize>> = BTreeSet::new();
    for a in 1..8usize {
        for b in a + 1..8 {
            let mut l = vec![a - 1, b - 1, (a ^ b) - 1];
            l.sort_unstable();
            lines.insert(l);
        }
    }
    let lines: Vec<Vec<usize>> = lines.into_iter().collect();
    IncidenceStructure::from_blocks(7, &lines).expect("Fano lines are valid")
}

/// The 2-(8,4,3) design of the 14 affine planes of F₂³: for each nonzero
/// functional `f` the two cosets `{x : f·x = c}`, `c = 0, 1`.
pub fn sqs8() -> IncidenceStructure {
    let mut blocks = Vec::new();
    for f in 1..8u32 {
        for c in 0..2u32 {
            blocks.push((0..8usize).filter(|&x| (x as u32 & f).count_ones() % 2 == c).collect());
        }
    }
    IncidenceStructure::from_blocks(8, &blocks).expect("affine planes are valid")
}

/// Resolves `fano`, `fano-complement`, `sqs8` and `all-K-of-N`.
pub fn builtin(name: &str) -> Result<IncidenceStructure> {
    match name {
        "fano" => Ok(fano()),
        "fano-complement" => complement_design(&fano()),
        "sqs8" => Ok(sqs8()),
        _ => {
            let parts: Vec<&str> = name.split('-').collect();
            if let ["all", k, "of", n] = parts[..] {
                if let (Ok(k), Ok(n)) = (k.parse(), n.parse()) {
                    return all_k_subsets_design(n, k);
                }
            }
            invalid(format!("unknown built-in design {name:?}"))
        }
    }
}

/// Human-readable parameter line for a QSD.
pub fn describe(m: &IncidenceStructure) -> String {
    let mut out = String::new();
    if let Some(d) = verify_2design(m) {
        write!(out, "2-({},{},{}) b={} r={}", d.v, d.k, d.lambda, d.b, d.r).unwrap();
    } else {
        out.push_str("not a 2-design");
    }
    let prof: Vec<String> = intersection_profile(m).iter().map(usize::to_string).collect();
    write!(out, " intersections {{{}}}", prof.join(",")).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{integer_spectrum, verify_three_ev};

    #[test]
    fn six_subsets_of_eight() {
        let d = all_k_subsets_design(8, 6).unwrap();
        assert_eq!(d.blocks(), 28);
        assert_eq!(verify_2design(&d), Some(Design2Params { v: 8, k: 6, lambda: 15, b: 28, r: 21 }));
        assert_eq!(intersection_profile(&d), BTreeSet::from([4, 5]));
    }

    #[test]
    fn small_subset_designs() {
        let d = all_k_subsets_design(4, 2).unwrap();
        assert_eq!(verify_2design(&d), Some(Design2Params { v: 4, k: 2, lambda: 1, b: 6, r: 3 }));
        let one = all_k_subsets_design(3, 3).unwrap();
        assert_eq!(one.blocks(), 1);
        assert!(block_graph(&one, 3).is_err());
        assert!(all_k_subsets_design(40, 20).is_err());
        assert_eq!(all_k_subsets_design(4, 2).unwrap().block(0), vec![0, 1]);
        assert_eq!(all_k_subsets_design(4, 2).unwrap().block(5), vec![2, 3]);
    }

    #[test]
    fn fano_and_complement() {
        let f = fano();
        assert_eq!(verify_2design(&f), Some(Design2Params { v: 7, k: 3, lambda: 1, b: 7, r: 3 }));
        let c = complement_design(&f).unwrap();
        assert_eq!(verify_2design(&c), Some(Design2Params { v: 7, k: 4, lambda: 2, b: 7, r: 4 }));
        assert_eq!(intersection_profile(&c), BTreeSet::from([2]));
        assert_eq!(complement_design(&c).unwrap(), f);
    }

    #[test]
    fn deviant_column_is_not_a_design() {
        let f = fano();
        let mut m = f.m.clone();
        m[0] = !m[0];
        let broken = IncidenceStructure::new(7, 7, m).unwrap();
        assert_eq!(verify_2design(&broken), None);
    }

    #[test]
    fn repeated_blocks_meet_in_k() {
        let d = IncidenceStructure::from_blocks(4, &[vec![0, 1], vec![0, 1], vec![2, 3]]).unwrap();
        assert!(intersection_profile(&d).contains(&2));
        assert!(block_graph(&d, 0).is_err());
    }

    #[test]
    fn sqs8_parameters() {
        let s = sqs8();
        assert_eq!(verify_2design(&s), Some(Design2Params { v: 8, k: 4, lambda: 3, b: 14, r: 7 }));
        // Brute force over all 91 block pairs.
        let mut seen = BTreeSet::new();
        for i in 0..14 {
            for j in i + 1..14 {
                let a: BTreeSet<usize> = s.block(i).into_iter().collect();
                seen.insert(s.block(j).iter().filter(|p| a.contains(p)).count());
            }
        }
        assert_eq!(seen, BTreeSet::from([0, 2]));
        assert_eq!(intersection_profile(&s), seen);
    }

    #[test]
    fn block_graph_of_six_subsets() {
        let d = all_k_subsets_design(8, 6).unwrap();
        let b5 = block_graph(&d, 5).unwrap();
        let spec = integer_spectrum(&b5, 12, 4, -2).unwrap().unwrap();
        assert_eq!((spec.m1, spec.m2), (7, 20));
        assert_eq!(block_graph(&d, 4).unwrap(), b5.complement());
        assert!(block_graph(&d, 3).is_err());
        let q = QsdParams::new(8, 6, 15, 28, 21, 5, 4);
        let f = block_spectrum_formula(&q).unwrap();
        assert_eq!((f.e0, f.e1, f.e2), (Ratio::from(12), Ratio::from(4), Ratio::from(-2)));
        assert_eq!(f.multiplicities, [1, 7, 20]);
    }

    #[test]
    fn block_graph_of_sqs8() {
        let b2 = block_graph(&sqs8(), 2).unwrap();
        let q = QsdParams::new(8, 4, 3, 14, 7, 2, 0);
        let f = block_spectrum_formula(&q).unwrap();
        assert_eq!((f.e0, f.e1, f.e2), (Ratio::from(12), Ratio::from(0), Ratio::from(-2)));
        let spec = integer_spectrum(&b2, 12, 0, -2).unwrap().unwrap();
        assert_eq!([1, spec.m1 as i64, spec.m2 as i64], f.multiplicities);
    }

    #[test]
    fn block_spectrum_of_external_design() {
        let q = QsdParams::new(22, 15, 80, 176, 120, 9, 11);
        let f = block_spectrum_formula(&q).unwrap();
        assert_eq!((f.e0, f.e1), (Ratio::from(70), Ratio::from(-18)));
        assert_eq!(f.e2, Ratio::from(2));
        assert!(block_spectrum_formula(&QsdParams::new(7, 3, 1, 7, 3, 1, 1)).is_err());
    }

    #[test]
    fn pooled_symmetric_design_collapses() {
        // Two copies of the Fano plane: blocks meet in 1 (distinct lines) or
        // 3 (a line and its copy), so x = 3 = k is rejected, and the formula
        // with x = 1, y = 3 gives e₀ = e₁.
        let f = fano();
        let blocks: Vec<Vec<usize>> = (0..14).map(|j| f.block(j % 7)).collect();
        let pooled = IncidenceStructure::from_blocks(7, &blocks).unwrap();
        assert!(block_graph(&pooled, 1).is_err());
        let d = verify_2design(&pooled).unwrap();
        let q = QsdParams { base: d, x: 3, y: 1 };
        let s = block_spectrum_formula(&q).unwrap();
        assert_eq!(s.e0, s.e1);
    }

    #[test]
    fn total_and_whole_graphs() {
        let d = all_k_subsets_design(8, 6).unwrap();
        let w = whole_graph(&d, 5).unwrap();
        let t = total_graph(&d, 5).unwrap();
        assert_eq!(w.order(), 36);
        let mut deg = w.degrees();
        deg.sort();
        assert_eq!(deg, [vec![18; 28], vec![28; 8]].concat());
        for u in 0..36 {
            for v in 0..36 {
                let points = u < 8 && v < 8 && u != v;
                assert_eq!(w.has_edge(u, v), t.has_edge(u, v) ^ points);
            }
        }
        let spec = verify_three_ev(&w, 3, -10).unwrap().unwrap().spec.unwrap();
        assert_eq!((spec.theta0, spec.m1, spec.m2), (21, 7, 28));
    }

    #[test]
    fn total_graph_of_sqs8() {
        let t = total_graph(&sqs8(), 2).unwrap();
        assert_eq!(t.order(), 22);
        let mut deg = t.degrees();
        deg.sort();
        // {[r]^v, [k+e₀]^b} = {[7]^8, [16]^14}
        assert_eq!(deg, [vec![7; 8], vec![16; 14]].concat());
        let spec = verify_three_ev(&t, 0, -4).unwrap().unwrap().spec.unwrap();
        assert_eq!(spec.theta0, 14);
    }

    #[test]
    fn rank8_construction() {
        let g = rank8_graph(&complement_design(&fano()).unwrap()).unwrap();
        assert_eq!(g.order(), 14);
        let spec = integer_spectrum(&g, 8, 1, -2).unwrap().unwrap();
        assert_eq!((spec.m1, spec.m2), (6, 7));
        assert_eq!(2 * g.edge_count(), 98);
        assert!(rank8_graph(&fano()).is_err());
        assert!(rank8_graph(&sqs8()).is_err());
    }

    #[test]
    fn text_format() {
        let f = fano();
        assert_eq!(IncidenceStructure::parse(&f.to_text()).unwrap(), f);
        assert!(IncidenceStructure::parse("2 2\n10\n02\n").is_err());
        assert!(IncidenceStructure::parse("2 2\n10\n").is_err());
        assert!(IncidenceStructure::parse("2 2\n10\n01\n11\n").is_err());
        assert!(IncidenceStructure::parse("2 2\n100\n01\n").is_err());
        assert!(IncidenceStructure::parse("2 2\n10\n00\n").is_err());
        assert!(IncidenceStructure::parse("2 2\n10\n01\n").is_ok());
        assert!(IncidenceStructure::parse("2 2\n00\n01\n").is_err());
    }

    #[test]
    fn builtins() {
        assert_eq!(builtin("all-6-of-8").unwrap().blocks(), 28);
        assert_eq!(builtin("fano-complement").unwrap(), complement_design(&fano()).unwrap());
        assert!(builtin("nope").is_err());
    }
}
