//! Orthogonal arrays from finite fields, their block graphs, and the
//! switched family `G(m, n)`.
//!
//! Field elements are listed in the canonical order `0, 1, g, g², …` of
//! [`FiniteField::canonical_order`], and index `i` in that list is symbol `i + 1`.
//! Columns of `OA(m, n)` are the pairs `(a, b)` at index `i(a)·n + i(b)`.
//! Row 0 holds `a`; the row for element `c` holds `a·c + b`, with `c` taken in
//! canonical order; the first `m` of these rows are kept.

use crate::error::{invalid, Error, Result};
use crate::field::FiniteField;
use crate::graph::{Graph, VertexPartition};
use crate::numtheory::{exact_sqrt, is_prime_power};
use crate::spectral::SpectrumSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalArray {
    n: usize,
    rows: Vec<Vec<u32>>,
}

impl OrthogonalArray {
    /// Wraps a symbol matrix after checking the defining property.
    pub fn new(n: usize, rows: Vec<Vec<u32>>) -> Result<Self> {
        if !verify_oa(&rows, n)? {
            return invalid("matrix is not an orthogonal array");
        }
        Ok(OrthogonalArray { n, rows })
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

pub fn make_field(p: u64, e: u32) -> Result<FiniteField> {
    FiniteField::new(p, e)
}

pub fn oa_construct(m: usize, f: &FiniteField) -> Result<OrthogonalArray> {
    let n = f.order() as usize;
    if m < 2 || m > n + 1 {
        return invalid(format!("need 2 ≤ m ≤ {} for a field of order {n}", n + 1));
    }
    let order = f.canonical_order();
    let mut index = vec![0u32; n];
    for (i, &x) in order.iter().enumerate() {
        index[x as usize] = i as u32;
    }
    let mut rows = vec![(0..n * n).map(|col| (col / n) as u32 + 1).collect::<Vec<u32>>()];
    for &c in &order[..m - 1] {
        rows.push(
            (0..n * n)
                .map(|col| {
                    let (a, b) = (order[col / n], order[col % n]);
                    index[f.add(f.mul(a, c), b) as usize] + 1
                })
                .collect(),
        );
    }
    OrthogonalArray::new(n, rows)
}

/// Whether every pair of rows shows each ordered symbol pair exactly once.
pub fn verify_oa(rows: &[Vec<u32>], n: usize) -> Result<bool> {
    let cols = n * n;
    if rows.iter().any(|r| r.len() != cols) {
        return invalid(format!("every row must have {cols} entries"));
    }
    if rows.iter().flatten().any(|&s| s == 0 || s as usize > n) {
        return Ok(false);
    }
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let mut seen = vec![false; cols];
            for c in 0..cols {
                let key = (rows[i][c] as usize - 1) * n + rows[j][c] as usize - 1;
                if std::mem::replace(&mut seen[key], true) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Columns adjacent when they agree in some row.
pub fn oa_block_graph(oa: &OrthogonalArray) -> Graph {
    Graph::from_fn(oa.n * oa.n, |u, v| oa.rows.iter().any(|r| r[u] == r[v]))
}

/// `C_i` = columns whose first-row symbol is `i`, for `i = 1..=n`.
pub fn parallel_class_cliques(oa: &OrthogonalArray) -> Vec<Vec<usize>> {
    let mut cliques = vec![Vec::new(); oa.n];
    for (col, &s) in oa.rows[0].iter().enumerate() {
        cliques[s as usize - 1].push(col);
    }
    cliques
}

/// `{[m(n−1)]¹, [n−m]^{m(n−1)}, [−m]^{(n−1)(n+1−m)}}`.
pub fn oa_block_spectrum(m: i64, n: i64) -> Option<SpectrumSpec> {
    SpectrumSpec::from_trace((n * n) as usize, m * (n - 1), n - m, -m)
}

/// Number of cliques to switch: `N = (n(n−2m+2) − √D) / (2(n−2m+2))` with
/// `D = (n−2m)(n−2m+2)(n+2)n`, for `n/3 < m ≤ n/2`.
pub fn switching_n(m: i64, n: i64) -> Option<i64> {
    if !(3 * m > n && 2 * m <= n) {
        return None;
    }
    let t = n - 2 * m + 2;
    let root = exact_sqrt((n - 2 * m) as i128 * t as i128 * (n + 2) as i128 * n as i128)? as i64;
    let num = n * t - root;
    let den = 2 * t;
    (num % den == 0).then_some(num / den).filter(|&nn| 1 <= nn && nn <= n - 1)
}

/// Quotient matrices of the block graph and of its switch over
/// `C₁ ∪ … ∪ C_N`, with cells `(U, rest)`.
pub fn switching_quotients(m: i64, n: i64, big_n: i64) -> ([[i64; 2]; 2], [[i64; 2]; 2]) {
    let before = [
        [n - 1 + (big_n - 1) * (m - 1), (n - big_n) * (m - 1)],
        [big_n * (m - 1), n - 1 + (n - big_n - 1) * (m - 1)],
    ];
    let after = [
        [before[0][0], (n - big_n) * (n - m + 1)],
        [big_n * (n - m + 1), before[1][1]],
    ];
    (before, after)
}

/// Predicted spectrum of `G(m, n)`.
pub fn g_family_spectrum(m: i64, n: i64) -> Option<SpectrumSpec> {
    SpectrumSpec::from_trace((n * n) as usize, n + m * (n - 1), n - m, -m)
}

/// The block graph of `OA(m, n)` and the switching partition `(U, rest)`
/// for `U = C₁ ∪ … ∪ C_N`.
pub fn switching_setup(m: usize, n: usize, big_n: usize) -> Result<(Graph, VertexPartition)> {
    let (p, e) = is_prime_power(n as u64)
        .ok_or_else(|| Error::InvalidArgument(format!("{n} is not a prime power")))?;
    if big_n == 0 || big_n >= n {
        return invalid("need 0 < N < n");
    }
    let oa = oa_construct(m, &make_field(p, e)?)?;
    let cliques = parallel_class_cliques(&oa);
    let u: Vec<usize> = cliques[..big_n].concat();
    let g = oa_block_graph(&oa);
    let sigma = VertexPartition::split(g.order(), &u)?;
    Ok((g, sigma))
}

/// `G(m, n)`: the OA block graph switched over the first `N` parallel-class cliques.
pub fn build_g(m: usize, n: usize) -> Result<Graph> {
    let big_n = switching_n(m as i64, n as i64)
        .ok_or_else(|| Error::InvalidArgument(format!("no switching N for (m,n) = ({m},{n})")))?;
    let (g, sigma) = switching_setup(m, n, big_n as usize)?;
    g.switch(&sigma)
}

/// `a₀ = 1`, `a₁ = 5`, `a_k = 4a_{k−1} − a_{k−2}`.
pub fn recurrence_a(k: usize) -> Result<i64> {
    let (mut prev, mut cur) = (1i64, 5i64);
    if k == 0 {
        return Ok(prev);
    }
    for _ in 1..k {
        let next = cur
            .checked_mul(4)
            .and_then(|x| x.checked_sub(prev))
            .ok_or(Error::Overflow("recurrence"))?;
        (prev, cur) = (cur, next);
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{integer_spectrum, srg_params, SrgParams};

    #[test]
    fn smallest_oa() {
        let oa = oa_construct(3, &make_field(2, 1).unwrap()).unwrap();
        assert_eq!(oa.rows(), &[vec![1, 1, 2, 2], vec![1, 2, 1, 2], vec![1, 2, 2, 1]]);
        assert!(oa_construct(4, &make_field(2, 1).unwrap()).is_err());
        assert!(oa_construct(1, &make_field(2, 1).unwrap()).is_err());
    }

    #[test]
    fn oa_7_16_verifies() {
        let oa = oa_construct(7, &make_field(2, 4).unwrap()).unwrap();
        assert_eq!((oa.m(), oa.rows()[0].len()), (7, 256));
        assert!(verify_oa(oa.rows(), 16).unwrap());
        let mut swapped = oa.rows().to_vec();
        swapped.swap(0, 5);
        assert!(verify_oa(&swapped, 16).unwrap());
    }

    #[test]
    fn broken_arrays() {
        let oa = oa_construct(3, &make_field(3, 1).unwrap()).unwrap();
        let mut rows = oa.rows().to_vec();
        for r in rows.iter_mut() {
            r[1] = r[0];
        }
        assert!(!verify_oa(&rows, 3).unwrap());
        assert!(verify_oa(&[vec![1, 2, 3]], 3).is_err());
    }

    #[test]
    fn rook_graph() {
        let oa = oa_construct(2, &make_field(3, 1).unwrap()).unwrap();
        let g = oa_block_graph(&oa);
        assert_eq!(srg_params(&g).unwrap(), Some(SrgParams { v: 9, k: 4, a: 1, c: 2 }));
    }

    #[test]
    fn full_array_gives_complete_graph() {
        let oa = oa_construct(4, &make_field(3, 1).unwrap()).unwrap();
        assert_eq!(oa_block_graph(&oa), Graph::complete(9));
    }

    #[test]
    fn cliques_partition_columns() {
        let oa = oa_construct(7, &make_field(2, 4).unwrap()).unwrap();
        let g = oa_block_graph(&oa);
        let cl = parallel_class_cliques(&oa);
        assert_eq!(cl.len(), 16);
        let mut all: Vec<usize> = cl.concat();
        all.sort();
        assert_eq!(all, (0..256).collect::<Vec<_>>());
        for c in &cl {
            assert_eq!(c.len(), 16);
            assert!(c.iter().all(|&u| c.iter().all(|&v| u == v || g.has_edge(u, v))));
        }
        // A column of C₁ meets each other clique in exactly one column per row s ≥ 2.
        let u = cl[0][3];
        for other in &cl[1..] {
            for s in 1..7 {
                let hits = other.iter().filter(|&&v| oa.rows()[s][u] == oa.rows()[s][v]).count();
                assert_eq!(hits, 1);
            }
        }
    }

    #[test]
    fn switching_numbers() {
        assert_eq!(switching_n(7, 16), Some(2));
        assert_eq!(switching_n(12, 25), Some(5));
        assert_eq!(switching_n(3, 10), None);
        assert_eq!(switching_n(8, 16), Some(8));
    }

    #[test]
    fn switching_quotients_for_7_16() {
        let (before, after) = switching_quotients(7, 16, 2);
        assert_eq!(before, [[21, 84], [12, 93]]);
        assert_eq!(after, [[21, 140], [20, 93]]);
    }

    #[test]
    fn oa_block_spectrum_small() {
        for (m, p, e) in [(2, 3, 1), (3, 2, 2)] {
            let f = make_field(p, e).unwrap();
            let n = f.order() as i64;
            let g = oa_block_graph(&oa_construct(m, &f).unwrap());
            let expect = oa_block_spectrum(m as i64, n).unwrap();
            let got = integer_spectrum(&g, expect.theta0, expect.theta1, expect.theta2).unwrap();
            assert_eq!(got, Some(expect));
        }
    }

    #[test]
    fn g_family_regular_case() {
        // n = 2m: N = n/2 and the switched graph is regular.
        let g = build_g(2, 4).unwrap();
        let d = g.degree(0);
        assert!((0..16).all(|u| g.degree(u) == d));
        assert!(build_g(3, 10).is_err());
        assert!(build_g(6, 12).is_err());
    }

    #[test]
    fn recurrence() {
        let a: Vec<i64> = (0..5).map(|k| recurrence_a(k).unwrap()).collect();
        assert_eq!(a, vec![1, 5, 19, 71, 265]);
        for k in 0..=20 {
            let (ak, ak1) = (recurrence_a(k).unwrap() as i128, recurrence_a(k + 1).unwrap() as i128);
            let lhs = 3 * (ak * ak + 2);
            let root = ak1 - 2 * ak;
            assert_eq!(lhs, root * root);
            assert_eq!(root.rem_euclid(2), 1);
        }
        assert!(recurrence_a(40).is_err());
    }
}
