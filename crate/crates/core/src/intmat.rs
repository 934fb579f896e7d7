//! Square integer matrices built from adjacency matrices, with checked arithmetic.

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, data: vec![0; n * n] }
    }

    pub fn adjacency(g: &Graph) -> Self {
        let mut m = IntMatrix::zeros(g.order());
        for u in 0..g.order() {
            for v in g.neighbors(u) {
                m.data[u * m.n + v] = 1;
            }
        }
        m
    }

    /// `A²` by popcount of row intersections.
    pub fn adjacency_squared(g: &Graph) -> Self {
        let n = g.order();
        let mut m = IntMatrix::zeros(n);
        for u in 0..n {
            for v in u..n {
                let c = g.common_neighbors(u, v) as i64;
                m.data[u * n + v] = c;
                m.data[v * n + u] = c;
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// `self · A(g)`.
    pub fn times_adjacency(&self, g: &Graph) -> Result<Self> {
        let n = self.n;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            let src = self.row(i);
            let dst = &mut out.data[i * n..(i + 1) * n];
            for (w, &x) in src.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for v in g.neighbors(w) {
                    dst[v] = dst[v].checked_add(x).ok_or(Error::Overflow("matrix product"))?;
                }
            }
        }
        Ok(out)
    }

    /// `Σ coeffs[i] · terms[i]` plus `diag · I`.
    pub fn combine(terms: &[(&IntMatrix, i64)], diag: i64) -> Result<Self> {
        let n = terms.first().map_or(0, |t| t.0.n);
        let mut out = IntMatrix::zeros(n);
        for (m, c) in terms {
            for (o, &x) in out.data.iter_mut().zip(&m.data) {
                *o = x
                    .checked_mul(*c)
                    .and_then(|y| o.checked_add(y))
                    .ok_or(Error::Overflow("matrix combination"))?;
            }
        }
        for i in 0..n {
            let d = &mut out.data[i * n + i];
            *d = d.checked_add(diag).ok_or(Error::Overflow("matrix combination"))?;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn trace(&self) -> i64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_product(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        let n = a.order();
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = (0..n).map(|k| a.get(i, k) * b.get(k, j)).sum();
            }
        }
        out
    }

    #[test]
    fn squares_agree_with_naive_product() {
        let g = Graph::petersen().cone();
        let a = IntMatrix::adjacency(&g);
        let a2 = IntMatrix::adjacency_squared(&g);
        assert_eq!(a2, naive_product(&a, &a));
        assert_eq!(a2.times_adjacency(&g).unwrap(), naive_product(&a2, &a));
        assert_eq!(a2.trace(), 2 * g.edge_count() as i64);
    }

    #[test]
    fn combination() {
        let g = Graph::complete(3);
        let a = IntMatrix::adjacency(&g);
        let a2 = IntMatrix::adjacency_squared(&g);
        // K3: A² - A - 2I = 0
        assert!(IntMatrix::combine(&[(&a2, 1), (&a, -1)], -2).unwrap().is_zero());
    }
}
