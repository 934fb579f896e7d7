//! Exact certification of graphs with three distinct eigenvalues.
//!
//! A connected graph has exactly three eigenvalues `θ₀ > θ₁ > θ₂` iff
//! `A² − sA + pI = ααᵀ` for a positive vector `α`, where `s = θ₁ + θ₂` and
//! `p = θ₁θ₂`. The diagonal forces `α_x² = d_x + p`, so the identity can be
//! checked entrywise by squaring, with no square roots taken.

use crate::error::{invalid, Error, Result};
use crate::graph::{is_equitable, valency_partition, Graph, VertexPartition};
use crate::intmat::IntMatrix;
use crate::numtheory::exact_sqrt;
use std::collections::BTreeMap;
use std::fmt;

/// `{[θ₀]¹, [θ₁]^m₁, [θ₂]^m₂}` with integer eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpectrumSpec {
    pub theta0: i64,
    pub theta1: i64,
    pub theta2: i64,
    pub m1: usize,
    pub m2: usize,
}

impl SpectrumSpec {
    /// Solves the trace system for the multiplicities of `θ₁`, `θ₂` on `n` vertices.
    pub fn from_trace(n: usize, theta0: i64, theta1: i64, theta2: i64) -> Option<Self> {
        if !(theta0 > theta1 && theta1 > theta2) || n < 3 {
            return None;
        }
        let n1 = n as i64 - 1;
        let num = -theta0 - n1 * theta2;
        let den = theta1 - theta2;
        if num % den != 0 {
            return None;
        }
        let m1 = num / den;
        let m2 = n1 - m1;
        (m1 > 0 && m2 > 0).then(|| SpectrumSpec {
            theta0,
            theta1,
            theta2,
            m1: m1 as usize,
            m2: m2 as usize,
        })
    }

    pub fn s(&self) -> i64 {
        self.theta1 + self.theta2
    }

    pub fn p(&self) -> i64 {
        self.theta1 * self.theta2
    }

    pub fn order(&self) -> usize {
        1 + self.m1 + self.m2
    }

    /// `Σ θ²·mult`, which equals `2|E|` for a genuine spectrum.
    pub fn second_moment(&self) -> i128 {
        let sq = |t: i64| (t as i128) * (t as i128);
        sq(self.theta0) + self.m1 as i128 * sq(self.theta1) + self.m2 as i128 * sq(self.theta2)
    }

    pub fn multiset(&self) -> SpectrumMultiset {
        let mut m = SpectrumMultiset::new();
        m.add(Eigenvalue::Int(self.theta0), 1);
        m.add(Eigenvalue::Int(self.theta1), self.m1);
        m.add(Eigenvalue::Int(self.theta2), self.m2);
        m
    }
}

impl fmt::Display for SpectrumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{[{}]^1, [{}]^{}, [{}]^{}}}",
            self.theta0, self.theta1, self.m1, self.theta2, self.m2
        )
    }
}

/// Result of a successful rank-one check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeEvCertificate {
    pub s: i64,
    pub p: i64,
    /// Present when `θ₁, θ₂` are integers and the trace system is solvable.
    pub spec: Option<SpectrumSpec>,
    /// `α_x² = d_x + p` per vertex.
    pub alpha_squared: Vec<i64>,
    /// Degree → number of vertices, ascending by degree.
    pub degrees: BTreeMap<usize, usize>,
}

impl ThreeEvCertificate {
    /// Text report used by the CLI and golden tests.
    pub fn report(&self) -> String {
        let mut out = String::new();
        match &self.spec {
            Some(sp) => {
                out += &format!("theta {} {} {}\n", sp.theta0, sp.theta1, sp.theta2);
                out += &format!("multiplicities 1 {} {}\n", sp.m1, sp.m2);
            }
            None => out += &format!("theta irrational s={} p={}\n", self.s, self.p),
        }
        let hist: Vec<String> =
            self.degrees.iter().rev().map(|(d, c)| format!("{d}^{c}")).collect();
        out += &format!("degrees {}\n", hist.join(" "));
        let alphas: Vec<String> = self.alpha_squared.iter().map(i64::to_string).collect();
        out += &format!("alpha_squared {}\n", alphas.join(" "));
        out
    }
}

/// Entry `(x, y)` where the rank-one identity first fails (row-major, `x ≤ y`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub x: usize,
    pub y: usize,
}

fn b_entry(a2: &IntMatrix, g: &Graph, s: i64, p: i64, x: usize, y: usize) -> i64 {
    let adj = g.has_edge(x, y) as i64;
    a2.get(x, y) - s * adj + if x == y { p } else { 0 }
}

fn degree_histogram(g: &Graph) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for d in g.degrees() {
        *h.entry(d).or_insert(0) += 1;
    }
    h
}

fn check_preconditions(g: &Graph) -> Result<()> {
    let n = g.order();
    if !g.is_connected() {
        return invalid("graph is disconnected");
    }
    if g.edge_count() == n * (n - 1) / 2 {
        return invalid("graph is complete");
    }
    Ok(())
}

/// Runs the entrywise check and returns either a certificate or the first
/// failing entry.
pub fn three_ev_check(
    g: &Graph,
    s: i64,
    p: i64,
) -> Result<std::result::Result<ThreeEvCertificate, Violation>> {
    check_preconditions(g)?;
    let n = g.order();
    let a2 = IntMatrix::adjacency_squared(g);
    let alpha2: Vec<i64> = g.degrees().iter().map(|&d| d as i64 + p).collect();
    for x in 0..n {
        if alpha2[x] <= 0 {
            return Ok(Err(Violation { x, y: x }));
        }
        for y in x..n {
            let b = b_entry(&a2, g, s, p, x, y);
            if b < 0 || (b as i128) * (b as i128) != alpha2[x] as i128 * alpha2[y] as i128 {
                return Ok(Err(Violation { x, y }));
            }
        }
    }
    let spec = recover_spectrum(g, &a2, s, p, &alpha2);
    Ok(Ok(ThreeEvCertificate { s, p, spec, alpha_squared: alpha2, degrees: degree_histogram(g) }))
}

/// Certificate iff `A² − sA + pI` equals the rank-one matrix `(α_x α_y)`.
pub fn verify_three_ev(g: &Graph, s: i64, p: i64) -> Result<Option<ThreeEvCertificate>> {
    Ok(three_ev_check(g, s, p)?.ok())
}

/// Recovers `(s, p)` from one non-adjacent and one adjacent pair, then
/// runs the full check. `None` when no candidate certifies.
pub fn find_three_ev(g: &Graph) -> Result<Option<ThreeEvCertificate>> {
    check_preconditions(g)?;
    let n = g.order();
    let a2 = IntMatrix::adjacency_squared(g);
    let pair = |adjacent: bool| {
        (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).find(|&(x, y)| g.has_edge(x, y) == adjacent)
    };
    let ((x, y), (u, w)) = (pair(false).expect("not complete"), pair(true).expect("connected"));
    let (dx, dy) = (g.degree(x) as i128, g.degree(y) as i128);
    let c = a2.get(x, y) as i128;
    // (d_x + p)(d_y + p) = A²[x][y]²
    let Some(root) = exact_sqrt((dx - dy) * (dx - dy) + 4 * c * c) else { return Ok(None) };
    for twice_p in [-(dx + dy) + root, -(dx + dy) - root] {
        if twice_p % 2 != 0 {
            continue;
        }
        let p = (twice_p / 2) as i64;
        let prod = (g.degree(u) as i128 + p as i128) * (g.degree(w) as i128 + p as i128);
        let Some(alpha) = exact_sqrt(prod) else { continue };
        let s = a2.get(u, w) - alpha as i64;
        if let Some(cert) = verify_three_ev(g, s, p)? {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

fn recover_spectrum(
    g: &Graph,
    a2: &IntMatrix,
    s: i64,
    p: i64,
    alpha2: &[i64],
) -> Option<SpectrumSpec> {
    let root = exact_sqrt(s as i128 * s as i128 - 4 * p as i128)? as i64;
    if (s + root) % 2 != 0 {
        return None;
    }
    let (theta1, theta2) = ((s + root) / 2, (s - root) / 2);
    // Aα = θ₀α gives Σ_{w~x} α_w α_x = θ₀ α_x², and α_w α_x = B[w][x].
    let row_sum = |x: usize| -> i64 { g.neighbors(x).map(|w| b_entry(a2, g, s, p, w, x)).sum() };
    let num0 = row_sum(0);
    if num0 % alpha2[0] != 0 {
        return None;
    }
    let theta0 = num0 / alpha2[0];
    if (1..g.order()).any(|x| row_sum(x) != theta0 * alpha2[x]) {
        return None;
    }
    let spec = SpectrumSpec::from_trace(g.order(), theta0, theta1, theta2)?;
    (spec.second_moment() == 2 * g.edge_count() as i128).then_some(spec)
}

/// Checks that every 2×2 minor of `A² − sA + pI` vanishes, pivoting on a
/// positive diagonal entry.
pub fn rank_one_minors(g: &Graph, s: i64, p: i64) -> bool {
    let n = g.order();
    let a2 = IntMatrix::adjacency_squared(g);
    let Some(r) = (0..n).find(|&r| b_entry(&a2, g, s, p, r, r) > 0) else {
        return false;
    };
    let brr = b_entry(&a2, g, s, p, r, r) as i128;
    let col: Vec<i128> = (0..n).map(|x| b_entry(&a2, g, s, p, x, r) as i128).collect();
    (0..n).all(|x| {
        (0..n).all(|y| b_entry(&a2, g, s, p, x, y) as i128 * brr == col[x] * col[y])
    })
}

/// Spectrum when `(A−θ₀I)(A−θ₁I)(A−θ₂I) = O` and the trace system is consistent.
pub fn integer_spectrum(
    g: &Graph,
    theta0: i64,
    theta1: i64,
    theta2: i64,
) -> Result<Option<SpectrumSpec>> {
    if !(theta0 > theta1 && theta1 > theta2) {
        return Ok(None);
    }
    let e1 = theta0 + theta1 + theta2;
    let e2 = theta0 * theta1 + theta0 * theta2 + theta1 * theta2;
    let e3 = theta0 * theta1 * theta2;
    if !cubic_annihilation(g, -e1, e2, -e3)? {
        return Ok(None);
    }
    Ok(SpectrumSpec::from_trace(g.order(), theta0, theta1, theta2)
        .filter(|sp| sp.second_moment() == 2 * g.edge_count() as i128))
}

/// Whether `A³ + c2·A² + c1·A + c0·I = O`.
pub fn cubic_annihilation(g: &Graph, c2: i64, c1: i64, c0: i64) -> Result<bool> {
    let a = IntMatrix::adjacency(g);
    let a2 = IntMatrix::adjacency_squared(g);
    let a3 = a2.times_adjacency(g)?;
    Ok(IntMatrix::combine(&[(&a3, 1), (&a2, c2), (&a, c1)], c0)?.is_zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SrgParams {
    pub v: usize,
    pub k: usize,
    pub a: usize,
    pub c: usize,
}

impl SrgParams {
    /// Restricted eigenvalues `e₁ > e₂` when they are integers.
    pub fn restricted_eigenvalues(&self) -> Option<(i64, i64)> {
        let (k, a, c) = (self.k as i64, self.a as i64, self.c as i64);
        let s = a - c;
        let root = exact_sqrt((s * s + 4 * (k - c)) as i128)? as i64;
        ((s + root) % 2 == 0).then(|| ((s + root) / 2, (s - root) / 2))
    }

    pub fn spectrum(&self) -> Option<SpectrumSpec> {
        let (e1, e2) = self.restricted_eigenvalues()?;
        SpectrumSpec::from_trace(self.v, self.k as i64, e1, e2)
    }
}

/// SRG parameters when common-neighbour counts are constant on edges and on
/// non-edges. Complete and edgeless graphs have none.
pub fn srg_params(g: &Graph) -> Result<Option<SrgParams>> {
    let n = g.order();
    let k = g.degree(0);
    if (0..n).any(|u| g.degree(u) != k) {
        return invalid("graph is not regular");
    }
    let (mut a, mut c) = (None, None);
    for u in 0..n {
        for v in u + 1..n {
            let slot = if g.has_edge(u, v) { &mut a } else { &mut c };
            let cn = g.common_neighbors(u, v);
            match *slot {
                None => *slot = Some(cn),
                Some(prev) if prev != cn => return Ok(None),
                _ => {}
            }
        }
    }
    Ok(match (a, c) {
        (Some(a), Some(c)) => Some(SrgParams { v: n, k, a, c }),
        _ => None,
    })
}

/// An eigenvalue that is an integer or a quadratic surd `(t ± √d)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Eigenvalue {
    Int(i64),
    /// `(t + sign·√d)/2` with `d` positive and not a perfect square.
    Surd { t: i64, sign: i8, d: i64 },
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Eigenvalue::Int(x) => write!(f, "{x}"),
            Eigenvalue::Surd { t, sign, d } => {
                write!(f, "({t}{}sqrt({d}))/2", if sign > 0 { "+" } else { "-" })
            }
        }
    }
}

/// Eigenvalues of an integer 2×2 matrix, larger first.
pub fn eigenvalues_2x2(q: [[i64; 2]; 2]) -> [Eigenvalue; 2] {
    let t = q[0][0] + q[1][1];
    let disc = (q[0][0] - q[1][1]).pow(2) + 4 * q[0][1] * q[1][0];
    match exact_sqrt(disc as i128) {
        // t and √disc share parity since t² − disc = 4·det.
        Some(r) => [Eigenvalue::Int((t + r as i64) / 2), Eigenvalue::Int((t - r as i64) / 2)],
        None => [Eigenvalue::Surd { t, sign: 1, d: disc }, Eigenvalue::Surd { t, sign: -1, d: disc }],
    }
}

/// A multiset of eigenvalues.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpectrumMultiset(BTreeMap<Eigenvalue, usize>);

impl SpectrumMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, e: Eigenvalue, mult: usize) {
        if mult > 0 {
            *self.0.entry(e).or_insert(0) += mult;
        }
    }

    pub fn remove_one(&mut self, e: Eigenvalue) -> Result<()> {
        match self.0.get_mut(&e) {
            Some(m) => {
                *m -= 1;
                if *m == 0 {
                    self.0.remove(&e);
                }
                Ok(())
            }
            None => invalid(format!("eigenvalue {e} missing from spectrum")),
        }
    }

    pub fn multiplicity(&self, e: Eigenvalue) -> usize {
        self.0.get(&e).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Eigenvalue, &usize)> {
        self.0.iter()
    }
}

impl fmt::Display for SpectrumMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().rev().map(|(e, m)| format!("[{e}]^{m}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn quotient_2x2(g: &Graph, sigma: &VertexPartition) -> Result<[[i64; 2]; 2]> {
    if sigma.cells().len() != 2 {
        return invalid("switching partition must have two cells");
    }
    let q = is_equitable(g, sigma)?
        .ok_or_else(|| Error::InvalidArgument("partition is not equitable".into()))?;
    Ok([[q.entries[0][0], q.entries[0][1]], [q.entries[1][0], q.entries[1][1]]])
}

/// Spectrum of the switched graph predicted from an equitable 2-partition:
/// `base ∪ spec(Q_σ(Γ^σ)) − spec(Q_σ(Γ))`.
pub fn switched_spectrum_formula(
    g: &Graph,
    sigma: &VertexPartition,
    base: &SpectrumMultiset,
) -> Result<SpectrumMultiset> {
    let before = quotient_2x2(g, sigma)?;
    let after = quotient_2x2(&g.switch(sigma)?, sigma)?;
    let mut out = base.clone();
    for e in eigenvalues_2x2(before) {
        out.remove_one(e)?;
    }
    for e in eigenvalues_2x2(after) {
        out.add(e, 1);
    }
    Ok(out)
}

/// Outcome of the biregular necessary conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiregReport {
    /// (i) all eigenvalues are integers.
    pub integral: bool,
    pub quotient: Option<[[i64; 2]; 2]>,
    /// The quotient eigenvalue other than `θ₀`, when it is one of `θ₁, θ₂`.
    pub theta: Option<i64>,
    /// (ii) the quotient has eigenvalues `θ₀` and `θ ∈ {θ₁, θ₂}`.
    pub quotient_ok: bool,
    /// (iii) `√((k₁+p)(k₂+p)) = −θ(θ′+1)`.
    pub sqrt_ok: bool,
    /// (iv) a cell inducing no edges forces `θ = θ₂`.
    pub empty_cell_ok: bool,
}

impl BiregReport {
    pub fn passed(&self) -> bool {
        self.integral && self.quotient_ok && self.sqrt_ok && self.empty_cell_ok
    }
}

pub fn bireg_conditions_check(g: &Graph, cert: &ThreeEvCertificate) -> Result<BiregReport> {
    if g.is_bipartite() {
        return invalid("graph is bipartite");
    }
    let pi = valency_partition(g);
    if pi.cells().len() != 2 {
        return invalid("graph is not biregular");
    }
    let mut report = BiregReport {
        integral: cert.spec.is_some(),
        quotient: None,
        theta: None,
        quotient_ok: false,
        sqrt_ok: false,
        empty_cell_ok: false,
    };
    let Some(spec) = cert.spec else { return Ok(report) };
    report.quotient = quotient_2x2(g, &pi).ok();
    let Some(q) = report.quotient else { return Ok(report) };
    let [hi, lo] = eigenvalues_2x2(q);
    let theta = match (hi, lo) {
        (Eigenvalue::Int(t0), Eigenvalue::Int(t))
            if t0 == spec.theta0 && (t == spec.theta1 || t == spec.theta2) =>
        {
            t
        }
        _ => return Ok(report),
    };
    report.theta = Some(theta);
    report.quotient_ok = true;
    let other = if theta == spec.theta1 { spec.theta2 } else { spec.theta1 };
    let k1 = g.degree(pi.cells()[0][0]) as i128;
    let k2 = g.degree(pi.cells()[1][0]) as i128;
    let p = spec.p() as i128;
    let rhs = -(theta as i128) * (other as i128 + 1);
    report.sqrt_ok = rhs >= 0 && (k1 + p) * (k2 + p) == rhs * rhs;
    let has_empty_cell = pi
        .cells()
        .iter()
        .any(|cell| cell.iter().all(|&u| cell.iter().all(|&w| !g.has_edge(u, w))));
    report.empty_cell_ok = !has_empty_cell || theta == spec.theta2;
    Ok(report)
}

/// Whether `√(k₁+p) = √(k₂+p) + √(k₃+p)`, checked by squaring twice.
pub fn triregular_cone_relation(k1: i64, k2: i64, k3: i64, p: i64) -> bool {
    let (a1, a2, a3) = (k1 + p, k2 + p, k3 + p);
    if a1 <= 0 || a2 <= 0 || a3 <= 0 {
        return false;
    }
    // a1 = a2 + a3 + 2√(a2·a3)
    let lhs = a1 - a2 - a3;
    lhs >= 0 && (lhs as i128).pow(2) == 4 * a2 as i128 * a3 as i128
}
