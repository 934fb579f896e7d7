//! Parametric quasi-symmetric design candidates, necessary conditions, the
//! converse checkers and the feasibility tables.
//!
//! Every class takes integer `(θ₁, θ₂)` and produces rational parameters;
//! a candidate exists only when all of them are integers. Arithmetic is
//! exact throughout (`i128` rationals, square roots by integer squaring).

use crate::designs::{
    all_k_subsets_design, block_spectrum_formula, builtin, intersection_profile, verify_2design,
    QsdParams,
};
use crate::error::{invalid, Result};
use crate::numtheory::{exact_sqrt, is_prime, is_square_mod, odd_prime_divisors};
use crate::spectral::SpectrumSpec;
use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;

type Q = Ratio<i128>;

fn q(x: i128) -> Q {
    Q::from_integer(x)
}

fn div(a: Q, b: Q) -> Option<Q> {
    (!b.is_zero()).then(|| a / b)
}

fn sqrt_q(x: Q) -> Option<Q> {
    if !x.is_integer() {
        return None;
    }
    exact_sqrt(x.to_integer()).map(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassTag {
    C1,
    C2,
    C3a,
    C3b,
    C4a,
    C4b,
}

impl ClassTag {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "1" => ClassTag::C1,
            "2" => ClassTag::C2,
            "3a" => ClassTag::C3a,
            "3b" => ClassTag::C3b,
            "4a" => ClassTag::C4a,
            "4b" => ClassTag::C4b,
            _ => return None,
        })
    }

    /// Classes 1 and 2 come from total graphs (empty point cell); the rest
    /// from whole graphs (complete point cell).
    pub fn complete_points(self) -> bool {
        !matches!(self, ClassTag::C1 | ClassTag::C2)
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassTag::C1 => "1",
            ClassTag::C2 => "2",
            ClassTag::C3a => "3a",
            ClassTag::C3b => "3b",
            ClassTag::C4a => "4a",
            ClassTag::C4b => "4b",
        })
    }
}

/// Rational parameters before the integrality check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct RawParams {
    v: Q,
    k: Q,
    lambda: Q,
    b: Q,
    r: Q,
    x: Q,
    y: Q,
    theta0: Q,
}

/// An integral parameter set for one class and one `(θ₁, θ₂)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QsdCandidate {
    pub params: QsdParams,
    pub theta0: i64,
    pub theta1: i64,
    pub theta2: i64,
    /// Eigenvalues of the `x`-block graph, `e₁ ≥ e₂` after sorting.
    pub e0: Ratio<i64>,
    pub e1: Ratio<i64>,
    pub e2: Ratio<i64>,
    pub class: ClassTag,
    /// Whether the point cell is complete (whole graph) or empty (total graph).
    pub complete_points: bool,
}

/// Why a candidate is rejected; filters run in the listed order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reason {
    Integrality,
    Positivity,
    DesignIdentities,
    Fisher,
    RepeatedBlocks,
    Regular,
    Chn,
    AbsoluteBound,
    C1,
    C2(i64),
    ExcludedFamily,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::Integrality => f.write_str("integrality"),
            Reason::Positivity => f.write_str("positivity"),
            Reason::DesignIdentities => f.write_str("design-identities"),
            Reason::Fisher => f.write_str("fisher"),
            Reason::RepeatedBlocks => f.write_str("repeated-blocks"),
            Reason::Regular => f.write_str("regular"),
            Reason::Chn => f.write_str("chn"),
            Reason::AbsoluteBound => f.write_str("absolute-bound"),
            Reason::C1 => f.write_str("C1"),
            Reason::C2(p) => write!(f, "C2 (p={p})"),
            Reason::ExcludedFamily => f.write_str("excluded-family"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeasibilityVerdict {
    Pass,
    Fail(Reason),
}

/// The left side of the Calderbank–Cameron–Haemers–Neumaier inequality.
pub fn chn_value(p: &QsdParams) -> i128 {
    let d = p.base;
    let (v, k, x, y) = (d.v as i128, d.k as i128, p.x as i128, p.y as i128);
    (v - 1) * (v - 2) * (k - x) * (k - y) - k * (v - k) * (v - 2) * (2 * k - x - y)
        + k * (v - k) * (k * (v - k) - 1)
}

/// Nonnegativity of [`chn_value`]; zero means the design is a 3-design.
pub fn chn_check(p: &QsdParams) -> bool {
    chn_value(p) >= 0
}

/// `b ≤ v(v−1)/2`; equality means a 4-design.
pub fn absolute_bound(v: i64, b: i64) -> bool {
    (b as i128) * 2 <= (v as i128) * (v as i128 - 1)
}

pub fn absolute_bound_tight(v: i64, b: i64) -> bool {
    (b as i128) * 2 == (v as i128) * (v as i128 - 1)
}

/// Condition C1 (vacuous unless `x ≡ y (mod 2)` and `r ≢ λ (mod 4)`).
pub fn calderbank_c1(p: &QsdParams) -> FeasibilityVerdict {
    let d = p.base;
    if (p.x - p.y) % 2 != 0 || (d.r - d.lambda) % 4 == 0 {
        return FeasibilityVerdict::Pass;
    }
    let v8 = d.v.rem_euclid(8);
    let ok = (v8 == 1 || v8 == 7)
        && if p.x % 2 == 0 { d.k % 4 == 0 } else { (d.k - d.v) % 4 == 0 };
    if ok { FeasibilityVerdict::Pass } else { FeasibilityVerdict::Fail(Reason::C1) }
}

/// Condition C2 for an odd prime `pr` (vacuous unless `x ≡ y (mod pr)` and
/// `r ≢ λ (mod pr²)`).
pub fn calderbank_c2(p: &QsdParams, pr: i64) -> Result<FeasibilityVerdict> {
    if pr % 2 == 0 || pr < 3 || !is_prime(pr as u64) {
        return invalid(format!("{pr} is not an odd prime"));
    }
    let d = p.base;
    let (v, k, l, r, x) = (d.v as i128, d.k as i128, d.lambda as i128, d.r as i128, p.x as i128);
    let pp = pr as i128;
    if (p.x - p.y) as i128 % pp != 0 || (r - l) % (pp * pp) == 0 {
        return Ok(FeasibilityVerdict::Pass);
    }
    let m = |a: i128| a.rem_euclid(pp);
    let sq = |a: i128| is_square_mod(a, pp);
    let sign = |e: i128| if e % 2 == 0 { 1 } else { -1 };
    let even = v % 2 == 0;
    let ok = (even && m(v) == 0 && m(k) == 0 && m(x) == 0 && sq(sign(v / 2)))
        || (!even && m(v) == m(k) && m(k) == m(x) && m(x) != 0 && sq(x * sign((v - 1) / 2)))
        || (m(l) == 0
            && m(r) == 0
            && ((even && m(v) == m(k) && m(k) == m(x) && m(x) != 0)
                || (even && m(k) == m(x) && m(x) != 0 && !sq(v * x))
                || (v.rem_euclid(2 * pp) == 1 && r % (pp * pp) == 0 && m(k) == m(x) && m(x) != 0)
                || (v.rem_euclid(2 * pp) == pp && m(k) == 0 && m(x) == 0)
                || (!even && m(k) == 0 && m(x) == 0 && !sq(v))
                || (!even && m(k) == 0 && m(x) == 0 && sq(v) && sq(sign((v - 1) / 2)))));
    Ok(if ok { FeasibilityVerdict::Pass } else { FeasibilityVerdict::Fail(Reason::C2(pr)) })
}

/// First failing Calderbank condition: C1, then C2 for each odd prime
/// dividing `x − y`, ascending.
pub fn calderbank_remark(p: &QsdParams) -> Option<Reason> {
    if let FeasibilityVerdict::Fail(r) = calderbank_c1(p) {
        return Some(r);
    }
    odd_prime_divisors((p.x - p.y) as i128).into_iter().find_map(|pr| {
        match calderbank_c2(p, pr as i64).expect("odd prime divisor") {
            FeasibilityVerdict::Fail(r) => Some(r),
            FeasibilityVerdict::Pass => None,
        }
    })
}

fn class1_raw(t1: i128, t2: i128) -> Option<RawParams> {
    let s = t2 + t1 + t1 * t2 - t2 * t2 * t1;
    Some(RawParams {
        v: div(q(t2 * s), q(t1 + 1))?,
        k: q(t2 * t2),
        lambda: q(t1 + 1),
        b: div(q((1 + t1 - t2 * t1) * s), q(t2 * (t1 + 1)))?,
        r: q(t1 * (1 - t2) + 1),
        x: q(-t2),
        y: q(0),
        theta0: q(t2 * (t1 * t2 - t1 - 1)),
    })
}

/// `f₂(w, z)` when its square root is rational.
pub fn f2(w: i128, z: i128) -> Option<Q> {
    let a = w * w + w + 1;
    let root = exact_sqrt(a * a - 4 * w * z * (w + 1))?;
    Some(Q::new(w * a - 2 * z * (w + 1) + w * root, 2))
}

fn class2_raw(t1: i128, t2: i128) -> Option<RawParams> {
    let theta0 = f2(t1, t2)?;
    let e0 = theta0 + q(t2);
    let y = (e0 - q(t1 * t1 * t1) + q(t1 * t2)) / q(t1);
    let x = y - q(t1);
    let lambda = -q(t2) * (x - q(1)) / q(t1);
    let r = lambda - q(t1 * t2);
    let k = y + q(t1 * t1);
    let v = div(-q(t2) * (theta0 - q(t1)), lambda)?;
    let b = r - k + e0 + q(1);
    Some(RawParams { v, k, lambda, b, r, x, y, theta0 })
}

pub fn g3(w: i128, z: i128) -> i128 {
    5 * (w * z + 1).pow(2) + 4 * z.pow(3) * (w + 1) + 4 * w * z * (w + 4 * z) + 4 * (z + 1) * (3 * z - 1)
}

/// `f₃(w, z)` when `g₃(w, z)` is a perfect square.
pub fn f3(w: i128, z: i128) -> Option<Q> {
    let root = exact_sqrt(g3(w, z))?;
    let num = w * z * (w + 2) * (z + 2) + 2 * z * z + 4 * z + 1 + (1 - w * z) * root;
    div(q(num), q(-2 * (z + 1) * (w + z + 2)))
}

/// Shared tail of classes 3a and 4b. `(a, c)` is `(θ₁, θ₂)` for 3a and
/// `(θ₂, θ₁)` for 4b: `a` is the restricted eigenvalue that is not `e`.
fn class34_tail(a: i128, c: i128, theta0: Q) -> Option<RawParams> {
    let e = q(a + c + 1);
    let p = a * c;
    // e₀ = −c(a+1)/(c+1) · (1 + c(1−ac)/(θ₀+ac))
    let e0 = div(q(-c * (a + 1)), q(c + 1))? * (q(1) + div(q(c * (1 - p)), theta0 + q(p))?);
    let v = theta0 + q(c) - e0 + q(1);
    let lambda = q(a + 1) * (q(1) + div(theta0 * e - q(a) * e0, theta0 - q(a))?);
    let y = -q(c) * (lambda - e - q(1)) / q(a);
    let x = y - q(c) - q(1);
    let k = y + q(c * (c + 1));
    let r = lambda - q((a + 1) * (c + 1));
    let b = (q(a) * (v - q(1)) + theta0) / q(-c);
    Some(RawParams { v, k, lambda, b, r, x, y, theta0 })
}

fn class3a_raw(t1: i128, t2: i128) -> Option<RawParams> {
    class34_tail(t1, t2, f3(t1, t2)?)
}

fn class4b_raw(t1: i128, t2: i128) -> Option<RawParams> {
    class34_tail(t2, t1, f3(t2, t1)?)
}

/// Coefficients `(C₃, C₂, C₁, C₀)` of `h(u, w, z)`.
pub fn h_coefficients(w: i128, z: i128) -> [i128; 4] {
    let c3 = (w + z) * (w + 1) * (z + 1);
    let c2 = w.pow(4) + w.pow(3) * (z + 2).pow(2) + w * w * (z * z + 7 * z + 5)
        - w * (2 * z.pow(3) + 3 * z * z - z - 1)
        - 2 * z * z * (z + 1);
    let c1 = (2 * w.pow(5) + z.pow(3)) * (z + 1) - w.pow(4) * (z.pow(3) + z * z - 4 * z - 6)
        - w.pow(3) * (z.pow(3) - 6 * z - 8)
        - 3 * w * w * (z.pow(3) + 3 * z * z + z + 1)
        + w * z * (z.pow(3) - 5 * z - 3);
    let c0 = w * (w + 1) * (w - z)
        * (w.pow(3) * (z + 1).pow(2) + 2 * w * w * (z + 1) + (w - z) * (z + 1) * (z + 2) - w * z);
    [c3, c2, c1, c0]
}

fn eval_big(coeffs: &[i128], u: i128) -> BigInt {
    let ub = BigInt::from(u);
    coeffs.iter().fold(BigInt::zero(), |acc, &c| acc * &ub + BigInt::from(c))
}

/// Positive integer roots of `Σ coeffs[i]·u^{d−i}` (highest degree first, `d ≤ 3`).
pub fn positive_integer_roots(coeffs: &[i128]) -> Vec<i128> {
    let first = coeffs.iter().position(|&c| c != 0);
    let Some(first) = first else { return Vec::new() };
    let c = &coeffs[first..];
    let deg = c.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    // Cauchy bound on root size.
    let lead = c[0].unsigned_abs();
    let bound = 1 + c[1..].iter().map(|x| x.unsigned_abs() / lead + 1).max().unwrap_or(0);
    let bound = bound.min(i128::MAX as u128 / 4) as i128;
    // Critical points of the polynomial split [1, bound] into monotone runs.
    let crit: Vec<f64> = match deg {
        1 => vec![],
        2 => vec![-(c[1] as f64) / (2.0 * c[0] as f64)],
        _ => {
            let (a, b, cc) = (3.0 * c[0] as f64, 2.0 * c[1] as f64, c[2] as f64);
            let disc = b * b - 4.0 * a * cc;
            if disc < 0.0 {
                vec![]
            } else {
                let s = disc.sqrt();
                vec![(-b - s) / (2.0 * a), (-b + s) / (2.0 * a)]
            }
        }
    };
    let mut cuts: Vec<i128> = vec![1, bound];
    let mut window: Vec<i128> = Vec::new();
    for x in crit {
        if x.is_finite() && x > -2.0 && x < bound as f64 + 2.0 {
            let f = x.floor() as i128;
            cuts.push((f - 2).clamp(1, bound));
            cuts.push((f + 3).clamp(1, bound));
            window.extend((f - 2..=f + 3).filter(|&u| u >= 1 && u <= bound));
        }
    }
    cuts.sort_unstable();
    cuts.dedup();
    let mut roots: Vec<i128> = window.into_iter().filter(|&u| eval_big(c, u).is_zero()).collect();
    for pair in cuts.windows(2) {
        let (mut lo, mut hi) = (pair[0], pair[1]);
        let (flo, fhi) = (eval_big(c, lo), eval_big(c, hi));
        for (u, f) in [(lo, &flo), (hi, &fhi)] {
            if f.is_zero() {
                roots.push(u);
            }
        }
        if flo.is_zero() || fhi.is_zero() || flo.sign() == fhi.sign() {
            continue;
        }
        let neg_lo = flo.is_negative();
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            let fm = eval_big(c, mid);
            if fm.is_zero() {
                roots.push(mid);
                break;
            }
            if fm.is_negative() == neg_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    roots.sort_unstable();
    roots.dedup();
    roots
}

/// Classes 3b and 4a: `(a, c)` as in [`class34_tail`]; `θ₀` is a positive
/// integer root of `h(u, a, c)`. The parameters follow from the displayed
/// expressions for `e₀`, `v`, `b`, `k`, `r`, `λ`, `x` and the identity
/// `vr = bk`, which fixes `y`.
fn class3b4a_raw(a: i128, c: i128, theta0: i128) -> Option<RawParams> {
    let t0 = q(theta0);
    let e = q(a + c + 1);
    let num = q(c + 1) * (t0 * (q(a) * e - q(1)) + q(a * a * (c + 1)));
    let den = t0 * (q(a * c) + e) + q(a.pow(3) * (c + 1) + 2 * a * (a + 1) - c * (c + 2));
    let e0 = div(num, den)?;
    let v = t0 + q(a) - e0 + q(1);
    let b = div(q(a) * v - t0 + q(c), q(c))?;
    // λ = c + 1 − a(y − e − 1)/c = α + βy
    let beta = q(-a) / q(c);
    let alpha = q(c + 1) + q(a) * (e + q(1)) / q(c);
    let rr = q((a + 1) * (c + 1));
    let kk = q(c * (c + 1));
    // v(α + βy − rr) = b(y + kk)
    let y = div(b * kk - v * (alpha - rr), v * beta - b)?;
    let lambda = alpha + beta * y;
    let x = y - q(c) - q(1);
    Some(RawParams { v, k: y + kk, lambda, b, r: lambda - rr, x, y, theta0: t0 })
}

fn to_candidate(class: ClassTag, t1: i64, t2: i64, raw: RawParams) -> std::result::Result<QsdCandidate, Reason> {
    let all = [raw.v, raw.k, raw.lambda, raw.b, raw.r, raw.x, raw.y, raw.theta0];
    if all.iter().any(|x| !x.is_integer()) {
        return Err(Reason::Integrality);
    }
    let ints: Vec<i64> = all
        .iter()
        .map(|x| x.to_integer().to_i64())
        .collect::<Option<_>>()
        .ok_or(Reason::Integrality)?;
    let [v, k, lambda, b, r, x, y, theta0] = ints[..] else { unreachable!() };
    if v <= 0 || k <= 0 || lambda <= 0 || b <= 0 || r <= 0 || x < 0 || y < 0 || x == y {
        return Err(Reason::Positivity);
    }
    let params = QsdParams::new(v, k, lambda, b, r, x, y);
    let spec = block_spectrum_formula(&params).map_err(|_| Reason::Positivity)?;
    let (e1, e2) = if spec.e1 >= spec.e2 { (spec.e1, spec.e2) } else { (spec.e2, spec.e1) };
    Ok(QsdCandidate {
        params,
        theta0,
        theta1: t1,
        theta2: t2,
        e0: spec.e0,
        e1,
        e2,
        class,
        complete_points: class.complete_points(),
    })
}

fn candidate(class: ClassTag, t1: i64, t2: i64) -> std::result::Result<QsdCandidate, Reason> {
    let (a, b) = (t1 as i128, t2 as i128);
    let raw = match class {
        ClassTag::C1 => class1_raw(a, b),
        ClassTag::C2 => class2_raw(a, b),
        ClassTag::C3a => class3a_raw(a, b),
        ClassTag::C4b => class4b_raw(a, b),
        ClassTag::C3b | ClassTag::C4a => {
            return solve_cubic_class(class, t1, t2).ok_or(Reason::Integrality);
        }
    };
    to_candidate(class, t1, t2, raw.ok_or(Reason::Integrality)?)
}

fn solve_cubic_class(class: ClassTag, t1: i64, t2: i64) -> Option<QsdCandidate> {
    let (a, c) = match class {
        ClassTag::C3b => (t1 as i128, t2 as i128),
        _ => (t2 as i128, t1 as i128),
    };
    positive_integer_roots(&h_coefficients(a, c))
        .into_iter()
        .filter(|&u| u > t1 as i128)
        .find_map(|u| to_candidate(class, t1, t2, class3b4a_raw(a, c, u)?).ok())
}

/// Class 1, for `θ₁ ≥ −θ₂ ≥ 2`.
pub fn class1_params(t1: i64, t2: i64) -> Option<QsdCandidate> {
    (t1 >= 1 && t2 <= -2 && t1 >= -t2).then(|| candidate(ClassTag::C1, t1, t2).ok()).flatten()
}

/// Class 2, for `1 ≤ θ₁ ≤ −θ₂ − 2`.
pub fn class2_params(t1: i64, t2: i64) -> Option<QsdCandidate> {
    (t1 >= 1 && t2 <= -2 && t1 <= -t2 - 2).then(|| candidate(ClassTag::C2, t1, t2).ok()).flatten()
}

/// Class 3a, for `θ₁ ≥ 1`, `−θ₁ − 1 ≤ θ₂ ≤ −2`.
pub fn class3a_params(t1: i64, t2: i64) -> Option<QsdCandidate> {
    (t1 >= 1 && t2 <= -2 && t2 >= -t1 - 1).then(|| candidate(ClassTag::C3a, t1, t2).ok()).flatten()
}

/// Class 3b: `θ₀` a positive integer root of `h(u, θ₁, θ₂)`.
pub fn class3b_solve(t1: i64, t2: i64) -> Option<QsdCandidate> {
    (t1 >= 1 && t2 <= -2).then(|| solve_cubic_class(ClassTag::C3b, t1, t2)).flatten()
}

/// Class 4a: `θ₀` a positive integer root of `h(u, θ₂, θ₁)`.
pub fn class4a_solve(t1: i64, t2: i64) -> Option<QsdCandidate> {
    (t1 >= 1 && t2 <= -2).then(|| solve_cubic_class(ClassTag::C4a, t1, t2)).flatten()
}

/// Class 4b, for `1 ≤ θ₁ ≤ −θ₂ − 3`.
pub fn class4b_params(t1: i64, t2: i64) -> Option<QsdCandidate> {
    (t1 >= 1 && t2 <= -2 && t1 <= -t2 - 3).then(|| candidate(ClassTag::C4b, t1, t2).ok()).flatten()
}

/// Whether `(θ₁, θ₂)` lies on one of the infinite families left out of the tables.
pub fn excluded_family(class: ClassTag, t1: i64, t2: i64) -> bool {
    let (a, b) = (t1 as i128, t2 as i128);
    match class {
        ClassTag::C1 => a == -b || a + 1 == b * (b - 1),
        ClassTag::C2 => b == -a * a * (a * a + 1) || b == -(a.pow(4) + 2 * a.pow(3) + a * a + a),
        _ => false,
    }
}

/// Filters in order: design identities, strict Fisher, repeated blocks,
/// nonregularity, CHN, absolute bound, then C1 and C2.
pub fn verdict(c: &QsdCandidate) -> FeasibilityVerdict {
    use FeasibilityVerdict::Fail;
    let p = &c.params;
    let d = p.base;
    if excluded_family(c.class, c.theta1, c.theta2) {
        return Fail(Reason::ExcludedFamily);
    }
    if d.v * d.r != d.b * d.k || d.lambda * (d.v - 1) != d.r * (d.k - 1) {
        return Fail(Reason::DesignIdentities);
    }
    if d.b <= d.v {
        return Fail(Reason::Fisher);
    }
    if p.x == d.k || p.y == d.k {
        return Fail(Reason::RepeatedBlocks);
    }
    let point_degree = if c.complete_points { d.v - 1 + d.r } else { d.r };
    if Ratio::from(point_degree) == Ratio::from(d.k) + c.e0 {
        return Fail(Reason::Regular);
    }
    if !chn_check(p) {
        return Fail(Reason::Chn);
    }
    if !absolute_bound(d.v, d.b) {
        return Fail(Reason::AbsoluteBound);
    }
    match calderbank_remark(p) {
        Some(r) => Fail(r),
        None => FeasibilityVerdict::Pass,
    }
}

/// A table line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub candidate: QsdCandidate,
    pub exists: char,
    pub remark: String,
}

pub const CSV_HEADER: &str = "v,k,lambda,b,r,x,y,theta0,theta1,theta2,exists,remark";

impl TableRow {
    pub fn csv(&self) -> String {
        let c = &self.candidate;
        let d = c.params.base;
        let (lo, hi) = (c.params.x.min(c.params.y), c.params.x.max(c.params.y));
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            d.v, d.k, d.lambda, d.b, d.r, lo, hi, c.theta0, c.theta1, c.theta2, self.exists, self.remark
        )
    }
}

/// Built-in designs that can be constructed in-process.
const CONSTRUCTIBLE: &[&str] = &["all-6-of-8", "sqs8", "fano-complement"];

/// The built-in design realising `p`, if any.
pub fn known_construction(p: &QsdParams) -> Option<&'static str> {
    CONSTRUCTIBLE.iter().copied().find(|name| {
        let Ok(m) = builtin(name) else { return false };
        let prof: Vec<i64> = intersection_profile(&m).iter().map(|&x| x as i64).collect();
        let mut want = vec![p.x.min(p.y), p.x.max(p.y)];
        want.dedup();
        verify_2design(&m) == Some(p.base) && prof == want
    })
}

fn row_for(c: QsdCandidate) -> Option<TableRow> {
    match verdict(&c) {
        FeasibilityVerdict::Pass => Some(match known_construction(&c.params) {
            Some(name) => TableRow { candidate: c, exists: 'Y', remark: format!("builtin:{name}") },
            None => TableRow { candidate: c, exists: '?', remark: String::new() },
        }),
        FeasibilityVerdict::Fail(r @ (Reason::C1 | Reason::C2(_))) => {
            Some(TableRow { candidate: c, exists: 'N', remark: r.to_string() })
        }
        FeasibilityVerdict::Fail(_) => None,
    }
}

/// The `(θ₁, θ₂)` grid for a class. `limit` bounds `θ₁` from above for
/// classes 1 and 3a, `θ₂` from below for 2 and 4b, and both for 3b and 4a.
/// Points come out in table order.
pub fn grid(class: ClassTag, limit: i64) -> Vec<(i64, i64)> {
    let mut pts = Vec::new();
    match class {
        ClassTag::C1 => {
            for t1 in 1..=limit {
                pts.extend((-t1..=-2).rev().map(|t2| (t1, t2)));
            }
        }
        ClassTag::C3a => {
            for t1 in 1..=limit {
                pts.extend((-t1 - 1..=-2).rev().map(|t2| (t1, t2)));
            }
        }
        ClassTag::C2 => {
            for t2 in (-limit..=-2).rev() {
                pts.extend((1..=-t2 - 2).map(|t1| (t1, t2)));
            }
        }
        ClassTag::C4b => {
            for t2 in (-limit..=-2).rev() {
                pts.extend((1..=-t2 - 3).map(|t1| (t1, t2)));
            }
        }
        ClassTag::C3b | ClassTag::C4a => {
            for t1 in 1..=limit {
                pts.extend((-limit..=-2).rev().map(|t2| (t1, t2)));
            }
        }
    }
    pts
}

/// Rows of one class over [`grid`], in table order.
pub fn search(class: ClassTag, limit: i64) -> Vec<TableRow> {
    grid(class, limit)
        .into_iter()
        .filter_map(|(t1, t2)| candidate(class, t1, t2).ok())
        .filter_map(row_for)
        .collect()
}

/// Bound used for the four feasibility tables.
pub const TABLE_LIMIT: i64 = 100;

/// The four feasibility tables, in order: classes 1, 2, 3a, 4b.
pub fn enumerate_tables(limit: i64) -> [(ClassTag, Vec<TableRow>); 4] {
    [ClassTag::C1, ClassTag::C2, ClassTag::C3a, ClassTag::C4b].map(|c| (c, search(c, limit)))
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in rows {
        out += &r.csv();
        out.push('\n');
    }
    out
}

/// `(v, k) = (λ³ − λ + 1, λ²)`.
pub fn rank8_params(lambda: i64) -> Result<(i64, i64)> {
    if lambda < 2 {
        return invalid("λ must be at least 2");
    }
    Ok((lambda.pow(3) - lambda + 1, lambda * lambda))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Total graph (empty point cell).
    I,
    /// Whole graph (complete point cell).
    Ii,
}

/// Named conditions of a converse check and the predicted graph data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConverseReport {
    pub conditions: Vec<(&'static str, bool)>,
    pub e: Option<(i64, i64, i64)>,
    pub theta0: Option<i64>,
    pub spectrum: Option<SpectrumSpec>,
    /// Predicted degrees, largest first, with counts.
    pub degrees: Vec<(i64, i64)>,
    /// Nonregularity (rank 9) or triregularity (rank 14) flag.
    pub structure_flag: bool,
}

impl ConverseReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.1)
    }

    pub fn first_failure(&self) -> Option<&'static str> {
        self.conditions.iter().find(|c| !c.1).map(|c| c.0)
    }
}

struct Setup {
    v: Q,
    k: Q,
    l: Q,
    b: Q,
    r: Q,
    x: Q,
    y: Q,
    t1: Q,
    t2: Q,
    e0: Q,
}

/// Block-graph eigenvalues, the `(x, y)` binding, and the λ/ratio
/// conditions shared by both converse checks.
fn converse_common(
    p: &QsdParams,
    t1: i64,
    t2: i64,
    variant: Variant,
    conds: &mut Vec<(&'static str, bool)>,
) -> Result<Option<(Setup, (i64, i64, i64))>> {
    if p.x == p.y {
        return invalid("intersection numbers must differ");
    }
    if t1 < 1 || t2 > -2 {
        return invalid("need θ₁ ≥ 1 and θ₂ ≤ −2");
    }
    let d = p.base;
    let spec = block_spectrum_formula(p)?;
    let ints = [spec.e0, spec.e1, spec.e2];
    let integral = ints.iter().all(|e| e.is_integer());
    conds.push(("block eigenvalues integral", integral));
    if !integral {
        return Ok(None);
    }
    let e0 = spec.e0.to_integer();
    let (e1, e2) = {
        let (a, b) = (spec.e1.to_integer(), spec.e2.to_integer());
        (a.max(b), a.min(b))
    };
    let s = Setup {
        v: q(d.v as i128),
        k: q(d.k as i128),
        l: q(d.lambda as i128),
        b: q(d.b as i128),
        r: q(d.r as i128),
        x: q(p.x as i128),
        y: q(p.y as i128),
        t1: q(t1 as i128),
        t2: q(t2 as i128),
        e0: q(e0 as i128),
    };
    let (e1q, e2q) = (q(e1 as i128), q(e2 as i128));
    let one = q(1);
    conds.push((
        "x binding",
        s.x == s.k + (s.t1 + one) * (s.t2 + one) - (e1q + one) * (e2q + one),
    ));
    conds.push(("y binding", s.y == s.k + s.t1 * s.t2 - e1q * e2q));
    let ratio = (s.r - s.l + s.y - s.k) / (s.x - s.y);
    match variant {
        Variant::I => {
            conds.push(("lambda = r + t1 t2", s.l == s.r + s.t1 * s.t2));
            conds.push(("ratio = t1 + t2", ratio == s.t1 + s.t2));
        }
        Variant::Ii => {
            conds.push(("lambda = r + (t1+1)(t2+1)", s.l == s.r + (s.t1 + one) * (s.t2 + one)));
            conds.push(("ratio = t1 + t2 + 1", ratio == s.t1 + s.t2 + one));
        }
    }
    Ok(Some((s, (e0, e1, e2))))
}

fn sqrt_condition(lhs: Q, radicand: Q) -> bool {
    !lhs.is_negative() && sqrt_q(radicand) == Some(lhs)
}

/// Conditions under which the total (i) or whole (ii) graph of a QSD has
/// three eigenvalues, with the predicted `θ₀`, spectrum and degrees.
pub fn converse9_check(p: &QsdParams, t1: i64, t2: i64, variant: Variant) -> Result<ConverseReport> {
    let mut conds = Vec::new();
    let mut report = ConverseReport {
        conditions: Vec::new(),
        e: None,
        theta0: None,
        spectrum: None,
        degrees: Vec::new(),
        structure_flag: false,
    };
    let Some((s, e)) = converse_common(p, t1, t2, variant, &mut conds)? else {
        report.conditions = conds;
        return Ok(report);
    };
    report.e = Some(e);
    let p_ = s.t1 * s.t2;
    let m = (s.l * s.k - s.y * s.r) / (s.x - s.y);
    let one = q(1);
    let theta0 = match variant {
        Variant::I => {
            conds.push(("sqrt(lambda (k + e0 + t1 t2))", sqrt_condition(m, s.l * (s.k + s.e0 + p_))));
            Some(s.e0 - s.t2)
        }
        Variant::Ii => {
            conds.push((
                "sqrt((v-1+r+t1 t2)(k + e0 + t1 t2))",
                sqrt_condition(s.k + m, (s.v - one + s.r + p_) * (s.k + s.e0 + p_)),
            ));
            let disc = (s.v - one - s.e0) * (s.v - one - s.e0) + q(4) * s.r * s.k;
            sqrt_q(disc).map(|root| (s.v - one + s.e0 + root) / q(2))
        }
    };
    let theta0 = theta0.filter(|t| t.is_integer()).map(|t| t.to_integer() as i64);
    conds.push(("theta0 integral", theta0.is_some()));
    let d = p.base;
    let n = (d.v + d.b) as usize;
    report.theta0 = theta0;
    report.spectrum = theta0.and_then(|t0| SpectrumSpec::from_trace(n, t0, t1, t2));
    conds.push(("multiplicities integral", report.spectrum.is_some()));
    let point = match variant {
        Variant::I => d.r,
        Variant::Ii => d.v - 1 + d.r,
    };
    let block = d.k + e.0;
    report.structure_flag = point != block;
    report.degrees = sorted_degrees(&[(point, d.v), (block, d.b)]);
    report.conditions = conds;
    Ok(report)
}

fn sorted_degrees(parts: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut out: Vec<(i64, i64)> = Vec::new();
    for &(deg, cnt) in parts {
        match out.iter_mut().find(|x| x.0 == deg) {
            Some(x) => x.1 += cnt,
            None => out.push((deg, cnt)),
        }
    }
    out.sort_by(|a, b| b.0.cmp(&a.0));
    out
}

/// Largest eigenvalue of an integer 3×3 matrix when it is an integer.
pub fn largest_integer_eigenvalue_3x3(m: [[i128; 3]; 3]) -> Option<i128> {
    let tr = m[0][0] + m[1][1] + m[2][2];
    let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    // det(uI − M) = u³ − tr·u² + minors·u − det
    let charpoly = [1, -tr, minors, -det];
    positive_integer_roots(&charpoly).into_iter().rev().find(|&root| {
        // Deflate: u³ + a u² + b u + c = (u − root)(u² + α u + β).
        let alpha = -tr + root;
        let beta = minors + root * alpha;
        let disc = alpha * alpha - 4 * beta;
        let below = |u: i128| u * u + alpha * u + beta;
        disc < 0 || (below(root) > 0 && 2 * root > -alpha)
    })
}

/// Conditions under which the cone over the total (i) or whole (ii) graph
/// of a QSD has three eigenvalues and three degrees.
pub fn converse14_check(p: &QsdParams, t1: i64, t2: i64, variant: Variant) -> Result<ConverseReport> {
    let mut conds = Vec::new();
    let mut report = ConverseReport {
        conditions: Vec::new(),
        e: None,
        theta0: None,
        spectrum: None,
        degrees: Vec::new(),
        structure_flag: false,
    };
    let Some((s, e)) = converse_common(p, t1, t2, variant, &mut conds)? else {
        report.conditions = conds;
        return Ok(report);
    };
    report.e = Some(e);
    let pp = s.t1 * s.t2;
    let sum = s.t1 + s.t2;
    let one = q(1);
    let m = (s.l * s.k - s.y * s.r) / (s.x - s.y);
    let apex = s.v + s.b + pp;
    let blocks = one + s.k + s.e0 + pp;
    conds.push(("sqrt((v+b+p)(1+k+e0+p))", sqrt_condition(s.k + s.e0 - sum, apex * blocks)));
    let (points, point_row) = match variant {
        Variant::I => {
            conds.push(("sqrt((v+b+p)(1+lambda))", sqrt_condition(s.r - sum, apex * (one + s.l))));
            conds.push(("sqrt((1+lambda)(1+k+e0+p))", sqrt_condition(one + s.k + m, (one + s.l) * blocks)));
            (one + s.r, 0)
        }
        Variant::Ii => {
            let pts = s.v + s.r + pp;
            conds.push(("sqrt((v+b+p)(v+r+p))", sqrt_condition(s.v - one + s.r - sum, apex * pts)));
            conds.push(("sqrt((v+r+p)(1+k+e0+p))", sqrt_condition(one + s.k + m, pts * blocks)));
            (s.v + s.r, p.base.v as i128 - 1)
        }
    };
    let d = p.base;
    let quotient = [
        [0, d.v as i128, d.b as i128],
        [1, point_row, d.r as i128],
        [1, d.k as i128, e.0 as i128],
    ];
    report.theta0 = largest_integer_eigenvalue_3x3(quotient).and_then(|t| t.to_i64());
    conds.push(("theta0 integral", report.theta0.is_some()));
    let n = (1 + d.v + d.b) as usize;
    report.spectrum = report.theta0.and_then(|t0| SpectrumSpec::from_trace(n, t0, t1, t2));
    conds.push(("multiplicities integral", report.spectrum.is_some()));
    let apex_deg = d.v + d.b;
    let point_deg = points.to_integer() as i64;
    let block_deg = 1 + d.k + e.0;
    report.structure_flag =
        apex_deg != point_deg && apex_deg != block_deg && point_deg != block_deg;
    report.degrees = sorted_degrees(&[(apex_deg, 1), (point_deg, d.v), (block_deg, d.b)]);
    report.conditions = conds;
    Ok(report)
}

/// Design of the class-3a point `(5, −2)`, which is constructible.
pub fn six_of_eight() -> Result<crate::designs::IncidenceStructure> {
    all_k_subsets_design(8, 6)
}
