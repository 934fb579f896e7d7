//! Finite fields `GF(p^e)` with elements encoded as integers base `p`.
//!
//! Element `a = Σ aᵢ pⁱ` stands for the polynomial `Σ aᵢ xⁱ` modulo the
//! lexicographically smallest monic irreducible of degree `e`, where
//! candidates are ordered by the base-`p` encoding of their lower
//! coefficients.

use crate::error::{invalid, Result};
use crate::numtheory::is_prime;

/// Fields up to this order get precomputed addition and multiplication tables.
const TABLE_LIMIT: u64 = 1024;
/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 24;

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u64,
    e: u32,
    q: u64,
    /// Coefficients of the modulus, constant term first, leading 1 included.
    modulus: Vec<u64>,
    tables: Option<(Vec<u32>, Vec<u32>)>,
}

type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Remainder of `a` modulo monic `m` over `F_p`.
fn poly_rem(mut a: Poly, m: &[u64], p: u64) -> Poly {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                a[shift + i] = (a[shift + i] + (p - lead) * c) % p;
            }
        }
        a.pop();
    }
    trim(a)
}

fn decode(mut x: u64, p: u64, len: usize) -> Poly {
    (0..len)
        .map(|_| {
            let c = x % p;
            x /= p;
            c
        })
        .collect()
}

fn encode(a: &[u64], p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn is_irreducible(m: &[u64], p: u64) -> bool {
    let e = m.len() - 1;
    for d in 1..=e / 2 {
        for low in 0..p.pow(d as u32) {
            let mut f = decode(low, p, d);
            f.push(1);
            if poly_rem(m.to_vec(), &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        if !(1..=8).contains(&e) {
            return invalid("extension degree must be in 1..=8");
        }
        let q = match p.checked_pow(e) {
            Some(q) if q <= MAX_ORDER => q,
            _ => return invalid(format!("field order {p}^{e} is too large")),
        };
        let modulus = (0..q)
            .map(|low| {
                let mut m = decode(low, p, e as usize);
                m.push(1);
                m
            })
            .find(|m| is_irreducible(m, p))
            .ok_or_else(|| crate::Error::Internal(format!("no irreducible of degree {e} over F_{p}")))?;
        let mut f = FiniteField { p, e, q, modulus, tables: None };
        if q <= TABLE_LIMIT {
            let n = q as usize;
            let mut add = vec![0u32; n * n];
            let mut mul = vec![0u32; n * n];
            for a in 0..q {
                for b in 0..q {
                    add[a as usize * n + b as usize] = f.add_slow(a, b) as u32;
                    mul[a as usize * n + b as usize] = f.mul_slow(a, b) as u32;
                }
            }
            f.tables = Some((add, mul));
        }
        Ok(f)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    fn add_slow(&self, a: u64, b: u64) -> u64 {
        let (x, y) = (decode(a, self.p, self.e as usize), decode(b, self.p, self.e as usize));
        let s: Poly = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        encode(&s, self.p)
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let e = self.e as usize;
        let (x, y) = (decode(a, self.p, e), decode(b, self.p, e));
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &u) in x.iter().enumerate() {
            for (j, &v) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u * v) % self.p;
            }
        }
        encode(&poly_rem(prod, &self.modulus, self.p), self.p)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        match &self.tables {
            Some((add, _)) => add[(a * self.q + b) as usize] as u64,
            None => self.add_slow(a, b),
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match &self.tables {
            Some((_, mul)) => mul[(a * self.q + b) as usize] as u64,
            None => self.mul_slow(a, b),
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        let x = decode(a, self.p, self.e as usize);
        encode(&x.iter().map(|&c| (self.p - c) % self.p).collect::<Poly>(), self.p)
    }

    pub fn pow(&self, mut a: u64, mut k: u64) -> u64 {
        let mut acc = 1;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            k >>= 1;
        }
        acc
    }

    /// Smallest generator of the multiplicative group, by encoding.
    pub fn primitive_element(&self) -> u64 {
        let m = self.q - 1;
        let primes: Vec<u64> = (2..=m).filter(|&r| m % r == 0 && is_prime(r)).collect();
        (1..self.q)
            .find(|&g| primes.iter().all(|&r| self.pow(g, m / r) != 1))
            .expect("multiplicative group is cyclic")
    }

    /// Canonical element order `0, 1, g, g², …, g^{q−2}` for the primitive element `g`.
    pub fn canonical_order(&self) -> Vec<u64> {
        let g = self.primitive_element();
        let mut out = Vec::with_capacity(self.q as usize);
        out.push(0);
        let mut x = 1;
        for _ in 1..self.q {
            out.push(x);
            x = self.mul(x, g);
        }
        out
    }

    /// Multiplicative inverse by exhaustive search; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        (1..self.q).find(|&b| self.mul(a, b) == 1).filter(|_| a != 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gf16_modulus() {
        // Exhaustive scan: x⁴, x⁴+1, x⁴+x have roots or factors; x⁴+x+1 is next.
        let f = FiniteField::new(2, 4).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(f.order(), 16);
    }

    #[test]
    fn gf25_modulus() {
        // Smallest monic irreducible quadratic over F₅: x²+2 (−2 is a non-residue).
        let f = FiniteField::new(5, 2).unwrap();
        assert_eq!(f.modulus(), &[2, 0, 1]);
        assert_eq!(f.order(), 25);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(FiniteField::new(4, 1).is_err());
        assert!(FiniteField::new(2, 9).is_err());
        assert!(FiniteField::new(2, 0).is_err());
    }

    #[test]
    fn prime_field_is_modular_arithmetic() {
        let f = FiniteField::new(7, 1).unwrap();
        for a in 0..7 {
            for b in 0..7 {
                assert_eq!(f.add(a, b), (a + b) % 7);
                assert_eq!(f.mul(a, b), (a * b) % 7);
            }
        }
    }

    #[test]
    fn multiplicative_group_is_full() {
        for (p, e) in [(2, 4), (3, 2), (5, 2), (2, 3)] {
            let f = FiniteField::new(p, e).unwrap();
            for a in 1..f.order() {
                let b = f.inv(a).unwrap();
                assert_eq!(f.mul(a, b), 1);
            }
            assert_eq!(f.inv(0), None);
        }
    }

    #[test]
    fn primitive_elements() {
        assert_eq!(FiniteField::new(2, 4).unwrap().primitive_element(), 2);
        assert_eq!(FiniteField::new(5, 2).unwrap().primitive_element(), 6);
        assert_eq!(FiniteField::new(7, 1).unwrap().primitive_element(), 3);
        let f = FiniteField::new(2, 4).unwrap();
        let order = f.canonical_order();
        assert_eq!(&order[..6], &[0, 1, 2, 4, 8, 3]);
        let mut sorted = order.clone();
        sorted.sort();
        assert_eq!(sorted, (0..16).collect::<Vec<_>>());
    }

    proptest! {
        #[test]
        fn field_axioms(a in 0u64..16, b in 0u64..16, c in 0u64..16) {
            let f = FiniteField::new(2, 4).unwrap();
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(a, f.neg(a)), 0);
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        }

        #[test]
        fn gf25_axioms(a in 0u64..25, b in 0u64..25, c in 0u64..25) {
            let f = FiniteField::new(5, 2).unwrap();
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.mul(a, 1), a);
        }
    }
}
