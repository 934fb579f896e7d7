//! Exact integer helpers: square roots, primality, prime powers, residues.

/// Floor of the square root of `n`.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x.checked_mul(x).map_or(true, |sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

/// The exact square root of `n`, if `n` is a perfect square.
pub fn exact_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let s = isqrt(n as u128) as i128;
    (s * s == n).then_some(s)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Exact integer `e`-th root when `n` is a perfect `e`-th power.
fn exact_root(n: u64, e: u32) -> Option<u64> {
    let guess = (n as f64).powf(1.0 / e as f64).round() as u64;
    (guess.saturating_sub(1)..=guess + 1).find(|&c| c.checked_pow(e) == Some(n))
}

/// Writes `n` as `p^e` with `p` prime when possible.
pub fn is_prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    (1..=63).rev().find_map(|e| exact_root(n, e).filter(|&p| is_prime(p)).map(|p| (p, e)))
}

/// Odd primes dividing `n`, ascending.
pub fn odd_prime_divisors(n: i128) -> Vec<i128> {
    let mut n = n.abs();
    let mut out = Vec::new();
    while n > 0 && n % 2 == 0 {
        n /= 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 2;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Whether `a` is a square in the prime field of order `p` (zero counts).
pub fn is_square_mod(a: i128, p: i128) -> bool {
    let a = a.rem_euclid(p) as u64;
    a == 0 || pow_mod(a, (p as u64 - 1) / 2, p as u64) == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_powers() {
        assert_eq!(is_prime_power(16), Some((2, 4)));
        assert_eq!(is_prime_power(12), None);
        assert_eq!(is_prime_power(361), Some((19, 2)));
        assert_eq!(is_prime_power(25), Some((5, 2)));
        assert_eq!(is_prime_power(2), Some((2, 1)));
        assert_eq!(is_prime_power(1), None);
        assert_eq!(is_prime_power(1 << 63), Some((2, 63)));
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..5000u64 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), trial, "{n}");
        }
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751));
    }

    #[test]
    fn odd_divisors() {
        assert_eq!(odd_prime_divisors(-30), vec![3, 5]);
        assert_eq!(odd_prime_divisors(64), Vec::<i128>::new());
        assert_eq!(odd_prime_divisors(21), vec![3, 7]);
    }

    #[test]
    fn quadratic_residues() {
        let squares: Vec<i128> = (0..7).filter(|&a| is_square_mod(a, 7)).collect();
        assert_eq!(squares, vec![0, 1, 2, 4]);
        assert!(is_square_mod(-1, 5));
        assert!(!is_square_mod(-1, 3));
    }

    proptest! {
        #[test]
        fn isqrt_is_floor(n in 0u128..(1u128 << 100)) {
            let s = isqrt(n);
            prop_assert!(s * s <= n && (s + 1) * (s + 1) > n);
        }

        #[test]
        fn exact_sqrt_of_square(s in 0i128..(1i128 << 60)) {
            prop_assert_eq!(exact_sqrt(s * s), Some(s));
            if s > 0 {
                prop_assert_eq!(exact_sqrt(s * s + 1), None);
            }
        }
    }
}
