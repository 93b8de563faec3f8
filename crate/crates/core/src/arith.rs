//! Small-integer number theory used throughout: gcds, modular inverses,
//! factorisations and Euler's totient.

use num_integer::Integer;

/// Non-negative residue of `a` modulo `m` (`m > 0`).
#[inline]
pub fn modulo(a: i64, m: i64) -> i64 {
    debug_assert!(m > 0);
    a.rem_euclid(m)
}

/// Extended gcd: returns `(g, x, y)` with `a*x + b*y = g >= 0`.
pub fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    let ext = a.extended_gcd(&b);
    if ext.gcd < 0 {
        (-ext.gcd, -ext.x, -ext.y)
    } else {
        (ext.gcd, ext.x, ext.y)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = egcd(modulo(a, m), m);
    (g == 1).then(|| modulo(x, m))
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc: u128 = 1 % m128;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// All positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Exponent of the prime `p` in `n` (`n != 0`).
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Splits `n = p^k * m` with `p` not dividing `m`; returns `(k, m)`.
pub fn split_prime_part(n: u64, p: u64) -> (u32, u64) {
    let k = valuation(n, p);
    (k, n / p.pow(k))
}

/// Multiplicative order of `a` modulo `m` (requires `gcd(a, m) = 1`).
pub fn mult_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let a = a % m;
    let mut x = a;
    let mut k = 1;
    while x != 1 {
        x = x * a % m;
        k += 1;
    }
    k
}

/// Units of `Z/m`, in increasing order.
pub fn units_mod(m: u64) -> Vec<u64> {
    (0..m).filter(|&a| gcd(a as i64, m as i64) == 1).collect()
}

/// The first `count` primes not dividing `n`.
pub fn primes_not_dividing(n: u64, count: usize) -> Vec<u64> {
    (2u64..)
        .filter(|&q| is_prime(q) && !n.is_multiple_of(q))
        .take(count)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn egcd_identity() {
        for a in -20i64..20 {
            for b in -20i64..20 {
                let (g, x, y) = egcd(a, b);
                assert_eq!(a * x + b * y, g);
                assert!(g >= 0);
            }
        }
    }

    #[test]
    fn phi_and_divisors() {
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(27), 18);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(split_prime_part(12, 2), (2, 3));
        assert_eq!(mult_order(3, 4), 2);
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
        assert_eq!(primes_not_dividing(6, 3), vec![5, 7, 11]);
    }
}
