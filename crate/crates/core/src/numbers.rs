//! Integer helpers: valuations, primality, factoring of modest integers and
//! exact integer square roots.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// p-adic valuation of a nonzero integer.
pub fn valuation(x: &BigInt, p: u64) -> u32 {
    assert!(!x.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut v = 0;
    let mut y = x.abs();
    while (&y % &p).is_zero() {
        y /= &p;
        v += 1;
    }
    v
}

/// Splits a nonzero integer as `p^v * u` with p not dividing u.
pub fn split_valuation(x: &BigInt, p: u64) -> (u32, BigInt) {
    let v = valuation(x, p);
    (v, x / BigInt::from(p).pow(v))
}

fn mul_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    if let Some(x) = a.checked_mul(b) {
        return x % m;
    }
    // double-and-add fallback for products beyond 128 bits
    let mut r = 0u128;
    let mut a = a % m;
    let mut b = b;
    while b > 0 {
        if b & 1 == 1 {
            r = (r + a) % m;
        }
        a = (a << 1) % m;
        b >>= 1;
    }
    r
}

fn pow_mod_u128(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u128(r, b, m);
        }
        b = mul_mod_u128(b, b, m);
        e >>= 1;
    }
    r
}

/// Miller-Rabin with the first twelve primes as bases: deterministic below 3.3e24.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u128; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u128(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u128) -> u128 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u128;
    loop {
        let f = |x: u128| (mul_mod_u128(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u128, 2u128, 1u128);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as (prime, exponent) pairs in increasing order.
/// Returns None when |x| does not fit in 128 bits.
pub fn factor(x: &BigInt) -> Option<Vec<(u128, u32)>> {
    let n = x.abs().to_u128()?;
    let mut out: Vec<(u128, u32)> = Vec::new();
    if n <= 1 {
        return Some(out);
    }
    let mut stack = vec![n];
    let mut primes = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let mut small = None;
        for d in 2..1000u128 {
            if m % d == 0 {
                small = Some(d);
                break;
            }
        }
        let d = small.unwrap_or_else(|| pollard_rho(m));
        stack.push(d);
        stack.push(m / d);
    }
    primes.sort_unstable();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Some(out)
}

/// floor(sqrt(n)) for n >= 0.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "square root of a negative number");
    let u: BigUint = n.to_biguint().expect("nonnegative");
    BigInt::from(u.sqrt())
}

pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = isqrt(n);
    &r * &r == *n
}

pub fn pow_big(base: u64, e: u32) -> BigInt {
    BigInt::from(base).pow(e)
}

pub fn one() -> BigInt {
    BigInt::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigInt::from(17 * 47 * 103), 17), 1);
        assert_eq!(valuation(&BigInt::from(-121), 11), 2);
        assert_eq!(split_valuation(&BigInt::from(-50), 5), (2, BigInt::from(-2)));
    }

    #[test]
    fn primality() {
        assert!(is_prime(1009));
        assert!(!is_prime(1001));
        assert!(is_prime((1u128 << 61) - 1));
        assert!(!is_prime((1u128 << 61) + 1));
    }

    #[test]
    fn factoring() {
        let f = factor(&BigInt::from(-(17i64 * 47 * 103 * 4))).unwrap();
        assert_eq!(f, vec![(2, 2), (17, 1), (47, 1), (103, 1)]);
        let big = BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64);
        assert_eq!(factor(&big).unwrap(), vec![(998_244_353, 1), (1_000_000_007, 1)]);
    }

    #[test]
    fn square_roots() {
        assert_eq!(isqrt(&BigInt::from(99)), BigInt::from(9));
        assert!(is_square(&BigInt::from(144)));
        assert!(!is_square(&BigInt::from(-4)));
    }
}
