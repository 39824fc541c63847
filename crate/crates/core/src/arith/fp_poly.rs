//! Dense univariate polynomials over a prime field, used only to build
//! extension-field presentations.

pub(crate) type Poly = Vec<u64>;

pub(crate) fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn pow_mod_int(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod_int(a, p - 2, p)
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let mut r = vec![0; n];
    for (i, slot) in r.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + p - y) % p;
    }
    trim(r)
}

fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(r)
}

pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Poly {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = mul_mod(r[top], lead_inv, p);
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mul_mod(c, mi, p)) % p;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mul_mod_poly(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Poly {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn pow_mod_poly(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Poly {
    let mut r = vec![1u64];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_poly(&r, &b, m, p);
        }
        b = mul_mod_poly(&b, &b, m, p);
        e >>= 1;
    }
    r
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic polynomial of degree k over F_p.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 1 {
        return true;
    }
    let x = vec![0, 1];
    let pk = (p as u128).pow(k as u32);
    if trim(sub(&pow_mod_poly(&x, pk, f, p), &x, p)) != Vec::<u64>::new() {
        return false;
    }
    for r in prime_factors(k as u64) {
        let e = (p as u128).pow((k as u64 / r) as u32);
        let h = sub(&pow_mod_poly(&x, e, f, p), &x, p);
        let g = gcd(f, &h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Lexicographically least monic irreducible polynomial of degree `k`,
/// ordering by `(c_{k-1}, ..., c_0)`. Coefficients are returned low degree first.
pub(crate) fn least_irreducible(p: u64, k: u32) -> Poly {
    let k = k as usize;
    let total = p.pow(k as u32);
    for t in 0..total {
        // t's most significant base-p digit is c_{k-1}
        let mut f = vec![0u64; k + 1];
        let mut rest = t;
        for i in 0..k {
            f[i] = rest % p;
            rest /= p;
        }
        f[k] = 1;
        if k > 1 && f[0] == 0 {
            continue;
        }
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_irreducible_small_cases() {
        // x^2 + 1 is irreducible over F_3 and nothing smaller in lex order is
        assert_eq!(least_irreducible(3, 2), vec![1, 0, 1]);
        // over F_2 the least cubic is x^3 + x + 1
        assert_eq!(least_irreducible(2, 3), vec![1, 1, 0, 1]);
        // over F_17: -1 and -2 are squares, -3 is not
        assert_eq!(least_irreducible(17, 2), vec![3, 0, 1]);
    }

    #[test]
    fn reducible_detected() {
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(!is_irreducible(&[16, 0, 1], 17));
    }
}
