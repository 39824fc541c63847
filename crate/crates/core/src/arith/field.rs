//! Finite fields F_{p^k} with a deterministic presentation.
//!
//! Elements are encoded by their coordinate index `sum c_i p^i` with respect to
//! the power basis of `F_p[t]/(m(t))`, where `m` is the lexicographically
//! least monic irreducible of degree `k`. Index order is also the order used
//! to pick the "least" multiplicative generator.
//!
//! Prime fields use direct modular arithmetic. Proper extensions keep
//! exp/log/Zech tables, so they are limited to [`TABLE_LIMIT`] elements.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use once_cell::sync::Lazy;

use super::fp_poly;
use crate::error::{Error, Result};

/// Largest extension field (in elements) for which tables are built.
pub const TABLE_LIMIT: u64 = 1 << 21;

const NO_ZECH: u32 = u32::MAX;

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u64>,
    generator: u32,
    prime_generator: u32,
    tables: Option<Tables>,
}

static REGISTRY: Lazy<Mutex<HashMap<(u32, u32), &'static FiniteField>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FiniteField {
    /// Returns the shared field F_{p^k}. Fields are built once per process and
    /// live for its duration.
    pub fn get(p: u64, k: u32) -> Result<&'static FiniteField> {
        if k == 0 {
            return Err(Error::Domain("extension degree must be at least 1".into()));
        }
        if p > u32::MAX as u64 / 2 || !is_prime_u64(p) {
            return Err(Error::UnsupportedField {
                p,
                k,
                reason: "characteristic must be a prime below 2^31".into(),
            });
        }
        let q = (p as u128).pow(k);
        if k > 1 && q > TABLE_LIMIT as u128 {
            return Err(Error::UnsupportedField {
                p,
                k,
                reason: format!("extension fields are limited to {} elements", TABLE_LIMIT),
            });
        }
        let key = (p as u32, k);
        {
            let reg = REGISTRY.lock().expect("field registry poisoned");
            if let Some(f) = reg.get(&key) {
                return Ok(f);
            }
        }
        let field: &'static FiniteField = Box::leak(Box::new(Self::build(p, k)));
        let mut reg = REGISTRY.lock().expect("field registry poisoned");
        Ok(*reg.entry(key).or_insert(field))
    }

    fn build(p: u64, k: u32) -> FiniteField {
        let q = p.pow(k);
        let prime_generator = least_primitive_root(p) as u32;
        if k == 1 {
            return FiniteField {
                p: p as u32,
                k,
                q: q as u32,
                modulus: vec![0, 1],
                generator: prime_generator,
                prime_generator,
                tables: None,
            };
        }
        let modulus = fp_poly::least_irreducible(p, k);
        let order = q - 1;
        let factors = fp_poly::prime_factors(order);
        let mut generator = 0u64;
        for cand in 1..q {
            let poly = index_to_poly(cand, p, k);
            let is_gen = factors.iter().all(|&r| {
                fp_poly::pow_mod_poly(&poly, (order / r) as u128, &modulus, p) != vec![1]
            });
            if is_gen {
                generator = cand;
                break;
            }
        }
        let gpoly = index_to_poly(generator, p, k);
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; q as usize];
        let mut cur: Vec<u64> = vec![1];
        for i in 0..order {
            let idx = poly_to_index(&cur, p);
            exp.push(idx as u32);
            log[idx as usize] = i as u32;
            cur = fp_poly::mul_mod_poly(&cur, &gpoly, &modulus, p);
        }
        // zech[d] = log(1 + g^d)
        let mut zech = vec![NO_ZECH; order as usize];
        for d in 0..order as usize {
            let mut coords = index_to_poly(exp[d] as u64, p, k);
            coords.resize(k as usize, 0);
            coords[0] = (coords[0] + 1) % p;
            let idx = poly_to_index(&coords, p);
            if idx != 0 {
                zech[d] = log[idx as usize];
            }
        }
        FiniteField {
            p: p as u32,
            k,
            q: q as u32,
            modulus,
            generator: generator as u32,
            prime_generator,
            tables: Some(Tables { exp, log, zech }),
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.q as u64
    }

    /// Modulus coefficients, low degree first (monic).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The least multiplicative generator, in index order.
    pub fn generator(&'static self) -> FqElem {
        self.elem(self.generator)
    }

    pub fn zero(&'static self) -> FqElem {
        self.elem(0)
    }

    pub fn one(&'static self) -> FqElem {
        self.elem(1)
    }

    pub fn elem(&'static self, index: u32) -> FqElem {
        debug_assert!(index < self.q);
        FqElem { field: self, v: index }
    }

    pub fn from_index(&'static self, index: u64) -> Result<FqElem> {
        if index >= self.q as u64 {
            return Err(Error::Domain(format!("index {index} out of range for F_{}", self.q)));
        }
        Ok(self.elem(index as u32))
    }

    pub fn from_coords(&'static self, coords: &[u64]) -> Result<FqElem> {
        if coords.len() > self.k as usize || coords.iter().any(|&c| c >= self.p as u64) {
            return Err(Error::Domain(format!("invalid coordinates {coords:?} for F_{}", self.q)));
        }
        Ok(self.elem(poly_to_index(coords, self.p as u64) as u32))
    }

    pub fn from_i64(&'static self, x: i64) -> FqElem {
        self.elem(x.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_bigint(&'static self, x: &BigInt) -> FqElem {
        let r = x.mod_floor(&BigInt::from(self.p));
        self.elem(r.to_u32().expect("residue fits"))
    }

    /// All elements in index order.
    pub fn elements(&'static self) -> impl Iterator<Item = FqElem> {
        (0..self.q).map(move |i| self.elem(i))
    }

    // Raw index arithmetic. These are the hot paths of enumeration.

    #[inline]
    pub fn add_raw(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            None => {
                let s = a as u64 + b as u64;
                (s % self.p as u64) as u32
            }
            Some(t) => {
                if a == 0 {
                    return b;
                }
                if b == 0 {
                    return a;
                }
                let m = self.q - 1;
                let la = t.log[a as usize];
                let lb = t.log[b as usize];
                let d = if lb >= la { lb - la } else { lb + m - la };
                let z = t.zech[d as usize];
                if z == NO_ZECH {
                    0
                } else {
                    t.exp[((la as u64 + z as u64) % m as u64) as usize]
                }
            }
        }
    }

    #[inline]
    pub fn neg_raw(&self, a: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        match &self.tables {
            None => self.p - a,
            Some(t) => {
                if self.p == 2 {
                    return a;
                }
                let m = self.q - 1;
                let la = t.log[a as usize];
                t.exp[((la as u64 + (m / 2) as u64) % m as u64) as usize]
            }
        }
    }

    #[inline]
    pub fn sub_raw(&self, a: u32, b: u32) -> u32 {
        self.add_raw(a, self.neg_raw(b))
    }

    #[inline]
    pub fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            None => fp_poly::mul_mod(a as u64, b as u64, self.p as u64) as u32,
            Some(t) => {
                let m = (self.q - 1) as u64;
                t.exp[((t.log[a as usize] as u64 + t.log[b as usize] as u64) % m) as usize]
            }
        }
    }

    pub fn inv_raw(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        Some(match &self.tables {
            None => fp_poly::inv_mod(a as u64, self.p as u64) as u32,
            Some(t) => {
                let m = self.q - 1;
                t.exp[((m - t.log[a as usize]) % m) as usize]
            }
        })
    }

    pub fn pow_raw(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        match &self.tables {
            None => fp_poly::pow_mod_int(a as u64, e, self.p as u64) as u32,
            Some(t) => {
                let m = (self.q - 1) as u128;
                let l = (t.log[a as usize] as u128 * (e as u128 % m)) % m;
                t.exp[l as usize]
            }
        }
    }

    /// Discrete logarithm to the base of the least generator.
    pub fn log_raw(&self, a: u32) -> Option<u64> {
        if a == 0 {
            return None;
        }
        match &self.tables {
            Some(t) => Some(t.log[a as usize] as u64),
            None => {
                // baby-step giant-step over the prime field
                let p = self.p as u64;
                let m = (p - 1) as f64;
                let s = m.sqrt().ceil() as u64;
                let g = self.generator as u64;
                let mut baby = HashMap::with_capacity(s as usize);
                let mut cur = 1u64;
                for j in 0..s {
                    baby.entry(cur).or_insert(j);
                    cur = fp_poly::mul_mod(cur, g, p);
                }
                let factor = fp_poly::inv_mod(fp_poly::pow_mod_int(g, s, p), p);
                let mut gamma = a as u64;
                for i in 0..=s {
                    if let Some(&j) = baby.get(&gamma) {
                        return Some((i * s + j) % (p - 1));
                    }
                    gamma = fp_poly::mul_mod(gamma, factor, p);
                }
                None
            }
        }
    }

    /// Base-p coordinates of an element, low degree first, length k.
    pub fn coords(&self, a: u32) -> Vec<u64> {
        let mut v = index_to_poly(a as u64, self.p as u64, self.k);
        v.resize(self.k as usize, 0);
        v
    }

    /// Whether the element lies in the subfield F_{p^d} (d must divide k).
    pub fn in_subfield(&self, a: u32, d: u32) -> bool {
        let pd = (self.p as u64).pow(d);
        self.pow_raw(a, pd) == a
    }

    /// Power-residue character with values in (1/n)Z/Z.
    ///
    /// The identification of mu_n with Z/n uses `zeta = g^((p-1)/n)` for the
    /// least primitive root g of the prime field whenever n | p - 1; this makes
    /// the character on F_{p^k} equal to the prime-field character of the norm.
    /// Otherwise `zeta = G^((q-1)/n)` for the least generator G of F_q.
    pub fn power_residue_character(&self, a: u32, n: u64) -> Result<super::QZClass> {
        let q = self.q as u64;
        if n == 0 || !(q - 1).is_multiple_of(n) {
            return Err(Error::UnsupportedCharacter { n, q });
        }
        if a == 0 {
            return Err(Error::Domain("character of zero is undefined".into()));
        }
        let p = self.p as u64;
        let la = self.log_raw(a).expect("nonzero element has a logarithm");
        let step = (q - 1) / n;
        // log of zeta relative to G is m * step with gcd(m, n) = 1
        let m = if (p - 1).is_multiple_of(n) {
            let zeta_idx = fp_poly::pow_mod_int(self.prime_generator as u64, (p - 1) / n, p);
            let lz = self.log_raw(zeta_idx as u32).expect("zeta nonzero");
            debug_assert_eq!(lz % step, 0);
            (lz / step) % n
        } else {
            1 % n
        };
        // a^step = G^(la*step) = zeta^j  <=>  j*m = la (mod n)
        let la_mod = la % n;
        let j = if n == 1 {
            0
        } else {
            let minv = mod_inverse(m, n).expect("zeta has exact order n");
            ((la_mod as u128 * minv as u128) % n as u128) as u64
        };
        Ok(super::QZClass::new(j as i128, n))
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.k)
    }
}

fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128, n as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(n as i128) as u64)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn least_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = fp_poly::prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&r| fp_poly::pow_mod_int(g, (p - 1) / r, p) != 1))
        .expect("primitive roots exist mod p")
}

fn index_to_poly(mut idx: u64, p: u64, k: u32) -> Vec<u64> {
    let mut v = Vec::with_capacity(k as usize);
    for _ in 0..k {
        v.push(idx % p);
        idx /= p;
    }
    fp_poly::trim(v)
}

fn poly_to_index(coords: &[u64], p: u64) -> u64 {
    coords.iter().rev().fold(0u64, |acc, &c| acc * p + c)
}

/// An element of a finite field. Cheap to copy; the field lives for the
/// whole process.
#[derive(Clone, Copy)]
pub struct FqElem {
    field: &'static FiniteField,
    v: u32,
}

impl FqElem {
    pub fn field(&self) -> &'static FiniteField {
        self.field
    }

    pub fn index(&self) -> u32 {
        self.v
    }

    pub fn is_zero(&self) -> bool {
        self.v == 0
    }

    pub fn is_one(&self) -> bool {
        self.v == 1
    }

    pub fn pow(&self, e: u64) -> FqElem {
        FqElem { field: self.field, v: self.field.pow_raw(self.v, e) }
    }

    pub fn inv(&self) -> Option<FqElem> {
        self.field.inv_raw(self.v).map(|v| FqElem { field: self.field, v })
    }

    pub fn frobenius(&self) -> FqElem {
        self.pow(self.field.p as u64)
    }

    pub fn coords(&self) -> Vec<u64> {
        self.field.coords(self.v)
    }

    pub fn character(&self, n: u64) -> Result<super::QZClass> {
        self.field.power_residue_character(self.v, n)
    }

    /// For elements of the prime field, the residue as an integer in [0, p).
    pub fn as_prime_residue(&self) -> Option<u64> {
        if (self.v as u64) < self.field.p as u64 {
            Some(self.v as u64)
        } else {
            None
        }
    }

    /// Symmetric representative in (-p/2, p/2] for prime-field elements,
    /// otherwise None.
    pub fn as_signed_residue(&self) -> Option<i64> {
        let p = self.field.p as i64;
        self.as_prime_residue().map(|r| {
            let r = r as i64;
            if r > p / 2 {
                r - p
            } else {
                r
            }
        })
    }

    fn check(&self, other: &FqElem) {
        assert!(
            std::ptr::eq(self.field, other.field),
            "mixing elements of {:?} and {:?}",
            self.field,
            other.field
        );
    }
}

impl PartialEq for FqElem {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.field, other.field) && self.v == other.v
    }
}

impl Eq for FqElem {}

impl std::hash::Hash for FqElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.p.hash(state);
        self.field.k.hash(state);
        self.v.hash(state);
    }
}

impl PartialOrd for FqElem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FqElem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.field.p, self.field.k, self.v).cmp(&(other.field.p, other.field.k, other.v))
    }
}

impl std::ops::Add for FqElem {
    type Output = FqElem;
    fn add(self, rhs: FqElem) -> FqElem {
        self.check(&rhs);
        FqElem { field: self.field, v: self.field.add_raw(self.v, rhs.v) }
    }
}

impl std::ops::Sub for FqElem {
    type Output = FqElem;
    fn sub(self, rhs: FqElem) -> FqElem {
        self.check(&rhs);
        FqElem { field: self.field, v: self.field.sub_raw(self.v, rhs.v) }
    }
}

impl std::ops::Mul for FqElem {
    type Output = FqElem;
    fn mul(self, rhs: FqElem) -> FqElem {
        self.check(&rhs);
        FqElem { field: self.field, v: self.field.mul_raw(self.v, rhs.v) }
    }
}

impl std::ops::Neg for FqElem {
    type Output = FqElem;
    fn neg(self) -> FqElem {
        FqElem { field: self.field, v: self.field.neg_raw(self.v) }
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FqElem {
    /// Prime-field elements print as integers; extension elements print as a
    /// polynomial in the generator `t` of the presentation, e.g. `3t+5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.k == 1 {
            return write!(f, "{}", self.v);
        }
        let c = self.coords();
        let mut parts = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let coef = if ci == 1 && i > 0 { String::new() } else { ci.to_string() };
            parts.push(match i {
                0 => coef,
                1 => format!("{coef}t"),
                _ => format!("{coef}t^{i}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = FiniteField::get(17, 1).unwrap();
        assert_eq!(f.generator().index(), 3);
        let a = f.from_i64(-1);
        assert_eq!(a.index(), 16);
        assert_eq!((a * a).index(), 1);
        assert_eq!(f.from_i64(3).inv().unwrap().index(), 6);
    }

    #[test]
    fn extension_field_axioms_exhaustive_f9() {
        let f = FiniteField::get(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        for a in f.elements() {
            assert_eq!(a.pow(9), a);
            if !a.is_zero() {
                assert!((a * a.inv().unwrap()).is_one());
            }
            for b in f.elements() {
                assert_eq!(a + b, b + a);
                assert_eq!((a + b) - b, a);
                for c in f.elements() {
                    assert_eq!(a * (b + c), a * b + a * c);
                }
            }
        }
    }

    #[test]
    fn same_field_is_shared() {
        let a = FiniteField::get(5, 3).unwrap();
        let b = FiniteField::get(5, 3).unwrap();
        assert!(std::ptr::eq(a, b));
    }

    #[test]
    fn subfield_membership() {
        let f = FiniteField::get(17, 2).unwrap();
        let inside = f.elements().filter(|x| f.in_subfield(x.index(), 1)).count();
        assert_eq!(inside, 17);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(FiniteField::get(15, 1).is_err());
        assert!(FiniteField::get(7, 0).is_err());
        assert!(FiniteField::get(101, 4).is_err());
        let f = FiniteField::get(11, 1).unwrap();
        assert!(matches!(
            f.power_residue_character(3, 3),
            Err(Error::UnsupportedCharacter { .. })
        ));
        assert!(matches!(f.power_residue_character(0, 5), Err(Error::Domain(_))));
    }

    #[test]
    fn large_prime_field_log() {
        let f = FiniteField::get(1_000_003, 1).unwrap();
        let g = f.generator();
        let x = g.pow(123_456);
        assert_eq!(f.log_raw(x.index()), Some(123_456));
    }
}
