use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;

use crate::error::Error;

/// An element a/n of Q/Z, kept in lowest terms with 0 <= a < n.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct QZClass {
    num: u64,
    den: u64,
}

impl QZClass {
    pub const ZERO: QZClass = QZClass { num: 0, den: 1 };

    /// The class of `a / n` modulo 1. Panics if `n == 0`.
    pub fn new(a: i128, n: u64) -> QZClass {
        assert!(n > 0, "denominator must be positive");
        let r = a.rem_euclid(n as i128) as u64;
        let g = r.gcd(&n);
        QZClass { num: r / g, den: n / g }
    }

    pub fn half() -> QZClass {
        QZClass::new(1, 2)
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    /// Order in Q/Z, which is the reduced denominator.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn times(&self, k: i128) -> QZClass {
        let n = self.den as i128;
        QZClass::new((self.num as i128 % n) * (k.rem_euclid(n)) % n, self.den)
    }

    /// Numerator with respect to the denominator `n`, if the class lies in (1/n)Z/Z.
    pub fn numerator_over(&self, n: u64) -> Option<u64> {
        if !n.is_multiple_of(self.den) {
            return None;
        }
        Some(self.num * (n / self.den))
    }
}

impl Default for QZClass {
    fn default() -> Self {
        QZClass::ZERO
    }
}

impl Add for QZClass {
    type Output = QZClass;
    fn add(self, rhs: QZClass) -> QZClass {
        let l = self.den.lcm(&rhs.den);
        let a = self.num as i128 * (l / self.den) as i128 + rhs.num as i128 * (l / rhs.den) as i128;
        QZClass::new(a, l)
    }
}

impl Neg for QZClass {
    type Output = QZClass;
    fn neg(self) -> QZClass {
        QZClass::new(-(self.num as i128), self.den)
    }
}

impl Sub for QZClass {
    type Output = QZClass;
    fn sub(self, rhs: QZClass) -> QZClass {
        self + (-rhs)
    }
}

impl std::iter::Sum for QZClass {
    fn sum<I: Iterator<Item = QZClass>>(iter: I) -> QZClass {
        iter.fold(QZClass::ZERO, |a, b| a + b)
    }
}

impl PartialOrd for QZClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QZClass {
    /// Ordered by the representative in [0, 1).
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for QZClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for QZClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for QZClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid Q/Z class '{s}'"));
        match s.split_once('/') {
            None => {
                let a: i128 = s.parse().map_err(|_| bad())?;
                Ok(QZClass::new(a, 1))
            }
            Some((a, n)) => {
                let a: i128 = a.trim().parse().map_err(|_| bad())?;
                let n: u64 = n.trim().parse().map_err(|_| bad())?;
                if n == 0 {
                    return Err(bad());
                }
                Ok(QZClass::new(a, n))
            }
        }
    }
}
