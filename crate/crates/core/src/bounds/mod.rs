//! Point-existence bounds for étale cyclic covers of curves, in exact integer
//! arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numbers::{isqrt, pow_big};

/// Genus of an étale degree-N cover of a genus-g curve: N(g - 1) + 1.
pub fn rh_genus(g: u64, n: u64) -> BigInt {
    BigInt::from(n) * (BigInt::from(g) - 1) + 1
}

/// `q + 1 > 2 g sqrt(q)`, the Hasse-Weil guarantee of a rational point on a
/// smooth projective genus-g curve over F_q.
pub fn hasse_weil_has_point(q: &BigInt, g: &BigInt) -> bool {
    if g.is_zero() {
        return true;
    }
    let lhs = q + 1;
    &lhs * &lhs > BigInt::from(4) * g * g * q
}

/// The cone bound `(g' + sqrt(g'^2 - 1))^2` for a cover genus g' >= 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Threshold {
    g_prime: BigInt,
}

impl Threshold {
    pub fn new(g_prime: BigInt) -> Result<Self> {
        if g_prime < BigInt::one() {
            return Err(Error::Domain(format!("cover genus {g_prime} must be at least 1")));
        }
        Ok(Threshold { g_prime })
    }

    pub fn g_prime(&self) -> &BigInt {
        &self.g_prime
    }

    /// The value is `2g'^2 - 1 + sqrt(disc)` with `disc = 4g'^2(g'^2 - 1)`.
    fn parts(&self) -> (BigInt, BigInt) {
        let g2 = &self.g_prime * &self.g_prime;
        (BigInt::from(2) * &g2 - 1, BigInt::from(4) * &g2 * (&g2 - 1))
    }

    /// Whether `q` exceeds the threshold, compared after clearing the root.
    pub fn exceeded_by(&self, q: &BigInt) -> bool {
        let (base, disc) = self.parts();
        let l = q - base;
        l.is_positive() && &l * &l > disc
    }

    /// Least integer strictly above the threshold.
    pub fn strict_integer_threshold(&self) -> BigInt {
        let (base, disc) = self.parts();
        base + isqrt(&disc) + 1
    }

    /// Least integer at least the threshold.
    pub fn ceiling(&self) -> BigInt {
        let (base, disc) = self.parts();
        let r = isqrt(&disc);
        if &r * &r == disc {
            base + r
        } else {
            base + r + 1
        }
    }

    /// Decimal expansion truncated to `digits` places.
    pub fn decimal(&self, digits: u32) -> String {
        let (base, disc) = self.parts();
        let scale = pow_big(10, digits);
        let scaled = base * &scale + isqrt(&(disc * &scale * &scale));
        let int = &scaled / &scale;
        let frac = (&scaled % &scale).to_string();
        if digits == 0 {
            return int.to_string();
        }
        format!("{int}.{}{frac}", "0".repeat(digits as usize - frac.len()))
    }

    /// `(g' + sqrt(g'^2 - 1))^2` with g' substituted.
    pub fn expression(&self) -> String {
        let g2m1 = &self.g_prime * &self.g_prime - 1;
        format!("({} + sqrt({g2m1}))^2", self.g_prime)
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}...", self.expression(), self.decimal(6))
    }
}

/// The cone bound for a curve of genus g and classes of total order N,
/// checked against field sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub g: u64,
    pub n: u64,
    pub g_prime: BigInt,
    pub threshold: Threshold,
    /// `(q, q > threshold)`.
    pub checks: Vec<(BigInt, bool)>,
}

impl BoundReport {
    pub fn vacuous(&self) -> bool {
        self.g_prime.is_one()
    }
}

pub fn size_bound(g: u64, n: u64) -> Result<Threshold> {
    if n == 0 {
        return Err(Error::Domain("cover degree must be positive".into()));
    }
    Threshold::new(rh_genus(g, n))
}

pub fn bound_report(g: u64, n: u64, qs: &[BigInt]) -> Result<BoundReport> {
    let threshold = size_bound(g, n)?;
    let checks = qs.iter().map(|q| (q.clone(), threshold.exceeded_by(q))).collect();
    Ok(BoundReport { g, n, g_prime: threshold.g_prime().clone(), threshold, checks })
}

/// The Brauer-order bound used for diagonal quartics.
pub const QUARTIC_BR_ORDER: u64 = 1 << 25;

/// The prime threshold stated for diagonal quartics, `2^54 + 2^28 + 1`.
pub fn quartic_stated_threshold() -> BigInt {
    pow_big(2, 54) + pow_big(2, 28) + 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuarticThresholdReport {
    pub p: BigInt,
    pub br_order_bound: u64,
    /// Decided by the stated constant.
    pub passes: bool,
    pub passes_computed: bool,
    pub computed: Threshold,
    pub stated_threshold: BigInt,
    /// `ceiling(computed) - stated_threshold`.
    pub difference: BigInt,
}

pub fn quartic_threshold_check(p: &BigInt, br_order_bound: u64) -> Result<QuarticThresholdReport> {
    let computed = size_bound(3, br_order_bound)?;
    let stated = quartic_stated_threshold();
    Ok(QuarticThresholdReport {
        p: p.clone(),
        br_order_bound,
        passes: p > &stated,
        passes_computed: computed.exceeded_by(p),
        difference: computed.ceiling() - &stated,
        computed,
        stated_threshold: stated,
    })
}
