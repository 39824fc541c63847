//! Exact arithmetic: finite fields, the invariant group Q/Z, power-residue
//! characters and finite abelian group independence.

mod field;
pub(crate) mod fp_poly;
mod group;
pub mod linalg;
mod qz;

pub use field::{FiniteField, FqElem, TABLE_LIMIT};
pub use group::{
    is_linearly_independent, product_characters_surjective, subgroup_order, FinAbElement,
    CLOSURE_LIMIT,
};
pub use qz::QZClass;

use crate::error::Result;

/// The class j/n with `x^((q-1)/n) = zeta^j`, `zeta` being the fixed
/// primitive n-th root of unity of the field presentation.
pub fn power_residue_character(x: FqElem, n: u64) -> Result<QZClass> {
    x.character(n)
}

/// Integer Legendre symbol (a/p) for an odd prime p, via Euler's criterion.
pub fn legendre(a: i128, p: u64) -> i8 {
    let r = a.rem_euclid(p as i128) as u64;
    if r == 0 {
        return 0;
    }
    if fp_poly::pow_mod_int(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}
