//! Arithmetic models over Z_p: the ambient (weighted) projective space, the
//! defining equations and the special fibre's points, smooth locus and
//! singularities.

mod cache;
mod enumerate;
mod singular;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use once_cell::sync::OnceCell;
use sha2::{Digest, Sha256};

use crate::arith::{FiniteField, FqElem};
use crate::error::{Error, Result};
use crate::numbers;
use crate::poly::{FqPoly, IntPoly, Vars};

pub(crate) use enumerate::FibreEvaluator;
pub use cache::{count_points_cached, CacheKey, PointCountCache};
pub use enumerate::{
    count_points, enumerate_points, enumerate_strata, Enumeration, Stratum, DEFAULT_BUDGET,
};
pub use singular::{
    check_smooth_locus_connected, find_singular_points, regularity_check,
    regularity_check_with_lift, SingularPoint, SingularSearch,
};

/// A projective space, either straight (all weights 1) or P(1,1,2,3).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientSpace {
    vars: Arc<Vars>,
}

impl AmbientSpace {
    pub fn new<S: Into<String>>(names: Vec<S>, weights: Vec<u32>) -> Result<Self> {
        let vars = Vars::new(names, weights)?;
        if vars.len() < 2 {
            return Err(Error::Domain("ambient space needs at least two variables".into()));
        }
        let w = vars.weights();
        if !w.iter().all(|&x| x == 1) {
            let mut sorted = w.to_vec();
            sorted.sort_unstable();
            if sorted != [1, 1, 2, 3] {
                return Err(Error::Unsupported(format!(
                    "weighted projective space with weights {w:?}; only P(1,1,2,3) is supported"
                )));
            }
        }
        Ok(AmbientSpace { vars })
    }

    /// P^n with variables X0..Xn.
    pub fn projective(n: usize) -> Self {
        let names: Vec<String> = (0..=n).map(|i| format!("X{i}")).collect();
        AmbientSpace::new(names, vec![1; n + 1]).expect("valid projective space")
    }

    pub fn vars(&self) -> &Arc<Vars> {
        &self.vars
    }

    pub fn names(&self) -> &[String] {
        self.vars.names()
    }

    pub fn weights(&self) -> &[u32] {
        self.vars.weights()
    }

    pub fn dimension(&self) -> usize {
        self.vars.len() - 1
    }

    pub fn is_weighted(&self) -> bool {
        self.weights().iter().any(|&w| w != 1)
    }
}

/// A projective model over Z_p cut out by integer forms.
#[derive(Clone)]
pub struct ModelSpec {
    ambient: AmbientSpace,
    equations: Vec<IntPoly>,
    degrees: Vec<u32>,
    p: u64,
    label: String,
    connected: OnceCell<std::result::Result<(), Error>>,
}

impl fmt::Debug for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModelSpec")
            .field("label", &self.label)
            .field("p", &self.p)
            .field("ambient", &self.ambient)
            .field("equations", &self.equations)
            .finish()
    }
}

impl ModelSpec {
    pub fn new(ambient: AmbientSpace, equations: Vec<IntPoly>, p: u64, label: impl Into<String>) -> Result<Self> {
        if !numbers::is_prime(p as u128) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        let mut degrees = Vec::with_capacity(equations.len());
        for (i, eq) in equations.iter().enumerate() {
            if eq.vars() != ambient.vars() {
                return Err(Error::Domain(format!("equation {i} uses different variables than the ambient space")));
            }
            let d = eq.weighted_homogeneous_degree().ok_or_else(|| {
                Error::Domain(format!("equation {i} is zero or not weighted-homogeneous: {eq}"))
            })?;
            if d == 0 {
                return Err(Error::Domain(format!("equation {i} is constant")));
            }
            if eq.content_valuation(p) != Some(0) {
                return Err(Error::Domain(format!(
                    "equation {i} is not primitive at p = {p}: every coefficient is divisible by p"
                )));
            }
            degrees.push(d);
        }
        Ok(ModelSpec { ambient, equations, degrees, p, label: label.into(), connected: OnceCell::new() })
    }

    /// Parses each equation in the ambient variables.
    pub fn parse(ambient: AmbientSpace, equations: &[&str], p: u64, label: impl Into<String>) -> Result<Self> {
        let eqs = equations
            .iter()
            .map(|e| IntPoly::parse(e, ambient.vars()))
            .collect::<Result<Vec<_>>>()?;
        ModelSpec::new(ambient, eqs, p, label)
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }

    pub fn vars(&self) -> &Arc<Vars> {
        self.ambient.vars()
    }

    pub fn equations(&self) -> &[IntPoly] {
        &self.equations
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_hypersurface(&self) -> bool {
        self.equations.len() == 1
    }

    /// Dimension of the fibres, assuming the equations form a complete intersection.
    pub fn fibre_dimension(&self) -> usize {
        self.ambient.dimension().saturating_sub(self.equations.len())
    }

    /// The equations of the special fibre over `field`.
    pub fn reduced_equations(&self, field: &'static FiniteField) -> Vec<FqPoly> {
        self.equations.iter().map(|e| e.reduce(field)).collect()
    }

    /// Variables that no reduced equation involves: the special fibre is a
    /// cone with these directions as rulings.
    pub fn free_variables(&self) -> Vec<usize> {
        let f = FiniteField::get(self.p, 1).expect("prime field");
        let reduced = self.reduced_equations(f);
        (0..self.vars().len())
            .filter(|&i| !reduced.iter().any(|e| e.involves(i)))
            .collect()
    }

    /// Stable text form used for hashing and reports.
    pub fn canonical_text(&self) -> String {
        let mut s = format!(
            "vars={}\nweights={}\np={}\n",
            self.vars().names().join(","),
            self.ambient.weights().iter().map(|w| w.to_string()).collect::<Vec<_>>().join(","),
            self.p
        );
        for e in &self.equations {
            s.push_str(&format!("eq={e}\n"));
        }
        s
    }

    /// Hex SHA-256 of [`Self::canonical_text`]; the label does not enter.
    pub fn hash_hex(&self) -> String {
        let digest = Sha256::digest(self.canonical_text().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub(crate) fn connected_cell(&self) -> &OnceCell<std::result::Result<(), Error>> {
        &self.connected
    }
}

/// A point of the special fibre over F_{p^k}, normalized so that its first
/// nonzero weight-1 coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FibrePoint {
    coords: Vec<FqElem>,
    smooth: bool,
}

impl FibrePoint {
    /// Normalizes the coordinates; fails when no weight-1 coordinate is nonzero.
    pub fn new(coords: Vec<FqElem>, weights: &[u32], smooth: bool) -> Result<Self> {
        let coords = normalize(coords, weights)?;
        Ok(FibrePoint { coords, smooth })
    }

    pub(crate) fn from_normalized(coords: Vec<FqElem>, smooth: bool) -> Self {
        FibrePoint { coords, smooth }
    }

    pub fn coords(&self) -> &[FqElem] {
        &self.coords
    }

    pub fn is_smooth(&self) -> bool {
        self.smooth
    }

    pub fn field(&self) -> &'static FiniteField {
        self.coords[0].field()
    }

    /// Least d such that every coordinate lies in F_{p^d}.
    pub fn field_degree(&self) -> u32 {
        let f = self.field();
        let k = f.degree();
        (1..=k)
            .filter(|d| k.is_multiple_of(*d))
            .find(|&d| self.coords.iter().all(|c| f.in_subfield(c.index(), d)))
            .unwrap_or(k)
    }

    pub fn raw(&self) -> Vec<u32> {
        self.coords.iter().map(|c| c.index()).collect()
    }

    /// Integer lift of an F_p-rational point, coordinates in [0, p).
    pub fn integer_lift(&self) -> Result<Vec<BigInt>> {
        self.coords
            .iter()
            .map(|c| {
                c.as_prime_residue()
                    .map(BigInt::from)
                    .ok_or_else(|| Error::Unsupported(format!("point {self} is not rational over the prime field")))
            })
            .collect()
    }
}

fn normalize(coords: Vec<FqElem>, weights: &[u32]) -> Result<Vec<FqElem>> {
    if coords.len() != weights.len() {
        return Err(Error::Domain("point arity does not match the ambient space".into()));
    }
    let Some(lead) = (0..coords.len()).find(|&i| weights[i] == 1 && !coords[i].is_zero()) else {
        return Err(Error::UnsupportedChart(
            "point has no nonzero weight-1 coordinate".into(),
        ));
    };
    let inv = coords[lead].inv().expect("nonzero");
    Ok(coords
        .iter()
        .zip(weights)
        .map(|(c, &w)| *c * inv.pow(w as u64))
        .collect())
}

impl fmt::Display for FibrePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for FibrePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}{}", if self.smooth { "" } else { " [singular]" })
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;

    pub fn dp1() -> ModelSpec {
        let amb = AmbientSpace::new(vec!["x", "y", "z", "w"], vec![1, 1, 2, 3]).unwrap();
        ModelSpec::parse(
            amb,
            &["w^2 - z^3 - (2*x^4 + 5*x^3*y - 2*x^2*y^2 - 5*x*y^3 + 2*y^4)*z \
               - (-3*x^6 + 4*x^5*y - 4*x^4*y^2 - 4*x^2*y^4 - 4*x*y^5 + 8*y^6)"],
            11,
            "dp1",
        )
        .unwrap()
    }

    pub fn quartic() -> ModelSpec {
        ModelSpec::parse(
            AmbientSpace::projective(3),
            &["X0^4 + 47*X1^4 - 103*X2^4 - 17*47*103*X3^4"],
            17,
            "quartic",
        )
        .unwrap()
    }
}
