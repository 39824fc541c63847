//! Sparse multivariate polynomials over the integers or a finite field, with
//! weighted-homogeneity support.

mod compiled;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{FiniteField, FqElem};
use crate::error::{Error, Result};

pub use compiled::CompiledPoly;

/// Coefficient ring operations needed by [`MultiPoly`].
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn is_zero_coeff(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// `k * self`.
    fn mul_int(&self, k: i64) -> Self;
}

impl Coeff for BigInt {
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn mul_int(&self, k: i64) -> Self {
        self * BigInt::from(k)
    }
}

impl Coeff for FqElem {
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn mul_int(&self, k: i64) -> Self {
        self.field().from_i64(k) * *self
    }
}

/// Ordered variable names with positive weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vars {
    names: Vec<String>,
    weights: Vec<u32>,
}

impl Vars {
    pub fn new<S: Into<String>>(names: Vec<S>, weights: Vec<u32>) -> Result<Arc<Vars>> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() != weights.len() {
            return Err(Error::Domain("variable names and weights differ in length".into()));
        }
        if weights.contains(&0) {
            return Err(Error::Domain("variable weights must be positive".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || !n.chars().next().unwrap().is_alphabetic() {
                return Err(Error::Domain(format!("invalid variable name '{n}'")));
            }
            if names[..i].contains(n) {
                return Err(Error::Domain(format!("duplicate variable '{n}'")));
            }
        }
        Ok(Arc::new(Vars { names, weights }))
    }

    /// Unweighted variables.
    pub fn plain<S: Into<String>>(names: Vec<S>) -> Result<Arc<Vars>> {
        let n = names.len();
        Vars::new(names, vec![1; n])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn without(&self, i: usize) -> Arc<Vars> {
        let mut names = self.names.clone();
        let mut weights = self.weights.clone();
        names.remove(i);
        weights.remove(i);
        Arc::new(Vars { names, weights })
    }
}

pub type Exponents = Vec<u32>;

/// A sparse polynomial: exponent vectors mapped to nonzero coefficients.
#[derive(Clone, PartialEq)]
pub struct MultiPoly<C: Coeff> {
    vars: Arc<Vars>,
    terms: BTreeMap<Exponents, C>,
}

pub type IntPoly = MultiPoly<BigInt>;
pub type FqPoly = MultiPoly<FqElem>;

impl<C: Coeff> MultiPoly<C> {
    pub fn zero(vars: Arc<Vars>) -> Self {
        MultiPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Arc<Vars>, c: C) -> Self {
        let n = vars.len();
        Self::monomial(vars, c, vec![0; n])
    }

    pub fn monomial(vars: Arc<Vars>, c: C, exps: Exponents) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector arity");
        let mut terms = BTreeMap::new();
        if !c.is_zero_coeff() {
            terms.insert(exps, c);
        }
        MultiPoly { vars, terms }
    }

    /// The variable with index `i`, given a unit coefficient to fix the ring.
    pub fn var(vars: Arc<Vars>, i: usize, one: C) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, one, e)
    }

    pub fn from_terms(vars: Arc<Vars>, terms: impl IntoIterator<Item = (Exponents, C)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<Vars> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Option<&C> {
        self.terms.get(exps)
    }

    pub fn add_term(&mut self, exps: Exponents, c: C) {
        assert_eq!(exps.len(), self.vars.len(), "exponent vector arity");
        if c.is_zero_coeff() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(existing) => {
                let s = existing.clone() + c;
                if s.is_zero_coeff() {
                    self.terms.remove(&exps);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn weighted_degree_of(&self, exps: &[u32]) -> u32 {
        exps.iter().zip(self.vars.weights()).map(|(e, w)| e * w).sum()
    }

    /// The weighted degree if every term has the same weighted degree.
    pub fn weighted_homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| self.weighted_degree_of(e));
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    pub fn is_weighted_homogeneous(&self) -> bool {
        self.is_zero() || self.weighted_homogeneous_degree().is_some()
    }

    /// Whether variable `i` occurs in some term.
    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] > 0)
    }

    /// Sum of the terms of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<u32>() == d)
            .map(|(e, c)| (e.clone(), c.clone()));
        MultiPoly { vars: self.vars.clone(), terms: terms.collect() }
    }

    /// Lowest total degree among the terms.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> MultiPoly<D> {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_coeffs(|x| x.clone() * c.clone())
    }

    pub fn pow(&self, e: u32, one: C) -> Self {
        let mut result = Self::constant(self.vars.clone(), one);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    fn check_arity<T>(&self, point: &[T]) -> Result<()> {
        if point.len() != self.vars.len() {
            return Err(Error::Domain(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.vars.len()
            )));
        }
        Ok(())
    }

    /// Exact value at a point. The zero polynomial needs at least one
    /// coordinate to produce a typed zero.
    pub fn evaluate(&self, point: &[C]) -> Result<C> {
        self.check_arity(point)?;
        let zero = match (point.first(), self.terms.values().next()) {
            (Some(x), _) => x.zero_like(),
            (None, Some(c)) => c.zero_like(),
            (None, None) => return Err(Error::Domain("cannot type the zero of an empty ring".into())),
        };
        let maxdeg = self.max_exponents();
        let powers: Vec<Vec<C>> = point
            .iter()
            .zip(&maxdeg)
            .map(|(x, &m)| {
                let mut v = Vec::with_capacity(m as usize + 1);
                v.push(x.one_like());
                for j in 1..=m as usize {
                    let next = v[j - 1].clone() * x.clone();
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = zero;
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &ei) in e.iter().enumerate() {
                if ei > 0 {
                    t = t * powers[i][ei as usize].clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    pub fn max_exponents(&self) -> Vec<u32> {
        let mut m = vec![0u32; self.vars.len()];
        for e in self.terms.keys() {
            for (mi, &ei) in m.iter_mut().zip(e) {
                *mi = (*mi).max(ei);
            }
        }
        m
    }

    /// Substitute a polynomial (all over the same new variable set) for each variable.
    pub fn compose(&self, images: &[MultiPoly<C>], one: C) -> Result<MultiPoly<C>> {
        self.check_arity(images)?;
        let new_vars = match images.first() {
            Some(p) => p.vars.clone(),
            None => return Ok(self.clone()),
        };
        if images.iter().any(|p| p.vars != new_vars) {
            return Err(Error::Domain("substituted polynomials use different variables".into()));
        }
        let maxdeg = self.max_exponents();
        let powers: Vec<Vec<MultiPoly<C>>> = images
            .iter()
            .zip(&maxdeg)
            .map(|(p, &m)| {
                let mut v = vec![MultiPoly::constant(new_vars.clone(), one.clone())];
                for j in 1..=m as usize {
                    let next = &v[j - 1] * p;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = MultiPoly::zero(new_vars.clone());
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(new_vars.clone(), c.clone());
            for (i, &ei) in e.iter().enumerate() {
                if ei > 0 {
                    t = &t * &powers[i][ei as usize];
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Set the named variable to 1 and drop it. Only weight-1 variables give
    /// an honest affine chart.
    pub fn dehomogenize(&self, chart_variable: &str) -> Result<MultiPoly<C>> {
        let i = self
            .vars
            .index_of(chart_variable)
            .ok_or_else(|| Error::Domain(format!("unknown variable '{chart_variable}'")))?;
        self.dehomogenize_at(i)
    }

    pub fn dehomogenize_at(&self, i: usize) -> Result<MultiPoly<C>> {
        if self.vars.weights()[i] != 1 {
            return Err(Error::UnsupportedChart(format!(
                "variable '{}' has weight {}",
                self.vars.names()[i],
                self.vars.weights()[i]
            )));
        }
        let vars = self.vars.without(i);
        let mut out = MultiPoly::zero(vars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.remove(i);
            out.add_term(e2, c.clone());
        }
        Ok(out)
    }

    /// `g(t) = f(point + t)`.
    pub fn shift_to_point(&self, point: &[C]) -> Result<MultiPoly<C>> {
        self.check_arity(point)?;
        let Some(one) = point.first().map(|x| x.one_like()) else {
            return Ok(self.clone());
        };
        let images: Vec<_> = point
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let mut v = MultiPoly::var(self.vars.clone(), i, one.clone());
                v.add_term(vec![0; self.vars.len()], a.clone());
                v
            })
            .collect();
        self.compose(&images, one)
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c.mul_int(e[i] as i64));
        }
        out
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars()).map(|i| self.derivative(i)).collect()
    }

    /// Symmetric matrix of second partials.
    pub fn hessian(&self) -> Vec<Vec<Self>> {
        let g = self.gradient();
        (0..self.nvars())
            .map(|i| (0..self.nvars()).map(|j| g[i].derivative(j)).collect())
            .collect()
    }
}

/// Rows are the gradients of the given polynomials.
pub fn jacobian<C: Coeff>(polys: &[MultiPoly<C>]) -> Vec<Vec<MultiPoly<C>>> {
    polys.iter().map(|f| f.gradient()).collect()
}

impl IntPoly {
    pub fn parse(text: &str, vars: &Arc<Vars>) -> Result<IntPoly> {
        parse::parse_int_poly(text, vars)
    }

    /// Coefficients reduced into the prime subfield of `field`.
    pub fn reduce(&self, field: &'static FiniteField) -> FqPoly {
        self.map_coeffs(|c| field.from_bigint(c))
    }

    /// gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Largest power of `p` dividing every coefficient.
    pub fn content_valuation(&self, p: u64) -> Option<u32> {
        let c = self.content();
        if c.is_zero() {
            return None;
        }
        Some(crate::numbers::valuation(&c, p))
    }

    pub fn div_exact(&self, d: &BigInt) -> IntPoly {
        self.map_coeffs(|c| {
            debug_assert!((c % d).is_zero());
            c / d
        })
    }
}

impl<C: Coeff> Add for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn add(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        assert_eq!(self.vars, rhs.vars, "adding polynomials in different variables");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn sub(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        assert_eq!(self.vars, rhs.vars, "subtracting polynomials in different variables");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coeff> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        self.map_coeffs(|c| -c.clone())
    }
}

impl<C: Coeff> Mul for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn mul(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        assert_eq!(self.vars, rhs.vars, "multiplying polynomials in different variables");
        let mut out = MultiPoly::zero(self.vars.clone());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Coeff> fmt::Display for MultiPoly<C> {
    /// Terms in descending (total degree, exponent) order as `coef*x^e*...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Exponents> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (idx, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            let is_unit = mag == "1";
            let monomial_is_one = e.iter().all(|&x| x == 0);
            if !is_unit || monomial_is_one {
                if mag.contains('+') {
                    factors.push(format!("({mag})"));
                } else {
                    factors.push(mag);
                }
            }
            for (i, &ei) in e.iter().enumerate() {
                match ei {
                    0 => {}
                    1 => factors.push(self.vars.names()[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars.names()[i], ei)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
