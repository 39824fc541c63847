//! Kummer torsors over the smooth locus of the special fibre: residues of
//! symbol algebras, twists, fibre classes and point counts.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{FiniteField, QZClass};
use crate::error::{Error, Result};
use crate::model::{enumerate_strata, FibrePoint, ModelSpec, Stratum, DEFAULT_BUDGET};
use crate::numbers;
use crate::poly::{CompiledPoly, IntPoly, Vars};

/// The cyclic algebra (a, f)_n with f = f_num / f_den a ratio of forms of
/// equal weighted degree.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolAlgebra {
    n: u64,
    a: BigRational,
    f_num: IntPoly,
    f_den: IntPoly,
}

impl SymbolAlgebra {
    pub fn new(n: u64, a: BigRational, f_num: IntPoly, f_den: IntPoly) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("algebra order must be positive".into()));
        }
        if a.is_zero() {
            return Err(Error::Domain("symbol entry a must be nonzero".into()));
        }
        if f_num.vars() != f_den.vars() {
            return Err(Error::Domain("numerator and denominator use different variables".into()));
        }
        let dn = f_num.weighted_homogeneous_degree();
        let dd = f_den.weighted_homogeneous_degree();
        match (dn, dd) {
            (Some(x), Some(y)) if x == y => {}
            _ => {
                return Err(Error::Domain(format!(
                    "f must be a ratio of nonzero forms of equal weighted degree: ({f_num}) / ({f_den})"
                )))
            }
        }
        Ok(SymbolAlgebra { n, a, f_num, f_den })
    }

    /// Parses `a` as an integer or fraction and the forms in `vars`.
    pub fn parse(n: u64, a: &str, f_num: &str, f_den: &str, vars: &Arc<Vars>) -> Result<Self> {
        let a = parse_rational(a)?;
        SymbolAlgebra::new(n, a, IntPoly::parse(f_num, vars)?, IntPoly::parse(f_den, vars)?)
    }

    /// The algebra (1, 1)_n, trivial in the Brauer group.
    pub fn trivial(n: u64, vars: &Arc<Vars>) -> Self {
        let one = IntPoly::constant(vars.clone(), BigInt::one());
        SymbolAlgebra::new(n, BigRational::one(), one.clone(), one).expect("valid")
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn f_num(&self) -> &IntPoly {
        &self.f_num
    }

    pub fn f_den(&self) -> &IntPoly {
        &self.f_den
    }

    /// f at an integer point, or None where numerator or denominator vanishes.
    pub fn f_value(&self, point: &[BigInt]) -> Result<Option<BigRational>> {
        let num = self.f_num.evaluate(point)?;
        let den = self.f_den.evaluate(point)?;
        if num.is_zero() || den.is_zero() {
            return Ok(None);
        }
        Ok(Some(BigRational::new(num, den)))
    }
}

impl fmt::Display for SymbolAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, ({}) / ({}))_{}", self.a, self.f_num, self.f_den, self.n)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational number '{s}'"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// p-adic valuation of a nonzero rational.
pub fn rational_valuation(x: &BigRational, p: u64) -> i64 {
    numbers::valuation(x.numer(), p) as i64 - numbers::valuation(x.denom(), p) as i64
}

/// Unit part of a nonzero rational reduced mod p, in [1, p).
pub fn rational_unit_residue(x: &BigRational, p: u64) -> u64 {
    let (_, num) = numbers::split_valuation(x.numer(), p);
    let (_, den) = numbers::split_valuation(x.denom(), p);
    let pb = BigInt::from(p);
    let n = num.mod_floor(&pb).to_u64().expect("residue");
    let d = den.mod_floor(&pb).to_u64().expect("residue");
    n * mod_pow(d, p - 2, p) % p
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// One representative `g = c * prod form_i^{e_i}` of a torsor class
/// (forms over F_p, stored as integer lifts with coefficients in [0, p)).
///
/// Guards are further forms that must not vanish at a point for the
/// representative to apply there.
#[derive(Clone, Debug, PartialEq)]
pub struct Representative {
    constant: u64,
    factors: Vec<(IntPoly, u64)>,
    guards: Vec<IntPoly>,
}

impl Representative {
    pub fn new(constant: u64, factors: Vec<(IntPoly, u64)>) -> Self {
        Representative { constant, factors: factors.into_iter().filter(|(_, e)| *e > 0).collect(), guards: Vec::new() }
    }

    pub fn with_guards(mut self, guards: Vec<IntPoly>) -> Self {
        for g in guards {
            if g.total_degree().unwrap_or(0) > 0 && !self.guards.contains(&g) && !self.factors.iter().any(|(f, _)| *f == g) {
                self.guards.push(g);
            }
        }
        self
    }

    pub fn guards(&self) -> &[IntPoly] {
        &self.guards
    }

    pub fn constant(&self) -> u64 {
        self.constant
    }

    pub fn factors(&self) -> &[(IntPoly, u64)] {
        &self.factors
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    /// Variables appearing in some factor.
    pub fn involved(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for f in self.factors.iter().map(|(f, _)| f).chain(&self.guards) {
            s.extend((0..f.nvars()).filter(|&i| f.involves(i)));
        }
        s
    }
}

impl fmt::Display for Representative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.constant != 1 || self.factors.is_empty() {
            parts.push(self.constant.to_string());
        }
        for (form, e) in &self.factors {
            let body = if form.num_terms() == 1 { form.to_string() } else { format!("({form})") };
            let body = if *e == 1 && self.factors.len() == 1 && parts.is_empty() { form.to_string() } else { body };
            parts.push(if *e == 1 { body } else { format!("{body}^{e}") });
        }
        write!(f, "{}", parts.join(" * "))
    }
}

/// Reduces a primitive integer form mod p, strips its monomial content and
/// returns (leading scalar folded into the constant, stripped form, monomial exponents).
fn reduce_form(form: &IntPoly, p: u64) -> (IntPoly, Vec<u32>) {
    let pb = BigInt::from(p);
    let reduced = form.map_coeffs(|c| c.mod_floor(&pb));
    let mut out = IntPoly::zero(form.vars().clone());
    for (e, c) in reduced.terms() {
        if !c.is_zero() {
            out.add_term(e.clone(), c.clone());
        }
    }
    let n = form.nvars();
    let mut mono = vec![u32::MAX; n];
    for (e, _) in out.terms() {
        for i in 0..n {
            mono[i] = mono[i].min(e[i]);
        }
    }
    if out.is_zero() {
        return (out, vec![0; n]);
    }
    let stripped = IntPoly::from_terms(
        form.vars().clone(),
        out.terms().map(|(e, c)| (e.iter().zip(&mono).map(|(a, b)| a - b).collect(), c.clone())),
    );
    (stripped, mono)
}

/// A cyclic degree-n cover `t^n = g` of the smooth locus of the special
/// fibre, plus an unramified twist.
#[derive(Clone, Debug)]
pub struct KummerTorsor {
    n: u64,
    model: ModelSpec,
    reps: Vec<Representative>,
    twist: QZClass,
}

impl KummerTorsor {
    /// A torsor from an explicit representative (constant and forms over F_p).
    pub fn new(n: u64, model: &ModelSpec, rep: Representative) -> Result<Self> {
        let p = model.prime();
        if n == 0 || !(p - 1).is_multiple_of(n) {
            return Err(Error::UnsupportedCharacter { n, q: p });
        }
        if rep.constant.is_multiple_of(p) {
            return Err(Error::DegenerateResidue);
        }
        let mut degree = 0u64;
        for (f, e) in &rep.factors {
            if f.vars() != model.vars() {
                return Err(Error::Domain("torsor factor uses different variables than the model".into()));
            }
            let d = f
                .weighted_homogeneous_degree()
                .ok_or_else(|| Error::Domain(format!("torsor factor {f} is not a nonzero form")))?;
            degree += d as u64 * e;
        }
        if !degree.is_multiple_of(n) {
            return Err(Error::Domain(format!(
                "representative has weighted degree {degree}, not divisible by n = {n}"
            )));
        }
        Ok(KummerTorsor { n, model: model.clone(), reps: vec![rep], twist: QZClass::ZERO })
    }

    /// The trivial torsor `t^n = 1`.
    pub fn trivial(n: u64, model: &ModelSpec) -> Result<Self> {
        KummerTorsor::new(n, model, Representative::new(1, vec![]))
    }

    /// Residue of a symbol algebra along the special fibre (tame symbol):
    /// `g = (-1)^{v(a)v(f)} a^{v(f)} / f^{v(a)}` reduced mod p. Exponents are
    /// reduced mod n and monomial factors stripped, which keeps the class.
    ///
    /// The value at a point P only depends on the reduction of P while
    /// `v(f(P))` equals the content valuation of f, so the reductions of both
    /// forms are guards. A form that is a single integer term `c X^m` only
    /// guards the variables whose net exponent in f is nonzero mod n.
    pub fn residue(algebra: &SymbolAlgebra, model: &ModelSpec) -> Result<Self> {
        let p = model.prime();
        let n = algebra.n;
        if algebra.f_num.vars() != model.vars() {
            return Err(Error::Domain("algebra uses different variables than the model".into()));
        }
        if !(p - 1).is_multiple_of(n) {
            return Err(Error::UnsupportedCharacter { n, q: p });
        }
        let alpha = rational_valuation(&algebra.a, p);
        let b_num = algebra.f_num.content_valuation(p).expect("nonzero form");
        let b_den = algebra.f_den.content_valuation(p).expect("nonzero form");
        let beta = b_num as i64 - b_den as i64;
        let num_u = algebra.f_num.div_exact(&BigInt::from(p).pow(b_num));
        let den_u = algebra.f_den.div_exact(&BigInt::from(p).pow(b_den));

        let a_u = rational_unit_residue(&algebra.a, p);
        let a_pow = if beta >= 0 { mod_pow(a_u, beta as u64, p) } else { mod_pow(mod_pow(a_u, p - 2, p), (-beta) as u64, p) };
        let sign = if (alpha * beta).rem_euclid(2) == 1 { p - 1 } else { 1 };
        let mut constant = (sign as u128 * a_pow as u128 % p as u128) as u64;

        let nvars = model.vars().len();
        let mut mono_exp = vec![0u64; nvars];
        let mut factors = Vec::new();
        for (form, e) in [(&num_u, (-alpha).rem_euclid(n as i64) as u64), (&den_u, alpha.rem_euclid(n as i64) as u64)] {
            if e == 0 {
                continue;
            }
            let (stripped, mono) = reduce_form(form, p);
            for i in 0..nvars {
                mono_exp[i] += mono[i] as u64 * e;
            }
            if stripped.total_degree() == Some(0) {
                let c = stripped.terms().next().map(|(_, c)| c.to_u64().expect("residue")).unwrap_or(0);
                constant = (constant as u128 * mod_pow(c, e, p) as u128 % p as u128) as u64;
            } else {
                factors.push((stripped, e));
            }
        }
        for (i, &m) in mono_exp.iter().enumerate() {
            let e = m % n;
            if e > 0 {
                factors.push((IntPoly::var(model.vars().clone(), i, BigInt::one()), e));
            }
        }
        let mut guards = Vec::new();
        let mut net = vec![0i64; nvars];
        for (form, sign) in [(&num_u, 1i64), (&den_u, -1)] {
            if form.num_terms() == 1 {
                let (e, _) = form.terms().next().expect("one term");
                for i in 0..nvars {
                    net[i] += sign * e[i] as i64;
                }
            } else {
                let reduced = form.map_coeffs(|c| c.mod_floor(&BigInt::from(p)));
                guards.push(IntPoly::from_terms(
                    form.vars().clone(),
                    reduced.terms().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (e.clone(), c.clone())),
                ));
            }
        }
        for (i, &m) in net.iter().enumerate() {
            if m.rem_euclid(n as i64) != 0 {
                guards.push(IntPoly::var(model.vars().clone(), i, BigInt::one()));
            }
        }
        let rep = Representative::new(constant, factors).with_guards(guards);
        let torsor = KummerTorsor::new(n, model, rep)?;
        torsor.check_not_degenerate()?;
        Ok(torsor)
    }

    /// Fails when every smooth F_p-point with a nonzero weight-1 coordinate
    /// makes some factor vanish (g is zero or undefined on the fibre).
    fn check_not_degenerate(&self) -> Result<()> {
        if self.reps[0].is_constant() {
            return Ok(());
        }
        let strata = match enumerate_strata(&self.model, 1, true, &self.keep_vars(), DEFAULT_BUDGET) {
            Ok(e) => e.strata,
            Err(Error::BudgetExceeded { .. }) => return Ok(()),
            Err(e) => return Err(e),
        };
        if strata.is_empty() {
            return Ok(());
        }
        let field = FiniteField::get(self.model.prime(), 1)?;
        let ev = CompiledTorsor::new(self, field);
        if strata.iter().all(|s| ev.class(s.point.raw().as_slice()).is_none()) {
            return Err(Error::DegenerateResidue);
        }
        Ok(())
    }

    /// Registers an alternative representative `g * h^n`; it is used at
    /// points where earlier representatives are indeterminate.
    pub fn with_representative(mut self, rep: Representative) -> Result<Self> {
        let check = KummerTorsor::new(self.n, &self.model, rep.clone())?;
        drop(check);
        self.reps.push(rep);
        Ok(self)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn model(&self) -> &ModelSpec {
        &self.model
    }

    pub fn representatives(&self) -> &[Representative] {
        &self.reps
    }

    pub fn twist_class(&self) -> QZClass {
        self.twist
    }

    /// Whether g is a constant, so the geometric class vanishes.
    pub fn is_constant(&self) -> bool {
        self.reps[0].is_constant()
    }

    /// The twisted torsor: fibre classes at degree-1 points shift by `class`.
    pub fn twist(&self, class: QZClass) -> Result<Self> {
        if !self.n.is_multiple_of(class.denominator()) {
            return Err(Error::Domain(format!("twist class {class} does not have order dividing {}", self.n)));
        }
        let mut t = self.clone();
        t.twist = t.twist + class;
        Ok(t)
    }

    /// Variables the representatives involve; enumeration must not collapse them.
    pub fn keep_vars(&self) -> Vec<usize> {
        let mut s = BTreeSet::new();
        for r in &self.reps {
            s.extend(r.involved());
        }
        s.into_iter().collect()
    }

    /// Class in (1/n)Z/Z of the fibre over a smooth point.
    pub fn fibre_class(&self, point: &FibrePoint) -> Result<QZClass> {
        if !point.is_smooth() {
            return Err(Error::SingularReduction(point.to_string()));
        }
        let field = point.field();
        let q = field.order();
        if !(q - 1).is_multiple_of(self.n) {
            return Err(Error::UnsupportedCharacter { n: self.n, q });
        }
        CompiledTorsor::new(self, field)
            .class(&point.raw())
            .ok_or_else(|| Error::IndeterminateAtPoint(point.to_string()))
    }

    /// Fibre classes over every smooth F_{p^k}-stratum (None where indeterminate).
    pub fn classes(&self, k: u32) -> Result<ClassTable> {
        let e = enumerate_strata(&self.model, k, true, &self.keep_vars(), DEFAULT_BUDGET)?;
        let q = e.field.order();
        if (q - 1) % self.n != 0 {
            return Err(Error::UnsupportedCharacter { n: self.n, q });
        }
        let ev = CompiledTorsor::new(self, e.field);
        let classes = e.strata.iter().map(|s| ev.class(&s.point.raw())).collect();
        Ok(ClassTable { k, strata: e.strata, classes, skipped_off_chart: e.skipped_off_chart })
    }

    /// F_{p^k}-points of the (twisted) torsor over determinate smooth base points.
    pub fn count_twist_points(&self, k: u32) -> Result<TwistCount> {
        let table = self.classes(k)?;
        let mut count = TwistCount { points: 0, determinate_base: 0, indeterminate_base: 0, skipped_off_chart: table.skipped_off_chart };
        for (s, c) in table.strata.iter().zip(&table.classes) {
            match c {
                Some(c) => {
                    count.determinate_base += s.multiplicity;
                    if c.is_zero() {
                        count.points += self.n as u128 * s.multiplicity;
                    }
                }
                None => count.indeterminate_base += s.multiplicity,
            }
        }
        Ok(count)
    }

    /// Looks for two points of one degree k <= max_degree with different classes.
    pub fn nonconstancy_witness(&self, max_degree: u32) -> Result<Witness> {
        for k in 1..=max_degree {
            let q = self.model.prime().pow(k);
            if (q - 1) % self.n != 0 {
                continue;
            }
            let table = self.classes(k)?;
            let mut first: Option<(usize, QZClass)> = None;
            for (i, c) in table.classes.iter().enumerate() {
                let Some(c) = *c else { continue };
                match first {
                    None => first = Some((i, c)),
                    Some((j, c0)) if c0 != c => {
                        return Ok(Witness::Nonconstant {
                            degree: k,
                            first: (table.strata[j].point.clone(), c0),
                            second: (table.strata[i].point.clone(), c),
                        })
                    }
                    _ => {}
                }
            }
        }
        Ok(Witness::Inconclusive)
    }
}

impl fmt::Display for KummerTorsor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T^{} = {}", self.n, self.reps[0])?;
        if !self.twist.is_zero() {
            write!(f, " twisted by {}", self.twist)?;
        }
        Ok(())
    }
}

/// Fibre classes over the smooth strata of one field.
#[derive(Clone, Debug)]
pub struct ClassTable {
    pub k: u32,
    pub strata: Vec<Stratum>,
    pub classes: Vec<Option<QZClass>>,
    pub skipped_off_chart: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistCount {
    pub points: u128,
    pub determinate_base: u128,
    pub indeterminate_base: u128,
    pub skipped_off_chart: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Nonconstant { degree: u32, first: (FibrePoint, QZClass), second: (FibrePoint, QZClass) },
    Inconclusive,
}

/// Representatives compiled for evaluation over one field.
pub(crate) struct CompiledTorsor {
    field: &'static FiniteField,
    n: u64,
    twist_shift: QZClass,
    reps: Vec<(u32, Vec<(CompiledPoly, u64)>)>,
}

impl CompiledTorsor {
    pub(crate) fn new(t: &KummerTorsor, field: &'static FiniteField) -> Self {
        let reps = t
            .reps
            .iter()
            .map(|r| {
                let c = field.from_i64(r.constant as i64).index();
                // guards enter with exponent 0: they only veto the representative
                let fs = r
                    .factors
                    .iter()
                    .map(|(f, e)| (CompiledPoly::from_int(f, field), *e))
                    .chain(r.guards.iter().map(|g| (CompiledPoly::from_int(g, field), 0)))
                    .collect();
                (c, fs)
            })
            .collect();
        CompiledTorsor { field, n: t.n, twist_shift: t.twist.times(field.degree() as i128), reps }
    }

    pub(crate) fn class(&self, pt: &[u32]) -> Option<QZClass> {
        let f = self.field;
        'reps: for (c, factors) in &self.reps {
            let mut v = *c;
            for (poly, e) in factors {
                let x = poly.eval_once(pt);
                if x == 0 {
                    continue 'reps;
                }
                v = f.mul_raw(v, f.pow_raw(x, *e));
            }
            let chi = f.power_residue_character(v, self.n).expect("n divides q - 1");
            return Some(chi + self.twist_shift);
        }
        None
    }
}
