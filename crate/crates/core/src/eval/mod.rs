//! Local invariants of symbol algebras at p-adic points, computed on the
//! special fibre.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{legendre, FiniteField, QZClass};
use crate::error::{Error, Result};
use crate::model::{enumerate_strata, FibreEvaluator, FibrePoint, ModelSpec, DEFAULT_BUDGET};
use crate::torsor::{rational_unit_residue, rational_valuation, CompiledTorsor, KummerTorsor, SymbolAlgebra, Witness};

/// Quadratic Hilbert symbol `(a, b)_p` for an odd prime p.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, p: u64) -> Result<i8> {
    if p == 2 {
        return Err(Error::Unsupported("Hilbert symbol at p = 2".into()));
    }
    if a.is_zero() || b.is_zero() {
        return Err(Error::Domain("Hilbert symbol needs nonzero entries".into()));
    }
    let (alpha, beta) = (rational_valuation(a, p), rational_valuation(b, p));
    let (u, v) = (rational_unit_residue(a, p) as i128, rational_unit_residue(b, p) as i128);
    let mut s: i8 = 1;
    if (alpha * beta).rem_euclid(2) == 1 && (p - 1) / 2 % 2 == 1 {
        s = -s;
    }
    if beta.rem_euclid(2) == 1 {
        s *= legendre(u, p);
    }
    if alpha.rem_euclid(2) == 1 {
        s *= legendre(v, p);
    }
    Ok(s)
}

/// The Hilbert symbol as an invariant in (1/2)Z/Z.
pub fn hilbert_invariant(a: &BigRational, b: &BigRational, p: u64) -> Result<QZClass> {
    Ok(if hilbert_symbol(a, b, p)? == 1 { QZClass::ZERO } else { QZClass::half() })
}

/// A point of the generic fibre over Q_p with primitive integer coordinates,
/// either an exact solution or a solution mod p^m with smooth reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicPoint {
    coords: Vec<BigInt>,
    precision: Option<u32>,
}

impl PadicPoint {
    /// An exact integer solution of the model equations.
    pub fn exact(model: &ModelSpec, coords: Vec<BigInt>) -> Result<Self> {
        check_primitive(model, &coords)?;
        for e in model.equations() {
            if !e.evaluate(&coords)?.is_zero() {
                return Err(Error::Domain(format!("{} is not a solution of {e}", show(&coords))));
            }
        }
        Ok(PadicPoint { coords, precision: None })
    }

    /// A solution mod p^m (m >= 2); Hensel's lemma applies because the
    /// reduction is required to be smooth on the fibre.
    pub fn approximate(model: &ModelSpec, coords: Vec<BigInt>, precision: u32) -> Result<Self> {
        if precision < 2 {
            return Err(Error::Domain("precision must be at least 2".into()));
        }
        check_primitive(model, &coords)?;
        let pm = BigInt::from(model.prime()).pow(precision);
        for e in model.equations() {
            if !e.evaluate(&coords)?.mod_floor(&pm).is_zero() {
                return Err(Error::Domain(format!("{} does not solve {e} mod p^{precision}", show(&coords))));
            }
        }
        let pt = PadicPoint { coords, precision: Some(precision) };
        let red = pt.reduction(model)?;
        if !red.is_smooth() {
            return Err(Error::SingularReduction(red.to_string()));
        }
        Ok(pt)
    }

    /// Hensel lift of a smooth F_p-point of a hypersurface fibre to precision
    /// m. `shift` (added times p to the initial lift) selects among lifts.
    pub fn lift(model: &ModelSpec, point: &FibrePoint, precision: u32, shift: &[BigInt]) -> Result<Self> {
        if !model.is_hypersurface() {
            return Err(Error::Unsupported("Hensel lifting is implemented for hypersurfaces only".into()));
        }
        if !point.is_smooth() {
            return Err(Error::SingularReduction(point.to_string()));
        }
        let p = BigInt::from(model.prime());
        let pm = p.pow(precision.max(2));
        let mut x = point.integer_lift()?;
        for (xi, s) in x.iter_mut().zip(shift) {
            *xi = (&*xi + s * &p).mod_floor(&pm);
        }
        let f = &model.equations()[0];
        let grad = f.gradient();
        let i = (0..x.len())
            .find(|&i| !grad[i].evaluate(&x).map(|v| v.mod_floor(&p).is_zero()).unwrap_or(true))
            .ok_or_else(|| Error::SingularReduction(point.to_string()))?;
        for _ in 0..=2 * precision {
            let fx = f.evaluate(&x)?.mod_floor(&pm);
            if fx.is_zero() {
                return PadicPoint::approximate(model, x, precision.max(2));
            }
            let d = grad[i].evaluate(&x)?;
            let dinv = d.extended_gcd(&pm).x;
            x[i] = (&x[i] - fx * dinv).mod_floor(&pm);
        }
        Err(Error::Domain(format!("Hensel iteration did not converge at {point}")))
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// `None` for an exact solution.
    pub fn precision(&self) -> Option<u32> {
        self.precision
    }

    /// Reduction mod p as a fibre point (prime field), with its smoothness.
    pub fn reduction(&self, model: &ModelSpec) -> Result<FibrePoint> {
        let field = FiniteField::get(model.prime(), 1)?;
        let raw: Vec<u32> = self.coords.iter().map(|c| field.from_bigint(c).index()).collect();
        let mut ev = FibreEvaluator::new(model, field);
        let smooth = ev.smooth_at(&raw);
        FibrePoint::new(raw.iter().map(|&r| field.elem(r)).collect(), model.ambient().weights(), smooth)
    }
}

impl fmt::Display for PadicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", show(&self.coords))?;
        if let Some(m) = self.precision {
            write!(f, " + O(p^{m})")?;
        }
        Ok(())
    }
}

fn show(c: &[BigInt]) -> String {
    let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn check_primitive(model: &ModelSpec, coords: &[BigInt]) -> Result<()> {
    if coords.len() != model.vars().len() {
        return Err(Error::Domain("point arity does not match the ambient space".into()));
    }
    let p = BigInt::from(model.prime());
    if coords.iter().all(|c| c.mod_floor(&p).is_zero()) {
        return Err(Error::Domain(format!("{} is not primitive at p", show(coords))));
    }
    Ok(())
}

/// Invariant of the algebra at a point, read off from the residue torsor at
/// the reduction of the point.
pub fn evaluate_algebra(algebra: &SymbolAlgebra, point: &PadicPoint, model: &ModelSpec) -> Result<QZClass> {
    let torsor = KummerTorsor::residue(algebra, model)?;
    evaluate_with_torsor(&torsor, point)
}

/// As `evaluate_algebra`, for a residue torsor that may carry alternative
/// representatives.
pub fn evaluate_with_torsor(torsor: &KummerTorsor, point: &PadicPoint) -> Result<QZClass> {
    let red = point.reduction(torsor.model())?;
    if !red.is_smooth() {
        return Err(Error::SingularReduction(red.to_string()));
    }
    torsor.fibre_class(&red)
}

/// The invariant `(a, b)_n` of two p-adic numbers via the tame symbol, for
/// `n | p - 1`. For n = 2 it agrees with the Hilbert symbol.
pub fn tame_symbol(a: &BigRational, b: &BigRational, n: u64, p: u64) -> Result<QZClass> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Domain("tame symbol needs nonzero entries".into()));
    }
    let field = FiniteField::get(p, 1)?;
    let (alpha, beta) = (rational_valuation(a, p), rational_valuation(b, p));
    let u = field.from_i64(rational_unit_residue(a, p) as i64);
    let v = field.from_i64(rational_unit_residue(b, p) as i64);
    let sign = if (alpha * beta).rem_euclid(2) == 1 { -field.one() } else { field.one() };
    let pw = |x: crate::arith::FqElem, e: i64| if e >= 0 { x.pow(e as u64) } else { x.inv().expect("unit").pow((-e) as u64) };
    (sign * pw(u, beta) * pw(v, -alpha)).character(n)
}

/// One evaluated stratum of an image report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluatedPoint {
    pub point: FibrePoint,
    pub multiplicity: u128,
    /// `None` where the residue is indeterminate.
    pub class: Option<QZClass>,
}

/// Image of the evaluation map on points whose reduction is a smooth
/// F_{p^k}-point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalReport {
    pub k: u32,
    pub points: Vec<EvaluatedPoint>,
    pub image: BTreeSet<QZClass>,
    pub constant: bool,
    /// First determinate point in enumeration order.
    pub normalization_point: Option<FibrePoint>,
    pub indeterminate: u128,
    pub skipped_off_chart: u128,
}

impl EvalReport {
    /// Image after normalizing so the normalization point evaluates to 0.
    pub fn normalized_image(&self) -> BTreeSet<QZClass> {
        let base = self.points.iter().find_map(|p| p.class).unwrap_or(QZClass::ZERO);
        self.image.iter().map(|&c| c - base).collect()
    }

    pub fn determinate_points(&self) -> u128 {
        self.points.iter().filter(|p| p.class.is_some()).map(|p| p.multiplicity).sum()
    }
}

pub fn evaluation_image(algebra: &SymbolAlgebra, model: &ModelSpec, k: u32) -> Result<EvalReport> {
    let torsor = KummerTorsor::residue(algebra, model)?;
    torsor_image(&torsor, k)
}

pub fn torsor_image(torsor: &KummerTorsor, k: u32) -> Result<EvalReport> {
    let table = torsor.classes(k)?;
    let mut report = EvalReport {
        k,
        points: Vec::with_capacity(table.strata.len()),
        image: BTreeSet::new(),
        constant: false,
        normalization_point: None,
        indeterminate: 0,
        skipped_off_chart: table.skipped_off_chart,
    };
    for (s, c) in table.strata.into_iter().zip(table.classes) {
        match c {
            Some(c) => {
                report.image.insert(c);
                if report.normalization_point.is_none() {
                    report.normalization_point = Some(s.point.clone());
                }
            }
            None => report.indeterminate += s.multiplicity,
        }
        report.points.push(EvaluatedPoint { point: s.point, multiplicity: s.multiplicity, class: c });
    }
    report.constant = report.image.len() == 1;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constancy {
    /// The residue is a constant function, so the geometric class vanishes.
    ConstantCertified,
    NonconstantWitness { degree: u32, first: (FibrePoint, QZClass), second: (FibrePoint, QZClass) },
    Unknown,
}

pub fn is_constant_with_trivial_tau(algebra: &SymbolAlgebra, model: &ModelSpec, max_degree: u32) -> Result<Constancy> {
    let torsor = KummerTorsor::residue(algebra, model)?;
    if torsor.is_constant() {
        return Ok(Constancy::ConstantCertified);
    }
    Ok(match torsor.nonconstancy_witness(max_degree)? {
        Witness::Nonconstant { degree, first, second } => Constancy::NonconstantWitness { degree, first, second },
        Witness::Inconclusive => Constancy::Unknown,
    })
}

/// Invariant tuples of several algebras over the smooth F_{p^k}-points where
/// every residue is determinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointImage {
    pub k: u32,
    pub orders: Vec<u64>,
    pub tuples: BTreeSet<Vec<QZClass>>,
    pub normalization_point: Option<FibrePoint>,
    pub determinate_points: u128,
}

impl JointImage {
    /// Size of the full product of the (1/n_i)Z/Z.
    pub fn target_size(&self) -> u128 {
        self.orders.iter().map(|&n| n as u128).product()
    }

    /// Whether the difference tuples against the normalization point cover
    /// the full product; translation makes this a size comparison.
    pub fn is_surjective(&self) -> bool {
        self.tuples.len() as u128 == self.target_size()
    }
}

pub fn joint_image(algebras: &[SymbolAlgebra], model: &ModelSpec, k: u32) -> Result<JointImage> {
    let torsors = algebras.iter().map(|a| KummerTorsor::residue(a, model)).collect::<Result<Vec<_>>>()?;
    joint_torsor_image(&torsors, model, k)
}

pub fn joint_torsor_image(torsors: &[KummerTorsor], model: &ModelSpec, k: u32) -> Result<JointImage> {
    let orders: Vec<u64> = torsors.iter().map(|t| t.n()).collect();
    let mut out = JointImage { k, orders, tuples: BTreeSet::new(), normalization_point: None, determinate_points: 0 };
    if torsors.is_empty() {
        out.tuples.insert(Vec::new());
        return Ok(out);
    }
    let keep: BTreeSet<usize> = torsors.iter().flat_map(|t| t.keep_vars()).collect();
    let keep: Vec<usize> = keep.into_iter().collect();
    let e = enumerate_strata(model, k, true, &keep, DEFAULT_BUDGET)?;
    let q = e.field.order();
    if let Some(t) = torsors.iter().find(|t| (q - 1) % t.n() != 0) {
        return Err(Error::UnsupportedCharacter { n: t.n(), q });
    }
    let compiled: Vec<CompiledTorsor> = torsors.iter().map(|t| CompiledTorsor::new(t, e.field)).collect();
    for s in &e.strata {
        let raw = s.point.raw();
        let tuple: Option<Vec<QZClass>> = compiled.iter().map(|c| c.class(&raw)).collect();
        if let Some(t) = tuple {
            if out.normalization_point.is_none() {
                out.normalization_point = Some(s.point.clone());
            }
            out.determinate_points += s.multiplicity;
            out.tuples.insert(t);
        }
    }
    Ok(out)
}

/// Whether the joint evaluation at F_{p^k}-reduction points hits every tuple.
pub fn prolific_check(algebras: &[SymbolAlgebra], model: &ModelSpec, k: u32) -> Result<bool> {
    let image = joint_image(algebras, model, k)?;
    if !algebras.is_empty() && image.determinate_points == 0 {
        return Err(Error::Empty);
    }
    Ok(image.is_surjective())
}

/// Invariants of degree-0 zero-cycles supported on closed points of degree
/// at most `max_degree` with smooth determinate reduction.
///
/// A closed point x of degree d contributes the fibre class c_x computed over
/// F_{p^d} (corestriction keeps invariants). The degree-0 lattice is spanned
/// by `(d_y/g) x - (d_x/g) y`, g = gcd(d_x, d_y), so the image is the cyclic
/// subgroup generated by the corresponding invariants.
pub fn zero_cycle_image(algebra: &SymbolAlgebra, model: &ModelSpec, max_degree: u32) -> Result<BTreeSet<QZClass>> {
    let torsor = KummerTorsor::residue(algebra, model)?;
    let mut seen: BTreeSet<(u32, QZClass)> = BTreeSet::new();
    for d in 1..=max_degree {
        let q = model.prime().pow(d);
        if (q - 1) % torsor.n() != 0 {
            continue;
        }
        let table = torsor.classes(d)?;
        for (s, c) in table.strata.iter().zip(&table.classes) {
            let Some(c) = *c else { continue };
            if s.point.field_degree() == d || (s.free_dims > 0 && d > 1) {
                seen.insert((d, c));
            }
        }
    }
    let seen: Vec<(u32, QZClass)> = seen.into_iter().collect();
    let mut order = 1u64;
    for (i, &(dx, cx)) in seen.iter().enumerate() {
        for &(dy, cy) in &seen[i..] {
            let g = dx.gcd(&dy) as i128;
            let v = cx.times(dy as i128 / g) - cy.times(dx as i128 / g);
            order = order.lcm(&v.order());
        }
    }
    Ok((0..order).map(|j| QZClass::new(j as i128, order)).collect())
}
