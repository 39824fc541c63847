//! Checks shared by the acceptance harness and the property tests. Each check
//! returns `Err` with a description of the first counterexample.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use brauer_core::arith::{is_linearly_independent, product_characters_surjective, FinAbElement, FiniteField, QZClass};
use brauer_core::eval::{evaluate_algebra, hilbert_invariant, PadicPoint};
use brauer_core::model::{enumerate_strata, AmbientSpace, ModelSpec, DEFAULT_BUDGET};
use brauer_core::modelfile::ModelFile;
use brauer_core::numbers::{is_prime, valuation};
use brauer_core::poly::IntPoly;
use brauer_core::sing::BrauerTable;
use brauer_core::torsor::{KummerTorsor, Representative, SymbolAlgebra};
use brauer_core::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

pub type Check = Result<String, String>;

pub fn load_model(name: &str) -> ModelFile {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models").join(name);
    ModelFile::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------------------
// characters

/// Prime powers q = p^k <= bound with p odd or even, in increasing order.
pub fn prime_powers(bound: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in 2..=bound {
        if !is_prime(p as u128) {
            continue;
        }
        let mut q = p;
        let mut k = 1;
        while q <= bound {
            out.push((p, k));
            q *= p;
            k += 1;
        }
    }
    out.sort_by_key(|&(p, k)| p.pow(k));
    out
}

/// For every n | q - 1 (n >= 2): the character takes values in (1/n)Z/Z, is
/// multiplicative, hits every class, and vanishes exactly on n-th powers.
///
/// Multiplicativity is checked as `chi(x g) = chi(x) + chi(g)` for all x and
/// the field generator g, which implies `chi(xy) = chi(x) + chi(y)` for all
/// pairs by induction on the discrete log of y.
pub fn character_laws(p: u64, k: u32) -> Result<(), String> {
    let field = FiniteField::get(p, k).map_err(|e| e.to_string())?;
    let q = field.order();
    let g = field.generator();
    let nonzero: Vec<_> = field.elements().filter(|x| !x.is_zero()).collect();
    for n in (2..q).filter(|n| (q - 1) % n == 0) {
        let chi = |x| brauer_core::arith::power_residue_character(x, n).map_err(|e| e.to_string());
        let cg = chi(g)?;
        ensure(cg.order() == n, || format!("F_{q}: chi_{n}(generator) = {cg} has order != {n}"))?;
        let powers: BTreeSet<u32> = nonzero.iter().map(|x| x.pow(n).index()).collect();
        for &x in &nonzero {
            let cx = chi(x)?;
            ensure(n % cx.denominator() == 0, || format!("F_{q}: chi_{n}({x}) = {cx} outside (1/{n})Z/Z"))?;
            let cxg = chi(x * g)?;
            ensure(cxg == cx + cg, || format!("F_{q}: chi_{n}({x} * g) = {cxg} != {cx} + {cg}"))?;
            ensure(cx.is_zero() == powers.contains(&x.index()), || {
                format!("F_{q}: chi_{n}({x}) = {cx} but n-th power: {}", powers.contains(&x.index()))
            })?;
        }
    }
    if q > 2 {
        ensure(
            matches!(field.one().character(q), Err(Error::UnsupportedCharacter { .. })),
            || format!("F_{q}: character of order {q} was accepted"),
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// torsors

/// A random plane cubic or quartic over a small prime with a random Kummer
/// torsor of order n | p - 1.
#[derive(Clone, Debug)]
pub struct TorsorCase {
    pub torsor: KummerTorsor,
    pub description: String,
}

const TORSOR_PRIMES: [(u64, &[u64]); 4] = [(7, &[2, 3, 6]), (13, &[2, 3, 4]), (11, &[2, 5]), (19, &[2, 3])];

pub fn random_torsor_case(rng: &mut impl Rng) -> TorsorCase {
    let (p, ns) = TORSOR_PRIMES[rng.gen_range(0..TORSOR_PRIMES.len())];
    let n = ns[rng.gen_range(0..ns.len())];
    let amb = AmbientSpace::projective(2);
    let c: Vec<i64> = (0..4).map(|_| rng.gen_range(1..p as i64)).collect();
    let eq = if rng.gen_bool(0.5) {
        format!("{}*X0^3 + {}*X1^3 + {}*X2^3 + {}*X0*X1*X2", c[0], c[1], c[2], c[3])
    } else {
        format!("{}*X0^4 + {}*X1^4 + {}*X2^4 + {}*X0^2*X1*X2", c[0], c[1], c[2], c[3])
    };
    let model = ModelSpec::parse(amb, &[eq.as_str()], p, "random").expect("model");
    let vars = model.vars().clone();
    let mut factors = Vec::new();
    let mut degree = 0;
    for _ in 0..rng.gen_range(1..=2) {
        let l: Vec<i64> = (0..3).map(|_| rng.gen_range(0..p as i64)).collect();
        if l.iter().all(|&x| x == 0) {
            continue;
        }
        let e = rng.gen_range(1..n.max(2));
        let form = IntPoly::parse(&format!("{}*X0 + {}*X1 + {}*X2", l[0], l[1], l[2]), &vars).expect("form");
        degree += e;
        factors.push((form, e));
    }
    let fix = (n - degree % n) % n;
    if fix > 0 {
        factors.push((IntPoly::parse("X2", &vars).unwrap(), fix));
    }
    let constant = rng.gen_range(1..p);
    let rep = Representative::new(constant, factors);
    let description = format!("{rep} (n = {n}) on {eq} over F_{p}");
    let torsor = KummerTorsor::new(n, &model, rep).expect("torsor");
    TorsorCase { torsor, description }
}

/// Extension degrees k <= 3 with p^k <= 400, which keeps enumeration of
/// the plane curves small.
pub fn small_degrees(case: &TorsorCase) -> Vec<u32> {
    let p = case.torsor.model().prime();
    (1..=3).filter(|&k| p.pow(k) <= 400).collect()
}

/// `sum_c #twist(T, c)(F_{p^k}) = n * #determinate base points`, for k prime
/// to n (the twist by c in H^1(F_p) restricts to k*c over F_{p^k}).
pub fn twist_partition(case: &TorsorCase, k: u32) -> Result<(), String> {
    let t = &case.torsor;
    let n = t.n();
    if num_integer::gcd(k as u64, n) != 1 {
        return Ok(());
    }
    let mut total = 0u128;
    let mut base = None;
    for j in 0..n {
        let c = t.twist(QZClass::new(j as i128, n)).map_err(|e| e.to_string())?;
        let cnt = c.count_twist_points(k).map_err(|e| e.to_string())?;
        base.get_or_insert(cnt.determinate_base);
        total += cnt.points;
    }
    let base = base.unwrap_or(0);
    ensure(total == n as u128 * base, || format!("{}: k = {k}: sum {total} != {n} * {base}", case.description))
}

/// Fibre classes of `twist(T, c)` at F_{p^k}-points are those of T shifted by k c.
pub fn twist_shift(case: &TorsorCase, k: u32, j: u64) -> Result<(), String> {
    let t = &case.torsor;
    let c = QZClass::new(j as i128, t.n());
    let tw = t.twist(c).map_err(|e| e.to_string())?;
    let (a, b) = (t.classes(k).map_err(|e| e.to_string())?, tw.classes(k).map_err(|e| e.to_string())?);
    ensure(a.strata.len() == b.strata.len(), || "strata differ".into())?;
    for ((s, x), y) in a.strata.iter().zip(&a.classes).zip(&b.classes) {
        match (x, y) {
            (Some(x), Some(y)) => ensure(*y == *x + c.times(k as i128), || {
                format!("{}: at {} class {x} twisted by {c} gives {y}", case.description, s.point)
            })?,
            (None, None) => {}
            _ => return Err(format!("{}: determinacy changed by twisting at {}", case.description, s.point)),
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// algebras on cone models

/// `X0^4 + b X1^4 + c X2^4 + p d X3^4` with an algebra `(a, q(X0, X1, X2) / X0^2)`.
#[derive(Clone, Debug)]
pub struct ConeCase {
    pub model: ModelSpec,
    pub algebra: SymbolAlgebra,
    pub quadric: String,
    pub a: BigInt,
}

pub fn random_cone_case(rng: &mut impl Rng, p: u64) -> ConeCase {
    let unit = |rng: &mut dyn rand::RngCore| rng.gen_range(1..p as i64) * if rng.gen_bool(0.5) { -1 } else { 1 };
    let (b, c, d) = (unit(rng), unit(rng), unit(rng));
    let eq = format!("X0^4 + {b}*X1^4 + {c}*X2^4 + {p}*{d}*X3^4");
    let model = ModelSpec::parse(AmbientSpace::projective(3), &[eq.as_str()], p, "cone").expect("cone model");
    let q: Vec<i64> = (0..6).map(|_| rng.gen_range(-30..30)).collect();
    let content = if rng.gen_bool(0.25) { format!("{p}*") } else { String::new() };
    let quadric = format!(
        "{content}({}*X0^2 + {}*X1^2 + {}*X2^2 + {}*X0*X1 + {}*X1*X2 + {}*X0*X2 + X1^2)",
        q[0], q[1], q[2], q[3], q[4], q[5]
    );
    let alpha = rng.gen_range(0..3u32);
    let a = BigInt::from(unit(rng)) * BigInt::from(p).pow(alpha);
    let algebra = SymbolAlgebra::parse(2, &a.to_string(), &quadric, "X0^2", model.vars()).expect("algebra");
    ConeCase { model, algebra, quadric, a }
}

/// Smooth F_p-points of the fibre (the cone vertex excluded).
pub fn smooth_points(model: &ModelSpec) -> Vec<brauer_core::model::FibrePoint> {
    let all: Vec<usize> = (0..model.vars().len()).collect();
    enumerate_strata(model, 1, true, &all, DEFAULT_BUDGET).expect("enumerate").strata.into_iter().map(|s| s.point).collect()
}

/// Outcome of one oracle comparison.
pub enum Oracle {
    Agree,
    /// The residue is indeterminate at the reduction, or the approximation is
    /// too coarse to pin down f(P) up to squares.
    Skipped,
}

/// Compares the residue-torsor evaluation with the Hilbert symbol
/// `(a, f(P))_p` at a Hensel lift of `point`.
pub fn oracle_at(case: &ConeCase, point: &brauer_core::model::FibrePoint, shift: &[BigInt]) -> Result<Oracle, String> {
    let p = case.model.prime();
    let prec = 10;
    let pt = PadicPoint::lift(&case.model, point, prec, shift).map_err(|e| e.to_string())?;
    let v = match evaluate_algebra(&case.algebra, &pt, &case.model) {
        Ok(v) => v,
        Err(Error::IndeterminateAtPoint(_)) => return Ok(Oracle::Skipped),
        Err(e) => return Err(e.to_string()),
    };
    let num = case.algebra.f_num().evaluate(pt.coords()).map_err(|e| e.to_string())?;
    let den = case.algebra.f_den().evaluate(pt.coords()).map_err(|e| e.to_string())?;
    // f(P) is known mod p^prec; its square class needs v(f) + 3 <= prec
    if num == BigInt::from(0) || den == BigInt::from(0) || valuation(&num, p) + 3 > prec || valuation(&den, p) + 3 > prec {
        return Ok(Oracle::Skipped);
    }
    let fv = BigRational::new(num, den);
    let h = hilbert_invariant(case.algebra.a(), &fv, p).map_err(|e| e.to_string())?;
    ensure(h == v, || {
        format!("({}, {} / X0^2) at {} over p = {p}: residue gives {v}, Hilbert symbol gives {h}", case.a, case.quadric, point)
    })?;
    Ok(Oracle::Agree)
}

/// Two different lifts of the same smooth reduction point give the same
/// invariant.
pub fn reduction_factoring(case: &ConeCase, point: &brauer_core::model::FibrePoint, shift: &[BigInt]) -> Result<bool, String> {
    let a = PadicPoint::lift(&case.model, point, 6, &[]).map_err(|e| e.to_string())?;
    let b = PadicPoint::lift(&case.model, point, 6, shift).map_err(|e| e.to_string())?;
    ensure(a.reduction(&case.model).ok().as_ref() == Some(point), || "lift does not reduce to the point".into())?;
    ensure(b.reduction(&case.model).ok().as_ref() == Some(point), || "lift does not reduce to the point".into())?;
    match (evaluate_algebra(&case.algebra, &a, &case.model), evaluate_algebra(&case.algebra, &b, &case.model)) {
        (Ok(x), Ok(y)) => {
            ensure(x == y, || format!("lifts {a} and {b} of {point} give {x} and {y}"))?;
            Ok(true)
        }
        (Err(Error::IndeterminateAtPoint(_)), Err(Error::IndeterminateAtPoint(_))) => Ok(false),
        (x, y) => Err(format!("lifts of {point} disagree: {x:?} vs {y:?}")),
    }
}

/// The algebra `(a u^2, f h^2 / h'^2)` defines the same class as `(a, f)`;
/// its residue torsor must give the same fibre classes wherever both are
/// determinate. Returns the number of points compared.
pub fn representative_independence(case: &ConeCase, rng: &mut impl Rng) -> Result<usize, String> {
    let p = case.model.prime() as i64;
    let lin = |rng: &mut dyn rand::RngCore| {
        let c: Vec<i64> = (0..3).map(|_| rng.gen_range(-20..20)).collect();
        format!("({}*X0 + {}*X1 + {}*X2 + X0)", c[0], c[1], c[2])
    };
    let (h1, h2) = (lin(rng), lin(rng));
    let u = BigInt::from(rng.gen_range(1..p)) * BigInt::from(p).pow(rng.gen_range(0..2));
    let a2 = &case.a * &u * &u;
    let num = format!("({}) * {h1}^2", case.quadric);
    let den = format!("X0^2 * {h2}^2");
    let alt = SymbolAlgebra::parse(2, &a2.to_string(), &num, &den, case.model.vars()).map_err(|e| e.to_string())?;
    let t1 = KummerTorsor::residue(&case.algebra, &case.model).map_err(|e| e.to_string())?;
    let t2 = match KummerTorsor::residue(&alt, &case.model) {
        Ok(t) => t,
        Err(Error::DegenerateResidue) => return Ok(0),
        Err(e) => return Err(e.to_string()),
    };
    let mut compared = 0;
    for pt in smooth_points(&case.model) {
        if let (Ok(x), Ok(y)) = (t1.fibre_class(&pt), t2.fibre_class(&pt)) {
            ensure(x == y, || format!("{} vs {alt} at {pt}: {x} != {y}", case.algebra))?;
            compared += 1;
        }
    }
    Ok(compared)
}

// ---------------------------------------------------------------------------
// tables and groups

/// `|Br_bar| * |H1| = |Br_nr|` on every resolved row of the shipped table.
pub fn table_exactness() -> Check {
    let mut rows = 0;
    for r in BrauerTable::shipped().rows() {
        if let Some(nr) = &r.br_nr {
            ensure(r.br_bar.order() * r.h1.order() == nr.order(), || {
                format!("degree {} {:?}: {} * {} != {}", r.degree, r.label, r.br_bar, r.h1, nr)
            })?;
            rows += 1;
        }
    }
    ensure(rows > 0, || "no resolved rows".into())?;
    Ok(format!("{rows} resolved rows"))
}

/// Invariant-factor sequences d_1 | d_2 | ... with product at most `bound`.
pub fn abelian_groups(bound: u64) -> Vec<Vec<u64>> {
    fn extend(prefix: &mut Vec<u64>, product: u64, bound: u64, out: &mut Vec<Vec<u64>>) {
        out.push(prefix.clone());
        let start = prefix.last().copied().unwrap_or(2);
        let mut d = start;
        while product * d <= bound {
            if prefix.last().is_none_or(|&l| d % l == 0) {
                prefix.push(d);
                extend(prefix, product * d, bound, out);
                prefix.pop();
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, bound, &mut out);
    out
}

/// For elements b_i of A = prod Z/d_j: the b_i are independent iff the
/// characters chi -> chi(b_i) of the dual group jointly surject onto
/// prod (1/ord b_i)Z/Z.
pub fn independence_vs_surjectivity(group: &[u64], elements: &[Vec<u64>]) -> Result<(), String> {
    let elems: Vec<FinAbElement> = elements
        .iter()
        .map(|e| FinAbElement::new(group.iter().zip(e).map(|(&d, &x)| QZClass::new((x % d) as i128, d)).collect()))
        .collect();
    let size: u64 = group.iter().product();
    // the dual group, identified with A through (c, x) -> sum c_j x_j / d_j
    let mut tables = vec![Vec::with_capacity(size as usize); elems.len()];
    for idx in 0..size {
        let mut rest = idx;
        let chi: Vec<u64> = group
            .iter()
            .map(|&d| {
                let c = rest % d;
                rest /= d;
                c
            })
            .collect();
        for (table, e) in tables.iter_mut().zip(elements) {
            let v = group
                .iter()
                .zip(&chi)
                .zip(e)
                .fold(QZClass::ZERO, |acc, ((&d, &c), &x)| acc + QZClass::new((c * (x % d)) as i128, d));
            table.push(v);
        }
    }
    let indep = is_linearly_independent(&elems).map_err(|e| e.to_string())?;
    let surj = product_characters_surjective(&tables).map_err(|e| e.to_string())?;
    ensure(indep == surj, || format!("group {group:?}, elements {elements:?}: independent {indep}, surjective {surj}"))
}
