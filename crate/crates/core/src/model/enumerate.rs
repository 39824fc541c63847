use crate::arith::linalg::rank_raw;
use crate::arith::FiniteField;
use crate::error::{Error, Result};
use crate::poly::CompiledPoly;

use super::{FibrePoint, ModelSpec};

/// Default cap on the number of candidate coordinate tuples examined.
pub const DEFAULT_BUDGET: u128 = 1 << 26;

/// A set of fibre points sharing one representative.
///
/// When the reduced equations do not involve some variables, the fibre is a
/// cone and every point `(b, t)` with `b` off the vertex locus behaves like
/// `(b, 0)`; the stratum then stands for `q^free_dims` points.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub point: FibrePoint,
    pub multiplicity: u128,
    pub free_dims: u32,
}

/// Result of enumerating the special fibre over one finite field.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub field: &'static FiniteField,
    pub strata: Vec<Stratum>,
    /// Orbits of fibre points with every weight-1 coordinate zero; these lie
    /// off the weight-1 charts and are skipped.
    pub skipped_off_chart: u128,
    pub candidates: u128,
}

impl Enumeration {
    pub fn total(&self) -> u128 {
        self.strata.iter().map(|s| s.multiplicity).sum()
    }

    pub fn smooth_total(&self) -> u128 {
        self.strata.iter().filter(|s| s.point.is_smooth()).map(|s| s.multiplicity).sum()
    }

    pub fn points(&self) -> impl Iterator<Item = &FibrePoint> {
        self.strata.iter().map(|s| &s.point)
    }
}

/// Compiled equations and Jacobian of the special fibre over one field.
pub(crate) struct FibreEvaluator {
    field: &'static FiniteField,
    eqs: Vec<CompiledPoly>,
    grads: Vec<Vec<CompiledPoly>>,
    eq_scratch: Vec<Vec<u32>>,
    grad_scratch: Vec<Vec<Vec<u32>>>,
}

impl FibreEvaluator {
    pub(crate) fn new(model: &ModelSpec, field: &'static FiniteField) -> Self {
        let reduced = model.reduced_equations(field);
        let eqs: Vec<CompiledPoly> = reduced.iter().map(|e| CompiledPoly::new(e, field)).collect();
        let grads: Vec<Vec<CompiledPoly>> = reduced
            .iter()
            .map(|e| e.gradient().iter().map(|g| CompiledPoly::new(g, field)).collect())
            .collect();
        let eq_scratch = eqs.iter().map(|c| c.scratch()).collect();
        let grad_scratch = grads.iter().map(|row| row.iter().map(|c| c.scratch()).collect()).collect();
        FibreEvaluator { field, eqs, grads, eq_scratch, grad_scratch }
    }

    #[inline]
    pub(crate) fn on_fibre(&mut self, pt: &[u32]) -> bool {
        for (e, s) in self.eqs.iter().zip(self.eq_scratch.iter_mut()) {
            if e.eval(pt, s) != 0 {
                return false;
            }
        }
        true
    }

    /// Jacobian criterion: rank equals the number of equations. On a point
    /// with a nonzero weight-1 coordinate the weighted Euler relation makes
    /// the homogeneous Jacobian rank equal to the affine one on that chart.
    pub(crate) fn smooth_at(&mut self, pt: &[u32]) -> bool {
        if self.eqs.is_empty() {
            return true;
        }
        let mut m: Vec<Vec<u32>> = self
            .grads
            .iter()
            .zip(self.grad_scratch.iter_mut())
            .map(|(row, srow)| row.iter().zip(srow.iter_mut()).map(|(g, s)| g.eval(pt, s)).collect())
            .collect();
        if m.len() == 1 {
            return m[0].iter().any(|&x| x != 0);
        }
        rank_raw(self.field, &mut m) == self.eqs.len()
    }
}

/// Calls `f` for every assignment of field elements to `positions`, the
/// other entries of `coords` held fixed.
pub(crate) fn for_each_assignment(q: u32, positions: &[usize], coords: &mut [u32], mut f: impl FnMut(&[u32])) {
    for &i in positions {
        coords[i] = 0;
    }
    loop {
        f(coords);
        let mut j = positions.len();
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            let i = positions[j];
            coords[i] += 1;
            if coords[i] < q {
                break;
            }
            coords[i] = 0;
        }
    }
}

fn proj_size(q: u128, n_vars: usize) -> u128 {
    if n_vars == 0 {
        0
    } else {
        (q.pow(n_vars as u32) - 1) / (q - 1)
    }
}

pub(crate) fn field_for(model: &ModelSpec, k: u32) -> Result<&'static FiniteField> {
    if k == 0 {
        return Err(Error::Domain("extension degree must be at least 1".into()));
    }
    FiniteField::get(model.prime(), k)
}

/// Enumerates F_{p^k}-points of the special fibre.
///
/// Variables outside `keep` that no reduced equation involves are collapsed
/// into cone strata (all-weights-1 ambients only).
pub fn enumerate_strata(
    model: &ModelSpec,
    k: u32,
    smooth_only: bool,
    keep: &[usize],
    budget: u128,
) -> Result<Enumeration> {
    let field = field_for(model, k)?;
    let q = field.order() as u32;
    let qq = q as u128;
    let n = model.vars().len();
    let weights = model.ambient().weights().to_vec();
    let mut ev = FibreEvaluator::new(model, field);
    let mut strata = Vec::new();
    let push = |ev: &mut FibreEvaluator, pt: &[u32], mult: u128, free_dims: u32, strata: &mut Vec<Stratum>| {
        let smooth = ev.smooth_at(pt);
        if smooth_only && !smooth {
            return;
        }
        let coords = pt.iter().map(|&v| field.elem(v)).collect();
        strata.push(Stratum { point: FibrePoint::from_normalized(coords, smooth), multiplicity: mult, free_dims });
    };

    if model.ambient().is_weighted() {
        let ones: Vec<usize> = (0..n).filter(|&i| weights[i] == 1).collect();
        let (a, b) = (ones[0], ones[1]);
        let rest: Vec<usize> = (0..n).filter(|&i| weights[i] != 1).collect();
        let candidates = qq.pow(3) + 2 * qq.pow(2);
        if candidates > budget {
            return Err(Error::BudgetExceeded { needed: candidates, budget });
        }
        let mut coords = vec![0u32; n];
        coords[a] = 1;
        let chart1: Vec<usize> = std::iter::once(b).chain(rest.iter().copied()).collect();
        for_each_assignment(q, &chart1, &mut coords, |pt| {
            if ev.on_fibre(pt) {
                push(&mut ev, pt, 1, 0, &mut strata);
            }
        });
        coords[a] = 0;
        coords[b] = 1;
        for_each_assignment(q, &rest, &mut coords, |pt| {
            if ev.on_fibre(pt) {
                push(&mut ev, pt, 1, 0, &mut strata);
            }
        });
        // off-chart orbits: count solutions by stabilizer size
        coords[b] = 0;
        let mut by_orbit_size = std::collections::BTreeMap::<u128, u128>::new();
        for_each_assignment(q, &rest, &mut coords, |pt| {
            if rest.iter().all(|&i| pt[i] == 0) || !ev.on_fibre(pt) {
                return;
            }
            let g = rest.iter().filter(|&&i| pt[i] != 0).fold(0u128, |g, &i| gcd(g, weights[i] as u128));
            let stab = gcd(g, qq - 1);
            *by_orbit_size.entry((qq - 1) / stab).or_default() += 1;
        });
        let skipped = by_orbit_size.iter().map(|(size, count)| count / size).sum();
        return Ok(Enumeration { field, strata, skipped_off_chart: skipped, candidates });
    }

    let free: Vec<usize> = model.free_variables().into_iter().filter(|i| !keep.contains(i)).collect();
    let base: Vec<usize> = (0..n).filter(|i| !free.contains(i)).collect();
    let (cone_mult, cone_dims) = if base.is_empty() { (1, 0) } else { (qq.pow(free.len() as u32), free.len() as u32) };
    let candidates = proj_size(qq, base.len()) + if base.is_empty() { proj_size(qq, n) } else { proj_size(qq, free.len()) };
    if candidates > budget {
        return Err(Error::BudgetExceeded { needed: candidates, budget });
    }
    let mut coords = vec![0u32; n];
    let mut sweep = |positions: &[usize], mult: u128, dims: u32, coords: &mut Vec<u32>, strata: &mut Vec<Stratum>| {
        for lead in 0..positions.len() {
            coords.iter_mut().for_each(|c| *c = 0);
            coords[positions[lead]] = 1;
            for_each_assignment(q, &positions[lead + 1..], coords, |pt| {
                if ev.on_fibre(pt) {
                    push(&mut ev, pt, mult, dims, strata);
                }
            });
        }
    };
    if base.is_empty() {
        let all: Vec<usize> = (0..n).collect();
        sweep(&all, 1, 0, &mut coords, &mut strata);
    } else {
        sweep(&base, cone_mult, cone_dims, &mut coords, &mut strata);
        sweep(&free, 1, 0, &mut coords, &mut strata);
    }
    Ok(Enumeration { field, strata, skipped_off_chart: 0, candidates })
}

/// Every F_{p^k}-point individually (no cone collapsing).
pub fn enumerate_points(model: &ModelSpec, k: u32, smooth_only: bool) -> Result<Enumeration> {
    let all: Vec<usize> = (0..model.vars().len()).collect();
    enumerate_strata(model, k, smooth_only, &all, DEFAULT_BUDGET)
}

/// Number of F_{p^k}-points of the fibre (on the weight-1 charts).
pub fn count_points(model: &ModelSpec, k: u32, smooth_only: bool) -> Result<u128> {
    Ok(enumerate_strata(model, k, smooth_only, &[], DEFAULT_BUDGET)?.total())
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
