use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::IntPoly;

use super::enumerate::{enumerate_strata, DEFAULT_BUDGET};
use super::{FibrePoint, ModelSpec};

/// A singular point of the special fibre with the degree of its field of definition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPoint {
    pub point: FibrePoint,
    pub field_degree: u32,
}

#[derive(Clone, Debug)]
pub struct SingularSearch {
    /// Points grouped by increasing field degree, in enumeration order.
    pub points: Vec<SingularPoint>,
    /// Number of singular F_{p^k}-points for k = 1..=max_extension.
    pub counts_by_degree: Vec<u128>,
    /// Bezout-style cap on the number of isolated singular points.
    pub bound: u128,
    /// No point of exact degree `max_extension` appeared (requires max_extension >= 2).
    pub certified_complete: bool,
    pub skipped_off_chart: u128,
}

fn bezout_bound(model: &ModelSpec) -> u128 {
    let d = model.degrees().iter().copied().max().unwrap_or(1).max(2) as u128;
    d.pow(model.ambient().dimension() as u32)
}

/// Singular points of the special fibre over F_{p^k}, k <= max_extension.
pub fn find_singular_points(model: &ModelSpec, max_extension: u32) -> Result<SingularSearch> {
    if max_extension == 0 {
        return Err(Error::Domain("max_extension must be at least 1".into()));
    }
    let bound = bezout_bound(model);
    let mut points = Vec::new();
    let mut counts = Vec::new();
    let mut skipped = 0;
    let mut new_at_last = 0;
    for k in 1..=max_extension {
        let e = enumerate_strata(model, k, false, &[], DEFAULT_BUDGET)?;
        skipped = skipped.max(e.skipped_off_chart);
        let mut count = 0u128;
        new_at_last = 0;
        for s in e.strata.iter().filter(|s| !s.point.is_smooth()) {
            if s.free_dims > 0 {
                // a whole ruling of the cone is singular
                return Err(Error::NonIsolated);
            }
            count += 1;
            let d = s.point.field_degree();
            if d == k {
                points.push(SingularPoint { point: s.point.clone(), field_degree: d });
                new_at_last += 1;
            }
        }
        if count > bound {
            return Err(Error::NonIsolated);
        }
        counts.push(count);
    }
    Ok(SingularSearch {
        points,
        counts_by_degree: counts,
        bound,
        certified_complete: max_extension >= 2 && new_at_last == 0,
        skipped_off_chart: skipped,
    })
}

/// Whether the total space of a hypersurface model is regular at an
/// F_p-rational point of the special fibre: for a fibre-singular point this
/// holds iff `F(lift) / p` is a unit.
pub fn regularity_check(model: &ModelSpec, point: &FibrePoint) -> Result<bool> {
    if point.field().degree() != 1 {
        return Err(Error::Unsupported(
            "regularity is only checked at points rational over the prime field".into(),
        ));
    }
    regularity_check_with_lift(model, &point.integer_lift()?)
}

pub fn regularity_check_with_lift(model: &ModelSpec, lift: &[BigInt]) -> Result<bool> {
    if !model.is_hypersurface() {
        return Err(Error::Unsupported("regularity check needs a hypersurface model".into()));
    }
    let f: &IntPoly = &model.equations()[0];
    let p = BigInt::from(model.prime());
    if lift.iter().all(|c| c.is_multiple_of(&p)) {
        return Err(Error::Domain("lift is divisible by p".into()));
    }
    let value = f.evaluate(lift)?;
    if !value.is_multiple_of(&p) {
        return Err(Error::Domain("lift does not reduce to a point of the special fibre".into()));
    }
    let fibre_singular = f.gradient().iter().all(|g| {
        let v = g.evaluate(lift).expect("arity checked");
        v.is_multiple_of(&p)
    });
    if !fibre_singular {
        return Ok(true);
    }
    let q = value / &p;
    Ok(!q.mod_floor(&p).is_zero())
}

/// Certifies that the smooth locus of the special fibre is geometrically
/// connected, else fails with [`Error::Component`].
///
/// Accepted: projective space itself; hypersurfaces of dimension >= 2 whose
/// singular locus is isolated (such hypersurfaces are normal, hence
/// irreducible); smooth plane-curve fibres. The verdict is memoized.
pub fn check_smooth_locus_connected(model: &ModelSpec) -> Result<()> {
    model.connected_cell().get_or_init(|| compute_connected(model)).clone()
}

fn compute_connected(model: &ModelSpec) -> Result<()> {
    if model.equations().is_empty() {
        return Ok(());
    }
    if !model.is_hypersurface() {
        return Err(Error::Unsupported(
            "connectedness of the smooth locus is only certified for hypersurfaces".into(),
        ));
    }
    match (model.fibre_dimension(), find_singular_points(model, 1)) {
        (0, _) => Err(Error::Component("zero-dimensional fibre".into())),
        (_, Err(Error::NonIsolated)) => Err(Error::Component("singular locus is not isolated".into())),
        (_, Err(e)) => Err(e),
        (1, Ok(s)) if !s.points.is_empty() => Err(Error::Component(format!(
            "curve fibre is singular at {}",
            s.points[0].point
        ))),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::FiniteField;
    use crate::model::testing::{dp1, quartic};
    use crate::model::AmbientSpace;

    #[test]
    fn dp1_singular_points() {
        let m = dp1();
        let s = find_singular_points(&m, 2).unwrap();
        let f = FiniteField::get(11, 1).unwrap();
        let w = [1, 1, 2, 3];
        let expected: Vec<FibrePoint> = [[1i64, 1, 5, 0], [-1, 1, 5, 0]]
            .iter()
            .map(|c| FibrePoint::new(c.iter().map(|&x| f.from_i64(x)).collect(), &w, false).unwrap())
            .collect();
        let got: Vec<FibrePoint> = s.points.iter().map(|p| p.point.clone()).collect();
        assert_eq!(got, expected);
        assert!(s.points.iter().all(|p| p.field_degree == 1));
        assert_eq!(s.counts_by_degree, vec![2, 2]);
        assert!(s.certified_complete);
        for p in &got {
            assert!(regularity_check(&m, p).unwrap());
        }
    }

    #[test]
    fn cone_vertex_is_the_only_singularity() {
        let s = find_singular_points(&quartic(), 2).unwrap();
        assert_eq!(s.points.len(), 1);
        assert_eq!(s.points[0].point.to_string(), "(0, 0, 0, 1)");
        assert!(regularity_check(&quartic(), &s.points[0].point).unwrap());
    }

    #[test]
    fn smooth_quadric_has_no_singular_points() {
        let m = ModelSpec::parse(AmbientSpace::projective(3), &["X0*X1 - X2*X3"], 5, "q").unwrap();
        let s = find_singular_points(&m, 2).unwrap();
        assert!(s.points.is_empty());
        assert!(check_smooth_locus_connected(&m).is_ok());
    }

    #[test]
    fn cone_regularity_follows_the_p_part() {
        // f(X0,X1,X2) + p*g with g(0,0,0,1) = 0 mod p^... : p^2 * X3^2 gives a non-regular vertex
        let amb = AmbientSpace::projective(3);
        let bad = ModelSpec::parse(amb.clone(), &["X0^2 + X1^2 + X2^2 + 49*X3^2"], 7, "bad").unwrap();
        let good = ModelSpec::parse(amb, &["X0^2 + X1^2 + X2^2 + 7*X3^2"], 7, "good").unwrap();
        let vertex = find_singular_points(&good, 1).unwrap().points[0].point.clone();
        assert!(regularity_check(&good, &vertex).unwrap());
        assert!(!regularity_check(&bad, &vertex).unwrap());
    }

    #[test]
    fn regularity_is_lift_independent() {
        let m = dp1();
        let p = BigInt::from(11);
        for base in [[1i64, 1, 5, 0], [10, 1, 5, 0]] {
            for shift in 0..6i64 {
                let lift: Vec<BigInt> = base
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| BigInt::from(c) + &p * BigInt::from((shift * (i as i64 + 3)) % 7 - 3))
                    .collect();
                assert!(regularity_check_with_lift(&m, &lift).unwrap());
            }
        }
    }

    #[test]
    fn reducible_fibres_are_rejected() {
        let amb = AmbientSpace::projective(3);
        let m = ModelSpec::parse(amb, &["X0*X1*X2"], 11, "planes").unwrap();
        assert!(matches!(check_smooth_locus_connected(&m), Err(Error::Component(_))));
        let c = ModelSpec::parse(AmbientSpace::projective(2), &["X0*X1"], 11, "lines").unwrap();
        assert!(matches!(check_smooth_locus_connected(&c), Err(Error::Component(_))));
    }
}
