use crate::arith::FiniteField;

use super::{FqPoly, IntPoly};

/// A polynomial flattened for repeated evaluation on raw field indices.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    field: &'static FiniteField,
    terms: Vec<(u32, Vec<(usize, u32)>)>,
    offsets: Vec<usize>,
    maxexp: Vec<u32>,
}

impl CompiledPoly {
    pub fn new(poly: &FqPoly, field: &'static FiniteField) -> Self {
        let terms = poly
            .terms()
            .map(|(e, c)| {
                assert!(std::ptr::eq(c.field(), field), "coefficient from another field");
                let factors = e.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, &x)| (i, x)).collect();
                (c.index(), factors)
            })
            .collect();
        let maxexp = poly.max_exponents();
        let mut offsets = Vec::with_capacity(maxexp.len());
        let mut acc = 0;
        for &m in &maxexp {
            offsets.push(acc);
            acc += m as usize + 1;
        }
        CompiledPoly { field, terms, offsets, maxexp }
    }

    pub fn from_int(poly: &IntPoly, field: &'static FiniteField) -> Self {
        Self::new(&poly.reduce(field), field)
    }

    pub fn field(&self) -> &'static FiniteField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scratch(&self) -> Vec<u32> {
        vec![0; self.maxexp.iter().map(|&m| m as usize + 1).sum()]
    }

    /// Value at `point` (raw indices). `scratch` must come from [`Self::scratch`].
    #[inline]
    pub fn eval(&self, point: &[u32], scratch: &mut [u32]) -> u32 {
        let f = self.field;
        for (i, &m) in self.maxexp.iter().enumerate() {
            let o = self.offsets[i];
            scratch[o] = 1;
            for j in 1..=m as usize {
                scratch[o + j] = f.mul_raw(scratch[o + j - 1], point[i]);
            }
        }
        let mut acc = 0u32;
        for (c, factors) in &self.terms {
            let mut t = *c;
            for &(i, e) in factors {
                t = f.mul_raw(t, scratch[self.offsets[i] + e as usize]);
                if t == 0 {
                    break;
                }
            }
            acc = f.add_raw(acc, t);
        }
        acc
    }

    /// One-off evaluation without a caller-held scratch buffer.
    pub fn eval_once(&self, point: &[u32]) -> u32 {
        let mut s = self.scratch();
        self.eval(point, &mut s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Vars;

    #[test]
    fn agrees_with_generic_evaluation() {
        let v = Vars::plain(vec!["a", "b", "c"]).unwrap();
        let f = IntPoly::parse("a^3*b - 7*b^2*c + 5*c^4 - 2", &v).unwrap();
        for (p, k) in [(7u64, 1u32), (5, 2), (3, 3)] {
            let field = FiniteField::get(p, k).unwrap();
            let c = CompiledPoly::from_int(&f, field);
            let fr = f.reduce(field);
            let q = field.order() as u32;
            for i in 0..q.min(40) {
                for j in 0..q.min(10) {
                    let pt = [i, j, (i * 3 + j) % q];
                    let generic = fr
                        .evaluate(&pt.map(|x| field.elem(x)))
                        .unwrap()
                        .index();
                    assert_eq!(c.eval_once(&pt), generic);
                }
            }
        }
    }
}
