//! Milnor number of an isolated hypersurface singularity at the origin.
//!
//! `dim_D = dim F[x] / (J + m^D)` is nondecreasing in D. Once
//! `dim_D = dim_{D+1}` we have `m^D ⊆ J + m^{D+1}`, so `m^D ⊆ J` in the local
//! ring by Nakayama, and `dim_D` is the Milnor number.

use std::collections::HashMap;

use crate::arith::FiniteField;
use crate::error::{Error, Result};
use crate::poly::FqPoly;

/// Highest truncation degree tried before declaring the singularity non-isolated.
pub const MILNOR_DEGREE_CAP: u32 = 32;

fn monomials(nvars: usize, below: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for d in 0..below {
        let mut cur = vec![0u32; nvars];
        gen_degree(nvars, d, 0, &mut cur, &mut out);
    }
    out
}

fn gen_degree(nvars: usize, left: u32, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if i + 1 == nvars {
        cur[i] = left;
        out.push(cur.clone());
        return;
    }
    for e in (0..=left).rev() {
        cur[i] = e;
        gen_degree(nvars, left - e, i + 1, cur, out);
    }
}

type SparseRow = Vec<(usize, u32)>;

/// `a - c * b` for sorted sparse rows.
fn axpy(f: &FiniteField, a: &SparseRow, c: u32, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, f.neg_raw(f.mul_raw(c, b[j].1))));
            j += 1;
        } else {
            let v = f.sub_raw(a[i].1, f.mul_raw(c, b[j].1));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// `dim F[x] / (J + m^D)` for the ideal J generated by `gens`.
pub fn truncated_colength(gens: &[FqPoly], field: &'static FiniteField, d: u32) -> usize {
    let Some(first) = gens.first() else {
        return 0;
    };
    let nvars = first.nvars();
    let monos = monomials(nvars, d);
    let index: HashMap<&[u32], usize> = monos.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
    let terms: Vec<Vec<(Vec<u32>, u32)>> = gens
        .iter()
        .map(|g| g.terms().map(|(e, c)| (e.clone(), c.index())).collect())
        .collect();
    let mut pivots: HashMap<usize, SparseRow> = HashMap::new();
    let mut e = vec![0u32; nvars];
    for m in &monos {
        let dm: u32 = m.iter().sum();
        for g in &terms {
            let mut row: SparseRow = Vec::new();
            for (ge, c) in g {
                if dm + ge.iter().sum::<u32>() >= d {
                    continue;
                }
                for v in 0..nvars {
                    e[v] = m[v] + ge[v];
                }
                row.push((index[e.as_slice()], *c));
            }
            row.sort_unstable_by_key(|t| t.0);
            while let Some(&(lead, val)) = row.first() {
                match pivots.get(&lead) {
                    Some(piv) => row = axpy(field, &row, val, piv),
                    None => {
                        let inv = field.inv_raw(val).expect("nonzero lead");
                        for t in row.iter_mut() {
                            t.1 = field.mul_raw(t.1, inv);
                        }
                        pivots.insert(lead, row);
                        break;
                    }
                }
            }
        }
    }
    monos.len() - pivots.len()
}

/// Milnor number of `f` at the origin.
pub fn milnor_number(f: &FqPoly, field: &'static FiniteField) -> Result<u32> {
    let grads = f.gradient();
    if grads.iter().all(|g| g.is_zero()) {
        return Err(Error::NonIsolated);
    }
    let mut prev = truncated_colength(&grads, field, 2);
    for d in 2..MILNOR_DEGREE_CAP {
        let next = truncated_colength(&grads, field, d + 1);
        if next == prev {
            return Ok(prev as u32);
        }
        prev = next;
    }
    Err(Error::NonIsolated)
}
