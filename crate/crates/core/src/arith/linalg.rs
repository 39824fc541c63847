//! Dense linear algebra over a finite field on raw element indices.

use super::FiniteField;

/// Row-reduces `m` in place and returns its rank.
pub fn rank_raw(f: &FiniteField, m: &mut [Vec<u32>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = f.inv_raw(m[rank][c]).expect("pivot is nonzero");
        for j in c..cols {
            m[rank][j] = f.mul_raw(m[rank][j], inv);
        }
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let factor = m[r][c];
                for j in c..cols {
                    let t = f.mul_raw(factor, m[rank][j]);
                    m[r][j] = f.sub_raw(m[r][j], t);
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Basis of the right kernel `{v : m v = 0}`.
pub fn kernel_raw(f: &FiniteField, m: &[Vec<u32>], cols: usize) -> Vec<Vec<u32>> {
    let mut a: Vec<Vec<u32>> = m.to_vec();
    let rank = rank_raw(f, &mut a);
    let mut pivots = Vec::new();
    for row in a.iter().take(rank) {
        pivots.push(row.iter().position(|&x| x != 0).expect("nonzero reduced row"));
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u32; cols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg_raw(a[r][free]);
        }
        basis.push(v);
    }
    basis
}
