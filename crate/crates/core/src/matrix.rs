use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::complex::Complex;
use crate::ring::RingSpec;
use crate::simplex::Simplex;

/// The coboundary operator δ^j as a signed matrix: rows indexed by canonical
/// (j+1)-simplices, columns by canonical j-simplices, both lexicographically
/// sorted. Entry (−1)^i where the column simplex is the row simplex minus its
/// i-th vertex in ascending order; 0 otherwise. δ^{−1} and δ^d are zero maps
/// of the right shape (no rows / built at j = d with zero rows).
#[derive(Clone, Debug)]
pub struct CobMatrix {
    pub rows: Vec<Simplex>,
    pub cols: Vec<Simplex>,
    pub entries: Vec<Vec<i8>>,
}

impl CobMatrix {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// Entries reduced to canonical representatives of the given ring.
    pub fn entries_mod(&self, ring: RingSpec) -> Vec<Vec<i64>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|&e| ring.normalize(e as i64)).collect())
            .collect()
    }

    /// Rank over the given prime field.
    pub fn rank_mod_p(&self, p: u64) -> usize {
        if p == 2 {
            let ncols = self.ncols();
            let rows: Vec<Vec<u64>> = self
                .entries
                .iter()
                .map(|r| {
                    let mut packed = vec![0u64; ncols.div_ceil(64)];
                    for (c, &e) in r.iter().enumerate() {
                        if e % 2 != 0 {
                            packed[c / 64] |= 1 << (c % 64);
                        }
                    }
                    packed
                })
                .collect();
            rank_f2(rows, ncols)
        } else {
            let rows: Vec<Vec<i64>> = self.entries_mod(RingSpec::PrimeField(p));
            rank_fp(rows, p)
        }
    }

    pub fn to_bigint(&self) -> Vec<Vec<BigInt>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|&e| BigInt::from(e)).collect())
            .collect()
    }
}

/// Builds δ^j for a complex; valid for 0 ≤ j ≤ d (at j = d there are no
/// rows, giving the zero map).
pub fn coboundary_matrix(c: &Complex, j: usize) -> CobMatrix {
    let cols = c.simplices_of_dim(j);
    let rows = if j + 1 <= c.dimension_cap() {
        c.simplices_of_dim(j + 1)
    } else {
        Vec::new()
    };
    let col_index: std::collections::HashMap<&Simplex, usize> =
        cols.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut entries = vec![vec![0i8; cols.len()]; rows.len()];
    for (r, sigma) in rows.iter().enumerate() {
        for (i, facet) in sigma.facets().iter().enumerate() {
            if let Some(&ci) = col_index.get(facet) {
                entries[r][ci] = if i % 2 == 0 { 1 } else { -1 };
            }
        }
    }
    CobMatrix {
        rows,
        cols,
        entries,
    }
}

/// GF(2) rank of bit-packed rows via word-parallel elimination.
pub fn rank_f2(mut rows: Vec<Vec<u64>>, ncols: usize) -> usize {
    let mut rank = 0;
    let mut pivot_rows: Vec<Vec<u64>> = Vec::new();
    let mut pivot_cols: Vec<usize> = Vec::new();
    for row in rows.iter_mut() {
        let mut r = std::mem::take(row);
        for (pr, &pc) in pivot_rows.iter().zip(pivot_cols.iter()) {
            if r[pc / 64] >> (pc % 64) & 1 == 1 {
                for (a, b) in r.iter_mut().zip(pr.iter()) {
                    *a ^= *b;
                }
            }
        }
        if let Some(lead) = leading_bit(&r, ncols) {
            pivot_rows.push(r);
            pivot_cols.push(lead);
            rank += 1;
        }
    }
    rank
}

fn leading_bit(row: &[u64], ncols: usize) -> Option<usize> {
    for (w, &word) in row.iter().enumerate() {
        if word != 0 {
            let bit = w * 64 + word.trailing_zeros() as usize;
            if bit < ncols {
                return Some(bit);
            }
        }
    }
    None
}

/// Rank over F_p by Gaussian elimination on residues.
pub fn rank_fp(mut rows: Vec<Vec<i64>>, p: u64) -> usize {
    let p = p as i64;
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    let mut pivot_col = 0;
    while pivot_col < ncols && rank < rows.len() {
        let pivot = (rank..rows.len()).find(|&r| rows[r][pivot_col] % p != 0);
        let Some(pr) = pivot else {
            pivot_col += 1;
            continue;
        };
        rows.swap(rank, pr);
        let inv = mod_inverse(rows[rank][pivot_col].rem_euclid(p), p);
        for c in pivot_col..ncols {
            rows[rank][c] = (rows[rank][c].rem_euclid(p) * inv).rem_euclid(p);
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][pivot_col] % p != 0 {
                let factor = rows[r][pivot_col].rem_euclid(p);
                for c in pivot_col..ncols {
                    rows[r][c] = (rows[r][c] - factor * rows[rank][c]).rem_euclid(p);
                }
            }
        }
        rank += 1;
        pivot_col += 1;
    }
    rank
}

fn mod_inverse(a: i64, p: i64) -> i64 {
    // extended Euclid; p prime, a non-zero mod p
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p, a.rem_euclid(p));
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p)
}

/// Smith normal form result: the rank and the non-zero diagonal entries
/// (positive, each dividing the next).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub rank: usize,
    pub divisors: Vec<BigInt>,
}

/// Smith normal form over ℤ with exact arbitrary-precision arithmetic.
/// Pivot selection takes a smallest-magnitude non-zero entry, which keeps
/// intermediate entries from exploding on the matrices we feed it.
pub fn smith_normal_form(mut m: Vec<Vec<BigInt>>) -> SnfResult {
    let nrows = m.len();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut t = 0usize;
    let mut divisors: Vec<BigInt> = Vec::new();

    while t < nrows.min(ncols) {
        let Some((mut pi, mut pj)) = smallest_nonzero(&m, t) else {
            break;
        };

        loop {
            m.swap(t, pi);
            swap_cols(&mut m, t, pj);

            // clear column t below and above with row operations
            let mut dirty = false;
            for r in 0..nrows {
                if r != t && !m[r][t].is_zero() {
                    let q = div_rounded(&m[r][t], &m[t][t]);
                    if !q.is_zero() {
                        for c in t..ncols {
                            let sub = &q * &m[t][c];
                            m[r][c] -= sub;
                        }
                    }
                    if !m[r][t].is_zero() {
                        dirty = true;
                    }
                }
            }
            // clear row t
            for c in t + 1..ncols {
                if !m[t][c].is_zero() {
                    let q = div_rounded(&m[t][c], &m[t][t]);
                    if !q.is_zero() {
                        for r in t..nrows {
                            let sub = &q * &m[r][t];
                            m[r][c] -= sub;
                        }
                    }
                    if !m[t][c].is_zero() {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
            let (ni, nj) = smallest_nonzero(&m, t).expect("pivot vanished");
            pi = ni;
            pj = nj;
        }

        // enforce divisibility of the remaining block by the pivot
        if let Some((ri, rj)) = (t + 1..nrows)
            .flat_map(|r| (t + 1..ncols).map(move |c| (r, c)))
            .find(|&(r, c)| !(&m[r][c] % &m[t][t]).is_zero())
        {
            let _ = rj;
            for c in t..ncols {
                let add = m[ri][c].clone();
                m[t][c] += add;
            }
            continue; // redo this pivot position
        }

        if m[t][t].is_negative() {
            for c in t..ncols {
                m[t][c] = -m[t][c].clone();
            }
        }
        divisors.push(m[t][t].clone());
        t += 1;
    }

    SnfResult {
        rank: divisors.len(),
        divisors,
    }
}

fn smallest_nonzero(m: &[Vec<BigInt>], from: usize) -> Option<(usize, usize)> {
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut best: Option<(usize, usize)> = None;
    let mut best_mag: Option<BigInt> = None;
    for r in from..m.len() {
        for c in from..ncols {
            if !m[r][c].is_zero() {
                let mag = m[r][c].abs();
                if best_mag.as_ref().map(|b| &mag < b).unwrap_or(true) {
                    best_mag = Some(mag);
                    best = Some((r, c));
                }
            }
        }
    }
    best
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Division rounded to nearest, which halves remainders faster than
/// truncation during elimination.
fn div_rounded(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r: BigInt = &r * 2;
    if two_r.abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::downward_closure;
    use crate::simplex::Hypergraph;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn coboundary_matrix_single_edge() {
        let c = downward_closure(&Hypergraph::new(2, vec![s(&[1, 2])]), 1).unwrap();
        let m = coboundary_matrix(&c, 0);
        assert_eq!(m.nrows(), 1);
        assert_eq!(m.ncols(), 2);
        // row ({1,2}) reads f({2}) − f({1})
        assert_eq!(m.entries[0], vec![-1, 1]);
    }

    #[test]
    fn coboundary_matrix_hollow_triangle_has_no_rows() {
        let c = downward_closure(
            &Hypergraph::new(3, vec![s(&[1, 2]), s(&[1, 3]), s(&[2, 3])]),
            2,
        )
        .unwrap();
        let m = coboundary_matrix(&c, 1);
        assert_eq!(m.nrows(), 0);
        assert_eq!(m.ncols(), 3);
    }

    #[test]
    fn coboundary_matrix_full_triangle_signs() {
        let c = downward_closure(&Hypergraph::new(3, vec![s(&[1, 2, 3])]), 2).unwrap();
        let m = coboundary_matrix(&c, 1);
        assert_eq!(m.nrows(), 1);
        // columns sorted: {1,2}, {1,3}, {2,3}; row {1,2,3} = [+1, −1, +1]
        assert_eq!(m.entries[0], vec![1, -1, 1]);
    }

    #[test]
    fn f2_and_fp_rank_agree_on_incidence() {
        let c = downward_closure(
            &Hypergraph::new(4, vec![s(&[1, 2]), s(&[2, 3]), s(&[3, 4])]),
            2,
        )
        .unwrap();
        let m = coboundary_matrix(&c, 0);
        assert_eq!(m.rank_mod_p(2), 3);
        assert_eq!(m.rank_mod_p(5), 3);
        let snf = smith_normal_form(m.to_bigint());
        assert_eq!(snf.rank, 3);
        assert!(snf.divisors.iter().all(|d| *d == BigInt::from(1)));
    }

    #[test]
    fn snf_known_divisors() {
        // diag(2,6) ~ divisors (2, 6); mixing rows keeps the invariants
        let m = vec![
            vec![BigInt::from(2), BigInt::from(4)],
            vec![BigInt::from(4), BigInt::from(14)],
        ];
        let snf = smith_normal_form(m);
        assert_eq!(snf.divisors, vec![BigInt::from(2), BigInt::from(6)]);
    }

    #[test]
    fn snf_divisibility_chain_fixup() {
        let m = vec![
            vec![BigInt::from(2), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(3)],
        ];
        let snf = smith_normal_form(m);
        assert_eq!(snf.divisors, vec![BigInt::from(1), BigInt::from(6)]);
    }
}
