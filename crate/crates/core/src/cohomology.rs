use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cochain::Cochain;
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::matrix::{coboundary_matrix, smith_normal_form, SnfResult};
use crate::ring::RingSpec;
use crate::simplex::{combinations, Simplex};

/// Ranks and torsion of H^j = ker δ^j / im δ^{j−1}.
///
/// Over a field the torsion list is empty and `free_rank` counts field
/// summands. Over ℤ_m, `free_rank` counts ℤ_m summands and the torsion list
/// holds the orders of the remaining cyclic summands in invariant-factor
/// form (each ≥ 2, each dividing the next).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologySummary {
    pub j: usize,
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl CohomologySummary {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

fn snf_of_coboundary(c: &Complex, j: usize) -> Option<SnfResult> {
    if j >= c.dimension_cap() {
        return None; // δ^d and beyond are zero maps
    }
    Some(smith_normal_form(coboundary_matrix(c, j).to_bigint()))
}

fn rank_mod_p(c: &Complex, j: usize, p: u64) -> usize {
    if j >= c.dimension_cap() {
        return 0;
    }
    coboundary_matrix(c, j).rank_mod_p(p)
}

/// Computes H^j(c; ring). Uses bit-packed GF(2) elimination for F_2,
/// residue elimination for other primes, and integer Smith normal form for
/// ℤ and ℤ_m.
pub fn cohomology(c: &Complex, j: usize, ring: RingSpec) -> Result<CohomologySummary> {
    ring.validate()?;
    if j > c.dimension_cap() {
        return Err(Error::InvalidInput(format!(
            "degree {} exceeds dimension cap {}",
            j,
            c.dimension_cap()
        )));
    }
    let nj = c.count_of_dim(j);
    match ring {
        RingSpec::PrimeField(p) => {
            let rank_up = rank_mod_p(c, j, p);
            let rank_down = if j == 0 { 0 } else { rank_mod_p(c, j - 1, p) };
            Ok(CohomologySummary {
                j,
                free_rank: nj - rank_up - rank_down,
                torsion: Vec::new(),
            })
        }
        RingSpec::Integers => {
            let up = snf_of_coboundary(c, j);
            let down = if j == 0 { None } else { snf_of_coboundary(c, j - 1) };
            let rank_up = up.as_ref().map(|s| s.rank).unwrap_or(0);
            let rank_down = down.as_ref().map(|s| s.rank).unwrap_or(0);
            let torsion = invariant_factors(
                down.iter()
                    .flat_map(|s| s.divisors.iter())
                    .filter(|d| !d.is_one())
                    .cloned()
                    .collect(),
            )?;
            Ok(CohomologySummary {
                j,
                free_rank: nj - rank_up - rank_down,
                torsion,
            })
        }
        RingSpec::IntegersMod(m) => {
            // Decompose the integer cochain complex into elementary pieces,
            // then read off the ℤ_m cohomology of each piece.
            let up = snf_of_coboundary(c, j);
            let down = if j == 0 { None } else { snf_of_coboundary(c, j - 1) };
            let rank_up = up.as_ref().map(|s| s.rank).unwrap_or(0);
            let rank_down = down.as_ref().map(|s| s.rank).unwrap_or(0);
            let rho = nj - rank_up - rank_down;
            let big_m = BigInt::from(m);
            let mut cyclic: Vec<BigInt> = Vec::new();
            // im δ^{j−1} pieces contribute cokernels ℤ_gcd(e, m)
            for e in down.iter().flat_map(|s| s.divisors.iter()) {
                cyclic.push(e.gcd(&big_m));
            }
            // ker δ^j pieces with divisor d contribute kernels ℤ_gcd(d, m)
            for d in up.iter().flat_map(|s| s.divisors.iter()) {
                cyclic.push(d.gcd(&big_m));
            }
            cyclic.retain(|g| !g.is_one());
            Ok(CohomologySummary {
                j,
                free_rank: rho,
                torsion: invariant_factors(cyclic)?,
            })
        }
    }
}

/// Normalizes a multiset of cyclic orders into the invariant-factor chain
/// d_1 | d_2 | … (each ≥ 2) with the same direct sum.
fn invariant_factors(orders: Vec<BigInt>) -> Result<Vec<u64>> {
    // collect prime powers of every order, then rebuild the chain by taking
    // the largest power of each prime into the last factor, and so on
    let mut prime_powers: std::collections::HashMap<BigInt, Vec<u32>> =
        std::collections::HashMap::new();
    for ord in orders {
        let mut rest = ord;
        let mut p = BigInt::from(2);
        while &p * &p <= rest {
            let mut e = 0u32;
            while (&rest % &p).is_zero() {
                rest /= &p;
                e += 1;
            }
            if e > 0 {
                prime_powers.entry(p.clone()).or_default().push(e);
            }
            p += 1;
        }
        if rest > BigInt::one() {
            prime_powers.entry(rest).or_default().push(1);
        }
    }
    let depth = prime_powers.values().map(|v| v.len()).max().unwrap_or(0);
    let mut chain = vec![BigInt::one(); depth];
    for (p, mut exps) in prime_powers {
        exps.sort_unstable();
        // align largest exponents with the last chain slot
        for (offset, e) in exps.iter().rev().enumerate() {
            let slot = depth - 1 - offset;
            chain[slot] *= p.pow(*e);
        }
    }
    chain
        .into_iter()
        .map(|d| {
            d.to_u64().ok_or_else(|| {
                Error::ArithmeticOverflow("torsion divisor exceeds u64".into())
            })
        })
        .collect()
}

/// R-cohomological j-connectedness: H^0 = R (a single component) and
/// H^i = 0 for all i in [j].
pub fn is_cohom_connected(c: &Complex, j: usize, ring: RingSpec) -> Result<bool> {
    if c.connected_components().len() != 1 {
        return Ok(false);
    }
    for i in 1..=j {
        if !cohomology(c, i, ring)?.is_trivial() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Looks for a (j+2)-set A that is a j-shell meeting supp(f) in exactly one
/// (j+1)-set: a witness that f is not a j-coboundary. The search runs over
/// apex extensions of support simplices, in (support, apex) order.
pub fn shell_certificate(c: &Complex, f: &Cochain) -> Option<Simplex> {
    let j = f.degree;
    for sigma in f.support() {
        for a in 1..=c.n() {
            if sigma.contains_vertex(a) {
                continue;
            }
            let cand = sigma.with_vertex(a);
            if !c.is_shell(&cand, j) {
                continue;
            }
            let in_support = cand
                .facets()
                .iter()
                .filter(|t| !f.ring.is_zero(f.get(t)))
                .count();
            if in_support == 1 {
                return Some(cand);
            }
        }
    }
    None
}

const COSET_GUARD: u64 = 1 << 24;

/// A representative of minimum support size in the cohomology class of `f`,
/// found by exhaustive enumeration of the coset f + im δ^{j−1}.
/// Requires a small prime field and at most 2^24 cosets.
pub fn min_support_in_class(c: &Complex, f: &Cochain) -> Result<Cochain> {
    let RingSpec::PrimeField(p) = f.ring else {
        return Err(Error::InvalidInput(
            "minimum-support search requires a prime field".into(),
        ));
    };
    let j = f.degree;
    if j == 0 {
        return Ok(f.clone()); // δ^{−1} = 0, the class is {f}
    }
    let lower = c.simplices_of_dim(j - 1);
    let m = lower.len();
    let cosets = (p as f64).powi(m as i32);
    if cosets > COSET_GUARD as f64 {
        return Err(Error::SearchSpaceTooLarge(format!(
            "{p}^{m} cosets exceeds guard {COSET_GUARD}"
        )));
    }

    let upper = c.simplices_of_dim(j);
    let upper_index: std::collections::HashMap<&Simplex, usize> =
        upper.iter().enumerate().map(|(i, s)| (s, i)).collect();
    // effect of bumping g on one (j−1)-simplex: signed increments on the
    // j-simplices containing it
    let mut effects: Vec<Vec<(usize, i64)>> = vec![Vec::new(); m];
    for (li, low) in lower.iter().enumerate() {
        for (ui, up) in upper.iter().enumerate() {
            if low.is_subset_of(up) {
                // position of the vertex missing from `low` inside `up`
                let extra = up
                    .vertices()
                    .iter()
                    .position(|v| !low.contains_vertex(*v))
                    .unwrap();
                let sign = if extra % 2 == 0 { 1 } else { -1 };
                effects[li].push((ui, sign));
            }
        }
    }
    let _ = &upper_index;

    let mut values: Vec<i64> = upper.iter().map(|s| f.get(s)).collect();
    let mut nonzero = values.iter().filter(|v| **v != 0).count();
    let mut best = values.clone();
    let mut best_nonzero = nonzero;

    // odometer over g ∈ F_p^m; each step bumps one digit by +1
    let mut digits = vec![0u64; m];
    let p_i = p as i64;
    'outer: loop {
        let mut pos = 0;
        loop {
            if pos == m {
                break 'outer;
            }
            digits[pos] += 1;
            // bump g at `pos` by +1: adjust affected values
            for &(ui, sign) in &effects[pos] {
                let old = values[ui];
                let new = (old + sign).rem_euclid(p_i);
                values[ui] = new;
                if old == 0 && new != 0 {
                    nonzero += 1;
                } else if old != 0 && new == 0 {
                    nonzero -= 1;
                }
            }
            if digits[pos] < p {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
        if nonzero < best_nonzero {
            best_nonzero = nonzero;
            best = values.clone();
        }
    }

    let mut out = Cochain::zero(j, f.ring);
    for (ui, v) in best.iter().enumerate() {
        if *v != 0 {
            out.set(upper[ui].clone(), *v)?;
        }
    }
    debug_assert_eq!(out.support_size(), best_nonzero);
    Ok(out)
}

/// Checks |D(f)| ≥ (n/(j+2))·|supp(f)| on the full complex Δ over [n],
/// where D(f) is the support of δ^j f. The caller must pass a cochain that
/// realizes the minimum support size in its class.
pub fn meshulam_wallach_check(n: u32, j: usize, f: &Cochain) -> Result<bool> {
    let all: Vec<u32> = (1..=n).collect();
    let mut d_count = 0usize;
    for rho in combinations(&all, j + 2) {
        let sigma = Simplex::from_sorted(rho);
        let mut acc = 0i64;
        for (i, facet) in sigma.facets().iter().enumerate() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            acc = f.ring.add_signed(acc, f.get(facet), sign);
        }
        if !f.ring.is_zero(acc) {
            d_count += 1;
        }
    }
    Ok((d_count as f64) * (j as f64 + 2.0) >= (n as f64) * (f.support_size() as f64))
}

/// Enumerates all F_2 j-cocycles of a small complex as support bitmasks over
/// the lexicographic list of j-simplices. Used by exhaustive certificate
/// checks; guarded to 16 j-simplices.
pub fn f2_cocycle_masks(c: &Complex, j: usize) -> Result<(Vec<Simplex>, Vec<u32>)> {
    let upper = c.simplices_of_dim(j);
    if upper.len() > 16 {
        return Err(Error::SearchSpaceTooLarge(format!(
            "{} j-simplices exceeds the exhaustive-enumeration bound of 16",
            upper.len()
        )));
    }
    let rows = if j < c.dimension_cap() {
        c.simplices_of_dim(j + 1)
    } else {
        Vec::new()
    };
    let upper_index: std::collections::HashMap<&Simplex, usize> =
        upper.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut row_masks: Vec<u32> = Vec::with_capacity(rows.len());
    for sigma in &rows {
        let mut mask = 0u32;
        for facet in sigma.facets() {
            if let Some(&ui) = upper_index.get(&facet) {
                mask ^= 1 << ui;
            }
        }
        row_masks.push(mask);
    }
    let mut cocycles = Vec::new();
    for cand in 0u32..(1 << upper.len()) {
        if row_masks
            .iter()
            .all(|m| (m & cand).count_ones() % 2 == 0)
        {
            cocycles.push(cand);
        }
    }
    Ok((upper, cocycles))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::apply_coboundary;
    use crate::complex::{downward_closure, Complex};
    use crate::simplex::Hypergraph;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    fn path() -> Complex {
        downward_closure(
            &Hypergraph::new(4, vec![s(&[1, 2]), s(&[2, 3]), s(&[3, 4])]),
            2,
        )
        .unwrap()
    }

    #[test]
    fn path_is_one_cohom_connected() {
        let g = path();
        let h1 = cohomology(&g, 1, RingSpec::PrimeField(2)).unwrap();
        assert_eq!(h1.free_rank, 0);
        assert!(is_cohom_connected(&g, 1, RingSpec::PrimeField(2)).unwrap());
    }

    #[test]
    fn gprime_has_rank_one() {
        let gp = path().add_simplex(&s(&[1, 3, 4])).unwrap();
        let h1 = cohomology(&gp, 1, RingSpec::PrimeField(2)).unwrap();
        assert_eq!(h1.free_rank, 1);
        assert!(!is_cohom_connected(&gp, 1, RingSpec::PrimeField(2)).unwrap());
    }

    #[test]
    fn gsecond_is_connected_again() {
        let gs = path()
            .add_simplex(&s(&[1, 3, 4]))
            .unwrap()
            .add_simplex(&s(&[1, 2, 3]))
            .unwrap();
        assert!(is_cohom_connected(&gs, 1, RingSpec::PrimeField(2)).unwrap());
        assert!(is_cohom_connected(&gs, 1, RingSpec::Integers).unwrap());
    }

    #[test]
    fn disjoint_edges_fail_h0() {
        let c = downward_closure(&Hypergraph::new(4, vec![s(&[1, 2]), s(&[3, 4])]), 2).unwrap();
        assert!(!is_cohom_connected(&c, 1, RingSpec::PrimeField(2)).unwrap());
    }

    #[test]
    fn h0_equals_component_count() {
        let c = downward_closure(&Hypergraph::new(6, vec![s(&[1, 2]), s(&[3, 4])]), 2).unwrap();
        let comps = c.connected_components().len();
        for ring in [
            RingSpec::PrimeField(2),
            RingSpec::PrimeField(3),
            RingSpec::Integers,
            RingSpec::IntegersMod(4),
        ] {
            let h0 = cohomology(&c, 0, ring).unwrap();
            assert_eq!(h0.free_rank, comps, "ring {ring}");
            assert!(h0.torsion.is_empty());
        }
    }

    #[test]
    fn shell_certificate_on_gprime() {
        let gp = path().add_simplex(&s(&[1, 3, 4])).unwrap();
        let mut f = Cochain::zero(1, RingSpec::PrimeField(2));
        f.set(s(&[1, 3]), 1).unwrap();
        f.set(s(&[3, 4]), 1).unwrap();
        assert_eq!(shell_certificate(&gp, &f), Some(s(&[1, 2, 3])));
        let zero = Cochain::zero(1, RingSpec::PrimeField(2));
        assert_eq!(shell_certificate(&gp, &zero), None);
    }

    #[test]
    fn certificate_absent_on_full_complex() {
        // on the closure of a 3-simplex every 1-cocycle is a coboundary
        let full = downward_closure(&Hypergraph::new(4, vec![s(&[1, 2, 3, 4])]), 3).unwrap();
        let (simps, masks) = f2_cocycle_masks(&full, 1).unwrap();
        for mask in masks {
            let mut f = Cochain::zero(1, RingSpec::PrimeField(2));
            for (i, sp) in simps.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    f.set(sp.clone(), 1).unwrap();
                }
            }
            assert_eq!(shell_certificate(&full, &f), None);
        }
    }

    #[test]
    fn min_support_examples() {
        // a coboundary minimizes to zero
        let g = path();
        let mut gvec = Cochain::zero(0, RingSpec::PrimeField(2));
        gvec.set(s(&[2]), 1).unwrap();
        let cob = apply_coboundary(&g, &gvec).unwrap();
        let min = min_support_in_class(&g, &cob).unwrap();
        assert!(min.is_zero());

        // the flower cochain of 𝒢′ has minimum support 2 in its class
        let gp = g.add_simplex(&s(&[1, 3, 4])).unwrap();
        let mut f = Cochain::zero(1, RingSpec::PrimeField(2));
        f.set(s(&[1, 3]), 1).unwrap();
        f.set(s(&[3, 4]), 1).unwrap();
        let min = min_support_in_class(&gp, &f).unwrap();
        assert_eq!(min.support_size(), 2);

        // hollow triangle: a single edge indicator is already minimal
        let hollow = downward_closure(
            &Hypergraph::new(3, vec![s(&[1, 2]), s(&[1, 3]), s(&[2, 3])]),
            2,
        )
        .unwrap();
        let mut e = Cochain::zero(1, RingSpec::PrimeField(2));
        e.set(s(&[1, 2]), 1).unwrap();
        let min = min_support_in_class(&hollow, &e).unwrap();
        assert_eq!(min.support_size(), 1);
    }

    #[test]
    fn meshulam_wallach_trivial_and_zero() {
        let f = Cochain::zero(1, RingSpec::PrimeField(2));
        assert!(meshulam_wallach_check(5, 1, &f).unwrap());
    }

    #[test]
    fn mod_m_matches_field_when_m_prime() {
        let gp = path().add_simplex(&s(&[1, 3, 4])).unwrap();
        let a = cohomology(&gp, 1, RingSpec::PrimeField(2)).unwrap();
        let b = cohomology(&gp, 1, RingSpec::IntegersMod(2)).unwrap();
        assert_eq!(a.free_rank, b.free_rank + b.torsion.len());
    }
}
