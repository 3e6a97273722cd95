use std::collections::BTreeMap;

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::ring::RingSpec;
use crate::simplex::Simplex;

/// A j-cochain: an alternating function on ordered j-simplices.
///
/// Only the value on the canonical ascending ordering is stored, on the
/// support only; the value on any other ordering is sign(permutation) times
/// the stored one. Coefficients are canonical ring representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub ring: RingSpec,
    values: BTreeMap<Simplex, i64>,
}

impl Cochain {
    pub fn zero(degree: usize, ring: RingSpec) -> Self {
        Self {
            degree,
            ring,
            values: BTreeMap::new(),
        }
    }

    /// Sets the value on the canonical ordering of `s`. Zero values erase.
    pub fn set(&mut self, s: Simplex, v: i64) -> Result<()> {
        if s.dimension() != self.degree {
            return Err(Error::InvalidInput(format!(
                "simplex {:?} has dimension {}, cochain degree is {}",
                s,
                s.dimension(),
                self.degree
            )));
        }
        let v = self.ring.normalize(v);
        if v == 0 {
            self.values.remove(&s);
        } else {
            self.values.insert(s, v);
        }
        Ok(())
    }

    /// Value on the canonical ascending ordering.
    pub fn get(&self, s: &Simplex) -> i64 {
        self.values.get(s).copied().unwrap_or(0)
    }

    /// Value on an explicitly ordered vertex list, applying the alternating
    /// sign convention. Returns an error on repeated vertices.
    pub fn eval_ordered(&self, ordered: &[u32]) -> Result<i64> {
        let (canon, sign) = sort_with_sign(ordered)?;
        let v = self.get(&Simplex::from_sorted(canon));
        Ok(self.ring.normalize(if sign < 0 { -v } else { v }))
    }

    /// The support: unordered simplices with non-zero value, ascending.
    pub fn support(&self) -> Vec<Simplex> {
        self.values.keys().cloned().collect()
    }

    pub fn support_size(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        if self.degree != other.degree || self.ring != other.ring {
            return Err(Error::InvalidInput(
                "cochain addition requires matching degree and ring".into(),
            ));
        }
        let mut out = self.clone();
        for (s, v) in &other.values {
            let nv = out.ring.add(out.get(s), *v);
            out.set(s.clone(), nv)?;
        }
        Ok(out)
    }

    /// Entries in a deterministic order, for serialization and hashing.
    pub fn entries(&self) -> impl Iterator<Item = (&Simplex, i64)> {
        self.values.iter().map(|(s, v)| (s, *v))
    }
}

/// Sorts an ordered vertex list, returning the canonical list and the parity
/// of the sorting permutation (+1 or −1).
pub fn sort_with_sign(ordered: &[u32]) -> Result<(Vec<u32>, i8)> {
    let mut v = ordered.to_vec();
    // counting inversions by insertion; vertex lists here are tiny
    let mut sign = 1i8;
    for i in 1..v.len() {
        let mut k = i;
        while k > 0 && v[k - 1] > v[k] {
            v.swap(k - 1, k);
            sign = -sign;
            k -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput("repeated vertex in ordering".into()));
    }
    Ok((v, sign))
}

/// The coboundary δ^j f of a j-cochain on `c`, a (j+1)-cochain:
/// (δf)(σ) = Σ_i (−1)^i f(σ without its i-th vertex).
pub fn apply_coboundary(c: &Complex, f: &Cochain) -> Result<Cochain> {
    let j = f.degree;
    if j + 1 > c.dimension_cap() {
        return Ok(Cochain::zero(j + 1, f.ring));
    }
    let mut out = Cochain::zero(j + 1, f.ring);
    for sigma in c.simplices_of_dim(j + 1) {
        let mut acc = 0i64;
        for (i, facet) in sigma.facets().iter().enumerate() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            acc = f.ring.add_signed(acc, f.get(facet), sign);
        }
        if !f.ring.is_zero(acc) {
            out.set(sigma, acc)?;
        }
    }
    Ok(out)
}

/// True iff f is a j-cocycle in c, i.e. δ^j f = 0.
pub fn is_cocycle(c: &Complex, f: &Cochain) -> Result<bool> {
    Ok(apply_coboundary(c, f)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::downward_closure;
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
    fn alternating_sign_on_access() {
        let mut f = Cochain::zero(1, RingSpec::Integers);
        f.set(s(&[1, 3]), 5).unwrap();
        assert_eq!(f.eval_ordered(&[1, 3]).unwrap(), 5);
        assert_eq!(f.eval_ordered(&[3, 1]).unwrap(), -5);
        assert!(f.eval_ordered(&[3, 3]).is_err());
    }

    #[test]
    fn coboundary_of_vertex_indicator_on_path() {
        // δ^0 of the indicator of {1} is supported exactly on the edge {1,2}:
        // (δf)({u,v}) = f(v) − f(u).
        let c = path();
        let mut f = Cochain::zero(0, RingSpec::Integers);
        f.set(s(&[1]), 1).unwrap();
        let df = apply_coboundary(&c, &f).unwrap();
        assert_eq!(df.support(), vec![s(&[1, 2])]);
        assert_eq!(df.get(&s(&[1, 2])), -1);
    }

    #[test]
    fn coboundary_of_zero_is_zero() {
        let c = path();
        let f = Cochain::zero(0, RingSpec::PrimeField(3));
        assert!(apply_coboundary(&c, &f).unwrap().is_zero());
    }

    #[test]
    fn delta_delta_is_zero_small() {
        let c = downward_closure(&Hypergraph::new(4, vec![s(&[1, 2, 3, 4])]), 3).unwrap();
        for ring in [
            RingSpec::Integers,
            RingSpec::PrimeField(2),
            RingSpec::PrimeField(5),
            RingSpec::IntegersMod(6),
        ] {
            let mut f = Cochain::zero(1, ring);
            f.set(s(&[1, 2]), 1).unwrap();
            f.set(s(&[2, 4]), 3).unwrap();
            f.set(s(&[3, 4]), 2).unwrap();
            let df = apply_coboundary(&c, &f).unwrap();
            let ddf = apply_coboundary(&c, &df).unwrap();
            assert!(ddf.is_zero(), "δδ ≠ 0 over {ring}");
        }
    }

    #[test]
    fn zero_values_are_pruned() {
        let mut f = Cochain::zero(1, RingSpec::PrimeField(2));
        f.set(s(&[1, 2]), 1).unwrap();
        f.set(s(&[1, 2]), 2).unwrap();
        assert!(f.is_zero());
    }
}
