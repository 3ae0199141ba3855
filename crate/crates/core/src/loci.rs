//! Closed subsets of Spec R, nonfree loci and related combinatorics.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::homology::{annihilator, fitting_ideal, syzygy_class_annihilator};
use crate::ideal::{same_ring, Ideal, QuotRing};
use crate::module::FPModule;
use crate::primes::{minimal_primes, sort_key};

/// A Zariski-closed subset, stored as its minimal primes and their intersection.
#[derive(Clone, Debug)]
pub struct ClosedSubset {
    ring: Arc<QuotRing>,
    radical: Ideal,
    primes: Vec<Ideal>,
}

impl ClosedSubset {
    /// `V(I)`.
    pub fn of_ideal(ideal: &Ideal) -> Result<ClosedSubset> {
        let mp = minimal_primes(ideal)?;
        Ok(ClosedSubset::from_minimal(ideal.ring(), mp.primes))
    }

    pub fn empty(ring: &Arc<QuotRing>) -> ClosedSubset {
        ClosedSubset { ring: ring.clone(), radical: Ideal::unit(ring), primes: Vec::new() }
    }

    /// `V(p)` for a prime `p`.
    pub fn of_prime(p: &Ideal) -> ClosedSubset {
        ClosedSubset::from_minimal(p.ring(), vec![p.clone()])
    }

    /// Closed set whose irreducible components are the minimal elements of `primes`.
    pub fn from_primes(ring: &Arc<QuotRing>, primes: Vec<Ideal>) -> ClosedSubset {
        let mut kept: Vec<Ideal> = Vec::new();
        for p in primes {
            if kept.iter().any(|q| p.contains_ideal(q)) {
                continue;
            }
            kept.retain(|q| !q.contains_ideal(&p));
            kept.push(p);
        }
        ClosedSubset::from_minimal(ring, kept)
    }

    fn from_minimal(ring: &Arc<QuotRing>, mut primes: Vec<Ideal>) -> ClosedSubset {
        primes.sort_by_key(sort_key);
        let mut radical = Ideal::unit(ring);
        for (k, p) in primes.iter().enumerate() {
            radical = if k == 0 { p.clone() } else { radical.intersect(p).expect("same ring") };
        }
        ClosedSubset { ring: ring.clone(), radical, primes }
    }

    pub fn ring(&self) -> &Arc<QuotRing> {
        &self.ring
    }

    pub fn radical(&self) -> &Ideal {
        &self.radical
    }

    pub fn primes(&self) -> &[Ideal] {
        &self.primes
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// `p ∈ Z`.
    pub fn contains_prime(&self, p: &Ideal) -> bool {
        !self.is_empty() && p.contains_ideal(&self.radical)
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &ClosedSubset) -> bool {
        self.primes.iter().all(|p| other.contains_prime(p))
    }

    pub fn same_as(&self, other: &ClosedSubset) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    pub fn union(&self, other: &ClosedSubset) -> Result<ClosedSubset> {
        same_ring(&self.ring, &other.ring)?;
        let mut all = self.primes.clone();
        all.extend(other.primes.iter().cloned());
        Ok(ClosedSubset::from_primes(&self.ring, all))
    }

    /// Largest `dim R/p` over the components; `-1` when empty.
    pub fn dim(&self) -> i64 {
        self.primes.iter().map(|p| p.krull_dim()).max().unwrap_or(-1)
    }

    /// `ht_Z(p)`: the largest `dim R/q - dim R/p` over components `q ⊆ p`.
    pub fn height_in(&self, p: &Ideal) -> Result<i64> {
        if !self.contains_prime(p) {
            return Err(Error::Precondition(format!("{} is not in {}", p, self)));
        }
        let dp = p.krull_dim();
        Ok(self
            .primes
            .iter()
            .filter(|q| p.contains_ideal(q))
            .map(|q| q.krull_dim() - dp)
            .max()
            .expect("some component lies below a point of the set"))
    }

    pub fn format(&self) -> String {
        if self.is_empty() {
            return "∅".into();
        }
        let parts: Vec<String> = self.primes.iter().map(|p| format!("V{}", p.format())).collect();
        parts.join(" ∪ ")
    }
}

impl fmt::Display for ClosedSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

/// `Supp M = V(Ann M)`.
pub fn support(m: &FPModule) -> Result<ClosedSubset> {
    ClosedSubset::of_ideal(&annihilator(m))
}

/// `NF(X) = Supp Ext^1(X, ΩX)`, which is the support of the class of the
/// syzygy sequence: that sequence splits at `p` exactly when `X_p` is free.
pub fn nonfree_locus(x: &FPModule) -> Result<ClosedSubset> {
    if x.is_free() {
        return Ok(ClosedSubset::empty(x.ring()));
    }
    ClosedSubset::of_ideal(&syzygy_class_annihilator(x)?)
}

/// The nonfree locus from Fitting ideals: `X_p` is free of rank `r` exactly
/// when `Fitt_r ⊄ p` and `Fitt_{r-1}` vanishes at `p`, i.e. `Ann Fitt_{r-1} ⊄ p`.
/// So `NF(X) = V(sum_r Fitt_r * Ann Fitt_{r-1})` with `Fitt_{-1} = 0`.
pub fn nonfree_locus_fitting(x: &FPModule) -> Result<ClosedSubset> {
    let ring = x.ring();
    let min = x.min_presentation().module;
    let g = min.ngens();
    let mut total = Ideal::zero(ring);
    let mut prev_ann = Ideal::unit(ring);
    for r in 0..=g {
        let fr = fitting_ideal(&min, r);
        total = total.add(&fr.mul(&prev_ann)?)?;
        prev_ann = Ideal::zero(ring).colon(&fr)?;
    }
    ClosedSubset::of_ideal(&total)
}

/// Singular locus `V(f, ∂f/∂x_i)` of a hypersurface ring `S/(f)`.
pub fn sing_locus_hypersurface(ring: &Arc<QuotRing>) -> Result<ClosedSubset> {
    let base = ring.base();
    let f = match ring.defining() {
        [] => return Ok(ClosedSubset::empty(ring)),
        [f] => f.clone(),
        _ => return Err(Error::Precondition("defining ideal is not principal".into())),
    };
    let partials = (0..base.nvars()).map(|i| base.derivative(&f, i)).collect();
    ClosedSubset::of_ideal(&Ideal::new(ring, partials)?)
}

/// `R_p` is a field, i.e. `Ann_R(p) ⊄ p`.
pub fn is_field_at(p: &Ideal) -> bool {
    let ann = Ideal::zero(p.ring()).colon(p).expect("same ring");
    !p.contains_ideal(&ann)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::poly::BaseRing;

    fn ring(vars: &[&str], rel: &[&str]) -> Arc<QuotRing> {
        let base = BaseRing::standard(vars, Field::Rational).unwrap();
        let rel = rel.iter().map(|r| base.parse_poly(r).unwrap()).collect();
        QuotRing::new(base, rel).unwrap()
    }

    fn v(r: &Arc<QuotRing>, gens: &[&str]) -> ClosedSubset {
        ClosedSubset::of_ideal(&Ideal::parse(r, gens).unwrap()).unwrap()
    }

    fn cyclic(r: &Arc<QuotRing>, gens: &[&str]) -> FPModule {
        FPModule::cyclic(&Ideal::parse(r, gens).unwrap(), 0)
    }

    #[test]
    fn nonfree_examples() {
        let r = ring(&["x", "y"], &["x^2"]);
        assert!(nonfree_locus(&FPModule::free(&r, vec![0, 0])).unwrap().is_empty());
        let rx = cyclic(&r, &["x"]);
        assert!(nonfree_locus(&rx).unwrap().same_as(&v(&r, &["x"])));
        assert!(nonfree_locus_fitting(&rx).unwrap().same_as(&v(&r, &["x"])));
        let i3 = FPModule::from_ideal(&Ideal::parse(&r, &["x", "y^3"]).unwrap());
        assert_eq!(nonfree_locus(&i3).unwrap().format(), "V(x, y)");
        assert_eq!(nonfree_locus_fitting(&i3).unwrap().format(), "V(x, y)");
        let s = ring(&["x", "y"], &[]);
        assert_eq!(nonfree_locus_fitting(&cyclic(&s, &["x"])).unwrap().format(), "V(x)");
        assert!(nonfree_locus_fitting(&FPModule::free(&s, vec![0])).unwrap().is_empty());
    }

    #[test]
    fn supports_and_dimensions() {
        let r = ring(&["x", "y"], &["x^2"]);
        assert!(support(&FPModule::zero(&r)).unwrap().is_empty());
        assert_eq!(support(&cyclic(&r, &["x", "y"])).unwrap().format(), "V(x, y)");
        assert_eq!(ClosedSubset::empty(&r).dim(), -1);
        assert_eq!(v(&r, &["x"]).dim(), 1);
        assert_eq!(v(&r, &["x", "y"]).dim(), 0);
    }

    #[test]
    fn heights() {
        let r = ring(&["x", "y"], &["x^2"]);
        let z = v(&r, &["x"]);
        assert_eq!(z.height_in(&Ideal::parse(&r, &["x"]).unwrap()).unwrap(), 0);
        assert_eq!(z.height_in(&Ideal::maximal(&r)).unwrap(), 1);
        let w = v(&r, &["x", "y"]);
        assert!(w.height_in(&Ideal::parse(&r, &["x"]).unwrap()).is_err());
    }

    #[test]
    fn singular_loci() {
        assert_eq!(sing_locus_hypersurface(&ring(&["x", "y"], &["x^2"])).unwrap().format(), "V(x)");
        assert_eq!(sing_locus_hypersurface(&ring(&["x", "y"], &["x*y"])).unwrap().format(), "V(x, y)");
        assert!(sing_locus_hypersurface(&ring(&["x", "y"], &["x"])).unwrap().is_empty());
        assert!(sing_locus_hypersurface(&ring(&["x", "y"], &["x^2", "y^2"])).is_err());
    }

    #[test]
    fn field_points() {
        let r = ring(&["x", "y"], &["x^2"]);
        assert!(!is_field_at(&Ideal::parse(&r, &["x"]).unwrap()));
        let r = ring(&["x", "y"], &["x"]);
        assert!(is_field_at(&Ideal::parse(&r, &["x"]).unwrap()));
        let r = ring(&["x", "y"], &[]);
        assert!(!is_field_at(&Ideal::maximal(&r)));
        assert!(is_field_at(&Ideal::zero(&r)));
    }

    #[test]
    fn unions() {
        let r = ring(&["x", "y"], &[]);
        let a = v(&r, &["x"]);
        let b = v(&r, &["y"]);
        let u = a.union(&b).unwrap();
        assert_eq!(u.format(), "V(x) ∪ V(y)");
        assert!(u.radical().same_as(&Ideal::parse(&r, &["x*y"]).unwrap()));
        assert!(a.union(&v(&r, &["x", "y"])).unwrap().same_as(&a));
    }
}
