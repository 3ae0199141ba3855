//! Quotient rings and homogeneous ideals.
//!
//! An ideal of `R = S/J` is stored by generators in `S`; every computation
//! works with the preimage, i.e. the generators together with `J`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::groebner::{GroebnerBasis, ModuleOrder};
use crate::poly::{BaseRing, Monomial, Poly};
use crate::syzygy::syzygies;

/// Reduced Gröbner basis of an ideal of `S` in the ideal order.
pub fn groebner(ring: &BaseRing, gens: &[Poly]) -> GroebnerBasis {
    let order = ModuleOrder::ideal(ring);
    let gens = gens.iter().map(|g| order.vector_from_poly(g)).collect();
    GroebnerBasis::compute(order, gens)
}

pub fn normal_form(ring: &BaseRing, f: &Poly, gb: &GroebnerBasis) -> Poly {
    let v = gb.order().vector_from_poly(f);
    gb.reduce(&v).to_column(ring, 1).pop().unwrap()
}

pub fn gb_polys(ring: &BaseRing, gb: &GroebnerBasis) -> Vec<Poly> {
    gb.elements().iter().map(|v| v.to_column(ring, 1).pop().unwrap()).collect()
}

/// Krull dimension of `S/(gb)` from a maximal independent set of variables;
/// `-1` for the unit ideal.
pub fn dim_from_gb(nvars: usize, gb: &GroebnerBasis) -> i64 {
    let leads: Vec<Monomial> = gb.lead_monomials().into_iter().map(|(_, m)| m).collect();
    if leads.iter().any(|m| m.is_one()) {
        return -1;
    }
    let supports: Vec<u64> = leads
        .iter()
        .map(|m| m.support().fold(0u64, |acc, i| acc | (1 << i)))
        .collect();
    let mut best = 0;
    // subsets of variables avoiding every lead support, searched by bitmask
    for mask in 0u64..(1u64 << nvars) {
        let size = mask.count_ones() as i64;
        if size <= best {
            continue;
        }
        if supports.iter().all(|s| s & !mask != 0) {
            best = size;
        }
    }
    best
}

/// Intersection of two ideals of `S` through syzygies of `(f_1..f_a, g_1..g_b)`.
pub fn intersect_polys(ring: &BaseRing, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut cols: Vec<Vec<Poly>> = a.iter().map(|f| vec![f.clone()]).collect();
    cols.extend(b.iter().map(|g| vec![ring.neg(g)]));
    let degs: Vec<i64> = cols.iter().map(|c| ring.degree(&c[0]).unwrap_or(0)).collect();
    let syz = syzygies(ring, &[0], &cols, &degs);
    let mut out = Vec::new();
    for s in syz {
        let mut h = ring.zero();
        for (c, f) in s.iter().zip(a) {
            h = ring.add(&h, &ring.mul(c, f));
        }
        if !h.is_zero() {
            out.push(h);
        }
    }
    let gb = groebner(ring, &out);
    gb_polys(ring, &gb)
}

/// `I : f` in `S`, with `I` given by generators (including any defining relations).
pub fn colon_poly(ring: &BaseRing, gens: &[Poly], f: &Poly) -> Vec<Poly> {
    if f.is_zero() {
        return vec![ring.one()];
    }
    let mut cols = vec![vec![f.clone()]];
    cols.extend(gens.iter().map(|g| vec![g.clone()]));
    let degs: Vec<i64> = cols.iter().map(|c| ring.degree(&c[0]).unwrap_or(0)).collect();
    let syz = syzygies(ring, &[0], &cols, &degs);
    let out: Vec<Poly> = syz.into_iter().map(|s| s[0].clone()).filter(|p| !p.is_zero()).collect();
    gb_polys(ring, &groebner(ring, &out))
}

/// A positively graded quotient `S/J`.
#[derive(Debug)]
pub struct QuotRing {
    base: BaseRing,
    defining: Vec<Poly>,
    gb: GroebnerBasis,
}

impl PartialEq for QuotRing {
    fn eq(&self, other: &QuotRing) -> bool {
        self.base == other.base && self.defining == other.defining
    }
}

impl QuotRing {
    pub fn new(base: BaseRing, defining: Vec<Poly>) -> Result<Arc<QuotRing>> {
        for f in &defining {
            if !base.is_homogeneous(f) {
                return Err(Error::Inhomogeneous(base.format(f)));
            }
        }
        let gb = groebner(&base, &defining);
        if gb.contains_constant_at(0) {
            return Err(Error::InvalidRing("defining ideal is the unit ideal".into()));
        }
        let defining = gb_polys(&base, &gb);
        Ok(Arc::new(QuotRing { base, defining, gb }))
    }

    pub fn polynomial(base: BaseRing) -> Arc<QuotRing> {
        QuotRing::new(base, Vec::new()).expect("zero ideal is proper")
    }

    pub fn base(&self) -> &BaseRing {
        &self.base
    }

    /// Reduced Gröbner basis of the defining ideal.
    pub fn defining(&self) -> &[Poly] {
        &self.defining
    }

    pub fn defining_gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn nvars(&self) -> usize {
        self.base.nvars()
    }

    pub fn reduce(&self, f: &Poly) -> Poly {
        normal_form(&self.base, f, &self.gb)
    }

    pub fn is_zero(&self, f: &Poly) -> bool {
        self.reduce(f).is_zero()
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&self.base.mul(a, b))
    }

    pub fn parse(&self, text: &str) -> Result<Poly> {
        Ok(self.reduce(&self.base.parse_homogeneous(text)?))
    }

    pub fn dim(&self) -> i64 {
        dim_from_gb(self.nvars(), &self.gb)
    }

    /// The defining ideal is principal (after reduction) and nonzero.
    pub fn hypersurface_equation(&self) -> Option<&Poly> {
        match self.defining.as_slice() {
            [f] => Some(f),
            _ => None,
        }
    }
}

impl fmt::Display for QuotRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.defining.is_empty() {
            return write!(f, "{}", self.base);
        }
        let gens: Vec<String> = self.defining.iter().map(|g| self.base.format(g)).collect();
        write!(f, "{}/({})", self.base, gens.join(", "))
    }
}

pub(crate) fn same_ring(a: &Arc<QuotRing>, b: &Arc<QuotRing>) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::RingMismatch)
    }
}

/// A homogeneous ideal of a quotient ring.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: Arc<QuotRing>,
    gens: Vec<Poly>,
    gb: Arc<OnceLock<GroebnerBasis>>,
}

impl Ideal {
    /// Generators are reduced modulo the defining ideal; zero generators are dropped.
    pub fn new(ring: &Arc<QuotRing>, gens: Vec<Poly>) -> Result<Ideal> {
        let base = ring.base();
        let mut kept = Vec::new();
        for g in gens {
            if !base.is_homogeneous(&g) {
                return Err(Error::Inhomogeneous(base.format(&g)));
            }
            let g = ring.reduce(&g);
            if !g.is_zero() && !kept.contains(&g) {
                kept.push(g);
            }
        }
        Ok(Ideal { ring: ring.clone(), gens: kept, gb: Arc::new(OnceLock::new()) })
    }

    pub fn parse(ring: &Arc<QuotRing>, gens: &[&str]) -> Result<Ideal> {
        let polys = gens.iter().map(|g| ring.base().parse_poly(g)).collect::<Result<Vec<_>>>()?;
        Ideal::new(ring, polys)
    }

    pub fn zero(ring: &Arc<QuotRing>) -> Ideal {
        Ideal { ring: ring.clone(), gens: Vec::new(), gb: Arc::new(OnceLock::new()) }
    }

    pub fn unit(ring: &Arc<QuotRing>) -> Ideal {
        Ideal::new(ring, vec![ring.base().one()]).unwrap()
    }

    /// The irrelevant ideal generated by all variables.
    pub fn maximal(ring: &Arc<QuotRing>) -> Ideal {
        let gens = (0..ring.nvars()).map(|i| ring.base().var(i)).collect();
        Ideal::new(ring, gens).unwrap()
    }

    pub fn ring(&self) -> &Arc<QuotRing> {
        &self.ring
    }

    pub fn base(&self) -> &BaseRing {
        self.ring.base()
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    /// Generators of the preimage in `S`.
    pub fn preimage_gens(&self) -> Vec<Poly> {
        let mut all = self.ring.defining().to_vec();
        all.extend(self.gens.iter().cloned());
        all
    }

    /// Reduced Gröbner basis of the preimage in `S`.
    pub fn groebner(&self) -> &GroebnerBasis {
        self.gb.get_or_init(|| groebner(self.base(), &self.preimage_gens()))
    }

    /// Canonical generators: the reduced basis of the preimage minus the
    /// elements already in the defining ideal, largest leading term first.
    pub fn canonical_gens(&self) -> Vec<Poly> {
        let mut gens: Vec<Poly> = gb_polys(self.base(), self.groebner())
            .into_iter()
            .filter(|g| !self.ring.is_zero(g))
            .collect();
        gens.reverse();
        gens
    }

    pub fn normal_form(&self, f: &Poly) -> Poly {
        normal_form(self.base(), f, self.groebner())
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn is_unit(&self) -> bool {
        self.groebner().contains_constant_at(0)
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn same_as(&self, other: &Ideal) -> bool {
        self.groebner().elements() == other.groebner().elements()
    }

    pub fn add(&self, other: &Ideal) -> Result<Ideal> {
        same_ring(&self.ring, &other.ring)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    pub fn mul(&self, other: &Ideal) -> Result<Ideal> {
        same_ring(&self.ring, &other.ring)?;
        let base = self.base();
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(base.mul(a, b));
            }
        }
        Ideal::new(&self.ring, gens)
    }

    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        same_ring(&self.ring, &other.ring)?;
        let gens = intersect_polys(self.base(), &self.preimage_gens(), &other.preimage_gens());
        Ideal::new(&self.ring, gens)
    }

    /// `I : f`.
    pub fn colon_elem(&self, f: &Poly) -> Ideal {
        let gens = colon_poly(self.base(), &self.preimage_gens(), f);
        Ideal::new(&self.ring, gens).expect("colon of homogeneous data is homogeneous")
    }

    /// `I : J`; the unit ideal when `J` is zero.
    pub fn colon(&self, other: &Ideal) -> Result<Ideal> {
        same_ring(&self.ring, &other.ring)?;
        let mut acc: Option<Ideal> = None;
        for g in &other.gens {
            let c = self.colon_elem(g);
            acc = Some(match acc {
                None => c,
                Some(a) => a.intersect(&c)?,
            });
        }
        Ok(acc.unwrap_or_else(|| Ideal::unit(&self.ring)))
    }

    /// `I : f^∞` by iterated colon until the ideal stabilizes.
    pub fn saturate(&self, f: &Poly) -> Result<Ideal> {
        if self.ring.is_zero(f) {
            return Err(Error::ZeroElement("saturation by zero".into()));
        }
        let mut cur = self.clone();
        loop {
            let next = cur.colon_elem(f);
            if next.same_as(&cur) {
                return Ok(cur);
            }
            cur = next;
        }
    }

    /// Krull dimension of `R/I`; `-1` for the unit ideal.
    pub fn krull_dim(&self) -> i64 {
        dim_from_gb(self.ring.nvars(), self.groebner())
    }

    /// `f ∈ √I`, decided by `1 ∈ I + (1 - t f)` over `S[t]`.
    pub fn radical_contains(&self, f: &Poly) -> bool {
        let base = self.base();
        if f.is_zero() {
            return true;
        }
        let ext = base.extended(&fresh_name(base), 1);
        let t = ext.var(base.nvars());
        let mut gens: Vec<Poly> = self.preimage_gens().iter().map(|g| base.embed_into(g, &ext)).collect();
        let tf = ext.mul(&t, &base.embed_into(f, &ext));
        gens.push(ext.sub(&ext.one(), &tf));
        groebner(&ext, &gens).contains_constant_at(0)
    }

    pub fn radical_contains_ideal(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.radical_contains(g))
    }

    pub fn format(&self) -> String {
        let gens: Vec<String> = self.gens.iter().map(|g| self.base().format(g)).collect();
        format!("({})", gens.join(", "))
    }
}

fn fresh_name(base: &BaseRing) -> String {
    let mut name = "t".to_string();
    while base.var_index(&name).is_some() {
        name.push('_');
    }
    name
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn poly_ring(vars: &[&str]) -> Arc<QuotRing> {
        QuotRing::polynomial(BaseRing::standard(vars, Field::Rational).unwrap())
    }

    fn quot(vars: &[&str], rel: &[&str]) -> Arc<QuotRing> {
        let base = BaseRing::standard(vars, Field::Rational).unwrap();
        let rel = rel.iter().map(|r| base.parse_poly(r).unwrap()).collect();
        QuotRing::new(base, rel).unwrap()
    }

    #[test]
    fn normal_forms() {
        let r = poly_ring(&["x", "y"]);
        let b = r.base();
        let gb = groebner(b, &[b.parse_poly("x^2").unwrap()]);
        assert!(normal_form(b, &b.zero(), &gb).is_zero());
        assert!(normal_form(b, &b.parse_poly("x^2").unwrap(), &gb).is_zero());
        assert_eq!(normal_form(b, &b.var(1), &gb), b.var(1));
    }

    #[test]
    fn saturation_examples() {
        let r = poly_ring(&["x", "y"]);
        let y = r.base().var(1);
        let i = Ideal::parse(&r, &["x^2*y"]).unwrap();
        assert!(i.saturate(&y).unwrap().same_as(&Ideal::parse(&r, &["x^2"]).unwrap()));
        let i = Ideal::parse(&r, &["x"]).unwrap();
        assert!(i.saturate(&y).unwrap().same_as(&i));
        let i = Ideal::parse(&r, &["x*y", "y^2"]).unwrap();
        assert!(i.saturate(&y).unwrap().is_unit());
        assert!(i.colon_elem(&y).same_as(&Ideal::parse(&r, &["x", "y"]).unwrap()));
        assert!(i.saturate(&r.base().zero()).is_err());
    }

    #[test]
    fn dimensions() {
        let r = poly_ring(&["x", "y"]);
        assert_eq!(Ideal::parse(&r, &["x^2"]).unwrap().krull_dim(), 1);
        assert_eq!(Ideal::unit(&r).krull_dim(), -1);
        let r3 = poly_ring(&["x", "y", "z"]);
        assert_eq!(Ideal::zero(&r3).krull_dim(), 3);
        assert_eq!(Ideal::maximal(&r3).krull_dim(), 0);
    }

    #[test]
    fn radical_membership() {
        let r = poly_ring(&["x", "y"]);
        let b = r.base();
        let i = Ideal::parse(&r, &["x^2"]).unwrap();
        assert!(i.radical_contains(&b.var(0)));
        assert!(!i.radical_contains(&b.var(1)));
        let j = Ideal::parse(&r, &["x^2", "y^3"]).unwrap();
        assert!(j.radical_contains(&b.parse_poly("x + y").unwrap()));
    }

    #[test]
    fn intersection_and_colon_in_quotient() {
        let r = quot(&["x", "y"], &["x^2"]);
        let x = Ideal::parse(&r, &["x"]).unwrap();
        let m = Ideal::maximal(&r);
        assert!(x.intersect(&m).unwrap().same_as(&x));
        // Ann(x) = (0 : x) = (x)
        assert!(Ideal::zero(&r).colon_elem(&r.base().var(0)).same_as(&x));
        assert!(Ideal::zero(&r).colon(&Ideal::zero(&r)).unwrap().is_unit());
        assert_eq!(r.dim(), 1);
    }

    #[test]
    fn inhomogeneous_generators_rejected() {
        let r = poly_ring(&["x", "y"]);
        assert!(matches!(Ideal::parse(&r, &["x + y^2"]), Err(Error::Inhomogeneous(_))));
        let base = BaseRing::standard(&["x"], Field::Rational).unwrap();
        assert!(QuotRing::new(base.clone(), vec![base.one()]).is_err());
    }
}
