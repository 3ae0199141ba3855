//! Minimal primes of homogeneous ideals by recursive splitting.
//!
//! The splitter eliminates variables appearing linearly, splits on reducible
//! basis elements (monomial content, or factorization when at most two
//! variables are involved) and separates components by saturating with a
//! variable. Leaves are certified prime: generated by variables up to linear
//! substitution, or principal and visibly irreducible. Anything else is an
//! error rather than a guess.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::factor::factor_homogeneous;
use crate::ideal::{colon_poly, dim_from_gb, gb_polys, groebner, Ideal, QuotRing};
use crate::poly::{BaseRing, Poly};

/// Output of [`minimal_primes`]; `empty_variety` is set exactly for the unit ideal.
#[derive(Clone, Debug)]
pub struct MinimalPrimes {
    pub primes: Vec<Ideal>,
    pub empty_variety: bool,
}

pub fn minimal_primes(ideal: &Ideal) -> Result<MinimalPrimes> {
    let ring = ideal.ring();
    if ideal.is_unit() {
        return Ok(MinimalPrimes { primes: Vec::new(), empty_variety: true });
    }
    let comps = decompose(ring.base(), ideal.preimage_gens(), 0)?;
    let primes = minimalize(ring, comps)?;
    Ok(MinimalPrimes { primes, empty_variety: false })
}

/// Minimal primes of an ideal of `S` given by generators; the list is sorted canonically.
pub fn minimal_primes_of_polys(ring: &Arc<QuotRing>, gens: Vec<Poly>) -> Result<Vec<Ideal>> {
    let comps = decompose(ring.base(), gens, 0)?;
    minimalize(ring, comps)
}

fn minimalize(ring: &Arc<QuotRing>, comps: Vec<Vec<Poly>>) -> Result<Vec<Ideal>> {
    let mut ideals: Vec<Ideal> = Vec::new();
    for c in comps {
        let i = Ideal::new(ring, c)?;
        if !ideals.iter().any(|j| j.same_as(&i)) {
            ideals.push(i);
        }
    }
    let mut keep: Vec<Ideal> = Vec::new();
    for (k, p) in ideals.iter().enumerate() {
        let redundant = ideals.iter().enumerate().any(|(j, q)| j != k && p.contains_ideal(q) && !q.contains_ideal(p));
        if !redundant {
            keep.push(Ideal::new(ring, p.canonical_gens())?);
        }
    }
    keep.sort_by_key(|p| sort_key(p));
    Ok(keep)
}

/// Order primes by dimension (largest first), then by printed generators.
pub(crate) fn sort_key(p: &Ideal) -> (i64, String) {
    (-p.krull_dim(), p.format())
}

const MAX_DEPTH: usize = 64;

fn decompose(ring: &BaseRing, gens: Vec<Poly>, depth: usize) -> Result<Vec<Vec<Poly>>> {
    if depth > MAX_DEPTH {
        return Err(Error::SplittingStalled("recursion limit".into()));
    }
    let gb = groebner(ring, &gens);
    if gb.contains_constant_at(0) {
        return Ok(Vec::new());
    }
    let basis = gb_polys(ring, &gb);
    if basis.is_empty() {
        return Ok(vec![Vec::new()]);
    }

    if let Some((k, v)) = linear_variable(ring, &basis) {
        let g = &basis[k];
        let c = g.terms().iter().find(|(m, _)| m.0[v] == 1).unwrap().1.clone();
        let rest = ring.sub(g, &ring.monomial(crate::poly::Monomial::var(ring.nvars(), v), c.clone()));
        let value = ring.scale(&rest, &ring.field().neg(&ring.field().inv(&c)));
        let others: Vec<Poly> = basis
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, h)| ring.substitute(h, v, &value))
            .filter(|h| !h.is_zero())
            .collect();
        let sub = decompose(ring, others, depth + 1)?;
        return Ok(sub
            .into_iter()
            .map(|mut p| {
                p.push(g.clone());
                p
            })
            .collect());
    }

    for g in &basis {
        if let Some(parts) = split_element(ring, g)? {
            let mut out = Vec::new();
            for h in parts {
                let mut next = basis.clone();
                next.push(h);
                out.extend(decompose(ring, next, depth + 1)?);
            }
            return Ok(out);
        }
    }

    if let Some(leaf) = certified_prime(ring, &basis, &gb)? {
        return Ok(vec![leaf]);
    }

    // separate the components on which some variable vanishes
    let vars = used_variables(&basis);
    for &v in &vars {
        let x = ring.var(v);
        let sat = saturate_polys(ring, &basis, &x);
        let same = groebner(ring, &sat).elements() == gb.elements();
        if same {
            continue;
        }
        let mut with_v = basis.clone();
        with_v.push(x);
        let mut out = decompose(ring, with_v, depth + 1)?;
        if !groebner(ring, &sat).contains_constant_at(0) {
            out.extend(decompose(ring, sat, depth + 1)?);
        }
        return Ok(out);
    }
    let shown: Vec<String> = basis.iter().map(|g| ring.format(g)).collect();
    Err(Error::SplittingStalled(shown.join(", ")))
}

fn saturate_polys(ring: &BaseRing, gens: &[Poly], f: &Poly) -> Vec<Poly> {
    let mut cur = gb_polys(ring, &groebner(ring, gens));
    loop {
        let next = colon_poly(ring, &cur, f);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

fn used_variables(basis: &[Poly]) -> Vec<usize> {
    let mut vars: Vec<usize> = basis.iter().flat_map(|g| g.variables()).collect();
    vars.sort_unstable();
    vars.dedup();
    vars
}

/// A basis element `c*v + h` with `v` absent from `h`.
fn linear_variable(ring: &BaseRing, basis: &[Poly]) -> Option<(usize, usize)> {
    for (k, g) in basis.iter().enumerate() {
        for v in 0..ring.nvars() {
            let linear = g.terms().iter().filter(|(m, _)| m.0[v] > 0).collect::<Vec<_>>();
            if linear.len() == 1 && linear[0].0 .0[v] == 1 && linear[0].0.degree(ring.weights()) == ring.weights()[v] as i64 {
                return Some((k, v));
            }
        }
    }
    None
}

/// Proper factors of a reducible element, or `None` if it is irreducible or
/// cannot be factored with the available tools.
fn split_element(ring: &BaseRing, g: &Poly) -> Result<Option<Vec<Poly>>> {
    let content = g.monomial_content().unwrap();
    let vars = g.variables();
    if !content.is_one() {
        let mut parts: Vec<Poly> = content.support().map(|v| ring.var(v)).collect();
        let rest = ring.from_terms(g.terms().iter().map(|(m, c)| (content.quotient_of(m), c.clone())).collect());
        if !rest.is_constant() {
            parts.push(rest);
        }
        if parts.len() == 1 && content.support().all(|v| content.0[v] == 1) {
            return Ok(None);
        }
        return Ok(Some(parts));
    }
    if vars.len() <= 2 {
        let factors = factor_homogeneous(ring, g)?;
        if factors.len() == 1 && factors[0].1 == 1 {
            return Ok(None);
        }
        return Ok(Some(factors.into_iter().map(|(h, _)| h).collect()));
    }
    Ok(None)
}

/// Recognize ideals that are prime by inspection.
fn certified_prime(ring: &BaseRing, basis: &[Poly], gb: &crate::groebner::GroebnerBasis) -> Result<Option<Vec<Poly>>> {
    let vars = used_variables(basis);
    // zero-dimensional in its own variables: the radical is generated by them
    let sub_dim = dim_from_gb(ring.nvars(), gb) - (ring.nvars() - vars.len()) as i64;
    if sub_dim == 0 {
        return Ok(Some(vars.iter().map(|&v| ring.var(v)).collect()));
    }
    if let [g] = basis {
        if is_irreducible(ring, g)? {
            return Ok(Some(vec![g.clone()]));
        }
    }
    Ok(None)
}

fn is_irreducible(ring: &BaseRing, g: &Poly) -> Result<bool> {
    if !g.monomial_content().unwrap().is_one() {
        return Ok(g.terms().len() == 1 && g.variables().len() == 1 && g.max_exponent(g.variables()[0]) == 1);
    }
    if g.variables().len() <= 2 {
        let f = factor_homogeneous(ring, g)?;
        return Ok(f.len() == 1 && f[0].1 == 1);
    }
    // linear in some variable with monomial coefficient coprime to the rest
    for v in g.variables() {
        if g.max_exponent(v) != 1 {
            continue;
        }
        let with_v: Vec<_> = g.terms().iter().filter(|(m, _)| m.0[v] == 1).collect();
        if with_v.len() != 1 {
            continue;
        }
        let mut a = with_v[0].0.clone();
        a.0[v] = 0;
        let rest = ring.from_terms(
            g.terms().iter().filter(|(m, _)| m.0[v] == 0).cloned().collect(),
        );
        if rest.is_zero() {
            continue;
        }
        if a.is_coprime(&rest.monomial_content().unwrap()) {
            return Ok(true);
        }
    }
    Ok(false)
}
