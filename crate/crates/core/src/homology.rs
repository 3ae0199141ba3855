//! Syzygies, Ext, annihilators, Fitting ideals, grade and pushouts.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groebner::{GroebnerBasis, ModuleOrder};
use crate::ideal::{same_ring, Ideal, QuotRing};
use crate::linalg::{minimal_columns, minimal_columns_over, Span};
use crate::module::{FPModule, ModMap, ShortExact};
use crate::poly::Poly;

/// First syzygy of a minimal presentation together with `0 -> ΩM -> F0 -> M -> 0`.
/// `M` is replaced by its minimal presentation, which is also the right end.
pub fn syzygy_sequence(m: &FPModule) -> Result<ShortExact> {
    let min = m.min_presentation().module;
    let ring = min.ring().clone();
    let f0 = FPModule::free(&ring, min.gen_degrees().to_vec());
    let a = min.relations().to_vec();
    let syz = Span::new(&ring, min.gen_degrees(), a.clone(), min.rel_degrees().to_vec()).syzygies();
    let omega_raw = FPModule::new(&ring, min.rel_degrees().to_vec(), syz)?;
    let omega_min = omega_raw.min_presentation();
    let omega = omega_min.module.clone();
    // omega's generators are images of the raw generators under from_min
    let incl_cols: Vec<Vec<Poly>> = omega_min
        .from_min
        .matrix
        .iter()
        .map(|c| crate::linalg::mat_vec(&ring, &a, min.ngens(), c))
        .collect();
    let inclusion = ModMap::new(omega, f0.clone(), incl_cols)?;
    let projection = ModMap::new(f0, min.clone(), (0..min.ngens()).map(|k| min.unit_vector(k)).collect())?;
    Ok(ShortExact { inclusion, projection })
}

/// `Ω^n M`, minimally presented.
pub fn syzygy(m: &FPModule, n: usize) -> Result<FPModule> {
    if n == 0 {
        return Ok(m.min_presentation().module);
    }
    let mut cur = m.clone();
    for _ in 0..n {
        cur = syzygy_sequence(&cur)?.inclusion.source;
    }
    Ok(cur)
}

/// Minimal graded free resolution up to homological degree `len`:
/// `ranks[i]` are the generator degrees of `F_i` and `maps[i]` the columns of
/// `F_{i+1} -> F_i`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub degrees: Vec<Vec<i64>>,
    pub maps: Vec<Vec<Vec<Poly>>>,
}

pub fn resolve(m: &FPModule, len: usize) -> Resolution {
    let min = m.min_presentation().module;
    let ring = min.ring().clone();
    let mut degrees = vec![min.gen_degrees().to_vec()];
    let mut maps = vec![min.relations().to_vec()];
    degrees.push(min.rel_degrees().to_vec());
    while maps.len() < len {
        let last = maps.last().unwrap();
        if last.is_empty() {
            break;
        }
        let k = maps.len();
        let syz = Span::new(&ring, &degrees[k - 1], last.clone(), degrees[k].clone()).syzygies();
        let degs: Vec<i64> = syz
            .iter()
            .map(|c| crate::linalg::column_degree(&ring, &degrees[k], c).unwrap())
            .collect();
        let (cols, degs) = minimal_columns(&ring, &degrees[k], syz, degs);
        maps.push(cols);
        degrees.push(degs);
    }
    Resolution { degrees, maps }
}

/// `Hom(F, N)` for free `F` with generator degrees `f`, as `N^r` with shifted generators.
fn hom_free(f: &[i64], n: &FPModule) -> Result<FPModule> {
    let parts: Vec<FPModule> = f.iter().map(|&d| n.twist(d)).collect();
    if parts.is_empty() {
        return Ok(FPModule::zero(n.ring()));
    }
    FPModule::direct_sum(&parts)
}

/// `Hom(F', N) -> Hom(F, N)` induced by `d: F -> F'` (columns of `d` indexed by `F`).
fn hom_map(d: &[Vec<Poly>], src: &FPModule, tgt: &FPModule, nf: usize, nn: usize, ngen_n: usize) -> Result<ModMap> {
    let base = src.ring().base();
    let mut matrix = Vec::with_capacity(nf * ngen_n);
    for a in 0..nf {
        for l in 0..ngen_n {
            let mut col = vec![base.zero(); nn * ngen_n];
            for (k, dk) in d.iter().enumerate() {
                let c = &dk[a];
                if !c.is_zero() {
                    col[k * ngen_n + l] = c.clone();
                }
            }
            matrix.push(col);
        }
    }
    ModMap::new(src.clone(), tgt.clone(), matrix)
}

/// `Ext^i` as a subquotient of a graded free module: cycles over boundaries
/// plus the relations of `Hom(F_i, N)`.
struct Subquotient {
    degrees: Vec<i64>,
    boundaries: Vec<Vec<Poly>>,
    cycles: Vec<Vec<Poly>>,
    cycle_degrees: Vec<i64>,
}

fn ext_subquotient(m: &FPModule, n: &FPModule, i: usize) -> Result<Option<Subquotient>> {
    same_ring(m.ring(), n.ring())?;
    let res = resolve(m, i + 1);
    if res.degrees.len() <= i || res.degrees[i].is_empty() {
        return Ok(None);
    }
    let g = n.ngens();
    let hom_i = hom_free(&res.degrees[i], n)?;
    // cycles: kernel of Hom(F_i, N) -> Hom(F_{i+1}, N)
    let (cycles, cycle_degrees) = if i < res.maps.len() && !res.maps[i].is_empty() {
        let hom_next = hom_free(&res.degrees[i + 1], n)?;
        let d = hom_map(&res.maps[i], &hom_i, &hom_next, res.degrees[i].len(), res.degrees[i + 1].len(), g)?;
        d.kernel_generators()
    } else {
        let cols: Vec<Vec<Poly>> = (0..hom_i.ngens()).map(|k| hom_i.unit_vector(k)).collect();
        (cols, hom_i.gen_degrees().to_vec())
    };
    // boundaries: image of Hom(F_{i-1}, N) -> Hom(F_i, N)
    let mut boundaries = hom_i.relations().to_vec();
    if i > 0 {
        let hom_prev = hom_free(&res.degrees[i - 1], n)?;
        let d = hom_map(&res.maps[i - 1], &hom_prev, &hom_i, res.degrees[i - 1].len(), res.degrees[i].len(), g)?;
        boundaries.extend(d.matrix.iter().cloned());
    }
    Ok(Some(Subquotient { degrees: hom_i.gen_degrees().to_vec(), boundaries, cycles, cycle_degrees }))
}

/// `Ext^i_R(M, N)` as the homology of `Hom(F•, N)`.
pub fn ext(m: &FPModule, n: &FPModule, i: usize) -> Result<FPModule> {
    let ring = m.ring().clone();
    let Some(sq) = ext_subquotient(m, n, i)? else { return Ok(FPModule::zero(&ring)) };
    let (cycles, degrees) = prune_cycles(&ring, &sq);
    let quotient = FPModule::new(&ring, sq.degrees, sq.boundaries)?;
    let (e, _) = quotient.submodule(cycles, degrees)?;
    Ok(e.min_presentation().module)
}

pub fn ext1(m: &FPModule, n: &FPModule) -> Result<FPModule> {
    ext(m, n, 1)
}

/// `Ann Ext^i_R(M, N)`, without presenting the Ext module.
pub fn ext_annihilator(m: &FPModule, n: &FPModule, i: usize) -> Result<Ideal> {
    let ring = m.ring();
    let Some(sq) = ext_subquotient(m, n, i)? else { return Ok(Ideal::unit(ring)) };
    let (cycles, degrees) = prune_cycles(ring, &sq);
    let mut acc = Ideal::unit(ring);
    for (c, &d) in cycles.iter().zip(&degrees) {
        let colon = Ideal::new(ring, colon_vector(ring, &sq.degrees, &sq.boundaries, c, d))?;
        acc = acc.intersect(&colon)?;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

/// `Ann` of the class of `0 -> ΩX -> F_0 -> X -> 0` in `Ext^1(X, ΩX)`. The
/// cocycle is the projection `F_1 -> ΩX`, taken modulo the image of `Hom(F_0, ΩX)`.
pub fn syzygy_class_annihilator(x: &FPModule) -> Result<Ideal> {
    let min = x.min_presentation().module;
    let ring = min.ring().clone();
    let a = min.relations().to_vec();
    if a.is_empty() {
        return Ok(Ideal::unit(&ring));
    }
    let f1 = min.rel_degrees().to_vec();
    let syz = Span::new(&ring, min.gen_degrees(), a.clone(), f1.clone()).syzygies();
    let omega = FPModule::new(&ring, f1.clone(), syz)?;
    let g = omega.ngens();
    let hom1 = hom_free(&f1, &omega)?;
    let hom0 = hom_free(min.gen_degrees(), &omega)?;
    let d = hom_map(&a, &hom0, &hom1, min.ngens(), g, g)?;
    let mut boundaries = hom1.relations().to_vec();
    boundaries.extend(d.matrix.iter().cloned());
    let mut eta = hom1.zero_vector();
    for j in 0..g {
        eta[j * g + j] = ring.base().one();
    }
    let deg = crate::linalg::column_degree(&ring, hom1.gen_degrees(), &eta).expect("degree-zero cocycle");
    Ideal::new(&ring, colon_vector(&ring, hom1.gen_degrees(), &boundaries, &eta, deg))
}

/// Cycles minimally generating `(C + B) / B`, lowest degrees first.
fn prune_cycles(ring: &Arc<QuotRing>, sq: &Subquotient) -> (Vec<Vec<Poly>>, Vec<i64>) {
    let bdeg: Vec<i64> = sq.boundaries.iter().map(|c| crate::linalg::column_degree(ring, &sq.degrees, c).unwrap_or(0)).collect();
    minimal_columns_over(ring, &sq.degrees, &sq.boundaries, &bdeg, sq.cycles.clone(), sq.cycle_degrees.clone())
}

/// `Ann_R M`, the intersection over generators of `(relations : e_k)`.
pub fn annihilator(m: &FPModule) -> Ideal {
    let ring = m.ring();
    let mut acc = Ideal::unit(ring);
    for k in 0..m.ngens() {
        let c = m.unit_vector(k);
        let colon = Ideal::new(ring, colon_vector(ring, m.gen_degrees(), m.relations(), &c, m.gen_degrees()[k])).expect("homogeneous");
        acc = acc.intersect(&colon).expect("same ring");
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// Generators in `S` of `(U + J F : c)` for `c` of degree `d`: eliminate the
/// `F` block from the span of `(u, 0)` and `(c, 1)`.
fn colon_vector(ring: &QuotRing, degrees: &[i64], rels: &[Vec<Poly>], c: &[Poly], d: i64) -> Vec<Poly> {
    let base = ring.base();
    let g = degrees.len();
    let mut shifts = degrees.to_vec();
    shifts.push(d);
    let order = ModuleOrder::new(base, shifts).with_elimination(g);
    let mut gens = Vec::new();
    for col in rels {
        let mut v = col.clone();
        v.push(base.zero());
        gens.push(order.vector_from_column(&v));
    }
    for h in ring.defining() {
        for i in 0..g {
            let mut v = vec![base.zero(); g + 1];
            v[i] = h.clone();
            gens.push(order.vector_from_column(&v));
        }
    }
    let mut v = c.to_vec();
    v.push(base.one());
    gens.push(order.vector_from_column(&v));
    let gb = GroebnerBasis::compute(order, gens);
    gb.elements()
        .iter()
        .filter(|v| !v.has_terms_below(g))
        .map(|v| v.tail_block(g).to_column(base, 1).remove(0))
        .collect()
}

/// The `r`-th Fitting ideal: `(g - r)`-minors of a presentation matrix.
pub fn fitting_ideal(m: &FPModule, r: usize) -> Ideal {
    let min = m.min_presentation().module;
    let ring = min.ring();
    let g = min.ngens();
    if r >= g {
        return Ideal::unit(ring);
    }
    let size = g - r;
    let cols = min.relations();
    if size > cols.len() {
        return Ideal::zero(ring);
    }
    let mut gens = Vec::new();
    for rows in subsets(g, size) {
        for cs in subsets(cols.len(), size) {
            let sub: Vec<Vec<Poly>> = rows.iter().map(|&i| cs.iter().map(|&j| cols[j][i].clone()).collect()).collect();
            let d = ring.reduce(&determinant(ring, &sub));
            if !d.is_zero() {
                gens.push(d);
            }
        }
    }
    Ideal::new(ring, gens).expect("minors of a homogeneous matrix are homogeneous")
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Laplace expansion along the first row.
fn determinant(ring: &QuotRing, a: &[Vec<Poly>]) -> Poly {
    let base = ring.base();
    let n = a.len();
    if n == 0 {
        return base.one();
    }
    if n == 1 {
        return a[0][0].clone();
    }
    let mut acc = base.zero();
    for j in 0..n {
        if a[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = a[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = ring.mul(&a[0][j], &determinant(ring, &minor));
        acc = if j % 2 == 0 { base.add(&acc, &term) } else { base.sub(&acc, &term) };
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grade {
    Finite(usize),
    Infinite,
}

/// Least `i` with `Ext^i(R/I, M) ≠ 0`, searched up to the number of variables.
pub fn grade(ideal: &Ideal, m: &FPModule) -> Result<Grade> {
    if ideal.is_unit() {
        return Err(Error::UnitIdeal("grade with respect to the unit ideal".into()));
    }
    if m.is_zero() {
        return Ok(Grade::Infinite);
    }
    let quotient = FPModule::cyclic(ideal, 0);
    let bound = ideal.ring().nvars();
    for i in 0..=bound {
        if !ext(&quotient, m, i)?.is_zero() {
            return Ok(Grade::Finite(i));
        }
    }
    Err(Error::GradeBound(bound + 1))
}

/// Pushout of `f: A -> B` and `g: A -> C`: `P = (B ⊕ C) / {(f a, -g a)}`.
pub fn pushout(f: &ModMap, g: &ModMap) -> Result<(FPModule, ModMap, ModMap)> {
    same_ring(f.source.ring(), g.source.ring())?;
    let ring: Arc<QuotRing> = f.source.ring().clone();
    let base = ring.base();
    if f.source.gen_degrees() != g.source.gen_degrees() || f.source.relations() != g.source.relations() {
        return Err(Error::Precondition("pushout legs have different sources".into()));
    }
    let b = &f.target;
    let c = &g.target;
    let nb = b.ngens();
    let nc = c.ngens();
    let mut degrees = b.gen_degrees().to_vec();
    degrees.extend_from_slice(c.gen_degrees());
    let mut rels = Vec::new();
    for col in b.relations() {
        let mut v = col.clone();
        v.extend((0..nc).map(|_| base.zero()));
        rels.push(v);
    }
    for col in c.relations() {
        let mut v: Vec<Poly> = (0..nb).map(|_| base.zero()).collect();
        v.extend(col.iter().cloned());
        rels.push(v);
    }
    for (fc, gc) in f.matrix.iter().zip(&g.matrix) {
        let mut v = fc.clone();
        v.extend(gc.iter().map(|p| base.neg(p)));
        rels.push(v);
    }
    let p = FPModule::new(&ring, degrees, rels)?;
    let into_b: Vec<Vec<Poly>> = (0..nb).map(|k| p.unit_vector(k)).collect();
    let into_c: Vec<Vec<Poly>> = (0..nc).map(|k| p.unit_vector(nb + k)).collect();
    let ib = ModMap::new(b.clone(), p.clone(), into_b)?;
    let ic = ModMap::new(c.clone(), p.clone(), into_c)?;
    Ok((p, ib, ic))
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

    fn cyclic(r: &Arc<QuotRing>, gens: &[&str]) -> FPModule {
        FPModule::cyclic(&Ideal::parse(r, gens).unwrap(), 0)
    }

    #[test]
    fn syzygy_of_residue_field_of_line() {
        let r = ring(&["x", "y"], &["x^2"]);
        let rx = cyclic(&r, &["x"]);
        let om = syzygy(&rx, 1).unwrap();
        assert!(om.same_up_to_shift(&rx));
        assert!(syzygy(&FPModule::free(&r, vec![0, 1]), 1).unwrap().is_zero());
        let seq = syzygy_sequence(&rx).unwrap();
        seq.check().unwrap();
    }

    #[test]
    fn class_of_the_syzygy_sequence() {
        let r = ring(&["x", "y"], &["x^2"]);
        let rx = cyclic(&r, &["x"]);
        assert!(syzygy_class_annihilator(&rx).unwrap().same_as(&Ideal::parse(&r, &["x"]).unwrap()));
        let full = ext_annihilator(&rx, &syzygy(&rx, 1).unwrap(), 1).unwrap();
        assert!(full.same_as(&Ideal::parse(&r, &["x"]).unwrap()));
        assert!(syzygy_class_annihilator(&FPModule::free(&r, vec![0])).unwrap().is_unit());
        let i2 = FPModule::from_ideal(&Ideal::parse(&r, &["x", "y^2"]).unwrap());
        let a = syzygy_class_annihilator(&i2).unwrap();
        assert!(a.radical_contains(&r.base().var(0)) && a.radical_contains(&r.base().var(1)));
        assert!(!a.is_unit());
    }

    #[test]
    fn koszul_syzygy() {
        let r = ring(&["x", "y"], &[]);
        let k = cyclic(&r, &["x", "y"]);
        let om = syzygy(&k, 1).unwrap();
        let m = FPModule::from_ideal(&Ideal::maximal(&r));
        assert!(om.same_up_to_shift(&m));
        assert_eq!(om.relations().len(), 1);
    }

    #[test]
    fn ext_examples() {
        let r = ring(&["x"], &["x^2"]);
        let k = cyclic(&r, &["x"]);
        let e = ext1(&k, &k).unwrap();
        assert_eq!(e.ngens(), 1);
        assert!(annihilator(&e).same_as(&Ideal::maximal(&r)));
        let free = FPModule::free(&r, vec![0]);
        assert!(ext1(&free, &k).unwrap().is_zero());

        let r2 = ring(&["x", "y"], &["x^2"]);
        let rx = cyclic(&r2, &["x"]);
        let e = ext1(&rx, &rx).unwrap();
        assert!(annihilator(&e).same_as(&Ideal::parse(&r2, &["x"]).unwrap()));
    }

    #[test]
    fn annihilators() {
        let r = ring(&["x", "y"], &["x^2"]);
        assert!(annihilator(&FPModule::zero(&r)).is_unit());
        let rx = cyclic(&r, &["x"]);
        assert!(annihilator(&rx).same_as(&Ideal::parse(&r, &["x"]).unwrap()));
        let s = FPModule::direct_sum(&[rx.clone(), cyclic(&r, &["x", "y"])]).unwrap();
        assert!(annihilator(&s).same_as(&Ideal::parse(&r, &["x"]).unwrap()));
    }

    #[test]
    fn fitting_ideals() {
        let r = ring(&["x", "y"], &[]);
        let rx = cyclic(&r, &["x"]);
        assert!(fitting_ideal(&rx, 0).same_as(&Ideal::parse(&r, &["x"]).unwrap()));
        let f2 = FPModule::free(&r, vec![0, 0]);
        assert!(fitting_ideal(&f2, 2).is_unit());
        assert!(fitting_ideal(&f2, 1).is_zero());
        let p = |s: &str| r.base().parse_poly(s).unwrap();
        let m = FPModule::new(&r, vec![0, 0], vec![vec![p("x"), p("0")], vec![p("y"), p("x")]]).unwrap();
        assert!(fitting_ideal(&m, 0).same_as(&Ideal::parse(&r, &["x^2"]).unwrap()));
    }

    #[test]
    fn grades() {
        let r = ring(&["x", "y"], &[]);
        let free = FPModule::free(&r, vec![0]);
        assert_eq!(grade(&Ideal::maximal(&r), &free).unwrap(), Grade::Finite(2));
        let q = ring(&["x", "y"], &["x^2"]);
        assert_eq!(grade(&Ideal::maximal(&q), &FPModule::free(&q, vec![0])).unwrap(), Grade::Finite(1));
        assert_eq!(grade(&Ideal::maximal(&q), &FPModule::zero(&q)).unwrap(), Grade::Infinite);
        assert!(grade(&Ideal::unit(&q), &FPModule::free(&q, vec![0])).is_err());
    }

    #[test]
    fn pushouts() {
        let r = ring(&["x", "y"], &["x^2"]);
        let rx = cyclic(&r, &["x"]);
        let id = ModMap::identity(&rx);
        let (p, ib, ic) = pushout(&id, &id).unwrap();
        assert!(p.same_up_to_shift(&rx));
        assert!(id.then(&ib).unwrap().same_as(&id.then(&ic).unwrap()));
        let zero = FPModule::zero(&r);
        let to_zero = ModMap::zero(&rx, &zero);
        let x = ModMap::new(rx.clone(), rx.twist(1), vec![vec![r.base().var(1)]]).unwrap();
        let (p, _, _) = pushout(&to_zero, &x).unwrap();
        let (c, _) = x.cokernel().unwrap();
        assert!(p.same_up_to_shift(&c));
    }
}
