//! Buchberger's algorithm for submodules of graded free modules.
//!
//! Ideals are the rank-one case. The module order compares, in turn: an
//! optional elimination block (positions below `elim` dominate), the shifted
//! weighted degree, the monomial under weighted grevlex, and finally the
//! position (lower index is larger). With `elim = 0` this is the usual
//! term-over-position extension of grevlex.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::field::{Coef, Field};
use crate::poly::{grevlex_cmp, BaseRing, Monomial, Poly};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VTerm {
    pub pos: usize,
    pub mono: Monomial,
    pub coef: Coef,
}

/// A sparse element of a free module, terms sorted descending in some [`ModuleOrder`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Vector {
    pub(crate) terms: Vec<VTerm>,
}

impl Vector {
    pub fn zero() -> Vector {
        Vector { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&VTerm> {
        self.terms.first()
    }

    pub fn terms(&self) -> &[VTerm] {
        &self.terms
    }

    /// Split into one polynomial per position (`rank` entries).
    pub fn to_column(&self, ring: &BaseRing, rank: usize) -> Vec<Poly> {
        let mut buckets: Vec<Vec<(Monomial, Coef)>> = vec![Vec::new(); rank];
        for t in &self.terms {
            buckets[t.pos].push((t.mono.clone(), t.coef.clone()));
        }
        buckets.into_iter().map(|b| ring.from_terms(b)).collect()
    }

    /// Restrict to positions `>= offset`, renumbering them from zero.
    pub fn tail_block(&self, offset: usize) -> Vector {
        Vector {
            terms: self
                .terms
                .iter()
                .filter(|t| t.pos >= offset)
                .map(|t| VTerm { pos: t.pos - offset, mono: t.mono.clone(), coef: t.coef.clone() })
                .collect(),
        }
    }

    pub fn has_terms_below(&self, offset: usize) -> bool {
        self.terms.iter().any(|t| t.pos < offset)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleOrder {
    pub field: Field,
    pub weights: Vec<u32>,
    pub shifts: Vec<i64>,
    pub elim: usize,
}

impl ModuleOrder {
    pub fn new(ring: &BaseRing, shifts: Vec<i64>) -> ModuleOrder {
        ModuleOrder { field: ring.field(), weights: ring.weights().to_vec(), shifts, elim: 0 }
    }

    pub fn ideal(ring: &BaseRing) -> ModuleOrder {
        ModuleOrder::new(ring, vec![0])
    }

    pub fn with_elimination(mut self, elim: usize) -> ModuleOrder {
        self.elim = elim;
        self
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    fn term_degree(&self, pos: usize, m: &Monomial) -> i64 {
        m.degree(&self.weights) + self.shifts[pos]
    }

    pub fn cmp(&self, pa: usize, ma: &Monomial, pb: usize, mb: &Monomial) -> Ordering {
        let ba = pa >= self.elim;
        let bb = pb >= self.elim;
        if ba != bb {
            // block 0 (positions below elim) is larger
            return bb.cmp(&ba);
        }
        let da = self.term_degree(pa, ma);
        let db = self.term_degree(pb, mb);
        if da != db {
            return da.cmp(&db);
        }
        match grevlex_cmp(ma, mb, &self.weights) {
            Ordering::Equal => pb.cmp(&pa),
            o => o,
        }
    }

    fn cmp_terms(&self, a: &VTerm, b: &VTerm) -> Ordering {
        self.cmp(a.pos, &a.mono, b.pos, &b.mono)
    }

    /// Build a vector from a column of polynomials.
    pub fn vector_from_column(&self, column: &[Poly]) -> Vector {
        let mut terms: Vec<VTerm> = column
            .iter()
            .enumerate()
            .flat_map(|(pos, p)| {
                p.terms().iter().map(move |(m, c)| VTerm { pos, mono: m.clone(), coef: c.clone() })
            })
            .collect();
        terms.sort_by(|a, b| self.cmp_terms(b, a));
        Vector { terms }
    }

    pub fn vector_from_poly(&self, p: &Poly) -> Vector {
        self.vector_from_column(std::slice::from_ref(p))
    }

    /// Re-sort a vector whose terms came from another order.
    pub fn resort(&self, v: &Vector) -> Vector {
        let mut terms = v.terms.clone();
        terms.sort_by(|a, b| self.cmp_terms(b, a));
        Vector { terms }
    }

    pub fn monic(&self, v: &Vector) -> Vector {
        match v.lead() {
            None => Vector::zero(),
            Some(t) if t.coef.is_one() => v.clone(),
            Some(t) => {
                let inv = self.field.inv(&t.coef);
                Vector {
                    terms: v
                        .terms
                        .iter()
                        .map(|s| VTerm { pos: s.pos, mono: s.mono.clone(), coef: self.field.mul(&s.coef, &inv) })
                        .collect(),
                }
            }
        }
    }

    /// `a - c * m * b`.
    pub fn sub_mul(&self, a: &Vector, b: &Vector, m: &Monomial, c: &Coef) -> Vector {
        let f = &self.field;
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let mut scaled = b.terms.iter().map(|t| VTerm {
            pos: t.pos,
            mono: t.mono.mul(m),
            coef: f.mul(&t.coef, c),
        });
        let mut next_b = scaled.next();
        let mut ia = a.terms.iter();
        let mut next_a = ia.next();
        loop {
            match (next_a, next_b.take()) {
                (None, None) => break,
                (Some(ta), None) => {
                    out.push(ta.clone());
                    next_a = ia.next();
                }
                (None, Some(tb)) => {
                    out.push(VTerm { coef: f.neg(&tb.coef), ..tb });
                    next_b = scaled.next();
                }
                (Some(ta), Some(tb)) => match self.cmp_terms(ta, &tb) {
                    Ordering::Greater => {
                        out.push(ta.clone());
                        next_a = ia.next();
                        next_b = Some(tb);
                    }
                    Ordering::Less => {
                        out.push(VTerm { coef: f.neg(&tb.coef), ..tb });
                        next_b = scaled.next();
                    }
                    Ordering::Equal => {
                        let c = f.sub(&ta.coef, &tb.coef);
                        if !c.is_zero() {
                            out.push(VTerm { pos: ta.pos, mono: ta.mono.clone(), coef: c });
                        }
                        next_a = ia.next();
                        next_b = scaled.next();
                    }
                },
            }
        }
        Vector { terms: out }
    }

    pub fn add(&self, a: &Vector, b: &Vector) -> Vector {
        let one = self.field.one();
        let minus = self.field.neg(&one);
        let m = match b.lead() {
            Some(t) => Monomial::one(t.mono.0.len()),
            None => return a.clone(),
        };
        self.sub_mul(a, b, &m, &minus)
    }

    pub fn scale(&self, a: &Vector, m: &Monomial, c: &Coef) -> Vector {
        if c.is_zero() {
            return Vector::zero();
        }
        Vector {
            terms: a
                .terms
                .iter()
                .map(|t| VTerm { pos: t.pos, mono: t.mono.mul(m), coef: self.field.mul(&t.coef, c) })
                .collect(),
        }
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    pos: usize,
    lcm: Monomial,
    degree: i64,
}

/// A reduced Gröbner basis together with the order it was computed for.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    order: ModuleOrder,
    elems: Vec<Vector>,
}

impl GroebnerBasis {
    pub fn order(&self) -> &ModuleOrder {
        &self.order
    }

    pub fn elements(&self) -> &[Vector] {
        &self.elems
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Buchberger with the normal selection strategy (lowest degree first)
    /// and the Gebauer–Möller pair criteria; the coprime-leads criterion is
    /// only applied in rank one, where it is valid.
    pub fn compute(order: ModuleOrder, gens: Vec<Vector>) -> GroebnerBasis {
        let rank_one = order.rank() == 1;
        let mut pending: Vec<Vector> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        pending.sort_by(|a, b| {
            let ta = a.lead().unwrap();
            let tb = b.lead().unwrap();
            order.cmp(tb.pos, &tb.mono, ta.pos, &ta.mono)
        });
        pending.reverse();
        let mut basis: Vec<Vector> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();

        loop {
            let next_input_degree = pending.last().map(|v| {
                let t = v.lead().unwrap();
                order.term_degree(t.pos, &t.mono)
            });
            let best_pair = pairs
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    a.degree.cmp(&b.degree).then_with(|| order.cmp(a.pos, &a.lcm, b.pos, &b.lcm))
                })
                .map(|(k, p)| (k, p.degree));
            let candidate = match (next_input_degree, best_pair) {
                (None, None) => break,
                (Some(_), None) => pending.pop().unwrap(),
                (Some(d), Some((_, pd))) if d <= pd => pending.pop().unwrap(),
                (_, Some((k, _))) => {
                    let p = pairs.swap_remove(k);
                    s_vector(&order, &basis[p.i], &basis[p.j], &p.lcm)
                }
            };
            let h = reduce_with(&order, &basis, candidate);
            if h.is_zero() {
                continue;
            }
            let h = order.monic(&h);
            update_pairs(&order, &basis, &mut pairs, &h, rank_one);
            basis.push(h);
        }
        GroebnerBasis { elems: interreduce(&order, basis), order }
    }

    /// Full normal form of `v`.
    pub fn reduce(&self, v: &Vector) -> Vector {
        reduce_with(&self.order, &self.elems, v.clone())
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).is_zero()
    }

    /// True when the basis contains a unit vector (a constant in rank one).
    pub fn contains_constant_at(&self, pos: usize) -> bool {
        self.elems.iter().any(|e| {
            let t = e.lead().unwrap();
            t.pos == pos && t.mono.is_one()
        })
    }

    pub fn lead_monomials(&self) -> Vec<(usize, Monomial)> {
        self.elems.iter().map(|e| {
            let t = e.lead().unwrap();
            (t.pos, t.mono.clone())
        }).collect()
    }
}

fn s_vector(order: &ModuleOrder, a: &Vector, b: &Vector, lcm: &Monomial) -> Vector {
    let la = a.lead().unwrap();
    let lb = b.lead().unwrap();
    let ma = la.mono.quotient_of(lcm);
    let mb = lb.mono.quotient_of(lcm);
    let one = order.field.one();
    let sa = order.scale(a, &ma, &one);
    order.sub_mul(&sa, b, &mb, &one)
}

fn find_divisor<'a>(basis: &'a [Vector], pos: usize, mono: &Monomial) -> Option<&'a Vector> {
    basis.iter().find(|g| {
        let t = g.lead().unwrap();
        t.pos == pos && t.mono.divides(mono)
    })
}

fn reduce_with(order: &ModuleOrder, basis: &[Vector], mut p: Vector) -> Vector {
    let mut start = 0;
    while start < p.terms.len() {
        let t = &p.terms[start];
        match find_divisor(basis, t.pos, &t.mono) {
            Some(g) => {
                let lg = g.lead().unwrap();
                let m = lg.mono.quotient_of(&t.mono);
                let c = order.field.div(&t.coef, &lg.coef);
                p = order.sub_mul(&p, g, &m, &c);
            }
            None => start += 1,
        }
    }
    p
}

fn update_pairs(order: &ModuleOrder, basis: &[Vector], pairs: &mut Vec<Pair>, h: &Vector, rank_one: bool) {
    let k = basis.len();
    let lh = h.lead().unwrap();
    let disjoint = |m: &Monomial| rank_one && m.is_coprime(&lh.mono);

    let mut c: Vec<Pair> = basis
        .iter()
        .enumerate()
        .filter(|(_, g)| g.lead().unwrap().pos == lh.pos)
        .map(|(i, g)| {
            let lcm = g.lead().unwrap().mono.lcm(&lh.mono);
            let degree = order.term_degree(lh.pos, &lcm);
            Pair { i, j: k, pos: lh.pos, lcm, degree }
        })
        .collect();
    let mut d: Vec<Pair> = Vec::new();
    while let Some(p) = c.pop() {
        let gi = &basis[p.i].lead().unwrap().mono;
        let redundant = c.iter().chain(d.iter()).any(|q| q.lcm.divides(&p.lcm));
        if disjoint(gi) || !redundant {
            d.push(p);
        }
    }
    let e: Vec<Pair> = d
        .into_iter()
        .filter(|p| !disjoint(&basis[p.i].lead().unwrap().mono))
        .collect();

    pairs.retain(|p| {
        if p.pos != lh.pos || !lh.mono.divides(&p.lcm) {
            return true;
        }
        let li = basis[p.i].lead().unwrap().mono.lcm(&lh.mono);
        let lj = basis[p.j].lead().unwrap().mono.lcm(&lh.mono);
        li == p.lcm || lj == p.lcm
    });
    pairs.extend(e);
}

fn interreduce(order: &ModuleOrder, mut basis: Vec<Vector>) -> Vec<Vector> {
    basis.sort_by(|a, b| {
        let ta = a.lead().unwrap();
        let tb = b.lead().unwrap();
        order.cmp(ta.pos, &ta.mono, tb.pos, &tb.mono)
    });
    // drop elements whose lead is divisible by an earlier (smaller) lead
    let mut kept: Vec<Vector> = Vec::new();
    for g in basis {
        let t = g.lead().unwrap();
        if find_divisor(&kept, t.pos, &t.mono).is_none() {
            kept.push(g);
        }
    }
    let mut out = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let g = kept[i].clone();
        let others: Vec<Vector> = kept
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let lead = g.terms[0].clone();
        let tail = Vector { terms: g.terms[1..].to_vec() };
        let mut reduced = reduce_with(order, &others, tail);
        reduced.terms.insert(0, lead);
        out.push(order.monic(&reduced));
    }
    out
}
