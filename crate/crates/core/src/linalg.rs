//! Linear algebra over a quotient ring `R = S/J`, done in `S` by adjoining
//! `h * e_i` for every defining generator `h` and position `i`.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_traits::Zero;

use crate::groebner::{GroebnerBasis, ModuleOrder};
use crate::ideal::QuotRing;
use crate::field::Coef;
use crate::poly::{Monomial, Poly};
use crate::syzygy::TrackedBasis;

/// The span of homogeneous columns in a graded free `R`-module.
#[derive(Clone, Debug)]
pub struct Span {
    ring: Arc<QuotRing>,
    shifts: Vec<i64>,
    cols: Vec<Vec<Poly>>,
    col_degrees: Vec<i64>,
    tracked: OnceLock<TrackedBasis>,
    plain: OnceLock<GroebnerBasis>,
}

impl Span {
    /// `shifts` are the degrees of the free basis, `col_degrees` the degrees of the columns.
    pub fn new(ring: &Arc<QuotRing>, shifts: &[i64], cols: Vec<Vec<Poly>>, col_degrees: Vec<i64>) -> Span {
        debug_assert_eq!(cols.len(), col_degrees.len());
        Span {
            ring: ring.clone(),
            shifts: shifts.to_vec(),
            cols,
            col_degrees,
            tracked: OnceLock::new(),
            plain: OnceLock::new(),
        }
    }

    fn defining_columns(&self) -> (Vec<Vec<Poly>>, Vec<i64>) {
        let base = self.ring.base();
        let rank = self.shifts.len();
        let mut cols = Vec::new();
        let mut degs = Vec::new();
        for h in self.ring.defining() {
            let d = base.degree(h).unwrap();
            for i in 0..rank {
                let mut c = vec![base.zero(); rank];
                c[i] = h.clone();
                cols.push(c);
                degs.push(self.shifts[i] + d);
            }
        }
        (cols, degs)
    }

    fn tracked(&self) -> &TrackedBasis {
        self.tracked.get_or_init(|| {
            let (jc, jd) = self.defining_columns();
            let mut cols = self.cols.clone();
            cols.extend(jc);
            let mut degs = self.col_degrees.clone();
            degs.extend(jd);
            TrackedBasis::new(self.ring.base(), &self.shifts, &cols, &degs)
        })
    }

    fn plain(&self) -> &GroebnerBasis {
        self.plain.get_or_init(|| {
            let order = ModuleOrder::new(self.ring.base(), self.shifts.clone());
            let (jc, _) = self.defining_columns();
            let gens = self.cols.iter().chain(jc.iter()).map(|c| order.vector_from_column(c)).collect();
            GroebnerBasis::compute(order, gens)
        })
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn columns(&self) -> &[Vec<Poly>] {
        &self.cols
    }

    pub fn column_degrees(&self) -> &[i64] {
        &self.col_degrees
    }

    pub fn contains(&self, w: &[Poly]) -> bool {
        let gb = self.plain();
        gb.reduce(&gb.order().vector_from_column(w)).is_zero()
    }

    /// Canonical representative of `w` modulo the span.
    pub fn reduce(&self, w: &[Poly]) -> Vec<Poly> {
        let gb = self.plain();
        gb.reduce(&gb.order().vector_from_column(w)).to_column(self.ring.base(), self.rank())
    }

    /// Syzygies over `R` of the columns, reduced modulo `J`, zero columns dropped.
    pub fn syzygies(&self) -> Vec<Vec<Poly>> {
        let m = self.cols.len();
        self.tracked()
            .syzygies()
            .into_iter()
            .map(|s| s[..m].iter().map(|p| self.ring.reduce(p)).collect::<Vec<_>>())
            .filter(|s| s.iter().any(|p| !p.is_zero()))
            .collect()
    }

    /// Coefficients expressing `w` in the columns, if possible.
    pub fn lift(&self, w: &[Poly]) -> Option<Vec<Poly>> {
        let m = self.cols.len();
        self.tracked()
            .lift(w)
            .map(|c| c[..m].iter().map(|p| self.ring.reduce(p)).collect())
    }
}

/// Matrix (given by columns, each of length `rows`) times a vector.
pub fn mat_vec(ring: &QuotRing, cols: &[Vec<Poly>], rows: usize, v: &[Poly]) -> Vec<Poly> {
    let base = ring.base();
    let mut out = vec![base.zero(); rows];
    for (col, c) in cols.iter().zip(v) {
        if c.is_zero() {
            continue;
        }
        for (o, e) in out.iter_mut().zip(col) {
            if !e.is_zero() {
                *o = base.add(o, &base.mul(e, c));
            }
        }
    }
    out.into_iter().map(|p| ring.reduce(&p)).collect()
}

/// Degree of a homogeneous column with respect to the row degrees; `None` for zero.
pub fn column_degree(ring: &QuotRing, shifts: &[i64], col: &[Poly]) -> Option<i64> {
    crate::syzygy::column_degree(ring.base(), shifts, col)
}

/// Keep a minimal generating subset: columns sorted by degree (stably) and
/// discarded when already in the span of the kept ones.
pub fn minimal_columns(ring: &Arc<QuotRing>, shifts: &[i64], cols: Vec<Vec<Poly>>, degrees: Vec<i64>) -> (Vec<Vec<Poly>>, Vec<i64>) {
    minimal_columns_over(ring, shifts, &[], &[], cols, degrees)
}

/// As `minimal_columns`, modulo the span of `fixed`. One basis per degree;
/// columns of equal degree are compared by linear algebra on normal forms.
pub fn minimal_columns_over(
    ring: &Arc<QuotRing>,
    shifts: &[i64],
    fixed: &[Vec<Poly>],
    fixed_degrees: &[i64],
    cols: Vec<Vec<Poly>>,
    degrees: Vec<i64>,
) -> (Vec<Vec<Poly>>, Vec<i64>) {
    let field = ring.base().field();
    let mut idx: Vec<usize> = (0..cols.len()).filter(|&k| cols[k].iter().any(|p| !p.is_zero())).collect();
    idx.sort_by_key(|&k| degrees[k]);
    let mut kept: Vec<Vec<Poly>> = Vec::new();
    let mut kept_deg: Vec<i64> = Vec::new();
    let mut i = 0;
    while i < idx.len() {
        let d = degrees[idx[i]];
        let mut span_cols = fixed.to_vec();
        span_cols.extend(kept.iter().cloned());
        let mut span_deg = fixed_degrees.to_vec();
        span_deg.extend(kept_deg.iter().copied());
        let span = Span::new(ring, shifts, span_cols, span_deg);
        let mut rows: Vec<(Key, BTreeMap<Key, Coef>)> = Vec::new();
        while i < idx.len() && degrees[idx[i]] == d {
            let k = idx[i];
            i += 1;
            let mut v = sparse(&span.reduce(&cols[k]));
            for (pivot, row) in &rows {
                if let Some(c) = v.get(pivot).cloned() {
                    for (key, r) in row {
                        let e = v.entry(key.clone()).or_insert_with(|| field.from_i64(0));
                        *e = field.sub(e, &field.mul(&c, r));
                        if e.is_zero() {
                            v.remove(key);
                        }
                    }
                }
            }
            if let Some((pivot, c)) = v.iter().next().map(|(k, c)| (k.clone(), c.clone())) {
                let inv = field.inv(&c);
                let row = v.into_iter().map(|(k, x)| (k, field.mul(&x, &inv))).collect();
                rows.push((pivot, row));
                kept.push(cols[k].clone());
                kept_deg.push(d);
            }
        }
    }
    (kept, kept_deg)
}

type Key = (usize, Monomial);

fn sparse(col: &[Poly]) -> BTreeMap<Key, Coef> {
    let mut out = BTreeMap::new();
    for (pos, p) in col.iter().enumerate() {
        for (m, c) in p.terms() {
            out.insert((pos, m.clone()), c.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::poly::BaseRing;

    fn r() -> Arc<QuotRing> {
        let base = BaseRing::standard(&["x", "y"], Field::Rational).unwrap();
        let x2 = base.parse_poly("x^2").unwrap();
        QuotRing::new(base, vec![x2]).unwrap()
    }

    #[test]
    fn kernel_of_x_is_x() {
        let ring = r();
        let x = ring.base().var(0);
        let span = Span::new(&ring, &[0], vec![vec![x.clone()]], vec![1]);
        assert_eq!(span.syzygies(), vec![vec![x]]);
    }

    #[test]
    fn identity_has_no_syzygies() {
        let ring = r();
        let one = ring.base().one();
        let zero = ring.base().zero();
        let span = Span::new(&ring, &[0, 0], vec![vec![one.clone(), zero.clone()], vec![zero, one]], vec![0, 0]);
        assert!(span.syzygies().is_empty());
    }

    #[test]
    fn lifting_modulo_defining_ideal() {
        let ring = r();
        let b = ring.base();
        let span = Span::new(&ring, &[0], vec![vec![b.var(1)]], vec![1]);
        assert!(span.contains(&[b.parse_poly("x*y + x^2").unwrap()]));
        assert!(!span.contains(&[b.var(0)]));
        let c = span.lift(&[b.parse_poly("y^3").unwrap()]).unwrap();
        assert_eq!(c, vec![b.parse_poly("y^2").unwrap()]);
    }

    #[test]
    fn minimal_columns_drop_multiples() {
        let ring = r();
        let b = ring.base();
        let cols = vec![vec![b.parse_poly("x*y").unwrap()], vec![b.var(0)], vec![b.var(1)]];
        let (kept, deg) = minimal_columns(&ring, &[0], cols, vec![2, 1, 1]);
        assert_eq!(kept.len(), 2);
        assert_eq!(deg, vec![1, 1]);
    }

    #[test]
    fn same_degree_columns_compared_linearly() {
        let ring = r();
        let b = ring.base();
        let p = |t: &str| b.parse_poly(t).unwrap();
        let cols = vec![vec![p("x"), p("y")], vec![p("2*x"), p("2*y")], vec![p("x + y"), p("0")], vec![p("y"), p("0")], vec![p("y"), p("-y")]];
        let (kept, _) = minimal_columns(&ring, &[0, 0], cols, vec![1, 1, 1, 1, 1]);
        assert_eq!(kept.len(), 3);
        let fixed = vec![vec![p("x"), p("0")]];
        let (kept, _) = minimal_columns_over(&ring, &[0, 0], &fixed, &[1], vec![vec![p("x"), p("0")], vec![p("0"), p("y")]], vec![1, 1]);
        assert_eq!(kept, vec![vec![p("0"), p("y")]]);
        let (kept, _) = minimal_columns(&ring, &[0], vec![vec![p("0")]], vec![3]);
        assert!(kept.is_empty());
    }
}
