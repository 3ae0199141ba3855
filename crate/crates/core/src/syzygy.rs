//! Syzygies and lifting over a polynomial ring via tracked Gröbner bases.
//!
//! Each column `v_j` of rank `r` is paired with the unit vector `e_j` in an
//! extra block of `m` positions. Under an elimination order favouring the first
//! block, basis elements with an empty first block are syzygy generators, and
//! reducing `(w, 0)` to something with an empty first block expresses `w` in
//! terms of the columns.

use crate::groebner::{GroebnerBasis, ModuleOrder, VTerm, Vector};
use crate::poly::{BaseRing, Monomial, Poly};

/// Columns of a graded map `S^m -> S^r` prepared for syzygy and lift queries.
#[derive(Clone, Debug)]
pub struct TrackedBasis {
    ring: BaseRing,
    rank: usize,
    ncols: usize,
    gb: GroebnerBasis,
}

impl TrackedBasis {
    /// `shifts[i]` is the degree of the i-th target basis vector, `col_degrees[j]`
    /// the degree assigned to column `j` (needed when the column is zero).
    pub fn new(ring: &BaseRing, shifts: &[i64], cols: &[Vec<Poly>], col_degrees: &[i64]) -> TrackedBasis {
        let rank = shifts.len();
        let ncols = cols.len();
        let mut all_shifts = shifts.to_vec();
        all_shifts.extend_from_slice(col_degrees);
        let order = ModuleOrder::new(ring, all_shifts).with_elimination(rank);
        let one = ring.field().one();
        let n = ring.nvars();
        let gens = cols
            .iter()
            .enumerate()
            .map(|(j, col)| {
                let mut v = order.vector_from_column(col);
                let unit = Vector { terms: vec![VTerm { pos: rank + j, mono: Monomial::one(n), coef: one.clone() }] };
                v = order.add(&v, &unit);
                v
            })
            .collect();
        TrackedBasis { ring: ring.clone(), rank, ncols, gb: GroebnerBasis::compute(order, gens) }
    }

    /// Generators of the syzygy module, as columns of length `ncols`.
    pub fn syzygies(&self) -> Vec<Vec<Poly>> {
        self.gb
            .elements()
            .iter()
            .filter(|g| !g.has_terms_below(self.rank))
            .map(|g| g.tail_block(self.rank).to_column(&self.ring, self.ncols))
            .collect()
    }

    /// Coefficients `c` with `w = sum c_j v_j`, if `w` lies in the column span.
    pub fn lift(&self, w: &[Poly]) -> Option<Vec<Poly>> {
        let order = self.gb.order();
        let v = order.vector_from_column(w);
        let r = self.gb.reduce(&v);
        if r.has_terms_below(self.rank) {
            return None;
        }
        let f = self.ring.field();
        let neg = Vector {
            terms: r
                .tail_block(self.rank)
                .terms
                .into_iter()
                .map(|t| VTerm { coef: f.neg(&t.coef), ..t })
                .collect(),
        };
        Some(neg.to_column(&self.ring, self.ncols))
    }

    pub fn contains(&self, w: &[Poly]) -> bool {
        let v = self.gb.order().vector_from_column(w);
        !self.gb.reduce(&v).has_terms_below(self.rank)
    }
}

/// Syzygy generators of the given columns.
pub fn syzygies(ring: &BaseRing, shifts: &[i64], cols: &[Vec<Poly>], col_degrees: &[i64]) -> Vec<Vec<Poly>> {
    TrackedBasis::new(ring, shifts, cols, col_degrees).syzygies()
}

/// Degree of a nonzero homogeneous column relative to the target shifts.
pub fn column_degree(ring: &BaseRing, shifts: &[i64], col: &[Poly]) -> Option<i64> {
    col.iter()
        .zip(shifts)
        .find(|(p, _)| !p.is_zero())
        .and_then(|(p, s)| ring.degree(p).map(|d| d + s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn koszul_syzygy_of_two_variables() {
        let r = BaseRing::standard(&["x", "y"], Field::Rational).unwrap();
        let x = r.var(0);
        let y = r.var(1);
        let syz = syzygies(&r, &[0], &[vec![x.clone()], vec![y.clone()]], &[1, 1]);
        assert_eq!(syz.len(), 1);
        let s = &syz[0];
        let combo = r.add(&r.mul(&s[0], &x), &r.mul(&s[1], &y));
        assert!(combo.is_zero());
        assert_eq!(r.degree(&s[0]), Some(1));
    }

    #[test]
    fn lift_recovers_coefficients() {
        let r = BaseRing::standard(&["x", "y"], Field::Rational).unwrap();
        let cols = vec![vec![r.parse_poly("x").unwrap()], vec![r.parse_poly("y").unwrap()]];
        let tb = TrackedBasis::new(&r, &[0], &cols, &[1, 1]);
        let w = r.parse_poly("x^2 + 3*x*y - y^2").unwrap();
        let c = tb.lift(&[w.clone()]).unwrap();
        let back = r.add(&r.mul(&c[0], &cols[0][0]), &r.mul(&c[1], &cols[1][0]));
        assert_eq!(back, w);
        assert!(tb.lift(&[r.one()]).is_none());
    }

    #[test]
    fn zero_column_gives_unit_syzygy() {
        let r = BaseRing::standard(&["x"], Field::Rational).unwrap();
        let syz = syzygies(&r, &[0], &[vec![r.zero()]], &[2]);
        assert_eq!(syz, vec![vec![r.one()]]);
    }
}
