//! Finitely presented graded modules and their maps.
//!
//! A module is the cokernel of a homogeneous matrix whose columns are the
//! relations. Entries are kept in normal form modulo the defining ideal and
//! zero columns are dropped.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::ideal::{same_ring, Ideal, QuotRing};
use crate::linalg::{column_degree, mat_vec, minimal_columns, minimal_columns_over, Span};
use crate::poly::Poly;

#[derive(Clone, Debug)]
pub struct FPModule {
    ring: Arc<QuotRing>,
    gen_degrees: Vec<i64>,
    relations: Vec<Vec<Poly>>,
    rel_degrees: Vec<i64>,
    span: Arc<OnceLock<Span>>,
}

impl FPModule {
    /// Build from generator degrees and relation columns, checking that every
    /// entry has the degree its row and column demand.
    pub fn new(ring: &Arc<QuotRing>, gen_degrees: Vec<i64>, relations: Vec<Vec<Poly>>) -> Result<FPModule> {
        let g = gen_degrees.len();
        let base = ring.base();
        let mut cols = Vec::new();
        let mut degs = Vec::new();
        for (j, col) in relations.into_iter().enumerate() {
            if col.len() != g {
                return Err(Error::Shape(format!("relation {j} has {} entries, expected {g}", col.len())));
            }
            let col: Vec<Poly> = col.iter().map(|p| ring.reduce(p)).collect();
            let Some(d) = column_degree(ring, &gen_degrees, &col) else {
                if let Some(p) = col.iter().find(|p| !p.is_zero()) {
                    return Err(Error::Inhomogeneous(base.format(p)));
                }
                continue;
            };
            for (i, p) in col.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                match base.degree(p) {
                    Some(e) if e + gen_degrees[i] == d => {}
                    Some(_) => {
                        return Err(Error::Degree(format!(
                            "entry ({i},{j}) = {} does not fit degree {d}",
                            base.format(p)
                        )))
                    }
                    None => return Err(Error::Inhomogeneous(base.format(p))),
                }
            }
            cols.push(col);
            degs.push(d);
        }
        Ok(FPModule { ring: ring.clone(), gen_degrees, relations: cols, rel_degrees: degs, span: Arc::new(OnceLock::new()) })
    }

    /// Build from relation columns, choosing generator degrees so every column
    /// is homogeneous; the first generator in each connected block gets degree 0.
    pub fn infer(ring: &Arc<QuotRing>, ngens: usize, relations: Vec<Vec<Poly>>) -> Result<FPModule> {
        let base = ring.base();
        let relations: Vec<Vec<Poly>> =
            relations.into_iter().map(|c| c.iter().map(|p| ring.reduce(p)).collect()).collect();
        let mut deg: Vec<Option<i64>> = vec![None; ngens];
        for start in 0..ngens {
            if deg[start].is_some() {
                continue;
            }
            deg[start] = Some(0);
            let mut changed = true;
            while changed {
                changed = false;
                for col in &relations {
                    if col.len() != ngens {
                        return Err(Error::Shape(format!("relation has {} entries, expected {ngens}", col.len())));
                    }
                    let anchor = col.iter().enumerate().find(|(i, p)| !p.is_zero() && deg[*i].is_some());
                    let Some((a, pa)) = anchor else { continue };
                    let da = base.degree(pa).ok_or_else(|| Error::Inhomogeneous(base.format(pa)))?;
                    let col_deg = da + deg[a].unwrap();
                    for (i, p) in col.iter().enumerate() {
                        if p.is_zero() || deg[i].is_some() {
                            continue;
                        }
                        let e = base.degree(p).ok_or_else(|| Error::Inhomogeneous(base.format(p)))?;
                        deg[i] = Some(col_deg - e);
                        changed = true;
                    }
                }
            }
        }
        FPModule::new(ring, deg.into_iter().map(|d| d.unwrap()).collect(), relations)
    }

    pub fn free(ring: &Arc<QuotRing>, degrees: Vec<i64>) -> FPModule {
        FPModule::new(ring, degrees, Vec::new()).unwrap()
    }

    pub fn zero(ring: &Arc<QuotRing>) -> FPModule {
        FPModule::free(ring, Vec::new())
    }

    /// `(R/I)(-shift)`, generated in degree `shift`.
    pub fn cyclic(ideal: &Ideal, shift: i64) -> FPModule {
        let ring = ideal.ring();
        let cols = ideal.gens().iter().map(|g| vec![g.clone()]).collect();
        FPModule::new(ring, vec![shift], cols).unwrap()
    }

    /// The ideal `I` as a module, generated by its generators and presented by their syzygies.
    pub fn from_ideal(ideal: &Ideal) -> FPModule {
        let ring = ideal.ring();
        let base = ring.base();
        let gens = ideal.gens().to_vec();
        let degs: Vec<i64> = gens.iter().map(|g| base.degree(g).unwrap()).collect();
        let cols: Vec<Vec<Poly>> = gens.iter().map(|g| vec![g.clone()]).collect();
        let syz = Span::new(ring, &[0], cols, degs.clone()).syzygies();
        FPModule::new(ring, degs, syz).unwrap()
    }

    pub fn ring(&self) -> &Arc<QuotRing> {
        &self.ring
    }

    pub fn ngens(&self) -> usize {
        self.gen_degrees.len()
    }

    pub fn gen_degrees(&self) -> &[i64] {
        &self.gen_degrees
    }

    pub fn relations(&self) -> &[Vec<Poly>] {
        &self.relations
    }

    pub fn rel_degrees(&self) -> &[i64] {
        &self.rel_degrees
    }

    /// Span of the relations (plus the defining ideal) in the free cover.
    pub fn relation_span(&self) -> &Span {
        self.span.get_or_init(|| Span::new(&self.ring, &self.gen_degrees, self.relations.clone(), self.rel_degrees.clone()))
    }

    /// The element of the free cover reduces to zero in the module.
    pub fn is_zero_element(&self, v: &[Poly]) -> bool {
        self.relation_span().contains(v)
    }

    pub fn is_zero(&self) -> bool {
        (0..self.ngens()).all(|k| self.is_zero_element(&self.unit_vector(k)))
    }

    pub fn unit_vector(&self, k: usize) -> Vec<Poly> {
        let base = self.ring.base();
        (0..self.ngens()).map(|i| if i == k { base.one() } else { base.zero() }).collect()
    }

    pub fn zero_vector(&self) -> Vec<Poly> {
        vec![self.ring.base().zero(); self.ngens()]
    }

    /// `M(d)`: the same presentation with generator degrees lowered by `d`.
    pub fn twist(&self, d: i64) -> FPModule {
        FPModule {
            ring: self.ring.clone(),
            gen_degrees: self.gen_degrees.iter().map(|g| g - d).collect(),
            relations: self.relations.clone(),
            rel_degrees: self.rel_degrees.iter().map(|g| g - d).collect(),
            span: Arc::new(OnceLock::new()),
        }
    }

    pub fn direct_sum(parts: &[FPModule]) -> Result<FPModule> {
        let ring = match parts.first() {
            Some(p) => p.ring.clone(),
            None => return Err(Error::Precondition("direct sum of no modules".into())),
        };
        for p in parts {
            same_ring(&ring, &p.ring)?;
        }
        let total: usize = parts.iter().map(|p| p.ngens()).sum();
        let zero = ring.base().zero();
        let mut degrees = Vec::new();
        let mut cols = Vec::new();
        let mut offset = 0;
        for p in parts {
            degrees.extend_from_slice(&p.gen_degrees);
            for c in &p.relations {
                let mut col = vec![zero.clone(); total];
                col[offset..offset + p.ngens()].clone_from_slice(c);
                cols.push(col);
            }
            offset += p.ngens();
        }
        FPModule::new(&ring, degrees, cols)
    }

    /// Minimal presentations on the same generators (up to a constant degree
    /// shift) with the same relation module.
    pub fn same_up_to_shift(&self, other: &FPModule) -> bool {
        if same_ring(&self.ring, &other.ring).is_err() {
            return false;
        }
        let a = self.min_presentation().module;
        let b = other.min_presentation().module;
        if a.ngens() != b.ngens() {
            return false;
        }
        let shifted = match (a.gen_degrees.first(), b.gen_degrees.first()) {
            (None, None) => true,
            (Some(x), Some(y)) => {
                let s = x - y;
                a.gen_degrees.iter().zip(&b.gen_degrees).all(|(p, q)| p - q == s)
            }
            _ => false,
        };
        shifted
            && a.relations.iter().all(|c| b.is_zero_element(c))
            && b.relations.iter().all(|c| a.is_zero_element(c))
    }

    pub fn is_free(&self) -> bool {
        self.min_presentation().module.relations.is_empty()
    }

    /// Isomorphic module without unit entries and with a minimal set of
    /// relations, together with mutually inverse maps.
    pub fn min_presentation(&self) -> Minimized {
        let ring = &self.ring;
        let base = ring.base();
        let field = base.field();
        let mut rows: Vec<usize> = (0..self.ngens()).collect();
        let mut cols: Vec<Vec<Poly>> = self.relations.clone();
        let mut col_deg = self.rel_degrees.clone();
        // images of the original generators in terms of the surviving ones
        let mut images: Vec<Vec<Poly>> = (0..self.ngens()).map(|k| self.unit_vector(k)).collect();

        while let Some((i, j)) = find_unit(&cols) {
            let u = cols[j][i].terms()[0].1.clone();
            let inv_neg = field.neg(&field.inv(&u));
            let pivot = cols[j].clone();
            // e_i = -(1/u) * sum_{r != i} pivot_r e_r
            let mut sub: Vec<Poly> = pivot.iter().map(|p| base.scale(p, &inv_neg)).collect();
            sub[i] = base.zero();
            for img in images.iter_mut() {
                let c = img[i].clone();
                if !c.is_zero() {
                    for (r, s) in sub.iter().enumerate() {
                        if r != i && !s.is_zero() {
                            img[r] = ring.reduce(&base.add(&img[r], &base.mul(&c, s)));
                        }
                    }
                }
                img.remove(i);
            }
            let mut next = Vec::new();
            let mut next_deg = Vec::new();
            for (l, col) in cols.iter().enumerate() {
                if l == j {
                    continue;
                }
                let c = col[i].clone();
                let mut col = col.clone();
                if !c.is_zero() {
                    for (r, s) in sub.iter().enumerate() {
                        if r != i && !s.is_zero() {
                            col[r] = ring.reduce(&base.add(&col[r], &base.mul(&c, s)));
                        }
                    }
                }
                col.remove(i);
                if col.iter().any(|p| !p.is_zero()) {
                    next.push(col);
                    next_deg.push(col_deg[l]);
                }
            }
            cols = next;
            col_deg = next_deg;
            rows.remove(i);
        }
        let gen_degrees: Vec<i64> = rows.iter().map(|&r| self.gen_degrees[r]).collect();
        let (cols, col_deg) = minimal_columns(ring, &gen_degrees, cols, col_deg);
        let module = FPModule {
            ring: ring.clone(),
            gen_degrees,
            relations: cols,
            rel_degrees: col_deg,
            span: Arc::new(OnceLock::new()),
        };
        let to_min = ModMap { source: self.clone(), target: module.clone(), matrix: images };
        let back: Vec<Vec<Poly>> = rows.iter().map(|&r| self.unit_vector(r)).collect();
        let from_min = ModMap { source: module.clone(), target: self.clone(), matrix: back };
        Minimized { module, to_min, from_min }
    }

    /// `(K + U) / U` where `U` are the relations: the submodule generated by
    /// the columns of `gens` (degrees `degrees`), presented on those columns.
    pub fn submodule(&self, gens: Vec<Vec<Poly>>, degrees: Vec<i64>) -> Result<(FPModule, ModMap)> {
        let m = gens.len();
        let mut cols = gens.clone();
        cols.extend(self.relations.iter().cloned());
        let mut degs = degrees.clone();
        degs.extend(self.rel_degrees.iter().copied());
        let syz = Span::new(&self.ring, &self.gen_degrees, cols, degs).syzygies();
        let rels: Vec<Vec<Poly>> = syz.into_iter().map(|s| s[..m].to_vec()).collect();
        let sub = FPModule::new(&self.ring, degrees, rels)?;
        let incl = ModMap::new(sub.clone(), self.clone(), gens)?;
        Ok((sub, incl))
    }

    pub fn format_matrix(&self) -> String {
        let base = self.ring.base();
        let rows: Vec<String> = (0..self.ngens())
            .map(|i| {
                let entries: Vec<String> = self.relations.iter().map(|c| base.format(&c[i])).collect();
                format!("[{}]", entries.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

fn find_unit(cols: &[Vec<Poly>]) -> Option<(usize, usize)> {
    for (j, col) in cols.iter().enumerate() {
        for (i, p) in col.iter().enumerate() {
            if !p.is_zero() && p.is_constant() {
                return Some((i, j));
            }
        }
    }
    None
}

#[derive(Clone, Debug)]
pub struct Minimized {
    pub module: FPModule,
    pub to_min: ModMap,
    pub from_min: ModMap,
}

/// A degree-preserving homomorphism; column `j` of `matrix` is the image of
/// the `j`-th source generator in the target's free cover.
#[derive(Clone, Debug)]
pub struct ModMap {
    pub source: FPModule,
    pub target: FPModule,
    pub matrix: Vec<Vec<Poly>>,
}

impl ModMap {
    pub fn new(source: FPModule, target: FPModule, matrix: Vec<Vec<Poly>>) -> Result<ModMap> {
        same_ring(&source.ring, &target.ring)?;
        let ring = source.ring.clone();
        let base = ring.base();
        if matrix.len() != source.ngens() {
            return Err(Error::Shape(format!("map has {} columns, source has {} generators", matrix.len(), source.ngens())));
        }
        let mut reduced = Vec::with_capacity(matrix.len());
        for (j, col) in matrix.into_iter().enumerate() {
            if col.len() != target.ngens() {
                return Err(Error::Shape(format!("map column {j} has {} entries, target has {} generators", col.len(), target.ngens())));
            }
            let col: Vec<Poly> = col.iter().map(|p| ring.reduce(p)).collect();
            for (i, p) in col.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                match base.degree(p) {
                    Some(e) if e + target.gen_degrees[i] == source.gen_degrees[j] => {}
                    _ => {
                        return Err(Error::Degree(format!(
                            "map entry ({i},{j}) = {} is not of degree {}",
                            base.format(p),
                            source.gen_degrees[j] - target.gen_degrees[i]
                        )))
                    }
                }
            }
            reduced.push(col);
        }
        let map = ModMap { source, target, matrix: reduced };
        for (j, rel) in map.source.relations.iter().enumerate() {
            if !map.target.is_zero_element(&map.apply(rel)) {
                return Err(Error::Verification(format!("source relation {j} does not map to zero")));
            }
        }
        Ok(map)
    }

    pub fn identity(m: &FPModule) -> ModMap {
        let matrix = (0..m.ngens()).map(|k| m.unit_vector(k)).collect();
        ModMap { source: m.clone(), target: m.clone(), matrix }
    }

    pub fn zero(source: &FPModule, target: &FPModule) -> ModMap {
        let matrix = (0..source.ngens()).map(|_| target.zero_vector()).collect();
        ModMap { source: source.clone(), target: target.clone(), matrix }
    }

    /// Image of an element of the source free cover in the target free cover.
    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        mat_vec(&self.source.ring, &self.matrix, self.target.ngens(), v)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModMap) -> Result<ModMap> {
        let matrix = self.matrix.iter().map(|c| other.apply(c)).collect();
        ModMap::new(self.source.clone(), other.target.clone(), matrix)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|c| self.target.is_zero_element(c))
    }

    /// Equal as maps of modules.
    pub fn same_as(&self, other: &ModMap) -> bool {
        self.matrix.len() == other.matrix.len()
            && self.matrix.iter().zip(&other.matrix).all(|(a, b)| {
                let base = self.source.ring.base();
                let diff: Vec<Poly> = a.iter().zip(b).map(|(p, q)| base.sub(p, q)).collect();
                self.target.is_zero_element(&diff)
            })
    }

    fn image_span(&self) -> Span {
        let mut cols = self.matrix.clone();
        let mut degs = self.source.gen_degrees.clone();
        cols.extend(self.target.relations.iter().cloned());
        degs.extend(self.target.rel_degrees.iter().copied());
        Span::new(&self.source.ring, &self.target.gen_degrees, cols, degs)
    }

    pub fn is_surjective(&self) -> bool {
        let span = self.image_span();
        (0..self.target.ngens()).all(|k| span.contains(&self.target.unit_vector(k)))
    }

    /// Generators of the kernel as vectors in the source free cover, with degrees.
    pub fn kernel_generators(&self) -> (Vec<Vec<Poly>>, Vec<i64>) {
        let g = self.source.ngens();
        let syz = self.image_span().syzygies();
        let cols: Vec<Vec<Poly>> = syz.into_iter().map(|s| s[..g].to_vec()).filter(|c| !self.source.is_zero_element(c)).collect();
        let degs: Vec<i64> = cols
            .iter()
            .map(|c| column_degree(&self.source.ring, &self.source.gen_degrees, c).unwrap())
            .collect();
        minimal_columns_over(&self.source.ring, &self.source.gen_degrees, &self.source.relations, &self.source.rel_degrees, cols, degs)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_generators().0.is_empty()
    }

    /// Kernel as a module with its inclusion into the source.
    pub fn kernel(&self) -> Result<(FPModule, ModMap)> {
        let (gens, degs) = self.kernel_generators();
        self.source.submodule(gens, degs)
    }

    pub fn cokernel(&self) -> Result<(FPModule, ModMap)> {
        let mut rels = self.target.relations.clone();
        rels.extend(self.matrix.iter().cloned());
        let coker = FPModule::new(&self.target.ring, self.target.gen_degrees.clone(), rels)?;
        let proj = ModMap::new(self.target.clone(), coker.clone(), (0..self.target.ngens()).map(|k| self.target.unit_vector(k)).collect())?;
        Ok((coker, proj))
    }

    /// `x` lies in the image.
    pub fn image_contains(&self, x: &[Poly]) -> bool {
        self.image_span().contains(x)
    }

    /// Preimage in the source free cover of an element in the image.
    pub fn preimage(&self, x: &[Poly]) -> Option<Vec<Poly>> {
        let g = self.source.ngens();
        self.image_span().lift(x).map(|c| c[..g].to_vec())
    }
}

/// `0 -> A --i--> B --p--> C -> 0`.
#[derive(Clone, Debug)]
pub struct ShortExact {
    pub inclusion: ModMap,
    pub projection: ModMap,
}

impl ShortExact {
    pub fn left(&self) -> &FPModule {
        &self.inclusion.source
    }

    pub fn middle(&self) -> &FPModule {
        &self.inclusion.target
    }

    pub fn right(&self) -> &FPModule {
        &self.projection.target
    }

    /// Re-check well-definedness and exactness at all three spots.
    pub fn check(&self) -> Result<()> {
        let i = ModMap::new(self.inclusion.source.clone(), self.inclusion.target.clone(), self.inclusion.matrix.clone())
            .map_err(|e| Error::Verification(format!("inclusion: {e}")))?;
        let p = ModMap::new(self.projection.source.clone(), self.projection.target.clone(), self.projection.matrix.clone())
            .map_err(|e| Error::Verification(format!("projection: {e}")))?;
        let middle_match = i.target.gen_degrees == p.source.gen_degrees && i.target.relations == p.source.relations;
        if !middle_match {
            return Err(Error::Verification("middle terms differ".into()));
        }
        if !i.is_injective() {
            return Err(Error::Verification("inclusion is not injective".into()));
        }
        if !p.is_surjective() {
            return Err(Error::Verification("projection is not surjective".into()));
        }
        if !i.then(&p).map(|c| c.is_zero()).unwrap_or(false) {
            return Err(Error::Verification("composite is not zero".into()));
        }
        let (ker, _) = p.kernel_generators();
        if !ker.iter().all(|k| i.image_contains(k)) {
            return Err(Error::Verification("kernel of projection exceeds image of inclusion".into()));
        }
        Ok(())
    }
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

    fn p(ring: &Arc<QuotRing>, s: &str) -> Poly {
        ring.base().parse_poly(s).unwrap()
    }

    #[test]
    fn presentation_degree_checks() {
        let ring = r();
        assert!(FPModule::new(&ring, vec![0, 0], vec![vec![p(&ring, "x"), p(&ring, "y^2")]]).is_err());
        let m = FPModule::infer(&ring, 2, vec![vec![p(&ring, "x"), p(&ring, "y^2")]]).unwrap();
        assert_eq!(m.gen_degrees(), &[0, -1]);
        // x^2 reduces to zero, so the column disappears
        let m = FPModule::new(&ring, vec![0], vec![vec![p(&ring, "x^2")]]).unwrap();
        assert!(m.relations().is_empty());
    }

    #[test]
    fn unit_relation_prunes_to_zero() {
        let ring = r();
        let m = FPModule::new(&ring, vec![0], vec![vec![p(&ring, "1")]]).unwrap();
        let min = m.min_presentation().module;
        assert_eq!(min.ngens(), 0);
        assert!(m.is_zero());
    }

    #[test]
    fn unit_row_elimination() {
        let ring = r();
        // generators e0 (deg 0), e1 (deg 1); relations x*e0 + e1... keep homogeneous: col (x, 1)
        let m = FPModule::new(&ring, vec![0, 1], vec![vec![p(&ring, "x"), p(&ring, "1")], vec![p(&ring, "y"), p(&ring, "0")]]).unwrap();
        let min = m.min_presentation();
        assert_eq!(min.module.ngens(), 1);
        assert_eq!(min.module.relations(), &[vec![p(&ring, "y")]]);
        assert!(min.to_min.then(&min.from_min).unwrap().same_as(&ModMap::identity(&m)));
        assert!(min.from_min.then(&min.to_min).unwrap().same_as(&ModMap::identity(&min.module)));
    }

    #[test]
    fn already_minimal_is_fixed() {
        let ring = r();
        let m = FPModule::new(&ring, vec![0], vec![vec![p(&ring, "x")]]).unwrap();
        let min = m.min_presentation().module;
        assert_eq!(min.relations(), m.relations());
        assert!(m.same_up_to_shift(&m.twist(3)));
        assert!(!m.is_free());
    }

    #[test]
    fn kernel_cokernel_sum() {
        let ring = r();
        let free = FPModule::free(&ring, vec![0]);
        let (k, _) = ModMap::identity(&free).kernel().unwrap();
        assert!(k.is_zero());
        let x = ModMap::new(free.twist(-1), free.clone(), vec![vec![p(&ring, "x")]]).unwrap();
        let (c, _) = x.cokernel().unwrap();
        assert_eq!(c.relations(), &[vec![p(&ring, "x")]]);
        let (k, _) = x.kernel().unwrap();
        assert_eq!(k.ngens(), 1);
        let s = FPModule::direct_sum(&[c.clone(), free.clone()]).unwrap();
        assert_eq!(s.relations(), &[vec![p(&ring, "x"), p(&ring, "0")]]);
    }

    #[test]
    fn ill_defined_map_rejected() {
        let ring = r();
        let rx = FPModule::new(&ring, vec![0], vec![vec![p(&ring, "x")]]).unwrap();
        let free = FPModule::free(&ring, vec![0]);
        assert!(ModMap::new(rx.clone(), free.clone(), vec![vec![p(&ring, "1")]]).is_err());
        assert!(ModMap::new(free.clone(), rx.clone(), vec![vec![p(&ring, "1")]]).is_ok());
        assert!(ModMap::new(free, rx, vec![vec![p(&ring, "y")]]).is_err());
    }

    #[test]
    fn short_exact_check() {
        let ring = r();
        // 0 -> R/(x)(-1) --x--> R --> R/(x) -> 0
        let rx = FPModule::new(&ring, vec![0], vec![vec![p(&ring, "x")]]).unwrap();
        let free = FPModule::free(&ring, vec![0]);
        let i = ModMap::new(rx.twist(-1), free.clone(), vec![vec![p(&ring, "x")]]).unwrap();
        let pr = ModMap::new(free.clone(), rx.clone(), vec![vec![p(&ring, "1")]]).unwrap();
        let ses = ShortExact { inclusion: i, projection: pr };
        assert!(ses.check().is_ok());
        let bad_i = ModMap::new(free.twist(-1), free.clone(), vec![vec![p(&ring, "x")]]).unwrap();
        let bad = ShortExact { inclusion: bad_i, projection: ses.projection.clone() };
        assert!(bad.check().is_err());
    }
}
