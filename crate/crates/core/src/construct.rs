//! Constructing modules with prescribed nonfree locus by repeated pushouts
//! along the first syzygy.

use std::sync::Arc;

use crate::cert::{compose_certs, verify_cert, ResCert};
use crate::error::{Error, Result};
use crate::homology::{pushout, syzygy_sequence};
use crate::ideal::{Ideal, QuotRing};
use crate::loci::{is_field_at, nonfree_locus, ClosedSubset};
use crate::module::{FPModule, ModMap, ShortExact};
use crate::poly::Poly;

const COEFFS: [i64; 7] = [0, 1, -1, 2, -2, 3, -3];
const MAX_TRIES: usize = 20_000;
const MAX_STEPS: usize = 64;

/// A homogeneous element of `p` outside every ideal of `avoid`.
pub fn avoid(p: &Ideal, avoid: &[Ideal]) -> Result<Poly> {
    for q in avoid {
        if q.contains_ideal(p) {
            return Err(Error::Precondition(format!("{p} is contained in {q}")));
        }
    }
    let ring = p.ring();
    let base = ring.base();
    let good = |f: &Poly| !ring.is_zero(f) && avoid.iter().all(|q| !q.contains(f));
    let gens = p.canonical_gens();
    if let Some(g) = gens.iter().find(|g| good(g)) {
        return Ok(g.clone());
    }
    let degs: Vec<i64> = gens.iter().map(|g| base.degree(g).expect("homogeneous")).collect();
    let mut tries = 0;
    let mut distinct: Vec<i64> = degs.clone();
    distinct.sort();
    distinct.dedup();
    for d in &distinct {
        let group: Vec<Poly> = gens.iter().zip(&degs).filter(|(_, e)| *e == d).map(|(g, _)| g.clone()).collect();
        if let Some(f) = combine(ring, &group, &good, &mut tries) {
            return Ok(f);
        }
    }
    let lcm = distinct.iter().fold(1i64, |a, &d| num_integer::lcm(a, d.max(1)));
    let powers: Vec<Poly> = gens
        .iter()
        .zip(&degs)
        .map(|(g, &d)| ring.reduce(&base.pow(g, (lcm / d.max(1)) as u32)))
        .filter(|g| !g.is_zero())
        .collect();
    if let Some(f) = combine(ring, &powers, &good, &mut tries) {
        return Ok(f);
    }
    Err(Error::Precondition(format!("no element of {p} avoiding the given primes was found")))
}

/// Try `sum c_i g_i` with small coefficients, first nonzero coefficient `1`, at least two terms.
fn combine(ring: &Arc<QuotRing>, gens: &[Poly], good: &dyn Fn(&Poly) -> bool, tries: &mut usize) -> Option<Poly> {
    let base = ring.base();
    let field = base.field();
    let k = gens.len();
    if k < 2 {
        return None;
    }
    let mut values: Vec<i64> = Vec::new();
    for c in COEFFS {
        if !values.iter().any(|v| field.from_i64(*v) == field.from_i64(c)) {
            values.push(c);
        }
    }
    for bound in 2..=values.len() {
        let mut idx = vec![0usize; k];
        loop {
            let uses_new = idx.iter().any(|&i| i == bound - 1);
            let first = idx.iter().find(|&&i| i != 0);
            let nonzero = idx.iter().filter(|&&i| i != 0).count();
            if uses_new && first == Some(&1) && nonzero >= 2 {
                *tries += 1;
                if *tries > MAX_TRIES {
                    return None;
                }
                let mut f = base.zero();
                for (g, &i) in gens.iter().zip(&idx) {
                    if i != 0 {
                        f = base.add(&f, &base.scale(g, &field.from_i64(values[i])));
                    }
                }
                let f = ring.reduce(&f);
                if good(&f) {
                    return Some(f);
                }
            }
            let mut pos = 0;
            while pos < k {
                idx[pos] += 1;
                if idx[pos] < bound {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
        }
    }
    None
}

/// One pushout `X_1` of `F_0 <- ΩX -> ΩX(δ)` along multiplication by `x`.
#[derive(Clone, Debug)]
pub struct PushoutStep {
    pub element: Poly,
    pub module: FPModule,
    pub sequence: ShortExact,
    pub cert: ResCert,
    pub nonfree_before: ClosedSubset,
    pub nonfree_after: ClosedSubset,
}

fn base_min(x: &FPModule, shift: i64) -> ResCert {
    let m = x.min_presentation();
    ResCert::Base {
        module: m.module.twist(shift),
        x_shifts: vec![shift],
        free_degrees: Vec::new(),
        section: m.from_min.matrix,
        retraction: m.to_min.matrix,
    }
}

fn twist_seq(s: &ShortExact, d: i64) -> ShortExact {
    let tw = |m: &ModMap| ModMap { source: m.source.twist(d), target: m.target.twist(d), matrix: m.matrix.clone() };
    ShortExact { inclusion: tw(&s.inclusion), projection: tw(&s.projection) }
}

/// Build `0 -> ΩX(δ) -> X_1 -> X -> 0` and check the locus conditions;
/// with `target`, also check that it lies in `NF(X_1)`.
pub fn pushout_step(x: &FPModule, elem: &Poly, target: Option<&Ideal>) -> Result<PushoutStep> {
    let ring = x.ring().clone();
    let base = ring.base();
    let elem = ring.reduce(elem);
    if elem.is_zero() {
        return Err(Error::ZeroElement("pushout element".into()));
    }
    let delta = match base.degree(&elem) {
        None => return Err(Error::Inhomogeneous(base.format(&elem))),
        Some(0) => return Err(Error::Precondition(format!("{} is a unit", base.format(&elem)))),
        Some(d) => d,
    };
    if x.is_free() {
        return Err(Error::Precondition("module is free".into()));
    }
    let nonfree_before = nonfree_locus(x)?;
    let seq = syzygy_sequence(x)?;
    let omega = seq.left().clone();
    let omega_d = omega.twist(delta);
    let mult: Vec<Vec<Poly>> = (0..omega.ngens())
        .map(|k| omega_d.unit_vector(k).iter().map(|e| base.mul(e, &elem)).collect())
        .collect();
    let mult = ModMap::new(omega, omega_d, mult)?;
    let (x1, _, into_omega) = pushout(&seq.inclusion, &mult)?;
    let xm = seq.right().clone();
    let nf0 = seq.middle().ngens();
    let proj: Vec<Vec<Poly>> = (0..x1.ngens()).map(|k| if k < nf0 { xm.unit_vector(k) } else { xm.zero_vector() }).collect();
    let projection = ModMap::new(x1.clone(), xm, proj)?;
    let sequence = ShortExact { inclusion: into_omega, projection };

    let tseq = twist_seq(&seq, delta);
    let left = ResCert::Ker {
        module: tseq.left().clone(),
        middle: Box::new(ResCert::base_free(tseq.middle())),
        right: Box::new(base_min(x, delta)),
        seq: tseq,
    };
    let cert = ResCert::Ext { module: x1.clone(), seq: sequence.clone(), left: Box::new(left), right: Box::new(base_min(x, 0)) };
    let verdict = verify_cert(&cert, x, &x1);
    if !verdict.ok || verdict.depth > 2 {
        return Err(Error::Verification(verdict.failure.unwrap_or_else(|| format!("depth {}", verdict.depth))));
    }

    let nonfree_after = nonfree_locus(&x1)?;
    if !nonfree_after.is_subset_of(&nonfree_before) {
        return Err(Error::Verification(format!("{nonfree_after} is not inside {nonfree_before}")));
    }
    if let Some(q) = nonfree_after.primes().iter().find(|q| !q.contains(&elem)) {
        return Err(Error::Verification(format!("{} does not vanish on V{}", base.format(&elem), q.format())));
    }
    if let Some(p) = target {
        if !nonfree_after.contains_prime(p) {
            return Err(Error::Verification(format!("{p} left the nonfree locus")));
        }
    }
    Ok(PushoutStep { element: elem, module: x1, sequence, cert, nonfree_before, nonfree_after })
}

/// One recorded pushout.
#[derive(Clone, Debug)]
pub struct TraceStep {
    pub element: Poly,
    pub nonfree: ClosedSubset,
}

/// The steps taken for one irreducible component (or for the whole descent).
#[derive(Clone, Debug)]
pub struct DescentTrace {
    pub component: Option<Ideal>,
    pub steps: Vec<TraceStep>,
}

#[derive(Clone, Debug)]
pub struct Realization {
    pub module: FPModule,
    pub cert: ResCert,
    pub traces: Vec<DescentTrace>,
}

impl Realization {
    pub fn steps(&self) -> usize {
        self.traces.iter().map(|t| t.steps.len()).sum()
    }
}

fn direct_sum_cert(parts: Vec<ResCert>) -> Result<ResCert> {
    let mods: Vec<FPModule> = parts.iter().map(|p| p.module().clone()).collect();
    let module = FPModule::direct_sum(&mods)?;
    let id: Vec<Vec<Poly>> = (0..module.ngens()).map(|k| module.unit_vector(k)).collect();
    Ok(ResCert::Sum { module, parts, section: id.clone(), retraction: id })
}

/// A module `Y` in `res X` with `NF(Y) = W`, for closed `W ⊆ NF(X)`.
pub fn realize(x: &FPModule, w: &ClosedSubset) -> Result<Realization> {
    let ring = x.ring();
    let nf = nonfree_locus(x)?;
    if !w.is_subset_of(&nf) {
        return Err(Error::Precondition(format!("{w} is not inside NF = {nf}")));
    }
    if w.is_empty() {
        let r = FPModule::free(ring, vec![0]);
        return Ok(Realization { cert: ResCert::base_free(&r), module: r, traces: Vec::new() });
    }
    if w.same_as(&nf) {
        return Ok(Realization { module: x.clone(), cert: ResCert::base_of(x), traces: Vec::new() });
    }
    if w.primes().len() > 1 {
        let mut parts = Vec::new();
        let mut traces = Vec::new();
        for p in w.primes() {
            let r = realize_prime(x, p, nf.clone())?;
            parts.push(r.cert);
            traces.extend(r.traces);
        }
        let cert = direct_sum_cert(parts)?;
        return Ok(Realization { module: cert.module().clone(), cert, traces });
    }
    realize_prime(x, &w.primes()[0], nf)
}

fn realize_prime(x: &FPModule, p: &Ideal, mut nf: ClosedSubset) -> Result<Realization> {
    let goal = ClosedSubset::of_prime(p);
    let mut cur = x.clone();
    let mut cert = ResCert::base_of(x);
    let mut steps = Vec::new();
    while !nf.same_as(&goal) {
        if steps.len() >= MAX_STEPS {
            return Err(Error::Precondition(format!("no convergence towards V{}", p.format())));
        }
        let q = nf
            .primes()
            .iter()
            .find(|q| !q.contains_ideal(p))
            .cloned()
            .ok_or_else(|| Error::Verification(format!("{nf} lies inside V{}", p.format())))?;
        let elem = avoid(p, &[q])?;
        let step = pushout_step(&cur, &elem, Some(p))?;
        cert = compose_certs(&cert, &step.cert)?;
        steps.push(TraceStep { element: step.element, nonfree: step.nonfree_after.clone() });
        nf = step.nonfree_after;
        cur = step.module;
    }
    Ok(Realization { module: cur, cert, traces: vec![DescentTrace { component: Some(p.clone()), steps }] })
}

/// Number of pushouts against the allowed `2 * ht`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepBound {
    pub height: i64,
    pub steps: usize,
    pub bound: usize,
}

/// A module `Y ∈ res X` with `NF(Y) = V(p)` near `p`: one pushout per unit of height.
pub fn punctured_descent(x: &FPModule, p: &Ideal) -> Result<(Realization, StepBound)> {
    let mut nf = nonfree_locus(x)?;
    let height = nf.height_in(p)?;
    let mut h = height;
    let mut cur = x.clone();
    let mut cert = ResCert::base_of(x);
    let mut steps = Vec::new();
    while h > 0 {
        let elem = avoid(p, nf.primes())?;
        let step = pushout_step(&cur, &elem, Some(p))?;
        let next_h = step.nonfree_after.height_in(p)?;
        if next_h >= h {
            return Err(Error::Verification(format!("height stayed at {h}")));
        }
        cert = compose_certs(&cert, &step.cert)?;
        steps.push(TraceStep { element: step.element, nonfree: step.nonfree_after.clone() });
        nf = step.nonfree_after;
        cur = step.module;
        h = next_h;
    }
    let bound = StepBound { height, steps: steps.len(), bound: 2 * height as usize };
    let depth = cert.depth();
    if depth > bound.bound {
        return Err(Error::Verification(format!("depth {depth} exceeds {}", bound.bound)));
    }
    let r = Realization { module: cur, cert, traces: vec![DescentTrace { component: Some(p.clone()), steps }] };
    Ok((r, bound))
}

#[derive(Clone, Debug)]
pub enum FromScratch {
    /// `module` is the sum of the component realizations; each is certified over its `R/p`.
    Feasible { module: FPModule, components: Vec<(FPModule, Realization)> },
    /// `R_p` is a field, so no module has `p` in its nonfree locus.
    Infeasible { prime: Ideal },
}

/// A module with nonfree locus exactly `W`, built from the quotients `R/p`.
pub fn realize_from_scratch(ring: &Arc<QuotRing>, w: &ClosedSubset) -> Result<FromScratch> {
    if let Some(p) = w.primes().iter().find(|p| is_field_at(p)) {
        return Ok(FromScratch::Infeasible { prime: p.clone() });
    }
    if w.is_empty() {
        return Ok(FromScratch::Feasible { module: FPModule::free(ring, vec![0]), components: Vec::new() });
    }
    let mut components = Vec::new();
    for p in w.primes() {
        let rp = FPModule::cyclic(p, 0);
        let r = realize(&rp, &ClosedSubset::of_prime(p))?;
        components.push((rp, r));
    }
    let mods: Vec<FPModule> = components.iter().map(|(_, r)| r.module.clone()).collect();
    Ok(FromScratch::Feasible { module: FPModule::direct_sum(&mods)?, components })
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

    fn id(r: &Arc<QuotRing>, g: &[&str]) -> Ideal {
        Ideal::parse(r, g).unwrap()
    }

    #[test]
    fn avoidance() {
        let r = ring(&["x", "y"], &[]);
        let b = r.base();
        let f = avoid(&id(&r, &["x", "y"]), &[id(&r, &["x"]), id(&r, &["y"])]).unwrap();
        assert_eq!(b.format(&f), "x + y");
        assert_eq!(b.format(&avoid(&id(&r, &["x", "y"]), &[id(&r, &["x"])]).unwrap()), "y");
        assert!(avoid(&id(&r, &["x"]), &[id(&r, &["x", "y"])]).is_err());
        let g = avoid(&id(&r, &["x", "y^2"]), &[id(&r, &["x"]), id(&r, &["y"])]).unwrap();
        assert!(!id(&r, &["x"]).contains(&g) && !id(&r, &["y"]).contains(&g));
    }

    #[test]
    fn pushout_of_x_along_y() {
        let r = ring(&["x", "y"], &["x^2"]);
        let xr = FPModule::cyclic(&id(&r, &["x"]), 0);
        let y = r.base().var(1);
        let s = pushout_step(&xr, &y, Some(&Ideal::maximal(&r))).unwrap();
        assert_eq!(s.nonfree_after.format(), "V(x, y)");
        assert_eq!(s.cert.depth(), 2);
        assert!(pushout_step(&xr, &r.base().one(), None).is_err());
        assert!(pushout_step(&FPModule::free(&r, vec![0]), &y, None).is_err());
        assert!(pushout_step(&xr, &r.base().parse_poly("y + y^2").unwrap(), None).is_err());
    }

    #[test]
    fn punctured_one_step() {
        let r = ring(&["x", "y"], &["x^2"]);
        let xr = FPModule::cyclic(&id(&r, &["x"]), 0);
        let (real, bound) = punctured_descent(&xr, &Ideal::maximal(&r)).unwrap();
        assert_eq!(bound, StepBound { height: 1, steps: 1, bound: 2 });
        let v = verify_cert(&real.cert, &xr, &real.module);
        assert!(v.ok && v.depth <= 2, "{:?}", v);
        assert_eq!(nonfree_locus(&real.module).unwrap().format(), "V(x, y)");
    }

    #[test]
    fn realize_trivial_cases() {
        let r = ring(&["x", "y"], &["x^2"]);
        let xr = FPModule::cyclic(&id(&r, &["x"]), 0);
        let e = realize(&xr, &ClosedSubset::empty(&r)).unwrap();
        assert!(e.module.is_free());
        let same = realize(&xr, &nonfree_locus(&xr).unwrap()).unwrap();
        assert_eq!(same.steps(), 0);
        let pt = realize(&xr, &ClosedSubset::of_prime(&Ideal::maximal(&r))).unwrap();
        assert_eq!(nonfree_locus(&pt.module).unwrap().format(), "V(x, y)");
        assert!(verify_cert(&pt.cert, &xr, &pt.module).ok);
        let s = ring(&["x", "y"], &[]);
        let rx = FPModule::cyclic(&id(&s, &["x"]), 0);
        assert!(realize(&rx, &ClosedSubset::of_prime(&id(&s, &["y"]))).is_err());
    }

    #[test]
    fn from_scratch_over_a_field_is_infeasible() {
        let base = BaseRing::standard(&[], Field::Rational).unwrap();
        let k = QuotRing::new(base, vec![]).unwrap();
        let w = ClosedSubset::of_prime(&Ideal::zero(&k));
        assert!(matches!(realize_from_scratch(&k, &w).unwrap(), FromScratch::Infeasible { .. }));
        let r = ring(&["x", "y"], &["x^2"]);
        match realize_from_scratch(&r, &ClosedSubset::of_prime(&Ideal::maximal(&r))).unwrap() {
            FromScratch::Feasible { module, .. } => assert_eq!(nonfree_locus(&module).unwrap().format(), "V(x, y)"),
            FromScratch::Infeasible { .. } => panic!("feasible"),
        }
    }

    #[test]
    fn descent_in_three_variables() {
        let r = ring(&["x", "y", "z"], &["x^2"]);
        let xr = FPModule::cyclic(&id(&r, &["x"]), 0);
        let (real, bound) = punctured_descent(&xr, &Ideal::maximal(&r)).unwrap();
        assert_eq!(bound.height, 2);
        assert!(bound.steps <= 4 && bound.steps == 2);
        let v = verify_cert(&real.cert, &xr, &real.module);
        assert!(v.ok && v.depth <= 4, "{:?}", v);
        assert!(nonfree_locus(&real.module).unwrap().contains_prime(&Ideal::maximal(&r)));
        let w = ClosedSubset::of_ideal(&id(&r, &["x", "y"])).unwrap();
        let line = realize(&xr, &w).unwrap();
        assert!(nonfree_locus(&line.module).unwrap().same_as(&w));
        assert!(verify_cert(&line.cert, &xr, &line.module).ok);
        let two = ClosedSubset::of_ideal(&id(&r, &["x", "y*z"])).unwrap();
        let both = realize(&xr, &two).unwrap();
        assert_eq!(both.traces.len(), 2);
        assert!(nonfree_locus(&both.module).unwrap().same_as(&two));
        assert!(verify_cert(&both.cert, &xr, &both.module).ok);
    }
}
