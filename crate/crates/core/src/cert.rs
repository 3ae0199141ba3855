//! Certificates for membership in the filtration `res^n X`.
//!
//! Leaves exhibit a module as a direct summand of `X(s_1) ⊕ … ⊕ R(-d_1) ⊕ …`;
//! inner nodes are extensions, kernels of epimorphisms and direct summands of
//! sums of certified modules. Every node carries explicit matrices, so
//! checking needs nothing beyond the base module `X`.

use crate::error::{Error, Result};
use crate::module::{FPModule, ModMap, ShortExact};
use crate::poly::Poly;

#[derive(Clone, Debug)]
pub enum ResCert {
    /// `module` is a summand of `X(s)` for `s` in `x_shifts` plus free `R(-d)` for `d` in `free_degrees`.
    Base {
        module: FPModule,
        x_shifts: Vec<i64>,
        free_degrees: Vec<i64>,
        section: Vec<Vec<Poly>>,
        retraction: Vec<Vec<Poly>>,
    },
    /// `0 -> left -> module -> right -> 0`.
    Ext { module: FPModule, seq: ShortExact, left: Box<ResCert>, right: Box<ResCert> },
    /// `0 -> module -> middle -> right -> 0`.
    Ker { module: FPModule, seq: ShortExact, middle: Box<ResCert>, right: Box<ResCert> },
    /// `module` is a summand of the sum of the parts.
    Sum { module: FPModule, parts: Vec<ResCert>, section: Vec<Vec<Poly>>, retraction: Vec<Vec<Poly>> },
}

/// Outcome of [`verify_cert`]; `failure` names the first failing node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub ok: bool,
    pub depth: usize,
    pub failure: Option<String>,
}

impl ResCert {
    pub fn module(&self) -> &FPModule {
        match self {
            ResCert::Base { module, .. }
            | ResCert::Ext { module, .. }
            | ResCert::Ker { module, .. }
            | ResCert::Sum { module, .. } => module,
        }
    }

    /// Depth as defined by the node kinds, without checking anything.
    pub fn depth(&self) -> usize {
        match self {
            ResCert::Base { .. } => 0,
            ResCert::Ext { left, right, .. } => 1 + left.depth().max(right.depth()),
            ResCert::Ker { middle, right, .. } => 1 + middle.depth().max(right.depth()),
            ResCert::Sum { parts, .. } => parts.iter().map(|p| p.depth()).max().unwrap_or(0),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ResCert::Base { .. } => "base",
            ResCert::Ext { .. } => "ext",
            ResCert::Ker { .. } => "ker",
            ResCert::Sum { .. } => "sum",
        }
    }

    /// `module` as itself: `X` with identity split maps.
    pub fn base_of(x: &FPModule) -> ResCert {
        let id: Vec<Vec<Poly>> = (0..x.ngens()).map(|k| x.unit_vector(k)).collect();
        ResCert::Base { module: x.clone(), x_shifts: vec![0], free_degrees: Vec::new(), section: id.clone(), retraction: id }
    }

    /// A free module as a sum of copies of `R`.
    pub fn base_free(f: &FPModule) -> ResCert {
        let id: Vec<Vec<Poly>> = (0..f.ngens()).map(|k| f.unit_vector(k)).collect();
        ResCert::Base {
            module: f.clone(),
            x_shifts: Vec::new(),
            free_degrees: f.gen_degrees().to_vec(),
            section: id.clone(),
            retraction: id,
        }
    }

    /// The whole tree for the twisted modules `M(d)`.
    pub fn twist(&self, d: i64) -> ResCert {
        let tw_seq = |s: &ShortExact| ShortExact {
            inclusion: ModMap {
                source: s.inclusion.source.twist(d),
                target: s.inclusion.target.twist(d),
                matrix: s.inclusion.matrix.clone(),
            },
            projection: ModMap {
                source: s.projection.source.twist(d),
                target: s.projection.target.twist(d),
                matrix: s.projection.matrix.clone(),
            },
        };
        match self {
            ResCert::Base { module, x_shifts, free_degrees, section, retraction } => ResCert::Base {
                module: module.twist(d),
                x_shifts: x_shifts.iter().map(|s| s + d).collect(),
                free_degrees: free_degrees.iter().map(|f| f - d).collect(),
                section: section.clone(),
                retraction: retraction.clone(),
            },
            ResCert::Ext { module, seq, left, right } => ResCert::Ext {
                module: module.twist(d),
                seq: tw_seq(seq),
                left: Box::new(left.twist(d)),
                right: Box::new(right.twist(d)),
            },
            ResCert::Ker { module, seq, middle, right } => ResCert::Ker {
                module: module.twist(d),
                seq: tw_seq(seq),
                middle: Box::new(middle.twist(d)),
                right: Box::new(right.twist(d)),
            },
            ResCert::Sum { module, parts, section, retraction } => ResCert::Sum {
                module: module.twist(d),
                parts: parts.iter().map(|p| p.twist(d)).collect(),
                section: section.clone(),
                retraction: retraction.clone(),
            },
        }
    }
}

/// Literal equality of presentations after a constant degree shift; returns the shift `s`
/// with `a = b(s)`.
pub fn shift_between(a: &FPModule, b: &FPModule) -> Option<i64> {
    if a.ngens() != b.ngens() || a.relations() != b.relations() {
        return None;
    }
    let s = match (a.gen_degrees().first(), b.gen_degrees().first()) {
        (Some(x), Some(y)) => y - x,
        _ => 0,
    };
    a.gen_degrees().iter().zip(b.gen_degrees()).all(|(x, y)| y - x == s).then_some(s)
}

fn ambient(x: &FPModule, x_shifts: &[i64], free_degrees: &[i64]) -> Result<FPModule> {
    let mut parts: Vec<FPModule> = x_shifts.iter().map(|&s| x.twist(s)).collect();
    if !free_degrees.is_empty() {
        parts.push(FPModule::free(x.ring(), free_degrees.to_vec()));
    }
    if parts.is_empty() {
        return Ok(FPModule::zero(x.ring()));
    }
    FPModule::direct_sum(&parts)
}

fn check_split(module: &FPModule, amb: &FPModule, section: &[Vec<Poly>], retraction: &[Vec<Poly>]) -> Result<()> {
    let s = ModMap::new(module.clone(), amb.clone(), section.to_vec())?;
    let r = ModMap::new(amb.clone(), module.clone(), retraction.to_vec())?;
    if !s.then(&r)?.same_as(&ModMap::identity(module)) {
        return Err(Error::Verification("retraction after section is not the identity".into()));
    }
    Ok(())
}

fn check_end(child: &FPModule, end: &FPModule, what: &str) -> Result<()> {
    if shift_between(child, end).is_none() {
        return Err(Error::Verification(format!("{what} certificate is for a different module")));
    }
    Ok(())
}

fn check_node(cert: &ResCert, x: &FPModule, path: &str) -> std::result::Result<usize, String> {
    let fail = |e: Error| format!("{path}: {e}");
    match cert {
        ResCert::Base { module, x_shifts, free_degrees, section, retraction } => {
            let amb = ambient(x, x_shifts, free_degrees).map_err(fail)?;
            check_split(module, &amb, section, retraction).map_err(fail)?;
            Ok(0)
        }
        ResCert::Ext { module, seq, left, right } => {
            seq.check().map_err(fail)?;
            check_end(module, seq.middle(), "node").map_err(fail)?;
            check_end(left.module(), seq.left(), "left").map_err(fail)?;
            check_end(right.module(), seq.right(), "right").map_err(fail)?;
            let dl = check_node(left, x, &format!("{path}/ext.left"))?;
            let dr = check_node(right, x, &format!("{path}/ext.right"))?;
            Ok(1 + dl.max(dr))
        }
        ResCert::Ker { module, seq, middle, right } => {
            seq.check().map_err(fail)?;
            check_end(module, seq.left(), "node").map_err(fail)?;
            check_end(middle.module(), seq.middle(), "middle").map_err(fail)?;
            check_end(right.module(), seq.right(), "right").map_err(fail)?;
            let dm = check_node(middle, x, &format!("{path}/ker.middle"))?;
            let dr = check_node(right, x, &format!("{path}/ker.right"))?;
            Ok(1 + dm.max(dr))
        }
        ResCert::Sum { module, parts, section, retraction } => {
            let mods: Vec<FPModule> = parts.iter().map(|p| p.module().clone()).collect();
            let amb = if mods.is_empty() { FPModule::zero(module.ring()) } else { FPModule::direct_sum(&mods).map_err(fail)? };
            check_split(module, &amb, section, retraction).map_err(fail)?;
            let mut depth = 0;
            for (k, p) in parts.iter().enumerate() {
                depth = depth.max(check_node(p, x, &format!("{path}/sum.{k}"))?);
            }
            Ok(depth)
        }
    }
}

/// Check that `cert` proves `y ∈ res^n x` and report `n`.
pub fn verify_cert(cert: &ResCert, x: &FPModule, y: &FPModule) -> Verdict {
    match check_node(cert, x, "root") {
        Err(msg) => Verdict { ok: false, depth: cert.depth(), failure: Some(msg) },
        Ok(depth) => {
            if cert.module().same_up_to_shift(y) {
                Verdict { ok: true, depth, failure: None }
            } else {
                Verdict { ok: false, depth, failure: Some("root: certified module differs from the target".into()) }
            }
        }
    }
}

/// Graft `c1` (`Y ∈ res^m X`) onto the leaves of `c2` (`Z ∈ res^n Y`), giving `Z ∈ res^{m+n} X`.
pub fn compose_certs(c1: &ResCert, c2: &ResCert) -> Result<ResCert> {
    Ok(match c2 {
        ResCert::Base { module, x_shifts, free_degrees, section, retraction } => {
            if x_shifts.is_empty() {
                return Ok(c2.clone());
            }
            let mut parts = Vec::new();
            for &s in x_shifts {
                parts.push(c1.twist(s));
            }
            if !free_degrees.is_empty() {
                parts.push(ResCert::base_free(&FPModule::free(module.ring(), free_degrees.clone())));
            }
            ResCert::Sum { module: module.clone(), parts, section: section.clone(), retraction: retraction.clone() }
        }
        ResCert::Ext { module, seq, left, right } => ResCert::Ext {
            module: module.clone(),
            seq: seq.clone(),
            left: Box::new(compose_certs(c1, left)?),
            right: Box::new(compose_certs(c1, right)?),
        },
        ResCert::Ker { module, seq, middle, right } => ResCert::Ker {
            module: module.clone(),
            seq: seq.clone(),
            middle: Box::new(compose_certs(c1, middle)?),
            right: Box::new(compose_certs(c1, right)?),
        },
        ResCert::Sum { module, parts, section, retraction } => ResCert::Sum {
            module: module.clone(),
            parts: parts.iter().map(|p| compose_certs(c1, p)).collect::<Result<_>>()?,
            section: section.clone(),
            retraction: retraction.clone(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::homology::syzygy_sequence;
    use crate::ideal::{Ideal, QuotRing};
    use crate::poly::BaseRing;
    use std::sync::Arc;

    fn r() -> Arc<QuotRing> {
        let base = BaseRing::standard(&["x", "y"], Field::Rational).unwrap();
        let x2 = base.parse_poly("x^2").unwrap();
        QuotRing::new(base, vec![x2]).unwrap()
    }

    #[test]
    fn base_certificates() {
        let ring = r();
        let x = FPModule::cyclic(&Ideal::parse(&ring, &["x"]).unwrap(), 0);
        let v = verify_cert(&ResCert::base_of(&x), &x, &x);
        assert_eq!(v, Verdict { ok: true, depth: 0, failure: None });
        let free = FPModule::free(&ring, vec![0]);
        assert!(verify_cert(&ResCert::base_free(&free), &x, &free).ok);
        // a base leaf claiming X is R fails
        let bogus = ResCert::Base {
            module: free.clone(),
            x_shifts: vec![0],
            free_degrees: vec![],
            section: vec![vec![ring.base().one()]],
            retraction: vec![vec![ring.base().one()]],
        };
        assert!(!verify_cert(&bogus, &x, &free).ok);
    }

    #[test]
    fn syzygy_kernel_certificate_and_composition() {
        let ring = r();
        let x = FPModule::cyclic(&Ideal::parse(&ring, &["x", "y^2"]).unwrap(), 0);
        let seq = syzygy_sequence(&x).unwrap();
        let omega = seq.left().clone();
        let c1 = ResCert::Ker {
            module: omega.clone(),
            seq: seq.clone(),
            middle: Box::new(ResCert::base_free(seq.middle())),
            right: Box::new(ResCert::base_of(&x)),
        };
        let v = verify_cert(&c1, &x, &omega);
        assert!(v.ok, "{:?}", v.failure);
        assert_eq!(v.depth, 1);

        let seq2 = syzygy_sequence(&omega).unwrap();
        let omega2 = seq2.left().clone();
        let right = ResCert::Base {
            module: seq2.right().clone(),
            x_shifts: vec![0],
            free_degrees: vec![],
            section: omega.min_presentation().from_min.matrix,
            retraction: omega.min_presentation().to_min.matrix,
        };
        let c2 = ResCert::Ker { module: omega2.clone(), seq: seq2.clone(), middle: Box::new(ResCert::base_free(seq2.middle())), right: Box::new(right) };
        assert!(verify_cert(&c2, &omega, &omega2).ok);
        let c = compose_certs(&c1, &c2).unwrap();
        let v = verify_cert(&c, &x, &omega2);
        assert!(v.ok, "{:?}", v.failure);
        assert_eq!(v.depth, 2);
        // a depth-0 graft stays depth 0
        let c0 = compose_certs(&ResCert::base_of(&x), &ResCert::base_of(&x)).unwrap();
        assert_eq!(verify_cert(&c0, &x, &x).depth, 0);
    }
}
