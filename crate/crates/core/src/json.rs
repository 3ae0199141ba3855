//! JSON form of rings, modules, certificates and descent traces.
//!
//! Matrices are arrays of rows of polynomial strings in canonical form.
//! Field order is fixed by the struct declarations, so equal values give
//! byte-identical output.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cert::ResCert;
use crate::construct::{DescentTrace, Realization};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::ideal::QuotRing;
use crate::module::{FPModule, ModMap, ShortExact};
use crate::poly::{BaseRing, Poly};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingJson {
    pub variables: Vec<String>,
    pub characteristic: u64,
    pub weights: Vec<u32>,
    pub defining_ideal: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub generator_degrees: Vec<i64>,
    pub relations: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceJson {
    pub left: ModuleJson,
    pub middle: ModuleJson,
    pub right: ModuleJson,
    pub inclusion: Vec<Vec<String>>,
    pub projection: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NodeJson {
    Base {
        module: ModuleJson,
        x_shifts: Vec<i64>,
        free_degrees: Vec<i64>,
        section: Vec<Vec<String>>,
        retraction: Vec<Vec<String>>,
    },
    Ext { module: ModuleJson, sequence: SequenceJson, left: Box<NodeJson>, right: Box<NodeJson> },
    Ker { module: ModuleJson, sequence: SequenceJson, middle: Box<NodeJson>, right: Box<NodeJson> },
    Sum { module: ModuleJson, parts: Vec<NodeJson>, section: Vec<Vec<String>>, retraction: Vec<Vec<String>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepJson {
    pub element: String,
    pub nonfree_locus: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceJson {
    pub component: Option<String>,
    pub steps: Vec<StepJson>,
}

/// A certificate for `target ∈ res^depth base`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub ring: RingJson,
    pub base: ModuleJson,
    pub target: ModuleJson,
    pub depth: usize,
    pub bound: Option<usize>,
    pub certificate: NodeJson,
    pub traces: Vec<TraceJson>,
}

pub fn ring_to_json(ring: &QuotRing) -> RingJson {
    let b = ring.base();
    RingJson {
        variables: b.vars().to_vec(),
        characteristic: b.field().characteristic(),
        weights: b.weights().to_vec(),
        defining_ideal: ring.defining().iter().map(|f| b.format(f)).collect(),
    }
}

pub fn ring_from_json(r: &RingJson) -> Result<Arc<QuotRing>> {
    let base = BaseRing::new(r.variables.clone(), r.weights.clone(), Field::from_characteristic(r.characteristic)?)?;
    let defining = r.defining_ideal.iter().map(|s| base.parse_poly(s)).collect::<Result<Vec<_>>>()?;
    QuotRing::new(base, defining)
}

/// Rows of a matrix given by `ncols` columns of length `nrows`.
pub fn matrix_to_rows(base: &BaseRing, cols: &[Vec<Poly>], nrows: usize) -> Vec<Vec<String>> {
    (0..nrows).map(|i| cols.iter().map(|c| base.format(&c[i])).collect()).collect()
}

fn rows_to_matrix(base: &BaseRing, rows: &[Vec<String>], nrows: usize, ncols: usize) -> Result<Vec<Vec<Poly>>> {
    if rows.len() != nrows {
        return Err(Error::Shape(format!("{} rows, expected {nrows}", rows.len())));
    }
    let mut cols = vec![Vec::with_capacity(nrows); ncols];
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(Error::Shape(format!("row {i} has {} entries, expected {ncols}", row.len())));
        }
        for (j, s) in row.iter().enumerate() {
            cols[j].push(base.parse_poly(s)?);
        }
    }
    Ok(cols)
}

pub fn module_to_json(m: &FPModule) -> ModuleJson {
    ModuleJson {
        generator_degrees: m.gen_degrees().to_vec(),
        relations: matrix_to_rows(m.ring().base(), m.relations(), m.ngens()),
    }
}

pub fn module_from_json(ring: &Arc<QuotRing>, m: &ModuleJson) -> Result<FPModule> {
    let g = m.generator_degrees.len();
    let ncols = m.relations.first().map_or(0, |r| r.len());
    let cols = rows_to_matrix(ring.base(), &m.relations, g, ncols)?;
    FPModule::new(ring, m.generator_degrees.clone(), cols)
}

fn map_rows(m: &ModMap) -> Vec<Vec<String>> {
    matrix_to_rows(m.source.ring().base(), &m.matrix, m.target.ngens())
}

fn seq_to_json(s: &ShortExact) -> SequenceJson {
    SequenceJson {
        left: module_to_json(s.left()),
        middle: module_to_json(s.middle()),
        right: module_to_json(s.right()),
        inclusion: map_rows(&s.inclusion),
        projection: map_rows(&s.projection),
    }
}

pub fn cert_to_json(c: &ResCert) -> NodeJson {
    let base = c.module().ring().base().clone();
    match c {
        ResCert::Base { module, x_shifts, free_degrees, section, retraction } => {
            let amb: usize = retraction.len();
            NodeJson::Base {
                module: module_to_json(module),
                x_shifts: x_shifts.clone(),
                free_degrees: free_degrees.clone(),
                section: matrix_to_rows(&base, section, amb),
                retraction: matrix_to_rows(&base, retraction, module.ngens()),
            }
        }
        ResCert::Ext { module, seq, left, right } => NodeJson::Ext {
            module: module_to_json(module),
            sequence: seq_to_json(seq),
            left: Box::new(cert_to_json(left)),
            right: Box::new(cert_to_json(right)),
        },
        ResCert::Ker { module, seq, middle, right } => NodeJson::Ker {
            module: module_to_json(module),
            sequence: seq_to_json(seq),
            middle: Box::new(cert_to_json(middle)),
            right: Box::new(cert_to_json(right)),
        },
        ResCert::Sum { module, parts, section, retraction } => NodeJson::Sum {
            module: module_to_json(module),
            parts: parts.iter().map(cert_to_json).collect(),
            section: matrix_to_rows(&base, section, retraction.len()),
            retraction: matrix_to_rows(&base, retraction, module.ngens()),
        },
    }
}

fn at<T>(path: &str, r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{path}: {e}"))
}

/// Split maps: the ambient size is the column count of the retraction.
fn split_from_json(
    base: &BaseRing,
    n: usize,
    section: &[Vec<String>],
    retraction: &[Vec<String>],
) -> Result<(Vec<Vec<Poly>>, Vec<Vec<Poly>>)> {
    let amb = retraction.first().map_or(section.len(), |r| r.len());
    Ok((rows_to_matrix(base, section, amb, n)?, rows_to_matrix(base, retraction, n, amb)?))
}

fn seq_from_json(ring: &Arc<QuotRing>, s: &SequenceJson) -> Result<ShortExact> {
    let left = module_from_json(ring, &s.left)?;
    let middle = module_from_json(ring, &s.middle)?;
    let right = module_from_json(ring, &s.right)?;
    let base = ring.base();
    let inc = rows_to_matrix(base, &s.inclusion, middle.ngens(), left.ngens())?;
    let proj = rows_to_matrix(base, &s.projection, right.ngens(), middle.ngens())?;
    // maps are checked by the verifier, not here
    Ok(ShortExact {
        inclusion: ModMap { source: left, target: middle.clone(), matrix: inc },
        projection: ModMap { source: middle, target: right, matrix: proj },
    })
}

/// Rebuild a certificate; errors carry the path of the malformed node.
pub fn cert_from_json(ring: &Arc<QuotRing>, n: &NodeJson, path: &str) -> std::result::Result<ResCert, String> {
    let base = ring.base();
    Ok(match n {
        NodeJson::Base { module, x_shifts, free_degrees, section, retraction } => {
            let module = at(path, module_from_json(ring, module))?;
            let (section, retraction) = at(path, split_from_json(base, module.ngens(), section, retraction))?;
            ResCert::Base { module, x_shifts: x_shifts.clone(), free_degrees: free_degrees.clone(), section, retraction }
        }
        NodeJson::Ext { module, sequence, left, right } => ResCert::Ext {
            module: at(path, module_from_json(ring, module))?,
            seq: at(path, seq_from_json(ring, sequence))?,
            left: Box::new(cert_from_json(ring, left, &format!("{path}/ext.left"))?),
            right: Box::new(cert_from_json(ring, right, &format!("{path}/ext.right"))?),
        },
        NodeJson::Ker { module, sequence, middle, right } => ResCert::Ker {
            module: at(path, module_from_json(ring, module))?,
            seq: at(path, seq_from_json(ring, sequence))?,
            middle: Box::new(cert_from_json(ring, middle, &format!("{path}/ker.middle"))?),
            right: Box::new(cert_from_json(ring, right, &format!("{path}/ker.right"))?),
        },
        NodeJson::Sum { module, parts, section, retraction } => {
            let module = at(path, module_from_json(ring, module))?;
            let (section, retraction) = at(path, split_from_json(base, module.ngens(), section, retraction))?;
            let parts = parts
                .iter()
                .enumerate()
                .map(|(k, p)| cert_from_json(ring, p, &format!("{path}/sum.{k}")))
                .collect::<std::result::Result<_, _>>()?;
            ResCert::Sum { module, parts, section, retraction }
        }
    })
}

pub fn traces_to_json(base: &BaseRing, traces: &[DescentTrace]) -> Vec<TraceJson> {
    traces
        .iter()
        .map(|t| TraceJson {
            component: t.component.as_ref().map(|p| format!("V{}", p.format())),
            steps: t
                .steps
                .iter()
                .map(|s| StepJson { element: base.format(&s.element), nonfree_locus: s.nonfree.format() })
                .collect(),
        })
        .collect()
}

/// The full document for `cert` proving `target ∈ res base`.
pub fn certificate_document(base: &FPModule, target: &FPModule, cert: &ResCert, bound: Option<usize>, traces: &[DescentTrace]) -> CertificateJson {
    let ring = base.ring();
    CertificateJson {
        ring: ring_to_json(ring),
        base: module_to_json(base),
        target: module_to_json(target),
        depth: cert.depth(),
        bound,
        certificate: cert_to_json(cert),
        traces: traces_to_json(ring.base(), traces),
    }
}

pub fn realization_document(base: &FPModule, r: &Realization, bound: Option<usize>) -> CertificateJson {
    certificate_document(base, &r.module, &r.cert, bound, &r.traces)
}

/// A parsed document: ring, base, target and the certificate, or the path of the malformed node.
pub struct LoadedCertificate {
    pub ring: Arc<QuotRing>,
    pub base: FPModule,
    pub target: FPModule,
    pub cert: std::result::Result<ResCert, String>,
}

/// Header errors are input errors; a malformed certificate body is reported in `cert`.
pub fn load_certificate(doc: &CertificateJson) -> Result<LoadedCertificate> {
    let ring = ring_from_json(&doc.ring)?;
    let base = module_from_json(&ring, &doc.base)?;
    let target = module_from_json(&ring, &doc.target)?;
    let cert = cert_from_json(&ring, &doc.certificate, "root");
    Ok(LoadedCertificate { ring, base, target, cert })
}
