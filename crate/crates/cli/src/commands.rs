//! Subcommand implementations. Each returns the report as text or JSON.

use std::thread;

use serde::Serialize;
use serde_json::json;

use nonfree_core::cert::verify_cert;
use nonfree_core::construct::{pushout_step, punctured_descent, realize, DescentTrace};
use nonfree_core::corpus::{example_corpus, Family, PfChoice};
use nonfree_core::error::Error;
use nonfree_core::homology::{ext1, syzygy};
use nonfree_core::ideal::Ideal;
use nonfree_core::json::{certificate_document, load_certificate, module_to_json, realization_document, ring_to_json, CertificateJson};
use nonfree_core::loci::{nonfree_locus, nonfree_locus_fitting, sing_locus_hypersurface, support, ClosedSubset};
use nonfree_core::module::FPModule;

use crate::session::Session;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Exit status 1 for failed checks, 2 for bad input.
#[derive(Debug)]
pub enum Failure {
    Verification(String),
    Input(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Input(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Input(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Verification(m) => Failure::Verification(m),
            other => Failure::Input(other.to_string()),
        }
    }
}

pub type Outcome = Result<String, Failure>;

fn input<E: ToString>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn describe(m: &FPModule) -> String {
    let degs: Vec<String> = m.gen_degrees().iter().map(|d| d.to_string()).collect();
    if m.relations().is_empty() {
        return format!("free, generators in degrees [{}]", degs.join(", "));
    }
    format!("coker {} degrees {}", m.format_matrix(), degs.join(" "))
}

fn nf_pair(m: &FPModule) -> Result<(ClosedSubset, ClosedSubset), Failure> {
    Ok((nonfree_locus(m)?, nonfree_locus_fitting(m)?))
}

pub fn nf(s: &Session, name: &str, fmt: Format) -> Outcome {
    let m = s.module(name).map_err(Failure::Input)?;
    let (a, b) = nf_pair(m)?;
    let agree = a.same_as(&b);
    let out = match fmt {
        Format::Text => format!(
            "NF({name}) = {a}\nFitting route: {b}\noracle agreement: {}\n",
            if agree { "yes" } else { "no" }
        ),
        Format::Json => to_json(&json!({
            "module": name,
            "nonfree_locus": a.format(),
            "fitting_route": b.format(),
            "agreement": agree,
        })),
    };
    if agree {
        Ok(out)
    } else {
        Err(Failure::Verification(format!("{out}the two routes disagree")))
    }
}

pub fn syzygy_cmd(s: &Session, name: &str, n: usize, fmt: Format) -> Outcome {
    let m = s.module(name).map_err(Failure::Input)?;
    let om = syzygy(m, n)?;
    Ok(match fmt {
        Format::Text => format!("Ω^{n}({name}) = {}\n", describe(&om)),
        Format::Json => to_json(&json!({ "ring": ring_to_json(&s.ring), "syzygy": n, "module": module_to_json(&om) })),
    })
}

pub fn ext1_cmd(s: &Session, a: &str, b: &str, fmt: Format) -> Outcome {
    let ma = s.module(a).map_err(Failure::Input)?;
    let mb = s.module(b).map_err(Failure::Input)?;
    let e = ext1(ma, mb)?.min_presentation().module;
    let supp = support(&e)?;
    Ok(match fmt {
        Format::Text => format!("Ext^1({a}, {b}) = {}\nsupport: {supp}\n", if e.is_zero() { "0".into() } else { describe(&e) }),
        Format::Json => to_json(&json!({
            "ring": ring_to_json(&s.ring),
            "ext1": module_to_json(&e),
            "support": supp.format(),
        })),
    })
}

fn trace_text(base: &nonfree_core::poly::BaseRing, traces: &[DescentTrace]) -> String {
    let mut out = String::new();
    for t in traces {
        if let Some(p) = &t.component {
            out += &format!("component V{}:\n", p.format());
        }
        for (k, st) in t.steps.iter().enumerate() {
            out += &format!("  step {}: x = {}, NF = {}\n", k + 1, base.format(&st.element), st.nonfree);
        }
    }
    out
}

fn check_cert(x: &FPModule, doc: &CertificateJson, y: &FPModule, cert: &nonfree_core::cert::ResCert) -> Result<(), Failure> {
    let v = verify_cert(cert, x, y);
    if !v.ok {
        return Err(Failure::Verification(v.failure.unwrap_or_default()));
    }
    if let Some(b) = doc.bound {
        if v.depth > b {
            return Err(Failure::Verification(format!("depth {} exceeds bound {b}", v.depth)));
        }
    }
    Ok(())
}

pub fn pushout_cmd(s: &Session, name: &str, elem: &str, fmt: Format) -> Outcome {
    let m = s.module(name).map_err(Failure::Input)?;
    let x = s.element(elem).map_err(Failure::Input)?;
    let step = pushout_step(m, &x, None)?;
    let doc = certificate_document(m, &step.module, &step.cert, Some(2), &[]);
    check_cert(m, &doc, &step.module, &step.cert)?;
    Ok(match fmt {
        Format::Text => format!(
            "X1 = {}\nNF({name}) = {}\nNF(X1) = {}\ncertificate depth {} ≤ 2\n",
            describe(&step.module),
            step.nonfree_before,
            step.nonfree_after,
            step.cert.depth()
        ),
        Format::Json => to_json(&doc),
    })
}

pub fn realize_cmd(s: &Session, name: &str, closed: &str, fmt: Format) -> Outcome {
    let m = s.module(name).map_err(Failure::Input)?;
    let w = s.closed_set(closed).map_err(Failure::Input)?;
    let r = realize(m, &w)?;
    let got = nonfree_locus(&r.module)?;
    if !got.same_as(&w) {
        return Err(Failure::Verification(format!("NF(Y) = {got}, expected {w}")));
    }
    let doc = realization_document(m, &r, None);
    check_cert(m, &doc, &r.module, &r.cert)?;
    Ok(match fmt {
        Format::Text => format!(
            "Y = {}\nNF(Y) = {got}\n{}pushout steps: {}\ncertificate depth {}\n",
            describe(&r.module),
            trace_text(s.ring.base(), &r.traces),
            r.steps(),
            r.cert.depth()
        ),
        Format::Json => to_json(&doc),
    })
}

pub fn punctured_cmd(s: &Session, name: &str, prime: Option<&str>, fmt: Format) -> Outcome {
    let m = s.module(name).map_err(Failure::Input)?;
    let p = match prime {
        Some(spec) => s.prime(spec).map_err(Failure::Input)?,
        None => Ideal::maximal(&s.ring),
    };
    let (r, bound) = punctured_descent(m, &p)?;
    let doc = realization_document(m, &r, Some(bound.bound));
    check_cert(m, &doc, &r.module, &r.cert)?;
    let label = if p.same_as(&Ideal::maximal(&s.ring)) { format!("dim NF({name})") } else { format!("ht_NF({name}){p}") };
    Ok(match fmt {
        Format::Text => format!(
            "Y = {}\nNF(Y) = {}\n{}step bound {} ≤ 2·{label} = {}\n",
            describe(&r.module),
            nonfree_locus(&r.module)?,
            trace_text(s.ring.base(), &r.traces),
            2 * bound.steps,
            bound.bound
        ),
        Format::Json => to_json(&doc),
    })
}

pub fn verify_cmd(text: &str, fmt: Format) -> Outcome {
    let doc: CertificateJson = serde_json::from_str(text).map_err(|e| input(format!("malformed certificate JSON: {e}")))?;
    let loaded = load_certificate(&doc)?;
    let cert = loaded.cert.map_err(Failure::Verification)?;
    let v = verify_cert(&cert, &loaded.base, &loaded.target);
    let mut failure = v.failure.clone();
    if v.ok && v.depth != doc.depth {
        failure = Some(format!("root: declared depth {} but the tree has depth {}", doc.depth, v.depth));
    }
    if let (true, Some(b)) = (failure.is_none(), doc.bound) {
        if v.depth > b {
            failure = Some(format!("root: depth {} exceeds bound {b}", v.depth));
        }
    }
    let out = match fmt {
        Format::Text => match &failure {
            None => format!("certificate verifies: depth {}\n", v.depth),
            Some(f) => format!("certificate rejected at {f}\n"),
        },
        Format::Json => to_json(&json!({ "verified": failure.is_none(), "depth": v.depth, "failure": failure })),
    };
    match failure {
        None => Ok(out),
        Some(_) => Err(Failure::Verification(out.trim_end().to_string())),
    }
}

pub fn sing_cmd(s: &Session, fmt: Format) -> Outcome {
    let z = sing_locus_hypersurface(&s.ring)?;
    Ok(match fmt {
        Format::Text => format!("Sing({}) = {z}\n", s.ring_name),
        Format::Json => to_json(&json!({ "ring": ring_to_json(&s.ring), "singular_locus": z.format() })),
    })
}

#[derive(Serialize)]
struct CorpusEntry {
    ring: nonfree_core::json::RingJson,
    module: nonfree_core::json::ModuleJson,
    nonfree_locus: String,
    fitting_route: String,
    agreement: bool,
}

fn corpus_entry(r: &std::sync::Arc<nonfree_core::ideal::QuotRing>, m: &FPModule) -> Result<CorpusEntry, Failure> {
    let (a, b) = nf_pair(m)?;
    Ok(CorpusEntry {
        ring: ring_to_json(r),
        module: module_to_json(m),
        agreement: a.same_as(&b),
        nonfree_locus: a.format(),
        fitting_route: b.format(),
    })
}

/// Generate a corpus family and compute both nonfree loci, in parallel over `jobs` threads.
pub fn corpus_cmd(family: &str, n: Option<u32>, f: Option<&str>, count: usize, seed: Option<u64>, jobs: usize, fmt: Format) -> Outcome {
    let fam = match family {
        "In" | "in" => Family::In(n.ok_or_else(|| input("family In needs --n"))?),
        "pf" => Family::Pf(PfChoice::parse(f.ok_or_else(|| input("family pf needs --f"))?)?),
        "random" => Family::Random { seed: seed.ok_or_else(|| input("random corpus generation needs an explicit --seed"))?, count },
        other => return Err(input(format!("unknown family `{other}`; use In, pf or random"))),
    };
    let items = example_corpus(&fam)?;
    let jobs = jobs.max(1);
    let chunk = items.len().div_ceil(jobs).max(1);
    let results: Vec<Result<CorpusEntry, Failure>> = thread::scope(|sc| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| sc.spawn(move || c.iter().map(|(r, m)| corpus_entry(r, m)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    let entries = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let all_agree = entries.iter().all(|e| e.agreement);
    let out = match fmt {
        Format::Text => {
            let mut out = String::new();
            for (k, ((r, m), e)) in items.iter().zip(&entries).enumerate() {
                out += &format!("[{k}] {r}: {}\n    NF = {}; oracle agreement: {}\n", describe(m), e.nonfree_locus, if e.agreement { "yes" } else { "no" });
            }
            out
        }
        Format::Json => to_json(&entries),
    };
    if all_agree {
        Ok(out)
    } else {
        Err(Failure::Verification(out))
    }
}
