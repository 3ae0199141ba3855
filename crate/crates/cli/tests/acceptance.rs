//! Acceptance suite. Runs without the libtest harness and prints one line per criterion.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use nonfree_core::cert::{compose_certs, verify_cert, ResCert};
use nonfree_core::construct::{avoid, punctured_descent, pushout_step, realize, Realization};
use nonfree_core::corpus::{example_corpus, i_n, p_f, ring, x_module, Family, PfChoice};
use nonfree_core::field::Field;
use nonfree_core::homology::{annihilator, ext1, syzygy};
use nonfree_core::ideal::{Ideal, QuotRing};
use nonfree_core::json::{certificate_document, realization_document};
use nonfree_core::loci::{nonfree_locus, nonfree_locus_fitting, sing_locus_hypersurface, ClosedSubset};
use nonfree_core::module::FPModule;
use nonfree_core::poly::Poly;

const CORPUS_SEED: u64 = 20_240_611;
const CORPUS_SIZE: usize = 52;
const GRAFT_SEED: u64 = 7;
const GRAFT_PAIRS: usize = 100;
const MUTATION_SEED: u64 = 11;
const MUTATIONS: usize = 20;

type Check = Result<String, String>;

struct Entry {
    ring: Arc<QuotRing>,
    module: FPModule,
    nf: ClosedSubset,
}

struct Suite {
    corpus: Vec<Entry>,
    /// `(corpus index, component index) -> realize(X, V(p))`.
    singles: HashMap<(usize, usize), Realization>,
    /// `corpus index -> realize(X, V(m))` when `V(m)` is not a component.
    points: HashMap<usize, Realization>,
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(ctx: &str) -> impl FnOnce(E) -> String + '_ {
    move |e| format!("{ctx}: {e}")
}

fn build_corpus() -> Result<Vec<Entry>, String> {
    let items = example_corpus(&Family::Random { seed: CORPUS_SEED, count: CORPUS_SIZE }).map_err(err("corpus"))?;
    items
        .into_iter()
        .map(|(ring, module)| {
            let nf = nonfree_locus(&module).map_err(err("nonfree_locus"))?;
            Ok(Entry { ring, module, nf })
        })
        .collect()
}

fn criterion_1(s: &Suite) -> Check {
    let rings: std::collections::BTreeSet<String> = s.corpus.iter().map(|e| e.ring.to_string()).collect();
    for (k, e) in s.corpus.iter().enumerate() {
        let fit = nonfree_locus_fitting(&e.module).map_err(err("fitting route"))?;
        ensure(fit.radical().same_as(e.nf.radical()), || format!("module #{k}: Ext route {} but Fitting route {fit}", e.nf))?;
    }
    ensure(s.corpus.len() >= 50 && rings.len() == 4, || format!("{} modules over {} rings", s.corpus.len(), rings.len()))?;
    Ok(format!("{} modules over {} rings agree", s.corpus.len(), rings.len()))
}

/// Minimal primes of `NF(X)` plus the homogeneous maximal ideal when `NF(X)` is nonempty.
fn primes_in_nf(e: &Entry) -> Vec<Ideal> {
    let mut out: Vec<Ideal> = e.nf.primes().to_vec();
    let m = Ideal::maximal(&e.ring);
    if !e.nf.is_empty() && !out.iter().any(|p| p.same_as(&m)) {
        out.push(m);
    }
    out
}

fn criterion_2(s: &Suite) -> Check {
    let mut triples = 0;
    for (k, e) in s.corpus.iter().enumerate() {
        for p in primes_in_nf(e) {
            let others: Vec<Ideal> = e.nf.primes().iter().filter(|q| !q.contains_ideal(&p)).cloned().collect();
            let x = avoid(&p, &others).map_err(err("avoid"))?;
            ensure(p.contains(&x), || format!("module #{k}: avoid left {p}"))?;
            let step = pushout_step(&e.module, &x, None).map_err(|er| format!("module #{k} at {p}: {er}"))?;
            let v = verify_cert(&step.cert, &e.module, &step.module);
            ensure(v.ok && v.depth <= 2, || format!("module #{k}: certificate {:?}", v.failure))?;
            let nf1 = nonfree_locus(&step.module).map_err(err("nonfree_locus"))?;
            let fit1 = nonfree_locus_fitting(&step.module).map_err(err("fitting route"))?;
            ensure(nf1.same_as(&fit1), || format!("module #{k}: routes disagree on X1"))?;
            ensure(nf1.contains_prime(&p), || format!("module #{k}: V{p} not inside NF(X1) = {nf1}"))?;
            ensure(nf1.is_subset_of(&e.nf), || format!("module #{k}: NF(X1) = {nf1} not inside {}", e.nf))?;
            ensure(nf1.radical().radical_contains(&x), || format!("module #{k}: D(x) meets NF(X1) = {nf1}"))?;
            triples += 1;
        }
    }
    ensure(triples >= 50, || format!("only {triples} triples"))?;
    Ok(format!("{triples} triples satisfy res^2, V(p) ⊆ NF(X1) ⊆ NF(X), D(x) ∩ NF(X1) = ∅"))
}

fn check_realization(e: &Entry, w: &ClosedSubset, r: &Realization) -> Result<(), String> {
    let got = nonfree_locus(&r.module).map_err(err("nonfree_locus"))?;
    ensure(got.same_as(w), || format!("NF(Y) = {got}, wanted {w}"))?;
    let v = verify_cert(&r.cert, &e.module, &r.module);
    ensure(v.ok, || format!("certificate rejected: {:?}", v.failure))
}

fn criterion_3(s: &mut Suite) -> Check {
    let mut cases = 0;
    let mut modules = 0;
    for (k, e) in s.corpus.iter().enumerate() {
        let comps = e.nf.primes();
        if comps.is_empty() {
            continue;
        }
        modules += 1;
        for mask in 0u32..(1 << comps.len()) {
            let chosen: Vec<Ideal> = (0..comps.len()).filter(|i| mask >> i & 1 == 1).map(|i| comps[i].clone()).collect();
            let w = ClosedSubset::from_primes(&e.ring, chosen);
            let r = realize(&e.module, &w).map_err(|er| format!("module #{k}, W = {w}: {er}"))?;
            check_realization(e, &w, &r).map_err(|er| format!("module #{k}, W = {w}: {er}"))?;
            if mask.count_ones() == 1 {
                s.singles.insert((k, mask.trailing_zeros() as usize), r);
            }
            cases += 1;
        }
        let m = Ideal::maximal(&e.ring);
        if !comps.iter().any(|p| p.same_as(&m)) {
            let w = ClosedSubset::of_prime(&m);
            let r = realize(&e.module, &w).map_err(|er| format!("module #{k}, W = {w}: {er}"))?;
            check_realization(e, &w, &r).map_err(|er| format!("module #{k}, W = {w}: {er}"))?;
            s.points.insert(k, r);
        }
    }
    let steps: usize = s.points.values().map(|r| r.steps()).sum();
    Ok(format!(
        "{cases} closed subsets over {modules} modules realized with verified certificates; also {} closed points ({steps} pushouts)",
        s.points.len()
    ))
}

fn descent_case(r: &Arc<QuotRing>, max_bound: usize) -> Result<(usize, usize, Vec<i64>), String> {
    let x = x_module(r);
    let m = Ideal::maximal(r);
    let (real, bound) = punctured_descent(&x, &m).map_err(err("punctured_descent"))?;
    let v = verify_cert(&real.cert, &x, &real.module);
    ensure(v.ok && v.depth <= bound.bound, || format!("certificate {:?} depth {}", v.failure, v.depth))?;
    ensure(bound.bound <= max_bound && 2 * bound.steps <= bound.bound, || format!("{bound:?}"))?;
    let mut heights = vec![nonfree_locus(&x).map_err(err("nf"))?.height_in(&m).map_err(err("height"))?];
    for st in real.traces.iter().flat_map(|t| &t.steps) {
        heights.push(st.nonfree.height_in(&m).map_err(err("height"))?);
    }
    ensure(heights.windows(2).all(|w| w[1] < w[0]) && heights.last() == Some(&0), || format!("heights {heights:?}"))?;
    let xr = Ideal::parse(r, &["x"]).map_err(err("ideal"))?;
    for (route, nf) in [("Ext", nonfree_locus(&real.module)), ("Fitting", nonfree_locus_fitting(&real.module))] {
        let nf = nf.map_err(err(route))?;
        ensure(nf.contains_prime(&m), || format!("{route} route: Y free at the maximal ideal"))?;
        ensure(!nf.contains_prime(&xr), || format!("{route} route: Y nonfree at (x)"))?;
    }
    Ok((bound.steps, bound.bound, heights))
}

fn criterion_4() -> Check {
    let r2 = ring(&["x", "y"], &[1, 1], Field::Rational, &["x^2"]).map_err(err("ring"))?;
    let (steps, bound, _) = descent_case(&r2, 2)?;
    ensure(steps == 1 && bound == 2, || format!("Q[x,y]/(x^2): {steps} steps, bound {bound}"))?;
    let r3 = ring(&["x", "y", "z"], &[1, 1, 1], Field::Rational, &["x^2"]).map_err(err("ring"))?;
    let (steps3, bound3, heights) = descent_case(&r3, 4)?;
    Ok(format!("1 step, bound 2 in two variables; {steps3} steps, bound {bound3}, heights {heights:?} in three"))
}

fn criterion_5() -> Check {
    for n in 1..=5 {
        let e = i_n(n).map_err(err("I_n"))?;
        let v = verify_cert(&e.cert, &e.base, &e.module);
        ensure(v.ok && v.depth == 1 && e.cert.kind() == "ext", || format!("I_{n}: {:?} depth {}", v.failure, v.depth))?;
    }
    for f in PfChoice::ALL {
        let e = p_f(f).map_err(err("p(f)"))?;
        let v = verify_cert(&e.cert, &e.base, &e.module);
        ensure(v.ok && v.depth == 1 && e.cert.kind() == "ker", || format!("p({f:?}): {:?} depth {}", v.failure, v.depth))?;
    }
    Ok("I_1..I_5 and p(1), p(z), p(z^2), p(1+z) certified at depth 1".into())
}

fn criterion_6(s: &Suite) -> Check {
    let mut n = 0;
    for (k, e) in s.corpus.iter().enumerate() {
        if e.nf.is_empty() {
            continue;
        }
        let mut acc = ClosedSubset::empty(&e.ring);
        for i in 0..e.nf.primes().len() {
            let r = s.singles.get(&(k, i)).ok_or_else(|| format!("module #{k}: component {i} missing"))?;
            acc = acc.union(&nonfree_locus(&r.module).map_err(err("nf"))?).map_err(err("union"))?;
        }
        ensure(acc.same_as(&e.nf), || format!("module #{k}: union {acc} but NF = {}", e.nf))?;
        n += 1;
    }
    Ok(format!("{n} modules decompose exactly"))
}

/// A random homogeneous element of `p`, nonzero in the ring.
fn random_element(p: &Ideal, rng: &mut ChaCha8Rng) -> Poly {
    let ring = p.ring();
    let base = ring.base();
    let gens = p.canonical_gens();
    loop {
        let d = base.degree(&gens[rng.gen_range(0..gens.len())]).expect("homogeneous");
        let mut f = base.zero();
        for g in gens.iter().filter(|g| base.degree(g) == Some(d)) {
            let c = rng.gen_range(-3i64..=3);
            f = base.add(&f, &base.scale(g, &base.field().from_i64(c)));
        }
        let f = ring.reduce(&f);
        if !f.is_zero() {
            return f;
        }
    }
}

/// A seeded pushout out of `x`, or `None` when `x` is free.
fn random_step(x: &FPModule, rng: &mut ChaCha8Rng) -> Result<Option<(FPModule, ResCert)>, String> {
    let nf = nonfree_locus(x).map_err(err("nf"))?;
    if nf.is_empty() {
        return Ok(None);
    }
    let p = nf.primes()[rng.gen_range(0..nf.primes().len())].clone();
    let elem = random_element(&p, rng);
    let step = pushout_step(x, &elem, None).map_err(err("pushout_step"))?;
    Ok(Some((step.module, step.cert)))
}

fn criterion_7(s: &Suite) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(GRAFT_SEED);
    let mut firsts: Vec<(FPModule, FPModule, ResCert)> = Vec::new();
    for n in 1..=5 {
        let e = i_n(n).map_err(err("I_n"))?;
        firsts.push((e.base, e.module, e.cert));
    }
    for f in PfChoice::ALL {
        let e = p_f(f).map_err(err("p(f)"))?;
        firsts.push((e.base, e.module, e.cert));
    }
    for ((k, _), r) in &s.singles {
        firsts.push((s.corpus[*k].module.clone(), r.module.clone(), r.cert.clone()));
    }
    firsts.sort_by_key(|(a, b, _)| (a.format_matrix(), b.format_matrix()));
    let nonfree: Vec<&Entry> = s.corpus.iter().filter(|e| !e.nf.is_empty()).collect();
    let mut pairs = 0;
    let mut strict = 0;
    let mut attempts = 0;
    while pairs < GRAFT_PAIRS {
        attempts += 1;
        ensure(attempts < 10 * GRAFT_PAIRS, || format!("only {pairs} graft pairs found"))?;
        let (x, y, c1) = if rng.gen_bool(0.5) {
            firsts[rng.gen_range(0..firsts.len())].clone()
        } else {
            let e = nonfree[rng.gen_range(0..nonfree.len())];
            match random_step(&e.module, &mut rng)? {
                Some((y, c)) => (e.module.clone(), y, c),
                None => continue,
            }
        };
        let Some((z, c2)) = random_step(&y, &mut rng)? else { continue };
        for (c, a, b) in [(&c1, &x, &y), (&c2, &y, &z)] {
            let v = verify_cert(c, a, b);
            ensure(v.ok, || format!("pair {pairs}: input certificate {:?}", v.failure))?;
        }
        let c = compose_certs(&c1, &c2).map_err(err("compose"))?;
        let v = verify_cert(&c, &x, &z);
        ensure(v.ok, || format!("pair {pairs}: composite {:?}", v.failure))?;
        ensure(v.depth <= c1.depth() + c2.depth(), || format!("pair {pairs}: depth {} > {} + {}", v.depth, c1.depth(), c2.depth()))?;
        if v.depth < c1.depth() + c2.depth() {
            strict += 1;
        }
        pairs += 1;
    }
    Ok(format!("{pairs} pairs, depth(compose) ≤ depth1 + depth2 ({strict} strict)"))
}

fn criterion_8(s: &Suite) -> Check {
    let mut cases: Vec<(usize, Ideal, &FPModule)> = Vec::new();
    for (&(k, i), r) in &s.singles {
        cases.push((k, s.corpus[k].nf.primes()[i].clone(), &r.module));
    }
    let singles = cases.len();
    for (&k, r) in &s.points {
        cases.push((k, Ideal::maximal(&s.corpus[k].ring), &r.module));
    }
    cases.sort_by(|a, b| (a.0, a.1.format()).cmp(&(b.0, b.1.format())));
    let mut n = 0;
    for (k, p, y) in &cases {
        let (k, p, y) = (*k, p, *y);
        let oy = syzygy(y, 1).map_err(err("syzygy"))?;
        let e = ext1(y, &oy).map_err(err("ext1"))?;
        let ann = annihilator(&e);
        let v = ClosedSubset::of_ideal(&ann).map_err(err("V(ann)"))?;
        ensure(v.radical().same_as(p), || format!("module #{k}: radical of Ann = {} but p = {p}", v.radical()))?;
        n += 1;
    }
    Ok(format!("{n} primes recovered as √Ann Ext¹(Y, ΩY) ({singles} components, {} closed points)", n - singles))
}

fn criterion_9(s: &Suite) -> Check {
    let mut sing: HashMap<String, ClosedSubset> = HashMap::new();
    for (k, e) in s.corpus.iter().enumerate() {
        ensure(e.ring.hypersurface_equation().is_some(), || format!("module #{k}: ring is not a hypersurface"))?;
        let key = e.ring.to_string();
        if !sing.contains_key(&key) {
            sing.insert(key.clone(), sing_locus_hypersurface(&e.ring).map_err(err("sing"))?);
        }
        let z = &sing[&key];
        ensure(e.nf.is_subset_of(z), || format!("module #{k}: NF = {} not inside Sing = {z}", e.nf))?;
    }
    let listed: Vec<String> = {
        let mut v: Vec<String> = sing.iter().map(|(r, z)| format!("Sing({r}) = {z}")).collect();
        v.sort();
        v
    };
    Ok(format!("{} modules inside {}", s.corpus.len(), listed.join(", ")))
}

fn scratch_dir() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

fn run_verify(doc: &Value, name: &str) -> Result<Option<i32>, String> {
    let path = scratch_dir().join(name);
    fs::write(&path, serde_json::to_string_pretty(doc).unwrap()).map_err(err("write"))?;
    let out = Command::new(env!("CARGO_BIN_EXE_nonfree")).arg("verify").arg(&path).output().map_err(err("spawn"))?;
    Ok(out.status.code())
}

/// JSON pointers to nonzero matrix entries and to exact sequences with distinct ends.
fn sites(node: &Value, at: &str, entries: &mut Vec<String>, seqs: &mut Vec<String>) {
    let Some(obj) = node.as_object() else { return };
    for (key, v) in obj {
        let here = format!("{at}/{key}");
        match key.as_str() {
            "relations" | "inclusion" | "projection" | "section" | "retraction" => {
                for (i, row) in v.as_array().into_iter().flatten().enumerate() {
                    for (j, x) in row.as_array().into_iter().flatten().enumerate() {
                        if x != "0" {
                            entries.push(format!("{here}/{i}/{j}"));
                        }
                    }
                }
            }
            "sequence" => {
                if v["left"] != v["right"] {
                    seqs.push(here.clone());
                }
                sites(v, &here, entries, seqs);
            }
            "parts" => {
                for (i, p) in v.as_array().into_iter().flatten().enumerate() {
                    sites(p, &format!("{here}/{i}"), entries, seqs);
                }
            }
            _ if v.is_object() => sites(v, &here, entries, seqs),
            _ => {}
        }
    }
}

fn source_documents(s: &Suite) -> Result<Vec<Value>, String> {
    let mut docs = Vec::new();
    let r2 = ring(&["x", "y"], &[1, 1], Field::Rational, &["x^2"]).map_err(err("ring"))?;
    let x = x_module(&r2);
    let step = pushout_step(&x, &r2.base().var(1), None).map_err(err("pushout"))?;
    docs.push(certificate_document(&x, &step.module, &step.cert, Some(2), &[]));
    for e in [i_n(3).map_err(err("I_n"))?, p_f(PfChoice::OnePlusZ).map_err(err("p(f)"))?] {
        docs.push(certificate_document(&e.base, &e.module, &e.cert, None, &[]));
    }
    let r3 = ring(&["x", "y", "z"], &[1, 1, 1], Field::Rational, &["x^2"]).map_err(err("ring"))?;
    let x3 = x_module(&r3);
    let (real, bound) = punctured_descent(&x3, &Ideal::maximal(&r3)).map_err(err("descent"))?;
    docs.push(realization_document(&x3, &real, Some(bound.bound)));
    let mut keys: Vec<&(usize, usize)> = s.singles.keys().collect();
    keys.sort();
    if let Some(key) = keys.into_iter().find(|k| s.singles[k].steps() > 0) {
        docs.push(realization_document(&s.corpus[key.0].module, &s.singles[key], None));
    }
    if let Some(e) = s.corpus.iter().find(|e| e.nf.primes().len() >= 3) {
        let w = ClosedSubset::from_primes(&e.ring, e.nf.primes()[..2].to_vec());
        let real = realize(&e.module, &w).map_err(err("realize"))?;
        docs.push(realization_document(&e.module, &real, None));
    }
    docs.iter().map(|d| serde_json::to_value(d).map_err(err("json"))).collect()
}

fn criterion_10(s: &Suite) -> Check {
    let docs = source_documents(s)?;
    for (i, d) in docs.iter().enumerate() {
        let code = run_verify(d, &format!("control-{i}.json"))?;
        ensure(code == Some(0), || format!("unmutated certificate {i} exits {code:?}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(MUTATION_SEED);
    let mut edits = 0;
    let mut swaps = 0;
    for k in 0..MUTATIONS {
        let mut doc = docs[rng.gen_range(0..docs.len())].clone();
        let vars: Vec<String> = doc["ring"]["variables"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect();
        let (mut entries, mut seqs) = (Vec::new(), Vec::new());
        sites(&doc["certificate"], "/certificate", &mut entries, &mut seqs);
        let desc = if seqs.is_empty() || rng.gen_bool(0.6) {
            let site = entries[rng.gen_range(0..entries.len())].clone();
            let var = &vars[rng.gen_range(0..vars.len())];
            let slot = doc.pointer_mut(&site).unwrap();
            *slot = Value::String(format!("{var}*({})", slot.as_str().unwrap()));
            edits += 1;
            format!("entry {site} times {var}")
        } else {
            let site = seqs[rng.gen_range(0..seqs.len())].clone();
            let seq = doc.pointer_mut(&site).unwrap().as_object_mut().unwrap();
            let left = seq.remove("left").unwrap();
            let right = seq.insert("right".into(), left).unwrap();
            seq.insert("left".into(), right);
            swaps += 1;
            format!("legs of {site} swapped")
        };
        let code = run_verify(&doc, &format!("mutation-{k}.json"))?;
        ensure(code == Some(1), || format!("mutation {k} ({desc}) exits {code:?}"))?;
    }
    Ok(format!("{MUTATIONS} mutations ({edits} entry edits, {swaps} leg swaps) rejected with exit 1"))
}

fn main() -> ExitCode {
    let t0 = Instant::now();
    let corpus = match build_corpus() {
        Ok(c) => c,
        Err(e) => {
            println!("corpus construction failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    println!("corpus: {} seeded modules (seed {CORPUS_SEED}), built in {:.1?}", corpus.len(), t0.elapsed());
    let mut suite = Suite { corpus, singles: HashMap::new(), points: HashMap::new() };
    let mut failed = 0;
    let mut report = |n: usize, name: &str, f: &mut dyn FnMut(&mut Suite) -> Check, suite: &mut Suite| {
        let t = Instant::now();
        let r = f(suite);
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("criterion {n:>2} PASS [{name}] tolerance exact; {msg} ({secs:.1} s)"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2} FAIL [{name}] tolerance exact; {msg} ({secs:.1} s)");
            }
        }
    };
    report(1, "oracle equivalence", &mut |s| criterion_1(s), &mut suite);
    report(2, "pushout step conditions", &mut |s| criterion_2(s), &mut suite);
    report(3, "realization of sub-unions", &mut criterion_3, &mut suite);
    report(4, "punctured descent", &mut |_| criterion_4(), &mut suite);
    report(5, "In and p(f) regression", &mut |_| criterion_5(), &mut suite);
    report(6, "component decomposition", &mut |s| criterion_6(s), &mut suite);
    report(7, "graft triangle inequality", &mut |s| criterion_7(s), &mut suite);
    report(8, "annihilator recovers the prime", &mut |s| criterion_8(s), &mut suite);
    report(9, "NF inside Sing", &mut |s| criterion_9(s), &mut suite);
    report(10, "negative controls", &mut |s| criterion_10(s), &mut suite);
    println!("acceptance: {} of 10 criteria passed in {:.1?}", 10 - failed, t0.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
