//! Session files: one ring, then named modules, primes and closed sets.
//!
//! ```text
//! ring R = Q[x,y]/(x^2) char 0 weights 1 1;
//! module X = coker [[x]];
//! module I = ideal (x, y^2);
//! prime p = (x, y);
//! closed W = V(x) ∪ V(y);
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use nonfree_core::error::Error;
use nonfree_core::field::Field;
use nonfree_core::ideal::{Ideal, QuotRing};
use nonfree_core::loci::ClosedSubset;
use nonfree_core::module::FPModule;
use nonfree_core::poly::{BaseRing, Poly};
use nonfree_core::primes::minimal_primes;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for SessionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for SessionError {}

#[derive(Clone, Debug)]
pub struct Session {
    pub ring_name: String,
    pub ring: Arc<QuotRing>,
    pub modules: BTreeMap<String, FPModule>,
    pub primes: BTreeMap<String, Ideal>,
    pub closed: BTreeMap<String, ClosedSubset>,
}

struct Src<'a> {
    text: &'a str,
}

impl Src<'_> {
    fn err(&self, offset: usize, message: impl Into<String>) -> SessionError {
        let before = &self.text[..offset.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        SessionError { line, column, message: message.into() }
    }

    fn core_err(&self, offset: usize, e: Error) -> SessionError {
        match e {
            Error::Parse { offset: o, message } => self.err(offset + o, message),
            other => self.err(offset, other.to_string()),
        }
    }
}

/// A slice of the input with its absolute offset.
#[derive(Clone, Copy, Debug)]
struct Piece<'a> {
    text: &'a str,
    at: usize,
}

impl<'a> Piece<'a> {
    fn trim(self) -> Piece<'a> {
        let start = self.text.len() - self.text.trim_start().len();
        Piece { text: self.text.trim(), at: self.at + start }
    }

    fn skip(self, n: usize) -> Piece<'a> {
        Piece { text: &self.text[n..], at: self.at + n }
    }

    fn take(self, n: usize) -> Piece<'a> {
        Piece { text: &self.text[..n], at: self.at }
    }

    /// Leading identifier and the rest.
    fn word(self) -> (Piece<'a>, Piece<'a>) {
        let t = self.trim();
        let n = t.text.find(|c: char| !(c.is_alphanumeric() || c == '_')).unwrap_or(t.text.len());
        (t.take(n), t.skip(n).trim())
    }

    fn strip(self, prefix: &str) -> Option<Piece<'a>> {
        let t = self.trim();
        t.text.starts_with(prefix).then(|| t.skip(prefix.len()).trim())
    }
}

fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|l| {
            let cut = [l.find('#'), l.find("//")].into_iter().flatten().min().unwrap_or(l.len());
            format!("{}{}", &l[..cut], " ".repeat(l.len() - cut))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Split on `sep` outside brackets and parentheses.
fn split_top(p: Piece<'_>, sep: char) -> Vec<Piece<'_>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in p.text.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(Piece { text: &p.text[start..i], at: p.at + start });
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(Piece { text: &p.text[start..], at: p.at + start });
    out
}

/// The contents of a bracketed group starting at the first character, and the rest.
fn group<'a>(src: &Src<'_>, p: Piece<'a>, open: char, close: char) -> Result<(Piece<'a>, Piece<'a>), SessionError> {
    let p = p.trim();
    if !p.text.starts_with(open) {
        return Err(src.err(p.at, format!("expected `{open}`")));
    }
    let mut depth = 0;
    for (i, c) in p.text.char_indices() {
        if c == open {
            depth += 1;
        } else if c == close {
            depth -= 1;
            if depth == 0 {
                return Ok((Piece { text: &p.text[1..i], at: p.at + 1 }, p.skip(i + 1).trim()));
            }
        }
    }
    Err(src.err(p.at, format!("unclosed `{open}`")))
}

fn parse_polys(src: &Src<'_>, base: &BaseRing, p: Piece<'_>) -> Result<Vec<Poly>, SessionError> {
    if p.trim().text.is_empty() {
        return Ok(Vec::new());
    }
    split_top(p, ',').into_iter().map(|e| parse_homogeneous(src, base, e)).collect()
}

fn parse_homogeneous(src: &Src<'_>, base: &BaseRing, p: Piece<'_>) -> Result<Poly, SessionError> {
    let e = p.trim();
    let f = base.parse_poly(e.text).map_err(|err| src.core_err(e.at, err))?;
    if !base.is_homogeneous(&f) {
        return Err(src.err(e.at, format!("`{}` is not homogeneous", e.text)));
    }
    Ok(f)
}

fn parse_ints<T: std::str::FromStr>(src: &Src<'_>, p: Piece<'_>) -> Result<Vec<T>, SessionError> {
    let mut out = Vec::new();
    let t = p.trim();
    let mut off = 0;
    for w in t.text.split_whitespace() {
        let pos = t.text[off..].find(w).unwrap() + off;
        off = pos + w.len();
        match w.parse::<T>() {
            Ok(v) => out.push(v),
            Err(_) => return Err(src.err(t.at + pos, format!("expected an integer, found `{w}`"))),
        }
    }
    Ok(out)
}

fn parse_field(src: &Src<'_>, p: Piece<'_>) -> Result<Field, SessionError> {
    let t = p.trim();
    let s = t.text;
    let prime = s
        .strip_prefix("GF(")
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| s.strip_prefix("F_"))
        .or_else(|| s.strip_prefix("ZZ/"));
    match (s, prime) {
        ("Q" | "QQ" | "k", _) => Ok(Field::Rational),
        (_, Some(n)) => {
            let n: u64 = n.trim().parse().map_err(|_| src.err(t.at, format!("bad characteristic in `{s}`")))?;
            Field::from_characteristic(n).map_err(|e| src.err(t.at, e.to_string()))
        }
        _ => Err(src.err(t.at, format!("unknown field `{s}`; use Q, k, GF(p), F_p or ZZ/p"))),
    }
}

fn parse_ring(src: &Src<'_>, rest: Piece<'_>) -> Result<(String, Arc<QuotRing>), SessionError> {
    let (name, rest) = rest.word();
    let rest = rest.strip("=").ok_or_else(|| src.err(rest.at, "expected `=`"))?;
    let open = rest.text.find('[').ok_or_else(|| src.err(rest.at, "expected `[variables]`"))?;
    let mut field = parse_field(src, rest.take(open))?;
    let (vars, mut rest) = group(src, rest.skip(open), '[', ']')?;
    let vars: Vec<Piece<'_>> = split_top(vars, ',').into_iter().map(|v| v.trim()).filter(|v| !v.text.is_empty()).collect();
    let mut defining = None;
    if let Some(r) = rest.strip("/") {
        let (g, r) = group(src, r, '(', ')')?;
        defining = Some(g);
        rest = r;
    }
    let mut weights = None;
    loop {
        let (kw, r) = rest.word();
        match kw.text {
            "" if r.text.is_empty() => break,
            "char" => {
                let (c, r2) = r.word();
                let n: u64 = c.text.parse().map_err(|_| src.err(c.at, "expected a characteristic"))?;
                field = Field::from_characteristic(n).map_err(|e| src.err(c.at, e.to_string()))?;
                rest = r2;
            }
            "weights" => {
                let w = parse_ints::<u32>(src, r)?;
                weights = Some((w, r.at));
                break;
            }
            _ => return Err(src.err(kw.at, format!("unexpected `{}`", r.text.split_whitespace().next().unwrap_or(kw.text)))),
        }
    }
    let names: Vec<String> = vars.iter().map(|v| v.text.to_string()).collect();
    let w = match weights {
        Some((w, at)) if w.len() != names.len() => {
            return Err(src.err(at, format!("{} weights for {} variables", w.len(), names.len())))
        }
        Some((w, _)) => w,
        None => vec![1; names.len()],
    };
    let at = vars.first().map_or(rest.at, |v| v.at);
    let base = BaseRing::new(names, w, field).map_err(|e| src.err(at, e.to_string()))?;
    let gens = match defining {
        Some(g) => parse_polys(src, &base, g)?,
        None => Vec::new(),
    };
    let ring = QuotRing::new(base, gens).map_err(|e| src.err(name.at, e.to_string()))?;
    Ok((name.text.to_string(), ring))
}

fn parse_matrix(src: &Src<'_>, base: &BaseRing, p: Piece<'_>) -> Result<Vec<Vec<Poly>>, SessionError> {
    let (inner, rest) = group(src, p, '[', ']')?;
    if !rest.text.is_empty() && !rest.text.starts_with("degrees") {
        return Err(src.err(rest.at, "unexpected input after matrix"));
    }
    let mut rows = Vec::new();
    if !inner.trim().text.is_empty() {
        for r in split_top(inner, ',') {
            let (row, tail) = group(src, r, '[', ']')?;
            if !tail.text.is_empty() {
                return Err(src.err(tail.at, "expected `,` between rows"));
            }
            rows.push((parse_polys(src, base, row)?, r.at));
        }
    }
    let ncols = rows.first().map_or(0, |r| r.0.len());
    if let Some((_, at)) = rows.iter().find(|r| r.0.len() != ncols) {
        return Err(src.err(*at, "rows have different lengths"));
    }
    let cols = (0..ncols).map(|j| rows.iter().map(|r| r.0[j].clone()).collect()).collect();
    Ok(cols)
}

fn parse_module(src: &Src<'_>, ring: &Arc<QuotRing>, p: Piece<'_>) -> Result<FPModule, SessionError> {
    let (kind, rest) = p.word();
    match kind.text {
        "coker" => {
            let cols = parse_matrix(src, ring.base(), rest)?;
            let (_, tail) = group(src, rest, '[', ']')?;
            let ngens = match tail.strip("degrees") {
                Some(d) => {
                    let degs = parse_ints::<i64>(src, d)?;
                    return FPModule::new(ring, degs, cols).map_err(|e| src.err(d.at, e.to_string()));
                }
                None => cols.first().map_or(1, |c: &Vec<Poly>| c.len()),
            };
            FPModule::infer(ring, ngens, cols).map_err(|e| src.err(rest.at, e.to_string()))
        }
        "ideal" => {
            let (g, tail) = group(src, rest, '(', ')')?;
            if !tail.text.is_empty() {
                return Err(src.err(tail.at, "unexpected input after ideal"));
            }
            let ideal = Ideal::new(ring, parse_polys(src, ring.base(), g)?).map_err(|e| src.err(g.at, e.to_string()))?;
            Ok(FPModule::from_ideal(&ideal))
        }
        other => Err(src.err(kind.at, format!("expected `coker` or `ideal`, found `{other}`"))),
    }
}

fn parse_prime_piece(src: &Src<'_>, ring: &Arc<QuotRing>, p: Piece<'_>) -> Result<Ideal, SessionError> {
    let (g, tail) = group(src, p, '(', ')')?;
    if !tail.text.is_empty() {
        return Err(src.err(tail.at, "unexpected input after prime"));
    }
    let ideal = Ideal::new(ring, parse_polys(src, ring.base(), g)?).map_err(|e| src.err(g.at, e.to_string()))?;
    let mp = minimal_primes(&ideal).map_err(|e| src.err(p.at, e.to_string()))?;
    if ideal.is_unit() || mp.primes.len() != 1 || !mp.primes[0].same_as(&ideal) {
        return Err(src.err(p.at, format!("{} is not a prime ideal", ideal)));
    }
    Ok(ideal)
}

fn parse_closed_piece(src: &Src<'_>, ring: &Arc<QuotRing>, p: Piece<'_>) -> Result<ClosedSubset, SessionError> {
    let t = p.trim();
    if matches!(t.text, "empty" | "∅") {
        return Ok(ClosedSubset::empty(ring));
    }
    let mut total = ClosedSubset::empty(ring);
    for part in split_union(t) {
        let part = part.trim();
        let inner = part.strip("V").ok_or_else(|| src.err(part.at, "expected `V(...)`"))?;
        let (g, tail) = group(src, inner, '(', ')')?;
        if !tail.text.is_empty() {
            return Err(src.err(tail.at, "expected `∪` between components"));
        }
        let ideal = Ideal::new(ring, parse_polys(src, ring.base(), g)?).map_err(|e| src.err(g.at, e.to_string()))?;
        let v = ClosedSubset::of_ideal(&ideal).map_err(|e| src.err(g.at, e.to_string()))?;
        total = total.union(&v).map_err(|e| src.err(g.at, e.to_string()))?;
    }
    Ok(total)
}

fn split_union(p: Piece<'_>) -> Vec<Piece<'_>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in p.text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '∪' | '|' | '+' if depth == 0 => {
                out.push(Piece { text: &p.text[start..i], at: p.at + start });
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(Piece { text: &p.text[start..], at: p.at + start });
    out
}

impl Session {
    pub fn parse(text: &str) -> Result<Session, SessionError> {
        let cleaned = strip_comments(text);
        let src = Src { text: &cleaned };
        let whole = Piece { text: &cleaned, at: 0 };
        let mut ring: Option<(String, Arc<QuotRing>)> = None;
        let mut modules = BTreeMap::new();
        let mut primes = BTreeMap::new();
        let mut closed = BTreeMap::new();
        let mut names: Vec<String> = Vec::new();
        for stmt in split_top(whole, ';') {
            let stmt = stmt.trim();
            if stmt.text.is_empty() {
                continue;
            }
            let (kw, rest) = stmt.word();
            if kw.text == "ring" {
                if ring.is_some() {
                    return Err(src.err(kw.at, "only one ring per session"));
                }
                let (name, r) = parse_ring(&src, rest)?;
                names.push(name.clone());
                ring = Some((name, r));
                continue;
            }
            if !matches!(kw.text, "module" | "prime" | "closed") {
                return Err(src.err(kw.at, format!("unknown statement `{}`", kw.text)));
            }
            let Some((_, r)) = &ring else {
                return Err(src.err(kw.at, "declare the ring first"));
            };
            let (name, rest) = rest.word();
            if name.text.is_empty() {
                return Err(src.err(name.at, "expected a name"));
            }
            if names.iter().any(|n| n == name.text) {
                return Err(src.err(name.at, format!("`{}` is already defined", name.text)));
            }
            let body = rest.strip("=").ok_or_else(|| src.err(rest.at, "expected `=`"))?;
            match kw.text {
                "module" => {
                    modules.insert(name.text.to_string(), parse_module(&src, r, body)?);
                }
                "prime" => {
                    primes.insert(name.text.to_string(), parse_prime_piece(&src, r, body)?);
                }
                _ => {
                    closed.insert(name.text.to_string(), parse_closed_piece(&src, r, body)?);
                }
            }
            names.push(name.text.to_string());
        }
        let (ring_name, ring) = ring.ok_or_else(|| src.err(0, "no ring declared"))?;
        Ok(Session { ring_name, ring, modules, primes, closed })
    }

    pub fn module(&self, name: &str) -> Result<&FPModule, String> {
        self.modules.get(name).ok_or_else(|| format!("unknown module `{name}`"))
    }

    /// A prime by name, or written inline as `(x, y)`.
    pub fn prime(&self, spec: &str) -> Result<Ideal, String> {
        if let Some(p) = self.primes.get(spec) {
            return Ok(p.clone());
        }
        if !spec.trim_start().starts_with('(') {
            return Err(format!("unknown prime `{spec}`"));
        }
        let src = Src { text: spec };
        parse_prime_piece(&src, &self.ring, Piece { text: spec, at: 0 }).map_err(|e| e.to_string())
    }

    /// A closed set by name, or written inline as `V(x) ∪ V(y)`.
    pub fn closed_set(&self, spec: &str) -> Result<ClosedSubset, String> {
        if let Some(c) = self.closed.get(spec) {
            return Ok(c.clone());
        }
        let src = Src { text: spec };
        parse_closed_piece(&src, &self.ring, Piece { text: spec, at: 0 }).map_err(|e| e.to_string())
    }

    /// A homogeneous element of the ring.
    pub fn element(&self, spec: &str) -> Result<Poly, String> {
        let src = Src { text: spec };
        parse_homogeneous(&src, self.ring.base(), Piece { text: spec, at: 0 }).map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_session() {
        let s = Session::parse("ring R = Q[x,y]/(x^2); module X = coker [[x]];").unwrap();
        assert_eq!(s.ring.to_string(), "Q[x,y]/(x^2)");
        assert_eq!(s.module("X").unwrap().ngens(), 1);
    }

    #[test]
    fn matrices_and_degrees() {
        let s = Session::parse(
            "ring R = k[x,y]/(x^2) char 0 weights 1 1;\nmodule Y = coker [[x, y],[0, x]];\nmodule Z = coker [[x]] degrees 2;\nmodule I = ideal (x, y^2);",
        )
        .unwrap();
        assert_eq!(s.module("Y").unwrap().ngens(), 2);
        assert_eq!(s.module("Z").unwrap().gen_degrees(), &[2]);
        assert_eq!(s.module("I").unwrap().ngens(), 2);
    }

    #[test]
    fn weighted_prime() {
        let s = Session::parse("ring R = Q[x,y,z]/(x^2) weights 1 2 1; prime p = (x, y-z^2);").unwrap();
        assert_eq!(s.primes["p"].to_string(), "(x, y - z^2)");
        let e = Session::parse("ring R = Q[x,y,z]/(x^2); prime p = (x, y-z^2);").unwrap_err();
        assert_eq!((e.line, e.column), (1, 40));
    }

    #[test]
    fn closed_sets_and_fields() {
        let s = Session::parse("ring R = GF(5)[x,y]; closed W = V(x) ∪ V(y); closed E = empty;").unwrap();
        assert_eq!(s.closed["W"].format(), "V(x) ∪ V(y)");
        assert!(s.closed["E"].is_empty());
        assert_eq!(s.closed_set("V(x, y)").unwrap().format(), "V(x, y)");
        assert_eq!(s.ring.base().field(), Field::Prime(5));
    }

    #[test]
    fn errors_have_locations() {
        let e = Session::parse("ring R = Q[x,y];\nmodule X = coker [[x, q]];").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains('q'), "{e}");
        let e = Session::parse("ring R = Q[x,y];\nmodule X = coker [[x]];\nmodule X = coker [[y]];").unwrap_err();
        assert_eq!((e.line, e.column), (3, 8));
        assert!(Session::parse("module X = coker [[x]];").is_err());
        assert!(Session::parse("ring R = Q[x,y]; prime p = (x*y);").is_err());
        assert!(Session::parse("ring R = Q[x,y]; frob X;").is_err());
        assert!(Session::parse("ring R = GF(4)[x];").is_err());
        assert!(Session::parse("ring R = Q[x,y] weights 1;").is_err());
    }

    #[test]
    fn comments_are_ignored() {
        let s = Session::parse("# a ring\nring R = Q[x]; // trailing\nmodule M = coker [[x^2]];").unwrap();
        assert_eq!(s.modules.len(), 1);
    }
}
