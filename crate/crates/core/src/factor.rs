//! Polynomial factorization: univariate over F_p and Q, and weighted
//! homogeneous polynomials in at most two variables.
//!
//! Over F_p: squarefree decomposition, distinct-degree and Cantor–Zassenhaus
//! equal-degree splitting. Over Q: factor modulo a prime larger than twice the
//! Mignotte bound, then recombine modular factors by trial division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{as_residue, is_prime_u64, Coef, Field};
use crate::poly::{BaseRing, Monomial, Poly};

// ---------- dense polynomials over Z/p, coefficients low to high ----------

type Fp = Vec<u64>;

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powm(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, b, p);
        }
        b = mulm(b, b, p);
        e >>= 1;
    }
    r
}

fn invm(a: u64, p: u64) -> u64 {
    powm(a, p - 2, p)
}

fn trim(a: &mut Fp) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    let mut r: Fp = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut r);
    r
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + mulm(x, y, p)) % p;
        }
    }
    trim(&mut r);
    r
}

fn fp_divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let mut r = a.clone();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let inv = invm(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = mulm(*r.last().unwrap(), inv, p);
        q[shift] = c;
        for (i, &y) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mulm(c, y, p)) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = invm(l, p);
            a.iter().map(|&c| mulm(c, inv, p)).collect()
        }
    }
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let mut a = a.clone();
    let mut b = b.clone();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let (_, r) = fp_divrem(&a, &b, p);
        a = b;
        b = r;
    }
    fp_monic(&a, p)
}

fn fp_derivative(a: &Fp, p: u64) -> Fp {
    let mut r: Fp = a.iter().enumerate().skip(1).map(|(i, &c)| mulm(c, i as u64 % p, p)).collect();
    trim(&mut r);
    r
}

fn fp_powmod(base: &Fp, mut e: u128, m: &Fp, p: u64) -> Fp {
    let mut r: Fp = vec![1];
    let mut b = fp_divrem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            r = fp_divrem(&fp_mul(&r, &b, p), m, p).1;
        }
        b = fp_divrem(&fp_mul(&b, &b, p), m, p).1;
        e >>= 1;
    }
    r
}

/// Squarefree factorization of a monic polynomial over F_p.
fn fp_squarefree(f: &Fp, p: u64) -> Vec<(Fp, u32)> {
    let mut out = Vec::new();
    if f.len() <= 1 {
        return out;
    }
    let d = fp_derivative(f, p);
    if d.is_empty() {
        // f is a p-th power
        let root: Fp = f.iter().step_by(p as usize).copied().collect();
        for (g, m) in fp_squarefree(&root, p) {
            out.push((g, m * p as u32));
        }
        return out;
    }
    let mut c = fp_gcd(f, &d, p);
    let mut w = fp_divrem(f, &c, p).0;
    let mut i = 1;
    while w.len() > 1 {
        let y = fp_gcd(&w, &c, p);
        let z = fp_divrem(&w, &y, p).0;
        if z.len() > 1 {
            out.push((fp_monic(&z, p), i));
        }
        i += 1;
        w = y;
        c = fp_divrem(&c, &w, p).0;
    }
    if c.len() > 1 {
        let root: Fp = c.iter().step_by(p as usize).copied().collect();
        for (g, m) in fp_squarefree(&root, p) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn fp_ddf(f: &Fp, p: u64) -> Vec<(Fp, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let mut d = 1;
    while f.len() - 1 >= 2 * d {
        h = fp_powmod(&h, p as u128, &f, p);
        let g = fp_gcd(&f, &fp_sub(&h, &x, p), p);
        if g.len() > 1 {
            out.push((g.clone(), d));
            f = fp_divrem(&f, &g, p).0;
            h = fp_divrem(&h, &f, p).1;
        }
        d += 1;
    }
    if f.len() > 1 {
        let deg = f.len() - 1;
        out.push((f, deg));
    }
    out
}

/// Equal-degree splitting of a product of distinct irreducibles of degree `d`.
fn fp_edf(f: &Fp, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.clone()];
    }
    loop {
        let a: Fp = {
            let mut a: Fp = (0..n).map(|_| rng.gen_range(0..p)).collect();
            trim(&mut a);
            a
        };
        if a.len() <= 1 {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = fp_divrem(&fp_mul(&t, &t, p), f, p).1;
                acc = fp_sub(&acc, &fp_sub(&Vec::new(), &t, p), p);
            }
            acc
        } else {
            // a^((p^d - 1)/2) = (a * a^p * ... * a^(p^(d-1)))^((p - 1)/2)
            let mut t = a.clone();
            let mut norm = a.clone();
            for _ in 1..d {
                t = fp_powmod(&t, p as u128, f, p);
                norm = fp_divrem(&fp_mul(&norm, &t, p), f, p).1;
            }
            fp_sub(&fp_powmod(&norm, ((p - 1) / 2) as u128, f, p), &vec![1], p)
        };
        let g = fp_gcd(f, &b, p);
        if g.len() > 1 && g.len() < f.len() {
            let mut out = fp_edf(&g, d, p, rng);
            out.extend(fp_edf(&fp_divrem(f, &g, p).0, d, p, rng));
            return out;
        }
    }
}

/// Monic irreducible factors with multiplicities of a monic polynomial over F_p.
fn fp_factor(f: &Fp, p: u64) -> Vec<(Fp, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    for (g, m) in fp_squarefree(f, p) {
        for (h, d) in fp_ddf(&g, p) {
            for q in fp_edf(&h, d, p, &mut rng) {
                out.push((q, m));
            }
        }
    }
    out.sort();
    out
}

// ---------- univariate over Q ----------

type Qp = Vec<BigRational>;

fn q_trim(a: &mut Qp) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

fn q_divrem(a: &Qp, b: &Qp) -> (Qp, Qp) {
    let mut r = a.clone();
    q_trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lb = b.last().unwrap().clone();
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lb;
        for (i, y) in b.iter().enumerate() {
            r[shift + i] -= &c * y;
        }
        q[shift] = c;
        q_trim(&mut r);
    }
    q_trim(&mut q);
    (q, r)
}

fn q_monic(a: &Qp) -> Qp {
    let l = a.last().unwrap().clone();
    a.iter().map(|c| c / &l).collect()
}

fn q_gcd(a: &Qp, b: &Qp) -> Qp {
    let mut a = a.clone();
    let mut b = b.clone();
    q_trim(&mut a);
    q_trim(&mut b);
    while !b.is_empty() {
        let (_, r) = q_divrem(&a, &b);
        a = b;
        b = r;
    }
    q_monic(&a)
}

fn q_derivative(a: &Qp) -> Qp {
    let mut r: Qp = a.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(i.into())).collect();
    q_trim(&mut r);
    r
}

/// Yun's squarefree decomposition over Q of a monic polynomial.
fn q_squarefree(f: &Qp) -> Vec<(Qp, u32)> {
    let mut out = Vec::new();
    if f.len() <= 1 {
        return out;
    }
    let d = q_derivative(f);
    let mut a = q_gcd(f, &d);
    let mut b = q_divrem(f, &a).0;
    let mut c = q_divrem(&d, &a).0;
    let mut i = 1;
    loop {
        let db = q_derivative(&b);
        let mut dd = c.clone();
        let n = dd.len().max(db.len());
        dd.resize(n, BigRational::zero());
        for (k, v) in db.iter().enumerate() {
            dd[k] -= v;
        }
        q_trim(&mut dd);
        if b.len() <= 1 {
            break;
        }
        a = if dd.is_empty() { q_monic(&b) } else { q_gcd(&b, &dd) };
        if a.len() > 1 {
            out.push((a.clone(), i));
        }
        b = q_divrem(&b, &a).0;
        c = if dd.is_empty() { Vec::new() } else { q_divrem(&dd, &a).0 };
        i += 1;
    }
    out
}

/// Primitive integer polynomial with positive leading coefficient.
fn primitive_integer(a: &Qp) -> Vec<BigInt> {
    let l = a.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = a.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
    ints.into_iter().map(|c| c / &g * &sign).collect()
}

fn to_q(a: &[BigInt]) -> Qp {
    a.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

/// Irreducible factors over Q of a squarefree polynomial.
fn q_factor_squarefree(f: &Qp) -> Result<Vec<Qp>> {
    let n = f.len() - 1;
    if n <= 1 {
        return Ok(vec![q_monic(f)]);
    }
    let g = primitive_integer(f);
    let lc = g.last().unwrap().clone();
    let maxc = g.iter().map(|c| c.abs()).max().unwrap();
    // 2 * |lc| * 2^n * sqrt(n+1) * max|c|, with sqrt bounded by n+1
    let bound: BigInt = BigInt::from(2) * lc.abs() * (BigInt::one() << n) * BigInt::from(n + 1) * maxc;
    let start = match bound.to_u64() {
        Some(b) if b < (1u64 << 62) => b + 1,
        _ => return Err(Error::Factorization(format!("coefficient bound too large for degree {n}"))),
    };
    let mut p = start | 1;
    let mut tries = 0;
    let modp = |c: &BigInt, p: u64| c.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    let fp: Fp = loop {
        if is_prime_u64(p) && modp(&lc, p) != 0 {
            let fp: Fp = g.iter().map(|c| modp(c, p)).collect();
            let d = fp_derivative(&fp, p);
            if fp_gcd(&fp, &d, p).len() == 1 {
                break fp_monic(&fp, p);
            }
        }
        p += 2;
        tries += 1;
        if tries > 100_000 || p >= (1u64 << 62) {
            return Err(Error::Factorization("no suitable prime found".into()));
        }
    };
    let mut modular: Vec<Fp> = fp_factor(&fp, p).into_iter().map(|(h, _)| h).collect();
    let mut remaining = g.clone();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= modular.len() {
        let mut hit = false;
        for subset in combinations(modular.len(), size) {
            let rlc = remaining.last().unwrap().clone();
            let mut cand: Fp = vec![modp(&rlc, p)];
            for &k in &subset {
                cand = fp_mul(&cand, &modular[k], p);
            }
            let half = p / 2;
            let lifted: Vec<BigInt> =
                cand.iter().map(|&c| if c > half { BigInt::from(c) - BigInt::from(p) } else { BigInt::from(c) }).collect();
            let cand_q = to_q(&primitive_integer(&to_q(&lifted)));
            let (quo, rem) = q_divrem(&to_q(&remaining), &cand_q);
            if rem.is_empty() && quo.iter().all(|c| c.is_integer()) {
                found.push(q_monic(&cand_q));
                remaining = primitive_integer(&quo);
                modular = modular.into_iter().enumerate().filter(|(k, _)| !subset.contains(k)).map(|(_, h)| h).collect();
                hit = true;
                break;
            }
        }
        if !hit {
            size += 1;
        }
    }
    if remaining.len() > 1 {
        found.push(q_monic(&to_q(&remaining)));
    }
    Ok(found)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Monic irreducible factors (with multiplicity) of a nonzero univariate
/// polynomial given low-to-high. Constants yield no factors.
pub fn factor_univariate(field: Field, coeffs: &[Coef]) -> Result<Vec<(Vec<Coef>, u32)>> {
    let mut f: Qp = coeffs.to_vec();
    q_trim(&mut f);
    if f.is_empty() {
        return Err(Error::ZeroElement("factorization of zero".into()));
    }
    match field {
        Field::Prime(p) => {
            let p = p as u64;
            let fp: Fp = f.iter().map(as_residue).collect();
            let monic = fp_monic(&fp, p);
            Ok(fp_factor(&monic, p)
                .into_iter()
                .map(|(h, m)| (h.into_iter().map(|c| BigRational::from_integer(c.into())).collect(), m))
                .collect())
        }
        Field::Rational => {
            let mut out = Vec::new();
            for (g, m) in q_squarefree(&q_monic(&f)) {
                for h in q_factor_squarefree(&g)? {
                    out.push((h, m));
                }
            }
            out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
            Ok(out)
        }
    }
}

/// Irreducible factors of a nonzero homogeneous polynomial whose support
/// involves at most two variables. Constants give an empty list; the unit
/// part is dropped and factors are monic.
pub fn factor_homogeneous(ring: &BaseRing, f: &Poly) -> Result<Vec<(Poly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroElement("factorization of zero".into()));
    }
    if !ring.is_homogeneous(f) {
        return Err(Error::Inhomogeneous(ring.format(f)));
    }
    let vars = f.variables();
    if vars.len() > 2 {
        return Err(Error::Factorization(format!("{} involves more than two variables", ring.format(f))));
    }
    let n = ring.nvars();
    let mut out = Vec::new();
    let content = f.monomial_content().unwrap();
    for v in content.support() {
        out.push((ring.var(v), content.0[v]));
    }
    let field = ring.field();
    let one = field.one();
    let g = ring.from_terms(
        f.terms().iter().map(|(m, c)| (content.quotient_of(m), c.clone())).collect(),
    );
    if g.is_constant() {
        out.sort_by(|a, b| ring.cmp_mono(b.0.lead_monomial().unwrap(), a.0.lead_monomial().unwrap()));
        return Ok(out);
    }
    let gv = g.variables();
    // after removing content a single-variable polynomial is constant
    let (x, y) = (gv[0], gv[1]);
    let w = ring.weights();
    let gcd = (w[x] as u64).gcd(&(w[y] as u64));
    let (ax, by) = ((w[y] as u64 / gcd) as u32, (w[x] as u64 / gcd) as u32);
    // g = G(u) homogenized with u = x^ax / y^by
    let deg_u = g.max_exponent(x) / ax;
    let mut coeffs = vec![BigRational::zero(); deg_u as usize + 1];
    for (m, c) in g.terms() {
        coeffs[(m.0[x] / ax) as usize] = c.clone();
    }
    for (h, mult) in factor_univariate(field, &coeffs)? {
        let d = (h.len() - 1) as u32;
        let terms = h
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let mut m = Monomial::one(n);
                m.0[x] = i as u32 * ax;
                m.0[y] = (d - i as u32) * by;
                (m, c.clone())
            })
            .collect();
        let hp = ring.from_terms(terms);
        out.push((ring.scale(&hp, &one), mult));
    }
    out.sort_by(|a, b| ring.cmp_mono(b.0.lead_monomial().unwrap(), a.0.lead_monomial().unwrap()));
    Ok(out)
}
