//! Example families and seeded random modules.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cert::ResCert;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::ideal::{Ideal, QuotRing};
use crate::module::{FPModule, ModMap, ShortExact};
use crate::poly::{BaseRing, Monomial, Poly};

pub const MAX_N: u32 = 8;
pub const MAX_F_DEGREE: i64 = 3;
pub const MAX_GENS: usize = 4;
pub const MAX_RELATIONS: usize = 6;
pub const MAX_ENTRY_DEGREE: i64 = 3;

/// `k[vars]/(rels)` with the given weights.
pub fn ring(vars: &[&str], weights: &[u32], field: Field, rels: &[&str]) -> Result<Arc<QuotRing>> {
    let base = BaseRing::new(vars.iter().map(|v| v.to_string()).collect(), weights.to_vec(), field)?;
    let rels = rels.iter().map(|r| base.parse_homogeneous(r)).collect::<Result<Vec<_>>>()?;
    QuotRing::new(base, rels)
}

/// The four rings of the random corpus.
pub fn standard_rings() -> Vec<Arc<QuotRing>> {
    vec![
        ring(&["x", "y"], &[1, 1], Field::Rational, &["x^2"]).unwrap(),
        ring(&["x", "y", "z"], &[1, 1, 1], Field::Rational, &["x^2"]).unwrap(),
        ring(&["x", "y"], &[1, 1], Field::Rational, &["x*y"]).unwrap(),
        ring(&["x", "y"], &[1, 1], Field::Prime(5), &["x^2"]).unwrap(),
    ]
}

/// `xR`, generated in degree 1.
pub fn x_module(ring: &Arc<QuotRing>) -> FPModule {
    let x = ring.base().var(0);
    FPModule::cyclic(&Ideal::new(ring, vec![x]).unwrap(), 1)
}

/// An ideal as a module on exactly the given generators.
pub fn ideal_module(ring: &Arc<QuotRing>, gens: Vec<Poly>) -> Result<FPModule> {
    Ok(FPModule::from_ideal(&Ideal::new(ring, gens)?))
}

/// A module with a certificate of membership in `res^1(xR)`.
#[derive(Clone, Debug)]
pub struct Example {
    pub ring: Arc<QuotRing>,
    pub base: FPModule,
    pub module: FPModule,
    pub cert: ResCert,
}

fn x_base(module: &FPModule, x_shifts: Vec<i64>, free_degrees: Vec<i64>) -> ResCert {
    let id: Vec<Vec<Poly>> = (0..module.ngens()).map(|k| module.unit_vector(k)).collect();
    ResCert::Base { module: module.clone(), x_shifts, free_degrees, section: id.clone(), retraction: id }
}

/// `I_n = (x, y^n)` over `Q[x,y]/(x^2)` with `0 -> xR -> I_n -> xR -> 0`.
pub fn i_n(n: u32) -> Result<Example> {
    if n == 0 || n > MAX_N {
        return Err(Error::OutOfRange(format!("n = {n} outside 1..={MAX_N}")));
    }
    let r = ring(&["x", "y"], &[1, 1], Field::Rational, &["x^2"])?;
    let b = r.base();
    let x = b.var(0);
    let yn = b.pow(&b.var(1), n);
    let module = ideal_module(&r, vec![x.clone(), yn])?;
    let xr = x_module(&r);
    let left = xr.clone();
    let right = xr.twist(1 - n as i64);
    let inclusion = ModMap::new(left.clone(), module.clone(), vec![module.unit_vector(0)])?;
    let projection = ModMap::new(module.clone(), right.clone(), vec![right.zero_vector(), right.unit_vector(0)])?;
    let seq = ShortExact { inclusion, projection };
    let cert = ResCert::Ext {
        module: module.clone(),
        seq,
        left: Box::new(x_base(&left, vec![0], vec![])),
        right: Box::new(x_base(&right, vec![1 - n as i64], vec![])),
    };
    Ok(Example { ring: r, base: xr, module, cert })
}

/// Homogenized `f` for the `p(f)` family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PfChoice {
    One,
    Z,
    Z2,
    OnePlusZ,
}

impl PfChoice {
    pub const ALL: [PfChoice; 4] = [PfChoice::One, PfChoice::Z, PfChoice::Z2, PfChoice::OnePlusZ];

    pub fn parse(s: &str) -> Result<PfChoice> {
        match s.replace(' ', "").as_str() {
            "1" => Ok(PfChoice::One),
            "z" => Ok(PfChoice::Z),
            "z^2" => Ok(PfChoice::Z2),
            "1+z" => Ok(PfChoice::OnePlusZ),
            other => Err(Error::OutOfRange(format!("f = {other} is not one of 1, z, z^2, 1+z"))),
        }
    }
}

/// `p(f) = (x, y - z f)` with `y` of weight `deg f + 1`; `1 + z` becomes `w + z`.
pub fn p_f(f: PfChoice) -> Result<Example> {
    let (vars, weights, fh): (&[&str], &[u32], &str) = match f {
        PfChoice::One => (&["x", "y", "z"], &[1, 1, 1], "1"),
        PfChoice::Z => (&["x", "y", "z"], &[1, 2, 1], "z"),
        PfChoice::Z2 => (&["x", "y", "z"], &[1, 3, 1], "z^2"),
        PfChoice::OnePlusZ => (&["x", "y", "z", "w"], &[1, 2, 1, 1], "w + z"),
    };
    let r = ring(vars, weights, Field::Rational, &["x^2"])?;
    let b = r.base();
    let g = b.sub(&b.var(1), &b.mul(&b.var(2), &b.parse_poly(fh)?));
    let dg = b.degree(&g).ok_or_else(|| Error::Inhomogeneous(b.format(&g)))?;
    let x = b.var(0);
    let module = ideal_module(&r, vec![x.clone(), g.clone()])?;
    let xr = x_module(&r);
    let middle = FPModule::direct_sum(&[xr.twist(1 - dg), FPModule::free(&r, vec![0])])?;
    let right = xr.twist(1);
    // x -> (0, x), g -> (-1, g)
    let inclusion = ModMap::new(
        module.clone(),
        middle.clone(),
        vec![vec![b.zero(), x.clone()], vec![b.neg(&b.one()), g.clone()]],
    )?;
    let projection = ModMap::new(middle.clone(), right.clone(), vec![vec![g.clone()], vec![b.one()]])?;
    let seq = ShortExact { inclusion, projection };
    let cert = ResCert::Ker {
        module: module.clone(),
        seq,
        middle: Box::new(x_base(&middle, vec![1 - dg], vec![0])),
        right: Box::new(x_base(&right, vec![1], vec![])),
    };
    Ok(Example { ring: r, base: xr, module, cert })
}

/// Monomials of weighted degree `d`.
pub fn monomials_of_degree(base: &BaseRing, d: i64) -> Vec<Monomial> {
    fn go(w: &[u32], i: usize, left: i64, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == w.len() {
            if left == 0 {
                out.push(Monomial(cur.iter().copied().collect()));
            }
            return;
        }
        let mut e = 0;
        while e as i64 * w[i] as i64 <= left {
            cur.push(e);
            go(w, i + 1, left - e as i64 * w[i] as i64, cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    if d >= 0 {
        go(base.weights(), 0, d, &mut Vec::new(), &mut out);
    }
    out.sort_by(|a, b| base.cmp_mono(b, a));
    out
}

/// Bounds for random presentations.
#[derive(Clone, Copy, Debug)]
pub struct RandomShape {
    pub max_gens: usize,
    pub max_relations: usize,
    pub max_degree: i64,
}

impl Default for RandomShape {
    fn default() -> RandomShape {
        RandomShape { max_gens: 3, max_relations: 4, max_degree: 2 }
    }
}

fn random_poly(ring: &QuotRing, rng: &mut ChaCha8Rng, d: i64) -> Poly {
    let base = ring.base();
    let monos = monomials_of_degree(base, d);
    if monos.is_empty() {
        return base.zero();
    }
    let field = base.field();
    let nterms = rng.gen_range(1..=2.min(monos.len()));
    let mut f = base.zero();
    for _ in 0..nterms {
        let m = monos[rng.gen_range(0..monos.len())].clone();
        let c = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
        f = base.add(&f, &base.monomial(m, field.from_i64(c)));
    }
    ring.reduce(&f)
}

/// One random graded module; entries are zero or of degree `1..=max_degree`.
pub fn random_module(ring: &Arc<QuotRing>, rng: &mut ChaCha8Rng, shape: RandomShape) -> Result<FPModule> {
    if shape.max_gens == 0 || shape.max_relations == 0 || shape.max_gens > MAX_GENS || shape.max_relations > MAX_RELATIONS || shape.max_degree > MAX_ENTRY_DEGREE || shape.max_degree < 1 {
        return Err(Error::OutOfRange(format!("{shape:?} exceeds {MAX_GENS}x{MAX_RELATIONS}, degree {MAX_ENTRY_DEGREE}")));
    }
    let base = ring.base();
    loop {
        let g = rng.gen_range(1..=shape.max_gens);
        let m = rng.gen_range(1..=shape.max_relations);
        let gen_degrees: Vec<i64> = (0..g).map(|_| rng.gen_range(0..=1)).collect();
        let top = gen_degrees.iter().max().copied().unwrap_or(0);
        let mut cols = Vec::new();
        for _ in 0..m {
            let d = top + rng.gen_range(1..=shape.max_degree);
            let col: Vec<Poly> = gen_degrees
                .iter()
                .map(|&gd| {
                    let e = d - gd;
                    if e < 1 || e > shape.max_degree || rng.gen_bool(0.4) {
                        base.zero()
                    } else {
                        random_poly(ring, rng, e)
                    }
                })
                .collect();
            cols.push(col);
        }
        let module = FPModule::new(ring, gen_degrees, cols)?;
        if !module.relations().is_empty() {
            return Ok(module);
        }
    }
}

/// `count` random modules over `ring` from `seed`.
pub fn random_modules(ring: &Arc<QuotRing>, seed: u64, count: usize, shape: RandomShape) -> Result<Vec<FPModule>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_module(ring, &mut rng, shape)).collect()
}

/// Named families: `In` with `n`, `pf` with `f`, `random` with seed and count.
#[derive(Clone, Debug)]
pub enum Family {
    In(u32),
    Pf(PfChoice),
    Random { seed: u64, count: usize },
}

/// `(ring, module)` pairs for a family; random modules cycle through the standard rings.
pub fn example_corpus(family: &Family) -> Result<Vec<(Arc<QuotRing>, FPModule)>> {
    match family {
        Family::In(n) => {
            let e = i_n(*n)?;
            Ok(vec![(e.ring, e.module)])
        }
        Family::Pf(f) => {
            let e = p_f(*f)?;
            Ok(vec![(e.ring, e.module)])
        }
        Family::Random { seed, count } => {
            let rings = standard_rings();
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..*count)
                .map(|k| {
                    let r = rings[k % rings.len()].clone();
                    random_module(&r, &mut rng, RandomShape::default()).map(|m| (r, m))
                })
                .collect()
        }
    }
}
