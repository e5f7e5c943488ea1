//! Dense evaluation of operator programs on Hom(m, k) for deciding whether an
//! operator has all its coefficients in ℤ[δ]_𝔪.
//!
//! Diagrams are indexed by the rank of their Dyck word (boundary read bottom
//! left to right, then top right to left). Coefficients are numerators taken
//! modulo a prime P < 2^30, expanded as truncated power series at one root of
//! each ψ_j ∈ 𝔪 dividing the common denominator. A numerator N over E = ∏ψ^e
//! is local exactly when ψ_j^{e_j} | N for each such j, i.e. when every block
//! vanishes. Reducing modulo P makes the test one-sided: a nonzero block
//! proves non-locality, an all-zero vector is correct with high probability.

use super::{Den, LinearOp, Program, Step};
use crate::diagram::{compose_diagrams, Diagram, Pairing};
use crate::error::{Error, Result};
use crate::qnum;
use crate::ring::modpoly as mp;
use crate::ring::{root_of_unity, IntPoly, MixedChar};
use std::collections::HashMap;

/// Noncrossing matchings of m+k boundary points, ranked as Dyck words.
struct Space {
    m: usize,
    k: usize,
    total: usize,
    size: usize,
    /// ways[i·(total+2) + h]: completions from position i at height h.
    ways: Vec<u64>,
}

impl Space {
    fn new(m: usize, k: usize) -> Space {
        let total = m + k;
        let w = total + 2;
        let mut ways = vec![0u64; (total + 1) * w];
        ways[total * w] = 1;
        for i in (0..total).rev() {
            for h in 0..=total {
                let up = if h < total { ways[(i + 1) * w + h + 1] } else { 0 };
                let down = if h > 0 { ways[(i + 1) * w + h - 1] } else { 0 };
                ways[i * w + h] = up + down;
            }
        }
        let size = ways[0] as usize;
        Space { m, k, total, size, ways }
    }

    fn ways(&self, i: usize, h: usize) -> u64 {
        self.ways[i * (self.total + 2) + h]
    }

    /// Circle partners of the diagram with rank r.
    fn unrank(&self, mut r: u64, pc: &mut [u8], stack: &mut Vec<u8>) {
        stack.clear();
        let mut h = 0;
        for c in 0..self.total {
            let open = if h < self.total { self.ways(c + 1, h + 1) } else { 0 };
            if r < open {
                stack.push(c as u8);
                h += 1;
            } else {
                r -= open;
                let o = stack.pop().unwrap();
                pc[c] = o;
                pc[o as usize] = c as u8;
                h -= 1;
            }
        }
    }

    fn rank(&self, pc: &[u8]) -> u64 {
        let mut r = 0;
        let mut h = 0;
        for c in 0..self.total {
            if (pc[c] as usize) > c {
                h += 1;
            } else {
                r += self.ways(c + 1, h + 1);
                h -= 1;
            }
        }
        r
    }

    /// The circle position of diagram point i; an involution.
    fn circ(&self, i: usize) -> usize {
        if i < self.m {
            i
        } else {
            self.m + (self.k - 1 - (i - self.m))
        }
    }

    fn to_diagram(&self, pc: &[u8]) -> Diagram {
        let mut pair: Pairing = smallvec::smallvec![0u8; self.total];
        for i in 0..self.total {
            pair[i] = self.circ(pc[self.circ(i)] as usize) as u8;
        }
        Diagram::from_raw(self.m, self.k, pair)
    }

    fn rank_diagram(&self, d: &Diagram, pc: &mut [u8]) -> u64 {
        for i in 0..self.total {
            pc[self.circ(i)] = self.circ(d.partner(i)) as u8;
        }
        self.rank(pc)
    }

    /// next[r] for u_i applied on top; the top bit marks a closed loop.
    fn generator_table(&self, i: usize) -> Vec<u32> {
        let c1 = self.m + self.k - i;
        let c2 = c1 - 1;
        let mut pc = vec![0u8; self.total];
        let mut stack = Vec::new();
        let mut out = Vec::with_capacity(self.size);
        for r in 0..self.size as u64 {
            self.unrank(r, &mut pc, &mut stack);
            if pc[c1] as usize == c2 {
                out.push(r as u32 | LOOP);
                continue;
            }
            let (x, y) = (pc[c1] as usize, pc[c2] as usize);
            pc[x] = y as u8;
            pc[y] = x as u8;
            pc[c1] = c2 as u8;
            pc[c2] = c1 as u8;
            out.push(self.rank(&pc) as u32);
        }
        out
    }
}

const LOOP: u32 = 1 << 31;

/// Barrett reduction modulo P < 2^30.
#[derive(Clone, Copy)]
struct Modp {
    p: u64,
    m: u64,
}

impl Modp {
    fn new(p: u64) -> Self {
        Modp { p, m: u64::MAX / p }
    }

    #[inline]
    fn reduce(self, x: u64) -> u64 {
        let q = ((x as u128 * self.m as u128) >> 64) as u64;
        let r = x - q * self.p;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }
}

/// 𝔽_P[ε]/(ε^e) per block, with δ ↦ root + ε.
struct Blocks {
    md: Modp,
    /// (ψ index, root, offset, precision)
    blocks: Vec<(u64, u64, usize, usize)>,
    len: usize,
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

impl Blocks {
    fn from_poly_block(md: Modp, root: u64, prec: usize, f: &IntPoly, out: &mut [u32]) {
        let p = md.p;
        let mut acc = vec![0u64; prec];
        for c in f.coeffs().iter().rev() {
            for t in (0..prec).rev() {
                let shifted = if t > 0 { acc[t - 1] } else { 0 };
                acc[t] = md.reduce(acc[t] * root + shifted);
            }
            acc[0] = md.reduce(acc[0] + c.rem_u64(p));
        }
        for (o, a) in out.iter_mut().zip(acc) {
            *o = a as u32;
        }
    }

    /// Blocks for ψ_k^e, (k, e) in `exps`, over a prime P ≡ 1 mod lcm(k) with
    /// each chosen root simple.
    fn new(exps: &[(u64, u32)]) -> Result<Blocks> {
        let l = exps.iter().fold(1u64, |a, &(k, _)| lcm(a, k));
        let mut t = ((1u64 << 30) - 1) / l;
        'search: while t > 0 {
            let p = l * t + 1;
            t -= 1;
            if !mp::is_prime(p) {
                continue;
            }
            let md = Modp::new(p);
            let mut blocks = Vec::new();
            let mut off = 0;
            for &(k, e) in exps {
                let z = root_of_unity(k, p);
                let root = (z + mp::invmod(z, p).unwrap()) % p;
                let mut v = [0u32; 2];
                Blocks::from_poly_block(md, root, 2, &qnum::psi(k), &mut v);
                if v[0] != 0 {
                    return Err(Error::Unsupported(format!("ψ{k} has no root at the chosen point")));
                }
                if v[1] == 0 {
                    continue 'search;
                }
                if e as usize > 15 {
                    return Err(Error::ScaleLimit(format!("ψ{k}^{e} needs too much precision")));
                }
                blocks.push((k, root, off, e as usize));
                off += e as usize;
            }
            return Ok(Blocks { md, blocks, len: off });
        }
        Err(Error::Unsupported("no suitable prime below 2^30".into()))
    }

    fn from_poly(&self, f: &IntPoly) -> Vec<u32> {
        let mut out = vec![0u32; self.len];
        for &(_, root, off, prec) in &self.blocks {
            Blocks::from_poly_block(self.md, root, prec, f, &mut out[off..off + prec]);
        }
        out
    }

    fn neg(&self, a: &[u32]) -> Vec<u32> {
        a.iter().map(|&x| if x == 0 { 0 } else { (self.md.p - x as u64) as u32 }).collect()
    }

    /// out += c·s.
    #[inline]
    fn mul_acc(&self, out: &mut [u32], c: &[u32], s: &[u32]) {
        let md = self.md;
        for &(_, _, off, prec) in &self.blocks {
            let (o, c, s) = (&mut out[off..off + prec], &c[off..off + prec], &s[off..off + prec]);
            for t in 0..prec {
                let mut acc = o[t] as u64;
                for i in 0..=t {
                    acc += c[i] as u64 * s[t - i] as u64;
                }
                o[t] = md.reduce(acc) as u32;
            }
        }
    }
}

/// Whether an operator has coefficients in ℤ[δ]_𝔪.
#[derive(Clone, Debug)]
pub struct LocalityReport {
    pub source: usize,
    pub target: usize,
    pub den: Den,
    /// The factors ψ_j^{e_j} of the denominator lying in 𝔪.
    pub bad: Vec<(u64, u32)>,
    pub prime: u64,
    /// Diagrams with a nonzero numerator modulo P.
    pub support: usize,
    pub offending: Option<Diagram>,
}

impl LocalityReport {
    pub fn is_local(&self) -> bool {
        self.offending.is_none()
    }
}

struct Engine<'a> {
    b: &'a Blocks,
    spaces: HashMap<(usize, usize), Space>,
    tables: HashMap<(usize, usize, usize), Vec<u32>>,
    /// scal[a][l] = [a]δ^l and its negative.
    scal: Vec<Vec<(Vec<u32>, Vec<u32>)>>,
}

impl<'a> Engine<'a> {
    fn new(b: &'a Blocks, kmax: usize) -> Self {
        let mut scal = Vec::new();
        for a in 0..=kmax + 1 {
            let q = qnum::quantum(a as i64);
            let mut row = Vec::new();
            for l in 0..=kmax + 1 {
                let v = b.from_poly(&q.mul(&IntPoly::delta().pow(l as u32)));
                let n = b.neg(&v);
                row.push((v, n));
            }
            scal.push(row);
        }
        Engine { b, spaces: HashMap::new(), tables: HashMap::new(), scal }
    }

    fn space(&mut self, m: usize, k: usize) -> &Space {
        self.spaces.entry((m, k)).or_insert_with(|| Space::new(m, k))
    }

    fn ensure_table(&mut self, m: usize, k: usize, i: usize) {
        if !self.tables.contains_key(&(m, k, i)) {
            let t = self.space(m, k).generator_table(i);
            self.tables.insert((m, k, i), t);
        }
    }

    fn clasp(&mut self, m: usize, k: usize, size: usize, offset: usize, x: Vec<u32>) -> Vec<u32> {
        let l = self.b.len;
        for g in offset + 1..offset + size {
            self.ensure_table(m, k, g);
        }
        let tabs: Vec<&Vec<u32>> = (0..=offset + size).map(|g| self.tables.get(&(m, k, g)).unwrap_or(&EMPTY)).collect();
        let b = self.b;
        let mut cur = x;
        let mut out = vec![0u32; cur.len()];
        for j in 1..size {
            out.iter_mut().for_each(|v| *v = 0);
            for r in 0..cur.len() / l {
                let c = &cur[r * l..(r + 1) * l];
                if c.iter().all(|&v| v == 0) {
                    continue;
                }
                b.mul_acc(&mut out[r * l..(r + 1) * l], c, &self.scal[j + 1][0].0);
                let mut e = r;
                let mut loops = 0;
                for a in (1..=j).rev() {
                    let t = tabs[offset + a][e];
                    if t & LOOP != 0 {
                        loops += 1;
                    }
                    e = (t & !LOOP) as usize;
                    let (pos, neg) = &self.scal[a][loops];
                    let s = if (j + 1 - a) % 2 == 1 { neg } else { pos };
                    b.mul_acc(&mut out[e * l..(e + 1) * l], c, s);
                }
            }
            std::mem::swap(&mut cur, &mut out);
        }
        cur
    }

    fn diagram(&mut self, m: usize, k: usize, g: &Diagram, x: Vec<u32>) -> Result<Vec<u32>> {
        let l = self.b.len;
        let k2 = g.n();
        self.space(m, k);
        self.space(m, k2);
        let src = &self.spaces[&(m, k)];
        let dst = &self.spaces[&(m, k2)];
        let mut out = vec![0u32; dst.size * l];
        let mut pc = vec![0u8; src.total];
        let mut pd = vec![0u8; dst.total];
        let mut stack = Vec::new();
        let mut dpow = vec![self.b.from_poly(&IntPoly::one())];
        for r in 0..src.size {
            let c = &x[r * l..(r + 1) * l];
            if c.iter().all(|&v| v == 0) {
                continue;
            }
            src.unrank(r as u64, &mut pc, &mut stack);
            let d = src.to_diagram(&pc);
            let (e, loops) = compose_diagrams(g, &d)?;
            while dpow.len() <= loops {
                let next = self.b.from_poly(&IntPoly::delta().pow(dpow.len() as u32));
                dpow.push(next);
            }
            let t = dst.rank_diagram(&e, &mut pd) as usize;
            self.b.mul_acc(&mut out[t * l..(t + 1) * l], c, &dpow[loops]);
        }
        Ok(out)
    }

    /// The numerator vector of prog applied to id_m, and its target.
    fn run(&mut self, prog: &Program, m: usize) -> Result<(usize, Vec<u32>)> {
        let l = self.b.len;
        let sp = self.space(m, m);
        let mut pc = vec![0u8; sp.total];
        let id = sp.rank_diagram(&Diagram::identity(m), &mut pc) as usize;
        let mut x = vec![0u32; sp.size * l];
        x[id * l..(id + 1) * l].copy_from_slice(&self.b.from_poly(&IntPoly::one()));
        let mut k = m;
        for s in &prog.steps {
            match s {
                Step::Clasp { k: size, offset } => {
                    if offset + size > k {
                        return Err(Error::BadStrandCount { n: k, k: offset + size });
                    }
                    x = self.clasp(m, k, *size, *offset, x);
                }
                Step::Diagram(g) => {
                    if g.m() != k {
                        return Err(Error::BoundaryMismatch(g.m(), k));
                    }
                    x = self.diagram(m, k, g, x)?;
                    k = g.n();
                }
            }
        }
        Ok((k, x))
    }
}

static EMPTY: Vec<u32> = Vec::new();

/// Decides whether op (as a morphism) has all coefficients in ℤ[δ]_𝔪.
pub fn check_locality(op: &LinearOp, chi: &MixedChar) -> Result<LocalityReport> {
    let den = op.den();
    let (bad, _) = den.split(chi);
    let bad: Vec<(u64, u32)> = bad.exponents().collect();
    let mut report =
        LocalityReport { source: op.source, target: op.target, den: den.clone(), bad: bad.clone(), prime: 0, support: 0, offending: None };
    if bad.is_empty() {
        return Ok(report);
    }
    let blocks = Blocks::new(&bad)?;
    report.prime = blocks.md.p;
    let l = blocks.len;
    let mut engine = Engine::new(&blocks, op.max_clasp().max(op.source).max(op.target));
    engine.space(op.source, op.target);
    let mut total = vec![0u32; engine.spaces[&(op.source, op.target)].size * l];
    for prog in &op.terms {
        if prog.coef.is_zero() {
            continue;
        }
        let (k, part) = engine.run(prog, op.source)?;
        debug_assert_eq!(k, op.target);
        let cof = den.div(&prog.den()).expect("lcm").mul(&prog.coef.num).to_poly();
        let mut cof = blocks.from_poly(&cof);
        if prog.coef.sign < 0 {
            cof = blocks.neg(&cof);
        }
        for (o, c) in total.chunks_mut(l).zip(part.chunks(l)) {
            if c.iter().any(|&v| v != 0) {
                blocks.mul_acc(o, c, &cof);
            }
        }
    }
    let sp = &engine.spaces[&(op.source, op.target)];
    let mut pc = vec![0u8; sp.total];
    let mut stack = Vec::new();
    for (r, c) in total.chunks(l).enumerate() {
        if c.iter().any(|&v| v != 0) {
            report.support += 1;
            if report.offending.is_none() {
                sp.unrank(r as u64, &mut pc, &mut stack);
                report.offending = Some(sp.to_diagram(&pc));
            }
        }
    }
    Ok(report)
}

/// Locality of JW_n.
pub fn mixed_jw_locality(n: u64, chi: &MixedChar) -> Result<LocalityReport> {
    check_locality(&super::mixed_jw_op(n, chi)?, chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::enumerate_diagrams;

    #[test]
    fn ranking_is_a_bijection() {
        for (m, k) in [(3, 5), (4, 4), (0, 6), (6, 2)] {
            let sp = Space::new(m, k);
            let all = enumerate_diagrams(m, k).unwrap();
            assert_eq!(sp.size, all.len());
            let mut pc = vec![0u8; m + k];
            let mut stack = Vec::new();
            let mut seen = vec![false; sp.size];
            for d in &all {
                let r = sp.rank_diagram(d, &mut pc) as usize;
                assert!(!seen[r]);
                seen[r] = true;
                sp.unrank(r as u64, &mut pc, &mut stack);
                assert_eq!(&sp.to_diagram(&pc), d);
            }
        }
    }

    #[test]
    fn generator_table_matches_diagram_calculus() {
        let (m, k) = (4, 6);
        let sp = Space::new(m, k);
        let mut pc = vec![0u8; m + k];
        let mut stack = Vec::new();
        for i in 1..k {
            let t = sp.generator_table(i);
            for r in 0..sp.size {
                sp.unrank(r as u64, &mut pc, &mut stack);
                let mut d = sp.to_diagram(&pc);
                let lp = d.apply_generator_top(i);
                assert_eq!(t[r] & LOOP != 0, lp);
                assert_eq!((t[r] & !LOOP) as u64, sp.rank_diagram(&d, &mut pc));
            }
        }
    }

    #[test]
    fn classical_jw_is_not_local_past_ell() {
        let chi = MixedChar::new(3, 2).unwrap();
        let ok = check_locality(&LinearOp::clasp(1, 1, 0), &chi).unwrap();
        assert!(ok.is_local() && ok.bad.is_empty());
        assert!(check_locality(&LinearOp::clasp(2, 2, 0), &chi).unwrap().is_local());
        let r = check_locality(&LinearOp::clasp(3, 3, 0), &chi).unwrap();
        assert!(!r.is_local());
    }

    #[test]
    fn mixed_jw_local_small() {
        let chi = MixedChar::new(3, 2).unwrap();
        for n in 1..=9 {
            let r = mixed_jw_locality(n, &chi).unwrap();
            assert!(r.is_local(), "n={n} {:?}", r.offending);
        }
    }

    #[test]
    fn agrees_with_exact_locality() {
        let chi = MixedChar::new(2, 3).unwrap();
        for n in 1..=6u64 {
            let op = super::super::mixed_jw_op(n, &chi).unwrap();
            let exact = super::super::apply_op(
                &crate::ring::IntPolyRing,
                &op,
                &crate::diagram::Morphism::identity(&crate::ring::IntPolyRing, n as usize),
                0,
            )
            .unwrap()
            .to_local(&chi)
            .is_ok();
            assert_eq!(check_locality(&op, &chi).unwrap().is_local(), exact, "n={n}");
        }
    }
}

