//! The Temperley–Lieb category: planar (m,n)-pairings and their linear
//! combinations over a coefficient ring.
//!
//! Boundary points of an (m,n)-diagram are numbered with the bottom row first
//! (0..m, left to right) and then the top row (m..m+n, left to right).

use crate::error::{Error, Result};
use crate::ring::CoeffRing;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::fmt;

pub type Pairing = SmallVec<[u8; 32]>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagram {
    m: u8,
    n: u8,
    pair: Pairing,
}

#[derive(Serialize, Deserialize)]
struct DiagramRepr {
    bottom: usize,
    top: usize,
    pairing: Vec<usize>,
}

impl Serialize for Diagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiagramRepr { bottom: self.m(), top: self.n(), pairing: self.pair.iter().map(|&x| x as usize).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Diagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DiagramRepr::deserialize(d)?;
        Diagram::from_pairing(r.bottom, r.top, &r.pairing).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.m();
        let name = |i: usize| if i < m { format!("b{i}") } else { format!("t{}", i - m) };
        let chords: Vec<String> = (0..self.pair.len())
            .filter(|&i| (self.pair[i] as usize) > i)
            .map(|i| format!("{}-{}", name(i), name(self.pair[i] as usize)))
            .collect();
        write!(f, "({},{})[{}]", self.m, self.n, chords.join(" "))
    }
}

impl Diagram {
    /// Builds and validates a diagram from its involution on m+n points.
    pub fn from_pairing(m: usize, n: usize, pairing: &[usize]) -> Result<Self> {
        let total = m + n;
        if (m + n) % 2 != 0 {
            return Err(Error::ParityMismatch(m, n));
        }
        if pairing.len() != total || total > 255 {
            return Err(Error::BoundaryMismatch(pairing.len(), total));
        }
        for (i, &j) in pairing.iter().enumerate() {
            if j >= total || j == i || pairing[j] != i {
                return Err(Error::Parse(format!("pairing is not a fixed-point-free involution at {i}")));
            }
        }
        let d = Diagram { m: m as u8, n: n as u8, pair: pairing.iter().map(|&x| x as u8).collect() };
        if !d.is_planar() {
            return Err(Error::Parse("pairing is not planar".into()));
        }
        Ok(d)
    }

    pub(crate) fn from_raw(m: usize, n: usize, pair: Pairing) -> Self {
        let d = Diagram { m: m as u8, n: n as u8, pair };
        debug_assert!(d.is_planar(), "non-planar diagram {d}");
        d
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn pairing(&self) -> &[u8] {
        &self.pair
    }

    pub fn partner(&self, i: usize) -> usize {
        self.pair[i] as usize
    }

    /// Position of a boundary point when walking bottom left→right, then top right→left.
    fn circle_pos(&self, i: usize) -> usize {
        let m = self.m();
        if i < m {
            i
        } else {
            m + (self.n() - 1 - (i - m))
        }
    }

    pub fn is_planar(&self) -> bool {
        let total = self.pair.len();
        let mut by_pos = vec![0usize; total];
        for i in 0..total {
            by_pos[self.circle_pos(i)] = i;
        }
        let mut stack: Vec<usize> = Vec::new();
        for &pt in &by_pos {
            let q = self.partner(pt);
            if stack.last() == Some(&q) {
                stack.pop();
            } else {
                stack.push(pt);
            }
        }
        stack.is_empty()
    }

    pub fn identity(n: usize) -> Self {
        let mut pair = Pairing::with_capacity(2 * n);
        for i in 0..n {
            pair.push((n + i) as u8);
        }
        for i in 0..n {
            pair.push(i as u8);
        }
        Diagram { m: n as u8, n: n as u8, pair }
    }

    /// The generator u_i of TL_n, 1 ≤ i < n.
    pub fn generator(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(Error::BadStrandCount { n, k: i });
        }
        let mut d = Diagram::identity(n);
        let (a, b) = (i - 1, i);
        d.pair[a] = b as u8;
        d.pair[b] = a as u8;
        d.pair[n + a] = (n + b) as u8;
        d.pair[n + b] = (n + a) as u8;
        Ok(d)
    }

    /// id_a ⊗ (nested caps on 2y strands) ⊗ id_b : a+2y+b → a+b.
    pub fn rainbow_cap(a: usize, y: usize, b: usize) -> Self {
        let m = a + 2 * y + b;
        let n = a + b;
        let mut pair: Pairing = smallvec::smallvec![0u8; m + n];
        for i in 0..a {
            pair[i] = (m + i) as u8;
            pair[m + i] = i as u8;
        }
        for r in 0..y {
            let (l, h) = (a + y - 1 - r, a + y + r);
            pair[l] = h as u8;
            pair[h] = l as u8;
        }
        for i in 0..b {
            let bot = a + 2 * y + i;
            pair[bot] = (m + a + i) as u8;
            pair[m + a + i] = bot as u8;
        }
        Diagram { m: m as u8, n: n as u8, pair }
    }

    /// id_a ⊗ (nested cups on 2y strands) ⊗ id_b : a+b → a+2y+b.
    pub fn rainbow_cup(a: usize, y: usize, b: usize) -> Self {
        Diagram::rainbow_cap(a, y, b).star()
    }

    /// The vertical mirror image, an (n,m)-diagram.
    pub fn star(&self) -> Self {
        let (m, n) = (self.m(), self.n());
        let map = |i: usize| if i < m { n + i } else { i - m };
        let mut pair: Pairing = smallvec::smallvec![0u8; m + n];
        for i in 0..m + n {
            pair[map(i)] = map(self.partner(i)) as u8;
        }
        Diagram { m: n as u8, n: m as u8, pair }
    }

    /// Number of bottom-to-top chords.
    pub fn through_degree(&self) -> usize {
        let m = self.m();
        (0..m).filter(|&i| self.partner(i) >= m).count()
    }

    /// Side-by-side placement, `self` on the left.
    pub fn tensor(&self, other: &Diagram) -> Diagram {
        let (m1, n1, m2, n2) = (self.m(), self.n(), other.m(), other.n());
        let (mm, nn) = (m1 + m2, n1 + n2);
        let ma = |i: usize| if i < m1 { i } else { mm + (i - m1) };
        let mb = |i: usize| if i < m2 { m1 + i } else { mm + n1 + (i - m2) };
        let mut pair: Pairing = smallvec::smallvec![0u8; mm + nn];
        for i in 0..m1 + n1 {
            pair[ma(i)] = ma(self.partner(i)) as u8;
        }
        for i in 0..m2 + n2 {
            pair[mb(i)] = mb(other.partner(i)) as u8;
        }
        Diagram { m: mm as u8, n: nn as u8, pair }
    }

    /// u_i ∘ self for a generator on the top boundary, in place; returns
    /// whether a closed loop was formed.
    pub fn apply_generator_top(&mut self, i: usize) -> bool {
        debug_assert!(i >= 1 && i < self.n());
        let m = self.m();
        let (a, b) = (m + i - 1, m + i);
        let (x, y) = (self.partner(a), self.partner(b));
        if x == b {
            return true;
        }
        self.pair[x] = y as u8;
        self.pair[y] = x as u8;
        self.pair[a] = b as u8;
        self.pair[b] = a as u8;
        false
    }

    /// Whether u_i ∘ self has lower through degree than self.
    pub fn generator_drops_td(&self, i: usize) -> bool {
        let m = self.m();
        self.partner(m + i - 1) < m && self.partner(m + i) < m
    }
}

/// g ∘ f for f : m → k and g : k → n, with the number of closed loops.
pub fn compose_diagrams(g: &Diagram, f: &Diagram) -> Result<(Diagram, usize)> {
    let (m, k, n) = (f.m(), f.n(), g.n());
    if g.m() != k {
        return Err(Error::BoundaryMismatch(g.m(), k));
    }
    let mut pair: Pairing = smallvec::smallvec![0u8; m + n];
    let mut seen = vec![false; k];
    // Walk from an outer endpoint; `in_f` says which diagram we are inside.
    let walk = |start_in_f: bool, start: usize, seen: &mut Vec<bool>| -> usize {
        let (mut in_f, mut pt) = (start_in_f, start);
        loop {
            if in_f {
                let q = f.partner(pt);
                if q < m {
                    return q;
                }
                let mid = q - m;
                seen[mid] = true;
                in_f = false;
                pt = mid;
            } else {
                let q = g.partner(pt);
                if q >= k {
                    return m + (q - k);
                }
                seen[q] = true;
                in_f = true;
                pt = m + q;
            }
        }
    };
    for i in 0..m {
        pair[i] = walk(true, i, &mut seen) as u8;
    }
    for j in 0..n {
        pair[m + j] = walk(false, k + j, &mut seen) as u8;
    }
    let mut loops = 0;
    for s in 0..k {
        if seen[s] {
            continue;
        }
        loops += 1;
        let mut mid = s;
        loop {
            seen[mid] = true;
            let q = g.partner(mid);
            seen[q] = true;
            let r = f.partner(m + q) - m;
            if r == s {
                break;
            }
            mid = r;
        }
    }
    Ok((Diagram::from_raw(m, n, pair), loops))
}

/// All planar (m,n)-diagrams, in a fixed order.
pub fn enumerate_diagrams(m: usize, n: usize) -> Result<Vec<Diagram>> {
    if (m + n) % 2 != 0 {
        return Err(Error::ParityMismatch(m, n));
    }
    let total = m + n;
    let mut out = Vec::new();
    let mut circ = vec![usize::MAX; total];
    matchings(&mut circ, &mut vec![(0, total)], &mut |c: &[usize]| {
        let to_idx = |pos: usize| if pos < m { pos } else { m + (n - 1 - (pos - m)) };
        let mut pair: Pairing = smallvec::smallvec![0u8; total];
        for (pos, &q) in c.iter().enumerate() {
            pair[to_idx(pos)] = to_idx(q) as u8;
        }
        out.push(Diagram::from_raw(m, n, pair));
    });
    out.sort();
    Ok(out)
}

/// Non-crossing perfect matchings of a union of intervals of positions.
fn matchings(c: &mut Vec<usize>, pending: &mut Vec<(usize, usize)>, emit: &mut dyn FnMut(&[usize])) {
    let Some((lo, hi)) = pending.pop() else {
        emit(c);
        return;
    };
    if lo == hi {
        matchings(c, pending, emit);
    } else {
        for b in (lo + 1..hi).step_by(2) {
            c[lo] = b;
            c[b] = lo;
            pending.push((b + 1, hi));
            pending.push((lo + 1, b));
            matchings(c, pending, emit);
            pending.pop();
            pending.pop();
        }
    }
    pending.push((lo, hi));
}

/// Diagrams of through degree exactly t.
pub fn enumerate_with_td(m: usize, n: usize, t: usize) -> Result<Vec<Diagram>> {
    Ok(enumerate_diagrams(m, n)?.into_iter().filter(|d| d.through_degree() == t).collect())
}

/// A finite linear combination of (m,n)-diagrams with coefficients in some ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Morphism<E> {
    pub m: usize,
    pub n: usize,
    pub terms: FxHashMap<Diagram, E>,
}

impl<E: Clone + PartialEq + fmt::Debug> Morphism<E> {
    pub fn zero(m: usize, n: usize) -> Self {
        Morphism { m, n, terms: FxHashMap::default() }
    }

    pub fn from_diagram<R: CoeffRing<Elem = E>>(ring: &R, d: Diagram) -> Self {
        let mut f = Morphism::zero(d.m(), d.n());
        f.terms.insert(d, ring.one());
        f
    }

    pub fn identity<R: CoeffRing<Elem = E>>(ring: &R, n: usize) -> Self {
        Morphism::from_diagram(ring, Diagram::identity(n))
    }

    pub fn generator<R: CoeffRing<Elem = E>>(ring: &R, n: usize, i: usize) -> Result<Self> {
        Ok(Morphism::from_diagram(ring, Diagram::generator(n, i)?))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff<R: CoeffRing<Elem = E>>(&self, ring: &R, d: &Diagram) -> E {
        self.terms.get(d).cloned().unwrap_or_else(|| ring.zero())
    }

    /// Adds c·d, dropping the term if it cancels.
    pub fn add_term<R: CoeffRing<Elem = E>>(&mut self, ring: &R, d: Diagram, c: &E) {
        if ring.is_zero(c) {
            return;
        }
        match self.terms.entry(d) {
            std::collections::hash_map::Entry::Occupied(mut o) => {
                ring.add_assign(o.get_mut(), c);
                if ring.is_zero(o.get()) {
                    o.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
        }
    }

    /// Terms sorted by diagram, for reproducible output.
    pub fn sorted_terms(&self) -> Vec<(&Diagram, &E)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub fn add<R: CoeffRing<Elem = E>>(&self, ring: &R, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut r = self.clone();
        for (d, c) in &other.terms {
            r.add_term(ring, d.clone(), c);
        }
        Ok(r)
    }

    pub fn sub<R: CoeffRing<Elem = E>>(&self, ring: &R, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut r = self.clone();
        for (d, c) in &other.terms {
            r.add_term(ring, d.clone(), &ring.neg(c));
        }
        Ok(r)
    }

    pub fn scale<R: CoeffRing<Elem = E>>(&self, ring: &R, a: &E) -> Self {
        let mut r = Morphism::zero(self.m, self.n);
        if ring.is_zero(a) {
            return r;
        }
        for (d, c) in &self.terms {
            let v = ring.mul(a, c);
            if !ring.is_zero(&v) {
                r.terms.insert(d.clone(), v);
            }
        }
        r
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.m != other.m || self.n != other.n {
            return Err(Error::BoundaryMismatch(self.m + self.n, other.m + other.n));
        }
        Ok(())
    }

    pub fn map_coeffs<F: CoeffRing>(&self, target: &F, f: impl Fn(&E) -> F::Elem) -> Morphism<F::Elem> {
        let mut r = Morphism::zero(self.m, self.n);
        for (d, c) in &self.terms {
            let v = f(c);
            if !target.is_zero(&v) {
                r.terms.insert(d.clone(), v);
            }
        }
        r
    }

    pub fn try_map_coeffs<F: CoeffRing>(
        &self,
        target: &F,
        f: impl Fn(&E) -> Result<F::Elem>,
    ) -> Result<Morphism<F::Elem>> {
        let mut r = Morphism::zero(self.m, self.n);
        for (d, c) in &self.terms {
            let v = f(c)?;
            if !target.is_zero(&v) {
                r.terms.insert(d.clone(), v);
            }
        }
        Ok(r)
    }

    pub fn star(&self) -> Self {
        let mut r = Morphism::zero(self.n, self.m);
        for (d, c) in &self.terms {
            r.terms.insert(d.star(), c.clone());
        }
        r
    }

    pub fn through_degree(&self) -> Result<usize> {
        self.terms.keys().map(Diagram::through_degree).max().ok_or(Error::ZeroMorphism)
    }

    /// Drops every term of through degree below t.
    pub fn keep_td_at_least(&mut self, t: usize) {
        self.terms.retain(|d, _| d.through_degree() >= t);
    }

    /// u_i ∘ self.
    pub fn left_generator<R: CoeffRing<Elem = E>>(&self, ring: &R, i: usize) -> Self {
        let delta = ring.delta();
        let mut r = Morphism::zero(self.m, self.n);
        for (d, c) in &self.terms {
            let mut e = d.clone();
            if e.apply_generator_top(i) {
                r.add_term(ring, e, &ring.mul(c, &delta));
            } else {
                r.add_term(ring, e, c);
            }
        }
        r
    }
}

/// δ^loops in the ring, for small loop counts.
pub(crate) struct DeltaPowers<E> {
    pows: Vec<E>,
}

impl<E: Clone> DeltaPowers<E> {
    pub fn new<R: CoeffRing<Elem = E>>(ring: &R) -> Self {
        DeltaPowers { pows: vec![ring.one(), ring.delta()] }
    }

    pub fn get<R: CoeffRing<Elem = E>>(&mut self, ring: &R, k: usize) -> &E {
        while self.pows.len() <= k {
            let next = ring.mul(self.pows.last().unwrap(), &self.pows[1]);
            self.pows.push(next);
        }
        &self.pows[k]
    }
}

/// g ∘ f, bilinear, with δ per closed loop.
pub fn compose<R: CoeffRing>(ring: &R, g: &Morphism<R::Elem>, f: &Morphism<R::Elem>) -> Result<Morphism<R::Elem>> {
    compose_filtered(ring, g, f, 0)
}

/// g ∘ f keeping only result terms of through degree ≥ min_td.
pub fn compose_filtered<R: CoeffRing>(
    ring: &R,
    g: &Morphism<R::Elem>,
    f: &Morphism<R::Elem>,
    min_td: usize,
) -> Result<Morphism<R::Elem>> {
    if g.m != f.n {
        return Err(Error::BoundaryMismatch(g.m, f.n));
    }
    let mut pw = DeltaPowers::new(ring);
    let mut r = Morphism::zero(f.m, g.n);
    for (dg, cg) in &g.terms {
        for (df, cf) in &f.terms {
            let (d, loops) = compose_diagrams(dg, df)?;
            if d.through_degree() < min_td {
                continue;
            }
            let mut c = ring.mul(cg, cf);
            if loops > 0 {
                c = ring.mul(&c, pw.get(ring, loops));
            }
            r.add_term(ring, d, &c);
        }
    }
    Ok(r)
}

pub fn tensor<R: CoeffRing>(ring: &R, f: &Morphism<R::Elem>, g: &Morphism<R::Elem>) -> Morphism<R::Elem> {
    let mut r = Morphism::zero(f.m + g.m, f.n + g.n);
    for (df, cf) in &f.terms {
        for (dg, cg) in &g.terms {
            r.add_term(ring, df.tensor(dg), &ring.mul(cf, cg));
        }
    }
    r
}

/// Closes the last k strands of an endomorphism of n on the right.
pub fn partial_close<R: CoeffRing>(ring: &R, f: &Morphism<R::Elem>, k: usize) -> Result<Morphism<R::Elem>> {
    let n = f.n;
    if f.m != n || k > n {
        return Err(Error::BadStrandCount { n, k });
    }
    let cup = Morphism::from_diagram(ring, Diagram::rainbow_cup(n - k, k, 0));
    let cap = Morphism::from_diagram(ring, Diagram::rainbow_cap(n - k, k, 0));
    let mid = tensor(ring, f, &Morphism::identity(ring, k));
    compose(ring, &cap, &compose(ring, &mid, &cup)?)
}

/// A small ASCII picture: one row per chord with its endpoints.
pub fn ascii(d: &Diagram) -> String {
    let (m, n) = (d.m(), d.n());
    let mut top = String::new();
    let mut bot = String::new();
    let label = |i: usize| -> char {
        let q = d.partner(i);
        if (i < m) != (q < m) {
            '|'
        } else if q > i {
            '('
        } else {
            ')'
        }
    };
    for j in 0..n {
        top.push(label(m + j));
    }
    for i in 0..m {
        bot.push(label(i));
    }
    format!("{top}\n{bot}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{IntPolyRing, IntPoly};

    fn u(n: usize, i: usize) -> Morphism<IntPoly> {
        Morphism::generator(&IntPolyRing, n, i).unwrap()
    }

    #[test]
    fn relations() {
        let r = IntPolyRing;
        let uu = compose(&r, &u(2, 1), &u(2, 1)).unwrap();
        assert_eq!(uu, u(2, 1).scale(&r, &IntPoly::delta()));
        let x = compose(&r, &u(3, 1), &compose(&r, &u(3, 2), &u(3, 1)).unwrap()).unwrap();
        assert_eq!(x, u(3, 1));
        let a = compose(&r, &u(4, 1), &u(4, 3)).unwrap();
        let b = compose(&r, &u(4, 3), &u(4, 1)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn counts() {
        let catalan = [1usize, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796];
        for (n, &c) in catalan.iter().enumerate() {
            assert_eq!(enumerate_diagrams(n, n).unwrap().len(), c);
        }
        assert_eq!(enumerate_diagrams(0, 2).unwrap().len(), 1);
        assert_eq!(enumerate_with_td(1, 5, 1).unwrap().len(), 5);
        assert_eq!(enumerate_with_td(5, 1, 1).unwrap().len(), 5);
    }

    #[test]
    fn generator_action_matches_composition() {
        let r = IntPolyRing;
        for d in enumerate_diagrams(4, 6).unwrap() {
            let f = Morphism::from_diagram(&r, d);
            for i in 1..6 {
                assert_eq!(f.left_generator(&r, i), compose(&r, &u(6, i), &f).unwrap());
            }
        }
    }

    #[test]
    fn star_and_td() {
        let d = Diagram::rainbow_cap(1, 1, 1);
        assert_eq!((d.m(), d.n()), (4, 2));
        assert_eq!(d.through_degree(), 2);
        assert_eq!(d.star().star(), d);
        assert_eq!(Diagram::generator(5, 2).unwrap().through_degree(), 3);
    }

    #[test]
    fn closing() {
        let r = IntPolyRing;
        let c = partial_close(&r, &Morphism::identity(&r, 4), 2).unwrap();
        assert_eq!(c, Morphism::identity(&r, 2).scale(&r, &IntPoly::delta().pow(2)));
        let c = partial_close(&r, &u(3, 2), 1).unwrap();
        assert_eq!(c, Morphism::identity(&r, 2));
    }

    #[test]
    fn serde_round_trip() {
        let d = Diagram::generator(4, 2).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        let e: Diagram = serde_json::from_str(&s).unwrap();
        assert_eq!(d, e);
        assert!(Diagram::from_pairing(2, 2, &[3, 2, 1, 0]).is_err());
    }
}
