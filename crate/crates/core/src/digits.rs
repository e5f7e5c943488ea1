//! (ℓ,p)-adic digit combinatorics: expansions, ancestry, supports, admissible
//! sets, reflections, stretches and chains.
//!
//! Digit vectors are little-endian (index = position s) and are printed
//! big-endian as `[n_k,...,n_0]`.

use crate::error::{Error, Result};
use crate::ring::MixedChar;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Place value p^(i): 1, ℓ, ℓp, ℓp², …  `None` when the position does not
/// exist (ℓ = ∞ beyond 0, p = 0 beyond 1) or the value overflows.
pub fn place_value(chi: &MixedChar, i: usize) -> Option<u64> {
    if i == 0 {
        return Some(1);
    }
    let ell = chi.ell?;
    if chi.p == 0 {
        return (i == 1).then_some(ell);
    }
    chi.p.checked_pow(i as u32 - 1)?.checked_mul(ell)
}

/// Number of positions that carry a bounded digit, or `None` if unlimited.
fn position_cap(chi: &MixedChar) -> Option<usize> {
    match (chi.ell, chi.p) {
        (None, _) => Some(0),
        (Some(_), 0) => Some(1),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LpExpansion {
    pub ell: Option<u64>,
    pub p: u64,
    /// Little-endian digits of n+1; the last one is nonzero.
    pub digits: Vec<u64>,
    pub n: u64,
}

impl fmt::Display for LpExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.digits.iter().rev().map(|d| d.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl LpExpansion {
    /// n_s, zero above the leading digit.
    pub fn digit(&self, s: usize) -> u64 {
        self.digits.get(s).copied().unwrap_or(0)
    }

    /// Index k of the leading digit.
    pub fn top(&self) -> usize {
        self.digits.len() - 1
    }

    /// Big-endian digits, as written in `[n_k,...,n_0]`.
    pub fn big_endian(&self) -> Vec<u64> {
        self.digits.iter().rev().copied().collect()
    }
}

pub fn expand(n: u64, chi: &MixedChar) -> LpExpansion {
    let mut r = n + 1;
    let mut digits = Vec::new();
    match chi.ell {
        None => digits.push(r),
        Some(ell) => {
            digits.push(r % ell);
            r /= ell;
            if chi.p == 0 {
                if r > 0 {
                    digits.push(r);
                }
            } else {
                while r > 0 {
                    digits.push(r % chi.p);
                    r /= chi.p;
                }
            }
        }
    }
    while digits.len() > 1 && *digits.last().unwrap() == 0 {
        digits.pop();
    }
    LpExpansion { ell: chi.ell, p: chi.p, digits, n }
}

/// Σ d_i p^(i) − 1 for arbitrary signed digits.
pub fn from_signed_digits(digits: &[i64], chi: &MixedChar) -> Result<i64> {
    let mut acc: i128 = 0;
    for (i, &d) in digits.iter().enumerate() {
        if d == 0 {
            continue;
        }
        let w = place_value(chi, i).ok_or_else(|| Error::OutOfRange(format!("digit position {i}")))?;
        acc += d as i128 * w as i128;
    }
    i64::try_from(acc - 1).map_err(|_| Error::OutOfRange("digit value overflows".into()))
}

pub fn from_digits(digits: &[u64], chi: &MixedChar) -> Result<u64> {
    let signed: Vec<i64> = digits.iter().map(|&d| d as i64).collect();
    let v = from_signed_digits(&signed, chi)?;
    u64::try_from(v).map_err(|_| Error::OutOfRange("negative value".into()))
}

pub fn mother(n: u64, chi: &MixedChar) -> Option<u64> {
    let e = expand(n, chi);
    let k = e.top();
    let s = e.digits.iter().position(|&d| d != 0)?;
    if s >= k {
        return None;
    }
    let mut d = e.digits.clone();
    d[s] = 0;
    from_digits(&d, chi).ok()
}

pub fn is_eve(n: u64, chi: &MixedChar) -> bool {
    mother(n, chi).is_none()
}

/// Mother, grandmother, … down to Eve (youngest first).
pub fn ancestors(n: u64, chi: &MixedChar) -> Vec<u64> {
    let mut out = Vec::new();
    let mut cur = n;
    while let Some(m) = mother(cur, chi) {
        out.push(m);
        cur = m;
    }
    out
}

/// a_{n,s}: the youngest ancestor whose digits up to position s are all 0,
/// with a_{n,−1} = 0.
pub fn youngest_ancestor_with_zero(n: u64, s: i64, chi: &MixedChar) -> Result<u64> {
    if s < 0 {
        return Ok(0);
    }
    truncate_below(n, s, chi)
}

/// [n_k,…,n_{s+1},0,…,0] − 1, i.e. n with digits 0..=s cleared; s = −1 gives n.
pub fn truncate_below(n: u64, s: i64, chi: &MixedChar) -> Result<u64> {
    let e = expand(n, chi);
    if s < 0 {
        return Ok(n);
    }
    if s as usize >= e.top() {
        return Err(Error::NoSuchAncestor { n, s });
    }
    let mut d = e.digits.clone();
    for x in d.iter_mut().take(s as usize + 1) {
        *x = 0;
    }
    from_digits(&d, chi)
}

/// All values n_k p^(k) ± … ± n_0 − 1, by sign vectors; sorted descending.
pub fn support(n: u64, chi: &MixedChar) -> Vec<u64> {
    let e = expand(n, chi);
    let k = e.top();
    let mut vals = std::collections::BTreeSet::new();
    let free: Vec<usize> = (0..k).filter(|&i| e.digits[i] != 0).collect();
    for mask in 0u64..(1u64 << free.len()) {
        let mut d: Vec<i64> = e.digits.iter().map(|&x| x as i64).collect();
        for (b, &i) in free.iter().enumerate() {
            if mask >> b & 1 == 1 {
                d[i] = -d[i];
            }
        }
        if let Ok(v) = from_signed_digits(&d, chi) {
            vals.insert(v as u64);
        }
    }
    vals.into_iter().rev().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    fn name(self) -> &'static str {
        match self {
            Direction::Up => "up",
            Direction::Down => "down",
        }
    }
}

/// A validated admissible set for `base`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AdmSet {
    pub indices: Vec<u32>,
    pub direction: Direction,
    pub base: u64,
}

impl fmt::Display for AdmSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_set(&self.indices))
    }
}

pub fn fmt_set(s: &[u32]) -> String {
    let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

impl AdmSet {
    pub fn new(indices: &[u32], direction: Direction, base: u64, chi: &MixedChar) -> Result<Self> {
        let mut v = indices.to_vec();
        v.sort_unstable();
        v.dedup();
        if !is_admissible(base, &v, direction, chi) {
            return Err(Error::NotAdmissible { set: v, n: base, dir: direction.name() });
        }
        Ok(AdmSet { indices: v, direction, base })
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, s: u32) -> bool {
        self.indices.binary_search(&s).is_ok()
    }

    /// The reflected integer: n[S] for down sets, n(S) for up sets.
    pub fn target(&self, chi: &MixedChar) -> u64 {
        let r = match self.direction {
            Direction::Down => reflect_down(self.base, &self.indices, chi),
            Direction::Up => reflect_up(self.base, &self.indices, chi),
        };
        r.expect("validated set")
    }
}

/// Maximal runs of consecutive integers in a sorted set.
pub fn stretches(s: &[u32]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = Vec::new();
    for &x in s {
        match out.last_mut() {
            Some(run) if *run.last().unwrap() + 1 == x => run.push(x),
            _ => out.push(vec![x]),
        }
    }
    out
}

fn sorted_unique(s: &[u32]) -> bool {
    s.windows(2).all(|w| w[0] < w[1])
}

fn within_cap(s: &[u32], chi: &MixedChar) -> bool {
    match position_cap(chi) {
        Some(c) => s.iter().all(|&x| (x as usize) < c),
        None => true,
    }
}

pub fn is_down_admissible(n: u64, s: &[u32], chi: &MixedChar) -> bool {
    if !sorted_unique(s) || !within_cap(s, chi) {
        return false;
    }
    let e = expand(n, chi);
    let k = e.top() as u32;
    if s.iter().any(|&x| x >= k) {
        return false;
    }
    for run in stretches(s) {
        if e.digit(run[0] as usize) == 0 {
            return false;
        }
    }
    s.iter().all(|&x| e.digit(x as usize + 1) != 0 || s.contains(&(x + 1)))
}

pub fn is_up_admissible(n: u64, s: &[u32], chi: &MixedChar) -> bool {
    if !sorted_unique(s) || !within_cap(s, chi) {
        return false;
    }
    let e = expand(n, chi);
    for run in stretches(s) {
        if e.digit(run[0] as usize) == 0 {
            return false;
        }
    }
    let full = chi.p > 0 && chi.ell.is_some();
    s.iter().all(|&x| !full || e.digit(x as usize + 1) != chi.p - 1 || s.contains(&(x + 1)))
}

pub fn is_admissible(n: u64, s: &[u32], dir: Direction, chi: &MixedChar) -> bool {
    match dir {
        Direction::Down => is_down_admissible(n, s, chi),
        Direction::Up => is_up_admissible(n, s, chi),
    }
}

/// Negate the digits of n+1 at the positions in S and return the value − 1,
/// with no admissibility check.
pub fn negate_digits(n: u64, s: &[u32], chi: &MixedChar) -> Result<i64> {
    let e = expand(n, chi);
    let mut d: Vec<i64> = e.digits.iter().map(|&x| x as i64).collect();
    for &x in s {
        if let Some(v) = d.get_mut(x as usize) {
            *v = -*v;
        }
    }
    from_signed_digits(&d, chi)
}

/// n[S].
pub fn reflect_down(n: u64, s: &[u32], chi: &MixedChar) -> Result<u64> {
    if !is_down_admissible(n, s, chi) {
        return Err(Error::NotAdmissible { set: s.to_vec(), n, dir: "down" });
    }
    Ok(negate_digits(n, s, chi)? as u64)
}

/// n(S).
pub fn reflect_up(n: u64, s: &[u32], chi: &MixedChar) -> Result<u64> {
    if !is_up_admissible(n, s, chi) {
        return Err(Error::NotAdmissible { set: s.to_vec(), n, dir: "up" });
    }
    let e = expand(n, chi);
    let top = s.last().map_or(0, |&x| x as usize + 2);
    let len = e.digits.len().max(top);
    let mut d = vec![0i64; len];
    for (i, v) in d.iter_mut().enumerate() {
        let ni = e.digit(i) as i64;
        let in_s = s.contains(&(i as u32));
        let below = i > 0 && s.contains(&(i as u32 - 1));
        *v = if in_s {
            -ni
        } else if below {
            ni + 2
        } else {
            ni
        };
    }
    let v = from_signed_digits(&d, chi)?;
    u64::try_from(v).map_err(|_| Error::OutOfRange("negative reflection".into()))
}

fn sort_sets(v: &mut [Vec<u32>]) {
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
}

/// All down-admissible sets for n, including ∅, ordered by size then lexicographically.
pub fn down_admissible_sets(n: u64, chi: &MixedChar) -> Vec<AdmSet> {
    let e = expand(n, chi);
    let k = e.top();
    let hi = position_cap(chi).map_or(k, |c| c.min(k));
    let mut out = Vec::new();
    let mut cur = Vec::new();
    dfs_down(&e, 0, hi, &mut cur, &mut out);
    sort_sets(&mut out);
    out.into_iter().map(|indices| AdmSet { indices, direction: Direction::Down, base: n }).collect()
}

fn dfs_down(e: &LpExpansion, i: usize, hi: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    let prev_in = i > 0 && cur.last() == Some(&(i as u32 - 1));
    let forced = prev_in && e.digit(i) == 0;
    if i >= hi {
        if !forced {
            out.push(cur.clone());
        }
        return;
    }
    if !forced {
        dfs_down(e, i + 1, hi, cur, out);
    }
    if prev_in || e.digit(i) != 0 {
        cur.push(i as u32);
        dfs_down(e, i + 1, hi, cur, out);
        cur.pop();
    }
}

/// Up-admissible sets S for n with n(S) ≤ bound.
///
/// If t = max S then n(S) ≥ p^(t+1), so only positions with p^(t+1) ≤ bound
/// can occur.
pub fn up_admissible_sets(n: u64, bound: u64, chi: &MixedChar) -> Vec<AdmSet> {
    let e = expand(n, chi);
    let mut hi = 0usize;
    while place_value(chi, hi + 1).is_some_and(|w| w <= bound) {
        hi += 1;
        if position_cap(chi).is_some_and(|c| hi >= c) {
            break;
        }
    }
    let mut raw = Vec::new();
    let mut cur = Vec::new();
    dfs_up(&e, chi.p, 0, hi, &mut cur, &mut raw);
    let mut keep: Vec<Vec<u32>> = raw
        .into_iter()
        .filter(|s| reflect_up(n, s, chi).is_ok_and(|v| v <= bound))
        .collect();
    sort_sets(&mut keep);
    keep.into_iter().map(|indices| AdmSet { indices, direction: Direction::Up, base: n }).collect()
}

fn dfs_up(e: &LpExpansion, p: u64, i: usize, hi: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    let prev_in = i > 0 && cur.last() == Some(&(i as u32 - 1));
    let forced = prev_in && p > 0 && e.digit(i) == p - 1;
    if i >= hi {
        if !forced {
            out.push(cur.clone());
        }
        return;
    }
    if !forced {
        dfs_up(e, p, i + 1, hi, cur, out);
    }
    if prev_in || e.digit(i) != 0 {
        cur.push(i as u32);
        dfs_up(e, p, i + 1, hi, cur, out);
        cur.pop();
    }
}

/// A saturated chain S = S_1 ⊂ … ⊂ S_k = S′ of up-admissible sets for n.
/// Each step adds the largest nonzero-digit position of the top remaining
/// stretch of S′∖S, or its lowest position if all its digits vanish.
pub fn chain_between(s: &[u32], s2: &[u32], n: u64, chi: &MixedChar) -> Result<Vec<AdmSet>> {
    if !s.iter().all(|x| s2.contains(x)) {
        return Err(Error::NotNested);
    }
    let e = expand(n, chi);
    let mut cur = AdmSet::new(s, Direction::Up, n, chi)?;
    AdmSet::new(s2, Direction::Up, n, chi)?;
    let mut chain = vec![cur.clone()];
    loop {
        let rest: Vec<u32> = s2.iter().copied().filter(|x| !cur.contains(*x)).collect();
        if rest.is_empty() {
            return Ok(chain);
        }
        let runs = stretches(&rest);
        let last = runs.last().unwrap();
        let alpha = last
            .iter()
            .copied()
            .filter(|&a| e.digit(a as usize) != 0)
            .max()
            .unwrap_or(last[0]);
        let mut next = cur.indices.clone();
        next.push(alpha);
        cur = AdmSet::new(&next, Direction::Up, n, chi)?;
        chain.push(cur.clone());
    }
}

/// The finest partition of an admissible S into admissible stretches.
pub fn minimal_stretches(s: &[u32], n: u64, dir: Direction, chi: &MixedChar) -> Result<Vec<Vec<u32>>> {
    if !is_admissible(n, s, dir, chi) {
        return Err(Error::NotAdmissible { set: s.to_vec(), n, dir: dir.name() });
    }
    let e = expand(n, chi);
    let mut out = Vec::new();
    for run in stretches(s) {
        let mut piece = vec![run[0]];
        for &t in &run[1..] {
            let d = e.digit(t as usize);
            let cut = match dir {
                Direction::Down => d != 0,
                Direction::Up => d != 0 && (chi.p == 0 || d != chi.p - 1),
            };
            if cut {
                out.push(std::mem::take(&mut piece));
            }
            piece.push(t);
        }
        out.push(piece);
    }
    Ok(out)
}

/// Rows y = 0..=ymax of the grid {(x, y) : x ∈ supp(y)}, each of width ymax+1.
pub fn support_grid(chi: &MixedChar, ymax: u64) -> Vec<Vec<bool>> {
    (0..=ymax)
        .map(|y| {
            let mut row = vec![false; ymax as usize + 1];
            for x in support(y, chi) {
                row[x as usize] = true;
            }
            row
        })
        .collect()
}

/// Plain PBM (P1), top row = largest y.
pub fn support_grid_pbm(chi: &MixedChar, ymax: u64) -> String {
    let g = support_grid(chi, ymax);
    let w = ymax + 1;
    let mut s = format!("P1\n{w} {w}\n");
    for row in g.iter().rev() {
        let line: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

/// CSV of the coloured cells, one `x,y` pair per line.
pub fn support_grid_csv(chi: &MixedChar, ymax: u64) -> String {
    let mut s = String::from("x,y\n");
    for y in 0..=ymax {
        let mut xs = support(y, chi);
        xs.sort_unstable();
        for x in xs {
            s.push_str(&format!("{x},{y}\n"));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c53() -> MixedChar {
        MixedChar::new(5, 3).unwrap()
    }

    fn idx(v: &[AdmSet]) -> Vec<Vec<u32>> {
        v.iter().map(|s| s.indices.clone()).collect()
    }

    #[test]
    fn expansion_685() {
        let e = expand(685, &c53());
        assert_eq!(e.big_endian(), vec![1, 2, 0, 0, 2, 1]);
        assert_eq!(e.to_string(), "[1,2,0,0,2,1]");
        assert_eq!(from_digits(&e.digits, &c53()).unwrap(), 685);
        assert_eq!(expand(0, &c53()).big_endian(), vec![1]);
        let c32 = MixedChar::new(3, 2).unwrap();
        assert_eq!(expand(18, &c32).big_endian(), vec![1, 1, 0, 1]);
    }

    #[test]
    fn ancestry_685() {
        let c = c53();
        assert_eq!(mother(685, &c), Some(684));
        assert_eq!(ancestors(685, &c), vec![684, 674, 404]);
        assert!(is_eve(404, &c));
        assert_eq!(youngest_ancestor_with_zero(685, 0, &c).unwrap(), 684);
        for s in 1..=3 {
            assert_eq!(youngest_ancestor_with_zero(685, s, &c).unwrap(), 674);
        }
        assert_eq!(youngest_ancestor_with_zero(685, 4, &c).unwrap(), 404);
        assert_eq!(youngest_ancestor_with_zero(685, -1, &c).unwrap(), 0);
        assert!(youngest_ancestor_with_zero(685, 5, &c).is_err());
        assert_eq!(truncate_below(685, 2, &c).unwrap(), 674);
        assert_eq!(truncate_below(685, -1, &c).unwrap(), 685);
    }

    #[test]
    fn support_685_and_18() {
        assert_eq!(support(685, &c53()), vec![685, 683, 665, 663, 145, 143, 125, 123]);
        let c32 = MixedChar::new(3, 2).unwrap();
        assert_eq!(support(18, &c32), vec![18, 16, 6, 4]);
        assert_eq!(support(404, &c53()), vec![404]);
    }

    #[test]
    fn down_sets_685() {
        let c = c53();
        let sets = down_admissible_sets(685, &c);
        assert_eq!(
            idx(&sets),
            vec![
                vec![],
                vec![0],
                vec![4],
                vec![0, 4],
                vec![1, 2, 3],
                vec![0, 1, 2, 3],
                vec![1, 2, 3, 4],
                vec![0, 1, 2, 3, 4]
            ]
        );
        let vals: Vec<u64> = sets.iter().map(|s| s.target(&c)).collect();
        assert_eq!(vals, vec![685, 683, 145, 143, 665, 663, 125, 123]);
    }

    #[test]
    fn up_sets_123() {
        let c = c53();
        let sets = up_admissible_sets(123, 100_000, &c);
        let of = |k: usize| -> Vec<Vec<u32>> { idx(&sets).into_iter().filter(|s| s.len() == k).collect() };
        assert_eq!(of(1), vec![vec![0], vec![3]]);
        assert_eq!(of(2), vec![vec![0, 3], vec![2, 3], vec![3, 4]]);
        assert_eq!(reflect_up(123, &[0, 1, 2, 3, 4], &c).unwrap(), 685);
        assert_eq!(reflect_down(685, &[0, 1, 2, 3, 4], &c).unwrap(), 123);
    }

    #[test]
    fn up_sets_21() {
        let c = c53();
        let vals: Vec<u64> = up_admissible_sets(21, 267, &c).iter().map(|s| s.target(&c)).collect();
        let mut sorted = vals.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![21, 27, 37, 41, 67, 71, 81, 87, 247, 251, 261, 267]);
    }

    #[test]
    fn chains() {
        let c = c53();
        let ch = chain_between(&[], &[0, 1, 2, 3], 21, &c).unwrap();
        assert_eq!(ch.len(), 5);
        let ch = chain_between(&[3], &[0, 2, 3], 123, &c).unwrap();
        assert_eq!(ch.len(), 3);
        assert_eq!(chain_between(&[3], &[3], 123, &c).unwrap().len(), 1);
        assert_eq!(chain_between(&[0], &[3], 123, &c), Err(Error::NotNested));
    }

    #[test]
    fn stretches_685() {
        let c = c53();
        assert_eq!(minimal_stretches(&[1, 2, 3], 685, Direction::Down, &c).unwrap(), vec![vec![1, 2, 3]]);
        assert_eq!(minimal_stretches(&[0, 4], 685, Direction::Down, &c).unwrap(), vec![vec![0], vec![4]]);
        assert_eq!(
            minimal_stretches(&[0, 1, 2, 3, 4], 685, Direction::Down, &c).unwrap(),
            vec![vec![0], vec![1, 2, 3], vec![4]]
        );
    }

    #[test]
    fn semisimple_degenerates() {
        let c = MixedChar::semisimple();
        assert_eq!(expand(10, &c).big_endian(), vec![11]);
        assert_eq!(idx(&down_admissible_sets(10, &c)), vec![Vec::<u32>::new()]);
        assert_eq!(idx(&up_admissible_sets(10, 1000, &c)), vec![Vec::<u32>::new()]);
    }
}
