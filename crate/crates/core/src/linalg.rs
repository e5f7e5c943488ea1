//! Dense linear algebra over a field given as a `CoeffRing` whose nonzero
//! elements are invertible.

use crate::ring::CoeffRing;

/// A subspace kept as fully reduced rows with distinct pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<E> {
    pub cols: usize,
    rows: Vec<(usize, Vec<E>)>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> Echelon<E> {
    pub fn new(cols: usize) -> Self {
        Echelon { cols, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> impl Iterator<Item = &Vec<E>> {
        self.rows.iter().map(|(_, r)| r)
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(c, _)| *c).collect()
    }

    fn reduce<R: CoeffRing<Elem = E>>(&self, ring: &R, v: &mut [E]) {
        for (c, row) in &self.rows {
            if ring.is_zero(&v[*c]) {
                continue;
            }
            let k = v[*c].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !ring.is_zero(r) {
                    *x = ring.sub(x, &ring.mul(&k, r));
                }
            }
        }
    }

    /// v minus its projection onto the pivot columns.
    pub fn reduced<R: CoeffRing<Elem = E>>(&self, ring: &R, v: &[E]) -> Vec<E> {
        let mut w = v.to_vec();
        self.reduce(ring, &mut w);
        w
    }

    pub fn contains<R: CoeffRing<Elem = E>>(&self, ring: &R, v: &[E]) -> bool {
        let mut w = v.to_vec();
        self.reduce(ring, &mut w);
        w.iter().all(|x| ring.is_zero(x))
    }

    /// Adds v to the span; returns whether the dimension grew.
    pub fn insert<R: CoeffRing<Elem = E>>(&mut self, ring: &R, v: &[E]) -> bool {
        assert_eq!(v.len(), self.cols);
        let mut w = v.to_vec();
        self.reduce(ring, &mut w);
        let Some(c) = w.iter().position(|x| !ring.is_zero(x)) else { return false };
        let inv = ring.inv(&w[c]).expect("field element");
        for x in w.iter_mut() {
            *x = ring.mul(x, &inv);
        }
        for (_, row) in self.rows.iter_mut() {
            if ring.is_zero(&row[c]) {
                continue;
            }
            let k = row[c].clone();
            for (x, r) in row.iter_mut().zip(&w) {
                *x = ring.sub(x, &ring.mul(&k, r));
            }
        }
        let at = self.rows.iter().position(|(pc, _)| *pc > c).unwrap_or(self.rows.len());
        self.rows.insert(at, (c, w));
        true
    }

    pub fn contains_all<R: CoeffRing<Elem = E>>(&self, ring: &R, other: &Echelon<E>) -> bool {
        other.basis().all(|v| self.contains(ring, v))
    }
}

pub fn row_space<R: CoeffRing>(ring: &R, rows: &[Vec<R::Elem>], cols: usize) -> Echelon<R::Elem> {
    let mut e = Echelon::new(cols);
    for r in rows {
        e.insert(ring, r);
    }
    e
}

pub fn rank<R: CoeffRing>(ring: &R, rows: &[Vec<R::Elem>]) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    row_space(ring, rows, cols).dim()
}

/// A basis of {x : A x = 0}.
pub fn nullspace<R: CoeffRing>(ring: &R, a: &[Vec<R::Elem>], cols: usize) -> Vec<Vec<R::Elem>> {
    let e = row_space(ring, a, cols);
    let pivots = e.pivots();
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![ring.zero(); cols];
        x[free] = ring.one();
        for (pc, row) in e.rows.iter() {
            x[*pc] = ring.neg(&row[free]);
        }
        out.push(x);
    }
    out
}

pub fn mat_vec<R: CoeffRing>(ring: &R, a: &[Vec<R::Elem>], x: &[R::Elem]) -> Vec<R::Elem> {
    a.iter()
        .map(|row| {
            let mut acc = ring.zero();
            for (r, v) in row.iter().zip(x) {
                if !ring.is_zero(r) && !ring.is_zero(v) {
                    ring.mul_add_assign(&mut acc, r, v);
                }
            }
            acc
        })
        .collect()
}

pub fn mat_mul<R: CoeffRing>(ring: &R, a: &[Vec<R::Elem>], b: &[Vec<R::Elem>]) -> Vec<Vec<R::Elem>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            let mut out = vec![ring.zero(); cols];
            for (k, r) in row.iter().enumerate() {
                if ring.is_zero(r) {
                    continue;
                }
                for (o, v) in out.iter_mut().zip(&b[k]) {
                    ring.mul_add_assign(o, r, v);
                }
            }
            out
        })
        .collect()
}

pub fn transpose<E: Clone>(a: &[Vec<E>]) -> Vec<Vec<E>> {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FpPoint;

    #[test]
    fn rank_and_kernel() {
        let f = FpPoint::new(7, 3);
        let a = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank(&f, &a), 2);
        let k = nullspace(&f, &a, 3);
        assert_eq!(k.len(), 1);
        assert!(mat_vec(&f, &a, &k[0]).iter().all(|&x| x == 0));
        let e = row_space(&f, &a, 3);
        assert!(e.contains(&f, &[3, 6, 2]));
        assert!(!e.contains(&f, &[0, 0, 1]));
    }
}
