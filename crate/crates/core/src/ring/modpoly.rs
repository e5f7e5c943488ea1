//! Dense polynomials over ℤ/N as little-endian `u64` slices.

pub fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

#[inline]
pub fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

#[inline]
pub fn addmod(a: u64, b: u64, n: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % n as u128) as u64
}

#[inline]
pub fn submod(a: u64, b: u64, n: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        n - (b - a)
    }
}

pub fn powmod(mut a: u64, mut e: u64, n: u64) -> u64 {
    let mut r = 1 % n;
    a %= n;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, n);
        }
        a = mulmod(a, a, n);
        e >>= 1;
    }
    r
}

/// Inverse modulo a prime.
pub fn invmod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        None
    } else {
        Some(powmod(a, p - 2, p))
    }
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let (mut d, mut r) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'base: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

pub fn add(a: &[u64], b: &[u64], n: u64) -> Vec<u64> {
    let mut r = vec![0; a.len().max(b.len())];
    for (i, x) in r.iter_mut().enumerate() {
        *x = addmod(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0), n);
    }
    trim(&mut r);
    r
}

pub fn sub(a: &[u64], b: &[u64], n: u64) -> Vec<u64> {
    let mut r = vec![0; a.len().max(b.len())];
    for (i, x) in r.iter_mut().enumerate() {
        *x = submod(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0), n);
    }
    trim(&mut r);
    r
}

pub fn scale(a: &[u64], k: u64, n: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.iter().map(|&x| mulmod(x, k, n)).collect();
    trim(&mut r);
    r
}

pub fn mul(a: &[u64], b: &[u64], n: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    let nn = n as u128;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] = (acc[i + j] + x as u128 * y as u128) % nn;
        }
    }
    let mut r: Vec<u64> = acc.into_iter().map(|v| v as u64).collect();
    trim(&mut r);
    r
}

/// Division by a monic divisor; returns (quotient, remainder).
pub fn divrem_monic(a: &[u64], m: &[u64], n: u64) -> (Vec<u64>, Vec<u64>) {
    let dm = m.len() - 1;
    debug_assert_eq!(m[dm] % n, 1 % n);
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() <= dm {
        return (Vec::new(), r);
    }
    let mut q = vec![0; r.len() - dm];
    for k in (dm..r.len()).rev() {
        let t = r[k];
        if t == 0 {
            continue;
        }
        for i in 0..=dm {
            r[k - dm + i] = submod(r[k - dm + i], mulmod(t, m[i], n), n);
        }
        q[k - dm] = t;
    }
    r.truncate(dm);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub fn rem_monic(a: &[u64], m: &[u64], n: u64) -> Vec<u64> {
    divrem_monic(a, m, n).1
}

/// Make monic over 𝔽_p.
pub fn monic(a: &[u64], p: u64) -> Vec<u64> {
    let mut v = a.to_vec();
    trim(&mut v);
    if let Some(&l) = v.last() {
        let li = invmod(l, p).expect("leading coefficient invertible");
        v = scale(&v, li, p);
    }
    v
}

/// Division with remainder over 𝔽_p by any nonzero divisor.
pub fn divrem_field(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut b = b.to_vec();
    trim(&mut b);
    let l = *b.last().expect("division by zero");
    let li = invmod(l, p).unwrap();
    let bm = scale(&b, li, p);
    let (q, r) = divrem_monic(a, &bm, p);
    (scale(&q, li, p), r)
}

pub fn gcd_field(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = divrem_field(&a, &b, p).1;
        a = b;
        b = r;
    }
    monic(&a, p)
}

/// (g, s) with s·a ≡ g mod f over 𝔽_p.
pub fn inverse_mod(a: &[u64], f: &[u64], p: u64) -> Option<Vec<u64>> {
    let (mut r0, mut r1) = (f.to_vec(), rem_monic(a, f, p));
    let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
    if r1.is_empty() {
        return None;
    }
    while !r1.is_empty() {
        let (q, r) = divrem_field(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = invmod(r0[0], p)?;
    Some(rem_monic(&scale(&s0, c, p), f, p))
}

fn mulmod_poly(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    rem_monic(&mul(a, b, p), f, p)
}

/// δ^(p^k) mod f over 𝔽_p.
fn frobenius_power(f: &[u64], p: u64, k: usize) -> Vec<u64> {
    let mut x = rem_monic(&[0, 1], f, p);
    for _ in 0..k {
        let base = x.clone();
        let mut r = vec![1];
        let mut e = p;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod_poly(&r, &b, f, p);
            }
            b = mulmod_poly(&b, &b, f, p);
            e >>= 1;
        }
        x = r;
    }
    x
}

/// Rabin's irreducibility test for a monic polynomial over 𝔽_p.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let mut f = f.to_vec();
    trim(&mut f);
    let d = match f.len().checked_sub(1) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    let f = monic(&f, p);
    if d == 1 {
        return true;
    }
    let x = vec![0, 1];
    if sub(&frobenius_power(&f, p, d), &rem_monic(&x, &f, p), p) != Vec::<u64>::new() {
        return false;
    }
    let mut q = 2;
    let mut dd = d;
    while dd > 1 {
        if dd % q == 0 {
            let h = sub(&frobenius_power(&f, p, d / q), &x, p);
            if gcd_field(&h, &f, p) != vec![1] {
                return false;
            }
            while dd % q == 0 {
                dd /= q;
            }
        }
        q += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&[2, 1, 1], 3));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        assert!(is_irreducible(&[1, 1, 0, 1], 2));
        assert!(!is_irreducible(&[1, 0, 0, 0, 1], 2));
        assert!(!is_irreducible(&[4, 0, 0, 0, 1], 3));
    }

    #[test]
    fn inverse() {
        let f = [2, 1, 1];
        let a = [1, 1];
        let b = inverse_mod(&a, &f, 3).unwrap();
        assert_eq!(rem_monic(&mul(&a, &b, 3), &f, 3), vec![1]);
    }
}
