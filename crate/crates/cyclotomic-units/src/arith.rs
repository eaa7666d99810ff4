//! Elementary number theory over machine integers: factorization, Euler phi,
//! primitive roots, discrete logarithms and CRT at the small moduli that show
//! up as prime-power conductors.

use crate::{Error, Result};

/// Trial-division primality test. Conductors here are desk-scale, so this is
/// plenty; inputs are expected to be far below 2^32.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    if n % 3 == 0 {
        return n == 3;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Factorization into (prime, exponent) pairs, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |p: u64, e: u32| {
        if e > 0 {
            out.push((p, e));
        }
    };
    let mut e = 0;
    while n % 2 == 0 {
        n /= 2;
        e += 1;
    }
    push(2, e);
    let mut p = 3u64;
    while p.saturating_mul(p) <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        push(p, e);
        p += 2;
    }
    if n > 1 {
        push(n, 1);
    }
    out
}

/// phi(p^e) for prime p.
pub fn phi_prime_power(p: u64, e: u32) -> u64 {
    p.pow(e - 1) * (p - 1)
}

pub fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    debug_assert!(m > 0);
    let mut b = (b % m) as u128;
    let m = m as u128;
    let mut acc: u128 = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// Inverse of `a` mod `m` (requires gcd(a, m) = 1).
pub fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert!(r0 == 1, "inv_mod: {a} not invertible mod {m}");
    t0.rem_euclid(m as i128) as u64
}

/// Smallest positive primitive root mod q = p^e, p an odd prime. The choice
/// of the smallest root makes every derived indexing reproducible.
pub fn primitive_root(q: u64) -> Result<u64> {
    let f = factorize(q);
    if f.len() != 1 || f[0].0 == 2 {
        return Err(Error::InvalidArgument(format!(
            "primitive_root: {q} is not an odd prime power"
        )));
    }
    let (p, e) = f[0];
    let phi = phi_prime_power(p, e);
    let phi_factors: Vec<u64> = factorize(phi).into_iter().map(|(p, _)| p).collect();
    for g in 2..q {
        if g % p == 0 {
            continue;
        }
        if phi_factors.iter().all(|&l| pow_mod(g, phi / l, q) != 1) {
            return Ok(g);
        }
    }
    unreachable!("(Z/{q}Z)* is cyclic for odd prime powers")
}

/// Discrete log of `x` base `g` mod `m`, brute force over `order` steps.
pub fn dlog(g: u64, x: u64, m: u64, order: u64) -> Option<u64> {
    let x = x % m;
    let mut acc = 1u64 % m;
    for k in 0..order {
        if acc == x {
            return Some(k);
        }
        acc = (acc as u128 * g as u128 % m as u128) as u64;
    }
    None
}

/// Writes an odd residue u mod 2^e (e >= 2) as (-1)^bit * 5^k with
/// k in [0, 2^(e-2)) for e >= 3, and k = 0 for e = 2.
pub fn two_part_decompose(u: u64, e: u32) -> (u8, u64) {
    let q = 1u64 << e;
    let u = u % q;
    debug_assert!(u % 2 == 1, "residue must be odd");
    if e == 2 {
        return if u == 1 { (0, 0) } else { (1, 0) };
    }
    let h = 1u64 << (e - 2);
    let mut acc = 1u64;
    for k in 0..h {
        if acc == u {
            return (0, k);
        }
        if q - acc == u {
            return (1, k);
        }
        acc = (acc as u128 * 5 % q as u128) as u64;
    }
    unreachable!("{u} mod {q} must be +-5^k")
}

/// 5^k * (-1)^bit mod 2^e.
pub fn two_part_compose(bit: u8, k: u64, e: u32) -> u64 {
    let q = 1u64 << e;
    let v = pow_mod(5, k, q);
    if bit == 0 {
        v
    } else {
        q - v
    }
}

/// CRT for pairwise coprime moduli: returns x mod prod(m_i) with x = r_i mod m_i.
pub fn crt(pairs: &[(u64, u64)]) -> u64 {
    let m: u64 = pairs.iter().map(|&(_, m)| m).product();
    let mut x: u128 = 0;
    for &(r, mi) in pairs {
        let rest = m / mi;
        let inv = inv_mod(rest % mi, mi);
        x += r as u128 * rest as u128 % m as u128 * inv as u128 % m as u128;
        x %= m as u128;
    }
    x as u64
}
