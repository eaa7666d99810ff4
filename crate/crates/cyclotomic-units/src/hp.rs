//! High-precision fixed-point real and complex arithmetic for the numeric
//! verification oracle.
//!
//! Values are `m / 2^bits` with `m` a big integer. All public entry points
//! compute with 64 extra guard bits internally and round back, so results
//! are reliable to within a few units in the last requested place. The
//! transcendental kernel is self-contained: pi by a Machin arctangent
//! combination, logarithms by argument normalization plus the atanh series,
//! sines and cosines by exact rational quadrant reduction and Taylor
//! summation. Roots of unity are tabulated per (order, precision) pair.

use crate::{Error, Result, Z};
use num_traits::{Signed, ToPrimitive, Zero};
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

pub const DEFAULT_BITS: u32 = 256;
pub const MAX_BITS: u32 = 4096;
const GUARD: u32 = 64;

/// Round-half-up shift right.
fn shift_round(x: &Z, k: u32) -> Z {
    if k == 0 {
        return x.clone();
    }
    (x + (Z::from(1) << (k - 1))) >> k
}

/// Fixed-point real number `m / 2^bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fx {
    m: Z,
    bits: u32,
}

impl Fx {
    pub fn raw(m: Z, bits: u32) -> Self {
        Fx { m, bits }
    }

    pub fn zero(bits: u32) -> Self {
        Fx {
            m: Z::zero(),
            bits,
        }
    }

    pub fn one(bits: u32) -> Self {
        Fx {
            m: Z::from(1) << bits,
            bits,
        }
    }

    pub fn from_i64(v: i64, bits: u32) -> Self {
        Fx {
            m: Z::from(v) << bits,
            bits,
        }
    }

    pub fn from_ratio(num: Z, den: Z, bits: u32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(Fx {
            m: (num << bits) / den,
            bits,
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    pub fn rescale(&self, bits: u32) -> Fx {
        if bits >= self.bits {
            Fx {
                m: &self.m << (bits - self.bits),
                bits,
            }
        } else {
            Fx {
                m: shift_round(&self.m, self.bits - bits),
                bits,
            }
        }
    }

    pub fn add(&self, o: &Fx) -> Fx {
        debug_assert_eq!(self.bits, o.bits);
        Fx {
            m: &self.m + &o.m,
            bits: self.bits,
        }
    }

    pub fn sub(&self, o: &Fx) -> Fx {
        debug_assert_eq!(self.bits, o.bits);
        Fx {
            m: &self.m - &o.m,
            bits: self.bits,
        }
    }

    pub fn neg(&self) -> Fx {
        Fx {
            m: -&self.m,
            bits: self.bits,
        }
    }

    pub fn abs(&self) -> Fx {
        Fx {
            m: self.m.abs(),
            bits: self.bits,
        }
    }

    pub fn mul(&self, o: &Fx) -> Fx {
        debug_assert_eq!(self.bits, o.bits);
        Fx {
            m: shift_round(&(&self.m * &o.m), self.bits),
            bits: self.bits,
        }
    }

    pub fn mul_small(&self, k: i64) -> Fx {
        Fx {
            m: &self.m * Z::from(k),
            bits: self.bits,
        }
    }

    pub fn mul_z(&self, k: &Z) -> Fx {
        Fx {
            m: &self.m * k,
            bits: self.bits,
        }
    }

    pub fn div_small(&self, k: u64) -> Fx {
        debug_assert!(k > 0);
        Fx {
            m: &self.m / Z::from(k),
            bits: self.bits,
        }
    }

    pub fn div(&self, o: &Fx) -> Result<Fx> {
        debug_assert_eq!(self.bits, o.bits);
        if o.m.is_zero() {
            return Err(Error::Precision(
                "division by zero in fixed-point arithmetic".into(),
            ));
        }
        Ok(Fx {
            m: (&self.m << self.bits) / &o.m,
            bits: self.bits,
        })
    }

    /// Floor square root in value; errors on negative input.
    pub fn sqrt(&self) -> Result<Fx> {
        if self.m.is_negative() {
            return Err(Error::Precision("square root of a negative value".into()));
        }
        Ok(Fx {
            m: (&self.m << self.bits).sqrt(),
            bits: self.bits,
        })
    }

    pub fn to_f64(&self) -> f64 {
        let r = if self.bits > 512 {
            self.rescale(512)
        } else {
            self.clone()
        };
        r.m.to_f64().unwrap_or(f64::NAN) / 2f64.powi(r.bits as i32)
    }

    /// self < o (same precision).
    pub fn lt(&self, o: &Fx) -> bool {
        debug_assert_eq!(self.bits, o.bits);
        self.m < o.m
    }
}

/// arctan(1/x) at the given scale, by the alternating inverse-power series.
fn atan_inv(x: u64, bits: u32) -> Z {
    let mut power = (Z::from(1) << bits) / Z::from(x);
    let x2 = Z::from(x) * Z::from(x);
    let mut acc = Z::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / Z::from(2 * k + 1);
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        power /= &x2;
        k += 1;
    }
    acc
}

thread_local! {
    static PI_CACHE: RefCell<HashMap<u32, Fx>> = RefCell::new(HashMap::new());
    static LN2_CACHE: RefCell<HashMap<u32, Fx>> = RefCell::new(HashMap::new());
    static ROOT_CACHE: RefCell<HashMap<(u64, u32), Rc<Vec<Cx>>>> = RefCell::new(HashMap::new());
}

/// pi = 16 arctan(1/5) - 4 arctan(1/239).
pub fn pi(bits: u32) -> Fx {
    PI_CACHE.with(|c| {
        if let Some(v) = c.borrow().get(&bits) {
            return v.clone();
        }
        let work = bits + GUARD;
        let m = atan_inv(5, work) * Z::from(16) - atan_inv(239, work) * Z::from(4);
        let v = Fx::raw(m, work).rescale(bits);
        c.borrow_mut().insert(bits, v.clone());
        v
    })
}

/// ln 2 = 2 artanh(1/3) = sum 2 / ((2k+1) 3^(2k+1)).
fn ln2(bits: u32) -> Fx {
    LN2_CACHE.with(|c| {
        if let Some(v) = c.borrow().get(&bits) {
            return v.clone();
        }
        let work = bits + GUARD;
        let mut power = (Z::from(2) << work) / Z::from(3);
        let mut acc = Z::zero();
        let mut k = 0u64;
        while !power.is_zero() {
            acc += &power / Z::from(2 * k + 1);
            power /= Z::from(9);
            k += 1;
        }
        let v = Fx::raw(acc, work).rescale(bits);
        c.borrow_mut().insert(bits, v.clone());
        v
    })
}

/// Natural logarithm of a positive value.
pub fn ln(x: &Fx) -> Result<Fx> {
    if !self_positive(x) {
        return Err(Error::Precision(
            "logarithm of a non-positive value".into(),
        ));
    }
    let work = x.bits + GUARD;
    let m = &x.m << GUARD;
    let blen = m.bits() as i64;
    let e = blen - 1 - work as i64; // x = y 2^e with y in [1, 2)
    let ym = if e >= 0 {
        shift_round(&m, e as u32)
    } else {
        m << ((-e) as u32)
    };
    let y = Fx::raw(ym, work);
    let one = Fx::one(work);
    let t = y.sub(&one).div(&y.add(&one))?; // in [0, 1/3)
    let t2 = t.mul(&t);
    let mut term = t.clone();
    let mut acc = t;
    let mut k = 1u64;
    loop {
        term = term.mul(&t2);
        let add = term.div_small(2 * k + 1);
        if add.is_zero() {
            break;
        }
        acc = acc.add(&add);
        k += 1;
    }
    let mut out = acc.mul_small(2);
    if e != 0 {
        out = out.add(&ln2(work).mul_small(e));
    }
    Ok(out.rescale(x.bits))
}

fn self_positive(x: &Fx) -> bool {
    x.m.is_positive()
}

/// (cos t, sin t) for t in [0, pi/2), by Taylor summation.
fn sin_cos_taylor(theta: &Fx) -> (Fx, Fx) {
    let bits = theta.bits;
    let t2 = theta.mul(theta);
    let mut cos = Fx::one(bits);
    let mut term = Fx::one(bits);
    let mut k = 1u64;
    loop {
        term = term.mul(&t2).div_small((2 * k - 1) * (2 * k)).neg();
        if term.is_zero() {
            break;
        }
        cos = cos.add(&term);
        k += 1;
    }
    let mut sin = theta.clone();
    let mut term = theta.clone();
    let mut k = 1u64;
    loop {
        term = term.mul(&t2).div_small((2 * k) * (2 * k + 1)).neg();
        if term.is_zero() {
            break;
        }
        sin = sin.add(&term);
        k += 1;
    }
    (cos, sin)
}

/// Complex fixed-point number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cx {
    pub re: Fx,
    pub im: Fx,
}

impl Cx {
    pub fn new(re: Fx, im: Fx) -> Self {
        debug_assert_eq!(re.bits, im.bits);
        Cx { re, im }
    }

    pub fn one(bits: u32) -> Self {
        Cx {
            re: Fx::one(bits),
            im: Fx::zero(bits),
        }
    }

    pub fn bits(&self) -> u32 {
        self.re.bits
    }

    pub fn add(&self, o: &Cx) -> Cx {
        Cx {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &Cx) -> Cx {
        Cx {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn mul(&self, o: &Cx) -> Cx {
        Cx {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn conj(&self) -> Cx {
        Cx {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn abs2(&self) -> Fx {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> Result<Fx> {
        self.abs2().sqrt()
    }

    pub fn div(&self, o: &Cx) -> Result<Cx> {
        let d = o.abs2();
        if d.is_zero() {
            return Err(Error::Precision("complex division by zero".into()));
        }
        let num = self.mul(&o.conj());
        Ok(Cx {
            re: num.re.div(&d)?,
            im: num.im.div(&d)?,
        })
    }

    /// Integer power by squaring; exponent magnitude is capped to keep the
    /// numeric route honest about what it can evaluate.
    pub fn pow_z(&self, e: &Z) -> Result<Cx> {
        let mag = e.abs();
        let Some(mut k) = mag.to_u64().filter(|&k| k <= 1 << 20) else {
            return Err(Error::InvalidArgument(
                "exponent too large for numeric evaluation".into(),
            ));
        };
        let mut base = if e.is_negative() {
            Cx::one(self.bits()).div(self)?
        } else {
            self.clone()
        };
        let mut acc = Cx::one(self.bits());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        Ok(acc)
    }
}

fn check_bits(bits: u32) -> Result<()> {
    if !(32..=MAX_BITS).contains(&bits) {
        return Err(Error::InvalidArgument(format!(
            "precision must lie in [32, {MAX_BITS}] bits, got {bits}"
        )));
    }
    Ok(())
}

fn root_table(m: u64, bits: u32) -> Result<Rc<Vec<Cx>>> {
    check_bits(bits)?;
    if m == 0 || m > 1 << 20 {
        return Err(Error::InvalidArgument(format!("root order {m} out of range")));
    }
    ROOT_CACHE.with(|c| {
        if let Some(t) = c.borrow().get(&(m, bits)) {
            return Ok(t.clone());
        }
        let work = bits + GUARD;
        let pi_w = pi(work);
        let mut table = Vec::with_capacity(m as usize);
        for k in 0..m {
            // Exact quadrant reduction of 2 pi k / m.
            let q = 4 * k / m;
            let rem = 4 * k - q * m; // 4k mod m; angle = pi * rem / (2m)
            let theta = pi_w.mul_small(rem as i64).div_small(2 * m);
            let (cos, sin) = sin_cos_taylor(&theta);
            let (re, im) = match q {
                0 => (cos, sin),
                1 => (sin.neg(), cos),
                2 => (cos.neg(), sin.neg()),
                _ => (sin, cos.neg()),
            };
            table.push(Cx::new(re.rescale(bits), im.rescale(bits)));
        }
        let rc = Rc::new(table);
        c.borrow_mut().insert((m, bits), rc.clone());
        Ok(rc)
    })
}

/// exp(2 pi i k / m): the k-th power of the first m-th root of unity above
/// the real axis.
pub fn zeta(m: u64, k: u64, bits: u32) -> Result<Cx> {
    let t = root_table(m, bits)?;
    Ok(t[(k % m) as usize].clone())
}

/// 1 - zeta_m^k; errors when the difference vanishes (k = 0 mod m).
pub fn one_minus_zeta(m: u64, k: u64, bits: u32) -> Result<Cx> {
    if k % m == 0 {
        return Err(Error::InvalidArgument(
            "1 - zeta^0 vanishes; no such atom value".into(),
        ));
    }
    Ok(Cx::one(bits).sub(&zeta(m, k, bits)?))
}

/// ln |1 - zeta_m^k|, computed as half the log of the squared modulus.
pub fn log_abs_one_minus_zeta(m: u64, k: u64, bits: u32) -> Result<Fx> {
    let w = one_minus_zeta(m, k, bits)?;
    Ok(ln(&w.abs2())?.div_small(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pow10(k: u32) -> Z {
        Z::from(10u32).pow(k)
    }

    fn ref_value(digits: &str, scale: u32, bits: u32) -> Fx {
        let n: Z = digits.parse().unwrap();
        Fx::from_ratio(n, pow10(scale), bits).unwrap()
    }

    fn tiny(bits: u32, pow: u32) -> Fx {
        Fx::from_ratio(Z::from(1), pow10(pow), bits).unwrap()
    }

    #[test]
    fn pi_matches_reference_digits() {
        // 40 decimal places.
        let want = ref_value("31415926535897932384626433832795028841972", 40, 256);
        let diff = pi(256).sub(&want).abs();
        assert!(diff.lt(&tiny(256, 35)), "pi off by {}", diff.to_f64());
    }

    #[test]
    fn ln_matches_reference_digits() {
        let want = ref_value("6931471805599453094172321214581765680755", 40, 256);
        let got = ln(&Fx::from_i64(2, 256)).unwrap();
        let diff = got.sub(&want).abs();
        assert!(diff.lt(&tiny(256, 35)), "ln 2 off by {}", diff.to_f64());
        // ln 4 = 2 ln 2, crossing the normalization path.
        let four = ln(&Fx::from_i64(4, 256)).unwrap();
        let diff = four.sub(&got.mul_small(2)).abs();
        assert!(diff.lt(&tiny(256, 70)));
        // ln(1/2) = -ln 2.
        let half = ln(&Fx::from_ratio(Z::from(1), Z::from(2), 256).unwrap()).unwrap();
        assert!(half.add(&got).abs().lt(&tiny(256, 70)));
        assert!(ln(&Fx::zero(256)).is_err());
        assert!(ln(&Fx::from_i64(-3, 256)).is_err());
    }

    #[test]
    fn golden_ratio_log_oracle() {
        // |1 - zeta_5^2| / |1 - zeta_5| is the golden ratio.
        let want = ref_value("4812118250596034474977589134243684231351", 40, 256);
        let got = log_abs_one_minus_zeta(5, 2, 256)
            .unwrap()
            .sub(&log_abs_one_minus_zeta(5, 1, 256).unwrap());
        let diff = got.sub(&want).abs();
        assert!(diff.lt(&tiny(256, 35)), "log phi off by {}", diff.to_f64());
    }

    #[test]
    fn roots_lie_on_the_unit_circle() {
        for m in [3u64, 5, 7, 8, 12, 16, 105] {
            for k in 0..m {
                let z = zeta(m, k, 256).unwrap();
                let err = z.abs2().sub(&Fx::one(256)).abs();
                assert!(err.lt(&tiny(256, 60)), "m={m} k={k}");
            }
        }
    }

    #[test]
    fn root_powers_compose() {
        let bits = 256;
        for (m, a, b) in [(7u64, 2u64, 6u64), (16, 5, 13), (105, 33, 92)] {
            let lhs = zeta(m, a, bits).unwrap().mul(&zeta(m, b, bits).unwrap());
            let rhs = zeta(m, (a + b) % m, bits).unwrap();
            let err = lhs.sub(&rhs).abs2();
            assert!(err.lt(&tiny(bits, 70)), "m={m}");
        }
        // Integer powers against table entries.
        let z = zeta(7, 1, bits).unwrap();
        let p = z.pow_z(&Z::from(9)).unwrap();
        let err = p.sub(&zeta(7, 2, bits).unwrap()).abs2();
        assert!(err.lt(&tiny(bits, 70)));
        let inv = z.pow_z(&Z::from(-1)).unwrap();
        let err = inv.sub(&zeta(7, 6, bits).unwrap()).abs2();
        assert!(err.lt(&tiny(bits, 70)));
    }

    #[test]
    fn axis_roots_are_exact() {
        let z = zeta(4, 1, 128).unwrap();
        assert!(z.re.is_zero());
        assert_eq!(z.im, Fx::one(128));
        let z = zeta(2, 1, 128).unwrap();
        assert_eq!(z.re, Fx::one(128).neg());
        assert!(z.im.is_zero());
    }

    #[test]
    fn sqrt_and_division() {
        let two = Fx::from_i64(2, 256);
        let s = two.sqrt().unwrap();
        let err = s.mul(&s).sub(&two).abs();
        assert!(err.lt(&tiny(256, 70)));
        assert!(Fx::from_i64(-1, 256).sqrt().is_err());
        assert!(two.div(&Fx::zero(256)).is_err());
        let q = Fx::from_i64(7, 256).div(&two).unwrap();
        assert_eq!(q, Fx::from_ratio(Z::from(7), Z::from(2), 256).unwrap());
    }

    #[test]
    fn one_minus_zeta_guards() {
        assert!(one_minus_zeta(5, 0, 256).is_err());
        assert!(one_minus_zeta(5, 10, 256).is_err());
        assert!(one_minus_zeta(5, 3, 16).is_err()); // precision floor
        assert!(zeta(0, 0, 256).is_err());
        // |1 - zeta_2| = 2.
        let v = one_minus_zeta(2, 1, 256).unwrap();
        assert_eq!(v.re, Fx::from_i64(2, 256));
    }
}
