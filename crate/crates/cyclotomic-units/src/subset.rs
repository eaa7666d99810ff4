//! Convolution algebra of rational-valued functions on the subset lattice
//! of the prime-power factors, and the counting identities that predict
//! basis-block sizes per level.
//!
//! For degrees d_1..d_r the four structural families are, on a nonempty
//! subset O (all four map the empty set to 1):
//!
//! * `f_real(O)    = prod_{i in O} (d_i - 1)`
//! * `g_real(O)    = prod_{i in O} d_i`
//! * `f_complex(O) = (1/2) prod_{i in O} (d_i - 1) + (-1)^{|O|} / 2`
//! * `g_complex(O) = (1/2) prod_{i in O} d_i`
//!
//! In both families `f * 1 = g` (convolution against the constant-one
//! function) and equivalently `g * mu = f` with `mu(O) = (-1)^{|O|}`, so the
//! f-values over nonempty subsets sum to `g(full) - 1`.

use crate::{Error, Q, Result, Z};
use num_traits::{One, Zero};

/// A rational-valued function on subsets of {0, .., r-1}, indexed by
/// bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetFunction {
    r: usize,
    values: Vec<Q>,
}

impl SubsetFunction {
    pub fn from_fn(r: usize, f: impl Fn(u32) -> Q) -> Result<Self> {
        if r == 0 || r > 16 {
            return Err(Error::InvalidArgument(format!(
                "subset functions support 1..=16 positions, got {r}"
            )));
        }
        Ok(SubsetFunction {
            r,
            values: (0..1u32 << r).map(f).collect(),
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn get(&self, mask: u32) -> &Q {
        &self.values[mask as usize]
    }

    pub fn set(&mut self, mask: u32, v: Q) {
        self.values[mask as usize] = v;
    }

    /// Convolution identity: 1 on the empty set, 0 elsewhere.
    pub fn delta(r: usize) -> Result<Self> {
        Self::from_fn(r, |m| if m == 0 { Q::one() } else { Q::zero() })
    }

    /// The constant-one function.
    pub fn one(r: usize) -> Result<Self> {
        Self::from_fn(r, |_| Q::one())
    }

    /// The sign function mu(O) = (-1)^{|O|}, the convolution inverse of
    /// [`Self::one`].
    pub fn mobius(r: usize) -> Result<Self> {
        Self::from_fn(r, |m| {
            if m.count_ones() % 2 == 0 {
                Q::one()
            } else {
                -Q::one()
            }
        })
    }

    /// (self * other)(O) = sum over X subset of O of self(X) other(O \ X).
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        if self.r != other.r {
            return Err(Error::InvalidArgument(
                "convolution needs functions on the same ground set".into(),
            ));
        }
        Self::from_fn(self.r, |mask| {
            let mut acc = Q::zero();
            let mut sub = mask;
            loop {
                acc += self.get(sub) * other.get(mask & !sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
            acc
        })
    }

    /// Sum of values over all nonempty subsets.
    pub fn nonempty_sum(&self) -> Q {
        self.values.iter().skip(1).fold(Q::zero(), |a, v| a + v)
    }

    /// Value at the full set.
    pub fn full(&self) -> &Q {
        self.values.last().unwrap()
    }
}

fn check_degrees(d: &[u64]) -> Result<()> {
    if d.is_empty() || d.len() > 16 {
        return Err(Error::InvalidArgument(format!(
            "expected 1..=16 degrees, got {}",
            d.len()
        )));
    }
    if let Some(&bad) = d.iter().find(|&&x| x == 0) {
        return Err(Error::InvalidArgument(format!("degree {bad} must be >= 1")));
    }
    Ok(())
}

fn prod_over(d: &[u64], mask: u32, f: impl Fn(u64) -> Z) -> Z {
    let mut acc = Z::one();
    for (i, &di) in d.iter().enumerate() {
        if mask >> i & 1 == 1 {
            acc *= f(di);
        }
    }
    acc
}

pub fn family_f_real(d: &[u64]) -> Result<SubsetFunction> {
    check_degrees(d)?;
    SubsetFunction::from_fn(d.len(), |m| {
        Q::from_integer(prod_over(d, m, |x| Z::from(x - 1)))
    })
}

pub fn family_g_real(d: &[u64]) -> Result<SubsetFunction> {
    check_degrees(d)?;
    SubsetFunction::from_fn(d.len(), |m| Q::from_integer(prod_over(d, m, Z::from)))
}

pub fn family_f_complex(d: &[u64]) -> Result<SubsetFunction> {
    check_degrees(d)?;
    let half = Q::new(Z::one(), Z::from(2));
    SubsetFunction::from_fn(d.len(), |m| {
        if m == 0 {
            return Q::one();
        }
        let sign = if m.count_ones() % 2 == 0 {
            Q::one()
        } else {
            -Q::one()
        };
        &half * Q::from_integer(prod_over(d, m, |x| Z::from(x - 1))) + &half * sign
    })
}

pub fn family_g_complex(d: &[u64]) -> Result<SubsetFunction> {
    check_degrees(d)?;
    let half = Q::new(Z::one(), Z::from(2));
    SubsetFunction::from_fn(d.len(), |m| {
        if m == 0 {
            Q::one()
        } else {
            &half * Q::from_integer(prod_over(d, m, Z::from))
        }
    })
}

/// Number of basis elements a level contributes when its factors have the
/// given degrees and realness: `prod (d_i - 1)` if every factor is real,
/// otherwise `(1/2) prod_all (d_i - 1) + ((-1)^{#complex} / 2) prod_real (d_i - 1)`.
/// The slices cover exactly the factors of the level.
pub fn predicted_block_size(d: &[u64], is_real: &[bool]) -> Result<Z> {
    if d.len() != is_real.len() || d.is_empty() {
        return Err(Error::InvalidArgument(
            "degree and realness lists must be nonempty and aligned".into(),
        ));
    }
    check_degrees(d)?;
    let complex_count = is_real.iter().filter(|&&x| !x).count();
    let all: Z = d.iter().map(|&x| Z::from(x - 1)).product();
    if complex_count == 0 {
        return Ok(all);
    }
    let real: Z = d
        .iter()
        .zip(is_real)
        .filter(|(_, &r)| r)
        .map(|(&x, _)| Z::from(x - 1))
        .product();
    let signed_real = if complex_count % 2 == 0 { real } else { -real };
    let doubled = all + signed_real;
    if (&doubled % Z::from(2)).is_zero() {
        Ok(doubled / Z::from(2))
    } else {
        Err(Error::InvalidArgument(
            "block size is not integral; complex factors need even degree".into(),
        ))
    }
}

/// Outcome of checking the counting identities for one degree vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma7Report {
    pub degrees: Vec<u64>,
    /// Sum of f_real over nonempty subsets; equals real_total - 1.
    pub real_sum: Q,
    /// g_real at the full set.
    pub real_total: Q,
    /// Sum of f_complex over nonempty subsets; equals complex_total - 1.
    pub complex_sum: Q,
    /// g_complex at the full set.
    pub complex_total: Q,
    /// f * 1 = g holds at every subset, both families.
    pub convolution_ok: bool,
    /// g * mu = f holds at every subset, both families.
    pub mobius_ok: bool,
}

impl Lemma7Report {
    pub fn ok(&self) -> bool {
        self.convolution_ok
            && self.mobius_ok
            && self.real_sum == self.real_total.clone() - Q::one()
            && self.complex_sum == self.complex_total.clone() - Q::one()
    }
}

/// Verify the counting identities with machine integers on doubled values
/// (every table entry of both families is a half-integer). The degrees are
/// capped so all intermediates fit i128 with room to spare.
pub fn lemma7_check(d: &[u64]) -> Result<Lemma7Report> {
    check_degrees(d)?;
    let product_bound = d
        .iter()
        .try_fold(1u128, |a, &x| a.checked_mul(x as u128))
        .filter(|&p| p <= 10u128.pow(30));
    if d.len() > 12 || product_bound.is_none() {
        return Err(Error::InvalidArgument(
            "identity check supports up to 12 degrees with product at most 10^30".into(),
        ));
    }
    let r = d.len();
    let size = 1usize << r;
    let prod = |mask: usize, off: u64| -> i128 {
        let mut acc = 1i128;
        for (i, &di) in d.iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc *= (di - off) as i128;
            }
        }
        acc
    };
    let sign = |mask: usize| -> i128 {
        if (mask.count_ones()) % 2 == 0 {
            1
        } else {
            -1
        }
    };
    // Doubled tables: 2*f and 2*g.
    let mut tables = Vec::with_capacity(4);
    let f_real: Vec<i128> = (0..size).map(|m| 2 * prod(m, 1)).collect();
    let g_real: Vec<i128> = (0..size).map(|m| 2 * prod(m, 0)).collect();
    let f_cx: Vec<i128> = (0..size)
        .map(|m| if m == 0 { 2 } else { prod(m, 1) + sign(m) })
        .collect();
    let g_cx: Vec<i128> = (0..size)
        .map(|m| if m == 0 { 2 } else { prod(m, 0) })
        .collect();
    tables.push((f_real.clone(), g_real.clone()));
    tables.push((f_cx.clone(), g_cx.clone()));

    let mut convolution_ok = true;
    let mut mobius_ok = true;
    for (f, g) in &tables {
        for mask in 0..size {
            let mut zeta = 0i128; // (f * 1)(mask)
            let mut mob = 0i128; // (g * mu)(mask)
            let mut sub = mask;
            loop {
                zeta += f[sub];
                mob += g[sub] * sign(mask & !sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
            convolution_ok &= zeta == g[mask];
            mobius_ok &= mob == f[mask];
        }
    }
    let half = |v: i128| Q::new(Z::from(v), Z::from(2));
    Ok(Lemma7Report {
        degrees: d.to_vec(),
        real_sum: half(f_real.iter().skip(1).sum()),
        real_total: half(g_real[size - 1]),
        complex_sum: half(f_cx.iter().skip(1).sum()),
        complex_total: half(g_cx[size - 1]),
        convolution_ok,
        mobius_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_integer(Z::from(n))
    }

    #[test]
    fn convolution_unit_and_inverse() {
        let d = [2u64, 3, 4];
        let f = family_f_real(&d).unwrap();
        let delta = SubsetFunction::delta(3).unwrap();
        assert_eq!(f.convolve(&delta).unwrap(), f);
        let one = SubsetFunction::one(3).unwrap();
        let mu = SubsetFunction::mobius(3).unwrap();
        assert_eq!(one.convolve(&mu).unwrap(), delta);
        // Round trip through the zeta transform.
        let g = f.convolve(&one).unwrap();
        assert_eq!(g.convolve(&mu).unwrap(), f);
    }

    #[test]
    fn families_satisfy_identities_exactly() {
        for d in [vec![2u64, 3], vec![2, 2, 3], vec![4, 6], vec![2, 4, 6, 2]] {
            let one = SubsetFunction::one(d.len()).unwrap();
            let fr = family_f_real(&d).unwrap();
            let gr = family_g_real(&d).unwrap();
            assert_eq!(fr.convolve(&one).unwrap(), gr, "real family at {d:?}");
            let fc = family_f_complex(&d).unwrap();
            let gc = family_g_complex(&d).unwrap();
            assert_eq!(fc.convolve(&one).unwrap(), gc, "complex family at {d:?}");
            assert_eq!(fr.nonempty_sum(), gr.full() - Q::one());
            assert_eq!(fc.nonempty_sum(), gc.full() - Q::one());
        }
    }

    #[test]
    fn frozen_sums() {
        // Degrees (2,3): nonempty real f-values 1, 2, 2 sum to 6 - 1.
        let rep = lemma7_check(&[2, 3]).unwrap();
        assert!(rep.ok());
        assert_eq!(rep.real_sum, q(5));
        assert_eq!(rep.real_total, q(6));
        // Complex family: 1/2*1*2 + 1/2 = 3/2 at the full set... the total
        // is half of 6.
        assert_eq!(rep.complex_total, Q::new(Z::from(6), Z::from(2)));
        assert_eq!(rep.complex_sum, rep.complex_total.clone() - Q::one());

        let rep = lemma7_check(&[2, 4, 6]).unwrap();
        assert!(rep.ok());
        assert_eq!(rep.real_total, q(48));
        assert_eq!(rep.real_sum, q(47));
        assert_eq!(rep.complex_total, q(24));
        assert_eq!(rep.complex_sum, q(23));
    }

    #[test]
    fn fast_path_matches_rational_path() {
        for d in [
            vec![2u64, 2],
            vec![3, 5],
            vec![2, 3, 4],
            vec![6, 4, 2, 3],
            vec![7, 7, 7],
        ] {
            let rep = lemma7_check(&d).unwrap();
            let one = SubsetFunction::one(d.len()).unwrap();
            let mu = SubsetFunction::mobius(d.len()).unwrap();
            for (f, g) in [
                (family_f_real(&d).unwrap(), family_g_real(&d).unwrap()),
                (family_f_complex(&d).unwrap(), family_g_complex(&d).unwrap()),
            ] {
                assert_eq!(f.convolve(&one).unwrap() == g, rep.convolution_ok);
                assert_eq!(g.convolve(&mu).unwrap() == f, rep.mobius_ok);
            }
            assert_eq!(rep.real_sum, family_f_real(&d).unwrap().nonempty_sum());
            assert_eq!(
                rep.complex_sum,
                family_f_complex(&d).unwrap().nonempty_sum()
            );
            assert!(rep.ok());
        }
    }

    #[test]
    fn exhaustive_small_degree_sweep() {
        // Every degree vector with r <= 4 and entries in [2, 10].
        for r in 1..=4usize {
            let mut d = vec![2u64; r];
            loop {
                assert!(lemma7_check(&d).unwrap().ok(), "degrees {d:?}");
                let mut i = 0;
                loop {
                    if i == r {
                        break;
                    }
                    d[i] += 1;
                    if d[i] <= 10 {
                        break;
                    }
                    d[i] = 2;
                    i += 1;
                }
                if i == r {
                    break;
                }
            }
        }
        // Spot checks higher up.
        assert!(lemma7_check(&[2, 3, 4, 5, 6, 7]).unwrap().ok());
        assert!(lemma7_check(&[10, 10, 10, 10, 10, 10]).unwrap().ok());
    }

    #[test]
    fn block_sizes() {
        // All-real levels.
        assert_eq!(predicted_block_size(&[2, 6], &[true, true]).unwrap(), Z::from(5));
        // One complex factor of degree 6 alone: (6-1)/2 + (-1/2)*1 = 2.
        assert_eq!(predicted_block_size(&[6], &[false]).unwrap(), Z::from(2));
        // Mixed real(2), complex(6): (1*5)/2 + (-1/2)*1 = 2.
        assert_eq!(
            predicted_block_size(&[2, 6], &[true, false]).unwrap(),
            Z::from(2)
        );
        // Two complex factors: sign flips back.
        assert_eq!(
            predicted_block_size(&[4, 6], &[false, false]).unwrap(),
            Z::from(8)
        );
        // Degenerate degree-1 factors contribute factor zero.
        assert_eq!(predicted_block_size(&[1, 5], &[true, true]).unwrap(), Z::zero());
        // Odd doubled value is rejected.
        assert!(predicted_block_size(&[3], &[false]).is_err());
    }

    #[test]
    fn input_validation() {
        assert!(lemma7_check(&[]).is_err());
        assert!(lemma7_check(&[0, 2]).is_err());
        assert!(lemma7_check(&vec![2; 13]).is_err());
        assert!(SubsetFunction::from_fn(0, |_| Q::one()).is_err());
        let a = SubsetFunction::one(2).unwrap();
        let b = SubsetFunction::one(3).unwrap();
        assert!(a.convolve(&b).is_err());
    }
}
