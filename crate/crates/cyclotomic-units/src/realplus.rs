//! Bases for the real-plus unit group: absolute values of cyclotomic units,
//! singly or in paired products, projected to integer coordinates over the
//! Gold-Kim basis.

use crate::galois::FieldSpec;
use crate::goldkim::{Decomposer, ExponentVector, GKBasis, GKIndex};
use crate::hp::{self, Cx, Fx};
use crate::symbols::{self, UnitSymbol};
use crate::{Error, Result, Z};

/// How a real generator is assembled from unit symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealKind {
    /// |xi| for a singleton-level basis element.
    Type0,
    /// |x| for an order-1 element (even conductors, odd-level tuples).
    Type1,
    /// |x_1| |x| with the shared order-2 multiplier x_1.
    Type2,
}

impl RealKind {
    pub fn tag(self) -> &'static str {
        match self {
            RealKind::Type0 => "type 0",
            RealKind::Type1 => "type 1",
            RealKind::Type2 => "type 2",
        }
    }
}

/// A generator of the real-plus group, kept as its constituent symbols plus
/// the projection to basis coordinates. Modulo roots of unity the product
/// of the parts carries the same information as the absolute values, so all
/// lattice checks run on `gk_image`; numeric checks embed the parts.
#[derive(Clone, Debug)]
pub struct RealGenerator {
    pub kind: RealKind,
    /// One symbol, or multiplier then body for paired generators.
    pub parts: Vec<UnitSymbol>,
    /// Sum of the decompositions of the parts.
    pub gk_image: ExponentVector,
    /// The basis element this generator is built around.
    pub label: GKIndex,
}

impl RealGenerator {
    pub fn projection(&self) -> &ExponentVector {
        &self.gk_image
    }

    /// Product of the parts; its log embedding equals the log embedding of
    /// the real generator itself.
    pub fn product(&self) -> UnitSymbol {
        self.parts
            .iter()
            .fold(UnitSymbol::one(), |acc, p| acc.mul(p))
    }
}

#[derive(Clone, Debug)]
pub struct RealPlusBasis {
    pub basis: GKBasis,
    pub generators: Vec<RealGenerator>,
    /// Shared order-2 multiplier of the paired generators, when any exist.
    pub multiplier: Option<GKIndex>,
}

/// Multiplicative order of x modulo the roots of unity times the real
/// subgroup: 1 when x / |x| is a root of unity of the ambient field, else 2.
/// Evaluated at the identity embedding; precision escalates through a
/// doubling ladder before giving up.
pub fn hasse_order(spec: &FieldSpec, x: &UnitSymbol, bits: u32) -> Result<u8> {
    if !symbols::is_unit(x) {
        return Err(Error::NotUnit("order classification needs a unit".into()));
    }
    // Largest root-of-unity order in the field.
    let m = if spec.n % 2 == 1 { 2 * spec.n } else { spec.n };
    let mut b = bits.max(hp::DEFAULT_BITS);
    loop {
        let u = crate::verify::numeric_value(spec, x, 1, b)?;
        let a = u.abs()?;
        if a.to_f64() < 1e-300 {
            return Err(Error::Precision("unit evaluated to zero".into()));
        }
        let inv = Fx::one(b).div(&a)?;
        let z = Cx::new(u.re.mul(&inv), u.im.mul(&inv));
        let w = z.pow_z(&Z::from(m))?;
        let one = Cx::one(b);
        let d_plus = w.sub(&one).abs2().to_f64();
        let d_minus = w.add(&one).abs2().to_f64();
        if d_plus <= 1e-12 {
            return Ok(1);
        }
        if d_minus <= 1e-12 {
            return Ok(2);
        }
        if b >= hp::MAX_BITS {
            return Err(Error::Precision(format!(
                "order classification inconclusive at {b} bits (distances {:.3e}, {:.3e})",
                d_plus.sqrt(),
                d_minus.sqrt()
            )));
        }
        b = (b * 2).min(hp::MAX_BITS);
    }
}

/// First basis element of order 2 in enumeration order; the shared
/// multiplier of all paired generators.
fn find_multiplier(dec: &Decomposer, bits: u32) -> Result<Option<GKIndex>> {
    let spec = &dec.basis.spec;
    for ix in &dec.basis.indices {
        if hasse_order(spec, &ix.symbol(spec), bits)? == 2 {
            return Ok(Some(ix.clone()));
        }
    }
    Ok(None)
}

/// Build the real-plus basis over conductor n. Singleton elements
/// contribute their absolute values directly. For odd composite n every
/// non-singleton element is paired with the multiplier. For even n only the
/// tuples whose level contains the even prime power are paired; the others
/// stand alone. Prime powers need no pairs at all.
pub fn real_basis(n: u64, bits: u32) -> Result<RealPlusBasis> {
    let mut dec = Decomposer::new(n)?;
    let spec = dec.basis.spec.clone();
    let r = spec.primes.len();
    let even_pos = spec.primes.iter().position(|pp| pp.p == 2);
    let needs_pair = |ix: &GKIndex| -> bool {
        let GKIndex::Tuple(a) = ix else { return false };
        if r == 1 {
            return false;
        }
        match even_pos {
            // Odd conductor: every non-singleton element is paired.
            None => true,
            Some(pos) => a.omega.contains(&pos),
        }
    };
    let any_pair = dec.basis.indices.iter().any(&needs_pair);
    let multiplier = if any_pair {
        let found = find_multiplier(&dec, bits)?;
        if found.is_none() {
            return Err(Error::Internal(
                "no order-2 basis element available as multiplier".into(),
            ));
        }
        found
    } else {
        None
    };
    let mult_image = match &multiplier {
        Some(ix) => Some((ix.symbol(&spec), dec.decompose(&ix.symbol(&spec))?)),
        None => None,
    };
    let mut generators = Vec::with_capacity(dec.basis.len());
    for i in 0..dec.basis.len() {
        let ix = dec.basis.indices[i].clone();
        let sym = ix.symbol(&spec);
        let own = dec.decompose(&sym)?;
        let gen = if let GKIndex::Xi { .. } = ix {
            RealGenerator {
                kind: RealKind::Type0,
                parts: vec![sym],
                gk_image: own,
                label: ix,
            }
        } else if needs_pair(&ix) {
            let (mult_sym, mult_vec) = mult_image.as_ref().expect("pair without multiplier");
            let mut image = mult_vec.clone();
            image.add_scaled(&own, &Z::from(1));
            RealGenerator {
                kind: RealKind::Type2,
                parts: vec![mult_sym.clone(), sym],
                gk_image: image,
                label: ix,
            }
        } else {
            RealGenerator {
                kind: RealKind::Type1,
                parts: vec![sym],
                gk_image: own,
                label: ix,
            }
        };
        generators.push(gen);
    }
    Ok(RealPlusBasis {
        basis: dec.basis,
        generators,
        multiplier,
    })
}

/// Elementary divisors of the projected sublattice inside the basis
/// lattice: all ones for prime powers, a single trailing 2 otherwise.
pub fn expected_divisors(spec: &FieldSpec, count: usize) -> Vec<Z> {
    let mut d = vec![Z::from(1); count];
    if spec.primes.len() > 1 {
        if let Some(last) = d.last_mut() {
            *last = Z::from(2);
        }
    }
    d
}
