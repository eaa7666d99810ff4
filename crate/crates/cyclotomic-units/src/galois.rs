//! Arithmetic of (Z/nZ)* and of Gal(Q(zeta_n)/Q) in per-prime coordinates.
//!
//! For an odd prime power q_j the local group is cyclic and an element is
//! stored as the exponent k of sigma_j^k, where sigma_j is the smallest
//! primitive root mod q_j. For q_j = 2^e (e >= 2) the local group is
//! {+-1} x <5>; an element is a hybrid index k in [0, 2^(e-1)) encoding
//! 5^(k mod h) * (-1)^(k div h) with h = 2^(e-2). In both cases the index
//! range is [0, phi(q_j)) and complex conjugation sits at index phi(q_j)/2.
//!
//! Hybrid indices do NOT compose additively (the sign bit and the 5-part are
//! independent components); all composition goes through [`FieldSpec::local_compose`].

use crate::arith::{
    crt, dlog, factorize, phi_prime_power, pow_mod, primitive_root, two_part_compose,
    two_part_decompose,
};
use crate::{Error, Result, Z};
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePower {
    pub p: u64,
    pub e: u32,
    pub q: u64,
    pub phi: u64,
}

/// A conductor n >= 3, n != 2 (mod 4), with its prime-power factorization in
/// ascending prime order and the fixed generator conventions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub n: u64,
    pub primes: Vec<PrimePower>,
    /// Smallest primitive root mod q_j for odd p_j; unused (0) at p_j = 2.
    roots: Vec<u64>,
}

/// Element of Gal(Q(zeta_n)/Q): one local index per prime of the spec.
/// Coordinates of a restricted element (an atom's Galois part) outside its
/// level are simply ignored by the operations that take a level.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaloisElement {
    pub idx: Vec<u64>,
}

pub fn factorize_conductor(n: u64) -> Result<FieldSpec> {
    FieldSpec::new(n)
}

impl FieldSpec {
    pub fn new(n: u64) -> Result<Self> {
        if n < 3 || n % 4 == 2 {
            return Err(Error::InvalidConductor(n));
        }
        let mut primes = Vec::new();
        let mut roots = Vec::new();
        let mut factors = factorize(n);
        // Coordinates are ordered by prime-power value, not by prime.
        factors.sort_by_key(|&(p, e)| p.pow(e));
        for (p, e) in factors {
            let q = p.pow(e);
            primes.push(PrimePower {
                p,
                e,
                q,
                phi: phi_prime_power(p, e),
            });
            roots.push(if p == 2 { 0 } else { primitive_root(q)? });
        }
        Ok(FieldSpec { n, primes, roots })
    }

    pub fn r(&self) -> usize {
        self.primes.len()
    }

    pub fn phi_n(&self) -> u64 {
        self.primes.iter().map(|pp| pp.phi).product()
    }

    pub fn phi(&self, j: usize) -> u64 {
        self.primes[j].phi
    }

    /// Residue mod q_j represented by local index k.
    pub fn local_residue(&self, j: usize, k: u64) -> u64 {
        let pp = &self.primes[j];
        debug_assert!(k < pp.phi);
        if pp.p == 2 {
            let h = pp.phi / 2;
            two_part_compose((k / h) as u8, k % h, pp.e)
        } else {
            pow_mod(self.roots[j], k, pp.q)
        }
    }

    /// Local index of a unit residue mod q_j.
    pub fn local_index(&self, j: usize, u: u64) -> Result<u64> {
        let pp = &self.primes[j];
        let u = u % pp.q;
        if crate::arith::gcd(u, pp.q) != 1 {
            return Err(Error::InvalidArgument(format!(
                "{u} is not a unit mod {}",
                pp.q
            )));
        }
        if pp.p == 2 {
            let (bit, s) = two_part_decompose(u, pp.e);
            Ok(bit as u64 * (pp.phi / 2) + s)
        } else {
            dlog(self.roots[j], u, pp.q, pp.phi).ok_or_else(|| {
                Error::Internal(format!("dlog failed for {u} mod {}", pp.q))
            })
        }
    }

    pub fn local_compose(&self, j: usize, a: u64, b: u64) -> u64 {
        let pp = &self.primes[j];
        debug_assert!(a < pp.phi && b < pp.phi);
        if pp.p == 2 {
            let h = pp.phi / 2;
            let bit = (a / h + b / h) % 2;
            bit * h + (a % h + b % h) % h
        } else {
            (a + b) % pp.phi
        }
    }

    pub fn local_invert(&self, j: usize, a: u64) -> u64 {
        let pp = &self.primes[j];
        if pp.p == 2 {
            let h = pp.phi / 2;
            (a / h) * h + (h - a % h) % h
        } else {
            (pp.phi - a) % pp.phi
        }
    }

    /// J-translate of a local index: complex conjugation multiplies in the
    /// local component of index phi/2, which in both the cyclic and the
    /// hybrid encoding is index addition by phi/2 mod phi.
    pub fn local_flip(&self, j: usize, a: u64) -> u64 {
        let phi = self.primes[j].phi;
        (a + phi / 2) % phi
    }

    pub fn identity(&self) -> GaloisElement {
        GaloisElement {
            idx: vec![0; self.r()],
        }
    }

    pub fn compose(&self, g: &GaloisElement, h: &GaloisElement) -> GaloisElement {
        assert_eq!(g.idx.len(), self.r(), "element of a different field");
        assert_eq!(h.idx.len(), self.r(), "element of a different field");
        GaloisElement {
            idx: (0..self.r())
                .map(|j| self.local_compose(j, g.idx[j], h.idx[j]))
                .collect(),
        }
    }

    pub fn invert(&self, g: &GaloisElement) -> GaloisElement {
        GaloisElement {
            idx: (0..self.r())
                .map(|j| self.local_invert(j, g.idx[j]))
                .collect(),
        }
    }

    /// Complex conjugation J = J_1 ... J_r.
    pub fn conjugation(&self) -> GaloisElement {
        GaloisElement {
            idx: self.primes.iter().map(|pp| pp.phi / 2).collect(),
        }
    }

    /// The residue mod n represented by g.
    pub fn residue(&self, g: &GaloisElement) -> u64 {
        let pairs: Vec<(u64, u64)> = (0..self.r())
            .map(|j| (self.local_residue(j, g.idx[j]), self.primes[j].q))
            .collect();
        crt(&pairs)
    }

    /// Residue of g at the level n_omega = prod_{j in omega} q_j.
    pub fn residue_at_level(&self, g: &GaloisElement, omega: &[usize]) -> u64 {
        let pairs: Vec<(u64, u64)> = omega
            .iter()
            .map(|&j| (self.local_residue(j, g.idx[j]), self.primes[j].q))
            .collect();
        crt(&pairs)
    }

    pub fn from_residue(&self, u: u64) -> Result<GaloisElement> {
        if crate::arith::gcd(u % self.n, self.n) != 1 {
            return Err(Error::InvalidArgument(format!(
                "{u} is not a unit mod {}",
                self.n
            )));
        }
        let idx = (0..self.r())
            .map(|j| self.local_index(j, u % self.primes[j].q))
            .collect::<Result<Vec<_>>>()?;
        Ok(GaloisElement { idx })
    }

    pub fn n_omega(&self, omega: &[usize]) -> u64 {
        omega.iter().map(|&j| self.primes[j].q).product()
    }

    /// Frobenius of p at the level indexed by `omega`: the element acting as
    /// zeta -> zeta^p on the n_omega-th roots of unity. Coordinates outside
    /// `omega` are 0 and carry no meaning. Requires p coprime to n_omega.
    pub fn frobenius(&self, p: u64, omega: &[usize]) -> Result<GaloisElement> {
        let mut idx = vec![0u64; self.r()];
        for &j in omega {
            if p % self.primes[j].p == 0 {
                return Err(Error::InvalidArgument(format!(
                    "frobenius: {p} divides the level (prime {})",
                    self.primes[j].p
                )));
            }
            idx[j] = self.local_index(j, p % self.primes[j].q)?;
        }
        Ok(GaloisElement { idx })
    }
}

/// Finite Z-linear combination of Galois elements, kept sorted and free of
/// zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GroupRingElement {
    pub terms: Vec<(Z, GaloisElement)>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        GroupRingElement { terms: Vec::new() }
    }

    pub fn identity(spec: &FieldSpec) -> Self {
        GroupRingElement {
            terms: vec![(Z::one(), spec.identity())],
        }
    }

    pub fn single(g: GaloisElement) -> Self {
        GroupRingElement {
            terms: vec![(Z::one(), g)],
        }
    }

    pub fn from_terms(terms: Vec<(Z, GaloisElement)>) -> Self {
        let mut out = GroupRingElement { terms };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        self.terms.sort_by(|a, b| a.1.cmp(&b.1));
        let mut merged: Vec<(Z, GaloisElement)> = Vec::with_capacity(self.terms.len());
        for (c, g) in self.terms.drain(..) {
            match merged.last_mut() {
                Some((lc, lg)) if *lg == g => *lc += c,
                _ => merged.push((c, g)),
            }
        }
        merged.retain(|(c, _)| !c.is_zero());
        self.terms = merged;
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::from_terms(terms)
    }

    pub fn scale(&self, k: &Z) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(c, g)| (c * k, g.clone()))
                .collect(),
        )
    }

    /// Composition product (the group-ring multiplication).
    pub fn mul(&self, spec: &FieldSpec, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (c1, g1) in &self.terms {
            for (c2, g2) in &other.terms {
                terms.push((c1 * c2, spec.compose(g1, g2)));
            }
        }
        Self::from_terms(terms)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Subgroup input for [`norm_element`]: either a generating set (closure is
/// taken) or an explicit element list (closure is verified).
pub enum SubgroupDesc {
    Generated(Vec<GaloisElement>),
    Elements(Vec<GaloisElement>),
}

/// Closure of a generating set inside Gal(Q(zeta_n)/Q).
pub fn subgroup_closure(spec: &FieldSpec, gens: &[GaloisElement]) -> Vec<GaloisElement> {
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(spec.identity());
    let mut frontier = vec![spec.identity()];
    while let Some(g) = frontier.pop() {
        for gen in gens {
            let h = spec.compose(&g, gen);
            if seen.insert(h.clone()) {
                frontier.push(h);
            }
        }
    }
    seen.into_iter().collect()
}

/// Sum of all elements of the described subgroup, each with coefficient 1.
pub fn norm_element(sub: &SubgroupDesc, spec: &FieldSpec) -> Result<GroupRingElement> {
    let elements = match sub {
        SubgroupDesc::Generated(gens) => subgroup_closure(spec, gens),
        SubgroupDesc::Elements(els) => {
            let set: std::collections::BTreeSet<_> = els.iter().cloned().collect();
            if set.len() != els.len() {
                return Err(Error::InvalidArgument(
                    "subgroup element list has duplicates".into(),
                ));
            }
            if !set.contains(&spec.identity()) {
                return Err(Error::InvalidArgument(
                    "subgroup must contain the identity".into(),
                ));
            }
            for a in &set {
                for b in &set {
                    if !set.contains(&spec.compose(a, b)) {
                        return Err(Error::InvalidArgument(format!(
                            "element list is not closed under composition: {:?} * {:?}",
                            a.idx, b.idx
                        )));
                    }
                }
            }
            set.into_iter().collect()
        }
    };
    Ok(GroupRingElement::from_terms(
        elements.into_iter().map(|g| (Z::one(), g)).collect(),
    ))
}

/// A subgroup of the local group at prime index j, as a sorted list of local
/// indices. Always contains 0 and is closed under local composition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSubgroup {
    pub j: usize,
    pub elements: Vec<u64>,
}

impl FieldSpec {
    pub fn local_subgroup_closure(&self, j: usize, gens: &[u64]) -> LocalSubgroup {
        let mut seen = std::collections::BTreeSet::new();
        seen.insert(0u64);
        let mut frontier = vec![0u64];
        while let Some(a) = frontier.pop() {
            for &g in gens {
                let b = self.local_compose(j, a, g);
                if seen.insert(b) {
                    frontier.push(b);
                }
            }
        }
        LocalSubgroup {
            j,
            elements: seen.into_iter().collect(),
        }
    }

    /// All subgroups of the local group at j with the given order. The local
    /// group is abelian of rank <= 2, so closures of index pairs exhaust the
    /// subgroup lattice.
    pub fn local_subgroups_of_order(&self, j: usize, order: u64) -> Vec<LocalSubgroup> {
        let phi = self.primes[j].phi;
        let mut out: Vec<LocalSubgroup> = Vec::new();
        let push = |s: LocalSubgroup, out: &mut Vec<LocalSubgroup>| {
            if s.elements.len() as u64 == order && !out.contains(&s) {
                out.push(s);
            }
        };
        for a in 0..phi {
            for b in a..phi {
                let s = self.local_subgroup_closure(j, &[a, b]);
                push(s, &mut out);
            }
        }
        out.sort_by(|x, y| x.elements.cmp(&y.elements));
        out
    }
}
