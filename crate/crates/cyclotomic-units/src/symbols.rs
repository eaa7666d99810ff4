//! The multiplicative algebra of cyclotomic-unit symbols modulo roots of
//! unity.
//!
//! An [`Atom`] stands for the class of `1 - zeta^g` at a level
//! `n_omega = prod_{j in omega} q_j`, where `g` is a restricted Galois
//! element stored as one local index per level position. Since
//! `1 - zeta^a = -zeta^a (1 - zeta^(-a))`, an atom and its conjugate differ
//! by a root of unity; we fix the representative whose index tuple is
//! smaller in inverse-lexicographic order (last coordinate compared first).
//! That choice is stable on every index shape the basis constructions emit.
//!
//! A [`UnitSymbol`] is a finite product of atom powers, stored additively as
//! a sparse exponent map.

use crate::galois::{FieldSpec, GaloisElement, GroupRingElement};
use crate::{Error, Result, Z};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Canonical representative of {(omega, g), (omega, Jg)}.
///
/// `omega` holds ascending prime indices of the ambient [`FieldSpec`];
/// `tuple[i]` is the local index at prime `omega[i]`. Construct through
/// [`canonicalize_atom`] so the J-flip invariant holds.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub omega: Vec<usize>,
    pub tuple: Vec<u64>,
}

impl Atom {
    pub fn level(&self) -> usize {
        self.omega.len()
    }
}

/// Compare two index tuples of equal length from the last coordinate
/// backwards (inverse-lexicographic with the natural per-coordinate order).
pub fn inverse_lex(a: &[u64], b: &[u64]) -> std::cmp::Ordering {
    debug_assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

/// The representative of {(omega, tuple), (omega, J*tuple)} with the
/// inverse-lexicographically smaller tuple. Idempotent.
pub fn canonicalize_atom(spec: &FieldSpec, omega: &[usize], tuple: &[u64]) -> Result<Atom> {
    if omega.is_empty() {
        return Err(Error::InvalidArgument("atom level must be nonempty".into()));
    }
    if omega.windows(2).any(|w| w[0] >= w[1]) || *omega.last().unwrap() >= spec.r() {
        return Err(Error::InvalidArgument(format!(
            "level {omega:?} is not an ascending list of prime indices"
        )));
    }
    if tuple.len() != omega.len() {
        return Err(Error::InvalidArgument(
            "tuple length does not match level size".into(),
        ));
    }
    let tuple: Vec<u64> = omega
        .iter()
        .zip(tuple)
        .map(|(&j, &a)| a % spec.phi(j))
        .collect();
    let flipped: Vec<u64> = omega
        .iter()
        .zip(&tuple)
        .map(|(&j, &a)| spec.local_flip(j, a))
        .collect();
    let chosen = match inverse_lex(&tuple, &flipped) {
        std::cmp::Ordering::Greater => flipped,
        _ => tuple,
    };
    Ok(Atom {
        omega: omega.to_vec(),
        tuple: chosen,
    })
}

/// Formal product of atom powers modulo roots of unity.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UnitSymbol {
    pub terms: BTreeMap<Atom, Z>,
}

impl UnitSymbol {
    pub fn one() -> Self {
        UnitSymbol::default()
    }

    pub fn atom(a: Atom) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(a, Z::from(1));
        UnitSymbol { terms }
    }

    pub fn is_one(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, a: Atom, e: Z) {
        if e.is_zero() {
            return;
        }
        match self.terms.entry(a) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += e;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(e);
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, e) in &other.terms {
            out.insert(a.clone(), e.clone());
        }
        out
    }

    pub fn pow(&self, k: i64) -> Self {
        self.pow_big(&Z::from(k))
    }

    pub fn pow_big(&self, k: &Z) -> Self {
        if k.is_zero() {
            return UnitSymbol::one();
        }
        UnitSymbol {
            terms: self
                .terms
                .iter()
                .map(|(a, e)| (a.clone(), e * k))
                .collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }
}

/// Apply a group-ring element to a symbol: each atom (omega, g) with
/// exponent e contributes, for every term (c, h) of u, the canonicalized
/// atom (omega, h*g) with exponent c*e.
pub fn galois_act(spec: &FieldSpec, u: &GroupRingElement, x: &UnitSymbol) -> UnitSymbol {
    let mut out = UnitSymbol::one();
    for (c, h) in &u.terms {
        for (a, e) in &x.terms {
            let tuple: Vec<u64> = a
                .omega
                .iter()
                .zip(&a.tuple)
                .map(|(&j, &t)| spec.local_compose(j, h.idx[j], t))
                .collect();
            let shifted = canonicalize_atom(spec, &a.omega, &tuple)
                .expect("action preserves level validity");
            out.insert(shifted, c * e);
        }
    }
    out
}

/// Convenience: act by a single Galois element.
pub fn galois_act_element(spec: &FieldSpec, g: &GaloisElement, x: &UnitSymbol) -> UnitSymbol {
    galois_act(spec, &GroupRingElement::single(g.clone()), x)
}

/// Behavior of [`norm_relation_expand`] on an atom whose j-coordinate is
/// already nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpandMode {
    /// Reject with an error.
    Strict,
    /// Return the atom itself, untouched.
    Passthrough,
}

/// The level-lowering relation at a level of size >= 2: sweeping the local
/// coordinate at prime j over its full range,
///
/// sum_{c mod phi(q_j)} (omega, tuple[j := c])  =  (1 - Frob(p_j)^(-1)) (omega\{j}, tuple|),
///
/// an exact identity of the underlying complex numbers. Returns the pair
/// (left-hand sweep, right-hand side) as symbols.
pub fn norm_relation(spec: &FieldSpec, a: &Atom, j: usize) -> Result<(UnitSymbol, UnitSymbol)> {
    let pos = a
        .omega
        .iter()
        .position(|&i| i == j)
        .ok_or_else(|| Error::InvalidArgument(format!("prime index {j} not in level")))?;
    if a.level() < 2 {
        return Err(Error::InvalidArgument(
            "norm relation needs a level of size >= 2".into(),
        ));
    }
    let mut lhs = UnitSymbol::one();
    for c in 0..spec.phi(j) {
        let mut tuple = a.tuple.clone();
        tuple[pos] = c;
        lhs = lhs.mul(&UnitSymbol::atom(canonicalize_atom(spec, &a.omega, &tuple)?));
    }
    let sub_omega: Vec<usize> = a.omega.iter().copied().filter(|&i| i != j).collect();
    let sub_tuple: Vec<u64> = a
        .omega
        .iter()
        .zip(&a.tuple)
        .filter(|(&i, _)| i != j)
        .map(|(_, &t)| t)
        .collect();
    let lower = UnitSymbol::atom(canonicalize_atom(spec, &sub_omega, &sub_tuple)?);
    let frob = spec.frobenius(spec.primes[j].p, &sub_omega)?;
    let op = GroupRingElement::from_terms(vec![
        (Z::from(1), spec.identity()),
        (Z::from(-1), spec.invert(&frob)),
    ]);
    Ok((lhs, galois_act(spec, &op, &lower)))
}

/// Expresses an atom whose coordinate at prime j is zero through lower-level
/// atoms and same-level atoms with nonzero j-coordinate, by solving the
/// relation of [`norm_relation`] for the zero-coordinate term.
pub fn norm_relation_expand(
    spec: &FieldSpec,
    a: &Atom,
    j: usize,
    mode: ExpandMode,
) -> Result<UnitSymbol> {
    let pos = a
        .omega
        .iter()
        .position(|&i| i == j)
        .ok_or_else(|| Error::InvalidArgument(format!("prime index {j} not in level")))?;
    if a.tuple[pos] != 0 {
        return match mode {
            ExpandMode::Strict => Err(Error::InvalidArgument(format!(
                "coordinate at prime index {j} is nonzero"
            ))),
            ExpandMode::Passthrough => Ok(UnitSymbol::atom(a.clone())),
        };
    }
    let (lhs, rhs) = norm_relation(spec, a, j)?;
    // rhs - (lhs - a)
    Ok(rhs.mul(&lhs.inverse()).mul(&UnitSymbol::atom(a.clone())))
}

/// A symbol is a unit iff at every singleton level the exponents sum to
/// zero; atoms at levels of size >= 2 are units of the ring of integers.
pub fn is_unit(x: &UnitSymbol) -> bool {
    let mut singleton_sums: BTreeMap<usize, Z> = BTreeMap::new();
    for (a, e) in &x.terms {
        if a.level() == 1 {
            *singleton_sums.entry(a.omega[0]).or_insert_with(Z::zero) += e;
        }
    }
    singleton_sums.values().all(|s| s.is_zero())
}

impl std::fmt::Display for UnitSymbol {
    /// Canonical text form: terms `(<omega-csv>;<tuple-csv>)^<exp>` joined
    /// by ` * `, prime indices 1-based, the empty product printed as `1`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        for (a, e) in &self.terms {
            if !first {
                f.write_str(" * ")?;
            }
            first = false;
            let omega = a
                .omega
                .iter()
                .map(|j| (j + 1).to_string())
                .collect::<Vec<_>>()
                .join(",");
            let tuple = a
                .tuple
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(",");
            write!(f, "({omega};{tuple})^{e}")?;
        }
        Ok(())
    }
}

/// Parse the canonical text form produced by `Display`. Whitespace around
/// `*` is tolerated; atoms are canonicalized on the way in.
pub fn parse_symbol(spec: &FieldSpec, text: &str) -> Result<UnitSymbol> {
    let text = text.trim();
    if text == "1" {
        return Ok(UnitSymbol::one());
    }
    let mut out = UnitSymbol::one();
    for part in text.split('*') {
        let part = part.trim();
        let inner = part
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected '(' in term `{part}`")))?;
        let (head, expo) = inner
            .split_once(")^")
            .ok_or_else(|| Error::Parse(format!("expected `)^<exp>` in term `{part}`")))?;
        let (omega_csv, tuple_csv) = head
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("expected ';' in term `{part}`")))?;
        let omega = omega_csv
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad prime index `{s}`")))
                    .and_then(|v| {
                        if v == 0 || v > spec.r() {
                            Err(Error::Parse(format!(
                                "prime index {v} out of range 1..={}",
                                spec.r()
                            )))
                        } else {
                            Ok(v - 1)
                        }
                    })
            })
            .collect::<Result<Vec<usize>>>()?;
        let tuple = tuple_csv
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad tuple entry `{s}`")))
            })
            .collect::<Result<Vec<u64>>>()?;
        let e = expo
            .trim()
            .parse::<i64>()
            .map_err(|_| Error::Parse(format!("bad exponent `{expo}`")))?;
        let atom = canonicalize_atom(spec, &omega, &tuple).map_err(|err| match err {
            Error::InvalidArgument(m) => Error::Parse(m),
            other => other,
        })?;
        out = out.mul(&UnitSymbol::atom(atom).pow(e));
    }
    Ok(out)
}

/// Human-oriented one-line description of a symbol (level sets shown with
/// their prime powers). Used by CLI listings.
pub fn describe_symbol(spec: &FieldSpec, x: &UnitSymbol) -> String {
    let mut s = String::new();
    let _ = write!(s, "{x}");
    if !x.terms.is_empty() {
        let levels: std::collections::BTreeSet<u64> = x
            .terms
            .keys()
            .map(|a| spec.n_omega(&a.omega))
            .collect();
        let lv = levels
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let _ = write!(s, "   [levels {lv}]");
    }
    s
}
