//! Bases for composita of prime-power-conductor subfields: one subfield per
//! ramified prime, each of full local conductor. Generators are norms of
//! atoms swept by Galois shifts, indexed by explicit tuple sets, and each
//! carries a designated basis label used for triangularity verification.

use crate::galois::{FieldSpec, GaloisElement, GroupRingElement};
use crate::goldkim::{tuple_order, GKBasis, GKIndex};
use crate::subset::predicted_block_size;
use crate::symbols::{canonicalize_atom, galois_act, UnitSymbol};
use crate::{Error, Result, Z};

/// Largest number of atoms allowed in a single norm expansion.
const MAX_NORM_TERMS: u64 = 1 << 20;

/// One prime-power factor of the field: its degree, its fixing subgroup in
/// local indices, and the derived classification.
#[derive(Clone, Debug)]
pub struct FactorInfo {
    /// Index into the conductor's prime list.
    pub orig: usize,
    pub q: u64,
    pub p: u64,
    pub phi: u64,
    pub d: u64,
    /// Degree of the maximal real subfield.
    pub d_tilde: u64,
    pub real: bool,
    /// Fixing subgroup as sorted local indices, always containing 0.
    pub subgroup: Vec<u64>,
}

/// A validated compositum: factors reordered with real fields first, the
/// original prime order kept through `orig`.
#[derive(Clone, Debug)]
pub struct SubfieldSpec {
    pub spec: FieldSpec,
    /// Real factors first, each group in ascending conductor order.
    pub factors: Vec<FactorInfo>,
    /// Number of real factors.
    pub treal: usize,
    pub degree: u64,
    /// Unit rank r1 + r2 - 1.
    pub rank: u64,
    pub totally_real: bool,
}

/// Which construction produced a generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenKind {
    /// Folded singleton-level ratio, index a.
    Singleton { a: u64 },
    /// Shifted norm of the joint real-level element.
    AllReal,
    /// Shifted full norm with tuple class k.
    Class { k: usize },
}

#[derive(Clone, Debug)]
pub struct DeployedGenerator {
    /// Level as original ascending prime indices.
    pub omega: Vec<usize>,
    /// Level as positions into the reordered factor list.
    pub omega_sorted: Vec<usize>,
    pub kind: GenKind,
    /// Defining tuple in reordered-position order (unreduced), or the
    /// single index for singleton levels.
    pub shift: Vec<u64>,
    pub symbol: UnitSymbol,
    pub correspond: GKIndex,
}

#[derive(Clone, Debug)]
pub struct DeployedBasis {
    pub sub: SubfieldSpec,
    pub gk: GKBasis,
    /// Sorted by tuple order on the designated labels.
    pub generators: Vec<DeployedGenerator>,
}

fn vp(mut x: u64, p: u64) -> u32 {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Validate degrees (and the optional subgroup selector for an even prime
/// power) into a SubfieldSpec. Every factor must have full local conductor.
pub fn validate_spec(
    n: u64,
    degrees: &[u64],
    two_subgroup: Option<&[u64]>,
) -> Result<SubfieldSpec> {
    let spec = FieldSpec::new(n)?;
    let r = spec.primes.len();
    if degrees.len() != r {
        return Err(Error::InvalidArgument(format!(
            "expected {r} degrees for conductor {n}, got {}",
            degrees.len()
        )));
    }
    let mut factors = Vec::with_capacity(r);
    for (j, (&d, pp)) in degrees.iter().zip(&spec.primes).enumerate() {
        if d == 0 || pp.phi % d != 0 {
            return Err(Error::InvalidArgument(format!(
                "degree {d} does not divide {} at prime power {}",
                pp.phi, pp.q
            )));
        }
        let order = pp.phi / d;
        let subgroup = if pp.p != 2 {
            if pp.e == 1 {
                if d == 1 {
                    return Err(Error::InvalidArgument(format!(
                        "degree 1 factor has conductor 1, not {}",
                        pp.q
                    )));
                }
            } else if vp(d, pp.p) != pp.e - 1 {
                return Err(Error::InvalidArgument(format!(
                    "the degree-{d} subfield of conductor {} lies in a smaller cyclotomic field",
                    pp.q
                )));
            }
            // Cyclic local group: the unique subgroup of the right order.
            spec.local_subgroup_closure(j, &[d % pp.phi]).elements
        } else {
            let kernel = spec.local_index(j, 1 + pp.q / 2)?;
            let mut cands: Vec<Vec<u64>> = spec
                .local_subgroups_of_order(j, order)
                .into_iter()
                .map(|s| s.elements)
                .filter(|els| !els.contains(&kernel))
                .collect();
            if let Some(sel) = two_subgroup {
                let mut idxs = Vec::new();
                for &res in sel {
                    idxs.push(spec.local_index(j, res % pp.q)?);
                }
                cands.retain(|els| idxs.iter().all(|i| els.contains(i)));
            }
            match cands.len() {
                0 => {
                    return Err(Error::InvalidArgument(format!(
                        "no degree-{d} subfield of full conductor {} matches the request",
                        pp.q
                    )))
                }
                1 => cands.pop().unwrap(),
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "several degree-{d} subfields of conductor {}; pass --two-subgroup",
                        pp.q
                    )))
                }
            }
        };
        let real = subgroup.contains(&(pp.phi / 2));
        if !real && d % 2 != 0 {
            return Err(Error::Internal(format!(
                "non-real factor of odd degree {d} at conductor {}",
                pp.q
            )));
        }
        factors.push(FactorInfo {
            orig: j,
            q: pp.q,
            p: pp.p,
            phi: pp.phi,
            d,
            d_tilde: if real { d } else { d / 2 },
            real,
            subgroup,
        });
    }
    // Real factors first; stable, so conductors stay ascending per group.
    factors.sort_by_key(|f| !f.real);
    let treal = factors.iter().filter(|f| f.real).count();
    let mut degree = 1u64;
    for f in &factors {
        degree = degree
            .checked_mul(f.d)
            .filter(|&x| x <= 1 << 32)
            .ok_or_else(|| Error::Unsupported("field degree too large".into()))?;
    }
    let totally_real = treal == r;
    let rank = if totally_real { degree - 1 } else { degree / 2 - 1 };
    Ok(SubfieldSpec {
        spec,
        factors,
        treal,
        degree,
        rank,
        totally_real,
    })
}

/// Coset representatives of conjugation inside H * <J>: sweep ascending,
/// skip elements whose flip partner is already taken.
fn conj_coset_reps(spec: &FieldSpec, f: &FactorInfo) -> Vec<u64> {
    let mut all = std::collections::BTreeSet::new();
    for &h in &f.subgroup {
        all.insert(h);
        all.insert(spec.local_flip(f.orig, h));
    }
    let mut reps = Vec::new();
    let mut taken = std::collections::BTreeSet::new();
    for &h in &all {
        if !taken.contains(&h) {
            reps.push(h);
            taken.insert(h);
            taken.insert(spec.local_flip(f.orig, h));
        }
    }
    reps
}

/// Group-ring sum over a product of per-factor local element lists.
fn product_sum(
    spec: &FieldSpec,
    parts: &[(usize, &[u64])],
) -> Result<GroupRingElement> {
    let mut size = 1u64;
    for (_, els) in parts {
        size = size
            .checked_mul(els.len() as u64)
            .filter(|&x| x <= MAX_NORM_TERMS)
            .ok_or_else(|| Error::Unsupported("norm expansion too large".into()))?;
    }
    let mut acc = GroupRingElement::identity(spec);
    for &(orig, els) in parts {
        let terms: Vec<(Z, GaloisElement)> = els
            .iter()
            .map(|&h| {
                let mut g = spec.identity();
                g.idx[orig] = h;
                (Z::from(1), g)
            })
            .collect();
        acc = acc.mul(spec, &GroupRingElement::from_terms(terms));
    }
    Ok(acc)
}

/// The joint-level real element for an all-real level: the atom at the
/// identity, swept by conjugations at all positions but the last and by
/// Galois transversals of every factor.
pub fn e_symbol(sub: &SubfieldSpec, omega_sorted: &[usize]) -> Result<UnitSymbol> {
    let spec = &sub.spec;
    if omega_sorted.len() < 2 {
        return Err(Error::InvalidArgument(
            "joint-level element needs at least two factors".into(),
        ));
    }
    if omega_sorted.iter().any(|&p| !sub.factors[p].real) {
        return Err(Error::InvalidArgument(
            "joint-level element requires all factors real".into(),
        ));
    }
    let mut origs: Vec<usize> = omega_sorted.iter().map(|&p| sub.factors[p].orig).collect();
    origs.sort_unstable();
    let last_orig = *origs.last().unwrap();
    let mut parts: Vec<(usize, Vec<u64>)> = Vec::new();
    for &pos in omega_sorted {
        let f = &sub.factors[pos];
        let reps = conj_coset_reps(spec, f);
        parts.push((f.orig, reps));
        if f.orig != last_orig {
            let jflip = spec.local_flip(f.orig, 0);
            parts.push((f.orig, vec![0, jflip]));
        }
    }
    let borrowed: Vec<(usize, &[u64])> =
        parts.iter().map(|(o, v)| (*o, v.as_slice())).collect();
    let norm = product_sum(spec, &borrowed)?;
    let zeros = vec![0u64; origs.len()];
    let base = UnitSymbol::atom(canonicalize_atom(spec, &origs, &zeros)?);
    Ok(galois_act(spec, &norm, &base))
}

/// Indicator of even integers.
fn even(x: usize) -> u64 {
    if x % 2 == 0 {
        1
    } else {
        0
    }
}

/// The tuple sets indexing shifted-norm generators at a level with at least
/// one non-real factor. Tuples are in reordered-position order and kept
/// unreduced; entries are local indices after reduction mod phi.
pub fn enumerate_x(
    sub: &SubfieldSpec,
    omega_sorted: &[usize],
    k: usize,
) -> Result<Vec<Vec<u64>>> {
    let s = omega_sorted.len();
    let f = |j: usize| &sub.factors[omega_sorted[j]];
    if s < 2 || f(s - 1).real {
        return Err(Error::InvalidArgument(
            "tuple classes need a level whose last factor is non-real".into(),
        ));
    }
    let t = (0..s).take_while(|&j| f(j).real).count() + 1;
    if (1..s).any(|j| f(j).real && !f(j - 1).real) {
        return Err(Error::Internal("level factors not ordered real-first".into()));
    }
    let legal = legal_k_range(sub, omega_sorted)?;
    if !legal.contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "class {k} is not legal at this level (allowed {legal:?})"
        )));
    }
    // Per-position inclusive-exclusive bounds, or a pinned value.
    let mut out: Vec<Vec<u64>> = vec![Vec::new()];
    let extend = |tuples: Vec<Vec<u64>>, lo: u64, hi: u64| -> Vec<Vec<u64>> {
        let mut next = Vec::new();
        for tpl in tuples {
            for v in lo + 1..hi {
                let mut t2 = tpl.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        next
    };
    let pin = |tuples: Vec<Vec<u64>>, v: u64| -> Vec<Vec<u64>> {
        tuples
            .into_iter()
            .map(|mut t| {
                t.push(v);
                t
            })
            .collect()
    };
    if k == 0 {
        for j in 0..s {
            let fj = f(j);
            out = pin(out, fj.d / 2 + even(s - 1 - j) * fj.phi / 2);
        }
    } else if k == s {
        for j in 0..s {
            let fj = f(j);
            let hi = if j == s - 1 { fj.d / 2 } else { fj.d };
            out = extend(out, 0, hi);
        }
    } else if k == t - 1 {
        let shift = even(s - k);
        for j in 0..s {
            let fj = f(j);
            if j < t - 1 {
                let base = shift * fj.phi / 2;
                out = extend(out, base, fj.d + base);
            } else {
                out = pin(out, fj.d / 2 + even(s - 1 - j) * fj.phi / 2);
            }
        }
    } else {
        // t <= k < s.
        let shift = even(s - k);
        for j in 0..s {
            let fj = f(j);
            let base = shift * fj.phi / 2;
            if j < k - 1 {
                out = extend(out, base, fj.d + base);
            } else if j == k - 1 {
                out = extend(out, base, fj.d / 2 + base);
            } else {
                out = pin(out, fj.d / 2 + even(s - 1 - j) * fj.phi / 2);
            }
        }
    }
    Ok(out)
}

/// Legal class indices for a level with a non-real tail.
pub fn legal_k_range(sub: &SubfieldSpec, omega_sorted: &[usize]) -> Result<Vec<usize>> {
    let s = omega_sorted.len();
    let f = |j: usize| &sub.factors[omega_sorted[j]];
    if s < 2 || f(s - 1).real {
        return Err(Error::InvalidArgument(
            "tuple classes need a level whose last factor is non-real".into(),
        ));
    }
    let nreal = (0..s).take_while(|&j| f(j).real).count();
    let ncomplex = s - nreal;
    let t = nreal + 1;
    Ok(if nreal == 0 {
        if s % 2 == 0 {
            (0..=s).collect()
        } else {
            (1..=s).collect()
        }
    } else if ncomplex % 2 == 0 {
        (t - 1..=s).collect()
    } else {
        (t..=s).collect()
    })
}

/// Map a tuple in reordered-position order to a canonical atom over the
/// original ascending prime indices.
fn atom_from_sorted(
    sub: &SubfieldSpec,
    omega_sorted: &[usize],
    values: &[u64],
) -> Result<crate::symbols::Atom> {
    let mut pairs: Vec<(usize, u64)> = omega_sorted
        .iter()
        .zip(values)
        .map(|(&pos, &v)| {
            let f = &sub.factors[pos];
            (f.orig, v % f.phi)
        })
        .collect();
    pairs.sort_unstable_by_key(|&(o, _)| o);
    let omega: Vec<usize> = pairs.iter().map(|&(o, _)| o).collect();
    let tuple: Vec<u64> = pairs.iter().map(|&(_, v)| v).collect();
    canonicalize_atom(&sub.spec, &omega, &tuple)
}

/// Designated label of a class-k generator, from its unreduced tuple.
fn class_label(
    sub: &SubfieldSpec,
    omega_sorted: &[usize],
    k: usize,
    tuple: &[u64],
) -> Result<GKIndex> {
    let s = omega_sorted.len();
    let f = |j: usize| &sub.factors[omega_sorted[j]];
    let nreal = (0..s).take_while(|&j| f(j).real).count();
    let t = nreal + 1;
    let mut vals = vec![0u64; s];
    if k == s {
        vals.copy_from_slice(tuple);
    } else if k == 0 {
        // All zeros.
    } else if k == t - 1 {
        for j in 0..t - 1 {
            vals[j] = tuple[j];
        }
        vals[t - 1] = f(t - 1).d / 2;
    } else {
        let shift = even(s - k);
        for j in 0..k {
            vals[j] = tuple[j] - shift * f(j).phi / 2;
        }
    }
    Ok(GKIndex::Tuple(atom_from_sorted(sub, omega_sorted, &vals)?))
}

/// Build the full generator family, label every generator, check the
/// per-level counts against the block-size prediction, and sort by the
/// label order. Labels must land on basis elements; configurations whose
/// labels fall outside (possible when reordering moved a real factor past a
/// non-real one) are refused.
pub fn deployed_basis(sub: SubfieldSpec) -> Result<DeployedBasis> {
    let gk = GKBasis::new(sub.spec.n)?;
    let r = sub.factors.len();
    let mut generators: Vec<DeployedGenerator> = Vec::new();
    for mask in 1u32..(1 << r) {
        let omega_sorted: Vec<usize> = (0..r).filter(|&i| mask & (1 << i) != 0).collect();
        let before = generators.len();
        build_level(&sub, &gk, &omega_sorted, &mut generators)?;
        let made = (generators.len() - before) as i64;
        let d: Vec<u64> = omega_sorted.iter().map(|&p| sub.factors[p].d).collect();
        let flags: Vec<bool> = omega_sorted.iter().map(|&p| sub.factors[p].real).collect();
        let predicted = predicted_block_size(&d, &flags)?;
        if predicted != Z::from(made) {
            return Err(Error::Internal(format!(
                "level {omega_sorted:?} produced {made} generators, predicted {predicted}"
            )));
        }
    }
    if generators.len() as u64 != sub.rank {
        return Err(Error::Internal(format!(
            "built {} generators for unit rank {}",
            generators.len(),
            sub.rank
        )));
    }
    generators.sort_by(|a, b| tuple_order(&a.correspond.correspond(), &b.correspond.correspond()));
    for w in generators.windows(2) {
        if w[0].correspond == w[1].correspond {
            return Err(Error::Internal(format!(
                "duplicate designated label {:?}",
                w[0].correspond
            )));
        }
    }
    Ok(DeployedBasis {
        sub,
        gk,
        generators,
    })
}

fn build_level(
    sub: &SubfieldSpec,
    gk: &GKBasis,
    omega_sorted: &[usize],
    out: &mut Vec<DeployedGenerator>,
) -> Result<()> {
    let spec = &sub.spec;
    let s = omega_sorted.len();
    let mut omega: Vec<usize> = omega_sorted.iter().map(|&p| sub.factors[p].orig).collect();
    omega.sort_unstable();
    if s == 1 {
        let f = &sub.factors[omega_sorted[0]];
        let reps = conj_coset_reps(spec, f);
        for a in 1..f.d_tilde {
            let mut sym = UnitSymbol::one();
            for &h in &reps {
                let top = canonicalize_atom(spec, &omega, &[spec.local_compose(f.orig, h, a)])?;
                let bot = canonicalize_atom(spec, &omega, &[h])?;
                sym = sym.mul(&UnitSymbol::atom(top)).mul(&UnitSymbol::atom(bot).pow(-1));
            }
            let correspond = GKIndex::Xi { j: f.orig, a };
            if gk.position(&correspond).is_none() {
                return Err(Error::Internal(format!(
                    "singleton label {correspond:?} missing from the ambient basis"
                )));
            }
            out.push(DeployedGenerator {
                omega: omega.clone(),
                omega_sorted: omega_sorted.to_vec(),
                kind: GenKind::Singleton { a },
                shift: vec![a],
                symbol: sym,
                correspond,
            });
        }
        return Ok(());
    }
    let all_real = omega_sorted.iter().all(|&p| sub.factors[p].real);
    if all_real {
        let esym = e_symbol(sub, omega_sorted)?;
        let ranges: Vec<u64> = omega_sorted.iter().map(|&p| sub.factors[p].d).collect();
        let mut shift = vec![1u64; s];
        'sweep: loop {
            let mut g = spec.identity();
            for (j, &pos) in omega_sorted.iter().enumerate() {
                g.idx[sub.factors[pos].orig] = shift[j];
            }
            let sym = crate::symbols::galois_act_element(spec, &g, &esym);
            let correspond = GKIndex::Tuple(atom_from_sorted(sub, omega_sorted, &shift)?);
            if gk.position(&correspond).is_none() {
                return Err(Error::Unsupported(format!(
                    "label {correspond:?} is not a basis element; this factor arrangement \
                     is outside the supported orderings"
                )));
            }
            out.push(DeployedGenerator {
                omega: omega.clone(),
                omega_sorted: omega_sorted.to_vec(),
                kind: GenKind::AllReal,
                shift: shift.clone(),
                symbol: sym,
                correspond,
            });
            // Odometer over 1..d_j, last coordinate fastest.
            let mut j = s;
            loop {
                if j == 0 {
                    break 'sweep;
                }
                j -= 1;
                shift[j] += 1;
                if shift[j] < ranges[j] {
                    continue 'sweep;
                }
                shift[j] = 1;
            }
        }
        return Ok(());
    }
    // Non-real tail: full-norm generators per legal class.
    let parts: Vec<(usize, &[u64])> = omega_sorted
        .iter()
        .map(|&p| {
            let f = &sub.factors[p];
            (f.orig, f.subgroup.as_slice())
        })
        .collect();
    let norm = product_sum(spec, &parts)?;
    for k in legal_k_range(sub, omega_sorted)? {
        for tuple in enumerate_x(sub, omega_sorted, k)? {
            let mut g = spec.identity();
            for (j, &pos) in omega_sorted.iter().enumerate() {
                let f = &sub.factors[pos];
                g.idx[f.orig] = tuple[j] % f.phi;
            }
            let shifted = GroupRingElement::single(g).mul(spec, &norm);
            let zeros = vec![0u64; s];
            let base = UnitSymbol::atom(canonicalize_atom(spec, &omega, &zeros)?);
            let sym = galois_act(spec, &shifted, &base);
            let correspond = class_label(sub, omega_sorted, k, &tuple)?;
            if gk.position(&correspond).is_none() {
                return Err(Error::Unsupported(format!(
                    "label {correspond:?} is not a basis element; this factor arrangement \
                     is outside the supported orderings"
                )));
            }
            out.push(DeployedGenerator {
                omega: omega.clone(),
                omega_sorted: omega_sorted.to_vec(),
                kind: GenKind::Class { k },
                shift: tuple,
                symbol: sym,
                correspond,
            });
        }
    }
    Ok(())
}

/// Whether a generator's label is only pinned, not minimal: the class
/// directly below the first non-real position. For such generators the
/// label coefficient can be +-2 (seen at conductor 385 with three degree-2
/// factors), so only injectivity is meaningful there; unimodularity of the
/// whole family is established through the normal-form route instead.
pub fn is_exception_class(sub: &SubfieldSpec, g: &DeployedGenerator) -> bool {
    match g.kind {
        GenKind::Class { k } => {
            let nreal = g
                .omega_sorted
                .iter()
                .take_while(|&&p| sub.factors[p].real)
                .count();
            nreal > 0 && k == nreal
        }
        _ => false,
    }
}
