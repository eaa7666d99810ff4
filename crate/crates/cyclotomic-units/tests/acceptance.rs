//! Acceptance gate: one test per release criterion, each printing a single
//! pass/fail line. Tolerances and instance counts are part of the contract;
//! do not tighten or loosen them here.

use cyclotomic_units::deployed::{deployed_basis, is_exception_class, validate_spec};
use cyclotomic_units::galois::FieldSpec;
use cyclotomic_units::goldkim::{Decomposer, ExponentVector, GKBasis, GKIndex};
use cyclotomic_units::realplus;
use cyclotomic_units::subset::{self, SubsetFunction};
use cyclotomic_units::symbols::{self, UnitSymbol};
use cyclotomic_units::{hp, verify, Q, Z};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CONDUCTORS: [u64; 8] = [9, 12, 15, 20, 21, 35, 45, 105];
const SUITE: [u64; 7] = [9, 12, 15, 20, 21, 35, 45];

fn gate(name: &str, ok: bool) {
    println!("acceptance {name}: {}", if ok { "pass" } else { "FAIL" });
    assert!(ok, "acceptance criterion failed: {name}");
}

#[test]
fn criterion_1_basis_cardinality() {
    let mut ok = true;
    for n in CONDUCTORS {
        let b = GKBasis::new(n).unwrap();
        let expected = b.spec.phi_n() / 2 - 1;
        ok &= b.indices.len() as u64 == expected;
        let d: Vec<u64> = b.spec.primes.iter().map(|pp| pp.phi).collect();
        let rep = subset::lemma7_check(&d).unwrap();
        ok &= rep.complex_total - Q::one() == Q::from(Z::from(expected));
    }
    gate("1 (basis cardinality)", ok);
}

/// Random product of atoms, rebalanced at the singleton levels so that the
/// result is a unit.
fn random_unit(rng: &mut ChaCha8Rng, spec: &FieldSpec) -> UnitSymbol {
    let r = spec.r();
    let mut x = UnitSymbol::one();
    for _ in 0..rng.gen_range(1..=3) {
        let mask: u32 = rng.gen_range(1..(1u32 << r));
        let omega: Vec<usize> = (0..r).filter(|j| mask >> j & 1 == 1).collect();
        let tuple: Vec<u64> = omega
            .iter()
            .map(|&j| rng.gen_range(0..spec.phi(j)))
            .collect();
        let at = symbols::canonicalize_atom(spec, &omega, &tuple).unwrap();
        x = x.mul(&UnitSymbol::atom(at).pow(rng.gen_range(-3..=3)));
    }
    for j in 0..r {
        let s: Z = x
            .terms
            .iter()
            .filter(|(a, _)| a.omega.len() == 1 && a.omega[0] == j)
            .map(|(_, e)| e.clone())
            .sum();
        if !s.is_zero() {
            let c = rng.gen_range(0..spec.phi(j));
            let at = symbols::canonicalize_atom(spec, &[j], &[c]).unwrap();
            x = x.mul(&UnitSymbol::atom(at).pow_big(&-s));
        }
    }
    assert!(symbols::is_unit(&x));
    x
}

#[test]
fn criterion_2_decomposition_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut ok = true;
    for n in CONDUCTORS {
        let mut dec = Decomposer::new(n).unwrap();
        let spec = dec.basis.spec.clone();
        for i in 0..dec.basis.indices.len() {
            let sym = dec.basis.indices[i].symbol(&spec);
            ok &= dec.decompose(&sym).unwrap() == dec.basis.unit_vector(i);
        }
        let m = if n % 2 == 1 { 2 * n } else { n };
        for _ in 0..200 {
            let x = random_unit(&mut rng, &spec);
            let v = dec.decompose(&x).unwrap();
            let mut recon = UnitSymbol::one();
            for (i, c) in v.gk.iter().enumerate() {
                if !c.is_zero() {
                    recon = recon.mul(&dec.basis.indices[i].symbol(&spec).pow_big(c));
                }
            }
            let quotient = x.mul(&recon.inverse());
            let val = verify::numeric_value(&spec, &quotient, 1, 256).unwrap();
            ok &= verify::is_root_of_unity(&val, m).unwrap();
        }
    }
    gate("2 (decomposition soundness, 200 random units per conductor)", ok);
}

#[test]
fn criterion_3_galois_closure() {
    let mut ok = true;
    for n in CONDUCTORS {
        let mut dec = Decomposer::new(n).unwrap();
        let spec = dec.basis.spec.clone();
        let mut gens = Vec::new();
        for (j, pp) in spec.primes.iter().enumerate() {
            let mut g = spec.identity();
            g.idx[j] = 1;
            gens.push(g);
            if pp.p == 2 && pp.e >= 3 {
                let mut g = spec.identity();
                g.idx[j] = 1 << (pp.e - 2);
                gens.push(g);
            }
        }
        for g in &gens {
            for ix in dec.basis.indices.clone() {
                let acted = symbols::galois_act_element(&spec, g, &ix.symbol(&spec));
                let v = dec.decompose(&acted).unwrap();
                ok &= v.base_is_zero();
            }
        }
    }
    gate("3 (Galois closure of the decomposition)", ok);
}

#[test]
fn criterion_4_counting_identities_exhaustive() {
    let mut ok = true;
    for r in 1..=5usize {
        let mut d = vec![2u64; r];
        loop {
            ok &= subset::lemma7_check(&d).unwrap().ok();
            let mut i = 0;
            while i < r && d[i] == 8 {
                d[i] = 2;
                i += 1;
            }
            if i == r {
                break;
            }
            d[i] += 1;
        }
    }
    gate("4 (counting identities, exhaustive r <= 5, degrees 2..=8)", ok);
}

fn decomposed_rows(
    dec: &mut Decomposer,
    b: &cyclotomic_units::deployed::DeployedBasis,
) -> Vec<ExponentVector> {
    b.generators
        .iter()
        .map(|g| dec.decompose(&g.symbol).unwrap())
        .collect()
}

#[test]
fn criterion_5_deployed_bases() {
    let specs: [(u64, &[u64]); 6] = [
        (35, &[2, 3]),
        (35, &[2, 6]),
        (35, &[4, 6]),
        (15, &[2, 2]),
        (15, &[2, 4]),
        (105, &[2, 2, 3]),
    ];
    let mut ok = true;
    for (n, degrees) in specs {
        let b = deployed_basis(validate_spec(n, degrees, None).unwrap()).unwrap();
        let unit_rank = if b.sub.totally_real {
            b.sub.degree - 1
        } else {
            b.sub.degree / 2 - 1
        };
        ok &= b.generators.len() as u64 == unit_rank;
        let mut dec = Decomposer::new(n).unwrap();
        let rows = decomposed_rows(&mut dec, &b);
        let snf =
            verify::smith_normal_form(&verify::IntegerMatrix::from_exponent_vectors(&rows).unwrap())
                .unwrap();
        ok &= snf.divisors.iter().all(|d| *d == Z::one());
        let labels: std::collections::HashSet<_> =
            b.generators.iter().map(|g| g.correspond.clone()).collect();
        ok &= labels.len() == b.generators.len();
        let items: Vec<(ExponentVector, symbols::Atom, bool)> = b
            .generators
            .iter()
            .zip(&rows)
            .map(|(g, v)| {
                (
                    v.clone(),
                    g.correspond.correspond(),
                    is_exception_class(&b.sub, g),
                )
            })
            .collect();
        // None of these specs admits the pinned-only exception class, so
        // every row carries the strict check.
        ok &= items.iter().all(|(_, _, pinned_only)| !pinned_only);
        ok &= verify::triangularity_report(&b.gk, &items).ok;
    }
    gate("5 (deployed bases: rank, unimodularity, triangular correspondence)", ok);
}

#[test]
fn criterion_6_real_plus_bases() {
    let mut ok = true;
    for n in [9u64, 12, 15, 21] {
        let rb = realplus::real_basis(n, 256).unwrap();
        let spec = &rb.basis.spec;
        ok &= rb.generators.len() as u64 == spec.phi_n() / 2 - 1;
        let mut embeds = Vec::new();
        for g in &rb.generators {
            let e = verify::numeric_embed(spec, &g.product(), 256).unwrap();
            embeds.push(e.iter().map(|x| x.to_f64()).collect::<Vec<f64>>());
        }
        ok &= verify::numeric_rank(&embeds, 1e-8).unwrap() == rb.generators.len();
        let rows: Vec<ExponentVector> =
            rb.generators.iter().map(|g| g.gk_image.clone()).collect();
        let snf =
            verify::smith_normal_form(&verify::IntegerMatrix::from_exponent_vectors(&rows).unwrap())
                .unwrap();
        ok &= snf.divisors == realplus::expected_divisors(spec, rb.generators.len());
    }
    gate("6 (real-plus bases: cardinality, embedding rank, projection divisors)", ok);
}

#[test]
fn criterion_7_order_dichotomy() {
    let mut ok = true;
    for n in SUITE {
        let basis = GKBasis::new(n).unwrap();
        let spec = &basis.spec;
        if spec.r() > 1 {
            let omega: Vec<usize> = (0..spec.r()).collect();
            let zeros = vec![0u64; spec.r()];
            let full =
                UnitSymbol::atom(symbols::canonicalize_atom(spec, &omega, &zeros).unwrap());
            ok &= realplus::hasse_order(spec, &full, 256).unwrap() == 2;
        }
        for ix in &basis.indices {
            if matches!(ix, GKIndex::Xi { .. }) {
                ok &= realplus::hasse_order(spec, &ix.symbol(spec), 256).unwrap() == 1;
            }
        }
    }
    gate("7 (order dichotomy: full level 2, prime-power ratios 1)", ok);
}

#[test]
fn criterion_8_real_contraction_lattice() {
    let mut dec = Decomposer::new(35).unwrap();
    let full = deployed_basis(validate_spec(35, &[2, 6], None).unwrap()).unwrap();
    let real = deployed_basis(validate_spec(35, &[2, 3], None).unwrap()).unwrap();
    let rows_full = decomposed_rows(&mut dec, &full);
    let rows_real = decomposed_rows(&mut dec, &real);
    let h1 = verify::hermite_normal_form(
        &verify::IntegerMatrix::from_exponent_vectors(&rows_full).unwrap(),
    )
    .unwrap();
    let h2 = verify::hermite_normal_form(
        &verify::IntegerMatrix::from_exponent_vectors(&rows_real).unwrap(),
    )
    .unwrap();
    gate("8 (degrees (2,6) and (2,3) at 35 span one lattice)", h1 == h2);
}

#[test]
fn criterion_9_relation_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut ok = true;
    // 1 - zeta^k = -zeta^k (1 - zeta^(-k)) as complex numbers.
    for _ in 0..500 {
        let m = rng.gen_range(2..=300u64);
        let k = rng.gen_range(1..m);
        let l = hp::one_minus_zeta(m, k, 256).unwrap();
        let z = hp::zeta(m, k, 256).unwrap();
        let w = hp::one_minus_zeta(m, m - k, 256).unwrap();
        let residual = l.add(&z.mul(&w)).abs2().to_f64();
        ok &= residual < 1e-16;
    }
    // Coordinate sweep at one prime equals the Frobenius-adjusted lower
    // level, compared through log embeddings.
    let pool = [15u64, 20, 21, 35, 45, 105];
    for i in 0..500 {
        let spec = FieldSpec::new(pool[i % pool.len()]).unwrap();
        let r = spec.r();
        let mask: u32 = loop {
            let m = rng.gen_range(1..(1u32 << r));
            if m.count_ones() >= 2 {
                break m;
            }
        };
        let omega: Vec<usize> = (0..r).filter(|j| mask >> j & 1 == 1).collect();
        let tuple: Vec<u64> = omega
            .iter()
            .map(|&j| rng.gen_range(0..spec.phi(j)))
            .collect();
        let atom = symbols::canonicalize_atom(&spec, &omega, &tuple).unwrap();
        let j = atom.omega[rng.gen_range(0..atom.omega.len())];
        let (lhs, rhs) = symbols::norm_relation(&spec, &atom, j).unwrap();
        let el = verify::numeric_embed(&spec, &lhs, 256).unwrap();
        let er = verify::numeric_embed(&spec, &rhs, 256).unwrap();
        ok &= el
            .iter()
            .zip(&er)
            .all(|(a, b)| a.sub(b).abs().to_f64() < 1e-8);
    }
    // Mobius inversion against zeta convolution, exact.
    for _ in 0..1000 {
        let r = rng.gen_range(1..=5usize);
        let values: Vec<Q> = (0..(1u32 << r))
            .map(|_| {
                Q::new(
                    Z::from(rng.gen_range(-20..=20i64)),
                    Z::from(rng.gen_range(1..=7i64)),
                )
            })
            .collect();
        let f = SubsetFunction::from_fn(r, |m| values[m as usize].clone()).unwrap();
        let g = f.convolve(&SubsetFunction::one(r).unwrap()).unwrap();
        let back = g.convolve(&SubsetFunction::mobius(r).unwrap()).unwrap();
        ok &= (0..(1u32 << r)).all(|m| back.get(m) == f.get(m));
    }
    gate("9 (sign, norm, and inversion relation oracles)", ok);
}
