//! Report assembly and rendering for the command-line surface. Every
//! command produces one structured document; rendering is either a stable
//! JSON schema or a human text form. Printers and parsers for labels and
//! exponent vectors round-trip exactly.

use crate::deployed::{deployed_basis, is_exception_class, validate_spec, GenKind};
use crate::galois::FieldSpec;
use crate::goldkim::{Decomposer, ExponentVector, GKBasis, GKIndex};
use crate::realplus::{self, RealKind};
use crate::subset;
use crate::symbols::{self, UnitSymbol};
use crate::verify;
use crate::{Error, Result, Z};
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
}

/// One verification outcome inside a report.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, pass: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        pass,
        detail: detail.into(),
    }
}

fn fmt_check(c: &Check) -> String {
    format!(
        "[{}] {}: {}",
        if c.pass { "pass" } else { "FAIL" },
        c.name,
        c.detail
    )
}

pub trait Render: Serialize {
    fn human(&self) -> String;
    /// All embedded verifications passed.
    fn passed(&self) -> bool;

    fn render(&self, format: Format) -> String {
        match format {
            Format::Human => self.human(),
            Format::Json => {
                serde_json::to_string_pretty(self).expect("report serialization is total")
            }
        }
    }
}

/// Text form of a basis label, `xi(<j>;<a>)` or `(<omega>;<tuple>)` with
/// 1-based prime indices. Tuple labels reuse the symbol term syntax.
pub fn print_label(ix: &GKIndex) -> String {
    match ix {
        GKIndex::Xi { j, a } => format!("xi({};{a})", j + 1),
        GKIndex::Tuple(at) => {
            let omega = at
                .omega
                .iter()
                .map(|j| (j + 1).to_string())
                .collect::<Vec<_>>()
                .join(",");
            let tuple = at
                .tuple
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",");
            format!("({omega};{tuple})")
        }
    }
}

fn parse_csv_u64(text: &str, what: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad {what} `{s}`")))
        })
        .collect()
}

/// Parse a basis label written by `print_label`.
pub fn parse_label(spec: &FieldSpec, text: &str) -> Result<GKIndex> {
    let text = text.trim();
    if let Some(inner) = text.strip_prefix("xi(").and_then(|t| t.strip_suffix(')')) {
        let (j, a) = inner
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("expected `xi(<j>;<a>)` in `{text}`")))?;
        let j: usize = j
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad prime index `{j}`")))?;
        if j == 0 || j > spec.r() {
            return Err(Error::Parse(format!(
                "prime index {j} out of range 1..={}",
                spec.r()
            )));
        }
        let a: u64 = a
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad ratio index `{a}`")))?;
        return Ok(GKIndex::Xi { j: j - 1, a });
    }
    let inner = text
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("expected a label in `{text}`")))?;
    let (omega_csv, tuple_csv) = inner
        .split_once(';')
        .ok_or_else(|| Error::Parse(format!("expected ';' in label `{text}`")))?;
    let omega: Vec<usize> = parse_csv_u64(omega_csv, "prime index")?
        .into_iter()
        .map(|v| {
            if v == 0 || v as usize > spec.r() {
                Err(Error::Parse(format!(
                    "prime index {v} out of range 1..={}",
                    spec.r()
                )))
            } else {
                Ok(v as usize - 1)
            }
        })
        .collect::<Result<_>>()?;
    let tuple = parse_csv_u64(tuple_csv, "tuple entry")?;
    let atom = symbols::canonicalize_atom(spec, &omega, &tuple)
        .map_err(|e| Error::Parse(e.to_string()))?;
    Ok(GKIndex::Tuple(atom))
}

/// Text form of an exponent vector: nonzero coordinates as `<label>^<e>`
/// terms, base coordinates as `base(<j>)^<e>`, joined by ` * `; the zero
/// vector prints as `0`.
pub fn print_vector(basis: &GKBasis, v: &ExponentVector) -> String {
    let mut terms = Vec::new();
    for (i, c) in v.gk.iter().enumerate() {
        if !c.is_zero() {
            terms.push(format!("{}^{}", print_label(&basis.indices[i]), c));
        }
    }
    for (j, c) in v.base.iter().enumerate() {
        if !c.is_zero() {
            terms.push(format!("base({})^{}", j + 1, c));
        }
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" * ")
    }
}

/// Parse a vector written by `print_vector`. Tuple terms must name basis
/// elements.
pub fn parse_vector(basis: &GKBasis, text: &str) -> Result<ExponentVector> {
    let mut v = ExponentVector::zero(basis.indices.len(), basis.spec.r());
    let text = text.trim();
    if text == "0" {
        return Ok(v);
    }
    for term in text.split('*') {
        let term = term.trim();
        let (head, expo) = term
            .rsplit_once(")^")
            .ok_or_else(|| Error::Parse(format!("expected `)^<exp>` in term `{term}`")))?;
        let head = format!("{head})");
        let e: Z = expo
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent `{expo}`")))?;
        if let Some(inner) = head.strip_prefix("base(").and_then(|t| t.strip_suffix(')')) {
            let j: usize = inner
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime index `{inner}`")))?;
            if j == 0 || j > basis.spec.r() {
                return Err(Error::Parse(format!(
                    "prime index {j} out of range 1..={}",
                    basis.spec.r()
                )));
            }
            v.base[j - 1] += e;
        } else {
            let ix = parse_label(&basis.spec, &head)?;
            let pos = basis.position(&ix).ok_or_else(|| {
                Error::Parse(format!("`{head}` is not a basis element"))
            })?;
            v.gk[pos] += e;
        }
    }
    Ok(v)
}

#[derive(Serialize)]
pub struct BasisEntry {
    pub position: usize,
    pub label: String,
    pub level: u64,
    pub symbol: String,
}

#[derive(Serialize)]
pub struct GkBasisReport {
    pub conductor: u64,
    pub count: usize,
    pub expected: u64,
    pub entries: Vec<BasisEntry>,
    pub checks: Vec<Check>,
}

pub fn gk_basis_report(n: u64) -> Result<GkBasisReport> {
    let basis = GKBasis::new(n)?;
    let spec = &basis.spec;
    let expected = spec.phi_n() / 2 - 1;
    let entries: Vec<BasisEntry> = basis
        .indices
        .iter()
        .enumerate()
        .map(|(i, ix)| {
            let at = ix.correspond();
            BasisEntry {
                position: i + 1,
                label: print_label(ix),
                level: spec.n_omega(&at.omega),
                symbol: ix.symbol(spec).to_string(),
            }
        })
        .collect();
    let count = entries.len();
    let mut checks = vec![check(
        "cardinality",
        count as u64 == expected,
        format!("{count} elements, expected {expected}"),
    )];
    // The counting identities predict the same total from the local degrees.
    let d: Vec<u64> = spec.primes.iter().map(|pp| pp.phi).collect();
    let rep = subset::lemma7_check(&d)?;
    let predicted = rep.complex_total - crate::Q::one();
    checks.push(check(
        "count-prediction",
        predicted == crate::Q::from(Z::from(expected)),
        format!("subset-sum prediction {predicted}"),
    ));
    Ok(GkBasisReport {
        conductor: n,
        count,
        expected,
        entries,
        checks,
    })
}

impl Render for GkBasisReport {
    fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "conductor {}: {} basis elements (expected {})",
            self.conductor, self.count, self.expected
        );
        for e in &self.entries {
            let _ = writeln!(s, "  {:>3}  {:<24} level {:<6} {}", e.position, e.label, e.level, e.symbol);
        }
        for c in &self.checks {
            let _ = writeln!(s, "{}", fmt_check(c));
        }
        s
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Serialize)]
pub struct Coordinate {
    pub label: String,
    pub coefficient: String,
}

#[derive(Serialize)]
pub struct DecomposeReport {
    pub conductor: u64,
    pub input: String,
    pub vector: String,
    pub coordinates: Vec<Coordinate>,
    pub residual: f64,
    pub checks: Vec<Check>,
}

pub fn decompose_report(n: u64, text: &str, bits: u32) -> Result<DecomposeReport> {
    let mut dec = Decomposer::new(n)?;
    let spec = dec.basis.spec.clone();
    let x = symbols::parse_symbol(&spec, text)?;
    if !symbols::is_unit(&x) {
        return Err(Error::NotUnit(
            "the symbol has unbalanced prime-power levels, so it is not a unit".into(),
        ));
    }
    let v = dec.decompose(&x)?;
    let basis = &dec.basis;
    let coordinates: Vec<Coordinate> = v
        .gk
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| Coordinate {
            label: print_label(&basis.indices[i]),
            coefficient: c.to_string(),
        })
        .collect();
    // End-to-end check: rebuild the unit from the coordinates and compare
    // log embeddings.
    let mut recon = UnitSymbol::one();
    for (i, c) in v.gk.iter().enumerate() {
        if !c.is_zero() {
            recon = recon.mul(&basis.indices[i].symbol(&spec).pow_big(c));
        }
    }
    let ex = verify::numeric_embed(&spec, &x, bits)?;
    let er = verify::numeric_embed(&spec, &recon, bits)?;
    let mut residual = 0f64;
    for (a, b) in ex.iter().zip(&er) {
        residual = residual.max(a.sub(b).abs().to_f64());
    }
    let checks = vec![check(
        "reconstruction-residual",
        residual < 1e-8,
        format!("max log-embedding gap {residual:.3e} (tolerance 1e-8)"),
    )];
    Ok(DecomposeReport {
        conductor: n,
        input: x.to_string(),
        vector: print_vector(basis, &v),
        coordinates,
        residual,
        checks,
    })
}

impl Render for DecomposeReport {
    fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "conductor {}: {}", self.conductor, self.input);
        let _ = writeln!(s, "vector: {}", self.vector);
        for c in &self.coordinates {
            let _ = writeln!(s, "  {:<24} {}", c.label, c.coefficient);
        }
        for c in &self.checks {
            let _ = writeln!(s, "{}", fmt_check(c));
        }
        s
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Serialize)]
pub struct FactorReport {
    pub prime_power: u64,
    pub degree: u64,
    pub real: bool,
    /// Fixing subgroup as residues mod the prime power.
    pub subgroup: Vec<u64>,
    /// 1-based position in the conductor's prime-power list.
    pub input_position: usize,
}

#[derive(Serialize)]
pub struct GeneratorReport {
    pub label: String,
    pub kind: String,
    pub level: u64,
    pub shift: Vec<u64>,
    pub exception: bool,
    pub symbol: String,
}

#[derive(Serialize)]
pub struct DeployedReport {
    pub conductor: u64,
    pub degrees: Vec<u64>,
    pub rank: u64,
    pub totally_real: bool,
    pub factors: Vec<FactorReport>,
    pub generators: Vec<GeneratorReport>,
    pub snf: Option<Vec<String>>,
    pub checks: Vec<Check>,
}

fn vp(mut x: u64, p: u64) -> u32 {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

pub fn deployed_report(
    n: u64,
    degrees: &[u64],
    selector: Option<&[u64]>,
    verify_all: bool,
) -> Result<DeployedReport> {
    let sub = validate_spec(n, degrees, selector)?;
    let b = deployed_basis(sub)?;
    let spec = &b.sub.spec;
    let factors: Vec<FactorReport> = b
        .sub
        .factors
        .iter()
        .map(|f| FactorReport {
            prime_power: f.q,
            degree: f.d,
            real: f.real,
            subgroup: f
                .subgroup
                .iter()
                .map(|&h| spec.local_residue(f.orig, h))
                .collect(),
            input_position: f.orig + 1,
        })
        .collect();
    let generators: Vec<GeneratorReport> = b
        .generators
        .iter()
        .map(|g| GeneratorReport {
            label: print_label(&g.correspond),
            kind: match g.kind {
                GenKind::Singleton { a } => format!("ratio a={a}"),
                GenKind::AllReal => "real norm".into(),
                GenKind::Class { k } => format!("class {k}"),
            },
            level: spec.n_omega(&g.omega),
            shift: g.shift.clone(),
            exception: is_exception_class(&b.sub, g),
            symbol: g.symbol.to_string(),
        })
        .collect();
    let mut checks = vec![check(
        "cardinality",
        b.generators.len() as u64 == b.sub.rank,
        format!("{} generators, unit rank {}", b.generators.len(), b.sub.rank),
    )];
    let mut snf_divisors = None;
    if verify_all {
        let mut dec = Decomposer::new(n)?;
        let rows: Vec<ExponentVector> = b
            .generators
            .iter()
            .map(|g| dec.decompose(&g.symbol))
            .collect::<Result<_>>()?;
        let m = verify::IntegerMatrix::from_exponent_vectors(&rows)?;
        let snf = verify::smith_normal_form(&m)?;
        let all_ones = snf.divisors.iter().all(|d| *d == Z::from(1));
        checks.push(check(
            "direct-factor",
            all_ones,
            format!(
                "normal-form divisors [{}]",
                snf.divisors
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        ));
        snf_divisors = Some(snf.divisors.iter().map(|d| d.to_string()).collect());
        let labels: std::collections::BTreeSet<String> =
            b.generators.iter().map(|g| print_label(&g.correspond)).collect();
        checks.push(check(
            "injective-labels",
            labels.len() == b.generators.len(),
            format!("{} distinct labels", labels.len()),
        ));
        // Strict triangularity over the non-exception rows.
        let items: Vec<(ExponentVector, crate::symbols::Atom, bool)> = b
            .generators
            .iter()
            .zip(&rows)
            .filter(|(g, _)| !is_exception_class(&b.sub, g))
            .map(|(g, v)| (v.clone(), g.correspond.correspond(), false))
            .collect();
        let rep = verify::triangularity_report(&b.gk, &items);
        checks.push(check(
            "triangularity",
            rep.ok,
            if rep.ok {
                format!("{} rows strictly ordered with unit diagonal", items.len())
            } else {
                rep.failures.join("; ")
            },
        ));
        let exceptions: Vec<String> = b
            .generators
            .iter()
            .zip(&rows)
            .filter(|(g, _)| is_exception_class(&b.sub, g))
            .map(|(g, v)| {
                let pos = b.gk.position(&g.correspond).expect("label checked at build");
                format!("{} coefficient {}", print_label(&g.correspond), v.gk[pos])
            })
            .collect();
        if !exceptions.is_empty() {
            checks.push(check(
                "exception-columns",
                true,
                format!(
                    "{} pinned-only column(s), unimodularity covered by direct-factor: {}",
                    exceptions.len(),
                    exceptions.join("; ")
                ),
            ));
        }
        if let Some(c) = real_contraction_check(n, degrees, selector, &b, &rows, &mut dec)? {
            checks.push(c);
        }
    }
    Ok(DeployedReport {
        conductor: n,
        degrees: degrees.to_vec(),
        rank: b.sub.rank,
        totally_real: b.sub.totally_real,
        factors,
        generators,
        snf: snf_divisors,
        checks,
    })
}

/// When exactly one factor is non-real over an odd prime and its halved
/// degree keeps the conductor, the lattice must match the one of the real
/// contraction. Compared through row-echelon forms.
fn real_contraction_check(
    n: u64,
    degrees: &[u64],
    selector: Option<&[u64]>,
    b: &crate::deployed::DeployedBasis,
    rows: &[ExponentVector],
    dec: &mut Decomposer,
) -> Result<Option<Check>> {
    let complex: Vec<_> = b.sub.factors.iter().filter(|f| !f.real).collect();
    if complex.len() != 1 {
        return Ok(None);
    }
    let f = complex[0];
    let half = f.d / 2;
    let keeps_conductor = if f.p == 2 {
        false
    } else if f.phi == f.q - 1 {
        half > 1
    } else {
        vp(half, f.p) == vp(f.d, f.p)
    };
    if !keeps_conductor {
        return Ok(None);
    }
    let mut contracted = degrees.to_vec();
    contracted[f.orig] = half;
    let real = deployed_basis(validate_spec(n, &contracted, selector)?)?;
    let real_rows: Vec<ExponentVector> = real
        .generators
        .iter()
        .map(|g| dec.decompose(&g.symbol))
        .collect::<Result<_>>()?;
    let h1 = verify::hermite_normal_form(&verify::IntegerMatrix::from_exponent_vectors(rows)?)?;
    let h2 =
        verify::hermite_normal_form(&verify::IntegerMatrix::from_exponent_vectors(&real_rows)?)?;
    Ok(Some(check(
        "real-contraction",
        h1 == h2,
        format!(
            "lattice vs degrees {:?}: row-echelon forms {}",
            contracted,
            if h1 == h2 { "equal" } else { "differ" }
        ),
    )))
}

impl Render for DeployedReport {
    fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "conductor {}, degrees {:?}: unit rank {}{}",
            self.conductor,
            self.degrees,
            self.rank,
            if self.totally_real { " (totally real)" } else { "" }
        );
        for f in &self.factors {
            let _ = writeln!(
                s,
                "  factor q={:<5} degree {:<3} {}  subgroup {:?} (input position {})",
                f.prime_power,
                f.degree,
                if f.real { "real   " } else { "complex" },
                f.subgroup,
                f.input_position
            );
        }
        let _ = writeln!(s, "generators ({}):", self.generators.len());
        for g in &self.generators {
            let _ = writeln!(
                s,
                "  {:<20} {:<10} level {:<6} shift {:?}{}",
                g.label,
                g.kind,
                g.level,
                g.shift,
                if g.exception { "  [pinned only]" } else { "" }
            );
            let _ = writeln!(s, "      {}", g.symbol);
        }
        for c in &self.checks {
            let _ = writeln!(s, "{}", fmt_check(c));
        }
        s
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Serialize)]
pub struct RealGeneratorReport {
    pub label: String,
    pub kind: String,
    pub parts: Vec<String>,
    pub projection: String,
}

#[derive(Serialize)]
pub struct RealBasisReport {
    pub conductor: u64,
    pub count: usize,
    pub expected: u64,
    pub kind_counts: [usize; 3],
    pub multiplier: Option<String>,
    pub snf: Vec<String>,
    pub expected_snf: Vec<String>,
    pub generators: Vec<RealGeneratorReport>,
    pub checks: Vec<Check>,
}

pub fn real_basis_report(n: u64, bits: u32) -> Result<RealBasisReport> {
    let rb = realplus::real_basis(n, bits)?;
    let spec = &rb.basis.spec;
    let expected = spec.phi_n() / 2 - 1;
    let mut kind_counts = [0usize; 3];
    for g in &rb.generators {
        kind_counts[match g.kind {
            RealKind::Type0 => 0,
            RealKind::Type1 => 1,
            RealKind::Type2 => 2,
        }] += 1;
    }
    let generators: Vec<RealGeneratorReport> = rb
        .generators
        .iter()
        .map(|g| RealGeneratorReport {
            label: print_label(&g.label),
            kind: g.kind.tag().into(),
            parts: g.parts.iter().map(|p| p.to_string()).collect(),
            projection: print_vector(&rb.basis, g.projection()),
        })
        .collect();
    let rows: Vec<ExponentVector> = rb.generators.iter().map(|g| g.gk_image.clone()).collect();
    let m = verify::IntegerMatrix::from_exponent_vectors(&rows)?;
    let snf = verify::smith_normal_form(&m)?;
    let expected_snf = realplus::expected_divisors(spec, rb.generators.len());
    let mut checks = vec![check(
        "cardinality",
        rb.generators.len() as u64 == expected,
        format!("{} generators, expected {expected}", rb.generators.len()),
    )];
    checks.push(check(
        "projection-divisors",
        snf.divisors == expected_snf,
        format!(
            "normal-form divisors [{}], expected [{}]",
            snf.divisors
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(","),
            expected_snf
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",")
        ),
    ));
    // Advisory numeric cross-check: the log embeddings must already have
    // full rank.
    let mut embeds = Vec::new();
    for g in &rb.generators {
        let e = verify::numeric_embed(spec, &g.product(), bits)?;
        embeds.push(e.iter().map(|x| x.to_f64()).collect::<Vec<f64>>());
    }
    let rank = verify::numeric_rank(&embeds, 1e-8)?;
    checks.push(check(
        "embedding-rank",
        rank == rb.generators.len(),
        format!("numeric rank {rank} of {}", rb.generators.len()),
    ));
    Ok(RealBasisReport {
        conductor: n,
        count: rb.generators.len(),
        expected,
        kind_counts,
        multiplier: rb.multiplier.as_ref().map(print_label),
        snf: snf.divisors.iter().map(|d| d.to_string()).collect(),
        expected_snf: expected_snf.iter().map(|d| d.to_string()).collect(),
        generators,
        checks,
    })
}

impl Render for RealBasisReport {
    fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "conductor {}: {} real generators (expected {}); type counts {:?}",
            self.conductor, self.count, self.expected, self.kind_counts
        );
        if let Some(m) = &self.multiplier {
            let _ = writeln!(s, "shared order-2 multiplier: {m}");
        }
        for g in &self.generators {
            let _ = writeln!(s, "  {:<24} {:<8} -> {}", g.label, g.kind, g.projection);
        }
        for c in &self.checks {
            let _ = writeln!(s, "{}", fmt_check(c));
        }
        s
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Serialize)]
pub struct CountingReport {
    pub degrees: Vec<u64>,
    pub real_sum: String,
    pub real_total: String,
    pub complex_sum: String,
    pub complex_total: String,
    pub checks: Vec<Check>,
}

pub fn counting_report(d: &[u64]) -> Result<CountingReport> {
    let rep = subset::lemma7_check(d)?;
    let one = crate::Q::one();
    let checks = vec![
        check(
            "real-identity",
            rep.real_sum == rep.real_total.clone() - one.clone(),
            format!("{} = {} - 1", rep.real_sum, rep.real_total),
        ),
        check(
            "complex-identity",
            rep.complex_sum == rep.complex_total.clone() - one,
            format!("{} = {} - 1", rep.complex_sum, rep.complex_total),
        ),
        check(
            "convolution",
            rep.convolution_ok,
            "subset sums of the block counts match the product form",
        ),
        check(
            "mobius-inversion",
            rep.mobius_ok,
            "alternating-sign inversion recovers the block counts",
        ),
    ];
    Ok(CountingReport {
        degrees: rep.degrees.clone(),
        real_sum: rep.real_sum.to_string(),
        real_total: rep.real_total.to_string(),
        complex_sum: rep.complex_sum.to_string(),
        complex_total: rep.complex_total.to_string(),
        checks,
    })
}

impl Render for CountingReport {
    fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "degrees {:?}: real {} = {} - 1, complex {} = {} - 1",
            self.degrees, self.real_sum, self.real_total, self.complex_sum, self.complex_total
        );
        for c in &self.checks {
            let _ = writeln!(s, "{}", fmt_check(c));
        }
        s
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Serialize)]
pub struct SuiteItem {
    pub conductor: u64,
    pub checks: Vec<Check>,
}

#[derive(Serialize)]
pub struct SuiteReport {
    pub items: Vec<SuiteItem>,
    pub pass: bool,
}

pub fn suite_report(ns: &[u64], bits: u32) -> Result<SuiteReport> {
    let mut items = Vec::new();
    for &n in ns {
        let mut checks = Vec::new();
        let mut dec = Decomposer::new(n)?;
        let spec = dec.basis.spec.clone();
        let expected = spec.phi_n() / 2 - 1;
        checks.push(check(
            "cardinality",
            dec.basis.indices.len() as u64 == expected,
            format!("{} basis elements, expected {expected}", dec.basis.indices.len()),
        ));
        let mut units_ok = true;
        for i in 0..dec.basis.indices.len() {
            let sym = dec.basis.indices[i].symbol(&spec);
            let v = dec.decompose(&sym)?;
            if v != dec.basis.unit_vector(i) {
                units_ok = false;
                break;
            }
        }
        checks.push(check(
            "basis-unit-vectors",
            units_ok,
            "each basis element decomposes to its own unit vector",
        ));
        let rb = realplus::real_basis(n, bits)?;
        let rows: Vec<ExponentVector> =
            rb.generators.iter().map(|g| g.gk_image.clone()).collect();
        let snf = verify::smith_normal_form(&verify::IntegerMatrix::from_exponent_vectors(
            &rows,
        )?)?;
        let expected_snf = realplus::expected_divisors(&spec, rb.generators.len());
        checks.push(check(
            "real-projection-divisors",
            rb.generators.len() as u64 == expected && snf.divisors == expected_snf,
            format!(
                "{} real generators, divisors [{}]",
                rb.generators.len(),
                snf.divisors
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        ));
        if spec.r() > 1 {
            let omega: Vec<usize> = (0..spec.r()).collect();
            let zeros = vec![0u64; spec.r()];
            let full = UnitSymbol::atom(symbols::canonicalize_atom(&spec, &omega, &zeros)?);
            let ord = realplus::hasse_order(&spec, &full, bits)?;
            checks.push(check(
                "order-of-full-level",
                ord == 2,
                format!("composite conductor: order {ord}, expected 2"),
            ));
        }
        if let Some(ix) = dec
            .basis
            .indices
            .iter()
            .find(|ix| matches!(ix, GKIndex::Xi { .. }))
        {
            let ord = realplus::hasse_order(&spec, &ix.symbol(&spec), bits)?;
            checks.push(check(
                "order-of-ratio",
                ord == 1,
                format!("{}: order {ord}, expected 1", print_label(ix)),
            ));
        }
        items.push(SuiteItem {
            conductor: n,
            checks,
        });
    }
    let pass = items.iter().all(|it| it.checks.iter().all(|c| c.pass));
    Ok(SuiteReport { items, pass })
}

impl Render for SuiteReport {
    fn human(&self) -> String {
        let mut s = String::new();
        for it in &self.items {
            let _ = writeln!(s, "conductor {}:", it.conductor);
            for c in &it.checks {
                let _ = writeln!(s, "  {}", fmt_check(c));
            }
        }
        let _ = writeln!(s, "suite: {}", if self.pass { "pass" } else { "FAIL" });
        s
    }

    fn passed(&self) -> bool {
        self.pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        let basis = GKBasis::new(105).unwrap();
        for ix in &basis.indices {
            let text = print_label(ix);
            assert_eq!(parse_label(&basis.spec, &text).unwrap(), *ix);
        }
    }

    #[test]
    fn vectors_round_trip() {
        let basis = GKBasis::new(15).unwrap();
        let mut v = ExponentVector::zero(basis.indices.len(), basis.spec.r());
        assert_eq!(print_vector(&basis, &v), "0");
        assert_eq!(parse_vector(&basis, "0").unwrap(), v);
        v.gk[0] = Z::from(-3);
        v.gk[2] = Z::from(2);
        v.base[1] = Z::from(1);
        let text = print_vector(&basis, &v);
        assert_eq!(parse_vector(&basis, &text).unwrap(), v);
        assert!(parse_vector(&basis, "(1;1)^2").is_err());
    }

    proptest::proptest! {
        #[test]
        fn vector_text_round_trips(gk in proptest::collection::vec(-9i64..=9, 11),
                                   base in proptest::collection::vec(-9i64..=9, 2)) {
            let basis = GKBasis::new(45).unwrap();
            let mut v = ExponentVector::zero(basis.indices.len(), basis.spec.r());
            for (i, c) in gk.iter().enumerate() {
                v.gk[i] = Z::from(*c);
            }
            for (j, c) in base.iter().enumerate() {
                v.base[j] = Z::from(*c);
            }
            let text = print_vector(&basis, &v);
            proptest::prop_assert_eq!(parse_vector(&basis, &text).unwrap(), v);
        }
    }

    #[test]
    fn gk_report_shape() {
        let rep = gk_basis_report(15).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.count, 3);
        let json = rep.render(Format::Json);
        assert!(json.contains("\"cardinality\""));
        let human = rep.render(Format::Human);
        assert!(human.contains("expected 3"));
    }

    #[test]
    fn decompose_report_residual() {
        let rep = decompose_report(15, "(1,2;0,1)^1", 256).unwrap();
        assert!(rep.passed());
        assert!(rep.residual < 1e-10);
        assert_eq!(rep.coordinates.len(), 2);
        assert!(matches!(
            decompose_report(15, "(1;0)^1", 256),
            Err(Error::NotUnit(_))
        ));
        assert!(matches!(
            decompose_report(15, "nonsense", 256),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn deployed_report_with_checks() {
        let rep = deployed_report(35, &[2, 6], None, true).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.generators.len(), 5);
        assert!(rep.snf.as_ref().unwrap().iter().all(|d| d == "1"));
        // The one-complex-factor contraction check ran and passed.
        assert!(rep.checks.iter().any(|c| c.name == "real-contraction" && c.pass));
        // Totally real spec: no contraction check.
        let rep = deployed_report(35, &[2, 3], None, true).unwrap();
        assert!(rep.passed());
        assert!(!rep.checks.iter().any(|c| c.name == "real-contraction"));
    }

    #[test]
    fn suite_and_counting_reports() {
        let rep = counting_report(&[2, 3]).unwrap();
        assert!(rep.passed());
        assert!(rep.checks[0].detail.contains("5 = 6 - 1"));
        let suite = suite_report(&[9, 15], 256).unwrap();
        assert!(suite.passed());
        // n=9 is a prime power: no full-level order check, one ratio check.
        let item9 = &suite.items[0];
        assert!(item9.checks.iter().any(|c| c.name == "order-of-ratio"));
        assert!(!item9.checks.iter().any(|c| c.name == "order-of-full-level"));
    }
}
