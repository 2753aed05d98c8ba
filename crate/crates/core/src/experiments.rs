//! Verification harness for the index relation between the Gauss period
//! `α = ζ + ζ⁻¹` in `F_q[x]/Φ_p` and the fundamental unit of `Q(√p)` modulo
//! `q`, together with the predicted and observed distributions of
//! `ind(ε_p mod q)` and the census scan that produces the latter.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::{self, GroupElement};
use crate::cyclo::{self, CycloContext};
use crate::error::{Error, Result};
use crate::quadratic::{self, QuadRing};

/// Largest `p` accepted by [`check_main_theorem`].
pub const DEFAULT_THEOREM_P_CAP: u64 = 1000;

/// Primes are scanned, checkpointed and flushed in blocks of this many.
pub const SCAN_BLOCK: usize = 10_000;

/// Both sides of the index relation for one `(p, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub p: u64,
    pub q: u64,
    /// `gcd(ind(α), q² - 1)` in `F_q[x]/Φ_p`.
    pub lhs: u64,
    /// `ind(ε_p^{h_p} mod q)` in `O_K/qO_K`.
    pub rhs: u64,
    pub h_p: u64,
    pub equal: bool,
}

fn check_theorem_hypotheses(p: u64, q: u64) -> Result<()> {
    let violated = |reason: &str| Error::HypothesisViolated {
        p,
        q,
        reason: reason.into(),
    };
    if !arith::is_prime_u64(p) {
        return Err(violated("p must be prime"));
    }
    if !arith::is_prime_u64(q) {
        return Err(violated("q must be prime"));
    }
    if p % 8 != 5 {
        return Err(violated("p must be congruent to 5 mod 8"));
    }
    if !arith::generated_by_minus_one_and_q(q, p) {
        return Err(violated("<-1, q> is not all of (Z/pZ)*"));
    }
    Ok(())
}

/// Computes both sides for `p ≤ DEFAULT_THEOREM_P_CAP`.
pub fn check_main_theorem(p: u64, q: u64) -> Result<TheoremReport> {
    check_main_theorem_with_cap(p, q, DEFAULT_THEOREM_P_CAP)
}

/// Computes both sides: the left through cyclotomic arithmetic over `F_q`,
/// the right through the continued-fraction unit reduced modulo `q` and the
/// analytic class number. The two paths share only `arith`.
pub fn check_main_theorem_with_cap(p: u64, q: u64, p_cap: u64) -> Result<TheoremReport> {
    check_theorem_hypotheses(p, q)?;
    if p > p_cap {
        return Err(Error::InvalidInput(format!(
            "p = {p} exceeds the cap {p_cap}"
        )));
    }
    let m_fact = arith::factorize_u64(q * q - 1)?;

    let ctx = CycloContext::new(p, q)?;
    let alpha = cyclo::gauss_period(&ctx);
    let lhs = cyclo::index_gcd(&ctx, &alpha, &m_fact)?
        .to_u64()
        .expect("divides q^2 - 1");

    let h_p = quadratic::class_number_real_auto(p)?;
    let rhs = quadratic::rhs_theorem(p, q, h_p)?;

    Ok(TheoremReport {
        p,
        q,
        lhs,
        rhs,
        h_p,
        equal: lhs == rhs,
    })
}

/// Every `p ≤ p_max` satisfying the hypotheses for `q`.
pub fn theorem_primes(q: u64, p_max: u64) -> Vec<u64> {
    arith::primes_up_to(p_max)
        .into_iter()
        .filter(|&p| p % 8 == 5 && p != q && arith::generated_by_minus_one_and_q(q, p))
        .collect()
}

/// Fraction of candidate residues of `ε_p mod q` having each index.
///
/// For odd `q` every non-residue class `p̄` mod `q` gives a field
/// `F_q[X]/(X² - X + (1 - p̄)/4)`; for `q = 2` the single class `p ≡ 5
/// (mod 8)` gives `F_4`. Candidates are the units `a + bX` with
/// `(2a + b)² - p̄b² ≡ -4 (mod q)`. For `q = 2` that congruence holds for all
/// four elements, so the restriction to units removes `0`.
pub fn predict_distribution(q: u64) -> Result<BTreeMap<u64, Ratio<u64>>> {
    if !arith::is_prime_u64(q) {
        return Err(Error::InvalidInput(format!("q = {q} must be prime")));
    }
    let classes: Vec<u64> = if q == 2 {
        vec![5]
    } else {
        (1..q).filter(|&r| arith::jacobi(r as i64, q) == -1).collect()
    };
    let fact = arith::factorize_u64(q * q - 1)?;
    let group_order = q * q - 1;
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    let mut total = 0u64;
    for class in classes {
        let ring = QuadRing::for_residue(class, q)?;
        let p_bar = class % q;
        for e in ring.elements() {
            let (a, b) = (e.a(), e.b());
            let x = (2 * a + b) % q;
            let lhs = (x * x + q * q - (p_bar * b % q) * b % q) % q;
            if lhs != (4 * q - 4) % q || !e.is_unit() {
                continue;
            }
            let ord = arith::order_in_group(&e, &fact)?
                .to_u64()
                .expect("divides q^2 - 1");
            *counts.entry(group_order / ord).or_default() += 1;
            total += 1;
        }
    }
    Ok(counts
        .into_iter()
        .map(|(index, c)| (index, Ratio::new(c, total)))
        .collect())
}

/// Which primes `p` a scan covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanFilter {
    OneMod4,
    FiveMod8,
}

impl ScanFilter {
    pub fn admits(self, p: u64) -> bool {
        match self {
            ScanFilter::OneMod4 => p % 4 == 1,
            ScanFilter::FiveMod8 => p % 8 == 5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ScanFilter::OneMod4 => "1mod4",
            ScanFilter::FiveMod8 => "5mod8",
        }
    }
}

impl fmt::Display for ScanFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScanFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1mod4" => Ok(ScanFilter::OneMod4),
            "5mod8" => Ok(ScanFilter::FiveMod8),
            other => Err(Error::InvalidInput(format!(
                "unknown filter {other:?}; expected 1mod4 or 5mod8"
            ))),
        }
    }
}

impl Serialize for ScanFilter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// One scanned prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    pub p: u64,
    pub q: u64,
    /// `ind(ε_p mod q)`.
    pub index_unit: u64,
    pub p_mod_8: u64,
}

impl ScanRecord {
    /// `ord(ε_p mod q) = (q² - 1)/ind`.
    pub fn order(&self) -> u64 {
        (self.q * self.q - 1) / self.index_unit
    }

    fn to_csv(self) -> String {
        format!("{},{},{},{}", self.p, self.q, self.index_unit, self.p_mod_8)
    }

    fn parse_csv(line: &str) -> Option<Self> {
        let mut it = line.split(',').map(|f| f.parse::<u64>().ok());
        let rec = ScanRecord {
            p: it.next()??,
            q: it.next()??,
            index_unit: it.next()??,
            p_mod_8: it.next()??,
        };
        if it.next().is_some() {
            return None;
        }
        Some(rec)
    }
}

/// `ind(ε_p mod q)` for one prime.
pub fn scan_one(p: u64, q: u64) -> Result<ScanRecord> {
    let unit = quadratic::unit_mod_q(p, q)?;
    Ok(ScanRecord {
        p,
        q,
        index_unit: quadratic::quad_index(&unit, q)?,
        p_mod_8: p % 8,
    })
}

/// Counts and fractions of observed indices.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyTable {
    pub q: u64,
    pub range_max: u64,
    pub filter: ScanFilter,
    pub counts: BTreeMap<u64, u64>,
    pub fractions: BTreeMap<u64, f64>,
}

impl FrequencyTable {
    pub fn from_records(q: u64, range_max: u64, filter: ScanFilter, records: &[ScanRecord]) -> Self {
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for r in records {
            *counts.entry(r.index_unit).or_default() += 1;
        }
        let total = records.len() as f64;
        let fractions = counts
            .iter()
            .map(|(&k, &c)| (k, c as f64 / total))
            .collect();
        FrequencyTable {
            q,
            range_max,
            filter,
            counts,
            fractions,
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn fraction(&self, index: u64) -> f64 {
        self.fractions.get(&index).copied().unwrap_or(0.0)
    }

    /// The summary object written next to the scan CSV.
    pub fn summary_json(&self, predicted: &BTreeMap<u64, Ratio<u64>>) -> serde_json::Value {
        let counts: serde_json::Map<_, _> = self
            .counts
            .iter()
            .map(|(k, v)| (k.to_string(), (*v).into()))
            .collect();
        let fractions: serde_json::Map<_, _> = self
            .fractions
            .iter()
            .map(|(k, v)| (k.to_string(), (*v).into()))
            .collect();
        serde_json::json!({
            "q": self.q,
            "p_max": self.range_max,
            "filter": self.filter.as_str(),
            "counts": counts,
            "fractions": fractions,
            "predicted": ratio_map_json(predicted),
        })
    }
}

/// `{index: "a/b"}`.
pub fn ratio_map_json(map: &BTreeMap<u64, Ratio<u64>>) -> serde_json::Value {
    serde_json::Value::Object(
        map.iter()
            .map(|(k, r)| (k.to_string(), r.to_string().into()))
            .collect(),
    )
}

/// Parameters of a census scan.
#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub q: u64,
    pub p_max: u64,
    pub filter: ScanFilter,
    pub checkpoint: Option<PathBuf>,
    /// Worker threads; `0` uses the rayon default.
    pub jobs: usize,
}

impl ScanConfig {
    pub fn new(q: u64, p_max: u64, filter: ScanFilter) -> Self {
        ScanConfig {
            q,
            p_max,
            filter,
            checkpoint: None,
            jobs: 0,
        }
    }
}

/// Records in ascending `p` and their frequency table.
#[derive(Clone, Debug)]
pub struct ScanOutput {
    pub records: Vec<ScanRecord>,
    pub table: FrequencyTable,
}

impl ScanOutput {
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.records {
            writeln!(out, "{}", r.to_csv())?;
        }
        Ok(())
    }
}

const CSV_HEADER: &str = "p,q,index_unit,p_mod_8";
const MARKER: &str = "last_completed_p=";

/// Scans every prime `p ≤ p_max` passing the filter with `q` inert in
/// `Q(√p)`. Blocks of [`SCAN_BLOCK`] primes are computed in parallel and
/// merged in order of `p`, so the output does not depend on `jobs`. With a
/// checkpoint, each finished block is appended to it and a resumed run
/// skips everything up to the last completed marker.
pub fn scan_observed(config: &ScanConfig) -> Result<ScanOutput> {
    scan_observed_with_progress(config, |_, _| {})
}

/// As [`scan_observed`], calling `progress(done, total)` after each block.
pub fn scan_observed_with_progress<F>(config: &ScanConfig, mut progress: F) -> Result<ScanOutput>
where
    F: FnMut(usize, usize),
{
    let q = config.q;
    if !arith::is_prime_u64(q) {
        return Err(Error::InvalidInput(format!("q = {q} must be prime")));
    }
    if config.p_max < 100 {
        return Err(Error::InvalidInput("p_max must be at least 100".into()));
    }
    let candidates: Vec<u64> = arith::primes_up_to(config.p_max)
        .into_iter()
        .filter(|&p| config.filter.admits(p) && quadratic::is_inert(p, q))
        .collect();

    let (mut records, mut writer) = match &config.checkpoint {
        Some(path) => {
            let (done, last) = resume_checkpoint(path, q)?;
            let file = OpenOptions::new().append(true).open(path)?;
            let remaining = candidates.partition_point(|&p| p <= last);
            (done, Some((BufWriter::new(file), remaining)))
        }
        None => (Vec::new(), None),
    };
    let start = writer.as_ref().map_or(0, |(_, r)| *r);
    records.retain(|r| candidates.binary_search(&r.p).is_ok());

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start {} workers: {e}", config.jobs)))?;

    let blocks: Vec<&[u64]> = candidates[start..].chunks(SCAN_BLOCK).collect();
    let total_blocks = blocks.len();
    for (i, block) in blocks.into_iter().enumerate() {
        let computed: Result<Vec<ScanRecord>> =
            pool.install(|| block.par_iter().map(|&p| scan_one(p, q)).collect());
        let computed = computed?;
        if let Some((w, _)) = writer.as_mut() {
            for r in &computed {
                writeln!(w, "{}", r.to_csv())?;
            }
            writeln!(w, "{MARKER}{}", block.last().expect("chunks are nonempty"))?;
            w.flush()?;
        }
        records.extend(computed);
        progress(i + 1, total_blocks);
    }

    let table = FrequencyTable::from_records(q, config.p_max, config.filter, &records);
    Ok(ScanOutput { records, table })
}

/// Reads a checkpoint, truncating anything after the last completed block.
/// A missing file is created with the CSV header. Returns the completed
/// records and the last completed `p` (0 if none).
fn resume_checkpoint(path: &Path, q: u64) -> Result<(Vec<ScanRecord>, u64)> {
    let corrupt = |reason: String| Error::CheckpointCorrupt {
        path: path.to_path_buf(),
        reason,
    };
    if !path.exists() {
        let mut f = File::create(path)?;
        writeln!(f, "{CSV_HEADER}")?;
        return Ok((Vec::new(), 0));
    }
    let text = fs::read_to_string(path)?;
    let mut lines = text.split_inclusive('\n');
    match lines.next() {
        Some(h) if h.trim_end() == CSV_HEADER => {}
        Some(h) if CSV_HEADER.starts_with(h) && !h.ends_with('\n') => {}
        None => {}
        Some(h) => return Err(corrupt(format!("unexpected header {:?}", h.trim_end()))),
    }
    let mut committed_len = CSV_HEADER.len() + 1;
    let mut offset = committed_len;
    let mut committed = Vec::new();
    let mut pending = Vec::new();
    let mut last = 0u64;
    for line in lines {
        offset += line.len();
        if !line.ends_with('\n') {
            break;
        }
        let body = line.trim_end();
        if let Some(marker) = body.strip_prefix(MARKER) {
            let Ok(p) = marker.parse::<u64>() else {
                break;
            };
            if pending.iter().any(|r: &ScanRecord| r.p > p) || p < last {
                return Err(corrupt(format!("marker {p} out of order")));
            }
            committed.append(&mut pending);
            committed_len = offset;
            last = p;
            continue;
        }
        let Some(rec) = ScanRecord::parse_csv(body) else {
            break;
        };
        if rec.q != q {
            return Err(corrupt(format!("record for q = {} in a scan for q = {q}", rec.q)));
        }
        let prev = pending.last().or(committed.last()).map_or(last, |r| r.p);
        if rec.p <= prev {
            return Err(corrupt(format!("records not ascending at p = {}", rec.p)));
        }
        pending.push(rec);
    }
    if committed_len != text.len() {
        let mut kept = String::from(CSV_HEADER);
        kept.push('\n');
        if committed_len > CSV_HEADER.len() + 1 {
            kept.push_str(&text[CSV_HEADER.len() + 1..committed_len]);
        }
        fs::write(path, kept)?;
    }
    Ok((committed, last))
}

/// Result of checking the two Ishikawa–Kitaoka properties over a scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IkReport {
    pub q: u64,
    pub checked: usize,
    /// First record breaking `(q-1)/2 | ind` or the residue of `ord` mod 8.
    pub counterexample: Option<ScanRecord>,
}

impl IkReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// `(q-1)/2 | ind(ε_p mod q)`, and `ord(ε_p mod q) ≡ 4 (mod 8)` for
/// `q ≡ 1 (mod 4)` or `≡ 0 (mod 8)` for `q ≡ 3 (mod 4)`.
pub fn ik_holds(record: &ScanRecord) -> bool {
    let q = record.q;
    let ord = record.order();
    let expected = if q % 4 == 1 { 4 } else { 0 };
    record.index_unit % ((q - 1) / 2) == 0 && ord % 8 == expected
}

/// Checks the properties over records of an odd `q`.
pub fn ik_check(q: u64, records: &[ScanRecord]) -> Result<IkReport> {
    if q % 2 == 0 {
        return Err(Error::InvalidInput("the properties concern odd q".into()));
    }
    Ok(IkReport {
        q,
        checked: records.len(),
        counterexample: records.iter().copied().find(|r| !ik_holds(r)),
    })
}

/// Scans `p ≡ 1 (mod 4)` up to `p_max` and checks the properties.
pub fn ik_scan(q: u64, p_max: u64) -> Result<IkReport> {
    let out = scan_observed(&ScanConfig::new(q, p_max, ScanFilter::OneMod4))?;
    ik_check(q, &out.records)
}

/// For the reduction `Z/N → Z/M` with `M | N`, checks
/// `ind_H(g mod M) = gcd(ind_G(g), M)` for every `g`, every `M | N` and
/// every `N ≤ n_max`, with orders found by search over divisors. Returns
/// the first `(N, M, g)` that fails.
pub fn projection_lemma_counterexample(n_max: u64) -> Option<(u64, u64, u64)> {
    fn additive_order(g: u64, n: u64, divisors: &[u64]) -> u64 {
        *divisors
            .iter()
            .find(|&&d| (d * g) % n == 0)
            .expect("n itself qualifies")
    }
    for n in 1..=n_max {
        let div_n: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        for &m in &div_n {
            let div_m: Vec<u64> = div_n.iter().copied().filter(|d| m % d == 0).collect();
            for g in 0..n {
                let ind_g = n / additive_order(g, n, &div_n);
                let ind_h = m / additive_order(g % m, m, &div_m);
                if ind_h != ind_g.gcd(&m) {
                    return Some((n, m, g));
                }
            }
        }
    }
    None
}

/// The same statement for any cyclic group element: `g^{(|G|/M)}` plays the
/// role of the image in the quotient of order `M`, and its order is
/// `M / gcd(ind(g), M)`.
pub fn index_of_projection<G: GroupElement>(
    g: &G,
    group_order: &BigUint,
    m_fact: &arith::Factorization,
) -> Result<BigUint> {
    let m = m_fact.value();
    let (cofactor, rem) = group_order.div_rem(m);
    if rem != BigUint::from(0u8) {
        return Err(Error::NotADivisor { m: m.clone() });
    }
    let image = g.pow(&cofactor);
    Ok(m / arith::order_in_group(&image, m_fact)?)
}
