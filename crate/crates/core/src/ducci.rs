//! Ducci sequences `(x_1, ..., x_p) ↦ (|x_1 - x_2|, ..., |x_p - x_1|)` of odd
//! prime length and the equivalences tying their periods to the index of
//! `ζ + 1` in `F_{2^(p-1)}`.
//!
//! Every orbit eventually consists of vectors `c·b` with `b ∈ {0,1}^p`, on
//! which the map acts as `b ↦ (1 + S)b` over `F_2`, `S` the cyclic shift.
//! The fast path runs the integer map until that happens and then finds the
//! period as the order of `1 + S` on the cyclic submodule generated by `b`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, FactorBudget, Factorization, GroupElement};
use crate::cyclo::{self, CycloContext, CycloElem};
use crate::error::{Error, Result};
use crate::quadratic;

/// Largest length handled by the bitmask fast path.
pub const FAST_PATH_MAX_P: usize = 127;

/// A vector of nonnegative integers whose length is an odd prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DucciState {
    entries: Vec<u64>,
}

impl DucciState {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        let p = entries.len() as u64;
        if p < 3 || !arith::is_prime_u64(p) {
            return Err(Error::InvalidInput(format!(
                "length {p} is not an odd prime"
            )));
        }
        Ok(DucciState { entries })
    }

    /// The 0/1 vector whose bit `i` is entry `i`.
    pub fn from_bits(p: usize, bits: u128) -> Result<Self> {
        if p > FAST_PATH_MAX_P {
            return Err(Error::InvalidInput(format!("length {p} exceeds {FAST_PATH_MAX_P}")));
        }
        Self::new((0..p).map(|i| ((bits >> i) & 1) as u64).collect())
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn scaled(&self, c: u64) -> Self {
        DucciState {
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    /// Entries joined by `;`.
    pub fn encoding(&self) -> String {
        let parts: Vec<String> = self.entries.iter().map(u64::to_string).collect();
        parts.join(";")
    }

    /// `(c, b)` with `self = c·b`, `b` a 0/1 vector, when all nonzero
    /// entries are equal.
    fn as_scaled_bits(&self) -> Option<(u64, u128)> {
        if self.len() > FAST_PATH_MAX_P {
            return None;
        }
        let mut c = 0;
        let mut bits = 0u128;
        for (i, &x) in self.entries.iter().enumerate() {
            if x == 0 {
                continue;
            }
            if c == 0 {
                c = x;
            } else if x != c {
                return None;
            }
            bits |= 1 << i;
        }
        Some((c, bits))
    }
}

impl fmt::Display for DucciState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

pub fn ducci_step(v: &DucciState) -> DucciState {
    let e = &v.entries;
    let p = e.len();
    DucciState {
        entries: (0..p).map(|i| e[i].abs_diff(e[(i + 1) % p])).collect(),
    }
}

/// Steps before the orbit enters its cycle, and the cycle length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub transient: u64,
    pub period: u64,
}

/// Orbit by storing every visited state until one repeats.
pub fn orbit_by_hashing(v: &DucciState, max_steps: u64) -> Result<Orbit> {
    let mut seen: HashMap<DucciState, u64> = HashMap::new();
    let mut state = v.clone();
    for step in 0..=max_steps {
        if let Some(&first) = seen.get(&state) {
            return Ok(Orbit {
                transient: first,
                period: step - first,
            });
        }
        let next = ducci_step(&state);
        seen.insert(state, step);
        state = next;
    }
    Err(Error::BudgetExhausted { max_steps })
}

/// Least `P` such that the orbit of `v` is eventually `P`-periodic, by
/// stored-state cycle detection.
pub fn eventual_period(v: &DucciState, max_steps: u64) -> Result<u64> {
    Ok(orbit_by_hashing(v, max_steps)?.period)
}

/// `F_2[S]/(S^p - 1)` on bitmasks.
#[derive(Clone, Copy, Debug)]
struct BinaryCirculant {
    p: usize,
    mask: u128,
}

impl BinaryCirculant {
    fn new(p: usize) -> Self {
        BinaryCirculant {
            p,
            mask: (1u128 << p) - 1,
        }
    }

    fn rotate_left(&self, w: u128, k: usize) -> u128 {
        let k = k % self.p;
        if k == 0 {
            return w;
        }
        ((w << k) | (w >> (self.p - k))) & self.mask
    }

    fn mul(&self, a: u128, b: u128) -> u128 {
        let mut out = 0;
        for k in 0..self.p {
            if (a >> k) & 1 == 1 {
                out ^= self.rotate_left(b, k);
            }
        }
        out
    }

    /// `(1 + S⁻¹)^e` where `S⁻¹` sends bit `i + 1` to bit `i`, so that one
    /// Ducci step on 0/1 vectors is multiplication by it.
    fn step_power(&self, e: &BigUint) -> u128 {
        let step = 1 | (1u128 << (self.p - 1));
        let mut acc = 1u128;
        for i in (0..e.bits()).rev() {
            acc = self.mul(acc, acc);
            if e.bit(i) {
                acc = self.mul(acc, step);
            }
        }
        acc
    }

    fn apply_power(&self, w: u128, e: &BigUint) -> u128 {
        self.mul(self.step_power(e), w)
    }

    fn step(&self, w: u128) -> u128 {
        w ^ self.rotate_left(w, self.p - 1)
    }
}

/// Fast orbit computation for one length `p ≤ FAST_PATH_MAX_P`.
#[derive(Clone, Debug)]
pub struct DucciAnalyzer {
    p: usize,
    ring: BinaryCirculant,
    /// `2^(p-1) - 1`, a multiple of every binary period.
    multiple: Arc<Factorization>,
}

impl DucciAnalyzer {
    pub fn new(p: usize) -> Result<Self> {
        if !(3..=FAST_PATH_MAX_P).contains(&p) || !arith::is_prime_u64(p as u64) {
            return Err(Error::InvalidInput(format!(
                "length {p} must be an odd prime at most {FAST_PATH_MAX_P}"
            )));
        }
        let n = (p - 1) / 2;
        let two = BigUint::from(2u8);
        let minus = factor_or_one(&(two.pow(n as u32) - 1u8))?;
        let plus = factor_or_one(&(two.pow(n as u32) + 1u8))?;
        Ok(DucciAnalyzer {
            p,
            ring: BinaryCirculant::new(p),
            multiple: Arc::new(minus.mul(&plus)),
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Period of a 0/1 vector of even weight, which lies on its cycle.
    fn binary_period(&self, w: u128) -> u64 {
        if w == 0 {
            return 1;
        }
        let mut period = self.multiple.value().clone();
        debug_assert_eq!(self.ring.apply_power(w, &period), w);
        for (prime, exp) in self.multiple.factors() {
            for _ in 0..*exp {
                let (cand, rem) = period.div_rem(prime);
                debug_assert!(rem.is_zero());
                if self.ring.apply_power(w, &cand) == w {
                    period = cand;
                } else {
                    break;
                }
            }
        }
        period.to_u64().expect("period below 2^126")
    }

    /// Runs the integer map until the state is `c·b` with `b` a 0/1 vector,
    /// then finishes on bitmasks.
    pub fn orbit(&self, v: &DucciState, max_steps: u64) -> Result<Orbit> {
        if v.len() != self.p {
            return Err(Error::InvalidInput(format!(
                "state has length {}, analyzer expects {}",
                v.len(),
                self.p
            )));
        }
        let mut state = v.clone();
        for step in 0..=max_steps {
            if let Some((_, bits)) = state.as_scaled_bits() {
                let (transient, w) = if bits.count_ones() % 2 == 0 {
                    (step, bits)
                } else {
                    (step + 1, self.ring.step(bits))
                };
                return Ok(Orbit {
                    transient,
                    period: self.binary_period(w),
                });
            }
            state = ducci_step(&state);
        }
        Err(Error::BudgetExhausted { max_steps })
    }

    pub fn eventual_period(&self, v: &DucciState, max_steps: u64) -> Result<u64> {
        Ok(self.orbit(v, max_steps)?.period)
    }
}

fn factor_or_one(n: &BigUint) -> Result<Factorization> {
    if n.is_one() {
        Ok(Factorization::one())
    } else {
        arith::factorize(n, FactorBudget::default())
    }
}

/// `p·ord(α)` for `α = ζ + ζ⁻¹ ∈ F_{2^n}`, which equals `ord(ζ + 1)` when 2
/// is a primitive root mod `p`.
pub fn algebraic_period(p: u64) -> Result<BigUint> {
    let (ctx, fact) = binary_context(p)?;
    let ord = cyclo::full_order(&ctx, &cyclo::gauss_period(&ctx), &fact)?;
    Ok(ord * p)
}

fn binary_context(p: u64) -> Result<(Arc<CycloContext>, Factorization)> {
    if arith::order_mod_prime(2, p)? != p - 1 {
        return Err(Error::HypothesisViolated {
            p,
            q: 2,
            reason: "2 is not a primitive root mod p".into(),
        });
    }
    let ctx = CycloContext::new(p, 2)?;
    let fact = arith::factorize(ctx.group_order(), FactorBudget::default())?;
    Ok((ctx, fact))
}

/// `ord(ζ + 1)` computed directly in `F_{2^(p-1)}`.
pub fn order_of_zeta_plus_one(p: u64) -> Result<BigUint> {
    let (ctx, fact_minus) = binary_context(p)?;
    let n = ctx.n() as u32;
    let plus = BigUint::from(2u8).pow(n) + 1u8;
    let fact = fact_minus.mul(&arith::factorize(&plus, FactorBudget::default())?);
    let beta = CycloElem::zeta(&ctx).add(&CycloElem::one(&ctx))?;
    cyclo::full_order(&ctx, &beta, &fact)
}

/// One evaluated start vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StartPeriod {
    pub p: u64,
    pub start_encoding: String,
    pub transient: u64,
    pub period: u64,
}

/// Every vector in `{0,1}^p`.
pub fn exhaustive_binary_starts(p: usize) -> Result<Vec<DucciState>> {
    if p > 20 {
        return Err(Error::InvalidInput(format!(
            "exhaustive enumeration of 2^{p} starts refused"
        )));
    }
    (0..1u128 << p).map(|bits| DucciState::from_bits(p, bits)).collect()
}

/// `count` starts with entries below `bound`, drawn from ChaCha8 seeded
/// with `seed`.
pub fn random_starts(p: usize, count: usize, bound: u64, seed: u64) -> Result<Vec<DucciState>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| DucciState::new((0..p).map(|_| rng.gen_range(0..bound)).collect()))
        .collect()
}

/// Orbits of many starts, evaluated in parallel and returned in input
/// order.
pub fn periods_of(analyzer: &DucciAnalyzer, starts: &[DucciState], max_steps: u64) -> Result<Vec<StartPeriod>> {
    starts
        .par_iter()
        .map(|s| {
            let orbit = analyzer.orbit(s, max_steps)?;
            Ok(StartPeriod {
                p: analyzer.p as u64,
                start_encoding: s.encoding(),
                transient: orbit.transient,
                period: orbit.period,
            })
        })
        .collect()
}

/// How the period statement was tested.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodCheck {
    /// `p(2^n - 1)/3`.
    pub bound: String,
    pub exhaustive_starts: usize,
    pub random_starts: usize,
    pub max_period: u64,
    pub all_divide: bool,
    /// A start whose period does not divide the bound.
    pub witness: Option<StartPeriod>,
}

/// Truth values of the four equivalent statements for one `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryReport {
    pub p: u64,
    pub ord_alpha: String,
    pub ord_zeta_plus_one: String,
    pub algebraic_period: String,
    /// `3 | ind(ζ + 1)`.
    pub three_divides_index_beta: bool,
    /// `3 | ind(ζ + ζ⁻¹)`.
    pub three_divides_index_alpha: bool,
    pub periods: PeriodCheck,
    /// `ε_p ≡ 1 (mod 2O_K)`.
    pub unit_is_one_mod_two: bool,
    pub h_p: u64,
    /// `ε_p ≡ 1 (mod 2O_K)` or `3 | h_p`.
    pub unit_or_class_number: bool,
    /// The three computed statements agree, and the period statement
    /// matches them: every tested period divides the bound when they hold,
    /// and a witness was found when they fail.
    pub consistent: bool,
}

/// Options for [`verify_corollary`].
#[derive(Clone, Copy, Debug)]
pub struct CorollaryOptions {
    /// Enumerate all of `{0,1}^p` when `p` is at most this.
    pub exhaustive_max_p: usize,
    pub samples: usize,
    pub entry_bound: u64,
    pub seed: u64,
    pub max_steps: u64,
}

impl Default for CorollaryOptions {
    fn default() -> Self {
        CorollaryOptions {
            exhaustive_max_p: 13,
            samples: 1000,
            entry_bound: 1 << 16,
            seed: 0,
            max_steps: 1 << 20,
        }
    }
}

pub fn verify_corollary(p: u64, options: CorollaryOptions) -> Result<CorollaryReport> {
    if p % 8 != 5 {
        return Err(Error::HypothesisViolated {
            p,
            q: 2,
            reason: "p must be congruent to 5 mod 8".into(),
        });
    }
    let (ctx, fact_n) = binary_context(p)?;
    let n = ctx.n() as u32;
    let two = BigUint::from(2u8);
    let group_n = two.pow(n) - 1u8;
    let group_full = two.pow(2 * n) - 1u8;
    let three = BigUint::from(3u8);

    let ord_alpha = cyclo::full_order(&ctx, &cyclo::gauss_period(&ctx), &fact_n)?;
    let ord_beta = order_of_zeta_plus_one(p)?;
    let algebraic = &ord_alpha * p;
    let one = (&group_full / &ord_beta).is_multiple_of(&three);
    let two_holds = (&group_n / &ord_alpha).is_multiple_of(&three);

    let unit_is_one = quadratic::unit_mod_q(p, 2)?.is_identity();
    let h_p = quadratic::class_number_real_auto(p)?;
    let four = unit_is_one || h_p % 3 == 0;

    let analyzer = DucciAnalyzer::new(p as usize)?;
    let mut starts = Vec::new();
    let exhaustive = p as usize <= options.exhaustive_max_p;
    if exhaustive {
        starts.extend(exhaustive_binary_starts(p as usize)?);
    }
    let exhaustive_count = starts.len();
    starts.extend(random_starts(p as usize, options.samples, options.entry_bound, options.seed)?);
    let results = periods_of(&analyzer, &starts, options.max_steps)?;
    let bound = (&group_n * p) / &three;
    let bound_u64 = bound.to_u64();
    let divides = |period: u64| bound_u64.is_some_and(|b| b % period == 0);
    let witness = results.iter().find(|r| !divides(r.period)).cloned();
    let max_period = results.iter().map(|r| r.period).max().unwrap_or(1);
    let periods = PeriodCheck {
        bound: bound.to_string(),
        exhaustive_starts: exhaustive_count,
        random_starts: options.samples,
        max_period,
        all_divide: witness.is_none(),
        witness,
    };

    let consistent = one == two_holds
        && two_holds == four
        && periods.all_divide == one
        && BigUint::from(max_period) <= algebraic;

    Ok(CorollaryReport {
        p,
        ord_alpha: ord_alpha.to_string(),
        ord_zeta_plus_one: ord_beta.to_string(),
        algebraic_period: algebraic.to_string(),
        three_divides_index_beta: one,
        three_divides_index_alpha: two_holds,
        periods,
        unit_is_one_mod_two: unit_is_one,
        h_p,
        unit_or_class_number: four,
        consistent,
    })
}

/// Primes `p ≡ 5 (mod 8)` up to `p_max` with 2 a primitive root.
pub fn corollary_primes(p_max: u64) -> Vec<u64> {
    arith::primes_up_to(p_max)
        .into_iter()
        .filter(|&p| p % 8 == 5 && arith::order_mod_prime(2, p).ok() == Some(p - 1))
        .collect()
}
