//! Heuristic densities: how often 3 divides `ind(ζ + ζ⁻¹)` for `q = 2`, and
//! the expected number of Sophie Germain primes `r ≥ 593` for which the
//! Gauss period in `F_{2^r}` fails to be a primitive root.

use serde::Serialize;

use crate::arith;

/// The Hardy-Littlewood twin prime constant `∏_{p>2} (1 - 1/(p-1)²)`.
pub const TWIN_PRIME_CONSTANT: f64 = 0.660_161_815_846_869_6;

/// The two-digit value used in the literature estimate.
pub const TWIN_PRIME_CONSTANT_ROUNDED: f64 = 0.66;

/// `1 - ∏_{k=2}^{k_max} (1 - 3^{-k})`. The neglected tail changes the
/// value by less than `3^{-k_max}`.
pub fn cohen_lenstra_3(k_max: u32) -> f64 {
    assert!(k_max >= 2, "k_max must be at least 2");
    let mut prod = 1.0;
    let mut pow = 1.0 / 3.0;
    for _ in 2..=k_max {
        pow /= 3.0;
        prod *= 1.0 - pow;
    }
    1.0 - prod
}

/// Probability that `ε_p ≡ 1 (mod 2)` (taken as 1/3) or `3 | h_p` (taken as
/// `cl3`), treating the two as independent.
pub fn combined_probability_with(cl3: f64) -> f64 {
    1.0 - (1.0 - 1.0 / 3.0) * (1.0 - cl3)
}

pub fn combined_probability() -> f64 {
    combined_probability_with(cohen_lenstra_3(60))
}

/// Quadrature rule used for [`gv_expectation_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    DoubleExponential,
    ClenshawCurtis,
}

fn integrate<F: Fn(f64) -> f64>(rule: Rule, f: F, tol: f64) -> f64 {
    match rule {
        Rule::DoubleExponential => quadrature::double_exponential::integrate(f, 0.0, 1.0, tol).integral,
        Rule::ClenshawCurtis => quadrature::clenshaw_curtis::integrate(f, 0.0, 1.0, tol).integral,
    }
}

/// `∫_a^∞ dl/(l² log l)`, after `l = a/t`:
/// `∫_0^1 dt / (a log(a/t))`.
pub fn inner_integral(a: f64, rule: Rule, tol: f64) -> f64 {
    assert!(a > 1.0);
    let ln_a = a.ln();
    integrate(
        rule,
        |t| {
            if t <= 0.0 {
                0.0
            } else {
                1.0 / (a * (ln_a - t.ln()))
            }
        },
        tol,
    )
}

/// `∫_{r_min}^∞ 2C/log²r · (∫_{2r+1}^∞ dl/(l² log l)) dr`.
pub fn gv_expectation(r_min: f64, c: f64) -> f64 {
    gv_expectation_with(r_min, c, Rule::DoubleExponential, 1e-12)
}

/// As [`gv_expectation`] with an explicit rule and tolerance. With
/// `r = e^s` and `s = log(r_min)/t` the outer integral becomes
/// `∫_0^1 2C e^s I(2e^s + 1) log(r_min) / (s² t²) dt` whose integrand is
/// bounded, since `I(a) ~ 1/(a log a)`.
pub fn gv_expectation_with(r_min: f64, c: f64, rule: Rule, tol: f64) -> f64 {
    assert!(r_min >= 3.0, "r_min must be at least 3");
    let s0 = r_min.ln();
    let outer = |t: f64| {
        if t <= 1e-6 {
            // s > 10^6 log(r_min): the integrand is O(t) there.
            return 0.0;
        }
        let s = s0 / t;
        let a = 2.0 * s.exp() + 1.0;
        // e^s I(2e^s + 1) → 1/(2 log(2e^s)) once e^s overflows
        let weight = if a.is_finite() {
            s.exp() * inner_integral(a, rule, tol)
        } else {
            1.0 / (2.0 * (s + 2f64.ln()))
        };
        2.0 * c * weight * s0 / (s * s * t * t)
    };
    integrate(rule, outer, tol)
}

/// `Σ_{r} Σ_{ℓ} 1/ℓ²` over Sophie Germain primes `r_min ≤ r ≤ r_max` and
/// primes `2r < ℓ ≤ l_max`: a finite piece of the sum the integral
/// approximates.
pub fn sophie_germain_sum(r_min: u64, r_max: u64, l_max: u64) -> f64 {
    let primes = arith::primes_up_to(l_max.max(2 * r_max + 1));
    let in_range: Vec<u64> = primes.iter().copied().filter(|&l| l <= l_max).collect();
    // tail[i] = Σ_{j ≥ i} 1/ℓ_j², summed from the small end of the tail
    // first for accuracy.
    let mut tail = vec![0.0; in_range.len() + 1];
    for i in (0..in_range.len()).rev() {
        let l = in_range[i] as f64;
        tail[i] = tail[i + 1] + 1.0 / (l * l);
    }
    primes
        .iter()
        .copied()
        .filter(|&r| r >= r_min && r <= r_max && primes.binary_search(&(2 * r + 1)).is_ok())
        .map(|r| tail[in_range.partition_point(|&l| l <= 2 * r)])
        .sum()
}

/// The four constants with the parameters used to obtain them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeuristicConstants {
    pub twin_prime_c: f64,
    pub cohen_lenstra_3: f64,
    pub cohen_lenstra_k_max: u32,
    pub combined_prob: f64,
    pub gv_expectation: f64,
    pub gv_r_min: f64,
    pub gv_tolerance: f64,
}

impl HeuristicConstants {
    /// With `rounded_c` the twin prime constant is taken as 0.66.
    pub fn compute(rounded_c: bool) -> Self {
        let c = if rounded_c {
            TWIN_PRIME_CONSTANT_ROUNDED
        } else {
            TWIN_PRIME_CONSTANT
        };
        let k_max = 60;
        let cl3 = cohen_lenstra_3(k_max);
        let tol = 1e-12;
        HeuristicConstants {
            twin_prime_c: c,
            cohen_lenstra_3: cl3,
            cohen_lenstra_k_max: k_max,
            combined_prob: combined_probability_with(cl3),
            gv_expectation: gv_expectation_with(593.0, c, Rule::DoubleExponential, tol),
            gv_r_min: 593.0,
            gv_tolerance: tol,
        }
    }
}
