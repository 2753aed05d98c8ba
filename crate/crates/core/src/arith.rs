//! Integer number theory shared by the rest of the crate: primality,
//! factorization, Jacobi symbols and multiplicative orders.
//!
//! Orders are always computed the same way: start from a known multiple `N`
//! of the order together with its factorization, then strip each prime `l`
//! from `N` for as long as `g^(N/l) = 1` still holds. [`GroupElement`]
//! abstracts the group so the routine is shared by `Z/n`, the cyclotomic
//! ring and the quadratic residue ring.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A positive integer together with its prime factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    value: BigUint,
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// Builds a factorization from `(prime, exponent)` pairs, merging repeated
    /// primes and sorting them. Every prime is checked with [`is_prime`].
    pub fn from_factors<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BigUint, u32)>,
    {
        let mut factors: Vec<(BigUint, u32)> = Vec::new();
        for (prime, exp) in pairs {
            if exp == 0 {
                continue;
            }
            if !is_prime(&prime) {
                return Err(Error::InvalidInput(format!("{prime} is not prime")));
            }
            match factors.iter_mut().find(|(p, _)| *p == prime) {
                Some(entry) => entry.1 += exp,
                None => factors.push((prime, exp)),
            }
        }
        factors.sort();
        let value = factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        Ok(Factorization { value, factors })
    }

    /// The factorization of 1.
    pub fn one() -> Self {
        Factorization {
            value: BigUint::one(),
            factors: Vec::new(),
        }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    /// Recomputes the product of all prime powers.
    pub fn multiply_out(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// The factorization of `self * other`.
    pub fn mul(&self, other: &Factorization) -> Factorization {
        let mut factors = self.factors.clone();
        for (p, e) in &other.factors {
            match factors.iter_mut().find(|(q, _)| q == p) {
                Some(entry) => entry.1 += e,
                None => factors.push((p.clone(), *e)),
            }
        }
        factors.sort();
        Factorization {
            value: &self.value * &other.value,
            factors,
        }
    }

    /// Valuation of `prime` in the value.
    pub fn valuation(&self, prime: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(p, _)| p == prime)
            .map_or(0, |(_, e)| *e)
    }

    /// Factorization of a divisor `d` of the value, derived without any new
    /// factoring work.
    pub fn of_divisor(&self, d: &BigUint) -> Result<Factorization> {
        if d.is_zero() || !(&self.value % d).is_zero() {
            return Err(Error::InvalidInput(format!(
                "{d} does not divide {}",
                self.value
            )));
        }
        let mut rest = d.clone();
        let mut factors = Vec::new();
        for (p, _) in &self.factors {
            let mut e = 0;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            if e > 0 {
                factors.push((p.clone(), e));
            }
        }
        debug_assert!(rest.is_one());
        Ok(Factorization {
            value: d.clone(),
            factors,
        })
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Iteration cap for the rho stage of [`factorize`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorBudget {
    pub max_rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        // Enough for a 48-bit second-largest factor with a wide margin.
        FactorBudget {
            max_rho_iterations: 1 << 28,
        }
    }
}

/// First twelve primes: a deterministic Miller-Rabin witness set for every
/// n < 3.3 * 10^24, which covers all of u64.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Extra random rounds above 2^64: 4^-64 = 2^-128 error bound.
const MR_RANDOM_ROUNDS: usize = 64;

#[inline]
fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod_u64(mut base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

fn strong_probable_prime_u64(n: u64, a: u64, d: u64, s: u32) -> bool {
    let mut x = pow_mod_u64(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality test on machine words.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    MR_WITNESSES
        .iter()
        .all(|&a| strong_probable_prime_u64(n, a, d, s))
}

fn strong_probable_prime_big(n: &BigUint, a: &BigUint, d: &BigUint, s: u64) -> bool {
    let n_minus_1 = n - 1u32;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Primality test. Deterministic below 2^64; above that the twelve fixed
/// witnesses are followed by 64 pseudo-random ones, seeded from `n` so the
/// answer is reproducible.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    for &a in &MR_WITNESSES {
        if !strong_probable_prime_big(n, &BigUint::from(a), &d, s) {
            return false;
        }
    }
    let seed = n.iter_u64_digits().fold(0u64, |h, w| {
        h.rotate_left(17) ^ w.wrapping_mul(0x9E37_79B9_7F4A_7C15)
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bits = n.bits();
    for _ in 0..MR_RANDOM_ROUNDS {
        let a = loop {
            let words: Vec<u64> = (0..bits.div_ceil(64)).map(|_| rng.gen()).collect();
            let cand = BigUint::from_slice(
                &words
                    .iter()
                    .flat_map(|w| [*w as u32, (*w >> 32) as u32])
                    .collect::<Vec<_>>(),
            ) % &n_minus_1;
            if cand >= BigUint::from(2u32) {
                break cand;
            }
        };
        if !strong_probable_prime_big(n, &a, &d, s) {
            return false;
        }
    }
    true
}

/// All primes `<= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

const TRIAL_LIMIT: u64 = 10_000;

/// Prime factorization by trial division up to 10^4 followed by Brent's
/// variant of Pollard rho on the cofactor.
///
/// Fails with [`Error::FactorizationTimeout`] once the rho stage has spent
/// `budget.max_rho_iterations` iterations in total.
pub fn factorize(n: &BigUint, budget: FactorBudget) -> Result<Factorization> {
    if n < &BigUint::from(2u32) {
        return Err(Error::InvalidInput(format!("cannot factor {n}")));
    }
    let mut rest = n.clone();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    for p in primes_up_to(TRIAL_LIMIT) {
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut e = 0;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((bp, e));
        }
    }
    let mut spent = 0u64;
    let mut stack = Vec::new();
    if !rest.is_one() {
        stack.push(rest);
    }
    while let Some(m) = stack.pop() {
        if is_prime(&m) {
            match factors.iter_mut().find(|(p, _)| *p == m) {
                Some(entry) => entry.1 += 1,
                None => factors.push((m, 1)),
            }
            continue;
        }
        if let Some(r) = exact_square_root(&m) {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        let d = find_factor(&m, budget.max_rho_iterations, &mut spent).ok_or_else(|| {
            Error::FactorizationTimeout {
                value: n.clone(),
                budget: budget.max_rho_iterations,
            }
        })?;
        let other = &m / &d;
        stack.push(d);
        stack.push(other);
    }
    factors.sort();
    let out = Factorization {
        value: n.clone(),
        factors,
    };
    debug_assert_eq!(out.multiply_out(), *n);
    Ok(out)
}

/// Convenience wrapper around [`factorize`] with the default budget.
pub fn factorize_u64(n: u64) -> Result<Factorization> {
    factorize(&BigUint::from(n), FactorBudget::default())
}

fn exact_square_root(m: &BigUint) -> Option<BigUint> {
    let r = m.sqrt();
    (&r * &r == *m).then_some(r)
}

/// Nontrivial divisor of the composite `m`, trying successive polynomial
/// constants until the shared iteration budget runs out.
fn find_factor(m: &BigUint, budget: u64, spent: &mut u64) -> Option<BigUint> {
    if m.is_even() {
        return Some(BigUint::from(2u32));
    }
    for c in 1u64.. {
        if *spent >= budget {
            return None;
        }
        let found = match m.to_u64() {
            Some(small) => rho_u64(small, c, budget, spent).map(BigUint::from),
            None => rho_big(m, c, budget, spent),
        };
        if let Some(d) = found {
            if !d.is_one() && &d != m {
                return Some(d);
            }
        }
    }
    unreachable!()
}

const RHO_BATCH: u64 = 128;

fn rho_u64(n: u64, c: u64, budget: u64, spent: &mut u64) -> Option<u64> {
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let (mut x, mut ys) = (0u64, 0u64);
    let mut g = 1u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let batch = RHO_BATCH.min(r - k);
            for _ in 0..batch {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            *spent += batch;
            g = q.gcd(&n);
            k += batch;
            if *spent >= budget {
                return None;
            }
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn rho_big(n: &BigUint, c: u64, budget: u64, spent: &mut u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let abs_diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut x = BigUint::zero();
    let mut ys = BigUint::zero();
    let mut g = BigUint::one();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let batch = RHO_BATCH.min(r - k);
            for _ in 0..batch {
                y = f(&y);
                q = q * abs_diff(&x, &y) % n;
            }
            *spent += batch;
            g = q.gcd(n);
            k += batch;
            if *spent >= budget {
                return None;
            }
        }
        r *= 2;
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = abs_diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

/// Jacobi symbol `(a/n)` for odd positive `n`; the Legendre symbol when `n`
/// is prime.
pub fn jacobi(a: i64, n: u64) -> i8 {
    assert!(n % 2 == 1, "jacobi symbol needs an odd modulus, got {n}");
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Inverse of `a` modulo `n`, if it exists.
pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(n as i128));
    (g.gcd == 1).then(|| g.x.rem_euclid(n as i128) as u64)
}

/// An element of a finite multiplicative monoid with a fixed identity.
pub trait GroupElement: Clone {
    /// The identity of the group `self` lives in.
    fn identity_like(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_identity(&self) -> bool;

    fn square(&self) -> Self {
        self.mul(self)
    }

    /// `self^e`, most significant bit first.
    fn pow(&self, e: &BigUint) -> Self {
        let mut acc = self.identity_like();
        for i in (0..e.bits()).rev() {
            acc = acc.square();
            if e.bit(i) {
                acc = acc.mul(self);
            }
        }
        acc
    }
}

/// Least `e > 0` with `g^e = 1`, given a factored multiple of the order.
pub fn order_in_group<G: GroupElement>(g: &G, multiple: &Factorization) -> Result<BigUint> {
    order_in_group_with(g, multiple, |x, e| x.pow(e))
}

/// Same as [`order_in_group`] with a caller-supplied exponentiation, for
/// rings that have something faster than square-and-multiply.
pub fn order_in_group_with<G, F>(g: &G, multiple: &Factorization, pow: F) -> Result<BigUint>
where
    G: GroupElement,
    F: Fn(&G, &BigUint) -> G,
{
    if !pow(g, multiple.value()).is_identity() {
        return Err(Error::OrderNotDividing);
    }
    let mut order = multiple.value().clone();
    for (prime, exp) in multiple.factors() {
        for _ in 0..*exp {
            let candidate = &order / prime;
            if pow(g, &candidate).is_identity() {
                order = candidate;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

/// Residue class in `(Z/nZ)*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModUnit {
    value: u64,
    modulus: u64,
}

impl ModUnit {
    pub fn new(value: i64, modulus: u64) -> Self {
        ModUnit {
            value: value.rem_euclid(modulus as i64) as u64,
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }
}

impl GroupElement for ModUnit {
    fn identity_like(&self) -> Self {
        ModUnit {
            value: 1 % self.modulus,
            modulus: self.modulus,
        }
    }

    fn mul(&self, other: &Self) -> Self {
        ModUnit {
            value: mul_mod(self.value, other.value, self.modulus),
            modulus: self.modulus,
        }
    }

    fn is_identity(&self) -> bool {
        self.value == 1 % self.modulus
    }

    fn pow(&self, e: &BigUint) -> Self {
        let value = match e.to_u64() {
            Some(small) => pow_mod_u64(self.value, small, self.modulus),
            None => {
                let m = BigUint::from(self.modulus);
                BigUint::from(self.value)
                    .modpow(e, &m)
                    .to_u64()
                    .expect("residue fits")
            }
        };
        ModUnit {
            value,
            modulus: self.modulus,
        }
    }
}

/// Multiplicative order of `a` modulo `n`, given a factored multiple of it
/// (for prime `n`, the factorization of `n - 1`).
pub fn order_mod(a: i64, n: u64, group_order: &Factorization) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    let unit = ModUnit::new(a, n);
    if unit.value.gcd(&n) != 1 {
        return Err(Error::NotAUnit {
            value: a.to_string(),
            modulus: n.to_string(),
        });
    }
    let order = order_in_group(&unit, group_order)?;
    Ok(order.to_u64().expect("order is at most n"))
}

/// Order of `q` modulo the odd prime `p`.
pub fn order_mod_prime(q: u64, p: u64) -> Result<u64> {
    let fact = factorize_u64(p - 1)?;
    order_mod(q as i64, p, &fact)
}

/// Whether `-1` and `q` together generate `(Z/pZ)*`.
///
/// The group is cyclic, so `-1` lies in `<q>` exactly when `ord_p(q)` is
/// even; the generated subgroup therefore has order `ord_p(q)` or
/// `2 ord_p(q)`.
pub fn generated_by_minus_one_and_q(q: u64, p: u64) -> bool {
    if p < 3 || p % 2 == 0 || q % p == 0 {
        return false;
    }
    let Ok(k) = order_mod_prime(q % p, p) else {
        return false;
    };
    k == p - 1 || (2 * k == p - 1 && k % 2 == 1)
}
