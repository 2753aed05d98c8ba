//! Real quadratic fields `K = Q(√p)` for primes `p ≡ 1 (mod 4)`.
//!
//! `O_K = Z[ω]` with `ω = (1 + √p)/2`, so `O_K ≅ Z[X]/(X² - X + (1 - p)/4)`.
//! The fundamental unit `ε_p = (x + y√p)/2` comes from the least solution of
//! `x² - p y² = -4`, read off the continued fraction of `ω`; its image in
//! `O_K/qO_K` is `(x - y)/2 + yX`.

use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{self, GroupElement};
use crate::error::{Error, Result};

fn check_prime_one_mod_four(p: u64) -> Result<()> {
    if p % 4 != 1 || !arith::is_prime_u64(p) {
        return Err(Error::InvalidInput(format!(
            "p = {p} must be a prime congruent to 1 mod 4"
        )));
    }
    Ok(())
}

/// Least positive solution of `x² - p y² = -4`, i.e. `ε_p = (x + y√p)/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub p: u64,
    pub x: BigUint,
    pub y: BigUint,
}

impl FundamentalUnit {
    /// `ε_p` as a half-integer pair.
    pub fn as_half_integer(&self) -> HalfInteger {
        HalfInteger {
            p: self.p,
            u: BigInt::from(self.x.clone()),
            v: BigInt::from(self.y.clone()),
        }
    }

    /// `x² - p y²`; always `-4`.
    pub fn norm_times_four(&self) -> BigInt {
        let x = BigInt::from(self.x.clone());
        let y = BigInt::from(self.y.clone());
        &x * &x - BigInt::from(self.p) * &y * &y
    }
}

/// `(u + v√p)/2` with `u ≡ v (mod 2)`, an element of `O_K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfInteger {
    pub p: u64,
    pub u: BigInt,
    pub v: BigInt,
}

impl HalfInteger {
    pub fn one(p: u64) -> Self {
        HalfInteger {
            p,
            u: BigInt::from(2),
            v: BigInt::zero(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let p = BigInt::from(self.p);
        let u = &self.u * &other.u + &p * &self.v * &other.v;
        let v = &self.u * &other.v + &other.u * &self.v;
        debug_assert!(u.is_even() && v.is_even());
        HalfInteger {
            p: self.p,
            u: u / 2,
            v: v / 2,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = HalfInteger::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `(u² - p v²)/4`.
    pub fn norm(&self) -> BigInt {
        (&self.u * &self.u - BigInt::from(self.p) * &self.v * &self.v) / 4
    }
}

/// Continued fraction of `ω = (1 + √p)/2` up to the end of its first
/// period. Complete quotients are `(P + √p)/Q` with small exact integers;
/// the period ends when `Q` returns to 2.
fn unit_partial_quotients(p: u64) -> Vec<u64> {
    let root = p.sqrt() as i64;
    let d = p as i64;
    let (mut big_p, mut big_q) = (1i64, 2i64);
    let mut quotients = Vec::new();
    loop {
        let a = (big_p + root).div_euclid(big_q);
        quotients.push(a as u64);
        big_p = a * big_q - big_p;
        big_q = (d - big_p * big_p) / big_q;
        debug_assert!(big_q > 0);
        if big_q == 2 {
            return quotients;
        }
    }
}

/// Fundamental unit of `Q(√p)` for a prime `p ≡ 1 (mod 4)`.
///
/// If `h_k/k_k` is the last convergent of the first period of `ω`, then
/// `h_k - k_k ω̄` is the unit, which is `x = 2h_k - k_k`, `y = k_k`.
pub fn fundamental_unit(p: u64) -> Result<FundamentalUnit> {
    check_prime_one_mod_four(p)?;
    let (mut h_prev, mut h) = (BigUint::zero(), BigUint::one());
    let (mut k_prev, mut k) = (BigUint::one(), BigUint::zero());
    for a in unit_partial_quotients(p) {
        let h_next = &h * a + &h_prev;
        let k_next = &k * a + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    }
    let x = (&h << 1u32) - &k;
    let unit = FundamentalUnit { p, x, y: k };
    assert_eq!(
        unit.norm_times_four(),
        BigInt::from(-4),
        "continued fraction of (1+sqrt({p}))/2 did not produce a norm -1 unit"
    );
    Ok(unit)
}

/// `(x mod m, y mod m)` for the fundamental solution, carrying the
/// convergents only modulo `m`.
pub fn fundamental_unit_mod(p: u64, m: u64) -> Result<(u64, u64)> {
    check_prime_one_mod_four(p)?;
    if m == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    let m128 = m as u128;
    let (mut h_prev, mut h) = (0u128, 1 % m128);
    let (mut k_prev, mut k) = (1 % m128, 0u128);
    for a in unit_partial_quotients(p) {
        let a = a as u128 % m128;
        let h_next = (a * h + h_prev) % m128;
        let k_next = (a * k + k_prev) % m128;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    }
    let x = (2 * h + m128 - k) % m128;
    Ok((x as u64, k as u64))
}

/// The ring `(Z/m)[X]/(X² - X + c)` with `c = (1 - p)/4 mod m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadRing {
    modulus: u64,
    /// Residue of `p` modulo `m` (modulo 8 when `m = 2`).
    p_class: u64,
    c: u64,
}

impl QuadRing {
    /// Ring attached to the actual prime `p`.
    pub fn for_prime(p: u64, m: u64) -> Result<Self> {
        check_prime_one_mod_four(p)?;
        if m == 0 {
            return Err(Error::InvalidInput("modulus must be positive".into()));
        }
        let quarter = ((p - 1) / 4) % m;
        let p_class = if m == 2 { p % 8 } else { p % m };
        Ok(QuadRing {
            modulus: m,
            p_class,
            c: (m - quarter) % m,
        })
    }

    /// Ring attached to a residue class of `p` modulo the prime `q`. For odd
    /// `q` the class is taken mod `q` and `(1 - p)/4` becomes
    /// `(1 - p)·4⁻¹`; for `q = 2` the class is taken mod 8 and must be 5,
    /// giving the field with four elements.
    pub fn for_residue(p_class: u64, q: u64) -> Result<Self> {
        if q == 2 {
            if p_class % 8 != 5 {
                return Err(Error::NotInert { p: p_class, q });
            }
            return Ok(QuadRing {
                modulus: 2,
                p_class: 5,
                c: 1,
            });
        }
        if q % 2 == 0 || !arith::is_prime_u64(q) {
            return Err(Error::InvalidInput(format!("q = {q} must be prime")));
        }
        let inv4 = arith::mod_inverse(4, q).expect("q is odd");
        let one_minus_p = (1 + q - p_class % q) % q;
        Ok(QuadRing {
            modulus: q,
            p_class: p_class % q,
            c: (one_minus_p as u128 * inv4 as u128 % q as u128) as u64,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn p_class(&self) -> u64 {
        self.p_class
    }

    /// Whether the ring is a field (the modulus is a prime inert in `K`).
    pub fn is_field(&self) -> bool {
        let q = self.modulus;
        if q == 2 {
            return self.c == 1;
        }
        arith::is_prime_u64(q) && arith::jacobi(self.p_class as i64, q) == -1
    }

    pub fn elem(&self, a: u64, b: u64) -> QuadElem {
        QuadElem {
            ring: *self,
            a: a % self.modulus,
            b: b % self.modulus,
        }
    }

    pub fn one(&self) -> QuadElem {
        self.elem(1, 0)
    }

    /// All `m²` elements.
    pub fn elements(&self) -> impl Iterator<Item = QuadElem> + '_ {
        let m = self.modulus;
        (0..m).flat_map(move |a| (0..m).map(move |b| self.elem(a, b)))
    }
}

/// `a + bX` in a [`QuadRing`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadElem {
    ring: QuadRing,
    a: u64,
    b: u64,
}

impl QuadElem {
    pub fn ring(&self) -> &QuadRing {
        &self.ring
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// `(a + bX)(a + bX̄) = a² + ab + c b²`.
    pub fn norm(&self) -> u64 {
        let m = self.ring.modulus as u128;
        let (a, b, c) = (self.a as u128, self.b as u128, self.ring.c as u128);
        ((a * a + a * b + c * (b * b % m)) % m) as u64
    }

    pub fn is_unit(&self) -> bool {
        self.norm().gcd(&self.ring.modulus) == 1
    }

    pub fn pow_u64(&self, e: u64) -> QuadElem {
        GroupElement::pow(self, &BigUint::from(e))
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}X (mod {})", self.a, self.b, self.ring.modulus)
    }
}

impl GroupElement for QuadElem {
    fn identity_like(&self) -> Self {
        self.ring.one()
    }

    fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.ring, other.ring);
        let m = self.ring.modulus as u128;
        let (a, b) = (self.a as u128, self.b as u128);
        let (a2, b2) = (other.a as u128, other.b as u128);
        let bb = b * b2 % m;
        // X² = X - c
        let new_a = (a * a2 + (m - self.ring.c as u128) * bb) % m;
        let new_b = (a * b2 + a2 * b + bb) % m;
        QuadElem {
            ring: self.ring,
            a: new_a as u64,
            b: new_b as u64,
        }
    }

    fn is_identity(&self) -> bool {
        self.a == 1 % self.ring.modulus && self.b == 0
    }
}

/// Whether `q` is inert in `Q(√p)`: `q = 2` with `p ≡ 5 (mod 8)`, or odd
/// `q` with `(p/q) = -1`.
pub fn is_inert(p: u64, q: u64) -> bool {
    if q == 2 {
        p % 8 == 5
    } else {
        q % 2 == 1 && q != p && arith::jacobi(p as i64, q) == -1
    }
}

/// `ε_p mod qO_K` as `(x - y)/2 + yX`. The pair `(x, y)` is computed modulo
/// `2q` so that halving `x - y` is exact before reducing modulo `q`.
pub fn unit_mod_q(p: u64, q: u64) -> Result<QuadElem> {
    check_prime_one_mod_four(p)?;
    if !arith::is_prime_u64(q) || !is_inert(p, q) {
        return Err(Error::NotInert { p, q });
    }
    let two_q = 2 * q;
    let (x, y) = fundamental_unit_mod(p, two_q)?;
    let diff = (x + two_q - y) % two_q;
    debug_assert!(diff % 2 == 0);
    let ring = QuadRing::for_prime(p, q)?;
    Ok(ring.elem(diff / 2, y % q))
}

/// Multiplicative order of a unit of `O_K/qO_K ≅ F_{q²}`.
pub fn quad_order(e: &QuadElem, q: u64) -> Result<u64> {
    check_field(e, q)?;
    let fact = arith::factorize_u64(q * q - 1)?;
    let ord = arith::order_in_group(e, &fact)?;
    Ok(ord.to_u64().expect("order divides q^2 - 1"))
}

/// `(q² - 1)/ord(e)`.
pub fn quad_index(e: &QuadElem, q: u64) -> Result<u64> {
    Ok((q * q - 1) / quad_order(e, q)?)
}

fn check_field(e: &QuadElem, q: u64) -> Result<()> {
    if e.ring.modulus != q {
        return Err(Error::ContextMismatch);
    }
    if !e.ring.is_field() {
        return Err(Error::NotInert {
            p: e.ring.p_class,
            q,
        });
    }
    if !e.is_unit() {
        return Err(Error::NotAUnit {
            value: e.to_string(),
            modulus: q.to_string(),
        });
    }
    Ok(())
}

/// `ind(ε_p^h mod q)` under the hypotheses `p ≡ 5 (mod 8)` and
/// `<-1, q> = (Z/pZ)*`. The sign ambiguity of the norm is harmless because
/// `ε` and `-ε` have the same order.
pub fn rhs_theorem(p: u64, q: u64, h: u64) -> Result<u64> {
    if p % 8 != 5 || !arith::is_prime_u64(p) {
        return Err(Error::HypothesisViolated {
            p,
            q,
            reason: "p must be a prime congruent to 5 mod 8".into(),
        });
    }
    if !arith::generated_by_minus_one_and_q(q, p) {
        return Err(Error::HypothesisViolated {
            p,
            q,
            reason: "<-1, q> is not all of (Z/pZ)*".into(),
        });
    }
    let unit = unit_mod_q(p, q)?;
    quad_index(&unit.pow_u64(h), q)
}

/// Class number `h_p` of `Q(√p)` from
/// `∏_{k=1}^{(p-1)/2} |1 - e^{2πik²/p}| = √p ε_p^{-h_p}`, evaluated with
/// `precision_bits` of working precision. The `k²` run through the
/// quadratic residues `r`, and `|1 - e^{2πir/p}| = 2 sin(πr/p)`.
pub fn class_number_real(p: u64, precision_bits: usize) -> Result<u64> {
    check_prime_one_mod_four(p)?;
    let unit = fundamental_unit(p)?;
    class_number_real_with_unit(p, &unit, precision_bits)
}

/// As [`class_number_real`], doubling the precision from an initial guess
/// until the rounding certificate holds.
pub fn class_number_real_auto(p: u64) -> Result<u64> {
    check_prime_one_mod_four(p)?;
    let unit = fundamental_unit(p)?;
    let mut bits = 64 + 2 * (64 - p.leading_zeros() as usize);
    loop {
        match class_number_real_with_unit(p, &unit, bits) {
            Err(Error::PrecisionInsufficient { .. }) if bits < 1 << 14 => bits *= 2,
            other => return other,
        }
    }
}

const CERTIFICATE: f64 = 1.0 / 1024.0;

fn class_number_real_with_unit(p: u64, unit: &FundamentalUnit, bits: usize) -> Result<u64> {
    let rm = RoundingMode::ToEven;
    let mut cc = Consts::new().map_err(|e| Error::InvalidInput(format!("{e:?}")))?;
    let prec = bits.max(64);
    let pi = cc.pi(prec, rm);
    let pf = BigFloat::from_u64(p, prec);
    let two = BigFloat::from_u64(2, prec);

    let mut residues: Vec<u64> = (1..=(p - 1) / 2).map(|k| k * k % p).collect();
    residues.sort_unstable();
    let mut log_product = BigFloat::from_u64(0, prec);
    for r in residues {
        let angle = pi
            .mul(&BigFloat::from_u64(r, prec), prec, rm)
            .div(&pf, prec, rm);
        let chord = angle.sin(prec, rm, &mut cc).mul(&two, prec, rm);
        log_product = log_product.add(&chord.ln(prec, rm, &mut cc), prec, rm);
    }

    let sqrt_p = pf.sqrt(prec, rm);
    let log_sqrt_p = sqrt_p.ln(prec, rm, &mut cc);
    let x = to_float(&unit.x, prec, &mut cc);
    let y = to_float(&unit.y, prec, &mut cc);
    let eps = x
        .add(&y.mul(&sqrt_p, prec, rm), prec, rm)
        .div(&two, prec, rm);
    let log_eps = eps.ln(prec, rm, &mut cc);
    let h = log_sqrt_p
        .sub(&log_product, prec, rm)
        .div(&log_eps, prec, rm);

    let h_str = h
        .format(Radix::Dec, rm, &mut cc)
        .map_err(|e| Error::InvalidInput(format!("{e:?}")))?;
    let h_f64: f64 = parse_scientific(&h_str).ok_or_else(|| {
        Error::InvalidInput(format!("cannot parse class number estimate {h_str}"))
    })?;
    let nearest = h_f64.round();
    let distance = (h_f64 - nearest).abs();
    if !distance.is_finite() || distance >= CERTIFICATE || nearest < 1.0 {
        return Err(Error::PrecisionInsufficient {
            p,
            precision_bits: bits,
            distance,
        });
    }
    Ok(nearest as u64)
}

fn to_float(n: &BigUint, prec: usize, cc: &mut Consts) -> BigFloat {
    BigFloat::parse(&n.to_str_radix(16), Radix::Hex, prec, RoundingMode::ToEven, cc)
}

/// astro-float prints e.g. `3.0000...e+0`; f64 parsing does the rest.
fn parse_scientific(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok()
}

/// `(h(-p), m)` with `m = #{r : (p+3)/4 <= r <= (p-1)/2, (r/p) = 1}` and
/// `h(-p) = (p - 1)/2 - 4m`.
pub fn class_number_imag(p: u64) -> Result<(u64, u64)> {
    check_prime_one_mod_four(p)?;
    let m_count = (p.div_ceil(4)..=(p - 1) / 2)
        .filter(|&r| arith::jacobi(r as i64, p) == 1)
        .count() as u64;
    let half = (p - 1) / 2;
    assert!(
        4 * m_count < half,
        "m-formula gives a nonpositive class number for p = {p}"
    );
    Ok((half - 4 * m_count, m_count))
}

/// Number of reduced primitive forms `(A, B, C)` of discriminant `-4p`:
/// `|B| <= A <= C`, with `B >= 0` whenever `|B| = A` or `A = C`.
pub fn class_number_imag_forms(p: u64) -> Result<u64> {
    check_prime_one_mod_four(p)?;
    let disc = 4 * p as i64;
    let mut count = 0;
    let mut a = 1i64;
    while 3 * a * a <= disc {
        for b in -a + 1..=a {
            if b.rem_euclid(2) != 0 {
                continue;
            }
            let numer = b * b + disc;
            if numer % (4 * a) != 0 {
                continue;
            }
            let c = numer / (4 * a);
            if c < a || (b < 0 && a == c) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                count += 1;
            }
        }
        a += 1;
    }
    Ok(count)
}

/// `h_p`, `h(-p)` and `m` for one prime.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ClassData {
    pub p: u64,
    pub h_real: u64,
    pub h_imag: u64,
    pub m_count: u64,
}

pub fn class_data(p: u64) -> Result<ClassData> {
    let h_real = class_number_real_auto(p)?;
    let (h_imag, m_count) = class_number_imag(p)?;
    assert!(h_real % 2 == 1, "h_{p} = {h_real} is even");
    assert_eq!(4 * m_count, (p - 1) / 2 - h_imag);
    Ok(ClassData {
        p,
        h_real,
        h_imag,
        m_count,
    })
}

/// Brute-force least `y > 0` with `p y² - 4` a perfect square; test oracle
/// for [`fundamental_unit`].
#[doc(hidden)]
pub fn pell_brute_force(p: u64, y_max: u64) -> Option<(BigUint, BigUint)> {
    (1..=y_max).find_map(|y| {
        let rhs = BigUint::from(p) * y * y - 4u32;
        let x = rhs.sqrt();
        (&x * &x == rhs).then(|| (x, BigUint::from(y)))
    })
}

impl fmt::Display for FundamentalUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*sqrt({}))/2", self.x, self.y, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(p: u64) -> (u64, u64) {
        let u = fundamental_unit(p).unwrap();
        (u.x.to_u64().unwrap(), u.y.to_u64().unwrap())
    }

    #[test]
    fn fundamental_unit_examples() {
        assert_eq!(unit(5), (1, 1));
        assert_eq!(unit(13), (3, 1));
        assert_eq!(unit(37), (12, 2));
        assert_eq!(unit(29), (5, 1));
        assert!(fundamental_unit(7).is_err());
        assert!(fundamental_unit(21).is_err());
    }

    #[test]
    fn fundamental_unit_large_p() {
        // p = 94421 has a long period; the postcondition assert inside
        // fundamental_unit checks the Pell equation.
        let u = fundamental_unit(94_421).unwrap();
        assert_eq!(u.norm_times_four(), BigInt::from(-4));
    }

    #[test]
    fn modular_unit_examples() {
        assert_eq!(fundamental_unit_mod(5, 4).unwrap(), (1, 1));
        assert_eq!(fundamental_unit_mod(37, 4).unwrap(), (0, 2));
        let exact = fundamental_unit(229).unwrap();
        let four = BigUint::from(4u32);
        let expected = (
            (&exact.x % &four).to_u64().unwrap(),
            (&exact.y % &four).to_u64().unwrap(),
        );
        assert_eq!(fundamental_unit_mod(229, 4).unwrap(), expected);
        assert_eq!(fundamental_unit_mod(229, 1).unwrap(), (0, 0));
    }

    #[test]
    fn unit_mod_q_examples() {
        let e = unit_mod_q(5, 2).unwrap();
        assert_eq!((e.a(), e.b()), (0, 1));
        let e = unit_mod_q(13, 2).unwrap();
        assert_eq!((e.a(), e.b()), (1, 1));
        let e = unit_mod_q(37, 2).unwrap();
        assert_eq!((e.a(), e.b()), (1, 0));
        assert!(matches!(unit_mod_q(17, 2), Err(Error::NotInert { .. })));
        // 13 is a square mod 3: split.
        assert!(matches!(unit_mod_q(13, 3), Err(Error::NotInert { .. })));
    }

    #[test]
    fn quad_index_examples() {
        let ring = QuadRing::for_residue(5, 2).unwrap();
        assert_eq!(quad_index(&ring.one(), 2).unwrap(), 3);
        assert_eq!(quad_index(&ring.elem(0, 1), 2).unwrap(), 1);
        assert_eq!(ring.elem(0, 1).pow_u64(3), ring.one());
        let e = unit_mod_q(13, 5).unwrap();
        let idx = quad_index(&e, 5).unwrap();
        assert!(idx == 2 || idx == 6, "got {idx}");
        assert!(matches!(
            quad_index(&ring.elem(0, 0), 2),
            Err(Error::NotAUnit { .. })
        ));
    }

    #[test]
    fn quad_ring_multiplication_by_hand() {
        // p = 13, m = 5: c = (1 - 13)/4 = -3 = 2, so X² = X - 2.
        let ring = QuadRing::for_prime(13, 5).unwrap();
        let x = ring.elem(0, 1);
        assert_eq!(x.mul(&x), ring.elem(3, 1));
        assert_eq!(QuadRing::for_residue(13, 5).unwrap(), ring);
    }

    #[test]
    fn rhs_examples() {
        assert_eq!(rhs_theorem(5, 2, 1).unwrap(), 1);
        assert_eq!(rhs_theorem(37, 2, 1).unwrap(), 3);
        assert_eq!(rhs_theorem(13, 2, 1).unwrap(), 1);
        assert!(matches!(
            rhs_theorem(17, 2, 1),
            Err(Error::HypothesisViolated { .. })
        ));
        assert!(matches!(
            rhs_theorem(13, 3, 1),
            Err(Error::HypothesisViolated { .. })
        ));
    }

    #[test]
    fn class_number_real_examples() {
        assert_eq!(class_number_real(5, 128).unwrap(), 1);
        assert_eq!(class_number_real(13, 128).unwrap(), 1);
        assert_eq!(class_number_real(229, 128).unwrap(), 3);
        assert_eq!(class_number_real_auto(229).unwrap(), 3);
        // 401 and 577 have class numbers 5 and 7.
        assert_eq!(class_number_real_auto(401).unwrap(), 5);
        assert_eq!(class_number_real_auto(577).unwrap(), 7);
    }

    #[test]
    fn class_number_imag_examples() {
        assert_eq!(class_number_imag(5).unwrap(), (2, 0));
        assert_eq!(class_number_imag(13).unwrap(), (2, 1));
        assert_eq!(class_number_imag(17).unwrap(), (4, 1));
        assert_eq!(class_number_imag_forms(5).unwrap(), 2);
        assert_eq!(class_number_imag_forms(13).unwrap(), 2);
        assert_eq!(class_number_imag_forms(17).unwrap(), 4);
    }

    #[test]
    fn half_integer_powers() {
        let eps = fundamental_unit(13).unwrap().as_half_integer();
        let sq = eps.pow(2);
        assert_eq!((sq.u, sq.v), (BigInt::from(11), BigInt::from(3)));
        assert_eq!(eps.norm(), BigInt::from(-1));
        assert_eq!(eps.pow(3).norm(), BigInt::from(-1));
    }

    #[test]
    fn class_data_consistency() {
        let d = class_data(229).unwrap();
        assert_eq!(
            d,
            ClassData {
                p: 229,
                h_real: 3,
                h_imag: 10,
                m_count: 26
            }
        );
    }
}
