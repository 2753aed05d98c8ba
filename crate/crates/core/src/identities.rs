//! Exact checks of the norm identities for `ζ_p + 1` and `ζ_p + ζ_p⁻¹` and of
//! the product formula `∏ (1 - ζ^{ak²}) = √p ε_p^{-(a/p) h_p}`, carried out in
//! `Z[x]/Φ_p(x)` with `√p` represented by the quadratic Gauss sum
//! `G = Σ (k/p) x^k`. No floating point is involved.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::quadratic::{self, HalfInteger};

/// A class in `Z[x]/Φ_p(x)`, stored as the `p - 1` coefficients of
/// `1, x, ..., x^(p-2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntCycloPoly {
    p: usize,
    coeffs: Vec<BigInt>,
}

impl IntCycloPoly {
    pub fn zero(p: u64) -> Self {
        IntCycloPoly {
            p: p as usize,
            coeffs: vec![BigInt::zero(); p as usize - 1],
        }
    }

    pub fn constant(p: u64, c: impl Into<BigInt>) -> Self {
        let mut out = Self::zero(p);
        out.coeffs[0] = c.into();
        out
    }

    pub fn one(p: u64) -> Self {
        Self::constant(p, 1)
    }

    /// Reduces a vector indexed by exponents mod `p`.
    fn from_wrapped(p: usize, mut wrapped: Vec<BigInt>) -> Self {
        let top = wrapped.pop().expect("p >= 2");
        for c in &mut wrapped {
            *c -= &top;
        }
        IntCycloPoly { p, coeffs: wrapped }
    }

    fn to_wrapped(&self) -> Vec<BigInt> {
        let mut w = self.coeffs.clone();
        w.push(BigInt::zero());
        w
    }

    /// `Σ c_k x^k` for arbitrary exponents.
    pub fn from_terms<I>(p: u64, terms: I) -> Self
    where
        I: IntoIterator<Item = (u64, BigInt)>,
    {
        let mut wrapped = vec![BigInt::zero(); p as usize];
        for (k, c) in terms {
            wrapped[(k % p) as usize] += c;
        }
        Self::from_wrapped(p as usize, wrapped)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        IntCycloPoly {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntCycloPoly {
            p: self.p,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let p = self.p;
        let mut wrapped = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    wrapped[(i + j) % p] += a * b;
                }
            }
        }
        Self::from_wrapped(p, wrapped)
    }

    /// `self · (x^i + sign·x^j)`, linear time.
    pub fn mul_binomial(&self, i: u64, j: u64, sign: i8) -> Self {
        let p = self.p;
        let w = self.to_wrapped();
        let (i, j) = ((i % p as u64) as usize, (j % p as u64) as usize);
        let mut out = vec![BigInt::zero(); p];
        for (k, c) in w.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out[(k + i) % p] += c;
            if sign >= 0 {
                out[(k + j) % p] += c;
            } else {
                out[(k + j) % p] -= c;
            }
        }
        Self::from_wrapped(p, out)
    }

    /// `σ_a: x ↦ x^a` for `a` prime to `p`.
    pub fn galois(&self, a: u64) -> Self {
        let p = self.p as u64;
        Self::from_terms(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (k as u64 * (a % p) % p, c.clone())),
        )
    }

    pub fn is_constant(&self, c: &BigInt) -> bool {
        &self.coeffs[0] == c && self.coeffs[1..].iter().all(Zero::is_zero)
    }
}

/// Which square root of `p` the Gauss sum stood for when an identity held.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum GaussSign {
    Plus,
    Minus,
}

/// `G(x) = Σ_{k=1}^{p-1} (k/p) x^k`, with `G² = p` asserted.
pub fn gauss_sum_poly(p: u64) -> Result<IntCycloPoly> {
    check(p)?;
    let g = IntCycloPoly::from_terms(
        p,
        (1..p).map(|k| (k, BigInt::from(arith::jacobi(k as i64, p)))),
    );
    assert!(
        g.mul(&g).is_constant(&BigInt::from(p)),
        "Gauss sum does not square to {p}"
    );
    Ok(g)
}

fn check(p: u64) -> Result<()> {
    if p % 4 != 1 || !arith::is_prime_u64(p) {
        return Err(Error::InvalidInput(format!(
            "p = {p} must be a prime congruent to 1 mod 4"
        )));
    }
    Ok(())
}

/// `(u + v G)` as a polynomial.
fn embed(p: u64, h: &HalfInteger, g: &IntCycloPoly) -> IntCycloPoly {
    IntCycloPoly::constant(p, h.u.clone()).add(&g.scale(&h.v))
}

/// `ε_p^e` as `(u + v√p)/2`, with the parity condition `u ≡ v (mod 2)`
/// asserted.
fn unit_power(p: u64, h_p: u64, e: u64) -> Result<HalfInteger> {
    let eps = quadratic::fundamental_unit(p)?.as_half_integer();
    let out = eps.pow(h_p * e);
    assert!(
        (&out.u - &out.v).is_even(),
        "ε_{p}^{} is not integral in Z[(1+√p)/2]",
        h_p * e
    );
    Ok(out)
}

/// Tries a relation with `G = +√p` and then with `G = -√p`.
fn with_sign<F>(p: u64, mut holds: F) -> Result<Option<GaussSign>>
where
    F: FnMut(&IntCycloPoly) -> bool,
{
    let g = gauss_sum_poly(p)?;
    if holds(&g) {
        return Ok(Some(GaussSign::Plus));
    }
    if holds(&g.neg()) {
        return Ok(Some(GaussSign::Minus));
    }
    Ok(None)
}

/// `∏_{k=1}^{(p-1)/2} (x^{k²} + 1)`.
pub fn norm_of_zeta_plus_one(p: u64) -> IntCycloPoly {
    (1..=(p - 1) / 2).fold(IntCycloPoly::one(p), |acc, k| {
        acc.mul_binomial(k * k % p, 0, 1)
    })
}

/// `∏_{0 < r <= (p-1)/2, (r/p) = 1} (x^r + x^{p-r})`.
pub fn norm_of_gauss_period(p: u64) -> IntCycloPoly {
    (1..=(p - 1) / 2)
        .filter(|&r| arith::jacobi(r as i64, p) == 1)
        .fold(IntCycloPoly::one(p), |acc, r| acc.mul_binomial(r, p - r, 1))
}

/// Outcome of an identity check together with the sign of `√p` used.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct IdentityOutcome {
    pub p: u64,
    pub holds: bool,
    pub sign: Option<GaussSign>,
}

/// `N(ζ + 1) = ε_p^{2h_p}` for `p ≡ 5 (mod 8)` and `= 1` for `p ≡ 1 (mod 8)`,
/// checked as `2∏(x^{k²} + 1) = u + vG` with `ε_p^{2h_p} = (u + v√p)/2`.
pub fn verify_norm_identity_one(p: u64) -> Result<bool> {
    Ok(norm_identity_one(p)?.holds)
}

pub fn norm_identity_one(p: u64) -> Result<IdentityOutcome> {
    check(p)?;
    let product = norm_of_zeta_plus_one(p);
    if p % 8 == 1 {
        let holds = product.is_constant(&BigInt::one());
        return Ok(IdentityOutcome {
            p,
            holds,
            sign: None,
        });
    }
    let h_p = quadratic::class_number_real_auto(p)?;
    let target = unit_power(p, h_p, 2)?;
    let twice = product.scale(&BigInt::from(2));
    let sign = with_sign(p, |g| twice == embed(p, &target, g))?;
    Ok(IdentityOutcome {
        p,
        holds: sign.is_some(),
        sign,
    })
}

/// `N(ζ + ζ⁻¹) = (-1)^m ε_p^{-h_p}` for `p ≡ 5 (mod 8)` and `(-1)^m` for
/// `p ≡ 1 (mod 8)`, with `m` from the quadratic-residue count. The exponent
/// is `-h_p`: for `p = 5`, `ζ + ζ⁻¹ = (√5 - 1)/2 = ε_5⁻¹`. Since
/// `ε_p⁻¹ = -ε̄_p`, the check is `2∏ = (-1)^m (-s + tG)` with
/// `ε_p^{h_p} = (s + t√p)/2` (`h_p` is odd).
pub fn verify_norm_identity_two(p: u64) -> Result<bool> {
    Ok(norm_identity_two(p)?.holds)
}

pub fn norm_identity_two(p: u64) -> Result<IdentityOutcome> {
    norm_identity_two_with(p, true)
}

/// The same relation with `ε_p^{h_p}` in place of `ε_p^{-h_p}`. It fails
/// for every `p ≡ 5 (mod 8)` under either sign of `√p`; kept so the
/// difference stays visible in tests.
pub fn norm_identity_two_positive_exponent(p: u64) -> Result<IdentityOutcome> {
    norm_identity_two_with(p, false)
}

fn norm_identity_two_with(p: u64, inverse: bool) -> Result<IdentityOutcome> {
    check(p)?;
    let (_, m) = quadratic::class_number_imag(p)?;
    let sign_m = if m % 2 == 0 { 1 } else { -1 };
    let twice = norm_of_gauss_period(p).scale(&BigInt::from(2));
    if p % 8 == 1 {
        let holds = twice.is_constant(&BigInt::from(2 * sign_m));
        return Ok(IdentityOutcome {
            p,
            holds,
            sign: None,
        });
    }
    let h_p = quadratic::class_number_real_auto(p)?;
    let mut target = unit_power(p, h_p, 1)?;
    if inverse {
        // ε^{-h} = (-ε̄)^h = -ε̄^h for odd h
        assert!(h_p % 2 == 1);
        target.u = -target.u;
    }
    let sign = with_sign(p, |g| twice == embed(p, &target, g).scale(&BigInt::from(sign_m)))?;
    Ok(IdentityOutcome {
        p,
        holds: sign.is_some(),
        sign,
    })
}

/// `∏_{k=1}^{(p-1)/2} (1 - ζ^{ak²}) = √p ε_p^{-(a/p) h_p}`. With
/// `ε_p^{h_p} = (s + t√p)/2` this is `∏·(s + tG) = 2G` when `(a/p) = 1` and
/// `2∏ = sG + tp` when `(a/p) = -1`.
pub fn verify_sun_identity(p: u64, a: i64) -> Result<bool> {
    Ok(sun_identity(p, a)?.holds)
}

pub fn sun_identity(p: u64, a: i64) -> Result<IdentityOutcome> {
    check(p)?;
    if a.rem_euclid(p as i64) == 0 {
        return Err(Error::InvalidInput(format!("{a} is divisible by {p}")));
    }
    let a_mod = a.rem_euclid(p as i64) as u64;
    let product = (1..=(p - 1) / 2).fold(IntCycloPoly::one(p), |acc, k| {
        let e = (a_mod as u128 * (k * k % p) as u128 % p as u128) as u64;
        acc.mul_binomial(0, e, -1)
    });
    let h_p = quadratic::class_number_real_auto(p)?;
    let unit = unit_power(p, h_p, 1)?;
    let chi = arith::jacobi(a, p);
    let sign = if chi == 1 {
        with_sign(p, |g| {
            product.mul(&embed(p, &unit, g)) == g.scale(&BigInt::from(2))
        })?
    } else {
        let twice = product.scale(&BigInt::from(2));
        with_sign(p, |g| {
            let rhs = g
                .scale(&unit.u)
                .add(&IntCycloPoly::constant(p, &unit.v * BigInt::from(p)));
            twice == rhs
        })?
    };
    Ok(IdentityOutcome {
        p,
        holds: sign.is_some(),
        sign,
    })
}

/// Squaring the `ζ + ζ⁻¹` product gives `σ_2` of the `ζ + 1` product,
/// where `σ_2: ζ ↦ ζ²` (`ζ + ζ⁻¹ = ζ⁻¹(ζ² + 1)`), and `∏ x^{k²} = 1`.
/// For `p ≡ 5 (mod 8)`, `σ_2` is nontrivial on `Q(√p)`, so the square is
/// `ε_p^{-2h_p}` and its product with `N(ζ + 1) = ε_p^{2h_p}` is 1.
pub fn verify_norm_consistency(p: u64) -> Result<bool> {
    check(p)?;
    let half = norm_of_gauss_period(p);
    let full = norm_of_zeta_plus_one(p);
    let exponent: u64 = (1..=(p - 1) / 2).map(|k| k * k % p).sum();
    let zeta_norm = IntCycloPoly::from_terms(p, [(exponent, BigInt::one())]);
    let square = half.mul(&half);
    let mut ok = square == full.galois(2) && zeta_norm.is_constant(&BigInt::one());
    if p % 8 == 5 {
        ok &= square.mul(&full).is_constant(&BigInt::one());
    } else {
        ok &= square == full;
    }
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn gauss_sum_p5() {
        // x - x^2 - x^3 + x^4 with x^4 = -(1 + x + x^2 + x^3)
        let g = gauss_sum_poly(5).unwrap();
        assert_eq!(g.coeffs(), ints(&[-1, 0, -2, -2]).as_slice());
    }

    #[test]
    fn gauss_sum_squares_to_p() {
        for p in [13u64, 17, 29, 37, 41] {
            let g = gauss_sum_poly(p).unwrap();
            let sq = g.mul(&g);
            assert_eq!(sq.coeffs()[0], BigInt::from(p));
            assert!(sq.is_constant(&BigInt::from(p)));
        }
        assert!(gauss_sum_poly(7).is_err());
    }

    #[test]
    fn binomial_product_matches_general_product() {
        let p = 13;
        let a = IntCycloPoly::from_terms(p, (0..12).map(|k| (k, BigInt::from(k as i64 - 5))));
        let b = IntCycloPoly::from_terms(p, [(3, BigInt::one()), (11, BigInt::from(-1))]);
        assert_eq!(a.mul(&b), a.mul_binomial(3, 11, -1));
    }

    #[test]
    fn norm_identity_one_examples() {
        let out = norm_identity_one(5).unwrap();
        assert!(out.holds);
        assert_eq!(out.sign, Some(GaussSign::Plus));
        assert!(verify_norm_identity_one(13).unwrap());
        assert!(verify_norm_identity_one(17).unwrap());
        assert!(norm_of_zeta_plus_one(17).is_constant(&BigInt::one()));
    }

    #[test]
    fn hand_expansion_p5() {
        // (x + 1)(x^4 + 1) = x^5 + x^4 + x + 1 = 2 + x + x^4 = 1 - x^2 - x^3,
        // and (3 + G)/2 with G = -1 - 2x^2 - 2x^3 is also 1 - x^2 - x^3.
        let prod = norm_of_zeta_plus_one(5);
        assert_eq!(prod.coeffs(), ints(&[1, 0, -1, -1]).as_slice());
    }

    #[test]
    fn norm_identity_two_examples() {
        let out = norm_identity_two(5).unwrap();
        assert!(out.holds);
        assert_eq!(out.sign, Some(GaussSign::Plus));
        assert!(verify_norm_identity_two(13).unwrap());
        // p = 5: x + x^4 = (G - 1)/2
        let g = gauss_sum_poly(5).unwrap();
        let expected = g.add(&IntCycloPoly::constant(5, -1));
        assert_eq!(norm_of_gauss_period(5).scale(&BigInt::from(2)), expected);
        assert!(verify_norm_identity_two(17).unwrap());
        // The literal ε^h form fails under both signs of √p.
        for p in [5u64, 13, 29, 37] {
            assert!(!norm_identity_two_positive_exponent(p).unwrap().holds, "p={p}");
        }
        assert!(norm_identity_two_positive_exponent(17).unwrap().holds);
        // m = 1 for p = 17: the product is -1.
        assert!(norm_of_gauss_period(17).is_constant(&BigInt::from(-1)));
    }

    #[test]
    fn sun_identity_examples() {
        assert!(verify_sun_identity(5, 1).unwrap());
        assert!(verify_sun_identity(5, 2).unwrap());
        assert!(verify_sun_identity(13, 1).unwrap());
        assert!(verify_sun_identity(13, -2).unwrap());
        assert_eq!(sun_identity(29, 3).unwrap().sign, Some(GaussSign::Plus));
        assert!(verify_sun_identity(5, 10).is_err());
    }

    #[test]
    fn wrong_class_number_breaks_the_identity() {
        // 229 has h = 3; with h = 1 the polynomial identity must fail.
        let p = 229;
        let product = norm_of_zeta_plus_one(p).scale(&BigInt::from(2));
        let g = gauss_sum_poly(p).unwrap();
        let wrong = unit_power(p, 1, 2).unwrap();
        assert_ne!(product, embed(p, &wrong, &g));
        assert_ne!(product, embed(p, &wrong, &g.neg()));
        let right = unit_power(p, 3, 2).unwrap();
        assert_eq!(product, embed(p, &right, &g));
    }

    #[test]
    fn consistency_small() {
        for p in [5u64, 13, 17, 29] {
            assert!(verify_norm_consistency(p).unwrap());
        }
    }
}
