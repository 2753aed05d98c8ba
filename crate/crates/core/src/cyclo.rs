//! Arithmetic in `R = F_q[x]/Φ_p(x)` and the Gauss period `α = ζ + ζ⁻¹`.
//!
//! `ζ` is the class of `x`. Elements are dense coefficient vectors of length
//! `p - 1`, reduced with `x^(p-1) = -(1 + x + ... + x^(p-2))`. The ring is
//! never split into its irreducible factors: when `(Z/pZ)* = <-1, q>` every
//! component of `R` sees a Frobenius conjugate of `α`, so the order of `α`
//! in `R` is the order of `α` in the field `F_{q^n}`, `n = (p - 1)/2`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{self, GroupElement};
use crate::error::{Error, Result};
use crate::Factorization;

/// Parameters of the ring `F_q[x]/Φ_p(x)`.
#[derive(Debug, PartialEq, Eq)]
pub struct CycloContext {
    p: usize,
    q: u64,
    /// Degree of the field holding `α`: `(p - 1)/2`.
    n: usize,
    /// `ord_p(q)`, kept for diagnostics.
    order_of_q: u64,
    /// `q^n - 1`.
    group_order: BigUint,
    /// Whether `(p - 1)(q - 1)^2` fits in a u64 accumulator.
    lazy_reduction: bool,
}

impl CycloContext {
    /// Builds the context for the odd prime `p` and the prime `q != p`,
    /// rejecting pairs with `<-1, q> != (Z/pZ)*`.
    pub fn new(p: u64, q: u64) -> Result<Arc<Self>> {
        if p < 3 || !arith::is_prime_u64(p) {
            return Err(Error::InvalidInput(format!("p = {p} must be an odd prime")));
        }
        if !arith::is_prime_u64(q) || q == p {
            return Err(Error::InvalidInput(format!(
                "q = {q} must be a prime different from p = {p}"
            )));
        }
        if q > u32::MAX as u64 {
            return Err(Error::InvalidInput(format!("q = {q} exceeds 32 bits")));
        }
        let order_of_q = arith::order_mod_prime(q % p, p)?;
        if !arith::generated_by_minus_one_and_q(q, p) {
            return Err(Error::HypothesisViolated {
                p,
                q,
                reason: format!(
                    "<-1, q> is not all of (Z/pZ)*: ord_p(q) = {order_of_q}, p - 1 = {}",
                    p - 1
                ),
            });
        }
        let n = ((p - 1) / 2) as usize;
        let group_order = BigUint::from(q).pow(n as u32) - 1u32;
        let lazy_reduction = (p as u128 - 1) * (q as u128 - 1).pow(2) < (1u128 << 63);
        let ctx = Arc::new(CycloContext {
            p: p as usize,
            q,
            n,
            order_of_q,
            group_order,
            lazy_reduction,
        });
        let alpha = gauss_period(&ctx);
        if alpha.frobenius_power(n) != alpha {
            return Err(Error::HypothesisViolated {
                p,
                q,
                reason: format!("alpha is not fixed by the q^{n} Frobenius"),
            });
        }
        Ok(ctx)
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Degree `n` of the field `F_{q^n}` containing `α`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Degree of `Φ_p`, the number of stored coefficients.
    pub fn degree(&self) -> usize {
        self.p - 1
    }

    pub fn order_of_q(&self) -> u64 {
        self.order_of_q
    }

    /// `q^n - 1`.
    pub fn group_order(&self) -> &BigUint {
        &self.group_order
    }
}

/// Shorthand for [`CycloContext::new`].
pub fn make_context(p: u64, q: u64) -> Result<Arc<CycloContext>> {
    CycloContext::new(p, q)
}

/// An element of `F_q[x]/Φ_p(x)`.
#[derive(Clone, PartialEq, Eq)]
pub struct CycloElem {
    ctx: Arc<CycloContext>,
    coeffs: Vec<u32>,
}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloElem(p={}, q={}, {:?})", self.ctx.p, self.ctx.q, self.coeffs)
    }
}

impl CycloElem {
    pub fn zero(ctx: &Arc<CycloContext>) -> Self {
        CycloElem {
            ctx: Arc::clone(ctx),
            coeffs: vec![0; ctx.degree()],
        }
    }

    pub fn one(ctx: &Arc<CycloContext>) -> Self {
        let mut e = Self::zero(ctx);
        e.coeffs[0] = 1;
        e
    }

    /// The class of `x^k`.
    pub fn monomial(ctx: &Arc<CycloContext>, k: u64) -> Self {
        let mut acc = vec![0i64; ctx.p];
        acc[(k % ctx.p as u64) as usize] = 1;
        Self::from_wrapped(ctx, &acc)
    }

    /// `ζ`, the class of `x`.
    pub fn zeta(ctx: &Arc<CycloContext>) -> Self {
        Self::monomial(ctx, 1)
    }

    /// Element from integer coefficients of `1, x, x^2, ...`; any length is
    /// accepted and reduced.
    pub fn from_coeffs(ctx: &Arc<CycloContext>, coeffs: &[i64]) -> Self {
        let mut acc = vec![0i64; ctx.p];
        let q = ctx.q as i64;
        for (k, c) in coeffs.iter().enumerate() {
            let slot = k % ctx.p;
            acc[slot] = (acc[slot] + c.rem_euclid(q)) % q;
        }
        Self::from_wrapped(ctx, &acc)
    }

    /// Reduces a vector indexed by exponents mod `p` (i.e. an element of
    /// `F_q[x]/(x^p - 1)`) to the `Φ_p` quotient.
    fn from_wrapped(ctx: &Arc<CycloContext>, wrapped: &[i64]) -> Self {
        let q = ctx.q as i64;
        let top = wrapped[ctx.p - 1];
        let coeffs = wrapped[..ctx.p - 1]
            .iter()
            .map(|c| (c - top).rem_euclid(q) as u32)
            .collect();
        CycloElem {
            ctx: Arc::clone(ctx),
            coeffs,
        }
    }

    pub fn context(&self) -> &Arc<CycloContext> {
        &self.ctx
    }

    /// Coefficients of `1, x, ..., x^(p-2)`, each in `0..q`.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn same_ring(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.same_ring(other) {
            return Err(Error::ContextMismatch);
        }
        let q = self.ctx.q;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| ((a as u64 + b as u64) % q) as u32)
            .collect();
        Ok(CycloElem {
            ctx: Arc::clone(&self.ctx),
            coeffs,
        })
    }

    /// Product reduced mod `(q, Φ_p)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if !self.same_ring(other) {
            return Err(Error::ContextMismatch);
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let ctx = &self.ctx;
        let p = ctx.p;
        let q = ctx.q;
        // Product taken mod x^p - 1 first: exponents wrap around at p.
        let mut acc = vec![0u64; p];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let a = a as u64;
            let (head, tail) = other.coeffs.split_at((p - i).min(p - 1));
            // x^i * x^j lands in slot i + j for j < p - i and i + j - p beyond.
            if ctx.lazy_reduction {
                for (slot, &b) in acc[i..].iter_mut().zip(head) {
                    *slot += a * b as u64;
                }
                for (slot, &b) in acc.iter_mut().zip(tail) {
                    *slot += a * b as u64;
                }
            } else {
                for (slot, &b) in acc[i..].iter_mut().zip(head) {
                    *slot = (*slot + a * b as u64 % q) % q;
                }
                for (slot, &b) in acc.iter_mut().zip(tail) {
                    *slot = (*slot + a * b as u64 % q) % q;
                }
            }
        }
        let top = acc[p - 1] % q;
        let coeffs = acc[..p - 1]
            .iter()
            .map(|&c| ((c % q + q - top) % q) as u32)
            .collect();
        CycloElem {
            ctx: Arc::clone(ctx),
            coeffs,
        }
    }

    /// `self^e` by square-and-multiply, most significant bit first.
    pub fn pow(&self, e: &BigUint) -> Self {
        GroupElement::pow(self, e)
    }

    /// The Frobenius `a ↦ a^q`, which permutes monomials `x^k ↦ x^(kq mod p)`.
    pub fn frobenius(&self) -> Self {
        self.frobenius_power(1)
    }

    /// `a ↦ a^(q^j)`.
    pub fn frobenius_power(&self, j: usize) -> Self {
        let p = self.ctx.p as u64;
        let shift = arith::pow_mod_u64(self.ctx.q % p, j as u64, p);
        let mut wrapped = vec![0i64; self.ctx.p];
        for (k, &c) in self.coeffs.iter().enumerate() {
            wrapped[((k as u64 * shift) % p) as usize] = c as i64;
        }
        Self::from_wrapped(&self.ctx, &wrapped)
    }

    /// `self^e`, reading `e` in base `q`: each digit costs one Frobenius
    /// (a permutation) and at most one multiplication by a tabulated power.
    pub fn pow_frobenius(&self, e: &BigUint) -> Self {
        let q = self.ctx.q;
        if q > 256 {
            return self.pow(e);
        }
        let mut table = Vec::with_capacity(q as usize);
        table.push(CycloElem::one(&self.ctx));
        for d in 1..q as usize {
            let next = table[d - 1].mul_unchecked(self);
            table.push(next);
        }
        let digits = e.to_radix_le(q as u32);
        let mut acc = CycloElem::one(&self.ctx);
        for &d in digits.iter().rev() {
            acc = acc.frobenius();
            if d != 0 {
                acc = acc.mul_unchecked(&table[d as usize]);
            }
        }
        acc
    }

    /// Whether the element lies in the subring fixed by `a ↦ a^(q^n)`.
    pub fn in_degree_n_subring(&self) -> bool {
        self.frobenius_power(self.ctx.n) == *self
    }
}

impl GroupElement for CycloElem {
    fn identity_like(&self) -> Self {
        CycloElem::one(&self.ctx)
    }

    fn mul(&self, other: &Self) -> Self {
        self.mul_unchecked(other)
    }

    fn is_identity(&self) -> bool {
        self.is_one()
    }
}

/// `α = ζ + ζ⁻¹`, the class of `x + x^(p-1)`.
pub fn gauss_period(ctx: &Arc<CycloContext>) -> CycloElem {
    let mut wrapped = vec![0i64; ctx.p];
    wrapped[1] = 1;
    wrapped[ctx.p - 1] = 1;
    CycloElem::from_wrapped(ctx, &wrapped)
}

/// `gcd(ind(a), m)` with `ind(a) = (q^n - 1)/ord(a)`, computed without
/// factoring `q^n - 1`: raise `a` to `(q^n - 1)/m`, take the order of the
/// result using the factorization of `m`, and return `m` divided by it.
pub fn index_gcd(ctx: &Arc<CycloContext>, a: &CycloElem, m_fact: &Factorization) -> Result<BigUint> {
    check_operand(ctx, a)?;
    let m = m_fact.value();
    let (cofactor, rem) = ctx.group_order.div_rem(m);
    if !rem.is_zero() {
        return Err(Error::NotADivisor { m: m.clone() });
    }
    let b = a.pow_frobenius(&cofactor);
    let ord_b = arith::order_in_group(&b, m_fact)?;
    Ok(m / ord_b)
}

/// Exact multiplicative order of `a`, given a factored multiple of it
/// (usually `q^n - 1`, or `q^(p-1) - 1` for elements outside the degree-n
/// subring such as `ζ + 1`).
pub fn full_order(ctx: &Arc<CycloContext>, a: &CycloElem, multiple: &Factorization) -> Result<BigUint> {
    if !Arc::ptr_eq(ctx, &a.ctx) && **ctx != *a.ctx {
        return Err(Error::ContextMismatch);
    }
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    arith::order_in_group_with(a, multiple, |g, e| g.pow_frobenius(e))
}

/// `ind(a) = (q^n - 1)/ord(a)` for `a` in the degree-n subring.
pub fn index_of(ctx: &Arc<CycloContext>, a: &CycloElem, group_order_fact: &Factorization) -> Result<BigUint> {
    check_operand(ctx, a)?;
    if group_order_fact.value() != &ctx.group_order {
        return Err(Error::InvalidInput(
            "factorization does not match q^n - 1".into(),
        ));
    }
    let ord = full_order(ctx, a, group_order_fact)?;
    Ok(&ctx.group_order / ord)
}

fn check_operand(ctx: &Arc<CycloContext>, a: &CycloElem) -> Result<()> {
    if !Arc::ptr_eq(ctx, &a.ctx) && **ctx != *a.ctx {
        return Err(Error::ContextMismatch);
    }
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    if !a.in_degree_n_subring() {
        return Err(Error::InvalidInput(
            "element does not lie in the degree-n subring".into(),
        ));
    }
    Ok(())
}

/// `q^k - 1` as a big integer.
pub fn q_power_minus_one(q: u64, k: usize) -> BigUint {
    BigUint::from(q).pow(k as u32) - BigUint::one()
}
