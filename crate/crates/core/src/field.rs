//! Finite fields `F_{ℓⁿ}` with `n ≤ 4`.
//!
//! Elements are dense coefficient vectors (least degree first) modulo a
//! fixed monic irreducible polynomial. The modulus is chosen
//! deterministically so that every witness computed downstream is
//! reproducible:
//!
//! - `n = 1`: the prime field;
//! - `n = 2`: `x² − a` with `a` the least quadratic non-residue mod `ℓ`
//!   (falls back to the general rule for `ℓ = 2`);
//! - `n ≥ 3`: the monic irreducible whose lower coefficients, read as the
//!   base-`ℓ` integer `c₀ + c₁ℓ + … + c_{n−1}ℓ^{n−1}`, are smallest.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::primes::{factorize, is_prime};

pub const MAX_DEGREE: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree {0} outside 1..=4")]
    BadDegree(usize),
    #[error("characteristic {0} too large (must be below 2^16)")]
    TooLarge(u64),
    #[error("modulus is not irreducible")]
    Reducible,
    #[error("zero has no multiplicative order")]
    Zero,
}

/// An element of `F_{ℓⁿ}`: coefficients of `c₀ + c₁x + …`, unused slots zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FqElem(pub [u32; MAX_DEGREE]);

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0[1..].iter().all(|&c| c == 0) {
            write!(f, "{}", self.0[0])
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

impl FqElem {
    pub const ZERO: FqElem = FqElem([0; MAX_DEGREE]);
    pub const ONE: FqElem = FqElem([1, 0, 0, 0]);

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }
}

/// The field `F_{ℓⁿ}` together with its defining modulus.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqField {
    p: u32,
    n: usize,
    /// Monic modulus, least degree first, length `n + 1`.
    modulus: Vec<u32>,
}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.n, self.modulus)
    }
}

impl FqField {
    /// Builds `F_{ℓⁿ}` with the deterministic modulus described in the module
    /// docs.
    pub fn new(p: u64, n: usize) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p >= 1 << 16 {
            return Err(FieldError::TooLarge(p));
        }
        if n == 0 || n > MAX_DEGREE {
            return Err(FieldError::BadDegree(n));
        }
        let p32 = p as u32;
        if n == 1 {
            return Ok(Self { p: p32, n, modulus: vec![0, 1] });
        }
        if n == 2 && p > 2 {
            let a = (1..p).find(|&a| crate::primes::legendre(a as i64, p) == -1).unwrap();
            return Self::with_modulus(p, vec![(p - a) as u32, 0, 1]);
        }
        let total = p.pow(n as u32);
        for code in 0..total {
            let mut m = Vec::with_capacity(n + 1);
            let mut c = code;
            for _ in 0..n {
                m.push((c % p) as u32);
                c /= p;
            }
            m.push(1);
            if m[0] != 0 && poly_is_irreducible(&m, p32) {
                return Ok(Self { p: p32, n, modulus: m });
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// Builds a field from an explicit monic modulus, checking irreducibility.
    pub fn with_modulus(p: u64, modulus: Vec<u32>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p >= 1 << 16 {
            return Err(FieldError::TooLarge(p));
        }
        let n = modulus.len().saturating_sub(1);
        if n == 0 || n > MAX_DEGREE {
            return Err(FieldError::BadDegree(n));
        }
        let p32 = p as u32;
        let modulus: Vec<u32> = modulus.into_iter().map(|c| c % p32).collect();
        if modulus[n] != 1 || !poly_is_irreducible(&modulus, p32) {
            return Err(FieldError::Reducible);
        }
        Ok(Self { p: p32, n, modulus })
    }

    pub fn prime_field(p: u64) -> Result<Self, FieldError> {
        Self::new(p, 1)
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Number of elements `ℓⁿ`.
    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.n as u32)
    }

    pub fn zero(&self) -> FqElem {
        FqElem::ZERO
    }

    pub fn one(&self) -> FqElem {
        FqElem::ONE
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, v: i64) -> FqElem {
        let mut e = FqElem::ZERO;
        e.0[0] = v.rem_euclid(self.p as i64) as u32;
        e
    }

    /// Element from a coefficient slice (reduced mod ℓ; must have length ≤ n).
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Option<FqElem> {
        if coeffs.len() > self.n {
            return None;
        }
        let mut e = FqElem::ZERO;
        for (slot, &c) in e.0.iter_mut().zip(coeffs) {
            *slot = c.rem_euclid(self.p as i64) as u32;
        }
        Some(e)
    }

    pub fn coeffs(&self, x: FqElem) -> Vec<u32> {
        x.0[..self.n].to_vec()
    }

    /// Index of `x` in `0..q`, reading coefficients as base-ℓ digits.
    #[inline]
    pub fn index(&self, x: FqElem) -> u64 {
        let mut acc = 0u64;
        for i in (0..self.n).rev() {
            acc = acc * self.p as u64 + x.0[i] as u64;
        }
        acc
    }

    /// Inverse of [`FqField::index`].
    pub fn element(&self, mut idx: u64) -> FqElem {
        let mut e = FqElem::ZERO;
        for i in 0..self.n {
            e.0[i] = (idx % self.p as u64) as u32;
            idx /= self.p as u64;
        }
        e
    }

    /// All `q` elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.order()).map(move |i| self.element(i))
    }

    pub fn is_in_prime_field(&self, x: FqElem) -> bool {
        x.0[1..].iter().all(|&c| c == 0)
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let mut r = FqElem::ZERO;
        for i in 0..self.n {
            let s = a.0[i] + b.0[i];
            r.0[i] = if s >= self.p { s - self.p } else { s };
        }
        r
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        let mut r = FqElem::ZERO;
        for i in 0..self.n {
            r.0[i] = if a.0[i] >= b.0[i] { a.0[i] - b.0[i] } else { a.0[i] + self.p - b.0[i] };
        }
        r
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        self.sub(FqElem::ZERO, a)
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        let p = self.p as u64;
        if self.n == 1 {
            let mut r = FqElem::ZERO;
            r.0[0] = ((a.0[0] as u64 * b.0[0] as u64) % p) as u32;
            return r;
        }
        let n = self.n;
        let mut prod = [0u64; 2 * MAX_DEGREE - 1];
        for i in 0..n {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] = (prod[i + j] + a.0[i] as u64 * b.0[j] as u64) % p;
            }
        }
        // reduce using x^n = -(m_0 + ... + m_{n-1} x^{n-1})
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..n {
                let sub = c * self.modulus[i] as u64 % p;
                prod[k - n + i] = (prod[k - n + i] + p - sub) % p;
            }
        }
        let mut r = FqElem::ZERO;
        for i in 0..n {
            r.0[i] = prod[i] as u32;
        }
        r
    }

    /// Multiplies by an integer scalar.
    pub fn scale(&self, k: i64, a: FqElem) -> FqElem {
        self.mul(self.from_int(k), a)
    }

    pub fn pow(&self, mut base: FqElem, mut exp: u64) -> FqElem {
        let mut acc = FqElem::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// `x^k` for a possibly negative exponent (`x ≠ 0` when `k < 0`).
    pub fn pow_signed(&self, x: FqElem, k: i64) -> FqElem {
        if k >= 0 {
            self.pow(x, k as u64)
        } else {
            self.pow(self.inv(x).expect("nonzero"), k.unsigned_abs())
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: FqElem) -> Option<FqElem> {
        if a.is_zero() {
            return None;
        }
        if self.n == 1 {
            let p = self.p as u64;
            return Some(self.from_int(crate::primes::pow_mod(a.0[0] as u64, p - 2, p) as i64));
        }
        Some(self.pow(a, self.order() - 2))
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Option<FqElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// Frobenius `x ↦ x^ℓ`.
    pub fn frobenius(&self, x: FqElem) -> FqElem {
        self.pow(x, self.p as u64)
    }

    /// `x ↦ x^{ℓ^k}`.
    pub fn frobenius_pow(&self, x: FqElem, k: usize) -> FqElem {
        let mut y = x;
        for _ in 0..k % self.n {
            y = self.frobenius(y);
        }
        y
    }

    /// Norm to the prime field: the product of the `n` Galois conjugates.
    pub fn norm(&self, x: FqElem) -> FqElem {
        let mut acc = x;
        let mut conj = x;
        for _ in 1..self.n {
            conj = self.frobenius(conj);
            acc = self.mul(acc, conj);
        }
        acc
    }

    /// Trace to the prime field.
    pub fn trace(&self, x: FqElem) -> FqElem {
        let mut acc = x;
        let mut conj = x;
        for _ in 1..self.n {
            conj = self.frobenius(conj);
            acc = self.add(acc, conj);
        }
        acc
    }

    /// Exact multiplicative order of a nonzero element.
    pub fn mult_order(&self, x: FqElem) -> Result<u64, FieldError> {
        if x.is_zero() {
            return Err(FieldError::Zero);
        }
        let group = self.order() - 1;
        let mut ord = group;
        for (prime, _) in factorize(group) {
            while ord.is_multiple_of(prime) && self.pow(x, ord / prime) == FqElem::ONE {
                ord /= prime;
            }
        }
        Ok(ord)
    }

    /// The first element (in index order) generating `F_q^×`.
    pub fn primitive_element(&self) -> FqElem {
        let target = self.order() - 1;
        self.elements().skip(1).find(|&x| self.mult_order(x) == Ok(target)).expect("multiplicative group is cyclic")
    }

    pub fn is_square(&self, x: FqElem) -> bool {
        if x.is_zero() {
            return true;
        }
        if self.p == 2 {
            return true;
        }
        self.pow(x, (self.order() - 1) / 2) == FqElem::ONE
    }

    /// Some square root of `x`, if one exists (exhaustive; fields are tiny).
    pub fn sqrt(&self, x: FqElem) -> Option<FqElem> {
        if !self.is_square(x) {
            return None;
        }
        self.elements().find(|&y| self.mul(y, y) == x)
    }

    /// Does `x` lie in the subfield `F_{ℓ^k}` (`k | n`)?
    pub fn in_subfield(&self, x: FqElem, k: usize) -> bool {
        self.pow(x, (self.p as u64).pow(k as u32)) == x
    }

    /// The least non-square of the prime field, embedded.
    pub fn least_nonresidue(&self) -> Option<FqElem> {
        (1..self.p as i64).map(|a| self.from_int(a)).find(|&a| !self.is_square(a))
    }
}

// Polynomials over F_p, least degree first, used only for irreducibility.

fn poly_trim(a: &mut Vec<u32>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_is_zero(a: &[u32]) -> bool {
    a.iter().all(|&c| c == 0)
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let p64 = p as u64;
    let mut r: Vec<u32> = a.to_vec();
    poly_trim(&mut r);
    let mut m = m.to_vec();
    poly_trim(&mut m);
    let dm = m.len() - 1;
    let lead_inv = crate::primes::pow_mod(m[dm] as u64, p64 - 2, p64);
    while r.len() > dm && !poly_is_zero(&r) {
        let dr = r.len() - 1;
        let c = r[dr] as u64 * lead_inv % p64;
        for i in 0..=dm {
            let idx = dr - dm + i;
            r[idx] = ((r[idx] as u64 + p64 - c * m[i] as u64 % p64) % p64) as u32;
        }
        poly_trim(&mut r);
        if r.len() - 1 == dr && dr > 0 {
            // leading coefficient cancelled to zero but trim left it
            r.pop();
        }
    }
    poly_trim(&mut r);
    r
}

fn poly_mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let p64 = p as u64;
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u64 + x as u64 * y as u64) % p64) as u32;
        }
    }
    poly_rem(&out, m, p)
}

fn poly_pow_mod(base: &[u32], mut exp: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = poly_rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, m, p);
        }
        b = poly_mul_mod(&b, &b, m, p);
        exp >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !poly_is_zero(&y) {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// `x^{p^k} − x mod f`.
fn frob_minus_x(f: &[u32], p: u32, k: u32) -> Vec<u32> {
    let mut r = vec![0u32, 1];
    for _ in 0..k {
        r = poly_pow_mod(&r, p as u64, f, p);
    }
    r.resize(r.len().max(2), 0);
    r[1] = (r[1] + p - 1) % p;
    poly_trim(&mut r);
    r
}

/// Irreducibility of a monic `f` of degree `n`: `gcd(x^{p^k} − x, f) = 1`
/// for `1 ≤ k < n` and `x^{p^n} ≡ x (mod f)`.
pub(crate) fn poly_is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    for k in 1..n {
        let h = frob_minus_x(f, p, k as u32);
        let g = poly_gcd(f, &h, p);
        if g.len() > 1 {
            return false;
        }
    }
    poly_is_zero(&frob_minus_x(f, p, n as u32))
}
