//! The isogeny bound `b(d, g, h)`, the surjectivity thresholds built from
//! it, and certified comparison of a prime against them.
//!
//! Values such as `14^65536` are far too large for floating point, so
//! expressions are compared in the log domain: every node yields an
//! enclosure of `ln(value)` as a pair of integers over `2^prec`. Logarithms
//! of integers come from the `atanh` series with an explicit error budget.
//! All logarithms are natural.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::primes::{is_prime, legendre};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundsError {
    #[error("logarithm argument {0} is below 1")]
    LogBelowOne(BigRational),
    #[error("expression is not positive: {0}")]
    NotPositive(&'static str),
    #[error("empty max")]
    EmptyMax,
    #[error("invalid descriptor: {0}")]
    BadDescriptor(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision cap must be at least {min} bits (got {got})")]
    PrecisionTooSmall { got: u32, min: u32 },
}

/// Smallest precision accepted by [`compare_prime`].
pub const MIN_PRECISION: u32 = 64;
/// Default precision cap, in bits after the binary point.
pub const DEFAULT_PRECISION_CAP: u32 = 4096;
/// Default ceiling on the size of exactly evaluated values.
pub const DEFAULT_EXACT_BITS: u64 = 1 << 26;
/// Exact evaluation inside [`compare_prime`] is attempted below this size.
const SHORTCUT_BITS: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactExpr {
    RationalConst(BigRational),
    NaturalLog(BigRational),
    Max(Vec<ExactExpr>),
    Product(Vec<ExactExpr>),
    Power(Box<ExactExpr>, BigRational),
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn pow2(n: u64) -> BigInt {
    BigInt::one() << n
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

/// Enclosure of `atanh(a/b)`, `0 ≤ a/b ≤ 1/3`, as `(S, E)` with
/// `|S − atanh(a/b)·2^w| ≤ E`.
fn atanh_fixed(a: &BigInt, b: &BigInt, w: u64) -> (BigInt, BigInt) {
    let z: BigInt = (a << w).div_floor(b);
    let z2 = (&z * &z) >> w;
    let mut p = z;
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !p.is_zero() {
        sum += &p / BigInt::from(2 * j + 1);
        p = (&p * &z2) >> w;
        j += 1;
    }
    // each term is off by at most 3 ulps, and the tail left once the
    // powers vanish is below 3 ulps
    (sum, BigInt::from(4 * j + 4))
}

/// `[lo, hi]` with `lo/2^w ≤ ln n ≤ hi/2^w`, `n ≥ 1`.
fn ln_uint(n: &BigUint, w: u64) -> (BigInt, BigInt) {
    let k = n.bits() - 1;
    if n.is_one() {
        return (BigInt::zero(), BigInt::zero());
    }
    let guard = 16 + 64 - k.leading_zeros() as u64;
    let big_w = w + guard;
    let n = BigInt::from(n.clone());
    let top = pow2(k);
    let (s2, e2) = atanh_fixed(&BigInt::one(), &BigInt::from(3), big_w);
    let (sz, ez) = atanh_fixed(&(&n - &top), &(&n + &top), big_w);
    let kk = BigInt::from(k);
    let s: BigInt = (&kk * &s2 + &sz) * 2;
    let e: BigInt = (&kk * &e2 + &ez) * 2;
    let d = pow2(guard);
    ((&s - &e).div_floor(&d), ceil_div(&(&s + &e), &d))
}

/// Enclosure of `ln r` for a rational `r > 0`.
fn ln_rational(r: &BigRational, w: u64) -> (BigInt, BigInt) {
    let (a_lo, a_hi) = ln_uint(&r.numer().magnitude().clone(), w);
    let (b_lo, b_hi) = ln_uint(&r.denom().magnitude().clone(), w);
    (a_lo - b_hi, a_hi - b_lo)
}

/// `ln(value)` enclosed as `[lo/2^prec, hi/2^prec]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogEnclosure {
    pub lo: BigInt,
    pub hi: BigInt,
    pub prec: u32,
}

impl LogEnclosure {
    /// Whether `self` lies inside `other` (which may be coarser).
    pub fn within(&self, other: &LogEnclosure) -> bool {
        if self.prec < other.prec {
            return false;
        }
        let s = (self.prec - other.prec) as u64;
        self.lo >= (&other.lo << s) && self.hi <= (&other.hi << s)
    }

    pub fn width(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, pow2(self.prec as u64))
    }
}

impl ExactExpr {
    pub fn constant(r: BigRational) -> Self {
        ExactExpr::RationalConst(r)
    }

    pub fn power(base: ExactExpr, exp: BigRational) -> Self {
        ExactExpr::Power(Box::new(base), exp)
    }

    /// Structural checks: log arguments are at least 1, products and
    /// powers have positive factors, and every max has a positive child
    /// (other children must be exactly non-positive).
    pub fn validate(&self) -> Result<(), BoundsError> {
        match self {
            ExactExpr::RationalConst(_) => Ok(()),
            ExactExpr::NaturalLog(x) => {
                if *x < BigRational::one() {
                    Err(BoundsError::LogBelowOne(x.clone()))
                } else {
                    Ok(())
                }
            }
            ExactExpr::Max(cs) => {
                if cs.is_empty() {
                    return Err(BoundsError::EmptyMax);
                }
                for c in cs {
                    c.validate()?;
                    if !c.is_positive() && !c.is_exactly_nonpositive() {
                        return Err(BoundsError::NotPositive("max child of unknown sign"));
                    }
                }
                if cs.iter().any(|c| c.is_positive()) {
                    Ok(())
                } else {
                    Err(BoundsError::NotPositive("max without a positive child"))
                }
            }
            ExactExpr::Product(cs) => {
                for c in cs {
                    c.validate()?;
                    if !c.is_positive() {
                        return Err(BoundsError::NotPositive("product factor"));
                    }
                }
                Ok(())
            }
            ExactExpr::Power(b, _) => {
                b.validate()?;
                if b.is_positive() {
                    Ok(())
                } else {
                    Err(BoundsError::NotPositive("power base"))
                }
            }
        }
    }

    /// Certainly positive, by structure.
    pub fn is_positive(&self) -> bool {
        match self {
            ExactExpr::RationalConst(r) => r.is_positive(),
            ExactExpr::NaturalLog(x) => *x > BigRational::one(),
            ExactExpr::Max(cs) => cs.iter().any(|c| c.is_positive()),
            ExactExpr::Product(cs) => cs.iter().all(|c| c.is_positive()),
            ExactExpr::Power(b, _) => b.is_positive(),
        }
    }

    fn is_exactly_nonpositive(&self) -> bool {
        match self {
            ExactExpr::RationalConst(r) => !r.is_positive(),
            ExactExpr::NaturalLog(x) => x.is_one(),
            _ => false,
        }
    }

    /// Exact rational value, when the expression is rational and its size
    /// stays under `bit_cap` bits.
    pub fn exact(&self, bit_cap: u64) -> Option<BigRational> {
        match self {
            ExactExpr::RationalConst(r) => Some(r.clone()),
            ExactExpr::NaturalLog(x) => x.is_one().then(BigRational::zero),
            ExactExpr::Max(cs) => {
                let vals: Option<Vec<BigRational>> = cs.iter().map(|c| c.exact(bit_cap)).collect();
                vals?.into_iter().max()
            }
            ExactExpr::Product(cs) => {
                let mut acc = BigRational::one();
                for c in cs {
                    let v = c.exact(bit_cap)?;
                    acc = if acc.is_integer() && v.is_integer() {
                        BigRational::from_integer(acc.to_integer() * v.to_integer())
                    } else {
                        acc * v
                    };
                    if acc.numer().bits() + acc.denom().bits() > bit_cap {
                        return None;
                    }
                }
                Some(acc)
            }
            ExactExpr::Power(b, r) => {
                let v = b.exact(bit_cap)?;
                if v.is_one() {
                    return Some(v);
                }
                if !r.is_integer() {
                    return None;
                }
                let n = r.to_integer();
                let size = (v.numer().bits() + v.denom().bits()) as f64 * n.abs().to_f64()?;
                if size > bit_cap as f64 {
                    return None;
                }
                let e = n.abs().to_u32()?;
                // powers of a reduced fraction stay reduced
                let p = BigRational::new_raw(v.numer().pow(e), v.denom().pow(e));
                Some(if n.is_negative() { p.recip() } else { p })
            }
        }
    }

    fn raw_log(&self, w: u64) -> (BigInt, BigInt) {
        match self {
            ExactExpr::RationalConst(r) => ln_rational(r, w),
            ExactExpr::NaturalLog(x) => {
                let (l, h) = ln_rational(x, w);
                // ln x ≥ 1 − 1/x keeps the lower bound away from zero
                let floor_bound = (x - BigRational::one()) / x;
                let fixed = BigRational::new(l, pow2(w));
                let lower = if fixed > floor_bound { fixed } else { floor_bound };
                let (lo, _) = ln_rational(&lower, w);
                let (_, hi) = ln_rational(&BigRational::new(h, pow2(w)), w);
                (lo, hi)
            }
            ExactExpr::Max(cs) => {
                let mut it = cs.iter().filter(|c| c.is_positive()).map(|c| c.raw_log(w));
                let (mut lo, mut hi) = it.next().expect("validated max");
                for (l, h) in it {
                    lo = lo.max(l);
                    hi = hi.max(h);
                }
                (lo, hi)
            }
            ExactExpr::Product(cs) => {
                cs.iter().map(|c| c.raw_log(w)).fold((BigInt::zero(), BigInt::zero()), |(a, b), (l, h)| (a + l, b + h))
            }
            ExactExpr::Power(b, r) => {
                let (l, h) = b.raw_log(w);
                let (n, d) = (r.numer(), r.denom());
                let (x, y) = if r.is_negative() { (h, l) } else { (l, h) };
                ((x * n).div_floor(d), ceil_div(&(y * n), d))
            }
        }
    }

    /// Enclosure of `ln(value)` at `prec ≥ 64` bits. Enclosures at `prec`
    /// are intersected with the one at `prec/2`, so doubling the precision
    /// always gives a nested interval.
    pub fn log_enclosure(&self, prec: u32) -> LogEnclosure {
        let (mut lo, mut hi) = self.raw_log(prec as u64);
        if prec / 2 >= MIN_PRECISION {
            let coarse = self.log_enclosure(prec / 2);
            let s = (prec - coarse.prec) as u64;
            lo = lo.max(coarse.lo << s);
            hi = hi.min(coarse.hi << s);
        }
        LogEnclosure { lo, hi, prec }
    }

    /// Bounds on the bit length `⌊log₂ v⌋ + 1` of a value `v ≥ 1`.
    pub fn bit_length_bounds(&self, prec: u32) -> (BigInt, BigInt) {
        if let Some(v) = self.exact(SHORTCUT_BITS) {
            let b = BigInt::from(v.floor().to_integer().bits());
            return (b.clone(), b);
        }
        let e = self.log_enclosure(prec.max(MIN_PRECISION));
        let (l2_lo, l2_hi) = ln_uint(&BigUint::from(2u32), e.prec as u64);
        let lo = e.lo.clone().max(BigInt::zero()).div_floor(&l2_hi) + 1;
        let hi = e.hi.clone().max(BigInt::zero()).div_floor(&l2_lo) + 1;
        (lo, hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndeterminateReason {
    Equal,
    PrecisionCap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    PrimeAbove,
    PrimeBelow,
    Indeterminate(IndeterminateReason),
}

/// Certified comparison of `p` with `value(e)`. Rational expressions of
/// moderate size are compared exactly; otherwise the precision doubles
/// from 64 bits up to `precision_cap`.
pub fn compare_prime(p: u64, e: &ExactExpr, precision_cap: u32) -> Result<Comparison, BoundsError> {
    if !is_prime(p) {
        return Err(BoundsError::NotPrime(p));
    }
    if precision_cap < MIN_PRECISION {
        return Err(BoundsError::PrecisionTooSmall { got: precision_cap, min: MIN_PRECISION });
    }
    e.validate()?;
    if let Some(v) = e.exact(SHORTCUT_BITS) {
        let pr = int(p);
        return Ok(match pr.cmp(&v) {
            core::cmp::Ordering::Greater => Comparison::PrimeAbove,
            core::cmp::Ordering::Less => Comparison::PrimeBelow,
            core::cmp::Ordering::Equal => Comparison::Indeterminate(IndeterminateReason::Equal),
        });
    }
    if !e.is_positive() {
        return Err(BoundsError::NotPositive("compared expression"));
    }
    let pe = ExactExpr::RationalConst(int(p));
    let mut prec = MIN_PRECISION;
    loop {
        let a = pe.log_enclosure(prec);
        let b = e.log_enclosure(prec);
        if a.lo > b.hi {
            return Ok(Comparison::PrimeAbove);
        }
        if a.hi < b.lo {
            return Ok(Comparison::PrimeBelow);
        }
        if prec >= precision_cap {
            return Ok(Comparison::Indeterminate(IndeterminateReason::PrecisionCap));
        }
        prec = prec.saturating_mul(2).min(precision_cap);
    }
}

/// `α(g) = 2¹⁰ g³`.
pub fn alpha(g: u32) -> u64 {
    1024 * (g as u64).pow(3)
}

/// `b(d, g, h) = ((14g)^{64g²} · d · max(h, ln d, 1)²)^{α(g)}`.
pub fn bound_b(d: u64, g: u32, h: &BigRational) -> ExactExpr {
    let g64 = g as i64;
    let inner = ExactExpr::Product(alloc::vec![
        ExactExpr::power(ExactExpr::RationalConst(int(14 * g64)), int(64 * g64 * g64)),
        ExactExpr::RationalConst(int(d)),
        ExactExpr::power(
            ExactExpr::Max(alloc::vec![
                ExactExpr::RationalConst(h.clone()),
                ExactExpr::NaturalLog(int(d)),
                ExactExpr::RationalConst(BigRational::one()),
            ]),
            int(2),
        ),
    ]);
    ExactExpr::power(inner, int(alpha(g)))
}

/// `2·(9g)^{2g}`.
pub fn endomorphism_field_degree_bound(g: u32) -> BigUint {
    BigUint::from(2u32) * BigUint::from(9 * g).pow(2 * g)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EndoType {
    TrivialEndo,
    Gl2Type { field_degree: u32, disc_e: BigInt },
    RealMultSurface { disc_e: BigInt },
    QuaternionMult { delta: BigUint },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietyDescriptor {
    pub degree_k: u64,
    pub faltings_height: BigRational,
    pub dim: u32,
    pub endo_type: EndoType,
    pub ramified_primes_k: Vec<u64>,
    pub non_semistable_primes: Vec<u64>,
    pub endos_over_k: bool,
}

impl VarietyDescriptor {
    pub fn validate(&self) -> Result<(), BoundsError> {
        let bad = |s: &str| Err(BoundsError::BadDescriptor(String::from(s)));
        if self.degree_k == 0 {
            return bad("degree_K must be positive");
        }
        if self.dim == 0 {
            return bad("dim must be positive");
        }
        match &self.endo_type {
            EndoType::TrivialEndo if self.dim != 2 => bad("trivial endomorphisms are handled for surfaces only"),
            EndoType::RealMultSurface { .. } if self.dim != 2 => bad("real multiplication requires dim = 2"),
            EndoType::QuaternionMult { .. } if self.dim != 2 => bad("quaternionic multiplication requires dim = 2"),
            EndoType::Gl2Type { field_degree, .. } if *field_degree != self.dim => {
                bad("GL2-type requires field_degree = dim")
            }
            EndoType::Gl2Type { disc_e, .. } | EndoType::RealMultSurface { disc_e } if disc_e.is_zero() => {
                bad("disc_E must be nonzero")
            }
            EndoType::QuaternionMult { delta } if delta.is_zero() => bad("delta must be positive"),
            _ => Ok(()),
        }
    }

    fn b_doubled(&self, g: u32) -> ExactExpr {
        bound_b(2 * self.degree_k, g, &(&self.faltings_height * int(2)))
    }

    fn b_own(&self) -> ExactExpr {
        bound_b(self.degree_k, self.dim, &self.faltings_height)
    }
}

/// The threshold a prime must exceed for the given endomorphism type.
pub fn threshold_for(desc: &VarietyDescriptor) -> Result<ExactExpr, BoundsError> {
    desc.validate()?;
    Ok(match &desc.endo_type {
        EndoType::TrivialEndo => ExactExpr::power(desc.b_doubled(4), rat(1, 4)),
        EndoType::Gl2Type { .. } => ExactExpr::Max(alloc::vec![
            ExactExpr::power(desc.b_own(), int(desc.dim)),
            ExactExpr::power(desc.b_doubled(2 * desc.dim), rat(1, 2)),
        ]),
        EndoType::RealMultSurface { .. } | EndoType::QuaternionMult { .. } => {
            ExactExpr::power(desc.b_doubled(4), rat(1, 2))
        }
    })
}

/// Primes above `b(d, g, h)^g` do not divide `[O_E : R]`.
pub fn good_prime_bound(desc: &VarietyDescriptor) -> Result<ExactExpr, BoundsError> {
    desc.validate()?;
    match desc.endo_type {
        EndoType::Gl2Type { .. } | EndoType::RealMultSurface { .. } => {
            Ok(ExactExpr::power(desc.b_own(), int(desc.dim)))
        }
        _ => Err(BoundsError::BadDescriptor(String::from("good_prime_bound needs a GL2-type descriptor"))),
    }
}

/// `[O_D : R] ≤ b(d, 2, h)^4` for quaternionic multiplication.
pub fn quaternion_index_bound(desc: &VarietyDescriptor) -> Result<ExactExpr, BoundsError> {
    desc.validate()?;
    match desc.endo_type {
        EndoType::QuaternionMult { .. } => {
            Ok(ExactExpr::power(bound_b(desc.degree_k, 2, &desc.faltings_height), int(4)))
        }
        _ => Err(BoundsError::BadDescriptor(String::from("quaternion_index_bound needs a QM descriptor"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailedCondition {
    /// `indeterminate` is set when the comparison did not resolve.
    BelowThreshold {
        indeterminate: bool,
    },
    RamifiedInK,
    RamifiedInE,
    NotSemistable,
    DividesDelta,
    EndosNotOverK,
}

impl FailedCondition {
    pub fn as_str(&self) -> &'static str {
        match self {
            FailedCondition::BelowThreshold { .. } => "BelowThreshold",
            FailedCondition::RamifiedInK => "RamifiedInK",
            FailedCondition::RamifiedInE => "RamifiedInE",
            FailedCondition::NotSemistable => "NotSemistable",
            FailedCondition::DividesDelta => "DividesDelta",
            FailedCondition::EndosNotOverK => "EndosNotOverK",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityVerdict {
    pub prime: u64,
    pub admissible: bool,
    pub threshold: ExactExpr,
    pub comparison: Comparison,
    pub failed_conditions: Vec<FailedCondition>,
    pub expected_image: String,
}

fn divides(l: u64, n: &BigInt) -> bool {
    (n % BigInt::from(l)).is_zero()
}

fn h_ell_description(l: u64, degree: u32, disc_e: &BigInt) -> String {
    let general = "{(x_λ) ∈ ∏_{λ|ℓ} GL2(O_λ) : det x_λ1 = det x_λ2 ∈ Z_ℓ^×}";
    if degree != 2 {
        return format!("{general} (ℓ = {l})");
    }
    let r = disc_e.mod_floor(&BigInt::from(l)).to_i64().unwrap_or(0);
    match legendre(r, l) {
        1 => format!("{{(h1, h2) ∈ GL2(Z_{l})^2 : det h1 = det h2}} (ℓ split in E)"),
        -1 => format!("{{x ∈ GL2(O_E ⊗ Z_{l}) : det x ∈ Z_{l}^×}} (ℓ inert in E)"),
        _ => format!("{general} (ℓ = {l})"),
    }
}

/// All side conditions for `ℓ` plus the threshold comparison.
pub fn check_prime_admissible(
    desc: &VarietyDescriptor,
    l: u64,
    precision_cap: u32,
) -> Result<AdmissibilityVerdict, BoundsError> {
    if !is_prime(l) {
        return Err(BoundsError::NotPrime(l));
    }
    let threshold = threshold_for(desc)?;
    let mut failed = Vec::new();
    if desc.ramified_primes_k.contains(&l) {
        failed.push(FailedCondition::RamifiedInK);
    }
    let expected_image = match &desc.endo_type {
        EndoType::TrivialEndo => {
            if desc.non_semistable_primes.contains(&l) {
                failed.push(FailedCondition::NotSemistable);
            }
            format!("GSp4(Z_{l})")
        }
        EndoType::Gl2Type { disc_e, .. } | EndoType::RealMultSurface { disc_e } => {
            if divides(l, disc_e) {
                failed.push(FailedCondition::RamifiedInE);
            }
            if !desc.endos_over_k {
                failed.push(FailedCondition::EndosNotOverK);
            }
            h_ell_description(l, desc.dim, disc_e)
        }
        EndoType::QuaternionMult { delta } => {
            if divides(l, &BigInt::from(delta.clone())) {
                failed.push(FailedCondition::DividesDelta);
            }
            if !desc.endos_over_k {
                failed.push(FailedCondition::EndosNotOverK);
            }
            format!("(R ⊗ Z_{l})^×")
        }
    };
    let comparison = compare_prime(l, &threshold, precision_cap)?;
    match comparison {
        Comparison::PrimeAbove => {}
        Comparison::PrimeBelow => failed.push(FailedCondition::BelowThreshold { indeterminate: false }),
        Comparison::Indeterminate(_) => failed.push(FailedCondition::BelowThreshold { indeterminate: true }),
    }
    Ok(AdmissibilityVerdict {
        prime: l,
        admissible: failed.is_empty(),
        threshold,
        comparison,
        failed_conditions: failed,
        expected_image,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surface(endo_type: EndoType) -> VarietyDescriptor {
        VarietyDescriptor {
            degree_k: 1,
            faltings_height: int(1),
            dim: 2,
            endo_type,
            ramified_primes_k: alloc::vec![],
            non_semistable_primes: alloc::vec![],
            endos_over_k: true,
        }
    }

    #[test]
    fn alpha_and_degree_bound() {
        assert_eq!([1, 2, 4].map(alpha), [1024, 8192, 65536]);
        assert_eq!(endomorphism_field_degree_bound(1), BigUint::from(162u32));
        assert_eq!(endomorphism_field_degree_bound(2), BigUint::from(209_952u32));
        assert_eq!(endomorphism_field_degree_bound(3), BigUint::from(774_840_978u64));
    }

    #[test]
    fn ln_enclosures_bracket_f64() {
        for n in [1u64, 2, 3, 10, 14, 1000, 123_456_789, u64::MAX] {
            let (lo, hi) = ln_uint(&BigUint::from(n), 64);
            let scale = 2f64.powi(64);
            let x = (n as f64).ln();
            assert!(lo.to_f64().unwrap() / scale <= x + 1e-12, "{n}");
            assert!(hi.to_f64().unwrap() / scale >= x - 1e-12, "{n}");
            assert!(&hi - &lo < BigInt::from(64));
        }
    }

    #[test]
    fn b_of_ones_is_14_to_65536() {
        let b = bound_b(1, 1, &int(1));
        let exact = b.exact(DEFAULT_EXACT_BITS).unwrap();
        assert_eq!(exact, int(BigInt::from(14).pow(65536u32)));
        assert_eq!(exact.to_integer().bits(), 249_519);
        assert_eq!(bound_b(1, 1, &int(0)).exact(DEFAULT_EXACT_BITS), Some(exact));
        let (lo, hi) = ExactExpr::Product(alloc::vec![b, ExactExpr::NaturalLog(int(3))]).bit_length_bounds(64);
        assert!(lo <= BigInt::from(249_520) && hi >= BigInt::from(249_519));
    }

    #[test]
    fn compare_examples() {
        let b = bound_b(1, 1, &int(1));
        assert_eq!(compare_prime(2, &b, 64).unwrap(), Comparison::PrimeBelow);
        assert_eq!(
            compare_prime(3, &ExactExpr::RationalConst(int(3)), 4096).unwrap(),
            Comparison::Indeterminate(IndeterminateReason::Equal)
        );
        assert_eq!(compare_prime(5, &ExactExpr::RationalConst(rat(7, 2)), 64).unwrap(), Comparison::PrimeAbove);
        assert_eq!(compare_prime(7, &ExactExpr::NaturalLog(int(1000)), 64).unwrap(), Comparison::PrimeAbove);
        assert_eq!(compare_prime(5, &ExactExpr::NaturalLog(int(1000)), 64).unwrap(), Comparison::PrimeBelow);
        // √9 = 3 is not recognised as rational, so equality cannot resolve
        let root = ExactExpr::power(ExactExpr::RationalConst(int(9)), rat(1, 2));
        assert_eq!(compare_prime(3, &root, 256).unwrap(), Comparison::Indeterminate(IndeterminateReason::PrecisionCap));
        assert!(compare_prime(4, &root, 256).is_err());
        assert!(compare_prime(5, &root, 32).is_err());
    }

    #[test]
    fn thresholds_structure() {
        let t = threshold_for(&surface(EndoType::TrivialEndo)).unwrap();
        assert_eq!(t, ExactExpr::power(bound_b(2, 4, &int(2)), rat(1, 4)));
        let rm = threshold_for(&surface(EndoType::RealMultSurface { disc_e: BigInt::from(5) })).unwrap();
        assert_eq!(rm, ExactExpr::power(bound_b(2, 4, &int(2)), rat(1, 2)));
        let qm = surface(EndoType::QuaternionMult { delta: BigUint::from(6u32) });
        assert_eq!(quaternion_index_bound(&qm).unwrap(), ExactExpr::power(bound_b(1, 2, &int(1)), int(4)));
        let gl2 = surface(EndoType::Gl2Type { field_degree: 2, disc_e: BigInt::from(5) });
        assert_eq!(good_prime_bound(&gl2).unwrap(), ExactExpr::power(bound_b(1, 2, &int(1)), int(2)));
        let ExactExpr::Max(children) = threshold_for(&gl2).unwrap() else { panic!() };
        let a = children[0].log_enclosure(64);
        let b = children[1].log_enclosure(64);
        assert!(b.lo > a.hi);
        let mut bad = surface(EndoType::TrivialEndo);
        bad.dim = 3;
        assert!(threshold_for(&bad).is_err());
    }

    #[test]
    fn admissibility_reasons() {
        let mut d = surface(EndoType::TrivialEndo);
        d.ramified_primes_k = alloc::vec![11];
        let v = check_prime_admissible(&d, 11, 64).unwrap();
        assert!(!v.admissible);
        assert!(v.failed_conditions.contains(&FailedCondition::RamifiedInK));
        assert!(v.failed_conditions.contains(&FailedCondition::BelowThreshold { indeterminate: false }));

        let q = surface(EndoType::QuaternionMult { delta: BigUint::from(6u32) });
        let v = check_prime_admissible(&q, 3, 64).unwrap();
        assert!(v.failed_conditions.contains(&FailedCondition::DividesDelta));

        let mut rm = surface(EndoType::RealMultSurface { disc_e: BigInt::from(5) });
        rm.endos_over_k = false;
        let v = check_prime_admissible(&rm, 5, 64).unwrap();
        assert!(v.failed_conditions.contains(&FailedCondition::RamifiedInE));
        assert!(v.failed_conditions.contains(&FailedCondition::EndosNotOverK));
        assert!(check_prime_admissible(&rm, 11, 64).unwrap().expected_image.contains("split"));
        assert!(check_prime_admissible(&rm, 7, 64).unwrap().expected_image.contains("inert"));
    }
}
