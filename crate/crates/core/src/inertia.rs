//! Tame inertia bookkeeping for semistable reduction at an unramified prime.
//!
//! A tame inertia element `x` is represented by the value `φ(x)` of one
//! fundamental character of level `L`, taken to be a generator of
//! `F_{ℓ^L}^×`. Every other character is then a power of it: the fundamental
//! character of level `n | L` is `φ^{(ℓ^L−1)/(ℓ^n−1)}`, the cyclotomic
//! character is the level-1 one, and Galois conjugation multiplies the
//! exponent by `ℓ`. Everything below is arithmetic on those exponents modulo
//! `ℓ^L − 1`, or on actual values in `F_{ℓ²}` for abelian surfaces.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::{FieldError, FqElem, FqField};
use crate::primes::{gcd_u128, is_prime, lcm_u128};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InertiaError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("l = {l} is outside the supported range {min}..={max}")]
    OutOfRange { l: u64, min: u64, max: u64 },
    #[error("g = {0} is outside 1..=4")]
    BadDimension(u32),
    #[error("character of level {level} is not admissible: {reason}")]
    NotAdmissible { level: usize, reason: &'static str },
    #[error("slots have total dimension {got}, expected {expected}")]
    WrongDimension { got: usize, expected: usize },
    #[error("generator has order {got}, expected {expected}")]
    NotMaximalOrder { got: u64, expected: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The character by which tame inertia acts on one simple subquotient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Character {
    Trivial,
    Cyclotomic,
    /// `φ₁` (index 1) or `φ₂ = φ₁^ℓ` (index 2), on a 2-dimensional factor.
    FundamentalLevel2(u8),
    /// `φ^{Σ eᵢ ℓ^i}` with `φ` fundamental of level `n = exponents.len()`.
    FundamentalLevelN(Vec<u8>),
}

impl Character {
    pub fn level(&self) -> usize {
        match self {
            Character::Trivial | Character::Cyclotomic => 1,
            Character::FundamentalLevel2(_) => 2,
            Character::FundamentalLevelN(e) => e.len(),
        }
    }

    /// Exponent vector `(e₀, …, e_{n−1})`.
    pub fn exponents(&self) -> Vec<u8> {
        match self {
            Character::Trivial => vec![0],
            Character::Cyclotomic => vec![1],
            Character::FundamentalLevel2(1) => vec![1, 0],
            Character::FundamentalLevel2(_) => vec![0, 1],
            Character::FundamentalLevelN(e) => e.clone(),
        }
    }

    /// Number of `ℓ`-adic digits equal to 1: the power of `χ_ℓ` in the
    /// determinant on this factor.
    pub fn cyclotomic_weight(&self) -> u32 {
        self.exponents().iter().map(|&e| e as u32).sum()
    }

    fn check(&self) -> Result<(), InertiaError> {
        let e = self.exponents();
        let n = e.len();
        if n == 0 {
            return Err(InertiaError::NotAdmissible { level: 0, reason: "empty exponent vector" });
        }
        if e.iter().any(|&x| x > 1) {
            return Err(InertiaError::NotAdmissible { level: n, reason: "exponents must lie in {0, 1}" });
        }
        if n >= 2 && e.iter().all(|&x| x == e[0]) {
            return Err(InertiaError::NotAdmissible {
                level: n,
                reason: "constant exponent vector defines a character of a smaller field",
            });
        }
        if let Character::FundamentalLevel2(i) = self {
            if *i != 1 && *i != 2 {
                return Err(InertiaError::NotAdmissible { level: 2, reason: "conjugate index must be 1 or 2" });
            }
        }
        Ok(())
    }
}

/// Characters of the simple subquotients of `A[ℓ]` under tame inertia.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InertiaPattern {
    pub l: u64,
    pub entries: Vec<Character>,
}

impl InertiaPattern {
    pub fn dimension(&self) -> usize {
        self.entries.iter().map(|c| c.level()).sum()
    }

    /// `(m₀, m₁, m₂)`: trivial, cyclotomic and level-2 factors.
    pub fn counts(&self) -> (usize, usize, usize) {
        let count = |p: fn(&Character) -> bool| self.entries.iter().filter(|c| p(c)).count();
        (count(|c| *c == Character::Trivial), count(|c| *c == Character::Cyclotomic), count(|c| c.level() == 2))
    }
}

fn check_l(l: u64, min: u64, max: u64) -> Result<(), InertiaError> {
    if !is_prime(l) {
        return Err(InertiaError::NotPrime(l));
    }
    if l < min || l > max {
        return Err(InertiaError::OutOfRange { l, min, max });
    }
    Ok(())
}

/// Largest `ℓ` accepted by the surface routines.
pub const SURFACE_MAX_L: u64 = 251;

/// Patterns for an abelian surface: all `(m₀, m₁, m₂)` with
/// `m₀ + m₁ + 2m₂ = 4` and `m₁ + m₂ = 2`, in increasing `m₀`.
pub fn enumerate_surface_patterns(l: u64) -> Result<Vec<InertiaPattern>, InertiaError> {
    check_l(l, 11, SURFACE_MAX_L)?;
    let mut out = Vec::new();
    for m0 in 0..=4usize {
        for m1 in 0..=4usize {
            for m2 in 0..=2usize {
                if m0 + m1 + 2 * m2 != 4 || m1 + m2 != 2 {
                    continue;
                }
                let mut entries = vec![Character::Trivial; m0];
                entries.extend(vec![Character::Cyclotomic; m1]);
                entries.extend(vec![Character::FundamentalLevel2(1); m2]);
                out.push(InertiaPattern { l, entries });
            }
        }
    }
    Ok(out)
}

/// Eigenvalues of `ρ(x)` when `φ₁(x) = generator`: trivial ↦ 1,
/// cyclotomic ↦ `N(generator)`, a level-2 factor ↦ both conjugates.
pub fn realize_pattern(f: &FqField, p: &InertiaPattern, generator: FqElem) -> Result<Vec<FqElem>, InertiaError> {
    let l = f.characteristic();
    let expected = l * l - 1;
    let got = f.mult_order(generator)?;
    if f.degree() != 2 || got != expected {
        return Err(InertiaError::NotMaximalOrder { got, expected });
    }
    let conj = f.pow(generator, l);
    let mut out = Vec::new();
    for c in &p.entries {
        c.check()?;
        match c {
            Character::Trivial => out.push(FqElem::ONE),
            Character::Cyclotomic => out.push(f.norm(generator)),
            Character::FundamentalLevel2(1) => out.extend([generator, conj]),
            Character::FundamentalLevel2(_) => out.extend([conj, generator]),
            Character::FundamentalLevelN(_) => {
                return Err(InertiaError::NotAdmissible { level: c.level(), reason: "surface factors have level <= 2" })
            }
        }
    }
    Ok(out)
}

/// All permutations of `0..4`, identity first.
pub fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| p.contains(&i)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Whether `λ₁λ₄ = λ₂λ₃`, `λ₂λ₄ = λ₃²` and `λ₁λ₃ = λ₂²`.
pub fn satisfies_cubic_relations(f: &FqField, x: [FqElem; 4]) -> bool {
    let [a, b, c, d] = x;
    f.mul(a, d) == f.mul(b, c) && f.mul(b, d) == f.mul(c, c) && f.mul(a, c) == f.mul(b, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ordering {
    /// `perm[i]` is the index of the multiset element placed at `λ_{i+1}`.
    Orderable([usize; 4]),
    NotOrderable,
}

/// Tries all 24 orderings against the twisted-cubic eigenvalue relations.
pub fn eigenvalue_system_admits_ordering(f: &FqField, s: [FqElem; 4]) -> Ordering {
    permutations4()
        .into_iter()
        .find(|p| satisfies_cubic_relations(f, p.map(|i| s[i])))
        .map_or(Ordering::NotOrderable, Ordering::Orderable)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicWitness {
    pub pattern: InertiaPattern,
    pub generator: FqElem,
    pub eigenvalues: Vec<FqElem>,
    pub failing_orderings: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CubicVerdict {
    Verified(Vec<CubicWitness>),
    Failed(InertiaPattern),
}

/// For each surface pattern, looks for a maximal-order `φ₁(x)` whose
/// eigenvalue multiset fits no ordering of the twisted-cubic relations.
pub fn verify_no_twisted_cubic(l: u64) -> Result<CubicVerdict, InertiaError> {
    let patterns = enumerate_surface_patterns(l)?;
    let f = FqField::new(l, 2)?;
    let n = l * l - 1;
    let generators: Vec<FqElem> = f.elements().filter(|&x| !x.is_zero() && f.mult_order(x).ok() == Some(n)).collect();
    let mut witnesses = Vec::new();
    for p in patterns {
        let mut found = None;
        for &g in &generators {
            let ev = realize_pattern(&f, &p, g)?;
            let arr = [ev[0], ev[1], ev[2], ev[3]];
            if eigenvalue_system_admits_ordering(&f, arr) == Ordering::NotOrderable {
                found = Some(CubicWitness { pattern: p.clone(), generator: g, eigenvalues: ev, failing_orderings: 24 });
                break;
            }
        }
        match found {
            Some(w) => witnesses.push(w),
            None => return Ok(CubicVerdict::Failed(p)),
        }
    }
    Ok(CubicVerdict::Verified(witnesses))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentResult {
    MinN(u128),
    Contradiction,
}

/// Largest `ℓ` for [`verify_lower_bound`].
pub const LOWER_BOUND_MAX_L: u64 = 47;

fn check_slots(g: u32, slots: &[Character]) -> Result<(), InertiaError> {
    if !(1..=4).contains(&g) {
        return Err(InertiaError::BadDimension(g));
    }
    for c in slots {
        c.check()?;
        if c.level() > 2 * g as usize {
            return Err(InertiaError::NotAdmissible { level: c.level(), reason: "level exceeds 2g" });
        }
    }
    let dim: usize = slots.iter().map(|c| c.level()).sum();
    if dim != 2 * g as usize {
        return Err(InertiaError::WrongDimension { got: dim, expected: 2 * g as usize });
    }
    Ok(())
}

/// Exponents of the characters as powers of a level-`L` fundamental
/// character, with the modulus `ℓ^L − 1`.
pub fn exponent_model(l: u64, slots: &[Character]) -> (u128, Vec<u128>) {
    let big_l = slots.iter().map(|c| c.level() as u128).fold(1, lcm_u128) as u32;
    let l = l as u128;
    let m = l.pow(big_l) - 1;
    let exps = slots
        .iter()
        .map(|c| {
            let e = c.exponents();
            let n = e.len() as u32;
            let digits: u128 = e.iter().rev().fold(0, |acc, &d| acc * l + d as u128);
            m / (l.pow(n) - 1) * digits
        })
        .collect();
    (m, exps)
}

/// Least `N` making `ψᵢ(x)^{ℓᵗN} = ψⱼ(x)^N` for all slots `i, j` and
/// `t ∈ {0, 1}` at a generator of tame inertia, or `Contradiction` when the
/// determinant cannot equal `χ_ℓ^g`.
///
/// The two values of `t` suffice: together they give `ψᵢ^{(ℓ−1)N} = 1`,
/// hence `ψᵢ^{ℓᵗN} = ψᵢ^N` for every `t`. In exponents the conditions read
/// `dN ≡ 0 (mod ℓ^L − 1)` for each difference `d`, so the least `N` is the
/// lcm of the `(ℓ^L − 1)/gcd(d, ℓ^L − 1)`.
pub fn minimal_projective_exponent(l: u64, g: u32, slots: &[Character]) -> Result<ExponentResult, InertiaError> {
    if !is_prime(l) {
        return Err(InertiaError::NotPrime(l));
    }
    if l < g as u64 + 2 {
        return Err(InertiaError::OutOfRange { l, min: g as u64 + 2, max: u64::MAX });
    }
    check_slots(g, slots)?;
    let weight: u64 = slots.iter().map(|c| c.cyclotomic_weight() as u64).sum();
    if weight % (l - 1) != g as u64 % (l - 1) {
        return Ok(ExponentResult::Contradiction);
    }
    let (m, exps) = exponent_model(l, slots);
    let l = l as u128;
    let mut n = 1u128;
    for &a in &exps {
        for &b in &exps {
            for t in [1u128, l] {
                let d = (a * t % m + m - b) % m;
                n = lcm_u128(n, m / gcd_u128(d, m));
            }
        }
    }
    Ok(ExponentResult::MinN(n))
}

/// Admissible characters of level `n`.
pub fn characters_of_level(n: usize) -> Vec<Character> {
    if n == 1 {
        return vec![Character::Trivial, Character::Cyclotomic];
    }
    (1u32..(1 << n) - 1)
        .map(|mask| {
            let e: Vec<u8> = (0..n).map(|i| (mask >> i & 1) as u8).collect();
            if n == 2 {
                Character::FundamentalLevel2(if e[0] == 1 { 1 } else { 2 })
            } else {
                Character::FundamentalLevelN(e)
            }
        })
        .collect()
}

/// Every multiset of admissible characters of total dimension `2g`.
pub fn admissible_patterns(g: u32) -> Vec<Vec<Character>> {
    let mut kinds = Vec::new();
    for n in 1..=2 * g as usize {
        kinds.extend(characters_of_level(n));
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(kinds: &[Character], start: usize, left: usize, cur: &mut Vec<Character>, out: &mut Vec<Vec<Character>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..kinds.len() {
            let d = kinds[i].level();
            if d <= left {
                cur.push(kinds[i].clone());
                rec(kinds, i, left - d, cur, out);
                cur.pop();
            }
        }
    }
    rec(&kinds, 0, 2 * g as usize, &mut cur, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LowerBoundVerdict {
    Verified { patterns: usize, contradictions: usize, min_n: u128 },
    Failed(Vec<Character>, u128),
}

/// Checks `MinN ≥ ℓ − 1` or a contradiction for every admissible pattern.
pub fn verify_lower_bound(l: u64, g: u32) -> Result<LowerBoundVerdict, InertiaError> {
    if !(1..=4).contains(&g) {
        return Err(InertiaError::BadDimension(g));
    }
    check_l(l, g as u64 + 2, LOWER_BOUND_MAX_L)?;
    let pats = admissible_patterns(g);
    let mut contradictions = 0;
    let mut min_n = u128::MAX;
    for p in &pats {
        match minimal_projective_exponent(l, g, p)? {
            ExponentResult::Contradiction => contradictions += 1,
            ExponentResult::MinN(n) if n < (l - 1) as u128 => return Ok(LowerBoundVerdict::Failed(p.clone(), n)),
            ExponentResult::MinN(n) => min_n = min_n.min(n),
        }
    }
    Ok(LowerBoundVerdict::Verified { patterns: pats.len(), contradictions, min_n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_patterns() {
        let ps = enumerate_surface_patterns(11).unwrap();
        assert_eq!(ps.len(), 3);
        for p in &ps {
            let (m0, m1, m2) = p.counts();
            assert_eq!(m0 + m1 + 2 * m2, 4);
            assert_eq!(m1 + m2, 2);
        }
        assert_eq!(
            ps[2].entries,
            vec![Character::Trivial, Character::Trivial, Character::Cyclotomic, Character::Cyclotomic]
        );
        assert!(enumerate_surface_patterns(7).is_err());
    }

    #[test]
    fn realization() {
        let f = FqField::new(11, 2).unwrap();
        let g = f.primitive_element();
        let ps = enumerate_surface_patterns(11).unwrap();
        let ev = realize_pattern(&f, &ps[2], g).unwrap();
        let n = f.norm(g);
        assert_eq!(f.mult_order(n).unwrap(), 10);
        let mut counts = [ev.iter().filter(|&&x| x == n).count(), ev.iter().filter(|&&x| x == FqElem::ONE).count()];
        counts.sort();
        assert_eq!(counts, [2, 2]);
        let g11 = f.pow(g, 11);
        assert_eq!(realize_pattern(&f, &ps[0], g).unwrap(), vec![g, g11, g, g11]);
        assert!(realize_pattern(&f, &ps[0], f.pow(g, 2)).is_err());
    }

    #[test]
    fn orderings() {
        let f = FqField::new(11, 1).unwrap();
        let one = FqElem::ONE;
        assert_eq!(eigenvalue_system_admits_ordering(&f, [one; 4]), Ordering::Orderable([0, 1, 2, 3]));
        let two = f.from_int(2);
        assert_eq!(eigenvalue_system_admits_ordering(&f, [two, two, one, one]), Ordering::NotOrderable);
    }

    #[test]
    fn no_twisted_cubic_small() {
        for l in [11, 13] {
            match verify_no_twisted_cubic(l).unwrap() {
                CubicVerdict::Verified(w) => assert_eq!(w.len(), 3),
                v => panic!("{v:?}"),
            }
        }
        assert!(verify_no_twisted_cubic(7).is_err());
    }

    fn exhaustive_min_n(l: u64, slots: &[Character]) -> u128 {
        let (m, exps) = exponent_model(l, slots);
        let l = l as u128;
        (1..=m)
            .find(|&n| {
                exps.iter().all(|&a| exps.iter().all(|&b| [1, l].iter().all(|&t| (a * t % m * n) % m == b * n % m)))
            })
            .unwrap()
    }

    #[test]
    fn projective_exponent_examples() {
        use Character::*;
        assert_eq!(minimal_projective_exponent(11, 2, &vec![Trivial; 4]).unwrap(), ExponentResult::Contradiction);
        let mixed = [Trivial, Trivial, Cyclotomic, Cyclotomic];
        assert_eq!(minimal_projective_exponent(11, 2, &mixed).unwrap(), ExponentResult::MinN(10));
        let lvl2 = [FundamentalLevel2(1), Trivial, Cyclotomic];
        let ExponentResult::MinN(n) = minimal_projective_exponent(11, 2, &lvl2).unwrap() else { panic!() };
        assert!(n >= 11);
        assert_eq!(n, exhaustive_min_n(11, &lvl2));
        assert!(minimal_projective_exponent(11, 2, &[FundamentalLevelN(vec![1, 1, 1]), Trivial]).is_err());
        assert!(minimal_projective_exponent(5, 4, &vec![Trivial; 8]).is_err());
    }

    #[test]
    fn formula_matches_exhaustive_search() {
        for (l, g) in [(5u64, 2u32), (7, 2), (5, 3)] {
            for p in admissible_patterns(g) {
                if let ExponentResult::MinN(n) = minimal_projective_exponent(l, g, &p).unwrap() {
                    assert_eq!(n, exhaustive_min_n(l, &p), "{p:?}");
                }
            }
        }
    }

    #[test]
    fn lower_bound_examples() {
        assert!(matches!(verify_lower_bound(11, 2).unwrap(), LowerBoundVerdict::Verified { .. }));
        assert!(matches!(verify_lower_bound(13, 1).unwrap(), LowerBoundVerdict::Verified { .. }));
        assert!(verify_lower_bound(5, 4).is_err());
    }
}
