//! Dickson's classification of subgroups of `GL₂(F_q)`, `q = p^β`, `p ≥ 5`.
//!
//! The tests run in the order of the classification and the first match
//! wins: cyclic, Borel (a common eigenline), normalizer of a Cartan subgroup
//! (a twisted commutant `X` with `gX = ±Xg`, whose eigenlines are the
//! permuted pair), groups generated by `SL₂(F_{p^α})` with scalars (types
//! 5a/5b, with the level `α` read off the trace field of the derived
//! subgroup), and the exceptional groups with projective image `A₄`, `S₄`
//! or `A₅`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::field::{FqElem, FqField};
use crate::matrix::Mat2;
use crate::primes::factorize;
use crate::symplectic::{enumerate, invariant_lines, twisted_commutant, MatrixGroup, Subspace};

/// Default ceiling on `|G|` for the enumerations.
pub const DEFAULT_CAP: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DicksonError {
    #[error("Dickson classification here needs p >= 5 (got p = {0})")]
    SmallCharacteristic(u64),
    #[error("group has no generators")]
    NoGenerators,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DicksonClass {
    Cyclic,
    Borel,
    CartanNormalizer,
    DiagonalIndex2,
    Type5a { level: u32 },
    Type5b { level: u32 },
    Exceptional,
    Unknown,
}

impl DicksonClass {
    pub fn name(&self) -> &'static str {
        match self {
            DicksonClass::Cyclic => "Cyclic",
            DicksonClass::Borel => "Borel",
            DicksonClass::CartanNormalizer => "CartanNormalizer",
            DicksonClass::DiagonalIndex2 => "DiagonalIndex2",
            DicksonClass::Type5a { .. } => "Type5a",
            DicksonClass::Type5b { .. } => "Type5b",
            DicksonClass::Exceptional => "Exceptional",
            DicksonClass::Unknown => "Unknown",
        }
    }

    pub fn level(&self) -> Option<u32> {
        match self {
            DicksonClass::Type5a { level } | DicksonClass::Type5b { level } => Some(*level),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DicksonWitness {
    /// An element generating the whole group.
    Generator {
        element: Mat2,
        order: u64,
    },
    /// A line fixed by every generator.
    FixedLine(Subspace),
    /// `x` (trace 0, `x² = c·I`) commutes or anticommutes with each
    /// generator. `split` says whether its eigenlines are defined over
    /// `F_q`; the commuting subgroup has index 2 and the given order.
    PermutedPair {
        x: Mat2,
        split: bool,
        signs: Vec<i8>,
        index2_order: u64,
        index2_cyclic: bool,
    },
    /// Orders backing a type-5 verdict.
    Level {
        alpha: u32,
        order: u64,
        det_one_order: u64,
        sl2_order: u64,
        scalars: u64,
    },
    ProjectiveOrder(u64),
    Partial(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DicksonReport {
    pub class: DicksonClass,
    pub witness: DicksonWitness,
}

/// `|SL₂(F_q)| = q(q² − 1)`.
pub fn sl2_order(q: u64) -> u64 {
    q * (q * q - 1)
}

/// Multiplicative order of an invertible `2 × 2` matrix.
pub fn matrix_order(f: &FqField, m: &Mat2, group_order: u64) -> u64 {
    let mut ord = group_order;
    for (p, _) in factorize(group_order) {
        while ord.is_multiple_of(p) && m.pow(f, ord / p).is_identity() {
            ord /= p;
        }
    }
    ord
}

fn gl2_order(q: u64) -> u64 {
    (q * q - 1) * (q * q - q)
}

fn is_cyclic(f: &FqField, elements: &[Mat2]) -> Option<Mat2> {
    let n = elements.len() as u64;
    elements.iter().find(|m| matrix_order(f, m, n) == n).copied()
}

/// Classifies `⟨gens⟩ ⊂ GL₂(F_q)`. Enumerations stop at `cap` elements.
pub fn dickson_classify(g: &MatrixGroup<2>, cap: u64) -> Result<DicksonReport, DicksonError> {
    let f = &g.field;
    let p = f.characteristic();
    if p < 5 {
        return Err(DicksonError::SmallCharacteristic(p));
    }
    if g.generators.is_empty() {
        return Err(DicksonError::NoGenerators);
    }
    let gens = &g.generators;
    let report = |class, witness| Ok(DicksonReport { class, witness });

    // 1. cyclic
    let abelian = gens.iter().all(|a| gens.iter().all(|b| a.mul(f, b) == b.mul(f, a)));
    let elements = enumerate(g, cap, false);
    if abelian {
        if let Some(el) = &elements {
            if let Some(x) = is_cyclic(f, el) {
                return report(DicksonClass::Cyclic, DicksonWitness::Generator { element: x, order: el.len() as u64 });
            }
        }
    }

    // 2. Borel
    if let Some(line) = invariant_lines(f, gens).into_iter().next() {
        return report(DicksonClass::Borel, DicksonWitness::FixedLine(line));
    }

    // 3. normalizer of a Cartan subgroup
    if let Some((x, signs)) = permuted_pair(f, gens) {
        let split = f.is_square(x.mul(f, &x).0[0][0]);
        let Some(el) = &elements else {
            return report(
                DicksonClass::Unknown,
                DicksonWitness::Partial(String::from("normalizes a Cartan subgroup, but |G| exceeds the cap")),
            );
        };
        let h: Vec<Mat2> = el.iter().filter(|m| m.mul(f, &x) == x.mul(f, m)).copied().collect();
        let cyclic = is_cyclic(f, &h).is_some();
        let class = if cyclic { DicksonClass::CartanNormalizer } else { DicksonClass::DiagonalIndex2 };
        return report(
            class,
            DicksonWitness::PermutedPair { x, split, signs, index2_order: h.len() as u64, index2_cyclic: cyclic },
        );
    }

    let Some(el) = elements else {
        return report(
            DicksonClass::Unknown,
            DicksonWitness::Partial(format!(
                "irreducible and not normalizing a Cartan subgroup; |G| exceeds the cap {cap}"
            )),
        );
    };

    // 4. SL₂(F_{p^α}) with scalars
    if let Some(r) = type5(g, &el, cap) {
        return Ok(r);
    }

    // 5. exceptional
    let projective = enumerate(g, 61, true).map(|v| v.len() as u64);
    if let Some(n) = projective {
        if matches!(n, 12 | 24 | 60) {
            return report(DicksonClass::Exceptional, DicksonWitness::ProjectiveOrder(n));
        }
    }
    report(DicksonClass::Unknown, DicksonWitness::Partial(format!("no class matched (|G| = {})", el.len())))
}

/// A non-scalar `X` with `tr X = 0`, `X² = c·I ≠ 0` and `gᵢ X = ±X gᵢ` with
/// at least one minus sign.
fn permuted_pair(f: &FqField, gens: &[Mat2]) -> Option<(Mat2, Vec<i8>)> {
    let k = gens.len();
    if k > 16 {
        return None;
    }
    let q = f.order();
    for mask in 1u32..(1 << k) {
        let signs: Vec<i8> = (0..k).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        let eps: Vec<FqElem> = signs.iter().map(|&s| f.from_int(s as i64)).collect();
        let basis = twisted_commutant(f, gens, &eps);
        let d = basis.len();
        if d == 0 {
            continue;
        }
        // projective points of the (at most 4-dimensional) solution space
        for lead in 0..d {
            for code in 0..q.pow((d - lead - 1) as u32) {
                let mut x = basis[lead];
                let mut c = code;
                for b in &basis[lead + 1..] {
                    x = x.add(f, &b.scale(f, f.element(c % q)));
                    c /= q;
                }
                let sq = x.mul(f, &x);
                if x.trace(f).is_zero() && sq.is_scalar() && !sq.0[0][0].is_zero() {
                    return Some((x, signs));
                }
            }
        }
    }
    None
}

/// Normal closure of the commutators of the generators.
fn derived_subgroup(g: &MatrixGroup<2>, cap: u64) -> Option<Vec<Mat2>> {
    let f = &g.field;
    let gens = &g.generators;
    let inv: Vec<Mat2> = gens.iter().map(|m| m.inverse(f).unwrap()).collect();
    let mut s: Vec<Mat2> = Vec::new();
    for i in 0..gens.len() {
        for j in 0..gens.len() {
            let c = gens[i].mul(f, &gens[j]).mul(f, &inv[i]).mul(f, &inv[j]);
            if !c.is_identity() && !s.contains(&c) {
                s.push(c);
            }
        }
    }
    if s.is_empty() {
        return Some(vec![Mat2::identity()]);
    }
    loop {
        let h = MatrixGroup { field: f.clone(), generators: s.clone(), form: None };
        let elems = enumerate(&h, cap, false)?;
        let keys: hashbrown::HashSet<u128> = elems.iter().map(|m| m.key(f)).collect();
        let mut grew = false;
        for (gi, gv) in gens.iter().zip(&inv) {
            for x in s.clone() {
                let y = gi.mul(f, &x).mul(f, gv);
                if !keys.contains(&y.key(f)) {
                    s.push(y);
                    grew = true;
                }
            }
        }
        if !grew {
            return Some(elems);
        }
    }
}

fn type5(g: &MatrixGroup<2>, elements: &[Mat2], cap: u64) -> Option<DicksonReport> {
    let f = &g.field;
    let p = f.characteristic();
    let beta = f.degree() as u32;
    let derived = derived_subgroup(g, cap)?;
    let alpha = (1..=beta)
        .filter(|a| beta.is_multiple_of(*a))
        .find(|&a| derived.iter().all(|m| f.in_subfield(m.trace(f), a as usize)))?;
    let pa = p.pow(alpha);
    if pa <= 3 {
        return None;
    }
    let order = elements.len() as u64;
    let det_one = elements.iter().filter(|m| m.det(f) == FqElem::ONE).count() as u64;
    let scalars = elements.iter().filter(|m| m.is_scalar()).count() as u64;
    let s = sl2_order(pa);
    if !det_one.is_multiple_of(s) || !scalars.is_multiple_of(2) {
        return None;
    }
    let base = s * scalars / 2;
    let witness = DicksonWitness::Level { alpha, order, det_one_order: det_one, sl2_order: s, scalars };
    let class = if order == base {
        DicksonClass::Type5a { level: alpha }
    } else if order == 2 * base {
        DicksonClass::Type5b { level: alpha }
    } else {
        return None;
    };
    debug_assert!(order <= gl2_order(f.order()));
    Some(DicksonReport { class, witness })
}

/// Does `⟨gens⟩` contain `SL₂(F_q)` for the full field `F_q`?
pub fn contains_full_sl2(g: &MatrixGroup<2>, cap: u64) -> Result<bool, DicksonError> {
    let r = dickson_classify(g, cap)?;
    Ok(r.class.level() == Some(g.field.degree() as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planted::Gl2Family;

    fn group(f: &FqField, gens: Vec<Mat2>) -> MatrixGroup<2> {
        MatrixGroup::new(f.clone(), gens).unwrap()
    }

    fn expected(fam: Gl2Family, f: &FqField) -> DicksonClass {
        let beta = f.degree() as u32;
        match fam {
            Gl2Family::Cyclic => DicksonClass::Cyclic,
            Gl2Family::Borel => DicksonClass::Borel,
            Gl2Family::NonsplitCartanNormalizer | Gl2Family::SplitCartanCyclic => DicksonClass::CartanNormalizer,
            Gl2Family::DiagonalIndex2 => DicksonClass::DiagonalIndex2,
            Gl2Family::Sl2 => DicksonClass::Type5a { level: beta },
            Gl2Family::Gl2 => DicksonClass::Type5b { level: beta },
            Gl2Family::Sl2PrimeSubfield => DicksonClass::Type5a { level: 1 },
            Gl2Family::BinaryTetrahedral => DicksonClass::Exceptional,
        }
    }

    #[test]
    fn planted_families() {
        let mut rng = crate::rng_from_seed(7);
        for (p, n) in [(7u64, 1usize), (11, 1), (5, 2)] {
            let f = FqField::new(p, n).unwrap();
            for fam in Gl2Family::ALL {
                let gens = fam.generators(&f);
                let want = expected(fam, &f);
                let r = dickson_classify(&group(&f, gens.clone()), DEFAULT_CAP).unwrap();
                assert_eq!(r.class, want, "{fam:?} over F_{}: {r:?}", f.order());

                let c = Mat2::random_invertible(&f, &mut rng);
                let ci = c.inverse(&f).unwrap();
                let conj: Vec<Mat2> = gens.iter().map(|m| c.mul(&f, m).mul(&f, &ci)).collect();
                assert_eq!(dickson_classify(&group(&f, conj), DEFAULT_CAP).unwrap().class, want);

                let galois: Vec<Mat2> = gens.iter().map(|m| m.map(|x| f.frobenius(x))).collect();
                assert_eq!(dickson_classify(&group(&f, galois), DEFAULT_CAP).unwrap().class, want);
            }
        }
    }

    #[test]
    fn split_cartan_witness() {
        let f11 = FqField::new(11, 1).unwrap();
        let r = dickson_classify(&group(&f11, Gl2Family::SplitCartanCyclic.generators(&f11)), DEFAULT_CAP).unwrap();
        match r.witness {
            DicksonWitness::PermutedPair { split, index2_order, index2_cyclic, .. } => {
                assert!(split && index2_cyclic);
                assert_eq!(index2_order, 10);
            }
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn small_characteristic_and_cap() {
        let f3 = FqField::new(3, 1).unwrap();
        assert!(dickson_classify(&group(&f3, vec![Mat2::identity()]), 10).is_err());
        let f7 = FqField::new(7, 1).unwrap();
        let r = dickson_classify(&group(&f7, Gl2Family::Sl2.generators(&f7)), 100).unwrap();
        assert_eq!(r.class, DicksonClass::Unknown);
    }

    #[test]
    fn sl2_of_f121_contains_full_sl2() {
        let f = FqField::new(11, 2).unwrap();
        assert!(contains_full_sl2(&group(&f, Gl2Family::Sl2.generators(&f)), DEFAULT_CAP).unwrap());
        assert!(!contains_full_sl2(&group(&f, Gl2Family::Sl2PrimeSubfield.generators(&f)), DEFAULT_CAP).unwrap());
    }
}
