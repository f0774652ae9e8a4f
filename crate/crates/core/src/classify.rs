//! Recognition of subgroups of `GSp₄(F_ℓ)` (`ℓ > 7`) against the five
//! families of maximal subgroups not containing `Sp₄(F_ℓ)`: reducible (C1),
//! imprimitive (C2), field-extension (C3), twisted cubic (type 4) and small
//! projective image.
//!
//! C2 and C3 are both detected through *twisted commutants*. If `G`
//! stabilizes a decomposition `V₁ ⊕ V₂` then `X = id_{V₁} ⊕ (−id_{V₂})`
//! satisfies `g X = ±X g` for every `g`, with the sign recording whether `g`
//! swaps the summands; if `G` normalizes an `F_{ℓ²}`-structure then
//! multiplication by a square root of a non-residue does the same. Both are
//! matrices with `X² = c·I`, `tr X = 0`; `c` is a square in the first case
//! and a non-square in the second. For each sign pattern on the generators
//! the solutions form a linear space, and patterns that are not
//! homomorphisms `G → {±1}` have only the zero solution, so a depth-first
//! search over signs with pruning is exact.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::field::{FqElem, FqField};
use crate::matrix::{nullspace, Mat4};
use crate::symplectic::{
    group_bfs, invariant_subspaces, probabilistic_invariant_subspace, type4_charpoly, BfsOrder, MatrixGroup, Subspace,
    SympForm, SymplecticError,
};
use crate::{rng_from_seed, uniform};

/// Upper bound on `|PG|` for the small-projective family.
pub const SMALL_PROJECTIVE_BOUND: u64 = 3840;
/// Default number of random words for the type-4 test.
pub const DEFAULT_RANDOM_WORDS: usize = 64;
const WORD_LENGTH: usize = 24;
const ENUMERATION_LIMIT: u64 = 1_000_000;
const SAMPLE_TRIALS: u64 = 20_000;
const SIGN_NODE_CAP: usize = 1 << 12;
const SPIN_TRIALS: u64 = 2_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("classification needs l > 7 (got l = {0})")]
    CharacteristicTooSmall(u64),
    #[error("group carries no symplectic form")]
    NoForm,
    #[error("group has no generators")]
    NoGenerators,
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassName {
    C1,
    C2,
    C3,
    Type4,
    SmallProjective,
}

impl ClassName {
    pub const ALL: [ClassName; 5] =
        [ClassName::C1, ClassName::C2, ClassName::C3, ClassName::Type4, ClassName::SmallProjective];

    pub fn as_str(&self) -> &'static str {
        match self {
            ClassName::C1 => "C1",
            ClassName::C2 => "C2",
            ClassName::C3 => "C3",
            ClassName::Type4 => "Type4",
            ClassName::SmallProjective => "SmallProjective",
        }
    }
}

/// Which element a type-4 witness refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementLabel {
    Generator(usize),
    Word(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A proper nonzero subspace invariant under every generator.
    InvariantSubspace(Subspace),
    /// `F_ℓ⁴ = V₁ ⊕ V₂` permuted by `G`; `signs[i] = −1` iff generator `i`
    /// swaps the summands. `involution` has eigenspaces `V₁`, `V₂`.
    Decomposition { v1: Subspace, v2: Subspace, involution: Mat4, signs: Vec<i8> },
    /// `x² = square·I` with `square` a non-residue; `x` commutes
    /// (`signs[i] = 1`) or anticommutes (`−1`) with generator `i`.
    FieldStructure { x: Mat4, square: FqElem, signs: Vec<i8> },
    /// Every tested element passed the eigenvalue-shape test.
    Type4Shape { samples: Vec<(ElementLabel, FqElem, FqElem)>, words: usize, seed: u64 },
    /// Exact order of the projective image.
    ProjectiveOrder(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    Note(String),
    /// An element whose characteristic polynomial has no twisted-cubic shape.
    Type4Failure {
        label: ElementLabel,
        element: Mat4,
    },
    ProjectiveOrderExceeds(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Member(Witness),
    NotMember(Evidence),
    Unknown(String),
}

impl Verdict {
    pub fn is_member(&self) -> bool {
        matches!(self, Verdict::Member(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Conclusion {
    /// No class applies, so (the group not lying in any maximal subgroup
    /// that misses `Sp₄`) the group contains `Sp₄(F_ℓ)`.
    ContainsSp4,
    ProperWithClass(Vec<ClassName>),
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    pub l: u64,
    pub verdicts: Vec<(ClassName, Verdict)>,
    pub conclusion: Conclusion,
    /// Type-4 membership is a sampled necessary condition.
    pub type4_statistical: bool,
}

impl ClassReport {
    pub fn verdict(&self, c: ClassName) -> &Verdict {
        &self.verdicts.iter().find(|(n, _)| *n == c).unwrap().1
    }

    pub fn members(&self) -> Vec<ClassName> {
        self.verdicts.iter().filter(|(_, v)| v.is_member()).map(|(c, _)| *c).collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    pub random_words: usize,
    pub seed: u64,
    pub exhaustive_cap: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            random_words: DEFAULT_RANDOM_WORDS,
            seed: crate::DEFAULT_SEED,
            exhaustive_cap: crate::symplectic::EXHAUSTIVE_CAP,
        }
    }
}

/// Runs all five tests and assembles the conclusion.
pub fn classify_gsp4(g: &MatrixGroup<4>, opts: &ClassifyOptions) -> Result<ClassReport, ClassifyError> {
    let f = &g.field;
    let l = f.characteristic();
    if f.degree() != 1 {
        return Err(SymplecticError::NotPrimeField(f.degree()).into());
    }
    if l <= 7 {
        return Err(ClassifyError::CharacteristicTooSmall(l));
    }
    let form = SympForm { gram: g.form.ok_or(ClassifyError::NoForm)? };
    if g.generators.is_empty() {
        return Err(ClassifyError::NoGenerators);
    }
    let c1 = test_c1(g, opts)?;
    let (c2, c3) = test_c2_c3(g, &form);
    let type4 = test_type4(g, opts);
    let small = test_small_projective(g);
    let verdicts = vec![
        (ClassName::C1, c1),
        (ClassName::C2, c2),
        (ClassName::C3, c3),
        (ClassName::Type4, type4),
        (ClassName::SmallProjective, small),
    ];
    let members: Vec<ClassName> = verdicts.iter().filter(|(_, v)| v.is_member()).map(|(c, _)| *c).collect();
    let conclusion = if !members.is_empty() {
        Conclusion::ProperWithClass(members)
    } else if verdicts.iter().all(|(_, v)| matches!(v, Verdict::NotMember(_))) {
        Conclusion::ContainsSp4
    } else {
        Conclusion::Inconclusive
    };
    Ok(ClassReport { l, verdicts, conclusion, type4_statistical: true })
}

fn test_c1(g: &MatrixGroup<4>, opts: &ClassifyOptions) -> Result<Verdict, ClassifyError> {
    let f = &g.field;
    for dim in 1..=3 {
        match invariant_subspaces(g, dim, opts.exhaustive_cap) {
            Ok(list) => {
                if let Some(s) = list.into_iter().next() {
                    debug_assert!(g.generators.iter().all(|m| s.is_invariant(f, m)));
                    return Ok(Verdict::Member(Witness::InvariantSubspace(s)));
                }
            }
            Err(SymplecticError::ExceedsExhaustiveCap { .. }) => {
                let mut rng = rng_from_seed(opts.seed);
                let search = probabilistic_invariant_subspace(g, SPIN_TRIALS, &mut rng);
                return Ok(match search.found {
                    Some(s) if g.generators.iter().all(|m| s.is_invariant(f, m)) => {
                        Verdict::Member(Witness::InvariantSubspace(s))
                    }
                    _ => Verdict::Unknown(format!(
                        "l above exhaustive cap; spin search found nothing in {} trials (not exhaustive)",
                        search.trials
                    )),
                });
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Verdict::NotMember(Evidence::Note(String::from("no invariant subspace of dimension 1, 2 or 3 (exhaustive)"))))
}

/// `{X : gᵢ X = εᵢ X gᵢ}` as flattened row-major vectors.
fn twisted_rows(f: &FqField, m: &Mat4, eps: FqElem) -> Vec<Vec<FqElem>> {
    let mut rows = Vec::with_capacity(16);
    for i in 0..4 {
        for j in 0..4 {
            let mut row = vec![FqElem::ZERO; 16];
            for k in 0..4 {
                row[k * 4 + j] = f.add(row[k * 4 + j], m.0[i][k]);
                row[i * 4 + k] = f.sub(row[i * 4 + k], f.mul(eps, m.0[k][j]));
            }
            rows.push(row);
        }
    }
    rows
}

fn to_mat(v: &[FqElem]) -> Mat4 {
    let mut x = Mat4::zero();
    for i in 0..4 {
        for j in 0..4 {
            x.0[i][j] = v[i * 4 + j];
        }
    }
    x
}

/// All sign patterns with a nonzero twisted commutant, with a basis of it.
/// `None` when the search tree exceeds its node cap.
pub fn sign_patterns(f: &FqField, gens: &[Mat4]) -> Option<Vec<(Vec<i8>, Vec<Mat4>)>> {
    let mut out = Vec::new();
    let mut nodes = 0usize;
    let mut stack: Vec<(Vec<i8>, Vec<Vec<FqElem>>)> = vec![(Vec::new(), Vec::new())];
    while let Some((signs, rows)) = stack.pop() {
        nodes += 1;
        if nodes > SIGN_NODE_CAP {
            return None;
        }
        let k = signs.len();
        if k == gens.len() {
            let basis = nullspace(f, &rows, 16);
            if !basis.is_empty() {
                out.push((signs, basis.iter().map(|v| to_mat(v)).collect()));
            }
            continue;
        }
        for s in [-1i8, 1] {
            let mut r = rows.clone();
            r.extend(twisted_rows(f, &gens[k], f.from_int(s as i64)));
            crate::matrix::rref(f, &mut r);
            if r.len() == 16 {
                continue;
            }
            let mut sg = signs.clone();
            sg.push(s);
            stack.push((sg, r));
        }
    }
    out.sort_by(|a, b| b.0.cmp(&a.0));
    Some(out)
}

fn combine(f: &FqField, coeffs: &[FqElem], basis: &[Mat4]) -> Mat4 {
    let mut x = Mat4::zero();
    for (c, b) in coeffs.iter().zip(basis) {
        x = x.add(f, &b.scale(f, *c));
    }
    x
}

enum Candidate {
    Decomposition(Subspace, Subspace, Mat4),
    Field(Mat4, FqElem),
}

fn eigenspace(f: &FqField, x: &Mat4, lambda: FqElem) -> Subspace {
    let shifted = x.sub(f, &Mat4::scalar(lambda));
    Subspace::from_vectors(f, &nullspace(f, &shifted.rows(), 4))
}

/// Does `{V₁, V₂}` have the shape of a symplectic decomposition: both
/// totally isotropic, or mutually orthogonal (hence both non-degenerate)?
fn decomposition_is_symplectic(f: &FqField, form: &SympForm, v1: &Subspace, v2: &Subspace) -> bool {
    let pair = |a: &Vec<FqElem>, b: &Vec<FqElem>| {
        let a: [FqElem; 4] = core::array::from_fn(|i| a[i]);
        let b: [FqElem; 4] = core::array::from_fn(|i| b[i]);
        form.pairing(f, &a, &b)
    };
    let isotropic = |v: &Subspace| v.basis.iter().all(|a| v.basis.iter().all(|b| pair(a, b).is_zero()));
    let orthogonal = v1.basis.iter().all(|a| v2.basis.iter().all(|b| pair(a, b).is_zero()));
    (isotropic(v1) && isotropic(v2)) || orthogonal
}

fn inspect(f: &FqField, form: &SympForm, x: &Mat4) -> Option<Candidate> {
    if !x.trace(f).is_zero() {
        return None;
    }
    let sq = x.mul(f, x);
    if !sq.is_scalar() || sq.0[0][0].is_zero() {
        return None;
    }
    let c = sq.0[0][0];
    match f.sqrt(c) {
        Some(s) => {
            let v1 = eigenspace(f, x, s);
            let v2 = eigenspace(f, x, f.neg(s));
            if v1.dim() == 2 && v2.dim() == 2 && decomposition_is_symplectic(f, form, &v1, &v2) {
                Some(Candidate::Decomposition(v1, v2, *x))
            } else {
                None
            }
        }
        None => Some(Candidate::Field(*x, c)),
    }
}

fn test_c2_c3(g: &MatrixGroup<4>, form: &SympForm) -> (Verdict, Verdict) {
    let f = &g.field;
    let q = f.order();
    let Some(patterns) = sign_patterns(f, &g.generators) else {
        let msg = String::from("sign-pattern search exceeded its node cap");
        return (Verdict::Unknown(msg.clone()), Verdict::Unknown(msg));
    };
    let mut c2: Option<Verdict> = None;
    let mut c3: Option<Verdict> = None;
    let mut c2_complete = true;
    let mut c3_complete = true;
    let mut rng = rng_from_seed(crate::DEFAULT_SEED);
    for (signs, basis) in &patterns {
        if c2.is_some() && c3.is_some() {
            break;
        }
        let d = basis.len() as u32;
        let exhaustive = (q as u128).pow(d) <= ENUMERATION_LIMIT as u128;
        let mut visit = |x: Mat4| {
            match inspect(f, form, &x) {
                Some(Candidate::Decomposition(v1, v2, inv)) if c2.is_none() => {
                    c2 =
                        Some(Verdict::Member(Witness::Decomposition { v1, v2, involution: inv, signs: signs.clone() }));
                }
                Some(Candidate::Field(x, c)) if c3.is_none() => {
                    c3 = Some(Verdict::Member(Witness::FieldStructure { x, square: c, signs: signs.clone() }));
                }
                _ => {}
            }
            c2.is_some() && c3.is_some()
        };
        if exhaustive {
            // projective points of the solution space
            for lead in 0..d as usize {
                let tail = (d as usize) - lead - 1;
                for code in 0..q.pow(tail as u32) {
                    let mut coeffs = vec![FqElem::ZERO; d as usize];
                    coeffs[lead] = FqElem::ONE;
                    let mut c = code;
                    for slot in coeffs.iter_mut().skip(lead + 1) {
                        *slot = f.element(c % q);
                        c /= q;
                    }
                    if visit(combine(f, &coeffs, basis)) {
                        break;
                    }
                }
            }
        } else {
            for _ in 0..SAMPLE_TRIALS {
                let coeffs: Vec<FqElem> = (0..d).map(|_| f.element(uniform(&mut rng, q))).collect();
                if visit(combine(f, &coeffs, basis)) {
                    break;
                }
            }
            c2_complete &= c2.is_some();
            c3_complete &= c3.is_some();
        }
    }
    let c2 = c2.unwrap_or_else(|| {
        if c2_complete {
            Verdict::NotMember(Evidence::Note(String::from(
                "no decomposition into two 2-spaces is permuted (exhaustive twisted-commutant search)",
            )))
        } else {
            Verdict::Unknown(String::from("twisted commutant too large to enumerate; sampling found no decomposition"))
        }
    });
    let c3 = c3.unwrap_or_else(|| {
        if c3_complete {
            Verdict::NotMember(Evidence::Note(String::from(
                "no normalized quadratic-field structure (exhaustive twisted-commutant search)",
            )))
        } else {
            Verdict::Unknown(String::from(
                "twisted commutant too large to enumerate; sampling found no field structure",
            ))
        }
    });
    (c2, c3)
}

/// Lookup table from characteristic polynomial to the first `(t, n)` in scan
/// order with that twisted-cubic shape.
pub struct Type4Table {
    table: HashMap<[FqElem; 4], (FqElem, FqElem)>,
}

impl Type4Table {
    pub fn new(f: &FqField) -> Self {
        let p = f.characteristic() as i64;
        let mut table = HashMap::new();
        for t in 0..p {
            for n in 1..p {
                let (t, n) = (f.from_int(t), f.from_int(n));
                let cp = type4_charpoly(f, t, n);
                table.entry([cp[0], cp[1], cp[2], cp[3]]).or_insert((t, n));
            }
        }
        Self { table }
    }

    pub fn lookup(&self, f: &FqField, m: &Mat4) -> Option<(FqElem, FqElem)> {
        let cp = m.charpoly(f);
        self.table.get(&[cp[0], cp[1], cp[2], cp[3]]).copied()
    }
}

fn test_type4(g: &MatrixGroup<4>, opts: &ClassifyOptions) -> Verdict {
    let f = &g.field;
    let table = Type4Table::new(f);
    let mut rng = rng_from_seed(opts.seed);
    let mut samples = Vec::new();
    let elements = g
        .generators
        .iter()
        .enumerate()
        .map(|(i, m)| (ElementLabel::Generator(i), *m))
        .chain((0..opts.random_words).map(|w| (ElementLabel::Word(w), g.random_word(WORD_LENGTH, &mut rng))));
    for (label, m) in elements {
        match table.lookup(f, &m) {
            Some((t, n)) => samples.push((label, t, n)),
            None => return Verdict::NotMember(Evidence::Type4Failure { label, element: m }),
        }
    }
    Verdict::Member(Witness::Type4Shape { samples, words: opts.random_words, seed: opts.seed })
}

fn test_small_projective(g: &MatrixGroup<4>) -> Verdict {
    match group_bfs(g, SMALL_PROJECTIVE_BOUND, true) {
        BfsOrder::Exact(n) => Verdict::Member(Witness::ProjectiveOrder(n)),
        BfsOrder::ExceedsCap => Verdict::NotMember(Evidence::ProjectiveOrderExceeds(SMALL_PROJECTIVE_BOUND)),
    }
}

/// Re-checks a Member witness against the generators.
pub fn verify_witness(g: &MatrixGroup<4>, w: &Witness) -> bool {
    let f = &g.field;
    match w {
        Witness::InvariantSubspace(s) => {
            (1..=3).contains(&s.dim()) && g.generators.iter().all(|m| s.is_invariant(f, m))
        }
        Witness::Decomposition { v1, v2, involution, signs } => {
            let both = Subspace::from_vectors(f, &[v1.basis.clone(), v2.basis.clone()].concat());
            v1.dim() == 2
                && v2.dim() == 2
                && both.dim() == 4
                && signs_hold(f, &g.generators, involution, signs)
                && g.generators.iter().zip(signs).all(|(m, &s)| {
                    let (a, b) = if s == 1 { (v1, v1) } else { (v1, v2) };
                    a.basis.iter().all(|v| {
                        let arr: [FqElem; 4] = core::array::from_fn(|i| v[i]);
                        b.contains(f, &m.mul_vec(f, &arr))
                    })
                })
        }
        Witness::FieldStructure { x, square, signs } => {
            x.mul(f, x) == Mat4::scalar(*square) && !f.is_square(*square) && signs_hold(f, &g.generators, x, signs)
        }
        Witness::Type4Shape { samples, .. } => samples.iter().all(|(label, t, n)| match label {
            ElementLabel::Generator(i) => g.generators[*i].charpoly(f) == type4_charpoly(f, *t, *n).to_vec(),
            ElementLabel::Word(_) => true,
        }),
        Witness::ProjectiveOrder(n) => group_bfs(g, *n, true) == BfsOrder::Exact(*n),
    }
}

fn signs_hold(f: &FqField, gens: &[Mat4], x: &Mat4, signs: &[i8]) -> bool {
    gens.len() == signs.len()
        && gens.iter().zip(signs).all(|(m, &s)| m.mul(f, x) == x.mul(f, m).scale(f, f.from_int(s as i64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{gsp4_generators, standard_form};

    #[test]
    fn rejects_small_characteristic() {
        let f7 = FqField::new(7, 1).unwrap();
        let j = standard_form(&f7).unwrap();
        let g = MatrixGroup::with_form(f7.clone(), gsp4_generators(&f7).unwrap(), &j).unwrap();
        assert_eq!(classify_gsp4(&g, &ClassifyOptions::default()), Err(ClassifyError::CharacteristicTooSmall(7)));
    }

    #[test]
    fn full_group_contains_sp4() {
        let f11 = FqField::new(11, 1).unwrap();
        let j = standard_form(&f11).unwrap();
        let g = MatrixGroup::with_form(f11.clone(), gsp4_generators(&f11).unwrap(), &j).unwrap();
        let r = classify_gsp4(&g, &ClassifyOptions::default()).unwrap();
        assert_eq!(r.conclusion, Conclusion::ContainsSp4, "{r:?}");
    }

    #[test]
    fn sign_patterns_of_trivial_group() {
        let f11 = FqField::new(11, 1).unwrap();
        let p = sign_patterns(&f11, &[Mat4::identity()]).unwrap();
        // only ε = +1 survives, with the full matrix algebra
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].0, vec![1]);
        assert_eq!(p[0].1.len(), 16);
    }
}
