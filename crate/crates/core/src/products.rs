//! Subgroups of products of `GL₂`'s: recognising twisted graphs
//! `{(b, χ(b)·σ(f b f⁻¹))}` inside `GL₂(F_q) × GL₂(F_q)`, pairwise
//! surjectivity onto `∏ SL₂(F_{qᵢ})`, and the groups `H_ℓ` of tuples with a
//! common determinant in `F_ℓ^×`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dickson::{contains_full_sl2, matrix_order, sl2_order, DicksonError};
use crate::field::{FieldError, FqElem, FqField};
use crate::matrix::{nullspace, Mat2};
use crate::planted::sl2;
use crate::symplectic::{closure, MatrixGroup};
use crate::{rng_from_seed, uniform};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProductError {
    #[error("projection {0} does not contain SL2(F_q)")]
    ProjectionTooSmall(usize),
    #[error("characteristic {0} is below 5")]
    SmallCharacteristic(u64),
    #[error("field of order {0} exceeds the supported size")]
    FieldTooLarge(u64),
    #[error("factor {0} is not over the expected field")]
    FieldMismatch(usize),
    #[error("a generator is singular")]
    Singular,
    #[error("empty generator list")]
    NoGenerators,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Dickson(#[from] DicksonError),
}

/// A subgroup of `∏ GL₂(F_{qᵢ})` given by generator tuples.
#[derive(Debug, Clone)]
pub struct ProductGroup {
    pub fields: Vec<FqField>,
    pub generators: Vec<Vec<Mat2>>,
}

impl ProductGroup {
    pub fn new(fields: Vec<FqField>, generators: Vec<Vec<Mat2>>) -> Result<Self, ProductError> {
        for g in &generators {
            if g.len() != fields.len() {
                return Err(ProductError::FieldMismatch(g.len()));
            }
            if g.iter().zip(&fields).any(|(m, f)| m.det(f).is_zero()) {
                return Err(ProductError::Singular);
            }
        }
        Ok(Self { fields, generators })
    }

    pub fn factors(&self) -> usize {
        self.fields.len()
    }

    pub fn projection(&self, i: usize) -> MatrixGroup<2> {
        MatrixGroup {
            field: self.fields[i].clone(),
            generators: self.generators.iter().map(|g| g[i]).collect(),
            form: None,
        }
    }

    /// Image in the factors `idx` (in that order).
    pub fn restrict(&self, idx: &[usize]) -> ProductGroup {
        ProductGroup {
            fields: idx.iter().map(|&i| self.fields[i].clone()).collect(),
            generators: self.generators.iter().map(|g| idx.iter().map(|&i| g[i]).collect()).collect(),
        }
    }

    pub fn mul(&self, a: &[Mat2], b: &[Mat2]) -> Vec<Mat2> {
        a.iter().zip(b).zip(&self.fields).map(|((x, y), f)| x.mul(f, y)).collect()
    }

    pub fn identity(&self) -> Vec<Mat2> {
        vec![Mat2::identity(); self.factors()]
    }

    pub fn random_word(&self, len: usize, rng: &mut impl rand_core::RngCore) -> Vec<Mat2> {
        let mut acc = self.identity();
        for _ in 0..len {
            let g = &self.generators[uniform(rng, self.generators.len() as u64) as usize];
            acc = self.mul(&acc, g);
        }
        acc
    }

    fn inverse(&self, a: &[Mat2]) -> Vec<Mat2> {
        a.iter().zip(&self.fields).map(|(x, f)| x.inverse(f).unwrap()).collect()
    }

    fn key(&self, a: &[Mat2]) -> u128 {
        let mut k = 0u128;
        for (m, f) in a.iter().zip(&self.fields) {
            let q = f.order() as u128;
            k = k * q * q * q * q + m.key(f);
        }
        k
    }

    /// Group order by breadth-first search, `None` beyond `cap`.
    pub fn bfs_order(&self, cap: u64) -> Option<u64> {
        let keys_fit =
            self.fields.iter().try_fold(1u128, |acc, f| acc.checked_mul((f.order() as u128).pow(4))).is_some();
        assert!(keys_fit, "product too large for packed keys");
        closure(self.identity(), &self.generators, |a, b| self.mul(a, b), |a| self.key(a), cap, false).map(|(n, _)| n)
    }
}

/// `b' = χ·σ(f b f⁻¹)` for every generator pair; `σ` is `x ↦ x^{p^frobenius}`
/// and `chi[i]` is the scalar for generator `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedGraph {
    pub f: Mat2,
    pub frobenius: usize,
    pub chi: Vec<FqElem>,
}

impl TwistedGraph {
    /// Re-checks the relation on every generator.
    pub fn verify(&self, field: &FqField, gens: &[(Mat2, Mat2)]) -> bool {
        let sigma = |m: &Mat2| m.map(|x| field.frobenius_pow(x, self.frobenius));
        let Some(fi) = self.f.inverse(field) else { return false };
        gens.len() == self.chi.len()
            && gens
                .iter()
                .zip(&self.chi)
                .all(|((b, b2), &c)| *b2 == sigma(&self.f.mul(field, b).mul(field, &fi)).scale(field, c))
    }
}

/// An element `(x, y)` of the commutator subgroup with `x^m = 1` and `y^m ∉ {±1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatingElement {
    pub x: Mat2,
    pub y: Mat2,
    pub m: u64,
    pub samples: u32,
}

impl SeparatingElement {
    pub fn verify(&self, field: &FqField) -> bool {
        let xm = self.x.pow(field, self.m);
        let ym = self.y.pow(field, self.m);
        xm.is_identity() && !ym.is_scalar() && self.x.det(field) == FqElem::ONE && self.y.det(field) == FqElem::ONE
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairVerdict {
    ContainsSL2xSL2(SeparatingElement),
    TwistedGraph(TwistedGraph),
    Other(String),
}

#[derive(Debug, Clone, Copy)]
pub struct PairOptions {
    pub cap: u64,
    pub samples: u32,
    pub seed: u64,
}

impl Default for PairOptions {
    fn default() -> Self {
        Self { cap: crate::dickson::DEFAULT_CAP, samples: 256, seed: crate::DEFAULT_SEED }
    }
}

/// Largest field handled by [`pair_product_test`].
pub const MAX_PAIR_FIELD: u64 = 121;

/// Decides whether `H ⊂ GL₂(F_q)²` contains `SL₂(F_q)²` or is a twisted
/// graph. Both projections must contain `SL₂(F_q)`.
pub fn pair_product_test(
    field: &FqField,
    gens: &[(Mat2, Mat2)],
    opts: &PairOptions,
) -> Result<PairVerdict, ProductError> {
    let p = field.characteristic();
    if p < 5 {
        return Err(ProductError::SmallCharacteristic(p));
    }
    if field.order() > MAX_PAIR_FIELD {
        return Err(ProductError::FieldTooLarge(field.order()));
    }
    if gens.is_empty() {
        return Err(ProductError::NoGenerators);
    }
    let g = ProductGroup::new(vec![field.clone(), field.clone()], gens.iter().map(|(a, b)| vec![*a, *b]).collect())?;
    for i in 0..2 {
        if !contains_full_sl2(&g.projection(i), opts.cap)? {
            return Err(ProductError::ProjectionTooSmall(i + 1));
        }
    }
    if let Some(t) = find_twisted_graph(field, gens) {
        return Ok(PairVerdict::TwistedGraph(t));
    }
    match separating_element(&g, opts) {
        Some(s) => Ok(PairVerdict::ContainsSL2xSL2(s)),
        None => Ok(PairVerdict::Other(format!(
            "no twisted graph, and no separating element in {} commutator samples",
            opts.samples
        ))),
    }
}

/// Candidate scalars `χ` with `b' ~ χ·σ(b)`: fixed by the traces when they
/// are nonzero, otherwise the square roots of the determinant ratio.
fn chi_candidates(field: &FqField, b: &Mat2, b2: &Mat2) -> Vec<FqElem> {
    let t = b.trace(field);
    if !t.is_zero() {
        return field.div(b2.trace(field), t).into_iter().filter(|c| !c.is_zero()).collect();
    }
    if !b2.trace(field).is_zero() {
        return Vec::new();
    }
    let r = field.div(b2.det(field), b.det(field)).unwrap();
    match field.sqrt(r) {
        Some(s) if s.is_zero() => Vec::new(),
        Some(s) if s == field.neg(s) => vec![s],
        Some(s) => vec![s, field.neg(s)],
        None => Vec::new(),
    }
}

/// Solves `b'ᵢ F = χᵢ F σ(bᵢ)` for `F` (linear once `χ` is fixed), then
/// `f = σ⁻¹(F)`.
fn find_twisted_graph(field: &FqField, gens: &[(Mat2, Mat2)]) -> Option<TwistedGraph> {
    let beta = field.degree();
    for k in 0..beta {
        let sigma = |m: &Mat2| m.map(|x| field.frobenius_pow(x, k));
        let sb: Vec<Mat2> = gens.iter().map(|(b, _)| sigma(b)).collect();
        let cands: Vec<Vec<FqElem>> = gens.iter().zip(&sb).map(|((_, b2), s)| chi_candidates(field, s, b2)).collect();
        if cands.iter().any(|c| c.is_empty()) {
            continue;
        }
        let total: u64 = cands.iter().map(|c| c.len() as u64).product();
        if total > 1 << 16 {
            continue;
        }
        for code in 0..total {
            let mut c = code;
            let chi: Vec<FqElem> = cands
                .iter()
                .map(|cs| {
                    let v = cs[(c % cs.len() as u64) as usize];
                    c /= cs.len() as u64;
                    v
                })
                .collect();
            let mut rows = Vec::new();
            for (((_, b2), s), &x) in gens.iter().zip(&sb).zip(&chi) {
                // (b2 F − x F s)_{rc} as a linear form in the entries F_{ij}
                for r in 0..2 {
                    for col in 0..2 {
                        let mut row = vec![FqElem::ZERO; 4];
                        for j in 0..2 {
                            row[2 * j + col] = field.add(row[2 * j + col], b2.0[r][j]);
                            let t = field.mul(x, s.0[j][col]);
                            row[2 * r + j] = field.sub(row[2 * r + j], t);
                        }
                        rows.push(row);
                    }
                }
            }
            for v in nullspace(field, &rows, 4) {
                let big_f = Mat2::from_rows(&[v[0..2].to_vec(), v[2..4].to_vec()]).unwrap();
                if big_f.det(field).is_zero() {
                    continue;
                }
                let back = (beta - k) % beta;
                let f = big_f.map(|x| field.frobenius_pow(x, back)).projective_normal(field);
                let t = TwistedGraph { f, frobenius: k, chi: chi.clone() };
                debug_assert!(t.verify(field, gens));
                return Some(t);
            }
        }
    }
    None
}

fn separating_element(g: &ProductGroup, opts: &PairOptions) -> Option<SeparatingElement> {
    let field = &g.fields[0];
    let mut rng = rng_from_seed(opts.seed);
    let sl2_ord = sl2_order(field.order());
    for n in 1..=opts.samples {
        let mut h = g.identity();
        for _ in 0..2 {
            let a = g.random_word(12, &mut rng);
            let b = g.random_word(12, &mut rng);
            let c = g.mul(&g.mul(&a, &b), &g.mul(&g.inverse(&a), &g.inverse(&b)));
            h = g.mul(&h, &c);
        }
        let m = matrix_order(field, &h[0], sl2_ord);
        let s = SeparatingElement { x: h[0], y: h[1], m, samples: n };
        if s.verify(field) {
            return Some(s);
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairStatus {
    /// The two factors are over different fields, so their projective
    /// quotients differ and Goursat forces surjectivity.
    DistinctFields,
    Surjective(SeparatingElement),
    Graph(TwistedGraph),
    Undetermined(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProductVerdict {
    FullProduct,
    /// First pair (1-based) that is a twisted graph.
    Proper {
        pair: (usize, usize),
        graph: TwistedGraph,
    },
    Inconclusive {
        pair: (usize, usize),
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductReport {
    pub verdict: ProductVerdict,
    pub pairs: Vec<((usize, usize), PairStatus)>,
}

/// Checks every pair of factors of `S ⊂ ∏ SL₂(F_{qᵢ})`.
pub fn product_surjectivity(s: &ProductGroup, opts: &PairOptions) -> Result<ProductReport, ProductError> {
    let k = s.factors();
    for i in 0..k {
        if !contains_full_sl2(&s.projection(i), opts.cap)? {
            return Err(ProductError::ProjectionTooSmall(i + 1));
        }
    }
    let mut pairs = Vec::new();
    let mut verdict = ProductVerdict::FullProduct;
    for i in 0..k {
        for j in i + 1..k {
            let (fi, fj) = (&s.fields[i], &s.fields[j]);
            let status = if fi.order() != fj.order() {
                PairStatus::DistinctFields
            } else {
                let gens: Vec<(Mat2, Mat2)> = s.generators.iter().map(|g| (g[i], g[j])).collect();
                match pair_product_test(fi, &gens, opts)? {
                    PairVerdict::ContainsSL2xSL2(e) => PairStatus::Surjective(e),
                    PairVerdict::TwistedGraph(t) => PairStatus::Graph(t),
                    PairVerdict::Other(e) => PairStatus::Undetermined(e),
                }
            };
            if verdict == ProductVerdict::FullProduct {
                match &status {
                    PairStatus::Graph(t) => verdict = ProductVerdict::Proper { pair: (i + 1, j + 1), graph: t.clone() },
                    PairStatus::Undetermined(e) => {
                        verdict = ProductVerdict::Inconclusive { pair: (i + 1, j + 1), reason: e.clone() }
                    }
                    _ => {}
                }
            }
            pairs.push(((i + 1, j + 1), status));
        }
    }
    Ok(ProductReport { verdict, pairs })
}

/// Tuples in `∏ GL₂(F_{ℓ^{βᵢ}})` with a common determinant in `F_ℓ^×`.
#[derive(Debug, Clone)]
pub struct HEll {
    pub group: ProductGroup,
    pub order: u128,
}

/// Generators of `H_ℓ`: `SL₂` generators in each slot and one common
/// `diag(a, 1)`, `a` primitive mod `ℓ`.
pub fn build_h_ell(l: u64, residue_degrees: &[usize]) -> Result<HEll, ProductError> {
    if l < 5 {
        return Err(ProductError::SmallCharacteristic(l));
    }
    let fields: Vec<FqField> = residue_degrees.iter().map(|&b| FqField::new(l, b)).collect::<Result<_, _>>()?;
    let k = fields.len();
    let mut generators = Vec::new();
    for (i, f) in fields.iter().enumerate() {
        for s in sl2(f) {
            let mut t = vec![Mat2::identity(); k];
            t[i] = s;
            generators.push(t);
        }
    }
    let a = FqField::prime_field(l)?.primitive_element().0[0] as i64;
    generators.push(fields.iter().map(|f| Mat2::diag([f.from_int(a), FqElem::ONE])).collect());
    let order = fields.iter().map(|f| sl2_order(f.order()) as u128).product::<u128>() * (l as u128 - 1);
    Ok(HEll { group: ProductGroup::new(fields, generators)?, order })
}
