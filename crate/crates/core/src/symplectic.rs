//! Symplectic similitudes of `F_ℓ⁴`, the twisted-cubic embedding
//! `σ₄ : GL₂ → GSp₄`, group closure by breadth-first search, commutants and
//! invariant subspaces.
//!
//! Conventions. The standard form is `J = antidiag(1, 1, −1, −1)`, i.e.
//! `⟨x, y⟩ = x₀y₃ + x₁y₂ − x₂y₁ − x₃y₀`, pairing coordinates `0 ↔ 3` and
//! `1 ↔ 2`. The twisted cubic uses the divided-power basis
//! `(x³, 3x²y, 3xy², y³)` of binary cubics: row `j` of `σ₄(γ)` holds the
//! monomial coefficients of `(ax + by)^{3−j}(cx + dy)^j` for
//! `γ = [[a, b], [c, d]]`. That matrix preserves `J₃ = antidiag(1, −3, 3, −1)`
//! with multiplier `det(γ)³`.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::field::{FqElem, FqField};
use crate::matrix::{in_span, nullspace, rref, Mat, Mat2, Mat4, Vect};
use crate::uniform;

/// Default ceiling on `ℓ` for the exhaustive subspace search.
pub const EXHAUSTIVE_CAP: u64 = 97;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymplecticError {
    #[error("characteristic {0} too small for this operation")]
    CharacteristicTooSmall(u64),
    #[error("symplectic operations need a prime field, got degree {0}")]
    NotPrimeField(usize),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not a similitude of the form")]
    NotSimilitude,
    #[error("form is degenerate or not alternating")]
    BadForm,
    #[error("l = {l} exceeds the exhaustive cap {cap}; use the probabilistic spin search instead")]
    ExceedsExhaustiveCap { l: u64, cap: u64 },
    #[error("subspace dimension must be 1, 2 or 3, got {0}")]
    BadDimension(usize),
}

/// A non-degenerate alternating form on `F_ℓ⁴`, by Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SympForm {
    pub gram: Mat4,
}

impl SympForm {
    pub fn new(f: &FqField, gram: Mat4) -> Result<Self, SymplecticError> {
        let neg_t = gram.transpose().scale(f, f.from_int(-1));
        if neg_t != gram || (0..4).any(|i| !gram.0[i][i].is_zero()) || gram.det(f).is_zero() {
            return Err(SymplecticError::BadForm);
        }
        Ok(Self { gram })
    }

    pub fn pairing(&self, f: &FqField, x: &Vect<4>, y: &Vect<4>) -> FqElem {
        crate::matrix::dot(f, x, &self.gram.mul_vec(f, y))
    }
}

fn require_prime_field(f: &FqField, min_p: u64) -> Result<(), SymplecticError> {
    if f.degree() != 1 {
        return Err(SymplecticError::NotPrimeField(f.degree()));
    }
    if f.characteristic() < min_p {
        return Err(SymplecticError::CharacteristicTooSmall(f.characteristic()));
    }
    Ok(())
}

/// `J = antidiag(1, 1, −1, −1)` over `F_ℓ`, `ℓ ≥ 3`.
pub fn standard_form(f: &FqField) -> Result<SympForm, SymplecticError> {
    require_prime_field(f, 3)?;
    Ok(SympForm { gram: Mat4::from_ints(f, [[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]]) })
}

/// `J₃ = antidiag(1, −3, 3, −1)`, the form preserved by [`twisted_cubic_embed`].
pub fn cubic_form(f: &FqField) -> Result<SympForm, SymplecticError> {
    require_prime_field(f, 5)?;
    Ok(SympForm { gram: Mat4::from_ints(f, [[0, 0, 0, 1], [0, 0, -3, 0], [0, 3, 0, 0], [-1, 0, 0, 0]]) })
}

/// The scalar `ν` with `MᵀJM = νJ`, or `None` if `M` is not a similitude.
pub fn multiplier(f: &FqField, m: &Mat4, form: &SympForm) -> Option<FqElem> {
    let lhs = m.transpose().mul(f, &form.gram).mul(f, m);
    let (i, j) = (0..16).map(|k| (k / 4, k % 4)).find(|&(i, j)| !form.gram.0[i][j].is_zero())?;
    let nu = f.div(lhs.0[i][j], form.gram.0[i][j])?;
    if nu.is_zero() || lhs != form.gram.scale(f, nu) {
        return None;
    }
    Some(nu)
}

/// A matrix together with its (verified) multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GSpElement {
    pub matrix: Mat4,
    pub multiplier: FqElem,
}

impl GSpElement {
    pub fn new(f: &FqField, m: Mat4, form: &SympForm) -> Result<Self, SymplecticError> {
        if m.det(f).is_zero() {
            return Err(SymplecticError::Singular);
        }
        let nu = multiplier(f, &m, form).ok_or(SymplecticError::NotSimilitude)?;
        Ok(Self { matrix: m, multiplier: nu })
    }
}

/// Binomial-expansion matrix of `γ` on binary cubics (see module docs).
pub fn twisted_cubic_embed(f: &FqField, g: &Mat2) -> Result<GSpElement, SymplecticError> {
    require_prime_field(f, 5)?;
    let det = g.det(f);
    if det.is_zero() {
        return Err(SymplecticError::Singular);
    }
    let [[a, b], [c, d]] = g.0;
    let mut m = Mat4::zero();
    for j in 0..4 {
        // (ax + by)^{3−j} (cx + dy)^j as coefficients of x³, x²y, xy², y³
        let mut poly = vec![FqElem::ONE];
        for k in 0..3 {
            let (u, v) = if k < 3 - j { (a, b) } else { (c, d) };
            let mut next = vec![FqElem::ZERO; poly.len() + 1];
            for (i, &p) in poly.iter().enumerate() {
                next[i] = f.add(next[i], f.mul(p, u));
                next[i + 1] = f.add(next[i + 1], f.mul(p, v));
            }
            poly = next;
        }
        m.0[j].copy_from_slice(&poly);
    }
    Ok(GSpElement { matrix: m, multiplier: f.pow(det, 3) })
}

/// Characteristic polynomial of `σ₄(γ)` for any `γ` with trace `t` and
/// determinant `n`, least degree first.
pub fn type4_charpoly(f: &FqField, t: FqElem, n: FqElem) -> [FqElem; 5] {
    let m = |a: FqElem, b: FqElem| f.mul(a, b);
    let t2 = m(t, t);
    let t3 = m(t2, t);
    let n2 = m(n, n);
    let n3 = m(n2, n);
    let c3 = f.sub(f.scale(2, m(n, t)), t3);
    let c2 = f.add(f.sub(m(n, m(t2, t2)), f.scale(3, m(n2, t2))), f.scale(2, n3));
    let c1 = f.sub(f.scale(2, m(m(n3, n), t)), m(n3, t3));
    let c0 = m(n3, n3);
    [c0, c1, c2, c3, FqElem::ONE]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Type4Test {
    /// The characteristic polynomial matches `σ₄` of some `γ` with these
    /// trace and determinant (the first match in scan order).
    Consistent {
        t: FqElem,
        n: FqElem,
    },
    Inconsistent,
}

/// Necessary condition for membership in a twisted-cubic subgroup: does the
/// characteristic polynomial have the shape `∏ (X − λ₁^{3−k}λ₂^k)` with
/// `λ₁, λ₂` the roots of some `X² − tX + n` over `F_ℓ`?
pub fn type4_membership_test(f: &FqField, m: &Mat4) -> Type4Test {
    let cp = m.charpoly(f);
    let p = f.characteristic() as i64;
    for t in 0..p {
        let t = f.from_int(t);
        for n in 1..p {
            let n = f.from_int(n);
            if type4_charpoly(f, t, n)[..] == cp[..] {
                return Type4Test::Consistent { t, n };
            }
        }
    }
    Type4Test::Inconsistent
}

/// Transvection `x ↦ x + ⟨v, x⟩ v` in the form's convention: `I + v (Jv)ᵀ`.
pub fn transvection(f: &FqField, form: &SympForm, v: &Vect<4>) -> Mat4 {
    let w = form.gram.mul_vec(f, v);
    let mut m = Mat4::identity();
    for i in 0..4 {
        for j in 0..4 {
            m.0[i][j] = f.add(m.0[i][j], f.mul(v[i], w[j]));
        }
    }
    m
}

/// Generators of `Sp₄(F_ℓ)` for the standard form: root elements for the
/// four long roots (transvections along the basis vectors) and for the two
/// short roots ±(ε₁ − ε₂).
pub fn sp4_generators(f: &FqField) -> Result<Vec<Mat4>, SymplecticError> {
    let form = standard_form(f)?;
    let mut gens = Vec::new();
    for i in 0..4 {
        let mut v = [FqElem::ZERO; 4];
        v[i] = FqElem::ONE;
        gens.push(transvection(f, &form, &v));
    }
    let short = Mat4::from_ints(f, [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, -1], [0, 0, 0, 1]]);
    gens.push(short);
    gens.push(short.transpose());
    Ok(gens)
}

/// `diag(1, 1, ν, ν)`, a similitude of multiplier `ν` for the standard form.
pub fn similitude_of_multiplier(nu: FqElem) -> Mat4 {
    Mat4::diag([FqElem::ONE, FqElem::ONE, nu, nu])
}

/// Generators of `GSp₄(F_ℓ)`: [`sp4_generators`] plus `diag(1, 1, ν, ν)` for
/// a primitive root `ν`.
pub fn gsp4_generators(f: &FqField) -> Result<Vec<Mat4>, SymplecticError> {
    let mut gens = sp4_generators(f)?;
    gens.push(similitude_of_multiplier(f.primitive_element()));
    Ok(gens)
}

/// `|Sp₄(F_q)| = q⁴(q² − 1)(q⁴ − 1)`.
pub fn sp4_order(q: u64) -> u128 {
    let q = q as u128;
    q.pow(4) * (q * q - 1) * (q.pow(4) - 1)
}

/// Change of basis `P` with `Pᵀ G P = J` for the standard `J`, so that
/// `M ↦ P⁻¹ M P` carries similitudes of `G` to similitudes of `J` with the
/// same multiplier.
pub fn symplectic_basis(f: &FqField, form: &SympForm) -> Result<Mat4, SymplecticError> {
    require_prime_field(f, 3)?;
    let pair = |x: &Vect<4>, y: &Vect<4>| form.pairing(f, x, y);
    let basis: Vec<Vect<4>> = (0..4)
        .map(|i| {
            let mut v = [FqElem::ZERO; 4];
            v[i] = FqElem::ONE;
            v
        })
        .collect();
    let axpy =
        |a: FqElem, x: &Vect<4>, y: &Vect<4>| -> Vect<4> { core::array::from_fn(|i| f.add(f.mul(a, x[i]), y[i])) };
    // pick a hyperbolic pair among the candidates
    let hyperbolic = |cands: &[Vect<4>]| -> Option<(Vect<4>, Vect<4>)> {
        for e in cands {
            if e.iter().all(|x| x.is_zero()) {
                continue;
            }
            for w in cands {
                let p = pair(e, w);
                if !p.is_zero() {
                    let s = f.inv(p).unwrap();
                    return Some((*e, core::array::from_fn(|i| f.mul(s, w[i]))));
                }
            }
        }
        None
    };
    let (e1, f1) = hyperbolic(&basis).ok_or(SymplecticError::BadForm)?;
    // project onto the orthogonal complement of span(e1, f1)
    let rest: Vec<Vect<4>> = basis
        .iter()
        .map(|v| {
            let a = f.neg(pair(v, &f1));
            let b = pair(v, &e1);
            axpy(b, &f1, &axpy(a, &e1, v))
        })
        .collect();
    let (e2, f2) = hyperbolic(&rest).ok_or(SymplecticError::BadForm)?;
    let p = Mat4::from_cols(&[e1, e2, f2, f1]);
    let check = p.transpose().mul(f, &form.gram).mul(f, &p);
    if check != standard_form(f)?.gram {
        return Err(SymplecticError::BadForm);
    }
    Ok(p)
}

/// `P⁻¹ M P`.
pub fn conjugate<const N: usize>(f: &FqField, m: &Mat<N>, p: &Mat<N>, p_inv: &Mat<N>) -> Mat<N> {
    p_inv.mul(f, m).mul(f, p)
}

/// A finitely generated matrix group. `form` is set for subgroups of
/// `GSp₄(F_ℓ)`; generators are then similitudes of it.
#[derive(Debug, Clone)]
pub struct MatrixGroup<const N: usize> {
    pub field: FqField,
    pub generators: Vec<Mat<N>>,
    pub form: Option<Mat<N>>,
}

impl<const N: usize> MatrixGroup<N> {
    pub fn new(field: FqField, generators: Vec<Mat<N>>) -> Result<Self, SymplecticError> {
        if generators.iter().any(|g| g.det(&field).is_zero()) {
            return Err(SymplecticError::Singular);
        }
        Ok(Self { field, generators, form: None })
    }

    /// A random word of the given length in the generators.
    pub fn random_word(&self, len: usize, rng: &mut impl rand_core::RngCore) -> Mat<N> {
        let f = &self.field;
        let mut acc = Mat::<N>::identity();
        if self.generators.is_empty() {
            return acc;
        }
        for _ in 0..len {
            let g = &self.generators[uniform(rng, self.generators.len() as u64) as usize];
            acc = acc.mul(f, g);
        }
        acc
    }
}

impl MatrixGroup<4> {
    /// A subgroup of `GSp₄(F_ℓ)`; every generator must be a similitude.
    pub fn with_form(field: FqField, generators: Vec<Mat4>, form: &SympForm) -> Result<Self, SymplecticError> {
        for g in &generators {
            GSpElement::new(&field, *g, form)?;
        }
        Ok(Self { field, generators, form: Some(form.gram) })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfsOrder {
    Exact(u64),
    ExceedsCap,
}

/// Breadth-first closure of `{1}` under right multiplication by `gens`,
/// keyed by `key`. Returns the elements (identity first) or `None` once
/// more than `cap` distinct keys have been seen.
pub fn closure<T: Clone>(
    identity: T,
    gens: &[T],
    mul: impl Fn(&T, &T) -> T,
    key: impl Fn(&T) -> u128,
    cap: u64,
    collect: bool,
) -> Option<(u64, Vec<T>)> {
    let mut seen: HashSet<u128> = HashSet::new();
    seen.insert(key(&identity));
    let mut elements = Vec::new();
    let mut frontier = vec![identity];
    if cap == 0 {
        return None;
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in gens {
                let y = mul(x, g);
                if seen.insert(key(&y)) {
                    if seen.len() as u64 > cap {
                        return None;
                    }
                    next.push(y);
                }
            }
        }
        if collect {
            elements.extend(frontier);
        }
        frontier = next;
    }
    Some((seen.len() as u64, elements))
}

/// Order of the group (or of its image in `PGL`) by breadth-first search.
pub fn group_bfs<const N: usize>(g: &MatrixGroup<N>, cap: u64, projective: bool) -> BfsOrder {
    match enumerate_inner(g, cap, projective, false) {
        Some((n, _)) => BfsOrder::Exact(n),
        None => BfsOrder::ExceedsCap,
    }
}

/// All elements (projective normal forms in projective mode), or `None`
/// beyond `cap`.
pub fn enumerate<const N: usize>(g: &MatrixGroup<N>, cap: u64, projective: bool) -> Option<Vec<Mat<N>>> {
    enumerate_inner(g, cap, projective, true).map(|(_, v)| v)
}

fn enumerate_inner<const N: usize>(
    g: &MatrixGroup<N>,
    cap: u64,
    projective: bool,
    collect: bool,
) -> Option<(u64, Vec<Mat<N>>)> {
    let f = &g.field;
    if projective {
        let gens: Vec<Mat<N>> = g.generators.iter().map(|m| m.projective_normal(f)).collect();
        closure(Mat::<N>::identity(), &gens, |a, b| a.mul(f, b).projective_normal(f), |m| m.key(f), cap, collect)
    } else {
        closure(Mat::<N>::identity(), &g.generators, |a, b| a.mul(f, b), |m| m.key(f), cap, collect)
    }
}

/// A linear subspace of `F_q^N`, stored as a reduced row-echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    pub basis: Vec<Vec<FqElem>>,
}

impl Subspace {
    pub fn from_vectors(f: &FqField, vectors: &[Vec<FqElem>]) -> Self {
        let mut b = vectors.to_vec();
        rref(f, &mut b);
        Self { basis: b }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, f: &FqField, v: &[FqElem]) -> bool {
        in_span(f, &self.basis, v)
    }

    pub fn is_invariant<const N: usize>(&self, f: &FqField, m: &Mat<N>) -> bool {
        self.basis.iter().all(|v| {
            let arr: Vect<N> = core::array::from_fn(|i| v[i]);
            self.contains(f, &m.mul_vec(f, &arr))
        })
    }

    /// Annihilator `{x : u·x = 0 for all u in self}`.
    pub fn annihilator(&self, f: &FqField, n: usize) -> Self {
        Self::from_vectors(f, &nullspace(f, &self.basis, n))
    }

    fn sort_key(&self, f: &FqField) -> Vec<u64> {
        self.basis.iter().flatten().map(|&x| f.index(x)).collect()
    }
}

/// Subspace spanned by the orbit of `vectors` under the generators.
pub fn spin<const N: usize>(f: &FqField, gens: &[Mat<N>], vectors: &[Vec<FqElem>]) -> Subspace {
    let mut basis: Vec<Vec<FqElem>> = Vec::new();
    let mut queue: Vec<Vec<FqElem>> = Vec::new();
    for v in vectors {
        if !in_span(f, &basis, v) {
            basis.push(v.clone());
            queue.push(v.clone());
        }
    }
    while let Some(v) = queue.pop() {
        let arr: Vect<N> = core::array::from_fn(|i| v[i]);
        for g in gens {
            let w = g.mul_vec(f, &arr).to_vec();
            if basis.len() < N && !in_span(f, &basis, &w) {
                basis.push(w.clone());
                queue.push(w);
            }
        }
    }
    Subspace::from_vectors(f, &basis)
}

fn roots<const N: usize>(f: &FqField, m: &Mat<N>) -> Vec<FqElem> {
    let cp = m.charpoly(f);
    f.elements().filter(|&x| crate::matrix::poly_eval(f, &cp, x).is_zero()).collect()
}

/// The nonzero common eigenspaces `E_χ = {v : gᵢ v = χᵢ v}` over all
/// eigenvalue tuples `χ`, each returned as a basis.
pub fn common_eigenspaces<const N: usize>(f: &FqField, gens: &[Mat<N>]) -> Vec<Subspace> {
    let full: Vec<Vec<FqElem>> = (0..N)
        .map(|i| {
            let mut v = vec![FqElem::ZERO; N];
            v[i] = FqElem::ONE;
            v
        })
        .collect();
    let mut spaces = vec![full];
    for g in gens {
        let mut next = Vec::new();
        let eig = roots(f, g);
        for s in &spaces {
            for &lambda in &eig {
                // solve (g − λ) Σ c_k s_k = 0 for c
                let shifted = g.sub(f, &Mat::<N>::scalar(lambda));
                let images: Vec<Vect<N>> =
                    s.iter().map(|v| shifted.mul_vec(f, &core::array::from_fn(|i| v[i]))).collect();
                let rows: Vec<Vec<FqElem>> = (0..N).map(|i| images.iter().map(|w| w[i]).collect()).collect();
                let ker = nullspace(f, &rows, s.len());
                if ker.is_empty() {
                    continue;
                }
                let vecs: Vec<Vec<FqElem>> = ker
                    .iter()
                    .map(|c| {
                        let mut v = vec![FqElem::ZERO; N];
                        for (ck, sk) in c.iter().zip(s) {
                            for i in 0..N {
                                v[i] = f.add(v[i], f.mul(*ck, sk[i]));
                            }
                        }
                        v
                    })
                    .collect();
                next.push(vecs);
            }
        }
        spaces = next;
    }
    spaces.iter().map(|s| Subspace::from_vectors(f, s)).collect()
}

/// All `d`-dimensional subspaces of `F_q^k`, as reduced row-echelon
/// `d × k` coefficient matrices.
pub fn subspaces_of_dim(f: &FqField, k: usize, d: usize) -> Vec<Vec<Vec<FqElem>>> {
    let q = f.order();
    let mut out = Vec::new();
    if d > k {
        return out;
    }
    let mut pivots: Vec<usize> = (0..d).collect();
    loop {
        // free slots: (row, col) with col > pivot[row], col not a pivot
        let free: Vec<(usize, usize)> =
            (0..d).flat_map(|r| (pivots[r] + 1..k).filter(|c| !pivots.contains(c)).map(move |c| (r, c))).collect();
        let total = q.pow(free.len() as u32);
        for code in 0..total {
            let mut rows = vec![vec![FqElem::ZERO; k]; d];
            for r in 0..d {
                rows[r][pivots[r]] = FqElem::ONE;
            }
            let mut c = code;
            for &(r, col) in &free {
                rows[r][col] = f.element(c % q);
                c /= q;
            }
            out.push(rows);
        }
        // next combination
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < k - d + i {
                pivots[i] += 1;
                for j in i + 1..d {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
        if d == 0 {
            return out;
        }
    }
}

fn combine(f: &FqField, coeffs: &[FqElem], basis: &[Vec<FqElem>], n: usize) -> Vec<FqElem> {
    let mut v = vec![FqElem::ZERO; n];
    for (c, b) in coeffs.iter().zip(basis) {
        for i in 0..n {
            v[i] = f.add(v[i], f.mul(*c, b[i]));
        }
    }
    v
}

/// All invariant lines, each as a one-vector [`Subspace`].
pub fn invariant_lines<const N: usize>(f: &FqField, gens: &[Mat<N>]) -> Vec<Subspace> {
    let mut out = BTreeSet::new();
    for e in common_eigenspaces(f, gens) {
        for c in subspaces_of_dim(f, e.dim(), 1) {
            let v = combine(f, &c[0], &e.basis, N);
            out.insert((0, Subspace::from_vectors(f, &[v])));
        }
    }
    let mut lines: Vec<(Vec<u64>, Subspace)> = out.into_iter().map(|(_, s)| (s.sort_key(f), s)).collect();
    lines.sort();
    lines.into_iter().map(|(_, s)| s).collect()
}

/// All invariant subspaces of dimension `dim ∈ {1, 2, 3}` of a subgroup of
/// `GL₄(F_ℓ)`. Exact: lines are the lines of the common eigenspaces; a
/// 2-space is either spanned by the orbit of any of its non-eigenvectors or
/// lies inside a common eigenspace; 3-spaces are annihilators of invariant
/// lines of the transposed group. Refuses `ℓ > exhaustive_cap`.
pub fn invariant_subspaces(
    g: &MatrixGroup<4>,
    dim: usize,
    exhaustive_cap: u64,
) -> Result<Vec<Subspace>, SymplecticError> {
    let f = &g.field;
    if f.characteristic() > exhaustive_cap {
        return Err(SymplecticError::ExceedsExhaustiveCap { l: f.characteristic(), cap: exhaustive_cap });
    }
    let gens = &g.generators;
    let mut found: BTreeSet<(Vec<u64>, Subspace)> = BTreeSet::new();
    match dim {
        1 => return Ok(invariant_lines(f, gens)),
        2 => {
            for e in common_eigenspaces(f, gens) {
                for c in subspaces_of_dim(f, e.dim(), 2) {
                    let vs: Vec<Vec<FqElem>> = c.iter().map(|r| combine(f, r, &e.basis, 4)).collect();
                    let s = Subspace::from_vectors(f, &vs);
                    found.insert((s.sort_key(f), s));
                }
            }
            for p in subspaces_of_dim(f, 4, 1) {
                let s = spin(f, gens, &p);
                if s.dim() == 2 {
                    found.insert((s.sort_key(f), s));
                }
            }
        }
        3 => {
            let transposed: Vec<Mat4> = gens.iter().map(|m| m.transpose()).collect();
            for line in invariant_lines(f, &transposed) {
                let s = line.annihilator(f, 4);
                found.insert((s.sort_key(f), s));
            }
        }
        d => return Err(SymplecticError::BadDimension(d)),
    }
    Ok(found.into_iter().map(|(_, s)| s).collect())
}

/// Outcome of the randomized spin search used above the exhaustive cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinSearch {
    pub found: Option<Subspace>,
    pub trials: u64,
    /// Always false: absence of a hit proves nothing.
    pub exhaustive: bool,
}

/// Spins random vectors (under the group and its transpose) looking for a
/// proper invariant subspace.
pub fn probabilistic_invariant_subspace(
    g: &MatrixGroup<4>,
    trials: u64,
    rng: &mut impl rand_core::RngCore,
) -> SpinSearch {
    let f = &g.field;
    let q = f.order();
    let transposed: Vec<Mat4> = g.generators.iter().map(|m| m.transpose()).collect();
    for t in 0..trials {
        let v: Vec<FqElem> = (0..4).map(|_| f.element(uniform(rng, q))).collect();
        if v.iter().all(|x| x.is_zero()) {
            continue;
        }
        let s = spin(f, &g.generators, core::slice::from_ref(&v));
        if s.dim() < 4 {
            return SpinSearch { found: Some(s), trials: t + 1, exhaustive: false };
        }
        let s = spin(f, &transposed, &[v]);
        if s.dim() < 4 {
            return SpinSearch { found: Some(s.annihilator(f, 4)), trials: t + 1, exhaustive: false };
        }
    }
    SpinSearch { found: None, trials, exhaustive: false }
}

/// Basis of the commutant `{X : X Mᵢ = Mᵢ X}`.
pub fn centralizer_algebra<const N: usize>(f: &FqField, gens: &[Mat<N>]) -> Vec<Mat<N>> {
    twisted_commutant(f, gens, &vec![FqElem::ONE; gens.len()])
}

/// Basis of `{X : Mᵢ X = εᵢ X Mᵢ}` for scalars `εᵢ`.
pub fn twisted_commutant<const N: usize>(f: &FqField, gens: &[Mat<N>], eps: &[FqElem]) -> Vec<Mat<N>> {
    let nn = N * N;
    let mut rows = Vec::new();
    for (m, &e) in gens.iter().zip(eps) {
        for i in 0..N {
            for j in 0..N {
                // (M X)_{ij} − ε (X M)_{ij}
                let mut row = vec![FqElem::ZERO; nn];
                for k in 0..N {
                    row[k * N + j] = f.add(row[k * N + j], m.0[i][k]);
                    row[i * N + k] = f.sub(row[i * N + k], f.mul(e, m.0[k][j]));
                }
                rows.push(row);
            }
        }
    }
    nullspace(f, &rows, nn)
        .into_iter()
        .map(|v| {
            let mut x = Mat::<N>::zero();
            for i in 0..N {
                for j in 0..N {
                    x.0[i][j] = v[i * N + j];
                }
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng_from_seed;

    fn f(p: u64) -> FqField {
        FqField::new(p, 1).unwrap()
    }

    #[test]
    fn standard_form_basics() {
        let f11 = f(11);
        let j = standard_form(&f11).unwrap();
        assert_eq!(j.gram.0[0][3], f11.one());
        assert_eq!(j.gram.0[1][2], f11.one());
        assert_eq!(j.gram.0[2][1], f11.from_int(-1));
        assert_eq!(j.gram.0[3][0], f11.from_int(-1));
        assert_eq!(j.gram.mul(&f11, &j.gram), Mat4::scalar(f11.from_int(-1)));
        assert_eq!(multiplier(&f11, &Mat4::identity(), &j), Some(f11.one()));
        assert_eq!(standard_form(&f(2)), Err(SymplecticError::CharacteristicTooSmall(2)));
    }

    #[test]
    fn multiplier_examples() {
        let f11 = f(11);
        let j = standard_form(&f11).unwrap();
        let c = f11.from_int(3);
        assert_eq!(multiplier(&f11, &Mat4::scalar(c), &j), Some(f11.from_int(9)));
        let d = Mat4::diag([f11.one(), f11.one(), f11.one(), f11.from_int(2)]);
        assert_eq!(multiplier(&f11, &d, &j), None);
        for g in gsp4_generators(&f11).unwrap() {
            assert!(multiplier(&f11, &g, &j).is_some());
        }
        for g in sp4_generators(&f11).unwrap() {
            assert_eq!(multiplier(&f11, &g, &j), Some(f11.one()));
        }
    }

    #[test]
    fn sp4_f3_order_by_bfs() {
        let f3 = f(3);
        let g = MatrixGroup::new(f3.clone(), sp4_generators(&f3).unwrap()).unwrap();
        assert_eq!(group_bfs(&g, 100_000, false), BfsOrder::Exact(51840));
        assert_eq!(sp4_order(3), 51840);
        assert_eq!(group_bfs(&g, 1000, false), BfsOrder::ExceedsCap);
    }

    #[test]
    fn small_bfs_examples() {
        let f11 = f(11);
        let id = MatrixGroup::new(f11.clone(), vec![Mat4::identity()]).unwrap();
        assert_eq!(group_bfs(&id, 1, false), BfsOrder::Exact(1));
        let neg = MatrixGroup::new(f11.clone(), vec![Mat4::scalar(f11.from_int(-1))]).unwrap();
        assert_eq!(group_bfs(&neg, 10, true), BfsOrder::Exact(1));
        assert_eq!(group_bfs(&neg, 10, false), BfsOrder::Exact(2));
        let f7 = f(7);
        let sl2 = MatrixGroup::new(
            f7.clone(),
            vec![Mat2::from_ints(&f7, [[1, 1], [0, 1]]), Mat2::from_ints(&f7, [[0, -1], [1, 0]])],
        )
        .unwrap();
        assert_eq!(group_bfs(&sl2, 1000, false), BfsOrder::Exact(336));
        assert_eq!(group_bfs(&sl2, 1000, true), BfsOrder::Exact(168));
    }

    #[test]
    fn twisted_cubic_unipotent_and_diagonal() {
        let f11 = f(11);
        let u = twisted_cubic_embed(&f11, &Mat2::from_ints(&f11, [[1, 1], [0, 1]])).unwrap();
        let expect = Mat4::from_ints(&f11, [[1, 3, 3, 1], [0, 1, 2, 1], [0, 0, 1, 1], [0, 0, 0, 1]]);
        assert_eq!(u.matrix, expect);
        let j3 = cubic_form(&f11).unwrap();
        assert_eq!(multiplier(&f11, &u.matrix, &j3), Some(f11.one()));
        let (a, d) = (f11.from_int(2), f11.from_int(5));
        let s = twisted_cubic_embed(&f11, &Mat2::diag([a, d])).unwrap();
        let m = |x, y| f11.mul(x, y);
        assert_eq!(s.matrix, Mat4::diag([m(m(a, a), a), m(m(a, a), d), m(m(a, d), d), m(m(d, d), d)]));
        assert_eq!(twisted_cubic_embed(&f11, &Mat2::identity()).unwrap().matrix, Mat4::identity());
        assert!(twisted_cubic_embed(&f(3), &Mat2::identity()).is_err());
    }

    #[test]
    fn twisted_cubic_is_a_homomorphism_into_similitudes() {
        let f13 = f(13);
        let j3 = cubic_form(&f13).unwrap();
        let mut rng = rng_from_seed(7);
        for _ in 0..300 {
            let a = Mat2::random_invertible(&f13, &mut rng);
            let b = Mat2::random_invertible(&f13, &mut rng);
            let sa = twisted_cubic_embed(&f13, &a).unwrap();
            let sb = twisted_cubic_embed(&f13, &b).unwrap();
            let sab = twisted_cubic_embed(&f13, &a.mul(&f13, &b)).unwrap();
            assert_eq!(sab.matrix, sa.matrix.mul(&f13, &sb.matrix));
            assert_eq!(multiplier(&f13, &sa.matrix, &j3), Some(sa.multiplier));
            assert_eq!(sa.multiplier, f13.pow(a.det(&f13), 3));
        }
    }

    #[test]
    fn type4_charpoly_matches_companion_embedding() {
        let f11 = f(11);
        for t in 0..11 {
            for n in 1..11 {
                let c = Mat2::from_ints(&f11, [[0, -n], [1, t]]);
                let s = twisted_cubic_embed(&f11, &c).unwrap();
                let expect = type4_charpoly(&f11, f11.from_int(t), f11.from_int(n));
                assert_eq!(s.matrix.charpoly(&f11), expect.to_vec());
            }
        }
    }

    #[test]
    fn type4_test_examples() {
        let f11 = f(11);
        let mut rng = rng_from_seed(8);
        for _ in 0..50 {
            let g = Mat2::random_invertible(&f11, &mut rng);
            let s = twisted_cubic_embed(&f11, &g).unwrap();
            // the first hit need not be (tr γ, det γ) itself, but must share the
            // charpoly; (tr γ, det γ) must also be consistent
            let hit = type4_membership_test(&f11, &s.matrix);
            assert!(matches!(hit, Type4Test::Consistent { .. }));
            let direct = type4_charpoly(&f11, g.trace(&f11), g.det(&f11));
            assert_eq!(s.matrix.charpoly(&f11), direct.to_vec());
        }
        match type4_membership_test(&f11, &Mat4::identity()) {
            Type4Test::Consistent { t, n } => {
                assert_eq!(type4_charpoly(&f11, t, n).to_vec(), Mat4::identity().charpoly(&f11));
            }
            Type4Test::Inconsistent => panic!("identity is consistent"),
        }
        assert_eq!(type4_charpoly(&f11, f11.from_int(2), f11.one()).to_vec(), Mat4::identity().charpoly(&f11));
        let f13 = f(13);
        let m = Mat4::diag([f13.from_int(1), f13.from_int(2), f13.from_int(3), f13.from_int(6)]);
        assert_eq!(type4_membership_test(&f13, &m), Type4Test::Inconsistent);
    }

    #[test]
    fn symplectic_basis_for_cubic_form() {
        let f11 = f(11);
        let j3 = cubic_form(&f11).unwrap();
        let j = standard_form(&f11).unwrap();
        let p = symplectic_basis(&f11, &j3).unwrap();
        let p_inv = p.inverse(&f11).unwrap();
        let g = Mat2::from_ints(&f11, [[2, 1], [1, 1]]);
        let s = twisted_cubic_embed(&f11, &g).unwrap();
        let c = conjugate(&f11, &s.matrix, &p, &p_inv);
        assert_eq!(multiplier(&f11, &c, &j), Some(s.multiplier));
    }

    #[test]
    fn invariant_subspace_counts_for_trivial_group() {
        let f3 = f(3);
        let g = MatrixGroup::new(f3.clone(), vec![Mat4::identity()]).unwrap();
        let q = 3u64;
        assert_eq!(invariant_subspaces(&g, 1, 97).unwrap().len() as u64, (q.pow(4) - 1) / (q - 1));
        assert_eq!(invariant_subspaces(&g, 2, 97).unwrap().len() as u64, (q * q + 1) * (q * q + q + 1));
        assert_eq!(invariant_subspaces(&g, 3, 97).unwrap().len() as u64, (q.pow(4) - 1) / (q - 1));
        assert!(matches!(
            invariant_subspaces(&MatrixGroup::new(f(101), vec![Mat4::identity()]).unwrap(), 1, 97),
            Err(SymplecticError::ExceedsExhaustiveCap { .. })
        ));
    }

    #[test]
    fn commutant_dimensions() {
        let f7 = f(7);
        assert_eq!(centralizer_algebra(&f7, &[Mat4::identity()]).len(), 16);
        assert_eq!(centralizer_algebra(&f7, &sp4_generators(&f7).unwrap()).len(), 1);
    }
}
