//! Explicit generator sets with known structure, used as fixtures for the
//! recognition code: one family per maximal-subgroup class of `GSp₄(F_ℓ)`
//! (all for the standard form), plus `GL₂` families for the Dickson
//! classifier.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::{FqElem, FqField};
use crate::matrix::{nullspace, Mat2, Mat4};
use crate::symplectic::{
    conjugate, cubic_form, enumerate, group_bfs, gsp4_generators, similitude_of_multiplier, standard_form,
    symplectic_basis, twisted_cubic_embed, BfsOrder, MatrixGroup, SympForm, SymplecticError,
};

/// The six `GSp₄` fixture families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gsp4Family {
    Full,
    Reducible,
    Imprimitive,
    FieldExtension,
    TwistedCubic,
    SmallProjective,
}

impl Gsp4Family {
    pub const ALL: [Gsp4Family; 6] = [
        Gsp4Family::Reducible,
        Gsp4Family::Imprimitive,
        Gsp4Family::FieldExtension,
        Gsp4Family::TwistedCubic,
        Gsp4Family::SmallProjective,
        Gsp4Family::Full,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Gsp4Family::Full => "full",
            Gsp4Family::Reducible => "c1",
            Gsp4Family::Imprimitive => "c2",
            Gsp4Family::FieldExtension => "c3",
            Gsp4Family::TwistedCubic => "type4",
            Gsp4Family::SmallProjective => "small-projective",
        }
    }

    pub fn generators(&self, f: &FqField) -> Result<Vec<Mat4>, SymplecticError> {
        match self {
            Gsp4Family::Full => gsp4_generators(f),
            Gsp4Family::Reducible => siegel_parabolic(f),
            Gsp4Family::Imprimitive => imprimitive_pair(f),
            Gsp4Family::FieldExtension => field_extension(f),
            Gsp4Family::TwistedCubic => twisted_cubic_family(f),
            Gsp4Family::SmallProjective => extraspecial_normalizer(f),
        }
    }

    pub fn group(&self, f: &FqField) -> Result<MatrixGroup<4>, SymplecticError> {
        let j = standard_form(f)?;
        MatrixGroup::with_form(f.clone(), self.generators(f)?, &j)
    }
}

fn sl2_generators(f: &FqField) -> Vec<Mat2> {
    let mut gens = vec![Mat2::from_ints(f, [[1, 1], [0, 1]]), Mat2::from_ints(f, [[0, -1], [1, 0]])];
    if f.degree() > 1 {
        let g = f.primitive_element();
        gens.push(Mat2::diag([g, f.inv(g).unwrap()]));
    }
    gens
}

/// Generators of `SL₂(F_q)`: the elementary unipotent, the Weyl element and,
/// for non-prime `q`, a diagonal `diag(g, g⁻¹)` with `g` primitive.
pub fn sl2(f: &FqField) -> Vec<Mat2> {
    sl2_generators(f)
}

/// Generators of `GL₂(F_q)`: [`sl2`] plus `diag(g, 1)`.
pub fn gl2(f: &FqField) -> Vec<Mat2> {
    let mut gens = sl2_generators(f);
    gens.push(Mat2::diag([f.primitive_element(), FqElem::ONE]));
    gens
}

/// Fixture subgroups of `GL₂(F_q)`, one per Dickson class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gl2Family {
    /// A generator of a nonsplit torus.
    Cyclic,
    /// Upper triangular matrices.
    Borel,
    /// A nonsplit torus and `diag(1, −1)`.
    NonsplitCartanNormalizer,
    /// `⟨diag(g, g⁻¹), [[0, 1], [−1, 0]]⟩`; the diagonal part is cyclic.
    SplitCartanCyclic,
    /// The full normalizer of the diagonal torus.
    DiagonalIndex2,
    Sl2,
    Gl2,
    /// `SL₂(F_p)` inside `GL₂(F_q)`.
    Sl2PrimeSubfield,
    /// `SL₂(F₃)` as the binary tetrahedral group.
    BinaryTetrahedral,
}

impl Gl2Family {
    pub const ALL: [Gl2Family; 9] = [
        Gl2Family::Cyclic,
        Gl2Family::Borel,
        Gl2Family::NonsplitCartanNormalizer,
        Gl2Family::SplitCartanCyclic,
        Gl2Family::DiagonalIndex2,
        Gl2Family::Sl2,
        Gl2Family::Gl2,
        Gl2Family::Sl2PrimeSubfield,
        Gl2Family::BinaryTetrahedral,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Gl2Family::Cyclic => "cyclic",
            Gl2Family::Borel => "borel",
            Gl2Family::NonsplitCartanNormalizer => "nonsplit-cartan-normalizer",
            Gl2Family::SplitCartanCyclic => "split-cartan-cyclic",
            Gl2Family::DiagonalIndex2 => "diagonal-index2",
            Gl2Family::Sl2 => "sl2",
            Gl2Family::Gl2 => "gl2",
            Gl2Family::Sl2PrimeSubfield => "sl2-prime-subfield",
            Gl2Family::BinaryTetrahedral => "binary-tetrahedral",
        }
    }

    pub fn generators(&self, f: &FqField) -> Vec<Mat2> {
        let g = f.primitive_element();
        let one = FqElem::ONE;
        match self {
            Gl2Family::Cyclic => vec![nonsplit_torus_generator(f)],
            Gl2Family::Borel => {
                vec![Mat2::from_ints(f, [[1, 1], [0, 1]]), Mat2::diag([g, one]), Mat2::diag([one, g])]
            }
            Gl2Family::NonsplitCartanNormalizer => {
                vec![nonsplit_torus_generator(f), Mat2::from_ints(f, [[1, 0], [0, -1]])]
            }
            Gl2Family::SplitCartanCyclic => {
                vec![Mat2::diag([g, f.inv(g).unwrap()]), Mat2::from_ints(f, [[0, 1], [-1, 0]])]
            }
            Gl2Family::DiagonalIndex2 => {
                vec![Mat2::diag([g, one]), Mat2::diag([one, g]), Mat2::from_ints(f, [[0, 1], [1, 0]])]
            }
            Gl2Family::Sl2 => sl2(f),
            Gl2Family::Gl2 => gl2(f),
            Gl2Family::Sl2PrimeSubfield => {
                vec![Mat2::from_ints(f, [[1, 1], [0, 1]]), Mat2::from_ints(f, [[0, -1], [1, 0]])]
            }
            Gl2Family::BinaryTetrahedral => binary_tetrahedral(f),
        }
    }
}

/// `u + vX` with `X = [[0, a], [1, 0]]`, `a` a non-square, of order `q² − 1`.
pub fn nonsplit_torus_generator(f: &FqField) -> Mat2 {
    let a = f.elements().find(|&x| !x.is_zero() && !f.is_square(x)).expect("odd characteristic");
    let q = f.order();
    let n = q * q - 1;
    for u in f.elements() {
        for v in f.elements().skip(1) {
            let m = crate::matrix::Mat([[u, f.mul(v, a)], [v, u]]);
            if crate::dickson::matrix_order(f, &m, n) == n {
                return m;
            }
        }
    }
    unreachable!("F_q[X] is a field, so its unit group is cyclic")
}

/// Quaternion units `i, j` with `i² = j² = −1`, `ij = −ji`, and
/// `ω = −(1 + i + j + ij)/2` of order 3; together they generate `SL₂(F₃)`.
pub fn binary_tetrahedral(f: &FqField) -> Vec<Mat2> {
    let minus_one = f.neg(FqElem::ONE);
    let (a, b) = f
        .elements()
        .flat_map(|a| f.elements().map(move |b| (a, b)))
        .find(|&(a, b)| f.add(f.mul(a, a), f.mul(b, b)) == minus_one)
        .expect("−1 is a sum of two squares in F_q");
    let i = Mat2::from_ints(f, [[0, -1], [1, 0]]);
    let j = crate::matrix::Mat([[a, b], [b, f.neg(a)]]);
    let k = i.mul(f, &j);
    let half = f.inv(f.from_int(-2)).unwrap();
    let omega = Mat2::identity().add(f, &i).add(f, &j).add(f, &k).scale(f, half);
    vec![i, omega]
}

fn block(a: &Mat2, b: &Mat2, c: &Mat2, d: &Mat2) -> Mat4 {
    let mut m = Mat4::zero();
    for i in 0..2 {
        for j in 0..2 {
            m.0[i][j] = a.0[i][j];
            m.0[i][j + 2] = b.0[i][j];
            m.0[i + 2][j] = c.0[i][j];
            m.0[i + 2][j + 2] = d.0[i][j];
        }
    }
    m
}

/// Stabilizer of the Lagrangian plane `⟨e₁, e₂⟩`: Levi part `A ↦
/// [[A, 0], [0, K A^{−T} K]]`, unipotent radical `[[I, K S], [0, I]]` with
/// `S` symmetric, and the similitude `diag(1, 1, ν, ν)`.
pub fn siegel_parabolic(f: &FqField) -> Result<Vec<Mat4>, SymplecticError> {
    standard_form(f)?;
    let k = Mat2::from_ints(f, [[0, 1], [1, 0]]);
    let z = Mat2::zero();
    let i2 = Mat2::identity();
    let mut gens = Vec::new();
    for a in gl2(f) {
        let d = k.mul(f, &a.inverse(f).unwrap().transpose()).mul(f, &k);
        gens.push(block(&a, &z, &z, &d));
    }
    for s in [[[1, 0], [0, 0]], [[0, 1], [1, 0]]] {
        let s = Mat2::from_ints(f, s);
        gens.push(block(&i2, &k.mul(f, &s), &z, &i2));
    }
    gens.push(similitude_of_multiplier(f.primitive_element()));
    Ok(gens)
}

/// Embeds `(A, B)` acting on `⟨e₁, e₄⟩ ⊥ ⟨e₂, e₃⟩`.
fn pair_embed(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut m = Mat4::zero();
    let v1 = [0usize, 3];
    let v2 = [1usize, 2];
    for i in 0..2 {
        for j in 0..2 {
            m.0[v1[i]][v1[j]] = a.0[i][j];
            m.0[v2[i]][v2[j]] = b.0[i][j];
        }
    }
    m
}

/// `(GL₂ × GL₂)^{det equal} ⋊ swap` on the orthogonal decomposition
/// `⟨e₁, e₄⟩ ⊥ ⟨e₂, e₃⟩`.
pub fn imprimitive_pair(f: &FqField) -> Result<Vec<Mat4>, SymplecticError> {
    standard_form(f)?;
    let i2 = Mat2::identity();
    let mut gens = Vec::new();
    for a in sl2(f) {
        gens.push(pair_embed(&a, &i2));
        gens.push(pair_embed(&i2, &a));
    }
    let d = Mat2::diag([f.primitive_element(), FqElem::ONE]);
    gens.push(pair_embed(&d, &d));
    // e₁ ↔ e₂, e₄ ↔ e₃
    gens.push(Mat4::from_ints(f, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]));
    Ok(gens)
}

/// `{g ∈ GL₂(F_{ℓ²}) : det g ∈ F_ℓ^×}` acting on `F_{ℓ²}² ≅ F_ℓ⁴`, with the
/// form `Tr(det[u v])`, moved to the standard form.
pub fn field_extension(f: &FqField) -> Result<Vec<Mat4>, SymplecticError> {
    standard_form(f)?;
    let l = f.characteristic();
    let f2 = FqField::new(l, 2).expect("prime field characteristic");
    // F_ℓ-basis of F_{ℓ²}²: (1,0), (x,0), (0,1), (0,x)
    let basis: Vec<[FqElem; 2]> = {
        let x = f2.from_coeffs(&[0, 1]).unwrap();
        vec![[FqElem::ONE, FqElem::ZERO], [x, FqElem::ZERO], [FqElem::ZERO, FqElem::ONE], [FqElem::ZERO, x]]
    };
    let coords = |v: [FqElem; 2]| -> [FqElem; 4] {
        [
            f.from_int(v[0].0[0] as i64),
            f.from_int(v[0].0[1] as i64),
            f.from_int(v[1].0[0] as i64),
            f.from_int(v[1].0[1] as i64),
        ]
    };
    let restrict = |g: &Mat2| -> Mat4 {
        let cols: [[FqElem; 4]; 4] = core::array::from_fn(|k| coords(g.mul_vec(&f2, &basis[k])));
        Mat4::from_cols(&cols)
    };
    let mut gram = Mat4::zero();
    for i in 0..4 {
        for j in 0..4 {
            let det = f2.sub(f2.mul(basis[i][0], basis[j][1]), f2.mul(basis[i][1], basis[j][0]));
            gram.0[i][j] = f.from_int(f2.trace(det).0[0] as i64);
        }
    }
    let form = SympForm::new(f, gram)?;
    let p = symplectic_basis(f, &form)?;
    let p_inv = p.inverse(f).unwrap();
    let mut big = sl2(&f2);
    let nu = f2.from_int(f.primitive_element().0[0] as i64);
    big.push(Mat2::diag([nu, FqElem::ONE]));
    Ok(big.iter().map(|g| conjugate(f, &restrict(g), &p, &p_inv)).collect())
}

/// `σ₄(GL₂(F_ℓ))`, moved from `J₃` to the standard form.
pub fn twisted_cubic_family(f: &FqField) -> Result<Vec<Mat4>, SymplecticError> {
    let j3 = cubic_form(f)?;
    let p = symplectic_basis(f, &j3)?;
    let p_inv = p.inverse(f).unwrap();
    gl2(f).iter().map(|g| Ok(conjugate(f, &twisted_cubic_embed(f, g)?.matrix, &p, &p_inv))).collect()
}

fn kron(f: &FqField, a: &Mat2, b: &Mat2) -> Mat4 {
    let mut m = Mat4::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m.0[2 * i + k][2 * j + l] = f.mul(a.0[i][j], b.0[k][l]);
                }
            }
        }
    }
    m
}

/// Generators `Q₈ ⊗ 1` and `1 ⊗ D₈` of the extraspecial group
/// `Q₈ ∘ D₈ = 2^{1+4}_−` inside `GL₄(F_ℓ)`.
pub fn extraspecial_generators(f: &FqField) -> Vec<Mat4> {
    let p = f.characteristic() as i64;
    // a² + b² = −1 is solvable in every odd prime field
    let (a, b) = (0..p).flat_map(|a| (0..p).map(move |b| (a, b))).find(|&(a, b)| (a * a + b * b + 1) % p == 0).unwrap();
    let qi = Mat2::from_ints(f, [[0, 1], [-1, 0]]);
    let qj = Mat2::from_ints(f, [[a, b], [b, -a]]);
    let r = Mat2::from_ints(f, [[0, -1], [1, 0]]);
    let s = Mat2::from_ints(f, [[1, 0], [0, -1]]);
    let i2 = Mat2::identity();
    vec![kron(f, &qi, &i2), kron(f, &qj, &i2), kron(f, &i2, &r), kron(f, &i2, &s)]
}

/// `M` with `M xᵢ = yᵢ M` for all `i`, if one is invertible.
fn intertwiner(f: &FqField, xs: &[Mat4], ys: &[Mat4]) -> Option<Mat4> {
    let mut rows = Vec::new();
    for (x, y) in xs.iter().zip(ys) {
        for i in 0..4 {
            for j in 0..4 {
                // (M x)_{ij} − (y M)_{ij}
                let mut row = vec![FqElem::ZERO; 16];
                for k in 0..4 {
                    row[i * 4 + k] = f.add(row[i * 4 + k], x.0[k][j]);
                    row[k * 4 + j] = f.sub(row[k * 4 + j], y.0[i][k]);
                }
                rows.push(row);
            }
        }
    }
    nullspace(f, &rows, 16).into_iter().find_map(|v| {
        let mut m = Mat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = v[i * 4 + j];
            }
        }
        (!m.det(f).is_zero()).then_some(m)
    })
}

/// Normalizer of `E = 2^{1+4}_−` in `GSp₄(F_ℓ)` (for the `E`-invariant form,
/// moved to the standard one). Built by enumerating automorphisms of `E`
/// that fix the centre (as images of the four generators preserving squares
/// and commutators) and realizing each by its intertwining matrix; the
/// projective image is `2⁴ : S₅` of order 1920.
pub fn extraspecial_normalizer(f: &FqField) -> Result<Vec<Mat4>, SymplecticError> {
    standard_form(f)?;
    let xs = extraspecial_generators(f);
    let e = MatrixGroup::new(f.clone(), xs.clone())?;
    let elements = enumerate(&e, 64, false).expect("|E| = 32");
    let minus = Mat4::scalar(f.from_int(-1));
    let central = |m: &Mat4| m.is_identity() || *m == minus;
    let comm = |a: &Mat4, b: &Mat4| a.mul(f, b).mul(f, &a.inverse(f).unwrap()).mul(f, &b.inverse(f).unwrap());
    let sq: Vec<Mat4> = xs.iter().map(|x| x.mul(f, x)).collect();
    let cm: Vec<Vec<Mat4>> = xs.iter().map(|a| xs.iter().map(|b| comm(a, b)).collect()).collect();
    let noncentral: Vec<Mat4> = elements.iter().filter(|m| !central(m)).copied().collect();
    let mut gens = xs.clone();
    let mut order = 16u64;
    // images in enumeration order; keep those that enlarge the group
    'outer: for y0 in noncentral.iter().filter(|y| y.mul(f, y) == sq[0]) {
        for y1 in noncentral.iter().filter(|y| y.mul(f, y) == sq[1] && comm(y0, y) == cm[0][1]) {
            for y2 in
                noncentral.iter().filter(|y| y.mul(f, y) == sq[2] && comm(y0, y) == cm[0][2] && comm(y1, y) == cm[1][2])
            {
                for y3 in noncentral.iter().filter(|y| {
                    y.mul(f, y) == sq[3]
                        && comm(y0, y) == cm[0][3]
                        && comm(y1, y) == cm[1][3]
                        && comm(y2, y) == cm[2][3]
                }) {
                    let ys = [*y0, *y1, *y2, *y3];
                    // independence mod the centre: the images generate all 32 elements
                    let sub = MatrixGroup::new(f.clone(), ys.to_vec())?;
                    if group_bfs(&sub, 32, false) != BfsOrder::Exact(32) {
                        continue;
                    }
                    let Some(m) = intertwiner(f, &xs, &ys) else { continue };
                    let mut trial = gens.clone();
                    trial.push(m);
                    let g = MatrixGroup::new(f.clone(), trial.clone())?;
                    if let BfsOrder::Exact(n) = group_bfs(&g, 4000, true) {
                        if n > order {
                            order = n;
                            gens = trial;
                            if order == 1920 {
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
    }
    // the E-invariant alternating form (unique up to scalars)
    let mut rows = Vec::new();
    for x in &xs {
        // xᵀ B x − B = 0
        for i in 0..4 {
            for j in 0..4 {
                let mut row = vec![FqElem::ZERO; 16];
                for k in 0..4 {
                    for l in 0..4 {
                        let c = f.mul(x.0[k][i], x.0[l][j]);
                        row[k * 4 + l] = f.add(row[k * 4 + l], c);
                    }
                }
                row[i * 4 + j] = f.sub(row[i * 4 + j], FqElem::ONE);
                rows.push(row);
            }
        }
    }
    // skew-symmetry
    for i in 0..4 {
        for j in i..4 {
            let mut row = vec![FqElem::ZERO; 16];
            row[i * 4 + j] = FqElem::ONE;
            row[j * 4 + i] = f.add(row[j * 4 + i], FqElem::ONE);
            rows.push(row);
        }
    }
    let sol = nullspace(f, &rows, 16);
    let v = sol.first().ok_or(SymplecticError::BadForm)?;
    let mut gram = Mat4::zero();
    for i in 0..4 {
        for j in 0..4 {
            gram.0[i][j] = v[i * 4 + j];
        }
    }
    let form = SympForm::new(f, gram)?;
    let p = symplectic_basis(f, &form)?;
    let p_inv = p.inverse(f).unwrap();
    Ok(gens.iter().map(|g| conjugate(f, g, &p, &p_inv)).collect())
}

/// Conjugates all generators by `c` (`g ↦ c g c⁻¹`).
pub fn conjugate_all(f: &FqField, gens: &[Mat4], c: &Mat4) -> Vec<Mat4> {
    let c_inv = c.inverse(f).expect("invertible conjugator");
    gens.iter().map(|g| conjugate(f, g, &c_inv, c)).collect()
}

/// A random element of `GSp₄(F_ℓ)` (random word in [`gsp4_generators`]).
pub fn random_similitude(f: &FqField, rng: &mut impl rand_core::RngCore) -> Result<Mat4, SymplecticError> {
    let g = MatrixGroup::new(f.clone(), gsp4_generators(f)?)?;
    Ok(g.random_word(40, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::multiplier;

    #[test]
    fn families_are_similitudes() {
        for l in [11u64, 13] {
            let f = FqField::new(l, 1).unwrap();
            let j = standard_form(&f).unwrap();
            for fam in Gsp4Family::ALL {
                for g in fam.generators(&f).unwrap() {
                    assert!(multiplier(&f, &g, &j).is_some(), "{fam:?} l={l}");
                }
            }
        }
    }

    #[test]
    fn extraspecial_normalizer_has_projective_order_1920() {
        let f = FqField::new(11, 1).unwrap();
        let g = MatrixGroup::new(f.clone(), extraspecial_normalizer(&f).unwrap()).unwrap();
        assert_eq!(group_bfs(&g, 4000, true), BfsOrder::Exact(1920));
    }
}
