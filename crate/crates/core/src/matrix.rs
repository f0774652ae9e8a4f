//! Small dense matrices over [`FqField`] plus the dynamic-size linear algebra
//! (row reduction, kernels) used by the commutant and intertwiner solvers.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::{FqElem, FqField};
use crate::uniform;

/// An `N × N` matrix, row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat<const N: usize>(pub [[FqElem; N]; N]);

pub type Mat2 = Mat<2>;
pub type Mat4 = Mat<4>;
pub type Vect<const N: usize> = [FqElem; N];

impl<const N: usize> fmt::Debug for Mat<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl<const N: usize> Mat<N> {
    pub fn zero() -> Self {
        Mat([[FqElem::ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            m.0[i][i] = FqElem::ONE;
        }
        m
    }

    pub fn scalar(c: FqElem) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            m.0[i][i] = c;
        }
        m
    }

    pub fn diag(entries: [FqElem; N]) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            m.0[i][i] = entries[i];
        }
        m
    }

    /// Builds a prime-field matrix from integer rows.
    pub fn from_ints(f: &FqField, rows: [[i64; N]; N]) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = f.from_int(rows[i][j]);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<FqElem>]) -> Option<Self> {
        if rows.len() != N || rows.iter().any(|r| r.len() != N) {
            return None;
        }
        let mut m = Self::zero();
        for i in 0..N {
            m.0[i].copy_from_slice(&rows[i]);
        }
        Some(m)
    }

    pub fn rows(&self) -> Vec<Vec<FqElem>> {
        self.0.iter().map(|r| r.to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vect<N> {
        core::array::from_fn(|i| self.0[i][j])
    }

    pub fn from_cols(cols: &[Vect<N>; N]) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = cols[j][i];
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i];
            }
        }
        m
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Is this `c·I` for some `c`?
    pub fn is_scalar(&self) -> bool {
        *self == Self::scalar(self.0[0][0])
    }

    pub fn mul(&self, f: &FqField, other: &Self) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..N {
                    m.0[i][j] = f.add(m.0[i][j], f.mul(a, other.0[k][j]));
                }
            }
        }
        m
    }

    pub fn add(&self, f: &FqField, other: &Self) -> Self {
        let mut m = *self;
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = f.add(m.0[i][j], other.0[i][j]);
            }
        }
        m
    }

    pub fn sub(&self, f: &FqField, other: &Self) -> Self {
        let mut m = *self;
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = f.sub(m.0[i][j], other.0[i][j]);
            }
        }
        m
    }

    pub fn scale(&self, f: &FqField, c: FqElem) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for x in row.iter_mut() {
                *x = f.mul(*x, c);
            }
        }
        m
    }

    pub fn mul_vec(&self, f: &FqField, v: &Vect<N>) -> Vect<N> {
        core::array::from_fn(|i| dot(f, &self.0[i], v))
    }

    pub fn trace(&self, f: &FqField) -> FqElem {
        (0..N).fold(FqElem::ZERO, |acc, i| f.add(acc, self.0[i][i]))
    }

    pub fn pow(&self, f: &FqField, mut exp: u64) -> Self {
        let mut acc = Self::identity();
        let mut base = *self;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            exp >>= 1;
        }
        acc
    }

    /// Applies a field automorphism (e.g. Frobenius) entrywise.
    pub fn map(&self, mut g: impl FnMut(FqElem) -> FqElem) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for x in row.iter_mut() {
                *x = g(*x);
            }
        }
        m
    }

    pub fn det(&self, f: &FqField) -> FqElem {
        let mut a = self.0;
        let mut det = FqElem::ONE;
        for c in 0..N {
            let Some(p) = (c..N).find(|&r| !a[r][c].is_zero()) else {
                return FqElem::ZERO;
            };
            if p != c {
                a.swap(p, c);
                det = f.neg(det);
            }
            det = f.mul(det, a[c][c]);
            let inv = f.inv(a[c][c]).unwrap();
            for r in c + 1..N {
                let factor = f.mul(a[r][c], inv);
                if factor.is_zero() {
                    continue;
                }
                for k in c..N {
                    a[r][k] = f.sub(a[r][k], f.mul(factor, a[c][k]));
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: &FqField) -> Option<Self> {
        let mut a = self.0;
        let mut inv = Self::identity().0;
        for c in 0..N {
            let p = (c..N).find(|&r| !a[r][c].is_zero())?;
            a.swap(p, c);
            inv.swap(p, c);
            let s = f.inv(a[c][c]).unwrap();
            for k in 0..N {
                a[c][k] = f.mul(a[c][k], s);
                inv[c][k] = f.mul(inv[c][k], s);
            }
            for r in 0..N {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let factor = a[r][c];
                for k in 0..N {
                    a[r][k] = f.sub(a[r][k], f.mul(factor, a[c][k]));
                    inv[r][k] = f.sub(inv[r][k], f.mul(factor, inv[c][k]));
                }
            }
        }
        Some(Mat(inv))
    }

    pub fn rank(&self, f: &FqField) -> usize {
        let mut rows = self.rows();
        rref(f, &mut rows).len()
    }

    /// Characteristic polynomial `det(X·I − M)`, least degree first, monic of
    /// length `N + 1`. Uses a Hessenberg reduction, so it is valid in every
    /// characteristic.
    pub fn charpoly(&self, f: &FqField) -> Vec<FqElem> {
        let mut h = self.0;
        for m in 1..N {
            let Some(i) = (m..N).find(|&i| !h[i][m - 1].is_zero()) else {
                continue;
            };
            if i != m {
                h.swap(i, m);
                for row in h.iter_mut() {
                    row.swap(i, m);
                }
            }
            let t_inv = f.inv(h[m][m - 1]).unwrap();
            for i in m + 1..N {
                let u = f.mul(h[i][m - 1], t_inv);
                if u.is_zero() {
                    continue;
                }
                for j in 0..N {
                    h[i][j] = f.sub(h[i][j], f.mul(u, h[m][j]));
                }
                for row in h.iter_mut() {
                    row[m] = f.add(row[m], f.mul(u, row[i]));
                }
            }
        }
        // p_k is the charpoly of the leading k×k block
        let mut p: Vec<Vec<FqElem>> = vec![vec![FqElem::ONE]];
        for m in 1..=N {
            let prev = &p[m - 1];
            let mut next = vec![FqElem::ZERO; m + 1];
            for (k, &c) in prev.iter().enumerate() {
                next[k + 1] = f.add(next[k + 1], c);
                next[k] = f.sub(next[k], f.mul(h[m - 1][m - 1], c));
            }
            let mut t = FqElem::ONE;
            for i in 1..m {
                t = f.mul(t, h[m - i][m - i - 1]);
                let coeff = f.mul(h[m - i - 1][m - 1], t);
                for (k, &c) in p[m - i - 1].iter().enumerate() {
                    next[k] = f.sub(next[k], f.mul(coeff, c));
                }
            }
            p.push(next);
        }
        p.pop().unwrap()
    }

    /// Uniformly random matrix (not necessarily invertible).
    pub fn random(f: &FqField, rng: &mut impl rand_core::RngCore) -> Self {
        let q = f.order();
        let mut m = Self::zero();
        for row in m.0.iter_mut() {
            for x in row.iter_mut() {
                *x = f.element(uniform(rng, q));
            }
        }
        m
    }

    /// Uniformly random invertible matrix by rejection.
    pub fn random_invertible(f: &FqField, rng: &mut impl rand_core::RngCore) -> Self {
        loop {
            let m = Self::random(f, rng);
            if !m.det(f).is_zero() {
                return m;
            }
        }
    }

    /// Injective packing of the entries into a `u128` (mixed radix `q`).
    /// Valid whenever `q^{N²} ≤ 2¹²⁸`, which holds for 4×4 with `q ≤ 255`
    /// and 2×2 with `q < 2³²`.
    #[inline]
    pub fn key(&self, f: &FqField) -> u128 {
        let q = f.order() as u128;
        let mut k = 0u128;
        for row in &self.0 {
            for &x in row {
                k = k * q + f.index(x) as u128;
            }
        }
        k
    }

    /// Projective normal form: scaled so that the first nonzero entry in
    /// row-major order equals 1.
    pub fn projective_normal(&self, f: &FqField) -> Self {
        let lead = self.0.iter().flatten().copied().find(|x| !x.is_zero());
        match lead {
            Some(c) if c != FqElem::ONE => self.scale(f, f.inv(c).unwrap()),
            _ => *self,
        }
    }

    /// Entries as nested coefficient vectors (for serialization).
    pub fn to_coeff_rows(&self, f: &FqField) -> Vec<Vec<Vec<u32>>> {
        self.0.iter().map(|r| r.iter().map(|&x| f.coeffs(x)).collect()).collect()
    }
}

pub fn dot<const N: usize>(f: &FqField, a: &Vect<N>, b: &Vect<N>) -> FqElem {
    let mut acc = FqElem::ZERO;
    for i in 0..N {
        acc = f.add(acc, f.mul(a[i], b[i]));
    }
    acc
}

/// Evaluates a polynomial (least degree first) at `x`.
pub fn poly_eval(f: &FqField, p: &[FqElem], x: FqElem) -> FqElem {
    p.iter().rev().fold(FqElem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
}

/// Reduced row echelon form in place. Zero rows are removed; returns the
/// pivot column of each remaining row.
pub fn rref(f: &FqField, rows: &mut Vec<Vec<FqElem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let s = f.inv(rows[r][c]).unwrap();
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, s);
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let factor = rows[i][c];
            for k in c..ncols {
                let v = f.mul(factor, rows[r][k]);
                rows[i][k] = f.sub(rows[i][k], v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : A x = 0}` for `A` given by rows of length `ncols`.
pub fn nullspace(f: &FqField, rows: &[Vec<FqElem>], ncols: usize) -> Vec<Vec<FqElem>> {
    let mut a = rows.to_vec();
    let pivots = rref(f, &mut a);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![FqElem::ZERO; ncols];
        v[free] = FqElem::ONE;
        for (row, &p) in a.iter().zip(&pivots) {
            v[p] = f.neg(row[free]);
        }
        basis.push(v);
    }
    basis
}

/// Row-reduced basis of the span of the given vectors.
pub fn span_basis(f: &FqField, vectors: &[Vec<FqElem>]) -> Vec<Vec<FqElem>> {
    let mut a = vectors.to_vec();
    rref(f, &mut a);
    a
}

/// Is `v` in the span of the (row-reduced or arbitrary) rows `basis`?
pub fn in_span(f: &FqField, basis: &[Vec<FqElem>], v: &[FqElem]) -> bool {
    let mut a = basis.to_vec();
    let before = rref(f, &mut a).len();
    a.push(v.to_vec());
    rref(f, &mut a).len() == before
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng_from_seed;

    fn det_brute4(f: &FqField, m: &Mat4) -> FqElem {
        // Leibniz expansion over all 24 permutations
        let mut acc = FqElem::ZERO;
        let perms = permutations4();
        for (perm, sign) in perms {
            let mut t = f.from_int(sign);
            for i in 0..4 {
                t = f.mul(t, m.0[i][perm[i]]);
            }
            acc = f.add(acc, t);
        }
        acc
    }

    fn permutations4() -> Vec<([usize; 4], i64)> {
        let mut out = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let p = [a, b, c, d];
                        let mut seen = [false; 4];
                        if p.iter().all(|&x| !core::mem::replace(&mut seen[x], true)) {
                            let mut inv = 0;
                            for i in 0..4 {
                                for j in i + 1..4 {
                                    if p[i] > p[j] {
                                        inv += 1;
                                    }
                                }
                            }
                            out.push((p, if inv % 2 == 0 { 1 } else { -1 }));
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn determinant_and_inverse_agree_with_leibniz() {
        let mut rng = rng_from_seed(1);
        for (p, n) in [(11u64, 1usize), (3, 1), (2, 1), (5, 2)] {
            let f = FqField::new(p, n).unwrap();
            for _ in 0..200 {
                let m = Mat4::random(&f, &mut rng);
                let d = m.det(&f);
                assert_eq!(d, det_brute4(&f, &m));
                match m.inverse(&f) {
                    Some(inv) => {
                        assert!(!d.is_zero());
                        assert!(m.mul(&f, &inv).is_identity());
                        assert!(inv.mul(&f, &m).is_identity());
                    }
                    None => assert!(d.is_zero()),
                }
            }
        }
    }

    #[test]
    fn charpoly_matches_pointwise_determinant() {
        let mut rng = rng_from_seed(2);
        // F_5 and above: a monic quartic is pinned by its values at ≥ 4 points
        for (p, n) in [(5u64, 1usize), (7, 1), (11, 1), (2, 3), (3, 2)] {
            let f = FqField::new(p, n).unwrap();
            for _ in 0..100 {
                let m = Mat4::random(&f, &mut rng);
                let cp = m.charpoly(&f);
                assert_eq!(cp.len(), 5);
                assert_eq!(cp[4], FqElem::ONE);
                assert_eq!(cp[0], det_brute4(&f, &m.scale(&f, f.from_int(-1))));
                for x in f.elements() {
                    let xi_minus_m = Mat4::scalar(x).sub(&f, &m);
                    assert_eq!(poly_eval(&f, &cp, x), xi_minus_m.det(&f));
                }
            }
        }
    }

    #[test]
    fn charpoly_cayley_hamilton_small_characteristic() {
        let mut rng = rng_from_seed(3);
        for p in [2u64, 3] {
            let f = FqField::new(p, 1).unwrap();
            for _ in 0..300 {
                let m = Mat4::random(&f, &mut rng);
                let cp = m.charpoly(&f);
                let mut acc = Mat4::zero();
                for &c in cp.iter().rev() {
                    acc = acc.mul(&f, &m).add(&f, &Mat4::scalar(c));
                }
                assert_eq!(acc, Mat4::zero());
                assert_eq!(f.neg(cp[3]), m.trace(&f));
            }
        }
    }

    #[test]
    fn nullspace_dimension_and_correctness() {
        let f = FqField::new(7, 1).unwrap();
        let mut rng = rng_from_seed(4);
        for _ in 0..100 {
            let a = Mat4::random(&f, &mut rng);
            let ker = nullspace(&f, &a.rows(), 4);
            assert_eq!(ker.len() + a.rank(&f), 4);
            for v in &ker {
                let w = a.mul_vec(&f, &[v[0], v[1], v[2], v[3]]);
                assert!(w.iter().all(|x| x.is_zero()));
            }
        }
    }

    #[test]
    fn keys_are_injective_and_projective_form_is_canonical() {
        let f = FqField::new(5, 1).unwrap();
        let mut rng = rng_from_seed(5);
        let a = Mat2::random_invertible(&f, &mut rng);
        let b = a.scale(&f, f.from_int(3));
        assert_eq!(a.projective_normal(&f), b.projective_normal(&f));
        let mut seen = hashbrown::HashSet::new();
        for i in 0..625u64 {
            let mut m = Mat2::zero();
            for k in 0..4 {
                m.0[k / 2][k % 2] = f.element(i / 5u64.pow(k as u32) % 5);
            }
            assert!(seen.insert(m.key(&f)));
        }
    }
}
