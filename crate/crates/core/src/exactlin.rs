//! Dense exact-rational linear algebra and canonical subspace arithmetic.
//!
//! Subspaces are stored as reduced row-echelon bases so that equality of
//! subspaces is structural equality of their representations. All operations
//! are pure; no floating point is used anywhere.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from a fraction `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
        Some((p, q)) => {
            let p = p.trim().parse::<BigInt>().ok()?;
            let q = q.trim().parse::<BigInt>().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
    }
}

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format_rational(self.at(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
        }
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Convenience constructor from integer entries.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&n| rat(n)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.at(i, j) == self.at(j, i)))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(i, j).clone();
                    out.set(i, j, cur + a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for j in 0..self.cols {
                    let a = self.at(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc += a * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// Stacks `other` below `self`.
    pub fn stack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "stack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Places `other` to the right of `self`.
    pub fn augment(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "augment row mismatch");
        let mut out = Matrix::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.at(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.at(i, j).clone());
            }
        }
        out
    }

    /// Block-diagonal combination.
    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zero(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.at(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let mut out = Matrix::zero(rows.len(), cols.len());
        for (ii, i) in rows.clone().enumerate() {
            for (jj, j) in cols.clone().enumerate() {
                out.set(ii, jj, self.at(i, j).clone());
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rref_with_pivots(self).1.len()
    }

    /// Inverse of a square matrix; panics when singular.
    pub fn inverse(&self) -> Matrix {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let (r, pivots) = rref_with_pivots(&self.augment(&Matrix::identity(n)));
        assert_eq!(pivots.len(), n, "singular matrix has no inverse");
        r.submatrix(0..n, n..2 * n)
    }

    /// Kernel {x : self * x = 0} as a canonical subspace of the column space domain.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = rref_with_pivots(self);
        let n = self.cols;
        let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.at(row, f).clone();
            }
            basis.push(v);
        }
        Subspace::from_spanning(n, basis)
    }

    /// Solves self * x = b, returning one solution if consistent.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(self.rows, b.len());
        let bm = Matrix::from_rows(b.iter().map(|x| vec![x.clone()]).collect());
        let (r, pivots) = rref_with_pivots(&self.augment(&bm));
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.at(row, self.cols).clone();
        }
        Some(x)
    }
}

/// Reduced row-echelon form; the row space is preserved.
pub fn rref(m: &Matrix) -> Matrix {
    rref_with_pivots(m).0
}

/// Reduced row-echelon form together with the pivot column indices.
pub fn rref_with_pivots(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Find a pivot in column c at or below row r.
        let pivot_row = (r..rows).find(|&i| !a.at(i, c).is_zero());
        let Some(p) = pivot_row else { continue };
        if p != r {
            for j in 0..cols {
                let tmp = a.at(p, j).clone();
                a.set(p, j, a.at(r, j).clone());
                a.set(r, j, tmp);
            }
        }
        let inv = a.at(r, c).recip();
        for j in c..cols {
            let v = a.at(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i != r && !a.at(i, c).is_zero() {
                let f = a.at(i, c).clone();
                for j in c..cols {
                    let v = a.at(i, j) - &f * a.at(r, j);
                    a.set(i, j, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Canonical subspace of ℚ^n: basis rows in reduced row-echelon form with
/// strictly increasing pivot columns. Equal subspaces have identical
/// representations, so `==` is set equality.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} of {}) {:?}", self.dim(), self.ambient, self.basis)
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zero(0, ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient) }
    }

    /// Canonicalizes a spanning set.
    pub fn from_spanning(ambient: usize, vectors: Vec<Vec<Rational>>) -> Self {
        for v in &vectors {
            assert_eq!(v.len(), ambient, "spanning vector of wrong length");
        }
        if vectors.is_empty() {
            return Subspace::zero(ambient);
        }
        Subspace::from_matrix_rows(&Matrix::from_rows(vectors))
    }

    /// Canonicalizes the row space of a matrix.
    pub fn from_matrix_rows(m: &Matrix) -> Self {
        let (r, pivots) = rref_with_pivots(m);
        let basis = r.submatrix(0..pivots.len(), 0..m.cols);
        Subspace { ambient: m.cols, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    /// Basis matrix, one vector per row, in reduced row-echelon form.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.dim()).map(|i| self.basis.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    fn pivots(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|i| (0..self.ambient).find(|&j| !self.basis.at(i, j).is_zero()).unwrap())
            .collect()
    }

    /// Reduces `v` against the basis; the residual is zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.ambient, "ambient mismatch");
        let mut out = v.to_vec();
        for (i, p) in self.pivots().into_iter().enumerate() {
            if !out[p].is_zero() {
                let f = out[p].clone();
                for j in 0..self.ambient {
                    let d = &f * self.basis.at(i, j);
                    if !d.is_zero() {
                        out[j] -= d;
                    }
                }
            }
        }
        out
    }

    pub fn contains_vec(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        (0..other.dim()).all(|i| self.contains_vec(other.basis.row(i)))
    }

    /// Matrix of the linear map v ↦ v − (reduction of v against this basis);
    /// its kernel is exactly this subspace.
    pub fn residual_matrix(&self) -> Matrix {
        let n = self.ambient;
        let mut r = Matrix::identity(n);
        for (i, p) in self.pivots().into_iter().enumerate() {
            // Column p of the residual map is e_p − basis_i.
            for j in 0..n {
                let v = r.at(j, p) - self.basis.at(i, j);
                r.set(j, p, v);
            }
        }
        r
    }

    /// Canonical sum span(self ∪ other).
    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        Subspace::from_matrix_rows(&self.basis.stack(&other.basis))
    }

    /// Canonical intersection, via the kernel of the stacked system.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        if self.is_full() {
            return other.clone();
        }
        if other.is_full() {
            return self.clone();
        }
        let (k, l) = (self.dim(), other.dim());
        if k == 0 || l == 0 {
            return Subspace::zero(self.ambient);
        }
        // Solve Aᵀ a = Bᵀ b; the intersection is spanned by the Aᵀ a parts.
        let sys = self.basis.transpose().augment(&other.basis.transpose().neg());
        let ker = sys.kernel();
        let mut vecs = Vec::with_capacity(ker.dim());
        for row in ker.basis_rows() {
            let a = &row[0..k];
            let mut v = vec![Rational::zero(); self.ambient];
            for (i, coef) in a.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                for j in 0..self.ambient {
                    let d = coef * self.basis.at(i, j);
                    if !d.is_zero() {
                        v[j] += d;
                    }
                }
            }
            vecs.push(v);
        }
        Subspace::from_spanning(self.ambient, vecs)
    }

    /// Orthogonal complement {x : form(x, v) = 0 for all v here} for a
    /// symmetric bilinear form given by its Gram matrix.
    pub fn perp(&self, form: &Matrix) -> Subspace {
        assert!(form.is_symmetric(), "perp requires a symmetric form");
        assert_eq!(form.rows(), self.ambient, "form dimension mismatch");
        if self.dim() == 0 {
            return Subspace::full(self.ambient);
        }
        self.basis.mul(form).kernel()
    }

    /// Image of this subspace under a linear map.
    pub fn map_image(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient, "map domain mismatch");
        let vecs = (0..self.dim()).map(|i| m.mul_vec(self.basis.row(i))).collect();
        Subspace::from_spanning(m.rows(), vecs)
    }

    /// Preimage {x : m·x ∈ self} inside the domain of m.
    pub fn preimage(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.rows(), self.ambient, "map codomain mismatch");
        self.residual_matrix().mul(m).kernel()
    }
}

/// Image m(v) and kernel {x ∈ v : m·x = 0}, both canonical.
/// dim image + dim kernel = dim v.
pub fn map_image_kernel(m: &Matrix, v: &Subspace) -> (Subspace, Subspace) {
    assert_eq!(m.cols(), v.ambient_dim(), "map/subspace dimension mismatch");
    let image = v.map_image(m);
    // Parametrize v, solve m·(c·basis) = 0 in the parameters, map back.
    let param = m.mul(&v.basis.transpose());
    let ker_params = param.kernel();
    let vecs = ker_params
        .basis_rows()
        .into_iter()
        .map(|c| {
            let mut out = vec![Rational::zero(); v.ambient];
            for (i, coef) in c.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                for j in 0..v.ambient {
                    let d = coef * v.basis.at(i, j);
                    if !d.is_zero() {
                        out[j] += d;
                    }
                }
            }
            out
        })
        .collect();
    let kernel = Subspace::from_spanning(v.ambient, vecs);
    (image, kernel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vecr(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&n| rat(n)).collect()
    }

    #[test]
    fn rref_dependent_rows() {
        let m = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        let (r, pivots) = rref_with_pivots(&m);
        assert_eq!(pivots, vec![0]);
        assert_eq!(r.row(0), &vecr(&[1, 2])[..]);
        assert!(r.row(1).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn rref_identity_fixed() {
        let m = Matrix::identity(3);
        assert_eq!(rref(&m), m);
    }

    #[test]
    fn rref_permutation() {
        let m = Matrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(rref(&m), Matrix::identity(2));
    }

    #[test]
    fn sum_of_unit_spans() {
        let a = Subspace::from_spanning(2, vec![vecr(&[1, 0])]);
        let b = Subspace::from_spanning(2, vec![vecr(&[0, 1])]);
        assert_eq!(a.sum(&b), Subspace::full(2));
        assert_eq!(a.sum(&Subspace::zero(2)), a);
        let c = Subspace::from_spanning(2, vec![vecr(&[1, 1])]);
        let d = Subspace::from_spanning(2, vec![vecr(&[1, -1])]);
        assert_eq!(c.sum(&d), Subspace::full(2));
    }

    #[test]
    fn intersection_examples() {
        let v = Subspace::from_spanning(2, vec![vecr(&[1, 0]), vecr(&[0, 1])]);
        assert_eq!(v.intersect(&v), v);
        let a = Subspace::from_spanning(2, vec![vecr(&[1, 0])]);
        let b = Subspace::from_spanning(2, vec![vecr(&[0, 1])]);
        assert_eq!(a.intersect(&b), Subspace::zero(2));
        let c = Subspace::from_spanning(2, vec![vecr(&[1, 1])]);
        assert_eq!(v.intersect(&c), c);
    }

    #[test]
    fn perp_trace_form_sl2() {
        // sl2 Chevalley basis (h, e, f) with ⟨h,h⟩ = 2, ⟨e,f⟩ = 1.
        let form = Matrix::from_i64(&[&[2, 0, 0], &[0, 0, 1], &[0, 1, 0]]);
        let full = Subspace::full(3);
        assert_eq!(full.perp(&form), Subspace::zero(3));
        assert_eq!(Subspace::zero(3).perp(&form), full);
        // span{e}^⊥ = span{h, e}: solved by hand from ⟨x, e⟩ = x_f = 0.
        let e = Subspace::from_spanning(3, vec![vecr(&[0, 1, 0])]);
        let expect = Subspace::from_spanning(3, vec![vecr(&[1, 0, 0]), vecr(&[0, 1, 0])]);
        assert_eq!(e.perp(&form), expect);
    }

    #[test]
    fn image_kernel_examples() {
        let v = Subspace::full(2);
        let zero = Matrix::zero(2, 2);
        let (im, ker) = map_image_kernel(&zero, &v);
        assert!(im.is_zero());
        assert_eq!(ker, v);
        let (im, ker) = map_image_kernel(&Matrix::identity(2), &v);
        assert_eq!(im, v);
        assert!(ker.is_zero());
        let m = Matrix::from_i64(&[&[1, 1], &[1, 1]]);
        let (im, ker) = map_image_kernel(&m, &v);
        assert_eq!(im, Subspace::from_spanning(2, vec![vecr(&[1, 1])]));
        assert_eq!(ker, Subspace::from_spanning(2, vec![vecr(&[1, -1])]));
    }

    #[test]
    fn preimage_solves_membership() {
        let m = Matrix::from_i64(&[&[1, 0], &[0, 0]]);
        let target = Subspace::from_spanning(2, vec![vecr(&[1, 0])]);
        assert_eq!(target.preimage(&m), Subspace::full(2));
        let zero_target = Subspace::zero(2);
        assert_eq!(
            zero_target.preimage(&m),
            Subspace::from_spanning(2, vec![vecr(&[0, 1])])
        );
    }

    fn arb_subspace(ambient: usize, max_vecs: usize) -> impl Strategy<Value = Subspace> {
        prop::collection::vec(
            prop::collection::vec(-4i64..5, ambient),
            0..=max_vecs,
        )
        .prop_map(move |rows| {
            Subspace::from_spanning(ambient, rows.iter().map(|r| vecr(r)).collect())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn grassmann_identity(a in arb_subspace(5, 4), b in arb_subspace(5, 4)) {
            let s = a.sum(&b);
            let i = a.intersect(&b);
            prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
            prop_assert!(s.contains(&a) && s.contains(&b));
            prop_assert!(a.contains(&i) && b.contains(&i));
        }

        #[test]
        fn canonicity_spanning_order_irrelevant(
            rows in prop::collection::vec(prop::collection::vec(-4i64..5, 4), 1..4),
            seed in 0u64..1000,
        ) {
            let vecs: Vec<Vec<Rational>> = rows.iter().map(|r| vecr(r)).collect();
            let a = Subspace::from_spanning(4, vecs.clone());
            let mut shuffled = vecs;
            let n = shuffled.len();
            shuffled.rotate_left((seed as usize) % n);
            let b = Subspace::from_spanning(4, shuffled);
            prop_assert_eq!(a, b);
        }

        #[test]
        fn double_perp_nondegenerate(v in arb_subspace(4, 3)) {
            // Nondegenerate diagonal form diag(1, 2, 3, 1).
            let form = Matrix::from_i64(&[&[1,0,0,0], &[0,2,0,0], &[0,0,3,0], &[0,0,0,1]]);
            let p = v.perp(&form);
            prop_assert_eq!(v.dim() + p.dim(), 4);
            prop_assert_eq!(p.perp(&form), v);
        }

        #[test]
        fn rank_nullity(
            mrows in prop::collection::vec(prop::collection::vec(-3i64..4, 4), 4),
            v in arb_subspace(4, 3),
        ) {
            let m = Matrix::from_rows(mrows.iter().map(|r| vecr(r)).collect());
            let (im, ker) = map_image_kernel(&m, &v);
            prop_assert_eq!(im.dim() + ker.dim(), v.dim());
        }
    }
}
