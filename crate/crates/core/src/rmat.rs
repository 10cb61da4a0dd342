//! Elements of g⊗g, the classical Yang–Baxter operator, the standard
//! r-matrix and its mixed products on g^n, and the derived factorizable data:
//! the maps r♭_±, the subalgebras f_± = Im r♭_±, and the Lagrangian graph l_r.

use crate::exactlin::{rat, ratio, Matrix, Rational, Subspace};
use crate::lie_core::{Brackets, LieAlgebra};
use num_traits::Zero;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RmatError {
    #[error("r + r21 is degenerate: the r-matrix is not factorizable")]
    NotFactorizable,
    #[error("classical Yang-Baxter equation fails: {0} nonzero 3-tensor entries")]
    CybNonzero(usize),
    #[error("r + r21 is not ad-invariant")]
    SymmetricPartNotInvariant,
}

/// An element r = Σ C_ij x_i ⊗ x_j of g⊗g in basis coordinates.
#[derive(Clone, Debug)]
pub struct RTensor {
    pub coeffs: Matrix,
}

impl RTensor {
    pub fn new(coeffs: Matrix) -> Self {
        assert_eq!(coeffs.rows(), coeffs.cols(), "r-tensor coefficients must be square");
        RTensor { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.rows()
    }

    /// r^21 (slots swapped).
    pub fn flip(&self) -> RTensor {
        RTensor { coeffs: self.coeffs.transpose() }
    }

    /// Symmetric part coefficients C + Cᵀ of r + r^21.
    pub fn symmetric_part(&self) -> Matrix {
        self.coeffs.add(&self.coeffs.transpose())
    }

    /// JSON-ready sparse dump: (i, j, "p/q") triples.
    pub fn sparse_entries(&self) -> Vec<(usize, usize, String)> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let c = self.coeffs.at(i, j);
                if !c.is_zero() {
                    out.push((i, j, crate::exactlin::format_rational(c)));
                }
            }
        }
        out
    }

    /// JSON dump: the sparse triples plus the basis labels.
    pub fn json_dump(&self, labels: &[String]) -> String {
        assert_eq!(labels.len(), self.dim());
        let entries: Vec<serde_json::Value> = self
            .sparse_entries()
            .into_iter()
            .map(|(i, j, c)| serde_json::json!([i, j, c]))
            .collect();
        serde_json::json!({ "labels": labels, "entries": entries }).to_string()
    }
}

/// The three-term classical Yang–Baxter expression of r, as a sparse 3-tensor.
pub struct CybTensor {
    pub dim: usize,
    pub entries: HashMap<(usize, usize, usize), Rational>,
}

impl CybTensor {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.len()
    }
}

/// CYB(r) = Σ [x_i,x_j]⊗y_i⊗y_j + x_i⊗[y_i,x_j]⊗y_j + x_i⊗x_j⊗[y_i,y_j]
/// for r = Σ x_i ⊗ y_i, expanded over the basis.
pub fn cyb(br: &Brackets, r: &RTensor) -> CybTensor {
    let n = r.dim();
    assert_eq!(br.dim, n, "algebra and tensor dimension mismatch");
    let c = &r.coeffs;
    let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
    let mut cols: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            let v = c.at(i, j);
            if !v.is_zero() {
                rows[i].push((j, v.clone()));
                cols[j].push((i, v.clone()));
            }
        }
    }
    let mut acc: HashMap<(usize, usize, usize), Rational> = HashMap::new();
    let mut add = |key: (usize, usize, usize), v: Rational| {
        let slot = acc.entry(key).or_insert_with(Rational::zero);
        *slot += v;
        if slot.is_zero() {
            acc.remove(&key);
        }
    };
    // With r = Σ_{ab} C_ab x_a ⊗ x_b and [x_u, x_v] = Σ f_uv^p x_p:
    //   term 1: Σ C_aq C_cs f_ac^p  on x_p ⊗ x_q ⊗ x_s
    //   term 2: Σ C_pb C_cs f_bc^q
    //   term 3: Σ C_pb C_qd f_bd^s
    for u in 0..n {
        for v in 0..n {
            let entry = br.entry(u, v);
            if entry.is_empty() {
                continue;
            }
            for (target, f) in entry {
                for (q, cu) in &rows[u] {
                    for (s, cv) in &rows[v] {
                        add((*target, *q, *s), f * cu * cv);
                    }
                }
                for (p, cu) in &cols[u] {
                    for (s, cv) in &rows[v] {
                        add((*p, *target, *s), f * cu * cv);
                    }
                }
                for (p, cu) in &cols[u] {
                    for (q, cv) in &cols[v] {
                        add((*p, *q, *target), f * cu * cv);
                    }
                }
            }
        }
    }
    CybTensor { dim: n, entries: acc }
}

/// Is the 2-tensor with coefficient matrix `t` ad-invariant?
/// Checked as the matrix identity ad_z·T + T·ad_zᵀ = 0 on basis elements.
pub fn tensor_is_ad_invariant(br: &Brackets, t: &Matrix) -> bool {
    let n = br.dim;
    for z in 0..n {
        let mut unit = vec![Rational::zero(); n];
        unit[z] = rat(1);
        let ad = br.ad_matrix(&unit);
        let lhs = ad.mul(t).add(&t.mul(&ad.transpose()));
        if !lhs.is_zero() {
            return false;
        }
    }
    true
}

/// A factorizable quasitriangular r-matrix together with everything derived
/// from it: the associated invariant form, the maps r♭_± : g → g, the
/// subalgebras f_± = Im r♭_±, and the Lagrangian graph l_r ⊂ g⊕g.
#[derive(Clone)]
pub struct Factorizable {
    pub br: Brackets,
    pub r: RTensor,
    /// Gram matrix of the associated form ⟨,⟩ = (C + Cᵀ)⁻¹.
    pub form: Matrix,
    pub rb_plus: Matrix,
    pub rb_minus: Matrix,
    pub f_plus: Subspace,
    pub f_minus: Subspace,
    pub l_r: Subspace,
}

impl Factorizable {
    /// Derives all data from the coefficient matrix. Quasitriangularity is
    /// verified eagerly in debug builds; call `verify_quasitriangular` for an
    /// explicit check in release runs.
    pub fn new(br: Brackets, r: RTensor) -> Result<Factorizable, RmatError> {
        let n = r.dim();
        assert_eq!(br.dim, n);
        let s = r.symmetric_part();
        if s.rank() != n {
            return Err(RmatError::NotFactorizable);
        }
        let form = s.inverse();
        let rb_plus = r.coeffs.transpose().mul(&form);
        let rb_minus = r.coeffs.mul(&form).neg();
        debug_assert_eq!(rb_plus.sub(&rb_minus), Matrix::identity(n));
        let f_plus = Subspace::from_matrix_rows(&rb_plus.transpose());
        let f_minus = Subspace::from_matrix_rows(&rb_minus.transpose());
        // l_r = {(r♭_+ x, r♭_− x)}: spanned by the stacked columns.
        let l_r = Subspace::from_matrix_rows(&rb_plus.stack(&rb_minus).transpose());
        let fd = Factorizable { br, r, form, rb_plus, rb_minus, f_plus, f_minus, l_r };
        #[cfg(debug_assertions)]
        fd.verify_quasitriangular()?;
        Ok(fd)
    }

    pub fn dim(&self) -> usize {
        self.r.dim()
    }

    /// CYB(r) = 0 and ad-invariance of r + r^21, exactly.
    pub fn verify_quasitriangular(&self) -> Result<(), RmatError> {
        let t = cyb(&self.br, &self.r);
        if !t.is_zero() {
            return Err(RmatError::CybNonzero(t.nonzero_count()));
        }
        if !tensor_is_ad_invariant(&self.br, &self.r.symmetric_part()) {
            return Err(RmatError::SymmetricPartNotInvariant);
        }
        Ok(())
    }

    /// Gram matrix of the form on g⊕g: ⟨(x1,x2),(y1,y2)⟩ = ⟨x1,y1⟩ − ⟨x2,y2⟩.
    pub fn double_form(&self) -> Matrix {
        Matrix::block_diag(&[&self.form, &self.form.neg()])
    }

    /// Projection g⊕g = g_diag + l_r → g, (x1,x2) ↦ −r♭_−(x1) + r♭_+(x2);
    /// the identity on the diagonal and zero on l_r.
    pub fn pair_projection(&self, x1: &[Rational], x2: &[Rational]) -> Vec<Rational> {
        let a = self.rb_minus.mul_vec(x1);
        let b = self.rb_plus.mul_vec(x2);
        a.iter().zip(&b).map(|(u, v)| v - u).collect()
    }

    /// ⟨x, y⟩ under the associated form.
    pub fn pair(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let fy = self.form.mul_vec(y);
        x.iter().zip(&fy).map(|(a, b)| a * b).sum()
    }
}

/// The images f_± = Im r♭_±, asserted closed under the bracket.
pub fn f_subalgebras(rd: &Factorizable) -> (Subspace, Subspace) {
    assert!(is_subalgebra(&rd.br, &rd.f_plus), "f_+ is not a subalgebra");
    assert!(is_subalgebra(&rd.br, &rd.f_minus), "f_- is not a subalgebra");
    (rd.f_plus.clone(), rd.f_minus.clone())
}

/// Is the subspace closed under the bracket?
pub fn is_subalgebra(br: &Brackets, v: &Subspace) -> bool {
    let rows = v.basis_rows();
    for (i, x) in rows.iter().enumerate() {
        for y in rows.iter().skip(i + 1) {
            if !v.contains_vec(&br.bracket_vec(x, y)) {
                return false;
            }
        }
    }
    true
}

/// The standard r-matrix for a simple Lie algebra with Borel data:
/// ½ Σ_ij (B⁻¹)_ij h_i ⊗ h_j + Σ_{α>0} f_α ⊗ e_α, where B is the Gram matrix
/// of the Cartan block. Its associated form is exactly the stored form, and
/// f_+ = b, f_− = b_−.
pub fn standard_r(g: &LieAlgebra) -> Result<Factorizable, RmatError> {
    let n = g.dim;
    let r = g.rank();
    let p = g.num_positive();
    let binv = g.h_gram.inverse();
    let mut c = Matrix::zero(n, n);
    for i in 0..r {
        for j in 0..r {
            c.set(i, j, binv.at(i, j) * ratio(1, 2));
        }
    }
    for a in 0..p {
        c.set(g.idx_f(a), g.idx_e(a), rat(1));
    }
    let fd = Factorizable::new(g.br.clone(), RTensor::new(c))?;
    debug_assert_eq!(fd.form, g.form, "associated form must equal the stored form");
    Ok(fd)
}

/// The standard r-matrix for the invariant form rescaled by a nonzero
/// rational: r ↦ r/λ. All derived subspaces (f_±, l_r) and therefore all
/// dimension outputs are unchanged; only the form scales.
pub fn standard_r_scaled(g: &LieAlgebra, scale: &Rational) -> Result<Factorizable, RmatError> {
    assert!(!scale.is_zero(), "form scale must be nonzero");
    let base = standard_r(g)?;
    let c = base.r.coeffs.scale(&scale.recip());
    Factorizable::new(g.br.clone(), RTensor::new(c))
}

/// Helper for slot bookkeeping on n-fold direct sums.
#[derive(Clone, Copy, Debug)]
pub struct Slots {
    pub base: usize,
    pub count: usize,
}

impl Slots {
    pub fn new(base: usize, count: usize) -> Self {
        Slots { base, count }
    }

    pub fn dim(&self) -> usize {
        self.base * self.count
    }

    pub fn offset(&self, slot: usize) -> usize {
        assert!(slot < self.count, "slot out of range");
        slot * self.base
    }

    /// Embeds a base vector into one slot.
    pub fn embed(&self, slot: usize, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.base);
        let mut out = vec![Rational::zero(); self.dim()];
        out[self.offset(slot)..self.offset(slot) + self.base].clone_from_slice(v);
        out
    }

    /// Extracts one slot of a product vector.
    pub fn extract(&self, slot: usize, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.dim());
        v[self.offset(slot)..self.offset(slot) + self.base].to_vec()
    }

    /// Subspace placed in one slot (zero elsewhere).
    pub fn slot_subspace(&self, slot: usize, v: &Subspace) -> Subspace {
        let vecs = v.basis_rows().into_iter().map(|row| self.embed(slot, &row)).collect();
        Subspace::from_spanning(self.dim(), vecs)
    }

    /// Graph {(x in slot a, M·x in slot b) : x ∈ domain}.
    pub fn graph_subspace(
        &self,
        slot_a: usize,
        slot_b: usize,
        m: &Matrix,
        domain: &Subspace,
    ) -> Subspace {
        assert_ne!(slot_a, slot_b);
        let vecs = domain
            .basis_rows()
            .into_iter()
            .map(|row| {
                let mut out = self.embed(slot_a, &row);
                let img = m.mul_vec(&row);
                let off = self.offset(slot_b);
                for (k, val) in img.into_iter().enumerate() {
                    out[off + k] = val;
                }
                out
            })
            .collect();
        Subspace::from_spanning(self.dim(), vecs)
    }

    /// Block-diagonal matrix acting slotwise.
    pub fn block_diag(&self, per_slot: &[&Matrix]) -> Matrix {
        assert_eq!(per_slot.len(), self.count);
        Matrix::block_diag(per_slot)
    }

    /// Fully diagonal subspace {(x, x, ..., x)} over a base subspace.
    pub fn diagonal_subspace(&self, base_space: &Subspace) -> Subspace {
        let vecs = base_space
            .basis_rows()
            .into_iter()
            .map(|row| {
                let mut out = vec![Rational::zero(); self.dim()];
                for slot in 0..self.count {
                    let off = self.offset(slot);
                    for (k, val) in row.iter().enumerate() {
                        out[off + k] = val.clone();
                    }
                }
                out
            })
            .collect();
        Subspace::from_spanning(self.dim(), vecs)
    }
}

/// The mixed-product r-matrix on g^n: r in odd slots, −r^21 in even slots,
/// and −Σ_{j<k} Σ_i (y_i)_j ∧ (x_i)_k across slots, with a∧b = a⊗b − b⊗a.
/// Its symmetric part is (s, −s, s, −s, ...) blockwise, so it stays
/// factorizable, with associated form (⟨,⟩, −⟨,⟩, ⟨,⟩, ...).
pub fn mixed_product(rd: &Factorizable, n: usize) -> Result<Factorizable, RmatError> {
    assert!(n >= 1);
    let c = mixed_product_coeffs(&rd.r, n);
    let parts: Vec<&Brackets> = std::iter::repeat(&rd.br).take(n).collect();
    let br = Brackets::direct_sum(&parts);
    Factorizable::new(br, RTensor::new(c))
}

fn mixed_product_coeffs(r: &RTensor, n: usize) -> Matrix {
    let d = r.dim();
    let slots = Slots::new(d, n);
    let mut c = Matrix::zero(slots.dim(), slots.dim());
    let ct = r.coeffs.transpose();
    for j in 0..n {
        let off = slots.offset(j);
        // Slots are 1-indexed in the parity rule: 0-based slot j is "odd"
        // when j is even.
        let block = if j % 2 == 0 { &r.coeffs } else { &ct };
        let sign = if j % 2 == 0 { rat(1) } else { rat(-1) };
        for a in 0..d {
            for b in 0..d {
                let v = block.at(a, b);
                if !v.is_zero() {
                    c.set(off + a, off + b, v * &sign);
                }
            }
        }
    }
    // Cross terms: −Σ_{j<k} Σ_ab C_ab [(x_b)_j ⊗ (x_a)_k − (x_a)_k ⊗ (x_b)_j].
    for j in 0..n {
        for k in (j + 1)..n {
            let (oj, ok) = (slots.offset(j), slots.offset(k));
            for a in 0..d {
                for b in 0..d {
                    let v = r.coeffs.at(a, b);
                    if v.is_zero() {
                        continue;
                    }
                    let cur = c.at(oj + b, ok + a) - v;
                    c.set(oj + b, ok + a, cur);
                    let cur = c.at(ok + a, oj + b) + v;
                    c.set(ok + a, oj + b, cur);
                }
            }
        }
    }
    c
}

/// The direct-sum extension of the mixed product to g^{n+1}:
/// (r^(n), 0) + (0, r^21) when n is even, (r^(n), 0) + (0, −r) when n is odd.
pub fn extended_mixed_product(rd: &Factorizable, n: usize) -> Result<Factorizable, RmatError> {
    assert!(n >= 1);
    let d = rd.dim();
    let base = mixed_product_coeffs(&rd.r, n);
    let last = if n % 2 == 0 { rd.r.coeffs.transpose() } else { rd.r.coeffs.neg() };
    let mut c = Matrix::zero(d * (n + 1), d * (n + 1));
    for i in 0..base.rows() {
        for j in 0..base.cols() {
            let v = base.at(i, j);
            if !v.is_zero() {
                c.set(i, j, v.clone());
            }
        }
    }
    let off = d * n;
    for a in 0..d {
        for b in 0..d {
            let v = last.at(a, b);
            if !v.is_zero() {
                c.set(off + a, off + b, v.clone());
            }
        }
    }
    let parts: Vec<&Brackets> = std::iter::repeat(&rd.br).take(n + 1).collect();
    let br = Brackets::direct_sum(&parts);
    Factorizable::new(br, RTensor::new(c))
}

/// The expected images of r̃♭_± for the mixed product on g^n:
/// even n = 2m: f̃_+ = {(a, d_1, d_1, ..., d_{m−1}, d_{m−1}, b) : (a,b) ∈ l_r},
///              f̃_− = {(d_1, d_1, ..., d_m, d_m)};
/// odd n = 2m+1: f̃_+ = f_+ ⊕ diagonal pairs, f̃_− = diagonal pairs ⊕ f_−.
pub fn expected_mixed_images(rd: &Factorizable, n: usize) -> (Subspace, Subspace) {
    let d = rd.dim();
    let slots = Slots::new(d, n);
    let full = Subspace::full(d);
    let mut plus_vecs: Vec<Vec<Rational>> = Vec::new();
    let mut minus_vecs: Vec<Vec<Rational>> = Vec::new();
    if n % 2 == 0 {
        let m = n / 2;
        for row in rd.l_r.basis_rows() {
            let a = row[0..d].to_vec();
            let b = row[d..2 * d].to_vec();
            let mut v = slots.embed(0, &a);
            let tail = slots.embed(n - 1, &b);
            for (k, val) in tail.into_iter().enumerate() {
                if !val.is_zero() {
                    v[k] = val;
                }
            }
            plus_vecs.push(v);
        }
        for pair in 0..m.saturating_sub(1) {
            let g = slots.graph_subspace(2 * pair + 1, 2 * pair + 2, &Matrix::identity(d), &full);
            plus_vecs.extend(g.basis_rows());
        }
        for pair in 0..m {
            let g = slots.graph_subspace(2 * pair, 2 * pair + 1, &Matrix::identity(d), &full);
            minus_vecs.extend(g.basis_rows());
        }
    } else {
        let m = (n - 1) / 2;
        plus_vecs.extend(slots.slot_subspace(0, &rd.f_plus).basis_rows());
        for pair in 0..m {
            let g = slots.graph_subspace(2 * pair + 1, 2 * pair + 2, &Matrix::identity(d), &full);
            plus_vecs.extend(g.basis_rows());
        }
        for pair in 0..m {
            let g = slots.graph_subspace(2 * pair, 2 * pair + 1, &Matrix::identity(d), &full);
            minus_vecs.extend(g.basis_rows());
        }
        minus_vecs.extend(slots.slot_subspace(n - 1, &rd.f_minus).basis_rows());
    }
    (
        Subspace::from_spanning(slots.dim(), plus_vecs),
        Subspace::from_spanning(slots.dim(), minus_vecs),
    )
}
