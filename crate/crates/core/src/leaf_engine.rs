//! Orbit-intersection analysis for Poisson structures defined by
//! factorizable quasitriangular r-matrices: Lagrangian pairs attached to
//! points of a homogeneous space, the admissibility integer δ, leaf
//! stabilizers inside t = m_+ ∩ m_−, and symplectic ranks — each computed by
//! two independent routes that must agree.

use crate::exactlin::{Matrix, Rational, Subspace};
use crate::lie_core::Brackets;
use crate::rmat::{Factorizable, Slots};
#[cfg(test)]
use crate::rmat::is_subalgebra;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("f_{0} is not contained in m_{0}")]
    ImageNotContained(char),
    #[error("[m_{0}, m_{0}] is not contained in m_{0}^perp")]
    MNotCoisotropicSquare(char),
    #[error("m_+ + m_- is not the whole algebra")]
    MSumNotFull,
    #[error("stabilizer subalgebra violates [q,q] ⊆ q^perp ⊆ q")]
    BadStabilizer,
    #[error("c is not a complement of q^perp in q")]
    BadChartComplement,
    #[error("translation does not normalize the chart complement c")]
    ChartNotNormalized,
    #[error("pair is not Lagrangian: inconsistent inputs")]
    NotLagrangian,
    #[error("rank computation produced a negative value: inconsistent orbit dimension")]
    NegativeRank,
    #[error("the two computation routes disagree: {0}")]
    RouteMismatch(&'static str),
}

/// A six-tuple worth of linear data: a factorizable r-matrix on the ambient
/// algebra, an r-admissible pair (m_+, m_−), the stabilizer subalgebra q of a
/// base point with [q,q] ⊆ q^⊥ ⊆ q, and a chart complement c with q = c ⊕ q^⊥.
#[derive(Clone)]
pub struct AdmissibleSetup {
    pub rd: Factorizable,
    pub m_plus: Subspace,
    pub m_minus: Subspace,
    pub m_plus_perp: Subspace,
    pub m_minus_perp: Subspace,
    pub q: Subspace,
    pub q_perp: Subspace,
    /// t = m_+ ∩ m_−.
    pub t: Subspace,
    pub c: Subspace,
    /// Projection onto c along c^⊥ (form-orthogonal).
    p_c: Matrix,
}

impl AdmissibleSetup {
    /// Validates r-admissibility of (m_+, m_−), the coisotropy chain of q,
    /// and the chart decomposition q = c ⊕ q^⊥. Construction fails loudly on
    /// any violation: the downstream quantities are meaningless without them.
    pub fn new(
        rd: Factorizable,
        m_plus: Subspace,
        m_minus: Subspace,
        q: Subspace,
        c: Subspace,
    ) -> Result<AdmissibleSetup, EngineError> {
        let form = &rd.form;
        if !m_plus.contains(&rd.f_plus) {
            return Err(EngineError::ImageNotContained('+'));
        }
        if !m_minus.contains(&rd.f_minus) {
            return Err(EngineError::ImageNotContained('-'));
        }
        let m_plus_perp = m_plus.perp(form);
        let m_minus_perp = m_minus.perp(form);
        if !bracket_lands_in(&rd.br, &m_plus, &m_plus_perp) {
            return Err(EngineError::MNotCoisotropicSquare('+'));
        }
        if !bracket_lands_in(&rd.br, &m_minus, &m_minus_perp) {
            return Err(EngineError::MNotCoisotropicSquare('-'));
        }
        if !m_plus.sum(&m_minus).is_full() {
            return Err(EngineError::MSumNotFull);
        }
        let q_perp = q.perp(form);
        if !q.contains(&q_perp) || !bracket_lands_in(&rd.br, &q, &q_perp) {
            return Err(EngineError::BadStabilizer);
        }
        if !c.intersect(&q_perp).is_zero() || c.sum(&q_perp) != q {
            return Err(EngineError::BadChartComplement);
        }
        let t = m_plus.intersect(&m_minus);
        let p_c = orthogonal_projection(&c, form);
        Ok(AdmissibleSetup {
            rd,
            m_plus,
            m_minus,
            m_plus_perp,
            m_minus_perp,
            q,
            q_perp,
            t,
            c,
            p_c,
        })
    }

    pub fn dim(&self) -> usize {
        self.rd.dim()
    }

    pub fn p_c_apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.p_c.mul_vec(v)
    }

    /// p_t on m_+ ⊕ m_− as a dim × 2·dim matrix: (x1, x2) ↦ −r♭_−x1 + r♭_+x2.
    fn pair_projection_matrix(&self) -> Matrix {
        self.rd.rb_minus.neg().augment(&self.rd.rb_plus)
    }

    /// The Lagrangian pair at the base point itself.
    pub fn base_pair(&self) -> LeafPair {
        self.diagonal_pair(&Matrix::identity(self.dim()))
    }

    /// Diagonal pair at the translated point y = ad(base):
    /// l_{y,y} = {(x1,x2) ∈ q_y ⊕ q_y : x1 − x2 ∈ q_y^⊥} = diag(q_y) + (0 ⊕ q_y^⊥).
    /// Works for any form-preserving translation.
    pub fn diagonal_pair(&self, ad: &Matrix) -> LeafPair {
        let q_y = self.q.map_image(ad);
        let q_y_perp = self.q_perp.map_image(ad);
        debug_assert_eq!(q_y.perp(&self.rd.form), q_y_perp, "translation must preserve the form");
        let n = self.dim();
        let slots = Slots::new(n, 2);
        let diag = slots.graph_subspace(0, 1, &Matrix::identity(n), &q_y);
        let tail = slots.slot_subspace(1, &q_y_perp);
        let lagrangian = diag.sum(&tail);
        LeafPair { q_plus: q_y.clone(), q_minus: q_y, lagrangian }
    }

    /// Chart pair at points translated by c-normalizing elements:
    /// l = {(x_+, x_−) ∈ q_+ ⊕ q_− : p_c(x_+) = Ad_{g_+ g_−^{-1}} p_c(x_−)}.
    pub fn chart_pair(&self, ad_plus: &Matrix, ad_minus: &Matrix) -> Result<LeafPair, EngineError> {
        for ad in [ad_plus, ad_minus] {
            if self.c.map_image(ad) != self.c {
                return Err(EngineError::ChartNotNormalized);
            }
        }
        let q_plus = self.q.map_image(ad_plus);
        let q_minus = self.q.map_image(ad_minus);
        let transport = ad_plus.mul(&ad_minus.inverse());
        // Parametrize (a, b) over the two bases and solve the chart constraint.
        let bp = q_plus.basis().transpose(); // dim × k_+
        let bm = q_minus.basis().transpose();
        let lhs = self.p_c.mul(&bp);
        let rhs = transport.mul(&self.p_c).mul(&bm);
        let system = lhs.augment(&rhs.neg());
        let ker = system.kernel();
        let kp = q_plus.dim();
        let n = self.dim();
        let vecs = ker
            .basis_rows()
            .into_iter()
            .map(|row| {
                let mut out = vec![Rational::zero(); 2 * n];
                let xp = bp.mul_vec(&row[0..kp]);
                let xm = bm.mul_vec(&row[kp..]);
                out[0..n].clone_from_slice(&xp);
                out[n..].clone_from_slice(&xm);
                out
            })
            .collect();
        let lagrangian = Subspace::from_spanning(2 * n, vecs);
        let pair = LeafPair { q_plus, q_minus, lagrangian };
        if !pair.is_lagrangian(self) {
            return Err(EngineError::NotLagrangian);
        }
        Ok(pair)
    }
}

fn bracket_lands_in(br: &Brackets, v: &Subspace, target: &Subspace) -> bool {
    let rows = v.basis_rows();
    for (i, x) in rows.iter().enumerate() {
        for y in rows.iter().skip(i) {
            if !target.contains_vec(&br.bracket_vec(x, y)) {
                return false;
            }
        }
    }
    true
}

/// Form-orthogonal projection onto a subspace on which the form restricts
/// nondegenerately: x ↦ Σ (B⁻¹)_ij ⟨x, c_j⟩ c_i, B the Gram matrix on c.
fn orthogonal_projection(c: &Subspace, form: &Matrix) -> Matrix {
    let n = c.ambient_dim();
    if c.dim() == 0 {
        return Matrix::zero(n, n);
    }
    let basis = c.basis(); // k × n
    let gram = basis.mul(form).mul(&basis.transpose());
    let ginv = gram.inverse();
    basis.transpose().mul(&ginv).mul(&basis).mul(form)
}

/// The pair of translated stabilizers at (y_+, y_−) and the Lagrangian
/// subalgebra l_{y_+,y_−} of the doubled ambient algebra.
#[derive(Clone)]
pub struct LeafPair {
    pub q_plus: Subspace,
    pub q_minus: Subspace,
    pub lagrangian: Subspace,
}

impl LeafPair {
    /// Translate the pair by (ad_+, ad_−), e.g. to another representative
    /// pair of the same orbit pair.
    pub fn translated(&self, ad_plus: &Matrix, ad_minus: &Matrix) -> LeafPair {
        let block = Matrix::block_diag(&[ad_plus, ad_minus]);
        LeafPair {
            q_plus: self.q_plus.map_image(ad_plus),
            q_minus: self.q_minus.map_image(ad_minus),
            lagrangian: self.lagrangian.map_image(&block),
        }
    }

    /// l = l^⊥ under ⟨(x1,x2),(y1,y2)⟩ = ⟨x1,y1⟩ − ⟨x2,y2⟩.
    pub fn is_lagrangian(&self, setup: &AdmissibleSetup) -> bool {
        self.lagrangian.perp(&setup.rd.double_form()) == self.lagrangian
    }
}

/// δ via the Lagrangian route: dim p_+((m_+^⊥ ⊕ m_−^⊥) ∩ l_{y_+,y_−}), where
/// p_+ is the projection to q_+/q_+^⊥, computed chart-free as
/// dim(S_1 + q_+^⊥) − dim q_+^⊥ with S_1 the first-component image.
pub fn delta_via_lagrangian(setup: &AdmissibleSetup, pair: &LeafPair) -> usize {
    let n = setup.dim();
    let slots = Slots::new(n, 2);
    let perp_block =
        slots.slot_subspace(0, &setup.m_plus_perp).sum(&slots.slot_subspace(1, &setup.m_minus_perp));
    let cut = perp_block.intersect(&pair.lagrangian);
    let first: Vec<Vec<Rational>> =
        cut.basis_rows().into_iter().map(|row| row[0..n].to_vec()).collect();
    let s1 = Subspace::from_spanning(n, first);
    let q_plus_perp = pair.q_plus.perp(&setup.rd.form);
    s1.sum(&q_plus_perp).dim() - q_plus_perp.dim()
}

/// δ via transported intersections at the base point:
/// dim((Ad_{g_+}^{-1} m_+^⊥ ∩ q + q^⊥) ∩ (Ad_{g_−}^{-1} m_−^⊥ ∩ q + q^⊥)) − dim q^⊥.
pub fn delta_via_transport(setup: &AdmissibleSetup, ad_plus: &Matrix, ad_minus: &Matrix) -> usize {
    let wp = setup
        .m_plus_perp
        .map_image(&ad_plus.inverse())
        .intersect(&setup.q)
        .sum(&setup.q_perp);
    let wm = setup
        .m_minus_perp
        .map_image(&ad_minus.inverse())
        .intersect(&setup.q)
        .sum(&setup.q_perp);
    wp.intersect(&wm).dim() - setup.q_perp.dim()
}

/// Leaf stabilizer t_{O_+,O_−} = p_t((m_+ ⊕ m_−) ∩ l_{y_+,y_−}) ⊆ t.
pub fn stabilizer_via_lagrangian(setup: &AdmissibleSetup, pair: &LeafPair) -> Subspace {
    let n = setup.dim();
    let slots = Slots::new(n, 2);
    let m_block =
        slots.slot_subspace(0, &setup.m_plus).sum(&slots.slot_subspace(1, &setup.m_minus));
    let cut = m_block.intersect(&pair.lagrangian);
    let image = cut.map_image(&setup.pair_projection_matrix());
    assert!(setup.t.contains(&image), "p_t image escaped t = m_+ ∩ m_-");
    image
}

/// For a diagonal pair: {x ∈ t : (x, x) ∈ l_r + l_{y,y}}, the Drinfeld-style
/// description of the leaf stabilizer. Must agree with the p_t route.
pub fn stabilizer_via_drinfeld(setup: &AdmissibleSetup, pair: &LeafPair) -> Subspace {
    let n = setup.dim();
    let sum = setup.rd.l_r.sum(&pair.lagrangian);
    let diag = Matrix::identity(n).stack(&Matrix::identity(n));
    sum.preimage(&diag).intersect(&setup.t)
}

/// Symplectic rank at a point, by both routes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankAtPoint {
    pub via_lagrangian: usize,
    pub via_corank: usize,
}

impl RankAtPoint {
    pub fn agreed(&self) -> Result<usize, EngineError> {
        if self.via_lagrangian != self.via_corank {
            return Err(EngineError::RouteMismatch("rank routes"));
        }
        Ok(self.via_lagrangian)
    }
}

/// Rank of the Poisson structure at the point of a diagonal pair:
/// orbit_dim − dim(l_r ∩ l_{y,y}), cross-checked against
/// orbit_dim − dim(q_y^⊥ ∩ (r♭_+)^{-1}(q_y)).
pub fn rank_at_point(
    setup: &AdmissibleSetup,
    pair: &LeafPair,
    orbit_dim: usize,
) -> Result<RankAtPoint, EngineError> {
    let cut = setup.rd.l_r.intersect(&pair.lagrangian).dim();
    if cut > orbit_dim {
        return Err(EngineError::NegativeRank);
    }
    let q_y = &pair.q_plus;
    let q_y_perp = q_y.perp(&setup.rd.form);
    let pre = q_y.preimage(&setup.rd.rb_plus);
    let corank = q_y_perp.intersect(&pre).dim();
    if corank > orbit_dim {
        return Err(EngineError::NegativeRank);
    }
    Ok(RankAtPoint { via_lagrangian: orbit_dim - cut, via_corank: orbit_dim - corank })
}

/// V_c for the quotient-chain spaces:
/// {(x_+, x_−) ∈ (m_+ ∩ Ad_{c_1} q) ⊕ (m_− ∩ Ad_{c_{n+1}} q) :
///  p_c(x_+) = Ad_{c_1 ⋯ c_n c_{n+1}^{-1}}(p_c(x_−))},
/// a subspace of g ⊕ g over the base setup.
pub fn vc_subspace_zn(setup: &AdmissibleSetup, ads: &[Matrix]) -> Subspace {
    assert!(ads.len() >= 2, "need Ad matrices for c_1..c_n+1");
    let n = setup.dim();
    let v1 = setup.m_plus.intersect(&setup.q.map_image(&ads[0]));
    let v2 = setup.m_minus.intersect(&setup.q.map_image(&ads[ads.len() - 1]));
    let mut transport = Matrix::identity(n);
    for ad in &ads[..ads.len() - 1] {
        transport = transport.mul(ad);
    }
    transport = transport.mul(&ads[ads.len() - 1].inverse());
    solve_chart_pair(setup, &v1, &v2, &transport)
}

fn solve_chart_pair(
    setup: &AdmissibleSetup,
    v1: &Subspace,
    v2: &Subspace,
    transport: &Matrix,
) -> Subspace {
    let n = setup.dim();
    let b1 = v1.basis().transpose();
    let b2 = v2.basis().transpose();
    let lhs = setup.p_c.mul(&b1);
    let rhs = transport.mul(&setup.p_c).mul(&b2);
    let ker = lhs.augment(&rhs.neg()).kernel();
    let k1 = v1.dim();
    let vecs = ker
        .basis_rows()
        .into_iter()
        .map(|row| {
            let mut out = vec![Rational::zero(); 2 * n];
            out[0..n].clone_from_slice(&b1.mul_vec(&row[0..k1]));
            out[n..].clone_from_slice(&b2.mul_vec(&row[k1..]));
            out
        })
        .collect();
    Subspace::from_spanning(2 * n, vecs)
}

/// Leaf stabilizer p_t(V_c) ⊆ t for the quotient-chain spaces.
pub fn vc_stabilizer_zn(setup: &AdmissibleSetup, ads: &[Matrix]) -> Subspace {
    let vc = vc_subspace_zn(setup, ads);
    let image = vc.map_image(&setup.pair_projection_matrix());
    assert!(setup.t.contains(&image));
    image
}

/// V_c for the group-tail spaces, as quadruples
/// (x_+, x_−, z_+, Ad_{c_{n+1}^{-1}} x_−) in g⁴ with
/// x_+ ∈ m_+ ∩ Ad_{c_1} q, x_− ∈ m_− ∩ Ad_{c_{n+1}} m_−,
/// z_+ ∈ m_+ ∩ Ad_{c_n^{-1}} q and p_c(x_+) = Ad_{c_1⋯c_n}(p_c(z_+)).
pub fn vc_subspace_dn(setup: &AdmissibleSetup, ads: &[Matrix]) -> Subspace {
    assert!(ads.len() >= 2, "need Ad matrices for c_1..c_n+1");
    let n = setup.dim();
    let last = &ads[ads.len() - 1];
    let v_plus = setup.m_plus.intersect(&setup.q.map_image(&ads[0]));
    let v_minus = setup.m_minus.intersect(&setup.m_minus.map_image(last));
    let v_z = setup
        .m_plus
        .intersect(&setup.q.map_image(&ads[ads.len() - 2].inverse()));
    let mut transport = Matrix::identity(n);
    for ad in &ads[..ads.len() - 1] {
        transport = transport.mul(ad);
    }
    // Parametrize (a, b, c) and solve p_c(x_+) − Ad_{c_1..c_n} p_c(z_+) = 0.
    let bp = v_plus.basis().transpose();
    let bm = v_minus.basis().transpose();
    let bz = v_z.basis().transpose();
    let lhs = setup.p_c.mul(&bp);
    let rhs = transport.mul(&setup.p_c).mul(&bz);
    let zero_mid = Matrix::zero(n, v_minus.dim());
    let system = lhs.augment(&zero_mid).augment(&rhs.neg());
    let ker = system.kernel();
    let (kp, km) = (v_plus.dim(), v_minus.dim());
    let last_inv = last.inverse();
    let vecs = ker
        .basis_rows()
        .into_iter()
        .map(|row| {
            let xp = bp.mul_vec(&row[0..kp]);
            let xm = bm.mul_vec(&row[kp..kp + km]);
            let zp = bz.mul_vec(&row[kp + km..]);
            let wm = last_inv.mul_vec(&xm);
            let mut out = vec![Rational::zero(); 4 * n];
            out[0..n].clone_from_slice(&xp);
            out[n..2 * n].clone_from_slice(&xm);
            out[2 * n..3 * n].clone_from_slice(&zp);
            out[3 * n..].clone_from_slice(&wm);
            out
        })
        .collect();
    Subspace::from_spanning(4 * n, vecs)
}

/// Stabilizers for the group-tail spaces: the two-sided torus stabilizer
/// (p_t ⊕ p_t)(V_c) ⊆ t ⊕ t and its restriction {x : (x, 0) ∈ ·} to the
/// one-sided torus action.
pub fn vc_stabilizer_dn(setup: &AdmissibleSetup, ads: &[Matrix]) -> (Subspace, Subspace) {
    let n = setup.dim();
    let vc = vc_subspace_dn(setup, ads);
    let proj = setup.pair_projection_matrix();
    let vecs: Vec<Vec<Rational>> = vc
        .basis_rows()
        .into_iter()
        .map(|row| {
            let t1 = proj.mul_vec(&row[0..2 * n]);
            let t2 = proj.mul_vec(&row[2 * n..]);
            let mut out = t1;
            out.extend(t2);
            out
        })
        .collect();
    let both = Subspace::from_spanning(2 * n, vecs);
    // Restriction to the first torus factor: {x : (x, 0) ∈ both}.
    let zero_tail = Slots::new(n, 2).slot_subspace(0, &Subspace::full(n));
    let cut = both.intersect(&zero_tail);
    let firsts: Vec<Vec<Rational>> =
        cut.basis_rows().into_iter().map(|row| row[0..n].to_vec()).collect();
    let restricted = Subspace::from_spanning(n, firsts);
    (both, restricted)
}

/// Which kind of chain space a product setup models.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ProductKind {
    /// (G/Q)^n, the image of the quotient chain ending in /Q.
    Quotients,
    /// (G/Q)^{n−1} × G, the image of the chain with a free group tail.
    GroupTail,
}

/// The product six-tuple built from a base setup: the mixed-product r-matrix
/// on (g')^N, the parity-patterned pair (m̃_+, m̃_−), the base-point stabilizer
/// q̃ and chart c̃.
pub struct ProductSetup {
    pub kind: ProductKind,
    pub n: usize,
    pub slots: Slots,
    pub setup: AdmissibleSetup,
    pub orbit_dim: usize,
}

impl ProductSetup {
    /// Builds the product setup over a base AdmissibleSetup with
    /// q = m_+ (the quotient subgroup is M_+ itself in all four series).
    pub fn build(base: &AdmissibleSetup, kind: ProductKind, n: usize) -> Result<Self, EngineError> {
        assert!(n >= 1);
        let d = base.dim();
        let num_slots = match kind {
            ProductKind::Quotients => n,
            ProductKind::GroupTail => n + 1,
        };
        let slots = Slots::new(d, num_slots);
        let rd = match kind {
            ProductKind::Quotients => crate::rmat::mixed_product(&base.rd, n),
            ProductKind::GroupTail => crate::rmat::extended_mixed_product(&base.rd, n),
        }
        .expect("mixed products of factorizable r-matrices stay factorizable");
        let full = Subspace::full(d);
        let ident = Matrix::identity(d);

        // m̃_±: parity patterns of m_±-slots and diagonal pairs.
        let m = n / 2;
        let mut plus_parts: Vec<Subspace> = Vec::new();
        let mut minus_parts: Vec<Subspace> = Vec::new();
        if n % 2 == 0 {
            plus_parts.push(slots.slot_subspace(0, &base.m_plus));
            for k in 0..m.saturating_sub(1) {
                plus_parts.push(slots.graph_subspace(2 * k + 1, 2 * k + 2, &ident, &full));
            }
            plus_parts.push(slots.slot_subspace(n - 1, &base.m_minus));
            for k in 0..m {
                minus_parts.push(slots.graph_subspace(2 * k, 2 * k + 1, &ident, &full));
            }
        } else {
            plus_parts.push(slots.slot_subspace(0, &base.m_plus));
            for k in 0..m {
                plus_parts.push(slots.graph_subspace(2 * k + 1, 2 * k + 2, &ident, &full));
            }
            for k in 0..m {
                minus_parts.push(slots.graph_subspace(2 * k, 2 * k + 1, &ident, &full));
            }
            minus_parts.push(slots.slot_subspace(n - 1, &base.m_minus));
        }
        if kind == ProductKind::GroupTail {
            // Extra factor: M_− then M_+ for even n, M_+ then M_− for odd n.
            if n % 2 == 0 {
                plus_parts.push(slots.slot_subspace(n, &base.m_minus));
                minus_parts.push(slots.slot_subspace(n, &base.m_plus));
            } else {
                plus_parts.push(slots.slot_subspace(n, &base.m_plus));
                minus_parts.push(slots.slot_subspace(n, &base.m_minus));
            }
        }
        let join = |parts: Vec<Subspace>| {
            parts
                .into_iter()
                .fold(Subspace::zero(slots.dim()), |acc, p| acc.sum(&p))
        };
        let m_plus = join(plus_parts);
        let m_minus = join(minus_parts);

        // Base-point stabilizer q̃ and chart c̃.
        let (q, c, orbit_dim) = match kind {
            ProductKind::Quotients => {
                let mut qt = Subspace::zero(slots.dim());
                let mut ct = Subspace::zero(slots.dim());
                for j in 0..n {
                    qt = qt.sum(&slots.slot_subspace(j, &base.q));
                    ct = ct.sum(&slots.slot_subspace(j, &base.c));
                }
                (qt, ct, n * (d - base.q.dim()))
            }
            ProductKind::GroupTail => {
                let mut qt = Subspace::zero(slots.dim());
                let mut ct = Subspace::zero(slots.dim());
                for j in 0..n.saturating_sub(1) {
                    qt = qt.sum(&slots.slot_subspace(j, &base.q));
                    ct = ct.sum(&slots.slot_subspace(j, &base.c));
                }
                qt = qt.sum(&slots.graph_subspace(n - 1, n, &ident, &full));
                ((qt), ct, (n - 1) * (d - base.q.dim()) + d)
            }
        };
        let setup = AdmissibleSetup::new(rd, m_plus, m_minus, q, c)?;
        Ok(ProductSetup { kind, n, slots, setup, orbit_dim })
    }

    /// Slotwise block-diagonal Ad matrix from per-slot translations.
    pub fn slot_ad(&self, per_slot: &[&Matrix]) -> Matrix {
        self.slots.block_diag(per_slot)
    }

    /// Extracts the (t_1, t_2) torus values of an ambient vector assumed to
    /// lie in t̃: t_1 from slot 0, and t_2 from the tail slot for group-tail
    /// setups (t_2 = t_1 for quotient setups).
    pub fn torus_components(&self, v: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let t1 = self.slots.extract(0, v);
        let t2 = match self.kind {
            ProductKind::Quotients => t1.clone(),
            ProductKind::GroupTail => self.slots.extract(self.n, v),
        };
        (t1, t2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;
    use crate::lie_core::{LieAlgebra, RootSystem};
    use crate::rmat::standard_r;
    use crate::weyl::WeylGroup;

    fn base_setup(label: &str) -> (LieAlgebra, AdmissibleSetup) {
        let g = LieAlgebra::build(&RootSystem::build(label).unwrap());
        let rd = standard_r(&g).unwrap();
        let setup = AdmissibleSetup::new(
            rd,
            g.borel_pos.clone(),
            g.borel_neg.clone(),
            g.borel_pos.clone(),
            g.cartan.clone(),
        )
        .unwrap();
        (g, setup)
    }

    fn weyl_ad(g: &LieAlgebra, w: &WeylGroup, x: crate::weyl::WeylElement) -> Matrix {
        let mut m = Matrix::identity(g.dim);
        for &i in w.word(x) {
            m = m.mul(&g.simple_reflection_ad(i));
        }
        m
    }

    #[test]
    fn setup_validation_rejects_bad_inputs() {
        let g = LieAlgebra::build(&RootSystem::build("A1").unwrap());
        let rd = standard_r(&g).unwrap();
        // m_+ not containing f_+ fails.
        let err = AdmissibleSetup::new(
            rd.clone(),
            g.cartan.clone(),
            g.borel_neg.clone(),
            g.borel_pos.clone(),
            g.cartan.clone(),
        );
        assert!(err.is_err());
        // c not complementing q^⊥ fails.
        let err = AdmissibleSetup::new(
            rd,
            g.borel_pos.clone(),
            g.borel_neg.clone(),
            g.borel_pos.clone(),
            g.nilpotent_pos.clone(),
        );
        assert!(err.is_err());
    }

    #[test]
    fn diagonal_pair_sl2_shape() {
        // q = b in sl2, c = h: l_{y,y} = {(x, x') ∈ b⊕b : x − x' ∈ n}, dim 3.
        let (g, setup) = base_setup("A1");
        let pair = setup.base_pair();
        assert_eq!(pair.lagrangian.dim(), 3);
        assert!(pair.is_lagrangian(&setup));
        for row in pair.lagrangian.basis_rows() {
            let x1 = &row[0..g.dim];
            let x2 = &row[g.dim..];
            assert!(setup.q.contains_vec(x1));
            assert!(setup.q.contains_vec(x2));
            let diff: Vec<Rational> = x1.iter().zip(x2).map(|(a, b)| a - b).collect();
            assert!(g.nilpotent_pos.contains_vec(&diff));
        }
    }

    #[test]
    fn lagrangian_pair_has_half_dimension() {
        for label in ["A1", "A2"] {
            let (g, setup) = base_setup(label);
            let w = WeylGroup::build(&g.rs);
            for x in w.all_elements() {
                let ad = weyl_ad(&g, &w, x);
                let pair = setup.chart_pair(&ad, &Matrix::identity(g.dim)).unwrap();
                assert_eq!(pair.lagrangian.dim(), g.dim, "{label}");
            }
        }
    }

    #[test]
    fn lagrangian_chart_free_when_c_zero() {
        // A group-tail setup with n = 1 has Lagrangian q̃, hence c = 0 and
        // l_{y_+,y_−} = q_+ ⊕ q_−.
        let (g, base) = base_setup("A1");
        let prod = ProductSetup::build(&base, ProductKind::GroupTail, 1).unwrap();
        assert!(prod.setup.c.is_zero());
        let w = WeylGroup::build(&g.rs);
        let s_ad = weyl_ad(&g, &w, w.generator(0));
        let amb = prod.slot_ad(&[&s_ad, &Matrix::identity(g.dim)]);
        let pair = prod.setup.chart_pair(&amb, &Matrix::identity(prod.slots.dim())).unwrap();
        let expect = {
            let s2 = Slots::new(prod.slots.dim(), 2);
            s2.slot_subspace(0, &prod.setup.q.map_image(&amb))
                .sum(&s2.slot_subspace(1, &prod.setup.q))
        };
        assert_eq!(pair.lagrangian, expect);
    }

    #[test]
    fn rank_at_flag_points() {
        // Flag variety of sl2: rank 0 everywhere on the 1-dimensional space.
        let (_, setup) = base_setup("A1");
        let pair = setup.base_pair();
        let rank = rank_at_point(&setup, &pair, 1).unwrap();
        assert_eq!(rank.via_lagrangian, 0);
        assert_eq!(rank.agreed().unwrap(), 0);
        // Flag variety of sl3: the translate by exp(f1)exp(f2)exp(f1) lies in
        // the big cell for the top word and the open opposite cell, so its
        // rank is 3 − dim ker(1 + w0) = 2. The longest-element point itself
        // sits in the zero-dimensional leaf and has rank 0.
        let (g, setup) = base_setup("A2");
        let w = WeylGroup::build(&g.rs);
        let f1 = g.basis_vec(g.idx_f(g.simple_root_pos(0)));
        let f2 = g.basis_vec(g.idx_f(g.simple_root_pos(1)));
        let ad = g.br.exp_ad(&f1).mul(&g.br.exp_ad(&f2)).mul(&g.br.exp_ad(&f1));
        let pair = setup.diagonal_pair(&ad);
        let rank = rank_at_point(&setup, &pair, 3).unwrap();
        assert_eq!(rank.agreed().unwrap(), 2);
        let ad0 = weyl_ad(&g, &w, w.longest_element());
        let pair0 = setup.diagonal_pair(&ad0);
        assert_eq!(rank_at_point(&setup, &pair0, 3).unwrap().agreed().unwrap(), 0);
    }

    #[test]
    fn delta_vanishes_for_flag_setups() {
        let (g, setup) = base_setup("A2");
        let w = WeylGroup::build(&g.rs);
        for u in w.all_elements() {
            for v in w.all_elements() {
                let ap = weyl_ad(&g, &w, u);
                let am = weyl_ad(&g, &w, v);
                let pair = setup.chart_pair(&ap, &am).unwrap();
                assert_eq!(delta_via_lagrangian(&setup, &pair), 0);
                assert_eq!(delta_via_transport(&setup, &ap, &am), 0);
            }
        }
    }

    #[test]
    fn stabilizer_matches_signed_endomorphism() {
        // Leaf stabilizers of the flag setup equal Im(1 + u w^{-1}) on h.
        let (g, setup) = base_setup("A2");
        let w = WeylGroup::build(&g.rs);
        for u in w.all_elements() {
            for v in w.all_elements() {
                let ap = weyl_ad(&g, &w, u);
                let am = weyl_ad(&g, &w, v);
                let pair = setup.chart_pair(&ap, &am).unwrap();
                let stab = stabilizer_via_lagrangian(&setup, &pair);
                // Convert: ambient t-vectors are Cartan vectors in coroot
                // coordinates; the simple-root chart rescales by d.
                let hvecs: Vec<Vec<Rational>> = stab
                    .basis_rows()
                    .into_iter()
                    .map(|row| {
                        let hpart = g.h_part(&row);
                        (0..g.rank()).map(|i| &hpart[i] / rat(g.rs.d[i])).collect()
                    })
                    .collect();
                let got = Subspace::from_spanning(g.rank(), hvecs);
                let op = w.multiply(u, w.inverse(v));
                let (_, expect) = w.signed_endomorphism(1, op);
                assert_eq!(got, expect, "u = {}, v = {}", w.render(u), w.render(v));
                // The diagonal Drinfeld route agrees on diagonal pairs.
                if u == v {
                    let diag = setup.diagonal_pair(&ap);
                    let s1 = stabilizer_via_lagrangian(&setup, &diag);
                    let s2 = stabilizer_via_drinfeld(&setup, &diag);
                    assert_eq!(s1, s2);
                }
            }
        }
    }

    #[test]
    fn vc_zn_identity_translations() {
        // With all c_i = identity, V_c = {(x_+, x_−) ∈ (m_+∩q) ⊕ (m_−∩q) :
        // p_c x_+ = p_c x_−} and the stabilizer is all of t.
        let (g, setup) = base_setup("A1");
        let ident = Matrix::identity(g.dim);
        let vc = vc_subspace_zn(&setup, &[ident.clone(), ident.clone()]);
        // m_+ ∩ q = b (dim 2), m_− ∩ q = h (dim 1), constraint kills one dim.
        assert_eq!(vc.dim(), 2);
        let stab = vc_stabilizer_zn(&setup, &[ident.clone(), ident]);
        assert_eq!(stab, setup.t);
    }

    #[test]
    fn vc_zn_matches_closed_form_stabilizer() {
        // Series-F leaf (u = s, w = e) over sl2: stabilizer Im(1 + s) = 0.
        let (g, setup) = base_setup("A1");
        let w = WeylGroup::build(&g.rs);
        let s_ad = weyl_ad(&g, &w, w.generator(0));
        let stab = vc_stabilizer_zn(&setup, &[s_ad, Matrix::identity(g.dim)]);
        assert!(stab.is_zero());
    }

    #[test]
    fn vc_dn_identity_and_reflection() {
        let (g, setup) = base_setup("A1");
        let w = WeylGroup::build(&g.rs);
        let s_ad = weyl_ad(&g, &w, w.generator(0));
        // c = (ṡ, ṡ): stabilizer of the one-sided torus action is
        // Im(1 − s s^{-1}) = 0; the two-sided stabilizer is the
        // anti-diagonal-free graph {(s(x)+s(y), x+y)} of dimension 1.. (rank 1 base).
        let (both, restricted) = vc_stabilizer_dn(&setup, &[s_ad.clone(), s_ad.clone()]);
        assert!(restricted.is_zero());
        assert_eq!(both.dim(), 1);
        // c = (ė, ė): stabilizer Im(1 − e) = 0 for the one-sided action,
        // and {(x+y, x+y)} has dimension 1 for the two-sided one.
        let ident = Matrix::identity(g.dim);
        let (both, restricted) = vc_stabilizer_dn(&setup, &[ident.clone(), ident]);
        assert!(restricted.is_zero());
        assert_eq!(both.dim(), 1);
    }

    #[test]
    fn product_setup_f2_validates() {
        let (g, base) = base_setup("A1");
        for n in 1..=3 {
            let prod = ProductSetup::build(&base, ProductKind::Quotients, n).unwrap();
            assert_eq!(prod.orbit_dim, n);
            assert!(is_subalgebra(&prod.setup.rd.br, &prod.setup.m_plus));
            assert!(is_subalgebra(&prod.setup.rd.br, &prod.setup.m_minus));
            // t̃ is the full diagonal of h.
            assert_eq!(prod.setup.t.dim(), g.rank());
        }
        for n in 1..=3 {
            let prod = ProductSetup::build(&base, ProductKind::GroupTail, n).unwrap();
            assert_eq!(prod.orbit_dim, (n - 1) + 3);
            assert_eq!(prod.setup.t.dim(), 2 * g.rank());
        }
    }
}
