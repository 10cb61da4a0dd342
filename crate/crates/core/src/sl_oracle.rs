//! Concrete matrix realization of sl_m / SL_m: a basis-matched copy of the
//! abstract type-A algebra, adjoint matrices of explicit group elements,
//! Bruhat-cell detection through minor ranks, conjugacy-class dimensions,
//! and seeded samplers producing verified points of prescribed leaf strata.

use crate::exactlin::{rat, Matrix, Rational};
use crate::lie_core::{LieAlgebra, RootSystem};
use crate::series::{LeafDescriptor, SeriesTag};
use crate::weyl::{WeylElement, WeylGroup};
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("matrix is singular or does not have determinant one")]
    NotUnimodular,
    #[error("sampling budget exhausted after {0} tries: stratum is likely empty or the seed is bad")]
    BudgetExhausted(usize),
    #[error("descriptor series/type not realizable by this oracle")]
    Unsupported,
}

/// An element of SL_m with exact rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub mat: Matrix,
}

impl GroupElement {
    pub fn new(mat: Matrix) -> Result<GroupElement, OracleError> {
        if mat.rows() != mat.cols() || det(&mat) != rat(1) {
            return Err(OracleError::NotUnimodular);
        }
        Ok(GroupElement { mat })
    }

    pub fn size(&self) -> usize {
        self.mat.rows()
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement { mat: self.mat.inverse() }
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        GroupElement { mat: self.mat.mul(&other.mat) }
    }
}

fn det(m: &Matrix) -> Rational {
    // Fraction-preserving Gaussian elimination with row swaps.
    let n = m.rows();
    let mut a = m.clone();
    let mut sign = rat(1);
    let mut result = rat(1);
    for c in 0..n {
        let pivot = (c..n).find(|&i| !a.at(i, c).is_zero());
        let Some(p) = pivot else { return rat(0) };
        if p != c {
            for j in 0..n {
                let tmp = a.at(p, j).clone();
                a.set(p, j, a.at(c, j).clone());
                a.set(c, j, tmp);
            }
            sign = -sign;
        }
        let piv = a.at(c, c).clone();
        result *= &piv;
        for i in (c + 1)..n {
            if a.at(i, c).is_zero() {
                continue;
            }
            let f = a.at(i, c) / &piv;
            for j in c..n {
                let v = a.at(i, j) - &f * a.at(c, j);
                a.set(i, j, v);
            }
        }
    }
    result * sign
}

/// A conjugacy class given by a representative; the dimension is
/// (m²−1) − dim ker(Ad_rep − id), computed exactly.
#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    pub rep: GroupElement,
    pub class_dim: usize,
}

/// The abstract type-A algebra together with its concrete sl_m realization:
/// e_{α_i} ↦ E_{i,i+1}, f_{α_i} ↦ E_{i+1,i}, higher root vectors matched by
/// iterated brackets against the abstract structure constants.
pub struct SlRealization {
    pub m: usize,
    pub g: LieAlgebra,
    pub wg: WeylGroup,
    /// Concrete m×m matrix of each abstract basis vector.
    pub basis_mats: Vec<Matrix>,
    /// Left inverse of the flattened basis map, for expressing traceless
    /// matrices in abstract coordinates.
    left_inv: Matrix,
    /// Permutation (as image vector) of each Weyl element's representative.
    perm_index: HashMap<Vec<usize>, WeylElement>,
}

fn unit_mat(m: usize, i: usize, j: usize) -> Matrix {
    let mut e = Matrix::zero(m, m);
    e.set(i, j, rat(1));
    e
}

fn comm(a: &Matrix, b: &Matrix) -> Matrix {
    a.mul(b).sub(&b.mul(a))
}

impl SlRealization {
    pub fn new(m: usize) -> SlRealization {
        assert!(m >= 2);
        let rs = RootSystem::build(&format!("A{}", m - 1)).unwrap();
        let g = LieAlgebra::build(&rs);
        let wg = WeylGroup::build(&rs);
        let r = rs.rank;
        let p = rs.num_positive();
        let mut basis_mats: Vec<Matrix> = vec![Matrix::zero(m, m); g.dim];
        for i in 0..r {
            basis_mats[g.idx_h(i)] =
                unit_mat(m, i, i).sub(&unit_mat(m, i + 1, i + 1));
        }
        for i in 0..r {
            let a = g.simple_root_pos(i);
            basis_mats[g.idx_e(a)] = unit_mat(m, i, i + 1);
            basis_mats[g.idx_f(a)] = unit_mat(m, i + 1, i);
        }
        // Higher root vectors by height: pick γ = α_i + δ and divide the
        // concrete bracket by the abstract structure constant, so the bracket
        // tables agree by construction (and are re-verified in tests).
        let mut by_height: Vec<usize> = (0..p).collect();
        by_height.sort_by_key(|&a| RootSystem::height(&rs.positive_roots[a]));
        for &a in &by_height {
            let gamma = rs.positive_roots[a].clone();
            if RootSystem::height(&gamma) == 1 {
                continue;
            }
            let mut found = false;
            for i in 0..r {
                if gamma[i] == 0 {
                    continue;
                }
                let mut rest = gamma.clone();
                rest[i] -= 1;
                if let Some(b) = rs.root_index(&rest) {
                    let simple = g.simple_root_pos(i);
                    // e side
                    let coef = bracket_coefficient(&g, g.idx_e(simple), g.idx_e(b), g.idx_e(a));
                    let conc =
                        comm(&basis_mats[g.idx_e(simple)], &basis_mats[g.idx_e(b)]);
                    basis_mats[g.idx_e(a)] = conc.scale(&coef.recip());
                    // f side
                    let coef = bracket_coefficient(&g, g.idx_f(simple), g.idx_f(b), g.idx_f(a));
                    let conc =
                        comm(&basis_mats[g.idx_f(simple)], &basis_mats[g.idx_f(b)]);
                    basis_mats[g.idx_f(a)] = conc.scale(&coef.recip());
                    found = true;
                    break;
                }
            }
            assert!(found, "positive root without a simple summand");
        }
        // Flattened basis map and its left inverse.
        let mut flat = Matrix::zero(m * m, g.dim);
        for (k, mat) in basis_mats.iter().enumerate() {
            for i in 0..m {
                for j in 0..m {
                    flat.set(i * m + j, k, mat.at(i, j).clone());
                }
            }
        }
        let gram = flat.transpose().mul(&flat);
        let left_inv = gram.inverse().mul(&flat.transpose());

        let mut oracle = SlRealization {
            m,
            g,
            wg,
            basis_mats,
            left_inv,
            perm_index: HashMap::new(),
        };
        let elements = oracle.wg.all_elements();
        for w in elements {
            let rep = oracle.weyl_representative(w);
            let perm = permutation_of(&rep.mat).expect("representative is monomial");
            oracle.perm_index.insert(perm, w);
        }
        oracle
    }

    pub fn algebra_dim(&self) -> usize {
        self.g.dim
    }

    /// Coordinates of a traceless matrix in the abstract basis.
    pub fn coords_of(&self, x: &Matrix) -> Vec<Rational> {
        let m = self.m;
        let mut flatv = vec![Rational::zero(); m * m];
        for i in 0..m {
            for j in 0..m {
                flatv[i * m + j] = x.at(i, j).clone();
            }
        }
        self.left_inv.mul_vec(&flatv)
    }

    /// Concrete matrix of an abstract coefficient vector.
    pub fn matrix_of(&self, coords: &[Rational]) -> Matrix {
        let mut out = Matrix::zero(self.m, self.m);
        for (k, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.basis_mats[k].scale(c));
            }
        }
        out
    }

    /// Matrix of Ad_g : x ↦ g x g^{-1} in the abstract basis coordinates.
    pub fn adjoint_matrix(&self, gel: &GroupElement) -> Matrix {
        let inv = gel.mat.inverse();
        let mut out = Matrix::zero(self.g.dim, self.g.dim);
        for k in 0..self.g.dim {
            let img = gel.mat.mul(&self.basis_mats[k]).mul(&inv);
            let coords = self.coords_of(&img);
            for (i, c) in coords.into_iter().enumerate() {
                if !c.is_zero() {
                    out.set(i, k, c);
                }
            }
        }
        out
    }

    /// Signed permutation representative of a Weyl element, as the product of
    /// the standard simple-reflection blocks along the canonical word.
    pub fn weyl_representative(&self, w: WeylElement) -> GroupElement {
        let mut mat = Matrix::identity(self.m);
        for &i in self.wg.word(w) {
            let mut s = Matrix::identity(self.m);
            s.set(i, i, rat(0));
            s.set(i + 1, i + 1, rat(0));
            s.set(i, i + 1, rat(1));
            s.set(i + 1, i, rat(-1));
            mat = mat.mul(&s);
        }
        GroupElement { mat }
    }

    /// dim of the conjugacy class of a representative.
    pub fn class_dim(&self, rep: &GroupElement) -> usize {
        let ad = self.adjoint_matrix(rep);
        let fixed = ad.sub(&Matrix::identity(self.g.dim)).kernel();
        self.g.dim - fixed.dim()
    }

    pub fn conjugacy_class(&self, rep: GroupElement) -> ConjugacyClass {
        let class_dim = self.class_dim(&rep);
        ConjugacyClass { rep, class_dim }
    }

    fn perm_to_weyl(&self, perm: &[usize]) -> WeylElement {
        *self.perm_index.get(perm).expect("rank pattern is a permutation of W")
    }

    /// The cell BẇB containing g, via southwest minor ranks.
    pub fn bruhat_cell(&self, gel: &GroupElement) -> WeylElement {
        let m = self.m;
        let g = &gel.mat;
        let mut perm = vec![0usize; m];
        for j in 0..m {
            // w(j) = max{i : rank SW(i, j) increases at column j}.
            for i in (0..m).rev() {
                let a = g.submatrix(i..m, 0..(j + 1)).rank();
                let b = g.submatrix(i..m, 0..j).rank();
                if a > b {
                    perm[j] = i;
                    break;
                }
            }
        }
        self.perm_to_weyl(&perm)
    }

    /// The cell B_−ẇB_− containing g, via northeast minor ranks.
    pub fn opposite_cell(&self, gel: &GroupElement) -> WeylElement {
        let m = self.m;
        let g = &gel.mat;
        let mut perm = vec![0usize; m];
        for j in 0..m {
            for i in 0..m {
                let a = g.submatrix(0..(i + 1), j..m).rank();
                let b = g.submatrix(0..(i + 1), (j + 1)..m).rank();
                if a > b {
                    perm[j] = i;
                    break;
                }
            }
        }
        self.perm_to_weyl(&perm)
    }

    /// The mixed cell B_−ẇB containing g, via northwest minor ranks.
    pub fn mixed_cell(&self, gel: &GroupElement) -> WeylElement {
        let m = self.m;
        let g = &gel.mat;
        let mut perm = vec![0usize; m];
        for j in 0..m {
            for i in 0..m {
                let a = g.submatrix(0..(i + 1), 0..(j + 1)).rank();
                let b = g.submatrix(0..(i + 1), 0..j).rank();
                if a > b {
                    perm[j] = i;
                    break;
                }
            }
        }
        self.perm_to_weyl(&perm)
    }

    /// Both one-sided cells of g: (BẇB, B_−ẇB_−).
    pub fn cell_of(&self, gel: &GroupElement) -> (WeylElement, WeylElement) {
        (self.bruhat_cell(gel), self.opposite_cell(gel))
    }

    // --- random elements -------------------------------------------------

    fn nonzero_param(&self, rng: &mut StdRng) -> Rational {
        loop {
            let v: i64 = rng.gen_range(-3..=3);
            if v != 0 {
                return rat(v);
            }
        }
    }

    pub fn random_torus(&self, rng: &mut StdRng) -> GroupElement {
        let m = self.m;
        let mut mat = Matrix::zero(m, m);
        let mut prod = rat(1);
        for i in 0..m - 1 {
            let t = self.nonzero_param(rng);
            prod *= &t;
            mat.set(i, i, t);
        }
        mat.set(m - 1, m - 1, prod.recip());
        GroupElement { mat }
    }

    fn random_unipotent(&self, rng: &mut StdRng, upper: bool, allow_zero: bool) -> GroupElement {
        let m = self.m;
        let mut mat = Matrix::identity(m);
        for i in 0..m {
            for j in 0..m {
                if (upper && j > i) || (!upper && j < i) {
                    let v: i64 = rng.gen_range(-3..=3);
                    if v != 0 || allow_zero {
                        mat.set(i, j, rat(v));
                    } else {
                        mat.set(i, j, self.nonzero_param(rng));
                    }
                }
            }
        }
        GroupElement { mat }
    }

    pub fn random_borel(&self, rng: &mut StdRng, upper: bool) -> GroupElement {
        let t = self.random_torus(rng);
        let u = self.random_unipotent(rng, upper, true);
        t.mul(&u)
    }

    fn simple_e(&self, i: usize, t: &Rational) -> GroupElement {
        let mut mat = Matrix::identity(self.m);
        mat.set(i, i + 1, t.clone());
        GroupElement { mat }
    }

    fn simple_f(&self, i: usize, t: &Rational) -> GroupElement {
        let mut mat = Matrix::identity(self.m);
        mat.set(i + 1, i, t.clone());
        GroupElement { mat }
    }

    /// Product of exp(t_j f_{i_j}) along a reduced word: a point of BẇB for
    /// the full word when all parameters are nonzero (verified by callers).
    fn lower_word_product(&self, word: &[usize], rng: &mut StdRng) -> GroupElement {
        let mut acc = GroupElement { mat: Matrix::identity(self.m) };
        for &i in word {
            acc = acc.mul(&self.simple_f(i, &self.nonzero_param(rng)));
        }
        acc
    }

    /// Product of exp(t_j e_{i_j}) along a reduced word: a point of B_−ẇB_−.
    fn upper_word_product(&self, word: &[usize], rng: &mut StdRng) -> GroupElement {
        let mut acc = GroupElement { mat: Matrix::identity(self.m) };
        for &i in word {
            acc = acc.mul(&self.simple_e(i, &self.nonzero_param(rng)));
        }
        acc
    }

    /// Mixed word family: the representative block at positions of the
    /// subword J, exp(t f) elsewhere. Lands in BẇB for the full word with
    /// the mixed cell steered by J.
    fn guided_word_product(&self, word: &[usize], subword: &[bool], rng: &mut StdRng) -> GroupElement {
        let mut acc = GroupElement { mat: Matrix::identity(self.m) };
        for (pos, &i) in word.iter().enumerate() {
            if subword[pos] {
                let mut s = Matrix::identity(self.m);
                s.set(i, i, rat(0));
                s.set(i + 1, i + 1, rat(0));
                s.set(i, i + 1, rat(1));
                s.set(i + 1, i, rat(-1));
                acc = acc.mul(&GroupElement { mat: s });
            } else {
                acc = acc.mul(&self.simple_f(i, &self.nonzero_param(rng)));
            }
        }
        acc
    }
}

fn bracket_coefficient(g: &LieAlgebra, i: usize, j: usize, target: usize) -> Rational {
    g.br.entry(i, j)
        .iter()
        .find(|(k, _)| *k == target)
        .map(|(_, c)| c.clone())
        .expect("expected bracket component")
}

/// Image vector of a monomial (generalized permutation) matrix.
fn permutation_of(m: &Matrix) -> Option<Vec<usize>> {
    let n = m.rows();
    let mut perm = vec![usize::MAX; n];
    for j in 0..n {
        let mut hits = (0..n).filter(|&i| !m.at(i, j).is_zero());
        let i = hits.next()?;
        if hits.next().is_some() {
            return None;
        }
        perm[j] = i;
    }
    Some(perm)
}

/// A verified point of a leaf stratum.
#[derive(Clone, Debug)]
pub enum LeafPoint {
    /// Tuples (a_1, ..., a_n) for the single-group chains.
    Chain(Vec<GroupElement>),
    /// Tuples ((g_1, k_1), ..., (g_n, k_n)) for the doubled chains.
    DoubleChain(Vec<(GroupElement, GroupElement)>),
}

/// Verified membership of a candidate tuple in the stratum of a descriptor.
pub fn point_in_leaf(
    or: &SlRealization,
    d: &LeafDescriptor,
    point: &LeafPoint,
    class_rep: Option<&GroupElement>,
) -> bool {
    let _wg = &or.wg;
    match (d.series, point) {
        (SeriesTag::F, LeafPoint::Chain(a)) => {
            a.len() == d.u.len()
                && a.iter().zip(&d.u).all(|(ai, &ui)| or.bruhat_cell(ai) == ui)
                && or.mixed_cell(&product(a)) == d.w.unwrap()
        }
        (SeriesTag::Ftilde, LeafPoint::Chain(a)) => {
            a.len() == d.u.len()
                && a.iter().zip(&d.u).all(|(ai, &ui)| or.bruhat_cell(ai) == ui)
                && or.opposite_cell(&product(a)) == d.w.unwrap()
        }
        (SeriesTag::FF, LeafPoint::DoubleChain(gk)) => {
            let gs: Vec<GroupElement> = gk.iter().map(|(g, _)| g.clone()).collect();
            let ks: Vec<GroupElement> = gk.iter().map(|(_, k)| k.clone()).collect();
            gk.len() == d.u.len()
                && gs.iter().zip(&d.u).all(|(g, &ui)| or.bruhat_cell(g) == ui)
                && ks.iter().zip(&d.v).all(|(k, &vi)| or.opposite_cell(k) == vi)
                && or.mixed_cell(&product(&ks).inverse().mul(&product(&gs))) == d.w.unwrap()
        }
        (SeriesTag::FFtilde, LeafPoint::DoubleChain(gk)) => {
            let gs: Vec<GroupElement> = gk.iter().map(|(g, _)| g.clone()).collect();
            let ks: Vec<GroupElement> = gk.iter().map(|(_, k)| k.clone()).collect();
            // Cheap cell tests first; the class dimension needs an adjoint
            // matrix and is computed only for candidates that survive them.
            if gk.len() != d.u.len()
                || !gs.iter().zip(&d.u).all(|(g, &ui)| or.bruhat_cell(g) == ui)
                || !ks.iter().zip(&d.v).all(|(k, &vi)| or.opposite_cell(k) == vi)
            {
                return false;
            }
            let mu = product(&gs).mul(&product(&ks).inverse());
            match (class_rep, d.class_dim) {
                (_, Some(dim)) => or.class_dim(&mu) == dim,
                _ => false,
            }
        }
        _ => false,
    }
}

fn product(els: &[GroupElement]) -> GroupElement {
    let m = els[0].size();
    els.iter()
        .fold(GroupElement { mat: Matrix::identity(m) }, |acc, e| acc.mul(e))
}

/// Samples one verified point of the stratum of `d`, deterministically in the
/// seed. Proposals mix sandwich points b·ẇ·b′, guided subword products, and
/// class-anchored factorizations; every candidate is verified with the cell
/// detectors before being returned.
pub fn sample_leaf_point(
    or: &SlRealization,
    d: &LeafDescriptor,
    seed: u64,
    budget: usize,
    class_rep: Option<&GroupElement>,
) -> Result<LeafPoint, OracleError> {
    let mut rng = StdRng::seed_from_u64(seed);
    for attempt in 0..budget {
        let candidate = propose(or, d, &mut rng, attempt, class_rep);
        if let Some(p) = candidate {
            if point_in_leaf(or, d, &p, class_rep) {
                return Ok(p);
            }
        }
    }
    Err(OracleError::BudgetExhausted(budget))
}

fn propose(
    or: &SlRealization,
    d: &LeafDescriptor,
    rng: &mut StdRng,
    attempt: usize,
    class_rep: Option<&GroupElement>,
) -> Option<LeafPoint> {
    let wg = &or.wg;
    match d.series {
        SeriesTag::F => {
            // Concatenated guided family: choose a subword of the combined
            // reduced words multiplying to w, and insert Borel randomizers.
            let mut segments: Vec<Vec<usize>> = Vec::new();
            let mut combined: Vec<usize> = Vec::new();
            for &u in &d.u {
                segments.push(wg.word(u).to_vec());
                combined.extend_from_slice(wg.word(u));
            }
            let subword = pick_subword(wg, &combined, d.w.unwrap(), rng)?;
            let mut parts: Vec<GroupElement> = Vec::new();
            let mut pos = 0usize;
            for seg in &segments {
                let flags = &subword[pos..pos + seg.len()];
                parts.push(or.guided_word_product(seg, flags, rng));
                pos += seg.len();
            }
            // Randomize within the stratum: torus on the left, Borel
            // insertions between factors, and an upper factor on the right.
            if attempt % 2 == 1 {
                randomize_chain(or, &mut parts, rng);
            }
            Some(LeafPoint::Chain(parts))
        }
        SeriesTag::Ftilde => {
            let n = d.u.len();
            let mut parts: Vec<GroupElement> = Vec::new();
            for (i, &u) in d.u.iter().enumerate() {
                let mut a = or.lower_word_product(wg.word(u), rng);
                if i == n - 1 {
                    let t = or.random_torus(rng);
                    let x = or.upper_word_product(wg.word(d.w.unwrap()), rng);
                    a = a.mul(&t).mul(&x);
                }
                parts.push(a);
            }
            if attempt % 2 == 1 {
                randomize_chain(or, &mut parts, rng);
            }
            Some(LeafPoint::Chain(parts))
        }
        SeriesTag::FF => {
            // The tuple ((g_i, k_i)) must have g_i ∈ Bu_iB, k_i ∈ B_−v_iB_−
            // and (k_1⋯k_n)^{-1}(g_1⋯g_n) ∈ B_−wB. Interleaved strategies
            // build the constrained product factor and reject on the
            // remaining cells:
            //   0: guided m ∈ B(u-word)B ∩ B_−wB with the concatenated word
            //      (possible when w ≤ u_1 ∗ ⋯ ∗ u_n), k_i ∈ B upper;
            //   1: k_i from rich B_−v_iB_− families, m = b_−^{-1}ẇb,
            //      g-product = (k-product)·m split as guided prefixes;
            //   2: the mirror anchor on the g side (n = 1 only).
            let n = d.u.len();
            let w_rep = or.weyl_representative(d.w.unwrap());
            let m_generic = or
                .random_borel(rng, false)
                .inverse()
                .mul(&w_rep)
                .mul(&or.random_borel(rng, true));
            let ks_upper: Vec<GroupElement> = d
                .v
                .iter()
                .map(|&vi| or.upper_word_product(wg.word(vi), rng).mul(&or.random_torus(rng)))
                .collect();
            // A double-cell point family f-prod(x)·t·e-prod(v_i) lies in
            // B_−v_iB_− for any x; randomizing x enriches the reachable
            // B-cells of downstream products.
            let rich_k = |or: &SlRealization, rng: &mut StdRng, vi: WeylElement| {
                let all = or.wg.all_elements();
                let x = all[rng.gen_range(0..all.len())];
                or.lower_word_product(or.wg.word(x), rng)
                    .mul(&or.random_torus(rng))
                    .mul(&or.upper_word_product(or.wg.word(vi), rng))
                    .mul(&or.random_unipotent(rng, false, true))
            };
            let pair = match attempt % 5 {
                4 => {
                    // Mirror anchor: exact g-side from sandwiched guided
                    // factors, the k-product split with absorption on the
                    // v-cells (rejected on the absorbed factor's cell).
                    let gs: Vec<GroupElement> = d
                        .u
                        .iter()
                        .map(|&ui| {
                            or.random_borel(rng, true)
                                .mul(&or.lower_word_product(wg.word(ui), rng))
                                .mul(&or.random_borel(rng, true))
                        })
                        .collect();
                    let k_target = product(&gs).mul(&m_generic.inverse());
                    let ks = split_with_absorption_minus(or, rng, &d.v, &k_target, attempt / 5);
                    gs.into_iter().zip(ks).collect::<Vec<_>>()
                }
                0 => {
                    // Concatenated guided family for the g-side.
                    let mut segments: Vec<Vec<usize>> = Vec::new();
                    let mut combined: Vec<usize> = Vec::new();
                    for &u in &d.u {
                        segments.push(wg.word(u).to_vec());
                        combined.extend_from_slice(wg.word(u));
                    }
                    let subword = pick_subword(wg, &combined, d.w.unwrap(), rng)?;
                    // k-product lies in B, so prepending it to the first
                    // factor preserves every cell condition.
                    let k_prod = product(&ks_upper);
                    let mut gs: Vec<GroupElement> = Vec::new();
                    let mut pos = 0usize;
                    for (i, seg) in segments.iter().enumerate() {
                        let flags = &subword[pos..pos + seg.len()];
                        let mut gi = or.guided_word_product(seg, flags, rng);
                        if i == 0 {
                            gi = k_prod.mul(&gi);
                        }
                        gs.push(gi);
                        pos += seg.len();
                    }
                    gs.into_iter().zip(ks_upper).collect::<Vec<_>>()
                }
                1 => {
                    let ks: Vec<GroupElement> =
                        d.v.iter().map(|&vi| rich_k(or, rng, vi)).collect();
                    let target = product(&ks).mul(&m_generic);
                    let gs = split_with_absorption(or, rng, &d.u, &target, attempt / 4);
                    gs.into_iter().zip(ks).collect::<Vec<_>>()
                }
                2 => {
                    if n != 1 {
                        return None;
                    }
                    let g = or
                        .lower_word_product(wg.word(d.u[0]), rng)
                        .mul(&or.random_borel(rng, true));
                    vec![(g.clone(), g.mul(&m_generic.inverse()))]
                }
                _ => {
                    if n != 1 {
                        return None;
                    }
                    // z-anchor: every solution has the form g = z·b,
                    // k = z·ẇ^{-1}·b_− with z ∈ BuB, so sample z over a full
                    // Borel sandwich of the guided family and reject on the
                    // opposite cell of k.
                    let word = wg.word(d.u[0]).to_vec();
                    let mask: u64 = rng.gen_range(0..(1 << word.len()));
                    let flags: Vec<bool> =
                        (0..word.len()).map(|p| mask & (1 << p) != 0).collect();
                    let z = or
                        .random_borel(rng, true)
                        .mul(&or.guided_word_product(&word, &flags, rng))
                        .mul(&or.random_borel(rng, true));
                    let k = z.mul(&w_rep.inverse());
                    let g = z.mul(&or.random_borel(rng, true));
                    vec![(g, k)]
                }
            };
            // In-stratum randomization by right (B × B_−) translations of
            // the last factor.
            let b = or.random_borel(rng, true);
            let bm = or.random_borel(rng, false);
            let mut out = pair;
            let last = out.len() - 1;
            out[last] = (out[last].0.mul(&b), out[last].1.mul(&bm));
            Some(LeafPoint::DoubleChain(out))
        }
        SeriesTag::FFtilde => {
            let n = d.u.len();
            let rep = class_rep?;
            let p = or.random_borel(rng, true).mul(&or.random_borel(rng, false));
            let x = p.mul(rep).mul(&p.inverse());
            if n == 1 {
                return match attempt % 3 {
                    0 => {
                        // Anchor g ∈ BuB, set k = x^{-1} g.
                        let g = or
                            .lower_word_product(wg.word(d.u[0]), rng)
                            .mul(&or.random_borel(rng, true));
                        let k = x.inverse().mul(&g);
                        Some(LeafPoint::DoubleChain(vec![(g, k)]))
                    }
                    1 => {
                        // Anchor k ∈ B_−vB_−, set g = x k.
                        let k = or
                            .random_unipotent(rng, false, true)
                            .mul(&or.random_torus(rng))
                            .mul(&or.upper_word_product(wg.word(d.v[0]), rng))
                            .mul(&or.random_unipotent(rng, false, true));
                        let g = x.mul(&k);
                        Some(LeafPoint::DoubleChain(vec![(g, k)]))
                    }
                    _ => {
                        // Anchor both cells through a double-cell point:
                        // k ∈ lower(u)·t·upper(v), g = x·k.
                        let k = or
                            .lower_word_product(wg.word(d.u[0]), rng)
                            .mul(&or.random_torus(rng))
                            .mul(&or.upper_word_product(wg.word(d.v[0]), rng));
                        let g = x.mul(&k);
                        Some(LeafPoint::DoubleChain(vec![(g, k)]))
                    }
                };
            }
            // n ≥ 2: anchor the k-side factors (with a random double-cell
            // component for richness), split the g-product with guided
            // prefixes, reject on the last g-cell.
            let all = wg.all_elements();
            let ks: Vec<GroupElement> = d
                .v
                .iter()
                .map(|&vi| {
                    let x = all[rng.gen_range(0..all.len())];
                    or.lower_word_product(wg.word(x), rng)
                        .mul(&or.random_torus(rng))
                        .mul(&or.upper_word_product(wg.word(vi), rng))
                })
                .collect();
            let target = x.mul(&product(&ks));
            let gs = split_with_absorption(or, rng, &d.u, &target, attempt);
            Some(LeafPoint::DoubleChain(gs.into_iter().zip(ks).collect()))
        }
    }
}

/// Splits a target group element into a chain (a_1, ..., a_n) with
/// a_1⋯a_n = target: every factor but one comes from a full Borel-sandwich
/// family of its prescribed cell, and the remaining factor absorbs the rest.
/// The absorption position rotates with the attempt counter, which lets
/// callers reject on the easiest (largest) cell. Cell membership of the
/// absorbed factor is NOT guaranteed; callers must verify.
fn split_with_absorption(
    or: &SlRealization,
    rng: &mut StdRng,
    u: &[crate::weyl::WeylElement],
    target: &GroupElement,
    attempt: usize,
) -> Vec<GroupElement> {
    let n = u.len();
    let wg = &or.wg;
    let absorb = attempt % n;
    let mut parts: Vec<Option<GroupElement>> = vec![None; n];
    for (i, &ui) in u.iter().enumerate() {
        if i != absorb {
            parts[i] = Some(
                or.random_borel(rng, true)
                    .mul(&or.lower_word_product(wg.word(ui), rng))
                    .mul(&or.random_borel(rng, true)),
            );
        }
    }
    let mut before = GroupElement { mat: Matrix::identity(or.m) };
    for p in parts.iter().take(absorb).flatten() {
        before = before.mul(p);
    }
    let mut after = GroupElement { mat: Matrix::identity(or.m) };
    for p in parts.iter().skip(absorb + 1).flatten() {
        after = after.mul(p);
    }
    parts[absorb] = Some(before.inverse().mul(target).mul(&after.inverse()));
    parts.into_iter().map(|p| p.unwrap()).collect()
}

/// Minus-side analogue of `split_with_absorption`: factors come from
/// lower-Borel sandwiches of the opposite-cell families.
fn split_with_absorption_minus(
    or: &SlRealization,
    rng: &mut StdRng,
    v: &[crate::weyl::WeylElement],
    target: &GroupElement,
    attempt: usize,
) -> Vec<GroupElement> {
    let n = v.len();
    let wg = &or.wg;
    let absorb = attempt % n;
    let mut parts: Vec<Option<GroupElement>> = vec![None; n];
    for (i, &vi) in v.iter().enumerate() {
        if i != absorb {
            parts[i] = Some(
                or.random_borel(rng, false)
                    .mul(&or.upper_word_product(wg.word(vi), rng))
                    .mul(&or.random_borel(rng, false)),
            );
        }
    }
    let mut before = GroupElement { mat: Matrix::identity(or.m) };
    for p in parts.iter().take(absorb).flatten() {
        before = before.mul(p);
    }
    let mut after = GroupElement { mat: Matrix::identity(or.m) };
    for p in parts.iter().skip(absorb + 1).flatten() {
        after = after.mul(p);
    }
    parts[absorb] = Some(before.inverse().mul(target).mul(&after.inverse()));
    parts.into_iter().map(|p| p.unwrap()).collect()
}

/// Random subword of `word` whose product is `target`; prefers small index
/// sets, sampled by a random sweep over the 2^|word| masks (word lengths at
/// desk scale are ≤ 12).
fn pick_subword(
    wg: &WeylGroup,
    word: &[usize],
    target: WeylElement,
    rng: &mut StdRng,
) -> Option<Vec<bool>> {
    let n = word.len();
    let masks: u64 = 1 << n;
    let start: u64 = rng.gen_range(0..masks);
    for k in 0..masks {
        let mask = (start + k) % masks;
        let mut acc = wg.identity();
        for (pos, &i) in word.iter().enumerate() {
            if mask & (1 << pos) != 0 {
                acc = wg.right_multiply(acc, i);
            }
        }
        if acc == target {
            return Some((0..n).map(|pos| mask & (1 << pos) != 0).collect());
        }
    }
    None
}

/// In-stratum randomization of a chain: left torus, Borel insertions between
/// consecutive factors, and a right upper-Borel factor (all cell-preserving).
fn randomize_chain(or: &SlRealization, parts: &mut [GroupElement], rng: &mut StdRng) {
    let t = or.random_torus(rng);
    parts[0] = t.mul(&parts[0]);
    for i in 0..parts.len() - 1 {
        let b = or.random_borel(rng, true);
        parts[i] = parts[i].mul(&b);
        parts[i + 1] = b.inverse().mul(&parts[i + 1]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::ratio;
    use crate::series;

    #[test]
    fn basis_matching_brackets_agree() {
        for m in [2, 3, 4] {
            let or = SlRealization::new(m);
            let g = &or.g;
            for i in 0..g.dim {
                for j in 0..g.dim {
                    let abstract_bracket =
                        g.br.bracket_vec(&g.basis_vec(i), &g.basis_vec(j));
                    let concrete = comm(&or.basis_mats[i], &or.basis_mats[j]);
                    assert_eq!(
                        or.coords_of(&concrete),
                        abstract_bracket,
                        "m = {m}, pair ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn trace_form_matches_stored_form() {
        let or = SlRealization::new(3);
        let g = &or.g;
        for i in 0..g.dim {
            for j in 0..g.dim {
                let tr: Rational = {
                    let prod = or.basis_mats[i].mul(&or.basis_mats[j]);
                    (0..3).map(|k| prod.at(k, k).clone()).sum()
                };
                assert_eq!(tr, g.form.at(i, j).clone(), "({i},{j})");
            }
        }
    }

    #[test]
    fn adjoint_examples_sl2() {
        let or = SlRealization::new(2);
        // Ad of diag(q, 1/q): e ↦ q² e, f ↦ q⁻² f, h ↦ h.
        let q = ratio(3, 1);
        let mut tmat = Matrix::zero(2, 2);
        tmat.set(0, 0, q.clone());
        tmat.set(1, 1, q.recip());
        let ad = or.adjoint_matrix(&GroupElement { mat: tmat });
        assert_eq!(ad.at(0, 0).clone(), rat(1));
        assert_eq!(ad.at(1, 1).clone(), rat(9));
        assert_eq!(ad.at(2, 2).clone(), ratio(1, 9));
        // Ad of the identity is the identity.
        let ident = GroupElement { mat: Matrix::identity(2) };
        assert_eq!(or.adjoint_matrix(&ident), Matrix::identity(3));
        // Ad of the reflection representative: h ↦ −h, e ↦ −f.
        let s = or.weyl_representative(or.wg.generator(0));
        let ad = or.adjoint_matrix(&s);
        assert_eq!(ad.at(0, 0).clone(), rat(-1));
        assert_eq!(ad.at(2, 1).clone(), rat(-1));
    }

    #[test]
    fn adjoint_is_homomorphism_and_isometry() {
        let or = SlRealization::new(3);
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..5 {
            let a = or.random_borel(&mut rng, true).mul(&or.random_borel(&mut rng, false));
            let b = or.random_borel(&mut rng, false).mul(&or.random_borel(&mut rng, true));
            let ab = a.mul(&b);
            assert_eq!(
                or.adjoint_matrix(&ab),
                or.adjoint_matrix(&a).mul(&or.adjoint_matrix(&b))
            );
            let ad = or.adjoint_matrix(&a);
            let gram = ad.transpose().mul(&or.g.form).mul(&ad);
            assert_eq!(gram, or.g.form);
        }
    }

    #[test]
    fn representative_h_action_matches_weyl_matrices() {
        for m in [3, 4] {
            let or = SlRealization::new(m);
            let r = or.g.rank();
            for w in or.wg.all_elements() {
                let rep = or.weyl_representative(w);
                assert_eq!(det(&rep.mat), rat(1));
                let ad = or.adjoint_matrix(&rep);
                let hblock = ad.submatrix(0..r, 0..r);
                // Type A: d = 1 so the coroot chart equals the α-chart.
                assert_eq!(&hblock, or.wg.matrix(w), "m = {m}, w = {}", or.wg.render(w));
            }
        }
    }

    #[test]
    fn cell_detection_brute_force_harness() {
        // For every w and random Borel pairs, b ẇ b′ lies in BẇB; the
        // analogous statements pin the B_−B_− and B_−B conventions.
        let or = SlRealization::new(3);
        let mut rng = StdRng::seed_from_u64(42);
        for w in or.wg.all_elements() {
            let rep = or.weyl_representative(w);
            for _ in 0..20 {
                let b1 = or.random_borel(&mut rng, true);
                let b2 = or.random_borel(&mut rng, true);
                let g = b1.mul(&rep).mul(&b2);
                assert_eq!(or.bruhat_cell(&g), w, "BwB {}", or.wg.render(w));
                let l1 = or.random_borel(&mut rng, false);
                let l2 = or.random_borel(&mut rng, false);
                let g = l1.mul(&rep).mul(&l2);
                assert_eq!(or.opposite_cell(&g), w, "B-wB- {}", or.wg.render(w));
                let g = l1.mul(&rep).mul(&b1);
                assert_eq!(or.mixed_cell(&g), w, "B-wB {}", or.wg.render(w));
            }
        }
    }

    #[test]
    fn cell_identity_and_antidiagonal() {
        let or = SlRealization::new(2);
        let ident = GroupElement { mat: Matrix::identity(2) };
        assert_eq!(or.cell_of(&ident), (or.wg.identity(), or.wg.identity()));
        let w0 = or.weyl_representative(or.wg.generator(0));
        assert_eq!(or.cell_of(&w0), (or.wg.generator(0), or.wg.generator(0)));
    }

    #[test]
    fn class_dims() {
        let or = SlRealization::new(2);
        let ident = GroupElement { mat: Matrix::identity(2) };
        assert_eq!(or.class_dim(&ident), 0);
        let mut t = Matrix::zero(2, 2);
        t.set(0, 0, rat(2));
        t.set(1, 1, ratio(1, 2));
        assert_eq!(or.class_dim(&GroupElement { mat: t }), 2);
        let mut u = Matrix::identity(2);
        u.set(0, 1, rat(1));
        assert_eq!(or.class_dim(&GroupElement { mat: u }), 2);
        // Conjugation invariance on a sample conjugate.
        let mut rng = StdRng::seed_from_u64(11);
        let p = or.random_borel(&mut rng, true).mul(&or.random_borel(&mut rng, false));
        let mut u = Matrix::identity(2);
        u.set(0, 1, rat(1));
        let conj = p.mul(&GroupElement { mat: u }).mul(&p.inverse());
        assert_eq!(or.class_dim(&conj), 2);
    }

    #[test]
    fn sampling_flag_leaves_sl2() {
        let or = SlRealization::new(2);
        let leaves = series::enumerate_f(&or.wg, 1, 1_000_000).unwrap();
        for l in &leaves {
            for seed in 0..3 {
                let p = sample_leaf_point(&or, l, seed, 1000, None).unwrap();
                assert!(point_in_leaf(&or, l, &p, None));
            }
        }
    }

    #[test]
    fn sampling_all_series_sl2_n1() {
        let or = SlRealization::new(2);
        let wg = &or.wg;
        for l in series::enumerate_ftilde(wg, 1, 1_000_000).unwrap() {
            let p = sample_leaf_point(&or, &l, 5, 1000, None).unwrap();
            assert!(point_in_leaf(&or, &l, &p, None));
        }
        for l in series::enumerate_ff(wg, 1, 1_000_000).unwrap() {
            let p = sample_leaf_point(&or, &l, 5, 1000, None).unwrap();
            assert!(point_in_leaf(&or, &l, &p, None));
        }
        // Doubled chain with the regular unipotent class.
        let mut u = Matrix::identity(2);
        u.set(0, 1, rat(1));
        let rep = GroupElement { mat: u };
        for uu in wg.all_elements() {
            for vv in wg.all_elements() {
                let l = series::leaf_fftilde(wg, 1, &[uu], &[vv], 2).unwrap();
                let p = sample_leaf_point(&or, &l, 5, 2000, Some(&rep)).unwrap();
                assert!(point_in_leaf(&or, &l, &p, Some(&rep)));
            }
        }
    }

    #[test]
    fn sampling_f2_chain() {
        let or = SlRealization::new(2);
        let leaves = series::enumerate_f(&or.wg, 2, 1_000_000).unwrap();
        assert_eq!(leaves.len(), 7);
        for l in &leaves {
            let p = sample_leaf_point(&or, l, 9, 2000, None).unwrap();
            assert!(point_in_leaf(&or, l, &p, None));
        }
    }
}
