//! Verification sweeps tying the closed-form leaf tables to the orbit
//! engine: per-series six-tuple contexts, orbit-representative tuples,
//! δ-vanishing sweeps (both routes), admissibility-hypothesis sweeps, and
//! stabilizer/rank cross-checks at representative points.

use crate::exactlin::{rat, Matrix, Rational, Subspace};
use crate::leaf_engine::{
    delta_via_lagrangian, delta_via_transport, rank_at_point, stabilizer_via_drinfeld,
    stabilizer_via_lagrangian, AdmissibleSetup, EngineError, LeafPair, ProductKind, ProductSetup,
};
use crate::lie_core::{Brackets, LieAlgebra, LieError, RootSystem};
use crate::rmat::{mixed_product, standard_r, Slots};
use crate::series::{LeafDescriptor, SeriesTag};
use crate::weyl::{WeylElement, WeylGroup};
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CheckError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Rmat(#[from] crate::rmat::RmatError),
    #[error("check failed: {0}")]
    Failed(String),
}

/// The base data shared by one series over one simple type: the simple
/// algebra, its Weyl group, the base factorizable structure (on g or g⊕g),
/// and the base admissible setup (q, m_±, c).
pub struct SeriesContext {
    pub tag: SeriesTag,
    pub g: LieAlgebra,
    pub wg: WeylGroup,
    pub base: AdmissibleSetup,
    /// Whether the base algebra is the doubled g⊕g.
    pub doubled: bool,
    weyl_ads: HashMap<WeylElement, Matrix>,
}

impl SeriesContext {
    pub fn new(tag: SeriesTag, label: &str) -> Result<SeriesContext, CheckError> {
        let rs = RootSystem::build(label)?;
        let g = LieAlgebra::build(&rs);
        let wg = WeylGroup::build(&rs);
        let rd = standard_r(&g)?;
        let doubled = matches!(tag, SeriesTag::FF | SeriesTag::FFtilde);
        let base = if doubled {
            // Base group G×G with the two-fold mixed product r-matrix:
            // q = m_+ = b ⊕ b_−, m_− = g_diag, c = h ⊕ h.
            let rd2 = mixed_product(&rd, 2)?;
            let slots = Slots::new(g.dim, 2);
            let q = slots
                .slot_subspace(0, &g.borel_pos)
                .sum(&slots.slot_subspace(1, &g.borel_neg));
            let c = slots
                .slot_subspace(0, &g.cartan)
                .sum(&slots.slot_subspace(1, &g.cartan));
            let m_minus = slots.diagonal_subspace(&Subspace::full(g.dim));
            AdmissibleSetup::new(rd2, q.clone(), m_minus, q, c)?
        } else {
            AdmissibleSetup::new(
                rd,
                g.borel_pos.clone(),
                g.borel_neg.clone(),
                g.borel_pos.clone(),
                g.cartan.clone(),
            )?
        };
        let mut ctx = SeriesContext { tag, g, wg, base, doubled, weyl_ads: HashMap::new() };
        for w in ctx.wg.all_elements() {
            let mut m = Matrix::identity(ctx.g.dim);
            for &i in ctx.wg.word(w) {
                m = m.mul(&ctx.g.simple_reflection_ad(i));
            }
            ctx.weyl_ads.insert(w, m);
        }
        Ok(ctx)
    }

    pub fn kind(&self) -> ProductKind {
        match self.tag {
            SeriesTag::F | SeriesTag::FF => ProductKind::Quotients,
            SeriesTag::Ftilde | SeriesTag::FFtilde => ProductKind::GroupTail,
        }
    }

    pub fn product(&self, n: usize) -> Result<ProductSetup, CheckError> {
        Ok(ProductSetup::build(&self.base, self.kind(), n)?)
    }

    /// Ad matrix of the standard representative of w on the simple algebra.
    pub fn weyl_ad(&self, w: WeylElement) -> &Matrix {
        &self.weyl_ads[&w]
    }

    /// A base-group entry for tuple slots: Ad of ẇ on g, or of (ẇ_1, ẇ_2)
    /// on g⊕g for the doubled series.
    pub fn entry(&self, w: WeylElement, w2: Option<WeylElement>) -> Matrix {
        if self.doubled {
            let a = self.weyl_ad(w);
            let b = self.weyl_ad(w2.expect("doubled series entries are pairs"));
            Matrix::block_diag(&[a, b])
        } else {
            assert!(w2.is_none());
            self.weyl_ad(w).clone()
        }
    }

    pub fn entry_identity(&self) -> Matrix {
        Matrix::identity(self.base.dim())
    }

    /// Random Ad of an element of the base Borel-type subgroup: torus times
    /// upper (or lower) exponentials, exact and form-preserving.
    pub fn random_borel_ad(&self, rng: &mut StdRng, upper: bool) -> Matrix {
        let g = &self.g;
        let t: Vec<Rational> = (0..g.rank())
            .map(|_| loop {
                let v: i64 = rng.gen_range(-3..=3);
                if v != 0 {
                    break rat(v);
                }
            })
            .collect();
        let mut m = g.torus_ad(&t);
        for a in 0..g.num_positive() {
            let coef: i64 = rng.gen_range(-2..=2);
            if coef == 0 {
                continue;
            }
            let idx = if upper { g.idx_e(a) } else { g.idx_f(a) };
            let mut x = vec![Rational::zero(); g.dim];
            x[idx] = rat(coef);
            m = m.mul(&g.br.exp_ad(&x));
        }
        m
    }

    /// Random Ad of a general base-group element (mixed exponentials).
    pub fn random_group_ad(&self, rng: &mut StdRng) -> Matrix {
        self.random_borel_ad(rng, true).mul(&self.random_borel_ad(rng, false))
    }

    /// Converts a base-algebra vector lying in the torus subalgebra to
    /// simple-root-chart coordinates on h.
    pub fn torus_to_alpha(&self, v: &[Rational]) -> Vec<Rational> {
        // For the doubled base the torus is h_diag; the first copy determines it.
        let hpart = &v[0..self.g.rank()];
        (0..self.g.rank()).map(|i| &hpart[i] / rat(self.g.rs.d[i])).collect()
    }

    /// Extracts the (t_1, t_2) α-chart values of an ambient t̃-vector.
    pub fn ambient_torus_to_alpha(
        &self,
        prod: &ProductSetup,
        v: &[Rational],
    ) -> (Vec<Rational>, Vec<Rational>) {
        let (a, b) = prod.torus_components(v);
        (self.torus_to_alpha(&a), self.torus_to_alpha(&b))
    }
}

/// 0-based free-entry positions of the plus- and minus-orbit representative
/// tuples for a product setup (all other entries are the identity).
pub fn free_positions(kind: ProductKind, n: usize) -> (Vec<usize>, Vec<usize>) {
    let m = n / 2;
    let mut plus: Vec<usize>;
    let mut minus: Vec<usize>;
    if n % 2 == 0 {
        plus = (0..m).map(|k| 2 * k).collect();
        plus.push(n - 1);
        minus = (0..m).map(|k| 2 * k + 1).collect();
    } else {
        plus = (0..=m).map(|k| 2 * k).collect();
        minus = (0..m).map(|k| 2 * k + 1).collect();
        if n > 1 {
            minus.push(n - 1);
        } else {
            minus.push(0);
        }
    }
    minus.sort();
    minus.dedup();
    let _ = kind;
    (plus, minus)
}

/// Orbit-representative tuples: per-slot Ad matrices on the base group.
pub struct OrbitTuples {
    pub plus: Vec<Matrix>,
    pub minus: Vec<Matrix>,
}

impl OrbitTuples {
    pub fn ambient(&self, prod: &ProductSetup) -> (Matrix, Matrix) {
        let p: Vec<&Matrix> = self.plus.iter().collect();
        let m: Vec<&Matrix> = self.minus.iter().collect();
        (prod.slot_ad(&p), prod.slot_ad(&m))
    }
}

/// Builds the orbit tuples corresponding to a leaf of the closed-form table:
/// odd-indexed u entries sit in the plus tuple, even-indexed ones in the
/// minus tuple, and the trailing index (w or v, or a class entry) goes to the
/// tail position of the appropriate side.
pub fn leaf_orbit_tuples(
    ctx: &SeriesContext,
    prod: &ProductSetup,
    leaf: &LeafDescriptor,
    class_entry: Option<&Matrix>,
) -> OrbitTuples {
    let n = prod.n;
    let num_slots = prod.slots.count / if ctx.doubled { 2 } else { 1 };
    let _ = num_slots;
    let slot_count = match prod.kind {
        ProductKind::Quotients => n,
        ProductKind::GroupTail => n + 1,
    };
    let ident = ctx.entry_identity();
    let mut plus = vec![ident.clone(); slot_count];
    let mut minus = vec![ident.clone(); slot_count];
    // u_j (1-indexed) lives at slot j−1: odd j on the plus side, even j on
    // the minus side.
    for (j0, _) in leaf.u.iter().enumerate() {
        let entry = if ctx.doubled {
            ctx.entry(leaf.u[j0], Some(leaf.v[j0]))
        } else {
            ctx.entry(leaf.u[j0], None)
        };
        if j0 % 2 == 0 {
            plus[j0] = entry;
        } else {
            minus[j0] = entry;
        }
    }
    // Tail index: w for the quotient series, v (or the class) for the
    // group-tail series.
    let tail_entry = match (ctx.tag, leaf.w, class_entry) {
        (SeriesTag::F, Some(w), _) => ctx.entry(w, None),
        (SeriesTag::FF, Some(w), _) => ctx.entry(w, Some(ctx.wg.identity())),
        (SeriesTag::Ftilde, Some(v), _) => ctx.entry(v, None),
        (SeriesTag::FFtilde, None, Some(cls)) => {
            Matrix::block_diag(&[cls, &Matrix::identity(ctx.g.dim)])
        }
        _ => panic!("descriptor shape does not match the series"),
    };
    match prod.kind {
        ProductKind::Quotients => {
            // The tail replaces the free entry at slot n−1.
            if (n - 1) % 2 == 0 || n == 1 {
                // Slot n−1 free on the plus side when n is odd... the tail
                // side is determined by parity: even n tails on plus,
                // odd n tails on minus.
            }
            if n % 2 == 0 {
                plus[n - 1] = tail_entry;
            } else {
                minus[n - 1] = tail_entry;
            }
        }
        ProductKind::GroupTail => {
            if n % 2 == 0 {
                plus[n - 1] = tail_entry;
            } else {
                minus[n - 1] = tail_entry;
            }
        }
    }
    OrbitTuples { plus, minus }
}

/// δ for one orbit pair, by both routes; they must agree.
pub fn delta_both_routes(
    prod: &ProductSetup,
    tuples: &OrbitTuples,
) -> Result<(usize, usize), CheckError> {
    let (ap, am) = tuples.ambient(prod);
    let pair = prod.setup.chart_pair(&ap, &am)?;
    let d3 = delta_via_lagrangian(&prod.setup, &pair);
    let d2 = delta_via_transport(&prod.setup, &ap, &am);
    if d3 != d2 {
        return Err(CheckError::Failed(format!("delta routes disagree: {d3} vs {d2}")));
    }
    Ok((d3, d2))
}

/// All orbit-pair tuples of a product setup with Weyl entries in the free
/// positions. For the doubled series every free position carries a pair of
/// Weyl elements; `cap` bounds the total number of tuples.
pub fn enumerate_orbit_tuples(
    ctx: &SeriesContext,
    prod: &ProductSetup,
    cap: usize,
) -> Vec<OrbitTuples> {
    let (pf, mf) = free_positions(prod.kind, prod.n);
    let slot_count = match prod.kind {
        ProductKind::Quotients => prod.n,
        ProductKind::GroupTail => prod.n + 1,
    };
    let elems = ctx.wg.all_elements();
    let entries: Vec<Matrix> = if ctx.doubled {
        let mut out = Vec::new();
        for &a in &elems {
            for &b in &elems {
                out.push(ctx.entry(a, Some(b)));
            }
        }
        out
    } else {
        elems.iter().map(|&a| ctx.entry(a, None)).collect()
    };
    let ident = ctx.entry_identity();
    let free_total = pf.len() + mf.len();
    let total = entries.len().checked_pow(free_total as u32).unwrap_or(usize::MAX);
    let stride = if total > cap { total.div_ceil(cap) } else { 1 };
    let mut out = Vec::new();
    let mut index = 0usize;
    let mut counters = vec![0usize; free_total];
    loop {
        if index % stride == 0 {
            let mut plus = vec![ident.clone(); slot_count];
            let mut minus = vec![ident.clone(); slot_count];
            for (k, &pos) in pf.iter().enumerate() {
                plus[pos] = entries[counters[k]].clone();
            }
            for (k, &pos) in mf.iter().enumerate() {
                minus[pos] = entries[counters[pf.len() + k]].clone();
            }
            out.push(OrbitTuples { plus, minus });
        }
        index += 1;
        // Odometer.
        let mut carry = free_total;
        while carry > 0 {
            carry -= 1;
            counters[carry] += 1;
            if counters[carry] < entries.len() {
                break;
            }
            counters[carry] = 0;
            if carry == 0 {
                return out;
            }
        }
        if free_total == 0 {
            return out;
        }
    }
}

/// δ sweep over orbit-pair tuples: every case must give zero by both routes.
/// Returns the number of verified cases.
pub fn delta_sweep(
    ctx: &SeriesContext,
    n: usize,
    cap: usize,
) -> Result<usize, CheckError> {
    let prod = ctx.product(n)?;
    let tuples = enumerate_orbit_tuples(ctx, &prod, cap);
    let mut count = 0;
    for t in &tuples {
        let (d3, d2) = delta_both_routes(&prod, t)?;
        if d3 != 0 || d2 != 0 {
            return Err(CheckError::Failed(format!(
                "{} n={n}: nonzero delta {d3}",
                ctx.tag.as_str()
            )));
        }
        count += 1;
    }
    Ok(count)
}

/// The admissibility hypothesis behind the δ-vanishing, checked at the base
/// group over all Weyl triples: p_c(m_+^⊥ ∩ Ad_g q) ∩ Ad_h p_c(m_−^⊥ ∩ Ad_k q)
/// must vanish. Intersections factor through per-element caches, so the
/// triple loop runs on tiny chart subspaces. Returns the number of triples.
pub fn hypothesis_sweep(ctx: &SeriesContext) -> Result<usize, CheckError> {
    let base = &ctx.base;
    let elems = ctx.wg.all_elements();
    let mut reps: Vec<Matrix> = Vec::new();
    if ctx.doubled {
        for &a in &elems {
            for &b in &elems {
                reps.push(ctx.entry(a, Some(b)));
            }
        }
    } else {
        for &a in &elems {
            reps.push(ctx.entry(a, None));
        }
    }
    let plus_parts: Vec<Subspace> = reps
        .iter()
        .map(|ad| {
            let cut = base.m_plus_perp.intersect(&base.q.map_image(ad));
            chart_image(base, &cut)
        })
        .collect();
    let minus_parts: Vec<Subspace> = reps
        .iter()
        .map(|ad| {
            let cut = base.m_minus_perp.intersect(&base.q.map_image(ad));
            chart_image(base, &cut)
        })
        .collect();
    let mut count = 0usize;
    for pp in &plus_parts {
        if pp.is_zero() {
            count += reps.len() * minus_parts.len();
            continue;
        }
        for h in &reps {
            for mm in &minus_parts {
                let moved = mm.map_image(h);
                if !pp.intersect(&moved).is_zero() {
                    return Err(CheckError::Failed(
                        "admissibility hypothesis fails: nonzero chart intersection".into(),
                    ));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

fn chart_image(setup: &AdmissibleSetup, v: &Subspace) -> Subspace {
    let vecs = v.basis_rows().into_iter().map(|row| setup.p_c_apply(&row)).collect();
    Subspace::from_spanning(setup.dim(), vecs)
}

/// Engine-side stabilizer data for one orbit pair.
pub struct StabilizerOutcome {
    /// The stabilizer in the α-chart of h (quotient series), or the
    /// restriction of the two-sided stabilizer (group-tail series).
    pub one_sided: Subspace,
    /// The two-sided stabilizer in α ⊕ α coordinates (group-tail series only).
    pub two_sided: Option<Subspace>,
}

/// Computes t_{O_+,O_−} via p_t on the ambient Lagrangian pair and converts
/// to α-chart coordinates.
pub fn engine_stabilizer(
    ctx: &SeriesContext,
    prod: &ProductSetup,
    tuples: &OrbitTuples,
) -> Result<StabilizerOutcome, CheckError> {
    let (ap, am) = tuples.ambient(prod);
    let pair = prod.setup.chart_pair(&ap, &am)?;
    stabilizer_outcome(ctx, prod, &pair)
}

fn stabilizer_outcome(
    ctx: &SeriesContext,
    prod: &ProductSetup,
    pair: &LeafPair,
) -> Result<StabilizerOutcome, CheckError> {
    let stab = stabilizer_via_lagrangian(&prod.setup, pair);
    let r = ctx.g.rank();
    match prod.kind {
        ProductKind::Quotients => {
            let vecs: Vec<Vec<Rational>> = stab
                .basis_rows()
                .into_iter()
                .map(|row| ctx.ambient_torus_to_alpha(prod, &row).0)
                .collect();
            Ok(StabilizerOutcome {
                one_sided: Subspace::from_spanning(r, vecs),
                two_sided: None,
            })
        }
        ProductKind::GroupTail => {
            let vecs: Vec<Vec<Rational>> = stab
                .basis_rows()
                .into_iter()
                .map(|row| {
                    let (a, b) = ctx.ambient_torus_to_alpha(prod, &row);
                    let mut out = a;
                    out.extend(b);
                    out
                })
                .collect();
            let two = Subspace::from_spanning(2 * r, vecs);
            // Restriction to the first torus factor: {x : (x, 0) ∈ two}.
            let zero_tail = Slots::new(r, 2).slot_subspace(0, &Subspace::full(r));
            let cut = two.intersect(&zero_tail);
            let firsts: Vec<Vec<Rational>> =
                cut.basis_rows().into_iter().map(|row| row[0..r].to_vec()).collect();
            Ok(StabilizerOutcome {
                one_sided: Subspace::from_spanning(r, firsts),
                two_sided: Some(two),
            })
        }
    }
}

/// Expected two-sided stabilizer {(u(x) + v(y), x + y)} in α ⊕ α coordinates
/// for the group-tail series with products u, v.
pub fn expected_two_sided(
    wg: &WeylGroup,
    u: WeylElement,
    v: WeylElement,
) -> Subspace {
    let r = wg.rs.rank;
    let mu = wg.matrix(u);
    let mv = wg.matrix(v);
    let mut vecs = Vec::new();
    for i in 0..r {
        let mut x = vec![Rational::zero(); r];
        x[i] = rat(1);
        let mut row = mu.mul_vec(&x);
        row.extend(x.clone());
        vecs.push(row);
        let mut row2 = mv.mul_vec(&x);
        row2.extend(x);
        vecs.push(row2);
    }
    Subspace::from_spanning(2 * r, vecs)
}

/// Verifies that the engine stabilizer at the leaf's representative tuples
/// matches the closed-form stabilizer of the descriptor (and, for the
/// group-tail series, the two-sided closed form).
pub fn stabilizer_check(
    ctx: &SeriesContext,
    prod: &ProductSetup,
    leaf: &LeafDescriptor,
    class_entry: Option<&Matrix>,
) -> Result<(), CheckError> {
    let tuples = leaf_orbit_tuples(ctx, prod, leaf, class_entry);
    let outcome = engine_stabilizer(ctx, prod, &tuples)?;
    if outcome.one_sided != leaf.stabilizer {
        return Err(CheckError::Failed(format!(
            "{} stabilizer mismatch for leaf (u = {:?})",
            ctx.tag.as_str(),
            leaf.u.iter().map(|&x| ctx.wg.render(x)).collect::<Vec<_>>()
        )));
    }
    if let Some(two) = &outcome.two_sided {
        let wg = &ctx.wg;
        let pu = wg.product_of(&leaf.u);
        let pv = match ctx.tag {
            SeriesTag::Ftilde => leaf.w.unwrap(),
            SeriesTag::FFtilde => wg.product_of(&leaf.v),
            _ => unreachable!(),
        };
        let expect = expected_two_sided(wg, pu, pv);
        if *two != expect {
            return Err(CheckError::Failed("two-sided stabilizer mismatch".into()));
        }
    }
    Ok(())
}

/// Base-point independence of δ and the stabilizer: recompute both at
/// translated representative pairs (random elements of M̃_±) and demand
/// identical values. Returns the number of representative pairs tested.
pub fn base_point_independence(
    ctx: &SeriesContext,
    prod: &ProductSetup,
    tuples: &OrbitTuples,
    seeds: &[u64],
) -> Result<usize, CheckError> {
    let (ap, am) = tuples.ambient(prod);
    let pair = prod.setup.chart_pair(&ap, &am)?;
    let delta0 = delta_via_lagrangian(&prod.setup, &pair);
    let stab0 = stabilizer_via_lagrangian(&prod.setup, &pair);
    let mut count = 0;
    for &seed in seeds {
        let mut rng = StdRng::seed_from_u64(seed);
        let (mp, mm) = random_m_translations(ctx, prod, &mut rng);
        let moved = pair.translated(&mp, &mm);
        if !moved.is_lagrangian(&prod.setup) {
            return Err(CheckError::Failed("translated pair lost Lagrangian property".into()));
        }
        let delta1 = delta_via_lagrangian(&prod.setup, &moved);
        let stab1 = stabilizer_via_lagrangian(&prod.setup, &moved);
        if delta1 != delta0 || stab1 != stab0 {
            return Err(CheckError::Failed(format!(
                "base-point dependence detected (seed {seed}): delta {delta0} -> {delta1}"
            )));
        }
        count += 1;
    }
    Ok(count)
}

/// Random elements of M̃_+ and M̃_− as ambient Ad matrices, following the
/// slot patterns (diagonal pairs move jointly).
pub fn random_m_translations(
    ctx: &SeriesContext,
    prod: &ProductSetup,
    rng: &mut StdRng,
) -> (Matrix, Matrix) {
    let n = prod.n;
    let m = n / 2;
    let base_dim = ctx.base.dim();
    let ident = Matrix::identity(base_dim);
    let slot_count = prod.slots.count;
    let mut plus: Vec<Matrix> = vec![ident.clone(); slot_count];
    let mut minus: Vec<Matrix> = vec![ident.clone(); slot_count];
    // Borel-type elements of the base group for the m_±-slots; arbitrary
    // base-group elements for the diagonal pairs.
    let m_plus_el = |ctx: &SeriesContext, rng: &mut StdRng| -> Matrix {
        if ctx.doubled {
            let a = ctx.random_borel_ad(rng, true);
            let b = ctx.random_borel_ad(rng, false);
            Matrix::block_diag(&[&a, &b])
        } else {
            ctx.random_borel_ad(rng, true)
        }
    };
    let m_minus_el = |ctx: &SeriesContext, rng: &mut StdRng| -> Matrix {
        if ctx.doubled {
            let a = ctx.random_group_ad(rng);
            Matrix::block_diag(&[&a, &a])
        } else {
            ctx.random_borel_ad(rng, false)
        }
    };
    let any_el = |ctx: &SeriesContext, rng: &mut StdRng| -> Matrix {
        if ctx.doubled {
            let a = ctx.random_group_ad(rng);
            let b = ctx.random_group_ad(rng);
            Matrix::block_diag(&[&a, &b])
        } else {
            ctx.random_group_ad(rng)
        }
    };
    if n % 2 == 0 {
        plus[0] = m_plus_el(ctx, rng);
        for k in 0..m.saturating_sub(1) {
            let d = any_el(ctx, rng);
            plus[2 * k + 1] = d.clone();
            plus[2 * k + 2] = d;
        }
        plus[n - 1] = m_minus_el(ctx, rng);
        for k in 0..m {
            let d = any_el(ctx, rng);
            minus[2 * k] = d.clone();
            minus[2 * k + 1] = d;
        }
    } else {
        plus[0] = m_plus_el(ctx, rng);
        for k in 0..m {
            let d = any_el(ctx, rng);
            plus[2 * k + 1] = d.clone();
            plus[2 * k + 2] = d;
        }
        for k in 0..m {
            let d = any_el(ctx, rng);
            minus[2 * k] = d.clone();
            minus[2 * k + 1] = d;
        }
        minus[n - 1] = m_minus_el(ctx, rng);
    }
    if prod.kind == ProductKind::GroupTail {
        if n % 2 == 0 {
            plus[n] = m_minus_el(ctx, rng);
            minus[n] = m_plus_el(ctx, rng);
        } else {
            plus[n] = m_plus_el(ctx, rng);
            minus[n] = m_minus_el(ctx, rng);
        }
    }
    let pr: Vec<&Matrix> = plus.iter().collect();
    let mr: Vec<&Matrix> = minus.iter().collect();
    (prod.slot_ad(&pr), prod.slot_ad(&mr))
}

/// Rank check at a point given by slot translations: both engine routes must
/// agree with each other and with the expected closed-form rank.
pub fn rank_check_at_point(
    prod: &ProductSetup,
    slot_ads: &[&Matrix],
    expected: usize,
) -> Result<(), CheckError> {
    let amb = prod.slot_ad(slot_ads);
    let pair = prod.setup.diagonal_pair(&amb);
    let rank = rank_at_point(&prod.setup, &pair, prod.orbit_dim)?;
    let got = rank.agreed()?;
    if got != expected {
        return Err(CheckError::Failed(format!("rank {got} != expected {expected}")));
    }
    Ok(())
}

/// Stabilizer check at a diagonal point: the p_t route and the Drinfeld-style
/// route must agree, match the expected subspace, and satisfy the corank
/// identity against the expected rank.
pub fn stabilizer_check_at_point(
    ctx: &SeriesContext,
    prod: &ProductSetup,
    slot_ads: &[&Matrix],
    leaf: &LeafDescriptor,
) -> Result<(), CheckError> {
    let amb = prod.slot_ad(slot_ads);
    let pair = prod.setup.diagonal_pair(&amb);
    let s1 = stabilizer_via_lagrangian(&prod.setup, &pair);
    let s2 = stabilizer_via_drinfeld(&prod.setup, &pair);
    if s1 != s2 {
        return Err(CheckError::Failed("stabilizer routes disagree at point".into()));
    }
    let outcome = stabilizer_outcome(ctx, prod, &pair)?;
    if outcome.one_sided != leaf.stabilizer {
        return Err(CheckError::Failed("point stabilizer differs from closed form".into()));
    }
    // Corank identity on the ambient torus: codim of the stabilizer in t̃
    // equals leaf_dim − rank.
    let t_dim = prod.setup.t.dim();
    if t_dim - s1.dim() != leaf.leaf_dim - leaf.symplectic_rank {
        return Err(CheckError::Failed("corank identity fails at point".into()));
    }
    Ok(())
}

/// Brackets of the doubled base algebra (used by callers building concrete
/// translations for the doubled series).
pub fn doubled_brackets(g: &LieAlgebra) -> Brackets {
    Brackets::direct_sum(&[&g.br, &g.br])
}

/// Per-slot base-group Ad matrices of the point reached by a sampled group
/// tuple, under the chain-to-product identification sending
/// (a_1, ..., a_n) to the prefix cosets (a_1Q, a_1a_2Q, ...).
pub fn oracle_slot_ads(
    ctx: &SeriesContext,
    or: &crate::sl_oracle::SlRealization,
    prod: &ProductSetup,
    point: &crate::sl_oracle::LeafPoint,
) -> Vec<Matrix> {
    use crate::sl_oracle::LeafPoint;
    let n = prod.n;
    let mut prefix_ads: Vec<Matrix> = Vec::new();
    match point {
        LeafPoint::Chain(a) => {
            assert!(!ctx.doubled);
            let mut acc = crate::sl_oracle::GroupElement { mat: Matrix::identity(or.m) };
            for ai in a {
                acc = acc.mul(ai);
                prefix_ads.push(or.adjoint_matrix(&acc));
            }
        }
        LeafPoint::DoubleChain(gk) => {
            assert!(ctx.doubled);
            let ident = crate::sl_oracle::GroupElement { mat: Matrix::identity(or.m) };
            let mut accg = ident.clone();
            let mut acck = ident;
            for (gi, ki) in gk {
                accg = accg.mul(gi);
                acck = acck.mul(ki);
                prefix_ads.push(Matrix::block_diag(&[
                    &or.adjoint_matrix(&accg),
                    &or.adjoint_matrix(&acck),
                ]));
            }
        }
    }
    match prod.kind {
        ProductKind::Quotients => prefix_ads,
        ProductKind::GroupTail => {
            // Slots 0..n−2 carry the proper prefixes, slot n−1 the full
            // product, and the final slot stays at the identity.
            let mut out: Vec<Matrix> = prefix_ads[0..n - 1].to_vec();
            out.push(prefix_ads[n - 1].clone());
            out.push(Matrix::identity(ctx.base.dim()));
            out
        }
    }
}

/// Tangent dimension of the orbit intersection at the point translated by a
/// slotwise Ad: dim((m̃_+ ∩ (m̃_− + q_y)) + q_y) − dim q_y. An independent
/// check of the closed-form leaf dimension.
pub fn leaf_dim_at_point(prod: &ProductSetup, slot_ads: &[&Matrix]) -> usize {
    let amb = prod.slot_ad(slot_ads);
    let q_y = prod.setup.q.map_image(&amb);
    let inter = prod.setup.m_plus.intersect(&prod.setup.m_minus.sum(&q_y));
    inter.sum(&q_y).dim() - q_y.dim()
}

/// Full per-point verification at a sampled group tuple: both rank routes
/// agree and match the closed form; both stabilizer routes agree, match the
/// closed form, and satisfy the corank identity; and the tangent dimension
/// of the orbit intersection equals the closed-form leaf dimension.
pub fn oracle_point_check(
    ctx: &SeriesContext,
    or: &crate::sl_oracle::SlRealization,
    prod: &ProductSetup,
    leaf: &LeafDescriptor,
    point: &crate::sl_oracle::LeafPoint,
) -> Result<(), CheckError> {
    let ads = oracle_slot_ads(ctx, or, prod, point);
    let refs: Vec<&Matrix> = ads.iter().collect();
    rank_check_at_point(prod, &refs, leaf.symplectic_rank)?;
    if leaf_dim_at_point(prod, &refs) != leaf.leaf_dim {
        return Err(CheckError::Failed("tangent dimension differs from leaf dimension".into()));
    }
    stabilizer_check_at_point(ctx, prod, &refs, leaf)
}

/// Rank and leaf-dimension verification only (no stabilizer computation).
pub fn oracle_rank_dim_check(
    ctx: &SeriesContext,
    or: &crate::sl_oracle::SlRealization,
    prod: &ProductSetup,
    leaf: &LeafDescriptor,
    point: &crate::sl_oracle::LeafPoint,
) -> Result<(), CheckError> {
    let ads = oracle_slot_ads(ctx, or, prod, point);
    let refs: Vec<&Matrix> = ads.iter().collect();
    rank_check_at_point(prod, &refs, leaf.symplectic_rank)?;
    if leaf_dim_at_point(prod, &refs) != leaf.leaf_dim {
        return Err(CheckError::Failed("tangent dimension differs from leaf dimension".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series;

    const CAP: usize = 1_000_000;

    #[test]
    fn free_position_patterns() {
        assert_eq!(free_positions(ProductKind::Quotients, 1), (vec![0], vec![0]));
        assert_eq!(free_positions(ProductKind::Quotients, 2), (vec![0, 1], vec![1]));
        assert_eq!(free_positions(ProductKind::Quotients, 3), (vec![0, 2], vec![1, 2]));
        assert_eq!(free_positions(ProductKind::GroupTail, 2), (vec![0, 1], vec![1]));
    }

    #[test]
    fn delta_sweeps_a1_all_series() {
        for tag in [SeriesTag::F, SeriesTag::Ftilde, SeriesTag::FF, SeriesTag::FFtilde] {
            let ctx = SeriesContext::new(tag, "A1").unwrap();
            for n in 1..=2 {
                let count = delta_sweep(&ctx, n, CAP).unwrap();
                assert!(count > 0, "{tag:?} n={n}");
            }
            let triples = hypothesis_sweep(&ctx).unwrap();
            assert!(triples > 0);
        }
    }

    #[test]
    fn f_series_stabilizers_engine_vs_closed_form_a1() {
        let ctx = SeriesContext::new(SeriesTag::F, "A1").unwrap();
        for n in 1..=2 {
            let prod = ctx.product(n).unwrap();
            for leaf in series::enumerate_f(&ctx.wg, n, CAP as u128).unwrap() {
                stabilizer_check(&ctx, &prod, &leaf, None).unwrap();
            }
        }
    }

    #[test]
    fn ftilde_stabilizers_engine_vs_closed_form_a1() {
        let ctx = SeriesContext::new(SeriesTag::Ftilde, "A1").unwrap();
        for n in 1..=2 {
            let prod = ctx.product(n).unwrap();
            for leaf in series::enumerate_ftilde(&ctx.wg, n, CAP as u128).unwrap() {
                stabilizer_check(&ctx, &prod, &leaf, None).unwrap();
            }
        }
    }

    #[test]
    fn ff_series_stabilizers_a1() {
        let ctx = SeriesContext::new(SeriesTag::FF, "A1").unwrap();
        let prod = ctx.product(1).unwrap();
        for leaf in series::enumerate_ff(&ctx.wg, 1, CAP as u128).unwrap() {
            stabilizer_check(&ctx, &prod, &leaf, None).unwrap();
        }
    }

    #[test]
    fn fftilde_stabilizers_a1() {
        let ctx = SeriesContext::new(SeriesTag::FFtilde, "A1").unwrap();
        let prod = ctx.product(1).unwrap();
        let ident = Matrix::identity(ctx.g.dim);
        for u in ctx.wg.all_elements() {
            for v in ctx.wg.all_elements() {
                let leaf = series::leaf_fftilde(&ctx.wg, 1, &[u], &[v], 0).unwrap();
                stabilizer_check(&ctx, &prod, &leaf, Some(&ident)).unwrap();
            }
        }
    }

    #[test]
    fn two_sided_restriction_identity() {
        // (h ⊕ 0) + {(u(x)+v(y), x+y)} = h ⊕ h for every pair, so the
        // two-sided torus action restricts to a full one-sided action.
        let ctx = SeriesContext::new(SeriesTag::Ftilde, "A2").unwrap();
        let r = ctx.g.rank();
        let h_first = Slots::new(r, 2).slot_subspace(0, &Subspace::full(r));
        for u in ctx.wg.all_elements() {
            for v in ctx.wg.all_elements() {
                let two = expected_two_sided(&ctx.wg, u, v);
                assert!(h_first.sum(&two).is_full());
            }
        }
    }

    #[test]
    fn base_point_independence_a1() {
        let ctx = SeriesContext::new(SeriesTag::F, "A1").unwrap();
        let prod = ctx.product(1).unwrap();
        let leaf = &series::enumerate_f(&ctx.wg, 1, CAP as u128).unwrap()[1];
        let tuples = leaf_orbit_tuples(&ctx, &prod, leaf, None);
        let n = base_point_independence(&ctx, &prod, &tuples, &[1, 2, 3]).unwrap();
        assert_eq!(n, 3);
    }
}
