//! Closed-form leaf tables for the four series F, FF, Ft, FFt: index sets,
//! leaf dimensions, symplectic ranks, and stabilizer subspaces of the Cartan,
//! together with the nonemptiness criteria.

use crate::exactlin::Subspace;
use crate::weyl::{WeylElement, WeylGroup};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("enumeration would produce about {estimate} index tuples, over the cap {cap}")]
    EnumerationCap { estimate: u128, cap: u128 },
    #[error("conjugacy class dimension {0} exceeds dim G − rank = {1}")]
    BadClassDim(usize, usize),
}

/// The four series of spaces whose leaves are tabulated.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SeriesTag {
    F,
    FF,
    Ftilde,
    FFtilde,
}

impl SeriesTag {
    pub fn as_str(self) -> &'static str {
        match self {
            SeriesTag::F => "F",
            SeriesTag::FF => "FF",
            SeriesTag::Ftilde => "Ft",
            SeriesTag::FFtilde => "FFt",
        }
    }

    pub fn parse(s: &str) -> Option<SeriesTag> {
        match s {
            "F" => Some(SeriesTag::F),
            "FF" => Some(SeriesTag::FF),
            "Ft" => Some(SeriesTag::Ftilde),
            "FFt" => Some(SeriesTag::FFtilde),
            _ => None,
        }
    }
}

/// One T-leaf record: indices, dimensions, symplectic rank and the leaf
/// stabilizer as a subspace of h in simple-root coordinates.
#[derive(Clone, Debug)]
pub struct LeafDescriptor {
    pub series: SeriesTag,
    pub n: usize,
    pub u: Vec<WeylElement>,
    /// Second sequence for the FF-type series.
    pub v: Vec<WeylElement>,
    /// Single Weyl index (the w of F and FF, the v of Ft).
    pub w: Option<WeylElement>,
    pub class_dim: Option<usize>,
    pub ambient_dim: usize,
    pub leaf_dim: usize,
    pub symplectic_rank: usize,
    pub stabilizer: Subspace,
}

impl LeafDescriptor {
    /// leaf_dim − rank = corank = codim of the stabilizer in h.
    pub fn corank_identity_holds(&self, rank_h: usize) -> bool {
        self.leaf_dim - self.symplectic_rank == rank_h - self.stabilizer.dim()
    }
}

/// Dimension bookkeeping from root data: dim G = 2|Δ_+| + rank,
/// dim B = |Δ_+| + rank, dim T = rank.
pub fn group_dims(wg: &WeylGroup) -> (usize, usize, usize) {
    let p = wg.rs.num_positive();
    let r = wg.rs.rank;
    (2 * p + r, p + r, r)
}

fn check_cap(order: usize, tuples: u32, extra: u128, cap: u128) -> Result<(), SeriesError> {
    let estimate = (order as u128).pow(tuples).saturating_mul(extra);
    if estimate > cap {
        return Err(SeriesError::EnumerationCap { estimate, cap });
    }
    Ok(())
}

/// All tuples in W^n, lexicographic in the enumeration order of W.
fn tuples(wg: &WeylGroup, n: usize) -> Vec<Vec<WeylElement>> {
    let elems = wg.all_elements();
    let mut out: Vec<Vec<WeylElement>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * elems.len());
        for stem in &out {
            for &e in &elems {
                let mut t = stem.clone();
                t.push(e);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

fn total_length(wg: &WeylGroup, seq: &[WeylElement]) -> usize {
    seq.iter().map(|&x| wg.length(x)).sum()
}

/// Nonemptiness criterion for the FF-type strata:
/// w ≤ (v_1 ∗ ⋯ ∗ v_n)^{-1} ∗ u_1 ∗ ⋯ ∗ u_n.
pub fn wuv_nonempty(
    wg: &WeylGroup,
    u: &[WeylElement],
    v: &[WeylElement],
    w: WeylElement,
) -> bool {
    let dv = wg.demazure_of(v);
    let mut acc = wg.inverse(dv);
    for &ui in u {
        acc = wg.demazure(acc, ui);
    }
    wg.bruhat_leq(w, acc)
}

/// The same criterion decided through the Bruhat-cell product recursion:
/// some cell x of the u-product and some cell y of the v-product must satisfy
/// w ≤ y^{-1} ∗ x. Used as an independent cross-check of `wuv_nonempty`.
pub fn wuv_nonempty_via_cells(
    wg: &WeylGroup,
    u: &[WeylElement],
    v: &[WeylElement],
    w: WeylElement,
) -> bool {
    let xs = wg.cell_product_set(u);
    let ys = wg.cell_product_set(v);
    for &x in &xs {
        for &y in &ys {
            if wg.bruhat_leq(w, wg.demazure(wg.inverse(y), x)) {
                return true;
            }
        }
    }
    false
}

/// Leaves of the n-fold flag product: indices (u ∈ W^n, w) with
/// w ≤ u_1 ∗ ⋯ ∗ u_n, dimension l(u) − l(w), rank
/// l(u) − l(w) − dim ker(1 + u_1⋯u_n w^{-1}), stabilizer Im(1 + u_1⋯u_n w^{-1}).
pub fn enumerate_f(wg: &WeylGroup, n: usize, cap: u128) -> Result<Vec<LeafDescriptor>, SeriesError> {
    check_cap(wg.order(), n as u32, wg.order() as u128, cap)?;
    let p = wg.rs.num_positive();
    let mut out = Vec::new();
    for u in tuples(wg, n) {
        let dem = wg.demazure_of(&u);
        let lu = total_length(wg, &u);
        let prod = wg.product_of(&u);
        for w in wg.all_elements() {
            if !wg.bruhat_leq(w, dem) {
                continue;
            }
            let leaf_dim = lu - wg.length(w);
            let op = wg.multiply(prod, wg.inverse(w));
            let (ker, image) = wg.signed_endomorphism(1, op);
            out.push(LeafDescriptor {
                series: SeriesTag::F,
                n,
                u: u.clone(),
                v: Vec::new(),
                w: Some(w),
                class_dim: None,
                ambient_dim: n * p,
                leaf_dim,
                symplectic_rank: leaf_dim - ker,
                stabilizer: image,
            });
        }
    }
    Ok(out)
}

/// Leaves of the n-fold double-flag product: indices (u, v ∈ W^n, w) passing
/// the criterion, dimension l(u) + l(v) − l(w), rank and stabilizer from
/// 1 + u_1⋯u_n w^{-1} (v_1⋯v_n)^{-1}.
pub fn enumerate_ff(
    wg: &WeylGroup,
    n: usize,
    cap: u128,
) -> Result<Vec<LeafDescriptor>, SeriesError> {
    check_cap(wg.order(), 2 * n as u32, wg.order() as u128, cap)?;
    let p = wg.rs.num_positive();
    let mut out = Vec::new();
    for u in tuples(wg, n) {
        let lu = total_length(wg, &u);
        let pu = wg.product_of(&u);
        for v in tuples(wg, n) {
            let lv = total_length(wg, &v);
            let pv = wg.product_of(&v);
            for w in wg.all_elements() {
                if !wuv_nonempty(wg, &u, &v, w) {
                    continue;
                }
                let leaf_dim = lu + lv - wg.length(w);
                let op = wg.multiply(wg.multiply(pu, wg.inverse(w)), wg.inverse(pv));
                let (ker, image) = wg.signed_endomorphism(1, op);
                out.push(LeafDescriptor {
                    series: SeriesTag::FF,
                    n,
                    u: u.clone(),
                    v: v.clone(),
                    w: Some(w),
                    class_dim: None,
                    ambient_dim: 2 * n * p,
                    leaf_dim,
                    symplectic_rank: leaf_dim - ker,
                    stabilizer: image,
                });
            }
        }
    }
    Ok(out)
}

/// Leaves of the n-fold group chain: indices (u ∈ W^n, v ∈ W), all nonempty,
/// dimension l(u) + l(v) + dim T, rank l(u) + l(v) + dim Im(1 − u_1⋯u_n v^{-1}),
/// stabilizer Im(1 − u_1⋯u_n v^{-1}).
pub fn enumerate_ftilde(
    wg: &WeylGroup,
    n: usize,
    cap: u128,
) -> Result<Vec<LeafDescriptor>, SeriesError> {
    check_cap(wg.order(), n as u32, wg.order() as u128, cap)?;
    let (dim_g, dim_b, dim_t) = group_dims(wg);
    let ambient = n * dim_g - (n - 1) * dim_b;
    let mut out = Vec::new();
    for u in tuples(wg, n) {
        let lu = total_length(wg, &u);
        let pu = wg.product_of(&u);
        for v in wg.all_elements() {
            let op = wg.multiply(pu, wg.inverse(v));
            let (_, image) = wg.signed_endomorphism(-1, op);
            let leaf_dim = lu + wg.length(v) + dim_t;
            out.push(LeafDescriptor {
                series: SeriesTag::Ftilde,
                n,
                u: u.clone(),
                v: Vec::new(),
                w: Some(v),
                class_dim: None,
                ambient_dim: ambient,
                leaf_dim,
                symplectic_rank: lu + wg.length(v) + image.dim(),
                stabilizer: image,
            });
        }
    }
    Ok(out)
}

/// One leaf of the n-fold doubled group chain for a conjugacy class of the
/// given dimension: dimension l(u) + l(v) + dim C + dim T, rank and
/// stabilizer from 1 − u_1⋯u_n (v_1⋯v_n)^{-1}. The class family is never
/// enumerated; class data is an input.
pub fn leaf_fftilde(
    wg: &WeylGroup,
    n: usize,
    u: &[WeylElement],
    v: &[WeylElement],
    class_dim: usize,
) -> Result<LeafDescriptor, SeriesError> {
    let (dim_g, _, dim_t) = group_dims(wg);
    if class_dim > dim_g - dim_t {
        return Err(SeriesError::BadClassDim(class_dim, dim_g - dim_t));
    }
    let (dim_gg, dim_bb) = (2 * dim_g, 2 * (dim_g - dim_t) / 2 + 2 * dim_t);
    let ambient = n * dim_gg - (n - 1) * dim_bb;
    let lu = total_length(wg, u);
    let lv = total_length(wg, v);
    let op = wg.multiply(wg.product_of(u), wg.inverse(wg.product_of(v)));
    let (_, image) = wg.signed_endomorphism(-1, op);
    let leaf_dim = lu + lv + class_dim + dim_t;
    Ok(LeafDescriptor {
        series: SeriesTag::FFtilde,
        n,
        u: u.to_vec(),
        v: v.to_vec(),
        w: None,
        class_dim: Some(class_dim),
        ambient_dim: ambient,
        leaf_dim,
        symplectic_rank: lu + lv + class_dim + image.dim(),
        stabilizer: image,
    })
}

/// All FFt leaves for one class dimension.
pub fn enumerate_fftilde(
    wg: &WeylGroup,
    n: usize,
    class_dim: usize,
    cap: u128,
) -> Result<Vec<LeafDescriptor>, SeriesError> {
    check_cap(wg.order(), 2 * n as u32, 1, cap)?;
    let mut out = Vec::new();
    for u in tuples(wg, n) {
        for v in tuples(wg, n) {
            out.push(leaf_fftilde(wg, n, &u, &v, class_dim)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_core::RootSystem;

    fn group(label: &str) -> WeylGroup {
        WeylGroup::build(&RootSystem::build(label).unwrap())
    }

    const CAP: u128 = 1_000_000;

    #[test]
    fn f_series_a1() {
        let wg = group("A1");
        let leaves = enumerate_f(&wg, 1, CAP).unwrap();
        assert_eq!(leaves.len(), 3);
        // (u=e,w=e): dim 0, rank 0, stab h; (u=s,w=e): dim 1, rank 0, stab 0;
        // (u=s,w=s): dim 0, rank 0, stab h.
        let find = |u: &str, w: &str| {
            let ue = wg.parse(u).unwrap();
            let we = wg.parse(w).unwrap();
            leaves.iter().find(|l| l.u == vec![ue] && l.w == Some(we)).unwrap().clone()
        };
        let l = find("e", "e");
        assert_eq!((l.leaf_dim, l.symplectic_rank, l.stabilizer.dim()), (0, 0, 1));
        let l = find("s1", "e");
        assert_eq!((l.leaf_dim, l.symplectic_rank, l.stabilizer.dim()), (1, 0, 0));
        let l = find("s1", "s1");
        assert_eq!((l.leaf_dim, l.symplectic_rank, l.stabilizer.dim()), (0, 0, 1));
    }

    #[test]
    fn f_series_counts() {
        let wg = group("A2");
        assert_eq!(enumerate_f(&wg, 1, CAP).unwrap().len(), 19);
        let a1 = group("A1");
        let leaves = enumerate_f(&a1, 2, CAP).unwrap();
        assert_eq!(leaves.len(), 7);
        // (u = (s,s), w = e): dim 2, rank 2, stabilizer = h.
        let s = a1.generator(0);
        let l = leaves
            .iter()
            .find(|l| l.u == vec![s, s] && l.w == Some(a1.identity()))
            .unwrap();
        assert_eq!((l.leaf_dim, l.symplectic_rank, l.stabilizer.dim()), (2, 2, 1));
    }

    #[test]
    fn f_series_invariants() {
        for (label, n) in [("A2", 1), ("A1", 2), ("B2", 1)] {
            let wg = group(label);
            let leaves = enumerate_f(&wg, n, CAP).unwrap();
            let r = wg.rs.rank;
            let p = wg.rs.num_positive();
            for l in &leaves {
                assert!(l.symplectic_rank <= l.leaf_dim && l.leaf_dim <= l.ambient_dim);
                assert!(l.corank_identity_holds(r), "{label}");
                assert_eq!(l.symplectic_rank % 2, 0, "{label}: rank must be even");
            }
            // The maximal leaf is open: u = (w0,..), w = e has full dimension.
            let w0 = wg.longest_element();
            let top = leaves
                .iter()
                .find(|l| l.u.iter().all(|&x| x == w0) && l.w == Some(wg.identity()))
                .unwrap();
            assert_eq!(top.leaf_dim, n * p);
            // Monotonicity: larger w, smaller leaf.
            for l in &leaves {
                for l2 in &leaves {
                    if l.u == l2.u && wg.bruhat_leq(l.w.unwrap(), l2.w.unwrap()) {
                        assert!(l.leaf_dim >= l2.leaf_dim);
                    }
                }
            }
            // Index uniqueness.
            let mut keys: Vec<_> = leaves.iter().map(|l| (l.u.clone(), l.w)).collect();
            keys.sort();
            keys.dedup();
            assert_eq!(keys.len(), leaves.len());
        }
    }

    #[test]
    fn ff_series_a1() {
        let wg = group("A1");
        let leaves = enumerate_ff(&wg, 1, CAP).unwrap();
        let s = wg.generator(0);
        let e = wg.identity();
        // (u,v,w) = (s,s,e): dim 2, rank 2.
        let l = leaves
            .iter()
            .find(|l| l.u == vec![s] && l.v == vec![s] && l.w == Some(e))
            .unwrap();
        assert_eq!((l.leaf_dim, l.symplectic_rank), (2, 2));
        // (e,e,s) is excluded.
        assert!(!leaves.iter().any(|l| l.u == vec![e] && l.v == vec![e] && l.w == Some(s)));
        // Each (u, v) contributes the Bruhat interval below the criterion bound.
        for u in wg.all_elements() {
            for v in wg.all_elements() {
                let bound = wg.demazure(wg.inverse(v), u);
                let expect =
                    wg.all_elements().iter().filter(|&&w| wg.bruhat_leq(w, bound)).count();
                let got =
                    leaves.iter().filter(|l| l.u == vec![u] && l.v == vec![v]).count();
                assert_eq!(got, expect);
            }
        }
    }

    #[test]
    fn ff_series_invariants() {
        let wg = group("A2");
        let leaves = enumerate_ff(&wg, 1, CAP).unwrap();
        for l in &leaves {
            assert!(l.corank_identity_holds(2));
            assert_eq!(l.symplectic_rank % 2, 0);
            assert_eq!(l.ambient_dim, 6);
        }
    }

    #[test]
    fn ftilde_series_examples() {
        let a1 = group("A1");
        let leaves = enumerate_ftilde(&a1, 1, CAP).unwrap();
        assert_eq!(leaves.len(), 4);
        let s = a1.generator(0);
        let e = a1.identity();
        let find = |u: WeylElement, v: WeylElement| {
            leaves.iter().find(|l| l.u == vec![u] && l.w == Some(v)).unwrap().clone()
        };
        // (e, e): the torus with zero Poisson structure.
        let l = find(e, e);
        assert_eq!((l.leaf_dim, l.symplectic_rank, l.stabilizer.dim()), (1, 0, 0));
        // (s, s): dim 3, rank 2, stabilizer 0.
        let l = find(s, s);
        assert_eq!((l.leaf_dim, l.symplectic_rank, l.stabilizer.dim()), (3, 2, 0));
        // A2, (w0, e): dim 5, rank 4, stabilizer dim 1.
        let a2 = group("A2");
        let leaves = enumerate_ftilde(&a2, 1, CAP).unwrap();
        let w0 = a2.longest_element();
        let l = leaves
            .iter()
            .find(|l| l.u == vec![w0] && l.w == Some(a2.identity()))
            .unwrap();
        assert_eq!((l.leaf_dim, l.symplectic_rank, l.stabilizer.dim()), (5, 4, 1));
        // n = 1 reproduces the double Bruhat picture: dim l(u)+l(v)+rank.
        for l in &leaves {
            assert_eq!(
                l.leaf_dim,
                a2.length(l.u[0]) + a2.length(l.w.unwrap()) + 2
            );
            assert!(l.corank_identity_holds(2));
            assert_eq!(l.symplectic_rank % 2, 0);
            assert_eq!(l.ambient_dim, 8);
        }
    }

    #[test]
    fn fftilde_examples() {
        let wg = group("A1");
        let e = wg.identity();
        let s = wg.generator(0);
        // u = v = e, identity class: the torus-like leaf of dim 1.
        let l = leaf_fftilde(&wg, 1, &[e], &[e], 0).unwrap();
        assert_eq!((l.leaf_dim, l.symplectic_rank), (1, 0));
        // u = v = e, regular semisimple class (dim 2): dim 3, rank 2.
        let l = leaf_fftilde(&wg, 1, &[e], &[e], 2).unwrap();
        assert_eq!((l.leaf_dim, l.symplectic_rank), (3, 2));
        // u = v = s, identity class: dim 3, rank 2, stabilizer 0.
        let l = leaf_fftilde(&wg, 1, &[s], &[s], 0).unwrap();
        assert_eq!((l.leaf_dim, l.symplectic_rank, l.stabilizer.dim()), (3, 2, 0));
        assert!(l.corank_identity_holds(1));
        // Ambient: dim of the doubled chain.
        assert_eq!(l.ambient_dim, 6);
        // Class dimension beyond dim G − rank is rejected.
        assert!(leaf_fftilde(&wg, 1, &[e], &[e], 3).is_err());
    }

    #[test]
    fn wuv_examples() {
        let a2 = group("A2");
        let s1 = a2.generator(0);
        let s2 = a2.generator(1);
        let e = a2.identity();
        // n = 1, v = e reduces to w ≤ u.
        for u in a2.all_elements() {
            for w in a2.all_elements() {
                assert_eq!(wuv_nonempty(&a2, &[u], &[e], w), a2.bruhat_leq(w, u));
            }
        }
        let s2s1 = a2.multiply(s2, s1);
        assert!(wuv_nonempty(&a2, &[s1], &[s2], s2s1));
        assert!(!wuv_nonempty(&a2, &[e], &[e], s1));
    }

    #[test]
    fn wuv_cell_route_agrees_small() {
        let a1 = group("A1");
        for u1 in a1.all_elements() {
            for u2 in a1.all_elements() {
                for v1 in a1.all_elements() {
                    for v2 in a1.all_elements() {
                        for w in a1.all_elements() {
                            assert_eq!(
                                wuv_nonempty(&a1, &[u1, u2], &[v1, v2], w),
                                wuv_nonempty_via_cells(&a1, &[u1, u2], &[v1, v2], w)
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_cap_enforced() {
        let wg = group("A2");
        assert!(matches!(
            enumerate_f(&wg, 9, 1000),
            Err(SeriesError::EnumerationCap { .. })
        ));
    }
}
