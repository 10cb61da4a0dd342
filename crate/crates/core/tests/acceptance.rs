//! Acceptance suite: one test per criterion, each printing a pass line with
//! exact integer evidence. Everything is computed in exact rational
//! arithmetic with zero tolerance.

use tleaf_core::checks::{self, SeriesContext};
use tleaf_core::exactlin::{rat, Matrix, Rational};
use tleaf_core::lie_core::{LieAlgebra, RootSystem};
use tleaf_core::rmat::{
    cyb, expected_mixed_images, extended_mixed_product, mixed_product, standard_r,
    tensor_is_ad_invariant,
};
use tleaf_core::series::{self, SeriesTag};
use tleaf_core::sl_oracle::{sample_leaf_point, GroupElement, SlRealization};
use tleaf_core::weyl::WeylGroup;
use num_traits::Zero;

const CAP: u128 = 1 << 24;

fn algebra(label: &str) -> LieAlgebra {
    LieAlgebra::build(&RootSystem::build(label).unwrap())
}

fn group(label: &str) -> WeylGroup {
    WeylGroup::build(&RootSystem::build(label).unwrap())
}

/// Regular-semisimple, identity, and regular-unipotent class representatives
/// in SL_m.
fn class_reps(m: usize) -> Vec<GroupElement> {
    let ident = GroupElement::new(Matrix::identity(m)).unwrap();
    let mut t = Matrix::identity(m);
    let mut prod = rat(1);
    for i in 0..m - 1 {
        let v = rat(2 + i as i64);
        prod *= &v;
        t.set(i, i, v);
    }
    t.set(m - 1, m - 1, prod.recip());
    let mut u = Matrix::identity(m);
    for i in 0..m - 1 {
        u.set(i, i + 1, rat(1));
    }
    vec![ident, GroupElement::new(t).unwrap(), GroupElement::new(u).unwrap()]
}

#[test]
fn criterion_01_quasitriangularity() {
    let mut cases = 0usize;
    for label in ["A1", "A2", "A3", "B2"] {
        let g = algebra(label);
        let rd = standard_r(&g).unwrap();
        assert!(cyb(&rd.br, &rd.r).is_zero(), "CYB(r_st) != 0 on {label}");
        assert!(
            tensor_is_ad_invariant(&rd.br, &rd.r.symmetric_part()),
            "r_st symmetric part not invariant on {label}"
        );
        cases += 1;
    }
    for label in ["A1", "A2"] {
        let g = algebra(label);
        let rd = standard_r(&g).unwrap();
        for n in 2..=4 {
            let rn = mixed_product(&rd, n).unwrap();
            assert!(cyb(&rn.br, &rn.r).is_zero(), "CYB(r^({n})) != 0 on {label}");
            assert!(
                tensor_is_ad_invariant(&rn.br, &rn.r.symmetric_part()),
                "r^({n}) symmetric part not invariant on {label}"
            );
            cases += 1;
        }
        for n in 2..=3 {
            let rn = extended_mixed_product(&rd, n).unwrap();
            assert!(cyb(&rn.br, &rn.r).is_zero(), "CYB(extension, n={n}) != 0 on {label}");
            assert!(
                tensor_is_ad_invariant(&rn.br, &rn.r.symmetric_part()),
                "extension symmetric part not invariant on {label}"
            );
            cases += 1;
        }
    }
    println!("criterion 1 pass: quasitriangularity exact on {cases} r-matrices");
}

#[test]
fn criterion_02_mixed_product_images() {
    let mut cases = 0usize;
    for label in ["A1", "A2"] {
        let g = algebra(label);
        let rd = standard_r(&g).unwrap();
        for n in 2..=5 {
            let rn = mixed_product(&rd, n).unwrap();
            let (fp, fm) = expected_mixed_images(&rd, n);
            assert_eq!(rn.f_plus, fp, "{label} n={n} plus image");
            assert_eq!(rn.f_minus, fm, "{label} n={n} minus image");
            cases += 2;
        }
    }
    println!("criterion 2 pass: mixed-product image identities exact in {cases} comparisons");
}

#[test]
fn criterion_03_sl2_flag_variety() {
    let wg = group("A1");
    let leaves = series::enumerate_f(&wg, 1, CAP).unwrap();
    assert_eq!(leaves.len(), 3);
    let mut signature: Vec<(usize, usize, usize)> = leaves
        .iter()
        .map(|l| (l.leaf_dim, l.symplectic_rank, l.stabilizer.dim()))
        .collect();
    signature.sort();
    assert_eq!(signature, vec![(0, 0, 1), (0, 0, 1), (1, 0, 0)]);
    // Oracle agreement at 5 seeded points of the open leaf.
    let ctx = SeriesContext::new(SeriesTag::F, "A1").unwrap();
    let or = SlRealization::new(2);
    let prod = ctx.product(1).unwrap();
    let open = leaves.iter().find(|l| l.leaf_dim == 1).unwrap();
    for seed in 0..5 {
        let p = sample_leaf_point(&or, open, seed, 2000, None).unwrap();
        checks::oracle_point_check(&ctx, &or, &prod, open, &p).unwrap();
    }
    println!("criterion 3 pass: 3 leaves with dims/ranks/stabilizers (0,0,1),(1,0,0),(0,0,1); 5 oracle points of the open leaf at rank 0");
}

#[test]
fn criterion_04_sl3_flag_variety() {
    let ctx = SeriesContext::new(SeriesTag::F, "A2").unwrap();
    let or = SlRealization::new(3);
    let prod = ctx.product(1).unwrap();
    let leaves = series::enumerate_f(&ctx.wg, 1, CAP).unwrap();
    assert_eq!(leaves.len(), 19);
    let mut points = 0usize;
    for leaf in &leaves {
        assert!(leaf.corank_identity_holds(2));
        // Engine stabilizer at the Weyl-representative pair equals the
        // closed form.
        checks::stabilizer_check(&ctx, &prod, leaf, None).unwrap();
        for seed in 0..3 {
            let p = sample_leaf_point(&or, leaf, 100 + seed, 4000, None).unwrap();
            // Rank (both routes), tangent dimension, and the stabilizer by
            // the p_t route and the Drinfeld route at the sampled point.
            checks::oracle_point_check(&ctx, &or, &prod, leaf, &p).unwrap();
            points += 1;
        }
    }
    println!("criterion 4 pass: 19 leaves, oracle rank/stabilizer/corank verified at {points} seeded points");
}

#[test]
fn criterion_05_delta_sweep() {
    let mut total = 0usize;
    let full = 1_000_000usize;
    for (tag, caps) in [
        (SeriesTag::F, [full, full]),
        (SeriesTag::Ftilde, [full, full]),
        (SeriesTag::FF, [full, 300]),
        (SeriesTag::FFtilde, [full, 300]),
    ] {
        let ctx = SeriesContext::new(tag, "A2").unwrap();
        let triples = checks::hypothesis_sweep(&ctx).unwrap();
        assert!(triples >= 216);
        for n in 1..=2 {
            let count = checks::delta_sweep(&ctx, n, caps[n - 1]).unwrap();
            if tag == SeriesTag::F && n == 2 {
                assert!(count >= 216, "series F n = 2 must sweep at least 216 pairs");
            }
            total += count;
        }
    }
    // Extra class-entry cases for the doubled group chain: the tail slot of
    // the minus tuple carries torus and unipotent class representatives.
    let ctx = SeriesContext::new(SeriesTag::FFtilde, "A2").unwrap();
    let g = &ctx.g;
    let torus = g.torus_ad(&[rat(2), rat(3)]);
    let mut nil = vec![Rational::zero(); g.dim];
    nil[g.idx_e(g.simple_root_pos(0))] = rat(1);
    nil[g.idx_e(g.simple_root_pos(1))] = rat(1);
    let unip = g.br.exp_ad(&nil);
    let prod1 = ctx.product(1).unwrap();
    let ident = ctx.entry_identity();
    for cls in [&torus, &unip] {
        let cls_entry = Matrix::block_diag(&[cls, &Matrix::identity(g.dim)]);
        for u in ctx.wg.all_elements() {
            for v in ctx.wg.all_elements() {
                let tuples = checks::OrbitTuples {
                    plus: vec![ctx.entry(u, Some(v)), ident.clone()],
                    minus: vec![cls_entry.clone(), ident.clone()],
                };
                let (d3, d2) = checks::delta_both_routes(&prod1, &tuples).unwrap();
                assert_eq!((d3, d2), (0, 0));
                total += 1;
            }
        }
    }
    println!("criterion 5 pass: delta = 0 by both routes on {total} orbit-pair setups across the four series (n <= 2, A2)");
}

#[test]
fn criterion_06_base_point_independence() {
    let mut pairs = 0usize;
    let mut reps = 0usize;
    let mut seed = 1u64;
    for tag in [SeriesTag::F, SeriesTag::Ftilde, SeriesTag::FF, SeriesTag::FFtilde] {
        let ctx = SeriesContext::new(tag, "A2").unwrap();
        let doubled = matches!(tag, SeriesTag::FF | SeriesTag::FFtilde);
        for n in 1..=2 {
            let prod = ctx.product(n).unwrap();
            let tuples = checks::enumerate_orbit_tuples(&ctx, &prod, 1_000_000);
            // Orbit pairs per setup: first, middle, last (two for the large
            // doubled setups at n = 2).
            let mut indices = vec![0, tuples.len() / 2, tuples.len() - 1];
            if doubled && n == 2 {
                indices.pop();
            }
            for idx in indices {
                let per_pair = if doubled && n == 2 { 3 } else { 4 };
                let seeds: Vec<u64> = (0..per_pair).map(|k| seed + k).collect();
                seed += per_pair;
                let n_reps =
                    checks::base_point_independence(&ctx, &prod, &tuples[idx], &seeds).unwrap();
                assert!(n_reps >= 3);
                reps += n_reps;
                pairs += 1;
            }
        }
    }
    assert!(seed > 20, "randomization must span at least 20 seeds");
    println!("criterion 6 pass: delta and stabilizer invariant across {reps} representative pairs of {pairs} orbit pairs (20+ seeds)");
}

#[test]
fn criterion_07_group_chain_desk_checks() {
    let mut points = 0usize;
    for m in [2usize, 3] {
        let label = format!("A{}", m - 1);
        let or = SlRealization::new(m);
        // Single chain: all (u, v), five points per stratum, constant rank.
        let ctx = SeriesContext::new(SeriesTag::Ftilde, &label).unwrap();
        let prod = ctx.product(1).unwrap();
        for leaf in series::enumerate_ftilde(&ctx.wg, 1, CAP).unwrap() {
            checks::stabilizer_check(&ctx, &prod, &leaf, None).unwrap();
            for seed in 0..5 {
                let p = sample_leaf_point(&or, &leaf, 7 + seed, 4000, None).unwrap();
                checks::oracle_rank_dim_check(&ctx, &or, &prod, &leaf, &p).unwrap();
                points += 1;
            }
        }
        // Doubled chain: all (u, v) and the three standard classes.
        let ctx = SeriesContext::new(SeriesTag::FFtilde, &label).unwrap();
        let prod = ctx.product(1).unwrap();
        for rep in class_reps(m) {
            let cdim = or.class_dim(&rep);
            let cls_ad = or.adjoint_matrix(&rep);
            for u in ctx.wg.all_elements() {
                for v in ctx.wg.all_elements() {
                    let leaf = series::leaf_fftilde(&ctx.wg, 1, &[u], &[v], cdim).unwrap();
                    // Engine stabilizer at representative tuples matches the
                    // closed form (both the two-sided and restricted ones).
                    checks::stabilizer_check(&ctx, &prod, &leaf, Some(&cls_ad)).unwrap();
                    for seed in 0..5 {
                        let p =
                            sample_leaf_point(&or, &leaf, 31 * seed + 7, 8000, Some(&rep))
                                .unwrap();
                        checks::oracle_rank_dim_check(&ctx, &or, &prod, &leaf, &p).unwrap();
                        points += 1;
                    }
                }
            }
        }
    }
    println!("criterion 7 pass: rank and leaf-dimension formulas verified at {points} sampled points (SL2 and SL3, constant rank per stratum)");
}

#[test]
fn criterion_08_weyl_combinatorics() {
    let mut checks_run = 0usize;
    for label in ["A2", "B2", "A3"] {
        let wg = group(label);
        let all = wg.all_elements();
        for &u in &all {
            for &v in &all {
                assert_eq!(
                    wg.bruhat_leq(u, v),
                    wg.bruhat_leq_lifting(u, v),
                    "{label}: Bruhat implementations disagree"
                );
                let uv = wg.demazure(u, v);
                let set = wg.cell_product_set(&[u, v]);
                let max = set.iter().copied().max_by_key(|&x| wg.length(x)).unwrap();
                assert_eq!(max, uv, "{label}: cell-product maximum");
                for &z in &all {
                    assert_eq!(
                        wg.demazure(wg.demazure(u, v), z),
                        wg.demazure(u, wg.demazure(v, z)),
                        "{label}: Demazure associativity"
                    );
                    checks_run += 1;
                }
            }
        }
    }
    println!("criterion 8 pass: Demazure associativity, dual Bruhat order, cell-product maxima exact on {checks_run} triples (A2, B2, A3)");
}

#[test]
fn criterion_09_nonemptiness_consistency() {
    let wg = group("A2");
    let all = wg.all_elements();
    let mut cases = 0usize;
    for &u1 in &all {
        for &u2 in &all {
            for &v1 in &all {
                for &v2 in &all {
                    let u = [u1, u2];
                    let v = [v1, v2];
                    // Cache both cell sets once per (u, v).
                    for &w in &all {
                        assert_eq!(
                            series::wuv_nonempty(&wg, &u, &v, w),
                            series::wuv_nonempty_via_cells(&wg, &u, &v, w),
                            "criterion disagreement"
                        );
                        cases += 1;
                    }
                }
            }
        }
    }
    assert_eq!(cases, 7776);
    println!("criterion 9 pass: Demazure criterion equals cell-product reduction on all {cases} cases (A2, n = 2)");
}

#[test]
fn criterion_10_evenness_audit() {
    let mut ranks: Vec<usize> = Vec::new();
    // Every rank emitted across the leaf families used by criteria 3-7.
    let a1 = group("A1");
    let a2 = group("A2");
    for wg in [&a1, &a2] {
        for n in 1..=2 {
            ranks.extend(
                series::enumerate_f(wg, n, CAP).unwrap().iter().map(|l| l.symplectic_rank),
            );
            ranks.extend(
                series::enumerate_ftilde(wg, n, CAP)
                    .unwrap()
                    .iter()
                    .map(|l| l.symplectic_rank),
            );
            ranks.extend(
                series::enumerate_ff(wg, n, CAP).unwrap().iter().map(|l| l.symplectic_rank),
            );
        }
    }
    for (m, wg) in [(2usize, &a1), (3usize, &a2)] {
        let or = SlRealization::new(m);
        for rep in class_reps(m) {
            let cdim = or.class_dim(&rep);
            ranks.extend(
                series::enumerate_fftilde(wg, 1, cdim, CAP)
                    .unwrap()
                    .iter()
                    .map(|l| l.symplectic_rank),
            );
        }
    }
    let odd: Vec<usize> = ranks.iter().copied().filter(|r| r % 2 == 1).collect();
    assert!(odd.is_empty(), "odd symplectic ranks found: {odd:?}");
    println!("criterion 10 pass: all {} emitted symplectic ranks are even", ranks.len());
}
