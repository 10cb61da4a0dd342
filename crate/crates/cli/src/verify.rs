//! Verification subcommands. Each check prints one pass/fail line with exact
//! integer evidence; a nonzero exit means at least one check failed.

use crate::VerifyWhat;
use std::process::ExitCode;
use tleaf_core::checks::{self, SeriesContext};
use tleaf_core::lie_core::{LieAlgebra, RootSystem};
use tleaf_core::rmat::{self, cyb, expected_mixed_images, standard_r, tensor_is_ad_invariant};
use tleaf_core::series::{self, SeriesTag};
use tleaf_core::sl_oracle::{sample_leaf_point, GroupElement, SlRealization};
use tleaf_core::exactlin::{rat, ratio, Matrix};

struct Report {
    failures: usize,
}

impl Report {
    fn new() -> Report {
        Report { failures: 0 }
    }

    fn check(&mut self, name: &str, ok: bool, evidence: String) {
        if ok {
            println!("pass  {name}: {evidence}");
        } else {
            println!("FAIL  {name}: {evidence}");
            self.failures += 1;
        }
    }

    fn finish(self) -> ExitCode {
        if self.failures == 0 {
            ExitCode::SUCCESS
        } else {
            println!("{} check(s) failed", self.failures);
            ExitCode::from(crate::EXIT_FAIL)
        }
    }
}

pub fn run(what: VerifyWhat) -> ExitCode {
    match what {
        VerifyWhat::Cyb { type_label, n } => verify_cyb(&type_label, n),
        VerifyWhat::Tilde { type_label, n } => verify_tilde(&type_label, n),
        VerifyWhat::Delta { type_label, n, cap, full } => {
            verify_delta(&type_label, n, if full { usize::MAX } else { cap })
        }
        VerifyWhat::Rank { series, type_label, n, samples, seed } => {
            verify_rank(&series, &type_label, n, samples, seed)
        }
    }
}

fn algebra_or_exit(label: &str) -> Result<LieAlgebra, ExitCode> {
    match RootSystem::build(label) {
        Ok(rs) => Ok(LieAlgebra::build(&rs)),
        Err(e) => {
            eprintln!("{e}");
            Err(ExitCode::from(crate::EXIT_PARSE))
        }
    }
}

fn verify_cyb(label: &str, n: usize) -> ExitCode {
    let g = match algebra_or_exit(label) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let mut report = Report::new();
    let rd = match standard_r(&g) {
        Ok(rd) => rd,
        Err(e) => {
            report.check("standard r-matrix", false, e.to_string());
            return report.finish();
        }
    };
    let t = cyb(&rd.br, &rd.r);
    report.check(
        &format!("CYB(r_st) = 0 on {label}"),
        t.is_zero(),
        format!("{} nonzero entries in a {}^3 tensor", t.nonzero_count(), g.dim),
    );
    let inv = tensor_is_ad_invariant(&rd.br, &rd.r.symmetric_part());
    report.check(&format!("r_st + r_st^21 ad-invariant on {label}"), inv, "exact".into());
    for k in 2..=n {
        match rmat::mixed_product(&rd, k) {
            Ok(rk) => {
                let t = cyb(&rk.br, &rk.r);
                report.check(
                    &format!("CYB(mixed product, n = {k}) = 0"),
                    t.is_zero(),
                    format!("{} nonzero entries", t.nonzero_count()),
                );
                let inv = tensor_is_ad_invariant(&rk.br, &rk.r.symmetric_part());
                report.check(
                    &format!("symmetric part ad-invariant (n = {k})"),
                    inv,
                    "exact".into(),
                );
            }
            Err(e) => report.check(&format!("mixed product n = {k}"), false, e.to_string()),
        }
        match rmat::extended_mixed_product(&rd, k) {
            Ok(rk) => {
                let t = cyb(&rk.br, &rk.r);
                report.check(
                    &format!("CYB(extended product, n = {k}) = 0"),
                    t.is_zero(),
                    format!("{} nonzero entries", t.nonzero_count()),
                );
            }
            Err(e) => report.check(&format!("extended product n = {k}"), false, e.to_string()),
        }
    }
    report.finish()
}

fn verify_tilde(label: &str, n: usize) -> ExitCode {
    let g = match algebra_or_exit(label) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let mut report = Report::new();
    let rd = standard_r(&g).expect("standard r-matrix");
    for k in 2..=n.max(2) {
        let rk = rmat::mixed_product(&rd, k).expect("mixed product");
        let (fp, fm) = expected_mixed_images(&rd, k);
        report.check(
            &format!("Im r~flat_+ matches stated subalgebra (n = {k})"),
            rk.f_plus == fp,
            format!("dim {} vs {}", rk.f_plus.dim(), fp.dim()),
        );
        report.check(
            &format!("Im r~flat_- matches stated subalgebra (n = {k})"),
            rk.f_minus == fm,
            format!("dim {} vs {}", rk.f_minus.dim(), fm.dim()),
        );
    }
    report.finish()
}

fn verify_delta(label: &str, n: usize, cap: usize) -> ExitCode {
    let mut report = Report::new();
    for tag in [SeriesTag::F, SeriesTag::Ftilde, SeriesTag::FF, SeriesTag::FFtilde] {
        let ctx = match SeriesContext::new(tag, label) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(crate::EXIT_PARSE);
            }
        };
        match checks::hypothesis_sweep(&ctx) {
            Ok(count) => report.check(
                &format!("admissibility hypothesis, series {} on {label}", tag.as_str()),
                true,
                format!("{count} chart triples, all zero"),
            ),
            Err(e) => report.check(
                &format!("admissibility hypothesis, series {}", tag.as_str()),
                false,
                e.to_string(),
            ),
        }
        for k in 1..=n {
            match checks::delta_sweep(&ctx, k, cap) {
                Ok(count) => report.check(
                    &format!("delta = 0, series {} n = {k}", tag.as_str()),
                    true,
                    format!("{count} orbit-pair setups, both routes zero"),
                ),
                Err(e) => report.check(
                    &format!("delta = 0, series {} n = {k}", tag.as_str()),
                    false,
                    e.to_string(),
                ),
            }
        }
    }
    report.finish()
}

/// Class representatives for the doubled-chain checks: identity, a regular
/// semisimple torus element, and the regular unipotent.
pub fn standard_class_reps(m: usize) -> Vec<GroupElement> {
    let ident = GroupElement::new(Matrix::identity(m)).unwrap();
    let mut t = Matrix::identity(m);
    let mut prod = rat(1);
    for i in 0..m - 1 {
        let val = rat(2 + i as i64);
        prod *= &val;
        t.set(i, i, val);
    }
    t.set(m - 1, m - 1, prod.recip());
    let regss = GroupElement::new(t).unwrap();
    let mut u = Matrix::identity(m);
    for i in 0..m - 1 {
        u.set(i, i + 1, rat(1));
    }
    let regunip = GroupElement::new(u).unwrap();
    let _ = ratio(1, 1);
    vec![ident, regss, regunip]
}

fn verify_rank(series: &str, label: &str, n: usize, samples: u64, seed: u64) -> ExitCode {
    let Some(tag) = SeriesTag::parse(series) else {
        eprintln!("unknown series `{series}`");
        return ExitCode::from(crate::EXIT_PARSE);
    };
    let m = match label {
        "A1" => 2,
        "A2" => 3,
        _ => {
            eprintln!("the matrix oracle covers types A1 and A2 only");
            return ExitCode::from(crate::EXIT_PARSE);
        }
    };
    let ctx = SeriesContext::new(tag, label).expect("series context");
    let or = SlRealization::new(m);
    let mut report = Report::new();
    let prod = match ctx.product(n) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(crate::EXIT_PARSE);
        }
    };
    let budget = 8000;
    let leaves = match tag {
        SeriesTag::F => series::enumerate_f(&ctx.wg, n, 1 << 20).unwrap(),
        SeriesTag::FF => series::enumerate_ff(&ctx.wg, n, 1 << 20).unwrap(),
        SeriesTag::Ftilde => series::enumerate_ftilde(&ctx.wg, n, 1 << 20).unwrap(),
        SeriesTag::FFtilde => {
            let mut out = Vec::new();
            for rep in standard_class_reps(m) {
                let cd = or.class_dim(&rep);
                for l in series::enumerate_fftilde(&ctx.wg, n, cd, 1 << 20).unwrap() {
                    out.push((l, Some(rep.clone())));
                }
            }
            let mut passed = 0usize;
            let total = out.len() * samples as usize;
            for (leaf, rep) in &out {
                for s in 0..samples {
                    let point =
                        sample_leaf_point(&or, leaf, seed.wrapping_add(s), budget, rep.as_ref());
                    match point {
                        Ok(p) => {
                            let ads = checks::oracle_slot_ads(&ctx, &or, &prod, &p);
                            let refs: Vec<&Matrix> = ads.iter().collect();
                            if checks::rank_check_at_point(&prod, &refs, leaf.symplectic_rank)
                                .is_ok()
                            {
                                passed += 1;
                            }
                        }
                        Err(_) => {}
                    }
                }
            }
            report.check(
                &format!("oracle rank agreement, series FFt n = {n}"),
                passed == total,
                format!("{passed}/{total} sampled points"),
            );
            return report.finish();
        }
    };
    let mut passed = 0usize;
    let total = leaves.len() * samples as usize;
    for leaf in &leaves {
        for s in 0..samples {
            match sample_leaf_point(&or, leaf, seed.wrapping_add(s), budget, None) {
                Ok(p) => {
                    if checks::oracle_point_check(&ctx, &or, &prod, leaf, &p).is_ok() {
                        passed += 1;
                    }
                }
                Err(_) => {}
            }
        }
    }
    report.check(
        &format!("oracle rank and stabilizer agreement, series {} n = {n}", tag.as_str()),
        passed == total,
        format!("{passed}/{total} leaf points"),
    );
    report.finish()
}
