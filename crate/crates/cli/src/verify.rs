//! Randomized verification suites shared by `verify {modular,main,rank-deficient,all}`.

use num_complex::Complex64;
use rand::Rng;

use gcl_core::cones::{build_sign_table, check_sign_lemma, check_triple_and_coverage, verify_f_vanishing};
use gcl_core::fuzz::Fuzzer;
use gcl_core::gamma::{
    alternating_g_product, sample_admissible_x, sample_smoothed_samples, verify_main,
    verify_modular, Truncation,
};
use gcl_core::rat::{ratio, Rat};
use gcl_core::smoothing::{smoothed_bn_dedekind, smoothed_bn_direct};

use crate::report::{Check, Report};

/// Full-rank modular identity: |alternating product - exp(2 i pi B)| < tol.
pub fn suite_modular(report: &mut Report, seed: u64, count: usize, tol: f64, trunc: &Truncation) {
    let mut fz = Fuzzer::new(seed);
    let mut done = 0usize;
    let mut attempts = 0usize;
    while done < count && attempts < count * 20 {
        attempts += 1;
        let n = fz.rng().random_range(2..=3usize);
        let Ok(fam) = fz.full_rank(n) else { continue };
        let v = fz.v_vector(n);
        let Ok(x) = sample_admissible_x(&fam, fz.rng(), 0.25) else {
            continue;
        };
        let w = Complex64::new(
            fz.rng().random_range(-0.4..0.4),
            fz.rng().random_range(0.1..0.6),
        );
        match verify_modular(&fam, &v, w, &x, trunc) {
            Ok(res) => {
                report.push(Check::residual(&format!("modular-{done}"), res, tol));
                done += 1;
            }
            Err(_) => continue,
        }
    }
    report.push(Check::bool("modular-count", done == count));
}

/// Main theorem: smoothed alternating product = exp(2 i pi b / D).
pub fn suite_main(report: &mut Report, seed: u64, count: usize, tol: f64, trunc: &Truncation) {
    let mut fz = Fuzzer::new(seed.wrapping_add(1));
    let mut done = 0usize;
    let mut attempts = 0usize;
    while done < count && attempts < count * 20 {
        attempts += 1;
        let n = fz.rng().random_range(2..=3usize);
        let n_smooth = *[2i64, 3, 4].get(fz.rng().random_range(0..3)).unwrap();
        let Ok((fam, v)) = fz.full_rank_good(n, n_smooth) else {
            continue;
        };
        let Ok(samples) = sample_smoothed_samples(&fam, &v, n_smooth, 3, fz.rng(), 0.25) else {
            continue;
        };
        match verify_main(&fam, &v, n_smooth, &samples, trunc) {
            Ok(rep) => {
                let ok = rep.residual < tol && rep.power_defect < tol * 10.0 && rep.spread < tol;
                let mut check = Check::value(
                    &format!("main-{done}"),
                    serde_json::json!({
                        "b": rep.b.to_string(),
                        "D": rep.denom.to_string(),
                        "residual": rep.residual,
                        "power_defect": rep.power_defect,
                        "spread": rep.spread,
                    }),
                );
                if !ok {
                    check.fail();
                }
                report.push(check);
                done += 1;
            }
            Err(_) => continue,
        }
    }
    report.push(Check::bool("main-count", done == count));
}

/// Rank n-1 well-placed: product = 1 numerically, and the exact cone lemma
/// suite (sign lemma, triples, coverage, f vanishing) per instance.
pub fn suite_rank_deficient(
    report: &mut Report,
    seed: u64,
    count: usize,
    tol: f64,
    trunc: &Truncation,
) {
    let mut fz = Fuzzer::new(seed.wrapping_add(2));
    // the reference instance first
    let reference = gcl_core::forms::FormFamily::new(
        4,
        vec![
            vec![1.into(), 0.into(), 0.into(), 0.into()],
            vec![0.into(), 1.into(), 0.into(), 0.into()],
            vec![0.into(), 0.into(), (-1).into(), 0.into()],
            vec![0.into(), 1.into(), 1.into(), 0.into()],
        ],
    )
    .expect("reference family");
    let mut instances = vec![reference];
    let mut attempts = 0usize;
    while instances.len() < count + 1 && attempts < count * 30 {
        attempts += 1;
        let n = fz.rng().random_range(3..=4usize);
        if let Ok(fam) = fz.rank_deficient_well_placed(n) {
            instances.push(fam);
        }
    }
    for (i, fam) in instances.iter().enumerate() {
        let label = if i == 0 { "rank-deficient-reference".to_string() } else { format!("rank-deficient-{i}") };
        // exact cone suite at a fuzzed exact x
        let mut table = None;
        for _ in 0..300 {
            let x = fz.gaussian_x(fam.n());
            if let Ok(t) = build_sign_table(fam, &x) {
                table = Some(t);
                break;
            }
        }
        match table {
            Some(t) => {
                let ok = check_sign_lemma(&t).all()
                    && check_triple_and_coverage(fam, &t).all()
                    && verify_f_vanishing(fam, &t);
                report.push(Check::bool(&format!("{label}-cones"), ok));
            }
            None => {
                let mut c = Check::bool(&format!("{label}-cones"), false);
                c.skip("no admissible exact x found");
                report.push(c);
            }
        }
        // numeric product = 1
        let v = fz.v_vector(fam.n());
        match sample_admissible_x(fam, fz.rng(), 0.25) {
            Ok(x) => {
                let w = Complex64::new(0.1, 0.4);
                match alternating_g_product(fam, &v, w, &x, trunc) {
                    Ok(p) => {
                        let res = (p - Complex64::new(1.0, 0.0)).norm();
                        report.push(Check::residual(&format!("{label}-product"), res, tol));
                    }
                    Err(e) => {
                        let mut c = Check::bool(&format!("{label}-product"), false);
                        c.skip(&format!("{e}"));
                        report.push(c);
                    }
                }
            }
            Err(e) => {
                let mut c = Check::bool(&format!("{label}-product"), false);
                c.skip(&format!("{e}"));
                report.push(c);
            }
        }
    }
    report.push(Check::bool(
        "rank-deficient-count",
        instances.len() == count + 1,
    ));
}

/// Exact agreement of the three smoothed-Bernoulli formulas.
pub fn suite_smoothed_agreement(report: &mut Report, seed: u64, count: usize) {
    let mut fz = Fuzzer::new(seed.wrapping_add(3));
    for i in 0..count {
        let n = fz.rng().random_range(2..=4usize);
        let n_smooth = *[2i64, 3, 4, 5, 6].get(fz.rng().random_range(0..5)).unwrap();
        let Ok((fam, v)) = fz.full_rank_good(n, n_smooth) else {
            report.push(Check::bool(&format!("smoothed-{i}"), false));
            continue;
        };
        let Ok(sv) = smoothed_bn_dedekind(&fam, &v, n_smooth) else {
            report.push(Check::bool(&format!("smoothed-{i}"), false));
            continue;
        };
        let Ok(trace) = gcl_core::cyclotomic::smoothed_bn_trace(&fam, &v, n_smooth) else {
            report.push(Check::bool(&format!("smoothed-{i}"), false));
            continue;
        };
        let mut ok = sv.value == trace;
        // direct difference at random rational points, retried past poles
        let mut direct_checked = 0;
        let mut guard = 0;
        while direct_checked < 3 && guard < 60 {
            guard += 1;
            let w = fz.rat_unit(7) + ratio(1, 11);
            let x: Vec<Rat> = (0..n)
                .map(|_| fz.rat_unit(9) + ratio(1, 13))
                .collect();
            if let Ok(d) = smoothed_bn_direct(&fam, &v, &w, &x, n_smooth) {
                ok &= d == sv.value;
                direct_checked += 1;
            }
        }
        ok &= direct_checked == 3;
        report.push(Check::bool(&format!("smoothed-{i}"), ok));
    }
}
