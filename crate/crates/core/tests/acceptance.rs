//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Criterion 6 asserts asymptotic-ratio tolerances at index 60 that the
//! exact tables demonstrably do not satisfy (the laws carry `log(i)/i`-type
//! corrections and reach the stated band only near i ≈ 2000); it is kept
//! faithful to its stated form and is expected to fail. The companion test
//! in `asym` verifies the same laws at indices where they hold.

use geoquad_core::asym;
use geoquad_core::continuum;
use geoquad_core::oracle;
use geoquad_core::sampler;
use geoquad_core::series::{rat, rat_to_f64, ratio, Rat, SeriesEngine, TupleMode};
use num_bigint::BigInt;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!("{} {criterion}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{criterion}: {detail}");
}

#[test]
fn criterion_1_series_fixtures() {
    let eng = SeriesEngine::new(4);
    let z2 = eng.z_series(2);
    let u2 = eng.u_family(2)[2].clone();
    let z_ok = [1, 5, 32, 234]
        .iter()
        .enumerate()
        .all(|(n, &w)| z2.coeff(n) == &rat(w));
    let u_ok = [0, 1, 10, 90, 810]
        .iter()
        .enumerate()
        .all(|(n, &w)| u2.coeff(n) == &rat(w));
    report(
        "criterion 1 (series fixtures)",
        z_ok && u_ok,
        "Z_2 = 1,5,32,234 and U_2 = 0,1,10,90,810 exactly",
    );
}

#[test]
fn criterion_2_delta_table() {
    let t = asym::agd(5);
    let want =
        [rat(4), ratio(80, 3), rat(132), ratio(366208, 675), ratio(3998176, 2025)];
    let ok = want.iter().enumerate().all(|(j, w)| &t.u[j + 1].d == w);
    report("criterion 2 (delta table)", ok, "delta_1..5 exact");
}

#[test]
fn criterion_3_oracle_equivalence() {
    let eng = SeriesEngine::new(3);
    let mut ok = true;
    let mut detail = String::new();
    for i in 1..=3usize {
        let u = eng.u_family(i);
        for n in 1..=3usize {
            let geod = oracle::count_marked_geodesics(n, i).unwrap();
            ok &= rat(geod as i64) == *u[i].coeff(n);
            let weak = oracle::count_confluent_tuples(n, i, 2, TupleMode::Weak).unwrap();
            ok &= rat(weak as i64) == *eng.u_k_series(i, 2, TupleMode::Weak).coeff(n);
            let strong = oracle::count_confluent_tuples(n, i, 2, TupleMode::Strong).unwrap();
            ok &= rat(strong as i64) == *eng.u_k_series(i, 2, TupleMode::Strong).coeff(n);
        }
        let z = eng.z_series(i);
        for n in 0..=3usize {
            let (total, pinch_free) = oracle::count_boundary_quads(i, n).unwrap();
            ok &= rat(total as i64) == *z.coeff(n);
            ok &= rat(pinch_free as i64) == *u[i].coeff(n);
        }
        detail.push_str(&format!("i={i} ok; "));
    }
    // bijection round trips on every instance with n <= 4
    let mut trips = 0usize;
    for n in 1..=4usize {
        geoquad_core::tree::for_each_labeled_tree(n, 1, |t| {
            let tq = geoquad_core::bijection::tree_to_quad(t);
            let back = geoquad_core::bijection::quad_to_tree(&tq.quad);
            if &back.tree != t {
                ok = false;
            }
            trips += 1;
        })
        .unwrap();
    }
    detail.push_str(&format!("{trips} round trips"));
    report("criterion 3 (oracle equivalence)", ok, &detail);
}

#[test]
fn criterion_4_ensemble_normalization() {
    let f1 = geoquad_core::series::pointed_partition(1);
    let f2 = geoquad_core::series::pointed_partition(2);
    let a1 = oracle::pointed_partition_by_aut(1).unwrap();
    let a2 = oracle::pointed_partition_by_aut(2).unwrap();
    let g1 = oracle::pointed_average_geodesics(1, 2).unwrap();
    let g2 = oracle::pointed_average_geodesics(2, 2).unwrap();
    let ok = f1 == ratio(3, 2)
        && f2 == ratio(9, 2)
        && a1 == f1
        && a2 == f2
        && g1 == ratio(2, 3)
        && g2 == ratio(20, 9);
    report(
        "criterion 4 (ensemble normalization)",
        ok,
        &format!("Z_1 = {a1}, Z_2 = {a2}, averages {g1}, {g2}"),
    );
}

#[test]
fn criterion_5_saddle_point_law() {
    let eng = SeriesEngine::new(200);
    let z2 = eng.z_series(2);
    let d2 = ratio(112, 3);
    let r = asym::saddle_ratio(z2.coeff(200), 200, &d2);
    report(
        "criterion 5 (saddle-point law)",
        (0.9..=1.1).contains(&r),
        &format!("[g^200] Z_2 / estimate = {r:.4}"),
    );
}

#[test]
fn criterion_6_asymptotic_ratios() {
    // stated tolerances at i = 60; see the module docs for why these fail
    let i = 60usize;
    let base = asym::agd(80);
    let k2 = asym::k_tables(80, 2);
    let tilde = asym::tilde_tables(80, 2);
    let p2 = Rat::from_integer(BigInt::from(2).pow(60));
    let p4 = Rat::from_integer(BigInt::from(4).pow(60));
    let i3 = rat((i * i * i) as i64);
    let r1 = rat_to_f64(&(&base.u[i].d / (&p2 * ratio(9, 7) * &i3)));
    let r2 = rat_to_f64(&(&k2.u[i].d / (&p4 * rat(6) * ratio(9, 7) * &i3)));
    let r3 = rat_to_f64(&(&tilde[i].d / (&p4 * rat(9) * rat(2)))) / (12.0 / 7.0);
    let ok1 = (r1 - 1.0).abs() <= 0.05;
    let ok2 = (r2 - 1.0).abs() <= 0.05;
    let ok3 = (r3 - 1.0).abs() <= 0.05;
    println!(
        "{} criterion 6a: delta_60/(2^60 (9/7) 60^3) = {r1:.4} (need within 5% of 1)",
        if ok1 { "PASS" } else { "FAIL" }
    );
    println!(
        "{} criterion 6b: delta2_60/(4^60 6 (9/7) 60^3) = {r2:.4} (need within 5% of 1)",
        if ok2 { "PASS" } else { "FAIL" }
    );
    println!(
        "{} criterion 6c: tilde2_60/((3 2^60)^2 2)/(12/7) = {r3:.4} (need within 5% of 1)",
        if ok3 { "PASS" } else { "FAIL" }
    );
    assert!(
        ok1 && ok2 && ok3,
        "asymptotic ratios at i=60: {r1:.4}, {r2:.4}, {r3:.4} — the exact tables \
         reach the 5% band only near i ≈ 2000 (see laws_converge_at_reachable_indices)"
    );
}

#[test]
fn criterion_7_continuum_fixtures() {
    let tol = 1e-8;
    let mut ok = true;
    let mut detail = String::new();

    let s = continuum::sigma(0.02, tol).unwrap();
    let c1 = (s / (12.0 / 7.0) - 1.0).abs() < 0.01;
    ok &= c1;
    detail.push_str(&format!("sigma(0.02)={s:.6} ({}); ", if c1 { "ok" } else { "BAD" }));

    let r = continuum::rho(0.1, tol).unwrap();
    let c2 = (r / (3.0 / 7.0 * 1e-3) - 1.0).abs() < 0.05;
    ok &= c2;
    detail.push_str(&format!("rho(0.1)={r:.6e} ({}); ", if c2 { "ok" } else { "BAD" }));

    let (lam, lam_over_sigma) = continuum::lambda_ratio(0.05, 1e-12).unwrap();
    let c3 = (lam / (9.0 / 35.0 * 0.05f64.powi(4)) - 1.0).abs() < 0.05;
    let c4 = (lam_over_sigma / (0.15 * 0.05f64.powi(4)) - 1.0).abs() < 0.05;
    ok &= c3 && c4;
    detail.push_str(&format!("lambda(0.05)={lam:.4e}; ratio={lam_over_sigma:.4e}; "));

    // Φ monotone on a grid, saturating at 1
    let curve = continuum::evaluate_curve(continuum::CurveTag::Phi, 0.25, 4.0, 0.25, tol).unwrap();
    let mono = curve.value.windows(2).all(|w| w[1] >= w[0]);
    let sat = (continuum::phi(8.0, tol).unwrap() - 1.0).abs() < 1e-6;
    ok &= mono && sat;
    detail.push_str(&format!("phi monotone={mono}, phi(8)-1 small={sat}; "));

    // λ/σ below 1/4 everywhere, within 10% at the largest stable point
    let mut last_ratio = 0.0;
    let mut bound_ok = true;
    for k in 1..=16 {
        let r = 0.25 * k as f64;
        let (_, q) = continuum::lambda_ratio(r, 1e-12).unwrap();
        bound_ok &= q <= 0.25 + 1e-9;
        last_ratio = q;
    }
    let near = (last_ratio - 0.25).abs() / 0.25 < 0.10;
    ok &= bound_ok && near;
    detail.push_str(&format!("lambda/sigma(4)={last_ratio:.4}"));

    report("criterion 7 (continuum fixtures)", ok, &detail);
}

#[test]
fn criterion_8_appendix_laws() {
    // finite-i contact average from exact series at i = 2: the coefficient
    // ratio over n = 150..300 approaches the exact large-n value 22/27,
    // which in turn heads toward i/3 as i grows
    let eng = SeriesEngine::new(300);
    let pinch = eng.pinch_series(2);
    let u22 = eng.u_k_series(2, 2, TupleMode::Weak);
    let limit = rat_to_f64(&asym::contact_table(2).mean_contacts(2)); // 22/27
    let mut ok = true;
    let mut prev_gap = f64::INFINITY;
    let mut detail = String::new();
    for n in [150usize, 200, 250, 300] {
        let r = rat_to_f64(&(pinch.u2pp.coeff(n) / u22.coeff(n)));
        let gap = (r - limit).abs();
        ok &= gap < prev_gap; // monotone approach
        prev_gap = gap;
        detail.push_str(&format!("n={n}:{r:.5} "));
    }
    ok &= prev_gap / limit < 0.02;
    // the large-i contact limits trend toward i/3 (ratios increase toward 1)
    let ct = asym::contact_table(60);
    let r20 = rat_to_f64(&ct.mean_contacts(20)) / (20.0 / 3.0);
    let r60 = rat_to_f64(&ct.mean_contacts(60)) / (60.0 / 3.0);
    ok &= r60 < r20 && r60 > 1.0;
    detail.push_str(&format!("limit={limit:.5}; i-law ratios {r20:.3}->{r60:.3}; "));

    // weak-pair area correction small-r law
    let theta = continuum::weak_area_correction(0.05, 1e-12).unwrap();
    let c = (theta / (0.27 * 0.05f64.powi(3)) - 1.0).abs() < 0.05;
    ok &= c;
    detail.push_str(&format!("theta(0.05)={theta:.6e}"));
    report("criterion 8 (appendix laws)", ok, &detail);
}

#[test]
fn criterion_9_sampler_statistics() {
    use rand_chacha::rand_core::SeedableRng;
    let mut ok = true;
    let mut detail = String::new();

    // uniformity chi-square on the n = 3 family over 1e6 samples
    {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        let mut s = sampler::TreeSampler::new(3);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..1_000_000 {
            *counts.entry(s.sample(&mut rng).to_text()).or_insert(0u64) += 1;
        }
        let stat =
            sampler::chi_square_uniform(&counts.values().copied().collect::<Vec<_>>());
        let c = counts.len() == 54 && stat < 90.5734; // 0.999 quantile, 53 dof
        ok &= c;
        detail.push_str(&format!("chi2(54 cells)={stat:.1}; "));
    }

    // acceptance rate 2/(n+2) within 3 sigma
    {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        let mut s = sampler::TreeSampler::new(2);
        let accepts = 40_000u64;
        for _ in 0..accepts {
            s.sample(&mut rng);
        }
        let p = 0.5;
        let att = s.attempts as f64;
        let sigma = (p * (1.0 - p) * att).sqrt();
        let c = (accepts as f64 - p * att).abs() < 3.0 * sigma;
        ok &= c;
        detail.push_str(&format!("acceptance {:.4} vs 1/2; ", accepts as f64 / att));
    }

    // weighted MC geodesic counts at n = 1e4, i = 4 bracket delta_4 within
    // 3 sigma plus a 15% finite-n bias budget. The n -> infinity value is a
    // limit, so this is a bracket check, not an exact reproduction.
    {
        let config = sampler::ExperimentConfig {
            n: 10_000,
            samples: 10_000,
            seed: 31337,
            observables: vec![sampler::Observable::GeodesicCount { i: 4 }],
            exhaustive: false,
            workers: rayon::current_num_threads(),
        };
        let res = sampler::run_experiment(&config).unwrap();
        let acc = &res.stats[0].acc;
        let delta4 = 366208.0 / 675.0;
        let mean = acc.weighted_mean();
        let se = acc.weighted_stderr();
        let c = (mean - delta4).abs() <= 3.0 * se + 0.15 * delta4;
        ok &= c;
        detail.push_str(&format!(
            "geodesics(i=4, n=1e4): {mean:.1} +- {se:.1} vs delta_4 = {delta4:.1}"
        ));
    }
    report("criterion 9 (sampler statistics)", ok, &detail);
}

#[test]
fn criterion_10_limit_substitutes() {
    // the strict double limits are not reachable at desk scale; the
    // substitutes are the exact-coefficient convergence checks and the
    // quadrature limits, exercised here at their largest feasible indices
    let ratios = asym::scaled_law_ratios(20_000);
    let d = ratios[20_000].delta;
    let ok1 = (d - 1.0).abs() < 0.01;
    // quadrature tail: the scaling functions vanish at large r
    let ok2 = continuum::sigma(8.0, 1e-12).unwrap().abs() < 1e-8
        && continuum::rho(8.0, 1e-10).unwrap() < 1e-8;
    report(
        "criterion 10 (limit substitutes)",
        ok1 && ok2,
        &format!("delta law at i=20000: {d:.4}; tails below 1e-8"),
    );
}
