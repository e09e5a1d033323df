//! The acceptance gate: nine end-to-end checks, one per criterion, each
//! printing a single PASS/FAIL line with its timing.
//!
//! Criterion 5 contains a clause that is mathematically unattainable as
//! stated (squares of period 2^n - 1 in the Morse-Thue word for n >= 3;
//! such squares have periods 2^k or 3 * 2^k only). That clause is reported
//! as an honest FAIL line while the rest of the dossier is enforced; see
//! the test for details.

mod common;

use std::time::Instant;

use aperiodic_core::classics::{
    badness_profile, convergents, is_fc_aperiodic_at_zero, morse_thue_symbol, morse_thue_window,
    ContinuedFraction,
};
use aperiodic_core::conversions::{derived_bound_floor, periodic_distance_check};
use aperiodic_core::counting::{
    condition_3_2, count_good_words, derive_theorem_1_1, growth_flags, lower_bound_sequence,
    GrowthCertificate, Margin, SearchOptions, SymbolOrder,
};
use aperiodic_core::hyperbolic::{
    geometry_constants, rough_cbar_bound, theorem_4_3_pipeline, HyperbolicParams,
};
use aperiodic_core::profile::TableExtension;
use aperiodic_core::recurrence::min_recurrence_time;
use aperiodic_core::verify::verify_phi_aperiodic;
use aperiodic_core::{FiniteWord, Natural, Profile, Rational, RightInverse};
use num::{Signed, ToPrimitive};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn report(id: u32, pass: bool, start: Instant, budget_s: f64, detail: &str) {
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "criterion {id}: {} — {detail} ({elapsed:.2} s, budget {budget_s:.0} s)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} failed: {detail}");
    assert!(
        elapsed < budget_s,
        "criterion {id} overran its {budget_s} s budget ({elapsed:.2} s)"
    );
}

#[test]
fn criterion_1_exact_margins_of_the_two_textbook_cases() {
    let t = Instant::now();
    let a = condition_3_2(4, &Profile::Linear, &rat(2, 1)).unwrap();
    let b = condition_3_2(5, &Profile::PowerOfTwo, &rat(3, 1)).unwrap();
    let ok = a.margin == Margin::Exact(rat(1, 1))
        && b.margin == Margin::Exact(rat(0, 1))
        && a.is_satisfied()
        && b.is_satisfied();
    report(
        1,
        ok,
        t,
        1.0,
        &format!("margins {:?} and {:?}", a.margin, b.margin),
    );
}

#[test]
fn criterion_2_counting_sandwich_for_four_letters_linear_gauge() {
    let t = Instant::now();
    let c = rat(2, 1);
    let exact = count_good_words(4, &Profile::Linear, 12, &SearchOptions::default()).unwrap();
    let bound = lower_bound_sequence(4, &Profile::Linear, 12);
    let flags = growth_flags(&bound, &c);
    let mut ok = flags.iter().all(|&f| f);
    for m in 0..=12usize {
        ok &= exact[m] >= bound[m];
        ok &= bound[m] >= Natural::from(2u32).pow(m as u32);
        if m < 3 {
            ok &= exact[m] == Natural::from(4u32).pow(m as u32);
        }
    }
    report(
        2,
        ok,
        t,
        60.0,
        &format!("exact(12) = {}, bound(12) = {}, 2^12 = 4096", exact[12], bound[12]),
    );
}

#[test]
fn criterion_3_pruned_counts_equal_filter_all_counts() {
    let t = Instant::now();
    let mut ok = true;
    let mut checked = 0u32;
    for k in [2u32, 3] {
        let profiles = vec![
            Profile::Linear,
            Profile::PowerOfTwo,
            Profile::exponential(k, rat(1, 2)).unwrap(),
        ];
        for profile in &profiles {
            let floors = common::floor_table(profile, 16);
            let counts =
                count_good_words(k, profile, 12, &SearchOptions::default()).unwrap();
            for m in 0..=12usize {
                let naive = common::naive_count(k, &floors, m);
                ok &= counts[m].to_u64() == Some(naive);
                checked += 1;
            }
        }
    }
    report(3, ok, t, 120.0, &format!("{checked} (k, profile, m) cells compared"));
}

fn criterion_4_word() -> (FiniteWord, Profile, u64) {
    let phi = Profile::exponential(4, rat(3, 10)).unwrap();
    let cert = GrowthCertificate {
        l1: 0,
        delta_tilde: rat(3, 10),
    };
    let derived = derive_theorem_1_1(4, &rat(3, 10), &phi, &cert).unwrap();
    assert!(derived.condition.is_satisfied());
    let w = construct(&derived.surrogate);
    (w, derived.surrogate, derived.l0)
}

fn construct(surrogate: &Profile) -> FiniteWord {
    aperiodic_core::counting::construct_word(
        4,
        surrogate,
        1024,
        SymbolOrder::Lexicographic,
        &SearchOptions::default(),
    )
    .unwrap()
}

#[test]
fn criterion_4_recurrence_times_beat_the_exponential_gauge() {
    let t = Instant::now();
    let phi = Profile::exponential(4, rat(3, 10)).unwrap();
    let (w, _surrogate, l0) = criterion_4_word();
    let table = min_recurrence_time(&w, 1022).unwrap();
    let mut ok = w.len() == 1024;
    let mut attained = 0u32;
    for (l, r) in table.iter() {
        if (l as u64) < l0 {
            continue;
        }
        if let Some(shift) = r.attained() {
            attained += 1;
            ok &= Natural::from(shift) > phi.floor_eval(l as u64);
        }
    }
    ok &= attained > 0;
    report(
        4,
        ok,
        t,
        120.0,
        &format!("l0 = {l0}, {attained} attained recurrence times checked"),
    );
}

#[test]
fn criterion_5_morse_thue_dossier() {
    let t = Instant::now();
    // Part 1: the 2^12-prefix respects the linear gauge (overlap-freeness).
    let prefix = morse_thue_window(0, (1 << 12) - 1);
    let verified = verify_phi_aperiodic(&prefix, &Profile::Linear).is_ok();

    // Part 2: the digit-sum characterization, every index below 2^16.
    let mut oracle_ok = true;
    for i in 0..(1u64 << 16) {
        oracle_ok &= morse_thue_symbol(i as i64) == common::digit_sum_parity(i);
    }

    // Part 3: squares WW with |W| = 2^n - 1 for 2 <= n <= 10, searched in
    // a 2^13-prefix. Squares in this word have periods 2^k and 3 * 2^k
    // only, so the requested periods 7, 15, 31, ... (n >= 3) do not occur;
    // only n = 2 (period 3) is attainable. Reported honestly below.
    let long = morse_thue_window(0, (1 << 13) - 1);
    let sym = long.symbols();
    let square_at = |period: usize| -> Option<usize> {
        (0..sym.len().saturating_sub(2 * period))
            .find(|&i| sym[i..i + period] == sym[i + period..i + 2 * period])
    };
    let mut requested_found = Vec::new();
    let mut requested_missing = Vec::new();
    for n in 2..=10u32 {
        let period = (1usize << n) - 1;
        match square_at(period) {
            Some(i) => requested_found.push((n, i)),
            None => requested_missing.push(n),
        }
    }
    // Corrected reading: squares with |W| = 2^n do occur, at block offsets.
    let mut corrected_ok = true;
    for n in 2..=10u32 {
        corrected_ok &= square_at(1usize << n).is_some();
    }

    let elapsed = t.elapsed().as_secs_f64();
    let base_ok = verified && oracle_ok && corrected_ok;
    let clause_ok = requested_missing.is_empty();
    println!(
        "criterion 5: {} — prefix verified: {verified}, digit-sum oracle: {oracle_ok}, \
         squares |W|=2^n-1 found for n in {:?}, missing for n in {:?} \
         (periods 2^n-1 with n >= 3 are never 2^k or 3*2^k, so no such square \
         exists; squares |W|=2^n all exhibited: {corrected_ok}) ({elapsed:.2} s, budget 30 s)",
        if base_ok && clause_ok { "PASS" } else { "FAIL" },
        requested_found.iter().map(|&(n, _)| n).collect::<Vec<_>>(),
        requested_missing,
    );
    // The impossible clause is reported above, not gamed green; everything
    // that is actually true of the word is enforced here.
    assert!(base_ok);
    assert_eq!(requested_found.iter().map(|&(n, _)| n).collect::<Vec<_>>(), vec![2]);
    assert!(elapsed < 30.0);
}

#[test]
fn criterion_6_rotation_thresholds_at_the_golden_ratio() {
    let t = Instant::now();
    let cf: ContinuedFraction = "1;(1)".parse().unwrap();
    let q_max = 100_000u64;

    let badness = badness_profile(&cf, q_max).unwrap();
    let mut ok = badness.argmin_q == 1
        && badness.min_lo >= rat(3819, 10000)
        && badness.min_hi <= rat(3820, 10000);

    let hold = is_fc_aperiodic_at_zero(&cf, &rat(7, 20), q_max).unwrap();
    let fail = is_fc_aperiodic_at_zero(&cf, &rat(2, 5), q_max).unwrap();
    ok &= hold.holds && !fail.holds && fail.witness_q == Some(1);

    // Along the convergent denominators (Fibonacci numbers) the scaled
    // distance tends to 1/sqrt(5); check the largest one below q_max with
    // an exact convergent bracket for the value.
    // The alpha bracket must be much tighter than 1e-4 / q^2, so take the
    // expansion far past the q in question.
    let conv = convergents(&cf, 60).unwrap();
    let idx = (0..conv.len())
        .rev()
        .find(|&i| conv[i].1.to_u64().map_or(false, |q| q <= q_max))
        .unwrap();
    let q = Rational::from_integer(conv[idx].1.clone());
    let p = Rational::from_integer(conv[idx].0.clone());
    // alpha lies between the last two convergents of the expansion.
    let a1 = Rational::new(conv[58].0.clone(), conv[58].1.clone());
    let a2 = Rational::new(conv[59].0.clone(), conv[59].1.clone());
    let (alpha_lo, alpha_hi) = if a1 < a2 { (a1, a2) } else { (a2, a1) };
    let v1 = (q.clone() * alpha_lo - p.clone()).abs() * q.clone();
    let v2 = (q.clone() * alpha_hi - p).abs() * q.clone();
    let (v_lo, v_hi) = if v1 < v2 { (v1, v2) } else { (v2, v1) };
    // 0.4472135954 < 1/sqrt(5) < 0.4472135956
    let target_lo = rat(4472135954, 10_000_000_000) - rat(1, 10_000);
    let target_hi = rat(4472135956, 10_000_000_000) + rat(1, 10_000);
    ok &= v_lo > target_lo && v_hi < target_hi;

    report(
        6,
        ok,
        t,
        30.0,
        &format!(
            "min in [{}, {}] at q = {}, witness q = {:?}, Fibonacci q = {}",
            badness.min_lo.to_f64().unwrap(),
            badness.min_hi.to_f64().unwrap(),
            badness.argmin_q,
            fail.witness_q,
            q
        ),
    );
}

#[test]
fn criterion_7_right_inverse_laws_at_scale() {
    let t = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xacce_0007);
    let mut ok = true;
    for _ in 0..1000 {
        let len = rng.gen_range(1..10);
        let mut values = Vec::with_capacity(len);
        let mut cur = rat(rng.gen_range(0..3), rng.gen_range(1..6));
        for _ in 0..len {
            cur += rat(rng.gen_range(0..6), rng.gen_range(1..5));
            values.push(cur.clone());
        }
        let profile = Profile::table(values.clone(), TableExtension::UnitSlope).unwrap();
        for _ in 0..100 {
            let s = rng.gen_range(1..60u64);
            let l = rng.gen_range(0..60u64);
            let ell = profile.right_inverse(s).unwrap();
            // Exact gauge value straight from the table fields.
            let phi_at = |l: u64| -> Rational {
                let idx = l as usize;
                if idx < values.len() {
                    values[idx].clone()
                } else {
                    values.last().unwrap().clone()
                        + Rational::from_integer((l - (values.len() as u64 - 1)).into())
                }
            };
            let s_rat = Rational::from_integer(s.into());
            ok &= phi_at(ell) >= s_rat;
            ok &= (l < ell) == (phi_at(l) < s_rat);
            ok &= (l >= ell) == (phi_at(l) >= s_rat);
        }
    }
    report(7, ok, t, 10.0, "1000 gauges x 100 (s, l) pairs, three laws each");
}

#[test]
fn criterion_8_hyperbolic_parameter_pipeline() {
    let t = Instant::now();
    let report43 = theorem_4_3_pipeline(2, &rat(1, 2), 1.5, 0.25).unwrap();

    // The chained inequalities, certified sides throughout.
    let mut ok = report43.r0.hi() + 0.25 < 1.5;
    ok &= report43.delta_tilde.lo() > 0.5 && report43.delta_tilde.hi() < 1.0;
    // 2^{delta_bar (n-1)} < c < 2^{n-1} with delta_bar = p/q, exactly:
    // c^q > 2^p and c < 2.
    let (p, q) = (
        report43.delta_bar.numer().to_u64().unwrap(),
        report43.delta_bar.denom().to_u64().unwrap(),
    );
    let c_pow = num::traits::Pow::pow(report43.c.clone(), q);
    ok &= c_pow > Rational::from_integer(num::BigInt::from(1u64) << p as usize);
    ok &= report43.c < rat(2, 1);

    // Interval widths.
    for (name, iv) in [
        ("delta_tilde", &report43.delta_tilde),
        ("r0", &report43.r0),
        ("s0", &report43.s0),
        ("ln_c0", &report43.ln_c0),
        ("r1", &report43.geometry.r1),
        ("r2", &report43.geometry.r2),
    ] {
        let tight = iv.rel_width_within(1e-9);
        assert!(tight, "{name} interval too wide: {iv:?}");
        ok &= tight;
    }
    ok &= report43.condition.growth_holds
        && report43.condition.sum_condition == aperiodic_core::counting::Feasibility::Satisfied;

    // Sharp covering constant below the crude one across the grid.
    for n in [2u32, 3] {
        for i_m in [0.8f64, 1.5, 3.0] {
            let (r0, eps_bar0) = match i_m {
                x if x == 0.8 => (0.72, 0.76),
                x if x == 1.5 => (0.8, 1.2),
                _ => (1.0, 2.0),
            };
            let params = HyperbolicParams {
                n,
                i_m,
                eps_bar0,
                eps0: eps_bar0 - r0,
                r0,
                s_bar0: 10_000,
                s0: 10_001.0 * r0,
                edge: 1.0,
                delta: rat(1, 2),
            };
            let phibar = Profile::exponential(1 << (n - 1), rat(1, 2)).unwrap();
            let ell = RightInverse::new(phibar).unwrap();
            let g = geometry_constants(&params, &ell).unwrap();
            ok &= g.cbar <= g.cbar_rough;
            ok &= g.cbar_rough == rough_cbar_bound(n, i_m);
        }
    }

    report(
        8,
        ok,
        t,
        10.0,
        &format!(
            "s_bar0 = {}, cbar = {}, c = {}, margin = {:?}",
            report43.params.s_bar0,
            report43.geometry.cbar,
            report43.c,
            report43.condition.margin
        ),
    );
}

#[test]
fn criterion_9_metric_side_forward_checks() {
    let t = Instant::now();
    let (w, surrogate, _l0) = criterion_4_word();

    // Every coincidence with l <= 20, from an independent per-shift run
    // scan, must beat the metric bound derived from the gauge.
    let coincidences = common::all_coincidences(w.symbols(), 20);
    let mut ok = !coincidences.is_empty();
    for &(_i, s, l) in &coincidences {
        let eps = Rational::new(1.into(), num::BigInt::from(1u64) << (l / 2));
        ok &= Natural::from(s as u64) > derived_bound_floor(&surrogate, &eps);
    }

    // Distance from every short-period word at 100 sampled centers.
    let centers: Vec<usize> = (60..=951).step_by(9).collect();
    assert_eq!(centers.len(), 100);
    let mut comparisons = 0u64;
    for s in 1..=6u64 {
        match periodic_distance_check(&w, s, &surrogate, &centers, 6).unwrap() {
            aperiodic_core::conversions::PeriodicCheckOutcome::Passed { comparisons: c } => {
                comparisons += c
            }
            failed => {
                ok = false;
                println!("period {s} came too close: {failed:?}");
            }
        }
    }
    report(
        9,
        ok,
        t,
        60.0,
        &format!(
            "{} coincidences checked, {comparisons} periodic-word comparisons",
            coincidences.len()
        ),
    );
}
