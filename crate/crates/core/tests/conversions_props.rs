//! The shift-gauge / metric-gauge dictionary and the right-inverse laws.

mod common;

use aperiodic_core::conversions::{
    derived_bound_floor, f_to_phi, periodic_distance_check, phi_to_f,
};
use aperiodic_core::profile::TableExtension;
use aperiodic_core::classics::morse_thue_window;
use aperiodic_core::{Natural, Profile, Rational};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn random_unit_slope_table(rng: &mut StdRng) -> Profile {
    let len = rng.gen_range(1..8);
    let mut values = Vec::with_capacity(len);
    let mut cur = rat(rng.gen_range(0..2), rng.gen_range(1..5));
    for _ in 0..len {
        cur += rat(rng.gen_range(0..5), rng.gen_range(1..4));
        values.push(cur.clone());
    }
    Profile::table(values, TableExtension::UnitSlope).unwrap()
}

#[test]
fn right_inverse_laws_on_random_tables() {
    let mut rng = StdRng::seed_from_u64(0xd1c7);
    for _ in 0..100 {
        let profile = random_unit_slope_table(&mut rng);
        for _ in 0..20 {
            let s = rng.gen_range(1..30u64);
            let l = rng.gen_range(0..30u64);
            let ell = profile.right_inverse(s).unwrap();
            // phi(ell(s)) >= s, and l < ell(s) exactly when phi(l) < s.
            assert!(profile.reaches(ell, &Natural::from(s)));
            assert_eq!(l < ell, !profile.reaches(l, &Natural::from(s)));
            assert_eq!(l >= ell, profile.reaches(l, &Natural::from(s)));
        }
    }
}

#[test]
fn derived_metric_bound_evaluates_the_gauge_at_the_log_scale() {
    // F(eps) = phi(-2 ceil(log2 eps)) for derived bounds; spot values.
    let bound = phi_to_f(&Profile::PowerOfTwo);
    assert_eq!(bound.eval(&rat(1, 3)), rat(4, 1));
    assert_eq!(bound.eval(&rat(1, 4)), rat(16, 1));
    assert_eq!(bound.eval(&rat(1, 1)), rat(1, 1));
    assert_eq!(
        derived_bound_floor(&Profile::PowerOfTwo, &rat(1, 3)),
        Natural::from(4u32)
    );
    // eps above 1 carries no information.
    assert_eq!(derived_bound_floor(&Profile::Linear, &rat(3, 2)), Natural::from(0u32));
}

#[test]
fn metric_bound_round_trip_dominates_the_original_floors() {
    // phi -> F -> phi' evaluates F at dyadic scales; the recovered gauge
    // agrees with the original on even arguments and interpolates below
    // it elsewhere.
    for profile in [
        Profile::Linear,
        Profile::PowerOfTwo,
        Profile::exponential(3, rat(1, 2)).unwrap(),
    ] {
        let bound = phi_to_f(&profile);
        let recovered = f_to_phi(&bound, 24).unwrap();
        for l in (0..=24u64).step_by(2) {
            // Lengths 0 and 1 query scales above 1, which carry no bound.
            let orig = if l < 2 {
                Natural::from(0u32)
            } else {
                profile.floor_eval(l - 2)
            };
            assert_eq!(
                recovered.floor_eval(l),
                orig,
                "l = {l} for {:?}",
                profile
            );
        }
        for l in 0..24u64 {
            assert!(recovered.floor_eval(l) <= recovered.floor_eval(l + 1));
        }
    }
}

#[test]
fn morse_thue_stays_away_from_short_periods() {
    let w = morse_thue_window(0, 511);
    let centers: Vec<usize> = (40..=470).step_by(10).collect();
    for s in 1..=4u64 {
        let outcome = periodic_distance_check(&w, s, &Profile::Linear, &centers, 6).unwrap();
        assert!(
            outcome.passed(),
            "period {s} came too close: {outcome:?}"
        );
    }
}

#[test]
fn a_periodic_word_fails_its_own_period() {
    use aperiodic_core::{Alphabet, FiniteWord};
    let symbols: Vec<u8> = (0..200).map(|i| (i % 3) as u8).collect();
    let w = FiniteWord::new(Alphabet::new(3).unwrap(), symbols).unwrap();
    let outcome = periodic_distance_check(&w, 3, &Profile::Linear, &[100], 6).unwrap();
    assert!(!outcome.passed());
}
