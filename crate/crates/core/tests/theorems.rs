use std::f64::consts::PI;

use qwmix::graph::{bunkbed_spec, eta_cube_spec, hamming_spec, hypercube_spec, GraphSpec, Scaling};
use qwmix::mixing::{eta_mixing_times, phat_direct, scan, Half, MixingProbe, GRID_TOL};
use qwmix::verify::{verify_bbqn, verify_bunkbed_theorem, verify_hamming, Conclusion};
use qwmix::walk::InitialState;
use qwmix::z2n::{BooleanFunction, GroupElement};

fn g(s: &str) -> GroupElement {
    GroupElement::from_bit_str(s).unwrap()
}

#[test]
fn eta_cube_walk_stays_on_a0_component() {
    // odd |η|: the point-start walk on the η-cube has P̂(η) of modulus 1 at the
    // mixing times, i.e. the mass lives on a single half
    for (n, eta) in [(3, "111"), (4, "0111"), (5, "11111"), (5, "10101")] {
        let eta = g(eta);
        let probe = MixingProbe::new(&eta_cube_spec(n, eta).unwrap(), &InitialState::point(0)).unwrap();
        let (t1, _) = eta_mixing_times(n);
        let p = probe.probabilities(t1);
        let on_a1: f64 = p.iter().enumerate().filter(|(a, _)| Half::A1.contains(*a as u64, eta.bits())).map(|x| x.1).sum();
        let on_a0: f64 = 1.0 - on_a1;
        assert!(on_a0.min(on_a1) < 1e-12, "n={n} eta={eta} {on_a0} {on_a1}");
    }
}

#[test]
fn eta_cube_is_periodic() {
    // spectrum of (n+1)^{-1}(Q_n + matching) is a set of (2k)/(n+1) offsets;
    // (n+1)π is a period of |ψ|²
    for (n, eta) in [(3u32, "110"), (4, "1111"), (5, "10100")] {
        let spec = eta_cube_spec(n, g(eta)).unwrap();
        let probe = MixingProbe::new(&spec, &InitialState::point(0)).unwrap();
        let period = (n + 1) as f64 * PI;
        for t in [0.1, 0.77, 2.3] {
            let a = probe.probabilities(t);
            let b = probe.probabilities(t + period);
            let d = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(d < 1e-10, "n={n} t={t} d={d}");
        }
    }
}

#[test]
fn complete_graph_period() {
    for q in 2..=7 {
        let probe = MixingProbe::new(&GraphSpec::complete(q).unwrap(), &InitialState::point(0)).unwrap();
        let period = 2.0 * PI / q as f64;
        for t in [0.05, 0.4, 1.3] {
            let d = probe
                .probabilities(t)
                .iter()
                .zip(probe.probabilities(t + period))
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            assert!(d < 1e-12);
        }
    }
}

#[test]
fn direct_character_sum_matches_walk() {
    let specs = [
        hypercube_spec(5).unwrap(),
        eta_cube_spec(5, g("01110")).unwrap(),
        bunkbed_spec(4, BooleanFunction::matching(4, 0b1010).unwrap()).unwrap(),
    ];
    for spec in &specs {
        let probe = MixingProbe::new(spec, &InitialState::point(0)).unwrap();
        for t in [0.3, 1.1, 4.0] {
            let ph = probe.phat(t);
            for a in [0u64, 1, 5, 13, (spec.vertex_count() - 1) as u64] {
                let direct = phat_direct(spec, t, a).unwrap();
                assert!((direct - ph[a as usize]).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn bunkbed_formula_and_bound() {
    for n in 2..=5 {
        // a subgroup of order 4 has Fourier support of size 2^{n-2}
        for f in [BooleanFunction::all_ones(n).unwrap(), BooleanFunction::new(n, [0, 1, 2, 3]).unwrap()] {
            let v = verify_bunkbed_theorem(n, &f, 1e-9).unwrap();
            assert!(v.pass, "{}", serde_json::to_string_pretty(&v).unwrap());
            assert_eq!(v.conclusion, Conclusion::NotMixing);
        }
    }
    // a connection with large Fourier support leaves the criterion silent
    let v = verify_bunkbed_theorem(3, &BooleanFunction::delta0(3).unwrap(), 1e-9).unwrap();
    assert_eq!(v.conclusion, Conclusion::Inconclusive);
}

#[test]
fn bunkbed_of_hypercube_identities() {
    for n in 2..=4 {
        let v = verify_bbqn(n, 1e-9).unwrap();
        assert!(v.pass, "{}", serde_json::to_string_pretty(&v).unwrap());
    }
}

#[test]
fn q3_eta_scan_finds_both_times() {
    let spec = eta_cube_spec(3, g("110")).unwrap();
    let summary = scan(&spec, &InitialState::point(0), 4.0 * PI, 4001, 1e-9).unwrap();
    let t = &summary.uniform_times;
    assert!(t.iter().any(|x| (x - PI).abs() < 1e-6), "{t:?}");
    assert!(t.iter().any(|x| (x - 3.0 * PI).abs() < 1e-6), "{t:?}");
    assert!((summary.earliest_uniform_time().unwrap() - PI).abs() < 1e-6);
}

#[test]
fn odd_eta_scan_finds_none() {
    let spec = eta_cube_spec(3, g("111")).unwrap();
    let summary = scan(&spec, &InitialState::point(0), 4.0 * PI, 4001, GRID_TOL).unwrap();
    assert!(summary.uniform_times.is_empty(), "{:?}", summary.uniform_times);
}

#[test]
fn k5_never_uniform() {
    let summary = scan(&GraphSpec::complete(5).unwrap(), &InitialState::point(0), 2.0 * PI / 5.0, 20_000, GRID_TOL).unwrap();
    assert!(summary.uniform_times.is_empty());
    assert!(summary.min_tv > 0.159);
}

#[test]
fn hamming_verdicts() {
    for (n, q, expect) in [(2, 2, Conclusion::Mixing), (2, 3, Conclusion::Mixing), (3, 4, Conclusion::Mixing), (2, 5, Conclusion::NotMixing)] {
        let v = verify_hamming(n, q, 1e-9).unwrap();
        assert!(v.pass);
        assert_eq!(v.conclusion, expect);
    }
}

#[test]
fn degree_normalization_rescales_time() {
    let n = 4;
    let raw = MixingProbe::new(&hypercube_spec(n).unwrap(), &InitialState::point(0)).unwrap();
    let norm = MixingProbe::new(
        &hypercube_spec(n).unwrap().with_scaling(Scaling::DegreeNormalized),
        &InitialState::point(0),
    )
    .unwrap();
    for t in [0.2, 0.9, 2.0] {
        let d = raw.amplitudes(t).max_abs_diff(&norm.amplitudes(n as f64 * t));
        assert!(d < 1e-12);
    }
    let h = hamming_spec(2, 2).unwrap();
    assert!(MixingProbe::new(&h, &InitialState::point(0)).unwrap().max_offzero(PI / 4.0) < 1e-12);
}

#[test]
fn zero_eta_rescales_time() {
    // η = 0 adds a self-loop everywhere: on the (n+1)^{-1}-scaled cube the walk
    // is the degree-normalized Q_n run for n/(n+1) of the time
    for n in 2..=6u32 {
        let loops = MixingProbe::new(&eta_cube_spec(n, GroupElement::zero(n).unwrap()).unwrap(), &InitialState::point(0)).unwrap();
        let cube = MixingProbe::new(
            &hypercube_spec(n).unwrap().with_scaling(Scaling::DegreeNormalized),
            &InitialState::point(0),
        )
        .unwrap();
        for t in [0.4, 1.7, 5.0] {
            let a = loops.probabilities(t);
            let b = cube.probabilities(t * n as f64 / (n + 1) as f64);
            let d = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(d < 1e-12, "n={n} t={t} d={d}");
        }
    }
}
