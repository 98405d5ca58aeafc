use num_complex::Complex64;
use proptest::prelude::*;

use qwmix::graph::{bunkbed_spec, eta_cube_spec, hamming_spec, hypercube_spec, GraphSpec, Scaling};
use qwmix::mixing::{group_phat, max_offzero_phat, tv_bound_from_phat, ProbabilityDist};
use qwmix::walk::{evolve, DenseOracle, Evolver, InitialState};
use qwmix::z2n::{fwht, inverse_fwht, BooleanFunction, GroupElement};
use qwmix::{phat, tv_distance};

/// Reference transform by direct character sums.
fn slow_transform(v: &[f64]) -> Vec<f64> {
    let len = v.len();
    (0..len)
        .map(|a| {
            (0..len)
                .map(|x| if (a & x).count_ones() % 2 == 0 { v[x] } else { -v[x] })
                .sum()
        })
        .collect()
}

fn real_vec(max_n: u32) -> impl Strategy<Value = Vec<f64>> {
    (0..=max_n).prop_flat_map(|n| prop::collection::vec(-10.0f64..10.0, 1usize << n))
}

fn boolean_pair(max_n: u32) -> impl Strategy<Value = (u32, Vec<bool>, Vec<bool>)> {
    (1..=max_n).prop_flat_map(|n| {
        let len = 1usize << n;
        (Just(n), prop::collection::vec(any::<bool>(), len), prop::collection::vec(any::<bool>(), len))
    })
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn fwht_matches_direct_sums(v in real_vec(7)) {
        let fast = fwht(&v).unwrap();
        for (x, y) in fast.iter().zip(slow_transform(&v)) {
            prop_assert!(close(*x, y, 1e-12));
        }
    }

    #[test]
    fn involution(v in real_vec(8)) {
        let twice = fwht(&fwht(&v).unwrap()).unwrap();
        let scale = v.len() as f64;
        for (x, y) in twice.iter().zip(&v) {
            prop_assert!(close(*x, scale * y, 1e-10));
        }
        let back = inverse_fwht(&fwht(&v).unwrap()).unwrap();
        for (x, y) in back.iter().zip(&v) {
            prop_assert!(close(*x, *y, 1e-12));
        }
    }

    #[test]
    fn integer_involution_is_exact(v in (0u32..=8).prop_flat_map(|n| prop::collection::vec(-1000i64..1000, 1usize << n))) {
        let twice = fwht(&fwht(&v).unwrap()).unwrap();
        let scale = v.len() as i64;
        prop_assert!(twice.iter().zip(&v).all(|(x, y)| *x == scale * y));
    }

    #[test]
    fn parseval(v in real_vec(8)) {
        let lhs: f64 = fwht(&v).unwrap().iter().map(|x| x * x).sum();
        let rhs: f64 = v.len() as f64 * v.iter().map(|x| x * x).sum::<f64>();
        prop_assert!(close(lhs, rhs, 1e-10));
    }

    #[test]
    fn complex_parseval(re in real_vec(6), seed in 0.0f64..1.0) {
        let v: Vec<Complex64> = re.iter().enumerate().map(|(i, &r)| Complex64::new(r, (seed * i as f64).sin())).collect();
        let lhs: f64 = fwht(&v).unwrap().iter().map(|x| x.norm_sqr()).sum();
        let rhs: f64 = v.len() as f64 * v.iter().map(|x| x.norm_sqr()).sum::<f64>();
        prop_assert!(close(lhs, rhs, 1e-10));
    }

    #[test]
    fn convolution_theorem((n, f, g) in boolean_pair(8)) {
        let len = 1usize << n;
        let fv: Vec<f64> = f.iter().map(|&b| b as u8 as f64).collect();
        let gv: Vec<f64> = g.iter().map(|&b| b as u8 as f64).collect();
        let prod: Vec<f64> = fv.iter().zip(&gv).map(|(a, b)| a * b).collect();
        let lhs = fwht(&prod).unwrap();
        let fh = slow_transform(&fv);
        let gh = slow_transform(&gv);
        for a in 0..len {
            let rhs: f64 = (0..len).map(|b| fh[b] * gh[a ^ b]).sum::<f64>() / len as f64;
            prop_assert!(close(lhs[a], rhs, 1e-10), "a={} {} vs {}", a, lhs[a], rhs);
        }
    }

    #[test]
    fn uniform_iff_offzero_transform_vanishes(weights in (1u32..=6).prop_flat_map(|n| prop::collection::vec(0.0f64..1.0, 1usize << n)), flat in any::<bool>()) {
        let len = weights.len();
        let p: Vec<f64> = if flat {
            vec![1.0 / len as f64; len]
        } else {
            let total: f64 = weights.iter().sum::<f64>() + 1e-3;
            let mut p: Vec<f64> = weights.iter().map(|w| w / total).collect();
            p[0] += 1.0 - p.iter().sum::<f64>();
            p
        };
        let dist = ProbabilityDist::new(p.clone()).unwrap();
        let ph = phat(&dist).unwrap();
        prop_assert!((ph[0] - 1.0).abs() < 1e-12);
        let is_uniform = p.iter().all(|&x| (x - 1.0 / len as f64).abs() < 1e-12);
        let offzero_small = ph[1..].iter().all(|x| x.abs() < 1e-12);
        prop_assert_eq!(is_uniform, offzero_small);
    }

    #[test]
    fn tv_and_phat_bounds(weights in (1u32..=7).prop_flat_map(|n| prop::collection::vec(0.0f64..1.0, 1usize << n))) {
        let total: f64 = weights.iter().sum::<f64>() + 1e-6;
        let mut p: Vec<f64> = weights.iter().map(|w| w / total).collect();
        p[0] += 1.0 - p.iter().sum::<f64>();
        let radices = vec![2; weights.len().trailing_zeros() as usize];
        let m = max_offzero_phat(&p, &radices).unwrap();
        let tv = tv_distance(&ProbabilityDist::new(p.clone()).unwrap());
        prop_assert!(m <= 2.0 * tv + 1e-12);
        prop_assert!(tv <= tv_bound_from_phat(m, p.len()) + 1e-12);
    }

    #[test]
    fn group_transform_reference(q in 2usize..7, weights in prop::collection::vec(0.0f64..1.0, 36)) {
        let p = &weights[..q * q];
        let ph = group_phat(p, &[q, q]).unwrap();
        for a0 in 0..q {
            for a1 in 0..q {
                let mut direct = Complex64::new(0.0, 0.0);
                for x0 in 0..q {
                    for x1 in 0..q {
                        let angle = -2.0 * std::f64::consts::PI * ((a0 * x0 + a1 * x1) % q) as f64 / q as f64;
                        direct += p[x0 + q * x1] * Complex64::from_polar(1.0, angle);
                    }
                }
                prop_assert!((ph[a0 + q * a1] - direct).norm() < 1e-12);
            }
        }
    }
}

fn circulant_families() -> Vec<GraphSpec> {
    let g = |s: &str| GroupElement::from_bit_str(s).unwrap();
    vec![
        hypercube_spec(4).unwrap(),
        eta_cube_spec(4, g("0110")).unwrap(),
        eta_cube_spec(5, g("10101")).unwrap(),
        bunkbed_spec(3, BooleanFunction::all_ones(3).unwrap()).unwrap(),
        bunkbed_spec(3, BooleanFunction::unit_shell(3).unwrap()).unwrap(),
        GraphSpec::circulant(BooleanFunction::new(5, [3, 9, 17, 30]).unwrap()),
        hamming_spec(3, 2).unwrap().with_scaling(Scaling::DegreeNormalized),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn unitarity(which in 0usize..7, t in -20.0f64..20.0, start in 0usize..16) {
        let spec = &circulant_families()[which];
        let start = start % spec.vertex_count();
        let psi = evolve(spec, &InitialState::point(start), t).unwrap();
        prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn group_covariance(which in 0usize..7, t in -10.0f64..10.0, g in 0usize..16) {
        let spec = &circulant_families()[which];
        let g = g % spec.vertex_count();
        let base = evolve(spec, &InitialState::point(0), t).unwrap();
        let shifted = evolve(spec, &InitialState::point(g), t).unwrap();
        for x in 0..base.len() {
            prop_assert!((shifted.amps[x] - base.amps[x ^ g]).norm() < 1e-12);
        }
    }

    #[test]
    fn time_additivity(which in 0usize..7, t1 in -5.0f64..5.0, t2 in -5.0f64..5.0) {
        let spec = &circulant_families()[which];
        let first = evolve(spec, &InitialState::point(1), t1).unwrap();
        let mid = InitialState::new(first.amps.iter().copied().enumerate().collect()).unwrap();
        let chained = evolve(spec, &mid, t2).unwrap();
        let direct = evolve(spec, &InitialState::point(1), t1 + t2).unwrap();
        prop_assert!(chained.max_abs_diff(&direct) < 1e-9);
    }

    #[test]
    fn product_probabilities_factor(q1 in 2usize..6, q2 in 2usize..6, t in 0.0f64..7.0) {
        let g = GraphSpec::complete(q1).unwrap();
        let h = GraphSpec::complete(q2).unwrap();
        let prod = GraphSpec::product(vec![g.clone(), h.clone()]).unwrap();
        let pg = evolve(&g, &InitialState::point(0), t).unwrap().probabilities();
        let ph = evolve(&h, &InitialState::point(0), t).unwrap().probabilities();
        let pp = evolve(&prod, &InitialState::point(0), t).unwrap().probabilities();
        for x in 0..q1 {
            for y in 0..q2 {
                prop_assert!((pp[x + q1 * y] - pg[x] * ph[y]).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn engine_equivalence_on_small_families() {
    for spec in circulant_families() {
        let oracle = DenseOracle::from_spec(&spec).unwrap();
        let fast = Evolver::new(&spec, &InitialState::point(0)).unwrap();
        for k in 0..10 {
            let t = 0.731 * k as f64;
            let d = fast.amplitudes(t).max_abs_diff(&oracle.evolve(&InitialState::point(0), t).unwrap());
            assert!(d < 1e-8, "{spec:?} t={t} d={d}");
        }
    }
}

#[test]
fn dense_spectrum_matches_transform() {
    for n in 1..=6u32 {
        for support in [vec![1u64], vec![0, 3], vec![1, 2, 5 % (1 << n)], (0..1u64 << n).step_by(3).collect()] {
            let f = BooleanFunction::new(n, support.into_iter().filter(|&x| x < 1 << n)).unwrap();
            let spec = GraphSpec::circulant(f.clone()).with_scaling(Scaling::ExplicitFactor(0.7));
            let mut dense = DenseOracle::from_spec(&spec).unwrap().eigenvalues().to_vec();
            let mut fast: Vec<f64> = f.fourier().iter().map(|&x| 0.7 * x as f64).collect();
            dense.sort_by(f64::total_cmp);
            fast.sort_by(f64::total_cmp);
            for (a, b) in dense.iter().zip(&fast) {
                assert!((a - b).abs() < 1e-8, "n={n} {a} vs {b}");
            }
        }
    }
}

#[test]
fn bunkbed_reduces_to_composed_circulant() {
    use qwmix::graph::{bunkbed_generators, dense_adjacency};
    for n in 1..=5u32 {
        for f in [
            BooleanFunction::delta0(n).unwrap(),
            BooleanFunction::all_ones(n).unwrap(),
            BooleanFunction::unit_shell(n).unwrap(),
            BooleanFunction::new(n, [(1u64 << n) - 1, 0]).unwrap(),
        ] {
            let block = dense_adjacency(&bunkbed_spec(n, f.clone()).unwrap()).unwrap();
            let circ = dense_adjacency(&GraphSpec::circulant(bunkbed_generators(&f))).unwrap();
            assert_eq!(block, circ);
            // F̂(a₁·ã) = (n − 2|ã|) + (−1)^{a₁} f̂(ã)
            let big = bunkbed_generators(&f).fourier();
            let small = f.fourier();
            for (a, &v) in big.iter().enumerate() {
                let low = a & ((1 << n) - 1);
                let sign = if a >> n == 1 { -1 } else { 1 };
                assert_eq!(v, n as i64 - 2 * (low.count_ones() as i64) + sign * small[low]);
            }
        }
    }
}

#[test]
fn regular_row_sums() {
    use qwmix::graph::dense_adjacency;
    for spec in circulant_families() {
        let expect = spec.row_sum();
        for r in dense_adjacency(&spec).unwrap().row_sums() {
            assert!((r - expect).abs() < 1e-12);
        }
    }
}
