//! One checker per mixing or non-mixing result on the generalized
//! hypercubes. Each returns a [`Verdict`] listing the individual checks with
//! their expected and observed values.

use std::f64::consts::PI;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{bunkbed_spec, eta_cube_spec, hamming_spec, hypercube_spec, GraphSpec, Scaling};
use crate::mixing::{
    eta_mixing_times, refine_minimum, scan_probe, time_grid, EtaClassification, MixingProbe, CLOSED_FORM_TOL,
    GRID_TOL, REFINE_RESOLUTION,
};
use crate::walk::{DenseOracle, InitialState};
use crate::z2n::{BooleanFunction, GroupElement};

/// Agreement required between a walk-computed `P̂` and a closed form.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Agreement required between the hypercube walk and `cos(2t)^{|a|}`.
pub const HYPERCUBE_CLOSED_FORM_TOL: f64 = 1e-10;
/// Maximum amplitude deviation tolerated between fast and dense routes.
pub const ORACLE_TOL: f64 = 1e-8;
/// Largest vertex count cross-checked against the dense oracle in
/// [`verify_hamming`].
pub const HAMMING_ORACLE_MAX: usize = 512;
/// Grid points for the one-period scan of `K_q`.
pub const HAMMING_SCAN_STEPS: usize = 100_000;
/// Grid points over `[0, 4π]` for the bunkbed lower bound.
pub const BUNKBED_GRID_STEPS: usize = 10_000;
/// Grid points over `[0, π]` for `B_n(Q_n)`.
pub const BBQN_GRID_STEPS: usize = 1_000;

/// Lower baselines for `min_t tv(K_q)` over one period, frozen from a
/// 10⁵-point brute-force scan (grid minimum less 1e-6).
pub const COMPLETE_TV_BASELINES: [(usize, f64); 4] =
    [(5, 0.159_999), (6, 0.277_776), (7, 0.367_345), (8, 0.437_499)];

/// Positive margin used for `q` without a frozen baseline.
const FALLBACK_TV_MARGIN: f64 = 1e-6;

pub fn tv_baseline(q: usize) -> Option<f64> {
    COMPLETE_TV_BASELINES.iter().find(|b| b.0 == q).map(|b| b.1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    Mixing,
    NotMixing,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub params: Value,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub check: String,
    pub params: Value,
    pub conclusion: Conclusion,
    /// Uniform times established by the check.
    pub mixing_times: Vec<f64>,
    pub cases: Vec<CaseReport>,
    pub pass: bool,
}

impl Verdict {
    fn new(check: &str, params: Value) -> Self {
        Self {
            check: check.to_string(),
            params,
            conclusion: Conclusion::Inconclusive,
            mixing_times: Vec::new(),
            cases: Vec::new(),
            pass: true,
        }
    }

    fn case(&mut self, what: &str, expected: impl Into<String>, observed: impl Into<String>, pass: bool) {
        let mut params = self.params.clone();
        params["case"] = Value::String(what.to_string());
        self.pass &= pass;
        self.cases.push(CaseReport { params, expected: expected.into(), observed: observed.into(), pass });
    }
}

/// Deterministic low-discrepancy points in `[0, 1)`.
fn weyl(k: usize) -> f64 {
    const ALPHA: f64 = 0.618_033_988_749_894_8;
    (0.5 + k as f64 * ALPHA).fract()
}

/// `Q_n` mixes at `π/4` and `P̂_t(a) = cos(2t)^{|a|}`.
pub fn verify_hypercube(n: u32, eps: f64) -> Result<Verdict> {
    let spec = hypercube_spec(n)?;
    let probe = MixingProbe::new(&spec, &InitialState::point(0))?;
    let mut v = Verdict::new("hypercube", json!({ "n": n }));

    let at = probe.max_offzero(PI / 4.0);
    v.case("uniform at pi/4", format!("max|P^(a!=0)| <= {eps:e}"), format!("{at:e}"), at <= eps);

    let mut worst = 0.0f64;
    for k in 0..64 {
        let t = 4.0 * PI * weyl(k);
        let ph = probe.phat(t);
        for (a, c) in ph.iter().enumerate() {
            let closed = (2.0 * t).cos().powi((a as u64).count_ones() as i32);
            worst = worst.max((c.re - closed).abs()).max(c.im.abs());
        }
    }
    v.case(
        "closed form cos(2t)^|a|",
        format!("deviation <= {HYPERCUBE_CLOSED_FORM_TOL:e}"),
        format!("{worst:e}"),
        worst <= HYPERCUBE_CLOSED_FORM_TOL,
    );
    v.conclusion = Conclusion::Mixing;
    v.mixing_times = vec![PI / 4.0];
    Ok(v)
}

/// Mixing of `Q_n^η` at `t₁*, t₂*` iff `|η|` is even, the half-uniform
/// pattern and the value of `P̂(η)` for odd `|η|`, and uniform mixing from
/// `(|0⟩ + |η⟩)/√2`.
pub fn verify_eta_theorem(n: u32, eta: GroupElement, eps: f64) -> Result<Verdict> {
    let spec = eta_cube_spec(n, eta)?;
    let class = EtaClassification::new(eta);
    let mut v = Verdict::new("eta", json!({ "n": n, "eta": eta.to_bit_string() }));
    let probe = MixingProbe::new(&spec, &InitialState::point(0))?;
    let (t1, t2) = eta_mixing_times(n);

    for (label, t) in [("t1", t1), ("t2", t2)] {
        let m = probe.max_offzero(t);
        let uniform = m <= eps;
        v.case(
            &format!("uniform at {label}"),
            format!("uniform = {}", class.predicts_mixing),
            format!("uniform = {uniform} (max|P^(a!=0)| = {m:e})"),
            uniform == class.predicts_mixing,
        );
    }

    if let Some(half) = class.mass_half {
        let target = 2.0 / (1u64 << n) as f64;
        for (label, t) in [("t1", t1), ("t2", t2)] {
            let p = probe.probabilities(t);
            let mut worst = 0.0f64;
            let mut support_ok = true;
            for (a, &pa) in p.iter().enumerate() {
                let inside = half.contains(a as u64, eta.bits());
                let expect = if inside { target } else { 0.0 };
                worst = worst.max((pa - expect).abs());
                support_ok &= inside == (pa > 0.5 * target);
            }
            v.case(
                &format!("half-uniform on {half:?} at {label}"),
                format!("P = {target} on {half:?}, 0 elsewhere (tol {IDENTITY_TOL:e})"),
                format!("support match = {support_ok}, max deviation {worst:e}"),
                support_ok && worst <= IDENTITY_TOL,
            );
        }

        let sign = if ((class.weight + 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let ph = probe.phat(t1)[eta.bits() as usize];
        v.case(
            "P^(eta) at t1",
            format!("{sign}"),
            format!("{:.12}{:+.1e}i", ph.re, ph.im),
            (ph.re - sign).abs() <= IDENTITY_TOL && ph.im.abs() <= IDENTITY_TOL,
        );

        let sup = MixingProbe::new(&spec, &InitialState::superposition(&[0, eta.bits() as usize])?)?;
        for (label, t) in [("t1", t1), ("t2", t2)] {
            let m = sup.max_offzero(t);
            v.case(
                &format!("superposition start uniform at {label}"),
                format!("max|P^(a!=0)| <= {eps:e}"),
                format!("{m:e}"),
                m <= eps,
            );
        }
    }

    v.conclusion = if class.predicts_mixing { Conclusion::Mixing } else { Conclusion::NotMixing };
    if class.predicts_mixing {
        v.mixing_times = vec![t1, t2];
    }
    Ok(v)
}

/// `H(n, q)` mixes iff `q ≤ 4`, decided on the factor `K_q` and lifted to
/// the product through the probability factorization.
pub fn verify_hamming(n: u32, q: usize, eps: f64) -> Result<Verdict> {
    let spec = hamming_spec(n, q)?;
    let mut v = Verdict::new("hamming", json!({ "n": n, "q": q }));
    let factor = GraphSpec::complete(q)?;
    let period = 2.0 * PI / q as f64;
    let kq = MixingProbe::new(&factor, &InitialState::point(0))?;
    let summary = scan_probe(&kq, period, HAMMING_SCAN_STEPS, GRID_TOL)?;

    let product = MixingProbe::new(&spec, &InitialState::point(0))?;
    let mut probe_times = vec![0.3 * period, 0.77 * period, 2.5];

    if q <= 4 {
        match summary.earliest_uniform_time() {
            Some(t) => {
                let tv = kq.tv(t);
                v.case(
                    "K_q uniform time in one period",
                    format!("tv < {GRID_TOL:e}"),
                    format!("t = {t:.12}, tv = {tv:e}"),
                    tv < GRID_TOL,
                );
                let m = product.max_offzero(t);
                let tvp = product.tv(t);
                v.case(
                    "H(n,q) uniform at the factor time",
                    format!("max|P^(a!=0)| <= {eps:e}"),
                    format!("{m:e} (tv {tvp:e})"),
                    m <= eps,
                );
                v.conclusion = Conclusion::Mixing;
                v.mixing_times = summary.uniform_times.clone();
                probe_times.push(t);
            }
            None => v.case("K_q uniform time in one period", "found", "none", false),
        }
    } else {
        let k = (0..summary.reports.len())
            .min_by(|&a, &b| summary.reports[a].tv_distance.total_cmp(&summary.reports[b].tv_distance))
            .expect("non-empty grid");
        let h = period / (HAMMING_SCAN_STEPS - 1) as f64;
        let (tmin, refined) =
            refine_minimum(|t| kq.tv(t), (summary.reports[k].t - h).max(0.0), summary.reports[k].t + h, REFINE_RESOLUTION);
        let min_tv = refined.min(summary.min_tv);
        let baseline = tv_baseline(q).unwrap_or(FALLBACK_TV_MARGIN);
        v.case(
            "K_q min tv over one period",
            format!("> {baseline}"),
            format!("{min_tv:.12} at t = {tmin:.9}"),
            min_tv > baseline && summary.uniform_times.is_empty(),
        );
        let at = product.tv(tmin);
        v.case(
            "H(n,q) not uniform at the factor minimum",
            "tv > 0",
            format!("{at:e}"),
            at > baseline,
        );
        v.conclusion = Conclusion::NotMixing;
        probe_times.push(tmin);
    }

    if spec.vertex_count() <= HAMMING_ORACLE_MAX {
        let oracle = DenseOracle::from_spec(&spec)?;
        let worst = probe_times
            .iter()
            .map(|&t| Ok(product.amplitudes(t).max_abs_diff(&oracle.evolve(&InitialState::point(0), t)?)))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        v.case("product walk vs dense oracle", format!("< {ORACLE_TOL:e}"), format!("{worst:e}"), worst < ORACLE_TOL);
    }
    Ok(v)
}

/// `B_n(A_f)` never mixes when `|supp(f̂)| < 2^{n-1}`:
/// `P̂_t(1·0_n) = 2^{-n} Σ_b cos(2 f̂(b) t) ≥ 1 − 2|supp(f̂)|/2^n > 0`.
pub fn verify_bunkbed_theorem(n: u32, f: &BooleanFunction, eps: f64) -> Result<Verdict> {
    let spec = bunkbed_spec(n, f.clone())?;
    let support: Vec<u64> = f.support().to_vec();
    let mut v = Verdict::new("bunkbed", json!({ "n": n, "connection_support": support }));
    let fhat = f.fourier();
    let count = fhat.iter().filter(|&&x| x != 0).count();
    let threshold = 1usize << n.saturating_sub(1);
    v.case("|supp(f^)| (exact)", "integer count", count.to_string(), true);

    if n == 0 || count >= threshold {
        v.case(
            "small Fourier support criterion",
            format!("|supp(f^)| < {threshold}"),
            format!("{count}: criterion inconclusive"),
            true,
        );
        v.conclusion = Conclusion::Inconclusive;
        return Ok(v);
    }

    let size = 1u64 << n;
    let bound = 1.0 - 2.0 * count as f64 / size as f64;
    let probe = MixingProbe::new(&spec, &InitialState::point(0))?;
    let top = size as usize;
    let mut min_val = f64::INFINITY;
    let mut worst_formula = 0.0f64;
    for t in time_grid(4.0 * PI, BUNKBED_GRID_STEPS)? {
        let walk = probe.phat(t)[top];
        let formula = fhat.iter().map(|&x| (2.0 * x as f64 * t).cos()).sum::<f64>() / size as f64;
        min_val = min_val.min(walk.re);
        worst_formula = worst_formula.max((walk.re - formula).abs()).max(walk.im.abs());
    }
    v.case(
        "P^_t(1.0) lower bound on grid",
        format!(">= {bound} (tol {IDENTITY_TOL:e})"),
        format!("min {min_val:.12}"),
        min_val >= bound - IDENTITY_TOL && bound > 0.0,
    );
    v.case(
        "P^_t(1.0) = 2^-n sum cos(2 f^(b) t)",
        format!("deviation <= {IDENTITY_TOL:e}"),
        format!("{worst_formula:e}"),
        worst_formula <= IDENTITY_TOL,
    );
    // the bound also rules out uniformity at any single time with margin eps
    v.pass &= bound > eps;
    v.conclusion = Conclusion::NotMixing;
    Ok(v)
}

/// Closed form of `P̂_t(0·ã)` for the walk on `s·(J₂ ⊗ Q_n)`:
/// `½ + ½·cos(4st)^{|ã|}`, since the `a₁ = 0` eigenvalues are `2λ_{Q_n}(ã)`.
pub fn bbqn_phat_closed_form(t: f64, scale: f64, weight: u32) -> f64 {
    0.5 + 0.5 * (4.0 * scale * t).cos().powi(weight as i32)
}

/// `B_n(Q_n) = J₂ ⊗ Q_n` never mixes: `P̂_t(0·ã) = ½ + ½cos(4t)^{|ã|}` for
/// the unnormalized walk, which is at least ½ for even `|ã|`. The same
/// identity written with `cos(2t)` holds for the half-rate walk
/// `½·(J₂ ⊗ Q_n)`; both are checked.
pub fn verify_bbqn(n: u32, eps: f64) -> Result<Verdict> {
    if n < 2 {
        return Err(Error::InvalidGraph("B_n(Q_n) check needs n >= 2".into()));
    }
    let f = BooleanFunction::unit_shell(n)?;
    let spec = bunkbed_spec(n, f.clone())?;
    let mut v = Verdict::new("bbqn", json!({ "n": n }));
    let count = f.fourier_support_size();
    v.case(
        "|supp(f^)| >= 2^(n-1)",
        format!(">= {}", 1u64 << (n - 1)),
        count.to_string(),
        count >= 1 << (n - 1),
    );

    let size = 1usize << n;
    for (label, scale) in [("unnormalized, cos(4t)", 1.0), ("half rate, cos(2t)", 0.5)] {
        let probe = MixingProbe::new(&spec.clone().with_scaling(Scaling::ExplicitFactor(scale)), &InitialState::point(0))?;
        let mut worst = 0.0f64;
        let mut min_even = f64::INFINITY;
        for t in time_grid(PI, BBQN_GRID_STEPS)? {
            let ph = probe.phat(t);
            for (a, value) in ph.iter().enumerate().take(size) {
                let w = (a as u64).count_ones();
                let closed = bbqn_phat_closed_form(t, scale, w);
                worst = worst.max((value.re - closed).abs()).max(value.im.abs());
                if w % 2 == 0 && a != 0 {
                    min_even = min_even.min(value.re);
                }
            }
        }
        v.case(
            &format!("P^_t(0.a~) closed form ({label})"),
            format!("deviation <= {IDENTITY_TOL:e}"),
            format!("{worst:e}"),
            worst <= IDENTITY_TOL,
        );
        v.case(
            &format!("min P^ over even |a~| != 0 ({label})"),
            format!(">= {}", 0.5 - IDENTITY_TOL),
            format!("{min_even:.12}"),
            min_even >= 0.5 - IDENTITY_TOL && min_even > eps,
        );
    }
    v.conclusion = Conclusion::NotMixing;
    Ok(v)
}

/// Earliest refined uniform times of `Q_n` and `Q_n^η`, both degree
/// normalized.
#[derive(Debug, Clone, Serialize)]
pub struct MixingTimeComparison {
    pub hypercube: Option<f64>,
    pub eta_cube: Option<f64>,
}

pub fn compare_mixing_times(n: u32, eta: GroupElement, steps: usize) -> Result<MixingTimeComparison> {
    let t_max = (n + 1) as f64 * PI;
    let cube = hypercube_spec(n)?.with_scaling(Scaling::DegreeNormalized);
    let eta_cube = eta_cube_spec(n, eta)?.with_scaling(Scaling::DegreeNormalized);
    let first = |spec: &GraphSpec| -> Result<Option<f64>> {
        let probe = MixingProbe::new(spec, &InitialState::point(0))?;
        Ok(scan_probe(&probe, t_max, steps, GRID_TOL)?.earliest_uniform_time())
    };
    Ok(MixingTimeComparison { hypercube: first(&cube)?, eta_cube: first(&eta_cube)? })
}

/// All `η` of dimension `n` other than the unit vectors.
pub fn admissible_etas(n: u32, include_zero: bool) -> Vec<GroupElement> {
    (0..1u64 << n)
        .filter(|e| e.count_ones() != 1 && (include_zero || *e != 0))
        .map(|e| GroupElement::new(e, n).expect("in range"))
        .collect()
}

pub const DEFAULT_EPS: f64 = CLOSED_FORM_TOL;
