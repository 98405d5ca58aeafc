//! Vertex distributions, their group Fourier transforms, and detection of
//! instantaneous uniform mixing.
//!
//! A distribution `P` on an abelian group is uniform exactly when every
//! non-trivial Fourier coefficient vanishes, so the primary uniformity
//! statistic is `max_{a≠0} |P̂(a)|`. Total variation distance to uniform is
//! reported alongside; the two satisfy
//! `max_{a≠0}|P̂(a)| ≤ 2·tv` and `tv ≤ ½·√N·max_{a≠0}|P̂(a)|`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::GraphSpec;
use crate::walk::{AmplitudeVector, Evolver, InitialState};
use crate::z2n::{fwht_in_place, log2_len, GroupElement};

/// Tolerance on `max_{a≠0}|P̂|` at closed-form times.
pub const CLOSED_FORM_TOL: f64 = 1e-9;
/// Tolerance on `max_{a≠0}|P̂|` at grid-located, refined times.
pub const GRID_TOL: f64 = 1e-6;
/// Width of the bracket at which time refinement stops.
pub const REFINE_RESOLUTION: f64 = 1e-12;
/// Largest dimension for the direct single-sum evaluation of `P̂_t(a)`.
pub const PHAT_DIRECT_MAX_DIM: u32 = 14;

#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDist {
    p: Vec<f64>,
}

impl ProbabilityDist {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        let total: f64 = p.iter().sum();
        if p.is_empty() || (total - 1.0).abs() > 1e-10 || p.iter().any(|&x| x < 0.0 || !x.is_finite()) {
            return Err(Error::InvalidState(format!("not a probability distribution (sum {total})")));
        }
        Ok(Self { p })
    }

    pub fn values(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

/// `p_v = |ψ_v|²`
pub fn distribution(psi: &AmplitudeVector) -> ProbabilityDist {
    ProbabilityDist { p: psi.probabilities() }
}

/// Z2^m transform of a distribution; `P̂(0) = 1`.
pub fn phat(p: &ProbabilityDist) -> Result<Vec<f64>> {
    log2_len(p.len())?;
    let mut v = p.p.clone();
    fwht_in_place(&mut v)?;
    Ok(v)
}

/// Fourier transform over `Z_{r_0} × Z_{r_1} × …`, digit 0 least significant.
/// With every radix equal to 2 this is the Walsh-Hadamard transform.
pub fn group_phat(p: &[f64], radices: &[usize]) -> Result<Vec<Complex64>> {
    let size: usize = radices.iter().product();
    if size != p.len() || radices.contains(&0) {
        return Err(Error::InvalidState(format!(
            "radices {radices:?} do not index {} vertices",
            p.len()
        )));
    }
    if radices.iter().all(|&r| r == 2) {
        let mut v = p.to_vec();
        fwht_in_place(&mut v)?;
        return Ok(v.into_iter().map(|x| Complex64::new(x, 0.0)).collect());
    }
    let mut v: Vec<Complex64> = p.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut stride = 1usize;
    let mut fiber = Vec::new();
    for &q in radices {
        if q > 1 {
            let roots: Vec<Complex64> = (0..q).map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / q as f64)).collect();
            let block = stride * q;
            for base in (0..size).step_by(block) {
                for off in 0..stride {
                    fiber.clear();
                    fiber.extend((0..q).map(|d| v[base + off + d * stride]));
                    for a in 0..q {
                        v[base + off + a * stride] = (0..q).map(|x| fiber[x] * roots[(a * x) % q]).sum();
                    }
                }
            }
        }
        stride *= q;
    }
    Ok(v)
}

/// `max_{a≠0} |P̂(a)|` over the given group structure.
pub fn max_offzero_phat(p: &[f64], radices: &[usize]) -> Result<f64> {
    Ok(group_phat(p, radices)?.iter().skip(1).map(|c| c.norm()).fold(0.0, f64::max))
}

/// `½ Σ_v |P_v − 1/N|`
pub fn tv_distance(p: &ProbabilityDist) -> f64 {
    tv_to_uniform(&p.p)
}

fn tv_to_uniform(p: &[f64]) -> f64 {
    let u = 1.0 / p.len() as f64;
    0.5 * p.iter().map(|&x| (x - u).abs()).sum::<f64>()
}

/// Upper bound on the total variation distance implied by `max_{a≠0}|P̂| ≤ eps`.
pub fn tv_bound_from_phat(eps: f64, vertex_count: usize) -> f64 {
    0.5 * (vertex_count as f64).sqrt() * eps
}

/// `k_η(a) = |a| + ⟦a·η = 1⟧`
pub fn k_eta(a: GroupElement, eta: GroupElement) -> Result<u32> {
    Ok(a.weight() + a.dot(eta)? as u32)
}

/// The halves `A₀ = {a : a·η = 0}` and `A₁ = {a : a·η = 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Half {
    A0,
    A1,
}

impl Half {
    pub fn contains(self, a: u64, eta: u64) -> bool {
        let dot = ((a & eta).count_ones() & 1) as u8;
        matches!((self, dot), (Half::A0, 0) | (Half::A1, 1))
    }
}

/// What the mixing theorem for `Q_n^η` predicts for a given `η`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtaClassification {
    pub eta: String,
    pub weight: u32,
    pub odd: bool,
    pub residue_mod4: u32,
    pub predicts_mixing: bool,
    /// For odd `|η|`, the half carrying the mass at `t₁*` and `t₂*`.
    pub mass_half: Option<Half>,
}

impl EtaClassification {
    pub fn new(eta: GroupElement) -> Self {
        let weight = eta.weight();
        let odd = weight % 2 == 1;
        let mass_half = match weight % 4 {
            1 => Some(Half::A1),
            3 => Some(Half::A0),
            _ => None,
        };
        Self { eta: eta.to_bit_string(), weight, odd, residue_mod4: weight % 4, predicts_mixing: !odd, mass_half }
    }
}

/// `t₁* = (n+1)π/4` and `t₂* = 3(n+1)π/4`
pub fn eta_mixing_times(n: u32) -> (f64, f64) {
    let base = (n + 1) as f64 * PI / 4.0;
    (base, 3.0 * base)
}

/// `P̂_t(a) = 2^-m Σ_b exp(-it(λ_b − λ_{a⊕b}))` for the walk started at 0,
/// evaluated from the eigenvalues alone.
pub fn phat_direct(spec: &GraphSpec, t: f64, a: u64) -> Result<Complex64> {
    let form = spec.as_circulant().ok_or(Error::NotCirculant)?;
    let m = form.dim();
    if m > PHAT_DIRECT_MAX_DIM {
        return Err(Error::InvalidGraph(format!("dimension {m} exceeds {PHAT_DIRECT_MAX_DIM} for direct evaluation")));
    }
    if a >> m != 0 {
        return Err(Error::ElementOutOfRange { bits: a, n: m });
    }
    let spectrum = form.spectrum();
    let lam = spectrum.values();
    let sum: Complex64 = (0..lam.len())
        .map(|b| {
            let d = lam[b] - lam[b ^ a as usize];
            Complex64::from_polar(1.0, -t * d)
        })
        .sum();
    Ok(sum / lam.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingReport {
    pub t: f64,
    pub tv_distance: f64,
    pub max_offzero_phat: f64,
    pub uniform: bool,
}

impl MixingReport {
    pub fn csv_header() -> &'static str {
        "t,tv_distance,max_offzero_phat,uniform"
    }

    pub fn csv_row(&self) -> String {
        format!("{},{:e},{:e},{}", self.t, self.tv_distance, self.max_offzero_phat, self.uniform)
    }
}

/// A walk bound to its group structure, for repeated uniformity queries.
#[derive(Debug, Clone)]
pub struct MixingProbe {
    evolver: Evolver,
    radices: Vec<usize>,
}

impl MixingProbe {
    pub fn new(spec: &GraphSpec, init: &InitialState) -> Result<Self> {
        Ok(Self { evolver: Evolver::new(spec, init)?, radices: spec.group_radices() })
    }

    pub fn amplitudes(&self, t: f64) -> AmplitudeVector {
        self.evolver.amplitudes(t)
    }

    pub fn probabilities(&self, t: f64) -> Vec<f64> {
        self.evolver.amplitudes(t).probabilities()
    }

    pub fn phat(&self, t: f64) -> Vec<Complex64> {
        group_phat(&self.probabilities(t), &self.radices).expect("radices match the vertex count")
    }

    pub fn max_offzero(&self, t: f64) -> f64 {
        max_offzero_phat(&self.probabilities(t), &self.radices).expect("radices match the vertex count")
    }

    pub fn tv(&self, t: f64) -> f64 {
        tv_to_uniform(&self.probabilities(t))
    }

    pub fn report(&self, t: f64, eps: f64) -> MixingReport {
        let p = self.probabilities(t);
        let m = max_offzero_phat(&p, &self.radices).expect("radices match the vertex count");
        MixingReport { t, tv_distance: tv_to_uniform(&p), max_offzero_phat: m, uniform: m <= eps }
    }
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
pub fn refine_minimum(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, resolution: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > resolution {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
        if x2 <= x1 {
            break;
        }
    }
    let mid = 0.5 * (lo + hi);
    [(x1, f1), (x2, f2), (mid, f(mid))]
        .into_iter()
        .fold((mid, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanSummary {
    pub reports: Vec<MixingReport>,
    pub min_tv: f64,
    pub argmin_t: f64,
    /// Refined uniform times, ascending.
    pub uniform_times: Vec<f64>,
}

impl ScanSummary {
    pub fn earliest_uniform_time(&self) -> Option<f64> {
        self.uniform_times.first().copied()
    }
}

/// Uniform grid of `steps` points over `[0, t_max]`.
pub fn time_grid(t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2 steps, got {steps}")));
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::InvalidGrid(format!("t_max must be positive, got {t_max}")));
    }
    let h = t_max / (steps - 1) as f64;
    Ok((0..steps).map(|k| if k == steps - 1 { t_max } else { k as f64 * h }).collect())
}

/// Evaluates the walk on a time grid and locates uniform times.
///
/// Grid points that are under tolerance or strict local minima of
/// `max_{a≠0}|P̂|` are grouped into runs; the best point of each run is
/// refined by golden-section search over its two neighbouring cells, and
/// refined points under `eps` are reported as uniform times.
pub fn scan(spec: &GraphSpec, init: &InitialState, t_max: f64, steps: usize, eps: f64) -> Result<ScanSummary> {
    let probe = MixingProbe::new(spec, init)?;
    scan_probe(&probe, t_max, steps, eps)
}

pub fn scan_probe(probe: &MixingProbe, t_max: f64, steps: usize, eps: f64) -> Result<ScanSummary> {
    let grid = time_grid(t_max, steps)?;
    let reports: Vec<MixingReport> = grid.par_iter().map(|&t| probe.report(t, eps)).collect();

    let (argmin, min_tv) = reports
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (k, r)| if r.tv_distance < best.1 { (k, r.tv_distance) } else { best });

    let g: Vec<f64> = reports.iter().map(|r| r.max_offzero_phat).collect();
    let last = g.len() - 1;
    let candidates: Vec<usize> = (0..g.len())
        .filter(|&k| {
            let left = if k == 0 { f64::INFINITY } else { g[k - 1] };
            let right = if k == last { f64::INFINITY } else { g[k + 1] };
            g[k] <= eps || (g[k] < left && g[k] <= right)
        })
        .collect();

    // Runs of adjacent candidates (a flat dip under tolerance) are refined
    // once, around the run's best grid point.
    let mut runs: Vec<usize> = Vec::new();
    let mut prev: Option<usize> = None;
    for &k in &candidates {
        match (prev, runs.last_mut()) {
            (Some(p), Some(best)) if k - p <= 2 => {
                if g[k] < g[*best] {
                    *best = k;
                }
            }
            _ => runs.push(k),
        }
        prev = Some(k);
    }

    let mut uniform_times: Vec<f64> = runs
        .par_iter()
        .filter_map(|&k| {
            let lo = grid[k.saturating_sub(1)];
            let hi = grid[(k + 1).min(last)];
            let (t, v) = refine_minimum(|t| probe.max_offzero(t), lo, hi, REFINE_RESOLUTION);
            let (t, v) = if g[k] < v { (grid[k], g[k]) } else { (t, v) };
            (v <= eps).then_some(t)
        })
        .collect();
    uniform_times.sort_by(f64::total_cmp);

    Ok(ScanSummary { min_tv, argmin_t: grid[argmin], reports, uniform_times })
}
