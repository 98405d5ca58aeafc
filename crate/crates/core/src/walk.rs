//! Exact evolution `ψ(t) = e^{-itA} ψ(0)`.
//!
//! Three independent routes are provided: the spectral path for anything
//! reducible to a Z2^m circulant (two transforms and a diagonal phase), the
//! closed form for complete graphs combined through tensor products for
//! Cartesian products, and a dense eigendecomposition oracle.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{dense_adjacency, DenseAdjacency, GraphKind, GraphSpec};
use crate::z2n::{fwht_in_place, inverse_fwht_in_place};

/// Norm tolerance for initial states.
pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector {
    pub amps: Vec<Complex64>,
    pub time: f64,
}

impl AmplitudeVector {
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(Complex64::norm_sqr).collect()
    }

    /// `max_v |ψ_v − φ_v|`
    pub fn max_abs_diff(&self, other: &AmplitudeVector) -> f64 {
        assert_eq!(self.len(), other.len(), "length mismatch");
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// A sparse unit-norm starting vector.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialState {
    entries: Vec<(usize, Complex64)>,
}

impl Default for InitialState {
    fn default() -> Self {
        Self::point(0)
    }
}

impl InitialState {
    pub fn new(entries: Vec<(usize, Complex64)>) -> Result<Self> {
        let mut merged: Vec<(usize, Complex64)> = Vec::with_capacity(entries.len());
        let mut sorted = entries;
        sorted.sort_by_key(|e| e.0);
        for (v, c) in sorted {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += c,
                _ => merged.push((v, c)),
            }
        }
        let norm: f64 = merged.iter().map(|e| e.1.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("squared norm {norm} is not 1")));
        }
        Ok(Self { entries: merged })
    }

    pub fn point(v: usize) -> Self {
        Self { entries: vec![(v, Complex64::new(1.0, 0.0))] }
    }

    /// Equal-weight superposition over distinct vertices.
    pub fn superposition(vertices: &[usize]) -> Result<Self> {
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        if vs.len() != vertices.len() || vs.is_empty() {
            return Err(Error::InvalidState("superposition needs distinct vertices".into()));
        }
        let c = Complex64::new(1.0 / (vs.len() as f64).sqrt(), 0.0);
        Self::new(vs.into_iter().map(|v| (v, c)).collect())
    }

    pub fn entries(&self) -> &[(usize, Complex64)] {
        &self.entries
    }

    pub fn to_dense(&self, size: usize) -> Result<Vec<Complex64>> {
        let mut v = vec![Complex64::new(0.0, 0.0); size];
        for &(i, c) in &self.entries {
            if i >= size {
                return Err(Error::InvalidState(format!("vertex {i} outside 0..{size}")));
            }
            v[i] = c;
        }
        Ok(v)
    }
}

#[inline]
fn phase(theta: f64) -> Complex64 {
    // e^{-iθ}
    let (s, c) = theta.sin_cos();
    Complex64::new(c, -s)
}

/// Precomputed evolution for one spec and starting state; evaluate at any
/// number of times.
#[derive(Debug, Clone)]
pub enum Evolver {
    Circulant {
        eigenvalues: Vec<f64>,
        init_hat: Vec<Complex64>,
    },
    Complete {
        q: usize,
        scale: f64,
        init: Vec<Complex64>,
    },
    Product {
        scale: f64,
        radices: Vec<usize>,
        terms: Vec<(Complex64, Vec<Evolver>)>,
    },
}

impl Evolver {
    pub fn new(spec: &GraphSpec, init: &InitialState) -> Result<Self> {
        if let Some(form) = spec.as_circulant() {
            return Self::circulant(spec, init, form.spectrum().values().to_vec());
        }
        let size = spec.vertex_count();
        match &spec.kind {
            GraphKind::Complete(q) => Ok(Evolver::Complete { q: *q, scale: spec.scale(), init: init.to_dense(*q)? }),
            GraphKind::Product(factors) => {
                let radices: Vec<usize> = factors.iter().map(GraphSpec::vertex_count).collect();
                let mut terms = Vec::with_capacity(init.entries().len());
                for &(v, c) in init.entries() {
                    if v >= size {
                        return Err(Error::InvalidState(format!("vertex {v} outside 0..{size}")));
                    }
                    let mut rest = v;
                    let mut parts = Vec::with_capacity(factors.len());
                    for (f, &r) in factors.iter().zip(&radices) {
                        parts.push(Evolver::new(f, &InitialState::point(rest % r))?);
                        rest /= r;
                    }
                    terms.push((c, parts));
                }
                Ok(Evolver::Product { scale: spec.scale(), radices, terms })
            }
            GraphKind::Circulant(_) | GraphKind::Bunkbed(_) => unreachable!("reducible kinds handled above"),
        }
    }

    /// Spectral path only; fails for specs without a circulant form.
    pub fn new_circulant(spec: &GraphSpec, init: &InitialState) -> Result<Self> {
        let form = spec.as_circulant().ok_or(Error::NotCirculant)?;
        Self::circulant(spec, init, form.spectrum().values().to_vec())
    }

    fn circulant(spec: &GraphSpec, init: &InitialState, eigenvalues: Vec<f64>) -> Result<Self> {
        let mut init_hat = init.to_dense(spec.vertex_count())?;
        fwht_in_place(&mut init_hat)?;
        Ok(Evolver::Circulant { eigenvalues, init_hat })
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            Evolver::Circulant { eigenvalues, .. } => eigenvalues.len(),
            Evolver::Complete { q, .. } => *q,
            Evolver::Product { radices, .. } => radices.iter().product(),
        }
    }

    pub fn amplitudes(&self, t: f64) -> AmplitudeVector {
        match self {
            Evolver::Circulant { eigenvalues, init_hat } => {
                let mut amps: Vec<Complex64> =
                    init_hat.iter().zip(eigenvalues).map(|(&c, &lam)| c * phase(t * lam)).collect();
                inverse_fwht_in_place(&mut amps).expect("power-of-two length");
                AmplitudeVector { amps, time: t }
            }
            Evolver::Complete { q, scale, init } => {
                // e^{-itsA} = e^{its}(I + (e^{-itsq} − 1)/q · J) for A = J − I
                let u = t * scale;
                let total: Complex64 = init.iter().sum();
                let shift = (phase(u * *q as f64) - 1.0) / *q as f64 * total;
                let global = phase(-u);
                let amps = init.iter().map(|&c| global * (c + shift)).collect();
                AmplitudeVector { amps, time: t }
            }
            Evolver::Product { scale, terms, .. } => {
                let u = t * scale;
                let mut amps = vec![Complex64::new(0.0, 0.0); self.vertex_count()];
                for (c, parts) in terms {
                    let factors: Vec<AmplitudeVector> = parts.iter().map(|p| p.amplitudes(u)).collect();
                    let tensor = product_walk(&factors).expect("common time");
                    for (a, b) in amps.iter_mut().zip(&tensor.amps) {
                        *a += c * b;
                    }
                }
                AmplitudeVector { amps, time: t }
            }
        }
    }
}

/// Evolves any spec by its fastest exact route.
pub fn evolve(spec: &GraphSpec, init: &InitialState, t: f64) -> Result<AmplitudeVector> {
    Ok(Evolver::new(spec, init)?.amplitudes(t))
}

/// `ψ_t = H⁻¹( e^{-itλ} ⊙ H ψ_0 )` with `λ = s·F̂`.
pub fn circulant_walk(spec: &GraphSpec, init: &InitialState, t: f64) -> Result<AmplitudeVector> {
    Ok(Evolver::new_circulant(spec, init)?.amplitudes(t))
}

/// Walk on unnormalized `K_q` from vertex 0.
pub fn complete_graph_walk(q: usize, t: f64) -> AmplitudeVector {
    let qf = q as f64;
    let a = phase(t * (qf - 1.0));
    let b = phase(-t);
    let diag = (a + (qf - 1.0) * b) / qf;
    let off = (a - b) / qf;
    let mut amps = vec![off; q];
    if q > 0 {
        amps[0] = diag;
    }
    AmplitudeVector { amps, time: t }
}

/// Tensor product of per-factor walks, factor 0 as the least significant
/// digit.
pub fn product_walk(factors: &[AmplitudeVector]) -> Result<AmplitudeVector> {
    let first = factors.first().ok_or_else(|| Error::InvalidState("no factors".into()))?;
    let t = first.time;
    for f in factors {
        if (f.time - t).abs() > 1e-12 * t.abs().max(1.0) {
            return Err(Error::TimeMismatch(t, f.time));
        }
    }
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for f in factors {
        let mut next = Vec::with_capacity(amps.len() * f.len());
        for &b in &f.amps {
            next.extend(amps.iter().map(|&a| a * b));
        }
        amps = next;
    }
    Ok(AmplitudeVector { amps, time: t })
}

/// Reference evolution through a full symmetric eigendecomposition.
#[derive(Debug, Clone)]
pub struct DenseOracle {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

impl DenseOracle {
    pub fn new(adj: &DenseAdjacency) -> Result<Self> {
        let n = adj.size();
        let m = DMatrix::from_row_slice(n, n, adj.data());
        let eig = SymmetricEigen::try_new(m, f64::EPSILON, 1000 * n.max(1)).ok_or(Error::EigenNoConvergence)?;
        Ok(Self { eigenvalues: eig.eigenvalues.iter().copied().collect(), eigenvectors: eig.eigenvectors })
    }

    pub fn from_spec(spec: &GraphSpec) -> Result<Self> {
        Self::new(&dense_adjacency(spec)?)
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn evolve(&self, init: &InitialState, t: f64) -> Result<AmplitudeVector> {
        let n = self.eigenvalues.len();
        let psi0 = init.to_dense(n)?;
        if t == 0.0 {
            return Ok(AmplitudeVector { amps: psi0, time: t });
        }
        let v = &self.eigenvectors;
        let coeffs: Vec<Complex64> = (0..n)
            .map(|k| {
                let c: Complex64 = init.entries().iter().map(|&(i, a)| a * v[(i, k)]).sum();
                c * phase(t * self.eigenvalues[k])
            })
            .collect();
        let amps = (0..n)
            .map(|i| (0..n).map(|k| coeffs[k] * v[(i, k)]).sum())
            .collect();
        Ok(AmplitudeVector { amps, time: t })
    }
}

pub fn dense_walk_oracle(adj: &DenseAdjacency, init: &InitialState, t: f64) -> Result<AmplitudeVector> {
    DenseOracle::new(adj)?.evolve(init, t)
}
