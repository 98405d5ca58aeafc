//! Graph families built on Z2^n-circulants and complete graphs.
//!
//! A [`GraphSpec`] is a closed description of the walk graph plus the
//! scaling applied to its adjacency matrix. Bunkbed graphs and products of
//! binary factors are reduced to a single circulant on Z2^m whenever that
//! is possible, so one spectral path serves all of them.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::z2n::{bit_string, BooleanFunction, GroupElement, SpectrumZ2};

/// Largest vertex count the dense exporter and oracle accept by default.
pub const DEFAULT_ORACLE_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scaling {
    Unnormalized,
    /// Divide by the vertex degree.
    DegreeNormalized,
    ExplicitFactor(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphKind {
    /// `A[s][t] = f(s ⊕ t)` on Z2^n.
    Circulant(BooleanFunction),
    /// `I ⊗ Q_n + X ⊗ A_f`; the copy bit is bit `n` of the vertex index.
    Bunkbed(BooleanFunction),
    Complete(usize),
    /// Cartesian product; factor 0 is the least significant mixed-radix digit.
    Product(Vec<GraphSpec>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphSpec {
    pub kind: GraphKind,
    pub scaling: Scaling,
}

/// A graph seen as `scale · A_F` for a Boolean `F` on Z2^m.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantForm {
    pub generators: BooleanFunction,
    pub scale: f64,
}

impl CirculantForm {
    pub fn dim(&self) -> u32 {
        self.generators.dim()
    }

    pub fn spectrum(&self) -> SpectrumZ2 {
        SpectrumZ2::of_circulant(&self.generators, self.scale)
    }
}

/// One eigenvalue with the character label it belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub index: usize,
    pub label: String,
    pub weight: u32,
    pub value: f64,
}

impl GraphSpec {
    pub fn new(kind: GraphKind, scaling: Scaling) -> Self {
        Self { kind, scaling }
    }

    pub fn circulant(f: BooleanFunction) -> Self {
        Self::new(GraphKind::Circulant(f), Scaling::Unnormalized)
    }

    pub fn complete(q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidGraph("complete graph needs q >= 1".into()));
        }
        Ok(Self::new(GraphKind::Complete(q), Scaling::Unnormalized))
    }

    pub fn product(factors: Vec<GraphSpec>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidGraph("empty product".into()));
        }
        Ok(Self::new(GraphKind::Product(factors), Scaling::Unnormalized))
    }

    pub fn with_scaling(mut self, scaling: Scaling) -> Self {
        self.scaling = scaling;
        self
    }

    pub fn vertex_count(&self) -> usize {
        match &self.kind {
            GraphKind::Circulant(f) => f.domain_size(),
            GraphKind::Bunkbed(f) => 2 * f.domain_size(),
            GraphKind::Complete(q) => *q,
            GraphKind::Product(fs) => fs
                .iter()
                .map(GraphSpec::vertex_count)
                .fold(1usize, |acc, c| acc.saturating_mul(c)),
        }
    }

    /// Row sum of the adjacency matrix before this spec's own scaling.
    pub fn raw_degree(&self) -> f64 {
        match &self.kind {
            GraphKind::Circulant(f) => f.support_size() as f64,
            GraphKind::Bunkbed(f) => (f.dim() as usize + f.support_size()) as f64,
            GraphKind::Complete(q) => (*q - 1) as f64,
            GraphKind::Product(fs) => fs.iter().map(GraphSpec::row_sum).sum(),
        }
    }

    /// The multiplier applied to the raw adjacency matrix.
    pub fn scale(&self) -> f64 {
        match self.scaling {
            Scaling::Unnormalized => 1.0,
            Scaling::DegreeNormalized => {
                let d = self.raw_degree();
                if d > 0.0 {
                    1.0 / d
                } else {
                    1.0
                }
            }
            Scaling::ExplicitFactor(c) => c,
        }
    }

    pub fn row_sum(&self) -> f64 {
        self.scale() * self.raw_degree()
    }

    pub fn has_self_loops(&self) -> bool {
        match &self.kind {
            GraphKind::Circulant(f) => f.contains(0),
            GraphKind::Bunkbed(_) | GraphKind::Complete(_) => false,
            GraphKind::Product(fs) => fs.iter().any(GraphSpec::has_self_loops),
        }
    }

    /// Cyclic group orders whose product indexes the vertices; all twos for
    /// Z2 families, `q` per complete factor.
    pub fn group_radices(&self) -> Vec<usize> {
        match &self.kind {
            GraphKind::Circulant(f) => vec![2; f.dim() as usize],
            GraphKind::Bunkbed(f) => vec![2; f.dim() as usize + 1],
            GraphKind::Complete(q) => vec![*q],
            GraphKind::Product(fs) => fs.iter().flat_map(GraphSpec::group_radices).collect(),
        }
    }

    /// Reduction to a single Z2^m circulant, if one exists.
    pub fn as_circulant(&self) -> Option<CirculantForm> {
        let s = self.scale();
        match &self.kind {
            GraphKind::Circulant(f) => Some(CirculantForm { generators: f.clone(), scale: s }),
            GraphKind::Bunkbed(f) => Some(CirculantForm { generators: bunkbed_generators(f), scale: s }),
            GraphKind::Complete(2) => Some(CirculantForm {
                generators: BooleanFunction::new(1, [1]).expect("valid"),
                scale: s,
            }),
            GraphKind::Complete(_) => None,
            GraphKind::Product(fs) => {
                let forms: Vec<CirculantForm> = fs.iter().map(GraphSpec::as_circulant).collect::<Option<_>>()?;
                let common = forms[0].scale;
                if forms.iter().any(|c| c.scale != common) {
                    return None;
                }
                if forms.len() > 1 && forms.iter().any(|c| c.generators.contains(0)) {
                    return None;
                }
                let mut shift = 0u32;
                let mut support = Vec::new();
                for c in &forms {
                    support.extend(c.generators.support().iter().map(|&x| x << shift));
                    shift += c.dim();
                }
                let generators = BooleanFunction::new(shift, support).ok()?;
                Some(CirculantForm { generators, scale: s * common })
            }
        }
    }

    /// All eigenvalues, labeled by character. Z2 families are labeled by
    /// bit strings, complete factors by their digit.
    pub fn eigenvalues(&self) -> Vec<Eigenpair> {
        let s = self.scale();
        match &self.kind {
            GraphKind::Circulant(_) | GraphKind::Bunkbed(_) => {
                let form = self.as_circulant().expect("Z2 family");
                let m = form.dim();
                form.spectrum()
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(a, &v)| Eigenpair {
                        index: a,
                        label: bit_string(a as u64, m),
                        weight: (a as u64).count_ones(),
                        value: v + 0.0,
                    })
                    .collect()
            }
            GraphKind::Complete(q) => (0..*q)
                .map(|a| Eigenpair {
                    index: a,
                    label: digit_label(a, *q),
                    weight: (a != 0) as u32,
                    value: s * if a == 0 { (*q - 1) as f64 } else { -1.0 } + 0.0,
                })
                .collect(),
            GraphKind::Product(fs) => {
                let mut acc = vec![Eigenpair { index: 0, label: String::new(), weight: 0, value: 0.0 }];
                let mut stride = 1usize;
                for factor in fs {
                    let part = factor.eigenvalues();
                    let mut next = Vec::with_capacity(acc.len() * part.len());
                    for p in &part {
                        for e in &acc {
                            next.push(Eigenpair {
                                index: e.index + stride * p.index,
                                label: format!("{}{}", p.label, e.label),
                                weight: e.weight + p.weight,
                                value: e.value + p.value,
                            });
                        }
                    }
                    stride *= part.len();
                    acc = next;
                }
                for e in &mut acc {
                    e.value = s * e.value + 0.0;
                }
                acc
            }
        }
    }
}

fn digit_label(a: usize, q: usize) -> String {
    if q <= 10 {
        a.to_string()
    } else {
        format!("({a})")
    }
}

/// `F(a₁·ã) = ⟦a₁ = 0⟧⟦|ã| = 1⟧ + ⟦a₁ = 1⟧ f(ã)` on Z2^{n+1}.
pub fn bunkbed_generators(f: &BooleanFunction) -> BooleanFunction {
    let n = f.dim();
    let top = 1u64 << n;
    let support = (0..n).map(|j| 1u64 << j).chain(f.support().iter().map(|&x| top | x));
    BooleanFunction::new(n + 1, support).expect("dimension already validated")
}

/// `Q_n`: generators `{e_1, …, e_n}`.
pub fn hypercube_spec(n: u32) -> Result<GraphSpec> {
    if n == 0 {
        return Err(Error::InvalidGraph("hypercube needs n >= 1".into()));
    }
    Ok(GraphSpec::circulant(BooleanFunction::unit_shell(n)?))
}

/// `Q_n^η`: the hypercube plus the matching `a ↔ a ⊕ η`, scaled by `1/(n+1)`.
/// `η = 0_n` yields self-loops.
pub fn eta_cube_spec(n: u32, eta: GroupElement) -> Result<GraphSpec> {
    if n == 0 {
        return Err(Error::InvalidGraph("eta-cube needs n >= 1".into()));
    }
    if eta.dim() != n {
        return Err(Error::DimensionMismatch { left: n, right: eta.dim() });
    }
    if eta.weight() == 1 {
        return Err(Error::InvalidGraph(format!("eta = {eta} duplicates a hypercube edge")));
    }
    let f = BooleanFunction::unit_shell(n)?.with_element(eta.bits())?;
    Ok(GraphSpec::circulant(f).with_scaling(Scaling::ExplicitFactor(1.0 / (n + 1) as f64)))
}

/// `B_n(A_f) = I ⊗ Q_n + X ⊗ A_f`.
pub fn bunkbed_spec(n: u32, connection: BooleanFunction) -> Result<GraphSpec> {
    if connection.dim() != n {
        return Err(Error::DimensionMismatch { left: n, right: connection.dim() });
    }
    Ok(GraphSpec::new(GraphKind::Bunkbed(connection), Scaling::Unnormalized))
}

/// `H(n, q)`: `n` copies of `K_q`.
pub fn hamming_spec(n: u32, q: usize) -> Result<GraphSpec> {
    if n == 0 || q < 2 {
        return Err(Error::InvalidGraph(format!("Hamming graph needs n >= 1 and q >= 2, got n={n}, q={q}")));
    }
    let total = (q as u128).checked_pow(n);
    if total.map_or(true, |t| t > usize::MAX as u128) {
        return Err(Error::InvalidGraph(format!("H({n},{q}) is too large")));
    }
    GraphSpec::product(vec![GraphSpec::complete(q)?; n as usize])
}

/// A dense symmetric adjacency matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseAdjacency {
    size: usize,
    data: Vec<f64>,
}

impl DenseAdjacency {
    pub fn zeros(size: usize) -> Self {
        Self { size, data: vec![0.0; size * size] }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.size + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.size..(i + 1) * self.size]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.size).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// `N` on the first line, then one comma-separated row per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.size).unwrap();
        for i in 0..self.size {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{}", v + 0.0)).collect();
            writeln!(out, "{}", row.join(",")).unwrap();
        }
        out
    }
}

pub fn dense_adjacency(spec: &GraphSpec) -> Result<DenseAdjacency> {
    dense_adjacency_capped(spec, DEFAULT_ORACLE_CAP)
}

pub fn dense_adjacency_capped(spec: &GraphSpec, cap: usize) -> Result<DenseAdjacency> {
    let size = spec.vertex_count();
    if size > cap {
        return Err(Error::OracleCapExceeded { size, cap });
    }
    let s = spec.scale();
    let mut adj = DenseAdjacency::zeros(size);
    match &spec.kind {
        GraphKind::Circulant(f) => {
            for i in 0..size {
                for j in 0..size {
                    if f.contains((i ^ j) as u64) {
                        adj.set(i, j, s);
                    }
                }
            }
        }
        GraphKind::Bunkbed(f) => {
            let n = f.dim();
            let low = (1usize << n) - 1;
            for i in 0..size {
                for j in 0..size {
                    let d = ((i ^ j) & low) as u64;
                    let edge = if (i >> n) == (j >> n) { d.count_ones() == 1 } else { f.contains(d) };
                    if edge {
                        adj.set(i, j, s);
                    }
                }
            }
        }
        GraphKind::Complete(q) => {
            for i in 0..*q {
                for j in 0..*q {
                    if i != j {
                        adj.set(i, j, s);
                    }
                }
            }
        }
        GraphKind::Product(fs) => {
            let parts: Vec<DenseAdjacency> =
                fs.iter().map(|f| dense_adjacency_capped(f, cap)).collect::<Result<_>>()?;
            let mut stride = 1usize;
            for part in &parts {
                let q = part.size();
                for i in 0..size {
                    let di = (i / stride) % q;
                    let base = i - di * stride;
                    for dj in 0..q {
                        let v = part.get(di, dj);
                        if v != 0.0 {
                            let j = base + dj * stride;
                            adj.set(i, j, adj.get(i, j) + s * v);
                        }
                    }
                }
                stride *= q;
            }
        }
    }
    Ok(adj)
}
