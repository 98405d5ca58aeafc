//! Turning command-line graph options into a validated `GraphSpec`.

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use qwmix::graph::{bunkbed_spec, eta_cube_spec, hamming_spec, hypercube_spec, GraphSpec, Scaling};
use qwmix::walk::InitialState;
use qwmix::z2n::{BooleanFunction, GroupElement};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Hypercube,
    EtaCube,
    Bunkbed,
    Complete,
    Hamming,
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Graph family.
    #[arg(long, value_enum)]
    pub graph: Family,
    /// Dimension (hypercube, eta-cube, bunkbed, hamming).
    #[arg(long)]
    pub n: Option<u32>,
    /// Alphabet size (complete, hamming).
    #[arg(long)]
    pub q: Option<usize>,
    /// Matching offset for eta-cube as a bit string, leftmost character is
    /// coordinate n (e.g. 110).
    #[arg(long)]
    pub eta: Option<String>,
    /// Bunkbed connection: delta0, all-ones, hypercube, matching:<bits>, or
    /// support:<bits>,<bits>,...
    #[arg(long)]
    pub connection: Option<String>,
    /// unnormalized, degree, or factor:<x>. Defaults to the family's own
    /// convention (1/(n+1) for eta-cube, unnormalized otherwise).
    #[arg(long)]
    pub scaling: Option<String>,
}

fn need<T>(v: Option<T>, flag: &str, family: Family) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::usage(format!("--{flag} is required for --graph {}", family_name(family))))
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Hypercube => "hypercube",
        Family::EtaCube => "eta-cube",
        Family::Bunkbed => "bunkbed",
        Family::Complete => "complete",
        Family::Hamming => "hamming",
    }
}

/// Parses a bit string of exactly `n` characters.
pub fn parse_bits(s: &str, n: u32, what: &str) -> Result<u64, CliError> {
    let g = GroupElement::from_bit_str(s).map_err(|e| CliError::usage(format!("{what}: {e}")))?;
    if g.dim() != n {
        return Err(CliError::usage(format!("{what} {s:?} has length {}, expected n = {n}", g.dim())));
    }
    Ok(g.bits())
}

pub fn parse_connection(s: &str, n: u32) -> Result<BooleanFunction, CliError> {
    let f = match s.split_once(':') {
        None => match s {
            "delta0" => BooleanFunction::delta0(n),
            "all-ones" => BooleanFunction::all_ones(n),
            "hypercube" => BooleanFunction::unit_shell(n),
            _ => return Err(CliError::usage(format!("unknown connection {s:?}"))),
        },
        Some(("matching", bits)) => BooleanFunction::matching(n, parse_bits(bits, n, "matching offset")?),
        Some(("support", list)) => {
            let elems = list
                .split(',')
                .filter(|t| !t.is_empty())
                .map(|t| parse_bits(t.trim(), n, "support element"))
                .collect::<Result<Vec<u64>, _>>()?;
            BooleanFunction::new(n, elems)
        }
        Some((kind, _)) => return Err(CliError::usage(format!("unknown connection kind {kind:?}"))),
    };
    f.map_err(|e| CliError::usage(e.to_string()))
}

pub fn parse_scaling(s: &str) -> Result<Scaling, CliError> {
    match s {
        "unnormalized" => Ok(Scaling::Unnormalized),
        "degree" => Ok(Scaling::DegreeNormalized),
        _ => match s.strip_prefix("factor:").map(str::parse::<f64>) {
            Some(Ok(x)) if x.is_finite() => Ok(Scaling::ExplicitFactor(x)),
            _ => Err(CliError::usage(format!("bad scaling {s:?}: use unnormalized, degree or factor:<x>"))),
        },
    }
}

impl GraphArgs {
    pub fn build(&self) -> Result<GraphSpec, CliError> {
        let fam = self.graph;
        let spec = match fam {
            Family::Hypercube => hypercube_spec(need(self.n, "n", fam)?),
            Family::EtaCube => {
                let n = need(self.n, "n", fam)?;
                let bits = parse_bits(need(self.eta.as_deref(), "eta", fam)?, n, "eta")?;
                eta_cube_spec(n, GroupElement::new(bits, n).map_err(|e| CliError::usage(e.to_string()))?)
            }
            Family::Bunkbed => {
                let n = need(self.n, "n", fam)?;
                bunkbed_spec(n, parse_connection(need(self.connection.as_deref(), "connection", fam)?, n)?)
            }
            Family::Complete => GraphSpec::complete(need(self.q, "q", fam)?),
            Family::Hamming => hamming_spec(need(self.n, "n", fam)?, need(self.q, "q", fam)?),
        }
        .map_err(|e| CliError::usage(e.to_string()))?;
        Ok(match &self.scaling {
            Some(s) => spec.with_scaling(parse_scaling(s)?),
            None => spec,
        })
    }
}

/// Bit width when every vertex is a bit string, i.e. a Z2 family.
fn bit_width(spec: &GraphSpec) -> Option<usize> {
    let r = spec.group_radices();
    r.iter().all(|&x| x == 2).then_some(r.len())
}

/// A vertex token is a bit string when it has exactly the graph's bit width,
/// otherwise a decimal index.
pub fn parse_vertex(token: &str, spec: &GraphSpec) -> Result<usize, CliError> {
    let token = token.trim();
    let v = match bit_width(spec) {
        Some(w) if token.len() == w && token.bytes().all(|c| c == b'0' || c == b'1') => {
            usize::from_str_radix(token, 2).expect("validated bit string")
        }
        _ => token.parse::<usize>().map_err(|_| CliError::usage(format!("bad vertex {token:?}")))?,
    };
    if v >= spec.vertex_count() {
        return Err(CliError::usage(format!("vertex {token} outside 0..{}", spec.vertex_count())));
    }
    Ok(v)
}

pub fn initial_state(spec: &GraphSpec, start: &str, superposition: Option<&str>) -> Result<InitialState, CliError> {
    match superposition {
        Some(list) => {
            let vs = list.split(',').map(|t| parse_vertex(t, spec)).collect::<Result<Vec<_>, _>>()?;
            InitialState::superposition(&vs).map_err(|e| CliError::usage(e.to_string()))
        }
        None => Ok(InitialState::point(parse_vertex(start, spec)?)),
    }
}

/// Renders a real number, as an integer when it is one exactly.
pub fn fmt_value(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

pub fn fmt_complex(c: Complex64) -> (String, String) {
    (format!("{:e}", c.re), format!("{:e}", c.im))
}
