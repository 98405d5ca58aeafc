//! wasm-bindgen exports for the static page in `www/`.
//!
//! Graphs are named by `family` (`hypercube`, `eta-cube`, `bunkbed`,
//! `complete`, `hamming`) with `n`, `q` and one string `param`: the η bit
//! string for `eta-cube`, the connection (`delta0`, `all-ones`, `hypercube`,
//! `matching:<bits>`) for `bunkbed`, ignored otherwise.

use qwmix::graph::{bunkbed_spec, eta_cube_spec, hamming_spec, hypercube_spec, GraphSpec};
use qwmix::mixing::MixingProbe;
use qwmix::walk::InitialState;
use qwmix::z2n::{BooleanFunction, GroupElement};
use wasm_bindgen::prelude::*;

/// Largest vertex count the page will evolve.
pub const MAX_VERTICES: usize = 1 << 12;

fn bits(s: &str, n: u32) -> Result<u64, String> {
    let g = GroupElement::from_bit_str(s.trim()).map_err(|e| e.to_string())?;
    if g.dim() != n {
        return Err(format!("bit string {s:?} must have length n = {n}"));
    }
    Ok(g.bits())
}

pub fn build(family: &str, n: u32, q: u32, param: &str) -> Result<GraphSpec, String> {
    let spec = match family {
        "hypercube" => hypercube_spec(n),
        "eta-cube" => eta_cube_spec(n, GroupElement::new(bits(param, n)?, n).map_err(|e| e.to_string())?),
        "bunkbed" => {
            let f = match param.trim() {
                "delta0" => BooleanFunction::delta0(n),
                "all-ones" => BooleanFunction::all_ones(n),
                "hypercube" => BooleanFunction::unit_shell(n),
                p => match p.strip_prefix("matching:") {
                    Some(b) => BooleanFunction::matching(n, bits(b, n)?),
                    None => return Err(format!("unknown connection {p:?}")),
                },
            };
            bunkbed_spec(n, f.map_err(|e| e.to_string())?)
        }
        "complete" => GraphSpec::complete(q as usize),
        "hamming" => hamming_spec(n, q as usize),
        other => return Err(format!("unknown family {other:?}")),
    }
    .map_err(|e| e.to_string())?;
    if spec.vertex_count() > MAX_VERTICES {
        return Err(format!("{} vertices is too many for the demo (max {MAX_VERTICES})", spec.vertex_count()));
    }
    Ok(spec)
}

pub fn spectrum_values(family: &str, n: u32, q: u32, param: &str) -> Result<Vec<f64>, String> {
    Ok(build(family, n, q, param)?.eigenvalues().into_iter().map(|e| e.value).collect())
}

pub fn distribution_at(family: &str, n: u32, q: u32, param: &str, t: f64) -> Result<Vec<f64>, String> {
    let spec = build(family, n, q, param)?;
    let probe = MixingProbe::new(&spec, &InitialState::point(0)).map_err(|e| e.to_string())?;
    Ok(probe.probabilities(t))
}

/// `[t, tv, max_{a≠0}|P̂|]` triples on a uniform grid over `[0, t_max]`.
pub fn mixing_curve_values(
    family: &str,
    n: u32,
    q: u32,
    param: &str,
    t_max: f64,
    steps: u32,
) -> Result<Vec<f64>, String> {
    if steps < 2 || !(t_max.is_finite() && t_max > 0.0) {
        return Err("need steps >= 2 and a positive t_max".into());
    }
    let spec = build(family, n, q, param)?;
    let probe = MixingProbe::new(&spec, &InitialState::point(0)).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(3 * steps as usize);
    for k in 0..steps {
        let t = t_max * k as f64 / (steps - 1) as f64;
        out.extend([t, probe.tv(t), probe.max_offzero(t)]);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn spectrum(family: &str, n: u32, q: u32, param: &str) -> Result<Vec<f64>, JsError> {
    spectrum_values(family, n, q, param).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn distribution(family: &str, n: u32, q: u32, param: &str, t: f64) -> Result<Vec<f64>, JsError> {
    distribution_at(family, n, q, param, t).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn mixing_curve(family: &str, n: u32, q: u32, param: &str, t_max: f64, steps: u32) -> Result<Vec<f64>, JsError> {
    mixing_curve_values(family, n, q, param, t_max, steps).map_err(|e| JsError::new(&e))
}
