//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Everything crosses the boundary as flat `f64` arrays or strings; exact
//! values stay on the Rust side.

use wasm_bindgen::prelude::*;

use ilgraph::cli::ifs_rects;
use ilgraph::numerics::{int, parse_rational, rat, to_decimal, to_f64, Rational};
use ilgraph::selfsim::{reduce_domain, standard_ifs};

/// Levels above this are refused: `3^10 + 1` vertices is already more than
/// a canvas can show.
const MAX_LEVEL: u32 = 10;
const MAX_DEPTH: u32 = 8;

fn parse(s: &str) -> Result<Rational, String> {
    parse_rational(s.trim()).map_err(|e| e.to_string())
}

/// Vertices of `u_n` as `[t0, u0, t1, u1, ...]`.
#[wasm_bindgen]
pub fn iterate_points(level: u32) -> Result<Vec<f64>, String> {
    if level > MAX_LEVEL {
        return Err(format!("level must be at most {MAX_LEVEL}"));
    }
    let un = standard_ifs().iterate(level).map_err(|e| e.to_string())?;
    Ok(un
        .points()
        .iter()
        .flat_map(|(x, y)| [to_f64(x), to_f64(y)])
        .collect())
}

/// Images of the unit square as `[x0, x1, y0, y1, ...]`, where `y0`, `y1`
/// are the images of the bottom and top edges.
#[wasm_bindgen]
pub fn square_images(depth: u32) -> Result<Vec<f64>, String> {
    if depth > MAX_DEPTH {
        return Err(format!("depth must be at most {MAX_DEPTH}"));
    }
    Ok(ifs_rects(standard_ifs(), depth)
        .iter()
        .flat_map(|r| [to_f64(&r.x0), to_f64(&r.x1), to_f64(&r.y0), to_f64(&r.y1)])
        .collect())
}

/// Blow-up profile `h ↦ λ(u(t̂ + h/λ²) - u(t̂))` on `samples + 1` equispaced
/// `h ∈ [-1, 1]`, as `[h, lo, hi, ...]` with certified lower and upper
/// bounds.
#[wasm_bindgen]
pub fn blowup_curve(t_hat: &str, lambda: &str, samples: u32) -> Result<Vec<f64>, String> {
    let t_hat = parse(t_hat)?;
    let lambda = parse(lambda)?;
    if !(1..=2000).contains(&samples) {
        return Err("samples must be in 1..=2000".into());
    }
    if lambda <= int(0) || lambda > int(1_000_000) {
        return Err("lambda must be in (0, 10^6]".into());
    }
    // depth grows with log λ so the λ-scaled enclosure stays thin
    let depth = 40 + 2 * (to_f64(&lambda).max(1.0).log2().ceil() as u32);
    let half = samples as i64;
    let mut out = Vec::with_capacity(3 * (samples as usize + 1));
    for k in 0..=samples as i64 {
        let h = rat(2 * k - half, half);
        let p = ilgraph::carnot::blowup_profile(&t_hat, &lambda, &h, depth)
            .map_err(|e| e.to_string())?;
        out.extend([to_f64(&h), to_f64(p.lo()), to_f64(p.hi())]);
    }
    Ok(out)
}

/// Text rendering of the enclosure of `u(t)`.
#[wasm_bindgen]
pub fn eval_u(t: &str, depth: u32) -> Result<String, String> {
    let t = parse(t)?;
    if depth > 400 {
        return Err("depth must be at most 400".into());
    }
    let reduced = reduce_domain(&t);
    let enc = standard_ifs()
        .eval_u(&reduced, depth)
        .map_err(|e| e.to_string())?;
    Ok(format!(
        "u({t}) ∈ [{}, {}]\n≈ [{}, {}]",
        enc.lo(),
        enc.hi(),
        to_decimal(enc.lo(), 12),
        to_decimal(enc.hi(), 12)
    ))
}
