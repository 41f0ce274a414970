//! Three operations exported to the browser: the exact threshold, a rank-two
//! heat map of the integrand and a convergence scan.

use wasm_bindgen::prelude::*;

use orbital_l2::l2_analyzer::{convergence_scan, k_star, Sampling};
use orbital_l2::orbital_fourier::{IntegrandSpec, RegularPoint};
use orbital_l2::rational::{fmt_rat, parse_rat};
use orbital_l2::root_systems::{build_root_system, RootSystem};
use orbital_l2::weyl_groups::{generate, DEFAULT_GROUP_CAP};

const MAX_HEATMAP: usize = 400;
const MAX_SAMPLES: usize = 200_000;

fn system(family: &str, rank: usize) -> Result<RootSystem, String> {
    let family = family.parse().map_err(|e: orbital_l2::Error| e.to_string())?;
    build_root_system(family, rank).map_err(|e| e.to_string())
}

fn spec(family: &str, rank: usize, k: &str) -> Result<IntegrandSpec, String> {
    let rs = system(family, rank)?;
    let w = generate(&rs, DEFAULT_GROUP_CAP).map_err(|e| e.to_string())?;
    let k = parse_rat(k).map_err(|e| e.to_string())?;
    IntegrandSpec::new(&rs, &w, RegularPoint::canonical(&rs), 1.0)
        .and_then(|s| s.with_k_exact(k))
        .map_err(|e| e.to_string())
}

pub fn threshold_text(family: &str, rank: usize) -> Result<String, String> {
    let rs = system(family, rank)?;
    k_star(&rs).map(|k| fmt_rat(&k)).map_err(|e| e.to_string())
}

/// `log10` of the integrand on a `size × size` grid over `[-extent, extent]²`
/// in orthonormal coordinates of the root span, row by row from the top.
/// Points on a wall map to `-inf`.
pub fn heatmap_values(family: &str, rank: usize, k: &str, extent: f64, size: usize) -> Result<Vec<f64>, String> {
    let spec = spec(family, rank, k)?;
    if spec.rank() != 2 {
        return Err(format!("the heat map needs a rank-two system, got rank {}", spec.rank()));
    }
    if !(extent > 0.0 && extent.is_finite()) || !(2..=MAX_HEATMAP).contains(&size) {
        return Err(format!("need extent > 0 and 2 <= size <= {MAX_HEATMAP}"));
    }
    let step = 2.0 * extent / (size - 1) as f64;
    let mut out = Vec::with_capacity(size * size);
    for row in 0..size {
        let y = extent - row as f64 * step;
        for col in 0..size {
            let x = -extent + col as f64 * step;
            out.push(spec.integrand_local(&[x, y]).log10());
        }
    }
    Ok(out)
}

pub fn scan_json(family: &str, rank: usize, k: &str, shells: usize, samples: usize, seed: u64) -> Result<String, String> {
    if samples > MAX_SAMPLES {
        return Err(format!("at most {MAX_SAMPLES} samples per shell in the browser"));
    }
    let spec = spec(family, rank, k)?;
    let report = convergence_scan(&spec, shells, 1.0, &Sampling::new(samples, seed)).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn threshold(family: &str, rank: usize) -> Result<String, JsError> {
    threshold_text(family, rank).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn heatmap(family: &str, rank: usize, k: &str, extent: f64, size: usize) -> Result<Vec<f64>, JsError> {
    heatmap_values(family, rank, k, extent, size).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn scan(family: &str, rank: usize, k: &str, shells: usize, samples: usize, seed: u64) -> Result<String, JsError> {
    scan_json(family, rank, k, shells, samples, seed).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_matches_core() {
        assert_eq!(threshold_text("G", 2).unwrap(), "7/6");
        assert!(threshold_text("G", 3).is_err());
    }

    #[test]
    fn heatmap_is_symmetric_and_vanishes_on_walls() {
        let size = 41;
        let v = heatmap_values("A", 2, "3/2", 6.0, size).unwrap();
        assert_eq!(v.len(), size * size);
        assert!(v.iter().all(|x| !x.is_nan()));
        // the centre row is y = 0 and the origin is a wall point
        assert_eq!(v[20 * size + 20], f64::NEG_INFINITY);
        // A(-H) is the conjugate of A(H)
        for i in 0..size * size {
            let j = size * size - 1 - i;
            let (a, b) = (v[i], v[j]);
            assert!(a == b || (a - b).abs() < 1e-9, "{a} vs {b}");
        }
        assert!(heatmap_values("A", 3, "3/2", 6.0, size).is_err());
        assert!(heatmap_values("A", 2, "3/2", 6.0, 1).is_err());
    }

    #[test]
    fn scan_returns_a_report() {
        let text = scan_json("A", 2, "1.2", 8, 2000, 1).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["k_star"], "4/3");
        assert_eq!(v["verdict"], "diverges");
        assert!(scan_json("A", 2, "1.2", 8, MAX_SAMPLES + 1, 1).is_err());
    }
}
