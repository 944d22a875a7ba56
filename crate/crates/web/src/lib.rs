//! Browser bindings for the beamswitch demo page.
//!
//! Three operations are exported: a beamstate map over the visible
//! hemisphere, a steered linear-array cut, and the grating-free steering
//! limit. Each has a plain Rust counterpart in [`api`] that the wasm
//! wrappers call, so the logic is testable off the browser.

use wasm_bindgen::prelude::*;

pub mod api {
    use beamswitch::export::report_json;
    use beamswitch::metrics::{analyze, brute_force_grating_limit, grating_lobe_limit};
    use beamswitch::radiation::{field, total_pattern};
    use beamswitch::{ArrayLayout, BeamState, ElementPattern, Excitation, GridSpec, PatternCut, PeakParams};

    const DESIGN_HZ: f64 = 14e9;
    /// Floor for dB maps, relative to the maximum.
    pub const MAP_FLOOR_DB: f64 = -40.0;

    fn element(gain_dbi: f64) -> Result<ElementPattern, String> {
        if gain_dbi <= 0.0 {
            Ok(ElementPattern::Isotropic)
        } else {
            ElementPattern::fit_cos_power(gain_dbi).map_err(|e| e.to_string())
        }
    }

    fn state_array(state: &str, freq_ghz: f64) -> Result<(ArrayLayout, Vec<beamswitch::Complex64>), String> {
        let state: BeamState = state.parse().map_err(|e: beamswitch::Error| e.to_string())?;
        let layout = ArrayLayout::planar(3, 3, 0.5, DESIGN_HZ)
            .and_then(|l| l.at_frequency(freq_ghz * 1e9))
            .map_err(|e| e.to_string())?;
        let w = Excitation::Beamstate(state).weights(&layout).map_err(|e| e.to_string())?;
        Ok((layout, w))
    }

    fn to_db(power: &mut [f64]) {
        let max = power.iter().copied().filter(|p| p.is_finite()).fold(0.0, f64::max);
        for p in power.iter_mut() {
            if p.is_finite() {
                *p = if *p > 0.0 && max > 0.0 { (10.0 * (*p / max).log10()).max(MAP_FLOOR_DB) } else { MAP_FLOOR_DB };
            }
        }
    }

    /// Normalized power (dB) on an `n × n` direction-cosine raster,
    /// `u = sinθ cosφ` left to right, `v = sinθ sinφ` bottom to top,
    /// row-major from the top row. Outside the unit circle is `NaN`.
    pub fn beamstate_uv_map(state: &str, freq_ghz: f64, gain_dbi: f64, n: usize) -> Result<Vec<f64>, String> {
        if !(2..=1024).contains(&n) {
            return Err(format!("raster size must be 2..=1024, got {n}"));
        }
        let (layout, w) = state_array(state, freq_ghz)?;
        let elem = element(gain_dbi)?;
        let step = 2.0 / (n - 1) as f64;
        let mut out = Vec::with_capacity(n * n);
        for row in 0..n {
            let v = 1.0 - row as f64 * step;
            for col in 0..n {
                let u = -1.0 + col as f64 * step;
                let s = (u * u + v * v).sqrt();
                if s > 1.0 {
                    out.push(f64::NAN);
                    continue;
                }
                let theta = s.asin().to_degrees();
                let phi = v.atan2(u).to_degrees().rem_euclid(360.0);
                let f = field(&layout, &w, &elem, theta, phi).map_err(|e| e.to_string())?;
                out.push(f.norm_sqr());
            }
        }
        to_db(&mut out);
        Ok(out)
    }

    /// Full [`beamswitch::PatternReport`] of a beamstate as JSON (1° grid).
    pub fn beamstate_report(state: &str, freq_ghz: f64, gain_dbi: f64) -> Result<String, String> {
        let (layout, w) = state_array(state, freq_ghz)?;
        let elem = element(gain_dbi)?;
        let spec = GridSpec::new(1.0, 1.0).map_err(|e| e.to_string())?;
        let grid = total_pattern(&layout, &w, &elem, &spec).map_err(|e| e.to_string())?;
        let report = analyze(&grid, &layout, &PeakParams::default()).map_err(|e| e.to_string())?;
        report_json(&report).map_err(|e| e.to_string())
    }

    /// φ = 0° cut of an `n`-element row steered by `dphi_deg`, as
    /// normalized dB at 0.5° steps from −90° to 90° (361 values).
    pub fn steer_cut(n: usize, spacing_wl: f64, dphi_deg: f64, gain_dbi: f64) -> Result<Vec<f64>, String> {
        let layout = ArrayLayout::linear(n, spacing_wl, DESIGN_HZ).map_err(|e| e.to_string())?;
        let w = Excitation::Progressive { dphi_deg }.weights(&layout).map_err(|e| e.to_string())?;
        let cut = PatternCut::evaluate(&layout, &w, &element(gain_dbi)?, 0.0, 0.5).map_err(|e| e.to_string())?;
        let mut p = cut.power();
        to_db(&mut p);
        Ok(p)
    }

    /// `[analytic limit, brute-force limit]` in degrees for a 5-element row;
    /// the second is 90 when the row stays clean to endfire.
    pub fn grating_limits(spacing_wl: f64) -> Result<[f64; 2], String> {
        if !(spacing_wl.is_finite() && spacing_wl > 0.0) {
            return Err(format!("spacing must be positive, got {spacing_wl}"));
        }
        let scanned = brute_force_grating_limit(5, spacing_wl).map_err(|e| e.to_string())?;
        Ok([grating_lobe_limit(spacing_wl), scanned.unwrap_or(90.0)])
    }
}

fn js_err(e: String) -> JsError {
    JsError::new(&e)
}

#[wasm_bindgen(js_name = beamstateMap)]
pub fn beamstate_map(state: &str, freq_ghz: f64, gain_dbi: f64, n: usize) -> Result<Vec<f64>, JsError> {
    api::beamstate_uv_map(state, freq_ghz, gain_dbi, n).map_err(js_err)
}

#[wasm_bindgen(js_name = beamstateReport)]
pub fn beamstate_report(state: &str, freq_ghz: f64, gain_dbi: f64) -> Result<String, JsError> {
    api::beamstate_report(state, freq_ghz, gain_dbi).map_err(js_err)
}

#[wasm_bindgen(js_name = steerCut)]
pub fn steer_cut(n: usize, spacing_wl: f64, dphi_deg: f64, gain_dbi: f64) -> Result<Vec<f64>, JsError> {
    api::steer_cut(n, spacing_wl, dphi_deg, gain_dbi).map_err(js_err)
}

#[wasm_bindgen(js_name = gratingLimits)]
pub fn grating_limits(spacing_wl: f64) -> Result<Vec<f64>, JsError> {
    api::grating_limits(spacing_wl).map(|l| l.to_vec()).map_err(js_err)
}
