//! Parametric element patterns.
//!
//! The physical end-fire element is reduced to an axisymmetric `cos^q θ`
//! pencil beam along the array normal, with a constant power floor in the
//! back hemisphere. `q` is fitted to a peak directivity.

use serde::Serialize;

use crate::error::{domain, Result};

pub const DEFAULT_BACK_FLOOR_DB: f64 = -60.0;

/// Directivity of a lossless radiator confined evenly to one hemisphere.
pub const HEMISPHERE_FLOOR_DBI: f64 = 3.01;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ElementPattern {
    Isotropic,
    /// `g(θ) = 2(q+1) cos^q θ` forward, `2(q+1) · 10^(floor/10)` behind.
    CosPower { q: f64, back_floor_db: f64 },
}

impl ElementPattern {
    pub fn cos_power(q: f64, back_floor_db: f64) -> Result<Self> {
        if !(q >= 0.0) || !q.is_finite() {
            return domain(format!("cos-power exponent must be finite and >= 0, got {q}"));
        }
        if !(back_floor_db <= -40.0) {
            return domain(format!("back floor must be <= -40 dB, got {back_floor_db}"));
        }
        Ok(Self::CosPower { q, back_floor_db })
    }

    /// Cos-power element whose forward-hemisphere directivity is
    /// `target_gain_dbi`, using `2(q+1) = 10^(G/10)`.
    ///
    /// Targets between 3.01 dBi and the exact hemispheric value
    /// `10·log10(2)` give `q = 0`.
    pub fn fit_cos_power(target_gain_dbi: f64) -> Result<Self> {
        if !(target_gain_dbi >= HEMISPHERE_FLOOR_DBI) || !target_gain_dbi.is_finite() {
            return domain(format!(
                "target gain {target_gain_dbi} dBi is below the hemispheric floor of {HEMISPHERE_FLOOR_DBI} dBi"
            ));
        }
        let q = (10f64.powf(target_gain_dbi / 10.0) / 2.0 - 1.0).max(0.0);
        Self::cos_power(q, DEFAULT_BACK_FLOOR_DB)
    }

    /// Linear power gain at polar angle `theta_deg` (φ is ignored).
    pub fn gain(&self, theta_deg: f64, _phi_deg: f64) -> Result<f64> {
        if !(0.0..=180.0).contains(&theta_deg) {
            return domain(format!("theta must be within [0, 180] degrees, got {theta_deg}"));
        }
        Ok(self.gain_at_cos(cos_deg(theta_deg)))
    }

    /// Gain as a function of `cos θ`; the hot path used by the pattern
    /// evaluators.
    pub(crate) fn gain_at_cos(&self, cos_theta: f64) -> f64 {
        match *self {
            Self::Isotropic => 1.0,
            Self::CosPower { q, back_floor_db } => {
                let peak = 2.0 * (q + 1.0);
                if cos_theta >= 0.0 {
                    if q == 0.0 {
                        peak
                    } else {
                        peak * cos_theta.powf(q)
                    }
                } else {
                    peak * 10f64.powf(back_floor_db / 10.0)
                }
            }
        }
    }

    /// Boresight gain (linear).
    pub fn peak_gain(&self) -> f64 {
        self.gain_at_cos(1.0)
    }

    pub fn describe(&self) -> String {
        match *self {
            Self::Isotropic => "isotropic".to_string(),
            Self::CosPower { q, back_floor_db } => {
                format!("cos^{q:.4} (back floor {back_floor_db} dB)")
            }
        }
    }
}

/// `cos` of an angle in degrees, exact at 90°.
pub(crate) fn cos_deg(deg: f64) -> f64 {
    if deg == 90.0 {
        0.0
    } else {
        deg.to_radians().cos()
    }
}
