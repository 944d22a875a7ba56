//! JSON scenario configuration for pattern runs.
//!
//! ```json
//! {
//!   "frequency_hz": 14.5e9,
//!   "layout": {"type": "planar", "rows": 3, "cols": 3, "spacing_wl": 0.5,
//!              "design_frequency_hz": 14e9},
//!   "element": {"type": "cos_power", "gain_dbi": 8.1},
//!   "excitation": {"type": "beamstate", "state": "D"},
//!   "grid": {"dtheta_deg": 0.5, "dphi_deg": 0.5},
//!   "normalize": true
//! }
//! ```
//!
//! Unknown fields are rejected.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::element::{ElementPattern, DEFAULT_BACK_FLOOR_DB};
use crate::error::{Error, Result};
use crate::excitation::{BeamState, Excitation};
use crate::geometry::ArrayLayout;
use crate::radiation::GridSpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub frequency_hz: f64,
    pub layout: LayoutConfig,
    pub element: ElementConfig,
    pub excitation: ExcitationConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub normalize: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum LayoutConfig {
    Planar {
        rows: usize,
        cols: usize,
        spacing_wl: f64,
        #[serde(default)]
        design_frequency_hz: Option<f64>,
    },
    Linear {
        n: usize,
        spacing_wl: f64,
        #[serde(default)]
        design_frequency_hz: Option<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ElementConfig {
    Isotropic,
    CosPower {
        #[serde(default)]
        gain_dbi: Option<f64>,
        #[serde(default)]
        q: Option<f64>,
        #[serde(default)]
        back_floor_db: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarWeight {
    pub amplitude: f64,
    pub phase_deg: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExcitationConfig {
    Beamstate { state: BeamState },
    Progressive { dphi_deg: f64 },
    Custom { weights: Vec<PolarWeight> },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub dtheta_deg: f64,
    pub dphi_deg: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        let d = GridSpec::default();
        Self { dtheta_deg: d.dtheta_deg, dphi_deg: d.dphi_deg }
    }
}

/// A validated, ready-to-evaluate scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub layout: ArrayLayout,
    pub element: ElementPattern,
    pub excitation: Excitation,
    pub weights: Vec<Complex64>,
    pub grid: GridSpec,
    pub normalize: bool,
}

fn config_err(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Validates every field; all failures surface as [`Error::Config`].
    pub fn build(&self) -> Result<Scenario> {
        self.build_inner().map_err(config_err)
    }

    fn build_inner(&self) -> Result<Scenario> {
        let design = |d: Option<f64>| d.unwrap_or(self.frequency_hz);
        let layout = match self.layout {
            LayoutConfig::Planar { rows, cols, spacing_wl, design_frequency_hz } => {
                ArrayLayout::planar(rows, cols, spacing_wl, design(design_frequency_hz))?
            }
            LayoutConfig::Linear { n, spacing_wl, design_frequency_hz } => {
                ArrayLayout::linear(n, spacing_wl, design(design_frequency_hz))?
            }
        }
        .at_frequency(self.frequency_hz)?;

        let element = match self.element {
            ElementConfig::Isotropic => ElementPattern::Isotropic,
            ElementConfig::CosPower { gain_dbi, q, back_floor_db } => {
                let floor = back_floor_db.unwrap_or(DEFAULT_BACK_FLOOR_DB);
                match (gain_dbi, q) {
                    (Some(g), None) => match ElementPattern::fit_cos_power(g)? {
                        ElementPattern::CosPower { q, .. } => ElementPattern::cos_power(q, floor)?,
                        iso => iso,
                    },
                    (None, Some(q)) => ElementPattern::cos_power(q, floor)?,
                    _ => {
                        return Err(Error::Config(
                            "cos_power element needs exactly one of gain_dbi or q".into(),
                        ))
                    }
                }
            }
        };

        let excitation = match &self.excitation {
            ExcitationConfig::Beamstate { state } => Excitation::Beamstate(*state),
            ExcitationConfig::Progressive { dphi_deg } => Excitation::Progressive { dphi_deg: *dphi_deg },
            ExcitationConfig::Custom { weights } => Excitation::Custom(
                weights
                    .iter()
                    .map(|w| Complex64::from_polar(w.amplitude, w.phase_deg.to_radians()))
                    .collect(),
            ),
        };
        let weights = excitation.weights(&layout)?;
        if weights.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
            return Err(Error::Config("excitation weights must be finite".into()));
        }
        let grid = GridSpec::new(self.grid.dtheta_deg, self.grid.dphi_deg)?;
        Ok(Scenario { layout, element, excitation, weights, grid, normalize: self.normalize })
    }
}
