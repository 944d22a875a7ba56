//! Array lattices and frequency/wavelength conversions.
//!
//! Layouts are centered on the origin and lie in the `z = 0` plane. For a
//! planar layout, element index `r * cols + c` sits at
//! `x = (c - (cols - 1) / 2) * pitch`, `y = (r - (rows - 1) / 2) * pitch`,
//! i.e. the row index grows along `+y` and the column index along `+x`.

use serde::Serialize;

use crate::error::{domain, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Free-space wavelength in meters.
pub fn wavelength(frequency_hz: f64) -> Result<f64> {
    if !(frequency_hz > 0.0) || !frequency_hz.is_finite() {
        return domain(format!("frequency must be positive, got {frequency_hz}"));
    }
    Ok(SPEED_OF_LIGHT / frequency_hz)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LayoutShape {
    Linear(usize),
    Planar { rows: usize, cols: usize },
}

/// Element positions (meters) plus the frequency the array is evaluated at.
#[derive(Clone, Debug, PartialEq)]
pub struct ArrayLayout {
    positions: Vec<[f64; 3]>,
    frequency_hz: f64,
    /// Pitch in wavelengths at the design frequency.
    spacing_wl: f64,
    design_frequency_hz: f64,
    pitch_m: f64,
    shape: LayoutShape,
}

impl ArrayLayout {
    /// A `rows` × `cols` rectangular lattice with uniform pitch
    /// `spacing_wl * wavelength(frequency_hz)` in both directions.
    pub fn planar(rows: usize, cols: usize, spacing_wl: f64, frequency_hz: f64) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return domain(format!("planar layout needs rows, cols >= 1, got {rows}x{cols}"));
        }
        Self::lattice(rows, cols, spacing_wl, frequency_hz, LayoutShape::Planar { rows, cols })
    }

    /// `n` elements along the x-axis.
    pub fn linear(n: usize, spacing_wl: f64, frequency_hz: f64) -> Result<Self> {
        if n == 0 {
            return domain("linear layout needs at least one element");
        }
        Self::lattice(1, n, spacing_wl, frequency_hz, LayoutShape::Linear(n))
    }

    fn lattice(
        rows: usize,
        cols: usize,
        spacing_wl: f64,
        frequency_hz: f64,
        shape: LayoutShape,
    ) -> Result<Self> {
        if !(spacing_wl > 0.0) || !spacing_wl.is_finite() {
            return domain(format!("spacing must be positive, got {spacing_wl} wavelengths"));
        }
        let pitch_m = spacing_wl * wavelength(frequency_hz)?;
        let x0 = (cols as f64 - 1.0) / 2.0;
        let y0 = (rows as f64 - 1.0) / 2.0;
        let positions = (0..rows)
            .flat_map(|r| {
                (0..cols).map(move |c| [(c as f64 - x0) * pitch_m, (r as f64 - y0) * pitch_m, 0.0])
            })
            .collect();
        Ok(Self {
            positions,
            frequency_hz,
            spacing_wl,
            design_frequency_hz: frequency_hz,
            pitch_m,
            shape,
        })
    }

    /// The same physical array evaluated at another frequency. Positions in
    /// meters are unchanged, so the electrical spacing scales with frequency.
    pub fn at_frequency(&self, frequency_hz: f64) -> Result<Self> {
        wavelength(frequency_hz)?;
        Ok(Self { frequency_hz, ..self.clone() })
    }

    pub fn positions(&self) -> &[[f64; 3]] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn frequency_hz(&self) -> f64 {
        self.frequency_hz
    }

    pub fn design_frequency_hz(&self) -> f64 {
        self.design_frequency_hz
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.frequency_hz
    }

    /// Free-space wavenumber 2π/λ at the evaluation frequency.
    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength()
    }

    /// Design spacing in wavelengths (at the design frequency).
    pub fn spacing_wl(&self) -> f64 {
        self.spacing_wl
    }

    /// Pitch in wavelengths at the evaluation frequency.
    pub fn electrical_spacing(&self) -> f64 {
        self.pitch_m / self.wavelength()
    }

    pub fn pitch_m(&self) -> f64 {
        self.pitch_m
    }

    pub fn shape(&self) -> LayoutShape {
        self.shape
    }

    pub fn rows(&self) -> usize {
        match self.shape {
            LayoutShape::Linear(_) => 1,
            LayoutShape::Planar { rows, .. } => rows,
        }
    }

    pub fn cols(&self) -> usize {
        match self.shape {
            LayoutShape::Linear(n) => n,
            LayoutShape::Planar { cols, .. } => cols,
        }
    }

    /// Column index of element `i` (its position along x).
    pub fn column_of(&self, i: usize) -> usize {
        i % self.cols()
    }

    pub fn describe(&self) -> String {
        let lattice = match self.shape {
            LayoutShape::Linear(n) => format!("linear {n}"),
            LayoutShape::Planar { rows, cols } => format!("planar {rows}x{cols}"),
        };
        format!(
            "{lattice}, spacing {} wl @ {} GHz, evaluated @ {} GHz",
            self.spacing_wl,
            self.design_frequency_hz / 1e9,
            self.frequency_hz / 1e9
        )
    }
}
