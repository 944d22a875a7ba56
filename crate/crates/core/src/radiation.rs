//! Array factor and total far-field patterns.
//!
//! The field in direction `(θ, φ)` is `sqrt(g(θ)) · AF(θ, φ)` with
//!
//! ```text
//! AF = Σₙ wₙ · exp(-j k (xₙ sinθ cosφ + yₙ sinθ sinφ))
//! ```
//!
//! summed in layout order for every sample, so the result does not depend on
//! how samples are split across threads.

use num_complex::Complex64;
use serde::Serialize;

use crate::element::ElementPattern;
use crate::error::{domain, Result};
use crate::geometry::ArrayLayout;

pub const MAX_GRID_STEP_DEG: f64 = 2.0;

/// `(sin, cos)` of an angle in degrees, exact at multiples of 90°.
pub(crate) fn sin_cos_deg(deg: f64) -> (f64, f64) {
    let r = deg.rem_euclid(360.0);
    if r == 0.0 {
        (0.0, 1.0)
    } else if r == 90.0 {
        (1.0, 0.0)
    } else if r == 180.0 {
        (0.0, -1.0)
    } else if r == 270.0 {
        (-1.0, 0.0)
    } else {
        deg.to_radians().sin_cos()
    }
}

fn check_angles(theta_deg: f64, phi_deg: f64) -> Result<()> {
    if !(0.0..=180.0).contains(&theta_deg) {
        return domain(format!("theta must be within [0, 180] degrees, got {theta_deg}"));
    }
    if !phi_deg.is_finite() {
        return domain(format!("phi must be finite, got {phi_deg}"));
    }
    Ok(())
}

fn check_weights(layout: &ArrayLayout, weights: &[Complex64]) -> Result<()> {
    if weights.len() != layout.len() {
        return domain(format!(
            "{} weights for a {}-element layout",
            weights.len(),
            layout.len()
        ));
    }
    Ok(())
}

/// Array factor evaluator with the wavenumber folded into the positions.
struct Summer<'a> {
    kx: Vec<f64>,
    ky: Vec<f64>,
    weights: &'a [Complex64],
}

impl<'a> Summer<'a> {
    fn new(layout: &ArrayLayout, weights: &'a [Complex64]) -> Self {
        let k = layout.wavenumber();
        Self {
            kx: layout.positions().iter().map(|p| k * p[0]).collect(),
            ky: layout.positions().iter().map(|p| k * p[1]).collect(),
            weights,
        }
    }

    /// `u`, `v` are the direction cosines along x and y.
    fn at(&self, u: f64, v: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for ((&kx, &ky), &w) in self.kx.iter().zip(&self.ky).zip(self.weights) {
            let (s, c) = (kx * u + ky * v).sin_cos();
            acc += w * Complex64::new(c, -s);
        }
        acc
    }
}

pub fn array_factor(
    layout: &ArrayLayout,
    weights: &[Complex64],
    theta_deg: f64,
    phi_deg: f64,
) -> Result<Complex64> {
    check_weights(layout, weights)?;
    check_angles(theta_deg, phi_deg)?;
    let (st, _) = sin_cos_deg(theta_deg);
    let (sp, cp) = sin_cos_deg(phi_deg);
    Ok(Summer::new(layout, weights).at(st * cp, st * sp))
}

/// Total complex field `sqrt(g(θ)) · AF(θ, φ)` in one direction.
pub fn field(
    layout: &ArrayLayout,
    weights: &[Complex64],
    element: &ElementPattern,
    theta_deg: f64,
    phi_deg: f64,
) -> Result<Complex64> {
    let af = array_factor(layout, weights, theta_deg, phi_deg)?;
    Ok(af * element.gain_at_cos(sin_cos_deg(theta_deg).1).sqrt())
}

/// `|sin(nΨ/2) / sin(Ψ/2)|` with `Ψ = 2π·d·sinθ − Δφ`, the closed-form
/// magnitude of a uniform linear array in the `φ = 0` plane. `theta_deg` is
/// signed (negative angles lie toward `-x`).
pub fn uniform_linear_af_closed_form(n: usize, spacing_wl: f64, dphi_deg: f64, theta_deg: f64) -> f64 {
    let psi = 2.0 * std::f64::consts::PI * spacing_wl * theta_deg.to_radians().sin()
        - dphi_deg.to_radians();
    let half = psi / 2.0;
    let den = half.sin();
    if den.abs() < 1e-6 {
        // removable singularity at Ψ = 2πm; series in the offset from mπ
        let eps = half - (half / std::f64::consts::PI).round() * std::f64::consts::PI;
        let n2 = (n * n) as f64;
        return n as f64 * (1.0 - (n2 - 1.0) * eps * eps / 6.0);
    }
    ((n as f64 * half).sin() / den).abs()
}

/// Angular sampling of the sphere (or of a polar cap `θ ≤ theta_max_deg`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub dtheta_deg: f64,
    pub dphi_deg: f64,
    pub theta_max_deg: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { dtheta_deg: 0.5, dphi_deg: 0.5, theta_max_deg: 180.0 }
    }
}

impl GridSpec {
    pub fn new(dtheta_deg: f64, dphi_deg: f64) -> Result<Self> {
        Self::cap(dtheta_deg, dphi_deg, 180.0)
    }

    /// Grid covering `0 ≤ θ ≤ theta_max_deg` only.
    pub fn cap(dtheta_deg: f64, dphi_deg: f64, theta_max_deg: f64) -> Result<Self> {
        for (name, step) in [("theta", dtheta_deg), ("phi", dphi_deg)] {
            if !(step > 0.0) || step > MAX_GRID_STEP_DEG {
                return domain(format!(
                    "{name} step must be within (0, {MAX_GRID_STEP_DEG}] degrees, got {step}"
                ));
            }
        }
        if !(theta_max_deg > 0.0 && theta_max_deg <= 180.0) {
            return domain(format!("theta_max must be within (0, 180], got {theta_max_deg}"));
        }
        divisions(theta_max_deg, dtheta_deg, "theta")?;
        divisions(360.0, dphi_deg, "phi")?;
        Ok(Self { dtheta_deg, dphi_deg, theta_max_deg })
    }

    pub fn theta_samples(&self) -> Vec<f64> {
        let n = divisions(self.theta_max_deg, self.dtheta_deg, "theta").unwrap_or(0);
        (0..=n).map(|i| self.theta_max_deg * i as f64 / n as f64).collect()
    }

    pub fn phi_samples(&self) -> Vec<f64> {
        let n = divisions(360.0, self.dphi_deg, "phi").unwrap_or(0);
        (0..n).map(|i| 360.0 * i as f64 / n as f64).collect()
    }
}

fn divisions(span: f64, step: f64, name: &str) -> Result<usize> {
    let n = span / step;
    let r = n.round();
    if (n - r).abs() > 1e-9 * n.max(1.0) || r < 1.0 {
        return domain(format!("{name} step {step} does not divide {span} degrees"));
    }
    Ok(r as usize)
}

/// Sampled complex far field, θ-major: `values[i * phis.len() + j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FarFieldGrid {
    thetas: Vec<f64>,
    phis: Vec<f64>,
    values: Vec<Complex64>,
    pub frequency_hz: f64,
    pub layout: String,
    pub excitation: String,
    pub element: String,
}

impl FarFieldGrid {
    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.phis.len() + j]
    }

    pub fn power(&self, i: usize, j: usize) -> f64 {
        self.value(i, j).norm_sqr()
    }

    pub fn dtheta_deg(&self) -> f64 {
        self.thetas.get(1).map_or(0.0, |t| t - self.thetas[0])
    }

    pub fn dphi_deg(&self) -> f64 {
        360.0 / self.phis.len() as f64
    }

    pub fn is_full_sphere(&self) -> bool {
        self.thetas.first() == Some(&0.0) && self.thetas.last() == Some(&180.0)
    }

    pub fn max_power(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max)
    }

    /// Index of φ sample nearest `phi_deg` (mod 360), if it lies within
    /// a small tolerance of the grid.
    pub fn phi_index(&self, phi_deg: f64) -> Option<usize> {
        let step = self.dphi_deg();
        let x = phi_deg.rem_euclid(360.0) / step;
        let j = x.round();
        ((x - j).abs() < 1e-6).then_some(j as usize % self.phis.len())
    }

    /// New grid with every value mapped through `f`.
    pub fn map_values(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { values: self.values.iter().map(|&v| f(v)).collect(), ..self.clone() }
    }

    /// Every sample and its power are finite.
    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.norm_sqr().is_finite())
    }
}

pub fn total_pattern(
    layout: &ArrayLayout,
    weights: &[Complex64],
    element: &ElementPattern,
    grid: &GridSpec,
) -> Result<FarFieldGrid> {
    check_weights(layout, weights)?;
    // re-validate in case the spec was built by hand
    let grid = GridSpec::cap(grid.dtheta_deg, grid.dphi_deg, grid.theta_max_deg)?;
    let thetas = grid.theta_samples();
    let phis = grid.phi_samples();
    let summer = Summer::new(layout, weights);
    let phi_trig: Vec<(f64, f64)> = phis.iter().map(|&p| sin_cos_deg(p)).collect();

    let row = |theta: f64, out: &mut [Complex64]| {
        let (st, ct) = sin_cos_deg(theta);
        let amp = element.gain_at_cos(ct).sqrt();
        for (o, &(sp, cp)) in out.iter_mut().zip(&phi_trig) {
            *o = summer.at(st * cp, st * sp) * amp;
        }
    };

    let mut values = vec![Complex64::new(0.0, 0.0); thetas.len() * phis.len()];
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        values
            .par_chunks_mut(phis.len())
            .zip(thetas.par_iter())
            .for_each(|(out, &t)| row(t, out));
    }
    #[cfg(not(feature = "parallel"))]
    for (out, &t) in values.chunks_mut(phis.len()).zip(&thetas) {
        row(t, out);
    }

    Ok(FarFieldGrid {
        thetas,
        phis,
        values,
        frequency_hz: layout.frequency_hz(),
        layout: layout.describe(),
        excitation: String::new(),
        element: element.describe(),
    })
}

/// Front-half principal cut through boresight in the plane `phi_deg`.
///
/// Angles are signed: `a ≥ 0` is the direction `(θ = a, φ)`, `a < 0` is
/// `(θ = -a, φ + 180°)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PatternCut {
    pub phi_deg: f64,
    pub angles_deg: Vec<f64>,
    pub values: Vec<Complex64>,
    /// `Σ|wₙ|²`, the input power under ideal (uncoupled) feeding.
    pub input_power: f64,
}

impl PatternCut {
    /// Samples `[-90°, 90°]` with the given step.
    pub fn evaluate(
        layout: &ArrayLayout,
        weights: &[Complex64],
        element: &ElementPattern,
        phi_deg: f64,
        step_deg: f64,
    ) -> Result<Self> {
        check_weights(layout, weights)?;
        let n = divisions(90.0, step_deg, "cut")?;
        let summer = Summer::new(layout, weights);
        let (sp, cp) = sin_cos_deg(phi_deg);
        let angles_deg: Vec<f64> = (0..=2 * n).map(|i| (i as f64 - n as f64) * step_deg).collect();
        let values = angles_deg
            .iter()
            .map(|&a| {
                let (sa, ca) = sin_cos_deg(a);
                summer.at(sa * cp, sa * sp) * element.gain_at_cos(ca).sqrt()
            })
            .collect();
        let input_power = weights.iter().map(|w| w.norm_sqr()).sum();
        Ok(Self { phi_deg, angles_deg, values, input_power })
    }

    pub fn power(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Realized gain under pattern multiplication with uncoupled,
    /// lossless feeding: `g(θ)·|AF|² / Σ|wₙ|²`.
    pub fn gain(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr() / self.input_power).collect()
    }

    /// Index and angle of the strongest sample. Samples within `1e-9` of
    /// the maximum (relative) tie, and ties go to the sample closest to
    /// boresight, so equal grating lobes resolve toward the steered beam.
    pub fn peak(&self) -> (usize, f64) {
        let p = self.power();
        let pmax = p.iter().copied().fold(0.0, f64::max);
        let tol = 1e-9 * pmax;
        let mut best = None;
        for (i, &v) in p.iter().enumerate() {
            if v >= pmax - tol && best.is_none_or(|b: usize| self.angles_deg[i].abs() < self.angles_deg[b].abs()) {
                best = Some(i);
            }
        }
        let best = best.unwrap_or(0);
        (best, self.angles_deg[best])
    }
}

/// Realized gain `g(θ)|AF|²/Σ|w|²` in one direction of the plane `phi_deg`,
/// `angle_deg` signed as in [`PatternCut`].
pub fn cut_gain(
    layout: &ArrayLayout,
    weights: &[Complex64],
    element: &ElementPattern,
    phi_deg: f64,
    angle_deg: f64,
) -> Result<f64> {
    check_weights(layout, weights)?;
    let (sp, cp) = sin_cos_deg(phi_deg);
    let (sa, ca) = sin_cos_deg(angle_deg);
    let af = Summer::new(layout, weights).at(sa * cp, sa * sp);
    let input: f64 = weights.iter().map(|w| w.norm_sqr()).sum();
    Ok(element.gain_at_cos(ca) * af.norm_sqr() / input)
}
