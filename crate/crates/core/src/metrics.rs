//! Figures of merit extracted from sampled patterns.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::element::ElementPattern;
use crate::error::{domain, Error, Result};
use crate::excitation::{steering_for_angle, Excitation};
use crate::geometry::ArrayLayout;
use crate::radiation::{cut_gain, sin_cos_deg, FarFieldGrid, PatternCut};

/// Upper bound reported for front-to-back ratios with an empty back lobe.
pub const MAX_FRONT_TO_BACK_DB: f64 = 300.0;

/// Level of a secondary lobe (relative to the main beam) that counts as a
/// grating lobe.
pub const GRATING_LEVEL_DB: f64 = -3.0;

const PEAK_TIE_TOL: f64 = 1e-9;

/// Direction-cosine tolerance when matching a peak to a lattice replica of
/// the main beam.
const REPLICA_TOL: f64 = 0.1;

fn require_full_sphere(grid: &FarFieldGrid) -> Result<()> {
    if !grid.is_full_sphere() || grid.thetas().len() < 3 {
        return domain("operation needs a grid covering the full sphere (0 <= theta <= 180)");
    }
    Ok(())
}

/// `∫∫ U dΩ`: trapezoidal in θ with `sin θ` weighting, periodic trapezoidal
/// in φ.
pub fn radiated_power(grid: &FarFieldGrid) -> Result<f64> {
    require_full_sphere(grid)?;
    let nt = grid.thetas().len();
    let dtheta = grid.dtheta_deg().to_radians();
    let dphi = grid.dphi_deg().to_radians();
    let mut total = 0.0;
    for (i, &t) in grid.thetas().iter().enumerate() {
        let w = if i == 0 || i == nt - 1 { 0.5 } else { 1.0 };
        let ring: f64 = (0..grid.phis().len()).map(|j| grid.power(i, j)).sum();
        total += w * sin_cos_deg(t).0 * ring;
    }
    Ok(total * dtheta * dphi)
}

/// Peak directivity `10·log10(4π U_max / P_rad)` in dBi.
pub fn directivity(grid: &FarFieldGrid) -> Result<f64> {
    let prad = radiated_power(grid)?;
    let umax = grid.max_power();
    if !(prad > 0.0) || !prad.is_finite() {
        return Err(Error::Numeric(format!("radiated power is {prad}")));
    }
    Ok(10.0 * (4.0 * PI * umax / prad).log10())
}

/// `∫∫ U/P_rad dΩ` with the same quadrature; should be 1.
pub fn normalized_power_integral(grid: &FarFieldGrid) -> Result<f64> {
    let prad = radiated_power(grid)?;
    let scale = 1.0 / prad.sqrt();
    radiated_power(&grid.map_values(|v| v * scale))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub theta_deg: f64,
    pub phi_deg: f64,
    /// Relative to the global maximum of the pattern.
    pub level_db: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeakParams {
    pub threshold_db: f64,
    pub min_separation_deg: f64,
}

impl Default for PeakParams {
    fn default() -> Self {
        Self { threshold_db: -10.0, min_separation_deg: 10.0 }
    }
}

/// Great-circle distance between two directions, degrees.
pub fn angular_distance_deg(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (st1, ct1) = sin_cos_deg(a.0);
    let (st2, ct2) = sin_cos_deg(b.0);
    let cdp = sin_cos_deg(a.1 - b.1).1;
    (ct1 * ct2 + st1 * st2 * cdp).clamp(-1.0, 1.0).acos().to_degrees()
}

/// Local maxima over the 8-neighbourhood of the grid, within
/// `threshold_db` of the global maximum, merged greedily (stronger first)
/// when closer than `min_separation_deg`. Each pole is a single point.
///
/// Powers closer than `1e-9 · U_max` compare equal, and a sample with no
/// strictly lower neighbour (a flat plateau) is not a peak, so a constant
/// pattern has none.
pub fn find_peaks(grid: &FarFieldGrid, params: &PeakParams) -> Result<Vec<Peak>> {
    if !(params.threshold_db < 0.0) {
        return domain(format!("peak threshold must be negative, got {}", params.threshold_db));
    }
    if !(params.min_separation_deg > 0.0) {
        return domain(format!(
            "minimum peak separation must be positive, got {}",
            params.min_separation_deg
        ));
    }
    let umax = grid.max_power();
    if umax <= 0.0 {
        return Ok(Vec::new());
    }
    let floor = umax * 10f64.powf(params.threshold_db / 10.0);
    let tol = PEAK_TIE_TOL * umax;
    let nt = grid.thetas().len();
    let np = grid.phis().len();
    let full = grid.is_full_sphere();
    let is_pole = |i: usize| i == 0 || (full && i == nt - 1);

    let mut candidates: Vec<(usize, usize, f64)> = Vec::new();
    for i in 0..nt {
        if is_pole(i) {
            let u = grid.power(i, 0);
            let ring = if i == 0 { 1 } else { nt - 2 };
            let ring_max = (0..np).map(|j| grid.power(ring, j)).fold(0.0, f64::max);
            let ring_min = (0..np).map(|j| grid.power(ring, j)).fold(f64::INFINITY, f64::min);
            if u >= floor && ring_max <= u + tol && ring_min < u - tol {
                candidates.push((i, 0, u));
            }
            continue;
        }
        for j in 0..np {
            let u = grid.power(i, j);
            if u < floor {
                continue;
            }
            let mut is_max = true;
            let mut has_lower = false;
            'nb: for di in [-1i64, 0, 1] {
                let ii = i as i64 + di;
                if ii < 0 || ii >= nt as i64 {
                    continue;
                }
                let ii = ii as usize;
                for dj in [-1i64, 0, 1] {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let jj = if is_pole(ii) { 0 } else { (j as i64 + dj).rem_euclid(np as i64) as usize };
                    let v = grid.power(ii, jj);
                    if v > u + tol {
                        is_max = false;
                        break 'nb;
                    }
                    has_lower |= v < u - tol;
                }
            }
            if is_max && has_lower {
                candidates.push((i, j, u));
            }
        }
    }

    let level = |u: f64| 10.0 * (u / umax).log10();
    // ties (symmetric beams) ordered by position so the result is stable
    candidates.sort_by_key(|&(i, j, u)| (-(level(u) * 1e9).round() as i64, i, j));

    let mut peaks: Vec<Peak> = Vec::new();
    for (i, j, u) in candidates {
        let dir = (grid.thetas()[i], grid.phis()[j]);
        if peaks
            .iter()
            .any(|p| angular_distance_deg((p.theta_deg, p.phi_deg), dir) < params.min_separation_deg)
        {
            continue;
        }
        peaks.push(Peak { theta_deg: dir.0, phi_deg: dir.1, level_db: level(u) });
    }
    Ok(peaks)
}

/// Great circle through boresight in the plane `phi_cut_deg`, as
/// `(step count, power)` samples walking from `-θ_max` to `+θ_max`.
fn great_circle(grid: &FarFieldGrid, phi_cut_deg: f64) -> Result<(Vec<f64>, Vec<f64>, bool)> {
    let (Some(j1), Some(j2)) = (grid.phi_index(phi_cut_deg), grid.phi_index(phi_cut_deg + 180.0))
    else {
        return domain(format!("cut plane phi = {phi_cut_deg} is not on the grid"));
    };
    let nt = grid.thetas().len();
    let full = grid.is_full_sphere();
    let mut angles = Vec::with_capacity(2 * nt);
    let mut power = Vec::with_capacity(2 * nt);
    // the θ = 180° pole is shared by both halves on a full sphere
    let start = if full { nt - 2 } else { nt - 1 };
    for i in (1..=start).rev() {
        angles.push(-grid.thetas()[i]);
        power.push(grid.power(i, j2));
    }
    for i in 0..nt {
        angles.push(grid.thetas()[i]);
        power.push(grid.power(i, j1));
    }
    Ok((angles, power, full))
}

/// Width between the two −3 dB crossings around the strongest sample,
/// linearly interpolated in power. `closed` marks a periodic sequence.
fn half_power_width(angles: &[f64], power: &[f64], step_deg: f64, closed: bool) -> Result<f64> {
    let n = power.len();
    let mut peak = 0;
    for i in 1..n {
        if power[i] > power[peak] || (power[i] == power[peak] && angles[i].abs() < angles[peak].abs()) {
            peak = i;
        }
    }
    let pmax = power[peak];
    let pmin = power.iter().copied().fold(f64::INFINITY, f64::min);
    let half = pmax / 2.0;
    if !(pmax > 0.0) || pmin >= half {
        return Err(Error::Measurement("pattern cut has no -3 dB point".into()));
    }
    let walk = |dir: i64| -> Result<f64> {
        let mut prev = pmax;
        for s in 1..n {
            let idx = peak as i64 + dir * s as i64;
            let idx = if closed {
                idx.rem_euclid(n as i64) as usize
            } else if idx < 0 || idx >= n as i64 {
                break;
            } else {
                idx as usize
            };
            let cur = power[idx];
            if cur < half {
                return Ok((s as f64 - 1.0 + (prev - half) / (prev - cur)) * step_deg);
            }
            prev = cur;
        }
        Err(Error::Measurement("no -3 dB crossing on one side of the beam".into()))
    };
    Ok(walk(1)? + walk(-1)?)
}

const NULL_PLANE_RATIO: f64 = 1e-12;

/// Half-power beamwidth in the cut plane `phi_cut_deg`.
pub fn hpbw(grid: &FarFieldGrid, phi_cut_deg: f64) -> Result<f64> {
    let (angles, power, closed) = great_circle(grid, phi_cut_deg)?;
    // a null plane holds only rounding noise
    let cut_max = power.iter().copied().fold(0.0, f64::max);
    if !(cut_max > NULL_PLANE_RATIO * grid.max_power()) {
        return Err(Error::Measurement(format!("cut φ = {phi_cut_deg}° lies in a null plane")));
    }
    half_power_width(&angles, &power, grid.dtheta_deg(), closed)
}

pub fn hpbw_cut(cut: &PatternCut) -> Result<f64> {
    let step = cut.angles_deg[1] - cut.angles_deg[0];
    half_power_width(&cut.angles_deg, &cut.power(), step, false)
}

/// `10·log10(max U forward / max U backward)`, split at θ = 90°.
pub fn front_to_back(grid: &FarFieldGrid) -> Result<f64> {
    require_full_sphere(grid)?;
    let (mut fwd, mut back) = (0.0f64, 0.0f64);
    for (i, &t) in grid.thetas().iter().enumerate() {
        let m = (0..grid.phis().len()).map(|j| grid.power(i, j)).fold(0.0, f64::max);
        if t < 90.0 {
            fwd = fwd.max(m);
        } else if t > 90.0 {
            back = back.max(m);
        }
    }
    if back <= 0.0 {
        return Ok(MAX_FRONT_TO_BACK_DB);
    }
    Ok((10.0 * (fwd / back).log10()).min(MAX_FRONT_TO_BACK_DB))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointingLoss {
    pub theta0_deg: f64,
    /// Gain toward the commanded direction relative to boresight gain.
    pub loss_db: f64,
    /// Realized peak gain relative to the boresight peak.
    pub realized_loss_db: f64,
    /// Where the realized peak actually lands.
    pub realized_peak_deg: f64,
}

const REALIZED_STEP_DEG: f64 = 0.01;

/// Steers the layout along x to each `θ₀` with a progressive phase and
/// reports the gain change relative to boresight.
pub fn pointing_loss_curve(
    layout: &ArrayLayout,
    element: &ElementPattern,
    theta0_list: &[f64],
) -> Result<Vec<PointingLoss>> {
    let spacing = layout.electrical_spacing();
    let weights_for = |theta0: f64| -> Result<Vec<Complex64>> {
        let dphi_deg = steering_for_angle(theta0, spacing)?;
        Excitation::Progressive { dphi_deg }.weights(layout)
    };
    let w0 = weights_for(0.0)?;
    let ref_gain = cut_gain(layout, &w0, element, 0.0, 0.0)?;
    let ref_cut = PatternCut::evaluate(layout, &w0, element, 0.0, REALIZED_STEP_DEG)?;
    let ref_peak = ref_cut.gain()[ref_cut.peak().0];

    theta0_list
        .iter()
        .map(|&theta0| {
            let w = weights_for(theta0)?;
            let g = cut_gain(layout, &w, element, 0.0, theta0)?;
            let cut = PatternCut::evaluate(layout, &w, element, 0.0, REALIZED_STEP_DEG)?;
            let (idx, realized_peak_deg) = cut.peak();
            Ok(PointingLoss {
                theta0_deg: theta0,
                loss_db: 10.0 * (g / ref_gain).log10(),
                realized_loss_db: 10.0 * (cut.gain()[idx] / ref_peak).log10(),
                realized_peak_deg,
            })
        })
        .collect()
}

/// Largest steer angle (degrees) before a grating lobe enters visible space
/// for a row with pitch `spacing_wl`: `asin(1/d − 1)`.
pub fn grating_lobe_limit(spacing_wl: f64) -> f64 {
    if spacing_wl >= 1.0 {
        return 0.0;
    }
    let x = 1.0 / spacing_wl - 1.0;
    if x >= 1.0 {
        90.0
    } else {
        x.asin().to_degrees()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GratingVerdict {
    Clean,
    Grating { angle_deg: f64 },
}

impl GratingVerdict {
    pub fn is_clean(&self) -> bool {
        matches!(self, Self::Clean)
    }
}

#[derive(Serialize, Deserialize)]
struct GratingJson {
    verdict: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    angle_deg: Option<f64>,
}

impl Serialize for GratingVerdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let json = match *self {
            Self::Clean => GratingJson { verdict: "clean".into(), angle_deg: None },
            Self::Grating { angle_deg } => {
                GratingJson { verdict: "grating".into(), angle_deg: Some(angle_deg) }
            }
        };
        json.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GratingVerdict {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = GratingJson::deserialize(d)?;
        match (json.verdict.as_str(), json.angle_deg) {
            ("clean", _) => Ok(Self::Clean),
            ("grating", Some(angle_deg)) => Ok(Self::Grating { angle_deg }),
            _ => Err(serde::de::Error::custom("invalid grating verdict")),
        }
    }
}

/// Any interior local maximum of the cut, other than the main beam, within
/// 3 dB of it. Samples at ±90° are excluded: a lobe whose peak lies beyond
/// visible space has not entered it yet.
pub fn grating_scan_cut(cut: &PatternCut) -> GratingVerdict {
    let p = cut.power();
    let (main, _) = cut.peak();
    let floor = p[main] * 10f64.powf(GRATING_LEVEL_DB / 10.0);
    (1..p.len() - 1)
        .filter(|&i| i != main && p[i] >= floor && p[i] > p[i - 1] && p[i] >= p[i + 1])
        .max_by(|&a, &b| p[a].total_cmp(&p[b]))
        .map_or(GratingVerdict::Clean, |i| GratingVerdict::Grating { angle_deg: cut.angles_deg[i] })
}

/// First steer angle (degrees, isotropic elements) at which
/// [`grating_scan_cut`] flags an `n`-element row of pitch `spacing_wl`, or
/// `None` if the row stays clean up to 90°.
pub fn brute_force_grating_limit(n: usize, spacing_wl: f64) -> Result<Option<f64>> {
    let layout = ArrayLayout::linear(n, spacing_wl, 14e9)?;
    let flagged = |theta0: f64| -> Result<bool> {
        let dphi_deg = steering_for_angle(theta0, spacing_wl)?;
        let w = Excitation::Progressive { dphi_deg }.weights(&layout)?;
        let cut = PatternCut::evaluate(&layout, &w, &ElementPattern::Isotropic, 0.0, 0.05)?;
        Ok(!grating_scan_cut(&cut).is_clean())
    };
    // coarse pass, then refine inside the bracketing degree
    let mut coarse = None;
    for t in 0..90 {
        if flagged(t as f64)? {
            coarse = Some(t);
            break;
        }
    }
    let Some(hi) = coarse else {
        return Ok(None);
    };
    if hi == 0 {
        return Ok(Some(0.0));
    }
    let lo = (hi - 1) as f64;
    for k in 1..=20 {
        let t = lo + k as f64 * 0.05;
        if flagged(t)? {
            return Ok(Some(t));
        }
    }
    Ok(Some(hi as f64))
}

/// Grating test on a full grid: a peak within 3 dB of the main beam whose
/// direction-cosine offset from it is a non-zero multiple of the lattice
/// period `λ/pitch` (per axis with more than one element).
pub fn grating_scan_grid(grid: &FarFieldGrid, layout: &ArrayLayout) -> Result<GratingVerdict> {
    let params = PeakParams { threshold_db: GRATING_LEVEL_DB, ..PeakParams::default() };
    let peaks = find_peaks(grid, &params)?;
    let Some(main) = peaks.first() else {
        return Ok(GratingVerdict::Clean);
    };
    let period = |count: usize| (count > 1).then(|| layout.wavelength() / layout.pitch_m());
    let (px, py) = (period(layout.cols()), period(layout.rows()));
    let cosines = |p: &Peak| {
        let (st, _) = sin_cos_deg(p.theta_deg);
        let (sp, cp) = sin_cos_deg(p.phi_deg);
        (st * cp, st * sp)
    };
    let (u0, v0) = cosines(main);
    let replica = |delta: f64, period: Option<f64>| -> (bool, i64) {
        match period {
            None => (true, 0),
            Some(p) => {
                let m = (delta / p).round();
                ((delta - m * p).abs() < REPLICA_TOL, m as i64)
            }
        }
    };
    for p in &peaks[1..] {
        let (u, v) = cosines(p);
        let (okx, mx) = replica(u - u0, px);
        let (oky, my) = replica(v - v0, py);
        if okx && oky && (mx, my) != (0, 0) {
            return Ok(GratingVerdict::Grating { angle_deg: p.theta_deg });
        }
    }
    Ok(GratingVerdict::Clean)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternReport {
    pub peaks: Vec<Peak>,
    pub directivity_dbi: f64,
    /// Cut plane φ (degrees, as text) → beamwidth in degrees.
    pub hpbw: BTreeMap<String, f64>,
    pub front_to_back_db: f64,
    pub grating: GratingVerdict,
}

pub(crate) fn cut_key(phi_deg: f64) -> String {
    let r = (phi_deg * 1e6).round() / 1e6;
    format!("{r}")
}

/// Full report for a full-sphere grid of `layout`'s pattern. Beamwidths are
/// given for the φ = 0° and φ = 90° cuts and the cut through the strongest
/// peak; cuts without a measurable −3 dB width are left out.
pub fn analyze(grid: &FarFieldGrid, layout: &ArrayLayout, params: &PeakParams) -> Result<PatternReport> {
    if !grid.all_finite() {
        return Err(Error::Numeric("pattern contains non-finite values".into()));
    }
    let directivity_dbi = directivity(grid)?;
    let peaks = find_peaks(grid, params)?;
    let mut cuts = vec![0.0, 90.0];
    if let Some(p) = peaks.first() {
        if p.theta_deg > 0.0 && p.theta_deg < 180.0 {
            cuts.push(p.phi_deg.rem_euclid(180.0));
        }
    }
    let mut widths = BTreeMap::new();
    for phi in cuts {
        if let Ok(w) = hpbw(grid, phi) {
            widths.insert(cut_key(phi), w);
        }
    }
    Ok(PatternReport {
        peaks,
        directivity_dbi,
        hpbw: widths,
        front_to_back_db: front_to_back(grid)?,
        grating: grating_scan_grid(grid, layout)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::excitation::{BeamState, K};
    use crate::radiation::{total_pattern, GridSpec};

    fn grid(layout: &ArrayLayout, w: &[Complex64], e: &ElementPattern, step: f64) -> FarFieldGrid {
        total_pattern(layout, w, e, &GridSpec::new(step, step).unwrap()).unwrap()
    }

    #[test]
    fn isotropic_directivity_and_fb() {
        let l = ArrayLayout::planar(1, 1, 0.5, 14e9).unwrap();
        let g = grid(&l, &[K], &ElementPattern::Isotropic, 1.0);
        assert!(directivity(&g).unwrap().abs() < 0.01);
        assert!(front_to_back(&g).unwrap().abs() < 1e-12);
        assert!(hpbw(&g, 0.0).is_err());
    }

    #[test]
    fn element_front_to_back() {
        let l = ArrayLayout::planar(1, 1, 0.5, 14e9).unwrap();
        let e = ElementPattern::fit_cos_power(8.1).unwrap();
        let g = grid(&l, &[K], &e, 1.0);
        assert!(front_to_back(&g).unwrap() >= 60.0 - 1e-9);
        let a = ArrayLayout::planar(3, 3, 0.5, 14e9).unwrap();
        let g = grid(&a, &[K; 9], &ElementPattern::Isotropic, 1.0);
        assert!(front_to_back(&g).unwrap().abs() < 1e-9);
    }

    #[test]
    fn partial_sphere_rejected() {
        let l = ArrayLayout::planar(1, 1, 0.5, 14e9).unwrap();
        let spec = GridSpec::cap(1.0, 1.0, 90.0).unwrap();
        let g = total_pattern(&l, &[K], &ElementPattern::Isotropic, &spec).unwrap();
        assert!(matches!(directivity(&g), Err(Error::Domain(_))));
        assert!(front_to_back(&g).is_err());
    }

    #[test]
    fn peak_param_validation() {
        let l = ArrayLayout::planar(1, 1, 0.5, 14e9).unwrap();
        let g = grid(&l, &[K], &ElementPattern::Isotropic, 2.0);
        let bad = PeakParams { threshold_db: 1.0, ..Default::default() };
        assert!(find_peaks(&g, &bad).is_err());
        let bad = PeakParams { min_separation_deg: 0.0, ..Default::default() };
        assert!(find_peaks(&g, &bad).is_err());
    }

    #[test]
    fn flat_pattern_has_no_peaks() {
        let l = ArrayLayout::planar(1, 1, 0.5, 14e9).unwrap();
        let g = grid(&l, &[K], &ElementPattern::Isotropic, 0.5);
        assert!(find_peaks(&g, &PeakParams::default()).unwrap().is_empty());
        let report = analyze(&g, &l, &PeakParams::default()).unwrap();
        assert!(report.hpbw.is_empty());
        assert!(report.grating.is_clean());
    }

    #[test]
    fn state_a_single_boresight_peak() {
        let l = ArrayLayout::planar(3, 3, 0.5, 14e9).unwrap();
        let e = ElementPattern::fit_cos_power(8.1).unwrap();
        let g = grid(&l, &[K; 9], &e, 1.0);
        let peaks = find_peaks(&g, &PeakParams::default()).unwrap();
        assert_eq!(peaks.len(), 1);
        assert_eq!(peaks[0].theta_deg, 0.0);
        assert_eq!(peaks[0].level_db, 0.0);
    }

    #[test]
    fn grating_limits() {
        assert_eq!(grating_lobe_limit(0.5), 90.0);
        assert!((grating_lobe_limit(0.6) - 41.81).abs() < 0.01);
        assert_eq!(grating_lobe_limit(1.0), 0.0);
        assert_eq!(grating_lobe_limit(1.2), 0.0);
    }

    #[test]
    fn pointing_loss_anchor() {
        let l = ArrayLayout::linear(5, 0.6, 14e9).unwrap();
        let e = ElementPattern::fit_cos_power(8.1).unwrap();
        let curve = pointing_loss_curve(&l, &e, &[0.0, 30.0]).unwrap();
        assert_eq!(curve[0].loss_db, 0.0);
        assert!(curve[0].realized_loss_db.abs() < 1e-12);
        assert!((curve[1].loss_db + 1.392).abs() < 1e-3);
        // element roll-off pulls the realized beam toward boresight
        assert!(curve[1].realized_peak_deg < 30.0 && curve[1].realized_peak_deg > 27.0);
        assert!(curve[1].realized_loss_db > curve[1].loss_db);
    }

    #[test]
    fn grating_json_shape() {
        let clean = serde_json::to_value(GratingVerdict::Clean).unwrap();
        assert_eq!(clean, serde_json::json!({"verdict": "clean"}));
        let g = serde_json::to_value(GratingVerdict::Grating { angle_deg: -80.5 }).unwrap();
        assert_eq!(g, serde_json::json!({"verdict": "grating", "angle_deg": -80.5}));
        let back: GratingVerdict = serde_json::from_value(g).unwrap();
        assert_eq!(back, GratingVerdict::Grating { angle_deg: -80.5 });
    }

    #[test]
    fn state_d_report() {
        let l = ArrayLayout::planar(3, 3, 0.5, 14e9).unwrap();
        let e = ElementPattern::fit_cos_power(8.1).unwrap();
        let w = Excitation::Beamstate(BeamState::D).weights(&l).unwrap();
        let g = grid(&l, &w, &e, 1.0);
        let r = analyze(&g, &l, &PeakParams::default()).unwrap();
        assert_eq!(r.peaks.len(), 4);
        assert!(r.grating.is_clean());
        assert!(r.directivity_dbi.is_finite());
        assert!(r.front_to_back_db > 50.0);
    }
}
