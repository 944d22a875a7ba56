//! CSV and JSON writers.
//!
//! * pattern grids: `theta_deg,phi_deg,power_dB,phase_deg`, θ-outer order;
//! * principal cuts: same header, signed θ in the cut plane;
//! * port excitations: `port,amplitude,phase_deg`, ports ascending.
//!
//! CSV numbers carry 6 significant digits; report JSON keeps full precision.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::metrics::{radiated_power, PatternReport};
use crate::radiation::{FarFieldGrid, PatternCut};

/// Values below this are written as this, in dB.
pub const DB_FLOOR: f64 = -200.0;

pub const PATTERN_HEADER: &str = "theta_deg,phi_deg,power_dB,phase_deg";
pub const PORT_HEADER: &str = "port,amplitude,phase_deg";

/// `%g`-style formatting with `sig` significant digits.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sig = sig.max(1);
    if x.fract() == 0.0 && x.abs() < 10f64.powi(sig.min(15) as i32) {
        return format!("{}", x as i64);
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= sig as i32 {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    // fixed notation, built from the already-rounded digits
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let mut out = String::with_capacity(digits.len() + 8);
    if neg {
        out.push('-');
    }
    if exp >= 0 {
        let split = exp as usize + 1;
        out.push_str(&digits[..split]);
        let frac = digits[split..].trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
    } else {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
        out.push_str(digits.trim_end_matches('0'));
    }
    out
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn db(x: f64) -> f64 {
    if x > 0.0 {
        (10.0 * x.log10()).max(DB_FLOOR)
    } else {
        DB_FLOOR
    }
}

fn phase_deg(v: Complex64) -> f64 {
    if v.norm_sqr() == 0.0 {
        0.0
    } else {
        v.arg().to_degrees()
    }
}

/// With `normalize`, power is relative to the global maximum; otherwise it
/// is absolute directivity in dBi (needs a full-sphere grid).
pub fn write_pattern_csv<W: Write>(grid: &FarFieldGrid, normalize: bool, mut out: W) -> Result<()> {
    let scale = if normalize {
        let m = grid.max_power();
        if m > 0.0 {
            1.0 / m
        } else {
            1.0
        }
    } else {
        4.0 * PI / radiated_power(grid)?
    };
    if !scale.is_finite() {
        return Err(Error::Numeric("pattern normalization is not finite".into()));
    }
    writeln!(out, "{PATTERN_HEADER}")?;
    for (i, &t) in grid.thetas().iter().enumerate() {
        for (j, &p) in grid.phis().iter().enumerate() {
            let v = grid.value(i, j);
            writeln!(
                out,
                "{},{},{},{}",
                fmt_sig(t, 6),
                fmt_sig(p, 6),
                fmt_sig(db(v.norm_sqr() * scale), 6),
                fmt_sig(phase_deg(v), 6)
            )?;
        }
    }
    Ok(())
}

/// With `normalize`, power is relative to the cut maximum; otherwise it is
/// the realized gain in dBi (see [`PatternCut::gain`]).
pub fn write_cut_csv<W: Write>(cut: &PatternCut, normalize: bool, mut out: W) -> Result<()> {
    let gain = cut.gain();
    let scale = if normalize {
        let m = gain.iter().copied().fold(0.0, f64::max);
        if m > 0.0 {
            1.0 / m
        } else {
            1.0
        }
    } else {
        1.0
    };
    writeln!(out, "{PATTERN_HEADER}")?;
    for ((&a, &g), &v) in cut.angles_deg.iter().zip(&gain).zip(&cut.values) {
        writeln!(
            out,
            "{},{},{},{}",
            fmt_sig(a, 6),
            fmt_sig(cut.phi_deg, 6),
            fmt_sig(db(g * scale), 6),
            fmt_sig(phase_deg(v), 6)
        )?;
    }
    Ok(())
}

/// Port weights as amplitude and phase in `[0, 360)`, port numbers from 1.
pub fn write_port_csv<W: Write>(weights: &[Complex64], mut out: W) -> Result<()> {
    writeln!(out, "{PORT_HEADER}")?;
    for (p, w) in weights.iter().enumerate() {
        let phase = phase_deg(*w).rem_euclid(360.0);
        writeln!(out, "{},{},{}", p + 1, fmt_sig(w.norm(), 6), fmt_sig(phase, 6))?;
    }
    Ok(())
}

pub fn report_json(report: &PatternReport) -> Result<String> {
    serde_json::to_string_pretty(report).map_err(|e| Error::Numeric(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::excitation::{port_vector, BeamState, ExcitationMatrix, MappingKind};

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.0, 6), "0");
        assert_eq!(fmt_sig(0.5, 6), "0.5");
        assert_eq!(fmt_sig(180.0, 6), "180");
        assert_eq!(fmt_sig(-1.23456789, 6), "-1.23457");
        assert_eq!(fmt_sig(8.099999999, 6), "8.1");
        assert_eq!(fmt_sig(123456.7, 6), "123457");
        assert_eq!(fmt_sig(999999.7, 6), "1e6");
        assert_eq!(fmt_sig(1.5e-7, 6), "1.5e-7");
        assert_eq!(fmt_sig(0.000123456789, 6), "0.000123457");
    }

    fn fmt_sig_two_pass(x: f64, sig: usize) -> String {
        if x == 0.0 {
            return "0".into();
        }
        let sci = format!("{:.*e}", sig - 1, x);
        let (mantissa, exp) = sci.split_once('e').unwrap();
        let exp: i32 = exp.parse().unwrap();
        if exp < -5 || exp >= sig as i32 {
            format!("{}e{exp}", trim_zeros(mantissa))
        } else {
            let decimals = (sig as i32 - 1 - exp).max(0) as usize;
            trim_zeros(&format!("{x:.decimals$}")).to_string()
        }
    }

    #[test]
    fn matches_two_pass_formatting() {
        let mut x = 0.123456789f64;
        for i in 0..20000 {
            // deterministic spread over many magnitudes and signs
            x = (x * 7919.0 + 0.5).fract();
            let v = (x - 0.5) * 10f64.powi((i % 17) - 8);
            for sig in [1, 3, 6] {
                assert_eq!(fmt_sig(v, sig), fmt_sig_two_pass(v, sig), "{v} @ {sig}");
            }
        }
        for v in [0.5, 180.0, -90.0, 359.5, 1e6, 999999.0, 123456.0, -200.0, 0.05, 1e-5, 9.9999995e-6] {
            assert_eq!(fmt_sig(v, 6), fmt_sig_two_pass(v, 6), "{v}");
        }
    }

    #[test]
    fn port_csv_table1_b() {
        let map = MappingKind::Table1Reconciled.mapping().unwrap();
        let w = port_vector(&ExcitationMatrix::beamstate(BeamState::B), &map).unwrap();
        let mut buf = Vec::new();
        write_port_csv(&w, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], PORT_HEADER);
        assert_eq!(lines[1], "1,1,0");
        assert_eq!(lines[2], "2,0,0");
        assert_eq!(lines[5], "5,1,180");
        assert_eq!(lines.len(), 10);
    }
}
