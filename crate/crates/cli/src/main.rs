use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use beamswitch::excitation::port_vector;
use beamswitch::export::{fmt_sig, report_json, write_cut_csv, write_pattern_csv, write_port_csv};
use beamswitch::metrics::{
    analyze, angular_distance_deg, brute_force_grating_limit, front_to_back, grating_lobe_limit, grating_scan_cut,
};
use beamswitch::radiation::{cut_gain, total_pattern};
use beamswitch::scenario::ScenarioConfig;
use beamswitch::sequencer::ScheduleFile;
use beamswitch::{
    ArrayLayout, BeamState, Complex64, ElementPattern, Error, Excitation, ExcitationMatrix, GratingVerdict, GridSpec,
    MappingKind, PatternCut, PatternReport, Peak, PeakParams, Result,
};
use clap::{Parser, Subcommand};

const DESIGN_HZ: f64 = 14e9;
const STATE_FREQS_HZ: [f64; 2] = [14e9, 14.5e9];
const ELEMENT_GAIN_DBI: f64 = 8.1;
const STEER_CUT_STEP_DEG: f64 = 0.1;

#[derive(Parser)]
#[command(name = "beamswitch", version, about = "Beam switching and steering analysis for small phased arrays")]
struct Cli {
    /// θ sampling step in degrees (overrides configs).
    #[arg(long, global = true, value_name = "DEG")]
    grid_theta: Option<f64>,
    /// φ sampling step in degrees (overrides configs).
    #[arg(long, global = true, value_name = "DEG")]
    grid_phi: Option<f64>,
    /// Write power relative to the pattern maximum instead of dBi.
    #[arg(long, global = true)]
    normalize: bool,
    /// Port-to-cell mapping: table1-reconciled or matrix-row-major.
    #[arg(long, global = true, value_parser = parse_mapping)]
    mapping: Option<MappingKind>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a scenario config; writes the pattern CSV and a report JSON next to it.
    Pattern { config: PathBuf, out: PathBuf },
    /// Steer a uniform linear array with a progressive phase and write the φ = 0° cut.
    Steer {
        n: usize,
        spacing_wl: f64,
        /// Phase step in degrees, or a sweep `start:stop:step`.
        #[arg(allow_hyphen_values = true)]
        dphi: String,
        out: PathBuf,
        /// Element peak gain in dBi.
        #[arg(long, value_name = "DBI", default_value_t = ELEMENT_GAIN_DBI, conflicts_with = "isotropic")]
        element_gain: f64,
        /// Use isotropic elements instead.
        #[arg(long)]
        isotropic: bool,
    },
    /// Grating-free steering limit for an element pitch in wavelengths.
    Gratings {
        spacing_wl: f64,
        /// Row length used by the brute-force scan.
        #[arg(long, default_value_t = 5)]
        elements: usize,
    },
    /// All six beamstates of the 3×3 half-wave sub-array at 14 and 14.5 GHz.
    States {
        out_dir: PathBuf,
        /// Extra frequencies (Hz) for a peak-shift table against 14 GHz.
        #[arg(long, value_delimiter = ',', value_name = "HZ")]
        band: Vec<f64>,
        /// List per-state port excitations.
        #[arg(long)]
        ports: bool,
    },
    /// Inspect a time-division beamstate schedule.
    Schedule {
        file: PathBuf,
        /// Times (ms) to resolve.
        #[arg(long, value_delimiter = ',', value_name = "MS", allow_hyphen_values = true)]
        at: Vec<f64>,
    },
}

fn parse_mapping(s: &str) -> std::result::Result<MappingKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Domain(_) | Error::Mapping(_) => 2,
        Error::Numeric(_) | Error::Measurement(_) => 3,
        Error::Io(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("beamswitch: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Pattern { config, out } => cmd_pattern(cli, config, out),
        Command::Steer { n, spacing_wl, dphi, out, element_gain, isotropic } => {
            let element = if *isotropic {
                ElementPattern::Isotropic
            } else {
                ElementPattern::fit_cos_power(*element_gain).map_err(|e| Error::Config(e.to_string()))?
            };
            cmd_steer(cli, *n, *spacing_wl, dphi, out, &element)
        }
        Command::Gratings { spacing_wl, elements } => cmd_gratings(*spacing_wl, *elements),
        Command::States { out_dir, band, ports } => cmd_states(cli, out_dir, band, *ports),
        Command::Schedule { file, at } => cmd_schedule(cli, file, at),
    }
}

fn grid_spec(cli: &Cli, base: GridSpec) -> Result<GridSpec> {
    if cli.grid_theta.is_none() && cli.grid_phi.is_none() {
        return Ok(base);
    }
    GridSpec::new(cli.grid_theta.unwrap_or(base.dtheta_deg), cli.grid_phi.unwrap_or(base.dphi_deg))
        .map_err(|e| Error::Config(e.to_string()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn report_path(out: &Path) -> PathBuf {
    out.with_extension("report.json")
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(text.as_bytes())?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn fmt_peak(p: &Peak) -> String {
    format!("({:.1}, {:.1}, {:.2} dB)", p.theta_deg, p.phi_deg, p.level_db)
}

fn fmt_grating(v: &GratingVerdict) -> String {
    match v {
        GratingVerdict::Clean => "clean".into(),
        GratingVerdict::Grating { angle_deg } => format!("grating at {angle_deg:.2} deg"),
    }
}

/// Pattern CSV + report JSON for one evaluated array.
fn emit_pattern(
    layout: &ArrayLayout,
    weights: &[Complex64],
    element: &ElementPattern,
    spec: &GridSpec,
    normalize: bool,
    out: &Path,
) -> Result<PatternReport> {
    let grid = total_pattern(layout, weights, element, spec)?;
    if !grid.all_finite() {
        return Err(Error::Numeric("pattern contains non-finite values".into()));
    }
    let mut w = create(out)?;
    write_pattern_csv(&grid, normalize, &mut w)?;
    w.flush()?;
    let report = analyze(&grid, layout, &PeakParams::default())?;
    write_text(&report_path(out), &report_json(&report)?)?;
    Ok(report)
}

fn cmd_pattern(cli: &Cli, config: &Path, out: &Path) -> Result<()> {
    let text = fs::read_to_string(config)?;
    let scenario = ScenarioConfig::from_json(&text)?.build()?;
    let spec = grid_spec(cli, scenario.grid)?;
    let normalize = scenario.normalize || cli.normalize;
    let report = emit_pattern(&scenario.layout, &scenario.weights, &scenario.element, &spec, normalize, out)?;

    let af_only = total_pattern(&scenario.layout, &scenario.weights, &ElementPattern::Isotropic, &spec)?;
    let peaks: Vec<String> = report.peaks.iter().map(fmt_peak).collect();
    println!("peaks {}: {}", report.peaks.len(), peaks.join(" "));
    println!("directivity_dbi {:.2}", report.directivity_dbi);
    for (cut, w) in &report.hpbw {
        println!("hpbw_deg phi={cut} {w:.2}");
    }
    println!("front_to_back_db {:.2}", report.front_to_back_db);
    println!("af_front_to_back_db {:.2}", front_to_back(&af_only)?);
    println!("grating {}", fmt_grating(&report.grating));
    println!("wrote {} and {}", out.display(), report_path(out).display());
    Ok(())
}

fn parse_dphi(s: &str) -> Result<Vec<f64>> {
    let num = |t: &str| -> Result<f64> {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::Config(format!("invalid phase value {t:?}")))
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [one] => Ok(vec![num(one)?]),
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if step <= 0.0 || b < a {
                return Err(Error::Config(format!("sweep {s:?} needs start <= stop and step > 0")));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize;
            Ok((0..=count).map(|i| a + i as f64 * step).collect())
        }
        _ => Err(Error::Config(format!("expected a phase step or start:stop:step, got {s:?}"))),
    }
}

fn sweep_path(out: &Path, dphi: f64) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = out.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into());
    out.with_file_name(format!("{stem}_dphi{}.{ext}", fmt_sig(dphi, 6)))
}

fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

fn cmd_steer(cli: &Cli, n: usize, spacing_wl: f64, dphi: &str, out: &Path, element: &ElementPattern) -> Result<()> {
    let steps = parse_dphi(dphi)?;
    let layout = ArrayLayout::linear(n, spacing_wl, DESIGN_HZ).map_err(|e| Error::Config(e.to_string()))?;
    let step = cli.grid_theta.unwrap_or(STEER_CUT_STEP_DEG);
    let broadside = Excitation::Progressive { dphi_deg: 0.0 }.weights(&layout)?;
    let ref_cut = PatternCut::evaluate(&layout, &broadside, element, 0.0, step)?;
    let ref_gain = ref_cut.gain()[ref_cut.peak().0];
    let ref_boresight = cut_gain(&layout, &broadside, element, 0.0, 0.0)?;

    for &dphi_deg in &steps {
        let w = Excitation::Progressive { dphi_deg }.weights(&layout)?;
        let cut = PatternCut::evaluate(&layout, &w, element, 0.0, step)?;
        let (idx, peak) = cut.peak();
        let gain = cut.gain();
        if gain.iter().any(|g| !g.is_finite()) {
            return Err(Error::Numeric("cut contains non-finite values".into()));
        }
        let path = if steps.len() == 1 { out.to_path_buf() } else { sweep_path(out, dphi_deg) };
        let mut f = create(&path)?;
        write_cut_csv(&cut, cli.normalize, &mut f)?;
        f.flush()?;

        let realized = db(gain[idx] / ref_gain);
        let commanded = dphi_deg / (360.0 * spacing_wl);
        let af = PatternCut::evaluate(&layout, &w, &ElementPattern::Isotropic, 0.0, step)?;
        let beam = main_lobe(&af, commanded);
        let loss = if commanded.abs() <= 1.0 {
            let theta0 = commanded.asin().to_degrees();
            format!("{:.3}", db(cut_gain(&layout, &w, element, 0.0, theta0)? / ref_boresight))
        } else {
            "n/a".into()
        };
        println!(
            "dphi_deg={} peak_deg={beam:.2} loss_db={loss} realized_peak_deg={peak:.2} realized_loss_db={realized:.3} grating={} file={}",
            fmt_sig(dphi_deg, 6),
            fmt_grating(&grating_scan_cut(&cut)).replace(' ', "_"),
            path.display()
        );
    }
    Ok(())
}

/// Array-factor lobe nearest the phase-law direction `asin(sin_theta0)`;
/// the global maximum when that direction is outside visible space.
fn main_lobe(af: &PatternCut, sin_theta0: f64) -> f64 {
    if sin_theta0.abs() > 1.0 {
        return af.peak().1;
    }
    let target = sin_theta0.asin().to_degrees();
    let p = af.power();
    let n = p.len();
    (0..n)
        .filter(|&i| (i == 0 || p[i] >= p[i - 1]) && (i + 1 == n || p[i] >= p[i + 1]))
        .map(|i| af.angles_deg[i])
        .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
        .unwrap_or_else(|| af.peak().1)
}

fn cmd_gratings(spacing_wl: f64, elements: usize) -> Result<()> {
    if !(spacing_wl.is_finite() && spacing_wl > 0.0) {
        return Err(Error::Config(format!("spacing must be a positive number of wavelengths, got {spacing_wl}")));
    }
    if elements < 2 {
        return Err(Error::Config("the brute-force scan needs at least 2 elements".into()));
    }
    let analytic = grating_lobe_limit(spacing_wl);
    let scanned = brute_force_grating_limit(elements, spacing_wl)?;
    println!("spacing_wl {}", fmt_sig(spacing_wl, 6));
    println!("analytic_limit_deg {analytic:.2}");
    match scanned {
        Some(t) => println!("brute_force_limit_deg {t:.2} ({elements} elements, isotropic)"),
        None => println!("brute_force_limit_deg 90.00 ({elements} elements, isotropic; clean up to endfire)"),
    }
    Ok(())
}

fn ghz_label(f: f64) -> String {
    format!("{}GHz", fmt_sig(f / 1e9, 6))
}

/// Largest distance from a peak in `a` to its nearest peak in `b`.
fn max_shift(a: &[Peak], b: &[Peak]) -> f64 {
    a.iter()
        .map(|p| {
            b.iter()
                .map(|q| angular_distance_deg((p.theta_deg, p.phi_deg), (q.theta_deg, q.phi_deg)))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

fn port_label(w: Complex64) -> String {
    if w.im.abs() < 1e-12 {
        match w.re {
            r if (r - 1.0).abs() < 1e-12 => return "+k".into(),
            r if (r + 1.0).abs() < 1e-12 => return "-k".into(),
            r if r.abs() < 1e-12 => return "0".into(),
            _ => {}
        }
    }
    format!("{}@{}", fmt_sig(w.norm(), 4), fmt_sig(w.arg().to_degrees(), 4))
}

fn cmd_states(cli: &Cli, out_dir: &Path, band: &[f64], ports: bool) -> Result<()> {
    if band.iter().any(|f| !(f.is_finite() && *f > 0.0)) {
        return Err(Error::Config("band frequencies must be positive".into()));
    }
    fs::create_dir_all(out_dir)?;
    let element = ElementPattern::fit_cos_power(ELEMENT_GAIN_DBI)?;
    let spec = grid_spec(cli, GridSpec::default())?;
    let design = ArrayLayout::planar(3, 3, 0.5, DESIGN_HZ)?;

    println!("{:<6} {:>9} {:>6}  peaks (θ, φ, level)", "state", "freq_GHz", "count");
    let mut reference = Vec::new();
    for f in STATE_FREQS_HZ {
        let layout = design.at_frequency(f)?;
        for state in BeamState::ALL {
            let w = Excitation::Beamstate(state).weights(&layout)?;
            let out = out_dir.join(format!("state_{state}_{}.csv", ghz_label(f)));
            let report = emit_pattern(&layout, &w, &element, &spec, cli.normalize, &out)?;
            let peaks: Vec<String> = report.peaks.iter().map(fmt_peak).collect();
            println!("{:<6} {:>9} {:>6}  {}", state, fmt_sig(f / 1e9, 6), report.peaks.len(), peaks.join(" "));
            if f == DESIGN_HZ {
                reference.push(report.peaks);
            }
        }
    }

    if !band.is_empty() {
        println!();
        println!("{:<6} {:>9} {:>6} {:>10}  (shift against 14 GHz)", "state", "freq_GHz", "count", "shift_deg");
        for (state, ref_peaks) in BeamState::ALL.iter().zip(&reference) {
            for &f in band {
                let layout = design.at_frequency(f)?;
                let w = Excitation::Beamstate(*state).weights(&layout)?;
                let grid = total_pattern(&layout, &w, &element, &spec)?;
                let peaks = analyze(&grid, &layout, &PeakParams::default())?.peaks;
                let shift = max_shift(ref_peaks, &peaks).max(max_shift(&peaks, ref_peaks));
                println!("{:<6} {:>9} {:>6} {:>10.2}", state, fmt_sig(f / 1e9, 6), peaks.len(), shift);
            }
        }
    }

    if ports {
        let kind = cli.mapping.unwrap_or_default();
        let mapping = kind.mapping()?;
        let vectors: Vec<Vec<Complex64>> = BeamState::ALL
            .iter()
            .map(|&s| port_vector(&ExcitationMatrix::beamstate(s), &mapping))
            .collect::<Result<_>>()?;
        for (state, v) in BeamState::ALL.iter().zip(&vectors) {
            let mut f = create(&out_dir.join(format!("ports_{state}.csv")))?;
            write_port_csv(v, &mut f)?;
            f.flush()?;
        }
        println!();
        println!("ports ({kind})");
        let header: Vec<String> = BeamState::ALL.iter().map(|s| format!("{s:>3}")).collect();
        println!("{:<5}{}", "port", header.join(""));
        for port in 0..mapping.port_count() {
            let row: Vec<String> = vectors.iter().map(|v| format!("{:>3}", port_label(v[port]))).collect();
            let cell = mapping.cell(port + 1).map(|c| c.to_string()).unwrap_or_default();
            println!("{:<5}{}   cell {cell}", port + 1, row.join(""));
        }
    }
    Ok(())
}

fn cmd_schedule(cli: &Cli, file: &Path, at: &[f64]) -> Result<()> {
    let text = fs::read_to_string(file)?;
    let mut parsed = ScheduleFile::from_json(&text)?;
    if let Some(kind) = cli.mapping {
        parsed.mapping = kind;
    }
    let schedule = parsed.build().map_err(|e| match e {
        Error::Domain(m) => Error::Config(m),
        other => other,
    })?;
    let ports = |v: &[Complex64]| v.iter().map(|w| port_label(*w)).collect::<Vec<_>>().join(" ");

    println!("period_ms {}", fmt_sig(schedule.period_ms(), 6));
    println!("mapping {}", parsed.mapping);
    let mut start = 0.0;
    for (i, (state, d)) in schedule.slots().iter().enumerate() {
        let v = port_vector(&ExcitationMatrix::beamstate(*state), schedule.mapping())?;
        println!("slot {i} start_ms {} state {state} ports {}", fmt_sig(start, 6), ports(&v));
        start += d;
    }
    for &t in at {
        let slot = schedule.slot_index(t).map_err(|e| Error::Config(e.to_string()))?;
        let v = schedule.excitation_at(t)?;
        println!("t_ms {} slot {slot} state {} ports {}", fmt_sig(t, 6), schedule.slots()[slot].0, ports(&v));
    }
    Ok(())
}
