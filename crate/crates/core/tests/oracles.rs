//! Independent reference computations checked against the library.

use beamswitch::excitation::{port_vector, reconcile_table_mapping, table1_column, Cell};
use beamswitch::metrics::{brute_force_grating_limit, directivity, grating_lobe_limit, hpbw, hpbw_cut};
use beamswitch::radiation::{total_pattern, uniform_linear_af_closed_form};
use beamswitch::{ArrayLayout, BeamState, ElementPattern, Excitation, ExcitationMatrix, GridSpec, PatternCut, PortMapping};

const F: f64 = 14e9;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    // Heap's algorithm
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    let mut out = vec![a.clone()];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

#[test]
fn mapping_matches_exhaustive_permutation_search() {
    let matrices: Vec<_> = BeamState::ALL.iter().map(|&s| ExcitationMatrix::beamstate(s)).collect();
    let columns: Vec<_> = BeamState::ALL.iter().map(|&s| table1_column(s)).collect();
    let cells: Vec<Cell> = (0..3).flat_map(|r| (0..3).map(move |c| Cell::new(r, c))).collect();

    let perms = permutations(9);
    assert_eq!(perms.len(), 362_880);
    let hits: Vec<_> = perms
        .iter()
        .filter(|perm| {
            let mapping = PortMapping::new(3, 3, perm.iter().map(|&k| cells[k]).collect()).unwrap();
            matrices
                .iter()
                .zip(&columns)
                .all(|(m, col)| port_vector(m, &mapping).unwrap() == *col)
        })
        .collect();
    assert_eq!(hits.len(), 1);
    let reconciled = reconcile_table_mapping().unwrap();
    let expected: Vec<Cell> = hits[0].iter().map(|&k| cells[k]).collect();
    assert_eq!(reconciled.cells(), expected.as_slice());
}

#[test]
fn fitted_element_directivity_by_quadrature() {
    let layout = ArrayLayout::linear(1, 0.5, F).unwrap();
    let w = Excitation::Custom(vec![beamswitch::Complex64::new(1.0, 0.0)]).weights(&layout).unwrap();
    for target in [3.5, 6.0, 8.1, 10.0] {
        let e = ElementPattern::fit_cos_power(target).unwrap();
        let g = total_pattern(&layout, &w, &e, &GridSpec::new(0.25, 0.25).unwrap()).unwrap();
        let d = directivity(&g).unwrap();
        assert!((d - target).abs() < 0.05, "target {target}: quadrature {d}");
    }
}

/// Half-power angle of `|sin(nx)/(n sin x)|²`, `x = π d sinθ`, by bisection.
fn hpbw_root_find(n: usize, d: f64) -> f64 {
    let rel = |theta: f64| uniform_linear_af_closed_form(n, d, 0.0, theta).powi(2) / (n * n) as f64;
    let (mut lo, mut hi) = (0.0, 90.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if rel(mid) > 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    2.0 * lo
}

#[test]
fn linear_array_beamwidth_against_root_find() {
    let exact3 = hpbw_root_find(3, 0.5);
    assert!((exact3 - 36.1).abs() <= 0.3, "{exact3}");

    for (n, d) in [(3, 0.5), (5, 0.6)] {
        let exact = hpbw_root_find(n, d);
        let layout = ArrayLayout::linear(n, d, F).unwrap();
        let w = Excitation::Progressive { dphi_deg: 0.0 }.weights(&layout).unwrap();
        let g = total_pattern(&layout, &w, &ElementPattern::Isotropic, &GridSpec::new(0.25, 1.0).unwrap()).unwrap();
        let from_grid = hpbw(&g, 0.0).unwrap();
        assert!((from_grid - exact).abs() < 0.3, "n = {n}: grid {from_grid} vs {exact}");
        let cut = PatternCut::evaluate(&layout, &w, &ElementPattern::Isotropic, 0.0, 0.05).unwrap();
        let from_cut = hpbw_cut(&cut).unwrap();
        assert!((from_cut - exact).abs() < 0.05, "n = {n}: cut {from_cut} vs {exact}");
        if n == 5 {
            assert!(from_grid < exact3);
        }
    }
}

#[test]
fn two_element_directivity_closed_form() {
    for d in [0.25, 0.5, 0.75, 1.0] {
        let layout = ArrayLayout::linear(2, d, F).unwrap();
        let w = Excitation::Progressive { dphi_deg: 0.0 }.weights(&layout).unwrap();
        let g = total_pattern(&layout, &w, &ElementPattern::Isotropic, &GridSpec::new(0.25, 0.25).unwrap()).unwrap();
        let kd = 2.0 * std::f64::consts::PI * d;
        let exact = 10.0 * (2.0 / (1.0 + kd.sin() / kd)).log10();
        let got = directivity(&g).unwrap();
        assert!((got - exact).abs() < 0.01, "d = {d}: {got} vs {exact}");
    }
}

#[test]
fn directivity_converges_with_grid_step() {
    let layout = ArrayLayout::planar(3, 3, 0.5, F).unwrap();
    let e = ElementPattern::fit_cos_power(8.1).unwrap();
    for state in [BeamState::A, BeamState::D, BeamState::E] {
        let w = Excitation::Beamstate(state).weights(&layout).unwrap();
        let coarse = directivity(&total_pattern(&layout, &w, &e, &GridSpec::new(0.5, 0.5).unwrap()).unwrap()).unwrap();
        let fine = directivity(&total_pattern(&layout, &w, &e, &GridSpec::new(0.25, 0.25).unwrap()).unwrap()).unwrap();
        assert!((coarse - fine).abs() < 0.005, "{state}: {coarse} vs {fine}");
    }
}

#[test]
fn steered_peaks_follow_the_phase_law() {
    let d = 0.6;
    let layout = ArrayLayout::linear(5, d, F).unwrap();
    for dphi in [0.0, 30.0, 60.0, 90.0, 108.0] {
        let w = Excitation::Progressive { dphi_deg: dphi }.weights(&layout).unwrap();
        let cut = PatternCut::evaluate(&layout, &w, &ElementPattern::Isotropic, 0.0, 0.01).unwrap();
        let expected = (dphi / (360.0 * d)).asin().to_degrees();
        let (_, peak) = cut.peak();
        assert!((peak - expected).abs() <= 0.02, "Δφ = {dphi}: {peak} vs {expected}");
    }
}

#[test]
fn grating_onset_brute_force_near_analytic() {
    let analytic = grating_lobe_limit(0.6);
    assert!((analytic - 41.81).abs() < 0.01);
    let scanned = brute_force_grating_limit(5, 0.6).unwrap().unwrap();
    assert!((scanned - analytic).abs() <= 1.0, "{scanned} vs {analytic}");
    assert_eq!(grating_lobe_limit(0.5), 90.0);
    assert_eq!(grating_lobe_limit(1.2), 0.0);
}

