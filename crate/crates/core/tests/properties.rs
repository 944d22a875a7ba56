use beamswitch::excitation::{port_vector, validate_two_vector};
use beamswitch::geometry::wavelength;
use beamswitch::radiation::array_factor;
use beamswitch::{
    ArrayLayout, BeamState, Complex64, ElementPattern, Excitation, ExcitationMatrix, MappingKind, SlotSchedule,
};
use proptest::prelude::*;

fn state() -> impl Strategy<Value = BeamState> {
    prop::sample::select(BeamState::ALL.to_vec())
}

fn layout() -> impl Strategy<Value = ArrayLayout> {
    (1usize..=5, 1usize..=5, 0.1f64..2.0, 1e9f64..40e9)
        .prop_map(|(r, c, d, f)| ArrayLayout::planar(r, c, d, f).unwrap())
}

fn layout_and_weights() -> impl Strategy<Value = (ArrayLayout, Vec<Complex64>)> {
    layout().prop_flat_map(|l| {
        let n = l.len();
        let w = prop::collection::vec((0.0f64..2.0, -180.0f64..180.0), n)
            .prop_map(|v| v.into_iter().map(|(a, p)| Complex64::from_polar(a, p.to_radians())).collect());
        (Just(l), w)
    })
}

fn direction() -> impl Strategy<Value = (f64, f64)> {
    (0.0f64..=180.0, 0.0f64..180.0)
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + scale)
}

proptest! {
    #[test]
    fn layout_is_centered(l in layout()) {
        let n = l.len() as f64;
        for axis in 0..3 {
            let mean: f64 = l.positions().iter().map(|p| p[axis]).sum::<f64>() / n;
            prop_assert!(mean.abs() < 1e-12, "axis {} mean {}", axis, mean);
        }
    }

    #[test]
    fn spacing_round_trip(l in layout()) {
        let lambda = wavelength(l.design_frequency_hz()).unwrap();
        prop_assert!((l.pitch_m() / lambda - l.spacing_wl()).abs() < 1e-12);
    }

    #[test]
    fn retuning_keeps_positions(l in layout(), f in 1e9f64..40e9) {
        let moved = l.at_frequency(f).unwrap();
        prop_assert_eq!(moved.positions(), l.positions());
        let expected = l.spacing_wl() * f / l.design_frequency_hz();
        prop_assert!((moved.electrical_spacing() - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn array_factor_is_bounded((l, w) in layout_and_weights(), (t, p) in direction()) {
        let bound: f64 = w.iter().map(|x| x.norm()).sum();
        let af = array_factor(&l, &w, t, p).unwrap().norm();
        prop_assert!(af <= bound * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn conjugate_weights_mirror_the_pattern((l, w) in layout_and_weights(), (t, p) in direction()) {
        let conj: Vec<Complex64> = w.iter().map(|x| x.conj()).collect();
        let a = array_factor(&l, &conj, t, p).unwrap().norm();
        let b = array_factor(&l, &w, t, p + 180.0).unwrap().norm();
        prop_assert!(close(a, b, a), "{} vs {}", a, b);
    }

    #[test]
    fn unit_scalar_and_negation_preserve_magnitude(
        (l, w) in layout_and_weights(),
        (t, p) in direction(),
        alpha in -180.0f64..180.0,
    ) {
        let c = Complex64::from_polar(1.0, alpha.to_radians());
        let base = array_factor(&l, &w, t, p).unwrap().norm();
        for scale in [c, -Complex64::new(1.0, 0.0)] {
            let scaled: Vec<Complex64> = w.iter().map(|x| x * scale).collect();
            let got = array_factor(&l, &scaled, t, p).unwrap().norm();
            prop_assert!(close(got, base, base));
        }
    }

    #[test]
    fn state_c_is_state_b_rotated((t, p) in direction(), d in 0.2f64..1.0) {
        let l = ArrayLayout::planar(3, 3, d, 14e9).unwrap();
        let wb = Excitation::Beamstate(BeamState::B).weights(&l).unwrap();
        let wc = Excitation::Beamstate(BeamState::C).weights(&l).unwrap();
        let b = array_factor(&l, &wb, t, p + 90.0).unwrap().norm();
        let c = array_factor(&l, &wc, t, p).unwrap().norm();
        prop_assert!(close(b, c, b), "{} vs {}", b, c);
    }

    #[test]
    fn element_gain_falls_off_forward(g in 3.5f64..20.0, a in 0.0f64..90.0, b in 0.0f64..90.0) {
        let e = ElementPattern::fit_cos_power(g).unwrap();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(e.gain(lo, 0.0).unwrap() >= e.gain(hi, 0.0).unwrap());
    }

    #[test]
    fn schedule_is_periodic(
        states in prop::collection::vec(state(), 1..8),
        slot in 0.01f64..100.0,
        t in 0.0f64..1e4,
        k in 1u32..5,
    ) {
        let map = MappingKind::Table1Reconciled.mapping().unwrap();
        let s = SlotSchedule::new(&states, slot, map).unwrap();
        let later = t + k as f64 * s.period_ms();
        // stay clear of slot boundaries where rounding could pick a side
        let phase = (t % slot) / slot;
        prop_assume!(phase > 1e-6 && phase < 1.0 - 1e-6);
        prop_assert_eq!(s.state_at(t).unwrap(), s.state_at(later).unwrap());
    }

    #[test]
    fn emitted_ports_are_two_vector(st in state(), kind in prop::sample::select(vec![MappingKind::Table1Reconciled, MappingKind::MatrixRowMajor])) {
        let m = ExcitationMatrix::beamstate(st);
        let ports = port_vector(&m, &kind.mapping().unwrap()).unwrap();
        prop_assert!(validate_two_vector(&ports, 3).is_accept());
        prop_assert!(m.negated().validate_two_vector().is_accept());
    }
}
