//! Qualitative behaviour of the shipped channel fixtures.

use thermoflux_core::gummel::run_gummel;
use thermoflux_core::models::ModelKind;
use thermoflux_core::Stabilization;
use thermoflux_harness::config::ChannelConfig;
use thermoflux_harness::fixtures::{bipolar_diode, gramicidin_like};
use thermoflux_harness::sweep::{apply, SweepVariable};

fn current(c: &ChannelConfig) -> f64 {
    let run = run_gummel(&c.channel, c.model, c.solver, None).unwrap();
    assert!(run.converged, "{} {} did not converge", c.name, c.model.name());
    run.total_current(&c.channel)
}

fn coarse(mut c: ChannelConfig, n_el: usize) -> ChannelConfig {
    c.solver.n_el = n_el;
    c
}

#[test]
fn gramicidin_current_falls_with_temperature() {
    let base = coarse(gramicidin_like(), 100);
    let i: Vec<f64> = [280.0, 300.0, 320.0]
        .iter()
        .map(|&t| current(&apply(&base, SweepVariable::TBoth, t)))
        .collect();
    assert!(i[0] > i[1] && i[1] > i[2], "{i:?}");
}

#[test]
fn gramicidin_bath_heating_shifts_current() {
    let base = coarse(gramicidin_like(), 100);
    let i0 = current(&base);
    let hot_left = current(&apply(&base, SweepVariable::TLeft, 330.0));
    let hot_right = current(&apply(&base, SweepVariable::TRight, 330.0));
    assert!(hot_left < i0, "{hot_left:e} vs {i0:e}");
    assert!(hot_right > i0, "{hot_right:e} vs {i0:e}");
}

#[test]
fn bipolar_diode_rectifies() {
    let mut base = coarse(bipolar_diode(), 100);
    base.model = ModelKind::Et;
    let fwd = current(&apply(&base, SweepVariable::VApp, 1.0));
    let rev = current(&apply(&base, SweepVariable::VApp, -1.0));
    assert!(fwd > 0.0 && rev < 0.0);
    assert!(fwd / rev.abs() >= 10.0, "{fwd:e} / {rev:e}");
}

#[test]
fn fluid_flow_against_forward_current_lowers_it() {
    let mut base = apply(&coarse(bipolar_diode(), 100), SweepVariable::VApp, 1.0);
    base.model = ModelKind::Et;
    let still = current(&base);
    let flowing = current(&apply(&base, SweepVariable::VE, 0.01));
    assert!(flowing < still, "{flowing:e} vs {still:e}");
}

#[test]
fn coarse_gramicidin_needs_stabilization() {
    let mut c = coarse(gramicidin_like(), 19);
    let run = run_gummel(&c.channel, c.model, c.solver, None).unwrap();
    assert!(run.converged && run.state.is_positive());
    c.solver.stabilization = Stabilization::None;
    match run_gummel(&c.channel, c.model, c.solver, None) {
        Err(_) => {}
        Ok(r) => assert!(
            !r.converged || !r.state.is_positive(),
            "unstabilized run stayed positive"
        ),
    }
}
