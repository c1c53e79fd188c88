//! Acceptance report: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach stdout. The
//! process exits successfully regardless of the verdicts; the hard gates
//! live in the ordinary test suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use thermoflux_core::boundary::{builtin_potential, dirichlet_data, neutrality_residual, BathConditions, Side};
use thermoflux_core::channel::VelocityProfile;
use thermoflux_core::dmh::{
    assemble, solve_bvp, BvpCoefficients, DmhOptions, ElementOperator, ErrorReport, Lumping, Mesh,
};
use thermoflux_core::gummel::{run_gummel, GummelRun, Simulation};
use thermoflux_core::models::{equilibrium_check, ModelKind};
use thermoflux_core::numerics::{is_m_matrix, stabilization_phi};
use thermoflux_core::physics::{molar_to_number_density, thermal_voltage, SpeciesParams};
use thermoflux_core::Stabilization;
use thermoflux_harness::analysis::{l2_distance, layer_strength, oscillation};
use thermoflux_harness::convergence::{run_study, Manufactured, NormAccessor, StudyOptions, DEFAULT_LEVELS};
use thermoflux_harness::fixtures::{bipolar_diode, gramicidin_like};
use thermoflux_harness::sweep::{apply, run_sweep, SweepSpec, SweepVariable};
use thermoflux_harness::ChannelConfig;

struct Report {
    passed: usize,
    failed: usize,
}

impl Report {
    fn line(&mut self, id: &str, ok: bool, what: &str, detail: String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        println!("{} [{id}] {what}: {detail}", if ok { "PASS" } else { "FAIL" });
    }

    fn info(&self, id: &str, what: &str, detail: String) {
        println!("INFO [{id}] {what}: {detail}");
    }
}

fn solve(c: &ChannelConfig) -> GummelRun {
    run_gummel(&c.channel, c.model, c.solver, None).expect("fixture run")
}

fn with_model(c: &ChannelConfig, m: ModelKind) -> ChannelConfig {
    let mut c = c.clone();
    c.model = m;
    c
}

fn criterion_1_2(rep: &mut Report) {
    let study = run_study(&Manufactured::default(), &DEFAULT_LEVELS, StudyOptions::default()).unwrap();
    let norms: [(&str, NormAccessor, f64); 6] = [
        ("|u-u_h|_L2", |r| r.u_l2, 1.0),
        ("|P0u-u_h|_L2", |r| r.projected_u_l2, 2.0),
        ("|u-lambda|_L2", |r| r.trace_l2, 2.0),
        ("|u-lambda|_inf,h", |r| r.trace_max, 2.0),
        ("|J-J_h|_L2", |r| r.flux_l2, 2.0),
        ("|J-J_h|_H1", |r| r.flux_h1, 1.0),
    ];
    for (name, f, want) in norms {
        let o = study.orders(f);
        let fine = &o[o.len() - 3..];
        let ok = fine.iter().all(|x| (x - want).abs() <= 0.05);
        let shown: Vec<String> = fine.iter().map(|x| format!("{x:.4}")).collect();
        rep.line(
            "1",
            ok,
            &format!("order of {name}"),
            format!("[{}] vs {want} +- 0.05", shown.join(", ")),
        );
    }

    // published values at 160, 320, 640, 1280, 2560 elements
    let table_inf = [3.51510e-04, 8.78873e-05, 2.19724e-05, 5.49311e-06, 1.37325e-06];
    let table_j = [1.30365e-03, 3.23124e-04, 8.04091e-05, 2.00543e-05, 5.00749e-06];
    let fine = &study.reports[4..];
    let worst = |vals: &[f64], f: fn(&ErrorReport<f64>) -> f64| {
        fine.iter()
            .zip(vals)
            .map(|(r, &t)| (f(r) / t - 1.0).abs())
            .fold(0.0, f64::max)
    };
    let e_inf = worst(&table_inf, |r| r.trace_max);
    rep.line(
        "2",
        e_inf <= 0.05,
        "|u-lambda|_inf,h against the published table (soft)",
        format!(
            "max rel. deviation {e_inf:.3e} <= 5e-2; at 2560: {:.5e}",
            fine[4].trace_max
        ),
    );
    let e_j = worst(&table_j, |r| r.flux_l2);
    rep.line(
        "2",
        e_j <= 0.05,
        "|J-J_h|_L2 against the published table (soft, report only)",
        format!("max rel. deviation {e_j:.3e} <= 5e-2; at 2560: {:.5e}", fine[4].flux_l2),
    );
}

fn criterion_3(rep: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = 0;
    for trial in 0..1000 {
        let n = rng.gen_range(2..40usize);
        let h = 10f64.powf(rng.gen_range(-3.0..0.0));
        let d = 10f64.powf(rng.gen_range(-4.0..1.0));
        let v = rng.gen_range(-1.0..1.0) * 10f64.powf(rng.gen_range(-2.0..2.0));
        let c = if rng.gen_bool(0.3) {
            0.0
        } else {
            10f64.powf(rng.gen_range(-2.0..4.0))
        };
        let g = rng.gen_range(0.0..2.0);
        let (ul, ur) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        let stab = if trial % 2 == 0 {
            Stabilization::ScharfetterGummel
        } else {
            Stabilization::Upwind
        };
        let mesh = Mesh::uniform(0.0, n as f64 * h, n).unwrap();
        let b = BvpCoefficients::from_fns(&mesh, |_| d, |_| v, |_| c, |_| g, ul, ur).unwrap();
        let opts = DmhOptions::new(stab, Lumping::On);
        let (_, sys) = assemble(&mesh, &b, opts).unwrap();
        let sol = solve_bvp(&mesh, &b, opts).unwrap();
        let nonneg = sol.lambda.iter().chain(&sol.u).all(|&x| x >= 0.0);
        if !(sys.is_empty() || is_m_matrix(&sys)) || !nonneg {
            failures += 1;
        }
    }
    rep.line(
        "3",
        failures == 0,
        "M-matrix and nonnegativity, 1000 random SG/UP lumped cases",
        format!("{failures} failures"),
    );

    let mesh = Mesh::uniform(0.0, 1.0, 10).unwrap();
    let b = BvpCoefficients::from_fns(&mesh, |_| 5e-3, |_| 1.0, |_| 0.0, |_| 1.0, 0.0, 0.0).unwrap();
    let sol = solve_bvp(&mesh, &b, DmhOptions::new(Stabilization::None, Lumping::On)).unwrap();
    let osc = oscillation(&sol.lambda);
    rep.line(
        "3",
        osc.extrema > 1,
        "unstabilized witness (D = 5e-3, v = 1, 10 elements) oscillates (exact profile has one extremum)",
        format!("{} negative nodes, {} local extrema", osc.negatives, osc.extrema),
    );
}

fn criterion_4(rep: &mut Report) {
    let (d, v, g) = (5e-3_f64, 1.0, 1.0);
    let mesh = Mesh::uniform(0.0, 1.0, 10).unwrap();
    let b = BvpCoefficients::from_fns(&mesh, |_| d, |_| v, |_| 0.0, |_| g, 0.0, 0.0).unwrap();
    let sol = solve_bvp(
        &mesh,
        &b,
        DmhOptions::new(Stabilization::ScharfetterGummel, Lumping::On),
    )
    .unwrap();
    // u = (g/v) [x - (e^{v(x-1)/D} - e^{-v/D}) / (1 - e^{-v/D})]
    let exact = |x: f64| g / v * (x - ((v * (x - 1.0) / d).exp() - (-v / d).exp()) / (1.0 - (-v / d).exp()));
    let scale = mesh.nodes().iter().map(|&x| exact(x).abs()).fold(0.0, f64::max);
    let err = mesh
        .nodes()
        .iter()
        .zip(&sol.lambda)
        .map(|(&x, &l)| (l - exact(x)).abs())
        .fold(0.0, f64::max)
        / scale;
    rep.line(
        "4",
        err <= 1e-10,
        "SG nodal exactness, D = 5e-3, v = 1, g = 1, 10 elements",
        format!("max rel. error {err:.3e} <= 1e-10"),
    );
}

fn criterion_5(rep: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for &stab in &[
        Stabilization::None,
        Stabilization::Upwind,
        Stabilization::ScharfetterGummel,
    ] {
        for _ in 0..200 {
            let n = rng.gen_range(3..12usize);
            let h = 10f64.powf(rng.gen_range(-3.0..0.0));
            let d = 10f64.powf(rng.gen_range(-2.0..1.0));
            let v = rng.gen_range(-1.0..1.0) * 10f64.powf(rng.gen_range(-2.0..1.0));
            let c = if rng.gen_bool(0.3) {
                0.0
            } else {
                10f64.powf(rng.gen_range(-2.0..2.0))
            };
            let g = rng.gen_range(-1.0..1.0);
            let mesh = Mesh::uniform(0.0, n as f64 * h, n).unwrap();
            let b = BvpCoefficients::from_fns(&mesh, |_| d, |_| v, |_| c, |_| g, 0.0, 0.0).unwrap();
            let (_, sys) = assemble(&mesh, &b, DmhOptions::new(stab, Lumping::On)).unwrap();
            let pe = v.abs() * h / (2.0 * d);
            let dh = d * (1.0 + stabilization_phi(stab, pe));
            let den = 1.0 + c * h * h / (4.0 * dh);
            let sub = -(v / 2.0 + dh / h) / den;
            let diag = (2.0 * dh / h) * (1.0 + c * h * h / (2.0 * dh)) / den;
            let sup = (v / 2.0 - dh / h) / den;
            let f = g * h / den;
            // the load is a difference of the two element contributions; its
            // rounding scales with their size rather than with f
            let op = ElementOperator::new(h, &b.elements()[0], stab, true).unwrap();
            let load_scale = op.condensed_load[0].abs() + op.condensed_load[1].abs();
            // interior rows of the reduced system: reduced index r couples nodes r, r+1, r+2
            for r in 1..sys.len() - 1 {
                let s = diag.abs();
                let e = [
                    (sys.sub[r - 1] - sub).abs() / s,
                    (sys.diag[r] - diag).abs() / s,
                    (sys.sup[r] - sup).abs() / s,
                    (sys.rhs[r] - f).abs() / load_scale.max(f.abs()).max(f64::MIN_POSITIVE),
                ];
                worst = e.iter().cloned().fold(worst, f64::max);
            }
            cases += 1;
        }
    }
    rep.line(
        "5",
        worst <= 1e-14,
        &format!("interior rows equal the closed forms over {cases} random lumped cases"),
        format!("max rel. deviation {worst:.3e} <= 1e-14"),
    );
}

fn criterion_6(rep: &mut Report) {
    for (name, base) in [
        ("gramicidin_like", gramicidin_like()),
        ("bipolar_diode", bipolar_diode()),
    ] {
        for m in [ModelKind::Et, ModelKind::Thd] {
            let mut c = with_model(&base, m);
            c = apply(&c, SweepVariable::VApp, 0.0);
            c.channel.velocity = VelocityProfile::Constant(0.0);
            let r = solve(&c);
            let e = equilibrium_check(&c.channel, &r.state, 1e-8);
            rep.line(
                "6",
                e.passed && r.converged,
                &format!("equilibrium consistency, {name}, {}", m.name()),
                format!(
                    "current {:.2e}, T dev {:.2e}, phi_ec spread {:.2e} (all <= 1e-8), {} iterations",
                    e.current,
                    e.temperature,
                    e.phi_ec_spread,
                    r.trace.len()
                ),
            );
        }
    }
}

fn iv(c: &ChannelConfig, values: &[f64]) -> Vec<f64> {
    let spec = SweepSpec::new(SweepVariable::VApp, values.to_vec()).unwrap();
    run_sweep(c, &spec, false)
        .rows
        .iter()
        .map(|r| if r.converged { r.current } else { f64::NAN })
        .collect()
}

fn fmt(v: &[f64]) -> String {
    let s: Vec<String> = v.iter().map(|x| format!("{x:.5e}")).collect();
    format!("[{}]", s.join(", "))
}

fn criterion_7(rep: &mut Report) {
    let gram = gramicidin_like();

    // (a)
    let temps = [270.0, 285.0, 300.0, 315.0, 330.0];
    let spec = SweepSpec::new(SweepVariable::TBoth, temps.to_vec()).unwrap();
    let c = apply(&with_model(&gram, ModelKind::Thd), SweepVariable::VApp, 0.1);
    let rows = run_sweep(&c, &spec, false).rows;
    let i: Vec<f64> = rows.iter().map(|r| r.current).collect();
    let ok = rows.iter().all(|r| r.converged) && i.windows(2).all(|w| w[1] < w[0]);
    rep.line(
        "7a",
        ok,
        "gramicidin_like vthd, I(0.1 V) strictly decreasing for T = 270..330 K",
        fmt(&i),
    );

    // (b)
    let volts = [0.02, 0.04, 0.06, 0.08, 0.1];
    for m in [ModelKind::Thd, ModelKind::Et] {
        let c = with_model(&gram, m);
        let base = iv(&c, &volts);
        let hot_left = iv(&apply(&c, SweepVariable::TLeft, 330.0), &volts);
        let hot_right = iv(&apply(&c, SweepVariable::TRight, 330.0), &volts);
        let down = base.iter().zip(&hot_left).all(|(b, l)| l < b);
        let up = base.iter().zip(&hot_right).all(|(b, r)| r > b);
        let detail = format!(
            "base {} T(0)=330 {} T(d)=330 {}",
            fmt(&base),
            fmt(&hot_left),
            fmt(&hot_right)
        );
        if m == ModelKind::Thd {
            rep.line(
                "7b",
                down && up,
                "gramicidin_like vthd, hot left shifts IV down, hot right shifts it up",
                detail,
            );
        } else {
            rep.info("7b", &format!("same sweep, vet: down {down}, up {up}"), detail);
        }
    }

    // (c)
    let bp = bipolar_diode();
    for m in [ModelKind::Thd, ModelKind::Et] {
        let i = iv(&with_model(&bp, m), &[1.0, -1.0]);
        let ratio = (i[0] / i[1]).abs();
        rep.line(
            "7c",
            ratio >= 10.0,
            &format!("bipolar_diode {} rectification |I(+1 V)/I(-1 V)|", m.name()),
            format!("{ratio:.4e} >= 10 (I = {})", fmt(&i)),
        );
    }

    // (d)
    let ve = [0.0, 0.005, 0.01];
    for m in [ModelKind::Et, ModelKind::Thd] {
        let c = apply(&with_model(&bp, m), SweepVariable::VApp, 1.0);
        let spec = SweepSpec::new(SweepVariable::VE, ve.to_vec()).unwrap();
        let rows = run_sweep(&c, &spec, false).rows;
        let i: Vec<f64> = rows.iter().map(|r| r.current).collect();
        let ok = rows.iter().all(|r| r.converged) && i[1..].iter().all(|&x| x < i[0]);
        rep.line(
            "7d",
            ok,
            &format!("bipolar_diode {} at 1 V, v_e = 0.005 and 0.01 m/s lower I", m.name()),
            fmt(&i),
        );
    }
    for m in [ModelKind::Et, ModelKind::Thd] {
        let volts = [0.25, 0.5, 0.75, 1.0];
        let c = with_model(&bp, m);
        let i0 = iv(&c, &volts);
        let i1 = iv(&apply(&c, SweepVariable::VE, 0.01), &volts);
        let lower: Vec<bool> = i0.iter().zip(&i1).map(|(a, b)| b < a).collect();
        rep.info(
            "7d",
            &format!("{} forward IV at 0.25..1 V, v_e = 0.01 lower", m.name()),
            format!("{lower:?}"),
        );
    }

    // (e)
    let c = apply(&apply(&bp, SweepVariable::VApp, 1.0), SweepVariable::VE, 0.01);
    let et = solve(&with_model(&c, ModelKind::Et));
    let mut slow = with_model(&c, ModelKind::Thd);
    slow.channel.cation.v_sat = 1.0;
    slow.channel.anion.v_sat = 1.0;
    let thd1 = solve(&slow);
    let thd10 = solve(&with_model(&c, ModelKind::Thd));
    let x = &et.state.x;
    let d1 = l2_distance(x, &thd1.state.t_fluid, &et.state.t_fluid);
    let d10 = l2_distance(x, &thd10.state.t_fluid, &et.state.t_fluid);
    let rise = |r: &GummelRun| r.state.t_fluid.iter().cloned().fold(f64::MIN, f64::max) - 300.0;
    rep.line(
        "7e",
        d1 < d10 && thd1.converged && thd10.converged,
        "bipolar_diode T_e: vthd with v_sat = 1 closer to vet than with v_sat = 10",
        format!(
            "L2 distance {d1:.4e} (v_sat = 1) vs {d10:.4e} (v_sat = 10); max rise vet {:.4e} K, vthd(1) {:.4e} K, vthd(10) {:.4e} K",
            rise(&et),
            rise(&thd1),
            rise(&thd10)
        ),
    );
}

fn criterion_8(rep: &mut Report) {
    let mut c = gramicidin_like();
    c.solver.n_el = 19;
    let sg = solve(&c);
    let last = sg.trace.last().unwrap();
    let pe = last.max_peclet();
    rep.line(
        "8",
        (pe - 68.63).abs() <= 0.5,
        "gramicidin_like, 19 elements, max local Peclet",
        format!(
            "{pe:.4} (continuity {:.4}, energy {:.4}) vs 68.63 +- 0.5",
            last.peclet_continuity, last.peclet_energy
        ),
    );
    rep.line(
        "8",
        sg.converged && sg.state.is_positive(),
        "gramicidin_like, 19 elements, SG run strictly positive",
        format!(
            "converged {} in {} iterations, min n {:.3e}, min p {:.3e}",
            sg.converged,
            sg.trace.len(),
            sg.state.n().iter().cloned().fold(f64::MAX, f64::min),
            sg.state.p().iter().cloned().fold(f64::MAX, f64::min)
        ),
    );

    let mut none = c.clone();
    none.solver.stabilization = Stabilization::None;
    let detail = match run_gummel(&none.channel, none.model, none.solver, None) {
        Err(e) => (true, format!("run aborted: {e}")),
        Ok(r) => {
            let o = [oscillation(r.state.p()), oscillation(r.state.n())];
            (
                o.iter().any(|x| x.oscillates()),
                format!("completed, oscillation {o:?}"),
            )
        }
    };
    // a single continuity solve without stabilization in the SG field
    let sim = Simulation::new(&none.channel, none.model, none.solver).unwrap();
    let coeffs = sim.context().continuity_coefficients(&sg.state, 0).unwrap();
    let frozen = solve_bvp(&sim.mesh, &coeffs, DmhOptions::new(Stabilization::None, Lumping::Auto)).unwrap();
    let o = oscillation(&frozen.lambda);
    rep.line(
        "8",
        detail.0,
        "gramicidin_like, 19 elements, unstabilized run oscillates",
        format!(
            "{}; frozen-field cation solve: {} negative nodes, {} extrema",
            detail.1, o.negatives, o.extrema
        ),
    );

    let mut fine = gramicidin_like();
    fine.solver.n_el = 200;
    let r = solve(&fine);
    let s = layer_strength(r.state.n());
    rep.info(
        "8",
        "gramicidin_like, 200 elements, anion layer strength max|dn|/mean",
        format!("{s:.4} (> 1 expected)"),
    );
}

fn criterion_9(rep: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let c = 10f64.powf(rng.gen_range(22.0..28.0));
        let p = rng.gen_range(-1.0..1.0) * 10f64.powf(rng.gen_range(20.0..29.0));
        let t = rng.gen_range(250.0..350.0);
        let side = if rng.gen_bool(0.5) { Side::Left } else { Side::Right };
        let newton = builtin_potential(p, &[1, -1], &[c, c], side, t).unwrap();
        // V_th ln[(-P + sqrt(P^2 + 4c^2)) / 2c] on the left, opposite sign on the right
        let s = if side == Side::Left { 1.0 } else { -1.0 };
        let y = if p > 0.0 {
            -((p + (p * p + 4.0 * c * c).sqrt()) / (2.0 * c)).ln()
        } else {
            ((-p + (p * p + 4.0 * c * c).sqrt()) / (2.0 * c)).ln()
        };
        let closed = s * y * thermal_voltage(t);
        worst = worst.max((newton - closed).abs() / thermal_voltage(t));
    }
    rep.line(
        "9",
        worst <= 1e-12,
        "built-in potential, Newton vs 1:1 closed form, 1e4 cases",
        format!("max |diff|/V_th {worst:.3e} <= 1e-12"),
    );

    let mut worst: f64 = 0.0;
    let species = [
        SpeciesParams {
            name: "+".into(),
            valence: 1,
            mobility: 5e-8,
            mass: 3.8e-26,
            v_sat: 10.0,
        },
        SpeciesParams {
            name: "-".into(),
            valence: -1,
            mobility: 8e-8,
            mass: 5.9e-26,
            v_sat: 10.0,
        },
    ];
    for _ in 0..1000 {
        let cl = molar_to_number_density(10f64.powf(rng.gen_range(-3.0..0.5)));
        let cr = molar_to_number_density(10f64.powf(rng.gen_range(-3.0..0.5)));
        let p = [
            molar_to_number_density(rng.gen_range(-5.0..5.0)),
            molar_to_number_density(rng.gen_range(-5.0..5.0)),
        ];
        let bath = BathConditions {
            phi_left: rng.gen_range(-1.0..1.0),
            phi_right: 0.0,
            conc_left: vec![cl, cl],
            conc_right: vec![cr, cr],
            t_left: rng.gen_range(270.0..330.0),
            t_right: rng.gen_range(270.0..330.0),
        };
        let data = dirichlet_data(p, &species, &bath).unwrap();
        let r = neutrality_residual(p, &species, &data);
        worst = worst.max(r[0]).max(r[1]);
    }
    rep.line(
        "9",
        worst <= 1e-10,
        "mouth electroneutrality after dirichlet_data, 1000 cases",
        format!("max residual {worst:.3e} <= 1e-10"),
    );
}

fn main() {
    let mut rep = Report { passed: 0, failed: 0 };
    criterion_1_2(&mut rep);
    criterion_3(&mut rep);
    criterion_4(&mut rep);
    criterion_5(&mut rep);
    criterion_6(&mut rep);
    criterion_7(&mut rep);
    criterion_8(&mut rep);
    criterion_9(&mut rep);
    println!("acceptance: {} passed, {} failed", rep.passed, rep.failed);
}
