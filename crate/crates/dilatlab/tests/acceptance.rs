//! Release gates. Each test checks one end-to-end claim at its stated
//! tolerance and prints a single PASS or FAIL line.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, FRAC_PI_8, PI};
use std::time::Instant;

use dilatlab::{
    assemble, classify, classify_from_spectra, critical_angle, eigenvalues,
    gaussian_decay_coefficient, gaussian_norm_closed_form, hausdorff_distance, lhs_sum,
    lp_norm_quadrature_tol, norm_monotonicity_scan, ray_distance, rhs, rotate_spectrum,
    verify_with_classification, BoundParams, ComplexAngle, Error, Form, Grid, LPolicy,
    LTConstants, PartMap, Potential, Region, Scheme, SpectrumUse, TheoremId, Tolerances,
};
use num_complex::Complex64;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn cx(r: f64, i: f64) -> Complex64 {
    Complex64::new(r, i)
}

fn gate(label: &str, ok: bool, detail: String) {
    println!("{} {label}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{label}: {detail}");
}

fn standard_constants() -> LTConstants {
    LTConstants::new(1.5, 1, LPolicy::Semiclassical).unwrap()
}

#[test]
fn essential_spectrum_rotates_onto_the_dilated_ray() {
    let free = Potential::finite_well(0.0, 1.0, 1.0).unwrap();
    let grid = Grid::new(20.0, 1000).unwrap();
    let tol = Tolerances::default();
    let mut detail = String::new();
    let mut ok = true;

    for phi in [0.1, 0.3, 0.6] {
        let started = Instant::now();
        let h = assemble(grid, Scheme::Fd2, &free, ComplexAngle::new(phi), Form::Full).unwrap();
        let eigs = eigenvalues(&h).unwrap();
        let elapsed = started.elapsed().as_secs_f64();

        let total: usize = eigs.iter().map(|p| p.multiplicity).sum();
        let on_ray: usize = eigs
            .iter()
            .filter(|p| ray_distance(p.value, -2.0 * phi) <= tol.tol_ray(p.value))
            .map(|p| p.multiplicity)
            .sum();
        let frac = on_ray as f64 / total as f64;
        detail.push_str(&format!("phi={phi}: on-ray {frac:.4}, {elapsed:.1}s; "));
        ok &= frac >= 0.99 && elapsed < 30.0;
    }
    gate("essential spectrum rotates onto the dilated ray", ok, detail);
}

#[test]
fn sech_squared_well_saturates_the_sharp_constant() {
    let samples = 32001usize;
    let dx = 50.0 / (samples - 1) as f64;
    let values: Vec<Complex64> = (0..samples)
        .map(|i| re(-2.0 / (-25.0 + i as f64 * dx).cosh().powi(2)))
        .collect();
    let v = Potential::tabulated(-25.0, dx, values, 1.0).unwrap();
    let constants = standard_constants();
    let tol = Tolerances::default();

    let rhs_value = rhs(TheoremId::NegativeAxis, &constants, &v, &BoundParams::default()).unwrap();
    let rhs_err = (rhs_value - 1.0).abs();

    let mut lhs_err = Vec::new();
    for n in [2000usize, 4000] {
        let cls = classify(&v, Grid::new(20.0, n).unwrap(), Scheme::Fd2, 0.0, 0.0, &tol).unwrap();
        let lhs = lhs_sum(&cls, &Region::NegativeReals, 1.5, SpectrumUse::Isolated);
        lhs_err.push((lhs - 1.0).abs());
    }
    let ratio = lhs_err[0] / lhs_err[1];

    let ok = rhs_err <= 5e-3 && lhs_err[0] <= 5e-3 && (3.2..=4.8).contains(&ratio);
    gate(
        "sech^2 well saturates the sharp constant",
        ok,
        format!("rhs err {rhs_err:.3e}, lhs errs {lhs_err:?}, halving ratio {ratio:.3}"),
    );
}

#[test]
fn bound_state_is_stationary_in_the_dilation_angle() {
    let v = Potential::gaussian(re(1.0), -1.2).unwrap();
    let grid = Grid::new(14.0, 500).unwrap();
    let tol = Tolerances::default();

    let reference = classify(&v, grid, Scheme::Fd4, 0.0, 0.0, &tol).unwrap();
    assert_eq!(reference.isolated.len(), 1, "undilated well should bind once");
    let e0 = reference.isolated[0].value;

    let mut drift: f64 = 0.0;
    let mut multiplicity_constant = reference.isolated[0].multiplicity == 1;
    for phi in [0.1, 0.2, 0.3] {
        let h = assemble(grid, Scheme::Fd4, &v, ComplexAngle::new(phi), Form::Full).unwrap();
        let eigs = eigenvalues(&h).unwrap();
        let nearest = eigs
            .iter()
            .min_by(|a, b| {
                (a.value - e0).norm().partial_cmp(&(b.value - e0).norm()).unwrap()
            })
            .unwrap();
        drift = drift.max((nearest.value - e0).norm());
        multiplicity_constant &= nearest.multiplicity == 1;
    }
    let ok = drift < 1e-4 && multiplicity_constant;
    gate(
        "bound state is stationary in the dilation angle",
        ok,
        format!("max drift {drift:.3e} from {e0}, multiplicity constant: {multiplicity_constant}"),
    );
}

#[test]
fn both_operator_forms_share_one_rotated_spectrum() {
    let grid = Grid::new(14.0, 600).unwrap();
    let potentials = [
        Potential::gaussian(re(1.0), -1.2).unwrap(),
        Potential::rational(re(-2.0), 1.0, 1.0).unwrap(),
        Potential::gaussian(cx(1.0, -0.4), -1.0).unwrap(),
    ];
    let mut worst = 0.0f64;
    for v in &potentials {
        for phi in [0.1, 0.25, 0.4] {
            let theta = ComplexAngle::new(phi);
            let full =
                eigenvalues(&assemble(grid, Scheme::Fd4, v, theta, Form::Full).unwrap()).unwrap();
            let tilde =
                eigenvalues(&assemble(grid, Scheme::Fd4, v, theta, Form::Tilde).unwrap()).unwrap();
            let scale = tilde.iter().map(|p| p.value.norm()).fold(0.0, f64::max);
            let dist = hausdorff_distance(&rotate_spectrum(&full, phi), &tilde);
            worst = worst.max(dist / (1e-10 * scale));
        }
    }
    gate(
        "both operator forms share one rotated spectrum",
        worst <= 1.0,
        format!("worst distance at {worst:.3} of the 1e-10 * max|lambda| budget"),
    );
}

#[test]
fn dilated_gaussian_norms_match_the_closed_form() {
    let cs = [re(1.0), cx(2.0, -0.5), cx(1.5, 0.7)];
    let phis = [-0.2, 0.1, 0.3];
    let ps = [1.5, 2.0];
    let mut worst = 0.0f64;
    for &c in &cs {
        let v = Potential::gaussian(c, 1.0).unwrap();
        for &phi in &phis {
            assert!(
                gaussian_decay_coefficient(c, phi) > 0.5,
                "grid point (c={c}, phi={phi}) lacks decay margin"
            );
            for &p in &ps {
                let closed = gaussian_norm_closed_form(c, phi, p).unwrap();
                let quad =
                    lp_norm_quadrature_tol(&v, ComplexAngle::new(phi), p, 1e-12).unwrap();
                worst = worst.max((closed - quad).abs() / closed);
            }
        }
    }

    let exact_octant = critical_angle(cx(1.0, -1.0)).unwrap() == FRAC_PI_8;

    let real_v = Potential::gaussian(re(2.0), 1.0).unwrap();
    let grid: Vec<f64> = (-3..=3).map(|k| k as f64 * 0.1).collect();
    let scan = norm_monotonicity_scan(&real_v, 2.0, &grid).unwrap();
    let real_vee = scan[1..4].iter().all(|s| s.direction == -1)
        && scan[4..7].iter().all(|s| s.direction == 1);

    let tilted = Potential::gaussian(cx(1.0, -0.4), 1.0).unwrap();
    let tilted_grid: Vec<f64> = (0..10).map(|k| -0.1 + k as f64 * 0.05).collect();
    let tilted_scan = norm_monotonicity_scan(&tilted, 2.0, &tilted_grid).unwrap();
    let min_at = tilted_scan
        .iter()
        .min_by(|a, b| a.norm.partial_cmp(&b.norm).unwrap())
        .unwrap()
        .phi;
    let predicted = critical_angle(cx(1.0, -0.4)).unwrap();
    let tilted_vee = (min_at - predicted).abs() <= 0.05;

    let ok = worst <= 1e-8 && exact_octant && real_vee && tilted_vee;
    gate(
        "dilated gaussian norms match the closed form",
        ok,
        format!(
            "worst rel err {worst:.3e}, octant exact: {exact_octant}, real vee: {real_vee}, \
             tilted min at {min_at:.3} vs {predicted:.3}"
        ),
    );
}

#[test]
fn constant_algebra_and_kappa_limits_line_up() {
    // independently computed from the gamma-function formula at 30 digits
    let frozen = [
        (1.5, 1, 0.1875, 0.75),
        (1.5, 2, 0.031830988618379067, 0.15141455257018808),
        (1.5, 3, 0.0049735919716217292, 0.028134884879909565),
        (2.0, 1, 0.16976527263135502, 0.80754428037433644),
        (2.5, 2, 0.022736420441699334, 0.15295179556100997),
    ];
    let mut ok = true;
    let mut detail = String::new();
    for (g, d, l_ref, c_ref) in frozen {
        let k = LTConstants::new(g, d, LPolicy::Semiclassical).unwrap();
        let l_err = (k.l() - l_ref).abs() / l_ref;
        let c_err = (k.c() - c_ref).abs() / c_ref;
        let ratio_err = (k.c_over_l() - c_ref / l_ref).abs() / (c_ref / l_ref);
        ok &= l_err <= 1e-12 && c_err <= 1e-12 && ratio_err <= 1e-12;
        detail.push_str(&format!("({g},{d}): {l_err:.1e}/{c_err:.1e}; "));
    }

    let constants = standard_constants();
    let v = Potential::rational(re(-2.0), 1.0, 1.0).unwrap();
    let at = |id: TheoremId, kappa: f64| {
        rhs(
            id,
            &constants,
            &v,
            &BoundParams { kappa: Some(kappa), phi: None, phi_probe: None },
        )
        .unwrap()
    };

    let kappas = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0];
    let complement: Vec<f64> = kappas.iter().map(|&k| at(TheoremId::ConeComplement, k)).collect();
    let cone: Vec<f64> = kappas.iter().map(|&k| at(TheoremId::LeftCone, k)).collect();
    let falls = complement.windows(2).all(|w| w[1] < w[0]);
    let rises = cone.windows(2).all(|w| w[1] > w[0]);

    let wide = at(TheoremId::ConeComplement, 1e8);
    let half = at(TheoremId::LeftHalfPlane, 1.0);
    let limit = (wide - half).abs() / half;

    let quadrant = at(TheoremId::QuadrantTwo, 1.0);
    let sector = at(TheoremId::UpperSector, 1.0);
    let split = at(TheoremId::FullPlane, 1.0)
        == at(TheoremId::LeftHalfPlane, 1.0) + at(TheoremId::RightHalfPlane, 1.0);

    ok &= falls && rises && limit <= 1e-6 && quadrant == sector && split;
    detail.push_str(&format!(
        "complement falls: {falls}, cone rises: {rises}, wide-kappa gap {limit:.1e}, \
         quadrant==sector: {}, plane splits: {split}",
        quadrant == sector
    ));
    gate("constant algebra and kappa limits line up", ok, detail);
}

#[test]
fn every_applicable_estimate_holds_on_the_catalog() {
    let semiclassical = LPolicy::Semiclassical;
    let padded = LPolicy::SemiclassicalTimes(1.0);
    let catalog: [(&str, Potential, LPolicy); 6] = [
        ("real gaussian well", Potential::gaussian(re(1.0), -1.2).unwrap(), semiclassical),
        ("real rational well", Potential::rational(re(-2.0), 1.0, 1.0).unwrap(), semiclassical),
        ("tilted gaussian", Potential::gaussian(cx(1.0, -0.4), -1.0).unwrap(), padded),
        ("lifted gaussian", Potential::gaussian(cx(1.0, 0.5), -1.3).unwrap(), padded),
        ("complex rational", Potential::rational(cx(-1.5, 0.5), 1.0, 1.0).unwrap(), padded),
        ("steep complex rational", Potential::rational(cx(0.8, -1.2), 2.0, 1.0).unwrap(), padded),
    ];
    let grid = Grid::new(14.0, 600).unwrap();
    let tol = Tolerances::default();
    let params = BoundParams { kappa: Some(1.0), phi: Some(0.25), phi_probe: None };

    let mut detail = String::new();
    for (label, v, policy) in &catalog {
        let constants = LTConstants::new(1.5, 1, *policy).unwrap();
        let cls = classify(v, grid, Scheme::Fd4, 0.25, 0.125, &tol).unwrap();
        let mut applicable = 0usize;
        for id in TheoremId::ALL {
            match verify_with_classification(
                id,
                v,
                grid,
                Scheme::Fd4,
                &constants,
                &params,
                &cls,
                &tol,
            ) {
                Ok(report) => {
                    applicable += 1;
                    assert!(report.satisfied, "{label} violates {}: {report:#?}", id.tag());
                }
                Err(
                    Error::WrongRegime(_)
                    | Error::InsufficientAlpha { .. }
                    | Error::AngleOutOfStrip { .. }
                    | Error::NonIntegrable { .. }
                    | Error::ConditionViolated { .. },
                ) => {}
                Err(other) => panic!("{label} failed {} unexpectedly: {other}", id.tag()),
            }
        }
        assert!(applicable >= 4, "{label} reached only {applicable} estimates");
        detail.push_str(&format!("{label}: {applicable} estimates; "));
    }
    gate("every applicable estimate holds on the catalog", true, detail);
}

#[test]
fn resonance_pipeline_certifies_the_barrier_estimate() {
    let v = Potential::gaussian(re(1.0), 4.0).unwrap();
    let grid = Grid::new(35.0, 1200).unwrap();
    let tol = Tolerances::default();
    let constants = standard_constants();
    let phi_main = FRAC_PI_6 + 1e-4;
    let phi_alt = 0.55;
    let probe = 0.48;

    let solve = |phi: f64| {
        eigenvalues(&assemble(grid, Scheme::Fd4, &v, ComplexAngle::new(phi), Form::Full).unwrap())
            .unwrap()
    };
    let zero = solve(0.0);
    let probed = solve(probe);
    let main = classify_from_spectra(&zero, &probed, &solve(phi_main), phi_main, probe, true, &tol);
    let alt = classify_from_spectra(&zero, &probed, &solve(phi_alt), phi_alt, probe, true, &tol);

    let uncovered = main
        .resonance
        .iter()
        .find(|p| {
            let arg = p.value.arg();
            !p.ambiguous && arg < 0.0 && arg > -2.0 * phi_main
        })
        .expect("the barrier should expose a resonance inside the rotated sector");
    let partner = alt
        .resonance
        .iter()
        .min_by(|a, b| {
            (a.value - uncovered.value)
                .norm()
                .partial_cmp(&(b.value - uncovered.value).norm())
                .unwrap()
        })
        .expect("the second angle should expose the same resonance");
    let wander = (partner.value - uncovered.value).norm();

    let params = BoundParams { kappa: None, phi: Some(phi_main), phi_probe: Some(probe) };
    let report = verify_with_classification(
        TheoremId::ResonanceSector,
        &v,
        grid,
        Scheme::Fd4,
        &constants,
        &params,
        &main,
        &tol,
    )
    .unwrap();

    // closed-form quadrature oracle, evaluated at 40 digits
    let rhs_oracle = 82.820418222454464;
    let rhs_err = (report.rhs - rhs_oracle).abs() / rhs_oracle;

    // positive-part norms feed the embedded-candidate right side; its gate
    // stays shut for every shipped family, so the estimate is exercised
    // formula-wise only, never against an embedded left side
    let shut = matches!(
        rhs(
            TheoremId::EmbeddedCandidates,
            &constants,
            &Potential::rational(re(-2.0), 1.0, 1.0).unwrap(),
            &BoundParams::default(),
        ),
        Err(Error::InsufficientAlpha { required, .. }) if (required - FRAC_PI_2).abs() < 1e-12
    );
    let plus_part = v
        .part_norm_pow(ComplexAngle::zero(), 0.0, PartMap::RePlus, 2.0, 1e-10)
        .unwrap()
        * constants.l();
    let plus_oracle = 3.0 * (PI / 2.0).sqrt();
    let formula_err = (plus_part - plus_oracle).abs() / plus_oracle;

    let ok = wander < 10.0 * tol.tol_match
        && report.satisfied
        && report.lhs > 0.0
        && report.boundary_flag
        && rhs_err <= 1e-8
        && shut
        && formula_err <= 1e-9;
    gate(
        "resonance pipeline certifies the barrier estimate",
        ok,
        format!(
            "resonance {} wanders {wander:.3e}, report lhs {} rhs {} (oracle gap {rhs_err:.3e}), \
             embedded gate shut: {shut}, positive-part formula gap {formula_err:.3e}",
            uncovered.value, report.lhs, report.rhs
        ),
    );
}
