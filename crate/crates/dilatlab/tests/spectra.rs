use dilatlab::{
    assemble, classify, eigenvalues, hausdorff_distance, ray_distance, rotate_spectrum, trajectory,
    ComplexAngle, EigenPair, Form, Grid, Potential, Scheme, Tolerances,
};
use num_complex::Complex64;

const WELL_GROUND_STATE: f64 = -0.4635693232540617;

fn gaussian_well() -> Potential {
    Potential::gaussian(Complex64::new(1.0, 0.0), -1.2).unwrap()
}

#[test]
fn well_keeps_its_bound_state_under_dilation() {
    let grid = Grid::new(12.0, 240).unwrap();
    let tol = Tolerances::default();
    let v = gaussian_well();

    let c1 = classify(&v, grid, Scheme::Fd4, 0.15, 0.075, &tol).unwrap();
    let c2 = classify(&v, grid, Scheme::Fd4, 0.30, 0.150, &tol).unwrap();
    assert_eq!(c1.isolated.len(), 1);
    assert_eq!(c2.isolated.len(), 1);
    assert!(!c1.isolated[0].ambiguous);

    let e1 = c1.isolated[0].value;
    let e2 = c2.isolated[0].value;
    assert!((e1.re - WELL_GROUND_STATE).abs() < 1e-6);
    assert!(e1.im.abs() < 1e-8);
    // both classifications canonicalize to the same undilated partner
    assert!((e1 - e2).norm() < 1e-12);
}

#[test]
fn dilated_well_eigenvalue_barely_moves_in_the_raw_spectrum() {
    let grid = Grid::new(12.0, 240).unwrap();
    let v = gaussian_well();
    let h = assemble(grid, Scheme::Fd4, &v, ComplexAngle::new(0.15), Form::Full).unwrap();
    let eigs = eigenvalues(&h).unwrap();
    let drift = eigs
        .iter()
        .map(|p| (p.value - Complex64::new(WELL_GROUND_STATE, 0.0)).norm())
        .fold(f64::INFINITY, f64::min);
    assert!(drift < 5e-6, "raw drift {drift}");
}

#[test]
fn continuum_hugs_the_rotated_ray() {
    let grid = Grid::new(12.0, 240).unwrap();
    let tol = Tolerances::default();
    let c = classify(&gaussian_well(), grid, Scheme::Fd4, 0.3, 0.15, &tol).unwrap();
    assert!(c.continuum.len() > 100);
    assert!(c.resonance.is_empty());
    let median = {
        let mut d: Vec<f64> = c
            .continuum
            .iter()
            .map(|p| ray_distance(p.value, -0.6) / p.value.norm().max(1.0))
            .collect();
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        d[d.len() / 2]
    };
    assert!(median < 1e-2, "median relative ray distance {median}");
}

#[test]
fn reflectionless_well_lands_on_minus_one() {
    let x0 = -25.0;
    let dx = 0.0125;
    let count = 4001;
    let values: Vec<Complex64> = (0..count)
        .map(|k| {
            let x: f64 = x0 + dx * k as f64;
            Complex64::new(-2.0 / x.cosh().powi(2), 0.0)
        })
        .collect();
    let v = Potential::tabulated(x0, dx, values, 1.0).unwrap();
    assert!(v.is_real());

    let grid = Grid::new(20.0, 800).unwrap();
    let c = classify(&v, grid, Scheme::Fd2, 0.0, 0.0, &Tolerances::default()).unwrap();
    assert_eq!(c.isolated.len(), 1);
    let e0 = c.isolated[0].value;
    assert!((e0.re + 1.0).abs() < 5e-4, "ground state {e0}");
    assert!(e0.im.abs() < 1e-12);
}

#[test]
fn trajectories_separate_the_still_point_from_the_rotating_arm() {
    let v = Potential::rational(Complex64::new(-1.5, 0.5), 1.0, 1.0).unwrap();
    let grid = Grid::new(10.0, 160).unwrap();
    let phis = [0.1, 0.2, 0.3, 0.4];
    let paths = trajectory(&v, grid, Scheme::Fd2, &phis, &Tolerances::default()).unwrap();

    let still = paths
        .iter()
        .filter(|p| p.complete)
        .min_by(|a, b| a.total_displacement().partial_cmp(&b.total_displacement()).unwrap())
        .expect("at least one complete path");
    assert!(still.total_displacement() < 1e-3);
    let start = still.points.first().unwrap().1;
    assert!((start - Complex64::new(-0.7379, 0.3263)).norm() < 1e-2);

    let busiest = paths
        .iter()
        .map(|p| p.total_displacement())
        .fold(0.0f64, f64::max);
    assert!(busiest > 0.05, "no path rotated, max displacement {busiest}");
}

#[test]
fn spectrum_rotation_round_trips() {
    let eigs: Vec<EigenPair> = [
        Complex64::new(-0.5, 0.0),
        Complex64::new(0.3, -0.4),
        Complex64::new(2.0, 1.0),
    ]
    .iter()
    .map(|&value| EigenPair { value, multiplicity: 1, residual: 0.0, ambiguous: false })
    .collect();
    let there = rotate_spectrum(&eigs, 0.37);
    let back = rotate_spectrum(&there, -0.37);
    assert!(hausdorff_distance(&eigs, &back) < 1e-14);
    assert!(hausdorff_distance(&eigs, &there) > 0.1);
}
