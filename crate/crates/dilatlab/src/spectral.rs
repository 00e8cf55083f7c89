//! Eigensolves, cluster merging, spectrum rotation, classification into
//! continuum / isolated / resonance / embedded classes, and angle
//! trajectories.

use crate::error::{Error, Result};
use crate::operator::{assemble, DilatedHamiltonian, Form, Grid, Repr, Scheme};
use crate::potential::Potential;
use crate::{angle::ComplexAngle, lapack};
use ndarray::Array2;
use num_complex::Complex64;
use serde::Serialize;

/// One merged eigenvalue cluster.
///
/// `multiplicity` is the cluster cardinality, the numerical proxy for
/// algebraic multiplicity. `residual` is the largest ||A v - lambda v||_2
/// over the cluster's unit eigenvectors; the bisection path for real
/// symmetric tridiagonal matrices computes eigenvalues directly to machine
/// precision and reports 0. `ambiguous` is set by classification or
/// trajectory matching when a competing match was too close to call; plain
/// eigensolves leave it false.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EigenPair {
    pub value: Complex64,
    pub multiplicity: usize,
    pub residual: f64,
    pub ambiguous: bool,
}

/// Tolerance knobs shared across the engine. All config-exposed.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    /// Residual gate for accepted eigenpairs.
    pub tol_eig: f64,
    /// Matching radius for cross-angle eigenvalue identification.
    pub tol_match: f64,
    /// Slack on bound comparisons beyond rounding.
    pub tol_report: f64,
    /// Cluster radius as a multiple of the matrix max-row-sum norm.
    pub cluster_factor: f64,
    /// Relative part of the essential-ray band.
    pub ray_rel: f64,
    /// Absolute part of the essential-ray band.
    pub ray_abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_eig: 1e-8,
            tol_match: 1e-4,
            tol_report: 1e-6,
            cluster_factor: 1e-6,
            ray_rel: 0.05,
            ray_abs: 0.01,
        }
    }
}

impl Tolerances {
    /// Width of the essential-ray band at a point: 0.05 |z| + 0.01 by
    /// default, since discretization noise scales with |z|.
    pub fn tol_ray(&self, z: Complex64) -> f64 {
        self.ray_rel * z.norm() + self.ray_abs
    }
}

/// Distance from z to the rotated half-line { t e^(i a) : t >= 0 }.
pub fn ray_distance(z: Complex64, ray_angle: f64) -> f64 {
    let w = z * Complex64::from_polar(1.0, -ray_angle);
    if w.re >= 0.0 {
        w.im.abs()
    } else {
        w.norm()
    }
}

/// All eigenvalues of the assembled matrix, cluster-merged, with the
/// default tolerances.
pub fn eigenvalues(hm: &DilatedHamiltonian) -> Result<Vec<EigenPair>> {
    eigenvalues_with(hm, &Tolerances::default())
}

/// All eigenvalues of the assembled matrix, cluster-merged.
///
/// Routing: real symmetric tridiagonal matrices go through bisection and
/// everything else through the dense nonsymmetric complex solver. Results
/// are sorted by (Re, Im). Any merged residual above `tol.tol_eig` is an
/// error, not a silent flag.
pub fn eigenvalues_with(hm: &DilatedHamiltonian, tol: &Tolerances) -> Result<Vec<EigenPair>> {
    let radius = tol.cluster_factor * hm.inf_norm();
    let raw: Vec<(Complex64, f64)> = match hm.repr() {
        Repr::TridiagonalReal { diag, offdiag } => lapack::eig_tridiagonal(diag, offdiag)?
            .into_iter()
            .map(|v| (Complex64::new(v, 0.0), 0.0))
            .collect(),
        Repr::DenseComplex(a) => {
            let (w, vecs) = lapack::eig_complex_dense(a)?;
            let n = a.nrows();
            let mut vmat = Array2::<Complex64>::zeros((n, n));
            for (k, v) in vecs.iter().enumerate() {
                for i in 0..n {
                    vmat[[i, k]] = v[i];
                }
            }
            let av = a.dot(&vmat);
            w.iter()
                .enumerate()
                .map(|(k, &lam)| {
                    let r2: f64 = (0..n)
                        .map(|i| (av[[i, k]] - lam * vmat[[i, k]]).norm_sqr())
                        .sum();
                    (lam, r2.sqrt())
                })
                .collect()
        }
    };

    let pairs = merge_clusters(&raw, radius);
    if let Some(bad) = pairs.iter().map(|p| p.residual).fold(None::<f64>, |acc, r| {
        Some(acc.map_or(r, |a| a.max(r)))
    }) {
        if bad > tol.tol_eig {
            return Err(Error::ToleranceNotMet { achieved: bad, requested: tol.tol_eig });
        }
    }
    Ok(pairs)
}

// Merge eigenvalues closer than `radius` into clusters: value is the mean,
// multiplicity the cardinality, residual the max. Connectivity is resolved
// transitively by union-find over a Re-sorted sweep.
fn merge_clusters(raw: &[(Complex64, f64)], radius: f64) -> Vec<EigenPair> {
    let n = raw.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw[a].0.re.total_cmp(&raw[b].0.re));

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        let mut i = i;
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }

    for a in 0..n {
        let ia = order[a];
        for b in (a + 1)..n {
            let ib = order[b];
            if raw[ib].0.re - raw[ia].0.re > radius {
                break;
            }
            if (raw[ib].0 - raw[ia].0).norm() <= radius {
                let (ra, rb) = (find(&mut parent, ia), find(&mut parent, ib));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
    }

    let mut groups: std::collections::HashMap<usize, Vec<usize>> = std::collections::HashMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }

    let mut pairs: Vec<EigenPair> = groups
        .values()
        .map(|members| {
            let m = members.len();
            let sum: Complex64 = members.iter().map(|&i| raw[i].0).sum();
            let residual = members.iter().map(|&i| raw[i].1).fold(0.0, f64::max);
            EigenPair {
                value: sum / m as f64,
                multiplicity: m,
                residual,
                ambiguous: false,
            }
        })
        .collect();
    pairs.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    pairs
}

/// Multiply every eigenvalue by e^(2 i phi), keeping multiplicities and
/// residuals.
pub fn rotate_spectrum(eigs: &[EigenPair], phi: f64) -> Vec<EigenPair> {
    let f = Complex64::from_polar(1.0, 2.0 * phi);
    eigs.iter()
        .map(|p| EigenPair { value: f * p.value, ..*p })
        .collect()
}

/// Symmetric Hausdorff distance between two spectra as multisets
/// (multiplicities expand to repeated points).
pub fn hausdorff_distance(a: &[EigenPair], b: &[EigenPair]) -> f64 {
    fn directed(from: &[EigenPair], to: &[EigenPair]) -> f64 {
        from.iter()
            .map(|p| {
                to.iter()
                    .map(|q| (p.value - q.value).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    directed(a, b).max(directed(b, a))
}

/// The spectrum of one dilated solve, split by provenance.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumClassification {
    pub phi: f64,
    /// Angle-stationary eigenvalues matched in the undilated spectrum;
    /// values are reported from the undilated solve.
    pub isolated: Vec<EigenPair>,
    /// Angle-stationary eigenvalues uncovered by the rotation, absent from
    /// the undilated spectrum, inside -2 phi < arg z < 0.
    pub resonance: Vec<EigenPair>,
    /// Everything within the ray band of e^(-2 i phi) [0, inf), plus
    /// leftovers that matched nothing (those carry `ambiguous`).
    pub continuum: Vec<EigenPair>,
    /// Positive real eigenvalues off the rotated ray; flagged only for real
    /// potentials.
    pub embedded_candidates: Vec<EigenPair>,
}

impl SpectrumClassification {
    /// Count of eigenvalues (with multiplicity) across all classes.
    pub fn total_multiplicity(&self) -> usize {
        [&self.isolated, &self.resonance, &self.continuum, &self.embedded_candidates]
            .iter()
            .flat_map(|c| c.iter())
            .map(|p| p.multiplicity)
            .sum()
    }

    pub fn has_ambiguous(&self) -> bool {
        [&self.isolated, &self.resonance, &self.continuum, &self.embedded_candidates]
            .iter()
            .flat_map(|c| c.iter())
            .any(|p| p.ambiguous)
    }
}

// Nearest candidate to `target` in `pool` within `tol`, plus the gap to the
// runner-up candidate's value.
fn best_match(target: Complex64, pool: &[EigenPair], tol: f64) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    let mut second: Option<usize> = None;
    for (i, p) in pool.iter().enumerate() {
        let d = (p.value - target).norm();
        match best {
            None => best = Some((i, d)),
            Some((_, bd)) if d < bd => {
                second = Some(best.unwrap().0);
                best = Some((i, d));
            }
            _ => {
                if second.is_none()
                    || (pool[second.unwrap()].value - target).norm() > d
                {
                    second = Some(i);
                }
            }
        }
    }
    match best {
        Some((i, d)) if d <= tol => {
            let runner_gap = second
                .map(|j| (pool[j].value - pool[i].value).norm())
                .unwrap_or(f64::INFINITY);
            Some((i, runner_gap))
        }
        _ => None,
    }
}

/// Deterministic classification fold over three completed solves at angles
/// 0, probe, and phi. Exposed so precomputed spectra (including concurrent
/// solves) can be classified without re-solving.
pub fn classify_from_spectra(
    eigs_zero: &[EigenPair],
    eigs_probe: &[EigenPair],
    eigs_phi: &[EigenPair],
    phi: f64,
    phi_probe: f64,
    potential_is_real: bool,
    tol: &Tolerances,
) -> SpectrumClassification {
    let off_ray_zero: Vec<EigenPair> = eigs_zero
        .iter()
        .copied()
        .filter(|p| ray_distance(p.value, 0.0) > tol.tol_ray(p.value))
        .collect();
    let off_ray_probe: Vec<EigenPair> = eigs_probe
        .iter()
        .copied()
        .filter(|p| ray_distance(p.value, -2.0 * phi_probe) > tol.tol_ray(p.value))
        .collect();

    let mut isolated = Vec::new();
    let mut resonance = Vec::new();
    let mut continuum = Vec::new();
    let mut embedded = Vec::new();

    for p in eigs_phi {
        let z = p.value;
        if ray_distance(z, -2.0 * phi) <= tol.tol_ray(z) {
            continuum.push(*p);
            continue;
        }
        if potential_is_real && z.re > 0.0 && z.im.abs() <= tol.tol_match {
            embedded.push(*p);
            continue;
        }
        let probe_hit = best_match(z, &off_ray_probe, tol.tol_match);
        let zero_hit = best_match(z, &off_ray_zero, tol.tol_match);
        match (probe_hit, zero_hit) {
            (Some((pi, pgap)), Some((zi, zgap))) => {
                let partner = off_ray_zero[zi];
                isolated.push(EigenPair {
                    value: partner.value,
                    multiplicity: p.multiplicity,
                    residual: p.residual.max(partner.residual).max(off_ray_probe[pi].residual),
                    ambiguous: pgap <= tol.tol_match || zgap <= tol.tol_match,
                });
            }
            (Some((pi, pgap)), None) => {
                let arg = z.arg();
                if arg > -2.0 * phi && arg < 0.0 {
                    resonance.push(EigenPair {
                        value: z,
                        multiplicity: p.multiplicity,
                        residual: p.residual.max(off_ray_probe[pi].residual),
                        ambiguous: pgap <= tol.tol_match,
                    });
                } else {
                    // stationary but outside the uncovering sector: an
                    // artifact we refuse to label
                    continuum.push(EigenPair { ambiguous: true, ..*p });
                }
            }
            _ => {
                continuum.push(EigenPair { ambiguous: true, ..*p });
            }
        }
    }

    for class in [&mut isolated, &mut resonance, &mut continuum, &mut embedded] {
        class.sort_by(|a, b| {
            a.value
                .re
                .total_cmp(&b.value.re)
                .then(a.value.im.total_cmp(&b.value.im))
        });
    }

    SpectrumClassification {
        phi,
        isolated,
        resonance,
        continuum,
        embedded_candidates: embedded,
    }
}

/// Solve at angles {0, phi_probe, phi} and classify the phi spectrum.
///
/// Requires 0 < phi_probe < phi < alpha(V). The degenerate call with
/// phi = phi_probe = 0 classifies the undilated spectrum alone (isolated
/// versus continuum); that is the only classification available to
/// dilation-rigid potentials such as wells and tabulated samples.
pub fn classify(
    v: &Potential,
    grid: Grid,
    scheme: Scheme,
    phi: f64,
    phi_probe: f64,
    tol: &Tolerances,
) -> Result<SpectrumClassification> {
    if phi == 0.0 && phi_probe == 0.0 {
        let h = assemble(grid, scheme, v, ComplexAngle::zero(), Form::Full)?;
        let eigs = eigenvalues_with(&h, tol)?;
        let (continuum, isolated): (Vec<_>, Vec<_>) = eigs
            .into_iter()
            .partition(|p| ray_distance(p.value, 0.0) <= tol.tol_ray(p.value));
        return Ok(SpectrumClassification {
            phi: 0.0,
            isolated,
            resonance: Vec::new(),
            continuum,
            embedded_candidates: Vec::new(),
        });
    }
    if !(phi_probe > 0.0) || phi_probe >= phi {
        return Err(Error::AngleOrder { probe: phi_probe, phi });
    }
    let alpha = v.alpha();
    if phi >= alpha {
        return Err(Error::InsufficientAlpha { alpha, required: phi });
    }

    let h0 = assemble(grid, scheme, v, ComplexAngle::zero(), Form::Full)?;
    let hp = assemble(grid, scheme, v, ComplexAngle::new(phi_probe), Form::Full)?;
    let hf = assemble(grid, scheme, v, ComplexAngle::new(phi), Form::Full)?;
    let e0 = eigenvalues_with(&h0, tol)?;
    let ep = eigenvalues_with(&hp, tol)?;
    let ef = eigenvalues_with(&hf, tol)?;
    Ok(classify_from_spectra(&e0, &ep, &ef, phi, phi_probe, v.is_real(), tol))
}

/// One eigenvalue path through an increasing angle grid.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryPath {
    /// (phi, eigenvalue) in grid order, starting where the path appears.
    pub points: Vec<(f64, Complex64)>,
    pub multiplicities: Vec<usize>,
    /// Distance moved at each step; empty for single-point paths.
    pub step_displacements: Vec<f64>,
    /// A competing match came within tol_match at some step.
    pub ambiguous: bool,
    /// False when the path lost its partner before the final angle.
    pub complete: bool,
}

impl TrajectoryPath {
    pub fn total_displacement(&self) -> f64 {
        self.step_displacements.iter().sum()
    }
}

/// Track every eigenvalue across a strictly increasing angle grid by greedy
/// minimal-displacement matching between consecutive solves.
pub fn trajectory(
    v: &Potential,
    grid: Grid,
    scheme: Scheme,
    phi_grid: &[f64],
    tol: &Tolerances,
) -> Result<Vec<TrajectoryPath>> {
    if phi_grid.is_empty() {
        return Err(Error::validation("phi_grid", "must be nonempty"));
    }
    for w in phi_grid.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::validation("phi_grid", "must be strictly increasing"));
        }
    }
    let alpha = v.alpha();
    if let Some(&worst) = phi_grid.last() {
        if worst >= alpha {
            return Err(Error::InsufficientAlpha { alpha, required: worst });
        }
    }

    let mut spectra = Vec::with_capacity(phi_grid.len());
    for &phi in phi_grid {
        let h = assemble(grid, scheme, v, ComplexAngle::new(phi), Form::Full)?;
        spectra.push(eigenvalues_with(&h, tol)?);
    }

    let mut paths: Vec<TrajectoryPath> = spectra[0]
        .iter()
        .map(|p| TrajectoryPath {
            points: vec![(phi_grid[0], p.value)],
            multiplicities: vec![p.multiplicity],
            step_displacements: Vec::new(),
            ambiguous: false,
            complete: true,
        })
        .collect();
    let mut active: Vec<usize> = (0..paths.len()).collect();

    for step in 1..phi_grid.len() {
        let next = &spectra[step];
        // greedy minimal total displacement: sort all (path, candidate)
        // pairs by distance and take them first-come
        let mut edges: Vec<(f64, usize, usize)> = Vec::with_capacity(active.len() * next.len());
        for (slot, &pi) in active.iter().enumerate() {
            let from = paths[pi].points.last().unwrap().1;
            for (ci, cand) in next.iter().enumerate() {
                edges.push(((cand.value - from).norm(), slot, ci));
            }
        }
        edges.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut slot_taken = vec![false; active.len()];
        let mut cand_taken = vec![false; next.len()];
        let mut assignment: Vec<Option<usize>> = vec![None; active.len()];
        for &(_, slot, ci) in &edges {
            if !slot_taken[slot] && !cand_taken[ci] {
                slot_taken[slot] = true;
                cand_taken[ci] = true;
                assignment[slot] = Some(ci);
            }
        }

        let mut still_active = Vec::new();
        for (slot, &pi) in active.iter().enumerate() {
            match assignment[slot] {
                Some(ci) => {
                    let from = paths[pi].points.last().unwrap().1;
                    let taken = next[ci].value;
                    let d = (taken - from).norm();
                    // a second candidate with value within tol_match of the
                    // chosen one makes the step ambiguous
                    let rival = next
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != ci)
                        .map(|(_, q)| (q.value - taken).norm())
                        .fold(f64::INFINITY, f64::min);
                    if rival <= tol.tol_match {
                        paths[pi].ambiguous = true;
                    }
                    paths[pi].points.push((phi_grid[step], taken));
                    paths[pi].multiplicities.push(next[ci].multiplicity);
                    paths[pi].step_displacements.push(d);
                    still_active.push(pi);
                }
                None => {
                    paths[pi].complete = false;
                }
            }
        }
        // candidates nobody claimed start fresh paths at this angle
        for (ci, cand) in next.iter().enumerate() {
            if !cand_taken[ci] {
                paths.push(TrajectoryPath {
                    points: vec![(phi_grid[step], cand.value)],
                    multiplicities: vec![cand.multiplicity],
                    step_displacements: Vec::new(),
                    ambiguous: false,
                    complete: true,
                });
                still_active.push(paths.len() - 1);
            }
        }
        active = still_active;
    }

    Ok(paths)
}
