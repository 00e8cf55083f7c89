use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use dilatlab::bounds::{self, BoundParams, TheoremId};
use dilatlab::config::ExperimentConfig;
use dilatlab::report::{self, NormRow, ScanRow, SpectrumRow};
use dilatlab::{
    assemble, classify, gaussian_norm_closed_form, norm_monotonicity_scan, trajectory, Error, Form,
    Grid, Potential, Scheme, SpectrumClassification, Tolerances,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Spectral laboratory for complex-dilated 1D Schrödinger operators.
#[derive(Parser)]
#[command(name = "dilatlab", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Experiment description (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides output.dir.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for independent solves.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Override tolerances.tol_eig.
    #[arg(long)]
    tol_eig: Option<f64>,
    /// Reserved; all runs are deterministic already.
    #[arg(long)]
    seedless: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve and classify the spectrum at each working angle.
    Spectrum(Common),
    /// Track eigenvalue paths across the angle grid.
    Trajectory(Common),
    /// Check the configured estimates against the classified spectrum.
    Verify(Common),
    /// Tabulate dilated potential norms over the angle grid.
    Norms(Common),
    /// Sweep estimate right-hand sides over parameter grids.
    Scan(Common),
}

struct Workspace {
    cfg: ExperimentConfig,
    hash: String,
    potential: Potential,
    grid: Grid,
    scheme: Scheme,
    tol: Tolerances,
    out_dir: PathBuf,
}

fn load(common: &Common) -> Result<Workspace, Error> {
    let (cfg, raw) = ExperimentConfig::from_path(&common.config)?;
    let base = common
        .config
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    let potential = cfg.build_potential(&base)?;
    let grid = cfg.build_grid()?;
    let scheme = cfg.build_scheme()?;
    let mut tol = cfg.build_tolerances()?;
    if let Some(te) = common.tol_eig {
        if !(te > 0.0) || !te.is_finite() {
            return Err(Error::validation("--tol-eig", "must be positive and finite"));
        }
        tol.tol_eig = te;
    }
    let out_dir = common
        .out
        .clone()
        .or_else(|| cfg.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let hash = report::config_hash(&raw);
    Ok(Workspace { cfg, hash, potential, grid, scheme, tol, out_dir })
}

fn probe_for(ws: &Workspace, phi: f64) -> f64 {
    ws.cfg.angles.phi_probe.unwrap_or(phi / 2.0).min(phi)
}

fn classify_at(ws: &Workspace, phi: f64) -> Result<SpectrumClassification, Error> {
    if phi == 0.0 {
        classify(&ws.potential, ws.grid, ws.scheme, 0.0, 0.0, &ws.tol)
    } else {
        let probe = probe_for(ws, phi);
        classify(&ws.potential, ws.grid, ws.scheme, phi, probe, &ws.tol)
    }
}

fn require_angles(ws: &Workspace) -> Result<Vec<f64>, Error> {
    let phis = ws.cfg.build_angles()?;
    if phis.is_empty() {
        return Err(Error::validation("angles.phi", "this command needs working angles"));
    }
    Ok(phis)
}

fn cmd_spectrum(common: &Common) -> Result<bool, Error> {
    let ws = load(common)?;
    let phis = require_angles(&ws)?;
    let n = phis.len();

    let results: Vec<Option<Result<SpectrumClassification, Error>>> = {
        let slots = Mutex::new((0..n).map(|_| None).collect::<Vec<_>>());
        let next = AtomicUsize::new(0);
        let workers = common.threads.clamp(1, n.max(1));
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let k = next.fetch_add(1, Ordering::Relaxed);
                    if k >= n {
                        break;
                    }
                    let r = classify_at(&ws, phis[k]);
                    slots.lock().unwrap()[k] = Some(r);
                });
            }
        });
        slots.into_inner().unwrap()
    };

    let mut rows = Vec::new();
    for (k, slot) in results.into_iter().enumerate() {
        let c = slot.expect("worker filled every slot")?;
        for (class, pairs) in [
            ("isolated", &c.isolated),
            ("resonance", &c.resonance),
            ("continuum", &c.continuum),
            ("embedded_candidate", &c.embedded_candidates),
        ] {
            for p in pairs {
                rows.push(SpectrumRow { phi: phis[k], class, pair: p.clone() });
            }
        }
    }

    let path = ws.out_dir.join("spectrum.csv");
    report::write_text(&path, &report::spectrum_csv(&ws.hash, &rows))?;
    println!("wrote {}", path.display());

    if ws.cfg.output.matrix_dump {
        for (k, phi) in phis.iter().enumerate() {
            let h = assemble(ws.grid, ws.scheme, &ws.potential, dilatlab::ComplexAngle::new(*phi), Form::Full)?;
            let path = ws.out_dir.join(format!("matrix_{k}.bin"));
            h.dump_matrix(&path)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(false)
}

fn cmd_trajectory(common: &Common) -> Result<bool, Error> {
    let ws = load(common)?;
    let phis = require_angles(&ws)?;
    let paths = trajectory(&ws.potential, ws.grid, ws.scheme, &phis, &ws.tol)?;
    let path = ws.out_dir.join("trajectory.csv");
    report::write_text(&path, &report::trajectory_csv(&ws.hash, &paths))?;
    println!("wrote {}", path.display());
    Ok(false)
}

fn verify_phi(ws: &Workspace) -> Result<Option<f64>, Error> {
    if let Some(phi) = ws.cfg.bounds.phi {
        return Ok(Some(phi));
    }
    let phis = ws.cfg.build_angles()?;
    match phis.len() {
        0 => Ok(None),
        1 => Ok(Some(phis[0])),
        _ => Err(Error::validation(
            "bounds.phi",
            "verify needs one working angle: set bounds.phi or a single angles.phi entry",
        )),
    }
}

fn admits(id: TheoremId, v: &Potential, params: &BoundParams) -> bool {
    let required = match bounds::alpha_required(id, params) {
        Ok(r) => r,
        Err(_) => return false,
    };
    if required > 0.0 && v.alpha() <= required {
        return false;
    }
    id != TheoremId::NegativeAxis || v.is_real()
}

fn cmd_verify(common: &Common) -> Result<bool, Error> {
    let ws = load(common)?;
    let params = BoundParams {
        kappa: ws.cfg.bounds.kappa,
        phi: verify_phi(&ws)?,
        phi_probe: ws.cfg.angles.phi_probe,
    };
    let explicit = ws.cfg.build_theorems()?;
    let ids: Vec<TheoremId> = if explicit.is_empty() {
        TheoremId::ALL
            .into_iter()
            .filter(|id| admits(*id, &ws.potential, &params))
            .collect()
    } else {
        explicit
    };
    if ids.is_empty() {
        return Err(Error::validation(
            "bounds.theorems",
            "no estimate is applicable; list them explicitly or adjust parameters",
        ));
    }

    let constants = ws.cfg.build_constants()?;
    let (phi, probe) = bounds::classification_angles(&ws.potential, &params)?;
    let classification = if phi == 0.0 {
        classify(&ws.potential, ws.grid, ws.scheme, 0.0, 0.0, &ws.tol)?
    } else {
        classify(&ws.potential, ws.grid, ws.scheme, phi, probe, &ws.tol)?
    };

    let convergence = if ws.cfg.bounds.box_check {
        Some(bounds::box_check(&ws.potential, ws.grid, ws.scheme, &params, &ws.tol, ws.cfg.tol_box())?)
    } else {
        None
    };

    let mut reports = Vec::with_capacity(ids.len());
    for id in ids {
        let mut r = bounds::verify_with_classification(
            id,
            &ws.potential,
            ws.grid,
            ws.scheme,
            &constants,
            &params,
            &classification,
            &ws.tol,
        )?;
        r.convergence = convergence;
        reports.push(r);
    }

    let path = ws.out_dir.join("reports.json");
    report::write_text(&path, &report::reports_json(&ws.hash, &reports))?;
    print!("{}", report::verify_summary(&reports));
    println!("wrote {}", path.display());
    Ok(reports.iter().any(|r| !r.satisfied))
}

fn cmd_norms(common: &Common) -> Result<bool, Error> {
    let ws = load(common)?;
    let grid = match &ws.cfg.norms.phi_grid {
        Some(g) if !g.is_empty() => g.clone(),
        _ => require_angles(&ws)?,
    };
    let ps = ws.cfg.norms.p.clone().unwrap_or_else(|| vec![2.0]);
    let closed = ws.cfg.norms.closed_form.unwrap_or(true);

    let mut rows = Vec::new();
    for &p in &ps {
        let scan = norm_monotonicity_scan(&ws.potential, p, &grid)?;
        for pt in scan {
            let closed_form = match (closed, ws.potential.family()) {
                (true, dilatlab::Family::Gaussian { c }) => {
                    let unit = gaussian_norm_closed_form(*c, pt.phi, p)?;
                    Some(ws.potential.amplitude().abs() * unit)
                }
                _ => None,
            };
            rows.push(NormRow {
                phi: pt.phi,
                p,
                quadrature: pt.norm,
                closed_form,
                direction: pt.direction,
            });
        }
    }
    let path = ws.out_dir.join("norms.csv");
    report::write_text(&path, &report::norms_csv(&ws.hash, &rows))?;
    println!("wrote {}", path.display());
    Ok(false)
}

fn cmd_scan(common: &Common) -> Result<bool, Error> {
    let ws = load(common)?;
    let mut tags = ws.cfg.scan.theorems.clone();
    if tags.is_empty() {
        tags = ws.cfg.bounds.theorems.clone();
    }
    if tags.is_empty() {
        return Err(Error::validation("scan.theorems", "list the estimates to sweep"));
    }
    let ids: Vec<TheoremId> = tags
        .iter()
        .map(|t| TheoremId::from_tag(t))
        .collect::<Result<_, _>>()?;
    let constants = ws.cfg.build_constants()?;

    let mut rows = Vec::new();
    for id in ids {
        let uses_kappa = matches!(
            id,
            TheoremId::ConeComplement
                | TheoremId::LeftCone
                | TheoremId::UpperSector
                | TheoremId::LowerSector
        );
        if uses_kappa {
            let kappas = ws
                .cfg
                .scan
                .kappa
                .as_ref()
                .ok_or_else(|| Error::validation("scan.kappa", "this estimate sweeps kappa"))?;
            for &kappa in kappas {
                let params = BoundParams { kappa: Some(kappa), ..Default::default() };
                rows.push(ScanRow {
                    theorem: id.tag(),
                    parameter: "kappa",
                    value: kappa,
                    rhs: bounds::rhs(id, &constants, &ws.potential, &params)?,
                    alpha_required: bounds::alpha_required(id, &params)?,
                });
            }
        } else if id == TheoremId::ResonanceSector {
            let phis = ws
                .cfg
                .scan
                .phi
                .as_ref()
                .ok_or_else(|| Error::validation("scan.phi", "the resonance estimate sweeps phi"))?;
            for &phi in phis {
                let params = BoundParams { phi: Some(phi), ..Default::default() };
                rows.push(ScanRow {
                    theorem: id.tag(),
                    parameter: "phi",
                    value: phi,
                    rhs: bounds::rhs(id, &constants, &ws.potential, &params)?,
                    alpha_required: bounds::alpha_required(id, &params)?,
                });
            }
        } else {
            let params = BoundParams {
                kappa: ws.cfg.bounds.kappa,
                phi: ws.cfg.bounds.phi,
                phi_probe: None,
            };
            rows.push(ScanRow {
                theorem: id.tag(),
                parameter: "none",
                value: 0.0,
                rhs: bounds::rhs(id, &constants, &ws.potential, &params)?,
                alpha_required: bounds::alpha_required(id, &params)?,
            });
        }
    }

    let path = ws.out_dir.join("scan.csv");
    report::write_text(&path, &report::scan_csv(&ws.hash, &rows))?;
    println!("wrote {}", path.display());
    Ok(false)
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Lapack { .. }
        | Error::NoConvergence { .. }
        | Error::ToleranceNotMet { .. }
        | Error::ClassificationUnstable(_) => 3,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common) = match &cli.cmd {
        Cmd::Spectrum(c) => ("spectrum", c),
        Cmd::Trajectory(c) => ("trajectory", c),
        Cmd::Verify(c) => ("verify", c),
        Cmd::Norms(c) => ("norms", c),
        Cmd::Scan(c) => ("scan", c),
    };
    let outcome = match &cli.cmd {
        Cmd::Spectrum(c) => cmd_spectrum(c),
        Cmd::Trajectory(c) => cmd_trajectory(c),
        Cmd::Verify(c) => cmd_verify(c),
        Cmd::Norms(c) => cmd_norms(c),
        Cmd::Scan(c) => cmd_scan(c),
    };
    let _ = common.seedless;
    match outcome.with_context(|| format!("{name} failed")) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("one or more estimates were violated");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e
                .downcast_ref::<Error>()
                .map(exit_code_for)
                .unwrap_or(1);
            ExitCode::from(code)
        }
    }
}
