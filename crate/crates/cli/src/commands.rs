use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use nalgebra::UnitQuaternion;
use rayon::prelude::*;
use serde::Serialize;

use suslov::equilibria::stability_table;
use suslov::fields::{example2d, example2d_density, Density, UnitDensity, VectorField};
use suslov::flow::{
    integrate_suslov, measure_transport_check, reconstruct, sample_ellipsoid, sample_rng, suslov_equilibrium_targets,
    AttitudeTrajectory, AxisBox, CaptureTarget, IntegratorOptions, Trajectory, TransportReport,
};
use suslov::measures::{
    class_a_measure_exists, density_params, first_integral_f, max_divergence_on_unit_ball, pde_residual_sweep,
    plane_invariance_defect, positive_c1_measure_exists, ClassADensity, ClassADensityParams, ResidualSweep,
};
use suslov::system::{load_params, ParamsFileError};
use suslov::{SuslovParams, SuslovSystem, Vec3};

use crate::args::*;
use crate::output::{emit, json_string, num, Csv, Envelope, SCHEMA_VERSION};

/// Bound on `|<a, Ω + θ' E3>|` along a reconstruction.
pub const CONSTRAINT_TOLERANCE: f64 = 1e-9;
/// Bound on the plane-invariance defect relative to `|X|`.
pub const PLANE_TOLERANCE: f64 = 1e-10;
/// Sample box half-width for residual sweeps.
pub const SWEEP_HALF_WIDTH: f64 = 2.0;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Params(#[from] ParamsFileError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("integration failed: {0}")]
    Integration(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Integration(_) => 1,
            _ => 2,
        }
    }
}

/// Whether every declared check of a command held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub pass: bool,
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Analyze(a) => analyze(&a),
        Command::Simulate(a) => simulate(&a),
        Command::Portrait(a) => portrait(&a),
        Command::Verify(a) => verify(&a),
        Command::Transport(a) => transport(&a),
    }
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Invalid(format!(
            "--{name} must be positive and finite, got {v}"
        )))
    }
}

fn finite(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Invalid(format!("--{name} must be finite, got {v}")))
    }
}

fn path_string(p: &Path) -> String {
    p.display().to_string()
}

fn write_json<C: Serialize, B: Serialize>(
    out: Option<&Path>,
    command: &str,
    config: &C,
    body: B,
) -> Result<(), CliError> {
    let text = json_string(&Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        config,
        body,
    });
    emit(out, |w| w.write_all(text.as_bytes()))?;
    Ok(())
}

// ---------------------------------------------------------------- analyze

#[derive(Serialize)]
struct AnalyzeConfig {
    params_file: String,
    params: SuslovParams,
    format: Format,
}

#[derive(Serialize)]
struct AnalyzeBody<'a> {
    lambdas: [f64; 3],
    equilibria: &'a [suslov::equilibria::EquilibriumReport],
    positive_c1_measure_exists: bool,
    class_a_measure_exists: bool,
    class_a_density: Option<ClassADensityParams>,
}

pub fn analyze(args: &AnalyzeArgs) -> Result<Outcome, CliError> {
    let params = load_params(&args.params)?;
    let table = stability_table(&params).map_err(|e| CliError::Invalid(e.to_string()))?;
    let config = AnalyzeConfig {
        params_file: path_string(&args.params),
        params,
        format: args.format,
    };
    let pos = positive_c1_measure_exists(&params);
    let class_a = class_a_measure_exists(&params);
    match args.format {
        Format::Json => write_json(
            args.out.as_deref(),
            "analyze",
            &config,
            AnalyzeBody {
                lambdas: params.lambdas(),
                equilibria: &table,
                positive_c1_measure_exists: pos,
                class_a_measure_exists: class_a,
                class_a_density: density_params(&params).ok(),
            },
        )?,
        Format::Csv => {
            let mut csv = Csv::new(&[
                "index",
                "lambda",
                "v_1",
                "v_2",
                "v_3",
                "alpha",
                "beta",
                "classification",
                "source_sign",
                "sink_sign",
            ]);
            csv.provenance("analyze", &config)
                .comment(format!("positive_c1_measure_exists={pos}"))
                .comment(format!("class_a_measure_exists={class_a}"));
            for r in &table {
                let (kind, src, snk) = match r.classification {
                    suslov::equilibria::Classification::Saddle => ("saddle", String::new(), String::new()),
                    suslov::equilibria::Classification::LinearCenterPair => {
                        ("linear_center_pair", String::new(), String::new())
                    }
                    suslov::equilibria::Classification::SourceSinkPair { source_sign, sink_sign } => {
                        ("source_sink_pair", source_sign.to_string(), sink_sign.to_string())
                    }
                };
                csv.row(vec![
                    r.index.to_string(),
                    num(r.lambda),
                    num(r.direction[0]),
                    num(r.direction[1]),
                    num(r.direction[2]),
                    num(r.alpha),
                    num(r.beta),
                    kind.to_string(),
                    src,
                    snk,
                ]);
            }
            emit(args.out.as_deref(), |w| csv.write_to(w))?;
        }
    }
    Ok(Outcome { pass: true })
}

// ---------------------------------------------------------------- simulate

#[derive(Serialize)]
struct SimulateConfig {
    params_file: String,
    params: SuslovParams,
    omega0: [f64; 3],
    horizon: f64,
    rtol: f64,
    atol: f64,
    reconstruct: bool,
    project_energy: bool,
    energy_drift_bound: f64,
    constraint_tolerance: f64,
    format: Format,
}

#[derive(Serialize)]
struct SimulateBody<'a> {
    pass: bool,
    energy_drift: f64,
    flagged: bool,
    first_integral_drift: Option<f64>,
    max_constraint_residual: Option<f64>,
    trajectory: &'a Trajectory,
    energy: Vec<f64>,
    first_integral: Option<Vec<f64>>,
    attitude: Option<&'a AttitudeTrajectory>,
}

fn state(x: &[f64]) -> Vec3 {
    Vec3::new(x[0], x[1], x[2])
}

fn trajectory_csv(sys: &SuslovSystem, dp: Option<&ClassADensityParams>, traj: &Trajectory) -> Csv {
    let mut header = vec!["t", "Omega1", "Omega2", "Omega3", "E"];
    if dp.is_some() {
        header.push("F");
    }
    let mut csv = Csv::new(&header);
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let w = state(s);
        let mut row = vec![*t, w.x, w.y, w.z, sys.energy(&w)];
        if let Some(dp) = dp {
            row.push(first_integral_f(dp, &w));
        }
        csv.numeric_row(&row);
    }
    csv
}

pub fn simulate(args: &SimulateArgs) -> Result<Outcome, CliError> {
    let params = load_params(&args.params)?;
    let omega0: [f64; 3] = args
        .omega
        .as_slice()
        .try_into()
        .map_err(|_| CliError::Invalid(format!("--omega needs 3 components, got {}", args.omega.len())))?;
    for (i, v) in omega0.iter().enumerate() {
        finite(&format!("omega[{i}]"), *v)?;
    }
    finite("T", args.horizon)?;
    let opts = IntegratorOptions::with_tol(positive("tol", args.tol)?);
    let sys = SuslovSystem::new(params);
    let w0 = Vec3::from(omega0);
    let traj = integrate_suslov(&sys, &w0, args.horizon, &opts, args.project_energy)
        .map_err(|f| CliError::Integration(format!("{} (last time {})", f.error, f.last_time)))?;
    let dp = density_params(&params).ok();
    let attitude = if args.reconstruct {
        Some(
            reconstruct(&params, &traj, UnitQuaternion::identity(), 0.0)
                .map_err(|e| CliError::Invalid(e.to_string()))?,
        )
    } else {
        None
    };
    let max_constraint = attitude
        .as_ref()
        .map(|a| a.constraint_residual.iter().fold(0.0_f64, |m, r| m.max(r.abs())));
    let pass = !traj.flagged && max_constraint.is_none_or(|r| r <= CONSTRAINT_TOLERANCE);

    let config = SimulateConfig {
        params_file: path_string(&args.params),
        params,
        omega0,
        horizon: args.horizon,
        rtol: opts.rtol,
        atol: opts.atol,
        reconstruct: args.reconstruct,
        project_energy: args.project_energy,
        energy_drift_bound: traj.energy_drift_bound,
        constraint_tolerance: CONSTRAINT_TOLERANCE,
        format: args.format,
    };
    let energy_drift = traj.energy_drift.unwrap_or(0.0);
    let f_drift = dp
        .as_ref()
        .map(|dp| traj.relative_drift(|x| first_integral_f(dp, &state(x))));

    match args.format {
        Format::Json => write_json(
            args.out.as_deref(),
            "simulate",
            &config,
            SimulateBody {
                pass,
                energy_drift,
                flagged: traj.flagged,
                first_integral_drift: f_drift,
                max_constraint_residual: max_constraint,
                trajectory: &traj,
                energy: traj.states.iter().map(|s| sys.energy(&state(s))).collect(),
                first_integral: dp
                    .as_ref()
                    .map(|dp| traj.states.iter().map(|s| first_integral_f(dp, &state(s))).collect()),
                attitude: attitude.as_ref(),
            },
        )?,
        Format::Csv => {
            let mut header: Vec<&str> = vec!["t", "Omega1", "Omega2", "Omega3", "E"];
            if dp.is_some() {
                header.push("F");
            }
            if attitude.is_some() {
                header.extend(["q_w", "q_x", "q_y", "q_z", "theta", "constraint_residual"]);
            }
            let mut csv = Csv::new(&header);
            csv.provenance("simulate", &config)
                .comment(format!("energy_drift={}", num(energy_drift)))
                .comment(format!("flagged={}", traj.flagged))
                .comment(format!("pass={pass}"));
            if let Some(d) = f_drift {
                csv.comment(format!("first_integral_drift={}", num(d)));
            }
            for (k, (t, s)) in traj.times.iter().zip(&traj.states).enumerate() {
                let w = state(s);
                let mut row = vec![*t, w.x, w.y, w.z, sys.energy(&w)];
                if let Some(dp) = &dp {
                    row.push(first_integral_f(dp, &w));
                }
                if let Some(a) = &attitude {
                    row.extend(a.rotations[k]);
                    row.push(a.theta[k]);
                    row.push(a.constraint_residual[k]);
                }
                csv.numeric_row(&row);
            }
            emit(args.out.as_deref(), |w| csv.write_to(w))?;
        }
    }
    Ok(Outcome { pass })
}

// ---------------------------------------------------------------- portrait

#[derive(Serialize)]
struct PortraitConfig {
    params_file: String,
    params: SuslovParams,
    eta: f64,
    horizon: f64,
    rtol: f64,
    atol: f64,
    samples: usize,
    seed: u64,
    project_energy: bool,
}

#[derive(Serialize)]
struct RunEntry {
    file: Option<String>,
    steps: usize,
    energy_drift: Option<f64>,
    flagged: bool,
    error: Option<String>,
    last_time: Option<f64>,
}

#[derive(Serialize)]
struct PortraitEntry {
    index: usize,
    omega0: [f64; 3],
    forward: RunEntry,
    backward: RunEntry,
}

#[derive(Serialize)]
struct PortraitBody<'a> {
    pass: bool,
    failures: usize,
    equilibria: &'a [CaptureTarget],
    trajectories: Vec<PortraitEntry>,
}

pub fn portrait(args: &PortraitArgs) -> Result<Outcome, CliError> {
    let params = load_params(&args.params)?;
    let eta = positive("eta", args.eta)?;
    let horizon = positive("T", args.horizon)?;
    let opts = IntegratorOptions::with_tol(positive("tol", args.tol)?);
    if args.samples == 0 {
        return Err(CliError::Invalid("--samples must be at least 1".into()));
    }
    let sys = SuslovSystem::new(params);
    let dp = density_params(&params).ok();
    let initial = sample_ellipsoid(&sys, eta, args.samples, args.seed);
    let runs: Vec<_> = initial
        .par_iter()
        .map(|w| [horizon, -horizon].map(|t| integrate_suslov(&sys, w, t, &opts, args.project_energy)))
        .collect();

    let config = PortraitConfig {
        params_file: path_string(&args.params),
        params,
        eta,
        horizon,
        rtol: opts.rtol,
        atol: opts.atol,
        samples: args.samples,
        seed: args.seed,
        project_energy: args.project_energy,
    };
    fs::create_dir_all(&args.out)?;
    let mut entries = Vec::with_capacity(runs.len());
    let mut failures = 0;
    for (k, (w, pair)) in initial.iter().zip(runs).enumerate() {
        let mut dir_entries = Vec::with_capacity(2);
        for (run, forward) in pair.into_iter().zip([true, false]) {
            let tag = if forward { "fwd" } else { "bwd" };
            dir_entries.push(match run {
                Ok(traj) => {
                    let path = portrait_file(&args.out, k, forward);
                    let mut csv = trajectory_csv(&sys, dp.as_ref(), &traj);
                    csv.provenance("portrait", &config)
                        .comment(format!("index={k}"))
                        .comment(format!("direction={tag}"));
                    emit(Some(&path), |out| csv.write_to(out))?;
                    RunEntry {
                        file: path.file_name().map(|n| n.to_string_lossy().into_owned()),
                        steps: traj.times.len() - 1,
                        energy_drift: traj.energy_drift,
                        flagged: traj.flagged,
                        error: None,
                        last_time: None,
                    }
                }
                Err(f) => {
                    failures += 1;
                    eprintln!("trajectory {k} ({tag}) failed at t = {}: {}", f.last_time, f.error);
                    RunEntry {
                        file: None,
                        steps: 0,
                        energy_drift: None,
                        flagged: true,
                        error: Some(f.error.to_string()),
                        last_time: Some(f.last_time),
                    }
                }
            });
        }
        let backward = dir_entries.pop().expect("two runs");
        let forward = dir_entries.pop().expect("two runs");
        entries.push(PortraitEntry {
            index: k,
            omega0: [w.x, w.y, w.z],
            forward,
            backward,
        });
    }
    let targets = suslov_equilibrium_targets(&sys, eta);
    let pass = failures == 0;
    write_json(
        Some(&args.out.join("manifest.json")),
        "portrait",
        &config,
        PortraitBody {
            pass,
            failures,
            equilibria: &targets,
            trajectories: entries,
        },
    )?;
    Ok(Outcome { pass })
}

// ---------------------------------------------------------------- verify

#[derive(Serialize)]
struct VerifyConfig {
    params_file: Option<String>,
    fixture: Option<Fixture>,
    params: Option<SuslovParams>,
    samples: usize,
    seed: u64,
    tolerance: f64,
    sample_box_half_width: f64,
}

#[derive(Serialize)]
struct PlaneCheck {
    points: usize,
    max_relative_defect: f64,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize, Default)]
struct VerifyBody {
    params: Option<SuslovParams>,
    claim: String,
    pass: bool,
    class_a_measure_exists: Option<bool>,
    positive_c1_measure_exists: Option<bool>,
    density: Option<ClassADensityParams>,
    sample_count: usize,
    skipped: usize,
    max_residual: Option<f64>,
    tolerance: f64,
    plane_invariance: Option<PlaneCheck>,
    divergence_witness: Option<f64>,
}

fn sweep_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let cube = AxisBox::cube(dim, -SWEEP_HALF_WIDTH, SWEEP_HALF_WIDTH);
    (0..count)
        .map(|k| cube.sample(&mut sample_rng(seed, k as u64)))
        .collect()
}

fn apply_sweep(body: &mut VerifyBody, sweep: &ResidualSweep) {
    body.sample_count = sweep.sample_count;
    body.skipped = sweep.skipped;
    body.max_residual = Some(sweep.max_residual);
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let tol = positive("tol", args.tol)?;
    if args.samples == 0 {
        return Err(CliError::Invalid("--samples must be at least 1".into()));
    }
    let params = args.params.as_ref().map(load_params).transpose()?;
    let config = VerifyConfig {
        params_file: args.params.as_deref().map(path_string),
        fixture: args.fixture,
        params,
        samples: args.samples,
        seed: args.seed,
        tolerance: tol,
        sample_box_half_width: SWEEP_HALF_WIDTH,
    };
    let mut body = VerifyBody {
        params,
        tolerance: tol,
        ..Default::default()
    };
    match params {
        None => {
            let sweep = pde_residual_sweep(
                &example2d(),
                &example2d_density(),
                &sweep_points(2, args.samples, args.seed),
                tol,
            );
            body.claim = "div(M X) = 0 for X = (-x1, 2 x2), M = |x1|^5 x2^2".into();
            apply_sweep(&mut body, &sweep);
            body.pass = sweep.pass;
        }
        Some(p) if p.a2 == 0.0 => {
            let sys = SuslovSystem::new(p);
            let density = ClassADensity::new(&p).map_err(|e| CliError::Invalid(e.to_string()))?;
            let sweep = pde_residual_sweep(&sys, &density, &sweep_points(3, args.samples, args.seed), tol);
            let plane = plane_check(
                &p,
                &density.dp,
                (args.samples / 10).max(1),
                args.seed,
                args.samples as u64,
            );
            body.claim = "div(M X) = 0 for the class-A density; planes Omega1 = xi_pm Omega3 invariant".into();
            body.class_a_measure_exists = Some(class_a_measure_exists(&p));
            body.positive_c1_measure_exists = Some(positive_c1_measure_exists(&p));
            body.density = Some(density.dp);
            apply_sweep(&mut body, &sweep);
            body.pass = sweep.pass && plane.pass;
            body.plane_invariance = Some(plane);
        }
        Some(p) => {
            let witness = max_divergence_on_unit_ball(&p, 10);
            body.claim = "no class-A invariant density (a2 != 0); div X is not identically zero".into();
            body.class_a_measure_exists = Some(class_a_measure_exists(&p));
            body.positive_c1_measure_exists = Some(positive_c1_measure_exists(&p));
            body.divergence_witness = Some(witness);
            body.pass = witness > 1e-6 && !class_a_measure_exists(&p) && !positive_c1_measure_exists(&p);
        }
    }
    let pass = body.pass;
    write_json(args.out.as_deref(), "verify", &config, body)?;
    Ok(Outcome { pass })
}

/// Plane-invariance defects at `count` seeded points alternating between `π+` and `π-`.
fn plane_check(p: &SuslovParams, dp: &ClassADensityParams, count: usize, seed: u64, stream_offset: u64) -> PlaneCheck {
    let sys = SuslovSystem::new(*p);
    let cube = AxisBox::cube(3, -SWEEP_HALF_WIDTH, SWEEP_HALF_WIDTH);
    let mut max = 0.0_f64;
    for k in 0..count {
        let x = cube.sample(&mut sample_rng(seed, stream_offset + k as u64));
        let xi = if k % 2 == 0 { dp.xi_plus } else { dp.xi_minus };
        let w = Vec3::new(xi * x[2], x[1], x[2]);
        let speed = sys.field(&w).norm();
        let defect = plane_invariance_defect(p, dp, &w).expect("point constructed on a plane");
        max = max.max(if speed > 0.0 { defect / speed } else { defect });
    }
    PlaneCheck {
        points: count,
        max_relative_defect: max,
        tolerance: PLANE_TOLERANCE,
        pass: max <= PLANE_TOLERANCE,
    }
}

// ---------------------------------------------------------------- transport

#[derive(Serialize)]
struct TransportConfig {
    params_file: Option<String>,
    fixture: Option<Fixture>,
    params: Option<SuslovParams>,
    density: DensityChoice,
    lower: Vec<f64>,
    upper: Vec<f64>,
    horizon: f64,
    rtol: f64,
    atol: f64,
    samples: usize,
    seed: u64,
}

#[derive(Serialize)]
struct TransportBody {
    pass: bool,
    report: Option<TransportReport>,
    error: Option<String>,
    failed_sample: Option<usize>,
    partial: Option<Box<TransportReport>>,
}

fn resolve_box(args: &TransportArgs, dim: usize, default: (f64, f64)) -> Result<AxisBox, CliError> {
    let lower = args.lower.clone().unwrap_or_else(|| vec![default.0; dim]);
    let upper = args.upper.clone().unwrap_or_else(|| vec![default.1; dim]);
    if lower.len() != dim || upper.len() != dim {
        return Err(CliError::Invalid(format!("box corners need {dim} components")));
    }
    if lower.iter().chain(&upper).any(|v| !v.is_finite()) || lower.iter().zip(&upper).any(|(l, u)| l >= u) {
        return Err(CliError::Invalid(
            "box corners must be finite with lower < upper".into(),
        ));
    }
    Ok(AxisBox::new(lower, upper))
}

pub fn transport(args: &TransportArgs) -> Result<Outcome, CliError> {
    let horizon = finite("T", args.horizon)?;
    let opts = IntegratorOptions::with_tol(positive("tol", args.tol)?);
    if args.samples < 2 {
        return Err(CliError::Invalid("--samples must be at least 2".into()));
    }
    let params = args.params.as_ref().map(load_params).transpose()?;

    let sys;
    let class_a;
    let unit;
    let planar_density;
    let planar_field;
    let (field, density, region): (&dyn VectorField, &dyn Density, AxisBox) = match params {
        None => {
            planar_field = example2d();
            let region = resolve_box(args, 2, (1.0, 2.0))?;
            let d: &dyn Density = match args.density {
                DensityChoice::ClassA => {
                    planar_density = example2d_density();
                    &planar_density
                }
                DensityChoice::Unit => {
                    unit = UnitDensity { dim: 2 };
                    &unit
                }
            };
            (&planar_field, d, region)
        }
        Some(p) => {
            sys = SuslovSystem::new(p);
            let region = resolve_box(args, 3, (0.8, 1.2))?;
            let d: &dyn Density = match args.density {
                DensityChoice::ClassA => {
                    class_a = ClassADensity::new(&p).map_err(|e| CliError::Invalid(format!("class-a density: {e}")))?;
                    &class_a
                }
                DensityChoice::Unit => {
                    unit = UnitDensity { dim: 3 };
                    &unit
                }
            };
            (&sys, d, region)
        }
    };

    let config = TransportConfig {
        params_file: args.params.as_deref().map(path_string),
        fixture: args.fixture,
        params,
        density: args.density,
        lower: region.lower.clone(),
        upper: region.upper.clone(),
        horizon,
        rtol: opts.rtol,
        atol: opts.atol,
        samples: args.samples,
        seed: args.seed,
    };
    let body = match measure_transport_check(field, density, &region, horizon, args.samples, args.seed, &opts) {
        Ok(report) => TransportBody {
            pass: report.pass,
            report: Some(report),
            error: None,
            failed_sample: None,
            partial: None,
        },
        Err(f) => TransportBody {
            pass: false,
            report: None,
            error: Some(f.failure.to_string()),
            failed_sample: Some(f.failed_sample),
            partial: f.partial,
        },
    };
    let pass = body.pass;
    write_json(args.out.as_deref(), "transport", &config, body)?;
    Ok(Outcome { pass })
}

/// Path of one portrait trajectory file inside the output directory.
pub fn portrait_file(dir: &Path, index: usize, forward: bool) -> PathBuf {
    dir.join(format!("traj_{index:04}_{}.csv", if forward { "fwd" } else { "bwd" }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn portrait_file_names() {
        assert_eq!(
            portrait_file(Path::new("d"), 7, true),
            PathBuf::from("d/traj_0007_fwd.csv")
        );
        assert_eq!(
            portrait_file(Path::new("d"), 12, false),
            PathBuf::from("d/traj_0012_bwd.csv")
        );
    }

    #[test]
    fn validation_messages() {
        assert!(positive("eta", 0.0).is_err());
        assert!(positive("eta", f64::NAN).is_err());
        assert_eq!(positive("eta", 2.0).unwrap(), 2.0);
        assert!(finite("T", f64::INFINITY).is_err());
        assert_eq!(CliError::Invalid(String::new()).exit_code(), 2);
        assert_eq!(CliError::Integration(String::new()).exit_code(), 1);
    }
}
