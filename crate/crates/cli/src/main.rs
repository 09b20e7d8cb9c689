use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use qsl::compare::{compare_scenario, ORACLE_TOL};
use qsl::output::{write_csv, write_json, Series};
use qsl::schema::load_scenario;
use qsl::{exit_code, quadrature_steps, Failure};
use qsl_core::bounds::{evaluate_bounds, AppliesTo};
use qsl_core::lindblad::ReferenceState;
use qsl_core::liouville::skew_spectral_norm;
use qsl_core::propagator::Method;
use qsl_core::scenarios::{build_catalog, catalog_names, fixture_names, Scenario};

/// Purity speed limits for Lindblad dynamics: propagate scenarios, evaluate
/// bounds, and verify both against each other.
#[derive(Parser)]
#[command(name = "qsl", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Exponentiate the Liouville superoperator.
    Superop,
    /// Fourth-order Runge-Kutta on the master equation.
    Rk4,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Superop => Method::SuperopExpm,
            MethodArg::Rk4 => Method::DirectRk4,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Propagate a scenario and write the trajectory table.
    Run {
        /// Catalog name or path to a scenario JSON file.
        scenario: String,
        /// Output file path.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        /// Initial-state seed; repeat for one column group per seed.
        #[arg(long = "seed")]
        seeds: Vec<u64>,
        /// Scenario override key=value; repeatable.
        #[arg(long = "set", value_parser = parse_kv)]
        sets: Vec<(String, String)>,
        #[arg(long, value_enum, default_value = "superop")]
        method: MethodArg,
    },
    /// Print the bound report for a scenario as JSON.
    Bounds {
        scenario: String,
        /// Interval start (defaults to the scenario grid start).
        #[arg(long)]
        from: Option<f64>,
        /// Interval end (defaults to the scenario grid end).
        #[arg(long)]
        to: Option<f64>,
        #[arg(long = "set", value_parser = parse_kv)]
        sets: Vec<(String, String)>,
    },
    /// Propagate through both numerical paths and verify every bound;
    /// nonzero exit on disagreement or violation.
    Compare {
        /// Catalog name or scenario file; omit with --all-catalog.
        scenario: Option<String>,
        /// Compare every built-in catalog scenario.
        #[arg(long)]
        all_catalog: bool,
        #[arg(long = "set", value_parser = parse_kv)]
        sets: Vec<(String, String)>,
    },
    /// Cross-product parameter sweep; one output file per point plus an index.
    Sweep {
        scenario: String,
        /// Sweep dimension key=v1,v2,... (single values pin a parameter).
        #[arg(long = "set", value_parser = parse_kv)]
        sets: Vec<(String, String)>,
        /// Initial-state seeds as an additional sweep dimension.
        #[arg(long = "seed")]
        seeds: Vec<u64>,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long, value_enum, default_value = "superop")]
        method: MethodArg,
    },
    /// List built-in scenarios and fixtures.
    Catalog,
}

fn parse_kv(raw: &str) -> Result<(String, String), String> {
    match raw.split_once('=') {
        Some((k, v)) if !k.is_empty() => Ok((k.to_string(), v.to_string())),
        _ => Err(format!("expected key=value, got '{raw}'")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run {
            scenario,
            out,
            format,
            seeds,
            sets,
            method,
        } => cmd_run(&scenario, &out, format, &seeds, &sets, method.into()),
        Command::Bounds {
            scenario,
            from,
            to,
            sets,
        } => cmd_bounds(&scenario, from, to, &sets),
        Command::Compare {
            scenario,
            all_catalog,
            sets,
        } => cmd_compare(scenario.as_deref(), all_catalog, &sets),
        Command::Sweep {
            scenario,
            sets,
            seeds,
            out_dir,
            format,
            method,
        } => cmd_sweep(&scenario, &sets, &seeds, &out_dir, format, method.into()),
        Command::Catalog => {
            cmd_catalog();
            Ok(())
        }
    }
}

fn cmd_run(
    scenario_arg: &str,
    out: &Path,
    format: FormatArg,
    seeds: &[u64],
    sets: &[(String, String)],
    method: Method,
) -> Result<(), Failure> {
    let runs: Vec<(String, Scenario)> = if seeds.is_empty() {
        vec![(String::new(), load_scenario(scenario_arg, sets, None)?)]
    } else {
        seeds
            .iter()
            .map(|&seed| {
                Ok((
                    format!("_s{seed}"),
                    load_scenario(scenario_arg, sets, Some(seed))?,
                ))
            })
            .collect::<Result<_, Failure>>()?
    };

    let name = runs[0].1.name.clone();
    let mut trajectories = Vec::with_capacity(runs.len());
    for (suffix, scenario) in &runs {
        let traj = scenario.run(method).map_err(Failure::from_core)?;
        trajectories.push((suffix.clone(), traj));
    }
    let series: Vec<Series<'_>> = trajectories
        .iter()
        .map(|(suffix, traj)| Series {
            suffix: suffix.clone(),
            trajectory: traj,
        })
        .collect();

    let file = fs::File::create(out).map_err(Failure::io)?;
    let mut writer = std::io::BufWriter::new(file);
    match format {
        FormatArg::Csv => write_csv(&mut writer, &series)?,
        FormatArg::Json => write_json(&mut writer, &name, &series)?,
    }
    writer.flush().map_err(Failure::io)?;
    Ok(())
}

#[derive(Serialize)]
struct BoundsOut {
    scenario: String,
    interval: [f64; 2],
    hilbert_hs: f64,
    hilbert_sp: f64,
    liouville: f64,
    /// Instantaneous ‖𝓗 - 𝓗†‖sp at the interval start.
    skew_spectral_norm: f64,
    applies_to: &'static str,
    quadrature_steps: usize,
    /// liouville <= hilbert_sp <= hilbert_hs
    ordering_ok: bool,
}

fn cmd_bounds(
    scenario_arg: &str,
    from: Option<f64>,
    to: Option<f64>,
    sets: &[(String, String)],
) -> Result<(), Failure> {
    let scenario = load_scenario(scenario_arg, sets, None)?;
    let t0 = from.unwrap_or_else(|| scenario.grid.t_start());
    let t1 = to.unwrap_or_else(|| scenario.grid.t_end());
    let steps = quadrature_steps();
    let applies_to = match scenario.reference {
        ReferenceState::Origin => AppliesTo::Purity,
        _ => AppliesTo::PurityDeviation,
    };
    let report = evaluate_bounds(&scenario.generator, t0, t1, steps, applies_to)
        .map_err(Failure::from_core)?;
    let out = BoundsOut {
        scenario: scenario.name.clone(),
        interval: [t0, t1],
        hilbert_hs: report.hilbert_hs,
        hilbert_sp: report.hilbert_sp,
        liouville: report.liouville,
        skew_spectral_norm: skew_spectral_norm(&scenario.generator, t0)
            .map_err(Failure::from_core)?,
        applies_to: match applies_to {
            AppliesTo::Purity => "purity",
            AppliesTo::PurityDeviation => "purity-deviation",
        },
        quadrature_steps: report.quadrature_steps,
        ordering_ok: report.ordering_holds(1e-9),
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&out).map_err(Failure::io)?
    );
    Ok(())
}

fn cmd_compare(
    scenario_arg: Option<&str>,
    all_catalog: bool,
    sets: &[(String, String)],
) -> Result<(), Failure> {
    let scenarios: Vec<Scenario> = if all_catalog {
        catalog_names()
            .iter()
            .map(|name| build_catalog(name, sets).map_err(Failure::from_core))
            .collect::<Result<_, _>>()?
    } else {
        let arg = scenario_arg
            .ok_or_else(|| Failure::schema("compare needs a scenario or --all-catalog"))?;
        vec![load_scenario(arg, sets, None)?]
    };

    let mut any_mismatch = false;
    let mut any_violation = false;
    for scenario in &scenarios {
        let report = compare_scenario(scenario)?;
        let verdict = if report.oracle_mismatch {
            "ORACLE MISMATCH"
        } else if report.bound_violation {
            "BOUND VIOLATION"
        } else {
            "ok"
        };
        println!(
            "{:<20} path discrepancy {:.3e} (gate {ORACLE_TOL:.0e})  worst bound slack {:+.3e}  {verdict}",
            report.name, report.max_discrepancy, report.worst_bound_slack
        );
        any_mismatch |= report.oracle_mismatch;
        any_violation |= report.bound_violation;
    }

    if any_mismatch {
        Err(Failure {
            code: exit_code::ORACLE_MISMATCH,
            message: "propagation paths disagree beyond tolerance".into(),
        })
    } else if any_violation {
        Err(Failure {
            code: exit_code::BOUND_VIOLATION,
            message: "a declared bound was violated".into(),
        })
    } else {
        Ok(())
    }
}

#[derive(Serialize)]
struct SweepIndex {
    scenario: String,
    points: Vec<SweepPoint>,
}

#[derive(Serialize, Clone)]
struct SweepPoint {
    index: usize,
    params: Vec<(String, String)>,
    file: String,
}

fn cmd_sweep(
    scenario_arg: &str,
    sets: &[(String, String)],
    seeds: &[u64],
    out_dir: &Path,
    format: FormatArg,
    method: Method,
) -> Result<(), Failure> {
    fs::create_dir_all(out_dir).map_err(Failure::io)?;

    // Each --set key=v1,v2,... is one sweep dimension; --seed values form an
    // extra dimension named `seed`.
    let mut dims: Vec<(String, Vec<String>)> = sets
        .iter()
        .map(|(k, v)| (k.clone(), v.split(',').map(str::to_string).collect()))
        .collect();
    if !seeds.is_empty() {
        dims.push((
            "seed".to_string(),
            seeds.iter().map(u64::to_string).collect(),
        ));
    }

    let mut points: Vec<Vec<(String, String)>> = Vec::new();
    if !dims.is_empty() {
        let mut cursor = vec![0usize; dims.len()];
        loop {
            points.push(
                dims.iter()
                    .zip(&cursor)
                    .map(|((k, vs), &i)| (k.clone(), vs[i].clone()))
                    .collect(),
            );
            let mut axis = dims.len();
            loop {
                if axis == 0 {
                    break;
                }
                axis -= 1;
                cursor[axis] += 1;
                if cursor[axis] < dims[axis].1.len() {
                    break;
                }
                cursor[axis] = 0;
                if axis == 0 {
                    cursor.clear();
                    break;
                }
            }
            if cursor.is_empty() {
                break;
            }
        }
    }

    let ext = match format {
        FormatArg::Csv => "csv",
        FormatArg::Json => "json",
    };
    let index_points: Vec<SweepPoint> = points
        .iter()
        .enumerate()
        .map(|(index, params)| SweepPoint {
            index,
            params: params.clone(),
            file: format!("point_{index:03}.{ext}"),
        })
        .collect();

    index_points
        .par_iter()
        .map(|point| -> Result<(), Failure> {
            let scenario = load_scenario(scenario_arg, &points[point.index], None)?;
            let traj = scenario.run(method).map_err(Failure::from_core)?;
            let series = [Series {
                suffix: String::new(),
                trajectory: &traj,
            }];
            let file = fs::File::create(out_dir.join(&point.file)).map_err(Failure::io)?;
            let mut writer = std::io::BufWriter::new(file);
            match format {
                FormatArg::Csv => write_csv(&mut writer, &series)?,
                FormatArg::Json => write_json(&mut writer, &scenario.name, &series)?,
            }
            writer.flush().map_err(Failure::io)
        })
        .collect::<Result<Vec<_>, Failure>>()?;

    let index = SweepIndex {
        scenario: scenario_arg.to_string(),
        points: index_points,
    };
    let file = fs::File::create(out_dir.join("index.json")).map_err(Failure::io)?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(file), &index).map_err(Failure::io)?;
    Ok(())
}

fn cmd_catalog() {
    println!("built-in scenarios:");
    let blurbs = [
        (
            "fig1",
            "single-qubit dephasing (A = sigma_z/2), H variants text|figure",
        ),
        (
            "fig2",
            "driven qubit chain with local dephasing (m, v0, gamma, seed)",
        ),
        (
            "fig3",
            "two-qubit decorrelator, state family sweepable via lambda",
        ),
        (
            "ghz_local",
            "per-site sigma_z dephasing erasing GHZ correlations (m, gamma)",
        ),
        (
            "ghz_global",
            "basis-projector dephasing on an N-level system (n, gamma, seed)",
        ),
        (
            "nlevel_dephasing",
            "unitary diagonal dephasing (n, gamma, phase_seed, seed)",
        ),
        (
            "decorrelator",
            "same dynamics as fig3 (family, lambda, gamma, seed)",
        ),
    ];
    for name in catalog_names() {
        let blurb = blurbs
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, b)| *b)
            .unwrap_or("");
        println!("  {name:<20} {blurb}");
    }
    println!("negative-control fixtures (compare is expected to fail):");
    println!(
        "  {:<20} corrupted superoperator sign; compare exits 4",
        fixture_names()[0]
    );
    println!(
        "  {:<20} dynamics outrun the declared prefactor; compare exits 5",
        fixture_names()[1]
    );
}
