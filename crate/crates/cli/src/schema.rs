//! Scenario JSON schema and its translation into built scenarios.
//!
//! A scenario document is a single object:
//!
//! ```json
//! {
//!   "name": "my-scenario",
//!   "dim": 2,
//!   "hamiltonian": [[[1,0],[0,0]],[[0,0],[-1,0]]],
//!   "jump_ops": [{"builder": "pauli_string", "params": {"string": "Z", "scale": 0.5}}],
//!   "prefactor": {"name": "constant", "params": {"value": 1.0}},
//!   "initial_state": {"builder": "random_pure", "params": {"dim": 2, "seed": 1}},
//!   "reference_state": {"kind": "maximally_mixed"},
//!   "grid": {"t_start": 0.0, "t_end": 5.0, "steps": 1000},
//!   "metadata": {"note": "free-form"}
//! }
//! ```
//!
//! Matrices are arrays of rows of `[re, im]` pairs. Wherever a matrix is
//! accepted, a named builder `{"builder": "...", "params": {...}}` may stand
//! in. Builders: `ghz`, `werner`, `bell_diagonal_mix`, `random_pure`,
//! `random_density`, `maximally_mixed`, `pauli_string`, `matrix_unit`.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::Value;

use qsl_core::lindblad::{DensityMatrix, LindbladGenerator, Prefactor, ReferenceState};
use qsl_core::matrix::{ComplexMatrix, C64};
use qsl_core::propagator::TimeGrid;
use qsl_core::scenarios::{
    bell_diagonal_mix_state, build_catalog, ghz_state, werner_state, Scenario,
};

use crate::Failure;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    name: String,
    dim: usize,
    #[serde(default)]
    hamiltonian: Option<OperatorSpec>,
    #[serde(default)]
    jump_ops: Vec<OperatorSpec>,
    #[serde(default)]
    prefactor: Option<PrefactorSpec>,
    initial_state: OperatorSpec,
    #[serde(default)]
    reference_state: Option<ReferenceSpec>,
    #[serde(default)]
    grid: Option<GridSpec>,
    #[serde(default)]
    metadata: BTreeMap<String, Value>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OperatorSpec {
    Builder {
        builder: String,
        #[serde(default)]
        params: Value,
    },
    Matrix(Vec<Vec<[f64; 2]>>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PrefactorSpec {
    name: String,
    #[serde(default)]
    params: Value,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReferenceSpec {
    kind: String,
    #[serde(default)]
    state: Option<OperatorSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSpec {
    #[serde(default)]
    t_start: Option<f64>,
    #[serde(default = "default_t_end")]
    t_end: f64,
    #[serde(default = "default_steps")]
    steps: usize,
}

fn default_t_end() -> f64 {
    5.0
}

fn default_steps() -> usize {
    1000
}

fn schema_err(msg: impl std::fmt::Display) -> Failure {
    Failure::schema(format!("scenario schema: {msg}"))
}

fn matrix_from_rows(rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix, Failure> {
    let r = rows.len();
    let c = rows.first().map(|row| row.len()).unwrap_or(0);
    let mut entries = Vec::with_capacity(r * c);
    for row in rows {
        if row.len() != c {
            return Err(schema_err("ragged matrix rows"));
        }
        entries.extend(row.iter().map(|&[re, im]| C64::new(re, im)));
    }
    ComplexMatrix::new(r, c, entries).map_err(schema_err)
}

fn builder_params<T: serde::de::DeserializeOwned>(
    builder: &str,
    params: &Value,
) -> Result<T, Failure> {
    let value = if params.is_null() {
        Value::Object(serde_json::Map::new())
    } else {
        params.clone()
    };
    serde_json::from_value(value)
        .map_err(|e| schema_err(format!("builder '{builder}' params: {e}")))
}

fn build_operator(spec: &OperatorSpec) -> Result<ComplexMatrix, Failure> {
    match spec {
        OperatorSpec::Matrix(rows) => matrix_from_rows(rows),
        OperatorSpec::Builder { builder, params } => match builder.as_str() {
            "ghz" => {
                #[derive(Deserialize)]
                #[serde(deny_unknown_fields)]
                struct P {
                    qubits: usize,
                    #[serde(default)]
                    bits: Option<Vec<u8>>,
                }
                let p: P = builder_params(builder, params)?;
                let bits = p.bits.unwrap_or_else(|| vec![0; p.qubits]);
                Ok(ghz_state(p.qubits, &bits)
                    .map_err(schema_err)?
                    .into_matrix())
            }
            "werner" => {
                #[derive(Deserialize)]
                #[serde(deny_unknown_fields)]
                struct P {
                    lambda: f64,
                }
                let p: P = builder_params(builder, params)?;
                Ok(werner_state(p.lambda).map_err(schema_err)?.into_matrix())
            }
            "bell_diagonal_mix" => {
                #[derive(Deserialize)]
                #[serde(deny_unknown_fields)]
                struct P {
                    lambda: f64,
                }
                let p: P = builder_params(builder, params)?;
                Ok(bell_diagonal_mix_state(p.lambda)
                    .map_err(schema_err)?
                    .into_matrix())
            }
            "random_pure" => {
                #[derive(Deserialize)]
                #[serde(deny_unknown_fields)]
                struct P {
                    dim: usize,
                    seed: u64,
                }
                let p: P = builder_params(builder, params)?;
                Ok(qsl_core::lindblad::random_pure_state(p.dim, p.seed).into_matrix())
            }
            "random_density" => {
                #[derive(Deserialize)]
                #[serde(deny_unknown_fields)]
                struct P {
                    dim: usize,
                    seed: u64,
                }
                let p: P = builder_params(builder, params)?;
                Ok(qsl_core::lindblad::random_density(p.dim, p.seed).into_matrix())
            }
            "maximally_mixed" => {
                #[derive(Deserialize)]
                #[serde(deny_unknown_fields)]
                struct P {
                    dim: usize,
                }
                let p: P = builder_params(builder, params)?;
                Ok(DensityMatrix::maximally_mixed(p.dim).into_matrix())
            }
            "pauli_string" => {
                #[derive(Deserialize)]
                #[serde(deny_unknown_fields)]
                struct P {
                    string: String,
                    #[serde(default)]
                    scale: Option<f64>,
                }
                let p: P = builder_params(builder, params)?;
                let m = qsl_core::ops::pauli_string(&p.string).map_err(schema_err)?;
                Ok(m.scale_re(p.scale.unwrap_or(1.0)))
            }
            "matrix_unit" => {
                #[derive(Deserialize)]
                #[serde(deny_unknown_fields)]
                struct P {
                    dim: usize,
                    row: usize,
                    col: usize,
                    #[serde(default)]
                    scale: Option<f64>,
                }
                let p: P = builder_params(builder, params)?;
                let m = qsl_core::ops::matrix_unit(p.dim, p.row, p.col).map_err(schema_err)?;
                Ok(m.scale_re(p.scale.unwrap_or(1.0)))
            }
            other => Err(schema_err(format!("unknown builder '{other}'"))),
        },
    }
}

fn build_prefactor(spec: &PrefactorSpec) -> Result<Prefactor, Failure> {
    match spec.name.as_str() {
        "constant" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                #[serde(default = "one")]
                value: f64,
            }
            fn one() -> f64 {
                1.0
            }
            let p: P = builder_params("constant", &spec.params)?;
            if p.value < 0.0 {
                return Err(schema_err("prefactor value must be non-negative"));
            }
            Ok(Prefactor::Constant(p.value))
        }
        "ramp" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                base: f64,
                slope: f64,
            }
            let p: P = builder_params("ramp", &spec.params)?;
            Ok(Prefactor::TimeDependent(Box::new(move |t| {
                p.base + p.slope * t
            })))
        }
        other => Err(schema_err(format!(
            "unknown prefactor '{other}' (expected constant|ramp)"
        ))),
    }
}

/// Deserialize and build a scenario from a JSON value.
pub fn scenario_from_value(value: Value) -> Result<Scenario, Failure> {
    let doc: ScenarioDoc = serde_json::from_value(value).map_err(|e| schema_err(e.to_string()))?;
    let dim = doc.dim;
    if dim == 0 {
        return Err(schema_err("dim must be positive"));
    }

    let check_dim = |m: &ComplexMatrix, what: &str| -> Result<(), Failure> {
        if m.rows() != dim || m.cols() != dim {
            return Err(schema_err(format!(
                "{what} has shape {}x{}, expected {dim}x{dim}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(())
    };

    let hamiltonian = match &doc.hamiltonian {
        Some(spec) => {
            let h = build_operator(spec)?;
            check_dim(&h, "hamiltonian")?;
            h
        }
        None => ComplexMatrix::zeros(dim, dim),
    };

    let mut jumps = Vec::with_capacity(doc.jump_ops.len());
    for (i, spec) in doc.jump_ops.iter().enumerate() {
        let a = build_operator(spec)?;
        check_dim(&a, &format!("jump_ops[{i}]"))?;
        jumps.push(a);
    }

    let mut generator = LindbladGenerator::new(hamiltonian, jumps).map_err(schema_err)?;
    if let Some(spec) = &doc.prefactor {
        generator = generator.with_prefactor(build_prefactor(spec)?);
    }

    let initial_matrix = build_operator(&doc.initial_state)?;
    check_dim(&initial_matrix, "initial_state")?;
    let initial = DensityMatrix::new(initial_matrix).map_err(schema_err)?;

    let reference = match &doc.reference_state {
        None => ReferenceState::Origin,
        Some(spec) => match spec.kind.as_str() {
            "origin" => ReferenceState::Origin,
            "maximally_mixed" | "maximally-mixed" => ReferenceState::MaximallyMixed,
            "explicit" => {
                let state_spec = spec
                    .state
                    .as_ref()
                    .ok_or_else(|| schema_err("explicit reference needs a 'state'"))?;
                let m = build_operator(state_spec)?;
                check_dim(&m, "reference_state.state")?;
                ReferenceState::Explicit(DensityMatrix::new(m).map_err(schema_err)?)
            }
            other => {
                return Err(schema_err(format!(
                    "unknown reference kind '{other}' (origin|maximally_mixed|explicit)"
                )))
            }
        },
    };

    let grid = match &doc.grid {
        None => TimeGrid::default_grid(),
        Some(g) => TimeGrid::new(g.t_start.unwrap_or(0.0), g.t_end, g.steps).map_err(schema_err)?,
    };

    let metadata = doc
        .metadata
        .into_iter()
        .map(|(k, v)| {
            let vs = match v {
                Value::String(s) => s,
                other => other.to_string(),
            };
            (k, vs)
        })
        .collect();

    Ok(Scenario {
        name: doc.name,
        dim,
        generator,
        actual_generator: None,
        initial,
        reference,
        grid,
        metadata,
    })
}

/// Set a dotted path (e.g. `grid.steps`) inside a JSON document, parsing the
/// value as number, boolean, or string. Intermediate objects are created.
pub fn set_json_path(root: &mut Value, path: &str, raw: &str) -> Result<(), Failure> {
    let parsed: Value = if let Ok(i) = raw.parse::<i64>() {
        Value::from(i)
    } else if let Ok(f) = raw.parse::<f64>() {
        Value::from(f)
    } else if let Ok(b) = raw.parse::<bool>() {
        Value::from(b)
    } else {
        Value::from(raw)
    };

    let mut node = root;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let obj = node.as_object_mut().ok_or_else(|| {
            schema_err(format!(
                "cannot set '{path}': '{part}' is not inside an object"
            ))
        })?;
        if i + 1 == parts.len() {
            obj.insert((*part).to_string(), parsed);
            return Ok(());
        }
        node = obj
            .entry((*part).to_string())
            .or_insert_with(|| Value::Object(serde_json::Map::new()));
    }
    Ok(())
}

/// Resolve a scenario argument: a catalog (or fixture) name, or a path to a
/// scenario JSON file. Overrides are `key=value` pairs: dotted JSON paths for
/// files, named parameters for catalog entries. An optional seed is routed to
/// the initial-state builder.
pub fn load_scenario(
    arg: &str,
    sets: &[(String, String)],
    seed: Option<u64>,
) -> Result<Scenario, Failure> {
    let looks_like_file =
        arg.ends_with(".json") || arg.contains('/') || std::path::Path::new(arg).is_file();
    if looks_like_file {
        let text = std::fs::read_to_string(arg)
            .map_err(|e| schema_err(format!("cannot read {arg}: {e}")))?;
        let mut value: Value =
            serde_json::from_str(&text).map_err(|e| schema_err(format!("{arg}: {e}")))?;
        for (k, v) in sets {
            set_json_path(&mut value, k, v)?;
        }
        if let Some(seed) = seed {
            if !value
                .pointer("/initial_state/builder")
                .map(|_| true)
                .unwrap_or(false)
            {
                return Err(schema_err(
                    "--seed requires a builder-based initial_state with a seed parameter",
                ));
            }
            set_json_path(&mut value, "initial_state.params.seed", &seed.to_string())?;
        }
        scenario_from_value(value)
    } else {
        let mut pairs = sets.to_vec();
        if let Some(seed) = seed {
            pairs.push(("seed".to_string(), seed.to_string()));
        }
        build_catalog(arg, &pairs).map_err(Failure::from_core)
    }
}
