//! Declarative scenario catalog: dephasing channels, GHZ correlation erasure,
//! interacting chains, and the two-qubit decorrelator, plus the special-state
//! builders they need.
//!
//! Rate constants quoted in the doc comments (skew norms, decay slopes) are
//! computed by the eigensolver at run time and pinned by tests; nothing is
//! hard-coded from an external source.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use crate::error::{Error, Result};
use crate::lindblad::{
    diagonal_projection, partial_trace, random_pure_state, uniform_01, DensityMatrix,
    LindbladGenerator, Prefactor, ReferenceState, Subsystem,
};
use crate::matrix::{ComplexMatrix, C64};
use crate::ops::{embed_site, pauli_x, pauli_z, projector, sigma_minus, sigma_plus};
use crate::propagator::{evolve, Method, TimeGrid, Trajectory};

/// A fully built scenario: generator, initial state, reference, grid.
pub struct Scenario {
    pub name: String,
    pub dim: usize,
    /// The declared generator; bounds are always evaluated from it.
    pub generator: LindbladGenerator,
    /// Negative-control fixtures propagate with dynamics that deliberately
    /// differ from the declared generator. `None` for all real scenarios.
    pub actual_generator: Option<LindbladGenerator>,
    pub initial: DensityMatrix,
    pub reference: ReferenceState,
    pub grid: TimeGrid,
    pub metadata: Vec<(String, String)>,
}

impl Scenario {
    pub fn metadata_value(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Generator used for propagation (differs from the declared one only in
    /// negative-control fixtures).
    pub fn propagation_generator(&self) -> &LindbladGenerator {
        self.actual_generator.as_ref().unwrap_or(&self.generator)
    }

    /// Propagate, then attach the deviation sequence and bound curves.
    pub fn run(&self, method: Method) -> Result<Trajectory> {
        let mut traj = evolve(
            self.propagation_generator(),
            &self.initial,
            &self.grid,
            method,
        )?;
        if !matches!(self.reference, ReferenceState::Origin) {
            traj.attach_reference(&self.reference)?;
        }
        traj.attach_bound_curves(&self.generator)?;
        Ok(traj)
    }

    /// Does the declared reference state pass the stationarity check?
    /// (Trivially true for the origin.)
    pub fn verify_reference(&self) -> Result<bool> {
        match self.reference.resolve(self.dim) {
            None => Ok(true),
            Some(state) => {
                crate::propagator::verify_stationary(&self.generator, &state, &self.grid)
            }
        }
    }

    fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }
}

/// Slope of a least-squares line through (t, ln y). Points after y drops
/// below `window_ratio * y[0]` are excluded so that the fit never touches
/// values at the numerical noise floor. Returns `None` when fewer than two
/// usable points remain (e.g. y ≡ 0).
pub fn log_slope(times: &[f64], values: &[f64], window_ratio: f64) -> Option<f64> {
    let y0 = *values.first()?;
    if !(y0 > 0.0) {
        return None;
    }
    let cutoff = y0 * window_ratio;
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .take_while(|(_, &y)| y >= cutoff)
        .map(|(&t, &y)| (t, y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mean_t = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, y) in pts {
        num += (t - mean_t) * (y - mean_y);
        den += (t - mean_t) * (t - mean_t);
    }
    (den > 0.0).then(|| num / den)
}

/// GHZ projector onto (|b₁b₂…⟩ + |1-b₁,1-b₂,…⟩)/√2.
pub fn ghz_state(m: usize, bits: &[u8]) -> Result<DensityMatrix> {
    if m < 2 {
        return Err(Error::InvalidParameter {
            what: "GHZ states need at least 2 qubits".into(),
        });
    }
    if bits.len() != m {
        return Err(Error::InvalidParameter {
            what: format!("expected {m} bits, got {}", bits.len()),
        });
    }
    let dim = 1usize << m;
    let mut idx = 0usize;
    for &b in bits {
        idx = (idx << 1) | (b as usize & 1);
    }
    let flipped = !idx & (dim - 1);
    let mut psi = vec![C64::new(0.0, 0.0); dim];
    psi[idx] = C64::new(1.0, 0.0);
    psi[flipped] = C64::new(1.0, 0.0);
    Ok(DensityMatrix::from_matrix_unchecked(projector(&psi)))
}

fn check_site_count(m: usize) -> Result<()> {
    if !(2..=6).contains(&m) {
        return Err(Error::InvalidParameter {
            what: format!("site count {m} outside supported range 2..=6"),
        });
    }
    Ok(())
}

/// Local σz dephasing on every site of an M-qubit register, erasing the
/// quantum correlations of the initial state. The reference is the diagonal
/// projection of the initial state (stationary under pure dephasing), so the
/// deviation sequence is the correlation distance R(t). For a GHZ initial
/// state the decay attains the Liouville bound: both rates equal 4γM.
pub fn ghz_local_scenario(m: usize, gamma: f64, bits: &[u8]) -> Result<Scenario> {
    check_site_count(m)?;
    let dim = 1usize << m;
    let root = gamma.sqrt();
    let jumps: Vec<ComplexMatrix> = (0..m)
        .map(|site| embed_site(&pauli_z().scale_re(root), site, m))
        .collect::<Result<_>>()?;
    let generator = LindbladGenerator::new(ComplexMatrix::zeros(dim, dim), jumps)?;
    let initial = ghz_state(m, bits)?;
    let reference = ReferenceState::Explicit(diagonal_projection(&initial));
    Ok(Scenario {
        name: format!("ghz_local_m{m}"),
        dim,
        generator,
        actual_generator: None,
        initial,
        reference,
        grid: TimeGrid::default_grid(),
        metadata: vec![],
    }
    .with_meta("tight", "ghz-initial-state")
    .with_meta("gamma", gamma)
    .with_meta("sites", m))
}

/// Global dephasing on an N-level system: one rank-one diagonal projector
/// jump operator per basis state. Every coherence decays at the same rate,
/// so the deviation bound is attained by any initial state; the skew part has
/// exactly N vanishing singular values and the remaining ones all equal 2γ.
pub fn ghz_global_scenario(dim_n: usize, gamma: f64, seed: u64) -> Result<Scenario> {
    if dim_n < 2 {
        return Err(Error::InvalidParameter {
            what: "global dephasing needs dim >= 2".into(),
        });
    }
    let root = gamma.sqrt();
    let jumps: Vec<ComplexMatrix> = (0..dim_n)
        .map(|k| Ok(crate::ops::matrix_unit(dim_n, k, k)?.scale_re(root)))
        .collect::<Result<_>>()?;
    let generator = LindbladGenerator::new(ComplexMatrix::zeros(dim_n, dim_n), jumps)?;
    let initial = random_pure_state(dim_n, seed);
    let reference = ReferenceState::Explicit(diagonal_projection(&initial));
    Ok(Scenario {
        name: format!("ghz_global_n{dim_n}"),
        dim: dim_n,
        generator,
        actual_generator: None,
        initial,
        reference,
        grid: TimeGrid::default_grid(),
        metadata: vec![],
    }
    .with_meta("tight", "any-initial-state")
    .with_meta("gamma", gamma)
    .with_meta("seed", seed))
}

/// Chain of M qubits with σz splitting, cosine-driven nearest-neighbour XX
/// coupling, and local σz dephasing. The fully mixed state is stationary for
/// any interaction, so R(t) = tr[(ρ - I/2^M)²] obeys the deviation bound;
/// the bound rate is independent of the drive because the skew part never
/// sees the Hamiltonian.
pub fn interacting_chain_scenario(m: usize, v0: f64, gamma: f64, seed: u64) -> Result<Scenario> {
    check_site_count(m)?;
    let dim = 1usize << m;

    let mut splitting = ComplexMatrix::zeros(dim, dim);
    for site in 0..m {
        splitting.add_scaled_assign(&embed_site(&pauli_z(), site, m)?, C64::new(1.0, 0.0))?;
    }
    let mut coupling = ComplexMatrix::zeros(dim, dim);
    for site in 0..m - 1 {
        let xx = embed_site(&pauli_x(), site, m)?.matmul(&embed_site(&pauli_x(), site + 1, m)?)?;
        coupling.add_scaled_assign(&xx, C64::new(1.0, 0.0))?;
    }

    let root = gamma.sqrt();
    let jumps: Vec<ComplexMatrix> = (0..m)
        .map(|site| embed_site(&pauli_z().scale_re(root), site, m))
        .collect::<Result<_>>()?;

    let generator = LindbladGenerator::new_time_dependent(
        dim,
        move |t: f64| {
            let mut h = splitting.clone();
            h.add_scaled_assign(&coupling, C64::new(v0 * t.cos(), 0.0))
                .expect("same shape");
            h
        },
        jumps,
    )?;

    Ok(Scenario {
        name: format!("chain_m{m}"),
        dim,
        generator,
        actual_generator: None,
        initial: random_pure_state(dim, seed),
        reference: ReferenceState::MaximallyMixed,
        grid: TimeGrid::default_grid(),
        metadata: vec![],
    }
    .with_meta("gamma", gamma)
    .with_meta("v0", v0)
    .with_meta("sites", m)
    .with_meta("seed", seed))
}

/// Initial-state family for the decorrelator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecorrelatorFamily {
    /// λ·I/4 + (1-λ)|Ψ+⟩⟨Ψ+|: interpolates Bell state to no correlations.
    Werner,
    /// λ·Diagonal(|Ψ+⟩⟨Ψ+|) + (1-λ)|Ψ+⟩⟨Ψ+|: interpolates quantum to purely
    /// classical correlations; the default family.
    BellDiagonalMix,
}

impl DecorrelatorFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecorrelatorFamily::Werner => "werner",
            DecorrelatorFamily::BellDiagonalMix => "bell_diagonal_mix",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "werner" => Ok(DecorrelatorFamily::Werner),
            "bell_diagonal_mix" | "bell-diagonal-mix" => Ok(DecorrelatorFamily::BellDiagonalMix),
            other => Err(Error::InvalidParameter {
                what: format!("unknown decorrelator family '{other}'"),
            }),
        }
    }
}

/// |Ψ+⟩ = (|01⟩ + |10⟩)/√2 as a density matrix.
pub fn bell_state() -> DensityMatrix {
    let psi = [
        C64::new(0.0, 0.0),
        C64::new(1.0, 0.0),
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.0),
    ];
    DensityMatrix::from_matrix_unchecked(projector(&psi))
}

/// λ·I/4 + (1-λ)|Ψ+⟩⟨Ψ+|.
pub fn werner_state(lambda: f64) -> Result<DensityMatrix> {
    check_unit_interval(lambda)?;
    let mixed = ComplexMatrix::identity(4).scale_re(lambda / 4.0);
    let bell = bell_state().into_matrix().scale_re(1.0 - lambda);
    Ok(DensityMatrix::from_matrix_unchecked(mixed.add(&bell)?))
}

/// λ·Diagonal(|Ψ+⟩⟨Ψ+|) + (1-λ)|Ψ+⟩⟨Ψ+|.
pub fn bell_diagonal_mix_state(lambda: f64) -> Result<DensityMatrix> {
    check_unit_interval(lambda)?;
    let bell = bell_state();
    let classical = diagonal_projection(&bell).into_matrix().scale_re(lambda);
    let quantum = bell.into_matrix().scale_re(1.0 - lambda);
    Ok(DensityMatrix::from_matrix_unchecked(
        classical.add(&quantum)?,
    ))
}

fn check_unit_interval(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameter {
            what: format!("lambda {lambda} outside [0, 1]"),
        });
    }
    Ok(())
}

/// Single-qubit reset channel at infinite temperature: jump operators σ+ and
/// σ- at rate γ, whose unique stationary state is I/2. Used as the B-side
/// bath of the decorrelator; its skew norm (4γ) sets the erasure speed limit.
pub fn reset_channel_generator(gamma: f64) -> Result<LindbladGenerator> {
    let root = gamma.sqrt();
    LindbladGenerator::new(
        ComplexMatrix::zeros(2, 2),
        vec![sigma_plus().scale_re(root), sigma_minus().scale_re(root)],
    )
}

/// Two-qubit decorrelator: the reset channel acting on qubit B alone drives
/// ρ_AB → ρ_A ⊗ I/2, erasing all correlations while preserving A's reduced
/// state. The reference ρ_A ⊗ I/2 is computed from the initial state and is
/// stationary, so the deviation sequence is the correlation distance.
pub fn decorrelator_scenario_with_initial(gamma: f64, initial: DensityMatrix) -> Result<Scenario> {
    if initial.dim() != 4 {
        return Err(Error::InvalidParameter {
            what: "decorrelator needs a two-qubit (4x4) initial state".into(),
        });
    }
    let root = gamma.sqrt();
    let id2 = ComplexMatrix::identity(2);
    let jumps = vec![
        id2.kron(&sigma_plus()).scale_re(root),
        id2.kron(&sigma_minus()).scale_re(root),
    ];
    let generator = LindbladGenerator::new(ComplexMatrix::zeros(4, 4), jumps)?;

    let rho_a = partial_trace(&initial, 2, 2, Subsystem::A)?;
    let target = rho_a.matrix().kron(&id2.scale_re(0.5));
    let reference = ReferenceState::Explicit(DensityMatrix::new(target)?);

    Ok(Scenario {
        name: "decorrelator".into(),
        dim: 4,
        generator,
        actual_generator: None,
        initial,
        reference,
        grid: TimeGrid::default_grid(),
        metadata: vec![],
    }
    .with_meta("gamma", gamma))
}

/// Decorrelator with a named initial-state family.
pub fn decorrelator_scenario(
    gamma: f64,
    family: DecorrelatorFamily,
    lambda: f64,
) -> Result<Scenario> {
    let initial = match family {
        DecorrelatorFamily::Werner => werner_state(lambda)?,
        DecorrelatorFamily::BellDiagonalMix => bell_diagonal_mix_state(lambda)?,
    };
    let mut scenario = decorrelator_scenario_with_initial(gamma, initial)?
        .with_meta("family", family.as_str())
        .with_meta("lambda", lambda);
    if family == DecorrelatorFamily::BellDiagonalMix && lambda == 1.0 {
        scenario = scenario.with_meta("tight", "classical-correlations");
    }
    Ok(scenario)
}

/// Hamiltonian choice of the single-qubit dephasing scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitVariant {
    /// H = σz: commutes with the dephasing, so the diagonal of the initial
    /// state is stationary and the deviation bound is attained at all times.
    Text,
    /// H = σx: the diagonal is no longer stationary; the fully mixed state is,
    /// and the purity floor applies.
    Figure,
}

impl QubitVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            QubitVariant::Text => "text",
            QubitVariant::Figure => "figure",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(QubitVariant::Text),
            "figure" => Ok(QubitVariant::Figure),
            other => Err(Error::InvalidParameter {
                what: format!("unknown qubit variant '{other}' (expected text|figure)"),
            }),
        }
    }
}

fn qubit_dephasing_parts(variant: QubitVariant) -> Result<LindbladGenerator> {
    let h = match variant {
        QubitVariant::Text => pauli_z(),
        QubitVariant::Figure => pauli_x(),
    };
    LindbladGenerator::new(h, vec![pauli_z().scale_re(0.5)])
}

/// Single-qubit dephasing with A = σz/2 and an explicit initial state
/// {{a, b}, {b, 1-a}}.
pub fn qubit_dephasing_scenario(variant: QubitVariant, a: f64, b: f64) -> Result<Scenario> {
    if !(0.0..=1.0).contains(&a) || b * b > a * (1.0 - a) + 1e-12 {
        return Err(Error::InvalidParameter {
            what: format!("(a, b) = ({a}, {b}) is not a valid qubit state"),
        });
    }
    let initial = DensityMatrix::new(ComplexMatrix::from_rows(&[
        &[(a, 0.0), (b, 0.0)],
        &[(b, 0.0), (1.0 - a, 0.0)],
    ])?)?;
    qubit_dephasing_from_state(variant, initial).map(|s| s.with_meta("a", a).with_meta("b", b))
}

/// Single-qubit dephasing with a random pure initial state.
pub fn qubit_dephasing_random(variant: QubitVariant, seed: u64) -> Result<Scenario> {
    let initial = random_pure_state(2, seed);
    qubit_dephasing_from_state(variant, initial).map(|s| s.with_meta("seed", seed))
}

fn qubit_dephasing_from_state(variant: QubitVariant, initial: DensityMatrix) -> Result<Scenario> {
    let generator = qubit_dephasing_parts(variant)?;
    let reference = match variant {
        QubitVariant::Text => ReferenceState::Explicit(diagonal_projection(&initial)),
        QubitVariant::Figure => ReferenceState::MaximallyMixed,
    };
    let mut scenario = Scenario {
        name: format!("qubit_dephasing_{}", variant.as_str()),
        dim: 2,
        generator,
        actual_generator: None,
        initial,
        reference,
        grid: TimeGrid::default_grid(),
        metadata: vec![("variant".into(), variant.as_str().into())],
    };
    if variant == QubitVariant::Text {
        scenario = scenario.with_meta("tight", "diagonal-reference");
    }
    Ok(scenario)
}

/// N-level dephasing with a unitary diagonal jump operator diag(e^{iφ_j});
/// phases are drawn uniformly from a seeded stream. The HS bound rate grows
/// like 4N while the spectral-norm rates stay bounded by 4.
pub fn nlevel_dephasing_scenario(
    n: usize,
    gamma: f64,
    phase_seed: u64,
    state_seed: u64,
) -> Result<Scenario> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            what: "dephasing needs dim >= 2".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(phase_seed);
    let root = gamma.sqrt();
    let diag: Vec<C64> = (0..n)
        .map(|_| {
            let phi = core::f64::consts::TAU * uniform_01(&mut rng);
            C64::new(root * phi.cos(), root * phi.sin())
        })
        .collect();
    let jump = ComplexMatrix::diagonal(&diag);
    let generator = LindbladGenerator::new(ComplexMatrix::zeros(n, n), vec![jump])?;
    Ok(Scenario {
        name: format!("nlevel_dephasing_n{n}"),
        dim: n,
        generator,
        actual_generator: None,
        initial: random_pure_state(n, state_seed),
        reference: ReferenceState::MaximallyMixed,
        grid: TimeGrid::default_grid(),
        metadata: vec![],
    }
    .with_meta("gamma", gamma)
    .with_meta("phase_seed", phase_seed)
    .with_meta("seed", state_seed))
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

/// Built-in scenario names (without the negative-control fixtures).
pub fn catalog_names() -> &'static [&'static str] {
    &[
        "fig1",
        "fig2",
        "fig3",
        "ghz_local",
        "ghz_global",
        "nlevel_dephasing",
        "decorrelator",
    ]
}

/// Negative-control fixtures, runnable by name but excluded from catalog-wide
/// comparisons (they are built to fail).
pub fn fixture_names() -> &'static [&'static str] {
    &["negctl_superop", "negctl_bound"]
}

/// Key-value overrides applied to a catalog entry. Every key must be
/// recognized by the entry being built.
pub struct CatalogParams<'a> {
    pairs: &'a [(String, String)],
    used: Vec<bool>,
}

impl<'a> CatalogParams<'a> {
    pub fn new(pairs: &'a [(String, String)]) -> Self {
        Self {
            pairs,
            used: vec![false; pairs.len()],
        }
    }

    fn lookup(&mut self, key: &str) -> Option<&'a str> {
        let mut found = None;
        for (i, (k, v)) in self.pairs.iter().enumerate() {
            if k == key {
                self.used[i] = true;
                found = Some(v.as_str());
            }
        }
        found
    }

    fn f64_or(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.lookup(key) {
            None => Ok(default),
            Some(raw) => raw.parse().map_err(|_| Error::InvalidParameter {
                what: format!("parameter {key}={raw} is not a number"),
            }),
        }
    }

    fn usize_or(&mut self, key: &str, default: usize) -> Result<usize> {
        match self.lookup(key) {
            None => Ok(default),
            Some(raw) => raw.parse().map_err(|_| Error::InvalidParameter {
                what: format!("parameter {key}={raw} is not an integer"),
            }),
        }
    }

    fn u64_or(&mut self, key: &str, default: u64) -> Result<u64> {
        match self.lookup(key) {
            None => Ok(default),
            Some(raw) => raw.parse().map_err(|_| Error::InvalidParameter {
                what: format!("parameter {key}={raw} is not an integer"),
            }),
        }
    }

    fn finish(self) -> Result<()> {
        for (i, (k, _)) in self.pairs.iter().enumerate() {
            if !self.used[i] {
                return Err(Error::InvalidParameter {
                    what: format!("unknown parameter '{k}' for this scenario"),
                });
            }
        }
        Ok(())
    }
}

/// Build a catalog entry (or fixture) by name with key=value overrides.
///
/// Common grid keys: `t_start`, `t_end`, `steps`. Per-entry keys:
/// - fig1: `variant` (figure|text), `seed`, or explicit `a`, `b`
/// - fig2: `m`, `v0`, `gamma`, `seed`
/// - fig3 / decorrelator: `family`, `lambda`, `gamma`, optional `seed`
/// - ghz_local: `m`, `gamma`
/// - ghz_global: `n`, `gamma`, `seed`
/// - nlevel_dephasing: `n`, `gamma`, `phase_seed`, `seed`
pub fn build_catalog(name: &str, overrides: &[(String, String)]) -> Result<Scenario> {
    let mut p = CatalogParams::new(overrides);
    let mut scenario = match name {
        "fig1" => {
            let variant = match p.lookup("variant") {
                None => QubitVariant::Figure,
                Some(raw) => QubitVariant::parse(raw)?,
            };
            let scenario = match (p.lookup("a"), p.lookup("b")) {
                (None, None) => {
                    let seed = p.u64_or("seed", 1)?;
                    qubit_dephasing_random(variant, seed)?
                }
                (a, b) => {
                    let a = a.unwrap_or("0.5").parse().map_err(|_| bad_number("a"))?;
                    let b = b.unwrap_or("0.5").parse().map_err(|_| bad_number("b"))?;
                    qubit_dephasing_scenario(variant, a, b)?
                }
            };
            Scenario {
                name: "fig1".into(),
                ..scenario
            }
        }
        "fig2" => {
            let m = p.usize_or("m", 3)?;
            let v0 = p.f64_or("v0", 0.1)?;
            let gamma = p.f64_or("gamma", 1.0)?;
            let seed = p.u64_or("seed", 1)?;
            let mut s = interacting_chain_scenario(m, v0, gamma, seed)?;
            // Finer default grid: the drive makes both propagation paths work
            // for their accuracy, and the comparison gate is strict.
            s.grid = TimeGrid::new(0.0, 5.0, 3000)?;
            Scenario {
                name: "fig2".into(),
                ..s
            }
        }
        "fig3" | "decorrelator" => {
            let gamma = p.f64_or("gamma", 1.0)?;
            let s = match p.lookup("seed") {
                Some(raw) => {
                    let seed: u64 = raw.parse().map_err(|_| bad_number("seed"))?;
                    decorrelator_scenario_with_initial(
                        gamma,
                        crate::lindblad::random_density(4, seed),
                    )?
                }
                None => {
                    let family = match p.lookup("family") {
                        None => DecorrelatorFamily::BellDiagonalMix,
                        Some(raw) => DecorrelatorFamily::parse(raw)?,
                    };
                    let lambda = p.f64_or("lambda", 0.5)?;
                    decorrelator_scenario(gamma, family, lambda)?
                }
            };
            Scenario {
                name: name.into(),
                ..s
            }
        }
        "ghz_local" => {
            let m = p.usize_or("m", 3)?;
            let gamma = p.f64_or("gamma", 1.0)?;
            let s = ghz_local_scenario(m, gamma, &vec![0u8; m])?;
            Scenario {
                name: "ghz_local".into(),
                ..s
            }
        }
        "ghz_global" => {
            let n = p.usize_or("n", 4)?;
            let gamma = p.f64_or("gamma", 1.0)?;
            let seed = p.u64_or("seed", 1)?;
            let s = ghz_global_scenario(n, gamma, seed)?;
            Scenario {
                name: "ghz_global".into(),
                ..s
            }
        }
        "nlevel_dephasing" => {
            let n = p.usize_or("n", 4)?;
            let gamma = p.f64_or("gamma", 1.0)?;
            let phase_seed = p.u64_or("phase_seed", 7)?;
            let seed = p.u64_or("seed", 1)?;
            let s = nlevel_dephasing_scenario(n, gamma, phase_seed, seed)?;
            Scenario {
                name: "nlevel_dephasing".into(),
                ..s
            }
        }
        "negctl_superop" => {
            // Propagation paths compare a sign-corrupted superoperator against
            // the honest direct integration; the comparison must fail loudly.
            let seed = p.u64_or("seed", 1)?;
            let s = qubit_dephasing_random(QubitVariant::Figure, seed)?;
            Scenario {
                name: "negctl_superop".into(),
                ..s
            }
            .with_meta("fixture", "superop-sign")
        }
        "negctl_bound" => {
            // Dynamics run with a prefactor that ramps past the declared
            // constant-1 value, so declared bounds are violated mid-run.
            let s = qubit_dephasing_scenario(QubitVariant::Text, 0.5, 0.5)?;
            let actual = qubit_dephasing_parts(QubitVariant::Text)?.with_prefactor(
                Prefactor::TimeDependent(alloc::boxed::Box::new(|t: f64| 1.0 + t)),
            );
            Scenario {
                name: "negctl_bound".into(),
                actual_generator: Some(actual),
                ..s
            }
            .with_meta("fixture", "inflated-prefactor")
        }
        other => {
            return Err(Error::InvalidParameter {
                what: format!("unknown catalog scenario '{other}'"),
            })
        }
    };

    let t_start = p.f64_or("t_start", scenario.grid.t_start())?;
    let t_end = p.f64_or("t_end", scenario.grid.t_end())?;
    let steps = p.usize_or("steps", scenario.grid.steps())?;
    scenario.grid = TimeGrid::new(t_start, t_end, steps)?;
    p.finish()?;
    Ok(scenario)
}

fn bad_number(key: &str) -> Error {
    Error::InvalidParameter {
        what: format!("parameter {key} is not a number"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::{skew_singular_values, skew_spectral_norm};

    #[test]
    fn ghz_state_structure() {
        let ghz = ghz_state(2, &[0, 0]).unwrap();
        // ½(|00⟩+|11⟩)(⟨00|+⟨11|): corners at (0,0), (0,3), (3,0), (3,3).
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((ghz.matrix().get(i, j).re - 0.5).abs() < 1e-15);
        }
        assert!((ghz.purity() - 1.0).abs() < 1e-12);
        assert!((diagonal_projection(&ghz).purity() - 0.5).abs() < 1e-12);

        let ghz = ghz_state(3, &[0, 1, 0]).unwrap();
        // |010⟩ = index 2, complement |101⟩ = index 5.
        assert!((ghz.matrix().get(2, 5).re - 0.5).abs() < 1e-15);
        assert!(ghz_state(3, &[0, 1]).is_err());
    }

    #[test]
    fn ghz_local_skew_norm_matches_brute_force() {
        let s = ghz_local_scenario(2, 1.0, &[0, 0]).unwrap();
        let norm = skew_spectral_norm(&s.generator, 0.0).unwrap();
        assert!((norm - 8.0).abs() < 1e-9, "M=2 local dephasing norm {norm}");
        let s = ghz_local_scenario(3, 1.0, &[0, 0, 0]).unwrap();
        let norm = skew_spectral_norm(&s.generator, 0.0).unwrap();
        assert!((norm - 12.0).abs() < 1e-9);
    }

    #[test]
    fn ghz_local_decay_attains_the_bound() {
        let s = ghz_local_scenario(2, 1.0, &[0, 0]).unwrap();
        let traj = s.run(Method::SuperopExpm).unwrap();
        let devs = traj.purity_deviation.as_ref().unwrap();
        let slope = log_slope(&traj.times(), devs, 1e-9).unwrap();
        let norm = skew_spectral_norm(&s.generator, 0.0).unwrap();
        assert!(
            ((slope + norm) / norm).abs() < 1e-6,
            "slope {slope} vs -{norm}"
        );
    }

    #[test]
    fn ghz_local_product_state_has_no_correlations_to_erase() {
        let mut s = ghz_local_scenario(2, 1.0, &[0, 0]).unwrap();
        s.initial = DensityMatrix::basis_state(4, 0).unwrap();
        s.reference = ReferenceState::Explicit(diagonal_projection(&s.initial));
        let traj = s.run(Method::SuperopExpm).unwrap();
        for d in traj.purity_deviation.as_ref().unwrap() {
            assert!(*d < 1e-20);
        }
    }

    #[test]
    fn ghz_global_singular_value_structure() {
        for n in [2usize, 4] {
            let s = ghz_global_scenario(n, 1.0, 3).unwrap();
            let svals = skew_singular_values(&s.generator, 0.0).unwrap();
            assert_eq!(svals.len(), n * n);
            for v in &svals[..n] {
                assert!(
                    *v < 1e-10,
                    "expected {n} zero singular values, got {svals:?}"
                );
            }
            for v in &svals[n..] {
                assert!((v - 2.0).abs() < 1e-10, "nonzero singular values {svals:?}");
            }
        }
    }

    #[test]
    fn diagonal_initial_state_is_fixed_under_global_dephasing() {
        let mut s = ghz_global_scenario(3, 1.0, 1).unwrap();
        s.initial = DensityMatrix::new(ComplexMatrix::diagonal(&[
            C64::new(0.5, 0.0),
            C64::new(0.3, 0.0),
            C64::new(0.2, 0.0),
        ]))
        .unwrap();
        s.reference = ReferenceState::Explicit(diagonal_projection(&s.initial));
        let traj = s.run(Method::SuperopExpm).unwrap();
        for d in traj.purity_deviation.as_ref().unwrap() {
            assert!(*d < 1e-20);
        }
    }

    #[test]
    fn chain_skew_norm_is_independent_of_drive() {
        let weak = interacting_chain_scenario(2, 0.1, 1.0, 1).unwrap();
        let strong = interacting_chain_scenario(2, 10.0, 1.0, 1).unwrap();
        let n1 = skew_spectral_norm(&weak.generator, 0.3).unwrap();
        let n2 = skew_spectral_norm(&strong.generator, 0.3).unwrap();
        assert!((n1 - n2).abs() < 1e-12);
        assert!((n1 - 8.0).abs() < 1e-9); // 2 sites, full σz, γ = 1
    }

    #[test]
    fn chain_respects_the_deviation_bound() {
        let s = interacting_chain_scenario(2, 0.5, 1.0, 5).unwrap();
        let traj = s.run(Method::DirectRk4).unwrap();
        let devs = traj.purity_deviation.as_ref().unwrap();
        let floor = traj.bound_floor.as_ref().unwrap();
        for (d, f) in devs.iter().zip(floor) {
            assert!(*d >= f - 1e-7);
        }
    }

    #[test]
    fn decorrelator_reference_is_stationary_and_reached() {
        for (family, lambda) in [
            (DecorrelatorFamily::Werner, 0.3),
            (DecorrelatorFamily::BellDiagonalMix, 0.0),
            (DecorrelatorFamily::BellDiagonalMix, 1.0),
        ] {
            let mut s = decorrelator_scenario(1.0, family, lambda).unwrap();
            assert!(s.verify_reference().unwrap());
            s.grid = TimeGrid::new(0.0, 20.0, 2000).unwrap();
            let traj = s.run(Method::SuperopExpm).unwrap();
            let target = s.reference.resolve(4).unwrap();
            let dist = traj
                .final_state()
                .matrix()
                .sub(target.matrix())
                .unwrap()
                .hs_norm();
            assert!(dist < 1e-6, "family {family:?} λ={lambda}: distance {dist}");
        }
    }

    #[test]
    fn classical_correlations_erase_at_the_speed_limit() {
        let s = decorrelator_scenario(1.0, DecorrelatorFamily::BellDiagonalMix, 1.0).unwrap();
        let traj = s.run(Method::SuperopExpm).unwrap();
        let devs = traj.purity_deviation.as_ref().unwrap();
        let slope = log_slope(&traj.times(), devs, 1e-9).unwrap();
        let bath_norm = skew_spectral_norm(&reset_channel_generator(1.0).unwrap(), 0.0).unwrap();
        assert!((bath_norm - 4.0).abs() < 1e-9);
        assert!(((slope + bath_norm) / bath_norm).abs() < 1e-6);

        // Quantum correlations erase strictly slower.
        let q = decorrelator_scenario(1.0, DecorrelatorFamily::BellDiagonalMix, 0.0).unwrap();
        let qtraj = q.run(Method::SuperopExpm).unwrap();
        let qdevs = qtraj.purity_deviation.as_ref().unwrap();
        let qslope = log_slope(&qtraj.times(), qdevs, 1e-9).unwrap();
        assert!(qslope > slope + 0.5);
    }

    #[test]
    fn qubit_text_variant_deviation_is_exact_exponential() {
        let (a, b) = (0.6, 0.3);
        let s = qubit_dephasing_scenario(QubitVariant::Text, a, b).unwrap();
        assert!(s.verify_reference().unwrap());
        let traj = s.run(Method::SuperopExpm).unwrap();
        let devs = traj.purity_deviation.as_ref().unwrap();
        for (t, d) in traj.times().iter().zip(devs) {
            let expect = 2.0 * b * b * (-t).exp();
            assert!(
                (d - expect).abs() < 1e-10,
                "R({t}) = {d}, expected {expect}"
            );
        }
    }

    #[test]
    fn qubit_no_coherence_means_zero_deviation() {
        let s = qubit_dephasing_scenario(QubitVariant::Text, 0.7, 0.0).unwrap();
        let traj = s.run(Method::SuperopExpm).unwrap();
        for d in traj.purity_deviation.as_ref().unwrap() {
            assert!(*d < 1e-24);
        }
    }

    #[test]
    fn balanced_pure_state_sits_on_the_purity_floor() {
        for variant in [QubitVariant::Text, QubitVariant::Figure] {
            let s = qubit_dephasing_scenario(variant, 0.5, 0.5).unwrap();
            let traj = s.run(Method::SuperopExpm).unwrap();
            let floor = traj
                .purity_floor
                .as_ref()
                .expect("mixed state is stationary");
            for (k, t) in traj.times().iter().enumerate() {
                let expect = 0.5 + 0.5 * (-t).exp();
                assert!((traj.purity[k] - expect).abs() < 1e-8);
                assert!((floor[k] - expect).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn invalid_qubit_parameters_rejected() {
        assert!(qubit_dephasing_scenario(QubitVariant::Text, 0.5, 0.6).is_err());
        assert!(qubit_dephasing_scenario(QubitVariant::Text, 1.2, 0.0).is_err());
    }

    #[test]
    fn nlevel_scenario_rates() {
        let s = nlevel_dephasing_scenario(4, 1.0, 7, 1).unwrap();
        let hs = crate::bounds::hilbert_hs_rate(&s.generator);
        assert!((hs - 16.0).abs() < 1e-9);
        let sp = crate::bounds::hilbert_sp_rate(&s.generator).unwrap();
        assert!((sp - 4.0).abs() < 1e-9);
        assert!(skew_spectral_norm(&s.generator, 0.0).unwrap() <= 4.0 + 1e-9);
    }

    #[test]
    fn catalog_entries_build_and_their_references_are_stationary() {
        for name in catalog_names() {
            let s = build_catalog(name, &[]).unwrap();
            assert!(
                s.verify_reference().unwrap(),
                "reference of catalog entry {name} is not stationary"
            );
            assert!(s.actual_generator.is_none());
        }
        for name in fixture_names() {
            let s = build_catalog(name, &[]).unwrap();
            assert!(s.metadata_value("fixture").is_some());
        }
    }

    #[test]
    fn catalog_overrides_apply() {
        let pairs = vec![
            ("m".to_string(), "2".to_string()),
            ("steps".to_string(), "50".to_string()),
            ("t_end".to_string(), "1.5".to_string()),
        ];
        let s = build_catalog("ghz_local", &pairs[..1]).unwrap();
        assert_eq!(s.dim, 4);
        let s = build_catalog("fig2", &pairs).unwrap();
        assert_eq!(s.dim, 4);
        assert_eq!(s.grid.steps(), 50);
        assert!((s.grid.t_end() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn unknown_catalog_inputs_rejected() {
        assert!(build_catalog("no_such_scenario", &[]).is_err());
        let pairs = vec![("volume".to_string(), "11".to_string())];
        assert!(build_catalog("fig1", &pairs).is_err());
    }

    #[test]
    fn log_slope_fits_exact_exponentials() {
        let times: Vec<f64> = (0..100).map(|k| 0.05 * k as f64).collect();
        let values: Vec<f64> = times.iter().map(|t| 3.0 * (-1.7 * t).exp()).collect();
        let slope = log_slope(&times, &values, 0.0).unwrap();
        assert!((slope + 1.7).abs() < 1e-12);
        assert!(log_slope(&times, &vec![0.0; 100], 1e-9).is_none());
    }
}
