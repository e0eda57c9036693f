//! Command-line pipeline: argument types, validation and the subcommands.
//! The binary only parses arguments and maps errors to exit codes.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use serde_json::{json, Value};

use crate::circuits::{
    encode_state, fgu_orbital_rotation, min_depth_realization, rotation_measurement, rotor_circuits,
    standard_orbital_rotation, trotter_step, Connectivity, FguEncoding,
};
use crate::encoder::{Encoding, Family, Realization};
use crate::error::{Error, Result};
use crate::fermion::FermionHamiltonian;
use crate::graph::{GraphKind, InteractionGraph, PathPolicy};
use crate::pauli::WeightedPauliSum;
use crate::reduce::{group_commuting, jw_parity_compress, logical_reduce, GroupMode, ReductionReport};
use crate::sim::{estimate_energy, postselect, sample, NoiseModel, ParityCheck, TermImage};
use crate::tableau::{Circuit, Gate};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const THREADS_ENV: &str = "GSEFORGE_THREADS";

/// Everything a run depends on; serialized into every output.
#[derive(Parser, Debug, Clone, Serialize)]
#[command(name = "gseforge", version, about = "Fermion-to-qubit encodings, weight reduction, circuit synthesis and noisy sampling")]
pub struct RunConfig {
    /// Worker threads; defaults to $GSEFORGE_THREADS, then all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the main output here instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Map a Hamiltonian to qubits and report weights.
    Map(MapArgs),
    /// Reduce the weight of a mapped Pauli sum.
    Reduce(ReduceArgs),
    /// Emit rotation-measurement circuits for commuting term groups.
    Rotate(RotateArgs),
    /// Emit one Trotter step.
    Trotter(TrotterArgs),
    /// Emit an orbital-rotation circuit.
    Fgu(FguArgs),
    /// Prepare an occupation state, measure the energy with noise and post-select.
    Experiment(ExperimentArgs),
    /// Compare JW and [[2N,N,2]] Trotter circuits for the rotor model.
    Rotor(RotorArgs),
    /// Search for undetectable low-weight Paulis.
    Distance(DistanceArgs),
    /// Build or prune an interaction graph.
    Graph(GraphArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EncodingArgs {
    /// Per-sector graph: complete:N, line:N, loop:M:D, line-loops:M:D,
    /// incidence:M:K, prune:M:DEGREE:HOPS or file:PATH.
    #[arg(long)]
    pub graph: String,
    /// Local Majorana family: jw, cyclic:K, ternary or 2n-n-2.
    #[arg(long, default_value = "jw")]
    pub family: String,
    /// Path policy: shortest, copy:C, round-robin or min-weight.
    #[arg(long, default_value = "min-weight")]
    pub path: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct MapArgs {
    #[arg(long)]
    pub hamiltonian: PathBuf,
    #[command(flatten)]
    pub encoding: EncodingArgs,
    /// Rewrite terms to their lightest stabilizer-equivalent.
    #[arg(long)]
    pub reduce: bool,
    /// Also write the Pauli sum (text format) here.
    #[arg(long)]
    pub sum: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ReduceArgs {
    /// Pauli sum in text format.
    #[arg(long)]
    pub sum: PathBuf,
    /// Encoding the sum came from, for stabilizer reduction.
    #[command(flatten)]
    pub encoding: OptionalEncodingArgs,
    /// Number of sectors the graph is replicated over.
    #[arg(long, default_value_t = 1)]
    pub sectors: usize,
    /// JW parity compression instead: modes per sector and the two parities,
    /// e.g. 4:1:-1.
    #[arg(long)]
    pub jw_compress: Option<String>,
    /// Write the reduced sum here.
    #[arg(long)]
    pub reduced: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OptionalEncodingArgs {
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long, default_value = "jw")]
    pub family: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RotateArgs {
    #[arg(long)]
    pub hamiltonian: PathBuf,
    #[command(flatten)]
    pub encoding: EncodingArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TrotterArgs {
    #[arg(long)]
    pub hamiltonian: PathBuf,
    #[command(flatten)]
    pub encoding: EncodingArgs,
    #[arg(long, default_value_t = 0.1)]
    pub dt: f64,
    /// Pick paths and edge copies for the shallowest step.
    #[arg(long)]
    pub min_depth: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FguKind {
    Jw,
    #[value(name = "2n-n-2")]
    TwoNN2,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConnectivityArg {
    All,
    Linear,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FguArgs {
    #[arg(long)]
    pub modes: usize,
    #[arg(long, value_enum, default_value = "2n-n-2")]
    pub encoding: FguKind,
    #[arg(long, value_enum, default_value = "linear")]
    pub connectivity: ConnectivityArg,
    /// JSON array of rows; a seeded random rotation when absent.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Swap-routed mode-space Givens network on a JW line instead.
    #[arg(long)]
    pub baseline: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub hamiltonian: PathBuf,
    #[command(flatten)]
    pub encoding: EncodingArgs,
    /// Occupied modes as a 0/1 string over all modes, sector-major.
    #[arg(long)]
    pub occupation: String,
    /// Total shots, split evenly over groups.
    #[arg(long, default_value_t = 100_000)]
    pub shots: usize,
    /// Two-qubit depolarizing probability.
    #[arg(long, default_value_t = 0.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0.0)]
    pub readout: f64,
    /// Zero-angle single-excitation layers after preparation, standing in for
    /// a variational circuit at its reference point.
    #[arg(long, default_value_t = 0)]
    pub ansatz_layers: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RotorArgs {
    #[arg(long)]
    pub rotors: usize,
    #[arg(long)]
    pub dm: usize,
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    #[arg(long, default_value_t = 0.1)]
    pub dt: f64,
    #[arg(long)]
    pub jw_circuit: Option<PathBuf>,
    #[arg(long)]
    pub gse_circuit: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DistanceArgs {
    #[command(flatten)]
    pub encoding: EncodingArgs,
    #[arg(long, default_value_t = 3)]
    pub w_max: usize,
    /// Candidate budget before refusing.
    #[arg(long, default_value_t = 1e7)]
    pub budget: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GraphArgs {
    /// Graph spec as for --graph elsewhere.
    #[arg(long)]
    pub graph: String,
}

impl RunConfig {
    /// Range checks that clap cannot express.
    pub fn validate(&self) -> Result<()> {
        if self.threads == Some(0) {
            return Err(Error::InvalidParams("--threads must be positive".into()));
        }
        match &self.command {
            Command::Experiment(a) => {
                NoiseModel::new(a.p, a.readout)?;
                if a.shots == 0 {
                    return Err(Error::InvalidParams("--shots must be positive".into()));
                }
                if a.occupation.chars().any(|c| c != '0' && c != '1') {
                    return Err(Error::InvalidParams(format!("occupation {:?} is not a 0/1 string", a.occupation)));
                }
            }
            Command::Trotter(a) if !a.dt.is_finite() => return Err(Error::InvalidParams("--dt must be finite".into())),
            Command::Rotor(a) if a.rotors == 0 || a.dm % 2 == 0 => {
                return Err(Error::InvalidParams("rotor needs N ≥ 1 and odd d_m".into()));
            }
            Command::Fgu(a) if a.modes == 0 => return Err(Error::InvalidParams("--modes must be positive".into())),
            Command::Fgu(a) if a.baseline && a.encoding != FguKind::Jw => {
                return Err(Error::InvalidParams("the baseline runs on --encoding jw".into()));
            }
            _ => {}
        }
        Ok(())
    }

    /// Thread count from the flag, then the environment.
    pub fn thread_count(&self) -> Result<Option<usize>> {
        if let Some(t) = self.threads {
            return Ok(Some(t));
        }
        match std::env::var(THREADS_ENV) {
            Ok(v) => v
                .trim()
                .parse::<usize>()
                .ok()
                .filter(|&t| t > 0)
                .map(Some)
                .ok_or_else(|| Error::InvalidParams(format!("{THREADS_ENV}={v:?} is not a positive integer"))),
            Err(_) => Ok(None),
        }
    }
}

/// `kind:a:b` parsing for graph specs. `prune` needs `seed`.
pub fn parse_graph(spec: &str, seed: u64) -> Result<InteractionGraph> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    if kind == "file" {
        let text = std::fs::read_to_string(rest)?;
        return InteractionGraph::from_json(&text).map_err(|e| Error::Schema(format!("{rest}: {e}")));
    }
    let nums: Vec<usize> = rest
        .split(':')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|_| Error::Parse(format!("graph spec {spec:?}: {s:?} is not a count"))))
        .collect::<Result<_>>()?;
    let need = |k: usize| -> Result<()> {
        if nums.len() != k {
            return Err(Error::Parse(format!("graph spec {spec:?} needs {k} numbers")));
        }
        Ok(())
    };
    let gk = match kind {
        "complete" => {
            need(1)?;
            GraphKind::Complete(nums[0])
        }
        "line" => {
            need(1)?;
            GraphKind::Line(nums[0])
        }
        "loop" => {
            need(2)?;
            GraphKind::Loop { m: nums[0], multiplicity: nums[1] }
        }
        "line-loops" => {
            need(2)?;
            GraphKind::LineWithEndLoops { m: nums[0], multiplicity: nums[1] }
        }
        "incidence" => {
            need(2)?;
            GraphKind::CompleteWithIncidence { m: nums[0], incidence: nums[1] }
        }
        "prune" => {
            need(3)?;
            return InteractionGraph::prune(nums[0], nums[1], nums[2], seed, 64);
        }
        _ => return Err(Error::Parse(format!("unknown graph kind {kind:?}"))),
    };
    InteractionGraph::build(&gk)
}

pub fn parse_family(spec: &str) -> Result<Family> {
    match spec {
        "jw" | "jw_chain" => Ok(Family::JwChain),
        "ternary" | "ternary_tree" => Ok(Family::TernaryTree),
        "2n-n-2" => Ok(Encoding::table_2n_n_2()),
        _ => match spec.strip_prefix("cyclic:") {
            Some(k) => k.parse().map(Family::Cyclic).map_err(|_| Error::Parse(format!("family {spec:?}"))),
            None => Err(Error::Parse(format!("unknown family {spec:?}"))),
        },
    }
}

pub fn parse_policy(spec: &str) -> Result<Realization> {
    match spec {
        "shortest" => Ok(Realization::Path(PathPolicy::Shortest)),
        "round-robin" => Ok(Realization::Path(PathPolicy::RoundRobin { counter: 0 })),
        "min-weight" => Ok(Realization::MinWeight),
        _ => match spec.strip_prefix("copy:") {
            Some(c) => c
                .parse()
                .map(|c| Realization::Path(PathPolicy::ShortestWithCopy(c)))
                .map_err(|_| Error::Parse(format!("path policy {spec:?}"))),
            None => Err(Error::Parse(format!("unknown path policy {spec:?}"))),
        },
    }
}

/// The per-sector graph replicated over `sectors` components.
pub fn build_encoding(graph: &str, family: &str, sectors: usize, seed: u64) -> Result<Encoding> {
    let g = parse_graph(graph, seed)?;
    let g = if sectors > 1 { InteractionGraph::disjoint_union(&vec![g; sectors])? } else { g };
    Encoding::build(&g, parse_family(family)?)
}

fn load_hamiltonian(path: &Path) -> Result<FermionHamiltonian> {
    FermionHamiltonian::load(path)
}

fn encoding_for(h: &FermionHamiltonian, e: &EncodingArgs, seed: u64) -> Result<Encoding> {
    let enc = build_encoding(&e.graph, &e.family, h.n_sectors(), seed)?;
    if enc.graph().n_vertices() != h.n_modes() {
        return Err(Error::Dimension(format!(
            "graph {:?} has {} vertices per sector, Hamiltonian has {} modes per sector",
            e.graph,
            enc.graph().n_vertices() / h.n_sectors(),
            h.modes_per_sector()
        )));
    }
    Ok(enc)
}

/// Qubit and weight summary of a mapping.
#[derive(Clone, Debug, Serialize)]
pub struct MapReport {
    pub n_qubits: usize,
    pub qubits_per_sector: usize,
    pub sectors: usize,
    pub stabilizers: usize,
    pub constant: f64,
    pub reduction: ReductionReport,
}

pub struct MapOutput {
    pub report: MapReport,
    pub terms: WeightedPauliSum,
}

pub fn cmd_map(h: &FermionHamiltonian, enc: &Encoding, policy: &mut Realization, reduce: bool) -> Result<MapOutput> {
    let mapped = enc.map_hamiltonian(h, policy)?;
    let after = if reduce { logical_reduce(enc, &mapped.terms)? } else { mapped.terms.clone() };
    let groups = group_commuting(&after, GroupMode::General).len();
    let reduction = ReductionReport::new(&mapped.terms, &after, groups);
    let report = MapReport {
        n_qubits: enc.n_qubits(),
        qubits_per_sector: enc.n_qubits() / h.n_sectors(),
        sectors: h.n_sectors(),
        stabilizers: enc.stabilizers().len(),
        constant: mapped.constant,
        reduction,
    };
    Ok(MapOutput { report, terms: after })
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupOutcome {
    pub terms: usize,
    pub shots: usize,
    pub kept: usize,
    pub acceptance: f64,
    pub stabilizer_checks: usize,
    pub depth: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub n_qubits: usize,
    pub energy: f64,
    pub stderr: f64,
    /// Energy of the prepared occupation state.
    pub exact: f64,
    pub abs_error: f64,
    /// Kept shots over all shots.
    pub acceptance: f64,
    pub groups: Vec<GroupOutcome>,
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec<'a> {
    pub occupation: &'a [bool],
    pub shots: usize,
    pub noise: NoiseModel,
    pub ansatz_layers: usize,
    pub seed: u64,
}

/// Zero-angle rotations about every mapped hop from an occupied to an empty
/// mode of the same sector.
pub fn excitation_layer(h: &FermionHamiltonian, enc: &Encoding, occupation: &[bool]) -> Result<Circuit> {
    let m = h.modes_per_sector();
    if occupation.len() != h.n_modes() {
        return Err(Error::Dimension(format!("{} occupations for {} modes", occupation.len(), h.n_modes())));
    }
    let mut hops = FermionHamiltonian::new(m, h.n_sectors())?;
    for s in 0..h.n_sectors() {
        for i in (0..m).filter(|&i| occupation[s * m + i]) {
            for a in (0..m).filter(|&a| !occupation[s * m + a]) {
                hops.add_one_body(s, i, a, 1.0)?;
                hops.add_one_body(s, a, i, 1.0)?;
            }
        }
    }
    let terms = enc.map_hamiltonian(&hops, &mut Realization::MinWeight)?.terms;
    trotter_step(&terms, 0.0)
}

/// Prepare → rotate → sample → post-select → estimate, one circuit per
/// commuting group with `shots / groups` shots each.
pub fn cmd_experiment(h: &FermionHamiltonian, enc: &Encoding, spec: &ExperimentSpec) -> Result<ExperimentReport> {
    let ExperimentSpec { occupation, shots, ref noise, ansatz_layers, seed } = *spec;
    let mapped = enc.map_hamiltonian(h, &mut Realization::MinWeight)?;
    let mut prep = encode_state(enc, occupation)?;
    let layer = if ansatz_layers > 0 { excitation_layer(h, enc, occupation)? } else { Circuit::new(enc.n_qubits()) };
    for _ in 0..ansatz_layers {
        prep.extend(&layer);
    }
    let groups = group_commuting(&mapped.terms, GroupMode::General);
    if groups.is_empty() {
        return Err(Error::InvalidParams("Hamiltonian has no non-identity terms".into()));
    }
    let per_group = (shots / groups.len()).max(1);
    let n = enc.n_qubits();
    let mut measured = Vec::with_capacity(groups.len());
    let mut outcomes = Vec::with_capacity(groups.len());
    let (mut kept_total, mut shots_total) = (0usize, 0usize);
    for (k, g) in groups.iter().enumerate() {
        let terms: Vec<_> = g.iter().map(|(p, _)| p.clone()).collect();
        let rot = rotation_measurement(enc, &terms)?;
        let mut c = prep.clone();
        c.extend(&rot.circuit);
        for q in 0..n {
            c.push(Gate::M(q));
        }
        let raw = sample(&c, noise, per_group, seed.wrapping_add(k as u64))?;
        let checks: Vec<ParityCheck> = rot
            .stab_images
            .iter()
            .filter(|s| !s.is_identity())
            .map(|s| ParityCheck { columns: s.support(), odd: s.phase() == 2 })
            .collect();
        let (kept, acceptance) = postselect(&raw, &checks)?;
        let images: Vec<TermImage> = g
            .iter()
            .zip(&rot.z_images)
            .map(|((_, coef), z)| TermImage { coefficient: coef.re, sign: if z.phase() == 2 { -1.0 } else { 1.0 }, columns: z.support() })
            .collect();
        kept_total += kept.shots;
        shots_total += raw.shots;
        outcomes.push(GroupOutcome {
            terms: terms.len(),
            shots: raw.shots,
            kept: kept.shots,
            acceptance,
            stabilizer_checks: checks.len(),
            depth: c.depth(),
        });
        measured.push((kept, images));
    }
    let est = estimate_energy(mapped.constant, &measured)?;
    let exact = crate::sim::dense::fock_energy(h, occupation);
    Ok(ExperimentReport {
        n_qubits: n,
        energy: est.value,
        stderr: est.stderr,
        exact,
        abs_error: (est.value - exact).abs(),
        acceptance: kept_total as f64 / shots_total as f64,
        groups: outcomes,
    })
}

fn random_orthogonal(m: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(m, m, |_, _| StandardNormal.sample(&mut rng));
    let mut q = g.qr().q();
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

fn load_matrix(path: &Path) -> Result<DMatrix<f64>> {
    let rows: Vec<Vec<f64>> = serde_json::from_str(&std::fs::read_to_string(path)?)
        .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
    let m = rows.len();
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::Schema(format!("{}: matrix is not square", path.display())));
    }
    Ok(DMatrix::from_fn(m, m, |i, j| rows[i][j]))
}

/// Header comments naming the tool, version and configuration.
pub fn header(cfg: &RunConfig) -> Result<String> {
    Ok(format!("# gseforge {VERSION}\n# config {}\n", serde_json::to_string(cfg)?))
}

fn envelope(cfg: &RunConfig, result: Value) -> Result<Value> {
    Ok(json!({ "tool": "gseforge", "version": VERSION, "config": serde_json::to_value(cfg)?, "result": result }))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn circuit_text(cfg: &RunConfig, c: &Circuit) -> Result<String> {
    Ok(format!("{}# depth {} two-qubit {}\n{}", header(cfg)?, c.depth(), c.two_qubit_count(), c.to_text()))
}

fn to_json<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

/// Runs the configured subcommand and returns the main output text.
pub fn run(cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    let seed = cfg.seed;
    let doc = |v: Value| -> Result<String> { Ok(serde_json::to_string_pretty(&envelope(cfg, v)?)? + "\n") };
    match &cfg.command {
        Command::Map(a) => {
            let h = load_hamiltonian(&a.hamiltonian)?;
            let enc = encoding_for(&h, &a.encoding, seed)?;
            let out = cmd_map(&h, &enc, &mut parse_policy(&a.encoding.path)?, a.reduce)?;
            if let Some(p) = &a.sum {
                write_text(p, &(header(cfg)? + &format!("# constant {:.17e}\n", out.report.constant) + &out.terms.to_text()))?;
            }
            doc(to_json(&out.report)?)
        }
        Command::Reduce(a) => {
            let sum = WeightedPauliSum::from_text(&std::fs::read_to_string(&a.sum)?)
                .map_err(|e| Error::Parse(format!("{}: {e}", a.sum.display())))?;
            let after = match (&a.jw_compress, &a.encoding.graph) {
                (Some(spec), _) => {
                    let parts: Vec<i64> = spec
                        .split(':')
                        .map(|s| s.parse::<i64>().map_err(|_| Error::Parse(format!("--jw-compress {spec:?}"))))
                        .collect::<Result<_>>()?;
                    if parts.len() != 3 || parts[0] <= 0 || parts[1].abs() != 1 || parts[2].abs() != 1 {
                        return Err(Error::Parse(format!("--jw-compress needs M:±1:±1, got {spec:?}")));
                    }
                    jw_parity_compress(&sum, parts[0] as usize, parts[1] as i8, parts[2] as i8)?
                }
                (None, Some(graph)) => {
                    let enc = build_encoding(graph, &a.encoding.family, a.sectors, seed)?;
                    if enc.n_qubits() != sum.n_qubits() {
                        return Err(Error::Dimension(format!("{}-qubit sum, {}-qubit encoding", sum.n_qubits(), enc.n_qubits())));
                    }
                    logical_reduce(&enc, &sum)?
                }
                (None, None) => return Err(Error::InvalidParams("reduce needs --graph or --jw-compress".into())),
            };
            let groups = group_commuting(&after, GroupMode::General).len();
            if let Some(p) = &a.reduced {
                write_text(p, &(header(cfg)? + &after.to_text()))?;
            }
            doc(to_json(&ReductionReport::new(&sum, &after, groups))?)
        }
        Command::Rotate(a) => {
            let h = load_hamiltonian(&a.hamiltonian)?;
            let enc = encoding_for(&h, &a.encoding, seed)?;
            let mapped = enc.map_hamiltonian(&h, &mut parse_policy(&a.encoding.path)?)?;
            let mut groups = Vec::new();
            for g in group_commuting(&mapped.terms, GroupMode::General) {
                let terms: Vec<_> = g.iter().map(|(p, _)| p.clone()).collect();
                let r = rotation_measurement(&enc, &terms)?;
                groups.push(json!({
                    "terms": g.iter().map(|(p, c)| json!({"term": p.to_string(), "coefficient": c.re})).collect::<Vec<_>>(),
                    "z_images": r.z_images.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "stabilizer_images": r.stab_images.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "overlap": r.overlap,
                    "depth": r.circuit.depth(),
                    "circuit": r.circuit.to_text(),
                }));
            }
            doc(json!({ "n_qubits": enc.n_qubits(), "constant": mapped.constant, "groups": groups }))
        }
        Command::Trotter(a) => {
            let h = load_hamiltonian(&a.hamiltonian)?;
            let enc = encoding_for(&h, &a.encoding, seed)?;
            let terms = if a.min_depth {
                min_depth_realization(&enc, &h)?.terms
            } else {
                enc.map_hamiltonian(&h, &mut parse_policy(&a.encoding.path)?)?.terms
            };
            circuit_text(cfg, &trotter_step(&terms, a.dt)?)
        }
        Command::Fgu(a) => {
            let u = match &a.matrix {
                Some(p) => load_matrix(p)?,
                None => random_orthogonal(a.modes, seed),
            };
            if u.nrows() != a.modes {
                return Err(Error::Dimension(format!("{}×{} matrix for {} modes", u.nrows(), u.ncols(), a.modes)));
            }
            let kind = match a.encoding {
                FguKind::Jw => FguEncoding::Jw,
                FguKind::TwoNN2 => FguEncoding::TwoNN2,
            };
            let enc = kind.build(a.modes)?;
            let conn = match (a.connectivity, kind) {
                (ConnectivityArg::All, _) => Connectivity::AllToAll,
                (ConnectivityArg::Linear, FguEncoding::Jw) => Connectivity::linear(a.modes),
                (ConnectivityArg::Linear, FguEncoding::TwoNN2) => Connectivity::interleaved(a.modes),
            };
            let c = if a.baseline { standard_orbital_rotation(&u, &enc, &conn)? } else { fgu_orbital_rotation(&u, &enc, &conn)? };
            circuit_text(cfg, &c)
        }
        Command::Experiment(a) => {
            let h = load_hamiltonian(&a.hamiltonian)?;
            let enc = encoding_for(&h, &a.encoding, seed)?;
            let occ: Vec<bool> = a.occupation.chars().map(|c| c == '1').collect();
            let noise = NoiseModel::new(a.p, a.readout)?;
            let spec = ExperimentSpec { occupation: &occ, shots: a.shots, noise, ansatz_layers: a.ansatz_layers, seed };
            doc(to_json(&cmd_experiment(&h, &enc, &spec)?)?)
        }
        Command::Rotor(a) => {
            let r = rotor_circuits(a.rotors, a.dm, a.g, a.dt)?;
            if let Some(p) = &a.jw_circuit {
                write_text(p, &circuit_text(cfg, &r.jw)?)?;
            }
            if let Some(p) = &a.gse_circuit {
                write_text(p, &circuit_text(cfg, &r.gse)?)?;
            }
            doc(to_json(&r)?)
        }
        Command::Distance(a) => {
            let enc = build_encoding(&a.encoding.graph, &a.encoding.family, 1, seed)?;
            let r = enc.code_distance_scan_within(a.w_max, a.budget)?;
            let by_weight: serde_json::Map<String, Value> = r
                .undetectable_by_weight
                .iter()
                .map(|(w, ps)| (w.to_string(), json!(ps.iter().map(|p| p.to_string()).collect::<Vec<_>>())))
                .collect();
            doc(json!({ "n_qubits": enc.n_qubits(), "distance": r.distance, "w_max": a.w_max, "undetectable": by_weight }))
        }
        Command::Graph(a) => {
            let g = parse_graph(&a.graph, seed)?;
            let graph: Value = serde_json::from_str(&g.to_json())?;
            let degrees: Vec<usize> = (0..g.n_vertices()).map(|v| g.degree(v)).collect();
            let incidence: Vec<usize> = (0..g.n_vertices()).map(|v| g.incidence(v)).collect();
            doc(json!({ "graph": graph, "degrees": degrees, "incidence": incidence, "diameter": g.diameter() }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("gseforge").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn graph_specs() {
        assert_eq!(parse_graph("complete:7", 0).unwrap().n_vertices(), 7);
        assert_eq!(parse_graph("loop:4:3", 0).unwrap().edge_copy_count(), 12);
        assert!(matches!(parse_graph("loop:4", 0), Err(Error::Parse(_))));
        assert!(matches!(parse_graph("star:4", 0), Err(Error::Parse(_))));
        assert!(matches!(parse_family("cyclic:x"), Err(Error::Parse(_))));
        assert_eq!(parse_family("cyclic:2").unwrap(), Family::Cyclic(2));
    }

    #[test]
    fn validation() {
        let c = cfg(&["experiment", "--hamiltonian", "h.json", "--graph", "line:2", "--occupation", "10", "--p", "1.5"]);
        assert!(matches!(c.validate(), Err(Error::InvalidParams(_))));
        let c = cfg(&["rotor", "--rotors", "2", "--dm", "4"]);
        assert_eq!(run(&c).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn config_round_trips_into_output() {
        let c = cfg(&["--seed", "5", "graph", "--graph", "loop:4:2"]);
        let out = run(&c).unwrap();
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["config"]["seed"], 5);
        assert_eq!(v["config"]["command"]["subcommand"], "graph");
        assert_eq!(out, run(&c).unwrap());
    }

    #[test]
    fn rotor_report_fields() {
        let v: Value = serde_json::from_str(&run(&cfg(&["rotor", "--rotors", "2", "--dm", "3"])).unwrap()).unwrap();
        for k in ["depth_jw", "depth_gse", "gates_jw", "gates_gse"] {
            assert!(v["result"][k].as_u64().unwrap() > 0, "{k}");
        }
    }
}
