//! TOML experiment configuration.
//!
//! A config file is the reproducibility record for a full run: benchmark,
//! circuit shape, noise rates, stepping cost, training budget, seeds, and
//! output location all live in one file whose SHA-256 hash is embedded in
//! every artifact the runner writes. Command-line flags only select the
//! subcommand and override the output knobs (`--out`, `--seed`,
//! `--parallel`).
//!
//! Every section is optional except `benchmark`; defaults reproduce the
//! shipped 4-qubit operating point (5 blocks, all-Y rotations, chain
//! entangler, rates 0.03/0.03/0.03, step on regularized `C2`, baseline
//! `C1`, 300 iterations, seeds 1–3).

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::ansatz::{AnsatzSpec, EntanglerLayout, RotationSchedule};
use crate::checks;
use crate::cost::{CostKind, DEFAULT_ALPHA, DEFAULT_BETA};
use crate::density::NoiseModel;
use crate::error::{Error, Result};
use crate::problems::{self, Graph, ProblemInstance};
use crate::train::{
    TrainConfig, DEFAULT_CLIP, DEFAULT_ITERATIONS, DEFAULT_LR0, DEFAULT_TRAIN_FD_EPS,
};

/// Central-difference step for survey gradients (verification-grade, finer
/// than the training default).
pub const DEFAULT_SURVEY_FD_EPS: f64 = 1e-4;

/// Default random-θ draws for a gradient-norm survey.
pub const DEFAULT_SURVEY_SAMPLES: usize = 20;

/// Default sample count per bound-check claim.
pub const DEFAULT_BOUNDS_SAMPLES: usize = 50;

/// Default circuit depth for the amplification claim, deep enough that the
/// shipped benchmarks clear the `L > 2·L0 + 1` side condition across the
/// whole ε sweep.
pub const DEFAULT_AMPLIFICATION_BLOCKS: usize = 30;

/// A parsed, validated config together with its provenance.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    /// SHA-256 of the raw config file bytes, lowercase hex.
    pub hash: String,
    /// Directory the config file lives in; relative paths inside the file
    /// resolve against it.
    pub base_dir: PathBuf,
    /// Config file stem, used to name output files.
    pub name: String,
}

/// Read, hash, parse, and validate a config file.
pub fn load(path: &Path) -> Result<LoadedConfig> {
    let bytes = fs::read(path)
        .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
    let hash = hash_hex(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|e| Error::Config(format!("config {} is not UTF-8: {e}", path.display())))?;
    let config: RunConfig = toml::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    config.validate()?;
    let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "config".to_string());
    Ok(LoadedConfig { config, hash, base_dir, name })
}

/// SHA-256 of raw bytes as lowercase hex.
pub fn hash_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Builtin benchmark id, or a table describing a custom instance.
    pub benchmark: BenchmarkRef,
    #[serde(default)]
    pub ansatz: AnsatzSection,
    #[serde(default)]
    pub noise: NoiseSection,
    #[serde(default)]
    pub cost: CostSection,
    #[serde(default)]
    pub train: TrainSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub survey: SurveySection,
    #[serde(default)]
    pub bounds: BoundsSection,
}

impl RunConfig {
    /// Field-level validation that needs no file access. Benchmark files are
    /// checked when the instance is resolved.
    pub fn validate(&self) -> Result<()> {
        self.ansatz.schedule()?;
        if self.ansatz.blocks == 0 {
            return Err(Error::Config("ansatz.blocks must be at least 1".into()));
        }
        self.noise.model()?;
        self.cost.step_kind()?;
        self.cost.baseline_kind()?;
        // Probe the training parameters through the trainer's own validator.
        self.train.to_train_config(CostKind::C1, 0).validate()?;
        if self.output.seeds.is_empty() {
            return Err(Error::Config("output.seeds must list at least one seed".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &s in &self.output.seeds {
            if !seen.insert(s) {
                return Err(Error::Config(format!(
                    "output.seeds lists seed {s} twice; per-seed outputs would collide"
                )));
            }
        }
        if self.output.parallel == 0 {
            return Err(Error::Config("output.parallel must be at least 1".into()));
        }
        if self.survey.samples == 0 {
            return Err(Error::Config("survey.samples must be at least 1".into()));
        }
        if !(self.survey.fd_eps > 0.0) {
            return Err(Error::Config(format!(
                "survey.fd_eps must be positive, got {}",
                self.survey.fd_eps
            )));
        }
        if self.bounds.samples == 0 {
            return Err(Error::Config("bounds.samples must be at least 1".into()));
        }
        if !(self.bounds.epsilon > 0.0) || !self.bounds.epsilon.is_finite() {
            return Err(Error::Config(format!(
                "bounds.epsilon must be a positive number, got {}",
                self.bounds.epsilon
            )));
        }
        if self.bounds.amplification_blocks == 0 {
            return Err(Error::Config("bounds.amplification_blocks must be at least 1".into()));
        }
        self.bounds.trend_noise.model()?;
        Ok(())
    }

    /// Resolve the benchmark, reading any referenced files relative to
    /// `base_dir`.
    pub fn instance(&self, base_dir: &Path) -> Result<ProblemInstance> {
        self.benchmark.resolve(base_dir)
    }

    /// The circuit this config runs on the given instance.
    pub fn ansatz_spec(&self, instance: &ProblemInstance) -> Result<AnsatzSpec> {
        AnsatzSpec::new(
            instance.n(),
            self.ansatz.blocks,
            self.ansatz.schedule()?,
            self.ansatz.entangler,
            instance.initial_bits(),
        )
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum BenchmarkRef {
    /// One of the shipped instances, by id.
    Builtin(String),
    /// A custom instance built from files or inline data.
    Custom(CustomBenchmark),
}

impl BenchmarkRef {
    pub fn resolve(&self, base_dir: &Path) -> Result<ProblemInstance> {
        match self {
            BenchmarkRef::Builtin(id) => ProblemInstance::builtin(id),
            BenchmarkRef::Custom(custom) => custom.resolve(base_dir),
        }
    }
}

/// Custom benchmark description. `kind` picks the encoder; each kind uses a
/// fixed subset of the remaining fields and rejects the rest, so a stray
/// field is a config error rather than silently ignored.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomBenchmark {
    /// `maxcut`, `vertex-cover`, `tsp`, or `vqe`.
    pub kind: String,
    /// Graph JSON path (`maxcut`, `vertex-cover`).
    #[serde(default)]
    pub graph: Option<PathBuf>,
    /// Infeasibility penalty (`vertex-cover`; default 2·nodes).
    #[serde(default)]
    pub penalty: Option<f64>,
    /// Vertex whose "not in the cover" symmetry pins the subspace
    /// (`vertex-cover`; default: lowest vertex avoidable by a minimum cover).
    #[serde(default)]
    pub symmetry_vertex: Option<usize>,
    /// Inline distance matrix (`tsp`).
    #[serde(default)]
    pub distances: Option<Vec<Vec<f64>>>,
    /// Hamiltonian term-list path (`vqe`).
    #[serde(default)]
    pub hamiltonian: Option<PathBuf>,
    /// Electron count fixing the Hamming-weight sector (`vqe`).
    #[serde(default)]
    pub electrons: Option<usize>,
}

impl CustomBenchmark {
    fn resolve(&self, base_dir: &Path) -> Result<ProblemInstance> {
        match self.kind.as_str() {
            "maxcut" => {
                self.allow(&["graph"])?;
                let graph = Graph::from_json_file(&self.path(base_dir, &self.graph, "graph")?)?;
                problems::encode_maxcut(&graph)
            }
            "vertex-cover" => {
                self.allow(&["graph", "penalty", "symmetry_vertex"])?;
                let graph = Graph::from_json_file(&self.path(base_dir, &self.graph, "graph")?)?;
                problems::encode_vertex_cover(&graph, self.penalty, self.symmetry_vertex)
            }
            "tsp" => {
                self.allow(&["distances"])?;
                let distances = self.distances.as_ref().ok_or_else(|| {
                    Error::Config("benchmark kind `tsp` needs a `distances` matrix".into())
                })?;
                problems::encode_tsp(distances)
            }
            "vqe" => {
                self.allow(&["hamiltonian", "electrons"])?;
                let path = self.path(base_dir, &self.hamiltonian, "hamiltonian")?;
                let electrons = self.electrons.ok_or_else(|| {
                    Error::Config("benchmark kind `vqe` needs an `electrons` count".into())
                })?;
                problems::load_vqe_hamiltonian(&path, electrons)
            }
            other => Err(Error::Config(format!(
                "unknown benchmark kind `{other}` (expected maxcut, vertex-cover, tsp, or vqe)"
            ))),
        }
    }

    /// Reject fields that the chosen kind does not consume.
    fn allow(&self, used: &[&str]) -> Result<()> {
        let set: [(&str, bool); 5] = [
            ("graph", self.graph.is_some()),
            ("penalty", self.penalty.is_some()),
            ("symmetry_vertex", self.symmetry_vertex.is_some()),
            ("distances", self.distances.is_some()),
            ("hamiltonian", self.hamiltonian.is_some()),
        ];
        for (field, present) in set {
            if present && !used.contains(&field) {
                return Err(Error::Config(format!(
                    "benchmark field `{field}` is not used by kind `{}`",
                    self.kind
                )));
            }
        }
        Ok(())
    }

    fn path(&self, base_dir: &Path, field: &Option<PathBuf>, name: &str) -> Result<PathBuf> {
        let raw = field.as_ref().ok_or_else(|| {
            Error::Config(format!("benchmark kind `{}` needs a `{name}` path", self.kind))
        })?;
        Ok(if raw.is_absolute() { raw.clone() } else { base_dir.join(raw) })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnsatzSection {
    pub blocks: usize,
    /// Rotation schedule: `x`, `y`, `z`, or `xyz` (cycling).
    pub rotations: String,
    /// `chain` or `ring`.
    pub entangler: EntanglerLayout,
}

impl Default for AnsatzSection {
    fn default() -> Self {
        AnsatzSection {
            blocks: problems::DEFAULT_BLOCKS,
            rotations: "y".to_string(),
            entangler: EntanglerLayout::Chain,
        }
    }
}

impl AnsatzSection {
    pub fn schedule(&self) -> Result<RotationSchedule> {
        self.rotations.parse()
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseSection {
    pub q_x: f64,
    pub q_y: f64,
    pub q_z: f64,
}

impl Default for NoiseSection {
    fn default() -> Self {
        NoiseSection { q_x: 0.03, q_y: 0.03, q_z: 0.03 }
    }
}

impl NoiseSection {
    pub fn model(&self) -> Result<NoiseModel> {
        NoiseModel::new(self.q_x, self.q_y, self.q_z)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CostSection {
    /// Stepping cost: `c0`, `c1`, `c2raw`, or `c2reg`.
    pub step: String,
    pub alpha: f64,
    pub beta: f64,
    /// Baseline stepping cost for paired comparisons.
    pub baseline: String,
}

impl Default for CostSection {
    fn default() -> Self {
        CostSection {
            step: "c2reg".to_string(),
            alpha: DEFAULT_ALPHA,
            beta: DEFAULT_BETA,
            baseline: "c1".to_string(),
        }
    }
}

impl CostSection {
    pub fn step_kind(&self) -> Result<CostKind> {
        CostKind::from_config(&self.step, self.alpha, self.beta)
    }

    pub fn baseline_kind(&self) -> Result<CostKind> {
        CostKind::from_config(&self.baseline, self.alpha, self.beta)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainSection {
    pub iterations: usize,
    pub lr0: f64,
    pub clip: f64,
    pub fd_eps: f64,
    /// Explicit initial parameters; omitted means a seeded uniform draw.
    pub initial_theta: Option<Vec<f64>>,
}

impl Default for TrainSection {
    fn default() -> Self {
        TrainSection {
            iterations: DEFAULT_ITERATIONS,
            lr0: DEFAULT_LR0,
            clip: DEFAULT_CLIP,
            fd_eps: DEFAULT_TRAIN_FD_EPS,
            initial_theta: None,
        }
    }
}

impl TrainSection {
    pub fn to_train_config(&self, step_cost: CostKind, seed: u64) -> TrainConfig {
        TrainConfig {
            iterations: self.iterations,
            lr0: self.lr0,
            clip_threshold: self.clip,
            step_cost,
            fd_eps: self.fd_eps,
            seed,
            initial_theta: self.initial_theta.clone(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    /// Output directory; `--out` overrides, and a run without either prints
    /// the summary without persisting artifacts.
    pub dir: Option<PathBuf>,
    pub seeds: Vec<u64>,
    /// Worker threads fanning out over seeds.
    pub parallel: usize,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: None, seeds: vec![1, 2, 3], parallel: 1 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SurveySection {
    pub samples: usize,
    pub fd_eps: f64,
}

impl Default for SurveySection {
    fn default() -> Self {
        SurveySection { samples: DEFAULT_SURVEY_SAMPLES, fd_eps: DEFAULT_SURVEY_FD_EPS }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsSection {
    /// Random-θ samples per claim.
    pub samples: usize,
    /// Amplification margin ε (the sweep around it is fixed).
    pub epsilon: f64,
    /// Depth used for the amplification claim, which needs a circuit deep
    /// enough to clear its side condition.
    pub amplification_blocks: usize,
    /// Secondary rates for slack-trend reporting on the decay claims.
    pub trend_noise: NoiseSection,
}

impl Default for BoundsSection {
    fn default() -> Self {
        BoundsSection {
            samples: DEFAULT_BOUNDS_SAMPLES,
            epsilon: checks::DEFAULT_EPSILON,
            amplification_blocks: DEFAULT_AMPLIFICATION_BLOCKS,
            trend_noise: NoiseSection { q_x: 0.01, q_y: 0.01, q_z: 0.01 },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::BenchmarkKind;
    use std::io::Write;

    fn parse(text: &str) -> RunConfig {
        let config: RunConfig = toml::from_str(text).unwrap();
        config.validate().unwrap();
        config
    }

    #[test]
    fn minimal_config_fills_shipped_defaults() {
        let config = parse("benchmark = \"maxcut-cycle4\"\n");
        assert_eq!(config.ansatz.blocks, 5);
        assert_eq!(config.ansatz.rotations, "y");
        assert_eq!(config.noise.q_x, 0.03);
        assert_eq!(config.cost.step, "c2reg");
        assert_eq!(config.cost.baseline, "c1");
        assert_eq!(config.train.iterations, 300);
        assert_eq!(config.output.seeds, vec![1, 2, 3]);
        assert_eq!(config.output.parallel, 1);
        assert_eq!(config.survey.samples, 20);
        assert_eq!(config.bounds.samples, 50);
        let instance = config.instance(Path::new(".")).unwrap();
        assert_eq!(instance.name(), "maxcut-cycle4");
        let spec = config.ansatz_spec(&instance).unwrap();
        assert_eq!(spec.blocks, 5);
        assert_eq!(spec.n, 4);
    }

    #[test]
    fn full_config_round_trips_every_section() {
        let text = r#"
benchmark = "vqe-h2"

[ansatz]
blocks = 3
rotations = "xyz"
entangler = "ring"

[noise]
q_x = 0.01
q_y = 0.02
q_z = 0.005

[cost]
step = "c2reg"
alpha = 0.2
beta = 0.05
baseline = "c0"

[train]
iterations = 50
lr0 = 0.05
clip = 0.5
fd_eps = 0.001

[output]
dir = "results"
seeds = [7, 8]
parallel = 2

[survey]
samples = 12
fd_eps = 1e-5

[bounds]
samples = 10
epsilon = 0.5
amplification_blocks = 40
"#;
        let config = parse(text);
        assert_eq!(config.ansatz.blocks, 3);
        assert_eq!(config.ansatz.entangler, EntanglerLayout::Ring);
        assert!(matches!(
            config.cost.step_kind().unwrap(),
            CostKind::C2Reg { alpha, beta } if alpha == 0.2 && beta == 0.05
        ));
        assert!(matches!(config.cost.baseline_kind().unwrap(), CostKind::C0));
        assert_eq!(config.output.dir.as_deref(), Some(Path::new("results")));
        assert_eq!(config.output.seeds, vec![7, 8]);
        assert_eq!(config.bounds.amplification_blocks, 40);
        let tc = config.train.to_train_config(config.cost.step_kind().unwrap(), 7);
        assert_eq!(tc.iterations, 50);
        assert_eq!(tc.seed, 7);
    }

    #[test]
    fn unknown_keys_are_rejected_with_diagnostics() {
        let err = toml::from_str::<RunConfig>("benchmrk = \"maxcut-cycle4\"\n").unwrap_err();
        assert!(err.to_string().contains("benchmrk"), "{err}");
        let err =
            toml::from_str::<RunConfig>("benchmark = \"x\"\n[train]\nlearning_rate = 0.1\n")
                .unwrap_err();
        assert!(err.to_string().contains("learning_rate"), "{err}");
    }

    #[test]
    fn overfull_noise_rates_fail_validation_naming_the_rates() {
        let config: RunConfig =
            toml::from_str("benchmark = \"maxcut-cycle4\"\n[noise]\nq_x = 0.5\nq_y = 0.4\nq_z = 0.2\n")
                .unwrap();
        let err = config.validate().unwrap_err();
        assert_eq!(err.exit_code(), 1);
        let message = err.to_string();
        assert!(message.contains("q_x=0.5"), "{message}");
        assert!(message.contains("sum to at most 1"), "{message}");
    }

    #[test]
    fn duplicate_seeds_and_zero_budgets_are_config_errors() {
        let base = "benchmark = \"maxcut-cycle4\"\n";
        let dup: RunConfig =
            toml::from_str(&format!("{base}[output]\nseeds = [1, 1]\n")).unwrap();
        assert!(dup.validate().unwrap_err().to_string().contains("twice"));
        let zero: RunConfig =
            toml::from_str(&format!("{base}[train]\niterations = 0\n")).unwrap();
        assert!(zero.validate().is_err());
        let empty: RunConfig =
            toml::from_str(&format!("{base}[output]\nseeds = []\n")).unwrap();
        assert!(empty.validate().is_err());
    }

    #[test]
    fn custom_maxcut_resolves_relative_to_the_config_dir() {
        let dir = tempfile::tempdir().unwrap();
        let graph_path = dir.path().join("square.json");
        let mut f = fs::File::create(&graph_path).unwrap();
        write!(f, "{{\"nodes\": 4, \"edges\": [[0,1],[1,2],[2,3],[3,0]]}}").unwrap();
        let config: RunConfig = toml::from_str(
            "[benchmark]\nkind = \"maxcut\"\ngraph = \"square.json\"\n",
        )
        .unwrap();
        config.validate().unwrap();
        let instance = config.instance(dir.path()).unwrap();
        assert_eq!(instance.kind(), BenchmarkKind::MaxCut);
        assert_eq!(instance.n(), 4);
        // Missing file is a config-class failure naming the path.
        let gone: RunConfig =
            toml::from_str("[benchmark]\nkind = \"maxcut\"\ngraph = \"gone.json\"\n").unwrap();
        let err = gone.instance(dir.path()).unwrap_err();
        assert_eq!(err.exit_code(), 1, "{err}");
    }

    #[test]
    fn custom_benchmarks_reject_fields_their_kind_ignores() {
        let config: RunConfig = toml::from_str(
            "[benchmark]\nkind = \"maxcut\"\ngraph = \"g.json\"\npenalty = 3.0\n",
        )
        .unwrap();
        let err = config.instance(Path::new(".")).unwrap_err();
        assert!(err.to_string().contains("penalty"), "{err}");
        let config: RunConfig = toml::from_str("[benchmark]\nkind = \"qaoa\"\n").unwrap();
        let err = config.instance(Path::new(".")).unwrap_err();
        assert!(err.to_string().contains("unknown benchmark kind"), "{err}");
        let config: RunConfig = toml::from_str("[benchmark]\nkind = \"tsp\"\n").unwrap();
        assert!(config.instance(Path::new(".")).is_err());
    }

    #[test]
    fn inline_tsp_and_vqe_files_resolve() {
        let config: RunConfig = toml::from_str(
            "[benchmark]\nkind = \"tsp\"\ndistances = [[0.0,1.0,2.0],[1.0,0.0,3.0],[2.0,3.0,0.0]]\n",
        )
        .unwrap();
        let instance = config.instance(Path::new(".")).unwrap();
        assert_eq!(instance.kind(), BenchmarkKind::Tsp);

        let dir = tempfile::tempdir().unwrap();
        let ham = dir.path().join("toy.txt");
        fs::write(&ham, "# ground_energy=-1.0 electrons=1\n1.0 Z\n").unwrap();
        let config: RunConfig = toml::from_str(
            "[benchmark]\nkind = \"vqe\"\nhamiltonian = \"toy.txt\"\nelectrons = 1\n",
        )
        .unwrap();
        let instance = config.instance(dir.path()).unwrap();
        assert_eq!(instance.kind(), BenchmarkKind::Vqe);
        assert_eq!(instance.n(), 1);
    }

    #[test]
    fn file_hash_is_stable_and_content_sensitive() {
        let a = hash_hex(b"benchmark = \"maxcut-cycle4\"\n");
        let b = hash_hex(b"benchmark = \"maxcut-cycle4\"\n");
        let c = hash_hex(b"benchmark = \"maxcut-cycle4\" \n");
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 64);
        assert!(a.chars().all(|ch| ch.is_ascii_hexdigit()));
    }

    #[test]
    fn load_reads_hashes_and_validates() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("exp.toml");
        fs::write(&path, "benchmark = \"maxcut-cycle4\"\n[output]\nseeds = [5]\n").unwrap();
        let loaded = load(&path).unwrap();
        assert_eq!(loaded.name, "exp");
        assert_eq!(loaded.base_dir, dir.path());
        assert_eq!(loaded.config.output.seeds, vec![5]);
        assert_eq!(loaded.hash.len(), 64);
        assert!(load(&dir.path().join("missing.toml")).is_err());
        let bad = dir.path().join("bad.toml");
        fs::write(&bad, "benchmark = \"maxcut-cycle4\"\nnot a toml line\n").unwrap();
        let err = load(&bad).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("bad.toml"), "{err}");
    }
}
