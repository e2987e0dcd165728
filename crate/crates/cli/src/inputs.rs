//! Input file schemas and loading: scenarios, experiments, code
//! descriptors. Paths inside files resolve against the working directory.

use crate::error::CliError;
use crate::manifest::ManifestBuilder;
use scram_core::ldpc::ParityCheckMatrix;
use scram_core::scram::{ScramConfig, SlotPolicy, UserCode};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// `{n, k, m, alist_path}`: a code descriptor for CLI consumption. The
/// declared dimensions are checked against the parsed matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeDescriptor {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub alist_path: String,
}

/// One user entry of a scenario: the code's alist plus its payload size.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioUser {
    pub alist_path: String,
    pub k: usize,
}

/// `{users: [{alist_path, k}], n_slots, seed}` with an optional sampling
/// policy. `N_s` is accepted as an alias for `n_slots`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub users: Vec<ScenarioUser>,
    #[serde(alias = "N_s")]
    pub n_slots: usize,
    pub seed: u64,
    #[serde(default)]
    pub policy: SlotPolicy,
}

/// Either an inline scenario or a path to one.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScenarioRef {
    Path(String),
    Inline(ScenarioFile),
}

/// `{scenario, snr_db, frames, max_iters, seed}` plus the fading mode.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentFile {
    pub scenario: ScenarioRef,
    pub snr_db: Vec<f64>,
    pub frames: usize,
    pub max_iters: usize,
    pub seed: u64,
    #[serde(default = "default_fading")]
    pub fading: FadingChoice,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FadingChoice {
    Unit,
    SeededFlat,
}

fn default_fading() -> FadingChoice {
    FadingChoice::Unit
}

impl From<FadingChoice> for scram_core::decoder::FadingModel {
    fn from(value: FadingChoice) -> Self {
        match value {
            FadingChoice::Unit => scram_core::decoder::FadingModel::Unit,
            FadingChoice::SeededFlat => scram_core::decoder::FadingModel::SeededFlat,
        }
    }
}

pub fn read_file(path: &Path, manifest: &mut ManifestBuilder) -> Result<String, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    manifest.record_input(path, &bytes);
    String::from_utf8(bytes)
        .map_err(|_| CliError::Input(format!("{} is not UTF-8 text", path.display())))
}

/// Deserializes JSON, mapping schema problems (missing or invalid fields) to
/// usage errors so the offending field is named, and syntax problems to
/// input errors.
pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| {
        if e.is_data() {
            CliError::Usage(format!("{what}: {e}"))
        } else {
            CliError::Input(format!("{what}: {e}"))
        }
    })
}

pub fn resolve(workdir: &Path, path: &str) -> PathBuf {
    let p = Path::new(path);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        workdir.join(p)
    }
}

/// A scenario loaded into memory: the config plus the resolved file form
/// for re-emission.
pub struct LoadedScenario {
    pub config: ScramConfig,
    pub policy: SlotPolicy,
    pub resolved: ScenarioFile,
}

pub fn load_scenario(
    scenario: &ScenarioFile,
    workdir: &Path,
    seed_override: Option<u64>,
    manifest: &mut ManifestBuilder,
) -> Result<LoadedScenario, CliError> {
    if scenario.users.is_empty() {
        return Err(CliError::Usage("scenario: users must not be empty".into()));
    }
    let seed = seed_override.unwrap_or(scenario.seed);
    let mut users = Vec::with_capacity(scenario.users.len());
    let mut resolved_users = Vec::with_capacity(scenario.users.len());
    for user in &scenario.users {
        let path = resolve(workdir, &user.alist_path);
        let text = read_file(&path, manifest)?;
        let matrix = ParityCheckMatrix::parse_alist(&text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        resolved_users
            .push(ScenarioUser { alist_path: path.display().to_string(), k: user.k });
        users.push(UserCode { matrix, info_bits: user.k });
    }
    let resolved = ScenarioFile {
        users: resolved_users,
        n_slots: scenario.n_slots,
        seed,
        policy: scenario.policy,
    };
    Ok(LoadedScenario {
        config: ScramConfig { users, n_slots: scenario.n_slots, seed },
        policy: scenario.policy,
        resolved,
    })
}

pub fn load_scenario_ref(
    scenario: &ScenarioRef,
    workdir: &Path,
    seed_override: Option<u64>,
    manifest: &mut ManifestBuilder,
) -> Result<LoadedScenario, CliError> {
    match scenario {
        ScenarioRef::Inline(file) => load_scenario(file, workdir, seed_override, manifest),
        ScenarioRef::Path(path) => {
            let full = resolve(workdir, path);
            let text = read_file(&full, manifest)?;
            let file: ScenarioFile = parse_json(&text, &full.display().to_string())?;
            load_scenario(&file, workdir, seed_override, manifest)
        }
    }
}
