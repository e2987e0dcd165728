//! The four subcommands. Every JSON report embeds its run manifest; CSV
//! output is pure data, with the manifest written to a sibling
//! `*.manifest.json` when the report goes to a file.

use crate::error::CliError;
use crate::inputs::{
    load_scenario, load_scenario_ref, parse_json, read_file, resolve, CodeDescriptor,
    ExperimentFile, LoadedScenario, ScenarioFile,
};
use crate::manifest::ManifestBuilder;
use crate::{Engine, Format};
use scram_core::cycles::{self, oracle};
use scram_core::decoder::{run_per_experiment, PerExperimentSpec, DEFAULT_HYPOTHESIS_LIMIT};
use scram_core::global8;
use scram_core::ldpc::ParityCheckMatrix;
use scram_core::scram::{
    self, assign_slots_with_policy, build_hybrid_matrix, build_system, channel_load,
    AssignmentRecord, ScramSystem, SlotAssignment,
};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

pub const ORACLE_BUDGET_ENV: &str = "SCRAM_ORACLE_BUDGET";
pub const HYPOTHESIS_LIMIT_ENV: &str = "SCRAM_HYPOTHESIS_LIMIT";
pub const VERIFY_MAX_NODES_ENV: &str = "SCRAM_VERIFY_MAX_NODES";

fn env_u64(name: &str, default: u64) -> Result<u64, CliError> {
    match std::env::var(name) {
        Ok(v) => v
            .parse::<u64>()
            .map_err(|_| CliError::Usage(format!("{name} must be an integer, got `{v}`"))),
        Err(_) => Ok(default),
    }
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::io(&format!("writing {}", path.display()), e)),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn write_json(path: &Path, value: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("serializing {}: {e}", path.display())))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(&format!("writing {}", path.display()), e))
}

fn to_value<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report types serialize")
}

fn validate_l_max(l_max: Option<usize>) -> Result<(), CliError> {
    if let Some(l) = l_max {
        if l < 4 || l % 2 != 0 {
            return Err(CliError::Usage(format!(
                "--l-max must be even and at least 4, got {l}"
            )));
        }
    }
    Ok(())
}

pub struct AnalyzeArgs {
    pub input: PathBuf,
    pub l_max: Option<usize>,
    pub engine: Engine,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub per_node: bool,
    pub seed: Option<u64>,
    pub workdir: PathBuf,
}

pub fn analyze_ldpc(args: AnalyzeArgs) -> Result<(), CliError> {
    validate_l_max(args.l_max)?;
    let mut manifest = ManifestBuilder::new("analyze-ldpc");
    manifest.seed(args.seed.unwrap_or(0));
    let input = resolve(&args.workdir, &args.input.display().to_string());

    let (matrix, descriptor) = load_code(&input, &args.workdir, &mut manifest)?;
    manifest.config(json!({
        "input": input.display().to_string(),
        "descriptor": descriptor,
        "l_max": args.l_max,
        "engine": format!("{:?}", args.engine).to_lowercase(),
        "format": format!("{:?}", args.format).to_lowercase(),
    }));

    let diagnostics: Vec<String> = matrix.validate().iter().map(|d| d.to_string()).collect();
    let graph = matrix.to_tanner_graph();
    let mut profile = match args.engine {
        Engine::Full => cycles::count_cycles_full(&graph, args.l_max),
        Engine::Half => cycles::count_cycles_half(&graph, args.l_max),
        Engine::Oracle => {
            let budget = env_u64(ORACLE_BUDGET_ENV, oracle::DEFAULT_BUDGET)?;
            let l_max = match args.l_max {
                Some(l) => l,
                None => cycles::girth(&graph).counting_window().unwrap_or(0),
            };
            if l_max == 0 {
                cycles::count_cycles_full(&graph, None) // acyclic; engines agree trivially
            } else {
                oracle::profile(&graph, l_max, budget)
                    .map_err(|e| CliError::Budget(e.to_string()))?
            }
        }
    };
    if !args.per_node {
        profile.per_node = None;
    }

    match args.format {
        Format::Csv => {
            let csv = profile.to_csv();
            if let Some(out) = &args.out {
                let manifest = manifest.finish();
                write_json(&out.with_extension("manifest.json"), &to_value(&manifest))?;
            }
            emit(args.out.as_deref(), &csv)
        }
        Format::Json => {
            let mut report = to_value(&profile);
            let obj = report.as_object_mut().expect("profile is an object");
            obj.insert("diagnostics".into(), json!(diagnostics));
            obj.insert("seed".into(), json!(args.seed.unwrap_or(0)));
            obj.insert("manifest".into(), to_value(&manifest.finish()));
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            emit(args.out.as_deref(), &text)
        }
    }
}

fn load_code(
    input: &Path,
    workdir: &Path,
    manifest: &mut ManifestBuilder,
) -> Result<(ParityCheckMatrix, Option<CodeDescriptor>), CliError> {
    let is_descriptor = input.extension().is_some_and(|e| e == "json");
    if is_descriptor {
        let text = read_file(input, manifest)?;
        let descriptor: CodeDescriptor = parse_json(&text, &input.display().to_string())?;
        let alist_path = resolve(workdir, &descriptor.alist_path);
        let alist = read_file(&alist_path, manifest)?;
        let matrix = ParityCheckMatrix::parse_alist(&alist)
            .map_err(|e| CliError::Input(format!("{}: {e}", alist_path.display())))?;
        if matrix.n_cols() != descriptor.n || matrix.n_rows() != descriptor.m {
            return Err(CliError::Input(format!(
                "{}: descriptor declares {}x{} but the alist is {}x{}",
                input.display(),
                descriptor.m,
                descriptor.n,
                matrix.n_rows(),
                matrix.n_cols()
            )));
        }
        Ok((matrix, Some(descriptor)))
    } else {
        let text = read_file(input, manifest)?;
        let matrix = ParityCheckMatrix::parse_alist(&text)
            .map_err(|e| CliError::Input(format!("{}: {e}", input.display())))?;
        Ok((matrix, None))
    }
}

pub struct BuildArgs {
    pub scenario: PathBuf,
    pub out_dir: PathBuf,
    pub format: Format,
    pub seed: Option<u64>,
    pub workdir: PathBuf,
}

pub fn build_scram(args: BuildArgs) -> Result<(), CliError> {
    let mut manifest = ManifestBuilder::new("build-scram");
    let scenario_path = resolve(&args.workdir, &args.scenario.display().to_string());
    let text = read_file(&scenario_path, &mut manifest)?;
    let file: ScenarioFile = parse_json(&text, &scenario_path.display().to_string())?;
    let loaded = load_scenario(&file, &args.workdir, args.seed, &mut manifest)?;
    manifest.seed(loaded.config.seed);
    manifest.config(to_value(&loaded.resolved));

    let assignment = assign_slots_with_policy(&loaded.config, loaded.policy)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let system =
        build_system(&loaded.config, &assignment).map_err(|e| CliError::Usage(e.to_string()))?;
    let hybrid = build_hybrid_matrix(&system);

    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::io(&format!("creating {}", args.out_dir.display()), e))?;
    let record = AssignmentRecord::from_assignment(&assignment, loaded.config.seed);
    write_json(&args.out_dir.join("assignment.json"), &to_value(&record))?;
    std::fs::write(args.out_dir.join("hybrid.alist"), hybrid.matrix().to_alist())
        .map_err(|e| CliError::io("writing hybrid.alist", e))?;
    write_json(&args.out_dir.join("scenario.resolved.json"), &to_value(&loaded.resolved))?;

    let report = system_report(&loaded, &system)?;
    match args.format {
        Format::Json => {
            let mut full = report;
            full.as_object_mut()
                .expect("report is an object")
                .insert("manifest".into(), to_value(&manifest.finish()));
            write_json(&args.out_dir.join("report.json"), &full)?;
        }
        Format::Csv => {
            let csv = report_csv(&report);
            std::fs::write(args.out_dir.join("report.csv"), csv)
                .map_err(|e| CliError::io("writing report.csv", e))?;
            write_json(&args.out_dir.join("report.manifest.json"), &to_value(&manifest.finish()))?;
        }
    }
    for name in ["assignment.json", "hybrid.alist", "scenario.resolved.json"] {
        println!("wrote {}", args.out_dir.join(name).display());
    }
    let report_name = match args.format {
        Format::Json => "report.json",
        Format::Csv => "report.csv",
    };
    println!("wrote {}", args.out_dir.join(report_name).display());
    Ok(())
}

fn system_report(loaded: &LoadedScenario, system: &ScramSystem) -> Result<Value, CliError> {
    let load = channel_load(&loaded.config).map_err(|e| CliError::Usage(e.to_string()))?;
    let info_bits: usize = (0..system.user_count()).map(|u| system.info_bits(u)).sum();
    let warnings: Vec<String> = system.warnings().iter().map(|w| w.to_string()).collect();
    Ok(json!({
        "seed": loaded.config.seed,
        "rng": scram::RNG_ALGORITHM,
        "policy": loaded.policy,
        "n_vars": system.n_vars(),
        "n_ldpc_checks": system.n_checks(),
        "n_slots": system.n_slots(),
        "channel_load": load,
        "info_bits_total": info_bits,
        "collision_histogram": system.collision_histogram(),
        "local_girth": to_value(&scram::local_girth(system)),
        "warnings": warnings,
    }))
}

fn report_csv(report: &Value) -> String {
    let mut out = String::from("key,value\n");
    let obj = report.as_object().expect("report is an object");
    for (k, v) in obj {
        match v {
            Value::Array(items) => {
                let joined: Vec<String> = items.iter().map(ToString::to_string).collect();
                out.push_str(&format!("{k},\"{}\"\n", joined.join(" ")));
            }
            other => out.push_str(&format!("{k},{other}\n")),
        }
    }
    out
}

pub struct Global8Args {
    pub target: PathBuf,
    pub verify: bool,
    pub format: Format,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub workdir: PathBuf,
}

pub fn count_global8(args: Global8Args) -> Result<(), CliError> {
    let mut manifest = ManifestBuilder::new("count-global8");
    let target = resolve(&args.workdir, &args.target.display().to_string());
    let (system, seed) = if target.is_dir() {
        load_built_system(&target, &mut manifest)?
    } else {
        let text = read_file(&target, &mut manifest)?;
        let file: ScenarioFile = parse_json(&text, &target.display().to_string())?;
        let loaded = load_scenario(&file, &args.workdir, args.seed, &mut manifest)?;
        let assignment = assign_slots_with_policy(&loaded.config, loaded.policy)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let seed = loaded.config.seed;
        manifest.config(to_value(&loaded.resolved));
        (
            build_system(&loaded.config, &assignment)
                .map_err(|e| CliError::Usage(e.to_string()))?,
            seed,
        )
    };
    manifest.seed(seed);
    if system.policy() == scram::SlotPolicy::WithReplacement {
        return Err(CliError::Usage(
            "the global 8-cycle counter requires within-user distinct slots \
             (policy without_replacement)"
                .into(),
        ));
    }

    let report = global8::count_global_8cycles(&system);
    let mut verification: Option<global8::Global8Verification> = None;
    let mut verification_error: Option<String> = None;
    if args.verify {
        let max_nodes =
            env_u64(VERIFY_MAX_NODES_ENV, global8::VERIFY_MAX_NODES as u64)? as usize;
        match global8::verify_against_profile_with_limit(&system, max_nodes) {
            Ok(v) => verification = Some(v),
            Err(e) => verification_error = Some(e.to_string()),
        }
    }

    let text = match args.format {
        Format::Csv => {
            if let Some(out) = &args.out {
                let manifest = manifest.finish();
                write_json(&out.with_extension("manifest.json"), &to_value(&manifest))?;
            }
            report.to_csv()
        }
        Format::Json => {
            let mut value = to_value(&report);
            let obj = value.as_object_mut().expect("report is an object");
            obj.insert("seed".into(), json!(seed));
            if let Some(v) = &verification {
                obj.insert("verification".into(), to_value(v));
            }
            if let Some(e) = &verification_error {
                obj.insert("verification_error".into(), json!(e));
            }
            obj.insert("manifest".into(), to_value(&manifest.finish()));
            let mut text = serde_json::to_string_pretty(&value).expect("report serializes");
            text.push('\n');
            text
        }
    };
    emit(args.out.as_deref(), &text)?;

    if let Some(e) = verification_error {
        return Err(CliError::Budget(e));
    }
    if let Some(v) = verification {
        if !v.equal {
            return Err(CliError::VerificationMismatch);
        }
    }
    Ok(())
}

fn load_built_system(
    dir: &Path,
    manifest: &mut ManifestBuilder,
) -> Result<(ScramSystem, u64), CliError> {
    let scenario_path = dir.join("scenario.resolved.json");
    let text = read_file(&scenario_path, manifest)?;
    let file: ScenarioFile = parse_json(&text, &scenario_path.display().to_string())?;
    // Paths in the resolved scenario are absolute; the workdir is moot.
    let loaded = load_scenario(&file, Path::new(""), None, manifest)?;
    let assignment_path = dir.join("assignment.json");
    let assignment_text = read_file(&assignment_path, manifest)?;
    let record: AssignmentRecord =
        parse_json(&assignment_text, &assignment_path.display().to_string())?;
    let assignment: SlotAssignment =
        record.to_assignment().map_err(|e| CliError::Input(e.to_string()))?;
    manifest.config(to_value(&loaded.resolved));
    let system =
        build_system(&loaded.config, &assignment).map_err(|e| CliError::Input(e.to_string()))?;
    Ok((system, loaded.config.seed))
}

pub struct SimulateArgs {
    pub experiment: PathBuf,
    pub format: Format,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub workdir: PathBuf,
}

pub fn simulate(args: SimulateArgs) -> Result<(), CliError> {
    let mut manifest = ManifestBuilder::new("simulate");
    let path = resolve(&args.workdir, &args.experiment.display().to_string());
    let text = read_file(&path, &mut manifest)?;
    let experiment: ExperimentFile = parse_json(&text, &path.display().to_string())?;
    let loaded = load_scenario_ref(&experiment.scenario, &args.workdir, None, &mut manifest)?;
    let seed = args.seed.unwrap_or(experiment.seed);
    manifest.seed(seed);
    manifest.config(json!({
        "scenario": to_value(&loaded.resolved),
        "snr_db": experiment.snr_db,
        "frames": experiment.frames,
        "max_iters": experiment.max_iters,
        "seed": seed,
        "fading": to_value(&experiment.fading),
    }));

    let assignment = assign_slots_with_policy(&loaded.config, loaded.policy)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let system =
        build_system(&loaded.config, &assignment).map_err(|e| CliError::Usage(e.to_string()))?;
    let spec = PerExperimentSpec {
        snr_db: experiment.snr_db.clone(),
        frames_per_point: experiment.frames,
        max_iters: experiment.max_iters,
        seed,
        fading: experiment.fading.into(),
        hypothesis_limit: env_u64(HYPOTHESIS_LIMIT_ENV, DEFAULT_HYPOTHESIS_LIMIT)?,
    };
    let table = run_per_experiment(&system, &spec).map_err(|e| match e {
        scram_core::decoder::DecoderError::CollisionTooLarge { .. } => {
            CliError::Budget(e.to_string())
        }
        scram_core::decoder::DecoderError::BadIterationLimit
        | scram_core::decoder::DecoderError::BadNoiseVariance { .. } => {
            CliError::Usage(e.to_string())
        }
        other => CliError::Input(other.to_string()),
    })?;

    match args.format {
        Format::Csv => {
            if let Some(out) = &args.out {
                let manifest = manifest.finish();
                write_json(&out.with_extension("manifest.json"), &to_value(&manifest))?;
            }
            emit(args.out.as_deref(), &table.to_csv())
        }
        Format::Json => {
            let mut value = to_value(&table);
            let obj = value.as_object_mut().expect("table is an object");
            obj.insert("seed".into(), json!(seed));
            obj.insert("manifest".into(), to_value(&manifest.finish()));
            let mut text = serde_json::to_string_pretty(&value).expect("table serializes");
            text.push('\n');
            emit(args.out.as_deref(), &text)
        }
    }
}
