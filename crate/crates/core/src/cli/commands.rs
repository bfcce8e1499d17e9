use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::analysis::export::{analysis_csv, scatter_csv, sorted_csv, sweep_csv};
use crate::analysis::{
    analyze as run_analysis, join_metrics, parse_branch_report, tally_results, AnalysisOptions,
    AnalysisSummary, ClassMetrics, ReportError, ReportFormat,
};
use crate::campaign::{read_journal, Campaign, CampaignConfig, CampaignError, JournalError, RunOptions};
use crate::jsonl::JsonlError;
use crate::mutgen::database::{read_class_index, read_database, write_class_index, write_database, ClassEntry};
use crate::mutgen::discover::discover_sources;
use crate::mutgen::mutant::portable_path;
use crate::mutgen::{generate_mutants, Mutant, OperatorSet};
use crate::sampling::{
    estimate_budget, fit_time_model, uniform_sample, weighted_sample, SamplingPlan, Strategy,
    TimeModel, WeightedParams,
};

use super::config::ProjectConfig;
use super::{
    AnalyzeArgs, BudgetArgs, CliError, ModelArgs, MutateArgs, ReportArgs, RunArgs, SampleArgs,
    StrategyArg, EXIT_BASELINE, EXIT_COVERAGE, EXIT_OK, EXIT_REPORT,
};

const HOUR: f64 = 3600.0;

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)
            .map_err(|e| CliError::input(format!("{}: {e}", parent.display())))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    write_file(path, &text)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn load_database(config: &ProjectConfig) -> Result<Vec<Mutant>, CliError> {
    read_database(&config.mutant_db).map_err(|e| match e {
        JsonlError::Io { .. } => CliError::input(format!("{e} (run `mutcov mutate` first)")),
        JsonlError::Parse { .. } => CliError::input(e.to_string()),
    })
}

pub(super) fn mutate(config: &ProjectConfig, args: &MutateArgs) -> Result<u8, CliError> {
    let operators = if args.operators.is_empty() {
        config.operators.clone()
    } else {
        OperatorSet::parse(&args.operators).map_err(|e| CliError::input(e.to_string()))?
    };
    let files = discover_sources(
        &config.workspace_root,
        &config.source_root,
        &config.include_globs,
        &config.exclude_globs,
    )
    .map_err(|e| CliError::input(format!("bad glob: {e}")))?;
    if files.is_empty() {
        return Err(CliError::input("no source files matched the include/exclude globs"));
    }

    let mut mutants = Vec::new();
    let mut classes = Vec::new();
    for file in &files {
        let generated = generate_mutants(&config.workspace_root, file, &config.source_root, &operators)
            .map_err(|e| CliError::input(format!("{}: {e}", file.display())))?;
        for d in &generated.diagnostics {
            log::warn!("{d}");
        }
        classes.push(ClassEntry {
            class_name: generated.class_name,
            file: portable_path(file),
            mutants: generated.mutants.len(),
        });
        mutants.extend(generated.mutants);
    }
    write_database(&config.mutant_db, &mutants).map_err(|e| CliError::input(e.to_string()))?;
    write_class_index(&config.class_index, &classes)
        .map_err(|e| CliError::input(format!("{}: {e}", config.class_index.display())))?;

    for c in &classes {
        println!("{}\t{}", c.class_name, c.mutants);
    }
    println!(
        "{} mutants in {} classes written to {}",
        mutants.len(),
        classes.len(),
        config.mutant_db.display()
    );
    Ok(EXIT_OK)
}

fn model_from(args: &ModelArgs, config: Option<&ProjectConfig>) -> Option<TimeModel> {
    match (args.model_offset, args.model_slope) {
        (Some(offset), Some(slope)) => Some(TimeModel::with_coefficients(offset, slope)),
        _ => config
            .and_then(|c| c.time_model)
            .map(|m| TimeModel::with_coefficients(m.offset, m.slope)),
    }
}

fn budget_count(model: &TimeModel, hours: f64, iter_seconds: f64) -> Result<u64, CliError> {
    estimate_budget(model, hours * HOUR, iter_seconds).map_err(|e| CliError::input(e.to_string()))
}

pub(super) fn sample(config: &ProjectConfig, args: &SampleArgs) -> Result<u8, CliError> {
    let mutants = load_database(config)?;
    let total = mutants.len();
    if total == 0 {
        return Err(CliError::input("the mutant database is empty"));
    }
    let rate = match (args.rate, args.budget_hours) {
        (Some(rate), _) => rate,
        (None, Some(hours)) => {
            let model = model_from(&args.model, Some(config)).ok_or_else(|| {
                CliError::input("--budget-hours needs --model-offset/--model-slope or time_model in the config")
            })?;
            let iter = args.iter_seconds.expect("clap requires --iter-seconds");
            let count = budget_count(&model, hours, iter)?;
            println!("budget allows {count} mutants");
            if count == 0 {
                log::warn!("the budget allows no mutants; selecting the smallest possible sample");
                1.0 / total as f64
            } else {
                (count as f64 / total as f64).min(1.0)
            }
        }
        (None, None) => return Err(CliError::input("pass --rate or --budget-hours")),
    };
    let seed = args.seed.unwrap_or(config.seed);

    let (selected, plan, warning) = match args.strategy {
        StrategyArg::Uniform => {
            let selected = uniform_sample(&mutants, rate, seed).map_err(|e| CliError::input(e.to_string()))?;
            let mut quotas = BTreeMap::new();
            for m in &selected {
                *quotas.entry(m.class_name.clone()).or_insert(0) += 1;
            }
            let plan = SamplingPlan {
                strategy: Strategy::Uniform,
                target_ratio: rate,
                seed,
                beta: None,
                min_per_class: 0,
                quotas,
            };
            (selected, plan, None)
        }
        StrategyArg::Weighted => {
            let mut by_class: BTreeMap<String, Vec<Mutant>> = BTreeMap::new();
            for m in &mutants {
                by_class.entry(m.class_name.clone()).or_default().push(m.clone());
            }
            let params = WeightedParams {
                target_ratio: rate,
                beta: args.beta,
                min_per_class: args.min_per_class,
                seed,
            };
            let s = weighted_sample(&by_class, &params).map_err(|e| CliError::input(e.to_string()))?;
            // back to database order
            let chosen: HashSet<&str> = s.selected.iter().map(|m| m.id.as_str()).collect();
            let selected = mutants.iter().filter(|m| chosen.contains(m.id.as_str())).cloned().collect();
            (selected, s.plan, s.warning)
        }
    };
    if let Some(w) = &warning {
        eprintln!("warning: {w}");
    }

    let mut ids = String::new();
    for m in &selected {
        ids.push_str(&m.id);
        ids.push('\n');
    }
    write_file(&config.sample_ids, &ids)?;
    write_json(&config.sample_plan, &plan)?;
    println!(
        "selected {} of {} mutants ({:.1}%) into {}",
        selected.len(),
        total,
        100.0 * selected.len() as f64 / total as f64,
        config.sample_ids.display()
    );
    Ok(EXIT_OK)
}

fn read_subset(path: &Path, mutants: &[Mutant]) -> Result<Vec<Mutant>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let by_id: HashMap<&str, &Mutant> = mutants.iter().map(|m| (m.id.as_str(), m)).collect();
    let mut seen = HashSet::new();
    let mut subset = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let id = line.trim();
        if id.is_empty() || !seen.insert(id) {
            continue;
        }
        let m = by_id.get(id).ok_or_else(|| {
            CliError::input(format!("{}:{}: unknown mutant id `{id}`", path.display(), i + 1))
        })?;
        subset.push((*m).clone());
    }
    Ok(subset)
}

fn campaign_error(e: CampaignError) -> CliError {
    match e {
        CampaignError::BaselineNotGreen { .. } => CliError::new(EXIT_BASELINE, e.to_string()),
        other => CliError::input(other.to_string()),
    }
}

pub(super) fn run(config: &ProjectConfig, args: &RunArgs) -> Result<u8, CliError> {
    let mutants = load_database(config)?;
    let chosen = match &args.subset {
        Some(path) => read_subset(path, &mutants)?,
        None => mutants.clone(),
    };
    let campaign_config = CampaignConfig {
        workspace_root: config.workspace_root.clone(),
        compile_cmd: config.compile_cmd.clone(),
        test_cmd: config.test_cmd.clone(),
        timeout_seconds: args.timeout.or(config.timeout_seconds),
        workers: args.workers.unwrap_or(config.workers),
    };
    // a previous run killed mid-iteration may have left a file mutated
    let recovered = crate::mutgen::patch::recover_workspace(&config.workspace_root, &mutants)
        .map_err(|e| CliError::input(e.to_string()))?;
    for id in recovered {
        log::warn!("restored a file left mutated by mutant {id}");
    }
    let campaign = Campaign::prepare(campaign_config).map_err(campaign_error)?;
    log::info!(
        "baseline green in {:.2}s; timeout {:.2}s",
        campaign.baseline_seconds(),
        campaign.timeout().as_secs_f64()
    );
    let outcome = campaign
        .run(&chosen, &config.journal, &RunOptions { limit: args.limit })
        .map_err(campaign_error)?;
    let summary = outcome.summary();
    write_json(&config.reports_dir.join("campaign_summary.json"), &summary)?;
    println!("{} executed, {} skipped", outcome.executed, outcome.skipped);
    println!(
        "{} results: {} killed, {} survived, {} invalid, {} timeout",
        summary.total, summary.killed, summary.survived, summary.invalid, summary.timeout
    );
    Ok(EXIT_OK)
}

fn report_format(args: &AnalyzeArgs) -> Result<ReportFormat, CliError> {
    if let Some(f) = args.format {
        return Ok(f);
    }
    match args.branch_report.extension().and_then(|e| e.to_str()) {
        Some(ext) => ext.parse().map_err(CliError::input),
        None => Err(CliError::input("cannot infer the report format; pass --format")),
    }
}

fn class_list(config: &ProjectConfig, mutants: &[Mutant]) -> Result<Vec<String>, CliError> {
    let mut classes: Vec<String> = match read_class_index(&config.class_index) {
        Ok(entries) => entries.into_iter().map(|e| e.class_name).collect(),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            log::warn!(
                "{} missing; classes without mutants will not be listed",
                config.class_index.display()
            );
            mutants.iter().map(|m| m.class_name.clone()).collect()
        }
        Err(e) => return Err(CliError::input(e.to_string())),
    };
    classes.sort();
    classes.dedup();
    Ok(classes)
}

pub(super) fn analyze(config: &ProjectConfig, args: &AnalyzeArgs) -> Result<u8, CliError> {
    let mutants = load_database(config)?;
    let classes = class_list(config, &mutants)?;
    if !config.journal.exists() {
        return Err(CliError::input(format!(
            "{} not found (run `mutcov run` first)",
            config.journal.display()
        )));
    }
    let results = read_journal(&config.journal).map_err(|e: JournalError| CliError::input(e.to_string()))?;
    let format = report_format(args)?;
    let branches = parse_branch_report(&args.branch_report, format).map_err(|e| match e {
        ReportError::Io { .. } => CliError::input(e.to_string()),
        other => CliError::new(
            EXIT_REPORT,
            format!("{}: {other}", args.branch_report.display()),
        ),
    })?;

    let tally = tally_results(&mutants, &results);
    let joined = join_metrics(&classes, &tally, &branches);
    let options = AnalysisOptions {
        threshold: args.threshold,
        t_max: args.t_max,
        window: args.window,
        exclude_zero_mutant: args.exclude_zero_mutant,
    };
    let analysis = run_analysis(joined.records, &options);
    if analysis.plateau_missing {
        log::warn!("category counts never settle below t = {}; using it", args.t_max);
    }

    let dir = &config.reports_dir;
    write_file(&dir.join("analysis.csv"), &analysis_csv(&analysis))?;
    write_json(&dir.join("summary.json"), &analysis.summary)?;
    write_json(&dir.join("metrics.json"), &analysis.records)?;
    let mut diagnostics = String::new();
    for name in &joined.unmatched_report_rows {
        let _ = writeln!(diagnostics, "unmatched report row: {name}");
    }
    for name in &joined.missing_from_report {
        let _ = writeln!(diagnostics, "no report row: {name}");
    }
    write_file(&dir.join("diagnostics.txt"), &diagnostics)?;
    if !diagnostics.is_empty() {
        log::warn!(
            "{} unmatched report rows, {} classes without report rows (see diagnostics.txt)",
            joined.unmatched_report_rows.len(),
            joined.missing_from_report.len()
        );
    }

    let s = &analysis.summary;
    println!("threshold t = {}", s.threshold_t);
    println!(
        "SimCov {}  LoB-HiM {}  HiB-LoM {}  NoB {}  NoM {}",
        s.counts.sim_cov, s.counts.lob_him, s.counts.hib_lom, s.counts.nob, s.counts.nom
    );
    match s.kendall {
        Some(k) => println!("kendall tau_b = {:.4} (p = {:.3e})", k.tau, k.p),
        None => println!("kendall tau_b undefined"),
    }
    match s.pearson {
        Some(p) => println!("pearson r = {:.4} (p = {:.3e})", p.r, p.p),
        None => println!("pearson r undefined"),
    }
    println!(
        "overall branch coverage {:.1}%, mutation coverage {:.1}%",
        s.overall.branch_pct, s.overall.mutation_pct
    );

    if let Some(min) = args.min_coverage {
        if s.overall.mutation_pct < min {
            return Err(CliError::new(
                EXIT_COVERAGE,
                format!("mutation coverage {:.1}% is below {min}%", s.overall.mutation_pct),
            ));
        }
    }
    Ok(EXIT_OK)
}

fn read_points(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let bad = || CliError::input(format!("{}:{}: expected `iterations,mutants`", path.display(), i + 1));
        let (x, y) = line.split_once(',').ok_or_else(bad)?;
        let x: f64 = x.trim().parse().map_err(|_| bad())?;
        let y: f64 = y.trim().parse().map_err(|_| bad())?;
        points.push((x, y));
    }
    Ok(points)
}

pub(super) fn budget(config: Option<&ProjectConfig>, args: &BudgetArgs) -> Result<u8, CliError> {
    let model = match &args.fit {
        Some(path) => {
            let model = fit_time_model(&read_points(path)?).map_err(|e| CliError::input(e.to_string()))?;
            println!("{}", serde_json::to_string_pretty(&model).expect("serializable"));
            Some(model)
        }
        None => model_from(&args.model, config),
    };
    let Some(hours) = args.budget_hours else {
        if model.is_none() {
            return Err(CliError::input("pass --fit, or --budget-hours with a model"));
        }
        return Ok(EXIT_OK);
    };
    let model = model.ok_or_else(|| {
        CliError::input("no time model: pass --fit, --model-offset/--model-slope, or set time_model in the config")
    })?;
    let iter = args.iter_seconds.expect("clap requires --iter-seconds");
    println!("{}", budget_count(&model, hours, iter)?);
    Ok(EXIT_OK)
}

pub(super) fn report(config: &ProjectConfig, args: &ReportArgs) -> Result<u8, CliError> {
    let dir = &config.reports_dir;
    let records: Vec<ClassMetrics> = read_json(&dir.join("metrics.json"))
        .map_err(|e| CliError::input(format!("{e} (run `mutcov analyze` first)")))?;
    let summary: AnalysisSummary = read_json(&dir.join("summary.json"))?;
    write_file(&dir.join("sorted.csv"), &sorted_csv(&records))?;
    write_file(&dir.join("scatter.csv"), &scatter_csv(&records))?;
    write_file(&dir.join("threshold_sweep.csv"), &sweep_csv(&records, args.t_max))?;
    let at_t = crate::analysis::count_categories(&records, summary.threshold_t);
    if at_t != summary.counts {
        log::warn!("summary.json counts differ from metrics.json at t = {}", summary.threshold_t);
    }
    println!("wrote sorted.csv, scatter.csv, threshold_sweep.csv to {}", dir.display());
    Ok(EXIT_OK)
}
