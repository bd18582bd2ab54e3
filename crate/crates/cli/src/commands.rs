use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use vren_core::features::{build_dataset, write_features, FeatureFormat, TaskKind, WindowOptions};
use vren_core::notation::{corpus_to_json, lint_source, match_to_json, parse_corpus, serialize_corpus};
use vren_core::predictor::{
    evaluate_binary, evaluate_categorical, per_round_win_prob, rally_context, split_by_match, train_task,
    what_if, EvalReport, LinearModel, TrainConfig,
};
use vren_core::stats::{
    attack_table, distribution_csv, distribution_text, pass_set_quality, render_report, serve_receive_distribution,
    set_location_distribution, zones_csv, zones_text, ReportFormat,
};
use vren_core::synth::{generate_corpus, GeneratorProfile};
use vren_core::{Match, Rally, ServeType, VrenError};

use crate::{
    format_diagnostic, service, CliError, Command, CorpusFormat, EncodeArgs, FeatureFormatArg, GenerateArgs,
    OutFormat, RallyArgs, ReportKind, ServeArg, StatsArgs, TrainArgs, WhatIfArgs,
};

type CliResult<T = ()> = Result<T, CliError>;

pub fn execute(command: Command) -> CliResult {
    match command {
        Command::Parse(io) => {
            let matches = load(&io.input, true)?;
            let mut text = match matches.as_slice() {
                [one] => match_to_json(one),
                many => corpus_to_json(many),
            };
            text.push('\n');
            emit(io.output.as_deref(), &text)
        }
        Command::Format(io) => {
            let matches = load(&io.input, true)?;
            let text = serialize_corpus(&matches).map_err(|e| CliError::at(&io.input, e))?;
            emit(io.output.as_deref(), &text)
        }
        Command::Lint { input } => lint(&input),
        Command::Stats(args) => stats(args),
        Command::Generate(args) => generate(args),
        Command::Encode(args) => encode(args),
        Command::Train(args) => train(args),
        Command::Eval { model, input, output } => eval(&model, &input, output.as_deref()),
        Command::Predict(args) => predict(&args.rally),
        Command::Whatif(args) => whatif(args),
        Command::Serve(args) => service::serve_blocking(args),
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Domain {
        path: path.to_path_buf(),
        source: VrenError::Io {
            path: path.to_path_buf(),
            source: e,
        },
    })
}

/// Parse and lint a corpus file. Errors abort with located diagnostics;
/// warnings go to stderr when `warn` is set.
pub(crate) fn load(path: &Path, warn: bool) -> CliResult<Vec<Match>> {
    let text = read(path)?;
    let diagnostics = lint_source(&text);
    if diagnostics.iter().any(|d| d.is_error()) {
        return Err(CliError::Diagnostics {
            path: path.to_path_buf(),
            diagnostics,
        });
    }
    if warn {
        for d in &diagnostics {
            eprintln!("{}", format_diagnostic(path, d));
        }
    }
    parse_corpus(&text).map_err(|e| CliError::at(path, e))
}

fn emit(output: Option<&Path>, text: &str) -> CliResult {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Domain {
            path: path.to_path_buf(),
            source: VrenError::Io {
                path: path.to_path_buf(),
                source: e,
            },
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Other(format!("stdout: {e}")))
        }
    }
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

fn lint(input: &Path) -> CliResult {
    let text = read(input)?;
    let diagnostics = lint_source(&text);
    if diagnostics.iter().any(|d| d.is_error()) {
        return Err(CliError::Diagnostics {
            path: input.to_path_buf(),
            diagnostics,
        });
    }
    for d in &diagnostics {
        eprintln!("{}", format_diagnostic(input, d));
    }
    Ok(())
}

fn serve_type(s: ServeArg) -> ServeType {
    match s {
        ServeArg::Jump => ServeType::Jump,
        ServeArg::Float => ServeType::Float,
        ServeArg::Hybrid => ServeType::Hybrid,
    }
}

fn stats(args: StatsArgs) -> CliResult {
    if args.serve.is_some() && args.report != ReportKind::Zones {
        return Err(CliError::Usage("--serve only applies to --report zones".into()));
    }
    let needs_team = matches!(args.report, ReportKind::Table | ReportKind::Quality);
    if needs_team && args.team.is_none() {
        return Err(CliError::Usage("--team is required for this report".into()));
    }
    let matches = load(&args.input, false)?;
    let at = |e| CliError::at(&args.input, e);
    let text = match args.report {
        ReportKind::Table => {
            let report = attack_table(&matches, args.team.expect("checked").into()).map_err(at)?;
            let format = match args.format {
                OutFormat::Text => ReportFormat::Text,
                OutFormat::Csv => ReportFormat::Csv,
                OutFormat::Json => ReportFormat::Json,
            };
            render_report(&report, format)
        }
        ReportKind::Zones => {
            let counts = serve_receive_distribution(&matches, args.serve.map(serve_type));
            match args.format {
                OutFormat::Text => zones_text(&counts),
                OutFormat::Csv => zones_csv(&counts),
                OutFormat::Json => to_json(&counts.iter().map(|(z, n)| (z.to_string(), *n)).collect::<std::collections::BTreeMap<_, _>>()),
            }
        }
        ReportKind::Distribution => {
            let dist = set_location_distribution(&matches, args.team.map(Into::into)).map_err(at)?;
            match args.format {
                OutFormat::Text => distribution_text(&dist),
                OutFormat::Csv => distribution_csv(&dist),
                OutFormat::Json => to_json(&dist),
            }
        }
        ReportKind::Quality => {
            let q = pass_set_quality(&matches, args.team.expect("checked").into()).map_err(at)?;
            match args.format {
                OutFormat::Json => to_json(&q),
                OutFormat::Csv => format!(
                    "in_passes,out_passes,in_sets,out_sets,high_level\n{},{},{},{},{}\n",
                    q.in_passes, q.out_passes, q.in_sets, q.out_sets, q.high_level
                ),
                OutFormat::Text => format!(
                    "in_passes   {}\nout_passes  {}\nin_sets     {}\nout_sets    {}\nhigh_level  {}\n",
                    q.in_passes, q.out_passes, q.in_sets, q.out_sets, q.high_level
                ),
            }
        }
    };
    emit(args.output.as_deref(), &text)
}

fn load_profile(path: Option<&Path>) -> CliResult<GeneratorProfile> {
    match path {
        Some(p) => GeneratorProfile::load(p).map_err(|e| CliError::at(p, e)),
        None => Ok(GeneratorProfile::default()),
    }
}

fn generate(args: GenerateArgs) -> CliResult {
    let profile = load_profile(args.profile.as_deref())?;
    let corpus = generate_corpus(&profile, args.matches, args.rallies, args.seed)?;
    let text = match args.format {
        CorpusFormat::Vren => serialize_corpus(&corpus)?,
        CorpusFormat::Json => corpus_to_json(&corpus),
    };
    emit(args.output.as_deref(), &text)
}

fn window_options(window: usize, no_cross_rally: bool) -> WindowOptions {
    WindowOptions {
        k: window,
        cross_rally: !no_cross_rally,
    }
}

fn encode(args: EncodeArgs) -> CliResult {
    let matches = load(&args.input, false)?;
    let task: TaskKind = args.window.task.into();
    let opts = window_options(args.window.window, args.window.no_cross_rally);
    let fm = build_dataset(&matches, task, opts).map_err(|e| CliError::at(&args.input, e))?;
    let format = match args.format {
        FeatureFormatArg::Csv => FeatureFormat::Csv,
        FeatureFormatArg::Jsonl => FeatureFormat::Jsonl,
    };
    let mut buf = Vec::new();
    write_features(&fm, format, &mut buf).map_err(|e| CliError::Other(e.to_string()))?;
    emit(args.output.as_deref(), &String::from_utf8(buf).expect("feature output is UTF-8"))
}

/// Evaluate `model` on every example `matches` yields for its task.
pub(crate) fn evaluate(model: &LinearModel, matches: &[Match]) -> Result<EvalReport, VrenError> {
    let meta = model
        .meta
        .ok_or_else(|| VrenError::InvalidModel("model file has no task settings".into()))?;
    let fm = build_dataset(matches, meta.task, meta.options())?;
    if meta.task.is_binary() {
        let probs = fm.rows().map(|x| model.predict_binary(x)).collect::<Result<Vec<_>, _>>()?;
        let labels: Vec<u8> = fm.y.iter().map(|&y| y as u8).collect();
        evaluate_binary(&probs, &labels)
    } else {
        let dists = fm.rows().map(|x| model.predict_proba(x)).collect::<Result<Vec<_>, _>>()?;
        evaluate_categorical(&dists, &fm.y)
    }
}

fn train(args: TrainArgs) -> CliResult {
    let matches = load(&args.input, false)?;
    let task: TaskKind = args.window.task.into();
    let opts = window_options(args.window.window, args.window.no_cross_rally);
    let config = TrainConfig {
        learning_rate: args.lr,
        epochs: args.epochs,
        l2: args.l2,
        seed: args.seed,
        ..TrainConfig::default()
    };
    let at = |e| CliError::at(&args.input, e);
    let (train_set, test_set) = if args.holdout {
        let ids: Vec<String> = matches.iter().map(|m| m.match_id.clone()).collect();
        let split = split_by_match(&ids, args.seed).map_err(at)?;
        let pick = |ids: &[String]| -> Vec<Match> {
            matches.iter().filter(|m| ids.contains(&m.match_id)).cloned().collect()
        };
        (pick(&split.train), Some(pick(&split.test)))
    } else {
        (matches.clone(), None)
    };
    let model = train_task(&train_set, task, opts, config).map_err(at)?;
    model.save(&args.output)?;
    if let Some(test) = test_set {
        let report = evaluate(&model, &test).map_err(at)?;
        emit(None, &to_json(&report))?;
    }
    Ok(())
}

fn eval(model_path: &Path, input: &Path, output: Option<&Path>) -> CliResult {
    let model = LinearModel::load(model_path).map_err(|e| CliError::at(model_path, e))?;
    let matches = load(input, false)?;
    let report = evaluate(&model, &matches).map_err(|e| CliError::at(input, e))?;
    emit(output, &to_json(&report))
}

/// The match with `match_id` (or the only match) and the index of rally `rally_no` in it.
pub(crate) fn find_rally<'a>(
    matches: &'a [Match],
    match_id: Option<&str>,
    rally_no: u32,
) -> Result<(&'a Match, usize), VrenError> {
    let m = match match_id {
        Some(id) => matches
            .iter()
            .find(|m| m.match_id == id)
            .ok_or_else(|| VrenError::BadIndex(format!("no match with id `{id}`")))?,
        None => match matches {
            [one] => one,
            _ => {
                return Err(VrenError::BadIndex(format!(
                    "{} matches in scope; name one by id",
                    matches.len()
                )))
            }
        },
    };
    let idx = m
        .rallies
        .iter()
        .position(|r| r.rally_no == rally_no)
        .ok_or_else(|| VrenError::BadIndex(format!("match `{}` has no rally {rally_no}", m.match_id)))?;
    Ok((m, idx))
}

#[derive(Serialize)]
pub(crate) struct RallyPrediction {
    pub match_id: String,
    pub rally_no: u32,
    pub probabilities: Vec<f64>,
}

pub(crate) fn predict_rally(model: &LinearModel, m: &Match, idx: usize) -> Result<RallyPrediction, VrenError> {
    let rally: &Rally = &m.rallies[idx];
    Ok(RallyPrediction {
        match_id: m.match_id.clone(),
        rally_no: rally.rally_no,
        probabilities: per_round_win_prob(model, &rally_context(m, idx), rally)?,
    })
}

fn load_model_and_corpus(args: &RallyArgs) -> CliResult<(LinearModel, Vec<Match>)> {
    let model = LinearModel::load(&args.model).map_err(|e| CliError::at(&args.model, e))?;
    let matches = load(&args.input, false)?;
    Ok((model, matches))
}

fn predict(args: &RallyArgs) -> CliResult {
    let (model, matches) = load_model_and_corpus(args)?;
    let at = |e| CliError::at(&args.input, e);
    let (m, idx) = find_rally(&matches, args.match_id.as_deref(), args.rally).map_err(at)?;
    let prediction = predict_rally(&model, m, idx).map_err(at)?;
    emit(None, &to_json(&prediction))
}

fn whatif(args: WhatIfArgs) -> CliResult {
    let (model, matches) = load_model_and_corpus(&args.rally)?;
    let input: PathBuf = args.rally.input.clone();
    let at = |e| CliError::at(&input, e);
    let (m, idx) = find_rally(&matches, args.rally.match_id.as_deref(), args.rally.rally).map_err(at)?;
    if args.round == 0 {
        return Err(at(VrenError::BadIndex("round numbers start at 1".into())));
    }
    let result = what_if(
        &model,
        &rally_context(m, idx),
        &m.rallies[idx],
        args.round as usize - 1,
        &args.field,
        &args.value,
    )
    .map_err(at)?;
    emit(None, &to_json(&result))
}
