//! `mff` command-line front end.

mod config;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use mff::features::{build_feature_matrix, fit_standardize};
use mff::metrics::{error_report, Baseline, ComparisonTable};
use mff::series::{load_series, make_supervised, sliding_window, train_count, TimeSeries};
use mff::train::{evaluate_walk_forward, train_mff, TrainConfig, TrainedCheckpoint};
use mff::{Error, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use config::{FeatureArgs, FileConfig, RunManifest, TrainArgs};

#[derive(Debug, Parser)]
#[command(name = "mff", version, about = "Multi-feature fusion time-series forecasting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
struct InputArgs {
    /// Univariate CSV file with a header row.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Column holding the values (defaults to the last column).
    #[arg(long)]
    value_column: Option<String>,
    /// Column holding time labels (defaults to row numbers).
    #[arg(long)]
    timestamp_column: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train a model and write checkpoint, loss history and run manifest.
    Train {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        train: TrainArgs,
        /// Re-run from a previous run's manifest; flags still override it.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Forecast the value following the end of the input series.
    Predict {
        #[arg(long)]
        checkpoint: PathBuf,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Score a checkpoint on the held-out part of a series.
    Evaluate {
        #[arg(long)]
        checkpoint: PathBuf,
        #[command(flatten)]
        input: InputArgs,
        /// Per-point `t,y,yhat` CSV.
        #[arg(long, default_value = "predictions.csv")]
        output: PathBuf,
    },
    /// Compare the network with naive, SMA and OLS-trend baselines.
    Bench {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        train: TrainArgs,
        /// Comma-separated subset of mff, naive, sma, ols.
        #[arg(long, value_delimiter = ',', default_value = "mff,naive,sma,ols")]
        methods: Vec<Method>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        sma_k: u64,
        /// Directory for comparison.csv and comparison.txt.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Dump the per-slice feature matrix and its scaler.
    Features {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        window: u64,
        #[command(flatten)]
        features: FeatureArgs,
        /// Fraction of supervised examples the scaler is fitted on.
        #[arg(long, default_value_t = 0.8)]
        split: f64,
        /// Write standardized instead of raw values.
        #[arg(long)]
        standardized: bool,
        #[arg(long, default_value = "features.csv")]
        output: PathBuf,
        /// Scaler JSON path (defaults to `<output>.scaler.json`).
        #[arg(long)]
        scaler: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Mff,
    Naive,
    Sma,
    Ols,
}

#[derive(Serialize)]
struct ErrorOutput<'a> {
    error: &'a str,
    message: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let out = ErrorOutput {
                error: e.kind(),
                message: e.to_string(),
            };
            eprintln!("{}", serde_json::to_string(&out).expect("error serializes"));
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train {
            input,
            train,
            manifest,
            out_dir,
        } => cmd_train(input, train, manifest, &out_dir),
        Command::Predict {
            checkpoint,
            input,
            format,
        } => cmd_predict(&checkpoint, input, format),
        Command::Evaluate {
            checkpoint,
            input,
            output,
        } => cmd_evaluate(&checkpoint, input, &output),
        Command::Bench {
            input,
            train,
            methods,
            sma_k,
            out_dir,
        } => cmd_bench(input, train, &methods, sma_k as usize, out_dir.as_deref()),
        Command::Features {
            input,
            window,
            features,
            split,
            standardized,
            output,
            scaler,
        } => cmd_features(input, window as usize, features, split, standardized, &output, scaler),
    }
}

struct LoadedInput {
    path: PathBuf,
    value_column: String,
    timestamp_column: Option<String>,
    series: TimeSeries<f64>,
}

fn last_column(path: &Path) -> Result<String> {
    if !path.is_file() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::Csv(e.to_string()))?;
    let headers = rdr.headers().map_err(|e| Error::Csv(e.to_string()))?;
    headers
        .iter()
        .next_back()
        .map(|h| h.trim().to_string())
        .ok_or_else(|| Error::Csv("header row is empty".into()))
}

fn load_input(args: &InputArgs, file: &FileConfig) -> Result<LoadedInput> {
    let Some(path) = args.input.clone() else {
        Cli::command()
            .error(
                clap::error::ErrorKind::MissingRequiredArgument,
                "the following required argument was not provided: --input <INPUT>",
            )
            .exit();
    };
    let value_column = match args.value_column.clone().or_else(|| file.value_column.clone()) {
        Some(c) => c,
        None => last_column(&path)?,
    };
    let timestamp_column = args.timestamp_column.clone().or_else(|| file.timestamp_column.clone());
    let series = load_series(&path, &value_column, timestamp_column.as_deref())?;
    Ok(LoadedInput {
        path,
        value_column,
        timestamp_column,
        series,
    })
}

fn sha256_file(path: &Path) -> Result<String> {
    Ok(hex::encode(Sha256::digest(fs::read(path)?)))
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn write_json<V: Serialize>(path: &Path, value: &V) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn cmd_train(mut input: InputArgs, train: TrainArgs, manifest: Option<PathBuf>, out_dir: &Path) -> Result<()> {
    let started = unix_now();
    let mut base = TrainConfig::default();
    let mut recorded_hash = None;
    if let Some(m) = &manifest {
        let m = RunManifest::load(m)?;
        input.input.get_or_insert_with(|| PathBuf::from(&m.input));
        input.value_column.get_or_insert(m.value_column);
        if input.timestamp_column.is_none() {
            input.timestamp_column = m.timestamp_column;
        }
        recorded_hash = Some(m.input_sha256);
        base = m.config;
    }
    let (config, file) = train.resolve(base)?;
    let loaded = load_input(&input, &file)?;
    let hash = sha256_file(&loaded.path)?;
    if let Some(h) = recorded_hash {
        if h != hash {
            eprintln!("warning: input file differs from the one recorded in the manifest");
        }
    }

    let checkpoint = train_mff(&loaded.series, &config)?;

    fs::create_dir_all(out_dir)?;
    checkpoint.save(out_dir.join("checkpoint.json"))?;
    let mut losses = std::io::BufWriter::new(fs::File::create(out_dir.join("losses.csv"))?);
    checkpoint.write_loss_csv(&mut losses)?;
    losses.flush()?;

    let manifest = RunManifest {
        tool: "mff".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: "train".into(),
        input: loaded.path.display().to_string(),
        input_sha256: hash,
        value_column: loaded.value_column,
        timestamp_column: loaded.timestamp_column,
        seed: checkpoint.config.seed,
        config: checkpoint.config.clone(),
        started_unix: started,
        finished_unix: unix_now(),
    };
    write_json(&out_dir.join("manifest.json"), &manifest)?;
    println!(
        "best epoch {} of {}, loss {}",
        checkpoint.best_epoch,
        checkpoint.loss_history.len(),
        checkpoint.best_loss
    );
    Ok(())
}

fn cmd_predict(checkpoint: &Path, input: InputArgs, format: Format) -> Result<()> {
    let cp = TrainedCheckpoint::<f64>::load(checkpoint)?;
    let loaded = load_input(&input, &FileConfig::default())?;
    let p = cp.predict_next_detailed(&loaded.series)?;
    match format {
        Format::Text => println!("{}", p.prediction),
        Format::Json => println!("{}", serde_json::to_string(&p)?),
    }
    Ok(())
}

fn mff_row_name(cp: &TrainedCheckpoint<f64>) -> String {
    format!("MFF({},{})", cp.config.hidden1, cp.config.hidden2)
}

fn cmd_evaluate(checkpoint: &Path, input: InputArgs, output: &Path) -> Result<()> {
    let cp = TrainedCheckpoint::<f64>::load(checkpoint)?;
    let loaded = load_input(&input, &FileConfig::default())?;
    let series = &loaded.series;
    let range = cp.test_range(series.len());
    let pairs = evaluate_walk_forward(&cp, series, range.clone())?;

    let mut csv = String::from("t,y,yhat\n");
    for (i, (yhat, y)) in range.zip(&pairs) {
        let label = &series.timestamps()[i + cp.window_size];
        csv.push_str(&format!("{},{},{}\n", csv_field(label), y, yhat));
    }
    fs::write(output, csv)?;

    let (pred, actual): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let mut table = ComparisonTable::default();
    table.push(mff_row_name(&cp), error_report(&pred, &actual)?);
    print!("{}", table.to_text());
    Ok(())
}

fn cmd_bench(
    input: InputArgs,
    train: TrainArgs,
    methods: &[Method],
    sma_k: usize,
    out_dir: Option<&Path>,
) -> Result<()> {
    let (config, file) = train.resolve(TrainConfig::default())?;
    let loaded = load_input(&input, &file)?;
    let series = &loaded.series;
    let resolved = config.resolved(series.len())?;
    let ws = resolved.window_size.expect("resolved");
    let examples = series.len().saturating_sub(ws);
    if series.len() < ws + 2 {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            needed: ws + 2,
        });
    }
    let first_test = train_count(examples, resolved.train_fraction)?;
    if first_test >= examples {
        return Err(Error::InvalidConfig("split leaves no test examples".into()));
    }
    let targets: Vec<usize> = (first_test..examples).map(|i| i + ws).collect();
    let actual: Vec<f64> = targets.iter().map(|&p| series.values()[p]).collect();

    let mut table = ComparisonTable::default();
    for method in methods {
        match method {
            Method::Mff => {
                let cp = train_mff(series, &resolved)?;
                let pairs = evaluate_walk_forward(&cp, series, first_test..examples)?;
                let pred: Vec<f64> = pairs.iter().map(|p| p.0).collect();
                table.push(mff_row_name(&cp), error_report(&pred, &actual)?);
            }
            Method::Naive | Method::Sma | Method::Ols => {
                let b = match method {
                    Method::Naive => Baseline::Naive,
                    Method::Sma => Baseline::Sma(sma_k),
                    _ => Baseline::OlsTrend,
                };
                let pred = b.walk_forward(series.values(), &targets)?;
                table.push(b.name(), error_report(&pred, &actual)?);
            }
        }
    }
    let text = table.to_text();
    print!("{text}");
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("comparison.csv"), table.to_csv())?;
        fs::write(dir.join("comparison.txt"), text)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ScalerFile {
    feature_names: Vec<String>,
    window_size: usize,
    train_rows: usize,
    standardized_output: bool,
    columns: Vec<mff::features::Standardizer<f64>>,
}

fn cmd_features(
    input: InputArgs,
    window: usize,
    features: FeatureArgs,
    split: f64,
    standardized: bool,
    output: &Path,
    scaler_path: Option<PathBuf>,
) -> Result<()> {
    let loaded = load_input(&input, &FileConfig::default())?;
    let series = &loaded.series;
    let train = TrainArgs {
        window: Some(window as u64),
        split: Some(split),
        features,
        ..Default::default()
    };
    let (config, _) = train.resolve(TrainConfig::default())?;
    let slices = sliding_window(series, window)?;
    let matrix = build_feature_matrix(&slices, &config.features.function_sequence())?;
    let train_rows = match make_supervised(&slices, series) {
        Ok(sup) => train_count(sup.len(), split).unwrap_or(sup.len()),
        // Too few examples to split: fit on every row.
        Err(_) => matrix.rows(),
    };
    let (scaled, scaler) = fit_standardize(&matrix, 0..train_rows)?;

    let out = if standardized { &scaled } else { &matrix };
    out.write_csv(std::io::BufWriter::new(fs::File::create(output)?))?;
    let scaler_path = scaler_path.unwrap_or_else(|| {
        let mut p = output.as_os_str().to_owned();
        p.push(".scaler.json");
        PathBuf::from(p)
    });
    write_json(
        &scaler_path,
        &ScalerFile {
            feature_names: matrix.names().to_vec(),
            window_size: window,
            train_rows,
            standardized_output: standardized,
            columns: scaler.columns,
        },
    )?;
    println!("{} rows x {} features", matrix.rows(), matrix.cols());
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
