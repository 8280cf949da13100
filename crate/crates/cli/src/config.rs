//! Layered configuration: command-line flags over a key-value config file
//! (or a previous run's manifest) over library defaults.

use std::path::Path;

use clap::Args;
use mff::features::ApenTolerance;
use mff::net::Activation;
use mff::train::{BatchMode, TrainConfig};
use mff::{Error, Result};
use serde::{Deserialize, Serialize};

/// Keys accepted in a `--config` file. Every key is optional.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub value_column: Option<String>,
    pub timestamp_column: Option<String>,
    pub window: Option<usize>,
    pub hidden1: Option<usize>,
    pub hidden2: Option<usize>,
    pub activation: Option<String>,
    pub epochs: Option<usize>,
    pub base_lr: Option<f64>,
    pub max_lr: Option<f64>,
    pub step_size_up: Option<usize>,
    pub step_size_down: Option<usize>,
    pub train_fraction: Option<f64>,
    pub seed: Option<u64>,
    pub beta1: Option<f64>,
    pub beta2: Option<f64>,
    pub eps: Option<f64>,
    pub apen_embedding: Option<usize>,
    pub apen_r_fraction: Option<f64>,
    pub apen_r_absolute: Option<f64>,
    pub standardize_features: Option<bool>,
    pub standardize_targets: Option<bool>,
    pub batch_mode: Option<String>,
    pub clip_grad_norm: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        if !path.is_file() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
    }

    fn apply(&self, c: &mut TrainConfig<f64>) -> Result<()> {
        if let Some(v) = self.window {
            c.window_size = Some(v);
        }
        set(&mut c.hidden1, self.hidden1);
        set(&mut c.hidden2, self.hidden2);
        if let Some(a) = &self.activation {
            c.activation = a.parse()?;
        }
        set(&mut c.epochs, self.epochs);
        set(&mut c.base_lr, self.base_lr);
        set(&mut c.max_lr, self.max_lr);
        if self.step_size_up.is_some() {
            c.step_size_up = self.step_size_up;
        }
        if self.step_size_down.is_some() {
            c.step_size_down = self.step_size_down;
        }
        set(&mut c.train_fraction, self.train_fraction);
        set(&mut c.seed, self.seed);
        set(&mut c.adam.beta1, self.beta1);
        set(&mut c.adam.beta2, self.beta2);
        set(&mut c.adam.eps, self.eps);
        set(&mut c.features.apen_embedding, self.apen_embedding);
        match (self.apen_r_fraction, self.apen_r_absolute) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidConfig(
                    "set only one of apen_r_fraction and apen_r_absolute".into(),
                ))
            }
            (Some(k), None) => c.features.apen_tolerance = ApenTolerance::StdFraction(k),
            (None, Some(r)) => c.features.apen_tolerance = ApenTolerance::Absolute(r),
            (None, None) => {}
        }
        set(&mut c.features.standardize, self.standardize_features);
        set(&mut c.standardize_targets, self.standardize_targets);
        if let Some(m) = &self.batch_mode {
            c.batch_mode = parse_batch_mode(m)?;
        }
        if self.clip_grad_norm.is_some() {
            c.clip_grad_norm = self.clip_grad_norm;
        }
        Ok(())
    }
}

fn set<V: Copy>(slot: &mut V, value: Option<V>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn parse_batch_mode(s: &str) -> Result<BatchMode> {
    match s {
        "full_batch" | "full-batch" => Ok(BatchMode::FullBatch),
        "per_sample" | "per-sample" => Ok(BatchMode::PerSample),
        other => Err(Error::InvalidConfig(format!("unknown batch mode `{other}`"))),
    }
}

pub fn parse_hidden(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| "expected two comma-separated sizes, e.g. 8,5".to_string())?;
    let parse = |x: &str| {
        x.trim()
            .parse::<usize>()
            .ok()
            .filter(|&v| v >= 1)
            .ok_or_else(|| format!("`{x}` is not a positive integer"))
    };
    Ok((parse(a)?, parse(b)?))
}

fn parse_fraction(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err("must lie strictly between 0 and 1".into())
    }
}

fn parse_positive(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("must be a positive finite number".into())
    }
}

fn parse_nonneg(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("must be a non-negative finite number".into())
    }
}

/// Feature-extraction flags shared by `train`, `bench` and `features`.
#[derive(Debug, Clone, Default, Args)]
pub struct FeatureArgs {
    /// ApEn embedding dimension.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub apen_m: Option<u64>,
    /// ApEn tolerance as a fraction of each slice's standard deviation.
    #[arg(long, value_parser = parse_nonneg, conflicts_with = "apen_r_abs")]
    pub apen_r_fraction: Option<f64>,
    /// Absolute ApEn tolerance.
    #[arg(long, value_parser = parse_nonneg)]
    pub apen_r_abs: Option<f64>,
}

impl FeatureArgs {
    fn apply(&self, c: &mut TrainConfig<f64>) {
        if let Some(m) = self.apen_m {
            c.features.apen_embedding = m as usize;
        }
        if let Some(k) = self.apen_r_fraction {
            c.features.apen_tolerance = ApenTolerance::StdFraction(k);
        }
        if let Some(r) = self.apen_r_abs {
            c.features.apen_tolerance = ApenTolerance::Absolute(r);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ActivationArg {
    Tanh,
    Relu,
}

/// Training flags shared by `train` and `bench`.
#[derive(Debug, Clone, Default, Args)]
pub struct TrainArgs {
    /// Plain-text key = value config file; flags override it.
    #[arg(long)]
    pub config: Option<std::path::PathBuf>,
    /// Sliding window size (defaults to half the series length).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub window: Option<u64>,
    /// Hidden layer sizes as `n1,n2`.
    #[arg(long, value_parser = parse_hidden)]
    pub hidden: Option<(usize, usize)>,
    #[arg(long, value_enum)]
    pub activation: Option<ActivationArg>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub epochs: Option<u64>,
    #[arg(long, value_parser = parse_positive)]
    pub base_lr: Option<f64>,
    #[arg(long, value_parser = parse_positive)]
    pub max_lr: Option<f64>,
    /// Epochs in the rising half of a learning-rate cycle.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub step_up: Option<u64>,
    /// Epochs in the falling half of a learning-rate cycle.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub step_down: Option<u64>,
    /// Fraction of supervised examples used for training.
    #[arg(long, value_parser = parse_fraction)]
    pub split: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub beta1: Option<f64>,
    #[arg(long)]
    pub beta2: Option<f64>,
    #[arg(long, value_parser = parse_positive)]
    pub eps: Option<f64>,
    #[command(flatten)]
    pub features: FeatureArgs,
    /// Feed raw feature values to the network.
    #[arg(long)]
    pub no_standardize_features: bool,
    /// Train on raw target values.
    #[arg(long)]
    pub no_standardize_targets: bool,
    /// One optimizer step per training example instead of per epoch.
    #[arg(long)]
    pub per_sample: bool,
    #[arg(long, value_parser = parse_positive)]
    pub clip_grad_norm: Option<f64>,
}

impl TrainArgs {
    fn apply(&self, c: &mut TrainConfig<f64>) {
        if let Some(w) = self.window {
            c.window_size = Some(w as usize);
        }
        if let Some((a, b)) = self.hidden {
            c.hidden1 = a;
            c.hidden2 = b;
        }
        if let Some(a) = self.activation {
            c.activation = match a {
                ActivationArg::Tanh => Activation::Tanh,
                ActivationArg::Relu => Activation::Relu,
            };
        }
        if let Some(e) = self.epochs {
            c.epochs = e as usize;
        }
        set(&mut c.base_lr, self.base_lr);
        set(&mut c.max_lr, self.max_lr);
        if let Some(s) = self.step_up {
            c.step_size_up = Some(s as usize);
        }
        if let Some(s) = self.step_down {
            c.step_size_down = Some(s as usize);
        }
        set(&mut c.train_fraction, self.split);
        set(&mut c.seed, self.seed);
        set(&mut c.adam.beta1, self.beta1);
        set(&mut c.adam.beta2, self.beta2);
        set(&mut c.adam.eps, self.eps);
        self.features.apply(c);
        if self.no_standardize_features {
            c.features.standardize = false;
        }
        if self.no_standardize_targets {
            c.standardize_targets = false;
        }
        if self.per_sample {
            c.batch_mode = BatchMode::PerSample;
        }
        if self.clip_grad_norm.is_some() {
            c.clip_grad_norm = self.clip_grad_norm;
        }
    }

    /// Builds the effective configuration. `base` is the starting point
    /// (defaults, or a manifest's recorded config).
    pub fn resolve(&self, base: TrainConfig<f64>) -> Result<(TrainConfig<f64>, FileConfig)> {
        let mut c = base;
        let file = match &self.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        file.apply(&mut c)?;
        self.apply(&mut c);
        c.validate()?;
        Ok((c, file))
    }
}

/// Reproducibility record written next to a checkpoint.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input: String,
    pub input_sha256: String,
    pub value_column: String,
    pub timestamp_column: Option<String>,
    pub seed: u64,
    pub config: TrainConfig<f64>,
    pub started_unix: u64,
    pub finished_unix: u64,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        if !path.is_file() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hidden_parsing() {
        assert_eq!(parse_hidden("8,5"), Ok((8, 5)));
        assert_eq!(parse_hidden(" 3 , 2 "), Ok((3, 2)));
        assert!(parse_hidden("8").is_err());
        assert!(parse_hidden("0,5").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "window = 12\nepochs = 40\nseed = 9\nactivation = \"relu\"\n").unwrap();
        let args = TrainArgs {
            config: Some(path),
            epochs: Some(7),
            ..Default::default()
        };
        let (c, _) = args.resolve(TrainConfig::default()).unwrap();
        assert_eq!(c.window_size, Some(12));
        assert_eq!(c.epochs, 7);
        assert_eq!(c.seed, 9);
        assert_eq!(c.activation, Activation::Relu);
        assert_eq!(c.base_lr, 1e-12);
    }

    #[test]
    fn unknown_keys_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.toml");
        std::fs::write(&path, "windw = 12\n").unwrap();
        let args = TrainArgs {
            config: Some(path),
            ..Default::default()
        };
        assert!(matches!(
            args.resolve(TrainConfig::default()),
            Err(Error::InvalidConfig(_))
        ));
    }
}
