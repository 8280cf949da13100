//! End-to-end training: slice, featurize, split, run the epoch loop with
//! Adam and the cyclical schedule, and keep the minimum-loss parameters.

use std::io::Write;
use std::ops::Range;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{
    build_feature_matrix, fit_standardize, ApenTolerance, ColumnScaler, FeatureMatrix, FunctionSequence, Standardizer,
};
use crate::net::{Activation, LayerSizes, MlpModel};
use crate::optim::{AdamConfig, AdamState, ClrSchedule};
use crate::scalar::Scalar;
use crate::series::{make_supervised, sliding_window, train_count, TimeSeries, TimeSlice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BatchMode {
    /// One averaged gradient step per epoch.
    #[default]
    FullBatch,
    /// One step per training example, in order, each epoch.
    PerSample,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct FeatureConfig<T> {
    pub apen_embedding: usize,
    pub apen_tolerance: ApenTolerance<T>,
    /// Standardize feature columns with statistics of the training rows.
    pub standardize: bool,
}

impl<T: Scalar> Default for FeatureConfig<T> {
    fn default() -> Self {
        Self {
            apen_embedding: 2,
            apen_tolerance: ApenTolerance::default(),
            standardize: true,
        }
    }
}

impl<T: Scalar> FeatureConfig<T> {
    pub fn function_sequence(&self) -> FunctionSequence<T> {
        FunctionSequence::standard(self.apen_embedding, self.apen_tolerance)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct TrainConfig<T> {
    /// `None` means `round(n / 2)`.
    pub window_size: Option<usize>,
    pub features: FeatureConfig<T>,
    pub standardize_targets: bool,
    pub hidden1: usize,
    pub hidden2: usize,
    pub activation: Activation,
    pub epochs: usize,
    pub adam: AdamConfig<T>,
    pub base_lr: T,
    pub max_lr: T,
    /// `None` means `epochs / 4` (at least 1).
    pub step_size_up: Option<usize>,
    pub step_size_down: Option<usize>,
    pub train_fraction: f64,
    pub seed: u64,
    pub batch_mode: BatchMode,
    /// Rescale the gradient to this global L2 norm when it is exceeded.
    pub clip_grad_norm: Option<T>,
}

impl<T: Scalar> Default for TrainConfig<T> {
    fn default() -> Self {
        Self {
            window_size: None,
            features: FeatureConfig::default(),
            standardize_targets: true,
            hidden1: 8,
            hidden2: 5,
            activation: Activation::Tanh,
            epochs: 10_000,
            adam: AdamConfig::default(),
            base_lr: T::lit(1e-12),
            max_lr: T::lit(1e-4),
            step_size_up: None,
            step_size_down: None,
            train_fraction: 0.8,
            seed: 1,
            batch_mode: BatchMode::FullBatch,
            clip_grad_norm: None,
        }
    }
}

impl<T: Scalar> TrainConfig<T> {
    /// Fills every defaulted field for a series of length `n` and checks
    /// ranges.
    pub fn resolved(&self, n: usize) -> Result<Self> {
        let mut c = self.clone();
        let ws = c.window_size.unwrap_or(((n as f64) / 2.0).round() as usize);
        if ws == 0 {
            return Err(Error::WindowNonPositive);
        }
        c.window_size = Some(ws);
        let quarter = (c.epochs / 4).max(1);
        c.step_size_up.get_or_insert(quarter);
        c.step_size_down.get_or_insert(quarter);
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.window_size == Some(0) {
            return Err(Error::WindowNonPositive);
        }
        LayerSizes::new(1, self.hidden1, self.hidden2)?;
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be positive".into()));
        }
        if self.features.apen_embedding == 0 {
            return Err(Error::InvalidConfig("ApEn embedding dimension must be positive".into()));
        }
        let tol_ok = match self.features.apen_tolerance {
            ApenTolerance::StdFraction(k) | ApenTolerance::Absolute(k) => k >= T::zero() && k.is_finite(),
        };
        if !tol_ok {
            return Err(Error::InvalidConfig(
                "ApEn tolerance must be a finite non-negative number".into(),
            ));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::InvalidFraction(self.train_fraction));
        }
        if let Some(c) = self.clip_grad_norm {
            if !(c > T::zero()) {
                return Err(Error::InvalidConfig("clip norm must be positive".into()));
            }
        }
        self.adam.validate()?;
        self.schedule_unchecked().validate()
    }

    fn schedule_unchecked(&self) -> ClrSchedule<T> {
        let quarter = (self.epochs / 4).max(1);
        ClrSchedule {
            base_lr: self.base_lr,
            max_lr: self.max_lr,
            step_size_up: self.step_size_up.unwrap_or(quarter),
            step_size_down: self.step_size_down.unwrap_or(quarter),
        }
    }

    pub fn schedule(&self) -> Result<ClrSchedule<T>> {
        let s = self.schedule_unchecked();
        s.validate()?;
        Ok(s)
    }
}

/// Minimum-training-loss snapshot plus everything needed to predict with it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct TrainedCheckpoint<T> {
    pub model: MlpModel<T>,
    /// 1-based; the earliest epoch reaching `best_loss`.
    pub best_epoch: usize,
    pub best_loss: T,
    pub feature_names: Vec<String>,
    pub feature_scaler: Option<ColumnScaler<T>>,
    pub target_scaler: Option<Standardizer<T>>,
    /// Resolved configuration (no defaulted fields left).
    pub config: TrainConfig<T>,
    pub window_size: usize,
    /// Number of leading supervised examples used for training.
    pub train_examples: usize,
    pub loss_history: Vec<T>,
    pub lr_history: Vec<T>,
}

/// Features and targets derived from a series for a given configuration.
struct Prepared<T: Scalar> {
    matrix: FeatureMatrix<T>,
    scaler: Option<ColumnScaler<T>>,
    target_scaler: Option<Standardizer<T>>,
    train_inputs: Vec<Vec<T>>,
    train_targets: Vec<T>,
    train_examples: usize,
}

fn prepare<T: Scalar>(series: &TimeSeries<T>, cfg: &TrainConfig<T>, ws: usize) -> Result<Prepared<T>> {
    let slices = sliding_window(series, ws)?;
    let sup = make_supervised(&slices, series)?;
    let k = train_count(sup.len(), cfg.train_fraction)?;
    let fs = cfg.features.function_sequence();
    let raw = build_feature_matrix(&slices, &fs)?;
    let (matrix, scaler) = if cfg.features.standardize {
        let (m, s) = fit_standardize(&raw, 0..k)?;
        (m, Some(s))
    } else {
        (raw, None)
    };
    let raw_targets: Vec<T> = sup.examples[..k].iter().map(|(_, y)| *y).collect();
    let target_scaler = if cfg.standardize_targets {
        Some(Standardizer::fit(&raw_targets)?)
    } else {
        None
    };
    let train_targets = raw_targets
        .iter()
        .map(|&y| target_scaler.map_or(y, |s| s.transform(y)))
        .collect();
    let train_inputs = (0..k).map(|i| matrix.row(i).to_vec()).collect();
    Ok(Prepared {
        matrix,
        scaler,
        target_scaler,
        train_inputs,
        train_targets,
        train_examples: k,
    })
}

fn clip<T: Scalar>(grads: &mut [T], max_norm: Option<T>) {
    if let Some(c) = max_norm {
        let norm = grads.iter().map(|&g| g * g).sum::<T>().sqrt();
        if norm > c {
            let scale = c / norm;
            grads.iter_mut().for_each(|g| *g *= scale);
        }
    }
}

/// Trains on `series` and returns the minimum-loss checkpoint.
///
/// The loss recorded for an epoch is the training MSE of the parameters
/// at the start of that epoch, and those are the parameters kept if the
/// epoch turns out best. Fully deterministic given the config.
pub fn train_mff<T: Scalar>(series: &TimeSeries<T>, config: &TrainConfig<T>) -> Result<TrainedCheckpoint<T>> {
    let cfg = config.resolved(series.len())?;
    let ws = cfg.window_size.expect("resolved");
    if series.len() < ws + 2 {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            needed: ws + 2,
        });
    }
    let prep = prepare(series, &cfg, ws)?;
    let schedule = cfg.schedule()?;
    let sizes = LayerSizes::new(prep.matrix.cols(), cfg.hidden1, cfg.hidden2)?;
    let mut model = MlpModel::new(sizes, cfg.activation, cfg.seed);
    let mut adam = AdamState::new(sizes.param_count(), cfg.adam);

    let mut loss_history = Vec::with_capacity(cfg.epochs);
    let mut lr_history = Vec::with_capacity(cfg.epochs);
    let mut best: Option<(usize, T, MlpModel<T>)> = None;

    for epoch in 1..=cfg.epochs {
        let lr = schedule.lr(epoch - 1);
        let loss = match cfg.batch_mode {
            BatchMode::FullBatch => {
                let (loss, mut grads) = model.batch_loss_and_gradient(&prep.train_inputs, &prep.train_targets)?;
                if !loss.is_finite() {
                    return Err(Error::NonFiniteLoss { epoch });
                }
                if best.as_ref().is_none_or(|(_, b, _)| loss < *b) {
                    best = Some((epoch, loss, model.clone()));
                }
                clip(&mut grads.values, cfg.clip_grad_norm);
                adam.step(model.params_mut(), &grads.values, lr)
                    .map_err(|e| nonfinite_at(e, epoch))?;
                loss
            }
            BatchMode::PerSample => {
                let loss = model.batch_loss(&prep.train_inputs, &prep.train_targets)?;
                if !loss.is_finite() {
                    return Err(Error::NonFiniteLoss { epoch });
                }
                if best.as_ref().is_none_or(|(_, b, _)| loss < *b) {
                    best = Some((epoch, loss, model.clone()));
                }
                for (x, &y) in prep.train_inputs.iter().zip(&prep.train_targets) {
                    let (_, cache) = model.forward(x)?;
                    let mut g = model.backward(x, &cache, y)?;
                    clip(&mut g.values, cfg.clip_grad_norm);
                    adam.step(model.params_mut(), &g.values, lr)
                        .map_err(|e| nonfinite_at(e, epoch))?;
                }
                loss
            }
        };
        loss_history.push(loss);
        lr_history.push(lr);
    }

    let (best_epoch, best_loss, best_model) = best.expect("at least one epoch");
    Ok(TrainedCheckpoint {
        model: best_model,
        best_epoch,
        best_loss,
        feature_names: prep.matrix.names().to_vec(),
        feature_scaler: prep.scaler,
        target_scaler: prep.target_scaler,
        window_size: ws,
        train_examples: prep.train_examples,
        config: cfg,
        loss_history,
        lr_history,
    })
}

fn nonfinite_at(e: Error, epoch: usize) -> Error {
    match e {
        Error::NonFiniteGradient { .. } => Error::NonFiniteLoss { epoch },
        other => other,
    }
}

/// A single forecast and the raw feature vector that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Prediction<T> {
    pub prediction: T,
    pub features: Vec<T>,
    pub ordinal: usize,
}

impl<T: Scalar> TrainedCheckpoint<T> {
    fn check_scalers(&self) -> Result<()> {
        if self.config.features.standardize && self.feature_scaler.is_none() {
            return Err(Error::ScalerMissing("feature"));
        }
        if self.config.standardize_targets && self.target_scaler.is_none() {
            return Err(Error::ScalerMissing("target"));
        }
        Ok(())
    }

    /// Forecast for the value following `slice`, whose 1-based ordinal is
    /// `ordinal`.
    pub fn predict_slice(&self, slice: &TimeSlice<T>, ordinal: usize) -> Result<Prediction<T>> {
        self.check_scalers()?;
        if slice.len() != self.window_size {
            return Err(Error::ShapeMismatch {
                expected: self.window_size,
                found: slice.len(),
            });
        }
        let fs = self.config.features.function_sequence();
        if fs.names() != self.feature_names {
            return Err(Error::InvalidConfig(
                "checkpoint feature names do not match its configuration".into(),
            ));
        }
        let features = fs.apply(slice, ordinal)?;
        let input = match &self.feature_scaler {
            Some(s) if self.config.features.standardize => s.transform_row(&features)?,
            _ => features.clone(),
        };
        let z = self.model.predict(&input)?;
        let prediction = match &self.target_scaler {
            Some(s) if self.config.standardize_targets => s.inverse(z),
            _ => z,
        };
        Ok(Prediction {
            prediction,
            features,
            ordinal,
        })
    }

    /// Forecast of `v_{n+1}` from the final window of `series`.
    pub fn predict_next_detailed(&self, series: &TimeSeries<T>) -> Result<Prediction<T>> {
        let n = series.len();
        let ws = self.window_size;
        if n < ws {
            return Err(Error::SeriesTooShort { len: n, needed: ws });
        }
        let ordinal = n - ws + 1;
        let slice = TimeSlice {
            start_ordinal: ordinal,
            values: series.values()[n - ws..].to_vec(),
        };
        self.predict_slice(&slice, ordinal)
    }

    /// Supervised-example indices held out from training on a series of
    /// length `n`.
    pub fn test_range(&self, n: usize) -> Range<usize> {
        self.train_examples..n.saturating_sub(self.window_size)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        serde_json::to_writer_pretty(&mut f, self)?;
        f.write_all(b"\n")?;
        f.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if !path.is_file() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// `epoch,lr,loss` rows, one per epoch.
    pub fn write_loss_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "epoch,lr,loss")?;
        for (i, (lr, loss)) in self.lr_history.iter().zip(&self.loss_history).enumerate() {
            writeln!(out, "{},{},{}", i + 1, lr, loss)?;
        }
        Ok(())
    }
}

pub fn predict_next<T: Scalar>(checkpoint: &TrainedCheckpoint<T>, series: &TimeSeries<T>) -> Result<T> {
    checkpoint.predict_next_detailed(series).map(|p| p.prediction)
}

/// `(ŷ, y)` for each supervised example index in `test_range`, with no
/// refitting. The range must be non-empty and lie entirely after the
/// training examples.
pub fn evaluate_walk_forward<T: Scalar>(
    checkpoint: &TrainedCheckpoint<T>,
    series: &TimeSeries<T>,
    test_range: Range<usize>,
) -> Result<Vec<(T, T)>> {
    let ws = checkpoint.window_size;
    let available = series.len().saturating_sub(ws);
    if test_range.is_empty() || test_range.end > available || test_range.start < checkpoint.train_examples {
        return Err(Error::RangeOutOfBounds {
            start: test_range.start,
            end: test_range.end,
            available,
            first_test: checkpoint.train_examples,
        });
    }
    let values = series.values();
    test_range
        .map(|i| {
            let slice = TimeSlice {
                start_ordinal: i + 1,
                values: values[i..i + ws].to_vec(),
            };
            let p = checkpoint.predict_slice(&slice, i + 1)?;
            Ok((p.prediction, values[i + ws]))
        })
        .collect()
}
