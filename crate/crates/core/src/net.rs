//! Perceptron with two hidden layers and a linear scalar output.
//!
//! Parameters live in one flat buffer laid out as
//! `[W1 | b1 | W2 | b2 | W3 | b3]`, each weight matrix row-major
//! (`W1` is `hidden1 x input`). Gradients share the layout so the optimizer
//! can treat both as plain slices.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    #[default]
    Tanh,
    Relu,
}

impl Activation {
    fn apply<T: Scalar>(self, z: T) -> T {
        match self {
            Activation::Tanh => z.tanh(),
            Activation::Relu => z.max(T::zero()),
        }
    }

    /// Derivative expressed through the pre-activation `z` and output `h`.
    fn derivative<T: Scalar>(self, z: T, h: T) -> T {
        match self {
            Activation::Tanh => T::one() - h * h,
            Activation::Relu => {
                if z > T::zero() {
                    T::one()
                } else {
                    T::zero()
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Tanh => "tanh",
            Activation::Relu => "relu",
        }
    }
}

impl std::str::FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tanh" => Ok(Activation::Tanh),
            "relu" => Ok(Activation::Relu),
            other => Err(Error::InvalidConfig(format!("unknown activation `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSizes {
    pub input: usize,
    pub hidden1: usize,
    pub hidden2: usize,
}

impl LayerSizes {
    pub fn new(input: usize, hidden1: usize, hidden2: usize) -> Result<Self> {
        if input == 0 || hidden1 == 0 || hidden2 == 0 {
            return Err(Error::InvalidConfig(format!(
                "layer sizes must be positive, got ({input}, {hidden1}, {hidden2})"
            )));
        }
        Ok(Self {
            input,
            hidden1,
            hidden2,
        })
    }

    pub fn w1(&self) -> Range<usize> {
        0..self.hidden1 * self.input
    }
    pub fn b1(&self) -> Range<usize> {
        let s = self.w1().end;
        s..s + self.hidden1
    }
    pub fn w2(&self) -> Range<usize> {
        let s = self.b1().end;
        s..s + self.hidden2 * self.hidden1
    }
    pub fn b2(&self) -> Range<usize> {
        let s = self.w2().end;
        s..s + self.hidden2
    }
    pub fn w3(&self) -> Range<usize> {
        let s = self.b2().end;
        s..s + self.hidden2
    }
    pub fn b3(&self) -> Range<usize> {
        let s = self.w3().end;
        s..s + 1
    }

    pub fn param_count(&self) -> usize {
        self.b3().end
    }
}

/// Same layout as [`MlpModel::params`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients<T> {
    pub sizes: LayerSizes,
    pub values: Vec<T>,
}

impl<T: Scalar> Gradients<T> {
    pub fn zeros(sizes: LayerSizes) -> Self {
        Self {
            sizes,
            values: vec![T::zero(); sizes.param_count()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "ModelRecord<T>", try_from = "ModelRecord<T>")]
#[serde(bound = "T: Scalar")]
pub struct MlpModel<T> {
    sizes: LayerSizes,
    activation: Activation,
    params: Vec<T>,
}

/// On-disk form: named row-major arrays per layer.
#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
struct ModelRecord<T> {
    sizes: LayerSizes,
    activation: Activation,
    w1: Vec<T>,
    b1: Vec<T>,
    w2: Vec<T>,
    b2: Vec<T>,
    w3: Vec<T>,
    b3: Vec<T>,
}

impl<T: Scalar> From<MlpModel<T>> for ModelRecord<T> {
    fn from(m: MlpModel<T>) -> Self {
        let s = m.sizes;
        let p = &m.params;
        ModelRecord {
            sizes: s,
            activation: m.activation,
            w1: p[s.w1()].to_vec(),
            b1: p[s.b1()].to_vec(),
            w2: p[s.w2()].to_vec(),
            b2: p[s.b2()].to_vec(),
            w3: p[s.w3()].to_vec(),
            b3: p[s.b3()].to_vec(),
        }
    }
}

impl<T: Scalar> TryFrom<ModelRecord<T>> for MlpModel<T> {
    type Error = Error;

    fn try_from(r: ModelRecord<T>) -> Result<Self> {
        let s = LayerSizes::new(r.sizes.input, r.sizes.hidden1, r.sizes.hidden2)?;
        let params: Vec<T> = [r.w1, r.b1, r.w2, r.b2, r.w3, r.b3].concat();
        MlpModel::from_params(s, r.activation, params)
    }
}

impl<T: Scalar> MlpModel<T> {
    /// Weights uniform in `±1/sqrt(fan_in)`, biases zero; a pure function of
    /// `seed`.
    pub fn new(sizes: LayerSizes, activation: Activation, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut params = vec![T::zero(); sizes.param_count()];
        let mut fill = |range: Range<usize>, fan_in: usize| {
            let bound = 1.0 / (fan_in as f64).sqrt();
            for p in &mut params[range] {
                *p = T::lit(rng.gen_range(-bound..bound));
            }
        };
        fill(sizes.w1(), sizes.input);
        fill(sizes.w2(), sizes.hidden1);
        fill(sizes.w3(), sizes.hidden2);
        Self {
            sizes,
            activation,
            params,
        }
    }

    pub fn from_params(sizes: LayerSizes, activation: Activation, params: Vec<T>) -> Result<Self> {
        if params.len() != sizes.param_count() {
            return Err(Error::ShapeMismatch {
                expected: sizes.param_count(),
                found: params.len(),
            });
        }
        if let Some(index) = params.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidConfig(format!("parameter {index} is not finite")));
        }
        Ok(Self {
            sizes,
            activation,
            params,
        })
    }

    pub fn sizes(&self) -> LayerSizes {
        self.sizes
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn params(&self) -> &[T] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [T] {
        &mut self.params
    }

    pub fn predict(&self, x: &[T]) -> Result<T> {
        self.forward(x).map(|(y, _)| y)
    }

    pub fn forward(&self, x: &[T]) -> Result<(T, ForwardCache<T>)> {
        let s = self.sizes;
        if x.len() != s.input {
            return Err(Error::ShapeMismatch {
                expected: s.input,
                found: x.len(),
            });
        }
        let p = &self.params;
        let z1 = affine(&p[s.w1()], &p[s.b1()], x);
        let h1: Vec<T> = z1.iter().map(|&z| self.activation.apply(z)).collect();
        let z2 = affine(&p[s.w2()], &p[s.b2()], &h1);
        let h2: Vec<T> = z2.iter().map(|&z| self.activation.apply(z)).collect();
        let y = affine(&p[s.w3()], &p[s.b3()], &h2)[0];
        Ok((y, ForwardCache { z1, h1, z2, h2 }))
    }

    /// Gradient of `(prediction - target)^2` for a single example.
    pub fn backward(&self, x: &[T], cache: &ForwardCache<T>, target: T) -> Result<Gradients<T>> {
        let mut g = Gradients::zeros(self.sizes);
        self.accumulate(x, cache, target, T::one(), &mut g)?;
        Ok(g)
    }

    /// Adds `weight * ∇(prediction - target)^2` into `grads`.
    fn accumulate(
        &self,
        x: &[T],
        cache: &ForwardCache<T>,
        target: T,
        weight: T,
        grads: &mut Gradients<T>,
    ) -> Result<()> {
        let s = self.sizes;
        if x.len() != s.input || cache.h1.len() != s.hidden1 || cache.h2.len() != s.hidden2 {
            return Err(Error::ShapeMismatch {
                expected: s.input,
                found: x.len(),
            });
        }
        if grads.values.len() != s.param_count() {
            return Err(Error::ShapeMismatch {
                expected: s.param_count(),
                found: grads.values.len(),
            });
        }
        let p = &self.params;
        let g = &mut grads.values;
        let w3 = &p[s.w3()];
        let w2 = &p[s.w2()];
        let y = affine(w3, &p[s.b3()], &cache.h2)[0];
        let dy = T::lit(2.0) * (y - target) * weight;

        // Output layer.
        for (k, &h) in cache.h2.iter().enumerate() {
            g[s.w3().start + k] += dy * h;
        }
        g[s.b3().start] += dy;

        // Hidden layer 2.
        let d2: Vec<T> = (0..s.hidden2)
            .map(|k| dy * w3[k] * self.activation.derivative(cache.z2[k], cache.h2[k]))
            .collect();
        for (k, &dk) in d2.iter().enumerate() {
            let row = s.w2().start + k * s.hidden1;
            for (j, &h) in cache.h1.iter().enumerate() {
                g[row + j] += dk * h;
            }
            g[s.b2().start + k] += dk;
        }

        // Hidden layer 1.
        for j in 0..s.hidden1 {
            let back: T = (0..s.hidden2).map(|k| d2[k] * w2[k * s.hidden1 + j]).sum();
            let dj = back * self.activation.derivative(cache.z1[j], cache.h1[j]);
            let row = s.w1().start + j * s.input;
            for (i, &xi) in x.iter().enumerate() {
                g[row + i] += dj * xi;
            }
            g[s.b1().start + j] += dj;
        }
        Ok(())
    }

    /// Mean squared error over a batch and its gradient, averaged over
    /// examples. Examples are reduced in order, so the result does not
    /// depend on anything but the inputs.
    pub fn batch_loss_and_gradient<R: AsRef<[T]>>(&self, inputs: &[R], targets: &[T]) -> Result<(T, Gradients<T>)> {
        if inputs.len() != targets.len() {
            return Err(Error::LengthMismatch {
                left: inputs.len(),
                right: targets.len(),
            });
        }
        if inputs.is_empty() {
            return Err(Error::EmptyInput);
        }
        let weight = T::one() / T::from_count(inputs.len());
        let mut grads = Gradients::zeros(self.sizes);
        let mut preds = Vec::with_capacity(inputs.len());
        for (x, &t) in inputs.iter().zip(targets) {
            let (y, cache) = self.forward(x.as_ref())?;
            self.accumulate(x.as_ref(), &cache, t, weight, &mut grads)?;
            preds.push(y);
        }
        Ok((mse_loss(&preds, targets)?, grads))
    }

    pub fn batch_loss<R: AsRef<[T]>>(&self, inputs: &[R], targets: &[T]) -> Result<T> {
        let preds = inputs
            .iter()
            .map(|x| self.predict(x.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        mse_loss(&preds, targets)
    }
}

/// Layer outputs kept for backpropagation.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardCache<T> {
    pub z1: Vec<T>,
    pub h1: Vec<T>,
    pub z2: Vec<T>,
    pub h2: Vec<T>,
}

fn affine<T: Scalar>(w: &[T], b: &[T], x: &[T]) -> Vec<T> {
    b.iter()
        .enumerate()
        .map(|(k, &bk)| {
            let row = &w[k * x.len()..(k + 1) * x.len()];
            row.iter().zip(x).fold(bk, |acc, (&wi, &xi)| acc + wi * xi)
        })
        .collect()
}

pub fn mse_loss<T: Scalar>(predictions: &[T], targets: &[T]) -> Result<T> {
    if predictions.len() != targets.len() {
        return Err(Error::LengthMismatch {
            left: predictions.len(),
            right: targets.len(),
        });
    }
    if predictions.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sum: T = predictions.iter().zip(targets).map(|(&x, &y)| (x - y) * (x - y)).sum();
    Ok(sum / T::from_count(predictions.len()))
}
