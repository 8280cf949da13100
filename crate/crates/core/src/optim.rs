//! Adam with bias correction, and a triangular cyclical learning rate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig<T> {
    pub beta1: T,
    pub beta2: T,
    pub eps: T,
}

impl<T: Scalar> Default for AdamConfig<T> {
    fn default() -> Self {
        Self {
            beta1: T::lit(0.9),
            beta2: T::lit(0.999),
            eps: T::lit(1e-8),
        }
    }
}

impl<T: Scalar> AdamConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let unit = |b: T| b >= T::zero() && b < T::one();
        if !unit(self.beta1) || !unit(self.beta2) {
            return Err(Error::InvalidConfig(format!(
                "Adam betas must lie in [0, 1), got ({}, {})",
                self.beta1, self.beta2
            )));
        }
        if !(self.eps > T::zero()) {
            return Err(Error::InvalidConfig(format!(
                "Adam eps must be positive, got {}",
                self.eps
            )));
        }
        Ok(())
    }
}

/// Moment estimates and step counter for one parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState<T> {
    pub config: AdamConfig<T>,
    pub m: Vec<T>,
    pub v: Vec<T>,
    pub t: u64,
}

impl<T: Scalar> AdamState<T> {
    pub fn new(len: usize, config: AdamConfig<T>) -> Self {
        Self {
            config,
            m: vec![T::zero(); len],
            v: vec![T::zero(); len],
            t: 0,
        }
    }

    /// One Adam update of `params` with stepsize `lr`.
    ///
    /// Shapes and gradient finiteness are checked before anything is
    /// mutated, so a failed step leaves both state and parameters intact.
    pub fn step(&mut self, params: &mut [T], grads: &[T], lr: T) -> Result<()> {
        if params.len() != self.m.len() {
            return Err(Error::ShapeMismatch {
                expected: self.m.len(),
                found: params.len(),
            });
        }
        if grads.len() != self.m.len() {
            return Err(Error::ShapeMismatch {
                expected: self.m.len(),
                found: grads.len(),
            });
        }
        if let Some(index) = grads.iter().position(|g| !g.is_finite()) {
            return Err(Error::NonFiniteGradient { index });
        }
        if !(lr > T::zero()) {
            return Err(Error::InvalidConfig(format!(
                "learning rate must be positive, got {lr}"
            )));
        }

        let AdamConfig { beta1, beta2, eps } = self.config;
        self.t += 1;
        let t = self.t as i32;
        let c1 = T::one() - beta1.powi(t);
        let c2 = T::one() - beta2.powi(t);
        for (((p, &g), m), v) in params
            .iter_mut()
            .zip(grads)
            .zip(self.m.iter_mut())
            .zip(self.v.iter_mut())
        {
            *m = beta1 * *m + (T::one() - beta1) * g;
            *v = beta2 * *v + (T::one() - beta2) * g * g;
            let m_hat = *m / c1;
            let v_hat = *v / c2;
            *p -= lr * m_hat / (v_hat.sqrt() + eps);
        }
        Ok(())
    }
}

/// Free-function form of [`AdamState::step`].
pub fn adam_step<T: Scalar>(state: &mut AdamState<T>, params: &mut [T], grads: &[T], lr: T) -> Result<()> {
    state.step(params, grads, lr)
}

/// Triangular cyclical learning rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClrSchedule<T> {
    pub base_lr: T,
    pub max_lr: T,
    pub step_size_up: usize,
    pub step_size_down: usize,
}

impl<T: Scalar> ClrSchedule<T> {
    pub fn new(base_lr: T, max_lr: T, step_size_up: usize, step_size_down: usize) -> Result<Self> {
        let s = Self {
            base_lr,
            max_lr,
            step_size_up,
            step_size_down,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.base_lr > T::zero()) || !(self.max_lr >= self.base_lr) || !self.max_lr.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "need 0 < base_lr <= max_lr, got base {} max {}",
                self.base_lr, self.max_lr
            )));
        }
        if self.step_size_up == 0 || self.step_size_down == 0 {
            return Err(Error::InvalidConfig("CLR step sizes must be positive".into()));
        }
        Ok(())
    }

    pub fn period(&self) -> usize {
        self.step_size_up + self.step_size_down
    }

    /// Learning rate at `iteration` (0-based).
    pub fn lr(&self, iteration: usize) -> T {
        let p = iteration % self.period();
        let span = self.max_lr - self.base_lr;
        if p < self.step_size_up {
            self.base_lr + span * T::from_count(p) / T::from_count(self.step_size_up)
        } else {
            let down = p - self.step_size_up;
            if down == 0 {
                return self.max_lr;
            }
            self.max_lr - span * T::from_count(down) / T::from_count(self.step_size_down)
        }
    }
}

pub fn clr_lr<T: Scalar>(schedule: &ClrSchedule<T>, iteration: usize) -> T {
    schedule.lr(iteration)
}
