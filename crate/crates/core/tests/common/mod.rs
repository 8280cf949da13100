//! Independent reference implementations used by the integration tests.
//! Each is written straight from the defining formula and shares no code
//! with the library.

#![allow(dead_code)]

/// ApEn from explicit embedding vectors, self-matches included.
pub fn apen(x: &[f64], m: usize, r: f64) -> f64 {
    let phi = |m: usize| {
        let vecs: Vec<Vec<f64>> = (0..=x.len() - m).map(|i| x[i..i + m].to_vec()).collect();
        let n = vecs.len() as f64;
        let mut total = 0.0;
        for a in &vecs {
            let matches = vecs
                .iter()
                .filter(|b| a.iter().zip(b.iter()).all(|(p, q)| (p - q).abs() <= r))
                .count();
            total += (matches as f64 / n).ln();
        }
        total / n
    };
    phi(m) - phi(m + 1)
}

/// Degree sum of the natural visibility graph by checking every
/// intermediate point against every chord.
pub fn vg_degree(v: &[f64]) -> f64 {
    let n = v.len();
    let mut degree = vec![0usize; n];
    for a in 0..n {
        for b in a + 1..n {
            let (ta, tb) = ((a + 1) as f64, (b + 1) as f64);
            let visible = (a + 1..b).all(|c| {
                let tc = (c + 1) as f64;
                v[c] < v[b] + (v[a] - v[b]) * (tb - tc) / (tb - ta)
            });
            if visible {
                degree[a] += 1;
                degree[b] += 1;
            }
        }
    }
    degree.iter().sum::<usize>() as f64
}

pub struct Measures {
    pub mad: f64,
    pub mape: f64,
    pub smape: f64,
    pub rmse: f64,
    pub nrmse: f64,
}

/// The five error measures, one loop per formula.
pub fn measures(yhat: &[f64], y: &[f64]) -> Measures {
    let n = y.len() as f64;
    let mut mad = 0.0;
    for t in 0..y.len() {
        mad += (yhat[t] - y[t]).abs();
    }
    mad /= n;
    let mut mape = 0.0;
    for t in 0..y.len() {
        mape += (yhat[t] - y[t]).abs() / y[t];
    }
    mape /= n;
    let mut smape = 0.0;
    for t in 0..y.len() {
        smape += (yhat[t] - y[t]).abs() / (yhat[t] + y[t]);
    }
    smape *= 2.0 / n;
    let mut sq = 0.0;
    for t in 0..y.len() {
        sq += (yhat[t] - y[t]).abs().powi(2);
    }
    let rmse = (sq / n).sqrt();
    let ymax = y.iter().cloned().fold(f64::MIN, f64::max);
    let ymin = y.iter().cloned().fold(f64::MAX, f64::min);
    Measures {
        mad,
        mape,
        smape,
        rmse,
        nrmse: rmse / (ymax - ymin),
    }
}

/// Line-by-line Adam: t, g, m, v, bias corrections, update.
pub struct AdamOracle {
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: i32,
}

impl AdamOracle {
    pub fn new(dim: usize, alpha: f64) -> Self {
        Self {
            alpha,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            m: vec![0.0; dim],
            v: vec![0.0; dim],
            t: 0,
        }
    }

    pub fn step(&mut self, theta: &mut [f64], g: &[f64]) {
        self.t += 1;
        for i in 0..theta.len() {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g[i];
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g[i] * g[i];
            let m_hat = self.m[i] / (1.0 - self.beta1.powi(self.t));
            let v_hat = self.v[i] / (1.0 - self.beta2.powi(self.t));
            theta[i] -= self.alpha * m_hat / (v_hat.sqrt() + self.eps);
        }
    }
}

/// Central finite difference of `f` at `x` along each coordinate.
pub fn finite_difference(x: &[f64], step: f64, f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            let orig = probe[i];
            probe[i] = orig + step;
            let up = f(&probe);
            probe[i] = orig - step;
            let down = f(&probe);
            probe[i] = orig;
            (up - down) / (2.0 * step)
        })
        .collect()
}

/// `|a - b| <= rel * max(|a|, |b|)` or `|a - b| <= abs_floor`.
pub fn close(a: f64, b: f64, rel: f64, abs_floor: f64) -> bool {
    let d = (a - b).abs();
    d <= abs_floor || d <= rel * a.abs().max(b.abs())
}
