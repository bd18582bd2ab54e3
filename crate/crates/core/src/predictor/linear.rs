use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, VrenError};
use crate::features::{build_dataset, FeatureLayout, FeatureMatrix, MaskKind, TaskKind, WindowOptions};
use crate::model::Match;
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
    pub seed: u64,
    /// Half-width of the uniform initial weights. Zero means zero init and
    /// makes the seed irrelevant.
    pub init_scale: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            epochs: 300,
            l2: 1e-4,
            seed: 0,
            init_scale: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Binary,
    Multinomial,
}

/// How the training windows were built. Needed to encode new rallies the
/// same way at prediction time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelMeta {
    pub task: TaskKind,
    pub window: usize,
    pub cross_rally: bool,
    pub mask: MaskKind,
}

impl ModelMeta {
    pub fn options(&self) -> WindowOptions {
        WindowOptions {
            k: self.window,
            cross_rally: self.cross_rally,
        }
    }
}

/// Logistic (binary) or softmax (multinomial) regression.
///
/// `weights` is row-major with one row of `n_features` per output: one row
/// for binary models, `n_classes` rows for multinomial ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub kind: ModelKind,
    pub n_features: usize,
    pub n_classes: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub config: TrainConfig,
    pub meta: Option<ModelMeta>,
}

/// Training data with each row stored as its non-zero entries.
pub struct SparseRows {
    pub n_features: usize,
    rows: Vec<Vec<(usize, f64)>>,
    labels: Vec<usize>,
}

impl SparseRows {
    pub fn from_matrix(fm: &FeatureMatrix) -> Self {
        let rows = fm
            .rows()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0.0)
                    .map(|(i, v)| (i, *v))
                    .collect()
            })
            .collect();
        Self {
            n_features: fm.width,
            rows,
            labels: fm.y.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

fn dot(w: &[f64], row: &[(usize, f64)]) -> f64 {
    row.iter().map(|&(i, v)| w[i] * v).sum()
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// log(1 + e^z) without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Softmax in place; returns log-sum-exp of the input scores.
fn softmax_in_place(scores: &mut [f64]) -> f64 {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for s in scores.iter_mut() {
        *s = (*s - max).exp();
        sum += *s;
    }
    for s in scores.iter_mut() {
        *s /= sum;
    }
    max + sum.ln()
}

impl LinearModel {
    pub fn zeros(kind: ModelKind, n_features: usize, n_classes: usize, config: TrainConfig) -> Self {
        let outputs = match kind {
            ModelKind::Binary => 1,
            ModelKind::Multinomial => n_classes,
        };
        Self {
            kind,
            n_features,
            n_classes,
            weights: vec![0.0; outputs * n_features],
            bias: vec![0.0; outputs],
            config,
            meta: None,
        }
    }

    pub fn outputs(&self) -> usize {
        self.bias.len()
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() == self.n_features {
            Ok(())
        } else {
            Err(VrenError::DimMismatch {
                expected: self.n_features,
                actual: x.len(),
            })
        }
    }

    /// Affine scores, one per output.
    pub fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        Ok(self
            .weights
            .chunks_exact(self.n_features.max(1))
            .take(self.outputs())
            .zip(&self.bias)
            .map(|(w, b)| w.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() + b)
            .collect())
    }

    /// Probability of class 1 for a binary model.
    pub fn predict_binary(&self, x: &[f64]) -> Result<f64> {
        if self.kind != ModelKind::Binary {
            return Err(VrenError::InvalidModel("predict_binary needs a binary model".into()));
        }
        Ok(sigmoid(self.scores(x)?[0]))
    }

    /// Class distribution. A binary model yields `[1 - p, p]`.
    pub fn predict_proba(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut s = self.scores(x)?;
        match self.kind {
            ModelKind::Binary => {
                let p = sigmoid(s[0]);
                Ok(vec![1.0 - p, p])
            }
            ModelKind::Multinomial => {
                softmax_in_place(&mut s);
                Ok(s)
            }
        }
    }

    /// Mean cross-entropy plus `l2/2 * |W|^2` (bias unregularized), and its
    /// gradient laid out as all weights followed by all biases.
    pub fn loss_and_gradient(&self, data: &SparseRows) -> (f64, Vec<f64>) {
        let d = self.n_features;
        let k = self.outputs();
        let n = data.len() as f64;
        let mut grad = vec![0.0; self.weights.len() + k];
        let mut loss = 0.0;
        let mut scores = vec![0.0; k];
        for (row, &y) in data.rows.iter().zip(&data.labels) {
            for (c, s) in scores.iter_mut().enumerate() {
                *s = dot(&self.weights[c * d..(c + 1) * d], row) + self.bias[c];
            }
            match self.kind {
                ModelKind::Binary => {
                    let z = scores[0];
                    let yf = y as f64;
                    loss += softplus(z) - yf * z;
                    scores[0] = sigmoid(z) - yf;
                }
                ModelKind::Multinomial => {
                    let z_y = scores[y];
                    loss += softmax_in_place(&mut scores) - z_y;
                    scores[y] -= 1.0;
                }
            }
            // `scores` now holds dLoss/dScore for this row.
            for (c, r) in scores.iter().enumerate() {
                for &(i, v) in row {
                    grad[c * d + i] += r * v;
                }
                grad[self.weights.len() + c] += r;
            }
        }
        for g in &mut grad {
            *g /= n;
        }
        loss /= n;
        let l2 = self.config.l2;
        loss += 0.5 * l2 * self.weights.iter().map(|w| w * w).sum::<f64>();
        for (g, w) in grad.iter_mut().zip(&self.weights) {
            *g += l2 * w;
        }
        (loss, grad)
    }

    /// Flat parameter view matching the gradient layout.
    pub fn params(&self) -> Vec<f64> {
        self.weights.iter().chain(&self.bias).copied().collect()
    }

    pub fn set_params(&mut self, params: &[f64]) {
        let (w, b) = params.split_at(self.weights.len());
        self.weights.copy_from_slice(w);
        self.bias.copy_from_slice(b);
    }

    fn step(&mut self, grad: &[f64]) {
        let lr = self.config.learning_rate;
        let nw = self.weights.len();
        for (w, g) in self.weights.iter_mut().zip(grad) {
            *w -= lr * g;
        }
        for (b, g) in self.bias.iter_mut().zip(&grad[nw..]) {
            *b -= lr * g;
        }
    }
}

fn check_labels(fm: &FeatureMatrix, n_classes: usize) -> Result<()> {
    if fm.is_empty() {
        return Err(VrenError::EmptyScope("no training examples".into()));
    }
    if fm.x.len() != fm.len() * fm.width {
        return Err(VrenError::DimMismatch {
            expected: fm.len() * fm.width,
            actual: fm.x.len(),
        });
    }
    if let Some(bad) = fm.y.iter().find(|&&y| y >= n_classes) {
        return Err(VrenError::Schema(format!("label {bad} is outside 0..{n_classes}")));
    }
    let first = fm.y[0];
    if fm.y.iter().all(|&y| y == first) {
        return Err(VrenError::DegenerateLabels);
    }
    Ok(())
}

fn fit(mut model: LinearModel, fm: &FeatureMatrix) -> (LinearModel, Vec<f64>) {
    let cfg = model.config;
    if cfg.init_scale > 0.0 {
        let mut rng = Rng::new(cfg.seed);
        for w in &mut model.weights {
            *w = rng.uniform(-cfg.init_scale, cfg.init_scale);
        }
    }
    let data = SparseRows::from_matrix(fm);
    let mut history = Vec::with_capacity(cfg.epochs + 1);
    for _ in 0..cfg.epochs {
        let (loss, grad) = model.loss_and_gradient(&data);
        history.push(loss);
        model.step(&grad);
    }
    history.push(model.loss_and_gradient(&data).0);
    (model, history)
}

/// Train a binary logistic model; also returns the loss before each epoch
/// and after the last one.
pub fn train_binary_traced(fm: &FeatureMatrix, config: TrainConfig) -> Result<(LinearModel, Vec<f64>)> {
    check_labels(fm, 2)?;
    Ok(fit(LinearModel::zeros(ModelKind::Binary, fm.width, 2, config), fm))
}

pub fn train_binary(fm: &FeatureMatrix, config: TrainConfig) -> Result<LinearModel> {
    train_binary_traced(fm, config).map(|(m, _)| m)
}

pub fn train_multiclass_traced(
    fm: &FeatureMatrix,
    n_classes: usize,
    config: TrainConfig,
) -> Result<(LinearModel, Vec<f64>)> {
    check_labels(fm, n_classes)?;
    Ok(fit(LinearModel::zeros(ModelKind::Multinomial, fm.width, n_classes, config), fm))
}

pub fn train_multiclass(fm: &FeatureMatrix, n_classes: usize, config: TrainConfig) -> Result<LinearModel> {
    train_multiclass_traced(fm, n_classes, config).map(|(m, _)| m)
}

/// Build the dataset for `task` and train the matching model kind, recording
/// the window settings on the model.
pub fn train_task(
    matches: &[Match],
    task: TaskKind,
    opts: WindowOptions,
    config: TrainConfig,
) -> Result<LinearModel> {
    let fm = build_dataset(matches, task, opts)?;
    let mut model = if task.is_binary() {
        train_binary(&fm, config)?
    } else {
        train_multiclass(&fm, task.classes().len(), config)?
    };
    model.meta = Some(ModelMeta {
        task,
        window: opts.k,
        cross_rally: opts.cross_rally,
        mask: task.mask(),
    });
    Ok(model)
}

const MODEL_FORMAT: &str = "vren-linear-model";
const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    format: String,
    version: u32,
    layout_hash: String,
    #[serde(flatten)]
    model: LinearModel,
}

impl LinearModel {
    pub fn to_json(&self) -> String {
        let file = ModelFile {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            layout_hash: FeatureLayout::get().hash(),
            model: self.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("models serialize");
        s.push('\n');
        s
    }

    /// Parse a model file, refusing one trained against a different layout.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| VrenError::Schema(format!("model file: {e}")))?;
        if file.format != MODEL_FORMAT || file.version != MODEL_VERSION {
            return Err(VrenError::Schema(format!(
                "unsupported model format {} v{}",
                file.format, file.version
            )));
        }
        let expected = FeatureLayout::get().hash();
        if file.layout_hash != expected {
            return Err(VrenError::LayoutMismatch {
                expected,
                found: file.layout_hash,
            });
        }
        let m = file.model;
        let outputs = match m.kind {
            ModelKind::Binary => 1,
            ModelKind::Multinomial => m.n_classes,
        };
        if m.bias.len() != outputs || m.weights.len() != outputs * m.n_features {
            return Err(VrenError::Schema("model weight dimensions are inconsistent".into()));
        }
        Ok(m)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| VrenError::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| VrenError::io(path, e))?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(points: &[([f64; 2], usize)]) -> FeatureMatrix {
        let mut fm = FeatureMatrix::empty(0);
        fm.width = 2;
        for (x, y) in points {
            fm.push(x.to_vec(), *y, "toy");
        }
        fm
    }

    #[test]
    fn zero_epochs_gives_half() {
        let fm = toy(&[([1.0, 0.0], 1), ([0.0, 1.0], 0)]);
        let m = train_binary(&fm, TrainConfig { epochs: 0, ..Default::default() }).unwrap();
        assert_eq!(m.predict_binary(&[3.0, -2.0]).unwrap(), 0.5);
    }

    #[test]
    fn bias_ten_is_confident() {
        let mut m = LinearModel::zeros(ModelKind::Binary, 3, 2, TrainConfig::default());
        m.bias[0] = 10.0;
        assert!(m.predict_binary(&[0.0; 3]).unwrap() > 0.9999);
    }

    #[test]
    fn identical_class_weights_give_uniform() {
        let mut m = LinearModel::zeros(ModelKind::Multinomial, 2, 9, TrainConfig::default());
        for row in m.weights.chunks_mut(2) {
            row.copy_from_slice(&[0.3, -1.2]);
        }
        let p = m.predict_proba(&[1.0, 2.0]).unwrap();
        for v in &p {
            assert!((v - 1.0 / 9.0).abs() < 1e-15);
        }
    }

    #[test]
    fn dim_mismatch() {
        let m = LinearModel::zeros(ModelKind::Binary, 3, 2, TrainConfig::default());
        assert_eq!(m.predict_binary(&[0.0; 2]).unwrap_err().code(), "E_DIM_MISMATCH");
    }

    #[test]
    fn degenerate_labels() {
        let fm = toy(&[([1.0, 0.0], 1), ([0.0, 1.0], 1)]);
        assert_eq!(train_binary(&fm, TrainConfig::default()).unwrap_err().code(), "E_DEGENERATE_LABELS");
    }

    #[test]
    fn softplus_matches_naive() {
        for z in [-30.0, -2.0, 0.0, 0.5, 4.0, 30.0] {
            assert!((softplus(z) - (1.0 + f64::exp(z)).ln()).abs() < 1e-12);
        }
        assert_eq!(softplus(1000.0), 1000.0);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let fm = toy(&[([1.0, 0.2], 1), ([0.1, 1.0], 0), ([0.7, 0.3], 1)]);
        let mut m = train_binary(&fm, TrainConfig::default()).unwrap();
        m.meta = Some(ModelMeta {
            task: TaskKind::RallyWinner,
            window: 0,
            cross_rally: true,
            mask: MaskKind::NoMask,
        });
        let back = LinearModel::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
        let x = [0.123, 0.987];
        assert_eq!(back.predict_binary(&x).unwrap().to_bits(), m.predict_binary(&x).unwrap().to_bits());
    }

    #[test]
    fn wrong_layout_hash_is_refused() {
        let m = LinearModel::zeros(ModelKind::Binary, 2, 2, TrainConfig::default());
        let text = m.to_json().replace(&FeatureLayout::get().hash(), "0000000000000000");
        assert_eq!(LinearModel::from_json(&text).unwrap_err().code(), "E_LAYOUT_MISMATCH");
    }
}
