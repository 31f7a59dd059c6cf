//! Fully-connected ReLU network with a softmax output layer.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Layer layout. `layer_widths` lists the neuron layers after the input; all
/// but the last use ReLU, the last uses softmax.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlpSpec {
    pub input_width: usize,
    pub layer_widths: Vec<usize>,
}

impl MlpSpec {
    pub fn new(input_width: usize, layer_widths: Vec<usize>) -> Result<Self> {
        let spec = Self { input_width, layer_widths };
        spec.validate()?;
        Ok(spec)
    }

    /// `2M -> 2M -> 4M -> 8M -> 16M -> G`.
    pub fn for_array(num_antennas: usize, grid_size: usize) -> Self {
        let m = num_antennas;
        Self {
            input_width: 2 * m,
            layer_widths: vec![2 * m, 4 * m, 8 * m, 16 * m, grid_size],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.input_width == 0 || self.layer_widths.is_empty() || self.layer_widths.contains(&0) {
            return Err(Error::shape("positive widths and at least one layer", format!("{self:?}")));
        }
        Ok(())
    }

    pub fn output_width(&self) -> usize {
        *self.layer_widths.last().expect("validated spec has layers")
    }

    /// (fan_in, fan_out) of every layer.
    pub fn layer_shapes(&self) -> Vec<(usize, usize)> {
        let mut fan_in = self.input_width;
        self.layer_widths
            .iter()
            .map(|&w| {
                let s = (fan_in, w);
                fan_in = w;
                s
            })
            .collect()
    }

    pub fn num_params(&self) -> usize {
        self.layer_shapes().iter().map(|(i, o)| i * o + o).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    /// `out x in`
    pub weights: DMatrix<f64>,
    pub bias: DVector<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpParams {
    pub layers: Vec<Dense>,
}

impl MlpParams {
    pub fn zeros(spec: &MlpSpec) -> Self {
        let layers = spec
            .layer_shapes()
            .into_iter()
            .map(|(i, o)| Dense { weights: DMatrix::zeros(o, i), bias: DVector::zeros(o) })
            .collect();
        Self { layers }
    }

    /// Glorot-uniform weights, zero biases.
    pub fn glorot(spec: &MlpSpec, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        let layers = spec
            .layer_shapes()
            .into_iter()
            .map(|(i, o)| {
                let a = (6.0 / (i + o) as f64).sqrt();
                // row-major draw order
                let mut weights = DMatrix::zeros(o, i);
                for r in 0..o {
                    for c in 0..i {
                        weights[(r, c)] = rng.random_range(-a..=a);
                    }
                }
                Dense { weights, bias: DVector::zeros(o) }
            })
            .collect();
        Self { layers }
    }

    pub fn spec(&self) -> MlpSpec {
        MlpSpec {
            input_width: self.layers.first().map_or(0, |l| l.weights.ncols()),
            layer_widths: self.layers.iter().map(|l| l.weights.nrows()).collect(),
        }
    }

    pub fn input_width(&self) -> usize {
        self.layers.first().map_or(0, |l| l.weights.ncols())
    }

    pub fn output_width(&self) -> usize {
        self.layers.last().map_or(0, |l| l.weights.nrows())
    }

    /// `self += scale * other`, shapes must agree.
    pub fn add_scaled(&mut self, other: &MlpParams, scale: f64) {
        for (l, g) in self.layers.iter_mut().zip(&other.layers) {
            l.weights.zip_apply(&g.weights, |w, d| *w += scale * d);
            l.bias.axpy(scale, &g.bias, 1.0);
        }
    }

    pub fn flat_len(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.bias.len()).sum()
    }

    /// Visits every scalar parameter in a fixed order (weights row-major,
    /// then bias, layer by layer).
    pub fn for_each_mut(&mut self, mut f: impl FnMut(&mut f64)) {
        for l in &mut self.layers {
            let (o, i) = l.weights.shape();
            for r in 0..o {
                for c in 0..i {
                    f(&mut l.weights[(r, c)]);
                }
            }
            l.bias.iter_mut().for_each(&mut f);
        }
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.flat_len());
        let mut copy = self.clone();
        copy.for_each_mut(|v| out.push(*v));
        out
    }
}

fn check_input(params: &MlpParams, rows: usize) -> Result<()> {
    if rows != params.input_width() {
        return Err(Error::shape(format!("{} input features", params.input_width()), rows));
    }
    Ok(())
}

/// Column-wise softmax, stabilized by the column max.
pub(crate) fn softmax_columns(z: &mut DMatrix<f64>) {
    for mut col in z.column_iter_mut() {
        let max = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        col.iter_mut().for_each(|v| *v = (*v - max).exp());
        let sum: f64 = col.iter().sum();
        col.iter_mut().for_each(|v| *v /= sum);
    }
}

/// Pre-activations and activations of every layer for a batch (columns are
/// samples).
pub(crate) struct Tape {
    /// activations[0] is the input, activations[l + 1] the output of layer l
    pub activations: Vec<DMatrix<f64>>,
    pub preacts: Vec<DMatrix<f64>>,
}

pub(crate) fn forward_batch(params: &MlpParams, x: DMatrix<f64>) -> Result<Tape> {
    check_input(params, x.nrows())?;
    let n_layers = params.layers.len();
    let mut activations = Vec::with_capacity(n_layers + 1);
    let mut preacts = Vec::with_capacity(n_layers);
    activations.push(x);
    for (idx, layer) in params.layers.iter().enumerate() {
        let mut z = &layer.weights * activations.last().expect("input pushed");
        for mut col in z.column_iter_mut() {
            col += &layer.bias;
        }
        let mut a = z.clone();
        if idx + 1 == n_layers {
            softmax_columns(&mut a);
        } else {
            a.iter_mut().for_each(|v| *v = v.max(0.0));
        }
        preacts.push(z);
        activations.push(a);
    }
    Ok(Tape { activations, preacts })
}

pub fn forward(params: &MlpParams, input: &[f64]) -> Result<Vec<f64>> {
    check_input(params, input.len())?;
    if input.iter().any(|v| !v.is_finite()) {
        return Err(Error::Degenerate("non-finite network input".into()));
    }
    let x = DMatrix::from_column_slice(input.len(), 1, input);
    let tape = forward_batch(params, x)?;
    Ok(tape.activations.last().expect("output layer").as_slice().to_vec())
}

pub fn loss_l1(predicted: &[f64], target: &[f64]) -> Result<f64> {
    if predicted.len() != target.len() {
        return Err(Error::shape(predicted.len(), target.len()));
    }
    Ok(predicted.iter().zip(target).map(|(p, t)| (p - t).abs()).sum())
}

fn sign0(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Backpropagates the mean L1 loss over the batch. Returns (mean loss,
/// gradient). Subgradients of |.| and ReLU at 0 are taken as 0.
pub(crate) fn backward_batch(
    params: &MlpParams,
    x: DMatrix<f64>,
    targets: &DMatrix<f64>,
) -> Result<(f64, MlpParams)> {
    let batch = x.ncols();
    let tape = forward_batch(params, x)?;
    let out = tape.activations.last().expect("output layer");
    if out.shape() != targets.shape() {
        return Err(Error::shape(format!("{:?}", out.shape()), format!("{:?}", targets.shape())));
    }
    let inv_b = 1.0 / batch as f64;
    let loss = out.iter().zip(targets.iter()).map(|(p, t)| (p - t).abs()).sum::<f64>() * inv_b;

    // dL/dz for softmax: p * (s - <s, p>) with s = sign(p - t)
    let mut delta = DMatrix::zeros(out.nrows(), batch);
    for c in 0..batch {
        let p = out.column(c);
        let t = targets.column(c);
        let s: Vec<f64> = p.iter().zip(t.iter()).map(|(a, b)| sign0(a - b)).collect();
        let sp: f64 = s.iter().zip(p.iter()).map(|(a, b)| a * b).sum();
        for r in 0..out.nrows() {
            delta[(r, c)] = p[r] * (s[r] - sp) * inv_b;
        }
    }

    let mut grads: Vec<Dense> = Vec::with_capacity(params.layers.len());
    for l in (0..params.layers.len()).rev() {
        let a_prev = &tape.activations[l];
        let dw = &delta * a_prev.transpose();
        let db = DVector::from_iterator(delta.nrows(), delta.row_iter().map(|r| r.sum()));
        if l > 0 {
            let mut next = params.layers[l].weights.tr_mul(&delta);
            let z = &tape.preacts[l - 1];
            next.zip_apply(z, |d, zv| {
                if zv <= 0.0 {
                    *d = 0.0
                }
            });
            delta = next;
        }
        grads.push(Dense { weights: dw, bias: db });
    }
    grads.reverse();
    Ok((loss, MlpParams { layers: grads }))
}

/// Gradient of `loss_l1(forward(input), target)` with respect to every
/// parameter.
pub fn backward(params: &MlpParams, input: &[f64], target: &[f64]) -> Result<MlpParams> {
    check_input(params, input.len())?;
    if target.len() != params.output_width() {
        return Err(Error::shape(params.output_width(), target.len()));
    }
    let x = DMatrix::from_column_slice(input.len(), 1, input);
    let t = DMatrix::from_column_slice(target.len(), 1, target);
    Ok(backward_batch(params, x, &t)?.1)
}
