// SPDX-License-Identifier: MIT OR Apache-2.0

//! Independent reference implementations used as test oracles.
//!
//! Nothing here calls into the crate's math. Weights are copied out of the
//! container into per-gate nested vectors and every equation is written out
//! with plain loops.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

use agreement_lrp::lrp::ConservationLedger;
use agreement_lrp::model::{LayerWeights, ModelConfig, WeightContainer};
use agreement_lrp::tensor::Matrix;
use agreement_lrp::tse::{EvalRecord, Number, Tag, TemplateId, TestCase};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// gate blocks, in storage order
pub const I: usize = 0;
pub const F: usize = 1;
pub const G: usize = 2;
pub const O: usize = 3;

type Rows = Vec<Vec<f64>>;

pub struct NaiveLayer {
    pub wx: [Rows; 4],
    pub wh: [Rows; 4],
    pub b: [Vec<f64>; 4],
}

pub struct NaiveModel {
    pub emb: Rows,
    pub layers: Vec<NaiveLayer>,
    pub dec_w: Rows,
    pub dec_b: Vec<f64>,
}

fn rows_of(m: &Matrix) -> Rows {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c)).collect())
        .collect()
}

fn gate_blocks(m: &Matrix, h: usize) -> [Rows; 4] {
    let all = rows_of(m);
    std::array::from_fn(|q| all[q * h..(q + 1) * h].to_vec())
}

impl NaiveModel {
    pub fn from_container(w: &WeightContainer) -> Self {
        let layers = w
            .layers
            .iter()
            .map(|l| {
                let h = l.recurrent_weights.cols();
                NaiveLayer {
                    wx: gate_blocks(&l.input_weights, h),
                    wh: gate_blocks(&l.recurrent_weights, h),
                    b: std::array::from_fn(|q| l.bias[q * h..(q + 1) * h].to_vec()),
                }
            })
            .collect();
        Self {
            emb: rows_of(&w.embedding),
            layers,
            dec_w: rows_of(&w.decoder_weights),
            dec_b: w.decoder_bias.clone(),
        }
    }
}

pub fn naive_sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

#[derive(Clone, Debug)]
pub struct NaiveStep {
    pub x: Vec<f64>,
    pub h_prev: Vec<f64>,
    pub c_prev: Vec<f64>,
    /// pre-activations per gate
    pub z: [Vec<f64>; 4],
    pub i: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub o: Vec<f64>,
    pub c: Vec<f64>,
    pub h: Vec<f64>,
}

pub fn naive_cell(layer: &NaiveLayer, x: &[f64], h_prev: &[f64], c_prev: &[f64]) -> NaiveStep {
    let hs = h_prev.len();
    let z: [Vec<f64>; 4] = std::array::from_fn(|q| {
        (0..hs)
            .map(|k| {
                let mut a = 0.0;
                for m in 0..x.len() {
                    a += layer.wx[q][k][m] * x[m];
                }
                let mut r = 0.0;
                for m in 0..hs {
                    r += layer.wh[q][k][m] * h_prev[m];
                }
                a + r + layer.b[q][k]
            })
            .collect()
    });
    let i: Vec<f64> = z[I].iter().map(|&v| naive_sigmoid(v)).collect();
    let f: Vec<f64> = z[F].iter().map(|&v| naive_sigmoid(v)).collect();
    let g: Vec<f64> = z[G].iter().map(|&v| v.tanh()).collect();
    let o: Vec<f64> = z[O].iter().map(|&v| naive_sigmoid(v)).collect();
    let c: Vec<f64> = (0..hs).map(|k| f[k] * c_prev[k] + i[k] * g[k]).collect();
    let h: Vec<f64> = (0..hs).map(|k| o[k] * c[k].tanh()).collect();
    NaiveStep {
        x: x.to_vec(),
        h_prev: h_prev.to_vec(),
        c_prev: c_prev.to_vec(),
        z,
        i,
        f,
        g,
        o,
        c,
        h,
    }
}

pub struct NaiveForward {
    /// `steps[layer][t]`
    pub steps: Vec<Vec<NaiveStep>>,
    pub logits: Vec<f64>,
}

pub fn naive_forward(m: &NaiveModel, ids: &[usize]) -> NaiveForward {
    let n_layers = m.layers.len();
    let mut steps: Vec<Vec<NaiveStep>> = vec![Vec::new(); n_layers];
    for &id in ids {
        let mut x = m.emb[id].clone();
        for l in 0..n_layers {
            let hs = m.layers[l].b[0].len();
            let (h_prev, c_prev) = match steps[l].last() {
                Some(s) => (s.h.clone(), s.c.clone()),
                None => (vec![0.0; hs], vec![0.0; hs]),
            };
            let s = naive_cell(&m.layers[l], &x, &h_prev, &c_prev);
            x = s.h.clone();
            steps[l].push(s);
        }
    }
    let top = &steps[n_layers - 1].last().unwrap().h;
    let logits = m
        .dec_w
        .iter()
        .zip(&m.dec_b)
        .map(|(row, b)| {
            let mut y = 0.0;
            for k in 0..top.len() {
                y += row[k] * top[k];
            }
            y + b
        })
        .collect();
    NaiveForward { steps, logits }
}

fn stab(z: f64, eps: f64) -> f64 {
    if z >= 0.0 {
        z + eps
    } else {
        z - eps
    }
}

#[derive(Clone, Debug)]
pub struct NaiveAttribution {
    pub tokens: Vec<f64>,
    pub bias: f64,
    pub initial_state: f64,
    pub leak: f64,
    pub delta_y: f64,
}

/// Direct transcription of the backward equations.
///
/// `r_pos` / `r_neg` default to `y_pos` / `−y_neg`; pass `scale` to multiply both.
pub fn naive_lrp(
    m: &NaiveModel,
    fw: &NaiveForward,
    pos: usize,
    neg: usize,
    eps: f64,
    scale: f64,
) -> NaiveAttribution {
    let n_layers = m.layers.len();
    let t_len = fw.steps[0].len();
    let top = &fw.steps[n_layers - 1][t_len - 1].h;
    let mut bias = 0.0;
    let mut leak = 0.0;

    let mut r_h: Vec<Vec<f64>> = m.layers.iter().map(|l| vec![0.0; l.b[0].len()]).collect();
    let mut r_c = r_h.clone();
    for (j, rj) in [
        (pos, scale * fw.logits[pos]),
        (neg, -scale * fw.logits[neg]),
    ] {
        let mut zj = 0.0;
        for k in 0..top.len() {
            zj += m.dec_w[j][k] * top[k];
        }
        zj += m.dec_b[j];
        let s = stab(zj, eps);
        for k in 0..top.len() {
            r_h[n_layers - 1][k] += m.dec_w[j][k] * top[k] * rj / s;
        }
        bias += m.dec_b[j] * rj / s;
        leak += rj * (s - zj) / s;
    }

    let mut tokens = vec![0.0; t_len];
    for t in (0..t_len).rev() {
        for l in (0..n_layers).rev() {
            let st = &fw.steps[l][t];
            let lay = &m.layers[l];
            let hs = st.c.len();
            let mut r_x = vec![0.0; st.x.len()];
            let mut r_hp = vec![0.0; hs];
            let mut r_cp = vec![0.0; hs];
            for k in 0..hs {
                let rc = r_h[l][k] + r_c[l][k];
                let sc = stab(st.c[k], eps);
                r_cp[k] = st.f[k] * st.c_prev[k] * rc / sc;
                let r_ig = st.i[k] * st.g[k] * rc / sc;
                leak += rc * (sc - st.c[k]) / sc;

                let zg = st.z[G][k];
                let sg = stab(zg, eps);
                for mm in 0..st.x.len() {
                    r_x[mm] += lay.wx[G][k][mm] * st.x[mm] * r_ig / sg;
                }
                for mm in 0..hs {
                    r_hp[mm] += lay.wh[G][k][mm] * st.h_prev[mm] * r_ig / sg;
                }
                bias += lay.b[G][k] * r_ig / sg;
                leak += r_ig * (sg - zg) / sg;
            }
            r_h[l] = r_hp;
            r_c[l] = r_cp;
            if l > 0 {
                for mm in 0..r_x.len() {
                    r_h[l - 1][mm] += r_x[mm];
                }
            } else {
                tokens[t] = r_x.iter().sum();
            }
        }
    }
    let initial_state = r_h.iter().chain(&r_c).flatten().sum();
    NaiveAttribution {
        tokens,
        bias,
        initial_state,
        leak,
        delta_y: scale * (fw.logits[pos] - fw.logits[neg]),
    }
}

/// Smallest |denominator| across both active logits, all cells, and all g pre-activations.
pub fn naive_min_denominator(fw: &NaiveForward, pos: usize, neg: usize) -> f64 {
    let mut m = fw.logits[pos].abs().min(fw.logits[neg].abs());
    for s in fw.steps.iter().flatten() {
        for &v in s.c.iter().chain(&s.z[G]) {
            m = m.min(v.abs());
        }
    }
    m
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub config: ModelConfig,
    pub weights: WeightContainer,
    pub ids: Vec<usize>,
    pub pos: usize,
    pub neg: usize,
}

fn uniform(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-scale..scale)).collect()
}

/// A random model, sequence, and target pair.
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    hiddens: &[usize],
    layers: &[usize],
    steps: std::ops::RangeInclusive<usize>,
) -> Instance {
    let h = hiddens[rng.gen_range(0..hiddens.len())];
    let n_layers = layers[rng.gen_range(0..layers.len())];
    let t = rng.gen_range(steps);
    let d = rng.gen_range(2..=5);
    let v = rng.gen_range(4..=9);
    let config = ModelConfig {
        num_layers: n_layers,
        hidden_size: h,
        embed_size: d,
        vocab_size: v,
    };
    let scale = 1.0;
    let weights = WeightContainer {
        embedding: Matrix::from_vec(v, d, uniform(rng, v * d, scale)),
        layers: (0..n_layers)
            .map(|l| {
                let inp = if l == 0 { d } else { h };
                LayerWeights {
                    input_weights: Matrix::from_vec(4 * h, inp, uniform(rng, 4 * h * inp, scale)),
                    recurrent_weights: Matrix::from_vec(4 * h, h, uniform(rng, 4 * h * h, scale)),
                    bias: uniform(rng, 4 * h, scale),
                }
            })
            .collect(),
        decoder_weights: Matrix::from_vec(v, h, uniform(rng, v * h, scale)),
        decoder_bias: uniform(rng, v, scale),
    };
    let ids = (0..t).map(|_| rng.gen_range(0..v)).collect();
    let pos = rng.gen_range(0..v);
    let neg = (pos + rng.gen_range(1..v)) % v;
    Instance {
        config,
        weights,
        ids,
        pos,
        neg,
    }
}

/// Like [`random_instance`], resampled until every split denominator is at least `floor`.
pub fn conditioned_instance(
    rng: &mut ChaCha8Rng,
    hiddens: &[usize],
    layers: &[usize],
    steps: std::ops::RangeInclusive<usize>,
    floor: f64,
) -> Instance {
    loop {
        let inst = random_instance(rng, hiddens, layers, steps.clone());
        let m = NaiveModel::from_container(&inst.weights);
        let fw = naive_forward(&m, &inst.ids);
        if naive_min_denominator(&fw, inst.pos, inst.neg) >= floor {
            return inst;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

/// A hand-built record with the given tag relevances.
pub fn record(correct: bool, tags: &[(Tag, f64)]) -> EvalRecord {
    let case = TestCase {
        template: TemplateId::Pp,
        preamble: vec!["The".into(), "senator".into()],
        spans: BTreeMap::new(),
        target_correct: "laughs".into(),
        target_incorrect: "laugh".into(),
        n1_number: Number::Singular,
    };
    EvalRecord {
        correct,
        delta_y: if correct { 1.0 } else { -1.0 },
        logit_correct: 0.0,
        logit_incorrect: 0.0,
        tag_relevance: tags.iter().copied().collect(),
        token_relevance: Vec::new(),
        ledger: ConservationLedger::default(),
        predicted_form: if correct {
            "laughs".into()
        } else {
            "laugh".into()
        },
        case,
    }
}

/// Twelve records with hand-counted outcomes.
///
/// correct: 8 of 12. N1 strictly on top: #1 #2 #7 #9 #10 #12 (6).
/// N2 on top: #3 #6 #11 (3). Det1: #4. Det2: #8. Tie between N1 and N2: #5.
pub fn counting_fixture() -> Vec<EvalRecord> {
    use Tag::*;
    let rows: [(bool, [f64; 4]); 12] = [
        (true, [0.1, 2.0, 0.2, 1.0]),
        (true, [0.1, -3.0, 0.5, 2.9]),
        (false, [0.2, 0.5, 0.1, -1.5]),
        (true, [1.2, 1.0, 0.1, 0.3]),
        (true, [0.0, 2.0, 0.0, -2.0]),
        (false, [0.3, 0.2, 0.1, 0.9]),
        (true, [-0.4, 0.8, 0.2, 0.1]),
        (true, [0.1, 0.1, 0.7, 0.2]),
        (false, [0.5, -1.1, 0.3, 1.0]),
        (true, [0.2, 4.0, 0.1, 0.5]),
        (false, [0.9, 0.3, 0.2, -0.95]),
        (true, [0.05, 0.6, 0.4, 0.5]),
    ];
    rows.iter()
        .map(|(c, [d1, n1, d2, n2])| record(*c, &[(Det1, *d1), (N1, *n1), (Det2, *d2), (N2, *n2)]))
        .collect()
}

pub const FIXTURE_ACCURACY: f64 = 100.0 * 8.0 / 12.0;
pub const FIXTURE_POINTING: f64 = 100.0 * 6.0 / 12.0;
pub const FIXTURE_N2_TOP: f64 = 100.0 * 3.0 / 12.0;

/// Eight points for the statistics oracles.
pub const STAT_XS: [f64; 8] = [0.3, -1.2, 2.5, 0.0, 4.1, -0.7, 1.9, 3.3];
pub const STAT_YS: [f64; 8] = [1.1, -0.4, 2.2, 0.5, 3.9, -1.6, 1.0, 2.8];

/// Textbook raw-sum formulas, deliberately not the centered form.
pub fn closed_form_pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let syy: f64 = ys.iter().map(|y| y * y).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

pub fn closed_form_regression(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    (slope, (sy - slope * sx) / n)
}
