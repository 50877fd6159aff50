use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cooc::CooccurrenceTable;
use super::hogwild::SharedMatrix;
use super::objective::{dot, glove_coefficient, glove_residual, glove_weight};
use super::{Embeddings, EmbeddingModel, Hyperparams, TrainerKind};
use crate::corpus::Vocabulary;
use crate::error::{Error, Result};

/// A trained GloVe model with both vector sets.
#[derive(Clone, Debug)]
pub struct GloveModel {
    model: EmbeddingModel,
    /// `V x (d + 1)`, last column is the bias.
    center: Vec<f32>,
    context: Vec<f32>,
}

impl GloveModel {
    pub fn model(&self) -> &EmbeddingModel {
        &self.model
    }

    pub fn into_model(self) -> EmbeddingModel {
        self.model
    }

    /// Weighted loss `Σ ½ f(x) r²` summed over each epoch's updates.
    pub fn epoch_losses(&self) -> &[f64] {
        &self.model.loss_history
    }

    pub fn center_vector(&self, id: usize) -> &[f32] {
        let d = self.model.hyperparams.dimension;
        &self.center[id * (d + 1)..id * (d + 1) + d]
    }

    pub fn context_vector(&self, id: usize) -> &[f32] {
        let d = self.model.hyperparams.dimension;
        &self.context[id * (d + 1)..id * (d + 1) + d]
    }

    /// Loss of the current parameters over the whole table.
    pub fn total_loss(&self, cooc: &CooccurrenceTable) -> f64 {
        let d = self.model.hyperparams.dimension;
        let hp = &self.model.hyperparams;
        cooc.entries()
            .iter()
            .map(|&(i, j, x)| {
                let w: Vec<f64> = self.center[i as usize * (d + 1)..][..d + 1].iter().map(|&v| v as f64).collect();
                let c: Vec<f64> = self.context[j as usize * (d + 1)..][..d + 1].iter().map(|&v| v as f64).collect();
                let r = glove_residual(&w[..d], &c[..d], w[d], c[d], x);
                0.5 * glove_weight(x, hp.glove_xmax, hp.glove_alpha) * r * r
            })
            .sum()
    }
}

/// Fit GloVe to `cooc` with AdaGrad, visiting the cells in a fresh seeded
/// shuffle each epoch. The emitted vectors are center + context.
pub fn train_glove(cooc: &CooccurrenceTable, vocab: &Vocabulary, hp: &Hyperparams, threads: usize) -> Result<GloveModel> {
    hp.validate()?;
    if cooc.is_empty() {
        return Err(Error::EmptyCooccurrence);
    }
    if cooc.vocab_len() != vocab.len() {
        return Err(Error::VocabMismatch(format!(
            "table built for {} words, vocabulary has {}",
            cooc.vocab_len(),
            vocab.len()
        )));
    }

    let d = hp.dimension;
    let v = vocab.len();
    let stride = d + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(hp.seed);
    let mut init = |n: usize| -> Vec<f32> {
        (0..n)
            .map(|_| (rng.gen::<f32>() - 0.5) / d as f32)
            .collect()
    };
    let center = SharedMatrix::from_vec(init(v * stride), stride);
    let context = SharedMatrix::from_vec(init(v * stride), stride);
    let center_sq = SharedMatrix::from_vec(vec![1.0; v * stride], stride);
    let context_sq = SharedMatrix::from_vec(vec![1.0; v * stride], stride);

    let params = Params {
        center: &center,
        context: &context,
        center_sq: &center_sq,
        context_sq: &context_sq,
        dim: d,
        lr: hp.learning_rate as f32,
        xmax: hp.glove_xmax,
        alpha: hp.glove_alpha,
    };

    let mut order: Vec<usize> = (0..cooc.len()).collect();
    let epochs = hp.epochs + hp.glove_extra_epochs;
    let mut losses = Vec::with_capacity(epochs);
    let threads = threads.max(1);
    for epoch in 0..epochs {
        order.shuffle(&mut rng);
        let chunk = order.len().div_ceil(threads);
        let loss: f64 = std::thread::scope(|scope| {
            let handles: Vec<_> = order
                .chunks(chunk)
                .map(|cells| {
                    let params = &params;
                    scope.spawn(move || {
                        let mut scratch = Scratch::new(stride);
                        cells
                            .iter()
                            .map(|&k| {
                                let (i, j, x) = cooc.entries()[k];
                                params.step(i as usize, j as usize, x, &mut scratch)
                            })
                            .sum::<f64>()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("glove worker panicked")).sum()
        });
        if !loss.is_finite() {
            return Err(Error::NonFinite(format!("GloVe epoch {}", epoch + 1)));
        }
        log::debug!("glove epoch {}: loss {loss:.6}", epoch + 1);
        losses.push(loss);
    }

    let center = center.into_vec();
    let context = context.into_vec();
    let mut emitted = Vec::with_capacity(v * d);
    for id in 0..v {
        let a = &center[id * stride..id * stride + d];
        let b = &context[id * stride..id * stride + d];
        emitted.extend(a.iter().zip(b).map(|(x, y)| x + y));
    }
    if emitted.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("GloVe vectors".into()));
    }

    Ok(GloveModel {
        model: EmbeddingModel {
            trainer: TrainerKind::Glove,
            hyperparams: hp.clone(),
            embeddings: Embeddings::new(vocab.words().to_vec(), d, emitted)?,
            loss_history: losses,
        },
        center,
        context,
    })
}

struct Params<'a> {
    center: &'a SharedMatrix,
    context: &'a SharedMatrix,
    center_sq: &'a SharedMatrix,
    context_sq: &'a SharedMatrix,
    dim: usize,
    lr: f32,
    xmax: f64,
    alpha: f64,
}

struct Scratch {
    w: Vec<f32>,
    c: Vec<f32>,
    wsq: Vec<f32>,
    csq: Vec<f32>,
    dw: Vec<f32>,
    dc: Vec<f32>,
    gw: Vec<f32>,
    gc: Vec<f32>,
}

impl Scratch {
    fn new(len: usize) -> Self {
        let z = || vec![0.0f32; len];
        Scratch {
            w: z(),
            c: z(),
            wsq: z(),
            csq: z(),
            dw: z(),
            dc: z(),
            gw: z(),
            gc: z(),
        }
    }
}

impl Params<'_> {
    /// One AdaGrad step on cell `(i, j)`; returns the cell loss before the step.
    fn step(&self, i: usize, j: usize, x: f64, s: &mut Scratch) -> f64 {
        let d = self.dim;
        for buf in [&mut s.w, &mut s.c, &mut s.wsq, &mut s.csq] {
            buf.fill(0.0);
        }
        self.center.add_scaled_row_to(i, 1.0, &mut s.w);
        self.context.add_scaled_row_to(j, 1.0, &mut s.c);
        self.center_sq.add_scaled_row_to(i, 1.0, &mut s.wsq);
        self.context_sq.add_scaled_row_to(j, 1.0, &mut s.csq);

        let residual = dot(&s.w[..d], &s.c[..d]) as f64 + s.w[d] as f64 + s.c[d] as f64 - x.ln();
        let fdiff = glove_coefficient(residual, x, self.xmax, self.alpha);
        let loss = 0.5 * fdiff * residual;
        let scaled = (fdiff * self.lr as f64) as f32;

        for k in 0..d {
            let g1 = scaled * s.c[k];
            let g2 = scaled * s.w[k];
            s.dw[k] = -g1 / s.wsq[k].sqrt();
            s.dc[k] = -g2 / s.csq[k].sqrt();
            s.gw[k] = g1 * g1;
            s.gc[k] = g2 * g2;
        }
        s.dw[d] = -scaled / s.wsq[d].sqrt();
        s.dc[d] = -scaled / s.csq[d].sqrt();
        s.gw[d] = scaled * scaled;
        s.gc[d] = scaled * scaled;

        self.center.axpy_row(i, 1.0, &s.dw);
        self.context.axpy_row(j, 1.0, &s.dc);
        self.center_sq.axpy_row(i, 1.0, &s.gw);
        self.context_sq.axpy_row(j, 1.0, &s.gc);
        loss
    }
}
