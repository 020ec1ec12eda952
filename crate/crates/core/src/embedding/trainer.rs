//! Skip-gram training with negative sampling.
//!
//! Every token of a window predicts every other token of the same window.
//! Negatives are drawn from the unigram distribution raised to 0.75 over
//! word tokens only, so frame vectors are shaped by their real contexts.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::TrainingWindow;
use crate::embedding::{build_vocab, EmbeddingSpace, Vocabulary};
use crate::error::{Error, Result};
use crate::seed::derive_seed;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainerConfig {
    pub dim: usize,
    pub negatives: usize,
    pub epochs: usize,
    /// Initial learning rate, decayed linearly towards `lr * 1e-4`.
    pub learning_rate: f64,
    /// Frequent-word subsampling threshold; 0 disables subsampling.
    pub subsample: f64,
    pub min_count: u64,
    pub seed: u64,
    /// More than one thread trains with racy shared updates.
    pub threads: usize,
}

impl Default for TrainerConfig {
    fn default() -> Self {
        TrainerConfig {
            dim: 50,
            negatives: 5,
            epochs: 5,
            learning_rate: 0.025,
            subsample: 1e-3,
            min_count: 5,
            seed: 0,
            threads: 1,
        }
    }
}

impl TrainerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Config("dim must be positive".into()));
        }
        if self.negatives == 0 {
            return Err(Error::Config("negatives must be at least 1".into()));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::Config("learning rate must be positive".into()));
        }
        if !(self.subsample.is_finite() && self.subsample >= 0.0) {
            return Err(Error::Config(
                "subsample threshold must be non-negative".into(),
            ));
        }
        if self.threads == 0 {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        Ok(())
    }
}

fn log_sigmoid_neg(x: f64) -> f64 {
    // -ln(sigmoid(x)) = softplus(-x)
    let z = -x;
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Row access shared by the dense and the racy shared parameter stores.
trait Rows {
    fn read(&self, row: usize, buf: &mut [f64]);
    fn add_scaled(&mut self, row: usize, delta: &[f64], scale: f64);
}

struct DenseRows<'a> {
    data: &'a mut [f64],
    dim: usize,
}

impl Rows for DenseRows<'_> {
    fn read(&self, row: usize, buf: &mut [f64]) {
        buf.copy_from_slice(&self.data[row * self.dim..(row + 1) * self.dim]);
    }

    fn add_scaled(&mut self, row: usize, delta: &[f64], scale: f64) {
        let dst = &mut self.data[row * self.dim..(row + 1) * self.dim];
        for (d, x) in dst.iter_mut().zip(delta) {
            *d += scale * x;
        }
    }
}

/// Lock-free rows; concurrent updates may be lost (hogwild).
#[derive(Clone, Copy)]
struct SharedRows<'a> {
    data: &'a [AtomicU64],
    dim: usize,
}

impl Rows for SharedRows<'_> {
    fn read(&self, row: usize, buf: &mut [f64]) {
        for (b, cell) in buf
            .iter_mut()
            .zip(&self.data[row * self.dim..(row + 1) * self.dim])
        {
            *b = f64::from_bits(cell.load(Ordering::Relaxed));
        }
    }

    fn add_scaled(&mut self, row: usize, delta: &[f64], scale: f64) {
        for (cell, x) in self.data[row * self.dim..(row + 1) * self.dim]
            .iter()
            .zip(delta)
        {
            let cur = f64::from_bits(cell.load(Ordering::Relaxed));
            cell.store((cur + scale * x).to_bits(), Ordering::Relaxed);
        }
    }
}

struct Scratch {
    center: Vec<f64>,
    other: Vec<f64>,
    center_grad: Vec<f64>,
    coeffs: Vec<(usize, f64)>,
}

impl Scratch {
    fn new(dim: usize) -> Self {
        Scratch {
            center: vec![0.0; dim],
            other: vec![0.0; dim],
            center_grad: vec![0.0; dim],
            coeffs: Vec::new(),
        }
    }
}

/// One SGNS update. All dot products use the pre-update parameters, so
/// the applied step is exactly `-lr` times the gradient of the returned
/// loss, also when ids repeat among the negatives.
fn sgns_update<I: Rows, O: Rows>(
    input: &mut I,
    output: &mut O,
    center: usize,
    context: usize,
    negatives: &[usize],
    lr: f64,
    s: &mut Scratch,
) -> f64 {
    input.read(center, &mut s.center);
    s.center_grad.iter_mut().for_each(|g| *g = 0.0);
    s.coeffs.clear();

    let mut loss = 0.0;
    let targets = std::iter::once((context, true)).chain(negatives.iter().map(|&n| (n, false)));
    for (id, positive) in targets {
        output.read(id, &mut s.other);
        let score: f64 = s.center.iter().zip(&s.other).map(|(a, b)| a * b).sum();
        let (l, g) = if positive {
            (log_sigmoid_neg(score), sigmoid(score) - 1.0)
        } else {
            (log_sigmoid_neg(-score), sigmoid(score))
        };
        loss += l;
        for (cg, u) in s.center_grad.iter_mut().zip(&s.other) {
            *cg += g * u;
        }
        s.coeffs.push((id, g));
    }

    for &(id, g) in &s.coeffs {
        output.add_scaled(id, &s.center, -lr * g);
    }
    input.add_scaled(center, &s.center_grad, -lr);
    loss
}

fn check_id(space: &EmbeddingSpace, id: usize) -> Result<()> {
    if id >= space.len() {
        return Err(Error::Argument(format!(
            "id {id} out of range for vocabulary of {}",
            space.len()
        )));
    }
    Ok(())
}

/// Applies one skip-gram negative-sampling step and returns the loss
/// `-ln σ(u_ctx·v) - Σ ln σ(-u_neg·v)` measured before the update.
pub fn sgns_step(
    space: &mut EmbeddingSpace,
    center: usize,
    context: usize,
    negatives: &[usize],
    lr: f64,
) -> Result<f64> {
    for &id in [center, context].iter().chain(negatives) {
        check_id(space, id)?;
    }
    let dim = space.dim();
    let mut scratch = Scratch::new(dim);
    let mut input = DenseRows {
        data: &mut space.input,
        dim,
    };
    let mut output = DenseRows {
        data: &mut space.output,
        dim,
    };
    Ok(sgns_update(
        &mut input,
        &mut output,
        center,
        context,
        negatives,
        lr,
        &mut scratch,
    ))
}

/// Builds the vocabulary from `windows` and trains a space over it.
pub fn train(windows: &[TrainingWindow], config: &TrainerConfig) -> Result<EmbeddingSpace> {
    config.validate()?;
    let vocab = build_vocab(windows, config.min_count)?;
    train_with_vocab(windows, vocab, config)
}

pub fn initialize_space(vocab: Vocabulary, config: &TrainerConfig) -> Result<EmbeddingSpace> {
    config.validate()?;
    let dim = config.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, "init"));
    let bound = 0.5 / dim as f64;
    let input: Vec<f64> = (0..vocab.len() * dim)
        .map(|_| rng.random_range(-bound..bound))
        .collect();
    EmbeddingSpace::from_rows(vocab, dim, input)
}

struct Corpus {
    /// Window token ids in sentence order; OOV tokens removed.
    windows: Vec<Vec<usize>>,
    negatives: Option<(Vec<usize>, WeightedIndex<f64>)>,
    keep_prob: Vec<f64>,
}

impl Corpus {
    fn new(windows: &[TrainingWindow], vocab: &Vocabulary, subsample: f64) -> Result<Self> {
        let ids = windows
            .iter()
            .map(|w| w.sequence().filter_map(|t| vocab.id(t)).collect())
            .collect();

        let word_ids: Vec<usize> = vocab.word_ids().collect();
        let weights: Vec<f64> = word_ids
            .iter()
            .map(|&id| (vocab.count(id).max(1) as f64).powf(0.75))
            .collect();
        let negatives = if word_ids.is_empty() {
            None
        } else {
            let dist = WeightedIndex::new(&weights)
                .map_err(|e| Error::Config(format!("negative distribution: {e}")))?;
            Some((word_ids, dist))
        };

        let total = vocab.total_count().max(1) as f64;
        let keep_prob = (0..vocab.len())
            .map(|id| {
                if subsample == 0.0 || vocab.is_frame(id) || vocab.count(id) == 0 {
                    return 1.0;
                }
                let f = vocab.count(id) as f64 / total;
                let t = subsample;
                ((f / t).sqrt() + 1.0) * (t / f)
            })
            .collect();

        Ok(Corpus {
            windows: ids,
            negatives,
            keep_prob,
        })
    }

    fn draw_negatives<R: Rng>(&self, rng: &mut R, avoid: usize, n: usize, out: &mut Vec<usize>) {
        out.clear();
        let (ids, dist) = self.negatives.as_ref().expect("checked before training");
        if ids.len() == 1 && ids[0] == avoid {
            return;
        }
        while out.len() < n {
            let id = ids[dist.sample(rng)];
            if id != avoid {
                out.push(id);
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn run<I: Rows, O: Rows, R: Rng>(
        &self,
        range: std::ops::Range<usize>,
        input: &mut I,
        output: &mut O,
        config: &TrainerConfig,
        rng: &mut R,
        scratch: &mut Scratch,
    ) {
        let per_epoch = range.len().max(1);
        let planned = (config.epochs * per_epoch) as f64;
        let mut done = 0usize;
        let mut kept = Vec::new();
        let mut negs = Vec::with_capacity(config.negatives);
        for _ in 0..config.epochs {
            for w in &self.windows[range.clone()] {
                let progress = done as f64 / planned;
                let lr = config.learning_rate * (1.0 - progress).max(1e-4);
                done += 1;

                kept.clear();
                kept.extend(w.iter().copied().filter(|&id| {
                    self.keep_prob[id] >= 1.0 || rng.random::<f64>() < self.keep_prob[id]
                }));
                for (i, &center) in kept.iter().enumerate() {
                    for (j, &ctx) in kept.iter().enumerate() {
                        if i == j {
                            continue;
                        }
                        self.draw_negatives(rng, ctx, config.negatives, &mut negs);
                        sgns_update(input, output, center, ctx, &negs, lr, scratch);
                    }
                }
            }
        }
    }
}

/// Trains over a fixed vocabulary; window tokens outside it are ignored.
pub fn train_with_vocab(
    windows: &[TrainingWindow],
    vocab: Vocabulary,
    config: &TrainerConfig,
) -> Result<EmbeddingSpace> {
    let mut space = initialize_space(vocab, config)?;
    if config.epochs == 0 || windows.is_empty() {
        return Ok(space);
    }
    let corpus = Corpus::new(windows, space.vocab(), config.subsample)?;
    if corpus.negatives.is_none() {
        return Err(Error::Config(
            "vocabulary has no word tokens to sample negatives from".into(),
        ));
    }
    let dim = space.dim();

    if config.threads == 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, "train/0"));
        let mut scratch = Scratch::new(dim);
        let mut input = DenseRows {
            data: &mut space.input,
            dim,
        };
        let mut output = DenseRows {
            data: &mut space.output,
            dim,
        };
        corpus.run(
            0..corpus.windows.len(),
            &mut input,
            &mut output,
            config,
            &mut rng,
            &mut scratch,
        );
        return Ok(space);
    }

    let to_atomic =
        |v: &[f64]| -> Vec<AtomicU64> { v.iter().map(|x| AtomicU64::new(x.to_bits())).collect() };
    let input = to_atomic(&space.input);
    let output = to_atomic(&space.output);
    let n = corpus.windows.len();
    let threads = config.threads.min(n);
    let chunk = n.div_ceil(threads);
    std::thread::scope(|scope| {
        for t in 0..threads {
            let range = (t * chunk)..((t + 1) * chunk).min(n);
            let corpus = &corpus;
            let mut in_rows = SharedRows { data: &input, dim };
            let mut out_rows = SharedRows { data: &output, dim };
            scope.spawn(move || {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(derive_seed(config.seed, &format!("train/{t}")));
                let mut scratch = Scratch::new(dim);
                corpus.run(
                    range,
                    &mut in_rows,
                    &mut out_rows,
                    config,
                    &mut rng,
                    &mut scratch,
                );
            });
        }
    });
    let from_atomic = |v: Vec<AtomicU64>| -> Vec<f64> {
        v.into_iter()
            .map(|a| f64::from_bits(a.into_inner()))
            .collect()
    };
    space.input = from_atomic(input);
    space.output = from_atomic(output);
    Ok(space)
}
