//! Per-example losses and gradients shared by the trainers.
//!
//! The training loops call the scalar coefficient helpers directly; the full
//! gradient functions exist so the same coefficients can be checked against
//! finite differences.

use num_traits::Float;

#[inline]
pub fn sigmoid<T: Float>(x: T) -> T {
    T::one() / (T::one() + (-x).exp())
}

/// `ln(1 + e^x)` without overflow.
#[inline]
fn softplus<T: Float>(x: T) -> T {
    if x > T::zero() {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

#[inline]
pub fn dot<T: Float>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Descent direction scale for one (input, output) pair under the logistic
/// loss: `label - sigmoid(score)`.
#[inline]
pub fn pair_coefficient<T: Float>(score: T, positive: bool) -> T {
    let label = if positive { T::one() } else { T::zero() };
    label - sigmoid(score)
}

/// Gradients of the negative-sampling loss for one hidden vector.
#[derive(Clone, Debug)]
pub struct NegativeSamplingGrad<T> {
    pub loss: T,
    pub hidden: Vec<T>,
    pub target: Vec<T>,
    pub negatives: Vec<Vec<T>>,
}

/// Loss `-ln σ(h·t) - Σ ln σ(-h·n_k)` and its gradient with respect to the
/// hidden vector, the target output vector, and each negative output vector.
pub fn negative_sampling_grad<T: Float>(
    hidden: &[T],
    target: &[T],
    negatives: &[&[T]],
) -> NegativeSamplingGrad<T> {
    let d = hidden.len();
    let mut grad_h = vec![T::zero(); d];
    let mut loss = T::zero();

    let mut pair = |out: &[T], positive: bool| -> Vec<T> {
        let score = dot(hidden, out);
        loss = loss + if positive { softplus(-score) } else { softplus(score) };
        let g = pair_coefficient(score, positive);
        for (gh, &o) in grad_h.iter_mut().zip(out) {
            *gh = *gh - g * o;
        }
        hidden.iter().map(|&h| -g * h).collect()
    };

    let grad_t = pair(target, true);
    let grad_n: Vec<Vec<T>> = negatives.iter().map(|n| pair(n, false)).collect();

    NegativeSamplingGrad {
        loss,
        hidden: grad_h,
        target: grad_t,
        negatives: grad_n,
    }
}

/// GloVe weighting `min(1, (x / xmax)^alpha)`.
#[inline]
pub fn glove_weight<T: Float>(x: T, xmax: T, alpha: T) -> T {
    if x >= xmax {
        T::one()
    } else {
        (x / xmax).powf(alpha)
    }
}

/// Residual `w·w̃ + b + b̃ - ln x`.
#[inline]
pub fn glove_residual<T: Float>(w: &[T], wt: &[T], b: T, bt: T, x: T) -> T {
    dot(w, wt) + b + bt - x.ln()
}

/// Gradient scale `f(x) * residual` shared by every GloVe parameter.
#[inline]
pub fn glove_coefficient<T: Float>(residual: T, x: T, xmax: T, alpha: T) -> T {
    glove_weight(x, xmax, alpha) * residual
}

#[derive(Clone, Debug)]
pub struct GloveCellGrad<T> {
    pub loss: T,
    pub w: Vec<T>,
    pub wt: Vec<T>,
    pub b: T,
    pub bt: T,
}

/// Cell loss `½ f(x) (w·w̃ + b + b̃ - ln x)²` and its gradient.
pub fn glove_cell_grad<T: Float>(w: &[T], wt: &[T], b: T, bt: T, x: T, xmax: T, alpha: T) -> GloveCellGrad<T> {
    let diff = glove_residual(w, wt, b, bt, x);
    let fdiff = glove_coefficient(diff, x, xmax, alpha);
    let half = T::from(0.5).unwrap();
    GloveCellGrad {
        loss: half * fdiff * diff,
        w: wt.iter().map(|&v| fdiff * v).collect(),
        wt: w.iter().map(|&v| fdiff * v).collect(),
        b: fdiff,
        bt: fdiff,
    }
}
