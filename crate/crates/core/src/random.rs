//! Seeded generators for random operators, models and states.
//!
//! Everything is driven by a caller-supplied `ChaCha8Rng`, so test fixtures
//! and experiment inputs are reproducible from a seed.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::block::BlockMatrix;
use crate::operator::{Operator, C64, I};
use crate::semigroup::{ExponentialState, Segment};
use crate::slh::{GaugeElement, SlhModel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Real and imaginary parts uniform on `[−1, 1]`.
pub fn complex<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

pub fn operator<R: Rng>(rng: &mut R, d: usize, scale: f64) -> Operator {
    let m = DMatrix::from_fn(d, d, |_, _| complex(rng) * scale);
    Operator::new(m).expect("square")
}

pub fn hermitian<R: Rng>(rng: &mut R, d: usize, scale: f64) -> Operator {
    operator(rng, d, scale).re_part()
}

/// `e^{iA}` for a random Hermitian `A` with entries of order one.
pub fn unitary<R: Rng>(rng: &mut R, d: usize) -> Operator {
    hermitian(rng, d, 2.0).scale(I).exp()
}

/// Model with a random block unitary `S`, random `L` and Hermitian `H`.
pub fn model<R: Rng>(rng: &mut R, n: usize, d: usize) -> SlhModel {
    let s = BlockMatrix::from_assembled(&unitary(rng, n * d), n).expect("shape");
    let l = (0..n).map(|_| operator(rng, d, 1.0)).collect();
    SlhModel::new(s, l, hermitian(rng, d, 1.0)).expect("shape")
}

/// Model with `S = I`.
pub fn coupled_model<R: Rng>(rng: &mut R, n: usize, d: usize) -> SlhModel {
    let l = (0..n).map(|_| operator(rng, d, 1.0)).collect();
    SlhModel::coupled(l, hermitian(rng, d, 1.0)).expect("shape")
}

/// Model within roughly `size` of the identity: `S = e^{i·size·A}`,
/// `‖L‖, ‖H‖ = O(size)`.
pub fn perturbation<R: Rng>(rng: &mut R, n: usize, d: usize, size: f64) -> SlhModel {
    let a = hermitian(rng, n * d, size);
    let s = BlockMatrix::from_assembled(&a.scale(I).exp(), n).expect("shape");
    let l = (0..n).map(|_| operator(rng, d, size)).collect();
    SlhModel::new(s, l, hermitian(rng, d, size)).expect("shape")
}

pub fn amplitudes<R: Rng>(rng: &mut R, n: usize, scale: f64) -> Vec<C64> {
    (0..n).map(|_| complex(rng) * scale).collect()
}

pub fn gauge<R: Rng>(rng: &mut R, n: usize) -> GaugeElement {
    let r = unitary(rng, n).into_matrix();
    GaugeElement::new(r, amplitudes(rng, n, 1.0), rng.gen_range(-1.0..=1.0)).expect("unitary")
}

pub fn unit_vector<R: Rng>(rng: &mut R, d: usize) -> DVector<C64> {
    let v = DVector::from_fn(d, |_, _| complex(rng));
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

/// Exponential state with a unit system vector and `segments` equal-length
/// pieces covering `[0, t]`.
pub fn state<R: Rng>(rng: &mut R, d: usize, n: usize, t: f64, segments: usize) -> ExponentialState {
    let v = unit_vector(rng, d);
    let segs = (1..=segments)
        .map(|j| Segment {
            t_end: t * j as f64 / segments as f64,
            alpha: amplitudes(rng, n, 0.8),
        })
        .collect();
    ExponentialState::new(v, segs).expect("valid segments")
}

/// Coupling vector of `n` random operators.
pub fn couplings<R: Rng>(rng: &mut R, n: usize, d: usize, scale: f64) -> Vec<Operator> {
    (0..n).map(|_| operator(rng, d, scale)).collect()
}
