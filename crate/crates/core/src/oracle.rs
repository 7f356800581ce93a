//! Repeated-interaction (collision model) integrator for the unitary QSDE.
//!
//! Time is cut into slices of length `dt`; each slice carries a fresh
//! truncated bosonic mode per channel, prepared in the coherent state of
//! amplitude `α_j √dt`, interacts once with the system and is then traced
//! out. Two models run on the same slice lattice, so the cross term
//! `⟨Φ_a, Φ_b⟩` is accumulated through the system operator
//! `ρ_ab = Tr_slices |Φ_b⟩⟨Φ_a|`, updated as `ρ ↦ Σ_k M_{b,k} ρ M_{a,k}*`
//! with `M_k = ⟨k| V |coh⟩`.

use nalgebra::{DMatrix, Schur};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::block::{self, BlockMatrix};
use crate::error::{Error, Result};
use crate::operator::{c, Operator, C64, DEFAULT_TOL, I};
use crate::semigroup::ExponentialState;
use crate::slh::{self, SlhModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Slice propagator `(1 + X + ½X²) Γ(S)` with
    /// `X = √dt Σ(L_i a_i* − L_i* a_i) − iH dt`. Not norm preserving.
    EulerIto,
    /// `e^{−iH dt/2} e^{√dt Σ(L_i a_i* − L_i* a_i)} Γ(S) e^{−iH dt/2}`. Unitary.
    ExponentialMidpoint,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceConfig {
    pub dt: f64,
    /// Fock levels kept per channel in each slice.
    pub d_noise: usize,
    pub scheme: Scheme,
    /// Largest tolerated truncation loss: the accumulated weight that slice
    /// interactions would put into the first discarded Fock level.
    #[serde(default = "default_deficit")]
    pub max_norm_deficit: f64,
    /// Record the norm deficit after every step.
    #[serde(default)]
    pub diagnostics: bool,
}

fn default_deficit() -> f64 {
    1e-2
}

/// Target for `(‖L‖² + ‖K‖ + |α|²)·dt` when choosing a default step.
pub const DEFAULT_STEP_BUDGET: f64 = 0.05;

impl SliceConfig {
    pub fn new(dt: f64, d_noise: usize, scheme: Scheme) -> Result<Self> {
        let cfg = SliceConfig {
            dt,
            d_noise,
            scheme,
            max_norm_deficit: default_deficit(),
            diagnostics: false,
        };
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidSpec(format!("slice step must be positive, got {}", self.dt)));
        }
        if self.d_noise < 2 {
            return Err(Error::InvalidSpec(format!(
                "slice truncation must keep at least 2 levels, got {}",
                self.d_noise
            )));
        }
        Ok(())
    }

    /// Step `t/N` with the smallest `N` such that
    /// `(‖L‖² + ‖K‖ + |α|²)·dt ≤ 0.05` for every model and segment, and every
    /// segment boundary falls on the lattice when `N` is a multiple of the
    /// segment count of an equal-length partition.
    pub fn default_for(models: &[&SlhModel], psi: &ExponentialState, t: f64) -> Self {
        let max_alpha = psi
            .segments()
            .iter()
            .map(|s| block::amplitude_norm_sq(&s.alpha))
            .fold(0.0, f64::max);
        let mut rate: f64 = 0.0;
        for g in models {
            let l2 = block::column_norm(g.l()).powi(2);
            let k = slh::damping_unchecked(g).k.op_norm();
            rate = rate.max(l2 + k + max_alpha);
        }
        let mut steps = ((rate * t / DEFAULT_STEP_BUDGET).ceil() as usize).max(1);
        let m = psi.segments().len();
        steps = steps.div_ceil(m) * m;
        SliceConfig {
            dt: t / steps as f64,
            d_noise: 3,
            scheme: Scheme::ExponentialMidpoint,
            max_norm_deficit: default_deficit(),
            diagnostics: false,
        }
    }

    pub fn with_dt(&self, dt: f64) -> Self {
        SliceConfig { dt, ..self.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StepDiagnostic {
    pub step: usize,
    pub time: f64,
    pub norm_deficit: f64,
}

/// Result of a single-model run: the system operator
/// `ρ = Tr_slices |Φ⟩⟨Φ|` for `Φ` the evolved normalized-drive state.
#[derive(Clone, Debug)]
pub struct SliceState {
    pub rho: Operator,
    /// `‖Φ‖²`, with the drive normalized to unit norm.
    pub norm_sq: f64,
    /// Accumulated weight that would have reached the first discarded slice
    /// level, relative to `‖v‖²`.
    pub norm_deficit: f64,
    pub diagnostics: Vec<StepDiagnostic>,
}

#[derive(Clone, Debug)]
pub struct PairRun {
    /// `⟨Ψ, U_a(t)* U_b(t) Ψ⟩` including the factor `e^{‖f‖²}`.
    pub overlap: C64,
    pub norm_sq_a: f64,
    pub norm_sq_b: f64,
    /// `‖(U_a(t) − U_b(t))Ψ‖²`.
    pub distance_sq: f64,
    pub diagnostics: Vec<StepDiagnostic>,
}

/// Truncated bosonic ladder operators for `n` channels of `m` levels each,
/// channel 0 most significant.
struct SliceSpace {
    n: usize,
    m: usize,
    dim: usize,
    a: Vec<Operator>,
}

impl SliceSpace {
    fn new(n: usize, m: usize) -> Self {
        let dim = m.pow(n as u32);
        let mut single = DMatrix::<C64>::zeros(m, m);
        for k in 1..m {
            single[(k - 1, k)] = c((k as f64).sqrt());
        }
        let single = Operator::new(single).expect("square");
        let a = (0..n)
            .map(|i| {
                let mut op = Operator::identity(1);
                for j in 0..n {
                    let f = if i == j { single.clone() } else { Operator::identity(m) };
                    op = op.kron(&f);
                }
                op
            })
            .collect();
        SliceSpace { n, m, dim, a }
    }

    /// Product of coherent states `|β_i⟩`, truncated and renormalized.
    fn coherent(&self, beta: &[C64]) -> Vec<C64> {
        let per: Vec<Vec<C64>> = beta
            .iter()
            .map(|&b| {
                let mut out = Vec::with_capacity(self.m);
                let mut coeff = c((-0.5 * b.norm_sqr()).exp());
                for k in 0..self.m {
                    if k > 0 {
                        coeff = coeff * b / c((k as f64).sqrt());
                    }
                    out.push(coeff);
                }
                let norm = out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                out.into_iter().map(|z| z / norm).collect::<Vec<_>>()
            })
            .collect();
        (0..self.dim)
            .map(|idx| {
                let mut rest = idx;
                let mut amp = c(1.0);
                for i in (0..self.n).rev() {
                    amp *= per[i][rest % self.m];
                    rest /= self.m;
                }
                amp
            })
            .collect()
    }

    /// Whether slice basis state `idx` has some channel in the highest level.
    fn is_top(&self, idx: usize) -> bool {
        let mut rest = idx;
        for _ in 0..self.n {
            if rest % self.m == self.m - 1 {
                return true;
            }
            rest /= self.m;
        }
        false
    }
}

/// Principal logarithm of a unitary via its (diagonal) Schur form.
fn unitary_log(u: &Operator) -> Operator {
    let (q, t) = Schur::new(u.matrix().clone()).unpack();
    let logs = DMatrix::from_diagonal(&t.diagonal().map(|z| z.ln()));
    let m = &q * logs * q.adjoint();
    Operator::new(m).expect("square").im_part().scale(I)
}

/// Kraus-like slice maps `M_k = ⟨k|V|coh⟩` for one segment.
fn slice_maps(g: &SlhModel, space: &SliceSpace, alpha: &[C64], cfg: &SliceConfig) -> Vec<Operator> {
    let d = g.system_dim();
    let id_slice = Operator::identity(space.dim);
    let sqrt_dt = cfg.dt.sqrt();

    let mut exchange = Operator::zeros(d * space.dim);
    for (li, ai) in g.l().iter().zip(&space.a) {
        exchange += &li.kron(&ai.adjoint()).scale_re(sqrt_dt);
        exchange = &exchange - &li.adjoint().kron(ai).scale_re(sqrt_dt);
    }

    let log_s = BlockMatrix::from_assembled(&unitary_log(&g.s().assemble()), g.channels()).expect("shape");
    let mut number = Operator::zeros(d * space.dim);
    for i in 0..space.n {
        for j in 0..space.n {
            let hop = &space.a[i].adjoint() * &space.a[j];
            number += &log_s.block(i, j).kron(&hop);
        }
    }
    let gamma = number.exp();

    let v = match cfg.scheme {
        Scheme::ExponentialMidpoint => {
            let half = g.h().scale(c(-0.5 * cfg.dt) * I).exp().kron(&id_slice);
            &(&(&half * &exchange.exp()) * &gamma) * &half
        }
        Scheme::EulerIto => {
            let x = &exchange - &g.h().scale(c(cfg.dt) * I).kron(&id_slice);
            let id = Operator::identity(d * space.dim);
            let poly = &(&id + &x) + &(&x * &x).scale_re(0.5);
            &poly * &gamma
        }
    };

    let beta: Vec<C64> = alpha.iter().map(|&a| a * sqrt_dt).collect();
    let coh = space.coherent(&beta);
    let vm = v.matrix();
    (0..space.dim)
        .map(|k| {
            let m = DMatrix::from_fn(d, d, |i, j| {
                (0..space.dim).map(|l| vm[(i * space.dim + k, j * space.dim + l)] * coh[l]).sum()
            });
            Operator::new(m).expect("square")
        })
        .collect()
}

fn steps_for(psi: &ExponentialState, t: f64, cfg: &SliceConfig) -> Result<Vec<(usize, usize)>> {
    let end = psi.horizon();
    if (end - t).abs() > 1e-12 * t.abs().max(1.0) {
        return Err(Error::InvalidState(format!("segments end at {end} but the horizon is {t}")));
    }
    let mut out = Vec::new();
    let mut prev = 0usize;
    for (j, seg) in psi.segments().iter().enumerate() {
        let x = seg.t_end / cfg.dt;
        let steps = x.round();
        if (x - steps).abs() > 1e-9 * x.max(1.0) {
            return Err(Error::InvalidSpec(format!(
                "segment {j} ending at {} is not aligned with the slice step {}",
                seg.t_end, cfg.dt
            )));
        }
        let steps = steps as usize;
        if steps <= prev {
            return Err(Error::InvalidSpec(format!("segment {j} is shorter than one slice")));
        }
        out.push((j, steps - prev));
        prev = steps;
    }
    Ok(out)
}

fn check_inputs(models: &[&SlhModel], psi: &ExponentialState, cfg: &SliceConfig) -> Result<()> {
    cfg.check()?;
    for g in models {
        let v = slh::validate(g, DEFAULT_TOL);
        if !v.is_empty() {
            return Err(Error::InvalidModel(v));
        }
        if g.system_dim() != psi.system_dim() {
            return Err(Error::dims("state system dimension", g.system_dim(), psi.system_dim()));
        }
        if g.channels() != psi.channels() {
            return Err(Error::dims("state channel count", g.channels(), psi.channels()));
        }
    }
    if models.len() == 2 && models[0].channels() != models[1].channels() {
        return Err(Error::dims("model pair channels", models[0].channels(), models[1].channels()));
    }
    Ok(())
}

fn transfer(rho: &Operator, ma: &[Operator], mb: &[Operator]) -> Operator {
    let mut out = Operator::zeros(rho.dim());
    for (a, b) in ma.iter().zip(mb) {
        out += &(&(b * rho) * &a.adjoint());
    }
    out
}

/// Maps of one slice interaction on a lattice with one extra Fock level,
/// restricted to outcomes that occupy the extra level.
fn leak_maps(g: &SlhModel, alpha: &[C64], cfg: &SliceConfig) -> Vec<Operator> {
    let wide = SliceSpace::new(g.channels(), cfg.d_noise + 1);
    slice_maps(g, &wide, alpha, cfg)
        .into_iter()
        .enumerate()
        .filter(|(k, _)| wide.is_top(*k))
        .map(|(_, m)| m)
        .collect()
}

fn weight(rho: &Operator, maps: &[Operator]) -> f64 {
    maps.iter().map(|m| (&(m * rho) * &m.adjoint()).trace().re).sum()
}

/// Evolve `Ψ` under `G` on the slice lattice, tracing out each slice after
/// it interacts.
pub fn simulate(g: &SlhModel, psi: &ExponentialState, t: f64, cfg: &SliceConfig) -> Result<SliceState> {
    check_inputs(&[g], psi, cfg)?;
    let plan = steps_for(psi, t, cfg)?;
    let space = SliceSpace::new(g.channels(), cfg.d_noise);
    let v = psi.v();
    let v_norm = v.norm_squared();
    let mut rho = Operator::new(v * v.adjoint()).expect("square");
    let mut diagnostics = Vec::new();
    let mut deficit = 0.0;
    let mut step = 0;
    for (j, count) in plan {
        let alpha = &psi.segments()[j].alpha;
        let maps = slice_maps(g, &space, alpha, cfg);
        let leak = leak_maps(g, alpha, cfg);
        for _ in 0..count {
            deficit += weight(&rho, &leak) / v_norm;
            rho = transfer(&rho, &maps, &maps);
            step += 1;
            if cfg.diagnostics {
                diagnostics.push(StepDiagnostic {
                    step,
                    time: step as f64 * cfg.dt,
                    norm_deficit: deficit,
                });
            }
            if deficit > cfg.max_norm_deficit {
                return Err(Error::TruncationExceeded {
                    deficit,
                    bound: cfg.max_norm_deficit,
                });
            }
        }
    }
    let norm_sq = rho.trace().re;
    Ok(SliceState {
        rho,
        norm_sq,
        norm_deficit: deficit,
        diagnostics,
    })
}

/// Run both models on a shared slice lattice.
pub fn simulate_pair(
    ga: &SlhModel,
    gb: &SlhModel,
    psi: &ExponentialState,
    t: f64,
    cfg: &SliceConfig,
) -> Result<PairRun> {
    check_inputs(&[ga, gb], psi, cfg)?;
    let plan = steps_for(psi, t, cfg)?;
    let space = SliceSpace::new(ga.channels(), cfg.d_noise);
    let v = psi.v();
    let v_norm = v.norm_squared();
    let rho0 = Operator::new(v * v.adjoint()).expect("square");
    let (mut raa, mut rbb, mut rab) = (rho0.clone(), rho0.clone(), rho0);
    let mut diagnostics = Vec::new();
    let mut deficit = 0.0;
    let mut step = 0;
    for (j, count) in plan {
        let alpha = &psi.segments()[j].alpha;
        let ma = slice_maps(ga, &space, alpha, cfg);
        let mb = slice_maps(gb, &space, alpha, cfg);
        let (la, lb) = (leak_maps(ga, alpha, cfg), leak_maps(gb, alpha, cfg));
        for _ in 0..count {
            deficit += weight(&raa, &la).max(weight(&rbb, &lb)) / v_norm;
            raa = transfer(&raa, &ma, &ma);
            rbb = transfer(&rbb, &mb, &mb);
            rab = transfer(&rab, &ma, &mb);
            step += 1;
            if cfg.diagnostics {
                diagnostics.push(StepDiagnostic {
                    step,
                    time: step as f64 * cfg.dt,
                    norm_deficit: deficit,
                });
            }
            if deficit > cfg.max_norm_deficit {
                return Err(Error::TruncationExceeded {
                    deficit,
                    bound: cfg.max_norm_deficit,
                });
            }
        }
    }
    let scale = psi.drive_norm_sq().exp();
    let (na, nb, ov) = (raa.trace().re, rbb.trace().re, rab.trace());
    Ok(PairRun {
        overlap: ov * scale,
        norm_sq_a: na * scale,
        norm_sq_b: nb * scale,
        distance_sq: (na + nb - 2.0 * ov.re) * scale,
        diagnostics,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleEstimate {
    pub value: f64,
    pub error_bar: f64,
    /// `(dt, ‖(U_a − U_b)Ψ‖²)` for each refinement level.
    pub levels: Vec<(f64, f64)>,
}

/// Distance from three runs at `dt`, `dt/2`, `dt/4`. The squared distance
/// is Richardson-extrapolated assuming first-order convergence; the error
/// bar is the change between the two extrapolants, mapped through `√`.
pub fn oracle_distance(
    ga: &SlhModel,
    gb: &SlhModel,
    psi: &ExponentialState,
    t: f64,
    cfg: &SliceConfig,
) -> Result<OracleEstimate> {
    let dts = [cfg.dt, cfg.dt / 2.0, cfg.dt / 4.0];
    let runs: Vec<Result<f64>> = dts
        .par_iter()
        .map(|&dt| simulate_pair(ga, gb, psi, t, &cfg.with_dt(dt)).map(|r| r.distance_sq))
        .collect();
    let r: Vec<f64> = runs.into_iter().collect::<Result<_>>()?;
    let r1 = 2.0 * r[1] - r[0];
    let r2 = 2.0 * r[2] - r[1];
    let scale = psi.norm_sq();
    let err = (r2 - r1).abs() + 1e-12 * scale;
    let value = r2.max(0.0).sqrt();
    let hi = (r2 + err).max(0.0).sqrt();
    let lo = (r2 - err).max(0.0).sqrt();
    Ok(OracleEstimate {
        value,
        error_bar: (hi - value).max(value - lo),
        levels: dts.iter().copied().zip(r).collect(),
    })
}
