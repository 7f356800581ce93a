//! Vacuum transfer semigroups and exact overlaps for exponential states.
//!
//! For two models `a` and `b` driven by the same noise, the vacuum
//! expectation of `U_a(t)* (X ⊗ I) U_b(t)` is a norm-continuous semigroup on
//! system operators with generator
//!
//! ```text
//! X ↦ K_a* X + X K_b + Σ_i L_{a,i}* X L_{b,i}.
//! ```
//!
//! Overlaps against `v ⊗ exp(f)` with piecewise-constant `f` reduce to a
//! nested composition of such semigroups, one per segment, built from the
//! displaced models.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::block;
use crate::error::{Error, Result};
use crate::operator::{c, expm, Operator, Superoperator, C64, DEFAULT_TOL, EXPM_TOL, I};
use crate::slh::{self, DampingForm, SlhModel};

/// One piece of a simple drive function: amplitude `alpha` on
/// `[previous t_end, t_end)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub t_end: f64,
    #[serde(with = "crate::operator::cvec")]
    pub alpha: Vec<C64>,
}

/// `v ⊗ exp(f)` with `f` piecewise constant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentialState {
    #[serde(serialize_with = "serialize_vector")]
    v: DVector<C64>,
    segments: Vec<Segment>,
}

fn serialize_vector<S: serde::Serializer>(v: &DVector<C64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::operator::cvec::serialize(v.as_slice(), s)
}

#[derive(Deserialize)]
struct StateDocument {
    #[serde(with = "crate::operator::cvec")]
    v: Vec<C64>,
    segments: Vec<Segment>,
}

impl<'de> Deserialize<'de> for ExponentialState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = StateDocument::deserialize(d)?;
        ExponentialState::new(DVector::from_vec(doc.v), doc.segments).map_err(serde::de::Error::custom)
    }
}

impl ExponentialState {
    pub fn new(v: DVector<C64>, segments: Vec<Segment>) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::InvalidState("system vector is empty".into()));
        }
        if segments.is_empty() {
            return Err(Error::InvalidState("at least one segment is required".into()));
        }
        let n = segments[0].alpha.len();
        let mut prev = 0.0;
        for (j, seg) in segments.iter().enumerate() {
            if !(seg.t_end.is_finite() && seg.t_end > prev) {
                return Err(Error::InvalidState(format!(
                    "segment {j} ends at {} which does not follow {prev}",
                    seg.t_end
                )));
            }
            if seg.alpha.len() != n {
                return Err(Error::dims("segment amplitude length", n, seg.alpha.len()));
            }
            if seg.alpha.iter().any(|z| !z.is_finite()) {
                return Err(Error::InvalidState(format!("segment {j} has a non-finite amplitude")));
            }
            prev = seg.t_end;
        }
        Ok(ExponentialState { v, segments })
    }

    /// Uniform superposition `v = (1,…,1)/√d` and a single segment on `[0, t]`
    /// with `α = (1,…,1)/√n`.
    pub fn uniform(d: usize, n: usize, t: f64) -> Result<Self> {
        let v = DVector::from_element(d, c(1.0 / (d as f64).sqrt()));
        let alpha = vec![c(1.0 / (n as f64).sqrt()); n];
        Self::new(v, vec![Segment { t_end: t, alpha }])
    }

    /// Same drive, different system vector.
    pub fn with_vector(&self, v: DVector<C64>) -> Result<Self> {
        Self::new(v, self.segments.clone())
    }

    pub fn v(&self) -> &DVector<C64> {
        &self.v
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn system_dim(&self) -> usize {
        self.v.len()
    }

    pub fn channels(&self) -> usize {
        self.segments[0].alpha.len()
    }

    pub fn horizon(&self) -> f64 {
        self.segments.last().expect("nonempty").t_end
    }

    /// `(duration, α)` per segment.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, &[C64])> + '_ {
        let starts = std::iter::once(0.0).chain(self.segments.iter().map(|s| s.t_end));
        starts
            .zip(&self.segments)
            .map(|(t0, s)| (s.t_end - t0, s.alpha.as_slice()))
    }

    /// `‖f‖² = Σ_j |α_j|² (t_j − t_{j−1})`.
    pub fn drive_norm_sq(&self) -> f64 {
        self.pieces()
            .map(|(dt, a)| block::amplitude_norm_sq(a) * dt)
            .sum()
    }

    /// `‖v‖² e^{‖f‖²}`.
    pub fn norm_sq(&self) -> f64 {
        self.v.norm_squared() * self.drive_norm_sq().exp()
    }

    pub fn check_against(&self, n: usize, d: usize, t: f64) -> Result<()> {
        if self.system_dim() != d {
            return Err(Error::dims("state system dimension", d, self.system_dim()));
        }
        if self.channels() != n {
            return Err(Error::dims("state channel count", n, self.channels()));
        }
        let end = self.horizon();
        if (end - t).abs() > 1e-12 * t.abs().max(1.0) {
            return Err(Error::InvalidState(format!(
                "segments end at {end} but the horizon is {t}"
            )));
        }
        Ok(())
    }
}

/// Generator of `X ↦ E_vac[U_a(t)* X U_b(t)]`.
#[derive(Clone, Debug)]
pub struct TransferGenerator {
    superop: Superoperator,
    left: DampingForm,
    right: DampingForm,
}

impl TransferGenerator {
    pub fn superop(&self) -> &Superoperator {
        &self.superop
    }

    pub fn left_model(&self) -> &DampingForm {
        &self.left
    }

    pub fn right_model(&self) -> &DampingForm {
        &self.right
    }

    pub fn apply(&self, x: &Operator) -> Result<Operator> {
        self.superop.apply(x)
    }

    /// `e^{s𝓛}(X)`.
    pub fn evolve(&self, x: &Operator, s: f64) -> Result<Operator> {
        evolve(self, x, s)
    }
}

/// `X ↦ K_a* X + X K_b + Σ_i L_{a,i}* X L_{b,i}`; `ga` is the adjoined model.
pub fn transfer_generator(ga: &DampingForm, gb: &DampingForm) -> Result<TransferGenerator> {
    if ga.channels() != gb.channels() {
        return Err(Error::dims("transfer generator channels", ga.channels(), gb.channels()));
    }
    if ga.system_dim() != gb.system_dim() {
        return Err(Error::dims("transfer generator system dimension", ga.system_dim(), gb.system_dim()));
    }
    let mut superop = &Superoperator::left(&ga.k.adjoint()) + &Superoperator::right(&gb.k);
    for (la, lb) in ga.l.iter().zip(&gb.l) {
        superop = &superop + &Superoperator::sandwich(&la.adjoint(), lb)?;
    }
    Ok(TransferGenerator {
        superop,
        left: ga.clone(),
        right: gb.clone(),
    })
}

/// The action on `I` of the transfer generator between `G ◁ δG` displaced by
/// `α` (adjoined) and `G` displaced by `α`:
///
/// ```text
/// δK* − α* δS* δL + (δL)* α + α* (δS* − 1) α,   δK = −iδH − ½ (δL)* δL.
/// ```
pub fn delta_generator_on_identity(g: &SlhModel, dg: &SlhModel, alpha: &[C64]) -> Result<Operator> {
    if g.channels() != dg.channels() || alpha.len() != g.channels() {
        return Err(Error::dims("δ-generator channels", g.channels(), dg.channels().min(alpha.len())));
    }
    if g.system_dim() != dg.system_dim() {
        return Err(Error::dims("δ-generator system dimension", g.system_dim(), dg.system_dim()));
    }
    let d = g.system_dim();
    let dl = dg.l();
    let a = block::from_amplitudes(alpha, d);
    let ds_adj = dg.s().adjoint();
    let dk = &dg.h().scale(-I) - &block::inner(dl, dl).scale_re(0.5);
    let mut out = dk.adjoint();
    out = &out - &block::inner(&a, &ds_adj.apply(dl));
    out += &block::inner(dl, &a);
    out += &block::inner(&a, &ds_adj.minus_identity().apply(&a));
    Ok(out)
}

/// `e^{s𝓛}(X)` via one matrix exponential of the `d² × d²` generator.
pub fn evolve(t: &TransferGenerator, x: &Operator, s: f64) -> Result<Operator> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::InvalidSpec(format!("evolution time must be finite and nonnegative, got {s}")));
    }
    t.superop.exp(s).apply(x)
}

fn require_pair(ga: &SlhModel, gb: &SlhModel) -> Result<()> {
    for g in [ga, gb] {
        let v = slh::validate(g, DEFAULT_TOL);
        if !v.is_empty() {
            return Err(Error::InvalidModel(v));
        }
    }
    if ga.channels() != gb.channels() {
        return Err(Error::dims("model pair channels", ga.channels(), gb.channels()));
    }
    if ga.system_dim() != gb.system_dim() {
        return Err(Error::dims("model pair system dimension", ga.system_dim(), gb.system_dim()));
    }
    Ok(())
}

/// Transfer generator applied to `I`, written without the large cancelling
/// terms: with `D = L_a − L_b` for the SLH forms of the two models,
/// `K_a* + K_b + Σ L_a* L_b = i(H_a − H_b) + ½ Σ (D* L_b − L_b* D) − ½ Σ D* D`.
fn generator_on_identity(ga: &SlhModel, gb: &SlhModel) -> Operator {
    let dl = block::sub(ga.l(), gb.l());
    let cross = block::inner(&dl, gb.l());
    let mut out = (ga.h() - gb.h()).scale(I);
    out += &(&cross - &cross.adjoint()).scale_re(0.5);
    out = &out - &block::inner(&dl, &dl).scale_re(0.5);
    out
}

fn vec_op(x: &Operator) -> DVector<C64> {
    DVector::from_column_slice(x.matrix().as_slice())
}

fn unvec(v: &DVector<C64>, d: usize) -> Operator {
    Operator::new(DMatrix::from_column_slice(d, d, v.as_slice())).expect("square")
}

/// `I − T_1 ∘ ⋯ ∘ T_m (I)` for the segment semigroups of the pair, evaluated
/// segment by segment as `Δ_j = −∫₀^{s_j} e^{u𝓛_j}(𝓛_j(I)) du + e^{s_j 𝓛_j}(Δ_{j+1})`.
fn deviation(ga: &SlhModel, gb: &SlhModel, psi: &ExponentialState) -> Result<Operator> {
    let d = ga.system_dim();
    let d2 = d * d;
    let mut delta = DVector::<C64>::zeros(d2);
    let pieces: Vec<(f64, &[C64])> = psi.pieces().collect();
    for &(s, alpha) in pieces.iter().rev() {
        let a = slh::displaced_model(ga, alpha)?;
        let b = slh::displaced_model(gb, alpha)?;
        let gen = transfer_generator(&slh::damping_unchecked(&a), &slh::damping_unchecked(&b))?;
        let on_id = vec_op(&generator_on_identity(&a, &b));
        // exp(s [[A, b], [0, 0]]) = [[e^{sA}, s φ₁(sA) b], [0, 1]]
        let mut aug = DMatrix::<C64>::zeros(d2 + 1, d2 + 1);
        aug.view_mut((0, 0), (d2, d2)).copy_from(gen.superop().matrix());
        aug.view_mut((0, d2), (d2, 1)).copy_from(&on_id);
        let e = expm(&(aug * c(s)), EXPM_TOL);
        let prop = e.view((0, 0), (d2, d2));
        let integral = e.view((0, d2), (d2, 1));
        delta = prop * &delta - integral;
    }
    Ok(unvec(&delta, d))
}

fn check_overlap_inputs(ga: &SlhModel, gb: &SlhModel, psi: &ExponentialState, t: f64) -> Result<()> {
    require_pair(ga, gb)?;
    psi.check_against(ga.channels(), ga.system_dim(), t)
}

/// `⟨Ψ, U_a(t)* U_b(t) Ψ⟩ = ⟨v, T₁ ∘ ⋯ ∘ T_m (I) v⟩ e^{‖f‖²}`, with the
/// earliest segment outermost and each `T_j` run for its segment duration.
pub fn overlap(ga: &SlhModel, gb: &SlhModel, psi: &ExponentialState, t: f64) -> Result<C64> {
    check_overlap_inputs(ga, gb, psi, t)?;
    let dev = deviation(ga, gb, psi)?;
    let v = psi.v();
    let inner = c(v.norm_squared()) - dev.expectation(v);
    Ok(inner * psi.drive_norm_sq().exp())
}

/// The same overlap evaluated by literally nesting the segment semigroups
/// applied to `I`.
pub fn nested_overlap(ga: &SlhModel, gb: &SlhModel, psi: &ExponentialState, t: f64) -> Result<C64> {
    check_overlap_inputs(ga, gb, psi, t)?;
    let d = ga.system_dim();
    let pieces: Vec<(f64, &[C64])> = psi.pieces().collect();
    let mut x = Operator::identity(d);
    for &(s, alpha) in pieces.iter().rev() {
        let gen = transfer_generator(&slh::displace(ga, alpha)?, &slh::displace(gb, alpha)?)?;
        x = evolve(&gen, &x, s)?;
    }
    Ok(x.expectation(psi.v()) * psi.drive_norm_sq().exp())
}

/// Relative size below which a negative squared distance is rounding noise.
pub const RADICAND_CLAMP: f64 = 1e-9;

/// `‖(U_a(t) − U_b(t)) Ψ‖ = √(2‖Ψ‖² − 2 Re⟨Ψ, U_a* U_b Ψ⟩)`.
///
/// The radicand is formed from `I − T₁∘⋯∘T_m(I)` directly, so it carries no
/// cancellation against `‖Ψ‖²`.
pub fn distance(ga: &SlhModel, gb: &SlhModel, psi: &ExponentialState, t: f64) -> Result<f64> {
    check_overlap_inputs(ga, gb, psi, t)?;
    let dev = deviation(ga, gb, psi)?;
    let radicand = 2.0 * psi.drive_norm_sq().exp() * dev.expectation(psi.v()).re;
    clamp_radicand(radicand, psi.norm_sq())
}

fn clamp_radicand(radicand: f64, scale: f64) -> Result<f64> {
    if radicand >= 0.0 {
        Ok(radicand.sqrt())
    } else if radicand >= -RADICAND_CLAMP * scale.max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::NumericalBreakdown(format!(
            "squared distance is negative ({radicand:.3e}); the transfer generator is not contractive"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::pauli::*;
    use crate::random;
    use crate::slh::{identity_model, series};

    fn amplitude_damping() -> SlhModel {
        SlhModel::coupled(vec![sigma_minus()], Operator::zeros(2)).unwrap()
    }

    #[test]
    fn generator_on_same_model_is_lindbladian() {
        let mut rng = random::rng(21);
        let g = random::model(&mut rng, 2, 3);
        let k = slh::damping(&g).unwrap();
        let t = transfer_generator(&k, &k).unwrap();
        let l = slh::lindblad_superoperator(&g);
        assert!(t.superop().max_abs_diff(&l) < 1e-12);
        assert!(t.apply(&Operator::identity(3)).unwrap().op_norm() < 1e-13);
    }

    #[test]
    fn delta_generator_closed_form_matches_transfer_generator() {
        let mut rng = random::rng(22);
        for _ in 0..10 {
            let g = random::model(&mut rng, 2, 2);
            let dg = random::perturbation(&mut rng, 2, 2, 0.5);
            let alpha = random::amplitudes(&mut rng, 2, 1.0);
            let gt = series(&g, &dg).unwrap();
            let t = transfer_generator(
                &slh::displace(&gt, &alpha).unwrap(),
                &slh::displace(&g, &alpha).unwrap(),
            )
            .unwrap();
            let via_generator = t.apply(&Operator::identity(2)).unwrap();
            let closed = delta_generator_on_identity(&g, &dg, &alpha).unwrap();
            assert!((via_generator - closed).op_norm() < 1e-10);
        }
    }

    #[test]
    fn delta_generator_specializations() {
        let mut rng = random::rng(23);
        let g = random::model(&mut rng, 1, 2);
        let e = identity_model(1, 2);
        let alpha = [C64::new(0.4, -0.2)];
        assert!(delta_generator_on_identity(&g, &e, &alpha).unwrap().op_norm() < 1e-15);
        let dh = random::hermitian(&mut rng, 2, 1.0);
        let dg = SlhModel::coupled(vec![Operator::zeros(2)], dh.clone()).unwrap();
        let out = delta_generator_on_identity(&g, &dg, &[c(0.0)]).unwrap();
        assert!((out - dh.scale(I)).op_norm() < 1e-15);
    }

    #[test]
    fn amplitude_damping_decay() {
        let k = slh::damping(&amplitude_damping()).unwrap();
        let t = transfer_generator(&k, &k).unwrap();
        for s in [0.0, 0.5, 1.0, 2.0] {
            let out = t.evolve(&excited(), s).unwrap();
            assert!((out - excited().scale_re((-s).exp())).op_norm() < 1e-13);
        }
        assert!(t.evolve(&excited(), -1.0).is_err());
    }

    #[test]
    fn overlap_of_model_with_itself_is_norm() {
        let mut rng = random::rng(24);
        let g = random::model(&mut rng, 2, 2);
        let psi = random::state(&mut rng, 2, 2, 1.0, 3);
        let ov = overlap(&g, &g, &psi, 1.0).unwrap();
        assert!((ov - c(psi.norm_sq())).norm() < 1e-12 * psi.norm_sq());
        assert_eq!(distance(&g, &g, &psi, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn zero_coupling_closed_form() {
        let mut rng = random::rng(25);
        let ha = random::hermitian(&mut rng, 2, 1.0);
        let hb = random::hermitian(&mut rng, 2, 1.0);
        let ga = SlhModel::coupled(vec![Operator::zeros(2)], ha.clone()).unwrap();
        let gb = SlhModel::coupled(vec![Operator::zeros(2)], hb.clone()).unwrap();
        let v = random::unit_vector(&mut rng, 2);
        let psi = ExponentialState::new(
            v.clone(),
            vec![Segment { t_end: 0.7, alpha: vec![c(0.0)] }],
        )
        .unwrap();
        let expected = (&ha.scale(c(0.7) * I).exp() * &hb.scale(c(-0.7) * I).exp()).expectation(&v);
        assert!((overlap(&ga, &gb, &psi, 0.7).unwrap() - expected).norm() < 1e-13);
        let d = distance(&ga, &gb, &psi, 0.7).unwrap();
        assert!((d * d - (2.0 - 2.0 * expected.re)).abs() < 1e-13);
    }

    #[test]
    fn deviation_route_matches_nested_route() {
        let mut rng = random::rng(26);
        for _ in 0..5 {
            let ga = random::model(&mut rng, 1, 2);
            let gb = random::model(&mut rng, 1, 2);
            let psi = random::state(&mut rng, 2, 1, 0.8, 2);
            let a = overlap(&ga, &gb, &psi, 0.8).unwrap();
            let b = nested_overlap(&ga, &gb, &psi, 0.8).unwrap();
            assert!((a - b).norm() < 1e-12 * psi.norm_sq().max(1.0));
        }
    }

    #[test]
    fn distance_bounded_by_twice_norm() {
        let mut rng = random::rng(27);
        for _ in 0..5 {
            let ga = random::model(&mut rng, 2, 2);
            let gb = random::model(&mut rng, 2, 2);
            let psi = random::state(&mut rng, 2, 2, 1.0, 2);
            let dist = distance(&ga, &gb, &psi, 1.0).unwrap();
            assert!(dist <= 2.0 * psi.norm_sq().sqrt() + 1e-12);
        }
    }

    #[test]
    fn horizon_must_match_segments() {
        let psi = ExponentialState::uniform(2, 1, 1.0).unwrap();
        let g = amplitude_damping();
        assert!(matches!(overlap(&g, &g, &psi, 2.0), Err(Error::InvalidState(_))));
        let psi3 = ExponentialState::uniform(3, 1, 1.0).unwrap();
        assert!(matches!(overlap(&g, &g, &psi3, 1.0), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn state_validation() {
        let v = DVector::from_element(2, c(1.0));
        let bad = vec![
            Segment { t_end: 0.5, alpha: vec![c(0.0)] },
            Segment { t_end: 0.5, alpha: vec![c(0.0)] },
        ];
        assert!(ExponentialState::new(v.clone(), bad).is_err());
        assert!(ExponentialState::new(v.clone(), vec![]).is_err());
        let ragged = vec![
            Segment { t_end: 0.5, alpha: vec![c(0.0)] },
            Segment { t_end: 1.0, alpha: vec![c(0.0), c(1.0)] },
        ];
        assert!(ExponentialState::new(v, ragged).is_err());
    }

    #[test]
    fn state_norm_and_json() {
        let psi = ExponentialState::new(
            DVector::from_vec(vec![c(1.0), c(1.0)]),
            vec![
                Segment { t_end: 0.5, alpha: vec![c(1.0)] },
                Segment { t_end: 1.5, alpha: vec![C64::new(0.0, 2.0)] },
            ],
        )
        .unwrap();
        assert!((psi.norm_sq() - 2.0 * (0.5f64 + 4.0).exp()).abs() < 1e-12);
        let text = serde_json::to_string(&psi).unwrap();
        let back: ExponentialState = serde_json::from_str(&text).unwrap();
        assert_eq!(back, psi);
        let bad = r#"{"v":[[1,0]],"segments":[{"t_end":-1,"alpha":[[0,0]]}]}"#;
        assert!(serde_json::from_str::<ExponentialState>(bad).is_err());
    }
}
