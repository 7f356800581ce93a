//! SLH models `(S, L, H)`, their damping form `[S, L, K]`, and the series
//! product algebra built on them.
//!
//! `Im{A}` on operators is `(A − A*)/2i`, so every Hamiltonian produced here
//! is Hermitian by construction.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::block::{self, BlockMatrix};
use crate::error::{Error, Result};
use crate::operator::{c, Operator, Superoperator, C64, DEFAULT_TOL, I};

/// A structural defect reported by [`validate`].
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `‖SS* − I‖` or `‖S*S − I‖` exceeds tolerance; `block` is the
    /// `(row, col)` block carrying the largest part of the residual.
    NonUnitaryScattering { block: (usize, usize), residual: f64 },
    NonHermitianHamiltonian { residual: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonUnitaryScattering { block, residual } => write!(
                f,
                "scattering matrix not unitary (residual {residual:.3e}, worst block S[{}][{}])",
                block.0, block.1
            ),
            Violation::NonHermitianHamiltonian { residual } => {
                write!(f, "Hamiltonian not Hermitian (residual {residual:.3e})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlhModel {
    s: BlockMatrix,
    l: Vec<Operator>,
    h: Operator,
}

impl SlhModel {
    /// Structural constructor: checks shapes only. Use [`validate`] or
    /// [`SlhModel::validated`] for unitarity and Hermiticity.
    pub fn new(s: BlockMatrix, l: Vec<Operator>, h: Operator) -> Result<Self> {
        let (n, d) = (s.channels(), s.system_dim());
        if l.len() != n {
            return Err(Error::dims("coupling vector length", n, l.len()));
        }
        for li in &l {
            li.check_dim(d, "coupling operator")?;
        }
        h.check_dim(d, "Hamiltonian")?;
        Ok(SlhModel { s, l, h })
    }

    pub fn from_parts(s: Vec<Vec<Operator>>, l: Vec<Operator>, h: Operator) -> Result<Self> {
        Self::new(BlockMatrix::from_blocks(s)?, l, h)
    }

    /// `(I, L, H)`.
    pub fn coupled(l: Vec<Operator>, h: Operator) -> Result<Self> {
        let d = h.dim();
        Self::new(BlockMatrix::identity(l.len(), d), l, h)
    }

    pub fn validated(self, eps: f64) -> Result<Self> {
        let v = validate(&self, eps);
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidModel(v))
        }
    }

    pub fn channels(&self) -> usize {
        self.s.channels()
    }

    pub fn system_dim(&self) -> usize {
        self.s.system_dim()
    }

    pub fn s(&self) -> &BlockMatrix {
        &self.s
    }

    pub fn l(&self) -> &[Operator] {
        &self.l
    }

    pub fn h(&self) -> &Operator {
        &self.h
    }

    fn check_shape(&self, other: &SlhModel, context: &'static str) -> Result<()> {
        if self.channels() != other.channels() {
            return Err(Error::dims(context, self.channels(), other.channels()));
        }
        if self.system_dim() != other.system_dim() {
            return Err(Error::dims(context, self.system_dim(), other.system_dim()));
        }
        Ok(())
    }

    fn require_valid(&self) -> Result<()> {
        let v = validate(self, DEFAULT_TOL);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidModel(v))
        }
    }

    /// `‖S − I‖ + ‖L‖ + ‖H‖`: how far the model is from the identity `E`.
    pub fn distance_to_identity(&self) -> f64 {
        self.s.distance_to_identity() + block::column_norm(&self.l) + self.h.op_norm()
    }

    /// Largest of the three component-wise spectral-norm differences.
    pub fn max_component_diff(&self, other: &SlhModel) -> f64 {
        let ds = (self.s.assemble() - other.s.assemble()).op_norm();
        let dl = block::column_norm(&block::sub(&self.l, &other.l));
        let dh = (&self.h - &other.h).op_norm();
        ds.max(dl).max(dh)
    }
}

/// Empty iff `S` is unitary and `H` Hermitian within `eps`. The Hermiticity
/// check is relative to `max(1, ‖H‖)`.
pub fn validate(g: &SlhModel, eps: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    let s = g.s.assemble();
    let unit = s.unitarity_residual();
    if unit > eps {
        let (n, d) = (g.channels(), g.system_dim());
        let id = Operator::identity(n * d);
        let r1 = &(&s * &s.adjoint()) - &id;
        let r2 = &(&s.adjoint() * &s) - &id;
        let mut worst = ((0, 0), -1.0);
        for r in [r1, r2] {
            let blocks = BlockMatrix::from_assembled(&r, n).expect("shape");
            for i in 0..n {
                for j in 0..n {
                    let b = blocks.block(i, j).op_norm();
                    if b > worst.1 {
                        worst = ((i, j), b);
                    }
                }
            }
        }
        out.push(Violation::NonUnitaryScattering {
            block: worst.0,
            residual: unit,
        });
    }
    let herm = g.h.hermiticity_residual();
    if herm > eps * g.h.op_norm().max(1.0) {
        out.push(Violation::NonHermitianHamiltonian { residual: herm });
    }
    out
}

/// `E = (I, 0, 0)`.
pub fn identity_model(n: usize, d: usize) -> SlhModel {
    SlhModel {
        s: BlockMatrix::identity(n, d),
        l: block::zeros(n, d),
        h: Operator::zeros(d),
    }
}

/// The damping-operator representation `[S, L, K]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DampingForm {
    pub s: BlockMatrix,
    pub l: Vec<Operator>,
    pub k: Operator,
}

impl DampingForm {
    pub fn channels(&self) -> usize {
        self.s.channels()
    }

    pub fn system_dim(&self) -> usize {
        self.s.system_dim()
    }

    /// `‖K + K* + Σ L_i* L_i‖`, zero for a form generating a unitary cocycle.
    pub fn unitarity_residual(&self) -> f64 {
        (&(&self.k + &self.k.adjoint()) + &block::inner(&self.l, &self.l)).op_norm()
    }

    /// Recover `H = i(K + ½ Σ L_i* L_i)` (Hermitian part).
    pub fn to_model(&self) -> Result<SlhModel> {
        let half = block::inner(&self.l, &self.l).scale_re(0.5);
        let h = (&self.k + &half).scale(I).re_part();
        SlhModel::new(self.s.clone(), self.l.clone(), h)
    }

    pub fn max_component_diff(&self, other: &DampingForm) -> f64 {
        let ds = (self.s.assemble() - other.s.assemble()).op_norm();
        let dl = block::column_norm(&block::sub(&self.l, &other.l));
        let dk = (&self.k - &other.k).op_norm();
        ds.max(dl).max(dk)
    }
}

/// `K = −½ Σ L_i* L_i − iH`.
pub fn damping(g: &SlhModel) -> Result<DampingForm> {
    g.require_valid()?;
    Ok(damping_unchecked(g))
}

pub(crate) fn damping_unchecked(g: &SlhModel) -> DampingForm {
    let k = &block::inner(&g.l, &g.l).scale_re(-0.5) - &g.h.scale(I);
    DampingForm {
        s: g.s.clone(),
        l: g.l.clone(),
        k,
    }
}

/// Series product `G2 ◁ G1 = (S₂S₁, L₂ + S₂L₁, H₁ + H₂ + Im{L₂* S₂ L₁})`.
pub fn series(g2: &SlhModel, g1: &SlhModel) -> Result<SlhModel> {
    g2.check_shape(g1, "series product")?;
    let out = series_unchecked(g2, g1);
    let v = validate(&out, DEFAULT_TOL);
    if !v.is_empty() {
        return Err(Error::NumericalBreakdown(format!(
            "series product result failed validation: {}",
            Error::InvalidModel(v)
        )));
    }
    Ok(out)
}

pub(crate) fn series_unchecked(g2: &SlhModel, g1: &SlhModel) -> SlhModel {
    let s2l1 = g2.s.apply(&g1.l);
    SlhModel {
        s: g2.s.mul(&g1.s),
        l: block::add(&g2.l, &s2l1),
        h: &(&g1.h + &g2.h) + &block::inner(&g2.l, &s2l1).im_part(),
    }
}

/// `[S₂,L₂,K₂] ◁ [S₁,L₁,K₁] = [S₂S₁, L₂ + S₂L₁, K₁ + K₂ − L₂* S₂ L₁]`.
pub fn series_damping(g2: &DampingForm, g1: &DampingForm) -> Result<DampingForm> {
    if g2.channels() != g1.channels() {
        return Err(Error::dims("damping series product", g2.channels(), g1.channels()));
    }
    if g2.system_dim() != g1.system_dim() {
        return Err(Error::dims("damping series product", g2.system_dim(), g1.system_dim()));
    }
    let s2l1 = g2.s.apply(&g1.l);
    Ok(DampingForm {
        s: g2.s.mul(&g1.s),
        l: block::add(&g2.l, &s2l1),
        k: &(&g1.k + &g2.k) - &block::inner(&g2.l, &s2l1),
    })
}

/// `G⁻¹ = (S*, −S*L, −H)`.
pub fn inverse(g: &SlhModel) -> Result<SlhModel> {
    g.require_valid()?;
    let s_adj = g.s.adjoint();
    let l = block::neg(&s_adj.apply(&g.l));
    Ok(SlhModel {
        s: s_adj,
        l,
        h: -&g.h,
    })
}

/// Right series perturbation `G ◁ δG`.
pub fn right_perturb(g: &SlhModel, dg: &SlhModel) -> Result<SlhModel> {
    series(g, dg)
}

/// Left series perturbation `δG ◁ G`.
pub fn left_perturb(g: &SlhModel, dg: &SlhModel) -> Result<SlhModel> {
    series(dg, g)
}

/// The `δG` with `G ◁ δG = G̃`, namely `G⁻¹ ◁ G̃`.
pub fn perturbation_between(g: &SlhModel, g_tilde: &SlhModel) -> Result<SlhModel> {
    g.check_shape(g_tilde, "perturbation_between")?;
    series(&inverse(g)?, g_tilde)
}

/// The displacement model `(I, α, 0)`; its damping form is `[I, α, −½|α|²]`.
pub fn displacement_model(alpha: &[C64], d: usize) -> SlhModel {
    let n = alpha.len();
    SlhModel {
        s: BlockMatrix::identity(n, d),
        l: block::from_amplitudes(alpha, d),
        h: Operator::zeros(d),
    }
}

fn check_amplitudes(g: &SlhModel, alpha: &[C64]) -> Result<()> {
    if alpha.len() != g.channels() {
        return Err(Error::dims("displacement amplitude", g.channels(), alpha.len()));
    }
    Ok(())
}

/// `G(α) = G ◁ (I, α, 0)` in damping form:
/// `[S, L + Sα, K − ½|α|² − L* S α]`.
pub fn displace(g: &SlhModel, alpha: &[C64]) -> Result<DampingForm> {
    g.require_valid()?;
    check_amplitudes(g, alpha)?;
    let d = g.system_dim();
    let s_alpha = g.s.apply(&block::from_amplitudes(alpha, d));
    let k = damping_unchecked(g).k;
    let shift = Operator::scalar(d, c(-0.5 * block::amplitude_norm_sq(alpha)));
    Ok(DampingForm {
        s: g.s.clone(),
        l: block::add(&g.l, &s_alpha),
        k: &(&k + &shift) - &block::inner(&g.l, &s_alpha),
    })
}

/// `G(α)` as an SLH model: `(S, L + Sα, H + Im{L* S α})`.
pub fn displaced_model(g: &SlhModel, alpha: &[C64]) -> Result<SlhModel> {
    check_amplitudes(g, alpha)?;
    let d = g.system_dim();
    let s_alpha = g.s.apply(&block::from_amplitudes(alpha, d));
    Ok(SlhModel {
        s: g.s.clone(),
        l: block::add(&g.l, &s_alpha),
        h: &g.h + &block::inner(&g.l, &s_alpha).im_part(),
    })
}

/// Heisenberg-picture Lindblad generator
/// `𝓛(X) = Σ L_i* X L_i + K* X + X K`.
pub fn lindblad(g: &SlhModel, x: &Operator) -> Result<Operator> {
    x.check_dim(g.system_dim(), "lindblad argument")?;
    let k = damping_unchecked(g).k;
    let mut out = &(&k.adjoint() * x) + &(x * &k);
    for li in &g.l {
        out += &(&(&li.adjoint() * x) * li);
    }
    Ok(out)
}

/// `𝓛` as a superoperator matrix.
pub fn lindblad_superoperator(g: &SlhModel) -> Superoperator {
    Superoperator::from_fn(g.system_dim(), |x| lindblad(g, x)).expect("dimensions agree")
}

/// Element `(R, β, e)` of the Euclidean group over `ℂⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeElement {
    pub r: DMatrix<C64>,
    pub beta: Vec<C64>,
    pub e: f64,
}

impl GaugeElement {
    pub fn new(r: DMatrix<C64>, beta: Vec<C64>, e: f64) -> Result<Self> {
        if r.nrows() != r.ncols() || r.nrows() != beta.len() {
            return Err(Error::dims("gauge element", beta.len(), r.nrows()));
        }
        let res = Operator::new(r.clone())?.unitarity_residual();
        if res > DEFAULT_TOL {
            return Err(Error::InvalidSpec(format!(
                "gauge rotation is not unitary (residual {res:.3e})"
            )));
        }
        Ok(GaugeElement { r, beta, e })
    }

    pub fn identity(n: usize) -> Self {
        GaugeElement {
            r: DMatrix::identity(n, n),
            beta: vec![c(0.0); n],
            e: 0.0,
        }
    }

    /// `(R ⊗ I_d, β ⊗ I_d, e·I_d)`.
    pub fn as_model(&self, d: usize) -> SlhModel {
        SlhModel {
            s: BlockMatrix::from_scalar(&self.r, d),
            l: block::from_amplitudes(&self.beta, d),
            h: Operator::scalar(d, c(self.e)),
        }
    }
}

/// `g ◁ G`; leaves the Lindblad generator unchanged.
pub fn gauge_transform(g: &GaugeElement, model: &SlhModel) -> Result<SlhModel> {
    if g.beta.len() != model.channels() {
        return Err(Error::dims("gauge transform", model.channels(), g.beta.len()));
    }
    series(&g.as_model(model.system_dim()), model)
}

fn require_trivial_scattering(dg: &SlhModel) -> Result<()> {
    let r = dg.s.distance_to_identity();
    if r > DEFAULT_TOL {
        return Err(Error::InvalidSpec(format!(
            "virtual work requires a perturbation without scattering (‖δS − I‖ = {r:.3e})"
        )));
    }
    Ok(())
}

/// `ΔH = H′ − H` for the left perturbation `G′ = δG ◁ G` with `δS = I`.
pub fn virtual_work(g: &SlhModel, dg: &SlhModel) -> Result<Operator> {
    g.check_shape(dg, "virtual work")?;
    require_trivial_scattering(dg)?;
    let g_prime = series(dg, g)?;
    Ok(g_prime.h() - g.h())
}

/// `δH + Im{(δL)* L}`.
pub fn virtual_work_formula(g: &SlhModel, dg: &SlhModel) -> Result<Operator> {
    g.check_shape(dg, "virtual work")?;
    require_trivial_scattering(dg)?;
    Ok(dg.h() + &block::inner(dg.l(), g.l()).im_part())
}

/// The operator that must vanish for a left perturbation `δG ◁ G` to
/// converge, evaluated term by term with `e^{iδΘ} := δS`:
///
/// ```text
/// δK + L*(δS − 1)L + (δL)* δS L − L* δL
///    + α* S* [(δS − 1)L + δL]
///    − [L*(δS − 1) + δL δS] S α
///    + α* S* (δS − 1) S α
/// ```
///
/// with `δK = −iδH − ½ (δL)* δL`. The row `δL δS` carries no adjoint.
pub fn left_residual(g: &SlhModel, dg: &SlhModel, alpha: &[C64]) -> Result<Operator> {
    g.check_shape(dg, "left residual")?;
    check_amplitudes(g, alpha)?;
    let d = g.system_dim();
    let l = &g.l;
    let dl = &dg.l;
    let ds = &dg.s;
    let ds_m1 = ds.minus_identity();
    let s_alpha = g.s.apply(&block::from_amplitudes(alpha, d));
    let alpha_ops = block::from_amplitudes(alpha, d);

    let dk = &dg.h.scale(-I) - &block::inner(dl, dl).scale_re(0.5);
    let mut out = dk;
    out += &block::inner(l, &ds_m1.apply(l));
    out += &block::inner(dl, &ds.apply(l));
    out = &out - &block::inner(l, dl);

    // α* S* [(δS − 1)L + δL]
    let bracket = block::add(&ds_m1.apply(l), dl);
    out += &block::inner(&alpha_ops, &g.s.adjoint().apply(&bracket));

    // − [L*(δS − 1) + δL δS] S α
    let row = block::add(
        &block::adjoint_row_times_block(l, &ds_m1),
        &block::row_times_block(dl, ds),
    );
    out = &out - &block::row_times_col(&row, &s_alpha);

    // α* S* (δS − 1) S α
    out += &block::inner(&s_alpha, &ds_m1.apply(&s_alpha));
    Ok(out)
}

/// JSON document form of a model:
/// `{ "n": int, "d": int, "S": [[matrix]], "L": [matrix], "H": matrix }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelDocument {
    pub n: usize,
    pub d: usize,
    #[serde(rename = "S")]
    pub s: Vec<Vec<Operator>>,
    #[serde(rename = "L")]
    pub l: Vec<Operator>,
    #[serde(rename = "H")]
    pub h: Operator,
}

impl ModelDocument {
    /// Shape checks only, no unitarity or Hermiticity validation.
    pub fn into_model_unchecked(self) -> Result<SlhModel> {
        if self.s.len() != self.n {
            return Err(Error::dims("declared channel count n", self.n, self.s.len()));
        }
        let model = SlhModel::from_parts(self.s, self.l, self.h)?;
        if model.system_dim() != self.d {
            return Err(Error::dims("declared system dimension d", self.d, model.system_dim()));
        }
        Ok(model)
    }

    pub fn into_model(self) -> Result<SlhModel> {
        self.into_model_unchecked()?.validated(DEFAULT_TOL)
    }
}

impl From<&SlhModel> for ModelDocument {
    fn from(g: &SlhModel) -> Self {
        ModelDocument {
            n: g.channels(),
            d: g.system_dim(),
            s: g.s.rows(),
            l: g.l.clone(),
            h: g.h.clone(),
        }
    }
}

impl Serialize for SlhModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ModelDocument::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SlhModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        ModelDocument::deserialize(d)?
            .into_model()
            .map_err(serde::de::Error::custom)
    }
}

impl SlhModel {
    /// Load and validate a model from JSON text.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDocument = serde_json::from_str(text)?;
        doc.into_model()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serializes")
    }
}
