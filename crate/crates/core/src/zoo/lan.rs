//! Local asymptotic normality: a one-parameter family `θ ↦ (I, L(θ), H(θ))`
//! probed at `θ₀ + v/k` with time rescaled by `k²`.
//!
//! ```text
//! G_v⁽ᵏ⁾ = (I, k L(θ₀ + v/k), k² H(θ₀ + v/k))
//! G̃_v⁽ᵏ⁾ = (I, k L(θ₀) + v L′(θ₀),
//!           k² H(θ₀) + k v H′(θ₀) + ½ v² H″(θ₀) + ½ v² Im[L″(θ₀)* L(θ₀)])
//! ```

use serde::{Deserialize, Serialize};

use super::{FamilyMember, ModelFamily};
use crate::error::{Error, Result};
use crate::operator::{Operator, DEFAULT_TOL};
use crate::slh::{self, SlhModel};

/// Values and first two derivatives of `L` and `H` at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    pub l: Operator,
    pub dl: Operator,
    pub ddl: Operator,
    pub h: Operator,
    pub dh: Operator,
    pub ddh: Operator,
}

pub trait ParametricModel: Sync {
    fn system_dim(&self) -> usize;

    /// `(L(θ), H(θ))`.
    fn evaluate(&self, theta: f64) -> (Operator, Operator);

    /// Analytic `(L′, L″, H′, H″)` at `θ`, when known.
    fn derivatives(&self, _theta: f64) -> Option<[Operator; 4]> {
        None
    }
}

/// `L(θ) = Σ_i θ^i L_i`, `H(θ) = Σ_i θ^i H_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialFamily {
    #[serde(rename = "L")]
    pub l: Vec<Operator>,
    #[serde(rename = "H")]
    pub h: Vec<Operator>,
}

fn horner(coeffs: &[Operator], theta: f64, d: usize) -> Operator {
    let mut acc = Operator::zeros(d);
    for cf in coeffs.iter().rev() {
        acc = &acc.scale_re(theta) + cf;
    }
    acc
}

fn derivative(coeffs: &[Operator]) -> Vec<Operator> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, cf)| cf.scale_re(i as f64))
        .collect()
}

impl PolynomialFamily {
    pub fn new(l: Vec<Operator>, h: Vec<Operator>) -> Result<Self> {
        let d = l
            .first()
            .or(h.first())
            .map(|x| x.dim())
            .ok_or_else(|| Error::InvalidSpec("polynomial family has no coefficients".into()))?;
        for x in l.iter().chain(&h) {
            x.check_dim(d, "polynomial coefficient")?;
        }
        for (i, x) in h.iter().enumerate() {
            if !x.is_hermitian(DEFAULT_TOL) {
                return Err(Error::InvalidSpec(format!("Hamiltonian coefficient {i} is not Hermitian")));
            }
        }
        Ok(PolynomialFamily { l, h })
    }
}

impl ParametricModel for PolynomialFamily {
    fn system_dim(&self) -> usize {
        self.l.first().or(self.h.first()).map(|x| x.dim()).unwrap_or(1)
    }

    fn evaluate(&self, theta: f64) -> (Operator, Operator) {
        let d = self.system_dim();
        (horner(&self.l, theta, d), horner(&self.h, theta, d))
    }

    fn derivatives(&self, theta: f64) -> Option<[Operator; 4]> {
        let d = self.system_dim();
        let dl = derivative(&self.l);
        let dh = derivative(&self.h);
        Some([
            horner(&dl, theta, d),
            horner(&derivative(&dl), theta, d),
            horner(&dh, theta, d),
            horner(&derivative(&dh), theta, d),
        ])
    }
}

/// Central differences with step `h = 1e−4·max(1, |θ|)`, refined by one
/// Richardson step (`h` and `h/2`).
pub fn finite_difference_jet<P: ParametricModel + ?Sized>(family: &P, theta: f64) -> Jet {
    let step = 1e-4 * theta.abs().max(1.0);
    let (l0, h0) = family.evaluate(theta);
    let central = |h: f64| {
        let (lp, hp) = family.evaluate(theta + h);
        let (lm, hm) = family.evaluate(theta - h);
        let d1 = |p: &Operator, m: &Operator| (p - m).scale_re(0.5 / h);
        let d2 = |p: &Operator, z: &Operator, m: &Operator| (&(p + m) - &z.scale_re(2.0)).scale_re(1.0 / (h * h));
        [d1(&lp, &lm), d2(&lp, &l0, &lm), d1(&hp, &hm), d2(&hp, &h0, &hm)]
    };
    let coarse = central(step);
    let fine = central(step / 2.0);
    let refine = |i: usize| (&fine[i].scale_re(4.0) - &coarse[i]).scale_re(1.0 / 3.0);
    Jet {
        dl: refine(0),
        ddl: refine(1),
        dh: refine(2).re_part(),
        ddh: refine(3).re_part(),
        l: l0,
        h: h0,
    }
}

/// Analytic derivatives when the family supplies them, finite differences
/// otherwise.
pub fn jet<P: ParametricModel + ?Sized>(family: &P, theta: f64) -> Jet {
    match family.derivatives(theta) {
        Some([dl, ddl, dh, ddh]) => {
            let (l, h) = family.evaluate(theta);
            Jet { l, dl, ddl, h, dh, ddh }
        }
        None => finite_difference_jet(family, theta),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LanSpec {
    pub family: PolynomialFamily,
    pub theta0: f64,
    pub v: f64,
    pub k: f64,
    /// Use finite differences even though the family has closed-form
    /// derivatives.
    #[serde(default)]
    pub finite_differences: bool,
}

#[derive(Clone, Debug)]
pub struct LanMember {
    pub model: SlhModel,
    pub perturbed: SlhModel,
    pub perturbation: SlhModel,
    /// `½ v² H″(θ₀) + ½ v² Im[L″(θ₀)* L(θ₀)]`.
    pub phase: Operator,
    /// `k² R_L(v/k)` and `k² R_H(v/k)`.
    pub scaled_remainders: (Operator, Operator),
}

/// LAN family at `(θ₀, v, k)` for any parametric model.
pub fn lan_member<P: ParametricModel + ?Sized>(family: &P, theta0: f64, v: f64, k: f64, j: &Jet) -> Result<LanMember> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidSpec(format!("scaling index must be positive, got {k}")));
    }
    let dtheta = v / k;
    let (l, h) = family.evaluate(theta0 + dtheta);
    if !h.is_hermitian(DEFAULT_TOL) {
        return Err(Error::NotHermitian {
            residual: h.hermiticity_residual(),
        });
    }
    let model = SlhModel::coupled(vec![l.scale_re(k)], h.scale_re(k * k))?;

    let phase = &j.ddh.scale_re(0.5 * v * v) + &(&j.ddl.adjoint() * &j.l).im_part().scale_re(0.5 * v * v);
    let l_tilde = &j.l.scale_re(k) + &j.dl.scale_re(v);
    let h_tilde = &(&j.h.scale_re(k * k) + &j.dh.scale_re(k * v)) + &phase;
    let perturbed = SlhModel::coupled(vec![l_tilde], h_tilde)?;
    let perturbation = slh::perturbation_between(&model, &perturbed)?;

    let taylor = |x: &Operator, d1: &Operator, d2: &Operator| {
        &(x + &d1.scale_re(dtheta)) + &d2.scale_re(0.5 * dtheta * dtheta)
    };
    let r_l = (&l - &taylor(&j.l, &j.dl, &j.ddl)).scale_re(k * k);
    let r_h = (&h - &taylor(&j.h, &j.dh, &j.ddh)).scale_re(k * k);
    Ok(LanMember {
        model,
        perturbed,
        perturbation,
        phase,
        scaled_remainders: (r_l, r_h),
    })
}

pub fn lan_family(spec: &LanSpec) -> Result<LanMember> {
    let j = if spec.finite_differences {
        finite_difference_jet(&spec.family, spec.theta0)
    } else {
        jet(&spec.family, spec.theta0)
    };
    lan_member(&spec.family, spec.theta0, spec.v, spec.k, &j)
}

/// The LAN family indexed by `k`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LanFamily {
    pub family: PolynomialFamily,
    pub theta0: f64,
    pub v: f64,
    #[serde(default)]
    pub finite_differences: bool,
}

impl LanFamily {
    pub fn spec(&self, k: f64) -> LanSpec {
        LanSpec {
            family: self.family.clone(),
            theta0: self.theta0,
            v: self.v,
            k,
            finite_differences: self.finite_differences,
        }
    }
}

impl ModelFamily for LanFamily {
    fn name(&self) -> String {
        "lan".into()
    }

    fn channels(&self) -> usize {
        1
    }

    fn system_dim(&self) -> usize {
        self.family.system_dim()
    }

    fn member(&self, k: f64) -> Result<FamilyMember> {
        let m = lan_family(&self.spec(k))?;
        Ok(FamilyMember {
            k,
            model: m.model,
            perturbed: m.perturbed,
            perturbation: m.perturbation,
        })
    }
}
