//! Faraday rotation of a strongly driven polarization channel by a collective
//! spin.
//!
//! Two channels, spin-`j` system with `F_z = diag(j, j−1, …, −j)`. Under
//! `κ ↦ κ/k`, `α ↦ kα` the model
//!
//! ```text
//! S⁽ᵏ⁾ = [[cos(κF_z/k), −sin(κF_z/k)], [sin(κF_z/k), cos(κF_z/k)]]
//! L⁽ᵏ⁾ = (−k sin(κF_z/k) α, k cos(κF_z/k) α),   H = 0
//! ```
//!
//! diverges, while `G⁽ᵏ⁾ ◁ δG⁽ᵏ⁾ = (I, (−κF_z α, kα), 0)` for every `k`.

use serde::{Deserialize, Serialize};

use super::{FamilyMember, ModelFamily};
use crate::block::BlockMatrix;
use crate::error::{Error, Result};
use crate::operator::{c, Operator};
use crate::slh::{self, SlhModel};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaradaySpec {
    /// Spin quantum number, a positive multiple of ½.
    pub j: f64,
    pub kappa: f64,
    pub alpha: f64,
    pub k: f64,
}

#[derive(Clone, Debug)]
pub struct FaradayMember {
    pub model: SlhModel,
    pub perturbation: SlhModel,
    pub perturbed: SlhModel,
    /// `(I, (−κF_z α, kα), 0)`.
    pub decoupled: SlhModel,
}

/// `F_z = diag(j, j−1, …, −j)`.
pub fn spin_z(j: f64) -> Result<Operator> {
    let twice = 2.0 * j;
    if !(twice >= 1.0 && (twice - twice.round()).abs() < 1e-12 && twice <= 1e6) {
        return Err(Error::InvalidSpec(format!("spin j = {j} must be a positive multiple of 1/2")));
    }
    let dim = twice.round() as usize + 1;
    let values: Vec<f64> = (0..dim).map(|i| j - i as f64).collect();
    Ok(Operator::real_diag(&values))
}

pub fn faraday_family(spec: &FaradaySpec) -> Result<FaradayMember> {
    if !(spec.k > 0.0 && spec.k.is_finite()) {
        return Err(Error::InvalidSpec(format!("scaling index must be positive, got {}", spec.k)));
    }
    let fz = spin_z(spec.j)?;
    let d = fz.dim();
    let (k, kappa, alpha) = (spec.k, spec.kappa, spec.alpha);
    let angle = fz.scale_re(kappa / k);
    let cos = angle.func_of_hermitian(|x| c(x.cos()))?;
    let sin = angle.func_of_hermitian(|x| c(x.sin()))?;

    let s = BlockMatrix::from_blocks(vec![vec![cos.clone(), -&sin], vec![sin.clone(), cos.clone()]])?;
    let l = vec![sin.scale_re(-k * alpha), cos.scale_re(k * alpha)];
    let model = SlhModel::new(s.clone(), l, Operator::zeros(d))?;

    let id = Operator::identity(d);
    let shift = vec![
        &sin.scale_re(k * alpha) - &fz.scale_re(kappa * alpha),
        (&id - &cos).scale_re(k * alpha),
    ];
    let s_adj = s.adjoint();
    let dl = s_adj.apply(&shift);
    let perturbation = SlhModel::new(s_adj, dl, Operator::zeros(d))?;
    let perturbed = slh::right_perturb(&model, &perturbation)?;
    let decoupled = SlhModel::coupled(
        vec![fz.scale_re(-kappa * alpha), id.scale_re(k * alpha)],
        Operator::zeros(d),
    )?;
    Ok(FaradayMember {
        model,
        perturbation,
        perturbed,
        decoupled,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaradayFamily {
    pub j: f64,
    pub kappa: f64,
    pub alpha: f64,
}

impl FaradayFamily {
    pub fn spec(&self, k: f64) -> FaradaySpec {
        FaradaySpec {
            j: self.j,
            kappa: self.kappa,
            alpha: self.alpha,
            k,
        }
    }
}

impl ModelFamily for FaradayFamily {
    fn name(&self) -> String {
        "faraday".into()
    }

    fn channels(&self) -> usize {
        2
    }

    fn system_dim(&self) -> usize {
        (2.0 * self.j).round() as usize + 1
    }

    fn member(&self, k: f64) -> Result<FamilyMember> {
        let m = faraday_family(&self.spec(k))?;
        Ok(FamilyMember {
            k,
            model: m.model,
            perturbed: m.perturbed,
            perturbation: m.perturbation,
        })
    }
}
