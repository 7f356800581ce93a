//! Virtual work of a unitary rotation `X ↦ e^{iFφ} X e^{−iFφ}` applied to the
//! coupling and Hamiltonian of a model without scattering.

use serde::{Deserialize, Serialize};

use super::{FamilyMember, ModelFamily};
use crate::error::{Error, Result};
use crate::operator::{c, Operator, DEFAULT_TOL, I};
use crate::slh::{self, SlhModel};

#[derive(Clone, Debug)]
pub struct VirtualRotation {
    /// The left perturbation `δG = (I, L(δφ) − L, H(δφ) − H)`.
    pub perturbation: SlhModel,
    /// `G′ = δG ◁ G`.
    pub rotated: SlhModel,
    /// `ΔH = H′ − H`.
    pub work: Operator,
    /// `−𝓛(F) δφ`.
    pub first_order: Operator,
}

fn check_rotation(g: &SlhModel, f: &Operator) -> Result<()> {
    if !f.is_hermitian(DEFAULT_TOL) {
        return Err(Error::NotHermitian {
            residual: f.hermiticity_residual(),
        });
    }
    f.check_dim(g.system_dim(), "rotation generator")?;
    let r = g.s().distance_to_identity();
    if r > DEFAULT_TOL {
        return Err(Error::InvalidSpec(format!(
            "virtual rotation requires a model without scattering (‖S − I‖ = {r:.3e})"
        )));
    }
    Ok(())
}

pub fn virtual_rotation(g: &SlhModel, f: &Operator, dphi: f64) -> Result<VirtualRotation> {
    check_rotation(g, f)?;
    let u = f.scale(c(dphi) * I).exp();
    let ud = u.adjoint();
    let rotate = |x: &Operator| &(&u * x) * &ud;
    let dl: Vec<Operator> = g.l().iter().map(|l| &rotate(l) - l).collect();
    let dh = (&rotate(g.h()) - g.h()).re_part();
    let perturbation = SlhModel::coupled(dl, dh)?;
    let rotated = slh::left_perturb(g, &perturbation)?;
    let work = slh::virtual_work(g, &perturbation)?;
    let first_order = slh::lindblad(g, f)?.scale_re(-dphi);
    Ok(VirtualRotation {
        perturbation,
        rotated,
        work,
        first_order,
    })
}

/// `δφ = φ₀/k`; the perturbed model is the left perturbation `δG ◁ G`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VirtualRotationFamily {
    pub model: SlhModel,
    pub generator: Operator,
    pub phi0: f64,
}

impl ModelFamily for VirtualRotationFamily {
    fn name(&self) -> String {
        "virtual-work".into()
    }

    fn channels(&self) -> usize {
        self.model.channels()
    }

    fn system_dim(&self) -> usize {
        self.model.system_dim()
    }

    fn member(&self, k: f64) -> Result<FamilyMember> {
        let r = virtual_rotation(&self.model, &self.generator, self.phi0 / k)?;
        Ok(FamilyMember {
            k,
            model: self.model.clone(),
            perturbed: r.rotated,
            perturbation: r.perturbation,
        })
    }
}
