//! Model families and convergence experiments.
//!
//! Each family produces, for an index `k`, a model `G⁽ᵏ⁾`, a perturbation
//! `δG⁽ᵏ⁾` and the perturbed model built from them. For the right-perturbation
//! families `G̃⁽ᵏ⁾ = G⁽ᵏ⁾ ◁ δG⁽ᵏ⁾`; the virtual-work family uses the left
//! perturbation `δG ◁ G`.

pub mod experiment;
pub mod faraday;
pub mod lan;
pub mod squeezing;
pub mod virtual_work;

use crate::error::Result;
use crate::slh::SlhModel;

pub use experiment::{convergence_experiment, ConvergenceReport, ConvergenceRow};
pub use faraday::{faraday_family, FaradayFamily, FaradayMember, FaradaySpec};
pub use lan::{lan_family, LanFamily, LanMember, LanSpec, ParametricModel, PolynomialFamily};
pub use squeezing::{squeezing_family, Bogoliubov, SqueezingFamily, SqueezingMember, SqueezingSpec};
pub use virtual_work::{virtual_rotation, VirtualRotation, VirtualRotationFamily};

#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub k: f64,
    pub model: SlhModel,
    pub perturbed: SlhModel,
    pub perturbation: SlhModel,
}

impl FamilyMember {
    /// `‖δS − I‖ + ‖δL‖ + ‖δH‖`.
    pub fn delta_residual(&self) -> f64 {
        self.perturbation.distance_to_identity()
    }
}

pub trait ModelFamily: Sync {
    fn name(&self) -> String;
    fn channels(&self) -> usize;
    fn system_dim(&self) -> usize;
    fn member(&self, k: f64) -> Result<FamilyMember>;
}
