//! Strongly squeezed noise represented through a Bogoliubov transformation
//! of vacuum noise.
//!
//! With maximal squeezing `m = √(n(n+1)) e^{iθ}` the vacuum-driven coupling
//! is `L⁽ⁿ⁾ = L u* − L* v`, which splits as `F⁽ⁿ⁾ + L/√ν(n)` with `F⁽ⁿ⁾`
//! skew-adjoint and of order `√n`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{FamilyMember, ModelFamily};
use crate::error::{Error, Result};
use crate::operator::{c, Operator, C64, I};
use crate::slh::{self, SlhModel};

/// Default distance kept between `θ` and `±π`.
pub const DEFAULT_THETA_MARGIN: f64 = 1e-3;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SqueezingSpec {
    #[serde(rename = "L")]
    pub l: Operator,
    #[serde(rename = "H")]
    pub h: Operator,
    pub theta: f64,
    /// Squeezing strength (not the channel count).
    pub n: f64,
    #[serde(default = "default_margin")]
    pub theta_margin: f64,
}

fn default_margin() -> f64 {
    DEFAULT_THETA_MARGIN
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bogoliubov {
    pub n: f64,
    pub theta: f64,
    pub u: C64,
    pub v: C64,
    pub m: C64,
    pub nu: f64,
}

impl Bogoliubov {
    pub fn new(n: f64, theta: f64) -> Result<Self> {
        if !(n >= 0.0 && n.is_finite()) {
            return Err(Error::InvalidSpec(format!("squeezing strength must be nonnegative, got {n}")));
        }
        let s = (n * (n + 1.0)).sqrt();
        let nu = 2.0 * n + 1.0 + 2.0 * s * theta.cos();
        if nu <= 1e-12 * (2.0 * n + 1.0) {
            return Err(Error::InvalidSpec(format!(
                "ν(n) = {nu:.3e} is not positive; θ = {theta} is too close to π"
            )));
        }
        let phase = C64::from_polar(s, theta);
        let root = nu.sqrt();
        Ok(Bogoliubov {
            n,
            theta,
            u: (c(n + 1.0) + phase) / root,
            v: (c(n) + phase) / root,
            m: phase,
            nu,
        })
    }

    /// `c = n + √(n(n+1)) e^{−iθ}`, the coefficient of `L` in `√ν F⁽ⁿ⁾`.
    fn f_coeff(&self) -> C64 {
        c(self.n) + C64::from_polar((self.n * (self.n + 1.0)).sqrt(), -self.theta)
    }

    /// `|u|² − (n+1)`, `|v|² − n`, `uv − m`, `|u|² − |v|² − 1`.
    pub fn identity_residuals(&self) -> [f64; 4] {
        [
            (self.u.norm_sqr() - (self.n + 1.0)).abs(),
            (self.v.norm_sqr() - self.n).abs(),
            (self.u * self.v - self.m).norm(),
            (self.u.norm_sqr() - self.v.norm_sqr() - 1.0).abs(),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct SqueezingMember {
    pub bogoliubov: Bogoliubov,
    /// `G⁽ⁿ⁾ = (I, L⁽ⁿ⁾, H)`.
    pub model: SlhModel,
    /// `G̃⁽ⁿ⁾ = G⁽ⁿ⁾ ◁ δG⁽ⁿ⁾`.
    pub perturbed: SlhModel,
    /// `δG⁽ⁿ⁾ = (I, −L/√ν(n), 0)`.
    pub perturbation: SlhModel,
    pub f: Operator,
    pub h_n: Operator,
    pub h_limit: Operator,
}

fn check_theta(theta: f64, margin: f64) -> Result<()> {
    if theta.is_nan() || theta.abs() > PI - margin {
        return Err(Error::InvalidSpec(format!(
            "θ = {theta} must lie in [−π + {margin}, π − {margin}]"
        )));
    }
    Ok(())
}

/// `(1/2i)[w L² − (w L²)*] + r L*L`.
fn quadratic_form(l: &Operator, w: C64, r: f64) -> Operator {
    let l2 = (l * l).scale(w);
    let first = (&l2 - &l2.adjoint()).scale(c(0.5) / I);
    &first + &(&l.adjoint() * l).scale_re(r)
}

/// `Hₙ = (1/2i)[(n + √(n(n+1))e^{−iθ})/ν · L² − h.c.] − √(n(n+1)) sin θ/ν · L*L`.
pub fn h_n(l: &Operator, b: &Bogoliubov) -> Operator {
    let s = (b.n * (b.n + 1.0)).sqrt();
    quadratic_form(l, b.f_coeff() / b.nu, -s * b.theta.sin() / b.nu)
}

/// `H′ = (1/2i)[(1 + e^{−iθ})/(2(1 + cos θ)) · L² − h.c.] − sin θ/(2(1 + cos θ)) · L*L`.
pub fn h_limit(l: &Operator, theta: f64) -> Operator {
    let denom = 2.0 * (1.0 + theta.cos());
    let w = (c(1.0) + C64::from_polar(1.0, -theta)) / denom;
    quadratic_form(l, w, -theta.sin() / denom)
}

/// `F⁽ⁿ⁾ = [(n + √(n(n+1))e^{−iθ}) L − h.c.]/√ν(n)`.
pub fn skew_part(l: &Operator, b: &Bogoliubov) -> Operator {
    let cl = l.scale(b.f_coeff());
    (&cl - &cl.adjoint()).scale_re(1.0 / b.nu.sqrt())
}

/// `K⁽ⁿ⁾ = −½(n+1)L*L − ½nLL* + ½mL*² + ½m*L² − iH`.
pub fn squeezed_damping(l: &Operator, h: &Operator, b: &Bogoliubov) -> Operator {
    let ld = l.adjoint();
    let mut k = (&ld * l).scale_re(-0.5 * (b.n + 1.0));
    k = &k - &(l * &ld).scale_re(0.5 * b.n);
    k += &(&ld * &ld).scale(b.m * 0.5);
    k += &(l * l).scale(b.m.conj() * 0.5);
    &k - &h.scale(I)
}

pub fn squeezing_family(spec: &SqueezingSpec) -> Result<SqueezingMember> {
    check_theta(spec.theta, spec.theta_margin)?;
    if spec.l.dim() != spec.h.dim() {
        return Err(Error::dims("squeezing H dimension", spec.l.dim(), spec.h.dim()));
    }
    let b = Bogoliubov::new(spec.n, spec.theta)?;
    let l = &spec.l;
    let l_n = &l.scale(b.u.conj()) - &l.adjoint().scale(b.v);
    let model = SlhModel::coupled(vec![l_n], spec.h.clone())?.validated(crate::operator::DEFAULT_TOL)?;
    let perturbation = SlhModel::coupled(vec![l.scale_re(-1.0 / b.nu.sqrt())], Operator::zeros(l.dim()))?;
    let perturbed = slh::right_perturb(&model, &perturbation)?;
    Ok(SqueezingMember {
        bogoliubov: b,
        f: skew_part(l, &b),
        h_n: h_n(l, &b),
        h_limit: h_limit(l, spec.theta),
        model,
        perturbed,
        perturbation,
    })
}

/// The squeezing family indexed by the strength `n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SqueezingFamily {
    #[serde(rename = "L")]
    pub l: Operator,
    #[serde(rename = "H")]
    pub h: Operator,
    pub theta: f64,
    #[serde(default = "default_margin")]
    pub theta_margin: f64,
}

impl SqueezingFamily {
    pub fn new(l: Operator, h: Operator, theta: f64) -> Self {
        SqueezingFamily {
            l,
            h,
            theta,
            theta_margin: DEFAULT_THETA_MARGIN,
        }
    }

    pub fn spec(&self, n: f64) -> SqueezingSpec {
        SqueezingSpec {
            l: self.l.clone(),
            h: self.h.clone(),
            theta: self.theta,
            n,
            theta_margin: self.theta_margin,
        }
    }

    pub fn squeezed(&self, n: f64) -> Result<SqueezingMember> {
        squeezing_family(&self.spec(n))
    }
}

impl ModelFamily for SqueezingFamily {
    fn name(&self) -> String {
        "squeezing".into()
    }

    fn channels(&self) -> usize {
        1
    }

    fn system_dim(&self) -> usize {
        self.l.dim()
    }

    fn member(&self, k: f64) -> Result<FamilyMember> {
        let m = self.squeezed(k)?;
        Ok(FamilyMember {
            k,
            model: m.model,
            perturbed: m.perturbed,
            perturbation: m.perturbation,
        })
    }
}
