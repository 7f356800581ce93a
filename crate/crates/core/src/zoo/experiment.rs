//! Distances `‖(U_{G⁽ᵏ⁾}(t) − U_{G̃⁽ᵏ⁾}(t))Ψ‖` along a family.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{FamilyMember, ModelFamily};
use crate::error::{Error, Result};
use crate::oracle::{self, OracleEstimate, SliceConfig};
use crate::semigroup::{self, ExponentialState};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub k: f64,
    pub distance: f64,
    pub delta_residual: f64,
    pub oracle_value: Option<f64>,
    pub oracle_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub family: String,
    pub t: f64,
    pub state: ExponentialState,
    pub rows: Vec<ConvergenceRow>,
}

pub const CSV_HEADER: [&str; 5] = ["k", "distance", "delta_residual", "oracle_value", "oracle_error"];

/// 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn format_opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

impl ConvergenceReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(format!("csv: {e}"));
        w.write_record(CSV_HEADER).map_err(io)?;
        for r in &self.rows {
            w.write_record([
                format_float(r.k),
                format_float(r.distance),
                format_float(r.delta_residual),
                format_opt(r.oracle_value),
                format_opt(r.oracle_error),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Io(format!("csv: {e}")))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is ASCII"))
    }

    pub fn distances(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.distance).collect()
    }
}

fn check_ks(ks: &[f64]) -> Result<()> {
    if ks.is_empty() {
        return Err(Error::InvalidSpec("index list is empty".into()));
    }
    if let Some(k) = ks.iter().find(|k| !(k.is_finite() && **k > 0.0)) {
        return Err(Error::InvalidSpec(format!("index {k} is not a positive number")));
    }
    if ks.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSpec(format!("indices must be strictly increasing: {ks:?}")));
    }
    Ok(())
}

fn evaluate(member: &FamilyMember, psi: &ExponentialState, t: f64) -> Result<ConvergenceRow> {
    Ok(ConvergenceRow {
        k: member.k,
        distance: semigroup::distance(&member.model, &member.perturbed, psi, t)?,
        delta_residual: member.delta_residual(),
        oracle_value: None,
        oracle_error: None,
    })
}

/// Evaluates every `k` in parallel; with `oracle` set, the smallest `k` is
/// also run through the collision integrator.
pub fn convergence_experiment(
    family: &dyn ModelFamily,
    ks: &[f64],
    psi: &ExponentialState,
    t: f64,
    oracle: Option<&SliceConfig>,
) -> Result<ConvergenceReport> {
    check_ks(ks)?;
    psi.check_against(family.channels(), family.system_dim(), t)?;
    let members: Vec<FamilyMember> = ks
        .par_iter()
        .map(|&k| family.member(k))
        .collect::<Result<_>>()?;
    let mut rows: Vec<ConvergenceRow> = members
        .par_iter()
        .map(|m| evaluate(m, psi, t))
        .collect::<Result<_>>()?;
    if let Some(cfg) = oracle {
        let m = &members[0];
        let OracleEstimate { value, error_bar, .. } =
            oracle::oracle_distance(&m.model, &m.perturbed, psi, t, cfg)?;
        rows[0].oracle_value = Some(value);
        rows[0].oracle_error = Some(error_bar);
    }
    Ok(ConvergenceReport {
        family: family.name(),
        t,
        state: psi.clone(),
        rows,
    })
}
