//! JSON input documents.
//!
//! Models are read as raw documents and validated afterwards with the
//! configured tolerance, so a malformed file and an invalid model map to
//! different exit statuses.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use slh_core::slh::{self, ModelDocument};
use slh_core::zoo::VirtualRotationFamily;
use slh_core::{ExponentialState, Operator, SlhModel};

use crate::failure::{Failure, Outcome};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Outcome<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn load_model(doc: ModelDocument, tol: f64) -> Outcome<SlhModel> {
    let model = doc.into_model_unchecked()?;
    let violations = slh::validate(&model, tol);
    if violations.is_empty() {
        Ok(model)
    } else {
        Err(Failure::invalid_model(violations))
    }
}

/// `{ "a": model, "b": model, "state": optional }`.
#[derive(Debug, Deserialize)]
pub struct PairInput {
    pub a: ModelDocument,
    pub b: ModelDocument,
    #[serde(default)]
    pub state: Option<ExponentialState>,
}

/// A family spec with an optional exponential state alongside its fields.
#[derive(Debug, Deserialize)]
pub struct FamilyInput<F> {
    #[serde(flatten)]
    pub family: F,
    #[serde(default)]
    pub state: Option<ExponentialState>,
}

/// `{ "model": model, "generator": matrix, "phi0": number }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VirtualWorkSpec {
    pub model: ModelDocument,
    pub generator: Operator,
    pub phi0: f64,
}

impl VirtualWorkSpec {
    pub fn into_family(self, tol: f64) -> Outcome<VirtualRotationFamily> {
        Ok(VirtualRotationFamily {
            model: load_model(self.model, tol)?,
            generator: self.generator,
            phi0: self.phi0,
        })
    }
}
