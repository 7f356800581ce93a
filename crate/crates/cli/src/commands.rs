use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use slh_core::oracle::{self, OracleEstimate, Scheme, SliceConfig};
use slh_core::semigroup;
use slh_core::slh::{self, ModelDocument, Violation};
use slh_core::zoo::{self, FaradayFamily, LanFamily, ModelFamily, PolynomialFamily, SqueezingFamily};
use slh_core::{ExponentialState, SlhModel};

use crate::failure::{Failure, Outcome};
use crate::inputs::{self, FamilyInput, PairInput, VirtualWorkSpec};
use crate::{Command, Options};

/// Everything needed to reproduce a result from its artifact alone.
#[derive(Serialize)]
struct Provenance<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    input: &'a Path,
    t: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    ks: Vec<f64>,
    tol: f64,
    state: &'a ExponentialState,
    oracle: Option<&'a SliceConfig>,
    spec: serde_json::Value,
}

#[derive(Serialize)]
struct ValidationResult<'a> {
    valid: bool,
    n: usize,
    d: usize,
    tol: f64,
    violations: &'a [Violation],
}

#[derive(Serialize)]
struct DistanceResult {
    t: f64,
    distance: f64,
    /// `⟨Ψ, U_a(t)* U_b(t) Ψ⟩` as `[re, im]`.
    overlap: [f64; 2],
    norm_sq: f64,
}

#[derive(Serialize)]
struct OracleCheckResult<'a> {
    t: f64,
    engine_distance: f64,
    oracle: &'a OracleEstimate,
    within_error_bar: bool,
}

pub fn run(command: Command, opts: &Options) -> Outcome<()> {
    match command {
        Command::Validate => validate(opts),
        Command::Distance => distance(opts),
        Command::OracleCheck => oracle_check(opts),
        Command::Squeezing => family(opts, "squeezing", |s: &SqueezingFamily| Ok(s.clone())),
        Command::Faraday => family(opts, "faraday", |s: &FaradayFamily| Ok(s.clone())),
        Command::Lan => family(opts, "lan", |s: &LanFamily| {
            PolynomialFamily::new(s.family.l.clone(), s.family.h.clone())?;
            Ok(s.clone())
        }),
        Command::VirtualWork => family(opts, "virtual-work", |s: &VirtualWorkSpec| s.clone().into_family(opts.tol)),
    }
}

fn input_path(opts: &Options) -> Outcome<&Path> {
    opts.input
        .as_deref()
        .ok_or_else(|| Failure::usage("--input is required"))
}

fn emit(output: Option<&Path>, content: &str) -> Outcome<()> {
    match output {
        Some(path) => std::fs::write(path, content).map_err(|e| Failure::io(path, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::io(Path::new("<stdout>"), e))
        }
    }
}

/// `out.csv` ↦ `out.config.json`.
pub fn sidecar_path(output: &Path) -> PathBuf {
    output.with_extension("config.json")
}

fn emit_sidecar(opts: &Options, provenance: &Provenance) -> Outcome<()> {
    if let Some(out) = opts.output.as_deref() {
        let text = serde_json::to_string_pretty(provenance)? + "\n";
        emit(Some(&sidecar_path(out)), &text)?;
    }
    Ok(())
}

fn to_json_line<T: Serialize>(value: &T) -> Outcome<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// The state from the input, or the uniform default on `[0, t]`.
fn resolve_state(state: Option<ExponentialState>, t: Option<f64>, d: usize, n: usize) -> Outcome<(ExponentialState, f64)> {
    match state {
        Some(psi) => {
            let t = t.unwrap_or_else(|| psi.horizon());
            Ok((psi, t))
        }
        None => {
            let t = t.unwrap_or(1.0);
            Ok((ExponentialState::uniform(d, n, t)?, t))
        }
    }
}

fn oracle_requested(opts: &Options) -> bool {
    opts.oracle || opts.oracle_dt.is_some() || opts.oracle_dnoise.is_some()
}

/// `--oracle-dt` fixes the step; otherwise it is chosen from the models.
fn oracle_config(opts: &Options, models: &[&SlhModel], psi: &ExponentialState, t: f64) -> Outcome<SliceConfig> {
    Ok(match opts.oracle_dt {
        Some(dt) => SliceConfig::new(dt, opts.oracle_dnoise.unwrap_or(3), Scheme::ExponentialMidpoint)?,
        None => {
            let mut cfg = SliceConfig::default_for(models, psi, t);
            if let Some(d_noise) = opts.oracle_dnoise {
                cfg.d_noise = d_noise;
            }
            cfg.check()?;
            cfg
        }
    })
}

fn validate(opts: &Options) -> Outcome<()> {
    let path = input_path(opts)?;
    let doc: ModelDocument = inputs::read_json(path)?;
    let model = doc.into_model_unchecked()?;
    let violations = slh::validate(&model, opts.tol);
    let result = ValidationResult {
        valid: violations.is_empty(),
        n: model.channels(),
        d: model.system_dim(),
        tol: opts.tol,
        violations: &violations,
    };
    emit(opts.output.as_deref(), &to_json_line(&result)?)?;
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::invalid_model(violations))
    }
}

fn load_pair(opts: &Options) -> Outcome<(SlhModel, SlhModel, ExponentialState, f64)> {
    let path = input_path(opts)?;
    let input: PairInput = inputs::read_json(path)?;
    let a = inputs::load_model(input.a, opts.tol)?;
    let b = inputs::load_model(input.b, opts.tol)?;
    let (psi, t) = resolve_state(input.state, opts.t, a.system_dim(), a.channels())?;
    Ok((a, b, psi, t))
}

fn pair_spec(a: &SlhModel, b: &SlhModel) -> serde_json::Value {
    serde_json::json!({ "a": a, "b": b })
}

fn distance(opts: &Options) -> Outcome<()> {
    let (a, b, psi, t) = load_pair(opts)?;
    let overlap = semigroup::overlap(&a, &b, &psi, t)?;
    let result = DistanceResult {
        t,
        distance: semigroup::distance(&a, &b, &psi, t)?,
        overlap: [overlap.re, overlap.im],
        norm_sq: psi.norm_sq(),
    };
    emit(opts.output.as_deref(), &to_json_line(&result)?)?;
    emit_sidecar(
        opts,
        &Provenance {
            tool: "slh",
            version: env!("CARGO_PKG_VERSION"),
            command: "distance",
            input: input_path(opts)?,
            t,
            ks: Vec::new(),
            tol: opts.tol,
            state: &psi,
            oracle: None,
            spec: pair_spec(&a, &b),
        },
    )
}

fn oracle_check(opts: &Options) -> Outcome<()> {
    let (a, b, psi, t) = load_pair(opts)?;
    let cfg = oracle_config(opts, &[&a, &b], &psi, t)?;
    let engine = semigroup::distance(&a, &b, &psi, t)?;
    let est = oracle::oracle_distance(&a, &b, &psi, t, &cfg)?;
    let result = OracleCheckResult {
        t,
        engine_distance: engine,
        within_error_bar: (est.value - engine).abs() <= est.error_bar,
        oracle: &est,
    };
    emit(opts.output.as_deref(), &to_json_line(&result)?)?;
    emit_sidecar(
        opts,
        &Provenance {
            tool: "slh",
            version: env!("CARGO_PKG_VERSION"),
            command: "oracle-check",
            input: input_path(opts)?,
            t,
            ks: Vec::new(),
            tol: opts.tol,
            state: &psi,
            oracle: Some(&cfg),
            spec: pair_spec(&a, &b),
        },
    )
}

fn family<S, F>(opts: &Options, command: &'static str, build: impl FnOnce(&S) -> Outcome<F>) -> Outcome<()>
where
    S: DeserializeOwned + Serialize,
    F: ModelFamily,
{
    let path = input_path(opts)?;
    if opts.ks.is_empty() {
        return Err(Failure::usage("--ks is required for family commands"));
    }
    let input: FamilyInput<S> = inputs::read_json(path)?;
    let fam = build(&input.family)?;
    let (psi, t) = resolve_state(input.state, opts.t, fam.system_dim(), fam.channels())?;
    let cfg = if oracle_requested(opts) {
        let first = fam.member(opts.ks[0])?;
        Some(oracle_config(opts, &[&first.model, &first.perturbed], &psi, t)?)
    } else {
        None
    };
    let report = zoo::convergence_experiment(&fam, &opts.ks, &psi, t, cfg.as_ref())?;
    emit(opts.output.as_deref(), &report.to_csv()?)?;
    emit_sidecar(
        opts,
        &Provenance {
            tool: "slh",
            version: env!("CARGO_PKG_VERSION"),
            command,
            input: path,
            t,
            ks: opts.ks.clone(),
            tol: opts.tol,
            state: &psi,
            oracle: cfg.as_ref(),
            spec: serde_json::to_value(&input.family)?,
        },
    )
}
