//! Resolving an analysis input: a builtin name, a structure-equation model
//! file, or a bicomplex file.

use std::fs;
use std::path::Path;

use anyhow::Context;
use ddbar_core::bicomplex::format::parse_bicomplex;
use ddbar_core::error::ModelError;
use ddbar_core::lie::{builtin, compile, parse_model, StructureEquations};
use ddbar_core::{GaussBicomplex, GaussMetric};

use crate::Failure;

pub struct Input {
    pub label: String,
    pub bicomplex: GaussBicomplex,
    pub metric: GaussMetric,
}

fn compile_model(s: &StructureEquations) -> Result<Input, Failure> {
    let model = compile(s).map_err(|e| match e {
        ModelError::Invalid(v) => Failure::Validation(v),
        other => Failure::Input(other.into()),
    })?;
    Ok(Input {
        label: format!("model {} (n = {})", s.name, s.n),
        bicomplex: model.bicomplex,
        metric: model.metric,
    })
}

pub fn from_builtin(name: &str) -> Result<Input, Failure> {
    let s = builtin(name).map_err(|e| Failure::Input(e.into()))?;
    compile_model(&s)
}

/// Model files are recognised by a top-level `dphi` field.
pub fn from_file(path: &Path) -> Result<Input, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Input)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Failure::Input)?;
    if value.get("dphi").is_some() {
        let s = parse_model(&text)
            .with_context(|| format!("parsing model {}", path.display()))
            .map_err(Failure::Input)?;
        return compile_model(&s);
    }
    let parsed = parse_bicomplex(&text)
        .with_context(|| format!("parsing bicomplex {}", path.display()))
        .map_err(Failure::Input)?;
    let x = parsed.bicomplex;
    let violations = x.validate();
    if !violations.is_empty() {
        return Err(Failure::Validation(
            violations.iter().map(ToString::to_string).collect(),
        ));
    }
    let metric = GaussMetric::from_blocks(&x, &parsed.gram)
        .map_err(|e| Failure::Validation(vec![e.to_string()]))?;
    Ok(Input {
        label: format!("bicomplex {} (p_max = {}, q_max = {})", path.display(), x.p_max(), x.q_max()),
        bicomplex: x,
        metric,
    })
}
