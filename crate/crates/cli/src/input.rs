//! Loading quivers, modules and vectors from command-line arguments.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use semibrick_core::{bundled, CoreError, DimVector, FieldSpec, Quiver, RepModule, ThetaVector};
use serde_json::Value;
use thiserror::Error;

use crate::Opts;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    File { path: String, source: CoreError },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn in_file<T>(path: &Path, r: semibrick_core::Result<T>) -> CliResult<T> {
    r.map_err(|source| CliError::File {
        path: path.display().to_string(),
        source,
    })
}

/// A quiver file named by path, falling back to a bundled quiver name when
/// no such file exists. File quivers are named after the file stem.
pub fn load_quiver(path: &Path) -> CliResult<Arc<Quiver>> {
    if !path.exists() {
        if let Some(q) = path.to_str().and_then(bundled::quiver) {
            return Ok(q);
        }
    }
    let text = read(path)?;
    let q = in_file(path, Quiver::parse(&text))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "quiver".into());
    Ok(Arc::new(q.with_name(name)))
}

fn module_docs(path: &Path) -> CliResult<Vec<Value>> {
    if !path.exists() {
        if let Some(m) = path.to_str().and_then(bundled::module) {
            return Ok(vec![m.to_json()]);
        }
    }
    let text = read(path)?;
    let v: Value = in_file(path, serde_json::from_str(&text).map_err(CoreError::from))?;
    Ok(match v {
        Value::Array(items) => items,
        // certificates and reports carry the module under "module"
        Value::Object(ref o) if o.contains_key("module") && !o.contains_key("mats") => {
            vec![o["module"].clone()]
        }
        other => vec![other],
    })
}

pub fn load_modules(paths: &[PathBuf], quiver: Option<&Arc<Quiver>>) -> CliResult<Vec<RepModule>> {
    let mut out = Vec::new();
    for path in paths {
        for doc in module_docs(path)? {
            out.push(in_file(path, RepModule::from_json(&doc, quiver.cloned()))?);
        }
    }
    Ok(out)
}

pub struct Inputs {
    pub quiver: Option<Arc<Quiver>>,
    pub modules: Vec<RepModule>,
    pub members: Vec<RepModule>,
}

pub fn load(opts: &Opts) -> CliResult<Inputs> {
    let quiver = opts.quiver.as_deref().map(load_quiver).transpose()?;
    let modules = load_modules(&opts.modules, quiver.as_ref())?;
    let members = load_modules(&opts.semibrick, quiver.as_ref())?;
    if let Some(p) = opts.prime {
        if let Some(m) = modules.iter().chain(&members).find(|m| m.field().p() != p) {
            return Err(CliError::Usage(format!(
                "--prime {p} disagrees with a module over F_{}",
                m.field().p()
            )));
        }
    }
    Ok(Inputs {
        quiver,
        modules,
        members,
    })
}

impl Inputs {
    pub fn quiver(&self) -> CliResult<Arc<Quiver>> {
        if let Some(q) = &self.quiver {
            return Ok(q.clone());
        }
        self.modules
            .iter()
            .chain(&self.members)
            .next()
            .map(|m| m.quiver().clone())
            .ok_or_else(|| CliError::Usage("--quiver is required".into()))
    }

    pub fn modules(&self, n: usize, what: &str) -> CliResult<&[RepModule]> {
        if self.modules.len() != n {
            return Err(CliError::Usage(format!(
                "{what} needs exactly {n} --module argument{}, got {}",
                if n == 1 { "" } else { "s" },
                self.modules.len()
            )));
        }
        Ok(&self.modules)
    }

    /// Semibrick members from `--semibrick`, or from `--module` if none.
    pub fn members(&self) -> CliResult<Vec<RepModule>> {
        let v = if self.members.is_empty() {
            self.modules.clone()
        } else {
            self.members.clone()
        };
        if v.is_empty() {
            return Err(CliError::Usage("no semibrick members given".into()));
        }
        Ok(v)
    }
}

pub fn field(opts: &Opts, modules: &[RepModule]) -> CliResult<FieldSpec> {
    match (opts.prime, modules.first()) {
        (Some(p), _) => Ok(FieldSpec::new(p)?),
        (None, Some(m)) => Ok(m.field()),
        (None, None) => Ok(FieldSpec::default()),
    }
}

pub fn dims(opts: &Opts, q: &Quiver) -> CliResult<Vec<DimVector>> {
    opts.dims
        .iter()
        .map(|s| Ok(q.dim_vector(DimVector::parse_list(s)?.0)?))
        .collect()
}

pub fn one_dim(opts: &Opts, q: &Quiver) -> CliResult<DimVector> {
    let mut d = dims(opts, q)?;
    if d.len() != 1 {
        return Err(CliError::Usage("exactly one --dim is required".into()));
    }
    Ok(d.remove(0))
}

pub fn theta(opts: &Opts, q: &Quiver) -> CliResult<ThetaVector> {
    let s = opts
        .theta
        .as_deref()
        .ok_or_else(|| CliError::Usage("--theta is required".into()))?;
    Ok(q.theta_vector(ThetaVector::parse_list(s)?.0)?)
}

pub fn positive(value: Option<usize>, default: usize, flag: &str) -> CliResult<usize> {
    let v = value.unwrap_or(default);
    if v == 0 {
        return Err(CliError::Usage(format!("{flag} must be ≥ 1")));
    }
    Ok(v)
}
