//! Randomized semibrick extension.
//!
//! Given a semibrick `S` and a member `B`, modules `X ∈ rep(Q, l·dimv B)`
//! are sampled for `l = 1, 2, ...` and the first brick that is
//! Hom-orthogonal in both directions to every member of `S` is returned.
//! A non-exceptional `B` guarantees that such an `X` exists for some `l`;
//! no bound on `l` is known, so exhaustion is inconclusive.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::decompose::SchurVerdict;
use crate::error::{CoreError, Result};
use crate::homology::{hom_dim, hom_space, is_open_brick, is_semibrick, Semibrick};
use crate::module::{random_module, RepModule};
use crate::quiver::{quadratic_form, DimVector, Quiver};
use crate::rng::derive_seed;

pub const DEFAULT_LMAX: usize = 6;
pub const DEFAULT_EXTEND_TRIALS: usize = 40;
pub const HYPOTHESIS_WARNING: &str = "theorem hypothesis unmet — extension not guaranteed";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionChecks {
    pub end_dim: usize,
    /// `dim Hom(B′, X)` for each member `X`.
    pub hom_to: Vec<usize>,
    /// `dim Hom(X, B′)` for each member `X`.
    pub hom_from: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionCertificate {
    pub module: RepModule,
    pub l: usize,
    /// Seed of the search that produced the certificate.
    pub seed: u64,
    pub trial: usize,
    /// Seed from which `module` is regenerated.
    pub sample_seed: u64,
    pub checks: ExtensionChecks,
}

impl ExtensionCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "l": self.l,
            "seed": self.seed,
            "trial": self.trial,
            "sample_seed": self.sample_seed,
            "module": self.module.to_json(),
            "checks": self.checks,
        })
    }
}

fn checks_for(x: &RepModule, members: &[RepModule]) -> Result<ExtensionChecks> {
    Ok(ExtensionChecks {
        end_dim: hom_space(x, x)?.dim,
        hom_to: members
            .iter()
            .map(|m| hom_dim(x, m))
            .collect::<Result<_>>()?,
        hom_from: members
            .iter()
            .map(|m| hom_dim(m, x))
            .collect::<Result<_>>()?,
    })
}

impl ExtensionChecks {
    pub fn accepted(&self) -> bool {
        self.end_dim == 1 && self.hom_to.iter().chain(&self.hom_from).all(|&h| h == 0)
    }
}

/// Recomputes every condition of the certificate from scratch: the module
/// regenerates from its seed, has dimension `l · dimv B`, is a brick and is
/// orthogonal to all members, and the recorded checks match.
pub fn verify_certificate(s: &Semibrick, b: usize, cert: &ExtensionCertificate) -> Result<bool> {
    let base = s
        .members()
        .get(b)
        .ok_or_else(|| CoreError::InvalidInput(format!("member index {b} out of range")))?;
    let q = base.quiver();
    let d = base.dim().scaled(cert.l);
    if cert.module.dim() != &d {
        return Ok(false);
    }
    if random_module(q, &d, base.field(), cert.sample_seed)? != cert.module {
        return Ok(false);
    }
    let checks = checks_for(&cert.module, s.members())?;
    Ok(checks.accepted() && checks == cert.checks)
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelStats {
    pub l: usize,
    pub trials: usize,
    pub bricks: usize,
    pub accepted: usize,
}

#[derive(Clone, Debug)]
pub struct ExtensionOutcome {
    pub certificate: Option<ExtensionCertificate>,
    pub stats: Vec<LevelStats>,
    pub base_dim: DimVector,
    pub root_type: SchurVerdict,
    pub base_exceptional: bool,
    pub warning: Option<&'static str>,
    pub l_max: usize,
    pub trials: usize,
}

fn root_type(q: &Quiver, d: &DimVector) -> SchurVerdict {
    match quadratic_form(q, d) {
        1 => SchurVerdict::Real,
        0 => SchurVerdict::Tame,
        v if v < 0 => SchurVerdict::Wild,
        _ => SchurVerdict::ProbablyNotSchur,
    }
}

fn sample_seed(seed: u64, l: usize, t: usize) -> u64 {
    derive_seed(seed, &[l as u64, t as u64])
}

/// Searches for a brick `B′` with `dimv B′ ∈ ℤ≥1 · dimv B` such that
/// `S ⊔ {B′}` is a semibrick. Trials run in parallel; the accepted module is
/// the one with the smallest `(l, trial)`.
pub fn extend_semibrick(
    s: &Semibrick,
    b: usize,
    l_max: usize,
    trials: usize,
    seed: u64,
) -> Result<ExtensionOutcome> {
    let base = s
        .members()
        .get(b)
        .ok_or_else(|| CoreError::InvalidInput(format!("member index {b} out of range")))?;
    let q: Arc<Quiver> = base.quiver().clone();
    q.require_path_algebra("semibrick extension requires a path algebra")?;
    if trials == 0 {
        return Err(CoreError::InvalidInput("trials must be ≥ 1".into()));
    }
    if l_max == 0 {
        return Err(CoreError::InvalidInput("l_max must be ≥ 1".into()));
    }
    let d = base.dim().clone();
    let exceptional = is_open_brick(base)?;
    let field = base.field();
    let mut stats = Vec::new();
    let mut certificate = None;
    for l in 1..=l_max {
        let ld = d.scaled(l);
        let evaluated = (0..trials)
            .into_par_iter()
            .map(|t| -> Result<(RepModule, ExtensionChecks)> {
                let x = random_module(&q, &ld, field, sample_seed(seed, l, t))?;
                let end_dim = hom_space(&x, &x)?.dim;
                if end_dim != 1 {
                    let checks = ExtensionChecks {
                        end_dim,
                        hom_to: Vec::new(),
                        hom_from: Vec::new(),
                    };
                    return Ok((x, checks));
                }
                let checks = checks_for(&x, s.members())?;
                Ok((x, checks))
            })
            .collect::<Result<Vec<_>>>()?;
        stats.push(LevelStats {
            l,
            trials,
            bricks: evaluated.iter().filter(|(_, c)| c.end_dim == 1).count(),
            accepted: evaluated.iter().filter(|(_, c)| c.accepted()).count(),
        });
        if let Some((t, (module, checks))) = evaluated
            .into_iter()
            .enumerate()
            .find(|(_, (_, c))| c.accepted())
        {
            certificate = Some(ExtensionCertificate {
                module,
                l,
                seed,
                trial: t,
                sample_seed: sample_seed(seed, l, t),
                checks,
            });
            break;
        }
    }
    Ok(ExtensionOutcome {
        certificate,
        stats,
        root_type: root_type(&q, &d),
        base_dim: d,
        base_exceptional: exceptional,
        warning: exceptional.then_some(HYPOTHESIS_WARNING),
        l_max,
        trials,
    })
}

#[derive(Clone, Debug)]
pub struct GrowOutcome {
    pub semibrick: Semibrick,
    pub certificates: Vec<ExtensionCertificate>,
    pub partial: bool,
    /// Stats of the round that exhausted its budget, if any.
    pub exhausted_stats: Option<Vec<LevelStats>>,
    pub warning: Option<&'static str>,
}

/// Extends `s` repeatedly through member `b` until it has `target` members
/// or a round exhausts its budget.
pub fn grow_semibrick(
    s: &Semibrick,
    b: usize,
    target: usize,
    l_max: usize,
    trials: usize,
    seed: u64,
) -> Result<GrowOutcome> {
    if b >= s.len() {
        return Err(CoreError::InvalidInput(format!(
            "member index {b} out of range"
        )));
    }
    let mut current = s.clone();
    let mut certificates = Vec::new();
    let mut warning = None;
    let mut round = 0u64;
    while current.len() < target {
        let out = extend_semibrick(&current, b, l_max, trials, derive_seed(seed, &[round]))?;
        warning = warning.or(out.warning);
        round += 1;
        match out.certificate {
            Some(cert) => {
                let mut members = current.members().to_vec();
                members.push(cert.module.clone());
                current = is_semibrick(members).map_err(|e| {
                    CoreError::Inconsistent(format!("accepted extension broke the semibrick: {e}"))
                })?;
                certificates.push(cert);
            }
            None => {
                return Ok(GrowOutcome {
                    semibrick: current,
                    certificates,
                    partial: true,
                    exhausted_stats: Some(out.stats),
                    warning,
                })
            }
        }
    }
    Ok(GrowOutcome {
        semibrick: current,
        certificates,
        partial: false,
        exhausted_stats: None,
        warning,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProbeVerdict {
    #[serde(rename = "not-maximal")]
    NotMaximal,
    #[serde(rename = "maximal within budget, consistent")]
    ConsistentMaximal,
    #[serde(rename = "THEOREM-VIOLATION-SUSPECTED")]
    ViolationSuspected,
}

#[derive(Clone, Debug)]
pub struct ProbeHit {
    pub dim: DimVector,
    pub trial: usize,
    pub module: RepModule,
    /// Number of accepted candidates among the trials for this dimension.
    pub count: usize,
}

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub verdict: ProbeVerdict,
    pub extensions: Vec<ProbeHit>,
    /// Exceptional (open) flag of each member.
    pub members_open: Vec<bool>,
    pub trials: usize,
}

/// Samples `trials` candidates per dimension vector in `pool` and reports
/// every dimension where `S` can be enlarged. A failure to extend while
/// some member is non-exceptional contradicts the theory and is flagged.
pub fn maximality_probe(
    s: &Semibrick,
    pool: &[DimVector],
    trials: usize,
    seed: u64,
) -> Result<ProbeReport> {
    let q = s
        .quiver()
        .ok_or_else(|| CoreError::InvalidInput("empty semibrick".into()))?
        .clone();
    q.require_path_algebra("maximality probing requires a path algebra")?;
    if pool.is_empty() {
        return Err(CoreError::InvalidInput("dimension pool is empty".into()));
    }
    if trials == 0 {
        return Err(CoreError::InvalidInput("trials must be ≥ 1".into()));
    }
    let field = s.members()[0].field();
    let members_open = s
        .members()
        .iter()
        .map(is_open_brick)
        .collect::<Result<Vec<_>>>()?;
    let mut extensions = Vec::new();
    for (di, d) in pool.iter().enumerate() {
        if d.0.len() != q.num_vertices() {
            return Err(CoreError::InvalidInput(format!(
                "dimension vector {d} has the wrong length"
            )));
        }
        if d.is_zero() {
            continue;
        }
        let hits = (0..trials)
            .into_par_iter()
            .map(|t| -> Result<Option<RepModule>> {
                let x = random_module(&q, d, field, derive_seed(seed, &[di as u64, t as u64]))?;
                if hom_space(&x, &x)?.dim != 1 {
                    return Ok(None);
                }
                Ok(checks_for(&x, s.members())?.accepted().then_some(x))
            })
            .collect::<Result<Vec<_>>>()?;
        let count = hits.iter().filter(|h| h.is_some()).count();
        if let Some((trial, Some(module))) = hits.into_iter().enumerate().find(|(_, h)| h.is_some())
        {
            extensions.push(ProbeHit {
                dim: d.clone(),
                trial,
                module,
                count,
            });
        }
    }
    let verdict = if !extensions.is_empty() {
        ProbeVerdict::NotMaximal
    } else if members_open.iter().all(|&o| o) {
        ProbeVerdict::ConsistentMaximal
    } else {
        ProbeVerdict::ViolationSuspected
    };
    Ok(ProbeReport {
        verdict,
        extensions,
        members_open,
        trials,
    })
}
