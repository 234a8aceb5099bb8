//! Projective modules, presentation spaces `Hom(θ) = Hom(P¹_θ, P⁰_θ)`,
//! cokernels, θ-values and the torsion-free class `F̄_θ`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::field::FieldSpec;
use crate::homology::{ext1_dim, hom_dim, hom_space, is_brick, map_shapes, ModuleMap};
use crate::matrix::Matrix;
use crate::module::{direct_sum_all, RepModule};
use crate::quiver::{euler_pairing, iota_inverse, DimVector, Quiver, ThetaVector};
use crate::rng::{derive_seed, rng_for};

/// Exhaustive submodule enumeration is attempted only up to these bounds.
pub const EXHAUSTIVE_MAX_DIM: usize = 8;
pub const EXHAUSTIVE_MAX_PRIME: u64 = 3;

/// Paths starting at `i`, ordered by length and then by arrow indices.
fn paths_from(q: &Quiver, i: usize) -> Vec<(Vec<usize>, usize)> {
    let mut out = vec![(Vec::new(), i)];
    let mut frontier = vec![(Vec::new(), i)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (path, end) in &frontier {
            for (ai, a) in q.arrows().iter().enumerate() {
                if a.source == *end {
                    let mut p = path.clone();
                    p.push(ai);
                    next.push((p, a.target));
                }
            }
        }
        next.sort();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// The indecomposable projective `P_i`: basis the paths starting at `i`,
/// arrows acting by appending.
pub fn projective_module(q: &Arc<Quiver>, i: usize, field: FieldSpec) -> Result<RepModule> {
    q.require_path_algebra("projective modules require a path algebra")?;
    if i >= q.num_vertices() {
        return Err(CoreError::InvalidInput(format!(
            "vertex index {i} out of range"
        )));
    }
    let paths = paths_from(q, i);
    let mut by_vertex: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); q.num_vertices()];
    for (p, end) in &paths {
        by_vertex[*end].push(p);
    }
    let dim = DimVector(by_vertex.iter().map(Vec::len).collect());
    let mats = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let mut m = Matrix::zeros(dim.0[a.target], dim.0[a.source]);
            for (c, p) in by_vertex[a.source].iter().enumerate() {
                let mut ext = (*p).clone();
                ext.push(ai);
                let r = by_vertex[a.target]
                    .iter()
                    .position(|x| **x == ext)
                    .expect("extended path starts at i");
                m.set(r, c, 1);
            }
            m
        })
        .collect();
    RepModule::unconstrained(q.clone(), field, dim, mats)
}

/// `⊕_i P_i^{mult_i}` in vertex order.
fn projective_sum(q: &Arc<Quiver>, mult: &[usize], field: FieldSpec) -> Result<RepModule> {
    let mut parts = Vec::new();
    for (i, &k) in mult.iter().enumerate() {
        if k > 0 {
            let p = projective_module(q, i, field)?;
            parts.extend(std::iter::repeat_n(p, k));
        }
    }
    if parts.is_empty() {
        Ok(RepModule::zero(q.clone(), field))
    } else {
        direct_sum_all(&parts)
    }
}

#[derive(Clone, Debug)]
pub struct Presentation {
    pub theta: ThetaVector,
    /// `P⁰_θ`, built from the positive part of θ.
    pub p0: RepModule,
    /// `P¹_θ`, built from the negative part of θ.
    pub p1: RepModule,
    /// Module map `P¹_θ → P⁰_θ`.
    pub f: ModuleMap,
}

impl Presentation {
    pub fn is_injective(&self) -> bool {
        let field = self.p0.field();
        self.f
            .iter()
            .zip(&self.p1.dim().0)
            .all(|(m, &d)| m.rank(field) == d)
    }

    /// `f` as JSON, one matrix per vertex in declaration order.
    pub fn map_json(&self) -> serde_json::Value {
        let q = self.p0.quiver();
        let mut obj = serde_json::Map::new();
        for (v, m) in q.vertices().iter().zip(&self.f) {
            obj.insert(v.clone(), serde_json::to_value(m.to_rows()).unwrap());
        }
        serde_json::Value::Object(obj)
    }
}

/// Samples `f` uniformly from the coefficients of a basis of
/// `Hom(P¹_θ, P⁰_θ)`.
pub fn sample_presentation(
    q: &Arc<Quiver>,
    theta: &ThetaVector,
    field: FieldSpec,
    seed: u64,
) -> Result<Presentation> {
    q.require_path_algebra("presentations require a path algebra")?;
    if theta.0.len() != q.num_vertices() {
        return Err(CoreError::InvalidInput(format!(
            "theta has {} entries, quiver has {} vertices",
            theta.0.len(),
            q.num_vertices()
        )));
    }
    let p0 = projective_sum(q, &theta.positive_part(), field)?;
    let p1 = projective_sum(q, &theta.negative_part(), field)?;
    let hom = hom_space(&p1, &p0)?;
    let f = hom.random_element(&map_shapes(&p1, &p0), field, &mut rng_for(seed, &[0x9e5]));
    Ok(Presentation {
        theta: theta.clone(),
        p0,
        p1,
        f,
    })
}

pub fn is_injective(pres: &Presentation) -> bool {
    pres.is_injective()
}

/// `Coker f` with the projections `P⁰_θ → Coker f`.
pub fn cokernel_with_projection(pres: &Presentation) -> Result<(RepModule, ModuleMap)> {
    let field = pres.p0.field();
    let q = pres.p0.quiver().clone();
    let mut proj = Vec::with_capacity(q.num_vertices());
    let mut comp = Vec::with_capacity(q.num_vertices());
    for (fi, &n) in pres.f.iter().zip(&pres.p0.dim().0) {
        let img = fi.column_space(field);
        let r = img.cols();
        let mut aug = img.hstack(&Matrix::identity(n));
        let pivots = aug.rref(field);
        let extra: Vec<usize> = pivots.iter().filter(|&&c| c >= r).map(|c| c - r).collect();
        let e = Matrix::from_columns(
            n,
            &extra
                .iter()
                .map(|&j| (0..n).map(|k| u64::from(k == j)).collect())
                .collect::<Vec<_>>(),
        );
        let basis = img.hstack(&e);
        let inv = basis
            .inverse(field)
            .expect("image plus complement is a basis");
        proj.push(inv.row_range(r, n));
        comp.push(e);
    }
    let dim = DimVector(proj.iter().map(Matrix::rows).collect());
    let mats = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            proj[a.target]
                .mul(pres.p0.mat(ai), field)
                .mul(&comp[a.source], field)
        })
        .collect();
    let coker = RepModule::unconstrained(q, field, dim, mats)?;
    Ok((coker, proj))
}

pub fn cokernel(pres: &Presentation) -> Result<RepModule> {
    Ok(cokernel_with_projection(pres)?.0)
}

/// `θ(M) = ⟨θ, dimv M⟩`.
pub fn theta_value(theta: &ThetaVector, m: &RepModule) -> i64 {
    euler_pairing(theta, &m.dim().as_class())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FbarMode {
    #[default]
    Auto,
    Exhaustive,
    FastPath,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FbarRule {
    ZeroModule,
    Exhaustive,
    BrickFastPath,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubmoduleValue {
    pub dim: DimVector,
    pub theta: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FbarVerdict {
    pub member: bool,
    pub rule: FbarRule,
    /// Exhaustive mode: one entry per dimension vector realized by a
    /// submodule, in ascending order.
    pub submodules: Option<Vec<SubmoduleValue>>,
}

pub fn exhaustive_eligible(m: &RepModule) -> bool {
    m.total_dim() <= EXHAUSTIVE_MAX_DIM && m.field().p() <= EXHAUSTIVE_MAX_PRIME
}

/// Whether the brick criterion applies: `m` a brick with self-extensions
/// and `θ = ι⁻¹(dimv m)`.
pub fn fast_path_eligible(m: &RepModule, theta: &ThetaVector) -> Result<bool> {
    let q = m.quiver();
    if !q.is_path_algebra() || !is_brick(m) {
        return Ok(false);
    }
    Ok(iota_inverse(q, m.dim())? == *theta && ext1_dim(m, m)? >= 1)
}

/// Decides `m ∈ F̄_θ`, i.e. `θ(L) ≤ 0` for every submodule `L ⊆ m`.
pub fn in_fbar_theta_oracle(
    m: &RepModule,
    theta: &ThetaVector,
    mode: FbarMode,
) -> Result<FbarVerdict> {
    if theta.0.len() != m.dim().0.len() {
        return Err(CoreError::InvalidInput(
            "theta length differs from vertex count".into(),
        ));
    }
    if m.total_dim() == 0 {
        return Ok(FbarVerdict {
            member: true,
            rule: FbarRule::ZeroModule,
            submodules: Some(vec![SubmoduleValue {
                dim: m.dim().clone(),
                theta: 0,
            }]),
        });
    }
    let exhaustive = || {
        let subs: Vec<SubmoduleValue> = submodule_dim_vectors(m)
            .into_iter()
            .map(|d| SubmoduleValue {
                theta: euler_pairing(theta, &d.as_class()),
                dim: d,
            })
            .collect();
        FbarVerdict {
            member: subs.iter().all(|s| s.theta <= 0),
            rule: FbarRule::Exhaustive,
            submodules: Some(subs),
        }
    };
    let fast = FbarVerdict {
        member: true,
        rule: FbarRule::BrickFastPath,
        submodules: None,
    };
    match mode {
        FbarMode::Exhaustive if exhaustive_eligible(m) => Ok(exhaustive()),
        FbarMode::FastPath if fast_path_eligible(m, theta)? => Ok(fast),
        FbarMode::Auto if exhaustive_eligible(m) => Ok(exhaustive()),
        FbarMode::Auto if fast_path_eligible(m, theta)? => Ok(fast),
        _ => Err(CoreError::Infeasible(format!(
            "submodule enumeration needs total dim ≤ {EXHAUSTIVE_MAX_DIM} and p ≤ \
             {EXHAUSTIVE_MAX_PRIME}, and the brick criterion does not apply"
        ))),
    }
}

/// All `k`-dimensional subspaces of `F_p^n` as reduced row-echelon bases.
fn subspaces(n: usize, k: usize, p: u64) -> Vec<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(k);
    choose_pivots(n, k, 0, &mut pivots, p, &mut out);
    out
}

fn choose_pivots(
    n: usize,
    k: usize,
    start: usize,
    pivots: &mut Vec<usize>,
    p: u64,
    out: &mut Vec<Vec<Vec<u64>>>,
) {
    if pivots.len() == k {
        // free positions: (row r, column c) with c > pivot r and c not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let pv = pivots.clone();
                (pivots[r] + 1..n)
                    .filter(move |c| !pv.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let total = p.pow(free.len() as u32);
        for mut code in 0..total {
            let mut rows = vec![vec![0u64; n]; k];
            for (r, &c) in pivots.iter().enumerate() {
                rows[r][c] = 1;
            }
            for &(r, c) in &free {
                rows[r][c] = code % p;
                code /= p;
            }
            out.push(rows);
        }
        return;
    }
    for c in start..n {
        if n - c < k - pivots.len() {
            break;
        }
        pivots.push(c);
        choose_pivots(n, k, c + 1, pivots, p, out);
        pivots.pop();
    }
}

fn in_span(basis: &[Vec<u64>], v: &[u64], f: FieldSpec) -> bool {
    let mut w = v.to_vec();
    for row in basis {
        let c = row
            .iter()
            .position(|&x| x != 0)
            .expect("echelon rows are nonzero");
        let s = w[c];
        if s != 0 {
            for (x, &y) in w.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(s, y));
            }
        }
    }
    w.iter().all(|&x| x == 0)
}

/// Dimension vectors of all submodules, ascending by total dimension then
/// lexicographically.
pub fn submodule_dim_vectors(m: &RepModule) -> Vec<DimVector> {
    let d = &m.dim().0;
    let mut candidates: Vec<Vec<usize>> = vec![Vec::new()];
    for &n in d {
        candidates = candidates
            .into_iter()
            .flat_map(|c| {
                (0..=n).map(move |k| {
                    let mut c = c.clone();
                    c.push(k);
                    c
                })
            })
            .collect();
    }
    candidates.sort_by_key(|c| (c.iter().sum::<usize>(), c.clone()));
    candidates
        .into_iter()
        .filter(|e| has_submodule_of_dim(m, e))
        .map(DimVector)
        .collect()
}

fn has_submodule_of_dim(m: &RepModule, e: &[usize]) -> bool {
    let f = m.field();
    let spaces: Vec<Vec<Vec<Vec<u64>>>> = m
        .dim()
        .0
        .iter()
        .zip(e)
        .map(|(&n, &k)| subspaces(n, k, f.p()))
        .collect();
    let mut choice: Vec<Option<usize>> = vec![None; e.len()];
    search(m, &spaces, 0, &mut choice)
}

fn search(
    m: &RepModule,
    spaces: &[Vec<Vec<Vec<u64>>>],
    v: usize,
    choice: &mut Vec<Option<usize>>,
) -> bool {
    if v == spaces.len() {
        return true;
    }
    let f = m.field();
    let q = m.quiver();
    for idx in 0..spaces[v].len() {
        choice[v] = Some(idx);
        // check every arrow whose endpoints are both chosen and touch v
        let ok = q.arrows().iter().enumerate().all(|(ai, a)| {
            if a.source != v && a.target != v {
                return true;
            }
            let (Some(s), Some(t)) = (choice[a.source], choice[a.target]) else {
                return true;
            };
            let src = &spaces[a.source][s];
            let dst = &spaces[a.target][t];
            src.iter()
                .all(|u| in_span(dst, &m.mat(ai).mul_vec(u, f), f))
        });
        if ok && search(m, spaces, v + 1, choice) {
            choice[v] = None;
            return true;
        }
    }
    choice[v] = None;
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hypothesis {
    Verified,
    Failed,
    Assumed,
}

#[derive(Clone, Debug, Serialize)]
pub struct PerpStats {
    pub l: usize,
    pub trials: usize,
    pub injective: usize,
    pub perpendicular: usize,
}

#[derive(Clone, Debug)]
pub struct PerpWitness {
    pub l: usize,
    pub trial: usize,
    pub presentation: Presentation,
    pub cokernel: RepModule,
}

#[derive(Clone, Debug)]
pub struct PerpSearch {
    pub found: Option<PerpWitness>,
    pub stats: Vec<PerpStats>,
    pub hypothesis: Hypothesis,
    pub hypothesis_rule: Option<FbarRule>,
}

/// Searches `l = 1..=l_max` for an injective `f ∈ Hom(lθ)` with
/// `Hom(Coker f, M) = 0`.
pub fn fei_generic_perp_search(
    q: &Arc<Quiver>,
    theta: &ThetaVector,
    m: &RepModule,
    l_max: usize,
    trials: usize,
    seed: u64,
) -> Result<PerpSearch> {
    q.require_path_algebra("presentations require a path algebra")?;
    if trials == 0 {
        return Err(CoreError::InvalidInput("trials must be ≥ 1".into()));
    }
    if l_max == 0 {
        return Err(CoreError::InvalidInput("l_max must be ≥ 1".into()));
    }
    let (hypothesis, hypothesis_rule) = match in_fbar_theta_oracle(m, theta, FbarMode::Auto) {
        Ok(v) if v.member => (Hypothesis::Verified, Some(v.rule)),
        Ok(v) => (Hypothesis::Failed, Some(v.rule)),
        Err(CoreError::Infeasible(_)) => (Hypothesis::Assumed, None),
        Err(e) => return Err(e),
    };
    let field = m.field();
    let mut stats = Vec::new();
    for l in 1..=l_max {
        let lt = theta.scaled(l as i64);
        let outcomes = (0..trials)
            .into_par_iter()
            .map(|t| -> Result<(bool, Option<(Presentation, RepModule)>)> {
                let pres =
                    sample_presentation(q, &lt, field, derive_seed(seed, &[l as u64, t as u64]))?;
                if !pres.is_injective() {
                    return Ok((false, None));
                }
                let c = cokernel(&pres)?;
                let perp = hom_dim(&c, m)? == 0;
                Ok((true, perp.then_some((pres, c))))
            })
            .collect::<Result<Vec<_>>>()?;
        stats.push(PerpStats {
            l,
            trials,
            injective: outcomes.iter().filter(|o| o.0).count(),
            perpendicular: outcomes.iter().filter(|o| o.1.is_some()).count(),
        });
        if let Some((trial, (_, Some((presentation, cokernel))))) = outcomes
            .into_iter()
            .enumerate()
            .find(|(_, o)| o.1.is_some())
        {
            return Ok(PerpSearch {
                found: Some(PerpWitness {
                    l,
                    trial,
                    presentation,
                    cokernel,
                }),
                stats,
                hypothesis,
                hypothesis_rule,
            });
        }
    }
    Ok(PerpSearch {
        found: None,
        stats,
        hypothesis,
        hypothesis_rule,
    })
}
