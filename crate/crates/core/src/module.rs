//! Points of representation varieties: one matrix per arrow over `F_p`.
//!
//! The matrix of an arrow `α` has shape `d_{t(α)} x d_{s(α)}`. The group
//! `GL(d)` acts by `g·M = (g_{t(α)} φ_α g_{s(α)}^{-1})_α`.

use std::sync::Arc;

use rand::Rng;
use serde_json::{json, Map, Value};

use crate::error::{CoreError, Result};
use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::quiver::{DimVector, Quiver};
use crate::rng::{counter_uniform, rng_for};

#[derive(Clone, Debug)]
pub struct RepModule {
    quiver: Arc<Quiver>,
    field: FieldSpec,
    dim: DimVector,
    mats: Vec<Matrix>,
}

impl PartialEq for RepModule {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.dim == other.dim
            && self.mats == other.mats
            && (Arc::ptr_eq(&self.quiver, &other.quiver) || *self.quiver == *other.quiver)
    }
}

impl Eq for RepModule {}

impl RepModule {
    /// A point of `rep(Q, d)`; relations of the quiver are not checked.
    pub fn unconstrained(
        quiver: Arc<Quiver>,
        field: FieldSpec,
        dim: DimVector,
        mats: Vec<Matrix>,
    ) -> Result<Self> {
        if dim.0.len() != quiver.num_vertices() {
            return Err(CoreError::InvalidInput(
                "dimension vector does not match the quiver".into(),
            ));
        }
        if mats.len() != quiver.num_arrows() {
            return Err(CoreError::InvalidInput(format!(
                "expected {} arrow matrices, got {}",
                quiver.num_arrows(),
                mats.len()
            )));
        }
        for (a, m) in quiver.arrows().iter().zip(&mats) {
            let want = (dim.0[a.target], dim.0[a.source]);
            if (m.rows(), m.cols()) != want {
                return Err(CoreError::InvalidInput(format!(
                    "matrix for arrow {} has shape {}x{}, expected {}x{}",
                    a.id,
                    m.rows(),
                    m.cols(),
                    want.0,
                    want.1
                )));
            }
            if m.to_rows().iter().flatten().any(|&x| x >= field.p()) {
                return Err(CoreError::InvalidInput(format!(
                    "matrix for arrow {} has entries outside [0, {})",
                    a.id,
                    field.p()
                )));
            }
        }
        Ok(RepModule {
            quiver,
            field,
            dim,
            mats,
        })
    }

    /// A module over `KQ/I`: shapes are validated and relations must hold.
    pub fn new(
        quiver: Arc<Quiver>,
        field: FieldSpec,
        dim: DimVector,
        mats: Vec<Matrix>,
    ) -> Result<Self> {
        let m = RepModule::unconstrained(quiver, field, dim, mats)?;
        if !m.check_relations() {
            return Err(CoreError::InvalidInput(
                "module does not satisfy the quiver relations".into(),
            ));
        }
        Ok(m)
    }

    pub fn zero(quiver: Arc<Quiver>, field: FieldSpec) -> Self {
        let n = quiver.num_vertices();
        let mats = quiver
            .arrows()
            .iter()
            .map(|_| Matrix::zeros(0, 0))
            .collect();
        RepModule {
            quiver,
            field,
            dim: DimVector(vec![0; n]),
            mats,
        }
    }

    /// The simple module `S_i`: one-dimensional at `i`, all arrows zero.
    pub fn simple(quiver: Arc<Quiver>, field: FieldSpec, i: usize) -> Self {
        let mut d = vec![0; quiver.num_vertices()];
        d[i] = 1;
        let mats = quiver
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(d[a.target], d[a.source]))
            .collect();
        RepModule {
            quiver,
            field,
            dim: DimVector(d),
            mats,
        }
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> &DimVector {
        &self.dim
    }

    pub fn mats(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn mat(&self, arrow: usize) -> &Matrix {
        &self.mats[arrow]
    }

    pub fn total_dim(&self) -> usize {
        self.dim.total()
    }

    pub(crate) fn check_compatible(&self, other: &RepModule) -> Result<()> {
        if self.field != other.field {
            return Err(CoreError::Mismatch(format!(
                "fields differ: F_{} vs F_{}",
                self.field.p(),
                other.field.p()
            )));
        }
        if !Arc::ptr_eq(&self.quiver, &other.quiver) && *self.quiver != *other.quiver {
            return Err(CoreError::Mismatch(
                "modules live on different quivers".into(),
            ));
        }
        Ok(())
    }

    /// Matrix of a path read left to right: `a b` acts as `φ_b φ_a`.
    pub fn path_matrix(&self, path: &[usize]) -> Matrix {
        let f = self.field;
        let start = self.quiver.arrows()[path[0]].source;
        let mut acc = Matrix::identity(self.dim.0[start]);
        for &a in path {
            acc = self.mats[a].mul(&acc, f);
        }
        acc
    }

    /// True iff every relation evaluates to the zero matrix.
    pub fn check_relations(&self) -> bool {
        let f = self.field;
        self.quiver.relations().iter().all(|rel| {
            let (first_c, first_path) = &rel.terms[0];
            let mut sum = self.path_matrix(first_path).scale(f.from_i64(*first_c), f);
            for (c, path) in &rel.terms[1..] {
                sum.add_scaled(f.from_i64(*c), &self.path_matrix(path), f);
            }
            sum.is_zero()
        })
    }

    /// `g·M` for vertex-wise invertible `g`; `g_inv` must hold the inverses.
    pub fn act(&self, g: &[Matrix], g_inv: &[Matrix]) -> RepModule {
        let f = self.field;
        let mats = self
            .quiver
            .arrows()
            .iter()
            .zip(&self.mats)
            .map(|(a, m)| g[a.target].mul(m, f).mul(&g_inv[a.source], f))
            .collect();
        RepModule {
            quiver: self.quiver.clone(),
            field: f,
            dim: self.dim.clone(),
            mats,
        }
    }

    /// Serializes to the module document schema.
    pub fn to_json(&self) -> Value {
        let q = &self.quiver;
        let quiver = match q.name() {
            Some(n) => Value::String(n.to_string()),
            None => Value::String(q.to_text()),
        };
        let mut dim = Map::new();
        for (v, &d) in q.vertices().iter().zip(&self.dim.0) {
            dim.insert(v.clone(), json!(d));
        }
        let mut mats = Map::new();
        for (a, m) in q.arrows().iter().zip(&self.mats) {
            mats.insert(a.id.clone(), json!(m.to_rows()));
        }
        json!({
            "quiver": quiver,
            "p": self.field.p(),
            "dim": dim,
            "mats": mats,
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).unwrap()
    }

    /// Reads a module document. When `quiver` is `None`, the document's
    /// `quiver` field is resolved as inline quiver text or a bundled name.
    pub fn from_json_str(text: &str, quiver: Option<Arc<Quiver>>) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        RepModule::from_json(&v, quiver)
    }

    pub fn from_json(v: &Value, quiver: Option<Arc<Quiver>>) -> Result<Self> {
        let bad = |m: &str| CoreError::InvalidInput(format!("module document: {m}"));
        let obj = v.as_object().ok_or_else(|| bad("expected a JSON object"))?;
        let quiver = match quiver {
            Some(q) => q,
            None => {
                let spec = obj
                    .get("quiver")
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad("missing 'quiver'"))?;
                resolve_quiver(spec)?
            }
        };
        let p = obj
            .get("p")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing integer 'p'"))?;
        let field = FieldSpec::new(p)?;
        let dim_obj = obj
            .get("dim")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing 'dim' object"))?;
        let mut dim = Vec::with_capacity(quiver.num_vertices());
        for vtx in quiver.vertices() {
            let d = dim_obj
                .get(vtx)
                .and_then(Value::as_u64)
                .ok_or_else(|| bad(&format!("missing dimension for vertex '{vtx}'")))?;
            dim.push(d as usize);
        }
        if dim_obj.len() != quiver.num_vertices() {
            return Err(bad("'dim' names vertices not in the quiver"));
        }
        let mats_obj = obj
            .get("mats")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing 'mats' object"))?;
        if mats_obj.len() != quiver.num_arrows() {
            return Err(bad("'mats' does not list exactly the quiver's arrows"));
        }
        let mut mats = Vec::with_capacity(quiver.num_arrows());
        for a in quiver.arrows() {
            let rows_v = mats_obj
                .get(&a.id)
                .and_then(Value::as_array)
                .ok_or_else(|| bad(&format!("missing matrix for arrow '{}'", a.id)))?;
            let (r, c) = (dim[a.target], dim[a.source]);
            if rows_v.len() != r {
                return Err(bad(&format!("arrow '{}' needs {r} rows", a.id)));
            }
            let mut rows = Vec::with_capacity(r);
            for row in rows_v {
                let row = row
                    .as_array()
                    .ok_or_else(|| bad("matrix rows must be arrays"))?;
                if row.len() != c {
                    return Err(bad(&format!("arrow '{}' needs {c} columns", a.id)));
                }
                let row = row
                    .iter()
                    .map(|x| {
                        x.as_u64()
                            .filter(|&x| x < p)
                            .ok_or_else(|| bad("entries must be integers in [0, p)"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                rows.push(row);
            }
            mats.push(Matrix::from_rows(r, c, rows));
        }
        RepModule::new(quiver, field, DimVector(dim), mats)
    }
}

fn resolve_quiver(spec: &str) -> Result<Arc<Quiver>> {
    if spec.contains("vertices:") {
        return Ok(Arc::new(Quiver::parse(spec)?));
    }
    crate::bundled::quiver(spec)
        .ok_or_else(|| CoreError::InvalidInput(format!("unknown quiver '{spec}'")))
}

/// Uniform point of `rep(Q, d)`. Entry `k` of arrow `a` is a pure function
/// of `(seed, a, k)`.
pub fn random_module(
    quiver: &Arc<Quiver>,
    d: &DimVector,
    field: FieldSpec,
    seed: u64,
) -> Result<RepModule> {
    if !quiver.relations().is_empty() {
        return Err(CoreError::Scope("sampling requires path algebra"));
    }
    let mats = quiver
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let (r, c) = (d.0[a.target], d.0[a.source]);
            let data = (0..r * c)
                .map(|k| counter_uniform(seed, ai as u64, k as u64, field.p()))
                .collect();
            Matrix::from_flat(r, c, data)
        })
        .collect();
    RepModule::unconstrained(quiver.clone(), field, d.clone(), mats)
}

pub fn random_invertible<R: Rng>(n: usize, field: FieldSpec, rng: &mut R) -> (Matrix, Matrix) {
    loop {
        let data = (0..n * n).map(|_| rng.gen_range(0..field.p())).collect();
        let g = Matrix::from_flat(n, n, data);
        if let Some(inv) = g.inverse(field) {
            return (g, inv);
        }
    }
}

/// Block-diagonal direct sum `M ⊕ N`.
pub fn direct_sum(m: &RepModule, n: &RepModule) -> Result<RepModule> {
    m.check_compatible(n)?;
    let mats = m
        .mats
        .iter()
        .zip(&n.mats)
        .map(|(a, b)| Matrix::block_diag(&[a, b]))
        .collect();
    Ok(RepModule {
        quiver: m.quiver.clone(),
        field: m.field,
        dim: m.dim.plus(&n.dim),
        mats,
    })
}

pub fn direct_sum_all(parts: &[RepModule]) -> Result<RepModule> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| CoreError::InvalidInput("empty direct sum".into()))?;
    rest.iter()
        .try_fold(first.clone(), |acc, x| direct_sum(&acc, x))
}

/// Random element of the orbit of `m`, together with the group element used.
pub fn random_basis_change_with(m: &RepModule, seed: u64) -> (RepModule, Vec<Matrix>) {
    let (g, g_inv): (Vec<_>, Vec<_>) = m
        .dim
        .0
        .iter()
        .enumerate()
        .map(|(i, &n)| random_invertible(n, m.field, &mut rng_for(seed, &[i as u64])))
        .unzip();
    (m.act(&g, &g_inv), g)
}

pub fn random_basis_change(m: &RepModule, seed: u64) -> RepModule {
    random_basis_change_with(m, seed).0
}
