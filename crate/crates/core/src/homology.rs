//! Exact Hom and Ext¹ between representations, and the predicates built on
//! them: bricks, semibricks, isomorphism, exceptional (open) bricks, orbit
//! dimensions and sampled generic Hom dimensions.
//!
//! `Hom(M, N)` is the kernel of the intertwiner map
//!
//! ```text
//! Φ : ⊕_i Hom(K^{d_i}, K^{c_i}) → ⊕_α Hom(K^{d_s(α)}, K^{c_t(α)}),
//!     f ↦ (f_t(α) φ^M_α − φ^N_α f_s(α))_α
//! ```
//!
//! and for path algebras `Ext¹(M, N)` is its cokernel.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::module::{random_module, RepModule};
use crate::quiver::{DimVector, Quiver};
use crate::rng::{derive_seed, rng_for};

/// Default number of random Hom combinations tried by [`is_isomorphic`].
pub const ISO_TRIALS: usize = 8;

/// A module map, one matrix `c_i x d_i` per vertex.
pub type ModuleMap = Vec<Matrix>;

#[derive(Clone, Debug)]
pub struct HomSpace {
    pub dim: usize,
    pub basis: Vec<ModuleMap>,
}

impl HomSpace {
    /// `Σ coeffs[k] · basis[k]`.
    pub fn combination(
        &self,
        coeffs: &[u64],
        shapes: &[(usize, usize)],
        f: FieldSpec,
    ) -> ModuleMap {
        let mut out: ModuleMap = shapes.iter().map(|&(r, c)| Matrix::zeros(r, c)).collect();
        for (b, &c) in self.basis.iter().zip(coeffs) {
            for (o, m) in out.iter_mut().zip(b) {
                o.add_scaled(c, m, f);
            }
        }
        out
    }

    pub fn random_element<R: Rng>(
        &self,
        shapes: &[(usize, usize)],
        f: FieldSpec,
        rng: &mut R,
    ) -> ModuleMap {
        let coeffs: Vec<u64> = (0..self.dim).map(|_| rng.gen_range(0..f.p())).collect();
        self.combination(&coeffs, shapes, f)
    }
}

fn var_offsets(m: &RepModule, n: &RepModule) -> Vec<usize> {
    let mut off = Vec::with_capacity(m.dim().0.len() + 1);
    let mut acc = 0;
    off.push(0);
    for (d, c) in m.dim().0.iter().zip(&n.dim().0) {
        acc += d * c;
        off.push(acc);
    }
    off
}

/// Shapes `(c_i, d_i)` of the vertex components of a map `M → N`.
pub fn map_shapes(m: &RepModule, n: &RepModule) -> Vec<(usize, usize)> {
    m.dim()
        .0
        .iter()
        .zip(&n.dim().0)
        .map(|(&d, &c)| (c, d))
        .collect()
}

/// The matrix of `Φ`, with unknowns `f_i[r][k]` ordered by vertex, then row,
/// then column.
pub fn intertwiner_matrix(m: &RepModule, n: &RepModule) -> Result<Matrix> {
    m.check_compatible(n)?;
    let f = m.field();
    let q = m.quiver();
    let (d, c) = (&m.dim().0, &n.dim().0);
    let off = var_offsets(m, n);
    let rows: usize = q.arrows().iter().map(|a| c[a.target] * d[a.source]).sum();
    let mut phi = Matrix::zeros(rows, off[d.len()]);
    let mut row0 = 0;
    for (ai, a) in q.arrows().iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let (pm, pn) = (m.mat(ai), n.mat(ai));
        for r in 0..c[t] {
            for k in 0..d[s] {
                let row = row0 + r * d[s] + k;
                // f_t φ^M : variable f_t[r][j] with coefficient φ^M[j][k]
                for j in 0..d[t] {
                    let col = off[t] + r * d[t] + j;
                    let v = f.add(phi.get(row, col), pm.get(j, k));
                    phi.set(row, col, v);
                }
                // − φ^N f_s : variable f_s[j][k] with coefficient −φ^N[r][j]
                for j in 0..c[s] {
                    let col = off[s] + j * d[s] + k;
                    let v = f.sub(phi.get(row, col), pn.get(r, j));
                    phi.set(row, col, v);
                }
            }
        }
        row0 += c[t] * d[s];
    }
    Ok(phi)
}

pub fn hom_space(m: &RepModule, n: &RepModule) -> Result<HomSpace> {
    let phi = intertwiner_matrix(m, n)?;
    let f = m.field();
    let off = var_offsets(m, n);
    let shapes = map_shapes(m, n);
    let basis: Vec<ModuleMap> = phi
        .kernel(f)
        .into_iter()
        .map(|v| {
            shapes
                .iter()
                .enumerate()
                .map(|(i, &(r, c))| Matrix::from_flat(r, c, v[off[i]..off[i + 1]].to_vec()))
                .collect()
        })
        .collect();
    Ok(HomSpace {
        dim: basis.len(),
        basis,
    })
}

pub fn hom_dim(m: &RepModule, n: &RepModule) -> Result<usize> {
    let phi = intertwiner_matrix(m, n)?;
    Ok(phi.cols() - phi.rank(m.field()))
}

/// `dim Ext¹(M, N) = dim coker Φ`, valid for path algebras only.
pub fn ext1_dim(m: &RepModule, n: &RepModule) -> Result<usize> {
    m.quiver()
        .require_path_algebra("Ext¹ implemented for path algebras only")?;
    let phi = intertwiner_matrix(m, n)?;
    Ok(phi.rows() - phi.rank(m.field()))
}

/// Checks `f_t(α) φ^M_α = φ^N_α f_s(α)` for every arrow.
pub fn is_module_map(m: &RepModule, n: &RepModule, map: &[Matrix]) -> bool {
    let f = m.field();
    m.quiver()
        .arrows()
        .iter()
        .enumerate()
        .all(|(ai, a)| map[a.target].mul(m.mat(ai), f) == n.mat(ai).mul(&map[a.source], f))
}

/// `End(M) ≅ K`.
pub fn is_brick(m: &RepModule) -> bool {
    hom_dim(m, m).map(|h| h == 1).unwrap_or(false)
}

/// `Σ d_i² − dim End(M)`.
pub fn orbit_dim(m: &RepModule) -> usize {
    let gl: usize = m.dim().0.iter().map(|d| d * d).sum();
    gl - hom_dim(m, m).expect("a module is compatible with itself")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SemibrickViolation {
    NotBrick {
        index: usize,
        end_dim: usize,
    },
    NonOrthogonal {
        from: usize,
        to: usize,
        hom_dim: usize,
    },
}

impl fmt::Display for SemibrickViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemibrickViolation::NotBrick { index, end_dim } => {
                write!(f, "member {index} is not a brick (dim End = {end_dim})")
            }
            SemibrickViolation::NonOrthogonal { from, to, hom_dim } => {
                write!(f, "dim Hom(member {from}, member {to}) = {hom_dim}")
            }
        }
    }
}

/// Bricks with vanishing Hom between distinct members.
#[derive(Clone, Debug)]
pub struct Semibrick {
    members: Vec<RepModule>,
    /// `certificate[i][j] = dim Hom(members[i], members[j])`.
    certificate: Vec<Vec<usize>>,
}

impl Semibrick {
    pub fn members(&self) -> &[RepModule] {
        &self.members
    }

    pub fn certificate(&self) -> &[Vec<usize>] {
        &self.certificate
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn quiver(&self) -> Option<&Arc<Quiver>> {
        self.members.first().map(|m| m.quiver())
    }

    pub fn into_members(self) -> Vec<RepModule> {
        self.members
    }
}

/// Verifies the semibrick conditions, reporting the first violation: a
/// non-brick member, else the first ordered pair with nonzero Hom.
pub fn is_semibrick(members: Vec<RepModule>) -> Result<Semibrick> {
    for w in members.windows(2) {
        w[0].check_compatible(&w[1])?;
    }
    let n = members.len();
    let mut cert = vec![vec![0; n]; n];
    for (i, m) in members.iter().enumerate() {
        let e = hom_dim(m, m)?;
        if e != 1 {
            return Err(CoreError::NotASemibrick(SemibrickViolation::NotBrick {
                index: i,
                end_dim: e,
            }));
        }
        cert[i][i] = 1;
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let h = hom_dim(&members[i], &members[j])?;
            if h != 0 {
                return Err(CoreError::NotASemibrick(
                    SemibrickViolation::NonOrthogonal {
                        from: i,
                        to: j,
                        hom_dim: h,
                    },
                ));
            }
        }
    }
    Ok(Semibrick {
        members,
        certificate: cert,
    })
}

/// Searches for an isomorphism `M → N` among `trials` random elements of
/// `Hom(M, N)`. A returned map is a verified, vertex-wise invertible
/// intertwiner; `None` means none was found.
pub fn find_isomorphism(
    m: &RepModule,
    n: &RepModule,
    trials: usize,
    seed: u64,
) -> Result<Option<ModuleMap>> {
    m.check_compatible(n)?;
    if m.dim() != n.dim() {
        return Ok(None);
    }
    let hom = hom_space(m, n)?;
    let shapes = map_shapes(m, n);
    let f = m.field();
    if m.total_dim() == 0 {
        return Ok(Some(
            shapes.iter().map(|&(r, c)| Matrix::zeros(r, c)).collect(),
        ));
    }
    if hom.dim == 0 {
        return Ok(None);
    }
    let mut rng = rng_for(seed, &[0x150]);
    for _ in 0..trials {
        let g = hom.random_element(&shapes, f, &mut rng);
        if g.iter().all(|x| x.is_invertible(f)) {
            debug_assert!(is_module_map(m, n, &g));
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// Randomized isomorphism test: `true` is certified by an explicit
/// invertible intertwiner, `false` may (rarely) miss one.
pub fn is_isomorphic(m: &RepModule, n: &RepModule, seed: u64) -> Result<bool> {
    Ok(find_isomorphism(m, n, ISO_TRIALS, seed)?.is_some())
}

/// A brick over a path algebra is open iff it is exceptional.
pub fn is_open_brick(b: &RepModule) -> Result<bool> {
    b.quiver()
        .require_path_algebra("open-brick detection requires path algebra")?;
    let e = hom_dim(b, b)?;
    if e != 1 {
        return Err(CoreError::NotABrick { end_dim: e });
    }
    Ok(ext1_dim(b, b)? == 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericHomDim {
    pub min: usize,
    pub attained: usize,
    pub samples: usize,
}

impl GenericHomDim {
    pub fn fraction(&self) -> f64 {
        self.attained as f64 / self.samples as f64
    }
}

/// Minimum of `dim Hom(M, N)` over `samples` independent random pairs
/// `(M, N) ∈ rep(Q, d) × rep(Q, e)`, with the number of samples attaining it.
pub fn generic_hom_dim(
    q: &Arc<Quiver>,
    d: &DimVector,
    e: &DimVector,
    field: FieldSpec,
    samples: usize,
    seed: u64,
) -> Result<GenericHomDim> {
    q.require_path_algebra("generic Hom dimension requires a path algebra")?;
    if samples == 0 {
        return Err(CoreError::InvalidInput("samples must be ≥ 1".into()));
    }
    let dims = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let m = random_module(q, d, field, derive_seed(seed, &[i, 0]))?;
            let n = random_module(q, e, field, derive_seed(seed, &[i, 1]))?;
            hom_dim(&m, &n)
        })
        .collect::<Result<Vec<_>>>()?;
    let min = *dims.iter().min().unwrap();
    Ok(GenericHomDim {
        min,
        attained: dims.iter().filter(|&&x| x == min).count(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::module::{direct_sum, random_basis_change};

    fn get(name: &str) -> RepModule {
        bundled::module(name).unwrap()
    }

    #[test]
    fn hom_examples() {
        let s1 = get("S1");
        assert_eq!(hom_dim(&s1, &s1).unwrap(), 1);
        assert_eq!(hom_dim(&get("R1"), &get("R2")).unwrap(), 0);
        assert_eq!(hom_dim(&get("P1"), &get("S1")).unwrap(), 1);
        assert_eq!(hom_dim(&get("S1"), &get("P1")).unwrap(), 0);
        assert_eq!(hom_dim(&get("S2"), &get("P1")).unwrap(), 1);
    }

    #[test]
    fn hom_basis_elements_are_module_maps() {
        let q = bundled::k3();
        let f = FieldSpec::new(5).unwrap();
        let m = random_module(&q, &DimVector(vec![1, 2]), f, 1).unwrap();
        assert!(
            direct_sum(&m, &get("K3-R")).is_err(),
            "field mismatch must be reported"
        );
        let n = random_module(&q, &DimVector(vec![2, 3]), f, 2).unwrap();
        let hom = hom_space(&m, &n).unwrap();
        assert!(hom.basis.iter().all(|g| is_module_map(&m, &n, g)));
    }

    #[test]
    fn ext_examples() {
        let (s1, s2) = (get("S1"), get("S2"));
        assert_eq!(ext1_dim(&s1, &s2).unwrap(), 1);
        assert_eq!(ext1_dim(&s2, &s1).unwrap(), 0);
        assert_eq!(ext1_dim(&get("R1"), &get("R1")).unwrap(), 1);
        assert_eq!(ext1_dim(&get("P1"), &s1).unwrap(), 0);
        assert_eq!(ext1_dim(&get("K2-P1"), &get("R1")).unwrap(), 0);
    }

    #[test]
    fn ext_rejects_relations() {
        let m = get("loop-nil");
        let err = ext1_dim(&m, &m).unwrap_err();
        assert_eq!(err.to_string(), "Ext¹ implemented for path algebras only");
        // End is still computable with relations
        assert_eq!(hom_dim(&m, &m).unwrap(), 2);
    }

    #[test]
    fn semibrick_examples() {
        let sb = is_semibrick(vec![get("S1"), get("S2")]).unwrap();
        assert_eq!(sb.certificate(), &[vec![1, 0], vec![0, 1]]);
        match is_semibrick(vec![get("P1"), get("S1")]) {
            Err(CoreError::NotASemibrick(v)) => assert_eq!(
                v,
                SemibrickViolation::NonOrthogonal {
                    from: 0,
                    to: 1,
                    hom_dim: 1
                }
            ),
            other => panic!("unexpected {other:?}"),
        }
        let sum = direct_sum(&get("S1"), &get("S2")).unwrap();
        assert!(matches!(
            is_semibrick(vec![sum]),
            Err(CoreError::NotASemibrick(SemibrickViolation::NotBrick {
                index: 0,
                end_dim: 2
            }))
        ));
    }

    #[test]
    fn isomorphism_examples() {
        let r1 = get("R1");
        assert!(is_isomorphic(&r1, &random_basis_change(&r1, 3), 0).unwrap());
        assert!(!is_isomorphic(&r1, &get("R2"), 0).unwrap());
        let sum = direct_sum(&get("S1"), &get("S2")).unwrap();
        assert!(!is_isomorphic(&sum, &get("P1"), 0).unwrap());
        let p = random_basis_change(&get("P1"), 9);
        let g = find_isomorphism(&get("P1"), &p, 8, 1).unwrap().unwrap();
        assert!(is_module_map(&get("P1"), &p, &g));
    }

    #[test]
    fn open_brick_examples() {
        assert!(is_open_brick(&get("K2-P1")).unwrap());
        assert!(!is_open_brick(&get("R1")).unwrap());
        assert!(matches!(
            is_open_brick(&get("loop-nil")),
            Err(CoreError::Scope(_))
        ));
        let sum = direct_sum(&get("S1"), &get("S2")).unwrap();
        assert!(matches!(
            is_open_brick(&sum),
            Err(CoreError::NotABrick { end_dim: 2 })
        ));
    }

    #[test]
    fn orbit_dimension_of_bricks() {
        let p1 = get("K2-P1");
        assert_eq!(orbit_dim(&p1), 1 + 4 - 1);
        let r = get("R1");
        assert_eq!(orbit_dim(&r), 1);
    }

    #[test]
    fn generic_hom_examples() {
        let f = FieldSpec::default();
        let v = |x: &[usize]| DimVector(x.to_vec());
        let g = generic_hom_dim(&bundled::k2(), &v(&[1, 1]), &v(&[1, 1]), f, 20, 4).unwrap();
        assert_eq!(g.min, 0);
        let g = generic_hom_dim(&bundled::a2(), &v(&[1, 1]), &v(&[1, 1]), f, 20, 4).unwrap();
        assert_eq!(g.min, 1);
        assert!(generic_hom_dim(&bundled::a2(), &v(&[1, 1]), &v(&[1, 1]), f, 0, 4).is_err());
    }
}
