//! Krull–Schmidt decomposition of sampled modules, canonical decomposition
//! of dimension vectors and Schur-root classification.
//!
//! A module is split with a random endomorphism `φ`: if the characteristic
//! polynomial of `φ` has two distinct irreducible factors, the generalized
//! eigenspace of one of them and its Fitting complement are submodules, and
//! `M = ker g(φ)^e ⊕ im g(φ)^e`. A module whose random endomorphisms never
//! split it in `trials` attempts is declared indecomposable.
//!
//! Over `F_p` an indecomposable `X` can have `End(X)/rad ≅ F_{p^k}` with
//! `k > 1`; over the algebraic closure it then splits into `k` Galois
//! conjugate summands of dimension `dimv X / k`. The degree `k` is read off
//! the irreducible factors seen during the failed splitting attempts.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::field::{FieldSpec, DEFAULT_PRIME};
use crate::homology::{hom_space, is_brick, is_isomorphic, map_shapes};
use crate::matrix::Matrix;
use crate::module::{random_module, RepModule};
use crate::poly::{charpoly, factor, Poly};
use crate::quiver::{quadratic_form, DimVector, Quiver};
use crate::rng::{derive_seed, rng_for};

pub const DEFAULT_INDEC_TRIALS: usize = 24;
pub const DEFAULT_CANON_SAMPLES: usize = 7;
pub const DEFAULT_SCHUR_TRIALS: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Indecomposability {
    /// `End = K`, hence indecomposable with certainty.
    Brick,
    /// No splitting endomorphism found in `trials` random draws.
    Randomized { trials: usize },
}

#[derive(Clone, Debug)]
pub struct Summand {
    pub module: RepModule,
    pub multiplicity: usize,
    /// `k` with `End/rad ≅ F_{p^k}`; 1 when absolutely indecomposable.
    pub splitting_degree: usize,
    pub certainty: Indecomposability,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Indecomposable blocks in the order they appear in the witness.
    pub blocks: Vec<RepModule>,
    /// Isomorphism class of each block, indexing `summands`.
    pub block_class: Vec<usize>,
    pub summands: Vec<Summand>,
    /// `g` with `g·M = blocks[0] ⊕ blocks[1] ⊕ ...`.
    pub basis_change: Vec<Matrix>,
    pub basis_change_inv: Vec<Matrix>,
}

impl Decomposition {
    /// Re-checks the witness exactly: `g` is invertible with the stored
    /// inverse and conjugates `m` into the block-diagonal sum of the blocks.
    pub fn verify(&self, m: &RepModule) -> bool {
        let f = m.field();
        let inverse_ok = self
            .basis_change
            .iter()
            .zip(&self.basis_change_inv)
            .all(|(g, h)| g.mul(h, f) == Matrix::identity(g.rows()));
        if !inverse_ok {
            return false;
        }
        let conj = m.act(&self.basis_change, &self.basis_change_inv);
        if self.blocks.is_empty() {
            return m.total_dim() == 0;
        }
        match crate::module::direct_sum_all(&self.blocks) {
            Ok(sum) => sum == conj,
            Err(_) => false,
        }
    }

    /// Sorted dimension vectors of the blocks over `F_p`.
    pub fn dim_vectors(&self) -> Vec<DimVector> {
        let mut v: Vec<DimVector> = self.blocks.iter().map(|b| b.dim().clone()).collect();
        v.sort();
        v
    }

    /// Sorted dimension vectors of the indecomposable summands after
    /// extending scalars to the algebraic closure.
    pub fn geometric_dim_vectors(&self) -> Vec<DimVector> {
        let mut v = Vec::new();
        for (b, &c) in self.blocks.iter().zip(&self.block_class) {
            let k = self.summands[c].splitting_degree;
            let d = &b.dim().0;
            if k > 1 && d.iter().all(|x| x % k == 0) {
                let part = DimVector(d.iter().map(|x| x / k).collect());
                v.extend(std::iter::repeat_n(part, k));
            } else {
                v.push(b.dim().clone());
            }
        }
        v.sort();
        v
    }
}

enum Attempt {
    Split {
        /// Columns: basis of the first summand, then of the second.
        t: Vec<Matrix>,
        left: Vec<usize>,
    },
    Indecomposable {
        degree: usize,
        certainty: Indecomposability,
    },
}

fn try_split<R: Rng>(x: &RepModule, trials: usize, rng: &mut R) -> Result<Attempt> {
    let f = x.field();
    let end = hom_space(x, x)?;
    if end.dim == 1 {
        return Ok(Attempt::Indecomposable {
            degree: 1,
            certainty: Indecomposability::Brick,
        });
    }
    let shapes = map_shapes(x, x);
    let mut degree = 1;
    for _ in 0..trials {
        let phi = end.random_element(&shapes, f, rng);
        let mut factors: BTreeMap<Poly, usize> = BTreeMap::new();
        for m in phi.iter().filter(|m| m.rows() > 0) {
            for (g, e) in factor(&charpoly(m, f), f, rng) {
                let slot = factors.entry(g).or_insert(0);
                *slot = (*slot).max(e);
            }
        }
        if factors.len() < 2 {
            if let Some(g) = factors.keys().next() {
                degree = degree.max(g.degree().unwrap_or(1));
            }
            continue;
        }
        let (g, &e) = factors.iter().next().unwrap();
        let h = g.pow(e, f);
        let mut t = Vec::with_capacity(phi.len());
        let mut left = Vec::with_capacity(phi.len());
        for m in &phi {
            let hm = h.eval_matrix(m, f);
            let ker = hm.kernel_matrix(f);
            let img = hm.column_space(f);
            debug_assert_eq!(ker.cols() + img.cols(), m.rows());
            left.push(ker.cols());
            t.push(ker.hstack(&img));
        }
        return Ok(Attempt::Split { t, left });
    }
    Ok(Attempt::Indecomposable {
        degree,
        certainty: Indecomposability::Randomized { trials },
    })
}

struct Block {
    module: RepModule,
    degree: usize,
    certainty: Indecomposability,
}

/// Returns the blocks and the basis `S` (per vertex, as columns) in which
/// `x` is block diagonal.
fn decompose_rec<R: Rng>(
    x: RepModule,
    trials: usize,
    rng: &mut R,
) -> Result<(Vec<Block>, Vec<Matrix>)> {
    let f = x.field();
    match try_split(&x, trials, rng)? {
        Attempt::Indecomposable { degree, certainty } => {
            let ident = x.dim().0.iter().map(|&n| Matrix::identity(n)).collect();
            Ok((
                vec![Block {
                    module: x,
                    degree,
                    certainty,
                }],
                ident,
            ))
        }
        Attempt::Split { t, left } => {
            let t_inv: Vec<Matrix> = t
                .iter()
                .map(|m| m.inverse(f).expect("eigenspace splitting yields a basis"))
                .collect();
            let conj = x.act(&t_inv, &t);
            let q = x.quiver().clone();
            let d = &x.dim().0;
            let right: Vec<usize> = d.iter().zip(&left).map(|(a, b)| a - b).collect();
            let mut lm = Vec::new();
            let mut rm = Vec::new();
            for (ai, a) in q.arrows().iter().enumerate() {
                let (s, tt) = (a.source, a.target);
                let m = conj.mat(ai);
                debug_assert!(m.block(0, left[tt], left[s], d[s]).is_zero());
                debug_assert!(m.block(left[tt], d[tt], 0, left[s]).is_zero());
                lm.push(m.block(0, left[tt], 0, left[s]));
                rm.push(m.block(left[tt], d[tt], left[s], d[s]));
            }
            let lmod = RepModule::unconstrained(q.clone(), f, DimVector(left.clone()), lm)?;
            let rmod = RepModule::unconstrained(q, f, DimVector(right), rm)?;
            let (mut bl, sl) = decompose_rec(lmod, trials, rng)?;
            let (br, sr) = decompose_rec(rmod, trials, rng)?;
            bl.extend(br);
            let s = t
                .iter()
                .zip(sl.iter().zip(&sr))
                .map(|(ti, (a, b))| ti.mul(&Matrix::block_diag(&[a, b]), f))
                .collect();
            Ok((bl, s))
        }
    }
}

/// Splits `m` into indecomposable summands and groups isomorphic ones.
pub fn decompose_indec(m: &RepModule, seed: u64, trials: usize) -> Result<Decomposition> {
    let f = m.field();
    if m.total_dim() == 0 {
        return Ok(Decomposition {
            blocks: Vec::new(),
            block_class: Vec::new(),
            summands: Vec::new(),
            basis_change: m.dim().0.iter().map(|_| Matrix::zeros(0, 0)).collect(),
            basis_change_inv: m.dim().0.iter().map(|_| Matrix::zeros(0, 0)).collect(),
        });
    }
    let mut rng = rng_for(seed, &[0xdec]);
    let (blocks, s) = decompose_rec(m.clone(), trials, &mut rng)?;
    let s_inv: Vec<Matrix> = s
        .iter()
        .map(|x| x.inverse(f).expect("accumulated basis is invertible"))
        .collect();

    let mut summands: Vec<Summand> = Vec::new();
    let mut block_class = Vec::with_capacity(blocks.len());
    for (bi, b) in blocks.iter().enumerate() {
        let mut class = None;
        for (ci, s) in summands.iter().enumerate() {
            if s.module.dim() == b.module.dim()
                && is_isomorphic(
                    &s.module,
                    &b.module,
                    derive_seed(seed, &[bi as u64, ci as u64]),
                )?
            {
                class = Some(ci);
                break;
            }
        }
        match class {
            Some(ci) => {
                summands[ci].multiplicity += 1;
                block_class.push(ci);
            }
            None => {
                block_class.push(summands.len());
                summands.push(Summand {
                    module: b.module.clone(),
                    multiplicity: 1,
                    splitting_degree: b.degree,
                    certainty: b.certainty,
                });
            }
        }
    }
    Ok(Decomposition {
        blocks: blocks.into_iter().map(|b| b.module).collect(),
        block_class,
        summands,
        basis_change: s_inv,
        basis_change_inv: s,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CanonicalDecomposition {
    /// The winning multiset, sorted.
    pub summands: Vec<DimVector>,
    /// Number of samples that produced the winning multiset.
    pub votes: usize,
    pub samples: usize,
    /// Samples disagreed at the originally requested prime.
    pub disagreement: bool,
    /// Prime used for the reported vote.
    pub prime: u64,
    pub retried: bool,
}

impl CanonicalDecomposition {
    /// `(dimension vector, multiplicity)` pairs.
    pub fn grouped(&self) -> Vec<(DimVector, usize)> {
        let mut out: Vec<(DimVector, usize)> = Vec::new();
        for d in &self.summands {
            match out.last_mut() {
                Some((last, c)) if last == d => *c += 1,
                _ => out.push((d.clone(), 1)),
            }
        }
        out
    }
}

fn vote(
    q: &Arc<Quiver>,
    d: &DimVector,
    field: FieldSpec,
    seed: u64,
    samples: usize,
) -> Result<(Vec<DimVector>, usize, bool)> {
    let results = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let m = random_module(q, d, field, derive_seed(seed, &[i]))?;
            let dec = decompose_indec(&m, derive_seed(seed, &[i, 1]), DEFAULT_INDEC_TRIALS)?;
            Ok(dec.geometric_dim_vectors())
        })
        .collect::<Result<Vec<_>>>()?;
    // first-appearance order breaks ties deterministically
    let mut tally: Vec<(Vec<DimVector>, usize)> = Vec::new();
    for r in results {
        match tally.iter_mut().find(|(k, _)| *k == r) {
            Some((_, c)) => *c += 1,
            None => tally.push((r, 1)),
        }
    }
    let unanimous = tally.len() == 1;
    let mut best = 0;
    for (i, (_, c)) in tally.iter().enumerate() {
        if *c > tally[best].1 {
            best = i;
        }
    }
    let (winner, votes) = tally.swap_remove(best);
    Ok((winner, votes, !unanimous))
}

/// Majority vote over the decompositions of `samples` random modules of
/// dimension `d`; disagreement at a small prime triggers one retry at
/// `2^31 − 1`.
pub fn canonical_decomposition(
    q: &Arc<Quiver>,
    d: &DimVector,
    field: FieldSpec,
    seed: u64,
    samples: usize,
) -> Result<CanonicalDecomposition> {
    q.require_path_algebra("canonical decomposition requires a path algebra")?;
    if samples == 0 {
        return Err(CoreError::InvalidInput("samples must be ≥ 1".into()));
    }
    if d.is_zero() {
        return Ok(CanonicalDecomposition {
            summands: Vec::new(),
            votes: samples,
            samples,
            disagreement: false,
            prime: field.p(),
            retried: false,
        });
    }
    let (winner, votes, disagreement) = vote(q, d, field, seed, samples)?;
    if disagreement && field.p() != DEFAULT_PRIME {
        let big = FieldSpec::default();
        let (w2, v2, _) = vote(q, d, big, derive_seed(seed, &[0x7e7]), samples)?;
        return Ok(CanonicalDecomposition {
            summands: w2,
            votes: v2,
            samples,
            disagreement,
            prime: big.p(),
            retried: true,
        });
    }
    Ok(CanonicalDecomposition {
        summands: winner,
        votes,
        samples,
        disagreement,
        prime: field.p(),
        retried: false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchurVerdict {
    Real,
    Tame,
    Wild,
    ProbablyNotSchur,
}

impl SchurVerdict {
    pub fn is_schur(self) -> bool {
        self != SchurVerdict::ProbablyNotSchur
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SchurClassification {
    pub verdict: SchurVerdict,
    pub q_value: i64,
    pub brick_hits: usize,
    pub samples_drawn: usize,
    pub trials: usize,
    /// Sampled canonical decomposition of `2d` (Schur roots only).
    pub double: Option<CanonicalDecomposition>,
    /// Expected decomposition of `2d` given the verdict.
    pub expected_double: Option<Vec<DimVector>>,
    pub mismatch: Option<String>,
}

/// Samples up to `trials` modules of dimension `d`; a brick makes `d` a
/// Schur root, classified by the sign of `q(d)` and cross-checked against
/// the canonical decomposition of `2d`.
pub fn classify_schur_root(
    q: &Arc<Quiver>,
    d: &DimVector,
    field: FieldSpec,
    seed: u64,
    trials: usize,
) -> Result<SchurClassification> {
    q.require_path_algebra("Schur-root classification requires a path algebra")?;
    if trials == 0 {
        return Err(CoreError::InvalidInput("trials must be ≥ 1".into()));
    }
    let qv = quadratic_form(q, d);
    let mut drawn = 0;
    let mut hit = false;
    for t in 0..trials as u64 {
        drawn += 1;
        let m = random_module(q, d, field, derive_seed(seed, &[t]))?;
        if is_brick(&m) {
            hit = true;
            break;
        }
    }
    if !hit {
        return Ok(SchurClassification {
            verdict: SchurVerdict::ProbablyNotSchur,
            q_value: qv,
            brick_hits: 0,
            samples_drawn: drawn,
            trials,
            double: None,
            expected_double: None,
            mismatch: None,
        });
    }
    let verdict = match qv {
        1 => SchurVerdict::Real,
        0 => SchurVerdict::Tame,
        v if v < 0 => SchurVerdict::Wild,
        v => {
            return Err(CoreError::Inconsistent(format!(
                "brick found in dimension {d} but q(d) = {v} > 1"
            )))
        }
    };
    let expected = match verdict {
        SchurVerdict::Wild => vec![d.scaled(2)],
        _ => vec![d.clone(), d.clone()],
    };
    let double = canonical_decomposition(
        q,
        &d.scaled(2),
        field,
        derive_seed(seed, &[0x2d]),
        DEFAULT_CANON_SAMPLES,
    )?;
    let mismatch = (double.summands != expected).then(|| {
        format!(
            "canonical decomposition of 2d is {:?}, expected {:?}",
            double
                .summands
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>(),
            expected.iter().map(|x| x.to_string()).collect::<Vec<_>>()
        )
    });
    Ok(SchurClassification {
        verdict,
        q_value: qv,
        brick_hits: 1,
        samples_drawn: drawn,
        trials,
        double: Some(double),
        expected_double: Some(expected),
        mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::module::{direct_sum, random_basis_change};

    fn v(x: &[usize]) -> DimVector {
        DimVector(x.to_vec())
    }

    #[test]
    fn simple_is_its_own_decomposition() {
        let s1 = bundled::module("S1").unwrap();
        let dec = decompose_indec(&s1, 1, DEFAULT_INDEC_TRIALS).unwrap();
        assert_eq!(dec.summands.len(), 1);
        assert_eq!(dec.summands[0].multiplicity, 1);
        assert_eq!(dec.summands[0].module, s1);
        assert!(dec.verify(&s1));
    }

    #[test]
    fn shuffled_regular_sum_splits() {
        let sum = direct_sum(
            &bundled::module("R1").unwrap(),
            &bundled::module("R2").unwrap(),
        )
        .unwrap();
        let m = random_basis_change(&sum, 17);
        let dec = decompose_indec(&m, 2, DEFAULT_INDEC_TRIALS).unwrap();
        assert!(dec.verify(&m));
        assert_eq!(dec.dim_vectors(), vec![v(&[1, 1]), v(&[1, 1])]);
        assert_eq!(dec.summands.len(), 2);
        assert!(!is_isomorphic(&dec.blocks[0], &dec.blocks[1], 0).unwrap());
    }

    #[test]
    fn repeated_summand_gets_multiplicity() {
        let r1 = bundled::module("R1").unwrap();
        let m = random_basis_change(&direct_sum(&r1, &r1).unwrap(), 5);
        let dec = decompose_indec(&m, 3, DEFAULT_INDEC_TRIALS).unwrap();
        assert!(dec.verify(&m));
        assert_eq!(dec.summands.len(), 1);
        assert_eq!(dec.summands[0].multiplicity, 2);
    }

    #[test]
    fn generic_a2_21_splits_into_p1_and_s1() {
        let q = bundled::a2();
        let m = random_module(&q, &v(&[2, 1]), FieldSpec::default(), 8).unwrap();
        let dec = decompose_indec(&m, 1, DEFAULT_INDEC_TRIALS).unwrap();
        assert!(dec.verify(&m));
        assert_eq!(dec.dim_vectors(), vec![v(&[1, 0]), v(&[1, 1])]);
    }

    #[test]
    fn conjugate_eigenvalues_count_geometrically() {
        // φ_a = 1, φ_b = companion matrix of x^2 + 1, irreducible over F_7
        let q = bundled::k2();
        let f = FieldSpec::new(7).unwrap();
        let a = Matrix::identity(2);
        let b = Matrix::from_rows(2, 2, vec![vec![0, 6], vec![1, 0]]);
        let m = RepModule::new(q, f, v(&[2, 2]), vec![a, b]).unwrap();
        let dec = decompose_indec(&m, 4, DEFAULT_INDEC_TRIALS).unwrap();
        assert_eq!(dec.dim_vectors(), vec![v(&[2, 2])]);
        assert_eq!(dec.summands[0].splitting_degree, 2);
        assert_eq!(dec.geometric_dim_vectors(), vec![v(&[1, 1]), v(&[1, 1])]);
    }

    #[test]
    fn canonical_examples() {
        let f = FieldSpec::default();
        let c = canonical_decomposition(&bundled::k2(), &v(&[2, 2]), f, 1, 7).unwrap();
        assert_eq!(c.summands, vec![v(&[1, 1]), v(&[1, 1])]);
        let c = canonical_decomposition(&bundled::k3(), &v(&[2, 2]), f, 1, 7).unwrap();
        assert_eq!(c.summands, vec![v(&[2, 2])]);
        let c = canonical_decomposition(&bundled::a2(), &v(&[2, 1]), f, 1, 7).unwrap();
        assert_eq!(c.summands, vec![v(&[1, 0]), v(&[1, 1])]);
        assert_eq!(c.grouped(), vec![(v(&[1, 0]), 1), (v(&[1, 1]), 1)]);
    }

    #[test]
    fn small_prime_disagreement_retries() {
        // over F_2 many pencils are degenerate, so votes split and a retry fires
        let f = FieldSpec::new(2).unwrap();
        let c = canonical_decomposition(&bundled::k2(), &v(&[2, 2]), f, 3, 15).unwrap();
        if c.disagreement {
            assert!(c.retried);
            assert_eq!(c.prime, DEFAULT_PRIME);
        }
        assert_eq!(c.summands, vec![v(&[1, 1]), v(&[1, 1])]);
    }

    #[test]
    fn schur_examples() {
        let f = FieldSpec::default();
        let c = |q: &Arc<Quiver>, d: &[usize]| classify_schur_root(q, &v(d), f, 5, 40).unwrap();
        let r = c(&bundled::k2(), &[1, 2]);
        assert_eq!(r.verdict, SchurVerdict::Real);
        assert!(r.mismatch.is_none());
        assert_eq!(c(&bundled::k2(), &[1, 1]).verdict, SchurVerdict::Tame);
        let w = c(&bundled::k3(), &[1, 1]);
        assert_eq!(w.verdict, SchurVerdict::Wild);
        assert!(w.mismatch.is_none(), "{:?}", w.mismatch);
        let n = c(&bundled::k2(), &[2, 2]);
        assert_eq!(n.verdict, SchurVerdict::ProbablyNotSchur);
        assert_eq!(n.samples_drawn, 40);
    }

    #[test]
    fn scope_errors() {
        let f = FieldSpec::default();
        let q = bundled::loop_sq();
        assert!(canonical_decomposition(&q, &v(&[1]), f, 0, 3).is_err());
        assert!(classify_schur_root(&q, &v(&[1]), f, 0, 3).is_err());
    }
}
