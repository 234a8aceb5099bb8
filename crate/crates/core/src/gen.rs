//! Seeded generators of random acyclic quivers and vectors, used by the
//! self-test and by property tests.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::quiver::{DimVector, Quiver, ThetaVector};
use crate::rng::rng_for;

/// Random acyclic quiver with `1..=max_vertices` vertices and up to
/// `max_arrows` arrows (parallel arrows allowed). Orientation follows a
/// random vertex permutation, so declaration order is not topological.
pub fn random_acyclic_quiver(seed: u64, max_vertices: usize, max_arrows: usize) -> Arc<Quiver> {
    let mut rng = rng_for(seed, &[0x9]);
    let n = rng.gen_range(1..=max_vertices.max(1));
    let mut rank: Vec<usize> = (0..n).collect();
    rank.shuffle(&mut rng);
    let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut arrows = Vec::new();
    if n > 1 {
        let m = rng.gen_range(0..=max_arrows);
        for k in 0..m {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            let (s, t) = if rank[a] < rank[b] { (a, b) } else { (b, a) };
            arrows.push((format!("x{k}"), vertices[s].clone(), vertices[t].clone()));
        }
    }
    let q = Quiver::new(vertices, arrows, Vec::new()).expect("generated quiver is valid");
    Arc::new(q.with_name(format!("random-{seed}")))
}

pub fn random_dim_vector(q: &Quiver, max_entry: usize, seed: u64) -> DimVector {
    let mut rng = rng_for(seed, &[0xd]);
    DimVector(
        (0..q.num_vertices())
            .map(|_| rng.gen_range(0..=max_entry))
            .collect(),
    )
}

pub fn random_theta(q: &Quiver, bound: i64, seed: u64) -> ThetaVector {
    let mut rng = rng_for(seed, &[0x7]);
    ThetaVector(
        (0..q.num_vertices())
            .map(|_| rng.gen_range(-bound..=bound))
            .collect(),
    )
}
