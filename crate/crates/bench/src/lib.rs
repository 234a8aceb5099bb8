//! Workloads shared by the benchmarks.

use semibrick_core::module::direct_sum_all;
use semibrick_core::rng::counter_uniform;
use semibrick_core::{
    bundled, random_basis_change, random_module, DimVector, FieldSpec, Matrix, RepModule,
};

pub fn random_square(n: usize, seed: u64) -> Matrix {
    let p = FieldSpec::default().p();
    Matrix::from_flat(
        n,
        n,
        (0..n * n)
            .map(|k| counter_uniform(seed, 0, k as u64, p))
            .collect(),
    )
}

/// A generic module of dimension `(n, n)` on the 3-arrow Kronecker quiver.
pub fn k3_module(n: usize, seed: u64) -> RepModule {
    random_module(
        &bundled::k3(),
        &DimVector(vec![n, n]),
        FieldSpec::default(),
        seed,
    )
    .unwrap()
}

/// `k` generic regular Kronecker modules of dimension `(1,1)`, summed and
/// hidden under a random basis change.
pub fn shuffled_regular_sum(k: usize, seed: u64) -> RepModule {
    let q = bundled::k2();
    let parts: Vec<RepModule> = (0..k as u64)
        .map(|i| random_module(&q, &DimVector(vec![1, 1]), FieldSpec::default(), seed + i).unwrap())
        .collect();
    random_basis_change(&direct_sum_all(&parts).unwrap(), seed)
}
