//! Example quivers and modules shipped with the crate.
//!
//! Quivers: `A1`, `A2` (1 → 2), `K2`, `K3` (two and three parallel arrows
//! 1 → 2) and `loop` (one loop with `a a = 0`). Modules: `S1`, `S2`, `P1` on
//! `A2`; `R1`, `R2` (`φ_a = 1`, `φ_b = λ` for λ = 1, 2) and `K2-P1` on `K2`;
//! `K3-R` (all arrows 1) on `K3`; `A1-S1`; `loop-nil` (a nilpotent 2x2 loop).

use std::sync::{Arc, OnceLock};

use crate::module::RepModule;
use crate::quiver::{DimVector, Quiver};

pub const QUIVER_FILES: &[(&str, &str, &str)] = &[
    ("A1", "a1.q", include_str!("../fixtures/a1.q")),
    ("A2", "a2.q", include_str!("../fixtures/a2.q")),
    ("K2", "k2.q", include_str!("../fixtures/k2.q")),
    ("K3", "k3.q", include_str!("../fixtures/k3.q")),
    ("loop", "loop.q", include_str!("../fixtures/loop.q")),
];

pub const MODULE_FILES: &[(&str, &str, &str)] = &[
    ("S1", "s1.json", include_str!("../fixtures/s1.json")),
    ("S2", "s2.json", include_str!("../fixtures/s2.json")),
    ("P1", "p1.json", include_str!("../fixtures/p1.json")),
    ("R1", "r1.json", include_str!("../fixtures/r1.json")),
    ("R2", "r2.json", include_str!("../fixtures/r2.json")),
    (
        "K2-P1",
        "k2_p1.json",
        include_str!("../fixtures/k2_p1.json"),
    ),
    ("K3-R", "k3_r.json", include_str!("../fixtures/k3_r.json")),
    (
        "A1-S1",
        "a1_s1.json",
        include_str!("../fixtures/a1_s1.json"),
    ),
    (
        "loop-nil",
        "loop_nil.json",
        include_str!("../fixtures/loop_nil.json"),
    ),
];

fn cache() -> &'static Vec<Arc<Quiver>> {
    static CACHE: OnceLock<Vec<Arc<Quiver>>> = OnceLock::new();
    CACHE.get_or_init(|| {
        QUIVER_FILES
            .iter()
            .map(|(name, _, text)| {
                Arc::new(
                    Quiver::parse(text)
                        .expect("bundled quiver parses")
                        .with_name(*name),
                )
            })
            .collect()
    })
}

/// Looks up a bundled quiver by name (case-insensitive).
pub fn quiver(name: &str) -> Option<Arc<Quiver>> {
    QUIVER_FILES
        .iter()
        .position(|(n, _, _)| n.eq_ignore_ascii_case(name))
        .map(|i| cache()[i].clone())
}

pub fn module(name: &str) -> Option<RepModule> {
    MODULE_FILES
        .iter()
        .find(|(n, _, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, _, text)| RepModule::from_json_str(text, None).expect("bundled module parses"))
}

pub fn a1() -> Arc<Quiver> {
    quiver("A1").unwrap()
}

pub fn a2() -> Arc<Quiver> {
    quiver("A2").unwrap()
}

pub fn k2() -> Arc<Quiver> {
    quiver("K2").unwrap()
}

pub fn k3() -> Arc<Quiver> {
    quiver("K3").unwrap()
}

pub fn loop_sq() -> Arc<Quiver> {
    quiver("loop").unwrap()
}

/// `(quiver, d, e)` triples used for generic Hom-dimension statistics.
pub fn generic_hom_pairs() -> Vec<(Arc<Quiver>, DimVector, DimVector)> {
    let v = |x: &[usize]| DimVector(x.to_vec());
    vec![
        (k2(), v(&[1, 1]), v(&[1, 1])),
        (k2(), v(&[1, 2]), v(&[1, 1])),
        (k2(), v(&[1, 1]), v(&[1, 2])),
        (k2(), v(&[2, 2]), v(&[1, 1])),
        (a2(), v(&[1, 1]), v(&[1, 1])),
        (a2(), v(&[1, 0]), v(&[1, 1])),
        (a2(), v(&[2, 1]), v(&[1, 1])),
        (k3(), v(&[1, 1]), v(&[1, 1])),
        (k3(), v(&[2, 2]), v(&[1, 1])),
        (a1(), v(&[1]), v(&[2])),
    ]
}
