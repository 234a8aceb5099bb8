//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines are printed even on success; exits nonzero if any
//! criterion fails.

use std::time::{Duration, Instant};

use semibrick_core::bundled;
use semibrick_core::gen::{random_acyclic_quiver, random_dim_vector, random_theta};
use semibrick_core::module::direct_sum_all;
use semibrick_core::presentations::PerpSearch;
use semibrick_core::rng::derive_seed;
use semibrick_core::{
    canonical_decomposition, classify_schur_root, cokernel, decompose_indec, euler_form_mod,
    ext1_dim, extend_semibrick, fei_generic_perp_search, generic_hom_dim, grow_semibrick, hom_dim,
    hom_space, iota, is_brick, is_isomorphic, is_semibrick, maximality_probe, random_basis_change,
    random_module, run_selftest, sample_presentation, theta_value, verify_certificate, DimVector,
    FieldSpec, Matrix, ProbeVerdict, RepModule, SchurVerdict, ThetaVector,
};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        passed: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        passed: false,
        detail: detail.into(),
    }
}

fn within(limit: Duration, elapsed: Duration, mut o: Outcome) -> Outcome {
    o.detail = format!(
        "{}; {:.2}s (limit {:.0}s)",
        o.detail,
        elapsed.as_secs_f64(),
        limit.as_secs_f64()
    );
    if elapsed > limit {
        o.passed = false;
    }
    o
}

fn dv(x: &[usize]) -> DimVector {
    DimVector(x.to_vec())
}

fn euler_identity() -> Outcome {
    let start = Instant::now();
    let f = FieldSpec::default();
    let mut failures = 0;
    let mut cases = 0;
    for qi in 0..10u64 {
        let q = random_acyclic_quiver(derive_seed(1001, &[qi]), 5, 6);
        for k in 0..20u64 {
            let s = derive_seed(1002, &[qi, k]);
            let m = random_module(&q, &random_dim_vector(&q, 4, s ^ 1), f, s ^ 2).unwrap();
            let n = random_module(&q, &random_dim_vector(&q, 4, s ^ 3), f, s ^ 4).unwrap();
            let lhs = hom_dim(&m, &n).unwrap() as i64 - ext1_dim(&m, &n).unwrap() as i64;
            if lhs != euler_form_mod(&q, &m.dim().as_class(), &n.dim().as_class()) {
                failures += 1;
            }
            cases += 1;
        }
    }
    let o = if failures == 0 && cases == 200 {
        pass(format!("{cases} pairs, 0 failures"))
    } else {
        fail(format!("{cases} pairs, {failures} failures"))
    };
    within(Duration::from_secs(5), start.elapsed(), o)
}

/// Whether some module of dimension (2,2) on K2 over `F_p` is a brick,
/// by enumerating every pair of 2x2 matrices.
fn kronecker_22_brick_exists(p: u64) -> bool {
    let f = FieldSpec::new(p).unwrap();
    let q = bundled::k2();
    let n = p.pow(4);
    let mat = |mut code: u64| {
        let data = (0..4)
            .map(|_| {
                let x = code % p;
                code /= p;
                x
            })
            .collect();
        Matrix::from_flat(2, 2, data)
    };
    (0..n).any(|a| {
        (0..n).any(|b| {
            let m = RepModule::new(q.clone(), f, dv(&[2, 2]), vec![mat(a), mat(b)]).unwrap();
            hom_space(&m, &m).unwrap().dim == 1
        })
    })
}

fn kronecker_regression() -> Outcome {
    let start = Instant::now();
    let f = FieldSpec::default();
    let cases = [
        (bundled::k2(), dv(&[1, 2]), SchurVerdict::Real),
        (bundled::k2(), dv(&[1, 1]), SchurVerdict::Tame),
        (bundled::k3(), dv(&[1, 1]), SchurVerdict::Wild),
        (bundled::k2(), dv(&[2, 2]), SchurVerdict::ProbablyNotSchur),
    ];
    let mut bad = Vec::new();
    for (q, d, want) in &cases {
        let c = classify_schur_root(q, d, f, 7, 40).unwrap();
        if c.verdict != *want || c.mismatch.is_some() {
            bad.push(format!("{} {d}: {:?}", q.name().unwrap(), c.verdict));
        }
    }
    for p in [2, 3] {
        if kronecker_22_brick_exists(p) {
            bad.push(format!("brick of dim (2,2) on K2 over F_{p}"));
        }
    }
    let k2 = canonical_decomposition(&bundled::k2(), &dv(&[2, 2]), f, 7, 7).unwrap();
    if k2.summands != vec![dv(&[1, 1]), dv(&[1, 1])] {
        bad.push(format!("K2 (2,2) decomposes as {:?}", k2.summands));
    }
    let k3 = canonical_decomposition(&bundled::k3(), &dv(&[2, 2]), f, 7, 7).unwrap();
    if k3.summands != vec![dv(&[2, 2])] {
        bad.push(format!("K3 (2,2) decomposes as {:?}", k3.summands));
    }
    let o = if bad.is_empty() {
        pass("real/tame/wild/probably-not-schur as expected; F2/F3 enumeration finds no (2,2) brick; (1,1)+(1,1) and (2,2)")
    } else {
        fail(bad.join("; "))
    };
    within(Duration::from_secs(5), start.elapsed(), o)
}

fn orthogonal_to_all(x: &RepModule, members: &[RepModule]) -> bool {
    members
        .iter()
        .all(|m| hom_dim(x, m).unwrap() == 0 && hom_dim(m, x).unwrap() == 0)
}

fn extension_desk_test() -> Outcome {
    let r1 = bundled::module("R1").unwrap();
    let s = is_semibrick(vec![r1.clone()]).unwrap();
    let mut hits = 0;
    let mut unverified = 0;
    for k in 0..100u64 {
        let out = extend_semibrick(&s, 0, 6, 40, derive_seed(3003, &[k])).unwrap();
        if let Some(cert) = out.certificate {
            if cert.l == 1 {
                hits += 1;
            }
            let independent =
                is_brick(&cert.module) && orthogonal_to_all(&cert.module, s.members());
            if !verify_certificate(&s, 0, &cert).unwrap() || !independent {
                unverified += 1;
            }
        }
    }
    let start = Instant::now();
    let g = grow_semibrick(&s, 0, 10, 6, 40, 3004).unwrap();
    let grow_time = start.elapsed();
    let members = g.semibrick.members();
    let mut pairwise = members.len() == 10 && !g.partial;
    for (i, a) in members.iter().enumerate() {
        pairwise &= is_brick(a);
        for b in &members[i + 1..] {
            pairwise &= hom_dim(a, b).unwrap() == 0 && hom_dim(b, a).unwrap() == 0;
        }
    }
    let mut grown = s.clone();
    for cert in &g.certificates {
        if !verify_certificate(&grown, 0, cert).unwrap() {
            unverified += 1;
        }
        let mut next = grown.members().to_vec();
        next.push(cert.module.clone());
        grown = is_semibrick(next).unwrap();
    }
    let detail = format!(
        "{hits}/100 seeds at l=1; grew to {} pairwise orthogonal = {pairwise}; {unverified} unverified certificates",
        members.len()
    );
    let o = if hits >= 99 && pairwise && unverified == 0 {
        pass(detail)
    } else {
        fail(detail)
    };
    within(Duration::from_secs(2), grow_time, o)
}

fn maximality_consistency() -> Outcome {
    let sb = |names: &[&str]| {
        is_semibrick(names.iter().map(|n| bundled::module(n).unwrap()).collect()).unwrap()
    };
    let probes = [
        (
            sb(&["S1", "S2"]),
            vec![dv(&[1, 0]), dv(&[0, 1]), dv(&[1, 1])],
            ProbeVerdict::ConsistentMaximal,
        ),
        (
            sb(&["A1-S1"]),
            vec![dv(&[1]), dv(&[2]), dv(&[3])],
            ProbeVerdict::ConsistentMaximal,
        ),
        (sb(&["R1"]), vec![dv(&[1, 1])], ProbeVerdict::NotMaximal),
        (
            sb(&["K3-R"]),
            vec![dv(&[1, 1]), dv(&[2, 2])],
            ProbeVerdict::NotMaximal,
        ),
    ];
    let mut bad = Vec::new();
    let mut fired = 0;
    for (i, (s, pool, want)) in probes.iter().enumerate() {
        let r = maximality_probe(s, pool, 200, derive_seed(4004, &[i as u64])).unwrap();
        if r.verdict == ProbeVerdict::ViolationSuspected {
            fired += 1;
        }
        if r.verdict != *want {
            bad.push(format!("probe {i}: {:?}", r.verdict));
        }
        if *want == ProbeVerdict::ConsistentMaximal
            && (!r.extensions.is_empty() || !r.members_open.iter().all(|&o| o))
        {
            bad.push(format!("probe {i}: extensions or non-open members"));
        }
    }
    if fired == 0 && bad.is_empty() {
        pass("A2 {S1,S2} and A1 {S1} maximal with all members open; violation flag never fired (trials 200)")
    } else {
        fail(format!("{fired} violation flags; {}", bad.join("; ")))
    }
}

fn presentation_identities() -> Outcome {
    let f = FieldSpec::default();
    let mut injective = 0;
    let mut coker_fail = 0;
    let mut lemma_cases = 0;
    let mut lemma_fail = 0;
    for k in 0..100u64 {
        let s = derive_seed(5005, &[k]);
        let q = random_acyclic_quiver(s, 4, 5);
        let theta = random_theta(&q, 2, s ^ 1);
        let pres = sample_presentation(&q, &theta, f, s ^ 2).unwrap();
        if !pres.is_injective() {
            continue;
        }
        injective += 1;
        let c = cokernel(&pres).unwrap();
        if c.dim().as_class() != iota(&q, &theta).unwrap() {
            coker_fail += 1;
        }
        for j in 0..5u64 {
            let m = random_module(&q, &random_dim_vector(&q, 3, s ^ (10 + j)), f, s ^ (20 + j))
                .unwrap();
            let rhs = hom_dim(&c, &m).unwrap() as i64 - ext1_dim(&c, &m).unwrap() as i64;
            lemma_cases += 1;
            if theta_value(&theta, &m) != rhs {
                lemma_fail += 1;
            }
        }
    }
    let fei = |q: &str, theta: &[i64], m: &str| -> PerpSearch {
        fei_generic_perp_search(
            &bundled::quiver(q).unwrap(),
            &ThetaVector(theta.to_vec()),
            &bundled::module(m).unwrap(),
            3,
            5,
            5006,
        )
        .unwrap()
    };
    let fei_l: Vec<Option<usize>> = [fei("K2", &[1, -1], "R1"), fei("A2", &[1, -1], "S2")]
        .iter()
        .map(|r| r.found.as_ref().map(|w| w.l))
        .collect();
    let detail = format!(
        "{injective}/100 injective, {coker_fail} cokernel mismatches; {lemma_cases} θ(M) checks, {lemma_fail} failures; Fei l = {fei_l:?}"
    );
    if injective > 0 && coker_fail == 0 && lemma_fail == 0 && fei_l == vec![Some(1), Some(1)] {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn decomposition_soundness() -> Outcome {
    let f = FieldSpec::default();
    let mut cases = 0;
    let mut bad = 0;
    let mut k = 0u64;
    while cases < 50 && k < 1000 {
        k += 1;
        let s = derive_seed(6006, &[k]);
        let q = random_acyclic_quiver(s, 4, 5);
        let want_len = 2 + (k % 2) as usize;
        let mut bricks: Vec<RepModule> = Vec::new();
        for t in 0..40u64 {
            if bricks.len() == want_len {
                break;
            }
            let d = random_dim_vector(&q, 2, s ^ (100 + t));
            if d.is_zero() {
                continue;
            }
            let m = random_module(&q, &d, f, s ^ (200 + t)).unwrap();
            if is_brick(&m) && !bricks.iter().any(|b| is_isomorphic(b, &m, t).unwrap()) {
                bricks.push(m);
            }
        }
        if bricks.len() < 2 {
            continue;
        }
        cases += 1;
        let m = random_basis_change(&direct_sum_all(&bricks).unwrap(), s ^ 3);
        let dec = decompose_indec(&m, s ^ 4, 24).unwrap();
        let mut want: Vec<DimVector> = bricks.iter().map(|b| b.dim().clone()).collect();
        want.sort();
        // the witness is checked by direct conjugation here, not via verify()
        let conj = m.act(&dec.basis_change, &dec.basis_change_inv);
        let witness_ok = dec
            .basis_change
            .iter()
            .zip(&dec.basis_change_inv)
            .all(|(g, h)| g.mul(h, f) == Matrix::identity(g.rows()))
            && direct_sum_all(&dec.blocks).unwrap() == conj;
        let classes_ok =
            dec.summands.len() == bricks.len() && dec.summands.iter().all(|s| s.multiplicity == 1);
        if dec.dim_vectors() != want || !witness_ok || !classes_ok {
            bad += 1;
        }
    }
    let detail = format!("{cases} shuffled sums, {bad} failures");
    if cases == 50 && bad == 0 {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn semicontinuity() -> Outcome {
    let mut worst = 1.0f64;
    let mut bad = Vec::new();
    for (i, (q, d, e)) in bundled::generic_hom_pairs().into_iter().enumerate() {
        let g = generic_hom_dim(
            &q,
            &d,
            &e,
            FieldSpec::default(),
            100,
            derive_seed(7007, &[i as u64]),
        )
        .unwrap();
        worst = worst.min(g.fraction());
        if g.fraction() < 0.9 {
            bad.push(format!(
                "{} {d} {e}: {:.2}",
                q.name().unwrap(),
                g.fraction()
            ));
        }
    }
    let detail = format!("lowest attainment fraction {worst:.2} over the bundled pairs");
    if bad.is_empty() {
        pass(detail)
    } else {
        fail(format!("{detail}; {}", bad.join("; ")))
    }
}

fn determinism() -> Outcome {
    let a = serde_json::to_string(&run_selftest(8008).unwrap()).unwrap();
    let b = serde_json::to_string(&run_selftest(8008).unwrap()).unwrap();
    if a == b {
        pass(format!("{} bytes, identical", a.len()))
    } else {
        fail("selftest reports differ")
    }
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("euler identity", euler_identity),
        ("kronecker regression", kronecker_regression),
        ("extension desk test", extension_desk_test),
        ("maximality consistency", maximality_consistency),
        ("presentation identities", presentation_identities),
        ("decomposition soundness", decomposition_soundness),
        ("semicontinuity evidence", semicontinuity),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!(
            "[{}] criterion {} {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all {} acceptance criteria passed", criteria.len());
}
