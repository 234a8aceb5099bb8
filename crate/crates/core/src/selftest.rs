//! Deterministic invariant suite. Every check is a pure function of the
//! seed, and the report contains no timings, so two runs with the same seed
//! serialize identically.

use std::sync::Arc;

use serde::Serialize;

use crate::bundled;
use crate::decompose::{
    canonical_decomposition, classify_schur_root, decompose_indec, SchurVerdict,
    DEFAULT_CANON_SAMPLES, DEFAULT_INDEC_TRIALS,
};
use crate::error::Result;
use crate::extend::{
    extend_semibrick, grow_semibrick, maximality_probe, verify_certificate, ProbeVerdict,
};
use crate::field::FieldSpec;
use crate::gen::{random_acyclic_quiver, random_dim_vector, random_theta};
use crate::homology::{
    ext1_dim, generic_hom_dim, hom_dim, hom_space, is_brick, is_isomorphic, is_module_map,
    is_semibrick, orbit_dim,
};
use crate::matrix::Matrix;
use crate::module::{direct_sum, direct_sum_all, random_basis_change, random_module, RepModule};
use crate::presentations::{
    cokernel, fast_path_eligible, in_fbar_theta_oracle, sample_presentation, theta_value, FbarMode,
};
use crate::quiver::{
    euler_form_mod, euler_pairing, iota, iota_inverse, quadratic_form, DimVector, Quiver,
    ThetaVector,
};
use crate::rng::derive_seed;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub module: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub prime: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

struct Tally {
    cases: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    fn finish(self, module: &'static str, name: &'static str) -> Check {
        Check {
            name,
            module,
            cases: self.cases,
            failures: self.failures,
            passed: self.failures == 0 && self.cases > 0,
            detail: self.first_failure,
        }
    }
}

fn threshold(
    module: &'static str,
    name: &'static str,
    cases: usize,
    ok: usize,
    need: usize,
) -> Check {
    Check {
        name,
        module,
        cases,
        failures: cases - ok,
        passed: ok >= need,
        detail: Some(format!("{ok}/{cases} succeeded, {need} required")),
    }
}

fn random_pair(seed: u64, k: u64) -> Result<(Arc<Quiver>, RepModule, RepModule)> {
    let f = FieldSpec::default();
    let q = random_acyclic_quiver(derive_seed(seed, &[k]), 5, 6);
    let d = random_dim_vector(&q, 4, derive_seed(seed, &[k, 1]));
    let e = random_dim_vector(&q, 4, derive_seed(seed, &[k, 2]));
    let m = random_module(&q, &d, f, derive_seed(seed, &[k, 3]))?;
    let n = random_module(&q, &e, f, derive_seed(seed, &[k, 4]))?;
    Ok((q, m, n))
}

fn core_algebra(seed: u64, out: &mut Vec<Check>) -> Result<()> {
    let mut t = Tally::new();
    for k in 0..200u64 {
        let q = random_acyclic_quiver(derive_seed(seed, &[1, k]), 5, 6);
        let d = random_dim_vector(&q, 4, derive_seed(seed, &[1, k, 1]));
        let back = iota(&q, &iota_inverse(&q, &d)?)?;
        t.record(back == d.as_class(), || format!("ι(ι⁻¹({d})) = {back:?}"));
    }
    out.push(t.finish("core-algebra", "iota_roundtrip"));

    let mut t = Tally::new();
    let mut u = Tally::new();
    for k in 0..200u64 {
        let q = random_acyclic_quiver(derive_seed(seed, &[2, k]), 5, 6);
        let a = random_theta(&q, 5, derive_seed(seed, &[2, k, 1]));
        let b = random_theta(&q, 5, derive_seed(seed, &[2, k, 2]));
        let d = random_dim_vector(&q, 4, derive_seed(seed, &[2, k, 3])).as_class();
        let e = random_dim_vector(&q, 4, derive_seed(seed, &[2, k, 4])).as_class();
        let de: Vec<i64> = d.iter().zip(&e).map(|(x, y)| x + y).collect();
        let lin_theta =
            euler_pairing(&a.plus(&b), &d) == euler_pairing(&a, &d) + euler_pairing(&b, &d);
        let lin_dim = euler_pairing(&a, &de) == euler_pairing(&a, &d) + euler_pairing(&a, &e);
        t.record(lin_theta && lin_dim, || {
            format!("bilinearity fails for θ={a}, d={d:?}")
        });
        let theta_d = crate::quiver::iota_inverse_class(&q, &d)?;
        let lhs = euler_form_mod(&q, &d, &e);
        let rhs = euler_pairing(&theta_d, &e);
        u.record(lhs == rhs, || format!("⟨d,e⟩ = {lhs}, ⟨ι⁻¹ d, e⟩ = {rhs}"));
    }
    out.push(t.finish("core-algebra", "euler_pairing_bilinear"));
    out.push(u.finish("core-algebra", "euler_form_matches_pairing"));

    let mut t = Tally::new();
    for k in 0..100u64 {
        let q = random_acyclic_quiver(derive_seed(seed, &[3, k]), 5, 6);
        t.record(q.topological_order().is_some() == q.is_acyclic(), || {
            q.to_text()
        });
        if let Some(a) = q.arrows().first() {
            // a reversed copy of an arrow closes a cycle
            let v = q.vertices();
            let mut arrows: Vec<(String, String, String)> = q
                .arrows()
                .iter()
                .map(|x| (x.id.clone(), v[x.source].clone(), v[x.target].clone()))
                .collect();
            arrows.push(("back".into(), v[a.target].clone(), v[a.source].clone()));
            let c = Quiver::new(v.to_vec(), arrows, Vec::new())?;
            t.record(!c.is_acyclic() && c.topological_order().is_none(), || {
                c.to_text()
            });
        }
    }
    let lp = bundled::loop_sq();
    t.record(!lp.is_acyclic() && lp.topological_order().is_none(), || {
        "loop".into()
    });
    out.push(t.finish("core-algebra", "topological_order_iff_acyclic"));
    Ok(())
}

fn modrep(seed: u64, out: &mut Vec<Check>) -> Result<()> {
    let mut t = Tally::new();
    let mut orbit = Tally::new();
    let mut json = Tally::new();
    for k in 0..100u64 {
        let (q, m, n) = random_pair(derive_seed(seed, &[4]), k)?;
        let s = derive_seed(seed, &[4, k]);
        let again = random_module(
            &q,
            m.dim(),
            m.field(),
            derive_seed(derive_seed(seed, &[4]), &[k, 3]),
        )?;
        t.record(
            again == m && random_basis_change(&m, s) == random_basis_change(&m, s),
            || "resampling changed the module".into(),
        );
        let gm = random_basis_change(&m, derive_seed(s, &[1]));
        let gn = random_basis_change(&n, derive_seed(s, &[2]));
        let same = hom_dim(&m, &n)? == hom_dim(&gm, &gn)?
            && ext1_dim(&m, &n)? == ext1_dim(&gm, &gn)?
            && is_brick(&m) == is_brick(&gm)
            && is_brick(&n) == is_brick(&gn);
        orbit.record(same, || format!("case {k} changed under basis change"));
        let text = m.to_json_string();
        let back = RepModule::from_json_str(&text, Some(q.clone()))?;
        json.record(back == m && back.to_json_string() == text, || text.clone());
    }
    out.push(t.finish("modrep", "sampling_determinism"));
    out.push(orbit.finish("modrep", "orbit_invariance"));
    out.push(json.finish("modrep", "serialization_roundtrip"));
    Ok(())
}

fn homology(seed: u64, out: &mut Vec<Check>) -> Result<()> {
    let mut euler = Tally::new();
    for k in 0..200u64 {
        let (q, m, n) = random_pair(derive_seed(seed, &[5]), k)?;
        let lhs = hom_dim(&m, &n)? as i64 - ext1_dim(&m, &n)? as i64;
        let rhs = euler_form_mod(&q, &m.dim().as_class(), &n.dim().as_class());
        euler.record(lhs == rhs, || format!("hom - ext = {lhs}, ⟨d,e⟩ = {rhs}"));
    }
    out.push(euler.finish("homology", "euler_identity"));

    let mut add = Tally::new();
    for k in 0..100u64 {
        let (q, m1, n) = random_pair(derive_seed(seed, &[6]), k)?;
        let d2 = random_dim_vector(&q, 3, derive_seed(seed, &[6, k, 9]));
        let m2 = random_module(&q, &d2, m1.field(), derive_seed(seed, &[6, k, 10]))?;
        let sum = direct_sum(&m1, &m2)?;
        add.record(
            hom_dim(&sum, &n)? == hom_dim(&m1, &n)? + hom_dim(&m2, &n)?,
            || format!("additivity fails in case {k}"),
        );
    }
    out.push(add.finish("homology", "hom_additivity"));

    let mut gen = Tally::new();
    for (i, (q, d, e)) in bundled::generic_hom_pairs().into_iter().enumerate() {
        let g = generic_hom_dim(
            &q,
            &d,
            &e,
            FieldSpec::default(),
            100,
            derive_seed(seed, &[7, i as u64]),
        )?;
        gen.record(g.fraction() >= 0.9, || {
            format!(
                "{} {d} {e}: {}/{}",
                q.name().unwrap_or("?"),
                g.attained,
                g.samples
            )
        });
    }
    out.push(gen.finish("homology", "generic_hom_attainment"));

    let mut brick = Tally::new();
    let mut basis = Tally::new();
    for k in 0..100u64 {
        let (_, m, n) = random_pair(derive_seed(seed, &[8]), k)?;
        let d2: usize = m.dim().0.iter().map(|x| x * x).sum();
        let b = is_brick(&m);
        brick.record(b == (orbit_dim(&m) + 1 == d2), || {
            format!("brick/orbit mismatch at {k}")
        });
        let h = hom_space(&m, &n)?;
        basis.record(h.basis.iter().all(|g| is_module_map(&m, &n, g)), || {
            format!("case {k}")
        });
    }
    out.push(brick.finish("homology", "brick_iff_orbit_codim_one"));
    out.push(basis.finish("homology", "hom_basis_intertwines"));
    Ok(())
}

/// Up to `k` pairwise non-isomorphic bricks of dimension entries ≤ 2.
fn brick_family(q: &Arc<Quiver>, k: usize, seed: u64) -> Result<Vec<RepModule>> {
    let f = FieldSpec::default();
    let mut out: Vec<RepModule> = Vec::new();
    for t in 0..60u64 {
        if out.len() == k {
            break;
        }
        let d = random_dim_vector(q, 2, derive_seed(seed, &[t]));
        if d.is_zero() {
            continue;
        }
        let m = random_module(q, &d, f, derive_seed(seed, &[t, 1]))?;
        if !is_brick(&m) {
            continue;
        }
        let mut fresh = true;
        for b in &out {
            if b.dim() == m.dim() && is_isomorphic(b, &m, derive_seed(seed, &[t, 2]))? {
                fresh = false;
            }
        }
        if fresh {
            out.push(m);
        }
    }
    Ok(out)
}

fn decompose(seed: u64, out: &mut Vec<Check>) -> Result<()> {
    let mut sound = Tally::new();
    let mut conserve = Tally::new();
    let mut k = 0u64;
    while sound.cases < 50 && k < 500 {
        let q = random_acyclic_quiver(derive_seed(seed, &[9, k]), 4, 5);
        let want = 2 + (k % 2) as usize;
        let bricks = brick_family(&q, want, derive_seed(seed, &[9, k, 1]))?;
        k += 1;
        if bricks.len() < 2 {
            continue;
        }
        let m = random_basis_change(&direct_sum_all(&bricks)?, derive_seed(seed, &[9, k, 2]));
        let dec = decompose_indec(&m, derive_seed(seed, &[9, k, 3]), DEFAULT_INDEC_TRIALS)?;
        let mut want: Vec<DimVector> = bricks.iter().map(|b| b.dim().clone()).collect();
        want.sort();
        sound.record(dec.verify(&m) && dec.dim_vectors() == want, || {
            format!("got {:?}, want {:?}", dec.dim_vectors(), want)
        });
        let total = dec
            .summands
            .iter()
            .fold(DimVector(vec![0; q.num_vertices()]), |acc, s| {
                acc.plus(&s.module.dim().scaled(s.multiplicity))
            });
        conserve.record(&total == m.dim(), || format!("{total} ≠ {}", m.dim()));
    }
    out.push(sound.finish("decompose", "decomposition_soundness"));
    out.push(conserve.finish("decompose", "dimension_conservation"));

    let mut idem = Tally::new();
    for k in 0..50u64 {
        let q = random_acyclic_quiver(derive_seed(seed, &[10, k]), 4, 5);
        let d = random_dim_vector(&q, 3, derive_seed(seed, &[10, k, 1]));
        let m = random_module(&q, &d, FieldSpec::default(), derive_seed(seed, &[10, k, 2]))?;
        let dec = decompose_indec(&m, derive_seed(seed, &[10, k, 3]), DEFAULT_INDEC_TRIALS)?;
        let Some(first) = dec.summands.first() else {
            idem.record(d.is_zero(), || "nonzero module had no summands".into());
            continue;
        };
        let again = decompose_indec(
            &first.module,
            derive_seed(seed, &[10, k, 4]),
            DEFAULT_INDEC_TRIALS,
        )?;
        idem.record(
            again.blocks.len() == 1 && again.blocks[0] == first.module,
            || format!("summand of dim {} split again", first.module.dim()),
        );
    }
    out.push(idem.finish("decompose", "idempotence"));

    let f = FieldSpec::default();
    let mut lift = Tally::new();
    let mut unique = Tally::new();
    let mut pool: Vec<(Arc<Quiver>, DimVector)> = Vec::new();
    for q in [bundled::k2(), bundled::k3(), bundled::a2()] {
        for a in 0..=2 {
            for b in 0..=2 {
                pool.push((q.clone(), DimVector(vec![a, b])));
            }
        }
    }
    for k in 0..4u64 {
        let q = random_acyclic_quiver(derive_seed(seed, &[11, k]), 3, 3);
        pool.push((
            q.clone(),
            random_dim_vector(&q, 2, derive_seed(seed, &[11, k, 1])),
        ));
    }
    for (i, (q, d)) in pool.iter().enumerate() {
        if d.is_zero() {
            continue;
        }
        let s = derive_seed(seed, &[12, i as u64]);
        let c = classify_schur_root(q, d, f, s, 40)?;
        if !c.verdict.is_schur() {
            continue;
        }
        for l in [2usize, 3] {
            let got = canonical_decomposition(
                q,
                &d.scaled(l),
                f,
                derive_seed(s, &[l as u64]),
                DEFAULT_CANON_SAMPLES,
            )?;
            let want = if quadratic_form(q, d) < 0 {
                vec![d.scaled(l)]
            } else {
                vec![d.clone(); l]
            };
            lift.record(got.summands == want, || {
                format!(
                    "{l}·{d}: got {:?}",
                    got.summands
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                )
            });
        }
        if c.verdict == SchurVerdict::Real {
            let mut bricks = Vec::new();
            for t in 0..200u64 {
                if bricks.len() == 20 {
                    break;
                }
                let m = random_module(q, d, f, derive_seed(s, &[99, t]))?;
                if is_brick(&m) {
                    bricks.push(m);
                }
            }
            let mut ok = bricks.len() == 20;
            for b in &bricks[1.min(bricks.len())..] {
                ok &= is_isomorphic(&bricks[0], b, derive_seed(s, &[98]))?;
            }
            unique.record(ok, || format!("real root {d}: bricks not all isomorphic"));
        }
    }
    out.push(lift.finish("decompose", "multiples_of_schur_roots"));
    out.push(unique.finish("decompose", "real_root_brick_uniqueness"));
    Ok(())
}

fn presentations(seed: u64, out: &mut Vec<Check>) -> Result<()> {
    let f = FieldSpec::default();
    let mut lemma = Tally::new();
    let mut coker = Tally::new();
    for k in 0..100u64 {
        let q = random_acyclic_quiver(derive_seed(seed, &[13, k]), 4, 5);
        let theta = random_theta(&q, 2, derive_seed(seed, &[13, k, 1]));
        let pres = sample_presentation(&q, &theta, f, derive_seed(seed, &[13, k, 2]))?;
        if !pres.is_injective() {
            continue;
        }
        let c = cokernel(&pres)?;
        let want = iota(&q, &theta)?;
        coker.record(c.dim().as_class() == want, || {
            format!("dimv Coker = {}, ι(θ) = {want:?}", c.dim())
        });
        for j in 0..5u64 {
            let d = random_dim_vector(&q, 3, derive_seed(seed, &[13, k, 3, j]));
            let m = random_module(&q, &d, f, derive_seed(seed, &[13, k, 4, j]))?;
            let lhs = theta_value(&theta, &m);
            let rhs = hom_dim(&c, &m)? as i64 - ext1_dim(&c, &m)? as i64;
            lemma.record(lhs == rhs, || format!("θ(M) = {lhs}, hom - ext = {rhs}"));
        }
    }
    out.push(lemma.finish("presentations", "theta_value_is_hom_minus_ext"));
    out.push(coker.finish("presentations", "cokernel_dimension"));

    let mut minimal = Tally::new();
    for k in 0..100u64 {
        let q = random_acyclic_quiver(derive_seed(seed, &[14, k]), 4, 5);
        let d = random_dim_vector(&q, 3, derive_seed(seed, &[14, k, 1]));
        let theta = iota_inverse(&q, &d)?;
        let pres = sample_presentation(&q, &theta, f, derive_seed(seed, &[14, k, 2]))?;
        if pres.is_injective() {
            let c = cokernel(&pres)?;
            minimal.record(c.dim() == &d, || {
                format!("Coker of ι⁻¹({d}) has dim {}", c.dim())
            });
        }
    }
    out.push(minimal.finish("presentations", "presentation_of_dimension_vector"));

    let mut agree = Tally::new();
    for p in [2u64, 3] {
        let fp = FieldSpec::new(p)?;
        for q in [bundled::k2(), bundled::k3()] {
            let arrows = q.num_arrows();
            for code in 0..p.pow(arrows as u32) {
                let mats: Vec<Matrix> = (0..arrows)
                    .map(|a| Matrix::from_flat(1, 1, vec![(code / p.pow(a as u32)) % p]))
                    .collect();
                let m = RepModule::new(q.clone(), fp, DimVector(vec![1, 1]), mats)?;
                let theta: ThetaVector = iota_inverse(&q, m.dim())?;
                if !fast_path_eligible(&m, &theta)? {
                    continue;
                }
                let ex = in_fbar_theta_oracle(&m, &theta, FbarMode::Exhaustive)?;
                let fast = in_fbar_theta_oracle(&m, &theta, FbarMode::FastPath)?;
                agree.record(ex.member == fast.member, || {
                    format!("oracles disagree on {}", m.to_json())
                });
            }
        }
    }
    out.push(agree.finish("presentations", "fbar_oracles_agree"));
    Ok(())
}

fn extend(seed: u64, out: &mut Vec<Check>) -> Result<()> {
    let single = |name: &str| is_semibrick(vec![bundled::module(name).unwrap()]);
    for (name, label) in [("R1", "desk_extension_k2"), ("K3-R", "desk_extension_k3")] {
        let s = single(name)?;
        let mut ok = 0;
        let mut sound = Tally::new();
        for k in 0..100u64 {
            let r = extend_semibrick(&s, 0, 1, 40, derive_seed(seed, &[15, k]))?;
            if let Some(cert) = r.certificate {
                ok += 1;
                sound.record(verify_certificate(&s, 0, &cert)?, || {
                    format!("seed index {k}")
                });
            }
        }
        out.push(threshold("extend", label, 100, ok, 99));
        out.push(sound.finish(
            "extend",
            if name == "R1" {
                "certificate_soundness_k2"
            } else {
                "certificate_soundness_k3"
            },
        ));
    }

    let s = single("R1")?;
    let g = grow_semibrick(&s, 0, 10, 6, 40, derive_seed(seed, &[16]))?;
    let mut mono = Tally::new();
    mono.record(!g.partial && g.semibrick.len() == 10, || {
        format!("grew to {}", g.semibrick.len())
    });
    mono.record(g.semibrick.members()[0] == s.members()[0], || {
        "input not a prefix".into()
    });
    for n in 1..=g.semibrick.len() {
        mono.record(
            is_semibrick(g.semibrick.members()[..n].to_vec()).is_ok(),
            || format!("prefix {n}"),
        );
    }
    out.push(mono.finish("extend", "monotone_growth"));

    let a = extend_semibrick(&s, 0, 3, 40, seed)?.certificate;
    let b = extend_semibrick(&s, 0, 3, 40, seed)?.certificate;
    let mut det = Tally::new();
    det.record(a.is_some() && a == b, || "certificates differ".into());
    out.push(det.finish("extend", "determinism"));

    let v = |x: &[usize]| DimVector(x.to_vec());
    let probes = [
        (
            vec!["S1", "S2"],
            vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1])],
            ProbeVerdict::ConsistentMaximal,
        ),
        (
            vec!["A1-S1"],
            vec![v(&[1]), v(&[2]), v(&[3])],
            ProbeVerdict::ConsistentMaximal,
        ),
        (vec!["R1"], vec![v(&[1, 1])], ProbeVerdict::NotMaximal),
        (vec!["K3-R"], vec![v(&[1, 1])], ProbeVerdict::NotMaximal),
    ];
    let mut monitor = Tally::new();
    for (i, (names, pool, want)) in probes.iter().enumerate() {
        let s = is_semibrick(names.iter().map(|n| bundled::module(n).unwrap()).collect())?;
        let r = maximality_probe(&s, pool, 200, derive_seed(seed, &[17, i as u64]))?;
        monitor.record(
            r.verdict == *want && r.verdict != ProbeVerdict::ViolationSuspected,
            || format!("{names:?}: {:?}", r.verdict),
        );
    }
    out.push(monitor.finish("extend", "maximality_monitor"));
    Ok(())
}

fn kronecker(seed: u64, out: &mut Vec<Check>) -> Result<()> {
    let f = FieldSpec::default();
    let v = |x: &[usize]| DimVector(x.to_vec());
    let cases = [
        (bundled::k2(), v(&[1, 2]), SchurVerdict::Real),
        (bundled::k2(), v(&[1, 1]), SchurVerdict::Tame),
        (bundled::k3(), v(&[1, 1]), SchurVerdict::Wild),
        (bundled::k2(), v(&[2, 2]), SchurVerdict::ProbablyNotSchur),
    ];
    let mut t = Tally::new();
    for (i, (q, d, want)) in cases.iter().enumerate() {
        let c = classify_schur_root(q, d, f, derive_seed(seed, &[18, i as u64]), 40)?;
        t.record(c.verdict == *want && c.mismatch.is_none(), || {
            format!("{d}: {:?}", c.verdict)
        });
    }
    out.push(t.finish("decompose", "kronecker_trichotomy"));
    Ok(())
}

/// Runs every invariant check. Only the seed influences the outcome.
pub fn run_selftest(seed: u64) -> Result<SelftestReport> {
    let mut checks = Vec::new();
    core_algebra(seed, &mut checks)?;
    modrep(seed, &mut checks)?;
    homology(seed, &mut checks)?;
    decompose(seed, &mut checks)?;
    kronecker(seed, &mut checks)?;
    presentations(seed, &mut checks)?;
    extend(seed, &mut checks)?;
    Ok(SelftestReport {
        seed,
        prime: FieldSpec::default().p(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}
