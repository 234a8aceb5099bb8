use semibrick_core::decompose::{
    DEFAULT_CANON_SAMPLES, DEFAULT_INDEC_TRIALS, DEFAULT_SCHUR_TRIALS,
};
use semibrick_core::extend::{DEFAULT_EXTEND_TRIALS, DEFAULT_LMAX};
use semibrick_core::homology::{find_isomorphism, ISO_TRIALS};
use semibrick_core::presentations::{cokernel, FbarMode};
use semibrick_core::{
    canonical_decomposition, classify_schur_root, decompose_indec, ext1_dim, extend_semibrick,
    fei_generic_perp_search, generic_hom_dim, grow_semibrick, hom_dim, hom_space,
    in_fbar_theta_oracle, iota, is_open_brick, is_semibrick, maximality_probe, run_selftest,
    sample_presentation, theta_value, CoreError, FieldSpec, ProbeVerdict, RepModule, Semibrick,
};
use serde_json::{json, Value};

use crate::input::{self, positive, CliError, CliResult, Inputs};
use crate::report::{map_json, Report};
use crate::{Command, Opts};

pub const DEFAULT_FEI_TRIALS: usize = 20;
pub const DEFAULT_PROBE_TRIALS: usize = 200;
pub const DEFAULT_GENERIC_SAMPLES: usize = 100;

type Handler = fn(&Opts) -> CliResult<(Report, u8)>;

pub fn run(cmd: Command) -> CliResult<u8> {
    let (opts, f): (Opts, Handler) = match cmd {
        Command::Hom(o) => (o, hom),
        Command::Ext(o) => (o, ext),
        Command::Brick(o) => (o, brick),
        Command::Semibrick(o) => (o, semibrick),
        Command::Iso(o) => (o, iso),
        Command::Open(o) => (o, open),
        Command::Schur(o) => (o, schur),
        Command::Classify(o) => (o, classify),
        Command::Candecomp(o) => (o, candecomp),
        Command::Decompose(o) => (o, decompose),
        Command::Theta(o) => (o, theta),
        Command::Present(o) => (o, present),
        Command::Fbar(o) => (o, fbar),
        Command::Fei(o) => (o, fei),
        Command::Extend(o) => (o, extend),
        Command::Grow(o) => (o, grow),
        Command::Probe(o) => (o, probe),
        Command::GenericHom(o) => (o, generic_hom),
        Command::Selftest(o) => (o, selftest),
    };
    let (report, code) = f(&opts)?;
    print!("{}", report.render(opts.json));
    Ok(code)
}

fn flag(b: bool) -> u8 {
    if b {
        0
    } else {
        1
    }
}

fn base(name: &str, opts: &Opts, inputs: &Inputs) -> CliResult<(Report, FieldSpec)> {
    let all: Vec<RepModule> = inputs
        .modules
        .iter()
        .chain(&inputs.members)
        .cloned()
        .collect();
    let field = input::field(opts, &all)?;
    Ok((Report::new(name, field, Some(opts.seed)), field))
}

fn hom(opts: &Opts) -> CliResult<(Report, u8)> {
    let inputs = input::load(opts)?;
    let [m, n] = inputs.modules(2, "hom")? else {
        unreachable!()
    };
    let (r, _) = base("hom", opts, &inputs)?;
    let h = hom_space(m, n)?;
    let basis: Vec<Value> = h.basis.iter().map(|g| map_json(m.quiver(), g)).collect();
    Ok((r.with("hom_dim", h.dim).with("basis", basis), 0))
}

fn ext(opts: &Opts) -> CliResult<(Report, u8)> {
    let inputs = input::load(opts)?;
    let [m, n] = inputs.modules(2, "ext")? else {
        unreachable!()
    };
    let (r, _) = base("ext", opts, &inputs)?;
    Ok((r.with("ext1_dim", ext1_dim(m, n)?), 0))
}

fn brick(opts: &Opts) -> CliResult<(Report, u8)> {
    let inputs = input::load(opts)?;
    let [m] = inputs.modules(1, "brick")? else {
        unreachable!()
    };
    let (r, _) = base("brick", opts, &inputs)?;
    let end_dim = hom_dim(m, m)?;
    Ok((
        r.with("is_brick", end_dim == 1).with("end_dim", end_dim),
        flag(end_dim == 1),
    ))
}

fn semibrick_of(members: Vec<RepModule>) -> CliResult<Semibrick> {
    Ok(is_semibrick(members)?)
}

fn semibrick(opts: &Opts) -> CliResult<(Report, u8)> {
    let inputs = input::load(opts)?;
    let (mut r, _) = base("semibrick", opts, &inputs)?;
    r.set("size", inputs.members()?.len());
    match is_semibrick(inputs.members()?) {
        Ok(s) => {
            r.set("is_semibrick", true);
            r.set("hom_dims", s.certificate());
            Ok((r, 0))
        }
        Err(CoreError::NotASemibrick(v)) => {
            r.set("is_semibrick", false);
            r.set("violation", &v);
            r.set("reason", v.to_string());
            Ok((r, 1))
        }
        Err(e) => Err(e.into()),
    }
}

fn iso(opts: &Opts) -> CliResult<(Report, u8)> {
    let inputs = input::load(opts)?;
    let [m, n] = inputs.modules(2, "iso")? else {
        unreachable!()
    };
    let trials = positive(opts.trials, ISO_TRIALS, "--trials")?;
    let (r, _) = base("iso", opts, &inputs)?;
    let w = find_isomorphism(m, n, trials, opts.seed)?;
    let mut r = r
        .budgets(&[("trials", trials)])
        .with("isomorphic", w.is_some());
    if let Some(g) = &w {
        r.set("witness", map_json(m.quiver(), g));
    }
    Ok((r, flag(w.is_some())))
}

fn open(opts: &Opts) -> CliResult<(Report, u8)> {
    let inputs = input::load(opts)?;
    let [m] = inputs.modules(1, "open")? else {
        unreachable!()
    };
    let (r, _) = base("open", opts, &inputs)?;
    match is_open_brick(m) {
        Ok(o) => Ok((
            r.with("is_brick", true)
                .with("ext1_self", ext1_dim(m, m)?)
                .with("is_open", o),
            flag(o),
        )),
        Err(CoreError::NotABrick { end_dim }) => Ok((
            r.with("is_brick", false)
                .with("end_dim", end_dim)
                .with("is_open", false),
            1,
        )),
        Err(e) => Err(e.into()),
    }
}

fn schur_inputs(opts: &Opts) -> CliResult<(Report, semibrick_core::SchurClassification, usize)> {
    let inputs = input::load(opts)?;
    let q = inputs.quiver()?;
    let d = input::one_dim(opts, &q)?;
    let trials = positive(opts.trials, DEFAULT_SCHUR_TRIALS, "--trials")?;
    let (r, field) = base("classify", opts, &inputs)?;
    let c = classify_schur_root(&q, &d, field, opts.seed, trials)?;
    Ok((r.budgets(&[("trials", trials)]).with("dim", &d), c, trials))
}

fn schur(opts: &Opts) -> CliResult<(Report, u8)> {
    let (r, c, _) = schur_inputs(opts)?;
    let r = r
        .with("command", "schur")
        .with("is_schur", c.verdict.is_schur())
        .with("samples_drawn", c.samples_drawn)
        .with("q_value", c.q_value);
    Ok((r, flag(c.verdict.is_schur())))
}

fn classify(opts: &Opts) -> CliResult<(Report, u8)> {
    let (r, c, _) = schur_inputs(opts)?;
    let ok = c.verdict.is_schur();
    Ok((
        r.with("classification", &c).with("verdict", c.verdict),
        flag(ok),
    ))
}

fn candecomp(opts: &Opts) -> CliResult<(Report, u8)> {
    let inputs = input::load(opts)?;
    let q = inputs.quiver()?;
    let d = input::one_dim(opts, &q)?;
    let samples = positive(opts.samples, DEFAULT_CANON_SAMPLES, "--samples")?;
    let (r, field) = base("candecomp", opts, &inputs)?;
    let c = canonical_decomposition(&q, &d, field, opts.seed, samples)?;
    let grouped: Vec<Value> = c
        .grouped()
        .iter()
        .map(|(d, k)| json!({"dim": d, "multiplicity": k}))
        .collect();
    let r = r
        .budgets(&[("samples", samples)])
        .with("dim", &d)
        .with("summands", grouped)
        .with("votes", c.votes)
        .with("disagreement", c.disagreement)
        .with("retried", c.retried)
        .with("vote_prime", c.prime);
    Ok((r, 0))
}

fn decompose(opts: &Opts) -> CliResult<(Report, u8)> {
    let inputs = input::load(opts)?;
    let [m] = inputs.modules(1, "decompose")? else {
        unreachable!()
    };
    let trials = positive(opts.trials, DEFAULT_INDEC_TRIALS, "--trials")?;
    let (r, _) = base("decompose", opts, &inputs)?;
    let dec = decompose_indec(m, opts.seed, trials)?;
    let summands: Vec<Value> = dec
        .summands
        .iter()
        .map(|s| {
            json!({
                "dim": s.module.dim(),
                "multiplicity": s.multiplicity,
                "splitting_degree": s.splitting_degree,
                "indecomposable": s.certainty,
                "module": s.module.to_json(),
            })
        })
        .collect();
    let r = r
        .budgets(&[("trials", trials)])
        .with("summands", summands)
        .with("block_dims", dec.dim_vectors())
        .with("geometric_dims", dec.geometric_dim_vectors())
        .with("witness", map_json(m.quiver(), &dec.basis_change))
        .with("witness_verified", dec.verify(m));
    Ok((r, 0))
}

fn theta(opts: &Opts) -> CliResult<(Report, u8)> {
    let inputs = input::load(opts)?;
    let [m] = inputs.modules(1, "theta")? else {
        unreachable!()
    };
    let th = input::theta(opts, m.quiver())?;
    let (r, _) = base("theta", opts, &inputs)?;
    let mut r = r
        .with("theta", &th)
        .with("theta_value", theta_value(&th, m));
    if m.quiver().is_path_algebra() {
        r.set("iota", iota(m.quiver(), &th)?);
    }
    Ok((r, 0))
}

fn present(opts: &Opts) -> CliResult<(Report, u8)> {
    let inputs = input::load(opts)?;
    let q = inputs.quiver()?;
    let th = input::theta(opts, &q)?;
    let (r, field) = base("present", opts, &inputs)?;
    let pres = sample_presentation(&q, &th, field, opts.seed)?;
    let c = cokernel(&pres)?;
    let injective = pres.is_injective();
    let mut r = r
        .with("theta", &th)
        .with("iota", iota(&q, &th)?)
        .with("p0", pres.p0.to_json())
        .with("p1", pres.p1.to_json())
        .with("f", pres.map_json())
        .with("injective", injective)
        .with("cokernel_dim", c.dim())
        .with("cokernel", c.to_json());
    if !injective {
        r.set(
            "note",
            "f is not injective; the θ-value identity is only verified for injective f",
        );
    }
    Ok((r, 0))
}

fn fbar(opts: &Opts) -> CliResult<(Report, u8)> {
    let inputs = input::load(opts)?;
    let [m] = inputs.modules(1, "fbar")? else {
        unreachable!()
    };
    let th = input::theta(opts, m.quiver())?;
    let mode = match opts.mode.as_str() {
        "auto" => FbarMode::Auto,
        "exhaustive" => FbarMode::Exhaustive,
        "fast-path" => FbarMode::FastPath,
        other => return Err(CliError::Usage(format!("unknown --mode '{other}'"))),
    };
    let (r, _) = base("fbar", opts, &inputs)?;
    let v = in_fbar_theta_oracle(m, &th, mode)?;
    Ok((
        r.with("theta", &th)
            .with("mode", mode)
            .with("verdict", &v)
            .with("member", v.member),
        flag(v.member),
    ))
}

fn fei(opts: &Opts) -> CliResult<(Report, u8)> {
    let inputs = input::load(opts)?;
    let [m] = inputs.modules(1, "fei")? else {
        unreachable!()
    };
    let q = inputs.quiver()?;
    let th = input::theta(opts, &q)?;
    let l_max = positive(opts.lmax, DEFAULT_LMAX, "--lmax")?;
    let trials = positive(opts.trials, DEFAULT_FEI_TRIALS, "--trials")?;
    let (r, _) = base("fei", opts, &inputs)?;
    let s = fei_generic_perp_search(&q, &th, m, l_max, trials, opts.seed)?;
    let mut r = r
        .budgets(&[("lmax", l_max), ("trials", trials)])
        .with("theta", &th)
        .with("hypothesis", s.hypothesis)
        .with("hypothesis_rule", s.hypothesis_rule)
        .with("stats", &s.stats)
        .with("found", s.found.is_some());
    match &s.found {
        Some(w) => {
            r.set("l", w.l);
            r.set("trial", w.trial);
            r.set("f", w.presentation.map_json());
            r.set("cokernel", w.cokernel.to_json());
            Ok((r, 0))
        }
        None => Ok((r.with("status", "exhausted"), 3)),
    }
}

fn extend(opts: &Opts) -> CliResult<(Report, u8)> {
    let inputs = input::load(opts)?;
    let s = semibrick_of(inputs.members()?)?;
    let l_max = positive(opts.lmax, DEFAULT_LMAX, "--lmax")?;
    let trials = positive(opts.trials, DEFAULT_EXTEND_TRIALS, "--trials")?;
    let (r, _) = base("extend", opts, &inputs)?;
    let out = extend_semibrick(&s, opts.member, l_max, trials, opts.seed)?;
    let mut r = r
        .budgets(&[("lmax", l_max), ("trials", trials)])
        .with("member", opts.member)
        .with("base_dim", &out.base_dim)
        .with("root_type", out.root_type)
        .with("base_exceptional", out.base_exceptional)
        .with("stats", &out.stats);
    if let Some(w) = out.warning {
        r.set("warning", w);
    }
    match &out.certificate {
        Some(c) => Ok((r.with("found", true).with("certificate", c.to_json()), 0)),
        None => Ok((r.with("found", false).with("status", "exhausted"), 3)),
    }
}

fn grow(opts: &Opts) -> CliResult<(Report, u8)> {
    let inputs = input::load(opts)?;
    let s = semibrick_of(inputs.members()?)?;
    let target = opts
        .target
        .ok_or_else(|| CliError::Usage("--target is required".into()))?;
    let l_max = positive(opts.lmax, DEFAULT_LMAX, "--lmax")?;
    let trials = positive(opts.trials, DEFAULT_EXTEND_TRIALS, "--trials")?;
    let (r, _) = base("grow", opts, &inputs)?;
    let g = grow_semibrick(&s, opts.member, target, l_max, trials, opts.seed)?;
    let members: Vec<Value> = g
        .semibrick
        .members()
        .iter()
        .map(RepModule::to_json)
        .collect();
    let certs: Vec<Value> = g.certificates.iter().map(|c| c.to_json()).collect();
    let mut r = r
        .budgets(&[("target", target), ("lmax", l_max), ("trials", trials)])
        .with("size", g.semibrick.len())
        .with("partial", g.partial)
        .with("members", members)
        .with("certificates", certs);
    if let Some(w) = g.warning {
        r.set("warning", w);
    }
    if let Some(st) = &g.exhausted_stats {
        r.set("exhausted_stats", st);
    }
    Ok((r, if g.partial { 3 } else { 0 }))
}

fn probe(opts: &Opts) -> CliResult<(Report, u8)> {
    let inputs = input::load(opts)?;
    let s = semibrick_of(inputs.members()?)?;
    let q = s.quiver().expect("members are nonempty").clone();
    let pool = input::dims(opts, &q)?;
    if pool.is_empty() {
        return Err(CliError::Usage("probe needs at least one --dim".into()));
    }
    let trials = positive(opts.trials, DEFAULT_PROBE_TRIALS, "--trials")?;
    let (r, _) = base("probe", opts, &inputs)?;
    let p = maximality_probe(&s, &pool, trials, opts.seed)?;
    let ext: Vec<Value> = p
        .extensions
        .iter()
        .map(|h| json!({"dim": h.dim, "trial": h.trial, "count": h.count, "module": h.module.to_json()}))
        .collect();
    let code = match p.verdict {
        ProbeVerdict::ConsistentMaximal => 0,
        ProbeVerdict::NotMaximal => 1,
        ProbeVerdict::ViolationSuspected => 3,
    };
    let r = r
        .budgets(&[("trials", trials)])
        .with("pool", &pool)
        .with("verdict", p.verdict)
        .with("members_open", &p.members_open)
        .with("extensions", ext);
    Ok((r, code))
}

fn generic_hom(opts: &Opts) -> CliResult<(Report, u8)> {
    let inputs = input::load(opts)?;
    let q = inputs.quiver()?;
    let dims = input::dims(opts, &q)?;
    let [d, e] = dims.as_slice() else {
        return Err(CliError::Usage(
            "generic-hom needs exactly two --dim arguments".into(),
        ));
    };
    let samples = positive(opts.samples, DEFAULT_GENERIC_SAMPLES, "--samples")?;
    let (r, field) = base("generic-hom", opts, &inputs)?;
    let g = generic_hom_dim(&q, d, e, field, samples, opts.seed)?;
    let r = r
        .budgets(&[("samples", samples)])
        .with("d", d)
        .with("e", e)
        .with("min", g.min)
        .with("attained", g.attained)
        .with("fraction", g.fraction());
    Ok((r, 0))
}

fn selftest(opts: &Opts) -> CliResult<(Report, u8)> {
    let rep = run_selftest(opts.seed)?;
    let r = Report::new("selftest", FieldSpec::default(), Some(opts.seed))
        .with("passed", rep.passed)
        .with("checks", &rep.checks);
    Ok((r, flag(rep.passed)))
}
