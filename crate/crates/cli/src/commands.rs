use std::path::{Path, PathBuf};

use num_traits::{Signed, Zero};
use quasicop::{
    analyze_family, build_pbox, check_coherence, check_imprecise, envelope, exact_cap, l_value, mixed_volumes,
    patch_sweep, pbox_member, sandwich_decide, sklar_compose, sklar_decompose, Axis, Bound, CoherenceReport, Error,
    FeasibilityCertificate, GridFunction, MembershipFailure, Mesh, QReport, Rational, RestrictedPBox, Violation,
};
use serde_json::{json, Map, Value};

use crate::doc::{load_grid, load_margin, save_grid, save_margin};
use crate::render;
use crate::{AxisArg, CapArgs, CheckCommand, Cli, CliError, Command, ConstructCommand, FamilyCommand, Method};
use crate::{PboxCommand, SklarCommand};

pub struct Outcome {
    pub positive: bool,
    pub report: Value,
}

type Result<T> = std::result::Result<T, CliError>;

fn fail(msg: impl Into<String>) -> CliError {
    CliError::Verify(msg.into())
}

fn outcome(echo: Vec<String>, positive: bool, verdict: &str, body: Value) -> Outcome {
    let mut report = Map::new();
    report.insert("command".into(), json!(echo));
    report.insert("verdict".into(), json!(verdict));
    if let Value::Object(fields) = body {
        report.extend(fields);
    }
    Outcome { positive, report: Value::Object(report) }
}

fn cap_for(mesh: &Mesh, cap: CapArgs) -> usize {
    if cap.exact {
        exact_cap(mesh)
    } else {
        cap.max_rects
    }
}

fn save_opt(f: &GridFunction, path: &Option<PathBuf>) -> Result<()> {
    match path {
        Some(p) => save_grid(f, p),
        None => Ok(()),
    }
}

pub fn run(cli: &Cli, echo: Vec<String>) -> Result<Outcome> {
    let verify = cli.verify;
    match &cli.command {
        Command::Check(CheckCommand::Dist { grid }) => check_dist(echo, grid, verify),
        Command::Check(CheckCommand::Imprecise { lower, upper }) => check_ic(echo, lower, upper, verify),
        Command::Check(CheckCommand::Coherence { lower, upper, cap }) => check_pair(echo, lower, upper, *cap, verify),
        Command::Construct(ConstructCommand::Sandwich { lower, upper, method, save }) => {
            sandwich(echo, lower, upper, *method, save, verify)
        }
        Command::Sklar(SklarCommand::Decompose { grid, save, save_fx, save_fy }) => {
            decompose(echo, grid, save, save_fx, save_fy, verify)
        }
        Command::Sklar(SklarCommand::Compose { copula, fx, fy, save }) => compose(echo, copula, fx, fy, save),
        Command::Pbox(PboxCommand::Build { lower, upper, fx, fy, cap, save_lower, save_upper }) => {
            pbox_build(echo, [lower, upper, fx, fy], *cap, save_lower, save_upper, verify)
        }
        Command::Pbox(PboxCommand::Member { lower, upper, grid }) => member(echo, lower, upper, grid, verify),
        Command::Family(FamilyCommand::Analyze { grids, cap }) => family(echo, grids, *cap, verify),
        Command::Reflect { grid, axis, save } => reflect(echo, grid, *axis, save),
        Command::Envelope { grids, save_lower, save_upper } => envelope_cmd(echo, grids, save_lower, save_upper),
    }
}

fn verify_violation(f: &GridFunction, v: &Violation) -> Result<()> {
    match v {
        Violation::Point { i, j, value } => {
            if f.get(*i, *j) != value || value.is_zero() {
                return Err(fail(format!("grounding witness at ({i}, {j}) does not reproduce")));
            }
        }
        Violation::Rect { rect, volume } => {
            if &f.volume(rect)? != volume || !volume.is_negative() {
                return Err(fail(format!("volume witness {rect:?} does not reproduce")));
            }
        }
    }
    Ok(())
}

fn check_dist(echo: Vec<String>, path: &Path, verify: bool) -> Result<Outcome> {
    let f = load_grid(path)?;
    let c = f.classify();
    if verify {
        for v in [&c.a_violation, &c.b_violation, &c.c_violation].into_iter().flatten() {
            verify_violation(&f, v)?;
        }
    }
    let verdict = if c.holds_c {
        "distribution"
    } else if c.holds_b {
        "quasi-distribution"
    } else if c.holds_a {
        "grounded"
    } else {
        "not grounded"
    };
    let mesh = f.mesh();
    let witness = |v: &Option<Violation>| v.as_ref().map(|v| render::violation(mesh, v));
    let body = json!({
        "conditions": { "A": c.holds_a, "B": c.holds_b, "C": c.holds_c },
        "violations": { "A": witness(&c.a_violation), "B": witness(&c.b_violation), "C": witness(&c.c_violation) },
    });
    Ok(outcome(echo, c.holds_c, verdict, body))
}

fn check_ic(echo: Vec<String>, lower: &Path, upper: &Path, verify: bool) -> Result<Outcome> {
    let (p, q) = (load_grid(lower)?, load_grid(upper)?);
    let report = check_imprecise(&p, &q)?;
    let mesh = p.mesh();
    let mut axioms = Map::new();
    for (k, a) in report.axioms.iter().enumerate() {
        if verify {
            if let Some((r, v)) = &a.witness {
                if &mixed_volumes(&p, &q, r)[k] != v || !v.is_negative() {
                    return Err(fail(format!("IC{} witness does not reproduce", k + 1)));
                }
            }
        }
        let witness =
            a.witness.as_ref().map(|(r, v)| json!({ "rect": render::rect(mesh, r), "volume": render::rational(v) }));
        axioms.insert(format!("IC{}", k + 1), json!({ "holds": a.holds, "witness": witness }));
    }
    let positive = report.passes();
    let verdict = if positive { "imprecise copula" } else { "not an imprecise copula" };
    Ok(outcome(echo, positive, verdict, json!({ "axioms": axioms })))
}

/// Re-checks the sandwich certificate and every bound failure of a report.
fn verify_coherence(a: &GridFunction, b: &GridFunction, report: &CoherenceReport) -> Result<()> {
    report.feasibility.verify(a, b).map_err(|e| fail(e.to_string()))?;
    for f in &report.failures {
        let g = f.bound.witness.as_ref().ok_or_else(|| fail("finite bound without a gaggle"))?;
        let m = g.multiplicity().get(f.point);
        let expected_sign = match f.side {
            quasicop::Side::Opposite => m < 0,
            quasicop::Side::Main => m > 0,
        };
        let ratio = l_value(a, b, g)? / Rational::from_integer(m.abs().into());
        if !expected_sign || f.bound.value != Bound::Finite(ratio.clone()) || f.gap <= ratio {
            return Err(fail(format!("bound failure at {:?} does not reproduce", f.point)));
        }
        if b.at(f.point) - a.at(f.point) != f.gap {
            return Err(fail(format!("gap at {:?} does not reproduce", f.point)));
        }
    }
    Ok(())
}

fn check_pair(echo: Vec<String>, lower: &Path, upper: &Path, cap: CapArgs, verify: bool) -> Result<Outcome> {
    let (a, b) = (load_grid(lower)?, load_grid(upper)?);
    let max_rects = cap_for(a.mesh(), cap);
    let report = check_coherence(&a, &b, max_rects)?;
    if verify {
        verify_coherence(&a, &b, &report)?;
    }
    let positive = report.coherent();
    let verdict = if positive { "coherent" } else { "not coherent" };
    let mut body = render::coherence(a.mesh(), &report);
    body["max_rects"] = json!(max_rects);
    Ok(outcome(echo, positive, verdict, body))
}

fn verify_witness(w: &GridFunction, a: &GridFunction, b: &GridFunction) -> Result<()> {
    if !w.classify().holds_c {
        return Err(fail("witness is not a distribution"));
    }
    if !(a.le(w) && w.le(b)) {
        return Err(fail("witness leaves the bounds"));
    }
    if w.margin_mismatch(a).is_some() {
        return Err(fail("witness margins differ from the bounds"));
    }
    Ok(())
}

fn verify_q(a: &GridFunction, b: &GridFunction, r: &QReport) -> Result<()> {
    if let Some((i, j)) = r.q1_violation {
        if a.get(i, j) <= b.get(i, j) {
            return Err(fail("(Q1) witness does not reproduce"));
        }
    }
    if let Some((g, l)) = &r.q2_witness {
        if &l_value(a, b, g)? != l || !l.is_negative() {
            return Err(fail("(Q2) witness does not reproduce"));
        }
    }
    Ok(())
}

fn sandwich(
    echo: Vec<String>,
    lower: &Path,
    upper: &Path,
    method: Method,
    save: &Option<PathBuf>,
    verify: bool,
) -> Result<Outcome> {
    let (a, b) = (load_grid(lower)?, load_grid(upper)?);
    let mesh = a.mesh().clone();
    match method {
        Method::Lp => {
            let cert = sandwich_decide(&a, &b)?;
            if verify {
                cert.verify(&a, &b).map_err(|e| fail(e.to_string()))?;
            }
            if let FeasibilityCertificate::Feasible { witness } = &cert {
                save_opt(witness, save)?;
            }
            let positive = cert.is_feasible();
            let verdict = if positive { "feasible" } else { "infeasible" };
            let body = json!({ "method": "lp", "sandwich": render::certificate(&mesh, &cert) });
            Ok(outcome(echo, positive, verdict, body))
        }
        Method::Patch => match patch_sweep(&a, &b, exact_cap(&mesh)) {
            Ok(trace) => {
                if verify {
                    verify_witness(&trace.final_grid, &a, &b)?;
                }
                save_opt(&trace.final_grid, save)?;
                let steps: Vec<Value> = trace
                    .steps
                    .iter()
                    .map(|s| json!({ "point": render::point(&mesh, s.point), "t": render::rational(&s.t) }))
                    .collect();
                let body = json!({
                    "method": "patch",
                    "sandwich": { "feasible": true, "witness": render::grid(&trace.final_grid) },
                    "steps": steps,
                });
                Ok(outcome(echo, true, "feasible", body))
            }
            Err(Error::QCheckFailed(report)) => {
                if verify {
                    verify_q(&a, &b, &report)?;
                }
                let mut sandwich = json!({ "feasible": false });
                if let Some((g, l)) = &report.q2_witness {
                    sandwich["gaggle"] = render::gaggle(&mesh, g);
                    sandwich["L"] = render::rational(l);
                }
                let body = json!({ "method": "patch", "sandwich": sandwich, "q": render::q_report(&mesh, &report) });
                Ok(outcome(echo, false, "infeasible", body))
            }
            Err(e) => Err(e.into()),
        },
    }
}

fn decompose(
    echo: Vec<String>,
    path: &Path,
    save: &Option<PathBuf>,
    save_fx: &Option<PathBuf>,
    save_fy: &Option<PathBuf>,
    verify: bool,
) -> Result<Outcome> {
    let f = load_grid(path)?;
    let class = f.classify();
    if !class.holds_b {
        let v = class.a_violation.or(class.b_violation);
        if verify {
            if let Some(v) = &v {
                verify_violation(&f, v)?;
            }
        }
        let body = json!({ "violation": v.map(|v| render::violation(f.mesh(), &v)) });
        return Ok(outcome(echo, false, "not a quasi-distribution", body));
    }
    let (c, fx, fy) = sklar_decompose(&f)?;
    if verify && sklar_compose(&c, &fx, &fy)? != f {
        return Err(fail("composing the parts does not give the input"));
    }
    save_opt(&c, save)?;
    if let Some(p) = save_fx {
        save_margin(&fx, p)?;
    }
    if let Some(p) = save_fy {
        save_margin(&fy, p)?;
    }
    let body = json!({ "copula": render::grid(&c), "fx": render::margin(&fx), "fy": render::margin(&fy) });
    Ok(outcome(echo, true, "decomposed", body))
}

fn compose(echo: Vec<String>, copula: &Path, fx: &Path, fy: &Path, save: &Option<PathBuf>) -> Result<Outcome> {
    let c = load_grid(copula)?;
    let (mx, my) = (load_margin(fx)?, load_margin(fy)?);
    let f = sklar_compose(&c, &mx, &my)?;
    save_opt(&f, save)?;
    Ok(outcome(echo, true, "composed", json!({ "grid": render::grid(&f) })))
}

fn pbox_build(
    echo: Vec<String>,
    [lower, upper, fx, fy]: [&PathBuf; 4],
    cap: CapArgs,
    save_lower: &Option<PathBuf>,
    save_upper: &Option<PathBuf>,
    verify: bool,
) -> Result<Outcome> {
    let (p, q) = (load_grid(lower)?, load_grid(upper)?);
    let (mx, my) = (load_margin(fx)?, load_margin(fy)?);
    let max_rects = cap_for(p.mesh(), cap);
    match build_pbox(&p, &q, &mx, &my, max_rects) {
        Ok(pbox) => {
            if verify {
                let recheck = check_coherence(pbox.lower(), pbox.upper(), exact_cap(pbox.lower().mesh()))?;
                if !recheck.coherent() {
                    return Err(fail("composed bounds are not coherent"));
                }
            }
            save_opt(pbox.lower(), save_lower)?;
            save_opt(pbox.upper(), save_upper)?;
            let body = json!({ "lower": render::grid(pbox.lower()), "upper": render::grid(pbox.upper()) });
            Ok(outcome(echo, true, "coherent p-box", body))
        }
        Err(Error::Incoherent(report)) => {
            // The report refers to the copula pair unless that pair passed.
            let (stage, mesh) = if check_coherence(&p, &q, max_rects)?.coherent() {
                ("composed", Mesh::new(mx.axis().clone(), my.axis().clone())?)
            } else {
                ("copula", p.mesh().clone())
            };
            if verify {
                let (a, b) = match stage {
                    "composed" => (sklar_compose(&p, &mx, &my)?, sklar_compose(&q, &mx, &my)?),
                    _ => (p.clone(), q.clone()),
                };
                verify_coherence(&a, &b, &report)?;
            }
            let body = json!({ "stage": stage, "coherence": render::coherence(&mesh, &report) });
            Ok(outcome(echo, false, "not coherent", body))
        }
        Err(e) => Err(e.into()),
    }
}

fn member(echo: Vec<String>, lower: &Path, upper: &Path, grid: &Path, verify: bool) -> Result<Outcome> {
    let (a, b, f) = (load_grid(lower)?, load_grid(upper)?, load_grid(grid)?);
    let pbox = RestrictedPBox::new(a, b)?;
    let result = pbox_member(&pbox, &f);
    if verify && result.is_ok() {
        verify_witness(&f, pbox.lower(), pbox.upper())?;
    }
    let mesh = f.mesh();
    let reason = match &result {
        Ok(()) => Value::Null,
        Err(MembershipFailure::MeshMismatch) => json!({ "mesh_mismatch": true }),
        Err(MembershipFailure::NotDistribution(v)) => {
            json!({ "not_distribution": v.as_ref().map(|v| render::violation(mesh, v)) })
        }
        Err(MembershipFailure::MarginMismatch { axis, coord }) => {
            json!({ "margin_mismatch": { "axis": axis_name(*axis), "coord": coord } })
        }
        Err(MembershipFailure::BelowLower { i, j }) => json!({ "below_lower": render::point(mesh, (*i, *j)) }),
        Err(MembershipFailure::AboveUpper { i, j }) => json!({ "above_upper": render::point(mesh, (*i, *j)) }),
    };
    let positive = result.is_ok();
    let verdict = if positive { "member" } else { "not a member" };
    Ok(outcome(echo, positive, verdict, json!({ "reason": reason })))
}

fn axis_name(axis: Axis) -> &'static str {
    match axis {
        Axis::X => "x",
        Axis::Y => "y",
    }
}

fn family(echo: Vec<String>, paths: &[PathBuf], cap: CapArgs, verify: bool) -> Result<Outcome> {
    let fs = paths.iter().map(|p| load_grid(p)).collect::<Result<Vec<_>>>()?;
    let max_rects = fs.iter().map(|f| cap_for(f.mesh(), cap)).max().unwrap_or(cap.max_rects);
    let report = analyze_family(&fs, max_rects)?;
    let mut positive = true;
    let mut groups = Vec::new();
    for g in &report.groups {
        let (lo, hi) = &g.envelope;
        if verify {
            verify_coherence(lo, hi, &g.coherence)?;
            verify_coherence(g.copulas.lower(), g.copulas.upper(), &g.copula_coherence)?;
        }
        positive &= g.coherence.coherent() && g.copula_coherence.coherent();
        groups.push(json!({
            "members": g.members.iter().map(|&k| paths[k].display().to_string()).collect::<Vec<_>>(),
            "fx": render::margin(&g.margins.0),
            "fy": render::margin(&g.margins.1),
            "lower": render::grid(lo),
            "upper": render::grid(hi),
            "coherence": render::coherence(lo.mesh(), &g.coherence),
            "copula_lower": render::grid(g.copulas.lower()),
            "copula_upper": render::grid(g.copulas.upper()),
            "copula_coherence": render::coherence(g.copulas.lower().mesh(), &g.copula_coherence),
        }));
    }
    let verdict = if positive { "coherent family" } else { "incoherent group" };
    Ok(outcome(echo, positive, verdict, json!({ "max_rects": max_rects, "groups": groups })))
}

fn reflect(echo: Vec<String>, path: &Path, axis: AxisArg, save: &Option<PathBuf>) -> Result<Outcome> {
    let f = load_grid(path)?;
    let axis = match axis {
        AxisArg::X => Axis::X,
        AxisArg::Y => Axis::Y,
    };
    let r = f.reflect(axis)?;
    save_opt(&r, save)?;
    Ok(outcome(echo, true, "reflected", json!({ "axis": axis_name(axis), "grid": render::grid(&r) })))
}

fn envelope_cmd(
    echo: Vec<String>,
    paths: &[PathBuf],
    save_lower: &Option<PathBuf>,
    save_upper: &Option<PathBuf>,
) -> Result<Outcome> {
    let fs = paths.iter().map(|p| load_grid(p)).collect::<Result<Vec<_>>>()?;
    let (lo, hi) = envelope(&fs)?;
    save_opt(&lo, save_lower)?;
    save_opt(&hi, save_upper)?;
    let body = json!({ "lower": render::grid(&lo), "upper": render::grid(&hi) });
    Ok(outcome(echo, true, "envelope", body))
}
