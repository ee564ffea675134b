//! JSON fragments for reports. Every value is an exact string so reports
//! are byte-stable across runs.

use quasicop::{
    format_rational, Bound, BoundFailure, CoherenceReport, FeasibilityCertificate, GridFunction, IndexRect, Mesh,
    QReport, Rational, RectGaggle, Side, UnivariateGrid, Violation,
};
use serde_json::{json, Value};

use crate::doc::{GridDocument, MarginDocument};

pub fn rational(v: &Rational) -> Value {
    Value::String(format_rational(v))
}

pub fn bound(b: &Bound) -> Value {
    match b {
        Bound::Finite(v) => rational(v),
        Bound::Infinite => Value::String("inf".into()),
    }
}

pub fn point(mesh: &Mesh, (i, j): (usize, usize)) -> Value {
    json!([mesh.x().coords()[i].to_string(), mesh.y().coords()[j].to_string()])
}

/// `[x1, x2, y1, y2]`.
pub fn rect(mesh: &Mesh, r: &IndexRect) -> Value {
    let (x, y) = (mesh.x().coords(), mesh.y().coords());
    json!([x[r.i1()].to_string(), x[r.i2()].to_string(), y[r.j1()].to_string(), y[r.j2()].to_string()])
}

pub fn gaggle(mesh: &Mesh, g: &RectGaggle) -> Value {
    Value::Array(g.members().iter().map(|r| rect(mesh, r)).collect())
}

pub fn grid(f: &GridFunction) -> Value {
    serde_json::to_value(GridDocument::from_grid(f)).expect("documents serialize")
}

pub fn margin(m: &UnivariateGrid) -> Value {
    serde_json::to_value(MarginDocument::from_margin(m)).expect("documents serialize")
}

pub fn violation(mesh: &Mesh, v: &Violation) -> Value {
    match v {
        Violation::Point { i, j, value } => json!({ "point": point(mesh, (*i, *j)), "value": rational(value) }),
        Violation::Rect { rect: r, volume } => json!({ "rect": rect(mesh, r), "volume": rational(volume) }),
    }
}

pub fn side(s: Side) -> &'static str {
    match s {
        Side::Opposite => "opposite",
        Side::Main => "main",
    }
}

pub fn certificate(mesh: &Mesh, cert: &FeasibilityCertificate) -> Value {
    match cert {
        FeasibilityCertificate::Feasible { witness } => json!({ "feasible": true, "witness": grid(witness) }),
        FeasibilityCertificate::Infeasible { gaggle: g, l_value } => {
            json!({ "feasible": false, "gaggle": gaggle(mesh, g), "L": rational(l_value) })
        }
    }
}

pub fn failure(mesh: &Mesh, f: &BoundFailure) -> Value {
    json!({
        "point": point(mesh, f.point),
        "side": side(f.side),
        "gap": rational(&f.gap),
        "bound": bound(&f.bound.value),
        "gaggle": f.bound.witness.as_ref().map(|g| gaggle(mesh, g)),
    })
}

pub fn coherence(mesh: &Mesh, r: &CoherenceReport) -> Value {
    json!({
        "coherent": r.coherent(),
        "exact": r.exact,
        "sandwich": certificate(mesh, &r.feasibility),
        "sup_attained": r.sup_attained,
        "inf_attained": r.inf_attained,
        "failures": r.failures.iter().map(|f| failure(mesh, f)).collect::<Vec<_>>(),
    })
}

pub fn q_report(mesh: &Mesh, r: &QReport) -> Value {
    json!({
        "q1": r.q1,
        "q1_violation": r.q1_violation.map(|p| point(mesh, p)),
        "q2": r.q2,
        "q2_witness": r.q2_witness.as_ref().map(|(g, l)| json!({ "gaggle": gaggle(mesh, g), "L": rational(l) })),
        "exact": r.exact,
    })
}
