#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use quasicop::number::{int, ratio};
use quasicop::sample;
use quasicop::{AxisGrid, AxisKind, Coord, GridFunction, IndexRect, Mesh, Rational, UnivariateGrid};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Margins on a random mesh with at most `max_interior` interior points per axis.
pub fn margins(rng: &mut ChaCha8Rng, max_interior: usize, unit: bool) -> (UnivariateGrid, UnivariateGrid) {
    let axis = |rng: &mut ChaCha8Rng| {
        let k = rng.gen_range(1..=max_interior);
        if unit {
            sample::unit_axis(rng, k, 12)
        } else {
            sample::extended_axis(rng, k.max(2))
        }
    };
    let (ax, ay) = (axis(rng), axis(rng));
    if unit && rng.gen_bool(0.5) {
        (UnivariateGrid::identity(ax).unwrap(), UnivariateGrid::identity(ay).unwrap())
    } else {
        let (dx, dy) = (rng.gen_range(2..=6), rng.gen_range(2..=6));
        (sample::margin(rng, ax, dx), sample::margin(rng, ay, dy))
    }
}

pub fn mesh_of(fx: &UnivariateGrid, fy: &UnivariateGrid) -> Mesh {
    Mesh::new(fx.axis().clone(), fy.axis().clone()).unwrap()
}

/// Any grid with values in `[0, 1]`; grounded with identity-like frame when asked.
pub fn arbitrary_grid(rng: &mut ChaCha8Rng, mesh: &Mesh, grounded: bool, denom: i64) -> GridFunction {
    let (p, q) = (mesh.x().last(), mesh.y().last());
    GridFunction::from_fn_indexed(mesh.clone(), |i, j| {
        if grounded && (i == 0 || j == 0) {
            int(0)
        } else if grounded && i == p && j == q {
            int(1)
        } else {
            sample::unit_rational(rng, denom)
        }
    })
    .unwrap()
}

/// A random point of the closed cell `[coords[k], coords[k + 1]]`.
pub fn point_in_cell(rng: &mut ChaCha8Rng, axis: &AxisGrid, k: usize) -> Coord {
    let (lo, hi) = (&axis.coords()[k], &axis.coords()[k + 1]);
    match rng.gen_range(0..4) {
        0 => lo.clone(),
        1 => hi.clone(),
        _ => match (lo, hi) {
            (Coord::Finite(a), Coord::Finite(b)) => {
                let t = ratio(rng.gen_range(1..16), 16);
                Coord::Finite(a + (b - a) * t)
            }
            // Unbounded cells: scale the finite end away from zero.
            (Coord::NegInf, Coord::Finite(a)) | (Coord::Finite(a), Coord::PosInf) => {
                Coord::Finite(a * ratio(rng.gen_range(17..80), 16))
            }
            _ => unreachable!("a cell has a finite end"),
        },
    }
}

/// Two distinct points of one cell, ordered.
pub fn sub_interval(rng: &mut ChaCha8Rng, axis: &AxisGrid, k: usize) -> (Coord, Coord) {
    loop {
        let (a, b) = (point_in_cell(rng, axis, k), point_in_cell(rng, axis, k));
        if a != b {
            return if a < b { (a, b) } else { (b, a) };
        }
    }
}

/// A random point anywhere in the axis domain.
pub fn point_on_axis(rng: &mut ChaCha8Rng, axis: &AxisGrid) -> Coord {
    let k = rng.gen_range(0..axis.last());
    point_in_cell(rng, axis, k)
}

/// A margin on a fresh extended axis whose range contains every coordinate
/// of `unit`, with repeated values for flat pieces.
pub fn full_range_margin(rng: &mut ChaCha8Rng, unit: &AxisGrid, extra: usize) -> UnivariateGrid {
    assert_eq!(unit.kind(), AxisKind::Unit);
    let mut values: Vec<Rational> = unit.coords().iter().map(|c| c.as_finite().unwrap().clone()).collect();
    for _ in 0..extra {
        let k = rng.gen_range(0..values.len());
        values.push(values[k].clone());
    }
    values.sort();
    // -inf carries 0 and inf carries 1; the rest sit on finite points.
    let finite = values.len() - 2;
    let start = -(finite as i64 / 2) - 1;
    let axis = AxisGrid::extended((0..finite as i64).map(|k| int(start + k + 1))).unwrap();
    UnivariateGrid::new(axis, values).unwrap()
}

/// Multiplicities of a set of rectangles, computed from corners.
pub fn corner_multiplicities(rects: &[IndexRect]) -> BTreeMap<(usize, usize), i64> {
    let mut m = BTreeMap::new();
    for r in rects {
        for (pt, s) in [((r.i1(), r.j1()), 1), ((r.i2(), r.j2()), 1), ((r.i2(), r.j1()), -1), ((r.i1(), r.j2()), -1)] {
            *m.entry(pt).or_insert(0) += s;
        }
    }
    m.retain(|_, v| *v != 0);
    m
}

/// Oracle: minimum of `L / |m(x)|` per point and sign by visiting every
/// gaggle with at most `max_members` members.
pub struct BruteBounds {
    pub opposite: BTreeMap<(usize, usize), Rational>,
    pub main: BTreeMap<(usize, usize), Rational>,
    pub min_l: Rational,
}

pub fn brute_bounds(lower: &GridFunction, upper: &GridFunction, max_members: usize) -> BruteBounds {
    let mesh = lower.mesh();
    let (p, q) = (mesh.x().last(), mesh.y().last());
    let mut rects = Vec::new();
    for i1 in 0..p {
        for i2 in i1 + 1..=p {
            for j1 in 0..q {
                for j2 in j1 + 1..=q {
                    rects.push(IndexRect::new(i1, i2, j1, j2).unwrap());
                }
            }
        }
    }
    let interiors_meet =
        |a: &IndexRect, b: &IndexRect| a.i1() < b.i2() && b.i1() < a.i2() && a.j1() < b.j2() && b.j1() < a.j2();
    let mut out = BruteBounds { opposite: BTreeMap::new(), main: BTreeMap::new(), min_l: Rational::zero() };
    let mut chosen: Vec<IndexRect> = Vec::new();
    fn walk(
        start: usize,
        rects: &[IndexRect],
        chosen: &mut Vec<IndexRect>,
        max: usize,
        meet: &dyn Fn(&IndexRect, &IndexRect) -> bool,
        visit: &mut dyn FnMut(&[IndexRect]),
    ) {
        for k in start..rects.len() {
            if chosen.iter().any(|c| meet(c, &rects[k])) {
                continue;
            }
            chosen.push(rects[k]);
            visit(chosen);
            if chosen.len() < max {
                walk(k + 1, rects, chosen, max, meet, visit);
            }
            chosen.pop();
        }
    }
    let mut visit = |g: &[IndexRect]| {
        let m = corner_multiplicities(g);
        let mut l = Rational::zero();
        for (&(i, j), &v) in &m {
            let f = if v > 0 { upper } else { lower };
            l += f.get(i, j) * Rational::from_integer(v.into());
        }
        if l < out.min_l {
            out.min_l = l.clone();
        }
        for (&pt, &v) in &m {
            let r = &l / Rational::from_integer(v.abs().into());
            let slot = if v < 0 { &mut out.opposite } else { &mut out.main };
            if slot.get(&pt).is_none_or(|cur| &r < cur) {
                slot.insert(pt, r);
            }
        }
    };
    walk(0, &rects, &mut chosen, max_members, &interiors_meet, &mut visit);
    out
}

pub fn is_nonneg(v: &Rational) -> bool {
    !v.is_negative()
}

/// Margins on a unit mesh with probability `p_unit`, else on an extended mesh.
pub fn random_margins(rng: &mut ChaCha8Rng, max_interior: usize, p_unit: f64) -> (UnivariateGrid, UnivariateGrid) {
    let unit = rng.gen_bool(p_unit);
    margins(rng, max_interior, unit)
}
