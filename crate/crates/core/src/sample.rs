//! Random meshes, margins, distributions and quasi-distributions for tests
//! and benchmarks.
//!
//! Distributions are convex mixtures of transport-plan vertices. Each
//! vertex comes from the north-west corner rule under random row and column
//! orders, so the fixed margins hold by construction.

use rand::seq::SliceRandom;
use rand::Rng;

use num_traits::{Signed, Zero};

use crate::grid::{AxisGrid, GridFunction, IndexRect, Mesh, UnivariateGrid};
use crate::number::{int, ratio, Rational};
use crate::rectcalc::RectGaggle;

/// Unit axis with `interior` distinct random coordinates `k / denom` in `(0, 1)`.
pub fn unit_axis<R: Rng + ?Sized>(rng: &mut R, interior: usize, denom: i64) -> AxisGrid {
    assert!((interior as i64) < denom, "not enough distinct coordinates");
    let mut ks: Vec<i64> = (1..denom).collect();
    ks.shuffle(rng);
    let mut ks = ks[..interior].to_vec();
    ks.sort_unstable();
    let coords = std::iter::once(int(0)).chain(ks.into_iter().map(|k| ratio(k, denom))).chain([int(1)]);
    AxisGrid::unit(coords).expect("increasing coordinates")
}

/// Extended axis with `interior >= 2` random finite coordinates, at least one
/// negative and one positive.
pub fn extended_axis<R: Rng + ?Sized>(rng: &mut R, interior: usize) -> AxisGrid {
    assert!(interior >= 2);
    let span = 2 * interior as i64 + 2;
    loop {
        let mut ks: Vec<i64> = (-span..=span).collect();
        ks.shuffle(rng);
        let mut ks = ks[..interior].to_vec();
        ks.sort_unstable();
        if ks[0] < 0 && ks[interior - 1] > 0 {
            return AxisGrid::extended(ks.into_iter().map(|k| ratio(k, 2))).expect("valid extended axis");
        }
    }
}

/// A margin on `axis` with values in multiples of `1 / denom`; repeated
/// values, i.e. flat pieces, are common.
pub fn margin<R: Rng + ?Sized>(rng: &mut R, axis: AxisGrid, denom: i64) -> UnivariateGrid {
    let n = axis.len();
    let mut ks: Vec<i64> = (0..n - 2).map(|_| rng.gen_range(0..=denom)).collect();
    if n > 3 && rng.gen_bool(0.5) {
        let k = rng.gen_range(0..ks.len() - 1);
        ks[k + 1] = ks[k];
    }
    ks.sort_unstable();
    let values = std::iter::once(int(0)).chain(ks.into_iter().map(|k| ratio(k, denom))).chain([int(1)]).collect();
    UnivariateGrid::new(axis, values).expect("nondecreasing margin")
}

/// Point masses of one transport vertex between the margin increments.
fn vertex<R: Rng + ?Sized>(rng: &mut R, rows: &[Rational], cols: &[Rational]) -> Vec<Vec<Rational>> {
    let mut mass = vec![vec![Rational::zero(); cols.len()]; rows.len()];
    let mut ro: Vec<usize> = (0..rows.len()).collect();
    let mut co: Vec<usize> = (0..cols.len()).collect();
    ro.shuffle(rng);
    co.shuffle(rng);
    let mut supply: Vec<Rational> = rows.to_vec();
    let mut demand: Vec<Rational> = cols.to_vec();
    let (mut a, mut b) = (0, 0);
    while a < ro.len() && b < co.len() {
        let (i, j) = (ro[a], co[b]);
        let t = supply[i].clone().min(demand[j].clone());
        supply[i] -= &t;
        demand[j] -= &t;
        mass[i][j] += t;
        if supply[i].is_zero() {
            a += 1;
        } else {
            b += 1;
        }
    }
    mass
}

fn increments(m: &UnivariateGrid) -> Vec<Rational> {
    m.values().windows(2).map(|w| &w[1] - &w[0]).collect()
}

/// A distribution with margins `fx`, `fy`: a mixture of `vertices`
/// transport vertices with random rational weights.
pub fn distribution<R: Rng + ?Sized>(
    rng: &mut R,
    fx: &UnivariateGrid,
    fy: &UnivariateGrid,
    vertices: usize,
) -> GridFunction {
    let rows = increments(fx);
    let cols = increments(fy);
    let weights: Vec<i64> = (0..vertices.max(1)).map(|_| rng.gen_range(1..=3)).collect();
    let total: i64 = weights.iter().sum();
    let mut mass = vec![vec![Rational::zero(); cols.len()]; rows.len()];
    for w in weights {
        let share = ratio(w, total);
        for (acc, v) in mass.iter_mut().zip(vertex(rng, &rows, &cols)) {
            for (a, x) in acc.iter_mut().zip(v) {
                *a += &share * x;
            }
        }
    }
    let mesh = Mesh::new(fx.axis().clone(), fy.axis().clone()).expect("axes of one kind");
    let (p, q) = (rows.len(), cols.len());
    let mut values = vec![vec![Rational::zero(); q + 1]; p + 1];
    for i in 1..=p {
        for j in 1..=q {
            values[i][j] = &values[i - 1][j] + &values[i][j - 1] - &values[i - 1][j - 1] + &mass[i - 1][j - 1];
        }
    }
    GridFunction::new(mesh, values).expect("cumulative masses lie in [0, 1]")
}

/// A copula on a unit mesh.
pub fn copula<R: Rng + ?Sized>(rng: &mut R, mesh: &Mesh, vertices: usize) -> GridFunction {
    let fx = UnivariateGrid::identity(mesh.x().clone()).expect("unit axis");
    let fy = UnivariateGrid::identity(mesh.y().clone()).expect("unit axis");
    distribution(rng, &fx, &fy, vertices)
}

/// A quasi-distribution with margins `fx`, `fy`: the pointwise maximum or
/// minimum of two random distributions, followed half of the time by a mass
/// swap that drives one cell negative.
pub fn quasi_distribution<R: Rng + ?Sized>(rng: &mut R, fx: &UnivariateGrid, fy: &UnivariateGrid) -> GridFunction {
    let (ka, kb) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
    let a = distribution(rng, fx, fy, ka);
    let b = distribution(rng, fx, fy, kb);
    let f = if rng.gen_bool(0.5) {
        a.pointwise_max(&b).expect("same mesh")
    } else {
        a.pointwise_min(&b).expect("same mesh")
    };
    if rng.gen_bool(0.5) {
        for _ in 0..8 {
            if let Some(g) = swap_mass(rng, &f) {
                return g;
            }
        }
    }
    f
}

/// A quasi-distribution with margins `fx`, `fy` that fails (C), if one
/// turns up within a few draws. Meshes with fewer than 3 cells on an axis
/// have none.
pub fn proper_quasi_distribution<R: Rng + ?Sized>(
    rng: &mut R,
    fx: &UnivariateGrid,
    fy: &UnivariateGrid,
) -> Option<GridFunction> {
    (0..16).map(|_| quasi_distribution(rng, fx, fy)).find(|f| !f.classify().holds_c)
}

/// Moves mass `t` around the corners of two cell rows and two cell columns,
/// taking it from an interior cell and pushing that cell negative. Margins
/// are unchanged. Returns `None` if the result breaks (B).
fn swap_mass<R: Rng + ?Sized>(rng: &mut R, f: &GridFunction) -> Option<GridFunction> {
    let (p, q) = (f.mesh().x().last(), f.mesh().y().last());
    // Cells on the frame cannot go negative under (B).
    if p < 3 || q < 3 {
        return None;
    }
    let mut mass: Vec<Vec<Rational>> =
        (0..p).map(|a| (0..q).map(|b| f.volume(&IndexRect::cell(a, b)).expect("cell")).collect()).collect();
    let (a, b) = (rng.gen_range(1..p - 1), rng.gen_range(1..q - 1));
    let a2 = other_index(rng, p, a);
    let b2 = other_index(rng, q, b);
    let smallest = mass.iter().flatten().filter(|m| m.is_positive()).min()?.clone();
    let t = &mass[a][b] + smallest * ratio(rng.gen_range(1..=4), 4);
    mass[a][b] -= &t;
    mass[a2][b2] -= &t;
    mass[a][b2] += &t;
    mass[a2][b] += &t;
    let g = GridFunction::from_fn_indexed(f.mesh().clone(), |i, j| {
        if i == 0 || j == 0 {
            return Rational::zero();
        }
        mass[..i].iter().flat_map(|row| row[..j].iter()).sum::<Rational>()
    })
    .ok()?;
    g.classify().holds_b.then_some(g)
}

fn other_index<R: Rng + ?Sized>(rng: &mut R, n: usize, skip: usize) -> usize {
    let k = rng.gen_range(0..n - 1);
    if k >= skip {
        k + 1
    } else {
        k
    }
}
/// An ordered pair of quasi-distributions with margins `fx`, `fy`. Both
/// feasible and infeasible sandwich problems occur with fair frequency.
pub fn quasi_pair<R: Rng + ?Sized>(
    rng: &mut R,
    fx: &UnivariateGrid,
    fy: &UnivariateGrid,
) -> (GridFunction, GridFunction) {
    match rng.gen_range(0..3) {
        0 => {
            let q = proper_quasi_distribution(rng, fx, fy).unwrap_or_else(|| quasi_distribution(rng, fx, fy));
            (q.clone(), q)
        }
        1 => {
            let f = distribution(rng, fx, fy, 2);
            let g = quasi_distribution(rng, fx, fy);
            (f.pointwise_min(&g).expect("same mesh"), f.pointwise_max(&g).expect("same mesh"))
        }
        _ => {
            let g = quasi_distribution(rng, fx, fy);
            let h = quasi_distribution(rng, fx, fy);
            (g.pointwise_min(&h).expect("same mesh"), g.pointwise_max(&h).expect("same mesh"))
        }
    }
}

/// A random gaggle on `mesh` with between 1 and `max_members` members.
pub fn gaggle<R: Rng + ?Sized>(rng: &mut R, mesh: &Mesh, max_members: usize) -> RectGaggle {
    let (p, q) = (mesh.x().last(), mesh.y().last());
    let target = rng.gen_range(1..=max_members.max(1));
    let mut members: Vec<IndexRect> = Vec::new();
    for _ in 0..8 * target {
        if members.len() == target {
            break;
        }
        let (i1, i2) = ordered_pair(rng, p);
        let (j1, j2) = ordered_pair(rng, q);
        let r = IndexRect::new(i1, i2, j1, j2).expect("nondegenerate");
        if members.iter().all(|m| !m.overlaps(&r)) {
            members.push(r);
        }
    }
    RectGaggle::new(members).expect("disjoint members")
}

fn ordered_pair<R: Rng + ?Sized>(rng: &mut R, last: usize) -> (usize, usize) {
    let a = rng.gen_range(0..last);
    let b = rng.gen_range(a + 1..=last);
    (a, b)
}

/// A random rational in `[0, 1]` with denominator `denom`.
pub fn unit_rational<R: Rng + ?Sized>(rng: &mut R, denom: i64) -> Rational {
    ratio(rng.gen_range(0..=denom), denom)
}
