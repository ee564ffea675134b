//! Exact minimisation of `L` over all gaggles.
//!
//! The multiplicity of a gaggle equals the sum of the multiplicities of the
//! elementary cells it covers, so `L` depends only on the covered cell set
//! `S`. At a grid point the multiplicity is
//! `s(NE) + s(SW) - s(SE) - s(NW)` for the four incident cells, which makes
//! `L(S)` a sum of local terms. A transfer-matrix pass over cell columns,
//! with one column of cell indicators as state, finds the minimum over all
//! `2^(pq)` subsets.

use crate::error::{Error, Result};

use super::weights::PairWeights;

/// Largest supported state width (cells along the shorter axis).
pub const MAX_STATE_CELLS: usize = 10;

const UNREACHABLE: i128 = i128::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct SubsetMin {
    pub l: i128,
    /// Covered cells `(i, j)` with south-west corner `(x_i, y_j)`, sorted.
    pub cells: Vec<(usize, usize)>,
}

#[inline]
fn bit(state: usize, j: isize, q: usize) -> i64 {
    if j < 0 || j as usize >= q {
        0
    } else {
        ((state >> j) & 1) as i64
    }
}

/// Minimum of `L(S)` over cell subsets, optionally forcing the multiplicity
/// at one point to equal `target`. `None` if the constraint is unsatisfiable.
pub(crate) fn min_cell_subset(
    weights: &PairWeights,
    constraint: Option<((usize, usize), i64)>,
) -> Result<Option<SubsetMin>> {
    if weights.q > weights.p {
        let t = weights.transpose();
        let c = constraint.map(|((i, j), m)| ((j, i), m));
        return Ok(min_columns(&t, c)?.map(|mut s| {
            s.cells = s.cells.into_iter().map(|(i, j)| (j, i)).collect();
            s.cells.sort();
            s
        }));
    }
    min_columns(weights, constraint)
}

fn min_columns(w: &PairWeights, constraint: Option<((usize, usize), i64)>) -> Result<Option<SubsetMin>> {
    let (p, q) = (w.p, w.q);
    if q > MAX_STATE_CELLS {
        return Err(Error::TooLarge(format!(
            "{p} x {q} cells; exact search supports at most {MAX_STATE_CELLS} cells along the shorter axis"
        )));
    }
    let states = 1usize << q;

    // phi[j][m + 2] on the current line.
    let line_phi =
        |i: usize| -> Vec<[i128; 5]> { (0..=q).map(|j| [-2, -1, 0, 1, 2].map(|m| w.phi(i, j, m))).collect() };
    let line_cost = |i: usize, phi: &[[i128; 5]], s: usize, t: usize| -> Option<i128> {
        let mut cost = 0i128;
        for (j, row) in phi.iter().enumerate() {
            let j = j as isize;
            let m = bit(t, j, q) + bit(s, j - 1, q) - bit(t, j - 1, q) - bit(s, j, q);
            if let Some(((ci, cj), target)) = constraint {
                if ci == i && cj as isize == j && m != target {
                    return None;
                }
            }
            cost += row[(m + 2) as usize];
        }
        Some(cost)
    };

    let mut dp = vec![UNREACHABLE; states];
    dp[0] = 0;
    let mut back: Vec<Vec<u32>> = Vec::with_capacity(p);
    for c in 0..p {
        let phi = line_phi(c);
        let mut next = vec![UNREACHABLE; states];
        let mut from = vec![0u32; states];
        for (s, &base) in dp.iter().enumerate() {
            if base == UNREACHABLE {
                continue;
            }
            for t in 0..states {
                if let Some(cost) = line_cost(c, &phi, s, t) {
                    let v = base + cost;
                    if v < next[t] {
                        next[t] = v;
                        from[t] = s as u32;
                    }
                }
            }
        }
        dp = next;
        back.push(from);
    }
    let phi = line_phi(p);
    let mut best: Option<(i128, usize)> = None;
    for (s, &base) in dp.iter().enumerate() {
        if base == UNREACHABLE {
            continue;
        }
        if let Some(cost) = line_cost(p, &phi, s, 0) {
            let v = base + cost;
            if best.is_none_or(|(b, _)| v < b) {
                best = Some((v, s));
            }
        }
    }
    let Some((l, mut state)) = best else {
        return Ok(None);
    };
    let mut cells = Vec::new();
    for c in (0..p).rev() {
        for j in 0..q {
            if (state >> j) & 1 == 1 {
                cells.push((c, j));
            }
        }
        state = back[c][state] as usize;
    }
    cells.sort();
    Ok(Some(SubsetMin { l, cells }))
}
