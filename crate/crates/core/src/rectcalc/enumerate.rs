//! Depth-first enumeration of gaggles with a bounded number of members.
//!
//! Members are chosen in increasing lexicographic order, so for a fixed
//! member count gaggles are visited in lexicographic order. Interior
//! disjointness is tested on cell bitmasks.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::grid::IndexRect;

use super::weights::{PairWeights, Ratio};

pub(crate) struct RectTable {
    pub rects: Vec<IndexRect>,
    masks: Vec<u128>,
}

impl RectTable {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p * q > 128 {
            return Err(Error::TooLarge(format!("{} cells; bounded enumeration supports at most 128", p * q)));
        }
        let mut rects = Vec::new();
        for i1 in 0..p {
            for j1 in 0..q {
                for i2 in i1 + 1..=p {
                    for j2 in j1 + 1..=q {
                        rects.push(IndexRect::new(i1, i2, j1, j2).expect("nondegenerate"));
                    }
                }
            }
        }
        rects.sort();
        let masks = rects
            .iter()
            .map(|r| {
                let mut m = 0u128;
                for i in r.i1()..r.i2() {
                    for j in r.j1()..r.j2() {
                        m |= 1u128 << (i * q + j);
                    }
                }
                m
            })
            .collect();
        Ok(RectTable { rects, masks })
    }
}

/// A gaggle as seen during enumeration.
pub(crate) struct Visit<'a> {
    pub members: &'a [usize],
    /// Dense multiplicities indexed like [`PairWeights::index`].
    pub mult: &'a [i64],
    pub l: i128,
}

struct State<'a> {
    table: &'a RectTable,
    weights: &'a PairWeights,
    members: Vec<usize>,
    mult: Vec<i64>,
    l: i128,
    used: u128,
}

impl State<'_> {
    fn corners(rect: &IndexRect) -> [((usize, usize), i64); 4] {
        let [a, c] = rect.main_corners();
        let [b, d] = rect.opposite_corners();
        [(a, 1), (c, 1), (b, -1), (d, -1)]
    }

    fn apply(&mut self, k: usize, sign: i64) {
        let rect = self.table.rects[k];
        for ((i, j), delta) in Self::corners(&rect) {
            let idx = self.weights.index(i, j);
            let old = self.mult[idx];
            let new = old + sign * delta;
            self.l += self.weights.phi(i, j, new) - self.weights.phi(i, j, old);
            self.mult[idx] = new;
        }
        if sign > 0 {
            self.used |= self.table.masks[k];
            self.members.push(k);
        } else {
            self.used &= !self.table.masks[k];
            self.members.pop();
        }
    }

    fn dfs<F>(&mut self, start: usize, min: usize, max: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&Visit) -> ControlFlow<()>,
    {
        for k in start..self.table.rects.len() {
            if self.used & self.table.masks[k] != 0 {
                continue;
            }
            self.apply(k, 1);
            let mut flow = ControlFlow::Continue(());
            if self.members.len() >= min {
                flow = visit(&Visit { members: &self.members, mult: &self.mult, l: self.l });
            }
            if flow.is_continue() && self.members.len() < max {
                flow = self.dfs(k + 1, min, max, visit);
            }
            self.apply(k, -1);
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Visits every gaggle with between `min` and `max` members.
pub(crate) fn enumerate<F>(table: &RectTable, weights: &PairWeights, min: usize, max: usize, mut visit: F)
where
    F: FnMut(&Visit) -> ControlFlow<()>,
{
    let mut state = State {
        table,
        weights,
        members: Vec::with_capacity(max),
        mult: vec![0; (weights.p + 1) * (weights.q + 1)],
        l: 0,
        used: 0,
    };
    let _ = state.dfs(0, min.max(1), max, &mut visit);
}

/// Best candidate for an infimum: smallest ratio, then fewest members, then
/// first visited.
#[derive(Clone, Debug)]
pub(crate) struct Best {
    pub ratio: Ratio,
    pub members: Vec<usize>,
}

impl Best {
    pub fn offer(slot: &mut Option<Best>, ratio: Ratio, members: &[usize]) {
        let better = match slot {
            None => true,
            Some(b) => ratio.less_than(&b.ratio) || (ratio.equals(&b.ratio) && members.len() < b.members.len()),
        };
        if better {
            *slot = Some(Best { ratio, members: members.to_vec() });
        }
    }
}

/// Opposite-side and main-side minima at every grid point over gaggles
/// with at most `max` members.
pub(crate) fn all_point_bounds(
    table: &RectTable,
    weights: &PairWeights,
    max: usize,
) -> (Vec<Option<Best>>, Vec<Option<Best>>) {
    let n = (weights.p + 1) * (weights.q + 1);
    let mut opposite: Vec<Option<Best>> = vec![None; n];
    let mut main: Vec<Option<Best>> = vec![None; n];
    enumerate(table, weights, 1, max, |v| {
        for &k in v.members {
            let r = table.rects[k];
            for (i, j) in r.main_corners().into_iter().chain(r.opposite_corners()) {
                let idx = weights.index(i, j);
                match v.mult[idx] {
                    0 => {}
                    m if m < 0 => Best::offer(&mut opposite[idx], Ratio { l: v.l, m: -m }, v.members),
                    m => Best::offer(&mut main[idx], Ratio { l: v.l, m }, v.members),
                }
            }
        }
        ControlFlow::Continue(())
    });
    (opposite, main)
}

/// Minimum at one point and one side (`want_negative` selects opposite).
pub(crate) fn point_bound(
    table: &RectTable,
    weights: &PairWeights,
    point: (usize, usize),
    want_negative: bool,
    max: usize,
) -> Option<Best> {
    let idx = weights.index(point.0, point.1);
    let mut best = None;
    enumerate(table, weights, 1, max, |v| {
        let m = v.mult[idx];
        if (want_negative && m < 0) || (!want_negative && m > 0) {
            Best::offer(&mut best, Ratio { l: v.l, m: m.abs() }, v.members);
        }
        ControlFlow::Continue(())
    });
    best
}

/// First gaggle, by member count and then lexicographically, accepted by `pred`.
pub(crate) fn first_matching<P>(table: &RectTable, weights: &PairWeights, max: usize, mut pred: P) -> Option<Vec<usize>>
where
    P: FnMut(&Visit) -> bool,
{
    for size in 1..=max {
        let mut found = None;
        enumerate(table, weights, size, size, |v| {
            if pred(v) {
                found = Some(v.members.to_vec());
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}
