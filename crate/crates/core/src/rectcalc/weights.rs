//! Integer images of a pair `(A, B)` over a common denominator.
//!
//! `L` is an integer combination of grid values, so after scaling every
//! search runs on `i128` without allocation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::number::Rational;

// Leaves headroom for sums of up to 2^20 terms with |m| <= 4.
const MAX_SCALED_BITS: u64 = 100;

#[derive(Clone, Debug)]
pub(crate) struct PairWeights {
    /// Last x index (`p`): there are `p` cell columns.
    pub p: usize,
    /// Last y index (`q`).
    pub q: usize,
    pub denom: BigInt,
    lower: Vec<i128>,
    upper: Vec<i128>,
}

impl PairWeights {
    pub fn new(lower: &GridFunction, upper: &GridFunction) -> Result<Self> {
        lower.same_mesh(upper)?;
        let p = lower.mesh().x().last();
        let q = lower.mesh().y().last();
        let mut denom = BigInt::one();
        for f in [lower, upper] {
            for row in f.values() {
                for v in row {
                    denom = denom.lcm(v.denom());
                }
            }
        }
        if denom.bits() > MAX_SCALED_BITS {
            return Err(Error::TooLarge(format!("common denominator has {} bits", denom.bits())));
        }
        let scale = |f: &GridFunction| -> Vec<i128> {
            f.values()
                .iter()
                .flatten()
                .map(|v| (v.numer() * (&denom / v.denom())).to_i128().expect("bounded by denominator"))
                .collect()
        };
        Ok(PairWeights { p, q, lower: scale(lower), upper: scale(upper), denom })
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * (self.q + 1) + j
    }

    /// Contribution of a point with multiplicity `m` to `L`.
    #[inline]
    pub fn phi(&self, i: usize, j: usize, m: i64) -> i128 {
        let k = self.index(i, j);
        match m {
            0 => 0,
            m if m > 0 => self.upper[k] * m as i128,
            m => self.lower[k] * m as i128,
        }
    }

    pub fn transpose(&self) -> PairWeights {
        let (p, q) = (self.p, self.q);
        let flip = |v: &[i128]| -> Vec<i128> {
            let mut out = vec![0; v.len()];
            for i in 0..=p {
                for j in 0..=q {
                    out[j * (p + 1) + i] = v[i * (q + 1) + j];
                }
            }
            out
        };
        PairWeights { p: q, q: p, denom: self.denom.clone(), lower: flip(&self.lower), upper: flip(&self.upper) }
    }

    /// `numer / (denom * m)` as an exact rational.
    pub fn to_rational(&self, numer: i128, m: i64) -> Rational {
        Rational::new(BigInt::from(numer), &self.denom * BigInt::from(m))
    }
}

/// A value `L / m` with `m > 0`, compared exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Ratio {
    pub l: i128,
    pub m: i64,
}

impl Ratio {
    pub fn less_than(&self, other: &Ratio) -> bool {
        self.l * (other.m as i128) < other.l * (self.m as i128)
    }

    pub fn equals(&self, other: &Ratio) -> bool {
        self.l * other.m as i128 == other.l * self.m as i128
    }
}
