//! Brute-force enumeration of `L(r, eta)` against the triangular generator.
//!
//! A lattice point is `w = x W` with `W[i][j] = phi^|i|` when `i` is a
//! subset of `j`, so `w_j` depends only on coefficients `x_i` with `i <= j`.
//! Coordinates are fixed in increasing index order; at index `j` the new
//! coefficient is confined to the disk `|x_j phi^|j| - c_j|^2 <= budget`,
//! where `c_j` is `r_j` minus the part of `w_j` already determined.
//!
//! This shares nothing with the recursive decoder beyond exact arithmetic
//! and the membership test.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::{ceil_sqrt, CVector, GVector, GaussianInt, QComplex};
use crate::decoder::DecodeList;
use crate::error::{Error, Result};
use crate::lattice::BWPoint;

pub const DEFAULT_CAP: u32 = 4;

/// A partial assignment of generator coefficients.
#[derive(Clone, Debug)]
pub struct EnumerationNode {
    /// Next coordinate to fix.
    pub index: usize,
    /// Coefficients `x_0 .. x_{index-1}`.
    pub coeffs: Vec<GaussianInt>,
    /// Coordinates `w_0 .. w_{index-1}` they determine.
    pub point: Vec<GaussianInt>,
    /// Remaining squared-norm budget, `eta N - sum |r_j - w_j|^2`.
    pub budget: BigRational,
}

/// Exhaustive list decoder for small levels.
#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    cap: u32,
}

impl Default for Oracle {
    fn default() -> Self {
        Self { cap: DEFAULT_CAP }
    }
}

impl Oracle {
    pub fn with_cap(cap: u32) -> Self {
        Self { cap }
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn list(&self, r: &CVector, eta: &BigRational) -> Result<DecodeList> {
        let n = r.level();
        if n > self.cap {
            return Err(Error::AboveCap { n, cap: self.cap });
        }
        if eta.is_negative() {
            return Err(Error::OutOfRange {
                what: "eta",
                value: eta.to_string(),
            });
        }
        let size = r.len();
        let phi_pows: Vec<GaussianInt> = (0..=n).map(GaussianInt::phi_pow).collect();
        let total = eta * BigRational::from_integer(BigInt::from(size));

        let mut found = Vec::new();
        let mut stack = vec![EnumerationNode {
            index: 0,
            coeffs: Vec::with_capacity(size),
            point: Vec::with_capacity(size),
            budget: total,
        }];
        while let Some(node) = stack.pop() {
            debug_assert!(!node.budget.is_negative());
            if node.index == size {
                found.push(node.point);
                continue;
            }
            let j = node.index;
            let k = j.count_ones() as usize;
            let known = determined_part(j, &node.coeffs, &phi_pows);
            let target = &r.coords()[j] - &known.to_qcomplex();
            // x phi^k within sqrt(budget) of target  <=>  x within sqrt(budget / 2^k) of target / phi^k
            let pk = &phi_pows[k];
            let two_k = BigRational::from_integer(BigInt::from(1u64) << k);
            let center = (&target * &pk.conj().to_qcomplex()).scale(&two_k.recip());
            let radius_sq = &node.budget / &two_k;
            for x in gaussian_ints_in_disk(&center, &radius_sq) {
                let wj = &known + &(&x * pk);
                let d = (&r.coords()[j] - &wj.to_qcomplex()).norm_sq();
                if d > node.budget {
                    continue;
                }
                let mut child = EnumerationNode {
                    index: j + 1,
                    coeffs: node.coeffs.clone(),
                    point: node.point.clone(),
                    budget: &node.budget - &d,
                };
                child.coeffs.push(x);
                child.point.push(wj);
                stack.push(child);
            }
        }
        let points = found
            .into_iter()
            .map(|p| BWPoint::new(GVector::new(p)?))
            .collect::<Result<Vec<_>>>()?;
        DecodeList::from_points(r, eta, points)
    }

    pub fn shortest_vectors(&self, n: u32) -> Result<ShortestVectors> {
        if n > self.cap {
            return Err(Error::AboveCap { n, cap: self.cap });
        }
        let origin = CVector::zeros(n);
        let size = BigInt::from(1u64 << n);
        let mut eta = BigRational::from_integer(1.into());
        loop {
            let ball = self.list(&origin, &eta)?;
            let min = ball
                .points()
                .map(|p| p.coords().norm_sq())
                .filter(|m| !m.is_zero())
                .min();
            if let Some(min_norm_sq) = min {
                let kissing_radius = BigRational::new(min_norm_sq.clone(), size);
                let shortest = ball
                    .points()
                    .filter(|p| p.coords().norm_sq() == min_norm_sq)
                    .cloned()
                    .collect();
                let kissing = DecodeList::from_points(&origin, &kissing_radius, shortest)?;
                return Ok(ShortestVectors { min_norm_sq, kissing });
            }
            eta *= BigRational::from_integer(2.into());
        }
    }
}

/// `L(r, eta)` by exhaustive enumeration, up to the default cap.
pub fn oracle_list(r: &CVector, eta: &BigRational) -> Result<DecodeList> {
    Oracle::default().list(r, eta)
}

/// Minimum nonzero squared norm of `BW_n` and every vector achieving it.
pub fn shortest_vectors(n: u32) -> Result<ShortestVectors> {
    Oracle::default().shortest_vectors(n)
}

#[derive(Clone, Debug)]
pub struct ShortestVectors {
    pub min_norm_sq: BigInt,
    pub kissing: DecodeList,
}

impl ShortestVectors {
    pub fn kissing_number(&self) -> usize {
        self.kissing.len()
    }
}

/// `sum_{i proper subset of j} x_i phi^|i|`.
fn determined_part(j: usize, coeffs: &[GaussianInt], phi_pows: &[GaussianInt]) -> GaussianInt {
    let mut acc = GaussianInt::zero();
    if j == 0 {
        return acc;
    }
    let mut i = (j - 1) & j;
    loop {
        let x = &coeffs[i];
        if !x.is_zero() {
            acc = &acc + &(x * &phi_pows[i.count_ones() as usize]);
        }
        if i == 0 {
            break;
        }
        i = (i - 1) & j;
    }
    acc
}

/// Every Gaussian integer `z` with `|z - center|^2 <= radius_sq`, ordered by `(re, im)`.
pub fn gaussian_ints_in_disk(center: &QComplex, radius_sq: &BigRational) -> Vec<GaussianInt> {
    let mut out = Vec::new();
    if radius_sq.is_negative() {
        return out;
    }
    let m = ceil_sqrt(radius_sq);
    let fx = center.re.floor().to_integer();
    let mut a = &fx - &m;
    let a_end = &fx + &m + 1;
    while a <= a_end {
        let dx = BigRational::from_integer(a.clone()) - &center.re;
        let rest = radius_sq - &dx * &dx;
        if !rest.is_negative() {
            let my = ceil_sqrt(&rest);
            let fy = center.im.floor().to_integer();
            let mut b = &fy - &my;
            let b_end = &fy + &my + 1;
            while b <= b_end {
                let dy = BigRational::from_integer(b.clone()) - &center.im;
                if &dy * &dy <= rest {
                    out.push(GaussianInt::new(a.clone(), b.clone()));
                }
                b += 1;
            }
        }
        a += 1;
    }
    out
}
