//! Scaled-integer execution of the recursive list decoder.
//!
//! A received word is held as `R / S` with `R` a Gaussian-integer vector and
//! `S` a positive integer scale, so every distance test is an integer
//! comparison. The integer type is chosen per query from a magnitude bound.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

/// Levels below this run sequentially even when parallelism is requested.
pub const PAR_CUTOFF: u32 = 3;

pub(crate) trait Lane: Clone + Ord + Send + Sync + Debug + Signed + Integer + From<i64> {
    fn from_big(v: &BigInt) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Lane for i64 {
    fn from_big(v: &BigInt) -> Self {
        v.to_i64().expect("value exceeds the i64 lane")
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Lane for i128 {
    fn from_big(v: &BigInt) -> Self {
        v.to_i128().expect("value exceeds the i128 lane")
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Lane for BigInt {
    fn from_big(v: &BigInt) -> Self {
        v.clone()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct G<I> {
    pub re: I,
    pub im: I,
}

impl<I: Lane> G<I> {
    fn add(&self, o: &Self) -> Self {
        G {
            re: self.re.clone() + o.re.clone(),
            im: self.im.clone() + o.im.clone(),
        }
    }

    fn sub(&self, o: &Self) -> Self {
        G {
            re: self.re.clone() - o.re.clone(),
            im: self.im.clone() - o.im.clone(),
        }
    }

    fn mul_phi(&self) -> Self {
        G {
            re: self.re.clone() - self.im.clone(),
            im: self.re.clone() + self.im.clone(),
        }
    }

    /// Product with `2 / phi = 1 - i`.
    fn mul_two_over_phi(&self) -> Self {
        G {
            re: self.re.clone() + self.im.clone(),
            im: self.im.clone() - self.re.clone(),
        }
    }

    fn scale(&self, s: &I) -> Self {
        G {
            re: self.re.clone() * s.clone(),
            im: self.im.clone() * s.clone(),
        }
    }

    fn norm(&self) -> I {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    fn halve(&self) -> Self {
        let two = I::from(2);
        G {
            re: self.re.clone() / two.clone(),
            im: self.im.clone() / two,
        }
    }

    fn both_even(&self) -> bool {
        self.re.is_even() && self.im.is_even()
    }
}

/// `coords / scale`.
#[derive(Clone, Debug)]
pub(crate) struct Word<I> {
    pub coords: Vec<G<I>>,
    pub scale: I,
}

/// A lattice point with `dist = |coords - scale * point|^2` for its word.
#[derive(Clone, Debug)]
pub(crate) struct Entry<I> {
    pub point: Vec<G<I>>,
    pub dist: I,
}

/// Radius `p / q` and `ceil(sqrt(p / q))`.
#[derive(Clone, Debug)]
pub(crate) struct Radius<I> {
    pub p: I,
    pub q: I,
    pub ceil_sqrt: I,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Half {
    Zero,
    One,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sign {
    Plus,
    Minus,
}

const PAIRINGS: [(Half, Sign); 4] = [
    (Half::Zero, Sign::Plus),
    (Half::Zero, Sign::Minus),
    (Half::One, Sign::Plus),
    (Half::One, Sign::Minus),
];

/// Returns the sorted, duplicate-free list and the number of counted
/// coordinate operations.
pub(crate) fn decode<I: Lane>(word: &Word<I>, radius: &Radius<I>, parallel: bool) -> (Vec<Entry<I>>, u64) {
    if word.coords.len() == 1 {
        return base_case(&word.coords[0], &word.scale, radius);
    }
    let half = word.coords.len() / 2;
    let (r0, r1) = word.coords.split_at(half);
    let (plus, minus) = transform(r0, r1, &word.scale);
    let mut ops = 4 * half as u64;

    let w0 = Word {
        coords: r0.to_vec(),
        scale: word.scale.clone(),
    };
    let w1 = Word {
        coords: r1.to_vec(),
        scale: word.scale.clone(),
    };
    let level = word.coords.len().trailing_zeros();
    let parallel = parallel && level >= PAR_CUTOFF;

    let ((l0, l1), (lp, lm)) = if parallel {
        rayon::join(
            || rayon::join(|| decode(&w0, radius, true), || decode(&w1, radius, true)),
            || rayon::join(|| decode(&plus, radius, true), || decode(&minus, radius, true)),
        )
    } else {
        (
            (decode(&w0, radius, false), decode(&w1, radius, false)),
            (decode(&plus, radius, false), decode(&minus, radius, false)),
        )
    };
    ops += l0.1 + l1.1 + lp.1 + lm.1;

    // q * (d0 + d1) <= p * N * S^2  iff  d0 + d1 <= cap
    let n_coords = I::from(word.coords.len() as i64);
    let cap = (radius.p.clone() * n_coords * word.scale.clone() * word.scale.clone()).div_floor(&radius.q);

    let ctx = Combine {
        r0,
        r1,
        scale: &word.scale,
        cap: &cap,
    };
    let mut jobs: Vec<(Half, Sign, &Entry<I>)> = Vec::new();
    for (b, s) in PAIRINGS {
        let base = if b == Half::Zero { &l0.0 } else { &l1.0 };
        let side = if s == Sign::Plus { &lp.0 } else { &lm.0 };
        if side.is_empty() {
            continue;
        }
        jobs.extend(base.iter().map(|e| (b, s, e)));
    }
    let side_of = |s: Sign| if s == Sign::Plus { &lp.0 } else { &lm.0 };

    let mut out: Vec<Entry<I>>;
    if parallel {
        let parts: Vec<(Vec<Entry<I>>, u64)> = jobs
            .par_iter()
            .map(|&(b, s, e)| ctx.extend(b, s, e, side_of(s)))
            .collect();
        out = Vec::new();
        for (part, o) in parts {
            ops += o;
            out.extend(part);
        }
        out.par_sort_unstable_by(|a, b| a.point.cmp(&b.point));
    } else {
        out = Vec::new();
        for &(b, s, e) in &jobs {
            let (part, o) = ctx.extend(b, s, e, side_of(s));
            ops += o;
            out.extend(part);
        }
        out.sort_unstable_by(|a, b| a.point.cmp(&b.point));
    }
    out.dedup_by(|a, b| a.point == b.point);
    ops += out.len() as u64;
    (out, ops)
}

struct Combine<'a, I> {
    r0: &'a [G<I>],
    r1: &'a [G<I>],
    scale: &'a I,
    cap: &'a I,
}

impl<I: Lane> Combine<'_, I> {
    /// Candidates `[w0, w1]` built from `base` (a known half) and every entry
    /// of `side` (a transformed half), kept when within the radius.
    fn extend(&self, b: Half, s: Sign, base: &Entry<I>, side: &[Entry<I>]) -> (Vec<Entry<I>>, u64) {
        let mut out = Vec::new();
        let mut ops = 0u64;
        let budget = self.cap.clone() - base.dist.clone();
        if budget.is_negative() {
            return (out, ops);
        }
        let target = if b == Half::Zero { self.r1 } else { self.r0 };
        'cand: for e in side {
            let mut other = Vec::with_capacity(target.len());
            let mut acc = I::zero();
            for ((wb, ws), r) in base.point.iter().zip(&e.point).zip(target) {
                let t = ws.mul_two_over_phi();
                let c = match (b, s) {
                    (Half::Zero, Sign::Plus) | (Half::One, Sign::Plus) => t.sub(wb),
                    (Half::Zero, Sign::Minus) => wb.sub(&t),
                    (Half::One, Sign::Minus) => t.add(wb),
                };
                acc = acc + r.sub(&c.scale(self.scale)).norm();
                ops += 4;
                if acc > budget {
                    continue 'cand;
                }
                other.push(c);
            }
            let point = if b == Half::Zero {
                let mut p = base.point.clone();
                p.extend(other);
                p
            } else {
                other.extend(base.point.iter().cloned());
                other
            };
            out.push(Entry {
                point,
                dist: base.dist.clone() + acc,
            });
        }
        (out, ops)
    }
}

/// `[(phi/2)(r0 + r1), (phi/2)(r0 - r1)]` at scale `2S`, halved while exact.
fn transform<I: Lane>(r0: &[G<I>], r1: &[G<I>], scale: &I) -> (Word<I>, Word<I>) {
    let plus: Vec<G<I>> = r0.iter().zip(r1).map(|(a, b)| a.add(b).mul_phi()).collect();
    let minus: Vec<G<I>> = r0.iter().zip(r1).map(|(a, b)| a.sub(b).mul_phi()).collect();
    let double = scale.clone() * I::from(2);
    (reduce(plus, double.clone()), reduce(minus, double))
}

fn reduce<I: Lane>(mut coords: Vec<G<I>>, mut scale: I) -> Word<I> {
    while scale.is_even() && coords.iter().all(G::both_even) {
        coords = coords.iter().map(G::halve).collect();
        scale = scale / I::from(2);
    }
    Word { coords, scale }
}

/// All `z` in `Z[i]` with `q |R - S z|^2 <= p S^2`, scanned over the box of
/// half-width `ceil(sqrt(eta)) + 1` around `floor(R / S)`.
fn base_case<I: Lane>(r: &G<I>, scale: &I, radius: &Radius<I>) -> (Vec<Entry<I>>, u64) {
    let limit = radius.p.clone() * scale.clone() * scale.clone();
    let width = radius.ceil_sqrt.clone() + I::one();
    let cx = r.re.div_floor(scale);
    let cy = r.im.div_floor(scale);
    let mut out = Vec::new();
    let mut ops = 0u64;
    let mut a = cx.clone() - width.clone();
    let a_end = cx + width.clone();
    while a <= a_end {
        let mut b = cy.clone() - width.clone();
        let b_end = cy.clone() + width.clone();
        while b <= b_end {
            let z = G {
                re: a.clone(),
                im: b.clone(),
            };
            let d = r.sub(&z.scale(scale)).norm();
            ops += 1;
            if radius.q.clone() * d.clone() <= limit {
                out.push(Entry {
                    point: vec![z],
                    dist: d,
                });
            }
            b = b + I::one();
        }
        a = a + I::one();
    }
    (out, ops)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> G<i64> {
        G { re, im }
    }

    #[test]
    fn base_case_unit_disk() {
        let radius = Radius {
            p: 1,
            q: 1,
            ceil_sqrt: 1,
        };
        let (list, ops) = base_case(&g(0, 0), &1, &radius);
        let pts: Vec<_> = list.iter().map(|e| e.point[0].clone()).collect();
        assert_eq!(pts, vec![g(-1, 0), g(0, -1), g(0, 0), g(0, 1), g(1, 0)]);
        assert_eq!(ops, 25);
    }

    #[test]
    fn transform_reduces_common_factor() {
        // r0 = r1 = 1: plus = phi * 2 / 2 = phi at scale 1
        let (plus, minus) = transform(&[g(1, 0)], &[g(1, 0)], &1);
        assert_eq!(plus.coords, vec![g(1, 1)]);
        assert_eq!(plus.scale, 1);
        assert_eq!(minus.coords, vec![g(0, 0)]);
        assert_eq!(minus.scale, 1);
    }
}
