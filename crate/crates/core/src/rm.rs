//! Reed-Muller codes, subspaces of `F_2^n`, and the layered link between
//! `BW_n` and the codes `RM(d, n)`.
//!
//! Bit `j` of a length-`2^n` word is the value at `alpha in F_2^n` with
//! `alpha_i` = bit `i - 1` of `j`, the same order as lattice coordinates.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use crate::arith::{CVector, GVector, GaussianInt};
use crate::decoder::DecodeList;
use crate::error::{Error, Result};
use crate::lattice::BWPoint;

/// Largest `RM(d, n)` dimension [`rm_enumerate`] will materialize.
pub const MAX_ENUM_DIMENSION: u64 = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RMCodeword {
    bits: Vec<bool>,
    d: u32,
    n: u32,
}

impl RMCodeword {
    /// Checks the length and that the word has degree at most `d`.
    pub fn new(bits: Vec<bool>, d: u32, n: u32) -> Result<Self> {
        if !rm_is_codeword(&bits, d, n) {
            return Err(Error::NotACodeword { layer: d, n });
        }
        Ok(Self { bits, d, n })
    }

    pub fn zero(d: u32, n: u32) -> Self {
        Self {
            bits: vec![false; 1 << n],
            d,
            n,
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// The word embedded in `Z[i]^N` by `0 -> 0`, `1 -> 1`.
    pub fn to_gvector(&self) -> GVector {
        let coords = self.bits.iter().map(|&b| GaussianInt::new(b as i64, 0)).collect();
        GVector::new(coords).expect("power-of-two length")
    }
}

impl fmt::Display for RMCodeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Algebraic normal form: coefficient of `prod_{i in S} x_i` at index `S`.
pub fn anf(bits: &[bool]) -> Vec<bool> {
    let mut f = bits.to_vec();
    let mut m = 1;
    while m < f.len() {
        for j in 0..f.len() {
            if j & m != 0 {
                f[j] ^= f[j ^ m];
            }
        }
        m <<= 1;
    }
    f
}

/// Whether `bits` is a codeword of `RM(d, n)`.
pub fn rm_is_codeword(bits: &[bool], d: u32, n: u32) -> bool {
    if bits.len() != 1usize << n {
        return false;
    }
    anf(bits).iter().enumerate().all(|(s, &c)| !c || s.count_ones() <= d)
}

/// `sum_{i <= d} C(n, i)`.
pub fn rm_dimension(d: u32, n: u32) -> u64 {
    let mut total = 0u64;
    let mut binom = 1u64;
    for i in 0..=d.min(n) {
        total += binom;
        binom = binom * (n - i) as u64 / (i + 1) as u64;
    }
    total
}

/// Every codeword of `RM(d, n)`, built as `{[u, u + v] : u in RM(d, n-1), v in RM(d-1, n-1)}`.
pub fn rm_enumerate(d: u32, n: u32) -> Result<impl Iterator<Item = RMCodeword>> {
    if d > n {
        return Err(Error::OutOfRange {
            what: "degree",
            value: format!("d = {d} > n = {n}"),
        });
    }
    let dim = rm_dimension(d, n);
    if dim > MAX_ENUM_DIMENSION {
        return Err(Error::OutOfRange {
            what: "RM dimension",
            value: dim.to_string(),
        });
    }
    Ok(rm_words(d, n).into_iter().map(move |bits| RMCodeword { bits, d, n }))
}

fn rm_words(d: u32, n: u32) -> Vec<Vec<bool>> {
    let len = 1usize << n;
    if d == 0 {
        return vec![vec![false; len], vec![true; len]];
    }
    let d = d.min(n);
    let us = rm_words(d.min(n - 1), n - 1);
    let vs = rm_words(d - 1, n - 1);
    let mut out = Vec::with_capacity(us.len() * vs.len());
    for u in &us {
        for v in &vs {
            let mut w = u.clone();
            w.extend(u.iter().zip(v).map(|(a, b)| a ^ b));
            out.push(w);
        }
    }
    out
}

/// Minimum weight of a nonzero codeword, by enumeration.
pub fn rm_min_distance(d: u32, n: u32) -> Result<usize> {
    rm_enumerate(d, n)?
        .map(|c| c.weight())
        .filter(|&w| w > 0)
        .min()
        .ok_or_else(|| Error::Invariant("RM code without nonzero words".into()))
}

/// A linear subspace of `F_2^n`, kept as its reduced row-echelon basis.
///
/// Vectors are bitmasks; the pivot of a row is its highest set bit, no other
/// row has that bit set, and rows are sorted by decreasing pivot.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: u32,
    basis: Vec<u32>,
}

impl Subspace {
    pub fn new(n: u32, vectors: &[u32]) -> Result<Self> {
        if let Some(&v) = vectors.iter().find(|&&v| (v as u64) >> n != 0) {
            return Err(Error::OutOfRange {
                what: "vector",
                value: format!("{v:#b} has more than {n} bits"),
            });
        }
        let mut rows: Vec<u32> = Vec::new();
        for &v in vectors {
            let mut v = v;
            for &r in &rows {
                if v & top_bit(r) != 0 {
                    v ^= r;
                }
            }
            if v == 0 {
                return Err(Error::DependentBasis);
            }
            let p = top_bit(v);
            for r in rows.iter_mut() {
                if *r & p != 0 {
                    *r ^= v;
                }
            }
            rows.push(v);
        }
        rows.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { n, basis: rows })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> u32 {
        self.basis.len() as u32
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        (0u32..1 << self.dim()).map(move |mask| {
            self.basis
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(0, |acc, (_, &r)| acc ^ r)
        })
    }

    pub fn contains(&self, alpha: u32) -> bool {
        let mut v = alpha;
        for &r in &self.basis {
            if v & top_bit(r) != 0 {
                v ^= r;
            }
        }
        v == 0
    }
}

fn top_bit(v: u32) -> u32 {
    1 << (31 - v.leading_zeros())
}

/// Each `k`-dimensional subspace of `F_2^n` exactly once, by enumerating
/// reduced row-echelon forms: pivot sets, then the free entries below each pivot.
pub fn enumerate_subspaces(n: u32, k: u32) -> impl Iterator<Item = Subspace> {
    let mut out = Vec::new();
    if k <= n {
        for pivots in combinations(n, k) {
            let free: Vec<Vec<u32>> = pivots
                .iter()
                .map(|&p| (0..p).filter(|b| !pivots.contains(b)).collect())
                .collect();
            let total_free: usize = free.iter().map(Vec::len).sum();
            for assignment in 0u64..1 << total_free {
                let mut shift = 0;
                let mut basis = Vec::with_capacity(k as usize);
                for (&p, fr) in pivots.iter().zip(&free) {
                    let mut row = 1u32 << p;
                    for &b in fr {
                        if assignment >> shift & 1 == 1 {
                            row |= 1 << b;
                        }
                        shift += 1;
                    }
                    basis.push(row);
                }
                out.push(Subspace { n, basis });
            }
        }
    }
    out.into_iter()
}

/// `k`-subsets of `{0..n}` as decreasing lists.
fn combinations(n: u32, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for mask in 0u64..1 << n {
        if mask.count_ones() == k {
            out.push((0..n).rev().filter(|b| mask >> b & 1 == 1).collect());
        }
    }
    out
}

/// Number of `k`-dimensional subspaces of `F_2^n`.
pub fn gaussian_binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let one = BigUint::one();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= (BigUint::one() << (n - i)) - &one;
        den *= (BigUint::one() << (i + 1)) - &one;
    }
    num / den
}

/// Indicator word of `h`, a codeword of `RM(n - dim h, n)`.
pub fn subspace_char_vector(h: &Subspace) -> RMCodeword {
    let n = h.n();
    let mut bits = vec![false; 1 << n];
    for alpha in h.elements() {
        bits[alpha as usize] = true;
    }
    RMCodeword {
        bits,
        d: n - h.dim(),
        n,
    }
}

/// `w = sum_{d < n} phi^d c_d + phi^n g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RmLayers {
    pub layers: Vec<RMCodeword>,
    pub residual: GVector,
}

/// Assembles `sum_{d < n} phi^d c_d + phi^n g`. Every layer must be a codeword
/// of its degree, and the sum must be a lattice point.
pub fn bw_from_rm_layers(layers: &[RMCodeword], g: &GVector) -> Result<BWPoint> {
    let n = g.level();
    if layers.len() != n as usize {
        return Err(Error::LengthMismatch {
            left: layers.len(),
            right: n as usize,
        });
    }
    let mut acc = g.clone();
    for (d, c) in layers.iter().enumerate().rev() {
        if !rm_is_codeword(c.bits(), d as u32, n) {
            return Err(Error::NotACodeword { layer: d as u32, n });
        }
        // Horner in phi, from the top layer down
        acc = acc.mul_phi().add(&c.to_gvector())?;
    }
    BWPoint::new(acc)
}

/// Peels base-`phi` digits: `c_d = w mod phi`, then `w <- (w - c_d) / phi`.
/// Fails when a digit is not a codeword of `RM(d, n)`.
pub fn bw_to_rm_layers(w: &GVector) -> Result<RmLayers> {
    let n = w.level();
    let mut cur = w.clone();
    let mut layers = Vec::with_capacity(n as usize);
    for d in 0..n {
        let bits: Vec<bool> = cur.coords().iter().map(GaussianInt::mod_phi).collect();
        let c = RMCodeword::new(bits, d, n).map_err(|_| Error::NotACodeword { layer: d, n })?;
        cur = cur.sub(&c.to_gvector())?.div_phi()?;
        layers.push(c);
    }
    Ok(RmLayers { layers, residual: cur })
}

/// A received word with many lattice points at rsd `1 - eps`.
#[derive(Clone, Debug)]
pub struct LowerBoundInstance {
    pub n: u32,
    pub k: u32,
    /// `phi^k e_0`.
    pub r: CVector,
    /// `phi^k c_H` for every linear subspace `H` of dimension `n - k`.
    pub witnesses: DecodeList,
}

/// Smallest `k >= 0` with `2^n eps <= 2^k <= 2^(n+1) eps`.
pub fn select_k(n: u32, eps: &BigRational) -> Result<u32> {
    check_eps(n, eps)?;
    let scaled = eps * BigRational::from_integer(BigInt::one() << n);
    (0..=n + 1)
        .find(|&k| {
            let p = BigRational::from_integer(BigInt::one() << k);
            scaled <= p && p <= &scaled * BigRational::from_integer(2.into())
        })
        .ok_or_else(|| Error::Invariant(format!("no k for eps = {eps}")))
}

fn check_eps(n: u32, eps: &BigRational) -> Result<()> {
    let low = BigRational::new(BigInt::one(), BigInt::one() << n);
    if eps < &low || eps > &BigRational::one() {
        return Err(Error::OutOfRange {
            what: "eps",
            value: eps.to_string(),
        });
    }
    Ok(())
}

/// Builds `r = phi^k e_0` and its witnesses `phi^k c_H`, each verified to be a
/// lattice point at squared distance `2^n - 2^k` from `r`.
pub fn lower_bound_instance(n: u32, eps: &BigRational) -> Result<LowerBoundInstance> {
    let k = select_k(n, eps)?;
    let phi_k = GaussianInt::phi_pow(k);
    let mut e0 = vec![GaussianInt::zero(); 1 << n];
    e0[0] = phi_k.clone();
    let r = GVector::new(e0)?;
    let expected = (BigInt::one() << n) - (BigInt::one() << k);
    let mut points = Vec::new();
    for h in enumerate_subspaces(n, n - k) {
        let w = subspace_char_vector(&h).to_gvector().scale(&phi_k);
        if r.sub(&w)?.norm_sq() != expected {
            return Err(Error::Invariant(format!("witness {w} at the wrong distance")));
        }
        points.push(BWPoint::new(w)?);
    }
    let eta = BigRational::one() - eps;
    let r = r.to_cvector();
    let witnesses = DecodeList::from_points(&r, &eta, points)?;
    Ok(LowerBoundInstance { n, k, r, witnesses })
}
