//! The Barnes-Wall lattice family `BW_n`.
//!
//! `BW_0 = Z[i]` and `BW_n = { [u, u + phi v] : u, v in BW_{n-1} }`.
//!
//! Coordinate `j` of a level-`n` vector is the point `x` of `{0, phi}^n`
//! with `x_i = phi` iff bit `i - 1` of `j` is set. Halving splits on the top
//! bit, so the left half is `x_n = 0` and the right half is `x_n = phi`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::{CVector, Coord, GVector, GaussianInt, QComplex, Vector};
use crate::error::{Error, Result};

/// A verified point of `BW_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BWPoint {
    coords: GVector,
}

impl BWPoint {
    pub fn new(coords: GVector) -> Result<Self> {
        if !is_member(&coords) {
            return Err(Error::NotAMember(coords.level()));
        }
        Ok(Self { coords })
    }

    /// Caller guarantees membership.
    pub(crate) fn new_unchecked(coords: GVector) -> Self {
        debug_assert!(is_member(&coords));
        Self { coords }
    }

    pub fn zero(n: u32) -> Self {
        Self {
            coords: GVector::zeros(n),
        }
    }

    pub fn level(&self) -> u32 {
        self.coords.level()
    }

    pub fn coords(&self) -> &GVector {
        &self.coords
    }

    pub fn into_inner(self) -> GVector {
        self.coords
    }

    pub fn swap_halves(&self) -> Result<Self> {
        Ok(Self::new_unchecked(swap_halves(&self.coords)?))
    }

    /// `T(w)`; integral again because `T(BW_n) = BW_n`.
    pub fn automorphism_t(&self) -> Result<Self> {
        let image = automorphism_t(&self.coords.to_cvector())?;
        let coords = image
            .to_gvector()
            .ok_or_else(|| Error::Invariant("T left the Gaussian integers".into()))?;
        Ok(Self::new_unchecked(coords))
    }
}

impl std::fmt::Display for BWPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.coords.fmt(f)
    }
}

/// Rows of the `n`-fold Kronecker power of `[[1, 1], [0, phi]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatrix {
    rows: Vec<GVector>,
}

impl GeneratorMatrix {
    pub fn level(&self) -> u32 {
        self.rows.len().trailing_zeros()
    }

    pub fn rows(&self) -> &[GVector] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &GaussianInt {
        &self.rows[i].coords()[j]
    }

    pub fn diagonal(&self) -> Vec<GaussianInt> {
        (0..self.rows.len()).map(|j| self.entry(j, j).clone()).collect()
    }

    /// `sum_i x_i * row_i`.
    pub fn combine(&self, coeffs: &GVector) -> Result<GVector> {
        if coeffs.len() != self.rows.len() {
            return Err(Error::LengthMismatch {
                left: coeffs.len(),
                right: self.rows.len(),
            });
        }
        let mut acc = GVector::zeros(self.level());
        for (x, row) in coeffs.coords().iter().zip(&self.rows) {
            if !x.is_zero() {
                acc = acc.add(&row.scale(x))?;
            }
        }
        Ok(acc)
    }

    /// Solves `x W = w` by forward substitution; `Err` if `w` is not in the row span over `Z[i]`.
    pub fn coefficients(&self, w: &GVector) -> Result<GVector> {
        let size = self.rows.len();
        if w.len() != size {
            return Err(Error::LengthMismatch {
                left: w.len(),
                right: size,
            });
        }
        let mut x: Vec<GaussianInt> = Vec::with_capacity(size);
        for j in 0..size {
            let mut rest = w.coords()[j].clone();
            for (i, xi) in x.iter().enumerate() {
                let e = self.entry(i, j);
                if !e.is_zero() {
                    rest = &rest - &(xi * e);
                }
            }
            // the diagonal entry is phi^popcount(j)
            for _ in 0..j.count_ones() {
                rest = rest.div_phi().map_err(|_| Error::NotAMember(self.level()))?;
            }
            x.push(rest);
        }
        GVector::new(x)
    }
}

/// The `n`-fold Kronecker power `W = [[1, 1], [0, phi]]^(x n)`.
pub fn generator_matrix(n: u32) -> GeneratorMatrix {
    let mut rows = vec![GVector::constant(0, GaussianInt::one())];
    for _ in 0..n {
        let zero = GVector::zeros(rows[0].level());
        let mut next = Vec::with_capacity(rows.len() * 2);
        for row in &rows {
            next.push(GVector::concat(row, row).expect("equal halves"));
        }
        for row in &rows {
            next.push(GVector::concat(&zero, &row.mul_phi()).expect("equal halves"));
        }
        rows = next;
    }
    GeneratorMatrix { rows }
}

/// Membership in `BW_n`, with `n` the level of `w`.
pub fn is_member(w: &GVector) -> bool {
    member_slice(w.coords())
}

/// As [`is_member`]; non-integral coordinates make the answer `false`.
pub fn is_member_cvector(w: &CVector) -> bool {
    w.to_gvector().is_some_and(|g| is_member(&g))
}

fn member_slice(w: &[GaussianInt]) -> bool {
    if w.len() == 1 {
        return true;
    }
    let (u, w1) = w.split_at(w.len() / 2);
    let mut v = Vec::with_capacity(u.len());
    for (a, b) in u.iter().zip(w1) {
        match (b - a).div_phi() {
            Ok(q) => v.push(q),
            Err(_) => return false,
        }
    }
    member_slice(u) && member_slice(&v)
}

/// `[w1, w0]`.
pub fn swap_halves<T: Coord>(w: &Vector<T>) -> Result<Vector<T>> {
    let (w0, w1) = w.halves()?;
    Vector::concat(&w1, &w0)
}

/// `T([u, v]) = (phi/2) [u + v, u - v]`, the distance-preserving automorphism.
pub fn automorphism_t(x: &CVector) -> Result<CVector> {
    let (plus, minus) = x.transform_halves()?;
    CVector::concat(&plus, &minus)
}

/// A multilinear polynomial over `Z[i]` together with a `phi^n`-scaled residual.
///
/// `coeffs[S]` is the coefficient of `prod_{i in S} x_i`, where bit `i - 1`
/// of the index `S` marks `i in S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multilinear {
    pub coeffs: GVector,
    pub residual: GVector,
}

/// `phi^n * residual + (p(x))_{x in {0, phi}^n}`.
pub fn multilinear_evaluate(coeffs: &GVector, residual: &GVector) -> Result<BWPoint> {
    if coeffs.len() != residual.len() {
        return Err(Error::LengthMismatch {
            left: coeffs.len(),
            right: residual.len(),
        });
    }
    let n = coeffs.level();
    let size = coeffs.len();
    let phi_pows: Vec<GaussianInt> = (0..=n).map(GaussianInt::phi_pow).collect();
    let mut out = Vec::with_capacity(size);
    for j in 0..size {
        let mut acc = &residual.coords()[j] * &phi_pows[n as usize];
        // monomial x^S is phi^|S| at x_j when S is a subset of j, else 0
        let mut s = j;
        loop {
            let a = &coeffs.coords()[s];
            if !a.is_zero() {
                acc = &acc + &(a * &phi_pows[s.count_ones() as usize]);
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & j;
        }
        out.push(acc);
    }
    Ok(BWPoint::new_unchecked(GVector::new(out)?))
}

/// Canonical inverse of [`multilinear_evaluate`].
///
/// Subset Moebius inversion recovers `a_S * phi^|S|`; for members every such
/// value is divisible by `phi^|S|`, so the canonical form always carries a
/// zero residual and `a` equals the coefficient vector against [`generator_matrix`].
pub fn multilinear_interpolate(w: &GVector) -> Result<Multilinear> {
    let n = w.level();
    let mut b: Vec<GaussianInt> = w.coords().to_vec();
    for bit in 0..n {
        let m = 1usize << bit;
        for s in 0..b.len() {
            if s & m != 0 {
                b[s] = &b[s] - &b[s ^ m];
            }
        }
    }
    for (s, v) in b.iter_mut().enumerate() {
        for _ in 0..s.count_ones() {
            *v = v.div_phi().map_err(|_| Error::NotAMember(n))?;
        }
    }
    let coeffs = GVector::new(b)?;
    let residual = GVector::zeros(n);
    Ok(Multilinear { coeffs, residual })
}

/// `prod_j |W_jj|^2`, the squared covolume of `BW_n` as a `Z[i]`-lattice.
pub fn diagonal_norm_product(w: &GeneratorMatrix) -> BigInt {
    w.diagonal().iter().map(GaussianInt::norm_sq).product()
}

/// `x -> i x`, used to check `T^2 = i`.
pub fn times_i(x: &CVector) -> CVector {
    let i = QComplex::new(BigRational::from_integer(0.into()), BigRational::from_integer(1.into()));
    x.scale(&i)
}
