//! Exact arithmetic over the Gaussian integers `Z[i]` and the Gaussian
//! rationals `Q(i)`, vectors of either, and the relative squared distance.
//!
//! Nothing here rounds. Received words live in `Q(i)^N` and lattice points in
//! `Z[i]^N`; both are stored as [`Vector`]s whose length is a power of two.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Gaussian integer `re + im*i`.
///
/// The derived ordering is lexicographic on `(re, im)`, which is the
/// coordinate order used to sort decoded lists.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        Self {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn i() -> Self {
        Self::new(0, 1)
    }

    /// `phi = 1 + i`, the prime above 2.
    pub fn phi() -> Self {
        Self::new(1, 1)
    }

    /// `phi^k`.
    pub fn phi_pow(k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul_phi();
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn norm_sq(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn mul_phi(&self) -> Self {
        Self {
            re: &self.re - &self.im,
            im: &self.re + &self.im,
        }
    }

    /// `z` is divisible by `phi` iff `re + im` is even.
    pub fn divisible_by_phi(&self) -> bool {
        (&self.re + &self.im).is_even()
    }

    /// Exact division by `phi`: `z / (1+i) = z (1-i) / 2`.
    pub fn div_phi(&self) -> Result<Self> {
        if !self.divisible_by_phi() {
            return Err(Error::NotDivisible(self.to_string()));
        }
        let two = BigInt::from(2);
        Ok(Self {
            re: (&self.re + &self.im) / &two,
            im: (&self.im - &self.re) / &two,
        })
    }

    /// Residue modulo `phi`, as the bit of `Z[i]/phi ~ F_2`.
    pub fn mod_phi(&self) -> bool {
        !self.divisible_by_phi()
    }

    pub fn to_qcomplex(&self) -> QComplex {
        QComplex {
            re: BigRational::from_integer(self.re.clone()),
            im: BigRational::from_integer(self.im.clone()),
        }
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.re, self.im)
    }
}

impl FromStr for GaussianInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<QComplex>()?
            .to_gaussian()
            .ok_or_else(|| Error::Parse(format!("`{s}` is not a Gaussian integer")))
    }
}

/// Complex number with exact rational real and imaginary parts.
///
/// `BigRational` keeps both parts reduced with positive denominators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl Default for QComplex {
    fn default() -> Self {
        Self::zero()
    }
}

impl QComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    /// `(a/b) + (c/d) i` from machine integers; panics on zero denominators.
    pub fn from_ratios(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self {
            re: BigRational::new(a.into(), b.into()),
            im: BigRational::new(c.into(), d.into()),
        }
    }

    /// `phi / 2 = 1/2 + i/2`.
    pub fn half_phi() -> Self {
        Self::from_ratios(1, 2, 1, 2)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn mul_phi(&self) -> Self {
        Self {
            re: &self.re - &self.im,
            im: &self.re + &self.im,
        }
    }

    /// Division by `phi`, always defined over `Q(i)`.
    pub fn div_phi(&self) -> Self {
        let two = BigRational::from_integer(2.into());
        Self {
            re: (&self.re + &self.im) / &two,
            im: (&self.im - &self.re) / &two,
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self {
            re: &self.re * k,
            im: &self.im * k,
        }
    }

    /// The Gaussian integer equal to `self`, if there is one.
    pub fn to_gaussian(&self) -> Option<GaussianInt> {
        if self.re.is_integer() && self.im.is_integer() {
            Some(GaussianInt {
                re: self.re.to_integer(),
                im: self.im.to_integer(),
            })
        } else {
            None
        }
    }
}

impl fmt::Display for QComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.re, self.im)
    }
}

impl FromStr for QComplex {
    type Err = Error;

    /// Parses `a/b,c/d`; a `/1` denominator may be omitted.
    fn from_str(s: &str) -> Result<Self> {
        let (re, im) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("`{s}`: expected `re,im`")))?;
        Ok(Self {
            re: parse_rational(re)?,
            im: parse_rational(im)?,
        })
    }
}

/// Parses an exact rational `p/q` or an integer `p`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("`{s}` is not a rational")))?;
    let den: BigInt = den
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("`{s}` is not a rational")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("`{s}` has a zero denominator")));
    }
    Ok(BigRational::new(num, den))
}

macro_rules! ring_ops {
    ($t:ty) => {
        impl Add for &$t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                <$t>::new(&self.re + &o.re, &self.im + &o.im)
            }
        }
        impl Sub for &$t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                <$t>::new(&self.re - &o.re, &self.im - &o.im)
            }
        }
        impl Mul for &$t {
            type Output = $t;
            fn mul(self, o: &$t) -> $t {
                <$t>::new(
                    &self.re * &o.re - &self.im * &o.im,
                    &self.re * &o.im + &self.im * &o.re,
                )
            }
        }
        impl Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                <$t>::new(-&self.re, -&self.im)
            }
        }
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

ring_ops!(GaussianInt);
ring_ops!(QComplex);

/// Coordinate types a [`Vector`] can hold.
pub trait Coord: Clone + PartialEq + fmt::Display + FromStr<Err = Error> {
    fn zero() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn mul_phi(&self) -> Self;
    fn to_q(&self) -> QComplex;
}

impl Coord for GaussianInt {
    fn zero() -> Self {
        GaussianInt::zero()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn mul_phi(&self) -> Self {
        GaussianInt::mul_phi(self)
    }
    fn to_q(&self) -> QComplex {
        self.to_qcomplex()
    }
}

impl Coord for QComplex {
    fn zero() -> Self {
        QComplex::zero()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn mul_phi(&self) -> Self {
        QComplex::mul_phi(self)
    }
    fn to_q(&self) -> QComplex {
        self.clone()
    }
}

/// A vector of length `2^n`; `n` is its level.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector<T> {
    coords: Vec<T>,
}

/// Received word in `Q(i)^N`.
pub type CVector = Vector<QComplex>;
/// Integral vector in `Z[i]^N`.
pub type GVector = Vector<GaussianInt>;

impl<T: Coord> Vector<T> {
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if !coords.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo(coords.len()));
        }
        Ok(Self { coords })
    }

    pub fn zeros(n: u32) -> Self {
        Self {
            coords: vec![T::zero(); 1 << n],
        }
    }

    /// `c` repeated `2^n` times.
    pub fn constant(n: u32, c: T) -> Self {
        Self {
            coords: vec![c; 1 << n],
        }
    }

    pub fn level(&self) -> u32 {
        self.coords.len().trailing_zeros()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    /// `(left, right)` halves, each of level `n - 1`.
    pub fn halves(&self) -> Result<(Self, Self)> {
        if self.level() == 0 {
            return Err(Error::LevelZero);
        }
        let (l, r) = self.coords.split_at(self.len() / 2);
        Ok((Self { coords: l.to_vec() }, Self { coords: r.to_vec() }))
    }

    /// `[left, right]`; both halves must have the same level.
    pub fn concat(left: &Self, right: &Self) -> Result<Self> {
        check_len(left.len(), right.len())?;
        let mut coords = left.coords.clone();
        coords.extend_from_slice(&right.coords);
        Ok(Self { coords })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, T::add)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, T::sub)
    }

    /// Coordinatewise product with the scalar `c`.
    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn mul_phi(&self) -> Self {
        self.map(T::mul_phi)
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        Self {
            coords: self.coords.iter().map(f).collect(),
        }
    }

    pub fn to_cvector(&self) -> CVector {
        Vector {
            coords: self.coords.iter().map(T::to_q).collect(),
        }
    }

    fn zip(&self, o: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        check_len(self.len(), o.len())?;
        Ok(Self {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| f(a, b)).collect(),
        })
    }
}

impl GVector {
    /// Exact coordinatewise division by `phi`.
    pub fn div_phi(&self) -> Result<Self> {
        let coords = self
            .coords
            .iter()
            .map(GaussianInt::div_phi)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { coords })
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(GaussianInt::is_zero)
    }

    pub fn norm_sq(&self) -> BigInt {
        self.coords.iter().map(GaussianInt::norm_sq).sum()
    }
}

impl CVector {
    pub fn div_phi(&self) -> Self {
        self.map(QComplex::div_phi)
    }

    /// The Gaussian-integer vector equal to `self`, if every coordinate is integral.
    pub fn to_gvector(&self) -> Option<GVector> {
        let coords = self
            .coords
            .iter()
            .map(QComplex::to_gaussian)
            .collect::<Option<Vec<_>>>()?;
        Some(Vector { coords })
    }

    /// `(phi/2) * [r0 + r1, r0 - r1]`.
    pub fn transform_halves(&self) -> Result<(Self, Self)> {
        let (r0, r1) = self.halves()?;
        let hp = QComplex::half_phi();
        Ok((r0.add(&r1)?.scale(&hp), r0.sub(&r1)?.scale(&hp)))
    }
}

impl<T: Coord> fmt::Display for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl<T: Coord> FromStr for Vector<T> {
    type Err = Error;

    /// Whitespace- or newline-separated coordinates in the `a/b,c/d` format.
    fn from_str(s: &str) -> Result<Self> {
        let coords = s.split_whitespace().map(str::parse).collect::<Result<Vec<T>>>()?;
        Self::new(coords)
    }
}

fn check_len(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::LengthMismatch { left, right });
    }
    Ok(())
}

/// `|z|^2` as an exact rational.
pub fn norm_sq(z: &QComplex) -> BigRational {
    z.norm_sq()
}

/// Relative squared distance `(1/N) * sum |x_i - y_i|^2`.
pub fn rsd<A: Coord, B: Coord>(x: &Vector<A>, y: &Vector<B>) -> Result<BigRational> {
    check_len(x.len(), y.len())?;
    let total = x.coords.iter().zip(&y.coords).fold(BigRational::zero(), |acc, (a, b)| {
        acc + (&a.to_q() - &b.to_q()).norm_sq()
    });
    Ok(total / BigRational::from_integer(BigInt::from(x.len())))
}

/// The three distances of the half decomposition `w = [u, u + phi v]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfRelation {
    /// `rsd(r, w)`.
    pub eta: BigRational,
    /// `rsd(r0, u)`.
    pub eta0: BigRational,
    /// `rsd((r1 - u) / phi, v)`.
    pub eta1: BigRational,
}

impl HalfRelation {
    /// `eta == eta0 / 2 + eta1`.
    pub fn holds(&self) -> bool {
        self.eta == &self.eta0 / BigRational::from_integer(2.into()) + &self.eta1
    }
}

/// Splits `w = [u, u + phi v]` and returns the whole and half distances to `r`.
pub fn half_relation<A: Coord>(r: &CVector, w: &Vector<A>) -> Result<HalfRelation> {
    check_len(r.len(), w.len())?;
    let w = w.to_cvector();
    let (r0, r1) = r.halves()?;
    let (u, w1) = w.halves()?;
    let v = w1.sub(&u)?.div_phi();
    Ok(HalfRelation {
        eta: rsd(r, &w)?,
        eta0: rsd(&r0, &u)?,
        eta1: rsd(&r1.sub(&u)?.div_phi(), &v)?,
    })
}

/// Smallest non-negative integer `m` with `m^2 >= x`.
pub fn ceil_sqrt(x: &BigRational) -> BigInt {
    if !x.is_positive() {
        return BigInt::zero();
    }
    let c = x.ceil().to_integer();
    let mut m = c.sqrt();
    if &m * &m < c {
        m += BigInt::one();
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn cv(s: &str) -> CVector {
        s.parse().unwrap()
    }

    #[test]
    fn norm_sq_examples() {
        assert_eq!(norm_sq(&QComplex::zero()), q("0"));
        assert_eq!(norm_sq(&"1,1".parse().unwrap()), q("2"));
        assert_eq!(norm_sq(&QComplex::half_phi()), q("1/2"));
    }

    #[test]
    fn rsd_examples() {
        assert_eq!(rsd(&cv("0,0 0,0"), &cv("1,0 1,0")).unwrap(), q("1"));
        assert_eq!(rsd(&cv("1/2,1/2 1/2,1/2"), &cv("0,0 0,0")).unwrap(), q("1/2"));
        let x = cv("3/7,-1 2,5/3");
        assert_eq!(rsd(&x, &x).unwrap(), q("0"));
        assert_eq!(
            rsd(&cv("0,0 0,0"), &cv("0,0")),
            Err(Error::LengthMismatch { left: 2, right: 1 })
        );
    }

    #[test]
    fn phi_division() {
        assert_eq!(GaussianInt::phi().div_phi().unwrap(), GaussianInt::one());
        assert_eq!(GaussianInt::new(2, 0).div_phi().unwrap(), GaussianInt::new(1, -1));
        assert!(matches!(GaussianInt::one().div_phi(), Err(Error::NotDivisible(_))));
        assert_eq!(GaussianInt::phi_pow(2), GaussianInt::new(0, 2));
        let z: QComplex = "1,0".parse().unwrap();
        assert_eq!(z.div_phi(), QComplex::from_ratios(1, 2, -1, 2));
        assert_eq!(z.div_phi().mul_phi(), z);
    }

    #[test]
    fn half_relation_examples() {
        let h = half_relation(&cv("1/2,1/2 1/2,1/2"), &cv("0,0 0,0")).unwrap();
        assert_eq!(
            (h.eta.clone(), h.eta0.clone(), h.eta1.clone()),
            (q("1/2"), q("1/2"), q("1/4"))
        );
        assert!(h.holds());

        let r = cv("1,2 -3,1/2");
        let h = half_relation(&r, &r).unwrap();
        assert_eq!((h.eta, h.eta0, h.eta1), (q("0"), q("0"), q("0")));

        let h = half_relation(&cv("0,0 0,0"), &cv("0,0 1,1")).unwrap();
        assert_eq!((h.eta, h.eta0, h.eta1), (q("1"), q("0"), q("1")));

        assert_eq!(half_relation(&cv("0,0"), &cv("0,0")), Err(Error::LevelZero));
    }

    #[test]
    fn text_format() {
        let z: QComplex = "1/2,-3/4".parse().unwrap();
        assert_eq!(z.to_string(), "1/2,-3/4");
        let z: QComplex = "2/4,6/3".parse().unwrap();
        assert_eq!(z.to_string(), "1/2,2");
        assert!("1/0,1".parse::<QComplex>().is_err());
        assert!("1".parse::<QComplex>().is_err());
        assert!("1,0 0,0 0,0".parse::<CVector>().is_err());
        let v: CVector = "1,0\n0,1".parse().unwrap();
        assert_eq!(v.level(), 1);
    }

    #[test]
    fn ceil_sqrt_values() {
        assert_eq!(ceil_sqrt(&q("0")), BigInt::from(0));
        assert_eq!(ceil_sqrt(&q("1/4")), BigInt::from(1));
        assert_eq!(ceil_sqrt(&q("4")), BigInt::from(2));
        assert_eq!(ceil_sqrt(&q("17/4")), BigInt::from(3));
    }
}
