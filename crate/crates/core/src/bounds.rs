//! Closed-form list-size bounds and an empirical checker that places measured
//! list sizes between witness counts and the applicable upper bound.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{CVector, QComplex};
use crate::decoder::Decoder;
use crate::error::{Error, Result};
use crate::rm::{gaussian_binomial, lower_bound_instance, select_k};
use crate::sample::{random_word, rng_from_seed};

pub const DEFAULT_ETA_GRID: [(i64, i64); 7] = [(1, 4), (5, 12), (1, 2), (5, 8), (3, 4), (7, 8), (1, 1)];

pub fn default_eta_grid() -> Vec<BigRational> {
    DEFAULT_ETA_GRID
        .iter()
        .map(|&(p, q)| BigRational::new(p.into(), q.into()))
        .collect()
}

/// `4N`.
pub fn johnson_half(n: u32) -> BigUint {
    BigUint::from(4u32) << n
}

/// `floor(1 / (2 eps))`.
pub fn johnson_eps(eps: &BigRational) -> Result<BigUint> {
    if !eps.is_positive() {
        return Err(out_of_range(eps));
    }
    let v = (eps * BigRational::from_integer(2.into())).recip().floor().to_integer();
    Ok(v.to_biguint().expect("positive"))
}

/// `4 * 24^n`.
pub fn upper_58(n: u32) -> BigUint {
    BigUint::from(4u32) * BigUint::from(24u32).pow(n)
}

/// `4 * 24^(2n)`.
pub fn upper_34(n: u32) -> BigUint {
    BigUint::from(4u32) * BigUint::from(24u32).pow(2 * n)
}

/// `ceil(4 * (1/eps)^(16n))`.
pub fn upper_eps(eps: &BigRational, n: u32) -> Result<BigUint> {
    if !eps.is_positive() || eps > &BigRational::one() {
        return Err(out_of_range(eps));
    }
    let inv = eps.recip();
    let num = inv.numer().pow(16 * n) * BigInt::from(4);
    let den = inv.denom().pow(16 * n);
    Ok(num.div_ceil(&den).to_biguint().expect("positive"))
}

/// Formula value of the lower bound and the number of explicit witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBound {
    pub formula: BigUint,
    pub witnesses: BigUint,
}

/// `floor(2^((n - log2(1/eps)) * log2(1/(2 eps))))`, at least 1, together with
/// the Gaussian-binomial witness count.
pub fn lower_eps(eps: &BigRational, n: u32) -> Result<LowerBound> {
    let k = select_k(n, eps)?;
    let formula = match exact_log2(&eps.recip()) {
        Some(a) => {
            let e = (n as i64 - a) * (a - 1);
            if e >= 0 {
                BigUint::one() << e as u64
            } else {
                BigUint::zero()
            }
        }
        None => float_lower(eps, n),
    };
    let formula = formula.max(BigUint::one());
    let witnesses = gaussian_binomial(n, n - k);
    if witnesses < formula {
        return Err(Error::Invariant(format!(
            "{witnesses} witnesses below the bound {formula} at n = {n}, eps = {eps}"
        )));
    }
    Ok(LowerBound { formula, witnesses })
}

fn float_lower(eps: &BigRational, n: u32) -> BigUint {
    let e = eps.to_f64().expect("finite");
    let exponent = (n as f64 + e.log2()) * (-(2.0 * e).log2());
    if exponent < 0.0 {
        return BigUint::zero();
    }
    let whole = exponent.floor();
    // nudged down so rounding never lifts a lower bound
    let mantissa = (exponent - whole).exp2() * (1.0 - 1e-12) * (1u64 << 52) as f64;
    let v = BigUint::from(mantissa as u64) << whole as u64;
    v >> 52u32
}

/// `a` with `q = 2^a`, when `q` is a power of two.
fn exact_log2(q: &BigRational) -> Option<i64> {
    let pow = |v: &BigInt| -> Option<i64> {
        let u = v.to_biguint()?;
        (u.count_ones() == 1).then(|| u.trailing_zeros().expect("nonzero") as i64)
    };
    Some(pow(q.numer())? - pow(q.denom())?)
}

fn out_of_range(eps: &BigRational) -> Error {
    Error::OutOfRange {
        what: "eps",
        value: eps.to_string(),
    }
}

/// Tightest upper bound that covers radius `eta` at level `n`, if any.
pub fn applicable_upper(n: u32, eta: &BigRational) -> Option<(BigUint, &'static str)> {
    let q = |p: i64, d: i64| BigRational::new(p.into(), d.into());
    let half = q(1, 2);
    let mut best: Option<(BigUint, &'static str)> = None;
    let mut offer = |v: BigUint, id: &'static str| {
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, id));
        }
    };
    if eta.is_negative() {
        return None;
    }
    if eta < &half {
        offer(johnson_eps(&(&half - eta)).expect("positive"), "johnson_eps");
    }
    if eta <= &half {
        offer(johnson_half(n), "johnson_half");
    }
    if eta <= &q(5, 8) {
        offer(upper_58(n), "upper_58");
    }
    if eta <= &q(3, 4) {
        offer(upper_34(n), "upper_34");
    }
    if eta < &BigRational::one() {
        offer(
            upper_eps(&(BigRational::one() - eta), n).expect("in range"),
            "upper_eps",
        );
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub n: u32,
    pub eta: BigRational,
    /// `random:<seed>`, `half-phi`, or `lower-bound`.
    pub source: String,
    pub measured: usize,
    pub lower: BigUint,
    pub upper: Option<BigUint>,
    pub formula_id: &'static str,
    pub pass: bool,
}

impl BoundReport {
    pub const HEADER: &'static str = "n\teta\tsource\tmeasured\tlower\tupper\tformula\tpass";

    fn new(n: u32, eta: &BigRational, source: String, measured: usize, lower: BigUint) -> Self {
        let (upper, formula_id) = match applicable_upper(n, eta) {
            Some((v, id)) => (Some(v), id),
            None => (None, "none"),
        };
        let m = BigUint::from(measured);
        let pass = lower <= m && upper.as_ref().is_none_or(|u| &m <= u);
        Self {
            n,
            eta: eta.clone(),
            source,
            measured,
            lower,
            upper,
            formula_id,
            pass,
        }
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let upper = self.upper.as_ref().map_or("-".to_string(), |u| u.to_string());
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.n,
            self.eta,
            self.source,
            self.measured,
            self.lower,
            upper,
            self.formula_id,
            if self.pass { "ok" } else { "FAIL" }
        )
    }
}

/// Decodes `trials` random words per radius plus the constant `phi/2` word and,
/// where `1 - eta` admits one, the lower-bound instance. Reports come back in
/// grid order, then random trials by seed, then the structured words.
pub fn validate_bounds(n: u32, trials: u64, eta_grid: &[BigRational], seed: u64) -> Result<Vec<BoundReport>> {
    let decoder = Decoder::new();
    let mut reports = Vec::new();
    for eta in eta_grid {
        let random: Vec<BoundReport> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let s = seed.wrapping_add(t);
                let r = random_word(n, &mut rng_from_seed(s));
                let measured = decoder.decode(&r, eta)?.len();
                Ok(BoundReport::new(
                    n,
                    eta,
                    format!("random:{s}"),
                    measured,
                    BigUint::zero(),
                ))
            })
            .collect::<Result<_>>()?;
        reports.extend(random);

        let r = CVector::constant(n, QComplex::half_phi());
        let measured = decoder.decode(&r, eta)?.len();
        let lower = if eta >= &BigRational::new(1.into(), 2.into()) {
            johnson_half(n)
        } else {
            BigUint::zero()
        };
        reports.push(BoundReport::new(n, eta, "half-phi".into(), measured, lower));

        let eps = BigRational::one() - eta;
        if select_k(n, &eps).is_ok() {
            let inst = lower_bound_instance(n, &eps)?;
            let measured = decoder.decode(&inst.r, eta)?.len();
            let lower = BigUint::from(inst.witnesses.len());
            reports.push(BoundReport::new(n, eta, "lower-bound".into(), measured, lower));
        }
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_rational;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn u(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn closed_forms() {
        assert_eq!(johnson_half(0), u(4));
        assert_eq!(johnson_half(1), u(8));
        assert_eq!(johnson_half(3), u(32));
        assert_eq!(johnson_eps(&q("1/4")).unwrap(), u(2));
        assert_eq!(johnson_eps(&q("1/2")).unwrap(), u(1));
        assert_eq!(johnson_eps(&q("1/12")).unwrap(), u(6));
        assert!(johnson_eps(&q("0")).is_err());
        assert_eq!(upper_58(1), u(96));
        assert_eq!(upper_34(1), u(2304));
        assert_eq!(upper_eps(&q("1/2"), 1).unwrap(), u(262144));
        assert_eq!(
            upper_eps(&q("2/3"), 1).unwrap(),
            u(4 * 3u64.pow(16)).div_ceil(&u(2u64.pow(16)))
        );
        assert!(upper_eps(&q("3/2"), 1).is_err());
    }

    #[test]
    fn lower_bounds() {
        let l = lower_eps(&q("1/2"), 2).unwrap();
        assert_eq!((l.formula, l.witnesses), (u(1), u(3)));
        assert_eq!(lower_eps(&q("1/4"), 4).unwrap().formula, u(4));
        assert_eq!(lower_eps(&q("1"), 3).unwrap().formula, u(1));
        // 2^((3 - log2 3) * log2(3/2)) = 1.80...
        assert_eq!(lower_eps(&q("1/3"), 3).unwrap().formula, u(1));
        // 2^((6 - log2 6) * log2 3) = 42.6...
        assert_eq!(lower_eps(&q("1/6"), 6).unwrap().formula, u(42));
        assert!(lower_eps(&q("1/8"), 2).is_err());
    }

    #[test]
    fn selector() {
        assert_eq!(applicable_upper(2, &q("1/4")).unwrap(), (u(2), "johnson_eps"));
        assert_eq!(applicable_upper(2, &q("1/2")).unwrap(), (u(16), "johnson_half"));
        assert_eq!(applicable_upper(1, &q("5/8")).unwrap(), (u(96), "upper_58"));
        assert_eq!(applicable_upper(1, &q("3/4")).unwrap(), (u(2304), "upper_34"));
        assert_eq!(applicable_upper(1, &q("7/8")).unwrap().1, "upper_eps");
        assert!(applicable_upper(1, &q("1")).is_none());
    }

    #[test]
    fn small_validation_passes() {
        let reports = validate_bounds(1, 4, &default_eta_grid(), 3).unwrap();
        assert!(reports.iter().all(|r| r.pass), "{reports:?}");
        let tight = reports
            .iter()
            .find(|r| r.source == "half-phi" && r.eta == q("1/2"))
            .unwrap();
        assert_eq!((tight.measured, tight.upper.clone()), (8, Some(u(8))));
        let again = validate_bounds(1, 4, &default_eta_grid(), 3).unwrap();
        assert_eq!(reports, again);
    }

    #[test]
    fn level_zero_radius_zero() {
        let reports = validate_bounds(0, 5, &[q("0")], 11).unwrap();
        assert!(reports.iter().all(|r| r.measured <= 1 && r.pass));
    }
}
