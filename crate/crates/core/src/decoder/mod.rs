//! Recursive list decoding of `BW_n`.
//!
//! The received word `r = [r0, r1]` is decoded by recursing on the four
//! half-length words `r0`, `r1`, `r+ = (phi/2)(r0 + r1)` and
//! `r- = (phi/2)(r0 - r1)` at the same radius, then solving for `[w0, w1]`
//! from every pair taken from one plain half and one transformed half.
//! Candidates farther than the radius are dropped and duplicates collapsed.

mod engine;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::arith::{ceil_sqrt, rsd, CVector, GVector, GaussianInt, QComplex, Vector};
use crate::error::{Error, Result};
use crate::lattice::{is_member, BWPoint};

use engine::{Entry, Lane, Radius, Word, G};

pub use engine::PAR_CUTOFF;

/// One decoded point and its exact relative squared distance to the query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeEntry {
    pub point: BWPoint,
    pub distance: BigRational,
}

/// The list `L(r, eta)`, duplicate-free and sorted by point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeList {
    query: CVector,
    eta: BigRational,
    entries: Vec<DecodeEntry>,
}

impl DecodeList {
    /// Builds a list from arbitrary points, computing distances, sorting and
    /// removing duplicates. Every point must lie within `eta` of `query`.
    pub fn from_points(query: &CVector, eta: &BigRational, points: Vec<BWPoint>) -> Result<Self> {
        let mut entries = points
            .into_iter()
            .map(|point| {
                let distance = rsd(query, point.coords())?;
                if &distance > eta {
                    return Err(Error::Invariant(format!(
                        "point {point} lies at rsd {distance} > {eta}"
                    )));
                }
                Ok(DecodeEntry { point, distance })
            })
            .collect::<Result<Vec<_>>>()?;
        entries.sort_by(|a, b| a.point.cmp(&b.point));
        entries.dedup_by(|a, b| a.point == b.point);
        Ok(Self {
            query: query.clone(),
            eta: eta.clone(),
            entries,
        })
    }

    pub fn query(&self) -> &CVector {
        &self.query
    }

    pub fn eta(&self) -> &BigRational {
        &self.eta
    }

    pub fn entries(&self) -> &[DecodeEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &BWPoint> {
        self.entries.iter().map(|e| &e.point)
    }

    pub fn contains(&self, w: &GVector) -> bool {
        self.entries.binary_search_by(|e| e.point.coords().cmp(w)).is_ok()
    }
}

impl fmt::Display for DecodeList {
    /// One `point<TAB>rsd` line per entry.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{}\t{}", e.point, e.distance)?;
        }
        Ok(())
    }
}

/// Which integer width carried a decode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaneKind {
    I64,
    I128,
    Big,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecodeStats {
    /// Counted coordinate-level arithmetic operations over `C`.
    pub ops: u64,
    pub lane: LaneKind,
}

/// Decoder configuration.
#[derive(Clone, Debug)]
pub struct Decoder {
    workers: usize,
    max_list: Option<usize>,
}

impl Default for Decoder {
    fn default() -> Self {
        Self::new()
    }
}

impl Decoder {
    pub fn new() -> Self {
        Self {
            workers: 1,
            max_list: None,
        }
    }

    /// Worker threads; `1` runs everything on the calling thread.
    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    /// Fail with [`Error::ListCapExceeded`] when the list is longer than `cap`.
    pub fn max_list(mut self, cap: Option<usize>) -> Self {
        self.max_list = cap;
        self
    }

    pub fn decode(&self, r: &CVector, eta: &BigRational) -> Result<DecodeList> {
        self.decode_with_stats(r, eta).map(|(l, _)| l)
    }

    pub fn decode_with_stats(&self, r: &CVector, eta: &BigRational) -> Result<(DecodeList, DecodeStats)> {
        if eta.is_negative() {
            return Err(Error::OutOfRange {
                what: "eta",
                value: eta.to_string(),
            });
        }
        if !r.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo(r.len()));
        }
        let query = Query::new(r, eta);
        let (points, stats) = if self.workers > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.workers)
                .build()
                .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
            pool.install(|| query.run(true))
        } else {
            query.run(false)
        };
        if let Some(cap) = self.max_list {
            if points.len() > cap {
                return Err(Error::ListCapExceeded {
                    size: points.len(),
                    cap,
                });
            }
        }
        let entries = points
            .into_iter()
            .map(|(coords, dist)| DecodeEntry {
                point: BWPoint::new_unchecked(coords),
                distance: dist / &query.denominator,
            })
            .collect();
        let list = DecodeList {
            query: r.clone(),
            eta: eta.clone(),
            entries,
        };
        Ok((list, stats))
    }
}

/// `L(r, eta)` on the calling thread.
pub fn list_decode(r: &CVector, eta: &BigRational) -> Result<DecodeList> {
    Decoder::new().decode(r, eta)
}

/// `L(r, eta)` with fork-join parallelism over `workers` threads; the
/// output is identical to [`list_decode`].
pub fn list_decode_parallel(r: &CVector, eta: &BigRational, workers: usize) -> Result<DecodeList> {
    Decoder::new().workers(workers).decode(r, eta)
}

/// All Gaussian integers within `|r - z|^2 <= eta`.
pub fn base_case_enumerate(r: &QComplex, eta: &BigRational) -> Result<DecodeList> {
    list_decode(&Vector::new(vec![r.clone()])?, eta)
}

/// Which known half and which transformed half a candidate is solved from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pairing {
    /// `[w0, (2/phi) w+ - w0]`
    ZeroPlus,
    /// `[w0, w0 - (2/phi) w-]`
    ZeroMinus,
    /// `[(2/phi) w+ - w1, w1]`
    OnePlus,
    /// `[(2/phi) w- + w1, w1]`
    OneMinus,
}

impl Pairing {
    pub const ALL: [Pairing; 4] = [
        Pairing::ZeroPlus,
        Pairing::ZeroMinus,
        Pairing::OnePlus,
        Pairing::OneMinus,
    ];
}

/// Reconstructs the level-`n` candidate from a plain half `w_b` and a
/// transformed half `w_s`, both of level `n - 1`.
pub fn combine_candidates(pairing: Pairing, w_b: &BWPoint, w_s: &BWPoint) -> Result<BWPoint> {
    let two_over_phi = GaussianInt::new(1, -1);
    let ts = w_s.coords().scale(&two_over_phi);
    let wb = w_b.coords();
    let coords = match pairing {
        Pairing::ZeroPlus => GVector::concat(wb, &ts.sub(wb)?)?,
        Pairing::ZeroMinus => GVector::concat(wb, &wb.sub(&ts)?)?,
        Pairing::OnePlus => GVector::concat(&ts.sub(wb)?, wb)?,
        Pairing::OneMinus => GVector::concat(&ts.add(wb)?, wb)?,
    };
    if !is_member(&coords) {
        return Err(Error::Invariant(format!("candidate {coords} is not a lattice point")));
    }
    Ok(BWPoint::new_unchecked(coords))
}

/// A query translated into scaled integers.
struct Query {
    coords: Vec<GaussianInt>,
    scale: BigInt,
    p: BigInt,
    q: BigInt,
    ceil_sqrt: BigInt,
    /// `N * S^2`, converting scaled distances back to rsd.
    denominator: BigRational,
    lane: LaneKind,
}

impl Query {
    fn new(r: &CVector, eta: &BigRational) -> Self {
        let scale = r
            .coords()
            .iter()
            .fold(BigInt::one(), |acc, z| acc.lcm(z.re.denom()).lcm(z.im.denom()));
        let coords: Vec<GaussianInt> = r
            .coords()
            .iter()
            .map(|z| GaussianInt {
                re: (&z.re * &scale).to_integer(),
                im: (&z.im * &scale).to_integer(),
            })
            .collect();
        let n_coords = BigInt::from(r.len());
        let denominator = BigRational::from_integer(&n_coords * &scale * &scale);
        let ceil_sqrt = ceil_sqrt(eta);
        let lane = Self::pick_lane(r, eta, &scale, &ceil_sqrt);
        Self {
            coords,
            scale,
            p: eta.numer().clone(),
            q: eta.denom().clone(),
            ceil_sqrt,
            denominator,
            lane,
        }
    }

    /// Every value the engine forms is bounded by
    /// `(p + q + 1) * N * 64 * S_max^2 * B^2`, where `S_max = S * 2^n` and `B`
    /// bounds lattice coordinates reachable at any depth.
    fn pick_lane(r: &CVector, eta: &BigRational, scale: &BigInt, ceil_sqrt_eta: &BigInt) -> LaneKind {
        let n = r.level() as u64;
        let norm: BigRational = r.coords().iter().map(QComplex::norm_sq).sum();
        let reach = ceil_sqrt(&norm) + BigInt::one();
        let spread = ceil_sqrt(&(eta * BigRational::from_integer(BigInt::from(r.len()))));
        let bound: BigInt = &reach + BigInt::from(2) * (spread + ceil_sqrt_eta + BigInt::from(2));
        let bits = eta.numer().bits() + eta.denom().bits() + 1 + n + 7 + 2 * (scale.bits() + n) + 2 * bound.bits();
        if bits < 62 {
            LaneKind::I64
        } else if bits < 126 {
            LaneKind::I128
        } else {
            LaneKind::Big
        }
    }

    fn run(&self, parallel: bool) -> (Vec<(GVector, BigRational)>, DecodeStats) {
        match self.lane {
            LaneKind::I64 => self.run_in::<i64>(parallel),
            LaneKind::I128 => self.run_in::<i128>(parallel),
            LaneKind::Big => self.run_in::<BigInt>(parallel),
        }
    }

    fn run_in<I: Lane>(&self, parallel: bool) -> (Vec<(GVector, BigRational)>, DecodeStats) {
        let word = Word {
            coords: self
                .coords
                .iter()
                .map(|z| G {
                    re: I::from_big(&z.re),
                    im: I::from_big(&z.im),
                })
                .collect(),
            scale: I::from_big(&self.scale),
        };
        let radius = Radius {
            p: I::from_big(&self.p),
            q: I::from_big(&self.q),
            ceil_sqrt: I::from_big(&self.ceil_sqrt),
        };
        let (entries, ops) = engine::decode(&word, &radius, parallel);
        let points = entries
            .into_iter()
            .map(|Entry { point, dist }| {
                let coords = point
                    .into_iter()
                    .map(|z| GaussianInt {
                        re: z.re.to_big(),
                        im: z.im.to_big(),
                    })
                    .collect();
                (
                    GVector::new(coords).expect("decoder preserves the length"),
                    BigRational::from_integer(dist.to_big()),
                )
            })
            .collect();
        (points, DecodeStats { ops, lane: self.lane })
    }
}

impl LaneKind {
    pub fn name(self) -> &'static str {
        match self {
            LaneKind::I64 => "i64",
            LaneKind::I128 => "i128",
            LaneKind::Big => "bigint",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_rational;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn cv(s: &str) -> CVector {
        s.parse().unwrap()
    }

    fn pt(s: &str) -> BWPoint {
        BWPoint::new(s.parse().unwrap()).unwrap()
    }

    fn rendered(l: &DecodeList) -> Vec<String> {
        l.points().map(|p| p.to_string()).collect()
    }

    #[test]
    fn base_case_examples() {
        let l = base_case_enumerate(&QComplex::half_phi(), &q("1/2")).unwrap();
        assert_eq!(rendered(&l), vec!["0,0", "0,1", "1,0", "1,1"]);
        assert!(l.entries().iter().all(|e| e.distance == q("1/2")));

        let l = base_case_enumerate(&QComplex::zero(), &q("0")).unwrap();
        assert_eq!(rendered(&l), vec!["0,0"]);

        let l = base_case_enumerate(&QComplex::zero(), &q("1")).unwrap();
        assert_eq!(rendered(&l), vec!["-1,0", "0,-1", "0,0", "0,1", "1,0"]);
    }

    #[test]
    fn combine_examples() {
        // (1 - i) phi = 2
        let w = combine_candidates(Pairing::ZeroPlus, &pt("1,0"), &pt("1,1")).unwrap();
        assert_eq!(w, pt("1,0 1,0"));
        let w = combine_candidates(Pairing::ZeroMinus, &pt("0,0"), &pt("0,0")).unwrap();
        assert_eq!(w, pt("0,0 0,0"));
        let w = combine_candidates(Pairing::OnePlus, &pt("0,0"), &pt("1,1")).unwrap();
        assert_eq!(w, pt("2,0 0,0"));
    }

    #[test]
    fn combine_inverts_the_automorphism() {
        let w = pt("1,0 2,1 0,1 -1,2");
        let t = w.automorphism_t().unwrap();
        let (w0, w1) = w.coords().halves().unwrap();
        let (tp, tm) = t.coords().halves().unwrap();
        let (w0, w1) = (BWPoint::new(w0).unwrap(), BWPoint::new(w1).unwrap());
        let (tp, tm) = (BWPoint::new(tp).unwrap(), BWPoint::new(tm).unwrap());
        assert_eq!(combine_candidates(Pairing::ZeroPlus, &w0, &tp).unwrap(), w);
        assert_eq!(combine_candidates(Pairing::ZeroMinus, &w0, &tm).unwrap(), w);
        assert_eq!(combine_candidates(Pairing::OnePlus, &w1, &tp).unwrap(), w);
        assert_eq!(combine_candidates(Pairing::OneMinus, &w1, &tm).unwrap(), w);
    }

    #[test]
    fn johnson_word_level_one() {
        let l = list_decode(&cv("1/2,1/2 1/2,1/2"), &q("1/2")).unwrap();
        let mut expected = vec![
            "0,0 0,0", "1,0 1,0", "0,1 0,1", "1,1 1,1", "0,0 1,1", "1,1 0,0", "1,0 0,1", "0,1 1,0",
        ];
        expected.sort_by_key(|s| s.parse::<GVector>().unwrap());
        assert_eq!(rendered(&l), expected);
    }

    #[test]
    fn member_at_radius_zero() {
        let w = pt("1,0 2,1 0,1 -1,2");
        let l = list_decode(&w.coords().to_cvector(), &q("0")).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l.entries()[0].point, w);
        assert_eq!(l.entries()[0].distance, q("0"));
    }

    #[test]
    fn rejects_bad_queries() {
        assert_eq!(
            list_decode(&cv("0,0"), &q("-1")).unwrap_err(),
            Error::OutOfRange {
                what: "eta",
                value: "-1".into()
            }
        );
        let capped = Decoder::new()
            .max_list(Some(3))
            .decode(&cv("1/2,1/2 1/2,1/2"), &q("1/2"));
        assert_eq!(capped.unwrap_err(), Error::ListCapExceeded { size: 8, cap: 3 });
    }

    #[test]
    fn lanes_agree() {
        let r = cv("1/3,2/5 -7/2,1 0,1/7 5,-5/3");
        let eta = q("3/4");
        let query = Query::new(&r, &eta);
        let a = query.run_in::<i64>(false).0;
        let b = query.run_in::<i128>(false).0;
        let c = query.run_in::<BigInt>(false).0;
        assert!(!a.is_empty());
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn huge_inputs_use_big_lane() {
        let r = cv("123456789012345678901234567890/7,1 0,0");
        let query = Query::new(&r, &q("1/2"));
        assert_eq!(query.lane, LaneKind::Big);
        let l = list_decode(&r, &q("1/2")).unwrap();
        for e in l.entries() {
            assert!(e.distance <= q("1/2"));
        }
    }
}
