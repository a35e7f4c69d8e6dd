//! Fixed inputs shared by the benchmarks.
use bwlist_core::sample::{random_word, rng_from_seed};
use bwlist_core::{parse_rational, BigRational, CVector};

pub fn word(n: u32) -> CVector {
    random_word(n, &mut rng_from_seed(0xb3 + n as u64))
}

pub fn radius(s: &str) -> BigRational {
    parse_rational(s).expect("rational literal")
}
