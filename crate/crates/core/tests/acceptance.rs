//! Acceptance suite. Runs every criterion, prints one line each, and exits
//! nonzero on any failure not listed in `KNOWN_FAILURES`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use bwlist_core::arith::half_relation;
use bwlist_core::bounds::{default_eta_grid, johnson_half, lower_eps, validate_bounds};
use bwlist_core::lattice::{automorphism_t, is_member, multilinear_evaluate, multilinear_interpolate, times_i};
use bwlist_core::rm::{bw_from_rm_layers, bw_to_rm_layers, gaussian_binomial, lower_bound_instance};
use bwlist_core::sample::{random_member, random_word, rng_from_seed};
use bwlist_core::{
    list_decode, oracle_list, parse_rational, rsd, shortest_vectors, BWPoint, CVector, Decoder, GVector, GaussianInt,
    QComplex,
};

/// Criteria expected to fail: id, a marker the failure message must contain,
/// and the reason printed next to the FAIL line.
const KNOWN_FAILURES: [(u32, &str, &str); 1] = [(
    6,
    "RM layering:",
    "0/1-digit RM layering is not closed under addition at n = 6; \
     phi^3 (x1x2x3 + x4x5x6) peels but is not a lattice point",
)];

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn q(s: &str) -> BigRational {
    parse_rational(s).expect("rational literal")
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle_equivalence() -> Outcome {
    let etas = ["1/4", "1/2", "5/8", "3/4", "9/10", "1"];
    let mut compared = 0;
    for n in 0..=3u32 {
        for seed in 0..100u64 {
            let r = random_word(n, &mut rng_from_seed(1000 * n as u64 + seed));
            for e in etas {
                let eta = q(e);
                let fast = list_decode(&r, &eta).map_err(|e| e.to_string())?.to_string();
                let slow = oracle_list(&r, &eta).map_err(|e| e.to_string())?.to_string();
                check(fast == slow, || format!("n={n} seed={seed} eta={e}: outputs differ"))?;
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} (word, radius) pairs byte-identical"))
}

fn johnson_tightness() -> Outcome {
    let mut sizes = Vec::new();
    for n in 0..=3u32 {
        let r = CVector::constant(n, QComplex::half_phi());
        let len = list_decode(&r, &q("1/2")).map_err(|e| e.to_string())?.len();
        check(len == 4 << n, || format!("n={n}: {len} != {}", 4 << n))?;
        sizes.push(len.to_string());
    }
    Ok(format!("sizes {}", sizes.join(", ")))
}

fn minimum_distance() -> Outcome {
    let mut kissing = Vec::new();
    for n in 0..=3u32 {
        let s = shortest_vectors(n).map_err(|e| e.to_string())?;
        check(s.min_norm_sq == BigInt::from(1u64 << n), || {
            format!("n={n}: min norm {} != {}", s.min_norm_sq, 1u64 << n)
        })?;
        kissing.push(s.kissing_number());
    }
    check(kissing[0] == 4, || format!("kissing(0) = {}", kissing[0]))?;
    check(kissing[1] == 24, || format!("kissing(1) = {}", kissing[1]))?;
    Ok(format!("min norms 1, 2, 4, 8; kissing numbers {kissing:?}"))
}

fn lower_bound_witnesses() -> Outcome {
    let mut parts = Vec::new();
    for (n, e) in [(2u32, "1/2"), (3, "1/4"), (4, "1/4")] {
        let eps = q(e);
        let inst = lower_bound_instance(n, &eps).map_err(|e| e.to_string())?;
        let k = inst.k;
        let expected = BigInt::from((1u64 << n) - (1u64 << k));
        for entry in inst.witnesses.entries() {
            let w = entry.point.coords();
            check(is_member(w), || format!("n={n}: witness {w} is not a member"))?;
            let d = inst.r.sub(&w.to_cvector()).map_err(|e| e.to_string())?;
            let d2 = d.coords().iter().map(QComplex::norm_sq).sum::<BigRational>();
            check(d2 == BigRational::from_integer(expected.clone()), || {
                format!("n={n}: witness at squared distance {d2}")
            })?;
        }
        let count = BigUint::from(inst.witnesses.len());
        let binom = gaussian_binomial(n, n - k);
        check(count == binom, || format!("n={n}: {count} witnesses, binomial {binom}"))?;
        let bound = lower_eps(&eps, n).map_err(|e| e.to_string())?;
        check(count >= bound.formula, || format!("n={n}: {count} < {}", bound.formula))?;
        if n <= 3 {
            let eta = BigRational::from_integer(1.into()) - &eps;
            let list = list_decode(&inst.r, &eta).map_err(|e| e.to_string())?;
            for entry in inst.witnesses.entries() {
                check(list.contains(entry.point.coords()), || {
                    format!("n={n}: witness {} missing from the decoded list", entry.point)
                })?;
            }
        }
        parts.push(format!("({n},{e}): k={k} witnesses={count} formula={}", bound.formula));
    }
    Ok(parts.join("; "))
}

fn bound_sandwich() -> Outcome {
    let mut total = 0;
    for n in 0..=3u32 {
        let reports = validate_bounds(n, 25, &default_eta_grid(), 77).map_err(|e| e.to_string())?;
        if let Some(bad) = reports.iter().find(|r| !r.pass) {
            return Err(format!("violation: {bad}"));
        }
        let tight = reports
            .iter()
            .find(|r| r.source == "half-phi" && r.eta == q("1/2"))
            .expect("grid contains 1/2");
        check(BigUint::from(tight.measured) == johnson_half(n), || {
            format!("n={n}: half-phi list {} below 4N", tight.measured)
        })?;
        total += reports.len();
    }
    Ok(format!("{total} reports within bounds"))
}

/// Counts of structural checks that failed at one level.
#[derive(Default)]
struct Structural {
    other: Vec<String>,
    rm_round_trip: usize,
    rm_member_peel: usize,
    rm_nonmember_peel: usize,
}

fn structural_level(n: u32) -> Result<Structural, String> {
    let mut out = Structural::default();
    let mut rng = rng_from_seed(600 + n as u64);
    for trial in 0..1000 {
        let w = random_member(n, 2, &mut rng);
        let r = random_word(n, &mut rng);
        let wc = w.coords().to_cvector();
        let mut fail = |what: &str| out.other.push(format!("n={n} trial={trial}: {what}"));

        if n > 0 {
            let tw = automorphism_t(&wc).map_err(|e| e.to_string())?;
            let tr = automorphism_t(&r).map_err(|e| e.to_string())?;
            match tw.to_gvector() {
                Some(g) if is_member(&g) => {}
                _ => fail("T(w) is not a member"),
            }
            if rsd(&tr, &tw).ok() != rsd(&r, &wc).ok() {
                fail("T changes rsd");
            }
            let tt = automorphism_t(&tr).map_err(|e| e.to_string())?;
            if tt != times_i(&r) {
                fail("T^2 != i");
            }
            match w.swap_halves() {
                Ok(s) if is_member(s.coords()) => {}
                _ => fail("swap_halves leaves the lattice"),
            }
            if !half_relation(&r, w.coords()).map_err(|e| e.to_string())?.holds() {
                fail("eta != eta0/2 + eta1");
            }
        }
        match multilinear_interpolate(w.coords()).and_then(|m| multilinear_evaluate(&m.coeffs, &m.residual)) {
            Ok(back) if back == w => {}
            _ => fail("multilinear round trip"),
        }

        match bw_to_rm_layers(w.coords()) {
            Ok(l) => {
                if bw_from_rm_layers(&l.layers, &l.residual).ok().as_ref() != Some(&w) {
                    out.rm_round_trip += 1;
                }
            }
            Err(_) => {
                out.rm_member_peel += 1;
                out.rm_round_trip += 1;
            }
        }
        if n > 0 {
            let nonmember = perturb(&w, trial % n);
            if is_member(&nonmember) {
                out.other
                    .push(format!("n={n} trial={trial}: perturbation stayed in the lattice"));
            } else if bw_to_rm_layers(&nonmember).is_ok() {
                out.rm_nonmember_peel += 1;
            }
        }
    }
    Ok(out)
}

/// `w + phi^d e_0`, never a lattice point for `d < n`.
fn perturb(w: &BWPoint, d: u32) -> GVector {
    let mut c = w.coords().coords().to_vec();
    c[0] = &c[0] + &GaussianInt::phi_pow(d);
    GVector::new(c).expect("same length")
}

/// `phi^3 (c + c')` with `c = x1 x2 x3`, `c' = x4 x5 x6`, summed over `F_2`.
fn layering_counterexample() -> Result<bool, String> {
    let bits: Vec<GaussianInt> = (0..64usize)
        .map(|j| {
            let a = j & 0b000111 == 0b000111;
            let b = j & 0b111000 == 0b111000;
            GaussianInt::new((a ^ b) as i64, 0)
        })
        .collect();
    let w = GVector::new(bits)
        .map_err(|e| e.to_string())?
        .scale(&GaussianInt::phi_pow(3));
    Ok(!is_member(&w) && bw_to_rm_layers(&w).is_ok())
}

fn structural_invariants() -> Outcome {
    let mut rm_issues = Vec::new();
    for n in 0..=6u32 {
        let s = structural_level(n)?;
        if let Some(first) = s.other.first() {
            return Err(format!("{} failures, first: {first}", s.other.len()));
        }
        if s.rm_round_trip + s.rm_member_peel + s.rm_nonmember_peel > 0 {
            rm_issues.push(format!(
                "n={n}: {} of 1000 members fail to peel, {} round trips differ, {} non-members peel",
                s.rm_member_peel, s.rm_round_trip, s.rm_nonmember_peel
            ));
        }
    }
    if layering_counterexample()? {
        rm_issues.push("phi^3(x1x2x3 + x4x5x6) peels into RM layers but is not a member".into());
    }
    if rm_issues.is_empty() {
        Ok("all structural checks hold for n <= 6".into())
    } else {
        Err(format!(
            "other checks hold for n <= 6; RM layering: {}",
            rm_issues.join("; ")
        ))
    }
}

fn runtime_scaling() -> Outcome {
    let eta = q("1/4");
    let decoder = Decoder::new();
    let mut ratios = Vec::new();
    let mut last = Duration::ZERO;
    for n in 4..=10u32 {
        let r = random_word(n, &mut rng_from_seed(4000 + n as u64));
        let start = Instant::now();
        let (_, stats) = decoder.decode_with_stats(&r, &eta).map_err(|e| e.to_string())?;
        last = start.elapsed();
        ratios.push(stats.ops as f64 / 4f64.powi(n as i32));
    }
    let hi = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let lo = ratios.iter().cloned().fold(f64::MAX, f64::min);
    let shown: Vec<String> = ratios.iter().map(|c| format!("{c:.2}")).collect();
    check(hi <= 2.0 * lo, || format!("ops/4^n spread {lo:.2}..{hi:.2}"))?;
    check(last < Duration::from_secs(30), || format!("n=10 took {last:?}"))?;
    Ok(format!(
        "ops/4^n = [{}], C = {hi:.2}, n=10 in {last:.2?}",
        shown.join(", ")
    ))
}

fn parallel_determinism() -> Outcome {
    let mut runs = 0;
    for n in 0..=8u32 {
        for e in ["1/4", "3/4"] {
            let eta = q(e);
            let r = random_word(n, &mut rng_from_seed(8000 + n as u64));
            let outputs: Vec<String> = [1, 2, 8]
                .iter()
                .map(|&w| {
                    Decoder::new()
                        .workers(w)
                        .decode(&r, &eta)
                        .map(|l| l.to_string())
                        .map_err(|e| e.to_string())
                })
                .collect::<Result<_, _>>()?;
            check(outputs.iter().all(|o| o == &outputs[0]), || {
                format!("n={n} eta={e}: outputs differ across worker counts")
            })?;
            runs += 1;
        }
    }
    Ok(format!("{runs} instances identical with 1, 2, 8 workers"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (1, "oracle equivalence", oracle_equivalence),
        (2, "Johnson tightness", johnson_tightness),
        (3, "minimum distance", minimum_distance),
        (4, "lower-bound witnesses", lower_bound_witnesses),
        (5, "bound sandwich", bound_sandwich),
        (6, "structural invariants", structural_invariants),
        (7, "runtime scaling", runtime_scaling),
        (8, "parallel determinism", parallel_determinism),
    ];
    let mut unexpected = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let known = KNOWN_FAILURES.iter().find(|(k, _, _)| *k == id);
        let elapsed = start.elapsed();
        // a known criterion failing for some other reason is still unexpected
        let known = known
            .filter(|(_, marker, _)| outcome.as_ref().err().is_none_or(|m| m.contains(marker)))
            .map(|(_, _, why)| *why);
        match (&outcome, known) {
            (Ok(msg), None) => println!("criterion {id} ({name}): PASS [{elapsed:.1?}] {msg}"),
            (Ok(msg), Some(_)) => {
                unexpected += 1;
                println!("criterion {id} ({name}): PASS, expected FAIL [{elapsed:.1?}] {msg}");
            }
            (Err(msg), Some(why)) => {
                println!("criterion {id} ({name}): FAIL (known: {why}) [{elapsed:.1?}] {msg}")
            }
            (Err(msg), None) => {
                unexpected += 1;
                println!("criterion {id} ({name}): FAIL [{elapsed:.1?}] {msg}");
            }
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
