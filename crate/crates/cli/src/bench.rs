use std::time::{Duration, Instant};

use clap::Args;

use bwlist_core::sample::{random_word, rng_from_seed};
use bwlist_core::{BigRational, BigUint, Decoder, Error};

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 4)]
    n_min: u32,
    #[arg(long, default_value_t = 10)]
    n_max: u32,
    #[arg(long, default_value = "1/4", value_parser = super::rational)]
    eta: BigRational,
    #[arg(long, default_value_t = 3)]
    reps: u32,
    /// Comma-separated worker counts; the first one is the reference output
    #[arg(long, value_delimiter = ',', default_value = "1,4")]
    workers: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// `num / den` with two decimals, by integer division.
fn ratio(num: u64, den: &BigUint) -> String {
    let hundredths = BigUint::from(num) * 100u32 / den;
    let whole = &hundredths / 100u32;
    let frac = &hundredths % 100u32;
    format!("{whole}.{frac:0>2}")
}

pub fn run(args: &BenchArgs) -> Result<(), Error> {
    if args.workers.is_empty() || args.reps == 0 {
        return Err(Error::Parse("need at least one worker count and one repetition".into()));
    }
    println!("# eta = {}, seed = {}", args.eta, args.seed);
    println!("n\tworkers\tlane\tlist\tops\tops/4^n\tbest_ms\tidentical");
    for n in args.n_min..=args.n_max {
        let r = random_word(n, &mut rng_from_seed(args.seed.wrapping_add(n as u64)));
        let four_n = BigUint::from(4u32).pow(n);
        let mut reference: Option<String> = None;
        for &w in &args.workers {
            let decoder = Decoder::new().workers(w);
            let mut best = Duration::MAX;
            let mut last = None;
            for _ in 0..args.reps {
                let start = Instant::now();
                let out = decoder.decode_with_stats(&r, &args.eta)?;
                best = best.min(start.elapsed());
                last = Some(out);
            }
            let (list, stats) = last.expect("at least one repetition");
            let text = list.to_string();
            let identical = reference.get_or_insert_with(|| text.clone()) == &text;
            println!(
                "{n}\t{w}\t{}\t{}\t{}\t{}\t{}\t{identical}",
                stats.lane.name(),
                list.len(),
                stats.ops,
                ratio(stats.ops, &four_n),
                best.as_millis()
            );
        }
    }
    Ok(())
}
