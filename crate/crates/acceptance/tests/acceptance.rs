//! One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.
//! `GRADUA_SEED` overrides the default seed.

use gradua_acceptance::{run_one, CRITERIA, DEFAULT_SEED};

fn main() {
    let seed = std::env::var("GRADUA_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED);
    println!("acceptance suite, seed {seed}");
    let mut failed = 0;
    for &(id, _, _) in CRITERIA.iter() {
        let outcome = run_one(id, seed).expect("listed criterion");
        println!("{}  [{:.1}s]", outcome.line(), outcome.seconds);
        if !outcome.pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
