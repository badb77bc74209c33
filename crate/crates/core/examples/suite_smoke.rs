//! Quick full-registry smoke run with reduced trial counts.
//!
//! Usage: `cargo run --example suite_smoke [trials] [check-id]`

use perspec_core::report::CheckStatus;
use perspec_core::suite::{run_check, SuiteConfig, REGISTRY};

fn main() {
    let mut args = std::env::args().skip(1);
    let trials: u64 = args
        .next()
        .and_then(|s| s.parse().ok())
        .unwrap_or(30);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0x5EED);
    let only: Option<String> = args.next();
    let cfg = SuiteConfig {
        trials,
        seed,
        ..SuiteConfig::default()
    };
    let mut failures = 0;
    for d in REGISTRY {
        if let Some(only) = &only {
            if d.id != only.as_str() {
                continue;
            }
        }
        let t0 = std::time::Instant::now();
        match run_check(d.id, &cfg) {
            Ok(o) => {
                let status = match o.status {
                    CheckStatus::Pass => "pass",
                    CheckStatus::Fail => "FAIL",
                    CheckStatus::Skipped => "skip",
                };
                if o.status == CheckStatus::Fail {
                    failures += 1;
                }
                println!(
                    "{:14} {:4} trials={:5} worst={:+.3e} tol={:.1e} ({:.2?}){}",
                    d.id,
                    status,
                    o.trials,
                    o.max_rel_violation,
                    o.tolerance_used,
                    t0.elapsed(),
                    o.skipped_reason
                        .map(|r| format!("  [{r}]"))
                        .unwrap_or_default()
                );
            }
            Err(e) => {
                failures += 1;
                println!("{:14} ERROR: {e} ({:.2?})", d.id, t0.elapsed());
            }
        }
    }
    std::process::exit(if failures > 0 { 1 } else { 0 });
}
