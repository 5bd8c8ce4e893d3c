//! One line per acceptance criterion, with the wall-time limits enforced.

use bsp::suite::{run_criterion, time_limit, SuiteConfig, CRITERIA};

fn main() {
    let mut ok = acceptance();
    ok &= other_seeds_pass();
    ok &= sequential_matches_parallel();
    if !ok {
        std::process::exit(1);
    }
}

fn acceptance() -> bool {
    let cfg = SuiteConfig::default();
    let mut failures = Vec::new();
    for &(id, _) in &CRITERIA {
        let r = run_criterion(id, &cfg);
        let limit = time_limit(id);
        let in_time = limit.is_none_or(|l| r.elapsed < l);
        let ok = r.passed && in_time;
        let limit = limit.map_or(String::new(), |l| format!(", limit {} s", l.as_secs()));
        println!(
            "criterion {:>2}: {} ({:.3} s{limit}) {}: {}",
            id,
            if ok { "PASS" } else { "FAIL" },
            r.elapsed.as_secs_f64(),
            r.title,
            r.detail
        );
        if !ok {
            failures.push(id);
        }
    }
    if !failures.is_empty() {
        println!("failed criteria: {failures:?}");
    }
    failures.is_empty()
}

fn other_seeds_pass() -> bool {
    let mut ok = true;
    for seed in [2, 77, 1 << 40] {
        let cfg = SuiteConfig { seed, trials: 40, ..SuiteConfig::default() };
        for id in [1, 2, 3, 4, 8, 9, 10] {
            let r = run_criterion(id, &cfg);
            if !r.passed {
                println!("seed {seed}, criterion {id}: FAIL {}", r.detail);
                ok = false;
            }
        }
    }
    println!("other seeds: {}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn sequential_matches_parallel() -> bool {
    let cfg = SuiteConfig { trials: 30, ..SuiteConfig::default() };
    let par: Vec<String> = [1, 2, 3].iter().map(|&id| run_criterion(id, &cfg).detail).collect();
    std::env::set_var("BSP_NO_PARALLEL", "1");
    let seq: Vec<String> = [1, 2, 3].iter().map(|&id| run_criterion(id, &cfg).detail).collect();
    std::env::remove_var("BSP_NO_PARALLEL");
    println!("sequential run matches parallel run: {}", if par == seq { "PASS" } else { "FAIL" });
    par == seq
}
