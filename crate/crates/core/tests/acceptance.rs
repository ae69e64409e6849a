//! Acceptance suite: runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use cycpat::pattern::oracle::naive_contains;
use cycpat::theorem::theorem_holds;
use cycpat::{
    check_fact_structure, contains, count_class, enumerate_class, pell, AvoidanceMode, ClassQuery,
    Engine, EnumOptions, Pattern, TheoremSuite,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn brute() -> EnumOptions {
    EnumOptions::new(Engine::BruteForce, 1)
}

fn pruned() -> EnumOptions {
    EnumOptions::new(Engine::Pruned, 1)
}

fn count(n: usize, opts: EnumOptions) -> Result<u64, String> {
    count_class(&ClassQuery::pell_pair(n), opts)
        .map(|r| r.count)
        .map_err(|e| e.to_string())
}

fn all_words(k: u8) -> Vec<Vec<u8>> {
    let mut w: Vec<u8> = (1..=k).collect();
    let mut out = Vec::new();
    loop {
        out.push(w.clone());
        let Some(i) = (1..w.len()).rev().find(|&i| w[i - 1] < w[i]) else {
            return out;
        };
        let j = (i..w.len()).rev().find(|&j| w[j] > w[i - 1]).unwrap();
        w.swap(i - 1, j);
        w[i..].reverse();
    }
}

fn patterns_up_to(k: u8) -> Vec<Pattern> {
    (1..=k)
        .flat_map(all_words)
        .map(|w| Pattern::new(w).unwrap())
        .collect()
}

fn base_cases() -> Outcome {
    let start = Instant::now();
    for opts in [brute(), pruned()] {
        let got: Vec<u64> = (2..=4).map(|n| count(n, opts)).collect::<Result<_, _>>()?;
        ensure(got == [1, 2, 5], || format!("{:?}: counts {got:?}", opts.engine))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("|A_2|,|A_3|,|A_4| = 1,2,5 in {elapsed:.2?}"))
}

fn theorem_reproduction() -> Outcome {
    let start = Instant::now();
    for n in 2..=10 {
        let c = count(n, brute())?;
        let p = pell(n - 1).unwrap();
        ensure(c == p, || format!("brute force n={n}: {c} != P_{} = {p}", n - 1))?;
    }
    let brute_time = start.elapsed();
    ensure(brute_time < Duration::from_secs(60), || format!("brute force took {brute_time:?}"))?;

    let start = Instant::now();
    let mut tail = Vec::new();
    for n in 2..=13 {
        let c = count(n, pruned())?;
        let p = pell(n - 1).unwrap();
        ensure(c == p, || format!("pruned n={n}: {c} != P_{} = {p}", n - 1))?;
        if n >= 10 {
            tail.push(c);
        }
    }
    let pruned_time = start.elapsed();
    ensure(pruned_time < Duration::from_secs(600), || format!("pruned took {pruned_time:?}"))?;
    ensure(tail == [985, 2378, 5741, 13860], || format!("n=10..13 counts {tail:?}"))?;
    Ok(format!(
        "count(n) = P_(n-1): brute n<=10 in {brute_time:.2?}, pruned n<=13 in {pruned_time:.2?} (n=10..13: {tail:?})"
    ))
}

fn recurrence() -> Outcome {
    let counts: Vec<u64> = (0..=10)
        .map(|n| if n == 0 { Ok(0) } else { count(n, pruned()) })
        .collect::<Result<_, _>>()?;
    for n in 5..=10 {
        ensure(counts[n] == 2 * counts[n - 1] + counts[n - 2], || {
            format!("n={n}: {} != 2*{} + {}", counts[n], counts[n - 1], counts[n - 2])
        })?;
    }
    let rows = TheoremSuite::default()
        .verify_theorem(10)
        .map_err(|e| e.to_string())?;
    ensure(theorem_holds(&rows), || format!("theorem table failed: {rows:?}"))?;
    Ok("count(n) = 2 count(n-1) + count(n-2) for 5 <= n <= 10".into())
}

fn engine_equivalence() -> Outcome {
    let mut compared = 0usize;
    let mut check = |q: &ClassQuery| -> Result<(), String> {
        let a = enumerate_class(q, brute()).map_err(|e| e.to_string())?;
        let b = enumerate_class(q, pruned()).map_err(|e| e.to_string())?;
        compared += 1;
        ensure(a == b, || format!("engines differ on {q:?}"))
    };
    for n in 1..=8 {
        check(&ClassQuery::pell_pair(n))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let random_pattern = |rng: &mut ChaCha8Rng| {
        let k = rng.gen_range(3..=4u8);
        let mut w: Vec<u8> = (1..=k).collect();
        w.shuffle(rng);
        Pattern::new(w).unwrap()
    };
    let pairs = 60;
    for _ in 0..pairs {
        let sigma = random_pattern(&mut rng);
        let tau = random_pattern(&mut rng);
        for mode in [
            AvoidanceMode::AllCycles,
            AvoidanceMode::StandardCycle,
            AvoidanceMode::OneLineOnly,
        ] {
            for n in 1..=7 {
                check(&ClassQuery::new(n, sigma.clone(), tau.clone(), mode))?;
            }
        }
    }
    Ok(format!(
        "identical member lists on {compared} queries (paper pair n<=8, {pairs} random pairs n<=7)"
    ))
}

fn matcher_oracle() -> Outcome {
    let patterns = patterns_up_to(4);
    let mut checked = 0u64;
    for m in 0..=8u8 {
        for host in all_words(m) {
            let host = if m == 0 { Vec::new() } else { host };
            for p in &patterns {
                checked += 1;
                ensure(contains(&host, p) == naive_contains(&host, p), || {
                    format!("host {host:?} pattern {p}")
                })?;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let pool: Vec<u32> = (1..=100).collect();
    for _ in 0..10_000 {
        let len = rng.gen_range(0..=12);
        let host: Vec<u32> = pool.choose_multiple(&mut rng, len).copied().collect();
        for p in &patterns {
            checked += 1;
            ensure(contains(&host, p) == naive_contains(&host, p), || {
                format!("host {host:?} pattern {p}")
            })?;
        }
    }
    let p132 = Pattern::new(vec![1, 3, 2]).unwrap();
    ensure(contains(&[2, 4, 1, 5, 3], &p132), || "132 not found in 24153".into())?;
    Ok(format!("pruned matcher = subsequence oracle on {checked} (host, pattern) pairs"))
}

fn bijections() -> Outcome {
    let suite = TheoremSuite::default();
    let mut instances = 0;
    for n in 5..=9 {
        for check in suite.verify_lemma_bijections(n).map_err(|e| e.to_string())? {
            let r = &check.report;
            instances += 1;
            ensure(
                r.is_bijection()
                    && r.domain_size == r.codomain_size
                    && r.image_size == r.domain_size,
                || format!("n={n} j={:?}: {r:?}", check.j),
            )?;
        }
    }
    Ok(format!("{instances} map instances are bijections (f_21, g_21, f_22, f_24; 5 <= n <= 9)"))
}

fn emptiness() -> Outcome {
    let suite = TheoremSuite::default();
    for n in 5..=10 {
        let counts = suite.lemma_23_counts(n).map_err(|e| e.to_string())?;
        ensure(counts.values().all(|&c| c == 0), || format!("n={n}: {counts:?}"))?;
    }
    Ok("A_n|2@2|3@j empty for 3 < j < n, 5 <= n <= 10".into())
}

fn structure() -> Outcome {
    let mut members = 0;
    for n in 3..=9 {
        let r = enumerate_class(&ClassQuery::pell_pair(n), pruned()).map_err(|e| e.to_string())?;
        for m in r.members.unwrap() {
            members += 1;
            let f = check_fact_structure(&m).map_err(|e| e.to_string())?;
            ensure(f.holds, || format!("{m}: {f:?}"))?;
        }
    }
    Ok(format!("all {members} members for 3 <= n <= 9 have the block structure"))
}

fn partitions() -> Outcome {
    let suite = TheoremSuite::default();
    for n in 3..=10 {
        let r = suite.verify_partition(n, 2).map_err(|e| e.to_string())?;
        ensure(r.holds, || format!("v=2: {r:?}"))?;
    }
    for n in 5..=10 {
        let r = suite.verify_partition(n, 3).map_err(|e| e.to_string())?;
        ensure(r.holds, || format!("v=3: {r:?}"))?;
    }
    Ok("position-of-2 (3<=n<=10) and position-of-3 (5<=n<=10) partitions sum to parent".into())
}

fn determinism() -> Outcome {
    let queries = [
        ClassQuery::pell_pair(9),
        ClassQuery::pell_pair(11),
        ClassQuery::pell_pair(10).with_anchor(2, 2),
    ];
    for q in &queries {
        for engine in [Engine::Pruned, Engine::BruteForce] {
            if engine == Engine::BruteForce && q.n > 9 {
                continue;
            }
            let render = |workers| -> Result<(Vec<u8>, u64), String> {
                let opts = EnumOptions::new(engine, workers);
                let members = enumerate_class(q, opts).map_err(|e| e.to_string())?;
                let count = count_class(q, opts).map_err(|e| e.to_string())?.count;
                Ok((serde_json::to_vec(&members).unwrap(), count))
            };
            let reference = render(1)?;
            for workers in [2, 8] {
                ensure(render(workers)? == reference, || {
                    format!("{engine:?} with {workers} workers differs on n={}", q.n)
                })?;
            }
        }
    }
    Ok("member lists and counts byte-identical for 1, 2 and 8 workers".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("base cases", base_cases),
        ("theorem reproduction", theorem_reproduction),
        ("recurrence", recurrence),
        ("engine equivalence", engine_equivalence),
        ("matcher oracle", matcher_oracle),
        ("bijections", bijections),
        ("emptiness", emptiness),
        ("structure", structure),
        ("partition identities", partitions),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
