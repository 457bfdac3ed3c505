//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so every line is printed; exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use cycleclear::analysis::{
    adjusted_lp_contribution, generate_lp_market, generate_scale_free, identify_lp_firms,
    identify_lp_obligations, lp_exit, path_length, sweep, LpMarketParams, ScaleFreeParams,
};
use cycleclear::graph::{balance_vector, Amount, Kind, KindSet, Obligation, ObligationGraph};
use cycleclear::netting::{net_global, net_partitioned, net_residual, NettingSetPartition};
use cycleclear::scenarios;
use cycleclear::setoff::oracle::brute_force_optimum;
use cycleclear::setoff::setoff_clear;
use cycleclear::settlement::{execute_cycle, SettlementCycle};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1_two_ccp() -> Outcome {
    let g = scenarios::two_ccp_square();
    let r = setoff_clear(&g, 0).map_err(|e| e.to_string())?;
    ensure(
        r.discharged_total == 400 && r.residual_total == 0,
        format!("setoff {} / {}", r.discharged_total, r.residual_total),
    )?;
    let p = NettingSetPartition::parse("ccp1=CCP1,ccp2=CCP2").unwrap();
    let n = net_partitioned(&g, &p).map_err(|e| e.to_string())?;
    ensure(
        n.gross_total == 400 && n.required_total == 200,
        format!(
            "netting {} gross / {} member",
            n.gross_total, n.required_total
        ),
    )?;
    Ok("S(0)=0 after 400 discharged; per-CCP netting 400 gross, 200 member-side".into())
}

fn c2_asymmetric() -> Outcome {
    let g = scenarios::asymmetric_square();
    let s0 = setoff_clear(&g, 0).unwrap().residual_total;
    let s10 = setoff_clear(&g, 10).unwrap().residual_total;
    let n0 = net_residual(&g, 0).unwrap();
    ensure(
        (s0, s10, n0) == (20, 0, 10),
        format!("S(0)={s0} S(10)={s10} N(0)={n0}"),
    )?;
    Ok("S(0)=20 S(10)=0 N(0)=10".into())
}

fn c3_transformations() -> Outcome {
    type Edge = (&'static str, &'static str, Kind, Amount);
    let o = Kind::Obligation;
    let cases: [(&str, ObligationGraph, Vec<Edge>); 4] = [
        (
            "assignment",
            scenarios::assignment_triad(100),
            vec![("S", "v2", o, 100)],
        ),
        ("setoff", scenarios::setoff_triad(100), vec![]),
        (
            "issuance",
            scenarios::issuance_triad(100),
            vec![("S", "v2", o, 100), ("v1", "S", o, 100)],
        ),
        (
            "novation",
            scenarios::novation_triad(100),
            vec![("v1", "S", o, 100)],
        ),
    ];
    for (name, g, want) in cases {
        let after = execute_cycle(&g, &SettlementCycle::new(["o1", "o2", "o3"], 100))
            .map_err(|e| e.to_string())?;
        let mut got: Vec<(String, String, Kind, Amount)> = after
            .records()
            .iter()
            .map(|r| {
                (
                    r.debtor.to_string(),
                    r.creditor.to_string(),
                    r.kind,
                    r.amount,
                )
            })
            .collect();
        got.sort();
        let want: Vec<_> = want
            .into_iter()
            .map(|(d, c, k, a)| (d.to_string(), c.to_string(), k, a))
            .collect();
        ensure(got == want, format!("{name}: {got:?}"))?;
        ensure(
            balance_vector(&after, KindSet::OBLIGATIONS)
                == balance_vector(&g, KindSet::OBLIGATIONS),
            format!("{name}: balance moved"),
        )?;
    }
    Ok("four post-states exact, balances preserved".into())
}

fn c4_five_node() -> Outcome {
    let g = scenarios::five_node();
    let r = setoff_clear(&g, 0).unwrap();
    ensure(
        r.discharged_total == 7,
        format!("discharged {}", r.discharged_total),
    )?;
    let n0 = net_global(&g).required_total;
    ensure(
        r.residual_total == 3 && n0 == 3,
        format!("S(0)={} N(0)={n0}", r.residual_total),
    )?;
    let s = sweep(&g, &[0, 1, 2, 3, 4]).unwrap();
    ensure(
        s.setoff_curve == [3, 2, 1, 0, 0] && s.netting_curve == [3, 2, 1, 0, 0],
        format!("{s:?}"),
    )?;
    for delta in 0..=4 {
        let oracle = brute_force_optimum(&g, delta).unwrap();
        let solver = setoff_clear(&g, delta).unwrap();
        ensure(
            oracle.objective == solver.objective,
            format!("δ={delta}: oracle {oracle:?} solver {}", solver.objective),
        )?;
    }
    Ok("7 of 10 discharged, curves 3,2,1,0,0, oracle agrees on δ=0..4".into())
}

fn c5_path_length() -> Outcome {
    let checks = [
        ("ℓ(16000)", path_length(16000).unwrap(), 4.26, 0.01),
        ("ℓ(23895)", path_length(23895).unwrap(), 4.36, 0.01),
        (
            "adj(0.089,16000)",
            adjusted_lp_contribution(0.089, 16000).unwrap(),
            0.379,
            0.005,
        ),
        (
            "adj(0.083,23895)",
            adjusted_lp_contribution(0.083, 23895).unwrap(),
            0.361,
            0.005,
        ),
    ];
    let mut line = Vec::new();
    for (name, got, want, tol) in checks {
        ensure(
            (got - want).abs() <= tol,
            format!("{name} = {got:.4}, want {want} ± {tol}"),
        )?;
        line.push(format!("{name}={got:.4}"));
    }
    Ok(line.join(" "))
}

fn c6_properties() -> Outcome {
    let config = Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    };
    let rng = TestRng::from_seed(RngAlgorithm::ChaCha, &[7; 32]);
    let mut runner = TestRunner::new_with_rng(config, rng);
    runner
        .run(&common::graph_and_delta(), |(g, delta)| {
            common::check_all(&g, delta).map_err(proptest::test_runner::TestCaseError::fail)
        })
        .map_err(|e| e.to_string())?;
    Ok("1000 seeded cases, invariants (a)-(g) hold".into())
}

/// Even-length cycle whose legs alternate between two netting sets.
fn alternating_cycle(rng: &mut ChaCha8Rng) -> ObligationGraph {
    let len = [4, 6, 8][rng.gen_range(0..3)];
    let amount = rng.gen_range(1..=1_000_000);
    let records = (0..len)
        .map(|i| {
            let tag = if i % 2 == 0 { "x" } else { "y" };
            Obligation::new(
                &format!("o{i}"),
                &format!("m{i}"),
                &format!("m{}", (i + 1) % len),
                amount,
            )
            .with_tag(tag)
        })
        .collect();
    ObligationGraph::new(records)
}

fn c7_cross_silo() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let partition = NettingSetPartition::parse("x=X,y=Y").unwrap();
    let cases = 500;
    for case in 0..cases {
        let g = alternating_cycle(&mut rng);
        let gross = g.total(KindSet::OBLIGATIONS);
        let netted = net_partitioned(&g, &partition)
            .map_err(|e| e.to_string())?
            .residual();
        let cleared = setoff_clear(&g, 0).unwrap().residual_total;
        ensure(
            netted == gross && cleared == 0,
            format!("case {case}: netting {netted} of {gross}, setoff {cleared}"),
        )?;
    }
    Ok(format!(
        "{cases} alternating cycles: netting leaves full gross, setoff leaves 0"
    ))
}

fn c8_lp_exit() -> Outcome {
    let seeds = 0..50u64;
    let total = seeds.clone().count();
    let mut wins = 0;
    let mut drops = Vec::new();
    for seed in seeds {
        let params = LpMarketParams::new(500, 2, seed);
        let g = generate_lp_market(&params).map_err(|e| e.to_string())?;
        let firms =
            identify_lp_firms(&g, &identify_lp_obligations(&g, params.modulus).unwrap()).unwrap();
        ensure(
            firms.len() == params.lp_firms,
            format!("seed {seed}: identified {firms:?}"),
        )?;
        let e = lp_exit(&g, &firms, 0).map_err(|e| e.to_string())?;
        drops.push((e.drop_fraction, e.debt_share_removed));
        if e.drop_fraction > e.debt_share_removed {
            wins += 1;
        }
    }
    let mean = |f: fn(&(f64, f64)) -> f64| drops.iter().map(f).sum::<f64>() / drops.len() as f64;
    let summary = format!(
        "{wins}/{total} seeds drop > share (mean drop {:.3}, mean share {:.3})",
        mean(|d| d.0),
        mean(|d| d.1)
    );
    ensure(wins * 10 >= total * 9, summary.clone())?;
    Ok(summary)
}

fn c9_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_cycleclear");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let scenarios_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut stems: Vec<String> = scenarios::bundled()
        .into_iter()
        .map(|(s, _)| s.to_string())
        .collect();
    stems.push("empty".into());
    let commands: &[&[&str]] = &[
        &["validate"],
        &["net"],
        &[
            "net",
            "--partition",
            "ccp1=CCP1,ccp2=CCP2,cash=CASH,tcn=TCN,stable=STABLE",
        ],
        &["setoff", "--delta", "0.50"],
        &["setoff", "--solver", "cycle-canceling", "--format", "csv"],
        &["sweep", "--grid", "0:400:50", "--format", "json"],
        &["sweep", "--grid", "0:400:50", "--format", "csv"],
        &["sweep", "--grid", "0:400:50", "--format", "svg"],
        &["settle", "--max-len", "6"],
        &["lp-report", "--modulus", "100"],
        &["lp-exit", "--modulus", "100"],
        &["stats"],
    ];
    let mut runs = 0;
    let run = |args: Vec<String>, out: &Path| -> Result<(i32, Vec<u8>), String> {
        let status = Command::new(bin)
            .args(&args)
            .arg("--out")
            .arg(out)
            .env_remove("CYCLECLEAR_SEED")
            .output();
        let status = status.map_err(|e| e.to_string())?;
        Ok((
            status.status.code().unwrap_or(-1),
            std::fs::read(out).unwrap_or_default(),
        ))
    };
    for stem in &stems {
        let ledger = scenarios_dir
            .join(format!("{stem}.csv"))
            .display()
            .to_string();
        for (i, cmd) in commands.iter().enumerate() {
            let mut args = vec![cmd[0].to_string(), ledger.clone()];
            args.extend(cmd[1..].iter().map(|s| s.to_string()));
            let a = run(args.clone(), &dir.path().join(format!("{stem}.{i}.a")))?;
            let b = run(args, &dir.path().join(format!("{stem}.{i}.b")))?;
            ensure(a == b, format!("{stem}: {cmd:?} differs between runs"))?;
            runs += 2;
        }
    }
    let gen = [
        "generate",
        "--nodes",
        "300",
        "--m",
        "2",
        "--seed",
        "11",
        "--lp-firms",
        "2",
    ]
    .map(String::from)
    .to_vec();
    let a = run(gen.clone(), &dir.path().join("gen.a"))?;
    let b = run(gen, &dir.path().join("gen.b"))?;
    ensure(
        a == b && a.0 == 0 && !a.1.is_empty(),
        "generate differs between runs",
    )?;
    Ok(format!(
        "{} identical output pairs over {} ledgers",
        runs / 2 + 1,
        stems.len()
    ))
}

/// Peak resident set size of this process, from `/proc`.
fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

fn c10_performance() -> Outcome {
    let g = generate_scale_free(&ScaleFreeParams::new(5_002, 2, 10)).map_err(|e| e.to_string())?;
    ensure(g.len() >= 10_000, format!("only {} edges", g.len()))?;
    let start = Instant::now();
    let r = setoff_clear(&g, 0).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let peak = peak_rss_bytes();
    ensure(
        elapsed < Duration::from_secs(60),
        format!("took {elapsed:?}"),
    )?;
    if let Some(p) = peak {
        ensure(p < 1 << 30, format!("peak RSS {} MiB", p >> 20))?;
    }
    let peak = peak.map_or("n/a".into(), |p| format!("{} MiB", p >> 20));
    Ok(format!(
        "{} edges cleared in {elapsed:.2?}, {} discharged, peak RSS {peak}",
        g.len(),
        r.discharged_total
    ))
}

fn main() {
    // Flags from `cargo test -- <args>` are ignored; the target always runs
    // every criterion.
    let criteria: [Criterion; 10] = [
        ("1 two-CCP cycle", c1_two_ccp, Duration::from_secs(1)),
        ("2 asymmetric square", c2_asymmetric, Duration::from_secs(1)),
        (
            "3 settlement transformations",
            c3_transformations,
            Duration::from_secs(1),
        ),
        ("4 five-node graph", c4_five_node, Duration::from_secs(1)),
        (
            "5 path-length analytics",
            c5_path_length,
            Duration::from_secs(1),
        ),
        ("6 property suite", c6_properties, Duration::from_secs(60)),
        (
            "7 cross-silo netting",
            c7_cross_silo,
            Duration::from_secs(10),
        ),
        ("8 LP-exit asymmetry", c8_lp_exit, Duration::from_secs(60)),
        (
            "9 determinism audit",
            c9_determinism,
            Duration::from_secs(30),
        ),
        (
            "10 desk-scale performance",
            c10_performance,
            Duration::from_secs(60),
        ),
    ];
    let mut failed = BTreeSet::new();
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > budget => Err(format!("{msg}; over budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS  {name:<30} {elapsed:>10.3?}  {msg}"),
            Err(msg) => {
                println!("FAIL  {name:<30} {elapsed:>10.3?}  {msg}");
                failed.insert(name);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("{} acceptance criteria failed", failed.len());
        std::process::exit(1);
    }
}
