//! Acceptance suite: one test per release criterion, each printing a
//! `[PASS]`/`[FAIL]` line (visible with `--nocapture`) before asserting.
//!
//! Criteria needing measurement series reuse the exact seeding scheme of the
//! matrix runner: stream = (master_seed, scenario row, algorithm id,
//! measurement index).

use std::time::Instant;

use pqshake::runconfig::RunnerConfig;
use pqshake::scenario::{ScenarioRow, DELAY_SET, LOSS_SET, RATE_SET};
use pqshake_core::fit::{fit_affine, fit_hyperbola};
use pqshake_core::handshake::{build_transcript, FlightProfile, Transcript, TranscriptError};
use pqshake_core::kem::{Catalog, CostModel, OpCosts};
use pqshake_core::link::LinkProfile;
use pqshake_core::rng::{RunRng, StreamKey};
use pqshake_core::sim::{simulate_handshake, HandshakeFailure, SimConfig};
use pqshake_core::stats;

const MASTER_SEED: u64 = 42;
const RUNS: usize = 200;

fn report(criterion: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "[{}] criterion {criterion:02} {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn baseline_row() -> ScenarioRow {
    ScenarioRow::baseline("baseline")
}

fn profiles(row: &ScenarioRow) -> (LinkProfile, LinkProfile) {
    row.link_profiles(0.25, 1000)
}

fn transcript(id: &str, costs: &CostModel) -> Transcript {
    let catalog = Catalog::shipped();
    let kem = catalog.resolve(id).unwrap();
    build_transcript(&kem, costs, &FlightProfile::default()).unwrap()
}

fn median(mut xs: Vec<f64>) -> f64 {
    assert!(!xs.is_empty(), "median of empty series");
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len();
    if n % 2 == 1 {
        xs[(n - 1) / 2]
    } else {
        (xs[(n - 2) / 2] + xs[n / 2]) / 2.0
    }
}

/// Runs one measurement cell; returns successful durations and failures.
fn series(
    t: &Transcript,
    sim: &SimConfig,
    row_index: u64,
    to_server: &LinkProfile,
    to_client: &LinkProfile,
    runs: usize,
) -> (Vec<f64>, Vec<HandshakeFailure>) {
    let mut ok = Vec::new();
    let mut failures = Vec::new();
    for m in 0..runs {
        let mut rng = RunRng::new(MASTER_SEED, StreamKey::new(row_index, &t.algorithm_id, m as u64));
        match simulate_handshake(t, sim, to_server, to_client, &mut rng) {
            Ok(d) => ok.push(d),
            Err(e) => failures.push(e),
        }
    }
    (ok, failures)
}

fn cell_median(
    t: &Transcript,
    sim: &SimConfig,
    row_index: u64,
    to_server: &LinkProfile,
    to_client: &LinkProfile,
) -> f64 {
    let (ok, failures) = series(t, sim, row_index, to_server, to_client, RUNS);
    assert!(
        failures.is_empty(),
        "{}: unexpected failures {failures:?}",
        t.algorithm_id
    );
    median(ok)
}

#[test]
fn acceptance_01_baseline_magnitude() {
    let start = Instant::now();
    let costs = CostModel::parse("kyber512 0.9 0.85 0.85\n", "calibration").unwrap();
    let t = transcript("kyber512", &costs);
    let (to_server, to_client) = profiles(&baseline_row());
    let m = cell_median(&t, &SimConfig::default(), 0, &to_server, &to_client);
    let elapsed = start.elapsed().as_secs_f64();
    let pass = (13.0..=13.8).contains(&m) && elapsed < 5.0;
    report(
        1,
        "baseline magnitude",
        pass,
        &format!("kyber512 median {m:.3} ms (want 13.0..13.8), runtime {elapsed:.2} s"),
    );
    assert!(pass, "median {m} ms, runtime {elapsed} s");
}

#[test]
fn acceptance_02_affine_latency_law() {
    let start = Instant::now();
    let algos = ["kyber512", "lightsaber", "ntru_hps2048509", "prime256v1"];
    let costs = CostModel::zeros();
    let sim = SimConfig::default();
    let mut slopes = Vec::new();
    let mut all_ok = true;
    let mut details = Vec::new();
    for id in algos {
        let t = transcript(id, &costs);
        let mut points = Vec::new();
        for (row, &d) in DELAY_SET.iter().enumerate() {
            let mut scenario = ScenarioRow::baseline("d");
            scenario.srv.delay_ms = d;
            scenario.cli.delay_ms = d;
            let (to_server, to_client) = profiles(&scenario);
            points.push((d, cell_median(&t, &sim, row as u64, &to_server, &to_client)));
        }
        let fit = fit_affine(&points).unwrap();
        let ok = (fit.slope - 4.0).abs() <= 0.1 && fit.r_squared > 0.999;
        all_ok &= ok;
        details.push(format!("{id} slope {:.4} R2 {:.6}", fit.slope, fit.r_squared));
        slopes.push(fit.slope);
    }
    let spread = slopes.iter().cloned().fold(f64::MIN, f64::max)
        / slopes.iter().cloned().fold(f64::MAX, f64::min)
        - 1.0;
    let agree = spread.abs() <= 0.02;
    let elapsed = start.elapsed().as_secs_f64();
    let pass = all_ok && agree && elapsed < 120.0;
    report(
        2,
        "affine latency law",
        pass,
        &format!("{}; slope spread {:.3}%, runtime {elapsed:.1} s", details.join("; "), spread * 100.0),
    );
    assert!(pass, "{details:?}, spread {spread}");
}

#[test]
fn acceptance_03_rate_hyperbola() {
    let start = Instant::now();
    let costs = CostModel::zeros();
    let sim = SimConfig::default();
    let mut m_eff = std::collections::BTreeMap::new();
    let mut all_r2 = true;
    let mut details = Vec::new();
    for id in ["frodo640shake", "hqc128", "kyber512", "prime256v1"] {
        let t = transcript(id, &costs);
        let mut points = Vec::new();
        for (row, &x) in RATE_SET.iter().enumerate() {
            let mut scenario = ScenarioRow::baseline("r");
            scenario.srv.rate_mbps = x; // client-outgoing rate
            let (to_server, to_client) = profiles(&scenario);
            points.push((x, cell_median(&t, &sim, row as u64, &to_server, &to_client)));
        }
        let fit = fit_hyperbola(&points).unwrap();
        all_r2 &= fit.r_squared > 0.99;
        details.push(format!("{id} m_eff {:.0} R2 {:.6}", fit.slope, fit.r_squared));
        m_eff.insert(id, fit.slope);
    }
    let ordering = m_eff["frodo640shake"] > 3.0 * m_eff["hqc128"]
        && m_eff["hqc128"] > m_eff["kyber512"]
        && m_eff["kyber512"] > m_eff["prime256v1"];
    let elapsed = start.elapsed().as_secs_f64();
    let pass = all_r2 && ordering && elapsed < 120.0;
    report(
        3,
        "rate hyperbola",
        pass,
        &format!("{}; ordering {ordering}, runtime {elapsed:.1} s", details.join("; ")),
    );
    assert!(pass, "{details:?}");
}

#[test]
fn acceptance_04_low_rate_divergence_ratio() {
    let start = Instant::now();
    let costs = CostModel::zeros();
    let sim = SimConfig::default();
    let mut scenario = ScenarioRow::baseline("r");
    scenario.srv.rate_mbps = 0.1;
    let (to_server, to_client) = profiles(&scenario);
    let frodo = cell_median(&transcript("frodo640shake", &costs), &sim, 0, &to_server, &to_client);
    let prime = cell_median(&transcript("prime256v1", &costs), &sim, 0, &to_server, &to_client);
    let ratio = frodo / prime;
    let elapsed = start.elapsed().as_secs_f64();
    let pass = ratio >= 8.0 && elapsed < 60.0;
    report(
        4,
        "low-rate divergence ratio",
        pass,
        &format!("frodo {frodo:.1} ms / prime {prime:.1} ms = {ratio:.1} (want >= 8), runtime {elapsed:.1} s"),
    );
    assert!(pass, "ratio {ratio}");
}

fn loss_medians(id: &str, loss_values: &[f64]) -> Vec<f64> {
    let costs = CostModel::zeros();
    let sim = SimConfig::default();
    let t = transcript(id, &costs);
    loss_values
        .iter()
        .map(|&p| {
            let row_index = LOSS_SET.iter().position(|&v| v == p).unwrap() as u64;
            let mut scenario = ScenarioRow::baseline("pl");
            scenario.srv.pkt_loss_pct = p;
            let (to_server, to_client) = profiles(&scenario);
            let (ok, _failures) = series(&t, &sim, row_index, &to_server, &to_client, RUNS);
            median(ok)
        })
        .collect()
}

#[test]
fn acceptance_05_loss_threshold() {
    let start = Instant::now();
    // (a) every level-1 algorithm stays within 5% of its zero-loss median
    // up to 1% loss.
    let low = [0.0, 0.25, 0.5, 1.0];
    let mut stable = true;
    let mut stable_detail = String::new();
    for id in [
        "kyber512",
        "ntru_hps2048509",
        "lightsaber",
        "bikel1",
        "frodo640shake",
        "hqc128",
        "sikep503",
        "prime256v1",
    ] {
        let ms = loss_medians(id, &low);
        for (i, &m) in ms.iter().enumerate().skip(1) {
            if (m - ms[0]).abs() > 0.05 * ms[0] {
                stable = false;
                stable_detail = format!("{id} at {}%: {m:.2} vs {:.2}", low[i], ms[0]);
            }
        }
    }

    // (b) departure points: frodo640shake above 1.5x by 3% loss, kyber512
    // not before 8%.
    let frodo = loss_medians("frodo640shake", LOSS_SET);
    let frodo_departure = LOSS_SET
        .iter()
        .zip(&frodo)
        .find(|(_, &m)| m > 1.5 * frodo[0])
        .map(|(&p, _)| p);
    let frodo_ok = frodo_departure.is_some_and(|p| p <= 3.0);

    let kyber_low: Vec<f64> = LOSS_SET.iter().copied().filter(|&p| p < 8.0).collect();
    let kyber = loss_medians("kyber512", &kyber_low);
    let kyber_ok = kyber.iter().all(|&m| m <= 1.5 * kyber[0]);

    let elapsed = start.elapsed().as_secs_f64();
    let pass = stable && frodo_ok && kyber_ok && elapsed < 300.0;
    report(
        5,
        "loss threshold",
        pass,
        &format!(
            "low-loss stability {stable}{}; frodo departure at {:?}% (want <= 3), kyber stable below 8%: {kyber_ok}; runtime {elapsed:.1} s",
            if stable { String::new() } else { format!(" ({stable_detail})") },
            frodo_departure
        ),
    );
    assert!(
        pass,
        "stable={stable} frodo_departure={frodo_departure:?} kyber_ok={kyber_ok}"
    );
}

#[test]
fn acceptance_06_corrupt_approximates_loss() {
    let start = Instant::now();
    let costs = CostModel::zeros();
    let sim = SimConfig::default();
    let t = transcript("kyber512", &costs);
    let mut worst: f64 = 0.0;
    for (row, &p) in LOSS_SET.iter().enumerate() {
        let mut lossy = ScenarioRow::baseline("pl");
        lossy.srv.pkt_loss_pct = p;
        let mut corrupting = ScenarioRow::baseline("c");
        corrupting.srv.corrupt_pct = p;
        let (ls, lc) = profiles(&lossy);
        let (cs, cc) = profiles(&corrupting);
        let (lok, _) = series(&t, &sim, row as u64, &ls, &lc, RUNS);
        let (cok, _) = series(&t, &sim, row as u64, &cs, &cc, RUNS);
        let (ml, mc) = (median(lok), median(cok));
        let rel = (ml - mc).abs() / ml.max(mc);
        worst = worst.max(rel);
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst <= 0.10 && elapsed < 300.0;
    report(
        6,
        "corrupt approximates loss",
        pass,
        &format!("worst pointwise median gap {:.2}% (want <= 10%), runtime {elapsed:.1} s", worst * 100.0),
    );
    assert!(pass, "worst gap {worst}");
}

#[test]
fn acceptance_07_initcwnd_effect() {
    let start = Instant::now();
    let costs = CostModel::zeros();
    let mut scenario = ScenarioRow::baseline("d20");
    scenario.srv.delay_ms = 20.0;
    scenario.cli.delay_ms = 20.0;
    let (to_server, to_client) = profiles(&scenario);
    let run = |id: &str, initcwnd: usize| {
        let mut sim = SimConfig::default();
        sim.tcp.initcwnd_segments = initcwnd;
        cell_median(&transcript(id, &costs), &sim, 0, &to_server, &to_client)
    };
    let frodo10 = run("frodo640shake", 10);
    let frodo40 = run("frodo640shake", 40);
    let kyber10 = run("kyber512", 10);
    let kyber40 = run("kyber512", 40);
    let frodo_ok = frodo40 < frodo10;
    let kyber_ok = (kyber40 - kyber10).abs() < 0.02 * kyber10;
    let elapsed = start.elapsed().as_secs_f64();
    let pass = frodo_ok && kyber_ok && elapsed < 60.0;
    report(
        7,
        "initcwnd effect",
        pass,
        &format!(
            "frodo 10->40: {frodo10:.3} -> {frodo40:.3} ms (want strict drop: {frodo_ok}); kyber 10->40: {kyber10:.3} -> {kyber40:.3} ms; runtime {elapsed:.1} s"
        ),
    );
    assert!(pass, "frodo {frodo10} -> {frodo40}, kyber {kyber10} -> {kyber40}");
}

#[test]
fn acceptance_08_key_share_limit() {
    let catalog = Catalog::shipped();
    let kem = catalog.lookup("classic_mceliece_l1").unwrap();
    let result = build_transcript(kem, &CostModel::zeros(), &FlightProfile::default());
    let pass = matches!(
        result,
        Err(TranscriptError::KeyShareTooLarge { pk_bytes: 261120, .. })
    );
    report(
        8,
        "key-share limit",
        pass,
        &format!("classic_mceliece_l1 transcript -> {result:?}"),
    );
    assert!(pass);
}

#[test]
fn acceptance_09_timeout_reproduction() {
    let start = Instant::now();
    // Both directions at 0.1 Mbps under the default 60 s deadline.
    let mut scenario = ScenarioRow::baseline("r_both_0.1");
    scenario.srv.rate_mbps = 0.1;
    scenario.cli.rate_mbps = 0.1;
    let (to_server, to_client) = profiles(&scenario);
    let t = transcript("frodo640shake", &CostModel::zeros());
    let sim = SimConfig::default();
    assert_eq!(sim.deadline_us, 60_000_000);
    let (ok, failures) = series(&t, &sim, 0, &to_server, &to_client, 20);
    let timeouts = failures
        .iter()
        .filter(|f| matches!(f, HandshakeFailure::HandshakeTimeout))
        .count();
    let pass = ok.is_empty() && timeouts == 20 && start.elapsed().as_secs_f64() < 60.0;
    let detail = if ok.is_empty() {
        format!("{timeouts}/20 timeout records")
    } else {
        format!(
            "completed in median {:.1} ms instead of timing out ({timeouts}/20 timeouts)",
            median(ok.clone())
        )
    };
    report(9, "timeout reproduction", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn acceptance_10_statistics_oracle() {
    let start = Instant::now();
    // Independent brute-force oracle, duplicated here on purpose.
    fn o_mean(xs: &[f64]) -> f64 {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
    fn o_std(xs: &[f64]) -> f64 {
        let m = o_mean(xs);
        (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64).sqrt()
    }
    fn o_sorted(xs: &[f64]) -> Vec<f64> {
        let mut v = xs.to_vec();
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                j -= 1;
            }
        }
        v
    }
    fn o_median(xs: &[f64]) -> f64 {
        let v = o_sorted(xs);
        let n = v.len();
        if n % 2 == 1 {
            v[(n - 1) / 2]
        } else {
            (v[(n - 2) / 2] + v[n / 2]) / 2.0
        }
    }
    fn o_quantile(xs: &[f64], q: f64) -> f64 {
        let v = o_sorted(xs);
        let n = v.len();
        let h = (n - 1) as f64 * q;
        let lo = h.floor() as usize;
        let hi = (lo + 1).min(n - 1);
        v[lo] + (h - lo as f64) * (v[hi] - v[lo])
    }

    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-30);
    let mut rng = RunRng::new(77, StreamKey::new(0, "stats-oracle", 0));
    let mut ok = true;
    for _ in 0..1000 {
        let n = 1 + (rng.uniform() * 500.0) as usize;
        let xs: Vec<f64> = (0..n).map(|_| rng.normal(40.0, 25.0)).collect();
        ok &= close(stats::mean(&xs).unwrap(), o_mean(&xs));
        ok &= close(stats::std_dev(&xs).unwrap(), o_std(&xs));
        ok &= close(stats::median(&xs).unwrap(), o_median(&xs));
        ok &= close(stats::quantile(&xs, 0.75).unwrap(), o_quantile(&xs, 0.75));
        ok &= close(stats::quantile(&xs, 0.95).unwrap(), o_quantile(&xs, 0.95));
    }
    let even = stats::median(&[1.0, 2.0, 3.0, 4.0]).unwrap();
    ok &= even == 2.5;
    let elapsed = start.elapsed().as_secs_f64();
    let pass = ok && elapsed < 10.0;
    report(
        10,
        "statistics oracle",
        pass,
        &format!("1000 series vs brute force at 1e-9 relative; even median {even}; runtime {elapsed:.1} s"),
    );
    assert!(pass);
}

#[test]
fn acceptance_11_determinism_and_pool_invariance() {
    use pqshake::algorithms::parse_algorithms;
    use pqshake::analyze::{analyze_tree, sorted_files};
    use pqshake::runner::run_matrix;
    use pqshake::scenario::{emit_scenario, parse_scenario, presets};

    let start = Instant::now();
    let catalog = Catalog::shipped();
    let delay_rows = {
        let all = presets();
        let (_, rows) = all
            .iter()
            .find(|(n, _)| *n == "scenario_delay.csv")
            .unwrap()
            .clone();
        // Round-trip through the file format, as the CLI would.
        parse_scenario(&emit_scenario(&rows, false), false).unwrap()
    };
    let algos = parse_algorithms(
        "level1/candidates/pq-only,kyber512\nlevel1/candidates/hybrid,p256_kyber512\n",
        &catalog,
    )
    .unwrap();

    let mut trees: Vec<Vec<(String, Vec<u8>)>> = Vec::new();
    for pool in [1usize, 7] {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunnerConfig {
            pool_size: pool,
            master_seed: MASTER_SEED,
            ..RunnerConfig::default()
        };
        run_matrix(
            "scenario_delay",
            &delay_rows,
            &algos,
            &cfg,
            &catalog,
            &CostModel::zeros(),
            dir.path(),
        )
        .unwrap();
        analyze_tree(&dir.path().join("results"), &dir.path().join("analyzed")).unwrap();
        let mut listing = Vec::new();
        for root in ["results", "analyzed"] {
            let base = dir.path().join(root);
            for f in sorted_files(&base).unwrap() {
                listing.push((
                    format!("{root}/{}", f.strip_prefix(&base).unwrap().display()),
                    std::fs::read(&f).unwrap(),
                ));
            }
        }
        trees.push(listing);
    }
    let identical = trees[0] == trees[1];
    let elapsed = start.elapsed().as_secs_f64();
    let pass = identical;
    report(
        11,
        "determinism and pool invariance",
        pass,
        &format!(
            "{} files, byte-identical across pool sizes 1 and 7: {identical}; runtime {elapsed:.1} s",
            trees[0].len()
        ),
    );
    assert!(pass);
}

#[test]
fn acceptance_12_hybrid_bound() {
    let start = Instant::now();
    let catalog = Catalog::shipped();
    // Explicit cost inputs: every component 0.1 ms per op; the classical
    // partners stay under 1 ms total.
    let mut costs = CostModel::parse("# acceptance\n", "acceptance").unwrap();
    for spec in catalog.entries() {
        costs.set(
            &spec.id,
            OpCosts {
                keygen_ms: 0.1,
                encaps_ms: 0.1,
                decaps_ms: 0.1,
            },
        );
    }
    let (to_server, to_client) = profiles(&baseline_row());
    let sim = SimConfig::default();
    let mut checked = 0;
    let mut pass = true;
    let mut detail = String::new();
    for spec in catalog.entries() {
        if spec.family == pqshake_core::kem::Family::Classical
            || spec.pk_bytes > pqshake_core::handshake::KEY_SHARE_LIMIT
        {
            continue;
        }
        let hybrid = catalog.make_hybrid(&spec.id).unwrap();
        let t_pq = build_transcript(spec, &costs, &FlightProfile::default()).unwrap();
        let t_hy = build_transcript(&hybrid, &costs, &FlightProfile::default()).unwrap();
        let (pq_ok, _) = series(&t_pq, &sim, 0, &to_server, &to_client, 20);
        let (hy_ok, _) = series(&t_hy, &sim, 0, &to_server, &to_client, 20);
        let (mp, mh) = (median(pq_ok), median(hy_ok));
        let gap = mh - mp;
        if !(-1e-9..1.0).contains(&gap) {
            pass = false;
            detail = format!("{}: pq {mp:.3} ms, hybrid {mh:.3} ms, gap {gap:.3} ms", spec.id);
        }
        checked += 1;
    }
    let elapsed = start.elapsed().as_secs_f64();
    pass &= elapsed < 180.0;
    report(
        12,
        "hybrid bound",
        pass,
        &format!(
            "{checked} PQC entries, hybrid >= pq-only with gap < 1 ms at baseline{}; runtime {elapsed:.1} s",
            if detail.is_empty() { String::new() } else { format!(" (violation: {detail})") }
        ),
    );
    assert!(pass, "{detail}");
}
