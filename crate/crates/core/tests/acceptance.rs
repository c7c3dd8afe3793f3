//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.
//!
//! Tree and MLP runs in the five-predictor MA(1) experiment are reported but
//! not judged; they use a reduced trial count unless `LWO_ACCEPT_FULL=1`.
//! `LWO_ACCEPT_ONLY` takes a comma-separated list of criterion numbers.

use std::process::ExitCode;
use std::time::Instant;

use lwo_core::coeffs::{beta_mixing, rho_lp, verify_inequalities, AugmentedPmf};
use lwo_core::harness::{run_trials, summarize, ConfigLayer, Method, Summary};
use lwo_core::predictors::{estimate_oos_stability, fit_observations, StabilitySource};
use lwo_core::processes::{gen_binary_ma, gen_iid_linear, gen_ma1, MarkovChain};
use lwo_core::rng::rng_from_seed;
use lwo_core::score::quantile_rank;
use lwo_core::{jackknife, lift, lwo, quantile, score, training_view, ExtendedReal, PredictorSpec, ScoreKind};
use rand::seq::SliceRandom;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn experiment(layer: ConfigLayer) -> Summary {
    let cfg = layer.resolve().expect("valid config");
    summarize(&run_trials(&cfg).expect("trials run")).expect("non-empty")
}

fn coverage(s: &Summary, m: Method, p: &str) -> f64 {
    s.get(m, p).unwrap_or_else(|| panic!("missing {m} {p}")).coverage_mean
}

fn radius(s: &Summary, m: Method, p: &str) -> f64 {
    s.get(m, p).and_then(|r| r.mean_finite_radius).unwrap_or(f64::INFINITY)
}

fn ma1_layer(predictors: &[&str], trials: usize) -> ConfigLayer {
    ConfigLayer {
        process: Some("ma1".into()),
        dim: Some(50),
        n: Some(200),
        tau: Some(5),
        alpha: Some(0.1),
        trials: Some(trials),
        predictors: Some(predictors.iter().map(|s| s.to_string()).collect()),
        score: Some("l2".into()),
        seed: Some(20_240_601),
        ..Default::default()
    }
}

fn criterion_1() -> Outcome {
    let s = experiment(ma1_layer(&["knn:2"], 500));
    let (split, jk, lw) = (coverage(&s, Method::Split, "knn:2"), coverage(&s, Method::Jackknife, "knn:2"), coverage(&s, Method::Lwo, "knn:2"));
    let (r_split, r_lwo) = (radius(&s, Method::Split, "knn:2"), radius(&s, Method::Lwo, "knn:2"));
    let pass = (0.87..=0.93).contains(&split) && (0.87..=0.93).contains(&lw) && jk <= 0.85 && r_lwo < r_split;
    Outcome {
        pass,
        detail: format!(
            "2-NN, 500 trials: split {split:.3}, lwo {lw:.3} (both in [0.87, 0.93]), jackknife {jk:.3} (<= 0.85), radius lwo {r_lwo:.3} < split {r_split:.3}"
        ),
    }
}

fn criterion_2() -> Outcome {
    let judged = ["ridge:1", "knn:10", "kernel:0.5"];
    let s = experiment(ma1_layer(&judged, 500));
    let mut pass = true;
    let mut parts = Vec::new();
    for p in judged {
        let (lw, jk) = (coverage(&s, Method::Lwo, p), coverage(&s, Method::Jackknife, p));
        pass &= (lw - 0.90).abs() <= 0.04 && jk <= 0.85;
        parts.push(format!("{p} lwo {lw:.3} jk {jk:.3}"));
    }
    let full = std::env::var("LWO_ACCEPT_FULL").is_ok_and(|v| v == "1");
    for (p, reduced) in [("tree:5:2", 40), ("mlp:20", 4)] {
        let trials = if full { 500 } else { reduced };
        let r = experiment(ma1_layer(&[p], trials));
        println!(
            "  report  {p} ({trials} trials): split {:.3}, jackknife {:.3}, lwo {:.3}",
            coverage(&r, Method::Split, p),
            coverage(&r, Method::Jackknife, p),
            coverage(&r, Method::Lwo, p)
        );
    }
    Outcome { pass, detail: format!("500 trials: {} (lwo within 0.90 +/- 0.04, jk <= 0.85)", parts.join("; ")) }
}

fn criterion_3() -> Outcome {
    let bases = ["ridge:1", "knn:10", "kernel:0.5", "tree:5:2", "mlp:20"];
    let predictors: Vec<String> = bases.iter().map(|b| format!("count:{b}")).collect();
    let s = experiment(ConfigLayer {
        process: Some("sticky".into()),
        rho: Some(0.05),
        n: Some(200),
        memory: Some(0),
        tau: Some(60),
        alpha: Some(0.1),
        trials: Some(500),
        predictors: Some(predictors.clone()),
        methods: Some(vec!["jackknife".into(), "lwo".into()]),
        score: Some("abs".into()),
        seed: Some(7),
        ..Default::default()
    });
    let mut good = 0;
    let mut parts = Vec::new();
    for p in &predictors {
        let (jk, lw) = (coverage(&s, Method::Jackknife, p), coverage(&s, Method::Lwo, p));
        if jk <= 0.80 && lw >= 0.85 {
            good += 1;
        }
        parts.push(format!("{p} jk {jk:.3} lwo {lw:.3}"));
    }
    Outcome {
        pass: good >= 3,
        detail: format!("{good}/5 with jk <= 0.80 and lwo >= 0.85 (need 3): {}", parts.join("; ")),
    }
}

fn criterion_4() -> Outcome {
    let p = gen_binary_ma(4).unwrap();
    let beta = beta_mixing(&p, 2).unwrap();
    let rho = rho_lp(&AugmentedPmf::embed(&p).unwrap(), 2).unwrap();
    Outcome { pass: beta <= 1e-12 && rho <= 1e-6, detail: format!("binary MA, n+1 = 4: beta(2) = {beta:.3e} (<= 1e-12), rho_2 = {rho:.3e} (<= 1e-6)") }
}

fn criterion_5() -> Outcome {
    let mut rng = rng_from_seed(5);
    let mut failures = Vec::new();
    let mut worst = f64::INFINITY;
    for i in 0..50 {
        let (a, b) = (rng.random_range(0.01..0.99), rng.random_range(0.01..0.99));
        let p = MarkovChain::stationary(vec![vec![1.0 - a, a], vec![b, 1.0 - b]]).unwrap().joint(5).unwrap();
        let report = verify_inequalities(&p, 1, 1e-6).unwrap();
        for c in &report.checks {
            worst = worst.min(c.slack);
            if !c.holds || c.skipped.is_some() {
                failures.push(format!("chain {i} {}: lhs {:.3e} rhs {:.3e} {:?}", c.name, c.lhs, c.rhs, c.skipped));
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!("50 stationary 2-state chains, n+1 = 5, tau = 1: {} failed checks, smallest slack {worst:.3e}; {}", failures.len(), failures.join("; ")),
    }
}

/// Quantile with the rank given exactly; ranks above the length give +inf.
fn quantile_at_rank(v: &[f64], rank: i64) -> ExtendedReal {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    if rank > s.len() as i64 {
        ExtendedReal::Infinite
    } else if rank <= 0 {
        ExtendedReal::NegInfinite
    } else {
        ExtendedReal::Finite(s[(rank - 1) as usize])
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    (a + b - 1).div_euclid(b)
}

fn criterion_6() -> Outcome {
    let mut rng = rng_from_seed(6);
    let mut violations = 0;
    let mut rank_mismatches = 0;
    // Subset lemma: levels are rationals i/1000 so the ranks are exact integers.
    for _ in 0..1000 {
        let m = rng.random_range(1..=50usize);
        let k = rng.random_range(1..=m);
        let b: Vec<f64> = (0..m).map(|_| rng.random_range(0..20) as f64 / 4.0).collect();
        let mut a_set = b.clone();
        a_set.shuffle(&mut rng);
        a_set.truncate(k);
        let i = rng.random_range(1..1000i64);
        let a = i as f64 / 1000.0;
        let (k64, m64) = (k as i64, m as i64);
        let checks = [
            (&a_set, 1.0 - a, ceil_div((1000 - i) * k64, 1000)),
            (&b, (1.0 - a) * k as f64 / m as f64, ceil_div((1000 - i) * k64, 1000)),
            (&b, 1.0 - a, ceil_div((1000 - i) * m64, 1000)),
            (&a_set, 1.0 - a * m as f64 / k as f64, k64 - (i * m64).div_euclid(1000)),
        ];
        let q: Vec<ExtendedReal> = checks
            .iter()
            .map(|(v, level, rank)| {
                let got = quantile(v, *level).unwrap();
                if got != quantile_at_rank(v, *rank) {
                    rank_mismatches += 1;
                }
                got
            })
            .collect();
        if q[0] < q[1] || q[2] < q[3] {
            violations += 1;
        }
    }
    // Set lemma, deterministic core. The minimizing bijection is built
    // greedily: walk V upwards and give each v the smallest unmatched u with
    // u <= v + t. Matching sorted U to sorted V is not always optimal, so it
    // is only reported.
    let mut brute_mismatches = 0;
    let mut sorted_suboptimal = 0;
    for inst in 0..1000 {
        let k = rng.random_range(1..=if inst % 2 == 0 { 6 } else { 30 });
        let u: Vec<f64> = (0..k).map(|_| rng.random_range(0..12) as f64 / 2.0).collect();
        let v: Vec<f64> = (0..k).map(|_| rng.random_range(0..12) as f64 / 2.0).collect();
        let t = rng.random_range(0..4) as f64 / 2.0;
        let (ai, di) = (rng.random_range(0..1000i64), rng.random_range(1..1000i64));
        let (a, delta) = (ai as f64 / 1000.0, di as f64 / 1000.0);
        let exceed = |sigma: &[usize]| (0..k).filter(|&j| u[j] > v[sigma[j]] + t).count();
        let mut ui: Vec<usize> = (0..k).collect();
        ui.sort_by(|&x, &y| u[x].total_cmp(&u[y]));
        let mut vi: Vec<usize> = (0..k).collect();
        vi.sort_by(|&x, &y| v[x].total_cmp(&v[y]));
        let mut sorted_sigma = vec![0; k];
        for (&x, &y) in ui.iter().zip(&vi) {
            sorted_sigma[x] = y;
        }
        let sorted = exceed(&sorted_sigma);
        let mut sigma = vec![usize::MAX; k];
        let mut free_v = Vec::new();
        let mut next_u = 0;
        for &y in &vi {
            if next_u < k && u[ui[next_u]] <= v[y] + t {
                sigma[ui[next_u]] = y;
                next_u += 1;
            } else {
                free_v.push(y);
            }
        }
        for (&x, y) in ui[next_u..].iter().zip(free_v) {
            sigma[x] = y;
        }
        let greedy = exceed(&sigma);
        if greedy != k - next_u {
            brute_mismatches += 1;
        }
        if sorted > greedy {
            sorted_suboptimal += 1;
        }
        if k <= 6 {
            let mut perm: Vec<usize> = (0..k).collect();
            let mut best = usize::MAX;
            permutations(&mut perm, 0, &mut |p| best = best.min(exceed(p)));
            if best != greedy {
                brute_mismatches += 1;
            }
        }
        let lhs = quantile(&u, 1.0 - a).unwrap();
        let rhs = quantile(&v, 1.0 - a + delta).unwrap().plus(t);
        if lhs > rhs {
            let k64 = k as i64;
            let need = quantile_rank(1.0 - a + delta, k) - quantile_rank(1.0 - a, k) + 1;
            let exact_need = ceil_div((1000 - ai + di) * k64, 1000) - ceil_div((1000 - ai) * k64, 1000) + 1;
            if need != exact_need || (greedy as i64) < need {
                violations += 1;
            }
        }
    }
    Outcome {
        pass: violations == 0 && rank_mismatches == 0 && brute_mismatches == 0,
        detail: format!(
            "1000 subset + 1000 set instances: {violations} violations, {rank_mismatches} rank mismatches, {brute_mismatches} minimizer mismatches vs brute force ({sorted_suboptimal} instances where sorted matching is not minimal)"
        ),
    }
}

fn permutations(p: &mut Vec<usize>, i: usize, f: &mut dyn FnMut(&[usize])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permutations(p, i + 1, f);
        p.swap(i, j);
    }
}

fn criterion_7() -> Outcome {
    let (n, ell, k) = (200usize, 6usize, 10usize);
    let seq = lift(&gen_ma1(50, n + 1, 77).unwrap(), 0).unwrap();
    let est = estimate_oos_stability(&PredictorSpec::Knn { k }, StabilitySource::Fixed(&seq), ell, 0.0, ScoreKind::EuclideanNorm, 2000, 8).unwrap();
    let bound = (k * ell) as f64 / n as f64;
    let stable = est.nu_hat <= bound + 3.0 * est.std_error;

    let mut rng = rng_from_seed(71);
    let specs = ["ridge:0.5", "knn:3", "kernel:0.7", "tree:3:2", "mlp:4", "count:knn:2"];
    let mut mismatches = 0;
    for i in 0..50 {
        let d = rng.random_range(1..4);
        let len = rng.random_range(8..30);
        let raw = if i % 2 == 0 { gen_ma1(d, len, rng.random()).unwrap() } else { gen_iid_linear(d, len, rng.random()).unwrap() };
        let seq = lift(&raw, rng.random_range(0..2)).unwrap();
        let spec: PredictorSpec = specs[i % specs.len()].parse().unwrap();
        let alpha = rng.random_range(0.05..0.5);
        let seed = rng.random();
        let jk = jackknife(&seq, alpha, &spec, ScoreKind::EuclideanNorm, seed).unwrap();
        let lw = lwo(&seq, alpha, 0, &spec, ScoreKind::EuclideanNorm, 0.0, seed).unwrap();
        // Leave-one-out scores recomputed directly.
        let nn = seq.len() - 1;
        let train = training_view(&seq.points[..nn]);
        let loo: Vec<f64> = (0..nn)
            .map(|j| {
                let kept: Vec<_> = train.iter().enumerate().filter(|&(x, _)| x != j).map(|(_, o)| *o).collect();
                let f = fit_observations(&spec, &kept, seed).unwrap();
                let yhat = f.predict(Some(&train[j].covariate)).unwrap();
                score(Some(&train[j].response), yhat.as_deref(), ScoreKind::EuclideanNorm).unwrap()
            })
            .collect();
        if jk != lw || jk.scores != loo {
            mismatches += 1;
        }
    }
    Outcome {
        pass: stable && mismatches == 0,
        detail: format!(
            "KNN(10) nu_hat {:.4} <= k*ell/n + 3 SE = {bound:.4} + {:.4}; jackknife vs lwo(tau=0) and direct leave-one-out: {mismatches}/50 mismatches",
            est.nu_hat,
            3.0 * est.std_error
        ),
    }
}

fn criterion_8() -> Outcome {
    let s = experiment(ConfigLayer {
        process: Some("iid".into()),
        dim: Some(1),
        n: Some(200),
        tau: Some(2),
        alpha: Some(0.1),
        trials: Some(500),
        predictors: Some(vec!["ridge:1".into()]),
        methods: Some(vec!["jackknife".into(), "lwo".into()]),
        score: Some("abs".into()),
        seed: Some(8),
        ..Default::default()
    });
    let (jk, lw) = (coverage(&s, Method::Jackknife, "ridge:1"), coverage(&s, Method::Lwo, "ridge:1"));
    Outcome { pass: jk >= 0.87 && lw >= 0.87, detail: format!("i.i.d. 1-D ridge, 500 trials: jackknife {jk:.3}, lwo(tau=2) {lw:.3} (both >= 0.87)") }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("MA(1) headline", criterion_1),
        ("five-predictor MA(1)", criterion_2),
        ("sticky chain", criterion_3),
        ("binary MA coefficients", criterion_4),
        ("coefficient inequalities", criterion_5),
        ("quantile lemmas", criterion_6),
        ("stability and jackknife identity", criterion_7),
        ("exchangeable sanity", criterion_8),
    ];
    // `LWO_ACCEPT_ONLY=3,6` runs a subset of the criteria.
    let only: Option<Vec<usize>> = std::env::var("LWO_ACCEPT_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut failed = 0;
    let mut ran = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if only.as_ref().is_some_and(|o| !o.contains(&(i + 1))) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let out = run();
        let tag = if out.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!out.pass);
        println!("criterion {} [{tag}] {name} ({:.1}s): {}", i + 1, start.elapsed().as_secs_f64(), out.detail);
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
