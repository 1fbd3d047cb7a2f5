//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use fedtrust::exec::Execution;
use fedtrust::experiment::{self, ExperimentPreset};
use fedtrust::factsheet::FactSheet;
use fedtrust::metrics::{
    clever_bound, metric_class_imbalance, metric_entropy, metric_global_privacy_risk, MetricId, MetricValue,
    Pillar, RawValue,
};
use fedtrust::model::{ArchitectureDescriptor, ModelParams};
use fedtrust::scoring::{
    aggregate, aggregation_score, build_report, clever_score, federation_scale_score, normalize, render, Format,
    NormalizeOptions, ReportContext, ReportTiming, WeightConfig,
};
use fedtrust::seed::{self, ClientId, HashedLabel};
use fedtrust::sim::{aggregate_fedavg, craft_replacement_update, RoundUpdate, Weighting};
use fedtrust::data::ClassDistribution;
use rand::Rng;
use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

// 1 -------------------------------------------------------------------------

fn normalization_exactness() -> Outcome {
    let start = Instant::now();
    let table = [
        ("FedAvg", 0.8493),
        ("FedOpt", 0.8492),
        ("FedProx", 0.8477),
        ("FedBN", 0.8548),
        ("pFedMe", 0.8765),
        ("Ditto", 0.8661),
        ("FedEM", 0.8479),
    ];
    for (name, want) in table {
        let got = normalize(MetricId::AggregationAlgorithm, &RawValue::Name(name.into()), NormalizeOptions::default())
            .map_err(|e| e.to_string())?
            .score;
        check(got == want, || format!("{name}: {got} != {want}"))?;
        check(aggregation_score(name).unwrap() == want, || name.to_string())?;
    }
    check(clever_score(0.0) == 0.0, || "clever 0".into())?;
    check(clever_score(4.0) == 1.0, || "clever 4".into())?;
    let via = |raw: f64| {
        normalize(MetricId::CertifiedRobustness, &RawValue::Real(raw), NormalizeOptions::default())
            .unwrap()
            .score
    };
    check(via(0.0) == 0.0 && via(4.0) == 1.0, || "clever via normalize".into())?;
    check(federation_scale_score(10) == 0.0, || "scale 10".into())?;
    check(federation_scale_score(1_000_000) == 1.0, || "scale 1e6".into())?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok("7 algorithm scores, CLEVER and scale endpoints exact".into())
}

// 2 -------------------------------------------------------------------------

/// The taxonomy written out by hand, independent of the library constant.
type Branch = (&'static str, &'static [&'static str]);

const TREE: &[(&str, &[Branch])] = &[
    (
        "privacy",
        &[
            ("privacy_preserving", &["differential_privacy"]),
            ("uncertainty", &["entropy"]),
            ("indistinguishability", &["global_privacy_risk"]),
        ],
    ),
    (
        "robustness",
        &[
            ("resilience_to_attacks", &["certified_robustness"]),
            ("algorithm_robustness", &["performance", "personalization"]),
            ("client_reliability", &["federation_scale"]),
        ],
    ),
    (
        "fairness",
        &[
            ("client_selection", &["participation_variation"]),
            ("performance", &["accuracy_variation"]),
            ("group_level", &["discrimination_index"]),
            ("class_distribution", &["class_imbalance"]),
        ],
    ),
    (
        "explainability",
        &[
            ("interpretability", &["algorithmic_transparency", "model_size"]),
            ("post_hoc", &["feature_importance"]),
        ],
    ),
    (
        "accountability",
        &[("factsheet_completeness", &["project", "participants", "data", "configuration", "system"])],
    ),
    (
        "federation",
        &[("client_management", &["client_selector"]), ("optimization", &["aggregation_algorithm"])],
    ),
];

struct Fixture {
    scores: BTreeMap<&'static str, Option<f64>>,
    metric_w: BTreeMap<&'static str, f64>,
    notion_w: BTreeMap<(&'static str, &'static str), f64>,
    pillar_w: BTreeMap<&'static str, f64>,
}

/// Nested weighted means computed directly from the hand-written tree.
fn oracle(f: &Fixture) -> f64 {
    let mut g_num = 0.0;
    let mut g_den = 0.0;
    for &(pillar, notions) in TREE {
        let mut p_num = 0.0;
        let mut p_den = 0.0;
        for &(notion, metrics) in notions {
            let mut n_num = 0.0;
            let mut n_den = 0.0;
            for &m in metrics {
                if let Some(s) = f.scores[m] {
                    n_num += f.metric_w[m] * s;
                    n_den += f.metric_w[m];
                }
            }
            if n_den > 0.0 {
                let w = f.notion_w[&(pillar, notion)];
                p_num += w * (n_num / n_den);
                p_den += w;
            }
        }
        g_num += f.pillar_w[pillar] * (p_num / p_den);
        g_den += f.pillar_w[pillar];
    }
    g_num / g_den
}

fn aggregation_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = seed::stream(2024, "acceptance-aggregation", &[]);
    let ids: BTreeMap<&str, MetricId> = MetricId::all().map(|id| (id.name(), id)).collect();
    let mut worst = 0.0f64;
    for case in 0..1000 {
        let fixture = loop {
            let mut f = Fixture {
                scores: BTreeMap::new(),
                metric_w: BTreeMap::new(),
                notion_w: BTreeMap::new(),
                pillar_w: BTreeMap::new(),
            };
            let mut ok = true;
            for &(pillar, notions) in TREE {
                f.pillar_w.insert(pillar, rng.random_range(0.05..3.0));
                let mut any = false;
                for &(notion, metrics) in notions {
                    f.notion_w.insert((pillar, notion), rng.random_range(0.05..3.0));
                    for &m in metrics {
                        let s = (rng.random::<f64>() > 0.25).then(|| rng.random::<f64>());
                        any |= s.is_some();
                        f.scores.insert(m, s);
                        f.metric_w.insert(m, rng.random_range(0.05..3.0));
                    }
                }
                ok &= any;
            }
            if ok {
                break f;
            }
        };
        let metrics: Vec<MetricValue> = fixture
            .scores
            .iter()
            .map(|(&name, &s)| {
                let id = ids[name];
                match s {
                    Some(s) => {
                        let mut m = MetricValue::new(id, RawValue::Real(s));
                        m.normalized = Some(s);
                        m
                    }
                    None => MetricValue::unavailable(id, "fixture"),
                }
            })
            .collect();
        let mut weights = WeightConfig::default();
        for (&name, &w) in &fixture.metric_w {
            weights.metrics.insert(ids[name], w);
        }
        for p in Pillar::ALL {
            weights.pillars.insert(p, fixture.pillar_w[p.name()]);
        }
        // Notion names are unique across pillars, so the id alone keys them.
        let notion_ids: BTreeMap<String, fedtrust::metrics::Notion> = fedtrust::metrics::TAXONOMY
            .iter()
            .flat_map(|(_, ns)| ns.iter().map(|(n, _)| (n.name().to_string(), *n)))
            .collect();
        for (&(_, notion), &w) in &fixture.notion_w {
            weights.notions.insert(notion_ids[notion], w);
        }
        let got = aggregate(&metrics, &weights).map_err(|e| format!("case {case}: {e}"))?.global_score;
        let want = oracle(&fixture);
        worst = worst.max((got - want).abs());
    }
    check(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("1000 fixtures, max deviation {worst:e}"))
}

// 3 -------------------------------------------------------------------------

fn attack_algebra() -> Outcome {
    let mut rng = seed::stream(7, "acceptance-attack", &[]);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let arch = ArchitectureDescriptor::mlp(rng.random_range(1..8), rng.random_range(1..6), rng.random_range(2..5));
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
            let v = (0..arch.param_count()).map(|_| rng.random_range(-1.0..1.0)).collect();
            ModelParams::new(arch, v).unwrap()
        };
        let w = draw(&mut rng);
        let x_atk = draw(&mut rng);
        let n = rng.random_range(1..=20usize);
        let mut updates = vec![craft_replacement_update(&w, &x_atk, n, ClientId("attacker".into()), 10).unwrap()];
        for i in 0..n - 1 {
            updates.push(RoundUpdate {
                client: ClientId(format!("benign-{i:02}")),
                delta: vec![0.0; w.len()],
                num_train_samples: 10,
            });
        }
        let next = aggregate_fedavg(&w, &updates, Weighting::Uniform).map_err(|e| e.to_string())?;
        let dev = next.values.iter().zip(&x_atk.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst = worst.max(dev);
    }
    check(worst <= 1e-9, || format!("max L-inf deviation {worst:e}"))?;
    Ok(format!("100 draws, max L-inf deviation {worst:e}"))
}

// 4 -------------------------------------------------------------------------

fn clever_linear_oracle() -> Outcome {
    let mut rng = seed::stream(11, "acceptance-clever", &[]);
    let (mut worst_bound, mut worst_flip) = (0.0f64, 0.0f64);
    let mut cases = 0;
    while cases < 50 {
        let d = rng.random_range(2..10);
        let k = rng.random_range(2..6);
        let arch = ArchitectureDescriptor::logistic(d, k);
        let values = (0..arch.param_count()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let model = ModelParams::new(arch, values).unwrap();
        let x0: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
        let c = model.predict(&x0).unwrap();
        let logits = model.logits(&x0).unwrap();
        let layer = &model.layers()[0];
        let row = |i: usize| &layer.weights[i];

        // Analytic margin bound and the class pair achieving it.
        let (mut analytic, mut jstar, mut dir) = (f64::INFINITY, 0, vec![]);
        for j in (0..k).filter(|&j| j != c) {
            let diff: Vec<f64> = row(c).iter().zip(row(j)).map(|(a, b)| a - b).collect();
            let norm = diff.iter().map(|v| v * v).sum::<f64>().sqrt();
            let b = (logits[c] - logits[j]) / norm;
            if b < analytic {
                analytic = b;
                jstar = j;
                dir = diff.iter().map(|v| -v / norm).collect();
            }
        }
        if analytic < 1e-6 {
            continue;
        }
        let certified = clever_bound(&model, &x0, c, 1.0, 8, &mut rng).map_err(|e| e.to_string())?;
        worst_bound = worst_bound.max((certified - analytic).abs());

        // Bisection for the first distance along `dir` where the label changes.
        let flipped = |t: f64| {
            let x: Vec<f64> = x0.iter().zip(&dir).map(|(a, u)| a + t * u).collect();
            let l = model.logits(&x).unwrap();
            l[jstar] >= l[c] || model.predict(&x).unwrap() != c
        };
        let (mut lo, mut hi) = (0.0, analytic * 2.0 + 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if flipped(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        worst_flip = worst_flip.max((hi - analytic).abs() / analytic);
        cases += 1;
    }
    check(worst_bound <= 1e-9, || format!("bound deviation {worst_bound:e}"))?;
    check(worst_flip <= 1e-6, || format!("line-search relative deviation {worst_flip:e}"))?;
    Ok(format!("50 models, bound dev {worst_bound:e}, flip rel dev {worst_flip:e}"))
}

// 5 -------------------------------------------------------------------------

fn privacy_score(eps: f64, n: usize) -> f64 {
    let risk = metric_global_privacy_risk(Some(eps), n);
    normalize(MetricId::GlobalPrivacyRisk, &RawValue::Real(risk), NormalizeOptions::default())
        .unwrap()
        .score
}

fn dp_monotonicity() -> Outcome {
    let by_eps: Vec<f64> = [20.0, 10.0, 6.0, 1.0, 0.1].iter().map(|&e| privacy_score(e, 50)).collect();
    check(by_eps.windows(2).all(|w| w[1] > w[0]), || format!("scores over decreasing eps {by_eps:?}"))?;
    let by_n: Vec<f64> = [10, 50, 100].iter().map(|&n| privacy_score(6.0, n)).collect();
    check(by_n.windows(2).all(|w| w[1] > w[0]), || format!("scores over growing N {by_n:?}"))?;
    // Spot value: e^6 / (49 + e^6).
    let risk = metric_global_privacy_risk(Some(6.0), 50);
    let direct = 6f64.exp() / (49.0 + 6f64.exp());
    check((risk - direct).abs() < 1e-12, || format!("risk {risk} vs {direct}"))?;
    Ok(format!("eps sweep {by_eps:.4?}, N sweep {by_n:.4?}"))
}

// 6 -------------------------------------------------------------------------

fn directional_reproduction() -> Outcome {
    let start = Instant::now();
    let seeds = [1u64, 2, 3, 4, 5];
    let (mut a, mut b, mut c) = (0, 0, 0);
    let mut lines = Vec::new();
    for &s in &seeds {
        let run = |name: &str| {
            let p = ExperimentPreset::builtin(name).unwrap().with_seed(s);
            assert!(p.dataset.samples_per_client.max <= 200);
            experiment::simulate(&p, Execution::Parallel).map(|r| r.report)
        };
        let r1 = run("exp1").map_err(|e| e.to_string())?;
        let r2 = run("exp2").map_err(|e| e.to_string())?;
        let r3 = run("exp3").map_err(|e| e.to_string())?;
        let privacy = |r: &fedtrust::scoring::TrustReport| r.pillar_score(Pillar::Privacy).unwrap();
        let pv = |r: &fedtrust::scoring::TrustReport| r.metric(MetricId::ParticipationVariation).unwrap().normalized.unwrap();
        a += usize::from(privacy(&r2) > privacy(&r1));
        b += usize::from(privacy(&r3) > privacy(&r2));
        c += usize::from(pv(&r2) > pv(&r1));
        lines.push(format!(
            "seed {s}: privacy {:.3}/{:.3}/{:.3}, participation {:.3}/{:.3}",
            privacy(&r1),
            privacy(&r2),
            privacy(&r3),
            pv(&r1),
            pv(&r2)
        ));
    }
    for l in &lines {
        println!("    {l}");
    }
    let majority = seeds.len() / 2 + 1;
    check(a >= majority, || format!("exp2 > exp1 privacy on {a}/5 seeds"))?;
    check(b >= majority, || format!("exp3 > exp2 privacy on {b}/5 seeds"))?;
    check(c >= majority, || format!("exp2 > exp1 participation on {c}/5 seeds"))?;
    within(start.elapsed(), Duration::from_secs(180))?;
    Ok(format!("agreement {a}/5, {b}/5, {c}/5 in {:.1?}", start.elapsed()))
}

// 7 -------------------------------------------------------------------------

fn central_diff(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut x = x.to_vec();
    (0..x.len())
        .map(|i| {
            let orig = x[i];
            x[i] = orig + h;
            let up = f(&x);
            x[i] = orig - h;
            let down = f(&x);
            x[i] = orig;
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Distance of the closest hidden pre-activation to the ReLU kink.
fn kink_distance(model: &ModelParams, x: &[f64]) -> f64 {
    if model.arch.hidden_dim == 0 {
        return f64::INFINITY;
    }
    let l = &model.layers()[0];
    (0..model.arch.hidden_dim)
        .map(|r| {
            let z: f64 = l.weights[r].iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + l.bias[r];
            z.abs()
        })
        .fold(f64::INFINITY, f64::min)
}

fn gradient_correctness() -> Outcome {
    const H: f64 = 1e-5;
    let mut rng = seed::stream(3, "acceptance-gradients", &[]);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < 100 {
        let d = rng.random_range(1..6);
        let k = rng.random_range(2..5);
        let arch = if done % 2 == 0 {
            ArchitectureDescriptor::logistic(d, k)
        } else {
            ArchitectureDescriptor::mlp(d, rng.random_range(1..6), k)
        };
        let values: Vec<f64> = (0..arch.param_count()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let model = ModelParams::new(arch, values.clone()).unwrap();
        let batch = rng.random_range(1..5);
        let features: Vec<f64> = (0..batch * d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let labels: Vec<usize> = (0..batch).map(|_| rng.random_range(0..k)).collect();
        // Finite differences straddling a ReLU kink are meaningless; redraw.
        let near_kink = (0..batch).any(|i| kink_distance(&model, &features[i * d..(i + 1) * d]) < 1e-3);
        if near_kink {
            continue;
        }
        let analytic = model.loss_and_grad(&features, &labels).unwrap().param_grad;
        let numeric = central_diff(
            |v| ModelParams::new(arch, v.to_vec()).unwrap().loss_and_grad(&features, &labels).unwrap().loss,
            &values,
            H,
        );
        for (a, n) in analytic.iter().zip(&numeric) {
            worst = worst.max((a - n).abs());
        }
        let x = &features[..d];
        let (c, j) = (labels[0], (labels[0] + 1) % k);
        let analytic = model.input_grad(x, c, j).unwrap();
        let numeric = central_diff(
            |x| {
                let l = model.logits(x).unwrap();
                l[c] - l[j]
            },
            x,
            H,
        );
        for (a, n) in analytic.iter().zip(&numeric) {
            worst = worst.max((a - n).abs());
        }
        done += 1;
    }
    check(worst <= 1e-6, || format!("max abs deviation {worst:e}"))?;
    Ok(format!("100 instances, max abs deviation {worst:e}"))
}

// 8 -------------------------------------------------------------------------

fn small_preset(seed: u64) -> ExperimentPreset {
    let mut p = ExperimentPreset::builtin("exp1").unwrap().with_seed(seed);
    p.dataset.samples_per_client.min = 40;
    p.dataset.samples_per_client.max = 60;
    p
}

fn accountability_for(fs: &FactSheet) -> f64 {
    let ids = [
        MetricId::Project,
        MetricId::Participants,
        MetricId::Data,
        MetricId::Configuration,
        MetricId::System,
    ];
    let c = fedtrust::factsheet::evaluate_completeness(fs);
    let bits = [c.project, c.participants, c.data, c.configuration, c.system];
    let mut metrics: Vec<MetricValue> = MetricId::all()
        .filter(|id| id.location().0 != Pillar::Accountability)
        // Placeholders for the other pillars; only accountability is read.
        .map(|id| {
            let raw = match id {
                MetricId::AggregationAlgorithm => RawValue::Name("FedAvg".into()),
                MetricId::DifferentialPrivacy | MetricId::Personalization | MetricId::ClientSelector => {
                    RawValue::Flag(false)
                }
                MetricId::FederationScale | MetricId::ModelSize => RawValue::Count(10),
                MetricId::AlgorithmicTransparency => RawValue::Real(3.0),
                _ => RawValue::Real(0.5),
            };
            MetricValue::new(id, raw)
        })
        .collect();
    for (id, bit) in ids.into_iter().zip(bits) {
        metrics.push(MetricValue::new(id, RawValue::Flag(bit)));
    }
    let report = build_report(
        metrics,
        ReportContext {
            preset: "fixture".into(),
            config: small_preset(0).federation,
            weights: WeightConfig::default(),
            factsheet_digest: fs.digest(),
            timing: ReportTiming::default(),
            options: NormalizeOptions::default(),
        },
    )
    .unwrap();
    report.pillar_score(Pillar::Accountability).unwrap()
}

fn full_factsheet() -> FactSheet {
    let text = r#"{
        "project": {"overview": "o", "purpose": "p", "background": "b"},
        "participants": {"count": 2, "org_names": ["a", "b"]},
        "data": {"provenance": "synthetic", "preprocessing": "none"},
        "configuration": {"optimizer": "SGD", "model_type": "MLP",
            "global_hyperparams": {"rounds": 5, "max_timeout_s": 60, "termination_accuracy": 0.9},
            "local_hyperparams": {"learning_rate": 0.1, "epochs": 1}},
        "system": {"avg_training_time_s": 0.1, "model_size_params": 1176,
            "avg_upload_bytes": 9408, "avg_download_bytes": 9408}
    }"#;
    FactSheet::from_json(text).unwrap()
}

fn conservation_and_determinism() -> Outcome {
    let p = small_preset(9);
    let a = experiment::simulate(&p, Execution::Parallel).map_err(|e| e.to_string())?;
    let m = p.federation.clients_per_round() as u64;
    let total = a.stats.total_selections();
    check(total == p.federation.rounds as u64 * m, || format!("selections {total} != T*m"))?;

    let counts: Vec<u64> = a.stats.selection_count.values().copied().collect();
    let h = metric_entropy(&counts).map_err(|e| e.to_string())?;
    check((0.0..=1.0).contains(&h), || format!("entropy {h}"))?;
    let uniform = metric_entropy(&[7, 7, 7, 7, 7]).unwrap();
    check((uniform - 1.0).abs() < 1e-12, || format!("uniform entropy {uniform}"))?;

    let salt = b"acceptance";
    let dist = ClassDistribution((0..8).map(|c| (HashedLabel::hashed(salt, c), 25u64)).collect());
    let balance = metric_class_imbalance(&dist, 8).unwrap();
    check(balance == 1.0, || format!("balance {balance}"))?;

    let full = accountability_for(&full_factsheet());
    let empty = accountability_for(&FactSheet::default());
    check(full == 1.0 && empty == 0.0, || format!("accountability full {full}, empty {empty}"))?;

    let b = experiment::simulate(&p, Execution::Sequential).map_err(|e| e.to_string())?;
    let ja = render(&a.report.without_timing(), Format::Json);
    let jb = render(&b.report.without_timing(), Format::Json);
    check(ja == jb, || "same-seed reports differ".into())?;
    check(a.stats.without_timing() == b.stats.without_timing(), || "same-seed stats differ".into())?;
    Ok(format!("sum selections {total} = T*m, entropy {h:.3}, reports identical"))
}

// 9 -------------------------------------------------------------------------

fn end_to_end_smoke() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("e1");
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_fedtrust"))
        .args(["simulate", "--preset", "exp1", "--seed", "7", "--format", "json", "--out"])
        .arg(&out)
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(status.status.success(), || String::from_utf8_lossy(&status.stderr).into_owned())?;
    within(elapsed, Duration::from_secs(60))?;

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).map_err(|e| e.to_string())?;
    let schema: serde_json::Value = serde_json::from_str(include_str!("../schemas/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).map_err(|e| e.to_string())?;
    let errors: Vec<String> = validator.iter_errors(&report).map(|e| e.to_string()).collect();
    check(errors.is_empty(), || format!("schema violations: {errors:?}"))?;

    let cfg = &report["config"];
    check(cfg["num_clients"] == 10 && cfg["rounds"] == 5, || "not the 10-client, 5-round setup".into())?;
    let pillars = report["pillars"].as_array().unwrap();
    check(pillars.len() == 6, || "six pillars".into())?;
    for p in pillars {
        let live = p["notions"]
            .as_array()
            .unwrap()
            .iter()
            .flat_map(|n| n["metrics"].as_array().unwrap())
            .filter(|m| m["available"] == true)
            .count();
        check(live >= 1, || format!("pillar {} has no available metric", p["id"]))?;
    }
    Ok(format!("exp1 in {elapsed:.1?}, schema-valid, 6 pillars populated"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("normalization exactness", normalization_exactness),
        ("aggregation oracle", aggregation_oracle),
        ("attack algebra", attack_algebra),
        ("CLEVER linear oracle", clever_linear_oracle),
        ("DP monotonicity", dp_monotonicity),
        ("directional experiment reproduction", directional_reproduction),
        ("gradient correctness", gradient_correctness),
        ("conservation and determinism", conservation_and_determinism),
        ("end-to-end smoke", end_to_end_smoke),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
