use fedtrust::model::{ArchitectureDescriptor, ModelParams};
use fedtrust::seed;
use proptest::prelude::*;
use rand::Rng;

fn random_model(arch: ArchitectureDescriptor, seed_value: u64) -> ModelParams {
    let mut rng = seed::stream(seed_value, "model-test", &[]);
    let v = (0..arch.param_count()).map(|_| rng.random_range(-1.0..1.0)).collect();
    ModelParams::new(arch, v).unwrap()
}

#[test]
fn mlp_input_gradient_matches_finite_differences() {
    let mut rng = seed::stream(1, "mlp-input-grad", &[]);
    let mut checked = 0;
    while checked < 50 {
        let arch = ArchitectureDescriptor::mlp(4, 6, 3);
        let m = random_model(arch, rng.random());
        let x: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        let l = &m.layers()[0];
        let near_kink = (0..6).any(|r| {
            let z: f64 = l.weights[r].iter().zip(&x).map(|(w, v)| w * v).sum::<f64>() + l.bias[r];
            z.abs() < 1e-3
        });
        if near_kink {
            continue;
        }
        let g = m.input_grad(&x, 0, 2).unwrap();
        let h = 1e-5;
        for i in 0..4 {
            let mut up = x.clone();
            up[i] += h;
            let mut down = x.clone();
            down[i] -= h;
            let f = |x: &[f64]| {
                let l = m.logits(x).unwrap();
                l[0] - l[2]
            };
            let fd = (f(&up) - f(&down)) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-6, "{fd} vs {}", g[i]);
        }
        checked += 1;
    }
}

#[test]
fn flattening_round_trips_bit_exact() {
    let arch = ArchitectureDescriptor::mlp(7, 5, 4);
    let m = random_model(arch, 9);
    let back = ModelParams::from_layers(arch, &m.layers()).unwrap();
    assert_eq!(back.values, m.values);
    let json = serde_json::to_string(&m).unwrap();
    let parsed: ModelParams = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>(), m.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
}

proptest! {
    #[test]
    fn softmax_is_a_simplex_point(seed_value in any::<u64>(), x in prop::collection::vec(-50.0f64..50.0, 6)) {
        let m = random_model(ArchitectureDescriptor::mlp(6, 4, 5), seed_value);
        let p = m.forward(&x).unwrap();
        prop_assert!(p.iter().all(|&v| v >= 0.0));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}
