use statrs::distribution::{Beta, ContinuousCDF};

use trustsample::sampling::DirichletSampler;
use trustsample::{sample_preference, AlphaVector, SampleStream};

const N: u64 = 100_000;

fn draws(alpha: &[f64], seed: u64) -> Vec<Vec<f64>> {
    let alpha = AlphaVector::new(alpha.to_vec()).unwrap();
    let sampler = DirichletSampler::new(&alpha, seed);
    (0..N).map(|i| sampler.sample(i).unwrap().weights().to_vec()).collect()
}

fn component(draws: &[Vec<f64>], c: usize) -> Vec<f64> {
    let mut xs: Vec<f64> = draws.iter().map(|d| d[c]).collect();
    xs.sort_by(f64::total_cmp);
    xs
}

fn ks_against(xs: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Two-sample KS statistic over sorted inputs.
fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

fn critical(n: f64, m: f64) -> f64 {
    1.628 * ((n + m) / (n * m)).sqrt()
}

#[test]
fn draws_lie_on_the_simplex() {
    for d in draws(&[0.3, 2.0, 7.5, 1.0], 1).iter().take(10_000) {
        assert!(d.iter().all(|&x| (0.0..=1.0).contains(&x)));
        assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn same_stream_is_bit_identical() {
    let alpha = AlphaVector::new(vec![0.5, 1.5, 4.0]).unwrap();
    for i in [0, 1, 4095, 4096, u64::MAX] {
        let a = sample_preference(&alpha, SampleStream::new(9, i)).unwrap();
        let b = sample_preference(&alpha, SampleStream::new(9, i)).unwrap();
        let bits = |p: &trustsample::PreferenceVector| p.weights().iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let serial = draws(&[1.0, 2.0], 4);
    let parallel = pool.install(|| draws(&[1.0, 2.0], 4));
    assert_eq!(serial, parallel);
}

#[test]
fn small_shapes_match_beta_marginals() {
    let alpha = [0.2, 0.5, 1.3];
    let d = draws(&alpha, 12);
    let total: f64 = alpha.iter().sum();
    for (c, &a) in alpha.iter().enumerate() {
        let beta = Beta::new(a, total - a).unwrap();
        let stat = ks_against(&component(&d, c), |x| beta.cdf(x));
        assert!(stat < 1.628 / (N as f64).sqrt(), "component {c}: D = {stat}");
    }
}

#[test]
fn symmetric_alpha_is_exchangeable() {
    // permuting the alpha vector then sampling matches sampling then permuting
    let d = draws(&[2.0; 4], 31);
    let e = draws(&[2.0; 4], 32);
    let perm = [2, 0, 3, 1];
    let crit = critical(N as f64, N as f64);
    for c in 0..4 {
        let stat = ks_two_sample(&component(&d, c), &component(&e, perm[c]));
        assert!(stat < crit, "component {c}: D = {stat}, crit {crit}");
    }
}

#[test]
fn higher_confidence_lowers_variance() {
    let variance = |xs: &[f64]| {
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
    };
    let low = draws(&[1.0; 3], 5);
    let high = draws(&[10.0; 3], 5);
    for c in 0..3 {
        let (vl, vh) = (variance(&component(&low, c)), variance(&component(&high, c)));
        // analytic m(1 − m)/(Σα + 1): 1/18 and 2/279
        assert!(vh < vl);
        assert!((vl - 1.0 / 18.0).abs() < 0.002);
        assert!((vh - 2.0 / 279.0).abs() < 0.0005);
    }
}

#[test]
fn focused_alpha_shifts_mass() {
    let base = AlphaVector::symmetric(6, 1.0).unwrap();
    let focused = trustsample::focus_alpha(&base, &[4], 10.0).unwrap();
    assert_eq!(focused.components(), &[1.0, 1.0, 1.0, 1.0, 10.0, 1.0]);
    let sampler = DirichletSampler::new(&focused, 2);
    let mean: f64 = (0..20_000).map(|i| sampler.sample(i).unwrap().weights()[4]).sum::<f64>() / 20_000.0;
    assert!((mean - 10.0 / 15.0).abs() < 0.01);
}
