use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zygmund_core::kernels::{make_band_bump, make_meyer_lp_pair, SpectralWavelet};
use zygmund_core::signals::SignalSpec;
use zygmund_core::transform::{
    bessel_potential, cwt_forward, lowpass, lp_pairing, reconstruct, synthesize, Margin, SampledSignal, ScaleGrid,
};

fn grid(y_min: f64, y_max: f64, voices: u32, margin: f64) -> ScaleGrid {
    ScaleGrid::new(y_min, y_max, voices).unwrap().with_margin(Margin::Fixed(margin)).unwrap()
}

fn packet(c: f64, s: f64, w: f64) -> impl Fn(f64) -> f64 {
    move |t| (-0.5 * ((t - c) / s).powi(2)).exp() * (w * t).cos()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn forward_transform_is_linear() {
    let psi = make_band_bump(1.0, 3.0).unwrap();
    let g = grid(1.0 / 16.0, 1.0, 8, 8.0);
    let f = SampledSignal::on_window(-32.0, 32.0, 4096, packet(1.0, 2.0, 3.0)).unwrap();
    let h = SampledSignal::on_window(-32.0, 32.0, 4096, |t| (0.7 * t).sin() / (1.0 + t * t)).unwrap();
    let (a, b) = (2.5, -0.75);
    let lhs = cwt_forward(&f.combine(a, &h, b).unwrap(), &psi, &g).unwrap();
    let rhs = cwt_forward(&f, &psi, &g).unwrap().combine(a, &cwt_forward(&h, &psi, &g).unwrap(), b).unwrap();
    for j in 0..lhs.ny() {
        assert!(max_abs_diff(lhs.row(j), rhs.row(j)) < 1e-13, "row {j}");
    }
}

#[test]
fn translation_shifts_rows() {
    let psi = make_band_bump(1.0, 3.0).unwrap();
    let g = grid(1.0 / 16.0, 1.0, 8, 16.0);
    let f = SampledSignal::on_window(-40.0, 40.0, 4096, packet(0.0, 1.5, 2.0)).unwrap();
    let k = 37;
    let w = cwt_forward(&f, &psi, &g).unwrap();
    let ws = cwt_forward(&f.shift(k as isize), &psi, &g).unwrap();
    let interior = w.interior();
    let mut worst = 0.0f64;
    for j in 0..w.ny() {
        for i in interior.start..interior.end - k {
            worst = worst.max((ws.value(i + k, j) - w.value(i, j)).abs());
        }
    }
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn dilation_covariance() {
    // g(t) = f(t/2) on dt' = 2 dt shares the samples of f; W g(x, y) = W f(x/2, y/2).
    let psi = SpectralWavelet::gaussian_derivative(2).unwrap();
    let f = SampledSignal::on_window(-20.0, 20.0, 4096, packet(0.5, 1.0, 4.0)).unwrap();
    let g = SampledSignal::new(f.samples().to_vec(), 2.0 * f.t0(), 2.0 * f.dt()).unwrap();
    let wf = cwt_forward(&f, &psi, &grid(1.0 / 32.0, 0.5, 8, 4.0)).unwrap();
    let wg = cwt_forward(&g, &psi, &grid(1.0 / 16.0, 1.0, 8, 8.0)).unwrap();
    assert_eq!(wf.ny(), wg.ny());
    for j in 0..wf.ny() {
        assert!((wg.scales()[j] - 2.0 * wf.scales()[j]).abs() < 1e-15);
        assert!(max_abs_diff(wf.row(j), wg.row(j)) < 1e-6, "row {j}");
    }
}

#[test]
fn polynomials_below_the_moment_order_are_annihilated() {
    // Vanishing moments through order 3.
    let psi = SpectralWavelet::gaussian_derivative(4).unwrap();
    let g = grid(1.0 / 8.0, 1.0, 8, 14.0);
    for m in 0..=3 {
        let f = SampledSignal::on_window(-20.0, 20.0, 2048, |t| (t / 20.0).powi(m)).unwrap();
        let w = cwt_forward(&f, &psi, &g).unwrap();
        for j in 0..w.ny() {
            let (sup, _) = w.interior_sup(j);
            assert!(sup <= 1e-8 * w.scales()[j], "m {m} y {}: {sup}", w.scales()[j]);
        }
    }
}

#[test]
fn synthesis_is_linear_and_kills_zero() {
    let pair = make_meyer_lp_pair(0.5, 1.0).unwrap();
    let g = grid(1.0 / 16.0, 1.0, 8, 16.0);
    let f = SampledSignal::on_window(-32.0, 32.0, 4096, packet(0.0, 2.0, 4.0)).unwrap();
    let h = SampledSignal::on_window(-32.0, 32.0, 4096, packet(3.0, 1.0, 6.0)).unwrap();
    let wf = cwt_forward(&f, pair.psi(), &g).unwrap();
    let wh = cwt_forward(&h, pair.psi(), &g).unwrap();
    let zero = synthesize(&wf.scale(0.0), pair.eta()).unwrap();
    assert!(zero.samples().iter().all(|v| *v == 0.0));
    let (a, b) = (1.5, -2.0);
    let lhs = synthesize(&wf.combine(a, &wh, b).unwrap(), pair.eta()).unwrap();
    let rhs = synthesize(&wf, pair.eta()).unwrap().combine(a, &synthesize(&wh, pair.eta()).unwrap(), b).unwrap();
    assert!(max_abs_diff(lhs.samples(), rhs.samples()) < 1e-12);
}

#[test]
fn reconstruction_of_zero_and_shift_stability() {
    let pair = make_meyer_lp_pair(0.5, 1.0).unwrap();
    let g = grid(1.0 / 64.0, 1.0, 16, 16.0);
    let bump = SignalSpec::BandBump { lo: 1.0, hi: 2.0 };
    let f = bump.sample(-64.0, 64.0, 1 << 14).unwrap();
    let (rec0, err0) = reconstruct(&f.scale(0.0), &pair, &g).unwrap();
    assert_eq!(err0, 0.0);
    assert!(rec0.samples().iter().all(|v| *v == 0.0));

    let (_, err) = reconstruct(&f, &pair, &g).unwrap();
    let shifted = bump.sample(-64.0 - 10.0 * f.dt(), 64.0 - 10.0 * f.dt(), 1 << 14).unwrap();
    let (_, err_s) = reconstruct(&shifted, &pair, &g).unwrap();
    assert!(err <= 1e-3, "{err}");
    assert!((err_s - err).abs() <= 0.1 * err, "{err} vs {err_s}");
}

#[test]
fn lowpass_examples() {
    let pair = make_meyer_lp_pair(0.5, 1.0).unwrap();
    let phi = pair.phi();
    let lo = -400.0;
    let n = 1 << 13;
    let margin = phi.decay_radius();
    let one = SampledSignal::on_window(lo, -lo, n, |_| 1.0).unwrap();
    let inner: Vec<usize> = (0..n).filter(|&i| one.t(i).abs() < -lo - margin).collect();
    let out = lowpass(&one, phi).unwrap();
    assert!(inner.iter().all(|&i| (out.samples()[i] - 1.0).abs() < 1e-6));

    let fast = SampledSignal::on_window(lo, -lo, n, |t| (1.5 * t).cos()).unwrap();
    let out = lowpass(&fast, phi).unwrap();
    assert!(inner.iter().all(|&i| out.samples()[i].abs() < 1e-6));

    let slow = SampledSignal::on_window(lo, -lo, n, |t| (0.4 * t).cos()).unwrap();
    let out = lowpass(&slow, phi).unwrap();
    assert!(inner.iter().all(|&i| (out.samples()[i] - slow.samples()[i]).abs() < 1e-6));
}

#[test]
fn bessel_potential_smoothing_direction_is_an_eigen_multiplier() {
    // (1 + xi^2)^{-1} has kernel e^{-|t|} / 2, so edge effects die within the margin.
    let omega = 1.7;
    let f = SampledSignal::on_window(-64.0, 64.0, 8192, |t| (omega * t).cos()).unwrap();
    let g = bessel_potential(&f, -2.0).unwrap();
    let gain = (1.0 + omega * omega).powf(-1.0);
    let mut worst = 0.0f64;
    for i in 0..f.len() {
        if f.t(i).abs() < 64.0 - 34.0 {
            worst = worst.max((g.samples()[i] - gain * f.samples()[i]).abs() / gain);
        }
    }
    assert!(worst < 1e-8, "{worst}");
}

#[test]
fn pairing_matches_direct_on_a_random_family() {
    let pair = make_meyer_lp_pair(0.5, 1.0).unwrap();
    let g = ScaleGrid::new(1.0 / 64.0, 1.0, 16).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let fc = rng.gen_range(-3.0..3.0);
        let fs = rng.gen_range(0.7..2.0);
        let fw = rng.gen_range(0.0..3.0);
        let tc = fc + rng.gen_range(-1.0..1.0);
        let ts = rng.gen_range(0.7..2.0);
        let tw = fw + rng.gen_range(-0.5..0.5);
        let f = SampledSignal::on_window(-32.0, 32.0, 8192, packet(fc, fs, fw)).unwrap();
        let theta = SampledSignal::on_window(-32.0, 32.0, 8192, packet(tc, ts, tw)).unwrap();
        let rep = lp_pairing(&f, &theta, &pair, &g).unwrap();
        if rep.direct.abs() > 1e-3 {
            worst = worst.max(rep.relative_error());
        } else {
            worst = worst.max((rep.value - rep.direct).abs());
        }
    }
    assert!(worst <= 1e-3, "{worst}");
}
