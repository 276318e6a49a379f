mod common;

use common::{random_levels, random_plane, rng};
use veda_core::filters::{make_surround, scale_radius, SurroundKind};
use veda_core::imgcore::to_log_domain;
use veda_core::retinal::{
    decompose_with, rk4, shunting_ode_integrate, shunting_steady_state, shunting_transient,
    weber_contrast, ContrastModel, ShuntingParams,
};
use veda_core::{ImagePlane, IntensityDomain};

#[test]
fn rk4_reaches_the_steady_state() {
    let mut r = rng(21);
    for &(m, g) in &[(1.0, 1.0), (0.0, 2.5), (3.0, 0.5)] {
        let p = ShuntingParams::new(m, g).unwrap();
        let i = random_plane(&mut r, 12, 9, 0.0, 5.5);
        let s = random_plane(&mut r, 12, 9, 0.0, 5.5);
        let slowest = i
            .data()
            .iter()
            .zip(s.data())
            .map(|(a, b)| m + a + b)
            .fold(f64::INFINITY, f64::min);
        let integrated = shunting_ode_integrate(&i, &s, &p, 30.0 / slowest, 0.01).unwrap();
        let closed = shunting_steady_state(&i, &s, &p).unwrap();
        for (a, b) in integrated.data().iter().zip(closed.data()) {
            assert!((a - b).abs() <= 1e-6, "m={m} g={g}: {a} vs {b}");
        }
    }
}

#[test]
fn steady_state_matches_integration_at_t50() {
    let mut r = rng(26);
    let p = ShuntingParams::default();
    let i = random_plane(&mut r, 16, 16, 0.0, 5.5);
    let s = random_plane(&mut r, 16, 16, 0.0, 5.5);
    let integrated = shunting_ode_integrate(&i, &s, &p, 50.0, 0.01).unwrap();
    let closed = shunting_steady_state(&i, &s, &p).unwrap();
    for (a, b) in integrated.data().iter().zip(closed.data()) {
        assert!((a - b).abs() <= 1e-6);
    }
}

#[test]
fn transient_matches_integration_at_all_times() {
    let mut r = rng(22);
    let p = ShuntingParams::new(1.0, 1.0).unwrap();
    let i = random_plane(&mut r, 8, 8, 0.0, 5.5);
    let s = random_plane(&mut r, 8, 8, 0.0, 5.5);
    for t in [0.0, 0.05, 0.3, 1.0, 4.0] {
        let closed = shunting_transient(&i, &s, &p, t).unwrap();
        let integrated = shunting_ode_integrate(&i, &s, &p, t, 0.001).unwrap();
        for (a, b) in integrated.data().iter().zip(closed.data()) {
            assert!((a - b).abs() <= 1e-9, "t={t}");
        }
    }
}

#[test]
fn rk4_is_exact_on_cubics() {
    // RK4 integrates polynomials of degree <= 3 in t without truncation error
    let y = rk4(|t, _| 3.0 * t * t - 2.0 * t + 1.0, 0.0, 0.5, 2.0, 0.37);
    assert!((y - (0.5 + 8.0 - 4.0 + 2.0)).abs() < 1e-12);
}

#[test]
fn steady_state_is_bounded_by_the_gain() {
    let mut r = rng(23);
    let p = ShuntingParams::new(0.0, 1.7).unwrap();
    let i = random_plane(&mut r, 16, 16, 0.0, 5.5);
    let s = random_plane(&mut r, 16, 16, 0.0, 5.5);
    let rp = shunting_steady_state(&i, &s, &p).unwrap();
    assert!(rp.data().iter().all(|v| v.abs() < 1.7));
}

#[test]
fn weber_contrast_carries_the_sign_of_the_difference() {
    let mut r = rng(24);
    let i = random_plane(&mut r, 16, 16, 0.0, 5.5);
    let s = random_plane(&mut r, 16, 16, 0.0, 5.5);
    let w = weber_contrast(&i, &s).unwrap();
    let rp = shunting_steady_state(&i, &s, &ShuntingParams::default()).unwrap();
    for k in 0..i.len() {
        let d = i.data()[k] - s.data()[k];
        if d != 0.0 {
            assert_eq!(w.data()[k].signum(), d.signum());
            assert_eq!(w.data()[k].signum(), rp.data()[k].signum());
        }
    }
}

#[test]
fn every_model_splits_8bit_images_exactly() {
    let mut r = rng(25);
    let dom = IntensityDomain::default();
    let p = ShuntingParams::default();
    for _ in 0..4 {
        let i = to_log_domain(&random_levels(&mut r, 40, 30), &dom);
        for sigma in [1.0, 4.0] {
            let s = make_surround(&i, sigma, SurroundKind::Wgif).unwrap();
            for model in [
                ContrastModel::Shunting,
                ContrastModel::Weber,
                ContrastModel::Michelson,
                ContrastModel::Rms,
            ] {
                let d = decompose_with(model, &i, &s, &p, scale_radius(sigma)).unwrap();
                assert_eq!(d.recompose(), i, "{model} sigma={sigma}");
            }
        }
    }
}

#[test]
fn decomposition_separates_texture_from_shading() {
    // texture rides on a smooth left-to-right ramp; the contrast image should
    // keep the texture and drop the ramp, the residual the reverse
    let (w, h) = (96, 64);
    let shading = |x: usize| 1.0 + 3.0 * x as f64 / w as f64;
    let texture = |x: usize, y: usize| 0.3 * (((x / 3 + y / 3) % 2) as f64 - 0.5);
    let i = ImagePlane::from_fn(w, h, |x, y| shading(x) + texture(x, y));
    let s = make_surround(&i, 4.0, SurroundKind::Gaussian).unwrap();
    let d = decompose_with(ContrastModel::Shunting, &i, &s, &ShuntingParams::default(), 12).unwrap();
    let interior = |p: &ImagePlane| p.crop(16, 16, w - 32, h - 32);
    let column_means = |p: &ImagePlane| -> Vec<f64> {
        (0..p.width())
            .map(|x| (0..p.height()).map(|y| p.get(x, y)).sum::<f64>() / p.height() as f64)
            .collect()
    };
    let spread = |v: &[f64]| v.iter().copied().fold(f64::MIN, f64::max) - v.iter().copied().fold(f64::MAX, f64::min);
    let c = interior(&d.contrast);
    let l = interior(&d.residual);
    // shading lives in the residual
    assert!(spread(&column_means(&l)) > 10.0 * spread(&column_means(&c)));
    assert!(c.variance() > 0.0);
    // inside 8x8 patches the residual varies less than the input
    let input = interior(&i);
    let (mut res_var, mut in_var) = (0.0, 0.0);
    for py in (0..input.height() - 8).step_by(8) {
        for px in (0..input.width() - 8).step_by(8) {
            res_var += l.crop(px, py, 8, 8).variance();
            in_var += input.crop(px, py, 8, 8).variance();
        }
    }
    assert!(res_var < in_var, "{res_var} vs {in_var}");
}
