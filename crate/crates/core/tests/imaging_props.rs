mod common;

use mmiqa::cues::{self, CannyParams, ExposureThresholds};
use mmiqa::distort::{apply_blur, apply_gamma, apply_haze, apply_noise, DistortionSpec, Family};
use mmiqa::imgops::{self, Kernel3};
use mmiqa::score::{score_image, FusionConfig};
use mmiqa::{fixtures, GrayImage, RgbImage};
use proptest::prelude::*;

fn gray_strategy(max: usize) -> impl Strategy<Value = GrayImage> {
    gray_strategy_below(max, 255)
}

fn gray_strategy_below(max: usize, top: u8) -> impl Strategy<Value = GrayImage> {
    (3..=max, 3..=max).prop_flat_map(move |(w, h)| {
        proptest::collection::vec(0..=top, w * h)
            .prop_map(move |px| GrayImage::new(w, h, px).unwrap())
    })
}

fn rgb_strategy(max: usize) -> impl Strategy<Value = RgbImage> {
    (3..=max, 3..=max).prop_flat_map(|(w, h)| {
        proptest::collection::vec(any::<u8>(), w * h * 3)
            .prop_map(move |px| RgbImage::new(w, h, px).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laplacian_of_constant_is_zero(w in 3usize..20, h in 3usize..20, v in any::<u8>()) {
        let out = imgops::convolve3(&GrayImage::filled(w, h, v), &Kernel3::LAPLACIAN).unwrap();
        prop_assert!(out.values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn median_and_erode_are_monotone(img in gray_strategy(14), bump in proptest::collection::vec(0u8..40, 196)) {
        let raised = GrayImage::from_fn(img.width(), img.height(), |x, y| {
            img.get(x, y).saturating_add(bump[(y * img.width() + x) % bump.len()])
        });
        let (a, b) = (imgops::median3(&img).unwrap(), imgops::median3(&raised).unwrap());
        prop_assert!(a.pixels().iter().zip(b.pixels()).all(|(p, q)| p <= q));
        for side in [3, 5] {
            let (a, b) = (imgops::erode(&img, side).unwrap(), imgops::erode(&raised, side).unwrap());
            prop_assert!(a.pixels().iter().zip(b.pixels()).all(|(p, q)| p <= q));
        }
    }

    #[test]
    fn dft_satisfies_parseval(img in gray_strategy(16)) {
        let mag = imgops::dft_magnitude(&img);
        let lhs: f64 = mag.values().iter().map(|m| m * m).sum();
        let rhs = img.len() as f64 * img.pixels().iter().map(|&v| (v as f64).powi(2)).sum::<f64>();
        prop_assert!((lhs - rhs).abs() <= 1e-6 * rhs.max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn sharpness_cues_ignore_offsets(img in gray_strategy_below(16, 150), offset in 1u8..=105) {
        let shifted = GrayImage::from_fn(img.width(), img.height(), |x, y| img.get(x, y) + offset);
        prop_assert_eq!(cues::laplacian_variance(&img).unwrap(), cues::laplacian_variance(&shifted).unwrap());
        prop_assert_eq!(cues::tenengrad(&img).unwrap(), cues::tenengrad(&shifted).unwrap());
    }

    #[test]
    fn operations_are_deterministic(img in rgb_strategy(12)) {
        let cfg = FusionConfig::default();
        prop_assert_eq!(score_image(&img, &cfg).unwrap(), score_image(&img, &cfg).unwrap());
    }

    #[test]
    fn distortions_preserve_dimensions(img in rgb_strategy(20), fi in 0usize..6, li in 0usize..3, seed in any::<u64>()) {
        let family = Family::ALL[fi];
        let level = family.levels()[li % family.levels().len()];
        let out = DistortionSpec::new(family, level, seed).apply(&img).unwrap();
        prop_assert_eq!((out.width(), out.height()), (img.width(), img.height()));
        prop_assert_eq!(&out, &DistortionSpec::new(family, level, seed).apply(&img).unwrap());
    }

    #[test]
    fn gamma_moves_exposure_tails(seed in 0u64..1000) {
        let img = fixtures::detail_scene(seed, 48, 48);
        let t = ExposureThresholds::default();
        let g0 = imgops::to_grayscale(&img);
        let (u0, o0) = cues::exposure_tails(&g0, &t);
        let (u1, _) = cues::exposure_tails(&imgops::to_grayscale(&apply_gamma(&img, 1.4).unwrap()), &t);
        let (_, o1) = cues::exposure_tails(&imgops::to_grayscale(&apply_gamma(&img, 0.6).unwrap()), &t);
        prop_assert!(u1 >= u0);
        prop_assert!(o1 >= o0);
    }
}

#[test]
fn blur_lowers_every_sharpness_cue() {
    let img = fixtures::detail_scene(0, 256, 256);
    let canny = CannyParams::default();
    let mut prev: Option<[f64; 4]> = None;
    for sigma in [0.0, 1.5, 3.0, 5.0] {
        let g = imgops::to_grayscale(&apply_blur(&img, sigma).unwrap());
        let cur = [
            cues::laplacian_variance(&g).unwrap(),
            cues::tenengrad(&g).unwrap(),
            cues::edge_density(&g, &canny).unwrap(),
            cues::fft_energy(&g),
        ];
        if let Some(p) = prev {
            for k in 0..4 {
                assert!(cur[k] <= p[k], "cue {k} rose at sigma {sigma}: {} -> {}", p[k], cur[k]);
            }
        }
        prev = Some(cur);
    }
}

#[test]
fn noise_estimate_rises_with_sigma() {
    let smooth = apply_blur(&fixtures::detail_scene(4, 128, 128), 3.0).unwrap();
    let mut prev = cues::noise_estimate(&imgops::to_grayscale(&smooth)).unwrap();
    for sigma in [5.0, 15.0, 25.0] {
        let n = cues::noise_estimate(&imgops::to_grayscale(&apply_noise(&smooth, sigma, 17).unwrap())).unwrap();
        assert!(n > prev, "sigma {sigma}: {n} <= {prev}");
        prev = n;
    }
}

#[test]
fn haze_proxy_rises_with_haze() {
    for seed in 0..5 {
        let img = fixtures::detail_scene(seed, 96, 96);
        let mut prev = cues::haze_proxy(&img, 15).unwrap();
        for t in [0.8, 0.7, 0.6] {
            let h = cues::haze_proxy(&apply_haze(&img, t).unwrap(), 15).unwrap();
            assert!(h >= prev);
            prev = h;
        }
    }
}

#[test]
fn canny_threshold_perturbation_barely_moves_q() {
    let base = FusionConfig::default();
    for img in fixtures::suite(10, 256, 256) {
        let q0 = score_image(&img, &base).unwrap().q_total;
        for f in [0.9, 1.1] {
            let mut cfg = base.clone();
            cfg.canny.t_low *= f;
            cfg.canny.t_high *= f;
            let q = score_image(&img, &cfg).unwrap().q_total;
            assert!((q - q0).abs() < 2.0, "factor {f}: {q0} -> {q}");
        }
    }
}

#[test]
fn fixtures_respond_to_every_family() {
    let cfg = FusionConfig::default();
    for img in fixtures::suite(3, 96, 96) {
        let clean = score_image(&img, &cfg).unwrap();
        for family in Family::ALL {
            for &level in family.levels() {
                let d = score_image(&DistortionSpec::new(family, level, 5).apply(&img).unwrap(), &cfg).unwrap();
                let delta = mmiqa::eval::family_cue(family, &d) - mmiqa::eval::family_cue(family, &clean);
                assert!(delta > 0.0, "{family} {level}: {delta}");
            }
        }
    }
}
