mod common;

use mmiqa::cues::{canny, CannyParams};
use mmiqa::imgops;
use rand::Rng;

#[test]
fn raster_ops_and_cues_match_brute_force() {
    let mut failures = Vec::new();
    for (i, img) in common::oracle_images().iter().enumerate() {
        for m in common::oracle_mismatches(img) {
            failures.push(format!("image {i}: {m}"));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn canny_maps_match_pixelwise() {
    let mut r = common::rng(91);
    for _ in 0..30 {
        let img = common::random_smooth(&mut r, 24);
        let g = common::gray_image(&img);
        let got = canny(&g, &CannyParams::default()).unwrap();
        let want = common::canny(g.pixels(), g.width(), g.height(), 100.0, 200.0);
        assert_eq!(got, want);
    }
}

#[test]
fn canny_matches_with_other_thresholds() {
    let mut r = common::rng(92);
    for (low, high) in [(20.0, 60.0), (0.0, 0.0), (150.0, 150.0)] {
        let img = common::random_smooth(&mut r, 20);
        let g = common::gray_image(&img);
        let got = canny(&g, &CannyParams { t_low: low, t_high: high }).unwrap();
        assert_eq!(got, common::canny(g.pixels(), g.width(), g.height(), low, high));
    }
}

#[test]
fn dft_of_non_power_of_two_shapes() {
    let mut r = common::rng(93);
    for (w, h) in [(3, 3), (7, 5), (11, 13), (16, 9), (17, 19)] {
        let y: Vec<u8> = (0..w * h).map(|_| r.random()).collect();
        let g = mmiqa::GrayImage::new(w, h, y.clone()).unwrap();
        let got = imgops::dft_magnitude(&g);
        let want = common::dft_magnitude(&y, w, h);
        for (a, b) in got.values().iter().zip(&want) {
            assert!(common::rel_close(*a, *b, 1e-9), "{w}x{h}: {a} vs {b}");
        }
    }
}
