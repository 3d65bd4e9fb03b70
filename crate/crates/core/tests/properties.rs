use gspcd::cda::{detect, difference};
use gspcd::io::{read_raster_auto, read_targets, render_roc, write_raster_auto, write_targets};
use gspcd::eval::{RocRow, RocTable};
use gspcd::stats::{describe, quality};
use gspcd::{with_threads, BinaryMask, CdaParams, Image, Target};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn image(rows: usize, cols: usize, seed: u64) -> Image {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    Image::new(rows, cols, (0..rows * cols).map(|_| r.random_range(0.0f32..1.0)).collect()).unwrap()
}

#[test]
fn raster_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(9);
    // arbitrary finite bit patterns, not just [0, 1)
    let px: Vec<f32> = std::iter::repeat_with(|| f32::from_bits(r.random()))
        .filter(|v: &f32| v.is_finite())
        .take(300 * 200)
        .collect();
    let img = Image::with_spacing(300, 200, px, 1.0).unwrap();
    let p = dir.path().join("r.f32");
    write_raster_auto(&img, &p).unwrap();
    let back = read_raster_auto(&p).unwrap();
    assert_eq!(back.pixel_spacing_m(), 1.0);
    assert!(back.pixels().iter().zip(img.pixels()).all(|(a, b)| a.to_bits() == b.to_bits()));
}

#[test]
fn roc_csv_round_trip() {
    let mut r = ChaCha8Rng::seed_from_u64(10);
    let rows = (0..5)
        .map(|i| {
            let known = 600;
            let detected = r.random_range(0..=known);
            let fa = r.random_range(0..50usize);
            let area = r.random_range(1.0..200.0);
            RocRow {
                c_constant: 2.0 + i as f64,
                lambda: r.random_range(-1.0..1.0),
                detected,
                known,
                pd: detected as f64 / known as f64,
                false_alarms: fa,
                area_km2: area,
                far: fa as f64 / area,
            }
        })
        .collect();
    let table = RocTable { rows };
    let text = render_roc(&table);
    for (line, row) in text.lines().skip(1).zip(&table.rows) {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let want = [
            row.c_constant,
            row.lambda,
            row.detected as f64,
            row.known as f64,
            row.pd,
            row.false_alarms as f64,
            row.area_km2,
            row.far,
        ];
        for (a, b) in f.iter().zip(want) {
            assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
        }
    }
}

#[test]
fn detect_is_thread_independent() {
    let reference = image(120, 90, 1);
    let mut px = image(120, 90, 2).into_pixels();
    for (i, p) in px.iter_mut().enumerate() {
        if (i / 90) % 30 < 8 && (i % 90) % 25 < 8 {
            *p += 2.0;
        }
    }
    let surveillance = Image::new(120, 90, px).unwrap();
    let runs: Vec<_> = [1, 2, 8]
        .iter()
        .map(|&t| with_threads(t, || detect(&surveillance, &reference, &CdaParams::with_c(2.0)).unwrap()).unwrap())
        .collect();
    assert!(!runs[0].is_empty());
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn targets_round_trip(coords in prop::collection::vec((0.0f64..3000.0, 0.0f64..2000.0), 0..30)) {
        let dir = tempfile::tempdir().unwrap();
        let targets: Vec<Target> = coords.iter().enumerate().map(|(i, (r, c))| Target::new(format!("v{i}"), *r, *c)).collect();
        let p = dir.path().join("t.csv");
        write_targets(&targets, &p).unwrap();
        prop_assert_eq!(read_targets(&p).unwrap(), targets);
    }

    #[test]
    fn difference_is_antisymmetric(seed in any::<u64>(), rows in 1usize..20, cols in 1usize..20) {
        let a = image(rows, cols, seed);
        let b = image(rows, cols, seed ^ 0xdead_beef);
        let ab = difference(&a, &b).unwrap();
        let ba = difference(&b, &a).unwrap();
        for (x, y) in ab.image().pixels().iter().zip(ba.image().pixels()) {
            prop_assert_eq!(*x, -*y);
        }
    }

    #[test]
    fn describe_is_affine_equivariant(seed in any::<u64>(), scale in 0.1f64..10.0, shift in -5.0f64..5.0) {
        let x = image(20, 15, seed);
        let y = Image::new(20, 15, x.pixels().iter().map(|&v| (f64::from(v) * scale + shift) as f32).collect()).unwrap();
        let (sx, sy) = (describe(&x).unwrap(), describe(&y).unwrap());
        prop_assert!((sy.average - (scale * sx.average + shift)).abs() < 1e-5 * (1.0 + shift.abs() + scale));
        prop_assert!((sy.std_dev - scale * sx.std_dev).abs() < 1e-5 * scale);
        prop_assert!((sy.skewness - sx.skewness).abs() < 1e-3);
        prop_assert!((sy.kurtosis - sx.kurtosis).abs() < 1e-3);
        prop_assert!(sx.kurtosis >= 1.0);
    }

    #[test]
    fn excluded_pixels_never_count(seed in any::<u64>(), noise in any::<u64>()) {
        let (rows, cols) = (16, 12);
        let x = image(rows, cols, seed);
        let xh = image(rows, cols, seed.wrapping_add(1));
        let mut r = ChaCha8Rng::seed_from_u64(noise);
        let bits: Vec<bool> = (0..rows * cols).map(|_| r.random_bool(0.3)).collect();
        let mask = BinaryMask::new(rows, cols, bits.clone()).unwrap();
        let altered = Image::new(rows, cols, x.pixels().iter().zip(&bits)
            .map(|(&v, &b)| if b { v + 100.0 } else { v }).collect()).unwrap();
        prop_assert_eq!(quality(&x, &xh, &mask).unwrap(), quality(&altered, &xh, &mask).unwrap());
    }

    #[test]
    fn mse_ignores_pixel_order(seed in any::<u64>()) {
        let (rows, cols) = (10, 10);
        let x = image(rows, cols, seed);
        let xh = image(rows, cols, !seed);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let mask: Vec<bool> = (0..100).map(|_| r.random_bool(0.2)).collect();
        let perm: Vec<usize> = (0..100).rev().collect();
        let p = |img: &Image| Image::new(rows, cols, perm.iter().map(|&i| img.pixels()[i]).collect()).unwrap();
        let pm = BinaryMask::new(rows, cols, perm.iter().map(|&i| mask[i]).collect()).unwrap();
        let a = quality(&x, &xh, &BinaryMask::new(rows, cols, mask.clone()).unwrap()).unwrap();
        let b = quality(&p(&x), &p(&xh), &pm).unwrap();
        prop_assert!((a.mse - b.mse).abs() < 1e-12);
        prop_assert_eq!(a.mdae, b.mdae);
    }
}
