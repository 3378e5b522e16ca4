mod support;

use proptest::prelude::*;
use support::oracles::{adaattn_bruteforce, random_image};
use support::fixtures::block_scene;
use toonflow::eval::{cosine_similarity, embed_builtin};
use toonflow::imagecore::{Image, Rng};
use toonflow::stylize::{adaattn_statistics, adaattn_transfer, cartoonize, inst_stylize, InstConfig};

fn assert_matches_oracle(content: &Image, style: &Image, levels: usize, temperature: f64) {
    let stats = adaattn_statistics(content, style, levels, temperature).unwrap();
    let out = adaattn_transfer(content, style, levels, temperature).unwrap();
    let (mean, var, expect) = adaattn_bruteforce(content, style, levels, temperature);
    let diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(diff(&stats.mean, &mean) < 1e-6);
    assert!(diff(&stats.variance, &var) < 1e-6);
    assert!(out.max_abs_diff(&expect) < 1e-6, "{}", out.max_abs_diff(&expect));
}

#[test]
fn adaattn_matches_bruteforce_small() {
    assert_matches_oracle(&random_image(8, 8, 1), &random_image(8, 8, 2), 1, 1.0);
}

#[test]
fn adaattn_matches_bruteforce_up_to_16() {
    let mut rng = Rng::new(77);
    for case in 0..12u64 {
        let dims = |rng: &mut Rng| (4 + (rng.next_u64() % 13) as usize, 4 + (rng.next_u64() % 13) as usize);
        let (cw, ch) = dims(&mut rng);
        let (sw, sh) = dims(&mut rng);
        let levels = 1 + (rng.next_u64() % 2) as usize;
        let temperature = [0.25, 1.0, 4.0][(rng.next_u64() % 3) as usize];
        assert_matches_oracle(&random_image(cw, ch, 2 * case), &random_image(sw, sh, 2 * case + 1), levels, temperature);
    }
    assert_matches_oracle(&random_image(16, 16, 500), &random_image(16, 16, 501), 2, 1.0);
}

#[test]
fn adain_degeneration() {
    for seed in 0..5 {
        let img = random_image(16, 16, seed);
        let out = adaattn_transfer(&img, &img, 3, f64::INFINITY).unwrap();
        assert!(out.max_abs_diff(&img) < 1e-5);
    }
}

#[test]
fn pipeline_output_stays_closer_to_its_content() {
    let cfg = InstConfig::default();
    for i in 0..10u64 {
        let content = block_scene(32, 32, i);
        let style = block_scene(32, 32, 100 + i);
        let unrelated = random_image(32, 32, 900 + i);
        let out = inst_stylize(&content, &style, &cfg, i).unwrap();
        let e = embed_builtin(&out).unwrap();
        let own = cosine_similarity(&e, &embed_builtin(&content).unwrap()).unwrap();
        let other = cosine_similarity(&e, &embed_builtin(&unrelated).unwrap()).unwrap();
        assert!(own > other, "fixture {i}: {own} vs {other}");
    }
}

fn distinct_colors(img: &Image) -> usize {
    let mut v: Vec<[u64; 3]> = img.data().chunks(3).map(|p| [p[0].to_bits(), p[1].to_bits(), p[2].to_bits()]).collect();
    v.sort();
    v.dedup();
    v.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cartoonize_respects_palette_size(seed in any::<u64>(), k in 1usize..40, w in 1usize..20, h in 1usize..20) {
        let img = random_image(w, h, seed);
        prop_assert!(distinct_colors(&cartoonize(&img, k, 0.0).unwrap()) <= k);
    }

    #[test]
    fn inst_stylize_is_repeatable(seed in any::<u64>()) {
        let (c, s) = (random_image(12, 12, seed), random_image(12, 12, seed ^ 1));
        let cfg = InstConfig::default();
        prop_assert_eq!(inst_stylize(&c, &s, &cfg, seed).unwrap(), inst_stylize(&c, &s, &cfg, seed).unwrap());
    }
}
