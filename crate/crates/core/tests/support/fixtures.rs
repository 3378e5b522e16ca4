//! Synthetic inputs shared by integration and acceptance tests.
#![allow(dead_code)]

use toonflow::imagecore::{Image, Rng};
use toonflow::video::{Fps, FrameSequence};

/// Structured scene: colored blocks of random size plus a diagonal ramp.
pub fn block_scene(w: usize, h: usize, seed: u64) -> Image {
    let mut rng = Rng::new(seed);
    let cols: Vec<[f64; 3]> = (0..6).map(|_| [rng.next_f64(), rng.next_f64(), rng.next_f64()]).collect();
    let (bx, by) = (4 + rng.next_u64() % 8, 4 + rng.next_u64() % 8);
    Image::from_fn(w, h, 3, |x, y, c| {
        let k = ((x as u64 / bx) * 3 + (y as u64 / by)) % 6;
        0.8 * cols[k as usize][c] + 0.2 * (x + y) as f64 / (w + h - 2).max(1) as f64
    })
    .unwrap()
}

fn sequence(n: usize, f: impl Fn(usize) -> Image) -> FrameSequence {
    FrameSequence::new((0..n).map(f).collect(), Fps::default()).unwrap()
}

/// Five slowly changing 20-frame clips: gray fade, cross-dissolve between
/// two scenes, a panning gradient, a brightening scene and a drifting
/// square over a dissolve.
pub fn slow_video_suite() -> Vec<FrameSequence> {
    const N: usize = 20;
    let t = |i: usize| i as f64 / (N - 1) as f64;
    let (a, b) = (block_scene(16, 16, 1), block_scene(16, 16, 2));
    let lerp = |x: &Image, y: &Image, s: f64| {
        Image::new(16, 16, 3, x.data().iter().zip(y.data()).map(|(p, q)| p + s * (q - p)).collect()).unwrap()
    };
    vec![
        sequence(N, |i| Image::filled(16, 16, 3, 0.2 + 0.6 * t(i)).unwrap()),
        sequence(N, |i| lerp(&a, &b, t(i))),
        sequence(N, |i| {
            Image::from_fn(16, 16, 3, |x, y, c| ((x + i) % 16) as f64 / 20.0 + 0.1 * c as f64 + 0.01 * y as f64).unwrap()
        }),
        sequence(N, |i| a.map(|v| v * (0.5 + 0.5 * t(i))).unwrap()),
        sequence(N, |i| {
            let base = lerp(&b, &a, t(i));
            Image::from_fn(16, 16, 3, |x, y, c| {
                if (i / 4..i / 4 + 5).contains(&x) && (4..9).contains(&y) { 0.9 } else { base.get(x, y, c) }
            })
            .unwrap()
        }),
    ]
}
