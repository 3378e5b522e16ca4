use std::path::{Path, PathBuf};
use std::time::Duration;

use serde_json::{json, Map, Value};
use toonflow::denoise::denoise_stage;
use toonflow::eval::{similarity_report, BuiltinEmbedder, Embedder, RemoteEmbedder};
use toonflow::imagecore::{load_image, mse, psnr, save_image, Image, Rng};
use toonflow::stylize::{adaattn_transfer, cartoonize, inst_stylize};
use toonflow::tiler::seam_energy;
use toonflow::video::{
    flicker_index, read_frame_dir, read_y4m, stylize_video, temporal_consistency_ratio, write_frame_dir, write_y4m,
    Chroma, Fps, FrameSequence,
};

use crate::args::*;
use crate::manifest::Manifest;
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

fn required<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    p.as_deref().ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

fn load(path: &Path, m: &mut Manifest) -> Result<Image> {
    m.input(path);
    Ok(load_image(path)?.to_rgb())
}

fn save(img: &Image, path: &Path, m: &mut Manifest) -> Result<()> {
    save_image(img, path)?;
    m.output(path);
    Ok(())
}

fn parse_fps(s: &str) -> Result<Fps> {
    let bad = || CliError::Usage(format!("invalid --fps {s:?}"));
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    Fps::new(n.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?).map_err(|_| bad())
}

fn read_video(path: &Path, frames: &FrameArgs) -> Result<FrameSequence> {
    if path.is_dir() {
        Ok(read_frame_dir(path, &frames.pattern, parse_fps(&frames.fps)?)?)
    } else {
        Ok(read_y4m(path)?)
    }
}

fn is_y4m(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("y4m"))
}

/// Seed for frame `i` of a video run.
pub fn frame_seed(seed: u64, index: usize) -> u64 {
    Rng::fork(seed, index as u64).next_u64()
}

pub fn stylize_image(a: &StylizeImageArgs, m: &mut Manifest) -> Result<()> {
    let content = load(required(&a.content, "content")?, m)?;
    let style = load(required(&a.style, "style")?, m)?;
    let out = inst_stylize(&content, &style, &m.config.inst(), m.config.seed)?;
    save(&out, required(&a.out, "out")?, m)
}

pub fn stylize_video_cmd(a: &StylizeVideoArgs, m: &mut Manifest) -> Result<()> {
    let input = required(&a.input, "input")?;
    m.input(input);
    let seq = read_video(input, &a.frames)?;
    let style = load(required(&a.style, "style")?, m)?;
    let (inst, seed) = (m.config.inst(), m.config.seed);
    let styled = stylize_video(
        &seq,
        |i, frame| inst_stylize(&frame.to_rgb(), &style, &inst, frame_seed(seed, i)),
        m.config.smoothing,
    )?;
    let out = required(&a.out, "out")?;
    if is_y4m(out) {
        let chroma = match a.chroma {
            ChromaArg::C444 => Chroma::C444,
            ChromaArg::C420 => Chroma::C420Jpeg,
        };
        write_y4m(&styled, out, chroma)?;
        m.output(out);
    } else {
        std::fs::create_dir_all(out).map_err(|e| CliError::Io(out.to_path_buf(), e))?;
        for p in write_frame_dir(&styled, out, &a.frames.pattern)? {
            m.output(&p);
        }
    }
    m.metrics = Some(json!({
        "frames": styled.len(),
        "flicker": if styled.len() > 1 { Some(flicker_index(&styled)?) } else { None },
    }));
    Ok(())
}

pub fn cartoonize_cmd(a: &CartoonizeArgs, m: &mut Manifest) -> Result<()> {
    let img = load(required(&a.input, "input")?, m)?;
    let out = cartoonize(&img, m.config.palette_size, m.config.edge_strength)?;
    save(&out, required(&a.out, "out")?, m)
}

pub fn adaattn_cmd(a: &AdaattnArgs, m: &mut Manifest) -> Result<()> {
    let content = load(required(&a.content, "content")?, m)?;
    let style = load(required(&a.style, "style")?, m)?;
    let out = adaattn_transfer(&content, &style, m.config.levels, m.config.temperature)?;
    save(&out, required(&a.out, "out")?, m)
}

pub fn denoise_cmd(a: &DenoiseArgs, m: &mut Manifest) -> Result<()> {
    let img = load(required(&a.input, "input")?, m)?;
    let out = denoise_stage(&img, &m.config.denoise_backend())?;
    save(&out, required(&a.out, "out")?, m)
}

/// Image files (png/ppm) of a directory in name order.
fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let io = |e| CliError::Io(dir.to_path_buf(), e);
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
        if matches!(ext.as_deref(), Some("png" | "ppm")) {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

pub fn evaluate_cmd(a: &EvaluateArgs, m: &mut Manifest) -> Result<()> {
    let mut sets = Vec::new();
    for (p, flag) in [(&a.generated, "generated"), (&a.styles, "styles"), (&a.contents, "contents")] {
        let dir = required(p, flag)?;
        let imgs = list_images(dir)?
            .iter()
            .map(|f| load(f, m))
            .collect::<Result<Vec<_>>>()?;
        sets.push(imgs);
    }
    let embedder: Box<dyn Embedder> = match a.embedder {
        EmbedderArg::Builtin => Box::new(BuiltinEmbedder),
        EmbedderArg::Remote => {
            if !(a.timeout > 0.0 && a.timeout.is_finite()) {
                return Err(CliError::Usage(format!("invalid --timeout {}", a.timeout)));
            }
            Box::new(RemoteEmbedder {
                endpoint: a.endpoint.clone().ok_or_else(|| CliError::Usage("missing --endpoint".into()))?,
                timeout: Duration::from_secs_f64(a.timeout),
            })
        }
    };
    let report = similarity_report(&a.method, &sets[0], &sets[1], &sets[2], embedder.as_ref())?;
    let out = required(&a.out, "out")?;
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    std::fs::write(out, text + "\n").map_err(|e| CliError::Io(out.to_path_buf(), e))?;
    m.output(out);
    if let Some(t) = &a.table {
        std::fs::write(t, report.render_table()).map_err(|e| CliError::Io(t.clone(), e))?;
        m.output(t);
    }
    m.metrics = Some(serde_json::to_value(&report.rows).expect("rows serialize"));
    Ok(())
}

pub fn metrics_cmd(a: &MetricsArgs, m: &mut Manifest) -> Result<()> {
    if a.video.is_none() && a.image.is_none() {
        return Err(CliError::Usage("metrics needs --video or --image".into()));
    }
    let mut out = Map::new();
    if let Some(v) = &a.video {
        m.input(v);
        let seq = read_video(v, &a.frames)?;
        out.insert("frames".into(), json!(seq.len()));
        if a.flicker {
            out.insert("flicker".into(), json!(flicker_index(&seq)?));
        }
        if let Some(src) = &a.source {
            m.input(src);
            let source = read_video(src, &a.frames)?;
            out.insert("temporal_consistency_ratio".into(), json!(temporal_consistency_ratio(&seq, &source)?));
        }
    }
    if let Some(i) = &a.image {
        let img = load(i, m)?;
        if let Some(r) = &a.reference {
            let reference = load(r, m)?;
            out.insert("mse".into(), json!(mse(&img, &reference)?));
            let p = psnr(&img, &reference)?;
            out.insert("psnr_db".into(), if p.is_finite() { json!(p) } else { json!("inf") });
        }
        if let Some(pitch) = a.seam_pitch {
            out.insert("seam_energy".into(), json!(seam_energy(&img, pitch)?));
        }
    }
    m.metrics = Some(Value::Object(out));
    Ok(())
}
