//! The reversible decoupling function f(v) = <motion, residual>: exhaustive
//! block-matching motion estimation, residual extraction, motion-compensated
//! decoding, and the simpler frame-difference mode.
//!
//! Encoding is open-loop: frame n is predicted from the original frame n-1.
//! Decoding warps the previously *decoded* frame, so with verbatim residuals
//! the round trip is bit-exact and with lossy residuals error drifts.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::Error;
use crate::vidcore::{FrameView, VideoTensor};
use crate::Result;

pub const DVC1_MAGIC: &[u8; 4] = b"DVC1";
pub const DVF1_MAGIC: &[u8; 4] = b"DVF1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodecMode {
    MotionResidual,
    FrameDifference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodecConfig {
    /// Macroblock size B; must divide the clip height and width.
    pub block: usize,
    /// Search range R; candidate offsets span [-R, R] on each axis.
    pub search: i32,
    pub mode: CodecMode,
}

impl Default for CodecConfig {
    fn default() -> Self {
        CodecConfig {
            block: 16,
            search: 8,
            mode: CodecMode::MotionResidual,
        }
    }
}

impl CodecConfig {
    pub fn validate_for(&self, height: usize, width: usize) -> Result<()> {
        if self.block == 0 {
            return Err(Error::Config("block size must be positive".into()));
        }
        if self.search < 0 {
            return Err(Error::Config("search range must be >= 0".into()));
        }
        if height % self.block != 0 || width % self.block != 0 {
            return Err(Error::Config(format!(
                "block size {} must divide frame dims {}x{}",
                self.block, height, width
            )));
        }
        Ok(())
    }
}

/// Per-frame motion grid of (dy, dx) vectors, one per macroblock. The block
/// at grid position p in the current frame matches reference pixels at
/// p*B + (dy, dx).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotionField {
    pub rows: usize,
    pub cols: usize,
    vecs: Vec<(i16, i16)>,
}

impl MotionField {
    pub fn new(rows: usize, cols: usize, vecs: Vec<(i16, i16)>) -> Result<Self> {
        if vecs.len() != rows * cols {
            return Err(Error::Shape(format!(
                "motion grid {}x{} needs {} vectors, got {}",
                rows,
                cols,
                rows * cols,
                vecs.len()
            )));
        }
        Ok(MotionField { rows, cols, vecs })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        MotionField {
            rows,
            cols,
            vecs: vec![(0, 0); rows * cols],
        }
    }

    #[inline]
    pub fn get(&self, by: usize, bx: usize) -> (i16, i16) {
        self.vecs[by * self.cols + bx]
    }

    #[inline]
    pub fn set(&mut self, by: usize, bx: usize, v: (i16, i16)) {
        self.vecs[by * self.cols + bx] = v;
    }

    pub fn vectors(&self) -> &[(i16, i16)] {
        &self.vecs
    }

    pub fn check_range(&self, search: i32) -> Result<()> {
        for &(dy, dx) in &self.vecs {
            if i32::from(dy).abs() > search || i32::from(dx).abs() > search {
                return Err(Error::Corrupt(format!(
                    "motion vector ({dy},{dx}) exceeds search range {search}"
                )));
            }
        }
        Ok(())
    }
}

/// Signed 16-bit residual plane, channels x height x width, values in
/// [-255, 255].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualFrame {
    pub channels: usize,
    pub height: usize,
    pub width: usize,
    pub data: Vec<i16>,
}

impl ResidualFrame {
    pub fn zeros(channels: usize, height: usize, width: usize) -> Self {
        ResidualFrame {
            channels,
            height,
            width,
            data: vec![0i16; channels * height * width],
        }
    }

    #[inline]
    pub fn get(&self, c: usize, y: usize, x: usize) -> i16 {
        self.data[(c * self.height + y) * self.width + x]
    }
}

/// I-frame plus per-frame motion fields and residuals; decoding reproduces
/// the source clip bit-exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoupledClip {
    pub channels: usize,
    pub height: usize,
    pub width: usize,
    pub block: usize,
    pub search: i32,
    pub iframe: Vec<u8>,
    pub motions: Vec<MotionField>,
    pub residuals: Vec<ResidualFrame>,
}

impl DecoupledClip {
    pub fn frames(&self) -> usize {
        self.motions.len() + 1
    }
}

#[inline]
fn clamp_coord(v: i32, max: usize) -> usize {
    v.clamp(0, max as i32 - 1) as usize
}

/// Clamp-to-edge sample from one channel plane.
#[inline]
fn sample_clamped(plane: &[u8], h: usize, w: usize, y: i32, x: i32) -> u8 {
    plane[clamp_coord(y, h) * w + clamp_coord(x, w)]
}

/// Candidate offsets in tie-break order: (|dy|+|dx|, dy, dx) ascending. The
/// search keeps the first strict minimum, so enumerating in this order makes
/// the tie-break implicit.
fn candidate_offsets(search: i32) -> Vec<(i32, i32)> {
    let mut cands = Vec::with_capacity(((2 * search + 1) * (2 * search + 1)) as usize);
    for dy in -search..=search {
        for dx in -search..=search {
            cands.push((dy, dx));
        }
    }
    cands.sort_by_key(|&(dy, dx)| (dy.abs() + dx.abs(), dy, dx));
    cands
}

/// SAD between a block of `cur` and a clamp-sampled block of `reference`,
/// summed over all channels, aborting once `limit` is reached.
#[allow(clippy::too_many_arguments)]
fn block_sad_limited(
    cur: &FrameView<'_>,
    reference: &FrameView<'_>,
    y0: usize,
    x0: usize,
    block: usize,
    dy: i32,
    dx: i32,
    limit: u64,
) -> u64 {
    let (h, w) = (cur.height, cur.width);
    let mut sad: u64 = 0;
    let interior = {
        let ty = y0 as i32 + dy;
        let tx = x0 as i32 + dx;
        ty >= 0 && tx >= 0 && (ty + block as i32) <= h as i32 && (tx + block as i32) <= w as i32
    };
    for c in 0..cur.channels {
        let cur_plane = &cur.data[c * h * w..(c + 1) * h * w];
        let ref_plane = &reference.data[c * h * w..(c + 1) * h * w];
        if interior {
            // Fast path: whole candidate window is in-bounds.
            let ty0 = (y0 as i32 + dy) as usize;
            let tx0 = (x0 as i32 + dx) as usize;
            for j in 0..block {
                let crow = &cur_plane[(y0 + j) * w + x0..(y0 + j) * w + x0 + block];
                let rrow = &ref_plane[(ty0 + j) * w + tx0..(ty0 + j) * w + tx0 + block];
                let mut row_sum: u32 = 0;
                for (a, b) in crow.iter().zip(rrow.iter()) {
                    row_sum += u32::from(a.abs_diff(*b));
                }
                sad += u64::from(row_sum);
                if sad >= limit {
                    return sad;
                }
            }
        } else {
            for j in 0..block {
                let y = y0 + j;
                let mut row_sum: u32 = 0;
                for k in 0..block {
                    let a = cur_plane[y * w + x0 + k];
                    let b = sample_clamped(ref_plane, h, w, y as i32 + dy, (x0 + k) as i32 + dx);
                    row_sum += u32::from(a.abs_diff(b));
                }
                sad += u64::from(row_sum);
                if sad >= limit {
                    return sad;
                }
            }
        }
    }
    sad
}

/// Exhaustive block-matching motion estimation for one frame pair. Every
/// returned vector attains the minimum SAD over the full (2R+1)^2 window,
/// ties broken by (|dy|+|dx|, dy, dx) ascending. Also returns the residual
/// (current minus motion-compensated reference).
pub fn estimate_block_motion(
    cur: &FrameView<'_>,
    reference: &FrameView<'_>,
    cfg: &CodecConfig,
) -> Result<(MotionField, ResidualFrame)> {
    if !cur.same_shape(reference) {
        return Err(Error::Shape(format!(
            "current {}x{}x{} vs reference {}x{}x{}",
            cur.channels, cur.height, cur.width, reference.channels, reference.height,
            reference.width
        )));
    }
    cfg.validate_for(cur.height, cur.width)?;

    let (h, w, b) = (cur.height, cur.width, cfg.block);
    let rows = h / b;
    let cols = w / b;
    let cands = candidate_offsets(cfg.search);

    let mut field = MotionField::zeros(rows, cols);
    let mut residual = ResidualFrame::zeros(cur.channels, h, w);

    for by in 0..rows {
        for bx in 0..cols {
            let y0 = by * b;
            let x0 = bx * b;
            let mut best = (0i32, 0i32);
            let mut best_sad = u64::MAX;
            for &(dy, dx) in &cands {
                let sad = block_sad_limited(cur, reference, y0, x0, b, dy, dx, best_sad);
                if sad < best_sad {
                    best_sad = sad;
                    best = (dy, dx);
                    if sad == 0 {
                        break;
                    }
                }
            }
            field.set(by, bx, (best.0 as i16, best.1 as i16));

            for c in 0..cur.channels {
                let cur_plane = &cur.data[c * h * w..(c + 1) * h * w];
                let ref_plane = &reference.data[c * h * w..(c + 1) * h * w];
                for j in 0..b {
                    for k in 0..b {
                        let a = i16::from(cur_plane[(y0 + j) * w + x0 + k]);
                        let p = i16::from(sample_clamped(
                            ref_plane,
                            h,
                            w,
                            (y0 + j) as i32 + best.0,
                            (x0 + k) as i32 + best.1,
                        ));
                        residual.data[(c * h + y0 + j) * w + x0 + k] = a - p;
                    }
                }
            }
        }
    }
    Ok((field, residual))
}

/// Warps `reference` by the motion field (clamp-to-edge sampling), producing
/// the prediction frame used by both encode and decode.
pub fn motion_compensate(
    reference: &FrameView<'_>,
    field: &MotionField,
    block: usize,
) -> Vec<u8> {
    let (c, h, w) = (reference.channels, reference.height, reference.width);
    let mut out = vec![0u8; c * h * w];
    for by in 0..field.rows {
        for bx in 0..field.cols {
            let (dy, dx) = field.get(by, bx);
            let y0 = by * block;
            let x0 = bx * block;
            for ch in 0..c {
                let ref_plane = &reference.data[ch * h * w..(ch + 1) * h * w];
                for j in 0..block {
                    for k in 0..block {
                        out[(ch * h + y0 + j) * w + x0 + k] = sample_clamped(
                            ref_plane,
                            h,
                            w,
                            (y0 + j) as i32 + i32::from(dy),
                            (x0 + k) as i32 + i32::from(dx),
                        );
                    }
                }
            }
        }
    }
    out
}

/// Open-loop encode: every frame is predicted from the original previous
/// frame; the first frame is stored verbatim.
pub fn encode_clip(v: &VideoTensor, cfg: &CodecConfig) -> Result<DecoupledClip> {
    if v.frames() < 2 {
        return Err(Error::Config(
            "clip has fewer than 2 frames; nothing to predict".into(),
        ));
    }
    cfg.validate_for(v.height(), v.width())?;

    let mut motions = Vec::with_capacity(v.frames() - 1);
    let mut residuals = Vec::with_capacity(v.frames() - 1);
    for n in 1..v.frames() {
        let (field, residual) = estimate_block_motion(&v.frame(n), &v.frame(n - 1), cfg)?;
        motions.push(field);
        residuals.push(residual);
    }

    Ok(DecoupledClip {
        channels: v.channels(),
        height: v.height(),
        width: v.width(),
        block: cfg.block,
        search: cfg.search,
        iframe: v.frame(0).data.to_vec(),
        motions,
        residuals,
    })
}

/// Motion-compensated decode: frame n = clamp(warp(frame n-1, motion) +
/// residual). Exact inverse of [`encode_clip`] on its outputs.
pub fn decode_clip(d: &DecoupledClip) -> Result<VideoTensor> {
    if d.motions.len() != d.residuals.len() {
        return Err(Error::Corrupt(format!(
            "{} motion fields vs {} residuals",
            d.motions.len(),
            d.residuals.len()
        )));
    }
    let (c, h, w) = (d.channels, d.height, d.width);
    if d.iframe.len() != c * h * w {
        return Err(Error::Corrupt("iframe payload has wrong length".into()));
    }

    let mut frames: Vec<Vec<u8>> = Vec::with_capacity(d.frames());
    frames.push(d.iframe.clone());
    for (field, residual) in d.motions.iter().zip(&d.residuals) {
        field.check_range(d.search)?;
        if residual.channels != c || residual.height != h || residual.width != w {
            return Err(Error::Shape("residual plane shape mismatch".into()));
        }
        let prev = frames.last().unwrap();
        let prev_view = FrameView {
            channels: c,
            height: h,
            width: w,
            data: prev,
        };
        let mut pred = motion_compensate(&prev_view, field, d.block);
        for (p, r) in pred.iter_mut().zip(&residual.data) {
            *p = (i32::from(*p) + i32::from(*r)).clamp(0, 255) as u8;
        }
        frames.push(pred);
    }
    VideoTensor::from_frames(&frames, c, h, w)
}

// ---------------------------------------------------------------------------
// Frame-difference mode
// ---------------------------------------------------------------------------

/// First frame plus per-frame differences v[n] - v[n-1] in [-255, 255].
pub fn frame_difference_encode(v: &VideoTensor) -> Result<(Vec<u8>, Vec<ResidualFrame>)> {
    if v.frames() < 2 {
        return Err(Error::Config(
            "clip has fewer than 2 frames; nothing to difference".into(),
        ));
    }
    let fl = v.frame_len();
    let mut diffs = Vec::with_capacity(v.frames() - 1);
    for n in 1..v.frames() {
        let cur = v.frame(n).data;
        let prev = v.frame(n - 1).data;
        let mut d = ResidualFrame::zeros(v.channels(), v.height(), v.width());
        for i in 0..fl {
            d.data[i] = i16::from(cur[i]) - i16::from(prev[i]);
        }
        diffs.push(d);
    }
    Ok((v.frame(0).data.to_vec(), diffs))
}

/// Cumulative-sum inverse of [`frame_difference_encode`]. Out-of-range sums
/// (possible only with synthesized differences) are clamped to [0, 255].
pub fn frame_difference_decode(
    first: &[u8],
    diffs: &[ResidualFrame],
    channels: usize,
    height: usize,
    width: usize,
) -> Result<VideoTensor> {
    if first.len() != channels * height * width {
        return Err(Error::Shape("first frame has wrong length".into()));
    }
    let mut frames = Vec::with_capacity(diffs.len() + 1);
    frames.push(first.to_vec());
    for d in diffs {
        if d.channels != channels || d.height != height || d.width != width {
            return Err(Error::Shape("difference plane shape mismatch".into()));
        }
        let prev = frames.last().unwrap();
        let mut next = vec![0u8; prev.len()];
        for i in 0..prev.len() {
            next[i] = (i32::from(prev[i]) + i32::from(d.data[i])).clamp(0, 255) as u8;
        }
        frames.push(next);
    }
    VideoTensor::from_frames(&frames, channels, height, width)
}

// ---------------------------------------------------------------------------
// Containers: DVC1 (motion-residual) and DVF1 (frame-difference variant)
// ---------------------------------------------------------------------------

/// DVC1 layout (little-endian): magic "DVC1"; u32 K, C, H, W, B, R; iframe
/// payload (C*H*W u8); then per predicted frame the motion grid as i16
/// (dy, dx) pairs in row-major order followed by the residual plane as i16
/// channel-planar samples.
pub fn save_decoupled(d: &DecoupledClip, path: &Path) -> Result<()> {
    let mut buf: Vec<u8> = Vec::new();
    buf.extend_from_slice(DVC1_MAGIC);
    for v in [
        d.frames() as u32,
        d.channels as u32,
        d.height as u32,
        d.width as u32,
        d.block as u32,
        d.search as u32,
    ] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    buf.extend_from_slice(&d.iframe);
    for (field, residual) in d.motions.iter().zip(&d.residuals) {
        for &(dy, dx) in field.vectors() {
            buf.extend_from_slice(&dy.to_le_bytes());
            buf.extend_from_slice(&dx.to_le_bytes());
        }
        for &r in &residual.data {
            buf.extend_from_slice(&r.to_le_bytes());
        }
    }
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&buf).map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn load_decoupled(path: &Path) -> Result<DecoupledClip> {
    let mut raw = Vec::new();
    fs::File::open(path)
        .map_err(|e| Error::io(path, e))?
        .read_to_end(&mut raw)
        .map_err(|e| Error::io(path, e))?;
    if raw.len() < 28 {
        return Err(Error::Format(format!(
            "{}: shorter than the DVC1 header",
            path.display()
        )));
    }
    if &raw[0..4] != DVC1_MAGIC {
        return Err(Error::Format(format!(
            "{}: bad magic, expected \"DVC1\"",
            path.display()
        )));
    }
    let word = |i: usize| u32::from_le_bytes(raw[4 + 4 * i..8 + 4 * i].try_into().unwrap()) as usize;
    let (k, c, h, w, b, r) = (word(0), word(1), word(2), word(3), word(4), word(5));
    if k < 2 || b == 0 || h % b != 0 || w % b != 0 {
        return Err(Error::Corrupt(format!(
            "{}: invalid header K={k} B={b} H={h} W={w}",
            path.display()
        )));
    }
    let rows = h / b;
    let cols = w / b;
    let iframe_len = c * h * w;
    let per_frame = rows * cols * 4 + c * h * w * 2;
    let expect = 28 + iframe_len + (k - 1) * per_frame;
    if raw.len() != expect {
        return Err(Error::Corrupt(format!(
            "{}: expected {expect} bytes for the declared shape, found {}",
            path.display(),
            raw.len()
        )));
    }

    let iframe = raw[28..28 + iframe_len].to_vec();
    let mut pos = 28 + iframe_len;
    let i16_at = |p: usize| i16::from_le_bytes(raw[p..p + 2].try_into().unwrap());
    let mut motions = Vec::with_capacity(k - 1);
    let mut residuals = Vec::with_capacity(k - 1);
    for _ in 1..k {
        let mut vecs = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            let dy = i16_at(pos);
            let dx = i16_at(pos + 2);
            pos += 4;
            vecs.push((dy, dx));
        }
        let field = MotionField::new(rows, cols, vecs)?;
        field.check_range(r as i32)?;
        motions.push(field);

        let mut res = ResidualFrame::zeros(c, h, w);
        for v in res.data.iter_mut() {
            *v = i16_at(pos);
            pos += 2;
        }
        residuals.push(res);
    }

    Ok(DecoupledClip {
        channels: c,
        height: h,
        width: w,
        block: b,
        search: r as i32,
        iframe,
        motions,
        residuals,
    })
}

/// DVF1 layout (little-endian): magic "DVF1"; u32 K, C, H, W; first frame
/// (C*H*W u8); then K-1 difference planes as i16 channel-planar samples.
pub fn save_differences(
    first: &[u8],
    diffs: &[ResidualFrame],
    channels: usize,
    height: usize,
    width: usize,
    path: &Path,
) -> Result<()> {
    let mut buf: Vec<u8> = Vec::new();
    buf.extend_from_slice(DVF1_MAGIC);
    for v in [
        (diffs.len() + 1) as u32,
        channels as u32,
        height as u32,
        width as u32,
    ] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    buf.extend_from_slice(first);
    for d in diffs {
        for &s in &d.data {
            buf.extend_from_slice(&s.to_le_bytes());
        }
    }
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&buf).map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn load_differences(path: &Path) -> Result<(Vec<u8>, Vec<ResidualFrame>, usize, usize, usize)> {
    let mut raw = Vec::new();
    fs::File::open(path)
        .map_err(|e| Error::io(path, e))?
        .read_to_end(&mut raw)
        .map_err(|e| Error::io(path, e))?;
    if raw.len() < 20 || &raw[0..4] != DVF1_MAGIC {
        return Err(Error::Format(format!(
            "{}: not a DVF1 container",
            path.display()
        )));
    }
    let word = |i: usize| u32::from_le_bytes(raw[4 + 4 * i..8 + 4 * i].try_into().unwrap()) as usize;
    let (k, c, h, w) = (word(0), word(1), word(2), word(3));
    let plane = c * h * w;
    let expect = 20 + plane + (k - 1) * plane * 2;
    if k < 2 || raw.len() != expect {
        return Err(Error::Corrupt(format!(
            "{}: expected {expect} bytes, found {}",
            path.display(),
            raw.len()
        )));
    }
    let first = raw[20..20 + plane].to_vec();
    let mut pos = 20 + plane;
    let mut diffs = Vec::with_capacity(k - 1);
    for _ in 1..k {
        let mut d = ResidualFrame::zeros(c, h, w);
        for v in d.data.iter_mut() {
            *v = i16::from_le_bytes(raw[pos..pos + 2].try_into().unwrap());
            pos += 2;
        }
        diffs.push(d);
    }
    Ok((first, diffs, c, h, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use crate::vidcore::SynthConfig;
    use rand::{Rng, RngCore};

    fn random_clip(k: usize, c: usize, h: usize, w: usize, seed: u64) -> VideoTensor {
        let mut rng = substream(seed, "mcodec-clip", 0);
        let mut data = vec![0u8; k * c * h * w];
        rng.fill_bytes(&mut data);
        VideoTensor::new(k, c, h, w, data).unwrap()
    }

    /// Independent brute-force oracle: full scan in tie-break order without
    /// any early exit, computed straight from the definition.
    fn oracle_best_vector(
        cur: &FrameView<'_>,
        reference: &FrameView<'_>,
        y0: usize,
        x0: usize,
        block: usize,
        search: i32,
    ) -> ((i32, i32), u64) {
        let mut best: Option<((i32, i32), u64)> = None;
        for dy in -search..=search {
            for dx in -search..=search {
                let mut sad: u64 = 0;
                for c in 0..cur.channels {
                    for j in 0..block {
                        for k in 0..block {
                            let a = cur.get(c, y0 + j, x0 + k);
                            let yy = (y0 + j) as i32 + dy;
                            let xx = (x0 + k) as i32 + dx;
                            let b = cur_ref_get(reference, c, yy, xx);
                            sad += u64::from(a.abs_diff(b));
                        }
                    }
                }
                let key = (sad, dy.abs() + dx.abs(), dy, dx);
                let better = match best {
                    None => true,
                    Some(((bdy, bdx), bsad)) => {
                        key < (bsad, bdy.abs() + bdx.abs(), bdy, bdx)
                    }
                };
                if better {
                    best = Some(((dy, dx), sad));
                }
            }
        }
        best.unwrap()
    }

    fn cur_ref_get(f: &FrameView<'_>, c: usize, y: i32, x: i32) -> u8 {
        let yy = y.clamp(0, f.height as i32 - 1) as usize;
        let xx = x.clamp(0, f.width as i32 - 1) as usize;
        f.get(c, yy, xx)
    }

    #[test]
    fn identical_frames_give_zero_vectors_and_residual() {
        let v = random_clip(2, 3, 32, 32, 1);
        let cfg = CodecConfig::default();
        let (field, residual) = estimate_block_motion(&v.frame(0), &v.frame(0), &cfg).unwrap();
        assert!(field.vectors().iter().all(|&m| m == (0, 0)));
        assert!(residual.data.iter().all(|&r| r == 0));
    }

    #[test]
    fn pure_translation_is_detected_with_zero_residual() {
        // cur(y, x) = ref(y, x-3): content moved 3 px right; blocks clear of
        // the left border must report (0, -3).
        let reference = random_clip(1, 3, 32, 32, 2);
        let (c, h, w) = (3, 32, 32);
        let mut cur = vec![0u8; c * h * w];
        for ch in 0..c {
            for y in 0..h {
                for x in 0..w {
                    let sx = (x as i32 - 3).max(0) as usize;
                    cur[(ch * h + y) * w + x] = reference.frame(0).get(ch, y, sx);
                }
            }
        }
        let cur = VideoTensor::new(1, c, h, w, cur).unwrap();
        let cfg = CodecConfig::default();
        let (field, residual) =
            estimate_block_motion(&cur.frame(0), &reference.frame(0), &cfg).unwrap();
        for by in 0..field.rows {
            for bx in 1..field.cols {
                assert_eq!(field.get(by, bx), (0, -3), "block ({by},{bx})");
                for j in 0..16 {
                    for k in 0..16 {
                        for ch in 0..c {
                            assert_eq!(residual.get(ch, by * 16 + j, bx * 16 + k), 0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn vectors_match_brute_force_oracle() {
        let cfg = CodecConfig {
            block: 8,
            search: 4,
            mode: CodecMode::MotionResidual,
        };
        for seed in 0..4u64 {
            let a = random_clip(1, 3, 32, 32, 100 + seed);
            let b = random_clip(1, 3, 32, 32, 200 + seed);
            let (field, _) = estimate_block_motion(&a.frame(0), &b.frame(0), &cfg).unwrap();
            for by in 0..field.rows {
                for bx in 0..field.cols {
                    let ((ody, odx), _) =
                        oracle_best_vector(&a.frame(0), &b.frame(0), by * 8, bx * 8, 8, 4);
                    let got = field.get(by, bx);
                    assert_eq!((i32::from(got.0), i32::from(got.1)), (ody, odx));
                }
            }
        }
    }

    #[test]
    fn saturated_translation_still_decodes_exactly() {
        // 12 px shift with R=8: vectors saturate, residual nonzero, but the
        // round trip stays bit-exact.
        let reference = random_clip(1, 3, 48, 48, 7);
        let (c, h, w) = (3, 48, 48);
        let mut cur = vec![0u8; c * h * w];
        for ch in 0..c {
            for y in 0..h {
                for x in 0..w {
                    let sx = (x as i32 - 12).max(0) as usize;
                    cur[(ch * h + y) * w + x] = reference.frame(0).get(ch, y, sx);
                }
            }
        }
        let clip =
            VideoTensor::new(2, c, h, w, [reference.frame(0).data.to_vec(), cur].concat())
                .unwrap();
        let cfg = CodecConfig::default();
        let enc = encode_clip(&clip, &cfg).unwrap();
        assert!(enc.motions[0]
            .vectors()
            .iter()
            .any(|&(_, dx)| i32::from(dx).abs() == 8));
        assert!(enc.residuals[0].data.iter().any(|&r| r != 0));
        assert_eq!(decode_clip(&enc).unwrap(), clip);
    }

    #[test]
    fn static_clip_encodes_to_zero_fields() {
        let frame = random_clip(1, 3, 32, 32, 3).frame(0).data.to_vec();
        let frames: Vec<Vec<u8>> = (0..16).map(|_| frame.clone()).collect();
        let v = VideoTensor::from_frames(&frames, 3, 32, 32).unwrap();
        let enc = encode_clip(&v, &CodecConfig::default()).unwrap();
        assert_eq!(enc.motions.len(), 15);
        for (m, r) in enc.motions.iter().zip(&enc.residuals) {
            assert!(m.vectors().iter().all(|&v| v == (0, 0)));
            assert!(r.data.iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn encode_decode_round_trip_random_clips() {
        for seed in 0..8u64 {
            let v = random_clip(4, 3, 32, 32, 50 + seed);
            let enc = encode_clip(&v, &CodecConfig::default()).unwrap();
            assert_eq!(decode_clip(&enc).unwrap(), v);
        }
    }

    #[test]
    fn motion_grid_shape_matches_block_arithmetic() {
        let v = random_clip(16, 3, 32, 32, 4);
        let enc = encode_clip(&v, &CodecConfig::default()).unwrap();
        assert_eq!(enc.motions.len(), 15);
        for m in &enc.motions {
            assert_eq!((m.rows, m.cols), (2, 2));
        }
        let total: usize = enc.motions.iter().map(|m| m.vectors().len() * 2).sum();
        assert_eq!(total, 15 * 2 * 2 * 2);
    }

    #[test]
    fn single_frame_clip_is_rejected() {
        let v = random_clip(1, 3, 32, 32, 5);
        assert!(matches!(
            encode_clip(&v, &CodecConfig::default()),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn synthetic_motion_clip_round_trips() {
        let cfg = SynthConfig {
            speed: 3,
            direction: 5,
            seed: 21,
            ..SynthConfig::default()
        };
        let (v, _) = crate::vidcore::gen_synthetic(&cfg).unwrap();
        let enc = encode_clip(&v, &CodecConfig::default()).unwrap();
        assert_eq!(decode_clip(&enc).unwrap(), v);
    }

    #[test]
    fn frame_differences_round_trip_and_ramp() {
        let v = random_clip(6, 3, 16, 16, 6);
        let (first, diffs) = frame_difference_encode(&v).unwrap();
        let back = frame_difference_decode(&first, &diffs, 3, 16, 16).unwrap();
        assert_eq!(back, v);

        // Brightness ramp: +1 gray level per frame everywhere.
        let mut frames = Vec::new();
        for n in 0..5u8 {
            frames.push(vec![100 + n; 3 * 16 * 16]);
        }
        let ramp = VideoTensor::from_frames(&frames, 3, 16, 16).unwrap();
        let (_, diffs) = frame_difference_encode(&ramp).unwrap();
        for d in &diffs {
            assert!(d.data.iter().all(|&v| v == 1));
        }

        let static_clip = VideoTensor::zeros(4, 3, 8, 8).unwrap();
        let (_, zdiffs) = frame_difference_encode(&static_clip).unwrap();
        assert!(zdiffs.iter().all(|d| d.data.iter().all(|&v| v == 0)));
    }

    #[test]
    fn dvc1_round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("clip.dvc");
        let v = random_clip(3, 3, 32, 32, 8);
        let enc = encode_clip(&v, &CodecConfig::default()).unwrap();
        save_decoupled(&enc, &path).unwrap();
        let back = load_decoupled(&path).unwrap();
        assert_eq!(back, enc);
        assert_eq!(decode_clip(&back).unwrap(), v);

        let raw = std::fs::read(&path).unwrap();
        std::fs::write(&path, &raw[..raw.len() - 3]).unwrap();
        assert!(matches!(load_decoupled(&path), Err(Error::Corrupt(_))));
    }

    #[test]
    fn out_of_range_vector_is_corruption() {
        let v = random_clip(2, 1, 16, 16, 9);
        let mut enc = encode_clip(&v, &CodecConfig::default()).unwrap();
        enc.motions[0].set(0, 0, (12, 0)); // exceeds R=8
        assert!(matches!(decode_clip(&enc), Err(Error::Corrupt(_))));
    }

    #[test]
    fn dvf1_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("clip.dvf");
        let v = random_clip(4, 3, 16, 16, 10);
        let (first, diffs) = frame_difference_encode(&v).unwrap();
        save_differences(&first, &diffs, 3, 16, 16, &path).unwrap();
        let (f2, d2, c, h, w) = load_differences(&path).unwrap();
        assert_eq!(frame_difference_decode(&f2, &d2, c, h, w).unwrap(), v);
    }

    #[test]
    fn all_zero_motion_and_residual_repeats_iframe() {
        let v = random_clip(1, 3, 32, 32, 11);
        let d = DecoupledClip {
            channels: 3,
            height: 32,
            width: 32,
            block: 16,
            search: 8,
            iframe: v.frame(0).data.to_vec(),
            motions: vec![MotionField::zeros(2, 2); 3],
            residuals: vec![ResidualFrame::zeros(3, 32, 32); 3],
        };
        let out = decode_clip(&d).unwrap();
        for k in 0..out.frames() {
            assert_eq!(out.frame(k).data, v.frame(0).data);
        }
    }

    #[test]
    fn random_speed_rng_determinism() {
        let mut rng = substream(0, "sanity", 0);
        let _: u32 = rng.gen();
    }
}
