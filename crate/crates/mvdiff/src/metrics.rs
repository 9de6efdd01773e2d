//! PSNR, SSIM, compression-ratio accounting, and drift curves.

use crate::error::Error;
use crate::vidcore::{FrameView, VideoTensor};
use crate::Result;

/// PSNR values are capped so identical inputs report a finite number.
pub const PSNR_CAP: f64 = 99.0;

fn psnr_from_mse(mse: f64) -> f64 {
    if mse <= 0.0 {
        return PSNR_CAP;
    }
    (20.0 * (255.0 / mse.sqrt()).log10()).min(PSNR_CAP)
}

pub fn psnr_u8(a: &[u8], b: &[u8]) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::Shape(format!(
            "psnr inputs must share a nonzero length, got {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let se: f64 = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = f64::from(x) - f64::from(y);
            d * d
        })
        .sum();
    Ok(psnr_from_mse(se / a.len() as f64))
}

/// PSNR over signed 16-bit planes (residuals), peak 255.
pub fn psnr_i16(a: &[i16], b: &[i16]) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::Shape(format!(
            "psnr inputs must share a nonzero length, got {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let se: f64 = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = f64::from(x) - f64::from(y);
            d * d
        })
        .sum();
    Ok(psnr_from_mse(se / a.len() as f64))
}

// ---------------------------------------------------------------------------
// SSIM
// ---------------------------------------------------------------------------

const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_K1: f64 = 0.01;
const SSIM_K2: f64 = 0.03;
const SSIM_L: f64 = 255.0;

fn gaussian_window() -> [f64; SSIM_WINDOW * SSIM_WINDOW] {
    let mut w = [0.0; SSIM_WINDOW * SSIM_WINDOW];
    let c = (SSIM_WINDOW / 2) as f64;
    let mut sum = 0.0;
    for y in 0..SSIM_WINDOW {
        for x in 0..SSIM_WINDOW {
            let dy = y as f64 - c;
            let dx = x as f64 - c;
            let v = (-(dy * dy + dx * dx) / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
            w[y * SSIM_WINDOW + x] = v;
            sum += v;
        }
    }
    for v in w.iter_mut() {
        *v /= sum;
    }
    w
}

/// Mean SSIM over all channels and valid 11x11 Gaussian-window positions.
pub fn ssim_frame(a: &FrameView<'_>, b: &FrameView<'_>) -> Result<f64> {
    if !a.same_shape(b) {
        return Err(Error::Shape("ssim inputs differ in shape".into()));
    }
    if a.height < SSIM_WINDOW || a.width < SSIM_WINDOW {
        return Err(Error::Shape(format!(
            "frame {}x{} smaller than the {SSIM_WINDOW}x{SSIM_WINDOW} ssim window",
            a.height, a.width
        )));
    }
    let win = gaussian_window();
    let c1 = (SSIM_K1 * SSIM_L) * (SSIM_K1 * SSIM_L);
    let c2 = (SSIM_K2 * SSIM_L) * (SSIM_K2 * SSIM_L);
    let (h, w) = (a.height, a.width);

    let mut total = 0.0;
    let mut count = 0usize;
    for ch in 0..a.channels {
        let pa = &a.data[ch * h * w..(ch + 1) * h * w];
        let pb = &b.data[ch * h * w..(ch + 1) * h * w];
        for y0 in 0..=(h - SSIM_WINDOW) {
            for x0 in 0..=(w - SSIM_WINDOW) {
                let (mut mx, mut my) = (0.0f64, 0.0f64);
                let (mut sxx, mut syy, mut sxy) = (0.0f64, 0.0f64, 0.0f64);
                for j in 0..SSIM_WINDOW {
                    let ra = &pa[(y0 + j) * w + x0..(y0 + j) * w + x0 + SSIM_WINDOW];
                    let rb = &pb[(y0 + j) * w + x0..(y0 + j) * w + x0 + SSIM_WINDOW];
                    let rw = &win[j * SSIM_WINDOW..(j + 1) * SSIM_WINDOW];
                    for k in 0..SSIM_WINDOW {
                        let xv = f64::from(ra[k]);
                        let yv = f64::from(rb[k]);
                        let g = rw[k];
                        mx += g * xv;
                        my += g * yv;
                        sxx += g * xv * xv;
                        syy += g * yv * yv;
                        sxy += g * xv * yv;
                    }
                }
                let vx = sxx - mx * mx;
                let vy = syy - my * my;
                let cxy = sxy - mx * my;
                let s = ((2.0 * mx * my + c1) * (2.0 * cxy + c2))
                    / ((mx * mx + my * my + c1) * (vx + vy + c2));
                total += s;
                count += 1;
            }
        }
    }
    Ok(total / count as f64)
}

// ---------------------------------------------------------------------------
// Clip-level reports
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct QualityReport {
    /// Per-frame (psnr, ssim).
    pub per_frame: Vec<(f64, f64)>,
    pub mean_psnr: f64,
    pub mean_ssim: f64,
}

impl QualityReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("frame,psnr,ssim\n");
        for (i, (p, s)) in self.per_frame.iter().enumerate() {
            out.push_str(&format!("{i},{p:.6},{s:.6}\n"));
        }
        out
    }
}

pub fn quality_report(a: &VideoTensor, b: &VideoTensor) -> Result<QualityReport> {
    if a.frames() != b.frames()
        || a.channels() != b.channels()
        || a.height() != b.height()
        || a.width() != b.width()
    {
        return Err(Error::Shape("clips differ in shape".into()));
    }
    let mut per_frame = Vec::with_capacity(a.frames());
    for k in 0..a.frames() {
        let p = psnr_u8(a.frame(k).data, b.frame(k).data)?;
        let s = ssim_frame(&a.frame(k), &b.frame(k))?;
        per_frame.push((p, s));
    }
    let n = per_frame.len() as f64;
    let mean_psnr = per_frame.iter().map(|(p, _)| p).sum::<f64>() / n;
    let mean_ssim = per_frame.iter().map(|(_, s)| s).sum::<f64>() / n;
    Ok(QualityReport {
        per_frame,
        mean_psnr,
        mean_ssim,
    })
}

/// Per-frame PSNR between an original clip and its lossy decode; quantifies
/// open-loop drift.
pub fn drift_curve(original: &VideoTensor, decoded: &VideoTensor) -> Result<Vec<f64>> {
    if original.frames() != decoded.frames() || original.frame_len() != decoded.frame_len() {
        return Err(Error::Shape("clips differ in shape".into()));
    }
    (0..original.frames())
        .map(|k| psnr_u8(original.frame(k).data, decoded.frame(k).data))
        .collect()
}

pub fn drift_csv(curve: &[f64]) -> String {
    let mut out = String::from("frame,psnr\n");
    for (i, p) in curve.iter().enumerate() {
        out.push_str(&format!("{i},{p:.6}\n"));
    }
    out
}

/// Centered moving average used when asserting trends on drift curves.
pub fn smooth(curve: &[f64], radius: usize) -> Vec<f64> {
    (0..curve.len())
        .map(|i| {
            let lo = i.saturating_sub(radius);
            let hi = (i + radius + 1).min(curve.len());
            curve[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Compression accounting
// ---------------------------------------------------------------------------

/// Latent channel count of the residual compressors (fixed by the packed
/// representation).
pub const LATENT_CHANNELS: usize = 16;
/// Per-axis spatial downsampling of the residual compressors.
pub const RESIDUAL_AXIS_RATIO: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct CompressionReport {
    /// Elements per macroblock vs one motion vector: B^2.
    pub motion_spatial_ratio: usize,
    /// Per-axis residual downsample factor.
    pub residual_axis_ratio: usize,
    pub pixel_elements: usize,
    pub packed_elements: usize,
    /// Pixel clip elements over packed-latent elements.
    pub end_to_end_ratio: f64,
}

impl CompressionReport {
    pub fn render(&self) -> String {
        format!(
            "motion_spatial_ratio={}\nresidual_axis_ratio={}\npixel_elements={}\npacked_elements={}\nend_to_end_ratio={:.4}\n",
            self.motion_spatial_ratio,
            self.residual_axis_ratio,
            self.pixel_elements,
            self.packed_elements,
            self.end_to_end_ratio
        )
    }
}

pub fn compression_report(
    frames: usize,
    channels: usize,
    height: usize,
    width: usize,
    block: usize,
) -> Result<CompressionReport> {
    if block == 0 || frames < 2 {
        return Err(Error::Config("need block > 0 and at least 2 frames".into()));
    }
    let pixel_elements = frames * channels * height * width;
    let packed_elements = (2 + LATENT_CHANNELS)
        * (frames - 1)
        * (height / RESIDUAL_AXIS_RATIO)
        * (width / RESIDUAL_AXIS_RATIO);
    Ok(CompressionReport {
        motion_spatial_ratio: block * block,
        residual_axis_ratio: RESIDUAL_AXIS_RATIO,
        pixel_elements,
        packed_elements,
        end_to_end_ratio: pixel_elements as f64 / packed_elements as f64,
    })
}
