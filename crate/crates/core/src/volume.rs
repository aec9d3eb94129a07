//! Probability-volume operations: channel softmax, weighted depth
//! reconstruction, channel-wise guided filtering, confidence, and plane
//! argmax.
//!
//! A `D`-channel logit volume plays the role a cost volume plays in
//! plane-sweep stereo: channel `p` scores membership of the pixel in depth
//! plane `p`. Logit volumes are plain [`Grid3`]s; [`ProbVolume`] wraps a
//! grid whose channel vectors are normalized per pixel.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::{Grid2, Grid3, PlaneMap};
use crate::pr::DepthPlaneSet;

/// Raw per-plane classification logits, `D x H x W`.
pub type LogitVolume = Grid3;

/// Per-pixel plane probabilities: every channel vector sums to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbVolume(Grid3);

impl ProbVolume {
    /// Validates normalization (sum within 1e-6 of 1, entries in `[0, 1]`).
    pub fn from_grid(grid: Grid3) -> Result<Self> {
        let plane = grid.height() * grid.width();
        for i in 0..plane {
            let mut sum = 0.0;
            for c in 0..grid.channels() {
                let v = grid.data()[c * plane + i];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidParam("probability outside [0, 1]"));
                }
                sum += v;
            }
            if (sum - 1.0).abs() > 1e-6 {
                return Err(Error::InvalidParam("probability channels do not sum to 1"));
            }
        }
        Ok(Self(grid))
    }

    pub fn values(&self) -> &Grid3 {
        &self.0
    }

    pub fn into_grid(self) -> Grid3 {
        self.0
    }
}

/// Max-subtracted channel softmax written into `dst`; `src` and `dst` are
/// channel-major `[C * plane]` buffers. Shared by the pure path and the
/// autodiff op so both produce bit-identical probabilities.
pub(crate) fn softmax_channels_into(src: &[f64], channels: usize, plane: usize, dst: &mut [f64]) {
    for i in 0..plane {
        let mut m = f64::NEG_INFINITY;
        for c in 0..channels {
            m = m.max(src[c * plane + i]);
        }
        let mut sum = 0.0;
        for c in 0..channels {
            let e = libm::exp(src[c * plane + i] - m);
            dst[c * plane + i] = e;
            sum += e;
        }
        for c in 0..channels {
            dst[c * plane + i] /= sum;
        }
    }
}

/// 0-based argmax over the channel lane of pixel `i`; ties take the smaller
/// channel.
pub(crate) fn argmax_lane(src: &[f64], channels: usize, plane: usize, i: usize) -> usize {
    let mut best = 0;
    let mut best_v = src[i];
    for c in 1..channels {
        let v = src[c * plane + i];
        if v > best_v {
            best_v = v;
            best = c;
        }
    }
    best
}

/// Per-pixel channel softmax with max subtraction.
pub fn softmax_volume(logits: &LogitVolume) -> ProbVolume {
    let mut out = Grid3::zeros(logits.channels(), logits.height(), logits.width());
    softmax_channels_into(
        logits.data(),
        logits.channels(),
        logits.height() * logits.width(),
        out.data_mut(),
    );
    ProbVolume(out)
}

/// Per-pixel maximum probability, the plane-classification confidence;
/// values lie in `[1/D, 1]`.
pub fn confidence(probs: &ProbVolume) -> Grid2 {
    let g = probs.values();
    let plane = g.height() * g.width();
    Grid2::from_vec(
        g.height(),
        g.width(),
        (0..plane)
            .map(|i| {
                let mut m = g.data()[i];
                for c in 1..g.channels() {
                    m = m.max(g.data()[c * plane + i]);
                }
                m
            })
            .collect(),
    )
}

/// Per-pixel most likely plane as a 1-based label map; ties take the
/// smaller label.
pub fn argmax_plane(probs: &ProbVolume) -> PlaneMap {
    let g = probs.values();
    let plane = g.height() * g.width();
    let mut out = PlaneMap::zeros(g.height(), g.width());
    for y in 0..g.height() {
        for x in 0..g.width() {
            let i = y * g.width() + x;
            out.set(y, x, (argmax_lane(g.data(), g.channels(), plane, i) + 1) as u16);
        }
    }
    out
}

/// Soft depth reconstruction: the probability-weighted sum of plane depths
/// plus the predicted residual scaled by the gap at the most likely plane,
///
/// ```text
/// depth(x, y) = sum_p d_p * sigma(l_p(x, y))
///             + r(x, y) * step(argmax_p sigma(l_p(x, y)), r(x, y)).
/// ```
///
/// Argmax ties break toward the smaller plane. At the extreme planes a
/// residual pointing past the set uses the one existing adjacent gap.
pub fn reconstruct_depth(logits: &LogitVolume, r_pred: &Grid2, planes: &DepthPlaneSet) -> Result<Grid2> {
    if logits.height() != r_pred.height() || logits.width() != r_pred.width() {
        return Err(Error::ShapeMismatch { what: "reconstruct_depth" });
    }
    if logits.channels() != planes.count() {
        return Err(Error::ShapeMismatch { what: "reconstruct_depth channels" });
    }
    let d = planes.count();
    let plane = logits.height() * logits.width();
    let probs = softmax_volume(logits);
    let pv = probs.values().data();
    let mut out = Grid2::zeros(logits.height(), logits.width());
    for i in 0..plane {
        let mut acc = 0.0;
        for c in 0..d {
            acc += planes.depths()[c] * pv[c * plane + i];
        }
        let top = (argmax_lane(pv, d, plane, i) + 1) as u16;
        let r = r_pred.data()[i];
        out.data_mut()[i] = acc + r * planes.step_clamped(top, r);
    }
    Ok(out)
}

/// Window sums over edge-clamped boxes of half-width `radius` (windows
/// shrink at the borders), computed separably with a fixed accumulation
/// order.
pub(crate) fn box_sum(src: &[f64], h: usize, w: usize, radius: usize) -> Vec<f64> {
    let mut tmp = vec![0.0; h * w];
    for y in 0..h {
        let row = y * w;
        for x in 0..w {
            let x0 = x.saturating_sub(radius);
            let x1 = (x + radius).min(w - 1);
            let mut s = 0.0;
            for u in x0..=x1 {
                s += src[row + u];
            }
            tmp[row + x] = s;
        }
    }
    let mut out = vec![0.0; h * w];
    for y in 0..h {
        let y0 = y.saturating_sub(radius);
        let y1 = (y + radius).min(h - 1);
        for x in 0..w {
            let mut s = 0.0;
            for v in y0..=y1 {
                s += tmp[v * w + x];
            }
            out[y * w + x] = s;
        }
    }
    out
}

/// Number of pixels in the clamped window centered at `(y, x)`.
pub(crate) fn window_area(h: usize, w: usize, radius: usize, y: usize, x: usize) -> usize {
    let xs = (x + radius).min(w - 1) - x.saturating_sub(radius) + 1;
    let ys = (y + radius).min(h - 1) - y.saturating_sub(radius) + 1;
    xs * ys
}

/// Window means over edge-clamped boxes, normalized by the true (shrunken)
/// window size.
pub(crate) fn box_mean(src: &[f64], h: usize, w: usize, radius: usize) -> Vec<f64> {
    let mut out = box_sum(src, h, w, radius);
    for y in 0..h {
        for x in 0..w {
            out[y * w + x] /= window_area(h, w, radius, y, x) as f64;
        }
    }
    out
}

pub(crate) fn check_radius(radius: usize, h: usize, w: usize) -> Result<()> {
    if radius == 0 {
        return Err(Error::InvalidParam("window radius must be >= 1"));
    }
    if radius > (h.min(w) - 1) / 2 {
        return Err(Error::RadiusTooLarge { radius, height: h, width: w });
    }
    Ok(())
}

/// Channel-wise guided image filtering of a logit volume.
///
/// For each channel `p` the filter fits, over every box window `k`, the
/// affine map `a_k = cov(guide_p, l_p) / (var(guide_p) + eps)`,
/// `b_k = mean(l_p) - a_k * mean(guide_p)`, and evaluates
/// `out_i = mean_{k : i in k}(a_k) * guide_p(i) + mean_{k : i in k}(b_k)`.
/// All window statistics use edge-clamped shrinking boxes.
pub fn guided_filter(l: &LogitVolume, guide: &Grid3, radius: usize, eps: f64) -> Result<Grid3> {
    if !l.same_shape(guide) {
        return Err(Error::ShapeMismatch { what: "guided_filter" });
    }
    check_radius(radius, l.height(), l.width())?;
    if !(eps > 0.0) {
        return Err(Error::InvalidParam("guided filter eps must be > 0"));
    }
    let (h, w) = (l.height(), l.width());
    let n = h * w;
    let mut out = Grid3::zeros(l.channels(), h, w);
    for c in 0..l.channels() {
        let g = guide.channel(c);
        let lp = l.channel(c);
        let mean_g = box_mean(g, h, w, radius);
        let mean_l = box_mean(lp, h, w, radius);
        let gl: Vec<f64> = (0..n).map(|i| g[i] * lp[i]).collect();
        let gg: Vec<f64> = (0..n).map(|i| g[i] * g[i]).collect();
        let corr_gl = box_mean(&gl, h, w, radius);
        let corr_gg = box_mean(&gg, h, w, radius);
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        for i in 0..n {
            let var = corr_gg[i] - mean_g[i] * mean_g[i];
            let cov = corr_gl[i] - mean_g[i] * mean_l[i];
            a[i] = cov / (var + eps);
            b[i] = mean_l[i] - a[i] * mean_g[i];
        }
        let mean_a = box_mean(&a, h, w, radius);
        let mean_b = box_mean(&b, h, w, radius);
        let oc = out.channel_mut(c);
        for i in 0..n {
            oc[i] = mean_a[i] * g[i] + mean_b[i];
        }
    }
    Ok(out)
}
