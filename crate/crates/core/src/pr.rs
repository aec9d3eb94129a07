//! Plane-residual depth representation.
//!
//! Depth is expressed per pixel as `(p, r)`: the nearest of `D` discrete
//! depth planes `d_1 < d_2 < ... < d_D` and a residual `r` normalized by the
//! adjacent plane gap on the side the residual points to. A pixel at depth
//! `x` decodes back as
//!
//! ```text
//! depth(p, r) = d_p + r * step(p, r),
//! step(p, r)  = d_{p+1} - d_p   if r >= 0,
//!               d_p   - d_{p-1} if r <  0.
//! ```
//!
//! Residuals live in `[-0.5, 0.5)`, narrowed to `[0, 0.5)` at plane 1 and
//! `[-0.5, 0]` at plane `D`. Encoding picks the plane whose decode interval
//! (bounded by arithmetic midpoints of adjacent plane depths) contains the
//! value, so `decode(encode(x)) == x` up to rounding for in-range depths.
//! A depth exactly halfway between two planes belongs to the upper plane
//! with `r = -0.5`, keeping the residual range half-open on the right.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::grid::{Grid2, Grid3, Mask};

/// How the plane depths are spaced and where the anchors come from.
///
/// Spacing is uniform in depth (`Uniform*`) or uniform in inverse depth
/// (`Disparity*`); anchors are read from the sparse input's valid extrema
/// (`*Relative`) or given as a fixed range (`*Absolute`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaneStrategy {
    UniformRelative,
    UniformAbsolute,
    DisparityRelative,
    DisparityAbsolute,
}

impl PlaneStrategy {
    pub const ALL: [PlaneStrategy; 4] = [
        PlaneStrategy::UniformRelative,
        PlaneStrategy::UniformAbsolute,
        PlaneStrategy::DisparityRelative,
        PlaneStrategy::DisparityAbsolute,
    ];

    /// True when anchors come from the sparse input rather than a fixed range.
    pub fn is_relative(self) -> bool {
        matches!(self, PlaneStrategy::UniformRelative | PlaneStrategy::DisparityRelative)
    }

    /// True when spacing is uniform in inverse depth.
    pub fn is_disparity(self) -> bool {
        matches!(self, PlaneStrategy::DisparityRelative | PlaneStrategy::DisparityAbsolute)
    }

    /// Two-letter code used in config files and plane sidecars.
    pub fn code(self) -> &'static str {
        match self {
            PlaneStrategy::UniformRelative => "ur",
            PlaneStrategy::UniformAbsolute => "ua",
            PlaneStrategy::DisparityRelative => "dr",
            PlaneStrategy::DisparityAbsolute => "da",
        }
    }

    pub fn parse(code: &str) -> Option<Self> {
        match code {
            "ur" | "UR" => Some(PlaneStrategy::UniformRelative),
            "ua" | "UA" => Some(PlaneStrategy::UniformAbsolute),
            "dr" | "DR" => Some(PlaneStrategy::DisparityRelative),
            "da" | "DA" => Some(PlaneStrategy::DisparityAbsolute),
            _ => None,
        }
    }
}

impl fmt::Display for PlaneStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Where a plane set gets its `d_min`/`d_max` anchors.
#[derive(Clone, Copy, Debug)]
pub enum PlaneAnchor<'a> {
    /// Explicit anchors in meters.
    Range { d_min: f64, d_max: f64 },
    /// Anchors read from the valid (positive) extrema of a sparse map.
    Sparse(&'a Grid2),
}

/// Ordered discrete depth planes plus the strategy that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct DepthPlaneSet {
    depths: Vec<f64>,
    strategy: PlaneStrategy,
    d_min: f64,
    d_max: f64,
}

impl DepthPlaneSet {
    /// Builds `planes` depth planes between the anchors.
    ///
    /// Uniform strategies space depths evenly; disparity strategies space
    /// inverse depths evenly (which requires `d_min > 0`) and sort the result
    /// ascending. Relative strategies take the anchors from the sparse map's
    /// valid minimum and maximum and need at least two distinct samples.
    pub fn build(strategy: PlaneStrategy, planes: usize, anchor: PlaneAnchor<'_>) -> Result<Self> {
        if planes < 2 {
            return Err(Error::PlaneCount { planes });
        }
        let (d_min, d_max) = match anchor {
            PlaneAnchor::Range { d_min, d_max } => (d_min, d_max),
            PlaneAnchor::Sparse(map) => {
                if !strategy.is_relative() {
                    return Err(Error::AnchorMismatch { strategy });
                }
                let mask = map.positive_mask();
                let (lo, hi) = map
                    .masked_min_max(&mask)
                    .ok_or(Error::InsufficientSamples { distinct: 0 })?;
                if lo == hi {
                    return Err(Error::InsufficientSamples { distinct: 1 });
                }
                (lo, hi)
            }
        };
        if !(d_min.is_finite() && d_max.is_finite()) {
            return Err(Error::NonFinite { what: "plane anchor" });
        }
        if d_min >= d_max {
            return Err(Error::EmptyRange { d_min, d_max });
        }

        let depths = if strategy.is_disparity() {
            if d_min <= 0.0 {
                return Err(Error::NonPositiveMin { d_min });
            }
            // Uniform grid in inverse depth from 1/d_min down to 1/d_max,
            // inverted and sorted ascending in depth.
            let inv_lo = 1.0 / d_max;
            let inv_hi = 1.0 / d_min;
            let mut d: Vec<f64> = (0..planes)
                .map(|i| {
                    let inv = inv_hi + (inv_lo - inv_hi) * i as f64 / (planes - 1) as f64;
                    1.0 / inv
                })
                .collect();
            // Endpoints reproduce the anchors exactly.
            d[0] = d_min;
            d[planes - 1] = d_max;
            d
        } else {
            let mut d: Vec<f64> = (0..planes)
                .map(|i| d_min + (d_max - d_min) * i as f64 / (planes - 1) as f64)
                .collect();
            d[0] = d_min;
            d[planes - 1] = d_max;
            d
        };

        for pair in depths.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(Error::EmptyRange { d_min, d_max });
            }
        }
        Ok(Self { depths, strategy, d_min, d_max })
    }

    /// Number of planes `D`.
    pub fn count(&self) -> usize {
        self.depths.len()
    }

    pub fn strategy(&self) -> PlaneStrategy {
        self.strategy
    }

    pub fn d_min(&self) -> f64 {
        self.d_min
    }

    pub fn d_max(&self) -> f64 {
        self.d_max
    }

    /// Plane depths in meters, ascending.
    pub fn depths(&self) -> &[f64] {
        &self.depths
    }

    /// Depth of the 1-based plane label `p`.
    #[inline]
    pub fn depth(&self, plane: u16) -> f64 {
        self.depths[plane as usize - 1]
    }

    /// The gap `step(p, r)` from Eq. above: the adjacent plane gap on the
    /// side the residual points to.
    ///
    /// `(p = 1, r < 0)` and `(p = D, r > 0)` point past the plane set and are
    /// rejected; `(p = D, r = 0)` harmlessly uses the lower gap.
    pub fn step(&self, plane: u16, residual: f64) -> Result<f64> {
        let d = self.depths.len();
        let p = plane as usize;
        if p < 1 || p > d {
            return Err(Error::PlaneOutOfRange { plane, planes: d });
        }
        if residual >= 0.0 {
            if p < d {
                Ok(self.depths[p] - self.depths[p - 1])
            } else if residual == 0.0 {
                Ok(self.depths[d - 1] - self.depths[d - 2])
            } else {
                Err(Error::ResidualSide { plane, planes: d })
            }
        } else if p > 1 {
            Ok(self.depths[p - 1] - self.depths[p - 2])
        } else {
            Err(Error::ResidualSide { plane, planes: d })
        }
    }

    /// Like [`step`](Self::step) but total: at the extreme planes a residual
    /// pointing past the set falls back to the one existing adjacent gap.
    /// Predicted residuals are not constrained by the classified plane, so
    /// reconstruction needs a gap for every `(p, r)` combination.
    pub fn step_clamped(&self, plane: u16, residual: f64) -> f64 {
        let d = self.depths.len();
        let p = (plane as usize).clamp(1, d);
        if residual >= 0.0 {
            if p < d {
                self.depths[p] - self.depths[p - 1]
            } else {
                self.depths[d - 1] - self.depths[d - 2]
            }
        } else if p > 1 {
            self.depths[p - 1] - self.depths[p - 2]
        } else {
            self.depths[1] - self.depths[0]
        }
    }

    /// Largest adjacent plane gap.
    pub fn max_gap(&self) -> f64 {
        self.depths.windows(2).map(|p| p[1] - p[0]).fold(0.0, f64::max)
    }
}

/// Which end of the plane set an out-of-range depth was clamped to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClampSide {
    Below,
    Above,
}

/// Clamp counters returned by [`encode`]; clamping is reported, not an error.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EncodeStats {
    pub clamped_below: usize,
    pub clamped_above: usize,
}

impl EncodeStats {
    pub fn clamped(&self) -> usize {
        self.clamped_below + self.clamped_above
    }
}

/// Per-pixel `(plane, residual)` image; plane label 0 marks an invalid pixel
/// (with residual 0), so the map serializes densely without a separate mask.
#[derive(Clone, Debug, PartialEq)]
pub struct PRMap {
    h: usize,
    w: usize,
    planes: Vec<u16>,
    residuals: Vec<f64>,
}

impl PRMap {
    /// All-invalid map.
    pub fn new(h: usize, w: usize) -> Self {
        Self { h, w, planes: vec![0; h * w], residuals: vec![0.0; h * w] }
    }

    /// Wraps existing label and residual buffers of length `h * w`.
    pub fn from_parts(h: usize, w: usize, planes: Vec<u16>, residuals: Vec<f64>) -> Self {
        assert_eq!(planes.len(), h * w);
        assert_eq!(residuals.len(), h * w);
        Self { h, w, planes, residuals }
    }

    pub fn height(&self) -> usize {
        self.h
    }

    pub fn width(&self) -> usize {
        self.w
    }

    #[inline]
    pub fn plane_at(&self, y: usize, x: usize) -> u16 {
        self.planes[y * self.w + x]
    }

    #[inline]
    pub fn residual_at(&self, y: usize, x: usize) -> f64 {
        self.residuals[y * self.w + x]
    }

    #[inline]
    pub fn is_valid(&self, y: usize, x: usize) -> bool {
        self.plane_at(y, x) != 0
    }

    pub fn set(&mut self, y: usize, x: usize, plane: u16, residual: f64) {
        let i = y * self.w + x;
        self.planes[i] = plane;
        self.residuals[i] = residual;
    }

    pub fn planes(&self) -> &[u16] {
        &self.planes
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn count_valid(&self) -> usize {
        self.planes.iter().filter(|&&p| p != 0).count()
    }
}

/// Encodes a single depth value. Returns the 1-based plane label, the
/// normalized residual, and whether the value was clamped to an extreme
/// plane.
pub fn encode_value(depth: f64, planes: &DepthPlaneSet) -> (u16, f64, Option<ClampSide>) {
    let d = planes.depths();
    let n = d.len();
    if depth < d[0] {
        return (1, 0.0, Some(ClampSide::Below));
    }
    if depth > d[n - 1] {
        return (n as u16, 0.0, Some(ClampSide::Above));
    }
    // Largest i with d[i] <= depth; depth == d_max lands on the last plane.
    let i = d.partition_point(|&v| v <= depth) - 1;
    if i == n - 1 {
        return (n as u16, 0.0, None);
    }
    let gap = d[i + 1] - d[i];
    let r_low = (depth - d[i]) / gap;
    if r_low < 0.5 {
        ((i + 1) as u16, r_low, None)
    } else {
        // At or past the midpoint: upper plane, residual in [-0.5, 0).
        // The max guards the one-ulp case where the division rounds below -0.5.
        let r = ((depth - d[i + 1]) / gap).max(-0.5);
        ((i + 2) as u16, r, None)
    }
}

/// Decodes a single `(plane, residual)` pair back to meters.
pub fn decode_value(plane: u16, residual: f64, planes: &DepthPlaneSet) -> Result<f64> {
    let step = planes.step(plane, residual)?;
    Ok(planes.depth(plane) + residual * step)
}

/// Encodes a depth map into a [`PRMap`].
///
/// Validity comes from `mask` when given, otherwise from positivity. Valid
/// depths must be finite. Out-of-range depths clamp to the nearest extreme
/// plane with residual 0 and are tallied in the returned [`EncodeStats`].
pub fn encode(depth: &Grid2, mask: Option<&Mask>, planes: &DepthPlaneSet) -> Result<(PRMap, EncodeStats)> {
    let inferred;
    let mask = match mask {
        Some(m) => {
            if !m.same_shape_grid(depth) {
                return Err(Error::ShapeMismatch { what: "encode mask" });
            }
            m
        }
        None => {
            inferred = depth.positive_mask();
            &inferred
        }
    };
    let mut out = PRMap::new(depth.height(), depth.width());
    let mut stats = EncodeStats::default();
    for y in 0..depth.height() {
        for x in 0..depth.width() {
            if !mask.at(y, x) {
                continue;
            }
            let v = depth.at(y, x);
            if !v.is_finite() {
                return Err(Error::NonFinite { what: "depth sample" });
            }
            let (p, r, clamp) = encode_value(v, planes);
            match clamp {
                Some(ClampSide::Below) => stats.clamped_below += 1,
                Some(ClampSide::Above) => stats.clamped_above += 1,
                None => {}
            }
            out.set(y, x, p, r);
        }
    }
    Ok((out, stats))
}

/// Decodes a [`PRMap`] to a depth map; invalid pixels decode to 0.
pub fn decode(pr: &PRMap, planes: &DepthPlaneSet) -> Result<Grid2> {
    let mut out = Grid2::zeros(pr.height(), pr.width());
    for y in 0..pr.height() {
        for x in 0..pr.width() {
            let p = pr.plane_at(y, x);
            if p == 0 {
                continue;
            }
            out.set(y, x, decode_value(p, pr.residual_at(y, x), planes)?);
        }
    }
    Ok(out)
}

/// Builds the network input pair from a sparse depth map: a `D`-channel
/// one-hot plane mask (channel `p-1` is 1 where the sample encodes to plane
/// `p`) and a single-channel residual map carrying `r` at sample pixels.
pub fn sparse_to_network_input(sparse: &Grid2, planes: &DepthPlaneSet) -> (Grid3, Grid2) {
    let (h, w) = (sparse.height(), sparse.width());
    let mut plane_mask = Grid3::zeros(planes.count(), h, w);
    let mut residual = Grid2::zeros(h, w);
    for y in 0..h {
        for x in 0..w {
            let v = sparse.at(y, x);
            if v > 0.0 {
                let (p, r, _) = encode_value(v, planes);
                plane_mask.set(p as usize - 1, y, x, 1.0);
                residual.set(y, x, r);
            }
        }
    }
    (plane_mask, residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ur_1234() -> DepthPlaneSet {
        DepthPlaneSet::build(
            PlaneStrategy::UniformAbsolute,
            4,
            PlaneAnchor::Range { d_min: 1.0, d_max: 4.0 },
        )
        .unwrap()
    }

    fn dr_3() -> DepthPlaneSet {
        DepthPlaneSet::build(
            PlaneStrategy::DisparityAbsolute,
            3,
            PlaneAnchor::Range { d_min: 1.0, d_max: 4.0 },
        )
        .unwrap()
    }

    #[test]
    fn uniform_relative_planes_from_sparse_extrema() {
        let mut sparse = Grid2::zeros(2, 3);
        sparse.set(0, 0, 0.5);
        sparse.set(1, 2, 7.5);
        sparse.set(0, 2, 3.25);
        let set = DepthPlaneSet::build(PlaneStrategy::UniformRelative, 8, PlaneAnchor::Sparse(&sparse)).unwrap();
        let want = [0.5, 1.5, 2.5, 3.5, 4.5, 5.5, 6.5, 7.5];
        for (got, want) in set.depths().iter().zip(want) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        assert_eq!(set.d_min(), 0.5);
        assert_eq!(set.d_max(), 7.5);
    }

    #[test]
    fn uniform_absolute_two_planes_spans_zero_to_ten() {
        let set = DepthPlaneSet::build(
            PlaneStrategy::UniformAbsolute,
            2,
            PlaneAnchor::Range { d_min: 0.0, d_max: 10.0 },
        )
        .unwrap();
        assert_eq!(set.depths(), &[0.0, 10.0]);
    }

    #[test]
    fn disparity_planes_are_uniform_in_inverse_depth() {
        let set = dr_3();
        // Inverse grid {1.0, 0.625, 0.25} inverts to {1.0, 1.6, 4.0}.
        assert_eq!(set.depths().len(), 3);
        assert!((set.depths()[0] - 1.0).abs() < 1e-15);
        assert!((set.depths()[1] - 1.6).abs() < 1e-15);
        assert!((set.depths()[2] - 4.0).abs() < 1e-15);
        let inv: vec::Vec<f64> = set.depths().iter().map(|d| 1.0 / d).collect();
        let g0 = inv[0] - inv[1];
        let g1 = inv[1] - inv[2];
        assert!((g0 - g1).abs() <= 1e-9 * g0.abs());
    }

    #[test]
    fn build_rejects_bad_inputs() {
        let sparse_one = {
            let mut m = Grid2::zeros(2, 2);
            m.set(0, 0, 2.0);
            m
        };
        assert!(matches!(
            DepthPlaneSet::build(PlaneStrategy::UniformRelative, 4, PlaneAnchor::Sparse(&sparse_one)),
            Err(Error::InsufficientSamples { distinct: 1 })
        ));
        let sparse_same = {
            let mut m = Grid2::zeros(2, 2);
            m.set(0, 0, 2.0);
            m.set(1, 1, 2.0);
            m
        };
        assert!(matches!(
            DepthPlaneSet::build(PlaneStrategy::DisparityRelative, 4, PlaneAnchor::Sparse(&sparse_same)),
            Err(Error::InsufficientSamples { .. })
        ));
        assert!(matches!(
            DepthPlaneSet::build(
                PlaneStrategy::DisparityAbsolute,
                4,
                PlaneAnchor::Range { d_min: 0.0, d_max: 10.0 }
            ),
            Err(Error::NonPositiveMin { .. })
        ));
        assert!(matches!(
            DepthPlaneSet::build(
                PlaneStrategy::UniformAbsolute,
                4,
                PlaneAnchor::Range { d_min: 3.0, d_max: 3.0 }
            ),
            Err(Error::EmptyRange { .. })
        ));
        assert!(matches!(
            DepthPlaneSet::build(
                PlaneStrategy::UniformAbsolute,
                1,
                PlaneAnchor::Range { d_min: 0.0, d_max: 1.0 }
            ),
            Err(Error::PlaneCount { planes: 1 })
        ));
        assert!(matches!(
            DepthPlaneSet::build(
                PlaneStrategy::UniformAbsolute,
                4,
                PlaneAnchor::Sparse(&sparse_same)
            ),
            Err(Error::AnchorMismatch { .. })
        ));
    }

    #[test]
    fn encode_picks_nearest_plane() {
        let set = ur_1234();
        let (p, r, clamp) = encode_value(2.3, &set);
        assert_eq!((p, clamp), (2, None));
        assert!((r - 0.3).abs() < 1e-12);
    }

    #[test]
    fn encode_midpoint_goes_to_upper_plane() {
        let set = ur_1234();
        let (p, r, _) = encode_value(2.5, &set);
        assert_eq!(p, 3);
        assert_eq!(r, -0.5);
    }

    #[test]
    fn encode_disparity_spacing_round_trips() {
        let set = dr_3();
        let (p, r, clamp) = encode_value(3.0, &set);
        assert_eq!((p, clamp), (3, None));
        assert!((r - (3.0 - 4.0) / (4.0 - 1.6)).abs() < 1e-12);
        let back = decode_value(p, r, &set).unwrap();
        assert!((back - 3.0).abs() <= 1e-6 * 3.0);
    }

    #[test]
    fn encode_clamps_out_of_range() {
        let set = ur_1234();
        assert_eq!(encode_value(0.25, &set), (1, 0.0, Some(ClampSide::Below)));
        assert_eq!(encode_value(9.0, &set), (4, 0.0, Some(ClampSide::Above)));
        assert_eq!(encode_value(4.0, &set), (4, 0.0, None));
    }

    #[test]
    fn decode_examples() {
        let set = ur_1234();
        assert!((decode_value(2, 0.3, &set).unwrap() - 2.3).abs() < 1e-12);
        assert_eq!(decode_value(1, 0.0, &set).unwrap(), 1.0);
        // Plane D with residual 0 uses the lower gap harmlessly.
        assert_eq!(decode_value(4, 0.0, &set).unwrap(), 4.0);
    }

    #[test]
    fn step_cases() {
        let ur = ur_1234();
        assert_eq!(ur.step(2, 0.0).unwrap(), 1.0);
        let dr = dr_3();
        assert!((dr.step(2, 0.1).unwrap() - 2.4).abs() < 1e-12);
        assert!((dr.step(2, -0.1).unwrap() - 0.6).abs() < 1e-12);
        assert!(matches!(dr.step(0, 0.0), Err(Error::PlaneOutOfRange { .. })));
        assert!(matches!(dr.step(4, 0.0), Err(Error::PlaneOutOfRange { .. })));
        assert!(matches!(dr.step(1, -0.1), Err(Error::ResidualSide { .. })));
        assert!(matches!(dr.step(3, 0.1), Err(Error::ResidualSide { .. })));
        assert!((dr.step(3, 0.0).unwrap() - 2.4).abs() < 1e-12);
    }

    #[test]
    fn step_clamped_falls_back_to_existing_gap() {
        let dr = dr_3();
        assert!((dr.step_clamped(3, 0.2) - 2.4).abs() < 1e-12);
        assert!((dr.step_clamped(1, -0.2) - 0.6).abs() < 1e-12);
    }

    #[test]
    fn encode_map_infers_validity_and_counts_clamps() {
        let set = ur_1234();
        let mut depth = Grid2::zeros(2, 2);
        depth.set(0, 0, 2.3);
        depth.set(0, 1, 0.0); // invalid
        depth.set(1, 0, 0.2); // clamps below
        depth.set(1, 1, 11.0); // clamps above
        let (pr, stats) = encode(&depth, None, &set).unwrap();
        assert_eq!(pr.plane_at(0, 0), 2);
        assert!(!pr.is_valid(0, 1));
        assert_eq!(pr.plane_at(1, 0), 1);
        assert_eq!(pr.plane_at(1, 1), 4);
        assert_eq!(stats, EncodeStats { clamped_below: 1, clamped_above: 1 });

        let decoded = decode(&pr, &set).unwrap();
        assert_eq!(decoded.at(0, 1), 0.0);
        assert!((decoded.at(0, 0) - 2.3).abs() < 1e-12);
    }

    #[test]
    fn encode_rejects_non_finite_valid_sample() {
        let set = ur_1234();
        let mut depth = Grid2::zeros(1, 2);
        depth.set(0, 0, f64::NAN);
        let mask = Mask::all(1, 2);
        assert!(matches!(encode(&depth, Some(&mask), &set), Err(Error::NonFinite { .. })));
        // With inferred validity the NaN pixel is simply not positive.
        assert!(encode(&depth, None, &set).is_ok());
    }

    #[test]
    fn network_input_scatters_one_hot() {
        let set = ur_1234();
        let mut sparse = Grid2::zeros(2, 2);
        sparse.set(0, 0, 2.3);
        let (mask, residual) = sparse_to_network_input(&sparse, &set);
        assert_eq!(mask.at(1, 0, 0), 1.0);
        assert!((residual.at(0, 0) - 0.3).abs() < 1e-12);
        // Untouched channels stay all-zero.
        assert!(mask.channel(3).iter().all(|&v| v == 0.0));
        let nonzero: usize = mask.data().iter().filter(|&&v| v != 0.0).count();
        assert_eq!(nonzero, 1);
    }
}
