//! Dense row-major containers for maps, volumes, masks, and label images.

use alloc::vec;
use alloc::vec::Vec;

/// Single-channel `H x W` map of `f64` values, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid2 {
    h: usize,
    w: usize,
    data: Vec<f64>,
}

impl Grid2 {
    pub fn zeros(h: usize, w: usize) -> Self {
        Self { h, w, data: vec![0.0; h * w] }
    }

    pub fn filled(h: usize, w: usize, value: f64) -> Self {
        Self { h, w, data: vec![value; h * w] }
    }

    /// Wraps an existing row-major buffer; `data.len()` must equal `h * w`.
    pub fn from_vec(h: usize, w: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), h * w, "buffer length does not match {h}x{w}");
        Self { h, w, data }
    }

    pub fn from_fn(h: usize, w: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(h * w);
        for y in 0..h {
            for x in 0..w {
                data.push(f(y, x));
            }
        }
        Self { h, w, data }
    }

    pub fn height(&self) -> usize {
        self.h
    }

    pub fn width(&self) -> usize {
        self.w
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn at(&self, y: usize, x: usize) -> f64 {
        self.data[y * self.w + x]
    }

    #[inline]
    pub fn set(&mut self, y: usize, x: usize, value: f64) {
        self.data[y * self.w + x] = value;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn same_shape(&self, other: &Grid2) -> bool {
        self.h == other.h && self.w == other.w
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Grid2 {
        Grid2 { h: self.h, w: self.w, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    /// Validity mask under the depth convention: a pixel is valid iff `> 0`.
    pub fn positive_mask(&self) -> Mask {
        Mask { h: self.h, w: self.w, data: self.data.iter().map(|&v| v > 0.0).collect() }
    }

    /// Minimum and maximum over valid pixels, if any are valid.
    pub fn masked_min_max(&self, mask: &Mask) -> Option<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut any = false;
        for (v, ok) in self.data.iter().zip(mask.data.iter()) {
            if *ok {
                lo = lo.min(*v);
                hi = hi.max(*v);
                any = true;
            }
        }
        any.then_some((lo, hi))
    }
}

/// `C x H x W` stack of channel planes, each row-major; used for logit and
/// probability volumes, RGB images, and guidance stacks.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid3 {
    c: usize,
    h: usize,
    w: usize,
    data: Vec<f64>,
}

impl Grid3 {
    pub fn zeros(c: usize, h: usize, w: usize) -> Self {
        Self { c, h, w, data: vec![0.0; c * h * w] }
    }

    pub fn from_vec(c: usize, h: usize, w: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), c * h * w, "buffer length does not match {c}x{h}x{w}");
        Self { c, h, w, data }
    }

    pub fn from_fn(c: usize, h: usize, w: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(c * h * w);
        for ch in 0..c {
            for y in 0..h {
                for x in 0..w {
                    data.push(f(ch, y, x));
                }
            }
        }
        Self { c, h, w, data }
    }

    pub fn channels(&self) -> usize {
        self.c
    }

    pub fn height(&self) -> usize {
        self.h
    }

    pub fn width(&self) -> usize {
        self.w
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn at(&self, c: usize, y: usize, x: usize) -> f64 {
        self.data[(c * self.h + y) * self.w + x]
    }

    #[inline]
    pub fn set(&mut self, c: usize, y: usize, x: usize, value: f64) {
        self.data[(c * self.h + y) * self.w + x] = value;
    }

    /// Borrows channel `c` as a row-major `H x W` slice.
    pub fn channel(&self, c: usize) -> &[f64] {
        let plane = self.h * self.w;
        &self.data[c * plane..(c + 1) * plane]
    }

    pub fn channel_mut(&mut self, c: usize) -> &mut [f64] {
        let plane = self.h * self.w;
        &mut self.data[c * plane..(c + 1) * plane]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn same_shape(&self, other: &Grid3) -> bool {
        self.c == other.c && self.h == other.h && self.w == other.w
    }
}

/// Per-pixel validity flags.
#[derive(Clone, Debug, PartialEq)]
pub struct Mask {
    h: usize,
    w: usize,
    data: Vec<bool>,
}

impl Mask {
    /// Mask with every pixel valid.
    pub fn all(h: usize, w: usize) -> Self {
        Self { h, w, data: vec![true; h * w] }
    }

    pub fn from_fn(h: usize, w: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut data = Vec::with_capacity(h * w);
        for y in 0..h {
            for x in 0..w {
                data.push(f(y, x));
            }
        }
        Self { h, w, data }
    }

    pub fn height(&self) -> usize {
        self.h
    }

    pub fn width(&self) -> usize {
        self.w
    }

    #[inline]
    pub fn at(&self, y: usize, x: usize) -> bool {
        self.data[y * self.w + x]
    }

    pub fn set(&mut self, y: usize, x: usize, valid: bool) {
        self.data[y * self.w + x] = valid;
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    pub fn count_valid(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    pub fn same_shape_grid(&self, grid: &Grid2) -> bool {
        self.h == grid.height() && self.w == grid.width()
    }
}

/// `H x W` image of 1-based plane labels; 0 marks an invalid pixel.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneMap {
    h: usize,
    w: usize,
    data: Vec<u16>,
}

impl PlaneMap {
    pub fn zeros(h: usize, w: usize) -> Self {
        Self { h, w, data: vec![0; h * w] }
    }

    pub fn from_vec(h: usize, w: usize, data: Vec<u16>) -> Self {
        assert_eq!(data.len(), h * w, "buffer length does not match {h}x{w}");
        Self { h, w, data }
    }

    pub fn height(&self) -> usize {
        self.h
    }

    pub fn width(&self) -> usize {
        self.w
    }

    #[inline]
    pub fn at(&self, y: usize, x: usize) -> u16 {
        self.data[y * self.w + x]
    }

    pub fn set(&mut self, y: usize, x: usize, label: u16) {
        self.data[y * self.w + x] = label;
    }

    pub fn data(&self) -> &[u16] {
        &self.data
    }
}
