//! Depth completion with a plane-residual depth representation.
//!
//! A depth value is expressed as a pair `(p, r)`: the nearest of `D` discrete
//! depth planes and a signed residual normalized by the local plane gap.
//! Densifying a sparse depth map then splits into per-pixel plane
//! classification plus residual regression. This crate holds the
//! representation itself ([`pr`]), probability-volume operations including
//! channel-wise guided filtering ([`volume`]), the confidence-weighted loss
//! terms ([`loss`]), a small reverse-mode autodiff engine ([`autodiff`]), a
//! toy trainable dual-decoder completion network ([`net`]), synthetic scenes
//! ([`scene`]), and evaluation metrics ([`metrics`]).
//!
//! The crate is `no_std` (with `alloc`); file formats and the command-line
//! front end live in the companion `prdc` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod autodiff;
mod error;
pub mod grid;
pub mod loss;
pub mod metrics;
pub mod net;
pub mod pr;
mod rng;
pub mod scene;
pub mod volume;

pub use error::{Error, Result};
pub use grid::{Grid2, Grid3, Mask, PlaneMap};
pub use pr::{DepthPlaneSet, PRMap, PlaneAnchor, PlaneStrategy};
