use core::fmt;

use crate::pr::PlaneStrategy;

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors produced by the representation, volume, loss, and network layers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A depth-plane set needs at least two planes.
    PlaneCount { planes: usize },
    /// Relative plane anchoring needs at least two distinct valid samples.
    InsufficientSamples { distinct: usize },
    /// Disparity-wise spacing needs strictly positive depths.
    NonPositiveMin { d_min: f64 },
    /// Plane anchors must satisfy `d_min < d_max`.
    EmptyRange { d_min: f64, d_max: f64 },
    /// An absolutely-anchored strategy was given a sparse-map anchor.
    AnchorMismatch { strategy: PlaneStrategy },
    /// Plane label outside `[1, D]`.
    PlaneOutOfRange { plane: u16, planes: usize },
    /// Residual sign points past the first or last plane.
    ResidualSide { plane: u16, planes: usize },
    /// Ground-truth class label outside `[1, D]` on a valid pixel.
    LabelOutOfRange { label: u16, planes: usize },
    /// Operand dimensions disagree; `what` names the operation.
    ShapeMismatch { what: &'static str },
    /// A masked reduction was asked to average over zero pixels.
    EmptyMask,
    /// Filter or pooling window does not fit the image.
    RadiusTooLarge { radius: usize, height: usize, width: usize },
    /// Parameter outside its documented domain; the message names it.
    InvalidParam(&'static str),
    /// Convolution geometry does not produce an integral output size.
    BadConvGeometry { size: usize, kernel: usize, stride: usize, padding: usize },
    /// `backward` was called on a non-scalar node.
    NonScalarLoss,
    /// A value that must stay finite became NaN or infinite.
    NonFinite { what: &'static str },
    /// Scene generator parameters are degenerate; the message names them.
    DegenerateScene(&'static str),
    /// Asked to draw more sparse samples than there are pixels.
    SampleCount { requested: usize, pixels: usize },
    /// Parameter blob does not parse; the message names the defect.
    CheckpointFormat(&'static str),
    /// Checkpoint contents do not match the network configuration.
    ConfigMismatch(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::PlaneCount { planes } => {
                write!(f, "need at least 2 depth planes, got {planes}")
            }
            Error::InsufficientSamples { distinct } => write!(
                f,
                "relative plane anchoring needs >= 2 distinct valid samples, got {distinct}"
            ),
            Error::NonPositiveMin { d_min } => write!(
                f,
                "disparity-wise plane spacing needs d_min > 0, got {d_min}"
            ),
            Error::EmptyRange { d_min, d_max } => {
                write!(f, "plane anchors need d_min < d_max, got [{d_min}, {d_max}]")
            }
            Error::AnchorMismatch { strategy } => write!(
                f,
                "strategy {strategy} anchors absolutely and needs an explicit range"
            ),
            Error::PlaneOutOfRange { plane, planes } => {
                write!(f, "plane label {plane} outside [1, {planes}]")
            }
            Error::ResidualSide { plane, planes } => write!(
                f,
                "residual sign at plane {plane} of {planes} points past the plane set"
            ),
            Error::LabelOutOfRange { label, planes } => {
                write!(f, "class label {label} outside [1, {planes}]")
            }
            Error::ShapeMismatch { what } => write!(f, "dimension mismatch in {what}"),
            Error::EmptyMask => write!(f, "mask selects no pixels"),
            Error::RadiusTooLarge { radius, height, width } => write!(
                f,
                "window radius {radius} does not fit a {height}x{width} image"
            ),
            Error::InvalidParam(what) => write!(f, "invalid parameter: {what}"),
            Error::BadConvGeometry { size, kernel, stride, padding } => write!(
                f,
                "conv geometry (size {size}, kernel {kernel}, stride {stride}, padding {padding}) \
                 has no integral output size"
            ),
            Error::NonScalarLoss => write!(f, "backward needs a scalar loss node"),
            Error::NonFinite { what } => write!(f, "{what} is not finite"),
            Error::DegenerateScene(what) => write!(f, "degenerate scene parameters: {what}"),
            Error::SampleCount { requested, pixels } => {
                write!(f, "cannot draw {requested} sparse samples from {pixels} pixels")
            }
            Error::CheckpointFormat(what) => write!(f, "malformed checkpoint: {what}"),
            Error::ConfigMismatch(what) => write!(f, "checkpoint/config mismatch: {what}"),
        }
    }
}

impl core::error::Error for Error {}
