//! Beam synthesis and analysis for small millimeter-wave phased arrays.
//!
//! The crate models a planar (or linear) lattice of directional elements and
//! covers two ways of shaping its radiation:
//!
//! * **beam switching** with two-vector excitation matrices, where every
//!   element is driven with `k`, `-k` or left off, giving six beamstates
//!   (`A`..`F`) on a 3×3 sub-array;
//! * **beam steering** with a progressive phase shift along the array rows.
//!
//! Far fields are computed by pattern multiplication (element gain times the
//! array factor) on a sampled sphere, and [`metrics`] extracts directivity,
//! beam peaks, half-power beamwidths, front-to-back ratio, pointing loss and
//! grating-lobe onset from them.
//!
//! Coordinates: the array lies in the `z = 0` plane with boresight along `+z`.
//! `θ` is measured from `+z` and `φ` from `+x` toward `+y`, both in degrees at
//! the public API.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod element;
pub mod error;
pub mod excitation;
pub mod export;
pub mod geometry;
pub mod metrics;
pub mod radiation;
pub mod scenario;
pub mod sequencer;

pub use element::ElementPattern;
pub use error::{Error, Result};
pub use excitation::{
    BeamState, Cell, Excitation, ExcitationMatrix, MappingKind, PortMapping, SteeringVector,
};
pub use geometry::{ArrayLayout, LayoutShape, SPEED_OF_LIGHT};
pub use metrics::{GratingVerdict, Peak, PeakParams, PatternReport};
pub use radiation::{FarFieldGrid, GridSpec, PatternCut};
pub use sequencer::SlotSchedule;

pub use num_complex::Complex64;
