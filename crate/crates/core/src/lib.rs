//! Simulation and verification of Palm distributions for superpositions of
//! independent point processes on box windows.
//!
//! Geometry and models are generic over the coordinate scalar ([`Scalar`]:
//! `f32` or `f64`); mixture weights are generic over any ordered numeric
//! field, so they can also be evaluated in exact rationals. The aliases at
//! the crate root fix the scalar to `f64`.

pub mod error;
pub mod experiment;
pub mod models;
pub mod palm;
pub mod pattern;
pub mod rng;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use models::ProcessModel;
pub use rng::{RngState, StreamSeed};
pub use scalar::Scalar;

pub type Point = pattern::Point<f64>;
pub type Window = pattern::Window<f64>;
pub type Region = pattern::Region<f64>;
pub type PointPattern = pattern::PointPattern<f64>;
pub type PoissonModel = models::PoissonModel<f64>;
pub type BinomialModel = models::BinomialModel<f64>;
pub type MixedPoissonModel = models::MixedPoissonModel<f64>;
pub type ThomasClusterModel = models::ThomasClusterModel<f64>;
pub type IntensitySurface = models::IntensitySurface<f64>;
pub type SuperposedModel = palm::SuperposedModel<f64>;
pub type ModelRef = palm::ModelRef<f64>;
pub type MixtureWeights = palm::MixtureWeights<f64>;
pub type TwoPointWeights = palm::TwoPointWeights<f64>;
