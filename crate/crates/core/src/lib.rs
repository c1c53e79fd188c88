//! One-dimensional thermo-fluid ion transport through nanochannels.
//!
//! The [`dmh`] kernel and [`numerics`] are generic over [`Scalar`]; the
//! physical layers ([`physics`], [`boundary`], [`poisson`], [`models`],
//! [`gummel`]) are `f64`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod channel;
pub mod dmh;
pub mod error;
pub mod gummel;
pub mod models;
pub mod numerics;
pub mod physics;
pub mod poisson;
pub mod scalar;

pub use error::{Error, Result};
pub use numerics::Stabilization;
pub use scalar::Scalar;

pub type Mesh = dmh::Mesh<f64>;
pub type Mesh32 = dmh::Mesh<f32>;
pub type BvpCoefficients = dmh::BvpCoefficients<f64>;
pub type BvpCoefficients32 = dmh::BvpCoefficients<f32>;
pub type DmhSolution = dmh::DmhSolution<f64>;
pub type DmhSolution32 = dmh::DmhSolution<f32>;
pub type TridiagonalSystem = numerics::TridiagonalSystem<f64>;
pub type TridiagonalSystem32 = numerics::TridiagonalSystem<f32>;
