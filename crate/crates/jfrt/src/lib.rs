//! Joint time-vertex fractional Fourier transforms.
//!
//! A joint time-vertex signal is an `N x T` complex matrix: one row per graph
//! vertex, one column per time sample. This crate implements the fractional
//! generalization of the joint Fourier transform,
//!
//! ```text
//! JFT^{a,b}(X) = F_G^b  X  (F^a)^T
//! ```
//!
//! where `F^a` is the order-`a` fractional DFT built from discrete
//! Hermite-Gaussian eigenvectors and `F_G^b` is the order-`b` fractional power
//! of a graph Fourier transform. On top of the transforms sit fractional
//! Laplacians, their Kronecker-sum joint form, Tikhonov denoising via a
//! closed-form spectral filter, and the experiment plumbing (noise models,
//! windowing, k-means, synthetic data, CSV ingestion) used by the `jfrt` CLI.
//!
//! Everything is deterministic: eigenbases follow fixed ordering and sign
//! conventions, and randomized routines take explicit seeds.

pub mod cluster;
pub mod denoise;
pub mod error;
pub mod frt;
pub mod gfrt;
pub mod graph;
pub mod io;
pub mod joint;
pub mod linalg;
pub mod noise;
pub mod synth;
pub mod window;

pub use error::{Error, Result};
pub use joint::{FractionalOrderPair, JointSignal};
pub use linalg::{ComplexMatrix, ComplexVector, SpectralBasis};
