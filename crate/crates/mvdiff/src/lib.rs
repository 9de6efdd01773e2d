//! Decoupled video generation at desk scale.
//!
//! The crate decouples a clip into a key frame plus temporal motion
//! (block-matching motion vectors and pixel residuals), compresses residuals
//! to match the motion grid (zonal DCT baseline and a trained variational
//! autoencoder), and runs a complete DDPM engine — training and
//! classifier-free-guided ancestral sampling — over either frame differences
//! or the packed motion/latent representation. Quality metrics and analytic
//! FLOP accounting round out the toolkit.
//!
//! Start with the runnable programs under `examples/`; the `mvdiff` binary
//! exposes the same functionality as subcommands.

pub mod archive;
pub mod error;
pub mod mcodec;
pub mod metrics;
pub mod rng;
pub mod vidcore;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
