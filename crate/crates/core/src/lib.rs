//! Binary autoencoders with random binary weights.
//!
//! Inputs, hidden codes and weights are all `{0, 1}`. The crate provides the
//! threshold, k-winners-take-all and binary matching pursuit encoders
//! ([`models`]), packed bit vectors ([`binvec`]), an analytic error estimate
//! ([`analytic`]), exact mutual information by enumeration ([`infometrics`]),
//! similarity preservation ([`simprec`]), the iterated encode/decode map
//! ([`attractors`]) and the experiment drivers behind the `binae` binary
//! ([`experiments`]).
//!
//! ```
//! use binae::binvec::random_binary_vector;
//! use binae::models::{Autoencoder, ModelParams};
//! use binae::rng::stream_rng;
//!
//! let mut rng = stream_rng(0, 0);
//! let ae = Autoencoder::sample(ModelParams::new(50, 150, 20, 30).threshold(13), &mut rng)?;
//! let x = random_binary_vector(50, 20, &mut rng)?;
//! let r = ae.best_reconstruction(&x)?;
//! println!("{} errors at t_x = {}", r.errors, r.control);
//! # Ok::<(), binae::Error>(())
//! ```

pub mod analytic;
pub mod attractors;
pub mod binvec;
pub mod error;
pub mod experiments;
pub mod infometrics;
pub mod models;
pub mod rng;
pub mod simprec;

pub use error::{Error, Result};

// The guide's code blocks run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/binary-vectors.md")]
    mod binary_vectors {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/analytic.md")]
    mod analytic {}
    #[doc = include_str!("../../../book/src/information.md")]
    mod information {}
    #[doc = include_str!("../../../book/src/similarity.md")]
    mod similarity {}
    #[doc = include_str!("../../../book/src/attractors.md")]
    mod attractors {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
