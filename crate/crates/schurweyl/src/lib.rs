//! Universal approximation of n-copy quantum sources and the lossless codes
//! it induces.
//!
//! The n-fold tensor power of C^d splits into joint irreducible blocks
//! indexed by Young diagrams of size n and depth at most d. States that are
//! constant on each block (block states) can approximate every n-copy state
//! of a full-rank source at once, with a divergence growing only
//! logarithmically in n. This crate computes that story end to end,
//! numerically and exactly:
//!
//! - [`young`]: diagram enumeration and the two irrep dimensions per diagram,
//!   in exact big-integer and log2 form.
//! - [`schur`]: Schur polynomial evaluation and the block-occupancy measure
//!   of a spectrum, with an independent RSK brute-force oracle.
//! - [`approx`]: block states, exact divergences D(ρ^⊗n‖σ) with a dense
//!   matrix oracle, the operator domination check, and closed-form
//!   redundancy predictors.
//! - [`minimax`]: the ordered-simplex integral of the equalizing density,
//!   the minimax constant, the equalizing prior σ_J,n and its mixture twin
//!   σ̃_J,n, and the equalizer scan.
//! - [`codec`]: spectral prefix codes from block states with Kraft, length,
//!   and energy accounting.
//! - [`energybound`]: the converse side for arbitrary lossless codes on a
//!   truncated Fock space, via sector peeling.
//!
//! Logs are base 2 everywhere; all reported quantities are bits.
//!
//! # Quick start
//!
//! ```
//! use schurweyl::approx::{relative_entropy, uniform_state};
//! use schurweyl::schur::{schur_weyl_measure, Spectrum};
//!
//! let p = Spectrum::new(vec![0.75, 0.25])?;
//! let measure = schur_weyl_measure(&p, 2)?;
//! assert!((measure.total() - 1.0).abs() < 1e-12);
//!
//! // the uniform block mixture approximates every two-copy state at once
//! let sigma = uniform_state(2, 2)?;
//! let divergence = relative_entropy(&p, &sigma)?;
//! assert!((divergence - 0.665226).abs() < 1e-6);
//! # Ok::<(), schurweyl::Error>(())
//! ```

pub mod approx;
pub mod codec;
pub mod energybound;
pub mod error;
pub mod minimax;
pub mod numeric;
pub mod quad;
pub mod schur;
pub mod young;

pub use error::{Error, Result};
