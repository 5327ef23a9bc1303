//! Design of nearest-neighbour network couplings that stabilize the
//! synchronous orbit of identical coupled oscillators.
//!
//! The workflow has three steps:
//!
//! 1. [`msf`]: compute the master stability function of the oscillator and
//!    locate an interval `[η₁, η₂]` where it is negative.
//! 2. [`synthesis`]: build a tridiagonal Laplacian whose nonzero eigenvalues
//!    lie in that interval and whose null vector is `e = (1, …, 1)`.
//! 3. [`dynamics`]: simulate the coupled network and measure how fast the
//!    agents synchronize.
//!
//! [`tridiag`] holds the spectral kernels the other modules share, and
//! [`cli`] drives the whole pipeline from JSON experiment manifests.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod dynamics;
pub mod fmt;
pub mod msf;
pub mod synthesis;
pub mod tridiag;
