//! Exact-arithmetic engine for the tautological rings of the Fano variety
//! of lines on a cubic fourfold, its square, and powers of polarized K3
//! surfaces.
//!
//! Everything is computed over arbitrary-precision rationals: ring
//! presentations with degree-wise normal forms, Schubert calculus on
//! Gr(2,6), a Beauville-Bogomolov / Fujiki contraction model of the
//! relevant cohomology, correspondence calculus with the Chow-Künneth
//! projector suite, and the verification checks tying them together.

pub mod config;
pub mod cohom;
pub mod corresp;
pub mod fano;
pub mod grassmann;
pub mod k3;
pub mod linalg;
pub mod report;
pub mod ring;
pub mod scalar;

pub use scalar::Scalar;
