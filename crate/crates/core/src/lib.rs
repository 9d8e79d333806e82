//! Bounded-degree mod-2 cohomology computations: exact `F_2` linear algebra,
//! graded polynomial algebras, the universal-coefficient pipeline for a loop
//! space's low-degree cohomology, a cohomology Serre spectral sequence engine,
//! the `G₂` gauge-group analysis built on it, and a Steenrod-square hit
//! solver.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod f2;
pub mod gauge;
pub mod graded;
pub mod homotopy;
pub mod specseq;
pub mod steenrod;
