//! Exact arithmetic for deciding and empirically probing linear dependence
//! of points in Mordell-Weil groups of elliptic curves and their products.
//!
//! The crate is built around four layers:
//!
//! * [`gaussian`] — exact arithmetic and linear algebra over ℤ\[i\],
//!   including the congruence solver used by the CM counterexample harness.
//! * [`fields`] — the four coefficient fields in play: ℚ, ℚ(i), 𝔽_p and
//!   𝔽_{p²} = 𝔽_p\[t\]/(t²+1) for p ≡ 3 mod 4.
//! * [`curves`] / [`finite_group`] — short Weierstrass arithmetic over any of
//!   those fields, the ℤ\[i\] CM action on the family y² = x³ − d²x,
//!   reduction maps, and the structure of the reduced groups E(k_v)
//!   (order, abelian shape, Frobenius, γ(v), ℤ\[i\]-generators, discrete logs).
//! * [`heights`] / [`engine`] — Néron-Tate canonical heights over ℚ with
//!   certified tolerances, exact coefficient recovery, and the detection /
//!   evidence-scan procedures built on all of the above.
//!
//! Everything is `no_std` + `alloc`; IO, file formats and the CLI live in the
//! companion `mwdetect` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
#[macro_use]
extern crate std;

pub mod curves;
pub mod engine;
pub mod fields;
pub mod finite_group;
pub mod gaussian;
pub mod heights;
pub mod zlattice;

pub use gaussian::GaussianInt;
