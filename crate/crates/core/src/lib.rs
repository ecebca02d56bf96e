//! Exact construction and verification of twists of Galois covers of
//! projective space.
//!
//! Given an abelian cover `w_j^{n_j} = f_j(x)` (with `n_1 | n_2 | ...`) or a
//! dihedral cover of the line, the crate builds the `m`-fold fiber product,
//! its quotient by the diagonal group, the twisted cover and its explicit
//! rational points, and checks every claimed identity by normal-form
//! rewriting modulo the cover relations. Finite-field sampling gives an
//! independent numerical cross-check, and a small rank module evaluates the
//! Mordell-Weil rank formula over user-supplied descriptors.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod construct;
pub mod coverring;
pub mod exact;
pub mod ffcheck;
pub mod galois;
pub mod poly;
pub mod rank;
pub mod verify;
