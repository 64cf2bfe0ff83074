//! Exact engine for Z-systems of prime order.
//!
//! The crate realizes the two Ã₁ RGD examples (SL₂ and unitary SL₃ over
//! `F_p[t, t⁻¹]`) as matrix groups, derives finite window truncations
//! `X_{lo,hi}` of their Z-systems as power-commutator presentations, and runs
//! group-theoretic checks on those windows.

pub mod analysis;
pub mod error;
pub mod laurent;
pub mod matgroup;
pub mod report;
pub mod rgd;
pub mod rootsystem;
pub mod zsystem;

pub use error::{Error, Result};
pub use laurent::{is_prime, lp_arith, LaurentPoly, PrimeField, RingOp};
pub use matgroup::{
    group_commutator, mat_inv, mat_mul, matrix_normal_form, ExampleKind, Family, LaurentMatrix,
};
pub use report::{Check, Report, Status};
pub use rgd::{m_element, rgd3_m_map, rgd_check};
pub use rootsystem::{positive_sign, render_roots, Reflection, Root, Sign};
pub use zsystem::{
    collect_inverse, collect_multiply, collect_power, derive_window, nf_stats, shift_element,
    verify_zs_axioms, GroupElement, NfStats, WindowGroup, WindowId, Word, DEFAULT_CAP,
};
