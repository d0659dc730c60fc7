//! Exact computations for genus-zero and genus-one Gromov–Witten invariants
//! of local Calabi–Yau spaces `Tot(⊕ O(-a_k) → P^{n-1})`.
//!
//! Every quantity is an exact rational or a truncated series over the
//! rationals. The crate provides:
//!
//! * [`algebra`] — rationals, polynomials, rational functions, truncated
//!   power/Laurent/bivariate series, coefficient and residue extraction;
//! * [`gkm`] — torus fixed-point data of projective space with a split
//!   bundle, and generic rational specializations of the torus weights;
//! * [`graphs`] — decorated graphs, stars, colored partitions and refined
//!   tuples with automorphism orders;
//! * [`hodge`] — closed forms for the moduli-space integrals that appear in
//!   the localization contributions, and the combinatorial function `H_r`;
//! * [`localization`] — per-graph contributions, invariant assembly, the
//!   per-star standard-versus-reduced identity and the convex modified vertex;
//! * [`mirror`] — hypergeometric series, mirror map and the closed genus-one
//!   generating functions;
//! * [`modular`] — eta products, `Δ`, `j` and the local `P^2` modular
//!   identities as truncated q-series checks.

pub mod algebra;
pub mod error;
pub mod gkm;
pub mod graphs;
pub mod hodge;
pub mod localization;
pub mod mirror;
pub mod modular;

pub use algebra::{
    fmt_decimal, fmt_q, parse_q, BivarSeries, LaurentSeries, Point, Poly, RatFunc, TruncSeries, Q,
};
pub use error::{Error, Result};
pub use gkm::{GkmSpace, LocalBundle, LocalSpace, Sign, Specialization};
pub use graphs::{ColoredPartition, DecoratedGraph, DecoratedStar, RefinedTuple};
pub use localization::{InvariantKind, InvariantResult, Route};
pub use mirror::MirrorContext;
