//! Facility leasing with penalties (PFLe), solved by primal-dual dual ascent.
//!
//! The crate is split into four layers:
//!
//! * [`model`]: problem instances (metric over points, lease catalog, clients
//!   with penalties), validation, and exact cost accounting. All arithmetic is
//!   over arbitrary-precision rationals; there are no floats anywhere.
//! * [`engine`]: the 3-approximation solver. A uniform dual ascent raises one
//!   budget per client until every client is frozen, then a conflict graph over
//!   the tentatively opened leases is thinned to an independent set and each
//!   survivor is tripled in time to cover its neighbours' windows.
//! * [`oracle`]: exact optimum by subset enumeration over candidate leases,
//!   for cross-checking the solver on small instances.
//! * [`verify`]: certificate checkers. Given a solution and the ascent
//!   transcript they re-derive feasibility of both LP sides, the per-client
//!   budget decomposition, and the factor-3 bound, reporting violations as
//!   data rather than panicking.
//!
//! `no_std` builds (with `alloc`) are supported by disabling the `std`
//! feature; the solver itself is pure computation.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod engine;
pub mod model;
pub mod oracle;
pub mod verify;

pub use model::{Client, Instance, LeaseDescriptor, Rational, ValidatedInstance};
