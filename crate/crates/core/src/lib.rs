//! Simulation library for the controlled deflection of falling cold-atom
//! clouds and Bose-Einstein condensates by two crossed, time-switched optical
//! guides.
//!
//! Two models are implemented:
//!
//! * a semi-classical one: classical free fall along the vertical, quantum
//!   split-operator propagation of the transverse coordinate in the
//!   time-dependent guide potential ([`cold`]);
//! * a mean-field one for condensates: an effective two-dimensional nonlinear
//!   wave equation in the free-fall comoving frame, closed by an algebraic
//!   quartic equation for the transverse width of a Gaussian ansatz
//!   ([`bec`]).
//!
//! Shared machinery lives in the remaining modules: guide potentials and the
//! classical trajectory ([`potential`]), spectral stepping ([`splitstep`],
//! [`splitstep2d`]), bound states of the guide wells ([`boundstates`]),
//! absorbing boundaries ([`absorber`]) and the width equation ([`width`]).

pub mod absorber;
pub mod bec;
pub mod boundstates;
pub mod cold;
pub mod error;
pub mod field;
pub mod grid;
pub mod model;
pub mod potential;
pub mod snapshot;
pub mod splitstep;
pub mod splitstep2d;
pub mod units;
pub mod width;

pub use error::{Error, Result};
