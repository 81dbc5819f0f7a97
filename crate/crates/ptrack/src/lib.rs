//! Front tracking laboratory for the one-dimensional p-system
//! (barotropic gas dynamics in Lagrangian coordinates) with general convex
//! pressure laws.
//!
//! The crate provides, bottom to top:
//!
//! - [`pressure`]: pressure laws p(v) with p' < 0, p'' > 0, their derived
//!   quantities (wave speed, the Riemann-invariant integral h, the Taylor
//!   coefficients J1/J2) and the sign analysis of the stability discriminant
//!   D = 3p''^2 - 2p'p''' whose failure drives strength amplification;
//! - [`curves`]: the six elementary wave branches, the strength coordinate
//!   a = Δh and the shock-jump function F with its truncated expansions;
//! - [`riemann`]: the exact Riemann solver used as ground truth for every
//!   interaction;
//! - [`interact`]: closed-form interaction estimates (head-on crossings,
//!   reflections off large shocks, slope expansions) plus the harness that
//!   verifies each against the exact solver by convergence-order tests;
//! - [`engine`]: the event-driven front field simulation, where outgoing
//!   strengths at every collision are exact and only speeds are approximate;
//! - [`pattern`]: the periodic four-front interaction patterns (symmetric
//!   and asymmetric), small-wave trains, and the amplification experiments
//!   that exhibit unbounded growth of total wave strength;
//! - [`scenario`]: JSON scenario files, CSV/JSON trace export and the SVG
//!   x-t diagrams used by the command-line driver.

pub mod curves;
pub mod engine;
pub mod error;
pub mod interact;
pub mod numerics;
pub mod pattern;
pub mod pressure;
pub mod riemann;
pub mod scenario;
pub mod state;
pub mod svg;

pub use curves::{J2Convention, WaveFamily, WaveKind};
pub use error::{PtrackError, Result};
pub use pressure::{gamma_law, gamma_law_with_domain, table_law, PressureLaw};
pub use state::State;
