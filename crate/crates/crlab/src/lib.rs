//! Crouzeix-Raviart (nonconforming P1) finite element laboratory on the
//! distorted triangulations `T_{n,m}` of the unit square.
//!
//! The crate builds the structured triangulation family `T_{n,m}` (horizontal
//! lines of spacing `1/(2m)` crossed by two slanted line families of slope
//! `±n/m`), assembles the nonconforming P1 Galerkin system for the Poisson
//! model problem with solution `u(x,y) = x(1-x)y(1-y)`, and measures how the
//! Galerkin error, its best-approximation and consistency parts, an explicit
//! oscillating witness function, the reconstructed Raviart-Thomas flux, and
//! the discrete Friedrichs constant behave as the triangles degenerate.

pub mod analysis;
pub mod cr_space;
pub mod error;
pub mod geom;
pub mod mesh;
pub mod poly;
pub mod quadrature;
pub mod rt_flux;
pub mod solver;
pub mod sparse;
pub mod study;
pub mod svg;
pub mod witness;

pub use error::{Error, Result};
