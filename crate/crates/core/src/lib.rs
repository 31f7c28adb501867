//! Numerics for Sol geometry.

pub mod cli;
pub mod elliptic;
pub mod error;
pub mod flow;
pub mod isochron;
pub mod ode;
pub mod output;
pub mod quad;
pub mod roots;
pub mod solcore;
pub mod spheres;
pub mod symflow;

pub use error::{Result, SolError};
