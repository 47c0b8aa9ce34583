//! Rationalization of square roots via rational parametrizations of the
//! associated hypersurfaces.

pub mod algebra;
pub mod cli;
pub mod deadline;
pub mod driver;
pub mod expr;
pub mod fdecomp;
pub mod geometry;
pub mod parametrize;
