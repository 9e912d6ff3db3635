//! Numerical laboratory for convoluted cosine functions and convoluted
//! semigroups on diagonal operator models.

pub mod error;
pub mod quad;
pub mod weights;
pub mod kernel;
pub mod rational;
pub mod special;
pub mod region;
pub mod spectral;
pub mod evolution;
pub mod classifier;
