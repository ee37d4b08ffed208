//! Certified approximation of amoebas of complex algebraic varieties via
//! lopsidedness of cyclic resultants.

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod ideals;
pub mod lopsided;
pub mod lp;
pub mod membership;
pub mod poly;
pub mod raster;
pub mod resultant;
pub mod roots;
pub mod tropical;

pub use error::{Error, Result};
