pub mod bernstein;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod quad;
pub mod report;
pub mod rng;
pub mod special;
