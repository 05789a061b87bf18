pub mod algebra;
pub mod cli;
pub mod geometry;
pub mod linalg;
pub mod repangle;
pub mod solver;
pub mod tolerance;
