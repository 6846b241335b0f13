pub mod algebra;
pub mod error;
pub mod linalg;
pub mod scalar;
pub mod composition;
pub mod reductive;
pub mod curvature;
pub mod dsl;
pub mod report;
pub mod selftest;
