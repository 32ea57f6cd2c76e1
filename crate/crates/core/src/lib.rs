#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod enumerate;
pub mod feasibility;
pub mod graphs;
pub mod homtheory;
pub mod params;
pub mod report;
