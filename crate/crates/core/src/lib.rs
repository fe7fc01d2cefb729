//! Mathematical and physical billiards.
//!
//! A physical billiard moves a hard disk of radius `r` instead of a point.
//! Its center performs an ordinary billiard in the table eroded by `r`, the
//! reduced table. This crate builds tables from segments and circular arcs,
//! computes reduced tables, iterates the billiard map and analyses how
//! stability and chaos change as `r` grows.

// `!(x > 0.0)` is used on purpose: NaN must fail these checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod dynamics;
pub mod geometry;
pub mod reduction;
pub mod table;
