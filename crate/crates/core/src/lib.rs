//! Toolkit for optical core network topologies.

pub mod generator;
pub mod geodesy;
pub mod graph;
pub mod topology;
pub mod metrics;
mod par;
pub mod selection;
pub mod spectral;
pub mod stats;
