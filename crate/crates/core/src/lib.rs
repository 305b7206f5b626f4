//! Bands, free idempotent generated semigroups and their maximal subgroups.

pub mod band;
pub mod group;
pub mod ig;
pub mod pipeline;
pub mod presentations;
pub mod rees;
pub mod squares;
pub mod tietze;
