//! Characters of reductive groups by fixed-point and cycle-integral formulas.

pub mod coherent;
pub mod compact_char;
pub mod cycle_integral;
pub mod eigendist;
pub mod fixed_point;
pub mod lie_core;
pub mod orbit_geom;
pub mod quad;
pub mod real_structure;
pub mod sl2;
pub mod suite;
pub mod testfn;
