//! Random walks, couplings and harmonic cocycles on wreath products and
//! related extensions of the integers.

pub mod group;
pub mod walk;
pub mod coupling;
pub mod stats;
pub mod harmonic;
pub mod constructions;
pub mod presets;
