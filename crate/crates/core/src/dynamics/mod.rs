//! Orbits, preperiodic points, exceptional maps and curves under split maps.

pub mod classify;
pub mod curve;
pub mod enumerate;
pub mod orbit;
pub mod special;

pub use classify::{classify_exceptional, is_pcf, ExceptionalClass, ExceptionalTag, Pcf};
pub use curve::{curve_image, curve_preperiodic_test, CurveP1xP1, CurvePrep};
pub use enumerate::{critical_points, periodic_points, preperiodic_points};
pub use orbit::{is_preperiodic_exact, orbit, OrbitRecord, OrbitVerdict};
pub use special::{special_witness, weakly_special_screen, ScreenBudget, SpecialVerdict};
