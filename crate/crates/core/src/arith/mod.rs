//! Exact projective arithmetic over Q, binary forms, rational maps and
//! complex root finding.

pub mod form;
pub mod map;
pub mod point;
pub mod poly;
pub mod primes;
pub mod rational_roots;
pub mod roots;

pub use form::{resultant, BinaryForm};
pub use map::{compose, eval_map, eval_map_c, iterate, normalize_lift, RationalMap};
pub use point::{chordal, naive_height, ProjPointC, ProjPointQ};
pub use rational_roots::rational_roots;
pub use roots::poly_roots_complex;
