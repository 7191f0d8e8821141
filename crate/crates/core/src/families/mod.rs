//! One-parameter families of maps and pairs of maps.

pub mod family;
pub mod fit;
pub mod isotrivial;
pub mod small_points;

pub use family::{bad_parameters, parse_family_json, BadParameters, FamilyLiteral, ParamFamily};
pub use fit::{fit_height_inequality, HeightFit};
pub use isotrivial::{isotrivial_check, Isotriviality};
pub use small_points::{dky_scan, fiber_small_points, fiber_small_points_maps, DkyCell, DkyTable, PrepBudget, SmallPoint, SmallPoints};

/// Rationals serialize as `"a/b"` strings.
pub(crate) fn ser_rationals<S: serde::Serializer>(v: &[num_rational::BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}
