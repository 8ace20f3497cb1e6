//! Grid diagrams, cube diagrams and Legendrian cube numbers of torus knots.

pub mod cube;
pub mod grid;
pub mod knot_id;
pub mod laurent;
pub mod legendrian;
pub mod lifting;
pub mod render;
pub mod search;

pub use cube::{parse_cube, Axis, CubeBend, CubeDiagram, CubeReport, CubeViolation, Label, Mark};
pub use grid::{
    parse_grid, point_below, validate_grid, Corner, CornerCensus, Crossing, GridDiagram, GridError,
    GridReport, Marking, MarkingKind,
};
pub use knot_id::{
    canonical_kmax_grid, canonical_kmin_grid, jones, kauffman_bracket, kmax_cube,
    legendrian_classes, left_torus_jones, LegendrianClassSpec,
};
pub use laurent::LaurentPoly;
pub use legendrian::{front_invariants, stabilize, FrontInvariants, Hand};
pub use lifting::{
    detect_type_configurations, lift_search, lift_search_count, lift_search_first,
    lift_with_heights, lift_with_stabilizations, partial_order, xbend_decomposition,
    LiftAssignment, TypeMatch,
};
