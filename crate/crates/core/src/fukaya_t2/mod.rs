//! The Fukaya category of the torus R²/Z² on affine lines of rational slope.

mod eps;
mod geometry;
mod golden;
mod lines;
mod model;
mod nonformality;

pub use eps::{angle_cmp, Eps, Pt};
pub use geometry::{enumerate_polygons, intersection_points, marker_crossings, Enumeration, Frame, Polygon};
pub use golden::{compare_below, golden_table, GoldenRow, GoldenTable};
pub use lines::{cross, dehn_twist, LagrangianLine, SlopeMatrix};
pub use model::{
    build_gamma_category, build_pair_category, hom_space, BigonSign, CopyShift, CornerEdge, Conventions, HomSpace, Multiplicity,
    OutputMarker, OutputSign, TorusCategory,
};
pub use nonformality::{koszul_massey, quadratic_gauge, KoszulMassey};
