//! Projective-plane primitives over certified complex numbers.

mod intersect;
pub mod linalg;
mod param;
mod primitives;

pub use intersect::{bitangents, intersect_conics, is_transversal, other_intersection, tangent_lines_from_point, Bitangent};
pub use param::{
    choose_base_point, choose_base_point_nth, line_conic_intersection, line_param_avoiding, parametrize, parametrize_avoiding, restrict_poly, ConicParam,
    CurveParam, LineParam,
};
pub use primitives::{Conic, HomPoly, ProjLine, ProjPoint, Projectivity};
