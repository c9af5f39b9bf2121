//! Good edges, n-boxes, skeletons, blackness and the A-conditions.

mod black;
mod conditions;
mod frame;
mod good;
mod skeleton;

pub use black::{
    black_linear_bound, boundary_connectors, default_delta7, is_black, BlackClause, BlackParams, BlackReport,
    Connector, LowerBound,
};
pub use conditions::{check_a_condition, tau_star, AClause, AParams, AReport, AVariant, AViolation};
pub use frame::BoxFrame;
pub use good::{detour_rewrite, is_good_edge, shell_within, Detour, GoodEdge, GoodParams, GoodVariant};
pub use skeleton::{
    build_skeleton, distance_counts, edge_distances, skeleton_path, DistanceField, EdgeDistances, PathClause, Skeleton,
    SkeletonPath, SkeletonVariant,
};
