//! Geometric solver for full-duplex D2D with mutual SIC.
//!
//! For a fixed decoding order the feasible powers form a polytope cut out
//! of the power box by four linear power-multiplexing conditions. The D2D
//! rate does not depend on the CU power and grows when `(P1, P2)` is scaled
//! up, so the optimum sits on an outer face of the box. This module finds
//! the handful of face segments that can host it and scores their
//! endpoints and interior stationary points.

mod conditions;
mod exhaustive;
mod optimize;
mod planes;
mod segments;
mod selector;
mod solver;

pub use conditions::{necessary_conditions, sufficient_feasibility};
pub use exhaustive::solve_fd_sic_order_exhaustive;
pub use optimize::{optimize_box_side, optimize_su_side, sol1, su_polynomial};
pub use planes::{Plane, PmcPlanes};
pub use segments::{line_box_intersection, segment_set, Line, PointLabel, Segment3D, Side};
pub use selector::{pmc24_floor, region_inclusion, Branch, Pmc24Selector, RegionMode};
pub use solver::solve_fd_sic_order;
