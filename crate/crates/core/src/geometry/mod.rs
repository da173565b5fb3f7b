//! Points, boxes, distance bounds, hulls and dominance.

mod dominance;
pub mod hull;
mod point;
mod query_set;
mod rect;

pub use dominance::{dynamic_dominates, pruning_region, region_prunes};
pub(crate) use dominance::{dominates_coords, mid_margin, pruning_region_safe};
pub use point::{distance, Point};
pub(crate) use point::dist2;
pub use query_set::{entry_dominance, farthest_query, QuerySet};
pub(crate) use query_set::farthest_query2;
pub use rect::{rect_point_bounds, Extent, Rect};
