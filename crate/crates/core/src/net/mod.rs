//! Physical substrate: geometry, mobility, neighbour relations, HELLO
//! archives, the event clock, radio timing and the attribute block.

pub mod attributes;
pub mod events;
pub mod geometry;
pub mod hello;
pub mod mobility;
pub mod radio;

pub use attributes::{decode_attributes, encode_attributes, AttributeBlock, NodeAttributes};
pub use events::{EventQueue, Scheduled};
pub use geometry::{directed_neighbors, Area, Point, Topology};
pub use hello::{hello_times, HelloArchive, HelloRecord};
pub use mobility::{step_waypoint, WaypointParams, WaypointState};
pub use radio::RadioModel;
