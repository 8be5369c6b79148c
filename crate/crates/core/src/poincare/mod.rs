mod crossing;
mod frame;
mod map;
mod section;

pub use crossing::{
    detect_crossing, newton_round, refine_return_time, CrossingBracket, CrossingConfig,
    PoincareMap,
};
pub use frame::{
    build_coordinates, cto_angle, cto_angle_scan, cto_normal, cto_section, max_angle_cto_point,
    orthogonal_section, section_derivative, CoordinateFrame, MaxAngleCto, Strategy,
};
pub use map::{compute_poincare_map, enclose_map, project_to_section, PoincareEnclosure};
pub use section::{CrossingDirection, Section};
