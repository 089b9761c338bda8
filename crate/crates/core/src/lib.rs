//! Exact analysis of generalized Sierpinski carpets: connectedness,
//! fragility, Hata graphs with their cut-vertex statistics, and cut-point
//! existence decided by a finite window automaton.

pub mod adjacency;
pub mod decider;
pub mod fragility;
pub mod gsc;
pub mod hata;
pub mod oracle;
pub mod presets;
pub mod radix;
pub mod window;

pub use adjacency::{
    cells_intersection_class, neighbor_table, position_neighbor, IntersectionClass, NeighborTable,
};
pub use decider::{
    addresses_of, check_repetition_certificate, corollary_double_check, decide_cut_points,
    essential_exists_at_depth, is_cut_point, point_cut_report, unique_cutpoint_candidates,
    DeciderConfig, DeciderError, EssentialBits, EventuallyPeriodicAddress, PointCutReport,
    RepetitionCertificate, Verdict, DEFAULT_MAX_DEPTH,
};
pub use fragility::{fragility_witness, is_connected_gsc, FragilityWitness};
pub use gsc::{
    relative_position, CellWord, Corner, Digit, Direction, GridPosition, GscSpec, RationalPoint,
    RelativePosition, Side,
};
pub use hata::{
    build_hata, chi, essential_cut_vertices, long_tail, CutVertexReport, HataGraph, LongTail,
};
pub use presets::{resolve, PresetId};
pub use radix::{intersect_class, singleton_value, CarryAutomaton, SetClass};
pub use window::{window_initial, window_step, WindowEngine, WindowState};
