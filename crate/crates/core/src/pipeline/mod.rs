//! The classification-and-extension pipeline for q in {2, 4}.

mod classify;
mod context;
mod extend;
mod table;

pub use classify::{
    classify_ovoids, describe_class, flag_instance, load_classes, plane_permanent, save_classes,
    total_matchings, verify_classes, Classification, ClassifyOptions, OvoidClass,
};
pub use context::{HexContext, OuterElement};
pub use extend::{
    ambient_instance, counting_bound, extend_all, extend_class, manifest_hash, obtain_classes,
    ovoid_size, partial_bound, prove_nonexistence, BoundReport, BoundVerdict, Budgets, ClassBound,
    CountingBound, DirectRoute, ExtensionResult, ExtensionStatus, ProofOptions, ProofReport,
    Verdict, TOOL_VERSION,
};
pub use table::{
    class_table, format_lengths, orbit_sum_from_stabilizers, parse_lengths, render_table, TableRow,
};
