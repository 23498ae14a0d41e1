//! Executable versions of the counting and entropy arguments behind the
//! upper bounds: bound curves, Plotkin and Turán estimates on consistency
//! graphs, the grouping inequality for entropy, and the dyadic partitions.

pub mod bounds;
pub mod entropy;
pub mod graph;
pub mod partition;

pub use bounds::{
    binary_entropy, bound_table, bounds_csv, capacity_bounds, confusion_distance, crossover,
    gv_bound, integer_threshold, plotkin_cap_exact, plotkin_instance, plotkin_max, BoundRow,
    Bounds, PlotkinInstance,
};
pub use entropy::{grouped_entropy_check, GroupedEntropy};
pub use graph::{
    build_consistency_graph, graph_from_words, max_independent_set, turan_independent_lower,
    ConsistencyGraph, EXACT_MIS_LIMIT,
};
pub use partition::{
    build_dyadic_partition, dyadic_index, select_good_cell, Aggregation, Cell, DyadicPartition,
    GoodCell, Level1,
};
