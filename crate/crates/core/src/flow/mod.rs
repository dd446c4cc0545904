//! Directed capacitated networks and exact max-flow / min-cut.

mod dinic;
mod network;

pub use dinic::{
    global_min_cut, global_min_cut_rooted, max_flow, min_st_cut, min_st_cut_maximal, residual,
    t_mincut_exhaustive, FlowSolver,
};
pub use network::{Arc, Capacity, DirectedNetwork, FlowResult, STCut};
