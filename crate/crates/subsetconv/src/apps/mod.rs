//! End-to-end applications built on the convolution kernels.

pub mod coloring;
pub mod subtree;

pub use coloring::{
    color_cost_function, independent_set_table, kcoloring_approx, kcoloring_exact, Graph,
};
pub use subtree::{max_colorful_subtree, max_colorful_subtree_exact, ColoredDag};
