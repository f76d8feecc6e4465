//! Recursive trees counted by leaves and smallest-path end, and the
//! permutation statistics that count the same objects.

pub mod perms;
pub mod rtable;
pub mod trees;

pub use perms::{
    bijection_check, perm_count_checks, perm_stats, perm_to_tree, permutations, relabel,
    stat_tally, tree_to_perm, PermStats, Permutation, Stat,
};
pub use rtable::{
    ab_identities_check, column_sum_check, eulerian_check, eulerian_triangle, r_table_bruteforce,
    r_table_recursive, t_alternating, t_values, CountGrid, EulerianReport, RTable,
};
pub use trees::{enumerate_trees, tree_stats, RecursiveTree, TreeStats};
