//! 3/2-approximation for the shortest spanning s-t path in an unweighted
//! connected graph, guided by an exact cut relaxation.
//!
//! The pipeline: solve the relaxation by cutting planes ([`separation`]),
//! read the chain of deficient s-t cuts off a cut tree ([`narrow_cuts`]),
//! build a spanning tree layered along that chain ([`tree_builder`]), fix
//! degree parities with a minimum join ([`tjoin`]), walk the union and
//! shortcut it to a path ([`graph`]). [`pipeline`] wires the stages together
//! and [`oracle`] re-derives every intermediate answer by brute force at
//! small sizes.

pub mod flow;
pub mod gen;
pub mod graph;
pub mod lp;
pub mod narrow_cuts;
pub mod oracle;
pub mod pipeline;
pub mod rat;
pub mod report;
pub mod separation;
pub mod tjoin;
pub mod tree_builder;
