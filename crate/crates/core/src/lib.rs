pub mod bounds;
pub mod clique;
pub mod error;
pub mod feasibility;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod io;
pub mod oracle;
pub mod reduction;
pub mod search;
pub mod skeleton;
pub mod solver;
pub mod twin_relations;
pub mod variant;
