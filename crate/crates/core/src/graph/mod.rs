//! The multigraph model, the diagram-to-graph map and graph files.

mod io;
mod multigraph;
mod phi;

pub use io::{read_graph, read_process, write_graph, write_process, GraphHeader};
pub use multigraph::MultiGraph;
pub use phi::{collapse, diagram_to_graph, phi};
