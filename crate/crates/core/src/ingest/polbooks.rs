//! Political books co-purchase network: conservative books are red,
//! liberal books blue, neutral books are dropped with their edges.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Color, Coloring, LabeledGraph};
use crate::ingest::gml::GmlDocument;

#[derive(Clone, Debug, PartialEq)]
pub struct PolBooks {
    pub graph: LabeledGraph,
    pub coloring: Coloring,
    pub conservative: usize,
    pub liberal: usize,
    pub neutral: usize,
}

enum Stance {
    Conservative,
    Liberal,
    Neutral,
}

fn stance(value: &str) -> Result<Stance> {
    match value.trim().to_ascii_lowercase().as_str() {
        "c" | "conservative" => Ok(Stance::Conservative),
        "l" | "liberal" => Ok(Stance::Liberal),
        "n" | "neutral" => Ok(Stance::Neutral),
        _ => Err(Error::UnknownLabel(value.to_string())),
    }
}

/// Keeps conservative and liberal nodes in document order; node names are
/// the book titles.
pub fn polbooks_graph(doc: &GmlDocument) -> Result<PolBooks> {
    let mut index = HashMap::new();
    let mut colors = Vec::new();
    let mut names = Vec::new();
    let mut neutral = 0;
    for node in &doc.nodes {
        let color = match stance(&node.value)? {
            Stance::Conservative => Color::Red,
            Stance::Liberal => Color::Blue,
            Stance::Neutral => {
                neutral += 1;
                continue;
            }
        };
        index.insert(node.id, colors.len());
        colors.push(color);
        names.push(node.label.clone());
    }
    let edges = doc.edges.iter().filter_map(|(s, t)| Some((*index.get(s)?, *index.get(t)?))).collect::<Vec<_>>();
    let graph = LabeledGraph::from_unweighted(colors.len(), edges)?.with_node_names(names)?;
    let coloring = Coloring::new(colors);
    Ok(PolBooks { conservative: coloring.n_red(), liberal: coloring.n_blue(), neutral, graph, coloring })
}
