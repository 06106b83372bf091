//! Read a political books GML file and keep the liberal and conservative
//! books. Without an argument a tiny inline document is used.
//!
//! cargo run --example polbooks_ingest -- path/to/polbooks.gml

use fairdsg::ingest::{edge_list_string, parse_gml, polbooks_graph};

const SAMPLE: &str = r#"graph [
  node [ id 0 label "Left A" value "l" ]
  node [ id 1 label "Left B" value "liberal" ]
  node [ id 2 label "Right A" value "c" ]
  node [ id 3 label "Middle" value "n" ]
  edge [ source 0 target 1 ]
  edge [ source 1 target 2 ]
  edge [ source 2 target 3 ]
]"#;

fn main() -> fairdsg::Result<()> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => SAMPLE.to_string(),
    };
    let doc = parse_gml(&text)?;
    let books = polbooks_graph(&doc)?;
    println!(
        "{} raw nodes -> {} nodes, {} edges ({} conservative, {} liberal, {} neutral dropped)",
        doc.nodes.len(),
        books.graph.n(),
        books.graph.edge_count(),
        books.conservative,
        books.liberal,
        books.neutral
    );
    if books.graph.n() <= 10 {
        print!("{}", edge_list_string(&books.graph, &books.coloring)?);
    }
    Ok(())
}
