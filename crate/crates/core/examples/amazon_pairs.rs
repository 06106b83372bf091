//! Build the co-purchase graph from Amazon metadata lines and split it into
//! two-category subgraphs.
//!
//! cargo run --example amazon_pairs -- path/to/meta.jsonl 100

use std::io::BufReader;

use fairdsg::ingest::{build_product_graph, category_pair_subgraphs, parse_amazon_jsonl};

const SAMPLE: &str = r#"{"asin":"B1","main_cat":"Books","also_buy":["M1","M2","B2"]}
{"asin":"B2","main_cat":"Books","also_buy":["M1"]}
{"asin":"M1","main_cat":"Movies","also_buy":["B1","T1"]}
{"asin":"M2","main_cat":"Movies"}
{"asin":"T1","main_cat":"Toys","also_buy":["T1","B9"]}
not even json
"#;

fn main() -> fairdsg::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let parsed = match args.first() {
        Some(path) => parse_amazon_jsonl(BufReader::new(std::fs::File::open(path)?))?,
        None => parse_amazon_jsonl(SAMPLE.as_bytes())?,
    };
    let min_nodes = args.get(1).map_or(2, |s| s.parse().expect("min_nodes"));
    let products = build_product_graph(&parsed.records)?;
    println!(
        "{} records ({} skipped), {} products, {} edges, {} dangling references",
        parsed.records.len(),
        parsed.skipped,
        products.graph.n(),
        products.graph.edge_count(),
        products.stats.dangling_references
    );
    for pair in category_pair_subgraphs(&products.graph, &products.categories, min_nodes) {
        println!(
            "{:<20} {} nodes ({} red, {} blue), {} edges",
            pair.name,
            pair.graph.n(),
            pair.coloring.n_red(),
            pair.coloring.n_blue(),
            pair.graph.edge_count()
        );
    }
    Ok(())
}
