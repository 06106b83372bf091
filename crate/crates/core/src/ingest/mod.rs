//! Dataset readers and the edge-list interchange format.

pub mod amazon;
pub mod edgelist;
pub mod gml;
pub mod polbooks;

pub use amazon::{build_product_graph, category_pair_subgraphs, parse_amazon_jsonl, CategoryPair, ProductRecord};
pub use edgelist::{edge_list_string, read_edge_list, write_edge_list};
pub use gml::{parse_gml, GmlDocument, GmlNode};
pub use polbooks::{polbooks_graph, PolBooks};
