//! Amazon product metadata as JSON lines. Only `asin`, `main_cat` and
//! `also_buy` are read; the co-purchase relation is symmetrized into an
//! undirected graph with one category per product.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::BufRead;

use rayon::prelude::*;
use serde::Deserialize;

use crate::error::Result;
use crate::graph::{induced_subgraph, Color, Coloring, LabeledGraph, NodeSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductRecord {
    pub asin: String,
    pub main_cat: String,
    pub also_buy: Vec<String>,
}

#[derive(Deserialize)]
struct RawProduct {
    #[serde(default)]
    asin: Option<String>,
    #[serde(default)]
    main_cat: Option<String>,
    #[serde(default)]
    also_buy: Option<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AmazonParse {
    pub records: Vec<ProductRecord>,
    /// Lines that were not a JSON object with a non-empty `asin`.
    pub skipped: usize,
}

pub fn parse_amazon_jsonl(reader: impl BufRead) -> Result<AmazonParse> {
    let mut out = AmazonParse::default();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<RawProduct>(&line) {
            Ok(RawProduct { asin: Some(asin), main_cat, also_buy }) if !asin.is_empty() => {
                out.records.push(ProductRecord {
                    asin,
                    main_cat: main_cat.unwrap_or_default(),
                    also_buy: also_buy.unwrap_or_default(),
                });
            }
            _ => out.skipped += 1,
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProductGraphStats {
    /// `also_buy` entries naming a product absent from the input.
    pub dangling_references: usize,
    pub self_references: usize,
    /// Records sharing an asin with an earlier one; their fields are merged.
    pub duplicate_records: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductGraph {
    /// Nodes are products in ascending asin order; node names are asins.
    pub graph: LabeledGraph,
    pub categories: Vec<String>,
    pub stats: ProductGraphStats,
}

/// Symmetrized, deduplicated co-purchase graph. Independent of record order:
/// duplicate records union their `also_buy` lists and keep the
/// lexicographically smallest non-empty category.
pub fn build_product_graph(records: &[ProductRecord]) -> Result<ProductGraph> {
    let mut merged: BTreeMap<&str, (Option<&str>, BTreeSet<&str>)> = BTreeMap::new();
    let mut stats = ProductGraphStats::default();
    for r in records {
        let entry = merged.entry(r.asin.as_str()).or_insert((None, BTreeSet::new()));
        if !entry.1.is_empty() || entry.0.is_some() {
            stats.duplicate_records += 1;
        }
        if !r.main_cat.is_empty() {
            entry.0 = Some(match entry.0 {
                Some(existing) if existing <= r.main_cat.as_str() => existing,
                _ => r.main_cat.as_str(),
            });
        }
        entry.1.extend(r.also_buy.iter().map(String::as_str));
    }
    let index: HashMap<&str, usize> = merged.keys().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut edges = Vec::new();
    for (u, (_, also)) in merged.values().enumerate() {
        for other in also {
            match index.get(other) {
                Some(&v) if v == u => stats.self_references += 1,
                Some(&v) => edges.push((u.min(v), u.max(v))),
                None => stats.dangling_references += 1,
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let names = merged.keys().map(|a| a.to_string()).collect();
    let categories = merged.values().map(|(c, _)| c.unwrap_or("").to_string()).collect();
    let graph = LabeledGraph::from_unweighted(merged.len(), edges)?.with_node_names(names)?;
    Ok(ProductGraph { graph, categories, stats })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CategoryPair {
    /// `"<red category>|<blue category>"`.
    pub name: String,
    pub red_category: String,
    pub blue_category: String,
    pub graph: LabeledGraph,
    pub coloring: Coloring,
}

/// For each unordered pair of categories `(a, b)`, `a < b`, the subgraph
/// induced by `a`-nodes with a `b`-neighbor and `b`-nodes with an
/// `a`-neighbor, neighborship tested in the full graph. Category `a` is red.
/// Products with an empty category are ignored; pairs with fewer than
/// `min_nodes` nodes are skipped. Output is sorted by pair.
pub fn category_pair_subgraphs(graph: &LabeledGraph, categories: &[String], min_nodes: usize) -> Vec<CategoryPair> {
    let names: BTreeSet<&str> = categories.iter().map(String::as_str).filter(|c| !c.is_empty()).collect();
    let names: Vec<&str> = names.into_iter().collect();
    let cat_index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let node_cat: Vec<Option<usize>> = categories.iter().map(|c| cat_index.get(c.as_str()).copied()).collect();

    let mut buckets: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for u in 0..graph.n() {
        let Some(cu) = node_cat[u] else { continue };
        let mut seen: Vec<usize> = graph.neighbors(u).filter_map(|(v, _)| node_cat[v]).filter(|&cv| cv != cu).collect();
        seen.sort_unstable();
        seen.dedup();
        for cv in seen {
            buckets.entry((cu.min(cv), cu.max(cv))).or_default().push(u);
        }
    }
    let pairs: Vec<((usize, usize), Vec<usize>)> =
        buckets.into_iter().filter(|(_, nodes)| nodes.len() >= min_nodes.max(1)).collect();
    pairs
        .into_par_iter()
        .map(|((a, b), nodes)| {
            let set = NodeSet::new(nodes);
            let sub = induced_subgraph(graph, &set).expect("bucket ids come from the graph");
            let coloring = Coloring::new(
                set.iter().map(|u| if node_cat[u] == Some(a) { Color::Red } else { Color::Blue }).collect(),
            );
            CategoryPair {
                name: format!("{}|{}", names[a], names[b]),
                red_category: names[a].to_string(),
                blue_category: names[b].to_string(),
                graph: sub,
                coloring,
            }
        })
        .collect()
}
