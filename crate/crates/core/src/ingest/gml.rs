//! A tolerant reader for the GML subset used by small network datasets:
//! `graph [ node [ id N label "..." value "..." ] edge [ source N target N ] ]`.
//! Unknown keys, including nested lists, are skipped.

use std::collections::HashSet;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct GmlNode {
    pub id: i64,
    pub label: String,
    pub value: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GmlDocument {
    pub nodes: Vec<GmlNode>,
    pub edges: Vec<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Key(String),
    Int(i64),
    Float(f64),
    Str(String),
    Open,
    Close,
}

#[derive(Clone, Debug, PartialEq)]
enum Value {
    Int(i64),
    Float(f64),
    Str(String),
    List(Vec<Entry>),
}

#[derive(Clone, Debug, PartialEq)]
struct Entry {
    key: String,
    value: Value,
    line: usize,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1;
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '[' => {
                tokens.push((Token::Open, line));
                chars.next();
            }
            ']' => {
                tokens.push((Token::Close, line));
                chars.next();
            }
            '"' => {
                let start = line;
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(c) => {
                            if c == '\n' {
                                line += 1;
                            }
                            s.push(c);
                        }
                        None => return Err(Error::parse(start, "unterminated string")),
                    }
                }
                tokens.push((Token::Str(s), start));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push((Token::Key(s), line));
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || matches!(c, '-' | '+' | '.') {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let token = if let Ok(i) = s.parse::<i64>() {
                    Token::Int(i)
                } else if let Ok(f) = s.parse::<f64>() {
                    Token::Float(f)
                } else {
                    return Err(Error::parse(line, format!("bad number {s:?}")));
                };
                tokens.push((token, line));
            }
            other => return Err(Error::parse(line, format!("unexpected character {other:?}"))),
        }
    }
    Ok(tokens)
}

fn parse_entries(tokens: &[(Token, usize)], pos: &mut usize, nested: Option<usize>) -> Result<Vec<Entry>> {
    let mut entries = Vec::new();
    loop {
        let Some((token, line)) = tokens.get(*pos) else {
            return match nested {
                Some(open_line) => {
                    Err(Error::parse(open_line, "unbalanced brackets: list opened here is never closed"))
                }
                None => Ok(entries),
            };
        };
        *pos += 1;
        let key = match token {
            Token::Close if nested.is_some() => return Ok(entries),
            Token::Close => return Err(Error::parse(*line, "unbalanced brackets: unexpected ']'")),
            Token::Key(k) => k.clone(),
            other => return Err(Error::parse(*line, format!("expected a key, found {other:?}"))),
        };
        let Some((value, value_line)) = tokens.get(*pos) else {
            return Err(Error::parse(*line, format!("key {key:?} has no value")));
        };
        *pos += 1;
        let value = match value {
            Token::Int(i) => Value::Int(*i),
            Token::Float(f) => Value::Float(*f),
            Token::Str(s) => Value::Str(s.clone()),
            Token::Open => Value::List(parse_entries(tokens, pos, Some(*value_line))?),
            Token::Close => return Err(Error::parse(*value_line, "unbalanced brackets: unexpected ']'")),
            Token::Key(k) => {
                return Err(Error::parse(*value_line, format!("expected a value for {key:?}, found key {k:?}")))
            }
        };
        entries.push(Entry { key, value, line: *line });
    }
}

fn scalar_string(value: &Value) -> Option<String> {
    match value {
        Value::Str(s) => Some(s.clone()),
        Value::Int(i) => Some(i.to_string()),
        Value::Float(f) => Some(f.to_string()),
        Value::List(_) => None,
    }
}

fn int_field(entries: &[Entry], key: &str) -> Option<i64> {
    entries.iter().find(|e| e.key == key).and_then(|e| match e.value {
        Value::Int(i) => Some(i),
        _ => None,
    })
}

pub fn parse_gml(text: &str) -> Result<GmlDocument> {
    let tokens = tokenize(text)?;
    let mut pos = 0;
    let top = parse_entries(&tokens, &mut pos, None)?;
    let graph = top
        .iter()
        .find_map(|e| match (&e.key[..], &e.value) {
            ("graph", Value::List(items)) => Some(items),
            _ => None,
        })
        .ok_or_else(|| Error::parse(1, "no graph [ ... ] block"))?;

    let mut doc = GmlDocument::default();
    let mut ids = HashSet::new();
    let mut pending_edges = Vec::new();
    for entry in graph {
        let Value::List(items) = &entry.value else { continue };
        match &entry.key[..] {
            "node" => {
                let id = int_field(items, "id").ok_or_else(|| Error::parse(entry.line, "node without integer id"))?;
                if !ids.insert(id) {
                    return Err(Error::parse(entry.line, format!("duplicate node id {id}")));
                }
                let text = |key: &str| items.iter().find(|e| e.key == key).and_then(|e| scalar_string(&e.value));
                doc.nodes.push(GmlNode {
                    id,
                    label: text("label").unwrap_or_default(),
                    value: text("value").unwrap_or_default(),
                });
            }
            "edge" => {
                let source =
                    int_field(items, "source").ok_or_else(|| Error::parse(entry.line, "edge without source"))?;
                let target =
                    int_field(items, "target").ok_or_else(|| Error::parse(entry.line, "edge without target"))?;
                pending_edges.push((source, target, entry.line));
            }
            _ => {}
        }
    }
    for (source, target, line) in pending_edges {
        for id in [source, target] {
            if !ids.contains(&id) {
                return Err(Error::parse(line, format!("edge references unknown node id {id}")));
            }
        }
        doc.edges.push((source, target));
    }
    Ok(doc)
}
