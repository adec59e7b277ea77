//! The `predimlab/1` text format.
//!
//! ```text
//! predimlab/1
//! signature 2 hypergraph
//! relation R 2 1
//! vertices 0 1 2
//! edge R 0 1
//! edge R 1 2
//! set base 0 2
//! ```
//!
//! Bipartite structures add `points <ids>` and `lines <ids>`. Lines starting
//! with `#` are comments. `set <name> <ids>` attaches a named vertex set.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::error::{input, Error, Result};
use crate::structure::{FiniteStructure, Mode, Part, RelationSpec, Signature};

pub const HEADER: &str = "predimlab/1";

/// A structure together with its named vertex sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub structure: FiniteStructure,
    pub sets: BTreeMap<String, Vec<u32>>,
}

impl Document {
    pub fn new(structure: FiniteStructure) -> Self {
        Document {
            structure,
            sets: BTreeMap::new(),
        }
    }

    pub fn with_set(mut self, name: &str, ids: Vec<u32>) -> Self {
        self.sets.insert(name.into(), ids);
        self
    }

    pub fn set(&self, name: &str) -> Result<&[u32]> {
        self.sets
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::Input(format!("no set named {name}")))
    }
}

fn ids(words: &[&str], line: usize) -> Result<Vec<u32>> {
    words
        .iter()
        .map(|w| {
            w.parse()
                .map_err(|_| Error::Input(format!("line {line}: bad vertex id {w:?}")))
        })
        .collect()
}

pub fn parse(text: &str) -> Result<Document> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, HEADER)) => {}
        Some((n, other)) => return input(format!("line {n}: expected {HEADER}, found {other:?}")),
        None => return input("empty structure file"),
    }
    let mut vertex_weight = None;
    let mut mode = Mode::Hypergraph;
    let mut relations = Vec::new();
    let mut vertices: Option<Vec<u32>> = None;
    let mut parts = Vec::new();
    let mut edges: Vec<(usize, String, Vec<u32>)> = Vec::new();
    let mut sets = BTreeMap::new();
    for (n, line) in lines {
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "signature" => {
                let [_, w, m] = words[..] else {
                    return input(format!("line {n}: expected `signature <n> <mode>`"));
                };
                vertex_weight = Some(
                    w.parse::<u32>()
                        .map_err(|_| Error::Input(format!("line {n}: bad vertex weight")))?,
                );
                mode = match m {
                    "hypergraph" => Mode::Hypergraph,
                    "bipartite" => Mode::Bipartite,
                    _ => return input(format!("line {n}: unknown mode {m:?}")),
                };
            }
            "relation" => {
                let [_, name, arity, weight] = words[..] else {
                    return input(format!("line {n}: expected `relation <name> <arity> <weight>`"));
                };
                relations.push(RelationSpec {
                    name: name.into(),
                    arity: arity
                        .parse()
                        .map_err(|_| Error::Input(format!("line {n}: bad arity")))?,
                    weight: weight
                        .parse()
                        .map_err(|_| Error::Input(format!("line {n}: bad weight")))?,
                });
            }
            "vertices" => {
                if vertices.is_some() {
                    return input(format!("line {n}: second vertices line"));
                }
                vertices = Some(ids(&words[1..], n)?);
            }
            "points" | "lines" => {
                let part = if words[0] == "points" { Part::Point } else { Part::Line };
                parts.extend(ids(&words[1..], n)?.into_iter().map(|i| (i, part)));
            }
            "edge" => {
                if words.len() < 2 {
                    return input(format!("line {n}: expected `edge <relation> <ids>`"));
                }
                edges.push((n, words[1].into(), ids(&words[2..], n)?));
            }
            "set" => {
                if words.len() < 2 {
                    return input(format!("line {n}: expected `set <name> <ids>`"));
                }
                if sets.insert(words[1].to_string(), ids(&words[2..], n)?).is_some() {
                    return input(format!("line {n}: set {} defined twice", words[1]));
                }
            }
            other => return input(format!("line {n}: unknown directive {other:?}")),
        }
    }
    let signature = Signature::new(
        vertex_weight.ok_or_else(|| Error::Input("missing signature line".into()))?,
        relations,
        mode,
    )?;
    let vertices = vertices.unwrap_or_default();
    let mut instances = Vec::with_capacity(edges.len());
    for (n, name, tuple) in edges {
        let rel = signature
            .relation_index(&name)
            .ok_or_else(|| Error::Input(format!("line {n}: unknown relation {name}")))?;
        instances.push((rel, tuple));
    }
    let parts = (mode == Mode::Bipartite).then_some(parts);
    let structure = FiniteStructure::new_strict(signature, vertices, instances, parts)?;
    for (name, list) in &sets {
        structure
            .set_of(list)
            .map_err(|e| Error::Input(format!("set {name}: {e}")))?;
    }
    Ok(Document { structure, sets })
}

pub fn write(doc: &Document) -> String {
    let s = &doc.structure;
    let sig = s.signature();
    let mut out = String::new();
    let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    let mode = match sig.mode() {
        Mode::Hypergraph => "hypergraph",
        Mode::Bipartite => "bipartite",
    };
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "signature {} {mode}", sig.vertex_weight()).unwrap();
    for r in sig.relations() {
        writeln!(out, "relation {} {} {}", r.name, r.arity, r.weight).unwrap();
    }
    writeln!(out, "vertices {}", join(s.ids())).unwrap();
    if let Some(parts) = s.parts() {
        for (word, want) in [("points", Part::Point), ("lines", Part::Line)] {
            let list: Vec<u32> = s
                .ids()
                .iter()
                .zip(parts)
                .filter(|(_, p)| **p == want)
                .map(|(i, _)| *i)
                .collect();
            writeln!(out, "{word} {}", join(&list)).unwrap();
        }
    }
    for (rel, spec) in sig.relations().iter().enumerate() {
        for t in s.instance_ids(rel) {
            writeln!(out, "edge {} {}", spec.name, join(&t)).unwrap();
        }
    }
    for (name, list) in &doc.sets {
        let mut list = list.clone();
        list.sort_unstable();
        writeln!(out, "set {name} {}", join(&list)).unwrap();
    }
    out.lines().map(str::trim_end).collect::<Vec<_>>().join("\n") + "\n"
}

pub fn write_structure(s: &FiniteStructure) -> String {
    write(&Document::new(s.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const PATH: &str = "predimlab/1\n# a path\nsignature 2 hypergraph\nrelation R 2 1\nvertices 0 1 2\nedge R 1 0\nedge R 1 2\nset base 2 0\n";

    #[test]
    fn round_trip() {
        let doc = parse(PATH).unwrap();
        assert_eq!(doc.structure.instance_count(), 2);
        assert_eq!(doc.set("base").unwrap(), &[2, 0]);
        let text = write(&doc);
        assert!(text.contains("edge R 0 1\n"));
        assert!(text.contains("set base 0 2\n"));
        let again = parse(&text).unwrap();
        assert_eq!(again.structure, doc.structure);
        assert_eq!(write(&again), text);
    }

    #[test]
    fn bipartite_round_trip() {
        let text = "predimlab/1\nsignature 2 bipartite\nrelation R 2 1\nvertices 0 1\npoints 0\nlines 1\nedge R 0 1\n";
        let doc = parse(text).unwrap();
        assert_eq!(write(&doc), text);
    }

    #[test]
    fn loader_rejections() {
        let bad = [
            ("signature 2 hypergraph\nrelation R 2 1\nvertices 0 1\n", "header"),
            (
                "predimlab/1\nsignature 2 hypergraph\nrelation R 2 1\nvertices 0 1\nedge R 0 1\nedge R 1 0\n",
                "duplicate",
            ),
            (
                "predimlab/1\nsignature 2 hypergraph\nrelation R 2 1\nvertices 0 1\nedge R 1 1\n",
                "repeats",
            ),
            (
                "predimlab/1\nsignature 2 hypergraph\nrelation R 2 1\nvertices 0 1\nedge R 0 5\n",
                "unknown",
            ),
            (
                "predimlab/1\nsignature 2 hypergraph\nrelation R 3 1\nvertices 0 1\nedge R 0 1\n",
                "arity",
            ),
            (
                "predimlab/1\nsignature 2 bipartite\nrelation R 2 1\nvertices 0 1\npoints 0 1\nedge R 0 1\n",
                "same part",
            ),
            (
                "predimlab/1\nsignature 2 hypergraph\nrelation R 2 1\nvertices 0 0\n",
                "repeated vertex",
            ),
            (
                "predimlab/1\nsignature 2 hypergraph\nrelation R 2 1\nvertices 0\nset x 3\n",
                "set",
            ),
        ];
        for (text, what) in bad {
            let err = parse(text).unwrap_err();
            assert!(matches!(err, Error::Input(_)), "{what}: {err}");
        }
    }
}
