//! Graphviz DOT output for subgroup graphs, complexes and trees.

use std::fmt::Write as _;

use crate::ccomplex::CComplex;
use crate::group::Group;
use crate::regnbhd::{BipartiteTree, DunwoodyTree, Quotient};
use crate::stallings::SubgroupGraph;

pub struct Dot {
    name: String,
    directed: bool,
    nodes: Vec<(String, Vec<(&'static str, String)>)>,
    edges: Vec<(String, String, Option<String>)>,
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

impl Dot {
    pub fn new(name: &str, directed: bool) -> Dot {
        Dot {
            name: name.to_string(),
            directed,
            nodes: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn node(&mut self, id: impl ToString, attrs: Vec<(&'static str, String)>) {
        self.nodes.push((id.to_string(), attrs));
    }

    pub fn edge(&mut self, a: impl ToString, b: impl ToString, label: Option<String>) {
        self.edges.push((a.to_string(), b.to_string(), label));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let (kw, arrow) = if self.directed {
            ("digraph", "->")
        } else {
            ("graph", "--")
        };
        let _ = writeln!(out, "{kw} {} {{", quote(&self.name));
        for (id, attrs) in &self.nodes {
            if attrs.is_empty() {
                let _ = writeln!(out, "  {};", quote(id));
            } else {
                let a: Vec<String> = attrs.iter().map(|(k, v)| format!("{k}={}", quote(v))).collect();
                let _ = writeln!(out, "  {} [{}];", quote(id), a.join(", "));
            }
        }
        for (a, b, label) in &self.edges {
            match label {
                Some(l) => {
                    let _ = writeln!(out, "  {} {arrow} {} [label={}];", quote(a), quote(b), quote(l));
                }
                None => {
                    let _ = writeln!(out, "  {} {arrow} {};", quote(a), quote(b));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn subgroup_graph(name: &str, g: &SubgroupGraph) -> String {
    let mut d = Dot::new(name, true);
    for v in 0..g.num_vertices() {
        let shape = if v == g.basepoint() { "doublecircle" } else { "circle" };
        d.node(v, vec![("shape", shape.to_string())]);
    }
    for (u, l, v) in g.edges() {
        d.edge(u, v, Some(l.to_char().to_string()));
    }
    d.render()
}

pub fn ccomplex(name: &str, c: &CComplex, group: &Group) -> String {
    let mut d = Dot::new(name, false);
    for (i, w) in c.vertices.iter().enumerate() {
        d.node(i, vec![("label", format!("{}H", group.format_element(w)))]);
    }
    for e in &c.edges {
        d.edge(e.a, e.b, None);
    }
    d.render()
}

pub fn bipartite_tree(name: &str, t: &BipartiteTree) -> String {
    let mut d = Dot::new(name, false);
    for p in 0..t.v0 {
        d.node(format!("p{p}"), vec![("shape", "box".to_string())]);
    }
    for s in 0..t.stars.len() {
        d.node(format!("s{s}"), vec![("shape", "circle".to_string())]);
    }
    for &(p, s) in &t.edges {
        d.edge(format!("p{p}"), format!("s{s}"), None);
    }
    d.render()
}

/// `labels[i]` names the edge of member `i`.
pub fn dunwoody_tree(name: &str, t: &DunwoodyTree, labels: &[String]) -> String {
    let mut d = Dot::new(name, true);
    for v in 0..t.vertices {
        d.node(format!("v{v}"), Vec::new());
    }
    for (i, &(o, tt)) in t.edges.iter().enumerate() {
        d.edge(format!("v{o}"), format!("v{tt}"), labels.get(i).cloned());
    }
    d.render()
}

pub fn quotient(name: &str, q: &Quotient) -> String {
    let mut d = Dot::new(name, true);
    for v in 0..q.vertex_orbits {
        d.node(format!("v{v}"), Vec::new());
    }
    for (e, &(a, b)) in q.edges.iter().enumerate() {
        let label = q
            .stabilizers
            .get(e)
            .map(|s| format!("<{}>", s.generators.join(", ")))
            .unwrap_or_default();
        d.edge(format!("v{a}"), format!("v{b}"), Some(label));
    }
    d.render()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting() {
        let mut d = Dot::new("g\"1", true);
        d.node("a", vec![("label", "x\\y".into())]);
        d.edge("a", "b", Some("t".into()));
        assert_eq!(
            d.render(),
            "digraph \"g\\\"1\" {\n  \"a\" [label=\"x\\\\y\"];\n  \"a\" -> \"b\" [label=\"t\"];\n}\n"
        );
    }
}
