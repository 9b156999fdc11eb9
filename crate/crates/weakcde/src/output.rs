use std::fmt::Write;

use weakcde_core::BigRational;
use serde_json::Value;

use crate::target::Poset;

/// Reduced fraction `p/q`, with integers printed without a denominator.
pub fn frac(x: &BigRational) -> String {
    x.to_string()
}

/// What a subcommand produced, in every format it supports.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub json: Value,
    pub tsv: Table,
    pub dot: Option<String>,
    /// a checked property failed
    pub violation: bool,
}

impl Outcome {
    pub fn new(json: Value, tsv: Table) -> Self {
        Outcome { json, tsv, dot: None, violation: false }
    }

    pub fn with_dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }

    pub fn violated(mut self, v: bool) -> Self {
        self.violation = v;
        self
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(header: I) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn row<I: IntoIterator<Item = S>, S: Into<String>>(&mut self, cells: I) {
        self.rows.push(cells.into_iter().map(Into::into).collect());
    }

    /// Two-column `key value` table.
    pub fn pairs<I: IntoIterator<Item = (K, V)>, K: Into<String>, V: Into<String>>(items: I) -> Self {
        let mut t = Table::new(["key", "value"]);
        for (k, v) in items {
            t.row([k.into(), v.into()]);
        }
        t
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let clean = |c: &str| c.replace(['\t', '\n'], " ");
        s.push_str(&self.header.iter().map(|h| clean(h)).collect::<Vec<_>>().join("\t"));
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.iter().map(|c| clean(c)).collect::<Vec<_>>().join("\t"));
            s.push('\n');
        }
        s
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram with γ-labels on the edges and elements ranked by length.
pub fn dot(poset: &Poset) -> String {
    let g = poset.graph();
    let mut s = String::new();
    let _ = writeln!(s, "digraph {} {{", quote(&poset.name()));
    s.push_str("  rankdir=BT;\n  node [shape=plaintext];\n  edge [arrowhead=none, fontsize=9];\n");
    let mut ranks: Vec<Vec<usize>> = Vec::new();
    for x in 0..g.len() {
        let r = poset.rank(x);
        if ranks.len() <= r {
            ranks.resize(r + 1, Vec::new());
        }
        ranks[r].push(x);
    }
    for x in 0..g.len() {
        let _ = writeln!(s, "  n{} [label={}];", x, quote(&poset.element(x)));
    }
    for level in ranks.iter().filter(|l| !l.is_empty()) {
        let names: Vec<String> = level.iter().map(|x| format!("n{}", x)).collect();
        let _ = writeln!(s, "  {{ rank=same; {}; }}", names.join("; "));
    }
    for (x, y) in g.edges() {
        let _ = writeln!(s, "  n{} -> n{} [label={}];", x, y, quote(&poset.edge_label(x, y)));
    }
    s.push_str("}\n");
    s
}
