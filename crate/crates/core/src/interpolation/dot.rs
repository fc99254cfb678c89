use std::fmt::Write;

use crate::prover::{Closure, Side, TableauNode};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn fill(side: Side) -> &'static str {
    match side {
        Side::Left => "white",
        Side::Right => "gray80",
    }
}

/// Graphviz rendering of a tableau. Right-side nodes are shaded and closure edges are
/// dashed, pointing from the leaf to its partner and labelled with the partner's side.
pub fn emit_tableau_dot(t: &TableauNode) -> String {
    let mut out = String::from("digraph tableau {\n  node [shape=box, style=filled];\n");
    let mut next = 0usize;
    let mut closures = Vec::new();
    emit(t, &mut Vec::new(), &mut next, &mut out, &mut closures);
    out.push_str(&closures.concat());
    out.push_str("}\n");
    out
}

fn emit(
    node: &TableauNode,
    path: &mut Vec<usize>,
    next: &mut usize,
    out: &mut String,
    closures: &mut Vec<String>,
) {
    let id = *next;
    *next += 1;
    match &node.literal {
        None => writeln!(out, "  n{id} [label=\"\", shape=point, fillcolor=black];").unwrap(),
        Some(l) => writeln!(
            out,
            "  n{id} [label={}, fillcolor={}];",
            quote(&l.to_string()),
            fill(node.side)
        )
        .unwrap(),
    }
    if let Some(&parent) = path.last() {
        writeln!(out, "  n{parent} -> n{id};").unwrap();
    }
    if let Closure::Ancestor { distance, side } = node.closure {
        if distance <= path.len() {
            let partner = path[path.len() - distance];
            closures.push(format!(
                "  n{id} -> n{partner} [style=dashed, constraint=false, label={}];\n",
                quote(&side.to_string())
            ));
        }
    }
    path.push(id);
    for c in &node.children {
        emit(c, path, next, out, closures);
    }
    path.pop();
}
