//! DOT rendering. Solid arrows carry direct causality, dashed arrows the
//! one-way non-causal conflict arrows, dotted undirected edges symmetric
//! conflict, and double-headed arrows the flow relation. Nodes and edges
//! are emitted in sorted order.

use std::fmt::Write as _;

use crate::events::Relation;
use crate::structure::EventStructure;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn direct_causality(le: &Relation) -> Relation {
    let mut strict = le.clone();
    for i in 0..le.len() {
        strict.remove(i, i);
    }
    strict.transitive_reduction()
}

pub fn to_dot(s: &EventStructure) -> String {
    let events = s.events();
    let mut order: Vec<usize> = events.indices().collect();
    order.sort_by_key(|&i| events.name(i).to_string());

    let mut out = String::from("digraph es {\n");
    for &i in &order {
        let _ = writeln!(
            out,
            "  {} [label={}];",
            quote(events.name(i)),
            quote(&format!("{} : {}", events.name(i), events.label(i)))
        );
    }

    let mut lines: Vec<String> = Vec::new();
    match s {
        EventStructure::Pes(p) => {
            for (a, b) in direct_causality(p.causality()).pairs() {
                lines.push(format!("  {} -> {};", quote(events.name(a)), quote(events.name(b))));
            }
            for (a, b) in p.conflict().pairs() {
                if a < b {
                    lines.push(format!(
                        "  {} -> {} [dir=none, style=dotted];",
                        quote(events.name(a)),
                        quote(events.name(b))
                    ));
                }
            }
        }
        EventStructure::Aes(aes) => {
            for (a, b) in direct_causality(aes.causality()).pairs() {
                lines.push(format!("  {} -> {};", quote(events.name(a)), quote(events.name(b))));
            }
            for (a, b) in aes.aconflict().pairs() {
                let mutual = aes.arrow(b, a);
                if mutual && a < b {
                    lines.push(format!(
                        "  {} -> {} [dir=none, style=dotted];",
                        quote(events.name(a)),
                        quote(events.name(b))
                    ));
                } else if !mutual && !aes.lt(a, b) {
                    lines.push(format!(
                        "  {} -> {} [style=dashed];",
                        quote(events.name(a)),
                        quote(events.name(b))
                    ));
                }
            }
        }
        EventStructure::Fes(f) => {
            for (a, b) in f.flow().pairs() {
                lines.push(format!(
                    "  {} -> {} [dir=both];",
                    quote(events.name(a)),
                    quote(events.name(b))
                ));
            }
            for (a, b) in f.conflict().pairs() {
                if a < b {
                    lines.push(format!(
                        "  {} -> {} [dir=none, style=dotted];",
                        quote(events.name(a)),
                        quote(events.name(b))
                    ));
                }
            }
        }
    }
    lines.sort();
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pes::Pes;

    #[test]
    fn empty_structure_renders_empty_body() {
        let p = Pes::build_named(&[], &[], &[]).unwrap();
        let dot = to_dot(&p.into());
        assert_eq!(dot, "digraph es {\n}\n");
    }

    #[test]
    fn conflict_renders_as_dotted_undirected_edge() {
        let p = Pes::build_named(&[("a", "a"), ("b", "b")], &[], &[("a", "b")]).unwrap();
        let dot = to_dot(&p.into());
        assert!(dot.contains("\"a\" -> \"b\" [dir=none, style=dotted];"));
    }
}
