//! Text formats: `hgr-txt` hypergraphs and `label<TAB>part_id` partitions.
//!
//! `hgr-txt` holds one hyperedge per line as whitespace-separated vertex
//! tokens; a token repeated `k` times has multiplicity `k`. Lines starting
//! with `#` are comments, except two directives that may precede the first
//! edge:
//!
//! * `#n <count>` declares `count` vertices and makes tokens numeric ids.
//! * `#v <label> <label> ...` declares vertex labels in id order.
//!
//! Without a directive, vertices are the distinct tokens numbered by first
//! appearance.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::partition::Partition;

enum VertexSpace {
    FirstAppearance(HashMap<String, usize>, Vec<String>),
    Numeric(usize),
    Declared(HashMap<String, usize>, Vec<String>),
}

/// Parses `hgr-txt`. Errors carry 1-based line numbers.
pub fn parse_hgr(text: &str) -> Result<Hypergraph> {
    let mut space = VertexSpace::FirstAppearance(HashMap::new(), Vec::new());
    let mut directive_seen = false;
    let mut raw_edges: Vec<Vec<usize>> = Vec::new();

    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let mut tokens = rest.split_whitespace();
            let head = tokens.next();
            if !matches!(head, Some("n") | Some("v")) {
                continue;
            }
            if !raw_edges.is_empty() || directive_seen {
                return Err(Error::Parse {
                    line: lineno,
                    message: "vertex directives must come once, before the first hyperedge"
                        .into(),
                });
            }
            directive_seen = true;
            if head == Some("n") {
                let count = tokens
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .filter(|&c| c > 0)
                    .ok_or_else(|| Error::Parse {
                        line: lineno,
                        message: "expected '#n <positive count>'".into(),
                    })?;
                if tokens.next().is_some() {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "trailing tokens after '#n <count>'".into(),
                    });
                }
                space = VertexSpace::Numeric(count);
            } else {
                let mut ids = HashMap::new();
                let mut labels = Vec::new();
                for t in tokens {
                    if ids.insert(t.to_string(), labels.len()).is_some() {
                        return Err(Error::Parse {
                            line: lineno,
                            message: format!("label '{t}' declared twice"),
                        });
                    }
                    labels.push(t.to_string());
                }
                if labels.is_empty() {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "'#v' declares no labels".into(),
                    });
                }
                space = VertexSpace::Declared(ids, labels);
            }
            continue;
        }

        let mut edge = Vec::new();
        for token in line.split_whitespace() {
            let id = match &mut space {
                VertexSpace::FirstAppearance(ids, labels) => {
                    let next = labels.len();
                    *ids.entry(token.to_string()).or_insert_with(|| {
                        labels.push(token.to_string());
                        next
                    })
                }
                VertexSpace::Numeric(count) => match token.parse::<usize>() {
                    Ok(v) if v < *count => v,
                    _ => {
                        return Err(Error::Parse {
                            line: lineno,
                            message: format!("token '{token}' is not a vertex id below {count}"),
                        })
                    }
                },
                VertexSpace::Declared(ids, _) => *ids.get(token).ok_or_else(|| Error::Parse {
                    line: lineno,
                    message: format!("token '{token}' is not a declared vertex"),
                })?,
            };
            edge.push(id);
        }
        if edge.len() < 2 {
            return Err(Error::Parse {
                line: lineno,
                message: format!(
                    "hyperedge has {} vertex occurrence(s); at least 2 are required",
                    edge.len()
                ),
            });
        }
        raw_edges.push(edge);
    }

    let (n, labels) = match space {
        VertexSpace::FirstAppearance(_, labels) => (labels.len(), Some(labels)),
        VertexSpace::Numeric(count) => (count, None),
        VertexSpace::Declared(_, labels) => (labels.len(), Some(labels)),
    };
    if n == 0 {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: "no vertices: the file has no hyperedges and no '#n' directive".into(),
        });
    }
    let h = Hypergraph::build(n, &raw_edges)?;
    h.with_labels(labels)
}

/// Serializes to `hgr-txt` so that [`parse_hgr`] reproduces `h` exactly.
pub fn write_hgr(h: &Hypergraph) -> String {
    let mut out = String::new();
    let labels = match h.labels() {
        None => {
            out.push_str(&format!("#n {}\n", h.vertex_count()));
            None
        }
        Some(labels) => {
            if !first_appearance_order(h) {
                out.push_str("#v");
                for l in labels {
                    out.push(' ');
                    out.push_str(l);
                }
                out.push('\n');
            }
            Some(labels)
        }
    };
    for e in h.edges() {
        let tokens: Vec<String> = e
            .occurrences()
            .into_iter()
            .map(|v| match labels {
                Some(l) => l[v].clone(),
                None => v.to_string(),
            })
            .collect();
        out.push_str(&tokens.join(" "));
        out.push('\n');
    }
    out
}

// True when reading the edges in order (members ascending) meets vertex ids
// in the order 0, 1, 2, ... and touches every vertex.
fn first_appearance_order(h: &Hypergraph) -> bool {
    let mut next = 0;
    for e in h.edges() {
        for v in e.support() {
            if v == next {
                next += 1;
            } else if v > next {
                return false;
            }
        }
    }
    next == h.vertex_count()
}

/// Parses a partition file: one `label<TAB>part_id` line per vertex.
///
/// Any whitespace separates the two columns. Part ids are arbitrary tokens.
pub fn parse_partition(h: &Hypergraph, text: &str) -> Result<Partition> {
    let index: HashMap<String, usize> = (0..h.vertex_count()).map(|v| (h.label(v), v)).collect();
    let mut part_names: HashMap<String, usize> = HashMap::new();
    let mut labels = vec![usize::MAX; h.vertex_count()];
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split_whitespace();
        let (Some(label), Some(part), None) = (cols.next(), cols.next(), cols.next()) else {
            return Err(Error::Parse {
                line: lineno,
                message: "expected 'label<TAB>part_id'".into(),
            });
        };
        let &v = index.get(label).ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("unknown vertex '{label}'"),
        })?;
        if labels[v] != usize::MAX {
            return Err(Error::Parse {
                line: lineno,
                message: format!("vertex '{label}' assigned twice"),
            });
        }
        let next = part_names.len();
        labels[v] = *part_names.entry(part.to_string()).or_insert(next);
    }
    let missing: Vec<String> = labels
        .iter()
        .enumerate()
        .filter(|(_, &l)| l == usize::MAX)
        .map(|(v, _)| h.label(v))
        .collect();
    if !missing.is_empty() {
        let shown: Vec<&str> = missing.iter().take(5).map(String::as_str).collect();
        return Err(Error::PartitionCoverage(format!(
            "{} vertex(es) without a part, e.g. {}",
            missing.len(),
            shown.join(", ")
        )));
    }
    Ok(Partition::from_labels(&labels))
}

/// Writes one `label<TAB>part_id` line per vertex in id order.
pub fn write_partition(h: &Hypergraph, partition: &Partition) -> String {
    let mut out = String::new();
    for v in 0..partition.vertex_count() {
        out.push_str(&h.label(v));
        out.push('\t');
        out.push_str(&partition.part_of(v).to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &str = "# five vertices\nv1 v2 v3\nv3 v4 v5\nv1 v4\n";

    #[test]
    fn parses_fig1() {
        let h = parse_hgr(FIG1).unwrap();
        assert_eq!(h.vertex_count(), 5);
        assert_eq!(h.degrees(), &[2, 1, 2, 2, 1]);
        assert_eq!(h.label(3), "v4");
        assert_eq!(write_hgr(&h), "v1 v2 v3\nv3 v4 v5\nv1 v4\n");
    }

    #[test]
    fn multiplicity_and_numeric_header() {
        let h = parse_hgr("#n 4\n0 0 1\n2 1\n").unwrap();
        assert_eq!(h.vertex_count(), 4);
        assert_eq!(h.edge(0).multiplicity(0), 2);
        assert_eq!(h.degree(3), 0);
        assert_eq!(write_hgr(&h), "#n 4\n0 0 1\n1 2\n");
        assert_eq!(parse_hgr(&write_hgr(&h)).unwrap(), h);
    }

    #[test]
    fn errors_have_line_numbers() {
        assert_eq!(
            parse_hgr("a b\n\nc\n"),
            Err(Error::Parse {
                line: 3,
                message: "hyperedge has 1 vertex occurrence(s); at least 2 are required".into()
            })
        );
        assert!(matches!(
            parse_hgr("#n 2\n0 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_hgr("a b\n#n 3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_hgr("# nothing\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn non_appearance_order_labels_round_trip() {
        let h = Hypergraph::build_labeled(
            vec!["x".into(), "y".into(), "z".into(), "lonely".into()],
            &[vec![2, 1], vec![0, 2]],
        )
        .unwrap();
        let text = write_hgr(&h);
        assert!(text.starts_with("#v x y z lonely\n"));
        assert_eq!(parse_hgr(&text).unwrap(), h);
    }

    #[test]
    fn partition_file() {
        let h = parse_hgr(FIG1).unwrap();
        let p = parse_partition(&h, "v1\ta\nv2\tb\nv3\tb\nv4\ta\nv5 c\n").unwrap();
        assert_eq!(p.parts(), vec![vec![0, 3], vec![1, 2], vec![4]]);
        assert_eq!(
            write_partition(&h, &p),
            "v1\t0\nv2\t1\nv3\t1\nv4\t0\nv5\t2\n"
        );
        assert_eq!(parse_partition(&h, &write_partition(&h, &p)).unwrap(), p);
        assert!(matches!(
            parse_partition(&h, "v1\t0\nv2\t0\n"),
            Err(Error::PartitionCoverage(_))
        ));
        assert!(matches!(
            parse_partition(&h, "v9\t0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_partition(&h, "v1\t0\nv1\t1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
