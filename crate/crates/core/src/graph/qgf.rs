//! QGF text format: one `edge <name> <vertexA> <vertexB> <length>` directive
//! per line, `#` starts a comment, tokens are whitespace separated.

use super::{EdgeDecl, MetricGraph};
use crate::error::{Error, Result};

pub fn parse(text: &str) -> Result<MetricGraph> {
    let mut decls = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some(&directive) = tokens.first() else {
            continue;
        };
        if directive != "edge" {
            return Err(Error::Parse {
                line,
                message: format!("unknown directive `{directive}`"),
            });
        }
        if tokens.len() != 5 {
            return Err(Error::Parse {
                line,
                message: format!("`edge` expects 4 arguments, got {}", tokens.len() - 1),
            });
        }
        let length: f64 = tokens[4].parse().map_err(|_| Error::Parse {
            line,
            message: format!("`{}` is not a decimal length", tokens[4]),
        })?;
        decls.push(EdgeDecl::new(tokens[1], tokens[2], tokens[3], length));
    }
    MetricGraph::build(decls).map_err(|e| match e {
        Error::EmptyGraph => Error::Parse {
            line: 0,
            message: "no edges declared".into(),
        },
        other => other,
    })
}

pub fn to_qgf(g: &MetricGraph) -> String {
    let mut out = String::new();
    for e in g.edges() {
        out.push_str(&format!(
            "edge {} {} {} {}\n",
            e.name,
            g.vertex(e.low).label,
            g.vertex(e.high).label,
            e.length
        ));
    }
    out
}
