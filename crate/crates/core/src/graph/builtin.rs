//! Named graph families. Parameters are lengths and counts given as decimals;
//! the mini-grammar `name:p1,p2,...` is parsed by [`parse_builtin`].

use super::{EdgeDecl, MetricGraph};
use crate::error::{Error, Result};

/// `(name, parameter synopsis, description)` for every builtin.
pub const BUILTINS: &[(&str, &str, &str)] = &[
    ("path", "l1,l2,...", "path v0-v1-...-vn with the given edge lengths"),
    ("star", "m,l", "star with m edges of length l at centre c"),
    ("cycle", "l1,l2,...", "cycle v1-v2-...-v1 (one length gives a loop)"),
    ("loop", "l", "single loop edge of length l"),
    ("lasso", "loop,tail", "tail v1-v2 and a two-edge cycle of total length loop at v2"),
    ("dumbbell", "total,loop", "two loops of length loop joined by a handle of length total-2*loop"),
    ("kbip", "m,n,l", "complete bipartite graph K_{m,n} with all lengths l"),
    ("theta", "l1,l2,...", "parallel edges between two vertices"),
    ("flower", "l1,l2,...", "loops attached at a single vertex"),
];

fn invalid(name: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name: name.to_string(),
        reason: reason.into(),
    }
}

fn count(name: &str, x: f64) -> Result<usize> {
    if x >= 1.0 && x.fract() == 0.0 && x < 1e6 {
        Ok(x as usize)
    } else {
        Err(invalid(name, format!("expected a positive integer, got {x}")))
    }
}

fn arity(name: &str, params: &[f64], n: usize) -> Result<()> {
    if params.len() == n {
        Ok(())
    } else {
        Err(invalid(name, format!("expected {n} parameters, got {}", params.len())))
    }
}

fn nonempty(name: &str, params: &[f64]) -> Result<()> {
    if params.is_empty() {
        Err(invalid(name, "expected at least one length"))
    } else {
        Ok(())
    }
}

fn positive(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(invalid(name, format!("length must be positive and finite, got {x}")))
    }
}

pub fn builtin(name: &str, params: &[f64]) -> Result<MetricGraph> {
    let mut decls = Vec::new();
    let mut edge = |a: String, b: String, l: f64| {
        let id = format!("e{}", decls.len() + 1);
        decls.push(EdgeDecl::new(id, a, b, l));
    };
    match name {
        "path" => {
            nonempty(name, params)?;
            for (i, &l) in params.iter().enumerate() {
                edge(format!("v{i}"), format!("v{}", i + 1), positive(name, l)?);
            }
        }
        "star" => {
            arity(name, params, 2)?;
            let m = count(name, params[0])?;
            let l = positive(name, params[1])?;
            for i in 1..=m {
                edge("c".into(), format!("v{i}"), l);
            }
        }
        "cycle" => {
            nonempty(name, params)?;
            let n = params.len();
            for (i, &l) in params.iter().enumerate() {
                edge(format!("v{}", i + 1), format!("v{}", (i + 1) % n + 1), positive(name, l)?);
            }
        }
        "loop" => {
            arity(name, params, 1)?;
            edge("v1".into(), "v1".into(), positive(name, params[0])?);
        }
        "lasso" => {
            arity(name, params, 2)?;
            let lp = positive(name, params[0])?;
            let tail = positive(name, params[1])?;
            edge("v1".into(), "v2".into(), tail);
            edge("v3".into(), "v2".into(), lp / 2.0);
            edge("v3".into(), "v2".into(), lp / 2.0);
        }
        "dumbbell" => {
            arity(name, params, 2)?;
            let total = positive(name, params[0])?;
            let lp = positive(name, params[1])?;
            let handle = total - 2.0 * lp;
            if handle < -1e-12 * total {
                return Err(invalid(name, "loops longer than the total length"));
            }
            let b = if handle > 1e-12 * total { "b" } else { "a" };
            edge("a'".into(), "a".into(), lp / 2.0);
            edge("a'".into(), "a".into(), lp / 2.0);
            if b == "b" {
                edge("a".into(), "b".into(), handle);
            }
            edge("b'".into(), b.into(), lp / 2.0);
            edge("b'".into(), b.into(), lp / 2.0);
        }
        "kbip" => {
            arity(name, params, 3)?;
            let m = count(name, params[0])?;
            let n = count(name, params[1])?;
            let l = positive(name, params[2])?;
            for i in 1..=m {
                for j in 1..=n {
                    edge(format!("u{i}"), format!("w{j}"), l);
                }
            }
        }
        "theta" => {
            nonempty(name, params)?;
            for &l in params {
                edge("a".into(), "b".into(), positive(name, l)?);
            }
        }
        "flower" => {
            nonempty(name, params)?;
            for &l in params {
                edge("c".into(), "c".into(), positive(name, l)?);
            }
        }
        _ => return Err(Error::UnknownBuiltin(name.to_string())),
    }
    MetricGraph::build(decls)
}

/// Parses `name:p1,p2,...` (or a bare `name`) and builds the graph.
pub fn parse_builtin(spec: &str) -> Result<MetricGraph> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let params = rest
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| invalid(name, format!("`{s}` is not a decimal number")))
        })
        .collect::<Result<Vec<f64>>>()?;
    builtin(name, &params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::analyze;

    #[test]
    fn star() {
        let g = parse_builtin("star:3,1").unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.degree(g.vertex_by_label("c").unwrap()), 3);
        assert_eq!(g.equilateral_length(), Some(1.0));
    }

    #[test]
    fn cycles() {
        let g = parse_builtin("cycle:1,3").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 2));
        assert!(analyze(&g).bipartite);
        let g = parse_builtin("cycle:5,3,2,2").unwrap();
        assert_eq!(g.total_length(), 12.0);
        let g = parse_builtin("cycle:1").unwrap();
        assert!(g.edges()[0].is_loop());
    }

    #[test]
    fn dumbbell_shapes() {
        let g = parse_builtin("dumbbell:6,2").unwrap();
        assert_eq!(g.edge_count(), 5);
        assert!((g.total_length() - 6.0).abs() < 1e-12);
        let a = analyze(&g);
        assert!(a.bipartite);
        assert_eq!(a.betti, 2);
        assert!((a.doubly_connected_length - 4.0).abs() < 1e-12);
        let g = parse_builtin("dumbbell:4,2").unwrap();
        assert_eq!(g.edge_count(), 4);
        assert!(parse_builtin("dumbbell:3,2").is_err());
    }

    #[test]
    fn kbip() {
        let g = parse_builtin("kbip:2,3,1").unwrap();
        let a = analyze(&g);
        assert_eq!(g.edge_count(), 6);
        assert!(a.bipartite);
        assert_eq!(a.betti, 2);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_builtin("nope:1"), Err(Error::UnknownBuiltin(_))));
        assert!(matches!(parse_builtin("star:0,1"), Err(Error::InvalidParameter { .. })));
        assert!(matches!(parse_builtin("star:2.5,1"), Err(Error::InvalidParameter { .. })));
        assert!(matches!(parse_builtin("path:1,x"), Err(Error::InvalidParameter { .. })));
        assert!(matches!(parse_builtin("path:1,-1"), Err(Error::InvalidParameter { .. })));
        assert!(matches!(parse_builtin("path"), Err(Error::InvalidParameter { .. })));
    }
}
