//! Sign conditions on cycle lengths and exact rational lengths.

use crate::error::{Error, Result};
use crate::graph::{blocks, has_independent_cycles, EdgeId, MetricGraph};

/// Largest cycle searched exhaustively.
pub const MAX_CYCLE_EDGES: usize = 24;

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `x` as a reduced fraction, read from its shortest decimal representation.
/// Fails for values needing more than 12 fractional digits or exponents.
pub fn exact_rational(x: f64) -> Result<(i128, i128)> {
    let text = format!("{x}");
    let (int, frac) = text.split_once('.').unwrap_or((&text, ""));
    if frac.len() > 12 || !x.is_finite() || text.contains('e') {
        return Err(Error::NotRational(x));
    }
    let digits: String = format!("{int}{frac}");
    let num: i128 = digits.parse().map_err(|_| Error::NotRational(x))?;
    let den = 10i128.pow(frac.len() as u32);
    let g = gcd(num, den).max(1);
    Ok((num / g, den / g))
}

/// Integers proportional to `lengths` with gcd 1, and the scale `x` such that
/// `x · L(e)` is that integer. `None` if some length is not a short decimal.
pub fn integer_lengths(lengths: &[f64]) -> Option<(Vec<i128>, f64)> {
    let fracs: Vec<(i128, i128)> = lengths.iter().map(|&l| exact_rational(l)).collect::<Result<_>>().ok()?;
    let mut lcm: i128 = 1;
    for &(_, q) in &fracs {
        lcm = lcm.checked_mul(q / gcd(lcm, q))?;
    }
    let mut ints = Vec::with_capacity(fracs.len());
    for &(p, q) in &fracs {
        ints.push(p.checked_mul(lcm / q)?);
    }
    let g = ints.iter().fold(0, |acc, &n| gcd(acc, n));
    if g == 0 {
        return None;
    }
    let ints: Vec<i128> = ints.into_iter().map(|n| n / g).collect();
    Some((ints, lcm as f64 / g as f64))
}

/// Outcome for one reference edge of one cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceWitness {
    pub reference: EdgeId,
    /// Signs over the cycle's edges reaching the smallest admissible quotient.
    pub signs: Option<Vec<i8>>,
    /// `Σ ν(e) L(e) / L(ê)` for `signs`.
    pub quotient: Option<u64>,
    /// Every value of `Σ ν(e) L(e)` over all sign vectors (the search certificate).
    pub achievable_sums: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleWitness {
    pub edges: Vec<EdgeId>,
    pub references: Vec<ReferenceWitness>,
    /// Signs with `Σ ν(e) L(e) = 0`, if any.
    pub zero_sum: Option<Vec<i8>>,
}

impl CycleWitness {
    /// Every reference edge has signs with an even positive quotient.
    pub fn quotient_condition(&self) -> bool {
        self.references.iter().all(|r| r.signs.is_some())
    }

    pub fn zero_sum_condition(&self) -> bool {
        self.zero_sum.is_some()
    }

    pub fn sufficient(&self) -> bool {
        self.quotient_condition() || self.zero_sum_condition()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleSignWitness {
    pub cycles: Vec<CycleWitness>,
    /// Whether the search ran in exact integer arithmetic.
    pub exact: bool,
}

impl CycleSignWitness {
    pub fn hypothesis_holds(&self) -> bool {
        self.cycles.iter().all(CycleWitness::sufficient)
    }
}

/// Signs for `mask`, first edge most significant, `0` bit meaning `+1`; masks
/// in increasing order are lexicographic with `+` before `-`.
fn signs_of(mask: u32, n: usize) -> Vec<i8> {
    (0..n)
        .map(|i| if mask >> (n - 1 - i) & 1 == 0 { 1 } else { -1 })
        .collect()
}

fn search_cycle(g: &MetricGraph, edges: Vec<EdgeId>) -> Result<(CycleWitness, bool)> {
    let n = edges.len();
    if n > MAX_CYCLE_EDGES {
        return Err(Error::InvalidParameter {
            name: "cycle".into(),
            reason: format!("{n} edges exceed the exhaustive search limit {MAX_CYCLE_EDGES}"),
        });
    }
    let lengths: Vec<f64> = edges.iter().map(|&e| g.edge(e).length).collect();
    let exact = integer_lengths(&lengths);
    let masks = 0..(1u32 << n);
    let sums_exact: Option<Vec<i128>> = exact.as_ref().map(|(ints, _)| {
        masks
            .clone()
            .map(|m| signs_of(m, n).iter().zip(ints).map(|(&s, &l)| s as i128 * l).sum())
            .collect()
    });
    let sums_float: Vec<f64> = masks
        .clone()
        .map(|m| signs_of(m, n).iter().zip(&lengths).map(|(&s, &l)| s as f64 * l).sum())
        .collect();
    let total: f64 = lengths.iter().sum();
    let is_zero = |i: usize| match &sums_exact {
        Some(s) => s[i] == 0,
        None => sums_float[i].abs() <= 1e-10 * total,
    };
    // Even positive quotient for sum index `i` against reference `r`.
    let quotient = |i: usize, r: usize| -> Option<u64> {
        match (&sums_exact, &exact) {
            (Some(s), Some((ints, _))) => {
                let (num, den) = (s[i], ints[r]);
                (num > 0 && num % den == 0 && (num / den) % 2 == 0).then(|| (num / den) as u64)
            }
            _ => {
                let q = sums_float[i] / lengths[r];
                let rq = q.round();
                ((q - rq).abs() <= 1e-10 * rq.abs().max(1.0) && rq >= 2.0 && (rq as u64).is_multiple_of(2)).then_some(rq as u64)
            }
        }
    };
    let mut achievable: Vec<f64> = match (&sums_exact, &exact) {
        (Some(s), Some((_, x))) => s.iter().map(|&v| v as f64 / x).collect(),
        _ => sums_float.clone(),
    };
    achievable.sort_by(f64::total_cmp);
    achievable.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * total);
    let references = (0..n)
        .map(|r| {
            let best = (0..sums_float.len())
                .filter_map(|i| quotient(i, r).map(|q| (q, i)))
                .min_by_key(|&(q, i)| (q, i));
            ReferenceWitness {
                reference: edges[r],
                signs: best.map(|(_, i)| signs_of(i as u32, n)),
                quotient: best.map(|(q, _)| q),
                achievable_sums: achievable.clone(),
            }
        })
        .collect();
    let zero_sum = (0..sums_float.len()).find(|&i| is_zero(i)).map(|i| signs_of(i as u32, n));
    Ok((
        CycleWitness {
            edges,
            references,
            zero_sum,
        },
        exact.is_some(),
    ))
}

/// Exhaustive sign search on every cycle of a graph whose cycles are independent.
pub fn check_cycle_sign_condition(g: &MetricGraph) -> Result<CycleSignWitness> {
    if !has_independent_cycles(g) {
        return Err(Error::DependentCycles);
    }
    let mut cycles = Vec::new();
    let mut exact = true;
    for b in blocks(g) {
        if b.edges.len() == 1 && !g.edge(b.edges[0]).is_loop() {
            continue;
        }
        let (w, ex) = search_cycle(g, b.edges)?;
        exact &= ex;
        cycles.push(w);
    }
    Ok(CycleSignWitness { cycles, exact })
}
