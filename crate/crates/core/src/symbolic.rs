//! Directed graphs as multivalued systems, periodic orbit enumeration and circle coding.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hsc::HomotopySemiConjugacy;
use crate::orbit::Orbit;
use crate::space::{wrap01, Point, Space};
use crate::system::{CertificateMethod, ExpansionCertificate, Family, MultivaluedSystem};

/// Largest period accepted by [`enumerate_periodic`].
pub const MAX_PERIOD: usize = 12;

/// Closest an orbit point may come to an arc boundary before coding is refused.
pub const BOUNDARY_GUARD: f64 = 1e-8;

/// Vertices `0..n_vertices`; edge `e` runs from `edges[e].0` (tail) to `edges[e].1` (head).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSystem {
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

pub fn graph_system(n_vertices: usize, edges: Vec<(usize, usize)>) -> Result<GraphSystem> {
    if edges.is_empty() {
        return Err(Error::Input(
            "a graph system needs at least one edge".into(),
        ));
    }
    if let Some(k) = edges
        .iter()
        .position(|&(a, b)| a >= n_vertices || b >= n_vertices)
    {
        return Err(Error::Input(format!(
            "edge {k} {:?} has an endpoint outside 0..{n_vertices}",
            edges[k]
        )));
    }
    Ok(GraphSystem { n_vertices, edges })
}

impl GraphSystem {
    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        let mut a = vec![vec![0u64; self.n_vertices]; self.n_vertices];
        for &(s, t) in &self.edges {
            a[s][t] += 1;
        }
        a
    }

    pub fn to_system(&self) -> MultivaluedSystem {
        MultivaluedSystem {
            x0: Space::FiniteDiscrete {
                size: self.n_vertices,
            },
            x1: Space::FiniteDiscrete {
                size: self.edges.len(),
            },
            family: Family::Graph(self.clone()),
            certificate: Some(ExpansionCertificate {
                lambda: f64::INFINITY,
                delta: 0.5,
                method: CertificateMethod::Analytic,
            }),
        }
    }

    /// Edges leaving each vertex.
    fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_vertices];
        for (e, &(s, _)) in self.edges.iter().enumerate() {
            out[s].push(e);
        }
        out
    }

    /// All oriented paths of `n` edges, in lexicographic order of edge indices.
    pub fn paths(&self, n: usize) -> Vec<Vec<usize>> {
        let out = self.out_edges();
        let mut words: Vec<Vec<usize>> = (0..self.edges.len()).map(|e| vec![e]).collect();
        if n == 0 {
            return Vec::new();
        }
        for _ in 1..n {
            let mut next = Vec::new();
            for w in &words {
                let head = self.edges[*w.last().expect("nonempty")].1;
                for &e in &out[head] {
                    let mut v = w.clone();
                    v.push(e);
                    next.push(v);
                }
            }
            words = next;
        }
        words
    }
}

/// Closed oriented edge sequences of length `n`, one per starting position.
pub fn enumerate_periodic(graph: &GraphSystem, n: usize) -> Result<Vec<Vec<usize>>> {
    if n == 0 || n > MAX_PERIOD {
        return Err(Error::Input(format!(
            "period must lie in 1..={MAX_PERIOD}, got {n}"
        )));
    }
    let out = graph.out_edges();
    let mut found = Vec::new();
    let mut stack: Vec<usize> = Vec::with_capacity(n);
    for e in 0..graph.edges.len() {
        stack.clear();
        stack.push(e);
        extend_cycles(graph, &out, n, &mut stack, &mut found);
    }
    Ok(found)
}

fn extend_cycles(
    graph: &GraphSystem,
    out: &[Vec<usize>],
    n: usize,
    stack: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    let head = graph.edges[*stack.last().expect("nonempty")].1;
    if stack.len() == n {
        if head == graph.edges[stack[0]].0 {
            found.push(stack.clone());
        }
        return;
    }
    for &e in &out[head] {
        stack.push(e);
        extend_cycles(graph, out, n, stack, found);
        stack.pop();
    }
}

/// `trace(A^n)` by repeated multiplication.
pub fn trace_power(a: &[Vec<u64>], n: usize) -> u64 {
    let m = a.len();
    let mut p: Vec<Vec<u64>> = (0..m)
        .map(|i| (0..m).map(|j| u64::from(i == j)).collect())
        .collect();
    for _ in 0..n {
        let mut q = vec![vec![0u64; m]; m];
        for i in 0..m {
            for k in 0..m {
                if p[i][k] == 0 {
                    continue;
                }
                for j in 0..m {
                    q[i][j] += p[i][k] * a[k][j];
                }
            }
        }
        p = q;
    }
    (0..m).map(|i| p[i][i]).sum()
}

/// The block system `iota, sigma : X^n -> X^(n-1)` on paths of `n` and `n - 1` edges
/// (vertices when `n = 1`), with its semi-conjugacy back to `graph`.
///
/// `iota` drops the last edge and `sigma` the first. The semi-conjugacy sends a word to its
/// first edge and first vertex, with constant homotopies.
pub fn higher_block(
    graph: &GraphSystem,
    n: usize,
) -> Result<(MultivaluedSystem, HomotopySemiConjugacy)> {
    if n == 0 {
        return Err(Error::Input("block length must be positive".into()));
    }
    let original = Arc::new(graph.to_system());
    if n == 1 {
        return Ok((graph.to_system(), HomotopySemiConjugacy::identity(original)));
    }
    let words1 = graph.paths(n);
    let words0 = graph.paths(n - 1);
    let index0: HashMap<&[usize], usize> = words0
        .iter()
        .enumerate()
        .map(|(k, w)| (w.as_slice(), k))
        .collect();
    let edges = words1
        .iter()
        .map(|w| (index0[&w[..n - 1]], index0[&w[1..]]))
        .collect::<Vec<_>>();
    let block = graph_system(words0.len(), edges)?;
    let block_system = Arc::new(block.to_system());

    let first_edge: Arc<Vec<usize>> = Arc::new(words1.iter().map(|w| w[0]).collect());
    let first_vertex: Arc<Vec<usize>> =
        Arc::new(words0.iter().map(|w| graph.edges[w[0]].0).collect());
    let h0 = {
        let f = first_vertex.clone();
        Arc::new(move |p: &Point| Point::Vertex(f[p.as_vertex().expect("vertex")]))
    };
    let h1 = {
        let f = first_edge.clone();
        Arc::new(move |p: &Point| Point::Vertex(f[p.as_vertex().expect("edge")]))
    };
    let g = {
        let (s, h0) = (block_system.clone(), h0.clone());
        Arc::new(move |x: &Point, _t: f64| h0(&s.sigma(x)))
    };
    let h = {
        let (s, h0) = (block_system.clone(), h0.clone());
        Arc::new(move |x: &Point, _t: f64| h0(&s.iota(x)))
    };
    let hsc = HomotopySemiConjugacy::new(block_system.clone(), original, h0, h1, g, h);
    Ok(((*block_system).clone(), hsc))
}

/// The arcs `[k/d, (k+1)/d)` of a degree `d` circle map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkovPartition {
    pub degree: u32,
}

impl MarkovPartition {
    pub fn new(degree: u32) -> Result<MarkovPartition> {
        if degree < 2 {
            return Err(Error::Input(format!(
                "partition degree must be at least 2, got {degree}"
            )));
        }
        Ok(MarkovPartition { degree })
    }

    /// Label of the arc containing `x`, or `None` within the guard of a boundary.
    pub fn symbol(&self, x: f64) -> Option<usize> {
        let d = self.degree as f64;
        let y = wrap01(x) * d;
        let k = y.floor();
        let to_edge = (y - k).min(k + 1.0 - y) / d;
        if to_edge < BOUNDARY_GUARD {
            return None;
        }
        Some((k as usize).min(self.degree as usize - 1))
    }
}

pub fn code_orbit(
    system: &MultivaluedSystem,
    partition: &MarkovPartition,
    orbit: &Orbit,
) -> Result<Vec<usize>> {
    match system.family {
        Family::Circle { degree, .. } if degree == partition.degree => {}
        _ => {
            return Err(Error::Input(format!(
                "coding needs a circle system of degree {}",
                partition.degree
            )))
        }
    }
    orbit
        .points
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let x = p.as_real().ok_or(Error::Domain {
                index: orbit.start + k as i64,
            })?;
            partition.symbol(x).ok_or_else(|| {
                Error::Input(format!(
                    "point {} at index {} is within {BOUNDARY_GUARD:e} of an arc boundary",
                    x,
                    orbit.start + k as i64
                ))
            })
        })
        .collect()
}

/// The point `0.s0 s1 s2 ...` in base `d` for the sequence `prefix (period)^inf`.
pub fn decode_symbols(d: u32, prefix: &[usize], period: &[usize]) -> Result<f64> {
    if d < 2 {
        return Err(Error::Input(format!("degree must be at least 2, got {d}")));
    }
    if period.is_empty() {
        return Err(Error::Input("the periodic block must be nonempty".into()));
    }
    if let Some(&s) = prefix.iter().chain(period).find(|&&s| s >= d as usize) {
        return Err(Error::Input(format!("symbol {s} is not below {d}")));
    }
    let df = d as f64;
    let digits = |s: &[usize]| {
        s.iter().fold((0.0, 1.0), |(acc, scale), &k| {
            let scale = scale / df;
            (acc + k as f64 * scale, scale)
        })
    };
    let (head, head_scale) = digits(prefix);
    let (cycle, cycle_scale) = digits(period);
    Ok(wrap01(head + head_scale * cycle / (1.0 - cycle_scale)))
}
