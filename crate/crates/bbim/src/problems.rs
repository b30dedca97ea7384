//! Benchmark problem encoders and instance generators: MAX-CUT (dense
//! random and Gset files) and 3-regular 3-XORSAT (second-order gadget and
//! third-order native encodings).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dynamics::split_seed;
use crate::model::{IsingInstance, ModelError, SpinState};

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("vertex index {index} out of range for {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },
    #[error("invalid edge ({u}, {v}): {msg}")]
    InvalidEdge { u: usize, v: usize, msg: String },
    #[error("state length {got} does not match vertex count {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("edge count mismatch: header says {expected}, found {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("invalid gadget parameters ({0}, {1}, {2}, {3})")]
    InvalidGadget(i64, i64, i64, i64),
    #[error("3-regular incidence generation failed after {0} attempts")]
    GenerationFailed(usize),
    #[error("invalid clause: {0}")]
    InvalidClause(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Undirected weighted graph for MAX-CUT; edges stored with u < v.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxCutGraph {
    n_vertices: usize,
    edges: Vec<(usize, usize, i64)>,
}

impl MaxCutGraph {
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize, i64)>) -> Result<Self, ProblemError> {
        let mut seen = std::collections::HashSet::new();
        for &(u, v, w) in &edges {
            if u >= v {
                return Err(ProblemError::InvalidEdge {
                    u,
                    v,
                    msg: "endpoints must satisfy u < v".into(),
                });
            }
            if v >= n_vertices {
                return Err(ProblemError::VertexOutOfRange { index: v, n: n_vertices });
            }
            if w == 0 {
                return Err(ProblemError::InvalidEdge { u, v, msg: "zero weight".into() });
            }
            if !seen.insert((u, v)) {
                return Err(ProblemError::InvalidEdge { u, v, msg: "duplicate edge".into() });
            }
        }
        Ok(Self { n_vertices, edges })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[(usize, usize, i64)] {
        &self.edges
    }

    pub fn total_weight(&self) -> i64 {
        self.edges.iter().map(|&(_, _, w)| w).sum()
    }
}

/// Ising encoding of MAX-CUT: J_ij = -w_ij, no fields, no triples.
pub fn maxcut_to_ising(graph: &MaxCutGraph) -> Result<IsingInstance, ProblemError> {
    let pairs = graph.edges.iter().map(|&(u, v, w)| (u, v, -w)).collect();
    Ok(IsingInstance::new(graph.n_vertices, pairs, vec![0; graph.n_vertices], vec![])?)
}

/// Total weight of edges crossing the partition.
pub fn cut_value(graph: &MaxCutGraph, state: &SpinState) -> Result<i64, ProblemError> {
    if state.len() != graph.n_vertices {
        return Err(ProblemError::DimensionMismatch {
            got: state.len(),
            expected: graph.n_vertices,
        });
    }
    Ok(graph
        .edges
        .iter()
        .filter(|&&(u, v, _)| state.get(u) != state.get(v))
        .map(|&(_, _, w)| w)
        .sum())
}

/// G(n, density) random graph with weights drawn uniformly from
/// `weight_set`; deterministic under `seed`.
pub fn gen_erdos_renyi(
    n: usize,
    density: f64,
    weight_set: &[i64],
    seed: u64,
) -> Result<MaxCutGraph, ProblemError> {
    assert!(n >= 2, "need at least two vertices");
    assert!(!weight_set.is_empty(), "weight set must be nonempty");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                let w = *weight_set.choose(&mut rng).expect("nonempty");
                edges.push((u, v, w));
            }
        }
    }
    MaxCutGraph::new(n, edges)
}

/// Gset/rudy text: `n_vertices n_edges` header then 1-indexed `u v w`
/// lines. Edge count must match the header.
pub fn parse_gset(text: &str) -> Result<MaxCutGraph, ProblemError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (header_line, header) = lines
        .next()
        .ok_or(ProblemError::Parse { line: 0, msg: "empty input".into() })?;
    let parse_usize = |line: usize, s: &str| {
        s.parse::<usize>().map_err(|_| ProblemError::Parse {
            line,
            msg: format!("invalid integer '{s}'"),
        })
    };
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(ProblemError::Parse {
            line: header_line,
            msg: "header must be 'n_vertices n_edges'".into(),
        });
    }
    let n = parse_usize(header_line, head[0])?;
    let m = parse_usize(header_line, head[1])?;
    let mut edges = Vec::with_capacity(m);
    for (line, content) in lines {
        let tok: Vec<&str> = content.split_whitespace().collect();
        if tok.len() != 3 {
            return Err(ProblemError::Parse {
                line,
                msg: "edge line must be 'u v w'".into(),
            });
        }
        let u = parse_usize(line, tok[0])?;
        let v = parse_usize(line, tok[1])?;
        let w = tok[2].parse::<i64>().map_err(|_| ProblemError::Parse {
            line,
            msg: format!("invalid weight '{}'", tok[2]),
        })?;
        if u == 0 || v == 0 || u > n || v > n {
            return Err(ProblemError::VertexOutOfRange { index: u.max(v), n });
        }
        let (u, v) = (u - 1, v - 1);
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return Err(ProblemError::EdgeCountMismatch { expected: m, found: edges.len() });
    }
    MaxCutGraph::new(n, edges)
}

pub fn write_gset(graph: &MaxCutGraph) -> String {
    let mut out = format!("{} {}\n", graph.n_vertices, graph.edges.len());
    for &(u, v, w) in &graph.edges {
        let _ = writeln!(out, "{} {} {}", u + 1, v + 1, w);
    }
    out
}

/// 3-regular 3-XORSAT system: n clauses over n variables, each variable in
/// exactly three clauses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorsatInstance {
    n_vars: usize,
    /// (i, j, k, parity) with i < j < k: x_i ^ x_j ^ x_k = parity
    clauses: Vec<(usize, usize, usize, u8)>,
    planted_assignment: Option<Vec<u8>>,
}

impl XorsatInstance {
    pub fn new(
        n_vars: usize,
        clauses: Vec<(usize, usize, usize, u8)>,
        planted_assignment: Option<Vec<u8>>,
    ) -> Result<Self, ProblemError> {
        let mut degree = vec![0usize; n_vars];
        for &(i, j, k, b) in &clauses {
            if !(i < j && j < k) {
                return Err(ProblemError::InvalidClause(format!(
                    "indices ({i}, {j}, {k}) must be strictly increasing"
                )));
            }
            if k >= n_vars {
                return Err(ProblemError::VertexOutOfRange { index: k, n: n_vars });
            }
            if b > 1 {
                return Err(ProblemError::InvalidClause(format!("parity {b} not in {{0,1}}")));
            }
            degree[i] += 1;
            degree[j] += 1;
            degree[k] += 1;
        }
        if clauses.len() != n_vars {
            return Err(ProblemError::InvalidClause(format!(
                "expected {n_vars} clauses, got {}",
                clauses.len()
            )));
        }
        if let Some(d) = degree.iter().position(|&d| d != 3) {
            return Err(ProblemError::InvalidClause(format!(
                "variable {d} appears {} times, need exactly 3",
                degree[d]
            )));
        }
        if let Some(x) = &planted_assignment {
            if x.len() != n_vars {
                return Err(ProblemError::DimensionMismatch {
                    got: x.len(),
                    expected: n_vars,
                });
            }
            for &(i, j, k, b) in &clauses {
                if x[i] ^ x[j] ^ x[k] != b {
                    return Err(ProblemError::InvalidClause(
                        "planted assignment violates a clause".into(),
                    ));
                }
            }
        }
        Ok(Self { n_vars, clauses, planted_assignment })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn clauses(&self) -> &[(usize, usize, usize, u8)] {
        &self.clauses
    }

    pub fn planted_assignment(&self) -> Option<&[u8]> {
        self.planted_assignment.as_deref()
    }

    pub fn is_satisfied_by(&self, x: &[u8]) -> bool {
        x.len() == self.n_vars
            && self.clauses.iter().all(|&(i, j, k, b)| x[i] ^ x[j] ^ x[k] == b)
    }

    /// Text form: `x <n>` header, `c <i> <j> <k> <parity>` lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("x {}\n", self.n_vars);
        for &(i, j, k, b) in &self.clauses {
            let _ = writeln!(out, "c {i} {j} {k} {b}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ProblemError> {
        let mut n: Option<usize> = None;
        let mut clauses = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tok: Vec<&str> = content.split_whitespace().collect();
            let ints = |expected: usize| -> Result<Vec<usize>, ProblemError> {
                if tok.len() != expected + 1 {
                    return Err(ProblemError::Parse {
                        line,
                        msg: format!("expected {expected} values after '{}'", tok[0]),
                    });
                }
                tok[1..]
                    .iter()
                    .map(|s| {
                        s.parse::<usize>().map_err(|_| ProblemError::Parse {
                            line,
                            msg: format!("invalid integer '{s}'"),
                        })
                    })
                    .collect()
            };
            match tok[0] {
                "x" => {
                    let v = ints(1)?;
                    if n.replace(v[0]).is_some() {
                        return Err(ProblemError::Parse {
                            line,
                            msg: "duplicate 'x' header".into(),
                        });
                    }
                }
                "c" => {
                    let v = ints(4)?;
                    if v[3] > 1 {
                        return Err(ProblemError::Parse {
                            line,
                            msg: format!("parity {} not in {{0,1}}", v[3]),
                        });
                    }
                    clauses.push((v[0], v[1], v[2], v[3] as u8));
                }
                other => {
                    return Err(ProblemError::Parse {
                        line,
                        msg: format!("unknown line tag '{other}'"),
                    });
                }
            }
        }
        let n = n.ok_or(ProblemError::Parse { line: 0, msg: "missing 'x' header".into() })?;
        Self::new(n, clauses, None)
    }
}

const GEN_3R3X_MAX_ATTEMPTS: usize = 1000;

/// Uniformly sample a 3-regular clause-variable incidence by random
/// permutation of the 3n variable slots, rejecting shuffles that put the
/// same variable twice in one clause. Parities satisfy a random planted
/// assignment when `planted` is set, otherwise they are uniform.
pub fn gen_3r3x(n: usize, seed: u64, planted: bool) -> Result<XorsatInstance, ProblemError> {
    assert!(n >= 4, "3-regular 3-XORSAT needs at least 4 variables");
    for attempt in 0..GEN_3R3X_MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, attempt as u64));
        let mut slots: Vec<usize> = (0..n).flat_map(|v| [v, v, v]).collect();
        slots.shuffle(&mut rng);
        let mut clause_vars = Vec::with_capacity(n);
        let mut ok = true;
        for chunk in slots.chunks_exact(3) {
            let mut vars = [chunk[0], chunk[1], chunk[2]];
            vars.sort_unstable();
            if vars[0] == vars[1] || vars[1] == vars[2] {
                ok = false;
                break;
            }
            clause_vars.push(vars);
        }
        if !ok {
            continue;
        }
        let assignment: Option<Vec<u8>> = planted
            .then(|| (0..n).map(|_| rng.gen_range(0..=1u8)).collect());
        let clauses = clause_vars
            .iter()
            .map(|&[i, j, k]| {
                let b = match &assignment {
                    Some(x) => x[i] ^ x[j] ^ x[k],
                    None => rng.gen_range(0..=1u8),
                };
                (i, j, k, b)
            })
            .collect();
        return XorsatInstance::new(n, clauses, assignment);
    }
    Err(ProblemError::GenerationFailed(GEN_3R3X_MAX_ATTEMPTS))
}

/// Legal clause-gadget parameter sets; both realize a per-clause minimum
/// of -4 exactly on satisfying assignments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GadgetParams {
    pub h_s: i64,
    pub h_a: i64,
    pub j_s: i64,
    pub j_a: i64,
}

impl GadgetParams {
    pub fn new(h_s: i64, h_a: i64, j_s: i64, j_a: i64) -> Result<Self, ProblemError> {
        match (h_s, h_a, j_s, j_a) {
            (-1, -2, 1, 2) | (-1, 2, 1, -2) => Ok(Self { h_s, h_a, j_s, j_a }),
            _ => Err(ProblemError::InvalidGadget(h_s, h_a, j_s, j_a)),
        }
    }
}

impl Default for GadgetParams {
    fn default() -> Self {
        Self { h_s: -1, h_a: -2, j_s: 1, j_a: 2 }
    }
}

/// Boolean-to-spin convention used by both encoders: x=0 maps to m=+1, so
/// a clause x_i ^ x_j ^ x_k = b becomes m_i m_j m_k = (-1)^b.
pub fn bool_to_spin(x: u8) -> i8 {
    if x == 0 {
        1
    } else {
        -1
    }
}

/// Second-order encoding: 2n spins (data 0..n, auxiliary n..2n, one per
/// clause). Each even-parity clause contributes the 4-spin gadget energy
/// `j_s*(pairs) + j_a*(sum m)*m_a + h_s*(sum m) + h_a*m_a`, minimized at
/// -4 exactly on satisfying data assignments; odd parity is realized by a
/// sign-flip gauge on the clause's first literal. Overlapping clause
/// contributions to shared entries are summed.
pub fn xorsat_to_second_order(
    instance: &XorsatInstance,
    params: GadgetParams,
) -> Result<IsingInstance, ProblemError> {
    let n = instance.n_vars;
    let total = 2 * n;
    let mut couplings: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    let mut fields = vec![0i64; total];
    let mut add = |a: usize, b: usize, j: i64| {
        let key = if a < b { (a, b) } else { (b, a) };
        *couplings.entry(key).or_insert(0) += j;
    };
    for (c, &(i, j, k, b)) in instance.clauses.iter().enumerate() {
        let aux = n + c;
        let vars = [i, j, k];
        let mut sign = [1i64, 1, 1];
        if b == 1 {
            sign[0] = -1;
        }
        // energy terms map into E = -sum J m m - sum h m with flipped sign
        for a in 0..3 {
            for bx in a + 1..3 {
                add(vars[a], vars[bx], -params.j_s * sign[a] * sign[bx]);
            }
            add(vars[a], aux, -params.j_a * sign[a]);
            fields[vars[a]] += -params.h_s * sign[a];
        }
        fields[aux] += -params.h_a;
    }
    let pairs = couplings
        .into_iter()
        .filter(|&(_, j)| j != 0)
        .map(|((a, b), j)| (a, b, j))
        .collect();
    Ok(IsingInstance::new(total, pairs, fields, vec![])?)
}

/// Third-order encoding: n spins, one triple per clause with
/// J3 = +1 for even parity and -1 for odd parity. Clauses sharing a
/// variable triple are summed; a cancelled triple is dropped.
pub fn xorsat_to_third_order(instance: &XorsatInstance) -> Result<IsingInstance, ProblemError> {
    let mut triples: BTreeMap<(usize, usize, usize), i64> = BTreeMap::new();
    for &(i, j, k, b) in &instance.clauses {
        *triples.entry((i, j, k)).or_insert(0) += if b == 0 { 1 } else { -1 };
    }
    let triples = triples
        .into_iter()
        .filter(|&(_, w)| w != 0)
        .map(|((i, j, k), w)| (i, j, k, w))
        .collect();
    Ok(IsingInstance::new(
        instance.n_vars,
        vec![],
        vec![0; instance.n_vars],
        triples,
    )?)
}

/// Spin state encoding the planted assignment (data spins only).
pub fn planted_state(instance: &XorsatInstance) -> Option<SpinState> {
    instance.planted_assignment.as_ref().map(|x| {
        SpinState::new(x.iter().map(|&b| bool_to_spin(b)).collect()).expect("bits are valid")
    })
}
