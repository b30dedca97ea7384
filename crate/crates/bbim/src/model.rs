//! Ising problem instances and energy evaluation.
//!
//! Couplings and fields are exact integers; instances in the benchmark
//! families use values in {-2, -1, 1, 2}, so classical energies are exact
//! and ground-state hits can be checked with integer equality. The
//! Bounce-Bind term only ever contributes the constant `-B*n/2`, so it
//! enters as a float shift on top of the integer landscape.

use std::fmt::Write as _;

use thiserror::Error;

/// Smallest representable Bounce-Bind increment in s[2][3] fixed point.
pub const BB_QUANTUM: f64 = 0.125;
/// Inclusive s[2][3] range: 1 sign bit, 2 integer bits, 3 fraction bits.
pub const BB_MIN: f64 = -4.0;
pub const BB_MAX: f64 = 3.875;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("instance must have at least one spin")]
    EmptyInstance,
    #[error("spin index {index} out of range for n={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("coupling indices must be strictly increasing: {0}")]
    NonCanonicalIndices(String),
    #[error("duplicate coupling {0}")]
    DuplicateCoupling(String),
    #[error("state length {got} does not match instance size {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("spin values must be +1 or -1, got {0}")]
    InvalidSpin(i64),
    #[error("Bounce-Bind value {0} not representable in s[2][3]")]
    BbOutOfRange(f64),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Tunable persistence bias. Negative values ("bounce") bias spins toward
/// flipping, positive values ("bind") toward keeping their state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BounceBindParam {
    value: f64,
    quantized: bool,
}

impl BounceBindParam {
    /// Unconstrained continuous parameter.
    pub fn free(value: f64) -> Self {
        Self { value, quantized: false }
    }

    /// Snap to the nearest s[2][3] multiple of 0.125, ties toward minus
    /// infinity. Errors if the rounded value falls outside [-4, 3.875].
    pub fn quantized(value: f64) -> Result<Self, ModelError> {
        let scaled = (value * 8.0 - 0.5).ceil();
        let snapped = scaled * BB_QUANTUM;
        if !(BB_MIN..=BB_MAX).contains(&snapped) {
            return Err(ModelError::BbOutOfRange(value));
        }
        Ok(Self { value: snapped, quantized: true })
    }

    pub fn zero() -> Self {
        Self::free(0.0)
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn is_quantized(&self) -> bool {
        self.quantized
    }
}

/// Spin configuration, entries are exactly +1 or -1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinState {
    spins: Vec<i8>,
}

impl SpinState {
    pub fn new(spins: Vec<i8>) -> Result<Self, ModelError> {
        for &m in &spins {
            if m != 1 && m != -1 {
                return Err(ModelError::InvalidSpin(m as i64));
            }
        }
        Ok(Self { spins })
    }

    pub fn all_up(n: usize) -> Self {
        Self { spins: vec![1; n] }
    }

    /// Decode a state index: bit i set means spin i is +1.
    pub fn from_index(index: usize, n: usize) -> Self {
        let spins = (0..n)
            .map(|i| if index >> i & 1 == 1 { 1 } else { -1 })
            .collect();
        Self { spins }
    }

    /// Inverse of [`SpinState::from_index`].
    pub fn to_index(&self) -> usize {
        self.spins
            .iter()
            .enumerate()
            .filter(|(_, &m)| m == 1)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn get(&self, i: usize) -> i8 {
        self.spins[i]
    }

    pub fn set(&mut self, i: usize, value: i8) {
        debug_assert!(value == 1 || value == -1);
        self.spins[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.spins[i] = -self.spins[i];
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }
}

/// Second- or third-order neighbors of one spin, symmetric expansion of the
/// canonical i<j (i<j<k) storage.
#[derive(Debug, Clone, Default)]
struct Adjacency {
    /// (other spin, J_ij)
    pairs: Vec<(usize, i64)>,
    /// (other two spins, J3_ijk)
    triples: Vec<(usize, usize, i64)>,
}

/// Immutable problem instance: sparse couplings, fields, optional
/// third-order hyperedges. Shareable across concurrent trials.
#[derive(Debug, Clone)]
pub struct IsingInstance {
    n: usize,
    pairs: Vec<(usize, usize, i64)>,
    fields: Vec<i64>,
    triples: Vec<(usize, usize, usize, i64)>,
    adjacency: Vec<Adjacency>,
}

impl IsingInstance {
    pub fn new(
        n: usize,
        pairs: Vec<(usize, usize, i64)>,
        fields: Vec<i64>,
        triples: Vec<(usize, usize, usize, i64)>,
    ) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::EmptyInstance);
        }
        if fields.len() != n {
            return Err(ModelError::DimensionMismatch { got: fields.len(), expected: n });
        }
        let check = |idx: usize| -> Result<(), ModelError> {
            if idx >= n {
                Err(ModelError::IndexOutOfRange { index: idx, n })
            } else {
                Ok(())
            }
        };
        let mut seen_pairs = std::collections::HashSet::new();
        for &(i, j, _) in &pairs {
            check(i)?;
            check(j)?;
            if i >= j {
                return Err(ModelError::NonCanonicalIndices(format!("({i}, {j})")));
            }
            if !seen_pairs.insert((i, j)) {
                return Err(ModelError::DuplicateCoupling(format!("({i}, {j})")));
            }
        }
        let mut seen_triples = std::collections::HashSet::new();
        for &(i, j, k, _) in &triples {
            check(i)?;
            check(j)?;
            check(k)?;
            if i >= j || j >= k {
                return Err(ModelError::NonCanonicalIndices(format!("({i}, {j}, {k})")));
            }
            if !seen_triples.insert((i, j, k)) {
                return Err(ModelError::DuplicateCoupling(format!("({i}, {j}, {k})")));
            }
        }
        let mut adjacency = vec![Adjacency::default(); n];
        for &(i, j, w) in &pairs {
            adjacency[i].pairs.push((j, w));
            adjacency[j].pairs.push((i, w));
        }
        for &(i, j, k, w) in &triples {
            adjacency[i].triples.push((j, k, w));
            adjacency[j].triples.push((i, k, w));
            adjacency[k].triples.push((i, j, w));
        }
        Ok(Self { n, pairs, fields, triples, adjacency })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(usize, usize, i64)] {
        &self.pairs
    }

    pub fn fields(&self) -> &[i64] {
        &self.fields
    }

    pub fn triples(&self) -> &[(usize, usize, usize, i64)] {
        &self.triples
    }

    pub fn has_triples(&self) -> bool {
        !self.triples.is_empty()
    }

    fn check_state(&self, state: &SpinState) -> Result<(), ModelError> {
        if state.len() != self.n {
            return Err(ModelError::DimensionMismatch { got: state.len(), expected: self.n });
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<(), ModelError> {
        if i >= self.n {
            return Err(ModelError::IndexOutOfRange { index: i, n: self.n });
        }
        Ok(())
    }

    /// Classical energy
    /// `-sum J3_ijk m_i m_j m_k - sum J_ij m_i m_j - sum h_i m_i`.
    pub fn energy(&self, state: &SpinState) -> Result<i64, ModelError> {
        self.check_state(state)?;
        Ok(self.energy_unchecked(state))
    }

    pub(crate) fn energy_unchecked(&self, state: &SpinState) -> i64 {
        let m = state.spins();
        let mut e = 0i64;
        for &(i, j, k, w) in &self.triples {
            e -= w * (m[i] * m[j] * m[k]) as i64;
        }
        for &(i, j, w) in &self.pairs {
            e -= w * (m[i] * m[j]) as i64;
        }
        for (i, &h) in self.fields.iter().enumerate() {
            e -= h * m[i] as i64;
        }
        e
    }

    /// Bounce-Bind energy: the classical energy shifted by the constant
    /// `-B*n/2` (spins are binary, so the BB sum is always n).
    pub fn energy_bb(
        &self,
        state: &SpinState,
        bb: BounceBindParam,
    ) -> Result<f64, ModelError> {
        let e = self.energy(state)?;
        Ok(e as f64 - bb.value() * self.n as f64 / 2.0)
    }

    /// Classical local field `I_i = sum J3 m_j m_k + sum J_ij m_j + h_i`.
    pub fn local_field_classical(
        &self,
        state: &SpinState,
        i: usize,
    ) -> Result<i64, ModelError> {
        self.check_state(state)?;
        self.check_index(i)?;
        Ok(self.local_field_classical_unchecked(state, i))
    }

    pub(crate) fn local_field_classical_unchecked(&self, state: &SpinState, i: usize) -> i64 {
        let m = state.spins();
        let adj = &self.adjacency[i];
        let mut field = self.fields[i];
        for &(j, k, w) in &adj.triples {
            field += w * (m[j] * m[k]) as i64;
        }
        for &(j, w) in &adj.pairs {
            field += w * m[j] as i64;
        }
        field
    }

    /// Bounce-Bind local field `I_BB,i = I_i + B*m_i`.
    pub fn local_field(
        &self,
        state: &SpinState,
        bb: BounceBindParam,
        i: usize,
    ) -> Result<f64, ModelError> {
        let classical = self.local_field_classical(state, i)?;
        Ok(classical as f64 + bb.value() * state.get(i) as f64)
    }

    /// Exact energy change from flipping spin i. The BB term never appears:
    /// its energy contribution is state-independent.
    pub fn flip_delta(&self, state: &SpinState, i: usize) -> Result<i64, ModelError> {
        self.check_state(state)?;
        self.check_index(i)?;
        Ok(self.flip_delta_unchecked(state, i))
    }

    pub(crate) fn flip_delta_unchecked(&self, state: &SpinState, i: usize) -> i64 {
        2 * state.get(i) as i64 * self.local_field_classical_unchecked(state, i)
    }

    /// Text form: `n` header, `p`/`t`/`h` lines, zero-based indices.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n {}", self.n);
        for &(i, j, w) in &self.pairs {
            let _ = writeln!(out, "p {i} {j} {w}");
        }
        for &(i, j, k, w) in &self.triples {
            let _ = writeln!(out, "t {i} {j} {k} {w}");
        }
        for (i, &h) in self.fields.iter().enumerate() {
            if h != 0 {
                let _ = writeln!(out, "h {i} {h}");
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let mut n: Option<usize> = None;
        let mut pairs = Vec::new();
        let mut triples = Vec::new();
        let mut field_entries: Vec<(usize, i64)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut tok = content.split_whitespace();
            let tag = tok.next().unwrap();
            let rest: Vec<&str> = tok.collect();
            let parse_err = |msg: String| ModelError::Parse { line, msg };
            let ints = |expected: usize| -> Result<Vec<i64>, ModelError> {
                if rest.len() != expected {
                    return Err(parse_err(format!(
                        "expected {expected} values after '{tag}', got {}",
                        rest.len()
                    )));
                }
                rest.iter()
                    .map(|s| {
                        s.parse::<i64>()
                            .map_err(|_| parse_err(format!("invalid integer '{s}'")))
                    })
                    .collect()
            };
            match tag {
                "n" => {
                    let v = ints(1)?;
                    if v[0] <= 0 {
                        return Err(parse_err("n must be positive".into()));
                    }
                    if n.replace(v[0] as usize).is_some() {
                        return Err(parse_err("duplicate n header".into()));
                    }
                }
                "p" => {
                    let v = ints(3)?;
                    pairs.push((v[0] as usize, v[1] as usize, v[2]));
                }
                "t" => {
                    let v = ints(4)?;
                    triples.push((v[0] as usize, v[1] as usize, v[2] as usize, v[3]));
                }
                "h" => {
                    let v = ints(2)?;
                    field_entries.push((v[0] as usize, v[1]));
                }
                other => {
                    return Err(parse_err(format!("unknown line tag '{other}'")));
                }
            }
        }
        let n = n.ok_or(ModelError::Parse { line: 0, msg: "missing 'n' header".into() })?;
        let mut fields = vec![0i64; n];
        for (i, h) in field_entries {
            if i >= n {
                return Err(ModelError::IndexOutOfRange { index: i, n });
            }
            fields[i] = h;
        }
        Self::new(n, pairs, fields, triples)
    }
}
