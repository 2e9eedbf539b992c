//! The discrete dynamical system behind the scheme.
//!
//! Cells are numbered `1..=N` in every public API. A step of the system
//! takes the head `k` of the strategy, replaces cell `k` of the state with
//! `f(state)_k` and drops the head from the strategy.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A boolean state of `N >= 1` cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitState {
    bits: Vec<bool>,
}

impl BitState {
    pub fn from_bits(bits: impl Into<Vec<bool>>) -> Result<Self> {
        let bits = bits.into();
        if bits.is_empty() {
            return Err(Error::Parameter("a state needs at least one cell".into()));
        }
        Ok(Self { bits })
    }

    pub fn zeros(n_cells: usize) -> Result<Self> {
        Self::from_bits(vec![false; n_cells])
    }

    /// Builds a state from the low `n_cells` bits of `index`; cell `i` is bit `i - 1`.
    pub fn from_index(index: u64, n_cells: usize) -> Result<Self> {
        if n_cells > 64 {
            return Err(Error::Parameter(format!("{n_cells} cells do not fit a 64-bit index")));
        }
        Self::from_bits((0..n_cells).map(|i| (index >> i) & 1 == 1).collect::<Vec<_>>())
    }

    /// Inverse of [`BitState::from_index`]. Cells beyond the 64th are ignored.
    pub fn to_index(&self) -> u64 {
        self.bits
            .iter()
            .take(64)
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    /// Value of cell `k` (1-indexed).
    pub fn cell(&self, k: usize) -> Result<bool> {
        check_cell(k, self.len())?;
        Ok(self.bits[k - 1])
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }

    pub(crate) fn set0(&mut self, idx: usize, value: bool) {
        self.bits[idx] = value;
    }

    /// Cells (1-indexed, ascending) where `self` and `other` differ.
    pub fn differing_cells(&self, other: &BitState) -> Result<Vec<usize>> {
        if self.len() != other.len() {
            return Err(Error::Dimension { left: self.len(), right: other.len() });
        }
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i + 1)
            .collect())
    }
}

impl fmt::Display for BitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Parses a string of `0`/`1` digits, cell 1 first.
impl FromStr for BitState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parameter(format!("invalid bit digit {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(bits)
    }
}

fn check_cell(k: usize, n_cells: usize) -> Result<()> {
    if k == 0 || k > n_cells {
        return Err(Error::CellIndex { index: k, n_cells });
    }
    Ok(())
}

/// Where a strategy came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategySource {
    Explicit,
    Ciis,
    Cids,
}

/// A finite prefix of a strategy over `1..=N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Strategy {
    cells: Vec<usize>,
    n_cells: usize,
    source: StrategySource,
}

impl Strategy {
    pub fn new(cells: impl Into<Vec<usize>>, n_cells: usize) -> Result<Self> {
        Self::with_source(cells, n_cells, StrategySource::Explicit)
    }

    pub fn with_source(cells: impl Into<Vec<usize>>, n_cells: usize, source: StrategySource) -> Result<Self> {
        if n_cells == 0 {
            return Err(Error::Parameter("a strategy needs at least one cell".into()));
        }
        let cells = cells.into();
        for &k in &cells {
            check_cell(k, n_cells)?;
        }
        Ok(Self { cells, n_cells, source })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn horizon(&self) -> usize {
        self.cells.len()
    }

    pub fn terms(&self) -> &[usize] {
        &self.cells
    }

    pub fn source(&self) -> StrategySource {
        self.source
    }

    pub fn head(&self) -> Option<usize> {
        self.cells.first().copied()
    }

    /// The strategy with its first `by` terms dropped.
    pub fn shifted(&self, by: usize) -> Result<Strategy> {
        if by > self.horizon() {
            return Err(Error::ExhaustedStrategy { needed: by, available: self.horizon() });
        }
        Ok(Strategy { cells: self.cells[by..].to_vec(), n_cells: self.n_cells, source: self.source })
    }

    /// The first `len` terms.
    pub fn truncated(&self, len: usize) -> Result<Strategy> {
        if len > self.horizon() {
            return Err(Error::ExhaustedStrategy { needed: len, available: self.horizon() });
        }
        Ok(Strategy { cells: self.cells[..len].to_vec(), n_cells: self.n_cells, source: self.source })
    }
}

/// A rule `f : B^N -> B^N` driving the iterations.
pub trait IterFunction {
    fn eval(&self, state: &BitState) -> BitState;

    /// `f(state)_k` for a 1-indexed cell `k`. Override when the single
    /// component is cheaper than the whole image.
    fn eval_cell(&self, state: &BitState, k: usize) -> Result<bool> {
        let image = self.eval(state);
        if image.len() != state.len() {
            return Err(Error::Dimension { left: state.len(), right: image.len() });
        }
        image.cell(k)
    }
}

/// The vectorial negation `f0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Negation;

impl IterFunction for Negation {
    fn eval(&self, state: &BitState) -> BitState {
        BitState { bits: state.bits.iter().map(|b| !b).collect() }
    }

    fn eval_cell(&self, state: &BitState, k: usize) -> Result<bool> {
        state.cell(k).map(|b| !b)
    }
}

impl<F> IterFunction for F
where
    F: Fn(&BitState) -> BitState,
{
    fn eval(&self, state: &BitState) -> BitState {
        self(state)
    }
}

/// A point `(S, E)` of the phase space, at finite horizon.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhasePoint {
    pub state: BitState,
    pub strategy: Strategy,
}

impl PhasePoint {
    pub fn new(state: BitState, strategy: Strategy) -> Result<Self> {
        if state.len() != strategy.n_cells() {
            return Err(Error::Dimension { left: state.len(), right: strategy.n_cells() });
        }
        Ok(Self { state, strategy })
    }

    pub fn n_cells(&self) -> usize {
        self.state.len()
    }
}

/// `F_f(k, e)`: `e` with cell `k` replaced by `f(e)_k`.
pub fn apply_ff<F: IterFunction + ?Sized>(k: usize, e: &BitState, f: &F) -> Result<BitState> {
    check_cell(k, e.len())?;
    let value = f.eval_cell(e, k)?;
    let mut next = e.clone();
    next.set0(k - 1, value);
    Ok(next)
}

/// `G_f(S, E) = (σ(S), F_f(S^0, E))`.
pub fn g_step<F: IterFunction + ?Sized>(p: &PhasePoint, f: &F) -> Result<PhasePoint> {
    let head = p.strategy.head().ok_or(Error::ExhaustedStrategy { needed: 1, available: 0 })?;
    Ok(PhasePoint { state: apply_ff(head, &p.state, f)?, strategy: p.strategy.shifted(1)? })
}

fn check_run(x0: &BitState, s: &Strategy, n: usize) -> Result<()> {
    if x0.len() != s.n_cells() {
        return Err(Error::Dimension { left: x0.len(), right: s.n_cells() });
    }
    if n > s.horizon() {
        return Err(Error::ExhaustedStrategy { needed: n, available: s.horizon() });
    }
    Ok(())
}

/// `x^n`: the state after `n` chaotic iterations driven by `s`.
pub fn iterate<F: IterFunction + ?Sized>(x0: &BitState, s: &Strategy, f: &F, n: usize) -> Result<BitState> {
    check_run(x0, s, n)?;
    let mut state = x0.clone();
    for &k in &s.terms()[..n] {
        let value = f.eval_cell(&state, k)?;
        state.set0(k - 1, value);
    }
    Ok(state)
}

/// The states `x^0, ..., x^n`.
pub fn orbit<F: IterFunction + ?Sized>(x0: &BitState, s: &Strategy, f: &F, n: usize) -> Result<Vec<BitState>> {
    check_run(x0, s, n)?;
    let mut states = Vec::with_capacity(n + 1);
    states.push(x0.clone());
    for &k in &s.terms()[..n] {
        let last = states.last().expect("orbit starts non-empty");
        states.push(apply_ff(k, last, f)?);
    }
    Ok(states)
}
