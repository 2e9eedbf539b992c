//! Strategy generation: the piecewise linear chaotic map (PLCM) in 64-bit
//! fixed point, key mixing, and the CIIS and CIDS strategies.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ci::{BitState, Strategy, StrategySource};
use crate::error::{Error, Result};

const ONE: u128 = 1 << 64;
const HALF: u128 = 1 << 63;

/// Default number of PLCM iterates discarded before the first strategy term.
pub const DEFAULT_TRANSIENT: usize = 32;

/// A number in `[0, 1)` stored as `raw / 2^64`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fraction64(pub u64);

impl Fraction64 {
    pub const ZERO: Fraction64 = Fraction64(0);
    pub const HALF: Fraction64 = Fraction64(1 << 63);

    pub fn raw(self) -> u64 {
        self.0
    }

    /// Truncating conversion; values outside `[0, 1)` are rejected.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::Parameter(format!("{x} is outside [0, 1)")));
        }
        Ok(Fraction64((x * ONE as f64) as u64))
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / ONE as f64
    }
}

/// Sixteen lowercase hex digits.
impl fmt::Display for Fraction64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

impl FromStr for Fraction64 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() != 16 || !s.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(Error::Parameter(format!("expected 16 hex digits, got {s:?}")));
        }
        u64::from_str_radix(s, 16)
            .map(Fraction64)
            .map_err(|e| Error::Parameter(format!("{s:?}: {e}")))
    }
}

impl Serialize for Fraction64 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Fraction64 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A number in the closed interval `[0, 1]`, stored as `raw / 2^64` with
/// `raw <= 2^64`. The PLCM reaches 1 exactly, which [`Fraction64`] cannot hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitValue(u128);

impl UnitValue {
    pub const ZERO: UnitValue = UnitValue(0);
    pub const ONE: UnitValue = UnitValue(ONE);

    pub fn from_raw(raw: u128) -> Result<Self> {
        if raw > ONE {
            return Err(Error::Parameter(format!("raw value {raw:#x} exceeds 1")));
        }
        Ok(UnitValue(raw))
    }

    pub fn raw(self) -> u128 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / ONE as f64
    }
}

impl From<Fraction64> for UnitValue {
    fn from(x: Fraction64) -> Self {
        UnitValue(x.0 as u128)
    }
}

/// PLCM control parameter `p` in `]0, 1/2[` and transient length `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PlcmParams {
    p: Fraction64,
    transient: usize,
}

impl PlcmParams {
    pub fn new(p: Fraction64, transient: usize) -> Result<Self> {
        if p.0 == 0 || p.0 as u128 >= HALF {
            return Err(Error::Parameter(format!("PLCM control parameter {p} must lie strictly between 0 and 1/2")));
        }
        Ok(Self { p, transient })
    }

    pub fn p(&self) -> Fraction64 {
        self.p
    }

    pub fn transient(&self) -> usize {
        self.transient
    }
}

impl Default for PlcmParams {
    /// `p ≈ 0.3`, `D = 32`.
    fn default() -> Self {
        Self { p: Fraction64(0x4ccc_cccc_cccc_cccc), transient: DEFAULT_TRANSIENT }
    }
}

/// One step of the PLCM.
///
/// `x / p` on `[0, p]`, `(x - p) / (1/2 - p)` on `]p, 1/2]`, and the mirror
/// image `F(1 - x)` above one half. Divisions round toward zero.
pub fn plcm(x: UnitValue, params: &PlcmParams) -> UnitValue {
    let p = params.p.0 as u128;
    let x = if x.0 > HALF { ONE - x.0 } else { x.0 };
    if x <= p {
        UnitValue((x << 64) / p)
    } else {
        UnitValue(((x - p) << 64) / (HALF - p))
    }
}

/// Bitwise XOR of the binary expansions.
pub fn key_mix(m: Fraction64, k: Fraction64) -> Fraction64 {
    Fraction64(m.0 ^ k.0)
}

/// `floor(N * value) + 1`, with `value = 1` mapped to `N`.
pub fn strategy_term(value: UnitValue, n_cells: usize) -> usize {
    let term = ((n_cells as u128 * value.0) >> 64) as usize + 1;
    term.min(n_cells)
}

/// Iterator over the CIIS strategy terms, one PLCM step per term.
#[derive(Clone, Debug)]
pub struct CiisTerms {
    state: UnitValue,
    params: PlcmParams,
    n_cells: usize,
}

impl CiisTerms {
    pub fn new(m: Fraction64, k: Fraction64, params: PlcmParams, n_cells: usize) -> Self {
        let mut state = UnitValue::from(key_mix(m, k));
        for _ in 0..params.transient {
            state = plcm(state, &params);
        }
        Self { state, params, n_cells }
    }
}

impl Iterator for CiisTerms {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let term = strategy_term(self.state, self.n_cells);
        self.state = plcm(self.state, &self.params);
        Some(term)
    }
}

/// The first `length` terms of the CIIS strategy for message `m` and key `k`.
pub fn ciis_strategy(m: Fraction64, k: Fraction64, params: &PlcmParams, n_cells: usize, length: usize) -> Result<Strategy> {
    if n_cells == 0 {
        return Err(Error::Parameter("a strategy needs at least one cell".into()));
    }
    let terms: Vec<usize> = CiisTerms::new(m, k, *params, n_cells).take(length).collect();
    Strategy::with_source(terms, n_cells, StrategySource::Ciis)
}

/// CIDS: term `k` (1-indexed) is `k` when `k <= N` and cover bit `k` is set, else 1.
pub fn cids_strategy(cover: &BitState, length: usize) -> Strategy {
    let bits = cover.bits();
    let terms: Vec<usize> = (1..=length)
        .map(|k| if k <= bits.len() && bits[k - 1] { k } else { 1 })
        .collect();
    Strategy::with_source(terms, cover.len(), StrategySource::Cids).expect("CIDS terms lie in 1..=N")
}
