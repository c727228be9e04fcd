//! Line-oriented sweep configuration.
//!
//! ```text
//! # comment
//! noise = bitflip            # bitflip | phaseflip | bitphaseflip | depolarizing
//! axis = 0, 1, 0
//! probe = 0, 0, 1
//! xi = 0.6283185307179586
//! p_c = 0.5
//! p = 0:1:0.05               # start:stop:step, or a single value
//! quantities = qc, fq_con, fc_con, fq_cas, fq_joint
//! ```

use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::channels::{depolarizing_channel, pauli_channel, PauliAxis};
use crate::error::{Error, Result};
use crate::{BlochVector, KrausChannel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NoiseKind {
    Bitflip,
    Phaseflip,
    Bitphaseflip,
    Depolarizing,
}

impl NoiseKind {
    pub fn pauli_axis(self) -> Option<PauliAxis> {
        match self {
            NoiseKind::Bitflip => Some(PauliAxis::X),
            NoiseKind::Phaseflip => Some(PauliAxis::Z),
            NoiseKind::Bitphaseflip => Some(PauliAxis::Y),
            NoiseKind::Depolarizing => None,
        }
    }

    pub fn channel(self, p: f64) -> Result<KrausChannel> {
        match self.pauli_axis() {
            Some(axis) => pauli_channel(axis, p),
            None => depolarizing_channel(p),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::Bitflip => "bitflip",
            NoiseKind::Phaseflip => "phaseflip",
            NoiseKind::Bitphaseflip => "bitphaseflip",
            NoiseKind::Depolarizing => "depolarizing",
        }
    }
}

impl FromStr for NoiseKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "bitflip" => Ok(NoiseKind::Bitflip),
            "phaseflip" => Ok(NoiseKind::Phaseflip),
            "bitphaseflip" => Ok(NoiseKind::Bitphaseflip),
            "depolarizing" => Ok(NoiseKind::Depolarizing),
            other => Err(format!(
                "unknown noise kind `{other}` (expected bitflip, phaseflip, bitphaseflip or depolarizing)"
            )),
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Quantities a sweep can report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantity {
    /// Coupling `Q_c = tr S01(ρ)`.
    Qc,
    /// QFI of the reduced control qubit.
    FqCon,
    /// QFI of the standard cascade.
    FqCas,
    /// CFI of the Hadamard measurement on the control qubit.
    FcCon,
    /// QFI of the joint probe-control output.
    FqJoint,
}

impl Quantity {
    pub const ALL: [Quantity; 5] = [
        Quantity::Qc,
        Quantity::FqCon,
        Quantity::FqCas,
        Quantity::FcCon,
        Quantity::FqJoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Qc => "qc",
            Quantity::FqCon => "fq_con",
            Quantity::FqCas => "fq_cas",
            Quantity::FcCon => "fc_con",
            Quantity::FqJoint => "fq_joint",
        }
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| format!("unknown quantity `{s}` (expected qc, fq_con, fq_cas, fc_con or fq_joint)"))
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Inclusive arithmetic range `start, start + step, …, ≤ stop`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> std::result::Result<Self, String> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err("grid bounds must be finite".into());
        }
        if step <= 0.0 {
            return Err(format!("grid step must be positive, got {step}"));
        }
        if start > stop {
            return Err(format!("grid start {start} exceeds stop {stop}"));
        }
        Ok(Self { start, stop, step })
    }

    pub fn single(value: f64) -> Self {
        Self {
            start: value,
            stop: value,
            step: 1.0,
        }
    }

    pub fn len(&self) -> usize {
        // The epsilon absorbs representation error in (stop - start) / step.
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| (self.start + i as f64 * self.step).min(self.stop))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub noise: NoiseKind,
    pub axis: [f64; 3],
    pub probe: BlochVector,
    pub xi: f64,
    pub p_c: f64,
    pub p_grid: Grid,
    pub quantities: Vec<Quantity>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            noise: NoiseKind::Bitflip,
            axis: [0.0, 1.0, 0.0],
            probe: BlochVector::new(0.0, 0.0, 1.0).expect("unit probe"),
            xi: PI / 5.0,
            p_c: 0.5,
            p_grid: Grid {
                start: 0.0,
                stop: 1.0,
                step: 0.05,
            },
            quantities: vec![Quantity::Qc, Quantity::FqCon, Quantity::FcCon, Quantity::FqCas],
        }
    }
}

fn parse_real(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn parse_probability(s: &str) -> std::result::Result<f64, String> {
    let v = parse_real(s)?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

/// Parses `x, y, z`.
pub fn parse_triple(s: &str) -> std::result::Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("`{}` is not a comma-separated triple", s.trim()));
    }
    Ok([parse_real(parts[0])?, parse_real(parts[1])?, parse_real(parts[2])?])
}

pub fn parse_axis(s: &str) -> std::result::Result<[f64; 3], String> {
    let axis = parse_triple(s)?;
    crate::UnitaryParams::new(axis, 0.0).map_err(|e| e.to_string())?;
    Ok(axis)
}

pub fn parse_probe(s: &str) -> std::result::Result<BlochVector, String> {
    BlochVector::from_array(parse_triple(s)?).map_err(|e| e.to_string())
}

fn parse_grid(s: &str) -> std::result::Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [single] => Grid::single(parse_real(single)?),
        [start, stop, step] => Grid::new(parse_real(start)?, parse_real(stop)?, parse_real(step)?)?,
        _ => return Err(format!("`{}` is neither a value nor start:stop:step", s.trim())),
    };
    for v in [grid.start, grid.stop] {
        if !(0.0..=1.0).contains(&v) {
            return Err(format!("grid bound {v} is outside [0, 1]"));
        }
    }
    Ok(grid)
}

fn parse_quantities(s: &str) -> std::result::Result<Vec<Quantity>, String> {
    let mut out = Vec::new();
    for item in s.split(',') {
        let q: Quantity = item.parse()?;
        if out.contains(&q) {
            return Err(format!("quantity `{q}` listed twice"));
        }
        out.push(q);
    }
    Ok(out)
}

/// Parses a configuration document; missing keys keep their defaults.
pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let mut cfg = SweepConfig::default();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: String| Error::Config { line, msg };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, found `{content}`")))?;
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(err(format!("missing value for `{key}`")));
        }
        match key {
            "noise" => cfg.noise = value.parse().map_err(err)?,
            "axis" => cfg.axis = parse_axis(value).map_err(err)?,
            "probe" => cfg.probe = parse_probe(value).map_err(err)?,
            "xi" => cfg.xi = parse_real(value).map_err(err)?,
            "p_c" => cfg.p_c = parse_probability(value).map_err(|m| err(format!("p_c: {m}")))?,
            "p" => cfg.p_grid = parse_grid(value).map_err(|m| err(format!("p: {m}")))?,
            "quantities" => cfg.quantities = parse_quantities(value).map_err(err)?,
            other => return Err(err(format!("unknown key `{other}`"))),
        }
        if !seen.insert(key.to_string()) {
            return Err(err(format!("duplicate key `{key}`")));
        }
    }
    Ok(cfg)
}
