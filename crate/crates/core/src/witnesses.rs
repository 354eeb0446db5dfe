//! The three witnesses (guessing `U_N`, quadratic `W_N`, linear `V_N`), their
//! quantum and classical bounds, and minimal-dimension certification.

use std::fmt;
use std::str::FromStr;

use crate::classical;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::quantum::{pair_count, pair_index, pairs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessKind {
    /// `U_N`: one measurement with `N` outcomes.
    Guessing,
    /// `W_N`: one binary measurement per pair, squared differences.
    Quadratic,
    /// `V_N`: one binary measurement per pair, plain differences.
    Linear,
}

impl WitnessKind {
    pub const ALL: [WitnessKind; 3] = [WitnessKind::Guessing, WitnessKind::Quadratic, WitnessKind::Linear];

    pub fn name(self) -> &'static str {
        match self {
            WitnessKind::Guessing => "guessing",
            WitnessKind::Quadratic => "quadratic",
            WitnessKind::Linear => "linear",
        }
    }

    /// Number of measurements `m` for `n` preparations.
    pub fn measurements(self, n: usize) -> usize {
        match self {
            WitnessKind::Guessing => 1,
            WitnessKind::Quadratic | WitnessKind::Linear => pair_count(n),
        }
    }

    /// Number of outcomes `k` for `n` preparations.
    pub fn outcomes(self, n: usize) -> usize {
        match self {
            WitnessKind::Guessing => n,
            WitnessKind::Quadratic | WitnessKind::Linear => 2,
        }
    }
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WitnessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "guessing" | "u" => Ok(WitnessKind::Guessing),
            "quadratic" | "w" => Ok(WitnessKind::Quadratic),
            "linear" | "v" => Ok(WitnessKind::Linear),
            other => Err(Error::BadArgument(format!("unknown witness '{other}'"))),
        }
    }
}

/// Conditional probabilities `P(b|x,y)` with `x ∈ 1..=N`, `y ∈ 1..=m`,
/// `b ∈ 1..=k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTable {
    n: usize,
    m: usize,
    k: usize,
    p: Vec<f64>,
}

impl ProbabilityTable {
    /// `p` is flat, indexed `((x−1)·m + (y−1))·k + (b−1)`. Every row
    /// `P(·|x,y)` must be a probability distribution within tolerance.
    pub fn new(n: usize, m: usize, k: usize, p: Vec<f64>) -> Result<Self> {
        if n == 0 || m == 0 || k == 0 {
            return Err(Error::InvalidTable(format!("empty shape N={n}, m={m}, k={k}")));
        }
        if p.len() != n * m * k {
            return Err(Error::InvalidTable(format!(
                "expected {} entries for N={n}, m={m}, k={k}, found {}",
                n * m * k,
                p.len()
            )));
        }
        let tol = Tolerances::DEFAULT;
        for (row_idx, row) in p.chunks(k).enumerate() {
            let (x, y) = (row_idx / m + 1, row_idx % m + 1);
            if let Some(v) = row
                .iter()
                .find(|v| !v.is_finite() || **v < -tol.probability_range || **v > 1.0 + tol.probability_range)
            {
                return Err(Error::InvalidTable(format!("P(·|x={x}, y={y}) contains {v}")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > tol.probability_sum {
                return Err(Error::InvalidTable(format!("P(·|x={x}, y={y}) sums to {sum}")));
            }
        }
        Ok(Self { n, m, k, p })
    }

    /// Builds a binary-outcome pair table from `P(1|x, (x1,x2))`, listed
    /// per preparation in pair order.
    pub fn from_binary(n: usize, p_one: &[Vec<f64>]) -> Result<Self> {
        let m = pair_count(n);
        if p_one.len() != n || p_one.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidTable(format!("binary table must be {n}×{m}")));
        }
        let mut p = Vec::with_capacity(n * m * 2);
        for row in p_one {
            for &v in row {
                p.push(v);
                p.push(1.0 - v);
            }
        }
        Self::new(n, m, 2, p)
    }

    pub fn num_preparations(&self) -> usize {
        self.n
    }

    pub fn num_measurements(&self) -> usize {
        self.m
    }

    pub fn num_outcomes(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[f64] {
        &self.p
    }

    /// `P(b|x,y)`, all indices 1-based.
    pub fn get(&self, x: usize, y: usize, b: usize) -> f64 {
        self.p[((x - 1) * self.m + (y - 1)) * self.k + (b - 1)]
    }

    /// Nested view `p[x−1][y−1][b−1]`.
    pub fn to_nested(&self) -> Vec<Vec<Vec<f64>>> {
        self.p
            .chunks(self.m * self.k)
            .map(|xs| xs.chunks(self.k).map(<[f64]>::to_vec).collect())
            .collect()
    }

    pub fn from_nested(p: &[Vec<Vec<f64>>]) -> Result<Self> {
        let n = p.len();
        let m = p.first().map_or(0, Vec::len);
        let k = p.first().and_then(|r| r.first()).map_or(0, Vec::len);
        let mut flat = Vec::with_capacity(n * m * k);
        for (xi, rows) in p.iter().enumerate() {
            if rows.len() != m {
                return Err(Error::InvalidTable(format!(
                    "x={} has {} measurements, expected {m}",
                    xi + 1,
                    rows.len()
                )));
            }
            for (yi, row) in rows.iter().enumerate() {
                if row.len() != k {
                    return Err(Error::InvalidTable(format!(
                        "x={}, y={} has {} outcomes, expected {k}",
                        xi + 1,
                        yi + 1,
                        row.len()
                    )));
                }
                flat.extend_from_slice(row);
            }
        }
        Self::new(n, m, k, flat)
    }

    pub fn check_shape(&self, kind: WitnessKind) -> Result<()> {
        let (m, k) = (kind.measurements(self.n), kind.outcomes(self.n));
        if self.m != m || self.k != k {
            return Err(Error::ShapeMismatch(format!(
                "{kind} witness with N={} needs m={m}, k={k}; table has m={}, k={}",
                self.n, self.m, self.k
            )));
        }
        Ok(())
    }

    /// `P(1|x,(x,x')) − P(1|x',(x,x'))` for every pair, in pair order.
    pub fn pair_differences(&self) -> Vec<f64> {
        pairs(self.n)
            .map(|(x, xp)| {
                let y = pair_index(x, xp) + 1;
                self.get(x, y, 1) - self.get(xp, y, 1)
            })
            .collect()
    }
}

pub fn eval_guessing(t: &ProbabilityTable) -> Result<f64> {
    t.check_shape(WitnessKind::Guessing)?;
    let n = t.num_preparations();
    Ok((1..=n).map(|x| t.get(x, 1, x)).sum::<f64>() / n as f64)
}

pub fn eval_quadratic(t: &ProbabilityTable) -> Result<f64> {
    t.check_shape(WitnessKind::Quadratic)?;
    Ok(t.pair_differences().iter().map(|d| d * d).sum())
}

pub fn eval_linear(t: &ProbabilityTable) -> Result<f64> {
    t.check_shape(WitnessKind::Linear)?;
    Ok(t.pair_differences().iter().sum())
}

pub fn evaluate(kind: WitnessKind, t: &ProbabilityTable) -> Result<f64> {
    match kind {
        WitnessKind::Guessing => eval_guessing(t),
        WitnessKind::Quadratic => eval_quadratic(t),
        WitnessKind::Linear => eval_linear(t),
    }
}

fn check_bound_args(n: usize, d: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::BadArgument(format!("need N ≥ 2, got {n}")));
    }
    if d < 1 {
        return Err(Error::BadArgument("need d ≥ 1".into()));
    }
    Ok(())
}

/// Largest value of the witness attainable with quantum systems of
/// dimension `d`.
pub fn quantum_bound(kind: WitnessKind, n: usize, d: usize) -> Result<f64> {
    check_bound_args(n, d)?;
    let nf = n as f64;
    let eff = d.min(n) as f64;
    Ok(match kind {
        WitnessKind::Guessing => eff / nf,
        WitnessKind::Quadratic => nf * nf / 2.0 * (1.0 - 1.0 / eff),
        WitnessKind::Linear => nf * (nf * (nf - 1.0)).sqrt() / 2.0 * (1.0 - 1.0 / eff).sqrt(),
    })
}

/// Closed-form classical bound, where one is known. `V_N` only has one at
/// `d = N − 1`; elsewhere the enumeration oracle in [`classical`] applies.
pub fn classical_bound(kind: WitnessKind, n: usize, d: usize) -> Result<Option<f64>> {
    check_bound_args(n, d)?;
    Ok(match kind {
        WitnessKind::Guessing => Some(d.min(n) as f64 / n as f64),
        WitnessKind::Quadratic => Some(classical::balanced_partition_value(n, d)?),
        WitnessKind::Linear if d + 1 == n => Some((d * (d + 1) / 2) as f64 - 1.0),
        WitnessKind::Linear => None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub kind: WitnessKind,
    pub n: usize,
    pub d: usize,
    pub quantum_bound: f64,
    pub classical_bound: Option<f64>,
    /// True when `classical_bound` comes from a closed form; false when the
    /// enumeration oracle is required.
    pub classical_bound_exact: bool,
}

pub fn bound_report(kind: WitnessKind, n: usize, d: usize) -> Result<BoundReport> {
    let quantum_bound = quantum_bound(kind, n, d)?;
    let classical_bound = classical_bound(kind, n, d)?;
    Ok(BoundReport {
        kind,
        n,
        d,
        quantum_bound,
        classical_bound,
        classical_bound_exact: classical_bound.is_some(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Certification {
    /// Smallest quantum dimension able to produce the observed value.
    pub min_quantum_d: usize,
    /// Smallest classical dimension able to produce it; `None` if no bound
    /// could be established (enumeration guard tripped).
    pub min_classical_d: Option<usize>,
}

/// Smallest dimensions compatible with an observed witness value.
pub fn certify_dimension(kind: WitnessKind, n: usize, value: f64) -> Result<Certification> {
    let tol = Tolerances::DEFAULT;
    let max = quantum_bound(kind, n, n)?;
    if !value.is_finite() || value > max + tol.numeric_slack {
        return Err(Error::OutOfRange { value, max });
    }
    let mut min_quantum_d = n;
    for d in 1..=n {
        if quantum_bound(kind, n, d)? >= value - tol.analytic_slack {
            min_quantum_d = d;
            break;
        }
    }

    let mut min_classical_d = None;
    for d in 1..=n {
        let (bound, slack) = match classical_bound(kind, n, d)? {
            Some(b) => (b, tol.analytic_slack),
            None => match classical::enumerate_max(kind, n, d) {
                Ok((v, _)) => (v, tol.numeric_slack),
                Err(Error::TooLarge { .. }) => break,
                Err(e) => return Err(e),
            },
        };
        if bound >= value - slack {
            min_classical_d = Some(d);
            break;
        }
    }
    Ok(Certification {
        min_quantum_d,
        min_classical_d,
    })
}
