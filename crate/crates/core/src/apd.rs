//! Adaptive Penalty Decider.
//!
//! A crisp-partition fuzzy controller: each input is mapped onto one of four
//! ordered grades by fixed range boundaries, three 4×4 composition tables
//! chain the grades into a reputation-adjustment quotient (RAQ), and the RAQ
//! grade is defuzzified to the midpoint of its crisp range. The old reputation
//! is then multiplied by that midpoint.

use std::fmt;

use crate::error::{Error, Result};

/// Ordered fuzzy grade, `A < B < C < D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Grade {
    A,
    B,
    C,
    D,
}

impl Grade {
    pub const ALL: [Grade; 4] = [Grade::A, Grade::B, Grade::C, Grade::D];

    fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        match self {
            Grade::A => 'a',
            Grade::B => 'b',
            Grade::C => 'c',
            Grade::D => 'd',
        }
    }

    pub fn from_letter(c: char) -> Option<Grade> {
        match c {
            'a' => Some(Grade::A),
            'b' => Some(Grade::B),
            'c' => Some(Grade::C),
            'd' => Some(Grade::D),
            _ => None,
        }
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Crisp input variables of the controller.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    /// Expectation `E`.
    Expectation,
    /// Reputation-adjustment quotient (output side).
    Raq,
    /// Comparative reputation `C`.
    Comparative,
    /// Correctness `Z` for link-breakage investigations.
    CorrectnessLink,
    /// Correctness `Z` for deliberate-delay investigations.
    CorrectnessDelay,
    /// Fractional path length `P`.
    PathFraction,
}

impl Variable {
    pub fn name(self) -> &'static str {
        match self {
            Variable::Expectation => "E",
            Variable::Raq => "RAQ",
            Variable::Comparative => "C",
            Variable::CorrectnessLink => "Z(link)",
            Variable::CorrectnessDelay => "Z(delay)",
            Variable::PathFraction => "P",
        }
    }
}

/// Network-size dependent parameters of the range division.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeParams {
    pub phi_size: usize,
    pub hop_limit: u32,
}

/// `f(Φ) = 2|Φ| / (2|Φ| + 1)`, the supremum of comparative reputation.
pub fn comparative_supremum(phi_size: usize) -> f64 {
    let n = phi_size as f64;
    2.0 * n / (2.0 * n + 1.0)
}

/// Five ascending boundaries delimiting the four grades of a variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrispRangeSet {
    pub variable: Variable,
    pub boundaries: [f64; 5],
}

impl CrispRangeSet {
    pub fn new(variable: Variable, params: RangeParams) -> Self {
        let boundaries = match variable {
            Variable::Expectation | Variable::Raq | Variable::CorrectnessDelay => {
                [0.0, 0.25, 0.50, 0.75, 1.00]
            }
            Variable::CorrectnessLink => [0.0, 0.50, 0.65, 0.85, 1.00],
            Variable::Comparative => {
                let f = comparative_supremum(params.phi_size);
                [0.0, f / 4.0, f / 2.0, 3.0 * f / 4.0, 1.00]
            }
            Variable::PathFraction => {
                let h = params.hop_limit as f64;
                [
                    1.0 / h,
                    (1.0 + 3.0 / h) / 4.0,
                    (1.0 + 1.0 / h) / 2.0,
                    (3.0 + 1.0 / h) / 4.0,
                    1.00,
                ]
            }
        };
        Self {
            variable,
            boundaries,
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.boundaries[0], self.boundaries[4])
    }

    /// Half-open `[low, high)` intervals; the last one is closed at the top.
    pub fn grade_of(&self, value: f64) -> Result<Grade> {
        let (lo, hi) = self.domain();
        if !(value >= lo && value <= hi) {
            return Err(Error::CrispOutOfRange {
                kind: self.variable.name(),
                value,
            });
        }
        let b = &self.boundaries;
        Ok(if value < b[1] {
            Grade::A
        } else if value < b[2] {
            Grade::B
        } else if value < b[3] {
            Grade::C
        } else {
            Grade::D
        })
    }

    /// `(low, high)` of a grade's interval.
    pub fn range_of(&self, grade: Grade) -> (f64, f64) {
        let i = grade.index();
        (self.boundaries[i], self.boundaries[i + 1])
    }
}

pub fn fuzzify(variable: Variable, value: f64, params: RangeParams) -> Result<Grade> {
    CrispRangeSet::new(variable, params).grade_of(value)
}

use Grade::{A, B, C, D};

/// Rows: E grade, columns: C grade.
const RHO1_TABLE: [[Grade; 4]; 4] = [[B, B, A, A], [C, B, B, B], [D, C, C, C], [D, D, D, D]];

/// Rows: ρ1 grade, columns: Z grade.
const RHO2_TABLE: [[Grade; 4]; 4] = [[A, B, B, C], [A, B, C, C], [A, B, C, D], [B, C, D, D]];

/// Rows: ρ2 grade, columns: P grade.
const RAQ_TABLE: [[Grade; 4]; 4] = [[B, A, A, A], [C, B, B, B], [D, C, C, C], [D, D, D, D]];

/// The three composition tables as one value, mostly for inspection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleTables {
    pub rho1: [[Grade; 4]; 4],
    pub rho2: [[Grade; 4]; 4],
    pub raq: [[Grade; 4]; 4],
}

impl RuleTables {
    pub const fn standard() -> Self {
        Self {
            rho1: RHO1_TABLE,
            rho2: RHO2_TABLE,
            raq: RAQ_TABLE,
        }
    }

    /// All 48 cells, row-major, table by table.
    pub fn cells(&self) -> String {
        [&self.rho1, &self.rho2, &self.raq]
            .iter()
            .flat_map(|t| t.iter().flatten())
            .map(|g| g.letter())
            .collect()
    }
}

pub fn lookup_rho1(e: Grade, c: Grade) -> Grade {
    RHO1_TABLE[e.index()][c.index()]
}

pub fn lookup_rho2(rho1: Grade, z: Grade) -> Grade {
    RHO2_TABLE[rho1.index()][z.index()]
}

pub fn lookup_raq(rho2: Grade, p: Grade) -> Grade {
    RAQ_TABLE[rho2.index()][p.index()]
}

/// κ(RAQ): midpoint of the grade's crisp range.
pub fn defuzzify_kappa(raq: Grade) -> f64 {
    let (lo, hi) = CrispRangeSet::new(
        Variable::Raq,
        RangeParams {
            phi_size: 4,
            hop_limit: 1,
        },
    )
    .range_of(raq);
    (lo + hi) / 2.0
}

/// Link-breakage correctness, `Z = 1 - (1 - x''/(x'+1))(1 - x'/(y+1))`.
pub fn correctness_link(in_range: u64, collected: u64, expected: u64) -> Result<f64> {
    if in_range > collected || collected > expected {
        return Err(Error::InconsistentHelloCounts {
            in_range,
            collected,
            expected,
        });
    }
    let (x2, x1, y) = (in_range as f64, collected as f64, expected as f64);
    Ok(1.0 - (1.0 - x2 / (x1 + 1.0)) * (1.0 - x1 / (y + 1.0)))
}

/// Delay correctness, `Z = (t2 - t1) / ((m_j - 1)τ + 3τ')`, clamped to `[0, 1]`.
pub fn correctness_delay(
    forwarded_at: f64,
    sent_at: f64,
    queue_size: u32,
    tau: f64,
    tau_prime: f64,
) -> Result<f64> {
    if forwarded_at < sent_at {
        return Err(Error::CrispOutOfRange {
            kind: "t2 - t1",
            value: forwarded_at - sent_at,
        });
    }
    let denom = (queue_size.max(1) as f64 - 1.0) * tau + 3.0 * tau_prime;
    if queue_size == 0 || denom <= 0.0 {
        return Err(Error::DegenerateDelay {
            queue_size,
            tau_prime,
        });
    }
    Ok(((forwarded_at - sent_at) / denom).clamp(0.0, 1.0))
}

/// `P = q / p`: share of the path's nodes that precede the suspect.
pub fn path_fraction(before_suspect: usize, path_nodes: usize) -> Result<f64> {
    if before_suspect == 0 || before_suspect > path_nodes {
        return Err(Error::InvalidPathPosition {
            q: before_suspect,
            p: path_nodes,
        });
    }
    Ok(before_suspect as f64 / path_nodes as f64)
}

/// How the κ multiplication treats negative reputations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PenaltyMode {
    /// `R · κ` for every sign.
    #[default]
    Literal,
    /// `R / κ` for negative `R` (floored at `-|Φ|`), so the cut always hurts.
    Magnitude,
}

impl std::str::FromStr for PenaltyMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "literal" => Ok(PenaltyMode::Literal),
            "magnitude" => Ok(PenaltyMode::Magnitude),
            other => Err(format!("expected literal|magnitude, got `{other}`")),
        }
    }
}

/// Crisp inputs to one decision. `path_fraction` is absent for the delay variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApdInputs {
    pub comparative: f64,
    pub expectation: f64,
    pub correctness: f64,
    pub path_fraction: Option<f64>,
}

/// Every intermediate of a decision, as printed by `racs apd eval`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApdEvaluation {
    pub c: Grade,
    pub e: Grade,
    pub z: Grade,
    pub p: Option<Grade>,
    pub rho1: Grade,
    pub rho2: Grade,
    pub raq: Grade,
    pub kappa: f64,
}

/// Runs the table chain without touching any reputation.
pub fn evaluate(inputs: &ApdInputs, params: RangeParams) -> Result<ApdEvaluation> {
    let c = fuzzify(Variable::Comparative, inputs.comparative, params)?;
    let e = fuzzify(Variable::Expectation, inputs.expectation, params)?;
    let (z_var, p) = match inputs.path_fraction {
        Some(pf) => (
            Variable::CorrectnessLink,
            Some(fuzzify(Variable::PathFraction, pf, params)?),
        ),
        None => (Variable::CorrectnessDelay, None),
    };
    let z = fuzzify(z_var, inputs.correctness, params)?;
    let rho1 = lookup_rho1(e, c);
    let rho2 = lookup_rho2(rho1, z);
    let raq = match p {
        Some(p) => lookup_raq(rho2, p),
        None => rho2,
    };
    Ok(ApdEvaluation {
        c,
        e,
        z,
        p,
        rho1,
        rho2,
        raq,
        kappa: defuzzify_kappa(raq),
    })
}

/// Updated reputation of a suspect after its `suspicion_count`-th incident.
pub fn apd_update(
    old_rep: f64,
    inputs: &ApdInputs,
    suspicion_count: u32,
    max_suspicions: u32,
    params: RangeParams,
    mode: PenaltyMode,
) -> Result<f64> {
    let bound = params.phi_size as f64;
    if suspicion_count >= max_suspicions {
        return Ok(-bound);
    }
    let eval = evaluate(inputs, params)?;
    Ok(scale_reputation(old_rep, eval.kappa, bound, mode))
}

pub fn scale_reputation(old_rep: f64, kappa: f64, bound: f64, mode: PenaltyMode) -> f64 {
    match mode {
        PenaltyMode::Magnitude if old_rep < 0.0 => (old_rep / kappa).max(-bound),
        _ => old_rep * kappa,
    }
}
