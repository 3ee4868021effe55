//! Arithmetic parameter sets for putative Ryser designs and the rule
//! cascade that eliminates them or forces them to be Type-1.
//!
//! A tuple is pinned down by the index `lambda`, a coprime pair `c > d >= 1`
//! and `g >= 1`: then `r1 = gc + 1`, `r2 = gd + 1`, `v = (c + d) g + 1`,
//! and `x`, `y` are the unique solution of `x + y = g`, `xd + yc = 2λ - 1`.

use std::fmt;
use std::fmt::Write as _;

use num_integer::Integer;
use thiserror::Error;

use crate::catalog::is_prime;
use crate::exec::Execution;
use crate::invariants::{Rational, RyserInvariants};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeasibilityError {
    #[error("index must be at least 2, got {0}")]
    IndexTooSmall(i64),
    #[error("bad index range {min}..={max}")]
    BadRange { min: i64, max: i64 },
    #[error("inconsistent tuple: {0}")]
    Inconsistent(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParameterTuple {
    pub lambda: i64,
    pub v: i64,
    pub r1: i64,
    pub r2: i64,
    pub g: i64,
    pub c: i64,
    pub d: i64,
    pub a: i64,
    pub e1: i64,
    pub e2: i64,
    /// `D = e1 - r2`.
    pub gap: i64,
    pub x: i64,
    pub y: i64,
    pub rho: Rational,
}

impl ParameterTuple {
    /// Derives the full tuple from `(lambda, c, d, g)`; `None` when `x` is
    /// not an integer or `c <= d`.
    pub fn from_core(lambda: i64, c: i64, d: i64, g: i64) -> Option<ParameterTuple> {
        if d < 1 || c <= d || g < 1 {
            return None;
        }
        let a = c - d;
        let num = g * c - (2 * lambda - 1);
        if num % a != 0 {
            return None;
        }
        let x = num / a;
        let y = g - x;
        let e1 = lambda + y * d;
        let e2 = lambda + x * c;
        let r2 = g * d + 1;
        Some(ParameterTuple {
            lambda,
            v: (c + d) * g + 1,
            r1: g * c + 1,
            r2,
            g,
            c,
            d,
            a,
            e1,
            e2,
            gap: e1 - r2,
            x,
            y,
            rho: Rational::new(c, d),
        })
    }

    pub fn from_invariants(inv: &RyserInvariants) -> ParameterTuple {
        ParameterTuple {
            lambda: inv.lambda,
            v: inv.v,
            r1: inv.r1,
            r2: inv.r2,
            g: inv.g,
            c: inv.c,
            d: inv.d,
            a: inv.a,
            e1: inv.e1,
            e2: inv.e2,
            gap: inv.gap,
            x: inv.x,
            y: inv.y,
            rho: inv.rho,
        }
    }

    pub fn check_consistency(&self) -> Result<(), FeasibilityError> {
        use FeasibilityError::Inconsistent;
        let t = self;
        let rules: [(bool, &'static str); 12] = [
            (t.r1 + t.r2 == t.v + 1, "r1 + r2 = v + 1"),
            (t.v - 1 == (t.c + t.d) * t.g, "v - 1 = (c + d) g"),
            (t.r1 - 1 == t.g * t.c, "r1 - 1 = g c"),
            (t.r2 - 1 == t.g * t.d, "r2 - 1 = g d"),
            (t.a == t.c - t.d, "a = c - d"),
            (t.c.gcd(&t.d) == 1 && t.d >= 1 && t.c > t.d, "c > d >= 1 coprime"),
            (t.x + t.y == t.g, "x + y = g"),
            (t.x * t.d + t.y * t.c == 2 * t.lambda - 1, "xd + yc = 2 lambda - 1"),
            (t.e1 == t.lambda + t.y * t.d, "e1 = lambda + y d"),
            (t.e2 == t.lambda + t.x * t.c, "e2 = lambda + x c"),
            (t.gap == t.y * t.c - t.lambda && t.gap == t.e1 - t.r2, "D = yc - lambda = e1 - r2"),
            (t.rho == Rational::new(t.c, t.d), "rho = c / d"),
        ];
        match rules.iter().find(|(ok, _)| !ok) {
            Some((_, what)) => Err(Inconsistent(what)),
            None => Ok(()),
        }
    }
}

impl fmt::Display for ParameterTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "lambda={} v={} r1={} r2={} g={} c={} d={} a={} e1={} e2={} D={} x={} y={}",
            self.lambda, self.v, self.r1, self.r2, self.g, self.c, self.d, self.a, self.e1,
            self.e2, self.gap, self.x, self.y
        )
    }
}

/// Every `(lambda, c, d, g)` tuple with `v <= lambda^3 + 2`, `a < lambda` and,
/// unless `relaxed`, `x, y >= 0`. Relaxed mode also emits tuples with a
/// negative `x` or `y` as long as both point classes are nonempty.
///
/// Sorted by `(v, r1, e1)`.
pub fn enumerate_tuples(
    lambda: i64,
    relaxed: bool,
    exec: Execution,
) -> Result<Vec<ParameterTuple>, FeasibilityError> {
    if lambda < 2 {
        return Err(FeasibilityError::IndexTooSmall(lambda));
    }
    let span = lambda * lambda * lambda + 1; // (c + d) g <= lambda^3 + 1
    let mut pairs = Vec::new();
    for d in 1.. {
        if 2 * d + 1 > span {
            break;
        }
        for c in (d + 1)..(d + lambda) {
            if c + d > span {
                break;
            }
            if c.gcd(&d) == 1 {
                pairs.push((c, d));
            }
        }
    }
    let chunks = exec.map(&pairs, |&(c, d)| {
        (1..=span / (c + d))
            .filter_map(|g| ParameterTuple::from_core(lambda, c, d, g))
            .filter(|t| {
                if relaxed {
                    t.e1 >= 1 && t.e2 >= 1
                } else {
                    t.x >= 0 && t.y >= 0
                }
            })
            .collect::<Vec<_>>()
    });
    let mut out: Vec<ParameterTuple> = chunks.into_iter().flatten().collect();
    out.sort_by_key(|t| (t.v, t.r1, t.e1));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `lambda/(lambda-1) <= rho <= lambda`, `rho` outside `(lambda-1, lambda)`.
    RhoBounds,
    /// `a < lambda` for `lambda > 2`.
    ABound,
    /// `v < 2 lambda^2 + 3 lambda - 1`.
    VBound,
    /// Parity clash in the replication identity when `v - 1` is a power of two.
    PowerOfTwoParity,
    /// `g = 1` forces Type-1.
    GcdOne,
    /// Index below 9 (cited).
    SmallIndex,
    /// Prime index (cited).
    PrimeIndex,
    /// Index twice a prime (cited).
    TwicePrimeIndex,
    /// `D` is `0` or `-1`.
    GapCriterion,
    /// `rho` is `lambda` or `lambda - 1` with `v <= lambda^2 + lambda + 1` (cited).
    RhoExtremes,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::RhoBounds => "E1",
            Rule::ABound => "E2",
            Rule::VBound => "E3",
            Rule::PowerOfTwoParity => "E4",
            Rule::GcdOne => "F1",
            Rule::SmallIndex => "F2",
            Rule::PrimeIndex => "F3",
            Rule::TwicePrimeIndex => "F3b",
            Rule::GapCriterion => "F4",
            Rule::RhoExtremes => "F5",
        }
    }

    /// Forcing rules that rest on design-level results taken as given.
    pub fn cited(self) -> bool {
        matches!(self, Rule::SmallIndex | Rule::PrimeIndex | Rule::TwicePrimeIndex | Rule::RhoExtremes)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Eliminated(Rule),
    ForcedType1(Rule),
    Open,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Eliminated(_) => "Eliminated",
            Verdict::ForcedType1(_) => "ForcedType1",
            Verdict::Open => "Open",
        }
    }

    pub fn rule_label(&self) -> String {
        match self {
            Verdict::Eliminated(r) => r.id().to_string(),
            Verdict::ForcedType1(r) if r.cited() => format!("{}(cited)", r.id()),
            Verdict::ForcedType1(r) => r.id().to_string(),
            Verdict::Open => "-".to_string(),
        }
    }
}

/// Both sides, reduced mod 2, of the replication identity divided by `g`:
/// `e1 (gc+1) c + e2 (gd+1) d = lambda [g(c+d)+1] (c+d)`.
pub fn replication_identity_parity(
    lambda: i64,
    c: i64,
    d: i64,
    g: i64,
    e1: i64,
    e2: i64,
) -> (i64, i64) {
    let (lambda, c, d, g, e1, e2) =
        (lambda as i128, c as i128, d as i128, g as i128, e1 as i128, e2 as i128);
    let lhs = e1 * (g * c + 1) * c + e2 * (g * d + 1) * d;
    let rhs = lambda * (g * (c + d) + 1) * (c + d);
    ((lhs % 2) as i64, (rhs % 2) as i64)
}

fn is_power_of_two(n: i64) -> bool {
    n > 0 && n & (n - 1) == 0
}

/// First matching rule, in the fixed order E1, E2, E3, E4, F1, F2, F3, F3b, F4, F5.
pub fn apply_rules(t: &ParameterTuple) -> Result<Verdict, FeasibilityError> {
    t.check_consistency()?;
    let l = t.lambda;
    let rl = Rational::from_integer(l);
    let rho = t.rho;

    if l > 1 {
        let below = rho < Rational::new(l, l - 1);
        let above = rho > rl;
        let in_gap = rho > Rational::from_integer(l - 1) && rho < rl;
        if below || above || in_gap {
            return Ok(Verdict::Eliminated(Rule::RhoBounds));
        }
    }
    if l > 2 && t.a >= l {
        return Ok(Verdict::Eliminated(Rule::ABound));
    }
    if t.v >= 2 * l * l + 3 * l - 1 {
        return Ok(Verdict::Eliminated(Rule::VBound));
    }
    if is_power_of_two(t.v - 1) && t.g > 1 {
        let (lhs, rhs) = replication_identity_parity(l, t.c, t.d, t.g, t.e1, t.e2);
        if lhs != rhs {
            return Ok(Verdict::Eliminated(Rule::PowerOfTwoParity));
        }
    }
    if t.g == 1 {
        return Ok(Verdict::ForcedType1(Rule::GcdOne));
    }
    if l < 9 {
        return Ok(Verdict::ForcedType1(Rule::SmallIndex));
    }
    if is_prime(l as usize) {
        return Ok(Verdict::ForcedType1(Rule::PrimeIndex));
    }
    if l % 2 == 0 && is_prime((l / 2) as usize) {
        return Ok(Verdict::ForcedType1(Rule::TwicePrimeIndex));
    }
    if t.gap == 0 || t.gap == -1 {
        return Ok(Verdict::ForcedType1(Rule::GapCriterion));
    }
    if (rho == rl || rho == Rational::from_integer(l - 1)) && t.v <= l * l + l + 1 {
        return Ok(Verdict::ForcedType1(Rule::RhoExtremes));
    }
    Ok(Verdict::Open)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LambdaSummary {
    pub lambda: i64,
    pub tuples: usize,
    pub eliminated: usize,
    pub forced_type1: usize,
    pub open: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub rows: Vec<(ParameterTuple, Verdict)>,
    pub summaries: Vec<LambdaSummary>,
}

pub const TSV_HEADER: &str = "lambda\tv\tr1\tr2\tg\tc\td\ta\te1\te2\tD\tx\ty\tverdict\trule";

impl ScanReport {
    pub fn open(&self) -> impl Iterator<Item = &ParameterTuple> {
        self.rows.iter().filter(|(_, v)| *v == Verdict::Open).map(|(t, _)| t)
    }

    /// Header, one line per tuple, then one `#` summary line per index.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(TSV_HEADER);
        out.push('\n');
        for (t, verdict) in &self.rows {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                t.lambda,
                t.v,
                t.r1,
                t.r2,
                t.g,
                t.c,
                t.d,
                t.a,
                t.e1,
                t.e2,
                t.gap,
                t.x,
                t.y,
                verdict.label(),
                verdict.rule_label()
            )
            .unwrap();
        }
        for s in &self.summaries {
            writeln!(
                out,
                "# lambda={} tuples={} eliminated={} forced_type1={} open={}",
                s.lambda, s.tuples, s.eliminated, s.forced_type1, s.open
            )
            .unwrap();
        }
        out
    }
}

pub fn scan_report(
    lambda_min: i64,
    lambda_max: i64,
    relaxed: bool,
    exec: Execution,
) -> Result<ScanReport, FeasibilityError> {
    if lambda_min < 2 || lambda_max < lambda_min {
        return Err(FeasibilityError::BadRange { min: lambda_min, max: lambda_max });
    }
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for lambda in lambda_min..=lambda_max {
        let tuples = enumerate_tuples(lambda, relaxed, exec)?;
        let verdicts = exec.map(&tuples, apply_rules);
        let mut summary = LambdaSummary { lambda, tuples: tuples.len(), ..Default::default() };
        for (t, v) in tuples.into_iter().zip(verdicts) {
            let v = v?;
            match v {
                Verdict::Eliminated(_) => summary.eliminated += 1,
                Verdict::ForcedType1(_) => summary.forced_type1 += 1,
                Verdict::Open => summary.open += 1,
            }
            rows.push((t, v));
        }
        summaries.push(summary);
    }
    Ok(ScanReport { rows, summaries })
}
