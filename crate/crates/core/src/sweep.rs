//! Coefficient-lattice sweeps comparing the predictor with the grid oracle.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{auto_box, count_components, GridSpec};
use crate::quadric::{QuarticCoefficients, DEFAULT_TOL};
use crate::topology::{predict_with_tol, Kind};

pub const DEFAULT_MAX_POINTS: usize = 10_000;

/// `v`, `lo:hi` or `lo:hi:step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeSpec {
    pub lo: f64,
    pub hi: f64,
    pub step: Option<f64>,
}

impl RangeSpec {
    pub fn single(v: f64) -> Self {
        Self {
            lo: v,
            hi: v,
            step: None,
        }
    }

    pub fn stepped(lo: f64, hi: f64, step: f64) -> Self {
        Self {
            lo,
            hi,
            step: Some(step),
        }
    }

    /// Number of lattice values, using `default_step` when none was given.
    pub fn count(&self, default_step: f64) -> Result<usize> {
        if self.lo == self.hi {
            return Ok(1);
        }
        let step = self.step.unwrap_or(default_step);
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidArgument(format!("range step must be positive, got {step}")));
        }
        let span = (self.hi - self.lo) / step;
        if !(span.is_finite() && span >= 0.0) {
            return Err(Error::InvalidArgument(format!("empty range {self}")));
        }
        if span > 1e9 {
            return Err(Error::ResourceLimit {
                needed: span as u64,
                budget: 1_000_000_000,
            });
        }
        Ok((span + 1e-9).floor() as usize + 1)
    }

    pub fn values(&self, default_step: f64) -> Result<Vec<f64>> {
        let k = self.count(default_step)?;
        let step = self.step.unwrap_or(default_step);
        Ok((0..k).map(|i| self.lo + step * i as f64).collect())
    }
}

impl fmt::Display for RangeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            _ if self.lo == self.hi => write!(f, "{}", self.lo),
            Some(s) => write!(f, "{}:{}:{}", self.lo, self.hi, s),
            None => write!(f, "{}:{}", self.lo, self.hi),
        }
    }
}

impl FromStr for RangeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| -> Result<f64> {
            let v: f64 = t
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("not a number: {t:?}")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::InvalidArgument(format!("not finite: {t:?}")))
            }
        };
        let parts: Vec<&str> = s.split(':').collect();
        let spec = match parts.as_slice() {
            [v] => Self::single(parse(v)?),
            [lo, hi] => Self {
                lo: parse(lo)?,
                hi: parse(hi)?,
                step: None,
            },
            [lo, hi, step] => Self::stepped(parse(lo)?, parse(hi)?, parse(step)?),
            _ => return Err(Error::InvalidArgument(format!("bad range {s:?}"))),
        };
        if spec.hi < spec.lo {
            return Err(Error::InvalidArgument(format!("range {s:?} has hi < lo")));
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: usize,
    pub m: u32,
    pub a: RangeSpec,
    pub b: RangeSpec,
    pub c: RangeSpec,
    pub d: RangeSpec,
    /// Step for ranges given without one.
    pub step: f64,
    pub half_width: Option<f64>,
    pub resolution: Option<usize>,
    pub tol: f64,
    pub max_points: usize,
}

impl SweepConfig {
    /// The default lattice for dimension `n`.
    pub fn default_for(n: usize) -> Self {
        let (a, b, c, d) = if n == 2 {
            (
                RangeSpec::stepped(-4.0, 4.0, 1.0),
                RangeSpec::stepped(-2.0, 2.0, 0.5),
                RangeSpec::stepped(-3.0, 3.0, 1.0),
                RangeSpec::stepped(-2.0, 2.0, 1.0),
            )
        } else {
            (
                RangeSpec::stepped(-4.0, 4.0, 2.0),
                RangeSpec::stepped(-2.0, 2.0, 1.0),
                RangeSpec::stepped(-3.0, 3.0, 1.5),
                RangeSpec::stepped(-2.0, 2.0, 1.0),
            )
        };
        Self {
            n,
            m: 1,
            a,
            b,
            c,
            d,
            step: 1.0,
            half_width: None,
            resolution: None,
            tol: DEFAULT_TOL,
            max_points: DEFAULT_MAX_POINTS,
        }
    }

    pub fn point_count(&self) -> Result<usize> {
        [self.a, self.b, self.c, self.d]
            .iter()
            .try_fold(1usize, |acc, r| {
                acc.checked_mul(r.count(self.step)?)
                    .ok_or(Error::Overflow("sweep point count"))
            })
    }

    /// Lattice points in row order (`D` varies fastest).
    pub fn points(&self) -> Result<Vec<[f64; 4]>> {
        let count = self.point_count()?;
        if count > self.max_points {
            return Err(Error::ResourceLimit {
                needed: count as u64,
                budget: self.max_points as u64,
            });
        }
        let [a, b, c, d] = [self.a, self.b, self.c, self.d].map(|r| r.values(self.step));
        let (a, b, c, d) = (a?, b?, c?, d?);
        let mut pts = Vec::with_capacity(count);
        for &av in &a {
            for &bv in &b {
                for &cv in &c {
                    for &dv in &d {
                        pts.push([av, bv, cv, dv]);
                    }
                }
            }
        }
        Ok(pts)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub coeffs: [f64; 4],
    pub predicted_kind: Kind,
    pub predicted_total: u64,
    pub predicted_compact: u64,
    pub predicted_nested: bool,
    pub oracle_total: u64,
    pub oracle_compact: u64,
    pub oracle_nested: bool,
    /// `None` when the predictor is undecided.
    pub agree: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub points: usize,
    pub decided: usize,
    pub agreeing: usize,
    pub undecided_rate: f64,
    pub max_oracle_total: u64,
    /// Points whose oracle count exceeds `2^n + 1`.
    pub bound_violations: usize,
}

impl SweepSummary {
    pub fn agreement_rate(&self) -> f64 {
        if self.decided == 0 {
            1.0
        } else {
            self.agreeing as f64 / self.decided as f64
        }
    }
}

impl fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "points={} decided={} agreement={:.2}% ({}/{}) undecided={:.2}% max_oracle_total={} bound_violations={}",
            self.points,
            self.decided,
            100.0 * self.agreement_rate(),
            self.agreeing,
            self.decided,
            100.0 * self.undecided_rate,
            self.max_oracle_total,
            self.bound_violations
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub summary: SweepSummary,
}

/// Grid used for one point: the automatic box with optional overrides.
pub fn grid_for(q: &QuarticCoefficients, half_width: Option<f64>, resolution: Option<usize>) -> Result<GridSpec> {
    let auto = auto_box(q)?;
    GridSpec::new(
        q.n,
        half_width.unwrap_or(auto.half_width),
        resolution.unwrap_or(auto.resolution),
    )
}

fn evaluate(cfg: &SweepConfig, p: [f64; 4]) -> Result<SweepRow> {
    let q = QuarticCoefficients::with_exponent(p[0], p[1], p[2], p[3], cfg.n, cfg.m)?;
    let pred = predict_with_tol(&q, cfg.tol);
    let grid = grid_for(&q, cfg.half_width, cfg.resolution)?;
    let rep = count_components(&q, &grid)?;
    let oracle_nested = !rep.nesting_pairs.is_empty();
    let agree = pred.kind.is_decided().then_some(
        pred.total_components == rep.total
            && pred.compact_components == rep.compact
            && pred.nested == oracle_nested
            && rep.indeterminate_pairs.is_empty(),
    );
    Ok(SweepRow {
        coeffs: p,
        predicted_kind: pred.kind,
        predicted_total: pred.total_components,
        predicted_compact: pred.compact_components,
        predicted_nested: pred.nested,
        oracle_total: rep.total,
        oracle_compact: rep.compact,
        oracle_nested,
        agree,
    })
}

/// Runs predictor and oracle on every lattice point. Points are processed
/// in parallel; rows come back in lattice order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    let points = cfg.points()?;
    let rows: Vec<SweepRow> = points
        .par_iter()
        .map(|&p| evaluate(cfg, p))
        .collect::<Result<_>>()?;
    let bound = (1u64 << cfg.n.min(62)) + 1;
    let decided = rows.iter().filter(|r| r.agree.is_some()).count();
    let summary = SweepSummary {
        points: rows.len(),
        decided,
        agreeing: rows.iter().filter(|r| r.agree == Some(true)).count(),
        undecided_rate: if rows.is_empty() {
            0.0
        } else {
            (rows.len() - decided) as f64 / rows.len() as f64
        },
        max_oracle_total: rows.iter().map(|r| r.oracle_total).max().unwrap_or(0),
        bound_violations: rows.iter().filter(|r| r.oracle_total > bound).count(),
    };
    Ok(SweepOutcome { rows, summary })
}

pub const CSV_HEADER: &str = "A,B,C,D,predicted_kind,predicted_total,oracle_total,agree,predicted_compact,oracle_compact,predicted_nested,oracle_nested";

/// Writes the rows as CSV; `agree` is `true`, `false` or `na` (undecided).
pub fn write_csv<W: Write + ?Sized>(rows: &[SweepRow], out: &mut W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        let agree = match r.agree {
            Some(true) => "true",
            Some(false) => "false",
            None => "na",
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.coeffs[0],
            r.coeffs[1],
            r.coeffs[2],
            r.coeffs[3],
            r.predicted_kind.as_str(),
            r.predicted_total,
            r.oracle_total,
            agree,
            r.predicted_compact,
            r.oracle_compact,
            r.predicted_nested,
            r.oracle_nested
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!("2".parse::<RangeSpec>().unwrap(), RangeSpec::single(2.0));
        let r: RangeSpec = "-1:1:0.5".parse().unwrap();
        assert_eq!(r.values(1.0).unwrap(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        let r: RangeSpec = "0:3".parse().unwrap();
        assert_eq!(r.count(1.0).unwrap(), 4);
        assert!("1:0".parse::<RangeSpec>().is_err());
        assert!("a".parse::<RangeSpec>().is_err());
        assert!("1:2:3:4".parse::<RangeSpec>().is_err());
        assert!("0:1:0".parse::<RangeSpec>().unwrap().count(1.0).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let mut cfg = SweepConfig::default_for(2);
        cfg.max_points = 10;
        assert!(matches!(cfg.points(), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn single_point_sphere() {
        let mut cfg = SweepConfig::default_for(2);
        cfg.a = RangeSpec::single(0.0);
        cfg.b = RangeSpec::single(1.0);
        cfg.c = RangeSpec::single(0.0);
        cfg.d = RangeSpec::single(-1.0);
        cfg.resolution = Some(64);
        let out = run_sweep(&cfg).unwrap();
        assert_eq!(out.rows.len(), 1);
        assert_eq!(out.rows[0].agree, Some(true));
        let mut buf = Vec::new();
        write_csv(&out.rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "0,1,0,-1,single_sphere,1,1,true,1,1,false,false");
    }
}
