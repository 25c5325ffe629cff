//! Fixed-point phase schedules for the robust walk.
//!
//! A schedule of length `t` holds `t` coin phases and `t + 1` query phases.
//! Pair `i` of the robust walk applies `U(alpha_i, beta_i)` and then
//! `U(alpha_i, beta_{i+1})`. The phases follow the Chebyshev construction of
//! fixed-point amplitude amplification: with `L = 2t + 1`,
//! `gamma = 1 / T_{1/L}(1/sqrt(eps))` and
//! `alpha_j = -beta_{t-j+1} = 2 arccot(tan(2 pi j / L) sqrt(1 - gamma^2))`.
//!
//! On the two-level model spanned by "marked" and "unmarked" coin directions,
//! the schedule keeps the unmarked weight at or below `eps` for every
//! marked fraction `lambda` with `L >= ln(2/sqrt(eps)) / sqrt(lambda)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Header line of the schedule key-value format.
pub const SCHEDULE_HEADER: &str = "# mpqw-schedule v1";

/// Chebyshev polynomial of real order `order >= 0` for `x >= 1`,
/// `T_order(x) = cosh(order * arccosh(x))`.
// Negated comparisons also reject NaN.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn chebyshev_t(order: f64, x: f64) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(Error::Domain(format!(
            "Chebyshev evaluation needs x >= 1, got {x}"
        )));
    }
    if !(order >= 0.0) {
        return Err(Error::Domain(format!(
            "Chebyshev order must be non-negative, got {order}"
        )));
    }
    Ok((order * x.acosh()).cosh())
}

/// `arccot` with range `(0, pi)`.
fn arccot(y: f64) -> f64 {
    FRAC_PI_2 - y.atan()
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "epsilon must lie in (0, 1], got {epsilon}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustSchedule {
    epsilon: f64,
    t: usize,
    gamma: f64,
    alphas: Vec<f64>,
    betas: Vec<f64>,
}

impl RobustSchedule {
    /// Builds the schedule for target failure `epsilon` and `t` step pairs.
    /// The last query phase is free and set to zero.
    pub fn generate(epsilon: f64, t: usize) -> Result<Self> {
        check_epsilon(epsilon)?;
        if t == 0 {
            return Err(Error::Domain("schedule needs t >= 1".into()));
        }
        let l = (2 * t + 1) as f64;
        let gamma = 1.0 / chebyshev_t(1.0 / l, 1.0 / epsilon.sqrt())?;
        let damping = (1.0 - gamma * gamma).max(0.0).sqrt();
        let alphas: Vec<f64> = (1..=t)
            .map(|j| 2.0 * arccot((2.0 * PI * j as f64 / l).tan() * damping))
            .collect();
        let mut betas: Vec<f64> = (1..=t).map(|j| -alphas[t - j]).collect();
        betas.push(0.0);
        Ok(RobustSchedule {
            epsilon,
            t,
            gamma,
            alphas,
            betas,
        })
    }

    /// Assembles a schedule from explicit phases, checking only the shape.
    pub fn from_parts(epsilon: f64, gamma: f64, alphas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() || betas.len() != alphas.len() + 1 {
            return Err(Error::MalformedSchedule {
                alphas: alphas.len(),
                betas: betas.len(),
            });
        }
        Ok(RobustSchedule {
            epsilon,
            t: alphas.len(),
            gamma,
            alphas,
            betas,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Number of step pairs.
    pub fn t(&self) -> usize {
        self.t
    }

    /// Sequence length `L = 2t + 1`.
    pub fn sequence_length(&self) -> usize {
        2 * self.t + 1
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// Walk steps performed by the schedule, `2t`.
    pub fn total_steps(&self) -> usize {
        2 * self.t
    }

    /// `(alpha, beta)` for each of the `2t` walk steps, in application order.
    pub fn step_phases(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.t).flat_map(move |i| {
            [
                (self.alphas[i], self.betas[i]),
                (self.alphas[i], self.betas[i + 1]),
            ]
        })
    }

    pub fn to_kv_string(&self) -> String {
        let join = |xs: &[f64]| {
            xs.iter()
                .map(|x| format!("{x:?}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let mut out = String::new();
        let _ = writeln!(out, "{SCHEDULE_HEADER}");
        let _ = writeln!(out, "epsilon = {:?}", self.epsilon);
        let _ = writeln!(out, "t = {}", self.t);
        let _ = writeln!(out, "L = {}", self.sequence_length());
        let _ = writeln!(out, "gamma = {:?}", self.gamma);
        let _ = writeln!(out, "alphas = {}", join(&self.alphas));
        let _ = writeln!(out, "betas = {}", join(&self.betas));
        out
    }

    pub fn from_kv_str(text: &str) -> Result<Self> {
        let mut epsilon = None;
        let mut t = None;
        let mut l = None;
        let mut gamma = None;
        let mut alphas = None;
        let mut betas = None;

        let float = |line: usize, s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::parse(line, format!("not a number: {s:?}")))
        };
        let list = |line: usize, s: &str| -> Result<Vec<f64>> {
            if s.trim().is_empty() {
                return Ok(Vec::new());
            }
            s.split(',').map(|x| float(line, x)).collect()
        };

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let (key, value) = raw
                .split_once('=')
                .ok_or_else(|| Error::parse(line, "expected `key = value`"))?;
            match key.trim() {
                "epsilon" => epsilon = Some(float(line, value)?),
                "t" => {
                    t = Some(
                        value
                            .trim()
                            .parse::<usize>()
                            .map_err(|_| Error::parse(line, "t must be an integer"))?,
                    )
                }
                "L" => {
                    l = Some(
                        value
                            .trim()
                            .parse::<usize>()
                            .map_err(|_| Error::parse(line, "L must be an integer"))?,
                    )
                }
                "gamma" => gamma = Some(float(line, value)?),
                "alphas" => alphas = Some(list(line, value)?),
                "betas" => betas = Some(list(line, value)?),
                other => return Err(Error::parse(line, format!("unknown key {other:?}"))),
            }
        }

        let missing = |k: &str| Error::parse(0, format!("missing key {k:?}"));
        let epsilon = epsilon.ok_or_else(|| missing("epsilon"))?;
        check_epsilon(epsilon)?;
        let schedule = RobustSchedule::from_parts(
            epsilon,
            gamma.ok_or_else(|| missing("gamma"))?,
            alphas.ok_or_else(|| missing("alphas"))?,
            betas.ok_or_else(|| missing("betas"))?,
        )?;
        if let Some(t) = t {
            if t != schedule.t {
                return Err(Error::parse(
                    0,
                    format!("t = {t} but {} alphas", schedule.t),
                ));
            }
        }
        if let Some(l) = l {
            if l != schedule.sequence_length() {
                return Err(Error::parse(0, format!("L = {l} does not equal 2t + 1")));
            }
        }
        Ok(schedule)
    }
}

/// Smallest `t` with `t >= ln(2/sqrt(eps)) sqrt(N) + 1` (marks in every set).
pub fn min_steps_case1(epsilon: f64, set_size: usize) -> Result<usize> {
    check_epsilon(epsilon)?;
    Ok(threshold(epsilon, set_size as f64))
}

/// Smallest `t` with `t >= ln(2/sqrt(eps)) sqrt(MN/2) + 1` (marks in one set).
pub fn min_steps_case2(epsilon: f64, sets: usize, set_size: usize) -> Result<usize> {
    check_epsilon(epsilon)?;
    if sets < 3 {
        return Err(Error::InvalidConfig(format!(
            "marks confined to one set need M >= 3, got M={sets}"
        )));
    }
    Ok(threshold(epsilon, sets as f64 * set_size as f64 / 2.0))
}

fn threshold(epsilon: f64, scale: f64) -> usize {
    ((2.0 / epsilon.sqrt()).ln() * scale.sqrt() + 1.0).ceil() as usize
}

/// Coin phase operator on the two-level model, `(1 - e^{-i alpha}) |s><s| - I`
/// with `|s> = (sqrt(lambda), sqrt(1 - lambda))` in the (marked, unmarked) basis.
pub fn coin_factor(lambda: f64, alpha: f64) -> Matrix2<Complex64> {
    let s = Vector2::new(
        Complex64::new(lambda.sqrt(), 0.0),
        Complex64::new((1.0 - lambda).sqrt(), 0.0),
    );
    let k = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -alpha);
    s * s.transpose() * k - Matrix2::identity()
}

/// Query phase operator on the two-level model, `diag(e^{i beta}, 1)`.
pub fn query_factor(beta: f64) -> Matrix2<Complex64> {
    Matrix2::new(
        Complex64::from_polar(1.0, beta),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
    )
}

/// Applies `coin(alpha_i) query(beta_i)` for `i = 1..t` to `start`.
pub fn reduced_evolve(
    lambda: f64,
    schedule: &RobustSchedule,
    start: Vector2<Complex64>,
) -> Vector2<Complex64> {
    schedule
        .alphas()
        .iter()
        .zip(schedule.betas())
        .fold(start, |v, (&a, &b)| {
            coin_factor(lambda, a) * (query_factor(b) * v)
        })
}

/// Unmarked weight left on the two-level model after the schedule, starting
/// from the uniform direction `|s>`.
pub fn reduced_2x2_failure(lambda: f64, schedule: &RobustSchedule) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Domain(format!(
            "marked fraction must lie in [0, 1], got {lambda}"
        )));
    }
    let start = Vector2::new(
        Complex64::new(lambda.sqrt(), 0.0),
        Complex64::new((1.0 - lambda).sqrt(), 0.0),
    );
    Ok(reduced_evolve(lambda, schedule, start)[1].norm_sqr())
}
