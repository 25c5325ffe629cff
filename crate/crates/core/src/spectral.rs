//! Closed-form phase gaps, optimal step counts and analytic eigenpairs.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{GraphConfig, MarkedSets};
use crate::subspace;

/// Phase gap of the four-dimensional walk, `arccos((w - n) / (n + w))`.
pub fn omega_case1(n: usize, w: usize) -> Result<f64> {
    if n + w == 0 {
        return Err(Error::Domain("omega needs n + w > 0".into()));
    }
    let (n, w) = (n as f64, w as f64);
    Ok(((w - n) / (n + w)).clamp(-1.0, 1.0).acos())
}

/// Phase gap of the five-dimensional walk, `arcsin(sqrt(2n / MN))`.
pub fn omega_case2(sets: usize, set_size: usize, n: usize) -> Result<f64> {
    let total = sets as f64 * set_size as f64;
    let ratio = 2.0 * n as f64 / total;
    if ratio > 1.0 {
        return Err(Error::Domain(format!(
            "omega' needs 2n <= MN, got n={n}, MN={total}"
        )));
    }
    Ok(ratio.sqrt().asin())
}

/// Nearest even integer; exact half-way points go up.
fn nearest_even(x: f64) -> usize {
    (2.0 * (x / 2.0 + 0.5).floor()).max(0.0) as usize
}

/// Nearest odd integer; exact half-way points go up.
fn nearest_odd(x: f64) -> usize {
    (2.0 * ((x - 1.0) / 2.0 + 0.5).floor() + 1.0).max(1.0) as usize
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSummary {
    pub omega: f64,
    pub t_even: usize,
    /// Only defined for marks in every set.
    pub t_odd: Option<usize>,
    pub predicted_max_probability: f64,
}

/// `(t_even, t_odd)`: the even step nearest `pi / omega` and the odd step
/// nearest `arccos((n - w) / (n + w)) / omega`.
pub fn optimal_steps_case1(config: &GraphConfig) -> Result<(usize, usize)> {
    if config.case() != MarkedSets::EverySet {
        return Err(Error::CaseMismatch);
    }
    if config.marked() == 0 {
        return Err(Error::NoMarkedVertices);
    }
    if config.unmarked() == 0 {
        return Err(Error::Domain(
            "every vertex is marked; no search needed".into(),
        ));
    }
    let (n, w) = (config.marked(), config.unmarked());
    let omega = omega_case1(n, w)?;
    let odd_target = ((n as f64 - w as f64) / (n + w) as f64).acos() / omega;
    Ok((nearest_even(PI / omega), nearest_odd(odd_target)))
}

/// `<psi_t|bb>` for the walk started in `|bb>`.
pub fn overlap_bb_closed_form(config: &GraphConfig, t: usize) -> Result<f64> {
    if config.case() != MarkedSets::EverySet {
        return Err(Error::CaseMismatch);
    }
    let (n, w) = (config.marked(), config.unmarked());
    let omega = omega_case1(n, w)?;
    let wave = 0.5 * (omega * t as f64).cos();
    Ok(if t.is_multiple_of(2) {
        wave + 0.5
    } else {
        wave + (w as f64 - n as f64) / (2.0 * (n + w) as f64)
    })
}

/// Nearest integer to `pi / (2 omega')`, ties up.
pub fn optimal_steps_case2(sets: usize, set_size: usize, n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::NoMarkedVertices);
    }
    let omega = omega_case2(sets, set_size, n)?;
    Ok((PI / (2.0 * omega) + 0.5).floor() as usize)
}

/// `sin^2(omega' t)`.
pub fn predicted_success_case2(sets: usize, set_size: usize, n: usize, t: usize) -> Result<f64> {
    let omega = omega_case2(sets, set_size, n)?;
    Ok((omega * t as f64).sin().powi(2))
}

pub fn summary(config: &GraphConfig) -> Result<SpectralSummary> {
    match config.case() {
        MarkedSets::EverySet => {
            let (t_even, t_odd) = optimal_steps_case1(config)?;
            let omega = omega_case1(config.marked(), config.unmarked())?;
            let overlap = overlap_bb_closed_form(config, t_even)?;
            Ok(SpectralSummary {
                omega,
                t_even,
                t_odd: Some(t_odd),
                predicted_max_probability: 1.0 - overlap * overlap,
            })
        }
        MarkedSets::OneSet => {
            let (m, n_set, n) = (config.sets(), config.set_size(), config.marked());
            let t = optimal_steps_case2(m, n_set, n)?;
            Ok(SpectralSummary {
                omega: omega_case2(m, n_set, n)?,
                t_even: t,
                t_odd: None,
                predicted_max_probability: predicted_success_case2(m, n_set, n, t)?,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub value: Complex64,
    pub vector: DVector<Complex64>,
}

impl Eigenpair {
    /// `|| U v - lambda v ||` against the exact walk operator.
    pub fn residual(&self, op: &subspace::SubspaceOperator) -> f64 {
        (op.matrix() * &self.vector - &self.vector * self.value).norm()
    }
}

fn cvec(values: &[Complex64]) -> DVector<Complex64> {
    DVector::from_column_slice(values)
}

/// Exact eigenpairs of the plain four-dimensional walk:
/// `-1, 1, e^{-i omega}, e^{i omega}`.
pub fn analytic_eigenpairs_case1(n: usize, w: usize) -> Result<Vec<Eigenpair>> {
    if n == 0 || w == 0 {
        return Err(Error::Domain("eigenpairs need n >= 1 and w >= 1".into()));
    }
    let omega = omega_case1(n, w)?;
    let (nf, wf) = (n as f64, w as f64);
    let r = |x: f64| Complex64::new(x, 0.0);
    let i = |x: f64| Complex64::new(0.0, x);
    let k1 = (nf / (2.0 * (nf + wf))).sqrt();
    let k2 = (wf / (2.0 * (nf + wf))).sqrt();
    let wn = (wf / nf).sqrt();
    let nw = (nf / wf).sqrt();
    Ok(vec![
        Eigenpair {
            value: r(-1.0),
            vector: cvec(&[r(-k1), r(-k1 * wn), r(-k1 * wn), r(k1)]),
        },
        Eigenpair {
            value: r(1.0),
            vector: cvec(&[r(-k2), r(k2 * nw), r(k2 * nw), r(k2)]),
        },
        Eigenpair {
            value: Complex64::from_polar(1.0, -omega),
            vector: cvec(&[r(0.5), i(0.5), i(-0.5), r(0.5)]),
        },
        Eigenpair {
            value: Complex64::from_polar(1.0, omega),
            vector: cvec(&[r(0.5), i(-0.5), i(0.5), r(0.5)]),
        },
    ])
}

/// Large-graph eigenpairs of the plain five-dimensional walk.
///
/// The pair on `|bc>, |cb>` has eigenvalue `(n - N)/(N(M-1)) ± i`;
/// [`case2_pair_sign_check`] compares it with the opposite real-part sign.
/// The vectors are accurate to `O(1/sqrt(M))`.
pub fn analytic_eigenpairs_case2(sets: usize, set_size: usize, n: usize) -> Result<Vec<Eigenpair>> {
    let (m, big_n, nf) = (sets as f64, set_size as f64, n as f64);
    let drift = (nf - big_n) / (big_n * (m - 1.0));
    let gap = (2.0 * nf / (m * big_n)).sqrt();
    let z = Complex64::new(0.0, 0.0);
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let ih = Complex64::new(0.0, FRAC_1_SQRT_2);
    let i2 = Complex64::new(0.0, 0.5);
    Ok(vec![
        Eigenpair {
            value: Complex64::new(-1.0, 0.0),
            vector: cvec(&[h, h, z, z, z]),
        },
        Eigenpair {
            value: Complex64::new(drift, 1.0),
            vector: cvec(&[z, z, h, -ih, z]),
        },
        Eigenpair {
            value: Complex64::new(drift, -1.0),
            vector: cvec(&[z, z, h, ih, z]),
        },
        Eigenpair {
            value: Complex64::new(1.0, gap),
            vector: cvec(&[i2, -i2, z, z, h]),
        },
        Eigenpair {
            value: Complex64::new(1.0, -gap),
            vector: cvec(&[-i2, i2, z, z, h]),
        },
    ])
}

/// Exact eigenvalues of a subspace operator.
pub fn eigenvalues(op: &subspace::SubspaceOperator) -> Vec<Complex64> {
    op.matrix()
        .clone()
        .schur()
        .eigenvalues()
        .expect("complex Schur form is triangular")
        .iter()
        .copied()
        .collect()
}

/// Distance from the `|bc>, |cb>` pair's listed eigenvalues to the exact
/// spectrum, for the listed real part and for the opposite sign.
/// Returns `(listed, flipped)`.
pub fn case2_pair_sign_check(sets: usize, set_size: usize, n: usize) -> Result<(f64, f64)> {
    let config = GraphConfig::one_set(sets, set_size, n)?;
    let exact = eigenvalues(&subspace::plain_operator(&config)?);
    let nearest = |z: Complex64| {
        exact
            .iter()
            .map(|e| (e - z).norm())
            .fold(f64::INFINITY, f64::min)
    };
    let pairs = analytic_eigenpairs_case2(sets, set_size, n)?;
    let mut listed: f64 = 0.0;
    let mut flipped: f64 = 0.0;
    for p in &pairs[1..3] {
        listed = listed.max(nearest(p.value));
        flipped = flipped.max(nearest(Complex64::new(-p.value.re, p.value.im)));
    }
    Ok((listed, flipped))
}
