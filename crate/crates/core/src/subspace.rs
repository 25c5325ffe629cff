//! Exact walk dynamics restricted to the symmetric invariant subspaces.
//!
//! With marks in every set the walk never leaves the span of
//! `|aa>, |ab>, |ba>, |bb>` (position type, coin type; `a` marked, `b`
//! unmarked). With marks confined to set 0 it stays in the span of
//! `|ca>, |ac>, |bc>, |cb>, |cc>`, where `a`/`b` are the marked/unmarked
//! vertices of set 0 and `c` is any vertex of the other sets. Each basis
//! vector is the normalized uniform superposition over its arc class.
//!
//! Operators are built from their definitions, `U(alpha, beta) =
//! S C(alpha) Q(beta)`, so they hold for any `M`, `N` and `n`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fixedpoint::{coin_factor, query_factor, RobustSchedule};
use crate::graph::{GraphConfig, MarkedSets};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Basis labels in storage order.
pub fn basis_labels(case: MarkedSets) -> &'static [&'static str] {
    match case {
        MarkedSets::EverySet => &["aa", "ab", "ba", "bb"],
        MarkedSets::OneSet => &["ca", "ac", "bc", "cb", "cc"],
    }
}

pub fn dimension(case: MarkedSets) -> usize {
    basis_labels(case).len()
}

/// Which starting state to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialMode {
    /// The uniform arc superposition, expressed exactly in the subspace.
    #[default]
    Exact,
    /// The large-graph limit of the uniform state: `|bb>` (marks in every
    /// set) or `|cc>` (marks in one set).
    Asymptotic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceState {
    case: MarkedSets,
    amplitudes: DVector<Complex64>,
}

impl SubspaceState {
    pub fn new(case: MarkedSets, amplitudes: DVector<Complex64>) -> Result<Self> {
        let expected = dimension(case);
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: amplitudes.len(),
            });
        }
        Ok(SubspaceState { case, amplitudes })
    }

    pub fn from_real(case: MarkedSets, values: &[f64]) -> Result<Self> {
        Self::new(
            case,
            DVector::from_iterator(values.len(), values.iter().map(|&x| Complex64::new(x, 0.0))),
        )
    }

    /// The basis state with the given storage index.
    pub fn basis(case: MarkedSets, index: usize) -> Self {
        let mut amplitudes = DVector::from_element(dimension(case), ZERO);
        amplitudes[index] = ONE;
        SubspaceState { case, amplitudes }
    }

    pub fn case(&self) -> MarkedSets {
        self.case
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Probability of measuring an arc with at least one marked endpoint.
    pub fn success(&self) -> f64 {
        let a = &self.amplitudes;
        let unmarked = match self.case {
            MarkedSets::EverySet => a[3].norm_sqr(),
            MarkedSets::OneSet => a[2].norm_sqr() + a[3].norm_sqr() + a[4].norm_sqr(),
        };
        (1.0 - unmarked).clamp(0.0, 1.0)
    }

    pub fn max_deviation(&self, other: &SubspaceState) -> f64 {
        (&self.amplitudes - &other.amplitudes)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// `1 - |<bb|psi>|^2` for a state in the four-dimensional subspace.
pub fn success_case1(state: &SubspaceState) -> Result<f64> {
    if state.case != MarkedSets::EverySet {
        return Err(Error::CaseMismatch);
    }
    Ok(state.success())
}

/// `1 - |<bc|psi>|^2 - |<cb|psi>|^2 - |<cc|psi>|^2` for the five-dimensional subspace.
pub fn success_case2(state: &SubspaceState) -> Result<f64> {
    if state.case != MarkedSets::OneSet {
        return Err(Error::CaseMismatch);
    }
    Ok(state.success())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceOperator {
    case: MarkedSets,
    matrix: DMatrix<Complex64>,
}

impl SubspaceOperator {
    pub fn new(case: MarkedSets, matrix: DMatrix<Complex64>) -> Result<Self> {
        let d = dimension(case);
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(SubspaceOperator { case, matrix })
    }

    pub fn case(&self) -> MarkedSets {
        self.case
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn apply(&self, state: &SubspaceState) -> Result<SubspaceState> {
        if state.case != self.case {
            return Err(Error::CaseMismatch);
        }
        Ok(SubspaceState {
            case: self.case,
            amplitudes: &self.matrix * &state.amplitudes,
        })
    }

    /// `max |U^dagger U - I|` over entries.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.matrix.nrows();
        let g = self.matrix.adjoint() * &self.matrix - DMatrix::<Complex64>::identity(d, d);
        g.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_deviation(&self, other: &DMatrix<Complex64>) -> f64 {
        (&self.matrix - other)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

fn require(config: &GraphConfig, case: MarkedSets) -> Result<()> {
    if config.case() == case {
        Ok(())
    } else {
        Err(Error::CaseMismatch)
    }
}

fn dense2(m: &Matrix2<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_fn(2, 2, |i, j| m[(i, j)])
}

fn permutation(images: &[usize]) -> DMatrix<Complex64> {
    let d = images.len();
    let mut p = DMatrix::from_element(d, d, ZERO);
    for (src, &dst) in images.iter().enumerate() {
        p[(dst, src)] = ONE;
    }
    p
}

/// Coin phase on the four-dimensional subspace, `I (x) C_sub(alpha)`.
pub fn case1_coin(config: &GraphConfig, alpha: f64) -> Result<DMatrix<Complex64>> {
    require(config, MarkedSets::EverySet)?;
    let lambda = config.marked() as f64 / config.set_size() as f64;
    Ok(DMatrix::<Complex64>::identity(2, 2).kronecker(&dense2(&coin_factor(lambda, alpha))))
}

/// Query phase on the four-dimensional subspace, `Q_sub(beta) (x) I`.
pub fn case1_query(beta: f64) -> DMatrix<Complex64> {
    dense2(&query_factor(beta)).kronecker(&DMatrix::<Complex64>::identity(2, 2))
}

/// Swap of the `|ab>` and `|ba>` directions.
pub fn case1_shift() -> DMatrix<Complex64> {
    permutation(&[0, 2, 1, 3])
}

/// `U(alpha, beta)` on the four-dimensional subspace. Independent of `M`.
pub fn case1_operator(config: &GraphConfig, alpha: f64, beta: f64) -> Result<SubspaceOperator> {
    let c = case1_coin(config, alpha)?;
    let matrix = case1_shift() * c * case1_query(beta);
    SubspaceOperator::new(MarkedSets::EverySet, matrix)
}

/// Coin phase on the five-dimensional subspace.
pub fn case2_coin(config: &GraphConfig, alpha: f64) -> Result<DMatrix<Complex64>> {
    require(config, MarkedSets::OneSet)?;
    let m = config.sets() as f64;
    let n_set = config.set_size() as f64;
    let n = config.marked() as f64;
    let degree = (m - 1.0) * n_set;
    // coin directions seen from a vertex outside set 0, in basis order ca, cb, cc
    let s = [
        (n / degree).sqrt(),
        ((n_set - n) / degree).sqrt(),
        ((m - 2.0) / (m - 1.0)).sqrt(),
    ];
    let slots = [0usize, 3, 4];
    let k = ONE - Complex64::from_polar(1.0, -alpha);
    let mut c = DMatrix::from_element(5, 5, ZERO);
    for (i, &si) in s.iter().enumerate() {
        for (j, &sj) in s.iter().enumerate() {
            c[(slots[i], slots[j])] = k * si * sj - if i == j { ONE } else { ZERO };
        }
    }
    // vertices of set 0 only see other sets, so their coin is already |s_u>
    let phase = -Complex64::from_polar(1.0, -alpha);
    c[(1, 1)] = phase;
    c[(2, 2)] = phase;
    Ok(c)
}

pub fn case2_query(beta: f64) -> DMatrix<Complex64> {
    let mut q = DMatrix::<Complex64>::identity(5, 5);
    q[(1, 1)] = Complex64::from_polar(1.0, beta);
    q
}

pub fn case2_shift() -> DMatrix<Complex64> {
    permutation(&[1, 0, 3, 2, 4])
}

/// `U(alpha, beta)` on the five-dimensional subspace.
pub fn case2_operator(config: &GraphConfig, alpha: f64, beta: f64) -> Result<SubspaceOperator> {
    let c = case2_coin(config, alpha)?;
    let matrix = case2_shift() * c * case2_query(beta);
    SubspaceOperator::new(MarkedSets::OneSet, matrix)
}

/// `U(alpha, beta)` for whichever subspace the configuration uses.
pub fn operator(config: &GraphConfig, alpha: f64, beta: f64) -> Result<SubspaceOperator> {
    match config.case() {
        MarkedSets::EverySet => case1_operator(config, alpha, beta),
        MarkedSets::OneSet => case2_operator(config, alpha, beta),
    }
}

/// The unparameterized walk, `alpha = beta = pi`.
pub fn plain_operator(config: &GraphConfig) -> Result<SubspaceOperator> {
    operator(config, PI, PI)
}

/// `(n, sqrt(nw), sqrt(nw), w) / N`.
pub fn case1_initial(config: &GraphConfig) -> Result<SubspaceState> {
    require(config, MarkedSets::EverySet)?;
    let n_set = config.set_size() as f64;
    let n = config.marked() as f64;
    let w = config.unmarked() as f64;
    let cross = (n * w).sqrt() / n_set;
    SubspaceState::from_real(MarkedSets::EverySet, &[n / n_set, cross, cross, w / n_set])
}

pub fn case2_initial(config: &GraphConfig, mode: InitialMode) -> Result<SubspaceState> {
    require(config, MarkedSets::OneSet)?;
    match mode {
        InitialMode::Asymptotic => Ok(SubspaceState::basis(MarkedSets::OneSet, 4)),
        InitialMode::Exact => {
            let m = config.sets() as f64;
            let n_set = config.set_size() as f64;
            let n = config.marked() as f64;
            let total = m * n_set;
            let marked = (n / total).sqrt();
            let unmarked = ((n_set - n) / total).sqrt();
            SubspaceState::from_real(
                MarkedSets::OneSet,
                &[marked, marked, unmarked, unmarked, ((m - 2.0) / m).sqrt()],
            )
        }
    }
}

pub fn initial_state(config: &GraphConfig, mode: InitialMode) -> Result<SubspaceState> {
    match (config.case(), mode) {
        (MarkedSets::EverySet, InitialMode::Exact) => case1_initial(config),
        (MarkedSets::EverySet, InitialMode::Asymptotic) => {
            Ok(SubspaceState::basis(MarkedSets::EverySet, 3))
        }
        (MarkedSets::OneSet, mode) => case2_initial(config, mode),
    }
}

/// `[psi, U psi, ..., U^steps psi]`.
pub fn evolve(
    state: &SubspaceState,
    operator: &SubspaceOperator,
    steps: usize,
) -> Result<Vec<SubspaceState>> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(state.clone());
    for k in 0..steps {
        let next = operator.apply(&out[k])?;
        out.push(next);
    }
    Ok(out)
}

/// Robust walk from the exact uniform state; `2t + 1` states.
pub fn evolve_robust(
    config: &GraphConfig,
    schedule: &RobustSchedule,
) -> Result<Vec<SubspaceState>> {
    let start = initial_state(config, InitialMode::Exact)?;
    evolve_robust_from(config, schedule, &start)
}

/// Robust walk from an arbitrary starting state in the matching subspace.
pub fn evolve_robust_from(
    config: &GraphConfig,
    schedule: &RobustSchedule,
    start: &SubspaceState,
) -> Result<Vec<SubspaceState>> {
    if schedule.betas().len() != schedule.alphas().len() + 1 {
        return Err(Error::MalformedSchedule {
            alphas: schedule.alphas().len(),
            betas: schedule.betas().len(),
        });
    }
    if start.case() != config.case() {
        return Err(Error::CaseMismatch);
    }
    let mut out = Vec::with_capacity(schedule.total_steps() + 1);
    out.push(start.clone());
    for (alpha, beta) in schedule.step_phases() {
        let u = operator(config, alpha, beta)?;
        let next = u.apply(out.last().expect("trajectory is never empty"))?;
        out.push(next);
    }
    Ok(out)
}

/// Closed-form matrices for the unparameterized and parameterized walks,
/// written out entry by entry. These are independent of the `S C Q`
/// construction above and serve as cross-check fixtures.
pub mod tabulated {
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// Plain walk on `|aa>, |ab>, |ba>, |bb>`.
    pub fn case1_plain(n: usize, w: usize) -> DMatrix<Complex64> {
        let (n, w) = (n as f64, w as f64);
        let s = n + w;
        let x = 2.0 * (n * w).sqrt() / s;
        #[rustfmt::skip]
        let rows = [
            1.0 - 2.0 * n / s, -x,              0.0,                0.0,
            0.0,               0.0,             2.0 * n / s - 1.0,  x,
            -x,                1.0 - 2.0 * w / s, 0.0,              0.0,
            0.0,               0.0,             x,                  2.0 * w / s - 1.0,
        ];
        DMatrix::from_row_iterator(4, 4, rows.iter().map(|&v| c(v)))
    }

    /// Plain walk on `|ca>, |ac>, |bc>, |cb>, |cc>`.
    pub fn case2_plain(sets: usize, set_size: usize, n: usize) -> DMatrix<Complex64> {
        let (m, big_n, n) = (sets as f64, set_size as f64, n as f64);
        let e12 = 2.0 * n / ((m - 1.0) * big_n) - 1.0;
        let e14 = 2.0 * (n * (big_n - n)).sqrt() / ((m - 1.0) * big_n);
        let e15 = 2.0 * ((m - 2.0) * n / big_n).sqrt() / (m - 1.0);
        let e34 = 2.0 * (n - big_n) / (big_n - m * big_n) - 1.0;
        let e35 = 2.0 * ((m - 2.0) * (big_n - n) / big_n).sqrt() / (m - 1.0);
        let e55 = 2.0 * (m - 2.0) / (m - 1.0) - 1.0;
        #[rustfmt::skip]
        let rows = [
            0.0, -1.0, 0.0, 0.0, 0.0,
            e12, 0.0,  0.0, e14, e15,
            e14, 0.0,  0.0, e34, e35,
            0.0, 0.0,  1.0, 0.0, 0.0,
            e15, 0.0,  0.0, e35, e55,
        ];
        DMatrix::from_row_iterator(5, 5, rows.iter().map(|&v| c(v)))
    }

    /// Parameterized walk `U(alpha, beta)` on the five-dimensional subspace.
    ///
    /// Off-diagonal coin couplings carry the factor `1 - e^{-i alpha}`, and
    /// the `|cc>` diagonal is `-1 + (1 - e^{-i alpha})(M-2)/(M-1)`.
    pub fn case2_parameterized(
        sets: usize,
        set_size: usize,
        n: usize,
        alpha: f64,
        beta: f64,
    ) -> DMatrix<Complex64> {
        let (m, big_n, n) = (sets as f64, set_size as f64, n as f64);
        let zero = c(0.0);
        let k = c(1.0) - Complex64::from_polar(1.0, -alpha);
        let e12 = c(-1.0) + k * n / ((m - 1.0) * big_n);
        let e14 = k * (n * (big_n - n)).sqrt() / ((m - 1.0) * big_n);
        let e15 = k * ((m - 2.0) * n * big_n).sqrt() / ((m - 1.0) * big_n);
        let e34 = c(-1.0) + k * (big_n - n) / ((m - 1.0) * big_n);
        let e35 = k * ((m - 2.0) * (big_n - n) / big_n).sqrt() / (m - 1.0);
        let e55 = c(-1.0) + k * (m - 2.0) / (m - 1.0);
        let e01 = -Complex64::from_polar(1.0, -(alpha - beta));
        let e23 = -Complex64::from_polar(1.0, -alpha);
        #[rustfmt::skip]
        let rows = [
            zero, e01,  zero, zero, zero,
            e12,  zero, zero, e14,  e15,
            e14,  zero, zero, e34,  e35,
            zero, zero, e23,  zero, zero,
            e15,  zero, zero, e35,  e55,
        ];
        DMatrix::from_row_slice(5, 5, &rows)
    }
}
