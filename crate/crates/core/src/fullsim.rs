//! Reference simulator over every ordered adjacent pair `(u, v)`.
//!
//! Arcs are stored lexicographically by `(u.set, u.index, v.set, v.index)`
//! with same-set pairs skipped. With `c = v.set` when `v.set < u.set` and
//! `c = v.set - 1` otherwise, the arc index is
//! `((u.set * N + u.index) * (M - 1) + c) * N + v.index`.
//! This ordering is part of the public contract.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{GraphConfig, MarkedSets, VertexId};
use crate::subspace::{self, SubspaceOperator, SubspaceState};

/// Largest edge space the dense simulator accepts.
pub const DIMENSION_LIMIT: u64 = 2_000_000;

/// Largest edge space for [`reduced_operator`], which runs one step per basis vector.
pub const REDUCED_OPERATOR_LIMIT: u64 = 100_000;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn guard(config: &GraphConfig, limit: u64) -> Result<()> {
    let dimension = config.edge_space_dimension();
    if dimension > limit {
        Err(Error::TooLarge { dimension, limit })
    } else {
        Ok(())
    }
}

/// Index of the arc `(u, v)`; the caller guarantees adjacency and range.
#[inline]
fn arc_index_unchecked(config: &GraphConfig, u: VertexId, v: VertexId) -> usize {
    let n = config.set_size();
    let c = if v.set < u.set { v.set } else { v.set - 1 };
    ((u.set * n + u.index) * (config.sets() - 1) + c) * n + v.index
}

#[inline]
fn arc_at_unchecked(config: &GraphConfig, index: usize) -> (VertexId, VertexId) {
    let n = config.set_size();
    let v_index = index % n;
    let rest = index / n;
    let c = rest % (config.sets() - 1);
    let u_flat = rest / (config.sets() - 1);
    let u = VertexId::new(u_flat / n, u_flat % n);
    let v_set = if c < u.set { c } else { c + 1 };
    (u, VertexId::new(v_set, v_index))
}

pub fn arc_index(config: &GraphConfig, u: VertexId, v: VertexId) -> Result<usize> {
    config.check_vertex(u)?;
    config.check_vertex(v)?;
    if u.set == v.set {
        return Err(Error::NotAdjacent);
    }
    Ok(arc_index_unchecked(config, u, v))
}

pub fn arc_at(config: &GraphConfig, index: usize) -> Result<(VertexId, VertexId)> {
    let dim = config.edge_space_dimension();
    if index as u64 >= dim {
        return Err(Error::Domain(format!("arc index {index} outside 0..{dim}")));
    }
    Ok(arc_at_unchecked(config, index))
}

/// Amplitudes over the arcs of one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeState {
    config: GraphConfig,
    amplitudes: Vec<Complex64>,
}

impl EdgeState {
    pub fn new(config: GraphConfig, amplitudes: Vec<Complex64>) -> Result<Self> {
        guard(&config, DIMENSION_LIMIT)?;
        let expected = config.edge_space_dimension() as usize;
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: amplitudes.len(),
            });
        }
        Ok(EdgeState { config, amplitudes })
    }

    /// `|u v>`.
    pub fn basis(config: GraphConfig, u: VertexId, v: VertexId) -> Result<Self> {
        guard(&config, DIMENSION_LIMIT)?;
        let k = arc_index(&config, u, v)?;
        let mut amplitudes = vec![ZERO; config.edge_space_dimension() as usize];
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Ok(EdgeState { config, amplitudes })
    }

    /// Equal amplitude `1/sqrt(M(M-1)N^2)` on every arc.
    pub fn uniform(config: GraphConfig) -> Result<Self> {
        guard(&config, DIMENSION_LIMIT)?;
        let dim = config.edge_space_dimension() as usize;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(EdgeState {
            config,
            amplitudes: vec![a; dim],
        })
    }

    pub fn config(&self) -> &GraphConfig {
        &self.config
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, u: VertexId, v: VertexId) -> Result<Complex64> {
        Ok(self.amplitudes[arc_index(&self.config, u, v)?])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_deviation(&self, other: &EdgeState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `S|uv> = |vu>`.
    pub fn apply_shift(&self) -> EdgeState {
        let mut out = vec![ZERO; self.amplitudes.len()];
        for (k, &a) in self.amplitudes.iter().enumerate() {
            let (u, v) = arc_at_unchecked(&self.config, k);
            out[arc_index_unchecked(&self.config, v, u)] = a;
        }
        EdgeState {
            config: self.config,
            amplitudes: out,
        }
    }

    /// `C(alpha)`: on each position block `x -> (1 - e^{-i alpha}) <s|x> |s> - x`
    /// where `|s>` is uniform over the neighbours.
    pub fn apply_coin(&self, alpha: f64) -> EdgeState {
        let degree = self.config.degree() as usize;
        let k = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -alpha);
        let mut out = self.amplitudes.clone();
        out.par_chunks_mut(degree).for_each(|block| {
            let mean = block.iter().sum::<Complex64>() / degree as f64;
            let shift = k * mean;
            for x in block.iter_mut() {
                *x = shift - *x;
            }
        });
        EdgeState {
            config: self.config,
            amplitudes: out,
        }
    }

    /// `Q(beta)`: phase `e^{i beta}` on arcs whose position vertex is marked.
    pub fn apply_query(&self, beta: f64) -> EdgeState {
        let degree = self.config.degree() as usize;
        let n = self.config.set_size();
        let phase = Complex64::from_polar(1.0, beta);
        let mut out = self.amplitudes.clone();
        for (u_flat, block) in out.chunks_mut(degree).enumerate() {
            if self.config.marks(u_flat / n, u_flat % n) {
                block.iter_mut().for_each(|x| *x *= phase);
            }
        }
        EdgeState {
            config: self.config,
            amplitudes: out,
        }
    }

    /// `U(alpha, beta) = S C(alpha) Q(beta)`.
    pub fn walk_step(&self, alpha: f64, beta: f64) -> EdgeState {
        self.apply_query(beta).apply_coin(alpha).apply_shift()
    }

    /// Weight on arcs with at least one marked endpoint.
    pub fn success_probability(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|&(k, _)| {
                let (u, v) = arc_at_unchecked(&self.config, k);
                self.config.marks(u.set, u.index) || self.config.marks(v.set, v.index)
            })
            .map(|(_, z)| z.norm_sqr())
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }

    /// Coordinates in the invariant subspace of the configuration's case and
    /// the norm of the component outside it.
    pub fn project(&self) -> (SubspaceState, f64) {
        let case = self.config.case();
        let dim = subspace::dimension(case);
        let mut sums = vec![ZERO; dim];
        let counts = class_sizes(&self.config);
        for (k, &a) in self.amplitudes.iter().enumerate() {
            sums[arc_class(&self.config, k)] += a;
        }
        let coords: Vec<Complex64> = sums
            .iter()
            .zip(&counts)
            .map(|(&s, &c)| if c == 0 { ZERO } else { s / (c as f64).sqrt() })
            .collect();
        let residual = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(k, &a)| {
                let cls = arc_class(&self.config, k);
                let c = counts[cls];
                let inside = if c == 0 {
                    ZERO
                } else {
                    coords[cls] / (c as f64).sqrt()
                };
                (a - inside).norm_sqr()
            })
            .sum::<f64>()
            .sqrt();
        let state = SubspaceState::new(case, DVector::from_vec(coords))
            .expect("class count matches subspace dimension");
        (state, residual)
    }

    /// Maps a subspace state back onto the arcs.
    pub fn embed(config: GraphConfig, state: &SubspaceState) -> Result<Self> {
        guard(&config, DIMENSION_LIMIT)?;
        if state.case() != config.case() {
            return Err(Error::CaseMismatch);
        }
        let counts = class_sizes(&config);
        let dim = config.edge_space_dimension() as usize;
        let amplitudes = (0..dim)
            .map(|k| {
                let cls = arc_class(&config, k);
                let c = counts[cls];
                if c == 0 {
                    ZERO
                } else {
                    state.amplitude(cls) / (c as f64).sqrt()
                }
            })
            .collect();
        Ok(EdgeState { config, amplitudes })
    }
}

/// Uniform superposition over all arcs.
pub fn uniform_initial(config: GraphConfig) -> Result<EdgeState> {
    EdgeState::uniform(config)
}

/// Subspace basis index of an arc.
fn arc_class(config: &GraphConfig, index: usize) -> usize {
    let (u, v) = arc_at_unchecked(config, index);
    let mu = config.marks(u.set, u.index);
    let mv = config.marks(v.set, v.index);
    match config.case() {
        MarkedSets::EverySet => match (mu, mv) {
            (true, true) => 0,
            (true, false) => 1,
            (false, true) => 2,
            (false, false) => 3,
        },
        MarkedSets::OneSet => {
            if u.set == 0 {
                if mu {
                    1
                } else {
                    2
                }
            } else if v.set == 0 {
                if mv {
                    0
                } else {
                    3
                }
            } else {
                4
            }
        }
    }
}

/// Number of arcs in each subspace class.
fn class_sizes(config: &GraphConfig) -> Vec<u64> {
    let m = config.sets() as u64;
    let big_n = config.set_size() as u64;
    let n = config.marked() as u64;
    let w = big_n - n;
    match config.case() {
        MarkedSets::EverySet => {
            let pairs = m * (m - 1);
            vec![pairs * n * n, pairs * n * w, pairs * w * n, pairs * w * w]
        }
        MarkedSets::OneSet => {
            let outside = (m - 1) * big_n;
            vec![
                outside * n,
                n * outside,
                w * outside,
                outside * w,
                outside * (m - 2) * big_n,
            ]
        }
    }
}

/// `B^dagger U(alpha, beta) B` over the orthonormal class vectors.
pub fn reduced_operator(config: GraphConfig, alpha: f64, beta: f64) -> Result<SubspaceOperator> {
    guard(&config, REDUCED_OPERATOR_LIMIT)?;
    let case = config.case();
    let dim = subspace::dimension(case);
    let mut matrix = DMatrix::from_element(dim, dim, ZERO);
    for col in 0..dim {
        let e = EdgeState::embed(config, &SubspaceState::basis(case, col))?;
        let (image, _) = e.walk_step(alpha, beta).project();
        for row in 0..dim {
            matrix[(row, col)] = image.amplitude(row);
        }
    }
    SubspaceOperator::new(case, matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn random_state(config: GraphConfig, seed: u64) -> EdgeState {
        // small LCG keeps the test free of an RNG dependency
        let mut x = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let mut next = || {
            x = x
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((x >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let dim = config.edge_space_dimension() as usize;
        let raw: Vec<Complex64> = (0..dim).map(|_| Complex64::new(next(), next())).collect();
        let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        EdgeState::new(config, raw.into_iter().map(|z| z / norm).collect()).unwrap()
    }

    #[test]
    fn arc_indexing_is_a_bijection() {
        for m in 2..=5 {
            for n in 1..=4 {
                let cfg = GraphConfig::every_set(m, n, 0).unwrap();
                let mut k = 0;
                for u in cfg.vertices() {
                    for v in cfg.vertices().filter(|v| v.set != u.set) {
                        assert_eq!(arc_index(&cfg, u, v).unwrap(), k, "lexicographic order");
                        assert_eq!(arc_at(&cfg, k).unwrap(), (u, v));
                        k += 1;
                    }
                }
                assert_eq!(k as u64, cfg.edge_space_dimension());
            }
        }
        let cfg = GraphConfig::every_set(3, 2, 0).unwrap();
        assert_eq!(
            arc_index(&cfg, VertexId::new(0, 0), VertexId::new(0, 1)),
            Err(Error::NotAdjacent)
        );
        assert!(arc_at(&cfg, 24).is_err());
    }

    #[test]
    fn uniform_examples() {
        let s = uniform_initial(GraphConfig::every_set(2, 1, 0).unwrap()).unwrap();
        assert_eq!(s.amplitudes().len(), 2);
        for a in s.amplitudes() {
            assert_abs_diff_eq!(a.re, FRAC_1_SQRT_2, epsilon = 1e-15);
        }
        let s = uniform_initial(GraphConfig::every_set(3, 2, 0).unwrap()).unwrap();
        assert!(s
            .amplitudes()
            .iter()
            .all(|a| (a.re - 1.0 / 24f64.sqrt()).abs() < 1e-15));
        assert_abs_diff_eq!(s.norm(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn shift_examples() {
        let cfg = GraphConfig::every_set(3, 2, 1).unwrap();
        let u = VertexId::new(2, 1);
        let v = VertexId::new(0, 0);
        let s = EdgeState::basis(cfg, u, v).unwrap().apply_shift();
        assert_eq!(s, EdgeState::basis(cfg, v, u).unwrap());
        let uni = uniform_initial(cfg).unwrap();
        assert_eq!(uni.apply_shift(), uni);
        let r = random_state(cfg, 7);
        assert_eq!(r.apply_shift().apply_shift(), r);
    }

    #[test]
    fn coin_examples() {
        let cfg = GraphConfig::every_set(3, 2, 1).unwrap();
        let u = VertexId::new(1, 0);
        // |u> (x) |s_u> is left alone by the Grover coin
        let degree = cfg.degree() as f64;
        let mut amps = vec![ZERO; 24];
        for v in cfg.vertices().filter(|v| v.set != u.set) {
            amps[arc_index(&cfg, u, v).unwrap()] = Complex64::new(1.0 / degree.sqrt(), 0.0);
        }
        let s = EdgeState::new(cfg, amps).unwrap();
        assert!(s.apply_coin(PI).max_deviation(&s) < 1e-15);

        // a coin vector orthogonal to |s_u> is negated
        let mut amps = vec![ZERO; 24];
        amps[arc_index(&cfg, u, VertexId::new(0, 0)).unwrap()] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        amps[arc_index(&cfg, u, VertexId::new(2, 1)).unwrap()] =
            Complex64::new(-FRAC_1_SQRT_2, 0.0);
        let s = EdgeState::new(cfg, amps).unwrap();
        let neg = EdgeState::new(cfg, s.amplitudes().iter().map(|z| -z).collect()).unwrap();
        assert!(s.apply_coin(PI).max_deviation(&neg) < 1e-15);

        let r = random_state(cfg, 3);
        let minus = EdgeState::new(cfg, r.amplitudes().iter().map(|z| -z).collect()).unwrap();
        assert!(r.apply_coin(0.0).max_deviation(&minus) < 1e-15);
    }

    #[test]
    fn query_examples() {
        let cfg = GraphConfig::one_set(3, 2, 1).unwrap();
        let r = random_state(cfg, 11);
        assert_eq!(r.apply_query(0.0), r);
        let q = r.apply_query(PI);
        for k in 0..24 {
            let (u, _) = arc_at(&cfg, k).unwrap();
            let expected = if cfg.is_marked(u).unwrap() {
                -r.amplitudes()[k]
            } else {
                r.amplitudes()[k]
            };
            assert!((q.amplitudes()[k] - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn involutions() {
        for (k, cfg) in [
            GraphConfig::every_set(4, 3, 1).unwrap(),
            GraphConfig::one_set(4, 3, 2).unwrap(),
        ]
        .into_iter()
        .enumerate()
        {
            let r = random_state(cfg, 100 + k as u64);
            assert!(r.apply_shift().apply_shift().max_deviation(&r) < 1e-12);
            assert!(r.apply_coin(PI).apply_coin(PI).max_deviation(&r) < 1e-12);
            assert!(r.apply_query(PI).apply_query(PI).max_deviation(&r) < 1e-12);
        }
    }

    #[test]
    fn success_examples() {
        let s = uniform_initial(GraphConfig::every_set(3, 4, 1).unwrap()).unwrap();
        assert_abs_diff_eq!(s.success_probability(), 0.4375, epsilon = 1e-14);
        let s = uniform_initial(GraphConfig::every_set(3, 4, 0).unwrap()).unwrap();
        assert_eq!(s.success_probability(), 0.0);
        let s = uniform_initial(GraphConfig::every_set(3, 4, 4).unwrap()).unwrap();
        assert_abs_diff_eq!(s.success_probability(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn projection_of_uniform_state() {
        let cfg = GraphConfig::every_set(3, 4, 1).unwrap();
        let (p, res) = uniform_initial(cfg).unwrap().project();
        assert!(p.max_deviation(&subspace::case1_initial(&cfg).unwrap()) < 1e-14);
        assert!(res < 1e-14);

        let cfg = GraphConfig::one_set(3, 4, 1).unwrap();
        let (p, res) = uniform_initial(cfg).unwrap().project();
        let exact = subspace::case2_initial(&cfg, subspace::InitialMode::Exact).unwrap();
        assert!(p.max_deviation(&exact) < 1e-14);
        assert!(res < 1e-14);
    }

    #[test]
    fn embed_project_round_trip() {
        let cfg = GraphConfig::one_set(4, 3, 1).unwrap();
        let s = subspace::case2_initial(&cfg, subspace::InitialMode::Exact).unwrap();
        let e = EdgeState::embed(cfg, &s).unwrap();
        let (back, res) = e.project();
        assert!(back.max_deviation(&s) < 1e-14 && res < 1e-14);
        assert!(random_state(cfg, 5).project().1 > 0.1);
    }

    #[test]
    fn reduced_operator_matches_tabulated() {
        let cfg = GraphConfig::every_set(3, 4, 1).unwrap();
        let r = reduced_operator(cfg, PI, PI).unwrap();
        assert!(r.max_deviation(&subspace::tabulated::case1_plain(1, 3)) < 1e-12);
        let cfg = GraphConfig::one_set(4, 4, 1).unwrap();
        let r = reduced_operator(cfg, PI, PI).unwrap();
        assert!(r.max_deviation(&subspace::tabulated::case2_plain(4, 4, 1)) < 1e-12);
        let r = reduced_operator(cfg, 1.0, 0.5).unwrap();
        assert!(
            r.max_deviation(&subspace::tabulated::case2_parameterized(4, 4, 1, 1.0, 0.5)) < 1e-12
        );
    }

    #[test]
    fn case1_operator_is_independent_of_m() {
        for m in [3, 7] {
            let cfg = GraphConfig::every_set(m, 4, 1).unwrap();
            let r = reduced_operator(cfg, 0.9, -2.0).unwrap();
            let s = subspace::case1_operator(&cfg, 0.9, -2.0).unwrap();
            assert!(r.max_deviation(s.matrix()) < 1e-10);
        }
    }

    #[test]
    fn guards() {
        let big = GraphConfig::every_set(200, 200, 1).unwrap();
        assert!(matches!(uniform_initial(big), Err(Error::TooLarge { .. })));
        let mid = GraphConfig::every_set(60, 10, 1).unwrap();
        assert!(uniform_initial(mid).is_ok());
        assert!(matches!(
            reduced_operator(mid, PI, PI),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn subspace_closure_and_success_agreement() {
        for m in 2..=5 {
            for n_set in 1..=6 {
                for marked in 0..=n_set {
                    for case in [MarkedSets::EverySet, MarkedSets::OneSet] {
                        let Ok(cfg) = GraphConfig::new(m, n_set, marked, case) else {
                            continue;
                        };
                        let mut full = uniform_initial(cfg).unwrap();
                        for step in 0..100 {
                            let (p, res) = full.project();
                            assert!(res < 1e-10, "{cfg} step {step} residual {res}");
                            assert!((p.success() - full.success_probability()).abs() < 1e-10);
                            full = full.walk_step(1.3, 0.7);
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn walk_step_is_norm_preserving(a in -PI..PI, b in -PI..PI, seed in 0u64..1000) {
            let cfg = GraphConfig::one_set(3, 3, 1).unwrap();
            let r = random_state(cfg, seed);
            prop_assert!((r.walk_step(a, b).norm() - 1.0).abs() < 1e-12);
        }
    }
}
