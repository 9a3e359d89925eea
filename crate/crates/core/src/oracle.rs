//! Independent brute-force verifier. Builds the exact mixed density
//! matrix of the noisy graph state in the computational basis,
//! partial-traces, and computes entropies by eigendecomposition.
//!
//! Deliberately written without reusing the gf2/entropy code paths:
//! agreement with the engine is evidence, not tautology. All
//! amplitudes are real (`+-2^(-n/2)` up to CZ signs), so real
//! symmetric matrices suffice.

use nalgebra::DMatrix;

use crate::entropy::{binary_entropy, CIResult, MethodTag};
use crate::graphstate::{BipartiteGraphState, NoiseModel, Side};
use crate::{Error, Result};

/// Small dense Hermitian (here: real symmetric) matrix.
#[derive(Clone, Debug)]
pub struct DenseHermitian {
    pub dim: usize,
    pub m: DMatrix<f64>,
}

impl DenseHermitian {
    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .m
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    /// Von Neumann entropy in bits; eigenvalues below 1e-12 count as 0.
    pub fn entropy_bits(&self) -> f64 {
        self.eigenvalues()
            .iter()
            .filter(|&&v| v > 1e-12)
            .map(|&v| -v * v.log2())
            .sum()
    }
}

/// Oracle-side result: engine-shaped numbers plus the full-state
/// entropy recomputed from the dense `2^n` density matrix (only for
/// n <= 10, `None` beyond).
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub ci: CIResult,
    pub h_ab_dense: Option<f64>,
}

/// State vector of the modified graph state where `config` bit `i`
/// set means qubit `i` starts in `|->`. Qubit `i` is bit `i` of the
/// basis index. All edges act, including local ones.
pub fn modified_graph_state_vector(g: &BipartiteGraphState, config: u64) -> Result<Vec<f64>> {
    let n = g.n();
    if n > 14 {
        return Err(Error::CapExceeded {
            what: "oracle state-vector qubits",
            value: n,
            cap: 14,
        });
    }
    let dim = 1usize << n;
    let amp = (dim as f64).sqrt().recip();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut psi = vec![0.0f64; dim];
    for (x, slot) in psi.iter_mut().enumerate() {
        let mut sign = (x as u64 & config).count_ones();
        for &(u, v) in &edges {
            sign += ((x >> u) & (x >> v)) as u32 & 1;
        }
        *slot = if sign % 2 == 0 { amp } else { -amp };
    }
    Ok(psi)
}

fn config_probability(p: f64, n: usize, config: u64) -> f64 {
    let flips = config.count_ones() as usize;
    p.powi((n - flips) as i32) * (1.0 - p).powi(flips as i32)
}

/// Exact reduced density matrix of one side of the noisy state:
/// the configuration-probability-weighted sum of partial traces of
/// the pure modified-graph-state projectors.
pub fn noisy_reduced_density(
    g: &BipartiteGraphState,
    noise: &NoiseModel,
    side: Side,
) -> Result<DenseHermitian> {
    let n = g.n();
    if n > 12 {
        return Err(Error::CapExceeded {
            what: "oracle density-matrix qubits",
            value: n,
            cap: 12,
        });
    }
    let n_keep = g.n_side(side);
    let n_out = n - n_keep;
    let d_keep = 1usize << n_keep;
    let d_out = 1usize << n_out;
    // Alice owns the low bits of the basis index.
    let index = |keep: usize, out: usize| match side {
        Side::A => keep | (out << n_keep),
        Side::B => out | (keep << n_out),
    };
    let mut rho = DMatrix::<f64>::zeros(d_keep, d_keep);
    for config in 0..(1u64 << n) {
        let prob = config_probability(noise.p(), n, config);
        if prob == 0.0 {
            continue;
        }
        let psi = modified_graph_state_vector(g, config)?;
        // Rows of `slices` are the kept-subsystem vectors for each
        // traced-out basis state; rho += prob * slices^T slices.
        let slices = DMatrix::<f64>::from_fn(d_out, d_keep, |o, kcol| psi[index(kcol, o)]);
        rho += prob * slices.tr_mul(&slices);
    }
    Ok(DenseHermitian { dim: d_keep, m: rho })
}

/// Dense density matrix of the full noisy state (n <= 10).
pub fn noisy_full_density(g: &BipartiteGraphState, noise: &NoiseModel) -> Result<DenseHermitian> {
    let n = g.n();
    if n > 10 {
        return Err(Error::CapExceeded {
            what: "oracle full-density qubits",
            value: n,
            cap: 10,
        });
    }
    let dim = 1usize << n;
    let mut rho = DMatrix::<f64>::zeros(dim, dim);
    for config in 0..(1u64 << n) {
        let prob = config_probability(noise.p(), n, config);
        if prob == 0.0 {
            continue;
        }
        let psi = DMatrix::<f64>::from_vec(dim, 1, modified_graph_state_vector(g, config)?);
        rho += prob * &psi * psi.transpose();
    }
    Ok(DenseHermitian { dim, m: rho })
}

/// Coherent information by exact eigendecomposition. `H_AB` is
/// computed analytically as `n H2(P)`; for n <= 10 the report also
/// carries the value from the dense full-state matrix.
pub fn oracle_ci(g: &BipartiteGraphState, noise: &NoiseModel) -> Result<OracleReport> {
    let rho_a = noisy_reduced_density(g, noise, Side::A)?;
    let rho_b = noisy_reduced_density(g, noise, Side::B)?;
    let h_a = rho_a.entropy_bits();
    let h_b = rho_b.entropy_bits();
    let h_ab = g.n() as f64 * binary_entropy(noise.p());
    let h_ab_dense = if g.n() <= 10 {
        Some(noisy_full_density(g, noise)?.entropy_bits())
    } else {
        None
    };
    let rank = g.biadjacency().rank();
    Ok(OracleReport {
        ci: CIResult {
            h_a,
            h_b,
            h_ab,
            i_a: h_a - h_ab,
            i_b: h_b - h_ab,
            rank,
            k_a: g.n_a() - rank,
            k_b: g.n_b() - rank,
            method: MethodTag::Oracle,
        },
        h_ab_dense,
    })
}

/// Worst per-side entropy deviation between the general engine and the
/// oracle for one `(graph, P)`. Used by validation harnesses.
pub fn engine_oracle_deviation(g: &BipartiteGraphState, noise: &NoiseModel) -> Result<(f64, f64)> {
    let engine = crate::entropy::coherent_information(g, noise, crate::entropy::Method::General)?;
    let report = oracle_ci(g, noise)?;
    Ok((
        (engine.h_a - report.ci.h_a).abs(),
        (engine.h_b - report.ci.h_b).abs(),
    ))
}
