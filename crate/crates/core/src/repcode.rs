//! Repetition-code decoding of star graph states and the resulting
//! Bell-diagonal coherent information.
//!
//! A star graph with Alice's single qubit as the hub is, after
//! Hadamards on Bob's qubits, a repetition-code encoding of one half
//! of a Bell pair; initialization flips on Bob's qubits become bit
//! flips on the code, which a majority-vote decoder corrects.
//!
//! The noise symbol `p` here is the probability that a qubit *stays*
//! in `|+>` (the role `P` plays elsewhere); kept separate from
//! [`NoiseModel`] in the API to make the convention explicit.

use nalgebra::DMatrix;

use crate::closedform::binomial;
use crate::entropy::binary_entropy;
use crate::graphstate::BipartiteGraphState;
use crate::oracle::{modified_graph_state_vector, DenseHermitian};
use crate::{Error, Result};

/// Two-qubit Bell-diagonal mixture of the correct component and its
/// logically flipped partner.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellDiagonalState {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

/// Decoder output for the all-qubits-noisy variant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AllNoiseResult {
    /// Coherent information of the post-decoding two-qubit state.
    pub ci: f64,
    /// Overlap of the post-decoding state with the correct Bell state.
    pub lambda_plus: f64,
}

fn require_odd(n: usize) -> Result<()> {
    if n == 0 || n % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "repetition-code decoder needs odd n >= 1, got {n}"
        )));
    }
    Ok(())
}

/// Bell-diagonal state after majority-vote decoding when only Bob's
/// `n` qubits are noisy:
/// `lambda_plus = sum_{k=0}^{floor(n/2)} C(n,k) p^(n-k) (1-p)^k`.
pub fn rep_code_state_bob_noise(n: usize, p: f64) -> Result<BellDiagonalState> {
    require_odd(n)?;
    let mut lambda_plus = 0.0;
    for k in 0..=n / 2 {
        lambda_plus += binomial(n, k) * p.powi((n - k) as i32) * (1.0 - p).powi(k as i32);
    }
    Ok(BellDiagonalState {
        lambda_plus,
        lambda_minus: 1.0 - lambda_plus,
    })
}

/// Coherent information of a two-component Bell-diagonal state:
/// `1 - H2(lambda_plus)`.
pub fn ci_bell(state: &BellDiagonalState) -> f64 {
    1.0 - binary_entropy(state.lambda_plus)
}

/// All-qubits-noisy variant: simulates the decoder circuit (Hadamards
/// on Bob's qubits, majority-vote syndrome correction, CNOT decode,
/// removal of the redundant qubits) on the mixture over all `n + 1`
/// initial configurations, and returns the coherent information of the
/// resulting two-qubit state.
pub fn rep_code_all_noise(n: usize, p: f64) -> Result<AllNoiseResult> {
    require_odd(n)?;
    if n > 9 {
        return Err(Error::CapExceeded {
            what: "repetition-code qubits",
            value: n,
            cap: 9,
        });
    }
    // Qubit 0 is Alice's hub, 1..=n are Bob's.
    let g = BipartiteGraphState::star(1, n).expect("valid star");
    let mut rho = DMatrix::<f64>::zeros(4, 4);
    for config in 0..(1u64 << (n + 1)) {
        let flips = config.count_ones() as usize;
        let prob = p.powi((n + 1 - flips) as i32) * (1.0 - p).powi(flips as i32);
        if prob == 0.0 {
            continue;
        }
        let mut psi = modified_graph_state_vector(&g, config)?;
        for q in 1..=n {
            apply_h(&mut psi, q);
        }
        // Each mixture component is an eigenstate of the Z_1 Z_j
        // syndrome operators, so the parities are sharp.
        let mut pattern = 0u64;
        for j in 2..=n {
            if zz_parity(&psi, 1, j) < 0.0 {
                pattern |= 1 << j;
            }
        }
        let weight = pattern.count_ones() as usize;
        let bob_mask = ((1u64 << (n + 1)) - 1) & !1;
        let correction = if weight <= n / 2 {
            pattern
        } else {
            // The complementary error candidate, which flips qubit 1 too.
            !pattern & bob_mask
        };
        for q in 1..=n {
            if (correction >> q) & 1 == 1 {
                apply_x(&mut psi, q);
            }
        }
        for j in 2..=n {
            apply_cnot(&mut psi, 1, j);
        }
        accumulate_pair_density(&mut rho, &psi, prob);
    }
    Ok(finish_two_qubit(&rho))
}

/// Gate-by-gate n = 3 decoder with two explicit syndrome ancillas, as
/// a cross-check against the majority-vote implementation.
pub fn rep_code_all_noise_gate_level_n3(p: f64) -> Result<AllNoiseResult> {
    let n = 3usize;
    let g = BipartiteGraphState::star(1, n).expect("valid star");
    // Qubits: 0 Alice, 1-3 Bob, 4-5 ancillas (start in |0>).
    let mut rho = DMatrix::<f64>::zeros(4, 4);
    for config in 0..(1u64 << (n + 1)) {
        let flips = config.count_ones() as usize;
        let prob = p.powi((n + 1 - flips) as i32) * (1.0 - p).powi(flips as i32);
        if prob == 0.0 {
            continue;
        }
        let psi4 = modified_graph_state_vector(&g, config)?;
        let mut psi = vec![0.0f64; 1 << 6];
        psi[..1 << 4].copy_from_slice(&psi4);
        for q in 1..=3 {
            apply_h(&mut psi, q);
        }
        apply_cnot(&mut psi, 1, 4);
        apply_cnot(&mut psi, 2, 4);
        apply_cnot(&mut psi, 2, 5);
        apply_cnot(&mut psi, 3, 5);
        apply_cnot(&mut psi, 4, 5);
        // Ancilla 4 holds b1^b2, ancilla 5 holds b1^b3 after the
        // ancilla-ancilla CNOT.
        for (branch_prob, branch) in measure_z(&psi, 4) {
            for (prob2, mut state) in measure_z(&branch, 5) {
                let m4 = state_bit_is_one(&state, 4);
                let m5 = state_bit_is_one(&state, 5);
                match (m4, m5) {
                    (true, true) => apply_x(&mut state, 1),
                    (true, false) => apply_x(&mut state, 2),
                    (false, true) => apply_x(&mut state, 3),
                    (false, false) => {}
                }
                apply_cnot(&mut state, 1, 2);
                apply_cnot(&mut state, 1, 3);
                accumulate_pair_density(&mut rho, &state, prob * branch_prob * prob2);
            }
        }
    }
    Ok(finish_two_qubit(&rho))
}

/// Sums `prob * |phi><phi|` of the state reduced to qubits 0 and 1
/// into `rho` (partial trace over all other qubits).
fn accumulate_pair_density(rho: &mut DMatrix<f64>, psi: &[f64], prob: f64) {
    let dim = psi.len();
    for rest in (0..dim).step_by(4) {
        for a in 0..4 {
            for b in 0..4 {
                rho[(a, b)] += prob * psi[rest | a] * psi[rest | b];
            }
        }
    }
}

fn finish_two_qubit(rho: &DMatrix<f64>) -> AllNoiseResult {
    // lambda_plus = <Phi+|rho|Phi+> with |Phi+> = (|00> + |11>)/sqrt(2).
    let lambda_plus = 0.5 * (rho[(0, 0)] + rho[(0, 3)] + rho[(3, 0)] + rho[(3, 3)]);
    let rho_b = DMatrix::<f64>::from_fn(2, 2, |b, bp| rho[(2 * b, 2 * bp)] + rho[(2 * b + 1, 2 * bp + 1)]);
    let h_b = DenseHermitian { dim: 2, m: rho_b }.entropy_bits();
    let h_ab = DenseHermitian {
        dim: 4,
        m: rho.clone(),
    }
    .entropy_bits();
    AllNoiseResult {
        ci: h_b - h_ab,
        lambda_plus,
    }
}

fn apply_h(psi: &mut [f64], q: usize) {
    let bit = 1usize << q;
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..psi.len() {
        if i & bit == 0 {
            let (a, b) = (psi[i], psi[i | bit]);
            psi[i] = (a + b) * inv_sqrt2;
            psi[i | bit] = (a - b) * inv_sqrt2;
        }
    }
}

fn apply_x(psi: &mut [f64], q: usize) {
    let bit = 1usize << q;
    for i in 0..psi.len() {
        if i & bit == 0 {
            psi.swap(i, i | bit);
        }
    }
}

fn apply_cnot(psi: &mut [f64], control: usize, target: usize) {
    let (c, t) = (1usize << control, 1usize << target);
    for i in 0..psi.len() {
        if i & c != 0 && i & t == 0 {
            psi.swap(i, i | t);
        }
    }
}

/// Expectation value of Z_q1 Z_q2.
fn zz_parity(psi: &[f64], q1: usize, q2: usize) -> f64 {
    let (b1, b2) = (1usize << q1, 1usize << q2);
    psi.iter()
        .enumerate()
        .map(|(i, &a)| {
            let par = ((i & b1 != 0) as i32) ^ ((i & b2 != 0) as i32);
            if par == 0 {
                a * a
            } else {
                -a * a
            }
        })
        .sum()
}

/// Projective Z measurement on qubit `q`: the non-negligible
/// `(probability, collapsed normalized state)` branches.
fn measure_z(psi: &[f64], q: usize) -> Vec<(f64, Vec<f64>)> {
    let bit = 1usize << q;
    let mut out = Vec::new();
    for outcome in [0usize, 1] {
        let keep = |i: usize| ((i & bit != 0) as usize) == outcome;
        let prob: f64 = psi
            .iter()
            .enumerate()
            .filter(|(i, _)| keep(*i))
            .map(|(_, a)| a * a)
            .sum();
        if prob > 1e-12 {
            let norm = prob.sqrt().recip();
            let state: Vec<f64> = psi
                .iter()
                .enumerate()
                .map(|(i, &a)| if keep(i) { a * norm } else { 0.0 })
                .collect();
            out.push((prob, state));
        }
    }
    out
}

fn state_bit_is_one(psi: &[f64], q: usize) -> bool {
    let bit = 1usize << q;
    psi.iter()
        .enumerate()
        .filter(|(i, _)| i & bit != 0)
        .map(|(_, a)| a * a)
        .sum::<f64>()
        > 0.5
}
