//! The general engine: stabilizer-subgroup extraction, weight
//! enumeration over initial-qubit configurations, and assembly of the
//! coherent information.

use rayon::prelude::*;

use crate::closedform;
use crate::gf2::BitMatrix;
use crate::graphstate::{classify, BipartiteGraphState, NoiseModel, Side, StructureVariant};
use crate::{Error, Result};

/// Enumeration caps for [`compute_weights`]. `max_nu` bounds the
/// number of enumerated qubit configurations (`2^nu` loop iterations),
/// `max_k` the weight-vector length (`2^K` entries).
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub max_nu: usize,
    pub max_k: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_nu: 30,
            max_k: 26,
        }
    }
}

/// Generators of the stabilizer subgroup acting only on one side.
///
/// Row `k` of `j` names the X-support of one generator on that side's
/// qubits; `K = n_side - rank(G_AB)` rows total, linearly independent.
/// `trimmed` drops the zero columns of `j` (the qubits no bracket sign
/// depends on); `kept_cols[c]` is the original column of trimmed
/// column `c`.
#[derive(Clone, Debug)]
pub struct GeneratorMatrix {
    pub j: BitMatrix,
    pub k: usize,
    pub side: Side,
    pub trimmed: BitMatrix,
    pub kept_cols: Vec<usize>,
    pub nu: usize,
}

/// Probabilities of the `2^K` bracket-sign configurations. Entry `l`
/// corresponds to the sign vector whose bits are the binary
/// representation of `l` (row 0 of J is the most significant bit).
#[derive(Clone, Debug)]
pub struct WeightVector {
    pub w: Vec<f64>,
    pub k: usize,
}

/// Which computation path produced a [`CIResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodTag {
    General,
    ClosedForm,
    /// Closed form on one side, general engine on the other.
    Mixed,
    Oracle,
}

impl std::fmt::Display for MethodTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MethodTag::General => "general",
            MethodTag::ClosedForm => "closedform",
            MethodTag::Mixed => "mixed",
            MethodTag::Oracle => "oracle",
        })
    }
}

/// Method selection for [`coherent_information`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Closed form where the classifier finds one, general engine otherwise.
    Auto,
    General,
    /// Closed form only; errors on structures without one.
    ClosedForm,
}

/// Entropies (bits) and coherent informations for one `(graph, P)`.
#[derive(Clone, Debug)]
pub struct CIResult {
    pub h_a: f64,
    pub h_b: f64,
    pub h_ab: f64,
    pub i_a: f64,
    pub i_b: f64,
    pub rank: usize,
    pub k_a: usize,
    pub k_b: usize,
    pub method: MethodTag,
}

/// Binary entropy in bits; endpoints map to 0 exactly.
pub fn binary_entropy(p: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p));
    xlog2(p) + xlog2(1.0 - p)
}

#[inline]
fn xlog2(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.log2()
    } else {
        0.0
    }
}

/// Extracts the stabilizer-subgroup generator matrix `J` for one side.
///
/// Builds the extended matrix (`[I_A | G_AB]` for side A,
/// `[G_AB^T | I_B]` for side B), reduces the cross block to row
/// echelon form with the identity block carried along, and reads the
/// carried rows at the zero-row positions.
pub fn extract_generator_matrix(gab: &BitMatrix, side: Side) -> GeneratorMatrix {
    let n_a = gab.rows();
    let n_b = gab.cols();
    let (ext, active, carried) = match side {
        Side::A => (
            BitMatrix::identity(n_a).hstack(gab),
            n_a..n_a + n_b,
            0..n_a,
        ),
        Side::B => (
            gab.transpose().hstack(&BitMatrix::identity(n_b)),
            0..n_a,
            n_a..n_a + n_b,
        ),
    };
    let elim = ext.row_echelon(active);
    let n_side = match side {
        Side::A => n_a,
        Side::B => n_b,
    };
    let k = n_side - elim.rank;
    let j = elim
        .echelon
        .row_slice(elim.rank..n_side)
        .columns(carried);
    let (trimmed, kept_cols) = j.trim_zero_columns();
    let nu = kept_cols.len();
    GeneratorMatrix {
        j,
        k,
        side,
        trimmed,
        kept_cols,
        nu,
    }
}

/// Enumerates all `2^nu` initial configurations of the relevant qubits
/// and accumulates their probabilities into the `2^K` weight vector.
///
/// For configuration `d`, the flip pattern `a` is the binary
/// representation of `d`, its probability is
/// `P^(nu - |a|) * (1 - P)^|a|`, and the bracket-sign index is
/// `J' a mod 2` read as an integer.
pub fn compute_weights(
    gen: &GeneratorMatrix,
    noise: &NoiseModel,
    caps: &Caps,
) -> Result<WeightVector> {
    if gen.nu > caps.max_nu {
        return Err(Error::CapExceeded {
            what: "nu (non-zero J columns)",
            value: gen.nu,
            cap: caps.max_nu,
        });
    }
    if gen.k > caps.max_k {
        return Err(Error::CapExceeded {
            what: "K (generator count)",
            value: gen.k,
            cap: caps.max_k,
        });
    }
    let p = noise.p();
    let nu = gen.nu;
    let k = gen.k;
    // nu <= 30, so one word holds a whole trimmed row.
    let row_masks: Vec<u64> = (0..k)
        .map(|r| gen.trimmed.row_bits(r).first().copied().unwrap_or(0))
        .collect();
    let mut p_pows = vec![1.0f64; nu + 1];
    let mut q_pows = vec![1.0f64; nu + 1];
    for i in 1..=nu {
        p_pows[i] = p_pows[i - 1] * p;
        q_pows[i] = q_pows[i - 1] * (1.0 - p);
    }
    let total: usize = 1usize << nu;
    let accumulate = |acc: &mut Vec<f64>, d: usize| {
        let d = d as u64;
        let flips = d.count_ones() as usize;
        let prob = p_pows[nu - flips] * q_pows[flips];
        let mut l = 0usize;
        for mask in &row_masks {
            l = (l << 1) | ((mask & d).count_ones() as usize & 1);
        }
        acc[l] += prob;
    };
    let wlen = 1usize << k;
    let w = if nu < 16 {
        let mut w = vec![0.0f64; wlen];
        for d in 0..total {
            accumulate(&mut w, d);
        }
        w
    } else {
        // Per-worker partial vectors merged by addition, so the result
        // does not depend on the partitioning.
        (0..total)
            .into_par_iter()
            .with_min_len(1 << 14)
            .fold(
                || vec![0.0f64; wlen],
                |mut acc, d| {
                    accumulate(&mut acc, d);
                    acc
                },
            )
            .reduce(
                || vec![0.0f64; wlen],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            )
    };
    Ok(WeightVector { w, k })
}

/// Subsystem entropy in bits: `(n_side - K) - sum w_l log2 w_l`.
pub fn subsystem_entropy(w: &WeightVector, n_side: usize) -> f64 {
    debug_assert!(n_side >= w.k);
    (n_side - w.k) as f64 + w.w.iter().map(|&x| xlog2(x)).sum::<f64>()
}

/// Coherent information of a noisy graph state, with default caps.
pub fn coherent_information(
    g: &BipartiteGraphState,
    noise: &NoiseModel,
    method: Method,
) -> Result<CIResult> {
    coherent_information_with_caps(g, noise, method, &Caps::default())
}

pub fn coherent_information_with_caps(
    g: &BipartiteGraphState,
    noise: &NoiseModel,
    method: Method,
    caps: &Caps,
) -> Result<CIResult> {
    let gab = g.biadjacency();
    let rank = gab.rank();
    let h_ab = g.n() as f64 * binary_entropy(noise.p());
    let (h_a, closed_a) = side_entropy(&gab, g, Side::A, noise, method, caps)?;
    let (h_b, closed_b) = side_entropy(&gab, g, Side::B, noise, method, caps)?;
    let method = match (closed_a, closed_b) {
        (true, true) => MethodTag::ClosedForm,
        (false, false) => MethodTag::General,
        _ => MethodTag::Mixed,
    };
    Ok(CIResult {
        h_a,
        h_b,
        h_ab,
        i_a: h_a - h_ab,
        i_b: h_b - h_ab,
        rank,
        k_a: g.n_a() - rank,
        k_b: g.n_b() - rank,
        method,
    })
}

/// Returns the side entropy and whether a closed form produced it.
fn side_entropy(
    gab: &BitMatrix,
    g: &BipartiteGraphState,
    side: Side,
    noise: &NoiseModel,
    method: Method,
    caps: &Caps,
) -> Result<(f64, bool)> {
    let n_side = g.n_side(side);
    if method != Method::General {
        let class = classify(gab, side);
        // Each disconnected qubit contributes an independent (P, 1-P)
        // weight pair, i.e. +H2(P); the general engine produces this
        // automatically, closed forms add it here.
        let disc = class.disconnected as f64 * binary_entropy(noise.p());
        let closed = match class.variant {
            StructureVariant::Rank1 { n_connected } => {
                Some(closedform::f1(n_connected, noise.p()))
            }
            StructureVariant::Rank2Type1 { n1, n2 } => {
                Some(closedform::rank2_type1_entropy(n1, n2, noise.p()))
            }
            StructureVariant::Rank2Type2 { n1, n2, n3 } => {
                Some(closedform::f2(n1, n2, n3, noise.p()))
            }
            StructureVariant::General { .. } => None,
        };
        match closed {
            Some(h) => return Ok((h + disc, true)),
            None if method == Method::ClosedForm => {
                return Err(Error::NotApplicable(format!(
                    "side {side} has no rank-1 or rank-2 structure"
                )));
            }
            None => {}
        }
    }
    let gen = extract_generator_matrix(gab, side);
    let w = compute_weights(&gen, noise, caps)?;
    Ok((subsystem_entropy(&w, n_side), false))
}
