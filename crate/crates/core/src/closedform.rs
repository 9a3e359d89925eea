//! Analytic fast paths: `f1` for rank-1 subsystems, rank-2 type-1
//! sums, `f2` for rank-2 type-2 subsystems, and the `q_N` based
//! formulas for `K = 1` and `K = 2`.

use crate::entropy::{binary_entropy, GeneratorMatrix, WeightVector};
use crate::{Error, Result};

/// Binomial coefficient as f64. Exact integer arithmetic up to n = 60,
/// multiplicative floating-point product beyond.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    if n <= 60 {
        let mut c: u128 = 1;
        for i in 1..=k {
            c = c * (n - k + i) as u128 / i as u128;
        }
        c as f64
    } else {
        let mut c = 1.0f64;
        for i in 1..=k {
            c = c * (n - k + i) as f64 / i as f64;
        }
        c
    }
}

#[inline]
fn xlog2(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Entropy of a rank-1 (fully connected) subsystem with `n_side`
/// connected qubits:
/// `1 - sum_i C(n_side-1, i) Pbar_i log2 Pbar_i` with
/// `Pbar_i = P^(n-i) (1-P)^i + P^i (1-P)^(n-i)`.
pub fn f1(n_side: usize, p: f64) -> f64 {
    assert!(n_side >= 1);
    let q = 1.0 - p;
    if p == 0.0 || p == 1.0 {
        return 1.0;
    }
    if n_side <= 60 {
        let mut sum = 0.0;
        for i in 0..n_side {
            let pbar = p.powi((n_side - i) as i32) * q.powi(i as i32)
                + p.powi(i as i32) * q.powi((n_side - i) as i32);
            sum += binomial(n_side - 1, i) * xlog2(pbar);
        }
        return 1.0 - sum;
    }
    // log-space evaluation: binomial coefficients and P^n underflow or
    // overflow past a few hundred qubits, but C * Pbar * log2(Pbar)
    // stays representable.
    let (lp, lq) = (p.ln(), q.ln());
    let n = n_side as f64;
    let mut ln_c = 0.0; // ln C(n_side - 1, i)
    let mut sum = 0.0;
    for i in 0..n_side {
        let fi = i as f64;
        let l1 = (n - fi) * lp + fi * lq;
        let l2 = fi * lp + (n - fi) * lq;
        let lw = l1.max(l2) + (-(l1 - l2).abs()).exp().ln_1p();
        sum += (ln_c + lw).exp() * (lw / std::f64::consts::LN_2);
        ln_c += ((n - 1.0 - fi) / (fi + 1.0)).ln();
    }
    1.0 - sum
}

/// Coherent information of a rank-1 graph:
/// `f1(n_side, P) - (n_A + n_B) H2(P)`.
pub fn rank1_ci(n_a: usize, n_b: usize, p: f64, side: crate::graphstate::Side) -> f64 {
    assert!(n_a >= 1 && n_b >= 1);
    let n_side = match side {
        crate::graphstate::Side::A => n_a,
        crate::graphstate::Side::B => n_b,
    };
    f1(n_side, p) - (n_a + n_b) as f64 * binary_entropy(p)
}

/// Rank-2 type-1 subsystem entropy: two independent rank-1 pieces.
pub fn rank2_type1_entropy(n1: usize, n2: usize, p: f64) -> f64 {
    assert!(n1 >= 1 && n2 >= 1);
    f1(n1, p) + f1(n2, p)
}

pub fn rank2_type1_ci(n1: usize, n2: usize, n_b: usize, p: f64) -> f64 {
    rank2_type1_entropy(n1, n2, p) - (n1 + n2 + n_b) as f64 * binary_entropy(p)
}

/// Entropy of a rank-2 type-2 subsystem with row-class sizes
/// `n1, n2, n3` (three classes whose representatives XOR to zero).
pub fn f2(n1: usize, n2: usize, n3: usize, p: f64) -> f64 {
    assert!(n1 >= 1 && n2 >= 1 && n3 >= 1);
    let n_a = n1 + n2 + n3;
    let q = 1.0 - p;
    let pw = |pp: f64, e: usize| pp.powi(e as i32);
    // Four-term weight for one sign pattern; `plus` picks the sign of
    // the shared three-qubit bracket, sw swaps P and 1-P for paths
    // where the reference qubits start flipped.
    let weight = |plus: bool, a: usize, b: usize, c: usize| -> f64 {
        let (x, y) = if plus { (p, q) } else { (q, p) };
        pw(x, 3 + a + b + c) * pw(y, n_a - 3 - a - b - c)
            + pw(x, a + (n2 - b) + (n3 - c) - 1) * pw(y, 1 + (n1 - a) + b + c)
            + pw(x, (n1 - a) + b + (n3 - c) - 1) * pw(y, 1 + a + (n2 - b) + c)
            + pw(x, (n1 - a) + (n2 - b) + c - 1) * pw(y, 1 + a + b + (n3 - c))
    };
    let mut sum = 0.0;
    for a in 0..n1 {
        let ca = binomial(n1 - 1, a);
        for b in 0..n2 {
            let cb = binomial(n2 - 1, b);
            for c in 0..n3 {
                let deg = ca * cb * binomial(n3 - 1, c);
                sum += deg * (xlog2(weight(true, a, b, c)) + xlog2(weight(false, a, b, c)));
            }
        }
    }
    2.0 - sum
}

pub fn rank2_type2_ci(n1: usize, n2: usize, n3: usize, n_b: usize, p: f64) -> f64 {
    f2(n1, n2, n3, p) - (n1 + n2 + n3 + n_b) as f64 * binary_entropy(p)
}

/// Probability that a product of `n` independent `+/-1` variables,
/// each `+1` with probability `P`, equals `+1`:
/// `(1 + (2P - 1)^n) / 2`.
pub fn q(n: usize, p: f64) -> f64 {
    0.5 * (1.0 + (2.0 * p - 1.0).powi(n as i32))
}

/// Subsystem entropy for `K = 1` with a single J row of `n_side` ones:
/// `H2(q_{n_side}) + n_side - 1`.
pub fn ka1_entropy(n_side: usize, p: f64) -> f64 {
    assert!(n_side >= 2, "K = 1 requires rank = n_side - 1 >= 1");
    binary_entropy(q(n_side, p)) + (n_side - 1) as f64
}

/// Support pattern of a two-row J matrix: `r` and `s` ones per row,
/// `t` shared columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OverlapTriple {
    pub r: usize,
    pub s: usize,
    pub t: usize,
}

impl OverlapTriple {
    pub fn new(r: usize, s: usize, t: usize) -> Result<Self> {
        if r == 0 || s == 0 {
            return Err(Error::InvalidParameter(
                "overlap triple needs non-empty rows".into(),
            ));
        }
        if t > r.min(s) {
            return Err(Error::InvalidParameter(format!(
                "overlap t = {t} exceeds min(r, s) = {}",
                r.min(s)
            )));
        }
        Ok(OverlapTriple { r, s, t })
    }

    /// Number of involved qubits `nu = r + s - t`.
    pub fn nu(&self) -> usize {
        self.r + self.s - self.t
    }
}

/// Derives `(r, s, t)` from a `K = 2` generator matrix.
pub fn overlap_from_generator(gen: &GeneratorMatrix) -> Result<OverlapTriple> {
    if gen.k != 2 {
        return Err(Error::InvalidParameter(format!(
            "overlap triple requires K = 2, got K = {}",
            gen.k
        )));
    }
    OverlapTriple::new(
        gen.j.row_weight(0),
        gen.j.row_weight(1),
        gen.j.row_overlap(0, 1),
    )
}

/// The four `K = 2` weights in terms of `q_t`, `q_{r-t}`, `q_{s-t}`.
/// Entry order follows the weight-vector convention: index bits are
/// `(m_1, m_2)` with `m_1` most significant.
pub fn ka2_weights(ov: &OverlapTriple, p: f64) -> WeightVector {
    let qt = q(ov.t, p);
    let qr = q(ov.r - ov.t, p);
    let qs = q(ov.s - ov.t, p);
    let (ct, cr, cs) = (1.0 - qt, 1.0 - qr, 1.0 - qs);
    WeightVector {
        w: vec![
            qt * qr * qs + ct * cr * cs,
            qt * qr * cs + ct * cr * qs,
            qt * cr * qs + ct * qr * cs,
            qt * cr * cs + ct * qr * qs,
        ],
        k: 2,
    }
}

/// Subsystem entropy for `K = 2`: `H(w) + n_side - 2`.
pub fn ka2_entropy(ov: &OverlapTriple, n_side: usize, p: f64) -> f64 {
    assert!(n_side >= ov.nu());
    let w = ka2_weights(ov, p);
    (n_side - 2) as f64 - w.w.iter().map(|&x| xlog2(x)).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{
        coherent_information, compute_weights, extract_generator_matrix, Caps, Method,
    };
    use crate::gf2::BitMatrix;
    use crate::graphstate::{BipartiteGraphState, NoiseModel, Side};

    const PS: [f64; 5] = [0.05, 0.25, 0.5, 0.7, 0.95];

    fn engine_entropies(g: &BipartiteGraphState, p: f64) -> (f64, f64) {
        let r = coherent_information(g, &NoiseModel::new(p).unwrap(), Method::General).unwrap();
        (r.h_a, r.h_b)
    }

    #[test]
    fn binomial_satisfies_pascal_across_the_exact_boundary() {
        assert_eq!(binomial(0, 0), 1.0);
        assert_eq!(binomial(5, 7), 0.0);
        assert_eq!(binomial(60, 30), 118264581564861424.0);
        for n in 1..=70usize {
            for k in 1..n {
                let lhs = binomial(n, k);
                let rhs = binomial(n - 1, k - 1) + binomial(n - 1, k);
                assert!((lhs - rhs).abs() <= 1e-12 * rhs, "C({n},{k})");
            }
        }
    }

    #[test]
    fn f1_matches_general_engine_on_stars() {
        for n in 1..=8 {
            let g = BipartiteGraphState::star(n, 1).unwrap();
            for p in PS {
                let (h_a, h_b) = engine_entropies(&g, p);
                assert!((f1(n, p) - h_a).abs() < 1e-12, "n={n} p={p}");
                assert!((f1(1, p) - h_b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn f1_trivial_values() {
        assert_eq!(f1(1, 0.3), 1.0);
        assert!((f1(2, 0.5) - 2.0).abs() < 1e-12);
        assert_eq!(f1(4, 0.0), 1.0);
        assert_eq!(f1(4, 1.0), 1.0);
    }

    #[test]
    fn rank1_ci_is_f1_minus_total_noise() {
        for p in PS {
            let ci = rank1_ci(5, 2, p, Side::A);
            assert!((ci - (f1(5, p) - 7.0 * binary_entropy(p))).abs() < 1e-15);
            let ci_b = rank1_ci(5, 2, p, Side::B);
            assert!((ci_b - (f1(2, p) - 7.0 * binary_entropy(p))).abs() < 1e-15);
        }
    }

    #[test]
    fn rank2_type1_matches_general_engine() {
        for (n1, n2) in [(1, 1), (2, 3), (4, 2)] {
            let g = BipartiteGraphState::block_graph(&[n1, n2], &[1, 1], &[&[1, 0], &[0, 1]])
                .unwrap();
            for p in PS {
                let (h_a, _) = engine_entropies(&g, p);
                assert!((rank2_type1_entropy(n1, n2, p) - h_a).abs() < 1e-12);
                let ci = rank2_type1_ci(n1, n2, 2, p);
                let full =
                    coherent_information(&g, &NoiseModel::new(p).unwrap(), Method::General)
                        .unwrap();
                assert!((ci - full.i_a).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn f2_matches_general_engine() {
        for (n1, n2, n3) in [(1, 1, 1), (2, 1, 3), (2, 2, 2), (3, 1, 1)] {
            let g = BipartiteGraphState::block_graph(
                &[n1, n2, n3],
                &[1, 1],
                &[&[1, 0], &[0, 1], &[1, 1]],
            )
            .unwrap();
            for p in PS {
                let (h_a, _) = engine_entropies(&g, p);
                assert!(
                    (f2(n1, n2, n3, p) - h_a).abs() < 1e-12,
                    "({n1},{n2},{n3}) p={p}"
                );
            }
        }
    }

    #[test]
    fn f2_weights_are_a_probability_distribution() {
        // the degeneracy-weighted bracket probabilities must sum to 1,
        // which pins the exponent bookkeeping in `f2`.
        for (n1, n2, n3) in [(2, 3, 4), (1, 1, 5)] {
            for p in PS {
                let n_a = n1 + n2 + n3;
                let q = 1.0 - p;
                let pw = |pp: f64, e: usize| pp.powi(e as i32);
                let mut total = 0.0;
                for a in 0..n1 {
                    for b in 0..n2 {
                        for c in 0..n3 {
                            let deg =
                                binomial(n1 - 1, a) * binomial(n2 - 1, b) * binomial(n3 - 1, c);
                            for plus in [true, false] {
                                let (x, y) = if plus { (p, q) } else { (q, p) };
                                let w = pw(x, 3 + a + b + c) * pw(y, n_a - 3 - a - b - c)
                                    + pw(x, a + (n2 - b) + (n3 - c) - 1)
                                        * pw(y, 1 + (n1 - a) + b + c)
                                    + pw(x, (n1 - a) + b + (n3 - c) - 1)
                                        * pw(y, 1 + a + (n2 - b) + c)
                                    + pw(x, (n1 - a) + (n2 - b) + c - 1)
                                        * pw(y, 1 + a + b + (n3 - c));
                                total += deg * w;
                            }
                        }
                    }
                }
                assert!((total - 1.0).abs() < 1e-12, "({n1},{n2},{n3}) p={p}");
            }
        }
    }

    #[test]
    fn q_values() {
        assert_eq!(q(1, 0.3), 0.3);
        assert!((q(2, 0.3) - 0.58).abs() < 1e-15);
        assert_eq!(q(5, 0.5), 0.5);
        assert_eq!(q(4, 1.0), 1.0);
        assert_eq!(q(0, 0.2), 1.0);
    }

    #[test]
    fn ka1_matches_general_engine() {
        // n_a qubits, rank n_a - 1, lone generator supported everywhere:
        // rows of G_AB are e_1, ..., e_{n_a-1} and their sum.
        for n_a in 2..=5usize {
            let n_b = n_a - 1;
            let gab = BitMatrix::from_fn(n_a, n_b, |r, c| r == c || r == n_a - 1);
            let mut edges = Vec::new();
            for r in 0..n_a {
                for c in 0..n_b {
                    if gab.get(r, c) {
                        edges.push((r, n_a + c));
                    }
                }
            }
            let g = BipartiteGraphState::new(n_a, n_b, edges).unwrap();
            for p in PS {
                let (h_a, _) = engine_entropies(&g, p);
                assert!((ka1_entropy(n_a, p) - h_a).abs() < 1e-12, "n_a={n_a} p={p}");
            }
        }
    }

    #[test]
    fn overlap_triple_from_six_qubit_example() {
        let g = BipartiteGraphState::new(2, 4, [(0, 2), (0, 4), (1, 2), (1, 3), (1, 5)]).unwrap();
        let gen = extract_generator_matrix(&g.biadjacency(), Side::B);
        let ov = overlap_from_generator(&gen).unwrap();
        assert_eq!(ov, OverlapTriple { r: 3, s: 2, t: 1 });
        assert_eq!(ov.nu(), 4);

        for p in PS {
            let w_exact =
                compute_weights(&gen, &NoiseModel::new(p).unwrap(), &Caps::default()).unwrap();
            let w_fast = ka2_weights(&ov, p);
            for (a, b) in w_exact.w.iter().zip(&w_fast.w) {
                assert!((a - b).abs() < 1e-13);
            }
            let (_, h_b) = engine_entropies(&g, p);
            assert!((ka2_entropy(&ov, 4, p) - h_b).abs() < 1e-12);
        }
    }

    #[test]
    fn ka2_overlapping_pair_example() {
        // J rows 1110 and 0111: r = s = 3, t = 2.
        let j = BitMatrix::from_binary_rows(&["1110", "0111"]);
        let (trimmed, kept_cols) = j.trim_zero_columns();
        let nu = kept_cols.len();
        let gen = GeneratorMatrix {
            j,
            k: 2,
            side: Side::A,
            trimmed,
            kept_cols,
            nu,
        };
        let ov = overlap_from_generator(&gen).unwrap();
        assert_eq!(ov, OverlapTriple { r: 3, s: 3, t: 2 });
        for p in PS {
            let w_exact =
                compute_weights(&gen, &NoiseModel::new(p).unwrap(), &Caps::default()).unwrap();
            let w_fast = ka2_weights(&ov, p);
            for (a, b) in w_exact.w.iter().zip(&w_fast.w) {
                assert!((a - b).abs() < 1e-13);
            }
            // leading weight written out: q2 p^2 + (1 - q2)(1 - p)^2
            let expect = q(2, p) * p * p + (1.0 - q(2, p)) * (1.0 - p) * (1.0 - p);
            assert!((w_fast.w[0] - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn disjoint_ka2_supports_factorize() {
        // t = 0 turns the four weights into a product distribution, so
        // the entropy splits into two binary entropies.
        let ov = OverlapTriple::new(3, 2, 0).unwrap();
        for p in PS {
            let h = ka2_entropy(&ov, 5, p);
            let split = binary_entropy(q(3, p)) + binary_entropy(q(2, p)) + 3.0;
            assert!((h - split).abs() < 1e-12);
        }
    }

    #[test]
    fn overlap_triple_validation() {
        assert!(OverlapTriple::new(0, 2, 0).is_err());
        assert!(OverlapTriple::new(2, 2, 3).is_err());
        let gen = extract_generator_matrix(
            &BitMatrix::from_binary_rows(&["10", "01"]),
            Side::A,
        );
        assert!(overlap_from_generator(&gen).is_err());
    }
}
