//! Coherence and entanglement of X states.
//!
//! Every quantity has a closed-form route and a generic one:
//! [`spectrum_closed`] against [`spectrum_general`], and
//! [`negativity_closed`] against [`negativity_full`]. The generic routes
//! are the ones used by [`measure`].

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::state::XDensityMatrix;

/// Eigenvalues in `[-SPECTRUM_CLAMP, 0)` are treated as zero in entropies.
pub const SPECTRUM_CLAMP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureSet {
    pub c_l1: f64,
    /// Relative entropy of coherence in bits.
    pub c_rec: f64,
    pub negativity: f64,
}

/// Four eigenvalues in block order: the `{ρ22, ρ33}` block (smaller,
/// larger), then the `{ρ11, ρ44}` block (smaller, larger).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum4 {
    pub values: [f64; 4],
}

impl Spectrum4 {
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn sorted_descending(&self) -> [f64; 4] {
        let mut v = self.values;
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    pub fn max_abs_diff(&self, other: &Spectrum4) -> f64 {
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `C_l1 = 2|ρ14| + 2|ρ23|`.
pub fn coherence_l1(m: &XDensityMatrix) -> f64 {
    2.0 * m.rho14().norm() + 2.0 * m.rho23().norm()
}

/// Sum of moduli over all twelve off-diagonal positions of the dense matrix.
pub fn coherence_l1_dense(m: &XDensityMatrix) -> f64 {
    let dense = m.to_matrix();
    let mut total = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                total += dense[(i, j)].norm();
            }
        }
    }
    total
}

/// Closed-form eigenvalues
/// `½(ρ22 + ρ33 ∓ √(ρ22² + 4|ρ23|² - 2ρ22ρ33 + ρ33²))` and likewise for the
/// outer block.
pub fn spectrum_closed(m: &XDensityMatrix) -> Spectrum4 {
    let (r11, r22, r33, r44) = (m.rho11(), m.rho22(), m.rho33(), m.rho44());
    let inner = (r22 * r22 + 4.0 * m.rho23().norm_sqr() - 2.0 * r22 * r33 + r33 * r33).sqrt();
    let outer = (r11 * r11 + 4.0 * m.rho14().norm_sqr() - 2.0 * r11 * r44 + r44 * r44).sqrt();
    Spectrum4 {
        values: [
            0.5 * (r22 + r33 - inner),
            0.5 * (r22 + r33 + inner),
            0.5 * (r11 + r44 - outer),
            0.5 * (r11 + r44 + outer),
        ],
    }
}

/// Eigenvalues of the Hermitian block `[[a, b], [b*, d]]`, smaller first.
fn hermitian_block(a: f64, d: f64, b: Complex64) -> [f64; 2] {
    if b.norm_sqr() == 0.0 {
        return [a.min(d), a.max(d)];
    }
    let mean = 0.5 * (a + d);
    let radius = (0.5 * (a - d)).hypot(b.norm());
    // the root with the larger modulus is cancellation-free; the other
    // follows from the determinant
    let det = a * d - b.norm_sqr();
    if mean >= 0.0 {
        let big = mean + radius;
        let small = if big != 0.0 { det / big } else { 0.0 };
        [small, big]
    } else {
        let small = mean - radius;
        let big = if small != 0.0 { det / small } else { 0.0 };
        [small, big]
    }
}

/// Block-wise eigen-solve of the two 2×2 Hermitian blocks.
pub fn spectrum_general(m: &XDensityMatrix) -> Spectrum4 {
    let [l1, l2] = hermitian_block(m.rho22(), m.rho33(), m.rho23());
    let [l3, l4] = hermitian_block(m.rho11(), m.rho44(), m.rho14());
    Spectrum4 {
        values: [l1, l2, l3, l4],
    }
}

/// `-Σ p log₂ p` with `0 log 0 = 0` and near-zero negatives clamped.
pub fn shannon_bits(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .map(|&p| {
            if (-SPECTRUM_CLAMP..0.0).contains(&p) {
                0.0
            } else {
                p
            }
        })
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// Relative entropy of coherence `S(ρ_diag) - S(ρ)` in bits.
pub fn coherence_rec(m: &XDensityMatrix) -> f64 {
    let rec = shannon_bits(&m.diagonal()) - shannon_bits(&spectrum_general(m).values);
    if (-1e-12..0.0).contains(&rec) {
        0.0
    } else {
        rec
    }
}

/// Partial transpose over the first factor:
/// `(ρ^{T_A})_{(ij),(kl)} = ρ_{(kj),(il)}` with index `2·a + b`.
pub fn partial_transpose_a(rho: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    Matrix4::from_fn(|row, col| {
        let (i, j) = (row / 2, row % 2);
        let (k, l) = (col / 2, col % 2);
        rho[(2 * k + j, 2 * i + l)]
    })
}

/// Eigenvalues of the partially transposed state, from a dense Hermitian
/// eigen-solve.
pub fn partial_transpose_spectrum(m: &XDensityMatrix) -> [f64; 4] {
    let pt = partial_transpose_a(&m.to_matrix());
    let eig = SymmetricEigen::new(pt).eigenvalues;
    [eig[0], eig[1], eig[2], eig[3]]
}

/// Negativity `(‖ρ^{T_A}‖₁ - 1)/2`, i.e. the summed moduli of the negative
/// partial-transpose eigenvalues.
pub fn negativity_full(m: &XDensityMatrix) -> f64 {
    partial_transpose_spectrum(m)
        .iter()
        .filter(|&&e| e < 0.0)
        .fold(0.0, |acc, e| acc - e)
}

/// `max[0, √(|ρ14|² + ((ρ33 - ρ22)/2)²) - (ρ22 + ρ33)/2]`.
///
/// Only sees the partial-transpose block built from `ρ22, ρ33, ρ14`; when
/// `|ρ23|² > ρ11 ρ44` the other block goes negative and this misses it.
pub fn negativity_closed(m: &XDensityMatrix) -> f64 {
    let half_gap = 0.5 * (m.rho33() - m.rho22());
    let value = (m.rho14().norm_sqr() + half_gap * half_gap).sqrt() - 0.5 * (m.rho22() + m.rho33());
    value.max(0.0)
}

/// Whether the partial-transpose block ignored by [`negativity_closed`] is
/// positive semidefinite, which is when the two negativities coincide.
pub fn closed_negativity_applies(m: &XDensityMatrix) -> bool {
    m.rho23().norm_sqr() <= m.rho11() * m.rho44()
}

pub fn measure(m: &XDensityMatrix) -> MeasureSet {
    MeasureSet {
        c_l1: coherence_l1(m),
        c_rec: coherence_rec(m),
        negativity: negativity_full(m),
    }
}
