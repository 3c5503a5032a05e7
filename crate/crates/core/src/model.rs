//! Shared domain types: link gains, power budgets, parameter simplices,
//! allocations, rate pairs and the 2×2 symmetric matrix toolkit.
//!
//! All rates are in bits per channel use (base-2 logarithms). Noise is
//! normalized to unit variance at every node, so powers are SNRs. Phases of
//! the complex link gains are assumed synchronized, which is why every gain
//! here is a nonnegative magnitude.

use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real 2-vector, e.g. `g1 = [c13, c23]`.
pub type Vec2 = [f64; 2];

const PSD_TOL: f64 = 1e-10;
const SNR_TOL: f64 = 1e-12;
const SINGULAR_TOL: f64 = 1e-14;
const SIMPLEX_ACCEPT_TOL: f64 = 1e-9;

/// `log2(1 + x)`. `+inf` maps to `+inf`.
pub fn cap(x: f64) -> Result<f64> {
    if x.is_nan() || x < -SNR_TOL {
        return Err(Error::NegativeSnr(x));
    }
    Ok(x.max(0.0).ln_1p() / std::f64::consts::LN_2)
}

/// `vᵀ m v`, with round-off below zero (within 1e-10) clamped to zero.
pub fn quad_form(v: Vec2, m: &Sym2) -> f64 {
    let q = m.a11 * v[0] * v[0] + 2.0 * m.a12 * v[0] * v[1] + m.a22 * v[1] * v[1];
    if q < 0.0 && q > -PSD_TOL {
        0.0
    } else {
        q
    }
}

/// `vᵀ m w` for symmetric `m`.
pub fn bilinear(v: Vec2, m: &Sym2, w: Vec2) -> f64 {
    m.a11 * v[0] * w[0] + m.a12 * (v[0] * w[1] + v[1] * w[0]) + m.a22 * v[1] * w[1]
}

/// `log2 det(I + m)`.
pub fn logdet2(m: &Sym2) -> Result<f64> {
    let d = (1.0 + m.a11) * (1.0 + m.a22) - m.a12 * m.a12;
    if !(d > 0.0) || !(1.0 + m.a11 > 0.0) {
        return Err(Error::NonPositiveDefinite { det: d });
    }
    Ok(d.log2())
}

/// Inverse of a symmetric 2×2 matrix by adjugate over determinant.
pub fn inv2(m: &Sym2) -> Result<Sym2> {
    let d = m.det();
    if !(d.abs() >= SINGULAR_TOL) {
        return Err(Error::Singular { det: d });
    }
    Ok(Sym2::new(m.a22 / d, -m.a12 / d, m.a11 / d))
}

fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Squared Euclidean norm.
pub fn norm_sq(v: Vec2) -> f64 {
    dot(v, v)
}

/// Symmetric 2×2 real matrix `[[a11, a12], [a12, a22]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Sym2 {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
}

impl Sym2 {
    pub const fn new(a11: f64, a12: f64, a22: f64) -> Self {
        Self { a11, a12, a22 }
    }

    pub const fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub const fn identity() -> Self {
        Self::new(1.0, 0.0, 1.0)
    }

    pub const fn diag(d1: f64, d2: f64) -> Self {
        Self::new(d1, 0.0, d2)
    }

    /// Outer product `v vᵀ`.
    pub fn outer(v: Vec2) -> Self {
        Self::new(v[0] * v[0], v[0] * v[1], v[1] * v[1])
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a12
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * self.trace();
        let half_diff = 0.5 * (self.a11 - self.a22);
        let r = half_diff.hypot(self.a12);
        (mean - r, mean + r)
    }

    pub fn is_psd(&self) -> bool {
        self.eigenvalues().0 >= -PSD_TOL
    }

    /// Full (not necessarily symmetric) product `self · rhs`, row-major.
    pub fn matmul(&self, rhs: &Sym2) -> [[f64; 2]; 2] {
        [
            [
                self.a11 * rhs.a11 + self.a12 * rhs.a12,
                self.a11 * rhs.a12 + self.a12 * rhs.a22,
            ],
            [
                self.a12 * rhs.a11 + self.a22 * rhs.a12,
                self.a12 * rhs.a12 + self.a22 * rhs.a22,
            ],
        ]
    }
}

impl Add for Sym2 {
    type Output = Sym2;

    fn add(self, rhs: Sym2) -> Sym2 {
        Sym2::new(self.a11 + rhs.a11, self.a12 + rhs.a12, self.a22 + rhs.a22)
    }
}

impl Mul<f64> for Sym2 {
    type Output = Sym2;

    fn mul(self, s: f64) -> Sym2 {
        Sym2::new(self.a11 * s, self.a12 * s, self.a22 * s)
    }
}

/// Link magnitudes `c_ik` between node `i` and node `k > i`.
///
/// Nodes 1 and 2 are the sources, 3 and 4 their respective destinations.
/// Only the cooperation links `c12` and `c34` may be `+inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelGains {
    c12: f64,
    c13: f64,
    c14: f64,
    c23: f64,
    c24: f64,
    c34: f64,
}

fn check_gain(name: &str, v: f64, allow_inf: bool) -> Result<()> {
    if v.is_nan() || v < 0.0 {
        return Err(Error::InvalidParameter(format!("{name} = {v} must be >= 0")));
    }
    if v.is_infinite() && !allow_inf {
        return Err(Error::InvalidParameter(format!("{name} must be finite")));
    }
    Ok(())
}

impl ChannelGains {
    pub fn new(c12: f64, c13: f64, c14: f64, c23: f64, c24: f64, c34: f64) -> Result<Self> {
        check_gain("c12", c12, true)?;
        check_gain("c13", c13, false)?;
        check_gain("c14", c14, false)?;
        check_gain("c23", c23, false)?;
        check_gain("c24", c24, false)?;
        check_gain("c34", c34, true)?;
        Ok(Self {
            c12,
            c13,
            c14,
            c23,
            c24,
            c34,
        })
    }

    /// The symmetric reference channel: unit direct links, `√2` cross links.
    pub fn symmetric_reference(c12: f64, c34: f64) -> Result<Self> {
        let s = std::f64::consts::SQRT_2;
        Self::new(c12, 1.0, s, s, 1.0, c34)
    }

    pub fn c12(&self) -> f64 {
        self.c12
    }
    pub fn c13(&self) -> f64 {
        self.c13
    }
    pub fn c14(&self) -> f64 {
        self.c14
    }
    pub fn c23(&self) -> f64 {
        self.c23
    }
    pub fn c24(&self) -> f64 {
        self.c24
    }
    pub fn c34(&self) -> f64 {
        self.c34
    }

    /// Gains from both sources into node 3.
    pub fn g1(&self) -> Vec2 {
        [self.c13, self.c23]
    }
    /// Gains from both sources into node 4.
    pub fn g2(&self) -> Vec2 {
        [self.c14, self.c24]
    }
    /// Gains from node 1 into both destinations.
    pub fn h1(&self) -> Vec2 {
        [self.c13, self.c14]
    }
    /// Gains from node 2 into both destinations.
    pub fn h2(&self) -> Vec2 {
        [self.c23, self.c24]
    }

    pub fn with_c12(&self, c12: f64) -> Result<Self> {
        Self::new(c12, self.c13, self.c14, self.c23, self.c24, self.c34)
    }

    pub fn with_c34(&self, c34: f64) -> Result<Self> {
        Self::new(self.c12, self.c13, self.c14, self.c23, self.c24, c34)
    }
}

/// Average power constraints at nodes 1..4 (noise-normalized).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerBudget {
    p1: f64,
    p2: f64,
    p3: f64,
    p4: f64,
}

impl PowerBudget {
    pub fn new(p1: f64, p2: f64, p3: f64, p4: f64) -> Result<Self> {
        for (name, v) in [("p1", p1), ("p2", p2), ("p3", p3), ("p4", p4)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} must be finite and >= 0"
                )));
            }
        }
        Ok(Self { p1, p2, p3, p4 })
    }

    pub fn uniform(p: f64) -> Result<Self> {
        Self::new(p, p, p, p)
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }
    pub fn p2(&self) -> f64 {
        self.p2
    }
    pub fn p3(&self) -> f64 {
        self.p3
    }
    pub fn p4(&self) -> f64 {
        self.p4
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.p1 * s, self.p2 * s, self.p3 * s, self.p4 * s)
    }
}

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Simplex<const N: usize> {
    w: [f64; N],
}

pub type Simplex2 = Simplex<2>;
pub type Simplex3 = Simplex<3>;

impl<const N: usize> Simplex<N> {
    /// Validates and renormalizes. Sums within `1 ± 1e-9` are accepted.
    pub fn new(w: [f64; N]) -> Result<Self> {
        for (index, &value) in w.iter().enumerate() {
            if value.is_nan() || value < 0.0 {
                return Err(Error::NegativeWeight { index, value });
            }
        }
        let sum: f64 = w.iter().sum();
        if !((sum - 1.0).abs() <= SIMPLEX_ACCEPT_TOL) {
            return Err(Error::SimplexSum { sum });
        }
        Ok(Self {
            w: w.map(|x| x / sum),
        })
    }

    /// Maps an unconstrained vector onto the simplex by normalized squares.
    /// The all-zero vector maps to the barycenter.
    pub fn from_squares(x: &[f64]) -> Self {
        debug_assert_eq!(x.len(), N);
        let mut w = [0.0; N];
        for (wi, xi) in w.iter_mut().zip(x) {
            *wi = xi * xi;
        }
        let sum: f64 = w.iter().sum();
        if !(sum > 0.0) || !sum.is_finite() {
            return Self {
                w: [1.0 / N as f64; N],
            };
        }
        Self {
            w: w.map(|v| v / sum),
        }
    }

    /// Square roots of the weights: a preimage under [`Simplex::from_squares`].
    pub fn to_squares(&self) -> [f64; N] {
        self.w.map(f64::sqrt)
    }

    pub fn vertex(i: usize) -> Self {
        let mut w = [0.0; N];
        w[i] = 1.0;
        Self { w }
    }

    pub fn uniform() -> Self {
        Self {
            w: [1.0 / N as f64; N],
        }
    }

    pub fn weights(&self) -> &[f64; N] {
        &self.w
    }
}

impl<const N: usize> std::ops::Index<usize> for Simplex<N> {
    type Output = f64;

    /// Zero-based.
    fn index(&self, i: usize) -> &f64 {
        &self.w[i]
    }
}

impl<const N: usize> TryFrom<Vec<f64>> for Simplex<N> {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        let arr: [f64; N] = v.try_into().map_err(|v: Vec<f64>| {
            Error::InvalidParameter(format!("expected {N} simplex weights, got {}", v.len()))
        })?;
        Self::new(arr)
    }
}

impl<const N: usize> From<Simplex<N>> for Vec<f64> {
    fn from(s: Simplex<N>) -> Vec<f64> {
        s.w.to_vec()
    }
}

/// Parameters of the transmitter-cooperation scheme.
///
/// Indices are zero-based: `lambda[0]` is the duration of phase 1, `kappa[0]`
/// the share of node 1's energy spent in phase 1, and so on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TcAllocation {
    /// Phase durations.
    pub lambda: Simplex3,
    /// Node 1, phase 1: share for the exchange stream vs. the stream to node 4.
    pub alpha: Simplex2,
    /// Node 2, phase 2: share for the exchange stream vs. the stream to node 3.
    pub beta: Simplex2,
    /// Node 1 energy split between phase 1 and phase 3.
    pub kappa: Simplex2,
    /// Node 2 energy split between phase 2 and phase 3.
    pub gamma: Simplex2,
    /// Node 1 phase-3 split: private data, joint stream to node 3, joint stream to node 4.
    pub mu: Simplex3,
    /// Node 2 phase-3 split: private data, joint stream to node 4, joint stream to node 3.
    pub eta: Simplex3,
}

impl TcAllocation {
    pub fn uniform() -> Self {
        Self {
            lambda: Simplex3::uniform(),
            alpha: Simplex2::uniform(),
            beta: Simplex2::uniform(),
            kappa: Simplex2::uniform(),
            gamma: Simplex2::uniform(),
            mu: Simplex3::uniform(),
            eta: Simplex3::uniform(),
        }
    }
}

/// Parameters of the receiver-cooperation scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RcAllocation {
    /// Phase durations.
    pub lambda: Simplex3,
    /// Node 1 energy split across phases 1..3.
    pub mu: Simplex3,
    /// Node 2 energy split across phases 1..3.
    pub eta: Simplex3,
    /// Node 4, phase 2: compressed observation vs. relayed message.
    pub alpha: Simplex2,
    /// Node 3, phase 3: compressed observation vs. relayed message.
    pub beta: Simplex2,
}

impl RcAllocation {
    pub fn uniform() -> Self {
        Self {
            lambda: Simplex3::uniform(),
            mu: Simplex3::uniform(),
            eta: Simplex3::uniform(),
            alpha: Simplex2::uniform(),
            beta: Simplex2::uniform(),
        }
    }
}

/// An achievable or bounding `(R1, R2)` pair in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub const fn new(r1: f64, r2: f64) -> Self {
        Self { r1, r2 }
    }

    pub fn sum(&self) -> f64 {
        self.r1 + self.r2
    }

    /// Weighted objective `a·R1 + b·R2`.
    pub fn weighted(&self, a: f64, b: f64) -> f64 {
        a * self.r1 + b * self.r2
    }
}

/// Energy assigned to a phase, converted to the power used during it.
/// A zero-duration phase must carry zero energy.
pub(crate) fn phase_power(share: f64, total: f64, duration: f64, what: &str) -> Result<f64> {
    if duration > 0.0 {
        Ok(share * total / duration)
    } else if share > 0.0 && total > 0.0 {
        Err(Error::InvalidAllocation(format!(
            "{what}: energy share {share} on a zero-duration phase"
        )))
    } else {
        Ok(0.0)
    }
}
