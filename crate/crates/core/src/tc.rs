//! Transmitter cooperation: three-phase decode-and-forward with dirty-paper
//! coding at the sources.
//!
//! Phase 1: node 1 broadcasts an exchange stream to node 2 and a stream to
//! node 4. Phase 2: node 2 does the same towards node 1 and node 3. Phase 3:
//! the sources act as a two-antenna broadcast transmitter, sending a joint
//! stream per destination (covariances built from the dual MAC) plus one
//! private stream each.
//!
//! Every rate returned here is already multiplied by its phase duration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frontier::{self, Frontier, TraceOptions};
use crate::model::{
    cap, inv2, phase_power, quad_form, ChannelGains, PowerBudget, RatePair, Simplex2, Simplex3, Sym2,
    TcAllocation,
};

/// Per-stream rates of the transmitter-cooperation scheme.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TcPhaseRates {
    /// Exchange stream node 1 → node 2 (phase 1).
    pub r1_r1: f64,
    /// Exchange stream node 2 → node 1 (phase 2).
    pub r2_r1: f64,
    /// User-1 relayed content heard at node 3 in phase 1.
    pub r1_1: f64,
    /// User-2 stream node 1 → node 4 (phase 1).
    pub r2_1: f64,
    /// User-1 stream node 2 → node 3 (phase 2).
    pub r1_2: f64,
    /// User-2 relayed content heard at node 4 in phase 2.
    pub r2_2: f64,
    /// Joint phase-3 stream to node 3.
    pub r1_3: f64,
    /// Joint phase-3 stream to node 4.
    pub r2_3: f64,
    /// Private phase-3 stream node 1 → node 3.
    pub r1_d: f64,
    /// Private phase-3 stream node 2 → node 4.
    pub r2_d: f64,
}

impl TcPhaseRates {
    fn merge(self, other: TcPhaseRates) -> TcPhaseRates {
        TcPhaseRates {
            r1_r1: self.r1_r1 + other.r1_r1,
            r2_r1: self.r2_r1 + other.r2_r1,
            r1_1: self.r1_1 + other.r1_1,
            r2_1: self.r2_1 + other.r2_1,
            r1_2: self.r1_2 + other.r1_2,
            r2_2: self.r2_2 + other.r2_2,
            r1_3: self.r1_3 + other.r1_3,
            r2_3: self.r2_3 + other.r2_3,
            r1_d: self.r1_d + other.r1_d,
            r2_d: self.r2_d + other.r2_d,
        }
    }

    /// Combines the streams: private rate plus the relayed rate, which is
    /// limited by both the exchange link and the sum of the relay hops.
    pub fn rate_pair(&self) -> RatePair {
        RatePair::new(
            self.r1_d + self.r1_r1.min(self.r1_1 + self.r1_2 + self.r1_3),
            self.r2_d + self.r2_r1.min(self.r2_1 + self.r2_2 + self.r2_3),
        )
    }

    /// Rate pair with the exchange constraints removed (infinite `c12`).
    pub fn rate_pair_unlimited_exchange(&self) -> RatePair {
        RatePair::new(
            self.r1_d + self.r1_1 + self.r1_2 + self.r1_3,
            self.r2_d + self.r2_1 + self.r2_2 + self.r2_3,
        )
    }
}

/// Which phase-3 encoding order applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DpcOrder {
    /// `c13 + c23 > c14 + c24`: node-3 streams are precoded against node-4 streams.
    Primary,
    /// Otherwise (ties included): node-4 streams are precoded against node-3 streams.
    Reversed,
}

impl DpcOrder {
    pub fn for_channel(g: &ChannelGains) -> Self {
        if g.c13() + g.c23() > g.c14() + g.c24() {
            DpcOrder::Primary
        } else {
            DpcOrder::Reversed
        }
    }
}

/// Phase-3 joint-stream covariances.
///
/// For [`DpcOrder::Primary`], `sigma1` carries the node-3 stream and `sigma2`
/// the node-4 stream. For [`DpcOrder::Reversed`] they hold the primed pair:
/// `sigma1` (Σ1′) carries the node-4 stream and `sigma2` (Σ2′) the node-3
/// stream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TcCovariances {
    pub sigma1: Sym2,
    pub sigma2: Sym2,
    pub order: DpcOrder,
}

/// Per-phase transmit powers derived from the energy splits.
#[derive(Debug, Clone, Copy, PartialEq)]
struct TcPowers {
    p1_phase1: f64,
    p2_phase2: f64,
    p1_phase3: f64,
    p2_phase3: f64,
}

impl TcPowers {
    fn new(p: &PowerBudget, a: &TcAllocation) -> Result<Self> {
        let lam = &a.lambda;
        Ok(Self {
            p1_phase1: phase_power(a.kappa[0], p.p1(), lam[0], "kappa1")?,
            p2_phase2: phase_power(a.gamma[0], p.p2(), lam[1], "gamma1")?,
            p1_phase3: phase_power(a.kappa[1], p.p1(), lam[2], "kappa2")?,
            p2_phase3: phase_power(a.gamma[1], p.p2(), lam[2], "gamma2")?,
        })
    }

    /// Dual-MAC powers of the node-3 and node-4 joint streams.
    fn joint_powers(&self, a: &TcAllocation) -> (f64, f64) {
        (
            a.mu[1] * self.p1_phase3 + a.eta[2] * self.p2_phase3,
            a.mu[2] * self.p1_phase3 + a.eta[1] * self.p2_phase3,
        )
    }
}

fn require_finite_c12(g: &ChannelGains) -> Result<()> {
    if g.c12().is_infinite() {
        Err(Error::InfiniteGain("c12"))
    } else {
        Ok(())
    }
}

/// Phase 1 and 2 rates; the phase-3 fields are left at zero.
pub fn tc_phase12_rates(g: &ChannelGains, p: &PowerBudget, a: &TcAllocation) -> Result<TcPhaseRates> {
    require_finite_c12(g)?;
    phase12_rates(g, p, a)
}

fn phase12_rates(g: &ChannelGains, p: &PowerBudget, a: &TcAllocation) -> Result<TcPhaseRates> {
    let pw = TcPowers::new(p, a)?;
    let mut r = TcPhaseRates::default();
    let (c12, c13, c14, c23, c24) = (g.c12(), g.c13(), g.c14(), g.c23(), g.c24());

    let l1 = a.lambda[0];
    if l1 > 0.0 {
        let pp = pw.p1_phase1;
        let (own, other) = (a.alpha[0] * pp, a.alpha[1] * pp);
        if c12.is_finite() {
            r.r1_r1 = l1 * cap(c12 * c12 * own)?;
        }
        if c13 > c14 {
            r.r2_1 = l1 * cap(c14 * c14 * other / (1.0 + c14 * c14 * own))?;
            r.r1_1 = l1 * cap(c13 * c13 * own)?;
        } else {
            r.r2_1 = l1 * cap(c14 * c14 * other)?;
            r.r1_1 = l1 * cap(c13 * c13 * own / (1.0 + c13 * c13 * other))?;
        }
    }

    let l2 = a.lambda[1];
    if l2 > 0.0 {
        let pp = pw.p2_phase2;
        let (own, other) = (a.beta[0] * pp, a.beta[1] * pp);
        if c12.is_finite() {
            r.r2_r1 = l2 * cap(c12 * c12 * own)?;
        }
        if c24 > c23 {
            r.r1_2 = l2 * cap(c23 * c23 * other / (1.0 + c23 * c23 * own))?;
            r.r2_2 = l2 * cap(c24 * c24 * own)?;
        } else {
            r.r1_2 = l2 * cap(c23 * c23 * other)?;
            r.r2_2 = l2 * cap(c24 * c24 * own / (1.0 + c24 * c24 * other))?;
        }
    }
    Ok(r)
}

/// Phase-3 covariances from the dual-MAC transformation, for the order the
/// channel selects.
pub fn tc_phase3_covariances(g: &ChannelGains, p: &PowerBudget, a: &TcAllocation) -> Result<TcCovariances> {
    require_finite_c12(g)?;
    dual_covariances(g, p, a, DpcOrder::for_channel(g))
}

/// Phase-3 covariances for an explicitly chosen encoding order.
pub fn dual_covariances(
    g: &ChannelGains,
    p: &PowerBudget,
    a: &TcAllocation,
    order: DpcOrder,
) -> Result<TcCovariances> {
    if !(a.lambda[2] > 0.0) {
        return Err(Error::DegeneratePhase(3));
    }
    let pw = TcPowers::new(p, a)?;
    let (q_node3, q_node4) = pw.joint_powers(a);
    // B = I + v vᵀ q_b, Σ1 = B⁻¹ q_s, Σ2 = (1 + v Σ1 vᵀ) q_b I
    let (v, q_b, q_s) = match order {
        DpcOrder::Primary => (g.g2(), q_node4, q_node3),
        DpcOrder::Reversed => (g.g1(), q_node3, q_node4),
    };
    let b = Sym2::identity() + Sym2::outer(v) * q_b;
    let sigma1 = inv2(&b)? * q_s;
    let a2 = 1.0 + quad_form(v, &sigma1);
    let sigma2 = Sym2::identity() * (a2 * q_b);
    Ok(TcCovariances {
        sigma1,
        sigma2,
        order,
    })
}

/// Diagonal covariances of the parallel-DPC / RDPC baseline (no coherent
/// combining across the two transmitters).
pub fn rdpc_covariances(g: &ChannelGains, p: &PowerBudget, a: &TcAllocation) -> Result<TcCovariances> {
    if !(a.lambda[2] > 0.0) {
        return Err(Error::DegeneratePhase(3));
    }
    let pw = TcPowers::new(p, a)?;
    let node3 = Sym2::diag(a.mu[1] * pw.p1_phase3, a.eta[2] * pw.p2_phase3);
    let node4 = Sym2::diag(a.mu[2] * pw.p1_phase3, a.eta[1] * pw.p2_phase3);
    let order = DpcOrder::for_channel(g);
    Ok(match order {
        DpcOrder::Primary => TcCovariances {
            sigma1: node3,
            sigma2: node4,
            order,
        },
        DpcOrder::Reversed => TcCovariances {
            sigma1: node4,
            sigma2: node3,
            order,
        },
    })
}

/// Phase-3 rates for the given covariances; phase 1/2 fields are zero.
pub fn tc_phase3_rates(
    g: &ChannelGains,
    p: &PowerBudget,
    a: &TcAllocation,
    cov: &TcCovariances,
) -> Result<TcPhaseRates> {
    let l3 = a.lambda[2];
    if !(l3 > 0.0) {
        return Err(Error::DegeneratePhase(3));
    }
    let pw = TcPowers::new(p, a)?;
    let private1 = a.mu[0] * pw.p1_phase3;
    let private2 = a.eta[0] * pw.p2_phase3;
    let (c13, c14, c23, c24) = (g.c13(), g.c14(), g.c23(), g.c24());
    let (g1, g2) = (g.g1(), g.g2());
    let mut r = TcPhaseRates::default();
    match cov.order {
        DpcOrder::Primary => {
            let (s1, s2) = (&cov.sigma1, &cov.sigma2);
            let leak4 = quad_form(g2, s1);
            r.r1_3 = l3 * cap(quad_form(g1, s1) / (1.0 + c13 * c13 * private1))?;
            r.r1_d = l3 * cap(c13 * c13 * private1)?;
            r.r2_3 =
                l3 * cap(quad_form(g2, s2) / (1.0 + leak4 + c14 * c14 * private1 + c24 * c24 * private2))?;
            r.r2_d = l3 * cap(c24 * c24 * private2 / (1.0 + leak4 + c14 * c14 * private1))?;
        }
        DpcOrder::Reversed => {
            let (s1p, s2p) = (&cov.sigma1, &cov.sigma2);
            let leak3 = quad_form(g1, s1p);
            r.r1_3 =
                l3 * cap(quad_form(g1, s2p) / (1.0 + leak3 + c13 * c13 * private1 + c23 * c23 * private2))?;
            r.r1_d = l3 * cap(c13 * c13 * private1 / (1.0 + leak3 + c23 * c23 * private2))?;
            r.r2_3 = l3 * cap(quad_form(g2, s1p) / (1.0 + c24 * c24 * private2))?;
            r.r2_d = l3 * cap(c24 * c24 * private2)?;
        }
    }
    Ok(r)
}

fn full_rates(
    g: &ChannelGains,
    p: &PowerBudget,
    a: &TcAllocation,
    covariances: impl Fn() -> Result<TcCovariances>,
) -> Result<TcPhaseRates> {
    let r12 = phase12_rates(g, p, a)?;
    if a.lambda[2] > 0.0 {
        let cov = covariances()?;
        Ok(r12.merge(tc_phase3_rates(g, p, a, &cov)?))
    } else {
        // zero-duration phase 3 carries no energy
        TcPowers::new(p, a)?;
        Ok(r12)
    }
}

/// All stream rates of the transmitter-cooperation scheme.
pub fn tc_phase_rates(g: &ChannelGains, p: &PowerBudget, a: &TcAllocation) -> Result<TcPhaseRates> {
    require_finite_c12(g)?;
    full_rates(g, p, a, || dual_covariances(g, p, a, DpcOrder::for_channel(g)))
}

/// Achievable `(R1, R2)` of the transmitter-cooperation scheme.
pub fn tc_rate_pair(g: &ChannelGains, p: &PowerBudget, a: &TcAllocation) -> Result<RatePair> {
    Ok(tc_phase_rates(g, p, a)?.rate_pair())
}

/// All stream rates with the RDPC covariance override.
pub fn rdpc_phase_rates(g: &ChannelGains, p: &PowerBudget, a: &TcAllocation) -> Result<TcPhaseRates> {
    require_finite_c12(g)?;
    full_rates(g, p, a, || rdpc_covariances(g, p, a))
}

/// Achievable `(R1, R2)` of the RDPC / parallel-DPC baseline.
pub fn rdpc_rate_pair(g: &ChannelGains, p: &PowerBudget, a: &TcAllocation) -> Result<RatePair> {
    Ok(rdpc_phase_rates(g, p, a)?.rate_pair())
}

/// Phase-3-only allocation used when `c12 = +inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TcLimitAllocation {
    pub mu: Simplex3,
    pub eta: Simplex3,
    pub order: DpcOrder,
}

impl TcLimitAllocation {
    /// The equivalent full allocation: all time and energy in phase 3.
    pub fn as_allocation(&self) -> TcAllocation {
        TcAllocation {
            lambda: Simplex3::vertex(2),
            alpha: Simplex2::uniform(),
            beta: Simplex2::uniform(),
            kappa: Simplex2::vertex(1),
            gamma: Simplex2::vertex(1),
            mu: self.mu,
            eta: self.eta,
        }
    }
}

/// Rates when the sources share their messages for free: phase 3 occupies
/// the whole block and both encoding orders are available.
pub fn tc_limit_rate_pair(g: &ChannelGains, p: &PowerBudget, a: &TcLimitAllocation) -> Result<RatePair> {
    if g.c12().is_finite() {
        return Err(Error::NotInfinite("c12"));
    }
    let full = a.as_allocation();
    let cov = dual_covariances(g, p, &full, a.order)?;
    Ok(tc_phase3_rates(g, p, &full, &cov)?.rate_pair_unlimited_exchange())
}

/// Traces the `c12 = +inf` region over the phase-3 power splits.
pub fn tc_limit_region(g: &ChannelGains, p: &PowerBudget, opts: &TraceOptions) -> Result<Frontier> {
    if g.c12().is_finite() {
        return Err(Error::NotInfinite("c12"));
    }
    frontier::trace(frontier::Scheme::TcLimit, g, p, opts)
}
