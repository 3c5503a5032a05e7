//! Receiver cooperation: three-phase compress-and-forward at the receivers.
//!
//! Phase 1: both sources transmit, both receivers listen. Phase 2: node 3
//! listens while node 4 forwards a Wyner-Ziv description of its phase-1
//! observation plus a relayed user-1 message. Phase 3 mirrors phase 2 with
//! the roles of the receivers swapped. With the descriptions exchanged,
//! phase 1 becomes a two-receive-antenna interference channel whose second
//! antenna at each receiver is degraded by the compression noise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frontier::{self, Frontier, TraceOptions};
use crate::model::{
    bilinear, cap, logdet2, norm_sq, phase_power, quad_form, ChannelGains, PowerBudget, RatePair,
    RcAllocation, Sym2, Vec2,
};

/// Per-stream rates of the receiver-cooperation scheme.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RcPhaseRates {
    /// Private stream node 1 → node 3 (phase 2).
    pub r1_d: f64,
    /// Private stream node 2 → node 4 (phase 3).
    pub r2_d: f64,
    /// Description of node 4's observation, node 4 → node 3 (phase 2).
    pub r1_s: f64,
    /// Description of node 3's observation, node 3 → node 4 (phase 3).
    pub r2_s: f64,
    /// User-1 relayed message, first hop node 1 → node 4 (phase 3).
    pub r1_2r1: f64,
    /// User-1 relayed message, second hop node 4 → node 3 (phase 2).
    pub r1_2r2: f64,
    /// User-2 relayed message, first hop node 2 → node 3 (phase 2).
    pub r2_2r1: f64,
    /// User-2 relayed message, second hop node 3 → node 4 (phase 3).
    pub r2_2r2: f64,
    /// Phase-1 user-1 rate over the equivalent two-antenna channel.
    pub r1_r1: f64,
    /// Phase-1 user-2 rate over the equivalent two-antenna channel.
    pub r2_r1: f64,
}

impl RcPhaseRates {
    pub fn rate_pair(&self) -> RatePair {
        RatePair::new(
            self.r1_d + self.r1_r1 + self.r1_2r1.min(self.r1_2r2),
            self.r2_d + self.r2_r1 + self.r2_2r1.min(self.r2_2r2),
        )
    }
}

/// Interference regime of the equivalent two-antenna channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InterferenceCase {
    /// Both receivers decode both messages.
    Strong,
    /// Node 4 decodes and removes user 1; node 3 treats user 2 as noise.
    StrongAtNode4,
    /// Node 3 decodes and removes user 2; node 4 treats user 1 as noise.
    StrongAtNode3,
    /// Both receivers treat interference as noise.
    Weak,
}

/// Phase-1 channel after the compressed observations are exchanged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalentMimoIc {
    /// Compression noise of node 3's description (`+inf` when none is sent).
    pub sigma1_sq: f64,
    /// Compression noise of node 4's description.
    pub sigma2_sq: f64,
    pub zeta1: f64,
    pub zeta2: f64,
    pub c13v: Vec2,
    pub c23v: Vec2,
    pub c14v: Vec2,
    pub c24v: Vec2,
    pub snr1: Sym2,
    pub inr1: Sym2,
    pub snr2: Sym2,
    pub inr2: Sym2,
}

impl EquivalentMimoIc {
    /// Builds the equivalent channel from the two compression noises and the
    /// phase-1 powers.
    pub fn from_noise(g: &ChannelGains, sigma1_sq: f64, sigma2_sq: f64, p1: f64, p2: f64) -> Self {
        let zeta = |s: f64| if s.is_infinite() { 0.0 } else { 1.0 / (1.0 + s) };
        let (zeta1, zeta2) = (zeta(sigma1_sq), zeta(sigma2_sq));
        let (z1, z2) = (zeta1.sqrt(), zeta2.sqrt());
        let c13v = [g.c13(), z2 * g.c14()];
        let c23v = [g.c23(), z2 * g.c24()];
        let c14v = [z1 * g.c13(), g.c14()];
        let c24v = [z1 * g.c23(), g.c24()];
        Self {
            sigma1_sq,
            sigma2_sq,
            zeta1,
            zeta2,
            c13v,
            c23v,
            c14v,
            c24v,
            snr1: Sym2::outer(c13v) * p1,
            inr1: Sym2::outer(c23v) * p2,
            snr2: Sym2::outer(c24v) * p2,
            inr2: Sym2::outer(c14v) * p1,
        }
    }

    /// Noise-free exchange: each receiver sees both antennas.
    pub fn perfect(g: &ChannelGains, p1: f64, p2: f64) -> Self {
        Self::from_noise(g, 0.0, 0.0, p1, p2)
    }

    /// Ties count as strong.
    pub fn case(&self) -> InterferenceCase {
        let strong_at_4 = norm_sq(self.c14v) >= norm_sq(self.c13v);
        let strong_at_3 = norm_sq(self.c23v) >= norm_sq(self.c24v);
        match (strong_at_4, strong_at_3) {
            (true, true) => InterferenceCase::Strong,
            (true, false) => InterferenceCase::StrongAtNode4,
            (false, true) => InterferenceCase::StrongAtNode3,
            (false, false) => InterferenceCase::Weak,
        }
    }
}

struct RcPowers {
    p1_1: f64,
    p2_1: f64,
    p1_2: f64,
    p2_2: f64,
    p4_1: f64,
    p4_2: f64,
    p1_3: f64,
    p2_3: f64,
    p3_1: f64,
    p3_2: f64,
}

/// Relays transmit only in their own phase; if it has zero length they stay silent.
fn relay_power(share: f64, total: f64, duration: f64) -> f64 {
    if duration > 0.0 {
        share * total / duration
    } else {
        0.0
    }
}

impl RcPowers {
    fn new(p: &PowerBudget, a: &RcAllocation) -> Result<Self> {
        let [l1, l2, l3] = *a.lambda.weights();
        Ok(Self {
            p1_1: phase_power(a.mu[0], p.p1(), l1, "mu1")?,
            p2_1: phase_power(a.eta[0], p.p2(), l1, "eta1")?,
            p1_2: phase_power(a.mu[1], p.p1(), l2, "mu2")?,
            p2_2: phase_power(a.eta[1], p.p2(), l2, "eta2")?,
            p4_1: relay_power(a.alpha[0], p.p4(), l2),
            p4_2: relay_power(a.alpha[1], p.p4(), l2),
            p1_3: phase_power(a.mu[2], p.p1(), l3, "mu3")?,
            p2_3: phase_power(a.eta[2], p.p2(), l3, "eta3")?,
            p3_1: relay_power(a.beta[0], p.p3(), l3),
            p3_2: relay_power(a.beta[1], p.p3(), l3),
        })
    }
}

fn require_finite_c34(g: &ChannelGains) -> Result<()> {
    if g.c34().is_infinite() {
        Err(Error::InfiniteGain("c34"))
    } else {
        Ok(())
    }
}

/// Phase 2 and 3 rates; `r1_r1` and `r2_r1` are left at zero.
pub fn rc_phase23_rates(g: &ChannelGains, p: &PowerBudget, a: &RcAllocation) -> Result<RcPhaseRates> {
    require_finite_c34(g)?;
    let pw = RcPowers::new(p, a)?;
    let [_, l2, l3] = *a.lambda.weights();
    let (c13, c14, c23, c24, c34) = (g.c13(), g.c14(), g.c23(), g.c24(), g.c34());
    let (k13, k14, k23, k24, k34) = (c13 * c13, c14 * c14, c23 * c23, c24 * c24, c34 * c34);
    let mut r = RcPhaseRates::default();

    if l2 > 0.0 {
        let at3 = 1.0 + k13 * pw.p1_2 + k23 * pw.p2_2;
        r.r1_2r2 = l2 * cap(k34 * pw.p4_2 / (at3 + k34 * pw.p4_1))?;
        r.r1_s = l2 * cap(k34 * pw.p4_1 / at3)?;
        r.r2_2r1 = l2 * cap(k23 * pw.p2_2 / (1.0 + k13 * pw.p1_2))?;
        r.r1_d = l2 * cap(k13 * pw.p1_2)?;
    }
    if l3 > 0.0 {
        let at4 = 1.0 + k14 * pw.p1_3 + k24 * pw.p2_3;
        r.r2_2r2 = l3 * cap(k34 * pw.p3_2 / (at4 + k34 * pw.p3_1))?;
        r.r2_s = l3 * cap(k34 * pw.p3_1 / at4)?;
        r.r1_2r1 = l3 * cap(k14 * pw.p1_3 / (1.0 + k24 * pw.p2_3))?;
        r.r2_d = l3 * cap(k24 * pw.p2_3)?;
    }
    Ok(r)
}

/// Compression noises implied by the description rates, and the resulting
/// equivalent channel.
pub fn rc_compression(
    g: &ChannelGains,
    p: &PowerBudget,
    a: &RcAllocation,
    r1_s: f64,
    r2_s: f64,
) -> Result<EquivalentMimoIc> {
    let l1 = a.lambda[0];
    if !(l1 > 0.0) {
        return Err(Error::DegeneratePhase(1));
    }
    if r1_s < 0.0 || r2_s < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "description rates must be >= 0 (got {r1_s}, {r2_s})"
        )));
    }
    let pw = RcPowers::new(p, a)?;
    let sx = Sym2::diag(pw.p1_1, pw.p2_1);
    let (g1, g2) = (g.g1(), g.g2());
    let y3 = 1.0 + quad_form(g1, &sx);
    let y4 = 1.0 + quad_form(g2, &sx);
    let cross = bilinear(g1, &sx, g2);
    let conditional = y3 * y4 - cross * cross;
    // (2^{r/λ1} - 1); zero rate means no description at all
    let wz = |r: f64| (r / l1).exp2() - 1.0;
    let noise = |excess: f64, side: f64| {
        if excess > 0.0 {
            conditional / (excess * side)
        } else {
            f64::INFINITY
        }
    };
    let sigma1_sq = noise(wz(r2_s), y4);
    let sigma2_sq = noise(wz(r1_s), y3);
    Ok(EquivalentMimoIc::from_noise(
        g, sigma1_sq, sigma2_sq, pw.p1_1, pw.p2_1,
    ))
}

fn log_ratio(num: &Sym2, den: &Sym2) -> Result<f64> {
    Ok((logdet2(num)? - logdet2(den)?).max(0.0))
}

/// Phase-1 rates over the equivalent channel.
///
/// In the strong case the feasible set is a pentagon; `weight` is the
/// coefficient of `R2` in `R1 + weight·R2` and selects the corner that
/// maximizes it (`weight <= 1` favours user 1).
pub fn rc_phase1_rates(eq: &EquivalentMimoIc, lambda1: f64, weight: f64) -> Result<(f64, f64)> {
    if !(lambda1 > 0.0) {
        return Ok((0.0, 0.0));
    }
    let single1 = || logdet2(&eq.snr1);
    let single2 = || logdet2(&eq.snr2);
    let tin1 = || log_ratio(&(eq.snr1 + eq.inr1), &eq.inr1);
    let tin2 = || log_ratio(&(eq.snr2 + eq.inr2), &eq.inr2);
    let (r1, r2) = match eq.case() {
        InterferenceCase::Strong => {
            let a = single1()?;
            let b = single2()?;
            let s = logdet2(&(eq.snr1 + eq.inr1))?.min(logdet2(&(eq.snr2 + eq.inr2))?);
            if weight <= 1.0 {
                let x = a.min(s);
                (x, b.min(s - x))
            } else {
                let y = b.min(s);
                (a.min(s - y), y)
            }
        }
        InterferenceCase::StrongAtNode4 => (tin1()?, single2()?),
        InterferenceCase::StrongAtNode3 => (single1()?, tin2()?),
        InterferenceCase::Weak => (tin1()?, tin2()?),
    };
    Ok((lambda1 * r1, lambda1 * r2))
}

/// Full stream breakdown, including the equivalent channel when phase 1 is used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RcBreakdown {
    pub rates: RcPhaseRates,
    pub equivalent: Option<EquivalentMimoIc>,
    pub case: Option<InterferenceCase>,
}

pub fn rc_breakdown(g: &ChannelGains, p: &PowerBudget, a: &RcAllocation, weight: f64) -> Result<RcBreakdown> {
    let mut rates = rc_phase23_rates(g, p, a)?;
    let l1 = a.lambda[0];
    if l1 > 0.0 {
        let eq = rc_compression(g, p, a, rates.r1_s, rates.r2_s)?;
        let (x, y) = rc_phase1_rates(&eq, l1, weight)?;
        rates.r1_r1 = x;
        rates.r2_r1 = y;
        Ok(RcBreakdown {
            rates,
            equivalent: Some(eq),
            case: Some(eq.case()),
        })
    } else {
        Ok(RcBreakdown {
            rates,
            equivalent: None,
            case: None,
        })
    }
}

/// Achievable `(R1, R2)` of the receiver-cooperation scheme.
pub fn rc_rate_pair(g: &ChannelGains, p: &PowerBudget, a: &RcAllocation, weight: f64) -> Result<RatePair> {
    Ok(rc_breakdown(g, p, a, weight)?.rates.rate_pair())
}

/// Phase-1 corner of the `c34 = +inf` region: the whole block is phase 1 and
/// both receivers see both antennas.
pub fn rc_limit_rate_pair(g: &ChannelGains, p: &PowerBudget, weight: f64) -> Result<RatePair> {
    if g.c34().is_finite() {
        return Err(Error::NotInfinite("c34"));
    }
    let eq = EquivalentMimoIc::perfect(g, p.p1(), p.p2());
    let (r1, r2) = rc_phase1_rates(&eq, 1.0, weight)?;
    Ok(RatePair::new(r1, r2))
}

/// Traces the `c34 = +inf` region (the two-receive-antenna MAC region).
pub fn rc_limit_region(g: &ChannelGains, p: &PowerBudget, opts: &TraceOptions) -> Result<Frontier> {
    if g.c34().is_finite() {
        return Err(Error::NotInfinite("c34"));
    }
    frontier::trace(frontier::Scheme::RcLimit, g, p, opts)
}
