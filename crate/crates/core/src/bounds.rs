//! Outer bounds and the no-cooperation baseline.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{cap, logdet2, ChannelGains, PowerBudget, RatePair, Sym2};

/// Which scheme an outer bound belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundKind {
    Tc,
    Rc,
    /// Capacity region of the strong IC without cooperation.
    StrongIc,
}

/// `{(R1, R2) >= 0 : R1 <= r1_max, R2 <= r2_max, R1 + R2 <= sum_max}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OuterBound {
    pub r1_max: f64,
    pub r2_max: f64,
    pub sum_max: f64,
    pub kind: BoundKind,
}

impl OuterBound {
    /// Largest amount by which `r` exceeds any of the three constraints
    /// (zero or negative when inside).
    pub fn violation(&self, r: RatePair) -> f64 {
        (r.r1 - self.r1_max)
            .max(r.r2 - self.r2_max)
            .max(r.sum() - self.sum_max)
    }

    pub fn contains(&self, r: RatePair, tol: f64) -> bool {
        self.violation(r) <= tol
    }

    /// Upper-right boundary vertices, ordered by descending `r1`.
    pub fn polygon(&self) -> Vec<RatePair> {
        let a = self.r1_max.min(self.sum_max);
        let b = self.r2_max.min(self.sum_max);
        let mut v = vec![RatePair::new(a, 0.0)];
        if self.sum_max < a + b {
            v.push(RatePair::new(a, self.sum_max - a));
            v.push(RatePair::new(self.sum_max - b, b));
        } else {
            v.push(RatePair::new(a, b));
        }
        v.push(RatePair::new(0.0, b));
        v.dedup();
        v
    }
}

/// Which user a single-user bound refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum User {
    One,
    Two,
}

/// A half-duplex relay channel: source, relay and destination with the
/// three link gains and the average powers of source and relay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfDuplexRelay {
    /// Source to destination.
    pub sd: f64,
    /// Source to relay (may be infinite).
    pub sr: f64,
    /// Relay to destination (may be infinite).
    pub rd: f64,
    pub ps: f64,
    pub pr: f64,
}

/// `α·C(x/α)`, extended by its limit 0 at `α = 0`.
fn persp(alpha: f64, x: f64) -> f64 {
    if alpha > 0.0 {
        alpha * (1.0 + x / alpha).log2()
    } else {
        0.0
    }
}

fn golden_max(mut lo: f64, mut hi: f64, iters: usize, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let inv = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv * (hi - lo);
    let mut x2 = lo + inv * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Grid scan over `[lo, hi]` followed by golden-section refinement around the
/// best grid point. Returns the best value seen.
fn grid_golden_max(lo: f64, hi: f64, steps: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (hi - lo) / steps as f64;
    let mut best = (lo, f(lo));
    for k in 1..=steps {
        let x = if k == steps { hi } else { lo + h * k as f64 };
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let a = (best.0 - h).max(lo);
    let b = (best.0 + h).min(hi);
    let (_, v) = golden_max(a, b, 60, &f);
    v.max(best.1)
}

impl HalfDuplexRelay {
    /// Cut-set bound of the half-duplex relay channel.
    ///
    /// The relay listens for a fraction `α1` of the block and transmits for
    /// `α2 = 1 - α1`. The source spends a share `f` of its energy while the
    /// relay listens, and the relay puts all of its energy into its
    /// transmit state. Maximizes the smaller of the broadcast and MAC cuts
    /// over `α1`, `f` and the correlation `ρ`.
    pub fn cutset(&self) -> f64 {
        let (sd2, sr2, rd2) = (self.sd * self.sd, self.sr * self.sr, self.rd * self.rd);
        let (ps, pr) = (self.ps, self.pr);
        if ps <= 0.0 && (pr <= 0.0 || self.rd == 0.0) {
            return 0.0;
        }
        match (self.sr.is_infinite(), self.rd.is_infinite()) {
            (true, true) => return f64::INFINITY,
            (true, false) => {
                let amp = self.sd * ps.sqrt() + self.rd * pr.sqrt();
                return (1.0 + amp * amp).log2();
            }
            (false, true) => {
                if ps <= 0.0 {
                    return 0.0;
                }
                return (1.0 + (sd2 + sr2) * ps).log2();
            }
            (false, false) => {}
        }

        // energies per state, turned into powers inside `persp`
        let cuts = |a1: f64, f: f64, rho: f64| {
            let a2 = 1.0 - a1;
            let (e1, e2) = (f * ps, (1.0 - f) * ps);
            let broadcast = persp(a1, (sr2 + sd2) * e1) + persp(a2, (1.0 - rho) * sd2 * e2);
            let coherent = 2.0 * (rho * sd2 * rd2 * e2 * pr).sqrt();
            let mac = persp(a1, sd2 * e1) + persp(a2, sd2 * e2 + rd2 * pr + coherent);
            (broadcast, mac)
        };
        // broadcast falls and mac rises with rho: bisect for the crossing
        let best_rho = |a1: f64, f: f64| {
            let (b1, m1) = cuts(a1, f, 1.0);
            if b1 >= m1 {
                return m1;
            }
            let (b0, m0) = cuts(a1, f, 0.0);
            if b0 <= m0 {
                return b0;
            }
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..50 {
                let mid = 0.5 * (lo + hi);
                let (b, m) = cuts(a1, f, mid);
                if b > m {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let (b, m) = cuts(a1, f, lo);
            b.min(m)
        };
        let best_f = |a1: f64| grid_golden_max(0.0, 1.0, 40, |f| best_rho(a1, f));
        grid_golden_max(0.0, 1.0, 1000, best_f)
    }
}

fn tc_relay(g: &ChannelGains, p: &PowerBudget, user: User) -> HalfDuplexRelay {
    match user {
        User::One => HalfDuplexRelay {
            sd: g.c13(),
            sr: g.c12(),
            rd: g.c23(),
            ps: p.p1(),
            pr: p.p2(),
        },
        User::Two => HalfDuplexRelay {
            sd: g.c24(),
            sr: g.c12(),
            rd: g.c14(),
            ps: p.p2(),
            pr: p.p1(),
        },
    }
}

fn rc_relay(g: &ChannelGains, p: &PowerBudget, user: User) -> HalfDuplexRelay {
    match user {
        User::One => HalfDuplexRelay {
            sd: g.c13(),
            sr: g.c14(),
            rd: g.c34(),
            ps: p.p1(),
            pr: p.p4(),
        },
        User::Two => HalfDuplexRelay {
            sd: g.c24(),
            sr: g.c23(),
            rd: g.c34(),
            ps: p.p2(),
            pr: p.p3(),
        },
    }
}

/// Single-user cut-set bound with the other source acting as a relay.
pub fn relay_cutset_bound(g: &ChannelGains, p: &PowerBudget, user: User) -> f64 {
    tc_relay(g, p, user).cutset()
}

/// Single-user cut-set bound with the other destination acting as a relay.
pub fn rc_relay_cutset_bound(g: &ChannelGains, p: &PowerBudget, user: User) -> f64 {
    rc_relay(g, p, user).cutset()
}

fn bc_logdet(g: &ChannelGains, q1: f64, q2: f64) -> f64 {
    let m = Sym2::outer(g.g1()) * q1 + Sym2::outer(g.g2()) * q2;
    logdet2(&m).unwrap_or(0.0)
}

/// Sum capacity of the two-antenna broadcast channel formed by the
/// sources, under total power `p_total`.
pub fn mimo_bc_sum_bound(g: &ChannelGains, p_total: f64) -> f64 {
    if !(p_total > 0.0) {
        return 0.0;
    }
    grid_golden_max(0.0, p_total, 1000, |q1| bc_logdet(g, q1, p_total - q1))
}

/// Capacity region of the same broadcast channel: union over power splits of
/// the dual MAC pentagons (both decoding orders), sampled on `steps + 1`
/// splits. Not hulled.
pub fn mimo_bc_region(g: &ChannelGains, p_total: f64, steps: usize) -> Vec<RatePair> {
    let p_total = p_total.max(0.0);
    let (g1, g2) = (g.g1(), g.g2());
    let n1 = g1[0] * g1[0] + g1[1] * g1[1];
    let n2 = g2[0] * g2[0] + g2[1] * g2[1];
    let steps = steps.max(1);
    let mut out = Vec::with_capacity(2 * steps + 2);
    for k in 0..=steps {
        let q1 = p_total * k as f64 / steps as f64;
        let q2 = p_total - q1;
        let sum = bc_logdet(g, q1, q2);
        let r1 = cap(n1 * q1).unwrap_or(0.0);
        let r2 = cap(n2 * q2).unwrap_or(0.0);
        out.push(RatePair::new(r1, (sum - r1).max(0.0)));
        out.push(RatePair::new((sum - r2).max(0.0), r2));
    }
    out
}

/// Sum capacity of the two-receive-antenna MAC formed by the destinations.
pub fn mimo_mac_sum_bound(g: &ChannelGains, p: &PowerBudget) -> f64 {
    let m = Sym2::outer(g.h1()) * p.p1() + Sym2::outer(g.h2()) * p.p2();
    logdet2(&m).unwrap_or(0.0)
}

pub fn tc_outer_region(g: &ChannelGains, p: &PowerBudget) -> OuterBound {
    OuterBound {
        r1_max: relay_cutset_bound(g, p, User::One),
        r2_max: relay_cutset_bound(g, p, User::Two),
        sum_max: mimo_bc_sum_bound(g, p.p1() + p.p2()),
        kind: BoundKind::Tc,
    }
}

pub fn rc_outer_region(g: &ChannelGains, p: &PowerBudget) -> OuterBound {
    OuterBound {
        r1_max: rc_relay_cutset_bound(g, p, User::One),
        r2_max: rc_relay_cutset_bound(g, p, User::Two),
        sum_max: mimo_mac_sum_bound(g, p),
        kind: BoundKind::Rc,
    }
}

/// Capacity region of the interference channel without cooperation when
/// both receivers see strong interference.
pub fn strong_ic_region(g: &ChannelGains, p: &PowerBudget) -> Result<OuterBound> {
    if !(g.c14() >= g.c13() && g.c23() >= g.c24()) {
        return Err(Error::NotStrongInterference);
    }
    let (k13, k14, k23, k24) = (
        g.c13() * g.c13(),
        g.c14() * g.c14(),
        g.c23() * g.c23(),
        g.c24() * g.c24(),
    );
    let (p1, p2) = (p.p1(), p.p2());
    Ok(OuterBound {
        r1_max: cap(k13 * p1)?,
        r2_max: cap(k24 * p2)?,
        sum_max: cap(k13 * p1 + k23 * p2)?.min(cap(k14 * p1 + k24 * p2)?),
        kind: BoundKind::StrongIc,
    })
}
