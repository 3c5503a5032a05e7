//! Straight-line re-implementations of the achievable-rate formulas, written
//! with plain scalars so they share no code with the library. Used by the
//! oracle tests and the acceptance suite.

#![allow(dead_code)]

use coopic::{ChannelGains, PowerBudget, RcAllocation, Simplex2, Simplex3, TcAllocation};
use rand::Rng;

pub fn c(x: f64) -> f64 {
    (1.0 + x).log2()
}

fn div(share: f64, total: f64, dur: f64) -> f64 {
    if dur > 0.0 {
        share * total / dur
    } else {
        0.0
    }
}

/// vᵀ M w for a symmetric 2x2 matrix `[m00, m01, m11]`.
fn bil(v: [f64; 2], m: [f64; 3], w: [f64; 2]) -> f64 {
    v[0] * (m[0] * w[0] + m[1] * w[1]) + v[1] * (m[1] * w[0] + m[2] * w[1])
}

fn det(m: [f64; 3]) -> f64 {
    m[0] * m[2] - m[1] * m[1]
}

/// (I + q v vᵀ)⁻¹ scaled by `s`.
fn scaled_inverse(v: [f64; 2], q: f64, s: f64) -> [f64; 3] {
    let b = [1.0 + q * v[0] * v[0], q * v[0] * v[1], 1.0 + q * v[1] * v[1]];
    let d = det(b);
    [s * b[2] / d, -s * b[1] / d, s * b[0] / d]
}

/// `(R1, R2)` of transmitter cooperation; `rdpc` switches phase 3 to the
/// diagonal covariances.
pub fn tc_oracle(g: &ChannelGains, p: &PowerBudget, a: &TcAllocation, rdpc: bool) -> (f64, f64) {
    let (c12, c13, c14, c23, c24) = (g.c12(), g.c13(), g.c14(), g.c23(), g.c24());
    let (l1, l2, l3) = (a.lambda[0], a.lambda[1], a.lambda[2]);
    let p11 = div(a.kappa[0], p.p1(), l1);
    let p22 = div(a.gamma[0], p.p2(), l2);
    let p13 = div(a.kappa[1], p.p1(), l3);
    let p23 = div(a.gamma[1], p.p2(), l3);

    // phase 1
    let (own, oth) = (a.alpha[0] * p11, a.alpha[1] * p11);
    let ex1 = l1 * c(c12 * c12 * own);
    let (r1_1, r2_1) = if c13 > c14 {
        (
            l1 * c(c13 * c13 * own),
            l1 * c(c14 * c14 * oth / (1.0 + c14 * c14 * own)),
        )
    } else {
        (
            l1 * c(c13 * c13 * own / (1.0 + c13 * c13 * oth)),
            l1 * c(c14 * c14 * oth),
        )
    };
    // phase 2
    let (own, oth) = (a.beta[0] * p22, a.beta[1] * p22);
    let ex2 = l2 * c(c12 * c12 * own);
    let (r1_2, r2_2) = if c24 > c23 {
        (
            l2 * c(c23 * c23 * oth / (1.0 + c23 * c23 * own)),
            l2 * c(c24 * c24 * own),
        )
    } else {
        (
            l2 * c(c23 * c23 * oth),
            l2 * c(c24 * c24 * own / (1.0 + c24 * c24 * oth)),
        )
    };

    // phase 3
    let w = a.mu[0] * p13;
    let v = a.eta[0] * p23;
    let q3 = a.mu[1] * p13 + a.eta[2] * p23;
    let q4 = a.mu[2] * p13 + a.eta[1] * p23;
    let g1 = [c13, c23];
    let g2 = [c14, c24];
    let (r1_3, r1_d, r2_3, r2_d);
    if c13 + c23 > c14 + c24 {
        let (s1, s2) = if rdpc {
            (
                [a.mu[1] * p13, 0.0, a.eta[2] * p23],
                [a.mu[2] * p13, 0.0, a.eta[1] * p23],
            )
        } else {
            let s1 = scaled_inverse(g2, q4, q3);
            let amp = 1.0 + bil(g2, s1, g2);
            (s1, [amp * q4, 0.0, amp * q4])
        };
        let leak = bil(g2, s1, g2);
        r1_3 = l3 * c(bil(g1, s1, g1) / (1.0 + c13 * c13 * w));
        r1_d = l3 * c(c13 * c13 * w);
        r2_3 = l3 * c(bil(g2, s2, g2) / (1.0 + leak + c14 * c14 * w + c24 * c24 * v));
        r2_d = l3 * c(c24 * c24 * v / (1.0 + leak + c14 * c14 * w));
    } else {
        let (s1, s2) = if rdpc {
            (
                [a.mu[2] * p13, 0.0, a.eta[1] * p23],
                [a.mu[1] * p13, 0.0, a.eta[2] * p23],
            )
        } else {
            let s1 = scaled_inverse(g1, q3, q4);
            let amp = 1.0 + bil(g1, s1, g1);
            (s1, [amp * q3, 0.0, amp * q3])
        };
        let leak = bil(g1, s1, g1);
        r1_3 = l3 * c(bil(g1, s2, g1) / (1.0 + leak + c13 * c13 * w + c23 * c23 * v));
        r1_d = l3 * c(c13 * c13 * w / (1.0 + leak + c23 * c23 * v));
        r2_3 = l3 * c(bil(g2, s1, g2) / (1.0 + c24 * c24 * v));
        r2_d = l3 * c(c24 * c24 * v);
    }
    (
        r1_d + ex1.min(r1_1 + r1_2 + r1_3),
        r2_d + ex2.min(r2_1 + r2_2 + r2_3),
    )
}

/// log2 |I + M| for symmetric `[m00, m01, m11]`.
fn ld(m: [f64; 3]) -> f64 {
    det([1.0 + m[0], m[1], 1.0 + m[2]]).log2()
}

fn outer(v: [f64; 2], s: f64) -> [f64; 3] {
    [s * v[0] * v[0], s * v[0] * v[1], s * v[1] * v[1]]
}

fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// `(R1, R2)` of receiver cooperation; `weight` picks the strong-case corner.
pub fn rc_oracle(g: &ChannelGains, p: &PowerBudget, a: &RcAllocation, weight: f64) -> (f64, f64) {
    let (c13, c14, c23, c24, c34) = (g.c13(), g.c14(), g.c23(), g.c24(), g.c34());
    let (l1, l2, l3) = (a.lambda[0], a.lambda[1], a.lambda[2]);
    let p1 = [
        div(a.mu[0], p.p1(), l1),
        div(a.mu[1], p.p1(), l2),
        div(a.mu[2], p.p1(), l3),
    ];
    let p2 = [
        div(a.eta[0], p.p2(), l1),
        div(a.eta[1], p.p2(), l2),
        div(a.eta[2], p.p2(), l3),
    ];
    let (p4s, p4r) = (div(a.alpha[0], p.p4(), l2), div(a.alpha[1], p.p4(), l2));
    let (p3s, p3r) = (div(a.beta[0], p.p3(), l3), div(a.beta[1], p.p3(), l3));

    // phase 2: node 3 hears node 1, node 2 and node 4
    let n3 = 1.0 + c13 * c13 * p1[1] + c23 * c23 * p2[1];
    let r1_2r2 = l2 * c(c34 * c34 * p4r / (n3 + c34 * c34 * p4s));
    let r1_s = l2 * c(c34 * c34 * p4s / n3);
    let r2_2r1 = l2 * c(c23 * c23 * p2[1] / (1.0 + c13 * c13 * p1[1]));
    let r1_d = l2 * c(c13 * c13 * p1[1]);
    // phase 3: node 4 hears node 1, node 2 and node 3
    let n4 = 1.0 + c14 * c14 * p1[2] + c24 * c24 * p2[2];
    let r2_2r2 = l3 * c(c34 * c34 * p3r / (n4 + c34 * c34 * p3s));
    let r2_s = l3 * c(c34 * c34 * p3s / n4);
    let r1_2r1 = l3 * c(c14 * c14 * p1[2] / (1.0 + c24 * c24 * p2[2]));
    let r2_d = l3 * c(c24 * c24 * p2[2]);

    let (mut x, mut y) = (0.0, 0.0);
    if l1 > 0.0 {
        let (a1, a2) = (p1[0], p2[0]);
        let y3 = 1.0 + c13 * c13 * a1 + c23 * c23 * a2;
        let y4 = 1.0 + c14 * c14 * a1 + c24 * c24 * a2;
        let cr = c13 * c14 * a1 + c23 * c24 * a2;
        let cond = y3 * y4 - cr * cr;
        let zeta = |rate: f64, side: f64| {
            let e = (rate / l1).exp2() - 1.0;
            if e > 0.0 {
                1.0 / (1.0 + cond / (e * side))
            } else {
                0.0
            }
        };
        let z1 = zeta(r2_s, y4).sqrt();
        let z2 = zeta(r1_s, y3).sqrt();
        let v13 = [c13, z2 * c14];
        let v23 = [c23, z2 * c24];
        let v14 = [z1 * c13, c14];
        let v24 = [z1 * c23, c24];
        let snr1 = outer(v13, a1);
        let inr1 = outer(v23, a2);
        let snr2 = outer(v24, a2);
        let inr2 = outer(v14, a1);
        let nn = |v: [f64; 2]| v[0] * v[0] + v[1] * v[1];
        let strong4 = nn(v14) >= nn(v13);
        let strong3 = nn(v23) >= nn(v24);
        let tin = |s: [f64; 3], i: [f64; 3]| (ld(add(s, i)) - ld(i)).max(0.0);
        let (u, w) = match (strong4, strong3) {
            (true, true) => {
                let s = ld(add(snr1, inr1)).min(ld(add(snr2, inr2)));
                if weight <= 1.0 {
                    let u = ld(snr1).min(s);
                    (u, ld(snr2).min(s - u))
                } else {
                    let w = ld(snr2).min(s);
                    (ld(snr1).min(s - w), w)
                }
            }
            (true, false) => (tin(snr1, inr1), ld(snr2)),
            (false, true) => (ld(snr1), tin(snr2, inr2)),
            (false, false) => (tin(snr1, inr1), tin(snr2, inr2)),
        };
        x = l1 * u;
        y = l1 * w;
    }
    (r1_d + x + r1_2r1.min(r1_2r2), r2_d + y + r2_2r1.min(r2_2r2))
}

fn simplex2(rng: &mut impl Rng) -> Simplex2 {
    let a: f64 = rng.gen_range(0.01..1.0);
    let b: f64 = rng.gen_range(0.01..1.0);
    Simplex2::new([a / (a + b), b / (a + b)]).unwrap()
}

fn simplex3(rng: &mut impl Rng) -> Simplex3 {
    let w: [f64; 3] = [
        rng.gen_range(0.01..1.0),
        rng.gen_range(0.01..1.0),
        rng.gen_range(0.01..1.0),
    ];
    let s: f64 = w.iter().sum();
    Simplex3::new(w.map(|x| x / s)).unwrap()
}

pub fn random_tc(rng: &mut impl Rng) -> TcAllocation {
    TcAllocation {
        lambda: simplex3(rng),
        alpha: simplex2(rng),
        beta: simplex2(rng),
        kappa: simplex2(rng),
        gamma: simplex2(rng),
        mu: simplex3(rng),
        eta: simplex3(rng),
    }
}

pub fn random_rc(rng: &mut impl Rng) -> RcAllocation {
    RcAllocation {
        lambda: simplex3(rng),
        mu: simplex3(rng),
        eta: simplex3(rng),
        alpha: simplex2(rng),
        beta: simplex2(rng),
    }
}

pub fn random_gains(rng: &mut impl Rng) -> ChannelGains {
    let mut x = || rng.gen_range(0.1..10.0);
    ChannelGains::new(x(), x(), x(), x(), x(), x()).unwrap()
}

pub fn random_powers(rng: &mut impl Rng) -> PowerBudget {
    let mut x = || rng.gen_range(0.1..20.0);
    PowerBudget::new(x(), x(), x(), x()).unwrap()
}
