mod common;

use approx::assert_abs_diff_eq;
use common::{c, random_gains, random_powers, random_rc, random_tc, rc_oracle, tc_oracle};
use coopic::rc::{rc_compression, rc_phase1_rates, rc_rate_pair, EquivalentMimoIc};
use coopic::tc::{rdpc_rate_pair, tc_phase3_covariances, tc_phase_rates, tc_rate_pair, DpcOrder};
use coopic::{ChannelGains, PowerBudget, Simplex2, Simplex3, TcAllocation};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn reference(c12: f64, c34: f64) -> (ChannelGains, PowerBudget) {
    (
        ChannelGains::symmetric_reference(c12, c34).unwrap(),
        PowerBudget::uniform(5.0).unwrap(),
    )
}

#[test]
fn tc_matches_straight_line_on_reference_channel() {
    let (g, p) = reference(10.0, 10.0);
    let a = TcAllocation {
        lambda: Simplex3::new([0.2, 0.3, 0.5]).unwrap(),
        alpha: Simplex2::new([0.6, 0.4]).unwrap(),
        beta: Simplex2::new([0.7, 0.3]).unwrap(),
        kappa: Simplex2::new([0.25, 0.75]).unwrap(),
        gamma: Simplex2::new([0.4, 0.6]).unwrap(),
        mu: Simplex3::new([0.5, 0.3, 0.2]).unwrap(),
        eta: Simplex3::new([0.1, 0.6, 0.3]).unwrap(),
    };
    let r = tc_rate_pair(&g, &p, &a).unwrap();
    let (x, y) = tc_oracle(&g, &p, &a, false);
    assert_abs_diff_eq!(r.r1, x, epsilon = 1e-12);
    assert_abs_diff_eq!(r.r2, y, epsilon = 1e-12);
}

#[test]
fn tc_and_rdpc_match_straight_line_on_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (g, p, a) = (
            random_gains(&mut rng),
            random_powers(&mut rng),
            random_tc(&mut rng),
        );
        for rdpc in [false, true] {
            let r = if rdpc {
                rdpc_rate_pair(&g, &p, &a)
            } else {
                tc_rate_pair(&g, &p, &a)
            }
            .unwrap();
            let (x, y) = tc_oracle(&g, &p, &a, rdpc);
            worst = worst.max((r.r1 - x).abs()).max((r.r2 - y).abs());
        }
    }
    assert!(worst <= 1e-12, "max abs error {worst:e}");
}

#[test]
fn rc_matches_straight_line_on_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let (g, p, a) = (
            random_gains(&mut rng),
            random_powers(&mut rng),
            random_rc(&mut rng),
        );
        let w = if i % 2 == 0 { 0.5 } else { 2.0 };
        let r = rc_rate_pair(&g, &p, &a, w).unwrap();
        let (x, y) = rc_oracle(&g, &p, &a, w);
        worst = worst.max((r.r1 - x).abs()).max((r.r2 - y).abs());
    }
    assert!(worst <= 1e-12, "max abs error {worst:e}");
}

/// Gauss-Jordan inverse of a 2x2 matrix with partial pivoting.
fn gauss_jordan(m: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut aug = [[m[0][0], m[0][1], 1.0, 0.0], [m[1][0], m[1][1], 0.0, 1.0]];
    for col in 0..2 {
        let piv = (col..2)
            .max_by(|&i, &j| aug[i][col].abs().total_cmp(&aug[j][col].abs()))
            .unwrap();
        aug.swap(col, piv);
        let d = aug[col][col];
        for v in aug[col].iter_mut() {
            *v /= d;
        }
        for row in 0..2 {
            if row != col {
                let f = aug[row][col];
                let pivot = aug[col];
                for (x, p) in aug[row].iter_mut().zip(pivot) {
                    *x -= f * p;
                }
            }
        }
    }
    [[aug[0][2], aug[0][3]], [aug[1][2], aug[1][3]]]
}

#[test]
fn covariance_example_against_matrix_oracle() {
    // c13=2, c23=1, c14=c24=1; phase-3 powers 4 each; μ = η = (.5,.25,.25)
    let g = ChannelGains::new(1.0, 2.0, 1.0, 1.0, 1.0, 1.0).unwrap();
    let p = PowerBudget::uniform(4.0).unwrap();
    let a = TcAllocation {
        lambda: Simplex3::vertex(2),
        kappa: Simplex2::vertex(1),
        gamma: Simplex2::vertex(1),
        mu: Simplex3::new([0.5, 0.25, 0.25]).unwrap(),
        eta: Simplex3::new([0.5, 0.25, 0.25]).unwrap(),
        ..TcAllocation::uniform()
    };
    let cov = tc_phase3_covariances(&g, &p, &a).unwrap();
    assert_eq!(cov.order, DpcOrder::Primary);

    // B1 = I + 2·[1,1]ᵀ[1,1], Σ1 = 2·B1⁻¹
    let inv = gauss_jordan([[3.0, 2.0], [2.0, 3.0]]);
    let s1 = [
        [2.0 * inv[0][0], 2.0 * inv[0][1]],
        [2.0 * inv[1][0], 2.0 * inv[1][1]],
    ];
    assert_abs_diff_eq!(s1[0][0], 1.2, epsilon = 1e-15);
    assert_abs_diff_eq!(s1[0][1], -0.8, epsilon = 1e-15);
    let a2 = 1.0 + s1[0][0] + s1[0][1] + s1[1][0] + s1[1][1];
    assert_abs_diff_eq!(a2, 1.8, epsilon = 1e-15);

    assert_abs_diff_eq!(cov.sigma1.a11, s1[0][0], epsilon = 1e-14);
    assert_abs_diff_eq!(cov.sigma1.a12, s1[0][1], epsilon = 1e-14);
    assert_abs_diff_eq!(cov.sigma1.a22, s1[1][1], epsilon = 1e-14);
    assert_abs_diff_eq!(cov.sigma2.a11, 2.0 * a2, epsilon = 1e-14);
    assert_abs_diff_eq!(cov.sigma2.a12, 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(cov.sigma2.a22, 3.6, epsilon = 1e-14);
}

#[test]
fn private_stream_example() {
    // primary branch, c13 = 1, μ1 = 0.2, phase-3 power 10, λ3 = 0.5
    let g = ChannelGains::new(1.0, 1.0, 0.5, 1.0, 0.5, 1.0).unwrap();
    let p = PowerBudget::uniform(5.0).unwrap();
    let a = TcAllocation {
        lambda: Simplex3::new([0.5, 0.0, 0.5]).unwrap(),
        kappa: Simplex2::vertex(1),
        gamma: Simplex2::vertex(1),
        mu: Simplex3::new([0.2, 0.4, 0.4]).unwrap(),
        ..TcAllocation::uniform()
    };
    let r = tc_phase_rates(&g, &p, &a).unwrap();
    assert_abs_diff_eq!(r.r1_d, 0.5 * 3f64.log2(), epsilon = 1e-15);
}

#[test]
fn both_dpc_orders_evaluate_at_the_tie() {
    let (g, p) = reference(10.0, 10.0);
    assert_eq!(DpcOrder::for_channel(&g), DpcOrder::Reversed);
    for order in [DpcOrder::Primary, DpcOrder::Reversed] {
        let cov = coopic::tc::dual_covariances(&g, &p, &TcAllocation::uniform(), order).unwrap();
        assert!(cov.sigma1.is_psd() && cov.sigma2.is_psd());
    }
}

#[test]
fn rank_one_reduction_to_scalar_strong_ic() {
    // no descriptions: each receiver keeps one antenna
    let g = ChannelGains::new(1.0, 1.0, 2.0, 3.0, 1.5, 1.0).unwrap();
    let eq = EquivalentMimoIc::from_noise(&g, f64::INFINITY, f64::INFINITY, 5.0, 4.0);
    let (r1, r2) = rc_phase1_rates(&eq, 1.0, 1.0).unwrap();
    let sum = c(1.0 * 5.0 + 9.0 * 4.0).min(c(4.0 * 5.0 + 2.25 * 4.0));
    assert_abs_diff_eq!(r1 + r2, sum, epsilon = 1e-12);
    assert_abs_diff_eq!(r1, c(5.0), epsilon = 1e-12);
}

#[test]
fn perfect_exchange_matches_two_antenna_mac() {
    let (g, _) = reference(10.0, 10.0);
    let eq = EquivalentMimoIc::perfect(&g, 5.0, 5.0);
    let (r1, r2) = rc_phase1_rates(&eq, 1.0, 1.0).unwrap();
    assert_abs_diff_eq!(r1 + r2, 56f64.log2(), epsilon = 1e-12);
    assert_abs_diff_eq!(r1, 4.0, epsilon = 1e-12);
}

proptest! {
    #[test]
    fn tc_rates_are_finite_and_nonnegative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, p, a) = (random_gains(&mut rng), random_powers(&mut rng), random_tc(&mut rng));
        let r = tc_phase_rates(&g, &p, &a).unwrap();
        for v in [r.r1_r1, r.r2_r1, r.r1_1, r.r2_1, r.r1_2, r.r2_2, r.r1_3, r.r2_3, r.r1_d, r.r2_d] {
            prop_assert!(v.is_finite() && v >= 0.0);
        }
    }

    #[test]
    fn doubling_power_never_hurts_tc(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, p, a) = (random_gains(&mut rng), random_powers(&mut rng), random_tc(&mut rng));
        let lo = tc_rate_pair(&g, &p, &a).unwrap();
        let hi = tc_rate_pair(&g, &p.scaled(2.0).unwrap(), &a).unwrap();
        prop_assert!(hi.r1 >= lo.r1 - 1e-12 && hi.r2 >= lo.r2 - 1e-12);
    }

    #[test]
    fn rc_rates_are_finite_and_nonnegative(seed in any::<u64>(), w in 0.01f64..100.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, p, a) = (random_gains(&mut rng), random_powers(&mut rng), random_rc(&mut rng));
        let r = rc_rate_pair(&g, &p, &a, w).unwrap();
        prop_assert!(r.r1.is_finite() && r.r1 >= 0.0 && r.r2.is_finite() && r.r2 >= 0.0);
    }

    #[test]
    fn zeta_increases_with_description_rate(seed in any::<u64>(), r in 0.01f64..3.0, dr in 0.01f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, p, a) = (random_gains(&mut rng), random_powers(&mut rng), random_rc(&mut rng));
        let lo = rc_compression(&g, &p, &a, r, r).unwrap();
        let hi = rc_compression(&g, &p, &a, r + dr, r + dr).unwrap();
        prop_assert!(hi.sigma1_sq < lo.sigma1_sq && hi.sigma2_sq < lo.sigma2_sq);
        // strict until ζ saturates at 1 in floating point
        let grows = |h: f64, l: f64| h > l || (h == l && l > 1.0 - 1e-12);
        prop_assert!(grows(hi.zeta1, lo.zeta1) && grows(hi.zeta2, lo.zeta2));
        prop_assert!(grows(hi.c14v[0] / g.c13(), lo.c14v[0] / g.c13()));
        prop_assert!(grows(hi.c13v[1] / g.c14(), lo.c13v[1] / g.c14()));
    }
}
