//! Upper-right convex hull of rate pairs.

use std::cmp::Ordering;

use crate::model::RatePair;

fn cross(o: RatePair, a: RatePair, b: RatePair) -> f64 {
    (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1)
}

fn by_r1_desc(a: &RatePair, b: &RatePair) -> Ordering {
    b.r1.total_cmp(&a.r1).then(b.r2.total_cmp(&a.r2))
}

/// Indices of the points on the Pareto boundary of the convex hull of
/// `points` together with the origin and the axis projections.
///
/// The result is ordered by descending `r1` (hence ascending `r2`). Points
/// with non-finite coordinates are ignored and negative coordinates are
/// treated as zero. Among exact duplicates the lowest index wins, so the
/// selected rates do not depend on the input order.
pub fn hull_indices(points: &[RatePair]) -> Vec<usize> {
    let clean = |r: RatePair| RatePair::new(r.r1.max(0.0), r.r2.max(0.0));
    let mut idx: Vec<usize> = (0..points.len())
        .filter(|&i| points[i].r1.is_finite() && points[i].r2.is_finite())
        .collect();
    idx.sort_by(|&i, &j| by_r1_desc(&clean(points[i]), &clean(points[j])).then(i.cmp(&j)));

    // staircase: keep points that strictly improve r2 as r1 decreases
    let mut stair: Vec<usize> = Vec::new();
    for i in idx {
        let r = clean(points[i]);
        match stair.last() {
            Some(&j) if clean(points[j]).r2 >= r.r2 => {}
            _ => stair.push(i),
        }
    }

    // concave chain over the staircase; drops collinear interior points
    let mut chain: Vec<usize> = Vec::with_capacity(stair.len());
    for i in stair {
        let r = clean(points[i]);
        while chain.len() >= 2 {
            let a = clean(points[chain[chain.len() - 2]]);
            let b = clean(points[chain[chain.len() - 1]]);
            // walking towards the r2 axis the boundary turns left; b must
            // lie strictly outside the segment a-r
            if cross(a, b, r) <= 0.0 {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(i);
    }
    chain
}

/// Hull of bare rate pairs. Always contains at least the origin.
pub fn hull(points: &[RatePair]) -> Vec<RatePair> {
    let v: Vec<RatePair> = hull_indices(points)
        .into_iter()
        .map(|i| RatePair::new(points[i].r1.max(0.0), points[i].r2.max(0.0)))
        .collect();
    if v.is_empty() {
        vec![RatePair::default()]
    } else {
        v
    }
}

/// Support function `max cosθ·R1 + sinθ·R2` of the region below `vertices`.
pub fn support(vertices: &[RatePair], theta: f64) -> f64 {
    let (c, s) = (theta.cos(), theta.sin());
    vertices.iter().map(|r| c * r.r1 + s * r.r2).fold(0.0, f64::max)
}

/// Whether `r` lies in the down-closed region under the frontier `vertices`
/// (ordered by descending `r1`) once shifted down by `tol` in each coordinate.
pub fn region_contains(vertices: &[RatePair], r: RatePair, tol: f64) -> bool {
    let x = RatePair::new((r.r1 - tol).max(0.0), (r.r2 - tol).max(0.0));
    if vertices.is_empty() {
        return x.r1 <= 0.0 && x.r2 <= 0.0;
    }
    let first = vertices[0];
    let last = vertices[vertices.len() - 1];
    if x.r1 > first.r1 || x.r2 > last.r2 {
        return false;
    }
    vertices.windows(2).all(|w| {
        let (a, b) = (w[0], w[1]);
        // outward normal of the edge a -> b
        let n = (b.r2 - a.r2, a.r1 - b.r1);
        let scale = n.0.abs().max(n.1.abs()).max(1.0);
        n.0 * x.r1 + n.1 * x.r2 <= n.0 * a.r1 + n.1 * a.r2 + 1e-12 * scale
    })
}

/// Largest `t` such that `(t, t)` lies in the region under `vertices`.
pub fn equal_rate(vertices: &[RatePair]) -> f64 {
    if vertices.is_empty() {
        return 0.0;
    }
    let mut t = vertices[0].r1.min(vertices[vertices.len() - 1].r2);
    for w in vertices.windows(2) {
        let (a, b) = (w[0], w[1]);
        let n = (b.r2 - a.r2, a.r1 - b.r1);
        let denom = n.0 + n.1;
        if denom > 0.0 {
            t = t.min((n.0 * a.r1 + n.1 * a.r2) / denom);
        }
    }
    t.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rp(a: f64, b: f64) -> RatePair {
        RatePair::new(a, b)
    }

    #[test]
    fn time_sharing_segment() {
        let h = hull(&[rp(1.0, 0.0), rp(0.0, 1.0), rp(0.5, 0.5)]);
        assert_eq!(h, vec![rp(1.0, 0.0), rp(0.0, 1.0)]);
        assert!(region_contains(&h, rp(0.5, 0.5), 0.0));
        assert!(!region_contains(&h, rp(0.6, 0.5), 0.0));
    }

    #[test]
    fn collinear_and_duplicates_removed() {
        let pts = [
            rp(3.0, 0.0),
            rp(2.0, 1.0),
            rp(1.0, 2.0),
            rp(0.0, 3.0),
            rp(2.0, 1.0),
            rp(3.0, 0.0),
        ];
        assert_eq!(hull(&pts), vec![rp(3.0, 0.0), rp(0.0, 3.0)]);
    }

    #[test]
    fn dominated_points_dropped() {
        let h = hull(&[
            rp(2.0, 1.0),
            rp(2.0, 0.5),
            rp(1.0, 1.0),
            rp(0.5, 2.0),
            rp(0.0, 0.0),
        ]);
        assert_eq!(h, vec![rp(2.0, 1.0), rp(0.5, 2.0)]);
    }

    #[test]
    fn empty_and_origin() {
        assert_eq!(hull(&[]), vec![rp(0.0, 0.0)]);
        assert_eq!(hull(&[rp(0.0, 0.0), rp(0.0, 0.0)]), vec![rp(0.0, 0.0)]);
        assert!(region_contains(&[rp(0.0, 0.0)], rp(0.0, 0.0), 0.0));
        assert!(!region_contains(&[rp(0.0, 0.0)], rp(1.0, 0.0), 0.0));
    }

    #[test]
    fn equal_rate_on_segment() {
        let h = vec![rp(4.0, 0.0), rp(0.0, 2.0)];
        assert!((equal_rate(&h) - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(equal_rate(&[rp(1.0, 3.0)]), 1.0);
    }

    #[test]
    fn support_of_square() {
        let h = vec![rp(1.0, 1.0)];
        assert!((support(&h, std::f64::consts::FRAC_PI_4) - 2f64.sqrt()).abs() < 1e-15);
    }

    fn points() -> impl Strategy<Value = Vec<(f64, f64)>> {
        proptest::collection::vec((0.0f64..5.0, 0.0f64..5.0), 0..40)
    }

    proptest! {
        #[test]
        fn idempotent(p in points()) {
            let pts: Vec<RatePair> = p.iter().map(|&(a, b)| rp(a, b)).collect();
            let h = hull(&pts);
            prop_assert_eq!(hull(&h), h);
        }

        #[test]
        fn permutation_stable(p in points(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let pts: Vec<RatePair> = p.iter().map(|&(a, b)| rp(a, b)).collect();
            let mut shuffled = pts.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(hull(&shuffled), hull(&pts));
        }

        #[test]
        fn every_input_is_inside(p in points()) {
            let pts: Vec<RatePair> = p.iter().map(|&(a, b)| rp(a, b)).collect();
            let h = hull(&pts);
            for r in &pts {
                prop_assert!(region_contains(&h, *r, 1e-12));
            }
            for w in h.windows(2) {
                prop_assert!(w[0].r1 > w[1].r1 && w[0].r2 < w[1].r2);
            }
        }
    }
}
