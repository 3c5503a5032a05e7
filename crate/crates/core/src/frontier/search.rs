//! Derivative-free simplex search (Nelder–Mead) used to maximize the
//! weighted objectives.

/// Stopping rule for [`maximize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBudget {
    pub iterations: usize,
    /// Stop once the spread of objective values across the simplex drops below this.
    pub tolerance: f64,
}

/// Maximizes `f` starting from `x0` with an initial simplex of edge `step`
/// along each axis. Returns the best point and its value. The returned value
/// is never below `f(x0)`.
pub fn maximize(f: impl Fn(&[f64]) -> f64, x0: &[f64], step: f64, budget: SearchBudget) -> (Vec<f64>, f64) {
    let n = x0.len();
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let mut pts: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    pts.push((x0.to_vec(), eval(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = eval(&x);
        pts.push((x, v));
    }
    if n == 0 {
        return pts.swap_remove(0);
    }
    // descending value, stable so ties keep insertion order
    let sort = |p: &mut Vec<(Vec<f64>, f64)>| p.sort_by(|a, b| b.1.total_cmp(&a.1));
    sort(&mut pts);

    let toward = |from: &[f64], to: &[f64], t: f64| -> Vec<f64> {
        from.iter().zip(to).map(|(a, b)| a + t * (b - a)).collect()
    };

    for _ in 0..budget.iterations {
        let (best, worst) = (pts[0].1, pts[n].1);
        if best.is_finite() && worst.is_finite() && best - worst <= budget.tolerance {
            break;
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &pts[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let reflected = toward(&pts[n].0, &centroid, 2.0);
        let fr = eval(&reflected);
        if fr > pts[0].1 {
            let expanded = toward(&pts[n].0, &centroid, 3.0);
            let fe = eval(&expanded);
            pts[n] = if fe > fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr > pts[n - 1].1 {
            pts[n] = (reflected, fr);
        } else {
            // outside contraction when the reflection beat the worst point,
            // inside contraction otherwise
            let outside = fr > pts[n].1;
            let contracted = if outside {
                toward(&centroid, &reflected, 0.5)
            } else {
                toward(&centroid, &pts[n].0, 0.5)
            };
            let fc = eval(&contracted);
            let accept = if outside { fc >= fr } else { fc > pts[n].1 };
            if accept {
                pts[n] = (contracted, fc);
            } else {
                let anchor = pts[0].0.clone();
                for p in pts.iter_mut().skip(1) {
                    let x = toward(&anchor, &p.0, 0.5);
                    let v = eval(&x);
                    *p = (x, v);
                }
            }
        }
        sort(&mut pts);
    }
    pts.swap_remove(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUDGET: SearchBudget = SearchBudget {
        iterations: 2000,
        tolerance: 1e-14,
    };

    #[test]
    fn concave_quadratic() {
        let f = |x: &[f64]| -(x[0] - 1.0).powi(2) - 2.0 * (x[1] + 0.5).powi(2);
        let (x, v) = maximize(f, &[0.0, 0.0], 0.5, BUDGET);
        assert!((x[0] - 1.0).abs() < 1e-5 && (x[1] + 0.5).abs() < 1e-5);
        assert!(v > -1e-10);
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| -(100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2));
        let (x, _) = maximize(
            f,
            &[-1.2, 1.0],
            0.5,
            SearchBudget {
                iterations: 5000,
                tolerance: 1e-16,
            },
        );
        assert!((x[0] - 1.0).abs() < 1e-4 && (x[1] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn never_worse_than_start() {
        let f = |x: &[f64]| if x[0].abs() < 1e-3 { 1.0 } else { f64::NAN };
        let (_, v) = maximize(f, &[0.0], 1.0, BUDGET);
        assert_eq!(v, 1.0);
    }

    #[test]
    fn zero_dimensional() {
        let (x, v) = maximize(|_| 3.0, &[], 1.0, BUDGET);
        assert!(x.is_empty());
        assert_eq!(v, 3.0);
    }
}
