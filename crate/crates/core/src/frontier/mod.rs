//! Pareto frontiers of achievable rate pairs: weighted-sum scalarization,
//! multi-start simplex search over the allocation simplices, and the
//! time-sharing hull of everything found.

mod hull;
mod search;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::strong_ic_region;
use crate::error::{Error, Result};
use crate::model::{ChannelGains, PowerBudget, RatePair, RcAllocation, Simplex2, Simplex3, TcAllocation};
use crate::rc::{rc_limit_rate_pair, rc_rate_pair};
use crate::tc::{rdpc_rate_pair, tc_limit_rate_pair, tc_rate_pair, DpcOrder, TcLimitAllocation};

pub use hull::{equal_rate, hull, hull_indices, region_contains, support};
pub use search::{maximize, SearchBudget};

/// What produced a frontier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "TC")]
    Tc,
    #[serde(rename = "RC")]
    Rc,
    #[serde(rename = "RDPC")]
    Rdpc,
    /// Transmitter cooperation with an unlimited exchange link.
    #[serde(rename = "TC_inf")]
    TcLimit,
    /// Receiver cooperation with an unlimited conference link.
    #[serde(rename = "RC_inf")]
    RcLimit,
    /// Strong-interference capacity region without cooperation.
    #[serde(rename = "IC")]
    Ic,
    /// Points of an outer bound.
    #[serde(rename = "bound")]
    Bound,
}

impl Scheme {
    pub fn tag(&self) -> &'static str {
        match self {
            Scheme::Tc => "TC",
            Scheme::Rc => "RC",
            Scheme::Rdpc => "RDPC",
            Scheme::TcLimit => "TC_inf",
            Scheme::RcLimit => "RC_inf",
            Scheme::Ic => "IC",
            Scheme::Bound => "bound",
        }
    }

    /// The scheme actually traced for a channel: TC and RC switch to their
    /// limit modes when the cooperation gain is infinite.
    pub fn resolve(self, g: &ChannelGains) -> Scheme {
        match self {
            Scheme::Tc if g.c12().is_infinite() => Scheme::TcLimit,
            Scheme::Rc if g.c34().is_infinite() => Scheme::RcLimit,
            s => s,
        }
    }

    /// Number of unconstrained search coordinates.
    fn dims(&self) -> usize {
        match self {
            Scheme::Tc | Scheme::Rdpc => 17,
            Scheme::Rc => 13,
            Scheme::TcLimit => 6,
            Scheme::RcLimit | Scheme::Ic | Scheme::Bound => 0,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "TC" => Ok(Scheme::Tc),
            "RC" => Ok(Scheme::Rc),
            "RDPC" => Ok(Scheme::Rdpc),
            "TC_INF" => Ok(Scheme::TcLimit),
            "RC_INF" => Ok(Scheme::RcLimit),
            "IC" => Ok(Scheme::Ic),
            "BOUND" => Ok(Scheme::Bound),
            _ => Err(Error::InvalidParameter(format!("unknown scheme {s:?}"))),
        }
    }
}

/// The parameters that produced a frontier point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Allocation {
    Tc(TcAllocation),
    Rc(RcAllocation),
    TcLimit(TcLimitAllocation),
    /// Nothing to choose (limit RC, baselines, bounds).
    None,
}

impl Allocation {
    fn encode(&self) -> Vec<f64> {
        match self {
            Allocation::Tc(a) => [
                &a.lambda.to_squares()[..],
                &a.alpha.to_squares(),
                &a.beta.to_squares(),
                &a.kappa.to_squares(),
                &a.gamma.to_squares(),
                &a.mu.to_squares(),
                &a.eta.to_squares(),
            ]
            .concat(),
            Allocation::Rc(a) => [
                &a.lambda.to_squares()[..],
                &a.mu.to_squares(),
                &a.eta.to_squares(),
                &a.alpha.to_squares(),
                &a.beta.to_squares(),
            ]
            .concat(),
            Allocation::TcLimit(a) => [&a.mu.to_squares()[..], &a.eta.to_squares()].concat(),
            Allocation::None => Vec::new(),
        }
    }
}

/// Evaluates one allocation. `weight` is the coefficient of `R2` in the
/// objective; only the RC schemes use it, to pick a corner of the phase-1
/// pentagon.
pub fn evaluate(
    scheme: Scheme,
    g: &ChannelGains,
    p: &PowerBudget,
    a: &Allocation,
    weight: f64,
) -> Result<RatePair> {
    match (scheme, a) {
        (Scheme::Tc, Allocation::Tc(a)) => tc_rate_pair(g, p, a),
        (Scheme::Rdpc, Allocation::Tc(a)) => rdpc_rate_pair(g, p, a),
        (Scheme::Rc, Allocation::Rc(a)) => rc_rate_pair(g, p, a, weight),
        (Scheme::TcLimit, Allocation::TcLimit(a)) => tc_limit_rate_pair(g, p, a),
        (Scheme::RcLimit, Allocation::None) => rc_limit_rate_pair(g, p, weight),
        (s, a) => Err(Error::InvalidParameter(format!(
            "allocation {a:?} does not belong to scheme {s}"
        ))),
    }
}

/// Drops energy placed on zero-duration phases and renormalizes.
fn mask(s: Simplex3, lambda: &Simplex3) -> Simplex3 {
    let w = std::array::from_fn(|i| if lambda[i] > 0.0 { s[i] } else { 0.0 });
    let sum: f64 = w.iter().sum();
    if sum > 0.0 {
        if let Ok(m) = Simplex3::new(w.map(|v| v / sum)) {
            return m;
        }
    }
    let first = (0..3).find(|&i| lambda[i] > 0.0).unwrap_or(0);
    Simplex3::vertex(first)
}

fn decode_tc(x: &[f64]) -> TcAllocation {
    let lambda = Simplex3::from_squares(&x[0..3]);
    let mut kappa = Simplex2::from_squares(&x[7..9]);
    let mut gamma = Simplex2::from_squares(&x[9..11]);
    if lambda[0] == 0.0 {
        kappa = Simplex2::vertex(1);
    } else if lambda[2] == 0.0 {
        kappa = Simplex2::vertex(0);
    }
    if lambda[1] == 0.0 {
        gamma = Simplex2::vertex(1);
    } else if lambda[2] == 0.0 {
        gamma = Simplex2::vertex(0);
    }
    TcAllocation {
        lambda,
        alpha: Simplex2::from_squares(&x[3..5]),
        beta: Simplex2::from_squares(&x[5..7]),
        kappa,
        gamma,
        mu: Simplex3::from_squares(&x[11..14]),
        eta: Simplex3::from_squares(&x[14..17]),
    }
}

fn decode_rc(x: &[f64]) -> RcAllocation {
    let lambda = Simplex3::from_squares(&x[0..3]);
    RcAllocation {
        lambda,
        mu: mask(Simplex3::from_squares(&x[3..6]), &lambda),
        eta: mask(Simplex3::from_squares(&x[6..9]), &lambda),
        alpha: Simplex2::from_squares(&x[9..11]),
        beta: Simplex2::from_squares(&x[11..13]),
    }
}

/// Objective coefficients `a·R1 + b·R2`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Direction {
    a: f64,
    b: f64,
}

impl Direction {
    /// `b / a`, infinite on the `R2` axis.
    fn weight(&self) -> f64 {
        if self.a == 0.0 {
            f64::INFINITY
        } else {
            self.b / self.a
        }
    }

    fn value(&self, r: RatePair) -> f64 {
        r.weighted(self.a, self.b)
    }
}

/// Knobs of [`trace`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TraceOptions {
    /// Number of log-spaced weights between the two axes.
    pub weights: usize,
    pub log2_weight_min: f64,
    pub log2_weight_max: f64,
    /// Random starts per weight (corner starts come on top).
    pub restarts: usize,
    /// Simplex-search iterations per start.
    pub iterations: usize,
    /// Convergence threshold on the objective spread.
    pub tolerance: f64,
    pub seed: u64,
    /// Extra allocations used both as starting points and as candidates.
    #[serde(skip)]
    pub warm_starts: Vec<Allocation>,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            weights: 33,
            log2_weight_min: -6.0,
            log2_weight_max: 6.0,
            restarts: 32,
            iterations: 400,
            tolerance: 1e-9,
            seed: 0,
            warm_starts: Vec::new(),
        }
    }
}

impl TraceOptions {
    fn directions(&self) -> Vec<Direction> {
        let mut d = vec![Direction { a: 1.0, b: 0.0 }];
        let n = self.weights;
        for k in 0..n {
            let t = if n == 1 {
                0.5 * (self.log2_weight_min + self.log2_weight_max)
            } else {
                self.log2_weight_min
                    + (self.log2_weight_max - self.log2_weight_min) * k as f64 / (n - 1) as f64
            };
            d.push(Direction { a: 1.0, b: t.exp2() });
        }
        d.push(Direction { a: 0.0, b: 1.0 });
        d
    }

    /// The weight grid actually used, axes included (`0` and `inf`).
    pub fn weight_grid(&self) -> Vec<f64> {
        self.directions().iter().map(Direction::weight).collect()
    }

    fn budget(&self) -> SearchBudget {
        SearchBudget {
            iterations: self.iterations,
            tolerance: self.tolerance,
        }
    }
}

/// Optimizer settings recorded with a traced frontier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub weights: Vec<f64>,
    pub restarts: usize,
    pub iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
}

/// One vertex of a frontier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontierPoint {
    pub rate: RatePair,
    pub scheme: Scheme,
    /// Objective weight on `R2` that produced the point (`inf` on the `R2`
    /// axis, NaN for points not produced by the optimizer).
    pub weight: f64,
    pub allocation: Allocation,
}

/// Pareto vertices of a time-shared region, ordered by descending `r1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frontier {
    pub points: Vec<FrontierPoint>,
    pub meta: Option<TraceMeta>,
}

impl Frontier {
    /// Hull of arbitrary candidates. Always has at least one point.
    pub fn from_candidates(candidates: Vec<FrontierPoint>, meta: Option<TraceMeta>) -> Self {
        let rates: Vec<RatePair> = candidates.iter().map(|c| c.rate).collect();
        let mut points: Vec<FrontierPoint> = hull_indices(&rates)
            .into_iter()
            .map(|i| {
                let mut c = candidates[i];
                c.rate = RatePair::new(c.rate.r1.max(0.0), c.rate.r2.max(0.0));
                c
            })
            .collect();
        if points.is_empty() {
            let scheme = candidates.first().map_or(Scheme::Bound, |c| c.scheme);
            points.push(FrontierPoint {
                rate: RatePair::default(),
                scheme,
                weight: f64::NAN,
                allocation: Allocation::None,
            });
        }
        Self { points, meta }
    }

    /// Hull of bare rate pairs, tagged with `scheme`.
    pub fn from_rates(scheme: Scheme, rates: &[RatePair]) -> Self {
        let candidates = rates
            .iter()
            .map(|&rate| FrontierPoint {
                rate,
                scheme,
                weight: f64::NAN,
                allocation: Allocation::None,
            })
            .collect();
        Self::from_candidates(candidates, None)
    }

    pub fn rates(&self) -> Vec<RatePair> {
        self.points.iter().map(|p| p.rate).collect()
    }

    pub fn max_r1(&self) -> f64 {
        self.points.iter().map(|p| p.rate.r1).fold(0.0, f64::max)
    }

    pub fn max_r2(&self) -> f64 {
        self.points.iter().map(|p| p.rate.r2).fold(0.0, f64::max)
    }

    pub fn max_sum(&self) -> f64 {
        self.points.iter().map(|p| p.rate.sum()).fold(0.0, f64::max)
    }

    /// Whether `r` is inside the region, expanded by `tol` in each coordinate.
    pub fn contains(&self, r: RatePair, tol: f64) -> bool {
        region_contains(&self.rates(), r, tol)
    }

    /// Largest symmetric rate `(t, t)` inside the region.
    pub fn equal_rate(&self) -> f64 {
        equal_rate(&self.rates())
    }

    pub fn support(&self, theta: f64) -> f64 {
        support(&self.rates(), theta)
    }
}

/// Every point of `b` lies in the region of `a` expanded by `tol`.
pub fn dominates(a: &Frontier, b: &Frontier, tol: f64) -> bool {
    let ra = a.rates();
    b.points.iter().all(|p| region_contains(&ra, p.rate, tol))
}

const SUPPORT_ANGLES: usize = 4096;

fn support_differences(a: &Frontier, b: &Frontier) -> impl Iterator<Item = f64> {
    let (ra, rb) = (a.rates(), b.rates());
    (0..=SUPPORT_ANGLES).map(move |k| {
        let theta = std::f64::consts::FRAC_PI_2 * k as f64 / SUPPORT_ANGLES as f64;
        support(&ra, theta) - support(&rb, theta)
    })
}

/// Hausdorff distance between the two down-closed regions, from their
/// support functions on a dense set of directions.
pub fn hausdorff(a: &Frontier, b: &Frontier) -> f64 {
    support_differences(a, b).map(f64::abs).fold(0.0, f64::max)
}

/// Largest amount by which `a` reaches beyond `b` in any direction.
pub fn max_gap(a: &Frontier, b: &Frontier) -> f64 {
    support_differences(a, b).fold(0.0, f64::max)
}

/// Difference of the symmetric-rate points, `a` minus `b`.
pub fn equal_rate_gap(a: &Frontier, b: &Frontier) -> f64 {
    a.equal_rate() - b.equal_rate()
}

fn start_seed(seed: u64, weight_index: usize, restart: usize) -> u64 {
    // splitmix64 finalizer over the packed indices
    let mut z = seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15_u64.wrapping_mul(1 + weight_index as u64))
        .wrapping_add((restart as u64).wrapping_mul(0xD1B5_4A32_D192_ED69));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn corner_starts(scheme: Scheme) -> Vec<Vec<f64>> {
    let tc = |lambda: [f64; 3], kappa: [f64; 2], gamma: [f64; 2], mu: [f64; 3], eta: [f64; 3]| {
        [&lambda[..], &[1.0, 1.0], &[1.0, 1.0], &kappa, &gamma, &mu, &eta].concat()
    };
    match scheme {
        Scheme::Tc | Scheme::Rdpc => vec![
            vec![1.0; 17],
            tc([0.0, 0.0, 1.0], [0.0, 1.0], [0.0, 1.0], [1.0; 3], [1.0; 3]),
            tc(
                [0.0, 0.0, 1.0],
                [0.0, 1.0],
                [0.0, 1.0],
                [1.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
            ),
            tc([1.0, 1.0, 0.0], [1.0, 0.0], [1.0, 0.0], [1.0; 3], [1.0; 3]),
        ],
        Scheme::Rc => vec![
            vec![1.0; 13],
            [
                &[1.0, 0.0, 0.0][..],
                &[1.0, 0.0, 0.0],
                &[1.0, 0.0, 0.0],
                &[1.0, 1.0],
                &[1.0, 1.0],
            ]
            .concat(),
            [
                &[0.0, 1.0, 1.0][..],
                &[0.0, 1.0, 1.0],
                &[0.0, 1.0, 1.0],
                &[0.0, 1.0],
                &[0.0, 1.0],
            ]
            .concat(),
        ],
        Scheme::TcLimit => vec![
            vec![1.0; 6],
            vec![1.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0, 1.0, 0.0],
        ],
        _ => Vec::new(),
    }
}

struct Problem<'a> {
    scheme: Scheme,
    g: &'a ChannelGains,
    p: &'a PowerBudget,
}

impl Problem<'_> {
    /// Decodes search coordinates and evaluates; `None` when the evaluator rejects them.
    fn candidate(&self, x: &[f64], dir: Direction) -> Option<(RatePair, Allocation)> {
        let w = dir.weight();
        let eval = |a: Allocation| evaluate(self.scheme, self.g, self.p, &a, w).ok().map(|r| (r, a));
        match self.scheme {
            Scheme::Tc | Scheme::Rdpc => eval(Allocation::Tc(decode_tc(x))),
            Scheme::Rc => eval(Allocation::Rc(decode_rc(x))),
            Scheme::TcLimit => {
                let mu = Simplex3::from_squares(&x[0..3]);
                let eta = Simplex3::from_squares(&x[3..6]);
                [DpcOrder::Primary, DpcOrder::Reversed]
                    .into_iter()
                    .filter_map(|order| eval(Allocation::TcLimit(TcLimitAllocation { mu, eta, order })))
                    .fold(None, |best: Option<(RatePair, Allocation)>, c| match best {
                        Some(b) if dir.value(b.0) >= dir.value(c.0) => Some(b),
                        _ => Some(c),
                    })
            }
            Scheme::RcLimit => eval(Allocation::None),
            Scheme::Ic | Scheme::Bound => None,
        }
    }

    fn objective(&self, x: &[f64], dir: Direction) -> f64 {
        self.candidate(x, dir)
            .map_or(f64::NEG_INFINITY, |(r, _)| dir.value(r))
    }

    /// Runs the simplex search from `x0` and re-evaluates the result.
    fn search(&self, x0: &[f64], dir: Direction, budget: SearchBudget) -> Option<Found> {
        let (x, _) = maximize(|x| self.objective(x, dir), x0, 0.5, budget);
        let (rate, allocation) = self.candidate(&x, dir)?;
        Some(Found {
            x,
            rate,
            allocation,
            value: dir.value(rate),
        })
    }
}

#[derive(Debug, Clone)]
struct Found {
    x: Vec<f64>,
    rate: RatePair,
    allocation: Allocation,
    value: f64,
}

fn check_preconditions(scheme: Scheme, g: &ChannelGains) -> Result<()> {
    match scheme {
        Scheme::Tc | Scheme::Rdpc if g.c12().is_infinite() => Err(Error::InfiniteGain("c12")),
        Scheme::Rc if g.c34().is_infinite() => Err(Error::InfiniteGain("c34")),
        Scheme::TcLimit if g.c12().is_finite() => Err(Error::NotInfinite("c12")),
        Scheme::RcLimit if g.c34().is_finite() => Err(Error::NotInfinite("c34")),
        Scheme::Bound => Err(Error::InvalidParameter("bounds are not traced".into())),
        _ => Ok(()),
    }
}

/// Traces the frontier of `scheme`.
///
/// For every weight of the grid, maximizes `R1 + w·R2` from the corner
/// starts, the warm starts and `opts.restarts` seeded random starts, then
/// polishes each weight from the best allocation found at any weight. All
/// results are re-evaluated and hulled. The output depends only on the
/// inputs and `opts`, not on thread scheduling.
pub fn trace(scheme: Scheme, g: &ChannelGains, p: &PowerBudget, opts: &TraceOptions) -> Result<Frontier> {
    check_preconditions(scheme, g)?;
    let dirs = opts.directions();
    let meta = TraceMeta {
        weights: dirs.iter().map(Direction::weight).collect(),
        restarts: opts.restarts,
        iterations: opts.iterations,
        tolerance: opts.tolerance,
        seed: opts.seed,
    };

    if scheme == Scheme::Ic {
        let b = strong_ic_region(g, p)?;
        let mut f = Frontier::from_rates(Scheme::Ic, &b.polygon());
        f.meta = Some(meta);
        return Ok(f);
    }

    let problem = Problem { scheme, g, p };
    let dims = scheme.dims();
    let budget = opts.budget();

    let mut starts: Vec<Vec<f64>> = corner_starts(scheme);
    starts.extend(
        opts.warm_starts
            .iter()
            .map(Allocation::encode)
            .filter(|x| x.len() == dims),
    );
    let fixed = starts.len();
    let jobs: Vec<(usize, usize)> = (0..dirs.len())
        .flat_map(|w| (0..fixed + opts.restarts).map(move |s| (w, s)))
        .collect();

    let found: Vec<Option<Found>> = if dims == 0 {
        dirs.par_iter().map(|&d| problem.search(&[], d, budget)).collect()
    } else {
        jobs.par_iter()
            .map(|&(w, s)| {
                let x0 = if s < fixed {
                    starts[s].clone()
                } else {
                    let mut rng = ChaCha8Rng::seed_from_u64(start_seed(opts.seed, w, s - fixed));
                    (0..dims).map(|_| rng.gen::<f64>()).collect()
                };
                problem.search(&x0, dirs[w], budget)
            })
            .collect()
    };

    let per_weight = if dims == 0 { 1 } else { fixed + opts.restarts };
    let mut candidates: Vec<FrontierPoint> = Vec::new();
    let mut best: Vec<Option<Found>> = vec![None; dirs.len()];
    for (k, f) in found.into_iter().enumerate() {
        let w = k / per_weight;
        if let Some(f) = f {
            candidates.push(FrontierPoint {
                rate: f.rate,
                scheme,
                weight: dirs[w].weight(),
                allocation: f.allocation,
            });
            if best[w].as_ref().is_none_or(|b| f.value > b.value) {
                best[w] = Some(f);
            }
        }
    }

    if dims > 0 {
        // polish: restart each weight from the best allocation over all weights
        let polished: Vec<Option<Found>> = (0..dirs.len())
            .into_par_iter()
            .map(|w| {
                let d = dirs[w];
                let seed = best
                    .iter()
                    .flatten()
                    .map(|b| (problem.objective(&b.x, d), &b.x))
                    .fold(None, |acc: Option<(f64, &Vec<f64>)>, c| match acc {
                        Some(a) if a.0 >= c.0 => Some(a),
                        _ => Some(c),
                    })?;
                problem.search(seed.1, d, budget)
            })
            .collect();
        for (w, f) in polished.into_iter().enumerate() {
            if let Some(f) = f {
                candidates.push(FrontierPoint {
                    rate: f.rate,
                    scheme,
                    weight: dirs[w].weight(),
                    allocation: f.allocation,
                });
            }
        }
    }

    // re-validate every candidate through the evaluator
    let mut checked = Vec::with_capacity(candidates.len());
    for c in candidates {
        let rate = evaluate(scheme, g, p, &c.allocation, c.weight)?;
        checked.push(FrontierPoint { rate, ..c });
    }
    Ok(Frontier::from_candidates(checked, Some(meta)))
}
