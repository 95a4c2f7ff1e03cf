//! Structure measurements: density in the measurement disc, the long-run
//! slope of the free-side count, critical concentration search and
//! box-counting dimension.

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::assembly::{Assembly, Coord, RunTrace, StepRule, DEFAULT_STRIDE};
use crate::error::{Error, Result};
use crate::rng::{run_rng, seed_for_f};
use crate::sweep::par_map;
use crate::tiles::TileSystem;

/// Radius of the measurement disc for `n` placed tiles: `sqrt(n / pi) / 2`.
pub fn disc_radius(n: usize) -> f64 {
    0.5 * (n as f64 / std::f64::consts::PI).sqrt()
}

/// Fraction of lattice cells within the measurement disc that are occupied.
/// The disc is centred on the seed and sized by the tile count at measurement time.
pub fn density(asm: &Assembly) -> f64 {
    let r = disc_radius(asm.tiles_placed());
    let r2 = r * r;
    let reach = r.floor() as i32;
    let (mut inside, mut filled) = (0u64, 0u64);
    for x in -reach..=reach {
        for y in -reach..=reach {
            if (x * x + y * y) as f64 <= r2 {
                inside += 1;
                filled += u64::from(asm.is_occupied((x, y)));
            }
        }
    }
    filled as f64 / inside as f64
}

/// Summary of one run, kept instead of the (large) assembly.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub trace: RunTrace,
    pub density: f64,
}

impl RunSummary {
    pub fn terminated(&self) -> bool {
        self.trace.terminated
    }
}

/// Runs `reps` independent assemblies at the system's `f`, in parallel.
/// Run `i` uses stream `i` of the seed derived from `(master, f)`.
pub fn run_batch(
    sys: &TileSystem,
    reps: usize,
    n_max: u64,
    stride: u64,
    rule: StepRule,
    master: u64,
) -> Vec<RunSummary> {
    let seed = seed_for_f(master, sys.f);
    par_map(reps, |i| {
        let mut rng = run_rng(seed, i as u64);
        let mut asm = Assembly::new(sys, None, &mut rng);
        let trace = asm.run_to(n_max, stride, rule, &mut rng);
        RunSummary { density: density(&asm), trace }
    })
}

pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityPoint {
    pub f: f64,
    pub mean_density: f64,
    pub std: f64,
    pub reps: usize,
}

/// Evenly spaced grid `lo, lo + step, ..., hi`, snapped to avoid drift.
pub fn f_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
        return Err(Error::Parameter(format!("f grid {lo}:{hi} must lie within [0, 1]")));
    }
    if step <= 0.0 {
        return Err(Error::Parameter("f grid step must be positive".into()));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| ((lo + i as f64 * step) * 1e9).round() / 1e9).collect())
}

/// The default 0.05-spaced grid on `[0, 1]`.
pub fn default_grid() -> Vec<f64> {
    f_grid(0.0, 1.0, 0.05).unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityParams {
    pub reps: usize,
    pub n_max: u64,
    pub rule: StepRule,
}

impl Default for DensityParams {
    fn default() -> Self {
        DensityParams { reps: 100, n_max: 10_000, rule: StepRule::Conditioned }
    }
}

/// Mean and spread of the density at each grid concentration.
pub fn density_curve(
    template: &TileSystem,
    grid: &[f64],
    params: &DensityParams,
    master: u64,
) -> Result<Vec<DensityPoint>> {
    grid.iter()
        .map(|&f| {
            let sys = template.with_f(f)?;
            let runs = run_batch(&sys, params.reps, params.n_max, DEFAULT_STRIDE, params.rule, master);
            Ok(density_point(f, &runs))
        })
        .collect()
}

pub fn density_point(f: f64, runs: &[RunSummary]) -> DensityPoint {
    let ds: Vec<f64> = runs.iter().map(|r| r.density).collect();
    let (mean_density, std) = mean_std(&ds);
    DensityPoint { f, mean_density, std, reps: runs.len() }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeParams {
    pub n_eval: u64,
    pub window_frac: f64,
    pub reps: usize,
    pub stride: u64,
    pub rule: StepRule,
}

impl Default for SlopeParams {
    fn default() -> Self {
        SlopeParams { n_eval: 50_000, window_frac: 0.2, reps: 50, stride: DEFAULT_STRIDE, rule: StepRule::Conditioned }
    }
}

impl SlopeParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_eval < 1000 {
            return Err(Error::Parameter(format!("n_eval = {} must be at least 1000", self.n_eval)));
        }
        if !(self.window_frac > 0.0 && self.window_frac < 1.0) {
            return Err(Error::Parameter(format!("window_frac = {} must lie in (0, 1)", self.window_frac)));
        }
        if self.reps == 0 {
            return Err(Error::Parameter("reps must be positive".into()));
        }
        Ok(())
    }
}

/// Which side of a critical point a slope estimate falls on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Bound,
    Unbound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeEstimate {
    pub f: f64,
    /// Least-squares slope of the run-averaged free-side count over the window.
    pub slope: f64,
    pub stderr: f64,
    pub n_eval: u64,
    pub reps: usize,
    /// Fraction of runs that terminated before `n_eval`.
    pub terminated_frac: f64,
    /// Set when every run terminated before the window opened.
    pub insufficient: bool,
    /// Mean free-side count at `n_eval`.
    pub mean_a_end: f64,
}

impl SlopeEstimate {
    /// A strictly negative slope is bound and a strictly positive one
    /// unbound. A flat window is bound only if every run has already died;
    /// otherwise it is a sustained, non-terminating front (a line, say).
    pub fn phase(&self) -> Phase {
        if self.slope > 0.0 {
            Phase::Unbound
        } else if self.slope < 0.0 || self.mean_a_end == 0.0 {
            Phase::Bound
        } else {
            Phase::Unbound
        }
    }
}

/// Ordinary least squares: `(slope, intercept, stderr of slope, r^2)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let stderr = if xs.len() > 2 && sxx > 0.0 { (sse / (n - 2.0) / sxx).sqrt() } else { f64::NAN };
    let r2 = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    (slope, intercept, stderr, r2)
}

/// Slope of the mean free-side count over `[(1 - window_frac) n_eval, n_eval]`.
/// Terminated runs count as `a = 0` after they stop.
pub fn slope_from_traces(f: f64, traces: &[&RunTrace], params: &SlopeParams) -> SlopeEstimate {
    let stride = params.stride.max(1);
    let start = ((1.0 - params.window_frac) * params.n_eval as f64).ceil() as u64;
    let first = start.div_ceil(stride) * stride;
    let xs: Vec<u64> = (first..=params.n_eval).step_by(stride as usize).collect();
    let reps = traces.len();
    let ys: Vec<f64> = xs.iter().map(|&n| traces.iter().map(|t| t.a_at(n) as f64).sum::<f64>() / reps as f64).collect();
    let xf: Vec<f64> = xs.iter().map(|&x| x as f64).collect();
    let (slope, _, stderr, _) = linear_fit(&xf, &ys);
    let terminated = traces.iter().filter(|t| t.terminated && t.n_final < params.n_eval).count();
    let insufficient = traces.iter().all(|t| t.terminated && t.n_final < start);
    SlopeEstimate {
        f,
        slope,
        stderr,
        n_eval: params.n_eval,
        reps,
        terminated_frac: terminated as f64 / reps as f64,
        insufficient,
        mean_a_end: ys.last().copied().unwrap_or(0.0),
    }
}

/// Estimates the long-run slope `da/dN` at concentration `f`.
pub fn slope_at(template: &TileSystem, f: f64, params: &SlopeParams, master: u64) -> Result<SlopeEstimate> {
    params.validate()?;
    let sys = template.with_f(f)?;
    let runs = run_batch(&sys, params.reps, params.n_eval, params.stride, params.rule, master);
    let traces: Vec<&RunTrace> = runs.iter().map(|r| &r.trace).collect();
    Ok(slope_from_traces(f, &traces, params))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    BoundBelowUnboundAbove,
    UnboundBelowBoundAbove,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FcParams {
    pub slope: SlopeParams,
    pub tol: f64,
    pub grid_step: f64,
}

impl Default for FcParams {
    fn default() -> Self {
        FcParams { slope: SlopeParams::default(), tol: 0.01, grid_step: 0.05 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FcResult {
    pub f_c: f64,
    pub bracket: (f64, f64),
    pub direction: Direction,
    pub params: FcParams,
    /// Slope estimates at the final bracket ends.
    pub lo: SlopeEstimate,
    pub hi: SlopeEstimate,
    /// Further persistent sign changes seen in the coarse scan.
    pub other_transitions: usize,
}

impl SlopeEstimate {
    /// Whether the phase is clear-cut: every run has died, or the slope is
    /// more than three standard errors from zero.
    pub fn decisive(&self) -> bool {
        self.mean_a_end == 0.0 || self.slope.abs() > 3.0 * self.stderr
    }
}

/// Indices `i` such that the phase flips between grid points `i` and `i + 1`
/// and holds on two adjacent points on each side. At either end of the grid
/// a single decisive point is enough for that side.
pub fn persistent_transitions(scan: &[SlopeEstimate]) -> Vec<usize> {
    let phases: Vec<Phase> = scan.iter().map(SlopeEstimate::phase).collect();
    let n = phases.len();
    (0..n.saturating_sub(1))
        .filter(|&i| {
            let (lo, hi) = (phases[i], phases[i + 1]);
            let left = if i == 0 { scan[0].decisive() } else { phases[i - 1] == lo };
            let right = if i + 2 == n { scan[n - 1].decisive() } else { phases[i + 2] == hi };
            lo != hi && left && right
        })
        .collect()
}

/// Drops grid points at which the seed can never grow. They are bound
/// trivially and would otherwise anchor a spurious transition at the edge.
pub fn without_terminal_seeds(template: &TileSystem, scan: &[SlopeEstimate]) -> Vec<SlopeEstimate> {
    scan.iter().filter(|e| !template.with_f(e.f).map_or(true, |s| s.seed_is_terminal())).cloned().collect()
}

/// Slope estimates over a grid of concentrations.
pub fn scan_slopes(
    template: &TileSystem,
    grid: &[f64],
    params: &SlopeParams,
    master: u64,
) -> Result<Vec<SlopeEstimate>> {
    grid.iter().map(|&f| slope_at(template, f, params, master)).collect()
}

/// Critical concentration: coarse scan for a persistent sign change of the
/// slope, then bisection down to `tol`. `None` means no critical point.
pub fn find_fc(template: &TileSystem, params: &FcParams, master: u64) -> Result<Option<FcResult>> {
    let grid = f_grid(0.0, 1.0, params.grid_step)?;
    let scan = scan_slopes(template, &grid, &params.slope, master)?;
    refine_fc(template, &scan, params, master)
}

/// Bisection stage of [`find_fc`], reusing an existing coarse scan.
pub fn refine_fc(
    template: &TileSystem,
    scan: &[SlopeEstimate],
    params: &FcParams,
    master: u64,
) -> Result<Option<FcResult>> {
    if params.tol < 0.005 {
        return Err(Error::Parameter(format!("tol = {} must be at least 0.005", params.tol)));
    }
    let scan = without_terminal_seeds(template, scan);
    let found = persistent_transitions(&scan);
    let Some(&i) = found.first() else {
        return Ok(None);
    };
    let mut lo = scan[i].clone();
    let mut hi = scan[i + 1].clone();
    let lo_phase = lo.phase();
    while hi.f - lo.f > params.tol {
        let mid = ((lo.f + hi.f) / 2.0 * 1e9).round() / 1e9;
        let est = slope_at(template, mid, &params.slope, master)?;
        if est.phase() == lo_phase {
            lo = est;
        } else {
            hi = est;
        }
    }
    let direction = match lo_phase {
        Phase::Bound => Direction::BoundBelowUnboundAbove,
        Phase::Unbound => Direction::UnboundBelowBoundAbove,
    };
    Ok(Some(FcResult {
        f_c: (lo.f + hi.f) / 2.0,
        bracket: (lo.f, hi.f),
        direction,
        params: *params,
        lo,
        hi,
        other_transitions: found.len() - 1,
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractalFit {
    pub dimension: f64,
    pub r_squared: f64,
    pub box_sizes: Vec<u32>,
    pub box_counts: Vec<usize>,
    pub reps: usize,
}

/// Default minimum structure extent for box counting, in cells.
pub const MIN_EXTENT: u32 = 128;

/// Box-counting dimension of a set of occupied cells.
///
/// The bounding square is padded to the next power of two `L` and covered by
/// boxes of side `1, 2, 4, ..., L / 4` anchored at its corner; the dimension
/// is minus the least-squares slope of `ln count` against `ln side`.
pub fn box_dimension(cells: &[Coord], min_extent: u32) -> Result<FractalFit> {
    if cells.is_empty() {
        return Err(Error::StructureTooSmall { extent: 0, min: min_extent });
    }
    let (x0, y0, x1, y1) = cells.iter().fold((i32::MAX, i32::MAX, i32::MIN, i32::MIN), |b, p| {
        (b.0.min(p.0), b.1.min(p.1), b.2.max(p.0), b.3.max(p.1))
    });
    let extent = ((x1 - x0).max(y1 - y0) + 1) as u32;
    if extent < min_extent.max(4) {
        return Err(Error::StructureTooSmall { extent, min: min_extent });
    }
    let side = extent.next_power_of_two();
    let mut box_sizes = Vec::new();
    let mut box_counts = Vec::new();
    let mut eps = 1u32;
    while eps <= side / 4 {
        let boxes: FxHashSet<(u32, u32)> =
            cells.iter().map(|&(x, y)| ((x - x0) as u32 / eps, (y - y0) as u32 / eps)).collect();
        box_sizes.push(eps);
        box_counts.push(boxes.len());
        eps *= 2;
    }
    let lx: Vec<f64> = box_sizes.iter().map(|&e| (e as f64).ln()).collect();
    let ly: Vec<f64> = box_counts.iter().map(|&c| (c as f64).ln()).collect();
    let (slope, _, _, r_squared) = linear_fit(&lx, &ly);
    Ok(FractalFit { dimension: -slope, r_squared, box_sizes, box_counts, reps: 1 })
}

pub fn assembly_dimension(asm: &Assembly, min_extent: u32) -> Result<FractalFit> {
    let cells: Vec<Coord> = asm.occupied().collect();
    box_dimension(&cells, min_extent)
}

/// Mann-Kendall trend statistic: `(S, z, two-sided p-value)`.
pub fn mann_kendall(values: &[f64]) -> (i64, f64, f64) {
    let n = values.len();
    let mut s = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            s += match values[j].partial_cmp(&values[i]) {
                Some(std::cmp::Ordering::Greater) => 1,
                Some(std::cmp::Ordering::Less) => -1,
                _ => 0,
            };
        }
    }
    // Tie correction.
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let mut ties = 0.0;
    let mut k = 0;
    while k < n {
        let mut m = k + 1;
        while m < n && sorted[m] == sorted[k] {
            m += 1;
        }
        let t = (m - k) as f64;
        ties += t * (t - 1.0) * (2.0 * t + 5.0);
        k = m;
    }
    let nf = n as f64;
    let var = (nf * (nf - 1.0) * (2.0 * nf + 5.0) - ties) / 18.0;
    if var <= 0.0 {
        return (s, 0.0, 1.0);
    }
    let z = match s.cmp(&0) {
        std::cmp::Ordering::Greater => (s as f64 - 1.0) / var.sqrt(),
        std::cmp::Ordering::Less => (s as f64 + 1.0) / var.sqrt(),
        std::cmp::Ordering::Equal => 0.0,
    };
    let p = statrs::function::erf::erfc(z.abs() / std::f64::consts::SQRT_2);
    (s, z, p)
}
