//! Behaviour taxonomy for single tiles and two-tile sets.
//!
//! Structural flags come straight from the colourings. Empirical labels
//! (bound or unbound, deterministic or not, critical, dimensional) come from
//! batches of runs and carry an `inconclusive` note when the sample does not
//! settle them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::assembly::{Assembly, Coord, Placement, RunTrace, StepRule, DEFAULT_STRIDE};
use crate::error::Result;
use crate::metrics::{
    assembly_dimension, density, density_point, mann_kendall, persistent_transitions, refine_fc, slope_from_traces,
    Direction, FcParams, Phase, SlopeEstimate, SlopeParams, MIN_EXTENT,
};
use crate::rng::{derive_seed, run_rng, seed_for_f};
use crate::sweep::par_map;
use crate::tiles::{enumerate_pairs, face_stats_in, pair_stats, Colour, Interaction, Tile, TilePair, TileSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingleClass {
    NonInteracting,
    BoundDeterministic,
    UnboundDeterministic,
    BoundNonDeterministic,
    UnboundNonDeterministic,
}

impl SingleClass {
    pub fn label(self) -> &'static str {
        match self {
            SingleClass::NonInteracting => "non-interacting",
            SingleClass::BoundDeterministic => "bound deterministic",
            SingleClass::UnboundDeterministic => "unbound deterministic",
            SingleClass::BoundNonDeterministic => "bound non-deterministic",
            SingleClass::UnboundNonDeterministic => "unbound non-deterministic",
        }
    }
}

impl fmt::Display for SingleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingleParams {
    pub reps: usize,
    pub n_max: u64,
    /// Radius of the disc around the seed compared between unbound runs.
    pub window_radius: i32,
    /// Fraction of terminated runs needed to call a tile bound, and of
    /// surviving runs needed to call it unbound.
    pub threshold: f64,
    pub rule: StepRule,
}

impl Default for SingleParams {
    fn default() -> Self {
        SingleParams { reps: 100, n_max: 10_000, window_radius: 5, threshold: 0.95, rule: StepRule::Conditioned }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingleReport {
    pub tile: Tile,
    pub mode: Interaction,
    /// `None` when the runs did not settle the class.
    pub class: Option<SingleClass>,
    pub inconclusive: Option<String>,
    pub terminated_frac: f64,
    pub slope: f64,
    /// Distinct final structures (bound) or seed windows (unbound) seen.
    pub distinct_outcomes: usize,
    pub master_seed: u64,
    pub params: SingleParams,
}

/// Whether any face of `t` binds any face of `t`.
pub fn self_binding(t: &Tile, mode: &Interaction) -> bool {
    pair_stats(t, t, mode).cross_interacting
}

/// Each cell near the seed with its tile type and reduced orientation.
pub type SeedWindow = Vec<(Coord, Option<(u8, u8)>)>;

/// Cells, tile types and reduced orientations within `radius` of the seed,
/// or `None` while a free side remains inside that disc.
pub fn seed_window(asm: &Assembly, radius: i32) -> Option<SeedWindow> {
    let inside = |(x, y): Coord| x * x + y * y <= radius * radius;
    if asm.free_sides().any(|s| inside(s.cell)) {
        return None;
    }
    let mut out = Vec::new();
    for x in -radius..=radius {
        for y in -radius..=radius {
            if !inside((x, y)) {
                continue;
            }
            let cell = asm.get((x, y)).map(|p: Placement| {
                let period = asm.tiles()[p.tile as usize].rotational_period();
                (p.tile, p.orientation % period)
            });
            out.push(((x, y), cell));
        }
    }
    Some(out)
}

enum Outcome {
    Closed(Vec<Placement>),
    Open(Option<SeedWindow>),
}

pub fn classify_single(tile: Tile, mode: &Interaction, params: &SingleParams, master: u64) -> SingleReport {
    let mut report = SingleReport {
        tile,
        mode: mode.clone(),
        class: None,
        inconclusive: None,
        terminated_frac: 0.0,
        slope: 0.0,
        distinct_outcomes: 1,
        master_seed: master,
        params: *params,
    };
    if !self_binding(&tile, mode) {
        report.class = Some(SingleClass::NonInteracting);
        return report;
    }
    let sys = TileSystem::single(tile, mode.clone());
    let seed = derive_seed(master, tile_tag(&tile, mode));
    let runs: Vec<(RunTrace, Outcome)> = par_map(params.reps, |i| {
        let mut rng = run_rng(seed, i as u64);
        let mut asm = Assembly::new(&sys, None, &mut rng);
        let trace = asm.run_to(params.n_max, DEFAULT_STRIDE, params.rule, &mut rng);
        let outcome = if trace.terminated {
            Outcome::Closed(asm.canonical_structure())
        } else {
            Outcome::Open(seed_window(&asm, params.window_radius))
        };
        (trace, outcome)
    });
    let traces: Vec<&RunTrace> = runs.iter().map(|r| &r.0).collect();
    let sp = SlopeParams {
        n_eval: params.n_max,
        window_frac: 0.2,
        reps: params.reps,
        stride: DEFAULT_STRIDE,
        rule: params.rule,
    };
    let est = slope_from_traces(0.0, &traces, &sp);
    let term = runs.iter().filter(|r| r.0.terminated).count() as f64 / params.reps as f64;
    report.terminated_frac = term;
    report.slope = est.slope;

    if term >= params.threshold && est.slope <= 0.0 {
        let closed: BTreeSet<&Vec<Placement>> = runs
            .iter()
            .filter_map(|r| match &r.1 {
                Outcome::Closed(s) => Some(s),
                Outcome::Open(_) => None,
            })
            .collect();
        let open = runs.len() - runs.iter().filter(|r| r.0.terminated).count();
        report.distinct_outcomes = closed.len() + open;
        report.class = Some(if report.distinct_outcomes == 1 {
            SingleClass::BoundDeterministic
        } else {
            SingleClass::BoundNonDeterministic
        });
    } else if 1.0 - term >= 1.0 - params.threshold && est.phase() == Phase::Unbound {
        if term > 0.0 {
            // Some runs closed and some did not: the outcome is not unique.
            report.distinct_outcomes = 2;
            report.class = Some(SingleClass::UnboundNonDeterministic);
            return report;
        }
        let windows: Vec<&Option<_>> = runs
            .iter()
            .filter_map(|r| match &r.1 {
                Outcome::Open(w) => Some(w),
                Outcome::Closed(_) => None,
            })
            .collect();
        if windows.iter().any(|w| w.is_none()) {
            report.inconclusive = Some(format!(
                "seed window of radius {} still has free sides at N = {}",
                params.window_radius, params.n_max
            ));
            return report;
        }
        let distinct: BTreeSet<_> = windows.into_iter().flatten().collect();
        report.distinct_outcomes = distinct.len();
        report.class = Some(if distinct.len() == 1 {
            SingleClass::UnboundDeterministic
        } else {
            SingleClass::UnboundNonDeterministic
        });
    } else {
        report.inconclusive =
            Some(format!("terminated fraction {term:.3} with slope {:.2e}; rerun with more reps", est.slope));
    }
    report
}

fn tile_tag(t: &Tile, mode: &Interaction) -> u64 {
    let mode_tag = match mode {
        Interaction::Symmetric => 1,
        Interaction::Asymmetric => 2,
        Interaction::Matrix(_) => 3,
    };
    t.faces.iter().fold(mode_tag, |acc, c| acc * 256 + c.0 as u64)
}

fn pair_tag(a: &Tile, b: &Tile, mode: &Interaction) -> u64 {
    (tile_tag(a, mode) << 32) ^ tile_tag(b, mode)
}

/// Structural flags of a two-tile set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairFlags {
    pub non_interacting: bool,
    pub seed_dependent: bool,
    pub extended_seed_dependent: bool,
    pub f_dep_bottleneck: bool,
    pub f_indep_bottleneck: bool,
    pub hdnm: bool,
    pub random_walker: bool,
}

/// Nonzero colour of a tile whose only nonzero face is that colour.
fn lone_colour(t: &Tile) -> Option<Colour> {
    let nz: Vec<Colour> = t.faces.iter().copied().filter(|c| !c.is_neutral()).collect();
    (nz.len() == 1).then(|| nz[0])
}

/// True when some colour other than `c` sits on both faces of an opposite pair.
fn opposite_pair_other_than(t: &Tile, c: Colour) -> bool {
    (0..2).any(|i| {
        let x = t.faces[i];
        x == t.faces[i + 2] && !x.is_neutral() && x != c
    })
}

pub fn pair_flags(a: &Tile, b: &Tile, mode: &Interaction) -> PairFlags {
    let sys = TileSystem { tiles: vec![*a, *b], mode: mode.clone(), f: 0.5 };
    let palette = sys.live_colours();
    let (sa, sb) = (face_stats_in(a, mode, &palette), face_stats_in(b, mode, &palette));
    let cross = pair_stats(a, b, mode).cross_interacting;
    let (self_a, self_b) = (sa.self_interacting, sb.self_interacting);

    let extended = |x: &Tile, y: &Tile| lone_colour(x).is_some_and(|c| y.contains(c) && opposite_pair_other_than(y, c));
    PairFlags {
        non_interacting: !self_a && !self_b && !cross,
        seed_dependent: self_a && self_b && !cross,
        extended_seed_dependent: *mode == Interaction::Symmetric && (extended(a, b) || extended(b, a)),
        f_dep_bottleneck: cross && (self_a != self_b),
        f_indep_bottleneck: cross && !self_a && !self_b,
        hdnm: sa.active_count >= 4 && sb.active_count >= 4 && self_a && self_b && cross,
        random_walker: sa.active_count <= 2 && sb.active_count <= 2 && cross,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairLabel {
    NonInteracting,
    SeedDependent,
    ExtendedSeedDependent,
    FIndepBottleneck,
    FDepBottleneck,
    RandomWalker,
    Critical,
    Dimensional,
    Hdnm,
    Other,
}

impl PairLabel {
    pub const ALL: [PairLabel; 10] = [
        PairLabel::NonInteracting,
        PairLabel::SeedDependent,
        PairLabel::ExtendedSeedDependent,
        PairLabel::FIndepBottleneck,
        PairLabel::FDepBottleneck,
        PairLabel::RandomWalker,
        PairLabel::Critical,
        PairLabel::Dimensional,
        PairLabel::Hdnm,
        PairLabel::Other,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PairLabel::NonInteracting => "non_interacting",
            PairLabel::SeedDependent => "seed_dependent",
            PairLabel::ExtendedSeedDependent => "extended_seed_dependent",
            PairLabel::FIndepBottleneck => "f_indep_bottleneck",
            PairLabel::FDepBottleneck => "f_dep_bottleneck",
            PairLabel::RandomWalker => "random_walker",
            PairLabel::Critical => "critical",
            PairLabel::Dimensional => "dimensional",
            PairLabel::Hdnm => "hdnm",
            PairLabel::Other => "other",
        }
    }
}

/// Picks the primary label by fixed precedence.
pub fn primary_label(flags: &PairFlags, critical: bool, dimensional: bool) -> PairLabel {
    let ordered = [
        (flags.non_interacting, PairLabel::NonInteracting),
        (flags.seed_dependent, PairLabel::SeedDependent),
        (flags.extended_seed_dependent, PairLabel::ExtendedSeedDependent),
        (flags.f_indep_bottleneck, PairLabel::FIndepBottleneck),
        (flags.f_dep_bottleneck, PairLabel::FDepBottleneck),
        (flags.random_walker, PairLabel::RandomWalker),
        (critical, PairLabel::Critical),
        (dimensional, PairLabel::Dimensional),
        (flags.hdnm, PairLabel::Hdnm),
    ];
    ordered.into_iter().find(|(on, _)| *on).map_or(PairLabel::Other, |(_, l)| l)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairParams {
    pub reps: usize,
    pub n_max: u64,
    pub grid_step: f64,
    /// Bisection tolerance for `f_c`; the scan itself is never refined below it.
    pub tol: f64,
    /// Terminated fraction that marks a grid point as bound, and the
    /// surviving fraction that marks one as unbound.
    pub threshold: f64,
    /// Smallest density change across `[0, 1]` that counts as a transition.
    pub min_density_change: f64,
    /// Significance of the Mann-Kendall trend test.
    pub trend_alpha: f64,
    /// Runs grown at `f_c` for the fractal dimension; zero skips it.
    pub fractal_runs: usize,
    pub fractal_n: u64,
    pub rule: StepRule,
}

impl Default for PairParams {
    fn default() -> Self {
        PairParams {
            reps: 50,
            n_max: 10_000,
            grid_step: 0.05,
            tol: 0.01,
            threshold: 0.95,
            min_density_change: 0.1,
            trend_alpha: 0.01,
            fractal_runs: 0,
            fractal_n: 50_000,
            rule: StepRule::Conditioned,
        }
    }
}

/// Aggregates of one batch of runs at a single `f`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub f: f64,
    pub mean_density: f64,
    pub std_density: f64,
    pub slope: f64,
    /// `None` when the fit window holds fewer than three samples.
    pub stderr: Option<f64>,
    pub terminated_frac: f64,
    pub mean_a_end: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogueRecord {
    pub pair: TilePair,
    pub mode: Interaction,
    pub flags: PairFlags,
    pub critical: bool,
    pub dimensional_transition: bool,
    pub label: PairLabel,
    pub f_c: Option<f64>,
    pub bracket: Option<(f64, f64)>,
    pub direction: Option<Direction>,
    pub fractal_dimension: Option<f64>,
    pub fractal_r2: Option<f64>,
    pub density_min: f64,
    pub density_max: f64,
    pub density_trend_p: f64,
    pub inconclusive: Vec<String>,
    pub grid: Vec<GridPoint>,
    pub master_seed: u64,
    pub params: PairParams,
}

impl CatalogueRecord {
    pub fn key(&self) -> String {
        format!("{}-{}:{}", self.pair.a, self.pair.b, self.mode.label())
    }
}

fn grid_for(step: f64) -> Result<Vec<f64>> {
    crate::metrics::f_grid(0.0, 1.0, step)
}

/// Runs the grid scan and returns per-point aggregates with the slope estimates.
pub fn scan_pair(
    template: &TileSystem,
    params: &PairParams,
    seed: u64,
) -> Result<(Vec<GridPoint>, Vec<SlopeEstimate>)> {
    let sp = slope_params(params);
    let mut points = Vec::new();
    let mut slopes = Vec::new();
    for f in grid_for(params.grid_step)? {
        let sys = template.with_f(f)?;
        let runs = crate::metrics::run_batch(&sys, params.reps, params.n_max, DEFAULT_STRIDE, params.rule, seed);
        let dp = density_point(f, &runs);
        let traces: Vec<&RunTrace> = runs.iter().map(|r| &r.trace).collect();
        let est = slope_from_traces(f, &traces, &sp);
        points.push(GridPoint {
            f,
            mean_density: dp.mean_density,
            std_density: dp.std,
            slope: est.slope,
            stderr: est.stderr.is_finite().then_some(est.stderr),
            terminated_frac: est.terminated_frac,
            mean_a_end: est.mean_a_end,
        });
        slopes.push(est);
    }
    Ok((points, slopes))
}

fn slope_params(params: &PairParams) -> SlopeParams {
    SlopeParams { n_eval: params.n_max, window_frac: 0.2, reps: params.reps, stride: DEFAULT_STRIDE, rule: params.rule }
}

/// Bound and unbound grid points by the run-fraction thresholds.
fn is_bound(p: &GridPoint, th: f64) -> bool {
    p.terminated_frac >= th
}

fn is_unbound(p: &GridPoint, th: f64) -> bool {
    1.0 - p.terminated_frac >= th
}

/// Classifies one set. The empirical part is skipped for non-interacting sets.
pub fn classify_pair(pair: &TilePair, mode: &Interaction, params: &PairParams, master: u64) -> Result<CatalogueRecord> {
    let flags = pair_flags(&pair.a, &pair.b, mode);
    let seed = derive_seed(master, pair_tag(&pair.a, &pair.b, mode));
    let template = TileSystem::pair(pair.a, pair.b, mode.clone(), 0.0)?;
    let mut rec = CatalogueRecord {
        pair: *pair,
        mode: mode.clone(),
        flags,
        critical: false,
        dimensional_transition: false,
        label: PairLabel::NonInteracting,
        f_c: None,
        bracket: None,
        direction: None,
        fractal_dimension: None,
        fractal_r2: None,
        density_min: 0.0,
        density_max: 0.0,
        density_trend_p: 1.0,
        inconclusive: Vec::new(),
        grid: Vec::new(),
        master_seed: master,
        params: *params,
    };
    if flags.non_interacting {
        return Ok(rec);
    }
    let (grid, slopes) = scan_pair(&template, params, seed)?;
    let th = params.threshold;

    // Points where the seed cannot grow say nothing about the mixture and are
    // left out of every statistic below.
    let live: Vec<bool> = grid.iter().map(|p| !template.with_f(p.f).map_or(true, |s| s.seed_is_terminal())).collect();
    let live_grid: Vec<GridPoint> = grid.iter().zip(&live).filter(|(_, l)| **l).map(|(p, _)| p.clone()).collect();
    let live_slopes: Vec<SlopeEstimate> =
        slopes.iter().zip(&live).filter(|(_, l)| **l).map(|(e, _)| e.clone()).collect();
    let densities: Vec<f64> = live_grid.iter().map(|p| p.mean_density).collect();
    rec.density_min = densities.iter().copied().fold(f64::INFINITY, f64::min);
    rec.density_max = densities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (_, _, p) = mann_kendall(&densities);
    rec.density_trend_p = p;

    // In seed-dependent sets f only picks the first tiles: any f > 0 already
    // allows unbounded growth, and the density is a mixture of the two
    // components. Neither counts as a transition.
    let seed_stage = flags.seed_dependent || flags.extended_seed_dependent;

    // Critical: a persistent sign change whose two sides reach the bound and
    // unbound thresholds somewhere on the grid.
    let transitions = if seed_stage { Vec::new() } else { persistent_transitions(&live_slopes) };
    if seed_stage && !persistent_transitions(&live_slopes).is_empty() {
        rec.inconclusive.push("slope changes sign, attributed to the seed choice".into());
    }
    if let Some(&i) = transitions.first() {
        let (grid, slopes) = (&live_grid, &live_slopes);
        let bound_below = slopes[i].phase() == Phase::Bound;
        let (below, above) = grid.split_at(i + 1);
        let (bound_side, unbound_side) = if bound_below { (below, above) } else { (above, below) };
        let bound_ok = bound_side.iter().any(|p| is_bound(p, th));
        let unbound_ok = unbound_side.iter().any(|p| is_unbound(p, th));
        if bound_ok && unbound_ok {
            rec.critical = true;
            let fc_params = FcParams { slope: slope_params(params), tol: params.tol, grid_step: params.grid_step };
            if let Some(fc) = refine_fc(&template, slopes, &fc_params, seed)? {
                rec.f_c = Some(fc.f_c);
                rec.bracket = Some(fc.bracket);
                rec.direction = Some(fc.direction);
            }
        } else {
            rec.inconclusive.push(format!(
                "slope changes sign near f = {:.2} but the {} side never reaches the {th} run threshold",
                grid[i].f,
                if bound_ok { "unbound" } else { "bound" }
            ));
        }
        if transitions.len() > 1 {
            rec.inconclusive.push(format!("{} further slope sign changes", transitions.len() - 1));
        }
    }

    // Dimensional: no critical point, unbound at every interior f, and a
    // significant monotone density change of sufficient size.
    if !rec.critical {
        let interior = &grid[1..grid.len() - 1];
        let unbound_inside = interior.iter().all(|p| is_unbound(p, th));
        let change = rec.density_max - rec.density_min;
        let trend = p < params.trend_alpha;
        let qualifies = unbound_inside && trend && change >= params.min_density_change;
        rec.dimensional_transition = qualifies && !seed_stage;
        if qualifies && seed_stage {
            rec.inconclusive.push("density trend attributed to the seed choice".into());
        } else if unbound_inside
            && trend != (change >= params.min_density_change)
            && change >= params.min_density_change / 2.0
        {
            rec.inconclusive.push(format!("density change {change:.3} with trend p = {p:.3}"));
        }
    }

    if rec.critical && params.fractal_runs > 0 {
        if let Some(fc) = rec.f_c {
            if let Some(fit) = fractal_at(&template, fc, params.fractal_runs, params.fractal_n, params.rule, seed)? {
                rec.fractal_dimension = Some(fit.0);
                rec.fractal_r2 = Some(fit.1);
            }
        }
    }
    rec.label = primary_label(&flags, rec.critical, rec.dimensional_transition);
    rec.grid = grid;
    Ok(rec)
}

/// Mean box-counting dimension and mean `r^2` over runs grown to `n` at `f`.
/// Runs that terminate below the minimum extent are skipped; at most
/// `20 * runs` attempts are made.
pub fn fractal_at(
    template: &TileSystem,
    f: f64,
    runs: usize,
    n: u64,
    rule: StepRule,
    master: u64,
) -> Result<Option<(f64, f64, usize)>> {
    let sys = template.with_f(f)?;
    let seed = seed_for_f(derive_seed(master, 0xfab), f);
    let mut fits = Vec::new();
    let mut next = 0u64;
    while fits.len() < runs && next < 20 * runs as u64 {
        let batch = (runs - fits.len()).max(1) as u64;
        let found: Vec<Option<(f64, f64)>> = par_map(batch as usize, |k| {
            let mut rng = run_rng(seed, next + k as u64);
            let mut asm = Assembly::new(&sys, None, &mut rng);
            asm.run_to(n, n, rule, &mut rng);
            assembly_dimension(&asm, MIN_EXTENT).ok().map(|fit| (fit.dimension, fit.r_squared))
        });
        next += batch;
        fits.extend(found.into_iter().flatten());
    }
    fits.truncate(runs);
    if fits.is_empty() {
        return Ok(None);
    }
    let k = fits.len() as f64;
    Ok(Some((fits.iter().map(|x| x.0).sum::<f64>() / k, fits.iter().map(|x| x.1).sum::<f64>() / k, fits.len())))
}

/// Counts records by primary label.
pub fn label_counts(records: &[CatalogueRecord]) -> Vec<(PairLabel, usize)> {
    PairLabel::ALL.iter().map(|&l| (l, records.iter().filter(|r| r.label == l).count())).collect()
}

pub const CSV_HEADER: &str = "tile_a,tile_b,mode,label,non_interacting,seed_dependent,extended_seed_dependent,\
f_dep_bottleneck,f_indep_bottleneck,hdnm,random_walker,critical,dimensional_transition,f_c,fractal_dimension,\
density_min,density_max,density_f0,density_f1,density_trend_p,inconclusive";

pub fn csv_row(r: &CatalogueRecord) -> String {
    let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:.4}"));
    let fl = &r.flags;
    let d0 = r.grid.first().map(|p| p.mean_density);
    let d1 = r.grid.last().map(|p| p.mean_density);
    let quote = |s: String| format!("\"{}\"", s.replace('"', "'"));
    [
        quote(r.pair.a.to_string()),
        quote(r.pair.b.to_string()),
        r.mode.label().to_string(),
        r.label.name().to_string(),
        fl.non_interacting.to_string(),
        fl.seed_dependent.to_string(),
        fl.extended_seed_dependent.to_string(),
        fl.f_dep_bottleneck.to_string(),
        fl.f_indep_bottleneck.to_string(),
        fl.hdnm.to_string(),
        fl.random_walker.to_string(),
        r.critical.to_string(),
        r.dimensional_transition.to_string(),
        opt(r.f_c),
        opt(r.fractal_dimension),
        format!("{:.4}", r.density_min),
        format!("{:.4}", r.density_max),
        opt(d0),
        opt(d1),
        format!("{:.4}", r.density_trend_p),
        quote(r.inconclusive.join("; ")),
    ]
    .join(",")
}

/// Every (pair, mode) job of the full catalogue, in output order.
pub fn catalogue_jobs(modes: &[Interaction]) -> Vec<(TilePair, Interaction)> {
    let pairs = enumerate_pairs();
    modes.iter().flat_map(|m| pairs.iter().map(move |p| (*p, m.clone()))).collect()
}

pub fn job_key(pair: &TilePair, mode: &Interaction) -> String {
    format!("{}-{}:{}", pair.a, pair.b, mode.label())
}

/// Classifies every job not already present in `done`, calling `on_record`
/// as each finishes, and returns all records in job order.
pub fn build_catalogue(
    jobs: &[(TilePair, Interaction)],
    params: &PairParams,
    master: u64,
    done: &BTreeMap<String, CatalogueRecord>,
    on_record: &(dyn Fn(&CatalogueRecord) + Sync),
) -> Result<Vec<CatalogueRecord>> {
    let results = par_map(jobs.len(), |i| {
        let (pair, mode) = &jobs[i];
        if let Some(r) = done.get(&job_key(pair, mode)) {
            return Ok(r.clone());
        }
        let r = classify_pair(pair, mode, params, master)?;
        on_record(&r);
        Ok(r)
    });
    results.into_iter().collect()
}

/// Density of a single seed-dependent component, used by the mixing law.
pub fn single_density(tile: Tile, mode: &Interaction, reps: usize, n_max: u64, master: u64) -> f64 {
    let sys = TileSystem::single(tile, mode.clone());
    let seed = derive_seed(master, tile_tag(&tile, mode));
    let ds = par_map(reps, |i| {
        let mut rng = run_rng(seed, i as u64);
        let mut asm = Assembly::new(&sys, None, &mut rng);
        asm.run_to(n_max, n_max, StepRule::Conditioned, &mut rng);
        density(&asm)
    });
    ds.iter().sum::<f64>() / reps as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Tile {
        s.parse().unwrap()
    }

    #[test]
    fn structural_flags() {
        let f = pair_flags(&t("2,0,2,0"), &t("1,1,1,1"), &Interaction::Symmetric);
        assert!(f.seed_dependent && !f.f_dep_bottleneck && !f.random_walker);
        let f = pair_flags(&t("1,2,1,0"), &t("0,2,0,2"), &Interaction::Asymmetric);
        assert!(f.f_dep_bottleneck && !f.seed_dependent);
        let f = pair_flags(&t("1,1,0,0"), &t("1,0,1,0"), &Interaction::Symmetric);
        assert!(f.random_walker);
        let f = pair_flags(&t("2,2,0,0"), &t("1,1,1,0"), &Interaction::Asymmetric);
        assert!(f.f_indep_bottleneck);
        let f = pair_flags(&t("1,2,1,2"), &t("1,0,0,0"), &Interaction::Symmetric);
        assert!(f.extended_seed_dependent);
        assert!(!pair_flags(&t("1,2,1,2"), &t("1,0,0,0"), &Interaction::Asymmetric).extended_seed_dependent);
        // Three active faces each: below the HDNM criterion.
        assert!(!pair_flags(&t("2,1,2,0"), &t("1,2,1,0"), &Interaction::Symmetric).hdnm);
        assert!(pair_flags(&t("2,1,2,1"), &t("1,1,1,1"), &Interaction::Symmetric).hdnm);
    }

    #[test]
    fn precedence() {
        let mut f = PairFlags { random_walker: true, hdnm: true, ..Default::default() };
        assert_eq!(primary_label(&f, true, false), PairLabel::RandomWalker);
        f.random_walker = false;
        assert_eq!(primary_label(&f, true, true), PairLabel::Critical);
        assert_eq!(primary_label(&f, false, false), PairLabel::Hdnm);
        assert_eq!(primary_label(&PairFlags::default(), false, false), PairLabel::Other);
    }

    #[test]
    fn non_interacting_single() {
        let r = classify_single(t("1,0,0,0"), &Interaction::Asymmetric, &SingleParams::default(), 1);
        assert_eq!(r.class, Some(SingleClass::NonInteracting));
    }
}
