//! Analytical estimate of the critical concentration.
//!
//! Growth is expanded exactly for up to three attachments from a corner: an
//! empty cell with a colour-1 free side on its West and a neutral face on its
//! South. The mean change in free sides, as a function of `f`, changes sign
//! near the critical point.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::assembly::{neighbour, Coord};
use crate::error::{Error, Result};
use crate::poly::{q, Poly, RatFn, Q};
use crate::tiles::{opposite, Colour, Interaction, Tile, TileSystem, EAST, NORTH};

/// Number of attachments expanded.
pub const DEPTH: usize = 3;

/// How the attachment options at each step are weighted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    /// Each compatible (side, tile, orientation) option has weight `p_tile / m`
    /// for `m` current free sides; weights are not renormalized.
    #[default]
    Unnormalized,
    /// The same weights divided by their sum, so each step is conditioned on success.
    Conditioned,
}

/// True for single-colour symmetric sets and for asymmetric sets in which one
/// of the two colours appears at most once on each tile.
pub fn applicable(tiles: &[Tile], mode: &Interaction) -> bool {
    normalize_colours(tiles, mode).is_some()
}

fn colours_in(tiles: &[Tile]) -> Vec<u8> {
    let mut cs: Vec<u8> = tiles.iter().flat_map(|t| t.colours()).filter(|&c| c != 0).collect();
    cs.sort_unstable();
    cs.dedup();
    cs
}

fn count(t: &Tile, c: u8) -> usize {
    t.colours().iter().filter(|&&x| x == c).count()
}

/// Relabels colours so the corner's free side is colour 1: the single colour
/// for symmetric sets, the repeated colour for asymmetric ones.
fn normalize_colours(tiles: &[Tile], mode: &Interaction) -> Option<Vec<Tile>> {
    if tiles.len() != 2 {
        return None;
    }
    let cs = colours_in(tiles);
    let swap = |ts: &[Tile]| ts.iter().map(Tile::colour_swapped).collect::<Vec<_>>();
    match mode {
        Interaction::Symmetric if cs.len() == 1 => match cs[0] {
            1 => Some(tiles.to_vec()),
            2 => Some(swap(tiles)),
            _ => None,
        },
        Interaction::Asymmetric if cs == [1, 2] => {
            let rare = |c: u8| tiles.iter().all(|t| count(t, c) <= 1);
            if rare(2) {
                Some(tiles.to_vec())
            } else if rare(1) {
                Some(swap(tiles))
            } else {
                None
            }
        }
        _ => None,
    }
}

const PREFERRED: Tile = Tile::new([1, 2, 0, 0]);

/// Reflects both tiles when the set contains the mirror image of
/// `{1,2,0,0}` but not the tile itself; otherwise returns them unchanged.
pub fn normalize_chirality(tiles: &[Tile]) -> Vec<Tile> {
    let target = PREFERRED.rotation_canonical();
    let mirror = PREFERRED.reflected().rotation_canonical();
    let has = |c: &Tile| tiles.iter().any(|t| t.rotation_canonical() == *c);
    if !has(&target) && has(&mirror) {
        tiles.iter().map(Tile::reflected).collect()
    } else {
        tiles.to_vec()
    }
}

/// Colour and chirality normalization applied before expansion.
pub fn normalize(tiles: &[Tile], mode: &Interaction) -> Result<Vec<Tile>> {
    let ts = normalize_colours(tiles, mode).ok_or(Error::NotApplicable)?;
    Ok(normalize_chirality(&ts))
}

/// A free side inside the local neighbourhood.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalSide {
    pub cell: Coord,
    pub dir: u8,
    pub colour: Colour,
}

impl LocalSide {
    fn target(&self) -> Coord {
        neighbour(self.cell, self.dir)
    }
}

/// Local configuration around the corner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalConfig {
    /// Cells outside the expansion whose only relevant face is known.
    pub context: Vec<Coord>,
    /// Placed `(cell, tile index, orientation)` triples.
    pub placed: Vec<(Coord, usize, u8)>,
    pub free: Vec<LocalSide>,
}

impl LocalConfig {
    fn occupied(&self, c: Coord) -> bool {
        self.context.contains(&c) || self.placed.iter().any(|p| p.0 == c)
    }

    pub fn delta_a(&self) -> i64 {
        self.free.len() as i64 - 1
    }
}

/// Start state: target cell at the origin, colour-1 free side from the West
/// neighbour, neutral face from the South neighbour.
pub fn corner_start() -> LocalConfig {
    LocalConfig {
        context: vec![(-1, 0), (0, -1)],
        placed: Vec::new(),
        free: vec![LocalSide { cell: (-1, 0), dir: EAST, colour: Colour(1) }],
    }
}

/// Colour shown by the South context cell toward the origin.
pub const CORNER_NEUTRAL: (Coord, u8, Colour) = ((0, -1), NORTH, Colour(0));

/// One factor of a branch weight: tile probability over the side count,
/// optionally divided by the step's total weight.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFactor {
    pub tile: usize,
    pub sides: usize,
    pub total: Option<Poly>,
}

/// A leaf of the expansion tree.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeBranch {
    pub steps: Vec<StepFactor>,
    pub placed: Vec<(Coord, usize, u8)>,
    pub delta_a: i64,
}

impl OutcomeBranch {
    /// Branch weight at a given `f`, recomputed from its factors.
    pub fn weight_at(&self, f: &Q) -> Q {
        let p = [Q::from_integer(1.into()) - f, f.clone()];
        self.steps.iter().fold(q(1, 1), |w, s| {
            let mut w = w * &p[s.tile] / Q::from_integer(BigInt::from(s.sides));
            if let Some(t) = &s.total {
                w /= t.eval(f);
            }
            w
        })
    }
}

struct Expander<'a> {
    tiles: &'a [Tile],
    mode: &'a Interaction,
    palette: Vec<Colour>,
    probs: [Poly; 2],
    weighting: Weighting,
}

struct Option_ {
    side: usize,
    tile: usize,
    orientation: u8,
}

impl Expander<'_> {
    fn active(&self, c: Colour) -> bool {
        !c.is_neutral() && self.palette.iter().any(|&x| self.mode.binds(c, x))
    }

    fn options(&self, cfg: &LocalConfig) -> Vec<Option_> {
        let mut out = Vec::new();
        for (i, s) in cfg.free.iter().enumerate() {
            for (t, tile) in self.tiles.iter().enumerate() {
                for k in 0..4 {
                    if self.mode.binds(s.colour, tile.face_toward(opposite(s.dir), k)) {
                        out.push(Option_ { side: i, tile: t, orientation: k });
                    }
                }
            }
        }
        out
    }

    fn place(&self, cfg: &LocalConfig, o: &Option_) -> LocalConfig {
        let target = cfg.free[o.side].target();
        let mut next = cfg.clone();
        next.placed.push((target, o.tile, o.orientation));
        next.free.retain(|s| s.target() != target);
        for d in 0..4 {
            let c = self.tiles[o.tile].face_toward(d, o.orientation);
            if self.active(c) && !next.occupied(neighbour(target, d)) {
                next.free.push(LocalSide { cell: target, dir: d, colour: c });
            }
        }
        next
    }

    /// Sum of option weights `p_tile / m`.
    fn total(&self, opts: &[Option_], m: usize) -> Poly {
        let sum = opts.iter().fold(Poly::zero(), |acc, o| &acc + &self.probs[o.tile]);
        sum.scale(&q(1, m as i64))
    }

    fn mean(&self, cfg: &LocalConfig, depth: usize) -> RatFn {
        if depth == 0 || cfg.free.is_empty() {
            return RatFn::poly(Poly::from_ints(&[cfg.delta_a()]));
        }
        let m = cfg.free.len();
        let opts = self.options(cfg);
        let mut acc = RatFn::zero();
        for o in &opts {
            let child = self.mean(&self.place(cfg, o), depth - 1);
            acc = acc.add(&child.mul_poly(&self.probs[o.tile].scale(&q(1, m as i64))));
        }
        match self.weighting {
            Weighting::Unnormalized => acc,
            Weighting::Conditioned => acc.div_poly(&self.total(&opts, m)),
        }
    }

    fn leaves(&self, cfg: &LocalConfig, depth: usize, steps: &mut Vec<StepFactor>, out: &mut Vec<OutcomeBranch>) {
        if depth == 0 || cfg.free.is_empty() {
            out.push(OutcomeBranch { steps: steps.clone(), placed: cfg.placed.clone(), delta_a: cfg.delta_a() });
            return;
        }
        let m = cfg.free.len();
        let opts = self.options(cfg);
        let total = match self.weighting {
            Weighting::Unnormalized => None,
            Weighting::Conditioned => Some(self.total(&opts, m)),
        };
        for o in &opts {
            steps.push(StepFactor { tile: o.tile, sides: m, total: total.clone() });
            self.leaves(&self.place(cfg, o), depth - 1, steps, out);
            steps.pop();
        }
    }
}

fn expander<'a>(tiles: &'a [Tile], mode: &'a Interaction, weighting: Weighting) -> Expander<'a> {
    let sys = TileSystem { tiles: tiles.to_vec(), mode: mode.clone(), f: 0.5 };
    Expander { tiles, mode, palette: sys.live_colours(), probs: [Poly::from_ints(&[1, -1]), Poly::x()], weighting }
}

/// Mean change in free sides over the expansion, for already normalized tiles.
pub fn mean_delta_a_raw(tiles: &[Tile], mode: &Interaction, weighting: Weighting) -> RatFn {
    expander(tiles, mode, weighting).mean(&corner_start(), DEPTH)
}

/// Every leaf of the expansion, for already normalized tiles.
pub fn enumerate_leaves(tiles: &[Tile], mode: &Interaction, weighting: Weighting) -> Vec<OutcomeBranch> {
    let mut out = Vec::new();
    expander(tiles, mode, weighting).leaves(&corner_start(), DEPTH, &mut Vec::new(), &mut out);
    out
}

/// Mean change in free sides as an exact rational function of `f`.
pub fn mean_delta_a(tiles: &[Tile], mode: &Interaction, weighting: Weighting) -> Result<RatFn> {
    let ts = normalize(tiles, mode)?;
    Ok(mean_delta_a_raw(&ts, mode, weighting))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub system: Vec<Tile>,
    pub mode: Interaction,
    pub applicable: bool,
    pub weighting: Weighting,
    /// Normalized tiles the expansion ran on.
    pub normalized: Vec<Tile>,
    /// Coprime integer coefficients, lowest power first, of a positive
    /// multiple of the mean.
    pub numerator_coefficients: Vec<String>,
    pub mean: String,
    pub predicted_fc: Option<f64>,
    pub value_at_0: Option<f64>,
    pub value_at_1: Option<f64>,
    pub failure: Option<String>,
}

/// Numerator with the sign of the mean on `(0, 1)`, and the check that the
/// denominator does not vanish there.
pub fn signed_numerator(r: &RatFn) -> Result<Poly> {
    let (zero, one) = (q(0, 1), q(1, 1));
    if r.den.count_roots_open(&zero, &one) != 0 {
        return Err(Error::Predictor("denominator vanishes inside (0, 1)".into()));
    }
    Ok(if r.den.eval(&q(1, 2)).is_negative() { -r.num.clone() } else { r.num.clone() })
}

/// The unique root in `(0, 1)` of the mean, to within `1e-6`.
pub fn root_in_unit(r: &RatFn) -> Result<f64> {
    let num = signed_numerator(r)?;
    if num.is_zero() {
        return Err(Error::Predictor("mean change is identically zero".into()));
    }
    let roots = num.isolate_roots(&q(0, 1), &q(1, 1), &q(1, 1_000_000));
    match roots.as_slice() {
        [(lo, hi)] => Ok(((lo + hi) / q(2, 1)).to_f64().unwrap_or(f64::NAN)),
        [] => Err(Error::Predictor("no root in (0, 1)".into())),
        rs => Err(Error::Predictor(format!("{} roots in (0, 1)", rs.len()))),
    }
}

pub fn predicted_fc(tiles: &[Tile], mode: &Interaction, weighting: Weighting) -> Result<f64> {
    root_in_unit(&mean_delta_a(tiles, mode, weighting)?)
}

/// Full report for one tile set; inapplicable sets yield a record with
/// `applicable = false` rather than an error.
pub fn predict(tiles: &[Tile], mode: &Interaction, weighting: Weighting) -> Prediction {
    let mut p = Prediction {
        system: tiles.to_vec(),
        mode: mode.clone(),
        applicable: false,
        weighting,
        normalized: Vec::new(),
        numerator_coefficients: Vec::new(),
        mean: String::new(),
        predicted_fc: None,
        value_at_0: None,
        value_at_1: None,
        failure: None,
    };
    let Ok(ts) = normalize(tiles, mode) else {
        return p;
    };
    p.applicable = true;
    let r = mean_delta_a_raw(&ts, mode, weighting);
    p.normalized = ts;
    p.mean = if r.den == Poly::one() { r.num.to_string() } else { format!("({}) / ({})", r.num, r.den) };
    p.value_at_0 = r.eval(&q(0, 1)).and_then(|v| v.to_f64());
    p.value_at_1 = r.eval(&q(1, 1)).and_then(|v| v.to_f64());
    match signed_numerator(&r) {
        Ok(num) => p.numerator_coefficients = num.primitive().iter().map(BigInt::to_string).collect(),
        Err(e) => p.failure = Some(e.to_string()),
    }
    match root_in_unit(&r) {
        Ok(fc) => p.predicted_fc = Some(fc),
        Err(e) => p.failure = Some(e.to_string()),
    }
    p
}

/// Sum of leaf weights at `f`; equal to one under [`Weighting::Conditioned`].
pub fn total_weight(leaves: &[OutcomeBranch], f: &Q) -> Q {
    leaves.iter().fold(Q::zero(), |acc, l| acc + l.weight_at(f))
}
