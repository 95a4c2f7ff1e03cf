//! The stochastic growth engine.
//!
//! Growth starts from a seed tile at the origin with orientation 0. Each
//! attempt draws a tile type with probabilities `(1 - f, f)`, a uniform
//! orientation and a uniform free side; the tile attaches to the empty cell
//! across that side if its facing colour binds the side's colour. Only the
//! sampled side is tested: every other face the new tile touches becomes an
//! inert contact. Bonds are permanent and growth stops once no free side is
//! left.
//!
//! Free sides are kept in one bucket per colour, with each occupied cell
//! remembering the bucket index of its own free sides. That makes uniform
//! sampling, removal and per-colour weighting all O(1).

use std::collections::BTreeSet;

use rand::Rng;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{run_rng, SimRng};
use crate::tiles::{opposite, Colour, Interaction, Tile, TileSystem, OFFSETS};

pub type Coord = (i32, i32);

/// Default sampling stride of run traces, in attachments.
pub const DEFAULT_STRIDE: u64 = 100;

const NO_SLOT: u32 = u32::MAX;

#[inline]
pub fn neighbour(c: Coord, dir: u8) -> Coord {
    let (dx, dy) = OFFSETS[dir as usize];
    (c.0 + dx, c.1 + dy)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Placement {
    pub pos: Coord,
    /// 0 for tile A, 1 for tile B.
    pub tile: u8,
    /// Clockwise quarter turns.
    pub orientation: u8,
}

impl Serialize for Placement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.pos.0, self.pos.1, self.tile as i32, self.orientation as i32].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Placement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y, tile, orientation] = <[i32; 4]>::deserialize(d)?;
        if !(0..2).contains(&tile) || !(0..4).contains(&orientation) {
            return Err(serde::de::Error::custom("tile must be 0|1 and orientation 0..3"));
        }
        Ok(Placement { pos: (x, y), tile: tile as u8, orientation: orientation as u8 })
    }
}

/// A coloured, unoccupied neighbour side of a placed tile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeSide {
    pub cell: Coord,
    pub dir: u8,
    pub colour: Colour,
}

impl FreeSide {
    pub fn target(&self) -> Coord {
        neighbour(self.cell, self.dir)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepEvent {
    Attached { placement: Placement, delta_a: i32 },
    Rejected,
    Terminated,
}

/// Which tile seeds the assembly when the random draw is overridden.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeedTile {
    A,
    B,
}

/// How successive attachments are generated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepRule {
    /// Literal attempt/reject loop.
    Attempt,
    /// Draws directly from the distribution of successful attempts.
    #[default]
    Conditioned,
}

/// Per-system sampling tables.
#[derive(Clone, Debug)]
struct Kinetics {
    tiles: Vec<Tile>,
    mode: Interaction,
    f: f64,
    /// Indexed by colour value.
    active: Vec<bool>,
    /// For each colour: every (tile, base face, tile probability) that binds it.
    binders: Vec<Vec<(u8, u8, f64)>>,
    binder_mass: Vec<f64>,
    /// Success probability of a single attempt aimed at a side of this colour.
    side_weight: Vec<f64>,
}

impl Kinetics {
    fn new(sys: &TileSystem) -> Kinetics {
        let max_colour = sys.tiles.iter().flat_map(|t| t.faces.iter()).map(|c| c.0).max().unwrap_or(0) as usize;
        let probs = sys.probabilities();
        let mut active = vec![false; max_colour + 1];
        let mut binders = vec![Vec::new(); max_colour + 1];
        for c in 1..=max_colour {
            let colour = Colour(c as u8);
            active[c] = sys.is_active(colour);
            for (ti, (tile, &p)) in sys.tiles.iter().zip(&probs).enumerate() {
                if p <= 0.0 {
                    continue;
                }
                for (fi, &face) in tile.faces.iter().enumerate() {
                    if sys.mode.binds(colour, face) {
                        binders[c].push((ti as u8, fi as u8, p));
                    }
                }
            }
        }
        let binder_mass: Vec<f64> = binders.iter().map(|b| b.iter().map(|&(_, _, p)| p).sum()).collect();
        let side_weight = binder_mass.iter().map(|m| m / 4.0).collect();
        Kinetics {
            tiles: sys.tiles.clone(),
            mode: sys.mode.clone(),
            f: sys.f,
            active,
            binders,
            binder_mass,
            side_weight,
        }
    }

    #[inline]
    fn is_active(&self, c: Colour) -> bool {
        self.active.get(c.0 as usize).copied().unwrap_or(false)
    }
}

#[derive(Clone, Copy, Debug)]
struct Cell {
    tile: u8,
    orientation: u8,
    slots: [u32; 4],
}

/// A growing structure: sparse occupancy plus the live free-side set.
#[derive(Clone, Debug)]
pub struct Assembly {
    kin: Kinetics,
    cells: FxHashMap<Coord, Cell>,
    placements: Vec<Placement>,
    buckets: Vec<Vec<FreeSide>>,
    free_count: usize,
}

impl Assembly {
    /// Places the seed at the origin. The seed type is drawn with
    /// probabilities `(1 - f, f)` unless `seed` overrides it.
    pub fn new<R: Rng>(sys: &TileSystem, seed: Option<SeedTile>, rng: &mut R) -> Assembly {
        let kin = Kinetics::new(sys);
        let tile = match (seed, sys.tiles.len()) {
            (_, 1) => 0,
            (Some(SeedTile::A), _) => 0,
            (Some(SeedTile::B), _) => 1,
            (None, _) => u8::from(rng.gen::<f64>() < sys.f),
        };
        let buckets = vec![Vec::new(); kin.active.len()];
        let mut asm = Assembly { kin, cells: FxHashMap::default(), placements: Vec::new(), buckets, free_count: 0 };
        asm.place(Placement { pos: (0, 0), tile, orientation: 0 });
        asm
    }

    /// Rebuilds an assembly from a placement list, in order.
    pub fn from_placements(sys: &TileSystem, placements: &[Placement]) -> Result<Assembly> {
        let kin = Kinetics::new(sys);
        let buckets = vec![Vec::new(); kin.active.len()];
        let mut asm = Assembly { kin, cells: FxHashMap::default(), placements: Vec::new(), buckets, free_count: 0 };
        for &p in placements {
            if p.tile as usize >= sys.tiles.len() || p.orientation > 3 {
                return Err(Error::Parameter(format!("invalid placement {p:?}")));
            }
            if asm.cells.contains_key(&p.pos) {
                return Err(Error::Parameter(format!("cell {:?} placed twice", p.pos)));
            }
            asm.place(p);
        }
        Ok(asm)
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.kin.tiles
    }

    pub fn mode(&self) -> &Interaction {
        &self.kin.mode
    }

    pub fn f(&self) -> f64 {
        self.kin.f
    }

    /// Number of placed tiles, `N`.
    pub fn tiles_placed(&self) -> usize {
        self.placements.len()
    }

    /// Number of free sides, `a`.
    pub fn free_count(&self) -> usize {
        self.free_count
    }

    pub fn is_terminated(&self) -> bool {
        self.free_count == 0
    }

    /// Placements in attachment order; the seed comes first.
    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    pub fn seed_tile(&self) -> u8 {
        self.placements[0].tile
    }

    pub fn get(&self, pos: Coord) -> Option<Placement> {
        self.cells.get(&pos).map(|c| Placement { pos, tile: c.tile, orientation: c.orientation })
    }

    pub fn is_occupied(&self, pos: Coord) -> bool {
        self.cells.contains_key(&pos)
    }

    /// World-facing colour of the tile at `pos` in direction `dir`.
    pub fn face_at(&self, pos: Coord, dir: u8) -> Option<Colour> {
        self.cells.get(&pos).map(|c| self.kin.tiles[c.tile as usize].face_toward(dir, c.orientation))
    }

    pub fn free_sides(&self) -> impl Iterator<Item = &FreeSide> {
        self.buckets.iter().flatten()
    }

    /// The incrementally maintained free set as an ordered set.
    pub fn free_set(&self) -> BTreeSet<FreeSide> {
        self.free_sides().copied().collect()
    }

    /// Recomputes the free set from scratch by scanning every placed tile.
    pub fn recount_free_sides(&self) -> BTreeSet<FreeSide> {
        let mut out = BTreeSet::new();
        for p in &self.placements {
            let tile = &self.kin.tiles[p.tile as usize];
            for dir in 0..4 {
                let colour = tile.face_toward(dir, p.orientation);
                if self.kin.is_active(colour) && !self.cells.contains_key(&neighbour(p.pos, dir)) {
                    out.insert(FreeSide { cell: p.pos, dir, colour });
                }
            }
        }
        out
    }

    fn side_at(&self, mut idx: usize) -> FreeSide {
        for bucket in &self.buckets {
            if idx < bucket.len() {
                return bucket[idx];
            }
            idx -= bucket.len();
        }
        unreachable!("free side index out of range")
    }

    /// One literal attempt: draw type, orientation and side, then accept or reject.
    pub fn attempt_step<R: Rng>(&mut self, rng: &mut R) -> StepEvent {
        if self.free_count == 0 {
            return StepEvent::Terminated;
        }
        let tile = if self.kin.tiles.len() == 2 { u8::from(rng.gen::<f64>() < self.kin.f) } else { 0 };
        let orientation: u8 = rng.gen_range(0..4);
        let side = self.side_at(rng.gen_range(0..self.free_count));
        let facing = self.kin.tiles[tile as usize].face_toward(opposite(side.dir), orientation);
        if !self.kin.mode.binds(side.colour, facing) {
            return StepEvent::Rejected;
        }
        let placement = Placement { pos: side.target(), tile, orientation };
        let delta_a = self.place(placement);
        StepEvent::Attached { placement, delta_a }
    }

    /// One attachment drawn from the attempt process conditioned on success.
    ///
    /// A side of colour `c` is chosen with probability proportional to the
    /// chance that an attempt aimed at it succeeds; the tile and orientation
    /// are then drawn among the compatible choices. Never rejects.
    pub fn conditioned_step<R: Rng>(&mut self, rng: &mut R) -> StepEvent {
        if self.free_count == 0 {
            return StepEvent::Terminated;
        }
        let total: f64 = self.buckets.iter().zip(&self.kin.side_weight).map(|(b, w)| b.len() as f64 * w).sum();
        let mut u = rng.gen::<f64>() * total;
        let mut colour = 0;
        for (c, b) in self.buckets.iter().enumerate() {
            if b.is_empty() {
                continue;
            }
            colour = c;
            let mass = b.len() as f64 * self.kin.side_weight[c];
            if u < mass {
                break;
            }
            u -= mass;
        }
        let bucket = &self.buckets[colour];
        let side = bucket[rng.gen_range(0..bucket.len())];

        let binders = &self.kin.binders[colour];
        let mut v = rng.gen::<f64>() * self.kin.binder_mass[colour];
        let mut choice = binders[binders.len() - 1];
        for &b in binders {
            if v < b.2 {
                choice = b;
                break;
            }
            v -= b.2;
        }
        let (tile, face, _) = choice;
        let orientation = (opposite(side.dir) + 4 - face) & 3;
        let placement = Placement { pos: side.target(), tile, orientation };
        let delta_a = self.place(placement);
        StepEvent::Attached { placement, delta_a }
    }

    pub fn step<R: Rng>(&mut self, rule: StepRule, rng: &mut R) -> StepEvent {
        match rule {
            StepRule::Attempt => self.attempt_step(rng),
            StepRule::Conditioned => self.conditioned_step(rng),
        }
    }

    /// Puts a tile into an empty cell and updates the free set. Returns the
    /// change in free-side count.
    fn place(&mut self, p: Placement) -> i32 {
        let before = self.free_count as i32;
        let tile = self.kin.tiles[p.tile as usize];
        let mut exposed = [false; 4];
        for dir in 0..4u8 {
            let n = neighbour(p.pos, dir);
            match self.cells.get(&n) {
                Some(cell) => {
                    let slot = cell.slots[opposite(dir) as usize];
                    if slot != NO_SLOT {
                        let colour = self.kin.tiles[cell.tile as usize].face_toward(opposite(dir), cell.orientation);
                        self.remove_side(colour.0 as usize, slot as usize);
                    }
                }
                None => exposed[dir as usize] = self.kin.is_active(tile.face_toward(dir, p.orientation)),
            }
        }
        self.cells.insert(p.pos, Cell { tile: p.tile, orientation: p.orientation, slots: [NO_SLOT; 4] });
        for dir in 0..4u8 {
            if exposed[dir as usize] {
                let colour = tile.face_toward(dir, p.orientation);
                let bucket = &mut self.buckets[colour.0 as usize];
                let idx = bucket.len() as u32;
                bucket.push(FreeSide { cell: p.pos, dir, colour });
                self.free_count += 1;
                self.cells.get_mut(&p.pos).unwrap().slots[dir as usize] = idx;
            }
        }
        self.placements.push(p);
        self.free_count as i32 - before
    }

    fn remove_side(&mut self, colour: usize, idx: usize) {
        let bucket = &mut self.buckets[colour];
        let removed = bucket.swap_remove(idx);
        let moved = bucket.get(idx).copied();
        self.free_count -= 1;
        self.cells.get_mut(&removed.cell).unwrap().slots[removed.dir as usize] = NO_SLOT;
        if let Some(m) = moved {
            self.cells.get_mut(&m.cell).unwrap().slots[m.dir as usize] = idx as u32;
        }
    }

    /// Steps until termination or `n_max` tiles, sampling `(N, a)` at the
    /// start, every `stride` attachments and at the end.
    pub fn run_to<R: Rng>(&mut self, n_max: u64, stride: u64, rule: StepRule, rng: &mut R) -> RunTrace {
        let stride = stride.max(1);
        let mut samples = vec![(self.tiles_placed() as u64, self.free_count as u64)];
        while (self.tiles_placed() as u64) < n_max {
            match self.step(rule, rng) {
                StepEvent::Terminated => break,
                StepEvent::Rejected => {}
                StepEvent::Attached { .. } => {
                    let n = self.tiles_placed() as u64;
                    if n.is_multiple_of(stride) {
                        samples.push((n, self.free_count as u64));
                    }
                }
            }
        }
        let end = (self.tiles_placed() as u64, self.free_count as u64);
        if samples.last() != Some(&end) {
            samples.push(end);
        }
        RunTrace { samples, terminated: self.is_terminated(), n_final: self.tiles_placed() as u64 }
    }

    /// Placements sorted by position, with each orientation reduced modulo
    /// the tile's rotational period. The seed pins position and orientation,
    /// so two assemblies are the same structure iff these lists are equal.
    pub fn canonical_structure(&self) -> Vec<Placement> {
        let periods: Vec<u8> = self.kin.tiles.iter().map(Tile::rotational_period).collect();
        let mut out: Vec<Placement> = self
            .placements
            .iter()
            .map(|p| Placement { orientation: p.orientation % periods[p.tile as usize], ..*p })
            .collect();
        out.sort();
        out
    }

    /// Normal form up to lattice rotation and translation, for comparing
    /// structures grown from different seeds.
    pub fn rigid_normal_form(&self) -> Vec<Placement> {
        let periods: Vec<u8> = self.kin.tiles.iter().map(Tile::rotational_period).collect();
        (0..4u8)
            .map(|turns| {
                let mut ps: Vec<Placement> = self
                    .placements
                    .iter()
                    .map(|p| {
                        let mut pos = p.pos;
                        for _ in 0..turns {
                            pos = (pos.1, -pos.0);
                        }
                        Placement {
                            pos,
                            tile: p.tile,
                            orientation: (p.orientation + turns) % 4 % periods[p.tile as usize],
                        }
                    })
                    .collect();
                let min_x = ps.iter().map(|p| p.pos.0).min().unwrap();
                let min_y = ps.iter().map(|p| p.pos.1).min().unwrap();
                for p in &mut ps {
                    p.pos = (p.pos.0 - min_x, p.pos.1 - min_y);
                }
                ps.sort();
                ps
            })
            .min()
            .unwrap()
    }

    /// Inclusive bounding box `(min_x, min_y, max_x, max_y)`.
    pub fn bounds(&self) -> (i32, i32, i32, i32) {
        self.placements.iter().fold((i32::MAX, i32::MAX, i32::MIN, i32::MIN), |b, p| {
            (b.0.min(p.pos.0), b.1.min(p.pos.1), b.2.max(p.pos.0), b.3.max(p.pos.1))
        })
    }

    pub fn occupied(&self) -> impl Iterator<Item = Coord> + '_ {
        self.placements.iter().map(|p| p.pos)
    }
}

/// `(N, a)` samples of one run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunTrace {
    pub samples: Vec<(u64, u64)>,
    pub terminated: bool,
    pub n_final: u64,
}

impl RunTrace {
    /// `a` at `n` attachments, zero after termination. Values between
    /// samples take the most recent sample.
    pub fn a_at(&self, n: u64) -> u64 {
        if self.terminated && n >= self.n_final {
            return 0;
        }
        match self.samples.binary_search_by_key(&n, |s| s.0) {
            Ok(i) => self.samples[i].1,
            Err(0) => self.samples[0].1,
            Err(i) => self.samples[i - 1].1,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,a\n");
        for (n, a) in &self.samples {
            out.push_str(&format!("{n},{a}\n"));
        }
        out
    }
}

/// Convenience: a fresh assembly and its private random stream.
pub fn new_assembly(sys: &TileSystem, rng_seed: u64, seed: Option<SeedTile>) -> (Assembly, SimRng) {
    let mut rng = run_rng(rng_seed, 0);
    let asm = Assembly::new(sys, seed, &mut rng);
    (asm, rng)
}

/// Outcome of a single seeded run.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub assembly: Assembly,
    pub trace: RunTrace,
}

/// Runs stream `index` of `master` to completion or `n_max`.
pub fn simulate(sys: &TileSystem, master: u64, index: u64, n_max: u64, stride: u64, rule: StepRule) -> RunOutcome {
    let mut rng = run_rng(master, index);
    let mut assembly = Assembly::new(sys, None, &mut rng);
    let trace = assembly.run_to(n_max, stride, rule, &mut rng);
    RunOutcome { assembly, trace }
}

/// JSON structure file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureFile {
    pub system: Vec<Tile>,
    pub mode: Interaction,
    pub f: f64,
    pub rng_seed: u64,
    pub placements: Vec<Placement>,
    pub terminated: bool,
    #[serde(rename = "N_final")]
    pub n_final: u64,
}

impl StructureFile {
    pub fn from_assembly(asm: &Assembly, rng_seed: u64) -> StructureFile {
        StructureFile {
            system: asm.tiles().to_vec(),
            mode: asm.mode().clone(),
            f: asm.f(),
            rng_seed,
            placements: asm.placements().to_vec(),
            terminated: asm.is_terminated(),
            n_final: asm.tiles_placed() as u64,
        }
    }

    pub fn system(&self) -> Result<TileSystem> {
        TileSystem::new(self.system.clone(), self.mode.clone(), self.f)
    }

    pub fn to_assembly(&self) -> Result<Assembly> {
        Assembly::from_placements(&self.system()?, &self.placements)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiles::{EAST, NORTH, SOUTH, WEST};

    fn tile(s: &str) -> Tile {
        s.parse().unwrap()
    }

    fn single(s: &str, mode: Interaction) -> TileSystem {
        TileSystem::single(tile(s), mode)
    }

    #[test]
    fn seed_only_counts() {
        let (asm, _) = new_assembly(&single("1,2,0,0", Interaction::Symmetric), 1, None);
        assert_eq!(asm.tiles_placed(), 1);
        assert_eq!(asm.free_count(), 2);
        let (asm, _) = new_assembly(&single("1,1,1,1", Interaction::Symmetric), 1, None);
        assert_eq!(asm.recount_free_sides().len(), 4);
    }

    #[test]
    fn seed_choice_follows_f_and_override() {
        let sys = TileSystem::pair(tile("2,0,2,0"), tile("1,1,1,1"), Interaction::Symmetric, 1.0).unwrap();
        for s in 0..20 {
            let (asm, _) = new_assembly(&sys, s, None);
            assert_eq!(asm.seed_tile(), 1);
            assert_eq!(asm.free_count(), 4);
        }
        let (asm, _) = new_assembly(&sys, 3, Some(SeedTile::A));
        assert_eq!(asm.seed_tile(), 0);
        // Nothing drawable at f = 1 binds colour 2.
        assert_eq!(asm.free_count(), 0);
        assert!(asm.is_terminated());
        let half = sys.with_f(0.5).unwrap();
        let (asm, _) = new_assembly(&half, 3, Some(SeedTile::A));
        assert_eq!(asm.free_count(), 2);
    }

    #[test]
    fn lone_face_closes_with_delta_minus_one() {
        let sys = single("1,0,0,0", Interaction::Symmetric);
        let (mut asm, mut rng) = new_assembly(&sys, 9, None);
        let ev = loop {
            match asm.attempt_step(&mut rng) {
                StepEvent::Rejected => continue,
                ev => break ev,
            }
        };
        match ev {
            StepEvent::Attached { placement, delta_a } => {
                assert_eq!(delta_a, -1);
                assert_eq!(placement.pos, (0, 1));
                assert_eq!(placement.orientation, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(asm.attempt_step(&mut rng), StepEvent::Terminated);
        assert_eq!(asm.conditioned_step(&mut rng), StepEvent::Terminated);
    }

    #[test]
    fn enclosed_cell_has_no_free_sides() {
        let sys = single("1,1,1,1", Interaction::Symmetric);
        let ring: Vec<Placement> = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)]
            .into_iter()
            .map(|pos| Placement { pos, tile: 0, orientation: 0 })
            .collect();
        let asm = Assembly::from_placements(&sys, &ring).unwrap();
        assert!(asm.free_sides().all(|s| s.cell != (0, 0)));
        assert_eq!(asm.free_set(), asm.recount_free_sides());
        assert_eq!(asm.free_count(), 12);
    }

    #[test]
    fn inert_contacts_never_become_free() {
        // Asymmetric {1,2,0,0}: closing the 2x2 square leaves a 1 facing a 2
        // and nothing exposed.
        let sys = single("1,2,0,0", Interaction::Asymmetric);
        let (mut asm, mut rng) = new_assembly(&sys, 5, None);
        let trace = asm.run_to(100, 1, StepRule::Attempt, &mut rng);
        assert!(trace.terminated);
        assert_eq!(asm.tiles_placed(), 4);
        assert_eq!(trace.samples.last(), Some(&(4, 0)));
    }

    #[test]
    fn faces_follow_orientation() {
        let sys = single("1,2,0,0", Interaction::Symmetric);
        let asm = Assembly::from_placements(&sys, &[Placement { pos: (0, 0), tile: 0, orientation: 1 }]).unwrap();
        assert_eq!(asm.face_at((0, 0), NORTH), Some(Colour(0)));
        assert_eq!(asm.face_at((0, 0), EAST), Some(Colour(1)));
        assert_eq!(asm.face_at((0, 0), SOUTH), Some(Colour(2)));
        assert_eq!(asm.face_at((0, 0), WEST), Some(Colour(0)));
    }

    #[test]
    fn duplicate_placement_is_rejected() {
        let sys = single("1,1,1,1", Interaction::Symmetric);
        let p = Placement { pos: (0, 0), tile: 0, orientation: 0 };
        assert!(Assembly::from_placements(&sys, &[p, p]).is_err());
    }

    #[test]
    fn canonical_structure_reduces_symmetric_orientations() {
        let sys = single("1,2,1,2", Interaction::Asymmetric);
        let a = Assembly::from_placements(
            &sys,
            &[Placement { pos: (0, 0), tile: 0, orientation: 0 }, Placement { pos: (1, 0), tile: 0, orientation: 1 }],
        )
        .unwrap();
        let b = Assembly::from_placements(
            &sys,
            &[Placement { pos: (0, 0), tile: 0, orientation: 0 }, Placement { pos: (1, 0), tile: 0, orientation: 3 }],
        )
        .unwrap();
        assert_eq!(a.canonical_structure(), b.canonical_structure());
    }

    #[test]
    fn dimer_is_deterministic() {
        let sys = single("1,0,0,0", Interaction::Symmetric);
        let forms: BTreeSet<_> =
            (0..20).map(|s| simulate(&sys, s, 0, 100, 10, StepRule::Attempt).assembly.canonical_structure()).collect();
        assert_eq!(forms.len(), 1);
        assert_eq!(forms.into_iter().next().unwrap().len(), 2);
    }

    #[test]
    fn bound_non_deterministic_walker_varies() {
        let sys = single("1,1,0,0", Interaction::Symmetric);
        let forms: BTreeSet<_> = (0..20)
            .map(|s| simulate(&sys, s, 0, 10_000, 100, StepRule::Conditioned).assembly.canonical_structure())
            .collect();
        assert!(forms.len() > 1);
    }

    #[test]
    fn trace_lookup_pads_terminated_runs_with_zero() {
        let t = RunTrace { samples: vec![(1, 2), (100, 5), (150, 0)], terminated: true, n_final: 150 };
        assert_eq!(t.a_at(1), 2);
        assert_eq!(t.a_at(120), 5);
        assert_eq!(t.a_at(10_000), 0);
        assert_eq!(t.to_csv(), "N,a\n1,2\n100,5\n150,0\n");
    }

    #[test]
    fn replay_is_bit_exact() {
        let sys = TileSystem::pair(tile("1,2,0,0"), tile("1,2,1,0"), Interaction::Asymmetric, 0.6).unwrap();
        for rule in [StepRule::Attempt, StepRule::Conditioned] {
            let a = simulate(&sys, 11, 4, 2_000, 10, rule);
            let b = simulate(&sys, 11, 4, 2_000, 10, rule);
            assert_eq!(a.trace, b.trace);
            assert_eq!(a.assembly.placements(), b.assembly.placements());
        }
    }

    #[test]
    fn structure_file_round_trip() {
        let sys = TileSystem::pair(tile("1,2,0,0"), tile("1,2,1,0"), Interaction::Asymmetric, 0.6).unwrap();
        let run = simulate(&sys, 2, 0, 200, 10, StepRule::Conditioned);
        let file = StructureFile::from_assembly(&run.assembly, 2);
        let json = serde_json::to_string(&file).unwrap();
        assert!(json.contains("\"N_final\""));
        let back: StructureFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back, file);
        let rebuilt = back.to_assembly().unwrap();
        assert_eq!(rebuilt.free_set(), run.assembly.free_set());
    }
}
