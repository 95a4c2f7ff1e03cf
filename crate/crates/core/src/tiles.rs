//! Tiles, interaction rules, symmetry transforms and exhaustive enumeration.
//!
//! A tile is a unit square with four coloured faces listed clockwise from
//! North: `(N, E, S, W)`. Colour `0` is neutral and never binds. A tile placed
//! with orientation `k` (clockwise quarter turns) shows base face
//! `(d - k) mod 4` in world direction `d`, so rotation is a pure index shift.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// World directions, clockwise from North.
pub const NORTH: u8 = 0;
pub const EAST: u8 = 1;
pub const SOUTH: u8 = 2;
pub const WEST: u8 = 3;

/// Unit lattice offset for each direction.
pub const OFFSETS: [(i32, i32); 4] = [(0, 1), (1, 0), (0, -1), (-1, 0)];

#[inline]
pub fn opposite(dir: u8) -> u8 {
    (dir + 2) & 3
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Colour(pub u8);

impl Colour {
    pub const NEUTRAL: Colour = Colour(0);

    #[inline]
    pub fn is_neutral(self) -> bool {
        self.0 == 0
    }

    /// Exchanges colours 1 and 2; every other colour is fixed.
    pub fn swapped(self) -> Colour {
        match self.0 {
            1 => Colour(2),
            2 => Colour(1),
            c => Colour(c),
        }
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A symmetric binary relation over nonzero colours `1..=max_colour`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BindingMatrix {
    max_colour: u8,
    pairs: Vec<(u8, u8)>,
    table: Vec<bool>,
}

impl BindingMatrix {
    /// Builds the relation from unordered binding pairs such as `(1, 2)`.
    /// Binding is mutual, so `(a, b)` also makes `b` bind `a`.
    pub fn from_pairs(pairs: &[(u8, u8)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::BindingMatrix("no binding pairs".into()));
        }
        let mut norm = BTreeSet::new();
        for &(a, b) in pairs {
            if a == 0 || b == 0 {
                return Err(Error::BindingMatrix("colour 0 is neutral and cannot bind".into()));
            }
            norm.insert((a.min(b), a.max(b)));
        }
        let max_colour = norm.iter().map(|&(_, b)| b).max().unwrap_or(0);
        let side = max_colour as usize + 1;
        let mut table = vec![false; side * side];
        for &(a, b) in &norm {
            table[a as usize * side + b as usize] = true;
            table[b as usize * side + a as usize] = true;
        }
        Ok(BindingMatrix { max_colour, pairs: norm.into_iter().collect(), table })
    }

    /// Parses a JSON binding list, e.g. `[[1,2],[3,4],[5,6]]`.
    pub fn from_json(text: &str) -> Result<Self> {
        let pairs: Vec<(u8, u8)> = serde_json::from_str(text)
            .map_err(|e| Error::BindingMatrix(format!("expected a list of colour pairs: {e}")))?;
        Self::from_pairs(&pairs)
    }

    pub fn max_colour(&self) -> u8 {
        self.max_colour
    }

    pub fn pairs(&self) -> &[(u8, u8)] {
        &self.pairs
    }

    #[inline]
    pub fn binds(&self, a: Colour, b: Colour) -> bool {
        let side = self.max_colour as usize + 1;
        let (a, b) = (a.0 as usize, b.0 as usize);
        a < side && b < side && self.table[a * side + b]
    }
}

/// How nonzero colours bind each other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Interaction {
    /// Every nonzero colour binds itself only (identity matrix).
    Symmetric,
    /// Colour 1 binds colour 2 and neither binds itself (anti-diagonal).
    Asymmetric,
    Matrix(BindingMatrix),
}

impl Interaction {
    /// Infallible binding test. Colours outside the rule never bind.
    #[inline]
    pub fn binds(&self, a: Colour, b: Colour) -> bool {
        if a.is_neutral() || b.is_neutral() {
            return false;
        }
        match self {
            Interaction::Symmetric => a == b,
            Interaction::Asymmetric => (a.0 == 1 && b.0 == 2) || (a.0 == 2 && b.0 == 1),
            Interaction::Matrix(m) => m.binds(a, b),
        }
    }

    /// Binding test that rejects colours the rule cannot describe.
    pub fn interacts(&self, a: Colour, b: Colour) -> Result<bool> {
        self.check_colour(a)?;
        self.check_colour(b)?;
        Ok(self.binds(a, b))
    }

    pub fn check_colour(&self, c: Colour) -> Result<()> {
        if let Interaction::Matrix(m) = self {
            if c.0 > m.max_colour {
                return Err(Error::ColourOutOfRange { colour: c.0, max: m.max_colour });
            }
        }
        Ok(())
    }

    /// Short name used on the command line and in output files.
    pub fn label(&self) -> &'static str {
        match self {
            Interaction::Symmetric => "sym",
            Interaction::Asymmetric => "asym",
            Interaction::Matrix(_) => "matrix",
        }
    }

    /// Parses `sym`, `asym`, `matrix:<path>` or a bare path to a JSON binding list.
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "sym" | "symmetric" => Ok(Interaction::Symmetric),
            "asym" | "asymmetric" => Ok(Interaction::Asymmetric),
            other => {
                let path = other.strip_prefix("matrix:").unwrap_or(other);
                if path.trim_start().starts_with('[') {
                    return Ok(Interaction::Matrix(BindingMatrix::from_json(path)?));
                }
                if !Path::new(path).is_file() {
                    return Err(Error::ModeSyntax(text.to_string()));
                }
                let body = std::fs::read_to_string(path)?;
                Ok(Interaction::Matrix(BindingMatrix::from_json(&body)?))
            }
        }
    }
}

impl Serialize for Interaction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Interaction::Matrix(m) => {
                use serde::ser::SerializeMap;
                let mut map = s.serialize_map(Some(1))?;
                map.serialize_entry("matrix", m.pairs())?;
                map.end()
            }
            other => s.serialize_str(other.label()),
        }
    }
}

impl<'de> Deserialize<'de> for Interaction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Name(String),
            Matrix { matrix: Vec<(u8, u8)> },
        }
        match Repr::deserialize(d)? {
            Repr::Name(n) => match n.as_str() {
                "sym" | "symmetric" => Ok(Interaction::Symmetric),
                "asym" | "asymmetric" => Ok(Interaction::Asymmetric),
                _ => Err(serde::de::Error::custom(format!("unknown interaction mode `{n}`"))),
            },
            Repr::Matrix { matrix } => {
                BindingMatrix::from_pairs(&matrix).map(Interaction::Matrix).map_err(serde::de::Error::custom)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tile {
    pub faces: [Colour; 4],
}

impl Tile {
    pub const fn new(faces: [u8; 4]) -> Tile {
        Tile { faces: [Colour(faces[0]), Colour(faces[1]), Colour(faces[2]), Colour(faces[3])] }
    }

    pub fn colours(&self) -> [u8; 4] {
        self.faces.map(|c| c.0)
    }

    /// Colour shown in world direction `dir` when placed with `orientation`.
    #[inline]
    pub fn face_toward(&self, dir: u8, orientation: u8) -> Colour {
        self.faces[((dir + 4 - orientation) & 3) as usize]
    }

    /// Clockwise rotation by `quarter_turns`.
    pub fn rotated(&self, quarter_turns: u8) -> Tile {
        let r = quarter_turns as usize & 3;
        Tile { faces: std::array::from_fn(|i| self.faces[(i + 4 - r) & 3]) }
    }

    /// Mirror image about the North-South axis (East and West exchange).
    pub fn reflected(&self) -> Tile {
        Tile { faces: std::array::from_fn(|i| self.faces[(4 - i) & 3]) }
    }

    pub fn colour_swapped(&self) -> Tile {
        Tile { faces: self.faces.map(Colour::swapped) }
    }

    /// Applies colour swap, then reflection, then rotation.
    pub fn transform(&self, quarter_turns: u8, reflect: bool, swap: bool) -> Tile {
        let mut t = *self;
        if swap {
            t = t.colour_swapped();
        }
        if reflect {
            t = t.reflected();
        }
        t.rotated(quarter_turns)
    }

    /// Smallest number of quarter turns mapping the tile onto itself (1, 2 or 4).
    pub fn rotational_period(&self) -> u8 {
        (1..4).find(|&r| self.rotated(r) == *self).unwrap_or(4)
    }

    /// Lexicographically smallest rotation.
    pub fn rotation_canonical(&self) -> Tile {
        (0..4).map(|r| self.rotated(r)).min().unwrap()
    }

    pub fn is_neutral(&self) -> bool {
        self.faces.iter().all(|c| c.is_neutral())
    }

    pub fn nonzero_faces(&self) -> usize {
        self.faces.iter().filter(|c| !c.is_neutral()).count()
    }

    pub fn contains(&self, c: Colour) -> bool {
        self.faces.contains(&c)
    }
}

impl fmt::Display for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.colours();
        write!(f, "{{{a},{b},{c},{d}}}")
    }
}

impl FromStr for Tile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Tile> {
        let body = s.trim().trim_start_matches('{').trim_end_matches('}');
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::TileSyntax(s.to_string()));
        }
        let mut faces = [0u8; 4];
        for (slot, p) in faces.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| Error::TileSyntax(s.to_string()))?;
        }
        Ok(Tile::new(faces))
    }
}

impl Serialize for Tile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.colours().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        <[u8; 4]>::deserialize(d).map(Tile::new)
    }
}

/// Parses `1,2,0,0` or `1,2,0,0;1,2,1,0` into one or two tiles.
pub fn parse_tiles(text: &str) -> Result<Vec<Tile>> {
    let tiles = text.split(';').filter(|p| !p.trim().is_empty()).map(Tile::from_str).collect::<Result<Vec<_>>>()?;
    if tiles.is_empty() || tiles.len() > 2 {
        return Err(Error::SystemSyntax(text.to_string()));
    }
    Ok(tiles)
}

pub fn format_tiles(tiles: &[Tile]) -> String {
    tiles
        .iter()
        .map(|t| {
            let [a, b, c, d] = t.colours();
            format!("{a},{b},{c},{d}")
        })
        .collect::<Vec<_>>()
        .join(";")
}

/// One or two tiles, an interaction rule and the concentration `f`, the
/// probability of drawing tile B at each attempt.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TileSystem {
    pub tiles: Vec<Tile>,
    pub mode: Interaction,
    pub f: f64,
}

impl TileSystem {
    pub fn new(tiles: Vec<Tile>, mode: Interaction, f: f64) -> Result<Self> {
        if tiles.is_empty() || tiles.len() > 2 {
            return Err(Error::SystemSyntax(format_tiles(&tiles)));
        }
        if !(0.0..=1.0).contains(&f) || f.is_nan() {
            return Err(Error::Concentration(f));
        }
        for t in &tiles {
            for &c in &t.faces {
                mode.check_colour(c)?;
            }
        }
        Ok(TileSystem { tiles, mode, f })
    }

    pub fn single(tile: Tile, mode: Interaction) -> Self {
        TileSystem { tiles: vec![tile], mode, f: 0.0 }
    }

    pub fn pair(a: Tile, b: Tile, mode: Interaction, f: f64) -> Result<Self> {
        Self::new(vec![a, b], mode, f)
    }

    pub fn with_f(&self, f: f64) -> Result<Self> {
        Self::new(self.tiles.clone(), self.mode.clone(), f)
    }

    /// Selection probability of each tile, `(1 - f, f)` for pairs.
    pub fn probabilities(&self) -> Vec<f64> {
        match self.tiles.len() {
            1 => vec![1.0],
            _ => vec![1.0 - self.f, self.f],
        }
    }

    /// Distinct nonzero colours carried by tiles that can actually be drawn.
    pub fn live_colours(&self) -> Vec<Colour> {
        let mut out = BTreeSet::new();
        for (t, p) in self.tiles.iter().zip(self.probabilities()) {
            if p > 0.0 {
                out.extend(t.faces.iter().copied().filter(|c| !c.is_neutral()));
            }
        }
        out.into_iter().collect()
    }

    /// Whether a face of colour `c` can bind any face of a drawable tile.
    /// Only such faces count as free sides.
    pub fn is_active(&self, c: Colour) -> bool {
        !c.is_neutral() && self.live_colours().iter().any(|&o| self.mode.binds(c, o))
    }

    /// Whether every run stops at the seed: exactly one tile can be drawn
    /// and it cannot bind itself.
    pub fn seed_is_terminal(&self) -> bool {
        let drawable: Vec<&Tile> =
            self.tiles.iter().zip(self.probabilities()).filter(|(_, p)| *p > 0.0).map(|(t, _)| t).collect();
        match drawable.as_slice() {
            [t] => !t.faces.iter().any(|&a| t.faces.iter().any(|&b| self.mode.binds(a, b))),
            _ => false,
        }
    }

    pub fn describe(&self) -> String {
        format_tiles(&self.tiles)
    }
}

/// Canonical single tile: smallest face sequence over rotations and colour swap.
/// Reflection is not quotiented, so chiral tiles stay distinct.
pub fn canonical_single(t: &Tile) -> Tile {
    t.rotation_canonical().min(t.colour_swapped().rotation_canonical())
}

/// All colourings of four faces with colours `{0, 1, 2}`.
pub fn all_colourings() -> impl Iterator<Item = Tile> {
    (0..81u32).map(|mut i| {
        let mut faces = [0u8; 4];
        for f in faces.iter_mut().rev() {
            *f = (i % 3) as u8;
            i /= 3;
        }
        Tile::new(faces)
    })
}

/// The 13 distinct interactive single tiles.
pub fn enumerate_singles() -> Vec<Tile> {
    let set: BTreeSet<Tile> = all_colourings().filter(|t| !t.is_neutral()).map(|t| canonical_single(&t)).collect();
    set.into_iter().collect()
}

/// Representatives of the 23 nonzero rotation classes over colours `{0, 1, 2}`.
pub fn rotation_classes() -> Vec<Tile> {
    let set: BTreeSet<Tile> = all_colourings().filter(|t| !t.is_neutral()).map(|t| t.rotation_canonical()).collect();
    set.into_iter().collect()
}

/// An unordered pair of distinct tiles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TilePair {
    pub a: Tile,
    pub b: Tile,
}

impl TilePair {
    pub fn tiles(&self) -> Vec<Tile> {
        vec![self.a, self.b]
    }

    /// Applies the same colour swap and reflection to both tiles.
    pub fn transform(&self, reflect: bool, swap: bool) -> TilePair {
        TilePair { a: self.a.transform(0, reflect, swap), b: self.b.transform(0, reflect, swap) }
    }
}

impl fmt::Display for TilePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// Canonical representative of an unordered pair under simultaneous colour
/// swap and simultaneous reflection, with each tile taken up to rotation.
pub fn canonical_pair(a: &Tile, b: &Tile) -> TilePair {
    let mut best: Option<TilePair> = None;
    for reflect in [false, true] {
        for swap in [false, true] {
            let x = a.transform(0, reflect, swap).rotation_canonical();
            let y = b.transform(0, reflect, swap).rotation_canonical();
            let cand = TilePair { a: x.min(y), b: x.max(y) };
            if best.is_none_or(|b| cand < b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap()
}

/// The 106 distinct two-tile sets.
pub fn enumerate_pairs() -> Vec<TilePair> {
    let classes = rotation_classes();
    let mut set = BTreeSet::new();
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            set.insert(canonical_pair(a, b));
        }
    }
    set.into_iter().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FaceStats {
    /// Nonzero faces that bind at least one colour of the palette.
    pub active_count: usize,
    /// Some face of the tile binds some face of the same tile.
    pub self_interacting: bool,
}

/// Face statistics against the tile's own colours.
pub fn face_stats(t: &Tile, mode: &Interaction) -> FaceStats {
    face_stats_in(t, mode, &t.faces)
}

/// Face statistics with activity judged against an explicit colour palette.
pub fn face_stats_in(t: &Tile, mode: &Interaction, palette: &[Colour]) -> FaceStats {
    let active_count = t.faces.iter().filter(|&&c| palette.iter().any(|&p| mode.binds(c, p))).count();
    FaceStats { active_count, self_interacting: faces_bind(t, t, mode) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairStats {
    pub cross_interacting: bool,
}

pub fn pair_stats(a: &Tile, b: &Tile, mode: &Interaction) -> PairStats {
    PairStats { cross_interacting: faces_bind(a, b, mode) }
}

fn faces_bind(a: &Tile, b: &Tile, mode: &Interaction) -> bool {
    a.faces.iter().any(|&x| b.faces.iter().any(|&y| mode.binds(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Tile {
        s.parse().unwrap()
    }

    #[test]
    fn interaction_rules() {
        let (c0, c1, c2) = (Colour(0), Colour(1), Colour(2));
        assert!(Interaction::Symmetric.binds(c1, c1));
        assert!(!Interaction::Symmetric.binds(c1, c2));
        assert!(Interaction::Asymmetric.binds(c1, c2));
        assert!(!Interaction::Asymmetric.binds(c1, c1));
        for mode in [Interaction::Symmetric, Interaction::Asymmetric] {
            assert!(!mode.binds(c0, c1));
            assert!(!mode.binds(c0, c0));
        }
    }

    #[test]
    fn matrix_rejects_out_of_range() {
        let m = Interaction::Matrix(BindingMatrix::from_pairs(&[(1, 2), (3, 4)]).unwrap());
        assert!(m.interacts(Colour(4), Colour(3)).unwrap());
        assert!(!m.interacts(Colour(1), Colour(3)).unwrap());
        assert!(matches!(m.interacts(Colour(5), Colour(1)), Err(Error::ColourOutOfRange { .. })));
        assert!(BindingMatrix::from_pairs(&[(0, 1)]).is_err());
    }

    #[test]
    fn interacts_is_symmetric() {
        let m = Interaction::Matrix(BindingMatrix::from_pairs(&[(1, 2), (3, 3), (5, 6)]).unwrap());
        for mode in [Interaction::Symmetric, Interaction::Asymmetric, m] {
            for a in 0..7 {
                for b in 0..7 {
                    assert_eq!(mode.binds(Colour(a), Colour(b)), mode.binds(Colour(b), Colour(a)));
                }
            }
        }
    }

    #[test]
    fn transforms() {
        assert_eq!(t("1,2,0,0").transform(1, false, false), t("0,1,2,0"));
        assert_eq!(t("2,1,0,0").transform(0, false, true), t("1,2,0,0"));
        let chiral = t("1,1,2,0");
        let mirror = chiral.reflected();
        assert!((0..4).all(|r| chiral.rotated(r) != mirror));
        let achiral = t("1,2,1,0");
        assert!((0..4).any(|r| achiral.rotated(r) == achiral.reflected()));
    }

    #[test]
    fn rotational_period() {
        assert_eq!(t("1,1,1,1").rotational_period(), 1);
        assert_eq!(t("1,2,1,2").rotational_period(), 2);
        assert_eq!(t("1,0,1,0").rotational_period(), 2);
        assert_eq!(t("1,2,0,0").rotational_period(), 4);
    }

    #[test]
    fn canonical_single_examples() {
        assert_eq!(canonical_single(&t("2,1,0,0")), canonical_single(&t("1,2,0,0")));
        assert_ne!(canonical_single(&t("1,1,2,0")), canonical_single(&t("1,2,2,0")));
        assert_eq!(canonical_single(&t("2,2,2,2")), canonical_single(&t("1,1,1,1")));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(t("{1,2,0,0}"), Tile::new([1, 2, 0, 0]));
        assert_eq!(t(" 1, 2,0,0 ").to_string(), "{1,2,0,0}");
        assert!("1,2,0".parse::<Tile>().is_err());
        assert!("1,2,x,0".parse::<Tile>().is_err());
        assert_eq!(parse_tiles("1,2,0,0;1,2,1,0").unwrap().len(), 2);
        assert!(parse_tiles("1,0,0,0;1,0,0,0;1,0,0,0").is_err());
        assert_eq!(format_tiles(&parse_tiles("1,2,0,0;1,2,1,0").unwrap()), "1,2,0,0;1,2,1,0");
    }

    #[test]
    fn mode_parse_and_serde() {
        assert_eq!(Interaction::parse("sym").unwrap(), Interaction::Symmetric);
        assert_eq!(Interaction::parse("asym").unwrap(), Interaction::Asymmetric);
        assert!(Interaction::parse("diagonal").is_err());
        let m = Interaction::parse("matrix:[[1,2],[3,4],[5,6]]").unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"{"matrix":[[1,2],[3,4],[5,6]]}"#);
        assert_eq!(serde_json::from_str::<Interaction>(&json).unwrap(), m);
        assert_eq!(serde_json::to_string(&Interaction::Asymmetric).unwrap(), r#""asym""#);
    }

    #[test]
    fn system_validation() {
        let a = t("1,0,0,0");
        assert!(TileSystem::pair(a, a, Interaction::Symmetric, 1.5).is_err());
        assert!(TileSystem::pair(a, a, Interaction::Symmetric, f64::NAN).is_err());
        let m = Interaction::Matrix(BindingMatrix::from_pairs(&[(1, 2)]).unwrap());
        assert!(TileSystem::new(vec![t("1,3,0,0")], m, 0.0).is_err());
    }

    #[test]
    fn activity_follows_drawable_tiles() {
        let sys = TileSystem::pair(t("2,0,0,0"), t("1,1,2,0"), Interaction::Asymmetric, 0.0).unwrap();
        assert!(!sys.is_active(Colour(2)));
        let sys = sys.with_f(0.5).unwrap();
        assert!(sys.is_active(Colour(2)));
        assert!(sys.is_active(Colour(1)));
    }

    #[test]
    fn face_and_pair_stats() {
        let s = face_stats(&t("1,0,0,0"), &Interaction::Asymmetric);
        assert!(!s.self_interacting);
        let s = face_stats(&t("1,1,1,1"), &Interaction::Symmetric);
        assert_eq!(s.active_count, 4);
        assert!(s.self_interacting);
        assert!(!pair_stats(&t("2,0,2,0"), &t("1,1,1,1"), &Interaction::Symmetric).cross_interacting);
        assert!(pair_stats(&t("1,2,0,0"), &t("1,1,1,0"), &Interaction::Asymmetric).cross_interacting);
    }
}
