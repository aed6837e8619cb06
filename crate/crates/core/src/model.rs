//! Configurations, moves and the basic vocabulary of the puzzles.
//!
//! A bin is a stack of colored units listed bottom-to-top. A configuration is a
//! fixed capacity together with an ordered list of bins. Ball-moves transfer a
//! single unit; water-moves transfer the maximal same-colored top run that fits
//! into the destination.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Color id. Valid ids are `>= 1`.
pub type Color = u32;

/// Which move relation is in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Semantics {
    Ball,
    Water,
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Semantics::Ball => f.write_str("ball"),
            Semantics::Water => f.write_str("water"),
        }
    }
}

impl FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ball" => Ok(Semantics::Ball),
            "water" => Ok(Semantics::Water),
            other => Err(Error::InvalidInput(format!(
                "unknown semantics {other:?} (expected ball or water)"
            ))),
        }
    }
}

/// A single ball- or water-move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Move {
    pub src: usize,
    pub dst: usize,
    pub count: usize,
}

impl Move {
    pub fn new(src: usize, dst: usize, count: usize) -> Self {
        Move { src, dst, count }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.src, self.dst, self.count)
    }
}

/// Contents of one bin, bottom-to-top.
///
/// Ordered by length first and then lexicographically, which is the order
/// [`Configuration::canonical`] sorts bins by.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ColorSeq(Vec<Color>);

impl ColorSeq {
    pub fn new(units: Vec<Color>) -> Self {
        ColorSeq(units)
    }

    pub fn empty() -> Self {
        ColorSeq(Vec::new())
    }

    /// `c` repeated `len` times.
    pub fn monochrome(c: Color, len: usize) -> Self {
        ColorSeq(vec![c; len])
    }

    pub fn units(&self) -> &[Color] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn top(&self) -> Option<Color> {
        self.0.last().copied()
    }

    /// Length of the maximal same-colored run at the top.
    pub fn top_run(&self) -> usize {
        match self.top() {
            None => 0,
            Some(c) => self.0.iter().rev().take_while(|&&u| u == c).count(),
        }
    }

    pub fn is_monochrome(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    /// Border set: `0` plus every `i` (1-based, `1 <= i < len`) where the unit at
    /// height `i` differs from the one at `i + 1`. Returned in ascending order.
    pub fn border_set(&self) -> Vec<usize> {
        let mut out = vec![0];
        out.extend(
            self.0
                .windows(2)
                .enumerate()
                .filter(|(_, w)| w[0] != w[1])
                .map(|(i, _)| i + 1),
        );
        out
    }

    /// Highest border; the top-border value of this bin.
    pub fn max_border(&self) -> usize {
        self.0
            .windows(2)
            .rposition(|w| w[0] != w[1])
            .map_or(0, |i| i + 1)
    }

    /// Runs of equal colors, bottom first, as `(color, length)`.
    pub fn runs(&self) -> Vec<(Color, usize)> {
        let mut out: Vec<(Color, usize)> = Vec::new();
        for &u in &self.0 {
            match out.last_mut() {
                Some((c, n)) if *c == u => *n += 1,
                _ => out.push((u, 1)),
            }
        }
        out
    }

    pub(crate) fn push_n(&mut self, c: Color, n: usize) {
        self.0.extend(std::iter::repeat_n(c, n));
    }

    pub(crate) fn pop_n(&mut self, n: usize) {
        let len = self.0.len();
        self.0.truncate(len - n);
    }
}

impl Ord for ColorSeq {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ColorSeq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<Color>> for ColorSeq {
    fn from(v: Vec<Color>) -> Self {
        ColorSeq(v)
    }
}

impl From<&[Color]> for ColorSeq {
    fn from(v: &[Color]) -> Self {
        ColorSeq(v.to_vec())
    }
}

/// Capacity plus an ordered list of bins.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    capacity: usize,
    bins: Vec<ColorSeq>,
}

impl Configuration {
    pub fn new(capacity: usize, bins: Vec<ColorSeq>) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidConfiguration("capacity must be positive".into()));
        }
        for (i, b) in bins.iter().enumerate() {
            if b.len() > capacity {
                return Err(Error::InvalidConfiguration(format!(
                    "bin {i} holds {} units, capacity is {capacity}",
                    b.len()
                )));
            }
            if b.units().contains(&0) {
                return Err(Error::InvalidConfiguration(format!(
                    "bin {i} contains color id 0"
                )));
            }
        }
        Ok(Configuration { capacity, bins })
    }

    /// Convenience constructor from nested vectors.
    pub fn from_vecs(capacity: usize, bins: Vec<Vec<Color>>) -> Result<Self> {
        Self::new(capacity, bins.into_iter().map(ColorSeq::new).collect())
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn bins(&self) -> &[ColorSeq] {
        &self.bins
    }

    pub fn bin(&self, i: usize) -> &ColorSeq {
        &self.bins[i]
    }

    pub fn num_bins(&self) -> usize {
        self.bins.len()
    }

    /// Largest color id present (0 when there are no units).
    pub fn max_color(&self) -> Color {
        self.bins
            .iter()
            .flat_map(|b| b.units().iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Unit count per color id.
    pub fn color_counts(&self) -> BTreeMap<Color, usize> {
        let mut m = BTreeMap::new();
        for &u in self.bins.iter().flat_map(|b| b.units()) {
            *m.entry(u).or_insert(0) += 1;
        }
        m
    }

    /// Number of units a move `src -> dst` would transfer, or why it is illegal.
    pub fn move_count(
        &self,
        src: usize,
        dst: usize,
        semantics: Semantics,
    ) -> std::result::Result<usize, &'static str> {
        if src >= self.bins.len() || dst >= self.bins.len() {
            return Err("bin index out of range");
        }
        if src == dst {
            return Err("source and destination coincide");
        }
        let from = &self.bins[src];
        let to = &self.bins[dst];
        let c = from.top().ok_or("source bin is empty")?;
        if to.len() >= self.capacity {
            return Err("destination bin is full");
        }
        if matches!(to.top(), Some(t) if t != c) {
            return Err("top colors differ");
        }
        Ok(match semantics {
            Semantics::Ball => 1,
            Semantics::Water => from.top_run().min(self.capacity - to.len()),
        })
    }

    /// In-place move; returns the number of units transferred.
    pub fn pour(&mut self, src: usize, dst: usize, semantics: Semantics) -> Result<usize> {
        let m = self
            .move_count(src, dst, semantics)
            .map_err(|reason| Error::IllegalMove { src, dst, reason })?;
        let c = self.bins[src].top().expect("checked non-empty");
        self.bins[src].pop_n(m);
        self.bins[dst].push_n(c, m);
        Ok(m)
    }

    pub fn apply_ball_move(&self, src: usize, dst: usize) -> Result<Configuration> {
        let mut next = self.clone();
        next.pour(src, dst, Semantics::Ball)?;
        Ok(next)
    }

    /// Returns the new configuration and the number of units poured.
    pub fn apply_water_move(&self, src: usize, dst: usize) -> Result<(Configuration, usize)> {
        let mut next = self.clone();
        let m = next.pour(src, dst, Semantics::Water)?;
        Ok((next, m))
    }

    /// Applies `mv`, checking that its recorded count is the one the semantics forces.
    pub fn apply(&self, mv: Move, semantics: Semantics) -> Result<Configuration> {
        let forced = self
            .move_count(mv.src, mv.dst, semantics)
            .map_err(|reason| Error::IllegalMove {
                src: mv.src,
                dst: mv.dst,
                reason,
            })?;
        if forced != mv.count {
            return Err(Error::IllegalMove {
                src: mv.src,
                dst: mv.dst,
                reason: "unit count does not match the move semantics",
            });
        }
        let mut next = self.clone();
        next.pour(mv.src, mv.dst, semantics)?;
        Ok(next)
    }

    /// Every legal move, ordered by source then destination.
    pub fn legal_moves(&self, semantics: Semantics) -> Vec<Move> {
        let nb = self.bins.len();
        let mut out = Vec::new();
        for src in 0..nb {
            if self.bins[src].is_empty() {
                continue;
            }
            for dst in 0..nb {
                if let Ok(count) = self.move_count(src, dst, semantics) {
                    out.push(Move { src, dst, count });
                }
            }
        }
        out
    }

    /// Every bin is empty or full of one color.
    pub fn is_sorted(&self) -> bool {
        self.bins
            .iter()
            .all(|b| b.is_empty() || (b.len() == self.capacity && b.is_monochrome()))
    }

    /// Total number of non-trivial borders.
    pub fn border_count(&self) -> usize {
        self.bins.iter().map(|b| b.border_set().len() - 1).sum()
    }

    /// Same configuration with its bins sorted (shorter first, then lexicographic).
    pub fn canonical(&self) -> Configuration {
        let mut bins = self.bins.clone();
        bins.sort();
        Configuration {
            capacity: self.capacity,
            bins,
        }
    }

    /// Appends `extra` empty bins.
    pub fn with_empty_bins(&self, extra: usize) -> Configuration {
        let mut bins = self.bins.clone();
        bins.extend(std::iter::repeat_n(ColorSeq::empty(), extra));
        Configuration {
            capacity: self.capacity,
            bins,
        }
    }

    /// Replays `moves` one by one. Fails on the first illegal move.
    pub fn replay(&self, moves: &[Move], semantics: Semantics) -> Result<Configuration> {
        let mut cur = self.clone();
        for mv in moves {
            let forced = cur
                .move_count(mv.src, mv.dst, semantics)
                .map_err(|reason| Error::IllegalMove {
                    src: mv.src,
                    dst: mv.dst,
                    reason,
                })?;
            if forced != mv.count {
                return Err(Error::IllegalMove {
                    src: mv.src,
                    dst: mv.dst,
                    reason: "unit count does not match the move semantics",
                });
            }
            cur.pour(mv.src, mv.dst, semantics)?;
        }
        Ok(cur)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h={} [", self.capacity)?;
        for (i, b) in self.bins.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("(")?;
            for (j, u) in b.units().iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{u}")?;
            }
            f.write_str(")")?;
        }
        f.write_str("]")
    }
}

/// A puzzle instance: `n` full bins followed by `k` empty bins, with every color
/// occurring a multiple of `capacity` times.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    config: Configuration,
    n: usize,
    k: usize,
}

impl Instance {
    /// Builds an instance from the full bins plus `k` empty ones.
    pub fn new(capacity: usize, full: Vec<Vec<Color>>, k: usize) -> Result<Self> {
        let n = full.len();
        for (i, b) in full.iter().enumerate() {
            if b.len() != capacity {
                return Err(Error::InvalidInstance(format!(
                    "bin {i} holds {} units, expected {capacity}",
                    b.len()
                )));
            }
        }
        let config = Configuration::from_vecs(capacity, full)
            .map_err(|e| Error::InvalidInstance(e.to_string()))?
            .with_empty_bins(k);
        for (c, count) in config.color_counts() {
            if count % capacity != 0 {
                return Err(Error::InvalidInstance(format!(
                    "color {c} occurs {count} times, not a multiple of {capacity}"
                )));
            }
        }
        Ok(Instance { config, n, k })
    }

    /// Accepts any configuration whose bins are all full or empty, reordering
    /// full bins first.
    pub fn from_configuration(config: &Configuration) -> Result<Self> {
        let h = config.capacity();
        let mut full = Vec::new();
        let mut k = 0;
        for (i, b) in config.bins().iter().enumerate() {
            if b.is_empty() {
                k += 1;
            } else if b.len() == h {
                full.push(b.units().to_vec());
            } else {
                return Err(Error::InvalidInstance(format!(
                    "bin {i} is neither full nor empty"
                )));
            }
        }
        Instance::new(h, full, k)
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn capacity(&self) -> usize {
        self.config.capacity
    }

    /// Number of initially full bins.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of initially empty bins.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_colors(&self) -> usize {
        self.config.color_counts().len()
    }

    pub fn full_bins(&self) -> &[ColorSeq] {
        &self.config.bins[..self.n]
    }

    /// Same full bins with a different number of empty bins.
    pub fn with_k(&self, k: usize) -> Instance {
        let full = self.full_bins().to_vec();
        let mut bins = full;
        bins.extend(std::iter::repeat_n(ColorSeq::empty(), k));
        Instance {
            config: Configuration {
                capacity: self.config.capacity,
                bins,
            },
            n: self.n,
            k,
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} k={} {}", self.n, self.k, self.config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(h: usize, bins: Vec<Vec<Color>>) -> Configuration {
        Configuration::from_vecs(h, bins).unwrap()
    }

    #[test]
    fn ball_move_rejects_color_mismatch() {
        let c = cfg(2, vec![vec![1, 2], vec![1]]);
        assert!(matches!(
            c.apply_ball_move(0, 1),
            Err(Error::IllegalMove { .. })
        ));
    }

    #[test]
    fn ball_move_into_empty_bin() {
        let c = cfg(2, vec![vec![1, 2], vec![]]);
        assert_eq!(c.apply_ball_move(0, 1).unwrap(), cfg(2, vec![vec![1], vec![2]]));
    }

    #[test]
    fn ball_move_onto_same_color() {
        let c = cfg(3, vec![vec![1, 2, 2], vec![3, 2]]);
        assert_eq!(
            c.apply_ball_move(0, 1).unwrap(),
            cfg(3, vec![vec![1, 2], vec![3, 2, 2]])
        );
    }

    #[test]
    fn water_move_limited_by_two_free_slots() {
        let c = cfg(4, vec![vec![3, 1, 1, 1], vec![2, 1]]);
        let (next, m) = c.apply_water_move(0, 1).unwrap();
        assert_eq!(m, 2);
        assert_eq!(next, cfg(4, vec![vec![3, 1], vec![2, 1, 1, 1]]));
    }

    #[test]
    fn water_move_pours_whole_run_when_it_fits() {
        let c = cfg(5, vec![vec![3, 1, 1, 1], vec![2, 1]]);
        let (next, m) = c.apply_water_move(0, 1).unwrap();
        assert_eq!(m, 3);
        assert_eq!(next, cfg(5, vec![vec![3], vec![2, 1, 1, 1, 1]]));
        let by_balls = (0..3).fold(c.clone(), |acc, _| acc.apply_ball_move(0, 1).unwrap());
        assert_eq!(by_balls, next);
    }

    #[test]
    fn water_move_two_units_to_empty() {
        let c = cfg(4, vec![vec![2, 3, 1, 1], vec![]]);
        let (next, m) = c.apply_water_move(0, 1).unwrap();
        assert_eq!(m, 2);
        assert_eq!(next.bin(1).units(), &[1, 1]);
    }

    #[test]
    fn water_move_truncated_by_margin() {
        let c = cfg(4, vec![vec![3, 2, 2, 2], vec![1, 1, 2]]);
        let (next, m) = c.apply_water_move(0, 1).unwrap();
        assert_eq!(m, 1);
        assert_eq!(next, cfg(4, vec![vec![3, 2, 2], vec![1, 1, 2, 2]]));
    }

    #[test]
    fn illegal_moves_are_reported() {
        let c = cfg(2, vec![vec![1, 2], vec![3, 2], vec![]]);
        assert!(c.apply_ball_move(0, 1).is_err()); // full
        assert!(c.apply_ball_move(2, 0).is_err()); // empty source
        assert!(c.apply_ball_move(0, 0).is_err());
        assert!(c.apply_ball_move(0, 7).is_err());
        let ok = cfg(2, vec![vec![1, 2], vec![2]]);
        assert!(ok.apply_ball_move(0, 1).is_ok());
    }

    #[test]
    fn legal_moves_enumeration() {
        let c = cfg(2, vec![vec![1, 2], vec![2, 1], vec![], vec![]]);
        let got: Vec<(usize, usize)> = c
            .legal_moves(Semantics::Ball)
            .iter()
            .map(|m| (m.src, m.dst))
            .collect();
        assert_eq!(got, vec![(0, 2), (0, 3), (1, 2), (1, 3)]);

        let stuck = cfg(2, vec![vec![1, 1], vec![2, 2]]);
        assert!(stuck.legal_moves(Semantics::Water).is_empty());
    }

    #[test]
    fn sortedness() {
        assert!(cfg(2, vec![vec![1, 1], vec![2, 2], vec![]]).is_sorted());
        assert!(!cfg(2, vec![vec![1, 2], vec![2, 1]]).is_sorted());
        assert!(!cfg(2, vec![vec![1]]).is_sorted());
    }

    #[test]
    fn borders() {
        assert_eq!(ColorSeq::new(vec![1, 1, 2, 2, 3]).border_set(), vec![0, 2, 4]);
        assert_eq!(ColorSeq::new(vec![1, 1, 1]).border_set(), vec![0]);
        assert_eq!(ColorSeq::empty().border_set(), vec![0]);
        // K K R R B B R R R
        let b1 = ColorSeq::new(vec![4, 4, 1, 1, 3, 3, 1, 1, 1]);
        assert_eq!(b1.border_set(), vec![0, 2, 4, 6]);
        assert_eq!(b1.max_border(), 6);
        assert_eq!(b1.runs(), vec![(4, 2), (1, 2), (3, 2), (1, 3)]);
    }

    #[test]
    fn border_counts() {
        assert_eq!(cfg(2, vec![vec![1, 1], vec![]]).border_count(), 0);
        // K=4 R=1 G=2 B=3
        let s0 = cfg(
            9,
            vec![
                vec![4, 4, 1, 1, 3, 3, 1, 1, 1],
                vec![4, 4, 4, 1, 2, 2, 1, 1, 1],
                vec![4, 4, 4, 2, 2, 3, 2, 2, 2],
                vec![],
                vec![],
                vec![],
            ],
        );
        assert_eq!(s0.border_count(), 9);
    }

    #[test]
    fn canonical_ordering() {
        let c = cfg(2, vec![vec![2, 2], vec![1, 1]]);
        assert_eq!(c.canonical(), cfg(2, vec![vec![1, 1], vec![2, 2]]));
        let c = cfg(2, vec![vec![1, 2], vec![]]);
        assert_eq!(c.canonical(), cfg(2, vec![vec![], vec![1, 2]]));
    }

    #[test]
    fn instance_validation() {
        assert!(Instance::new(2, vec![vec![1, 2]], 0).is_err());
        assert!(Instance::new(2, vec![vec![1, 2, 1]], 0).is_err());
        let i = Instance::new(2, vec![vec![1, 2], vec![2, 1]], 2).unwrap();
        assert_eq!((i.n(), i.k(), i.config().num_bins()), (2, 2, 4));
        assert_eq!(i.with_k(0).config().num_bins(), 2);
    }

    #[test]
    fn semantics_parse() {
        assert_eq!("ball".parse::<Semantics>().unwrap(), Semantics::Ball);
        assert_eq!("water".parse::<Semantics>().unwrap(), Semantics::Water);
        assert!("lava".parse::<Semantics>().is_err());
    }
}
