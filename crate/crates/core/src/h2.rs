//! Exact algorithms for capacity two when every color occurs exactly twice.
//!
//! A configuration is read as a directed multigraph over colors with one arc
//! `bottom -> top` per full bin. With two empty bins the optimum is `p + q + r`
//! (non-trivial directed cycles, vertices of indegree two, unsorted colors).
//! With one empty bin an instance is solvable iff no cycle of the underlying
//! graph has two vertices of outdegree two, and the optimum is the sum of
//! `cycle length + 1` over cycles.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{Color, Configuration, Instance, Move};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortGraph {
    /// Colors present, ascending.
    pub vertices: Vec<Color>,
    /// One arc per full bin, in bin order, including self-loops.
    pub arcs: Vec<(Color, Color)>,
    /// Colors of half-full bins, in bin order.
    pub halves: Vec<Color>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Potential {
    pub p: usize,
    pub q: usize,
    pub r: usize,
}

impl Potential {
    pub fn total(&self) -> usize {
        self.p + self.q + self.r
    }
}

pub fn build_graph(cfg: &Configuration) -> Result<SortGraph> {
    if cfg.capacity() != 2 {
        return Err(Error::WrongCapacity(cfg.capacity()));
    }
    let mut arcs = Vec::new();
    let mut halves = Vec::new();
    for bin in cfg.bins() {
        match bin.units() {
            [a, b] => arcs.push((*a, *b)),
            [a] => halves.push(*a),
            _ => {}
        }
    }
    let vertices = cfg.color_counts().into_keys().collect();
    Ok(SortGraph {
        vertices,
        arcs,
        halves,
    })
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a] = b;
        }
    }
}

/// Degrees and components of the non-loop arcs.
struct Structure {
    index: BTreeMap<Color, usize>,
    indeg: Vec<usize>,
    outdeg: Vec<usize>,
    looped: Vec<bool>,
    comp: Vec<usize>,
}

impl SortGraph {
    fn structure(&self) -> Structure {
        let index: BTreeMap<Color, usize> =
            self.vertices.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let n = self.vertices.len();
        let mut indeg = vec![0; n];
        let mut outdeg = vec![0; n];
        let mut looped = vec![false; n];
        let mut dsu = Dsu::new(n);
        for &(a, b) in &self.arcs {
            let (ia, ib) = (index[&a], index[&b]);
            if a == b {
                looped[ia] = true;
                continue;
            }
            outdeg[ia] += 1;
            indeg[ib] += 1;
            dsu.union(ia, ib);
        }
        let comp = (0..n).map(|i| dsu.find(i)).collect();
        Structure {
            index,
            indeg,
            outdeg,
            looped,
            comp,
        }
    }

    pub fn potential(&self) -> Potential {
        let s = self.structure();
        let n = self.vertices.len();
        let r = s.looped.iter().filter(|&&l| !l).count();
        let q = s.indeg.iter().filter(|&&d| d == 2).count();
        // a component is a directed cycle iff all its vertices have in = out = 1
        let mut cyclic = vec![true; n];
        let mut has_arc = vec![false; n];
        for v in 0..n {
            let root = s.comp[v];
            if s.indeg[v] + s.outdeg[v] > 0 {
                has_arc[root] = true;
            }
            if s.indeg[v] != 1 || s.outdeg[v] != 1 {
                cyclic[root] = false;
            }
        }
        let p = (0..n).filter(|&v| s.comp[v] == v && has_arc[v] && cyclic[v]).count();
        Potential { p, q, r }
    }
}

pub fn potential(graph: &SortGraph) -> Potential {
    graph.potential()
}

fn check_pairs(inst: &Instance) -> Result<()> {
    if inst.capacity() != 2 {
        return Err(Error::WrongCapacity(inst.capacity()));
    }
    let counts = inst.config().color_counts();
    if counts.len() != inst.n() || counts.values().any(|&c| c != 2) {
        return Err(Error::PreconditionViolated(
            "every color must occur exactly twice (one color per full bin)".into(),
        ));
    }
    Ok(())
}

/// Mutable capacity-two board with per-color unit locations and the degrees
/// of the arcs given by unsorted full bins.
struct Board {
    bins: Vec<[Color; 2]>,
    len: Vec<u8>,
    /// dense color index -> both (bin, level) positions
    loc: Vec<[(usize, u8); 2]>,
    indeg: Vec<u8>,
    outdeg: Vec<u8>,
    empties: Vec<usize>,
    halves: Vec<usize>,
    colors: Vec<Color>,
    moves: Vec<Move>,
    ops: usize,
}

impl Board {
    fn new(cfg: &Configuration) -> Board {
        let colors: Vec<Color> = cfg.color_counts().into_keys().collect();
        let index: BTreeMap<Color, usize> = colors.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let nb = cfg.num_bins();
        let mut b = Board {
            bins: vec![[0; 2]; nb],
            len: vec![0; nb],
            loc: vec![[(usize::MAX, 0); 2]; colors.len()],
            indeg: vec![0; colors.len()],
            outdeg: vec![0; colors.len()],
            empties: Vec::new(),
            halves: Vec::new(),
            colors,
            moves: Vec::new(),
            ops: 0,
        };
        let mut seen = vec![0usize; b.colors.len()];
        for (i, bin) in cfg.bins().iter().enumerate() {
            let units: Vec<usize> = bin.units().iter().map(|c| index[c]).collect();
            for (lvl, &c) in units.iter().enumerate() {
                b.bins[i][lvl] = c as Color;
                b.loc[c][seen[c]] = (i, lvl as u8);
                seen[c] += 1;
            }
            b.len[i] = units.len() as u8;
            match units.as_slice() {
                [] => b.empties.push(i),
                [_] => b.halves.push(i),
                [x, y] if x != y => {
                    b.outdeg[*x] += 1;
                    b.indeg[*y] += 1;
                }
                _ => {}
            }
        }
        // pop from the back hands out the lowest-index empty bin first
        b.empties.reverse();
        b
    }

    fn top(&self, bin: usize) -> usize {
        self.bins[bin][self.len[bin] as usize - 1] as usize
    }

    fn is_unsorted_full(&self, bin: usize) -> bool {
        self.len[bin] == 2 && self.bins[bin][0] != self.bins[bin][1]
    }

    /// Position of the unit of `c` other than the one at `(bin, lvl)`.
    fn other(&self, c: usize, bin: usize, lvl: u8) -> (usize, u8) {
        let [a, b] = self.loc[c];
        if a == (bin, lvl) {
            b
        } else {
            a
        }
    }

    fn mv(&mut self, src: usize, dst: usize) {
        self.ops += 1;
        let sl = self.len[src] as usize;
        let dl = self.len[dst] as usize;
        debug_assert!(sl > 0 && dl < 2);
        let c = self.top(src);
        debug_assert!(dl == 0 || self.bins[dst][0] as usize == c);
        if self.is_unsorted_full(src) {
            self.outdeg[self.bins[src][0] as usize] -= 1;
            self.indeg[c] -= 1;
        }
        let slot = if self.loc[c][0] == (src, sl as u8 - 1) { 0 } else { 1 };
        self.loc[c][slot] = (dst, dl as u8);
        self.bins[dst][dl] = c as Color;
        self.len[src] -= 1;
        self.len[dst] += 1;
        match sl {
            2 => self.halves.push(src),
            _ => {
                self.halves.retain(|&x| x != src);
                self.empties.push(src);
            }
        }
        if dl == 0 {
            let pos = self.empties.iter().rposition(|&x| x == dst).expect("dst was empty");
            self.empties.remove(pos);
            self.halves.push(dst);
        } else {
            self.halves.retain(|&x| x != dst);
        }
        self.moves.push(Move::new(src, dst, 1));
    }

    fn take_empty(&self) -> usize {
        *self.empties.last().expect("an empty bin")
    }

    /// Sorts colors along a path starting from the half bin `hb`: while the
    /// other unit of its color sits on top of a full bin, move it over and
    /// continue from the bin it exposed. If the other unit is alone in a half
    /// bin, merge it in and stop. Stops without moving if it is buried.
    fn chase(&mut self, mut hb: usize) {
        loop {
            self.ops += 1;
            if self.len[hb] != 1 {
                return;
            }
            let c = self.bins[hb][0] as usize;
            let (ob, ol) = self.other(c, hb, 0);
            if self.len[ob] == 2 && ol == 1 {
                self.mv(ob, hb);
                hb = ob;
            } else if self.len[ob] == 1 {
                self.mv(ob, hb);
                return;
            } else {
                return;
            }
        }
    }

    fn unsorted(&self) -> usize {
        let mut r = 0;
        for c in 0..self.colors.len() {
            let [(a, _), (b, _)] = self.loc[c];
            if a != b {
                r += 1;
            }
        }
        r
    }
}

/// Shortest sorting sequence for `h = 2`, each color twice, `k >= 2`.
pub fn solve_k2(inst: &Instance) -> Result<Vec<Move>> {
    Ok(solve_k2_counted(inst)?.0)
}

/// [`solve_k2`] plus the number of elementary steps taken, which is linear in `n`.
pub fn solve_k2_counted(inst: &Instance) -> Result<(Vec<Move>, usize)> {
    check_pairs(inst)?;
    if inst.k() < 2 {
        return Err(Error::PreconditionViolated(format!(
            "needs at least two empty bins, got {}",
            inst.k()
        )));
    }
    let mut b = Board::new(inst.config());
    let n = b.colors.len();
    let mut in2 = 0;
    let mut topc = 0;
    loop {
        b.ops += 1;
        let halves = b.halves.len();
        assert!(
            (halves == 0 && b.empties.len() >= 2) || (halves == 2 && !b.empties.is_empty()),
            "lost the two-empty / one-empty-two-halves shape"
        );
        if halves == 0 {
            while in2 < n && b.indeg[in2] < 2 {
                in2 += 1;
                b.ops += 1;
            }
            if in2 < n {
                // both units of in2 are tops of full bins
                let mut srcs = [b.loc[in2][0].0, b.loc[in2][1].0];
                srcs.sort_unstable();
                let e = b.take_empty();
                b.mv(srcs[0], e);
                b.mv(srcs[1], e);
                continue;
            }
            while topc < n && b.indeg[topc] == 0 {
                topc += 1;
                b.ops += 1;
            }
            if topc == n {
                break;
            }
            let (src, _) = if b.loc[topc][0].1 == 1 && b.is_unsorted_full(b.loc[topc][0].0) {
                b.loc[topc][0]
            } else {
                b.loc[topc][1]
            };
            let e = b.take_empty();
            b.mv(src, e);
            continue;
        }

        let (h0, h1) = (b.halves[0], b.halves[1]);
        let (c0, c1) = (b.bins[h0][0] as usize, b.bins[h1][0] as usize);
        let mut free: Vec<(usize, usize)> = [(c0, h0), (c1, h1)]
            .into_iter()
            .filter(|&(c, _)| b.outdeg[c] == 0)
            .collect();
        free.sort_unstable();
        if let Some(&(c, hb)) = free.first() {
            let (ob, _) = b.other(c, hb, 0);
            b.mv(ob, hb);
            continue;
        }

        // both half colors continue as bottoms of full bins; walk to the end
        let (c_start, hb) = if c0 <= c1 { (c0, h0) } else { (c1, h1) };
        let mut c = c_start;
        let mut last_bin = hb;
        while b.outdeg[c] > 0 {
            b.ops += 1;
            let (bin, _) = b.other(c, last_bin, if last_bin == hb { 0 } else { 1 });
            debug_assert!(b.is_unsorted_full(bin) && b.bins[bin][0] as usize == c);
            last_bin = bin;
            c = b.bins[bin][1] as usize;
        }
        // c has indegree two: both units top full bins, one of them is last_bin
        debug_assert_eq!(b.indeg[c], 2);
        let other = if b.loc[c][0].0 == last_bin {
            b.loc[c][1].0
        } else {
            b.loc[c][0].0
        };
        let e = b.take_empty();
        b.mv(other, e);
        b.mv(last_bin, e);
        b.chase(last_bin);
        debug_assert_eq!(b.len[hb], 0);
    }
    debug_assert_eq!(b.unsorted(), 0);
    let ops = b.ops;
    Ok((b.moves, ops))
}

fn check_k1(inst: &Instance) -> Result<()> {
    check_pairs(inst)?;
    if inst.k() != 1 {
        return Err(Error::PreconditionViolated(format!(
            "needs exactly one empty bin, got {}",
            inst.k()
        )));
    }
    Ok(())
}

/// Components of the underlying graph after dropping sorted bins, each with
/// its bins in index order.
fn cycles(inst: &Instance) -> Result<(SortGraph, Structure, Vec<Vec<usize>>)> {
    let g = build_graph(inst.config())?;
    let s = g.structure();
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, bin) in inst.full_bins().iter().enumerate() {
        let u = bin.units();
        if u[0] != u[1] {
            by_root.entry(s.comp[s.index[&u[0]]]).or_default().push(i);
        }
    }
    let mut comps: Vec<Vec<usize>> = by_root.into_values().collect();
    comps.sort_by_key(|c| c[0]);
    Ok((g, s, comps))
}

/// Solvability for `h = 2`, each color twice, `k = 1`.
pub fn decide_k1(inst: &Instance) -> Result<bool> {
    check_k1(inst)?;
    let (_, s, comps) = cycles(inst)?;
    Ok(comps.iter().all(|bins| {
        let mut heavy = 0;
        for &b in bins {
            let c = inst.config().bin(b).units()[0];
            if s.outdeg[s.index[&c]] == 2 {
                heavy += 1;
            }
        }
        // each outdegree-2 vertex is the bottom of two bins in the cycle
        heavy <= 2
    }))
}

/// Optimal length for a solvable `k = 1` instance: one more move per cycle
/// than the cycle has vertices.
pub fn optimum_k1(inst: &Instance) -> Result<Option<usize>> {
    if !decide_k1(inst)? {
        return Ok(None);
    }
    let (_, _, comps) = cycles(inst)?;
    Ok(Some(comps.iter().map(|c| c.len() + 1).sum()))
}

/// Shortest sorting sequence for `h = 2`, each color twice, `k = 1`.
pub fn solve_k1(inst: &Instance) -> Result<Vec<Move>> {
    if !decide_k1(inst)? {
        return Err(Error::Unsolvable);
    }
    let (_, s, comps) = cycles(inst)?;
    let mut b = Board::new(inst.config());
    for bins in comps {
        let heavy_in = bins
            .iter()
            .map(|&x| b.bins[x][1] as usize)
            .filter(|&c| s.indeg[s.index[&b.colors[c]]] == 2)
            .min();
        let e = b.take_empty();
        match heavy_in {
            None => {
                let first = bins[0];
                b.mv(first, e);
                b.chase(first);
            }
            Some(u) => {
                let mut srcs = [b.loc[u][0].0, b.loc[u][1].0];
                srcs.sort_unstable();
                b.mv(srcs[0], e);
                b.mv(srcs[1], e);
                b.chase(srcs[0]);
                b.chase(srcs[1]);
            }
        }
        assert_eq!(b.empties.len(), 1, "cycle did not return its empty bin");
        assert!(b.halves.is_empty(), "cycle left half bins behind");
    }
    Ok(b.moves)
}
