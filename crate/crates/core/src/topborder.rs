//! Top-border tables.
//!
//! Moves only ever remove borders, from the top of a bin downwards, and the units
//! below a bin's highest surviving border never move. So the vector of highest
//! borders per bin (`tau`), read against the fixed initial configuration, is
//! enough to decide whether the puzzle can still be finished.
//!
//! For each color `c` the table caches
//!
//! * `F_c`: units of `c` above the borders (as laid out in the initial configuration),
//! * `G_c`: room for `c` on top of non-monochrome bins whose current top color is `c`,
//!
//! from which the number of monochrome bins `c` needs is
//! `M_c = max(0, ceil((F_c - G_c) / h))`. A table is consistent when
//! `sum_c M_c <= |B_eps|`, the number of bins with `tau = 0`.

use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::model::{Color, Configuration, Instance};

/// How the per-move demand `M_c^b` treats colors other than the top color of `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DemandRule {
    /// Only the top color of `b` loses the room `h - tau(b)`; every other color keeps `M_c`.
    #[default]
    TopColor,
    /// Subtract `h - tau(b)` from `G_c` for every color. Kept for comparison runs.
    Literal,
}

/// A top-border table: `tau` plus cached color statistics.
///
/// Equality and hashing look at `tau` only; the statistics are derived from it.
#[derive(Debug, Clone)]
pub struct TopBorderTable {
    tau: Box<[u16]>,
    f: Box<[i64]>,
    g: Box<[i64]>,
    empties: usize,
    demand: i64,
}

impl TopBorderTable {
    pub fn tau(&self) -> &[u16] {
        &self.tau
    }

    pub fn tau_at(&self, b: usize) -> usize {
        self.tau[b] as usize
    }

    /// `F_c`: units of color `c` above the borders.
    pub fn f(&self, c: Color) -> i64 {
        self.f.get(c as usize).copied().unwrap_or(0)
    }

    /// `G_c`: room for color `c` atop non-monochrome bins topped by `c`.
    pub fn g(&self, c: Color) -> i64 {
        self.g.get(c as usize).copied().unwrap_or(0)
    }

    /// `|B_eps|`: bins whose top border is 0.
    pub fn empties(&self) -> usize {
        self.empties
    }

    /// `sum_c M_c`.
    pub fn total_demand(&self) -> i64 {
        self.demand
    }

    pub fn is_zero(&self) -> bool {
        self.tau.iter().all(|&t| t == 0)
    }

    /// Number of borders still to remove.
    pub fn remaining_borders(&self, ctx: &TableContext) -> usize {
        self.tau
            .iter()
            .enumerate()
            .map(|(b, &t)| ctx.border_rank(b, t as usize))
            .sum()
    }
}

impl PartialEq for TopBorderTable {
    fn eq(&self, other: &Self) -> bool {
        self.tau == other.tau
    }
}

impl Eq for TopBorderTable {}

impl Hash for TopBorderTable {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.tau.hash(state);
    }
}

fn demand_of(f: i64, g: i64, h: i64) -> i64 {
    let excess = f - g;
    if excess <= 0 {
        0
    } else {
        (excess + h - 1) / h
    }
}

/// Read-only data about the initial configuration shared by all tables.
#[derive(Debug, Clone)]
pub struct TableContext {
    s0: Configuration,
    h: usize,
    borders: Vec<Vec<usize>>,
    colors: usize,
    rule: DemandRule,
}

impl TableContext {
    /// Context anchored at an arbitrary initial configuration.
    pub fn new(s0: &Configuration) -> Self {
        let borders = s0.bins().iter().map(|b| b.border_set()).collect();
        TableContext {
            s0: s0.clone(),
            h: s0.capacity(),
            borders,
            colors: s0.max_color() as usize + 1,
            rule: DemandRule::TopColor,
        }
    }

    pub fn for_instance(inst: &Instance) -> Self {
        Self::new(inst.config())
    }

    pub fn with_rule(mut self, rule: DemandRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn rule(&self) -> DemandRule {
        self.rule
    }

    pub fn initial(&self) -> &Configuration {
        &self.s0
    }

    pub fn capacity(&self) -> usize {
        self.h
    }

    pub fn num_bins(&self) -> usize {
        self.borders.len()
    }

    /// Color ids run over `1..color_bound()`.
    pub fn color_bound(&self) -> usize {
        self.colors
    }

    /// Borders of the initial contents of `b`, ascending.
    pub fn borders(&self, b: usize) -> &[usize] {
        &self.borders[b]
    }

    fn border_rank(&self, b: usize, t: usize) -> usize {
        self.borders[b].partition_point(|&x| x < t)
    }

    /// Number of non-trivial borders in the initial configuration.
    pub fn total_borders(&self) -> usize {
        self.borders.iter().map(|d| d.len() - 1).sum()
    }

    /// Color of the run just above border `t` of bin `b` in the initial configuration.
    fn color_above(&self, b: usize, t: usize) -> Color {
        self.s0.bin(b).units()[t]
    }

    /// Current top color of a non-monochrome bin, `None` when `tau(b) = 0`.
    pub fn top_color(&self, table: &TopBorderTable, b: usize) -> Option<Color> {
        match table.tau_at(b) {
            0 => None,
            t => Some(self.color_above(b, t)),
        }
    }

    /// The table of the initial configuration.
    pub fn initial_table(&self) -> TopBorderTable {
        let tau: Vec<usize> = self.borders.iter().map(|d| *d.last().unwrap()).collect();
        self.scratch(&tau)
    }

    /// Table for an explicit `tau`; every entry must be a border of the initial bin.
    pub fn table(&self, tau: &[usize]) -> Result<TopBorderTable> {
        if tau.len() != self.num_bins() {
            return Err(Error::InvalidInput(format!(
                "table has {} entries, expected {}",
                tau.len(),
                self.num_bins()
            )));
        }
        for (b, &t) in tau.iter().enumerate() {
            if self.borders[b].binary_search(&t).is_err() {
                return Err(Error::InvalidInput(format!(
                    "tau({b}) = {t} is not a border of the initial bin"
                )));
            }
        }
        Ok(self.scratch(tau))
    }

    /// Reads the table off a configuration, checking that every bin still agrees
    /// with the initial contents up to its top border.
    pub fn table_of(&self, cfg: &Configuration) -> Result<TopBorderTable> {
        if cfg.num_bins() != self.num_bins() || cfg.capacity() != self.h {
            return Err(Error::NotConsistent("shape differs from the initial configuration".into()));
        }
        let mut tau = Vec::with_capacity(cfg.num_bins());
        for (b, bin) in cfg.bins().iter().enumerate() {
            let t = bin.max_border();
            let init = self.s0.bin(b).units();
            let cur = bin.units();
            let agrees = self.borders[b].binary_search(&t).is_ok()
                && (t == 0 || (init.len() > t && cur[..=t] == init[..=t]));
            if !agrees {
                return Err(Error::NotConsistent(format!(
                    "bin {b} does not extend a prefix of its initial contents"
                )));
            }
            tau.push(t);
        }
        Ok(self.scratch(&tau))
    }

    /// Statistics recomputed directly from the definitions.
    pub fn scratch(&self, tau: &[usize]) -> TopBorderTable {
        let h = self.h as i64;
        let mut f = vec![0i64; self.colors];
        let mut g = vec![0i64; self.colors];
        let mut empties = 0;
        for (b, &t) in tau.iter().enumerate() {
            for &c in &self.s0.bin(b).units()[t..] {
                f[c as usize] += 1;
            }
            if t == 0 {
                empties += 1;
            } else {
                g[self.color_above(b, t) as usize] += h - t as i64;
            }
        }
        let demand = (1..self.colors).map(|c| demand_of(f[c], g[c], h)).sum();
        TopBorderTable {
            tau: tau.iter().map(|&t| t as u16).collect(),
            f: f.into_boxed_slice(),
            g: g.into_boxed_slice(),
            empties,
            demand,
        }
    }

    /// `M_c`: monochrome bins color `c` needs under this table.
    pub fn monochrome_demand(&self, table: &TopBorderTable, c: Color) -> i64 {
        demand_of(table.f(c), table.g(c), self.h as i64)
    }

    /// The consistency condition `sum_c M_c <= |B_eps|`.
    pub fn is_consistent(&self, table: &TopBorderTable) -> bool {
        table.demand <= table.empties as i64
    }

    /// `M_c^b` for every color (index 0 unused): demands while the units above the
    /// top border of `b` are being moved out.
    pub fn demand_for_move(&self, table: &TopBorderTable, b: usize) -> Result<Vec<i64>> {
        let t = table.tau_at(b);
        if t == 0 {
            return Err(Error::BinMonochrome(b));
        }
        let h = self.h as i64;
        let room = h - t as i64;
        let top = self.color_above(b, t) as usize;
        Ok((0..self.colors)
            .map(|c| {
                if c == 0 {
                    0
                } else if c == top || self.rule == DemandRule::Literal {
                    demand_of(table.f[c], table.g[c] - room, h)
                } else {
                    demand_of(table.f[c], table.g[c], h)
                }
            })
            .collect())
    }

    fn move_demand_sum(&self, table: &TopBorderTable, b: usize, t: usize) -> i64 {
        let h = self.h as i64;
        let room = h - t as i64;
        match self.rule {
            DemandRule::TopColor => {
                let c = self.color_above(b, t) as usize;
                table.demand - demand_of(table.f[c], table.g[c], h)
                    + demand_of(table.f[c], table.g[c] - room, h)
            }
            DemandRule::Literal => (1..self.colors)
                .map(|c| demand_of(table.f[c], table.g[c] - room, h))
                .sum(),
        }
    }

    /// Whether the border at the top of `b` may be removed from `table`.
    pub fn can_remove(&self, table: &TopBorderTable, b: usize) -> bool {
        let t = table.tau_at(b);
        t > 0 && self.move_demand_sum(table, b, t) <= table.empties as i64
    }

    /// Border just below `t` in bin `b`.
    pub fn next_border(&self, b: usize, t: usize) -> usize {
        let d = &self.borders[b];
        let i = d.partition_point(|&x| x < t);
        d[i - 1]
    }

    /// The table after removing the top border of `b`, if that is allowed.
    /// Statistics are updated incrementally in constant time per touched color.
    pub fn step(&self, table: &TopBorderTable, b: usize) -> Option<TopBorderTable> {
        if !self.can_remove(table, b) {
            return None;
        }
        let h = self.h as i64;
        let old = table.tau_at(b);
        let new = self.next_border(b, old);
        let c_old = self.color_above(b, old) as usize;
        let c_new = self.color_above(b, new) as usize;

        let mut next = table.clone();
        let before = demand_of(next.f[c_old], next.g[c_old], h)
            + demand_of(next.f[c_new], next.g[c_new], h);
        next.tau[b] = new as u16;
        next.f[c_new] += (old - new) as i64;
        next.g[c_old] -= h - old as i64;
        if new > 0 {
            next.g[c_new] += h - new as i64;
        } else {
            next.empties += 1;
        }
        let after = demand_of(next.f[c_old], next.g[c_old], h)
            + demand_of(next.f[c_new], next.g[c_new], h);
        next.demand += after - before;
        debug_assert!(self.is_consistent(&next));
        Some(next)
    }

    /// Every table reachable by removing one border, in bin order.
    pub fn successors(&self, table: &TopBorderTable) -> Vec<(usize, TopBorderTable)> {
        (0..self.num_bins())
            .filter_map(|b| self.step(table, b).map(|t| (b, t)))
            .collect()
    }

    /// True when the cached statistics match a from-scratch recomputation.
    pub fn stats_agree(&self, table: &TopBorderTable) -> bool {
        let tau: Vec<usize> = table.tau.iter().map(|&t| t as usize).collect();
        let fresh = self.scratch(&tau);
        fresh.f == table.f
            && fresh.g == table.g
            && fresh.empties == table.empties
            && fresh.demand == table.demand
    }
}
