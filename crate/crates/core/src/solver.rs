//! Deciding instances by search over top-border tables, and turning a
//! certificate (an order in which to remove borders) into explicit moves.

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::model::{Color, Configuration, Instance, Move, Semantics};
use crate::topborder::{DemandRule, TableContext, TopBorderTable};

/// Default cap on distinct tables visited by [`decide`].
pub const DEFAULT_TABLE_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub budget: usize,
    pub semantics: Semantics,
    pub rule: DemandRule,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            budget: DEFAULT_TABLE_BUDGET,
            semantics: Semantics::Water,
            rule: DemandRule::TopColor,
        }
    }
}

impl SolveOptions {
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_semantics(mut self, semantics: Semantics) -> Self {
        self.semantics = semantics;
        self
    }

    pub fn with_rule(mut self, rule: DemandRule) -> Self {
        self.rule = rule;
        self
    }
}

/// Bins in the order their top borders are removed. Its length equals the
/// number of non-trivial borders of the initial configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub bins: Vec<usize>,
}

impl Certificate {
    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// Replays the induced table chain; true iff every step is allowed and the
    /// chain ends at the all-zero table.
    pub fn is_valid(&self, ctx: &TableContext) -> bool {
        let mut t = ctx.initial_table();
        for &b in &self.bins {
            if b >= ctx.num_bins() {
                return false;
            }
            match ctx.step(&t, b) {
                Some(next) => t = next,
                None => return false,
            }
        }
        t.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub decision: bool,
    pub certificate: Option<Certificate>,
    pub moves: Option<Vec<Move>>,
    pub tables_explored: usize,
    pub semantics: Semantics,
}

/// Depth-first search over tables with a visited set. Successors that drop the
/// top border further are tried first, then lower bin indices.
pub fn decide(inst: &Instance, opts: &SolveOptions) -> Result<SolveReport> {
    let ctx = TableContext::for_instance(inst).with_rule(opts.rule);
    let (cert, explored) = search(&ctx, opts.budget)?;
    Ok(SolveReport {
        decision: cert.is_some(),
        certificate: cert,
        moves: None,
        tables_explored: explored,
        semantics: opts.semantics,
    })
}

/// Certificate for a yes-instance, `None` for a no-instance.
pub fn certificate(inst: &Instance, opts: &SolveOptions) -> Result<Option<Certificate>> {
    Ok(decide(inst, opts)?.certificate)
}

/// Decides and, for yes-instances, reconstructs a move sequence.
pub fn solve(inst: &Instance, opts: &SolveOptions) -> Result<SolveReport> {
    let mut report = decide(inst, opts)?;
    if let Some(cert) = &report.certificate {
        report.moves = Some(extract_moves(inst, cert, opts.semantics)?);
    }
    Ok(report)
}

struct Frame {
    succs: Vec<(usize, TopBorderTable)>,
    next: usize,
}

fn ordered_successors(ctx: &TableContext, t: &TopBorderTable) -> Vec<(usize, TopBorderTable)> {
    let mut s = ctx.successors(t);
    s.sort_by_key(|(b, nt)| (std::cmp::Reverse(t.tau_at(*b) - nt.tau_at(*b)), *b));
    s
}

fn search(ctx: &TableContext, budget: usize) -> Result<(Option<Certificate>, usize)> {
    let root = ctx.initial_table();
    let mut visited: FxHashSet<Box<[u16]>> = FxHashSet::default();
    visited.insert(root.tau().into());
    if root.is_zero() {
        return Ok((Some(Certificate { bins: Vec::new() }), 1));
    }
    let mut path: Vec<usize> = Vec::new();
    let mut stack = vec![Frame {
        succs: ordered_successors(ctx, &root),
        next: 0,
    }];
    while let Some(frame) = stack.last_mut() {
        if frame.next == frame.succs.len() {
            stack.pop();
            path.pop();
            continue;
        }
        let (b, t) = frame.succs[frame.next].clone();
        frame.next += 1;
        if !visited.insert(t.tau().into()) {
            continue;
        }
        if visited.len() > budget {
            return Err(Error::ResourceLimit {
                explored: visited.len(),
                budget,
            });
        }
        path.push(b);
        if t.is_zero() {
            return Ok((Some(Certificate { bins: path }), visited.len()));
        }
        stack.push(Frame {
            succs: ordered_successors(ctx, &t),
            next: 0,
        });
    }
    Ok((None, visited.len()))
}

fn monochrome_bins_of(table: &TopBorderTable, cur: &Configuration, c: Color) -> Vec<usize> {
    (0..cur.num_bins())
        .filter(|&b| table.tau_at(b) == 0 && cur.bin(b).top() == Some(c))
        .collect()
}

fn space(cur: &Configuration, b: usize) -> usize {
    cur.capacity() - cur.bin(b).len()
}

/// Empties surplus monochrome bins until every color `c` occupies exactly
/// `M_c` of them. The table is unchanged; all moves are water-moves.
pub fn tighten(ctx: &TableContext, cfg: &Configuration) -> Result<(Configuration, Vec<Move>)> {
    let table = ctx.table_of(cfg)?;
    if cfg.color_counts() != ctx.initial().color_counts() {
        return Err(Error::NotConsistent("unit counts differ from the initial configuration".into()));
    }
    if !ctx.is_consistent(&table) {
        return Err(Error::NotConsistent("top-border table violates the demand bound".into()));
    }
    let mut cur = cfg.clone();
    let mut moves = Vec::new();
    tighten_in_place(ctx, &table, &mut cur, &mut moves)?;
    Ok((cur, moves))
}

fn tighten_in_place(
    ctx: &TableContext,
    table: &TopBorderTable,
    cur: &mut Configuration,
    moves: &mut Vec<Move>,
) -> Result<()> {
    for c in 1..ctx.color_bound() as Color {
        let need = ctx.monochrome_demand(table, c) as usize;
        loop {
            let mono = monochrome_bins_of(table, cur, c);
            if mono.len() < need {
                return Err(Error::NotConsistent(format!(
                    "color {c} has {} monochrome bins but needs {need}",
                    mono.len()
                )));
            }
            if mono.len() == need {
                break;
            }
            let src = *mono
                .iter()
                .min_by_key(|&&b| (cur.bin(b).len(), b))
                .expect("non-empty");
            while !cur.bin(src).is_empty() {
                let target = (0..cur.num_bins())
                    .find(|&x| {
                        x != src
                            && ctx.top_color(table, x) == Some(c)
                            && space(cur, x) > 0
                    })
                    .or_else(|| {
                        mono.iter()
                            .copied()
                            .find(|&x| x != src && space(cur, x) > 0)
                    })
                    .ok_or_else(|| {
                        Error::NotConsistent(format!("no room left for color {c}"))
                    })?;
                let m = cur.pour(src, target, Semantics::Water)?;
                moves.push(Move::new(src, target, m));
            }
        }
    }
    Ok(())
}

/// Moves realizing `cert` from the initial configuration. Each step pours the
/// run above the bin's top border onto same-topped non-monochrome bins, then
/// onto monochrome bins of that color, then into an empty bin, and re-tightens.
pub fn extract_moves(inst: &Instance, cert: &Certificate, semantics: Semantics) -> Result<Vec<Move>> {
    let ctx = TableContext::for_instance(inst);
    let mut table = ctx.initial_table();
    let mut cur = inst.config().clone();
    let mut moves = Vec::new();
    tighten_in_place(&ctx, &table, &mut cur, &mut moves)?;

    for (step, &b) in cert.bins.iter().enumerate() {
        let broken = Error::InvalidCertificate { step, bin: b };
        if b >= ctx.num_bins() {
            return Err(broken);
        }
        let next = ctx.step(&table, b).ok_or_else(|| broken.clone())?;
        let t = table.tau_at(b);
        let c = ctx.top_color(&table, b).expect("tau > 0");
        while cur.bin(b).len() > t {
            let nb = cur.num_bins();
            let target = (0..nb)
                .find(|&x| x != b && ctx.top_color(&table, x) == Some(c) && space(&cur, x) > 0)
                .or_else(|| {
                    (0..nb).find(|&x| {
                        table.tau_at(x) == 0 && cur.bin(x).top() == Some(c) && space(&cur, x) > 0
                    })
                })
                .or_else(|| (0..nb).find(|&x| cur.bin(x).is_empty()))
                .ok_or_else(|| broken.clone())?;
            let m = cur.pour(b, target, Semantics::Water)?;
            moves.push(Move::new(b, target, m));
        }
        table = next;
        tighten_in_place(&ctx, &table, &mut cur, &mut moves).map_err(|_| broken.clone())?;
    }
    if !table.is_zero() || !cur.is_sorted() {
        return Err(Error::InvalidCertificate {
            step: cert.len(),
            bin: usize::MAX,
        });
    }
    Ok(match semantics {
        Semantics::Water => moves,
        Semantics::Ball => moves
            .into_iter()
            .flat_map(|m| std::iter::repeat_n(Move::new(m.src, m.dst, 1), m.count))
            .collect(),
    })
}

/// Upper bound on the length of extracted ball-move sequences: `(2h-1)hn`.
pub fn ball_length_bound(h: usize, n: usize) -> usize {
    (2 * h).saturating_sub(1) * h * n
}

/// Upper bound on the length of extracted water-move sequences: `2(h-1)n*min(h,n)`.
pub fn water_length_bound(h: usize, n: usize) -> usize {
    2 * h.saturating_sub(1) * n * h.min(n)
}
