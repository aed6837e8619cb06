//! How many empty bins suffice: constructive sorters for the upper bounds,
//! the lower-bound constant, measured minimum `k`, and a checker for the
//! removal-count recurrence on traces of the lower-bound family.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{Color, Configuration, Instance, Move, Semantics};
use crate::solver::{decide, SolveOptions};
use crate::sweep;

/// `ceil((h - 1) n / h)`: enough empty bins for every instance.
pub fn upper_bound_value(n: usize, h: usize) -> usize {
    if h == 0 {
        return 0;
    }
    ((h - 1) * n).div_ceil(h)
}

/// `ceil(19 min(n, h) / 64)`: some instance needs at least this many.
pub fn lower_bound_value(n: usize, h: usize) -> usize {
    (19 * n.min(h)).div_ceil(64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub n: usize,
    pub h: usize,
    pub upper: usize,
    pub lower: usize,
    pub empirical_min_k: Option<usize>,
}

impl BoundReport {
    pub fn new(n: usize, h: usize) -> Self {
        BoundReport {
            n,
            h,
            upper: upper_bound_value(n, h),
            lower: lower_bound_value(n, h),
            empirical_min_k: None,
        }
    }
}

fn pour(cur: &mut Configuration, moves: &mut Vec<Move>, src: usize, dst: usize) -> Result<usize> {
    let m = cur.pour(src, dst, Semantics::Water)?;
    moves.push(Move::new(src, dst, m));
    Ok(m)
}

/// Total units of each color, indexed by color id.
fn units_per_color(cfg: &Configuration) -> Vec<usize> {
    let mut v = vec![0; cfg.max_color() as usize + 1];
    for (c, n) in cfg.color_counts() {
        v[c as usize] = n;
    }
    v
}

fn is_mono(cfg: &Configuration, b: usize) -> bool {
    cfg.bin(b).is_monochrome() || cfg.bin(b).is_empty()
}

/// Pours the top run of `src` onto a monochrome bin of the same color with
/// room (preferring fuller ones), or else into an empty bin.
fn pour_away(
    cur: &mut Configuration,
    moves: &mut Vec<Move>,
    src: usize,
    keep: &dyn Fn(usize) -> bool,
) -> Result<()> {
    let c = cur.bin(src).top().expect("non-empty");
    let h = cur.capacity();
    let target = (0..cur.num_bins())
        .filter(|&b| b != src && keep(b) && cur.bin(b).is_monochrome() && cur.bin(b).top() == Some(c))
        .filter(|&b| cur.bin(b).len() < h)
        .max_by_key(|&b| (cur.bin(b).len(), std::cmp::Reverse(b)))
        .or_else(|| (0..cur.num_bins()).find(|&b| b != src && keep(b) && cur.bin(b).is_empty()))
        .ok_or_else(|| Error::PreconditionViolated("ran out of empty bins".into()))?;
    pour(cur, moves, src, target)?;
    Ok(())
}

/// Sorts by giving every color `c` exactly `units(c) / h` dedicated bins.
/// First `extra` unsorted full bins are made monochrome by pouring away
/// everything above their bottom run, then monochrome bins of one color are
/// merged, then every remaining bin is poured into the dedicated bins.
fn slot_sort(inst: &Instance, extra: usize) -> Result<Vec<Move>> {
    let h = inst.capacity();
    let mut cur = inst.config().clone();
    let mut moves = Vec::new();
    let nb = cur.num_bins();
    let need = units_per_color(&cur);

    // bins that stay fixed as sources until the final phase
    let mut candidates: Vec<usize> = (0..nb).filter(|&b| !is_mono(&cur, b)).collect();
    candidates.sort_by_key(|&b| {
        let runs = cur.bin(b).runs();
        (std::cmp::Reverse(runs[0].1), b)
    });
    let chosen: Vec<usize> = candidates.iter().copied().take(extra).collect();
    let mut is_source = vec![false; nb];
    for &b in &candidates[chosen.len()..] {
        is_source[b] = true;
    }
    for &b in &chosen {
        while !cur.bin(b).is_monochrome() {
            let keep = |x: usize| !is_source[x] && x != b;
            pour_away(&mut cur, &mut moves, b, &keep)?;
        }
    }

    // merge: per color keep at most ceil(units/h) monochrome bins
    for c in 1..need.len() {
        loop {
            let mut mono: Vec<usize> = (0..nb)
                .filter(|&b| !is_source[b] && cur.bin(b).is_monochrome() && cur.bin(b).top() == Some(c as Color))
                .collect();
            let units: usize = mono.iter().map(|&b| cur.bin(b).len()).sum();
            if mono.len() <= units.div_ceil(h) {
                break;
            }
            mono.sort_by_key(|&b| (cur.bin(b).len(), b));
            let src = mono[0];
            let dst = *mono[1..]
                .iter()
                .find(|&&b| cur.bin(b).len() < h)
                .expect("fewer units than bins implies room");
            pour(&mut cur, &mut moves, src, dst)?;
        }
    }

    // dedicate bins: existing monochrome ones first, then empties
    let mut slots: Vec<Vec<usize>> = vec![Vec::new(); need.len()];
    for b in 0..nb {
        if !is_source[b] && !cur.bin(b).is_empty() && cur.bin(b).is_monochrome() {
            slots[cur.bin(b).top().unwrap() as usize].push(b);
        }
    }
    let mut empties = (0..nb).filter(|&b| !is_source[b] && cur.bin(b).is_empty());
    for c in 1..need.len() {
        let want = need[c] / h;
        if slots[c].len() > want {
            return Err(Error::PreconditionViolated(format!(
                "color {c} holds more monochrome bins than it fills"
            )));
        }
        while slots[c].len() < want {
            let e = empties.next().ok_or_else(|| {
                Error::PreconditionViolated("not enough empty bins to dedicate one per color block".into())
            })?;
            slots[c].push(e);
        }
    }

    for b in (0..nb).filter(|&b| is_source[b]) {
        while let Some(c) = cur.bin(b).top() {
            let dst = slots[c as usize]
                .iter()
                .copied()
                .find(|&s| cur.bin(s).len() < h)
                .ok_or_else(|| Error::PreconditionViolated(format!("no room left for color {c}")))?;
            pour(&mut cur, &mut moves, b, dst)?;
        }
    }
    debug_assert!(cur.is_sorted());
    Ok(moves)
}

/// Water-moves sorting an instance with `k >= n` by pouring every unsorted bin
/// into bins dedicated to its colors.
pub fn bucket_sort_solve(inst: &Instance) -> Result<Vec<Move>> {
    if inst.k() < inst.n() {
        return Err(Error::PreconditionViolated(format!(
            "needs k >= n, got k={} n={}",
            inst.k(),
            inst.n()
        )));
    }
    slot_sort(inst, 0)
}

/// Water-moves sorting an instance with `k >= ceil((h-1) n / h)`: first make
/// enough full bins monochrome that every color block can own a bin, then
/// bucket sort.
pub fn improved_solve(inst: &Instance) -> Result<Vec<Move>> {
    let (n, h, k) = (inst.n(), inst.capacity(), inst.k());
    if k < upper_bound_value(n, h) {
        return Err(Error::PreconditionViolated(format!(
            "needs k >= {}, got {k}",
            upper_bound_value(n, h)
        )));
    }
    let cfg = inst.config();
    let mono_full = (0..n).filter(|&b| cfg.bin(b).is_monochrome()).count();
    slot_sort(inst, n.saturating_sub(k + mono_full))
}

/// Smallest `k <= k_max` for which `base` (its own empty bins are ignored)
/// becomes solvable.
pub fn empirical_min_k(base: &Instance, k_max: usize, opts: &SolveOptions) -> Result<Option<usize>> {
    for k in 0..=k_max {
        if decide(&base.with_k(k), opts)?.decision {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Removal counts at the first moment a unit of color 1 has moved, for the
/// family where every bin holds `1..=n` from the bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceSnapshot {
    /// `r[c - 1]` = units of color `c` that have left their initial position.
    pub r: Vec<usize>,
    /// Colors present in initially empty bins.
    pub u: Vec<Color>,
}

pub fn recurrence_snapshot(inst: &Instance, moves: &[Move], semantics: Semantics) -> Result<RecurrenceSnapshot> {
    let n = inst.n();
    let shaped = inst.capacity() == n
        && inst
            .full_bins()
            .iter()
            .all(|b| b.units().iter().copied().eq(1..=n as Color));
    if !shaped {
        return Err(Error::TraceInvalid(
            "instance is not n bins each holding 1..=n with h = n".into(),
        ));
    }
    let mut cur = inst.config().clone();
    let mut low = vec![n; n];
    for (i, &mv) in moves.iter().enumerate() {
        let moved = cur.bin(mv.src).top();
        cur = cur
            .apply(mv, semantics)
            .map_err(|e| Error::TraceInvalid(format!("move {i}: {e}")))?;
        for (b, l) in low.iter_mut().enumerate() {
            *l = (*l).min(cur.bin(b).len());
        }
        if moved == Some(1) {
            // positions at or above low[b] have been vacated at some point;
            // position p holds color p + 1
            let mut r = vec![0; n];
            for &l in &low {
                for slot in r.iter_mut().skip(l) {
                    *slot += 1;
                }
            }
            let mut u: Vec<Color> = (n..cur.num_bins())
                .flat_map(|b| cur.bin(b).units().to_vec())
                .collect();
            u.sort_unstable();
            u.dedup();
            return Ok(RecurrenceSnapshot { r, u });
        }
    }
    Err(Error::TraceInvalid("no unit of color 1 is ever moved".into()))
}

/// Checks `r_1 = 1`, that `r` is non-decreasing, and
/// `r_{c+1} - r_c >= ceil(r_c / (n - c))` for every color `c < n` outside `U`.
pub fn recurrence_check(inst: &Instance, moves: &[Move], semantics: Semantics) -> Result<bool> {
    let snap = recurrence_snapshot(inst, moves, semantics)?;
    Ok(recurrence_holds(&snap))
}

pub fn recurrence_holds(snap: &RecurrenceSnapshot) -> bool {
    let r = &snap.r;
    let n = r.len();
    if r.first() != Some(&1) || r.windows(2).any(|w| w[1] < w[0]) {
        return false;
    }
    (1..n).all(|c| {
        snap.u.contains(&(c as Color)) || r[c] - r[c - 1] >= r[c - 1].div_ceil(n - c)
    })
}

/// One report per `(n, h)`, measuring the minimum `k` of the lower-bound family
/// up to the upper bound. Budget exhaustion leaves the measurement empty.
pub fn sweep_lower_family(ns: &[usize], hs: &[usize], opts: &SolveOptions) -> Vec<BoundReport> {
    let pairs: Vec<(usize, usize)> = ns.iter().flat_map(|&n| hs.iter().map(move |&h| (n, h))).collect();
    sweep::map(&pairs, |&(n, h)| {
        let mut rep = BoundReport::new(n, h);
        rep.empirical_min_k = crate::generators::lower_bound_family(n, h, 0)
            .ok()
            .and_then(|base| empirical_min_k(&base, rep.upper, opts).ok().flatten());
        rep
    })
}

/// `n,h,k_lower,k_upper,k_empirical` with an empty last field when unmeasured.
pub fn reports_to_csv(reports: &[BoundReport]) -> String {
    let mut s = String::from("n,h,k_lower,k_upper,k_empirical\n");
    for r in reports {
        let emp = r.empirical_min_k.map(|k| k.to_string()).unwrap_or_default();
        let _ = writeln!(s, "{},{},{},{},{}", r.n, r.h, r.lower, r.upper, emp);
    }
    s
}
