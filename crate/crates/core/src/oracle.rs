//! Brute-force breadth-first search over whole configurations, with bins
//! sorted into a canonical order so that permuted states are visited once.
//! Deliberately naive; it is the reference the other deciders are tested
//! against.

use std::cmp::Ordering;

use crate::arena::Arena;
use crate::error::{Error, Result};
use crate::model::{Configuration, Instance, Move, Semantics};

/// Default cap on distinct canonical states per search.
pub const DEFAULT_STATE_BUDGET: usize = 5_000_000;

/// Canonical byte encoding of a configuration: each bin padded to the
/// capacity with zeros, bins ordered by length and then contents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateKey(Box<[u8]>);

impl StateKey {
    pub fn of(cfg: &Configuration) -> Result<StateKey> {
        let mut buf = encode(cfg)?;
        canonicalize(cfg.capacity(), &mut buf, &mut Vec::new());
        Ok(StateKey(buf.into_boxed_slice()))
    }

    pub fn bytes(&self) -> &[u8] {
        &self.0
    }
}

fn encode(cfg: &Configuration) -> Result<Vec<u8>> {
    let h = cfg.capacity();
    if h > 255 || cfg.max_color() > 255 {
        return Err(Error::InvalidInput(
            "the reference search supports at most 255 colors and capacity 255".into(),
        ));
    }
    let mut buf = vec![0u8; h * cfg.num_bins()];
    for (i, bin) in cfg.bins().iter().enumerate() {
        for (j, &c) in bin.units().iter().enumerate() {
            buf[i * h + j] = c as u8;
        }
    }
    Ok(buf)
}

fn bin_len(bin: &[u8]) -> usize {
    bin.iter().position(|&c| c == 0).unwrap_or(bin.len())
}

fn cmp_bins(a: &[u8], b: &[u8]) -> Ordering {
    bin_len(a).cmp(&bin_len(b)).then_with(|| a.cmp(b))
}

fn canonicalize(h: usize, buf: &mut [u8], scratch: &mut Vec<u8>) {
    if h == 0 {
        return;
    }
    let mut order: Vec<usize> = (0..buf.len() / h).collect();
    order.sort_by(|&x, &y| cmp_bins(&buf[x * h..(x + 1) * h], &buf[y * h..(y + 1) * h]));
    scratch.clear();
    for i in order {
        scratch.extend_from_slice(&buf[i * h..(i + 1) * h]);
    }
    buf.copy_from_slice(scratch);
}

fn is_goal(h: usize, buf: &[u8]) -> bool {
    buf.chunks(h).all(|bin| {
        let len = bin_len(bin);
        len == 0 || (len == h && bin.iter().all(|&c| c == bin[0]))
    })
}

struct Search {
    arena: Arena<u8>,
    parents: Vec<u32>,
    goal: Option<usize>,
}

/// Breadth-first search from the instance. Stops at the first sorted state,
/// after `max_depth` levels, or when the state budget runs out.
fn bfs(
    cfg: &Configuration,
    semantics: Semantics,
    budget: usize,
    max_depth: Option<usize>,
) -> Result<Search> {
    let h = cfg.capacity();
    let nb = cfg.num_bins();
    let mut start = encode(cfg)?;
    let mut scratch = Vec::with_capacity(start.len());
    canonicalize(h, &mut start, &mut scratch);
    let mut s = Search {
        arena: Arena::new(start.len()),
        parents: vec![u32::MAX],
        goal: None,
    };
    s.arena.insert(&start);
    if is_goal(h, &start) {
        s.goal = Some(0);
        return Ok(s);
    }

    let mut cur = vec![0u8; start.len()];
    let mut next = vec![0u8; start.len()];
    let mut lens = vec![0usize; nb];
    let mut head = 0;
    let mut level_end = 1;
    let mut depth = 0;
    while head < s.arena.len() {
        if head == level_end {
            depth += 1;
            level_end = s.arena.len();
        }
        if max_depth.is_some_and(|d| depth >= d) {
            break;
        }
        cur.copy_from_slice(s.arena.get(head));
        for b in 0..nb {
            lens[b] = bin_len(&cur[b * h..(b + 1) * h]);
        }
        for src in 0..nb {
            let sl = lens[src];
            if sl == 0 {
                continue;
            }
            let top = cur[src * h + sl - 1];
            let run = cur[src * h..src * h + sl]
                .iter()
                .rev()
                .take_while(|&&c| c == top)
                .count();
            for dst in 0..nb {
                let dl = lens[dst];
                if dst == src || dl == h || (dl > 0 && cur[dst * h + dl - 1] != top) {
                    continue;
                }
                let m = match semantics {
                    Semantics::Ball => 1,
                    Semantics::Water => run.min(h - dl),
                };
                next.copy_from_slice(&cur);
                for i in 0..m {
                    next[src * h + sl - 1 - i] = 0;
                    next[dst * h + dl + i] = top;
                }
                canonicalize(h, &mut next, &mut scratch);
                if let Some(id) = s.arena.insert(&next) {
                    s.parents.push(head as u32);
                    if is_goal(h, &next) {
                        s.goal = Some(id);
                        return Ok(s);
                    }
                    if s.arena.len() > budget {
                        return Err(Error::ResourceLimit {
                            explored: s.arena.len(),
                            budget,
                        });
                    }
                }
            }
        }
        head += 1;
    }
    Ok(s)
}

/// Rebuilds concrete moves (in the instance's own bin order) along the
/// parent chain ending at `goal`.
fn reconstruct(cfg: &Configuration, semantics: Semantics, s: &Search, goal: usize) -> Result<Vec<Move>> {
    let mut chain = vec![goal];
    while let Some(&last) = chain.last() {
        let p = s.parents[last];
        if p == u32::MAX {
            break;
        }
        chain.push(p as usize);
    }
    chain.reverse();
    let mut cur = cfg.clone();
    let mut moves = Vec::with_capacity(chain.len().saturating_sub(1));
    for &id in &chain[1..] {
        let want = s.arena.get(id);
        let mut found = None;
        for mv in cur.legal_moves(semantics) {
            let next = cur.apply(mv, semantics)?;
            if StateKey::of(&next)?.bytes() == want {
                found = Some((mv, next));
                break;
            }
        }
        let (mv, next) = found.ok_or_else(|| {
            Error::TraceInvalid("parent chain does not follow a legal move".into())
        })?;
        moves.push(mv);
        cur = next;
    }
    Ok(moves)
}

/// True iff some sorted configuration is reachable.
pub fn bfs_decide(inst: &Instance, semantics: Semantics) -> Result<bool> {
    bfs_decide_with_budget(inst, semantics, DEFAULT_STATE_BUDGET)
}

pub fn bfs_decide_with_budget(inst: &Instance, semantics: Semantics, budget: usize) -> Result<bool> {
    Ok(bfs(inst.config(), semantics, budget, None)?.goal.is_some())
}

/// A shortest move sequence to any sorted configuration, or `None` when no
/// sorted configuration is reachable.
pub fn bfs_shortest(inst: &Instance, semantics: Semantics) -> Result<Option<Vec<Move>>> {
    bfs_shortest_with_budget(inst, semantics, DEFAULT_STATE_BUDGET)
}

pub fn bfs_shortest_with_budget(
    inst: &Instance,
    semantics: Semantics,
    budget: usize,
) -> Result<Option<Vec<Move>>> {
    let s = bfs(inst.config(), semantics, budget, None)?;
    s.goal
        .map(|g| reconstruct(inst.config(), semantics, &s, g))
        .transpose()
}

/// Like [`bfs_shortest`] but only explores sequences of at most `max_len`
/// moves; `None` means no sorting sequence that short exists.
pub fn bfs_shortest_within(
    inst: &Instance,
    semantics: Semantics,
    max_len: usize,
) -> Result<Option<Vec<Move>>> {
    let s = bfs(inst.config(), semantics, DEFAULT_STATE_BUDGET, Some(max_len))?;
    s.goal
        .map(|g| reconstruct(inst.config(), semantics, &s, g))
        .transpose()
}

/// Ball and water verdicts must coincide; `false` indicates a bug.
pub fn equivalence_check(inst: &Instance) -> Result<bool> {
    Ok(bfs_decide(inst, Semantics::Ball)? == bfs_decide(inst, Semantics::Water)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(h: usize, full: Vec<Vec<u32>>, k: usize) -> Instance {
        Instance::new(h, full, k).unwrap()
    }

    #[test]
    fn keys_ignore_bin_order() {
        let a = Configuration::from_vecs(2, vec![vec![1, 2], vec![], vec![2, 1]]).unwrap();
        let b = Configuration::from_vecs(2, vec![vec![2, 1], vec![1, 2], vec![]]).unwrap();
        assert_eq!(StateKey::of(&a).unwrap(), StateKey::of(&b).unwrap());
        assert_eq!(StateKey::of(&a).unwrap().bytes(), &[0, 0, 1, 2, 2, 1]);
    }

    #[test]
    fn swap_needs_three() {
        let i = inst(2, vec![vec![1, 2], vec![2, 1]], 2);
        for sem in [Semantics::Ball, Semantics::Water] {
            let moves = bfs_shortest(&i, sem).unwrap().unwrap();
            assert_eq!(moves.len(), 3);
            assert!(i.config().replay(&moves, sem).unwrap().is_sorted());
        }
        assert!(bfs_shortest_within(&i, Semantics::Water, 2).unwrap().is_none());
        assert_eq!(bfs_shortest_within(&i, Semantics::Water, 3).unwrap().unwrap().len(), 3);
    }

    #[test]
    fn sorted_is_trivially_yes() {
        let i = inst(3, vec![vec![1; 3], vec![2; 3]], 0);
        assert!(bfs_decide(&i, Semantics::Ball).unwrap());
        assert_eq!(bfs_shortest(&i, Semantics::Water).unwrap().unwrap(), vec![]);
    }

    #[test]
    fn five_cycle_is_no() {
        let i = inst(
            2,
            vec![vec![1, 2], vec![3, 2], vec![3, 4], vec![4, 5], vec![1, 5]],
            1,
        );
        assert!(!bfs_decide(&i, Semantics::Ball).unwrap());
        assert!(bfs_shortest(&i, Semantics::Water).unwrap().is_none());
        assert!(equivalence_check(&i).unwrap());
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let i = inst(3, vec![vec![1, 2, 3], vec![3, 1, 2], vec![2, 3, 1]], 2);
        assert!(matches!(
            bfs_decide_with_budget(&i, Semantics::Ball, 3),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn wide_colors_rejected() {
        let i = inst(1, vec![vec![300]], 0);
        assert!(matches!(bfs_decide(&i, Semantics::Ball), Err(Error::InvalidInput(_))));
    }
}
