//! Breadth-first decider over a compressed configuration space.
//!
//! A bin that still holds part of its initial contents is described by the
//! index of its current top run and how many units that run holds now. Once a
//! bin is reduced to a single color it forgets its origin and is stored as
//! `(color, count)`. Those bins are interchangeable, so their codes are sorted
//! into the slots they occupy.

use crate::arena::Arena;
use crate::error::{Error, Result};
use crate::model::{Color, Instance};
use crate::solver::{SolveOptions, SolveReport};

const ORIGINAL: u32 = 1 << 31;

fn original(run: usize, count: usize) -> u32 {
    ORIGINAL | ((run as u32) << 12) | count as u32
}

fn mono(color: Color, count: usize) -> u32 {
    (color << 12) | count as u32
}

struct Layout {
    h: usize,
    /// runs[b] = (color, original length) bottom to top.
    runs: Vec<Vec<(Color, usize)>>,
    /// prefix[b][j] = units below run j.
    prefix: Vec<Vec<usize>>,
}

impl Layout {
    /// (length, top color, top run length) of a bin code.
    fn describe(&self, b: usize, code: u32) -> (usize, Color, usize) {
        let count = (code & 0xfff) as usize;
        if code & ORIGINAL != 0 {
            let run = ((code & !ORIGINAL) >> 12) as usize;
            (self.prefix[b][run] + count, self.runs[b][run].0, count)
        } else {
            (count, code >> 12, count)
        }
    }

    fn shrink(&self, b: usize, code: u32, m: usize) -> u32 {
        let count = (code & 0xfff) as usize;
        if code & ORIGINAL == 0 {
            return if count == m { 0 } else { code - m as u32 };
        }
        if count > m {
            return code - m as u32;
        }
        let run = ((code & !ORIGINAL) >> 12) as usize - 1;
        let (c, len) = self.runs[b][run];
        if run == 0 {
            mono(c, len)
        } else {
            original(run, len)
        }
    }

    fn grow(&self, code: u32, color: Color, m: usize) -> u32 {
        if code == 0 {
            mono(color, m)
        } else {
            code + m as u32
        }
    }

    fn initial(&self) -> Vec<u32> {
        (0..self.runs.len())
            .map(|b| match self.runs[b].len() {
                0 => 0,
                1 => mono(self.runs[b][0].0, self.runs[b][0].1),
                r => original(r - 1, self.runs[b][r - 1].1),
            })
            .collect()
    }

    fn canonicalize(&self, state: &mut [u32]) {
        let mut slots: Vec<usize> = Vec::new();
        let mut codes: Vec<u32> = Vec::new();
        for (i, &c) in state.iter().enumerate() {
            if c & ORIGINAL == 0 {
                slots.push(i);
                codes.push(c);
            }
        }
        codes.sort_unstable();
        for (i, c) in slots.into_iter().zip(codes) {
            state[i] = c;
        }
    }

    fn is_goal(&self, state: &[u32]) -> bool {
        state.iter().all(|&c| {
            c & ORIGINAL == 0 && {
                let n = (c & 0xfff) as usize;
                n == 0 || n == self.h
            }
        })
    }
}

/// Decides solvability by exploring water-moves on the compressed encoding.
/// The verdict holds for both semantics; `tables_explored` counts distinct
/// compressed states.
pub fn decide_compressed(inst: &Instance, opts: &SolveOptions) -> Result<SolveReport> {
    let cfg = inst.config();
    let h = cfg.capacity();
    if h >= 0xfff || cfg.max_color() >= (1 << 19) {
        return Err(Error::InvalidInput(
            "instance too large for the compressed encoding".into(),
        ));
    }
    let runs: Vec<Vec<(Color, usize)>> = cfg.bins().iter().map(|s| s.runs()).collect();
    let prefix = runs
        .iter()
        .map(|r| {
            let mut acc = 0;
            r.iter()
                .map(|&(_, l)| {
                    let p = acc;
                    acc += l;
                    p
                })
                .collect()
        })
        .collect();
    let layout = Layout { h, runs, prefix };
    let nb = cfg.num_bins();

    let mut start = layout.initial();
    layout.canonicalize(&mut start);
    let mut arena = Arena::new(nb);
    arena.insert(&start);
    let report = |decision: bool, explored: usize| SolveReport {
        decision,
        certificate: None,
        moves: None,
        tables_explored: explored,
        semantics: opts.semantics,
    };
    if layout.is_goal(&start) {
        return Ok(report(true, 1));
    }

    let mut head = 0;
    let mut cur = vec![0u32; nb];
    let mut next = vec![0u32; nb];
    let mut info = vec![(0usize, 0 as Color, 0usize); nb];
    while head < arena.len() {
        cur.copy_from_slice(arena.get(head));
        head += 1;
        for b in 0..nb {
            info[b] = layout.describe(b, cur[b]);
        }
        for src in 0..nb {
            let (slen, stop, srun) = info[src];
            if slen == 0 {
                continue;
            }
            for dst in 0..nb {
                let (dlen, dtop, _) = info[dst];
                if dst == src || dlen == h || (dlen > 0 && dtop != stop) {
                    continue;
                }
                let m = srun.min(h - dlen);
                next.copy_from_slice(&cur);
                next[src] = layout.shrink(src, cur[src], m);
                next[dst] = layout.grow(cur[dst], stop, m);
                layout.canonicalize(&mut next);
                if arena.insert(&next).is_some() {
                    if layout.is_goal(&next) {
                        return Ok(report(true, arena.len()));
                    }
                    if arena.len() > opts.budget {
                        return Err(Error::ResourceLimit {
                            explored: arena.len(),
                            budget: opts.budget,
                        });
                    }
                }
            }
        }
    }
    Ok(report(false, arena.len()))
}
