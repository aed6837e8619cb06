//! Text formats.
//!
//! Instance files start with a header `h n k` followed by `n` lines of `h`
//! color labels each, bottom unit first. Move files hold one `src dst count`
//! line per move with 0-based bin indices. In both, blank lines and lines
//! starting with `#` are ignored.
//!
//! Labels are mapped to dense color ids `1..=C`. When every label is a
//! non-negative integer they are ranked numerically (so dense ids map to
//! themselves); otherwise ids follow order of first appearance.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{Color, Instance, Move, Semantics};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedInstance {
    pub instance: Instance,
    /// `labels[c - 1]` is the label written for color id `c`.
    pub labels: Vec<String>,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse::<usize>().map_err(|_| Error::Parse {
        line,
        msg: format!("{what} must be a non-negative integer, got '{tok}'"),
    })
}

pub fn parse_instance(text: &str) -> Result<ParsedInstance> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header 'h n k'".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(Error::Parse {
            line: hl,
            msg: format!("header needs 3 fields 'h n k', got {}", fields.len()),
        });
    }
    let h = parse_usize(fields[0], hl, "h")?;
    let n = parse_usize(fields[1], hl, "n")?;
    let k = parse_usize(fields[2], hl, "k")?;
    if h == 0 {
        return Err(Error::Validation {
            line: hl,
            msg: "capacity h must be positive".into(),
        });
    }

    let mut rows: Vec<(usize, Vec<&str>)> = Vec::with_capacity(n);
    let mut last = hl;
    for (ln, l) in lines {
        last = ln;
        if rows.len() == n {
            return Err(Error::Parse {
                line: ln,
                msg: format!("unexpected line after {n} bins"),
            });
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != h {
            return Err(Error::Validation {
                line: ln,
                msg: format!("bin holds {} units, expected {h}", toks.len()),
            });
        }
        rows.push((ln, toks));
    }
    if rows.len() < n {
        return Err(Error::Parse {
            line: last + 1,
            msg: format!("expected {n} bins, found {}", rows.len()),
        });
    }

    let numeric = rows
        .iter()
        .flat_map(|(_, t)| t.iter())
        .all(|t| t.parse::<u64>().is_ok());
    // "07" and "7" name the same numeric color
    let key = |t: &str| -> String {
        if numeric {
            t.parse::<u64>().expect("checked").to_string()
        } else {
            t.to_string()
        }
    };
    let mut order: Vec<String> = Vec::new();
    let mut first_line: HashMap<String, usize> = HashMap::new();
    for (ln, toks) in &rows {
        for t in toks {
            let k = key(t);
            if !first_line.contains_key(&k) {
                first_line.insert(k.clone(), *ln);
                order.push(k);
            }
        }
    }
    if numeric {
        order.sort_by_key(|k| k.parse::<u64>().expect("checked"));
    }
    let id_of: HashMap<&str, Color> = order
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i as Color + 1))
        .collect();

    let bins: Vec<Vec<Color>> = rows
        .iter()
        .map(|(_, toks)| toks.iter().map(|t| id_of[key(t).as_str()]).collect())
        .collect();
    let mut counts: BTreeMap<Color, usize> = BTreeMap::new();
    for bin in &bins {
        for &c in bin {
            *counts.entry(c).or_insert(0) += 1;
        }
    }
    for (&c, &count) in &counts {
        if count % h != 0 {
            let label = &order[c as usize - 1];
            return Err(Error::Validation {
                line: first_line[label],
                msg: format!(
                    "color '{}' occurs {count} times, not a multiple of h={h}",
                    label
                ),
            });
        }
    }
    let instance = Instance::new(h, bins, k).map_err(|e| Error::Validation {
        line: hl,
        msg: e.to_string(),
    })?;
    Ok(ParsedInstance {
        instance,
        labels: order,
    })
}

pub fn serialize_instance(inst: &Instance) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {} {}", inst.capacity(), inst.n(), inst.k());
    for bin in inst.full_bins() {
        let line: Vec<String> = bin.units().iter().map(|c| c.to_string()).collect();
        let _ = writeln!(s, "{}", line.join(" "));
    }
    s
}

/// Moves with the line each came from.
pub fn parse_moves_with_lines(text: &str) -> Result<Vec<(usize, Move)>> {
    content_lines(text)
        .map(|(ln, l)| {
            let f: Vec<&str> = l.split_whitespace().collect();
            if f.len() != 3 {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("a move needs 'src dst count', got {} fields", f.len()),
                });
            }
            let src = parse_usize(f[0], ln, "src")?;
            let dst = parse_usize(f[1], ln, "dst")?;
            let count = parse_usize(f[2], ln, "count")?;
            if count == 0 {
                return Err(Error::Parse {
                    line: ln,
                    msg: "count must be at least 1".into(),
                });
            }
            Ok((ln, Move::new(src, dst, count)))
        })
        .collect()
}

pub fn parse_moves(text: &str) -> Result<Vec<Move>> {
    Ok(parse_moves_with_lines(text)?.into_iter().map(|(_, m)| m).collect())
}

pub fn serialize_moves(moves: &[Move]) -> String {
    let mut s = String::new();
    for m in moves {
        let _ = writeln!(s, "{} {} {}", m.src, m.dst, m.count);
    }
    s
}

/// Replays a move file against an instance. Fails at the first illegal move,
/// or one line past the end if the final configuration is not sorted.
pub fn verify(inst: &Instance, moves_text: &str, semantics: Semantics) -> Result<()> {
    let moves = parse_moves_with_lines(moves_text)?;
    let mut cur = inst.config().clone();
    for (ln, mv) in moves {
        cur = cur.apply(mv, semantics).map_err(|e| Error::Validation {
            line: ln,
            msg: e.to_string(),
        })?;
    }
    if !cur.is_sorted() {
        return Err(Error::Validation {
            line: moves_text.lines().count() + 1,
            msg: "replay ends in an unsorted configuration".into(),
        });
    }
    Ok(())
}
