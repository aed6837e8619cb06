//! Instance families: the 3-Partition reduction, the lower-bound family, a
//! catalog of known no-instances, seeded random instances and exhaustive
//! enumerators for small parameters.
//!
//! Random instances use `ChaCha8Rng::seed_from_u64(seed)`. Every draw takes one
//! `next_u64` and maps it to `0..n` as `(x as u128 * n as u128) >> 64`, and
//! shuffles are Fisher-Yates from the last index down. Both steps are spelled
//! out here rather than delegated so that instances reproduce bit for bit.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Color, Instance};

pub const RED: Color = 1;
pub const BLUE: Color = 2;

/// `3m` positive integers with `B/4 < a_i < B/2` summing to `mB`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreePartitionInput {
    a: Vec<usize>,
    b: usize,
}

impl ThreePartitionInput {
    pub fn new(a: Vec<usize>, b: usize) -> Result<Self> {
        if a.is_empty() || !a.len().is_multiple_of(3) {
            return Err(Error::InvalidInput(format!(
                "need a positive multiple of 3 numbers, got {}",
                a.len()
            )));
        }
        let m = a.len() / 3;
        if let Some(&x) = a.iter().find(|&&x| 4 * x <= b || 2 * x >= b) {
            return Err(Error::InvalidInput(format!(
                "{x} is outside the open window ({b}/4, {b}/2)"
            )));
        }
        let sum: usize = a.iter().sum();
        if sum != m * b {
            return Err(Error::InvalidInput(format!("sum {sum} differs from m*B = {}", m * b)));
        }
        Ok(ThreePartitionInput { a, b })
    }

    /// Infers `B` from the sum.
    pub fn from_numbers(a: Vec<usize>) -> Result<Self> {
        if a.is_empty() || !a.len().is_multiple_of(3) {
            return Err(Error::InvalidInput("need a positive multiple of 3 numbers".into()));
        }
        let m = a.len() / 3;
        let sum: usize = a.iter().sum();
        if !sum.is_multiple_of(m) {
            return Err(Error::InvalidInput(format!("sum {sum} is not divisible by m = {m}")));
        }
        ThreePartitionInput::new(a, sum / m)
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn m(&self) -> usize {
        self.a.len() / 3
    }

    /// Exhaustive search for a partition into triples of sum `B`.
    pub fn is_yes(&self) -> bool {
        let mut used = vec![false; self.a.len()];
        partition_rec(&self.a, self.b, &mut used)
    }
}

fn partition_rec(a: &[usize], b: usize, used: &mut [bool]) -> bool {
    let Some(first) = used.iter().position(|u| !u) else {
        return true;
    };
    used[first] = true;
    for j in first + 1..a.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        for l in j + 1..a.len() {
            if !used[l] && a[first] + a[j] + a[l] == b {
                used[l] = true;
                if partition_rec(a, b, used) {
                    return true;
                }
                used[l] = false;
            }
        }
        used[j] = false;
    }
    used[first] = false;
    false
}

impl fmt::Display for ThreePartitionInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B={} a={:?}", self.b, self.a)
    }
}

/// Every input (as a non-decreasing list) with `m <= max_m` and `B <= max_b`.
pub fn enumerate_3partition(max_m: usize, max_b: usize) -> Vec<ThreePartitionInput> {
    fn rec(len: usize, lo: usize, hi: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in lo..=hi.min(left) {
            cur.push(x);
            rec(len, x, hi, left - x, cur, out);
            cur.pop();
        }
    }
    let mut res = Vec::new();
    for m in 1..=max_m {
        for b in 1..=max_b {
            let lo = b / 4 + 1;
            let hi = (b - 1) / 2;
            if lo > hi {
                continue;
            }
            let mut out = Vec::new();
            rec(3 * m, lo, hi, m * b, &mut Vec::new(), &mut out);
            res.extend(out.into_iter().filter_map(|a| ThreePartitionInput::new(a, b).ok()));
        }
    }
    res
}

/// Capacity `B`: one bin per `a_i` holding `B - a_i` blue units under `a_i`
/// red units, then `rho` red bins, `beta` blue bins and one empty bin.
pub fn from_3partition(tp: &ThreePartitionInput, rho: usize, beta: usize) -> Result<Instance> {
    let b = tp.b;
    let mut bins: Vec<Vec<Color>> = tp
        .a
        .iter()
        .map(|&x| {
            let mut v = vec![BLUE; b - x];
            v.extend(std::iter::repeat_n(RED, x));
            v
        })
        .collect();
    bins.extend(std::iter::repeat_n(vec![RED; b], rho));
    bins.extend(std::iter::repeat_n(vec![BLUE; b], beta));
    Instance::new(b, bins, 1).map_err(|e| Error::InvalidInput(e.to_string()))
}

/// The reduction padded with two more empty bins, which always makes it
/// solvable, together with the move target `t = 5m`.
pub fn trivial_yes_3partition(tp: &ThreePartitionInput) -> Result<(Instance, usize)> {
    let base = from_3partition(tp, 0, 0)?;
    Ok((base.with_k(base.k() + 2), 5 * tp.m()))
}

/// Every bin holds `1, 2, .., n` from the bottom. With `n > h` only `h` bins use
/// that pattern over colors `1..=h` and the rest are already sorted; with `n < h`
/// bin `i` gets `h - n` extra units of color `i + 1` at the bottom.
pub fn lower_bound_family(n: usize, h: usize, k: usize) -> Result<Instance> {
    if n == 0 || h == 0 {
        return Err(Error::InvalidInput("n and h must be positive".into()));
    }
    let bins: Vec<Vec<Color>> = if n >= h {
        let mut bins: Vec<Vec<Color>> = (0..h).map(|_| (1..=h as Color).collect()).collect();
        bins.extend((h + 1..=n).map(|c| vec![c as Color; h]));
        bins
    } else {
        (1..=n as Color)
            .map(|i| {
                let mut v = vec![i; h - n];
                v.extend(1..=n as Color);
                v
            })
            .collect()
    };
    Instance::new(h, bins, k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogEntry {
    /// `h = 3`, nine full bins, two empty bins.
    Fig11a,
    /// `h = 4`, twelve full bins, three empty bins.
    Fig11b,
}

impl FromStr for CatalogEntry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig11a" => Ok(CatalogEntry::Fig11a),
            "fig11b" => Ok(CatalogEntry::Fig11b),
            _ => Err(Error::InvalidInput(format!("unknown catalog entry '{s}'"))),
        }
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CatalogEntry::Fig11a => "fig11a",
            CatalogEntry::Fig11b => "fig11b",
        })
    }
}

/// Known no-instances.
pub fn catalog(entry: CatalogEntry) -> Instance {
    let (h, bins, k): (usize, Vec<Vec<Color>>, usize) = match entry {
        CatalogEntry::Fig11a => (
            3,
            vec![
                vec![7, 4, 1],
                vec![8, 4, 1],
                vec![9, 4, 1],
                vec![7, 5, 2],
                vec![8, 5, 2],
                vec![9, 5, 2],
                vec![7, 6, 3],
                vec![8, 6, 3],
                vec![9, 6, 3],
            ],
            2,
        ),
        CatalogEntry::Fig11b => (
            4,
            vec![
                vec![10, 4, 4, 1],
                vec![10, 5, 5, 1],
                vec![11, 6, 6, 1],
                vec![11, 7, 7, 1],
                vec![11, 8, 8, 2],
                vec![11, 9, 9, 2],
                vec![12, 4, 4, 2],
                vec![12, 5, 5, 2],
                vec![12, 6, 6, 3],
                vec![12, 7, 7, 3],
                vec![10, 8, 8, 3],
                vec![10, 9, 9, 3],
            ],
            3,
        ),
    };
    Instance::new(h, bins, k).expect("catalog entries are valid")
}

/// Uniform index in `0..n` from one 64-bit draw.
pub fn draw_index(rng: &mut ChaCha8Rng, n: usize) -> usize {
    ((rng.next_u64() as u128 * n as u128) >> 64) as usize
}

/// Fisher-Yates from the last position down, one draw per position.
pub fn shuffle<T>(rng: &mut ChaCha8Rng, v: &mut [T]) {
    for i in (1..v.len()).rev() {
        let j = draw_index(rng, i + 1);
        v.swap(i, j);
    }
}

/// `n` full bins of capacity `h` using exactly `colors` colors, each a multiple
/// of `h` times, plus `k` empty bins. Every color gets one bin's worth of units;
/// the remaining `n - colors` bin's worths go to uniformly drawn colors, then all
/// units are shuffled.
pub fn random_instance(n: usize, h: usize, k: usize, colors: usize, seed: u64) -> Result<Instance> {
    if h == 0 {
        return Err(Error::InvalidInput("capacity must be positive".into()));
    }
    if colors > n || (colors == 0 && n > 0) {
        return Err(Error::InvalidInput(format!(
            "need 1 <= colors <= n, got colors={colors} n={n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks: Vec<Color> = (1..=colors as Color).collect();
    for _ in colors..n {
        blocks.push(1 + draw_index(&mut rng, colors) as Color);
    }
    let mut units: Vec<Color> = blocks
        .iter()
        .flat_map(|&c| std::iter::repeat_n(c, h))
        .collect();
    shuffle(&mut rng, &mut units);
    let bins = units.chunks(h).map(|c| c.to_vec()).collect();
    Instance::new(h, bins, k)
}

/// Parameters for a random instance within `h <= max_h`, `n <= max_n`,
/// `k <= max_k`, drawn from `seed`, followed by the instance itself.
pub fn random_small(max_n: usize, max_h: usize, max_k: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let n = 1 + draw_index(&mut rng, max_n);
    let h = 1 + draw_index(&mut rng, max_h);
    let k = draw_index(&mut rng, max_k + 1);
    let colors = 1 + draw_index(&mut rng, n);
    random_instance(n, h, k, colors, seed).expect("parameters are in range")
}

/// All instances with the given `h`, `n`, `k` whose colors are `1..=colors` (each
/// used, each a multiple of `h` times), one per bin permutation class.
pub fn enumerate_instances(n: usize, h: usize, k: usize, colors: usize) -> Vec<Instance> {
    let total = n * h;
    if colors == 0 || colors > n || h == 0 {
        return Vec::new();
    }
    // distribute the n bin's worths over colors, every color at least one
    let mut out = BTreeSet::new();
    let mut counts = vec![h; colors];
    fn compositions(i: usize, left: usize, h: usize, counts: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if i == counts.len() {
            if left == 0 {
                f(counts);
            }
            return;
        }
        for extra in 0..=left {
            counts[i] = h * (1 + extra);
            compositions(i + 1, left - extra, h, counts, f);
        }
    }
    let mut seqs: Vec<Vec<Color>> = Vec::new();
    compositions(0, n - colors, h, &mut counts, &mut |c| {
        let mut remaining = c.to_vec();
        let mut cur = Vec::with_capacity(total);
        multiset_perms(&mut remaining, &mut cur, total, &mut |s| seqs.push(s.to_vec()));
    });
    for s in seqs {
        let mut bins: Vec<Vec<Color>> = s.chunks(h).map(|c| c.to_vec()).collect();
        bins.sort();
        out.insert(bins);
    }
    out.into_iter()
        .map(|bins| Instance::new(h, bins, k).expect("valid by construction"))
        .collect()
}

fn multiset_perms(remaining: &mut [usize], cur: &mut Vec<Color>, total: usize, f: &mut dyn FnMut(&[Color])) {
    if cur.len() == total {
        f(cur);
        return;
    }
    for c in 0..remaining.len() {
        if remaining[c] > 0 {
            remaining[c] -= 1;
            cur.push(c as Color + 1);
            multiset_perms(remaining, cur, total, f);
            cur.pop();
            remaining[c] += 1;
        }
    }
}

/// Every instance with `h <= max_h`, `n <= max_n`, `k <= max_k` and at most
/// `max_colors` colors, one per bin permutation class.
pub fn exhaustive_small(max_n: usize, max_h: usize, max_k: usize, max_colors: usize) -> Vec<Instance> {
    let mut res = Vec::new();
    for h in 1..=max_h {
        for n in 1..=max_n {
            for colors in 1..=max_colors.min(n) {
                for base in enumerate_instances(n, h, 0, colors) {
                    for k in 0..=max_k {
                        res.push(base.with_k(k));
                    }
                }
            }
        }
    }
    res
}

/// Capacity-two instances with `n` full bins and `n` colors, each color
/// exactly twice, one per bin permutation class.
pub fn enumerate_h2(n: usize, k: usize) -> Vec<Instance> {
    enumerate_instances(n, 2, k, n)
}

/// A random capacity-two instance with `n` colors, each exactly twice.
pub fn random_h2(n: usize, k: usize, seed: u64) -> Instance {
    random_instance(n, 2, k, n, seed).expect("parameters are in range")
}
