#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sortsolve::generators::{draw_index, random_small, shuffle};
use sortsolve::io::{parse_instance, parse_moves, serialize_instance, serialize_moves};
use sortsolve::oracle::StateKey;
use sortsolve::{Configuration, Instance, Move, Semantics, TableContext};

pub type Check = Result<(), String>;
pub type Suite = (&'static str, fn(u64) -> Check);

pub fn semantics_of(seed: u64) -> Semantics {
    if seed.is_multiple_of(2) {
        Semantics::Ball
    } else {
        Semantics::Water
    }
}

/// Random legal moves until sorted, stuck or `steps` taken.
pub fn rollout(inst: &Instance, sem: Semantics, seed: u64, steps: usize) -> (Vec<Configuration>, Vec<Move>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = inst.config().clone();
    let mut configs = vec![cur.clone()];
    let mut moves = Vec::new();
    for _ in 0..steps {
        if cur.is_sorted() {
            break;
        }
        let legal = cur.legal_moves(sem);
        if legal.is_empty() {
            break;
        }
        let mv = legal[draw_index(&mut rng, legal.len())];
        cur = cur.apply(mv, sem).expect("legal move applies");
        configs.push(cur.clone());
        moves.push(mv);
    }
    (configs, moves)
}

pub fn case_instance(seed: u64) -> Instance {
    random_small(5, 4, 3, seed)
}

pub fn conservation(seed: u64) -> Check {
    let inst = case_instance(seed);
    let (configs, _) = rollout(&inst, semantics_of(seed), seed, 30);
    for w in configs.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.color_counts() != b.color_counts() || a.num_bins() != b.num_bins() {
            return Err(format!("unit multiset changed: {a} -> {b}"));
        }
        if b.bins().iter().any(|x| x.len() > b.capacity()) {
            return Err(format!("overfull bin in {b}"));
        }
    }
    Ok(())
}

pub fn border_monotonicity(seed: u64) -> Check {
    let inst = case_instance(seed);
    let (configs, _) = rollout(&inst, semantics_of(seed), seed, 30);
    for w in configs.windows(2) {
        let (d0, d1) = (w[0].border_count(), w[1].border_count());
        if d1 != d0 && d1 + 1 != d0 {
            return Err(format!("borders {d0} -> {d1}: {} -> {}", w[0], w[1]));
        }
    }
    Ok(())
}

/// Each bin keeps a prefix of its initial contents up to its top border, its
/// borders are the initial ones below that height, and its top color is the
/// initial color just above it.
pub fn prefix_and_top_preserved(seed: u64) -> Check {
    let inst = case_instance(seed);
    let ctx = TableContext::for_instance(&inst);
    let s0 = inst.config();
    let (configs, _) = rollout(&inst, semantics_of(seed), seed, 30);
    for cfg in &configs {
        for b in 0..cfg.num_bins() {
            let (init, cur) = (s0.bin(b), cfg.bin(b));
            let t = cur.max_border();
            let expect: Vec<usize> = init.border_set().into_iter().filter(|&i| i <= t).collect();
            if cur.border_set() != expect {
                return Err(format!("bin {b} borders {:?} vs {:?} in {cfg}", cur.border_set(), expect));
            }
            if t > 0 {
                if cur.units()[..t] != init.units()[..t] {
                    return Err(format!("bin {b} lost its prefix in {cfg}"));
                }
                if cur.top() != init.units().get(t).copied() {
                    return Err(format!("bin {b} top color changed in {cfg}"));
                }
            }
        }
        ctx.table_of(cfg).map_err(|e| format!("{e} in {cfg}"))?;
    }
    Ok(())
}

/// Consecutive tables along a rollout are equal or one allowed step apart.
pub fn table_reachability(seed: u64) -> Check {
    let inst = case_instance(seed);
    let ctx = TableContext::for_instance(&inst);
    let (configs, _) = rollout(&inst, semantics_of(seed), seed, 30);
    let mut prev = ctx.table_of(&configs[0]).map_err(|e| e.to_string())?;
    if prev != ctx.initial_table() {
        return Err("initial table mismatch".into());
    }
    for cfg in &configs[1..] {
        let next = ctx.table_of(cfg).map_err(|e| e.to_string())?;
        if next != prev {
            let changed: Vec<usize> = (0..cfg.num_bins()).filter(|&b| next.tau_at(b) != prev.tau_at(b)).collect();
            let [b] = changed[..] else {
                return Err(format!("{} bins changed at once in {cfg}", changed.len()));
            };
            match ctx.step(&prev, b) {
                Some(t) if t == next => {}
                _ => return Err(format!("table {:?} -> {:?} is not an allowed step", prev.tau(), next.tau())),
            }
        }
        prev = next;
    }
    Ok(())
}

/// Random walk over tables; incremental statistics must equal a recount.
pub fn incremental_stats(seed: u64) -> Check {
    let inst = case_instance(seed);
    let ctx = TableContext::for_instance(&inst);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = ctx.initial_table();
    if !ctx.stats_agree(&t) {
        return Err("initial table stats".into());
    }
    loop {
        let succ = ctx.successors(&t);
        for (_, s) in &succ {
            if !ctx.stats_agree(s) {
                return Err(format!("stats drift at {:?}", s.tau()));
            }
        }
        if succ.is_empty() {
            return Ok(());
        }
        t = succ[draw_index(&mut rng, succ.len())].1.clone();
    }
}

pub fn canonical_permutation(seed: u64) -> Check {
    let inst = case_instance(seed);
    let (configs, _) = rollout(&inst, semantics_of(seed), seed, 10);
    let cfg = configs.last().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
    let mut bins = cfg.bins().to_vec();
    shuffle(&mut rng, &mut bins);
    let perm = Configuration::new(cfg.capacity(), bins).map_err(|e| e.to_string())?;
    if perm.canonical() != cfg.canonical() {
        return Err(format!("canonical differs: {perm} vs {cfg}"));
    }
    let (a, b) = (StateKey::of(&perm), StateKey::of(cfg));
    match (a, b) {
        (Ok(a), Ok(b)) if a == b => Ok(()),
        _ => Err(format!("state keys differ: {perm} vs {cfg}")),
    }
}

pub fn file_roundtrip(seed: u64) -> Check {
    let inst = case_instance(seed);
    let text = serialize_instance(&inst);
    let back = parse_instance(&text).map_err(|e| e.to_string())?.instance;
    if back != inst {
        return Err(format!("instance roundtrip: {text}"));
    }
    let (_, moves) = rollout(&inst, semantics_of(seed), seed, 20);
    let mtext = serialize_moves(&moves);
    if parse_moves(&mtext).map_err(|e| e.to_string())? != moves {
        return Err(format!("move roundtrip: {mtext}"));
    }
    Ok(())
}

pub const INVARIANTS: &[Suite] = &[
    ("conservation", conservation),
    ("border monotonicity", border_monotonicity),
    ("prefix and top-color preservation", prefix_and_top_preserved),
    ("table chain reachability", table_reachability),
    ("incremental vs scratch stats", incremental_stats),
    ("canonical permutation invariance", canonical_permutation),
    ("file format roundtrip", file_roundtrip),
];
