//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sortsolve::bounds::{bucket_sort_solve, empirical_min_k, improved_solve, lower_bound_value, upper_bound_value};
use sortsolve::compressed::decide_compressed;
use sortsolve::generators::{
    catalog, draw_index, enumerate_3partition, enumerate_h2, exhaustive_small, from_3partition,
    lower_bound_family, random_h2, random_instance, random_small, trivial_yes_3partition, CatalogEntry,
    ThreePartitionInput,
};
use sortsolve::h2::{build_graph, decide_k1, solve_k1, solve_k2};
use sortsolve::oracle::{bfs_decide, bfs_shortest, bfs_shortest_within, equivalence_check};
use sortsolve::solver::{ball_length_bound, decide, solve, water_length_bound};
use sortsolve::{sweep, Configuration, Instance, Semantics, SolveOptions, TableContext};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn first_failure(results: Vec<Result<(), String>>) -> Result<usize, String> {
    let n = results.len();
    for r in results {
        r?;
    }
    Ok(n)
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

// red=1 green=2 blue=3 black=4, three empty bins
fn worked_example() -> Configuration {
    Configuration::from_vecs(
        9,
        vec![
            vec![4, 4, 1, 1, 3, 3, 1, 1, 1],
            vec![4, 4, 4, 1, 2, 2, 1, 1, 1],
            vec![4, 4, 4, 2, 2, 3, 2, 2, 2],
            vec![],
            vec![],
            vec![],
        ],
    )
    .unwrap()
}

fn c1_table_statistics() -> Outcome {
    let s0 = worked_example();
    let start = Instant::now();
    let ctx = TableContext::new(&s0);
    let t = ctx.table(&[2, 3, 3, 0, 0, 0]).map_err(|e| e.to_string())?;
    let f = (t.f(1), t.f(2), t.f(3));
    let m: Vec<i64> = (1..=3).map(|c| ctx.monochrome_demand(&t, c)).collect();
    let elapsed = start.elapsed();
    ensure(f == (9, 7, 3), || format!("F = {f:?}"))?;
    ensure(m == [0, 1, 1], || format!("M = {m:?}"))?;
    within(elapsed, Duration::from_millis(1))?;
    Ok(format!("F={f:?} M={m:?} in {elapsed:?}"))
}

fn criterion2_set() -> Vec<Instance> {
    let mut v = exhaustive_small(3, 3, 2, 3);
    v.extend((0..500).map(|s| random_small(5, 4, 3, s)));
    v
}

fn c2_oracle_agreement(set: &[Instance]) -> Outcome {
    let results = sweep::map(set, |i| {
        let want = bfs_decide(i, Semantics::Ball).map_err(|e| format!("{e} on {i}"))?;
        let water = bfs_decide(i, Semantics::Water).map_err(|e| e.to_string())?;
        let table_ball = decide(i, &SolveOptions::default().with_semantics(Semantics::Ball))
            .map_err(|e| e.to_string())?
            .decision;
        let table_water = decide(i, &SolveOptions::default()).map_err(|e| e.to_string())?.decision;
        let comp = decide_compressed(i, &SolveOptions::default()).map_err(|e| e.to_string())?.decision;
        ensure([water, table_ball, table_water, comp].iter().all(|&d| d == want), || {
            format!("oracle {want}, water oracle {water}, table {table_ball}/{table_water}, compressed {comp} on {i}")
        })
    });
    let n = first_failure(results)?;
    Ok(format!("{n} instances"))
}

fn c3_equivalence(set: &[Instance]) -> Outcome {
    let results = sweep::map(set, |i| match equivalence_check(i) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("semantics disagree on {i}")),
        Err(e) => Err(e.to_string()),
    });
    Ok(format!("{} instances", first_failure(results)?))
}

fn c4_catalog() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for (e, cap) in [(CatalogEntry::Fig11a, 3usize.pow(9)), (CatalogEntry::Fig11b, 4usize.pow(12))] {
        let r = decide(&catalog(e), &SolveOptions::default()).map_err(|e| e.to_string())?;
        ensure(!r.decision, || format!("{e} decided yes"))?;
        ensure(r.tables_explored <= cap, || format!("{e} explored {} > {cap}", r.tables_explored))?;
        notes.push(format!("{e}: {} tables", r.tables_explored));
    }
    for sem in [Semantics::Ball, Semantics::Water] {
        let yes = bfs_decide(&catalog(CatalogEntry::Fig11a), sem).map_err(|e| e.to_string())?;
        ensure(!yes, || format!("oracle says fig11a is yes under {sem}"))?;
    }
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(notes.join(", "))
}

fn oracle_len(i: &Instance) -> Result<Option<usize>, String> {
    Ok(bfs_shortest(i, Semantics::Water).map_err(|e| e.to_string())?.map(|m| m.len()))
}

fn check_h2(i: &Instance) -> Result<(), String> {
    let moves = solve_k2(i).map_err(|e| format!("{e} on {i}"))?;
    let sorted = i.config().replay(&moves, Semantics::Ball).map(|c| c.is_sorted()).unwrap_or(false);
    ensure(sorted, || format!("solve_k2 does not sort {i}"))?;
    let best = oracle_len(i)?;
    ensure(Some(moves.len()) == best, || format!("solve_k2 {} vs oracle {best:?} on {i}", moves.len()))?;

    let one = i.with_k(1);
    let yes = decide_k1(&one).map_err(|e| e.to_string())?;
    let oracle_yes = bfs_decide(&one, Semantics::Ball).map_err(|e| e.to_string())?;
    ensure(yes == oracle_yes, || format!("decide_k1 {yes} vs oracle {oracle_yes} on {one}"))?;
    if yes {
        let moves = solve_k1(&one).map_err(|e| e.to_string())?;
        let sorted = one.config().replay(&moves, Semantics::Water).map(|c| c.is_sorted()).unwrap_or(false);
        ensure(sorted, || format!("solve_k1 does not sort {one}"))?;
        let best = oracle_len(&one)?;
        ensure(Some(moves.len()) == best, || format!("solve_k1 {} vs oracle {best:?} on {one}", moves.len()))?;
    }
    Ok(())
}

fn c5_h2_optimality() -> Outcome {
    let start = Instant::now();
    let mut set: Vec<Instance> = (1..=4).flat_map(|n| enumerate_h2(n, 2)).collect();
    let exhaustive = set.len();
    set.extend((0..300u64).map(|s| random_h2(1 + (s % 8) as usize, 2, s)));
    let n = first_failure(sweep::map(&set, check_h2))?;
    within(start.elapsed(), Duration::from_secs(600))?;
    Ok(format!("{n} instances ({exhaustive} exhaustive)"))
}

fn meets_potential_precondition(cfg: &Configuration) -> bool {
    let empty = cfg.bins().iter().filter(|b| b.is_empty()).count();
    let half = cfg.bins().iter().filter(|b| b.len() == 1).count();
    empty >= 2 || (empty == 1 && half == 2)
}

fn c6_potential() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut pairs = 0;
    let mut drops = 0;
    let mut seed = 0u64;
    while pairs < 1000 {
        let n = 2 + (seed % 7) as usize;
        let inst = random_h2(n, 2, seed);
        seed += 1;
        let mut cur = inst.config().clone();
        let walk = draw_index(&mut rng, 2 * n + 1);
        for _ in 0..walk {
            let legal = cur.legal_moves(Semantics::Ball);
            if legal.is_empty() {
                break;
            }
            cur = cur.apply(legal[draw_index(&mut rng, legal.len())], Semantics::Ball).unwrap();
        }
        if !meets_potential_precondition(&cur) {
            continue;
        }
        let sem = common::semantics_of(seed);
        let legal = cur.legal_moves(sem);
        if legal.is_empty() {
            continue;
        }
        let mv = legal[draw_index(&mut rng, legal.len())];
        let next = cur.apply(mv, sem).unwrap();
        let before = build_graph(&cur).unwrap().potential().total();
        let after = build_graph(&next).unwrap().potential().total();
        ensure(after + 1 >= before, || format!("potential {before} -> {after} via {mv} on {cur}"))?;
        drops += usize::from(after < before);
        pairs += 1;
    }
    ensure(drops > 0, || "no move ever lowered the potential".into())?;
    Ok(format!("{pairs} pairs, {drops} lowering it"))
}

fn c7_reduction() -> Outcome {
    let start = Instant::now();
    let tps = enumerate_3partition(2, 24);
    let results = sweep::map(&tps, |tp| {
        let inst = from_3partition(tp, 0, 0).map_err(|e| e.to_string())?;
        let d = decide(&inst, &SolveOptions::default()).map_err(|e| format!("{e} on {tp}"))?.decision;
        ensure(d == tp.is_yes(), || format!("solver {d}, brute force {} on {tp}", tp.is_yes()))
    });
    let n = first_failure(results)?;
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!("{n} inputs"))
}

fn c8_shortest_gadget() -> Outcome {
    let tps = enumerate_3partition(2, 24);
    let results = sweep::map(&tps, |tp| {
        let (inst, t) = trivial_yes_3partition(tp).map_err(|e| e.to_string())?;
        ensure(t == 5 * tp.m(), || format!("target {t} on {tp}"))?;
        let short = bfs_shortest_within(&inst, Semantics::Water, t).map_err(|e| format!("{e} on {tp}"))?;
        ensure(short.is_some() == tp.is_yes(), || {
            format!("within {t}: {}, brute force {} on {tp}", short.is_some(), tp.is_yes())
        })
    });
    let n = first_failure(results)?;
    let tp = ThreePartitionInput::new(vec![4, 4, 4], 12).map_err(|e| e.to_string())?;
    let (inst, _) = trivial_yes_3partition(&tp).map_err(|e| e.to_string())?;
    let len = oracle_len(&inst)?;
    ensure(len == Some(5), || format!("(4,4,4) shortest {len:?}"))?;
    Ok(format!("{n} inputs, (4,4,4) shortest 5"))
}

fn c9_upper_bound() -> Outcome {
    let start = Instant::now();
    let cases: Vec<(usize, u64)> = (2..=4).flat_map(|h| (0..200u64).map(move |s| (h, s))).collect();
    let results = sweep::map(&cases, |&(h, seed)| {
        let n = 1 + (seed % 8) as usize;
        let colors = 1 + (seed as usize / 8) % n;
        let base = random_instance(n, h, 0, colors, seed).map_err(|e| e.to_string())?;
        for (inst, which) in [(base.with_k(upper_bound_value(n, h)), "improved"), (base.with_k(n), "bucket")] {
            let moves = match which {
                "improved" => improved_solve(&inst),
                _ => bucket_sort_solve(&inst),
            }
            .map_err(|e| format!("{which}: {e} on {inst}"))?;
            let ok = inst.config().replay(&moves, Semantics::Water).map(|c| c.is_sorted()).unwrap_or(false);
            ensure(ok, || format!("{which} does not sort {inst}"))?;
        }
        Ok(())
    });
    let n = first_failure(results)?;
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!("{n} instances"))
}

fn c10_length_bounds(set: &[Instance]) -> Outcome {
    let results = sweep::map(set, |i| {
        let mut solved = 0usize;
        for sem in [Semantics::Ball, Semantics::Water] {
            let r = solve(i, &SolveOptions::default().with_semantics(sem)).map_err(|e| e.to_string())?;
            let Some(moves) = r.moves else { continue };
            let bound = match sem {
                Semantics::Ball => ball_length_bound(i.capacity(), i.n()),
                Semantics::Water => water_length_bound(i.capacity(), i.n()),
            };
            ensure(moves.len() <= bound, || format!("{sem} length {} > {bound} on {i}", moves.len()))?;
            let ok = i.config().replay(&moves, sem).map(|c| c.is_sorted()).unwrap_or(false);
            ensure(ok, || format!("{sem} sequence does not sort {i}"))?;
            solved += 1;
        }
        Ok::<usize, String>(solved)
    });
    let mut total = 0;
    for r in results {
        total += r?;
    }
    Ok(format!("{total} sequences"))
}

fn c11_lower_bound() -> Outcome {
    let start = Instant::now();
    let v = lower_bound_value(640, 640);
    ensure(v == 190, || format!("lower_bound_value(640,640) = {v}"))?;
    let base = lower_bound_family(4, 4, 0).map_err(|e| e.to_string())?;
    let k = empirical_min_k(&base, 4, &SolveOptions::default()).map_err(|e| e.to_string())?;
    ensure(k == Some(2), || format!("min k = {k:?}"))?;
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok("190, min k 2".into())
}

fn c12_invariants() -> Outcome {
    let seeds: Vec<u64> = (0..10_000).collect();
    let mut notes = Vec::new();
    for (name, check) in common::INVARIANTS {
        let n = first_failure(sweep::map(&seeds, |&s| check(s).map_err(|e| format!("{name}, seed {s}: {e}"))))?;
        notes.push(n);
    }
    Ok(format!("{} suites x {} cases", notes.len(), seeds.len()))
}

fn run(id: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panic: {msg}"))
    });
    let t = start.elapsed();
    match out {
        Ok(detail) => {
            println!("PASS {id:>2} {name}: {detail} [{t:.2?}]");
            true
        }
        Err(why) => {
            println!("FAIL {id:>2} {name}: {why} [{t:.2?}]");
            false
        }
    }
}

fn main() {
    let set = criterion2_set();
    let results = [
        run(1, "table statistics of the worked example", c1_table_statistics),
        run(2, "table, compressed and brute-force deciders agree", || c2_oracle_agreement(&set)),
        run(3, "ball and water solvability coincide", || c3_equivalence(&set)),
        run(4, "catalog no-instances", c4_catalog),
        run(5, "capacity-two solvers are optimal", c5_h2_optimality),
        run(6, "one move lowers the potential by at most one", c6_potential),
        run(7, "3-Partition reduction matches brute force", c7_reduction),
        run(8, "shortest-sequence gadget", c8_shortest_gadget),
        run(9, "constructive upper-bound sorters", c9_upper_bound),
        run(10, "extracted sequences respect length bounds", || c10_length_bounds(&set)),
        run(11, "lower-bound constant and family", c11_lower_bound),
        run(12, "randomized invariant suites", c12_invariants),
    ];
    let failed = results.iter().filter(|&&ok| !ok).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
