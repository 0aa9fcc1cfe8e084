//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use strata_core::canonical::canonical_form;
use strata_core::io::{parse_graph, serialize_graph};
use strata_core::nerve::{betti_euler_characteristic, is_acyclic};
use strata_core::oracle::{brute_force_key, codim_profile, enumerate_bottom_up};
use strata_core::smith::{smith_normal_form_big, smith_normal_form_i64, SmithError};
use strata_core::strata::{compose_contractions, count_contraction_subsets};
use strata_core::{
    chart_dims, enumerate_strata, smith_normal_form, AmbientType, ContractionMove, Incidence, IntMatrix,
    OrderComplex, StableGraph, Strata, StrataPoset,
};

const TYPES: [(u32, u32); 7] = [(0, 4), (0, 5), (0, 6), (1, 1), (1, 2), (2, 0), (2, 1)];

type Verdict = Result<String, String>;

/// A type, its stratum count and, when pinned, its codimension profile.
type Pin = ((u32, u32), usize, Option<&'static [usize]>);

type Criterion = (&'static str, fn() -> Verdict);

fn ensure(condition: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message())
    }
}

fn strata(g: u32, n: u32) -> Strata {
    enumerate_strata(AmbientType::new(g, n).unwrap()).unwrap()
}

fn oracle_equivalence() -> Verdict {
    let pinned: [Pin; 8] = [
        ((0, 3), 1, Some(&[1])),
        ((0, 4), 4, Some(&[1, 3])),
        ((0, 5), 26, None),
        ((0, 6), 236, None),
        ((1, 1), 2, Some(&[1, 1])),
        ((1, 2), 5, Some(&[1, 2, 2])),
        ((2, 0), 7, Some(&[1, 2, 2, 2])),
        ((2, 1), 16, Some(&[1, 2, 5, 5, 3])),
    ];
    let mut slowest = Duration::ZERO;
    for ((g, n), count, profile) in pinned {
        let start = Instant::now();
        let ty = AmbientType::new(g, n).unwrap();
        let engine = enumerate_strata(ty).unwrap();
        let brute = enumerate_bottom_up(ty);
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);

        let engine_keys: BTreeSet<_> =
            engine.iter().map(|s| (s.codim(), brute_force_key(&s.graph))).collect();
        let brute_keys: BTreeSet<_> = brute.iter().map(|(c, g)| (*c, brute_force_key(g))).collect();
        let diffs = engine_keys.symmetric_difference(&brute_keys).count();
        ensure(diffs == 0, || format!("({g},{n}): {diffs} differences"))?;
        ensure(engine_keys.len() == engine.len(), || format!("({g},{n}): engine lists a class twice"))?;
        ensure(engine.profile() == codim_profile(&brute), || format!("({g},{n}): profiles differ"))?;
        ensure(engine.len() == count, || format!("({g},{n}): {} strata, expected {count}", engine.len()))?;
        if let Some(p) = profile {
            ensure(engine.profile() == p, || format!("({g},{n}): profile {:?}", engine.profile()))?;
        }
        ensure(elapsed < Duration::from_secs(10), || format!("({g},{n}) took {elapsed:?}"))?;
    }
    Ok(format!("8 types, zero diffs, slowest {slowest:.2?}"))
}

/// Genus-0 strata with `n` legs correspond to sets of pairwise compatible
/// splits of the legs. A split is recorded by the side not containing `n`;
/// both sides need at least two legs.
fn compatible_split_profile(n: u32) -> Vec<usize> {
    let full = (1u32 << (n - 1)) - 1;
    let splits: Vec<u32> = (1..=full).filter(|s| s.count_ones() >= 2 && s.count_ones() <= n - 2).collect();
    let compatible = |a: u32, b: u32| a & b == 0 || a & b == a || a & b == b;
    let mut profile = vec![0usize; n as usize - 2];
    fn extend(
        from: usize,
        chosen: &mut Vec<u32>,
        splits: &[u32],
        compatible: &dyn Fn(u32, u32) -> bool,
        profile: &mut Vec<usize>,
    ) {
        profile[chosen.len()] += 1;
        for i in from..splits.len() {
            if chosen.iter().all(|&c| compatible(c, splits[i])) {
                chosen.push(splits[i]);
                extend(i + 1, chosen, splits, compatible, profile);
                chosen.pop();
            }
        }
    }
    extend(0, &mut Vec::new(), &splits, &compatible, &mut profile);
    profile
}

fn genus_zero_cross_oracle() -> Verdict {
    let mut counts = Vec::new();
    for (n, expected) in [(4, 4), (5, 26), (6, 236)] {
        let trees = compatible_split_profile(n);
        let engine = strata(0, n);
        ensure(trees == engine.profile(), || {
            format!("n={n}: split profile {trees:?} vs engine {:?}", engine.profile())
        })?;
        ensure(engine.len() == expected, || format!("n={n}: {} strata", engine.len()))?;
        counts.push(engine.len());
    }
    Ok(format!("tree counts {counts:?} match"))
}

fn dimension_identities() -> Verdict {
    let mut checked = 0;
    for (g, n) in TYPES {
        let ty = AmbientType::new(g, n).unwrap();
        let d = i64::from(ty.dimension());
        for s in strata(g, n).iter() {
            let dims = chart_dims(&s.graph, ty).map_err(|e| e.to_string())?;
            let ok = i64::from(dims.cut_system_size) + i64::from(dims.node_count) == d
                && dims.chart_dim_real == 2 * d
                && dims.pants_count == ty.euler_weight()
                && dims.node_count as usize == s.graph.edge_count()
                && s.codim() == s.graph.edge_count()
                && dims.failures(ty).is_empty();
            ensure(ok, || format!("({g},{n}) {:?}: {dims:?}", s.key))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} graphs, zero violations"))
}

fn random_round_trips(rng: &mut StdRng) -> Result<usize, String> {
    let pool: Vec<StableGraph> = TYPES
        .iter()
        .chain(&[(1, 3), (3, 0)])
        .flat_map(|&(g, n)| strata(g, n).iter().map(|s| s.graph.clone()).collect::<Vec<_>>())
        .collect();
    let (mut splits, mut pinches) = (0, 0);
    while splits < 500 || pinches < 500 {
        let graph = &pool[rng.random_range(0..pool.len())];
        let v = rng.random_range(0..graph.vertex_count());
        let degenerate = if splits < 500 && (pinches >= 500 || rng.random_bool(0.5)) {
            let h = graph.genus_of(v);
            let h1 = rng.random_range(0..=h);
            let side: BTreeSet<Incidence> =
                graph.incidences(v).into_iter().filter(|_| rng.random_bool(0.5)).collect();
            let Ok(split) = graph.split_vertex(v, (h1, h - h1), &side) else { continue };
            splits += 1;
            split
        } else {
            let Ok(pinched) = graph.add_nonseparating_node(v) else { continue };
            pinches += 1;
            pinched
        };
        ensure(degenerate.is_valid(), || format!("invalid degeneration of {graph:?}"))?;
        let back = degenerate.contract_edge(degenerate.edge_count() - 1).map_err(|e| e.to_string())?;
        ensure(canonical_form(&back) == canonical_form(graph), || {
            format!("round trip changed {graph:?} into {back:?}")
        })?;
    }
    Ok(splits + pinches)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn order_independence() -> Result<usize, String> {
    let mut orders = 0;
    for (g, n) in [(2, 0), (1, 2)] {
        for s in strata(g, n).iter() {
            let graph = &s.graph;
            let e = graph.edge_count();
            for mask in 0u64..1 << e {
                let set = ContractionMove::from_mask(mask, e);
                let expected = graph.contract_set(&set).map_err(|e| e.to_string())?;
                let subset: Vec<usize> = set.edges().collect();
                for order in permutations(&subset) {
                    let mut current = graph.clone();
                    let mut position: Vec<Option<usize>> = (0..e).map(Some).collect();
                    for &edge in &order {
                        let step = current
                            .contract_tracked(&[position[edge].unwrap()].into_iter().collect())
                            .map_err(|e| e.to_string())?;
                        for p in position.iter_mut() {
                            *p = p.and_then(|i| step.survivors[i]);
                        }
                        current = step.graph;
                    }
                    ensure(current == expected, || format!("{:?} order {order:?}", s.key))?;
                    orders += 1;
                }
            }
        }
    }
    Ok(orders)
}

fn subset_sums_and_composition() -> Result<usize, String> {
    let mut graphs = 0;
    for (g, n) in TYPES {
        let all = strata(g, n);
        for s in all.iter() {
            let total: u64 = all.iter().map(|t| count_contraction_subsets(&s.graph, &t.graph)).sum();
            ensure(total == 1 << s.graph.edge_count(), || format!("({g},{n}) {:?}: {total}", s.key))?;
            graphs += 1;
        }
    }
    for s in strata(2, 1).iter() {
        let graph = &s.graph;
        let e = graph.edge_count();
        for a_mask in 0u64..1 << e {
            let a = ContractionMove::from_mask(a_mask, e);
            let ga = graph.contract_set(&a).unwrap();
            for b_mask in 0u64..1 << ga.edge_count() {
                let b = ContractionMove::from_mask(b_mask, ga.edge_count());
                let gab = ga.contract_set(&b).unwrap();
                let c = ContractionMove::from_mask(1, gab.edge_count());
                let ab = compose_contractions(graph, &a, &b).map_err(|e| e.to_string())?;
                let bc = compose_contractions(&ga, &b, &c).map_err(|e| e.to_string())?;
                let left = compose_contractions(graph, &ab, &c).map_err(|e| e.to_string())?;
                let right = compose_contractions(graph, &a, &bc).map_err(|e| e.to_string())?;
                ensure(left == right, || format!("{:?}: composition not associative", s.key))?;
                ensure(graph.contract_set(&ab).unwrap() == gab, || {
                    format!("{:?}: composite differs", s.key)
                })?;
            }
        }
    }
    Ok(graphs)
}

fn contraction_algebra() -> Verdict {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let trips = random_round_trips(&mut rng)?;
    let orders = order_independence()?;
    let graphs = subset_sums_and_composition()?;
    Ok(format!("{trips} round trips, {orders} contraction orders, {graphs} subset sums"))
}

fn nerve_smoke() -> Verdict {
    let mut simplices = 0;
    for (g, n) in TYPES {
        let poset = StrataPoset::from_strata(&strata(g, n));
        for (complex, full) in
            [(OrderComplex::of_poset(&poset), true), (OrderComplex::of_boundary(&poset), false)]
        {
            let chains = complex.boundary_matrices();
            let h = chains.homology();
            ensure(chains.squares_to_zero(), || format!("({g},{n}): boundary squared is nonzero"))?;
            ensure(complex.euler_characteristic() == betti_euler_characteristic(&h), || {
                format!("({g},{n}): Euler characteristics disagree")
            })?;
            if full {
                ensure(is_acyclic(&h), || format!("({g},{n}): homology {h:?}"))?;
                ensure(complex.euler_characteristic() == 1, || format!("({g},{n}): chi != 1"))?;
                simplices += complex.counts().iter().sum::<usize>();
            }
        }
    }
    Ok(format!("{} posets contractible, {simplices} chains", TYPES.len()))
}

fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    // Fraction-free Bareiss elimination.
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * prev
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n)
        .flat_map(|last| {
            combinations(last, k - 1).into_iter().map(move |mut c| {
                c.push(last);
                c
            })
        })
        .collect()
}

/// Invariant factors as ratios of determinantal divisors.
fn determinantal_factors(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let (rows, cols) = (m.len(), m.first().map_or(0, Vec::len));
    let mut divisors = vec![BigInt::one()];
    for k in 1..=rows.min(cols) {
        let mut d = BigInt::zero();
        'minors: for rs in combinations(rows, k) {
            for cs in combinations(cols, k) {
                let minor = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect()).collect();
                d = d.gcd(&determinant(minor));
                if d.is_one() {
                    break 'minors;
                }
            }
        }
        if d.is_zero() {
            break;
        }
        divisors.push(d);
    }
    divisors.windows(2).map(|w| &w[1] / &w[0]).collect()
}

fn rational_rank(m: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<BigRational>> =
        m.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        let pivot = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn random_matrix(rng: &mut StdRng) -> Vec<Vec<i64>> {
    let rows = rng.random_range(1..=8);
    let cols = rng.random_range(1..=8);
    match rng.random_range(0..4) {
        // Uniform entries.
        0 => (0..rows).map(|_| (0..cols).map(|_| rng.random_range(-20..=20)).collect()).collect(),
        // Small entries with a common factor.
        1 => {
            let f = rng.random_range(2..=4);
            (0..rows).map(|_| (0..cols).map(|_| f * rng.random_range(-5..=5)).collect()).collect()
        }
        // Low rank: a product of thin factors.
        2 => {
            let k = rng.random_range(1..=3);
            let u: Vec<Vec<i64>> =
                (0..rows).map(|_| (0..k).map(|_| rng.random_range(-2..=2)).collect()).collect();
            let v: Vec<Vec<i64>> =
                (0..k).map(|_| (0..cols).map(|_| rng.random_range(-2..=2)).collect()).collect();
            (0..rows)
                .map(|i| {
                    (0..cols).map(|j| (0..k).map(|t| u[i][t] * v[t][j]).sum::<i64>().clamp(-20, 20)).collect()
                })
                .collect()
        }
        // Sparse signed incidence-like entries.
        _ => (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| if rng.random_bool(0.3) { [-1, 1, 2, -3][rng.random_range(0..4)] } else { 0 })
                    .collect()
            })
            .collect(),
    }
}

fn snf_correctness() -> Verdict {
    let mut rng = StdRng::seed_from_u64(0x5eed_0006);
    let mut torsion_seen = 0;
    for trial in 0..500 {
        let rows = random_matrix(&mut rng);
        let m = IntMatrix::from_rows(&rows);
        let big: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let expected = determinantal_factors(&big);
        let snf = smith_normal_form(&m);
        ensure(snf.is_divisibility_chain(), || format!("trial {trial}: {:?}", snf.invariant_factors))?;
        ensure(snf.invariant_factors == expected, || {
            format!("trial {trial} {rows:?}: {:?} vs oracle {expected:?}", snf.invariant_factors)
        })?;
        ensure(snf.rank() == rational_rank(&big), || format!("trial {trial}: rank mismatch"))?;
        ensure(smith_normal_form_big(&m) == snf, || format!("trial {trial}: big path differs"))?;
        if let Ok(small) = smith_normal_form_i64(&m) {
            ensure(small == snf, || format!("trial {trial}: i64 path differs"))?;
        }
        torsion_seen += usize::from(!snf.torsion().is_empty());
    }

    let huge = (1i64 << 62) - 1;
    let crafted = IntMatrix::from_rows(&[vec![2, huge], vec![huge, 2]]);
    let big = vec![vec![BigInt::from(2), BigInt::from(huge)], vec![BigInt::from(huge), BigInt::from(2)]];
    let expected = determinantal_factors(&big);
    ensure(expected[1] == (BigInt::from(4) - BigInt::from(huge) * BigInt::from(huge)).abs(), || {
        "oracle disagrees with the closed form".to_string()
    })?;
    match smith_normal_form_i64(&crafted) {
        Err(SmithError::Overflow) => {}
        Ok(f) => ensure(f.invariant_factors == expected, || "i64 path gave a wrong answer".to_string())?,
    }
    ensure(smith_normal_form(&crafted).invariant_factors == expected, || {
        "big-integer fallback gave a wrong answer".to_string()
    })?;
    Ok(format!("500 matrices ({torsion_seen} with torsion) and the entry-growth matrix"))
}

fn run_binary(args: &[&str], threads: Option<usize>) -> Result<Vec<u8>, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_strata"));
    cmd.args(args).env_remove("STRATA_THREADS");
    if let Some(t) = threads {
        cmd.env("STRATA_THREADS", t.to_string());
    }
    let out = cmd.output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("{args:?} exited with {}", out.status))?;
    Ok(out.stdout)
}

fn determinism() -> Verdict {
    let max = std::thread::available_parallelism().map_or(4, |n| n.get()).max(2);
    let invocations: [&[&str]; 5] = [
        &["enumerate", "--genus", "2", "--legs", "1"],
        &["enumerate", "--genus", "0", "--legs", "6", "--format", "table"],
        &["poset", "--genus", "2", "--legs", "1"],
        &["poset", "--genus", "1", "--legs", "3", "--dot"],
        &["homology", "--genus", "2", "--legs", "1"],
    ];
    let mut bytes = 0;
    for args in invocations {
        let first = run_binary(args, None)?;
        for threads in [None, Some(1), Some(max)] {
            ensure(run_binary(args, threads)? == first, || format!("{args:?} with {threads:?} threads"))?;
        }
        bytes += first.len();
    }
    Ok(format!(
        "{} invocations byte-identical across runs and 1/{max} threads ({bytes} bytes)",
        invocations.len()
    ))
}

fn io_round_trip() -> Verdict {
    let all = strata(2, 1);
    for s in all.iter() {
        let text = serialize_graph(&s.graph);
        let parsed = parse_graph(&text).map_err(|e| format!("{:?}: {e}", s.key))?;
        ensure(canonical_form(&parsed) == s.key, || format!("{:?}: class changed", s.key))?;
        ensure(parsed == s.graph, || format!("{:?}: representative changed", s.key))?;
        ensure(serialize_graph(&parsed) == text, || format!("{:?}: text changed", s.key))?;
    }
    Ok(format!("{} graphs of type (2, 1)", all.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence", oracle_equivalence),
        ("genus-0 cross-oracle", genus_zero_cross_oracle),
        ("dimension identities", dimension_identities),
        ("contraction algebra", contraction_algebra),
        ("poset nerve", nerve_smoke),
        ("Smith normal form", snf_correctness),
        ("determinism", determinism),
        ("round-trip I/O", io_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let elapsed = start.elapsed();
        match verdict {
            Ok(detail) => println!("PASS  {}. {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {}. {name}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
