//! Acceptance gate. Prints one `PASS`/`FAIL` line per criterion with its
//! runtime and budget, and exits non-zero if any criterion fails.
//!
//! Every check compares library output against an oracle written here from
//! first principles (bit-level evaluation, brute-force enumeration).

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tsf_core::combinatorics::{permutations, set_partitions};
use tsf_core::filtration::RandomBounds;
use tsf_core::norms::{chain_norm, standard_chain};
use tsf_core::symmetry::{dichotomy_scan, sunflower, ScanMode, ScanOptions};
use tsf_core::{
    all_signs_vanish, amalgamate, eliminate, mediating_morphisms, AmalgamInput, BoolPoly, Element, FiniteAlgebra,
    Filtration, IndexSet, Morphism, Pairing, Rational, SubalgebraPartition,
};
use tsf_cli::{run, Workspace, WorkspaceSpec};

type Check = Result<String, String>;
/// Name, runtime budget in seconds, check.
type Criterion = (&'static str, Option<u64>, fn() -> Check);

fn fail<E: std::fmt::Debug>(context: &str) -> impl FnOnce(E) -> String + '_ {
    move |e| format!("{context}: {e:?}")
}

/// `P(args)` computed atom by atom from the truth table.
fn oracle_eval(table: &[bool], args: &[u64], atoms: usize) -> u64 {
    let mut out = 0;
    for j in 0..atoms {
        let row = args.iter().enumerate().fold(0, |m, (i, a)| m | (((a >> j) & 1) as usize) << i);
        if table[row] {
            out |= 1 << j;
        }
    }
    out
}

fn bits(e: &[Element]) -> Vec<u64> {
    e.iter().map(|x| x.bits()).collect()
}

fn subset(a: u64, b: u64) -> bool {
    a & !b == 0
}

fn chain_norms() -> Check {
    // Labels c_1..c_{2n} as chain positions, written out independently of
    // the library's pairing table.
    fn labels(n: usize, interleaved: bool) -> Vec<usize> {
        if !interleaved {
            return (0..2 * n).collect();
        }
        (1..=n).flat_map(|i| [i - 1, 2 * n - i]).collect()
    }
    fn direct(chain: &[u64], labels: &[usize], atoms: usize) -> i64 {
        (0..atoms)
            .map(|a| {
                labels
                    .chunks(2)
                    .map(|pair| ((chain[pair[1]] >> a) & 1) as i64 - ((chain[pair[0]] >> a) & 1) as i64)
                    .sum::<i64>()
                    .abs()
            })
            .max()
            .unwrap_or(0)
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xC0);
    let mut count = 0;
    for n in 1..=6usize {
        let atoms = 2 * n + 1;
        let (alg, standard) = standard_chain(n).map_err(fail("standard chain"))?;
        let mut chains = vec![standard];
        for _ in 0..20 {
            let mut order: Vec<usize> = (0..atoms).collect();
            order.shuffle(&mut rng);
            let mut sizes = sample(&mut rng, atoms + 1, 2 * n).into_vec();
            sizes.sort_unstable();
            chains.push(sizes.iter().map(|&s| Element::from_atoms(order[..s].iter().copied())).collect());
        }
        for chain in &chains {
            for (pairing, interleaved, expected) in [(Pairing::Nested, false, 1), (Pairing::Interleaved, true, n)] {
                let got: Rational = chain_norm(&alg, chain, &pairing).map_err(fail("chain_norm"))?;
                let oracle = direct(&bits(chain), &labels(n, interleaved), atoms);
                let want = Rational::from_integer((expected as i64).into());
                if got != want || oracle != expected as i64 {
                    return Err(format!("n = {n}, {pairing:?}, chain {chain:?}: got {got}, oracle {oracle}"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} norms exact, tolerance 0"))
}

fn elimination() -> Check {
    let mut cases = 0u64;
    for table_bits in 0..=u16::MAX as u64 {
        let p = BoolPoly::from_bits(4, table_bits).map_err(fail("from_bits"))?;
        for k in 1..=4 {
            let iv = eliminate(&p, k).map_err(fail("eliminate"))?;
            for m in 0..16usize {
                let low_mask = (1 << (k - 1)) - 1;
                let rest = (m & low_mask) | ((m >> k) << (k - 1));
                let xk = (m >> (k - 1)) & 1 == 1;
                let zero = (table_bits >> m) & 1 == 0;
                let sandwiched = (!iv.lower.row(rest) || xk) && (!xk || iv.upper.row(rest));
                if zero != sandwiched {
                    return Err(format!("table {table_bits:#06x}, x{k}, row {m}"));
                }
                cases += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xE1);
    let alg = FiniteAlgebra::new(3).map_err(fail("algebra"))?;
    for _ in 0..1000 {
        let table_bits = rng.gen::<u16>() as u64;
        let p = BoolPoly::from_bits(4, table_bits).map_err(fail("from_bits"))?;
        let k = rng.gen_range(1..=4);
        let args: Vec<u64> = (0..4).map(|_| rng.gen_range(0..8)).collect();
        let zero = oracle_eval(p.table(), &args, 3) == 0;
        let iv = eliminate(&p, k).map_err(fail("eliminate"))?;
        let others: Vec<Element> =
            args.iter().enumerate().filter(|&(i, _)| i != k - 1).map(|(_, &a)| Element::from_bits(a)).collect();
        let lo = iv.lower.eval(&others, &alg).map_err(fail("eval"))?.bits();
        let hi = iv.upper.eval(&others, &alg).map_err(fail("eval"))?.bits();
        let xk = args[k - 1];
        if zero != (subset(lo, xk) && subset(xk, hi)) {
            return Err(format!("table {table_bits:#06x}, x{k}, args {args:?}"));
        }
        cases += 1;
    }
    Ok(format!("{cases} cases, 0 failures"))
}

fn robustness() -> Check {
    let mut vanishing = 0u64;
    let mut implied = 0u64;
    for atoms in 1..=3usize {
        let alg = FiniteAlgebra::new(atoms).map_err(fail("algebra"))?;
        let full = (1u64 << atoms) - 1;
        let intervals: Vec<(u64, u64)> =
            (0..=full).flat_map(|hi| (0..=hi).filter(move |lo| subset(*lo, hi)).map(move |lo| (lo, hi))).collect();
        for n in 1..=3usize {
            for table_bits in 0..1u64 << (1 << n) {
                let p = BoolPoly::from_bits(n, table_bits).map_err(fail("from_bits"))?;
                let mut pick = vec![0usize; n];
                loop {
                    let lows: Vec<u64> = pick.iter().map(|&i| intervals[i].0).collect();
                    let highs: Vec<u64> = pick.iter().map(|&i| intervals[i].1).collect();
                    let oracle_vanish = (0..1usize << n).all(|s| {
                        let a: Vec<u64> = (0..n).map(|i| if s >> i & 1 == 1 { highs[i] } else { lows[i] }).collect();
                        oracle_eval(p.table(), &a, atoms) == 0
                    });
                    let to_el = |v: &[u64]| v.iter().map(|&b| Element::from_bits(b)).collect::<Vec<_>>();
                    let lib = all_signs_vanish(&p, &to_el(&lows), &to_el(&highs), &alg).map_err(fail("signs"))?;
                    if lib != oracle_vanish {
                        return Err(format!("sign check disagrees: table {table_bits:#x}, {lows:?} ≤ {highs:?}"));
                    }
                    if lib {
                        vanishing += 1;
                        // Every a with lows ≤ a ≤ highs.
                        let free: Vec<u64> = lows.iter().zip(&highs).map(|(l, h)| h & !l).collect();
                        let mut a = lows.clone();
                        loop {
                            if oracle_eval(p.table(), &a, atoms) != 0 {
                                return Err(format!("table {table_bits:#x}: P{a:?} ≠ 0 inside {lows:?} ≤ {highs:?}"));
                            }
                            implied += 1;
                            let mut i = 0;
                            while i < n {
                                let next = ((a[i] | !free[i]).wrapping_add(1)) & free[i];
                                a[i] = lows[i] | next;
                                if next != 0 {
                                    break;
                                }
                                i += 1;
                            }
                            if i == n {
                                break;
                            }
                        }
                    }
                    let mut i = 0;
                    while i < n {
                        pick[i] += 1;
                        if pick[i] < intervals.len() {
                            break;
                        }
                        pick[i] = 0;
                        i += 1;
                    }
                    if i == n {
                        break;
                    }
                }
            }
        }
    }
    Ok(format!("{vanishing} vanishing brackets, {implied} sandwiched tuples, 0 failures"))
}

/// `leg` re-indexed so that its domain atoms are the blocks of `image`, the
/// partition the diagram uses for the same subalgebra.
fn in_block_order(leg: &Morphism, embed: &Morphism, image: &SubalgebraPartition) -> Result<Morphism, String> {
    let dual = leg
        .dual()
        .iter()
        .map(|&x| {
            let b = embed.apply(Element::singleton(x));
            image.blocks().iter().position(|&c| c == b).ok_or_else(|| format!("{b:?} is not a block"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let domain = FiniteAlgebra::new(image.block_count()).map_err(fail("algebra"))?;
    Morphism::from_dual(domain, leg.codomain(), dual).map_err(fail("leg"))
}

fn pushout_universality() -> Check {
    let (mut inputs, mut legs) = (0u64, 0u64);
    let singles = |alg: FiniteAlgebra| (0..alg.atom_count()).map(Element::singleton).collect::<Vec<_>>();
    for a_atoms in 1..=3 {
        for s_atoms in 1..=3 {
            let a = FiniteAlgebra::new(a_atoms).map_err(fail("algebra"))?;
            let s = FiniteAlgebra::new(s_atoms).map_err(fail("algebra"))?;
            for pa in set_partitions(a_atoms) {
                for ps in set_partitions(s_atoms).into_iter().filter(|ps| ps.len() == pa.len()) {
                    for matching in permutations(pa.len()) {
                        let ra = SubalgebraPartition::from_atom_lists(a, &pa).map_err(fail("R in A"))?;
                        let rs = SubalgebraPartition::from_atom_lists(s, &ps).map_err(fail("R in S"))?;
                        let inp = AmalgamInput::new(ra.clone(), rs.clone(), matching.clone()).map_err(fail("input"))?;
                        let am = amalgamate(&inp, 64).map_err(fail("amalgamate"))?;
                        let diagram = am.diagram(&inp).map_err(fail("diagram"))?;
                        inputs += 1;
                        for c_atoms in 1..=3 {
                            let c = FiniteAlgebra::new(c_atoms).map_err(fail("algebra"))?;
                            let mediators: Vec<Morphism> = Morphism::enumerate(am.algebra, c).collect();
                            for f in Morphism::enumerate(a, c) {
                                for g in Morphism::enumerate(s, c) {
                                    let compatible = ra
                                        .blocks()
                                        .iter()
                                        .zip(&matching)
                                        .all(|(&b, &j)| f.apply(b) == g.apply(rs.blocks()[j]));
                                    if !compatible {
                                        continue;
                                    }
                                    legs += 1;
                                    let found: Vec<&Morphism> = mediators
                                        .iter()
                                        .filter(|h| {
                                            singles(a).iter().all(|&x| h.apply(am.embed_a.apply(x)) == f.apply(x))
                                                && singles(s).iter().all(|&x| h.apply(am.embed_s.apply(x)) == g.apply(x))
                                        })
                                        .collect();
                                    let (fd, gd) = (
                                        in_block_order(&f, &am.embed_a, diagram.a())?,
                                        in_block_order(&g, &am.embed_s, diagram.s())?,
                                    );
                                    let lib = mediating_morphisms(&diagram, &fd, &gd)
                                        .map_err(|e| format!("A = {pa:?}, S = {ps:?}, matching {matching:?}: {e:?}"))?;
                                    if found.len() != 1 || lib.len() != 1 || lib[0] != *found[0] {
                                        return Err(format!(
                                            "A = {pa:?}, S = {ps:?}, matching {matching:?}, C = {c_atoms} atoms: \
                                             {} mediators by enumeration, {} by the library",
                                            found.len(),
                                            lib.len()
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{inputs} inputs, {legs} compatible leg pairs, each with exactly one mediator"))
}

/// Brute-force push-out conditions for `E1, E2` over `E0` inside `top`.
fn oracle_square(e1: &SubalgebraPartition, e2: &SubalgebraPartition, e0: &SubalgebraPartition, top: &SubalgebraPartition) -> bool {
    let atoms = top.algebra().atom_count();
    let block = |e: &SubalgebraPartition, x: usize| e.blocks().iter().position(|b| b.contains(x)).unwrap();
    // Join: atoms share a top block exactly when they share blocks of both.
    let generates = (0..atoms)
        .all(|x| (0..atoms).all(|y| (block(top, x) == block(top, y)) == (block(e1, x) == block(e1, y) && block(e2, x) == block(e2, y))));
    // Intersection: connected components of the union of the two block graphs.
    let mut comp: Vec<usize> = (0..atoms).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for x in 0..atoms {
            for y in 0..atoms {
                let linked = block(e1, x) == block(e1, y) || block(e2, x) == block(e2, y);
                if linked && comp[x] != comp[y] {
                    let m = comp[x].min(comp[y]);
                    comp[x] = m;
                    comp[y] = m;
                    changed = true;
                }
            }
        }
    }
    let meet = (0..atoms).all(|x| (0..atoms).all(|y| (comp[x] == comp[y]) == (block(e0, x) == block(e0, y))));
    // Commuting: every c1 ≤ c2 across the two interpolates through E0, i.e.
    // the E0-hull of c1 lies below the E2-hull of c1.
    let hull = |e: &SubalgebraPartition, c: u64| -> u64 {
        e.blocks().iter().filter(|b| b.bits() & c != 0).fold(0, |acc, b| acc | b.bits())
    };
    let members = |e: &SubalgebraPartition| -> Vec<u64> {
        let k = e.blocks().len();
        if k <= 12 {
            (0..1u64 << k)
                .map(|m| e.blocks().iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).fold(0, |acc, (_, b)| acc | b.bits()))
                .collect()
        } else {
            e.blocks().iter().map(|b| b.bits()).collect()
        }
    };
    let commute = members(e1).iter().all(|&c| subset(hull(e0, c), hull(e2, c)))
        && members(e2).iter().all(|&c| subset(hull(e0, c), hull(e1, c)));
    generates && meet && commute
}

fn random_index_set(rng: &mut ChaCha8Rng, len: usize) -> IndexSet {
    (0..len).filter(|_| rng.gen_bool(0.5)).collect()
}

fn skeleton_pushouts() -> Check {
    let mut squares = 0;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let steps = rng.gen_range(1..=6);
        let f = Filtration::random(seed, RandomBounds { steps, max_s_atoms: 3, max_atoms: 24 })
            .map_err(fail("random filtration"))?;
        let mut found = 0;
        let mut attempts = 0;
        while found < 20 {
            attempts += 1;
            if attempts > 10_000 {
                return Err(format!("seed {seed}: no saturated pairs"));
            }
            let g1 = f.support_closure(&random_index_set(&mut rng, steps)).map_err(fail("closure"))?;
            let g2 = f.support_closure(&random_index_set(&mut rng, steps)).map_err(fail("closure"))?;
            let meet = g1.intersection(&g2);
            let saturated = [&g1, &g2, &meet].iter().all(|g| f.is_saturated(g).unwrap_or(false));
            if !saturated {
                continue;
            }
            found += 1;
            let check = f.check_skeleton_pushout(&g1, &g2).map_err(fail("check"))?;
            let top = f.skeleton(&g1.union(&g2)).map_err(fail("skeleton"))?;
            let sk = |g: &IndexSet| f.skeleton(g).map_err(fail("skeleton"));
            let oracle = oracle_square(&sk(&g1)?, &sk(&g2)?, &sk(&meet)?, &top);
            if !check.holds() || !oracle {
                return Err(format!("seed {seed}, Γ1 = {g1:?}, Γ2 = {g2:?}: library {check:?}, oracle {oracle}"));
            }
            squares += 1;
        }
    }
    Ok(format!("{squares} squares, all push-outs"))
}

fn bracket_solver() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB5);
    let mut solved = 0;
    let mut nontrivial = 0;
    let mut attempts = 0;
    while solved < 100 {
        attempts += 1;
        if attempts > 100_000 {
            return Err(format!("only {solved} instances formed"));
        }
        let steps = rng.gen_range(2..=6);
        let f = Filtration::random(rng.gen(), RandomBounds { steps, max_s_atoms: 3, max_atoms: 24 })
            .map_err(fail("random filtration"))?;
        let n = rng.gen_range(1..=3usize);
        // Each index goes to Δ, to one Γ_i only, or nowhere.
        let owner: Vec<usize> = (0..steps).map(|_| rng.gen_range(0..n + 2)).collect();
        let pick = |o: usize| -> IndexSet { (0..steps).filter(|&i| owner[i] == o).collect() };
        let delta = f.support_closure(&pick(0)).map_err(fail("closure"))?;
        let gammas: Vec<IndexSet> = (0..n)
            .map(|i| f.support_closure(&pick(0).union(&pick(i + 2))))
            .collect::<Result<_, _>>()
            .map_err(fail("closure"))?;
        let disjoint = (0..n).all(|i| (i + 1..n).all(|j| gammas[i].intersection(&gammas[j]) == delta));
        let saturated = std::iter::once(&delta).chain(&gammas).all(|g| f.is_saturated(g).unwrap_or(false));
        if !disjoint || !saturated || (n == 1 && !delta.is_subset(&gammas[0])) {
            continue;
        }
        let atoms = f.algebra().atom_count();
        let mut elems = Vec::with_capacity(n);
        for g in &gammas {
            let e = f.skeleton(g).map_err(fail("skeleton"))?;
            let mask = rng.gen::<u64>() & ((1u64 << e.block_count()) - 1);
            elems.push(e.element_from_mask(mask));
        }
        // A random table with every row realised by some atom switched off,
        // so that P vanishes on the chosen elements.
        let args = bits(&elems);
        let mut table: Vec<bool> = (0..1usize << n).map(|_| rng.gen_bool(0.5)).collect();
        for j in 0..atoms {
            let row = args.iter().enumerate().fold(0, |m, (i, a)| m | (((a >> j) & 1) as usize) << i);
            table[row] = false;
        }
        if table.iter().any(|&t| t) {
            nontrivial += 1;
        }
        let p = BoolPoly::from_table(n, table.clone()).map_err(fail("table"))?;
        let witnesses = f.bracket_solve(&delta, &gammas, &elems, &p).map_err(fail("bracket_solve"))?;
        let e_delta = f.skeleton(&delta).map_err(fail("skeleton"))?;
        let in_delta = |x: u64| e_delta.blocks().iter().all(|b| subset(b.bits(), x) || b.bits() & x == 0);
        for (i, &(lo, hi)) in witnesses.iter().enumerate() {
            let (lo, hi) = (lo.bits(), hi.bits());
            if !(in_delta(lo) && in_delta(hi) && subset(lo, args[i]) && subset(args[i], hi)) {
                return Err(format!("coordinate {i}: {lo:#x} ≤ {:#x} ≤ {hi:#x} fails or leaves E(Δ)", args[i]));
            }
        }
        let all_signs = (0..1usize << n).all(|s| {
            let a: Vec<u64> = witnesses
                .iter()
                .enumerate()
                .map(|(i, &(lo, hi))| if s >> i & 1 == 1 { hi.bits() } else { lo.bits() })
                .collect();
            oracle_eval(&table, &a, atoms) == 0
        });
        if !all_signs {
            return Err(format!("witnesses {witnesses:?} do not vanish on every sign choice"));
        }
        solved += 1;
    }
    Ok(format!("{solved} instances ({nontrivial} with nonzero P), all sandwiched and sign-vanishing"))
}

fn sunflower_bound() -> Check {
    use std::collections::BTreeSet;
    for seed in 0..1000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let universe = rng.gen_range(5..=12u64);
        let mut family: Vec<BTreeSet<u64>> = Vec::new();
        while family.len() < 9 {
            let pair = sample(&mut rng, universe as usize, 2).into_iter().map(|x| x as u64).collect();
            if !family.contains(&pair) {
                family.push(pair);
            }
        }
        let search = sunflower(&family, 3).map_err(fail("sunflower"))?;
        let Some(found) = search.found() else {
            return Err(format!("seed {seed}: none found in {family:?}"));
        };
        let m = &found.members;
        let distinct = m.len() == 3 && m.iter().collect::<BTreeSet<_>>().len() == 3 && m.iter().all(|&i| i < 9);
        let petals_ok = distinct
            && (0..3).all(|i| {
                (i + 1..3).all(|j| family[m[i]].intersection(&family[m[j]]).copied().collect::<BTreeSet<_>>() == found.kernel)
            });
        if !petals_ok {
            return Err(format!("seed {seed}: invalid sunflower {found:?} in {family:?}"));
        }
    }
    Ok("1000 families, 1000 valid sunflowers".into())
}

fn chain_dichotomy() -> Check {
    let f = Filtration::free(4, 24).map_err(fail("free filtration"))?;
    let atoms = f.algebra().atom_count();
    let p = BoolPoly::parse("x1 & !x2", Some(2)).map_err(fail("parse"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(0xD4);
    let mut chains: Vec<Vec<u64>> = vec![(1..=10).map(|i| (1u64 << i) - 1).collect()];
    for _ in 0..100 {
        let mut order: Vec<usize> = (0..atoms).collect();
        order.shuffle(&mut rng);
        let mut sizes = sample(&mut rng, atoms + 1, 10).into_vec();
        sizes.sort_unstable();
        chains.push(sizes.iter().map(|&s| order[..s].iter().fold(0, |acc, &a| acc | 1 << a)).collect());
    }
    let halves = vec![(0..5).collect::<Vec<usize>>(), (5..10).collect()];
    for chain in &chains {
        let family: Vec<Vec<Element>> = chain.iter().map(|&c| vec![Element::from_bits(c)]).collect();
        let report = dichotomy_scan(&f, &family, &p, 5, &ScanOptions::default()).map_err(fail("scan"))?;
        if report.mode != ScanMode::Exhaustive || report.alternative_two.as_ref() != Some(&halves) {
            return Err(format!("chain {chain:x?}: {report:?}"));
        }
        // Brute force: every lower member minus every upper member is zero.
        let covered = halves[0].iter().all(|&i| halves[1].iter().all(|&j| oracle_eval(p.table(), &[chain[i], chain[j]], atoms) == 0));
        if !covered || report.alternative_two_overlaps {
            return Err(format!("chain {chain:x?}: halves fail brute force"));
        }
    }
    Ok(format!("{} chains, halves found and re-checked", chains.len()))
}

fn cli_determinism() -> Check {
    let specs = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("specs");
    let spec = |name: &str| specs.join(name).display().to_string();
    let invocations: Vec<Vec<String>> = vec![
        vec!["eliminate".into(), "--poly".into(), "x1 & !x2".into(), "--var".into(), "2".into()],
        vec!["chain-norm".into(), "--n".into(), "3".into(), "--pattern".into(), "interleaved".into()],
        vec!["build-filtration".into(), "--random".into(), "--seed".into(), "11".into(), "--format".into(), "json".into()],
        vec!["sunflower".into(), "--random".into(), "9".into(), "--seed".into(), "5".into()],
        vec!["dichotomy".into(), "--chain".into(), "14".into(), "--seed".into(), "7".into()],
        vec!["selftest".into(), "--seed".into(), "3".into()],
        vec!["pushout".into(), "--input".into(), spec("amalgam.json"), "--amalgam".into(), "crossed".into()],
        vec!["verify-filtration".into(), "--input".into(), spec("bad-filtration.json"), "--filtration".into(), "broken".into()],
    ];
    for args in &invocations {
        let argv = || std::iter::once("tsf".to_string()).chain(args.iter().cloned());
        let first = run(argv());
        let second = run(argv());
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_tsf"))
            .args(args)
            .env_remove("TSF_MAX_ATOMS")
            .output()
            .map_err(fail("spawn"))?;
        let binary = String::from_utf8(out.stdout).map_err(fail("utf-8"))?;
        if first != second || binary != first.stdout || out.status.code() != Some(first.code) {
            return Err(format!("{args:?} is not reproducible"));
        }
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(&specs)
        .map_err(fail("specs"))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    // Specs shown in the README count as documented examples too.
    let readme_path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../README.md");
    let readme = std::fs::read_to_string(&readme_path).map_err(fail("README"))?;
    let inline: Vec<&str> =
        readme.split("```json\n").skip(1).filter_map(|block| block.split("```").next()).collect();
    let dir = std::env::temp_dir().join(format!("tsf-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(fail("temp dir"))?;
    for (i, text) in inline.iter().enumerate() {
        let path = dir.join(format!("readme-{i}.json"));
        std::fs::write(&path, text).map_err(fail("write"))?;
        files.push(path);
    }
    for path in &files {
        let parsed = WorkspaceSpec::load(path).map_err(fail("load"))?;
        Workspace::new(parsed.clone(), 24).map_err(fail("validate"))?;
        let emitted = parsed.emit();
        let reparsed = WorkspaceSpec::parse(&emitted).map_err(fail("reparse"))?;
        if reparsed != parsed || reparsed.emit() != emitted {
            return Err(format!("{} does not round-trip", path.display()));
        }
    }
    std::fs::remove_dir_all(&dir).map_err(fail("temp dir"))?;
    Ok(format!(
        "{} invocations reproducible, {} specs round-trip ({} from the README)",
        invocations.len(),
        files.len(),
        inline.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("chain norms 1 and n", Some(5), chain_norms),
        ("elimination interval", Some(60), elimination),
        ("sign-vanishing robustness", Some(60), robustness),
        ("push-out universality", Some(120), pushout_universality),
        ("skeleton push-outs", Some(120), skeleton_pushouts),
        ("bracket solver", None, bracket_solver),
        ("sunflower bound", None, sunflower_bound),
        ("chain dichotomy halves", None, chain_dichotomy),
        ("cli determinism, round-trip", None, cli_determinism),
    ];
    let mut failed = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let over = budget.is_some_and(|b| elapsed >= Duration::from_secs(b));
        let ok = result.is_ok() && !over;
        if !ok {
            failed += 1;
        }
        let limit = budget.map_or("-".to_string(), |b| format!("< {b}s"));
        let detail = match (&result, over) {
            (Ok(d), false) => d.clone(),
            (Ok(d), true) => format!("over budget; {d}"),
            (Err(e), _) => e.clone(),
        };
        println!(
            "{} {:<30} {:>8.2}s ({:>6})  {}",
            if ok { "PASS" } else { "FAIL" },
            name,
            elapsed.as_secs_f64(),
            limit,
            detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
