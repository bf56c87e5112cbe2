use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use tsf_core::filtration::{verify_filtration, FiltrationCheck, RandomBounds, StepSpec};
use tsf_core::norms::{chain_norm, standard_chain};
use tsf_core::symmetry::sunflower::{erdos_rado_bound, sunflower_kernel};
use tsf_core::symmetry::{dichotomy_scan, sunflower, ScanOptions, SunflowerSearch};
use tsf_core::{
    all_signs_vanish, amalgamate, eliminate, verify_pushout, BoolPoly, Element, Error, Filtration, FiniteAlgebra,
    IndexSet, Pairing, Rational, SubalgebraPartition,
};

use crate::report::{Outcome, Report};
use crate::spec::{build_filtration, AlgebraDecl, FiltrationDecl, SubalgebraDecl, Workspace, WorkspaceSpec};
use crate::{
    BracketSolveArgs, BuildArgs, ChainNormArgs, Cli, CliError, Command, DiagramArgs, DichotomyArgs, EliminateArgs,
    FiltrationArgs, PushoutArgs, SaturateArgs, SkeletonArgs, SunflowerArgs,
};

type Outcomes = Result<Report, CliError>;

/// Input mistakes are usage errors; everything else is a failed run.
fn failure(e: Error) -> Outcomes {
    match e {
        Error::IndexOutOfRange { .. }
        | Error::VariableOutOfRange { .. }
        | Error::ForeignElement { .. }
        | Error::ArityMismatch { .. }
        | Error::ArityTooLarge(_)
        | Error::Parse { .. } => Err(CliError::Usage(e.to_string())),
        other => Ok(Report::new(Outcome::Fail).with("error", other.to_string())),
    }
}

macro_rules! attempt {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return failure(err),
        }
    };
}

pub(crate) fn dispatch(cli: &Cli, ws: &Workspace) -> Outcomes {
    match &cli.command {
        Command::Eliminate(a) => cmd_eliminate(ws, a),
        Command::Pushout(a) => cmd_pushout(ws, a, cli.max_atoms),
        Command::VerifyPushout(a) => cmd_verify_pushout(ws, a),
        Command::BuildFiltration(a) => cmd_build(ws, a, cli.seed, cli.max_atoms),
        Command::VerifyFiltration(a) => cmd_verify_filtration(ws, a),
        Command::Skeleton(a) => cmd_skeleton(ws, a),
        Command::Saturate(a) => cmd_saturate(ws, a),
        Command::BracketSolve(a) => cmd_bracket_solve(ws, a),
        Command::Sunflower(a) => cmd_sunflower(ws, a, cli.seed),
        Command::Dichotomy(a) => cmd_dichotomy(ws, a, cli.seed, cli.max_atoms),
        Command::ChainNorm(a) => cmd_chain_norm(ws, a),
        Command::Selftest => Ok(selftest(cli.seed)),
    }
}

fn atoms(e: Element) -> Vec<usize> {
    e.atoms().collect()
}

fn parse_indices(s: &str) -> Result<IndexSet, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| CliError::Usage(format!("`{t}` is not an index"))))
        .collect()
}

fn parse_names(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(String::from).collect()
}

fn built<'a>(ws: &'a Workspace, name: &str) -> Result<&'a Filtration, CliError> {
    match ws.filtration(name)? {
        Ok(f) => Ok(f),
        Err((step, e)) => Err(CliError::Spec(format!("filtration `{name}` fails at step {step}: {e}"))),
    }
}

/// `q` as a polynomial in all `arity` variables, ignoring variable `k`.
fn lift(q: &BoolPoly, arity: usize, k: usize) -> BoolPoly {
    let low = (1usize << (k - 1)) - 1;
    BoolPoly::from_fn(arity, |m| q.row((m & low) | ((m >> k) << (k - 1)))).expect("arity already accepted")
}

fn cmd_eliminate(ws: &Workspace, a: &EliminateArgs) -> Outcomes {
    let p = ws.polynomial(&a.poly, a.arity)?;
    let n = p.arity();
    let iv = attempt!(eliminate(&p, a.var));
    let (lower, upper) = (lift(&iv.lower, n, a.var), lift(&iv.upper, n, a.var));
    // P(m) = 0 exactly when P⁻(m) ≤ m_k ≤ P⁺(m), on every 0/1 row
    let sound = (0..1usize << n).all(|m| {
        let bit = m >> (a.var - 1) & 1 == 1;
        !p.row(m) == ((!lower.row(m) || bit) && (!bit || upper.row(m)))
    });
    let outcome = if sound { Outcome::Pass } else { Outcome::Fail };
    Ok(Report::new(outcome)
        .with("P", p.to_term_string())
        .with("var", a.var)
        .with("P⁻", lower.to_term_string())
        .with("P⁺", upper.to_term_string()))
}

fn blocks_decl(algebra: &str, s: &SubalgebraPartition) -> SubalgebraDecl {
    SubalgebraDecl { algebra: algebra.to_string(), blocks: s.atom_lists() }
}

fn cmd_pushout(ws: &Workspace, a: &PushoutArgs, max_atoms: usize) -> Outcomes {
    let inp = ws.amalgam(&a.amalgam)?;
    let out = attempt!(amalgamate(&inp, max_atoms));
    let d = attempt!(out.diagram(&inp));
    let check = verify_pushout(&d);
    let mut spec = WorkspaceSpec::default();
    spec.algebras.insert("pushout".into(), AlgebraDecl { atoms: out.algebra.atom_count() });
    spec.subalgebras.insert("image_a".into(), blocks_decl("pushout", d.a()));
    spec.subalgebras.insert("image_s".into(), blocks_decl("pushout", d.s()));
    spec.subalgebras.insert("image_r".into(), blocks_decl("pushout", d.r()));
    let outcome = if check.holds() { Outcome::Pass } else { Outcome::Fail };
    Ok(Report::new(outcome)
        .with("atoms", out.algebra.atom_count())
        .with("pairs", &out.pairs)
        .with("embed_a", out.embed_a.dual())
        .with("embed_s", out.embed_s.dual())
        .with("generates", check.generates)
        .with("intersection_is_r", check.intersection_is_r)
        .with("commute", check.commute)
        .with("spec", &spec))
}

fn cmd_verify_pushout(ws: &Workspace, a: &DiagramArgs) -> Outcomes {
    let d = ws.diagram(&a.diagram)?;
    let check = verify_pushout(&d);
    let outcome = if check.holds() { Outcome::Pass } else { Outcome::Fail };
    Ok(Report::new(outcome)
        .with("generates", check.generates)
        .with("intersection_is_r", check.intersection_is_r)
        .with("commute", check.commute)
        .with("violations", check.violations()))
}

fn check_fields(mut r: Report, check: &FiltrationCheck) -> Report {
    r.set("initial_two_element", check.initial_two_element);
    r.set("first_failing_step", check.first_failing_step());
    let failing: BTreeMap<String, Vec<String>> = check
        .steps
        .iter()
        .filter(|s| !s.holds())
        .map(|s| (format!("step {}", s.index), s.violations()))
        .collect();
    r.set("violations", failing);
    r
}

fn filtration_decl(f: &Filtration) -> FiltrationDecl {
    let steps = f
        .specs()
        .into_iter()
        .enumerate()
        .map(|(i, s)| StepSpec { support: Some(f.support(i).expect("step exists").to_vec()), ..s })
        .collect();
    FiltrationDecl { initial_atoms: f.initial().atom_count(), steps }
}

fn cmd_build(ws: &Workspace, a: &BuildArgs, seed: u64, max_atoms: usize) -> Outcomes {
    let f = match (&a.filtration, a.random) {
        (Some(name), _) => match build_filtration(ws.filtration_decl(name)?, max_atoms) {
            Ok(f) => f,
            Err((step, e)) => {
                return Ok(Report::new(Outcome::Fail).with("rejected_step", step).with("error", e));
            }
        },
        (None, true) => attempt!(Filtration::random(
            seed,
            RandomBounds { steps: a.steps, max_s_atoms: a.max_s_atoms, max_atoms }
        )),
        (None, false) => return Err(CliError::Usage("give --filtration NAME or --random".into())),
    };
    let check = verify_filtration(&f);
    let mut spec = WorkspaceSpec::default();
    spec.filtrations.insert(a.name.clone(), filtration_decl(&f));
    let outcome = if check.holds() { Outcome::Pass } else { Outcome::Fail };
    let r = Report::new(outcome).with("steps", f.len()).with("atoms", f.algebra().atom_count());
    Ok(check_fields(r, &check).with("spec", &spec))
}

fn cmd_verify_filtration(ws: &Workspace, a: &FiltrationArgs) -> Outcomes {
    let f = match ws.filtration(&a.filtration)? {
        Ok(f) => f,
        Err((step, e)) => {
            return Ok(Report::new(Outcome::Fail).with("first_failing_step", step).with("error", e.clone()));
        }
    };
    let check = verify_filtration(f);
    let outcome = if check.holds() { Outcome::Pass } else { Outcome::Fail };
    let r = Report::new(outcome).with("steps", f.len()).with("atoms", f.algebra().atom_count());
    Ok(check_fields(r, &check))
}

fn cmd_skeleton(ws: &Workspace, a: &SkeletonArgs) -> Outcomes {
    let f = built(ws, &a.filtration)?;
    let gamma = parse_indices(&a.gamma)?;
    let e = attempt!(f.skeleton(&gamma));
    let saturated = attempt!(f.is_saturated(&gamma));
    Ok(Report::new(Outcome::Pass)
        .with("gamma", gamma.to_vec())
        .with("block_count", e.block_count())
        .with("blocks", e.atom_lists())
        .with("saturated", saturated))
}

fn cmd_saturate(ws: &Workspace, a: &SaturateArgs) -> Outcomes {
    let f = built(ws, &a.filtration)?;
    let h = ws.elements_in(&parse_names(&a.elements), &a.filtration)?;
    let gamma = attempt!(f.saturate(&h));
    let saturated = attempt!(f.is_saturated(&gamma));
    let e = attempt!(f.skeleton(&gamma));
    let covers = h.iter().all(|&x| e.contains(x));
    let outcome = if saturated && covers { Outcome::Pass } else { Outcome::Fail };
    Ok(Report::new(outcome).with("gamma", gamma.to_vec()).with("saturated", saturated).with("covers", covers))
}

fn cmd_bracket_solve(ws: &Workspace, a: &BracketSolveArgs) -> Outcomes {
    let f = built(ws, &a.filtration)?;
    let delta = parse_indices(&a.delta)?;
    let gammas: Vec<IndexSet> = a.gammas.split(';').map(parse_indices).collect::<Result<_, _>>()?;
    let elems = ws.elements_in(&parse_names(&a.elements), &a.filtration)?;
    let p = ws.polynomial(&a.poly, Some(elems.len()))?;
    let pairs = attempt!(f.bracket_solve(&delta, &gammas, &elems, &p));
    let e = attempt!(f.skeleton(&delta));
    let lows: Vec<Element> = pairs.iter().map(|x| x.0).collect();
    let highs: Vec<Element> = pairs.iter().map(|x| x.1).collect();
    let inside = pairs.iter().all(|&(l, h)| e.contains(l) && e.contains(h));
    let sandwich = pairs.iter().zip(&elems).all(|(&(l, h), &x)| l.is_below(x) && x.is_below(h));
    let vanish = attempt!(all_signs_vanish(&p, &lows, &highs, &f.algebra()));
    let shown: Vec<_> = pairs.iter().map(|&(l, h)| json!({ "lower": atoms(l), "upper": atoms(h) })).collect();
    let outcome = if inside && sandwich && vanish { Outcome::Pass } else { Outcome::Fail };
    Ok(Report::new(outcome)
        .with("witnesses", shown)
        .with("in_skeleton", inside)
        .with("sandwich", sandwich)
        .with("all_signs_vanish", vanish))
}

fn parse_sets(s: &str) -> Result<Vec<BTreeSet<u64>>, CliError> {
    s.split(';')
        .map(|part| {
            part.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u64>().map_err(|_| CliError::Usage(format!("`{t}` is not a set member"))))
                .collect()
        })
        .collect()
}

/// `count` distinct `size`-subsets of `0..universe`.
pub(crate) fn random_sets(seed: u64, count: usize, size: usize, universe: u64) -> Result<Vec<BTreeSet<u64>>, CliError> {
    let available = (0..size as u64).fold(1u128, |acc, i| acc * (universe - i.min(universe)) as u128 / (i as u128 + 1));
    if size as u64 > universe || available < count as u128 {
        return Err(CliError::Usage(format!("fewer than {count} distinct {size}-sets in a universe of {universe}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let set: BTreeSet<u64> = sample(&mut rng, universe as usize, size).into_iter().map(|x| x as u64).collect();
        if seen.insert(set.clone()) {
            out.push(set);
        }
    }
    Ok(out)
}

fn cmd_sunflower(ws: &Workspace, a: &SunflowerArgs, seed: u64) -> Outcomes {
    let family = match (&a.family, &a.sets, a.random) {
        (Some(name), _, _) => ws.set_family(name)?.to_vec(),
        (None, Some(s), _) => parse_sets(s)?,
        (None, None, Some(count)) => random_sets(seed, count, a.set_size, a.universe)?,
        _ => return Err(CliError::Usage("give --family, --sets or --random".into())),
    };
    let search = attempt!(sunflower(&family, a.k));
    let mut r = match &search {
        SunflowerSearch::Found(s) => {
            if sunflower_kernel(&family, &s.members).as_ref() != Some(&s.kernel) || s.members.len() != a.k {
                return Ok(Report::new(Outcome::Fail).with("error", "returned sunflower failed re-validation"));
            }
            let sets: Vec<&BTreeSet<u64>> = s.members.iter().map(|&i| &family[i]).collect();
            Report::new(Outcome::Found).with("kernel", &s.kernel).with("members", &s.members).with("sets", sets)
        }
        SunflowerSearch::NotFound { exhaustive } => Report::new(Outcome::None).with("exhaustive", exhaustive),
    };
    r.set("family_size", family.len());
    let sizes: BTreeSet<usize> = family.iter().map(BTreeSet::len).collect();
    if let (1, Some(&s)) = (sizes.len(), sizes.first()) {
        let bound = erdos_rado_bound(s as u32, a.k as u32);
        r.set("uniform_size", s);
        r.set("guarantee_bound", bound.to_string());
    }
    Ok(r)
}

fn cmd_dichotomy(ws: &Workspace, a: &DichotomyArgs, seed: u64, max_atoms: usize) -> Outcomes {
    let (f, family, default_poly) = match (&a.family, a.chain) {
        (Some(name), _) => {
            let (host, members) = ws.family(name)?;
            if a.filtration.as_deref().is_some_and(|x| x != host) {
                return Err(CliError::Usage(format!("family `{name}` lives in `{host}`")));
            }
            let f = match ws.filtration(host) {
                Ok(_) => built(ws, host)?.clone(),
                Err(_) => Filtration::with_initial(ws.algebra(host)?, max_atoms),
            };
            (f, members, None)
        }
        (None, Some(n)) => {
            let steps = (usize::BITS - n.max(1).leading_zeros()) as usize;
            let f = Filtration::free(steps, max_atoms)
                .map_err(|e| CliError::Usage(format!("chain of length {n} does not fit: {e}")))?;
            let members = (0..n).map(|i| vec![Element::from_atoms(0..=i)]).collect();
            (f, members, Some("x1 & !x2"))
        }
        (None, None) => return Err(CliError::Usage("give --family NAME or --chain N".into())),
    };
    let poly = a
        .poly
        .as_deref()
        .or(default_poly)
        .ok_or_else(|| CliError::Usage("--poly is required with --family".into()))?;
    let p = ws.polynomial(poly, None)?;
    let m = a.threshold.unwrap_or((family.len() / 2).max(1));
    let opts = ScanOptions { seed, exhaustive_limit: a.exhaustive_limit, samples: a.samples };
    let rep = attempt!(dichotomy_scan(&f, &family, &p, m, &opts));
    let found = match (rep.alternative_one.is_some(), rep.alternative_two.is_some()) {
        (false, false) => "none",
        (true, false) => "one",
        (false, true) => "two",
        (true, true) => "both",
    };
    let outcome = if rep.alternatives_found() > 0 { Outcome::Found } else { Outcome::None };
    let mut r = Report::new(outcome).with("P", p.to_term_string()).with("alternatives", found);
    if let serde_json::Value::Object(fields) = serde_json::to_value(&rep).expect("reports serialize") {
        for (k, v) in fields {
            r.set(&k, v);
        }
    }
    Ok(r)
}

fn parse_pattern(s: &str) -> Result<Pairing, CliError> {
    match s {
        "nested" => Ok(Pairing::Nested),
        "interleaved" => Ok(Pairing::Interleaved),
        _ => {
            let rest = s.strip_prefix("perm:").ok_or_else(|| CliError::Usage(format!("unknown pattern `{s}`")))?;
            // positions keep their given order, unlike an index set
            let positions = rest
                .split(',')
                .map(str::trim)
                .map(|t| t.parse::<usize>().map_err(|_| CliError::Usage(format!("`{t}` is not a position"))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Pairing::Explicit(positions))
        }
    }
}

/// Norm of the alternating sum recomputed with integer counts per atom.
fn integer_chain_norm(alg: FiniteAlgebra, chain: &[Element], positions: &[usize]) -> i64 {
    (0..alg.atom_count())
        .map(|x| {
            positions
                .chunks(2)
                .map(|pair| i64::from(chain[pair[1]].contains(x)) - i64::from(chain[pair[0]].contains(x)))
                .sum::<i64>()
                .abs()
        })
        .max()
        .unwrap_or(0)
}

fn cmd_chain_norm(ws: &Workspace, a: &ChainNormArgs) -> Outcomes {
    let pairing = parse_pattern(&a.pattern)?;
    let (alg, chain) = match (&a.chain, a.n) {
        (Some(names), _) => {
            let names = parse_names(names);
            let Some(first) = names.first() else {
                return Err(CliError::Usage("empty chain".into()));
            };
            let host = ws.element(first)?.0.to_string();
            (ws.algebra(&host)?, ws.elements_in(&names, &host)?)
        }
        (None, Some(n)) => attempt!(standard_chain(n)),
        (None, None) => return Err(CliError::Usage("give --n N or --chain NAMES".into())),
    };
    // every chain_norm error stems from the chain or pattern given
    let usage = |e: tsf_core::Error| CliError::Usage(e.to_string());
    let norm: Rational = chain_norm(&alg, &chain, &pairing).map_err(usage)?;
    let positions = pairing.positions(chain.len() / 2).map_err(usage)?;
    let check = integer_chain_norm(alg, &chain, &positions);
    let outcome = if norm.to_string() == check.to_string() { Outcome::Pass } else { Outcome::Fail };
    Ok(Report::new(outcome)
        .with("n", chain.len() / 2)
        .with("pattern", &a.pattern)
        .with("positions", positions)
        .with("norm", norm.to_string()))
}

fn selftest(seed: u64) -> Report {
    let mut checks: Vec<(&str, bool)> = Vec::new();

    let elimination = (1..=3usize).all(|n| {
        (0u64..1 << (1 << n)).all(|bits| {
            let p = BoolPoly::from_bits(n, bits).expect("arity at most 6");
            (1..=n).all(|k| {
                let iv = eliminate(&p, k).expect("k in range");
                let (lo, hi) = (lift(&iv.lower, n, k), lift(&iv.upper, n, k));
                (0..1usize << n).all(|m| {
                    let bit = m >> (k - 1) & 1 == 1;
                    !p.row(m) == ((!lo.row(m) || bit) && (!bit || hi.row(m)))
                })
            })
        })
    });
    checks.push(("elimination", elimination));

    let free = tsf_core::AmalgamInput::identity_matching(
        SubalgebraPartition::trivial(FiniteAlgebra::new(2).expect("two atoms")),
        SubalgebraPartition::trivial(FiniteAlgebra::new(2).expect("two atoms")),
    )
    .and_then(|inp| amalgamate(&inp, 24).and_then(|out| out.diagram(&inp)))
    .map(|d| d.algebra().atom_count() == 4 && verify_pushout(&d).holds());
    checks.push(("pushout", free.unwrap_or(false)));

    let filtrations = (seed..seed + 10).all(|s| {
        Filtration::random(s, RandomBounds { steps: 4, max_s_atoms: 3, max_atoms: 24 })
            .map(|f| verify_filtration(&f).holds())
            .unwrap_or(false)
    });
    checks.push(("filtration", filtrations));

    let norms = (1..=4).all(|n| {
        let (alg, chain) = standard_chain(n).expect("small chain");
        let nested: Option<Rational> = chain_norm(&alg, &chain, &Pairing::Nested).ok();
        let inter: Option<Rational> = chain_norm(&alg, &chain, &Pairing::Interleaved).ok();
        nested.map(|x| x.to_string()) == Some("1".into()) && inter.map(|x| x.to_string()) == Some(n.to_string())
    });
    checks.push(("chain-norm", norms));

    let fam: Vec<BTreeSet<u64>> = vec![[1, 2].into(), [1, 3].into(), [1, 4].into()];
    let flower = matches!(sunflower(&fam, 3), Ok(SunflowerSearch::Found(s)) if s.kernel == [1].into());
    checks.push(("sunflower", flower));

    let dichotomy = Filtration::free(3, 24).ok().and_then(|f| {
        let family: Vec<Vec<Element>> = (0..6).map(|i| vec![Element::from_atoms(0..=i)]).collect();
        let p = BoolPoly::parse("x1 & !x2", None).ok()?;
        dichotomy_scan(&f, &family, &p, 3, &ScanOptions::default()).ok()
    });
    let halves = Some(vec![vec![0, 1, 2], vec![3, 4, 5]]);
    checks.push(("dichotomy", dichotomy.is_some_and(|r| r.alternative_two == halves)));

    let outcome = if checks.iter().all(|c| c.1) { Outcome::Pass } else { Outcome::Fail };
    let mut r = Report::new(outcome);
    for (name, ok) in checks {
        r.set(name, if ok { "pass" } else { "fail" });
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lift_keeps_original_names() {
        let p = BoolPoly::parse("x2 & !x3", None).unwrap();
        let iv = eliminate(&p, 1).unwrap();
        assert_eq!(lift(&iv.lower, 3, 1).to_term_string(), "x2 & !x3");
        let iv = eliminate(&p, 2).unwrap();
        assert_eq!(lift(&iv.lower, 3, 2).to_term_string(), "0");
        assert_eq!(lift(&iv.upper, 3, 2).to_term_string(), "x3");
    }

    #[test]
    fn patterns() {
        assert_eq!(parse_pattern("nested").unwrap(), Pairing::Nested);
        assert_eq!(parse_pattern("perm:0,3,1,2").unwrap(), Pairing::Explicit(vec![0, 3, 1, 2]));
        assert!(parse_pattern("spiral").is_err());
    }

    #[test]
    fn random_sets_are_distinct() {
        let sets = random_sets(5, 9, 2, 6).unwrap();
        assert_eq!(sets.iter().collect::<BTreeSet<_>>().len(), 9);
        assert!(sets.iter().all(|s| s.len() == 2 && s.iter().all(|&x| x < 6)));
        assert!(random_sets(0, 16, 2, 6).is_err());
    }

    #[test]
    fn integer_norm_matches() {
        let (alg, chain) = standard_chain(3).unwrap();
        let pos = Pairing::Interleaved.positions(3).unwrap();
        assert_eq!(integer_chain_norm(alg, &chain, &pos), 3);
    }
}
