use crate::output::{print_json, Check, VerifyReport};
use crate::{config_error, library_error, Format};
use clap::{Args, ValueEnum};
use multisect::handles::central::{check_central, pseudomanifold_check};
use multisect::handles::descriptor::{recursive_order, removal_parity_violations, EnumerationOrder};
use multisect::handles::euler::euler_genus_report;
use multisect::handles::{bound_check, certify_decomposition, decompose, Decomposition};
use multisect::identities::{combo1, combo2};
use multisect::multisection::{formula_xi, oracle_xi, verify_cover};
use multisect::torus::{membership_disagreement, sweep_membership};
use multisect::{IndexSet, TorusParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Cover,
    Xi,
    Identities,
    Membership,
    Handles,
    Order,
    Attach,
    Euler,
    Central,
}

impl Suite {
    fn needs_exhaustive(self) -> bool {
        matches!(self, Suite::Attach | Suite::Euler | Suite::Central)
    }

    fn name(self) -> &'static str {
        match self {
            Suite::Cover => "cover",
            Suite::Xi => "xi",
            Suite::Identities => "identities",
            Suite::Membership => "membership",
            Suite::Handles => "handles",
            Suite::Order => "order",
            Suite::Attach => "attach",
            Suite::Euler => "euler",
            Suite::Central => "central",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Depth {
    Symbolic,
    Exhaustive,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Number of pieces; the torus is T^(2k-1).
    #[arg(long)]
    k: u32,
    /// Suites to run (repeatable or comma separated); all applicable ones by default.
    #[arg(long, value_delimiter = ',')]
    suite: Vec<Suite>,
    /// Restrict index-set suites to this set, e.g. `0,2`.
    #[arg(long = "I")]
    index_set: Option<String>,
    #[arg(long, value_enum, default_value = "symbolic")]
    depth: Depth,
    /// Seed for randomized sweeps.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

const SAMPLES_SYMBOLIC: usize = 100_000;
const SAMPLES_EXHAUSTIVE: usize = 1_000_000;
const MAX_LATTICE_SWEEP_DIM: usize = 5;

pub fn run(args: VerifyArgs) -> anyhow::Result<bool> {
    let params = TorusParams::odd(args.k).map_err(library_error)?;
    let n = params.n;
    if args.depth == Depth::Exhaustive && n >= 9 {
        return Err(config_error(format!("exhaustive depth is limited to n <= 7, got n = {n}")));
    }
    if args.format == Format::Csv {
        return Err(config_error("verify reports are text or json"));
    }
    let suites: Vec<Suite> = if args.suite.is_empty() {
        Suite::value_variants()
            .iter()
            .copied()
            .filter(|s| args.depth == Depth::Exhaustive || !s.needs_exhaustive())
            .filter(|s| n <= 7 || *s != Suite::Xi)
            .collect()
    } else {
        args.suite.clone()
    };
    for s in &suites {
        if s.needs_exhaustive() && args.depth != Depth::Exhaustive {
            return Err(config_error(format!("suite `{}` needs --depth exhaustive", s.name())));
        }
        if matches!(s, Suite::Xi) && n > 7 {
            return Err(config_error("the xi oracle is limited to n <= 7"));
        }
        if matches!(s, Suite::Central) && params.k > 4 {
            return Err(config_error("the central suite is limited to k <= 4"));
        }
    }
    let sets: Vec<IndexSet> = match &args.index_set {
        Some(text) => {
            let set = IndexSet::parse(params.k, text).map_err(library_error)?;
            if set.is_full() {
                return Err(config_error("index set must be a proper subset"));
            }
            vec![set.canonicalize_simple().0]
        }
        None => IndexSet::all_simple_proper(params.k),
    };

    let mut checks = Vec::new();
    for suite in &suites {
        let mut push = |name: String, passed: bool, detail: String| {
            checks.push(Check { suite: suite.name().into(), name, passed, detail });
        };
        match suite {
            Suite::Cover => {
                let r = verify_cover(&params).map_err(library_error)?;
                let each = (params.k as usize).pow(n as u32 - 1);
                let sizes: Vec<String> = r.sizes.iter().map(usize::to_string).collect();
                let ok = r.ok() && r.sizes.iter().all(|&s| s == each);
                push(
                    "pieces partition the subcubes".into(),
                    ok,
                    format!("{} cubes partitioned {}", r.labels.labels.len(), sizes.join("/")),
                );
            }
            Suite::Xi => {
                for set in &sets {
                    let formula = formula_xi(&params, set)?;
                    let oracle = oracle_xi(&params, set)?;
                    let same = formula == oracle.faces;
                    push(
                        format!("X_I formula equals oracle for I = {set}"),
                        same && oracle.next_dim_empty,
                        format!(
                            "{} faces of dimension {}, formula {}, no higher face: {}",
                            oracle.faces.len(),
                            oracle.faces.dim,
                            if same { "matches" } else { "differs" },
                            oracle.next_dim_empty
                        ),
                    );
                }
            }
            Suite::Identities => {
                let c1 = combo1(params.k);
                push("cube count identity".into(), c1.holds(), format!("{} = {} = {}", c1.nested_sum, c1.k_power, c1.spanning_trees));
                let c2 = combo2(params.k);
                push("cube type identity".into(), c2.holds(), format!("{} = {} = {}", c2.lhs, c2.mid, c2.rhs));
            }
            Suite::Membership => {
                let (checked, bad) = if args.depth == Depth::Exhaustive && n <= MAX_LATTICE_SWEEP_DIM {
                    let (total, bad) = sweep_membership(&params, 5).map_err(library_error)?;
                    (total, bad)
                } else {
                    let samples = if args.depth == Depth::Exhaustive { SAMPLES_EXHAUSTIVE } else { SAMPLES_SYMBOLIC };
                    sample_membership(&params, samples, args.seed)?
                };
                push(
                    "cutoff and box membership agree".into(),
                    bad.is_empty(),
                    format!("{checked} lattice points, {} disagreements {:?}", bad.len(), bad),
                );
            }
            Suite::Handles => {
                for set in &sets {
                    let d = decompose(&params, set, &EnumerationOrder::default(), None)?;
                    let (ok, detail) = handle_sanity(&d);
                    push(format!("handle decomposition of X_I for I = {set}"), ok, detail);
                }
            }
            Suite::Order => {
                let bad: usize = (1..=5).map(|s| removal_parity_violations(s).len()).sum();
                push("removal parity rule for |V| <= 5".into(), bad == 0, format!("{bad} violations"));
                let seq = recursive_order(4);
                let ok = seq == explicit_order_b3();
                push("explicit order for b = 3".into(), ok, format!("{seq:?}"));
            }
            Suite::Attach => {
                for set in &sets {
                    let d = decompose(&params, set, &EnumerationOrder::default(), None)?;
                    let certs = certify_decomposition(&d)?;
                    let failed: Vec<usize> = certs.iter().filter(|c| !c.ok()).map(|c| c.z).collect();
                    push(
                        format!("attachment certificates for I = {set}"),
                        failed.is_empty(),
                        format!("{} pieces, failing {:?}", certs.len(), failed),
                    );
                }
            }
            Suite::Euler => {
                for set in &sets {
                    let d = decompose(&params, set, &EnumerationOrder::default(), None)?;
                    let r = euler_genus_report(&d)?;
                    let genus_ok = set.len() != 1 || r.genus == Some(n);
                    push(
                        format!("Euler characteristic of X_I for I = {set}"),
                        r.consistent() && genus_ok,
                        format!(
                            "handles {}, cells {}, components {}, genus {}",
                            r.chi_handles,
                            r.chi_cells,
                            r.components,
                            r.genus.map_or("-".into(), |g| g.to_string())
                        ),
                    );
                }
            }
            Suite::Central => {
                let bad = pseudomanifold_check(&params)?;
                push("central cells form a pseudomanifold".into(), bad.is_empty(), format!("{} odd incidences", bad.len()));
                let r = check_central(&params, false)?;
                push(
                    "central handle counts give the Euler characteristic".into(),
                    r.ok(),
                    format!("{} pieces, handles {}, cells {}", r.pieces, r.chi_handles, r.chi_cells),
                );
            }
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    let report = VerifyReport {
        command: "verify".into(),
        k: params.k,
        n,
        depth: format!("{:?}", args.depth).to_lowercase(),
        seed: args.seed,
        checks,
        passed,
    };
    match args.format {
        Format::Json => print_json(&report)?,
        _ => {
            println!("verify T^{n} (k = {}), depth {}", params.k, report.depth);
            for c in &report.checks {
                println!("{} [{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.suite, c.name, c.detail);
            }
            let failed = report.checks.iter().filter(|c| !c.passed).count();
            println!("{} checks, {failed} failed", report.checks.len());
        }
    }
    Ok(passed)
}

fn sample_membership(params: &TorusParams, samples: usize, seed: u64) -> anyhow::Result<(u64, Vec<Vec<i32>>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = params.modulus();
    let mut bad = Vec::new();
    for _ in 0..samples {
        let coords: Vec<i32> = (0..params.n).map(|_| rng.gen_range(0..m)).collect();
        if membership_disagreement(params, &coords)?.is_some() && bad.len() < 5 {
            bad.push(coords);
        }
    }
    Ok((samples as u64, bad))
}

fn handle_sanity(d: &Decomposition) -> (bool, String) {
    let bound = bound_check(d);
    let dim = d.params.n + 1 - d.set.len();
    let dims_ok = d.records.iter().all(|r| r.groups.iter().map(|g| g.dim).sum::<usize>() == dim);
    let first_ok = d.records.first().is_some_and(|r| r.h == 0 && r.glue_to.is_empty());
    (
        bound.ok() && dims_ok && first_ok,
        format!(
            "{} pieces, max h {} (bound {}), group dimensions {}, first piece {}",
            d.records.len(),
            bound.observed_max,
            bound.bound,
            if dims_ok { "sum correctly" } else { "do not sum correctly" },
            if first_ok { "is a 0-handle" } else { "is not a 0-handle" }
        ),
    )
}

/// The recursive order on subsets of `{0, 1, 2, 3}`, written out.
fn explicit_order_b3() -> Vec<Vec<u32>> {
    vec![
        vec![],
        vec![0],
        vec![0, 1],
        vec![1],
        vec![1, 2],
        vec![0, 1, 2],
        vec![0, 2],
        vec![2],
        vec![2, 3],
        vec![0, 2, 3],
        vec![0, 1, 2, 3],
        vec![1, 2, 3],
        vec![1, 3],
        vec![0, 1, 3],
        vec![0, 3],
        vec![3],
    ]
}
