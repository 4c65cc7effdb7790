//! satlab: exact checks, constructions and searches for saturated set
//! families, with reproducible JSON reports.
//!
//! Exit status: 0 when every check in the run holds, 1 when some check
//! fails (the failing item is named on stderr), 2 on usage errors such as
//! malformed inputs or violated resource caps.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use satlab_core::algebra::{independence_certificate, monomial_basis_rank_selftest};
use satlab_core::boxop::{bkr_check, box_general, box_increasing, talagrand_check};
use satlab_core::constructions::{
    cross_extremal, dictator_family, lift, partition_construction, BlockFamily, PartitionSpec,
};
use satlab_core::cross::{
    check_cross_sum_bound, check_dual_box_identity, check_saturated_size_bounds, cross_saturate,
    cross_status, disjoint_bound_families, CrossStatus,
};
use satlab_core::fuzz::{run_inequality_campaign, PairMode};
use satlab_core::report::{CheckItem, RunReport};
use satlab_core::saturation::{saturate, saturation_status, SaturationStatus};
use satlab_core::search::{min_cross_search, min_saturated_search, SearchLimits, SearchMode};
use satlab_core::textio::{
    parse_family, parse_sequence, serialize_family, serialize_sequence, ParseWarning,
};
use satlab_core::{CandidateOrder, Error, FamilySequence, GroundSet, SetFamily, Subset};

#[derive(Parser)]
#[command(name = "satlab", version, about = "exact laboratory for saturated set families")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format written to stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads (default: SATLAB_THREADS or all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the produced family/sequence/witness to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OrderKind {
    Default,
    Random,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ModeKind {
    Raw,
    Antichain,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum InequalityKind {
    Talagrand,
    Bkr,
}

#[derive(Args)]
struct OrderArgs {
    /// Candidate scan order for greedy closures.
    #[arg(long, value_enum, default_value_t = OrderKind::Default)]
    order: OrderKind,

    /// Seed for the random order and the random generators.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl OrderArgs {
    fn candidate_order(&self) -> CandidateOrder {
        match self.order {
            OrderKind::Default => CandidateOrder::Default,
            OrderKind::Random => CandidateOrder::Random { seed: self.seed },
        }
    }

    fn echo(&self) -> serde_json::Value {
        match self.order {
            OrderKind::Default => json!("default"),
            OrderKind::Random => json!({"random": self.seed}),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a family for s-saturation and evaluate both size bounds.
    CheckSaturated {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        s: usize,
    },
    /// Greedily extend a family (default: the empty family) to s-saturation.
    Saturate {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        order: OrderArgs,
    },
    /// Disjoint occurrence of two families, with both inequality checks.
    Box {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        input2: PathBuf,
    },
    /// Check a correlation inequality on seeded random family pairs.
    VerifyInequality {
        #[arg(value_enum)]
        kind: InequalityKind,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw arbitrary families instead of increasing ones (general path).
        #[arg(long)]
        arbitrary: bool,
    },
    /// Cross-saturation operations on family sequences.
    Cross {
        #[command(subcommand)]
        op: CrossOp,
    },
    /// Exact-rank independence certificate for a cross-saturated sequence.
    Certificate {
        #[arg(long, conflicts_with = "selftest")]
        input: Option<PathBuf>,
        /// Sequence length when the input holds a single family (diagonal).
        #[arg(long)]
        s: Option<usize>,
        /// Run the monomial-basis rank self-test instead (requires --n).
        #[arg(long)]
        selftest: bool,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Build one of the extremal constructions.
    Construct {
        #[command(subcommand)]
        what: Construction,
    },
    /// Exact minimum size of an s-saturated family, with witness.
    SearchMin {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        s: usize,
        #[arg(long, value_enum, default_value_t = ModeKind::Antichain)]
        mode: ModeKind,
        /// Accept long runtimes (raises the soft resource caps).
        #[arg(long)]
        allow_long: bool,
    },
    /// Exact minimum sum of sizes of a cross-saturated sequence.
    SearchMinCross {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        allow_long: bool,
    },
}

#[derive(Subcommand)]
enum CrossOp {
    /// Check cross-dependence and cross-saturation.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        s: Option<usize>,
    },
    /// Greedily extend a sequence (default: s empty families) to
    /// cross-saturation.
    Saturate {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        s: Option<usize>,
        #[command(flatten)]
        order: OrderArgs,
    },
    /// Verify that each family's dual equals the box-fold of the others.
    Eq1 {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        s: Option<usize>,
    },
    /// Compute the disjoint bounding families and verify their contract.
    Gfamilies {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        s: Option<usize>,
    },
    /// Check the sum of sizes against the lower bound.
    Bound {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        s: Option<usize>,
    },
}

#[derive(Subcommand)]
enum Construction {
    /// All subsets containing one fixed element.
    Dictator {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        element: u32,
    },
    /// Partition-based s-saturated family at the conjectured minimum size.
    Partition {
        #[arg(long)]
        n: u32,
        /// Blocks as `|`-separated element lists, e.g. `1,2|3,4`.
        #[arg(long)]
        blocks: String,
        /// One dictator element per block, e.g. `1|3` (default: block minima).
        #[arg(long)]
        dictators: Option<String>,
    },
    /// Cross-extremal sequence seeded by an increasing family.
    CrossExtremal {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        s: usize,
    },
    /// Lift an s-saturated family to an (s+1)-saturated one on [n+1].
    Lift {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        s: usize,
    },
}

/// What a command hands back to `main` for printing and exit-status logic.
struct Outcome {
    report: RunReport,
    /// Family or sequence text written to `--output` when requested.
    artifact: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();

    let threads = cli.threads.or_else(|| {
        std::env::var("SATLAB_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(k) = threads {
            builder = builder.num_threads(k);
        }
        match builder.build() {
            Ok(pool) => pool,
            Err(e) => {
                eprintln!("satlab: cannot build thread pool: {e}");
                return ExitCode::from(2);
            }
        }
    };

    let outcome = pool.install(|| run(&cli.command));
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("satlab: {e:#}");
            return ExitCode::from(2);
        }
    };

    if let Some(path) = &cli.output {
        if let Some(artifact) = &outcome.artifact {
            if let Err(e) = fs::write(path, artifact) {
                eprintln!("satlab: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        } else {
            eprintln!("satlab: this command produces no artifact for --output");
            return ExitCode::from(2);
        }
    }

    match cli.format {
        Format::Json => print!("{}", outcome.report.to_json()),
        Format::Text => print!("{}", outcome.report.to_text()),
    }
    eprintln!("elapsed_ms={}", start.elapsed().as_millis());

    if outcome.report.all_hold() {
        ExitCode::SUCCESS
    } else {
        let failed = outcome
            .report
            .first_failure()
            .map(|c| c.name.clone())
            .unwrap_or_default();
        eprintln!("satlab: check failed: {failed}");
        ExitCode::from(1)
    }
}

fn print_warnings(warnings: &[ParseWarning]) {
    for w in warnings {
        eprintln!("satlab: warning: line {}: {}", w.line, w.message);
    }
}

fn load_family(path: &PathBuf) -> anyhow::Result<SetFamily> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let (family, warnings) = parse_family(&text)?;
    print_warnings(&warnings);
    Ok(family)
}

/// Loads a sequence file; a single-family file becomes the diagonal
/// sequence when `s` is given. An explicit sequence must match `s`.
fn load_sequence(path: &PathBuf, s: Option<usize>) -> anyhow::Result<FamilySequence> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.lines().any(|l| l.trim() == "--") {
        let (seq, warnings) = parse_sequence(&text)?;
        print_warnings(&warnings);
        if let Some(s) = s {
            if s != seq.s() {
                bail!("--s {} does not match the {} families in the file", s, seq.s());
            }
        }
        Ok(seq)
    } else {
        let (family, warnings) = parse_family(&text)?;
        print_warnings(&warnings);
        let s = s.ok_or_else(|| {
            anyhow!("single-family input needs --s to build the diagonal sequence")
        })?;
        Ok(FamilySequence::diagonal(&family, s)?)
    }
}

fn family_lines(family: &SetFamily) -> Vec<String> {
    let mut members: Vec<Subset> = family.members().collect();
    members.sort_by_key(|s| (s.len(), s.mask()));
    members.iter().map(|m| m.to_string()).collect()
}

fn sequence_lines(seq: &FamilySequence) -> Vec<Vec<String>> {
    seq.families().iter().map(family_lines).collect()
}

fn push_bound_checks(report: &mut RunReport, family: &SetFamily, s: usize) -> anyhow::Result<()> {
    let bounds = check_saturated_size_bounds(family, s)?;
    report.push_check(CheckItem::compare(
        "ratio_bound",
        bounds.meets_ratio_bound,
        bounds.ratio_lhs,
        bounds.ratio_rhs,
    ));
    report.push_check(CheckItem::compare(
        "conjecture_bound",
        bounds.meets_conjecture_bound,
        bounds.conjecture_lhs,
        bounds.conjecture_rhs,
    ));
    Ok(())
}

fn run(command: &Command) -> anyhow::Result<Outcome> {
    match command {
        Command::CheckSaturated { input, s } => check_saturated_cmd(input, *s),
        Command::Saturate { n, s, input, order } => saturate_cmd(*n, *s, input.as_ref(), order),
        Command::Box { input, input2 } => box_cmd(input, input2),
        Command::VerifyInequality {
            kind,
            n,
            trials,
            seed,
            arbitrary,
        } => verify_inequality_cmd(*kind, *n, *trials, *seed, *arbitrary),
        Command::Cross { op } => cross_cmd(op),
        Command::Certificate {
            input,
            s,
            selftest,
            n,
        } => certificate_cmd(input.as_ref(), *s, *selftest, *n),
        Command::Construct { what } => construct_cmd(what),
        Command::SearchMin {
            n,
            s,
            mode,
            allow_long,
        } => search_min_cmd(*n, *s, *mode, *allow_long),
        Command::SearchMinCross { n, s, allow_long } => search_min_cross_cmd(*n, *s, *allow_long),
    }
}

fn check_saturated_cmd(input: &PathBuf, s: usize) -> anyhow::Result<Outcome> {
    let family = load_family(input)?;
    let mut report = RunReport::new(
        "check-saturated",
        json!({"n": family.ground().n(), "s": s}),
    );
    let status = saturation_status(&family, s)?;
    let check = match &status {
        SaturationStatus::Saturated => CheckItem::flag("s_saturated", true),
        SaturationStatus::ContainsDisjointTuple { witness } => {
            let tuple: Vec<String> = witness.iter().map(|w| w.to_string()).collect();
            CheckItem::flag("s_saturated", false)
                .with_detail(format!("contains {s} pairwise disjoint sets: {tuple:?}"))
        }
        SaturationStatus::NotMaximal { addable } => CheckItem::flag("s_saturated", false)
            .with_detail(format!("not maximal: {addable} is addable")),
    };
    let saturated = check.holds;
    report.push_check(check);
    if saturated {
        push_bound_checks(&mut report, &family, s)?;
    }
    report.set_counter("size", family.size() as u64);
    report.set_data(&json!({"family": family_lines(&family)}));
    Ok(Outcome {
        report,
        artifact: Some(serialize_family(&family)),
    })
}

fn saturate_cmd(
    n: Option<u32>,
    s: usize,
    input: Option<&PathBuf>,
    order: &OrderArgs,
) -> anyhow::Result<Outcome> {
    let start = match input {
        Some(path) => load_family(path)?,
        None => {
            let n = n.ok_or_else(|| anyhow!("saturate needs --n or --input"))?;
            SetFamily::new_empty(GroundSet::new(n)?)
        }
    };
    let mut report = RunReport::new(
        "saturate",
        json!({"n": start.ground().n(), "s": s, "order": order.echo(), "input_size": start.size()}),
    );
    let out = saturate(&start, s, order.candidate_order())?;
    report.push_check(CheckItem::flag(
        "saturated_output",
        satlab_core::saturation::is_s_saturated(&out, s)?,
    ));
    push_bound_checks(&mut report, &out, s)?;
    report.set_counter("size", out.size() as u64);
    report.set_data(&json!({"family": family_lines(&out)}));
    Ok(Outcome {
        report,
        artifact: Some(serialize_family(&out)),
    })
}

fn box_cmd(input: &PathBuf, input2: &PathBuf) -> anyhow::Result<Outcome> {
    let a = load_family(input)?;
    let b = load_family(input2)?;
    let increasing = a.is_increasing() && b.is_increasing();
    let boxed = if increasing {
        box_increasing(&a, &b)?
    } else {
        box_general(&a, &b)?
    };
    let mut report = RunReport::new(
        "box",
        json!({"n": a.ground().n(), "path": if increasing { "increasing" } else { "general" }}),
    );
    let talagrand = talagrand_check(&a, &b)?;
    report.push_check(CheckItem::compare(
        "talagrand",
        talagrand.holds,
        talagrand.lhs,
        talagrand.rhs,
    ));
    let bkr = bkr_check(&a, &b)?;
    report.push_check(CheckItem::compare("bkr", bkr.holds, bkr.lhs, bkr.rhs));
    report.set_counter("a_size", a.size() as u64);
    report.set_counter("b_size", b.size() as u64);
    report.set_counter("box_size", boxed.size() as u64);
    report.set_data(&json!({"family": family_lines(&boxed)}));
    Ok(Outcome {
        report,
        artifact: Some(serialize_family(&boxed)),
    })
}

fn verify_inequality_cmd(
    kind: InequalityKind,
    n: u32,
    trials: u64,
    seed: u64,
    arbitrary: bool,
) -> anyhow::Result<Outcome> {
    let ground = GroundSet::new(n)?;
    let mode = if arbitrary {
        PairMode::Arbitrary
    } else {
        PairMode::Increasing
    };
    let campaign = run_inequality_campaign(ground, mode, trials, seed)?;
    let kind_name = match kind {
        InequalityKind::Talagrand => "talagrand",
        InequalityKind::Bkr => "bkr",
    };
    let mut report = RunReport::new(
        "verify-inequality",
        json!({"kind": kind_name, "n": n, "trials": trials, "seed": seed,
               "pairs": if arbitrary { "arbitrary" } else { "increasing" }}),
    );
    let failures = match kind {
        InequalityKind::Talagrand => campaign.talagrand_failures,
        InequalityKind::Bkr => campaign.bkr_failures,
    };
    report.push_check(
        CheckItem::flag(format!("{kind_name}_all_hold"), failures == 0)
            .with_detail(format!("{failures} of {trials} trials failed")),
    );
    report.set_counter("trials", trials);
    report.set_counter("failures", failures);
    report.set_data(&campaign);
    Ok(Outcome {
        report,
        artifact: None,
    })
}

fn cross_cmd(op: &CrossOp) -> anyhow::Result<Outcome> {
    match op {
        CrossOp::Check { input, s } => {
            let seq = load_sequence(input, *s)?;
            let mut report = RunReport::new(
                "cross-check",
                json!({"n": seq.ground().n(), "s": seq.s()}),
            );
            let status = cross_status(&seq);
            let (dependant, saturated, detail) = match &status {
                CrossStatus::Saturated => (true, true, None),
                CrossStatus::NotDependant { transversal } => {
                    let t: Vec<String> = transversal.iter().map(|x| x.to_string()).collect();
                    (false, false, Some(format!("disjoint transversal {t:?}")))
                }
                CrossStatus::NotMaximal {
                    family_index,
                    addable,
                } => (
                    true,
                    false,
                    Some(format!("{addable} is addable to family {}", family_index + 1)),
                ),
            };
            report.push_check(CheckItem::flag("cross_dependant", dependant));
            let mut check = CheckItem::flag("cross_saturated", saturated);
            if let Some(d) = detail {
                check = check.with_detail(d);
            }
            report.push_check(check);
            report.set_counter("sum_of_sizes", seq.sum_of_sizes());
            report.set_data(&json!({"families": sequence_lines(&seq)}));
            Ok(Outcome {
                report,
                artifact: Some(serialize_sequence(&seq)),
            })
        }
        CrossOp::Saturate { input, n, s, order } => {
            let seq = match input {
                Some(path) => load_sequence(path, *s)?,
                None => {
                    let n = n.ok_or_else(|| anyhow!("cross saturate needs --n or --input"))?;
                    let s = s.ok_or_else(|| anyhow!("cross saturate needs --s or --input"))?;
                    FamilySequence::new(vec![SetFamily::new_empty(GroundSet::new(n)?); s])?
                }
            };
            let mut report = RunReport::new(
                "cross-saturate",
                json!({"n": seq.ground().n(), "s": seq.s(), "order": order.echo(),
                       "input_sum": seq.sum_of_sizes()}),
            );
            let out = cross_saturate(&seq, order.candidate_order())?;
            report.push_check(CheckItem::flag(
                "cross_saturated_output",
                satlab_core::cross::is_cross_saturated(&out),
            ));
            let bound = check_cross_sum_bound(&out)?;
            report.push_check(CheckItem::compare(
                "sum_bound",
                bound.holds,
                bound.sum,
                bound.bound,
            ));
            report.set_counter("sum_of_sizes", out.sum_of_sizes());
            report.set_data(&json!({"families": sequence_lines(&out)}));
            Ok(Outcome {
                report,
                artifact: Some(serialize_sequence(&out)),
            })
        }
        CrossOp::Eq1 { input, s } => {
            let seq = load_sequence(input, *s)?;
            let mut report = RunReport::new(
                "cross-eq1",
                json!({"n": seq.ground().n(), "s": seq.s()}),
            );
            let identity = check_dual_box_identity(&seq)?;
            for (i, holds) in identity.per_index.iter().enumerate() {
                let mut check = CheckItem::flag(format!("dual_box_identity_{}", i + 1), *holds);
                if !holds {
                    if let Some((idx, diff)) = &identity.first_difference {
                        if idx == &i {
                            check = check.with_detail(format!("first differing subset {diff}"));
                        }
                    }
                }
                report.push_check(check);
            }
            report.set_data(&identity);
            Ok(Outcome {
                report,
                artifact: None,
            })
        }
        CrossOp::Gfamilies { input, s } => {
            let seq = load_sequence(input, *s)?;
            let mut report = RunReport::new(
                "cross-gfamilies",
                json!({"n": seq.ground().n(), "s": seq.s()}),
            );
            match disjoint_bound_families(&seq) {
                Ok(bound) => {
                    let total = bound.total();
                    report.push_check(CheckItem::flag("bounding_families_contract", true));
                    report.push_check(CheckItem::compare(
                        "total_within_power_set",
                        true,
                        total,
                        seq.ground().num_subsets() as u64,
                    ));
                    report.set_counter("total", total);
                    report.set_data(&json!({
                        "sizes": bound.sizes(),
                        "families": bound.families().iter().map(family_lines).collect::<Vec<_>>(),
                    }));
                }
                Err(Error::PostconditionViolated(msg)) => {
                    report.push_check(
                        CheckItem::flag("bounding_families_contract", false).with_detail(msg),
                    );
                }
                Err(e) => return Err(e.into()),
            }
            Ok(Outcome {
                report,
                artifact: None,
            })
        }
        CrossOp::Bound { input, s } => {
            let seq = load_sequence(input, *s)?;
            let mut report = RunReport::new(
                "cross-bound",
                json!({"n": seq.ground().n(), "s": seq.s()}),
            );
            let bound = check_cross_sum_bound(&seq)?;
            report.push_check(CheckItem::compare(
                "sum_bound",
                bound.holds,
                bound.sum,
                bound.bound,
            ));
            report.set_data(&bound);
            Ok(Outcome {
                report,
                artifact: None,
            })
        }
    }
}

fn certificate_cmd(
    input: Option<&PathBuf>,
    s: Option<usize>,
    selftest: bool,
    n: Option<u32>,
) -> anyhow::Result<Outcome> {
    if selftest {
        let n = n.ok_or_else(|| anyhow!("--selftest needs --n"))?;
        let ground = GroundSet::new(n)?;
        let mut report = RunReport::new("certificate-selftest", json!({"n": n}));
        let ok = monomial_basis_rank_selftest(ground)?;
        report.push_check(CheckItem::compare(
            "monomial_basis_rank",
            ok,
            if ok { ground.num_subsets() as u64 } else { 0 },
            ground.num_subsets() as u64,
        ));
        return Ok(Outcome {
            report,
            artifact: None,
        });
    }
    let input = input.ok_or_else(|| anyhow!("certificate needs --input or --selftest"))?;
    let seq = load_sequence(input, s)?;
    let mut report = RunReport::new(
        "certificate",
        json!({"n": seq.ground().n(), "s": seq.s()}),
    );
    let cert = independence_certificate(&seq)?;
    report.push_check(CheckItem::flag(
        "cross_block_orthogonality",
        cert.cross_orthogonal,
    ));
    let expected: u64 = cert.block_sizes.iter().sum();
    report.push_check(CheckItem::compare(
        "rank_matches_complements",
        cert.rank_matches,
        cert.total_rank,
        expected,
    ));
    report.push_check(CheckItem::compare(
        "sum_bound_confirmed",
        cert.bound_confirmed,
        cert.sum_of_sizes,
        cert.sum_bound,
    ));
    report.set_counter("total_rank", cert.total_rank);
    report.set_data(&cert);
    Ok(Outcome {
        report,
        artifact: None,
    })
}

fn parse_blocks(ground: GroundSet, blocks: &str) -> anyhow::Result<Vec<Subset>> {
    blocks
        .split('|')
        .map(|piece| {
            let elements: Vec<u32> = piece
                .split(',')
                .map(|e| {
                    e.trim()
                        .parse::<u32>()
                        .map_err(|_| anyhow!("invalid block element `{e}`"))
                })
                .collect::<anyhow::Result<_>>()?;
            Ok(Subset::from_elements(&elements, ground)?)
        })
        .collect()
}

fn construct_cmd(what: &Construction) -> anyhow::Result<Outcome> {
    match what {
        Construction::Dictator { n, element } => {
            let ground = GroundSet::new(*n)?;
            let family = dictator_family(ground, *element)?;
            let mut report = RunReport::new(
                "construct-dictator",
                json!({"n": n, "element": element}),
            );
            report.push_check(CheckItem::compare(
                "size_is_half",
                family.size() == ground.num_subsets() / 2,
                family.size() as u64,
                (ground.num_subsets() / 2) as u64,
            ));
            push_bound_checks(&mut report, &family, 2)?;
            report.set_counter("size", family.size() as u64);
            report.set_data(&json!({"family": family_lines(&family)}));
            Ok(Outcome {
                report,
                artifact: Some(serialize_family(&family)),
            })
        }
        Construction::Partition {
            n,
            blocks,
            dictators,
        } => {
            let ground = GroundSet::new(*n)?;
            let block_sets = parse_blocks(ground, blocks)?;
            let elements: Vec<u32> = match dictators {
                Some(d) => d
                    .split('|')
                    .map(|e| {
                        e.trim()
                            .parse::<u32>()
                            .map_err(|_| anyhow!("invalid dictator element `{e}`"))
                    })
                    .collect::<anyhow::Result<_>>()?,
                None => block_sets
                    .iter()
                    .map(|b| b.elements().next().expect("blocks are nonempty"))
                    .collect(),
            };
            if elements.len() != block_sets.len() {
                bail!(
                    "{} dictators for {} blocks",
                    elements.len(),
                    block_sets.len()
                );
            }
            let s = block_sets.len() + 1;
            let choices = elements.iter().map(|&e| BlockFamily::Dictator(e)).collect();
            let spec = PartitionSpec::new(ground, block_sets, choices)?;
            let family = partition_construction(&spec)?;
            let mut report = RunReport::new(
                "construct-partition",
                json!({"n": n, "s": s, "blocks": blocks, "dictators": elements}),
            );
            report.push_check(CheckItem::flag(
                "saturated_at_conjectured_size",
                satlab_core::saturation::is_s_saturated(&family, s)?,
            ));
            push_bound_checks(&mut report, &family, s)?;
            report.set_counter("size", family.size() as u64);
            report.set_data(&json!({"family": family_lines(&family)}));
            Ok(Outcome {
                report,
                artifact: Some(serialize_family(&family)),
            })
        }
        Construction::CrossExtremal { input, s } => {
            let seed = load_family(input)?;
            let seq = cross_extremal(&seed, *s)?;
            let mut report = RunReport::new(
                "construct-cross-extremal",
                json!({"n": seq.ground().n(), "s": s}),
            );
            let bound = check_cross_sum_bound(&seq)?;
            report.push_check(CheckItem::compare(
                "sum_meets_bound_with_equality",
                bound.sum == bound.bound,
                bound.sum,
                bound.bound,
            ));
            report.set_counter("sum_of_sizes", seq.sum_of_sizes());
            report.set_data(&json!({"families": sequence_lines(&seq)}));
            Ok(Outcome {
                report,
                artifact: Some(serialize_sequence(&seq)),
            })
        }
        Construction::Lift { input, s } => {
            let family = load_family(input)?;
            let lifted = lift(&family, *s)?;
            let mut report = RunReport::new(
                "construct-lift",
                json!({"n": family.ground().n(), "s": s}),
            );
            report.push_check(CheckItem::flag(
                "lift_saturated",
                satlab_core::saturation::is_s_saturated(&lifted, s + 1)?,
            ));
            report.push_check(CheckItem::compare(
                "size_identity",
                lifted.size() == family.size() + family.ground().num_subsets(),
                lifted.size() as u64,
                (family.size() + family.ground().num_subsets()) as u64,
            ));
            report.set_counter("size", lifted.size() as u64);
            report.set_data(&json!({"family": family_lines(&lifted)}));
            Ok(Outcome {
                report,
                artifact: Some(serialize_family(&lifted)),
            })
        }
    }
}

fn search_min_cmd(n: u32, s: usize, mode: ModeKind, allow_long: bool) -> anyhow::Result<Outcome> {
    let ground = GroundSet::new(n)?;
    let mode = match mode {
        ModeKind::Raw => SearchMode::Raw,
        ModeKind::Antichain => SearchMode::Antichain,
    };
    let limits = SearchLimits {
        allow_long,
        ..SearchLimits::default()
    };
    let cert = min_saturated_search(ground, s, mode, &limits)?;
    let mut report = RunReport::new(
        "search-min",
        json!({"n": n, "s": s, "mode": mode.to_string()}),
    );
    report.push_check(CheckItem::flag(
        "witness_saturated",
        satlab_core::saturation::is_s_saturated(&cert.witness, s)?,
    ));
    report.push_check(CheckItem::compare(
        "minimum_at_least_half",
        2 * cert.minimum_size >= ground.num_subsets() as u64,
        2 * cert.minimum_size,
        ground.num_subsets() as u64,
    ));
    report.push_check(CheckItem::compare(
        "minimum_meets_ratio_bound",
        s as u64 * cert.minimum_size >= (s as u64 - 1) * ground.num_subsets() as u64,
        s as u64 * cert.minimum_size,
        (s as u64 - 1) * ground.num_subsets() as u64,
    ));
    report.set_counter("families_examined", cert.families_examined);
    report.set_counter("minimum_size", cert.minimum_size);
    report.set_counter("minimum_count", cert.minimum_count);
    let witness = cert.witness.clone();
    let mut data = serde_json::to_value(&cert)?;
    data["witness"] = json!(family_lines(&witness));
    report.data = data;
    eprintln!("search elapsed_ms={}", cert.elapsed.as_millis());
    Ok(Outcome {
        report,
        artifact: Some(serialize_family(&witness)),
    })
}

fn search_min_cross_cmd(n: u32, s: usize, allow_long: bool) -> anyhow::Result<Outcome> {
    let ground = GroundSet::new(n)?;
    let limits = SearchLimits {
        allow_long,
        ..SearchLimits::default()
    };
    let result = min_cross_search(ground, s, &limits)?;
    let mut report = RunReport::new("search-min-cross", json!({"n": n, "s": s}));
    report.push_check(CheckItem::compare(
        "minimum_meets_sum_bound",
        result.minimum_sum >= (s as u64 - 1) * ground.num_subsets() as u64,
        result.minimum_sum,
        (s as u64 - 1) * ground.num_subsets() as u64,
    ));
    report.set_counter("sequences_examined", result.sequences_examined);
    report.set_counter("minimum_sum", result.minimum_sum);
    let witness = result.witness.clone();
    let mut data = serde_json::to_value(&result)?;
    data["witness"] = json!(sequence_lines(&witness));
    report.data = data;
    Ok(Outcome {
        report,
        artifact: Some(serialize_sequence(&witness)),
    })
}
