//! Command line front end: exact evaluations, verification suites, and the
//! seeded fuzz harness.

mod instance;
mod report;
mod verify;

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use gcl_core::cohomology::{check_cocycle_phi, GroupElem};
use gcl_core::cones::{build_sign_table, check_sign_lemma, check_triple_and_coverage};
use gcl_core::cyclotomic::trace_contributions;
use gcl_core::dedekind::{dedekind_sum, p2_n, phi_dr, Sl2Matrix};
use gcl_core::forms::{
    dual_basis_full, dual_family_deficient, gamma_vector, is_well_placed, standard_relation,
};
use gcl_core::fuzz::Fuzzer;
use gcl_core::rat::{format_rat, parse_rat, Int};
use gcl_core::smoothing::{is_good_lattice, smoothed_bn_dedekind};

use instance::InstanceFile;
use report::{Check, Report};

#[derive(Parser)]
#[command(name = "gcl", version, about = "exact lattice Bernoulli sums and elliptic gamma identities")]
struct Cli {
    /// Emit the machine-readable JSON report instead of the table.
    #[arg(long, global = true)]
    json: bool,
    /// Tolerance for complex identities.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Seed for all randomized checks.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Positive dual family (full rank) or gamma + deficient dual (rank n-1).
    DualBasis {
        #[arg(long)]
        file: PathBuf,
    },
    /// Standard non-trivial relation of n forms of rank n-1.
    Relation {
        #[arg(long)]
        file: PathBuf,
    },
    /// Well-placedness of the family.
    WellPlaced {
        #[arg(long)]
        file: PathBuf,
    },
    /// Exact Bernoulli rational value at rational (w, x).
    Bernoulli {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        w: String,
        /// comma separated rationals, one per coordinate
        #[arg(long, value_delimiter = ',')]
        x: Vec<String>,
    },
    /// Smoothed Bernoulli value via the periodic-Bernoulli formula.
    SmoothedBernoulli {
        #[arg(long)]
        file: PathBuf,
    },
    /// Per-divisor cyclotomic trace contributions and their total.
    TraceFormula {
        #[arg(long)]
        file: PathBuf,
    },
    /// Classical Dedekind sum s(c, d).
    Dedekind { c: i64, d: i64 },
    /// Dedekind-Rademacher function of an SL_2(Z) matrix [[a,b],[c,d]].
    PhiDr { a: i64, b: i64, c: i64, d: i64 },
    /// Smoothed P_2 value of a Gamma_0(N) matrix.
    P2n {
        a: i64,
        b: i64,
        c: i64,
        d: i64,
        #[arg(long = "n-smooth")]
        n_smooth: i64,
    },
    /// Sign table and cone lemma suite for a rank n-1 family.
    SignTable {
        #[arg(long)]
        file: PathBuf,
    },
    /// Cocycle sum of phi_{n,a} over a tuple of n unimodular matrices.
    Cocycle {
        /// comma separated integer form, e.g. "1,0"
        #[arg(long, value_delimiter = ',')]
        base_form: Vec<i64>,
        /// JSON file: array of n x n integer matrices (row-major rows)
        #[arg(long)]
        matrices: PathBuf,
        /// comma separated rationals
        #[arg(long, value_delimiter = ',')]
        v: Option<Vec<String>>,
    },
    /// Emit fuzzed instances as JSON lines.
    Fuzz {
        #[arg(long, value_enum)]
        profile: Profile,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long = "n-smooth", default_value_t = 2)]
        n_smooth: i64,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    FullRankGood,
    RankDeficientWellPlaced,
    BarycenterCounterexample,
    CocycleGeneric,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Modular,
    Main,
    RankDeficient,
    All,
}

/// Truncation tier from the GCL_PRECISION environment variable.
fn truncation() -> gcl_core::gamma::Truncation {
    let mut t = gcl_core::gamma::Truncation::default();
    match std::env::var("GCL_PRECISION").as_deref() {
        Ok("low") => t.cutoff = 5.0,
        Ok("high") => t.cutoff = 8.0,
        _ => {}
    }
    t
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            report.render(cli.json);
            std::process::exit(if report.all_passed() { 0 } else { 1 });
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}

fn run(cli: &Cli) -> Result<Report> {
    let mut report = Report::new();
    match &cli.cmd {
        Cmd::DualBasis { file } => {
            let inst = InstanceFile::load(file)?;
            let fam = inst.family()?;
            if fam.rank() == fam.n() {
                let dual = dual_basis_full(&fam).map_err(|e| anyhow!("{e}"))?;
                report.push(Check::value(
                    "dual-basis",
                    serde_json::json!({
                        "alphas": dual.alphas.iter().map(|a| ints(a)).collect::<Vec<_>>(),
                        "s": ints(&dual.s),
                    }),
                ));
            } else {
                let (gamma, s) = gamma_vector(&fam).map_err(|e| anyhow!("{e}"))?;
                let dual = dual_family_deficient(&fam).map_err(|e| anyhow!("{e}"))?;
                report.push(Check::value(
                    "dual-basis",
                    serde_json::json!({
                        "gamma": ints(&gamma),
                        "orientation": s.to_string(),
                        "alphas": dual.alphas.iter().map(|a| ints(a)).collect::<Vec<_>>(),
                        "s": ints(&dual.s),
                    }),
                ));
            }
        }
        Cmd::Relation { file } => {
            let fam = InstanceFile::load(file)?.family()?;
            let rel = standard_relation(&fam).map_err(|e| anyhow!("{e}"))?;
            report.push(Check::value(
                "relation",
                serde_json::json!({
                    "lambda": rel.lambda.iter().map(format_rat).collect::<Vec<_>>(),
                    "l": rel.l + 1,
                    "k_plus": rel.k_plus,
                    "k_minus": rel.k_minus,
                }),
            ));
        }
        Cmd::WellPlaced { file } => {
            let fam = InstanceFile::load(file)?.family()?;
            let wp = is_well_placed(&fam).map_err(|e| anyhow!("{e}"))?;
            report.push(Check::value(
                "well-placed",
                serde_json::json!({ "well_placed": wp, "rank": fam.rank() }),
            ));
        }
        Cmd::Bernoulli { file, w, x } => {
            let inst = InstanceFile::load(file)?;
            let fam = inst.family()?;
            let v = inst.v_vector()?;
            let w = parse_rat(w).context("bad rational for --w")?;
            let x: Vec<_> = x
                .iter()
                .map(|s| parse_rat(s).context("bad rational in --x"))
                .collect::<Result<_>>()?;
            let value =
                gcl_core::bernoulli::bn_value_rat(&fam, &v, &w, &x).map_err(|e| anyhow!("{e}"))?;
            report.push(Check::value(
                "bernoulli",
                serde_json::json!({ "value": format_rat(&value) }),
            ));
        }
        Cmd::SmoothedBernoulli { file } => {
            let inst = InstanceFile::load(file)?;
            let fam = inst.family()?;
            let v = inst.v_vector()?;
            let n_smooth = inst.n_smooth()?;
            let good = is_good_lattice(&fam, n_smooth).map_err(|e| anyhow!("{e}"))?;
            let sv = smoothed_bn_dedekind(&fam, &v, n_smooth).map_err(|e| anyhow!("{e}"))?;
            report.push(Check::value(
                "smoothed-bernoulli",
                serde_json::json!({
                    "value": format_rat(&sv.value),
                    "b": sv.b.to_string(),
                    "D": sv.denom_bound.to_string(),
                    "good": good,
                }),
            ));
        }
        Cmd::TraceFormula { file } => {
            let inst = InstanceFile::load(file)?;
            let fam = inst.family()?;
            let v = inst.v_vector()?;
            let n_smooth = inst.n_smooth()?;
            let contributions =
                trace_contributions(&fam, &v, n_smooth).map_err(|e| anyhow!("{e}"))?;
            let total: gcl_core::Rat = contributions.iter().map(|(_, r)| r.clone()).sum();
            report.push(Check::value(
                "trace-formula",
                serde_json::json!({
                    "per_divisor": contributions
                        .iter()
                        .map(|(d, r)| serde_json::json!({ "d": d, "value": format_rat(r) }))
                        .collect::<Vec<_>>(),
                    "total": format_rat(&total),
                }),
            ));
        }
        Cmd::Dedekind { c, d } => {
            let s = dedekind_sum(*c, *d).map_err(|e| anyhow!("{e}"))?;
            report.push(Check::value(
                "dedekind",
                serde_json::json!({ "value": format_rat(&s) }),
            ));
        }
        Cmd::PhiDr { a, b, c, d } => {
            let g = Sl2Matrix::new(*a, *b, *c, *d).map_err(|e| anyhow!("{e}"))?;
            let value = phi_dr(&g).map_err(|e| anyhow!("{e}"))?;
            report.push(Check::value(
                "phi-dr",
                serde_json::json!({ "value": value.to_string() }),
            ));
        }
        Cmd::P2n { a, b, c, d, n_smooth } => {
            let g = Sl2Matrix::new(*a, *b, *c, *d).map_err(|e| anyhow!("{e}"))?;
            let value = p2_n(&g, *n_smooth).map_err(|e| anyhow!("{e}"))?;
            report.push(Check::value(
                "p2n",
                serde_json::json!({ "value": format_rat(&value) }),
            ));
        }
        Cmd::SignTable { file } => {
            let inst = InstanceFile::load(file)?;
            let fam = inst.family()?;
            let x = inst.gaussian_x(cli.seed)?;
            let table = build_sign_table(&fam, &x).map_err(|e| anyhow!("{e}"))?;
            let lemma = check_sign_lemma(&table);
            let cones = check_triple_and_coverage(&fam, &table);
            let f_ok = gcl_core::cones::verify_f_vanishing(&fam, &table);
            let n = table.n;
            report.push(Check::value(
                "sign-table",
                serde_json::json!({
                    "l": table.l + 1,
                    "entries": (table.l..n)
                        .map(|j| (0..n)
                            .map(|k| table.entry(j, k).map_or(".".into(), |s| if s == 1 { "+".to_string() } else { "-".to_string() }))
                            .collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                    "mu": table.mu[table.l..].iter().map(|m| m.unwrap()).collect::<Vec<_>>(),
                }),
            ));
            report.push(Check::bool("sign-lemma", lemma.all()));
            report.push(Check::bool("cone-lemmas", cones.all()));
            report.push(Check::bool("f-vanishing", f_ok));
        }
        Cmd::Cocycle { base_form, matrices, v } => {
            let text = std::fs::read_to_string(matrices)
                .with_context(|| format!("reading {}", matrices.display()))?;
            let raw: Vec<Vec<Vec<i64>>> = serde_json::from_str(&text)?;
            let tuple: Vec<GroupElem> = raw
                .into_iter()
                .map(|m| {
                    GroupElem::new(
                        m.into_iter()
                            .map(|r| r.into_iter().map(Int::from).collect())
                            .collect(),
                    )
                    .map_err(|e| anyhow!("{e}"))
                })
                .collect::<Result<_>>()?;
            let a: Vec<Int> = base_form.iter().map(|&e| Int::from(e)).collect();
            let n = a.len();
            if tuple.len() != n {
                bail!("the cocycle needs exactly n = {n} matrices");
            }
            let v = match v {
                Some(vs) => vs
                    .iter()
                    .map(|s| parse_rat(s).context("bad rational in --v"))
                    .collect::<Result<_>>()?,
                None => vec![gcl_core::Rat::default(); n],
            };
            let w = parse_rat("1/3").unwrap();
            let x: Vec<_> = (0..n)
                .map(|i| parse_rat(&format!("{}/{}", 2 * i as i64 + 3, 7)).unwrap())
                .collect();
            let (sum, generic) =
                check_cocycle_phi(&a, &tuple, &v, &w, &x).map_err(|e| anyhow!("{e}"))?;
            let mut check = Check::value(
                "cocycle",
                serde_json::json!({ "sum": format_rat(&sum), "generic": generic }),
            );
            if !generic {
                check.skip("tuple outside the generic stratum; vanishing not asserted");
            } else if !sum.eq(&gcl_core::Rat::default()) {
                check.fail();
            }
            report.push(check);
        }
        Cmd::Fuzz { profile, count, n, n_smooth } => {
            let mut fz = Fuzzer::new(cli.seed);
            for idx in 0..*count {
                let inst = match profile {
                    Profile::FullRankGood => {
                        let (fam, v) = fz
                            .full_rank_good(*n, *n_smooth)
                            .map_err(|e| anyhow!("{e}"))?;
                        InstanceFile::from_family(&fam, Some(&v), Some(*n_smooth), cli.seed)
                    }
                    Profile::RankDeficientWellPlaced => {
                        let fam = fz
                            .rank_deficient_well_placed(*n)
                            .map_err(|e| anyhow!("{e}"))?;
                        InstanceFile::from_family(&fam, None, None, cli.seed)
                    }
                    Profile::BarycenterCounterexample => {
                        let fam = fz.barycenter(*n).map_err(|e| anyhow!("{e}"))?;
                        InstanceFile::from_family(&fam, None, None, cli.seed)
                    }
                    Profile::CocycleGeneric => {
                        let fam = fz.cocycle_generic(*n).map_err(|e| anyhow!("{e}"))?;
                        InstanceFile::from_family(&fam, None, None, cli.seed)
                    }
                };
                println!("{}", serde_json::to_string(&inst)?);
                report.push(Check::value(
                    &format!("fuzz-{idx}"),
                    serde_json::json!({ "emitted": true }),
                ));
            }
        }
        Cmd::Verify { suite, count } => {
            let trunc = truncation();
            match suite {
                Suite::Modular => verify::suite_modular(&mut report, cli.seed, *count, cli.tol, &trunc),
                Suite::Main => verify::suite_main(&mut report, cli.seed, *count, cli.tol, &trunc),
                Suite::RankDeficient => {
                    verify::suite_rank_deficient(&mut report, cli.seed, *count, cli.tol, &trunc)
                }
                Suite::All => {
                    verify::suite_modular(&mut report, cli.seed, *count, cli.tol, &trunc);
                    verify::suite_main(&mut report, cli.seed, *count, cli.tol, &trunc);
                    verify::suite_rank_deficient(&mut report, cli.seed, *count, cli.tol, &trunc);
                    verify::suite_smoothed_agreement(&mut report, cli.seed, *count);
                }
            }
        }
    }
    Ok(report)
}

fn ints(v: &[Int]) -> Vec<String> {
    v.iter().map(|e| e.to_string()).collect()
}

#[allow(dead_code)]
fn complex_to_json(z: Complex64) -> serde_json::Value {
    serde_json::json!({ "re": z.re.to_string(), "im": z.im.to_string() })
}
