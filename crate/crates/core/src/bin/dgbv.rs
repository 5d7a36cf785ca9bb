use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::json;

use dgbv_core::algebra::{check_axioms, CHAlgebra};
use dgbv_core::contraction::evaluate_graph;
use dgbv_core::graded::{fmt_rational, Monomial, VarId};
use dgbv_core::graph::load_graph;
use dgbv_core::potentials::{kdv_coefficient, PotentialTable};
use dgbv_core::verifier::{Relation, Residual, Verifier};

/// Exact graph-sum potentials over cH-algebras.
#[derive(Parser)]
#[command(name = "dgbv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one marked graph over an algebra.
    Eval {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// Graph file (JSON).
        #[arg(long)]
        graph: String,
        #[arg(long)]
        json: bool,
    },
    /// Print a truncated potential F_{g,n} (F_{g,0} is the small-phase-space potential).
    Potential {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long, default_value_t = 0)]
        genus: usize,
        /// Descendant level n of the arrow leaf.
        #[arg(long, default_value_t = 0)]
        desc: u32,
        /// Largest number of empty leaves.
        #[arg(long)]
        max_leaves: usize,
        #[arg(long)]
        json: bool,
        /// Also list the contributing graph classes with their weights.
        #[arg(long)]
        classes: bool,
    },
    /// Check the differential equations; exits 0 iff every check passes.
    Verify {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long, value_enum)]
        relation: RelationArg,
        #[arg(long, default_value_t = 0)]
        genus: usize,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        json: bool,
    },
    /// Compare the trivial-algebra potentials with the KdV one-point series.
    Kdv {
        #[arg(long, default_value_t = 2)]
        max_genus: u32,
        /// Largest arrow level and leaf count.
        #[arg(long, default_value_t = 6)]
        degree: u32,
    },
    /// Check the algebra axioms.
    Axioms {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct AlgebraArg {
    /// Algebra file (JSON) or a shipped algebra: trivial, frobenius2, p2, hodge10.
    #[arg(long)]
    algebra: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum RelationArg {
    Wdvv,
    Const,
    String,
    Dilaton,
    Trr0,
    Trr1,
    Trr2,
    All,
}

impl RelationArg {
    fn relations(self) -> Vec<Relation> {
        match self {
            RelationArg::Wdvv => vec![Relation::Wdvv],
            RelationArg::Const => vec![Relation::Const],
            RelationArg::String => vec![Relation::String],
            RelationArg::Dilaton => vec![Relation::Dilaton],
            RelationArg::Trr0 => vec![Relation::Trr0],
            RelationArg::Trr1 => vec![Relation::Trr1],
            RelationArg::Trr2 => vec![Relation::Trr2],
            RelationArg::All => Relation::ALL.to_vec(),
        }
    }
}

type CliResult = Result<ExitCode, Box<dyn std::error::Error>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Eval { algebra, graph, json } => eval(&algebra.algebra, &graph, json),
        Command::Potential { algebra, genus, desc, max_leaves, json, classes } => {
            potential(&algebra.algebra, genus, desc, max_leaves, json, classes)
        }
        Command::Verify { algebra, relation, genus, n, degree, json } => {
            verify(&algebra.algebra, relation, genus, n, degree, json)
        }
        Command::Kdv { max_genus, degree } => kdv(max_genus, degree),
        Command::Axioms { algebra, json } => axioms(&algebra.algebra, json),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn eval(algebra: &str, graph: &str, json: bool) -> CliResult {
    let alg = CHAlgebra::open(algebra)?;
    let g = load_graph(&std::fs::read_to_string(graph)?)?;
    let value = evaluate_graph(&alg, &g)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        println!("{value}");
    }
    Ok(ExitCode::SUCCESS)
}

fn potential(algebra: &str, genus: usize, desc: u32, max_leaves: usize, json: bool, classes: bool) -> CliResult {
    let alg = CHAlgebra::open(algebra)?;
    let mut table = PotentialTable::new(&alg)?.with_max_leaves(max_leaves);
    let value = table.potential(genus, desc, max_leaves)?;
    let listing: Vec<_> = if classes {
        (0..=max_leaves).flat_map(|l| table.classes(genus, desc, l)).collect()
    } else {
        Vec::new()
    };
    if json {
        let mut report = json!({ "genus": genus, "desc": desc, "max_leaves": max_leaves, "potential": value });
        if classes {
            report["classes"] = listing
                .iter()
                .map(|c| json!({ "graph": c.graph.to_file(), "weight": fmt_rational(&c.weight), "automorphisms": c.automorphisms }))
                .collect();
        }
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("{value}");
        for c in &listing {
            println!("{}  {}", fmt_rational(&c.weight), c.graph.to_json());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(algebra: &str, relation: RelationArg, genus: usize, n: u32, degree: u32, json: bool) -> CliResult {
    let alg = CHAlgebra::open(algebra)?;
    let mut verifier = Verifier::new(&alg)?;
    let results: Vec<Residual> = relation
        .relations()
        .into_iter()
        .map(|r| verifier.check(r, genus, n, degree))
        .collect::<Result<_, _>>()?;
    let pass = results.iter().all(|r| r.pass);
    if json {
        let report = json!({ "pass": pass, "checks": results.iter().map(Residual::to_json).collect::<Vec<_>>() });
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        for r in &results {
            println!("{r}");
            if let Some(w) = &r.witness {
                let indices: Vec<usize> = w.indices.iter().map(|i| i + 1).collect();
                println!("  witness: indices {indices:?}, {} · {}", fmt_rational(&w.coefficient), w.monomial);
            }
        }
    }
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn kdv(max_genus: u32, degree: u32) -> CliResult {
    let alg = CHAlgebra::builtin("trivial").expect("trivial algebra is shipped");
    let mut table = PotentialTable::new(&alg)?.with_max_leaves(degree as usize);
    let t = |level| VarId::new(level, 0);
    let mut all = true;
    println!("{:>5} {:>5} {:>5} {:>14} {:>14}  match", "genus", "level", "k", "computed", "expected");
    for genus in 0..=max_genus {
        for level in 0..=degree {
            let f = table.potential(genus as usize, level, degree as usize)?;
            for k in 0..=degree {
                let m = Monomial::from_vars(std::iter::repeat_n(t(0), k as usize).chain((level > 0).then(|| t(level))));
                let (got, want) = (f.coeff(&m), kdv_coefficient(genus, level, k));
                if got.is_zero() && want.is_zero() {
                    continue;
                }
                let ok = got == want;
                all &= ok;
                println!(
                    "{genus:>5} {level:>5} {k:>5} {:>14} {:>14}  {}",
                    fmt_rational(&got),
                    fmt_rational(&want),
                    if ok { "ok" } else { "MISMATCH" }
                );
            }
        }
    }
    Ok(if all { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn axioms(algebra: &str, json: bool) -> CliResult {
    let alg = CHAlgebra::open(algebra)?;
    let report = check_axioms(&alg);
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{report}");
    }
    Ok(if report.all_pass() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
