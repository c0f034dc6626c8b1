use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use solvlen::constructors::{matrix_to_perm, Matrix, MatrixGroupSpec, VectorAction};
use solvlen::families::{family_report, FamilyLabel};
use solvlen::series::derived_length;
use solvlen::Permutation;
use solvlen_cli::{
    cmd_table, cmd_verify, render, render_ledger, CliError, Format, Suite, TableKind, TableOptions,
    VerifyOptions,
};

#[derive(Parser)]
#[command(
    name = "solvlen",
    version,
    about = "Derived length versus composition length of permutation groups"
)]
struct Cli {
    /// Worker threads for independent rows and ledger jobs.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a table whose cells are all computed live.
    Table {
        #[arg(value_enum)]
        which: TableKind,
        /// Largest r (d for wd, n for un).
        #[arg(long, default_value_t = 1)]
        r_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
        /// Print orders in decimal instead of factored form.
        #[arg(long)]
        decimal: bool,
        /// Field size for the un table.
        #[arg(long, default_value_t = 2)]
        p: u32,
    },
    /// Run verification suites and print the ledger.
    Verify {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 600)]
        budget_seconds: u64,
        /// Include the members of degree 243..648 and H_343.
        #[arg(long)]
        full: bool,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
    },
    /// Report d, c, and order of one family member.
    Report {
        #[arg(long, value_parser = parse_label)]
        family: FamilyLabel,
        #[arg(long)]
        r: u32,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
    },
    /// Convert and combine permutations in 1-based cycle notation.
    Element {
        #[command(subcommand)]
        op: ElementOp,
    },
    /// Build a matrix group over F_p as a permutation group.
    Matrix {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value = "nonzero", value_parser = parse_mode)]
        mode: VectorAction,
        /// Rows separated by ';', entries by spaces, e.g. "1 1;0 1".
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum ElementOp {
    /// Cycles to 1-based image list.
    Decode {
        cycles: String,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// 1-based image list to cycles.
    Encode { images: Vec<usize> },
    /// The product "a then b".
    Compose {
        a: String,
        b: String,
        #[arg(long)]
        degree: usize,
    },
    Inverse {
        a: String,
        #[arg(long)]
        degree: Option<usize>,
    },
}

fn parse_label(s: &str) -> Result<FamilyLabel, String> {
    s.parse().map_err(|e: solvlen::GroupError| e.to_string())
}

fn parse_mode(s: &str) -> Result<VectorAction, String> {
    s.parse().map_err(|e: solvlen::GroupError| e.to_string())
}

fn images_line(p: &Permutation) -> String {
    p.images()
        .iter()
        .map(|&x| (x + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn run_element(op: ElementOp) -> Result<String, CliError> {
    Ok(match op {
        ElementOp::Decode { cycles, degree } => {
            images_line(&Permutation::parse_cycles(&cycles, degree)?)
        }
        ElementOp::Encode { images } => {
            let zero_based = images
                .iter()
                .map(|&x| {
                    x.checked_sub(1)
                        .ok_or_else(|| CliError::Usage("images are 1-based".into()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Permutation::from_images(zero_based)?.to_cycle_string()
        }
        ElementOp::Compose { a, b, degree } => {
            let a = Permutation::parse_cycles(&a, Some(degree))?;
            let b = Permutation::parse_cycles(&b, Some(degree))?;
            a.compose(&b)?.to_cycle_string()
        }
        ElementOp::Inverse { a, degree } => Permutation::parse_cycles(&a, degree)?
            .inverse()
            .to_cycle_string(),
    } + "\n")
}

fn render_report(rep: &solvlen::GroupReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(rep).expect("reports serialize") + "\n",
        Format::Csv => format!(
            "name,degree,order,c,d,transitive,expected_c,expected_d,match\n{},{},{},{},{},{},{},{},{}\n",
            rep.name, rep.degree, rep.order, rep.c, rep.d, rep.transitive, rep.expected_c, rep.expected_d, rep.matches
        ),
        Format::Markdown => format!(
            "| group | degree | order | c | d | transitive | match |\n|---|---|---|---|---|---|---|\n| {} | {} | {} | {} | {} | {} | {} |\n",
            rep.name, rep.degree, rep.order, rep.c, rep.d, rep.transitive, if rep.matches { "yes" } else { "NO" }
        ),
    }
}

fn render_matrix_group(g: &solvlen::PermutationGroup, format: Format) -> Result<String, CliError> {
    let order = solvlen::factorize(&g.order())?;
    let d = match derived_length(g) {
        Ok(d) => Some(d),
        Err(solvlen::GroupError::NotSolvable { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let c = d.map(|_| order.exponent_sum());
    let text = |x: Option<u64>| x.map_or("not solvable".to_string(), |v| v.to_string());
    let (c, d) = (text(c), text(d.map(|v| v as u64)));
    Ok(match format {
        Format::Json => {
            let value = serde_json::json!({
                "degree": g.degree(),
                "order": order,
                "c": c,
                "d": d,
                "transitive": g.is_transitive(),
            });
            serde_json::to_string_pretty(&value).expect("values serialize") + "\n"
        }
        Format::Csv => format!("degree,order,c,d,transitive\n{},{},{c},{d},{}\n", g.degree(), order, g.is_transitive()),
        Format::Markdown => format!(
            "| degree | order | c | d | transitive |\n|---|---|---|---|---|\n| {} | {} | {c} | {d} | {} |\n",
            g.degree(),
            order,
            g.is_transitive()
        ),
    })
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let started = Instant::now();
    let code = match cli.command {
        Command::Table {
            which,
            r_max,
            format,
            decimal,
            p,
        } => {
            let table = cmd_table(TableOptions {
                kind: which,
                r_max,
                p,
            })?;
            print!("{}", render(&table, format, decimal));
            if table.rows.iter().all(|r| r.matches) {
                0
            } else {
                1
            }
        }
        Command::Verify {
            suite,
            budget_seconds,
            full,
            format,
        } => {
            let (ledger, timings) = cmd_verify(VerifyOptions {
                suite,
                budget: Duration::from_secs(budget_seconds),
                full,
            })?;
            print!("{}", render_ledger(&ledger, format));
            for t in timings {
                match t.elapsed {
                    Some(e) => eprintln!("{}: {:.2?}", t.id, e),
                    None => eprintln!("{}: skipped", t.id),
                }
            }
            ledger.exit_code()
        }
        Command::Report { family, r, format } => {
            let rep = family_report(family, r)?;
            print!("{}", render_report(&rep, format));
            if rep.matches {
                0
            } else {
                1
            }
        }
        Command::Element { op } => {
            print!("{}", run_element(op)?);
            0
        }
        Command::Matrix {
            p,
            mode,
            gens,
            format,
        } => {
            let matrices = gens
                .iter()
                .map(|g| Matrix::parse(p, g))
                .collect::<Result<Vec<_>, _>>()?;
            let dim = matrices[0].dim();
            let spec = MatrixGroupSpec {
                p,
                dim,
                generators: matrices,
            };
            let g = matrix_to_perm(&spec, mode)?;
            print!("{}", render_matrix_group(&g, format)?);
            0
        }
    };
    eprintln!("elapsed: {:.2?}", started.elapsed());
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
