use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use freequot_core::autos::{builtin_group, ProductAuto};
use freequot_core::cyclo::{cyclo_parse, CycloNum};
use freequot_core::geometry::{group_fixed_locus, lefschetz_sum};
use freequot_core::group::{closure, identify_isomorphism_type, FiniteSubgroup, DEFAULT_CAP};
use freequot_core::intersection::{chow_degree, euler_anticanonical, quotient_hodge, surface_invariants, ChowClass};
use freequot_core::multihomog::{
    action_matrix, builtin_poly, eigensection_space, eigenvalue_of, full_support_eigenvector_exists, lifted_closure, Degree, LiftedAuto,
    MultiPoly,
};
use freequot_core::report::{check_ids, run_verification_suite};
use freequot_core::spec::parse_group_spec;

#[derive(Parser)]
#[command(
    name = "freequot",
    version,
    about = "Exact checks for free group actions on anticanonical divisors of (P^1)^4"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite.
    Verify(VerifyArgs),
    /// Closure, isomorphism type and fixed points of a group.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Sections of multidegree line bundles under a lifted group.
    #[command(subcommand)]
    Sections(SectionsCommand),
    /// Holomorphic Lefschetz sums of group elements.
    Lefschetz {
        #[command(flatten)]
        source: Source,
        /// Index of a single element in closure order.
        #[arg(long)]
        element: Option<usize>,
    },
    /// Intersection numbers on (P^1)^4.
    #[command(subcommand)]
    Chow(ChowCommand),
    /// Hodge numbers of the quotient Y/G.
    Hodge {
        #[command(flatten)]
        source: Source,
    },
    /// Invariants of the surface T and its quotient by a free group of the given order.
    Surface {
        #[arg(long)]
        order: usize,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Check ids or id prefixes to run; all checks when omitted.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    only: Vec<String>,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    markdown: Option<PathBuf>,
    /// Print the available check ids and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Group-spec JSON file.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Name of a built-in generator set.
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Subcommand)]
enum GroupCommand {
    Closure {
        #[command(flatten)]
        source: Source,
    },
    Identify {
        #[command(flatten)]
        source: Source,
    },
    FixedPoints {
        #[command(flatten)]
        source: Source,
    },
}

#[derive(Subcommand)]
enum SectionsCommand {
    /// Simultaneous eigenspace of the canonical generator lifts.
    Eigenspace {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_parser = parse_degree, default_value = "1,1,1,1")]
        degree: Degree,
        /// Take the eigenvalues of a built-in polynomial (Q0..Q5, Qp0..Qp5, F1).
        #[arg(long, conflicts_with = "eigenvalue")]
        like: Option<String>,
        /// One eigenvalue per generator, in CycloNum text form.
        #[arg(long, value_parser = parse_cyclo)]
        eigenvalue: Vec<CycloNum>,
    },
    /// Traces of every lifted group element on the sections of a degree.
    TraceTable {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_parser = parse_degree, default_value = "1,1,1,1")]
        degree: Degree,
    },
    /// Whether each generator lift admits a full-support eigensection in degree (2,2,2,2).
    Obstruction {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        generator: Option<usize>,
    },
}

#[derive(Subcommand)]
enum ChowCommand {
    /// Euler number of a smooth anticanonical divisor.
    Euler,
    /// Degree of a product of four divisor classes (default H^4).
    Degree {
        #[arg(long = "divisor", value_parser = parse_divisor, num_args = 4)]
        divisors: Vec<[i64; 4]>,
    },
}

fn parse_quad<T: std::str::FromStr>(s: &str) -> Result<[T; 4], String> {
    let parts: Vec<T> = s
        .split(',')
        .map(|p| p.trim().parse::<T>().map_err(|_| format!("bad integer {p:?}")))
        .collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|_| format!("expected four comma-separated integers, got {s:?}"))
}

fn parse_degree(s: &str) -> Result<Degree, String> {
    parse_quad(s)
}

fn parse_divisor(s: &str) -> Result<[i64; 4], String> {
    parse_quad(s)
}

fn parse_cyclo(s: &str) -> Result<CycloNum, String> {
    cyclo_parse(s).map_err(|e| e.to_string())
}

impl Source {
    fn generators(&self) -> Result<Vec<ProductAuto>> {
        match (&self.spec, &self.builtin) {
            (Some(path), _) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                parse_group_spec(&text).with_context(|| format!("parsing {}", path.display()))
            }
            (None, Some(name)) => Ok(builtin_group(name)?),
            (None, None) => unreachable!("clap requires a source"),
        }
    }

    fn closure(&self) -> Result<FiniteSubgroup> {
        Ok(closure(&self.generators()?, DEFAULT_CAP)?)
    }

    fn lifts(&self) -> Result<Vec<LiftedAuto>> {
        Ok(self.generators()?.iter().map(LiftedAuto::canonical).collect())
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn verify(args: &VerifyArgs, out: &mut impl Write) -> Result<bool> {
    if args.list {
        for id in check_ids() {
            writeln!(out, "{id}")?;
        }
        return Ok(true);
    }
    let known = check_ids();
    for sel in &args.only {
        if !known.iter().any(|id| id.starts_with(sel.as_str())) {
            bail!("no check id starts with {sel:?}");
        }
    }
    let report = run_verification_suite(&args.only);
    for c in &report.checks {
        let status = c.status.as_str().to_uppercase();
        match c.counterexample.as_ref().or(c.error.as_ref()) {
            Some(why) => writeln!(out, "{status:5} {}: {why}", c.id)?,
            None => writeln!(out, "{status:5} {}", c.id)?,
        }
    }
    let s = &report.summary;
    writeln!(out, "{} checks: {} pass, {} fail, {} error", s.total, s.passed, s.failed, s.errors)?;
    if let Some(path) = &args.json {
        write_file(path, &report.to_json())?;
    }
    if let Some(path) = &args.markdown {
        write_file(path, &report.to_markdown())?;
    }
    Ok(report.all_pass())
}

fn group(cmd: &GroupCommand, out: &mut impl Write) -> Result<bool> {
    match cmd {
        GroupCommand::Closure { source } => {
            let g = source.closure()?;
            writeln!(out, "order {}", g.order())?;
            let hist: Vec<String> = g.order_histogram().iter().map(|(k, n)| format!("{k}:{n}")).collect();
            writeln!(out, "element orders {}", hist.join(" "))?;
            for (k, e) in g.elements().enumerate() {
                writeln!(out, "{k:3}  {e}")?;
            }
        }
        GroupCommand::Identify { source } => {
            let g = source.closure()?;
            let t = identify_isomorphism_type(&g)?;
            writeln!(out, "{} (order {})", t.label, t.order)?;
        }
        GroupCommand::FixedPoints { source } => {
            let g = source.closure()?;
            let locus = group_fixed_locus(&g)?;
            for (comp, stabilizer) in &locus {
                let idx: Vec<String> = stabilizer.iter().map(usize::to_string).collect();
                writeln!(out, "{comp}  fixed by [{}]", idx.join(","))?;
            }
            writeln!(out, "{} components", locus.len())?;
        }
    }
    Ok(true)
}

fn sections(cmd: &SectionsCommand, out: &mut impl Write) -> Result<bool> {
    match cmd {
        SectionsCommand::Eigenspace {
            source,
            degree,
            like,
            eigenvalue,
        } => {
            let lifts = source.lifts()?;
            let eigen: Vec<CycloNum> = match like {
                Some(name) => {
                    let p = builtin_poly(name).with_context(|| format!("unknown polynomial {name:?}"))?;
                    lifts_eigenvalues(&lifts, &p).with_context(|| format!("{name} is not a simultaneous eigenvector"))?
                }
                None => eigenvalue.clone(),
            };
            if eigen.len() != lifts.len() {
                bail!("{} eigenvalues given for {} generators", eigen.len(), lifts.len());
            }
            let space = eigensection_space(&lifts, *degree, &eigen)?;
            let shown: Vec<String> = eigen.iter().map(ToString::to_string).collect();
            writeln!(out, "eigenvalues [{}]", shown.join(", "))?;
            writeln!(out, "dimension {}", space.cols())?;
            for col in space.columns() {
                writeln!(out, "  {}", MultiPoly::from_vector(*degree, &col))?;
            }
        }
        SectionsCommand::TraceTable { source, degree } => {
            let lifts = lifted_closure(&source.lifts()?, DEFAULT_CAP)?;
            for (k, g) in lifts.iter().enumerate() {
                writeln!(out, "{k:3}  {}  trace {}", g.auto(), action_matrix(g, *degree)?.trace())?;
            }
        }
        SectionsCommand::Obstruction { source, generator } => {
            let lifts = source.lifts()?;
            let chosen: Vec<(usize, &LiftedAuto)> = match generator {
                Some(k) => vec![(*k, lifts.get(*k).with_context(|| format!("generator {k} out of range"))?)],
                None => lifts.iter().enumerate().collect(),
            };
            for (k, g) in chosen {
                let v = full_support_eigenvector_exists(g)?;
                match v.witness_strings() {
                    Some((a, b)) => writeln!(out, "generator {k}: no full-support eigensection; witness {a}, {b}")?,
                    None if v.exists => writeln!(out, "generator {k}: full-support eigensection exists")?,
                    None => writeln!(out, "generator {k}: no full-support eigensection")?,
                }
            }
        }
    }
    Ok(true)
}

fn lifts_eigenvalues(lifts: &[LiftedAuto], p: &MultiPoly) -> Option<Vec<CycloNum>> {
    lifts.iter().map(|g| eigenvalue_of(g, p)).collect()
}

fn lefschetz(source: &Source, element: Option<usize>, out: &mut impl Write) -> Result<bool> {
    let g = source.closure()?;
    let indices: Vec<usize> = match element {
        Some(0) => bail!("element 0 is the identity"),
        Some(k) if k >= g.order() => bail!("element {k} out of range for a group of order {}", g.order()),
        Some(k) => vec![k],
        None => (1..g.order()).collect(),
    };
    let mut all_one = true;
    for k in indices {
        let e = g.element(k);
        let r = lefschetz_sum(e)?;
        all_one &= r.sum.is_one();
        writeln!(out, "{k:3}  {e}  {} fixed points, sum {}", r.terms.len(), r.sum)?;
    }
    Ok(all_one)
}

fn chow(cmd: &ChowCommand, out: &mut impl Write) -> Result<bool> {
    match cmd {
        ChowCommand::Euler => {
            let e = euler_anticanonical();
            writeln!(out, "c(T_Y) = {:?}", e.chern_y)?;
            writeln!(out, "euler {}", e.euler)?;
        }
        ChowCommand::Degree { divisors } => {
            let classes: [ChowClass; 4] = if divisors.is_empty() {
                std::array::from_fn(|_| ChowClass::hyperplane())
            } else {
                std::array::from_fn(|k| ChowClass::divisor(divisors[k]))
            };
            writeln!(out, "{}", chow_degree(&classes)?)?;
        }
    }
    Ok(true)
}

fn run(cli: &Cli, out: &mut impl Write) -> Result<bool> {
    match &cli.command {
        Command::Verify(args) => verify(args, out),
        Command::Group(cmd) => group(cmd, out),
        Command::Sections(cmd) => sections(cmd, out),
        Command::Lefschetz { source, element } => lefschetz(source, *element, out),
        Command::Chow(cmd) => chow(cmd, out),
        Command::Hodge { source } => {
            let q = quotient_hodge(&source.closure()?)?;
            writeln!(
                out,
                "|G| = {}  h11 = {}  h12 = {}  height = {}  euler = {}",
                q.group_order, q.h11, q.h12, q.height, q.euler
            )?;
            Ok(true)
        }
        Command::Surface { order } => {
            let s = surface_invariants(*order)?;
            writeln!(out, "K_T^2 = {}  p_g(T) = {}  q = {}  chi(O_T) = {}", s.k2_t, s.pg_t, s.q, s.chi_t)?;
            writeln!(out, "K_S^2 = {}  p_g(S) = {}  chi(O_S) = {}", s.k2_s, s.pg_s, s.chi_s)?;
            writeln!(out, "expected moduli dimension {}", s.expected_moduli_dim)?;
            Ok(true)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out).and_then(|ok| Ok(out.flush().map(|()| ok)?));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
