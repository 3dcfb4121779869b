//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing check or the
//! sampler gives up, 2 for usage errors and invalid input.

use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::asymptotics::{
    age_variance_asym, ancestor_variance_asym, constant_c, expected_age_asym,
    expected_ancestor_asym, AsymptoticEstimate, ConstantSpec, MAX_DIGITS,
};
use crate::enumerate::{count_trees, enumerate_trees, Sampler, SamplerConfig};
use crate::error::Error;
use crate::series::{series_f_geq, series_f_leq, series_g, series_s, series_t, Bivariate, Series};
use crate::stats::{
    age_distribution, age_moments, ancestor_distribution, expected_ancestor_size, to_f64,
    DistributionTable,
};
use crate::tree::{DyckPath, PlaneTree};
use crate::verify::{csv_field, verify, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "cstree",
    version,
    about = "Catalan-Stanley trees: counts, ages, ancestors, generating functions"
)]
pub struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Number of trees of a given size
    Count {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        size: u64,
    },
    /// All trees of a given size, in lexicographic order of their bracket words
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=16))]
        size: u64,
    },
    /// Uniformly random trees
    Sample(SampleArgs),
    /// Age of one tree, or the age statistics of a size
    Age(AgeArgs),
    /// Ancestor of one tree, or the ancestor-size statistics of a size
    Ancestor(AncestorArgs),
    /// The limiting constants c0..c3
    Constants {
        /// Significant digits
        #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u32).range(1..=MAX_DIGITS as i64))]
        precision: u32,
    },
    /// Tree to Dyck path or back
    Bijection(BijectionArgs),
    /// Coefficients of a generating function
    Series(SeriesArgs),
    /// Cross-check formulas, series and brute force
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
    size: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
    count: u64,
    #[arg(long, default_value_t = SamplerConfig::DEFAULT_MAX_REJECTIONS, value_parser = clap::value_parser!(u64).range(1..))]
    max_rejections: u64,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "input")]
struct TreeOrSize {
    /// Tree in bracket notation, e.g. "(()(()))"
    #[arg(long, group = "input")]
    tree: Option<String>,
    #[arg(long, group = "input", value_parser = clap::value_parser!(u64).range(1..=100_000))]
    size: Option<u64>,
}

#[derive(Args, Debug)]
pub struct AgeArgs {
    #[command(flatten)]
    input: TreeOrSize,
    /// Full exact distribution instead of the moments
    #[arg(long, requires = "size")]
    exact: bool,
}

#[derive(Args, Debug)]
pub struct AncestorArgs {
    #[command(flatten)]
    input: TreeOrSize,
    /// Number of reductions r
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=100_000))]
    depth: u32,
    /// Full exact distribution instead of the moments
    #[arg(long, requires = "size")]
    exact: bool,
    /// Series truncation order for the exact distribution (default: the size)
    #[arg(long, requires = "exact", value_parser = clap::value_parser!(u64).range(1..=64))]
    order: Option<u64>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct BijectionArgs {
    #[arg(long)]
    tree: Option<String>,
    /// Dyck path over U and D
    #[arg(long)]
    path: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    /// Plane trees by size
    T,
    /// Trees by size and unmarked leaves
    S,
    /// Age at most r, by size and unmarked leaves
    FLeq,
    /// Age at least r, by size
    FGeq,
    /// By size and size of the r-th ancestor
    G,
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    #[arg(long, value_enum)]
    kind: SeriesKind,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(0..=64))]
    depth: u32,
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..=64))]
    order: u64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(4..=16))]
    max_size: u64,
    /// Largest number of reductions checked
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..=16))]
    depth: u32,
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(2..=40))]
    order: u64,
    #[arg(long, hide = true)]
    corrupt_catalan: bool,
}

/// Output of a subcommand plus its exit status.
struct Output {
    body: String,
    status: i32,
}

impl Output {
    fn ok(body: String) -> Self {
        Output {
            body,
            status: EXIT_OK,
        }
    }
}

fn json_body(value: Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("serializable");
    s.push('\n');
    s
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli) {
        Ok(output) => {
            let _ = out.write_all(output.body.as_bytes());
            output.status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::SamplingExhausted { .. } => EXIT_FAILURE,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn execute(cli: &Cli) -> Result<Output, Error> {
    let format = cli.format;
    match &cli.command {
        Command::Count { size } => count(*size, format),
        Command::Enumerate { size } => {
            let trees: Vec<PlaneTree> = enumerate_trees(*size as usize)?.collect();
            Ok(Output::ok(tree_list(*size, &trees, None, format)))
        }
        Command::Sample(args) => sample(args, format),
        Command::Age(args) => age(args, format),
        Command::Ancestor(args) => ancestor(args, format),
        Command::Constants { precision } => constants(*precision, format),
        Command::Bijection(args) => bijection(args, format),
        Command::Series(args) => series(args, format),
        Command::Verify(args) => {
            let report = verify(VerifyConfig {
                max_size: args.max_size as usize,
                max_r: args.depth,
                order: args.order as usize,
                corrupt_catalan: args.corrupt_catalan,
            })?;
            let body = match format {
                Format::Json => json_body(report.to_json()),
                Format::Csv => report.to_csv(),
                Format::Text => report.to_text(),
            };
            let status = if report.all_passed() {
                EXIT_OK
            } else {
                EXIT_FAILURE
            };
            Ok(Output { body, status })
        }
    }
}

fn count(size: u64, format: Format) -> Result<Output, Error> {
    let n = count_trees(size)?;
    Ok(Output::ok(match format {
        Format::Json => json_body(json!({ "size": size, "count": n.to_string() })),
        Format::Csv => format!("size,count\n{size},{n}\n"),
        Format::Text => format!("{n}\n"),
    }))
}

fn tree_list(size: u64, trees: &[PlaneTree], seed: Option<u64>, format: Format) -> String {
    match format {
        Format::Json => {
            let words: Vec<&str> = trees.iter().map(PlaneTree::as_str).collect();
            let mut value = json!({ "size": size, "count": trees.len(), "trees": words });
            if let Some(seed) = seed {
                value["seed"] = json!(seed);
            }
            json_body(value)
        }
        Format::Csv => {
            let mut s = String::from("index,tree,age\n");
            for (i, t) in trees.iter().enumerate() {
                let age = t.age().expect("generated trees are Catalan-Stanley");
                let _ = writeln!(s, "{i},{t},{age}");
            }
            s
        }
        Format::Text => trees.iter().map(|t| format!("{t}\n")).collect(),
    }
}

fn sample(args: &SampleArgs, format: Format) -> Result<Output, Error> {
    let config = SamplerConfig {
        size: args.size as usize,
        seed: args.seed,
        max_rejections: args.max_rejections,
    };
    let trees = Sampler::new(config)?
        .take(args.count as usize)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Output::ok(tree_list(
        args.size,
        &trees,
        Some(args.seed),
        format,
    )))
}

fn parse_input_tree(text: &str) -> Result<PlaneTree, Error> {
    let tree: PlaneTree = text.trim().parse()?;
    if !tree.is_catalan_stanley() {
        return Err(Error::NotCatalanStanley(tree.to_string()));
    }
    Ok(tree)
}

fn distribution_body(table: &DistributionTable, format: Format) -> String {
    match format {
        Format::Json => json_body(table.to_json()),
        Format::Csv => table.to_csv(),
        Format::Text => table
            .iter()
            .map(|(x, p)| format!("{x}\t{p}\t{:.12}\n", to_f64(p)))
            .collect(),
    }
}

fn estimate_json(e: &AsymptoticEstimate) -> Value {
    json!({ "value": e.value, "error": e.order.to_string() })
}

fn age(args: &AgeArgs, format: Format) -> Result<Output, Error> {
    if let Some(text) = &args.input.tree {
        let tree = parse_input_tree(text)?;
        let a = tree.age()?;
        return Ok(Output::ok(match format {
            Format::Json => {
                json_body(json!({ "tree": tree.as_str(), "size": tree.size(), "age": a }))
            }
            Format::Csv => format!("tree,size,age\n{tree},{},{a}\n", tree.size()),
            Format::Text => format!("{a}\n"),
        }));
    }
    let n = args.input.size.expect("clap enforces one input");
    if args.exact {
        return Ok(Output::ok(distribution_body(&age_distribution(n)?, format)));
    }
    let report = age_moments(n)?;
    let asym = if n >= 2 {
        Some((expected_age_asym(n)?, age_variance_asym(n)?))
    } else {
        None
    };
    Ok(Output::ok(match format {
        Format::Json => {
            let mut value = report.to_json();
            if let Some((e, v)) = &asym {
                value["expectation_asymptotic"] = estimate_json(e);
                value["variance_asymptotic"] = estimate_json(v);
            }
            json_body(value)
        }
        Format::Csv => format!(
            "n,expectation,variance\n{n},{},{}\n",
            report.expectation, report.variance
        ),
        Format::Text => format!(
            "E = {} ~ {:.12}\nV = {} ~ {:.12}\n",
            report.expectation,
            to_f64(&report.expectation),
            report.variance,
            to_f64(&report.variance)
        ),
    }))
}

fn ancestor(args: &AncestorArgs, format: Format) -> Result<Output, Error> {
    let r = args.depth;
    if let Some(text) = &args.input.tree {
        let tree = parse_input_tree(text)?;
        let anc = tree.ancestor(r)?;
        return Ok(Output::ok(match format {
            Format::Json => json_body(json!({
                "tree": tree.as_str(),
                "depth": r,
                "ancestor": anc.as_str(),
                "ancestor_size": anc.size(),
            })),
            Format::Csv => format!(
                "tree,depth,ancestor,ancestor_size\n{tree},{r},{anc},{}\n",
                anc.size()
            ),
            Format::Text => format!("{anc}\n"),
        }));
    }
    let n = args.input.size.expect("clap enforces one input");
    if args.exact {
        let order = args.order.unwrap_or(n) as usize;
        if n > 64 {
            return Err(Error::domain(
                "exact ancestor distributions are limited to size 64",
            ));
        }
        return Ok(Output::ok(distribution_body(
            &ancestor_distribution(n, r, order)?,
            format,
        )));
    }
    let mean = expected_ancestor_size(n, r as u64)?;
    let asym = if n >= 2 {
        Some((
            expected_ancestor_asym(n, r as u64)?,
            ancestor_variance_asym(n, r as u64)?,
        ))
    } else {
        None
    };
    Ok(Output::ok(match format {
        Format::Json => {
            let mut value = json!({
                "n": n,
                "r": r,
                "expectation": mean.to_string(),
                "expectation_approx": to_f64(&mean),
            });
            if let Some((e, v)) = &asym {
                value["expectation_asymptotic"] = estimate_json(e);
                value["variance_asymptotic"] = estimate_json(v);
            }
            json_body(value)
        }
        Format::Csv => format!("n,r,expectation\n{n},{r},{mean}\n"),
        Format::Text => format!("E = {mean} ~ {:.12}\n", to_f64(&mean)),
    }))
}

fn constants(precision: u32, format: Format) -> Result<Output, Error> {
    let values: Vec<String> = (0..4)
        .map(|i| ConstantSpec::new(i, precision).map(constant_c))
        .collect::<Result<_, _>>()?;
    Ok(Output::ok(match format {
        Format::Json => json_body(json!({
            "c0": values[0],
            "c1": values[1],
            "c2": values[2],
            "c3": values[3],
        })),
        Format::Csv => {
            let mut s = String::from("name,value\n");
            for (i, v) in values.iter().enumerate() {
                let _ = writeln!(s, "c{i},{v}");
            }
            s
        }
        Format::Text => values
            .iter()
            .enumerate()
            .map(|(i, v)| format!("c{i} = {v}\n"))
            .collect(),
    }))
}

fn bijection(args: &BijectionArgs, format: Format) -> Result<Output, Error> {
    let (tree, path) = match (&args.tree, &args.path) {
        (Some(text), _) => {
            let tree = parse_input_tree(text)?;
            let path = tree.to_dyck();
            (tree, path)
        }
        (None, Some(text)) => {
            let path: DyckPath = text.trim().parse()?;
            if !path.has_odd_returns() {
                return Err(Error::domain(format!("path {path} has an even return")));
            }
            (path.to_tree(), path)
        }
        (None, None) => unreachable!("clap enforces one input"),
    };
    let returns = path.returns();
    Ok(Output::ok(match format {
        Format::Json => json_body(json!({
            "tree": tree.as_str(),
            "path": path.to_string(),
            "returns": returns,
        })),
        Format::Csv => {
            let joined: Vec<String> = returns.iter().map(usize::to_string).collect();
            format!(
                "tree,path,returns\n{tree},{path},{}\n",
                csv_field(&joined.join(","))
            )
        }
        Format::Text => match args.tree {
            Some(_) => format!("{path}\n"),
            None => format!("{tree}\n"),
        },
    }))
}

fn series_rows(s: &Series) -> Vec<Value> {
    s.coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| json!({ "n": n, "coeff": c.to_string() }))
        .collect()
}

fn bivariate_rows(b: &Bivariate) -> Vec<Value> {
    let order = b.order();
    let mut rows = Vec::new();
    for n in 0..=order {
        for m in 0..=order {
            let c = b.coeff(n, m);
            rows.push(json!({ "n": n, "m": m, "coeff": c.to_string() }));
        }
    }
    rows
}

fn series(args: &SeriesArgs, format: Format) -> Result<Output, Error> {
    let order = args.order as usize;
    let r = args.depth;
    enum Computed {
        Uni(Series),
        Bi(Bivariate),
    }
    let computed = match args.kind {
        SeriesKind::T => Computed::Uni(series_t(order)),
        SeriesKind::S => Computed::Bi(series_s(order)),
        SeriesKind::FLeq => Computed::Bi(series_f_leq(r, order)),
        SeriesKind::FGeq => {
            if r == 0 {
                return Err(Error::domain("f-geq needs --depth >= 1"));
            }
            Computed::Uni(series_f_geq(r, order))
        }
        SeriesKind::G => Computed::Bi(series_g(r, order)),
    };
    Ok(Output::ok(match (format, &computed) {
        (Format::Json, Computed::Uni(s)) => {
            json_body(json!({ "order": order, "coefficients": series_rows(s) }))
        }
        (Format::Json, Computed::Bi(b)) => {
            json_body(json!({ "order": order, "coefficients": bivariate_rows(b) }))
        }
        (_, Computed::Uni(s)) => s.dump(),
        (_, Computed::Bi(b)) => b.dump(),
    }))
}
