use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use netcx::ingest::Dialect;
use netcx::report::{export_dot, export_graphml, read_table_csv, render_comparison, render_table, summarize_types};
use netcx::report::{TableFormat, TableRow};
use netcx::reproduce::{render_reproduction, reproduce};
use netcx::taxonomy::Taxonomy;
use netcx::topologies::{generate, write_native, TopologyId, TopologyParams};
use netcx::{analyze, collect_inputs, Error, IR_SUFFIX};

#[derive(Parser)]
#[command(name = "netcx", version, about = "Complexity metrics for network configurations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse configurations, build the graph and report metrics.
    Analyze(AnalyzeArgs),
    /// Emit a reference topology as native files and IR.
    Generate(GenerateArgs),
    /// Merge stored CSV rows into one table.
    Compare(CompareArgs),
    /// Measure the six default topologies against their reference values.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DialectArg {
    Azure,
    K8s,
    Cli,
    Aci,
}

impl From<DialectArg> for Dialect {
    fn from(d: DialectArg) -> Self {
        match d {
            DialectArg::Azure => Dialect::Azure,
            DialectArg::K8s => Dialect::K8s,
            DialectArg::Cli => Dialect::Cli,
            DialectArg::Aci => Dialect::Aci,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Md,
    Dot,
    Graphml,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Md => "md",
            Format::Dot => "dot",
            Format::Graphml => "graphml",
        }
    }

    fn table(self) -> Option<TableFormat> {
        match self {
            Format::Csv => Some(TableFormat::Csv),
            Format::Md => Some(TableFormat::Markdown),
            _ => None,
        }
    }
}

#[derive(Args)]
struct TaxonomyArg {
    /// Taxonomy file replacing the built-in one.
    #[arg(long, value_name = "PATH")]
    taxonomy: Option<PathBuf>,
}

impl TaxonomyArg {
    fn load(&self) -> Result<Taxonomy, Error> {
        match &self.taxonomy {
            None => Ok(Taxonomy::builtin()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                Ok(Taxonomy::parse(&text)?)
            }
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; with several formats, one `<PATH>.<ext>` file per format.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format, repeatable.
    #[arg(long = "format", value_enum)]
    formats: Vec<Format>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long, value_enum)]
    dialect: DialectArg,
    /// Input files or directories.
    #[arg(long, value_name = "PATH", num_args = 1.., required = true)]
    input: Vec<PathBuf>,
    #[command(flatten)]
    taxonomy: TaxonomyArg,
    /// Row label; defaults to the dialect name.
    #[arg(long)]
    name: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    topology: TopologyId,
    /// Directory for native files and the IR; without it the IR goes to stdout.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = TopologyParams::default().app_units)]
    app_units: u32,
    #[arg(long, default_value_t = TopologyParams::default().tiers)]
    tiers: u32,
    #[arg(long, default_value_t = TopologyParams::default().shared_groups)]
    shared_groups: u32,
    #[arg(long, default_value_t = TopologyParams::default().endpoints_per_group)]
    endpoints_per_group: u32,
    /// Omit access lists from switch configurations.
    #[arg(long)]
    no_acls: bool,
}

#[derive(Args)]
struct CompareArgs {
    /// CSV row files written by `analyze --format csv`.
    #[arg(long, value_name = "PATH", num_args = 1.., required = true)]
    input: Vec<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ReproduceArgs {
    #[command(flatten)]
    taxonomy: TaxonomyArg,
    #[command(flatten)]
    output: OutputArgs,
}

/// Writes to stdout; a closed pipe is not an error.
fn stdout(text: &str) -> Result<(), Error> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::io("<stdout>", e)),
        _ => Ok(()),
    }
}

fn emit(out: Option<&Path>, outputs: &[(Format, String)]) -> Result<(), Error> {
    match out {
        None => {
            for (_, text) in outputs {
                stdout(text)?;
            }
        }
        Some(path) if outputs.len() == 1 => std::fs::write(path, &outputs[0].1).map_err(|e| Error::io(path, e))?,
        Some(path) => {
            for (f, text) in outputs {
                let mut p = path.as_os_str().to_owned();
                p.push(".");
                p.push(f.ext());
                let p = PathBuf::from(p);
                std::fs::write(&p, text).map_err(|e| Error::io(&p, e))?;
            }
        }
    }
    Ok(())
}

fn formats_or(formats: &[Format], default: Format) -> Vec<Format> {
    let mut out = Vec::new();
    for f in formats.iter().copied().chain(formats.is_empty().then_some(default)) {
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

fn tables_only(formats: &[Format]) -> Result<Vec<(Format, TableFormat)>, String> {
    formats
        .iter()
        .map(|f| f.table().map(|t| (*f, t)).ok_or_else(|| format!("format `{}` is not available here", f.ext())))
        .collect()
}

fn run(cli: Cli) -> Result<(), Box<dyn std::error::Error>> {
    match cli.command {
        Command::Analyze(a) => {
            let dialect = Dialect::from(a.dialect);
            let taxonomy = a.taxonomy.load()?;
            let files = collect_inputs(dialect, &a.input)?;
            let name = a.name.unwrap_or_else(|| dialect.to_string());
            let result = analyze(dialect, &files, &taxonomy, &name)?;
            for w in &result.resources.warnings {
                eprintln!("warning: {w}");
            }
            let mut outputs = Vec::new();
            for f in formats_or(&a.output.formats, Format::Md) {
                let text = match f.table() {
                    Some(t) => render_comparison(std::slice::from_ref(&result.metrics), t)?,
                    None if f == Format::Dot => export_dot(&summarize_types(&result.graph)),
                    None => export_graphml(&result.graph),
                };
                outputs.push((f, text));
            }
            emit(a.output.out.as_deref(), &outputs)?;
        }
        Command::Generate(g) => {
            let params = TopologyParams {
                app_units: g.app_units,
                tiers: g.tiers,
                shared_groups: g.shared_groups,
                endpoints_per_group: g.endpoints_per_group,
                acls: !g.no_acls,
            };
            let rs = generate(g.topology, &params)?;
            match g.out {
                None => stdout(&(rs.to_json() + "\n"))?,
                Some(dir) => {
                    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
                    let mut files = write_native(&rs, g.topology.as_str())?;
                    files.push((format!("{}{IR_SUFFIX}", g.topology), rs.to_json() + "\n"));
                    for (name, text) in files {
                        let p = dir.join(name);
                        std::fs::write(&p, text).map_err(|e| Error::io(&p, e))?;
                        eprintln!("wrote {}", p.display());
                    }
                }
            }
        }
        Command::Compare(c) => {
            let mut rows: Vec<TableRow> = Vec::new();
            for p in &c.input {
                let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                let parsed = read_table_csv(&text).map_err(|e| format!("{}: {e}", p.display()))?;
                rows.extend(parsed);
            }
            let mut outputs = Vec::new();
            for (f, t) in tables_only(&formats_or(&c.output.formats, Format::Md))? {
                outputs.push((f, render_table(&rows, t)?));
            }
            emit(c.output.out.as_deref(), &outputs)?;
        }
        Command::Reproduce(r) => {
            let taxonomy = r.taxonomy.load()?;
            let result = reproduce(&taxonomy)?;
            let mut outputs = Vec::new();
            for (f, t) in tables_only(&formats_or(&r.output.formats, Format::Md))? {
                let text = match t {
                    TableFormat::Markdown => render_reproduction(&result),
                    TableFormat::Csv => render_comparison(&result.rows, t)?,
                };
                outputs.push((f, text));
            }
            emit(r.output.out.as_deref(), &outputs)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
