//! Command-line front end. `execute` returns the rendered output so tests can
//! drive commands without spawning a process.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::json;

use crate::codes::{
    check_hermitian_self_dual, construction_a_gram, length_weight_enumerator, theta_from_lwe, CodeOverR,
    DEFAULT_CODE_BUDGET,
};
use crate::error::{Error, Result};
use crate::lattice::{catalog, theta_coefficients, GramMatrix, Parity, CATALOG_NAMES, DEFAULT_BUDGET};
use crate::modform::{build_basis, known_from_counts, parse_known, solve_coefficients, BasisKind, ThetaDecomposition};
use crate::qseries::QSeries;
use crate::rational::{format_rational, int, parse_rational};
use crate::secrecy::{secrecy_curve, weak_secrecy_gain, ThetaSource, DEFAULT_EPS};
use crate::tables::{load_table, reproduce_table, TableId, TableRow};
use crate::theta::{expand, FormKind, NamedForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

#[derive(Debug, Parser)]
#[command(name = "modlat", version, about = "Theta series, modular form decompositions and secrecy gains of lattices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value = "pretty")]
    pub format: Format,

    /// Truncation order of printed series (rational, e.g. 8 or 7/2).
    #[arg(long, global = true)]
    pub order: Option<String>,

    /// Precision target for numeric evaluation.
    #[arg(long, global = true, default_value_t = DEFAULT_EPS)]
    pub eps: f64,

    /// Node budget for lattice enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// q-expansion of a named form, a decomposition polynomial, or a lattice's theta series.
    Expand { target: String },
    /// Solve for the theta series as a polynomial in the level's generator forms.
    Decompose {
        lattice: Option<String>,
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long)]
        kind: Option<String>,
        /// Leading coefficients `norm:count ...` instead of a lattice.
        #[arg(long)]
        known: Option<String>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Codes over F3 + vF3: a fixture name or a generator matrix file.
    Code { generator: String, action: CodeAction },
    /// Weak secrecy gain at the symmetry point.
    Gain {
        lattice: String,
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        kind: Option<String>,
    },
    /// Secrecy function sampled on a uniform dB grid.
    Curve {
        lattice: String,
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        kind: Option<String>,
        /// `lo:hi` in dB.
        #[arg(long, default_value = "-6:3", allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Recompute a table and diff it against the printed values.
    Tables {
        #[arg(long)]
        which: u32,
    },
    /// List catalogued lattices or print one Gram matrix.
    Catalog { name: Option<String> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CodeAction {
    Lwe,
    Gram,
    Theta,
    Selfdual,
}

/// Rendered command output; `ok` is false when a reported row failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub ok: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, ok: true }
    }
}

/// A lattice as the commands see it.
pub enum LatticeSpec {
    Decomposition(ThetaDecomposition),
    Cubic(u32),
    Gram { gram: GramMatrix, ell: u32, n: u32, parity: Option<Parity> },
}

impl LatticeSpec {
    pub fn ell(&self) -> u32 {
        match self {
            LatticeSpec::Decomposition(d) => d.basis.ell,
            LatticeSpec::Cubic(_) => 1,
            LatticeSpec::Gram { ell, .. } => *ell,
        }
    }

    pub fn dim(&self) -> u32 {
        match self {
            LatticeSpec::Decomposition(d) => d.basis.n,
            LatticeSpec::Cubic(n) => *n,
            LatticeSpec::Gram { n, .. } => *n,
        }
    }

    pub fn source(&self) -> ThetaSource<'_> {
        match self {
            LatticeSpec::Decomposition(d) => ThetaSource::Decomposition(d),
            LatticeSpec::Cubic(n) => ThetaSource::Cubic(*n),
            LatticeSpec::Gram { gram, .. } => ThetaSource::Gram(gram),
        }
    }
}

fn table_row(name: &str) -> Result<Option<TableRow>> {
    for id in [TableId::Even, TableId::Odd] {
        if let Some(r) = load_table(id)?.into_iter().find(|r| r.name == name) {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

/// Resolves a lattice argument: `Zn`/`Z<k>`, a catalog name, a table row name,
/// a Gram matrix file, or a decomposition polynomial.
pub fn resolve_lattice(name: &str, ell: Option<u32>, n: Option<u32>) -> Result<LatticeSpec> {
    if name == "Zn" {
        let n = n.ok_or_else(|| Error::InvalidArgument("Zn needs --n".into()))?;
        return Ok(LatticeSpec::Cubic(n));
    }
    if let Some(k) = name.strip_prefix('Z').and_then(|k| k.parse::<u32>().ok()) {
        return Ok(LatticeSpec::Cubic(k));
    }
    if let Ok(e) = catalog(name) {
        return Ok(LatticeSpec::Gram {
            n: e.dim() as u32,
            ell: ell.unwrap_or(e.ell),
            gram: e.gram,
            parity: Some(e.parity),
        });
    }
    if let Some(row) = table_row(name)? {
        return Ok(LatticeSpec::Decomposition(row.decomposition()?));
    }
    if Path::new(name).is_file() {
        let gram = GramMatrix::parse(&std::fs::read_to_string(name)?)?;
        let ell = ell.ok_or_else(|| Error::InvalidArgument("a Gram matrix file needs --ell".into()))?;
        let parity = gram.is_even().ok().map(|e| if e { Parity::Even } else { Parity::Odd });
        return Ok(LatticeSpec::Gram { n: gram.dim() as u32, ell, gram, parity });
    }
    match ThetaDecomposition::parse(name) {
        Ok(d) => Ok(LatticeSpec::Decomposition(d)),
        Err(_) => Err(Error::UnknownLattice(name.to_string())),
    }
}

fn default_kind(parity: Option<Parity>) -> BasisKind {
    match parity {
        Some(Parity::Even) => BasisKind::EvenLemma1,
        _ => BasisKind::GeneralLemma2,
    }
}

/// Solves a Gram lattice's decomposition from enumerated coefficients; other
/// specs pass through unchanged.
pub fn decompose_spec(spec: LatticeSpec, kind: Option<BasisKind>, budget: u64) -> Result<LatticeSpec> {
    match spec {
        LatticeSpec::Gram { gram, ell, n, parity } => {
            let kind = kind.unwrap_or_else(|| default_kind(parity));
            let basis = build_basis(ell, n, kind)?;
            let depth = basis.solving_exponents().last().copied().unwrap_or(0) + 2;
            let counts = theta_coefficients(&gram, &int(depth), budget)?;
            Ok(LatticeSpec::Decomposition(solve_coefficients(&basis, &known_from_counts(&counts))?))
        }
        other => Ok(other),
    }
}

fn parse_kind(kind: &Option<String>) -> Result<Option<BasisKind>> {
    kind.as_deref().map(str::parse).transpose()
}

fn series_output(s: &QSeries, format: Format) -> Result<String> {
    Ok(match format {
        Format::Pretty => format!("{s}\n"),
        Format::Json => s.to_json()? + "\n",
        Format::Csv => {
            let mut out = String::from("exponent,coefficient\n");
            for (e, c) in s.terms() {
                writeln!(out, "{},{}", format_rational(&e), format_rational(c)).expect("string write");
            }
            out
        }
    })
}

fn parse_order(order: &Option<String>, default: i64) -> Result<BigRational> {
    let o = match order {
        Some(s) => parse_rational(s)?,
        None => int(default),
    };
    if o <= int(0) {
        return Err(Error::InvalidArgument("--order must be positive".into()));
    }
    Ok(o)
}

pub fn execute(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Expand { target } => cmd_expand(cli, target),
        Command::Decompose { lattice, ell, kind, known, n } => cmd_decompose(cli, lattice.as_deref(), *ell, kind, known, *n),
        Command::Code { generator, action } => cmd_code(cli, generator, *action),
        Command::Gain { lattice, ell, n, kind } => cmd_gain(cli, lattice, *ell, *n, kind),
        Command::Curve { lattice, ell, n, kind, range, samples } => cmd_curve(cli, lattice, *ell, *n, kind, range, *samples),
        Command::Tables { which } => cmd_tables(cli, *which),
        Command::Catalog { name } => cmd_catalog(cli, name.as_deref()),
    }
}

fn cmd_expand(cli: &Cli, target: &str) -> Result<Output> {
    let order = parse_order(&cli.order, 10)?;
    let series = if let Ok(kind) = target.parse::<FormKind>() {
        expand(&NamedForm::unscaled(kind), &order)
    } else {
        match resolve_lattice(target, None, None)? {
            LatticeSpec::Decomposition(d) => {
                let top = order.ceil().to_integer();
                let top: i64 = top.try_into().map_err(|_| Error::InvalidArgument("order too large".into()))?;
                crate::modform::expand_decomposition(&d, top).truncate(&order)
            }
            LatticeSpec::Cubic(n) => expand(&NamedForm::unscaled(FormKind::Theta3), &order).pow(n),
            LatticeSpec::Gram { gram, .. } => theta_coefficients(&gram, &order, cli.budget)?.to_qseries().truncate(&order),
        }
    };
    Ok(Output::ok(series_output(&series, cli.format)?))
}

fn decomposition_output(d: &ThetaDecomposition, format: Format) -> Result<String> {
    Ok(match format {
        Format::Pretty => format!("{d}\n"),
        Format::Json => d.to_json()? + "\n",
        Format::Csv => {
            let [(g0, _), (g1, _)] = d.basis.generators();
            let mut out = format!("{},{},coefficient\n", g0.short_name(), g1.short_name());
            for (&(l, m), c) in d.basis.terms.iter().zip(&d.coeffs) {
                writeln!(out, "{l},{m},{}", format_rational(c)).expect("string write");
            }
            out
        }
    })
}

fn cmd_decompose(
    cli: &Cli,
    lattice: Option<&str>,
    ell: Option<u32>,
    kind: &Option<String>,
    known: &Option<String>,
    n: Option<u32>,
) -> Result<Output> {
    let kind = parse_kind(kind)?;
    let d = if let Some(text) = known {
        let ell = ell.ok_or_else(|| Error::InvalidArgument("--known needs --ell".into()))?;
        let n = n.ok_or_else(|| Error::InvalidArgument("--known needs --n".into()))?;
        let basis = build_basis(ell, n, kind.unwrap_or(BasisKind::EvenLemma1))?;
        solve_coefficients(&basis, &parse_known(text)?)?
    } else {
        let name = lattice.ok_or_else(|| Error::InvalidArgument("give a lattice or --known".into()))?;
        match decompose_spec(resolve_lattice(name, ell, n)?, kind, cli.budget)? {
            LatticeSpec::Decomposition(d) => d,
            _ => return Err(Error::InvalidArgument(format!("`{name}` has no decomposition"))),
        }
    };
    Ok(Output::ok(decomposition_output(&d, cli.format)?))
}

fn load_code(generator: &str) -> Result<CodeOverR> {
    if Path::new(generator).is_file() {
        CodeOverR::parse(&std::fs::read_to_string(generator)?)
    } else {
        CodeOverR::fixture(generator)
    }
}

fn cmd_code(cli: &Cli, generator: &str, action: CodeAction) -> Result<Output> {
    let code = load_code(generator)?;
    let text = match action {
        CodeAction::Lwe => {
            let lwe = length_weight_enumerator(&code, DEFAULT_CODE_BUDGET)?;
            match cli.format {
                Format::Json => lwe.to_json()? + "\n",
                Format::Pretty => format!("{lwe}\n"),
                Format::Csv => {
                    let mut out = String::from("n0,n1,n2,n3,count\n");
                    for (c, m) in lwe.terms() {
                        writeln!(out, "{},{},{},{},{m}", c[0], c[1], c[2], c[3]).expect("string write");
                    }
                    out
                }
            }
        }
        CodeAction::Gram => {
            let g = construction_a_gram(&code)?;
            match cli.format {
                Format::Json => g.to_json()? + "\n",
                Format::Pretty => g.to_text(),
                Format::Csv => g.to_text().replace(' ', ","),
            }
        }
        CodeAction::Theta => {
            let order = parse_order(&cli.order, 5)?;
            let lwe = length_weight_enumerator(&code, DEFAULT_CODE_BUDGET)?;
            series_output(&theta_from_lwe(&lwe, &order)?, cli.format)?
        }
        CodeAction::Selfdual => {
            let r = check_hermitian_self_dual(&code, DEFAULT_CODE_BUDGET)?;
            let witness = r.witness.as_ref().map(ToString::to_string);
            match cli.format {
                Format::Json => {
                    serde_json::to_string(&json!({"self_dual": r.self_dual, "size": r.size as u64, "witness": witness}))? + "\n"
                }
                Format::Csv => format!("self_dual,size\n{},{}\n", r.self_dual, r.size),
                Format::Pretty => match witness {
                    Some(w) => format!("false ({w})\n"),
                    None => "true\n".to_string(),
                },
            }
        }
    };
    Ok(Output::ok(text))
}

fn gain_spec(cli: &Cli, lattice: &str, ell: Option<u32>, n: Option<u32>, kind: &Option<String>) -> Result<LatticeSpec> {
    // exact decomposition when the level supports one, else the enumeration path
    match resolve_lattice(lattice, ell, n)? {
        LatticeSpec::Gram { gram, ell, n, parity } => {
            let fallback = LatticeSpec::Gram { gram: gram.clone(), ell, n, parity };
            let spec = LatticeSpec::Gram { gram, ell, n, parity };
            Ok(decompose_spec(spec, parse_kind(kind)?, cli.budget).unwrap_or(fallback))
        }
        other => Ok(other),
    }
}

fn cmd_gain(cli: &Cli, lattice: &str, ell: Option<u32>, n: Option<u32>, kind: &Option<String>) -> Result<Output> {
    let spec = gain_spec(cli, lattice, ell, n, kind)?;
    let ell = ell.unwrap_or(spec.ell());
    let n = spec.dim();
    let e = weak_secrecy_gain(spec.source(), ell, n, cli.eps)?;
    let text = match cli.format {
        Format::Pretty => format!("{:.10}\n", e.xi),
        Format::Csv => format!("lattice,ell,n,gain\n{lattice},{ell},{n},{:.10}\n", e.xi),
        Format::Json => {
            serde_json::to_string(&json!({
                "lattice": lattice,
                "ell": ell,
                "n": n,
                "gain": e.xi,
                "error_bound": e.xi_err,
            }))? + "\n"
        }
    };
    Ok(Output::ok(text))
}

fn parse_range(range: &str) -> Result<(f64, f64)> {
    let bad = || Error::Parse(format!("range must be lo:hi, got `{range}`"));
    let (lo, hi) = range.split_once(':').ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

fn cmd_curve(
    cli: &Cli,
    lattice: &str,
    ell: Option<u32>,
    n: Option<u32>,
    kind: &Option<String>,
    range: &str,
    samples: usize,
) -> Result<Output> {
    let spec = gain_spec(cli, lattice, ell, n, kind)?;
    let ell = ell.unwrap_or(spec.ell());
    let n = spec.dim();
    let curve = secrecy_curve(spec.source(), ell, n, parse_range(range)?, samples, cli.eps)?;
    let text = match cli.format {
        Format::Json => {
            let rows: Vec<_> = curve.iter().map(|&(db, xi)| json!({"y_db": db, "xi": xi})).collect();
            serde_json::to_string(&rows)? + "\n"
        }
        Format::Csv | Format::Pretty => {
            let mut out = String::from("y_db,xi\n");
            for (db, xi) in curve {
                writeln!(out, "{db:.6},{xi:.12}").expect("string write");
            }
            out
        }
    };
    Ok(Output::ok(text))
}

fn cmd_tables(cli: &Cli, which: u32) -> Result<Output> {
    let id = TableId::from_number(which)?;
    let rows = reproduce_table(id, cli.eps, 8)?;
    let ok = rows.iter().all(|r| r.passed);
    let text = match cli.format {
        Format::Json => serde_json::to_string(&rows)? + "\n",
        Format::Csv => {
            let mut out = String::from("table,name,dim,ell,printed,computed,diff,status\n");
            for r in &rows {
                let status = match (r.computed, r.passed) {
                    (None, _) => "DATA",
                    (_, true) => "PASS",
                    (_, false) => "FAIL",
                };
                let computed = r.computed.map_or(String::new(), |c| format!("{c:.10}"));
                let diff = r.diff.map_or(String::new(), |d| format!("{d:.3e}"));
                let printed = if r.lower_bound { format!(">={}", r.printed) } else { r.printed.clone() };
                writeln!(out, "{},{},{},{},{printed},{computed},{diff},{status}", r.table, r.name, r.dim, r.ell)
                    .expect("string write");
            }
            out
        }
        Format::Pretty => {
            let mut out = String::new();
            for r in &rows {
                writeln!(out, "{r}").expect("string write");
            }
            let failed = rows.iter().filter(|r| !r.passed).count();
            writeln!(out, "table {which}: {} rows, {failed} failed", rows.len()).expect("string write");
            out
        }
    };
    Ok(Output { text, ok })
}

fn cmd_catalog(cli: &Cli, name: Option<&str>) -> Result<Output> {
    if let Some(name) = name {
        let e = catalog(name)?;
        let text = match cli.format {
            Format::Json => e.gram.to_json()? + "\n",
            Format::Pretty => e.gram.to_text(),
            Format::Csv => e.gram.to_text().replace(' ', ","),
        };
        return Ok(Output::ok(text));
    }
    let mut rows = Vec::new();
    for &n in &CATALOG_NAMES {
        let e = catalog(if n == "Zn" { "Z1" } else { n })?;
        let parity = match e.parity {
            Parity::Even => "even",
            Parity::Odd => "odd",
        };
        let source = match e.source {
            crate::lattice::Source::Paper => "printed",
            crate::lattice::Source::Derived => "derived",
        };
        let dim = if n == "Zn" { "n".to_string() } else { e.dim().to_string() };
        let det = if n == "Zn" { "1".to_string() } else { format_rational(&e.gram.determinant()) };
        rows.push((n, dim, e.ell, parity, source, det));
    }
    let text = match cli.format {
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|(n, d, l, p, s, det)| json!({"name": n, "dim": d, "ell": l, "parity": p, "source": s, "det": det}))
                .collect();
            serde_json::to_string(&v)? + "\n"
        }
        Format::Csv => {
            let mut out = String::from("name,dim,ell,parity,source,det\n");
            for (n, d, l, p, s, det) in &rows {
                writeln!(out, "{n},{d},{l},{p},{s},{det}").expect("string write");
            }
            out
        }
        Format::Pretty => {
            let mut out = String::new();
            for (n, d, l, p, s, det) in &rows {
                writeln!(out, "{n:<12} dim {d:>2}  ell {l}  {p:<4}  det {det:<4} {s}").expect("string write");
            }
            out
        }
    };
    Ok(Output::ok(text))
}

/// Parses `args`, runs the command, writes the output, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.text),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 2;
            }
            if out.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
