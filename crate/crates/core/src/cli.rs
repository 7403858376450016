//! Command-line front end. Exit codes: 0 success, 1 I/O or malformed JSON,
//! 2 validation and other semantic errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::checks::{run_all, DEFAULT_SEED};
use crate::document::{
    analyze, datum_doc, genuine_text, load_document, obstruction_section, obstruction_text, report_json,
    report_text, resolve, DocError,
};
use crate::local_field::{hilbert2, tame_symbol, LocalField};
use crate::root_datum::{catalog_spec, CatalogSpec};

#[derive(Parser, Debug)]
#[command(name = "metacover", version, about = "Sharp root data, obstruction groups and local symbols for covering groups")]
pub struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized property suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Coordinate bound for enumerating solution classes (default 2N).
    #[arg(long, global = true)]
    pub window: Option<i64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a problem document and run the full pipeline.
    Analyze { path: PathBuf },
    /// Solve γ(β) = −χ for the Kottwitz class β.
    Obstruction {
        path: PathBuf,
        /// Coordinates of χ in C, comma separated; overrides the document.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        chi: Option<Vec<i64>>,
    },
    /// Quadratic Hilbert symbol {a, b}.
    Hilbert {
        field: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Degree-m tame symbol.
    Tame {
        field: String,
        m: u64,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Genuine-character obstruction table.
    Genuine { path: PathBuf },
    /// Print a catalog root datum.
    Catalog { name: String, n: Option<usize> },
    /// Run the randomized property suites.
    Check {
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

fn fail(err: &mut dyn Write, e: &DocError) -> i32 {
    let _ = writeln!(err, "error: {e}");
    e.exit_code()
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => fail(err, &e),
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), DocError> {
    let io = |e: std::io::Error| DocError::Io(e.to_string());
    match &cli.command {
        Command::Analyze { path } => {
            let r = resolve(&load_document(path)?)?;
            let a = analyze(&r, cli.window)?;
            let text = if cli.json { report_json(&r, &a) } else { report_text(&r, &a) };
            out.write_all(text.as_bytes()).map_err(io)
        }
        Command::Obstruction { path, chi } => {
            let mut doc = load_document(path)?;
            if let Some(chi) = chi {
                doc.obstruction = Some(crate::document::ObstructionDoc { chi: chi.clone() });
            }
            let r = resolve(&doc)?;
            let a = analyze(&r, cli.window)?;
            let section = match &a.obstruction {
                Some(s) => s.clone(),
                None => obstruction_section(&a.gamma, &vec![0; a.gamma.c.group.ngens()], 0)?,
            };
            if cli.json {
                out.write_all(report_json(&r, &a).as_bytes()).map_err(io)
            } else {
                let mut text = format!("C ≅ {}\nK ≅ {}\n", a.gamma.c.group, a.gamma.k.group);
                text.push_str(&obstruction_text(&section));
                out.write_all(text.as_bytes()).map_err(io)
            }
        }
        Command::Hilbert { field, a, b } => {
            let f = LocalField::parse(field).map_err(|e| DocError::Invalid(e.to_string()))?;
            let inv = |e: crate::local_field::LocalFieldError| DocError::Invalid(e.to_string());
            let (x, y) = (f.parse_element(a).map_err(inv)?, f.parse_element(b).map_err(inv)?);
            let s = hilbert2(&f, &x, &y).map_err(inv)?;
            if cli.json {
                let v = json!({"field": f.descriptor(), "a": a, "b": b, "symbol": s.to_i8()});
                writeln!(out, "{v}").map_err(io)
            } else {
                writeln!(out, "{s}").map_err(io)
            }
        }
        Command::Tame { field, m, a, b } => {
            let f = LocalField::parse(field).map_err(|e| DocError::Invalid(e.to_string()))?;
            let inv = |e: crate::local_field::LocalFieldError| DocError::Invalid(e.to_string());
            let (x, y) = (f.parse_element(a).map_err(inv)?, f.parse_element(b).map_err(inv)?);
            let v = tame_symbol(&f, *m, &x, &y).map_err(inv)?;
            let g = f.primitive_root();
            if cli.json {
                let j = json!({"field": f.descriptor(), "m": m, "a": a, "b": b, "value": v, "primitive_root": g});
                writeln!(out, "{j}").map_err(io)
            } else {
                writeln!(out, "{v} (mod {m}; primitive root {g})").map_err(io)
            }
        }
        Command::Genuine { path } => {
            let r = resolve(&load_document(path)?)?;
            if r.document.genuine_character.is_none() {
                return Err(DocError::Invalid("document has no genuine_character block".into()));
            }
            let a = analyze(&r, cli.window)?;
            let gs = a.genuine.as_ref().expect("block present");
            if cli.json {
                out.write_all(report_json(&r, &a).as_bytes()).map_err(io)
            } else {
                out.write_all(genuine_text(gs).as_bytes()).map_err(io)
            }
        }
        Command::Catalog { name, n } => {
            let spec = CatalogSpec {
                name: name.clone(),
                n: *n,
                action: vec![],
                factors: vec![],
            };
            let (d, act) = catalog_spec(&spec).map_err(|e| DocError::Invalid(e.to_string()))?;
            let doc = datum_doc(&d, act.generators());
            if cli.json {
                let s = serde_json::to_string_pretty(&doc).expect("serializable");
                writeln!(out, "{s}").map_err(io)
            } else {
                writeln!(out, "{} (rank {}, semisimple rank {})", d.label(), d.rank(), d.semisimple_rank())
                    .and_then(|_| writeln!(out, "simple coroots: {:?}", doc.simple_coroots))
                    .and_then(|_| writeln!(out, "simple roots:   {:?}", doc.simple_roots))
                    .map_err(io)
            }
        }
        Command::Check { trials } => {
            let results = run_all(cli.seed, *trials);
            let mut all = true;
            for r in &results {
                all &= r.passed();
                writeln!(
                    out,
                    "{} {} ({} cases, {} failures)",
                    if r.passed() { "PASS" } else { "FAIL" },
                    r.name,
                    r.cases,
                    r.failures.len()
                )
                .map_err(io)?;
                for f in r.failures.iter().take(5) {
                    writeln!(out, "  {f}").map_err(io)?;
                }
            }
            if all {
                Ok(())
            } else {
                Err(DocError::Invalid(format!("property suites failed (seed {})", cli.seed)))
            }
        }
    }
}
