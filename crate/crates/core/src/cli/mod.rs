//! Batch front-end: subcommands over a document, plain-text reports and exit
//! codes (0 holds, 1 fails, 2 malformed input or undecidable request).

pub mod format;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::absolute::{self, bijection_audit, oracle_colimit};
use crate::enriched::{ProfMap, Report};
use crate::error::Error;
use crate::instances;
use crate::modcalc::check_adjunction;

use self::format::{Fragment, Model, ProfRef, Task};

pub const HOLDS: i32 = 0;
pub const FAILS: i32 = 1;
pub const MALFORMED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "absolim", version, about = "Checks absolute weighted colimits and limits exactly")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Document to read; standard input when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Where to write emitted documents or fragments (`-` or no value: standard output).
    #[arg(long, global = true, value_name = "FILE", num_args = 0..=1, default_missing_value = "-")]
    pub emit: Option<PathBuf>,
    /// Bound on component sizes for `audit` and `oracle-colimit`.
    #[arg(long, global = true, value_name = "N", default_value_t = 4)]
    pub max_size: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Triangle identities of every declared adjunction.
    CheckAdjunction,
    /// Whether each task's cocone exhibits a colimit.
    CheckColimit,
    /// Whether each task's cone exhibits a limit.
    CheckLimit,
    /// The two commuting squares for each task's cocone and cone.
    CheckSquares,
    /// Derive one side of a square pair from the other.
    Derive {
        #[arg(value_enum)]
        direction: Direction,
    },
    /// Factor each task's map through its colimit.
    Factor,
    /// Count colimiting cocones, limiting cones and square pairs exhaustively.
    Audit,
    /// Write a built-in fixture as a document.
    Example {
        name: String,
        /// Use the fixture's perturbed variant.
        #[arg(long)]
        perturbed: bool,
    },
    /// Decide colimits by enumerating modules (finite sets only).
    OracleColimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    BFromA,
    AFromB,
}

/// Collected output of one invocation.
#[derive(Debug, Default)]
struct Run {
    out: String,
    code: i32,
}

impl Run {
    fn line(&mut self, s: impl AsRef<str>) {
        self.out.push_str(s.as_ref());
        self.out.push('\n');
    }

    fn worsen(&mut self, code: i32) {
        self.code = self.code.max(code);
    }

    fn verdict(&mut self, cmd: &str, task: &str, r: Result<Report, Error>) {
        match r {
            Ok(r) if r.holds() => self.line(format!("{cmd} {task}: holds")),
            Ok(r) => {
                self.line(format!("{cmd} {task}: fails"));
                for f in &r.failures {
                    self.line(format!("  {f}"));
                }
                self.worsen(FAILS);
            }
            Err(e) => self.error(cmd, task, e),
        }
    }

    fn error(&mut self, cmd: &str, task: &str, e: Error) {
        match e {
            Error::Precondition(m) => {
                self.line(format!("{cmd} {task}: fails"));
                self.line(format!("  precondition: {m}"));
                self.worsen(FAILS);
            }
            e => {
                self.line(format!("{cmd} {task}: error: {e}"));
                self.worsen(MALFORMED);
            }
        }
    }
}

/// Runs the command line `args` (including the program name), writing the
/// report to `stdout` and diagnostics to `stderr`; returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { MALFORMED } else { HOLDS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, stdin) {
        Ok((run, emitted)) => {
            let _ = stdout.write_all(run.out.as_bytes());
            if let Some(text) = emitted {
                if let Err(e) = write_emit(cli.emit.as_ref(), &text, stdout) {
                    let _ = writeln!(stderr, "absolim: {e}");
                    return MALFORMED;
                }
            }
            run.code
        }
        Err(msg) => {
            let _ = writeln!(stderr, "absolim: {msg}");
            MALFORMED
        }
    }
}

fn write_emit(target: Option<&PathBuf>, text: &str, stdout: &mut dyn Write) -> std::io::Result<()> {
    match target {
        Some(p) if p.as_os_str() != "-" => std::fs::write(p, text),
        _ => stdout.write_all(text.as_bytes()),
    }
}

fn load(cli: &Cli, stdin: &mut dyn Read) -> Result<Model, String> {
    let text = match &cli.input {
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))?,
        None => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| format!("cannot read standard input: {e}"))?;
            s
        }
    };
    format::parse(&text).map_err(|e| e.0.iter().map(|x| format!("{} error: {x}", x.class())).collect::<Vec<_>>().join("\n"))
}

fn applicable<'m>(model: &'m Model, what: &str, pick: impl Fn(&Task) -> bool) -> Result<Vec<&'m Task>, String> {
    let ts: Vec<&Task> = model.tasks.iter().filter(|t| pick(t)).collect();
    if ts.is_empty() {
        return Err(format!("no task in the document supplies {what}"));
    }
    Ok(ts)
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<(Run, Option<String>), String> {
    let mut run = Run::default();
    if let Command::Example { name, perturbed } = &cli.command {
        let fx = instances::by_name(name).map_err(|e| e.to_string())?;
        let fx = if *perturbed {
            fx.perturbed()
                .map_err(|e| e.to_string())?
                .ok_or_else(|| format!("example {name:?} has no perturbed variant"))?
        } else {
            fx
        };
        return Ok((run, Some(format::emit(&format::fixture_document(&fx)))));
    }
    let model = load(cli, stdin)?;
    let mut fragment = Fragment { maps: vec![] };
    match &cli.command {
        Command::Example { .. } => unreachable!(),
        Command::CheckAdjunction => {
            if model.adjunctions.is_empty() {
                return Err("the document declares no adjunction".into());
            }
            for (name, adj) in &model.adjunctions {
                run.verdict("check-adjunction", name, check_adjunction(adj));
            }
        }
        Command::CheckColimit => {
            for t in applicable(&model, "a cocone", |t| t.colimit.is_some())? {
                run.verdict("check-colimit", &t.name, absolute::check_colimit(t.colimit.as_ref().unwrap()));
            }
        }
        Command::CheckLimit => {
            for t in applicable(&model, "a cone", |t| t.limit.is_some())? {
                run.verdict("check-limit", &t.name, absolute::check_limit(t.limit.as_ref().unwrap()));
            }
        }
        Command::CheckSquares => {
            for t in applicable(&model, "an adjunction with a cocone and a cone", |t| t.squares().is_some())? {
                run.verdict("check-squares", &t.name, absolute::check_squares(&t.squares().unwrap()));
            }
        }
        Command::Derive { direction } => {
            let cmd = match direction {
                Direction::BFromA => "derive b-from-a",
                Direction::AFromB => "derive a-from-b",
            };
            let need = |t: &Task| match direction {
                Direction::BFromA => t.adjunction.is_some() && t.colimit.is_some(),
                Direction::AFromB => t.adjunction.is_some() && t.limit.is_some(),
            };
            for t in applicable(&model, "an adjunction with the starting map", need)? {
                let adj = t.adjunction.as_ref().unwrap();
                let decl = model.document.tasks.iter().find(|d| d.name == t.name).unwrap();
                let weights = model.document.adjunctions.iter().find(|d| Some(&d.name) == decl.adjunction.as_ref()).unwrap();
                let derived = match direction {
                    Direction::BFromA => absolute::derive_b_from_a(t.colimit.as_ref().unwrap(), adj)
                        .map(|m| (m, "cone", &weights.right, [&decl.apex, &decl.diagram])),
                    Direction::AFromB => absolute::derive_a_from_b(t.limit.as_ref().unwrap(), adj)
                        .map(|m| (m, "cocone", &weights.left, [&decl.diagram, &decl.apex])),
                };
                match derived {
                    Ok((m, kind, weight, [g, f])) => {
                        run.line(format!("{cmd} {}: holds", t.name));
                        fragment.maps.push(derived_decl(&m, &format!("{}-{kind}", t.name), weight, g, f));
                    }
                    Err(e) => run.error(cmd, &t.name, e),
                }
            }
        }
        Command::Factor => {
            for t in applicable(&model, "a factorisation request with its square pair", |t| {
                t.factor.is_some() && t.squares().is_some()
            })? {
                let (g, k, m) = t.factor.as_ref().unwrap();
                match absolute::factor_through_colimit(&t.squares().unwrap(), g, k, m) {
                    Ok(fbar) => {
                        run.line(format!("factor {}: holds", t.name));
                        let spec = model.document.tasks.iter().find(|d| d.name == t.name).unwrap().factor.clone().unwrap();
                        let cod = ProfRef::Hom { hom: [t_apex(&model, t), spec.functor.clone()] };
                        fragment.maps.push(format::map_decl(
                            &fbar,
                            &format!("{}-factored", spec.map),
                            ProfRef::Named(spec.module),
                            cod,
                        ));
                    }
                    Err(Error::Invalid(msg)) => {
                        run.line(format!("factor {}: fails", t.name));
                        run.line(format!("  {msg}"));
                        run.worsen(FAILS);
                    }
                    Err(e) => run.error("factor", &t.name, e),
                }
            }
        }
        Command::Audit => {
            for t in applicable(&model, "an adjunction", |t| t.adjunction.is_some())? {
                match bijection_audit(t.adjunction.as_ref().unwrap(), &t.f, &t.z, cli.max_size) {
                    Ok(r) => {
                        run.line(format!("audit {}: {}", t.name, if r.holds() { "holds" } else { "fails" }));
                        run.line(format!(
                            "  cocones {}, cones {}, colimiting {}, limiting {}, square pairs {}",
                            r.cocones, r.cones, r.colimiting, r.limiting, r.square_pairs
                        ));
                        for f in &r.failures {
                            run.line(format!("  {f}"));
                        }
                        if !r.holds() {
                            run.worsen(FAILS);
                        }
                    }
                    Err(e) => run.error("audit", &t.name, e),
                }
            }
        }
        Command::OracleColimit => {
            for t in applicable(&model, "a cocone", |t| t.colimit.is_some())? {
                match oracle_colimit(t.colimit.as_ref().unwrap(), cli.max_size) {
                    Ok(r) if r.holds => {
                        run.line(format!("oracle-colimit {}: holds ({} modules checked)", t.name, r.modules_checked))
                    }
                    Ok(r) => {
                        run.line(format!("oracle-colimit {}: fails", t.name));
                        run.line(format!("  {}", r.witness.unwrap_or_default()));
                        run.worsen(FAILS);
                    }
                    Err(e) => run.error("oracle-colimit", &t.name, e),
                }
            }
        }
    }
    let emitted = (!fragment.maps.is_empty()).then(|| format::to_text(&fragment));
    Ok((run, emitted))
}

fn t_apex(model: &Model, t: &Task) -> String {
    model.document.tasks.iter().find(|d| d.name == t.name).map(|d| d.apex.clone()).unwrap_or_default()
}

fn derived_decl(m: &ProfMap, name: &str, weight: &str, g: &str, f: &str) -> format::MapDecl {
    format::map_decl(m, name, ProfRef::Named(weight.to_string()), ProfRef::Hom { hom: [g.to_string(), f.to_string()] })
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}
