use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use statesum::defect::{generating_loop_invariant, verify_bimodule};
use statesum::engine::{evaluate, verify_pachner, DEFAULT_CAP};
use statesum::km::check_axioms;
use statesum::spin::{crossing_search_cyclic, verify_crossing_axioms, SearchMode};
use statesum::spin_structure::{immersion_to_parity, Parity, QuadraticForm};
use statesum::surface::Triangulation;
use statesum::{Cyclo, Report};
use statesum_cli::table::{par_map, report_rows, sort_rows, write_table, CheckRow, Format, Row};
use statesum_cli::{parse_bits, parse_model, parse_range, CliError, Model, Result};

/// Exact state-sum invariants of triangulated surfaces.
#[derive(Parser)]
#[command(name = "statesum", version)]
struct Cli {
    /// Output format for tables.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Contraction budget in scalar multiplications.
    #[arg(long, global = true, env = "STATESUM_CAP", default_value_t = DEFAULT_CAP)]
    cap: u128,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelArg {
    /// JSON model file.
    #[arg(long)]
    model: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Contract the state sum on a triangulation.
    Evaluate {
        #[command(flatten)]
        model: ModelArg,
        /// Frobenius entry (orientable surfaces).
        #[arg(long, conflicts_with = "involution")]
        frobenius: Option<String>,
        /// Involution entry (any surface).
        #[arg(long)]
        involution: Option<String>,
        /// Genera of the standard orientable triangulations.
        #[arg(long, group = "surface")]
        genus: Option<String>,
        /// Cross-cap counts of the standard non-orientable triangulations.
        #[arg(long, group = "surface")]
        crosscaps: Option<String>,
        /// Triangulation file (`T +|-` lines and `(t,s)~(t,s):same|opp` gluings).
        #[arg(long, group = "surface")]
        triangulation: Option<PathBuf>,
    },
    /// Closed-form invariant of closed orientable surfaces.
    Closed {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        frobenius: String,
        #[arg(long, default_value = "0..3")]
        genus: String,
    },
    /// Closed-form invariant of non-orientable surfaces (connected sums of projective planes).
    Km {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        involution: String,
        #[arg(long, default_value = "1..3")]
        crosscaps: String,
    },
    /// Spin models.
    #[command(subcommand)]
    Spin(SpinCommand),
    /// Parity of the spin structure with quadratic form `q` on the symplectic basis.
    Arf {
        #[arg(long)]
        genus: usize,
        /// Values `q(a_1), q(b_1), ..., q(a_g), q(b_g)`.
        #[arg(long)]
        q: String,
    },
    /// Spin models with a defect line.
    #[command(subcommand)]
    Defect(DefectCommand),
    /// Run every axiom check on every entity of a model file.
    Verify {
        #[command(flatten)]
        model: ModelArg,
    },
}

#[derive(Subcommand)]
enum SpinCommand {
    /// Check the crossing axioms.
    Verify {
        #[command(flatten)]
        model: ModelArg,
        /// Crossing entry; all crossings when omitted.
        #[arg(long)]
        crossing: Option<String>,
    },
    /// Spin invariant by genus and parity.
    Invariant {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        crossing: String,
        #[arg(long, default_value = "1..3")]
        genus: String,
        #[arg(long, value_enum, default_value = "both")]
        parity: ParityArg,
        /// Curl flags of an immersed handle diagram (two per handle), e.g. `0,1`.
        #[arg(long, conflicts_with_all = ["genus", "parity"])]
        curls: Option<String>,
    },
    /// Enumerate crossings on the group algebra of a cyclic group.
    Search {
        #[arg(long)]
        cyclic: usize,
        #[arg(long, value_enum, default_value = "ansatz")]
        mode: ModeArg,
    },
}

#[derive(Subcommand)]
enum DefectCommand {
    /// Invariant with a bimodule line along one generating loop.
    Invariant {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        bimodule: String,
        #[arg(long)]
        crossing: String,
        #[arg(long, default_value = "1..3")]
        genus: String,
        #[arg(long, value_enum, default_value = "both")]
        parity: ParityArg,
        /// Curls on the defect loop (0 or 1).
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
        loop_curls: u8,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
    Both,
}

impl ParityArg {
    fn parities(self) -> Vec<Parity> {
        match self {
            ParityArg::Even => vec![Parity::Even],
            ParityArg::Odd => vec![Parity::Odd],
            ParityArg::Both => vec![Parity::Even, Parity::Odd],
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ansatz,
    Full,
}

fn load(arg: &ModelArg) -> Result<Model> {
    let path = arg.model.display().to_string();
    let text = std::fs::read_to_string(&arg.model).map_err(|source| CliError::Io { path: path.clone(), source })?;
    parse_model(&text).map(|(_, m)| m).map_err(|e| match e {
        CliError::Syntax { line, column, message } => CliError::Syntax { line, column, message: format!("{path}: {message}") },
        e => e,
    })
}

fn lookup<'m, T>(map: &'m std::collections::BTreeMap<String, T>, kind: &str, key: &str) -> Result<&'m T> {
    map.get(key).ok_or_else(|| CliError::Usage(format!("no {kind} named `{key}` in the model file")))
}

fn collect<T>(results: Vec<statesum::Result<T>>) -> Result<Vec<T>> {
    results.into_iter().map(|r| r.map_err(CliError::from)).collect()
}

/// `(g, parity)` pairs for every requested genus and parity.
fn spin_cases(genus: &str, parity: ParityArg) -> Result<Vec<(usize, Parity)>> {
    let gs = parse_range(genus)?;
    if gs.contains(&0) {
        return Err(CliError::Usage("spin invariants need genus >= 1".into()));
    }
    Ok(gs.iter().flat_map(|&g| parity.parities().into_iter().map(move |p| (g, p))).collect())
}

fn surface_label(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let format = cli.format;
    let cap = cli.cap;
    let rows = match cli.command {
        Command::Evaluate { model, frobenius, involution, genus, crosscaps, triangulation } => {
            let m = load(&model)?;
            let (key, f, s) = match (&frobenius, &involution) {
                (Some(k), None) => (k.clone(), lookup(&m.frobenius, "frobenius", k)?.clone(), None),
                (None, Some(k)) => {
                    let inv = lookup(&m.involutions, "involution", k)?;
                    (k.clone(), inv.frobenius().clone(), Some(inv.s_matrix().clone()))
                }
                _ => return Err(CliError::Usage("give one of --frobenius or --involution".into())),
            };
            let surfaces: Vec<(String, Triangulation)> = match (genus, crosscaps, triangulation) {
                (Some(g), None, None) => parse_range(&g)?.into_iter().map(|g| (format!("genus {g}"), Triangulation::genus_surface(g))).collect(),
                (None, Some(k), None) => {
                    let ks = parse_range(&k)?;
                    if ks.contains(&0) {
                        return Err(CliError::Usage("cross-cap count must be >= 1".into()));
                    }
                    ks.into_iter().map(|k| (format!("crosscaps {k}"), Triangulation::nonorientable_surface(k))).collect()
                }
                (None, None, Some(p)) => {
                    let text = std::fs::read_to_string(&p).map_err(|source| CliError::Io { path: p.display().to_string(), source })?;
                    let t: Triangulation = text.parse().map_err(|e: statesum::Error| CliError::Usage(format!("{}: {e}", p.display())))?;
                    vec![(surface_label(&p), t)]
                }
                _ => return Err(CliError::Usage("give one of --genus, --crosscaps or --triangulation".into())),
            };
            let reports = collect(par_map(&surfaces, |(_, t)| evaluate(t, &f, s.as_ref(), cap)))?;
            surfaces
                .iter()
                .zip(reports)
                .map(|((label, t), rep)| {
                    let structure = if t.opposite_count() == 0 { "oriented" } else { "semi-oriented" };
                    let (v, e, tr) = rep.counts;
                    let note = format!("V={v} E={e} T={tr}; {} multiplications", rep.multiplications);
                    let row = Row::new(&key, label.clone(), structure, &rep.value);
                    if t.is_closed() { row.with_note(note) } else { row.with_note(format!("{note}; open surface")) }
                })
                .collect()
        }
        Command::Closed { model, frobenius, genus } => {
            let m = load(&model)?;
            let f = lookup(&m.frobenius, "frobenius", &frobenius)?;
            let gs = parse_range(&genus)?;
            let values = collect(par_map(&gs, |&g| f.closed_genus_invariant(g)))?;
            gs.iter().zip(values).map(|(g, v)| Row::new(&frobenius, format!("genus {g}"), "oriented", &v)).collect()
        }
        Command::Km { model, involution, crosscaps } => {
            let m = load(&model)?;
            let inv = lookup(&m.involutions, "involution", &involution)?;
            let ks = parse_range(&crosscaps)?;
            let values = collect(par_map(&ks, |&k| inv.nonorientable_invariant(k)))?;
            ks.iter().zip(values).map(|(k, v)| Row::new(&involution, format!("crosscaps {k}"), "unoriented", &v)).collect()
        }
        Command::Spin(SpinCommand::Verify { model, crossing }) => {
            let m = load(&model)?;
            let keys: Vec<&String> = match &crossing {
                Some(k) => vec![lookup(&m.crossings, "crossing", k).map(|_| k)?],
                None => m.crossings.keys().collect(),
            };
            let reports = par_map(&keys, |k| verify_crossing_axioms(&m.crossings[*k]).axioms);
            let checks: Vec<CheckRow> = keys.iter().zip(&reports).flat_map(|(k, r)| report_rows(&format!("crossing {k}"), r)).collect();
            return emit_checks(out, checks, format);
        }
        Command::Spin(SpinCommand::Invariant { model, crossing, genus, parity, curls }) => {
            let m = load(&model)?;
            let x = lookup(&m.crossings, "crossing", &crossing)?;
            if let Some(c) = curls {
                let flags = parse_bits(&c)?;
                let p = immersion_to_parity(&flags)?;
                let v = x.spin_invariant_with_curls(&flags)?;
                vec![Row::new(&crossing, format!("genus {}", flags.len() / 2), p.to_string(), &v).with_note(format!("curls {c}"))]
            } else {
                let cases = spin_cases(&genus, parity)?;
                let values = collect(par_map(&cases, |&(g, p)| x.spin_invariant(g, p)))?;
                cases.iter().zip(values).map(|((g, p), v)| Row::new(&crossing, format!("genus {g}"), p.to_string(), &v)).collect()
            }
        }
        Command::Spin(SpinCommand::Search { cyclic, mode }) => {
            let mode = match mode {
                ModeArg::Ansatz => SearchMode::Ansatz,
                ModeArg::Full => SearchMode::Full,
            };
            let families = crossing_search_cyclic::<Cyclo>(cyclic, mode, cap)?;
            let mut rows = Vec::new();
            for (i, fam) in families.iter().enumerate() {
                let note = if fam.distinguishes_parity {
                    format!("{}; distinguishes parity", fam.description)
                } else {
                    fam.description.clone()
                };
                for (g, (even, odd)) in fam.invariants.iter().enumerate() {
                    for (p, v) in [(Parity::Even, even), (Parity::Odd, odd)] {
                        rows.push(Row::new(&format!("family {}", i + 1), format!("genus {}", g + 1), p.to_string(), v).with_note(note.clone()));
                    }
                }
            }
            rows
        }
        Command::Arf { genus, q } => {
            let bits = parse_bits(&q)?;
            if bits.len() != 2 * genus {
                return Err(CliError::Usage(format!("genus {genus} needs {} values of q, got {}", 2 * genus, bits.len())));
            }
            let form = QuadraticForm::new(bits)?;
            let p = form.parity();
            vec![Row::new(&format!("q={q}"), format!("genus {genus}"), p.to_string(), &Cyclo::from_int(p.sign()))]
        }
        Command::Defect(DefectCommand::Invariant { model, bimodule, crossing, genus, parity, loop_curls }) => {
            let m = load(&model)?;
            let v = lookup(&m.bimodules, "bimodule", &bimodule)?;
            let x = lookup(&m.crossings, "crossing", &crossing)?;
            let cases = spin_cases(&genus, parity)?;
            let values = collect(par_map(&cases, |&(g, p)| generating_loop_invariant(v, x, g, p, loop_curls)))?;
            let model_id = format!("{crossing} / {bimodule}");
            cases
                .iter()
                .zip(values)
                .map(|((g, p), val)| Row::new(&model_id, format!("genus {g}"), p.to_string(), &val).with_note(format!("{loop_curls} curl(s) on the defect loop")))
                .collect()
        }
        Command::Verify { model } => {
            let m = load(&model)?;
            return emit_checks(out, verify_all(&m), format);
        }
    };
    let mut rows: Vec<Row> = rows;
    sort_rows(&mut rows);
    write_table(out, &rows, format)
}

/// Writes the checks, then fails with exit status 1 if any did not pass.
fn emit_checks(out: &mut dyn Write, checks: Vec<CheckRow>, format: Format) -> Result<()> {
    write_table(out, &checks, format)?;
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.entity, c.check)).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join("; ")))
    }
}

fn verify_all(m: &Model) -> Vec<CheckRow> {
    let mut jobs: Vec<(String, Box<dyn Fn() -> Report + Sync + '_>)> = Vec::new();
    for (k, a) in &m.algebras {
        jobs.push((
            format!("algebra {k}"),
            Box::new(move || {
                let mut r = Report::new();
                match a.validate() {
                    Ok(()) => r.pass("associative with unit"),
                    Err(e) => r.push("associative with unit", false, e.to_string()),
                }
                if a.grading().is_some() {
                    match a.check_grading() {
                        Ok(()) => r.pass("grading respected"),
                        Err(e) => r.push("grading respected", false, e.to_string()),
                    }
                }
                r
            }),
        ));
    }
    for (k, f) in &m.frobenius {
        jobs.push((
            format!("frobenius {k}"),
            Box::new(move || {
                let mut r = f.verify_separability();
                r.extend(f.check_nakayama());
                r.extend(verify_pachner(f));
                r
            }),
        ));
    }
    for (k, inv) in &m.involutions {
        jobs.push((
            format!("involution {k}"),
            Box::new(move || {
                let f = inv.frobenius();
                let mut r = check_axioms(f, inv.star_matrix(), inv.s_matrix());
                r.extend(inv.verify_w_identities());
                r
            }),
        ));
    }
    for (k, x) in &m.crossings {
        jobs.push((format!("crossing {k}"), Box::new(move || verify_crossing_axioms(x).axioms)));
    }
    for (k, v) in &m.bimodules {
        jobs.push((format!("bimodule {k}"), Box::new(move || verify_bimodule(v))));
    }
    let reports = par_map(&jobs, |(_, job)| job());
    jobs.iter().zip(&reports).flat_map(|((name, _), r)| report_rows(name, r)).collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
