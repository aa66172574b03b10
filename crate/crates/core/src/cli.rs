//! Command-line front end. The `altbell` binary is a thin wrapper around
//! [`run`], which writes to caller-supplied streams so it can be tested
//! in-process.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 validation failure,
//! 3 circuit mismatch.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::basis::{
    assemble_transform, builtin_basis, check_family_params, fmt_c64, load_basis_file,
    validate_basis, BasisFile, EntangledBasis, Family, QubitState, TwoQubitState,
};
use crate::circuit::{
    self, catalog_entries, catalog_entry, parse_circuit, CatalogKind, CircuitParams,
    EquivalenceReport, TeleportFamily, Verdict,
};
use crate::error::Error;
use crate::linalg::{c, Mat2, Mat4, StateVec, C64};
use crate::reference::cross_check;
use crate::teleport::{self, Mode, TeleportRun};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;

/// Threshold on `|det|` separating entangled from product states.
pub const ENTANGLEMENT_THRESHOLD: f64 = 1e-10;

/// Payloads within this distance of unit norm are normalized with a warning.
pub const AUTO_NORMALIZE_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "altbell",
    version,
    about = "Teleportation over generalized entangled two-qubit bases"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate or inspect a basis.
    #[command(subcommand)]
    Basis(BasisCommand),
    /// Run the teleportation protocol over a basis.
    Teleport(TeleportArgs),
    /// Verify, list, show or run gate circuits.
    #[command(subcommand)]
    Circuit(CircuitCommand),
    /// Classify a two-qubit state as entangled or product.
    Entanglement(EntanglementArgs),
}

#[derive(Debug, Subcommand)]
pub enum BasisCommand {
    /// Check the determinant and orthonormality conditions.
    Validate(BasisSource),
    /// Print the matrices, the transform T and its inverse.
    Show(BasisSource),
    /// Compare the closed-form reference tables with computed values.
    Reference(BasisSource),
}

#[derive(Debug, Clone, Args)]
pub struct BasisSource {
    /// Built-in family: bell, phase, rotation, hyperbolic, scale.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    pub builtin: Option<String>,
    /// Basis JSON file.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Angle parameter in radians (phase, rotation, hyperbolic).
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Scale parameter (scale family).
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TeleportArgs {
    #[command(flatten)]
    pub source: BasisSource,
    /// Index i of the shared basis state |V_i⟩.
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..4))]
    pub index: u8,
    /// Payload as re,im,re,im.
    #[arg(long, allow_hyphen_values = true)]
    pub state: String,
    /// Number of sampled measurement outcomes.
    #[arg(long, default_value_t = 10_000)]
    pub shots: u64,
    /// Seed for the outcome sampler.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Correction applied by the receiver: exact inverse or its polar unitary.
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Unitary,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Unitary => Mode::Unitary,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum CircuitCommand {
    /// Check catalog circuits against their claimed states.
    Verify(VerifyArgs),
    /// List catalog circuits.
    List,
    /// Print a catalog circuit in the text format.
    Show(ShowArgs),
    /// Run a circuit file on |0…0⟩ or a given state.
    Run(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CircuitParamArgs {
    /// Angle parameter in radians.
    #[arg(long, allow_hyphen_values = true, default_value_t = std::f64::consts::FRAC_PI_4)]
    pub theta: f64,
    /// Scale parameter.
    #[arg(long, allow_hyphen_values = true, default_value_t = 2.0)]
    pub lambda: f64,
    /// Family for the shared hyperbolic/scale teleport circuit.
    #[arg(long, value_enum, default_value_t = FamilyArg::Hyperbolic)]
    pub family: FamilyArg,
    /// Basis matrix index used by teleport circuits.
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..4))]
    pub matrix_index: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Hyperbolic,
    Scale,
}

impl CircuitParamArgs {
    fn params(&self) -> CircuitParams {
        CircuitParams {
            theta: self.theta,
            lambda: self.lambda,
            matrix_index: self.matrix_index as usize,
            family: match self.family {
                FamilyArg::Hyperbolic => TeleportFamily::Hyperbolic,
                FamilyArg::Scale => TeleportFamily::Scale,
            },
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Verify every catalog entry.
    #[arg(long, conflicts_with = "id", required_unless_present = "id")]
    pub all: bool,
    /// Catalog id, e.g. fig1 or telRot.
    #[arg(long)]
    pub id: Option<String>,
    /// Teleport payload as re,im,re,im (teleport circuits only).
    #[arg(long, allow_hyphen_values = true)]
    pub payload: Option<String>,
    #[command(flatten)]
    pub params: CircuitParamArgs,
}

#[derive(Debug, Args)]
pub struct ShowArgs {
    /// Catalog id, e.g. fig1 or telRot.
    #[arg(long)]
    pub id: String,
    #[command(flatten)]
    pub params: CircuitParamArgs,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Circuit text file.
    #[arg(long)]
    pub file: PathBuf,
    /// Input amplitudes as re,im,...; defaults to |0…0⟩.
    #[arg(long, allow_hyphen_values = true)]
    pub state: Option<String>,
}

#[derive(Debug, Args)]
pub struct EntanglementArgs {
    /// Four complex amplitudes as re,im,re,im,re,im,re,im.
    #[arg(long, allow_hyphen_values = true)]
    pub state: String,
}

/// A command failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidBasis(_)
            | Error::SingularMatrix { .. }
            | Error::SingularCorrection { .. }
            | Error::ParamOutOfRange { .. }
            | Error::UnnormalizedInput { .. }
            | Error::IndexOutOfRange { .. } => EXIT_INVALID,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type CmdResult = std::result::Result<u8, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let fmt = cli.format;
    match &cli.command {
        Command::Basis(BasisCommand::Validate(src)) => cmd_basis_validate(src, fmt, out),
        Command::Basis(BasisCommand::Show(src)) => cmd_basis_show(src, fmt, out),
        Command::Basis(BasisCommand::Reference(src)) => cmd_basis_reference(src, fmt, out),
        Command::Teleport(args) => cmd_teleport(args, fmt, out, err),
        Command::Circuit(CircuitCommand::Verify(args)) => cmd_circuit_verify(args, fmt, out),
        Command::Circuit(CircuitCommand::List) => cmd_circuit_list(fmt, out),
        Command::Circuit(CircuitCommand::Show(args)) => cmd_circuit_show(args, fmt, out),
        Command::Circuit(CircuitCommand::Run(args)) => cmd_circuit_run(args, fmt, out),
        Command::Entanglement(args) => cmd_entanglement(args, fmt, out),
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> CmdResult {
    let text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    writeln!(out, "{text}")?;
    Ok(EXIT_OK)
}

/// Parses a flat `re,im,re,im,…` list into complex numbers.
pub fn parse_complex_list(
    text: &str,
    expected: Option<usize>,
) -> std::result::Result<Vec<C64>, String> {
    let nums: Vec<f64> = text
        .split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("invalid number {t:?}"))
        })
        .collect::<std::result::Result<_, _>>()?;
    if !nums.len().is_multiple_of(2) {
        return Err(format!("expected re,im pairs, got {} numbers", nums.len()));
    }
    let values: Vec<C64> = nums.chunks(2).map(|p| c(p[0], p[1])).collect();
    if let Some(n) = expected {
        if values.len() != n {
            return Err(format!(
                "expected {n} complex values ({} numbers), got {}",
                2 * n,
                nums.len()
            ));
        }
    }
    Ok(values)
}

fn family_from_source(src: &BasisSource) -> Result<Family, Failure> {
    let name = src.builtin.as_deref().expect("builtin set");
    let family = Family::from_name(name, src.theta, src.lambda)?;
    Ok(family)
}

/// Name, params and raw matrices from a source, before validation.
fn load_raw(src: &BasisSource) -> Result<BasisFile, Failure> {
    if let Some(path) = &src.file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        let file: BasisFile = serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        if !file.matrices.iter().all(Mat2::is_finite) {
            return Err(Failure::usage(format!(
                "{}: non-finite matrix entry",
                path.display()
            )));
        }
        Ok(file)
    } else {
        let family = family_from_source(src)?;
        check_family_params(&family)?;
        Ok(BasisFile {
            name: family.name().to_string(),
            params: family.params(),
            matrices: family.matrices(),
        })
    }
}

fn load_basis(src: &BasisSource) -> Result<EntangledBasis, Failure> {
    if let Some(path) = &src.file {
        match load_basis_file(path) {
            Err(Error::Io(e)) => Err(Failure::usage(format!("{}: {e}", path.display()))),
            Err(Error::Json(e)) => Err(Failure::usage(format!("{}: {e}", path.display()))),
            other => Ok(other?),
        }
    } else {
        Ok(builtin_basis(&family_from_source(src)?)?)
    }
}

fn describe(name: &str, params: &std::collections::BTreeMap<String, f64>) -> String {
    if params.is_empty() {
        name.to_string()
    } else {
        let ps: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{name}({})", ps.join(", "))
    }
}

fn cmd_basis_validate(src: &BasisSource, fmt: Format, out: &mut dyn Write) -> CmdResult {
    let raw = load_raw(src)?;
    let report = validate_basis(&raw.matrices);
    let code = if report.pass { EXIT_OK } else { EXIT_INVALID };
    match fmt {
        Format::Json => {
            emit_json(
                out,
                &json!({
                    "name": raw.name,
                    "params": raw.params,
                    "pass": report.pass,
                    "report": report,
                }),
            )?;
        }
        Format::Text => {
            let mut s = format!("basis: {}\n", describe(&raw.name, &raw.params));
            for (i, d) in report.determinants.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "  |det A{i}| = {:.6e}  {}",
                    d.abs_det,
                    if d.pass { "ok" } else { "SINGULAR" }
                );
            }
            let (r, col) = report.gram_worst_entry;
            let _ = writeln!(
                s,
                "  Gram deviation = {:.3e} (worst entry [{r}][{col}])  {}",
                report.gram_max_deviation,
                if report.gram_pass {
                    "ok"
                } else {
                    "NOT ORTHONORMAL"
                }
            );
            let _ = writeln!(s, "result: {}", if report.pass { "pass" } else { "FAIL" });
            if !report.pass {
                let _ = writeln!(s, "  {}", report.summary());
            }
            out.write_all(s.as_bytes())?;
        }
    }
    Ok(code)
}

fn fmt_mat2(m: &Mat2) -> String {
    format!(
        "[[{}, {}], [{}, {}]]",
        fmt_c64(m.0[0][0]),
        fmt_c64(m.0[0][1]),
        fmt_c64(m.0[1][0]),
        fmt_c64(m.0[1][1])
    )
}

fn fmt_mat4(m: &Mat4, indent: &str) -> String {
    let mut s = String::new();
    for row in &m.0 {
        let cells: Vec<String> = row.iter().map(|z| format!("{:>24}", fmt_c64(*z))).collect();
        let _ = writeln!(s, "{indent}{}", cells.join(" "));
    }
    s
}

fn cmd_basis_show(src: &BasisSource, fmt: Format, out: &mut dyn Write) -> CmdResult {
    let basis = load_basis(src)?;
    let transform = assemble_transform(&basis)?;
    let scaled_unitary = basis.is_scaled_unitary(1e-12);
    match fmt {
        Format::Json => emit_json(
            out,
            &json!({
                "basis": BasisFile::from_basis(&basis),
                "validation": basis.validation(),
                "transform": transform,
                "scaled_unitary": scaled_unitary,
            }),
        ),
        Format::Text => {
            let mut s = format!("basis: {basis}\n");
            for (i, m) in basis.matrices().iter().enumerate() {
                let _ = writeln!(s, "  A{i} = {}", fmt_mat2(m));
            }
            let _ = writeln!(s, "every A is a scaled unitary: {scaled_unitary}");
            let _ = write!(
                s,
                "T (rows = vectorized A_i):\n{}",
                fmt_mat4(&transform.t, "  ")
            );
            let _ = write!(s, "T^-1 = T^dagger:\n{}", fmt_mat4(&transform.t_inv, "  "));
            out.write_all(s.as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

fn cmd_basis_reference(src: &BasisSource, fmt: Format, out: &mut dyn Write) -> CmdResult {
    if src.file.is_some() {
        return Err(Failure::usage(
            "reference tables exist only for built-in families",
        ));
    }
    let family = family_from_source(src)?;
    let check = cross_check(&family)?;
    let code = if check.only_known_errata() {
        EXIT_OK
    } else {
        EXIT_INVALID
    };
    match fmt {
        Format::Json => {
            emit_json(out, &check)?;
        }
        Format::Text => {
            let mut s = format!(
                "{family}: {} reference entries checked, {} discrepancies\n",
                check.entries_checked,
                check.discrepancies.len()
            );
            for d in &check.discrepancies {
                let _ = writeln!(
                    s,
                    "  {}  max error {:.3e}{}",
                    d.entry,
                    d.max_error,
                    if d.known_erratum {
                        "  (known erratum)"
                    } else {
                        ""
                    }
                );
            }
            out.write_all(s.as_bytes())?;
        }
    }
    Ok(code)
}

/// Parses the payload, normalizing it (with a warning) when it is within
/// [`AUTO_NORMALIZE_TOL`] of unit norm.
fn parse_payload(text: &str, err: &mut dyn Write) -> Result<QubitState, Failure> {
    let v =
        parse_complex_list(text, Some(2)).map_err(|m| Failure::usage(format!("--state: {m}")))?;
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if (norm - 1.0).abs() > AUTO_NORMALIZE_TOL {
        return Err(Error::UnnormalizedInput {
            norm_sqr: norm * norm,
        }
        .into());
    }
    if let Ok(s) = QubitState::new(v[0], v[1]) {
        return Ok(s);
    }
    writeln!(err, "warning: payload norm {norm} normalized to 1")?;
    Ok(QubitState::normalized(v[0], v[1])?)
}

fn fmt_opt(f: Option<f64>) -> String {
    f.map_or_else(|| "n/a".to_string(), |v| format!("{v:.12}"))
}

fn cmd_teleport(
    args: &TeleportArgs,
    fmt: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let basis = load_basis(&args.source)?;
    let psi = parse_payload(&args.state, err)?;
    let run: TeleportRun = teleport::run(
        &psi,
        args.index as usize,
        &basis,
        args.shots,
        args.seed,
        args.mode.into(),
    )?;
    match fmt {
        Format::Json => emit_json(out, &run),
        Format::Text => {
            out.write_all(teleport_text(&run).as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

fn teleport_text(run: &TeleportRun) -> String {
    let mode = match run.mode {
        Mode::Exact => "exact",
        Mode::Unitary => "unitary",
    };
    let mut s = format!(
        "basis: {}  sender index: {}  mode: {mode}\ninput: ({}, {})\n",
        describe(&run.basis_name, &run.basis_params),
        run.sender_index,
        fmt_c64(run.input.gamma1),
        fmt_c64(run.input.gamma2)
    );
    let _ = writeln!(
        s,
        "{:<2} {:>14} {:>16} {:>16} {:>8}  gamma'",
        "k", "probability", "F_exact", "F_unitary", "count"
    );
    for k in 0..4 {
        let b = &run.branches[k];
        let _ = writeln!(
            s,
            "{:<2} {:>14.12} {:>16} {:>16} {:>8}  ({}, {})",
            k,
            b.probability,
            fmt_opt(run.fidelity_exact[k]),
            fmt_opt(run.fidelity_unitary[k]),
            run.counts[k],
            fmt_c64(b.gamma_prime[0]),
            fmt_c64(b.gamma_prime[1])
        );
    }
    let _ = writeln!(
        s,
        "expected fidelity ({mode}): {:.12}",
        run.expected_fidelity
    );
    match run.sampled_fidelity {
        Some(f) => {
            let _ = writeln!(
                s,
                "sampled fidelity: {f:.12} over {} shots (seed {})",
                run.shots, run.seed
            );
        }
        None => {
            let _ = writeln!(s, "sampled fidelity: n/a (0 shots)");
        }
    }
    s
}

fn fmt_phase(z: C64) -> String {
    if z.im.abs() < 1e-9 {
        format!("{}", z.re.round())
    } else {
        format!("{:.6}{:+.6}i", z.re, z.im)
    }
}

fn verdict_text(r: &EquivalenceReport) -> String {
    match (r.verdict, r.global_phase, &r.teleport) {
        (Verdict::PhaseEquivalent, Some(p), _) => format!("phase_equivalent ({})", fmt_phase(p)),
        (v, _, Some(t)) => format!(
            "{v} (fidelity {:.12}, engine {:.12})",
            t.circuit_fidelity, t.engine_fidelity
        ),
        (Verdict::Mismatch, _, None) => format!(
            "mismatch (max_amp_error {:.3e}, phase_residual {:.3e})",
            r.max_amp_error, r.phase_residual
        ),
        (v, _, None) => v.to_string(),
    }
}

fn cmd_circuit_verify(args: &VerifyArgs, fmt: Format, out: &mut dyn Write) -> CmdResult {
    let params = args.params.params();
    let payload = match &args.payload {
        Some(text) => {
            let v = parse_complex_list(text, Some(2))
                .map_err(|m| Failure::usage(format!("--payload: {m}")))?;
            Some(QubitState::normalized(v[0], v[1])?)
        }
        None => None,
    };
    let reports: Vec<EquivalenceReport> = if args.all {
        catalog_entries()
            .iter()
            .map(|e| circuit::verify_with_payload(e.id, &params, payload))
            .collect::<Result<_, _>>()?
    } else {
        let id = args.id.as_deref().expect("id set");
        vec![circuit::verify_with_payload(id, &params, payload)?]
    };
    let mismatches: Vec<&str> = reports
        .iter()
        .filter(|r| r.verdict == Verdict::Mismatch)
        .map(|r| r.id.as_str())
        .collect();
    let undocumented: Vec<&str> = reports
        .iter()
        .filter(|r| r.verdict == Verdict::Mismatch && r.note.is_none())
        .map(|r| r.id.as_str())
        .collect();
    let code = if mismatches.is_empty() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    };
    match fmt {
        Format::Json => {
            emit_json(
                out,
                &json!({
                    "params": params,
                    "reports": reports,
                    "discrepancies": mismatches,
                    "undocumented_discrepancies": undocumented,
                }),
            )?;
        }
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                let _ = writeln!(s, "{:<14} {}", r.id, verdict_text(r));
                if r.verdict == Verdict::Mismatch {
                    if let Some(note) = &r.note {
                        let _ = writeln!(s, "{:<14} note: {note}", "");
                    }
                }
            }
            if reports.len() > 1 {
                let _ = writeln!(
                    s,
                    "{} circuits, {} mismatches{}",
                    reports.len(),
                    mismatches.len(),
                    if undocumented.is_empty() {
                        String::new()
                    } else {
                        format!(
                            " ({} undocumented: {})",
                            undocumented.len(),
                            undocumented.join(", ")
                        )
                    }
                );
            }
            out.write_all(s.as_bytes())?;
        }
    }
    Ok(code)
}

fn cmd_circuit_list(fmt: Format, out: &mut dyn Write) -> CmdResult {
    match fmt {
        Format::Json => emit_json(out, &catalog_entries()),
        Format::Text => {
            let mut s = String::new();
            for e in catalog_entries() {
                let kind = match e.kind {
                    CatalogKind::StatePrep => "state",
                    CatalogKind::Teleport => "teleport",
                };
                let _ = writeln!(s, "{:<14} {:<9} {}", e.id, kind, e.description);
            }
            out.write_all(s.as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

fn cmd_circuit_show(args: &ShowArgs, fmt: Format, out: &mut dyn Write) -> CmdResult {
    let params = args.params.params();
    let entry = catalog_entry(&args.id)?;
    let (circuit, claimed): (_, Option<TwoQubitState>) = match entry.kind {
        CatalogKind::StatePrep => {
            let (c0, s) = circuit::catalog(&args.id, &params)?;
            (c0, Some(s))
        }
        CatalogKind::Teleport => (circuit::teleport_circuit(&args.id, &params)?, None),
    };
    match fmt {
        Format::Json => emit_json(
            out,
            &json!({ "entry": entry, "circuit": circuit, "claimed": claimed }),
        ),
        Format::Text => {
            let mut s = format!("# {}: {}\n", entry.id, entry.description);
            if let Some(note) = entry.discrepancy {
                let _ = writeln!(s, "# known discrepancy: {note}");
            }
            s.push_str(&circuit.to_text());
            out.write_all(s.as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

fn cmd_circuit_run(args: &RunArgs, fmt: Format, out: &mut dyn Write) -> CmdResult {
    let text = std::fs::read_to_string(&args.file)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.file.display())))?;
    let circuit = parse_circuit(&text)?;
    let input = match &args.state {
        Some(t) => {
            let v = parse_complex_list(t, Some(circuit.dim()))
                .map_err(|m| Failure::usage(format!("--state: {m}")))?;
            StateVec::new(v)?
        }
        None => StateVec::zero_state(circuit.width)?,
    };
    let output = circuit.apply(&input)?;
    match fmt {
        Format::Json => emit_json(out, &json!({ "circuit": circuit, "output": output })),
        Format::Text => {
            let mut s = String::new();
            for (i, a) in output.amps().iter().enumerate() {
                let _ = writeln!(s, "|{:0w$b}⟩  {}", i, fmt_c64(*a), w = circuit.width);
            }
            out.write_all(s.as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

fn cmd_entanglement(args: &EntanglementArgs, fmt: Format, out: &mut dyn Write) -> CmdResult {
    let v = parse_complex_list(&args.state, Some(4))
        .map_err(|m| Failure::usage(format!("--state: {m}")))?;
    let state = TwoQubitState::new([v[0], v[1], v[2], v[3]]).normalize()?;
    let det = crate::basis::entanglement_determinant(&state);
    let entangled = det.norm() > ENTANGLEMENT_THRESHOLD;
    let verdict = if entangled { "entangled" } else { "product" };
    match fmt {
        Format::Json => emit_json(
            out,
            &json!({
                "state": state.c,
                "det": det,
                "abs_det": det.norm(),
                "threshold": ENTANGLEMENT_THRESHOLD,
                "verdict": verdict,
            }),
        ),
        Format::Text => {
            writeln!(
                out,
                "det = {}  |det| = {:.6e}  {verdict}",
                fmt_c64(det),
                det.norm()
            )?;
            Ok(EXIT_OK)
        }
    }
}
