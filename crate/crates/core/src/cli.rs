//! Command-line front end.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::corrterm::{self, DEntry};
use crate::discform::{self, disc_group, DiscGroup, GroupElement, Limits, Subgroup};
use crate::error::{Error, Result};
use crate::exactmat::IntMatrix;
use crate::lattice::{make_lattice, parse_gram_json, DualVector, Lattice, Orientation};
use crate::oracle;
use crate::overlattice::overlattice;
use crate::rational::{self, Rat};
use crate::topo::{self, DInvariantTable, ObstructionReport, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "latcorr", version, about = "Lattice correction terms and embedding obstructions")]
pub struct RunConfig {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Cross-check against the brute-force oracles and fail on disagreement
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Largest discriminant group to enumerate
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_group: Option<u64>,
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Operations on a single Gram matrix
    #[command(subcommand)]
    Lattice(LatticeCommand),
    /// Fillings, linking forms and d-invariant tables
    #[command(subcommand)]
    Topo(TopoCommand),
}

#[derive(Debug, Subcommand)]
pub enum LatticeCommand {
    Info { file: PathBuf },
    Metabolizers { file: PathBuf },
    Dset { file: PathBuf },
    /// Exit 0 if the lattice embeds in the standard lattice of its rank, 2 if not
    EmbedCheck { file: PathBuf },
    Dinv { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum TopoCommand {
    LinkingForm {
        file: PathBuf,
    },
    RbObstruction {
        #[arg(long)]
        dtable: PathBuf,
    },
    FillingObstruction {
        #[arg(long)]
        dtable: PathBuf,
    },
    Chain {
        #[arg(long)]
        filling: PathBuf,
        #[arg(long)]
        dtable: PathBuf,
    },
}

impl RunConfig {
    pub fn limits(&self) -> Limits {
        let mut l = Limits { threads: self.threads as usize, ..Limits::default() };
        if let Some(m) = self.max_group {
            l.max_group = m;
        }
        l
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

// -- report bodies -- //

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleStatus {
    Agree,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub status: OracleStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfoReport {
    pub rank: usize,
    pub definiteness: String,
    pub orientation: Orientation,
    pub discriminant: String,
    pub orders: Vec<u64>,
    #[serde(with = "rational::serde_rat::matrix")]
    pub pairing: Vec<Vec<Rat>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetabolizersReport {
    pub orders: Vec<u64>,
    pub metabolizers: Vec<Subgroup>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DSetReport {
    pub orientation: Orientation,
    pub entries: Vec<DEntry>,
    /// Distinct values of `D`, ascending.
    #[serde(with = "rational::serde_rat::vec")]
    pub values: Vec<Rat>,
    pub embeds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DinvReport {
    pub rank: usize,
    pub min_char_square: String,
    #[serde(with = "rational::serde_rat")]
    pub d: Rat,
    pub witness: DualVector,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkingReport {
    pub orientation: Orientation,
    pub orders: Vec<u64>,
    #[serde(with = "rational::serde_rat::matrix")]
    pub pairing: Vec<Vec<Rat>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Body {
    Info(InfoReport),
    Metabolizers(MetabolizersReport),
    DSet(DSetReport),
    Dinv(DinvReport),
    Linking(LinkingReport),
    Obstruction(ObstructionReport),
}

/// What a subcommand prints in json mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub command: String,
    pub report: Body,
    pub oracle: Option<OracleCheck>,
}

// -- entry point -- //

pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: e.to_string(), stderr: String::new() }
                }
                _ => {
                    let msg = e.to_string();
                    let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
                    Outcome { code: 1, stdout: String::new(), stderr: format!("error: USAGE: {first}\n") }
                }
            };
        }
    };
    match execute(&cfg) {
        Ok((code, env)) => {
            let stdout = match cfg.format {
                Format::Json => serde_json::to_string_pretty(&env).expect("reports serialize") + "\n",
                Format::Text => render_text(&env),
            };
            Outcome { code, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {}: {}\n", e.code(), one_line(&e)) },
    }
}

fn one_line(e: &Error) -> String {
    e.to_string().replace('\n', " ")
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_gram(path: &Path) -> Result<IntMatrix> {
    parse_gram_json(&read(path)?)
}

fn load_lattice(path: &Path) -> Result<Lattice> {
    make_lattice(load_gram(path)?)
}

fn load_table(path: &Path, limits: &Limits) -> Result<DInvariantTable> {
    DInvariantTable::from_json(&read(path)?, limits)
}

fn execute(cfg: &RunConfig) -> Result<(i32, Envelope)> {
    let limits = cfg.limits();
    let env = |command: &str, report: Body, oracle: Option<OracleCheck>| Envelope {
        command: command.to_string(),
        report,
        oracle,
    };
    match &cfg.command {
        Command::Lattice(cmd) => match cmd {
            LatticeCommand::Info { file } => {
                let l = load_lattice(file)?;
                let g = disc_group(&l)?;
                let definiteness = match l.orientation() {
                    Orientation::AsGiven => "positive-definite",
                    Orientation::Negated => "negative-definite",
                };
                let report = InfoReport {
                    rank: l.rank(),
                    definiteness: definiteness.into(),
                    orientation: l.orientation(),
                    discriminant: l.discriminant().to_string(),
                    orders: g.orders().to_vec(),
                    pairing: g.pairing().to_vec(),
                };
                Ok((0, env("lattice info", Body::Info(report), None)))
            }
            LatticeCommand::Metabolizers { file } => {
                let l = load_lattice(file)?;
                let g = disc_group(&l)?;
                let ms = discform::metabolizers_of(&g, &limits)?;
                let check = cfg.oracle.then(|| check_metabolizers(&g, &ms)).transpose()?;
                let report = MetabolizersReport { orders: g.orders().to_vec(), metabolizers: ms };
                Ok((0, env("lattice metabolizers", Body::Metabolizers(report), check)))
            }
            LatticeCommand::Dset { file } | LatticeCommand::EmbedCheck { file } => {
                let l = load_lattice(file)?;
                let d = corrterm::d_set(&l, &limits)?;
                let mut values: Vec<Rat> = d.values();
                values.sort();
                values.dedup();
                let check = if cfg.oracle { Some(check_dset(&l, &d.entries, d.contains_zero)?) } else { None };
                let embeds = d.contains_zero;
                let report = DSetReport { orientation: l.orientation(), entries: d.entries, values, embeds };
                let (name, code) = match cmd {
                    LatticeCommand::Dset { .. } => ("lattice dset", 0),
                    _ => ("lattice embed-check", if embeds { 0 } else { 2 }),
                };
                Ok((code, env(name, Body::DSet(report), check)))
            }
            LatticeCommand::Dinv { file } => {
                let l = load_lattice(file)?;
                let r = corrterm::min_char_square(&l)?;
                let d = corrterm::d_lattice(&l)?;
                let check = cfg.oracle.then(|| check_dinv(&l, &r.minimum, &d)).transpose()?;
                let report =
                    DinvReport { rank: l.rank(), min_char_square: r.minimum.to_string(), d, witness: r.witness };
                Ok((0, env("lattice dinv", Body::Dinv(report), check)))
            }
        },
        Command::Topo(cmd) => match cmd {
            TopoCommand::LinkingForm { file } => {
                let f = topo::linking_form_of_filling(&load_gram(file)?)?;
                let report = LinkingReport {
                    orientation: f.orientation(),
                    orders: f.boundary_group.orders().to_vec(),
                    pairing: f.linking,
                };
                Ok((0, env("topo linking-form", Body::Linking(report), None)))
            }
            TopoCommand::RbObstruction { dtable } => {
                let t = load_table(dtable, &limits)?;
                let r = topo::rb_correction_obstruction(&t, &limits)?;
                let check = cfg.oracle.then(|| check_report_metabolizers(&t.group, &r)).transpose()?;
                Ok((r.verdict.exit_code(), env("topo rb-obstruction", Body::Obstruction(r), check)))
            }
            TopoCommand::FillingObstruction { dtable } => {
                let t = load_table(dtable, &limits)?;
                let r = topo::definite_filling_obstruction(&t, &limits)?;
                let check = cfg.oracle.then(|| check_report_metabolizers(&t.group, &r)).transpose()?;
                Ok((r.verdict.exit_code(), env("topo filling-obstruction", Body::Obstruction(r), check)))
            }
            TopoCommand::Chain { filling, dtable } => {
                let q = load_gram(filling)?;
                let t = load_table(dtable, &limits)?;
                let r = topo::chain_check(&q, &t, &limits)?;
                let check = if cfg.oracle {
                    let l = make_lattice(q)?;
                    Some(check_report_metabolizers(&disc_group(&l)?, &r)?)
                } else {
                    None
                };
                let code = if r.verdict == Verdict::Obstructed { 2 } else { 0 };
                Ok((code, env("topo chain", Body::Obstruction(r), check)))
            }
        },
    }
}

// -- oracle cross-checks -- //

fn skipped(e: Error) -> Result<OracleCheck> {
    match e {
        Error::SearchTooLarge(m) => Ok(OracleCheck { status: OracleStatus::Skipped, detail: m }),
        other => Err(other),
    }
}

fn agree(detail: impl Into<String>) -> Result<OracleCheck> {
    Ok(OracleCheck { status: OracleStatus::Agree, detail: detail.into() })
}

fn mismatch(what: String) -> Error {
    Error::OracleMismatch(what)
}

fn check_metabolizers(g: &DiscGroup, ms: &[Subgroup]) -> Result<OracleCheck> {
    match oracle::brute_metabolizers(g) {
        Ok(brute) => {
            let fast: Vec<_> = ms.iter().map(|m| &m.elements).collect();
            let slow: Vec<_> = brute.iter().map(|m| &m.elements).collect();
            if fast != slow {
                return Err(mismatch(format!("{} metabolizers found, oracle finds {}", fast.len(), slow.len())));
            }
            agree(format!("{} metabolizers confirmed by subgroup enumeration", ms.len()))
        }
        Err(e) => skipped(e),
    }
}

fn check_report_metabolizers(g: &DiscGroup, r: &ObstructionReport) -> Result<OracleCheck> {
    let ms: Vec<Subgroup> = r.evidence.iter().map(|e| e.metabolizer.clone()).collect();
    check_metabolizers(g, &ms)
}

fn check_dset(l: &Lattice, entries: &[DEntry], embeds: bool) -> Result<OracleCheck> {
    let g = disc_group(l)?;
    let ms: Vec<Subgroup> = entries.iter().map(|e| e.metabolizer.clone()).collect();
    let mut notes = Vec::new();
    match check_metabolizers(&g, &ms)? {
        OracleCheck { status: OracleStatus::Skipped, detail } => notes.push(format!("metabolizers skipped: {detail}")),
        OracleCheck { detail, .. } => notes.push(detail),
    }
    let mut skipped_any = false;
    for e in entries {
        let u = overlattice(l, &g, &e.metabolizer)?.to_lattice()?;
        let fast: BigInt = e.min_square.parse().expect("integer");
        match oracle::brute_char_min(&u, &fast) {
            Ok(Some(slow)) if slow == fast => {}
            Ok(other) => {
                return Err(mismatch(format!("characteristic minimum {fast}, oracle finds {other:?}")));
            }
            Err(Error::SearchTooLarge(m)) => {
                skipped_any = true;
                notes.push(format!("char-min skipped: {m}"));
            }
            Err(e) => return Err(e),
        }
    }
    match oracle::brute_embed(l) {
        Ok(w) => {
            if w.is_some() != embeds {
                return Err(mismatch(format!("embedding test says {embeds}, exhaustive search says {}", w.is_some())));
            }
            notes.push("embedding confirmed by exhaustive search".into());
        }
        Err(Error::SearchTooLarge(m)) => {
            skipped_any = true;
            notes.push(format!("embedding search skipped: {m}"));
        }
        Err(e) => return Err(e),
    }
    let status = if skipped_any { OracleStatus::Skipped } else { OracleStatus::Agree };
    Ok(OracleCheck { status, detail: notes.join("; ") })
}

fn check_dinv(l: &Lattice, min: &BigInt, d: &Rat) -> Result<OracleCheck> {
    match oracle::brute_char_min(l, min) {
        Ok(Some(slow)) if &slow == min => {}
        Ok(other) => return Err(mismatch(format!("characteristic minimum {min}, oracle finds {other:?}"))),
        Err(e) => return skipped(e),
    }
    match oracle::is_standard(l) {
        Ok(std) => {
            if std != num_traits::Zero::is_zero(d) {
                return Err(mismatch(format!("d = {d} but standard-lattice test says {std}")));
            }
            agree("characteristic minimum and standard-lattice test confirmed")
        }
        Err(e) => skipped(e),
    }
}

// -- text rendering -- //

fn elem(x: &GroupElement) -> String {
    match x.0.as_slice() {
        [a] => a.to_string(),
        xs => format!("({})", xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")),
    }
}

fn subgroup(h: &Subgroup) -> String {
    format!("{{{}}}", h.elements.iter().map(elem).collect::<Vec<_>>().join(", "))
}

fn rats(v: &[Rat]) -> String {
    v.iter().map(rational::format).collect::<Vec<_>>().join(", ")
}

fn orders(o: &[u64]) -> String {
    if o.is_empty() {
        "trivial".into()
    } else {
        o.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" + ")
    }
}

fn render_text(env: &Envelope) -> String {
    let mut s = String::new();
    let w = &mut s;
    match &env.report {
        Body::Info(r) => {
            let _ = writeln!(w, "rank: {}", r.rank);
            let _ = writeln!(w, "definiteness: {}", r.definiteness);
            let _ = writeln!(w, "orientation: {}", orientation(r.orientation));
            let _ = writeln!(w, "discriminant: {}", r.discriminant);
            let _ = writeln!(w, "discriminant group: {}", orders(&r.orders));
            let _ = writeln!(w, "pairing: {}", topo::render_pairing(&r.pairing));
        }
        Body::Metabolizers(r) => {
            let _ = writeln!(w, "discriminant group: {}", orders(&r.orders));
            let _ = writeln!(w, "metabolizers: {}", r.metabolizers.len());
            for m in &r.metabolizers {
                let _ = writeln!(w, "  {}", subgroup(m));
            }
        }
        Body::DSet(r) => {
            let _ = writeln!(w, "orientation: {}", orientation(r.orientation));
            for e in &r.entries {
                let _ = writeln!(
                    w,
                    "metabolizer {}: d = {} (min char square {}, witness [{}])",
                    subgroup(&e.metabolizer),
                    rational::format(&e.d),
                    e.min_square,
                    rats(&e.witness.0)
                );
            }
            let _ = writeln!(w, "D = {{{}}}", rats(&r.values));
            let _ = writeln!(w, "embeds in standard lattice: {}", if r.embeds { "yes" } else { "no" });
        }
        Body::Dinv(r) => {
            let _ = writeln!(w, "rank: {}", r.rank);
            let _ = writeln!(w, "min char square: {}", r.min_char_square);
            let _ = writeln!(w, "d = {}", rational::format(&r.d));
            let _ = writeln!(w, "witness: [{}]", rats(&r.witness.0));
        }
        Body::Linking(r) => {
            let _ = writeln!(w, "orientation: {}", orientation(r.orientation));
            let _ = writeln!(w, "H1: {}", orders(&r.orders));
            let _ = writeln!(w, "linking pairing: {}", topo::render_pairing(&r.pairing));
        }
        Body::Obstruction(r) => render_obstruction(w, r),
    }
    if let Some(o) = &env.oracle {
        let status = match o.status {
            OracleStatus::Agree => "agree",
            OracleStatus::Skipped => "skipped",
        };
        let _ = writeln!(w, "oracle: {status} ({})", o.detail);
    }
    s
}

fn orientation(o: Orientation) -> &'static str {
    match o {
        Orientation::AsGiven => "as given",
        Orientation::Negated => "negated (input was negative definite)",
    }
}

fn render_obstruction(w: &mut String, r: &ObstructionReport) {
    let verdict = match r.verdict {
        Verdict::Obstructed => "obstructed",
        Verdict::Unobstructed => "unobstructed",
        Verdict::Inconclusive => "inconclusive",
    };
    let _ = writeln!(w, "verdict: {verdict}");
    for (i, e) in r.evidence.iter().enumerate() {
        let _ = write!(w, "metabolizer #{i} {}", subgroup(&e.metabolizer));
        if !e.d_values.is_empty() {
            let vals: Vec<Rat> = e.d_values.iter().map(|c| c.value.clone()).collect();
            let _ = write!(w, ": d-values {{{}}}", rats(&vals));
        }
        if let Some(d) = &e.d_overlattice {
            let _ = write!(w, ", d_U(M) = {}", rational::format(d));
        }
        if let Some(c) = &e.constrained_min {
            let _ = write!(w, ", constrained min = {}", rational::format(c));
        }
        if e.constrained_min.is_some() {
            let chain: Vec<String> = e.chain().iter().map(rational::format).collect();
            let ok = if e.failed_link().is_none() { "holds" } else { "fails" };
            let _ = write!(w, ", chain {} {ok}", chain.join(" >= "));
        }
        let _ = writeln!(w);
    }
    if let Some(e) = r.embeds {
        let _ = writeln!(w, "embeds in standard lattice: {}", if e { "yes" } else { "no" });
    }
    for line in [&r.reason, &r.orientation_note, &r.caveat].into_iter().flatten() {
        let _ = writeln!(w, "note: {line}");
    }
}
