//! Command-line surface of `hopfcert`.
//!
//! [`run_command`] takes the arguments after the program name and returns
//! the exit code and the full output. Files are read from disk when they
//! exist; otherwise a path ending in `corpus/NAME` (or a bare corpus-relative
//! name) is served from the embedded corpus.

pub mod corpus;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use hopfcert::chain::{self, Variant};
use hopfcert::coaction::{coaction_check, Coaction};
use hopfcert::dsl::{parse_presentation, parse_presentation_unchecked, ParsedPresentation};
use hopfcert::duality::{derive, parse_manifest, DualityStore};
use hopfcert::exactseq::{certify, tor0_iso_check, SequenceFile, SequenceSpec, Tor0Variant};
use hopfcert::homcalc::{ext_certificate, verify_resolution, ExtVerdict, Resolution};
use hopfcert::hopf::{adjoint_stability, check_hopf_axioms, HopfPresentation, SweedlerContext};
use hopfcert::report::Report;
use hopfcert::rewrite::CompletionStatus;
use hopfcert::{Error, Result};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_REFUSED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Kv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Identity {
    Star,
    Harpoon,
    Phi,
    PhiLinearity,
    Uv,
    Hmod,
    Tor0,
    Adjoint,
}

#[derive(Parser, Debug)]
#[command(name = "hopfcert", version, about = "Exact certificates for finitely presented Hopf algebras")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print the completed rewriting system.
    Complete {
        file: String,
        /// Refuse unless the system is certified up to this degree.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Normal-word basis up to a degree.
    Basis {
        file: String,
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
    /// Hopf axioms on the window.
    CheckHopf {
        file: String,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Exact-sequence battery for a sequence file.
    CheckExact {
        file: String,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        slack: Option<usize>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Windowed Ext^i(k, A) from the file's resolution block.
    Ext {
        file: String,
        #[arg(long = "i")]
        index: usize,
        /// `LO..HI` or `HI`.
        #[arg(long, default_value = "0..6")]
        window: String,
        #[arg(long, default_value_t = 1)]
        slack: usize,
    },
    /// Chain-level identities along a sequence.
    VerifyChain {
        file: String,
        #[arg(value_enum)]
        identity: Identity,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Resolution index for the Hom-level identities.
        #[arg(long, default_value_t = 0)]
        q: usize,
        #[arg(long, default_value = "0..4")]
        window: String,
        #[arg(long, default_value_t = 1)]
        slack: usize,
        /// Run the paired negative control instead.
        #[arg(long)]
        corrupt: bool,
    },
    /// Duality facts.
    Duality {
        #[command(subcommand)]
        cmd: DualityCmd,
    },
    /// Comodule-algebra axioms of a coaction block.
    CoactionCheck {
        file: String,
        #[arg(long, default_value_t = 4)]
        degree: usize,
    },
}

#[derive(Subcommand, Debug)]
enum DualityCmd {
    /// Run a manifest and print the resulting ledger.
    Derive {
        manifest: String,
        /// Also write the ledger to this file.
        #[arg(long)]
        ledger: Option<String>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Provenance tree of one fact.
    Explain {
        algebra: String,
        #[arg(long, default_value = "corpus/manifest.txt")]
        manifest: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

/// Exit code and everything the command printed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

pub fn run_command<S: AsRef<str>>(args: &[S]) -> Outcome {
    let argv = std::iter::once("hopfcert").chain(args.iter().map(AsRef::as_ref));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            return Outcome { code, output: e.render().to_string() };
        }
    };
    match dispatch(&cli) {
        Ok(o) => o,
        Err(CliError::Usage(msg)) => Outcome { code: EXIT_USAGE, output: format!("usage error: {msg}\n") },
        Err(CliError::Core(e)) => {
            let code = match &e {
                e if e.is_refusal() => EXIT_REFUSED,
                Error::Parse { .. } => EXIT_USAGE,
                _ => EXIT_FAIL,
            };
            let msg = if e.is_refusal() && !matches!(e, Error::Refusal(_)) {
                format!("refused: {e}\n")
            } else if e.is_refusal() {
                format!("{e}\n")
            } else {
                format!("error: {e}\n")
            };
            Outcome { code, output: msg }
        }
    }
}

enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Disk first, then the embedded corpus.
pub fn read_source(path: &str) -> std::result::Result<String, String> {
    if let Ok(t) = std::fs::read_to_string(path) {
        return Ok(t);
    }
    let norm = normalize(path);
    let rel = match norm.rfind("corpus/") {
        Some(i) => &norm[i + "corpus/".len()..],
        None => norm.as_str(),
    };
    corpus::get(rel).map(str::to_string).ok_or_else(|| format!("cannot read `{path}`"))
}

fn normalize(path: &str) -> String {
    let mut parts: Vec<&str> = Vec::new();
    for c in path.split('/') {
        match c {
            "" | "." => {}
            ".." if parts.last().is_some_and(|p| *p != "..") => {
                parts.pop();
            }
            other => parts.push(other),
        }
    }
    let joined = parts.join("/");
    if path.starts_with('/') {
        format!("/{joined}")
    } else {
        joined
    }
}

fn join(dir: &str, name: &str) -> String {
    if name.starts_with('/') || dir.is_empty() {
        name.to_string()
    } else {
        normalize(&format!("{dir}/{name}"))
    }
}

fn parent(path: &str) -> String {
    Path::new(path).parent().map(|p| p.to_string_lossy().into_owned()).unwrap_or_default()
}

fn read(path: &str) -> CliResult<String> {
    read_source(path).map_err(CliError::Usage)
}

fn load_checked(path: &str) -> Result<ParsedPresentation> {
    let text = read_source(path).map_err(Error::Semantic)?;
    parse_presentation(&text)
}

fn parse_window(s: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Usage(format!("bad window `{s}`, expected LO..HI or HI"));
    match s.split_once("..") {
        Some((lo, hi)) => {
            let lo = lo.trim().parse().map_err(|_| bad())?;
            let hi = hi.trim().parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            Ok((lo, hi))
        }
        None => Ok((0, s.trim().parse().map_err(|_| bad())?)),
    }
}

fn render(rep: &Report, format: Format) -> Outcome {
    let output = match format {
        Format::Text => rep.render_text(),
        Format::Kv => rep.render_kv(),
    };
    Outcome { code: if rep.passed() { EXIT_PASS } else { EXIT_FAIL }, output }
}

/// A sequence file with its three presentations (and their resolution
/// blocks) loaded relative to the file.
struct LoadedSequence {
    seq: SequenceSpec,
    parsed: BTreeMap<String, ParsedPresentation>,
}

impl LoadedSequence {
    fn load(path: &str) -> CliResult<Self> {
        let sf = SequenceFile::parse(&read(path)?)?;
        let dir = parent(path);
        let mut parsed: BTreeMap<String, ParsedPresentation> = BTreeMap::new();
        let mut arcs: BTreeMap<String, Arc<HopfPresentation>> = BTreeMap::new();
        let seq = sf.build(&mut |name: &str| {
            let full = join(&dir, name);
            if let Some(a) = arcs.get(&full) {
                return Ok(a.clone());
            }
            let text = read_source(&full).map_err(Error::Semantic)?;
            let p = if sf.checked { parse_presentation(&text)? } else { parse_presentation_unchecked(&text)? };
            let a = Arc::new(p.hopf.clone());
            parsed.insert(a.name().to_string(), p);
            arcs.insert(full, a.clone());
            Ok(a)
        })?;
        Ok(LoadedSequence { seq, parsed })
    }

    fn resolution(&self, which: &Arc<HopfPresentation>) -> Result<Resolution> {
        let spec = self
            .parsed
            .get(which.name())
            .and_then(|p| p.file.resolution.clone())
            .ok_or_else(|| Error::refusal(format!("`{}` has no resolution block", which.name())))?;
        Resolution::from_spec(which.clone(), &spec)
    }
}

fn dispatch(cli: &Cli) -> CliResult<Outcome> {
    let format = cli.format;
    match &cli.cmd {
        Cmd::Complete { file, degree } => {
            let p = parse_presentation_unchecked(&read(file)?)?;
            let rs = p.hopf.rewrite();
            if let Some(d) = degree {
                rs.require_degree(*d)?;
            }
            let output = match format {
                Format::Text => rs.display().to_string(),
                Format::Kv => {
                    let mut s = String::new();
                    let names: Vec<&str> = rs.alphabet().symbols().iter().map(|g| g.name.as_str()).collect();
                    writeln!(s, "algebra={}", p.hopf.name()).unwrap();
                    writeln!(s, "order={}", names.join("<")).unwrap();
                    writeln!(s, "status={}", status_key(rs.status())).unwrap();
                    writeln!(s, "rules={}", rs.rules().len()).unwrap();
                    for (k, r) in rs.rules().iter().enumerate() {
                        writeln!(s, "rule.{k}={} -> {}", rs.alphabet().word_string(&r.lhs), r.rhs.display(rs.alphabet()))
                            .unwrap();
                    }
                    s
                }
            };
            Ok(Outcome { code: EXIT_PASS, output })
        }
        Cmd::Basis { file, degree } => {
            let p = parse_presentation_unchecked(&read(file)?)?;
            let rs = p.hopf.rewrite();
            let basis = rs.degree_basis(*degree)?;
            let counts = basis.count_by_degree();
            let mut s = String::new();
            match format {
                Format::Text => {
                    writeln!(s, "basis of {} up to degree {degree}", p.hopf.name()).unwrap();
                    for (d, n) in counts.iter().enumerate() {
                        let words: Vec<String> = basis
                            .basis
                            .iter()
                            .filter(|w| w.degree() == d)
                            .map(|w| rs.alphabet().word_string(w))
                            .collect();
                        writeln!(s, "  degree {d}: {n}  {}", words.join(" ")).unwrap();
                    }
                    writeln!(s, "  total: {}", basis.len()).unwrap();
                }
                Format::Kv => {
                    writeln!(s, "algebra={}", p.hopf.name()).unwrap();
                    for (d, n) in counts.iter().enumerate() {
                        writeln!(s, "degree.{d}={n}").unwrap();
                    }
                    writeln!(s, "total={}", basis.len()).unwrap();
                }
            }
            Ok(Outcome { code: EXIT_PASS, output: s })
        }
        Cmd::CheckHopf { file, degree, seed, samples } => {
            let p = parse_presentation_unchecked(&read(file)?)?;
            let ctx = SweedlerContext::new(*degree, *seed).with_samples(*samples);
            Ok(render(&check_hopf_axioms(&p.hopf, &ctx)?, format))
        }
        Cmd::CheckExact { file, degree, seed, slack, samples } => {
            let ls = LoadedSequence::load(file)?;
            let d = degree.unwrap_or(ls.seq.degree);
            let slack = slack.unwrap_or_else(|| ls.seq.default_slack());
            let ctx = SweedlerContext::new(d.min(3), *seed).with_samples(*samples);
            Ok(render(&certify(&ls.seq, d, slack, &ctx)?, format))
        }
        Cmd::Ext { file, index, window, slack } => {
            let (lo, hi) = parse_window(window)?;
            let p = parse_presentation(&read(file)?)?;
            let spec = p
                .file
                .resolution
                .clone()
                .ok_or_else(|| Error::refusal(format!("`{}` has no resolution block", p.hopf.name())))?;
            let a = Arc::new(p.hopf);
            let res = Resolution::from_spec(a.clone(), &spec)?;
            let check = verify_resolution(&res, hi, *slack)?;
            if !check.passed() {
                return Ok(render(&check, format));
            }
            let cert = ext_certificate(&res.hom_complex(), *index, lo, hi, *slack)?;
            let code = match cert.verdict {
                ExtVerdict::Inconclusive(_) => EXIT_REFUSED,
                _ => EXIT_PASS,
            };
            let output = match format {
                Format::Text => cert.render(&a),
                Format::Kv => {
                    let mut s = String::new();
                    writeln!(s, "algebra={}", cert.algebra).unwrap();
                    writeln!(s, "index={}", cert.index).unwrap();
                    writeln!(s, "window={}..{}", cert.window.0, cert.window.1).unwrap();
                    writeln!(s, "slack={}", cert.slack).unwrap();
                    writeln!(s, "interior_top={}", cert.top).unwrap();
                    for (d, n) in &cert.dims_per_degree {
                        writeln!(s, "dim.{d}={n}").unwrap();
                    }
                    let totals: Vec<String> = cert.totals.iter().map(usize::to_string).collect();
                    writeln!(s, "totals={}", totals.join(",")).unwrap();
                    writeln!(s, "verdict={}", cert.verdict.label()).unwrap();
                    if let ExtVerdict::OneDimensional(d) = &cert.verdict {
                        for (l, x) in &d.character {
                            writeln!(s, "character.{}={x}", a.alphabet().name(*l)).unwrap();
                        }
                        for (l, x) in &d.nakayama {
                            writeln!(s, "nakayama.{}={}", a.alphabet().name(*l), a.show(x)).unwrap();
                        }
                    }
                    s
                }
            };
            Ok(Outcome { code, output })
        }
        Cmd::VerifyChain { file, identity, seed, degree, samples, q, window, slack, corrupt } => {
            let ls = LoadedSequence::load(file)?;
            let seq = &ls.seq;
            let ctx = SweedlerContext::new(*degree, *seed).with_samples(*samples);
            let variant = if *corrupt { Variant::Corrupted } else { Variant::Faithful };
            let rep = match identity {
                Identity::Star => chain::star_action_check(seq, &ls.resolution(seq.a())?, *q, &ctx, variant)?,
                Identity::Harpoon => chain::harpoon_action_check(seq, &ls.resolution(seq.a())?, *q, &ctx, variant)?,
                Identity::Phi => {
                    let rank = ls.resolution(seq.a())?.ranks().get(*q).copied().unwrap_or(1).max(1);
                    chain::phi_map_check(seq, rank, &ctx, variant)?
                }
                Identity::PhiLinearity => {
                    chain::phi_linearity_check(seq, &ls.resolution(seq.a())?, *q, &ctx, variant)?
                }
                Identity::Uv => chain::uv_iso_check(seq, &ctx, variant)?,
                Identity::Hmod => {
                    let (_, hi) = parse_window(window)?;
                    let (res, res_b) = (ls.resolution(seq.a())?, ls.resolution(seq.b())?);
                    chain::hmod_iso_check(seq, &res, &res_b, *q, hi, *slack, &ctx, variant)?
                }
                Identity::Tor0 => {
                    let v = if *corrupt { Tor0Variant::Counit } else { Tor0Variant::Faithful };
                    let mut rep = Report::new(format!("Tor_0 over B of A (x) V for {}", seq.name))
                        .with("degree", *degree)
                        .with("slack", *slack)
                        .with("dim V", 2);
                    for c in tor0_iso_check(seq, 2, *degree, *slack, v)? {
                        rep.push(c);
                    }
                    rep
                }
                Identity::Adjoint => {
                    if *corrupt {
                        return Err(CliError::Usage("`adjoint` has no corrupted form; run it on a bad sequence file".into()));
                    }
                    let b_window = seq.b_window(*degree)?;
                    adjoint_stability(seq.a(), &b_window, &|x| seq.in_b(x), &ctx)?
                }
            };
            Ok(render(&rep, format))
        }
        Cmd::Duality { cmd } => match cmd {
            DualityCmd::Derive { manifest, ledger, seed } => {
                let store = run_manifest(manifest, *seed)?;
                let text = store.ledger_text();
                if let Some(path) = ledger {
                    std::fs::write(path, &text).map_err(|e| CliError::Usage(format!("cannot write `{path}`: {e}")))?;
                }
                let mut s = String::new();
                match format {
                    Format::Text => {
                        s.push_str(&text);
                        for f in store.facts() {
                            writeln!(s, "dim({})={}", f.algebra(), f.dimension()).unwrap();
                        }
                    }
                    Format::Kv => {
                        for f in store.facts() {
                            writeln!(s, "fact.{}.dimension={}", f.algebra(), f.dimension()).unwrap();
                            writeln!(s, "fact.{}.flavor={}", f.algebra(), f.flavor().label()).unwrap();
                            writeln!(s, "fact.{}.provenance={}", f.algebra(), f.provenance().summary()).unwrap();
                        }
                    }
                }
                Ok(Outcome { code: EXIT_PASS, output: s })
            }
            DualityCmd::Explain { algebra, manifest, seed } => {
                let store = run_manifest(manifest, *seed)?;
                Ok(Outcome { code: EXIT_PASS, output: store.explain(algebra)? })
            }
        },
        Cmd::CoactionCheck { file, degree } => {
            let p = parse_presentation(&read(file)?)?;
            let spec = p
                .file
                .coaction
                .clone()
                .ok_or_else(|| Error::refusal(format!("`{}` has no coaction block", p.hopf.name())))?;
            let c = Coaction::new(Arc::new(p.hopf), &spec)?;
            Ok(render(&coaction_check(&c, *degree)?, format))
        }
    }
}

fn status_key(s: CompletionStatus) -> String {
    match s {
        CompletionStatus::Confluent => "confluent".into(),
        CompletionStatus::CompleteUpToDegree(d) => format!("complete_up_to_{d}"),
    }
}

fn run_manifest(path: &str, seed: u64) -> CliResult<DualityStore> {
    let entries = parse_manifest(&read(path)?)?;
    let dir = parent(path);
    let mut load = |f: &str| load_checked(&join(&dir, f));
    let mut read_rel = |f: &str| read_source(&join(&dir, f)).map_err(Error::Semantic);
    let (store, _) = derive(&entries, &mut load, &mut read_rel, seed)?;
    Ok(store)
}
