//! Homological-duality facts with provenance, and the rules that combine
//! them along exact sequences.
//!
//! Base facts come from a verified finite free resolution of the trivial
//! module (which witnesses smoothness) together with windowed Ext
//! certificates. The extension rule adds dimensions along `B → A → H` once
//! the sequence's hypotheses are recorded in a [`HypothesisLedger`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactseq::{certify, SequenceFile};
use crate::homcalc::{ext_certificate, verify_resolution, ExtCertificate, ExtVerdict, Resolution};
use crate::hopf::{HopfPresentation, SweedlerContext};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Flavor {
    Duality,
    /// Nakayama data `(generator, σ(generator))` when it was computed.
    TwistedCY(Option<Vec<(String, String)>>),
    CY,
}

impl Flavor {
    pub fn label(&self) -> &'static str {
        match self {
            Flavor::Duality => "Duality",
            Flavor::TwistedCY(_) => "TwistedCY",
            Flavor::CY => "CY",
        }
    }

    pub fn parse(s: &str) -> Option<Flavor> {
        match s {
            "Duality" => Some(Flavor::Duality),
            "TwistedCY" => Some(Flavor::TwistedCY(None)),
            "CY" => Some(Flavor::CY),
            _ => None,
        }
    }

    fn is_twisted_cy(&self) -> bool {
        matches!(self, Flavor::TwistedCY(_) | Flavor::CY)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    ComputedCertificate {
        resolution: String,
        certificates: Vec<String>,
    },
    Cited(String),
    ComposedByExtension {
        sequence: String,
        sub: String,
        quotient: String,
    },
    /// Converse direction: the dimension of `derived` is `total − known`.
    SplitByExtension {
        sequence: String,
        total: String,
        known: String,
    },
}

impl Provenance {
    pub fn summary(&self) -> String {
        match self {
            Provenance::ComputedCertificate { resolution, certificates } => {
                format!("computed({resolution}; {})", certificates.join(", "))
            }
            Provenance::Cited(c) => format!("cited({c})"),
            Provenance::ComposedByExtension { sequence, sub, quotient } => {
                format!("extension({sequence}: {sub} + {quotient})")
            }
            Provenance::SplitByExtension { sequence, total, known } => {
                format!("converse({sequence}: {total} - {known})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityFact {
    algebra: String,
    dimension: usize,
    flavor: Flavor,
    provenance: Provenance,
}

impl DualityFact {
    pub fn algebra(&self) -> &str {
        &self.algebra
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn flavor(&self) -> &Flavor {
        &self.flavor
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// The only way to build an extension fact: the dimension is the sum.
    fn composed(algebra: &str, sequence: &str, sub: &DualityFact, quotient: &DualityFact) -> DualityFact {
        let flavor = if sub.flavor.is_twisted_cy() && quotient.flavor.is_twisted_cy() {
            Flavor::TwistedCY(None)
        } else {
            Flavor::Duality
        };
        DualityFact {
            algebra: algebra.to_string(),
            dimension: sub.dimension + quotient.dimension,
            flavor,
            provenance: Provenance::ComposedByExtension {
                sequence: sequence.to_string(),
                sub: sub.algebra.clone(),
                quotient: quotient.algebra.clone(),
            },
        }
    }

    pub fn ledger_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}",
            self.algebra,
            self.dimension,
            self.flavor.label(),
            self.provenance.summary()
        )
    }
}

/// A verified resolution and Ext certificates for indices `0..=length`.
#[derive(Debug, Clone)]
pub struct CertBundle {
    pub algebra: String,
    pub ranks: Vec<usize>,
    pub resolution_report: Report,
    pub certificates: Vec<ExtCertificate>,
    /// Rendered twist data for every `OneDimensional` certificate, by index.
    pub twists: BTreeMap<usize, Twist>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Twist {
    pub trivial: bool,
    pub nakayama: Vec<(String, String)>,
}

impl CertBundle {
    /// Verifies `res` at `window` and computes every certificate.
    pub fn compute(res: &Resolution, window: usize, slack: usize) -> Result<CertBundle> {
        let report = verify_resolution(res, window, slack)?;
        let cx = res.hom_complex();
        let certificates = (0..=res.length())
            .map(|i| ext_certificate(&cx, i, 0, window, slack))
            .collect::<Result<Vec<ExtCertificate>>>()?;
        let a = res.algebra();
        let mut twists = BTreeMap::new();
        for c in &certificates {
            if let ExtVerdict::OneDimensional(data) = &c.verdict {
                let mut trivial = data.character.values().all(|x| x.is_one());
                let mut nakayama = Vec::new();
                for (l, p) in &data.nakayama {
                    let name = a.alphabet().name(*l).to_string();
                    trivial &= a.gen(&name).map(|g| &g == p).unwrap_or(false);
                    nakayama.push((name, a.show(p)));
                }
                twists.insert(c.index, Twist { trivial, nakayama });
            }
        }
        Ok(CertBundle {
            algebra: res.algebra().name().to_string(),
            ranks: res.ranks().to_vec(),
            resolution_report: report,
            certificates,
            twists,
        })
    }
}

/// Which hypotheses of the extension rule hold for one sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HypothesisLedger {
    pub sequence: String,
    pub b: String,
    pub a: String,
    pub h: String,
    /// Degree at which the exactness battery passed.
    pub exactness: Option<usize>,
    /// Free bases on both sides, from the freeness witness.
    pub freeness: Option<usize>,
    pub bijective_antipodes: bool,
    /// Whether cd(A) = cd(B) + cd(H) may be used to split a fact for `A`.
    pub cd_equality: bool,
}

impl HypothesisLedger {
    fn missing(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.exactness.is_none() {
            out.push("exact sequence of Hopf algebras");
        }
        if self.freeness.is_none() {
            out.push("faithfully flat as a left and right B-module");
        }
        if !self.bijective_antipodes {
            out.push("with bijective antipodes");
        }
        out
    }
}

/// The fact store, keyed by algebra id.
#[derive(Debug, Clone, Default)]
pub struct DualityStore {
    facts: BTreeMap<String, DualityFact>,
}

impl DualityStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, id: &str) -> Option<&DualityFact> {
        self.facts.get(id)
    }

    pub fn facts(&self) -> impl Iterator<Item = &DualityFact> {
        self.facts.values()
    }

    fn insert(&mut self, fact: DualityFact) -> Result<DualityFact> {
        if let Some(old) = self.facts.get(&fact.algebra) {
            if old.dimension != fact.dimension || old.flavor.label() != fact.flavor.label() {
                return Err(Error::refusal(format!(
                    "conflicting facts for `{}`: existing [{}] vs new [{}]",
                    fact.algebra,
                    old.ledger_line(),
                    fact.ledger_line()
                )));
            }
            return Ok(old.clone());
        }
        self.facts.insert(fact.algebra.clone(), fact.clone());
        Ok(fact)
    }

    /// A fact from a verified resolution and its Ext certificates.
    pub fn register_base_fact(&mut self, bundle: &CertBundle) -> Result<DualityFact> {
        if !bundle.resolution_report.passed() {
            let bad: Vec<&str> = bundle.resolution_report.failures().map(|c| c.name.as_str()).collect();
            return Err(Error::refusal(format!(
                "resolution of `{}` is not verified ({})",
                bundle.algebra,
                bad.join(", ")
            )));
        }
        let length = bundle.ranks.len() - 1;
        let mut nonzero = Vec::new();
        for i in 0..=length {
            let cert = bundle
                .certificates
                .iter()
                .find(|c| c.index == i)
                .ok_or_else(|| Error::refusal(format!("missing Ext^{i} certificate for `{}`", bundle.algebra)))?;
            match &cert.verdict {
                ExtVerdict::Inconclusive(why) => {
                    return Err(Error::refusal(format!("Ext^{i} of `{}` is inconclusive: {why}", bundle.algebra)))
                }
                v if v.is_nonzero() => nonzero.push(i),
                _ => {}
            }
        }
        let d = match nonzero.as_slice() {
            [d] => *d,
            [] => return Err(Error::refusal(format!("every Ext^i of `{}` vanishes on the window", bundle.algebra))),
            many => {
                return Err(Error::refusal(format!(
                    "Ext of `{}` is nonzero in several degrees {many:?}",
                    bundle.algebra
                )))
            }
        };
        let top = bundle.certificates.iter().find(|c| c.index == d).expect("present");
        let flavor = match &top.verdict {
            ExtVerdict::OneDimensional(_) => match bundle.twists.get(&d) {
                Some(t) if t.trivial => Flavor::CY,
                Some(t) => Flavor::TwistedCY(Some(t.nakayama.clone())),
                None => Flavor::TwistedCY(None),
            },
            _ => Flavor::Duality,
        };
        let ranks: Vec<String> = bundle.ranks.iter().map(usize::to_string).collect();
        let certificates = bundle
            .certificates
            .iter()
            .map(|c| format!("Ext^{} {} on 0..{}", c.index, c.verdict.label(), c.top))
            .collect();
        self.insert(DualityFact {
            algebra: bundle.algebra.clone(),
            dimension: d,
            flavor,
            provenance: Provenance::ComputedCertificate {
                resolution: format!("resolution ranks {}", ranks.join(",")),
                certificates,
            },
        })
    }

    pub fn register_cited_fact(&mut self, id: &str, dimension: usize, flavor: Flavor, citation: &str) -> Result<DualityFact> {
        self.insert(DualityFact {
            algebra: id.to_string(),
            dimension,
            flavor,
            provenance: Provenance::Cited(citation.to_string()),
        })
    }

    /// Forward direction: facts for `B` and `H` give one for `A`.
    pub fn apply_extension_rule(&mut self, ledger: &HypothesisLedger) -> Result<DualityFact> {
        let missing = ledger.missing();
        if !missing.is_empty() {
            return Err(Error::refusal(format!(
                "sequence `{}` lacks: {}",
                ledger.sequence,
                missing.join("; ")
            )));
        }
        let need = |id: &str, role: &str| {
            self.facts
                .get(id)
                .cloned()
                .ok_or_else(|| Error::refusal(format!("no duality fact for {role} `{id}` (smoothness of {role} unknown)")))
        };
        let sub = need(&ledger.b, "B")?;
        let quotient = need(&ledger.h, "H")?;
        self.insert(DualityFact::composed(&ledger.a, &ledger.sequence, &sub, &quotient))
    }

    /// Converse direction: a fact for `A` and one for `B` or `H` give the
    /// other. Both `B` and `H` must be known smooth, which here means they
    /// carry a fact or are named in `smooth`.
    pub fn apply_converse_rule(&mut self, ledger: &HypothesisLedger, smooth: &[&str]) -> Result<DualityFact> {
        let missing = ledger.missing();
        if !missing.is_empty() {
            return Err(Error::refusal(format!(
                "sequence `{}` lacks: {}",
                ledger.sequence,
                missing.join("; ")
            )));
        }
        let total = self
            .facts
            .get(&ledger.a)
            .cloned()
            .ok_or_else(|| Error::refusal(format!("no duality fact for A `{}`", ledger.a)))?;
        for id in [&ledger.b, &ledger.h] {
            if !self.facts.contains_key(id.as_str()) && !smooth.contains(&id.as_str()) {
                return Err(Error::refusal(format!("smoothness of `{id}` is not in the ledger")));
            }
        }
        if !ledger.cd_equality {
            return Err(Error::refusal(format!(
                "only cd({}) + cd({}) = {} is known; individual dimensions need cd(A) = cd(B) + cd(H)",
                ledger.b, ledger.h, total.dimension
            )));
        }
        let (known, unknown) = match (self.facts.get(&ledger.b), self.facts.get(&ledger.h)) {
            (Some(k), None) => (k.clone(), ledger.h.clone()),
            (None, Some(k)) => (k.clone(), ledger.b.clone()),
            (Some(_), Some(_)) => {
                return Err(Error::refusal(format!("both `{}` and `{}` already have facts", ledger.b, ledger.h)))
            }
            (None, None) => {
                return Err(Error::refusal(format!(
                    "only cd({}) + cd({}) = {} is known",
                    ledger.b, ledger.h, total.dimension
                )))
            }
        };
        let dimension = total.dimension.checked_sub(known.dimension).ok_or_else(|| {
            Error::refusal(format!("cd({}) = {} exceeds cd({}) = {}", known.algebra, known.dimension, total.algebra, total.dimension))
        })?;
        self.insert(DualityFact {
            algebra: unknown,
            dimension,
            flavor: Flavor::Duality,
            provenance: Provenance::SplitByExtension {
                sequence: ledger.sequence.clone(),
                total: total.algebra.clone(),
                known: known.algebra.clone(),
            },
        })
    }

    /// Provenance tree of a fact.
    pub fn explain(&self, id: &str) -> Result<String> {
        if !self.facts.contains_key(id) {
            return Err(Error::Semantic(format!("no fact for `{id}`")));
        }
        let mut out = String::new();
        self.explain_into(id, "", "", &mut out);
        Ok(out)
    }

    fn explain_into(&self, id: &str, first: &str, rest: &str, out: &mut String) {
        let Some(f) = self.facts.get(id) else {
            writeln!(out, "{first}{id}: missing").unwrap();
            return;
        };
        let head = format!("{first}{}: dimension {}, {}", f.algebra, f.dimension, f.flavor.label());
        match &f.provenance {
            Provenance::ComputedCertificate { resolution, certificates } => {
                writeln!(out, "{head}  [computed: {resolution}; {}]", certificates.join(", ")).unwrap();
                if let Flavor::TwistedCY(Some(nak)) = &f.flavor {
                    for (g, s) in nak {
                        writeln!(out, "{rest}    nakayama {g} -> {s}").unwrap();
                    }
                }
            }
            Provenance::Cited(c) => writeln!(out, "{head}  [CITED !] {c}").unwrap(),
            Provenance::ComposedByExtension { sequence, sub, quotient } => {
                writeln!(out, "{head}").unwrap();
                writeln!(out, "{rest}└─ extension rule cd(A) = cd(B) + cd(H) along {sequence}").unwrap();
                let inner = format!("{rest}   ");
                self.explain_into(sub, &format!("{inner}├─ B = "), &format!("{inner}│  "), out);
                self.explain_into(quotient, &format!("{inner}└─ H = "), &format!("{inner}   "), out);
            }
            Provenance::SplitByExtension { sequence, total, known } => {
                writeln!(out, "{head}").unwrap();
                writeln!(out, "{rest}└─ converse rule along {sequence}").unwrap();
                let inner = format!("{rest}   ");
                self.explain_into(total, &format!("{inner}├─ A = "), &format!("{inner}│  "), out);
                self.explain_into(known, &format!("{inner}└─ known = "), &format!("{inner}   "), out);
            }
        }
    }

    /// One fact per line, sorted by algebra id.
    pub fn ledger_text(&self) -> String {
        let mut s = String::new();
        for f in self.facts.values() {
            s.push_str(&f.ledger_line());
            s.push('\n');
        }
        s
    }
}

/// One line of a manifest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ManifestEntry {
    /// `base FILE [window W] [slack S]`
    Base { file: String, window: usize, slack: usize },
    /// `cite ID DIM FLAVOR CITATION…`
    Cite { id: String, dimension: usize, flavor: Flavor, citation: String },
    /// `sequence FILE`
    Sequence { file: String },
}

pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let perr = |msg: String| Error::Parse {
            kind: crate::error::ParseErrorKind::Syntax,
            line,
            col: 1,
            msg,
        };
        let toks: Vec<&str> = body.split_whitespace().collect();
        match toks[0] {
            "base" => {
                let file = toks.get(1).ok_or_else(|| perr("`base` needs a file".into()))?.to_string();
                let (mut window, mut slack) = (6, 1);
                let mut k = 2;
                while k < toks.len() {
                    let v: usize = toks
                        .get(k + 1)
                        .and_then(|v| v.parse().ok())
                        .ok_or_else(|| perr(format!("`{}` needs a number", toks[k])))?;
                    match toks[k] {
                        "window" => window = v,
                        "slack" => slack = v,
                        other => return Err(perr(format!("unknown option `{other}`"))),
                    }
                    k += 2;
                }
                out.push(ManifestEntry::Base { file, window, slack });
            }
            "cite" => {
                if toks.len() < 5 {
                    return Err(perr("`cite` needs ID DIM FLAVOR CITATION".into()));
                }
                let dimension = toks[2].parse().map_err(|_| perr(format!("bad dimension `{}`", toks[2])))?;
                let flavor = Flavor::parse(toks[3]).ok_or_else(|| perr(format!("unknown flavor `{}`", toks[3])))?;
                out.push(ManifestEntry::Cite {
                    id: toks[1].to_string(),
                    dimension,
                    flavor,
                    citation: toks[4..].join(" "),
                });
            }
            "sequence" => {
                let file = toks.get(1).ok_or_else(|| perr("`sequence` needs a file".into()))?.to_string();
                out.push(ManifestEntry::Sequence { file });
            }
            other => return Err(perr(format!("unknown manifest entry `{other}`"))),
        }
    }
    Ok(out)
}

/// Loads a presentation by file name (relative paths as the caller decides).
pub type Loader<'a> = dyn FnMut(&str) -> Result<crate::dsl::ParsedPresentation> + 'a;

/// Runs a manifest: base facts, citations, then the extension rule for
/// every sequence, in file order. Returns the store and the per-sequence
/// ledgers.
pub fn derive(
    entries: &[ManifestEntry],
    load: &mut Loader<'_>,
    read: &mut dyn FnMut(&str) -> Result<String>,
    seed: u64,
) -> Result<(DualityStore, Vec<HypothesisLedger>)> {
    let mut store = DualityStore::new();
    let mut ledgers = Vec::new();
    for e in entries {
        match e {
            ManifestEntry::Base { file, window, slack } => {
                let p = load(file)?;
                let spec = p.file.resolution.clone().ok_or_else(|| {
                    Error::refusal(format!("`{file}` has no resolution; smoothness cannot be witnessed"))
                })?;
                let res = Resolution::from_spec(Arc::new(p.hopf), &spec)?;
                store.register_base_fact(&CertBundle::compute(&res, *window, *slack)?)?;
            }
            ManifestEntry::Cite { id, dimension, flavor, citation } => {
                store.register_cited_fact(id, *dimension, flavor.clone(), citation)?;
            }
            ManifestEntry::Sequence { file } => {
                let sf = SequenceFile::parse(&read(file)?)?;
                let dir = parent_dir(file);
                let mut cache: BTreeMap<String, Arc<HopfPresentation>> = BTreeMap::new();
                let seq = sf.build(&mut |name: &str| {
                    let path = format!("{dir}{name}");
                    if let Some(a) = cache.get(&path) {
                        return Ok(a.clone());
                    }
                    let a = Arc::new(load(&path)?.hopf);
                    cache.insert(path, a.clone());
                    Ok(a)
                })?;
                let d = sf.degree.unwrap_or(3);
                let rep = certify(&seq, d, seq.default_slack(), &SweedlerContext::new(d.min(3), seed))?;
                let all_pass = |names: &[&str]| names.iter().all(|n| rep.check(n).map(|c| c.passed).unwrap_or(false));
                let freeness = [
                    "left products independent",
                    "left products span the window",
                    "right products independent",
                    "right products span the window",
                ];
                let exact_ok = rep.checks.iter().filter(|c| !freeness.contains(&c.name.as_str())).all(|c| c.passed);
                let ledger = HypothesisLedger {
                    sequence: seq.name.clone(),
                    b: seq.b().name().to_string(),
                    a: seq.a().name().to_string(),
                    h: seq.h().name().to_string(),
                    exactness: exact_ok.then_some(d),
                    freeness: all_pass(&freeness).then_some(d),
                    bijective_antipodes: [seq.b(), seq.a(), seq.h()].iter().all(|x| x.has_antipode_inv()),
                    cd_equality: false,
                };
                store.apply_extension_rule(&ledger)?;
                ledgers.push(ledger);
            }
        }
    }
    Ok((store, ledgers))
}

fn parent_dir(file: &str) -> String {
    match file.rfind('/') {
        Some(i) => file[..=i].to_string(),
        None => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_presentation;

    fn corpus(name: &str) -> String {
        let p = format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"));
        std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{p}: {e}"))
    }

    fn run_manifest() -> (DualityStore, Vec<HypothesisLedger>) {
        let entries = parse_manifest(&corpus("manifest.txt")).unwrap();
        let mut load = |f: &str| parse_presentation(&corpus(f));
        let mut read = |f: &str| Ok(corpus(f));
        derive(&entries, &mut load, &mut read, 11).unwrap()
    }

    fn ledger(b: &str, a: &str, h: &str) -> HypothesisLedger {
        HypothesisLedger {
            sequence: "S".into(),
            b: b.into(),
            a: a.into(),
            h: h.into(),
            exactness: Some(3),
            freeness: Some(3),
            bijective_antipodes: true,
            cd_equality: false,
        }
    }

    #[test]
    fn manifest_derivation() {
        let (store, ledgers) = run_manifest();
        assert_eq!(ledgers.len(), 3);
        let dim = |id: &str| store.get(id).unwrap().dimension();
        assert_eq!(dim("kZ"), 1);
        assert_eq!(dim("H1"), 1);
        assert_eq!(dim("H2"), 2);
        assert_eq!(dim("G_q2"), 4);
        assert_eq!(dim("G_q3_F7"), 4);
        assert_eq!(store.get("kZ").unwrap().flavor(), &Flavor::CY);
        assert_eq!(store.get("H1").unwrap().flavor(), &Flavor::Duality);
        assert_eq!(store.get("H2").unwrap().flavor(), &Flavor::Duality);
        assert_eq!(store.get("G_q2").unwrap().flavor(), &Flavor::TwistedCY(None));
        let tree = store.explain("G_q2").unwrap();
        assert!(tree.contains("extension rule cd(A) = cd(B) + cd(H)"), "{tree}");
        assert!(tree.contains("[CITED !]"), "{tree}");
        assert!(tree.contains("kZ: dimension 1, CY  [computed"), "{tree}");
    }

    #[test]
    fn ledger_is_sorted_and_stable() {
        let a = run_manifest().0.ledger_text();
        let b = run_manifest().0.ledger_text();
        assert_eq!(a, b);
        let ids: Vec<&str> = a.lines().map(|l| l.split('\t').next().unwrap()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
    }

    #[test]
    fn missing_hypothesis_is_named() {
        let mut s = DualityStore::new();
        s.register_cited_fact("B", 1, Flavor::CY, "x").unwrap();
        s.register_cited_fact("H", 1, Flavor::CY, "x").unwrap();
        let mut l = ledger("B", "A", "H");
        l.freeness = None;
        let e = s.apply_extension_rule(&l).unwrap_err();
        assert!(e.is_refusal());
        assert!(e.to_string().contains("faithfully flat as a left and right B-module"), "{e}");
        l.freeness = Some(3);
        let f = s.apply_extension_rule(&l).unwrap();
        assert_eq!(f.dimension(), 2);
        assert_eq!(f.flavor().label(), "TwistedCY");
    }

    #[test]
    fn missing_fact_refuses() {
        let mut s = DualityStore::new();
        s.register_cited_fact("B", 1, Flavor::Duality, "x").unwrap();
        let e = s.apply_extension_rule(&ledger("B", "A", "H")).unwrap_err();
        assert!(e.to_string().contains("`H`"), "{e}");
    }

    #[test]
    fn conflicting_citation_refuses() {
        let mut s = DualityStore::new();
        s.register_cited_fact("B", 3, Flavor::TwistedCY(None), "x").unwrap();
        s.register_cited_fact("B", 3, Flavor::TwistedCY(None), "y").unwrap();
        let e = s.register_cited_fact("B", 2, Flavor::Duality, "z").unwrap_err();
        let m = e.to_string();
        assert!(m.contains("B\t3\tTwistedCY") && m.contains("B\t2\tDuality"), "{m}");
    }

    #[test]
    fn converse_needs_equality_and_a_known_part() {
        let mut s = DualityStore::new();
        s.register_cited_fact("A", 4, Flavor::TwistedCY(None), "x").unwrap();
        let mut l = ledger("B", "A", "H");
        let e = s.apply_converse_rule(&l, &["B", "H"]).unwrap_err();
        assert!(e.to_string().contains("= 4"), "{e}");
        l.cd_equality = true;
        let e = s.apply_converse_rule(&l, &["B", "H"]).unwrap_err();
        assert!(e.to_string().contains("only cd(B) + cd(H) = 4"), "{e}");
        s.register_cited_fact("B", 1, Flavor::CY, "x").unwrap();
        let f = s.apply_converse_rule(&l, &["H"]).unwrap();
        assert_eq!((f.algebra(), f.dimension()), ("H", 3));
        assert!(s.explain("H").unwrap().contains("converse rule"));
    }

    #[test]
    fn inconclusive_base_refuses() {
        let p = parse_presentation(&corpus("kz.hopf")).unwrap();
        let res = Resolution::from_spec(Arc::new(p.hopf), p.file.resolution.as_ref().unwrap()).unwrap();
        let mut bundle = CertBundle::compute(&res, 6, 1).unwrap();
        bundle.certificates[1].verdict = ExtVerdict::Inconclusive("too narrow".into());
        let e = DualityStore::new().register_base_fact(&bundle).unwrap_err();
        assert!(e.to_string().contains("Ext^1"), "{e}");
        bundle.certificates.pop();
        let e = DualityStore::new().register_base_fact(&bundle).unwrap_err();
        assert!(e.to_string().contains("missing Ext^1"), "{e}");
    }

    #[test]
    fn manifest_parse_errors() {
        assert!(parse_manifest("cite X 3 Weird because").is_err());
        assert!(parse_manifest("base kz.hopf window").is_err());
        assert!(parse_manifest("frobnicate").is_err());
        let e = parse_manifest("base kz.hopf window 4 slack 2\n").unwrap();
        assert_eq!(e, vec![ManifestEntry::Base { file: "kz.hopf".into(), window: 4, slack: 2 }]);
    }
}
