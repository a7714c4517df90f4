//! Hopf-algebra presentations and the Sweedler evaluator.
//!
//! Δ and ε are extended multiplicatively from generators, S and S⁻¹
//! anti-multiplicatively; every leg is kept in normal form. Axiom checks run
//! on all normal monomials of degree at most 2 plus seeded random elements.

use std::collections::BTreeMap;
use std::fmt;

use crate::cache::Memo;
use crate::coeffs::{FieldSpec, Scalar};
use crate::error::{Error, Result};
use crate::freealg::{Alphabet, Letter, NCPoly, TensorPoly, Word};
use crate::report::{CheckResult, Report};
use crate::rewrite::{complete, CompletionStatus, RewriteSystem};
use crate::sample::Sampler;

pub const DEFAULT_CAP: usize = 6;

/// Raw data of a presentation, before completion and validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfSpec {
    pub name: String,
    pub field: FieldSpec,
    pub alphabet: Alphabet,
    pub relations: Vec<NCPoly>,
    pub comul: BTreeMap<Letter, TensorPoly>,
    pub counit: BTreeMap<Letter, Scalar>,
    pub antipode: BTreeMap<Letter, NCPoly>,
    pub antipode_inv: Option<BTreeMap<Letter, NCPoly>>,
    pub cap: usize,
}

/// A validated presentation with its completed rewriting system.
#[derive(Debug, Clone)]
pub struct HopfPresentation {
    spec: HopfSpec,
    rewrite: RewriteSystem,
    delta: Memo<Word, TensorPoly>,
    s: Memo<Word, NCPoly>,
    s_inv: Memo<Word, NCPoly>,
}

impl HopfPresentation {
    /// Completes the relations and checks that Δ, ε, S (and S⁻¹) are
    /// compatible with them.
    pub fn new(spec: HopfSpec) -> Result<Self> {
        let h = Self::new_unchecked(spec)?;
        let problems = h.validate()?;
        if let Some(p) = problems.into_iter().next() {
            return Err(Error::Semantic(p));
        }
        Ok(h)
    }

    /// Completes the relations but skips compatibility checks, e.g. for
    /// deliberately corrupted fixtures.
    pub fn new_unchecked(spec: HopfSpec) -> Result<Self> {
        for l in spec.alphabet.letters() {
            let name = spec.alphabet.name(l);
            if !spec.comul.contains_key(&l) {
                return Err(Error::Semantic(format!("no comultiplication for `{name}`")));
            }
            if !spec.counit.contains_key(&l) {
                return Err(Error::Semantic(format!("no counit for `{name}`")));
            }
            if !spec.antipode.contains_key(&l) {
                return Err(Error::Semantic(format!("no antipode for `{name}`")));
            }
            if let Some(si) = &spec.antipode_inv {
                if !si.contains_key(&l) {
                    return Err(Error::Semantic(format!("no inverse antipode for `{name}`")));
                }
            }
            if spec.comul[&l].legs() != 2 {
                return Err(Error::Semantic(format!(
                    "comultiplication of `{name}` must have two legs"
                )));
            }
        }
        let rewrite = complete(&spec.alphabet, spec.field, &spec.relations, spec.cap)?;
        Ok(HopfPresentation {
            spec,
            rewrite,
            delta: Memo::new(),
            s: Memo::new(),
            s_inv: Memo::new(),
        })
    }

    /// Problems with the structure maps on relations and generators.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        let a = self.alphabet();
        for r in &self.spec.relations {
            let shown = r.display(a).to_string();
            if !self.comul(r)?.is_zero() {
                out.push(format!("comultiplication does not vanish on relation {shown}"));
            }
            if !self.counit(r).is_zero() {
                out.push(format!("counit does not vanish on relation {shown}"));
            }
            if !self.antipode(r)?.is_zero() {
                out.push(format!("antipode does not vanish on relation {shown}"));
            }
            if self.has_antipode_inv() && !self.antipode_inv(r)?.is_zero() {
                out.push(format!("inverse antipode does not vanish on relation {shown}"));
            }
        }
        if self.has_antipode_inv() {
            for l in a.letters() {
                let g = NCPoly::letter(l, self.field());
                if self.antipode(&self.antipode_inv(&g)?)? != g
                    || self.antipode_inv(&self.antipode(&g)?)? != g
                {
                    out.push(format!(
                        "inverse antipode is not inverse to the antipode on `{}`",
                        a.name(l)
                    ));
                }
            }
        }
        Ok(out)
    }

    pub fn spec(&self) -> &HopfSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn field(&self) -> FieldSpec {
        self.spec.field
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.spec.alphabet
    }

    pub fn relations(&self) -> &[NCPoly] {
        &self.spec.relations
    }

    pub fn rewrite(&self) -> &RewriteSystem {
        &self.rewrite
    }

    pub fn has_antipode_inv(&self) -> bool {
        self.spec.antipode_inv.is_some()
    }

    /// The generator with this name as an element.
    pub fn gen(&self, name: &str) -> Result<NCPoly> {
        let l = self
            .alphabet()
            .letter(name)
            .ok_or_else(|| Error::Semantic(format!("unknown generator `{name}`")))?;
        Ok(NCPoly::letter(l, self.field()))
    }

    pub fn one(&self) -> NCPoly {
        NCPoly::one(self.field())
    }

    pub fn scalar(&self, n: i64) -> NCPoly {
        NCPoly::constant(self.field().from_i64(n))
    }

    pub fn nf(&self, p: &NCPoly) -> Result<NCPoly> {
        self.rewrite.normal_form(p)
    }

    pub fn mul(&self, p: &NCPoly, q: &NCPoly) -> Result<NCPoly> {
        self.rewrite.mul(p, q)
    }

    pub fn product(&self, factors: &[&NCPoly]) -> Result<NCPoly> {
        self.rewrite.product(factors)
    }

    /// Leg-wise normal form.
    pub fn nf_tensor(&self, t: &TensorPoly) -> Result<TensorPoly> {
        t.map_legs(|_, w| self.rewrite.normal_form_word(w))
    }

    fn delta_word(&self, w: &Word) -> Result<TensorPoly> {
        if w.is_empty() {
            return Ok(TensorPoly::unit(2, self.field()));
        }
        if w.degree() == 1 {
            return self.nf_tensor(&self.spec.comul[&w.letters()[0]]);
        }
        self.delta.get_or_try(w, || {
            let n = w.degree();
            let head = self.delta_word(&w.subword(0, n - 1))?;
            let last = &self.spec.comul[&w.letters()[n - 1]];
            self.nf_tensor(&head.tensor_mul(last)?)
        })
    }

    /// Δ, multiplicatively extended, legs in normal form.
    pub fn comul(&self, p: &NCPoly) -> Result<TensorPoly> {
        self.alphabet().check_poly(p)?;
        let mut out = TensorPoly::zero(2, self.field());
        for (w, c) in p.terms() {
            out.add_scaled(&self.delta_word(w)?, c);
        }
        Ok(out)
    }

    /// Δ applied to one leg of a tensor.
    pub fn comul_leg(&self, t: &TensorPoly, leg: usize) -> Result<TensorPoly> {
        t.expand_leg(leg, 1, |w| self.delta_word(w))
    }

    /// `(Δ ⊗ id ⊗ … ⊗ id) ∘ … ∘ Δ`: the n-fold iterate with n+1 legs,
    /// expanding the leftmost leg each time.
    pub fn iterated_comul(&self, p: &NCPoly, n: usize) -> Result<TensorPoly> {
        if n == 0 {
            return Err(Error::Semantic("iterated comultiplication needs n >= 1".into()));
        }
        let mut t = self.comul(p)?;
        for _ in 1..n {
            t = self.comul_leg(&t, 0)?;
        }
        Ok(t)
    }

    /// The same iterate expanding the rightmost leg each time.
    pub fn iterated_comul_right(&self, p: &NCPoly, n: usize) -> Result<TensorPoly> {
        if n == 0 {
            return Err(Error::Semantic("iterated comultiplication needs n >= 1".into()));
        }
        let mut t = self.comul(p)?;
        for k in 1..n {
            t = self.comul_leg(&t, k)?;
        }
        Ok(t)
    }

    pub fn counit_word(&self, w: &Word) -> Scalar {
        let mut acc = self.field().one();
        for l in w.letters() {
            acc = &acc * &self.spec.counit[l];
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    pub fn counit(&self, p: &NCPoly) -> Scalar {
        let mut acc = self.field().zero();
        for (w, c) in p.terms() {
            acc += &(c * &self.counit_word(w));
        }
        acc
    }

    fn anti_word(
        &self,
        w: &Word,
        images: &BTreeMap<Letter, NCPoly>,
        memo: &Memo<Word, NCPoly>,
    ) -> Result<NCPoly> {
        if w.is_empty() {
            return Ok(self.one());
        }
        if w.degree() == 1 {
            return self.nf(&images[&w.letters()[0]]);
        }
        memo.get_or_try(w, || {
            let n = w.degree();
            let first = &images[&w.letters()[0]];
            let rest = self.anti_word(&w.subword(1, n), images, memo)?;
            self.mul(&rest, first)
        })
    }

    pub fn antipode_word(&self, w: &Word) -> Result<NCPoly> {
        self.anti_word(w, &self.spec.antipode, &self.s)
    }

    /// S, anti-multiplicatively extended, in normal form.
    pub fn antipode(&self, p: &NCPoly) -> Result<NCPoly> {
        self.alphabet().check_poly(p)?;
        p.map_linear(|w| self.antipode_word(w))
    }

    pub fn antipode_inv_word(&self, w: &Word) -> Result<NCPoly> {
        let images = self.spec.antipode_inv.as_ref().ok_or_else(|| {
            Error::refusal(format!("`{}` has no inverse antipode", self.name()))
        })?;
        self.anti_word(w, images, &self.s_inv)
    }

    pub fn antipode_inv(&self, p: &NCPoly) -> Result<NCPoly> {
        self.alphabet().check_poly(p)?;
        p.map_linear(|w| self.antipode_inv_word(w))
    }

    /// S^k for any integer k (negative powers use S⁻¹).
    pub fn antipode_power(&self, p: &NCPoly, k: i32) -> Result<NCPoly> {
        let mut acc = p.clone();
        for _ in 0..k.unsigned_abs() {
            acc = if k > 0 {
                self.antipode(&acc)?
            } else {
                self.antipode_inv(&acc)?
            };
        }
        Ok(acc)
    }

    /// Largest degree of S on a generator (at least 1).
    pub fn antipode_growth(&self) -> usize {
        self.spec
            .antipode
            .values()
            .filter_map(|p| p.degree())
            .max()
            .unwrap_or(1)
            .max(1)
    }

    /// Degree up to which normal forms must be certified for products of
    /// elements of degree `d` with antipodes applied.
    pub fn required_degree(&self, d: usize) -> usize {
        (self.antipode_growth() * d + d).max(2 * d)
    }

    pub fn require_degree(&self, d: usize) -> Result<()> {
        self.rewrite.require_degree(self.required_degree(d))
    }

    /// Normal words up to degree `d`.
    pub fn window(&self, d: usize) -> Result<Vec<Word>> {
        Ok(self.rewrite.degree_basis(d)?.basis)
    }

    pub fn show(&self, p: &NCPoly) -> String {
        p.display(self.alphabet()).to_string()
    }

    pub fn show_tensor(&self, t: &TensorPoly) -> String {
        t.display(&[self.alphabet()]).to_string()
    }
}

/// Seeded harness for identity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweedlerContext {
    pub max_degree: usize,
    pub seed: u64,
    pub samples: usize,
}

impl SweedlerContext {
    pub fn new(max_degree: usize, seed: u64) -> Self {
        SweedlerContext {
            max_degree,
            seed,
            samples: 100,
        }
    }

    pub fn with_samples(mut self, n: usize) -> Self {
        self.samples = n;
        self
    }

    pub fn sampler(&self, a: &HopfPresentation) -> Result<Sampler> {
        Ok(Sampler::new(self.seed, a.window(self.max_degree)?, a.field()))
    }

    /// All normal monomials of degree ≤ 2 followed by `samples` random
    /// elements of degree ≤ `max_degree`.
    pub fn elements(&self, a: &HopfPresentation) -> Result<Vec<NCPoly>> {
        let mut out: Vec<NCPoly> = a
            .window(2.min(self.max_degree))?
            .into_iter()
            .map(|w| NCPoly::word(w, a.field()))
            .collect();
        let mut s = self.sampler(a)?;
        out.extend((0..self.samples).map(|_| s.poly()));
        Ok(out)
    }

    /// All pairs of generators followed by `samples` random pairs.
    pub fn pairs(&self, a: &HopfPresentation) -> Result<Vec<(NCPoly, NCPoly)>> {
        let f = a.field();
        let gens: Vec<NCPoly> = a.alphabet().letters().map(|l| NCPoly::letter(l, f)).collect();
        let mut out = Vec::new();
        for x in &gens {
            for y in &gens {
                out.push((x.clone(), y.clone()));
            }
        }
        let mut s = Sampler::new(self.seed ^ 0x9e37_79b9, a.window(self.max_degree)?, f);
        out.extend((0..self.samples).map(|_| (s.poly(), s.poly())));
        Ok(out)
    }
}

/// m ∘ (S ⊗ id) or m ∘ (id ⊗ S) applied to a two-leg tensor.
fn multiply_with_antipode(a: &HopfPresentation, t: &TensorPoly, leg: usize) -> Result<NCPoly> {
    let mut out = NCPoly::zero(a.field());
    for (k, c) in t.terms() {
        let (x, y) = if leg == 0 {
            (a.antipode_word(&k[0])?, NCPoly::word(k[1].clone(), a.field()))
        } else {
            (NCPoly::word(k[0].clone(), a.field()), a.antipode_word(&k[1])?)
        };
        out.add_scaled(&a.mul(&x, &y)?, c);
    }
    Ok(out)
}

/// Coassociativity, counit, antipode and multiplicativity laws on the
/// context's elements.
pub fn check_hopf_axioms(a: &HopfPresentation, ctx: &SweedlerContext) -> Result<Report> {
    a.require_degree(ctx.max_degree)?;
    let elems = ctx.elements(a)?;
    let pairs = ctx.pairs(a)?;
    let f = a.field();
    let mut rep = Report::new(format!("hopf axioms for {}", a.name()))
        .with("degree", ctx.max_degree)
        .with("seed", ctx.seed)
        .with("samples", ctx.samples)
        .with("rewrite", a.rewrite().status());

    rep.push(CheckResult::run("coassociativity", &elems, |p| {
        let l = a.iterated_comul(p, 2)?;
        let r = a.iterated_comul_right(p, 2)?;
        Ok::<_, Error>((l != r).then(|| a.show(p)))
    })?);
    rep.push(CheckResult::run("left counit", &elems, |p| {
        let d = a.comul(p)?;
        let back = d.contract_leg(0, |w| a.counit_word(w))?.into_poly();
        Ok::<_, Error>((&back != p).then(|| a.show(p)))
    })?);
    rep.push(CheckResult::run("right counit", &elems, |p| {
        let d = a.comul(p)?;
        let back = d.contract_leg(1, |w| a.counit_word(w))?.into_poly();
        Ok::<_, Error>((&back != p).then(|| a.show(p)))
    })?);
    for (name, leg) in [("left antipode", 0), ("right antipode", 1)] {
        rep.push(CheckResult::run(name, &elems, |p| {
            let lhs = multiply_with_antipode(a, &a.comul(p)?, leg)?;
            let rhs = NCPoly::constant(a.counit(p));
            Ok::<_, Error>((lhs != rhs).then(|| {
                format!("{} (got {}, expected {})", a.show(p), a.show(&lhs), a.show(&rhs))
            }))
        })?);
    }
    rep.push(CheckResult::run("comultiplication multiplicative", &pairs, |(p, q)| {
        let lhs = a.comul(&a.mul(p, q)?)?;
        let rhs = a.nf_tensor(&a.comul(p)?.tensor_mul(&a.comul(q)?)?)?;
        Ok::<_, Error>((lhs != rhs).then(|| format!("({}, {})", a.show(p), a.show(q))))
    })?);
    rep.push(CheckResult::run("counit multiplicative", &pairs, |(p, q)| {
        let lhs = a.counit(&a.mul(p, q)?);
        let rhs = &a.counit(p) * &a.counit(q);
        Ok::<_, Error>((lhs != rhs).then(|| format!("({}, {})", a.show(p), a.show(q))))
    })?);
    rep.push(CheckResult::run("antipode anti-multiplicative", &pairs, |(p, q)| {
        let lhs = a.antipode(&a.mul(p, q)?)?;
        let rhs = a.mul(&a.antipode(q)?, &a.antipode(p)?)?;
        Ok::<_, Error>((lhs != rhs).then(|| format!("({}, {})", a.show(p), a.show(q))))
    })?);
    if a.has_antipode_inv() {
        let gens: Vec<NCPoly> = a.alphabet().letters().map(|l| NCPoly::letter(l, f)).collect();
        rep.push(CheckResult::run("inverse antipode on generators", &gens, |g| {
            let ok = a.antipode(&a.antipode_inv(g)?)? == *g && a.antipode_inv(&a.antipode(g)?)? == *g;
            Ok::<_, Error>((!ok).then(|| a.show(g)))
        })?);
    }
    Ok(rep)
}

/// The four module structures on the regular bimodule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActionKind {
    /// `m·h = S(h₁) m h₂`
    Tilde,
    /// `h·m = h₁ m S(h₂)`
    Bar,
    /// `h→m = h₂ m S(h₁)`
    Prime,
    /// `m←h = S(h₂) m h₁`
    DoublePrime,
}

impl ActionKind {
    pub const ALL: [ActionKind; 4] = [
        ActionKind::Tilde,
        ActionKind::Bar,
        ActionKind::Prime,
        ActionKind::DoublePrime,
    ];

    pub fn is_right(self) -> bool {
        matches!(self, ActionKind::Tilde | ActionKind::DoublePrime)
    }

    pub fn name(self) -> &'static str {
        match self {
            ActionKind::Tilde => "tilde",
            ActionKind::Bar => "bar",
            ActionKind::Prime => "prime",
            ActionKind::DoublePrime => "doubleprime",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `Faithful` evaluates the stated formula; `DropAntipode` replaces S by the
/// identity (a negative control).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionVariant {
    Faithful,
    DropAntipode,
}

pub fn action_eval(kind: ActionKind, m: &NCPoly, h: &NCPoly, a: &HopfPresentation) -> Result<NCPoly> {
    action_eval_variant(kind, ActionVariant::Faithful, m, h, a)
}

pub fn action_eval_variant(
    kind: ActionKind,
    variant: ActionVariant,
    m: &NCPoly,
    h: &NCPoly,
    a: &HopfPresentation,
) -> Result<NCPoly> {
    let f = a.field();
    let s = |w: &Word| -> Result<NCPoly> {
        match variant {
            ActionVariant::Faithful => a.antipode_word(w),
            ActionVariant::DropAntipode => Ok(NCPoly::word(w.clone(), f)),
        }
    };
    let mut out = NCPoly::zero(f);
    for (k, c) in a.comul(h)?.terms() {
        let (h1, h2) = (&k[0], &k[1]);
        let (left, right) = match kind {
            ActionKind::Tilde => (s(h1)?, NCPoly::word(h2.clone(), f)),
            ActionKind::Bar => (NCPoly::word(h1.clone(), f), s(h2)?),
            ActionKind::Prime => (NCPoly::word(h2.clone(), f), s(h1)?),
            ActionKind::DoublePrime => (s(h2)?, NCPoly::word(h1.clone(), f)),
        };
        out.add_scaled(&a.product(&[&left, m, &right])?, c);
    }
    Ok(out)
}

/// Unit and associativity axioms of one of the four actions.
pub fn check_module_axiom(kind: ActionKind, a: &HopfPresentation, ctx: &SweedlerContext) -> Result<Report> {
    check_module_axiom_variant(kind, ActionVariant::Faithful, a, ctx)
}

pub fn check_module_axiom_variant(
    kind: ActionKind,
    variant: ActionVariant,
    a: &HopfPresentation,
    ctx: &SweedlerContext,
) -> Result<Report> {
    a.require_degree(ctx.max_degree)?;
    let mut s = ctx.sampler(a)?;
    let triples: Vec<(NCPoly, NCPoly, NCPoly)> =
        (0..ctx.samples).map(|_| (s.poly(), s.poly(), s.poly())).collect();
    let act = |m: &NCPoly, h: &NCPoly| action_eval_variant(kind, variant, m, h, a);
    let mut rep = Report::new(format!("{kind} action on {}", a.name()))
        .with("degree", ctx.max_degree)
        .with("seed", ctx.seed)
        .with("samples", ctx.samples)
        .with("side", if kind.is_right() { "right" } else { "left" });
    let one = a.one();
    rep.push(CheckResult::run("unit", &triples, |(m, _, _)| {
        Ok::<_, Error>((act(m, &one)? != *m).then(|| a.show(m)))
    })?);
    rep.push(CheckResult::run("associativity", &triples, |(m, h, k)| {
        let hk = a.mul(h, k)?;
        let (lhs, rhs) = if kind.is_right() {
            (act(&act(m, h)?, k)?, act(m, &hk)?)
        } else {
            (act(&act(m, k)?, h)?, act(m, &hk)?)
        };
        Ok::<_, Error>((lhs != rhs).then(|| {
            format!("m = {}, h = {}, h' = {}", a.show(m), a.show(h), a.show(k))
        }))
    })?);
    Ok(rep)
}

/// The four adjoint expressions of an element `b` by `a`.
pub fn adjoint_images(a: &HopfPresentation, x: &NCPoly, b: &NCPoly) -> Result<Vec<(&'static str, NCPoly)>> {
    let f = a.field();
    let d = a.comul(x)?;
    let mut out = vec![
        ("a1 b S(a2)", NCPoly::zero(f)),
        ("S(a1) b a2", NCPoly::zero(f)),
        ("a2 b Sinv(a1)", NCPoly::zero(f)),
        ("Sinv(a2) b a1", NCPoly::zero(f)),
    ];
    for (k, c) in d.terms() {
        let a1 = NCPoly::word(k[0].clone(), f);
        let a2 = NCPoly::word(k[1].clone(), f);
        out[0].1.add_scaled(&a.product(&[&a1, b, &a.antipode(&a2)?])?, c);
        out[1].1.add_scaled(&a.product(&[&a.antipode(&a1)?, b, &a2])?, c);
        out[2].1.add_scaled(&a.product(&[&a2, b, &a.antipode_inv(&a1)?])?, c);
        out[3].1.add_scaled(&a.product(&[&a.antipode_inv(&a2)?, b, &a1])?, c);
    }
    Ok(out)
}

/// Stability of a subalgebra (given by a membership test and a spanning set
/// of its window) under the left and right adjoint actions and their S⁻¹
/// variants.
pub fn adjoint_stability(
    a: &HopfPresentation,
    b_window: &[NCPoly],
    member: &dyn Fn(&NCPoly) -> Result<bool>,
    ctx: &SweedlerContext,
) -> Result<Report> {
    if !a.has_antipode_inv() {
        return Err(Error::refusal(format!(
            "adjoint stability needs the inverse antipode of `{}`",
            a.name()
        )));
    }
    a.require_degree(ctx.max_degree)?;
    let mut s = ctx.sampler(a)?;
    let mut cases = Vec::new();
    for _ in 0..ctx.samples {
        let x = s.poly();
        let mut b = NCPoly::zero(a.field());
        for _ in 0..2 {
            let i = s.index(b_window.len());
            b.add_scaled(&b_window[i], &s.scalar());
        }
        cases.push((x, b));
    }
    let mut rep = Report::new(format!("adjoint stability in {}", a.name()))
        .with("degree", ctx.max_degree)
        .with("seed", ctx.seed)
        .with("samples", ctx.samples);
    let mut results: Vec<CheckResult> = Vec::new();
    for (idx, name) in ["a1 b S(a2)", "S(a1) b a2", "a2 b Sinv(a1)", "Sinv(a2) b a1"]
        .iter()
        .enumerate()
    {
        results.push(CheckResult::run(*name, &cases, |(x, b)| {
            let img = adjoint_images(a, x, b)?.swap_remove(idx).1;
            Ok::<_, Error>((!member(&img)?).then(|| {
                format!("a = {}, b = {} gives {}", a.show(x), a.show(b), a.show(&img))
            }))
        })?);
    }
    for r in results {
        rep.push(r);
    }
    Ok(rep)
}

/// True when the rewriting system is certified in every degree.
pub fn is_confluent(a: &HopfPresentation) -> bool {
    a.rewrite().status() == CompletionStatus::Confluent
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_poly, parse_presentation, parse_presentation_unchecked};

    const H1: &str = "\
algebra H1 over Q
gens: x, g, ginv
inverses: (g, ginv)
comul: x -> 1 (x) x + x (x) g, g -> g (x) g, ginv -> ginv (x) ginv
counit: x -> 0, g -> 1, ginv -> 1
antipode: x -> -x*ginv, g -> ginv, ginv -> g
antipode_inv: x -> -ginv*x, g -> ginv, ginv -> g
";

    fn h1() -> HopfPresentation {
        parse_presentation(H1).unwrap().hopf
    }

    fn poly(a: &HopfPresentation, s: &str) -> NCPoly {
        parse_poly(s, a.alphabet(), a.field()).unwrap()
    }

    #[test]
    fn axioms_hold() {
        let rep = check_hopf_axioms(&h1(), &SweedlerContext::new(3, 7).with_samples(20)).unwrap();
        assert!(rep.passed(), "{}", rep.render_text());
    }

    #[test]
    fn wrong_antipode_is_caught() {
        let bad = H1.replace("x -> -x*ginv, g", "x -> x*ginv, g").replace("x -> -ginv*x", "x -> ginv*x");
        let a = parse_presentation_unchecked(&bad).unwrap().hopf;
        let rep = check_hopf_axioms(&a, &SweedlerContext::new(2, 7).with_samples(10)).unwrap();
        assert!(!rep.check("left antipode").unwrap().passed);
        assert!(rep.check("coassociativity").unwrap().passed);
    }

    #[test]
    fn antipode_powers() {
        let a = h1();
        let x = a.gen("x").unwrap();
        assert_eq!(a.antipode_power(&x, 2).unwrap(), poly(&a, "g*x*ginv"));
        assert_eq!(a.antipode_power(&a.antipode_power(&x, 3).unwrap(), -3).unwrap(), x);
        assert_eq!(a.antipode_power(&x, 0).unwrap(), x);
    }

    #[test]
    fn comul_and_counit() {
        let a = h1();
        let x = a.gen("x").unwrap();
        assert_eq!(a.show_tensor(&a.comul(&x).unwrap()), "x (x) g + 1 (x) x");
        assert!(a.counit(&a.mul(&x, &x).unwrap()).is_zero());
        assert!(a.counit(&a.gen("g").unwrap()).is_one());
    }

    #[test]
    fn four_actions_are_actions() {
        let a = h1();
        let ctx = SweedlerContext::new(2, 3).with_samples(10);
        for k in ActionKind::ALL {
            let rep = check_module_axiom(k, &a, &ctx).unwrap();
            assert!(rep.passed(), "{}", rep.render_text());
        }
        let bad = check_module_axiom_variant(ActionKind::Bar, ActionVariant::DropAntipode, &a, &ctx).unwrap();
        assert!(!bad.passed());
    }

    #[test]
    fn adjoint_of_group_like() {
        let a = h1();
        let g = a.gen("g").unwrap();
        let x = a.gen("x").unwrap();
        let imgs = adjoint_images(&a, &g, &x).unwrap();
        assert_eq!(imgs[0].1, poly(&a, "g*x*ginv"));
        assert_eq!(imgs[1].1, poly(&a, "ginv*x*g"));
    }

    #[test]
    fn degree_refusal() {
        let a = h1();
        assert!(a.require_degree(3).is_ok());
        assert!(is_confluent(&a));
        assert_eq!(ActionKind::parse("prime"), Some(ActionKind::Prime));
    }
}
