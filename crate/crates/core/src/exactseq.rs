//! Exact sequences `k → B → A → H → k` of Hopf algebras, certified on degree
//! windows by exact linear algebra.
//!
//! Every certificate is scoped to a degree bound `D`: ideal and coinvariant
//! spans are generated from products of degree at most `D + slack` and then
//! intersected with the degree-`D` window. Injectivity is reported as "no
//! kernel up to degree D".

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cache::Memo;
use crate::dsl;
use crate::error::{Error, Result};
use crate::freealg::{Letter, NCPoly, TensorKey, TensorPoly, Word};
use crate::hopf::{HopfPresentation, SweedlerContext};
use crate::linalg::{kernel, Echelon, SparseVec};
use crate::report::{CheckResult, Report};
use crate::sample::Sampler;

pub(crate) fn vec_of(p: &NCPoly) -> SparseVec<Word> {
    p.terms().map(|(w, c)| (w.clone(), c.clone())).collect()
}

fn tensor_vec(t: &TensorPoly) -> SparseVec<TensorKey> {
    t.terms().map(|(k, c)| (k.clone(), c.clone())).collect()
}

fn combo_poly(a: &HopfPresentation, words: &[Word], combo: &SparseVec<usize>) -> NCPoly {
    NCPoly::from_terms(a.field(), combo.iter().map(|(i, c)| (words[*i].clone(), c.clone())))
}

/// An algebra map between presentations given on generators.
#[derive(Debug, Clone)]
pub struct HopfMorphism {
    source: Arc<HopfPresentation>,
    target: Arc<HopfPresentation>,
    images: BTreeMap<Letter, NCPoly>,
    memo: Memo<Word, NCPoly>,
}

impl HopfMorphism {
    /// Builds the morphism and checks that it kills the relations and
    /// commutes with Δ, ε and S on generators.
    pub fn new(
        source: Arc<HopfPresentation>,
        target: Arc<HopfPresentation>,
        images: BTreeMap<Letter, NCPoly>,
    ) -> Result<Self> {
        let f = Self::new_unchecked(source, target, images)?;
        if let Some(p) = f.problems()?.into_iter().next() {
            return Err(Error::Semantic(p));
        }
        Ok(f)
    }

    /// Only checks that every generator has an image.
    pub fn new_unchecked(
        source: Arc<HopfPresentation>,
        target: Arc<HopfPresentation>,
        images: BTreeMap<Letter, NCPoly>,
    ) -> Result<Self> {
        if source.field() != target.field() {
            return Err(Error::Semantic(format!(
                "`{}` and `{}` are over different fields",
                source.name(),
                target.name()
            )));
        }
        let mut normal = BTreeMap::new();
        for l in source.alphabet().letters() {
            let img = images.get(&l).ok_or_else(|| {
                Error::Semantic(format!("no image for `{}`", source.alphabet().name(l)))
            })?;
            target.alphabet().check_poly(img)?;
            normal.insert(l, target.nf(img)?);
        }
        Ok(HopfMorphism {
            source,
            target,
            images: normal,
            memo: Memo::new(),
        })
    }

    pub fn identity(a: Arc<HopfPresentation>) -> Self {
        let images = a
            .alphabet()
            .letters()
            .map(|l| (l, NCPoly::letter(l, a.field())))
            .collect();
        HopfMorphism {
            source: a.clone(),
            target: a,
            images,
            memo: Memo::new(),
        }
    }

    pub fn source(&self) -> &Arc<HopfPresentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<HopfPresentation> {
        &self.target
    }

    pub fn image(&self, l: Letter) -> &NCPoly {
        &self.images[&l]
    }

    /// Largest degree of a generator image.
    pub fn growth(&self) -> usize {
        self.images.values().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    /// Violations of the morphism conditions.
    pub fn problems(&self) -> Result<Vec<String>> {
        let (s, t) = (&self.source, &self.target);
        let mut out = Vec::new();
        for r in s.relations() {
            if !self.apply(r)?.is_zero() {
                out.push(format!("relation {} does not map to zero", s.show(r)));
            }
        }
        for l in s.alphabet().letters() {
            let name = s.alphabet().name(l);
            let g = NCPoly::letter(l, s.field());
            let img = &self.images[&l];
            let lhs = t.comul(img)?;
            let rhs = t.nf_tensor(&s.comul(&g)?.map_legs(|_, w| self.apply_word(w))?)?;
            if lhs != rhs {
                out.push(format!("comultiplication not preserved on `{name}`"));
            }
            if t.counit(img) != s.counit(&g) {
                out.push(format!("counit not preserved on `{name}`"));
            }
            if t.antipode(img)? != self.apply(&s.antipode(&g)?)? {
                out.push(format!("antipode not preserved on `{name}`"));
            }
        }
        Ok(out)
    }

    pub fn apply_word(&self, w: &Word) -> Result<NCPoly> {
        let t = &self.target;
        if w.is_empty() {
            return Ok(t.one());
        }
        if w.degree() == 1 {
            return Ok(self.images[&w.letters()[0]].clone());
        }
        self.memo.get_or_try(w, || {
            let n = w.degree();
            let head = self.apply_word(&w.subword(0, n - 1))?;
            t.mul(&head, &self.images[&w.letters()[n - 1]])
        })
    }

    pub fn apply(&self, p: &NCPoly) -> Result<NCPoly> {
        self.source.alphabet().check_poly(p)?;
        p.map_linear(|w| self.apply_word(w))
    }
}

/// `k → B → A → H → k` with an optional freeness witness, given as the set
/// of letters of `A` whose normal words form a `B`-basis.
#[derive(Debug, Clone)]
pub struct SequenceSpec {
    pub name: String,
    b: Arc<HopfPresentation>,
    a: Arc<HopfPresentation>,
    h: Arc<HopfPresentation>,
    i: HopfMorphism,
    p: HopfMorphism,
    witness: Option<Vec<Letter>>,
    pub degree: usize,
    spans: Memo<usize, Arc<Echelon<Word>>>,
    prefixes: Memo<Word, bool>,
}

impl SequenceSpec {
    /// Checks that `p ∘ i` is the trivial map on generators of `B`.
    pub fn new(
        name: impl Into<String>,
        i: HopfMorphism,
        p: HopfMorphism,
        witness: Option<Vec<Letter>>,
        degree: usize,
    ) -> Result<Self> {
        let s = Self::new_unchecked(name, i, p, witness, degree)?;
        if let Some(p) = s.composite_problems()?.into_iter().next() {
            return Err(Error::Semantic(p));
        }
        Ok(s)
    }

    pub fn new_unchecked(
        name: impl Into<String>,
        i: HopfMorphism,
        p: HopfMorphism,
        witness: Option<Vec<Letter>>,
        degree: usize,
    ) -> Result<Self> {
        if !Arc::ptr_eq(i.target(), p.source()) && i.target().name() != p.source().name() {
            return Err(Error::Semantic(format!(
                "i lands in `{}` but p starts at `{}`",
                i.target().name(),
                p.source().name()
            )));
        }
        Ok(SequenceSpec {
            name: name.into(),
            b: i.source().clone(),
            a: i.target().clone(),
            h: p.target().clone(),
            i,
            p,
            witness,
            degree,
            spans: Memo::new(),
            prefixes: Memo::new(),
        })
    }

    pub fn b(&self) -> &Arc<HopfPresentation> {
        &self.b
    }

    pub fn a(&self) -> &Arc<HopfPresentation> {
        &self.a
    }

    pub fn h(&self) -> &Arc<HopfPresentation> {
        &self.h
    }

    pub fn i(&self) -> &HopfMorphism {
        &self.i
    }

    pub fn p(&self) -> &HopfMorphism {
        &self.p
    }

    pub fn witness(&self) -> Option<&[Letter]> {
        self.witness.as_deref()
    }

    /// Default slack: the largest relation degree of `A`.
    pub fn default_slack(&self) -> usize {
        self.a.relations().iter().filter_map(|r| r.degree()).max().unwrap_or(1)
    }

    fn composite_problems(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for l in self.b.alphabet().letters() {
            let img = self.p.apply(self.i.image(l))?;
            let expected = NCPoly::constant(self.b.counit(&NCPoly::letter(l, self.b.field())));
            if img != expected {
                out.push(format!(
                    "p(i({})) = {} instead of {}",
                    self.b.alphabet().name(l),
                    self.h.show(&img),
                    self.h.show(&expected)
                ));
            }
        }
        Ok(out)
    }

    /// Echelon form of the span of `i(u)` over normal words `u` of `B` of
    /// degree ≤ `d`.
    fn b_span(&self, d: usize) -> Result<Arc<Echelon<Word>>> {
        self.spans.get_or_try(&d, || {
            let mut ech = Echelon::new(self.a.field());
            for u in self.b.window(d)? {
                ech.insert(&vec_of(&self.i.apply_word(&u)?));
            }
            Ok(Arc::new(ech))
        })
    }

    /// The images `i(u)` of normal words of `B` up to degree `d`.
    pub fn b_window(&self, d: usize) -> Result<Vec<NCPoly>> {
        self.b.window(d)?.iter().map(|u| self.i.apply_word(u)).collect()
    }

    /// Whether `x` lies in the span of `i(B)` within degree `d`.
    pub fn b_membership(&self, x: &NCPoly, d: usize) -> Result<bool> {
        let deg = x.degree().unwrap_or(0);
        if deg > d {
            return Err(Error::refusal(format!(
                "element of degree {deg} exceeds the membership bound {d}"
            )));
        }
        self.a.rewrite().require_degree(d)?;
        let span = self.b_span(d + self.i_slack())?;
        Ok(span.contains(&vec_of(&self.a.nf(x)?)))
    }

    /// Membership with the bound taken from the element itself.
    pub fn in_b(&self, x: &NCPoly) -> Result<bool> {
        self.b_membership(x, x.degree().unwrap_or(0))
    }

    fn i_slack(&self) -> usize {
        usize::from(self.i.growth() == 0)
    }

    fn witness_letters(&self) -> Result<&[Letter]> {
        self.witness.as_deref().ok_or_else(|| {
            Error::refusal(format!("sequence `{}` has no freeness witness", self.name))
        })
    }

    /// Splits `c` as `Σ_s i(b_s)·s` with `s` ranging over words in the
    /// witness letters, by cutting every normal word after its longest
    /// prefix free of witness letters. Valid when the freeness witness holds.
    pub fn decompose_left(&self, c: &NCPoly) -> Result<BTreeMap<Word, NCPoly>> {
        let letters = self.witness_letters()?;
        let c = self.a.nf(c)?;
        let mut out: BTreeMap<Word, NCPoly> = BTreeMap::new();
        for (w, coef) in c.terms() {
            let ls = w.letters();
            let cut = ls.iter().position(|l| letters.contains(l)).unwrap_or(ls.len());
            let (prefix, suffix) = (w.subword(0, cut), w.subword(cut, ls.len()));
            if suffix.letters().iter().any(|l| !letters.contains(l)) {
                return Err(Error::refusal(format!(
                    "normal word {} does not factor over the witness letters",
                    self.a.alphabet().word_string(w)
                )));
            }
            let ok = self
                .prefixes
                .get_or_try(&prefix, || self.in_b(&NCPoly::word(prefix.clone(), self.a.field())))?;
            if !ok {
                return Err(Error::refusal(format!(
                    "prefix {} of {} is not in the image of i",
                    self.a.alphabet().word_string(&prefix),
                    self.a.alphabet().word_string(w)
                )));
            }
            out.entry(suffix)
                .or_insert_with(|| NCPoly::zero(self.a.field()))
                .add_term(prefix, coef);
        }
        out.retain(|_, p| !p.is_zero());
        Ok(out)
    }

    /// Seeded random elements of `i(B)` of degree ≤ `d`.
    pub fn b_samples(&self, seed: u64, d: usize, n: usize) -> Result<Vec<NCPoly>> {
        let mut s = Sampler::new(seed, self.b.window(d)?, self.b.field());
        (0..n).map(|_| self.i.apply(&s.poly())).collect()
    }

    /// Seeded random elements of `i(B)⁺`.
    pub fn b_plus_samples(&self, seed: u64, d: usize, n: usize) -> Result<Vec<NCPoly>> {
        let mut s = Sampler::new(seed, self.b.window(d)?, self.b.field());
        (0..n)
            .map(|_| {
                let b = s.poly();
                let bp = &b - &NCPoly::constant(self.b.counit(&b));
                self.i.apply(&bp)
            })
            .collect()
    }

    /// `i(x) − ε(x)` for the generators `x` of `B`.
    fn b_plus_generators(&self) -> Result<Vec<NCPoly>> {
        self.b
            .alphabet()
            .letters()
            .map(|l| {
                let eps = self.b.counit(&NCPoly::letter(l, self.b.field()));
                Ok(self.i.image(l) - &NCPoly::constant(eps))
            })
            .collect()
    }
}

/// Linear independence of `i` on the degree-`d` window of the source.
pub fn check_injectivity(i: &HopfMorphism, d: usize) -> Result<CheckResult> {
    let (s, t) = (i.source(), i.target());
    t.rewrite().require_degree(d * i.growth().max(1))?;
    let words = s.window(d)?;
    let imgs: Vec<_> = words
        .iter()
        .map(|w| Ok(vec_of(&i.apply_word(w)?)))
        .collect::<Result<_>>()?;
    let name = format!("no kernel up to degree {d}");
    Ok(match kernel(s.field(), &imgs).first() {
        None => CheckResult::pass(name, words.len()),
        Some(k) => CheckResult::fail(name, words.len(), s.show(&combo_poly(s, &words, k))),
    })
}

/// Every normal word of the target up to degree `d` is reached from the
/// source window of degree `search`.
pub fn check_surjectivity(p: &HopfMorphism, d: usize, search: usize) -> Result<CheckResult> {
    let (s, t) = (p.source(), p.target());
    let search = search.max(d);
    let mut ech = Echelon::new(s.field());
    for w in s.window(search)? {
        ech.insert(&vec_of(&p.apply_word(&w)?));
    }
    let targets = t.window(d)?;
    let missed: Vec<String> = targets
        .iter()
        .filter(|w| !ech.contains(&vec_of(&NCPoly::word((*w).clone(), t.field()))))
        .map(|w| t.alphabet().word_string(w))
        .collect();
    let name = format!("surjectivity up to degree {d}");
    Ok(if missed.is_empty() {
        CheckResult::pass(name, targets.len())
    } else {
        let shown: Vec<&str> = missed.iter().take(5).map(String::as_str).collect();
        CheckResult::fail(name, targets.len(), format!("unreached: {}", shown.join(", ")))
    })
}

fn kernel_of_p(seq: &SequenceSpec, d: usize) -> Result<Vec<NCPoly>> {
    let a = seq.a();
    let words = a.window(d)?;
    let imgs: Vec<_> = words
        .iter()
        .map(|w| Ok(vec_of(&seq.p().apply_word(w)?)))
        .collect::<Result<_>>()?;
    Ok(kernel(a.field(), &imgs)
        .iter()
        .map(|k| combo_poly(a, &words, k))
        .collect())
}

/// `Ker p` against `i(B)⁺A` and `Ai(B)⁺` on the window, each inclusion
/// reported separately.
pub fn check_kernel_condition(seq: &SequenceSpec, d: usize, slack: usize) -> Result<Vec<CheckResult>> {
    let a = seq.a();
    a.rewrite().require_degree(d + slack)?;
    let ker = kernel_of_p(seq, d)?;
    let gens = seq.b_plus_generators()?;
    let wide = a.window(d + slack)?;
    let mut out = Vec::new();
    for (side, label) in [(0, "i(B)+A"), (1, "Ai(B)+")] {
        let mut ech = Echelon::new(a.field());
        let mut products = Vec::new();
        for t in &gens {
            let td = t.degree().unwrap_or(0);
            for w in wide.iter().filter(|w| w.degree() + td <= d + slack) {
                let wp = NCPoly::word(w.clone(), a.field());
                let prod = if side == 0 { a.mul(t, &wp)? } else { a.mul(&wp, t)? };
                ech.insert(&vec_of(&prod));
                products.push(prod);
            }
        }
        out.push(CheckResult::run(format!("ker p ⊆ {label}"), &ker, |k| {
            Ok::<_, Error>((!ech.contains(&vec_of(k))).then(|| a.show(k)))
        })?);
        out.push(CheckResult::run(format!("{label} ⊆ ker p"), &products, |x| {
            Ok::<_, Error>((!seq.p().apply(x)?.is_zero()).then(|| a.show(x)))
        })?);
    }
    Ok(out)
}

/// Coinvariants of the window against the window image of `i`.
pub fn check_coinvariants(seq: &SequenceSpec, d: usize, slack: usize) -> Result<Vec<CheckResult>> {
    let a = seq.a();
    let f = a.field();
    a.rewrite().require_degree(d)?;
    let words = a.window(d)?;
    let span = seq.b_span(d + slack)?;
    let images = seq.b_window(d + slack)?;
    let mut out = Vec::new();
    for (leg, label) in [(1usize, "right"), (0usize, "left")] {
        let defect = |x: &NCPoly| -> Result<TensorPoly> {
            let t = a.comul(x)?.apply_leg(leg, |w| seq.p().apply_word(w))?;
            let unit = if leg == 1 {
                TensorPoly::from_legs(&[x.clone(), NCPoly::one(f)])
            } else {
                TensorPoly::from_legs(&[NCPoly::one(f), x.clone()])
            };
            Ok(t.sub(&unit))
        };
        let vecs: Vec<_> = words
            .iter()
            .map(|w| Ok(tensor_vec(&defect(&NCPoly::word(w.clone(), f))?)))
            .collect::<Result<_>>()?;
        let coinv: Vec<NCPoly> = kernel(f, &vecs).iter().map(|k| combo_poly(a, &words, k)).collect();
        out.push(CheckResult::run(format!("{label} coinvariants ⊆ i(B)"), &coinv, |x| {
            Ok::<_, Error>((!span.contains(&vec_of(x))).then(|| a.show(x)))
        })?);
        let in_window: Vec<&NCPoly> = images.iter().filter(|x| x.degree().unwrap_or(0) <= d).collect();
        out.push(CheckResult::run(format!("i(B) ⊆ {label} coinvariants"), in_window, |x| {
            Ok::<_, Error>((!defect(x)?.is_zero()).then(|| a.show(x)))
        })?);
    }
    Ok(out)
}

/// Products of `i(B)` with the witness words are independent and span the
/// window, on both sides.
pub fn check_freeness_witness(seq: &SequenceSpec, letters: &[Letter], d: usize) -> Result<Vec<CheckResult>> {
    let a = seq.a();
    let f = a.field();
    a.rewrite().require_degree(d)?;
    let window = a.window(d)?;
    let wit: Vec<&Word> = window
        .iter()
        .filter(|w| w.letters().iter().all(|l| letters.contains(l)))
        .collect();
    let bimages: Vec<NCPoly> = seq.b_window(d)?;
    let mut out = Vec::new();
    for (side, label) in [(0, "left"), (1, "right")] {
        let mut ech = Echelon::tracking(f);
        let mut labels = Vec::new();
        let mut dependency = None;
        for bi in &bimages {
            let bd = bi.degree().unwrap_or(0);
            for w in wit.iter().filter(|w| w.degree() + bd <= d) {
                let wp = NCPoly::word((*w).clone(), f);
                let prod = if side == 0 { a.mul(bi, &wp)? } else { a.mul(&wp, bi)? };
                labels.push(if side == 0 {
                    format!("({})*{}", a.show(bi), a.alphabet().word_string(w))
                } else {
                    format!("{}*({})", a.alphabet().word_string(w), a.show(bi))
                });
                if let Some(dep) = ech.insert(&vec_of(&prod)) {
                    if dependency.is_none() {
                        let rhs: Vec<String> = dep.keys().map(|k| labels[*k].clone()).collect();
                        dependency = Some(format!("{} depends on {}", labels.last().unwrap(), rhs.join(", ")));
                    }
                }
            }
        }
        let n = labels.len();
        out.push(match dependency {
            None => CheckResult::pass(format!("{label} products independent"), n),
            Some(w) => CheckResult::fail(format!("{label} products independent"), n, w),
        });
        let missing = window
            .iter()
            .find(|w| !ech.contains(&vec_of(&NCPoly::word((*w).clone(), f))));
        out.push(match missing {
            None => CheckResult::pass(format!("{label} products span the window"), window.len()),
            Some(w) => CheckResult::fail(
                format!("{label} products span the window"),
                window.len(),
                a.alphabet().word_string(w),
            ),
        });
    }
    Ok(out)
}

/// `p ∘ i = η ∘ ε` on seeded elements of `B`.
pub fn check_composite(seq: &SequenceSpec, ctx: &SweedlerContext) -> Result<CheckResult> {
    let b = seq.b();
    let mut s = Sampler::new(ctx.seed, b.window(ctx.max_degree)?, b.field());
    let mut cases: Vec<NCPoly> = b.alphabet().letters().map(|l| NCPoly::letter(l, b.field())).collect();
    cases.extend((0..ctx.samples).map(|_| s.poly()));
    CheckResult::run("p∘i = η∘ε", &cases, |x| {
        let img = seq.p().apply(&seq.i().apply(x)?)?;
        Ok::<_, Error>((img != NCPoly::constant(b.counit(x))).then(|| b.show(x)))
    })
}

/// The exactness battery at degree `d`.
pub fn certify(seq: &SequenceSpec, d: usize, slack: usize, ctx: &SweedlerContext) -> Result<Report> {
    let mut rep = Report::new(format!("exactness of {}", seq.name))
        .with("sequence", format!("{} -> {} -> {}", seq.b().name(), seq.a().name(), seq.h().name()))
        .with("degree", d)
        .with("slack", slack);
    rep.push(check_injectivity(seq.i(), d)?);
    rep.push(check_surjectivity(seq.p(), d, d)?);
    for c in check_kernel_condition(seq, d, slack)? {
        rep.push(c);
    }
    for c in check_coinvariants(seq, d, slack)? {
        rep.push(c);
    }
    match seq.witness() {
        Some(ls) => {
            for c in check_freeness_witness(seq, ls, d)? {
                rep.push(c);
            }
        }
        None => rep.push(CheckResult::fail("freeness witness", 0, "no witness supplied")),
    }
    rep.push(check_composite(seq, ctx)?);
    Ok(rep)
}

/// How `φ` is evaluated in [`tor0_iso_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tor0Variant {
    /// `a⊗v ↦ p(a)⊗v`
    Faithful,
    /// `a⊗v ↦ ε(a)·1⊗v` (a negative control)
    Counit,
}

/// `Tor₀^B(k, A⊗V) ≅ H⊗V` on the window: `ker φ = [A⊗V, B]` and `φ` onto.
pub fn tor0_iso_check(
    seq: &SequenceSpec,
    v_dim: usize,
    d: usize,
    slack: usize,
    variant: Tor0Variant,
) -> Result<Vec<CheckResult>> {
    let (a, h) = (seq.a(), seq.h());
    let f = a.field();
    a.rewrite().require_degree(d + slack)?;
    let phi = |x: &NCPoly| -> Result<NCPoly> {
        match variant {
            Tor0Variant::Faithful => seq.p().apply(x),
            Tor0Variant::Counit => Ok(NCPoly::constant(a.counit(x))),
        }
    };
    let tensor = |x: &NCPoly, v: usize| -> SparseVec<(Word, usize)> {
        x.terms().map(|(w, c)| ((w.clone(), v), c.clone())).collect()
    };
    let words = a.window(d)?;
    let mut inputs = Vec::new();
    let mut images = Vec::new();
    for v in 0..v_dim {
        for w in &words {
            let x = NCPoly::word(w.clone(), f);
            images.push(tensor(&phi(&x)?, v));
            inputs.push(tensor(&x, v));
        }
    }
    let ker: Vec<SparseVec<(Word, usize)>> = kernel(f, &images)
        .iter()
        .map(|k| {
            let mut acc = SparseVec::new();
            for (i, c) in k {
                crate::linalg::axpy(&mut acc, c, &inputs[*i]);
            }
            acc
        })
        .collect();
    let mut ech = Echelon::new(f);
    let mut gens = Vec::new();
    let wide = a.window(d + slack)?;
    for t in seq.b_plus_generators()? {
        let td = t.degree().unwrap_or(0);
        for w in wide.iter().filter(|w| w.degree() + td <= d + slack) {
            let prod = a.mul(&t, &NCPoly::word(w.clone(), f))?;
            for v in 0..v_dim {
                ech.insert(&tensor(&prod, v));
                gens.push((prod.clone(), v));
            }
        }
    }
    let show = |x: &SparseVec<(Word, usize)>| -> String {
        let parts: Vec<String> = (0..v_dim)
            .filter_map(|v| {
                let p = NCPoly::from_terms(
                    f,
                    x.iter().filter(|((_, j), _)| *j == v).map(|((w, _), c)| (w.clone(), c.clone())),
                );
                (!p.is_zero()).then(|| format!("({}) (x) v{}", a.show(&p), v + 1))
            })
            .collect();
        parts.join(" + ")
    };
    let mut out = Vec::new();
    out.push(CheckResult::run("ker φ ⊆ [A⊗V, B]", &ker, |k| {
        Ok::<_, Error>((!ech.contains(k)).then(|| show(k)))
    })?);
    out.push(CheckResult::run("[A⊗V, B] ⊆ ker φ", &gens, |(x, v)| {
        Ok::<_, Error>((!phi(x)?.is_zero()).then(|| show(&tensor(x, *v))))
    })?);
    let mut img = Echelon::new(f);
    for x in &images {
        img.insert(x);
    }
    let targets: Vec<(Word, usize)> = (0..v_dim)
        .flat_map(|v| h.window(d).unwrap_or_default().into_iter().map(move |w| (w, v)))
        .collect();
    out.push(CheckResult::run("φ onto H⊗V", &targets, |(w, v)| {
        let mut t = SparseVec::new();
        t.insert((w.clone(), *v), f.one());
        Ok::<_, Error>((!img.contains(&t)).then(|| format!("{} (x) v{}", h.alphabet().word_string(w), v + 1)))
    })?);
    Ok(out)
}

/// Key-value text of a sequence file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceFile {
    pub name: String,
    pub b: String,
    pub a: String,
    pub h: String,
    pub i: (usize, String),
    pub p: (usize, String),
    pub witness: Option<Vec<String>>,
    pub degree: Option<usize>,
    pub checked: bool,
}

impl SequenceFile {
    /// Parses `sequence NAME` followed by `key: value` lines; indented lines
    /// continue the previous value.
    pub fn parse(text: &str) -> Result<Self> {
        let perr = |line: usize, msg: String| Error::Parse {
            kind: crate::error::ParseErrorKind::Syntax,
            line,
            col: 1,
            msg,
        };
        let mut name = None;
        let mut fields: Vec<(String, usize, String)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            if body.starts_with(char::is_whitespace) {
                match fields.last_mut() {
                    Some(f) => {
                        let sep = if f.2.trim_end().ends_with(',') || f.2.is_empty() { " " } else { ", " };
                        f.2.push_str(sep);
                        f.2.push_str(body.trim());
                    }
                    None => return Err(perr(line, "continuation line without a key".into())),
                }
                continue;
            }
            if let Some(rest) = body.trim().strip_prefix("sequence ") {
                name = Some(rest.trim().to_string());
                continue;
            }
            let (k, v) = body
                .split_once(':')
                .ok_or_else(|| perr(line, format!("expected `key: value`, found `{}`", body.trim())))?;
            fields.push((k.trim().to_string(), line, v.trim().to_string()));
        }
        let name = name.ok_or_else(|| perr(1, "missing `sequence NAME` header".into()))?;
        let get = |k: &str| fields.iter().find(|f| f.0 == k);
        let need = |k: &str| {
            get(k)
                .map(|f| (f.1, f.2.trim_end_matches(',').trim().to_string()))
                .ok_or_else(|| perr(1, format!("missing `{k}:`")))
        };
        for f in &fields {
            if !["B", "A", "H", "i", "p", "witness", "degree", "morphisms"].contains(&f.0.as_str()) {
                return Err(perr(f.1, format!("unknown key `{}`", f.0)));
            }
        }
        let witness = match get("witness") {
            None => None,
            Some(f) if f.2.trim() == "none" => None,
            Some(f) => Some(dsl::parse_names(&f.2, f.1)?),
        };
        let degree = match get("degree") {
            None => None,
            Some(f) => Some(
                f.2.parse()
                    .map_err(|_| perr(f.1, format!("bad degree `{}`", f.2)))?,
            ),
        };
        let checked = match get("morphisms") {
            None => true,
            Some(f) if f.2 == "checked" => true,
            Some(f) if f.2 == "unchecked" => false,
            Some(f) => return Err(perr(f.1, format!("expected `checked` or `unchecked`, found `{}`", f.2))),
        };
        Ok(SequenceFile {
            name,
            b: need("B")?.1,
            a: need("A")?.1,
            h: need("H")?.1,
            i: need("i")?,
            p: need("p")?,
            witness,
            degree,
            checked,
        })
    }

    /// Builds the sequence, loading the three presentations with `load`.
    pub fn build(&self, load: &mut dyn FnMut(&str) -> Result<Arc<HopfPresentation>>) -> Result<SequenceSpec> {
        let b = load(&self.b)?;
        let a = load(&self.a)?;
        let h = load(&self.h)?;
        let imap = dsl::parse_assignments(&self.i.1, self.i.0, b.alphabet(), a.alphabet(), a.field())?;
        let pmap = dsl::parse_assignments(&self.p.1, self.p.0, a.alphabet(), h.alphabet(), h.field())?;
        let witness = match &self.witness {
            None => None,
            Some(names) => Some(
                names
                    .iter()
                    .map(|n| {
                        a.alphabet()
                            .letter(n)
                            .ok_or_else(|| Error::Semantic(format!("unknown witness letter `{n}`")))
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let degree = self.degree.unwrap_or(3);
        if self.checked {
            let i = HopfMorphism::new(b, a.clone(), imap)?;
            let p = HopfMorphism::new(a, h, pmap)?;
            SequenceSpec::new(&self.name, i, p, witness, degree)
        } else {
            let i = HopfMorphism::new_unchecked(b, a.clone(), imap)?;
            let p = HopfMorphism::new_unchecked(a, h, pmap)?;
            SequenceSpec::new_unchecked(&self.name, i, p, witness, degree)
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::dsl::parse_presentation;

    pub(crate) const KZ: &str = "\
algebra kZ over Q
gens: g, ginv
inverses: (g, ginv)
comul: g -> g (x) g, ginv -> ginv (x) ginv
counit: g -> 1, ginv -> 1
antipode: g -> ginv, ginv -> g
antipode_inv: g -> ginv, ginv -> g
";

    pub(crate) const H1: &str = "\
algebra H1 over Q
gens: x, g, ginv
inverses: (g, ginv)
comul: x -> 1 (x) x + x (x) g, g -> g (x) g, ginv -> ginv (x) ginv
counit: x -> 0, g -> 1, ginv -> 1
antipode: x -> -x*ginv, g -> ginv, ginv -> g
antipode_inv: x -> -ginv*x, g -> ginv, ginv -> g
";

    pub(crate) const H2: &str = "\
algebra H2 over Q
gens: u11, u11inv, u12, u22, u22inv
inverses: (u11, u11inv), (u22, u22inv)
rels: u11*u12 - u12*u11, u11*u22 - u22*u11
comul:
  u11 -> u11 (x) u11
  u11inv -> u11inv (x) u11inv
  u12 -> u11 (x) u12 + u12 (x) u22
  u22 -> u22 (x) u22
  u22inv -> u22inv (x) u22inv
counit: u11 -> 1, u11inv -> 1, u12 -> 0, u22 -> 1, u22inv -> 1
antipode: u11 -> u11inv, u11inv -> u11, u12 -> -u11inv*u12*u22inv, u22 -> u22inv, u22inv -> u22
antipode_inv: u11 -> u11inv, u11inv -> u11, u12 -> -u22inv*u12*u11inv, u22 -> u22inv, u22inv -> u22
";

    pub(crate) const KZ_RESOLVED: &str = "\
algebra kZ over Q
gens: g, ginv
inverses: (g, ginv)
comul: g -> g (x) g, ginv -> ginv (x) ginv
counit: g -> 1, ginv -> 1
antipode: g -> ginv, ginv -> g
antipode_inv: g -> ginv, ginv -> g
resolution:
  ranks: 1, 1
  d1: [g - 1]
";

    pub(crate) const H2_RESOLVED: &str = "\
algebra H2 over Q
gens: u11, u11inv, u12, u22, u22inv
inverses: (u11, u11inv), (u22, u22inv)
rels: u11*u12 - u12*u11, u11*u22 - u22*u11
comul:
  u11 -> u11 (x) u11
  u11inv -> u11inv (x) u11inv
  u12 -> u11 (x) u12 + u12 (x) u22
  u22 -> u22 (x) u22
  u22inv -> u22inv (x) u22inv
counit: u11 -> 1, u11inv -> 1, u12 -> 0, u22 -> 1, u22inv -> 1
antipode: u11 -> u11inv, u11inv -> u11, u12 -> -u11inv*u12*u22inv, u22 -> u22inv, u22inv -> u22
antipode_inv: u11 -> u11inv, u11inv -> u11, u12 -> -u22inv*u12*u11inv, u22 -> u22inv, u22inv -> u22
resolution:
  ranks: 1, 3, 2
  d1: [u11 - 1] [u22 - 1] [u12]
  d2: [u22 - 1, 1 - u11, 0] [u12, 0, 1 - u11]
";

    fn load(text: &str) -> Arc<HopfPresentation> {
        Arc::new(parse_presentation(text).unwrap().hopf)
    }

    fn morphism(s: &Arc<HopfPresentation>, t: &Arc<HopfPresentation>, spec: &str, checked: bool) -> Result<HopfMorphism> {
        let m = dsl::parse_assignments(spec, 1, s.alphabet(), t.alphabet(), t.field())?;
        if checked {
            HopfMorphism::new(s.clone(), t.clone(), m)
        } else {
            HopfMorphism::new_unchecked(s.clone(), t.clone(), m)
        }
    }

    pub(crate) fn seq() -> SequenceSpec {
        let (kz, h2, h1) = (load(KZ), load(H2), load(H1));
        let i = morphism(&kz, &h2, "g -> u11, ginv -> u11inv", true).unwrap();
        let p = morphism(&h2, &h1, "u11 -> 1, u11inv -> 1, u12 -> x, u22 -> g, u22inv -> ginv", true).unwrap();
        let w = ["u12", "u22", "u22inv"].iter().map(|n| h2.alphabet().letter(n).unwrap()).collect();
        SequenceSpec::new("kZ-H2-H1", i, p, Some(w), 4).unwrap()
    }

    #[test]
    fn morphism_checks() {
        let (kz, h2) = (load(KZ), load(H2));
        assert!(morphism(&kz, &h2, "g -> u11, ginv -> u11inv", true).is_ok());
        let bad = morphism(&kz, &h2, "g -> u12, ginv -> u11inv", true).unwrap_err();
        assert!(bad.to_string().contains("does not map to zero") || bad.to_string().contains("not preserved"));
    }

    #[test]
    fn injectivity_examples() {
        let (kz, h2) = (load(KZ), load(H2));
        let i = morphism(&kz, &h2, "g -> u11, ginv -> u11inv", true).unwrap();
        assert!(check_injectivity(&i, 4).unwrap().passed);
        assert!(check_injectivity(&HopfMorphism::identity(h2.clone()), 2).unwrap().passed);
        let triv = morphism(&kz, &h2, "g -> 1, ginv -> 1", true).unwrap();
        let r = check_injectivity(&triv, 2).unwrap();
        assert!(!r.passed);
        assert_eq!(r.witness.as_deref(), Some("g - 1"));
    }

    #[test]
    fn surjectivity_examples() {
        let s = seq();
        assert!(check_surjectivity(s.p(), 3, 3).unwrap().passed);
        let r = check_surjectivity(s.i(), 1, 1).unwrap();
        assert!(!r.passed);
        assert!(r.witness.unwrap().contains("u12"));
    }

    #[test]
    fn kernel_and_coinvariants_pass() {
        let s = seq();
        assert!(check_kernel_condition(&s, 3, 2).unwrap().iter().all(|c| c.passed));
        assert!(check_coinvariants(&s, 3, 2).unwrap().iter().all(|c| c.passed));
    }

    #[test]
    fn corrupted_p_fails_kernel_condition_in_degree_one() {
        let (kz, h2, h1) = (load(KZ), load(H2), load(H1));
        let i = morphism(&kz, &h2, "g -> u11, ginv -> u11inv", true).unwrap();
        let p = morphism(&h2, &h1, "u11 -> 1, u11inv -> 1, u12 -> x, u22 -> 1, u22inv -> 1", false).unwrap();
        assert!(!p.problems().unwrap().is_empty());
        let s = SequenceSpec::new_unchecked("bad", i, p, None, 3).unwrap();
        let res = check_kernel_condition(&s, 3, 2).unwrap();
        let bad = res.iter().find(|c| !c.passed).unwrap();
        assert_eq!(bad.witness.as_deref(), Some("u22 - 1"));
    }

    #[test]
    fn membership_examples() {
        let s = seq();
        let a = s.a();
        assert!(s.b_membership(&NCPoly::zero(a.field()), 0).unwrap());
        let u11 = a.gen("u11").unwrap();
        assert!(s.b_membership(&a.mul(&u11, &u11).unwrap(), 2).unwrap());
        assert!(!s.b_membership(&a.gen("u12").unwrap(), 2).unwrap());
        assert!(s.b_membership(&a.mul(&u11, &u11).unwrap(), 1).unwrap_err().is_refusal());
    }

    #[test]
    fn freeness_and_tor0() {
        let s = seq();
        let w = s.witness().unwrap().to_vec();
        assert!(check_freeness_witness(&s, &w, 3).unwrap().iter().all(|c| c.passed));
        assert!(tor0_iso_check(&s, 1, 3, 2, Tor0Variant::Faithful).unwrap().iter().all(|c| c.passed));
        assert!(tor0_iso_check(&s, 0, 3, 2, Tor0Variant::Faithful).unwrap().iter().all(|c| c.passed));
        assert!(!tor0_iso_check(&s, 1, 2, 2, Tor0Variant::Counit).unwrap().iter().all(|c| c.passed));
    }

    #[test]
    fn decomposition_reassembles() {
        let s = seq();
        let a = s.a();
        let c = crate::dsl::parse_poly("u11*u12*u22 - 2*u11inv*u12 + u22", a.alphabet(), a.field()).unwrap();
        let parts = s.decompose_left(&c).unwrap();
        let mut back = NCPoly::zero(a.field());
        for (w, b) in &parts {
            back = &back + &a.mul(b, &NCPoly::word(w.clone(), a.field())).unwrap();
        }
        assert_eq!(back, a.nf(&c).unwrap());
        assert_eq!(parts.len(), 3);
    }

    #[test]
    fn sequence_file_parses() {
        let text = "sequence demo\nB: kz.hopf\nA: h2.hopf\nH: h1.hopf\ni: g -> u11,\n  ginv -> u11inv\np: u11 -> 1\nwitness: u12, u22\ndegree: 4\n";
        let f = SequenceFile::parse(text).unwrap();
        assert_eq!(f.i.1, "g -> u11, ginv -> u11inv");
        assert_eq!(f.degree, Some(4));
        assert!(f.checked);
        assert!(SequenceFile::parse("sequence x\nB: a\nbogus: 1\n").is_err());
    }
}
