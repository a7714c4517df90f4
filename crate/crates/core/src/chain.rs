//! Chain-level checks of the module structures attached to an exact sequence
//! `B → A → H`: the left action `(a ⇀ f)(x) = a₁ f(S(a₂)x)` on
//! `Hom_B(P_q, A)`, the right action `(f ↼ a)(x) = S(a₂) f(S²(a₁)x) a₃` on
//! `Hom_B(P_q, B)`, the comparison map `φ(f⊗m)(n) = f(n)m`, the maps
//! `u: X⊗H → X⊗_B A` and `v` back, and the H-module map
//! `[f]⊗p(a) ↦ p(a)·[f]`.
//!
//! `P_q` is the free module `A^r`. A cochain is B-linear by construction: its
//! values on `s·e_j`, for `s` a product of freeness-witness letters, are drawn
//! deterministically from a hash of `(seed, s, j)`, and it is extended to all
//! of `A^r` through the decomposition `A = ⊕ i(B)·s`.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};
use std::rc::Rc;

use crate::coeffs::Scalar;
use crate::error::{Error, Result};
use crate::exactseq::SequenceSpec;
use crate::freealg::{Letter, NCPoly, TensorPoly, Word};
use crate::homcalc::{ext_certificate, show_vec, ExtVerdict, Resolution};
use crate::hopf::{HopfPresentation, SweedlerContext};
use crate::report::{CheckResult, Report};
use crate::sample::Sampler;

/// Faithful formulas, or the paired negative control of each check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Faithful,
    Corrupted,
}

pub type Cochain<'a> = Rc<dyn Fn(&[NCPoly]) -> Result<NCPoly> + 'a>;

/// Where sampled cochains take their values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Values {
    InB,
    InA,
}

const COEFFS: [i64; 5] = [1, -1, 2, -2, 3];

fn mix(seed: u64, s: &Word, j: usize) -> u64 {
    let mut h = DefaultHasher::new();
    (seed, s.letters(), j).hash(&mut h);
    h.finish()
}

/// A deterministic B-linear map `A^rank → A`.
pub fn sample_cochain<'a>(seq: &'a SequenceSpec, rank: usize, seed: u64, values: Values) -> Result<Cochain<'a>> {
    let a = seq.a();
    let f = a.field();
    let pool: Vec<NCPoly> = match values {
        Values::InB => seq.b_window(1)?,
        Values::InA => a.window(1)?.into_iter().map(|w| NCPoly::word(w, f)).collect(),
    };
    let value = move |s: &Word, j: usize| {
        let h = mix(seed, s, j);
        let mut v = NCPoly::zero(f);
        v.add_scaled(&pool[(h % pool.len() as u64) as usize], &f.from_i64(COEFFS[((h >> 16) % 5) as usize]));
        v.add_scaled(&pool[((h >> 32) % pool.len() as u64) as usize], &f.from_i64(COEFFS[((h >> 48) % 5) as usize]));
        v
    };
    Ok(Rc::new(move |x: &[NCPoly]| {
        if x.len() != rank {
            return Err(Error::Semantic(format!("cochain on rank {rank} applied to rank {}", x.len())));
        }
        let mut out = NCPoly::zero(f);
        for (j, xj) in x.iter().enumerate() {
            for (s, prefix) in seq.decompose_left(xj)? {
                out = &out + &a.mul(&prefix, &value(&s, j))?;
            }
        }
        Ok(out)
    }))
}

fn left_mul(a: &HopfPresentation, y: &NCPoly, x: &[NCPoly]) -> Result<Vec<NCPoly>> {
    x.iter().map(|c| a.mul(y, c)).collect()
}

fn legs(a: &HopfPresentation, t: &TensorPoly) -> Vec<(Vec<NCPoly>, Scalar)> {
    t.terms()
        .map(|(k, c)| (k.iter().map(|w| NCPoly::word(w.clone(), a.field())).collect(), c.clone()))
        .collect()
}

/// `(a ⇀ f)(x) = a₁ f(S(a₂)x)`; the corrupted form drops `S`.
pub fn star<'a>(a: &'a HopfPresentation, y: &NCPoly, f: Cochain<'a>, variant: Variant) -> Result<Cochain<'a>> {
    let mut terms = Vec::new();
    for (l, c) in legs(a, &a.comul(y)?) {
        let second = match variant {
            Variant::Faithful => a.antipode(&l[1])?,
            Variant::Corrupted => l[1].clone(),
        };
        terms.push((l[0].clone(), second, c));
    }
    Ok(Rc::new(move |x: &[NCPoly]| {
        let mut out = NCPoly::zero(a.field());
        for (a1, s2, c) in &terms {
            let v = f(&left_mul(a, s2, x)?)?;
            out.add_scaled(&a.mul(a1, &v)?, c);
        }
        Ok(out)
    }))
}

/// `(f ↼ a)(x) = S(a₂) f(S²(a₁)x) a₃`; the corrupted form omits `a₃`.
pub fn harpoon<'a>(a: &'a HopfPresentation, f: Cochain<'a>, y: &NCPoly, variant: Variant) -> Result<Cochain<'a>> {
    let mut terms = Vec::new();
    match variant {
        Variant::Faithful => {
            for (l, c) in legs(a, &a.iterated_comul(y, 2)?) {
                terms.push((a.antipode(&l[1])?, a.antipode_power(&l[0], 2)?, l[2].clone(), c));
            }
        }
        Variant::Corrupted => {
            for (l, c) in legs(a, &a.comul(y)?) {
                terms.push((a.antipode(&l[1])?, a.antipode_power(&l[0], 2)?, a.one(), c));
            }
        }
    }
    Ok(Rc::new(move |x: &[NCPoly]| {
        let mut out = NCPoly::zero(a.field());
        for (s2, ss1, a3, c) in &terms {
            let v = f(&left_mul(a, ss1, x)?)?;
            out.add_scaled(&a.product(&[s2, &v, a3])?, c);
        }
        Ok(out)
    }))
}

/// Seeded samples shared by the checks.
struct Samples {
    a: Vec<NCPoly>,
    a2: Vec<NCPoly>,
    b: Vec<NCPoly>,
    b_plus: Vec<NCPoly>,
    x: Vec<Vec<NCPoly>>,
    m: Vec<NCPoly>,
    seeds: Vec<u64>,
}

fn samples(seq: &SequenceSpec, rank: usize, ctx: &SweedlerContext) -> Result<Samples> {
    let a = seq.a();
    let n = ctx.samples;
    let mut s = ctx.sampler(a)?;
    let mut low = Sampler::new(ctx.seed ^ 0x5151, a.window(1)?, a.field()).with_max_terms(2);
    let b_deg = ctx.max_degree.min(2);
    Ok(Samples {
        a: (0..n).map(|_| s.poly()).collect(),
        a2: (0..n).map(|_| low.poly()).collect(),
        b: seq.b_samples(ctx.seed ^ 0xb, b_deg, n)?,
        b_plus: seq.b_plus_samples(ctx.seed ^ 0xbb, b_deg, n)?,
        x: (0..n).map(|_| (0..rank).map(|_| low.poly()).collect()).collect(),
        m: (0..n).map(|_| low.poly()).collect(),
        seeds: (0..n).map(|_| s.fork()).collect(),
    })
}

fn rank_of(res: &Resolution, q: usize) -> usize {
    res.ranks().get(q).copied().unwrap_or(0)
}

fn require_sequence_ring(seq: &SequenceSpec, res: &Resolution) -> Result<()> {
    if res.algebra().name() != seq.a().name() {
        return Err(Error::Semantic(format!(
            "resolution is over `{}`, the sequence's middle term is `{}`",
            res.algebra().name(),
            seq.a().name()
        )));
    }
    Ok(())
}

/// The left action of `H` on `Hom_B(P_q, A)` through lifts to `A`.
pub fn star_action_check(
    seq: &SequenceSpec,
    res: &Resolution,
    q: usize,
    ctx: &SweedlerContext,
    variant: Variant,
) -> Result<Report> {
    require_sequence_ring(seq, res)?;
    let a = seq.a();
    let rank = rank_of(res, q);
    let mut rep = Report::new(format!("left action on Hom_B(P{q}, {})", a.name()))
        .with("sequence", &seq.name)
        .with("rank", rank)
        .with("seed", ctx.seed)
        .with("samples", ctx.samples)
        .with("formula", if variant == Variant::Faithful { "a1 f(S(a2) x)" } else { "a1 f(a2 x)" });
    if rank == 0 {
        rep.push(CheckResult::pass(format!("P{q} is zero"), 0));
        return Ok(rep);
    }
    let sm = samples(seq, rank, ctx)?;
    let idx: Vec<usize> = (0..ctx.samples).collect();
    let cochain = |k: usize| sample_cochain(seq, rank, sm.seeds[k], Values::InA);
    let show_x = |x: &[NCPoly]| show_vec(a, x);

    rep.push(CheckResult::run("p(1) acts as the identity", &idx, |&k| {
        let f = cochain(k)?;
        let g = star(a, &a.one(), f.clone(), variant)?;
        let (l, r) = (g(&sm.x[k])?, f(&sm.x[k])?);
        Ok::<_, Error>((l != r).then(|| format!("x = {}: {} vs {}", show_x(&sm.x[k]), a.show(&l), a.show(&r))))
    })?);
    rep.push(CheckResult::run("independent of the lift of p(a)", &idx, |&k| {
        let f = cochain(k)?;
        let other = &sm.a[k] + &a.mul(&sm.b_plus[k], &sm.a2[k])?;
        let l = star(a, &sm.a[k], f.clone(), variant)?(&sm.x[k])?;
        let r = star(a, &other, f, variant)?(&sm.x[k])?;
        Ok::<_, Error>((l != r).then(|| {
            format!(
                "a = {}, a' = {}, x = {}: {} vs {}",
                a.show(&sm.a[k]),
                a.show(&other),
                show_x(&sm.x[k]),
                a.show(&l),
                a.show(&r)
            )
        }))
    })?);
    rep.push(CheckResult::run("p(a)·f is B-linear", &idx, |&k| {
        let g = star(a, &sm.a[k], cochain(k)?, variant)?;
        let l = g(&left_mul(a, &sm.b[k], &sm.x[k])?)?;
        let r = a.mul(&sm.b[k], &g(&sm.x[k])?)?;
        Ok::<_, Error>((l != r).then(|| {
            format!("a = {}, b = {}, x = {}", a.show(&sm.a[k]), a.show(&sm.b[k]), show_x(&sm.x[k]))
        }))
    })?);
    rep.push(CheckResult::run("(p(a)p(a'))·f = p(a)·(p(a')·f)", &idx, |&k| {
        let f = cochain(k)?;
        let l = star(a, &a.mul(&sm.a[k], &sm.a2[k])?, f.clone(), variant)?(&sm.x[k])?;
        let inner = star(a, &sm.a2[k], f, variant)?;
        let r = star(a, &sm.a[k], inner, variant)?(&sm.x[k])?;
        Ok::<_, Error>((l != r).then(|| {
            format!("a = {}, a' = {}, x = {}", a.show(&sm.a[k]), a.show(&sm.a2[k]), show_x(&sm.x[k]))
        }))
    })?);
    Ok(rep)
}

/// The right action of `A` on `Hom_B(P_q, B)`.
pub fn harpoon_action_check(
    seq: &SequenceSpec,
    res: &Resolution,
    q: usize,
    ctx: &SweedlerContext,
    variant: Variant,
) -> Result<Report> {
    require_sequence_ring(seq, res)?;
    let a = seq.a();
    let rank = rank_of(res, q);
    let mut rep = Report::new(format!("right action on Hom_B(P{q}, {})", seq.b().name()))
        .with("sequence", &seq.name)
        .with("rank", rank)
        .with("seed", ctx.seed)
        .with("samples", ctx.samples)
        .with("formula", if variant == Variant::Faithful { "S(a2) f(S^2(a1) x) a3" } else { "S(a2) f(S^2(a1) x)" });
    if rank == 0 {
        rep.push(CheckResult::pass(format!("P{q} is zero"), 0));
        return Ok(rep);
    }
    let sm = samples(seq, rank, ctx)?;
    let idx: Vec<usize> = (0..ctx.samples).collect();
    let cochain = |k: usize| sample_cochain(seq, rank, sm.seeds[k], Values::InB);
    let show_x = |x: &[NCPoly]| show_vec(a, x);

    rep.push(CheckResult::run("values lie in B", &idx, |&k| {
        let v = harpoon(a, cochain(k)?, &sm.a[k], variant)?(&sm.x[k])?;
        Ok::<_, Error>((!seq.in_b(&v)?).then(|| {
            format!("a = {}, x = {} gives {}", a.show(&sm.a[k]), show_x(&sm.x[k]), a.show(&v))
        }))
    })?);
    rep.push(CheckResult::run("f ↼ 1 = f", &idx, |&k| {
        let f = cochain(k)?;
        let (l, r) = (harpoon(a, f.clone(), &a.one(), variant)?(&sm.x[k])?, f(&sm.x[k])?);
        Ok::<_, Error>((l != r).then(|| format!("x = {}", show_x(&sm.x[k]))))
    })?);
    rep.push(CheckResult::run("f ↼ a is B-linear", &idx, |&k| {
        let g = harpoon(a, cochain(k)?, &sm.a[k], variant)?;
        let l = g(&left_mul(a, &sm.b[k], &sm.x[k])?)?;
        let r = a.mul(&sm.b[k], &g(&sm.x[k])?)?;
        Ok::<_, Error>((l != r).then(|| {
            format!("a = {}, b = {}, x = {}", a.show(&sm.a[k]), a.show(&sm.b[k]), show_x(&sm.x[k]))
        }))
    })?);
    rep.push(CheckResult::run("(f ↼ a) ↼ a' = f ↼ (aa')", &idx, |&k| {
        let f = cochain(k)?;
        let l = harpoon(a, harpoon(a, f.clone(), &sm.a[k], variant)?, &sm.a2[k], variant)?(&sm.x[k])?;
        let r = harpoon(a, f, &a.mul(&sm.a[k], &sm.a2[k])?, variant)?(&sm.x[k])?;
        Ok::<_, Error>((l != r).then(|| {
            format!(
                "a = {}, a' = {}, x = {}: {} vs {}",
                a.show(&sm.a[k]),
                a.show(&sm.a2[k]),
                show_x(&sm.x[k]),
                a.show(&l),
                a.show(&r)
            )
        }))
    })?);
    Ok(rep)
}

/// `φ: Hom_B(N, B) ⊗_B A → Hom_B(N, A)` for `N = B^rank`, with its inverse
/// `ψ(g) = Σ e_j* ⊗ g(e_j)`. An element `Σ f⊗m` is stored canonically as
/// the vector `(Σ f(e_j) m)_j`. The corrupted form is `f(n) ε(m)`.
pub fn phi_map_check(seq: &SequenceSpec, rank: usize, ctx: &SweedlerContext, variant: Variant) -> Result<Report> {
    let a = seq.a();
    let f = a.field();
    let mut rep = Report::new(format!("phi on Hom_B({}^{rank}, -)", seq.b().name()))
        .with("sequence", &seq.name)
        .with("rank", rank)
        .with("seed", ctx.seed)
        .with("samples", ctx.samples)
        .with("formula", if variant == Variant::Faithful { "f(n) m" } else { "f(n) eps(m)" });
    let n = ctx.samples;
    let fs: Vec<Vec<NCPoly>> = (0..n)
        .map(|k| seq.b_samples(ctx.seed ^ (k as u64) << 8, 1, rank))
        .collect::<Result<_>>()?;
    let ns: Vec<Vec<NCPoly>> = (0..n)
        .map(|k| seq.b_samples(ctx.seed ^ 0x77 ^ (k as u64) << 8, 2, rank))
        .collect::<Result<_>>()?;
    let sm = samples(seq, rank, ctx)?;
    let gs: Vec<Vec<NCPoly>> = (0..n)
        .map(|k| {
            let mut s = Sampler::new(sm.seeds[k], a.window(2)?, f);
            Ok((0..rank).map(|_| s.poly()).collect())
        })
        .collect::<Result<_>>()?;
    let idx: Vec<usize> = (0..n).collect();
    // φ(f⊗m) as a function N → A.
    let phi = |fv: &[NCPoly], m: &NCPoly, nv: &[NCPoly]| -> Result<NCPoly> {
        let mut fn_ = NCPoly::zero(f);
        for (nj, fj) in nv.iter().zip(fv) {
            fn_ = &fn_ + &a.mul(nj, fj)?;
        }
        match variant {
            Variant::Faithful => a.mul(&fn_, m),
            Variant::Corrupted => Ok(fn_.scale(&a.counit(m))),
        }
    };
    let basis = |j: usize| -> Vec<NCPoly> {
        (0..rank).map(|i| if i == j { a.one() } else { NCPoly::zero(f) }).collect()
    };
    let canon = |fv: &[NCPoly], m: &NCPoly| -> Result<Vec<NCPoly>> { fv.iter().map(|fj| a.mul(fj, m)).collect() };

    rep.push(CheckResult::run("ψ∘φ = id", &idx, |&k| {
        let g: Vec<NCPoly> = (0..rank).map(|j| phi(&fs[k], &sm.m[k], &basis(j))).collect::<Result<_>>()?;
        let expect = canon(&fs[k], &sm.m[k])?;
        Ok::<_, Error>((g != expect).then(|| {
            format!("f = {}, m = {}: {} vs {}", show_vec(a, &fs[k]), a.show(&sm.m[k]), show_vec(a, &g), show_vec(a, &expect))
        }))
    })?);
    rep.push(CheckResult::run("φ∘ψ = id", &idx, |&k| {
        // ψ(g) = Σ_j e_j* ⊗ g(e_j); φ of it evaluated at n.
        let mut l = NCPoly::zero(f);
        for (j, gj) in gs[k].iter().enumerate() {
            l = &l + &phi(&basis(j), gj, &ns[k])?;
        }
        let mut r = NCPoly::zero(f);
        for (nj, gj) in ns[k].iter().zip(&gs[k]) {
            r = &r + &a.mul(nj, gj)?;
        }
        Ok::<_, Error>((l != r).then(|| format!("g = {}, n = {}", show_vec(a, &gs[k]), show_vec(a, &ns[k]))))
    })?);
    rep.push(CheckResult::run("φ(f·b ⊗ m) = φ(f ⊗ b·m)", &idx, |&k| {
        let fb: Vec<NCPoly> = fs[k].iter().map(|fj| a.mul(fj, &sm.b[k])).collect::<Result<_>>()?;
        let l = phi(&fb, &sm.m[k], &ns[k])?;
        let r = phi(&fs[k], &a.mul(&sm.b[k], &sm.m[k])?, &ns[k])?;
        Ok::<_, Error>((l != r).then(|| {
            format!("f = {}, b = {}, m = {}", show_vec(a, &fs[k]), a.show(&sm.b[k]), a.show(&sm.m[k]))
        }))
    })?);
    Ok(rep)
}

/// The four-line computation showing that `φ` is A-linear:
/// `φ(a → (f⊗m))(x)` rewritten step by step down to `(a ⇀ φ(f⊗m))(x)`.
pub fn phi_linearity_check(
    seq: &SequenceSpec,
    res: &Resolution,
    q: usize,
    ctx: &SweedlerContext,
    variant: Variant,
) -> Result<Report> {
    require_sequence_ring(seq, res)?;
    let a = seq.a();
    if !a.has_antipode_inv() {
        return Err(Error::refusal(format!("`{}` has no inverse antipode", a.name())));
    }
    let f = a.field();
    let rank = rank_of(res, q);
    let mut rep = Report::new(format!("A-linearity of phi on Hom_B(P{q}, {})", seq.b().name()))
        .with("sequence", &seq.name)
        .with("rank", rank)
        .with("seed", ctx.seed)
        .with("samples", ctx.samples);
    if rank == 0 {
        rep.push(CheckResult::pass(format!("P{q} is zero"), 0));
        return Ok(rep);
    }
    let sm = samples(seq, rank, ctx)?;
    let idx: Vec<usize> = (0..ctx.samples).collect();
    type Lines = [NCPoly; 5];
    let lines = |k: usize| -> Result<Lines> {
        let fk = sample_cochain(seq, rank, sm.seeds[k], Values::InB)?;
        let (y, x, m) = (&sm.a[k], &sm.x[k], &sm.m[k]);
        let mut l = [NCPoly::zero(f), NCPoly::zero(f), NCPoly::zero(f), NCPoly::zero(f), NCPoly::zero(f)];
        for (t, c) in legs(a, &a.comul(y)?) {
            let twisted = match variant {
                Variant::Faithful => a.antipode_inv(&t[1])?,
                Variant::Corrupted => a.antipode(&t[1])?,
            };
            let v = harpoon(a, fk.clone(), &twisted, Variant::Faithful)?(x)?;
            l[0].add_scaled(&a.product(&[&v, &t[0], m])?, &c);
        }
        for (t, c) in legs(a, &a.iterated_comul(y, 3)?) {
            let sinv2 = match variant {
                Variant::Faithful => a.antipode_inv(&t[1])?,
                Variant::Corrupted => a.antipode(&t[1])?,
            };
            let (sinv3, sinv4) = (a.antipode_inv(&t[2])?, a.antipode_inv(&t[3])?);
            let v = fk(&left_mul(a, &a.antipode_power(&sinv4, 2)?, x)?)?;
            l[1].add_scaled(&a.product(&[&a.antipode(&sinv3)?, &v, &sinv2, &t[0], m])?, &c);
            let v = fk(&left_mul(a, &a.antipode(&t[3])?, x)?)?;
            l[2].add_scaled(&a.product(&[&t[2], &v, &sinv2, &t[0], m])?, &c);
        }
        for (t, c) in legs(a, &a.comul(y)?) {
            let v = fk(&left_mul(a, &a.antipode(&t[1])?, x)?)?;
            l[3].add_scaled(&a.product(&[&t[0], &v, m])?, &c);
        }
        // a ⇀ φ(f⊗m), with φ(f⊗m) = f(·)m.
        let fk2 = fk.clone();
        let m2 = m.clone();
        let g: Cochain = Rc::new(move |z: &[NCPoly]| a.mul(&fk2(z)?, &m2));
        l[4] = star(a, y, g, Variant::Faithful)?(x)?;
        Ok(l)
    };
    let all: Vec<Lines> = idx.iter().map(|&k| lines(k)).collect::<Result<_>>()?;
    let names = [
        "(f ↼ S⁻¹(a2))(x) a1 m = S(S⁻¹(a3)) f(S²(S⁻¹(a4))x) S⁻¹(a2) a1 m",
        "… = a3 f(S(a4)x) S⁻¹(a2) a1 m",
        "… = a1 f(S(a2)x) m",
        "… = (a ⇀ φ(f⊗m))(x)",
    ];
    for (step, name) in names.iter().enumerate() {
        rep.push(CheckResult::run(*name, &idx, |&k| {
            let (l, r) = (&all[k][step], &all[k][step + 1]);
            Ok::<_, Error>((l != r).then(|| {
                format!(
                    "a = {}, x = {}, m = {}: {} vs {}",
                    a.show(&sm.a[k]),
                    show_vec(a, &sm.x[k]),
                    a.show(&sm.m[k]),
                    a.show(l),
                    a.show(r)
                )
            }))
        })?);
    }
    Ok(rep)
}

/// Lifts of normal words of `H` through `p`, letter by letter.
fn letter_lifts(seq: &SequenceSpec) -> Result<BTreeMap<Letter, Letter>> {
    let (a, h) = (seq.a(), seq.h());
    let mut out = BTreeMap::new();
    for l in h.alphabet().letters() {
        let target = NCPoly::letter(l, h.field());
        let lift = a.alphabet().letters().find(|&al| seq.p().image(al) == &target).ok_or_else(|| {
            Error::refusal(format!("no generator of `{}` maps onto `{}`", a.name(), h.alphabet().name(l)))
        })?;
        out.insert(l, lift);
    }
    Ok(out)
}

/// `X ⊗_B A` and `X ⊗ H` for `X = A` as a right module over itself.
struct TensorModels<'a> {
    seq: &'a SequenceSpec,
    lifts: BTreeMap<Letter, Letter>,
    variant: Variant,
}

impl TensorModels<'_> {
    fn a(&self) -> &HopfPresentation {
        self.seq.a()
    }

    /// `x ⊗_B m` as `Σ_s x·P_s ⊗ s` where `m = Σ P_s s`.
    fn canon(&self, x: &NCPoly, m: &NCPoly) -> Result<TensorPoly> {
        let a = self.a();
        let mut out = TensorPoly::zero(2, a.field());
        for (s, prefix) in self.seq.decompose_left(m)? {
            let xp = a.mul(x, &prefix)?;
            out.add_scaled(&TensorPoly::from_legs(&[xp, NCPoly::word(s, a.field())]), &a.field().one());
        }
        Ok(out)
    }

    fn twist(&self, y: &NCPoly) -> Result<NCPoly> {
        match self.variant {
            Variant::Faithful => self.a().antipode_inv(y),
            Variant::Corrupted => self.a().antipode(y),
        }
    }

    /// `u(x ⊗ p(y)) = x S⁻¹(y₂) ⊗_B y₁`.
    fn u_lift(&self, x: &NCPoly, y: &NCPoly) -> Result<TensorPoly> {
        let a = self.a();
        let mut out = TensorPoly::zero(2, a.field());
        for (t, c) in legs(a, &a.comul(y)?) {
            out.add_scaled(&self.canon(&a.mul(x, &self.twist(&t[1])?)?, &t[0])?, &c);
        }
        Ok(out)
    }

    fn lift_word(&self, w: &Word) -> Word {
        Word::from_letters(&w.letters().iter().map(|l| self.lifts[l]).collect::<Vec<_>>())
    }

    fn u(&self, t: &TensorPoly) -> Result<TensorPoly> {
        let a = self.a();
        let mut out = TensorPoly::zero(2, a.field());
        for (k, c) in t.terms() {
            let x = NCPoly::word(k[0].clone(), a.field());
            out.add_scaled(&self.u_lift(&x, &NCPoly::word(self.lift_word(&k[1]), a.field()))?, c);
        }
        Ok(out)
    }

    /// `v(x ⊗ y) = x y₂ ⊗ p(y₁)`.
    fn v_pair(&self, x: &NCPoly, y: &NCPoly) -> Result<TensorPoly> {
        let a = self.a();
        let mut out = TensorPoly::zero(2, a.field());
        for (t, c) in legs(a, &a.comul(y)?) {
            let xa = a.mul(x, &t[1])?;
            out.add_scaled(&TensorPoly::from_legs(&[xa, self.seq.p().apply(&t[0])?]), &c);
        }
        Ok(out)
    }

    fn v(&self, t: &TensorPoly) -> Result<TensorPoly> {
        let a = self.a();
        let mut out = TensorPoly::zero(2, a.field());
        for (k, c) in t.terms() {
            let x = NCPoly::word(k[0].clone(), a.field());
            out.add_scaled(&self.v_pair(&x, &NCPoly::word(k[1].clone(), a.field()))?, c);
        }
        Ok(out)
    }

    /// `a·(x ⊗_B m) = x S⁻¹(a₂) ⊗_B a₁ m`.
    fn act(&self, y: &NCPoly, x: &NCPoly, m: &NCPoly) -> Result<TensorPoly> {
        let a = self.a();
        let mut out = TensorPoly::zero(2, a.field());
        for (t, c) in legs(a, &a.comul(y)?) {
            out.add_scaled(&self.canon(&a.mul(x, &self.twist(&t[1])?)?, &a.mul(&t[0], m)?)?, &c);
        }
        Ok(out)
    }

    fn act_canon(&self, y: &NCPoly, t: &TensorPoly) -> Result<TensorPoly> {
        let a = self.a();
        let mut out = TensorPoly::zero(2, a.field());
        for (k, c) in t.terms() {
            let x = NCPoly::word(k[0].clone(), a.field());
            out.add_scaled(&self.act(y, &x, &NCPoly::word(k[1].clone(), a.field()))?, c);
        }
        Ok(out)
    }
}

/// `u` and `v` between `X ⊗ H` and `X ⊗_B A` for `X = A`. The corrupted
/// form uses `S` in place of `S⁻¹`.
pub fn uv_iso_check(seq: &SequenceSpec, ctx: &SweedlerContext, variant: Variant) -> Result<Report> {
    let a = seq.a();
    if !a.has_antipode_inv() {
        return Err(Error::refusal(format!("`{}` has no inverse antipode", a.name())));
    }
    let tm = TensorModels {
        seq,
        lifts: letter_lifts(seq)?,
        variant,
    };
    let h = seq.h();
    let mut rep = Report::new(format!("u and v for {} over {}", a.name(), seq.b().name()))
        .with("sequence", &seq.name)
        .with("seed", ctx.seed)
        .with("samples", ctx.samples)
        .with("formula", if variant == Variant::Faithful { "x Sinv(a2) (x)_B a1" } else { "x S(a2) (x)_B a1" });
    let sm = samples(seq, 1, ctx)?;
    let idx: Vec<usize> = (0..ctx.samples).collect();
    let at = |k: usize| (&sm.m[k], &sm.a[k]);
    let show2 = |t: &TensorPoly| a.show_tensor(t);

    rep.push(CheckResult::run("u is independent of the lift", &idx, |&k| {
        let (x, y) = at(k);
        let other = y + &a.mul(&sm.b_plus[k], &sm.a2[k])?;
        let (l, r) = (tm.u_lift(x, y)?, tm.u_lift(x, &other)?);
        Ok::<_, Error>((l != r).then(|| format!("x = {}, a = {}, a' = {}", a.show(x), a.show(y), a.show(&other))))
    })?);
    rep.push(CheckResult::run("v(xb ⊗ a) = v(x ⊗ ba)", &idx, |&k| {
        let (x, y) = at(k);
        let l = tm.v_pair(&a.mul(x, &sm.b[k])?, y)?;
        let r = tm.v_pair(x, &a.mul(&sm.b[k], y)?)?;
        Ok::<_, Error>((l != r).then(|| format!("x = {}, b = {}, a = {}", a.show(x), a.show(&sm.b[k]), a.show(y))))
    })?);
    rep.push(CheckResult::run("a·(xb ⊗ m) = a·(x ⊗ bm)", &idx, |&k| {
        let (x, y) = at(k);
        let m = &sm.a2[k];
        let l = tm.act(y, &a.mul(x, &sm.b[k])?, m)?;
        let r = tm.act(y, x, &a.mul(&sm.b[k], m)?)?;
        Ok::<_, Error>((l != r).then(|| {
            format!("a = {}, x = {}, b = {}, m = {}: {} vs {}", a.show(y), a.show(x), a.show(&sm.b[k]), a.show(m), show2(&l), show2(&r))
        }))
    })?);
    rep.push(CheckResult::run("u∘v = id", &idx, |&k| {
        let (x, y) = at(k);
        let l = tm.u(&tm.v_pair(x, y)?)?;
        let r = tm.canon(x, y)?;
        Ok::<_, Error>((l != r).then(|| format!("x = {}, a = {}: {} vs {}", a.show(x), a.show(y), show2(&l), show2(&r))))
    })?);
    rep.push(CheckResult::run("v∘u = id", &idx, |&k| {
        let (x, y) = at(k);
        let hy = seq.p().apply(y)?;
        let t = TensorPoly::from_legs(&[x.clone(), hy.clone()]);
        let l = tm.v(&tm.u(&t)?)?;
        Ok::<_, Error>((l != t).then(|| {
            format!("x = {}, h = {}: got {}", a.show(x), h.show(&hy), show2(&l))
        }))
    })?);
    rep.push(CheckResult::run("u is A-linear", &idx, |&k| {
        let (x, y) = at(k);
        let y2 = &sm.a2[k];
        let l = tm.u_lift(x, &a.mul(y2, y)?)?;
        let r = tm.act_canon(y2, &tm.u_lift(x, y)?)?;
        Ok::<_, Error>((l != r).then(|| format!("a' = {}, x = {}, a = {}", a.show(y2), a.show(x), a.show(y))))
    })?);
    Ok(rep)
}

/// `Θ([f] ⊗ p(a)) = p(a)·[f]` from `Ext^q_B(k, B) ⊗ H` to `Ext^q_B(k, A)`.
/// Chain-level identities use the A-resolution `res`; window bijectivity
/// compares dimensions using the resolution `res_b` of the trivial
/// B-module, whose entries are pushed into `A` along `i`. The corrupted form
/// of `Θ` drops the antipode.
#[allow(clippy::too_many_arguments)]
pub fn hmod_iso_check(
    seq: &SequenceSpec,
    res: &Resolution,
    res_b: &Resolution,
    q: usize,
    window: usize,
    slack: usize,
    ctx: &SweedlerContext,
    variant: Variant,
) -> Result<Report> {
    require_sequence_ring(seq, res)?;
    let a = seq.a();
    let rank = rank_of(res, q);
    let mut rep = Report::new(format!("H-module map Ext^{q}_B(k, B) (x) H -> Ext^{q}_B(k, A)"))
        .with("sequence", &seq.name)
        .with("rank", rank)
        .with("seed", ctx.seed)
        .with("samples", ctx.samples)
        .with("window", window);
    if rank > 0 {
        if !a.has_antipode_inv() {
            return Err(Error::refusal(format!("`{}` has no inverse antipode", a.name())));
        }
        let sm = samples(seq, rank, ctx)?;
        let idx: Vec<usize> = (0..ctx.samples).collect();
        let cochain = |k: usize| sample_cochain(seq, rank, sm.seeds[k], Values::InB);
        rep.push(CheckResult::run("Θ is H-linear", &idx, |&k| {
            let f = cochain(k)?;
            let l = star(a, &a.mul(&sm.a2[k], &sm.a[k])?, f.clone(), variant)?(&sm.x[k])?;
            let r = star(a, &sm.a2[k], star(a, &sm.a[k], f, variant)?, Variant::Faithful)?(&sm.x[k])?;
            Ok::<_, Error>((l != r).then(|| {
                format!("a' = {}, a = {}, x = {}", a.show(&sm.a2[k]), a.show(&sm.a[k]), show_vec(a, &sm.x[k]))
            }))
        })?);
        rep.push(CheckResult::run("Θ is independent of the lift", &idx, |&k| {
            let f = cochain(k)?;
            let other = &sm.a[k] + &a.mul(&sm.b_plus[k], &sm.a2[k])?;
            let l = star(a, &sm.a[k], f.clone(), variant)?(&sm.x[k])?;
            let r = star(a, &other, f, variant)?(&sm.x[k])?;
            Ok::<_, Error>((l != r).then(|| format!("a = {}, a' = {}", a.show(&sm.a[k]), a.show(&other))))
        })?);
        rep.push(CheckResult::run("Θ = φ∘u", &idx, |&k| {
            let f = cochain(k)?;
            let l = star(a, &sm.a[k], f.clone(), variant)?(&sm.x[k])?;
            let mut r = NCPoly::zero(a.field());
            for (t, c) in legs(a, &a.comul(&sm.a[k])?) {
                let v = harpoon(a, f.clone(), &a.antipode_inv(&t[1])?, Variant::Faithful)?(&sm.x[k])?;
                r.add_scaled(&a.mul(&v, &t[0])?, &c);
            }
            Ok::<_, Error>((l != r).then(|| {
                format!("a = {}, x = {}: {} vs {}", a.show(&sm.a[k]), show_vec(a, &sm.x[k]), a.show(&l), a.show(&r))
            }))
        })?);
    } else {
        rep.push(CheckResult::pass(format!("P{q} is zero"), 0));
    }
    if res_b.algebra().name() != seq.b().name() {
        return Err(Error::Semantic(format!(
            "resolution is over `{}`, the sequence's subalgebra is `{}`",
            res_b.algebra().name(),
            seq.b().name()
        )));
    }
    if q > res_b.length() {
        rep.push(CheckResult::pass("both sides vanish beyond the resolution length", 0));
        return Ok(rep);
    }
    let eb = ext_certificate(&res_b.hom_complex(), q, 0, window, slack)?;
    let b_total = match &eb.verdict {
        ExtVerdict::ZeroOnWindow => 0,
        ExtVerdict::OneDimensional(_) => 1,
        other => {
            return Err(Error::refusal(format!(
                "Ext^{q}_B(k, B) is {} on the window; the dimension count needs it finite",
                other.label()
            )))
        }
    };
    let cx = res_b.hom_complex_via(seq.a().clone(), |p| seq.i().apply(p))?;
    let ea = ext_certificate(&cx, q, 0, window, slack)?;
    let h_counts = seq.h().rewrite().degree_basis(ea.top)?.count_by_degree();
    let mut h_cum = Vec::new();
    let mut acc = 0;
    for n in h_counts {
        acc += n;
        h_cum.push(acc);
    }
    rep.push(CheckResult::run("window dimensions match", &ea.dims_per_degree, |&(d, n)| {
        let expect = b_total * h_cum[d];
        Ok::<_, Error>((n != expect).then(|| {
            format!("degree {d}: Ext^{q}_B(k, A) has {n}, Ext^{q}_B(k, B) (x) H has {expect}")
        }))
    })?);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_presentation;
    use crate::exactseq::tests::{seq, H2_RESOLVED, KZ_RESOLVED};
    use std::sync::Arc;

    fn resolution(text: &str) -> Resolution {
        let p = parse_presentation(text).unwrap();
        Resolution::from_spec(Arc::new(p.hopf), p.file.resolution.as_ref().unwrap()).unwrap()
    }

    fn ctx() -> SweedlerContext {
        SweedlerContext::new(2, 11).with_samples(12)
    }

    #[test]
    fn cochains_are_b_linear() {
        let s = seq();
        let a = s.a();
        let f = sample_cochain(&s, 2, 5, Values::InA).unwrap();
        let u12 = a.gen("u12").unwrap();
        let u11 = a.gen("u11").unwrap();
        let x = vec![u12.clone(), a.mul(&u12, &u12).unwrap()];
        let bx: Vec<NCPoly> = x.iter().map(|c| a.mul(&u11, c).unwrap()).collect();
        assert_eq!(f(&bx).unwrap(), a.mul(&u11, &f(&x).unwrap()).unwrap());
    }

    #[test]
    fn star_faithful_and_corrupted() {
        let s = seq();
        let r = resolution(H2_RESOLVED);
        assert!(star_action_check(&s, &r, 1, &ctx(), Variant::Faithful).unwrap().passed());
        assert!(!star_action_check(&s, &r, 1, &ctx(), Variant::Corrupted).unwrap().passed());
    }

    #[test]
    fn harpoon_faithful_and_corrupted() {
        let s = seq();
        let r = resolution(H2_RESOLVED);
        let good = harpoon_action_check(&s, &r, 0, &ctx(), Variant::Faithful).unwrap();
        assert!(good.passed(), "{}", good.render_text());
        let bad = harpoon_action_check(&s, &r, 0, &ctx(), Variant::Corrupted).unwrap();
        assert!(!bad.check("values lie in B").unwrap().passed);
        assert!(bad.check("(f ↼ a) ↼ a' = f ↼ (aa')").unwrap().passed);
    }

    #[test]
    fn phi_and_linearity() {
        let s = seq();
        let r = resolution(H2_RESOLVED);
        assert!(phi_map_check(&s, 2, &ctx(), Variant::Faithful).unwrap().passed());
        assert!(!phi_map_check(&s, 2, &ctx(), Variant::Corrupted).unwrap().passed());
        let lin = phi_linearity_check(&s, &r, 0, &ctx(), Variant::Faithful).unwrap();
        assert!(lin.passed(), "{}", lin.render_text());
        assert!(!phi_linearity_check(&s, &r, 0, &ctx(), Variant::Corrupted).unwrap().passed());
    }

    #[test]
    fn uv() {
        let s = seq();
        let good = uv_iso_check(&s, &ctx(), Variant::Faithful).unwrap();
        assert!(good.passed(), "{}", good.render_text());
        let bad = uv_iso_check(&s, &ctx(), Variant::Corrupted).unwrap();
        assert!(!bad.check("v∘u = id").unwrap().passed);
    }

    #[test]
    fn hmod() {
        let s = seq();
        let (r, rb) = (resolution(H2_RESOLVED), resolution(KZ_RESOLVED));
        for q in 0..3 {
            let rep = hmod_iso_check(&s, &r, &rb, q, 4, 1, &ctx(), Variant::Faithful).unwrap();
            assert!(rep.passed(), "{}", rep.render_text());
        }
        assert!(!hmod_iso_check(&s, &r, &rb, 0, 4, 1, &ctx(), Variant::Corrupted).unwrap().passed());
    }
}
