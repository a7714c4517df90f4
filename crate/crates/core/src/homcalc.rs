//! Free modules of finite rank over a presented algebra, windowed kernels
//! and cokernels of module maps, resolutions of the trivial module and
//! windowed Ext certificates.
//!
//! An element of `A^r` is a sparse vector keyed by `(word, component)`.
//! Windows are filtrations by normal-word length; since the key order puts
//! the word first, rows of an echelon form whose pivot has degree ≤ d span
//! the intersection with the degree-d window. Images are generated from the
//! whole window but only counted on the interior `d ≤ W − slack`, where no
//! preimage of higher degree is missing.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::coeffs::Scalar;
use crate::dsl::ResolutionSpec;
use crate::error::{Error, Result};
use crate::freealg::{Letter, NCPoly, Word};
use crate::hopf::HopfPresentation;
use crate::linalg::{axpy, kernel, scaled, Echelon, SparseVec};
use crate::report::{CheckResult, Report};

pub type ModVec = SparseVec<(Word, usize)>;

pub fn modvec_of(c: &[NCPoly]) -> ModVec {
    let mut v = ModVec::new();
    for (j, p) in c.iter().enumerate() {
        for (w, s) in p.terms() {
            v.insert((w.clone(), j), s.clone());
        }
    }
    v
}

pub fn polys_of(a: &HopfPresentation, v: &ModVec, rank: usize) -> Vec<NCPoly> {
    let mut out = vec![NCPoly::zero(a.field()); rank];
    for ((w, j), c) in v {
        out[*j].add_term(w.clone(), c);
    }
    out
}

pub fn show_vec(a: &HopfPresentation, c: &[NCPoly]) -> String {
    let parts: Vec<String> = c.iter().map(|p| a.show(p)).collect();
    format!("({})", parts.join(", "))
}

fn key_degree(k: &(Word, usize)) -> usize {
    k.0.degree()
}

/// Which side the algebra acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A map `A^n → A^m` of free modules. `rows[j][i]` is the coefficient of
/// `e_i` in the image of `e_j`; a left map sends `c·e_j` to
/// `Σ_i c·rows[j][i]·e_i`, a right map sends `e_j·c` to
/// `Σ_i e_i·rows[j][i]·c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeModuleMap {
    side: Side,
    domain_rank: usize,
    codomain_rank: usize,
    rows: Vec<Vec<NCPoly>>,
}

impl FreeModuleMap {
    pub fn new(side: Side, domain_rank: usize, codomain_rank: usize, rows: Vec<Vec<NCPoly>>) -> Result<Self> {
        if rows.len() != domain_rank || rows.iter().any(|r| r.len() != codomain_rank) {
            return Err(Error::Semantic(format!(
                "matrix shape does not match ranks {domain_rank} -> {codomain_rank}"
            )));
        }
        Ok(FreeModuleMap {
            side,
            domain_rank,
            codomain_rank,
            rows,
        })
    }

    pub fn zero(a: &HopfPresentation, side: Side, domain_rank: usize, codomain_rank: usize) -> Self {
        let rows = vec![vec![NCPoly::zero(a.field()); codomain_rank]; domain_rank];
        FreeModuleMap {
            side,
            domain_rank,
            codomain_rank,
            rows,
        }
    }

    pub fn identity(a: &HopfPresentation, side: Side, rank: usize) -> Self {
        let mut m = Self::zero(a, side, rank, rank);
        for j in 0..rank {
            m.rows[j][j] = a.one();
        }
        m
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn domain_rank(&self) -> usize {
        self.domain_rank
    }

    pub fn codomain_rank(&self) -> usize {
        self.codomain_rank
    }

    pub fn rows(&self) -> &[Vec<NCPoly>] {
        &self.rows
    }

    pub fn max_entry_degree(&self) -> usize {
        self.rows
            .iter()
            .flatten()
            .filter_map(|p| p.degree())
            .max()
            .unwrap_or(0)
    }

    /// The Hom-dual: transposed, acting on the other side.
    pub fn dual(&self) -> FreeModuleMap {
        let mut rows = vec![Vec::with_capacity(self.domain_rank); self.codomain_rank];
        for row in &self.rows {
            for (i, e) in row.iter().enumerate() {
                rows[i].push(e.clone());
            }
        }
        FreeModuleMap {
            side: match self.side {
                Side::Left => Side::Right,
                Side::Right => Side::Left,
            },
            domain_rank: self.codomain_rank,
            codomain_rank: self.domain_rank,
            rows,
        }
    }

    pub fn map_entries(&self, mut f: impl FnMut(&NCPoly) -> Result<NCPoly>) -> Result<FreeModuleMap> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(&mut f).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(FreeModuleMap { rows, ..self.clone() })
    }

    /// Image of the basis element `w·e_j` (or `e_j·w`).
    pub fn apply_basis(&self, a: &HopfPresentation, w: &Word, j: usize) -> Result<ModVec> {
        let wp = NCPoly::word(w.clone(), a.field());
        let mut out = ModVec::new();
        for (i, e) in self.rows[j].iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let prod = match self.side {
                Side::Left => a.mul(&wp, e)?,
                Side::Right => a.mul(e, &wp)?,
            };
            for (u, c) in prod.terms() {
                out.insert((u.clone(), i), c.clone());
            }
        }
        Ok(out)
    }

    pub fn apply(&self, a: &HopfPresentation, c: &[NCPoly]) -> Result<Vec<NCPoly>> {
        let mut out = vec![NCPoly::zero(a.field()); self.codomain_rank];
        for (j, cj) in c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            for (i, e) in self.rows[j].iter().enumerate() {
                let prod = match self.side {
                    Side::Left => a.mul(cj, e)?,
                    Side::Right => a.mul(e, cj)?,
                };
                out[i] = &out[i] + &prod;
            }
        }
        Ok(out)
    }
}

/// Basis elements of the degree-`d` window of `A^rank`, by increasing degree.
fn window_inputs(a: &HopfPresentation, rank: usize, d: usize) -> Result<Vec<(Word, usize)>> {
    let words = a.window(d)?;
    let mut out = Vec::with_capacity(words.len() * rank);
    for w in words {
        for j in 0..rank {
            out.push((w.clone(), j));
        }
    }
    Ok(out)
}

/// Kernel of a map on the window.
#[derive(Debug, Clone)]
pub struct KernelWindow {
    pub degree: usize,
    /// `dims[d]` = dimension of the kernel within degree ≤ d.
    pub dims: Vec<usize>,
    pub basis: Vec<ModVec>,
}

pub fn window_kernel(a: &HopfPresentation, f: &FreeModuleMap, d: usize) -> Result<KernelWindow> {
    a.rewrite().require_degree(d + f.max_entry_degree())?;
    let inputs = window_inputs(a, f.domain_rank(), d)?;
    let images: Vec<ModVec> = inputs
        .iter()
        .map(|(w, j)| f.apply_basis(a, w, *j))
        .collect::<Result<_>>()?;
    let ker = kernel(a.field(), &images);
    let mut dims = vec![0; d + 1];
    let mut basis = Vec::with_capacity(ker.len());
    for k in &ker {
        let last = *k.keys().next_back().expect("nonzero kernel vector");
        for slot in dims.iter_mut().skip(inputs[last].0.degree()) {
            *slot += 1;
        }
        let mut v = ModVec::new();
        for (i, c) in k {
            v.insert(inputs[*i].clone(), c.clone());
        }
        basis.push(v);
    }
    Ok(KernelWindow { degree: d, dims, basis })
}

/// Cokernel of a map on the interior of a window.
#[derive(Debug, Clone)]
pub struct CokernelWindow {
    pub lo: usize,
    pub hi: usize,
    /// Largest degree counted.
    pub top: usize,
    /// `(d, dim)` for `d` in `lo..=top`: cokernel dimension within degree ≤ d.
    pub dims: Vec<(usize, usize)>,
    /// Basis elements spanning a complement of the image up to `top`.
    pub representatives: Vec<(Word, usize)>,
}

impl CokernelWindow {
    pub fn total(&self) -> usize {
        self.dims.last().map(|x| x.1).unwrap_or(0)
    }
}

fn image_echelon(a: &HopfPresentation, f: &FreeModuleMap, d: usize) -> Result<Echelon<(Word, usize)>> {
    let mut ech = Echelon::new(a.field());
    for (w, j) in window_inputs(a, f.domain_rank(), d)? {
        ech.insert(&f.apply_basis(a, &w, j)?);
    }
    Ok(ech)
}

pub fn window_cokernel(
    a: &HopfPresentation,
    f: &FreeModuleMap,
    lo: usize,
    hi: usize,
    slack: usize,
) -> Result<CokernelWindow> {
    if hi < lo + slack {
        return Err(Error::refusal(format!(
            "window {lo}..{hi} has no interior degree with slack {slack}"
        )));
    }
    let top = hi - slack;
    a.rewrite().require_degree(hi + f.max_entry_degree())?;
    let ech = image_echelon(a, f, hi)?;
    let counts = a.rewrite().degree_basis(top)?.count_by_degree();
    let mut dims = Vec::new();
    let mut cum = 0;
    for (d, n) in counts.iter().enumerate() {
        cum += n * f.codomain_rank();
        if d >= lo {
            dims.push((d, cum - ech.rank_where(|k| key_degree(k) <= d)));
        }
    }
    let representatives = window_inputs(a, f.codomain_rank(), top)?
        .into_iter()
        .filter(|k| !ech.is_pivot(k))
        .collect();
    Ok(CokernelWindow {
        lo,
        hi,
        top,
        dims,
        representatives,
    })
}

/// A resolution `… → P_1 → P_0 → k → 0` of the trivial left module by free
/// left modules; `maps[k]` is `d_{k+1}: P_{k+1} → P_k`.
#[derive(Debug, Clone)]
pub struct Resolution {
    algebra: Arc<HopfPresentation>,
    ranks: Vec<usize>,
    maps: Vec<FreeModuleMap>,
}

impl Resolution {
    pub fn new(algebra: Arc<HopfPresentation>, ranks: Vec<usize>, maps: Vec<FreeModuleMap>) -> Result<Self> {
        if ranks.first() != Some(&1) {
            return Err(Error::Semantic("a resolution of the trivial module starts with rank 1".into()));
        }
        if maps.len() + 1 != ranks.len() {
            return Err(Error::Semantic(format!(
                "{} ranks need {} differentials, found {}",
                ranks.len(),
                ranks.len() - 1,
                maps.len()
            )));
        }
        for (k, m) in maps.iter().enumerate() {
            if m.side() != Side::Left || m.domain_rank() != ranks[k + 1] || m.codomain_rank() != ranks[k] {
                return Err(Error::Semantic(format!("d{} does not fit the ranks", k + 1)));
            }
        }
        Ok(Resolution { algebra, ranks, maps })
    }

    pub fn from_spec(algebra: Arc<HopfPresentation>, spec: &ResolutionSpec) -> Result<Self> {
        let maps = spec
            .maps
            .iter()
            .enumerate()
            .map(|(k, rows)| {
                let rows = rows
                    .iter()
                    .map(|r| r.iter().map(|e| algebra.nf(e)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                FreeModuleMap::new(Side::Left, spec.ranks[k + 1], spec.ranks[k], rows)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(algebra, spec.ranks.clone(), maps)
    }

    pub fn algebra(&self) -> &Arc<HopfPresentation> {
        &self.algebra
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn maps(&self) -> &[FreeModuleMap] {
        &self.maps
    }

    pub fn length(&self) -> usize {
        self.ranks.len() - 1
    }

    /// Replaces `d_k` (for corrupted fixtures).
    pub fn with_differential(mut self, k: usize, m: FreeModuleMap) -> Result<Self> {
        if k == 0 || k > self.maps.len() {
            return Err(Error::Semantic(format!("no differential d{k}")));
        }
        self.maps[k - 1] = m;
        Self::new(self.algebra, self.ranks, self.maps)
    }

    /// `Hom(P_•, A)`.
    pub fn hom_complex(&self) -> CochainComplex {
        CochainComplex {
            coeff: self.algebra.clone(),
            ranks: self.ranks.clone(),
            deltas: self.maps.iter().map(FreeModuleMap::dual).collect(),
        }
    }

    /// `Hom(P_•, T)` for an algebra map into `T` (a restriction of
    /// coefficients along `map`).
    pub fn hom_complex_via(
        &self,
        target: Arc<HopfPresentation>,
        mut map: impl FnMut(&NCPoly) -> Result<NCPoly>,
    ) -> Result<CochainComplex> {
        let deltas = self
            .maps
            .iter()
            .map(|m| Ok(m.map_entries(&mut map)?.dual()))
            .collect::<Result<Vec<_>>>()?;
        Ok(CochainComplex {
            coeff: target,
            ranks: self.ranks.clone(),
            deltas,
        })
    }
}

/// `d∘d = 0` symbolically, `ε∘d_1 = 0`, and exactness on the interior of
/// the degree-`d` window.
pub fn verify_resolution(res: &Resolution, d: usize, slack: usize) -> Result<Report> {
    let a = res.algebra();
    let maps = res.maps();
    let entry = maps.iter().map(FreeModuleMap::max_entry_degree).max().unwrap_or(0);
    a.rewrite().require_degree(d + 2 * entry)?;
    let top = d.saturating_sub(slack);
    let mut rep = Report::new(format!("resolution of the trivial {}-module", a.name()))
        .with("ranks", format!("{:?}", res.ranks()))
        .with("degree", d)
        .with("slack", slack)
        .with("interior", format!("0..{top}"));

    let mut pairs = Vec::new();
    for k in 0..maps.len().saturating_sub(1) {
        for j in 0..res.ranks()[k + 2] {
            pairs.push((k, j));
        }
    }
    rep.push(CheckResult::run("d∘d = 0", &pairs, |&(k, j)| {
        let img = maps[k].apply(a, &maps[k + 1].rows()[j])?;
        Ok::<_, Error>(img.iter().any(|p| !p.is_zero()).then(|| {
            format!("d{}(d{}(e{})) = {}", k + 1, k + 2, j + 1, show_vec(a, &img))
        }))
    })?);
    if let Some(d1) = maps.first() {
        rep.push(CheckResult::run("augmentation ∘ d1 = 0", 0..d1.domain_rank(), |j| {
            let e = &d1.rows()[j][0];
            Ok::<_, Error>((!a.counit(e).is_zero()).then(|| format!("ε({}) ≠ 0", a.show(e))))
        })?);
    }

    let counts = a.rewrite().degree_basis(d)?.count_by_degree();
    let cum: Vec<usize> = counts
        .iter()
        .scan(0, |s, n| {
            *s += n;
            Some(*s)
        })
        .collect();
    for k in 0..=res.length() {
        let name = format!("exact at P{k}");
        let ker_dims: Vec<usize> = if k == 0 {
            cum.iter().map(|n| n - 1).collect()
        } else {
            window_kernel(a, &maps[k - 1], d)?.dims
        };
        if k == res.length() {
            let n = ker_dims[d];
            rep.push(if n == 0 {
                CheckResult::pass(format!("d{k} injective on the window"), d + 1)
            } else {
                CheckResult::fail(format!("d{k} injective on the window"), d + 1, format!("kernel of dimension {n}"))
            });
            if k > 0 {
                continue;
            }
        }
        if k == res.length() {
            continue;
        }
        let ech = image_echelon(a, &maps[k], d)?;
        rep.push(CheckResult::run(name, 0..=top, |deg| {
            let im = ech.rank_where(|key| key_degree(key) <= deg);
            Ok::<_, Error>((im != ker_dims[deg]).then(|| {
                format!("degree {deg}: kernel dimension {}, image dimension {im}", ker_dims[deg])
            }))
        })?);
    }
    Ok(rep)
}

/// `C^k = A^{r_k}` with right-module differentials `δ_{k+1}: C^k → C^{k+1}`.
#[derive(Debug, Clone)]
pub struct CochainComplex {
    coeff: Arc<HopfPresentation>,
    ranks: Vec<usize>,
    deltas: Vec<FreeModuleMap>,
}

impl CochainComplex {
    pub fn coeff(&self) -> &Arc<HopfPresentation> {
        &self.coeff
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn deltas(&self) -> &[FreeModuleMap] {
        &self.deltas
    }

    fn entry_degree(&self) -> usize {
        self.deltas.iter().map(FreeModuleMap::max_entry_degree).max().unwrap_or(0)
    }
}

/// Windowed cohomology in one degree.
#[derive(Debug, Clone)]
pub struct CohomologyWindow {
    pub window: usize,
    pub top: usize,
    /// `dims[d]` for `d ≤ top`: cohomology dimension within degree ≤ d.
    pub dims: Vec<usize>,
    boundaries: Echelon<(Word, usize)>,
    cocycles: Vec<ModVec>,
}

impl CohomologyWindow {
    pub fn total(&self) -> usize {
        self.dims.last().copied().unwrap_or(0)
    }

    /// A cocycle reduced modulo coboundaries, monic at its largest key; when
    /// the window cohomology is one-dimensional this does not depend on the
    /// choice of cocycle.
    pub fn reduced_witness(&self) -> Option<ModVec> {
        for z in &self.cocycles {
            if z.keys().next_back().map(key_degree).unwrap_or(0) > self.top {
                continue;
            }
            let r = self.boundaries.reduce(z).remainder;
            if let Some((_, c)) = r.iter().next_back() {
                return Some(scaled(&r, &c.inv().expect("nonzero")));
            }
        }
        None
    }

    pub fn reduce(&self, v: &ModVec) -> ModVec {
        self.boundaries.reduce(v).remainder
    }
}

pub fn cohomology_window(cx: &CochainComplex, i: usize, w: usize, slack: usize) -> Result<CohomologyWindow> {
    let a = cx.coeff();
    if w < slack {
        return Err(Error::refusal(format!("window {w} has no interior degree with slack {slack}")));
    }
    let top = w - slack;
    a.rewrite().require_degree(w + cx.entry_degree())?;
    let rank = cx.ranks.get(i).copied().unwrap_or(0);
    let (cocycles, zdims) = if rank == 0 {
        (Vec::new(), vec![0; w + 1])
    } else if let Some(delta) = cx.deltas.get(i) {
        let kw = window_kernel(a, delta, w)?;
        (kw.basis, kw.dims)
    } else {
        let counts = a.rewrite().degree_basis(w)?.count_by_degree();
        let mut dims = Vec::new();
        let mut cum = 0;
        for n in counts {
            cum += n * rank;
            dims.push(cum);
        }
        let all = window_inputs(a, rank, w)?
            .into_iter()
            .map(|k| {
                let mut v = ModVec::new();
                v.insert(k, a.field().one());
                v
            })
            .collect();
        (all, dims)
    };
    let boundaries = if i > 0 && rank > 0 {
        image_echelon(a, &cx.deltas[i - 1], w)?
    } else {
        Echelon::new(a.field())
    };
    let dims = (0..=top)
        .map(|d| zdims[d] - boundaries.rank_where(|k| key_degree(k) <= d))
        .collect();
    Ok(CohomologyWindow {
        window: w,
        top,
        dims,
        boundaries,
        cocycles,
    })
}

/// Data of a one-dimensional class: the reduced witness cocycle, the
/// character by which generators act on it from the right, and the induced
/// Nakayama map `σ(h) = ξ(h₁)S²(h₂)` on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneDimensional {
    pub witness: Vec<NCPoly>,
    pub character: BTreeMap<Letter, Scalar>,
    pub nakayama: BTreeMap<Letter, NCPoly>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtVerdict {
    ZeroOnWindow,
    OneDimensional(OneDimensional),
    /// Stably nonzero of dimension > 1 on the window.
    NonVanishing,
    Inconclusive(String),
}

impl ExtVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            ExtVerdict::ZeroOnWindow => "ZeroOnWindow",
            ExtVerdict::OneDimensional(_) => "OneDimensional",
            ExtVerdict::NonVanishing => "NonVanishing",
            ExtVerdict::Inconclusive(_) => "Inconclusive",
        }
    }

    pub fn is_nonzero(&self) -> bool {
        matches!(self, ExtVerdict::OneDimensional(_) | ExtVerdict::NonVanishing)
    }
}

#[derive(Debug, Clone)]
pub struct ExtCertificate {
    pub algebra: String,
    pub index: usize,
    pub window: (usize, usize),
    pub slack: usize,
    pub top: usize,
    /// Cumulative dimensions for degrees `lo..=top` of the base window.
    pub dims_per_degree: Vec<(usize, usize)>,
    /// Interior totals at the base window and two widenings.
    pub totals: Vec<usize>,
    pub verdict: ExtVerdict,
}

fn character_of_word(chi: &BTreeMap<Letter, Scalar>, w: &Word, one: Scalar) -> Scalar {
    w.letters().iter().fold(one, |acc, l| &acc * &chi[l])
}

fn one_dimensional(cx: &CochainComplex, cw: &CohomologyWindow, rank: usize) -> Result<std::result::Result<OneDimensional, String>> {
    let a = cx.coeff();
    let f = a.field();
    let Some(r) = cw.reduced_witness() else {
        return Ok(Err("no cocycle outside the coboundaries".into()));
    };
    let witness = polys_of(a, &r, rank);
    let (lead_key, lead) = r.iter().next_back().map(|(k, c)| (k.clone(), c.clone())).expect("nonzero");
    let mut character = BTreeMap::new();
    for l in a.alphabet().letters() {
        let g = NCPoly::letter(l, f);
        let moved: Vec<NCPoly> = witness.iter().map(|p| a.mul(p, &g)).collect::<Result<_>>()?;
        let mv = modvec_of(&moved);
        if mv.keys().next_back().map(key_degree).unwrap_or(0) > cw.top {
            return Ok(Err(format!(
                "witness times `{}` leaves the interior of the window",
                a.alphabet().name(l)
            )));
        }
        let rem = cw.reduce(&mv);
        let xi = rem.get(&lead_key).cloned().unwrap_or_else(|| f.zero());
        let xi = xi.checked_div(&lead)?;
        let mut diff = rem.clone();
        axpy(&mut diff, &-&xi, &r);
        if !diff.is_empty() {
            return Ok(Err(format!(
                "`{}` does not act on the witness class by a scalar",
                a.alphabet().name(l)
            )));
        }
        character.insert(l, xi);
    }
    for rel in a.relations() {
        let mut v = f.zero();
        for (w, c) in rel.terms() {
            v += &(c * &character_of_word(&character, w, f.one()));
        }
        if !v.is_zero() {
            return Ok(Err(format!("extracted character does not vanish on {}", a.show(rel))));
        }
    }
    let mut nakayama = BTreeMap::new();
    for l in a.alphabet().letters() {
        let mut s = NCPoly::zero(f);
        for (k, c) in a.comul(&NCPoly::letter(l, f))?.terms() {
            let x = character_of_word(&character, &k[0], f.one());
            if x.is_zero() {
                continue;
            }
            let s2 = a.antipode_power(&NCPoly::word(k[1].clone(), f), 2)?;
            s.add_scaled(&s2, &(c * &x));
        }
        nakayama.insert(l, s);
    }
    Ok(Ok(OneDimensional {
        witness,
        character,
        nakayama,
    }))
}

/// Ext^i(εk, A) on the window `lo..=hi`, with the verdict checked against
/// two widenings.
pub fn ext_certificate(cx: &CochainComplex, i: usize, lo: usize, hi: usize, slack: usize) -> Result<ExtCertificate> {
    let a = cx.coeff();
    let rank = cx.ranks.get(i).copied().unwrap_or(0);
    let windows: Vec<CohomologyWindow> = (0..3)
        .map(|k| cohomology_window(cx, i, hi + k, slack))
        .collect::<Result<_>>()?;
    let base = &windows[0];
    if base.top < lo {
        return Err(Error::refusal(format!("window {lo}..{hi} has no interior degree with slack {slack}")));
    }
    let totals: Vec<usize> = windows.iter().map(CohomologyWindow::total).collect();
    let dims_per_degree = (lo..=base.top).map(|d| (d, base.dims[d])).collect();
    let verdict = if totals.iter().all(|&t| t == 0) {
        ExtVerdict::ZeroOnWindow
    } else if totals.iter().all(|&t| t == 1) {
        let witnesses: Vec<Option<ModVec>> = windows.iter().map(CohomologyWindow::reduced_witness).collect();
        if witnesses.windows(2).any(|p| p[0] != p[1]) {
            ExtVerdict::Inconclusive("witness changes under widening".into())
        } else {
            match one_dimensional(cx, &windows[2], rank)? {
                Ok(data) => ExtVerdict::OneDimensional(data),
                Err(why) => ExtVerdict::Inconclusive(why),
            }
        }
    } else if totals.iter().all(|&t| t > 1) && totals.windows(2).all(|p| p[0] <= p[1]) {
        ExtVerdict::NonVanishing
    } else {
        ExtVerdict::Inconclusive(format!("window totals {totals:?} are not stable"))
    };
    Ok(ExtCertificate {
        algebra: a.name().to_string(),
        index: i,
        window: (lo, hi),
        slack,
        top: base.top,
        dims_per_degree,
        totals,
        verdict,
    })
}

impl ExtCertificate {
    pub fn render(&self, a: &HopfPresentation) -> String {
        let mut s = String::new();
        writeln!(s, "Ext^{}(k, {})", self.index, self.algebra).unwrap();
        writeln!(s, "  window: {}..{}", self.window.0, self.window.1).unwrap();
        writeln!(s, "  slack: {}", self.slack).unwrap();
        writeln!(s, "  interior: {}..{}", self.window.0, self.top).unwrap();
        let dims: Vec<String> = self.dims_per_degree.iter().map(|(d, n)| format!("{d}:{n}")).collect();
        writeln!(s, "  dims: {}", dims.join(" ")).unwrap();
        let totals: Vec<String> = self.totals.iter().map(usize::to_string).collect();
        writeln!(s, "  totals under widening: {}", totals.join(" ")).unwrap();
        writeln!(s, "  verdict: {}", self.verdict.label()).unwrap();
        match &self.verdict {
            ExtVerdict::OneDimensional(d) => {
                writeln!(s, "  witness: {}", show_vec(a, &d.witness)).unwrap();
                for (l, x) in &d.character {
                    writeln!(s, "  character {}: {}", a.alphabet().name(*l), x).unwrap();
                }
                for (l, p) in &d.nakayama {
                    writeln!(s, "  nakayama {}: {}", a.alphabet().name(*l), a.show(p)).unwrap();
                }
            }
            ExtVerdict::Inconclusive(why) => writeln!(s, "  reason: {why}").unwrap(),
            _ => {}
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_poly, parse_presentation};

    const KZ: &str = "\
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

    const H1: &str = "\
algebra H1 over Q
gens: x, g, ginv
inverses: (g, ginv)
comul: x -> 1 (x) x + x (x) g, g -> g (x) g, ginv -> ginv (x) ginv
counit: x -> 0, g -> 1, ginv -> 1
antipode: x -> -x*ginv, g -> ginv, ginv -> g
antipode_inv: x -> -ginv*x, g -> ginv, ginv -> g
resolution:
  ranks: 1, 2
  d1: [g - 1] [x]
";

    fn load(text: &str) -> (Arc<HopfPresentation>, Resolution) {
        let p = parse_presentation(text).unwrap();
        let a = Arc::new(p.hopf);
        let r = Resolution::from_spec(a.clone(), p.file.resolution.as_ref().unwrap()).unwrap();
        (a, r)
    }

    fn poly(a: &HopfPresentation, s: &str) -> NCPoly {
        parse_poly(s, a.alphabet(), a.field()).unwrap()
    }

    #[test]
    fn kernels_on_windows() {
        let (kz, _) = load(KZ);
        let m = FreeModuleMap::new(Side::Right, 1, 1, vec![vec![poly(&kz, "g - 1")]]).unwrap();
        assert_eq!(window_kernel(&kz, &m, 6).unwrap().dims[6], 0);
        let z = FreeModuleMap::zero(&kz, Side::Right, 1, 1);
        assert_eq!(window_kernel(&kz, &z, 3).unwrap().dims[3], 7);
        let (h1, _) = load(H1);
        let m = FreeModuleMap::new(Side::Right, 1, 2, vec![vec![poly(&h1, "g - 1"), poly(&h1, "x")]]).unwrap();
        assert_eq!(window_kernel(&h1, &m, 6).unwrap().dims[6], 0);
    }

    #[test]
    fn cokernels_on_windows() {
        let (kz, _) = load(KZ);
        let m = FreeModuleMap::new(Side::Right, 1, 1, vec![vec![poly(&kz, "g - 1")]]).unwrap();
        let c = window_cokernel(&kz, &m, 0, 4, 1).unwrap();
        assert_eq!(c.total(), 1);
        assert_eq!(c.representatives, vec![(Word::one(), 0)]);
        let id = FreeModuleMap::identity(&kz, Side::Right, 2);
        assert_eq!(window_cokernel(&kz, &id, 0, 4, 1).unwrap().total(), 0);
        assert!(window_cokernel(&kz, &id, 3, 3, 1).unwrap_err().is_refusal());
    }

    #[test]
    fn resolutions_verify() {
        let (_, r) = load(KZ);
        assert!(verify_resolution(&r, 6, 1).unwrap().passed());
        let (h1, r) = load(H1);
        assert!(verify_resolution(&r, 5, 1).unwrap().passed());
        let bad = FreeModuleMap::new(Side::Left, 2, 1, vec![vec![poly(&h1, "g - 1")], vec![NCPoly::zero(h1.field())]]).unwrap();
        let r = r.with_differential(1, bad).unwrap();
        let rep = verify_resolution(&r, 5, 1).unwrap();
        let fail = rep.check("exact at P0").unwrap();
        assert!(!fail.passed);
        assert!(fail.witness.as_ref().unwrap().starts_with("degree 1:"));
    }

    #[test]
    fn kz_ext() {
        let (kz, r) = load(KZ);
        let cx = r.hom_complex();
        assert_eq!(ext_certificate(&cx, 0, 0, 6, 1).unwrap().verdict, ExtVerdict::ZeroOnWindow);
        let e1 = ext_certificate(&cx, 1, 0, 6, 1).unwrap();
        let ExtVerdict::OneDimensional(d) = &e1.verdict else { panic!("{:?}", e1.verdict) };
        assert_eq!(d.witness, vec![kz.one()]);
        assert!(d.character.values().all(|x| *x == kz.field().one()));
        let g = kz.alphabet().letter("g").unwrap();
        assert_eq!(d.nakayama[&g], kz.gen("g").unwrap());
        assert_eq!(ext_certificate(&cx, 2, 0, 6, 1).unwrap().verdict, ExtVerdict::ZeroOnWindow);
    }

    #[test]
    fn h1_ext_zero_and_first() {
        let (_, r) = load(H1);
        let cx = r.hom_complex();
        assert_eq!(ext_certificate(&cx, 0, 0, 4, 1).unwrap().verdict, ExtVerdict::ZeroOnWindow);
        let e1 = ext_certificate(&cx, 1, 0, 4, 1).unwrap();
        assert!(e1.verdict.is_nonzero());
    }
}
