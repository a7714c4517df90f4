//! Words, noncommutative polynomials and elements of tensor powers of the
//! free algebra.
//!
//! Letters are stored as their precedence rank in the [`Alphabet`], so the
//! derived order on [`Word`] (length first, then lexicographic on letters) is
//! exactly the degree-lexicographic monomial order of the alphabet.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use smallvec::SmallVec;

use crate::coeffs::{FieldSpec, Scalar};
use crate::error::{Error, Result};

pub type Letter = u16;

/// A generator: declaration index, display name and rank in the monomial
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GenSymbol {
    pub id: usize,
    pub name: String,
    pub precedence: usize,
}

/// Generators of a presentation, indexed by precedence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<GenSymbol>,
    by_name: HashMap<String, Letter>,
}

impl Alphabet {
    /// Builds an alphabet from declared names. Without an explicit
    /// `precedence` the declaration order is the monomial order.
    pub fn new(declared: &[String], precedence: Option<&[String]>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, n) in declared.iter().enumerate() {
            if seen.insert(n.clone(), i).is_some() {
                return Err(Error::Semantic(format!("generator `{n}` declared twice")));
            }
        }
        let order: Vec<String> = match precedence {
            None => declared.to_vec(),
            Some(p) => {
                if p.len() != declared.len() {
                    return Err(Error::Semantic(
                        "precedence must list every generator exactly once".into(),
                    ));
                }
                let mut uniq = p.to_vec();
                uniq.sort();
                uniq.dedup();
                if uniq.len() != p.len() || p.iter().any(|n| !seen.contains_key(n)) {
                    return Err(Error::Semantic(
                        "precedence must list every generator exactly once".into(),
                    ));
                }
                p.to_vec()
            }
        };
        if order.len() > Letter::MAX as usize {
            return Err(Error::Semantic("too many generators".into()));
        }
        let symbols: Vec<GenSymbol> = order
            .iter()
            .enumerate()
            .map(|(rank, name)| GenSymbol {
                id: seen[name],
                name: name.clone(),
                precedence: rank,
            })
            .collect();
        let by_name = symbols
            .iter()
            .map(|s| (s.name.clone(), s.precedence as Letter))
            .collect();
        Ok(Alphabet { symbols, by_name })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.by_name.get(name).copied()
    }

    pub fn name(&self, l: Letter) -> &str {
        &self.symbols[l as usize].name
    }

    pub fn symbols(&self) -> &[GenSymbol] {
        &self.symbols
    }

    /// Letters in declaration order.
    pub fn declared(&self) -> Vec<Letter> {
        let mut v: Vec<&GenSymbol> = self.symbols.iter().collect();
        v.sort_by_key(|s| s.id);
        v.into_iter().map(|s| s.precedence as Letter).collect()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.symbols.len() as Letter
    }

    /// Degree-lexicographic comparison under this alphabet's precedence.
    pub fn compare(&self, u: &Word, v: &Word) -> Ordering {
        u.cmp(v)
    }

    pub fn contains_word(&self, w: &Word) -> bool {
        w.letters().iter().all(|&l| (l as usize) < self.symbols.len())
    }

    pub fn check_poly(&self, p: &NCPoly) -> Result<()> {
        if p.words().all(|w| self.contains_word(w)) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    pub fn word_string(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let letters = w.letters();
        let mut i = 0;
        while i < letters.len() {
            let mut j = i;
            while j < letters.len() && letters[j] == letters[i] {
                j += 1;
            }
            let name = self.name(letters[i]);
            if j - i == 1 {
                parts.push(name.to_string());
            } else {
                parts.push(format!("{name}^{}", j - i));
            }
            i = j;
        }
        parts.join("*")
    }
}

/// A monomial in the free monoid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(SmallVec<[Letter; 8]>);

impl Word {
    pub fn one() -> Self {
        Word(SmallVec::new())
    }

    pub fn letter(l: Letter) -> Self {
        let mut v = SmallVec::new();
        v.push(l);
        Word(v)
    }

    pub fn from_letters(ls: &[Letter]) -> Self {
        Word(SmallVec::from_slice(ls))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn subword(&self, start: usize, end: usize) -> Word {
        Word::from_letters(&self.0[start..end])
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Position of the first occurrence of `pat`.
    pub fn find(&self, pat: &Word) -> Option<usize> {
        if pat.degree() > self.degree() {
            return None;
        }
        (0..=self.degree() - pat.degree()).find(|&i| self.0[i..i + pat.degree()] == pat.0[..])
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree-lexicographic comparison of two words.
pub fn word_compare(u: &Word, v: &Word) -> Ordering {
    u.cmp(v)
}

/// Finite linear combination of words with nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NCPoly {
    terms: BTreeMap<Word, Scalar>,
    field: FieldSpec,
}

impl NCPoly {
    pub fn zero(field: FieldSpec) -> Self {
        NCPoly {
            terms: BTreeMap::new(),
            field,
        }
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::monomial(Word::one(), field.one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(Word::one(), c)
    }

    pub fn monomial(w: Word, c: Scalar) -> Self {
        let field = c.field();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        NCPoly { terms, field }
    }

    pub fn word(w: Word, field: FieldSpec) -> Self {
        Self::monomial(w, field.one())
    }

    pub fn letter(l: Letter, field: FieldSpec) -> Self {
        Self::word(Word::letter(l), field)
    }

    pub fn from_terms(field: FieldSpec, terms: impl IntoIterator<Item = (Word, Scalar)>) -> Self {
        let mut p = NCPoly::zero(field);
        for (w, c) in terms {
            p.add_term(w, &c);
        }
        p
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest word length, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::degree)
    }

    pub fn leading(&self) -> Option<(&Word, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Word::one())
    }

    pub fn into_terms(self) -> BTreeMap<Word, Scalar> {
        self.terms
    }

    pub fn add_term(&mut self, w: Word, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &NCPoly, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (w, d) in &other.terms {
            self.add_term(w.clone(), &(d * c));
        }
    }

    pub fn checked_add(&self, other: &NCPoly) -> Result<NCPoly> {
        self.same_field(other)?;
        Ok(self + other)
    }

    pub fn scale(&self, c: &Scalar) -> NCPoly {
        let mut out = NCPoly::zero(self.field);
        out.add_scaled(self, c);
        out
    }

    /// Free-algebra product (word concatenation, extended bilinearly).
    pub fn checked_mul(&self, other: &NCPoly) -> Result<NCPoly> {
        self.same_field(other)?;
        Ok(self * other)
    }

    fn same_field(&self, other: &NCPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::Field(crate::coeffs::FieldError::Mismatch(
                self.field,
                other.field,
            )));
        }
        Ok(())
    }

    /// Applies a linear map given on basis words.
    pub fn map_linear<F>(&self, mut f: F) -> Result<NCPoly>
    where
        F: FnMut(&Word) -> Result<NCPoly>,
    {
        let mut out = NCPoly::zero(self.field);
        for (w, c) in &self.terms {
            out.add_scaled(&f(w)?, c);
        }
        Ok(out)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> PolyDisplay<'a> {
        PolyDisplay {
            poly: self,
            alphabet,
        }
    }
}

impl std::ops::Add for &NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &rhs.field.one());
        out
    }
}

impl std::ops::Sub for &NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-rhs.field.one());
        out
    }
}

impl std::ops::Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        self.scale(&-self.field.one())
    }
}

impl std::ops::Mul for &NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        assert_eq!(self.field, rhs.field, "polynomial fields agree");
        let mut out = NCPoly::zero(self.field);
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                out.add_term(u.concat(v), &(a * b));
            }
        }
        out
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a NCPoly,
    alphabet: &'a Alphabet,
}

pub(crate) fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &Scalar,
    body: Option<String>,
) -> fmt::Result {
    let neg = c.is_negative();
    let mag = if neg { -c } else { c.clone() };
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    match body {
        None => write!(f, "{mag}"),
        Some(b) if mag.is_one() => write!(f, "{b}"),
        Some(b) => write!(f, "{mag}*{b}"),
    }
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.poly.terms().enumerate() {
            let body = (!w.is_empty()).then(|| self.alphabet.word_string(w));
            write_term(f, i == 0, c, body)?;
        }
        Ok(())
    }
}

pub type TensorKey = SmallVec<[Word; 4]>;

/// Element of the `legs`-fold tensor power of the free algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorPoly {
    legs: usize,
    terms: BTreeMap<TensorKey, Scalar>,
    field: FieldSpec,
}

impl TensorPoly {
    pub fn zero(legs: usize, field: FieldSpec) -> Self {
        assert!(legs >= 1, "a tensor has at least one leg");
        TensorPoly {
            legs,
            terms: BTreeMap::new(),
            field,
        }
    }

    /// `1 ⊗ … ⊗ 1`.
    pub fn unit(legs: usize, field: FieldSpec) -> Self {
        let mut t = Self::zero(legs, field);
        t.add_term((0..legs).map(|_| Word::one()).collect(), &field.one());
        t
    }

    /// `p_1 ⊗ … ⊗ p_n`.
    pub fn from_legs(polys: &[NCPoly]) -> Self {
        let field = polys[0].field();
        let mut acc: Vec<(TensorKey, Scalar)> = vec![(TensorKey::new(), field.one())];
        for p in polys {
            let mut next = Vec::with_capacity(acc.len() * p.len());
            for (k, c) in &acc {
                for (w, d) in p.terms() {
                    let mut k2 = k.clone();
                    k2.push(w.clone());
                    next.push((k2, c * d));
                }
            }
            acc = next;
        }
        let mut t = Self::zero(polys.len(), field);
        for (k, c) in acc {
            t.add_term(k, &c);
        }
        t
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&TensorKey, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn add_term(&mut self, key: TensorKey, c: &Scalar) {
        debug_assert_eq!(key.len(), self.legs);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &TensorPoly, c: &Scalar) {
        assert_eq!(self.legs, other.legs, "tensor leg counts agree");
        if c.is_zero() {
            return;
        }
        for (k, d) in &other.terms {
            self.add_term(k.clone(), &(d * c));
        }
    }

    pub fn scale(&self, c: &Scalar) -> TensorPoly {
        let mut out = TensorPoly::zero(self.legs, self.field);
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &TensorPoly) -> TensorPoly {
        let mut out = self.clone();
        out.add_scaled(other, &-self.field.one());
        out
    }

    /// Leg-wise product in the tensor power of the free algebra.
    pub fn tensor_mul(&self, other: &TensorPoly) -> Result<TensorPoly> {
        if self.legs != other.legs {
            return Err(Error::LegMismatch(self.legs, other.legs));
        }
        let mut out = TensorPoly::zero(self.legs, self.field);
        for (k1, a) in &self.terms {
            for (k2, b) in &other.terms {
                let k: TensorKey = k1.iter().zip(k2.iter()).map(|(u, v)| u.concat(v)).collect();
                out.add_term(k, &(a * b));
            }
        }
        Ok(out)
    }

    /// Applies the linear map `f` (given on words) to leg `leg` (0-based).
    pub fn apply_leg<F>(&self, leg: usize, mut f: F) -> Result<TensorPoly>
    where
        F: FnMut(&Word) -> Result<NCPoly>,
    {
        if leg >= self.legs {
            return Err(Error::LegOutOfRange(leg, self.legs));
        }
        let mut out = TensorPoly::zero(self.legs, self.field);
        for (k, c) in &self.terms {
            let img = f(&k[leg])?;
            for (w, d) in img.terms() {
                let mut k2 = k.clone();
                k2[leg] = w.clone();
                out.add_term(k2, &(c * d));
            }
        }
        Ok(out)
    }

    /// Replaces leg `leg` by a tensor of `extra + 1` legs, e.g. applying a
    /// comultiplication to one leg.
    pub fn expand_leg<F>(&self, leg: usize, extra: usize, mut f: F) -> Result<TensorPoly>
    where
        F: FnMut(&Word) -> Result<TensorPoly>,
    {
        if leg >= self.legs {
            return Err(Error::LegOutOfRange(leg, self.legs));
        }
        let mut out = TensorPoly::zero(self.legs + extra, self.field);
        for (k, c) in &self.terms {
            let img = f(&k[leg])?;
            debug_assert_eq!(img.legs, extra + 1);
            for (ik, d) in img.terms() {
                let mut k2 = TensorKey::new();
                k2.extend(k[..leg].iter().cloned());
                k2.extend(ik.iter().cloned());
                k2.extend(k[leg + 1..].iter().cloned());
                out.add_term(k2, &(c * d));
            }
        }
        Ok(out)
    }

    /// Applies a linear functional to leg `leg`, dropping that leg.
    pub fn contract_leg<F>(&self, leg: usize, mut f: F) -> Result<TensorPoly>
    where
        F: FnMut(&Word) -> Scalar,
    {
        if leg >= self.legs {
            return Err(Error::LegOutOfRange(leg, self.legs));
        }
        if self.legs == 1 {
            return Err(Error::LegOutOfRange(leg, 1));
        }
        let mut out = TensorPoly::zero(self.legs - 1, self.field);
        for (k, c) in &self.terms {
            let s = f(&k[leg]);
            if s.is_zero() {
                continue;
            }
            let mut k2 = k.clone();
            k2.remove(leg);
            out.add_term(k2, &(c * &s));
        }
        Ok(out)
    }

    /// Applies a (possibly different) linear map to every leg at once.
    pub fn map_legs<F>(&self, mut f: F) -> Result<TensorPoly>
    where
        F: FnMut(usize, &Word) -> Result<NCPoly>,
    {
        let mut out = TensorPoly::zero(self.legs, self.field);
        for (k, c) in &self.terms {
            let imgs: Vec<NCPoly> = k
                .iter()
                .enumerate()
                .map(|(i, w)| f(i, w))
                .collect::<Result<_>>()?;
            if imgs.iter().any(NCPoly::is_zero) {
                continue;
            }
            out.add_scaled(&TensorPoly::from_legs(&imgs), c);
        }
        Ok(out)
    }

    /// Multiplies the legs together in order (no reduction).
    pub fn multiply_legs(&self) -> NCPoly {
        let mut out = NCPoly::zero(self.field);
        for (k, c) in &self.terms {
            let mut w = Word::one();
            for leg in k {
                w = w.concat(leg);
            }
            out.add_term(w, c);
        }
        out
    }

    /// The single-leg tensor as a polynomial.
    pub fn into_poly(self) -> NCPoly {
        assert_eq!(self.legs, 1);
        NCPoly::from_terms(
            self.field,
            self.terms.into_iter().map(|(mut k, c)| (k.remove(0), c)),
        )
    }

    pub fn display<'a>(&'a self, alphabets: &'a [&'a Alphabet]) -> TensorDisplay<'a> {
        TensorDisplay {
            tensor: self,
            alphabets,
        }
    }
}

pub struct TensorDisplay<'a> {
    tensor: &'a TensorPoly,
    alphabets: &'a [&'a Alphabet],
}

impl fmt::Display for TensorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tensor.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.tensor.terms().enumerate() {
            let body = k
                .iter()
                .enumerate()
                .map(|(leg, w)| {
                    let a = self.alphabets[leg.min(self.alphabets.len() - 1)];
                    a.word_string(w)
                })
                .collect::<Vec<_>>()
                .join(" (x) ");
            write_term(f, i == 0, c, Some(body))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h1() -> Alphabet {
        Alphabet::new(&["x".into(), "g".into(), "G".into()], None).unwrap()
    }

    fn w(a: &Alphabet, names: &[&str]) -> Word {
        Word::from_letters(&names.iter().map(|n| a.letter(n).unwrap()).collect::<Vec<_>>())
    }

    fn p(a: &Alphabet, names: &[&str]) -> NCPoly {
        NCPoly::word(w(a, names), FieldSpec::Rationals)
    }

    #[test]
    fn degree_dominates_then_lex() {
        let a = h1();
        assert_eq!(word_compare(&w(&a, &["G", "G"]), &w(&a, &["x", "x", "x"])), Ordering::Less);
        assert_eq!(word_compare(&w(&a, &["x", "g"]), &w(&a, &["x", "g"])), Ordering::Equal);
        assert_eq!(word_compare(&w(&a, &["x", "g"]), &w(&a, &["g", "x"])), Ordering::Less);
    }

    #[test]
    fn precedence_override_changes_the_order() {
        let a = Alphabet::new(
            &["x".into(), "g".into()],
            Some(&["g".into(), "x".into()]),
        )
        .unwrap();
        assert_eq!(a.compare(&w(&a, &["g", "x"]), &w(&a, &["x", "g"])), Ordering::Less);
        assert_eq!(a.symbols()[0].name, "g");
        assert_eq!(a.symbols()[0].id, 1);
        assert_eq!(a.declared(), vec![1, 0]);
        assert!(Alphabet::new(&["x".into(), "x".into()], None).is_err());
        assert!(Alphabet::new(&["x".into()], Some(&["y".into()])).is_err());
    }

    #[test]
    fn products() {
        let a = h1();
        let f = FieldSpec::Rationals;
        let xg = &p(&a, &["x"]) * &p(&a, &["g"]);
        assert_eq!(xg, p(&a, &["x", "g"]));
        let one = NCPoly::one(f);
        assert_eq!(&xg * &one, xg);
        let x = p(&a, &["x"]);
        let lhs = &(&one + &x) * &(&one - &x);
        assert_eq!(lhs, &one - &p(&a, &["x", "x"]));
        assert_eq!(lhs.display(&a).to_string(), "-x^2 + 1");
    }

    #[test]
    fn tensor_products() {
        let a = h1();
        let f = FieldSpec::Rationals;
        let s = TensorPoly::from_legs(&[p(&a, &["x"]), p(&a, &["g"])]);
        let t = TensorPoly::from_legs(&[p(&a, &["g"]), p(&a, &["x"])]);
        let st = s.tensor_mul(&t).unwrap();
        assert_eq!(st, TensorPoly::from_legs(&[p(&a, &["x", "g"]), p(&a, &["g", "x"])]));
        assert_eq!(s.tensor_mul(&TensorPoly::unit(2, f)).unwrap(), s);
        let mut dx = TensorPoly::from_legs(&[NCPoly::one(f), p(&a, &["x"])]);
        dx.add_scaled(&s, &f.one());
        assert_eq!(dx.tensor_mul(&TensorPoly::unit(2, f)).unwrap(), dx);
        assert!(dx.tensor_mul(&TensorPoly::unit(3, f)).is_err());
        assert_eq!(dx.display(&[&a]).to_string(), "x (x) g + 1 (x) x");
    }

    #[test]
    fn leg_maps() {
        let a = h1();
        let f = FieldSpec::Rationals;
        let mut dx = TensorPoly::from_legs(&[NCPoly::one(f), p(&a, &["x"])]);
        dx.add_scaled(&TensorPoly::from_legs(&[p(&a, &["x"]), p(&a, &["g"])]), &f.one());
        // ε(x) = 0, ε(g) = 1 on leg 0.
        let counit = |w: &Word| {
            if w.letters().contains(&0) {
                f.zero()
            } else {
                f.one()
            }
        };
        let collapsed = dx.contract_leg(0, counit).unwrap().into_poly();
        assert_eq!(collapsed, p(&a, &["x"]));
        assert_eq!(dx.apply_leg(1, |w| Ok(NCPoly::word(w.clone(), f))).unwrap(), dx);
        assert!(dx.apply_leg(0, |_| Ok(NCPoly::zero(f))).unwrap().is_zero());
        assert!(dx.apply_leg(2, |_| Ok(NCPoly::zero(f))).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn word() -> impl Strategy<Value = Word> {
            proptest::collection::vec(0u16..3, 0..5).prop_map(|v| Word::from_letters(&v))
        }

        fn poly() -> impl Strategy<Value = NCPoly> {
            proptest::collection::vec((word(), -3i64..4), 0..4).prop_map(|ts| {
                let f = FieldSpec::Rationals;
                NCPoly::from_terms(f, ts.into_iter().map(|(w, c)| (w, f.from_i64(c))))
            })
        }

        proptest! {
            #[test]
            fn order_is_compatible_with_concatenation(u in word(), v in word(), w in word()) {
                if u < v {
                    prop_assert!(w.concat(&u) < w.concat(&v));
                    prop_assert!(u.concat(&w) < v.concat(&w));
                }
            }

            #[test]
            fn product_is_associative_and_distributive(p in poly(), q in poly(), r in poly()) {
                prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
                prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
                prop_assert_eq!(&(&q + &r) * &p, &(&q * &p) + &(&r * &p));
            }

            #[test]
            fn leg_maps_on_distinct_legs_commute(ps in proptest::collection::vec(poly(), 3)) {
                let f = FieldSpec::Rationals;
                let t = TensorPoly::from_legs(&ps);
                let double = |w: &Word| Ok(NCPoly::word(w.concat(w), f));
                let shift = |w: &Word| {
                    let mut v = w.clone();
                    v.push(1);
                    Ok(NCPoly::word(v, f).scale(&f.from_i64(-2)))
                };
                let a = t.apply_leg(0, double).unwrap().apply_leg(2, shift).unwrap();
                let b = t.apply_leg(2, shift).unwrap().apply_leg(0, double).unwrap();
                prop_assert_eq!(a, b);
            }
        }
    }
}
