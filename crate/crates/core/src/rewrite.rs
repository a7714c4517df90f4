//! Rewriting systems: diamond-lemma completion with a degree cap, normal
//! forms, and bases of normal words.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::cache::Memo;
use crate::coeffs::{FieldSpec, Scalar};
use crate::error::{Error, Result};
use crate::freealg::{Alphabet, NCPoly, Word};

pub const DEFAULT_STEP_BUDGET: usize = 1_000_000;

/// `lhs -> rhs` with every word of `rhs` smaller than `lhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub lhs: Word,
    pub rhs: NCPoly,
}

impl RewriteRule {
    /// `lhs - rhs`, the relation this rule encodes.
    pub fn relation(&self) -> NCPoly {
        let lhs = NCPoly::word(self.lhs.clone(), self.rhs.field());
        &lhs - &self.rhs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompletionStatus {
    Confluent,
    CompleteUpToDegree(usize),
}

impl fmt::Display for CompletionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompletionStatus::Confluent => write!(f, "confluent"),
            CompletionStatus::CompleteUpToDegree(d) => write!(f, "complete up to degree {d}"),
        }
    }
}

/// An overlap ambiguity `lhs_a = u·s`, `lhs_b = s·v` giving the word `u·s·v`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Overlap {
    pub word: Word,
    pub left: Word,
    pub right: Word,
    pub shared: usize,
}

impl Overlap {
    pub fn degree(&self) -> usize {
        self.word.degree()
    }
}

/// Inter-reduced rules over an alphabet with a completion status.
#[derive(Clone)]
pub struct RewriteSystem {
    alphabet: Alphabet,
    field: FieldSpec,
    rules: Vec<RewriteRule>,
    by_lhs: HashMap<Word, usize>,
    lhs_lengths: Vec<usize>,
    status: CompletionStatus,
    budget: usize,
    memo: Memo<Word, NCPoly>,
}

impl fmt::Debug for RewriteSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RewriteSystem")
            .field("rules", &self.rules)
            .field("status", &self.status)
            .finish()
    }
}

/// Normal words of degree at most `max_degree`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeWindowBasis {
    pub max_degree: usize,
    pub basis: Vec<Word>,
}

impl DegreeWindowBasis {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn count_by_degree(&self) -> Vec<usize> {
        let mut out = vec![0; self.max_degree + 1];
        for w in &self.basis {
            out[w.degree()] += 1;
        }
        out
    }

    pub fn index(&self) -> HashMap<Word, usize> {
        self.basis.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect()
    }
}

impl RewriteSystem {
    fn from_rules(
        alphabet: Alphabet,
        field: FieldSpec,
        mut rules: Vec<RewriteRule>,
        status: CompletionStatus,
        budget: usize,
    ) -> Self {
        rules.sort_by(|a, b| a.lhs.cmp(&b.lhs));
        let by_lhs = rules
            .iter()
            .enumerate()
            .map(|(i, r)| (r.lhs.clone(), i))
            .collect();
        let lengths: BTreeSet<usize> = rules.iter().map(|r| r.lhs.degree()).collect();
        RewriteSystem {
            alphabet,
            field,
            rules,
            by_lhs,
            lhs_lengths: lengths.into_iter().collect(),
            status,
            budget,
            memo: Memo::new(),
        }
    }

    /// A system with no rules: the free algebra itself.
    pub fn free(alphabet: Alphabet, field: FieldSpec) -> Self {
        Self::from_rules(alphabet, field, Vec::new(), CompletionStatus::Confluent, DEFAULT_STEP_BUDGET)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn status(&self) -> CompletionStatus {
        self.status
    }

    pub fn step_budget(&self) -> usize {
        self.budget
    }

    pub fn with_step_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self.memo = Memo::new();
        self
    }

    /// Largest degree for which normal words are certified to be a basis.
    pub fn certified_degree(&self) -> Option<usize> {
        match self.status {
            CompletionStatus::Confluent => None,
            CompletionStatus::CompleteUpToDegree(d) => Some(d),
        }
    }

    /// Refuses if `degree` lies beyond the certified range.
    pub fn require_degree(&self, degree: usize) -> Result<()> {
        match self.status {
            CompletionStatus::CompleteUpToDegree(cap) if degree > cap => Err(Error::Uncertified {
                requested: degree,
                certified: cap,
            }),
            _ => Ok(()),
        }
    }

    /// Leftmost position where some rule applies, with that rule's index.
    fn find_match(&self, w: &Word) -> Option<(usize, usize)> {
        let ls = w.letters();
        for i in 0..ls.len() {
            for &len in &self.lhs_lengths {
                if i + len > ls.len() {
                    break;
                }
                let key = Word::from_letters(&ls[i..i + len]);
                if let Some(&r) = self.by_lhs.get(&key) {
                    return Some((i, r));
                }
            }
        }
        None
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        self.find_match(w).is_none()
    }

    /// Is `w·l` normal, given that `w` is?
    fn extends_normally(&self, w: &Word, l: u16) -> bool {
        let mut ext = w.clone();
        ext.push(l);
        let n = ext.degree();
        !self
            .lhs_lengths
            .iter()
            .any(|&len| len <= n && self.by_lhs.contains_key(&ext.subword(n - len, n)))
    }

    /// One rewrite of the largest reducible monomial at its leftmost redex.
    fn rewrite_once(&self, w: &Word, c: &Scalar, at: (usize, usize), out: &mut BTreeMap<Word, Scalar>) {
        let (pos, r) = at;
        let rule = &self.rules[r];
        let prefix = w.subword(0, pos);
        let suffix = w.subword(pos + rule.lhs.degree(), w.degree());
        for (m, d) in rule.rhs.terms() {
            let nw = prefix.concat(m).concat(&suffix);
            let coeff = c * d;
            match out.entry(nw) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(coeff);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += &coeff;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
    }

    fn reduce_terms(&self, mut pending: BTreeMap<Word, Scalar>, use_memo: bool) -> Result<NCPoly> {
        let mut result = NCPoly::zero(self.field);
        let mut steps = 0usize;
        while let Some((w, c)) = pending.pop_last() {
            if use_memo {
                if let Some(nf) = self.memo.get(&w) {
                    result.add_scaled(&nf, &c);
                    continue;
                }
            }
            match self.find_match(&w) {
                None => result.add_term(w, &c),
                Some(at) => {
                    steps += 1;
                    if steps > self.budget {
                        return Err(Error::StepBudget(self.budget));
                    }
                    self.rewrite_once(&w, &c, at, &mut pending);
                }
            }
        }
        Ok(result)
    }

    /// Normal form of a single word (memoized).
    pub fn normal_form_word(&self, w: &Word) -> Result<NCPoly> {
        self.memo.get_or_try(w, || {
            let mut start = BTreeMap::new();
            start.insert(w.clone(), self.field.one());
            self.reduce_terms(start, true)
        })
    }

    /// Fully reduced representative of `p` modulo the relation ideal.
    pub fn normal_form(&self, p: &NCPoly) -> Result<NCPoly> {
        if p.field() != self.field {
            return Err(Error::Field(crate::coeffs::FieldError::Mismatch(p.field(), self.field)));
        }
        self.alphabet.check_poly(p)?;
        p.map_linear(|w| self.normal_form_word(w))
    }

    /// `nf(p · q)`.
    pub fn mul(&self, p: &NCPoly, q: &NCPoly) -> Result<NCPoly> {
        self.normal_form(&(p * q))
    }

    /// `nf(p_1 ⋯ p_n)` reducing after each factor.
    pub fn product(&self, factors: &[&NCPoly]) -> Result<NCPoly> {
        let mut acc = NCPoly::one(self.field);
        for f in factors {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    /// All overlap ambiguities among the current rules.
    pub fn overlaps(&self) -> Vec<Overlap> {
        let mut out = Vec::new();
        for a in &self.rules {
            for b in &self.rules {
                out.extend(overlaps_of(&a.lhs, &b.lhs));
            }
        }
        out.sort();
        out
    }

    fn overlap_difference(&self, o: &Overlap) -> Result<NCPoly> {
        let a = &self.rules[self.by_lhs[&o.left]];
        let b = &self.rules[self.by_lhs[&o.right]];
        let tail = NCPoly::word(o.right.subword(o.shared, o.right.degree()), self.field);
        let head = NCPoly::word(o.left.subword(0, o.left.degree() - o.shared), self.field);
        let one = self.reduce_terms((&a.rhs * &tail).into_terms(), false)?;
        let two = self.reduce_terms((&head * &b.rhs).into_terms(), false)?;
        Ok(&one - &two)
    }

    /// Overlaps of degree at most `max_degree` whose two reductions differ.
    pub fn unresolved_overlaps(&self, max_degree: usize) -> Result<Vec<(Overlap, NCPoly)>> {
        let mut out = Vec::new();
        for o in self.overlaps() {
            if o.degree() > max_degree {
                continue;
            }
            let diff = self.overlap_difference(&o)?;
            if !diff.is_zero() {
                out.push((o, diff));
            }
        }
        Ok(out)
    }

    /// Normal words of degree at most `max_degree`, ascending; refuses past
    /// the certified range.
    pub fn degree_basis(&self, max_degree: usize) -> Result<DegreeWindowBasis> {
        self.require_degree(max_degree)?;
        let mut basis = vec![Word::one()];
        let mut frontier = vec![Word::one()];
        for _ in 0..max_degree {
            let mut next = Vec::new();
            for w in &frontier {
                for l in self.alphabet.letters() {
                    if self.extends_normally(w, l) {
                        let mut e = w.clone();
                        e.push(l);
                        next.push(e);
                    }
                }
            }
            basis.extend(next.iter().cloned());
            frontier = next;
        }
        basis.sort();
        Ok(DegreeWindowBasis { max_degree, basis })
    }

    /// Number of normal words of each degree up to `max_degree`, without
    /// materializing them.
    pub fn growth(&self, max_degree: usize) -> Result<Vec<usize>> {
        Ok(self.degree_basis(max_degree)?.count_by_degree())
    }

    pub fn display(&self) -> SystemDisplay<'_> {
        SystemDisplay(self)
    }
}

pub struct SystemDisplay<'a>(&'a RewriteSystem);

impl fmt::Display for SystemDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rs = self.0;
        let order: Vec<&str> = rs.alphabet.symbols().iter().map(|s| s.name.as_str()).collect();
        writeln!(f, "order: deglex {}", order.join(" < "))?;
        writeln!(f, "status: {}", rs.status)?;
        writeln!(f, "rules: {}", rs.rules.len())?;
        for r in &rs.rules {
            writeln!(
                f,
                "{} -> {}",
                rs.alphabet.word_string(&r.lhs),
                r.rhs.display(&rs.alphabet)
            )?;
        }
        Ok(())
    }
}

/// Proper overlaps: a nonempty proper suffix of `a` equal to a prefix of `b`.
pub fn overlaps_of(a: &Word, b: &Word) -> Vec<Overlap> {
    let (la, lb) = (a.letters(), b.letters());
    let mut out = Vec::new();
    for k in 1..la.len().min(lb.len()) {
        if la[la.len() - k..] == lb[..k] {
            out.push(Overlap {
                word: a.concat(&b.subword(k, lb.len())),
                left: a.clone(),
                right: b.clone(),
                shared: k,
            });
        }
    }
    out
}

struct Completion {
    alphabet: Alphabet,
    field: FieldSpec,
    rules: BTreeMap<Word, NCPoly>,
    cap: usize,
    budget: usize,
}

impl Completion {
    fn system(&self) -> RewriteSystem {
        let rules = self
            .rules
            .iter()
            .map(|(l, r)| RewriteRule {
                lhs: l.clone(),
                rhs: r.clone(),
            })
            .collect();
        RewriteSystem::from_rules(
            self.alphabet.clone(),
            self.field,
            rules,
            CompletionStatus::CompleteUpToDegree(self.cap),
            self.budget,
        )
    }

    /// Adds a reduced, nonzero polynomial as a rule and inter-reduces.
    /// Returns polynomials displaced from the rule set and the new lhs.
    fn add(&mut self, p: NCPoly) -> Result<Vec<NCPoly>> {
        let (lw, lc) = p.leading().map(|(w, c)| (w.clone(), c.clone())).expect("nonzero");
        let inv = lc.inv()?;
        let monic = p.scale(&inv);
        let rhs = &NCPoly::word(lw.clone(), self.field) - &monic;
        let mut displaced = Vec::new();
        let stale: Vec<Word> = self
            .rules
            .keys()
            .filter(|l| l.find(&lw).is_some())
            .cloned()
            .collect();
        for l in stale {
            let r = self.rules.remove(&l).expect("present");
            displaced.push(&NCPoly::word(l, self.field) - &r);
        }
        self.rules.insert(lw, rhs);
        let rs = self.system();
        let keys: Vec<Word> = self.rules.keys().cloned().collect();
        for k in keys {
            let r = self.rules[&k].clone();
            let nr = rs.reduce_terms(r.into_terms(), false)?;
            self.rules.insert(k, nr);
        }
        Ok(displaced)
    }
}

/// Bergman completion. Overlaps are resolved in order of increasing degree,
/// up to `cap`; the result is `Confluent` only when every overlap of the
/// final rules has degree at most `cap` and resolves.
pub fn complete(
    alphabet: &Alphabet,
    field: FieldSpec,
    relations: &[NCPoly],
    cap: usize,
) -> Result<RewriteSystem> {
    complete_with_budget(alphabet, field, relations, cap, DEFAULT_STEP_BUDGET)
}

pub fn complete_with_budget(
    alphabet: &Alphabet,
    field: FieldSpec,
    relations: &[NCPoly],
    cap: usize,
    budget: usize,
) -> Result<RewriteSystem> {
    for r in relations {
        alphabet.check_poly(r)?;
        if r.field() != field {
            return Err(Error::Field(crate::coeffs::FieldError::Mismatch(r.field(), field)));
        }
        if r.is_zero() {
            return Err(Error::Semantic("relations must be nonzero".into()));
        }
        if r.degree().unwrap_or(0) > cap {
            return Err(Error::Semantic(format!(
                "completion cap {cap} is below the relation degree {}",
                r.degree().unwrap_or(0)
            )));
        }
        if r.degree() == Some(0) {
            return Err(Error::Semantic("a relation is a nonzero constant".into()));
        }
    }
    let mut st = Completion {
        alphabet: alphabet.clone(),
        field,
        rules: BTreeMap::new(),
        cap,
        budget,
    };
    let mut queue: Vec<NCPoly> = relations.to_vec();
    let mut pairs: BTreeSet<Overlap> = BTreeSet::new();
    loop {
        while let Some(p) = queue.pop() {
            let nf = st.system().reduce_terms(p.into_terms(), false)?;
            if nf.is_zero() {
                continue;
            }
            if nf.degree() == Some(0) {
                return Err(Error::Semantic(
                    "relations collapse the algebra (1 = 0 in the quotient)".into(),
                ));
            }
            let lw = nf.leading().map(|(w, _)| w.clone()).expect("nonzero");
            queue.extend(st.add(nf)?);
            for other in st.rules.keys() {
                for o in overlaps_of(&lw, other).into_iter().chain(overlaps_of(other, &lw)) {
                    if o.degree() <= cap {
                        pairs.insert(o);
                    }
                }
            }
        }
        let Some(o) = pairs.pop_first() else { break };
        if !st.rules.contains_key(&o.left) || !st.rules.contains_key(&o.right) {
            continue;
        }
        let rs = st.system();
        let diff = rs.overlap_difference(&o)?;
        if !diff.is_zero() {
            queue.push(diff);
        }
    }
    let mut rs = st.system();
    let all = rs.overlaps();
    let closed = all.iter().all(|o| o.degree() <= cap) && rs.unresolved_overlaps(cap)?.is_empty();
    if closed {
        rs.status = CompletionStatus::Confluent;
    }
    Ok(rs)
}
