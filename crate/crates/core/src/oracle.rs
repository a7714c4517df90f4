//! Window dimensions of a presented algebra by exact linear algebra over
//! the free algebra, independent of normal-form enumeration.
//!
//! Arithmetic is modulo the field characteristic, or modulo 2³¹ − 1 over ℚ.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::coeffs::{FieldSpec, Scalar};
use crate::dsl::ParsedPresentation;
use crate::error::{Error, Result};
use crate::freealg::{Letter, NCPoly, Word};

const P: u64 = 2_147_483_647;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn residue(c: &Scalar, p: u64) -> u64 {
    match c {
        Scalar::Residue { value, .. } => *value as u64,
        Scalar::Rational(r) => {
            let red = |n: &BigInt| {
                let m = (n.abs() % p).to_u64().unwrap();
                if n.is_negative() { (p - m) % p } else { m }
            };
            red(r.numer()) * pow_mod(red(r.denom()), p - 2, p) % p
        }
    }
}

fn free_words(letters: &[Letter], d: usize) -> Vec<Word> {
    let mut out = vec![Word::one()];
    let mut layer = vec![Word::one()];
    for _ in 0..d {
        let mut next = Vec::new();
        for w in &layer {
            for l in letters {
                next.push(w.concat(&Word::letter(*l)));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Sparse echelon mod `p` over free words, pivots on the highest-degree word.
struct Span {
    p: u64,
    index: HashMap<Word, usize>,
    cols: Vec<Word>,
    pivots: Vec<Option<Vec<(usize, u64)>>>,
}

impl Span {
    fn new(letters: &[Letter], top: usize, p: u64) -> Self {
        let mut cols = free_words(letters, top);
        cols.sort_by(|a, b| b.degree().cmp(&a.degree()).then(a.cmp(b)));
        let index = cols.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let pivots = vec![None; cols.len()];
        Span { p, index, cols, pivots }
    }

    fn row(&self, x: &NCPoly) -> BTreeMap<usize, u64> {
        let mut row = BTreeMap::new();
        for (w, c) in x.terms() {
            let e = row.entry(self.index[w]).or_insert(0);
            *e = (*e + residue(c, self.p)) % self.p;
        }
        row.retain(|_, c| *c != 0);
        row
    }

    /// Reduces `x`; inserts the remainder when `insert` and returns whether
    /// `x` was already in the span.
    fn reduce(&mut self, x: &NCPoly, insert: bool) -> bool {
        let p = self.p;
        let mut row = self.row(x);
        while let Some((&j, &f)) = row.iter().next() {
            match &self.pivots[j] {
                Some(pr) => {
                    for &(k, c) in pr {
                        let e = row.entry(k).or_insert(0);
                        *e = (*e + p - f * c % p) % p;
                        if *e == 0 {
                            row.remove(&k);
                        }
                    }
                }
                None => {
                    if insert {
                        let inv = pow_mod(f, p - 2, p);
                        self.pivots[j] = Some(row.iter().map(|(&k, &c)| (k, c * inv % p)).collect());
                    }
                    return false;
                }
            }
        }
        true
    }

    /// Adds `u·r·v` for every free `u`, `v` keeping the degree within `top`.
    fn add_multiples(&mut self, rels: &[NCPoly], letters: &[Letter], top: usize, field: FieldSpec) {
        let free = free_words(letters, top);
        for r in rels {
            let rd = r.degree().unwrap_or(0);
            for u in free.iter().filter(|u| u.degree() + rd <= top) {
                for v in free.iter().filter(|v| u.degree() + v.degree() + rd <= top) {
                    let uv = &(&NCPoly::word(u.clone(), field) * r) * &NCPoly::word(v.clone(), field);
                    self.reduce(&uv, true);
                }
            }
        }
    }

    /// Quotient dimension in each degree `0..=d`.
    fn quotient_dims(&self, d: usize) -> Vec<usize> {
        let mut dims = vec![0; d + 1];
        for (j, w) in self.cols.iter().enumerate() {
            if w.degree() <= d && self.pivots[j].is_none() {
                dims[w.degree()] += 1;
            }
        }
        dims
    }
}

fn modulus(field: FieldSpec) -> u64 {
    match field.characteristic() {
        0 => P,
        p => p as u64,
    }
}

/// Window dimensions of the quotient computed by linear algebra alone.
///
/// The completed rules, read as relations, span the ideal in each window
/// (they form a Gröbner basis for a degree-compatible order, so multiples of
/// bounded degree suffice). Both ideals are then shown to agree: every input
/// relation lies in the span of rule multiples, and every rule lies in the
/// span of input-relation multiples within `margin` extra degrees.
pub fn quotient_dims(parsed: &ParsedPresentation, d: usize, margin: usize) -> Result<Vec<usize>> {
    let file = &parsed.file;
    let field = file.field;
    let p = modulus(field);
    let letters: Vec<Letter> = file.alphabet.letters().collect();
    let inputs = file.all_relations();
    let rules: Vec<NCPoly> = parsed.hopf.rewrite().rules().iter().map(|r| r.relation()).collect();

    let mut by_rules = Span::new(&letters, d, p);
    by_rules.add_multiples(&rules, &letters, d, field);
    let top_in = inputs.iter().filter_map(NCPoly::degree).max().unwrap_or(0).max(d);
    let mut rules_wide = Span::new(&letters, top_in, p);
    rules_wide.add_multiples(&rules, &letters, top_in, field);
    if let Some(r) = inputs.iter().find(|r| !rules_wide.reduce(r, false)) {
        return Err(Error::Semantic(format!(
            "input relation {} is not a consequence of the rules",
            parsed.hopf.show(r)
        )));
    }

    let mut pending: Vec<&NCPoly> = rules.iter().collect();
    let rd = rules.iter().filter_map(NCPoly::degree).max().unwrap_or(0);
    for e in 0..=margin {
        if pending.is_empty() {
            break;
        }
        let mut span = Span::new(&letters, rd + e, p);
        span.add_multiples(&inputs, &letters, rd + e, field);
        pending.retain(|g| !span.reduce(g, false));
    }
    if !pending.is_empty() {
        let shown: Vec<String> = pending.iter().map(|g| parsed.hopf.show(g)).collect();
        return Err(Error::refusal(format!(
            "rules not derived from the input within margin {margin}: {}",
            shown.join(", ")
        )));
    }
    Ok(by_rules.quotient_dims(d))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_presentation;

    const FREE_COMM: &str = "\
algebra K over F7
gens: x, y
rels: x*y - y*x
comul: x -> x (x) 1 + 1 (x) x, y -> y (x) 1 + 1 (x) y
counit: x -> 0, y -> 0
antipode: x -> -x, y -> -y
";

    #[test]
    fn polynomial_ring_dims() {
        let p = parse_presentation(FREE_COMM).unwrap();
        assert_eq!(quotient_dims(&p, 4, 0).unwrap(), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn residues() {
        let q = FieldSpec::Rationals;
        assert_eq!(residue(&q.from_i64(-1), P), P - 1);
        let half = q.from_fraction(&BigInt::from(1), &BigInt::from(2)).unwrap();
        assert_eq!(residue(&half, P) * 2 % P, 1);
    }
}
