//! Coactions of a presented Hopf algebra on a commutative polynomial ring.
//!
//! Monomials of `k[x, y, …]` are words with letters in ascending order, so
//! the left leg of `k[x, y, …] ⊗ H` is a tensor leg over the variable
//! alphabet kept in commutative normal form.

use std::sync::Arc;

use crate::dsl::CoactionSpec;
use crate::error::{Error, Result};
use crate::freealg::{Alphabet, NCPoly, TensorKey, TensorPoly, Word};
use crate::hopf::HopfPresentation;
use crate::report::{CheckResult, Report};

fn sorted(w: &Word) -> Word {
    let mut ls = w.letters().to_vec();
    ls.sort_unstable();
    Word::from_letters(&ls)
}

/// `ρ: k[vars] → k[vars] ⊗ H`, given on the variables.
#[derive(Debug, Clone)]
pub struct Coaction {
    algebra: Arc<HopfPresentation>,
    vars: Alphabet,
    images: Vec<TensorPoly>,
}

impl Coaction {
    pub fn new(algebra: Arc<HopfPresentation>, spec: &CoactionSpec) -> Result<Self> {
        if spec.images.len() != spec.vars.len() {
            return Err(Error::Semantic("coaction needs one image per variable".into()));
        }
        let mut images = Vec::with_capacity(spec.images.len());
        for t in &spec.images {
            if t.legs() != 2 {
                return Err(Error::LegMismatch(t.legs(), 2));
            }
            let mut out = TensorPoly::zero(2, algebra.field());
            for (k, c) in t.terms() {
                let right = algebra.nf(&NCPoly::word(k[1].clone(), algebra.field()))?;
                for (w, d) in right.terms() {
                    out.add_term(TensorKey::from_vec(vec![sorted(&k[0]), w.clone()]), &(c * d));
                }
            }
            images.push(out);
        }
        Ok(Coaction {
            algebra,
            vars: spec.vars.clone(),
            images,
        })
    }

    pub fn algebra(&self) -> &Arc<HopfPresentation> {
        &self.algebra
    }

    pub fn vars(&self) -> &Alphabet {
        &self.vars
    }

    /// Product in `k[vars] ⊗ H`.
    pub fn mul(&self, s: &TensorPoly, t: &TensorPoly) -> Result<TensorPoly> {
        let a = &self.algebra;
        let mut out = TensorPoly::zero(2, a.field());
        for (k, c) in s.terms() {
            for (l, d) in t.terms() {
                let left = sorted(&k[0].concat(&l[0]));
                let right = a.rewrite().normal_form_word(&k[1].concat(&l[1]))?;
                for (w, e) in right.terms() {
                    out.add_term(TensorKey::from_vec(vec![left.clone(), w.clone()]), &(&(c * d) * e));
                }
            }
        }
        Ok(out)
    }

    /// `ρ` of a monomial, multiplying the images of its letters in order.
    pub fn rho_word(&self, m: &Word) -> Result<TensorPoly> {
        let mut acc = TensorPoly::unit(2, self.algebra.field());
        for &l in m.letters() {
            acc = self.mul(&acc, &self.images[l as usize])?;
        }
        Ok(acc)
    }

    /// Monomials of degree ≤ `d`, ascending.
    pub fn monomials(&self, d: usize) -> Vec<Word> {
        let mut out = vec![Word::one()];
        let mut layer = vec![Word::one()];
        for _ in 0..d {
            let mut next = Vec::new();
            for w in &layer {
                let last = w.letters().last().copied().unwrap_or(0);
                for l in self.vars.letters().filter(|&l| l >= last) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    pub fn show(&self, t: &TensorPoly) -> String {
        t.display(&[&self.vars, self.algebra.alphabet()]).to_string()
    }

    fn show_word(&self, w: &Word) -> String {
        self.vars.word_string(w)
    }
}

/// Algebra-map, coassociativity, counit and grading checks on monomials of
/// degree ≤ `d`.
pub fn coaction_check(c: &Coaction, d: usize) -> Result<Report> {
    let a = c.algebra();
    let f = a.field();
    let growth = c
        .images
        .iter()
        .flat_map(|t| t.terms().map(|(k, _)| k[1].degree()))
        .max()
        .unwrap_or(1)
        .max(1);
    a.require_degree(d * growth)?;
    let monos = c.monomials(d);
    let mut rep = Report::new(format!("coaction of {} on k[{}]", a.name(), {
        let names: Vec<&str> = c.vars.symbols().iter().map(|s| s.name.as_str()).collect();
        names.join(", ")
    }))
    .with("degree", d)
    .with("monomials", monos.len());

    let mut pairs = Vec::new();
    for m in &monos {
        for n in &monos {
            if m.degree() + n.degree() <= d && !m.is_empty() && !n.is_empty() {
                pairs.push((m, n));
            }
        }
    }
    rep.push(CheckResult::run("ρ is an algebra map", &pairs, |&(m, n)| {
        let lhs = c.mul(&c.rho_word(m)?, &c.rho_word(n)?)?;
        let rhs = c.rho_word(&sorted(&m.concat(n)))?;
        Ok::<_, Error>((lhs != rhs).then(|| {
            format!(
                "ρ({})ρ({}) = {} but ρ({}) = {}",
                c.show_word(m),
                c.show_word(n),
                c.show(&lhs),
                c.show_word(&sorted(&m.concat(n))),
                c.show(&rhs)
            )
        }))
    })?);
    rep.push(CheckResult::run("(ρ ⊗ id)ρ = (id ⊗ Δ)ρ", &monos, |m| {
        let r = c.rho_word(m)?;
        let mut lhs = TensorPoly::zero(3, f);
        for (k, s) in r.terms() {
            for (l, t) in c.rho_word(&k[0])?.terms() {
                lhs.add_term(TensorKey::from_vec(vec![l[0].clone(), l[1].clone(), k[1].clone()]), &(s * t));
            }
        }
        let mut rhs = TensorPoly::zero(3, f);
        for (k, s) in r.terms() {
            for (l, t) in a.comul(&NCPoly::word(k[1].clone(), f))?.terms() {
                rhs.add_term(TensorKey::from_vec(vec![k[0].clone(), l[0].clone(), l[1].clone()]), &(s * t));
            }
        }
        Ok::<_, Error>((lhs != rhs).then(|| format!("monomial {}", c.show_word(m))))
    })?);
    rep.push(CheckResult::run("(id ⊗ ε)ρ = id", &monos, |m| {
        let mut out = NCPoly::zero(f);
        for (k, s) in c.rho_word(m)?.terms() {
            out.add_term(k[0].clone(), &(s * &a.counit_word(&k[1])));
        }
        let expect = NCPoly::word(m.clone(), f);
        Ok::<_, Error>((out != expect).then(|| {
            format!("monomial {} gives {}", c.show_word(m), out.display(&c.vars))
        }))
    })?);
    rep.push(CheckResult::run("ρ preserves the grading", &monos, |m| {
        let r = c.rho_word(m)?;
        let bad = r.terms().find(|(k, _)| k[0].degree() != m.degree());
        Ok::<_, Error>(bad.map(|(k, _)| {
            format!("monomial {} has a term with left leg {}", c.show_word(m), c.show_word(&k[0]))
        }))
    })?);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_presentation;

    const KXY: &str = "\
algebra H2 over Q
gens: u11, u11inv, u12, u22, u22inv
inverses: (u11, u11inv), (u22, u22inv)
RELS
comul:
  u11 -> u11 (x) u11
  u11inv -> u11inv (x) u11inv
  u12 -> u11 (x) u12 + u12 (x) u22
  u22 -> u22 (x) u22
  u22inv -> u22inv (x) u22inv
counit: u11 -> 1, u11inv -> 1, u12 -> 0, u22 -> 1, u22inv -> 1
antipode: u11 -> u11inv, u11inv -> u11, u12 -> -u11inv*u12*u22inv, u22 -> u22inv, u22inv -> u22
coaction:
  vars: x, y
  x -> x (x) u11
  y -> x (x) u12 + y (x) u22
";

    fn load(rels: &str) -> Coaction {
        let p = parse_presentation(&KXY.replace("RELS", rels)).unwrap();
        Coaction::new(Arc::new(p.hopf), p.file.coaction.as_ref().unwrap()).unwrap()
    }

    #[test]
    fn group_like_leg() {
        let c = load("rels: u11*u12 - u12*u11, u11*u22 - u22*u11");
        let x = Word::letter(c.vars().letter("x").unwrap());
        let r = c.rho_word(&x).unwrap();
        assert_eq!(c.show(&r), "x (x) u11");
    }

    #[test]
    fn passes_with_central_u11() {
        let c = load("rels: u11*u12 - u12*u11, u11*u22 - u22*u11");
        let rep = coaction_check(&c, 4).unwrap();
        assert!(rep.passed(), "{}", rep.render_text());
        assert_eq!(c.monomials(4).len(), 15);
    }

    #[test]
    fn fails_without_centrality() {
        let c = load("");
        let rep = coaction_check(&c, 2).unwrap();
        let chk = rep.check("ρ is an algebra map").unwrap();
        assert!(!chk.passed);
        assert!(chk.witness.as_ref().unwrap().contains("but ρ(x*y)"));
    }
}
