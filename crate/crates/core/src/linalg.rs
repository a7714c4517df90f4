//! Sparse exact linear algebra: incremental row echelon forms over a field
//! with optional tracking of input combinations.
//!
//! Vectors are sparse maps from an ordered key type to nonzero scalars. A
//! row's pivot is its largest key; with words as keys this means rows are
//! eliminated from the top of the monomial order down, so the rows whose
//! pivot lies in a degree window span the intersection with that window.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::coeffs::{FieldSpec, Scalar};

pub type SparseVec<K> = BTreeMap<K, Scalar>;

pub fn axpy<K: Ord + Clone>(y: &mut SparseVec<K>, a: &Scalar, x: &SparseVec<K>) {
    if a.is_zero() {
        return;
    }
    for (k, v) in x {
        let d = a * v;
        match y.entry(k.clone()) {
            Entry::Vacant(e) => {
                e.insert(d);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &d;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

pub fn scaled<K: Ord + Clone>(x: &SparseVec<K>, a: &Scalar) -> SparseVec<K> {
    let mut out = SparseVec::new();
    axpy(&mut out, a, x);
    out
}

#[derive(Debug, Clone)]
struct Row<K> {
    vec: SparseVec<K>,
    combo: SparseVec<usize>,
}

/// Echelon form built one vector at a time. Every stored row is monic at its
/// pivot.
#[derive(Debug, Clone)]
pub struct Echelon<K: Ord + Clone> {
    field: FieldSpec,
    rows: BTreeMap<K, Row<K>>,
    track: bool,
    inserted: usize,
}

/// Outcome of reducing a vector against an echelon form.
#[derive(Debug, Clone)]
pub struct Reduction<K> {
    /// What is left after eliminating every pivot key.
    pub remainder: SparseVec<K>,
    /// Coefficients `c_i` with `v = remainder + Σ c_i · input_i` (only when
    /// tracking).
    pub combo: SparseVec<usize>,
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new(field: FieldSpec) -> Self {
        Echelon {
            field,
            rows: BTreeMap::new(),
            track: false,
            inserted: 0,
        }
    }

    pub fn tracking(field: FieldSpec) -> Self {
        Echelon {
            track: true,
            ..Self::new(field)
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.rows.contains_key(k)
    }

    /// Rows of the echelon form, in increasing pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.values().map(|r| &r.vec)
    }

    pub fn reduce(&self, v: &SparseVec<K>) -> Reduction<K> {
        let mut rem = v.clone();
        let mut combo = SparseVec::new();
        let mut upper: Option<K> = None;
        loop {
            let next = match &upper {
                None => rem.keys().next_back().cloned(),
                Some(u) => rem.range(..u.clone()).next_back().map(|(k, _)| k.clone()),
            };
            let Some(k) = next else { break };
            if let Some(row) = self.rows.get(&k) {
                let c = rem[&k].clone();
                axpy(&mut rem, &-&c, &row.vec);
                if self.track {
                    axpy(&mut combo, &c, &row.combo);
                }
            }
            upper = Some(k);
        }
        Reduction {
            remainder: rem,
            combo,
        }
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).remainder.is_empty()
    }

    /// Inserts the next input vector. Returns `None` if it was independent,
    /// otherwise the dependency `input_new = Σ c_i · input_i` as the
    /// coefficient map (tracking mode) or an empty map.
    pub fn insert(&mut self, v: &SparseVec<K>) -> Option<SparseVec<usize>> {
        let idx = self.inserted;
        self.inserted += 1;
        let red = self.reduce(v);
        if red.remainder.is_empty() {
            return Some(red.combo);
        }
        let mut combo = SparseVec::new();
        if self.track {
            combo.insert(idx, self.field.one());
            axpy(&mut combo, &-self.field.one(), &red.combo);
        }
        let (pk, lc) = red
            .remainder
            .iter()
            .next_back()
            .map(|(k, c)| (k.clone(), c.clone()))
            .expect("nonzero remainder");
        let inv = lc.inv().expect("nonzero pivot");
        let row = Row {
            vec: scaled(&red.remainder, &inv),
            combo: scaled(&combo, &inv),
        };
        self.rows.insert(pk, row);
        None
    }

    /// Expresses `v` in terms of the inserted vectors, if it is in their span.
    pub fn solve(&self, v: &SparseVec<K>) -> Option<SparseVec<usize>> {
        assert!(self.track, "solve needs a tracking echelon form");
        let red = self.reduce(v);
        red.remainder.is_empty().then_some(red.combo)
    }

    /// Number of rows whose pivot satisfies `keep`; with pivots ordered by
    /// degree this is the dimension of the span's intersection with a window.
    pub fn rank_where(&self, mut keep: impl FnMut(&K) -> bool) -> usize {
        self.rows.keys().filter(|k| keep(k)).count()
    }
}

/// Kernel of the linear map sending input `i` to `images[i]`: a basis of
/// coefficient vectors.
pub fn kernel<K: Ord + Clone>(field: FieldSpec, images: &[SparseVec<K>]) -> Vec<SparseVec<usize>> {
    let mut ech = Echelon::tracking(field);
    let mut out = Vec::new();
    for (i, v) in images.iter().enumerate() {
        if let Some(dep) = ech.insert(v) {
            let mut k = scaled(&dep, &-field.one());
            k.insert(i, field.one());
            out.push(k);
        }
    }
    out
}

pub fn rank<K: Ord + Clone>(field: FieldSpec, vecs: &[SparseVec<K>]) -> usize {
    let mut ech = Echelon::new(field);
    for v in vecs {
        ech.insert(v);
    }
    ech.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(f: FieldSpec, entries: &[(u32, i64)]) -> SparseVec<u32> {
        entries
            .iter()
            .map(|&(k, c)| (k, f.from_i64(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    #[test]
    fn rank_and_kernel() {
        let f = FieldSpec::Rationals;
        let imgs = vec![
            v(f, &[(0, 1), (1, 2)]),
            v(f, &[(1, 1), (2, 1)]),
            v(f, &[(0, 1), (1, 3), (2, 1)]),
            v(f, &[]),
        ];
        assert_eq!(rank(f, &imgs), 2);
        let ker = kernel(f, &imgs);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            let mut sum = SparseVec::new();
            for (i, c) in k {
                axpy(&mut sum, c, &imgs[*i]);
            }
            assert!(sum.is_empty());
        }
    }

    #[test]
    fn solve_reconstructs() {
        let f = FieldSpec::PrimeField(7);
        let mut e = Echelon::tracking(f);
        let a = v(f, &[(0, 1), (3, 2)]);
        let b = v(f, &[(3, 1), (5, 4)]);
        e.insert(&a);
        e.insert(&b);
        let mut target = scaled(&a, &f.from_i64(3));
        axpy(&mut target, &f.from_i64(5), &b);
        let c = e.solve(&target).unwrap();
        assert_eq!(c.get(&0), Some(&f.from_i64(3)));
        assert_eq!(c.get(&1), Some(&f.from_i64(5)));
        assert!(e.solve(&v(f, &[(1, 1)])).is_none());
    }

    #[test]
    fn remainder_is_free_of_pivots() {
        let f = FieldSpec::Rationals;
        let mut e = Echelon::new(f);
        e.insert(&v(f, &[(2, 1), (1, 1)]));
        e.insert(&v(f, &[(1, 1), (0, -1)]));
        let r = e.reduce(&v(f, &[(2, 1)])).remainder;
        assert_eq!(r, v(f, &[(0, -1)]));
        assert_eq!(e.rank_where(|&k| k <= 1), 1);
    }
}
