//! Faithful polynomial representation of `H_{t,k}(n, r)` on
//! `k[x_1..x_n] ⊗ (k^r)^{⊗n}` through Dunkl operators.
//!
//! `y_i` acts as `t ∂_i - k Σ_{j≠i} (x_i - x_j)^{-1} (1 - s_ij)` on the
//! polynomial factor, `s_ij` swaps both variables and tensor factors, `x_i`
//! multiplies and `(g)_i` acts on the `i`-th tensor factor.

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::cherednik::{AlgebraError, CherednikAlgebra, CherednikElement, CherednikMonomial, Generator, MatrixBasisLabel};
use crate::coeffring::{Coeff, Rational};
use crate::symcomb::Permutation;

/// `(x exponents, tensor indices)`, both of length `n`; indices are zero-based.
pub type PolyKey = SmallVec<[u8; 16]>;

#[derive(Clone, PartialEq, Debug)]
pub struct PolyTensorVector<C: Coeff> {
    n: usize,
    terms: FxHashMap<PolyKey, C>,
}

impl<C: Coeff> PolyTensorVector<C> {
    pub fn zero(n: usize) -> Self {
        PolyTensorVector { n, terms: FxHashMap::default() }
    }

    /// `x^a ⊗ e_{I_1} ⊗ .. ⊗ e_{I_n}` with zero-based `I`.
    pub fn basis(x: &[u8], idx: &[u8]) -> Self {
        let n = x.len();
        let mut key: PolyKey = SmallVec::with_capacity(2 * n);
        key.extend_from_slice(x);
        key.extend_from_slice(idx);
        let mut v = Self::zero(n);
        v.terms.insert(key, C::one());
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PolyKey, &C)> {
        self.terms.iter()
    }

    fn push(&mut self, key: PolyKey, c: C) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(C::zero);
        e.add_assign_ref(&c);
    }

    fn pruned(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.push(k.clone(), c.clone());
        }
        out.pruned()
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.push(k.clone(), c.neg_ref());
        }
        out.pruned()
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.n);
        for (k, v) in &self.terms {
            out.push(k.clone(), v.mul_ref(c));
        }
        out.pruned()
    }
}

/// The Dunkl representation attached to an algebra.
pub struct PolynomialRep<'a, C: Coeff> {
    alg: &'a CherednikAlgebra<C>,
}

impl<'a, C: Coeff> PolynomialRep<'a, C> {
    pub fn new(alg: &'a CherednikAlgebra<C>) -> Self {
        PolynomialRep { alg }
    }

    pub fn act_generator(&self, g: &Generator, v: &PolyTensorVector<C>) -> Result<PolyTensorVector<C>, AlgebraError> {
        let n = self.alg.n();
        if v.n != n {
            return Err(AlgebraError::ParamMismatch { left: (n, self.alg.r()), right: (v.n, self.alg.r()) });
        }
        self.alg.generator(g)?;
        let mut out = PolyTensorVector::zero(n);
        for (key, c) in &v.terms {
            match g {
                Generator::X(i) => {
                    let mut k2 = key.clone();
                    k2[*i] += 1;
                    out.push(k2, c.clone());
                }
                Generator::Slot(l, i) => {
                    if let Some(nk) = slot_act(*l, *i, n, key) {
                        out.push(nk, c.clone());
                    }
                }
                Generator::Perm(p) => out.push(perm_act(p, n, key), c.clone()),
                Generator::Y(i) => self.dunkl(*i, key, c, &mut out),
            }
        }
        Ok(out.pruned())
    }

    fn dunkl(&self, i: usize, key: &PolyKey, c: &C, out: &mut PolyTensorVector<C>) {
        let n = self.alg.n();
        let ai = key[i];
        if ai > 0 {
            let mut k2 = key.clone();
            k2[i] -= 1;
            out.push(k2, c.mul_ref(self.alg.t()).scale(&Rational::from_int(ai as i64)));
        }
        let neg_k = c.mul_ref(self.alg.k()).neg_ref();
        for j in 0..n {
            if j == i {
                continue;
            }
            for (k2, sign) in divided_difference(key, i, j) {
                out.push(k2, neg_k.scale(&Rational::from_int(sign)));
            }
        }
    }

    /// Action of a PBW monomial: `y`'s first, then `π`, slots and `x`'s.
    fn act_monomial(&self, m: &CherednikMonomial, v: &PolyTensorVector<C>) -> Result<PolyTensorVector<C>, AlgebraError> {
        let n = self.alg.n();
        let mut cur = v.clone();
        for i in 0..n {
            for _ in 0..m.y(i) {
                cur = self.act_generator(&Generator::Y(i), &cur)?;
            }
        }
        if !m.perm_is_identity() {
            cur = self.act_generator(&Generator::Perm(m.perm()), &cur)?;
        }
        for i in 0..n {
            if !m.label(i).is_identity() {
                cur = self.act_generator(&Generator::Slot(m.label(i), i), &cur)?;
            }
        }
        for i in 0..n {
            for _ in 0..m.x(i) {
                cur = self.act_generator(&Generator::X(i), &cur)?;
            }
        }
        Ok(cur)
    }

    pub fn act(&self, a: &CherednikElement<C>, v: &PolyTensorVector<C>) -> Result<PolyTensorVector<C>, AlgebraError> {
        if a.n() != self.alg.n() || a.r() != self.alg.r() {
            return Err(AlgebraError::ParamMismatch { left: (self.alg.n(), self.alg.r()), right: (a.n(), a.r()) });
        }
        let mut out = PolyTensorVector::zero(self.alg.n());
        for (m, c) in a.terms() {
            out = out.add(&self.act_monomial(m, v)?.scale(c));
        }
        Ok(out)
    }

    /// Basis vectors `x^a ⊗ e_I` with `|a| <= maxdeg`.
    pub fn basis_vectors(&self, maxdeg: u32) -> Vec<PolyTensorVector<C>> {
        let n = self.alg.n();
        let r = self.alg.r();
        let mut exps = Vec::new();
        let mut cur = vec![0u8; n];
        fn rec(i: usize, left: u32, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            if i == cur.len() {
                out.push(cur.clone());
                return;
            }
            for e in 0..=left {
                cur[i] = e as u8;
                rec(i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        rec(0, maxdeg, &mut cur, &mut exps);
        let mut tuples = vec![vec![]];
        for _ in 0..n {
            tuples = tuples
                .into_iter()
                .flat_map(|t: Vec<u8>| {
                    (0..r as u8).map(move |a| {
                        let mut t2 = t.clone();
                        t2.push(a);
                        t2
                    })
                })
                .collect();
        }
        let mut out = Vec::with_capacity(exps.len() * tuples.len());
        for x in &exps {
            for t in &tuples {
                out.push(PolyTensorVector::basis(x, t));
            }
        }
        out
    }

    /// Compares `a` and `b` on every basis vector of degree at most the
    /// larger `x, y` degree of the two.
    pub fn oracle_equal(&self, a: &CherednikElement<C>, b: &CherednikElement<C>) -> Result<bool, AlgebraError> {
        let maxdeg = a.bidegree().1.max(b.bidegree().1);
        self.oracle_equal_upto(a, b, maxdeg)
    }

    pub fn oracle_equal_upto(&self, a: &CherednikElement<C>, b: &CherednikElement<C>, maxdeg: u32) -> Result<bool, AlgebraError> {
        for v in self.basis_vectors(maxdeg) {
            if self.act(a, &v)? != self.act(b, &v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn slot_act(l: MatrixBasisLabel, i: usize, n: usize, key: &PolyKey) -> Option<PolyKey> {
    match l.indices() {
        None => Some(key.clone()),
        Some((a, b)) => {
            if key[n + i] as usize == b - 1 {
                let mut k2 = key.clone();
                k2[n + i] = (a - 1) as u8;
                Some(k2)
            } else {
                None
            }
        }
    }
}

fn perm_act(p: &Permutation, n: usize, key: &PolyKey) -> PolyKey {
    let mut k2 = key.clone();
    for i in 0..n {
        let pi = p.apply(i);
        k2[pi] = key[i];
        k2[n + pi] = key[n + i];
    }
    k2
}

/// Exact quotient `(f - s_ij f) / (x_i - x_j)` for the monomial part of `key`,
/// returned as signed monomials.
fn divided_difference(key: &PolyKey, i: usize, j: usize) -> Vec<(PolyKey, i64)> {
    let (p, q) = (key[i], key[j]);
    let mut out = Vec::new();
    let (hi, lo, sign, a, b) = if p > q { (p, q, 1, i, j) } else { (q, p, -1, j, i) };
    // (x_a^hi x_b^lo - x_a^lo x_b^hi)/(x_a - x_b) = Σ_l x_a^{lo+l} x_b^{hi-1-l}
    for l in 0..hi.saturating_sub(lo) {
        let mut k2 = key.clone();
        k2[a] = lo + l;
        k2[b] = hi - 1 - l;
        out.push((k2, sign));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::ParamPoly;

    #[test]
    fn divided_difference_is_exact() {
        // (x1^3 - x2^3)/(x1 - x2) = x1^2 + x1 x2 + x2^2
        let key: PolyKey = SmallVec::from_slice(&[3, 0, 0, 0]);
        let mut got: Vec<_> = divided_difference(&key, 0, 1).into_iter().map(|(k, s)| (k[0], k[1], s)).collect();
        got.sort();
        assert_eq!(got, vec![(0, 2, 1), (1, 1, 1), (2, 0, 1)]);
        let sym: PolyKey = SmallVec::from_slice(&[2, 2, 0, 0]);
        assert!(divided_difference(&sym, 0, 1).is_empty());
    }

    #[test]
    fn dunkl_commutator_matches_relation() {
        let h = CherednikAlgebra::symbolic(3, 2).unwrap();
        let rep = PolynomialRep::new(&h);
        for v in rep.basis_vectors(2) {
            for i in 0..3 {
                for j in 0..3 {
                    let yx = rep.act_generator(&Generator::Y(i), &rep.act_generator(&Generator::X(j), &v).unwrap()).unwrap();
                    let xy = rep.act_generator(&Generator::X(j), &rep.act_generator(&Generator::Y(i), &v).unwrap()).unwrap();
                    let lhs = yx.sub(&xy);
                    // s_ij σ_ij acts as the variable swap alone
                    let swap = |a: usize, b: usize| {
                        let p = Permutation::transposition(3, a, b);
                        let moved = rep.act_generator(&Generator::Perm(p), &v).unwrap();
                        let sig = rep.act(&h.sigma(a, b).unwrap(), &moved).unwrap();
                        sig
                    };
                    let rhs = if i == j {
                        let mut acc = v.scale(&ParamPoly::t());
                        for m in 0..3 {
                            if m != i {
                                acc = acc.sub(&swap(i, m).scale(&ParamPoly::k()));
                            }
                        }
                        acc
                    } else {
                        swap(i, j).scale(&ParamPoly::k())
                    };
                    assert_eq!(lhs, rhs, "i = {i}, j = {j}");
                }
            }
        }
    }
}

#[cfg(test)]
mod engine_agreement {
    use super::*;
    use crate::coeffring::Rational;

    #[test]
    fn engine_products_act_like_composites() {
        let h = CherednikAlgebra::with_params(3, 2, Rational::new(2, 3).unwrap(), Rational::new(5, 4).unwrap()).unwrap();
        let rep = PolynomialRep::new(&h);
        let words = [
            vec![Generator::Y(0), Generator::X(0), Generator::X(1)],
            vec![Generator::Y(2), Generator::Slot(MatrixBasisLabel::unit(2, 1, 2).unwrap(), 1), Generator::X(1)],
            vec![Generator::X(2), Generator::Y(1), Generator::Y(1), Generator::X(1)],
            vec![Generator::Perm(Permutation::transposition(3, 0, 2)), Generator::Y(0), Generator::X(2)],
        ];
        for w in &words {
            let prod = w.iter().fold(h.one(), |acc, g| h.mul(&acc, &h.generator(g).unwrap()).unwrap());
            for v in rep.basis_vectors(2) {
                let composite = w.iter().rev().fold(v.clone(), |acc, g| rep.act_generator(g, &acc).unwrap());
                assert_eq!(rep.act(&prod, &v).unwrap(), composite, "{w:?}");
            }
        }
    }
}
