use std::collections::hash_map::Entry;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::{AlgebraError, CherednikMonomial, MatrixBasisLabel};
use crate::coeffring::{Coeff, ParamPoly, Rational, Specialize};
use crate::symcomb::Permutation;

pub(crate) type Terms<C> = FxHashMap<CherednikMonomial, C>;

#[inline]
pub(crate) fn push_term<C: Coeff>(acc: &mut Terms<C>, m: CherednikMonomial, c: C) {
    match acc.entry(m) {
        Entry::Occupied(mut e) => e.get_mut().add_assign_ref(&c),
        Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

pub(crate) fn prune<C: Coeff>(acc: &mut Terms<C>) {
    acc.retain(|_, c| !c.is_zero());
}

/// Finite linear combination of PBW monomials of `H(n, r)`.
#[derive(Clone, PartialEq, Debug)]
pub struct CherednikElement<C: Coeff = ParamPoly> {
    pub(crate) n: usize,
    pub(crate) r: usize,
    pub(crate) terms: Terms<C>,
}

impl<C: Coeff> CherednikElement<C> {
    pub fn zero(n: usize, r: usize) -> Self {
        CherednikElement { n, r, terms: Terms::default() }
    }

    pub fn from_monomial(r: usize, m: CherednikMonomial, c: C) -> Self {
        let mut e = Self::zero(m.n(), r);
        if !c.is_zero() {
            e.terms.insert(m, c);
        }
        e
    }

    pub(crate) fn from_terms(n: usize, r: usize, mut terms: Terms<C>) -> Self {
        prune(&mut terms);
        CherednikElement { n, r, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &CherednikMonomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CherednikMonomial, &C)> {
        self.terms.iter()
    }

    /// Terms in the fixed monomial order.
    pub fn sorted_terms(&self) -> Vec<(&CherednikMonomial, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub(crate) fn check_same(&self, o: &Self) -> Result<(), AlgebraError> {
        if self.n != o.n || self.r != o.r {
            return Err(AlgebraError::ParamMismatch { left: (self.n, self.r), right: (o.n, o.r) });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.check_same(o)?;
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            push_term(&mut terms, m.clone(), c.clone());
        }
        Ok(Self::from_terms(self.n, self.r, terms))
    }

    pub fn sub(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        CherednikElement {
            n: self.n,
            r: self.r,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::from_terms(self.n, self.r, self.terms.iter().map(|(m, c)| (m.clone(), c.scale(q))).collect())
    }

    pub fn mul_coeff(&self, s: &C) -> Self {
        Self::from_terms(self.n, self.r, self.terms.iter().map(|(m, c)| (m.clone(), c.mul_ref(s))).collect())
    }

    /// `(n - H, V)`: active sites and total `x, y` degree, maximised over
    /// terms. The permutation part does not contribute.
    pub fn bidegree(&self) -> (usize, u32) {
        self.terms.keys().fold((0, 0), |(h, v), m| (h.max(m.active_sites()), v.max(m.v_degree())))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> CherednikElement<D> {
        CherednikElement::from_terms(self.n, self.r, self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect())
    }

    /// Whether every monomial has trivial permutation part.
    pub fn is_perm_free(&self) -> bool {
        self.terms.keys().all(CherednikMonomial::perm_is_identity)
    }

    pub fn to_json(&self) -> ElementJson {
        ElementJson {
            version: 1,
            n: self.n,
            r: self.r,
            terms: self
                .sorted_terms()
                .into_iter()
                .map(|(m, c)| TermJson {
                    x_exp: m.x_exps().iter().map(|&e| e as u32).collect(),
                    slots: (0..self.n)
                        .filter_map(|i| m.label(i).indices().map(|(a, b)| [i + 1, a, b]))
                        .collect(),
                    perm: m.perm(),
                    y_exp: m.y_exps().iter().map(|&e| e as u32).collect(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }
}

impl<C: Coeff + Specialize> CherednikElement<C> {
    pub fn specialize(&self, t: &Rational, k: &Rational) -> CherednikElement<Rational> {
        self.map_coeffs(|c| c.specialize(t, k))
    }
}

/// Serialised term: slots list `[site, α, β]` for non-identity sites, all
/// indices one-based.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct TermJson {
    pub x_exp: Vec<u32>,
    pub slots: Vec<[usize; 3]>,
    pub perm: Permutation,
    pub y_exp: Vec<u32>,
    pub coeff: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct ElementJson {
    #[serde(default = "one_u32")]
    pub version: u32,
    pub n: usize,
    pub r: usize,
    pub terms: Vec<TermJson>,
}

fn one_u32() -> u32 {
    1
}

impl ElementJson {
    pub fn into_element(self) -> Result<CherednikElement<ParamPoly>, AlgebraError> {
        let (n, r) = (self.n, self.r);
        if n == 0 || r == 0 || r > super::slots::MAX_R {
            return Err(AlgebraError::InvalidParams(format!("n = {n}, r = {r}")));
        }
        let mut terms = Terms::default();
        for t in self.terms {
            if t.x_exp.len() != n || t.y_exp.len() != n || t.perm.degree() != n {
                return Err(AlgebraError::Parse("term parts must have length n".into()));
            }
            let mut labels = vec![MatrixBasisLabel::IDENTITY; n];
            for [site, a, b] in t.slots {
                if site == 0 || site > n {
                    return Err(AlgebraError::InvalidSite { site, n });
                }
                labels[site - 1] = MatrixBasisLabel::unit(r, a, b)?;
            }
            let to_u8 = |v: &[u32]| -> Result<Vec<u8>, AlgebraError> {
                v.iter()
                    .map(|&e| u8::try_from(e).map_err(|_| AlgebraError::Parse(format!("exponent {e} too large"))))
                    .collect()
            };
            let m = CherednikMonomial::new(&to_u8(&t.x_exp)?, &labels, &t.perm, &to_u8(&t.y_exp)?);
            let c: ParamPoly = t.coeff.parse().map_err(|e| AlgebraError::Parse(format!("{e}")))?;
            push_term(&mut terms, m, c);
        }
        Ok(CherednikElement::from_terms(n, r, terms))
    }
}
