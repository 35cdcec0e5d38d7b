use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::{SphericalError, TGen, TIndex};
use crate::cherednik::{push_term, CherednikMonomial, MatrixBasisLabel, Terms};
use crate::coeffring::{Coeff, ParamPoly, Rational, Specialize};
use crate::symcomb::next_permutation;

/// Element of the spherical subalgebra `eH_{t,k}(n, r)e`.
///
/// Stored as `Σ_O c_O (Σ_{M ∈ O} M) e` over `S_n`-orbits `O` of
/// permutation-free PBW monomials; an orbit is named by the multiset of
/// its active site contents.
#[derive(Clone, PartialEq, Debug)]
pub struct SphericalElement<C: Coeff = ParamPoly> {
    pub(crate) n: usize,
    pub(crate) r: usize,
    pub(crate) terms: FxHashMap<TIndex, C>,
}

/// Orbit of a permutation-free monomial.
pub fn orbit_key(m: &CherednikMonomial) -> TIndex {
    let mut gens: SmallVec<[TGen; 4]> = (0..m.n())
        .filter(|&i| m.site_active(i))
        .map(|i| TGen::new(m.x(i), m.y(i), m.label(i)))
        .collect();
    gens.sort_unstable();
    TIndex::from_sorted(gens)
}

/// `n! / ((n - j)! Π mult!)` for an orbit with `j` active sites.
pub fn orbit_size(key: &TIndex, n: usize) -> Rational {
    let j = key.size();
    let mut acc = Rational::one();
    for f in (n - j + 1)..=n {
        acc *= &Rational::from_int(f as i64);
    }
    acc.checked_div(&key.multiplicity_factorial()).expect("nonzero")
}

/// The monomial with the orbit's contents on sites `0..j`.
pub fn orbit_representative(key: &TIndex, n: usize) -> CherednikMonomial {
    let mut m = CherednikMonomial::one(n);
    for (i, g) in key.gens().iter().enumerate() {
        place(&mut m, i, g);
    }
    m
}

fn place(m: &mut CherednikMonomial, i: usize, g: &TGen) {
    m.set_x(i, g.p);
    m.set_y(i, g.q);
    m.set_label(i, g.label);
}

/// Every monomial of the orbit, each once.
pub fn orbit_members(key: &TIndex, n: usize) -> Vec<CherednikMonomial> {
    let mut contents: Vec<TGen> = vec![TGen::INACTIVE; n - key.size()];
    contents.extend_from_slice(key.gens());
    contents.sort_unstable();
    let mut out = Vec::new();
    loop {
        let mut m = CherednikMonomial::one(n);
        for (i, g) in contents.iter().enumerate() {
            if !g.is_inactive() {
                place(&mut m, i, g);
            }
        }
        out.push(m);
        if !next_permutation(&mut contents) {
            break;
        }
    }
    out
}

impl<C: Coeff> SphericalElement<C> {
    pub fn zero(n: usize, r: usize) -> Self {
        SphericalElement { n, r, terms: FxHashMap::default() }
    }

    /// The unit `e`.
    pub fn unit(n: usize, r: usize) -> Self {
        let mut s = Self::zero(n, r);
        s.terms.insert(TIndex::empty(), C::one());
        s
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

    pub fn coeff(&self, key: &TIndex) -> C {
        self.terms.get(key).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TIndex, &C)> {
        self.terms.iter()
    }

    pub fn sorted_terms(&self) -> Vec<(&TIndex, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub(crate) fn from_map(n: usize, r: usize, mut terms: FxHashMap<TIndex, C>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        SphericalElement { n, r, terms }
    }

    /// Builds an element from orbit coefficients, validating each orbit.
    pub fn from_orbits<I: IntoIterator<Item = (TIndex, C)>>(n: usize, r: usize, it: I) -> Result<Self, SphericalError> {
        let mut terms: FxHashMap<TIndex, C> = FxHashMap::default();
        for (k, c) in it {
            if k.size() > n {
                return Err(SphericalError::InvalidOrbit(format!("{k:?} has more than {n} sites")));
            }
            if k.gens().iter().any(|g| !g.label.is_valid_for(r)) {
                return Err(SphericalError::InvalidOrbit(format!("{k:?} uses a label outside r = {r}")));
            }
            let e = terms.entry(k).or_insert_with(C::zero);
            e.add_assign_ref(&c);
        }
        Ok(Self::from_map(n, r, terms))
    }

    fn check_same(&self, o: &Self) -> Result<(), SphericalError> {
        if self.n != o.n || self.r != o.r {
            return Err(SphericalError::Algebra(crate::cherednik::AlgebraError::ParamMismatch {
                left: (self.n, self.r),
                right: (o.n, o.r),
            }));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, SphericalError> {
        self.check_same(o)?;
        let mut terms = self.terms.clone();
        for (k, c) in &o.terms {
            terms.entry(k.clone()).or_insert_with(C::zero).add_assign_ref(c);
        }
        Ok(Self::from_map(self.n, self.r, terms))
    }

    pub fn sub(&self, o: &Self) -> Result<Self, SphericalError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        SphericalElement { n: self.n, r: self.r, terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg_ref())).collect() }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::from_map(self.n, self.r, self.terms.iter().map(|(k, c)| (k.clone(), c.scale(q))).collect())
    }

    pub fn mul_coeff(&self, s: &C) -> Self {
        Self::from_map(self.n, self.r, self.terms.iter().map(|(k, c)| (k.clone(), c.mul_ref(s))).collect())
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> SphericalElement<D> {
        SphericalElement::from_map(self.n, self.r, self.terms.iter().map(|(k, c)| (k.clone(), f(c))).collect())
    }

    /// Largest `x, y` degree over orbits.
    pub fn v_degree(&self) -> u32 {
        self.terms.keys().map(TIndex::weight).max().unwrap_or(0)
    }

    /// Largest number of active sites over orbits.
    pub fn h_degree(&self) -> usize {
        self.terms.keys().map(TIndex::size).max().unwrap_or(0)
    }

    /// Full expansion `Σ_O c_O Σ_{M∈O} M`, the element `X` with `X e` equal to `self`.
    pub(crate) fn expand_he(&self) -> Terms<C> {
        let mut out = Terms::default();
        for (k, c) in &self.terms {
            for m in orbit_members(k, self.n) {
                push_term(&mut out, m, c.clone());
            }
        }
        out
    }

    /// `e · (Σ z_M M e)`: averages each monomial over its orbit.
    pub(crate) fn from_he(n: usize, r: usize, he: &Terms<C>) -> Self {
        let mut acc: FxHashMap<TIndex, C> = FxHashMap::default();
        for (m, c) in he {
            debug_assert!(m.perm_is_identity());
            acc.entry(orbit_key(m)).or_insert_with(C::zero).add_assign_ref(c);
        }
        for (k, c) in acc.iter_mut() {
            let inv = orbit_size(k, n).recip().expect("nonzero orbit");
            *c = c.scale(&inv);
        }
        Self::from_map(n, r, acc)
    }

    /// Reads an `S_n`-invariant `Σ z_M M e` without averaging; fails when
    /// the coefficients are not constant on orbits.
    pub(crate) fn from_invariant_he(n: usize, r: usize, he: &Terms<C>) -> Result<Self, SphericalError> {
        let s = Self::from_he(n, r, he);
        let back = s.expand_he();
        let mut diff = he.clone();
        for (m, c) in back {
            push_term(&mut diff, m, c.neg_ref());
        }
        if diff.values().any(|c| !c.is_zero()) {
            return Err(SphericalError::NotInvariant);
        }
        Ok(s)
    }

    pub fn to_json(&self) -> SphericalJson {
        SphericalJson {
            version: 1,
            n: self.n,
            r: self.r,
            orbits: self.sorted_terms().into_iter().map(|(k, c)| (k.clone(), c.to_string())).collect(),
        }
    }

    /// Labels appearing in any orbit.
    pub fn labels(&self) -> Vec<MatrixBasisLabel> {
        let mut v: Vec<_> = self.terms.keys().flat_map(|k| k.gens().iter().map(|g| g.label)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl<C: Coeff + Specialize> SphericalElement<C> {
    pub fn specialize(&self, t: &Rational, k: &Rational) -> SphericalElement<Rational> {
        self.map_coeffs(|c| c.specialize(t, k))
    }
}

/// Serialised spherical element: orbit keys in T-index form with their
/// coefficients in text form.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct SphericalJson {
    pub version: u32,
    pub n: usize,
    pub r: usize,
    pub orbits: Vec<(TIndex, String)>,
}

impl SphericalJson {
    pub fn into_element(self) -> Result<SphericalElement<ParamPoly>, SphericalError> {
        let mut v = Vec::with_capacity(self.orbits.len());
        for (k, c) in self.orbits {
            let c: ParamPoly = c.parse().map_err(|e| SphericalError::InvalidOrbit(format!("{e}")))?;
            v.push((k, c));
        }
        SphericalElement::from_orbits(self.n, self.r, v)
    }
}
