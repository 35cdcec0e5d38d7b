//! The spherical subalgebra `B_{t,k}(n, r) = e H_{t,k}(n, r) e`, its
//! generators `T_{p,q,n}(g)`, the symmetrised products `T_n(m)` and the
//! expansion of elements in the `T_n(m)` basis.
//!
//! An element `X e` with `X` symmetric is determined by one coefficient per
//! `S_n`-orbit of permutation-free PBW monomials. Products use
//! `(Σ_{M∈O} M)(Y e) = |O| · e (M_O Y e)` for any orbit representative `M_O`.

mod element;
mod checks;
mod expand;
mod tindex;

use std::sync::{Arc, Mutex};

use rustc_hash::FxHashMap;

pub use element::{orbit_key, orbit_members, orbit_representative, orbit_size, SphericalElement, SphericalJson};
pub use checks::{random_point, verify_generation, verify_independence};
pub use expand::{triangular_reduce, ExpansionPoints, TExpansion};
pub use tindex::{TGen, TIndex, UnitGenerator};

use crate::cherednik::{
    push_term, AlgebraError, CherednikAlgebra, CherednikElement, CherednikMonomial, Generator, MatrixBasisLabel, SlotMatrix,
    Terms,
};
use crate::coeffring::{Coeff, ParamPoly, Rational};
use crate::symcomb::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SphericalError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invalid orbit: {0}")]
    InvalidOrbit(String),
    #[error("element is not in the span of the T-basis candidates: {0}")]
    NotInSpan(String),
    #[error("interpolation degree bound exceeded: {0}")]
    DegreeBoundExceeded(String),
    #[error("element is not S_n-invariant")]
    NotInvariant,
}

/// `B_{t,k}(n, r)` with memoised generators and `T_n(m)`.
pub struct SphericalAlgebra<C: Coeff = ParamPoly> {
    h: CherednikAlgebra<C>,
    gens: Mutex<FxHashMap<TGen, Arc<SphericalElement<C>>>>,
    sums: Mutex<FxHashMap<TIndex, Arc<SphericalElement<C>>>>,
    points: Mutex<FxHashMap<(Rational, Rational), Arc<SphericalAlgebra<Rational>>>>,
}

impl SphericalAlgebra<ParamPoly> {
    pub fn symbolic(n: usize, r: usize) -> Result<Self, SphericalError> {
        Ok(Self::new(CherednikAlgebra::symbolic(n, r)?))
    }
}

fn factorial(n: u32) -> Rational {
    (2..=n as i64).fold(Rational::one(), |acc, i| &acc * &Rational::from_int(i))
}

impl<C: Coeff> SphericalAlgebra<C> {
    pub fn new(h: CherednikAlgebra<C>) -> Self {
        SphericalAlgebra {
            h,
            gens: Mutex::new(FxHashMap::default()),
            sums: Mutex::new(FxHashMap::default()),
            points: Mutex::new(FxHashMap::default()),
        }
    }

    pub fn n(&self) -> usize {
        self.h.n()
    }

    pub fn r(&self) -> usize {
        self.h.r()
    }

    pub fn cherednik(&self) -> &CherednikAlgebra<C> {
        &self.h
    }

    /// The same algebra at numeric `(t, k)`, memoised so that repeated
    /// expansions share their `T_n(m)` caches.
    pub fn at_point(&self, t: &Rational, k: &Rational) -> Result<Arc<SphericalAlgebra<Rational>>, SphericalError> {
        let key = (t.clone(), k.clone());
        if let Some(a) = self.points.lock().expect("cache lock").get(&key) {
            return Ok(a.clone());
        }
        let h = CherednikAlgebra::with_params(self.n(), self.r(), t.clone(), k.clone())?;
        let a = Arc::new(SphericalAlgebra::new(h));
        Ok(self.points.lock().expect("cache lock").entry(key).or_insert(a).clone())
    }

    pub fn unit(&self) -> SphericalElement<C> {
        SphericalElement::unit(self.n(), self.r())
    }

    pub fn zero(&self) -> SphericalElement<C> {
        SphericalElement::zero(self.n(), self.r())
    }

    pub fn scalar(&self, c: C) -> SphericalElement<C> {
        self.unit().mul_coeff(&c)
    }

    fn check(&self, a: &SphericalElement<C>) -> Result<(), SphericalError> {
        if a.n != self.n() || a.r != self.r() {
            return Err(AlgebraError::ParamMismatch { left: (self.n(), self.r()), right: (a.n, a.r) }.into());
        }
        Ok(())
    }

    /// `e a e`.
    pub fn sandwich(&self, a: &CherednikElement<C>) -> Result<SphericalElement<C>, SphericalError> {
        if a.n() != self.n() || a.r() != self.r() {
            return Err(AlgebraError::ParamMismatch { left: (self.n(), self.r()), right: (a.n(), a.r()) }.into());
        }
        let mut he = Terms::default();
        for (m, c) in a.terms() {
            let mut mm = m.clone();
            mm.absorb_perm();
            push_term(&mut he, mm, c.clone());
        }
        Ok(SphericalElement::from_he(self.n(), self.r(), &he))
    }

    /// Reads `a e` as an element of `B` when `a e` is already `S_n`-invariant.
    pub fn from_invariant(&self, a: &CherednikElement<C>) -> Result<SphericalElement<C>, SphericalError> {
        let mut he = Terms::default();
        for (m, c) in a.terms() {
            let mut mm = m.clone();
            mm.absorb_perm();
            push_term(&mut he, mm, c.clone());
        }
        SphericalElement::from_invariant_he(self.n(), self.r(), &he)
    }

    pub fn mul(&self, a: &SphericalElement<C>, b: &SphericalElement<C>) -> Result<SphericalElement<C>, SphericalError> {
        self.check(a)?;
        self.check(b)?;
        let n = self.n();
        let yhat = b.expand_he();
        let mut raw: FxHashMap<TIndex, C> = FxHashMap::default();
        for (k, c) in a.terms() {
            let rep = orbit_representative(k, n);
            let factor = c.scale(&orbit_size(k, n));
            for (m, z) in self.h.left_mul_monomial(&rep, &yhat, true) {
                raw.entry(orbit_key(&m)).or_insert_with(C::zero).add_assign_ref(&z.mul_ref(&factor));
            }
        }
        for (k, c) in raw.iter_mut() {
            *c = c.scale(&orbit_size(k, n).recip().expect("nonzero"));
        }
        Ok(SphericalElement::from_map(n, self.r(), raw))
    }

    pub fn commutator(&self, a: &SphericalElement<C>, b: &SphericalElement<C>) -> Result<SphericalElement<C>, SphericalError> {
        self.mul(a, b)?.sub(&self.mul(b, a)?)
    }

    /// `T_{p,q,n}(g) = (p!q!/(p+q)!) Σ_words Σ_i (g)_i word(x_i, y_i) e`.
    pub fn t_gen(&self, p: u8, q: u8, g: &SlotMatrix) -> Result<SphericalElement<C>, SphericalError> {
        if g.r() != self.r() {
            return Err(AlgebraError::InvalidLabel(format!("matrix of size {} for r = {}", g.r(), self.r())).into());
        }
        let n = self.n();
        let len = p as u32 + q as u32;
        let mut words = Terms::default();
        for mask in 0u32..(1 << len) {
            if mask.count_ones() != p as u32 {
                continue;
            }
            let mut cur = Terms::default();
            cur.insert(CherednikMonomial::one(n), C::one());
            // letter l is x when bit l is set; the rightmost letter acts first
            for l in (0..len).rev() {
                let g = if mask & (1 << l) != 0 { Generator::X(0) } else { Generator::Y(0) };
                cur = self.h.apply_generator(&g, &cur, true);
            }
            for (m, c) in cur {
                push_term(&mut words, m, c);
            }
        }
        let mut z = Terms::default();
        for (l, c) in g.decompose() {
            for (m, v) in self.h.apply_generator(&Generator::Slot(l, 0), &words, true) {
                push_term(&mut z, m, v.scale(&c));
            }
        }
        let weight = &(&factorial(p as u32) * &factorial(q as u32)) * &factorial(len).recip().expect("nonzero");
        let scale = &weight * &Rational::from_int(n as i64);
        Ok(SphericalElement::from_he(n, self.r(), &z).scale(&scale))
    }

    /// Memoised `T_{p,q,n}(label)`.
    pub fn t_generator(&self, g: TGen) -> Result<Arc<SphericalElement<C>>, SphericalError> {
        if let Some(v) = self.gens.lock().expect("cache lock").get(&g) {
            return Ok(v.clone());
        }
        if !g.label.is_valid_for(self.r()) {
            return Err(AlgebraError::InvalidLabel(format!("{} for r = {}", g.label, self.r())).into());
        }
        let v = Arc::new(self.t_gen(g.p, g.q, &g.label.to_matrix(self.r()))?);
        self.gens.lock().expect("cache lock").insert(g, v.clone());
        Ok(v)
    }

    /// Sum of `T_{a_1} .. T_{a_M}` over the distinct orderings of `m`.
    fn ordered_sum(&self, m: &TIndex) -> Result<Arc<SphericalElement<C>>, SphericalError> {
        if m.is_empty() {
            return Ok(Arc::new(self.unit()));
        }
        if let Some(v) = self.sums.lock().expect("cache lock").get(m) {
            return Ok(v.clone());
        }
        let mut acc = self.zero();
        for (g, _) in m.multiplicities() {
            let rest = m.without_one(&g).expect("member");
            let tail = self.ordered_sum(&rest)?;
            let head = self.t_generator(g)?;
            acc = acc.add(&self.mul(&head, &tail)?)?;
        }
        let v = Arc::new(acc);
        self.sums.lock().expect("cache lock").insert(m.clone(), v.clone());
        Ok(v)
    }

    /// `T_n(m)`: the average of `Π T_a` over distinct orderings of `m`.
    pub fn t_basis(&self, m: &TIndex) -> Result<SphericalElement<C>, SphericalError> {
        if m.size() > self.n() {
            return Err(SphericalError::InvalidOrbit(format!("{m:?} needs more than {} sites", self.n())));
        }
        let s = self.ordered_sum(m)?;
        let count = &factorial(m.size() as u32) * &m.multiplicity_factorial().recip().expect("nonzero");
        Ok(s.scale(&count.recip().expect("nonzero")))
    }

    /// `ψ_n(z) = T_{0,0,n}(z)`.
    pub fn psi(&self, z: &SlotMatrix) -> Result<SphericalElement<C>, SphericalError> {
        self.t_gen(0, 0, z)
    }

    /// Full PBW expansion in `H`, including every permutation of `e`.
    /// Intended for small `n`.
    pub fn to_cherednik(&self, a: &SphericalElement<C>) -> Result<CherednikElement<C>, SphericalError> {
        self.check(a)?;
        let n = self.n();
        let perms = Permutation::all(n);
        let inv = factorial(n as u32).recip().expect("nonzero");
        let mut terms = Terms::default();
        for (m, c) in a.expand_he() {
            let c = c.scale(&inv);
            for p in &perms {
                // M π = x^a S π y^{π^{-1}·b}
                let x: Vec<u8> = m.x_exps().to_vec();
                let labels: Vec<MatrixBasisLabel> = m.labels().collect();
                let mut y = vec![0u8; n];
                for i in 0..n {
                    y[(0..n).find(|&j| p.apply(j) == i).expect("perm")] = m.y(i);
                }
                push_term(&mut terms, CherednikMonomial::new(&x, &labels, p, &y), c.clone());
            }
        }
        Ok(CherednikElement::from_terms(n, self.r(), terms))
    }
}
