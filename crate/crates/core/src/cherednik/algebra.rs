use std::sync::Arc;

use smallvec::SmallVec;

use super::element::{prune, push_term, Terms};
use super::{AlgebraError, CherednikElement, CherednikMonomial, MatrixBasisLabel, SlotAlgebra, SlotMatrix};
use crate::coeffring::{Coeff, ParamPoly, Rational};
use crate::symcomb::Permutation;

/// A generator of `H(n, r)` acting by left multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    X(usize),
    Y(usize),
    Slot(MatrixBasisLabel, usize),
    Perm(Permutation),
}

/// The extended rational Cherednik algebra `H_{t,k}(n, r)` with parameters
/// in the coefficient ring `C`.
///
/// Relations:
/// `[y_i, x_j] = δ_ij (t - k Σ_{m≠i} s_im σ_im) + (1 - δ_ij) k s_ij σ_ij`,
/// the `x`'s and `y`'s commute among themselves, slots commute with `x, y`,
/// and `S_n` permutes indices and slots.
#[derive(Clone, Debug)]
pub struct CherednikAlgebra<C: Coeff = ParamPoly> {
    n: usize,
    r: usize,
    t: C,
    k: C,
    slots: Arc<SlotAlgebra>,
}

impl CherednikAlgebra<ParamPoly> {
    /// Symbolic parameters `t`, `k`.
    pub fn symbolic(n: usize, r: usize) -> Result<Self, AlgebraError> {
        Self::with_params(n, r, ParamPoly::t(), ParamPoly::k())
    }
}

impl<C: Coeff> CherednikAlgebra<C> {
    pub fn with_params(n: usize, r: usize, t: C, k: C) -> Result<Self, AlgebraError> {
        if n == 0 || n > 120 {
            return Err(AlgebraError::InvalidParams(format!("n = {n} is out of range")));
        }
        Ok(CherednikAlgebra { n, r, t, k, slots: Arc::new(SlotAlgebra::new(r)?) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn t(&self) -> &C {
        &self.t
    }

    pub fn k(&self) -> &C {
        &self.k
    }

    pub fn slot_algebra(&self) -> &SlotAlgebra {
        &self.slots
    }

    /// Same `r` and slot tables at a different rank.
    pub fn at_rank(&self, n: usize) -> Result<Self, AlgebraError> {
        if n == 0 || n > 120 {
            return Err(AlgebraError::InvalidParams(format!("n = {n} is out of range")));
        }
        Ok(CherednikAlgebra { n, r: self.r, t: self.t.clone(), k: self.k.clone(), slots: self.slots.clone() })
    }

    fn check(&self, a: &CherednikElement<C>) -> Result<(), AlgebraError> {
        if a.n != self.n || a.r != self.r {
            return Err(AlgebraError::ParamMismatch { left: (self.n, self.r), right: (a.n, a.r) });
        }
        Ok(())
    }

    fn check_site(&self, i: usize) -> Result<(), AlgebraError> {
        if i >= self.n {
            return Err(AlgebraError::InvalidSite { site: i + 1, n: self.n });
        }
        Ok(())
    }

    // ---- Generators (sites are zero-based) ----

    pub fn zero(&self) -> CherednikElement<C> {
        CherednikElement::zero(self.n, self.r)
    }

    pub fn one(&self) -> CherednikElement<C> {
        CherednikElement::from_monomial(self.r, CherednikMonomial::one(self.n), C::one())
    }

    pub fn scalar(&self, c: C) -> CherednikElement<C> {
        CherednikElement::from_monomial(self.r, CherednikMonomial::one(self.n), c)
    }

    pub fn x(&self, i: usize) -> Result<CherednikElement<C>, AlgebraError> {
        self.check_site(i)?;
        let mut m = CherednikMonomial::one(self.n);
        m.inc_x(i);
        Ok(CherednikElement::from_monomial(self.r, m, C::one()))
    }

    pub fn y(&self, i: usize) -> Result<CherednikElement<C>, AlgebraError> {
        self.check_site(i)?;
        let mut m = CherednikMonomial::one(self.n);
        m.inc_y(i);
        Ok(CherednikElement::from_monomial(self.r, m, C::one()))
    }

    pub fn slot(&self, label: MatrixBasisLabel, i: usize) -> Result<CherednikElement<C>, AlgebraError> {
        self.check_site(i)?;
        if !label.is_valid_for(self.r) {
            return Err(AlgebraError::InvalidLabel(format!("{label} for r = {}", self.r)));
        }
        let mut m = CherednikMonomial::one(self.n);
        m.set_label(i, label);
        Ok(CherednikElement::from_monomial(self.r, m, C::one()))
    }

    /// `(g)_i` for an arbitrary matrix `g`.
    pub fn matrix(&self, g: &SlotMatrix, i: usize) -> Result<CherednikElement<C>, AlgebraError> {
        self.check_site(i)?;
        if g.r() != self.r {
            return Err(AlgebraError::InvalidLabel(format!("matrix size {} for r = {}", g.r(), self.r)));
        }
        let mut terms = Terms::default();
        for (l, c) in g.decompose() {
            let mut m = CherednikMonomial::one(self.n);
            m.set_label(i, l);
            push_term(&mut terms, m, C::from_rational(&c));
        }
        Ok(CherednikElement::from_terms(self.n, self.r, terms))
    }

    pub fn perm(&self, p: &Permutation) -> Result<CherednikElement<C>, AlgebraError> {
        if p.degree() != self.n {
            return Err(AlgebraError::InvalidParams(format!("permutation of degree {} in rank {}", p.degree(), self.n)));
        }
        let mut m = CherednikMonomial::one(self.n);
        for i in 0..self.n {
            m.set_perm_image(i, p.apply(i));
        }
        Ok(CherednikElement::from_monomial(self.r, m, C::one()))
    }

    pub fn transposition(&self, i: usize, j: usize) -> Result<CherednikElement<C>, AlgebraError> {
        self.check_site(i)?;
        self.check_site(j)?;
        self.perm(&Permutation::transposition(self.n, i, j))
    }

    /// The slot transposition `σ_ij = Σ_{α,β} (E_αβ)_i (E_βα)_j`.
    pub fn sigma(&self, i: usize, j: usize) -> Result<CherednikElement<C>, AlgebraError> {
        self.check_site(i)?;
        self.check_site(j)?;
        if i == j {
            return Err(AlgebraError::InvalidSite { site: j + 1, n: self.n });
        }
        let id = MatrixBasisLabel::IDENTITY;
        let mut terms = Terms::default();
        for &(a, b, c) in self.slots.sigma(id, id) {
            let mut m = CherednikMonomial::one(self.n);
            m.set_label(i, a);
            m.set_label(j, b);
            push_term(&mut terms, m, C::from_int(c));
        }
        Ok(CherednikElement::from_terms(self.n, self.r, terms))
    }

    pub fn generator(&self, g: &Generator) -> Result<CherednikElement<C>, AlgebraError> {
        match g {
            Generator::X(i) => self.x(*i),
            Generator::Y(i) => self.y(*i),
            Generator::Slot(l, i) => self.slot(*l, *i),
            Generator::Perm(p) => self.perm(p),
        }
    }

    // ---- Products ----

    /// Normal-ordered product `a · b`.
    pub fn mul(&self, a: &CherednikElement<C>, b: &CherednikElement<C>) -> Result<CherednikElement<C>, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        let mut out = Terms::default();
        for (ma, ca) in &a.terms {
            for (m, c) in self.left_mul_monomial(ma, &b.terms, false) {
                push_term(&mut out, m, c.mul_ref(ca));
            }
        }
        Ok(CherednikElement::from_terms(self.n, self.r, out))
    }

    pub fn commutator(&self, a: &CherednikElement<C>, b: &CherednikElement<C>) -> Result<CherednikElement<C>, AlgebraError> {
        self.mul(a, b)?.sub(&self.mul(b, a)?)
    }

    /// Left multiplication by a single generator.
    pub fn left_mul_generator(&self, g: &Generator, b: &CherednikElement<C>) -> Result<CherednikElement<C>, AlgebraError> {
        self.check(b)?;
        self.generator(g)?;
        Ok(CherednikElement::from_terms(self.n, self.r, self.apply_generator(g, &b.terms, false)))
    }

    /// `m · B` where `B` is a sum of PBW monomials. With `absorb` set, `B`
    /// is understood as `B·e` and permutations are pushed into `e`.
    pub(crate) fn left_mul_monomial(&self, m: &CherednikMonomial, b: &Terms<C>, absorb: bool) -> Terms<C> {
        let n = self.n;
        let mut cur: Option<Terms<C>> = None;
        for i in 0..n {
            for _ in 0..m.y(i) {
                let src = cur.as_ref().unwrap_or(b);
                cur = Some(self.apply_generator(&Generator::Y(i), src, absorb));
            }
        }
        if !m.perm_is_identity() {
            let src = cur.as_ref().unwrap_or(b);
            cur = Some(self.apply_generator(&Generator::Perm(m.perm()), src, absorb));
        }
        for i in 0..n {
            let l = m.label(i);
            if !l.is_identity() {
                let src = cur.as_ref().unwrap_or(b);
                cur = Some(self.apply_generator(&Generator::Slot(l, i), src, absorb));
            }
        }
        let mut out = cur.unwrap_or_else(|| b.clone());
        if m.x_exps().iter().any(|&e| e > 0) {
            out = out
                .into_iter()
                .map(|(mut mm, c)| {
                    for i in 0..n {
                        let e = m.x(i);
                        if e > 0 {
                            mm.set_x(i, mm.x(i).checked_add(e).expect("x exponent overflow"));
                        }
                    }
                    (mm, c)
                })
                .collect();
        }
        out
    }

    pub(crate) fn apply_generator(&self, g: &Generator, b: &Terms<C>, absorb: bool) -> Terms<C> {
        let mut out = Terms::default();
        out.reserve(b.len());
        for (m, c) in b {
            match g {
                Generator::X(i) => {
                    let mut mm = m.clone();
                    mm.inc_x(*i);
                    push_term(&mut out, mm, c.clone());
                }
                Generator::Slot(l, i) => self.left_slot(*l, *i, m, c, &mut out),
                Generator::Perm(p) => {
                    let mut mm = left_perm(p, m);
                    if absorb {
                        mm.absorb_perm();
                    }
                    push_term(&mut out, mm, c.clone());
                }
                Generator::Y(j) => self.left_y(*j, m, c, &mut out, absorb),
            }
        }
        prune(&mut out);
        out
    }

    fn left_slot(&self, l: MatrixBasisLabel, i: usize, m: &CherednikMonomial, c: &C, out: &mut Terms<C>) {
        for &(nl, coef) in self.slots.mul(l, m.label(i)) {
            let mut mm = m.clone();
            mm.set_label(i, nl);
            push_term(out, mm, c.scale(&Rational::from_int(coef)));
        }
    }

    /// `y_j · x^a S π y^b`.
    fn left_y(&self, j: usize, m: &CherednikMonomial, c: &C, out: &mut Terms<C>, absorb: bool) {
        let n = self.n;
        // y_j π = π y_{π^{-1}(j)}
        let target = (0..n).find(|&i| m.perm_image(i) == j).expect("permutation");
        let mut main = m.clone();
        main.inc_y(target);
        push_term(out, main, c.clone());

        let aj = m.x(j);
        if aj > 0 {
            let mut mm = m.clone();
            mm.set_x(j, aj - 1);
            push_term(out, mm, c.mul_ref(&self.t).scale(&Rational::from_int(aj as i64)));
        }

        let kc = c.mul_ref(&self.k);
        let neg_kc = kc.neg_ref();
        // Commute y_j through x^a = Π_w x_w^{a_w}, one factor at a time.
        for w in 0..n {
            let aw = m.x(w);
            for copy in 0..aw {
                let split = |u: usize, v: usize| -> SmallVec<[u8; 8]> {
                    // P + s_uv·Q with P the prefix and Q the suffix around this copy of x_w
                    let mut q: SmallVec<[u8; 8]> = SmallVec::from_elem(0, n);
                    let mut p: SmallVec<[u8; 8]> = SmallVec::from_elem(0, n);
                    for idx in 0..n {
                        if idx < w {
                            p[idx] = m.x(idx);
                        } else if idx == w {
                            p[idx] = copy;
                            q[idx] = aw - 1 - copy;
                        } else {
                            q[idx] = m.x(idx);
                        }
                    }
                    q.swap(u, v);
                    for idx in 0..n {
                        p[idx] += q[idx];
                    }
                    p
                };
                if w == j {
                    for other in 0..n {
                        if other != j {
                            self.push_swap_term(m, j, other, &split(j, other), &neg_kc, out, absorb);
                        }
                    }
                } else {
                    self.push_swap_term(m, j, w, &split(j, w), &kc, out, absorb);
                }
            }
        }
    }

    /// Adds `coef · x^{xs} σ_uv (s_uv·S) (s_uv ∘ π) y^b`.
    #[allow(clippy::too_many_arguments)]
    fn push_swap_term(
        &self,
        m: &CherednikMonomial,
        u: usize,
        v: usize,
        xs: &[u8],
        coef: &C,
        out: &mut Terms<C>,
        absorb: bool,
    ) {
        let n = self.n;
        let mut base = m.clone();
        for i in 0..n {
            base.set_x(i, xs[i]);
        }
        for i in 0..n {
            let pi = m.perm_image(i);
            let img = if pi == u {
                v
            } else if pi == v {
                u
            } else {
                pi
            };
            base.set_perm_image(i, img);
        }
        if absorb {
            base.absorb_perm();
        }
        // (s·S)_u = S_v and (s·S)_v = S_u, then σ_uv acts on the left.
        for &(lu, lv, cc) in self.slots.sigma(m.label(v), m.label(u)) {
            let mut mm = base.clone();
            mm.set_label(u, lu);
            mm.set_label(v, lv);
            push_term(out, mm, coef.scale(&Rational::from_int(cc)));
        }
    }
}

/// `p · x^a S π y^b = x^{p·a} (p·S) (p∘π) y^b`.
fn left_perm(p: &Permutation, m: &CherednikMonomial) -> CherednikMonomial {
    let n = m.n();
    let mut mm = m.clone();
    for i in 0..n {
        let pi = p.apply(i);
        mm.set_x(pi, m.x(i));
        mm.set_label(pi, m.label(i));
        mm.set_perm_image(i, p.apply(m.perm_image(i)));
    }
    mm
}
