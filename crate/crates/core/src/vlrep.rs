//! The modules `W_l = H_{-t,-k}(l, 1) ⊗ (C^r)^{⊗l}` over `H_{t,k}(l, r)` and
//! their quotients `V_l = H_{-t,-k}(l, 1) ⊗_{C[S_l]} (C^r)^{⊗l}` over
//! `B_{t,k}(l, r)`, together with Guay's generator operators on `V_l`.
//!
//! On `W_l`: `x_i`, `y_i` multiply the first factor on the right, `(g)_i`
//! acts on the `i`-th tensor factor and `π` sends `m ⊗ v` to `m π^{-1} ⊗ π v`.
//! Vectors of `V_l` are stored through representatives `x^a y^b ⊗ v`.

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::cherednik::{AlgebraError, CherednikAlgebra, CherednikElement, CherednikMonomial, SlotMatrix, Terms};
use crate::coeffring::{ParamPoly, Rational};
use crate::guay::{psi_ddca, GuayError, GuayGenerator, GuayKind};
use crate::interp::{project_to_finite_rank, InterpError};
use crate::report::VerificationReport;
use crate::spherical::{SphericalAlgebra, SphericalElement, SphericalError};
use crate::symcomb::Permutation;

/// Basis vector `e_{v_1} ⊗ .. ⊗ e_{v_l}` with zero-based entries.
pub type TensorIndex = SmallVec<[u8; 8]>;

type Key = (CherednikMonomial, TensorIndex);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VlError {
    #[error("result exceeds the truncation degree {0}")]
    TruncationOverflow(u32),
    #[error("{0} requires ω₀ and is out of scope")]
    OutOfScope(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Spherical(#[from] SphericalError),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error(transparent)]
    Guay(#[from] GuayError),
}

/// Element of `W_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct WVector {
    terms: FxHashMap<Key, ParamPoly>,
}

/// Element of `V_l`, stored through permutation-free representatives.
#[derive(Clone, Debug, PartialEq)]
pub struct VlVector {
    terms: FxHashMap<Key, ParamPoly>,
}

fn push(acc: &mut FxHashMap<Key, ParamPoly>, k: Key, c: ParamPoly) {
    let e = acc.entry(k).or_insert_with(ParamPoly::zero);
    *e = e.add(&c);
}

fn pruned(mut terms: FxHashMap<Key, ParamPoly>) -> FxHashMap<Key, ParamPoly> {
    terms.retain(|_, c| !c.is_zero());
    terms
}

fn sorted(terms: &FxHashMap<Key, ParamPoly>) -> Vec<(&Key, &ParamPoly)> {
    let mut v: Vec<_> = terms.iter().collect();
    v.sort_by(|a, b| a.0.cmp(b.0));
    v
}

impl WVector {
    pub fn zero() -> Self {
        WVector { terms: FxHashMap::default() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> Vec<(&Key, &ParamPoly)> {
        sorted(&self.terms)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut t = self.terms.clone();
        for (k, c) in &o.terms {
            push(&mut t, k.clone(), c.clone());
        }
        WVector { terms: pruned(t) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.mul_coeff(&ParamPoly::from_int(-1)))
    }

    pub fn mul_coeff(&self, c: &ParamPoly) -> Self {
        WVector { terms: pruned(self.terms.iter().map(|(k, v)| (k.clone(), v.mul(c))).collect()) }
    }
}

impl VlVector {
    pub fn zero() -> Self {
        VlVector { terms: FxHashMap::default() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> Vec<(&Key, &ParamPoly)> {
        sorted(&self.terms)
    }

    pub fn coeff(&self, m: &CherednikMonomial, v: &[u8]) -> ParamPoly {
        self.terms.get(&(m.clone(), TensorIndex::from_slice(v))).cloned().unwrap_or_else(ParamPoly::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut t = self.terms.clone();
        for (k, c) in &o.terms {
            push(&mut t, k.clone(), c.clone());
        }
        VlVector { terms: pruned(t) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.mul_coeff(&ParamPoly::from_int(-1)))
    }

    pub fn mul_coeff(&self, c: &ParamPoly) -> Self {
        VlVector { terms: pruned(self.terms.iter().map(|(k, v)| (k.clone(), v.mul(c))).collect()) }
    }

    pub fn to_json(&self) -> Vec<VlTermJson> {
        self.terms()
            .into_iter()
            .map(|((m, v), c)| VlTermJson {
                x_exp: m.x_exps().to_vec(),
                y_exp: m.y_exps().to_vec(),
                tensor: v.iter().map(|&i| i + 1).collect(),
                coeff: c.to_string(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VlTermJson {
    pub x_exp: Vec<u8>,
    pub y_exp: Vec<u8>,
    /// One-based tensor indices.
    pub tensor: Vec<u8>,
    pub coeff: String,
}

/// A generator of `H_{t,k}(l, r)` acting on `W_l` (zero-based sites).
#[derive(Clone, Debug, PartialEq)]
pub enum HOp {
    X(usize),
    Y(usize),
    Slot(SlotMatrix, usize),
    Perm(Permutation),
}

/// The ω₀-free generators of Guay's algebra on `V_l`. `i` is one-based
/// and `p ∈ {0, 1}` is the current degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GuayOp {
    XPlus { i: usize, p: u8 },
    XMinus { i: usize, p: u8 },
    H { i: usize, p: u8 },
    X00Plus,
    /// `X_{0,1}^{+,±}`, which needs `ω₀`.
    X01Plus,
}

impl std::fmt::Display for GuayOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GuayOp::XPlus { i, p } => write!(f, "X+_{{{i},{p}}}"),
            GuayOp::XMinus { i, p } => write!(f, "X-_{{{i},{p}}}"),
            GuayOp::H { i, p } => write!(f, "H_{{{i},{p}}}"),
            GuayOp::X00Plus => write!(f, "X+_{{0,0}}"),
            GuayOp::X01Plus => write!(f, "X+_{{0,1}}"),
        }
    }
}

/// `W_l` and `V_l` at fixed `(l, r)` with a degree truncation.
pub struct VlModule {
    l: usize,
    r: usize,
    max_degree: u32,
    inner: CherednikAlgebra<ParamPoly>,
    outer: CherednikAlgebra<ParamPoly>,
}

fn terms_of(e: &CherednikElement<ParamPoly>) -> Terms<ParamPoly> {
    e.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

fn permute_tensor(p: &Permutation, v: &TensorIndex) -> TensorIndex {
    let mut out = v.clone();
    for (pos, &val) in v.iter().enumerate() {
        out[p.apply(pos)] = val;
    }
    out
}

impl VlModule {
    pub fn new(l: usize, r: usize, max_degree: u32) -> Result<Self, VlError> {
        if l == 0 || l > 8 || r == 0 {
            return Err(VlError::Invalid(format!("(l, r) = ({l}, {r}) is out of range")));
        }
        let inner = CherednikAlgebra::with_params(l, 1, ParamPoly::t().neg(), ParamPoly::k().neg())?;
        let outer = CherednikAlgebra::symbolic(l, r)?;
        Ok(VlModule { l, r, max_degree, inner, outer })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// The algebra `H_{t,k}(l, r)` acting on `W_l`.
    pub fn outer(&self) -> &CherednikAlgebra<ParamPoly> {
        &self.outer
    }

    /// The first tensor factor `H_{-t,-k}(l, 1)`.
    pub fn inner(&self) -> &CherednikAlgebra<ParamPoly> {
        &self.inner
    }

    fn check_tensor(&self, v: &[u8]) -> Result<(), VlError> {
        if v.len() != self.l || v.iter().any(|&i| i as usize >= self.r) {
            return Err(VlError::Invalid(format!("tensor index {v:?} for (l, r) = ({}, {})", self.l, self.r)));
        }
        Ok(())
    }

    /// `x^a y^b ⊗ e_v` in `W_l` (zero-based tensor entries).
    pub fn w_basis(&self, x: &[u8], y: &[u8], v: &[u8]) -> Result<WVector, VlError> {
        self.check_tensor(v)?;
        if x.len() != self.l || y.len() != self.l {
            return Err(VlError::Invalid("exponent vectors must have length l".into()));
        }
        let m = CherednikMonomial::new(x, &vec![crate::cherednik::MatrixBasisLabel::IDENTITY; self.l], &Permutation::identity(self.l), y);
        let mut terms = FxHashMap::default();
        terms.insert((m, TensorIndex::from_slice(v)), ParamPoly::one());
        Ok(WVector { terms })
    }

    /// The class of `x^a y^b ⊗ e_v` in `V_l`.
    pub fn vl_basis(&self, x: &[u8], y: &[u8], v: &[u8]) -> Result<VlVector, VlError> {
        Ok(VlVector { terms: self.w_basis(x, y, v)?.terms })
    }

    fn check_degree(&self, m: &CherednikMonomial) -> Result<(), VlError> {
        if m.v_degree() > self.max_degree {
            return Err(VlError::TruncationOverflow(self.max_degree));
        }
        Ok(())
    }

    /// `m ↦ m · g` on the first factor.
    fn right_mul(&self, w: &WVector, g: &Terms<ParamPoly>) -> Result<WVector, VlError> {
        let mut out = FxHashMap::default();
        for ((m, v), c) in &w.terms {
            for (mm, cc) in self.inner.left_mul_monomial(m, g, false) {
                self.check_degree(&mm)?;
                push(&mut out, (mm, v.clone()), cc.mul(c));
            }
        }
        Ok(WVector { terms: pruned(out) })
    }

    /// `(g)_i` on the `i`-th tensor factor.
    fn slot_act(&self, g: &SlotMatrix, i: usize, w: &WVector) -> Result<WVector, VlError> {
        if g.r() != self.r {
            return Err(VlError::Invalid(format!("matrix of size {} for r = {}", g.r(), self.r)));
        }
        let mut out = FxHashMap::default();
        for ((m, v), c) in &w.terms {
            let col = v[i] as usize;
            for a in 0..self.r {
                let e = g.get(a + 1, col + 1);
                if e.is_zero() {
                    continue;
                }
                let mut nv = v.clone();
                nv[i] = a as u8;
                push(&mut out, (m.clone(), nv), c.scale(e));
            }
        }
        Ok(WVector { terms: pruned(out) })
    }

    fn check_site(&self, i: usize) -> Result<(), VlError> {
        if i >= self.l {
            return Err(AlgebraError::InvalidSite { site: i + 1, n: self.l }.into());
        }
        Ok(())
    }

    pub fn act_h_generator(&self, g: &HOp, w: &WVector) -> Result<WVector, VlError> {
        match g {
            HOp::X(i) => {
                self.check_site(*i)?;
                self.right_mul(w, &terms_of(&self.inner.x(*i)?))
            }
            HOp::Y(i) => {
                self.check_site(*i)?;
                self.right_mul(w, &terms_of(&self.inner.y(*i)?))
            }
            HOp::Slot(g, i) => {
                self.check_site(*i)?;
                self.slot_act(g, *i, w)
            }
            HOp::Perm(p) => {
                if p.degree() != self.l {
                    return Err(VlError::Invalid(format!("permutation of degree {}", p.degree())));
                }
                let moved = self.right_mul(w, &terms_of(&self.inner.perm(&p.inverse())?))?;
                let terms = moved.terms.into_iter().map(|((m, v), c)| ((m, permute_tensor(p, &v)), c)).collect();
                Ok(WVector { terms })
            }
        }
    }

    /// A word acts right to left: the last letter first.
    pub fn act_word(&self, word: &[HOp], w: &WVector) -> Result<WVector, VlError> {
        let mut cur = w.clone();
        for g in word.iter().rev() {
            cur = self.act_h_generator(g, &cur)?;
        }
        Ok(cur)
    }

    /// Action of a normal-form element `Σ c x^a S π y^b` of `H_{t,k}(l, r)`.
    pub fn act_h_element(&self, a: &CherednikElement<ParamPoly>, w: &WVector) -> Result<WVector, VlError> {
        if a.n() != self.l || a.r() != self.r {
            return Err(AlgebraError::ParamMismatch { left: (self.l, self.r), right: (a.n(), a.r()) }.into());
        }
        let mut acc = WVector::zero();
        for (mono, c) in a.sorted_terms() {
            let mut word = Vec::new();
            for i in 0..self.l {
                word.extend(std::iter::repeat(HOp::X(i)).take(mono.x(i) as usize));
            }
            for (i, label) in mono.labels().enumerate() {
                if !label.is_identity() {
                    word.push(HOp::Slot(label.to_matrix(self.r), i));
                }
            }
            if !mono.perm_is_identity() {
                word.push(HOp::Perm(mono.perm()));
            }
            for i in 0..self.l {
                word.extend(std::iter::repeat(HOp::Y(i)).take(mono.y(i) as usize));
            }
            acc = acc.add(&self.act_word(&word, w)?.mul_coeff(c));
        }
        Ok(acc)
    }

    /// `x^a π y^b ⊗ v = x^a y^{π·b} ⊗ π v` in `V_l`.
    pub fn canonicalize(&self, w: &WVector) -> VlVector {
        let mut out = FxHashMap::default();
        for ((m, v), c) in &w.terms {
            if m.perm_is_identity() {
                push(&mut out, (m.clone(), v.clone()), c.clone());
                continue;
            }
            let p = m.perm();
            let mut y = vec![0u8; self.l];
            for i in 0..self.l {
                y[p.apply(i)] = m.y(i);
            }
            let labels: Vec<_> = m.labels().collect();
            let nm = CherednikMonomial::new(m.x_exps(), &labels, &Permutation::identity(self.l), &y);
            push(&mut out, (nm, permute_tensor(&p, v)), c.clone());
        }
        VlVector { terms: pruned(out) }
    }

    pub fn lift(&self, v: &VlVector) -> WVector {
        WVector { terms: v.terms.clone() }
    }

    /// Action of `b = X e ∈ B_{t,k}(l, r)` on `V_l`.
    ///
    /// `X` commutes with `S_l`, so it preserves the kernel of `W_l → V_l`
    /// and `e` acts on that quotient as the identity.
    pub fn act_spherical(&self, b: &SphericalElement<ParamPoly>, v: &VlVector) -> Result<VlVector, VlError> {
        if b.n() != self.l || b.r() != self.r {
            return Err(AlgebraError::ParamMismatch { left: (self.l, self.r), right: (b.n(), b.r()) }.into());
        }
        let w = self.lift(v);
        let mut acc = FxHashMap::default();
        let mut monos: Vec<_> = b.expand_he().into_iter().collect();
        monos.sort_by(|a, b| a.0.cmp(&b.0));
        for (mono, c) in monos {
            // x^a S y^b acts as m ↦ m y^b x^a on the first factor and S on the second
            let mut ym = CherednikMonomial::one(self.l);
            let mut xm = CherednikMonomial::one(self.l);
            for i in 0..self.l {
                for _ in 0..mono.y(i) {
                    ym.inc_y(i);
                }
                for _ in 0..mono.x(i) {
                    xm.inc_x(i);
                }
            }
            let mut xt = Terms::default();
            xt.insert(xm, ParamPoly::one());
            let right = self.inner.left_mul_monomial(&ym, &xt, false);
            let mut cur = self.right_mul(&w, &right)?;
            for (i, label) in mono.labels().enumerate() {
                if !label.is_identity() {
                    cur = self.slot_act(&label.to_matrix(self.r), i, &cur)?;
                }
            }
            for (k, cc) in self.canonicalize(&cur).terms {
                push(&mut acc, k, cc.mul(&c));
            }
        }
        Ok(VlVector { terms: pruned(acc) })
    }

    fn guay_data(&self, g: GuayOp) -> Result<(GuayKind, SlotMatrix), VlError> {
        let r = self.r;
        let unit = |a: usize, b: usize| SlotMatrix::unit(r, a, b);
        let kind = |p: u8| if p == 0 { Ok(GuayKind::Z) } else if p == 1 { Ok(GuayKind::Q) } else { Err(VlError::Invalid(format!("current degree {p}"))) };
        let check = |i: usize| if (1..r).contains(&i) { Ok(()) } else { Err(VlError::Invalid(format!("i = {i} outside 1..{r}"))) };
        match g {
            GuayOp::XPlus { i, p } => {
                check(i)?;
                Ok((kind(p)?, unit(i, i + 1)))
            }
            GuayOp::XMinus { i, p } => {
                check(i)?;
                Ok((kind(p)?, unit(i + 1, i)))
            }
            GuayOp::H { i, p } => {
                check(i)?;
                Ok((kind(p)?, unit(i, i).sub(&unit(i + 1, i + 1))))
            }
            GuayOp::X00Plus => Ok((GuayKind::K, unit(r, 1))),
            GuayOp::X01Plus => Err(VlError::OutOfScope(g.to_string())),
        }
    }

    /// Guay's operator `ρ_l(g)` on `V_l`: `Σ_j m y_j^p ⊗ (E)_j v`, or
    /// `Σ_j m x_j ⊗ (E_{r1})_j v` for `X⁺_{0,0}`.
    pub fn act_guay_generator(&self, g: GuayOp, v: &VlVector) -> Result<VlVector, VlError> {
        let (kind, z) = self.guay_data(g)?;
        let w = self.lift(v);
        let mut acc = WVector::zero();
        for j in 0..self.l {
            let mut cur = self.slot_act(&z, j, &w)?;
            cur = match kind {
                GuayKind::Z => cur,
                GuayKind::Q => self.act_h_generator(&HOp::Y(j), &cur)?,
                GuayKind::K => self.act_h_generator(&HOp::X(j), &cur)?,
                GuayKind::P => unreachable!("not an ω₀-free generator"),
            };
            acc = acc.add(&cur);
        }
        Ok(self.canonicalize(&acc))
    }

    /// `ζ(g)` as a generator of Guay's DDCA.
    pub fn zeta(&self, g: GuayOp) -> Result<GuayGenerator, VlError> {
        let (kind, z) = self.guay_data(g)?;
        Ok(GuayGenerator::new(kind, z)?)
    }

    /// `Σ_π m(π) ⊗ π v / l!`, the average over simultaneous permutations of
    /// variables and tensor factors.
    pub fn symmetrize(&self, v: &VlVector) -> VlVector {
        let perms = Permutation::all(self.l);
        let inv = Rational::new(1, perms.len() as i64).unwrap();
        let mut acc = FxHashMap::default();
        for ((m, t), c) in &v.terms {
            for p in &perms {
                let mut x = vec![0u8; self.l];
                let mut y = vec![0u8; self.l];
                for i in 0..self.l {
                    x[p.apply(i)] = m.x(i);
                    y[p.apply(i)] = m.y(i);
                }
                let labels: Vec<_> = m.labels().collect();
                let nm = CherednikMonomial::new(&x, &labels, &Permutation::identity(self.l), &y);
                push(&mut acc, (nm, permute_tensor(p, t)), c.scale(&inv));
            }
        }
        VlVector { terms: pruned(acc) }
    }

    /// All `x^a y^b ⊗ e_v` with `|a| + |b| <= degree`.
    pub fn spanning_set(&self, degree: u32) -> Vec<VlVector> {
        let mut exps = Vec::new();
        let mut cur = vec![0u8; 2 * self.l];
        fn rec(pos: usize, left: u32, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            if pos == cur.len() {
                out.push(cur.clone());
                return;
            }
            for e in 0..=left {
                cur[pos] = e as u8;
                rec(pos + 1, left - e, cur, out);
            }
            cur[pos] = 0;
        }
        rec(0, degree, &mut cur, &mut exps);
        let tensors = tensor_indices(self.l, self.r);
        let mut out = Vec::new();
        for e in &exps {
            for t in &tensors {
                out.push(self.vl_basis(&e[..self.l], &e[self.l..], t).expect("valid basis vector"));
            }
        }
        out
    }
}

/// Checks `ρ_l(g) = τ_l(π_l(ψ(ζ(g))))` on every spanning vector of degree
/// at most `degree`, for each ω₀-free generator; `X⁺_{0,1}` is reported as
/// skipped.
pub fn verify_commuting_square(l: usize, r: usize, degree: u32) -> Result<Vec<VerificationReport>, VlError> {
    if l < 2 || r < 2 {
        return Err(VlError::Invalid("needs l >= 2 and r >= 2".into()));
    }
    let module = VlModule::new(l, r, degree + 1)?;
    let alg = SphericalAlgebra::symbolic(l, r)?;
    let vectors = module.spanning_set(degree);
    let mut gens = vec![GuayOp::X00Plus];
    for i in 1..r {
        for p in 0..2 {
            gens.extend([GuayOp::XPlus { i, p }, GuayOp::XMinus { i, p }, GuayOp::H { i, p }]);
        }
    }
    let mut out = Vec::new();
    for g in gens {
        let image = project_to_finite_rank(&psi_ddca(&module.zeta(g)?), &alg)?;
        let mut failure = None;
        for v in &vectors {
            let lhs = module.act_guay_generator(g, v)?;
            let rhs = module.act_spherical(&image, v)?;
            if lhs != rhs {
                failure = Some(format!("differs on {:?}", v.to_json()));
                break;
            }
        }
        let params = format!("gen={g} l={l} r={r} degree={degree} vectors={}", vectors.len());
        let mut rep = VerificationReport::new("commuting_square", params, failure.is_none());
        rep.note = failure;
        out.push(rep);
    }
    out.push(VerificationReport::skipped(
        "commuting_square",
        format!("gen={} l={l} r={r}", GuayOp::X01Plus),
        "requires ω₀, out of scope",
    ));
    Ok(out)
}

/// One relation: `Σ c·word = rhs` as operators on `W_l`.
struct Relation {
    family: &'static str,
    lhs: Vec<(ParamPoly, Vec<HOp>)>,
    rhs: CherednikElement<ParamPoly>,
}

fn commutator_words(a: HOp, b: HOp) -> Vec<(ParamPoly, Vec<HOp>)> {
    vec![(ParamPoly::one(), vec![a.clone(), b.clone()]), (ParamPoly::from_int(-1), vec![b, a])]
}

fn relations(module: &VlModule) -> Result<Vec<Relation>, VlError> {
    let (l, r) = (module.l, module.r);
    let h = &module.outer;
    let (t, k) = (ParamPoly::t(), ParamPoly::k());
    let mut out = Vec::new();
    let units: Vec<SlotMatrix> = (1..=r).flat_map(|a| (1..=r).map(move |b| SlotMatrix::unit(r, a, b))).collect();
    for i in 0..l {
        for j in 0..l {
            if i < j {
                out.push(Relation { family: "x_commute", lhs: commutator_words(HOp::X(i), HOp::X(j)), rhs: h.zero() });
                out.push(Relation { family: "y_commute", lhs: commutator_words(HOp::Y(i), HOp::Y(j)), rhs: h.zero() });
            }
            let rhs = if i == j {
                let mut acc = h.scalar(t.clone());
                for m in (0..l).filter(|&m| m != i) {
                    let s = h.mul(&h.transposition(i, m)?, &h.sigma(i, m)?)?;
                    acc = acc.sub(&s.mul_coeff(&k))?;
                }
                acc
            } else {
                h.mul(&h.transposition(i, j)?, &h.sigma(i, j)?)?.mul_coeff(&k)
            };
            out.push(Relation { family: "yx_commutator", lhs: commutator_words(HOp::Y(i), HOp::X(j)), rhs });
        }
    }
    for i in 0..l {
        out.push(Relation { family: "slot_unit", lhs: vec![(ParamPoly::one(), vec![HOp::Slot(SlotMatrix::identity(r), i)])], rhs: h.one() });
        for g in &units {
            out.push(Relation { family: "slot_xy_commute", lhs: commutator_words(HOp::Slot(g.clone(), i), HOp::X(i)), rhs: h.zero() });
            out.push(Relation { family: "slot_xy_commute", lhs: commutator_words(HOp::Slot(g.clone(), i), HOp::Y(i)), rhs: h.zero() });
            for g2 in &units {
                let prod = h.matrix(&g.mul(g2), i)?;
                out.push(Relation {
                    family: "slot_product",
                    lhs: vec![(ParamPoly::one(), vec![HOp::Slot(g.clone(), i), HOp::Slot(g2.clone(), i)])],
                    rhs: prod,
                });
                for j in (0..l).filter(|&j| j > i) {
                    out.push(Relation {
                        family: "slot_commute",
                        lhs: commutator_words(HOp::Slot(g.clone(), i), HOp::Slot(g2.clone(), j)),
                        rhs: h.zero(),
                    });
                }
            }
        }
    }
    for i in 0..l {
        for j in (i + 1)..l {
            let s = Permutation::transposition(l, i, j);
            out.push(Relation {
                family: "perm_square",
                lhs: vec![(ParamPoly::one(), vec![HOp::Perm(s.clone()), HOp::Perm(s.clone())])],
                rhs: h.one(),
            });
            for m in 0..l {
                let sm = s.apply(m);
                let conj = |op: HOp| vec![(ParamPoly::one(), vec![HOp::Perm(s.clone()), op, HOp::Perm(s.clone())])];
                out.push(Relation { family: "perm_conjugation", lhs: conj(HOp::X(m)), rhs: h.x(sm)? });
                out.push(Relation { family: "perm_conjugation", lhs: conj(HOp::Y(m)), rhs: h.y(sm)? });
                for g in &units {
                    out.push(Relation { family: "perm_conjugation", lhs: conj(HOp::Slot(g.clone(), m)), rhs: h.matrix(g, sm)? });
                }
            }
        }
    }
    if l >= 3 {
        let (a, b) = (Permutation::transposition(l, 0, 1), Permutation::transposition(l, 1, 2));
        let braid = |x: &Permutation, y: &Permutation| vec![HOp::Perm(x.clone()), HOp::Perm(y.clone()), HOp::Perm(x.clone())];
        out.push(Relation {
            family: "perm_braid",
            lhs: vec![(ParamPoly::one(), braid(&a, &b)), (ParamPoly::from_int(-1), braid(&b, &a))],
            rhs: h.zero(),
        });
    }
    Ok(out)
}

/// Checks the defining relations of `H_{t,k}(l, r)` as operators on the
/// spanning vectors of `W_l` of degree at most `degree`, one report per
/// relation family.
pub fn verify_relations(l: usize, r: usize, degree: u32) -> Result<Vec<VerificationReport>, VlError> {
    let module = VlModule::new(l, r, degree + 2)?;
    let vectors: Vec<WVector> = module.spanning_set(degree).iter().map(|v| module.lift(v)).collect();
    let mut families: Vec<(&'static str, usize, Option<String>)> = Vec::new();
    for rel in relations(&module)? {
        let pos = match families.iter().position(|f| f.0 == rel.family) {
            Some(p) => p,
            None => {
                families.push((rel.family, 0, None));
                families.len() - 1
            }
        };
        families[pos].1 += 1;
        if families[pos].2.is_some() {
            continue;
        }
        for w in &vectors {
            let mut lhs = WVector::zero();
            for (c, word) in &rel.lhs {
                lhs = lhs.add(&module.act_word(word, w)?.mul_coeff(c));
            }
            let rhs = module.act_h_element(&rel.rhs, w)?;
            if lhs != rhs {
                families[pos].2 = Some(format!("fails on {:?}", w.terms().first().map(|t| t.0)));
                break;
            }
        }
    }
    Ok(families
        .into_iter()
        .map(|(name, count, failure)| {
            let params = format!("l={l} r={r} degree={degree} instances={count} vectors={}", vectors.len());
            let mut rep = VerificationReport::new(format!("w_relation_{name}"), params, failure.is_none());
            rep.note = failure;
            rep
        })
        .collect())
}

/// All tensor indices `(v_1, .., v_l)` in `0..r`, first entry fastest.
pub fn tensor_indices(l: usize, r: usize) -> Vec<TensorIndex> {
    let mut v = vec![0u8; l];
    let mut out = Vec::new();
    loop {
        out.push(TensorIndex::from_slice(&v));
        let mut i = 0;
        while i < l && v[i] as usize + 1 == r {
            v[i] = 0;
            i += 1;
        }
        if i == l {
            break;
        }
        v[i] += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(r: usize, a: usize, b: usize) -> SlotMatrix {
        SlotMatrix::unit(r, a, b)
    }

    #[test]
    fn x_acts_on_the_right() {
        let m = VlModule::new(2, 2, 4).unwrap();
        let w = m.w_basis(&[0, 0], &[0, 0], &[0, 1]).unwrap();
        let got = m.act_h_generator(&HOp::X(0), &w).unwrap();
        assert_eq!(got, m.w_basis(&[1, 0], &[0, 0], &[0, 1]).unwrap());
    }

    #[test]
    fn transposition_acts_trivially_on_quotient() {
        let m = VlModule::new(2, 2, 4).unwrap();
        let w = m.w_basis(&[0, 0], &[0, 0], &[0, 1]).unwrap();
        let s = Permutation::transposition(2, 0, 1);
        let in_w = m.act_h_generator(&HOp::Perm(s.clone()), &w).unwrap();
        // s12 ⊗ e2e1 in W_l, which is 1 ⊗ e1e2 in V_l
        assert_eq!(in_w.terms().len(), 1);
        assert_eq!(in_w.terms()[0].0 .1.as_slice(), &[1, 0]);
        assert_eq!(m.canonicalize(&in_w), m.canonicalize(&w));
    }

    #[test]
    fn yx_commutator_on_w() {
        let m = VlModule::new(2, 2, 4).unwrap();
        let w = m.w_basis(&[1, 0], &[0, 1], &[0, 1]).unwrap();
        let lhs = m.act_word(&[HOp::Y(0), HOp::X(0)], &w).unwrap().sub(&m.act_word(&[HOp::X(0), HOp::Y(0)], &w).unwrap());
        let h = m.outer();
        let rel = h.scalar(ParamPoly::t()).sub(&h.mul(&h.transposition(0, 1).unwrap(), &h.sigma(0, 1).unwrap()).unwrap().mul_coeff(&ParamPoly::k())).unwrap();
        assert_eq!(lhs, m.act_h_element(&rel, &w).unwrap());
    }

    #[test]
    fn guay_examples() {
        let m = VlModule::new(2, 4, 3).unwrap();
        let v = m.vl_basis(&[0, 0], &[0, 0], &[0, 0]).unwrap();
        let got = m.act_guay_generator(GuayOp::X00Plus, &v).unwrap();
        let expect = m.vl_basis(&[1, 0], &[0, 0], &[3, 0]).unwrap().add(&m.vl_basis(&[0, 1], &[0, 0], &[0, 3]).unwrap());
        assert_eq!(got, expect);

        let v = m.vl_basis(&[0, 0], &[0, 0], &[0, 1]).unwrap();
        assert!(m.act_guay_generator(GuayOp::H { i: 1, p: 0 }, &v).unwrap().is_zero());

        let v = m.vl_basis(&[0, 0], &[0, 0], &[1, 1]).unwrap();
        let got = m.act_guay_generator(GuayOp::XPlus { i: 1, p: 1 }, &v).unwrap();
        let expect = m.vl_basis(&[0, 0], &[1, 0], &[0, 1]).unwrap().add(&m.vl_basis(&[0, 0], &[0, 1], &[1, 0]).unwrap());
        assert_eq!(got, expect);
        assert!(matches!(m.act_guay_generator(GuayOp::X01Plus, &v), Err(VlError::OutOfScope(_))));
    }

    #[test]
    fn spherical_examples() {
        let m = VlModule::new(2, 2, 3).unwrap();
        let b = SphericalAlgebra::symbolic(2, 2).unwrap();
        let v = m.symmetrize(&m.vl_basis(&[1, 0], &[0, 2], &[1, 0]).unwrap());
        assert_eq!(m.act_spherical(&b.unit(), &v).unwrap(), v);

        let v = m.symmetrize(&m.vl_basis(&[0, 0], &[0, 0], &[1, 1]).unwrap());
        let got = m.act_spherical(&b.t_gen(0, 0, &e(2, 1, 2)).unwrap(), &v).unwrap();
        let expect = m.symmetrize(&m.vl_basis(&[0, 0], &[0, 0], &[0, 1]).unwrap()).mul_coeff(&ParamPoly::from_int(2));
        assert_eq!(got, expect);

        // T_{1,0}(g) acts as Σ_j m x_j ⊗ (g)_j v
        let g = e(2, 2, 1);
        let v = m.vl_basis(&[0, 1], &[1, 0], &[0, 1]).unwrap();
        let got = m.act_spherical(&b.t_gen(1, 0, &g).unwrap(), &v).unwrap();
        let w = m.lift(&v);
        let mut expect = WVector::zero();
        for j in 0..2 {
            expect = expect.add(&m.act_word(&[HOp::X(j), HOp::Slot(g.clone(), j)], &w).unwrap());
        }
        assert_eq!(got, m.canonicalize(&expect));
    }

    #[test]
    fn spherical_action_is_multiplicative() {
        let m = VlModule::new(2, 2, 4).unwrap();
        let b = SphericalAlgebra::symbolic(2, 2).unwrap();
        let a = b.t_gen(1, 0, &e(2, 1, 2)).unwrap();
        let c = b.t_gen(0, 1, &e(2, 2, 1)).unwrap();
        let ac = b.mul(&a, &c).unwrap();
        for v in m.spanning_set(1) {
            let lhs = m.act_spherical(&ac, &v).unwrap();
            let rhs = m.act_spherical(&a, &m.act_spherical(&c, &v).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn truncation_is_reported() {
        let m = VlModule::new(2, 2, 1).unwrap();
        let w = m.w_basis(&[1, 0], &[0, 0], &[0, 0]).unwrap();
        assert_eq!(m.act_h_generator(&HOp::X(1), &w), Err(VlError::TruncationOverflow(1)));
    }

    #[test]
    fn small_suites() {
        assert!(verify_relations(2, 2, 1).unwrap().iter().all(|r| r.passed()));
        assert!(verify_commuting_square(2, 2, 1).unwrap().iter().all(|r| r.passed()));
    }
}
