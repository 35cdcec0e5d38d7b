//! Guay's deformed double current algebra mapped into `B_{t,k}(n, r)`.
//!
//! `ψ(z) = T_{0,0}(z)`, `ψ(K(z)) = T_{1,0}(z)`, `ψ(Q(z)) = T_{0,1}(z)`,
//! `ψ(P(z)) = T_{1,1}(z)` with `λ = k` and `β = -t/2 - k(r-2)/4`.

use serde::{Deserialize, Serialize};

use crate::cherednik::{AlgebraError, SlotMatrix};
use crate::coeffring::{interpolate_in_k, CoeffError, ParamMono, ParamPoly, Rational};
use crate::report::VerificationReport;
use crate::spherical::{SphericalAlgebra, SphericalElement, SphericalError, TExpansion, TGen, TIndex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GuayError {
    #[error("matrix is not traceless")]
    NonTraceless,
    #[error("index constraint violated: {0}")]
    IndexConstraintViolated(String),
    #[error(transparent)]
    Spherical(#[from] SphericalError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

impl From<AlgebraError> for GuayError {
    fn from(e: AlgebraError) -> Self {
        GuayError::Spherical(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GuayKind {
    Z,
    K,
    Q,
    P,
}

impl GuayKind {
    /// `(p, q)` of the image `T_{p,q}`.
    pub fn degrees(self) -> (u8, u8) {
        match self {
            GuayKind::Z => (0, 0),
            GuayKind::K => (1, 0),
            GuayKind::Q => (0, 1),
            GuayKind::P => (1, 1),
        }
    }
}

/// One of `z, K(z), Q(z), P(z)` with `z ∈ sl_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct GuayGenerator {
    kind: GuayKind,
    z: SlotMatrix,
}

impl GuayGenerator {
    pub fn new(kind: GuayKind, z: SlotMatrix) -> Result<Self, GuayError> {
        if !z.trace().is_zero() {
            return Err(GuayError::NonTraceless);
        }
        Ok(GuayGenerator { kind, z })
    }

    pub fn kind(&self) -> GuayKind {
        self.kind
    }

    pub fn matrix(&self) -> &SlotMatrix {
        &self.z
    }
}

/// `λ = k`.
pub fn lambda() -> ParamPoly {
    ParamPoly::k()
}

/// `β = -t/2 - k(r-2)/4`.
pub fn beta(r: usize) -> ParamPoly {
    let half = Rational::new(-1, 2).unwrap();
    ParamPoly::t().scale(&half).sub(&ParamPoly::k().scale(&Rational::new(r as i64 - 2, 4).unwrap()))
}

pub fn psi(alg: &SphericalAlgebra<ParamPoly>, g: &GuayGenerator) -> Result<SphericalElement<ParamPoly>, GuayError> {
    let (p, q) = g.kind.degrees();
    Ok(alg.t_gen(p, q, &g.z)?)
}

/// `ψ(g)` as an element of the DDCA in the `T(m)` basis; `T_{0,0}(Id)` is `K`.
pub fn psi_ddca(g: &GuayGenerator) -> TExpansion<ParamPoly> {
    let (p, q) = g.kind.degrees();
    let mut out = TExpansion::new();
    for (label, c) in g.z.decompose() {
        let gen = TGen::new(p, q, label);
        let (key, coeff) = if gen.is_inactive() {
            (TIndex::empty(), ParamPoly::big_k().scale(&c))
        } else {
            (TIndex::single(gen).expect("active generator"), ParamPoly::constant(c))
        };
        let slot = out.entry(key).or_insert_with(ParamPoly::zero);
        *slot = slot.add(&coeff);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Which matrix the `δ_ad` term of the main relation carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DeltaTerm {
    /// `δ_bc E_ad + δ_ad E_cb`.
    #[default]
    Ecb,
    /// `δ_bc E_ad + δ_ad E_bc`.
    Ebc,
}

fn unit(r: usize, a: usize, b: usize) -> SlotMatrix {
    SlotMatrix::unit(r, a, b)
}

fn t00(alg: &SphericalAlgebra<ParamPoly>, z: &SlotMatrix) -> Result<SphericalElement<ParamPoly>, GuayError> {
    Ok(alg.t_gen(0, 0, z)?)
}

/// `ψ(S(z1, z2)) = T(z1)T(z2) + T(z2)T(z1)`.
fn sym_product(alg: &SphericalAlgebra<ParamPoly>, z1: &SlotMatrix, z2: &SlotMatrix) -> Result<SphericalElement<ParamPoly>, GuayError> {
    let (a, b) = (t00(alg, z1)?, t00(alg, z2)?);
    Ok(alg.mul(&a, &b)?.add(&alg.mul(&b, &a)?)?)
}

fn delta(i: usize, j: usize) -> bool {
    i == j
}

/// Checks `[K(E_ab), Q(E_cd)]` against the right-hand side of Guay's relation
/// under `ψ`. Indices are one-based.
pub fn verify_main_relation(
    alg: &SphericalAlgebra<ParamPoly>,
    (a, b, c, d): (usize, usize, usize, usize),
    variant: DeltaTerm,
) -> Result<Vec<VerificationReport>, GuayError> {
    let r = alg.r();
    if [a, b, c, d].iter().any(|&i| i == 0 || i > r) {
        return Err(GuayError::IndexConstraintViolated(format!("indices must lie in 1..={r}")));
    }
    if a == b || c == d || (a, b) == (d, c) {
        return Err(GuayError::IndexConstraintViolated(format!("({a},{b},{c},{d}) needs a != b, c != d, (a,b) != (d,c)")));
    }
    let params = format!("a={a} b={b} c={c} d={d} n={} r={r} variant={variant:?}", alg.n());
    let (eab, ecd) = (unit(r, a, b), unit(r, c, d));
    let lhs = alg.commutator(&alg.t_gen(1, 0, &eab)?, &alg.t_gen(0, 1, &ecd)?)?;

    let lam = lambda();
    let quarter = Rational::new(1, 4).unwrap();
    let mut rhs = alg.t_gen(1, 1, &eab.commutator(&ecd))?;

    let mut dz = SlotMatrix::zero(r);
    if delta(b, c) {
        dz = dz.add(&unit(r, a, d));
    }
    if delta(a, d) {
        dz = dz.add(&match variant {
            DeltaTerm::Ecb => unit(r, c, b),
            DeltaTerm::Ebc => unit(r, b, c),
        });
    }
    let coeff = beta(r).sub(&lam.scale(&Rational::new(1, 2).unwrap()));
    rhs = rhs.add(&t00(alg, &dz)?.mul_coeff(&coeff))?;

    // the diagonal i = j terms carry (δ_ad + δ_cb - δ_bd - δ_ac) S(E_ab, E_cd)
    let mut sum = alg.zero();
    for i in 1..=r {
        for j in 1..=r {
            let z1 = eab.commutator(&unit(r, i, j));
            let z2 = unit(r, j, i).commutator(&ecd);
            if z1.is_zero() || z2.is_zero() {
                continue;
            }
            sum = sum.add(&sym_product(alg, &z1, &z2)?)?;
        }
    }
    rhs = rhs.add(&sum.mul_coeff(&lam.scale(&quarter)))?;

    let diff = lhs.sub(&rhs)?;
    let mut main = VerificationReport::new("guay_main_relation", params.clone(), diff.is_zero());
    main.lhs = Some(lhs.to_json());
    main.rhs = Some(rhs.to_json());
    if !diff.is_zero() {
        main.difference = Some(diff.to_json());
    }
    let mut out = vec![main];

    if !delta(b, c) && !delta(a, d) {
        // both sides reduce to -λ E_ad E_cb
        let short = alg.mul(&t00(alg, &unit(r, a, d))?, &t00(alg, &unit(r, c, b))?)?.mul_coeff(&lam.neg());
        let d2 = lhs.sub(&short)?;
        let mut rep = VerificationReport::new("guay_disjoint_form", params, d2.is_zero() && rhs == short);
        if !d2.is_zero() {
            rep.difference = Some(d2.to_json());
        }
        out.push(rep);
    }
    Ok(out)
}

/// Every admissible `(a, b, c, d)` in `1..=r`.
pub fn admissible_indices(r: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut v = Vec::new();
    for a in 1..=r {
        for b in 1..=r {
            for c in 1..=r {
                for d in 1..=r {
                    if a != b && c != d && (a, b) != (d, c) {
                        v.push((a, b, c, d));
                    }
                }
            }
        }
    }
    v
}

/// `[T_{1,0}(z1), T_{1,0}(z2)] = T_{2,0}([z1, z2])` and
/// `[T_{0,0}(z1), T_{0,0}(z2)] = T_{0,0}([z1, z2])`.
pub fn verify_sl_current(
    alg: &SphericalAlgebra<ParamPoly>,
    z1: &SlotMatrix,
    z2: &SlotMatrix,
) -> Result<Vec<VerificationReport>, GuayError> {
    if !z1.trace().is_zero() || !z2.trace().is_zero() {
        return Err(GuayError::NonTraceless);
    }
    let params = format!("n={} r={} z1={:?} z2={:?}", alg.n(), alg.r(), z1.rows(), z2.rows());
    let br = z1.commutator(z2);
    let mut out = Vec::new();
    for (name, p, q) in [("sl_current_x", 1u8, 2u8), ("sl_current_const", 0, 0)] {
        let lhs = alg.commutator(&alg.t_gen(p, 0, z1)?, &alg.t_gen(p, 0, z2)?)?;
        let rhs = alg.t_gen(q, 0, &br)?;
        let diff = lhs.sub(&rhs)?;
        let mut rep = VerificationReport::new(name, params.clone(), diff.is_zero());
        if !diff.is_zero() {
            rep.difference = Some(diff.to_json());
        }
        out.push(rep);
    }
    Ok(out)
}

fn h_matrix(r: usize) -> SlotMatrix {
    unit(r, 1, 1).sub(&unit(r, 2, 2))
}

/// `[T_{1,0}(H), T_{0,1}(H)]` for `H = E_11 - E_22`.
fn kq_commutator(alg: &SphericalAlgebra<ParamPoly>) -> Result<SphericalElement<ParamPoly>, GuayError> {
    let h = h_matrix(alg.r());
    Ok(alg.commutator(&alg.t_gen(1, 0, &h)?, &alg.t_gen(0, 1, &h)?)?)
}

/// `T(E12)T(E21) + T(E21)T(E12) + Σ_{α≠1} T(E1α)T(Eα1) + Σ_{α≠2} T(E2α)T(Eα2)`.
fn quadratic_part(alg: &SphericalAlgebra<ParamPoly>) -> Result<SphericalElement<ParamPoly>, GuayError> {
    let r = alg.r();
    let prod = |x: (usize, usize), y: (usize, usize)| -> Result<SphericalElement<ParamPoly>, GuayError> {
        Ok(alg.mul(&t00(alg, &unit(r, x.0, x.1))?, &t00(alg, &unit(r, y.0, y.1))?)?)
    };
    let mut acc = prod((1, 2), (2, 1))?.add(&prod((2, 1), (1, 2))?)?;
    for (base, skip) in [(1, 1), (2, 2)] {
        for alpha in (1..=r).filter(|&a| a != skip) {
            acc = acc.add(&prod((base, alpha), (alpha, base))?)?;
        }
    }
    Ok(acc)
}

/// The two exact forms of `[ψ(K(H)), ψ(Q(H))]`.
pub fn verify_k_extraction(alg: &SphericalAlgebra<ParamPoly>) -> Result<Vec<VerificationReport>, GuayError> {
    let (n, r) = (alg.n(), alg.r());
    if n < 2 || r < 2 {
        return Err(GuayError::IndexConstraintViolated("needs n >= 2 and r >= 2".into()));
    }
    let params = format!("n={n} r={r}");
    let lhs = kq_commutator(alg)?;
    let h = alg.cherednik();
    let hm = h_matrix(r);
    let h2 = hm.mul(&hm);
    let (t, k) = (ParamPoly::t(), ParamPoly::k());

    // -k Σ_{i≠j} (H)_i (H)_j σ_ij - t Σ_i (H²)_i + k Σ_{i≠j} (H²)_i σ_ij
    let mut x = h.zero();
    for i in 0..n {
        x = x.sub(&h.matrix(&h2, i)?.mul_coeff(&t))?;
        for j in (0..n).filter(|&j| j != i) {
            let sigma = h.sigma(i, j)?;
            let hh = h.mul(&h.matrix(&hm, i)?, &h.matrix(&hm, j)?)?;
            x = x.sub(&h.mul(&hh, &sigma)?.mul_coeff(&k))?;
            x = x.add(&h.mul(&h.matrix(&h2, i)?, &sigma)?.mul_coeff(&k))?;
        }
    }
    let rhs1 = alg.from_invariant(&x)?;
    let d1 = lhs.sub(&rhs1)?;
    let mut first = VerificationReport::new("k_extraction_expansion", params.clone(), d1.is_zero());
    if !d1.is_zero() {
        first.difference = Some(d1.to_json());
    }

    let rest = lhs.sub(&quadratic_part(alg)?.mul_coeff(&k))?;
    let rhs2 = t00(alg, &h2)?.mul_coeff(&trace_factor(r).neg());
    let d2 = rest.sub(&rhs2)?;
    let mut second = VerificationReport::new("k_extraction_reduced", params, d2.is_zero());
    if !d2.is_zero() {
        second.difference = Some(d2.to_json());
    }
    Ok(vec![first, second])
}

/// `t + rk`.
fn trace_factor(r: usize) -> ParamPoly {
    ParamPoly::t().add(&ParamPoly::k().scale(&Rational::from_int(r as i64)))
}

/// Result of fitting the identity-slot part of `[ψ(K(H)), ψ(Q(H))] - k·(quadratic part)`
/// as a polynomial in `K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct KExtractionFit {
    pub r: usize,
    pub ranks: Vec<usize>,
    /// The fitted coefficient of `e` in the trace part, as a polynomial in `K`.
    pub trace_term: ParamPoly,
    /// Coefficient of `K` in `trace_term`.
    pub kappa: ParamPoly,
    /// `r · kappa`.
    pub r_kappa: ParamPoly,
}

/// The `Σ_i (M)_i` form of an element supported on single-site degree-zero
/// orbits and the unit.
fn slot_matrix_of(x: &SphericalElement<ParamPoly>) -> Option<Vec<Vec<ParamPoly>>> {
    let (n, r) = (x.n(), x.r());
    let mut m = vec![vec![ParamPoly::zero(); r]; r];
    for (key, c) in x.terms() {
        if key.is_empty() {
            // c e = Σ_i (c/n · Id)_i e
            let share = c.scale(&Rational::new(1, n as i64).unwrap());
            for (a, row) in m.iter_mut().enumerate() {
                row[a] = row[a].add(&share);
            }
            continue;
        }
        if key.size() != 1 || key.weight() != 0 {
            return None;
        }
        let g = key.gens()[0];
        let lm = g.label.to_matrix(r);
        for (a, row) in m.iter_mut().enumerate() {
            for (b, entry) in row.iter_mut().enumerate() {
                if !lm.get(a + 1, b + 1).is_zero() {
                    *entry = entry.add(&c.scale(lm.get(a + 1, b + 1)));
                }
            }
        }
    }
    Some(m)
}

/// Fits the coefficient of `e` in the trace part of
/// `[ψ(K(H)), ψ(Q(H))] - k·(quadratic part)` across `ranks`.
pub fn fit_k_extraction(r: usize, ranks: &[usize]) -> Result<KExtractionFit, GuayError> {
    let mut samples = Vec::new();
    for &n in ranks {
        let alg = SphericalAlgebra::symbolic(n, r)?;
        let rest = kq_commutator(&alg)?.sub(&quadratic_part(&alg)?.mul_coeff(&ParamPoly::k()))?;
        let m = slot_matrix_of(&rest).ok_or_else(|| GuayError::IndexConstraintViolated("unexpected orbit support".into()))?;
        let trace = m.iter().enumerate().fold(ParamPoly::zero(), |acc, (a, row)| acc.add(&row[a]));
        let tau = trace.scale(&Rational::new(n as i64, r as i64).unwrap());
        samples.push((Rational::from_int(n as i64), tau));
    }
    let trace_term = interpolate_in_k(&samples, 1)?;
    let kappa = trace_term.big_k_coefficient(1);
    let r_kappa = kappa.scale(&Rational::from_int(r as i64));
    Ok(KExtractionFit { r, ranks: ranks.to_vec(), trace_term, kappa, r_kappa })
}

impl KExtractionFit {
    /// `trace_term == -2(t + rk)/r · K`.
    pub fn matches_expected(&self) -> bool {
        let expected = trace_factor(self.r).scale(&Rational::new(-2, self.r as i64).unwrap());
        self.kappa == expected
            && self.trace_term == expected.mul(&ParamPoly::monomial(ParamMono::new(0, 0, 1), Rational::one()))
    }
}
