//! Structure constants of the deformed double current algebra.
//!
//! `T(m1) T(m2) = Σ_m c_m(K) T(m)` is computed in `B_{t,k}(n, r)` at a sweep
//! of ranks, each coefficient is fitted as a polynomial in `K` and the fit
//! is checked at a further rank.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffring::{interpolate_in_k, CoeffError, ParamPoly, Rational};
use crate::spherical::{SphericalAlgebra, SphericalElement, SphericalError, TExpansion, TIndex};

pub const TABLE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InterpError {
    #[error(transparent)]
    Spherical(#[from] SphericalError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("fit validation failed at rank {rank}: {detail}")]
    FitValidationFailed { rank: usize, detail: String },
    #[error("invalid table: {0}")]
    InvalidTable(String),
}

/// How the finite-rank products are written in the `T_n(m)` basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExpansionMethod {
    /// Evaluation at rational `(t, k)` points and bivariate interpolation.
    #[default]
    Interpolated,
    /// Triangular reduction over `ℚ[t, k]`.
    Symbolic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FitMeta {
    pub sample_ranks: Vec<usize>,
    pub held_out_rank: usize,
    pub degree_bound_k: usize,
}

/// `T(m1) T(m2)` in the `T(m)` basis with coefficients in `ℚ[t, k, K]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstantTable {
    pub r: usize,
    pub m1: TIndex,
    pub m2: TIndex,
    pub entries: BTreeMap<TIndex, ParamPoly>,
    pub fit: FitMeta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TableJson {
    pub version: u32,
    pub r: usize,
    pub m1: TIndex,
    pub m2: TIndex,
    pub entries: Vec<(TIndex, ParamPoly)>,
    pub fit_meta: FitMeta,
}

impl StructureConstantTable {
    pub fn to_json(&self) -> TableJson {
        TableJson {
            version: TABLE_FORMAT_VERSION,
            r: self.r,
            m1: self.m1.clone(),
            m2: self.m2.clone(),
            entries: self.entries.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
            fit_meta: self.fit.clone(),
        }
    }

    pub fn from_json(j: TableJson) -> Result<Self, InterpError> {
        if j.version != TABLE_FORMAT_VERSION {
            return Err(InterpError::InvalidTable(format!("unsupported version {}", j.version)));
        }
        let mut entries = BTreeMap::new();
        for (k, v) in j.entries {
            if v.is_zero() || entries.insert(k, v).is_some() {
                return Err(InterpError::InvalidTable("zero or repeated entry".into()));
            }
        }
        Ok(StructureConstantTable { r: j.r, m1: j.m1, m2: j.m2, entries, fit: j.fit_meta })
    }

    /// Largest power of `K` over all entries.
    pub fn degree_in_k(&self) -> u32 {
        self.entries.values().map(ParamPoly::degree_big_k).max().unwrap_or(0)
    }
}

/// Every entry evaluated at `K = ν`.
pub fn specialize(table: &StructureConstantTable, nu: &Rational) -> TExpansion<ParamPoly> {
    specialize_expansion(&table.entries, nu)
}

fn specialize_expansion(e: &TExpansion<ParamPoly>, nu: &Rational) -> TExpansion<ParamPoly> {
    e.iter()
        .map(|(m, c)| (m.clone(), c.substitute(None, None, Some(nu))))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

/// `π_l`: `T(m) ↦ T_l(m)` and `K ↦ l`.
pub fn project_to_finite_rank(
    e: &TExpansion<ParamPoly>,
    alg: &SphericalAlgebra<ParamPoly>,
) -> Result<SphericalElement<ParamPoly>, InterpError> {
    let spec = specialize_expansion(e, &Rational::from_int(alg.n() as i64));
    Ok(alg.from_expansion(&spec)?)
}

/// Computes and memoises structure-constant tables at a fixed `r`.
pub struct StructureConstants {
    r: usize,
    method: ExpansionMethod,
    ranks: Mutex<BTreeMap<usize, Arc<SphericalAlgebra<ParamPoly>>>>,
    tables: Mutex<BTreeMap<(TIndex, TIndex), Arc<StructureConstantTable>>>,
}

impl StructureConstants {
    pub fn new(r: usize) -> Self {
        Self::with_method(r, ExpansionMethod::default())
    }

    pub fn with_method(r: usize, method: ExpansionMethod) -> Self {
        StructureConstants { r, method, ranks: Mutex::new(BTreeMap::new()), tables: Mutex::new(BTreeMap::new()) }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// The shared `B_{t,k}(n, r)`.
    pub fn algebra(&self, n: usize) -> Result<Arc<SphericalAlgebra<ParamPoly>>, InterpError> {
        if let Some(a) = self.ranks.lock().expect("rank lock").get(&n) {
            return Ok(a.clone());
        }
        let a = Arc::new(SphericalAlgebra::symbolic(n, self.r)?);
        Ok(self.ranks.lock().expect("rank lock").entry(n).or_insert(a).clone())
    }

    fn check_index(&self, m: &TIndex) -> Result<(), InterpError> {
        if m.max_label_index() > self.r {
            return Err(InterpError::InvalidTable(format!("{m:?} uses labels outside r = {}", self.r)));
        }
        Ok(())
    }

    /// `T_n(m1) T_n(m2)` in the `T_n(m)` basis at one rank.
    pub fn finite_rank_product(&self, m1: &TIndex, m2: &TIndex, n: usize) -> Result<TExpansion<ParamPoly>, InterpError> {
        self.check_index(m1)?;
        self.check_index(m2)?;
        let alg = self.algebra(n)?;
        Ok(match self.method {
            ExpansionMethod::Interpolated => alg.expand_product(m1, m2)?,
            ExpansionMethod::Symbolic => {
                let prod = alg.mul(&alg.t_basis(m1)?, &alg.t_basis(m2)?)?;
                alg.expand_symbolic(&prod)?
            }
        })
    }

    /// Sample ranks `n0 ..= n0 + D` and the held-out rank.
    pub fn fit_ranks(m1: &TIndex, m2: &TIndex) -> FitMeta {
        let d = m1.size() + m2.size();
        let n0 = (2 * (m1.weight() + m2.weight()) as usize + 2).max(d);
        FitMeta { sample_ranks: (n0..=n0 + d).collect(), held_out_rank: n0 + d + 1, degree_bound_k: d }
    }

    pub fn table(&self, m1: &TIndex, m2: &TIndex) -> Result<Arc<StructureConstantTable>, InterpError> {
        let key = (m1.clone(), m2.clone());
        if let Some(t) = self.tables.lock().expect("table lock").get(&key) {
            return Ok(t.clone());
        }
        let t = Arc::new(self.compute_table(m1, m2)?);
        Ok(self.tables.lock().expect("table lock").entry(key).or_insert(t).clone())
    }

    fn compute_table(&self, m1: &TIndex, m2: &TIndex) -> Result<StructureConstantTable, InterpError> {
        let fit = Self::fit_ranks(m1, m2);
        let mut ranks = fit.sample_ranks.clone();
        ranks.push(fit.held_out_rank);
        let data: Vec<TExpansion<ParamPoly>> =
            ranks.par_iter().map(|&n| self.finite_rank_product(m1, m2, n)).collect::<Result<_, _>>()?;
        let (samples, held_out) = data.split_at(fit.sample_ranks.len());

        let mut keys: Vec<&TIndex> = samples.iter().flat_map(|s| s.keys()).collect();
        keys.sort();
        keys.dedup();
        let mut entries = BTreeMap::new();
        for m in keys {
            let pts: Vec<(Rational, ParamPoly)> = fit
                .sample_ranks
                .iter()
                .zip(samples)
                .map(|(&n, s)| (Rational::from_int(n as i64), s.get(m).cloned().unwrap_or_else(ParamPoly::zero)))
                .collect();
            let poly = interpolate_in_k(&pts, fit.degree_bound_k)?;
            if !poly.is_zero() {
                entries.insert(m.clone(), poly);
            }
        }
        let table = StructureConstantTable { r: self.r, m1: m1.clone(), m2: m2.clone(), entries, fit };
        compare_at_rank(&table, &held_out[0], table.fit.held_out_rank)?;
        Ok(table)
    }

    /// Recomputes the product at rank `n` and compares it with the table at
    /// `K = n`.
    pub fn validate_at_rank(&self, table: &StructureConstantTable, n: usize) -> Result<(), InterpError> {
        let direct = self.finite_rank_product(&table.m1, &table.m2, n)?;
        compare_at_rank(table, &direct, n)
    }

    /// Product of two DDCA elements given in the `T(m)` basis, formed from
    /// tables.
    pub fn multiply(&self, a: &TExpansion<ParamPoly>, b: &TExpansion<ParamPoly>) -> Result<TExpansion<ParamPoly>, InterpError> {
        let mut out: TExpansion<ParamPoly> = TExpansion::new();
        for (m1, c1) in a {
            for (m2, c2) in b {
                let c = c1.mul(c2);
                for (m, e) in &self.table(m1, m2)?.entries {
                    let slot = out.entry(m.clone()).or_insert_with(ParamPoly::zero);
                    *slot = slot.add(&c.mul(e));
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }
}

fn compare_at_rank(table: &StructureConstantTable, direct: &TExpansion<ParamPoly>, n: usize) -> Result<(), InterpError> {
    let fitted = specialize(table, &Rational::from_int(n as i64));
    if &fitted != direct {
        let detail = format!("fitted {} entries, direct {} entries", fitted.len(), direct.len());
        return Err(InterpError::FitValidationFailed { rank: n, detail });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cherednik::MatrixBasisLabel;
    use crate::spherical::TGen;

    fn g(p: u8, q: u8, a: usize, b: usize) -> TGen {
        TGen::new(p, q, MatrixBasisLabel::unit(2, a, b).unwrap())
    }

    fn idx(gens: &[TGen]) -> TIndex {
        TIndex::new(gens.iter().copied()).unwrap()
    }

    #[test]
    fn unit_table() {
        let sc = StructureConstants::new(2);
        let t = sc.table(&TIndex::empty(), &TIndex::empty()).unwrap();
        assert_eq!(t.entries.clone().into_iter().collect::<Vec<_>>(), vec![(TIndex::empty(), ParamPoly::one())]);
        assert_eq!(specialize(&t, &Rational::from_int(9)), t.entries);
    }

    #[test]
    fn raising_lowering_table() {
        let sc = StructureConstants::new(2);
        let (a, b) = (idx(&[g(0, 0, 1, 2)]), idx(&[g(0, 0, 2, 1)]));
        let t = sc.table(&a, &b).unwrap();
        let mut expect = BTreeMap::new();
        expect.insert(idx(&[g(0, 0, 1, 2), g(0, 0, 2, 1)]), ParamPoly::one());
        expect.insert(idx(&[g(0, 0, 1, 1)]), ParamPoly::one());
        expect.insert(TIndex::empty(), ParamPoly::big_k().scale(&Rational::new(-1, 2).unwrap()));
        assert_eq!(t.entries, expect);
        let six = specialize(&t, &Rational::from_int(6));
        assert_eq!(six[&TIndex::empty()], ParamPoly::from_int(-3));
        assert_eq!(six, sc.finite_rank_product(&a, &b, 6).unwrap());
    }

    #[test]
    fn commuting_square() {
        let sc = StructureConstants::new(2);
        let a = idx(&[g(1, 0, 1, 2)]);
        let t = sc.table(&a, &a).unwrap();
        assert_eq!(t.entries.clone().into_iter().collect::<Vec<_>>(), vec![(a.union(&a), ParamPoly::one())]);
    }

    #[test]
    fn json_roundtrip() {
        let sc = StructureConstants::new(2);
        let t = sc.table(&idx(&[g(0, 1, 1, 2)]), &idx(&[g(1, 0, 2, 1)])).unwrap();
        let js = serde_json::to_string(&t.to_json()).unwrap();
        let back = StructureConstantTable::from_json(serde_json::from_str(&js).unwrap()).unwrap();
        assert_eq!(&back, &*t);
    }

    #[test]
    fn projection() {
        let sc = StructureConstants::new(2);
        let alg = sc.algebra(5).unwrap();
        let mut e = TExpansion::new();
        e.insert(TIndex::empty(), ParamPoly::big_k());
        assert_eq!(project_to_finite_rank(&e, &alg).unwrap(), alg.unit().scale(&Rational::from_int(5)));
        let a = idx(&[g(1, 0, 1, 2)]);
        let mut e = TExpansion::new();
        e.insert(a.clone(), ParamPoly::one());
        let expect = alg.t_gen(1, 0, &crate::cherednik::SlotMatrix::unit(2, 1, 2)).unwrap();
        assert_eq!(project_to_finite_rank(&e, &alg).unwrap(), expect);
    }

    #[test]
    fn symbolic_method_agrees() {
        let (a, b) = (idx(&[g(1, 1, 1, 2)]), idx(&[g(0, 1, 2, 1)]));
        let fast = StructureConstants::new(2).table(&a, &b).unwrap();
        let slow = StructureConstants::with_method(2, ExpansionMethod::Symbolic).table(&a, &b).unwrap();
        assert_eq!(fast, slow);
        assert!(fast.entries.values().any(|c| c.degree_big_k() > 0 && c.degree_tk() > 0));
    }
}
