use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use super::AlgebraError;
use crate::coeffring::Rational;

/// Basis label for one tensor slot of `End(k^r)^{⊗n}`.
///
/// The basis is the identity together with every matrix unit `E_αβ` except
/// `E_rr`, which is rewritten as `Id - Σ_{α<r} E_αα`. The byte encoding is
/// `0` for the identity and `(α << 4) | β` (one-based) otherwise.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixBasisLabel(u8);

pub const MAX_R: usize = 15;

impl MatrixBasisLabel {
    pub const IDENTITY: MatrixBasisLabel = MatrixBasisLabel(0);

    /// `E_αβ` with one-based indices; `E_rr` is rejected.
    pub fn unit(r: usize, alpha: usize, beta: usize) -> Result<Self, AlgebraError> {
        if r == 0 || r > MAX_R || alpha == 0 || beta == 0 || alpha > r || beta > r || (alpha == r && beta == r) {
            return Err(AlgebraError::InvalidLabel(format!("E_{alpha}{beta} is not a basis label for r = {r}")));
        }
        Ok(MatrixBasisLabel(((alpha as u8) << 4) | beta as u8))
    }

    pub(crate) fn from_byte(b: u8) -> Self {
        MatrixBasisLabel(b)
    }

    pub(crate) fn byte(self) -> u8 {
        self.0
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }

    /// One-based `(α, β)` for a matrix unit, `None` for the identity.
    pub fn indices(self) -> Option<(usize, usize)> {
        (self.0 != 0).then(|| ((self.0 >> 4) as usize, (self.0 & 15) as usize))
    }

    pub fn is_valid_for(self, r: usize) -> bool {
        match self.indices() {
            None => true,
            Some((a, b)) => a >= 1 && b >= 1 && a <= r && b <= r && !(a == r && b == r),
        }
    }

    pub fn to_matrix(self, r: usize) -> SlotMatrix {
        match self.indices() {
            None => SlotMatrix::identity(r),
            Some((a, b)) => SlotMatrix::unit(r, a, b),
        }
    }

    /// All basis labels for `End(k^r)`, identity first.
    pub fn all(r: usize) -> Vec<MatrixBasisLabel> {
        let mut v = vec![MatrixBasisLabel::IDENTITY];
        for a in 1..=r {
            for b in 1..=r {
                if !(a == r && b == r) {
                    v.push(MatrixBasisLabel(((a as u8) << 4) | b as u8));
                }
            }
        }
        v
    }
}

impl fmt::Display for MatrixBasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.indices() {
            None => write!(f, "id"),
            Some((a, b)) => write!(f, "[{a},{b}]"),
        }
    }
}

impl fmt::Debug for MatrixBasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.indices() {
            None => write!(f, "Id"),
            Some((a, b)) => write!(f, "E{a}{b}"),
        }
    }
}

/// JSON form: the string `"id"` or the pair `[α, β]`.
impl Serialize for MatrixBasisLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.indices() {
            None => s.serialize_str("id"),
            Some((a, b)) => [a, b].serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for MatrixBasisLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Name(String),
            Pair([usize; 2]),
        }
        match Raw::deserialize(d)? {
            Raw::Name(s) if s == "id" => Ok(MatrixBasisLabel::IDENTITY),
            Raw::Name(s) => {
                let inner = s.trim().strip_prefix('[').and_then(|x| x.strip_suffix(']'));
                let parsed = inner.and_then(|x| {
                    let (a, b) = x.split_once(',')?;
                    Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?))
                });
                match parsed {
                    Some((a, b)) => MatrixBasisLabel::unit(MAX_R, a, b).map_err(serde::de::Error::custom),
                    None => Err(serde::de::Error::custom(format!("invalid slot label `{s}`"))),
                }
            }
            Raw::Pair([a, b]) => MatrixBasisLabel::unit(MAX_R, a, b).map_err(serde::de::Error::custom),
        }
    }
}

/// Dense `r × r` matrix with rational entries.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SlotMatrix {
    r: usize,
    e: Vec<Rational>,
}

impl SlotMatrix {
    pub fn zero(r: usize) -> Self {
        SlotMatrix { r, e: vec![Rational::zero(); r * r] }
    }

    pub fn identity(r: usize) -> Self {
        let mut m = Self::zero(r);
        for i in 0..r {
            m.e[i * r + i] = Rational::one();
        }
        m
    }

    /// Matrix unit `E_αβ` with one-based indices.
    pub fn unit(r: usize, alpha: usize, beta: usize) -> Self {
        let mut m = Self::zero(r);
        m.e[(alpha - 1) * r + (beta - 1)] = Rational::one();
        m
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self, AlgebraError> {
        let r = rows.len();
        if r == 0 || r > MAX_R || rows.iter().any(|row| row.len() != r) {
            return Err(AlgebraError::InvalidLabel("matrix must be square with 1 <= r <= 15".into()));
        }
        Ok(SlotMatrix { r, e: rows.iter().flatten().cloned().collect() })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Entry at one-based `(α, β)`.
    pub fn get(&self, alpha: usize, beta: usize) -> &Rational {
        &self.e[(alpha - 1) * self.r + (beta - 1)]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.e.chunks(self.r).map(|c| c.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(Rational::is_zero)
    }

    pub fn trace(&self) -> Rational {
        let mut t = Rational::zero();
        for i in 0..self.r {
            t += &self.e[i * self.r + i];
        }
        t
    }

    pub fn add(&self, o: &Self) -> Self {
        SlotMatrix { r: self.r, e: self.e.iter().zip(&o.e).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        SlotMatrix { r: self.r, e: self.e.iter().zip(&o.e).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        SlotMatrix { r: self.r, e: self.e.iter().map(|a| a * q).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let r = self.r;
        let mut out = Self::zero(r);
        for i in 0..r {
            for l in 0..r {
                let a = &self.e[i * r + l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..r {
                    let b = &o.e[l * r + j];
                    if !b.is_zero() {
                        out.e[i * r + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// Coordinates in the slot basis of [`MatrixBasisLabel`].
    pub fn decompose(&self) -> Vec<(MatrixBasisLabel, Rational)> {
        let r = self.r;
        let rr = &self.e[r * r - 1];
        let mut out = Vec::new();
        if !rr.is_zero() {
            out.push((MatrixBasisLabel::IDENTITY, rr.clone()));
        }
        for a in 1..=r {
            for b in 1..=r {
                if a == r && b == r {
                    continue;
                }
                let mut c = self.e[(a - 1) * r + (b - 1)].clone();
                if a == b {
                    c -= rr;
                }
                if !c.is_zero() {
                    out.push((MatrixBasisLabel(((a as u8) << 4) | b as u8), c));
                }
            }
        }
        out
    }
}

type Combo = SmallVec<[(MatrixBasisLabel, i64); 2]>;
type PairCombo = SmallVec<[(MatrixBasisLabel, MatrixBasisLabel, i64); 4]>;

/// Multiplication tables of the slot basis for a fixed `r`.
#[derive(Debug)]
pub struct SlotAlgebra {
    r: usize,
    dense: [u8; 256],
    count: usize,
    mul: Vec<Combo>,
    sigma: Vec<PairCombo>,
}

fn int_decompose(m: &SlotMatrix) -> Vec<(MatrixBasisLabel, i64)> {
    m.decompose()
        .into_iter()
        .map(|(l, c)| (l, c.to_i64().expect("integral slot structure constant")))
        .collect()
}

impl SlotAlgebra {
    pub fn new(r: usize) -> Result<Self, AlgebraError> {
        if r == 0 || r > MAX_R {
            return Err(AlgebraError::InvalidLabel(format!("r = {r} is out of range 1..=15")));
        }
        let labels = MatrixBasisLabel::all(r);
        let mut dense = [u8::MAX; 256];
        for (i, l) in labels.iter().enumerate() {
            dense[l.0 as usize] = i as u8;
        }
        let count = labels.len();
        let mats: Vec<SlotMatrix> = labels.iter().map(|l| l.to_matrix(r)).collect();
        let mut mul = Vec::with_capacity(count * count);
        for a in &mats {
            for b in &mats {
                mul.push(int_decompose(&a.mul(b)).into_iter().collect());
            }
        }
        // σ_ij (A)_i (B)_j = Σ_{α,β} (E_αβ A)_i (E_βα B)_j
        let mut sigma = Vec::with_capacity(count * count);
        for a in &mats {
            for b in &mats {
                let mut acc: FxHashMap<(MatrixBasisLabel, MatrixBasisLabel), i64> = FxHashMap::default();
                for al in 1..=r {
                    for be in 1..=r {
                        let left = int_decompose(&SlotMatrix::unit(r, al, be).mul(a));
                        let right = int_decompose(&SlotMatrix::unit(r, be, al).mul(b));
                        for (l1, c1) in &left {
                            for (l2, c2) in &right {
                                *acc.entry((*l1, *l2)).or_insert(0) += c1 * c2;
                            }
                        }
                    }
                }
                let mut v: Vec<_> = acc.into_iter().filter(|(_, c)| *c != 0).map(|((x, y), c)| (x, y, c)).collect();
                v.sort();
                sigma.push(v.into_iter().collect());
            }
        }
        Ok(SlotAlgebra { r, dense, count, mul, sigma })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    #[inline]
    fn idx(&self, a: MatrixBasisLabel, b: MatrixBasisLabel) -> usize {
        self.dense[a.0 as usize] as usize * self.count + self.dense[b.0 as usize] as usize
    }

    /// `a · b` in the slot basis.
    #[inline]
    pub fn mul(&self, a: MatrixBasisLabel, b: MatrixBasisLabel) -> &[(MatrixBasisLabel, i64)] {
        &self.mul[self.idx(a, b)]
    }

    /// `σ_ij · ((a)_i (b)_j)` as a combination of `(label_i, label_j)`.
    #[inline]
    pub fn sigma(&self, a: MatrixBasisLabel, b: MatrixBasisLabel) -> &[(MatrixBasisLabel, MatrixBasisLabel, i64)] {
        &self.sigma[self.idx(a, b)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn er_r_elimination() {
        let alg = SlotAlgebra::new(2).unwrap();
        let e21 = MatrixBasisLabel::unit(2, 2, 1).unwrap();
        let e12 = MatrixBasisLabel::unit(2, 1, 2).unwrap();
        let e11 = MatrixBasisLabel::unit(2, 1, 1).unwrap();
        // E21 E12 = E22 = Id - E11
        let mut p = alg.mul(e21, e12).to_vec();
        p.sort();
        assert_eq!(p, vec![(MatrixBasisLabel::IDENTITY, 1), (e11, -1)]);
        assert!(MatrixBasisLabel::unit(2, 2, 2).is_err());
    }

    #[test]
    fn sigma_squares_to_identity() {
        // σ_12 σ_12 acting on (Id)_1 (Id)_2 returns the identity.
        for r in 1..=3 {
            let alg = SlotAlgebra::new(r).unwrap();
            let mut acc: FxHashMap<(MatrixBasisLabel, MatrixBasisLabel), i64> = FxHashMap::default();
            for &(a, b, c) in alg.sigma(MatrixBasisLabel::IDENTITY, MatrixBasisLabel::IDENTITY) {
                for &(x, y, d) in alg.sigma(a, b) {
                    *acc.entry((x, y)).or_insert(0) += c * d;
                }
            }
            acc.retain(|_, v| *v != 0);
            let id = MatrixBasisLabel::IDENTITY;
            assert_eq!(acc.into_iter().collect::<Vec<_>>(), vec![((id, id), 1)], "r = {r}");
        }
    }

    #[test]
    fn decompose_recovers_matrix() {
        let r = 3;
        let m = SlotMatrix::unit(r, 3, 3).add(&SlotMatrix::unit(r, 1, 2).scale(&Rational::from_int(5)));
        let mut back = SlotMatrix::zero(r);
        for (l, c) in m.decompose() {
            back = back.add(&l.to_matrix(r).scale(&c));
        }
        assert_eq!(back, m);
    }

    #[test]
    fn label_json() {
        let l = MatrixBasisLabel::unit(3, 1, 2).unwrap();
        assert_eq!(serde_json::to_string(&l).unwrap(), "[1,2]");
        assert_eq!(serde_json::from_str::<MatrixBasisLabel>("\"id\"").unwrap(), MatrixBasisLabel::IDENTITY);
        assert_eq!(serde_json::from_str::<MatrixBasisLabel>("\"[1,2]\"").unwrap(), l);
    }
}
