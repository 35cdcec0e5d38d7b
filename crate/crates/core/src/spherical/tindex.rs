use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::cherednik::MatrixBasisLabel;
use crate::coeffring::Rational;

/// One generator `T_{p,q}(label)`; equivalently the content of one active
/// site, `(label) x^p y^q`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TGen {
    pub p: u8,
    pub q: u8,
    pub label: MatrixBasisLabel,
}

impl TGen {
    pub const INACTIVE: TGen = TGen { p: 0, q: 0, label: MatrixBasisLabel::IDENTITY };

    pub fn new(p: u8, q: u8, label: MatrixBasisLabel) -> Self {
        TGen { p, q, label }
    }

    pub fn weight(&self) -> u32 {
        self.p as u32 + self.q as u32
    }

    pub fn is_inactive(&self) -> bool {
        *self == Self::INACTIVE
    }
}

/// Multiset of generators `m`, stored sorted with repetition.
///
/// Doubles as the key of an `S_n`-orbit of PBW monomials: the multiset of
/// contents of the active sites.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TIndex {
    gens: SmallVec<[TGen; 4]>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("the generator (0, 0, id) is not allowed in a T-index")]
pub struct UnitGenerator;

impl TIndex {
    pub fn empty() -> Self {
        TIndex::default()
    }

    pub fn new<I: IntoIterator<Item = TGen>>(it: I) -> Result<Self, UnitGenerator> {
        let mut gens: SmallVec<[TGen; 4]> = it.into_iter().collect();
        if gens.iter().any(TGen::is_inactive) {
            return Err(UnitGenerator);
        }
        gens.sort_unstable();
        Ok(TIndex { gens })
    }

    pub(crate) fn from_sorted(gens: SmallVec<[TGen; 4]>) -> Self {
        debug_assert!(gens.windows(2).all(|w| w[0] <= w[1]));
        TIndex { gens }
    }

    pub fn single(g: TGen) -> Result<Self, UnitGenerator> {
        Self::new([g])
    }

    pub fn gens(&self) -> &[TGen] {
        &self.gens
    }

    /// `|m|`, the number of generators with multiplicity.
    pub fn size(&self) -> usize {
        self.gens.len()
    }

    /// `w(m) = Σ (p + q)`.
    pub fn weight(&self) -> u32 {
        self.gens.iter().map(TGen::weight).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn multiplicities(&self) -> Vec<(TGen, u32)> {
        let mut out: Vec<(TGen, u32)> = Vec::new();
        for g in &self.gens {
            match out.last_mut() {
                Some((h, c)) if h == g => *c += 1,
                _ => out.push((*g, 1)),
            }
        }
        out
    }

    /// `Π_a m_a!`.
    pub fn multiplicity_factorial(&self) -> Rational {
        let mut acc = Rational::one();
        for (_, c) in self.multiplicities() {
            for i in 2..=c {
                acc *= &Rational::from_int(i as i64);
            }
        }
        acc
    }

    pub fn without_one(&self, g: &TGen) -> Option<TIndex> {
        let pos = self.gens.iter().position(|h| h == g)?;
        let mut gens = self.gens.clone();
        gens.remove(pos);
        Some(TIndex { gens })
    }

    pub fn union(&self, o: &TIndex) -> TIndex {
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&o.gens);
        gens.sort_unstable();
        TIndex { gens }
    }

    /// All indices with `w(m) <= max_weight` and `|m| <= max_size` at rank
    /// `r`, in increasing order.
    pub fn enumerate(r: usize, max_weight: u32, max_size: usize) -> Vec<TIndex> {
        let mut gens = Vec::new();
        for w in 0..=max_weight.min(u8::MAX as u32) as u8 {
            for p in 0..=w {
                for l in MatrixBasisLabel::all(r) {
                    let g = TGen::new(p, w - p, l);
                    if !g.is_inactive() {
                        gens.push(g);
                    }
                }
            }
        }
        gens.sort_unstable();
        fn rec(gens: &[TGen], start: usize, weight: u32, size: usize, cur: &mut SmallVec<[TGen; 4]>, out: &mut Vec<TIndex>) {
            out.push(TIndex { gens: cur.clone() });
            if size == 0 {
                return;
            }
            for i in start..gens.len() {
                let w = gens[i].weight();
                if w <= weight {
                    cur.push(gens[i]);
                    rec(gens, i, weight - w, size - 1, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(&gens, 0, max_weight, max_size, &mut SmallVec::new(), &mut out);
        out.sort();
        out
    }

    /// Largest slot index used by any label.
    pub fn max_label_index(&self) -> usize {
        self.gens
            .iter()
            .filter_map(|g| g.label.indices())
            .map(|(a, b)| a.max(b))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Debug for TIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (g, c)) in self.multiplicities().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({},{},{}):{c}", g.p, g.q, g.label)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for TIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

/// JSON form: sorted list of `[p, q, label, multiplicity]`.
impl Serialize for TIndex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<(u8, u8, MatrixBasisLabel, u32)> =
            self.multiplicities().into_iter().map(|(g, c)| (g.p, g.q, g.label, c)).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<(u8, u8, MatrixBasisLabel, u32)>::deserialize(d)?;
        let mut gens = Vec::new();
        for (p, q, label, c) in v {
            if c == 0 {
                return Err(D::Error::custom("multiplicity must be positive"));
            }
            for _ in 0..c {
                gens.push(TGen::new(p, q, label));
            }
        }
        TIndex::new(gens).map_err(D::Error::custom)
    }
}

impl std::str::FromStr for TIndex {
    type Err = serde_json::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        serde_json::from_str(s)
    }
}
