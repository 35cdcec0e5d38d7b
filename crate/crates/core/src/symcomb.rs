//! Symmetric-group combinatorics: permutations, Young diagrams, contents and
//! the group algebra `Q[S_n]`.

use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::coeffring::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymError {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid Young diagram: {0}")]
    InvalidDiagram(String),
    #[error("rank {n} is too small to pad a diagram of size {size} with first row {first_row}")]
    PadTooSmall { n: usize, size: usize, first_row: usize },
    #[error("permutation degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
}

// ---- Permutations ----

/// Permutation of `{0, .., n-1}` stored as its image list.
///
/// Composition follows `(a * b)(i) = a(b(i))`. The text form is the
/// one-based image list, e.g. `[2,1,3]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    img: SmallVec<[u8; 8]>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { img: (0..n as u8).collect() }
    }

    pub fn from_images(img: &[usize]) -> Result<Self, SymError> {
        let n = img.len();
        let mut seen = vec![false; n];
        for &i in img {
            if i >= n || seen[i] {
                return Err(SymError::InvalidPermutation(format!("{img:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Permutation { img: img.iter().map(|&i| i as u8).collect() })
    }

    pub(crate) fn from_raw(img: SmallVec<[u8; 8]>) -> Self {
        Permutation { img }
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(n);
        p.img.swap(i, j);
        p
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.img[i] as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.img
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Permutation { img: other.img.iter().map(|&i| self.img[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv: SmallVec<[u8; 8]> = SmallVec::from_elem(0, self.img.len());
        for (i, &v) in self.img.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Permutation { img: inv }
    }

    pub fn sign(&self) -> i64 {
        let n = self.img.len();
        let mut seen = vec![false; n];
        let mut s = 1;
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut len = 0;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = self.img[j] as usize;
                len += 1;
            }
            if len % 2 == 0 {
                s = -s;
            }
        }
        s
    }

    /// All permutations of `{0, .., n-1}` in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut cur: Vec<u8> = (0..n as u8).collect();
        let mut out = vec![Permutation { img: cur.iter().copied().collect() }];
        while next_permutation(&mut cur) {
            out.push(Permutation { img: cur.iter().copied().collect() });
        }
        out
    }
}

/// Advances `v` to the next lexicographic permutation; returns `false` after
/// the last one. Repeated entries yield each distinct arrangement once.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.img.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_list(s: &str, open: char, close: char) -> Option<Vec<usize>> {
    let inner = s.trim().strip_prefix(open)?.strip_suffix(close)?.trim();
    if inner.is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|p| p.trim().parse().ok()).collect()
}

impl FromStr for Permutation {
    type Err = SymError;

    fn from_str(s: &str) -> Result<Self, SymError> {
        let v = parse_list(s, '[', ']').ok_or_else(|| SymError::InvalidPermutation(s.to_string()))?;
        if v.iter().any(|&i| i == 0) {
            return Err(SymError::InvalidPermutation(format!("{s}: images are one-based")));
        }
        Self::from_images(&v.iter().map(|i| i - 1).collect::<Vec<_>>())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<usize> = self.img.iter().map(|&i| i as usize + 1).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if v.iter().any(|&i| i == 0) {
            return Err(serde::de::Error::custom("permutation images are one-based"));
        }
        Permutation::from_images(&v.iter().map(|i| i - 1).collect::<Vec<_>>()).map_err(serde::de::Error::custom)
    }
}

// ---- Young diagrams ----

/// Partition with positive, non-increasing row lengths.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct YoungDiagram {
    rows: Vec<usize>,
}

impl YoungDiagram {
    pub fn new(rows: Vec<usize>) -> Result<Self, SymError> {
        if rows.iter().any(|&r| r == 0) || rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(SymError::InvalidDiagram(format!("{rows:?}")));
        }
        Ok(YoungDiagram { rows })
    }

    pub fn empty() -> Self {
        YoungDiagram { rows: Vec::new() }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    pub fn first_row(&self) -> usize {
        self.rows.first().copied().unwrap_or(0)
    }

    /// Boxes as `(row, column)`, zero-based.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(i, &len)| (0..len).map(move |j| (i, j)))
    }

    pub fn conjugate(&self) -> YoungDiagram {
        let cols = self.first_row();
        YoungDiagram { rows: (0..cols).map(|j| self.rows.iter().filter(|&&r| r > j).count()).collect() }
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for YoungDiagram {
    type Err = SymError;

    fn from_str(s: &str) -> Result<Self, SymError> {
        let v = parse_list(s, '(', ')').ok_or_else(|| SymError::InvalidDiagram(s.to_string()))?;
        YoungDiagram::new(v)
    }
}

/// Sum of `column - row` over all boxes.
pub fn content(lambda: &YoungDiagram) -> i64 {
    lambda
        .rows
        .iter()
        .enumerate()
        .map(|(i, &len)| {
            let (i, len) = (i as i64, len as i64);
            len * (len - 1) / 2 - i * len
        })
        .sum()
}

/// Prepends a first row of length `n - |λ|`.
pub fn pad(lambda: &YoungDiagram, n: usize) -> Result<YoungDiagram, SymError> {
    let size = lambda.size();
    if n < size + lambda.first_row() {
        return Err(SymError::PadTooSmall { n, size, first_row: lambda.first_row() });
    }
    let mut rows = Vec::with_capacity(lambda.rows.len() + 1);
    if n > size {
        rows.push(n - size);
    }
    rows.extend_from_slice(&lambda.rows);
    YoungDiagram::new(rows)
}

/// `ct(λ) - |λ| + (n - |λ|)(n - |λ| - 1)/2`, the scalar by which the sum of
/// all transpositions acts on the Specht module of `pad(λ, n)`.
pub fn interpolated_omega_value(lambda: &YoungDiagram, n: usize) -> Result<i64, SymError> {
    pad(lambda, n)?;
    let m = (n - lambda.size()) as i64;
    Ok(content(lambda) - lambda.size() as i64 + m * (m - 1) / 2)
}

// ---- Group algebra ----

/// Element of `Q[S_n]`.
#[derive(Clone, PartialEq, Debug)]
pub struct GroupAlgebraElement {
    n: usize,
    terms: FxHashMap<Permutation, Rational>,
}

impl GroupAlgebraElement {
    pub fn zero(n: usize) -> Self {
        GroupAlgebraElement { n, terms: FxHashMap::default() }
    }

    pub fn basis(p: Permutation) -> Self {
        let mut e = Self::zero(p.degree());
        e.terms.insert(p, Rational::one());
        e
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, p: &Permutation) -> Rational {
        self.terms.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, p: Permutation, c: &Rational) {
        let e = self.terms.entry(p).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, SymError> {
        if self.n != o.n {
            return Err(SymError::DegreeMismatch(self.n, o.n));
        }
        let mut out = self.clone();
        for (p, c) in &o.terms {
            out.add_term(p.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let mut out = Self::zero(self.n);
        if !q.is_zero() {
            out.terms = self.terms.iter().map(|(p, c)| (p.clone(), c * q)).collect();
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Result<Self, SymError> {
        if self.n != o.n {
            return Err(SymError::DegreeMismatch(self.n, o.n));
        }
        let mut acc: FxHashMap<Permutation, Rational> = FxHashMap::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                *acc.entry(a.compose(b)).or_insert_with(Rational::zero) += &(ca * cb);
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(GroupAlgebraElement { n: self.n, terms: acc })
    }

    /// `c` times `self` when `self` is a scalar multiple of `other`.
    pub fn ratio_to(&self, other: &Self) -> Option<Rational> {
        let (p, c) = other.terms.iter().next()?;
        let ratio = self.coeff(p).checked_div(c).ok()?;
        (*self == other.scale(&ratio)).then_some(ratio)
    }
}

/// `Ω_n`, the sum of all transpositions.
pub fn omega_element(n: usize) -> GroupAlgebraElement {
    let mut e = GroupAlgebraElement::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            e.add_term(Permutation::transposition(n, i, j), &Rational::one());
        }
    }
    e
}

/// The symmetrizing idempotent `(1/n!) Σ_σ σ`.
pub fn symmetrizer(n: usize) -> GroupAlgebraElement {
    let all = Permutation::all(n);
    let w = Rational::new(1, all.len() as i64).unwrap();
    let mut e = GroupAlgebraElement::zero(n);
    for p in all {
        e.add_term(p, &w);
    }
    e
}

/// Young symmetrizer `b_λ a_λ` for the row-reading standard tableau.
///
/// Generates a left ideal isomorphic to the Specht module of `λ`.
pub fn young_symmetrizer(lambda: &YoungDiagram) -> GroupAlgebraElement {
    let n = lambda.size();
    let mut label = vec![vec![0usize; 0]; lambda.rows.len()];
    let mut next = 0;
    for (i, &len) in lambda.rows.iter().enumerate() {
        for _ in 0..len {
            label[i].push(next);
            next += 1;
        }
    }
    let rows: Vec<Vec<usize>> = label.clone();
    let cols: Vec<Vec<usize>> = (0..lambda.first_row())
        .map(|j| label.iter().filter(|r| r.len() > j).map(|r| r[j]).collect())
        .collect();
    let a = block_group_sum(n, &rows, false);
    let b = block_group_sum(n, &cols, true);
    b.mul(&a).expect("same degree")
}

/// Sum over the product of the symmetric groups on each block.
fn block_group_sum(n: usize, blocks: &[Vec<usize>], signed: bool) -> GroupAlgebraElement {
    let mut acc = GroupAlgebraElement::basis(Permutation::identity(n));
    for block in blocks {
        let mut part = GroupAlgebraElement::zero(n);
        for local in Permutation::all(block.len()) {
            let mut img: Vec<usize> = (0..n).collect();
            for (i, &src) in block.iter().enumerate() {
                img[src] = block[local.apply(i)];
            }
            let p = Permutation::from_images(&img).expect("block permutation");
            let c = if signed { local.sign() } else { 1 };
            part.add_term(p, &Rational::from_int(c));
        }
        acc = acc.mul(&part).expect("same degree");
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn yd(s: &str) -> YoungDiagram {
        s.parse().unwrap()
    }

    #[test]
    fn contents_and_pads() {
        assert_eq!(content(&yd("(2,1)")), 0);
        assert_eq!(content(&yd("(3)")), 3);
        assert_eq!(pad(&yd("(2,1)"), 7).unwrap(), yd("(4,2,1)"));
        assert_eq!(interpolated_omega_value(&yd("(2,1)"), 7).unwrap(), 3);
        assert_eq!(interpolated_omega_value(&yd("(1)"), 4).unwrap(), 2);
        assert_eq!(
            pad(&yd("(3,1)"), 6),
            Err(SymError::PadTooSmall { n: 6, size: 4, first_row: 3 })
        );
    }

    #[test]
    fn text_forms() {
        assert_eq!(yd("(3,2,1)").to_string(), "(3,2,1)");
        assert!("(1,2)".parse::<YoungDiagram>().is_err());
        let p: Permutation = "[2,1,3]".parse().unwrap();
        assert_eq!(p.to_string(), "[2,1,3]");
        assert!("[1,1]".parse::<Permutation>().is_err());
        assert!("[0,1]".parse::<Permutation>().is_err());
    }

    #[test]
    fn composition_convention() {
        let a: Permutation = "[2,3,1]".parse().unwrap();
        let b: Permutation = "[2,1,3]".parse().unwrap();
        // (a∘b)(0) = a(b(0)) = a(1) = 2
        assert_eq!(a.compose(&b).apply(0), 2);
        assert!(a.compose(&a.inverse()).is_identity());
    }

    #[test]
    fn omega_is_central_on_young_symmetrizer() {
        // Ω_n c_λ = content(λ) c_λ
        for s in ["(3)", "(2,1)", "(1,1,1)", "(3,1)", "(2,2)"] {
            let l = yd(s);
            let c = young_symmetrizer(&l);
            let oc = omega_element(l.size()).mul(&c).unwrap();
            assert_eq!(oc.ratio_to(&c), Some(Rational::from_int(content(&l))), "{s}");
        }
    }

    #[test]
    fn symmetrizer_is_idempotent() {
        let e = symmetrizer(4);
        assert_eq!(e.mul(&e).unwrap(), e);
    }

    proptest! {
        #[test]
        fn padded_content_matches_formula(rows in prop::collection::vec(1usize..5, 0..4), extra in 0usize..5) {
            let mut rows = rows;
            rows.sort_unstable_by(|a, b| b.cmp(a));
            let l = YoungDiagram::new(rows).unwrap();
            let n = l.size() + l.first_row() + extra;
            let padded = pad(&l, n).unwrap();
            let by_boxes: i64 = padded.boxes().map(|(i, j)| j as i64 - i as i64).sum();
            prop_assert_eq!(by_boxes, content(&padded));
            prop_assert_eq!(interpolated_omega_value(&l, n).unwrap(), content(&padded));
        }
    }
}
