use std::fmt;

use smallvec::SmallVec;

use super::MatrixBasisLabel;
use crate::symcomb::Permutation;

/// PBW monomial `x^a · (slots) · π · y^b` of `H(n, r)`.
///
/// Packed as `[x_0..x_{n-1}, label_0.., π(0).., y_0..]` in one byte vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CherednikMonomial {
    data: SmallVec<[u8; 32]>,
}

impl CherednikMonomial {
    pub fn one(n: usize) -> Self {
        let mut data = SmallVec::from_elem(0u8, 4 * n);
        for i in 0..n {
            data[2 * n + i] = i as u8;
        }
        CherednikMonomial { data }
    }

    pub fn new(x: &[u8], labels: &[MatrixBasisLabel], perm: &Permutation, y: &[u8]) -> Self {
        let n = x.len();
        assert!(labels.len() == n && perm.degree() == n && y.len() == n, "monomial parts must have length n");
        let mut data = SmallVec::with_capacity(4 * n);
        data.extend_from_slice(x);
        data.extend(labels.iter().map(|l| l.byte()));
        data.extend_from_slice(perm.images());
        data.extend_from_slice(y);
        CherednikMonomial { data }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.data.len() / 4
    }

    #[inline]
    pub fn x(&self, i: usize) -> u8 {
        self.data[i]
    }

    #[inline]
    pub fn label(&self, i: usize) -> MatrixBasisLabel {
        MatrixBasisLabel::from_byte(self.data[self.n() + i])
    }

    #[inline]
    pub fn perm_image(&self, i: usize) -> usize {
        self.data[2 * self.n() + i] as usize
    }

    #[inline]
    pub fn y(&self, i: usize) -> u8 {
        self.data[3 * self.n() + i]
    }

    pub fn x_exps(&self) -> &[u8] {
        &self.data[..self.n()]
    }

    pub fn y_exps(&self) -> &[u8] {
        let n = self.n();
        &self.data[3 * n..]
    }

    pub fn labels(&self) -> impl Iterator<Item = MatrixBasisLabel> + '_ {
        let n = self.n();
        self.data[n..2 * n].iter().map(|&b| MatrixBasisLabel::from_byte(b))
    }

    pub fn perm(&self) -> Permutation {
        let n = self.n();
        Permutation::from_raw(self.data[2 * n..3 * n].iter().copied().collect())
    }

    pub fn perm_is_identity(&self) -> bool {
        let n = self.n();
        self.data[2 * n..3 * n].iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    #[inline]
    pub(crate) fn set_x(&mut self, i: usize, v: u8) {
        self.data[i] = v;
    }

    #[inline]
    pub(crate) fn set_label(&mut self, i: usize, l: MatrixBasisLabel) {
        let n = self.n();
        self.data[n + i] = l.byte();
    }

    #[inline]
    pub(crate) fn set_y(&mut self, i: usize, v: u8) {
        let n = self.n();
        self.data[3 * n + i] = v;
    }

    #[inline]
    pub(crate) fn set_perm_image(&mut self, i: usize, v: usize) {
        let n = self.n();
        self.data[2 * n + i] = v as u8;
    }

    pub fn inc_x(&mut self, i: usize) {
        self.data[i] = self.data[i].checked_add(1).expect("x exponent overflow");
    }

    pub fn inc_y(&mut self, i: usize) {
        let n = self.n();
        self.data[3 * n + i] = self.data[3 * n + i].checked_add(1).expect("y exponent overflow");
    }

    /// Total degree in the `x` and `y` generators.
    pub fn v_degree(&self) -> u32 {
        self.x_exps().iter().chain(self.y_exps()).map(|&e| e as u32).sum()
    }

    /// Whether site `i` carries an `x`, a `y` or a non-identity slot.
    pub fn site_active(&self, i: usize) -> bool {
        self.x(i) > 0 || self.y(i) > 0 || !self.label(i).is_identity()
    }

    pub fn active_sites(&self) -> usize {
        (0..self.n()).filter(|&i| self.site_active(i)).count()
    }

    /// Replaces `π y^b` by `y^{π·b}`, the form taken when `e` sits on the right.
    pub fn absorb_perm(&mut self) {
        if self.perm_is_identity() {
            return;
        }
        let n = self.n();
        let mut y: SmallVec<[u8; 8]> = SmallVec::from_elem(0, n);
        for i in 0..n {
            y[self.perm_image(i)] = self.y(i);
        }
        for i in 0..n {
            self.set_y(i, y[i]);
            self.set_perm_image(i, i);
        }
    }
}

impl fmt::Debug for CherednikMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n();
        let mut parts = Vec::new();
        for i in 0..n {
            match self.x(i) {
                0 => {}
                1 => parts.push(format!("x{}", i + 1)),
                e => parts.push(format!("x{}^{e}", i + 1)),
            }
        }
        for i in 0..n {
            if !self.label(i).is_identity() {
                parts.push(format!("({:?})_{}", self.label(i), i + 1));
            }
        }
        if !self.perm_is_identity() {
            parts.push(format!("{}", self.perm()));
        }
        for i in 0..n {
            match self.y(i) {
                0 => {}
                1 => parts.push(format!("y{}", i + 1)),
                e => parts.push(format!("y{}^{e}", i + 1)),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}
