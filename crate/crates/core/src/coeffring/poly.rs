use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{CoeffError, Rational};

/// Exponents of `t`, `k` and `K` in a parameter monomial.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct ParamMono {
    pub t: u16,
    pub k: u16,
    pub big_k: u16,
}

impl ParamMono {
    pub const ONE: ParamMono = ParamMono { t: 0, k: 0, big_k: 0 };

    pub fn new(t: u16, k: u16, big_k: u16) -> Self {
        ParamMono { t, k, big_k }
    }

    pub fn degree(&self) -> u32 {
        self.t as u32 + self.k as u32 + self.big_k as u32
    }

    fn mul(self, o: ParamMono) -> ParamMono {
        ParamMono { t: self.t + o.t, k: self.k + o.k, big_k: self.big_k + o.big_k }
    }
}

/// Graded lexicographic order with `t > k > K`.
impl Ord for ParamMono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then(self.t.cmp(&o.t))
            .then(self.k.cmp(&o.k))
            .then(self.big_k.cmp(&o.big_k))
    }
}

impl PartialOrd for ParamMono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Polynomial in `t`, `k`, `K` with rational coefficients.
///
/// Terms are kept sorted by descending [`ParamMono`] order with no zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ParamPoly {
    terms: Vec<(ParamMono, Rational)>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(ParamMono::ONE, c)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Rational::from_int(n))
    }

    pub fn monomial(m: ParamMono, c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            ParamPoly { terms: vec![(m, c)] }
        }
    }

    pub fn t() -> Self {
        Self::monomial(ParamMono::new(1, 0, 0), Rational::one())
    }

    pub fn k() -> Self {
        Self::monomial(ParamMono::new(0, 1, 0), Rational::one())
    }

    pub fn big_k() -> Self {
        Self::monomial(ParamMono::new(0, 0, 1), Rational::one())
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms<I: IntoIterator<Item = (ParamMono, Rational)>>(it: I) -> Self {
        let mut terms: Vec<_> = it.into_iter().collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(ParamMono, Rational)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += &c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        ParamPoly { terms: out }
    }

    pub fn terms(&self) -> &[(ParamMono, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| *m == ParamMono::ONE)
    }

    /// The constant term's value when the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if *m == ParamMono::ONE => Some(c.clone()),
            _ => None,
        }
    }

    pub fn coeff_of(&self, m: ParamMono) -> Rational {
        self.terms
            .iter()
            .find(|(mm, _)| *mm == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Total degree in `t` and `k` (the `K` exponent is ignored).
    pub fn degree_tk(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.t as u32 + m.k as u32).max().unwrap_or(0)
    }

    pub fn degree_big_k(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.big_k as u32).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &o.terms[j];
            match ma.cmp(mb) {
                Ordering::Greater => {
                    out.push((*ma, ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((*mb, cb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = ca + cb;
                    if !s.is_zero() {
                        out.push((*ma, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        ParamPoly { terms: out }
    }

    pub fn neg(&self) -> Self {
        ParamPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        ParamPoly { terms: self.terms.iter().map(|(m, c)| (*m, c * q)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if let [(m, c)] = self.terms.as_slice() {
            if *m == ParamMono::ONE {
                return o.scale(c);
            }
        }
        if let [(m, c)] = o.terms.as_slice() {
            if *m == ParamMono::ONE {
                return self.scale(c);
            }
        }
        let mut acc = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                acc.push((ma.mul(*mb), ca * cb));
            }
        }
        Self::from_terms(acc)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluates at a full point.
    pub fn eval(&self, t: &Rational, k: &Rational, big_k: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            acc += &(c * &(&(&t.pow(m.t as u32) * &k.pow(m.k as u32)) * &big_k.pow(m.big_k as u32)));
        }
        acc
    }

    /// Substitutes any subset of the variables, leaving the others symbolic.
    pub fn substitute(&self, t: Option<&Rational>, k: Option<&Rational>, big_k: Option<&Rational>) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let mut c = c.clone();
            let mut mm = *m;
            if let Some(v) = t {
                c *= &v.pow(m.t as u32);
                mm.t = 0;
            }
            if let Some(v) = k {
                c *= &v.pow(m.k as u32);
                mm.k = 0;
            }
            if let Some(v) = big_k {
                c *= &v.pow(m.big_k as u32);
                mm.big_k = 0;
            }
            (mm, c)
        }))
    }

    /// Coefficient of `K^d` as a polynomial in `t`, `k`.
    pub fn big_k_coefficient(&self, d: u16) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.big_k == d)
                .map(|(m, c)| (ParamMono::new(m.t, m.k, 0), c.clone())),
        )
    }
}

fn write_var(f: &mut fmt::Formatter<'_>, first: &mut bool, name: &str, e: u16) -> fmt::Result {
    if e == 0 {
        return Ok(());
    }
    if !*first {
        write!(f, "*")?;
    }
    *first = false;
    if e == 1 {
        write!(f, "{name}")
    } else {
        write!(f, "{name}^{e}")
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut first = true;
            if !a.is_one() || *m == ParamMono::ONE {
                write!(f, "{a}")?;
                first = false;
            }
            write_var(f, &mut first, "t", m.t)?;
            write_var(f, &mut first, "k", m.k)?;
            write_var(f, &mut first, "K", m.big_k)?;
        }
        Ok(())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamPoly({self})")
    }
}

// ---- Parsing ----

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> CoeffError {
        CoeffError::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn digits(&mut self) -> Result<&'a str, CoeffError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).unwrap())
    }

    fn factor(&mut self) -> Result<(ParamMono, Rational), CoeffError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.digits()?;
                    Ok((ParamMono::ONE, format!("{num}/{den}").parse()?))
                } else {
                    Ok((ParamMono::ONE, num.parse()?))
                }
            }
            Some(c @ (b't' | b'k' | b'K')) => {
                self.pos += 1;
                let mut e: u16 = 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    e = self.digits()?.parse().map_err(|_| self.err("exponent too large"))?;
                }
                let m = match c {
                    b't' => ParamMono::new(e, 0, 0),
                    b'k' => ParamMono::new(0, e, 0),
                    _ => ParamMono::new(0, 0, e),
                };
                Ok((m, Rational::one()))
            }
            _ => Err(self.err("expected a number or one of t, k, K")),
        }
    }

    fn term(&mut self) -> Result<(ParamMono, Rational), CoeffError> {
        let (mut m, mut c) = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let (m2, c2) = self.factor()?;
            m = m.mul(m2);
            c *= &c2;
        }
        Ok((m, c))
    }

    fn poly(&mut self) -> Result<ParamPoly, CoeffError> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let (m, c) = self.term()?;
            terms.push((m, if sign < 0 { -c } else { c }));
            match self.peek() {
                None => break,
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                Some(_) => return Err(self.err("unexpected character")),
            }
            self.pos += 1;
        }
        Ok(ParamPoly::from_terms(terms))
    }
}

impl FromStr for ParamPoly {
    type Err = CoeffError;

    fn from_str(s: &str) -> Result<Self, CoeffError> {
        Parser { s: s.as_bytes(), pos: 0 }.poly()
    }
}

impl Serialize for ParamPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ParamPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// ---- Interpolation in K ----

/// Fits `p(K)` of degree at most `degree_bound` through `(K_i, value_i)`.
///
/// The first `degree_bound + 1` distinct nodes determine the fit and every
/// remaining sample must agree with it exactly. Sample values must not
/// involve `K`.
pub fn interpolate_in_k(samples: &[(Rational, ParamPoly)], degree_bound: usize) -> Result<ParamPoly, CoeffError> {
    if samples.iter().any(|(_, v)| v.degree_big_k() > 0) {
        return Err(CoeffError::InconsistentSamples("sample values must not depend on K".into()));
    }
    let mut nodes: Vec<&(Rational, ParamPoly)> = Vec::new();
    for s in samples {
        match nodes.iter().find(|n| n.0 == s.0) {
            Some(prev) if prev.1 != s.1 => {
                return Err(CoeffError::InconsistentSamples(format!("two different values at K = {}", s.0)));
            }
            Some(_) => {}
            None => nodes.push(s),
        }
    }
    let fit_nodes = &nodes[..nodes.len().min(degree_bound + 1)];
    let mut result = ParamPoly::zero();
    for (i, (xi, yi)) in fit_nodes.iter().map(|n| (&n.0, &n.1)).enumerate() {
        // Lagrange basis polynomial as coefficients in K, lowest degree first.
        let mut basis = vec![Rational::one()];
        let mut denom = Rational::one();
        for (j, node) in fit_nodes.iter().enumerate() {
            if j == i {
                continue;
            }
            let xj = &node.0;
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= &(c * xj);
            }
            basis = next;
            denom *= &(xi - xj);
        }
        let inv = denom.recip().expect("distinct interpolation nodes");
        let basis_poly = ParamPoly::from_terms(
            basis
                .iter()
                .enumerate()
                .map(|(d, c)| (ParamMono::new(0, 0, d as u16), c * &inv)),
        );
        result = result.add(&yi.mul(&basis_poly));
    }
    for (x, y) in &nodes[fit_nodes.len()..] {
        if result.substitute(None, None, Some(x)) != *y {
            return Err(CoeffError::InconsistentSamples(format!(
                "sample at K = {x} disagrees with the degree-{degree_bound} fit"
            )));
        }
    }
    Ok(result)
}
