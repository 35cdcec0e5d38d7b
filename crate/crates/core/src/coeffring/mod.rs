//! Exact coefficient arithmetic: rationals and polynomials in the parameters
//! `t`, `k` and the central element `K`.

mod poly;
mod rational;

use std::fmt;

pub use poly::{interpolate_in_k, ParamMono, ParamPoly};
pub use rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoeffError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inconsistent interpolation samples: {0}")]
    InconsistentSamples(String),
}

/// Coefficient ring used by the algebra engines.
///
/// [`ParamPoly`] keeps `t` and `k` symbolic; [`Rational`] is used once the
/// parameters have been specialised to numbers.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(q: &Rational) -> Self;
    fn add_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale(&self, q: &Rational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_int(n))
    }

    fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }

    fn add_assign_ref(&mut self, o: &Self) {
        *self = self.add_ref(o);
    }
}

impl Coeff for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale(&self, q: &Rational) -> Self {
        self * q
    }
    fn add_assign_ref(&mut self, o: &Self) {
        *self += o;
    }
}

impl Coeff for ParamPoly {
    fn zero() -> Self {
        ParamPoly::zero()
    }
    fn one() -> Self {
        ParamPoly::one()
    }
    fn is_zero(&self) -> bool {
        ParamPoly::is_zero(self)
    }
    fn from_rational(q: &Rational) -> Self {
        ParamPoly::constant(q.clone())
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn scale(&self, q: &Rational) -> Self {
        ParamPoly::scale(self, q)
    }
}

/// Evaluation of symbolic coefficients at a numeric `(t, k)` point.
pub trait Specialize {
    fn specialize(&self, t: &Rational, k: &Rational) -> Rational;
}

impl Specialize for ParamPoly {
    fn specialize(&self, t: &Rational, k: &Rational) -> Rational {
        self.eval(t, k, &Rational::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_poly() -> impl Strategy<Value = ParamPoly> {
        prop::collection::vec(((0u16..3, 0u16..3, 0u16..3), -5i64..6, 1i64..4), 0..5).prop_map(|ts| {
            ParamPoly::from_terms(
                ts.into_iter()
                    .map(|((a, b, c), n, d)| (ParamMono::new(a, b, c), Rational::new(n, d).unwrap())),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert!(a.sub(&a).is_zero());
        }

        #[test]
        fn text_roundtrip(a in arb_poly()) {
            let back: ParamPoly = a.to_string().parse().unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn eval_is_a_ring_map(a in arb_poly(), b in arb_poly(), t in -4i64..5, k in -4i64..5, kk in -4i64..5) {
            let (t, k, kk) = (Rational::from_int(t), Rational::from_int(k), Rational::from_int(kk));
            prop_assert_eq!(a.mul(&b).eval(&t, &k, &kk), &a.eval(&t, &k, &kk) * &b.eval(&t, &k, &kk));
            prop_assert_eq!(a.add(&b).eval(&t, &k, &kk), &a.eval(&t, &k, &kk) + &b.eval(&t, &k, &kk));
        }
    }
}
