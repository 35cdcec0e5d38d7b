use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{SphericalAlgebra, SphericalElement, SphericalError, TIndex};
use crate::coeffring::{Coeff, ParamMono, ParamPoly, Rational, Specialize};

/// Coefficients `c_m` of `Σ_m c_m T_n(m)`.
pub type TExpansion<C> = BTreeMap<TIndex, C>;

fn reduction_order(a: &TIndex, b: &TIndex) -> std::cmp::Ordering {
    (a.weight(), a.size(), a).cmp(&(b.weight(), b.size(), b))
}

fn leading(x: &SphericalElement<impl Coeff>) -> Option<TIndex> {
    x.terms.keys().max_by(|a, b| reduction_order(a, b)).cloned()
}

/// Writes `x` in the `T_n(m)` basis by peeling off leading orbits.
///
/// The leading orbit of `T_n(m)` is `m` with coefficient `Π m_a!`; all its
/// other orbits are smaller in `(weight, sites)`.
pub fn triangular_reduce<C: Coeff>(
    alg: &SphericalAlgebra<C>,
    x: &SphericalElement<C>,
) -> Result<TExpansion<C>, SphericalError> {
    alg.check(x)?;
    let mut rem = x.clone();
    let mut out = TExpansion::new();
    while let Some(m) = leading(&rem) {
        let c = rem.coeff(&m).scale(&m.multiplicity_factorial().recip().expect("nonzero"));
        let t = alg.t_basis(&m)?;
        rem = rem.sub(&t.mul_coeff(&c))?;
        if let Some(next) = leading(&rem) {
            if reduction_order(&next, &m) != std::cmp::Ordering::Less {
                return Err(SphericalError::NotInSpan(format!("T_n({m:?}) does not lead with {m:?}")));
            }
        }
        out.insert(m, c);
    }
    Ok(out)
}

/// Where `expand_in_t_basis` samples `(t, k)`.
#[derive(Clone, Copy, Debug)]
pub struct ExpansionPoints {
    pub seed: u64,
    /// Extra points checked after interpolation.
    pub held_out: usize,
}

impl Default for ExpansionPoints {
    fn default() -> Self {
        ExpansionPoints { seed: 0x5eed_7a11, held_out: 2 }
    }
}

pub(crate) fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num = loop {
        let v: i64 = rng.gen_range(-60..=60);
        if v != 0 {
            break v;
        }
    };
    Rational::new(num, rng.gen_range(1..=9)).expect("nonzero denominator")
}

fn distinct_rationals(rng: &mut ChaCha8Rng, count: usize) -> Vec<Rational> {
    let mut v: Vec<Rational> = Vec::with_capacity(count);
    while v.len() < count {
        let q = random_rational(rng);
        if !v.contains(&q) {
            v.push(q);
        }
    }
    v
}

/// Monomial coefficients of the polynomial through `(xs[i], ys[i])`.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> Vec<Rational> {
    // Newton divided differences, then expand the Newton form.
    let n = xs.len();
    let mut dd: Vec<Rational> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]).checked_div(&(&xs[i] - &xs[i - j])).expect("distinct nodes");
        }
    }
    let mut coeffs = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        // coeffs <- coeffs * (x - xs[i]) + dd[i]
        let mut next = vec![Rational::zero(); n];
        for d in 0..n {
            if coeffs[d].is_zero() {
                continue;
            }
            if d + 1 < n {
                next[d + 1] += &coeffs[d];
            }
            next[d] -= &(&coeffs[d] * &xs[i]);
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    coeffs
}

impl SphericalAlgebra<ParamPoly> {
    /// Expansion in the `T_n(m)` basis by exact reduction over `ℚ[t, k]`.
    pub fn expand_symbolic(&self, z: &SphericalElement<ParamPoly>) -> Result<TExpansion<ParamPoly>, SphericalError> {
        triangular_reduce(self, z)
    }

    /// Expansion in the `T_n(m)` basis, computed at random rational `(t, k)`
    /// and interpolated back to `ℚ[t, k]`.
    pub fn expand_in_t_basis(&self, z: &SphericalElement<ParamPoly>) -> Result<TExpansion<ParamPoly>, SphericalError> {
        self.expand_with_points(z, ExpansionPoints::default())
    }

    pub fn expand_with_points(
        &self,
        z: &SphericalElement<ParamPoly>,
        pts: ExpansionPoints,
    ) -> Result<TExpansion<ParamPoly>, SphericalError> {
        self.check(z)?;
        let degree = z.terms().map(|(m, c)| c.degree_tk() + m.weight().div_ceil(2)).max().unwrap_or(0) as usize;
        self.interpolate_expansion(degree, pts, |alg, t, k| triangular_reduce(alg, &z.specialize(t, k)))
    }

    /// Expansion of `T_n(m1) T_n(m2)`, with the product itself formed at each
    /// sample point.
    pub fn expand_product(&self, m1: &TIndex, m2: &TIndex) -> Result<TExpansion<ParamPoly>, SphericalError> {
        let degree = (m1.weight() + m2.weight()).div_ceil(2) as usize;
        self.interpolate_expansion(degree, ExpansionPoints::default(), |alg, _, _| {
            let prod = alg.mul(&alg.t_basis(m1)?, &alg.t_basis(m2)?)?;
            triangular_reduce(alg, &prod)
        })
    }

    /// Runs `at` on a `(degree + 1)²` grid of `(t, k)` points, interpolates
    /// each coefficient with joint degree at most `degree` and checks the fit
    /// at held-out points.
    fn interpolate_expansion<F>(&self, degree: usize, pts: ExpansionPoints, at: F) -> Result<TExpansion<ParamPoly>, SphericalError>
    where
        F: Fn(&SphericalAlgebra<Rational>, &Rational, &Rational) -> Result<TExpansion<Rational>, SphericalError> + Sync,
    {
        let eval = |t: &Rational, k: &Rational| at(&*self.at_point(t, k)?, t, k);
        let mut rng = ChaCha8Rng::seed_from_u64(pts.seed);
        let ts = distinct_rationals(&mut rng, degree + 1);
        let ks = distinct_rationals(&mut rng, degree + 1);
        let grid: Vec<(usize, usize)> = (0..=degree).flat_map(|i| (0..=degree).map(move |j| (i, j))).collect();
        let values: Vec<TExpansion<Rational>> =
            grid.par_iter().map(|&(i, j)| eval(&ts[i], &ks[j])).collect::<Result<_, _>>()?;
        let mut keys: Vec<&TIndex> = values.iter().flat_map(|v| v.keys()).collect();
        keys.sort();
        keys.dedup();

        let mut out = TExpansion::new();
        for m in keys {
            let value = |i: usize, j: usize| values[i * (degree + 1) + j].get(m).cloned().unwrap_or_else(Rational::zero);
            // interpolate in t for each k, then each t-coefficient in k
            let in_t: Vec<Vec<Rational>> =
                (0..=degree).map(|j| interpolate(&ts, &(0..=degree).map(|i| value(i, j)).collect::<Vec<_>>())).collect();
            let mut terms = Vec::new();
            for p in 0..=degree {
                let in_k = interpolate(&ks, &in_t.iter().map(|row| row[p].clone()).collect::<Vec<_>>());
                for (q, c) in in_k.into_iter().enumerate() {
                    if !c.is_zero() {
                        terms.push((ParamMono::new(p as u16, q as u16, 0), c));
                    }
                }
            }
            let poly = ParamPoly::from_terms(terms);
            if poly.degree_tk() as usize > degree {
                return Err(SphericalError::DegreeBoundExceeded(format!("coefficient of {m:?} has degree {}", poly.degree_tk())));
            }
            if !poly.is_zero() {
                out.insert(m.clone(), poly);
            }
        }

        for _ in 0..pts.held_out {
            let (t, k) = (random_rational(&mut rng), random_rational(&mut rng));
            let direct = eval(&t, &k)?;
            let fitted: TExpansion<Rational> = out
                .iter()
                .map(|(m, c)| (m.clone(), c.specialize(&t, &k)))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            if direct != fitted {
                return Err(SphericalError::DegreeBoundExceeded(format!("held-out point t = {t}, k = {k} disagrees")));
            }
        }
        Ok(out)
    }

    /// `Σ c_m T_n(m)`.
    pub fn from_expansion(&self, e: &TExpansion<ParamPoly>) -> Result<SphericalElement<ParamPoly>, SphericalError> {
        let mut acc = self.zero();
        for (m, c) in e {
            acc = acc.add(&self.t_basis(m)?.mul_coeff(c))?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_recovers_cubic() {
        let xs: Vec<Rational> = [-2, 1, 3, 7].iter().map(|&v| Rational::from_int(v)).collect();
        // 2 - x + x^3 / 2
        let f = |x: &Rational| &(&Rational::from_int(2) - x) + &(&x.pow(3) * &Rational::new(1, 2).unwrap());
        let ys: Vec<Rational> = xs.iter().map(f).collect();
        let c = interpolate(&xs, &ys);
        assert_eq!(c, vec![Rational::from_int(2), Rational::from_int(-1), Rational::zero(), Rational::new(1, 2).unwrap()]);
    }
}
