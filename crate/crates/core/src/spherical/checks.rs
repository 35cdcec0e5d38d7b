//! Exact rank checks for the T-basis at a rational point.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::expand::random_rational;
use super::{SphericalAlgebra, SphericalElement, SphericalError, TGen, TIndex};
use crate::cherednik::CherednikAlgebra;
use crate::coeffring::Rational;
use crate::linalg::{RowSpace, SparseRow};
use crate::report::VerificationReport;

/// A seeded pseudo-random rational point `(t, k)`.
pub fn random_point(seed: u64) -> (Rational, Rational) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (random_rational(&mut rng), random_rational(&mut rng))
}

#[derive(Default)]
struct Columns(BTreeMap<TIndex, usize>);

impl Columns {
    fn row(&mut self, x: &SphericalElement<Rational>) -> SparseRow {
        let mut row = SparseRow::new();
        for (m, c) in x.sorted_terms() {
            let next = self.0.len();
            let col = *self.0.entry(m.clone()).or_insert(next);
            row.insert(col, c.clone());
        }
        row
    }
}

fn point_algebra(n: usize, r: usize, t: &Rational, k: &Rational) -> Result<SphericalAlgebra<Rational>, SphericalError> {
    Ok(SphericalAlgebra::new(CherednikAlgebra::with_params(n, r, t.clone(), k.clone())?))
}

/// Rank of `{T_n(m) : w(m) <= max_weight, |m| <= max_size}` at `(t, k)`
/// equals the number of indices.
pub fn verify_independence(
    n: usize,
    r: usize,
    max_weight: u32,
    max_size: usize,
    t: &Rational,
    k: &Rational,
) -> Result<VerificationReport, SphericalError> {
    let alg = point_algebra(n, r, t, k)?;
    let indices = TIndex::enumerate(r, max_weight, max_size);
    let mut cols = Columns::default();
    let mut space = RowSpace::new();
    for m in &indices {
        space.insert(&cols.row(&alg.t_basis(m)?));
    }
    let params = format!("n={n} r={r} max_weight={max_weight} max_size={max_size} t={t} k={k}");
    let pass = space.rank() == indices.len();
    Ok(VerificationReport::new("t_basis_independence", params, pass)
        .with_note(format!("rank {} of {} elements", space.rank(), indices.len())))
}

/// Every sandwiched PBW monomial with at most `max_sites` active sites and
/// total degree at most `max_degree` lies in the span of the ordered
/// products of at most `max_factors` generators of total degree at most
/// `max_degree`.
pub fn verify_generation(
    n: usize,
    r: usize,
    max_sites: usize,
    max_degree: u32,
    max_factors: usize,
    t: &Rational,
    k: &Rational,
) -> Result<VerificationReport, SphericalError> {
    let alg = point_algebra(n, r, t, k)?;
    let gens: Vec<TGen> = TIndex::enumerate(r, max_degree, 1).into_iter().filter_map(|m| m.gens().first().copied()).collect();
    let mut cols = Columns::default();
    let mut space = RowSpace::new();
    space.insert(&cols.row(&alg.unit()));
    let mut products = 1;
    let mut level = vec![(0u32, alg.unit())];
    for _ in 0..max_factors {
        let mut next = Vec::new();
        for (w, x) in &level {
            for g in &gens {
                if w + g.weight() > max_degree {
                    continue;
                }
                let tg = alg.t_generator(*g)?;
                let y = alg.mul(x, &tg)?;
                space.insert(&cols.row(&y));
                products += 1;
                next.push((w + g.weight(), y));
            }
        }
        level = next;
    }
    let targets: Vec<TIndex> = TIndex::enumerate(r, max_degree, max_sites.min(n));
    let mut missing = Vec::new();
    for m in &targets {
        let orbit = SphericalElement::from_orbits(n, r, [(m.clone(), Rational::one())])?;
        if !space.contains(&cols.row(&orbit)) {
            missing.push(format!("{m:?}"));
        }
    }
    let params = format!("n={n} r={r} bidegree<=({max_sites},{max_degree}) factors<={max_factors} t={t} k={k}");
    let note = format!("{} targets, {products} spanning products, span rank {}", targets.len(), space.rank());
    let rep = VerificationReport::new("t_generation", params, missing.is_empty());
    Ok(if missing.is_empty() { rep.with_note(note) } else { rep.with_note(format!("{note}; missing {}", missing.join(", "))) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cherednik::MatrixBasisLabel;

    #[test]
    fn small_independence_and_generation() {
        let (t, k) = random_point(7);
        assert!(verify_independence(4, 2, 2, 2, &t, &k).unwrap().passed());
        assert!(verify_generation(3, 2, 1, 1, 1, &t, &k).unwrap().passed());
    }

    #[test]
    fn enumeration_counts() {
        // 3 weight-zero generators at r = 2, 8 of weight one
        assert_eq!(TIndex::enumerate(2, 0, 1).len(), 4);
        assert_eq!(TIndex::enumerate(2, 1, 1).len(), 12);
        assert_eq!(MatrixBasisLabel::all(2).len(), 4);
    }

    #[test]
    fn two_factors_do_not_reach_bidegree_two_two() {
        // the k σ part of T_{1,1} produces three-site orbits that only a third factor cancels
        let (t, k) = random_point(3);
        let two = verify_generation(3, 2, 2, 2, 2, &t, &k).unwrap();
        assert!(!two.passed());
        assert_eq!(two.note.unwrap().matches("(1,1,").count(), 6);
        assert!(verify_generation(3, 2, 2, 2, 3, &t, &k).unwrap().passed());
    }
}
