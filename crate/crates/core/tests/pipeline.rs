use ddca_core::cherednik::MatrixBasisLabel;
use ddca_core::interp::{specialize, StructureConstants};
use ddca_core::spherical::{SphericalAlgebra, TGen, TIndex};
use ddca_core::Rational;

fn idx(gens: &[(u8, u8, Option<(usize, usize)>)]) -> TIndex {
    TIndex::new(gens.iter().map(|&(p, q, ab)| {
        let label = match ab {
            Some((a, b)) => MatrixBasisLabel::unit(2, a, b).unwrap(),
            None => MatrixBasisLabel::IDENTITY,
        };
        TGen::new(p, q, label)
    }))
    .unwrap()
}

#[test]
fn specialized_tables_match_direct_expansion_beyond_the_fit() {
    let sc = StructureConstants::new(2);
    let pairs = [
        (idx(&[(0, 0, Some((1, 2)))]), idx(&[(0, 0, Some((2, 1)))])),
        (idx(&[(1, 0, Some((1, 2)))]), idx(&[(0, 1, Some((2, 1)))])),
        (idx(&[(1, 1, None)]), idx(&[(0, 0, Some((1, 1)))])),
        (idx(&[(0, 1, Some((1, 1)))]), idx(&[(1, 0, None), (0, 0, Some((2, 1)))])),
    ];
    for (m1, m2) in &pairs {
        let table = sc.table(m1, m2).unwrap();
        let beyond = table.fit.held_out_rank + 2;
        let direct = SphericalAlgebra::symbolic(beyond, 2).unwrap().expand_product(m1, m2).unwrap();
        assert_eq!(specialize(&table, &Rational::from_int(beyond as i64)), direct, "{m1} · {m2} at n = {beyond}");
    }
}

#[test]
fn tables_are_shared_between_lookups() {
    let sc = StructureConstants::new(2);
    let (m1, m2) = (idx(&[(0, 0, Some((1, 2)))]), idx(&[(0, 0, Some((2, 1)))]));
    let a = sc.table(&m1, &m2).unwrap();
    let b = sc.table(&m1, &m2).unwrap();
    assert!(std::sync::Arc::ptr_eq(&a, &b));
}
