mod common;

use num_traits::Zero;
use polycone::cone::ConversionOptions;
use polycone::format::{parse, ProblemFile};
use polycone::linalg::{RatMatrix, RatVector, Rational, SubdeterminantSet};
use polycone::polyhedron::{
    h_equal, h_to_v, h_to_v_with, homogenize, v_equal, v_to_h, HPolyhedron, VPolyhedron,
};
use proptest::prelude::*;

fn int_vectors(
    n: usize,
    count: std::ops::RangeInclusive<usize>,
    bound: i64,
) -> impl Strategy<Value = Vec<RatVector>> {
    prop::collection::vec(
        prop::collection::vec(-bound..=bound, n).prop_map(|e| RatVector::from_i64(&e)),
        count,
    )
}

fn h_polyhedron(max_dim: usize, max_rows: usize) -> impl Strategy<Value = HPolyhedron> {
    (1..=max_dim, 1..=max_rows).prop_flat_map(|(n, m)| {
        (
            int_vectors(n, m..=m, 3),
            prop::collection::vec(-3i64..=3, m),
        )
            .prop_map(move |(a, b)| {
                HPolyhedron::new(
                    RatMatrix::from_rows(n, &a).unwrap(),
                    RatVector::from_i64(&b),
                )
                .unwrap()
            })
    })
}

fn v_polyhedron(max_dim: usize) -> impl Strategy<Value = VPolyhedron> {
    (1..=max_dim).prop_flat_map(|n| {
        (int_vectors(n, 1..=4, 3), int_vectors(n, 0..=2, 2))
            .prop_map(move |(v, w)| VPolyhedron::new(n, v, w).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homogenization_matches_membership(
        p in h_polyhedron(3, 4),
        coords in prop::collection::vec((-6i64..=6, 1i64..=3), 3),
    ) {
        let x: RatVector = coords
            .iter()
            .take(p.dim())
            .map(|(a, b)| Rational::new((*a).into(), (*b).into()))
            .collect();
        let mut lifted = x.clone();
        lifted.push(Rational::from_integer(1.into()));
        prop_assert_eq!(p.contains(&x), homogenize(&p).contains(&lifted));
    }

    #[test]
    fn h_to_v_to_h_round_trip(p in h_polyhedron(3, 4)) {
        let q = h_to_v(&p);
        if q.is_empty() {
            // no H-rep of the empty set is produced; check emptiness instead
            prop_assert_eq!(q.num_rays(), 0);
            return Ok(());
        }
        let back = v_to_h(&q).unwrap();
        prop_assert!(h_equal(&p, &back).unwrap());
    }

    #[test]
    fn v_to_h_to_v_round_trip(q in v_polyhedron(3)) {
        let p = v_to_h(&q).unwrap();
        for v in q.points() {
            prop_assert!(p.contains(v));
        }
        let back = h_to_v(&p);
        prop_assert!(v_equal(&q, &back).unwrap());
    }

    #[test]
    fn inner_description_lies_in_the_polyhedron(p in h_polyhedron(3, 4)) {
        let q = h_to_v(&p);
        for v in q.points() {
            prop_assert!(p.contains(v));
        }
        for w in q.rays() {
            prop_assert!(p.recedes_along(w));
        }
    }
}

fn nonzero_outside_qsd(p: &HPolyhedron) -> Vec<Rational> {
    let set = SubdeterminantSet::new(&homogenize(p).stacked(), 1 << 20).unwrap();
    let q = h_to_v_with(p, ConversionOptions::default());
    q.points()
        .chain(q.rays())
        .flat_map(|v| v.iter().cloned())
        .filter(|c| !c.is_zero() && !set.contains_quotient(c))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nonzero_inner_coordinates_are_subdeterminant_quotients(p in h_polyhedron(2, 3)) {
        prop_assert_eq!(nonzero_outside_qsd(&p), Vec::<Rational>::new());
    }
}

#[test]
fn catalog_inner_coordinates_are_subdeterminant_quotients() {
    for path in common::catalog_files("hrep") {
        let text = std::fs::read_to_string(&path).unwrap();
        let ProblemFile::HPolyhedron(p) = parse(&text).unwrap() else {
            panic!("{} is not an H-rep", path.display());
        };
        assert!(nonzero_outside_qsd(&p).is_empty(), "{}", path.display());
    }
}
