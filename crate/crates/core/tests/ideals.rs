//! Cross-module properties of generated ideals and identity ideals.

use num_bigint::BigInt;
use oplab::algebra::{grassmann_algebra, is_identity, matrix_algebra, DEFAULT_BUDGET};
use oplab::free::{phi, phi_inv};
use oplab::ideal::cache::{read_slice, write_slice};
use oplab::ideal::{
    ideal_slice_closure, ideal_slice_spanning, membership, omega_slice, psi_slice,
    verify_ideal_closure, IdealSlice, IdentityTower,
};
use oplab::perm::factorial;
use oplab::{Element, Generators, Mode, Permutation, Rational};
use proptest::prelude::*;

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A nonzero element of arity 1..=3 with small integer coefficients.
fn element() -> impl Strategy<Value = Element> {
    (1usize..=3).prop_flat_map(|l| {
        prop::collection::vec(-2i64..=2, factorial(l)).prop_filter_map("nonzero", move |coeffs| {
            let terms: Vec<_> = Permutation::all(l).zip(coeffs).map(|(s, c)| (s, q(c))).collect();
            let e = Element::from_terms(l, terms).unwrap();
            (!e.is_zero()).then_some(e)
        })
    })
}

fn mode() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Unital), Just(Mode::Nonunital)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn spanning_matches_closure(theta in element(), mode in mode(), n in 0usize..=4) {
        let g = Generators::new(vec![theta], mode).unwrap();
        prop_assert_eq!(ideal_slice_spanning(&g, n), ideal_slice_closure(&g, n, 2));
    }

    #[test]
    fn slices_are_symmetric_and_contain_generators(theta in element(), mode in mode()) {
        let g = Generators::new(vec![theta.clone()], mode).unwrap();
        let slice = ideal_slice_spanning(&g, theta.arity());
        prop_assert!(slice.is_symmetric());
        prop_assert!(slice.contains(&theta).unwrap());
        prop_assert!(membership(&theta, &g));
    }

    #[test]
    fn generated_slices_are_closed(theta in element(), mode in mode()) {
        let g = Generators::new(vec![theta], mode).unwrap();
        let slices = (mode.min_arity()..=4).map(|n| (n, ideal_slice_spanning(&g, n))).collect();
        prop_assert!(verify_ideal_closure(&slices, mode, 4).unwrap().closed());
    }

    #[test]
    fn nonunital_ideal_is_inside_unital(theta in element(), n in 1usize..=4) {
        let unital = Generators::new(vec![theta.clone()], Mode::Unital).unwrap();
        let nonunital = Generators::new(vec![theta], Mode::Nonunital).unwrap();
        let small = ideal_slice_spanning(&nonunital, n);
        prop_assert!(small.is_subspace_of(&ideal_slice_spanning(&unital, n)).unwrap());
    }

    #[test]
    fn adding_a_generator_only_grows(a in element(), b in element(), n in 0usize..=4) {
        let g = Generators::new(vec![a], Mode::Unital).unwrap();
        let bigger = g.with(b).unwrap();
        prop_assert!(ideal_slice_spanning(&g, n).is_subspace_of(&ideal_slice_spanning(&bigger, n)).unwrap());
    }

    #[test]
    fn psi_of_omega_is_identity(theta in element(), mode in mode(), n in 1usize..=4) {
        let g = Generators::new(vec![theta], mode).unwrap();
        let slice = ideal_slice_spanning(&g, n);
        prop_assert_eq!(psi_slice(&omega_slice(&slice), mode, n).unwrap(), slice);
    }

    #[test]
    fn cache_text_round_trips(theta in element(), mode in mode(), n in 0usize..=4) {
        let g = Generators::new(vec![theta], mode).unwrap();
        let slice = ideal_slice_spanning(&g, n);
        let (back_mode, back) = read_slice(&write_slice(&slice, mode)).unwrap();
        prop_assert_eq!(back_mode, mode);
        prop_assert_eq!(back, slice);
    }
}

#[test]
fn identity_slices_hold_their_identities() {
    for algebra in [matrix_algebra(2).unwrap(), grassmann_algebra(3).unwrap()] {
        let mut tower = IdentityTower::new(&algebra, DEFAULT_BUDGET);
        for n in 0..=4 {
            let slice = tower.slice(n).unwrap();
            assert!(slice.is_symmetric());
            for e in slice.elements() {
                assert!(is_identity(&phi(&e), &algebra, DEFAULT_BUDGET).unwrap());
            }
            // every nonidentity found among basis elements stays outside
            for sigma in Permutation::all(n) {
                let basis = Element::basis(sigma);
                let holds = is_identity(&phi(&basis), &algebra, DEFAULT_BUDGET).unwrap();
                assert_eq!(holds, slice.contains(&basis).unwrap());
            }
        }
    }
}

#[test]
fn identity_ideals_grow_with_arity() {
    // the identities of an algebra form an ideal, so each slice feeds the next
    let e3 = grassmann_algebra(3).unwrap();
    let mut tower = IdentityTower::new(&e3, DEFAULT_BUDGET);
    for n in 1..=4 {
        let lower = tower.slice(n).unwrap();
        if lower.is_zero() {
            continue;
        }
        let g = Generators::new(lower.elements(), Mode::Unital).unwrap();
        let grown = ideal_slice_spanning(&g, n + 1);
        assert!(grown.is_subspace_of(&tower.slice(n + 1).unwrap()).unwrap());
    }
}

#[test]
fn standard_polynomial_of_degree_four_is_the_first_matrix_identity() {
    let m2 = matrix_algebra(2).unwrap();
    let mut tower = IdentityTower::new(&m2, DEFAULT_BUDGET);
    let st4 = Element::standard_polynomial(4);
    assert!(tower.slice(4).unwrap().contains(&st4).unwrap());
    assert!(tower.slice(3).unwrap().is_zero());
    let g = Generators::new(vec![st4], Mode::Unital).unwrap();
    assert!(ideal_slice_spanning(&g, 4).is_subspace_of(&tower.slice(4).unwrap()).unwrap());
}

#[test]
fn full_and_zero_slices() {
    let g = Generators::new(vec![Element::identity(1)], Mode::Nonunital).unwrap();
    for n in 1..=4 {
        assert_eq!(ideal_slice_spanning(&g, n), IdealSlice::full(n));
    }
    let e = Generators::empty(Mode::Unital);
    assert!(ideal_slice_spanning(&e, 3).is_zero());
    assert_eq!(phi_inv(&phi(&Element::identity(3))), Element::identity(3));
}
