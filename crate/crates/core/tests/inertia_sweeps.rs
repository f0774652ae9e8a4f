use galimage_core::field::{FqElem, FqField};
use galimage_core::inertia::*;
use galimage_core::primes::is_prime;
use proptest::prelude::*;

#[test]
fn cubic_shapes_are_always_orderable() {
    for l in [11u64, 13] {
        let f = FqField::new(l, 2).unwrap();
        let units: Vec<FqElem> = f.elements().filter(|x| !x.is_zero()).collect();
        for &a in &units {
            let a2 = f.mul(a, a);
            for &d in &units {
                let d2 = f.mul(d, d);
                let s = [f.mul(a2, a), f.mul(a2, d), f.mul(a, d2), f.mul(d2, d)];
                // reversed input so the identity ordering is not the only one tried
                let rev = [s[3], s[1], s[2], s[0]];
                assert_ne!(eigenvalue_system_admits_ordering(&f, rev), Ordering::NotOrderable);
            }
        }
    }
}

#[test]
fn no_twisted_cubic_up_to_97() {
    for l in (11..=97).filter(|&l| is_prime(l)) {
        match verify_no_twisted_cubic(l).unwrap() {
            CubicVerdict::Verified(w) => {
                assert_eq!(w.len(), 3);
                let f = FqField::new(l, 2).unwrap();
                for wi in &w {
                    let ev = [wi.eigenvalues[0], wi.eigenvalues[1], wi.eigenvalues[2], wi.eigenvalues[3]];
                    assert!(permutations4().iter().all(|p| !satisfies_cubic_relations(&f, p.map(|i| ev[i]))));
                }
            }
            v => panic!("l = {l}: {v:?}"),
        }
    }
}

#[test]
fn lower_bound_up_to_47() {
    for g in 1..=4u32 {
        for l in (g as u64 + 2..=47).filter(|&l| is_prime(l)) {
            match verify_lower_bound(l, g).unwrap() {
                LowerBoundVerdict::Verified { min_n, .. } => assert!(min_n >= (l - 1) as u128),
                v => panic!("l = {l}, g = {g}: {v:?}"),
            }
        }
    }
}

#[test]
fn surface_patterns_satisfy_counts() {
    for l in (11..=97).filter(|&l| is_prime(l)) {
        for p in enumerate_surface_patterns(l).unwrap() {
            let (m0, m1, m2) = p.counts();
            assert_eq!(m0 + m1 + 2 * m2, 4);
            assert_eq!(m1 + m2, 2);
            assert_eq!(p.dimension(), 4);
        }
    }
}

proptest! {
    #[test]
    fn level2_realization_is_frobenius_stable(idx in 0usize..12, k in 1u64..120) {
        let l = [11u64, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53][idx];
        let f = FqField::new(l, 2).unwrap();
        let n = l * l - 1;
        let g = f.pow(f.primitive_element(), k);
        prop_assume!(f.mult_order(g).unwrap() == n);
        let p = &enumerate_surface_patterns(l).unwrap()[0];
        let mut ev = realize_pattern(&f, p, g).unwrap();
        let mut frob: Vec<FqElem> = ev.iter().map(|&x| f.frobenius(x)).collect();
        ev.sort_by_key(|&x| f.index(x));
        frob.sort_by_key(|&x| f.index(x));
        prop_assert_eq!(ev, frob);
    }

    #[test]
    fn min_n_divides_group_exponent(l_idx in 0usize..6, g in 1u32..=3, pick in any::<prop::sample::Index>()) {
        let l = [5u64, 7, 11, 13, 17, 19][l_idx];
        prop_assume!(l >= g as u64 + 2);
        let pats = admissible_patterns(g);
        let p = pick.get(&pats);
        let (m, _) = exponent_model(l, p);
        if let ExponentResult::MinN(n) = minimal_projective_exponent(l, g, p).unwrap() {
            prop_assert_eq!(m % n, 0);
        }
    }
}
