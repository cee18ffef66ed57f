mod common;

use common::*;
use num_traits::{One, Zero};
use proptest::prelude::*;
use toepfree::nc_lattice::{
    enumerate_nc, enumerate_nc_even, interleave, kreweras, leq, mobius, zeta, NcLattice, NcPartition,
};
use toepfree::{Error, Rational};

fn blocks_of(p: &NcPartition) -> Vec<Vec<usize>> {
    p.blocks().to_vec()
}

fn sorted(mut parts: Vec<Vec<Vec<usize>>>) -> Vec<Vec<Vec<usize>>> {
    for p in &mut parts {
        p.sort();
    }
    parts.sort();
    parts
}

#[test]
fn enumeration_matches_brute_force() {
    for n in 1..=8 {
        let ours: Vec<_> = enumerate_nc(n).unwrap().iter().map(blocks_of).collect();
        assert_eq!(ours.len() as u64, catalan(n), "n = {n}");
        let mut canonical = ours.clone();
        canonical.sort();
        assert_eq!(ours, canonical, "canonical order, n = {n}");
        assert_eq!(sorted(ours), sorted(brute_nc(n)), "n = {n}");
    }
}

#[test]
fn order_matches_refinement() {
    for n in 1..=5 {
        let parts = enumerate_nc(n).unwrap();
        for a in &parts {
            for b in &parts {
                assert_eq!(leq(a, b).unwrap(), refines(a.blocks(), b.blocks()));
            }
        }
    }
}

#[test]
fn zeta_mobius_inverse_both_sides() {
    for n in 1..=5 {
        let parts = enumerate_nc(n).unwrap();
        for a in &parts {
            for c in &parts {
                let mut left = Rational::zero();
                let mut right = Rational::zero();
                for b in &parts {
                    left += zeta(a, b).unwrap() * mobius(b, c).unwrap();
                    right += mobius(a, b).unwrap() * zeta(b, c).unwrap();
                }
                let want = if a == c { Rational::one() } else { Rational::zero() };
                assert_eq!(left, want);
                assert_eq!(right, want);
            }
        }
    }
}

#[test]
fn mobius_to_top_matches_oracle() {
    for n in 1..=6 {
        let lattice = NcLattice::get(n).unwrap();
        let parts: Vec<_> = lattice.elements().iter().map(blocks_of).collect();
        let oracle = mobius_to_top_oracle(&parts, lattice.top());
        assert_eq!(lattice.mobius_to_top(), &oracle[..], "n = {n}");
    }
}

#[test]
fn mobius_bottom_top_is_signed_catalan() {
    for n in 1..=7 {
        let m = mobius(&NcPartition::zero(n), &NcPartition::one(n)).unwrap();
        let sign = if n % 2 == 1 { 1 } else { -1 };
        assert_eq!(m, q(sign * catalan(n - 1) as i64), "n = {n}");
    }
}

#[test]
fn kreweras_matches_interleaving_oracle() {
    for n in 1..=6 {
        for p in enumerate_nc(n).unwrap() {
            assert_eq!(blocks_of(&kreweras(&p)), kreweras_oracle(p.blocks(), n), "{p}");
        }
    }
}

#[test]
fn kreweras_is_bijective_and_counts_blocks() {
    for n in 1..=7 {
        let parts = enumerate_nc(n).unwrap();
        let mut images: Vec<_> = parts.iter().map(kreweras).collect();
        for (p, k) in parts.iter().zip(&images) {
            assert_eq!(p.block_count() + k.block_count(), n + 1);
            assert!(interleave(p, k).is_ok());
        }
        images.sort();
        assert_eq!(images, parts);
    }
}

#[test]
fn kreweras_squared_is_rotation() {
    // Kr(Kr(pi)) is pi rotated by one position
    for n in 2..=6 {
        for p in enumerate_nc(n).unwrap() {
            let twice = kreweras(&kreweras(&p));
            let rotated: Vec<Vec<usize>> = p
                .blocks()
                .iter()
                .map(|b| b.iter().map(|&x| if x == 1 { n } else { x - 1 }).collect())
                .collect();
            assert_eq!(twice, NcPartition::new(n, rotated).unwrap());
        }
    }
}

#[test]
fn even_partitions() {
    for m in [2, 4, 6, 8] {
        let even = enumerate_nc_even(m).unwrap();
        let brute = brute_nc(m).into_iter().filter(|p| p.iter().all(|b| b.len() % 2 == 0)).count();
        assert_eq!(even.len(), brute);
    }
    assert_eq!(enumerate_nc_even(5), Err(Error::OddSize(5)));
}

#[test]
fn caps() {
    assert!(matches!(enumerate_nc(11), Err(Error::CapExceeded { .. })));
    assert!(matches!(NcLattice::get(13), Err(Error::CapExceeded { .. })));
    assert!(matches!(enumerate_nc(0), Err(Error::CapExceeded { .. })));
}

fn arb_nc(n: usize) -> impl Strategy<Value = NcPartition> {
    let parts = enumerate_nc(n).unwrap();
    (0..parts.len()).prop_map(move |i| parts[i].clone())
}

proptest! {
    #[test]
    fn json_roundtrip(p in (1usize..=7).prop_flat_map(arb_nc)) {
        let text = p.to_json_string();
        prop_assert_eq!(NcPartition::from_json_str(&text).unwrap(), p);
    }

    #[test]
    fn interleave_with_complement_is_noncrossing(p in (1usize..=7).prop_flat_map(arb_nc)) {
        let k = kreweras(&p);
        let joined = interleave(&p, &k).unwrap();
        prop_assert!(is_noncrossing(joined.blocks()));
        prop_assert_eq!(joined.block_count(), p.n() + 1);
    }
}
