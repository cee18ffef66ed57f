mod common;

use common::*;
use num_traits::Zero;
use rand::Rng;
use toepfree::ncpoly::{NcPolynomial, Symbol, Word};
use toepfree::scalar_space::{CumulantSpec, Distribution, MomentFunctional};
use toepfree::{Alphabet, Error, Rational};

fn words(pool: &[Symbol], len: usize) -> Vec<Vec<Symbol>> {
    let mut layer: Vec<Vec<Symbol>> = vec![vec![]];
    for _ in 0..len {
        layer = layer
            .iter()
            .flat_map(|w| {
                pool.iter().map(move |s| {
                    let mut w = w.clone();
                    w.push(*s);
                    w
                })
            })
            .collect();
    }
    layer
}

#[test]
fn moments_match_brute_force() {
    let mut r = rng(11);
    for _ in 0..10 {
        let world = random_world(&mut r, &[2, 1], 5, 0.5);
        for len in 1..=5 {
            for w in words(&world.symbols, len) {
                let got = world.functional.phi_word(&Word::new(w.clone())).unwrap();
                assert_eq!(got, brute_moment(&world, &w), "{w:?}");
            }
        }
    }
}

#[test]
fn cumulants_recover_the_table() {
    let mut r = rng(12);
    for case in 0..50 {
        let cap = 1 + case % 6;
        let world = random_world(&mut r, &[2, 1], cap, 0.6);
        let spec = world.functional.spec();
        for len in 1..=cap.min(4) {
            for w in words(&world.symbols, len) {
                let args: Vec<NcPolynomial> = w.iter().map(|&s| NcPolynomial::generator(s)).collect();
                let got = world.functional.cumulant(&args).unwrap();
                let want = spec.get(&w).cloned().unwrap_or_else(Rational::zero);
                assert_eq!(got, want, "case {case}, {w:?}");
            }
        }
    }
}

#[test]
fn cumulant_is_multilinear() {
    let mut r = rng(13);
    for _ in 0..20 {
        let world = random_world(&mut r, &[2, 2], 4, 0.5);
        let n = r.gen_range(1..=3);
        let args: Vec<NcPolynomial> = (0..n).map(|_| random_poly(&mut r, &world.symbols, 1, 3)).collect();
        let extra = random_poly(&mut r, &world.symbols, 1, 2);
        let c = qq(r.gen_range(-3..=3), r.gen_range(1..=3));
        let slot = r.gen_range(0..n);
        let mut combined = args.clone();
        combined[slot] = &args[slot].scale(&c) + &extra;
        let mut replaced = args.clone();
        replaced[slot] = extra;
        let f = &world.functional;
        let lhs = f.cumulant(&combined).unwrap();
        let rhs = c * f.cumulant(&args).unwrap() + f.cumulant(&replaced).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn mixed_cumulants_of_free_families_vanish() {
    let mut r = rng(14);
    let world = random_world(&mut r, &[2, 2], 6, 0.3);
    let (f0, f1) = (family(&world, 0), family(&world, 1));
    for _ in 0..30 {
        let a = random_poly(&mut r, &f0, 2, 3);
        let b = random_poly(&mut r, &f1, 2, 3);
        assert!(world.functional.cumulant(&[a.clone(), b.clone()]).unwrap().is_zero());
        assert!(world.functional.cumulant(&[a.clone(), b.clone(), a.clone()]).unwrap().is_zero());
    }
}

#[test]
fn constants_have_no_higher_cumulants() {
    let mut r = rng(15);
    let world = random_world(&mut r, &[2], 4, 0.7);
    let x = NcPolynomial::generator(world.symbols[0]);
    let one = NcPolynomial::one();
    assert!(world.functional.cumulant(&[x.clone(), one.clone()]).unwrap().is_zero());
    assert!(world.functional.cumulant(&[one.clone(), x, one]).unwrap().is_zero());
}

#[test]
fn builtin_distributions() {
    let mut a = Alphabet::new();
    let s = a.add("s", "S").unwrap();
    let p = a.add("p", "P").unwrap();
    let mut spec = CumulantSpec::new(8).unwrap();
    spec.set_distribution(&a, s, &Distribution::Semicircular(q(1))).unwrap();
    spec.set_distribution(&a, p, &Distribution::FreePoisson(q(1))).unwrap();
    let f = MomentFunctional::new(std::sync::Arc::new(a), spec);
    // even semicircle moments are Catalan numbers, free Poisson moments with rate 1 too
    for n in 1..=8 {
        let sn = Word::new(vec![s; n]);
        let pn = Word::new(vec![p; n]);
        let want_s = if n % 2 == 0 { catalan(n / 2) } else { 0 };
        assert_eq!(f.phi_word(&sn).unwrap(), q(want_s as i64));
        assert_eq!(f.phi_word(&pn).unwrap(), q(catalan(n) as i64));
    }
    // freeness with phi(s) = 0: phi(s p s p) = phi(s^2) phi(p)^2
    assert_eq!(f.phi_word(&Word::new(vec![s, p, s, p])).unwrap(), q(1));
    // phi(s s p p) = phi(s^2) phi(p^2) = 1 * 2
    assert_eq!(f.phi_word(&Word::new(vec![s, s, p, p])).unwrap(), q(2));
}

#[test]
fn caps_are_enforced() {
    let mut r = rng(16);
    let world = random_world(&mut r, &[1], 3, 1.0);
    let x = world.symbols[0];
    assert!(matches!(
        world.functional.phi_word(&Word::new(vec![x; 4])),
        Err(Error::CapExceeded { requested: 4, cap: 3 })
    ));
    assert!(CumulantSpec::new(9).is_err());
    assert!(CumulantSpec::new(0).is_err());
}
