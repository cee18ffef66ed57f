//! Shared oracles and seeded generators for the integration suites.
//!
//! The oracles here are deliberately naive: set partitions by restricted
//! growth strings, crossing checks straight from the definition, moments by
//! brute-force sums. They share no code with the library beyond its types.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toepfree::ncpoly::{Alphabet, NcPolynomial, Symbol, Word};
use toepfree::scalar_space::{CumulantSpec, MomentFunctional};
use toepfree::series::{BSeries, IndexWord};
use toepfree::toeplitz::{BScalar, TVariable};
use toepfree::Rational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qq(p: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(d))
}

pub fn bs(v: &[i64]) -> BScalar {
    BScalar::new(v.iter().map(|&x| q(x)).collect()).unwrap()
}

// ---------------------------------------------------------------- lattice

pub fn catalan(n: usize) -> u64 {
    let mut c = vec![1u64; n + 1];
    for m in 1..=n {
        c[m] = (0..m).map(|i| c[i] * c[m - 1 - i]).sum();
    }
    c[n]
}

/// Every set partition of `{1..n}` as sorted blocks, via restricted growth strings.
pub fn all_set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn go(i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        let n = labels.len();
        if i == n {
            let mut blocks = vec![Vec::new(); max + 1];
            for (p, &l) in labels.iter().enumerate() {
                blocks[l].push(p + 1);
            }
            out.push(blocks);
            return;
        }
        let top = if i == 0 { 0 } else { max + 1 };
        for l in 0..=top {
            labels[i] = l;
            go(i + 1, max.max(l), labels, out);
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    go(0, 0, &mut labels, &mut out);
    out
}

/// No `a < b < c < d` with `a, c` in one block and `b, d` in another.
pub fn is_noncrossing(blocks: &[Vec<usize>]) -> bool {
    for (i, v) in blocks.iter().enumerate() {
        for (j, w) in blocks.iter().enumerate() {
            if i == j {
                continue;
            }
            for &a in v {
                for &c in v {
                    for &b in w {
                        for &d in w {
                            if a < b && b < c && c < d {
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

pub fn brute_nc(n: usize) -> Vec<Vec<Vec<usize>>> {
    all_set_partitions(n).into_iter().filter(|p| is_noncrossing(p)).collect()
}

/// Refinement: every block of `a` lies inside a block of `b`.
pub fn refines(a: &[Vec<usize>], b: &[Vec<usize>]) -> bool {
    a.iter().all(|v| b.iter().any(|w| v.iter().all(|x| w.contains(x))))
}

/// The coarsest `sigma` whose interleaving with `pi` (pi on `2i-1`, sigma on
/// `2i`) is noncrossing.
pub fn kreweras_oracle(pi: &[Vec<usize>], n: usize) -> Vec<Vec<usize>> {
    let lifted_pi: Vec<Vec<usize>> = pi.iter().map(|b| b.iter().map(|&i| 2 * i - 1).collect()).collect();
    let mut best: Option<Vec<Vec<usize>>> = None;
    for sigma in brute_nc(n) {
        let mut union = lifted_pi.clone();
        union.extend(sigma.iter().map(|b| b.iter().map(|&i| 2 * i).collect::<Vec<_>>()));
        if !is_noncrossing(&union) {
            continue;
        }
        if best.as_ref().is_none_or(|b| b.len() > sigma.len()) {
            best = Some(sigma);
        }
    }
    let mut best = best.expect("the singleton partition always works");
    for b in &mut best {
        b.sort_unstable();
    }
    best.sort();
    best
}

// ---------------------------------------------------------------- scalar side

/// Random family layout: `families[f]` lists the generator names of family `f`.
pub struct World {
    pub alphabet: Arc<Alphabet>,
    pub symbols: Vec<Symbol>,
    pub family_of: Vec<usize>,
    pub functional: Arc<MomentFunctional>,
}

fn small_rational<R: Rng>(r: &mut R) -> Rational {
    let p = r.gen_range(-3..=3);
    let d = *[1, 1, 1, 2, 3].get(r.gen_range(0..5)).unwrap();
    qq(p, d)
}

/// Random cumulant table on `sizes.len()` families (family `f` has `sizes[f]`
/// generators). Each tuple inside a family of length `<= cap` gets a random
/// value with probability `density`.
pub fn random_world<R: Rng>(r: &mut R, sizes: &[usize], cap: usize, density: f64) -> World {
    let mut alphabet = Alphabet::new();
    let mut symbols = Vec::new();
    let mut family_of = Vec::new();
    for (f, &size) in sizes.iter().enumerate() {
        for g in 0..size {
            symbols.push(alphabet.add(&format!("g{f}_{g}"), &format!("F{f}")).unwrap());
            family_of.push(f);
        }
    }
    let mut spec = CumulantSpec::new(cap).unwrap();
    for f in 0..sizes.len() {
        let members: Vec<Symbol> =
            symbols.iter().zip(&family_of).filter(|(_, &g)| g == f).map(|(s, _)| *s).collect();
        let mut layer: Vec<Vec<Symbol>> = vec![vec![]];
        for _ in 0..cap {
            layer = layer
                .iter()
                .flat_map(|t| {
                    members.iter().map(move |s| {
                        let mut t = t.clone();
                        t.push(*s);
                        t
                    })
                })
                .collect();
            for t in &layer {
                if r.gen_bool(density) {
                    let v = small_rational(r);
                    if !v.is_zero() {
                        spec.set(&alphabet, t, v).unwrap();
                    }
                }
            }
        }
    }
    let alphabet = Arc::new(alphabet);
    let functional = Arc::new(MomentFunctional::new(alphabet.clone(), spec));
    World { alphabet, symbols, family_of, functional }
}

/// Moment of a word by brute force over all set partitions, discarding the
/// crossing ones, with cumulants read straight from the table.
pub fn brute_moment(world: &World, word: &[Symbol]) -> Rational {
    let n = word.len();
    if n == 0 {
        return Rational::one();
    }
    let spec = world.functional.spec();
    let mut total = Rational::zero();
    for p in all_set_partitions(n) {
        if !is_noncrossing(&p) {
            continue;
        }
        let mut term = Rational::one();
        for block in &p {
            let key: Vec<Symbol> = block.iter().map(|&i| word[i - 1]).collect();
            match spec.get(&key) {
                Some(k) => term *= k,
                None => {
                    term = Rational::zero();
                    break;
                }
            }
        }
        total += term;
    }
    total
}

pub fn brute_phi(world: &World, p: &NcPolynomial) -> Rational {
    p.terms().map(|(w, c)| c * brute_moment(world, w.letters())).sum()
}

/// Random polynomial of degree at most one in the generators listed.
pub fn random_linear<R: Rng>(r: &mut R, pool: &[Symbol], max_terms: usize) -> NcPolynomial {
    let mut p = NcPolynomial::zero();
    if r.gen_bool(0.3) {
        p = p + NcPolynomial::constant(small_rational(r));
    }
    for _ in 0..r.gen_range(0..=max_terms) {
        let s = pool[r.gen_range(0..pool.len())];
        p = p + NcPolynomial::generator(s).scale(&small_rational(r));
    }
    p
}

/// Random polynomial of degree at most `degree` with a few terms.
pub fn random_poly<R: Rng>(r: &mut R, pool: &[Symbol], degree: usize, max_terms: usize) -> NcPolynomial {
    let terms = (0..r.gen_range(0..=max_terms)).map(|_| {
        let len = r.gen_range(0..=degree);
        let w: Word = (0..len).map(|_| pool[r.gen_range(0..pool.len())]).collect();
        (w, small_rational(r))
    });
    NcPolynomial::from_terms(terms)
}

pub fn random_tvar<R: Rng>(r: &mut R, order: usize, pool: &[Symbol], max_terms: usize) -> TVariable {
    TVariable::new((0..order).map(|_| random_linear(r, pool, max_terms)).collect()).unwrap()
}

pub fn random_tvar_poly<R: Rng>(r: &mut R, order: usize, pool: &[Symbol], degree: usize) -> TVariable {
    TVariable::new((0..order).map(|_| random_poly(r, pool, degree, 3)).collect()).unwrap()
}

pub fn random_bscalar<R: Rng>(r: &mut R, order: usize) -> BScalar {
    BScalar::new((0..order).map(|_| small_rational(r)).collect()).unwrap()
}

pub fn random_series<R: Rng>(r: &mut R, s: usize, order: usize, degree: usize) -> BSeries {
    let mut out = BSeries::new(s, order, degree).unwrap();
    for w in IndexWord::all(s, degree) {
        if r.gen_bool(0.6) {
            out.set(w, random_bscalar(r, order)).unwrap();
        }
    }
    out
}

/// Generators of family `f`.
pub fn family(world: &World, f: usize) -> Vec<Symbol> {
    world.symbols.iter().zip(&world.family_of).filter(|(_, &g)| g == f).map(|(s, _)| *s).collect()
}

// ---------------------------------------------------------------- Toeplitz side

/// `N x N` upper-triangular Toeplitz matrix product, read back from row 0.
pub fn matrix_product(x: &TVariable, y: &TVariable) -> Vec<NcPolynomial> {
    let n = x.order();
    let at = |v: &TVariable, r: usize, c: usize| {
        if c < r {
            NcPolynomial::zero()
        } else {
            v.entries()[c - r].clone()
        }
    };
    let mut row = Vec::with_capacity(n);
    for c in 0..n {
        let mut acc = NcPolynomial::zero();
        for k in 0..n {
            acc = acc + &at(x, 0, k) * &at(y, k, c);
        }
        row.push(acc);
    }
    row
}

/// `K_n` straight from the definition in `B = C[t]/t^N`: moments of every
/// block multiplied as truncated polynomials, weighted by the Möbius values
/// obtained here by inverting the zeta matrix of the brute-force lattice.
pub fn cumulant_oracle(
    world: &World,
    vars: &[TVariable],
    idx: &[usize],
) -> BScalar {
    let n = idx.len();
    let order = vars[0].order();
    let parts = brute_nc(n);
    let top = parts.iter().position(|p| p.len() == 1).unwrap();
    let mu = mobius_to_top_oracle(&parts, top);
    let moment = |sub: &[usize]| -> Vec<Rational> {
        let mut chain = vars[sub[0]].clone();
        for &i in &sub[1..] {
            chain = TVariable::new(matrix_product(&chain, &vars[i])).unwrap();
        }
        chain.entries().iter().map(|p| brute_phi(world, p)).collect()
    };
    let mut total = vec![Rational::zero(); order];
    for (p, m) in parts.iter().zip(&mu) {
        if m.is_zero() {
            continue;
        }
        let mut acc = vec![Rational::zero(); order];
        acc[0] = m.clone();
        for block in p {
            let sub: Vec<usize> = block.iter().map(|&i| idx[i - 1]).collect();
            let mv = moment(&sub);
            let mut next = vec![Rational::zero(); order];
            for a in 0..order {
                for b in 0..order - a {
                    next[a + b] += &acc[a] * &mv[b];
                }
            }
            acc = next;
        }
        for (t, a) in total.iter_mut().zip(acc) {
            *t += a;
        }
    }
    BScalar::new(total).unwrap()
}

/// `mu(pi, top)` for every `pi` by solving `sum_{pi <= sigma} mu(sigma, top) = delta`.
pub fn mobius_to_top_oracle(parts: &[Vec<Vec<usize>>], top: usize) -> Vec<Rational> {
    let mut order: Vec<usize> = (0..parts.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(parts[i].len()));
    order.reverse();
    let mut mu: BTreeMap<usize, Rational> = BTreeMap::new();
    for &i in &order {
        let value = if i == top {
            Rational::one()
        } else {
            let s: Rational = mu
                .iter()
                .filter(|(&j, _)| j != i && refines(&parts[i], &parts[j]))
                .map(|(_, v)| v.clone())
                .sum();
            -s
        };
        mu.insert(i, value);
    }
    (0..parts.len()).map(|i| mu[&i].clone()).collect()
}
