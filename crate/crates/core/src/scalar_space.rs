//! Scalar noncommutative probability space built from free cumulants.
//!
//! Distributions are given by their free cumulants, family by family; joint
//! cumulants that mix families are identically zero. Moments are then sums
//! over `NC(n)` of block products of cumulants, and cumulants of arbitrary
//! polynomial arguments are recovered by Möbius inversion.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};

use crate::error::{check_dims, Error, Result};
use crate::nc_lattice::{NcLattice, NcPartition};
use crate::ncpoly::{Alphabet, NcPolynomial, Symbol, Word};
use crate::rational::Rational;

pub const DEFAULT_DEGREE_CAP: usize = 6;
pub const MAX_DEGREE_CAP: usize = 8;

/// Single-generator distributions, described by their cumulant sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distribution {
    /// `k_2 = variance`, all other cumulants vanish.
    Semicircular(Rational),
    /// `k_n = rate` for every order.
    FreePoisson(Rational),
    /// `k_1 = value`.
    Constant(Rational),
    /// Explicit `order -> k_order` table; missing orders are zero.
    Custom(BTreeMap<usize, Rational>),
}

impl Distribution {
    /// Builds a one-parameter builtin by name.
    pub fn builtin(kind: &str, param: Rational) -> Result<Self> {
        match kind {
            "semicircular" => Ok(Distribution::Semicircular(param)),
            "free_poisson" => Ok(Distribution::FreePoisson(param)),
            "constant" => Ok(Distribution::Constant(param)),
            other => Err(Error::UnknownDistribution(other.to_string())),
        }
    }

    /// Nonzero cumulants up to `degree_cap`, keyed by order.
    pub fn cumulants(&self, degree_cap: usize) -> BTreeMap<usize, Rational> {
        let mut out = BTreeMap::new();
        let mut put = |order: usize, v: &Rational| {
            if order >= 1 && order <= degree_cap && !v.is_zero() {
                out.insert(order, v.clone());
            }
        };
        match self {
            Distribution::Semicircular(v) => put(2, v),
            Distribution::FreePoisson(rate) => (1..=degree_cap).for_each(|n| put(n, rate)),
            Distribution::Constant(c) => put(1, c),
            Distribution::Custom(table) => table.iter().for_each(|(n, v)| put(*n, v)),
        }
        out
    }
}

/// Joint free cumulants of tuples of generators, each tuple inside one family.
#[derive(Clone, Debug)]
pub struct CumulantSpec {
    degree_cap: usize,
    table: HashMap<Vec<Symbol>, Rational>,
}

impl CumulantSpec {
    pub fn new(degree_cap: usize) -> Result<Self> {
        if degree_cap == 0 || degree_cap > MAX_DEGREE_CAP {
            return Err(Error::CapExceeded { requested: degree_cap, cap: MAX_DEGREE_CAP });
        }
        Ok(CumulantSpec { degree_cap, table: HashMap::new() })
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    /// Records `k_n(tuple) = value`. The tuple must stay inside one family.
    pub fn set(&mut self, alphabet: &Alphabet, tuple: &[Symbol], value: Rational) -> Result<()> {
        if tuple.is_empty() {
            return Err(Error::Precondition("cumulant tuple must be nonempty".into()));
        }
        if tuple.len() > self.degree_cap {
            return Err(Error::CapExceeded { requested: tuple.len(), cap: self.degree_cap });
        }
        let family = alphabet.family_index(tuple[0]);
        if tuple.iter().any(|s| alphabet.family_index(*s) != family) {
            return Err(Error::Precondition(
                "joint cumulants across families are zero and cannot be set".into(),
            ));
        }
        if value.is_zero() {
            self.table.remove(tuple);
        } else {
            self.table.insert(tuple.to_vec(), value);
        }
        Ok(())
    }

    /// Installs the cumulant sequence of `dist` on the diagonal tuples of `sym`.
    pub fn set_distribution(&mut self, alphabet: &Alphabet, sym: Symbol, dist: &Distribution) -> Result<()> {
        for (order, value) in dist.cumulants(self.degree_cap) {
            self.set(alphabet, &vec![sym; order], value)?;
        }
        Ok(())
    }

    pub fn get(&self, tuple: &[Symbol]) -> Option<&Rational> {
        self.table.get(tuple)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<Symbol>, &Rational)> {
        self.table.iter()
    }
}

/// The moment functional `phi` on the free algebra over `alphabet`.
#[derive(Debug)]
pub struct MomentFunctional {
    alphabet: Arc<Alphabet>,
    spec: CumulantSpec,
    moments: RwLock<HashMap<Word, Rational>>,
    word_cumulants: RwLock<HashMap<Vec<Word>, Rational>>,
}

impl MomentFunctional {
    pub fn new(alphabet: Arc<Alphabet>, spec: CumulantSpec) -> Self {
        MomentFunctional {
            alphabet,
            spec,
            moments: RwLock::new(HashMap::new()),
            word_cumulants: RwLock::new(HashMap::new()),
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn spec(&self) -> &CumulantSpec {
        &self.spec
    }

    pub fn degree_cap(&self) -> usize {
        self.spec.degree_cap
    }

    fn check_cap(&self, n: usize) -> Result<()> {
        if n > self.spec.degree_cap {
            Err(Error::CapExceeded { requested: n, cap: self.spec.degree_cap })
        } else {
            Ok(())
        }
    }

    /// `phi(w) = sum over NC(|w|) of the product of block cumulants`.
    pub fn phi_word(&self, w: &Word) -> Result<Rational> {
        let n = w.degree();
        if n == 0 {
            return Ok(Rational::one());
        }
        self.check_cap(n)?;
        if let Some(v) = self.moments.read().unwrap().get(w) {
            return Ok(v.clone());
        }
        let letters = w.letters();
        let families: Vec<usize> = letters.iter().map(|s| self.alphabet.family_index(*s)).collect();
        let lattice = NcLattice::get(n)?;
        let mut total = Rational::zero();
        let mut key: Vec<Symbol> = Vec::with_capacity(n);
        'partitions: for pi in lattice.elements() {
            let mut term = Rational::one();
            for block in pi.blocks() {
                let fam = families[block[0] - 1];
                if block.iter().any(|&i| families[i - 1] != fam) {
                    continue 'partitions;
                }
                key.clear();
                key.extend(block.iter().map(|&i| letters[i - 1]));
                match self.spec.table.get(&key) {
                    Some(k) => term *= k,
                    None => continue 'partitions,
                }
            }
            total += term;
        }
        self.moments.write().unwrap().insert(w.clone(), total.clone());
        Ok(total)
    }

    /// Linear extension of [`phi_word`](Self::phi_word).
    pub fn phi(&self, p: &NcPolynomial) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (w, c) in p.terms() {
            acc += c * self.phi_word(w)?;
        }
        Ok(acc)
    }

    /// Product over the blocks of `pi` of `phi` of the in-order block product.
    pub fn phi_partition(&self, pi: &NcPartition, args: &[NcPolynomial]) -> Result<Rational> {
        check_dims(pi.n(), args.len())?;
        let mut acc = Rational::one();
        for block in pi.blocks() {
            let product = block
                .iter()
                .skip(1)
                .fold(args[block[0] - 1].clone(), |p, &i| &p * &args[i - 1]);
            acc *= self.phi(&product)?;
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    /// Free cumulant `k_n(args)` by Möbius inversion, expanded multilinearly
    /// over the words of each argument.
    pub fn cumulant(&self, args: &[NcPolynomial]) -> Result<Rational> {
        let n = args.len();
        if n == 0 {
            return Err(Error::Precondition("cumulant needs at least one argument".into()));
        }
        self.check_cap(n)?;
        if args.iter().any(NcPolynomial::is_zero) {
            return Ok(Rational::zero());
        }
        let slots: Vec<Vec<(&Word, &Rational)>> = args.iter().map(|p| p.terms().collect()).collect();
        let mut choice = vec![0usize; n];
        let mut words: Vec<Word> = Vec::with_capacity(n);
        let mut total = Rational::zero();
        loop {
            words.clear();
            let mut coeff = Rational::one();
            for (slot, &k) in slots.iter().zip(&choice) {
                words.push(slot[k].0.clone());
                coeff *= slot[k].1;
            }
            let value = self.word_cumulant(&words)?;
            if !value.is_zero() {
                total += coeff * value;
            }
            // odometer over the term choices
            let mut pos = n;
            loop {
                if pos == 0 {
                    return Ok(total);
                }
                pos -= 1;
                choice[pos] += 1;
                if choice[pos] < slots[pos].len() {
                    break;
                }
                choice[pos] = 0;
            }
        }
    }

    /// Cumulant of single words, one word per slot.
    pub fn word_cumulant(&self, words: &[Word]) -> Result<Rational> {
        let n = words.len();
        self.check_cap(n)?;
        if let Some(v) = self.word_cumulants.read().unwrap().get(words) {
            return Ok(v.clone());
        }
        let lattice = NcLattice::get(n)?;
        let mu = lattice.mobius_to_top();
        let mut total = Rational::zero();
        for (pi, m) in lattice.elements().iter().zip(mu) {
            let mut term = m.clone();
            for block in pi.blocks() {
                let joined: Word =
                    block.iter().flat_map(|&i| words[i - 1].letters().iter().copied()).collect();
                term *= self.phi_word(&joined)?;
                if term.is_zero() {
                    break;
                }
            }
            total += term;
        }
        self.word_cumulants.write().unwrap().insert(words.to_vec(), total.clone());
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn single(dist: Distribution) -> (MomentFunctional, NcPolynomial) {
        let mut a = Alphabet::new();
        let x = a.add("x", "F").unwrap();
        let mut spec = CumulantSpec::new(6).unwrap();
        spec.set_distribution(&a, x, &dist).unwrap();
        (MomentFunctional::new(Arc::new(a), spec), NcPolynomial::generator(x))
    }

    fn power(x: &NcPolynomial, n: usize) -> NcPolynomial {
        (0..n).fold(NcPolynomial::one(), |p, _| &p * x)
    }

    #[test]
    fn builtin_moments() {
        let (f, s) = single(Distribution::Semicircular(int(1)));
        assert_eq!(f.phi(&power(&s, 4)).unwrap(), int(2));
        assert_eq!(f.phi(&NcPolynomial::one()).unwrap(), int(1));
        assert_eq!(f.phi(&s.scale(&int(2))).unwrap(), int(0));
        assert_eq!(f.phi(&(&power(&s, 2) + &NcPolynomial::one())).unwrap(), int(2));

        let (f, x) = single(Distribution::FreePoisson(int(1)));
        assert_eq!(f.phi(&power(&x, 3)).unwrap(), int(5));
        assert_eq!(f.phi(&power(&x, 2)).unwrap(), int(2));

        let (f, c) = single(Distribution::Constant(int(3)));
        assert_eq!(f.phi(&power(&c, 2)).unwrap(), int(9));
    }

    #[test]
    fn builtin_tables() {
        assert_eq!(
            Distribution::Semicircular(int(1)).cumulants(6),
            BTreeMap::from([(2, int(1))])
        );
        assert_eq!(Distribution::FreePoisson(int(2)).cumulants(3).len(), 3);
        assert_eq!(
            Distribution::builtin("cauchy", int(1)),
            Err(Error::UnknownDistribution("cauchy".into()))
        );
    }

    #[test]
    fn partition_moments_and_cumulants() {
        let (f, s) = single(Distribution::Semicircular(int(1)));
        let args = vec![s.clone(), s.clone(), s.clone()];
        let pi = NcPartition::new(3, vec![vec![1, 3], vec![2]]).unwrap();
        assert_eq!(f.phi_partition(&pi, &args).unwrap(), int(0));
        assert_eq!(
            f.phi_partition(&NcPartition::one(3), &args).unwrap(),
            f.phi(&power(&s, 3)).unwrap()
        );
        assert!(f.phi_partition(&NcPartition::one(2), &args).is_err());
        assert_eq!(f.cumulant(&[s.clone(), s.clone()]).unwrap(), int(1));
        assert_eq!(f.cumulant(std::slice::from_ref(&s)).unwrap(), int(0));
        assert_eq!(f.cumulant(&vec![s.clone(); 4]).unwrap(), int(0));
    }

    #[test]
    fn mixed_cumulants_vanish() {
        let mut a = Alphabet::new();
        let x = a.add("x", "F1").unwrap();
        let y = a.add("y", "F2").unwrap();
        let mut spec = CumulantSpec::new(6).unwrap();
        spec.set_distribution(&a, x, &Distribution::FreePoisson(int(2))).unwrap();
        spec.set_distribution(&a, y, &Distribution::Semicircular(int(3))).unwrap();
        assert!(spec.set(&a, &[x, y], int(1)).is_err());
        let f = MomentFunctional::new(Arc::new(a), spec);
        let (px, py) = (NcPolynomial::generator(x), NcPolynomial::generator(y));
        assert_eq!(f.cumulant(&[px.clone(), py.clone()]).unwrap(), int(0));
        assert_eq!(f.phi(&(&px * &py)).unwrap(), int(0));
        assert_eq!(f.phi(&(&px * &px)).unwrap(), int(6));
    }

    #[test]
    fn cap_is_enforced() {
        let (f, s) = single(Distribution::Semicircular(int(1)));
        assert!(matches!(f.phi(&power(&s, 7)), Err(Error::CapExceeded { requested: 7, cap: 6 })));
        assert!(f.cumulant(&vec![s; 7]).is_err());
        assert!(CumulantSpec::new(9).is_err());
    }
}
