//! The free unital algebra over declared generators, with rational coefficients.

mod parser;

pub use parser::{parse_expr, ParseError};

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

/// Handle of a declared generator inside an [`Alphabet`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub id: String,
    pub family: String,
}

/// Declared generators, each tagged with the family it belongs to.
#[derive(Clone, Debug, Default)]
pub struct Alphabet {
    generators: Vec<Generator>,
    family_of: Vec<usize>,
    families: Vec<String>,
    by_name: HashMap<String, Symbol>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a generator. Ids are unique across all families.
    pub fn add(&mut self, id: &str, family: &str) -> Result<Symbol> {
        if !is_identifier(id) {
            return Err(Error::Precondition(format!("{id:?} is not a valid identifier")));
        }
        if family.is_empty() {
            return Err(Error::Precondition(format!("generator {id:?} has an empty family")));
        }
        if self.by_name.contains_key(id) {
            return Err(Error::Precondition(format!("duplicate generator {id:?}")));
        }
        let fam = match self.families.iter().position(|f| f == family) {
            Some(i) => i,
            None => {
                self.families.push(family.to_string());
                self.families.len() - 1
            }
        };
        let sym = Symbol(self.generators.len() as u32);
        self.generators.push(Generator { id: id.to_string(), family: family.to_string() });
        self.family_of.push(fam);
        self.by_name.insert(id.to_string(), sym);
        Ok(sym)
    }

    pub fn lookup(&self, id: &str) -> Option<Symbol> {
        self.by_name.get(id).copied()
    }

    pub fn generator(&self, sym: Symbol) -> &Generator {
        &self.generators[sym.index()]
    }

    pub fn name(&self, sym: Symbol) -> &str {
        &self.generators[sym.index()].id
    }

    /// Dense family index, in order of first declaration.
    pub fn family_index(&self, sym: Symbol) -> usize {
        self.family_of[sym.index()]
    }

    pub fn families(&self) -> &[String] {
        &self.families
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.generators.len() as u32).map(Symbol)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A monomial; the empty word is the unit of the algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Symbol>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Symbol] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.0.len() + other.0.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Finite rational combination of words. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct NcPolynomial {
    terms: BTreeMap<Word, Rational>,
}

impl NcPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit `1_A`.
    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(Word::empty(), c)
    }

    pub fn generator(sym: Symbol) -> Self {
        Self::monomial(Word(vec![sym]), Rational::one())
    }

    pub fn monomial(word: Word, coeff: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(word, coeff);
        }
        NcPolynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest word length; `0` for constants and for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::degree).max().unwrap_or(0)
    }

    /// `Some(c)` when the polynomial is `c * 1_A` (including `c = 0`).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Word::empty()).cloned(),
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, word: Word, coeff: &Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(word) {
            Entry::Vacant(v) => {
                v.insert(coeff.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> NcPolynomial {
        if c.is_zero() {
            return Self::zero();
        }
        NcPolynomial { terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect() }
    }

    /// Every letter occurring in any term, with repetition.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.terms.keys().flat_map(|w| w.letters().iter().copied())
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, alphabet }
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(w, c)| TermJson {
                word: w.letters().iter().map(|s| alphabet.name(*s).to_string()).collect(),
                coeff: format_rational(c),
            })
            .collect()
    }

    pub fn from_json(terms: &[TermJson], alphabet: &Alphabet) -> Result<Self> {
        let mut p = Self::zero();
        for t in terms {
            let word = t
                .word
                .iter()
                .map(|name| {
                    alphabet
                        .lookup(name)
                        .ok_or_else(|| ParseError::UnknownSymbol { name: name.clone(), pos: 0 })
                })
                .collect::<std::result::Result<Word, _>>()?;
            let coeff = parse_rational(&t.coeff)
                .ok_or_else(|| Error::Precondition(format!("invalid coefficient {:?}", t.coeff)))?;
            p.add_term(word, &coeff);
        }
        Ok(p)
    }
}

/// JSON form of one term: `{"word": ["g1", "g2"], "coeff": "3/2"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub word: Vec<String>,
    pub coeff: String,
}

impl Add for &NcPolynomial {
    type Output = NcPolynomial;
    fn add(self, rhs: &NcPolynomial) -> NcPolynomial {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl Add for NcPolynomial {
    type Output = NcPolynomial;
    fn add(mut self, rhs: NcPolynomial) -> NcPolynomial {
        for (w, c) in rhs.terms {
            self.add_term(w, &c);
        }
        self
    }
}

impl Neg for &NcPolynomial {
    type Output = NcPolynomial;
    fn neg(self) -> NcPolynomial {
        NcPolynomial { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }
}

impl Neg for NcPolynomial {
    type Output = NcPolynomial;
    fn neg(self) -> NcPolynomial {
        -&self
    }
}

impl Sub for &NcPolynomial {
    type Output = NcPolynomial;
    fn sub(self, rhs: &NcPolynomial) -> NcPolynomial {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), &-c);
        }
        out
    }
}

impl Mul for &NcPolynomial {
    type Output = NcPolynomial;
    fn mul(self, rhs: &NcPolynomial) -> NcPolynomial {
        let mut out = NcPolynomial::zero();
        for (w, c) in &self.terms {
            for (v, d) in &rhs.terms {
                out.add_term(w.concat(v), &(c * d));
            }
        }
        out
    }
}

impl Mul for NcPolynomial {
    type Output = NcPolynomial;
    fn mul(self, rhs: NcPolynomial) -> NcPolynomial {
        &self * &rhs
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a NcPolynomial,
    alphabet: &'a Alphabet,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (i, (word, coeff)) in self.poly.terms.iter().enumerate() {
            let negative = coeff < &Rational::zero();
            let magnitude = if negative { -coeff } else { coeff.clone() };
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut first = true;
            if word.is_empty() || !magnitude.is_one() {
                f.write_str(&format_rational(&magnitude))?;
                first = false;
            }
            for sym in word.letters() {
                if !first {
                    f.write_str("*")?;
                }
                f.write_str(self.alphabet.name(*sym))?;
                first = false;
            }
        }
        Ok(())
    }
}
