//! Truncated `B`-valued formal series in `s` noncommuting indeterminates:
//! moment series, R-transforms, boxed convolution and the predicates built
//! on top of them (freeness, evenness, sparsity, compression).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{check_dims, Error, Result};
use crate::nc_lattice::{NcLattice, NcPartition};
use crate::ncpoly::{Alphabet, NcPolynomial};
use crate::rational::{format_rational, pow, Rational};
use crate::scalar_space::MomentFunctional;
use crate::toeplitz::{product_chain, t_cumulant, t_moment, expect, BScalar, TVariable};

/// A nonempty word `(i_1, ..., i_n)` of 0-based variable indices.
///
/// Ordered by length first, then lexicographically. Serialized 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexWord(Vec<usize>);

impl IndexWord {
    pub fn new(letters: Vec<usize>) -> Self {
        IndexWord(letters)
    }

    /// Builds from 1-based letters, as written in tables and JSON.
    pub fn from_one_based(letters: &[usize]) -> Option<Self> {
        letters.iter().map(|&i| i.checked_sub(1)).collect::<Option<Vec<_>>>().map(IndexWord)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    /// `idx|_V` for a block `V` of 1-based positions.
    pub fn restrict(&self, block: &[usize]) -> IndexWord {
        IndexWord(block.iter().map(|&p| self.0[p - 1]).collect())
    }

    /// Every word over `{0..s}` with length `1..=degree`, in canonical order.
    pub fn all(s: usize, degree: usize) -> Vec<IndexWord> {
        let mut out = Vec::new();
        let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..degree {
            layer = layer
                .iter()
                .flat_map(|w| {
                    (0..s).map(move |i| {
                        let mut w = w.clone();
                        w.push(i);
                        w
                    })
                })
                .collect();
            out.extend(layer.iter().cloned().map(IndexWord));
        }
        out
    }
}

impl Ord for IndexWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for IndexWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IndexWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(&self.one_based()).expect("integers serialize"))
    }
}

/// Element of the truncated series space: coefficients for words of length
/// at most `degree`. Absent words have zero coefficient; zeros are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSeries {
    vars: usize,
    order: usize,
    degree: usize,
    coefficients: BTreeMap<IndexWord, BScalar>,
}

impl BSeries {
    pub fn new(vars: usize, order: usize, degree: usize) -> Result<Self> {
        if vars == 0 || order == 0 || degree == 0 {
            return Err(Error::Precondition("series needs s, N, D >= 1".into()));
        }
        Ok(BSeries { vars, order, degree, coefficients: BTreeMap::new() })
    }

    /// Number of indeterminates `s`.
    pub fn vars(&self) -> usize {
        self.vars
    }

    /// Toeplitz order `N` of the coefficients.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Truncation degree `D`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficient(&self, word: &IndexWord) -> BScalar {
        self.coefficients.get(word).cloned().unwrap_or_else(|| BScalar::zero(self.order))
    }

    pub fn set(&mut self, word: IndexWord, value: BScalar) -> Result<()> {
        check_dims(self.order, value.order())?;
        if word.is_empty() || word.len() > self.degree {
            return Err(Error::Precondition(format!("word {word} is outside degrees 1..={}", self.degree)));
        }
        if let Some(&bad) = word.letters().iter().find(|&&i| i >= self.vars) {
            return Err(Error::BadIndex { index: bad, len: self.vars });
        }
        if value.is_zero() {
            self.coefficients.remove(&word);
        } else {
            self.coefficients.insert(word, value);
        }
        Ok(())
    }

    /// Stored (nonzero) coefficients in canonical word order.
    pub fn iter(&self) -> impl Iterator<Item = (&IndexWord, &BScalar)> {
        self.coefficients.iter()
    }

    /// Every word up to the truncation degree, zero coefficients included.
    pub fn dense(&self) -> Vec<(IndexWord, BScalar)> {
        IndexWord::all(self.vars, self.degree)
            .into_iter()
            .map(|w| {
                let c = self.coefficient(&w);
                (w, c)
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    fn same_shape(&self, other: &BSeries) -> Result<()> {
        check_dims(self.vars, other.vars)?;
        check_dims(self.order, other.order)?;
        check_dims(self.degree, other.degree)
    }

    /// Drops every coefficient of length above `degree`.
    pub fn truncate(&self, degree: usize) -> Result<BSeries> {
        let mut out = BSeries::new(self.vars, self.order, degree.min(self.degree))?;
        out.coefficients = self
            .coefficients
            .iter()
            .filter(|(w, _)| w.len() <= degree)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        Ok(out)
    }

    /// Series in `s + t` indeterminates: `self` on the first `s`, `other` on
    /// the last `t`, and zero on every word that mixes the two ranges.
    pub fn juxtapose(&self, other: &BSeries) -> Result<BSeries> {
        check_dims(self.order, other.order)?;
        check_dims(self.degree, other.degree)?;
        let mut out = BSeries::new(self.vars + other.vars, self.order, self.degree)?;
        for (w, c) in &self.coefficients {
            out.coefficients.insert(w.clone(), c.clone());
        }
        for (w, c) in &other.coefficients {
            let shifted = IndexWord(w.0.iter().map(|i| i + self.vars).collect());
            out.coefficients.insert(shifted, c.clone());
        }
        Ok(out)
    }

    fn block_product(&self, word: &IndexWord, pi: &NcPartition) -> BScalar {
        let mut acc = BScalar::unit(self.order);
        for block in pi.blocks() {
            match self.coefficients.get(&word.restrict(block)) {
                Some(c) => acc = acc.mul_unchecked(c),
                None => return BScalar::zero(self.order),
            }
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        let coefficients: Vec<Value> = self
            .coefficients
            .iter()
            .map(|(w, c)| json!({ "word": w.one_based(), "value": c.to_json() }))
            .collect();
        json!({ "s": self.vars, "N": self.order, "D": self.degree, "coefficients": coefficients })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let field = |name: &str| {
            value
                .get(name)
                .and_then(Value::as_u64)
                .map(|v| v as usize)
                .ok_or_else(|| Error::Precondition(format!("missing integer field {name:?}")))
        };
        let mut out = BSeries::new(field("s")?, field("N")?, field("D")?)?;
        let coefficients = value
            .get("coefficients")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Precondition("missing array field \"coefficients\"".into()))?;
        for entry in coefficients {
            let letters: Vec<usize> = entry
                .get("word")
                .and_then(Value::as_array)
                .and_then(|a| a.iter().map(|v| v.as_u64().map(|x| x as usize)).collect())
                .ok_or_else(|| Error::Precondition("invalid coefficient word".into()))?;
            let word = IndexWord::from_one_based(&letters)
                .ok_or_else(|| Error::Precondition("words are 1-based".into()))?;
            let value = BScalar::from_json(entry.get("value").unwrap_or(&Value::Null))?;
            out.set(word, value)?;
        }
        Ok(out)
    }

    /// CSV with header `word,entry,value`, one row per stored coefficient
    /// entry; `entry` is 1-based.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(["word", "entry", "value"]).expect("in-memory write");
        for (w, c) in &self.coefficients {
            for (j, v) in c.entries().iter().enumerate() {
                writer
                    .write_record([w.to_string(), (j + 1).to_string(), format_rational(v)])
                    .expect("in-memory write");
            }
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }
}

fn common_order(vars: &[TVariable]) -> Result<usize> {
    let first = vars.first().ok_or_else(|| Error::Precondition("need at least one variable".into()))?;
    for v in vars {
        check_dims(first.order(), v.order())?;
    }
    Ok(first.order())
}

fn series_from<F>(vars: &[TVariable], degree: usize, mut coefficient: F) -> Result<BSeries>
where
    F: FnMut(&[usize]) -> Result<BScalar>,
{
    let mut out = BSeries::new(vars.len(), common_order(vars)?, degree)?;
    for w in IndexWord::all(vars.len(), degree) {
        let c = coefficient(w.letters())?;
        out.set(w, c)?;
    }
    Ok(out)
}

/// Coefficient at `(i_1..i_n)` is the Toeplitz moment of that word.
pub fn moment_series(functional: &MomentFunctional, vars: &[TVariable], degree: usize) -> Result<BSeries> {
    series_from(vars, degree, |w| t_moment(functional, vars, w))
}

/// Coefficient at `(i_1..i_n)` is the Toeplitz cumulant `K_n` of that word.
pub fn r_transform(functional: &MomentFunctional, vars: &[TVariable], degree: usize) -> Result<BSeries> {
    series_from(vars, degree, |w| t_cumulant(functional, vars, w))
}

/// Moments from cumulants: `M(w) = sum_{pi in NC(n)} prod_{V in pi} R(w|_V)`.
pub fn moments_from_r(r: &BSeries) -> Result<BSeries> {
    let mut out = BSeries::new(r.vars, r.order, r.degree)?;
    for w in IndexWord::all(r.vars, r.degree) {
        let lattice = NcLattice::get(w.len())?;
        let mut acc = BScalar::zero(r.order);
        for pi in lattice.elements() {
            acc.add_assign(&r.block_product(&w, pi));
        }
        out.set(w, acc)?;
    }
    Ok(out)
}

/// Cumulants from moments: `R(w) = sum_{pi in NC(n)} mu(pi, 1_n) prod_{V in pi} M(w|_V)`.
pub fn r_from_moments(m: &BSeries) -> Result<BSeries> {
    let mut out = BSeries::new(m.vars, m.order, m.degree)?;
    for w in IndexWord::all(m.vars, m.degree) {
        let lattice = NcLattice::get(w.len())?;
        let mut acc = BScalar::zero(m.order);
        for (pi, mu) in lattice.elements().iter().zip(lattice.mobius_to_top()) {
            acc.add_assign(&m.block_product(&w, pi).scale(mu));
        }
        out.set(w, acc)?;
    }
    Ok(out)
}

pub fn series_add(f: &BSeries, g: &BSeries) -> Result<BSeries> {
    f.same_shape(g)?;
    let mut out = f.clone();
    for (w, c) in &g.coefficients {
        let sum = out.coefficient(w).add(c)?;
        out.set(w.clone(), sum)?;
    }
    Ok(out)
}

/// Boxed convolution, central form:
/// `(f [*] g)(w) = sum_{pi in NC(n)} f_pi(w) . g_{Kr(pi)}(w)`.
pub fn boxed_convolution(f: &BSeries, g: &BSeries) -> Result<BSeries> {
    f.same_shape(g)?;
    let mut out = BSeries::new(f.vars, f.order, f.degree)?;
    for w in IndexWord::all(f.vars, f.degree) {
        let lattice = NcLattice::get(w.len())?;
        let mut acc = BScalar::zero(f.order);
        for (i, pi) in lattice.elements().iter().enumerate() {
            let left = f.block_product(&w, pi);
            if left.is_zero() {
                continue;
            }
            let kr = &lattice.elements()[lattice.kreweras_idx(i)];
            acc.add_assign(&left.mul_unchecked(&g.block_product(&w, kr)));
        }
        out.set(w, acc)?;
    }
    Ok(out)
}

/// Names of the scalar families each Toeplitz variable draws its entries from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FamilyAssignment {
    families: BTreeMap<String, BTreeSet<String>>,
}

impl FamilyAssignment {
    pub fn new<'a, I>(alphabet: &Alphabet, vars: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, &'a TVariable)>,
    {
        let families = vars
            .into_iter()
            .map(|(name, var)| (name.to_string(), families_of(alphabet, var)))
            .collect();
        FamilyAssignment { families }
    }

    pub fn get(&self, name: &str) -> Option<&BTreeSet<String>> {
        self.families.get(name)
    }

    /// Whether the two named groups draw on disjoint family sets.
    pub fn disjoint(&self, left: &[&str], right: &[&str]) -> bool {
        let union = |names: &[&str]| -> BTreeSet<String> {
            names.iter().filter_map(|n| self.families.get(*n)).flatten().cloned().collect()
        };
        union(left).is_disjoint(&union(right))
    }
}

pub fn families_of(alphabet: &Alphabet, var: &TVariable) -> BTreeSet<String> {
    var.entries()
        .iter()
        .flat_map(NcPolynomial::symbols)
        .map(|s| alphabet.generator(s).family.clone())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessReport {
    pub free: bool,
    /// First mixed word (in canonical order) with a nonzero cumulant.
    pub witness: Option<IndexWord>,
}

/// Vanishing of every mixed cumulant between the two groups, up to `degree`.
/// Indices of the joined family are `group_a` first, then `group_b`.
pub fn check_freeness(
    functional: &MomentFunctional,
    group_a: &[TVariable],
    group_b: &[TVariable],
    degree: usize,
) -> Result<FreenessReport> {
    let vars: Vec<TVariable> = group_a.iter().chain(group_b).cloned().collect();
    common_order(&vars)?;
    let split = group_a.len();
    for w in IndexWord::all(vars.len(), degree) {
        let mixed = w.letters().iter().any(|&i| i < split) && w.letters().iter().any(|&i| i >= split);
        if !mixed {
            continue;
        }
        if !t_cumulant(functional, &vars, w.letters())?.is_zero() {
            return Ok(FreenessReport { free: false, witness: Some(w) });
        }
    }
    Ok(FreenessReport { free: true, witness: None })
}

/// `K_n(X, ..., X) = 0_B` for every odd `n <= degree`.
pub fn cumulant_evenness(functional: &MomentFunctional, x: &TVariable, degree: usize) -> Result<bool> {
    let vars = std::slice::from_ref(x);
    for n in (1..=degree).step_by(2) {
        if !t_cumulant(functional, vars, &vec![0; n])?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `E(X^n) = 0_B` for every odd `n <= degree`.
pub fn moment_evenness(functional: &MomentFunctional, x: &TVariable, degree: usize) -> Result<bool> {
    let vars = std::slice::from_ref(x);
    for n in (1..=degree).step_by(2) {
        if !t_moment(functional, vars, &vec![0; n])?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Evenness up to `degree`, with the cumulant and moment forms cross-checked.
pub fn check_even(functional: &MomentFunctional, x: &TVariable, degree: usize) -> Result<bool> {
    let by_cumulants = cumulant_evenness(functional, x, degree)?;
    let by_moments = moment_evenness(functional, x, degree)?;
    if by_cumulants != by_moments {
        return Err(Error::Inconsistent(format!(
            "cumulant evenness {by_cumulants} disagrees with moment evenness {by_moments}"
        )));
    }
    Ok(by_cumulants)
}

/// `K_m(X, ..., X)` summed over even-block partitions only. Requires `X` to
/// be even up to the functional's degree cap.
pub fn even_cumulant_restricted(functional: &MomentFunctional, x: &TVariable, m: usize) -> Result<BScalar> {
    if m % 2 == 1 {
        return Err(Error::OddSize(m));
    }
    if m == 0 || m > functional.degree_cap() {
        return Err(Error::CapExceeded { requested: m, cap: functional.degree_cap() });
    }
    if !check_even(functional, x, functional.degree_cap())? {
        return Err(Error::NotEven);
    }
    let vars = std::slice::from_ref(x);
    let powers: Vec<BScalar> =
        (1..=m).map(|k| t_moment(functional, vars, &vec![0; k])).collect::<Result<_>>()?;
    let lattice = NcLattice::get(m)?;
    let mut total = BScalar::zero(x.order());
    for (pi, mu) in lattice.elements().iter().zip(lattice.mobius_to_top()) {
        if !pi.has_only_even_blocks() {
            continue;
        }
        let term = pi
            .blocks()
            .iter()
            .fold(BScalar::scalar(x.order(), mu.clone()), |acc, b| acc.mul_unchecked(&powers[b.len() - 1]));
        total.add_assign(&term);
    }
    Ok(total)
}

/// One degree of the sparsity check for `R_A`, `A = (a_1, ..., a_N)` with
/// pairwise free entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsityCheck {
    pub degree: usize,
    pub actual: BScalar,
    /// `(phi(a_j))_j` at degree 1; `k_2(a_m, a_m)` at odd entries `j = 2m - 1`
    /// at degree 2; `(k_n(a_1, ..., a_1), 0, ..., 0)` from degree 3 on.
    pub stated: BScalar,
    /// Entry `j` (1-based) is `k_n(a_m, ..., a_m)` when `j = n(m - 1) + 1`
    /// and zero otherwise. Agrees with `stated` whenever `N <= n`, and for
    /// `n <= 2` always.
    pub exact: BScalar,
}

impl SparsityCheck {
    pub fn stated_holds(&self) -> bool {
        self.actual == self.stated
    }

    pub fn exact_holds(&self) -> bool {
        self.actual == self.exact
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsityReport {
    pub series: BSeries,
    pub checks: Vec<SparsityCheck>,
}

impl SparsityReport {
    /// Every degree matches the stated pattern.
    pub fn holds(&self) -> bool {
        self.checks.iter().all(SparsityCheck::stated_holds)
    }

    pub fn exact_holds(&self) -> bool {
        self.checks.iter().all(SparsityCheck::exact_holds)
    }

    /// Degrees where the stated pattern fails.
    pub fn failures(&self) -> Vec<usize> {
        self.checks.iter().filter(|c| !c.stated_holds()).map(|c| c.degree).collect()
    }
}

/// Computes `R_A` for `A = (a_1, ..., a_N)` whose entries are single
/// generators from pairwise distinct families, and compares every degree
/// with the free-family sparsity pattern.
pub fn free_family_sparsity(functional: &MomentFunctional, a: &TVariable, degree: usize) -> Result<SparsityReport> {
    let alphabet = functional.alphabet();
    let mut generators = Vec::with_capacity(a.order());
    for (j, entry) in a.entries().iter().enumerate() {
        let mut terms = entry.terms();
        let sym = match (terms.next(), terms.next()) {
            (Some((w, c)), None) if w.degree() == 1 && c.is_one() => w.letters()[0],
            _ => {
                return Err(Error::Precondition(format!(
                    "entry {} is not a single generator",
                    j + 1
                )))
            }
        };
        generators.push(sym);
    }
    let families: BTreeSet<usize> = generators.iter().map(|s| alphabet.family_index(*s)).collect();
    if families.len() != generators.len() {
        return Err(Error::Precondition("entries must come from pairwise distinct families".into()));
    }

    let series = r_transform(functional, std::slice::from_ref(a), degree)?;
    let order = a.order();
    let kappa = |m: usize, n: usize| -> Result<Rational> {
        functional.cumulant(&vec![NcPolynomial::generator(generators[m]); n])
    };
    let mut checks = Vec::with_capacity(degree);
    for n in 1..=degree {
        let actual = series.coefficient(&IndexWord(vec![0; n]));
        let stated: Vec<Rational> = match n {
            1 => {
                let first = expect(functional, a)?;
                first.entries().to_vec()
            }
            2 => (0..order)
                .map(|j| if j % 2 == 0 { kappa(j / 2, 2) } else { Ok(Rational::zero()) })
                .collect::<Result<_>>()?,
            _ => (0..order)
                .map(|j| if j == 0 { kappa(0, n) } else { Ok(Rational::zero()) })
                .collect::<Result<_>>()?,
        };
        let exact: Vec<Rational> = (0..order)
            .map(|j| if j % n == 0 { kappa(j / n, n) } else { Ok(Rational::zero()) })
            .collect::<Result<_>>()?;
        checks.push(SparsityCheck {
            degree: n,
            actual,
            stated: BScalar::new(stated)?,
            exact: BScalar::new(exact)?,
        });
    }
    Ok(SparsityReport { series, checks })
}

/// Symmetric R-transform by `b0`: coefficient at `(i_1..i_n)` is the cumulant
/// `K_n(X_{i_1}, b0 X_{i_2}, ..., b0 X_{i_n})`.
pub fn symm_r_transform(
    functional: &MomentFunctional,
    vars: &[TVariable],
    b0: &BScalar,
    degree: usize,
) -> Result<BSeries> {
    let order = common_order(vars)?;
    check_dims(order, b0.order())?;
    let embedded = TVariable::from_bscalar(b0);
    let shifted: Vec<TVariable> =
        vars.iter().map(|v| embedded.mul(v)).collect::<Result<_>>()?;
    let s = vars.len();
    // variables 0..s are the originals, s..2s their b0-multiples
    let joined: Vec<TVariable> = vars.iter().cloned().chain(shifted).collect();
    series_from(vars, degree, |w| {
        let inserted: Vec<usize> =
            w.iter().enumerate().map(|(k, &i)| if k == 0 { i } else { i + s }).collect();
        t_cumulant(functional, &joined, &inserted)
    })
}

/// Cumulants of the compressed space: each length-`n` coefficient scaled by
/// `alpha0^(n-1)`, where `alpha0 = phi(p) != 0`.
pub fn compress_r_transform(r: &BSeries, alpha0: &Rational) -> Result<BSeries> {
    if alpha0.is_zero() {
        return Err(Error::ZeroTrace);
    }
    let mut out = BSeries::new(r.vars, r.order, r.degree)?;
    for (w, c) in &r.coefficients {
        out.set(w.clone(), c.scale(&pow(alpha0, w.len() - 1)))?;
    }
    Ok(out)
}

/// Moments of the product chain, used by callers that want the polynomial
/// side of `t_moment` without evaluating it.
pub fn moment_polynomials(vars: &[TVariable], word: &IndexWord) -> Result<TVariable> {
    product_chain(vars, word.letters())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::scalar_space::{CumulantSpec, Distribution};
    use std::sync::Arc;

    fn b(v: &[i64]) -> BScalar {
        BScalar::new(v.iter().map(|&x| int(x)).collect()).unwrap()
    }

    fn w(v: &[usize]) -> IndexWord {
        IndexWord::new(v.to_vec())
    }

    #[test]
    fn word_enumeration_order() {
        let words = IndexWord::all(2, 2);
        assert_eq!(words, vec![w(&[0]), w(&[1]), w(&[0, 0]), w(&[0, 1]), w(&[1, 0]), w(&[1, 1])]);
        assert_eq!(w(&[0, 1]).to_string(), "[1,2]");
    }

    #[test]
    fn semicircular_scalar_series() {
        let mut r = BSeries::new(1, 1, 4).unwrap();
        r.set(w(&[0, 0]), b(&[1])).unwrap();
        let m = moments_from_r(&r).unwrap();
        assert_eq!(m.coefficient(&w(&[0, 0, 0, 0])), b(&[2]));
        assert_eq!(m.coefficient(&w(&[0, 0, 0])), b(&[0]));
        assert_eq!(r_from_moments(&m).unwrap(), r);
    }

    #[test]
    fn boxed_convolution_scalar_example() {
        // x standard semicircular, y the constant 2
        let mut rx = BSeries::new(1, 1, 3).unwrap();
        rx.set(w(&[0, 0]), b(&[1])).unwrap();
        let mut ry = BSeries::new(1, 1, 3).unwrap();
        ry.set(w(&[0]), b(&[2])).unwrap();
        let prod = boxed_convolution(&rx, &ry).unwrap();
        assert_eq!(prod.coefficient(&w(&[0, 0])), b(&[4]));
        assert_eq!(prod.coefficient(&w(&[0])), b(&[0]));
    }

    #[test]
    fn shape_errors() {
        let f = BSeries::new(1, 2, 3).unwrap();
        let g = BSeries::new(1, 2, 4).unwrap();
        assert!(series_add(&f, &g).is_err());
        assert!(boxed_convolution(&f, &g).is_err());
        let mut h = BSeries::new(1, 2, 2).unwrap();
        assert!(h.set(w(&[0, 0, 0]), b(&[1, 0])).is_err());
        assert!(h.set(w(&[1]), b(&[1, 0])).is_err());
        assert!(h.set(w(&[0]), b(&[1])).is_err());
    }

    #[test]
    fn compression_rejects_zero_trace() {
        let r = BSeries::new(1, 1, 2).unwrap();
        assert_eq!(compress_r_transform(&r, &int(0)), Err(Error::ZeroTrace));
        assert_eq!(compress_r_transform(&r, &int(1)).unwrap(), r);
    }

    #[test]
    fn json_and_csv() {
        let mut r = BSeries::new(2, 2, 3).unwrap();
        r.set(w(&[0, 1, 0]), b(&[1, 0])).unwrap();
        assert_eq!(
            r.to_json().to_string(),
            r#"{"D":3,"N":2,"coefficients":[{"value":["1","0"],"word":[1,2,1]}],"s":2}"#
        );
        assert_eq!(BSeries::from_json(&r.to_json()).unwrap(), r);
        assert_eq!(r.to_csv(), "word,entry,value\n\"[1,2,1]\",1,1\n\"[1,2,1]\",2,0\n");
    }

    #[test]
    fn even_semicircular() {
        let mut a = Alphabet::new();
        let s = a.add("s", "F").unwrap();
        let c = a.add("c", "G").unwrap();
        let mut spec = CumulantSpec::new(6).unwrap();
        spec.set_distribution(&a, s, &Distribution::Semicircular(int(1))).unwrap();
        spec.set_distribution(&a, c, &Distribution::Constant(int(1))).unwrap();
        let f = MomentFunctional::new(Arc::new(a), spec);
        let x = TVariable::new(vec![NcPolynomial::generator(s), NcPolynomial::zero()]).unwrap();
        assert!(check_even(&f, &x, 6).unwrap());
        assert_eq!(even_cumulant_restricted(&f, &x, 2).unwrap(), b(&[1, 0]));
        assert_eq!(even_cumulant_restricted(&f, &x, 4).unwrap(), b(&[0, 0]));
        assert_eq!(even_cumulant_restricted(&f, &x, 3), Err(Error::OddSize(3)));
        let y = TVariable::new(vec![NcPolynomial::generator(c), NcPolynomial::zero()]).unwrap();
        assert!(!check_even(&f, &y, 6).unwrap());
        assert_eq!(even_cumulant_restricted(&f, &y, 2), Err(Error::NotEven));
    }
}
