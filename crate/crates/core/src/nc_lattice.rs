//! Noncrossing partitions of `{1, ..., n}` and the incidence algebra of `NC(n)`.
//!
//! A [`NcPartition`] is always stored in canonical form: blocks are strictly
//! increasing and sorted by their minimal element, so structural equality is
//! partition equality. The lattice `NC(n)` is built once per `n` and cached in
//! a process-wide registry together with its Möbius rows and the Kreweras map.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dims, Error, Result};
use crate::rational::{one, zero, Rational};

/// Default largest ground set accepted by [`enumerate_nc`].
pub const DEFAULT_LATTICE_CAP: usize = 10;
/// No lattice above this size is ever built, whatever cap is requested.
pub const HARD_LATTICE_CAP: usize = 12;

/// Values of incidence functions on `NC(n) x NC(n)`.
pub type IncidenceValue = Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NcPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl NcPartition {
    /// Validates and canonicalizes `blocks` as a noncrossing partition of `{1..n}`.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPartition("ground set must be nonempty".into()));
        }
        let mut seen = vec![false; n];
        let mut blocks = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            block.sort_unstable();
            for &x in block.iter() {
                if x == 0 || x > n {
                    return Err(Error::InvalidPartition(format!("{x} is outside 1..={n}")));
                }
                if seen[x - 1] {
                    return Err(Error::InvalidPartition(format!("{x} appears twice")));
                }
                seen[x - 1] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("{} is not covered", missing + 1)));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        let p = NcPartition { n, blocks };
        if !p.is_noncrossing() {
            return Err(Error::Crossing);
        }
        Ok(p)
    }

    /// `0_n`, all singletons.
    pub fn zero(n: usize) -> Self {
        NcPartition { n, blocks: (1..=n).map(|i| vec![i]).collect() }
    }

    /// `1_n`, a single block.
    pub fn one(n: usize) -> Self {
        NcPartition { n, blocks: vec![(1..=n).collect()] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// `labels()[i - 1]` is the index of the block containing `i`.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                labels[x - 1] = b;
            }
        }
        labels
    }

    pub fn has_only_even_blocks(&self) -> bool {
        self.blocks.iter().all(|b| b.len() % 2 == 0)
    }

    fn is_noncrossing(&self) -> bool {
        let labels = self.labels();
        let bounds: Vec<(usize, usize)> =
            self.blocks.iter().map(|b| (b[0], *b.last().unwrap())).collect();
        // Between consecutive elements a < c of a block, every other block must
        // lie strictly inside (a, c).
        for block in &self.blocks {
            for pair in block.windows(2) {
                let (a, c) = (pair[0], pair[1]);
                for b in a + 1..c {
                    let (lo, hi) = bounds[labels[b - 1]];
                    if lo < a || hi > c {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Refinement order: every block of `self` lies inside a block of `other`.
    pub fn leq(&self, other: &NcPartition) -> Result<bool> {
        check_dims(self.n, other.n)?;
        Ok(refines(&self.blocks, &other.labels()))
    }

    /// Parses the nested-array text form, e.g. `[[1,2],[3]]`.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let blocks: Vec<Vec<usize>> = serde_json::from_str(text)
            .map_err(|e| Error::InvalidPartition(e.to_string()))?;
        let n = blocks.iter().map(Vec::len).sum();
        NcPartition::new(n, blocks)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.blocks).expect("integer arrays always serialize")
    }
}

fn refines(blocks: &[Vec<usize>], coarse_labels: &[usize]) -> bool {
    blocks.iter().all(|b| {
        let l = coarse_labels[b[0] - 1];
        b.iter().all(|&x| coarse_labels[x - 1] == l)
    })
}

impl fmt::Display for NcPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("(")?;
            for (j, x) in block.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        f.write_str("}")
    }
}

impl Serialize for NcPartition {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for NcPartition {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(de)?;
        let n = blocks.iter().map(Vec::len).sum();
        NcPartition::new(n, blocks).map_err(serde::de::Error::custom)
    }
}

/// Enumerates raw block lists of every noncrossing partition of `0..len`,
/// shifted by one. Built through the first-block decomposition: `1` is either
/// a singleton or is joined to a next element `j`, splitting into the inner
/// interval `(1, j)` and the remainder starting at `j`.
fn raw_nc(len: usize, memo: &mut HashMap<usize, Arc<Vec<Vec<Vec<usize>>>>>) -> Arc<Vec<Vec<Vec<usize>>>> {
    if let Some(hit) = memo.get(&len) {
        return hit.clone();
    }
    let mut out: Vec<Vec<Vec<usize>>> = Vec::new();
    if len == 0 {
        out.push(Vec::new());
    } else {
        let shift = |parts: &Vec<Vec<usize>>, by: usize| -> Vec<Vec<usize>> {
            parts.iter().map(|b| b.iter().map(|x| x + by).collect()).collect()
        };
        for rest in raw_nc(len - 1, memo).iter() {
            let mut blocks = vec![vec![1]];
            blocks.extend(shift(rest, 1));
            out.push(blocks);
        }
        for j in 2..=len {
            let inner = raw_nc(j - 2, memo);
            let outer = raw_nc(len - j + 1, memo);
            for o in outer.iter() {
                for i in inner.iter() {
                    let mut blocks = shift(o, j - 1);
                    blocks[0].insert(0, 1);
                    blocks.extend(shift(i, 1));
                    out.push(blocks);
                }
            }
        }
    }
    let out = Arc::new(out);
    memo.insert(len, out.clone());
    out
}

/// The lattice `NC(n)` with cached incidence data.
pub struct NcLattice {
    n: usize,
    elements: Vec<NcPartition>,
    labels: Vec<Vec<usize>>,
    index: HashMap<NcPartition, usize>,
    rows: Vec<OnceLock<HashMap<usize, Rational>>>,
    to_top: OnceLock<Vec<Rational>>,
    kreweras: OnceLock<Vec<usize>>,
}

impl fmt::Debug for NcLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NcLattice").field("n", &self.n).field("len", &self.elements.len()).finish()
    }
}

static REGISTRY: OnceLock<Mutex<HashMap<usize, Arc<NcLattice>>>> = OnceLock::new();

impl NcLattice {
    /// Shared lattice for `n`, built on first use. Only the hard cap applies here.
    pub fn get(n: usize) -> Result<Arc<NcLattice>> {
        if n == 0 || n > HARD_LATTICE_CAP {
            return Err(Error::CapExceeded { requested: n, cap: HARD_LATTICE_CAP });
        }
        let registry = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(hit) = registry.lock().unwrap().get(&n) {
            return Ok(hit.clone());
        }
        let built = Arc::new(NcLattice::build(n));
        let mut map = registry.lock().unwrap();
        Ok(map.entry(n).or_insert(built).clone())
    }

    fn build(n: usize) -> NcLattice {
        let mut memo = HashMap::new();
        let mut elements: Vec<NcPartition> = raw_nc(n, &mut memo)
            .iter()
            .map(|blocks| {
                let mut blocks = blocks.clone();
                blocks.sort_unstable_by_key(|b| b[0]);
                NcPartition { n, blocks }
            })
            .collect();
        elements.sort_unstable();
        let labels = elements.iter().map(NcPartition::labels).collect();
        let index = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let rows = (0..elements.len()).map(|_| OnceLock::new()).collect();
        NcLattice {
            n,
            elements,
            labels,
            index,
            rows,
            to_top: OnceLock::new(),
            kreweras: OnceLock::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[NcPartition] {
        &self.elements
    }

    pub fn index_of(&self, p: &NcPartition) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Index of `1_n`, the last element in canonical order.
    pub fn top(&self) -> usize {
        self.index[&NcPartition::one(self.n)]
    }

    /// Index of `0_n`.
    pub fn bottom(&self) -> usize {
        self.index[&NcPartition::zero(self.n)]
    }

    pub fn leq_idx(&self, a: usize, b: usize) -> bool {
        refines(&self.elements[a].blocks, &self.labels[b])
    }

    /// `mu(theta, sigma)` for every `sigma >= theta`, by the recursion
    /// `mu(theta, pi) = -sum_{theta <= sigma < pi} mu(theta, sigma)`.
    fn row(&self, theta: usize) -> &HashMap<usize, Rational> {
        self.rows[theta].get_or_init(|| {
            let mut up: Vec<usize> =
                (0..self.len()).filter(|&s| self.leq_idx(theta, s)).collect();
            // More blocks first: a linear extension of the order restricted to `up`.
            up.sort_by_key(|&s| std::cmp::Reverse(self.elements[s].block_count()));
            let mut values: Vec<Rational> = Vec::with_capacity(up.len());
            for (k, &pi) in up.iter().enumerate() {
                let v = if pi == theta {
                    one()
                } else {
                    let mut acc = zero();
                    for (sigma, mu) in up[..k].iter().zip(&values) {
                        if !mu.is_zero() && self.leq_idx(*sigma, pi) {
                            acc += mu;
                        }
                    }
                    -acc
                };
                values.push(v);
            }
            up.into_iter().zip(values).collect()
        })
    }

    pub fn mobius_idx(&self, theta: usize, pi: usize) -> Rational {
        self.row(theta).get(&pi).cloned().unwrap_or_else(zero)
    }

    /// `mu(pi, 1_n)` for every element, in element order.
    pub fn mobius_to_top(&self) -> &[Rational] {
        self.to_top.get_or_init(|| {
            let top = self.top();
            (0..self.len()).map(|i| self.mobius_idx(i, top)).collect()
        })
    }

    /// Element index of the Kreweras complement of element `i`.
    pub fn kreweras_idx(&self, i: usize) -> usize {
        let table = self.kreweras.get_or_init(|| {
            self.elements.iter().map(|p| self.index[&kreweras_unchecked(p)]).collect()
        });
        table[i]
    }
}

fn lattice_checked(n: usize, cap: usize) -> Result<Arc<NcLattice>> {
    let cap = cap.min(HARD_LATTICE_CAP);
    if n == 0 || n > cap {
        return Err(Error::CapExceeded { requested: n, cap });
    }
    NcLattice::get(n)
}

/// All of `NC(n)` in canonical (lexicographic) order, under the default cap.
pub fn enumerate_nc(n: usize) -> Result<Vec<NcPartition>> {
    enumerate_nc_capped(n, DEFAULT_LATTICE_CAP)
}

pub fn enumerate_nc_capped(n: usize, cap: usize) -> Result<Vec<NcPartition>> {
    Ok(lattice_checked(n, cap)?.elements().to_vec())
}

/// Elements of `NC(m)` whose blocks all have even size.
pub fn enumerate_nc_even(m: usize) -> Result<Vec<NcPartition>> {
    if m % 2 == 1 {
        return Err(Error::OddSize(m));
    }
    Ok(enumerate_nc(m)?.into_iter().filter(NcPartition::has_only_even_blocks).collect())
}

pub fn leq(theta: &NcPartition, pi: &NcPartition) -> Result<bool> {
    theta.leq(pi)
}

pub fn zeta(theta: &NcPartition, pi: &NcPartition) -> Result<IncidenceValue> {
    Ok(if theta.leq(pi)? { one() } else { zero() })
}

pub fn delta(theta: &NcPartition, pi: &NcPartition) -> Result<IncidenceValue> {
    check_dims(theta.n, pi.n)?;
    Ok(if theta == pi { one() } else { zero() })
}

/// Möbius function of `NC(n)`; zero when `theta` is not below `pi`.
pub fn mobius(theta: &NcPartition, pi: &NcPartition) -> Result<IncidenceValue> {
    check_dims(theta.n, pi.n)?;
    let lattice = NcLattice::get(theta.n)?;
    let (a, b) = (lattice.index_of(theta), lattice.index_of(pi));
    match (a, b) {
        (Some(a), Some(b)) => Ok(lattice.mobius_idx(a, b)),
        _ => Err(Error::InvalidPartition("not an element of NC(n)".into())),
    }
}

/// Kreweras complement, computed as the permutation `pi^{-1} o gamma`, where
/// `gamma = (1 2 ... n)` and each block of `pi` is an increasing cycle.
pub fn kreweras(pi: &NcPartition) -> NcPartition {
    kreweras_unchecked(pi)
}

fn kreweras_unchecked(pi: &NcPartition) -> NcPartition {
    let n = pi.n;
    // inverse[x] = predecessor of x in its block, cyclically
    let mut inverse = vec![0usize; n + 1];
    for block in &pi.blocks {
        for (k, &x) in block.iter().enumerate() {
            let prev = if k == 0 { *block.last().unwrap() } else { block[k - 1] };
            inverse[x] = prev;
        }
    }
    let step = |x: usize| inverse[if x == n { 1 } else { x + 1 }];
    let mut visited = vec![false; n + 1];
    let mut blocks = Vec::new();
    for start in 1..=n {
        if visited[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !visited[x] {
            visited[x] = true;
            cycle.push(x);
            x = step(x);
        }
        cycle.sort_unstable();
        blocks.push(cycle);
    }
    blocks.sort_unstable_by_key(|b| b[0]);
    NcPartition { n, blocks }
}

/// Places `pi` on the odd points and `sigma` on the even points of `{1..2n}`.
pub fn interleave(pi: &NcPartition, sigma: &NcPartition) -> Result<NcPartition> {
    check_dims(pi.n, sigma.n)?;
    let odd = pi.blocks.iter().map(|b| b.iter().map(|x| 2 * x - 1).collect());
    let even = sigma.blocks.iter().map(|b| b.iter().map(|x| 2 * x).collect());
    NcPartition::new(2 * pi.n, odd.chain(even).collect())
}
