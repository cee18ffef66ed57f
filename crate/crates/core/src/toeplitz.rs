//! Toeplitz matricial algebra `C^N` and the probability space of N-tuples over it.
//!
//! `(a_1, ..., a_N)` stands for the upper-triangular Toeplitz matrix with first
//! row `a_1 ... a_N`. Products of such matrices are again of that shape, so
//! the product is the truncated convolution of the defining tuples.

use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{check_dims, Error, Result};
use crate::nc_lattice::NcLattice;
use crate::ncpoly::{Alphabet, NcPolynomial, TermJson};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::scalar_space::MomentFunctional;

/// An element `(a_1, ..., a_N)` of `C^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BScalar(Vec<Rational>);

impl BScalar {
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Precondition("Toeplitz order must be at least 1".into()));
        }
        Ok(BScalar(entries))
    }

    pub fn zero(order: usize) -> Self {
        BScalar(vec![Rational::zero(); order])
    }

    /// `1_B = (1, 0, ..., 0)`.
    pub fn unit(order: usize) -> Self {
        Self::scalar(order, Rational::one())
    }

    /// `(c, 0, ..., 0)`, the scalar `c` embedded in `C^N`.
    pub fn scalar(order: usize, c: Rational) -> Self {
        let mut v = vec![Rational::zero(); order];
        v[0] = c;
        BScalar(v)
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &BScalar) -> Result<BScalar> {
        check_dims(self.order(), other.order())?;
        Ok(BScalar(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub(crate) fn add_assign(&mut self, other: &BScalar) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    /// Convolution: entry `j` is `sum_{k <= j} a_k b_{j-k}` (0-based).
    pub fn mul(&self, other: &BScalar) -> Result<BScalar> {
        check_dims(self.order(), other.order())?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &BScalar) -> BScalar {
        let n = self.order();
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        BScalar(out)
    }

    pub fn scale(&self, c: &Rational) -> BScalar {
        BScalar(self.0.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, exp: usize) -> BScalar {
        (0..exp).fold(BScalar::unit(self.order()), |acc, _| acc.mul_unchecked(self))
    }

    /// Convolution inverse by forward substitution; needs a nonzero first entry.
    pub fn inv(&self) -> Result<BScalar> {
        let lead = &self.0[0];
        if lead.is_zero() {
            return Err(Error::NonInvertible);
        }
        let lead_inv = lead.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(self.order());
        out.push(lead_inv.clone());
        for j in 1..self.order() {
            let mut acc = Rational::zero();
            for k in 1..=j {
                acc += &self.0[k] * &out[j - k];
            }
            out.push(-acc * &lead_inv);
        }
        Ok(BScalar(out))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(|r| Value::String(format_rational(r))).collect())
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let items = value
            .as_array()
            .ok_or_else(|| Error::Precondition("expected an array of rational strings".into()))?;
        let entries = items
            .iter()
            .map(|v| {
                v.as_str()
                    .and_then(parse_rational)
                    .ok_or_else(|| Error::Precondition(format!("invalid rational {v}")))
            })
            .collect::<Result<Vec<_>>>()?;
        BScalar::new(entries)
    }
}

/// A `C^N`-valued random variable `(a_1, ..., a_N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TVariable(Vec<NcPolynomial>);

impl TVariable {
    pub fn new(entries: Vec<NcPolynomial>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Precondition("Toeplitz order must be at least 1".into()));
        }
        Ok(TVariable(entries))
    }

    /// `1_T = (1_A, 0, ..., 0)`.
    pub fn unit(order: usize) -> Self {
        Self::from_bscalar(&BScalar::unit(order))
    }

    pub fn zero(order: usize) -> Self {
        TVariable(vec![NcPolynomial::zero(); order])
    }

    pub fn from_bscalar(b: &BScalar) -> Self {
        TVariable(b.0.iter().map(|c| NcPolynomial::constant(c.clone())).collect())
    }

    /// `Some(b)` when every entry is a rational multiple of `1_A`.
    pub fn as_bscalar(&self) -> Option<BScalar> {
        self.0.iter().map(NcPolynomial::as_constant).collect::<Option<Vec<_>>>().map(BScalar)
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[NcPolynomial] {
        &self.0
    }

    pub fn add(&self, other: &TVariable) -> Result<TVariable> {
        check_dims(self.order(), other.order())?;
        Ok(TVariable(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn scale(&self, c: &Rational) -> TVariable {
        TVariable(self.0.iter().map(|a| a.scale(c)).collect())
    }

    /// Toeplitz product: entry `j` is `sum_{k <= j} a_k b_{j-k}` with
    /// noncommutative products of the entries.
    pub fn mul(&self, other: &TVariable) -> Result<TVariable> {
        check_dims(self.order(), other.order())?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &TVariable) -> TVariable {
        let n = self.order();
        let mut out = vec![NcPolynomial::zero(); n];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    let prod = a * b;
                    out[i + j] = std::mem::take(&mut out[i + j]) + prod;
                }
            }
        }
        TVariable(out)
    }

    /// Product by full matrix multiplication of the embedded `N x N` matrices,
    /// checking that the result is again upper-triangular Toeplitz.
    pub fn mul_oracle(&self, other: &TVariable) -> Result<TVariable> {
        check_dims(self.order(), other.order())?;
        let left = self.to_matrix();
        let right = other.to_matrix();
        let n = self.order();
        let mut product = vec![vec![NcPolynomial::zero(); n]; n];
        for (r, row) in product.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                let mut acc = NcPolynomial::zero();
                for k in 0..n {
                    acc = acc + &left[r][k] * &right[k][c];
                }
                *cell = acc;
            }
        }
        for r in 0..n {
            for c in 0..n {
                let expected =
                    if c < r { NcPolynomial::zero() } else { product[0][c - r].clone() };
                if product[r][c] != expected {
                    return Err(Error::Inconsistent(format!(
                        "matrix product is not upper-triangular Toeplitz at ({r}, {c})"
                    )));
                }
            }
        }
        Ok(TVariable(product.swap_remove(0)))
    }

    /// Row `r`, column `c` holds `a_{c-r}` above the diagonal, zero below.
    pub fn to_matrix(&self) -> Vec<Vec<NcPolynomial>> {
        let n = self.order();
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| if c < r { NcPolynomial::zero() } else { self.0[c - r].clone() })
                    .collect()
            })
            .collect()
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> Vec<Vec<TermJson>> {
        self.0.iter().map(|p| p.to_json(alphabet)).collect()
    }

    pub fn from_json(entries: &[Vec<TermJson>], alphabet: &Alphabet) -> Result<Self> {
        TVariable::new(
            entries.iter().map(|t| NcPolynomial::from_json(t, alphabet)).collect::<Result<_>>()?,
        )
    }
}

/// Formal sum of argument sequences, `sum c_t (p_1, ..., p_n)`.
///
/// The sum is not pointwise: it only becomes meaningful under a multilinear
/// map such as the cumulant `k_n`, which is applied term by term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QTuple {
    arity: usize,
    terms: Vec<(Rational, Vec<NcPolynomial>)>,
}

impl QTuple {
    pub fn single(args: Vec<NcPolynomial>) -> Self {
        QTuple { arity: args.len(), terms: vec![(Rational::one(), args)] }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[(Rational, Vec<NcPolynomial>)] {
        &self.terms
    }

    /// Multiplies out each sequence; this is the matching moment polynomial.
    pub fn flatten(&self) -> NcPolynomial {
        self.terms.iter().fold(NcPolynomial::zero(), |acc, (c, seq)| {
            let product = seq.iter().fold(NcPolynomial::one(), |p, a| &p * a);
            acc + product.scale(c)
        })
    }

    /// Applies `k_n` to every term and sums with the coefficients.
    pub fn cumulant(&self, functional: &MomentFunctional) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (c, seq) in &self.terms {
            let k = functional.cumulant(seq)?;
            if !k.is_zero() {
                acc += c * k;
            }
        }
        Ok(acc)
    }
}

/// `E(a_1, ..., a_N) = (phi(a_1), ..., phi(a_N))`.
pub fn expect(functional: &MomentFunctional, x: &TVariable) -> Result<BScalar> {
    Ok(BScalar(x.0.iter().map(|a| functional.phi(a)).collect::<Result<_>>()?))
}

fn check_indices(vars: &[TVariable], idx: &[usize]) -> Result<usize> {
    if idx.is_empty() {
        return Err(Error::Precondition("index word must be nonempty".into()));
    }
    let order = vars.first().map(TVariable::order).ok_or(Error::BadIndex { index: idx[0], len: 0 })?;
    for v in vars {
        check_dims(order, v.order())?;
    }
    if let Some(&bad) = idx.iter().find(|&&i| i >= vars.len()) {
        return Err(Error::BadIndex { index: bad, len: vars.len() });
    }
    Ok(order)
}

/// Product `vars[i_1] ... vars[i_n]` in `T`.
pub fn product_chain(vars: &[TVariable], idx: &[usize]) -> Result<TVariable> {
    check_indices(vars, idx)?;
    Ok(idx[1..].iter().fold(vars[idx[0]].clone(), |acc, &i| acc.mul_unchecked(&vars[i])))
}

/// The `(i_1, ..., i_n)`-th moment `E(X_{i_1} ... X_{i_n})`; indices are 0-based.
pub fn t_moment(functional: &MomentFunctional, vars: &[TVariable], idx: &[usize]) -> Result<BScalar> {
    if idx.len() > functional.degree_cap() {
        return Err(Error::CapExceeded { requested: idx.len(), cap: functional.degree_cap() });
    }
    expect(functional, &product_chain(vars, idx)?)
}

/// The formal tuples `Q_1, ..., Q_N` for the index word `idx`.
pub fn build_q(vars: &[TVariable], idx: &[usize]) -> Result<Vec<QTuple>> {
    let order = check_indices(vars, idx)?;
    let first = &vars[idx[0]];
    let mut q: Vec<QTuple> = first.0.iter().map(|a| QTuple::single(vec![a.clone()])).collect();
    for &i in &idx[1..] {
        let next = &vars[i];
        q = (0..order)
            .map(|j| {
                let mut terms = Vec::new();
                for (k, prev) in q[..=j].iter().enumerate() {
                    let a = &next.0[j - k];
                    for (c, seq) in &prev.terms {
                        let mut seq = seq.clone();
                        seq.push(a.clone());
                        terms.push((c.clone(), seq));
                    }
                }
                QTuple { arity: q[0].arity + 1, terms }
            })
            .collect();
    }
    Ok(q)
}

/// `K_n(X_{i_1}, ..., X_{i_n}) = (k_n(Q_1), ..., k_n(Q_N))`.
pub fn t_cumulant(functional: &MomentFunctional, vars: &[TVariable], idx: &[usize]) -> Result<BScalar> {
    if idx.len() > functional.degree_cap() {
        return Err(Error::CapExceeded { requested: idx.len(), cap: functional.degree_cap() });
    }
    let q = build_q(vars, idx)?;
    Ok(BScalar(q.iter().map(|t| t.cumulant(functional)).collect::<Result<_>>()?))
}

/// `K_n` by Möbius inversion in `B`: the sum over `NC(n)` of `mu(pi, 1_n)`
/// times the `B`-product of per-block moments.
pub fn t_cumulant_mobius(
    functional: &MomentFunctional,
    vars: &[TVariable],
    idx: &[usize],
) -> Result<BScalar> {
    let order = check_indices(vars, idx)?;
    let n = idx.len();
    if n > functional.degree_cap() {
        return Err(Error::CapExceeded { requested: n, cap: functional.degree_cap() });
    }
    let lattice = NcLattice::get(n)?;
    let mut total = BScalar::zero(order);
    let mut sub = Vec::with_capacity(n);
    for (pi, mu) in lattice.elements().iter().zip(lattice.mobius_to_top()) {
        let mut term = BScalar::scalar(order, mu.clone());
        for block in pi.blocks() {
            sub.clear();
            sub.extend(block.iter().map(|&p| idx[p - 1]));
            term = term.mul_unchecked(&t_moment(functional, vars, &sub)?);
            if term.is_zero() {
                break;
            }
        }
        total.add_assign(&term);
    }
    Ok(total)
}
