//! Bigraded exterior algebra `Λ^{p,q}` on a (1,0)-coframe `η^1..η^n` and its conjugates.
//!
//! Monomials are stored in canonical order: holomorphic indices ascending,
//! then antiholomorphic indices ascending. Every product is reordered into
//! that order with an exact sign.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Matrix, Vector, GR};

/// Largest complex dimension supported by the bit-packed monomials.
pub const MAX_DIM: usize = 9;

/// A monomial `η^I ∧ η^{J̄}` as two bitmasks (bit `j-1` ↔ index `j`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex {
    pub holo: u16,
    pub anti: u16,
}

impl MultiIndex {
    pub const ONE: MultiIndex = MultiIndex { holo: 0, anti: 0 };

    pub fn new(holo: &[usize], anti: &[usize]) -> Self {
        let mask = |ix: &[usize]| ix.iter().fold(0u16, |m, &j| m | (1 << (j - 1)));
        Self { holo: mask(holo), anti: mask(anti) }
    }

    pub fn holo_indices(&self) -> Vec<usize> {
        bits(self.holo)
    }

    pub fn anti_indices(&self) -> Vec<usize> {
        bits(self.anti)
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.holo.count_ones() as usize, self.anti.count_ones() as usize)
    }

    pub fn degree(&self) -> usize {
        let (p, q) = self.bidegree();
        p + q
    }

    /// Generators as a single mask in canonical order (holomorphic below antiholomorphic).
    fn packed(&self) -> u32 {
        self.holo as u32 | ((self.anti as u32) << 16)
    }

    fn unpack(m: u32) -> Self {
        Self { holo: (m & 0xffff) as u16, anti: (m >> 16) as u16 }
    }

    /// `self ∧ other = sign · (canonical monomial)`, or `None` on a repeated generator.
    pub fn wedge(&self, other: &MultiIndex) -> Option<(i32, MultiIndex)> {
        let (a, b) = (self.packed(), other.packed());
        if a & b != 0 {
            return None;
        }
        // inversions: pairs (x ∈ a, y ∈ b) with x > y
        let mut inv = 0u32;
        let mut rest = b;
        while rest != 0 {
            let y = rest.trailing_zeros();
            rest &= rest - 1;
            inv += (a >> (y + 1)).count_ones();
        }
        let sign = if inv % 2 == 0 { 1 } else { -1 };
        Some((sign, Self::unpack(a | b)))
    }

    /// `conj(η^I ∧ η^{J̄}) = (-1)^{|I||J|} η^J ∧ η^{Ī}`.
    pub fn conj(&self) -> (i32, MultiIndex) {
        let (p, q) = self.bidegree();
        let sign = if (p * q) % 2 == 0 { 1 } else { -1 };
        (sign, MultiIndex { holo: self.anti, anti: self.holo })
    }

    /// Key in the structure-file notation: `"12"`, `"1~2"`, `"~1~2"`, `"12~1"`.
    pub fn key(&self) -> String {
        let mut s: String = self.holo_indices().iter().map(|j| j.to_string()).collect();
        for k in self.anti_indices() {
            s.push('~');
            s.push_str(&k.to_string());
        }
        s
    }

    pub fn parse_key(key: &str, n: usize) -> Result<Self> {
        let bad = |msg: &str| Error::Malformed(format!("monomial key `{key}`: {msg}"));
        let mut parts = key.split('~');
        let holo_part = parts.next().unwrap_or("");
        let mut holo = Vec::new();
        for c in holo_part.chars() {
            let j = c.to_digit(10).ok_or_else(|| bad("expected digits"))? as usize;
            holo.push(j);
        }
        let mut anti = Vec::new();
        for part in parts {
            if part.len() != 1 {
                return Err(bad("each `~` must be followed by one index"));
            }
            anti.push(part.chars().next().unwrap().to_digit(10).ok_or_else(|| bad("expected digit"))? as usize);
        }
        for ix in [&holo, &anti] {
            if ix.iter().any(|&j| j == 0 || j > n) {
                return Err(bad("index out of range"));
            }
            if ix.windows(2).any(|w| w[0] >= w[1]) {
                return Err(bad("indices must be strictly increasing"));
            }
        }
        Ok(Self::new(&holo, &anti))
    }
}

fn bits(m: u16) -> Vec<usize> {
    (0..16).filter(|b| m & (1 << b) != 0).map(|b| b + 1).collect()
}

impl Ord for MultiIndex {
    /// Degree, then holomorphic degree (descending), then lexicographic on index lists.
    fn cmp(&self, other: &Self) -> Ordering {
        let (p1, q1) = self.bidegree();
        let (p2, q2) = other.bidegree();
        (p1 + q1)
            .cmp(&(p2 + q2))
            .then(p2.cmp(&p1))
            .then_with(|| self.holo_indices().cmp(&other.holo_indices()))
            .then_with(|| self.anti_indices().cmp(&other.anti_indices()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == MultiIndex::ONE {
            return write!(f, "1");
        }
        let holo: Vec<String> = self.holo_indices().iter().map(|j| j.to_string()).collect();
        let anti: Vec<String> = self.anti_indices().iter().map(|j| format!("{j}\u{304}")).collect();
        if anti.is_empty() {
            write!(f, "η^{{{}}}", holo.join(","))
        } else {
            write!(f, "η^{{{}|{}}}", holo.join(","), anti.join(","))
        }
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..=n {
            cur.push(j);
            rec(j + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Lexicographic monomial basis of `Λ^{p,q}`.
pub fn basis(n: usize, p: usize, q: usize) -> Result<Vec<MultiIndex>> {
    if p > n || q > n || n > MAX_DIM {
        return Err(Error::Bidegree { n, p, q });
    }
    let hs = combinations(n, p);
    let as_ = combinations(n, q);
    Ok(hs.iter().flat_map(|h| as_.iter().map(move |a| MultiIndex::new(h, a))).collect())
}

/// Ordered bases of every bidegree for a fixed `n`, plus position lookup.
#[derive(Clone, Debug)]
pub struct BasisTable {
    n: usize,
    table: Vec<Vec<Vec<MultiIndex>>>,
    position: std::collections::HashMap<MultiIndex, usize>,
}

impl BasisTable {
    pub fn new(n: usize) -> Self {
        let table: Vec<Vec<Vec<MultiIndex>>> =
            (0..=n).map(|p| (0..=n).map(|q| basis(n, p, q).expect("in range")).collect()).collect();
        let mut position = std::collections::HashMap::new();
        for row in &table {
            for b in row {
                for (i, m) in b.iter().enumerate() {
                    position.insert(*m, i);
                }
            }
        }
        Self { n, table, position }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, p: usize, q: usize) -> &[MultiIndex] {
        &self.table[p][q]
    }

    pub fn dim(&self, p: usize, q: usize) -> usize {
        if p > self.n || q > self.n {
            0
        } else {
            self.table[p][q].len()
        }
    }

    /// Position of a monomial inside the basis of its own bidegree.
    pub fn index_of(&self, m: &MultiIndex) -> usize {
        self.position[m]
    }

    /// Bidegrees `(p, k-p)` making up total degree `k`, in increasing `p`.
    pub fn total_parts(&self, k: usize) -> Vec<(usize, usize)> {
        (0..=self.n).filter(|&p| k >= p && k - p <= self.n).map(|p| (p, k - p)).collect()
    }

    pub fn total_dim(&self, k: usize) -> usize {
        self.total_parts(k).iter().map(|&(p, q)| self.dim(p, q)).sum()
    }

    /// Offset of bidegree `(p, k-p)` inside the concatenated total-degree basis.
    pub fn total_offset(&self, k: usize, p: usize) -> usize {
        self.total_parts(k).iter().take_while(|&&(pp, _)| pp < p).map(|&(a, b)| self.dim(a, b)).sum()
    }

    pub fn total_basis(&self, k: usize) -> Vec<MultiIndex> {
        self.total_parts(k).iter().flat_map(|&(p, q)| self.get(p, q).iter().copied()).collect()
    }
}

/// A sparse element of the exterior algebra with exact coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    n: usize,
    terms: BTreeMap<MultiIndex, GR>,
}

impl Form {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(n, MultiIndex::ONE, GR::one())
    }

    pub fn monomial(n: usize, m: MultiIndex, c: GR) -> Self {
        let mut f = Self::zero(n);
        f.add_term(m, c);
        f
    }

    /// `η^j`
    pub fn eta(n: usize, j: usize) -> Self {
        Self::monomial(n, MultiIndex::new(&[j], &[]), GR::one())
    }

    /// `η^{j̄}`
    pub fn eta_bar(n: usize, j: usize) -> Self {
        Self::monomial(n, MultiIndex::new(&[], &[j]), GR::one())
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (MultiIndex, GR)>) -> Self {
        let mut f = Self::zero(n);
        for (m, c) in terms {
            f.add_term(m, c);
        }
        f
    }

    /// Build from `(structure-file key, coefficient)` pairs.
    pub fn from_keys(n: usize, terms: &[(&str, &str)]) -> Result<Self> {
        let mut f = Self::zero(n);
        for (k, c) in terms {
            f.add_term(MultiIndex::parse_key(k, n)?, c.parse()?);
        }
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &GR)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &MultiIndex) -> GR {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: MultiIndex, c: GR) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_default();
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common bidegree of all terms, `None` for zero or mixed forms.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let mut it = self.terms.keys().map(MultiIndex::bidegree);
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn is_pure(&self, p: usize, q: usize) -> bool {
        self.terms.keys().all(|m| m.bidegree() == (p, q))
    }

    pub fn scale(&self, c: &GR) -> Form {
        Form::from_terms(self.n, self.terms.iter().map(|(m, x)| (*m, x * c)))
    }

    pub fn add(&self, other: &Form) -> Form {
        let mut f = self.clone();
        for (m, c) in &other.terms {
            f.add_term(*m, c.clone());
        }
        f
    }

    pub fn sub(&self, other: &Form) -> Form {
        let mut f = self.clone();
        for (m, c) in &other.terms {
            f.add_term(*m, -c);
        }
        f
    }

    pub fn neg(&self) -> Form {
        self.scale(&-GR::one())
    }

    pub fn wedge(&self, other: &Form) -> Form {
        assert_eq!(self.n, other.n, "wedge of forms in different dimensions");
        let mut out = Form::zero(self.n);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some((s, m)) = a.wedge(b) {
                    let c = x * y;
                    out.add_term(m, if s > 0 { c } else { -c });
                }
            }
        }
        out
    }

    /// `self^k` under the wedge product; `self^0 = 1`.
    pub fn wedge_power(&self, k: usize) -> Form {
        (0..k).fold(Form::one(self.n), |acc, _| acc.wedge(self))
    }

    /// Antilinear conjugation, swapping bidegree `(p,q) → (q,p)`.
    pub fn conj(&self) -> Form {
        Form::from_terms(
            self.n,
            self.terms.iter().map(|(m, c)| {
                let (s, cm) = m.conj();
                let c = c.conj();
                (cm, if s > 0 { c } else { -c })
            }),
        )
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// `(self + conj self)/2`
    pub fn real_part(&self) -> Form {
        self.add(&self.conj()).scale(&GR::from_ratios(1, 2, 0, 1))
    }

    /// `(self - conj self)/(2i)`
    pub fn imag_part(&self) -> Form {
        self.sub(&self.conj()).scale(&GR::from_ratios(0, 1, -1, 2))
    }

    pub fn component(&self, p: usize, q: usize) -> Form {
        Form::from_terms(
            self.n,
            self.terms.iter().filter(|(m, _)| m.bidegree() == (p, q)).map(|(m, c)| (*m, c.clone())),
        )
    }

    /// Coordinates relative to an ordered monomial basis; terms outside it are an error.
    pub fn to_vector(&self, basis: &[MultiIndex]) -> Result<Vector> {
        let mut v = vec![GR::zero(); basis.len()];
        let mut hit = 0;
        for (i, m) in basis.iter().enumerate() {
            if let Some(c) = self.terms.get(m) {
                v[i] = c.clone();
                hit += 1;
            }
        }
        if hit != self.terms.len() {
            return Err(Error::Dimension("form has terms outside the given basis".into()));
        }
        Ok(v)
    }

    pub fn from_vector(n: usize, basis: &[MultiIndex], v: &[GR]) -> Form {
        Form::from_terms(n, basis.iter().copied().zip(v.iter().cloned()))
    }

    /// Map from structure-file keys to canonical coefficient strings.
    pub fn to_key_map(&self) -> BTreeMap<String, GR> {
        self.terms.iter().map(|(m, c)| (m.key(), c.clone())).collect()
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{m}")?;
            } else if *m == MultiIndex::ONE {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})·{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Serialized form: `{"n": 3, "terms": {"1~1": "i", ...}}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FormJson {
    pub n: usize,
    pub terms: BTreeMap<String, GR>,
}

impl From<&Form> for FormJson {
    fn from(f: &Form) -> Self {
        FormJson { n: f.n, terms: f.to_key_map() }
    }
}

impl TryFrom<&FormJson> for Form {
    type Error = Error;
    fn try_from(j: &FormJson) -> Result<Form> {
        let mut f = Form::zero(j.n);
        for (k, c) in &j.terms {
            f.add_term(MultiIndex::parse_key(k, j.n)?, c.clone());
        }
        Ok(f)
    }
}

/// Unit `c` with `(iη^{1 1̄})∧…∧(iη^{n n̄}) = c · η^{1..n 1̄..n̄}`; the calibrated volume is `c·η^{1..n 1̄..n̄}`.
pub fn volume_unit(n: usize) -> GR {
    let sign = if (n * (n.saturating_sub(1)) / 2) % 2 == 0 { GR::one() } else { -GR::one() };
    GR::i().pow(n as u32) * sign
}

pub fn top_monomial(n: usize) -> MultiIndex {
    let all: Vec<usize> = (1..=n).collect();
    MultiIndex::new(&all, &all)
}

/// Integral of a top-degree invariant form against the calibrated unit volume.
pub fn integrate(a: &Form) -> GR {
    let n = a.n();
    a.coeff(&top_monomial(n)).checked_div(&volume_unit(n)).expect("unit is nonzero")
}

/// `H` with `a = i Σ H[j,k] η^j ∧ η^{k̄}`.
pub fn hermitian_matrix_of_11(a: &Form) -> Result<Matrix> {
    if !a.is_pure(1, 1) {
        return Err(Error::Precondition("expected a (1,1)-form".into()));
    }
    let n = a.n();
    let mut h = Matrix::zeros(n, n);
    for (m, c) in a.terms() {
        let (j, k) = (m.holo_indices()[0], m.anti_indices()[0]);
        h[(j - 1, k - 1)] = -c.mul_i();
    }
    Ok(h)
}

/// `i Σ H[j,k] η^j ∧ η^{k̄}`.
pub fn form_of_hermitian_11(h: &Matrix) -> Form {
    let n = h.rows();
    let mut f = Form::zero(n);
    for j in 0..n {
        for k in 0..n {
            f.add_term(MultiIndex::new(&[j + 1], &[k + 1]), h[(j, k)].mul_i());
        }
    }
    f
}

/// `H[j,k]` defined by `a ∧ (i η^j ∧ η^{k̄}) = H[j,k]·vol`.
pub fn hermitian_matrix_of_n1n1(a: &Form) -> Result<Matrix> {
    let n = a.n();
    if n == 0 || !a.is_pure(n - 1, n - 1) {
        return Err(Error::Precondition(format!("expected an ({0},{0})-form", n.saturating_sub(1))));
    }
    let mut h = Matrix::zeros(n, n);
    for j in 1..=n {
        for k in 1..=n {
            let e = Form::monomial(n, MultiIndex::new(&[j], &[k]), GR::i());
            h[(j - 1, k - 1)] = integrate(&a.wedge(&e));
        }
    }
    Ok(h)
}

/// Inverse of [`hermitian_matrix_of_n1n1`]: the unique `(n-1,n-1)`-form with the given matrix.
pub fn form_of_hermitian_n1n1(h: &Matrix) -> Result<Form> {
    let n = h.rows();
    let b = basis(n, n - 1, n - 1)?;
    // columns: images of basis monomials, flattened row-major
    let cols: Vec<Vector> = b
        .iter()
        .map(|m| {
            let hm = hermitian_matrix_of_n1n1(&Form::monomial(n, *m, GR::one())).expect("pure");
            (0..n).flat_map(|j| (0..n).map(move |k| (j, k))).map(|(j, k)| hm[(j, k)].clone()).collect()
        })
        .collect();
    let map = Matrix::from_columns(n * n, &cols);
    let target: Vector = (0..n).flat_map(|j| (0..n).map(move |k| (j, k))).map(|(j, k)| h[(j, k)].clone()).collect();
    let x = map.solve(&target).ok_or_else(|| Error::Inconsistent("matrix map not surjective".into()))?;
    Ok(Form::from_vector(n, &b, &x))
}

/// `i Σ_j η^{j j̄}`.
pub fn standard_metric(n: usize) -> Form {
    form_of_hermitian_11(&Matrix::identity(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Matrix;

    fn g(s: &str) -> GR {
        s.parse().unwrap()
    }

    fn f(n: usize, terms: &[(&str, &str)]) -> Form {
        Form::from_keys(n, terms).unwrap()
    }

    #[test]
    fn basis_sizes_and_order() {
        let b = basis(3, 0, 1).unwrap();
        assert_eq!(b, vec![MultiIndex::new(&[], &[1]), MultiIndex::new(&[], &[2]), MultiIndex::new(&[], &[3])]);
        assert_eq!(basis(3, 1, 1).unwrap().len(), 9);
        assert_eq!(basis(3, 2, 2).unwrap().len(), 9);
        let b11 = basis(3, 1, 1).unwrap();
        assert_eq!(b11[1], MultiIndex::new(&[1], &[2]));
        assert_eq!(b11[3], MultiIndex::new(&[2], &[1]));
        assert!(matches!(basis(3, 4, 0), Err(Error::Bidegree { .. })));
    }

    #[test]
    fn signed_basis_count_vanishes() {
        for n in 1..=4 {
            let s: i64 = (0..=n)
                .flat_map(|p| (0..=n).map(move |q| (p, q)))
                .map(|(p, q)| {
                    let d = basis(n, p, q).unwrap().len() as i64;
                    assert_eq!(d as usize, binomial(n, p) * binomial(n, q));
                    if (p + q) % 2 == 0 { d } else { -d }
                })
                .sum();
            assert_eq!(s, 0);
        }
    }

    #[test]
    fn wedge_signs() {
        let (e1, e2) = (Form::eta(3, 1), Form::eta(3, 2));
        assert_eq!(e1.wedge(&e2), f(3, &[("12", "1")]));
        assert_eq!(e2.wedge(&e1), f(3, &[("12", "-1")]));
        assert!(e1.wedge(&e1).is_zero());
        let lhs = e1.add(&e2).wedge(&f(3, &[("~1~2", "1")]));
        assert_eq!(lhs, f(3, &[("1~1~2", "1"), ("2~1~2", "1")]));
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(Form::eta_bar(3, 1).conj(), Form::eta(3, 1));
        // conj(η^1 ∧ η^{2̄}) = η^{1̄} ∧ η^2 = -η^2 ∧ η^{1̄}
        assert_eq!(f(3, &[("1~2", "1")]).conj(), f(3, &[("2~1", "-1")]));
        assert_eq!(f(3, &[("1~1", "i")]).conj(), f(3, &[("1~1", "i")]));
    }

    #[test]
    fn components_resum() {
        let a = f(3, &[("12", "1"), ("1~1", "1")]);
        assert_eq!(a.component(1, 1), f(3, &[("1~1", "1")]));
        assert!(f(3, &[("12~1~2", "1")]).component(1, 1).is_zero());
        assert_eq!(a.component(2, 0).add(&a.component(1, 1)).add(&a.component(0, 2)), a);
    }

    #[test]
    fn square_of_standard_metric() {
        // (iΣη^{jj̄})² = -2Σ_{j<k} η^j∧η^{j̄}∧η^k∧η^{k̄} = 2Σ_{j<k} η^{jk k̄ j̄ }… in canonical order +2η^{jk|j̄k̄}
        let w = standard_metric(3);
        let w2 = w.wedge_power(2);
        let jj = |j: usize| Form::eta(3, j).wedge(&Form::eta_bar(3, j));
        let mut expected = Form::zero(3);
        for (j, k) in [(1, 2), (1, 3), (2, 3)] {
            expected = expected.add(&jj(j).wedge(&jj(k)).scale(&g("-2")));
        }
        assert_eq!(w2, expected);
        assert_eq!(w2, f(3, &[("12~1~2", "2"), ("13~1~3", "2"), ("23~2~3", "2")]));
        assert_eq!(w.wedge_power(1), w);
        assert_eq!(w.wedge_power(0), Form::one(3));
    }

    #[test]
    fn volume_calibration() {
        for n in 1..=4 {
            let top = (1..=n).fold(Form::one(n), |acc, j| {
                acc.wedge(&Form::monomial(n, MultiIndex::new(&[j], &[j]), GR::i()))
            });
            assert_eq!(integrate(&top), GR::one(), "n = {n}");
        }
        assert_eq!(volume_unit(3), GR::i());
    }

    #[test]
    fn hermitian_11_examples() {
        assert_eq!(hermitian_matrix_of_11(&standard_metric(3)).unwrap(), Matrix::identity(3));
        let half = standard_metric(3).scale(&g("1/2"));
        let h = hermitian_matrix_of_11(&half).unwrap();
        assert_eq!(h, Matrix::identity(3).scale(&g("1/2")));
        assert!(h.is_pos_def_hermitian().unwrap());
        let off = f(3, &[("1~2", "i"), ("2~1", "i")]);
        let h = hermitian_matrix_of_11(&off).unwrap();
        assert_eq!((h[(0, 1)].clone(), h[(1, 0)].clone()), (GR::one(), GR::one()));
        assert!(!h.is_pos_def_hermitian().unwrap());
        assert!(hermitian_matrix_of_11(&Form::eta(3, 1)).is_err());
    }

    #[test]
    fn hermitian_n1n1_examples() {
        let h = hermitian_matrix_of_n1n1(&standard_metric(3).wedge_power(2)).unwrap();
        assert_eq!(h, Matrix::identity(3).scale(&g("2")));
        assert!(h.is_pos_def_hermitian().unwrap());
        assert!(hermitian_matrix_of_n1n1(&Form::zero(3)).unwrap().is_zero());
        let w = form_of_hermitian_11(&Matrix::diagonal(&[g("2"), g("1"), g("1")]));
        let h = hermitian_matrix_of_n1n1(&w.wedge_power(2)).unwrap();
        // ω² for diag(2,1,1): H = 2·diag(1, 2, 2)
        assert_eq!(h, Matrix::diagonal(&[g("2"), g("4"), g("4")]));
        assert!(hermitian_matrix_of_n1n1(&standard_metric(3)).is_err());
    }

    #[test]
    fn n1n1_map_inverts() {
        let h = Matrix::from_rows(vec![
            vec![g("3"), g("1+i"), g("0")],
            vec![g("1-i"), g("2"), g("i/2")],
            vec![g("0"), g("-i/2"), g("1")],
        ]);
        let a = form_of_hermitian_n1n1(&h).unwrap();
        assert!(a.is_real());
        assert_eq!(hermitian_matrix_of_n1n1(&a).unwrap(), h);
    }

    #[test]
    fn key_round_trip() {
        for k in ["12", "1~2", "~1~2", "12~1", "123~1~2~3"] {
            assert_eq!(MultiIndex::parse_key(k, 3).unwrap().key(), k);
        }
        assert!(MultiIndex::parse_key("21", 3).is_err());
        assert!(MultiIndex::parse_key("14", 3).is_err());
        assert!(MultiIndex::parse_key("1~", 3).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_form(n: usize) -> impl Strategy<Value = Form> {
            proptest::collection::vec((0u16..(1 << n), 0u16..(1 << n), -3i64..4, -3i64..4), 0..5)
                .prop_map(move |ts| {
                    Form::from_terms(
                        n,
                        ts.into_iter().map(|(h, a, x, y)| {
                            (MultiIndex { holo: h, anti: a }, GR::from_ratios(x, 1, y, 1))
                        }),
                    )
                })
        }

        fn homogeneous_parts(a: &Form) -> Vec<Form> {
            (0..=2 * a.n())
                .map(|k| {
                    Form::from_terms(
                        a.n(),
                        a.terms().filter(|(m, _)| m.degree() == k).map(|(m, c)| (*m, c.clone())),
                    )
                })
                .collect()
        }

        proptest! {
            #[test]
            fn wedge_associative(a in arb_form(3), b in arb_form(3), c in arb_form(3)) {
                prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
            }

            #[test]
            fn wedge_graded_commutative(a in arb_form(3), b in arb_form(3)) {
                for x in homogeneous_parts(&a) {
                    for y in homogeneous_parts(&b) {
                        let (Some(dx), Some(dy)) = (x.terms().next().map(|t| t.0.degree()), y.terms().next().map(|t| t.0.degree())) else { continue };
                        let s = if (dx * dy) % 2 == 0 { GR::one() } else { -GR::one() };
                        prop_assert_eq!(x.wedge(&y), y.wedge(&x).scale(&s));
                    }
                }
            }

            #[test]
            fn conj_is_antilinear_involution(a in arb_form(3), b in arb_form(3)) {
                prop_assert_eq!(a.conj().conj(), a.clone());
                prop_assert_eq!(a.scale(&GR::i()).conj(), a.conj().scale(&-GR::i()));
                prop_assert_eq!(a.wedge(&b).conj(), a.conj().wedge(&b.conj()));
            }

            #[test]
            fn positive_11_gives_positive_n1n1(
                d in proptest::collection::vec(1i64..5, 3),
                off in proptest::collection::vec((-1i64..2, -1i64..2), 3),
            ) {
                // diagonally dominant Hermitian ⇒ positive definite
                let mut h = Matrix::diagonal(&d.iter().map(|&x| GR::from_int(x + 4)).collect::<Vec<_>>());
                for (k, &(i, j)) in [(0, 1), (0, 2), (1, 2)].iter().enumerate() {
                    let z = GR::from_ratios(off[k].0, 1, off[k].1, 1);
                    h[(i, j)] = z.clone();
                    h[(j, i)] = z.conj();
                }
                prop_assume!(h.is_pos_def_hermitian().unwrap());
                let w = form_of_hermitian_11(&h);
                prop_assert!(w.is_real());
                let hn = hermitian_matrix_of_n1n1(&w.wedge_power(2)).unwrap();
                prop_assert!(hn.is_pos_def_hermitian().unwrap());
            }
        }
    }
}
