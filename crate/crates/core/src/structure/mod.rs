//! Complex structure equations `dη^k`, their validation, and the matrices of `∂`, `∂̄`, `d`.

pub mod expr;
pub mod family;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Matrix, Vector, GR};
use crate::exterior::{BasisTable, Form, MultiIndex, MAX_DIM};

pub use expr::CoeffExpr;
pub use family::FamilySpec;

/// `dη^1 … dη^n` for a (1,0)-coframe; `dη^{k̄}` is always `conj(dη^k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureEquations {
    pub n: usize,
    pub name: String,
    d: Vec<Form>,
}

/// Structure file layout: `{"n": 3, "name": "...", "d": {"3": {"12": "1", "1~1": "1"}}}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StructureFile {
    pub n: usize,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub d: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ValidationReport {
    pub name: String,
    pub n: usize,
    pub unimodular: bool,
    pub nilpotent: bool,
    pub warnings: Vec<String>,
}

pub(crate) fn parse_generator(key: &str, n: usize) -> Result<usize> {
    match key.parse::<usize>() {
        Ok(k) if (1..=n).contains(&k) => Ok(k),
        _ => Err(Error::Malformed(format!("generator `{key}` is not in 1..{n}"))),
    }
}

/// Checks shape: only `(2,0)` and `(1,1)` monomials are allowed in `dη^k`.
pub(crate) fn check_shape(k: usize, form: &Form) -> Result<()> {
    for (m, _) in form.terms() {
        match m.bidegree() {
            (2, 0) | (1, 1) => {}
            (0, 2) => return Err(Error::NonIntegrable { generator: k, key: m.key() }),
            _ => return Err(Error::Malformed(format!("dη^{k}: `{}` is not a 2-form monomial", m.key()))),
        }
    }
    Ok(())
}

impl StructureEquations {
    /// Builds and validates (`d² = 0` on every generator).
    pub fn new(n: usize, name: impl Into<String>, d: Vec<Form>) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::Malformed(format!("dimension n = {n} outside 1..{MAX_DIM}")));
        }
        if d.len() != n || d.iter().any(|f| f.n() != n) {
            return Err(Error::Malformed("need exactly one differential per generator".into()));
        }
        for (k, f) in d.iter().enumerate() {
            check_shape(k + 1, f)?;
        }
        let s = Self { n, name: name.into(), d };
        for k in 1..=n {
            let dd = s.d_form(&s.d[k - 1]);
            if !dd.is_zero() {
                return Err(Error::NotDifferential { generator: k, residual: dd.to_string() });
            }
        }
        Ok(s)
    }

    /// From `(generator, [(monomial key, coefficient)])` with constant coefficients.
    pub fn from_keys(n: usize, name: &str, eqs: &[(usize, &[(&str, &str)])]) -> Result<Self> {
        let mut d = vec![Form::zero(n); n];
        for (k, terms) in eqs {
            if *k == 0 || *k > n {
                return Err(Error::Malformed(format!("generator {k} not in 1..{n}")));
            }
            d[k - 1] = Form::from_keys(n, terms)?;
        }
        Self::new(n, name, d)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let file: StructureFile =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &StructureFile) -> Result<Self> {
        let n = file.n;
        if n == 0 || n > MAX_DIM {
            return Err(Error::Malformed(format!("dimension n = {n} outside 1..{MAX_DIM}")));
        }
        let mut d = vec![Form::zero(n); n];
        for (gk, terms) in &file.d {
            let k = parse_generator(gk, n)?;
            let mut f = Form::zero(n);
            for (key, coeff) in terms {
                let m = MultiIndex::parse_key(key, n)?;
                if m.bidegree() == (0, 2) {
                    return Err(Error::NonIntegrable { generator: k, key: key.clone() });
                }
                f.add_term(m, coeff.parse()?);
            }
            d[k - 1] = f;
        }
        Self::new(n, file.name.clone(), d)
    }

    pub fn to_file(&self) -> StructureFile {
        let d = self
            .d
            .iter()
            .enumerate()
            .filter(|(_, f)| !f.is_zero())
            .map(|(k, f)| {
                let terms = f.terms().map(|(m, c)| (m.key(), c.to_string())).collect();
                ((k + 1).to_string(), terms)
            })
            .collect();
        StructureFile { n: self.n, name: self.name.clone(), d }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    /// `dη^k` (1-based).
    pub fn d_eta(&self, k: usize) -> &Form {
        &self.d[k - 1]
    }

    pub fn differentials(&self) -> &[Form] {
        &self.d
    }

    /// `d` of a single generator (bit position in the packed monomial order).
    fn d_generator(&self, holo: bool, k: usize) -> Form {
        if holo {
            self.d[k - 1].clone()
        } else {
            self.d[k - 1].conj()
        }
    }

    /// `d` of a monomial by the Leibniz rule.
    pub fn d_monomial(&self, m: &MultiIndex) -> Form {
        let n = self.n;
        let gens: Vec<(bool, usize)> = m
            .holo_indices()
            .into_iter()
            .map(|j| (true, j))
            .chain(m.anti_indices().into_iter().map(|j| (false, j)))
            .collect();
        let mono = |g: &[(bool, usize)]| {
            let holo: Vec<usize> = g.iter().filter(|x| x.0).map(|x| x.1).collect();
            let anti: Vec<usize> = g.iter().filter(|x| !x.0).map(|x| x.1).collect();
            Form::monomial(n, MultiIndex::new(&holo, &anti), GR::one())
        };
        let mut out = Form::zero(n);
        for (i, &(holo, k)) in gens.iter().enumerate() {
            let dg = self.d_generator(holo, k);
            if dg.is_zero() {
                continue;
            }
            let term = mono(&gens[..i]).wedge(&dg).wedge(&mono(&gens[i + 1..]));
            out = if i % 2 == 0 { out.add(&term) } else { out.sub(&term) };
        }
        out
    }

    pub fn d_form(&self, a: &Form) -> Form {
        let mut out = Form::zero(self.n);
        for (m, c) in a.terms() {
            out = out.add(&self.d_monomial(m).scale(c));
        }
        out
    }

    pub fn del(&self, a: &Form) -> Form {
        let mut out = Form::zero(self.n);
        for (m, c) in a.terms() {
            let (p, q) = m.bidegree();
            out = out.add(&self.d_monomial(m).component(p + 1, q).scale(c));
        }
        out
    }

    pub fn delbar(&self, a: &Form) -> Form {
        let mut out = Form::zero(self.n);
        for (m, c) in a.terms() {
            let (p, q) = m.bidegree();
            out = out.add(&self.d_monomial(m).component(p, q + 1).scale(c));
        }
        out
    }

    /// Lie brackets of the complexified algebra on the dual basis of `η^1..η^n, η^{1̄}..η^{n̄}`:
    /// `[e_a, e_b] = -Σ_c C^c_{ab} e_c` where `dθ^c = Σ_{a<b} C^c_{ab} θ^{ab}`.
    fn bracket_table(&self) -> Vec<Vec<Vector>> {
        let n = self.n;
        let dim = 2 * n;
        let gen = |a: usize| if a < n { MultiIndex::new(&[a + 1], &[]) } else { MultiIndex::new(&[], &[a - n + 1]) };
        let dtheta: Vec<Form> = (0..dim).map(|c| self.d_generator(c < n, c % n + 1)).collect();
        let mut table = vec![vec![vec![GR::zero(); dim]; dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                if a == b {
                    continue;
                }
                let (s, m) = gen(a).wedge(&gen(b)).expect("distinct");
                for c in 0..dim {
                    let coeff = dtheta[c].coeff(&m);
                    table[a][b][c] = if s > 0 { -coeff } else { coeff };
                }
            }
        }
        table
    }

    /// Lower central series reaches zero.
    pub fn is_nilpotent(&self) -> bool {
        let dim = 2 * self.n;
        let table = self.bracket_table();
        let mut current: Vec<Vector> =
            (0..dim).map(|i| (0..dim).map(|j| if i == j { GR::one() } else { GR::zero() }).collect()).collect();
        for _ in 0..=dim {
            let mut next = Vec::new();
            for a in 0..dim {
                for v in &current {
                    let mut w = vec![GR::zero(); dim];
                    for (b, vb) in v.iter().enumerate() {
                        if vb.is_zero() {
                            continue;
                        }
                        for c in 0..dim {
                            w[c] += &(vb * &table[a][b][c]);
                        }
                    }
                    if !crate::exact::is_zero_vec(&w) {
                        next.push(w);
                    }
                }
            }
            let next = crate::exact::independent_subset(dim, &next);
            if next.is_empty() {
                return true;
            }
            if next.len() == current.len() {
                return false;
            }
            current = next;
        }
        false
    }

    pub fn validate(&self) -> ValidationReport {
        let ops = Operators::new(self);
        let top = 2 * self.n - 1;
        let unimodular = ops.d_total(top).is_zero();
        let nilpotent = self.is_nilpotent();
        let mut warnings = Vec::new();
        if !nilpotent {
            warnings.push(
                "solvable non-nilpotent algebra: the invariant cohomology computed here may differ from the cohomology of a compact quotient".to_string(),
            );
        }
        if !unimodular {
            warnings.push("non-unimodular algebra: duality checks and integrals of exact forms do not apply".to_string());
        }
        ValidationReport { name: self.name.clone(), n: self.n, unimodular, nilpotent, warnings }
    }
}

/// Matrices of `∂: Λ^{p,q} → Λ^{p+1,q}` and `∂̄: Λ^{p,q} → Λ^{p,q+1}` in the canonical bases.
#[derive(Clone, Debug)]
pub struct Operators {
    pub n: usize,
    pub basis: Arc<BasisTable>,
    del: Vec<Vec<Matrix>>,
    delbar: Vec<Vec<Matrix>>,
}

impl Operators {
    pub fn new(s: &StructureEquations) -> Self {
        let n = s.n;
        let basis = Arc::new(BasisTable::new(n));
        let mut del = vec![vec![Matrix::zeros(0, 0); n + 1]; n + 1];
        let mut delbar = vec![vec![Matrix::zeros(0, 0); n + 1]; n + 1];
        for p in 0..=n {
            for q in 0..=n {
                let src = basis.get(p, q);
                let dm: Vec<Form> = src.iter().map(|m| s.d_monomial(m)).collect();
                let block = |pp: usize, qq: usize| -> Matrix {
                    if pp > n || qq > n {
                        return Matrix::zeros(0, src.len());
                    }
                    let dst = basis.get(pp, qq);
                    let cols: Vec<Vector> = dm
                        .iter()
                        .map(|f| f.component(pp, qq).to_vector(dst).expect("component lies in its bidegree"))
                        .collect();
                    Matrix::from_columns(dst.len(), &cols)
                };
                del[p][q] = block(p + 1, q);
                delbar[p][q] = block(p, q + 1);
            }
        }
        Self { n, basis, del, delbar }
    }

    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.basis.dim(p, q)
    }

    /// `∂` on `(p,q)`; a `0 × dim` matrix when `p = n`.
    pub fn del(&self, p: usize, q: usize) -> &Matrix {
        &self.del[p][q]
    }

    pub fn delbar(&self, p: usize, q: usize) -> &Matrix {
        &self.delbar[p][q]
    }

    /// `∂∂̄: (p,q) → (p+1,q+1)`.
    pub fn ddbar(&self, p: usize, q: usize) -> Matrix {
        if p >= self.n || q >= self.n {
            return Matrix::zeros(0, self.dim(p, q));
        }
        self.del(p, q + 1).mul(self.delbar(p, q))
    }

    /// Images `∂(Λ^{p-1,q})` as columns in `(p,q)` coordinates.
    pub fn im_del_into(&self, p: usize, q: usize) -> Vec<Vector> {
        if p == 0 {
            Vec::new()
        } else {
            self.del(p - 1, q).columns()
        }
    }

    pub fn im_delbar_into(&self, p: usize, q: usize) -> Vec<Vector> {
        if q == 0 {
            Vec::new()
        } else {
            self.delbar(p, q - 1).columns()
        }
    }

    pub fn im_ddbar_into(&self, p: usize, q: usize) -> Vec<Vector> {
        if p == 0 || q == 0 {
            Vec::new()
        } else {
            self.ddbar(p - 1, q - 1).columns()
        }
    }

    /// Total differential `Λ^k → Λ^{k+1}` in the concatenated bidegree bases.
    pub fn d_total(&self, k: usize) -> Matrix {
        let b = &self.basis;
        let rows = b.total_dim(k + 1);
        let cols = b.total_dim(k);
        let mut m = Matrix::zeros(rows, cols);
        for (p, q) in b.total_parts(k) {
            let c0 = b.total_offset(k, p);
            let mut place = |blk: &Matrix, pp: usize| {
                let r0 = b.total_offset(k + 1, pp);
                for i in 0..blk.rows() {
                    for j in 0..blk.cols() {
                        m[(r0 + i, c0 + j)] = blk[(i, j)].clone();
                    }
                }
            };
            if p < self.n {
                place(self.del(p, q), p + 1);
            }
            if q < self.n {
                place(self.delbar(p, q), p);
            }
        }
        m
    }

    pub fn to_form(&self, p: usize, q: usize, v: &[GR]) -> Form {
        Form::from_vector(self.n, self.basis.get(p, q), v)
    }

    pub fn to_vec(&self, p: usize, q: usize, f: &Form) -> Result<Vector> {
        f.to_vector(self.basis.get(p, q))
    }

    pub fn total_to_form(&self, k: usize, v: &[GR]) -> Form {
        Form::from_vector(self.n, &self.basis.total_basis(k), v)
    }

    pub fn total_to_vec(&self, k: usize, f: &Form) -> Result<Vector> {
        f.to_vector(&self.basis.total_basis(k))
    }

    /// `∂² = ∂̄² = ∂∂̄ + ∂̄∂ = 0` in every bidegree.
    pub fn check_identities(&self) -> Result<()> {
        let n = self.n;
        for p in 0..=n {
            for q in 0..=n {
                let fail = |what: &str| Err(Error::Inconsistent(format!("{what} ≠ 0 on ({p},{q})")));
                if p + 2 <= n && !self.del(p + 1, q).mul(self.del(p, q)).is_zero() {
                    return fail("∂²");
                }
                if q + 2 <= n && !self.delbar(p, q + 1).mul(self.delbar(p, q)).is_zero() {
                    return fail("∂̄²");
                }
                if p < n && q < n {
                    let a = self.del(p, q + 1).mul(self.delbar(p, q));
                    let b = self.delbar(p + 1, q).mul(self.del(p, q));
                    if !a.add(&b).is_zero() {
                        return fail("∂∂̄ + ∂̄∂");
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iwasawa() -> StructureEquations {
        StructureEquations::parse_json(r#"{"n":3,"name":"iwasawa","d":{"3":{"12":"1"}}}"#).unwrap()
    }

    #[test]
    fn parse_examples() {
        let s = iwasawa();
        assert_eq!(s.d_eta(3), &Form::from_keys(3, &[("12", "1")]).unwrap());
        assert!(s.validate().unimodular);
        let b = StructureEquations::parse_json(r#"{"n":3,"d":{"3":{"1~1":"1","2~2":"-1"}}}"#).unwrap();
        assert!(b.validate().nilpotent);
        let bad = StructureEquations::parse_json(r#"{"n":3,"d":{"3":{"~1~2":"1"}}}"#);
        assert!(matches!(bad, Err(Error::NonIntegrable { generator: 3, .. })));
        assert!(matches!(StructureEquations::parse_json(r#"{"n":3,"d":{"4":{}}}"#), Err(Error::Malformed(_))));
        assert!(matches!(StructureEquations::parse_json(r#"{"n":3,"d":{"3":{"21":"1"}}}"#), Err(Error::Malformed(_))));
    }

    #[test]
    fn d_squared_violation_names_generator() {
        let r = StructureEquations::from_keys(3, "bad", &[(2, &[("1~1", "1")]), (3, &[("2~2", "1")])]);
        assert!(matches!(r, Err(Error::NotDifferential { generator: 3, .. })));
    }

    #[test]
    fn corrupted_iwasawa_still_validates() {
        let s = StructureEquations::from_keys(3, "x", &[(3, &[("12", "1"), ("13", "1")])]);
        assert!(s.is_ok());
    }

    #[test]
    fn nakamura_validates_and_is_not_nilpotent() {
        let s = StructureEquations::from_keys(
            3,
            "nakamura",
            &[(1, &[("13", "2*i"), ("3~3", "1")]), (2, &[("23", "-2*i")])],
        )
        .unwrap();
        let r = s.validate();
        assert!(r.unimodular);
        assert!(!r.nilpotent);
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn iwasawa_operators() {
        let s = iwasawa();
        let ops = Operators::new(&s);
        let d10 = ops.del(1, 0);
        let b20 = ops.basis.get(2, 0);
        let i12 = b20.iter().position(|m| *m == MultiIndex::new(&[1, 2], &[])).unwrap();
        assert_eq!(d10.column(2)[i12], GR::one());
        assert!(d10.column(0).iter().all(GR::is_zero));
        let db01 = ops.delbar(0, 1);
        let b02 = ops.basis.get(0, 2);
        let j12 = b02.iter().position(|m| *m == MultiIndex::new(&[], &[1, 2])).unwrap();
        assert_eq!(db01.column(2)[j12], GR::one());
        ops.check_identities().unwrap();
    }

    #[test]
    fn conj_equivariance() {
        let s = StructureEquations::from_keys(3, "x", &[(3, &[("12", "1"), ("1~1", "1"), ("1~2", "1"), ("2~2", "-2")])]).unwrap();
        let ops = Operators::new(&s);
        for p in 0..=3 {
            for q in 0..3 {
                for m in ops.basis.get(p, q) {
                    let f = Form::monomial(3, *m, GR::one());
                    assert_eq!(s.delbar(&f.conj()), s.del(&f).conj());
                }
            }
        }
    }

    #[test]
    fn total_d_squares_to_zero() {
        let s = StructureEquations::from_keys(3, "x", &[(3, &[("12", "1"), ("1~1", "1")])]).unwrap();
        let ops = Operators::new(&s);
        for k in 0..5 {
            assert!(ops.d_total(k + 1).mul(&ops.d_total(k)).is_zero());
        }
    }

    #[test]
    fn json_round_trip() {
        let s = StructureEquations::from_keys(3, "x", &[(3, &[("12", "1"), ("1~1", "1/2-3/4*i")])]).unwrap();
        assert_eq!(StructureEquations::parse_json(&s.to_json()).unwrap(), s);
    }
}
