//! Deformation families: a `t`-dependent (1,0)-frame `ν_t` over a fixed ambient coframe,
//! together with the structure equations of `ν_t`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{check_shape, parse_generator, CoeffExpr, StructureEquations};
use crate::error::{Error, Result};
use crate::exact::{Matrix, GR};
use crate::exterior::{Form, MultiIndex};

#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub n: usize,
    pub name: String,
    /// `dν^k` as coefficient expressions on `ν`-monomials.
    pub d: Vec<BTreeMap<MultiIndex, CoeffExpr>>,
    /// `ν^k = Σ_j holo[k][j] η^j + anti[k][j] η^{j̄}`.
    pub frame_holo: Vec<Vec<CoeffExpr>>,
    pub frame_anti: Vec<Vec<CoeffExpr>>,
    /// Expression vanishing exactly on the declared jump locus.
    pub locus: Option<CoeffExpr>,
    pub domain: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FamilyFile {
    pub n: usize,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub d: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub frame: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locus: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
}

/// `Ω` split by the bigrading of `ν_t`.
#[derive(Clone, Debug)]
pub struct FrameSplit {
    /// `Ω` rewritten on `ν_t`-monomials.
    pub in_frame: Form,
    /// `((p,q), component in ν_t coordinates, same component in ambient coordinates)`.
    pub components: Vec<((usize, usize), Form, Form)>,
}

fn zero_expr() -> CoeffExpr {
    CoeffExpr::Int(0u32.into())
}

fn one_expr() -> CoeffExpr {
    CoeffExpr::Int(1u32.into())
}

/// Image of `a` under the algebra map sending generator `g` (holomorphic `0..n`, then
/// antiholomorphic `n..2n`) to the 1-form `images[g]`.
pub fn substitute(a: &Form, images: &[Form]) -> Form {
    let n = a.n();
    let mut out = Form::zero(n);
    for (m, c) in a.terms() {
        let gens = m
            .holo_indices()
            .into_iter()
            .map(|j| j - 1)
            .chain(m.anti_indices().into_iter().map(|j| n + j - 1));
        let img = gens.fold(Form::one(n), |acc, g| acc.wedge(&images[g]));
        out = out.add(&img.scale(c));
    }
    out
}

impl FamilySpec {
    pub fn parse_json(text: &str) -> Result<Self> {
        let file: FamilyFile = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &FamilyFile) -> Result<Self> {
        let n = file.n;
        if n == 0 || n > crate::exterior::MAX_DIM {
            return Err(Error::Malformed(format!("dimension n = {n} out of range")));
        }
        let mut d = vec![BTreeMap::new(); n];
        for (gk, terms) in &file.d {
            let k = parse_generator(gk, n)?;
            for (key, text) in terms {
                let m = MultiIndex::parse_key(key, n)?;
                match m.bidegree() {
                    (2, 0) | (1, 1) => {}
                    (0, 2) => return Err(Error::NonIntegrable { generator: k, key: key.clone() }),
                    _ => return Err(Error::Malformed(format!("`{key}` is not a 2-form monomial"))),
                }
                d[k - 1].insert(m, CoeffExpr::parse(text)?);
            }
        }
        let mut frame_holo: Vec<Vec<CoeffExpr>> =
            (0..n).map(|k| (0..n).map(|j| if j == k { one_expr() } else { zero_expr() }).collect()).collect();
        let mut frame_anti: Vec<Vec<CoeffExpr>> = vec![vec![zero_expr(); n]; n];
        for (gk, row) in &file.frame {
            let k = parse_generator(gk, n)?;
            frame_holo[k - 1] = vec![zero_expr(); n];
            for (key, text) in row {
                let e = CoeffExpr::parse(text)?;
                match key.strip_prefix('~') {
                    Some(j) => frame_anti[k - 1][parse_generator(j, n)? - 1] = e,
                    None => frame_holo[k - 1][parse_generator(key, n)? - 1] = e,
                }
            }
        }
        let locus = file.locus.as_deref().map(CoeffExpr::parse).transpose()?;
        let f = FamilySpec { n, name: file.name.clone(), d, frame_holo, frame_anti, locus, domain: file.domain.clone() };
        let m0 = f.frame_matrix(&GR::zero())?;
        if m0 != Matrix::identity(2 * n) {
            return Err(Error::Malformed("frame must be the identity at t = 0".into()));
        }
        f.base()?;
        Ok(f)
    }

    pub fn to_file(&self) -> FamilyFile {
        let is_const = |e: &CoeffExpr, v: u32| *e == CoeffExpr::Int(v.into());
        let d = self
            .d
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.is_empty())
            .map(|(k, t)| ((k + 1).to_string(), t.iter().map(|(m, e)| (m.key(), e.to_string())).collect()))
            .collect();
        let mut frame = BTreeMap::new();
        for k in 0..self.n {
            let identity_row = (0..self.n).all(|j| is_const(&self.frame_holo[k][j], (j == k) as u32))
                && self.frame_anti[k].iter().all(|e| is_const(e, 0));
            if identity_row {
                continue;
            }
            let mut row = BTreeMap::new();
            for j in 0..self.n {
                if !is_const(&self.frame_holo[k][j], 0) {
                    row.insert((j + 1).to_string(), self.frame_holo[k][j].to_string());
                }
                if !is_const(&self.frame_anti[k][j], 0) {
                    row.insert(format!("~{}", j + 1), self.frame_anti[k][j].to_string());
                }
            }
            frame.insert((k + 1).to_string(), row);
        }
        FamilyFile {
            n: self.n,
            name: self.name.clone(),
            d,
            frame,
            locus: self.locus.as_ref().map(|e| e.to_string()),
            domain: self.domain.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    /// Structure equations of `ν_t` (validated).
    pub fn instantiate(&self, t: &GR) -> Result<StructureEquations> {
        let mut d = Vec::with_capacity(self.n);
        for (k, terms) in self.d.iter().enumerate() {
            let mut f = Form::zero(self.n);
            for (m, e) in terms {
                f.add_term(*m, e.eval(t)?);
            }
            check_shape(k + 1, &f)?;
            d.push(f);
        }
        let name = if t.is_zero() { self.name.clone() } else { format!("{}@t={}", self.name, t) };
        StructureEquations::new(self.n, name, d)
    }

    pub fn base(&self) -> Result<StructureEquations> {
        self.instantiate(&GR::zero())
    }

    /// Rows `ν^1..ν^n, ν^{1̄}..ν^{n̄}` over columns `η^1..η^n, η^{1̄}..η^{n̄}`.
    pub fn frame_matrix(&self, t: &GR) -> Result<Matrix> {
        let n = self.n;
        let mut m = Matrix::zeros(2 * n, 2 * n);
        for k in 0..n {
            for j in 0..n {
                let a = self.frame_holo[k][j].eval(t)?;
                let b = self.frame_anti[k][j].eval(t)?;
                m[(n + k, n + j)] = a.conj();
                m[(n + k, j)] = b.conj();
                m[(k, j)] = a;
                m[(k, n + j)] = b;
            }
        }
        Ok(m)
    }

    fn rows_as_forms(&self, m: &Matrix) -> Vec<Form> {
        let n = self.n;
        (0..2 * n)
            .map(|a| {
                let mut f = Form::zero(n);
                for j in 0..n {
                    f.add_term(MultiIndex::new(&[j + 1], &[]), m[(a, j)].clone());
                    f.add_term(MultiIndex::new(&[], &[j + 1]), m[(a, n + j)].clone());
                }
                f
            })
            .collect()
    }

    /// Ambient 1-forms `ν^a_t` (holomorphic then antiholomorphic).
    pub fn frame_images(&self, t: &GR) -> Result<Vec<Form>> {
        Ok(self.rows_as_forms(&self.frame_matrix(t)?))
    }

    /// `η^b` written in the `ν_t` frame.
    pub fn inverse_images(&self, t: &GR) -> Result<Vec<Form>> {
        let inv = self.frame_matrix(t)?.inverse().map_err(|_| Error::SingularFrame(t.to_string()))?;
        Ok(self.rows_as_forms(&inv))
    }

    /// Checks that the declared `dν_t` agrees with `d` of the ambient structure applied to `ν_t`.
    pub fn check_consistency(&self, t: &GR) -> Result<()> {
        let ambient = self.base()?;
        let st = self.instantiate(t)?;
        let nu = self.frame_images(t)?;
        for k in 1..=self.n {
            let lhs = ambient.d_form(&nu[k - 1]);
            let rhs = substitute(st.d_eta(k), &nu);
            if lhs != rhs {
                return Err(Error::Inconsistent(format!(
                    "family `{}` at t = {t}: dν^{k} declared {} but the ambient structure gives {}",
                    self.name,
                    rhs,
                    lhs
                )));
            }
        }
        Ok(())
    }

    /// Whether `t` lies on the declared jump locus.
    pub fn on_locus(&self, t: &GR) -> Result<Option<bool>> {
        self.locus.as_ref().map(|e| e.eval(t).map(|v| v.is_zero())).transpose()
    }

    pub fn frame_change_bigrading(&self, t: &GR, omega: &Form) -> Result<FrameSplit> {
        let n = self.n;
        let to_frame = self.inverse_images(t)?;
        let to_ambient = self.frame_images(t)?;
        let in_frame = substitute(omega, &to_frame);
        let mut components = Vec::new();
        for deg in 0..=2 * n {
            for p in 0..=n.min(deg) {
                let q = deg - p;
                if q > n {
                    continue;
                }
                let c = in_frame.component(p, q);
                if c.is_zero() {
                    continue;
                }
                let amb = substitute(&c, &to_ambient);
                components.push(((p, q), c, amb));
            }
        }
        Ok(FrameSplit { in_frame, components })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::standard_metric;

    fn g(s: &str) -> GR {
        s.parse().unwrap()
    }

    const ABELIAN_LIMIT: &str = r#"{
        "n": 3, "name": "abelian-limit",
        "d": {"3": {"12": "-conj(t)/(1-t*conj(t))", "1~1": "1", "1~2": "1/(1-t*conj(t))"}},
        "frame": {"2": {"2": "1", "~2": "t"}},
        "domain": "|t| < 1"
    }"#;

    #[test]
    fn instantiate_examples() {
        let f = FamilySpec::parse_json(ABELIAN_LIMIT).unwrap();
        let s = f.instantiate(&g("1/2")).unwrap();
        assert_eq!(s.d_eta(3).coeff(&MultiIndex::new(&[1, 2], &[])), g("-2/3"));
        assert_eq!(f.base().unwrap().d_eta(3), &Form::from_keys(3, &[("1~1", "1"), ("1~2", "1")]).unwrap());
        for t in ["1/2", "i/3", "1/10", "-1/10"] {
            f.check_consistency(&g(t)).unwrap();
        }
        assert!(matches!(f.instantiate(&GR::one()), Err(Error::Pole { .. })));
    }

    #[test]
    fn wrong_declaration_is_caught() {
        let bad = ABELIAN_LIMIT.replace("\"1/(1-t*conj(t))\"", "\"1\"");
        let f = FamilySpec::parse_json(&bad).unwrap();
        assert!(matches!(f.check_consistency(&g("1/2")), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn frame_split_partitions() {
        let f = FamilySpec::parse_json(ABELIAN_LIMIT).unwrap();
        let omega = standard_metric(3).wedge_power(2);
        let at0 = f.frame_change_bigrading(&GR::zero(), &omega).unwrap();
        assert_eq!(at0.components.len(), 1);
        assert_eq!(at0.components[0].2, omega);
        let split = f.frame_change_bigrading(&g("1/10"), &omega).unwrap();
        let sum = split.components.iter().fold(Form::zero(3), |acc, c| acc.add(&c.2));
        assert_eq!(sum, omega);
        assert!(matches!(f.frame_change_bigrading(&GR::one(), &omega), Err(Error::SingularFrame(_))));
    }

    #[test]
    fn file_round_trip() {
        let f = FamilySpec::parse_json(ABELIAN_LIMIT).unwrap();
        assert_eq!(FamilySpec::parse_json(&f.to_json()).unwrap(), f);
    }
}
