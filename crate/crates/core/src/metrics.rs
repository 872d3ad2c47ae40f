//! Metric conditions on invariant Hermitian metrics and exact positive-feasibility search.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{in_span, is_zero_vec, same_span, Matrix, Vector, GR};
use crate::exterior::{form_of_hermitian_n1n1, hermitian_matrix_of_11, hermitian_matrix_of_n1n1, Form, FormJson};
use crate::structure::Operators;

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct MetricFlags {
    pub positive: bool,
    pub gauduchon: bool,
    pub strongly_gauduchon: bool,
    pub superstrong: bool,
    pub balanced: bool,
}

impl MetricFlags {
    pub fn chain_holds(&self) -> bool {
        (!self.balanced || self.superstrong)
            && (!self.superstrong || self.strongly_gauduchon)
            && (!self.strongly_gauduchon || self.gauduchon)
    }
}

/// Flags for a real `(n-1,n-1)`-form `Ω`; `positive` refers to its Hermitian matrix.
pub fn check_power(ops: &Operators, omega: &Form) -> Result<MetricFlags> {
    let n = ops.n;
    if !omega.is_pure(n - 1, n - 1) && !omega.is_zero() {
        return Err(Error::Precondition(format!("expected an ({0},{0})-form", n - 1)));
    }
    if !omega.is_real() {
        return Err(Error::Precondition("form is not real".into()));
    }
    let x = ops.to_vec(n - 1, n - 1, omega)?;
    let del_x = ops.del(n - 1, n - 1).mul_vec(&x);
    let delbar_x = ops.delbar(n - 1, n - 1).mul_vec(&x);
    let ddbar_x = ops.ddbar(n - 1, n - 1).mul_vec(&x);
    let dim = ops.dim(n, n - 1);
    let flags = MetricFlags {
        positive: hermitian_matrix_of_n1n1(&omega.component(n - 1, n - 1))?.is_pos_def_hermitian()?,
        gauduchon: is_zero_vec(&ddbar_x),
        strongly_gauduchon: in_span(dim, &ops.im_delbar_into(n, n - 1), &del_x),
        superstrong: in_span(dim, &ops.im_ddbar_into(n, n - 1), &del_x),
        balanced: is_zero_vec(&del_x) && is_zero_vec(&delbar_x),
    };
    if !flags.chain_holds() {
        return Err(Error::Inconsistent(format!("metric implication chain violated: {flags:?}")));
    }
    Ok(flags)
}

/// Flags for a Hermitian metric given as a real `(1,1)`-form `ω`, tested on `ω^{n-1}`.
pub fn check_metric(ops: &Operators, omega: &Form) -> Result<MetricFlags> {
    if !omega.is_pure(1, 1) {
        return Err(Error::Precondition("metric must be a (1,1)-form".into()));
    }
    if !omega.is_real() {
        return Err(Error::Precondition("metric must be real".into()));
    }
    let positive = hermitian_matrix_of_11(omega)?.is_pos_def_hermitian()?;
    let mut flags = check_power(ops, &omega.wedge_power(ops.n - 1))?;
    flags.positive = positive;
    Ok(flags)
}

/// Whether `∂∂̄ : Λ^{p,q} → Λ^{p+1,q+1}` is the zero map.
pub fn ddbar_vanishing(ops: &Operators, p: usize, q: usize) -> bool {
    p >= ops.n || q >= ops.n || ops.ddbar(p, q).is_zero()
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Gauduchon,
    StronglyGauduchon,
    Superstrong,
    Balanced,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Gauduchon, Kind::StronglyGauduchon, Kind::Superstrong, Kind::Balanced];
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Gauduchon => "gauduchon",
            Kind::StronglyGauduchon => "sg",
            Kind::Superstrong => "supersg",
            Kind::Balanced => "balanced",
        })
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gauduchon" => Ok(Kind::Gauduchon),
            "sg" | "strongly-gauduchon" => Ok(Kind::StronglyGauduchon),
            "supersg" | "superstrong" => Ok(Kind::Superstrong),
            "balanced" => Ok(Kind::Balanced),
            other => Err(Error::Malformed(format!("unknown metric kind `{other}`"))),
        }
    }
}

/// Real basis of `n×n` Hermitian matrices: `E_jj`, `E_jk+E_kj`, `i(E_jk-E_kj)`.
pub fn hermitian_basis(n: usize) -> Vec<Matrix> {
    let mut out = Vec::new();
    for j in 0..n {
        let mut m = Matrix::zeros(n, n);
        m[(j, j)] = GR::one();
        out.push(m);
    }
    for j in 0..n {
        for k in j + 1..n {
            let mut m = Matrix::zeros(n, n);
            m[(j, k)] = GR::one();
            m[(k, j)] = GR::one();
            out.push(m);
            let mut m = Matrix::zeros(n, n);
            m[(j, k)] = GR::i();
            m[(k, j)] = -GR::i();
            out.push(m);
        }
    }
    out
}

/// Rows that must annihilate `y` for `y ∈ span(cols)`.
fn annihilator(dim: usize, cols: &[Vector]) -> Matrix {
    if cols.is_empty() {
        return Matrix::identity(dim);
    }
    let bt = Matrix::from_columns(dim, cols).transpose();
    let rows = bt.kernel();
    if rows.is_empty() {
        Matrix::zeros(0, dim)
    } else {
        Matrix::from_rows(rows)
    }
}

/// Linear map on `(n-1,n-1)` coordinates whose kernel is the condition for `kind`.
fn condition_matrix(ops: &Operators, kind: Kind) -> Matrix {
    let n = ops.n;
    let del = ops.del(n - 1, n - 1);
    let dim = ops.dim(n, n - 1);
    match kind {
        Kind::Gauduchon => ops.ddbar(n - 1, n - 1),
        Kind::Balanced => del.vstack(ops.delbar(n - 1, n - 1)),
        Kind::StronglyGauduchon => annihilator(dim, &ops.im_delbar_into(n, n - 1)).mul(del),
        Kind::Superstrong => annihilator(dim, &ops.im_ddbar_into(n, n - 1)).mul(del),
    }
}

/// Hermitian matrices `H` whose form `Ω_H` satisfies the condition for `kind`.
pub fn condition_subspace(ops: &Operators, kind: Kind) -> Result<Vec<Matrix>> {
    let n = ops.n;
    let c = condition_matrix(ops, kind);
    let herm = hermitian_basis(n);
    let mut cols = Vec::new();
    for h in &herm {
        let f = form_of_hermitian_n1n1(h)?;
        cols.push(c.mul_vec(&ops.to_vec(n - 1, n - 1, &f)?));
    }
    // real coefficients: stack real and imaginary parts
    let rows = c.rows();
    let mut m = Matrix::zeros(2 * rows, herm.len());
    for (b, col) in cols.iter().enumerate() {
        for i in 0..rows {
            m[(i, b)] = GR::real(col[i].re.clone());
            m[(rows + i, b)] = GR::real(col[i].im.clone());
        }
    }
    let ker = if rows == 0 { (0..herm.len()).map(|b| unit(herm.len(), b)).collect() } else { m.kernel() };
    Ok(ker.iter().map(|x| combine(&herm, x)).collect())
}

fn unit(dim: usize, i: usize) -> Vector {
    (0..dim).map(|j| if i == j { GR::one() } else { GR::zero() }).collect()
}

fn combine(ms: &[Matrix], x: &[GR]) -> Matrix {
    let n = ms[0].rows();
    ms.iter().zip(x).fold(Matrix::zeros(n, n), |acc, (m, c)| acc.add(&m.scale(c)))
}

fn flatten(m: &Matrix) -> Vector {
    (0..m.rows()).flat_map(|i| m.row(i).to_vec()).collect()
}

fn pair(a: &Matrix, b: &Matrix) -> GR {
    a.mul(b).trace()
}

/// Whether two sets of Hermitian matrices span the same real subspace.
pub fn same_matrix_span(a: &[Matrix], b: &[Matrix]) -> bool {
    let dim = a.first().or(b.first()).map(|m| m.rows() * m.rows()).unwrap_or(0);
    let fa: Vec<Vector> = a.iter().map(flatten).collect();
    let fb: Vec<Vector> = b.iter().map(flatten).collect();
    same_span(dim, &fa, &fb)
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Witness,
    Infeasible,
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct FeasibilityAnswer {
    pub kind: Kind,
    pub status: Status,
    pub subspace_dim: usize,
    pub witness: Option<FormJson>,
    pub witness_matrix: Option<Matrix>,
    pub certificate: Option<Matrix>,
    pub note: Option<String>,
}

/// Orthogonal projection of `target` onto `span(v)` in the trace pairing.
fn project(v: &[Matrix], target: &Matrix) -> Option<Matrix> {
    let k = v.len();
    let mut g = Matrix::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            g[(a, b)] = pair(&v[a], &v[b]);
        }
    }
    let rhs: Vector = v.iter().map(|m| pair(m, target)).collect();
    g.solve(&rhs).map(|c| combine(v, &c))
}

fn witness_targets(n: usize) -> Vec<Matrix> {
    let mut out = vec![Matrix::identity(n)];
    let levels = [1i64, 2, 3];
    let mut idx = vec![0usize; n];
    loop {
        let d: Vec<GR> = idx.iter().map(|&i| GR::from_int(levels[i])).collect();
        out.push(Matrix::diagonal(&d));
        let mut j = 0;
        while j < n {
            idx[j] += 1;
            if idx[j] < levels.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == n {
            break;
        }
    }
    for h in hermitian_basis(n).into_iter().skip(n) {
        for s in [1, -1] {
            out.push(Matrix::identity(n).scale(&GR::from_int(2)).add(&h.scale(&GR::from_int(s))));
        }
    }
    out
}

fn small_combos(dim: usize, range: i64) -> Vec<Vec<i64>> {
    let width = (2 * range + 1) as usize;
    let total = width.pow(dim as u32);
    (0..total)
        .map(|mut c| {
            (0..dim)
                .map(|_| {
                    let d = (c % width) as i64 - range;
                    c /= width;
                    d
                })
                .collect()
        })
        .collect()
}

fn find_witness(v: &[Matrix], n: usize) -> Option<Matrix> {
    if v.is_empty() {
        return None;
    }
    let pd = |m: &Matrix| m.is_pos_def_hermitian().unwrap_or(false);
    let projected: Vec<Matrix> = witness_targets(n).iter().filter_map(|t| project(v, t)).collect();
    if let Some(m) = first_match(&projected, pd) {
        return Some(m);
    }
    if v.len() <= 4 {
        let combos = small_combos(v.len(), 2);
        let ms: Vec<Matrix> = combos
            .iter()
            .map(|c| combine(v, &c.iter().map(|&x| GR::from_int(x)).collect::<Vec<_>>()))
            .collect();
        return first_match(&ms, pd);
    }
    None
}

#[cfg(feature = "parallel")]
fn first_match(ms: &[Matrix], f: impl Fn(&Matrix) -> bool + Sync + Send) -> Option<Matrix> {
    use rayon::prelude::*;
    ms.par_iter().find_first(|m| f(m)).cloned()
}

#[cfg(not(feature = "parallel"))]
fn first_match(ms: &[Matrix], f: impl Fn(&Matrix) -> bool + Sync + Send) -> Option<Matrix> {
    ms.iter().find(|m| f(m)).cloned()
}

/// Hermitian matrices orthogonal to every element of `v` in the trace pairing.
fn orthogonal_complement(v: &[Matrix], n: usize) -> Vec<Matrix> {
    let herm = hermitian_basis(n);
    if v.is_empty() {
        return herm;
    }
    let mut m = Matrix::zeros(v.len(), herm.len());
    for (a, va) in v.iter().enumerate() {
        for (b, hb) in herm.iter().enumerate() {
            m[(a, b)] = pair(va, hb);
        }
    }
    m.kernel().iter().map(|x| combine(&herm, x)).collect()
}

fn find_certificate(v: &[Matrix], n: usize) -> Option<Matrix> {
    let perp = orthogonal_complement(v, n);
    if perp.is_empty() {
        return None;
    }
    let orth = |m: &Matrix| v.iter().all(|b| pair(m, b).is_zero());
    // rank-one candidates v vᴴ with entries in {0, ±1, ±i}, first nonzero entry 1
    let entries = [GR::zero(), GR::one(), -GR::one(), GR::i(), -GR::i()];
    let mut rank_one = Vec::new();
    for c in small_combos(n, 2) {
        let vec: Vector = c.iter().map(|&k| entries[(k + 2) as usize].clone()).collect();
        match vec.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_one() => {}
            _ => continue,
        }
        let col = Matrix::from_columns(n, &[vec]);
        rank_one.push(col.mul(&col.conj_transpose()));
    }
    if let Some(m) = first_match(&rank_one, orth) {
        return Some(m);
    }
    let psd = |m: &Matrix| !m.is_zero() && m.is_pos_semidef_hermitian().unwrap_or(false);
    let mut cands = perp.clone();
    if perp.len() <= 4 {
        cands.extend(
            small_combos(perp.len(), 2)
                .iter()
                .map(|c| combine(&perp, &c.iter().map(|&x| GR::from_int(x)).collect::<Vec<_>>())),
        );
    }
    first_match(&cands, psd)
}

pub fn positive_feasibility(ops: &Operators, kind: Kind) -> Result<FeasibilityAnswer> {
    let n = ops.n;
    if n > 4 {
        return Err(Error::Precondition("feasibility search supports n ≤ 4".into()));
    }
    let v = condition_subspace(ops, kind)?;
    let mut ans = FeasibilityAnswer {
        kind,
        status: Status::Undecided,
        subspace_dim: v.len(),
        witness: None,
        witness_matrix: None,
        certificate: None,
        note: None,
    };
    if let Some(h) = find_witness(&v, n) {
        let f = form_of_hermitian_n1n1(&h)?;
        let flags = check_power(ops, &f)?;
        let ok = flags.positive
            && match kind {
                Kind::Gauduchon => flags.gauduchon,
                Kind::StronglyGauduchon => flags.strongly_gauduchon,
                Kind::Superstrong => flags.superstrong,
                Kind::Balanced => flags.balanced,
            };
        if !ok {
            return Err(Error::Inconsistent("witness failed re-verification".into()));
        }
        ans.status = Status::Witness;
        ans.witness = Some(FormJson::from(&f));
        ans.witness_matrix = Some(h);
        if kind == Kind::Balanced {
            ans.note = Some("a metric ω with ω^{n-1} equal to the witness exists; its root is not computed".into());
        }
        return Ok(ans);
    }
    if let Some(p) = find_certificate(&v, n) {
        if p.is_zero() || !p.is_pos_semidef_hermitian()? || !v.iter().all(|b| pair(&p, b).is_zero()) {
            return Err(Error::Inconsistent("certificate failed re-verification".into()));
        }
        ans.status = Status::Infeasible;
        ans.certificate = Some(p);
    }
    Ok(ans)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{form_of_hermitian_11, standard_metric};
    use crate::structure::StructureEquations;

    fn ops(eqs: &[(usize, &[(&str, &str)])]) -> Operators {
        Operators::new(&StructureEquations::from_keys(3, "x", eqs).unwrap())
    }

    fn half_standard() -> Form {
        standard_metric(3).scale(&GR::from_ratios(1, 2, 0, 1))
    }

    #[test]
    fn balanced_odd_b1_metric() {
        let o = ops(&[(3, &[("1~1", "1"), ("2~2", "-1")])]);
        let f = check_metric(&o, &half_standard()).unwrap();
        assert!(f.positive && f.balanced && f.superstrong && f.strongly_gauduchon && f.gauduchon);
        assert_eq!(positive_feasibility(&o, Kind::Balanced).unwrap().status, Status::Witness);
    }

    #[test]
    fn torus_all_flags() {
        let o = ops(&[]);
        let f = check_metric(&o, &half_standard()).unwrap();
        assert!(f.balanced && f.positive);
        assert!((0..3).all(|p| (0..3).all(|q| ddbar_vanishing(&o, p, q))));
        assert_eq!(positive_feasibility(&o, Kind::Balanced).unwrap().status, Status::Witness);
    }

    #[test]
    fn iwasawa_standard_is_balanced() {
        // ω∧dω has a repeated index in every term
        let o = ops(&[(3, &[("12", "1")])]);
        let f = check_metric(&o, &standard_metric(3)).unwrap();
        assert!(f.gauduchon && f.balanced);
    }

    #[test]
    fn example1_standard_not_balanced() {
        let o = ops(&[(3, &[("12", "1"), ("1~1", "1")])]);
        let f = check_metric(&o, &standard_metric(3)).unwrap();
        assert!(f.gauduchon && !f.balanced && f.positive);
    }

    #[test]
    fn example1_no_balanced_metric() {
        let o = ops(&[(3, &[("12", "1"), ("1~1", "1")])]);
        assert!(ddbar_vanishing(&o, 2, 1));
        let a = positive_feasibility(&o, Kind::Balanced).unwrap();
        assert_eq!(a.status, Status::Infeasible);
        let sup = condition_subspace(&o, Kind::Superstrong).unwrap();
        let bal = condition_subspace(&o, Kind::Balanced).unwrap();
        assert!(same_matrix_span(&sup, &bal));
        assert_eq!(positive_feasibility(&o, Kind::Gauduchon).unwrap().status, Status::Witness);
    }

    #[test]
    fn nakamura_ddbar_vanishing() {
        let o = ops(&[(1, &[("13", "2*i"), ("3~3", "1")]), (2, &[("23", "-2*i")])]);
        assert!(ddbar_vanishing(&o, 2, 1));
    }

    #[test]
    fn abelian_limit_base_balanced_metric() {
        let o = ops(&[(3, &[("1~1", "1"), ("1~2", "1")])]);
        assert!(!check_metric(&o, &standard_metric(3)).unwrap().strongly_gauduchon);
        let h = Matrix::from_ints(&[&[2, 1, 0], &[1, 1, 0], &[0, 0, 1]]);
        let f = check_metric(&o, &form_of_hermitian_11(&h)).unwrap();
        assert!(f.positive && f.balanced, "{f:?}");
    }

    #[test]
    fn rejects_non_real_metric() {
        let o = ops(&[]);
        let bad = Form::from_keys(3, &[("1~1", "1")]).unwrap();
        assert!(check_metric(&o, &bad).is_err());
    }
}
