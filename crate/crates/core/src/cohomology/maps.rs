//! The induced maps `T, S, S★, T★, F, P` on explicit quotient bases.

use serde::Serialize;

use super::{aeppli_quotient, bc_quotient, de_rham_quotient, dolbeault_quotient, Quotient};
use crate::error::{Error, Result};
use crate::exact::{is_zero_vec, same_span, Matrix, Vector};
use crate::structure::Operators;

fn map_matrix(target: &Quotient, images: &[Vector]) -> Result<Matrix> {
    let cols: Vec<Vector> = images.iter().map(|v| target.classify(v)).collect::<Result<_>>()?;
    Ok(Matrix::from_columns(target.dim(), &cols))
}

fn col_span(m: &Matrix) -> Vec<Vector> {
    m.columns().into_iter().filter(|c| !is_zero_vec(c)).collect()
}

/// `T: H_A^{n-1,n-1} → H_∂̄^{n,n-1}, [Ω] ↦ [∂Ω]`.
#[derive(Clone, Debug, Serialize)]
pub struct TMap {
    pub matrix: Matrix,
    pub rank: usize,
}

pub fn map_t(ops: &Operators) -> Result<TMap> {
    let n = ops.n;
    let src = aeppli_quotient(ops, n - 1, n - 1)?;
    let dst = dolbeault_quotient(ops, n, n - 1)?;
    let del = ops.del(n - 1, n - 1);
    for b in &src.boundaries {
        if !dst.is_boundary(&del.mul_vec(b))? {
            return Err(Error::Inconsistent("T is not well defined on Aeppli boundaries".into()));
        }
    }
    let images: Vec<Vector> = src.reps.iter().map(|r| del.mul_vec(r)).collect();
    let matrix = map_matrix(&dst, &images)?;
    let rank = matrix.rank();
    Ok(TMap { matrix, rank })
}

/// `S: H_∂̄^{n,n-1} → H_A^{n,n-1}` and the exactness `Im T = ker S`.
#[derive(Clone, Debug, Serialize)]
pub struct SExactness {
    pub rank_s: usize,
    pub ker_s_dim: usize,
    pub rank_t: usize,
    pub surjective: bool,
    pub exact: bool,
}

pub fn map_s_exactness(ops: &Operators) -> Result<SExactness> {
    let n = ops.n;
    let src = dolbeault_quotient(ops, n, n - 1)?;
    let dst = aeppli_quotient(ops, n, n - 1)?;
    let s = map_matrix(&dst, &src.reps)?;
    for b in &src.boundaries {
        if !dst.is_boundary(b)? {
            return Err(Error::Inconsistent("S is not well defined".into()));
        }
    }
    let t = map_t(ops)?;
    let ker_s = s.kernel();
    let rank_s = s.rank();
    let exact = same_span(src.dim(), &col_span(&t.matrix), &ker_s);
    let out = SExactness { rank_s, ker_s_dim: ker_s.len(), rank_t: t.rank, surjective: rank_s == dst.dim(), exact };
    if !out.surjective || !out.exact || out.ker_s_dim != out.rank_t {
        return Err(Error::Inconsistent(format!("S/T sequence check failed: {out:?}")));
    }
    Ok(out)
}

/// `S★: H_BC^{0,1} → H_∂̄^{0,1}` and `T★: H_∂̄^{0,1} → H_BC^{1,1}, [v] ↦ [∂v]`.
#[derive(Clone, Debug, Serialize)]
pub struct SstarTstar {
    pub rank_sstar: usize,
    pub rank_tstar: usize,
    pub injective: bool,
    pub exact: bool,
}

pub fn map_sstar_tstar(ops: &Operators) -> Result<SstarTstar> {
    let bc01 = bc_quotient(ops, 0, 1)?;
    let d01 = dolbeault_quotient(ops, 0, 1)?;
    let bc11 = bc_quotient(ops, 1, 1)?;
    let sstar = map_matrix(&d01, &bc01.reps)?;
    let del = ops.del(0, 1);
    for b in &d01.boundaries {
        if !bc11.is_boundary(&del.mul_vec(b))? {
            return Err(Error::Inconsistent("T★ is not well defined".into()));
        }
    }
    let tstar = map_matrix(&bc11, &d01.reps.iter().map(|r| del.mul_vec(r)).collect::<Vec<_>>())?;
    let rank_sstar = sstar.rank();
    let rank_tstar = tstar.rank();
    let out = SstarTstar {
        rank_sstar,
        rank_tstar,
        injective: rank_sstar == bc01.dim(),
        exact: same_span(d01.dim(), &col_span(&sstar), &tstar.kernel()),
    };
    if !out.injective || !out.exact {
        return Err(Error::Inconsistent(format!("S★/T★ sequence check failed: {out:?}")));
    }
    Ok(out)
}

/// `F: H^1_DR → H^{0,1} ⊕ conj(H^{0,1})`.
#[derive(Clone, Debug, Serialize)]
pub struct FMap {
    pub matrix: Matrix,
    pub rank: usize,
    pub injective: bool,
}

pub fn map_f(ops: &Operators) -> Result<FMap> {
    let dr = de_rham_quotient(ops, 1)?;
    let d01 = dolbeault_quotient(ops, 0, 1)?;
    let h = d01.dim();
    let mut cols = Vec::new();
    for i in 0..dr.dim() {
        let a = dr.rep_form(i);
        let first = d01.classify(&ops.to_vec(0, 1, &a.component(0, 1))?)?;
        let second = d01.classify(&ops.to_vec(0, 1, &a.component(1, 0).conj())?)?;
        let mut col = first;
        col.extend(second.iter().map(|c| c.conj()));
        cols.push(col);
    }
    let matrix = Matrix::from_columns(2 * h, &cols);
    let rank = matrix.rank();
    let injective = rank == dr.dim();
    if !injective {
        return Err(Error::Inconsistent("F is not injective".into()));
    }
    Ok(FMap { matrix, rank, injective })
}

/// `P: H^{2n-2}_DR(ℝ) → H_A^{n-1,n-1}(ℝ)` on conj-fixed bases.
#[derive(Clone, Debug, Serialize)]
pub struct PMap {
    pub matrix: Matrix,
    pub rank: usize,
    pub surjective: bool,
}

pub fn real_dr_top(ops: &Operators) -> Result<Quotient> {
    de_rham_quotient(ops, 2 * ops.n - 2)?.realified()
}

pub fn real_aeppli_mid(ops: &Operators) -> Result<Quotient> {
    aeppli_quotient(ops, ops.n - 1, ops.n - 1)?.realified()
}

/// When `sgg` is given and true, surjectivity is asserted.
pub fn map_p(ops: &Operators, sgg: Option<bool>) -> Result<PMap> {
    let n = ops.n;
    let dr = real_dr_top(ops)?;
    let a = real_aeppli_mid(ops)?;
    let mut cols = Vec::new();
    for i in 0..dr.dim() {
        let mid = dr.rep_form(i).component(n - 1, n - 1);
        cols.push(a.classify(&ops.to_vec(n - 1, n - 1, &mid)?)?);
    }
    let matrix = Matrix::from_columns(a.dim(), &cols);
    if !(0..matrix.rows()).all(|i| (0..matrix.cols()).all(|j| matrix[(i, j)].is_real())) {
        return Err(Error::Inconsistent("P has non-real entries on real bases".into()));
    }
    let rank = matrix.rank();
    let surjective = rank == a.dim();
    if sgg == Some(true) && !surjective {
        return Err(Error::Inconsistent("P is not surjective on an sGG structure".into()));
    }
    Ok(PMap { matrix, rank, surjective })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::StructureEquations;

    fn ops(eqs: &[(usize, &[(&str, &str)])]) -> Operators {
        Operators::new(&StructureEquations::from_keys(3, "x", eqs).unwrap())
    }

    #[test]
    fn torus_maps() {
        let o = ops(&[]);
        assert_eq!(map_t(&o).unwrap().rank, 0);
        let s = map_s_exactness(&o).unwrap();
        assert_eq!((s.rank_s, s.ker_s_dim), (3, 0));
        let st = map_sstar_tstar(&o).unwrap();
        assert_eq!((st.rank_sstar, st.rank_tstar), (3, 0));
        assert_eq!(map_f(&o).unwrap().rank, 6);
        assert!(map_p(&o, Some(true)).unwrap().surjective);
    }

    #[test]
    fn iwasawa_maps() {
        let o = ops(&[(3, &[("12", "1")])]);
        assert_eq!(map_t(&o).unwrap().rank, 0);
        assert_eq!(map_s_exactness(&o).unwrap().ker_s_dim, 0);
        assert_eq!(map_sstar_tstar(&o).unwrap().rank_sstar, 2);
        assert_eq!(map_f(&o).unwrap().rank, 4);
        assert!(map_p(&o, Some(true)).unwrap().surjective);
    }

    #[test]
    fn abelian_family_member_has_nonzero_t() {
        // ρ = 0, λ = 1, D = i
        let o = ops(&[(3, &[("1~1", "1"), ("1~2", "1"), ("2~2", "i")])]);
        let t = map_t(&o).unwrap();
        assert!(t.rank >= 1);
        let s = map_s_exactness(&o).unwrap();
        assert_eq!(s.ker_s_dim, t.rank);
        let st = map_sstar_tstar(&o).unwrap();
        assert!(st.rank_tstar >= 1);
    }

    #[test]
    fn example1_p_surjective() {
        let o = ops(&[(3, &[("12", "1"), ("1~1", "1")])]);
        assert!(map_p(&o, Some(true)).unwrap().surjective);
    }
}
