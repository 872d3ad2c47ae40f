//! Finite-dimensional Hodge theory on invariant forms for a rational Hermitian metric:
//! Gram matrices, adjoints, Aeppli-harmonic projection, minimal `∂̄`-solutions,
//! the section `Q_ω` of `P` with its dual, and transport of classes along a family.

use serde::Serialize;

use crate::cohomology::maps::{map_p, real_aeppli_mid, real_dr_top};
use crate::cohomology::{bc_quotient, de_rham_quotient, sgg_verdict, Quotient};
use crate::error::{Error, Result};
use crate::exact::{in_span, inner, is_zero_vec, orth_project, vec_scale, vec_sub, Matrix, Vector, GR};
use crate::exterior::{hermitian_matrix_of_11, hermitian_matrix_of_n1n1, integrate, Form, FormJson, MultiIndex};
use crate::metrics::check_metric;
use crate::structure::{FamilySpec, Operators};

/// Gram matrices of the pointwise inner product induced by `ω = i Σ h_{jk} η^j∧η^{k̄}`,
/// with `⟨x, y⟩ = yᴴ G x` and unit total volume.
#[derive(Clone, Debug)]
pub struct InnerProductData {
    pub metric: Form,
    g10: Matrix,
    grams: Vec<Vec<Matrix>>,
}

fn minor(m: &Matrix, rows: &[usize], cols: &[usize]) -> GR {
    if rows.is_empty() {
        return GR::one();
    }
    let r: Vec<usize> = rows.iter().map(|i| i - 1).collect();
    let c: Vec<usize> = cols.iter().map(|i| i - 1).collect();
    m.submatrix(&r, &c).determinant()
}

impl InnerProductData {
    pub fn new(ops: &Operators, omega: &Form) -> Result<Self> {
        let h = hermitian_matrix_of_11(omega)?;
        if !omega.is_real() || !h.is_pos_def_hermitian()? {
            return Err(Error::NotPositiveDefinite);
        }
        let g10 = h.inverse()?.transpose();
        let g01 = g10.conj();
        let n = ops.n;
        let mut grams = vec![vec![Matrix::zeros(0, 0); n + 1]; n + 1];
        for p in 0..=n {
            for q in 0..=n {
                let b = ops.basis.get(p, q);
                let mut g = Matrix::zeros(b.len(), b.len());
                for (a, ma) in b.iter().enumerate() {
                    for (c, mc) in b.iter().enumerate() {
                        g[(a, c)] = minor(&g10, &ma.holo_indices(), &mc.holo_indices())
                            * minor(&g01, &ma.anti_indices(), &mc.anti_indices());
                    }
                }
                grams[p][q] = g;
            }
        }
        Ok(Self { metric: omega.clone(), g10, grams })
    }

    pub fn gram(&self, p: usize, q: usize) -> &Matrix {
        &self.grams[p][q]
    }

    pub fn g10(&self) -> &Matrix {
        &self.g10
    }

    pub fn inner(&self, p: usize, q: usize, x: &[GR], y: &[GR]) -> GR {
        inner(&self.grams[p][q], x, y)
    }

    pub fn del_star(&self, ops: &Operators, p: usize, q: usize) -> Result<Matrix> {
        adjoint(ops.del(p, q), self.gram(p, q), self.gram(p + 1, q))
    }

    pub fn delbar_star(&self, ops: &Operators, p: usize, q: usize) -> Result<Matrix> {
        adjoint(ops.delbar(p, q), self.gram(p, q), self.gram(p, q + 1))
    }

    /// `∂̄∂̄★ + ∂̄★∂̄` on `(p,q)`.
    pub fn dbar_laplacian(&self, ops: &Operators, p: usize, q: usize) -> Result<Matrix> {
        let n = ops.n;
        let d = self.dim(ops, p, q);
        let mut lap = Matrix::zeros(d, d);
        if q > 0 {
            let db = ops.delbar(p, q - 1);
            lap = lap.add(&db.mul(&self.delbar_star(ops, p, q - 1)?));
        }
        if q < n {
            let db = ops.delbar(p, q);
            lap = lap.add(&self.delbar_star(ops, p, q)?.mul(db));
        }
        Ok(lap)
    }

    fn dim(&self, ops: &Operators, p: usize, q: usize) -> usize {
        ops.dim(p, q)
    }
}

/// `M★ = G_src⁻¹ Mᴴ G_dst`.
pub fn adjoint(m: &Matrix, g_src: &Matrix, g_dst: &Matrix) -> Result<Matrix> {
    if m.cols() == 0 || m.rows() == 0 {
        return Ok(Matrix::zeros(m.cols(), m.rows()));
    }
    Ok(g_src.inverse()?.mul(&m.conj_transpose()).mul(g_dst))
}

/// Checks `⟨Mx, y⟩ = ⟨x, M★y⟩` on all basis pairs.
pub fn adjoint_identity_holds(m: &Matrix, m_star: &Matrix, g_src: &Matrix, g_dst: &Matrix) -> bool {
    let e = |d: usize, i: usize| -> Vector { (0..d).map(|j| if i == j { GR::one() } else { GR::zero() }).collect() };
    (0..m.cols()).all(|i| {
        (0..m.rows()).all(|j| {
            let x = e(m.cols(), i);
            let y = e(m.rows(), j);
            inner(g_dst, &m.mul_vec(&x), &y) == inner(g_src, &x, &m_star.mul_vec(&y))
        })
    })
}

/// Projection of `x ∈ ker ∂∂̄` onto the Aeppli-harmonic space along `Im ∂ + Im ∂̄`.
pub fn aeppli_harmonic_projection(ops: &Operators, ip: &InnerProductData, p: usize, q: usize, x: &[GR]) -> Result<Vector> {
    if !is_zero_vec(&ops.ddbar(p, q).mul_vec(x)) {
        return Err(Error::Precondition("form is not ∂∂̄-closed".into()));
    }
    let mut exact = ops.im_del_into(p, q);
    exact.extend(ops.im_delbar_into(p, q));
    let out = vec_sub(x, &orth_project(x, &exact, ip.gram(p, q))?);
    let del_star_zero = p == 0 || is_zero_vec(&ip.del_star(ops, p - 1, q)?.mul_vec(&out));
    let delbar_star_zero = q == 0 || is_zero_vec(&ip.delbar_star(ops, p, q - 1)?.mul_vec(&out));
    if !del_star_zero || !delbar_star_zero {
        return Err(Error::Inconsistent("projection is not Aeppli-harmonic".into()));
    }
    Ok(out)
}

/// Basis of the Aeppli-harmonic space `ker ∂∂̄ ∩ ker ∂★ ∩ ker ∂̄★` in bidegree `(p,q)`.
pub fn aeppli_harmonic_space(ops: &Operators, ip: &InnerProductData, p: usize, q: usize) -> Result<Vec<Vector>> {
    let mut m = ops.ddbar(p, q);
    if p > 0 {
        m = m.vstack(&ip.del_star(ops, p - 1, q)?);
    }
    if q > 0 {
        m = m.vstack(&ip.delbar_star(ops, p, q - 1)?);
    }
    Ok(m.kernel())
}

/// The `x ∈ Λ^{p,q-1}` of least norm with `∂̄x = y`, as `∂̄★ z` for `Δ''z = y`.
pub fn dbar_minimal_solution(ops: &Operators, ip: &InnerProductData, p: usize, q: usize, y: &[GR]) -> Result<Vector> {
    if q == 0 {
        return Err(Error::Precondition("no ∂̄-primitive in bidegree (p,-1)".into()));
    }
    if !in_span(ops.dim(p, q), &ops.im_delbar_into(p, q), y) {
        return Err(Error::Precondition("right-hand side is not ∂̄-exact".into()));
    }
    let lap = ip.dbar_laplacian(ops, p, q)?;
    let z = lap.solve(y).ok_or_else(|| Error::Inconsistent("Δ'' system not solvable on Im ∂̄".into()))?;
    let x = ip.delbar_star(ops, p, q - 1)?.mul_vec(&z);
    if ops.delbar(p, q - 1).mul_vec(&x) != y {
        return Err(Error::Inconsistent("minimal solution does not solve the equation".into()));
    }
    for k in ops.delbar(p, q - 1).kernel() {
        if !ip.inner(p, q - 1, &x, &k).is_zero() {
            return Err(Error::Inconsistent("minimal solution is not orthogonal to ker ∂̄".into()));
        }
    }
    Ok(x)
}

/// The real `d`-closed `(2n-2)`-form built from a real `Ω^{n-1,n-1}` and `ω`.
#[derive(Clone, Debug)]
pub struct AssembledForm {
    pub harmonic: Form,
    pub gamma: Form,
    pub nn2: Form,
    pub total: Form,
}

/// Requires `∂Ω_A ∈ Im ∂̄`, which holds for every class exactly when `T = 0`.
pub fn assemble(ops: &Operators, ip: &InnerProductData, omega: &Form) -> Result<AssembledForm> {
    let n = ops.n;
    if n < 2 {
        return Err(Error::Precondition("needs n ≥ 2".into()));
    }
    if !omega.is_real() || !(omega.is_zero() || omega.is_pure(n - 1, n - 1)) {
        return Err(Error::Precondition(format!("expected a real ({0},{0})-form", n - 1)));
    }
    let x = ops.to_vec(n - 1, n - 1, omega)?;
    let xa = aeppli_harmonic_projection(ops, ip, n - 1, n - 1, &x)?;
    let harmonic = ops.to_form(n - 1, n - 1, &xa);
    let rest = vec_sub(&x, &xa);

    // rest = ∂Γ' + ∂̄Γ'' with Γ' ∈ (n-2,n-1), Γ'' ∈ (n-1,n-2)
    let a = ops.del(n - 2, n - 1).hstack(ops.delbar(n - 1, n - 2));
    let sol = a.solve(&rest).ok_or_else(|| Error::Inconsistent("exact part not in Im ∂ + Im ∂̄".into()))?;
    let split = ops.dim(n - 2, n - 1);
    let g1 = ops.to_form(n - 2, n - 1, &sol[..split]);
    let g2 = ops.to_form(n - 1, n - 2, &sol[split..]);
    let half = GR::from_ratios(1, 2, 0, 1);
    let gamma2 = g2.add(&g1.conj()).scale(&half);

    let del_a = ops.del(n - 1, n - 1).mul_vec(&xa);
    if !in_span(ops.dim(n, n - 1), &ops.im_delbar_into(n, n - 1), &del_a) {
        return Err(Error::Precondition("∂ of the harmonic part is not ∂̄-exact; the class is outside ker T".into()));
    }
    let min = dbar_minimal_solution(ops, ip, n, n - 1, &del_a)?;
    let nn2_a = ops.to_form(n, n - 2, &vec_scale(&min, &-GR::one()));
    let del_gamma = ops.to_form(n, n - 2, &ops.del(n - 1, n - 2).mul_vec(&ops.to_vec(n - 1, n - 2, &gamma2)?));
    let nn2 = nn2_a.add(&del_gamma);
    let total = nn2.add(omega).add(&nn2.conj());
    let s_total = ops.total_to_vec(2 * n - 2, &total)?;
    if !total.is_real() || !is_zero_vec(&ops.d_total(2 * n - 2).mul_vec(&s_total)) {
        return Err(Error::Inconsistent("assembled form is not real and d-closed".into()));
    }
    Ok(AssembledForm { harmonic, gamma: gamma2, nn2, total })
}

/// `P` and `Q_ω` on fixed real bases, with the section identities verified.
#[derive(Clone, Debug, Serialize)]
pub struct FakeDecomposition {
    pub aeppli_dim: usize,
    pub dr_dim: usize,
    pub bc_dim: usize,
    pub p_matrix: Matrix,
    pub q_matrix: Matrix,
    pub p_star: Matrix,
    pub q_star: Matrix,
    pub pq_is_identity: bool,
    pub qstar_pstar_is_identity: bool,
    pub q_injective: bool,
    pub assembled_real_closed: bool,
}

fn real_bc11(ops: &Operators) -> Result<Quotient> {
    bc_quotient(ops, 1, 1)?.realified()
}

pub fn build_q(ops: &Operators, ip: &InnerProductData) -> Result<FakeDecomposition> {
    let n = ops.n;
    if !sgg_verdict(ops)?.sgg {
        return Err(Error::Precondition(
            "Q_ω needs the sGG property: ∂ of some Aeppli-harmonic (n-1,n-1)-form is not ∂̄-exact".into(),
        ));
    }
    let aep = real_aeppli_mid(ops)?;
    let dr = real_dr_top(ops)?;
    let p = map_p(ops, Some(true))?;
    let mut q_cols = Vec::new();
    let mut omegas = Vec::new();
    for j in 0..aep.dim() {
        let asm = assemble(ops, ip, &aep.rep_form(j))?;
        q_cols.push(dr.classify(&ops.total_to_vec(2 * n - 2, &asm.total)?)?);
        omegas.push(asm.total);
    }
    let q_matrix = Matrix::from_columns(dr.dim(), &q_cols);
    let pq = p.matrix.mul(&q_matrix);
    let pq_is_identity = pq == Matrix::identity(aep.dim());

    // dual side: M = BC-Aeppli pairing, N = ∫ β ∧ Ω_j on real H^2 representatives
    let bc = real_bc11(ops)?;
    let dr2 = de_rham_quotient(ops, 2)?.realified()?;
    let k = bc.dim();
    let mut m = Matrix::zeros(k, aep.dim());
    for a in 0..k {
        for j in 0..aep.dim() {
            m[(a, j)] = integrate(&bc.rep_form(a).wedge(&aep.rep_form(j)));
        }
    }
    let mut q_star_cols = Vec::new();
    let mt = m.transpose();
    for i in 0..dr2.dim() {
        let beta = dr2.rep_form(i);
        let rhs: Vector = omegas.iter().map(|o| integrate(&beta.wedge(o))).collect();
        q_star_cols.push(mt.solve(&rhs).ok_or_else(|| Error::Inconsistent("BC-Aeppli pairing is degenerate".into()))?);
    }
    let q_star = Matrix::from_columns(k, &q_star_cols);
    let mut p_star_cols = Vec::new();
    for a in 0..k {
        p_star_cols.push(dr2.classify(&ops.total_to_vec(2, &bc.rep_form(a))?)?);
    }
    let p_star = Matrix::from_columns(dr2.dim(), &p_star_cols);
    let qstar_pstar_is_identity = q_star.mul(&p_star) == Matrix::identity(k);
    let q_injective = q_matrix.rank() == aep.dim();
    let out = FakeDecomposition {
        aeppli_dim: aep.dim(),
        dr_dim: dr.dim(),
        bc_dim: k,
        p_matrix: p.matrix,
        q_matrix,
        p_star,
        q_star,
        pq_is_identity,
        qstar_pstar_is_identity,
        q_injective,
        assembled_real_closed: true,
    };
    if !out.pq_is_identity || !out.qstar_pstar_is_identity || !out.q_injective {
        return Err(Error::Inconsistent("fake decomposition identities failed".into()));
    }
    Ok(out)
}

/// One sample of a transported class.
#[derive(Clone, Debug, Serialize)]
pub struct TransportRow {
    pub t: GR,
    pub pd: bool,
    pub gauduchon: bool,
    pub component: Option<FormJson>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransportReport {
    pub family: String,
    pub base_metric: FormJson,
    pub assembled: FormJson,
    pub rows: Vec<TransportRow>,
}

/// Builds `Ω` from `γ0^{n-1}` and `ω0` on the base fibre, then splits it by the bigrading of
/// each sampled fibre.
pub fn transport_gauduchon(f: &FamilySpec, gamma0: &Form, omega0: &Form, ts: &[GR]) -> Result<TransportReport> {
    let n = f.n;
    let base = f.base()?;
    let ops0 = Operators::new(&base);
    let flags = check_metric(&ops0, gamma0)?;
    if !flags.positive || !flags.gauduchon {
        return Err(Error::Precondition("γ0 must be a Gauduchon metric on the base fibre".into()));
    }
    let ip = InnerProductData::new(&ops0, omega0)?;
    let asm = assemble(&ops0, &ip, &gamma0.wedge_power(n - 1))?;
    let rows = crate::par_map(ts, |t| transport_row(f, &asm.total, t));
    Ok(TransportReport {
        family: f.name.clone(),
        base_metric: FormJson::from(gamma0),
        assembled: FormJson::from(&asm.total),
        rows,
    })
}

fn transport_row(f: &FamilySpec, omega: &Form, t: &GR) -> TransportRow {
    let n = f.n;
    let run = || -> Result<(bool, bool, Form)> {
        let s = f.instantiate(t)?;
        let split = f.frame_change_bigrading(t, omega)?;
        if !s.d_form(&split.in_frame).is_zero() {
            return Err(Error::Inconsistent("transported form is not d-closed".into()));
        }
        let comp = split.in_frame.component(n - 1, n - 1);
        let pd = hermitian_matrix_of_n1n1(&comp)?.is_pos_def_hermitian()?;
        let ops = Operators::new(&s);
        let v = ops.to_vec(n - 1, n - 1, &comp)?;
        let gauduchon = is_zero_vec(&ops.ddbar(n - 1, n - 1).mul_vec(&v));
        Ok((pd, gauduchon, comp))
    };
    match run() {
        Ok((pd, gauduchon, comp)) => {
            TransportRow { t: t.clone(), pd, gauduchon, component: Some(FormJson::from(&comp)), error: None }
        }
        Err(e) => TransportRow { t: t.clone(), pd: false, gauduchon: false, component: None, error: Some(e.to_string()) },
    }
}

/// Whether `Q_{ω1}` and `Q_{ω2}` differ as matrices.
pub fn q_depends_on_metric(ops: &Operators, w1: &Form, w2: &Form) -> Result<bool> {
    let a = build_q(ops, &InnerProductData::new(ops, w1)?)?;
    let b = build_q(ops, &InnerProductData::new(ops, w2)?)?;
    Ok(a.q_matrix != b.q_matrix)
}

/// `i(2η^{1 1̄} + η^{2 2̄} + … )`, a second diagonal metric used in checks.
pub fn skewed_metric(n: usize) -> Form {
    let mut f = Form::zero(n);
    for j in 1..=n {
        let c = if j == 1 { GR::from_int(2) } else { GR::one() };
        f.add_term(MultiIndex::new(&[j], &[j]), c.mul_i());
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{aeppli_number, aeppli_quotient, hodge_number};
    use crate::exact::vec_add;
    use crate::exterior::{form_of_hermitian_11, standard_metric};
    use crate::structure::StructureEquations;
    use proptest::prelude::*;

    fn ops(eqs: &[(usize, &[(&str, &str)])]) -> Operators {
        Operators::new(&StructureEquations::from_keys(3, "x", eqs).unwrap())
    }

    fn iwasawa() -> Operators {
        ops(&[(3, &[("12", "1")])])
    }

    fn mixed_metric() -> Form {
        let h = Matrix::from_rows(vec![
            vec![GR::from_int(2), GR::i(), GR::zero()],
            vec![-GR::i(), GR::from_int(2), GR::zero()],
            vec![GR::zero(), GR::zero(), GR::one()],
        ]);
        form_of_hermitian_11(&h)
    }

    #[test]
    fn grams() {
        let o = iwasawa();
        let std = InnerProductData::new(&o, &standard_metric(3)).unwrap();
        assert_eq!(std.gram(0, 1), &Matrix::identity(3));
        assert_eq!(std.gram(2, 1), &Matrix::identity(9));
        let two = InnerProductData::new(&o, &standard_metric(3).scale(&GR::from_int(2))).unwrap();
        assert_eq!(two.gram(2, 1), &Matrix::identity(9).scale(&GR::from_ratios(1, 8, 0, 1)));
        let sk = InnerProductData::new(&o, &skewed_metric(3)).unwrap();
        assert_eq!(sk.gram(1, 0), &Matrix::diagonal(&[GR::from_ratios(1, 2, 0, 1), GR::one(), GR::one()]));
        let mixed = InnerProductData::new(&o, &mixed_metric()).unwrap();
        for p in 0..=3 {
            for q in 0..=3 {
                assert!(mixed.gram(p, q).is_pos_def_hermitian().unwrap());
            }
        }
    }

    #[test]
    fn adjoints() {
        let o = iwasawa();
        let ip = InnerProductData::new(&o, &mixed_metric()).unwrap();
        for p in 0..3 {
            for q in 0..=3 {
                let m = o.del(p, q);
                let s = ip.del_star(&o, p, q).unwrap();
                assert!(adjoint_identity_holds(m, &s, ip.gram(p, q), ip.gram(p + 1, q)));
                let back = adjoint(&s, ip.gram(p + 1, q), ip.gram(p, q)).unwrap();
                assert_eq!(&back, m);
            }
        }
        let id = adjoint(o.delbar(0, 0), &Matrix::identity(1), &Matrix::identity(3)).unwrap();
        assert_eq!(id, o.delbar(0, 0).conj_transpose());
    }

    #[test]
    fn dbar_laplacian_kernel_is_hodge_number() {
        let o = ops(&[(3, &[("12", "1"), ("1~1", "1")])]);
        let ip = InnerProductData::new(&o, &mixed_metric()).unwrap();
        for (p, q) in [(3, 2), (0, 1), (1, 1), (2, 2)] {
            assert_eq!(ip.dbar_laplacian(&o, p, q).unwrap().kernel().len(), hodge_number(&o, p, q));
        }
    }

    #[test]
    fn harmonic_projection() {
        let t = ops(&[]);
        let ip = InnerProductData::new(&t, &standard_metric(3)).unwrap();
        let x = t.to_vec(1, 1, &standard_metric(3)).unwrap();
        assert_eq!(aeppli_harmonic_projection(&t, &ip, 1, 1, &x).unwrap(), x);

        let o = iwasawa();
        let ip = InnerProductData::new(&o, &standard_metric(3)).unwrap();
        let g = o.to_vec(1, 2, &Form::from_keys(3, &[("3~1~2", "1")]).unwrap()).unwrap();
        let dg = o.del(1, 2).mul_vec(&g);
        assert!(is_zero_vec(&aeppli_harmonic_projection(&o, &ip, 2, 2, &dg).unwrap()));

        let x = o.to_vec(2, 2, &standard_metric(3).wedge_power(2)).unwrap();
        let h = aeppli_harmonic_projection(&o, &ip, 2, 2, &x).unwrap();
        let q = aeppli_quotient(&o, 2, 2).unwrap();
        assert_eq!(q.classify(&h).unwrap(), q.classify(&x).unwrap());
        assert_eq!(aeppli_harmonic_space(&o, &ip, 2, 2).unwrap().len(), aeppli_number(&o, 2, 2));

        let bad = o.to_vec(1, 1, &Form::from_keys(3, &[("3~3", "1")]).unwrap()).unwrap();
        assert!(aeppli_harmonic_projection(&o, &ip, 1, 1, &bad).is_err());
    }

    #[test]
    fn minimal_solution() {
        let t = ops(&[]);
        let ip = InnerProductData::new(&t, &standard_metric(3)).unwrap();
        assert!(is_zero_vec(&dbar_minimal_solution(&t, &ip, 3, 2, &vec![GR::zero(); 3]).unwrap()));
        let mut e = vec![GR::zero(); 3];
        e[0] = GR::one();
        assert!(matches!(dbar_minimal_solution(&t, &ip, 3, 2, &e), Err(Error::Precondition(_))));
    }

    #[test]
    fn minimal_solution_beats_particular_solutions() {
        let o = ops(&[(3, &[("12", "1"), ("1~1", "1")])]);
        let ip = InnerProductData::new(&o, &mixed_metric()).unwrap();
        let src = o.to_vec(3, 1, &Form::from_keys(3, &[("123~3", "1"), ("123~1", "i")]).unwrap()).unwrap();
        let y = o.delbar(3, 1).mul_vec(&src);
        let x = dbar_minimal_solution(&o, &ip, 3, 2, &y).unwrap();
        let nx = ip.inner(3, 1, &x, &x);
        let ker = o.delbar(3, 1).kernel();
        for (k, kv) in ker.iter().enumerate().take(10) {
            let other = vec_add(&x, &vec_scale(kv, &GR::from_int(k as i64 + 1)));
            assert!(ip.inner(3, 1, &other, &other).re > nx.re);
        }
        // oracle: project a particular solution off ker ∂̄
        let oracle = vec_sub(&src, &orth_project(&src, &ker, ip.gram(3, 1)).unwrap());
        assert_eq!(oracle, x);
    }

    #[test]
    fn fake_decomposition_on_sgg_examples() {
        for o in [ops(&[]), iwasawa(), ops(&[(3, &[("12", "1"), ("1~1", "1")])])] {
            for w in [standard_metric(3), mixed_metric()] {
                let ip = InnerProductData::new(&o, &w).unwrap();
                let fd = build_q(&o, &ip).unwrap();
                assert!(fd.pq_is_identity && fd.qstar_pstar_is_identity && fd.q_injective);
            }
        }
    }

    #[test]
    fn build_q_rejects_non_sgg() {
        let o = ops(&[(3, &[("1~1", "1"), ("2~2", "-1")])]);
        let ip = InnerProductData::new(&o, &standard_metric(3)).unwrap();
        assert!(matches!(build_q(&o, &ip), Err(Error::Precondition(_))));
    }

    const ABELIAN_LIMIT: &str = r#"{
        "n": 3, "name": "abelian-limit",
        "d": {"3": {"12": "-conj(t)/(1-t*conj(t))", "1~1": "1", "1~2": "1/(1-t*conj(t))"}},
        "frame": {"2": {"2": "1", "~2": "t"}}
    }"#;

    #[test]
    fn transport_constant_family() {
        let f = FamilySpec::parse_json(r#"{"n":3,"name":"c","d":{"3":{"12":"1"}},"frame":{}}"#).unwrap();
        let w = standard_metric(3);
        let ts: Vec<GR> = ["1/10", "i/10"].iter().map(|s| s.parse().unwrap()).collect();
        let r = transport_gauduchon(&f, &w, &w, &ts).unwrap();
        for row in &r.rows {
            assert!(row.pd && row.gauduchon);
            let comp = Form::try_from(row.component.as_ref().unwrap()).unwrap();
            assert_eq!(comp, w.wedge_power(2));
        }
    }

    #[test]
    fn transport_needs_class_in_ker_t() {
        let f = FamilySpec::parse_json(ABELIAN_LIMIT).unwrap();
        let w = standard_metric(3);
        let r = transport_gauduchon(&f, &w, &w, &[GR::zero()]);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn harmonic_triple_condition(c in prop::collection::vec(-3i64..4, 9)) {
            let o = ops(&[(3, &[("12", "1"), ("1~1", "1")])]);
            let ip = InnerProductData::new(&o, &mixed_metric()).unwrap();
            let ker = o.ddbar(2, 2).kernel();
            let x = ker.iter().zip(&c).fold(vec![GR::zero(); 9], |acc, (v, k)| vec_add(&acc, &vec_scale(v, &GR::from_int(*k))));
            let h = aeppli_harmonic_projection(&o, &ip, 2, 2, &x).unwrap();
            prop_assert!(is_zero_vec(&o.ddbar(2, 2).mul_vec(&h)));
            let q = aeppli_quotient(&o, 2, 2).unwrap();
            prop_assert_eq!(q.classify(&h).unwrap(), q.classify(&x).unwrap());
        }
    }
}
