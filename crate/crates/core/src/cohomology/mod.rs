//! Invariant de Rham, Dolbeault, Bott-Chern and Aeppli cohomology, the Frölicher spectral
//! sequence, and the canonical maps between them.

pub mod froelicher;
pub mod maps;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{contained_in, independent_subset, span_dim, Matrix, Vector, GR};
use crate::exterior::{Form, MultiIndex};
use crate::structure::{Operators, StructureEquations};

pub use froelicher::{froelicher, zigzag_e2, Froelicher};
pub use maps::{map_f, map_p, map_s_exactness, map_sstar_tstar, map_t, FMap, PMap, SExactness, SstarTstar, TMap};

/// `cycles / boundaries` with an explicit complement basis of representatives.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub n: usize,
    pub basis: Vec<MultiIndex>,
    pub cycles: Vec<Vector>,
    pub boundaries: Vec<Vector>,
    pub reps: Vec<Vector>,
}

pub(crate) fn kernel_basis(m: &Matrix) -> Vec<Vector> {
    m.kernel()
}

impl Quotient {
    pub fn new(n: usize, basis: Vec<MultiIndex>, cycles: Vec<Vector>, boundaries: Vec<Vector>) -> Result<Self> {
        let dim = basis.len();
        let cycles = independent_subset(dim, &cycles);
        let boundaries = independent_subset(dim, &boundaries);
        if !contained_in(dim, &boundaries, &cycles) {
            return Err(Error::Inconsistent("boundaries are not contained in cycles".into()));
        }
        let mut all = boundaries.clone();
        all.extend(cycles.iter().cloned());
        let reps = independent_subset(dim, &all).split_off(boundaries.len());
        Ok(Self { n, basis, cycles, boundaries, reps })
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `[v]` in the representative basis; errors when `v` is not a cycle.
    pub fn classify(&self, v: &[GR]) -> Result<Vector> {
        let k = self.reps.len();
        if k + self.boundaries.len() == 0 {
            return if v.iter().all(GR::is_zero) {
                Ok(Vec::new())
            } else {
                Err(Error::Precondition("vector is not a cycle".into()))
            };
        }
        let mut cols = self.reps.clone();
        cols.extend(self.boundaries.iter().cloned());
        let m = Matrix::from_columns(self.ambient_dim(), &cols);
        let x = m.solve(v).ok_or_else(|| Error::Precondition("vector is not a cycle".into()))?;
        Ok(x[..k].to_vec())
    }

    pub fn is_boundary(&self, v: &[GR]) -> Result<bool> {
        Ok(self.classify(v)?.iter().all(GR::is_zero))
    }

    pub fn rep_form(&self, i: usize) -> Form {
        Form::from_vector(self.n, &self.basis, &self.reps[i])
    }

    pub fn conj_vec(&self, v: &[GR]) -> Result<Vector> {
        Form::from_vector(self.n, &self.basis, v).conj().to_vector(&self.basis)
    }

    /// Same quotient with conj-fixed representatives; requires conj-stable cycles and boundaries.
    pub fn realified(&self) -> Result<Quotient> {
        let dim = self.ambient_dim();
        let half = GR::from_ratios(1, 2, 0, 1);
        let minus_half_i = GR::from_ratios(0, 1, -1, 2);
        let mut chosen: Vec<Vector> = Vec::new();
        let base = self.boundaries.len();
        for v in &self.reps {
            let cv = self.conj_vec(v)?;
            let re: Vector = v.iter().zip(&cv).map(|(a, b)| (a + b) * &half).collect();
            let im: Vector = v.iter().zip(&cv).map(|(a, b)| (a - b) * &minus_half_i).collect();
            for cand in [re, im] {
                if chosen.len() == self.reps.len() {
                    break;
                }
                let mut all = self.boundaries.clone();
                all.extend(chosen.iter().cloned());
                all.push(cand.clone());
                if span_dim(dim, &all) == base + chosen.len() + 1 {
                    chosen.push(cand);
                }
            }
        }
        if chosen.len() != self.reps.len() || !contained_in(dim, &chosen, &self.cycles) {
            return Err(Error::Inconsistent("quotient is not conj-stable".into()));
        }
        Ok(Quotient { reps: chosen, ..self.clone() })
    }
}

pub fn dolbeault_quotient(ops: &Operators, p: usize, q: usize) -> Result<Quotient> {
    Quotient::new(
        ops.n,
        ops.basis.get(p, q).to_vec(),
        kernel_basis(ops.delbar(p, q)),
        ops.im_delbar_into(p, q),
    )
}

pub fn bc_quotient(ops: &Operators, p: usize, q: usize) -> Result<Quotient> {
    let both = ops.del(p, q).vstack(ops.delbar(p, q));
    Quotient::new(ops.n, ops.basis.get(p, q).to_vec(), kernel_basis(&both), ops.im_ddbar_into(p, q))
}

pub fn aeppli_quotient(ops: &Operators, p: usize, q: usize) -> Result<Quotient> {
    let mut bnd = ops.im_del_into(p, q);
    bnd.extend(ops.im_delbar_into(p, q));
    Quotient::new(ops.n, ops.basis.get(p, q).to_vec(), kernel_basis(&ops.ddbar(p, q)), bnd)
}

pub fn de_rham_quotient(ops: &Operators, k: usize) -> Result<Quotient> {
    let bnd = if k == 0 { Vec::new() } else { ops.d_total(k - 1).columns() };
    Quotient::new(ops.n, ops.basis.total_basis(k), kernel_basis(&ops.d_total(k)), bnd)
}

pub fn betti(ops: &Operators, k: usize) -> usize {
    if k > 2 * ops.n {
        return 0;
    }
    let prev = if k == 0 { 0 } else { ops.d_total(k - 1).rank() };
    ops.basis.total_dim(k) - ops.d_total(k).rank() - prev
}

pub fn hodge_number(ops: &Operators, p: usize, q: usize) -> usize {
    let prev = if q == 0 { 0 } else { ops.delbar(p, q - 1).rank() };
    ops.dim(p, q) - ops.delbar(p, q).rank() - prev
}

pub fn bc_number(ops: &Operators, p: usize, q: usize) -> usize {
    let both = ops.del(p, q).vstack(ops.delbar(p, q));
    let prev = if p == 0 || q == 0 { 0 } else { ops.ddbar(p - 1, q - 1).rank() };
    ops.dim(p, q) - both.rank() - prev
}

pub fn aeppli_number(ops: &Operators, p: usize, q: usize) -> usize {
    let mut bnd = ops.im_del_into(p, q);
    bnd.extend(ops.im_delbar_into(p, q));
    ops.dim(p, q) - ops.ddbar(p, q).rank() - span_dim(ops.dim(p, q), &bnd)
}

/// Three sGG criteria evaluated independently.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SggVerdict {
    pub t_rank: usize,
    pub crit_bc: bool,
    pub crit_betti: bool,
    pub sgg: bool,
}

pub fn sgg_verdict(ops: &Operators) -> Result<SggVerdict> {
    let t_rank = map_t(ops)?.rank;
    let h01 = hodge_number(ops, 0, 1);
    let crit_bc = bc_number(ops, 0, 1) == h01;
    let crit_betti = betti(ops, 1) == 2 * h01;
    let v = SggVerdict { t_rank, crit_bc, crit_betti, sgg: t_rank == 0 };
    if v.sgg != crit_bc || v.sgg != crit_betti {
        return Err(Error::Inconsistent(format!("sGG criteria disagree: {v:?}")));
    }
    Ok(v)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq, Default)]
pub struct MapRanks {
    pub t: usize,
    pub s: usize,
    pub s_star: usize,
    pub t_star: usize,
    pub f: usize,
    pub p: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CohomologyProfile {
    pub name: String,
    pub n: usize,
    pub unimodular: bool,
    pub nilpotent: bool,
    pub warnings: Vec<String>,
    pub betti: Vec<usize>,
    pub hodge: Vec<Vec<usize>>,
    pub bc: Vec<Vec<usize>>,
    pub aeppli: Vec<Vec<usize>>,
    /// `e_pages[r-1][p][q] = dim E_r^{p,q}` for `r = 1..=degeneration_step`.
    pub e_pages: Vec<Vec<Vec<usize>>>,
    pub e_infinity: Vec<Vec<usize>>,
    pub degeneration_step: usize,
    pub map_ranks: MapRanks,
    pub sgg: SggVerdict,
}

fn grid(n: usize, f: impl Fn(usize, usize) -> usize + Sync + Send) -> Vec<Vec<usize>> {
    let cells: Vec<(usize, usize)> = (0..=n).flat_map(|p| (0..=n).map(move |q| (p, q))).collect();
    let vals = crate::par_map(&cells, |&(p, q)| f(p, q));
    vals.chunks(n + 1).map(|c| c.to_vec()).collect()
}

impl CohomologyProfile {
    pub fn compute(s: &StructureEquations) -> Result<Self> {
        let ops = Operators::new(s);
        Self::compute_with(s, &ops)
    }

    pub fn compute_with(s: &StructureEquations, ops: &Operators) -> Result<Self> {
        ops.check_identities()?;
        let n = s.n;
        let report = s.validate();
        let betti: Vec<usize> = (0..=2 * n).map(|k| betti(ops, k)).collect();
        let hodge = grid(n, |p, q| hodge_number(ops, p, q));
        let bc = grid(n, |p, q| bc_number(ops, p, q));
        let aeppli = grid(n, |p, q| aeppli_number(ops, p, q));
        let fr = froelicher(ops)?;
        if fr.pages[0] != hodge {
            return Err(Error::Inconsistent("E_1 dimensions differ from Dolbeault numbers".into()));
        }
        for (k, b) in betti.iter().enumerate() {
            let sum: usize = (0..=n).filter(|&p| k >= p && k - p <= n).map(|p| fr.infinity[p][k - p]).sum();
            if sum != *b {
                return Err(Error::Inconsistent(format!("Σ dim E_∞ in degree {k} is {sum}, b_{k} = {b}")));
            }
        }
        let t = map_t(ops)?;
        let sx = map_s_exactness(ops)?;
        let st = map_sstar_tstar(ops)?;
        let f = map_f(ops)?;
        let sgg = sgg_verdict(ops)?;
        let p = map_p(ops, Some(sgg.sgg))?;
        Ok(Self {
            name: s.name.clone(),
            n,
            unimodular: report.unimodular,
            nilpotent: report.nilpotent,
            warnings: report.warnings,
            betti,
            hodge,
            bc,
            aeppli,
            e_pages: fr.pages[..fr.degeneration_step].to_vec(),
            e_infinity: fr.infinity,
            degeneration_step: fr.degeneration_step,
            map_ranks: MapRanks { t: t.rank, s: sx.rank_s, s_star: st.rank_sstar, t_star: st.rank_tstar, f: f.rank, p: p.rank },
            sgg,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iwasawa() -> StructureEquations {
        StructureEquations::from_keys(3, "iwasawa", &[(3, &[("12", "1")])]).unwrap()
    }

    fn torus() -> StructureEquations {
        StructureEquations::from_keys(3, "torus", &[]).unwrap()
    }

    #[test]
    fn torus_numbers() {
        let ops = Operators::new(&torus());
        assert_eq!(betti(&ops, 1), 6);
        assert_eq!(hodge_number(&ops, 0, 1), 3);
        assert_eq!(bc_number(&ops, 1, 1), 9);
        assert_eq!(aeppli_number(&ops, 1, 1), 9);
        assert_eq!(crate::exact::subspace_sum_dim(9, &ops.im_del_into(1, 1), &ops.im_delbar_into(1, 1)), 0);
    }

    #[test]
    fn iwasawa_numbers() {
        let ops = Operators::new(&iwasawa());
        assert_eq!(betti(&ops, 1), 4);
        assert_eq!(hodge_number(&ops, 0, 1), 2);
        assert_eq!(bc_number(&ops, 0, 1), 2);
        assert_eq!(aeppli_number(&ops, 2, 2), bc_number(&ops, 1, 1));
        let v = sgg_verdict(&ops).unwrap();
        assert!(v.sgg && v.crit_bc && v.crit_betti);
    }

    #[test]
    fn kernel_dims_match_enumeration() {
        let s = iwasawa();
        let ops = Operators::new(&s);
        for p in 0..=3 {
            for q in 0..=3 {
                let closed = ops
                    .basis
                    .get(p, q)
                    .iter()
                    .filter(|m| s.delbar(&Form::monomial(3, **m, GR::one())).is_zero())
                    .count();
                // Iwasawa ∂̄ sends distinct monomials to distinct monomials or zero
                assert_eq!(ops.delbar(p, q).kernel().len(), closed, "({p},{q})");
            }
        }
    }

    #[test]
    fn balanced_odd_b1() {
        let s = StructureEquations::from_keys(3, "b", &[(3, &[("1~1", "1"), ("2~2", "-1")])]).unwrap();
        let p = CohomologyProfile::compute(&s).unwrap();
        assert_eq!(p.betti[1], 5);
        assert!(!p.sgg.sgg);
        assert_eq!(p.degeneration_step, 1);
        assert_eq!(p.map_ranks.f, 5);
        assert_eq!(p.hodge[0][1], 3);
    }

    #[test]
    fn realified_reps_are_real() {
        let ops = Operators::new(&iwasawa());
        let q = aeppli_quotient(&ops, 2, 2).unwrap().realified().unwrap();
        for i in 0..q.dim() {
            assert!(q.rep_form(i).is_real());
        }
        let dr = de_rham_quotient(&ops, 4).unwrap().realified().unwrap();
        assert_eq!(dr.dim(), betti(&ops, 4));
    }

    #[test]
    fn classify_rejects_non_cycles() {
        let ops = Operators::new(&iwasawa());
        let q = dolbeault_quotient(&ops, 0, 1).unwrap();
        let mut v = vec![GR::zero(); 3];
        v[2] = GR::one();
        assert!(matches!(q.classify(&v), Err(Error::Precondition(_))));
    }
}
