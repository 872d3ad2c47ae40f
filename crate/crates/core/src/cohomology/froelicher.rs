//! Frölicher spectral sequence of the holomorphic-degree filtration on the total complex.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{span_dim, Matrix, Vector, GR};
use crate::structure::Operators;

#[derive(Clone, Debug, Serialize)]
pub struct Froelicher {
    /// `pages[r-1][p][q] = dim E_r^{p,q}` for `r = 1..=2n+1`.
    pub pages: Vec<Vec<Vec<usize>>>,
    pub infinity: Vec<Vec<usize>>,
    pub degeneration_step: usize,
}

struct Degree {
    hdeg: Vec<usize>,
    d: Matrix,
    hdeg_next: Vec<usize>,
}

/// `Z_r^p` in degree `k`: `x ∈ F^p` with `dx ∈ F^{p+r}`, as full coordinate vectors.
fn z(deg: &Degree, p: isize, r: isize) -> Vec<Vector> {
    let dim = deg.hdeg.len();
    let support: Vec<usize> = (0..dim).filter(|&i| deg.hdeg[i] as isize >= p).collect();
    if support.is_empty() {
        return Vec::new();
    }
    let low: Vec<usize> = (0..deg.hdeg_next.len()).filter(|&j| (deg.hdeg_next[j] as isize) < p + r).collect();
    let kernel = if low.is_empty() {
        (0..support.len())
            .map(|i| (0..support.len()).map(|j| if i == j { GR::one() } else { GR::zero() }).collect())
            .collect()
    } else {
        deg.d.submatrix(&low, &support).kernel()
    };
    kernel
        .into_iter()
        .map(|x| {
            let mut v = vec![GR::zero(); dim];
            for (s, c) in support.iter().zip(x) {
                v[*s] = c;
            }
            v
        })
        .collect()
}

pub fn froelicher(ops: &Operators) -> Result<Froelicher> {
    let n = ops.n;
    let top = 2 * n;
    let degrees: Vec<Degree> = (0..=top)
        .map(|k| {
            let hdeg = ops.basis.total_basis(k).iter().map(|m| m.bidegree().0).collect();
            let hdeg_next = ops.basis.total_basis(k + 1).iter().map(|m| m.bidegree().0).collect();
            Degree { hdeg, d: ops.d_total(k), hdeg_next }
        })
        .collect();
    let far = (top + 2) as isize;

    let page = |r: isize| -> Vec<Vec<usize>> {
        let mut e = vec![vec![0; n + 1]; n + 1];
        for p in 0..=n {
            for q in 0..=n {
                let k = p + q;
                let (pi, ki) = (p as isize, k);
                let zr = z(&degrees[ki], pi, r);
                let mut b = z(&degrees[ki], pi + 1, r - 1);
                if k > 0 {
                    let prev = &degrees[k - 1];
                    b.extend(z(prev, pi - r + 1, r - 1).iter().map(|y| prev.d.mul_vec(y)));
                }
                let dim = degrees[ki].hdeg.len();
                e[p][q] = span_dim(dim, &zr) - span_dim(dim, &b);
            }
        }
        e
    };
    let pages: Vec<Vec<Vec<usize>>> = (1..=top as isize + 1).map(page).collect();

    let mut infinity = vec![vec![0; n + 1]; n + 1];
    for p in 0..=n {
        for q in 0..=n {
            let k = p + q;
            let deg = &degrees[k];
            let dim = deg.hdeg.len();
            let zp = span_dim(dim, &z(deg, p as isize, far));
            let zp1 = span_dim(dim, &z(deg, p as isize + 1, far));
            // F^p ∩ Im d = d{y : dy ∈ F^p}
            let bdim = |pp: usize| -> usize {
                if k == 0 {
                    return 0;
                }
                let prev = &degrees[k - 1];
                let ys = z(prev, 0, pp as isize);
                span_dim(dim, &ys.iter().map(|y| prev.d.mul_vec(y)).collect::<Vec<_>>())
            };
            infinity[p][q] = zp - zp1 - (bdim(p) - bdim(p + 1));
        }
    }
    let last = pages.last().expect("at least one page");
    if *last != infinity {
        return Err(Error::Inconsistent("Frölicher pages did not stabilise by r = 2n+1".into()));
    }
    for w in pages.windows(2) {
        for p in 0..=n {
            for q in 0..=n {
                if w[1][p][q] > w[0][p][q] {
                    return Err(Error::Inconsistent("Frölicher page dimension increased".into()));
                }
            }
        }
    }
    let degeneration_step = pages.iter().position(|pg| *pg == infinity).expect("last page matches") + 1;
    Ok(Froelicher { pages, infinity, degeneration_step })
}

/// `E_2^{p,q} = {x : ∂̄x = 0, ∂x ∈ Im ∂̄} / (Im ∂̄ + ∂ ker ∂̄)`, computed without the filtration.
pub fn zigzag_e2(ops: &Operators, p: usize, q: usize) -> usize {
    let n = ops.n;
    let dim = ops.dim(p, q);
    let x2: Vec<Vector> = if p == n {
        ops.delbar(p, q).kernel()
    } else {
        // unknowns (x, c): ∂̄x = 0 and ∂x - B c = 0 with B spanning ∂̄(Λ^{p+1,q-1})
        let b = ops.im_delbar_into(p + 1, q);
        let del = ops.del(p, q);
        let delbar = ops.delbar(p, q);
        let nb = b.len();
        let rows = delbar.rows() + del.rows();
        let mut m = Matrix::zeros(rows, dim + nb);
        for i in 0..delbar.rows() {
            for j in 0..dim {
                m[(i, j)] = delbar[(i, j)].clone();
            }
        }
        for i in 0..del.rows() {
            for j in 0..dim {
                m[(delbar.rows() + i, j)] = del[(i, j)].clone();
            }
            for (c, col) in b.iter().enumerate() {
                m[(delbar.rows() + i, dim + c)] = -&col[i];
            }
        }
        m.kernel().into_iter().map(|v| v[..dim].to_vec()).collect()
    };
    let mut y2 = ops.im_delbar_into(p, q);
    if p > 0 {
        let del = ops.del(p - 1, q);
        y2.extend(ops.delbar(p - 1, q).kernel().iter().map(|v| del.mul_vec(v)));
    }
    span_dim(dim, &x2) - span_dim(dim, &y2)
}
