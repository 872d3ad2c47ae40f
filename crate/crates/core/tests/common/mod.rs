#![allow(dead_code)]

use nilcohom::cohomology::{map_s_exactness, map_sstar_tstar, CohomologyProfile};
use nilcohom::corpus::{corpus, Source};
use nilcohom::exterior::form_of_hermitian_11;
use nilcohom::{Form, Matrix, Operators, StructureEquations, GR};
use rand::Rng;

/// `dη¹ = 0, dη² = aη^{11̄}, dη³ = bη^{12} + cη^{11̄} + eη^{12̄} + fη^{21̄} + gη^{22̄}`.
pub fn two_step(k: &[GR; 6]) -> nilcohom::Result<StructureEquations> {
    let key = |s: &str| nilcohom::MultiIndex::parse_key(s, 3).unwrap();
    let d2 = Form::from_terms(3, [(key("1~1"), k[0].clone())]);
    let d3 = Form::from_terms(
        3,
        [
            (key("12"), k[1].clone()),
            (key("1~1"), k[2].clone()),
            (key("1~2"), k[3].clone()),
            (key("2~1"), k[4].clone()),
            (key("2~2"), k[5].clone()),
        ],
    );
    StructureEquations::new(3, "random", vec![Form::zero(3), d2, d3])
}

pub fn small_coeff(rng: &mut impl Rng) -> GR {
    if rng.gen_bool(0.3) {
        return GR::zero();
    }
    let den = rng.gen_range(1..=2);
    GR::from_ratios(rng.gen_range(-2..=2), den, rng.gen_range(-1..=1), den)
}

/// Rejection-sampled until validation (`d² = 0`) passes.
pub fn random_structures(count: usize, seed: u64) -> Vec<StructureEquations> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let k: [GR; 6] = std::array::from_fn(|_| small_coeff(&mut rng));
        if let Ok(mut s) = two_step(&k) {
            s.name = format!("random-{}", out.len());
            out.push(s);
        }
    }
    out
}

/// Every plain structure in the corpus plus every family sample.
pub fn corpus_structures() -> Vec<StructureEquations> {
    let mut out = Vec::new();
    for e in corpus() {
        match e.source {
            Source::Structure(s) => out.push(s),
            Source::Family { spec, samples } => {
                for s in samples {
                    let mut x = spec.instantiate(&s.t).unwrap();
                    x.name = format!("{}@{}", e.name, s.t);
                    out.push(x);
                }
            }
            Source::AbelianGrid => {}
        }
    }
    out
}

/// Violations of the structural identities; empty when all hold.
pub fn property_violations(s: &StructureEquations) -> Vec<String> {
    let mut bad = Vec::new();
    let ops = Operators::new(s);
    let p = match CohomologyProfile::compute_with(s, &ops) {
        Ok(p) => p,
        Err(e) => return vec![format!("{}: {e}", s.name)],
    };
    let n = s.n;
    let mut check = |ok: bool, what: &str| {
        if !ok {
            bad.push(format!("{}: {what}", s.name));
        }
    };
    check(p.bc[0][1] <= p.hodge[0][1], "h01_BC <= h01");
    check(p.betti[1] <= 2 * p.hodge[0][1], "b1 <= 2 h01");
    let v = &p.sgg;
    check(v.crit_bc == v.sgg && v.crit_betti == v.sgg && (v.t_rank == 0) == v.sgg, "three-way sGG agreement");
    check(map_s_exactness(&ops).map(|x| x.exact).unwrap_or(false), "Im T = ker S");
    check(map_sstar_tstar(&ops).map(|x| x.exact).unwrap_or(false), "Im S* = ker T*");
    let euler: i64 = p.betti.iter().enumerate().map(|(k, b)| if k % 2 == 0 { *b as i64 } else { -(*b as i64) }).sum();
    check(euler == 0, "Euler characteristic 0");
    check(p.e_pages[0] == p.hodge, "E1 = Dolbeault");
    for k in 0..=2 * n {
        let sum: usize = (0..=n).filter(|&q| k >= q && k - q <= n).map(|q| p.e_infinity[k - q][q]).sum();
        check(sum == p.betti[k], "sum E_inf = b_k");
    }
    if p.unimodular {
        let dual = (0..=n).all(|a| (0..=n).all(|b| p.bc[a][b] == p.aeppli[n - a][n - b]));
        check(dual, "BC/Aeppli duality");
    }
    bad
}

/// `h = [[2, i, 0], [-i, 2, 0], [0, 0, 1]]`.
pub fn mixed_metric() -> Form {
    let h = Matrix::from_rows(vec![
        vec![GR::from_int(2), GR::i(), GR::zero()],
        vec![-GR::i(), GR::from_int(2), GR::zero()],
        vec![GR::zero(), GR::zero(), GR::one()],
    ]);
    form_of_hermitian_11(&h)
}

/// `h = [[2, 1, 0], [1, 1, 0], [0, 0, 1]]`: balanced on the central fibre of `abelian-limit`.
pub fn abelian_limit_balanced_metric() -> Form {
    form_of_hermitian_11(&Matrix::from_ints(&[&[2, 1, 0], &[1, 1, 0], &[0, 0, 1]]))
}
