use crate::error::Result;
use crate::report::Report;
use crate::scalar::GaussScalar;
use crate::series::TruncSeries;
use crate::weyl::AlgElement;

use super::{lift, Frame, RealizationSet};

/// `H_{μν}(p)` from `[p_μ, x̂_ν] = -iH_{μν}` and `G_{μνλ}(p)` from
/// `[M_{μν}, p_λ] = G_{μνλ}`, both as momentum-only elements.
#[derive(Clone, Debug)]
pub struct HgTables {
    pub h: Vec<Vec<AlgElement>>,
    pub g: Vec<Vec<Vec<AlgElement>>>,
}

pub fn extract_h_g(r: &RealizationSet) -> Result<HgTables> {
    let n = r.dim();
    let i = GaussScalar::i();
    let mut h = Vec::with_capacity(n);
    for mu in 0..n {
        let mut row = Vec::with_capacity(n);
        for nu in 0..n {
            row.push(r.at_order(&AlgElement::commutator(&r.p[mu], &r.xhat[nu]).scale(&i))?);
        }
        h.push(row);
    }
    let mut g = Vec::with_capacity(n);
    for mu in 0..n {
        let mut plane = Vec::with_capacity(n);
        for nu in 0..n {
            let mut row = Vec::with_capacity(n);
            for la in 0..n {
                row.push(r.at_order(&AlgElement::commutator(&r.m[mu][nu], &r.p[la]))?);
            }
            plane.push(row);
        }
        g.push(plane);
    }
    Ok(HgTables { h, g })
}

/// Closed-form `H` of the realization's frame.
pub fn h_closed_form(r: &RealizationSet) -> Result<Vec<Vec<AlgElement>>> {
    let n = r.dim();
    let wc = r.p[0].ctx().clone();
    let mut h = vec![vec![AlgElement::zero(&wc); n]; n];
    match r.frame {
        Frame::Natural => {
            // η_{μν} Z⁻¹ - a_μ p_ν
            for mu in 0..n {
                for nu in 0..n {
                    let eta = r.zinv.scale_int(r.ctx.eta2(mu, nu));
                    h[mu][nu] = &eta - &r.a_times(mu, &r.p[nu]);
                }
            }
        }
        Frame::Noncovariant => {
            let params = r.noncov_params()?;
            let w = r.order + 1;
            h[0][0] = -&lift(&wc, &params.psi().truncate(w));
            let gamma = lift(&wc, &params.gamma().truncate(w));
            let phi = lift(&wc, &params.phi().truncate(w));
            for i in 1..n {
                h[i][0] = -&(&r.p[i] * &gamma).mul_a0_pow(1);
                h[i][i] = phi.clone();
            }
        }
    }
    h.iter().map(|row| row.iter().map(|e| r.at_order(e)).collect()).collect()
}

/// Closed-form `G` of the realization's frame.
pub fn g_closed_form(r: &RealizationSet) -> Result<Vec<Vec<Vec<AlgElement>>>> {
    let n = r.dim();
    let wc = r.p[0].ctx().clone();
    let zero = AlgElement::zero(&wc);
    let mut g = vec![vec![vec![zero.clone(); n]; n]; n];
    let eta = |a: usize, b: usize| r.ctx.eta2(a, b);
    let undeformed = |mu: usize, nu: usize, la: usize| &r.p[mu].scale_int(eta(nu, la)) - &r.p[nu].scale_int(eta(mu, la));
    match r.frame {
        Frame::Natural => {
            for mu in 0..n {
                for nu in 0..n {
                    for la in 0..n {
                        g[mu][nu][la] = undeformed(mu, nu, la);
                    }
                }
            }
        }
        Frame::Noncovariant => {
            let params = r.noncov_params()?;
            let w = r.order + 2;
            let phi_s = params.phi().truncate(w);
            let inv_phi = lift(&wc, &phi_s.recip()?);
            let phi = lift(&wc, &phi_s);
            let psi = lift(&wc, &params.psi().truncate(w));
            let gamma = lift(&wc, &params.gamma().truncate(w));
            let zs = params.z_pow(1).truncate(w);
            let z = lift(&wc, &zs);
            // (1 - e^Ψ)/a0 - (a0/2) □ e^Ψ
            let first = lift(&wc, &(&TruncSeries::one(w) - &zs)).divide_by_a0(1)?;
            let second = (&r.boxop * &z).mul_a0_pow(1).scale(&GaussScalar::from_ratio(1, 2));
            let diag = &phi * &(&first - &second);
            for i in 1..n {
                for j in 1..n {
                    for k in 1..n {
                        g[i][j][k] = undeformed(i, j, k);
                    }
                }
                let gi00 = -&(&(&psi * &inv_phi) * &r.p[i]);
                g[i][0][0] = gi00.clone();
                g[0][i][0] = -&gi00;
                for j in 1..n {
                    let mut v = -&(&(&(&gamma * &inv_phi) * &r.p[i]) * &r.p[j]).mul_a0_pow(1);
                    if i == j {
                        v = &v + &diag;
                    }
                    g[0][i][j] = -&v;
                    g[i][0][j] = v;
                }
            }
        }
    }
    g.iter()
        .map(|pl| pl.iter().map(|row| row.iter().map(|e| r.at_order(e)).collect()).collect())
        .collect()
}

/// Compares extracted `H`, `G` with the closed forms and checks their
/// classical limits.
pub fn check_h_g(r: &RealizationSet) -> Result<Report> {
    let mut rep = Report::new();
    let got = extract_h_g(r)?;
    let h = h_closed_form(r)?;
    let g = g_closed_form(r)?;
    let n = r.dim();
    let wc = r.p[0].ctx().clone();
    for mu in 0..n {
        for nu in 0..n {
            rep.identity("hg", format!("H{mu}{nu}"), &(&got.h[mu][nu] - &h[mu][nu]));
            let eta = AlgElement::scalar(&wc, GaussScalar::from_int(r.ctx.eta2(mu, nu))).truncate(r.order);
            rep.identity("hg", format!("H{mu}{nu} classical limit"), &(&got.h[mu][nu].classical_limit() - &eta));
            for la in 0..n {
                rep.identity("hg", format!("G{mu}{nu}{la}"), &(&got.g[mu][nu][la] - &g[mu][nu][la]));
                let und = &r.p[mu].scale_int(r.ctx.eta2(nu, la)) - &r.p[nu].scale_int(r.ctx.eta2(mu, la));
                rep.identity(
                    "hg",
                    format!("G{mu}{nu}{la} classical limit"),
                    &(&got.g[mu][nu][la].classical_limit() - &und.truncate(r.order)),
                );
            }
        }
    }
    Ok(rep)
}
