use crate::error::Result;
use crate::report::Report;
use crate::scalar::GaussScalar;
use crate::weyl::{AlgElement, Context};

use super::{build_noncov, natural_images, NoncovParams, RealizationSet};

fn eta(ctx: &Context, mu: usize, nu: usize) -> i64 {
    ctx.eta2(mu, nu)
}

/// `[x̂_μ, x̂_ν] = i(a_μ x̂_ν - a_ν x̂_μ)` for all pairs.
pub fn verify_space(r: &RealizationSet) -> Result<Report> {
    let mut rep = Report::new();
    let i = GaussScalar::i();
    for mu in 0..r.dim() {
        for nu in (mu + 1)..r.dim() {
            let lhs = AlgElement::commutator(&r.xhat[mu], &r.xhat[nu]);
            let rhs = (&r.a_times(mu, &r.xhat[nu]) - &r.a_times(nu, &r.xhat[mu])).scale(&i);
            rep.identity("space", format!("[xhat{mu}, xhat{nu}]"), &r.at_order(&(&lhs - &rhs))?);
        }
    }
    Ok(rep)
}

/// The Lorentz algebra among `M_{μν}` and the mixed relation
/// `[M_{μν}, x̂_λ] = η_{νλ}x̂_μ - η_{μλ}x̂_ν - i a_μ M_{νλ} + i a_ν M_{μλ}`.
pub fn verify_lorentz_and_mixed(r: &RealizationSet) -> Result<Report> {
    let mut rep = Report::new();
    let ctx = &r.ctx;
    let n = r.dim();
    let m = &r.m;
    let i = GaussScalar::i();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).collect();
    for &(mu, nu) in &pairs {
        for &(la, rho) in &pairs {
            if (la, rho) < (mu, nu) {
                continue;
            }
            let lhs = AlgElement::commutator(&m[mu][nu], &m[la][rho]);
            let rhs = &(&(&m[mu][rho].scale_int(eta(ctx, nu, la)) - &m[nu][rho].scale_int(eta(ctx, mu, la)))
                - &m[mu][la].scale_int(eta(ctx, nu, rho)))
                + &m[nu][la].scale_int(eta(ctx, mu, rho));
            rep.identity("lorentz", format!("[M{mu}{nu}, M{la}{rho}]"), &r.at_order(&(&lhs - &rhs))?);
        }
    }
    for &(mu, nu) in &pairs {
        for la in 0..n {
            let lhs = AlgElement::commutator(&m[mu][nu], &r.xhat[la]);
            let rhs = &(&(&r.xhat[mu].scale_int(eta(ctx, nu, la)) - &r.xhat[nu].scale_int(eta(ctx, mu, la)))
                - &r.a_times(mu, &m[nu][la]).scale(&i))
                + &r.a_times(nu, &m[mu][la]).scale(&i);
            rep.identity("lorentz", format!("[M{mu}{nu}, xhat{la}]"), &r.at_order(&(&lhs - &rhs))?);
        }
    }
    Ok(rep)
}

/// Shift-operator relations.
pub fn verify_shift(r: &RealizationSet) -> Result<Report> {
    let mut rep = Report::new();
    let i = GaussScalar::i();
    let n = r.dim();
    let wc = r.z.ctx().clone();
    rep.identity("shift", "Z*Zinv = 1", &r.at_order(&(&(&r.z * &r.zinv) - &AlgElement::one(&wc)))?);
    for mu in 0..n {
        let lhs = AlgElement::commutator(&r.z, &r.xhat[mu]);
        let rhs = r.a_times(mu, &r.z).scale(&i);
        rep.identity("shift", format!("[Z, xhat{mu}]"), &r.at_order(&(&lhs - &rhs))?);
        let dz = AlgElement::commutator(&r.z, &AlgElement::d(&wc, mu));
        rep.identity("shift", format!("[Z, d{mu}]"), &r.at_order(&dz)?);
    }
    let mut zp = vec![AlgElement::one(&wc)];
    let mut zm = vec![AlgElement::one(&wc)];
    for k in 1..=2 {
        zp.push(&zp[k - 1] * &r.z);
        zm.push(&zm[k - 1] * &r.zinv);
    }
    for k in -2i64..=2 {
        let (left, right) = if k >= 0 { (&zp[k as usize], &zm[k as usize]) } else { (&zm[(-k) as usize], &zp[(-k) as usize]) };
        for mu in 0..n {
            let conj = &(left * &r.xhat[mu]) * right;
            let shift = AlgElement::a0_pow(&wc, r.ctx.e(mu).scale_int(k as i128) * i.clone(), 1);
            let rhs = &r.xhat[mu] + &shift;
            rep.identity("shift", format!("Z^{k} xhat{mu} Z^{} = xhat{mu} + {k}i a{mu}", -k), &r.at_order(&(&conj - &rhs))?);
        }
    }
    for mu in 0..n {
        for nu in (mu + 1)..n {
            let lhs = &(&r.xhat[mu] * &r.z) * &r.xhat[nu];
            let rhs = &(&r.xhat[nu] * &r.z) * &r.xhat[mu];
            rep.identity("shift", format!("xhat{mu} Z xhat{nu} = xhat{nu} Z xhat{mu}"), &r.at_order(&(&lhs - &rhs))?);
        }
    }
    Ok(rep)
}

/// `[□, x̂_μ] = 2D_μ` and the classical limit of `□`.
pub fn verify_box(r: &RealizationSet) -> Result<Report> {
    let mut rep = Report::new();
    let wc = r.boxop.ctx().clone();
    for mu in 0..r.dim() {
        let lhs = AlgElement::commutator(&r.boxop, &r.xhat[mu]);
        let res = &lhs - &r.d[mu].scale_int(2);
        rep.identity("box", format!("[box, xhat{mu}] = 2 D{mu}"), &r.at_order(&res)?);
    }
    let mut wave = AlgElement::zero(&wc);
    for mu in 0..r.dim() {
        let d = AlgElement::d(&wc, mu);
        wave = &wave + &(&d * &d).scale_int(r.ctx.eta(mu));
    }
    let lim = r.at_order(&r.boxop)?.classical_limit();
    rep.identity("box", "classical limit of box", &(&lim - &wave.truncate(r.order)));
    Ok(rep)
}

/// Substitutes the noncovariant `X(x, ∂)`, `D(∂)` into the natural-frame
/// formulas and compares with the noncovariant `x̂` and `M`.
pub fn crosscheck_frames(ctx: &Context, params: &NoncovParams) -> Result<Report> {
    let r = build_noncov(ctx, params)?;
    let mut rep = Report::new();
    let imgs = natural_images(ctx, &r.x, &r.d)?;
    for mu in 0..r.dim() {
        rep.identity("frames", format!("xhat{mu} from natural frame"), &r.at_order(&(&imgs.xhat[mu] - &r.xhat[mu]))?);
    }
    for mu in 0..r.dim() {
        for nu in (mu + 1)..r.dim() {
            rep.identity(
                "frames",
                format!("M{mu}{nu} from natural frame"),
                &r.at_order(&(&imgs.m[mu][nu] - &r.m[mu][nu]))?,
            );
        }
    }
    rep.identity("frames", "Zinv from natural frame", &r.at_order(&(&imgs.zinv - &r.zinv))?);
    Ok(rep)
}

/// `p_μ ▷ (x̂_ν x̂_λ ▷ 1)`.
pub fn leibniz_probe(r: &RealizationSet, mu: usize, nu: usize, la: usize) -> Result<AlgElement> {
    let f = (&r.xhat[nu] * &r.xhat[la]).vacuum_project();
    r.at_order(&r.p[mu].act_on(&f)?)
}

