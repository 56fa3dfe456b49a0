//! Realizations of κ-Minkowski coordinates and Lorentz generators as
//! elements of the Weyl superalgebra.

mod hg;
mod params;
mod verify;


pub use hg::{check_h_g, extract_h_g, g_closed_form, h_closed_form, HgTables};
pub use params::NoncovParams;
pub use verify::{crosscheck_frames, leibniz_probe, verify_box, verify_lorentz_and_mixed, verify_shift, verify_space};

use num_traits::One;

use crate::error::{Error, Result};
use crate::scalar::GaussScalar;
use crate::series::TruncSeries;
use crate::weyl::{AlgElement, Context};

/// Extra `a0` orders carried by builders so that divisions by `a0` and the
/// derivative inside `γ` never eat into the requested precision.
pub const MARGIN: usize = 3;

/// Smallest parameter order accepted by [`build_noncov`] for target order `n`.
pub fn required_param_order(n: usize) -> usize {
    n + MARGIN + 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    Noncovariant,
    Natural,
}

/// The realized operators of one basis.
///
/// Elements carry at least `order` orders of precision in `a0`, usually a
/// few more; verifiers compare at `order`.
#[derive(Clone, Debug)]
pub struct RealizationSet {
    pub ctx: Context,
    pub order: usize,
    pub frame: Frame,
    pub xhat: Vec<AlgElement>,
    /// Full antisymmetric table, `m[μ][ν] = M_{μν}`.
    pub m: Vec<Vec<AlgElement>>,
    pub p: Vec<AlgElement>,
    pub z: AlgElement,
    pub zinv: AlgElement,
    pub d: Vec<AlgElement>,
    pub x: Vec<AlgElement>,
    pub boxop: AlgElement,
    pub params: Option<NoncovParams>,
}

impl RealizationSet {
    pub fn dim(&self) -> usize {
        self.ctx.dim()
    }

    /// `e` cut to the target order.
    pub fn at_order(&self, e: &AlgElement) -> Result<AlgElement> {
        e.try_truncate(self.order)
    }

    /// `a_μ · e` as an element.
    pub fn a_times(&self, mu: usize, e: &AlgElement) -> AlgElement {
        e.mul_a0_pow(1).scale(&self.ctx.e(mu))
    }

    pub fn noncov_params(&self) -> Result<&NoncovParams> {
        self.params.as_ref().ok_or_else(|| Error::Realization("operation needs a noncovariant realization".into()))
    }
}

pub(crate) fn lift(ctx: &Context, f: &TruncSeries) -> AlgElement {
    AlgElement::lift_series_in_a(ctx, f)
}

pub(crate) fn i_a0(ctx: &Context) -> AlgElement {
    AlgElement::a0_pow(ctx, GaussScalar::i(), 1)
}

fn geometric(order: usize) -> TruncSeries {
    // 1/(1+t)
    TruncSeries::from_coeffs((0..=order).map(|k| GaussScalar::from_int(if k % 2 == 0 { 1 } else { -1 })).collect())
}

fn momenta(ctx: &Context) -> Vec<AlgElement> {
    (0..ctx.dim()).map(|mu| AlgElement::d(ctx, mu).scale(&-GaussScalar::i())).collect()
}

fn antisym(dim: usize, mut f: impl FnMut(usize, usize) -> AlgElement, zero: &AlgElement) -> Vec<Vec<AlgElement>> {
    let mut m = vec![vec![zero.clone(); dim]; dim];
    for mu in 0..dim {
        for nu in (mu + 1)..dim {
            let v = f(mu, nu);
            m[nu][mu] = -&v;
            m[mu][nu] = v;
        }
    }
    m
}

/// The noncovariant family with `a = (a0, 0, …, 0)`.
pub fn build_noncov(ctx: &Context, params: &NoncovParams) -> Result<RealizationSet> {
    if !ctx.is_timelike() {
        return Err(Error::Realization("the noncovariant family needs the direction (1, 0, ..., 0)".into()));
    }
    let n = ctx.order();
    let w = n + MARGIN;
    if params.order() < w + 1 {
        return Err(Error::Precision { needed: w + 1, have: params.order() });
    }
    let wc = ctx.with_order(w);
    let dim = ctx.dim();
    let phi = params.phi().truncate(w + 1);
    let psi = params.psi().truncate(w + 1);
    let gamma = params.gamma().truncate(w);
    let big_psi = params.big_psi().truncate(w + 1);
    let ep = big_psi.exp()?;
    let em = (-&big_psi).exp()?;
    let inv_phi = phi.recip()?;

    let x: Vec<AlgElement> = (0..dim).map(|mu| AlgElement::x(&wc, mu)).collect();
    let d: Vec<AlgElement> = (0..dim).map(|mu| AlgElement::d(&wc, mu)).collect();
    let euler = (1..dim).fold(AlgElement::zero(&wc), |acc, k| &acc + &(&x[k] * &d[k]));
    let lap = (1..dim).fold(AlgElement::zero(&wc), |acc, k| &acc + &(&d[k] * &d[k]));

    let mut xhat = Vec::with_capacity(dim);
    xhat.push(&(&x[0] * &lift(&wc, &psi)) + &(&(&i_a0(&wc) * &euler) * &lift(&wc, &gamma)));
    for k in 1..dim {
        xhat.push(&x[k] * &lift(&wc, &phi));
    }

    let z = lift(&wc, &ep);
    let zinv = lift(&wc, &em);

    // □ = Δ e^{-Ψ}/φ² - ∂0² (e^Ψ + e^{-Ψ} - 2)/t² evaluated at A
    let cosh_part = (&(&ep + &em) - &TruncSeries::constant(GaussScalar::from_int(2), w + 1)).div_by_t(2)?;
    let d0sq = &d[0] * &d[0];
    let boxop = &(&lap * &lift(&wc, &(&em * &inv_phi.pow(2)))) - &(&d0sq * &lift(&wc, &cosh_part));

    let half_i_a0_box = &AlgElement::a0_pow(&wc, GaussScalar::from_ratio(1, 2) * GaussScalar::i(), 1) * &boxop;
    let mut dd = Vec::with_capacity(dim);
    let em_minus_one = (&em - &TruncSeries::one(w + 1)).div_by_t(1)?;
    dd.push(&(-&(&d[0] * &lift(&wc, &em_minus_one))) + &half_i_a0_box);
    for k in 1..dim {
        dd.push(&d[k] * &lift(&wc, &(&em * &inv_phi)));
    }

    // X0 = x̂0 (1 + a0² □/2)^{-1}
    let arg = AlgElement::a0_pow(&wc, GaussScalar::from_ratio(1, 2), 2).try_mul(&boxop)?;
    let q = AlgElement::substitute_series(&geometric(w), &arg)?;
    let x0_big = &xhat[0] * &q;
    let mut xx = vec![x0_big.clone()];
    for k in 1..dim {
        let first = &x[k] * &lift(&wc, &(&phi * &ep));
        let second = &(&(&i_a0(&wc) * &x0_big) * &d[k]) * &lift(&wc, &inv_phi);
        xx.push(&first + &second);
    }

    let one_minus_ep = (&TruncSeries::one(w + 1) - &ep).div_by_t(1)?;
    let boost_factor = &(-&(&d[0] * &lift(&wc, &one_minus_ep))) + &(&half_i_a0_box * &lift(&wc, &ep));
    let zero = AlgElement::zero(&wc);
    let m = antisym(
        dim,
        |mu, nu| {
            if mu == 0 {
                // M_{0ν} = -M_{ν0}
                let mi0 = &(&(&x[nu] * &lift(&wc, &phi)) * &boost_factor) - &(&(&xhat[0] * &d[nu]) * &lift(&wc, &inv_phi));
                -&mi0
            } else {
                &(&x[mu] * &d[nu]) - &(&x[nu] * &d[mu])
            }
        },
        &zero,
    );

    Ok(RealizationSet {
        ctx: ctx.clone(),
        order: n,
        frame: Frame::Noncovariant,
        xhat,
        m,
        p: momenta(&wc),
        z,
        zinv,
        d: dd,
        x: xx,
        boxop,
        params: Some(params.clone()),
    })
}

/// Minkowski product `Σ η_μμ u_μ v_μ` of two element vectors.
pub(crate) fn minkowski(ctx: &Context, u: &[AlgElement], v: &[AlgElement]) -> AlgElement {
    let mut acc = AlgElement::zero(&u[0].ctx().clone());
    for mu in 0..ctx.dim() {
        acc = &acc + &(&u[mu] * &v[mu]).scale_int(ctx.eta(mu));
    }
    acc
}

/// `e·v` with the Minkowski metric.
fn e_dot(ctx: &Context, v: &[AlgElement]) -> AlgElement {
    let mut acc = AlgElement::zero(v[0].ctx());
    for mu in 0..ctx.dim() {
        let c = ctx.e(mu).scale_int(ctx.eta(mu) as i128);
        acc = &acc + &v[mu].scale(&c);
    }
    acc
}

/// Output of the natural-frame formulas for given frame generators.
pub(crate) struct NaturalImages {
    pub xhat: Vec<AlgElement>,
    pub m: Vec<Vec<AlgElement>>,
    pub zinv: AlgElement,
}

/// `Z⁻¹ = -i(a·D) + sqrt(1 - a²D²)`, `x̂_μ = X_μZ⁻¹ + i(a·X)D_μ`,
/// `M_{μν} = X_μD_ν - X_νD_μ`.
pub(crate) fn natural_images(ctx: &Context, xs: &[AlgElement], ds: &[AlgElement]) -> Result<NaturalImages> {
    let wc = xs[0].ctx().clone();
    let w = xs.iter().chain(ds).map(AlgElement::order).min().unwrap_or(ctx.order());
    let dd = minkowski(ctx, ds, ds);
    let e2 = GaussScalar::real(ctx.e_squared());
    let rad_arg = &AlgElement::a0_pow(&wc, -e2, 2) * &dd;
    let mut one_plus_t = TruncSeries::one(w);
    *one_plus_t.coeff_mut(1) = GaussScalar::one();
    let root = AlgElement::substitute_series(&one_plus_t.sqrt()?, &rad_arg)?;
    let zinv = &(&AlgElement::a0_pow(&wc, -GaussScalar::i(), 1) * &e_dot(ctx, ds)) + &root;
    let ax = e_dot(ctx, xs).mul_a0_pow(1);
    let xhat = (0..ctx.dim())
        .map(|mu| &(&xs[mu] * &zinv) + &(&ax * &ds[mu]).scale(&GaussScalar::i()))
        .collect();
    let zero = AlgElement::zero(&wc);
    let m = antisym(ctx.dim(), |mu, nu| &(&xs[mu] * &ds[nu]) - &(&xs[nu] * &ds[mu]), &zero);
    Ok(NaturalImages { xhat, m, zinv })
}

/// The natural realization in its own frame: `X = x`, `D = ∂`.
pub fn build_natural(ctx: &Context) -> Result<RealizationSet> {
    let n = ctx.order();
    let w = n + MARGIN;
    let wc = ctx.with_order(w);
    let dim = ctx.dim();
    let x: Vec<AlgElement> = (0..dim).map(|mu| AlgElement::x(&wc, mu)).collect();
    let d: Vec<AlgElement> = (0..dim).map(|mu| AlgElement::d(&wc, mu)).collect();
    let imgs = natural_images(ctx, &x, &d)?;
    let e_inv = &imgs.zinv - &AlgElement::one(&wc);
    let z = AlgElement::substitute_series(&geometric(w), &e_inv)?;
    // □ = D² · 2(1 - sqrt(1 - u))/u with u = a0² (e·e) D²
    let dd = minkowski(ctx, &d, &d);
    let e2 = GaussScalar::real(ctx.e_squared());
    let u = &AlgElement::a0_pow(&wc, e2, 2) * &dd;
    let mut one_minus_t = TruncSeries::one(w + 1);
    *one_minus_t.coeff_mut(1) = -GaussScalar::one();
    let f = (&TruncSeries::one(w + 1) - &one_minus_t.sqrt()?).div_by_t(1)?.scale(&GaussScalar::from_int(2));
    let boxop = &dd * &AlgElement::substitute_series(&f, &u)?;
    Ok(RealizationSet {
        ctx: ctx.clone(),
        order: n,
        frame: Frame::Natural,
        xhat: imgs.xhat,
        m: imgs.m,
        p: momenta(&wc),
        z,
        zinv: imgs.zinv,
        d,
        x,
        boxop,
        params: None,
    })
}
