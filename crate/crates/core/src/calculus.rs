//! The deformed exterior derivative, one-forms and the Lorentz action on
//! the differential algebra.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hopf::{Generator, HopfData};
use crate::realization::{NoncovParams, RealizationSet};
use crate::report::Report;
use crate::scalar::{format_rational, GaussScalar};
use crate::series::TruncSeries;
use crate::weyl::{AlgElement, NormalMonomial, Parity};

/// The parameter `s` and the two series of the `d̂` Ansatz.
#[derive(Clone, Debug, PartialEq)]
pub struct CalcParams {
    pub s: BigRational,
    pub k1: TruncSeries,
    pub k2: TruncSeries,
}

impl CalcParams {
    /// `K₂ = e^{-Ψ}/φ`; `K₁ = (1 - e^{-sΨ})/(s t)`, or `Ψ/t` for `s = 0`.
    pub fn new(s: BigRational, params: &NoncovParams) -> Result<Self> {
        let order = params.order();
        let big_psi = params.big_psi();
        let k2 = &params.z_pow(-1) * &params.phi().recip()?;
        let k1 = if s.is_zero() {
            big_psi.div_by_t(1)?
        } else {
            let sg = GaussScalar::real(s.clone());
            let e = big_psi.scale(&-sg.clone()).exp()?;
            let num = &TruncSeries::one(order) - &e;
            num.div_by_t(1)?.scale(&sg.inv().expect("s != 0"))
        };
        Ok(Self { s, k1, k2 })
    }

    /// Replaces `K₁`, for fault injection.
    pub fn with_k1(mut self, k1: TruncSeries) -> Self {
        self.k1 = k1;
        self
    }
}

/// `d̂`, the one-forms `ξ_μ = [d̂, x̂_μ]` and the closure constants.
#[derive(Clone, Debug)]
pub struct CalculusSet {
    pub dhat: AlgElement,
    pub xi: Vec<AlgElement>,
    pub params: CalcParams,
    pub order: usize,
}

/// Closure constants `K^λ_{μν}` stored as the rational multiplier of `a0`:
/// `[ξ_μ, x̂_ν] = i Σ_λ (κ^λ_{μν} a0) ξ_λ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KTable {
    pub dim: usize,
    /// `k[λ][μ][ν]`.
    #[serde(serialize_with = "ser_k")]
    pub k: Vec<Vec<Vec<BigRational>>>,
}

fn ser_k<S: serde::Serializer>(k: &[Vec<Vec<BigRational>>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strs: Vec<Vec<Vec<String>>> =
        k.iter().map(|pl| pl.iter().map(|row| row.iter().map(format_rational).collect()).collect()).collect();
    serde::Serialize::serialize(&strs, s)
}

impl KTable {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, k: vec![vec![vec![BigRational::zero(); dim]; dim]; dim] }
    }

    /// The values expected for the Ansatz family: `κ⁰₀₀ = -s`,
    /// `κ^i_{i0} = -1`, all others zero.
    pub fn expected(dim: usize, s: &BigRational) -> Self {
        let mut t = Self::zeros(dim);
        t.k[0][0][0] = -s.clone();
        for i in 1..dim {
            t.k[i][i][0] = -BigRational::one();
        }
        t
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for la in 0..self.dim {
            for mu in 0..self.dim {
                for nu in 0..self.dim {
                    let v = &self.k[la][mu][nu];
                    if !v.is_zero() {
                        out.push_str(&format!("K^{la}_{mu}{nu} = {}*a0\n", format_rational(v)));
                    }
                }
            }
        }
        if out.is_empty() {
            out.push_str("all K vanish\n");
        }
        out
    }
}

fn wctx(r: &RealizationSet) -> crate::weyl::Context {
    r.p[0].ctx().clone()
}

/// Builds `d̂` and `ξ` without checking the closed forms.
pub fn build_calculus_unchecked(r: &RealizationSet, params: &CalcParams) -> Result<CalculusSet> {
    r.noncov_params()?;
    let wc = wctx(r);
    let w = wc.order();
    let d: Vec<AlgElement> = (0..r.dim()).map(|mu| AlgElement::d(&wc, mu)).collect();
    let k1 = AlgElement::lift_series_in_a(&wc, &params.k1.truncate(params.k1.order().min(w)));
    let k2 = AlgElement::lift_series_in_a(&wc, &params.k2.truncate(params.k2.order().min(w)));
    let mut dhat = -&(&(&AlgElement::dx(&wc, 0) * &d[0]) * &k1);
    let mut spatial = AlgElement::zero(&wc);
    for k in 1..r.dim() {
        spatial = &spatial + &(&AlgElement::dx(&wc, k) * &d[k]);
    }
    dhat = &dhat + &(&spatial * &k2);
    let xi = r.xhat.iter().map(|x| AlgElement::commutator(&dhat, x)).collect();
    Ok(CalculusSet { dhat, xi, params: params.clone(), order: r.order })
}

/// The closed forms `ξ₀ = dx₀ Z^{-s}` and `ξ_i = dx_i Z⁻¹`.
pub fn xi_closed_forms(r: &RealizationSet, s: &BigRational) -> Result<Vec<AlgElement>> {
    let params = r.noncov_params()?;
    let wc = wctx(r);
    let w = wc.order();
    let big_psi = params.big_psi().truncate(w);
    let zs = big_psi.scale(&-GaussScalar::real(s.clone())).exp()?;
    let zinv = params.z_pow(-1).truncate(w);
    let mut out = vec![&AlgElement::dx(&wc, 0) * &AlgElement::lift_series_in_a(&wc, &zs)];
    for k in 1..r.dim() {
        out.push(&AlgElement::dx(&wc, k) * &AlgElement::lift_series_in_a(&wc, &zinv));
    }
    Ok(out)
}

/// Compares `ξ` with the closed forms.
pub fn check_closed_forms(c: &CalculusSet, r: &RealizationSet) -> Result<Report> {
    let mut rep = Report::new();
    let expect = xi_closed_forms(r, &c.params.s)?;
    for (mu, (got, want)) in c.xi.iter().zip(&expect).enumerate() {
        rep.identity("calculus", format!("xi{mu} closed form"), &(got - want).try_truncate(c.order)?);
        let lim = got.try_truncate(c.order)?.classical_limit();
        let dx = AlgElement::dx(got.ctx(), mu).truncate(c.order);
        rep.identity("calculus", format!("xi{mu} classical limit"), &(&lim - &dx));
    }
    Ok(rep)
}

/// `d̂` with the closed forms of `ξ` enforced.
pub fn build_calculus(r: &RealizationSet, params: &CalcParams) -> Result<CalculusSet> {
    let c = build_calculus_unchecked(r, params)?;
    let rep = check_closed_forms(&c, r)?;
    if let Some(f) = rep.failures().next() {
        return Err(Error::Realization(format!("one-form closed form mismatch: {}", f.name)));
    }
    Ok(c)
}

/// Monomials `x̂_{μ1} … x̂_{μk}` as sorted index lists, all degrees up to
/// `max_deg`.
pub fn index_multisets(dim: usize, max_deg: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_deg {
        let mut next = Vec::new();
        for m in &frontier {
            let start = m.last().copied().unwrap_or(0);
            for k in start..dim {
                let mut v: Vec<usize> = m.clone();
                v.push(k);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Ordered product of the given elements.
pub fn product_of(one: &AlgElement, factors: &[&AlgElement]) -> AlgElement {
    factors.iter().fold(one.clone(), |acc, f| &acc * *f)
}

fn xhat_monomial(r: &RealizationSet, idx: &[usize]) -> AlgElement {
    let fs: Vec<&AlgElement> = idx.iter().map(|&k| &r.xhat[k]).collect();
    product_of(&AlgElement::one(&wctx(r)), &fs)
}

fn label(prefix: &str, idx: &[usize]) -> String {
    if idx.is_empty() {
        "1".into()
    } else {
        idx.iter().map(|k| format!("{prefix}{k}")).collect::<Vec<_>>().join("*")
    }
}

/// `d̂² = 0`, `{ξ_μ, ξ_ν} = 0` and the Leibniz rule on `x̂`-monomials with
/// total degree up to `max_deg`.
pub fn check_d_properties(c: &CalculusSet, r: &RealizationSet, max_deg: usize) -> Result<Report> {
    let mut rep = Report::new();
    let n = c.order;
    let sq = &c.dhat * &c.dhat;
    rep.identity("calculus", "dhat^2 = 0", &sq.try_truncate(n)?);
    for mu in 0..r.dim() {
        for nu in mu..r.dim() {
            let anti = AlgElement::graded_commutator(&c.xi[mu], &c.xi[nu])?;
            rep.identity("calculus", format!("{{xi{mu}, xi{nu}}} = 0"), &anti.try_truncate(n)?);
        }
    }
    let monos = index_multisets(r.dim(), max_deg);
    let elems: Vec<AlgElement> = monos.iter().map(|m| xhat_monomial(r, m)).collect();
    let brackets: Vec<AlgElement> = elems.iter().map(|e| AlgElement::commutator(&c.dhat, e)).collect();
    for (a, fa) in monos.iter().enumerate() {
        for (b, fb) in monos.iter().enumerate() {
            if fa.is_empty() || fb.is_empty() || fa.len() + fb.len() > max_deg {
                continue;
            }
            let prod = &elems[a] * &elems[b];
            let lhs = AlgElement::commutator(&c.dhat, &prod);
            let rhs = &(&brackets[a] * &elems[b]) + &(&elems[a] * &brackets[b]);
            rep.identity(
                "calculus",
                format!("Leibniz on ({})({})", label("xhat", fa), label("xhat", fb)),
                &(&lhs - &rhs).try_truncate(n)?,
            );
        }
    }
    Ok(rep)
}

/// Solves `[ξ_μ, x̂_ν] = i Σ_λ K^λ_{μν} ξ_λ` for constants.
pub fn extract_k(c: &CalculusSet, r: &RealizationSet) -> Result<(KTable, Report)> {
    let mut rep = Report::new();
    let dim = r.dim();
    let n = c.order;
    let mut table = KTable::zeros(dim);
    for mu in 0..dim {
        for nu in 0..dim {
            let lhs = AlgElement::commutator(&c.xi[mu], &r.xhat[nu]);
            let mut rhs = AlgElement::zero(lhs.ctx());
            let mut constant = true;
            for la in 0..dim {
                let coeff = lhs
                    .coeff(&NormalMonomial::dx(la))
                    .map(|s| s.truncate(n))
                    .unwrap_or_else(|| TruncSeries::zero(n));
                // coeff must be i κ a0 with κ rational
                let kappa = coeff.coeff(1).clone() * -GaussScalar::i();
                let only_linear = coeff.coeffs().iter().enumerate().all(|(k, v)| k == 1 || v.is_zero());
                if !only_linear || !kappa.is_real() {
                    constant = false;
                }
                table.k[la][mu][nu] = kappa.re().clone();
                rhs = &rhs + &c.xi[la].scale_series(&coeff);
            }
            let name = format!("[xi{mu}, xhat{nu}] closes on constants");
            if !constant {
                rep.check("calculus", name, false, || "coefficient is not a constant multiple of i*a0".into());
                continue;
            }
            rep.identity("calculus", name, &(&lhs - &rhs).try_truncate(n)?);
        }
    }
    Ok((table, rep))
}

/// Closure plus comparison with the expected constants.
pub fn check_closure_and_k(c: &CalculusSet, r: &RealizationSet) -> Result<(KTable, Report)> {
    let (table, mut rep) = extract_k(c, r)?;
    let expected = KTable::expected(r.dim(), &c.params.s);
    for la in 0..r.dim() {
        for mu in 0..r.dim() {
            for nu in 0..r.dim() {
                let (got, want) = (&table.k[la][mu][nu], &expected.k[la][mu][nu]);
                rep.check("calculus", format!("K^{la}_{mu}{nu}"), got == want, || {
                    format!("got {}*a0, expected {}*a0", format_rational(got), format_rational(want))
                });
            }
        }
    }
    Ok((table, rep))
}

/// `[ξ_μ, x̂_ν] - [ξ_ν, x̂_μ] = i(a_μ ξ_ν - a_ν ξ_μ)` for arbitrary one-forms.
pub fn check_compatibility_of(xi: &[AlgElement], r: &RealizationSet, n: usize) -> Result<Report> {
    let mut rep = Report::new();
    let i = GaussScalar::i();
    for mu in 0..r.dim() {
        for nu in mu..r.dim() {
            let lhs = &AlgElement::commutator(&xi[mu], &r.xhat[nu]) - &AlgElement::commutator(&xi[nu], &r.xhat[mu]);
            let rhs = (&r.a_times(mu, &xi[nu]) - &r.a_times(nu, &xi[mu])).scale(&i);
            rep.identity("calculus", format!("compatibility ({mu},{nu})"), &(&lhs - &rhs).try_truncate(n)?);
        }
    }
    Ok(rep)
}

pub fn check_compatibility(c: &CalculusSet, r: &RealizationSet) -> Result<Report> {
    check_compatibility_of(&c.xi, r, c.order)
}

/// The inadmissible assignment `h_{μν} = δ_{μν}`, i.e. `ξ_μ = dx_μ`.
pub fn trivial_one_forms(r: &RealizationSet) -> Vec<AlgElement> {
    let wc = wctx(r);
    (0..r.dim()).map(|mu| AlgElement::dx(&wc, mu)).collect()
}

/// Inverse of a matrix of commuting momentum elements whose `a0 = 0`,
/// derivative-free part is invertible.
fn invert_momentum_matrix(h: &[Vec<AlgElement>]) -> Result<Vec<Vec<AlgElement>>> {
    let n = h.len();
    let wc = h[0][0].ctx().clone();
    let order = h.iter().flatten().map(AlgElement::order).min().unwrap_or(wc.order());
    // constant part
    let mut c = vec![vec![GaussScalar::zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            if let Some(s) = h[a][b].coeff(&NormalMonomial::ONE) {
                c[a][b] = s.coeff(0).clone();
            }
        }
    }
    let cinv = gauss_jordan(c.clone()).ok_or_else(|| Error::ElementPrecondition("h is not invertible at a0 = 0".into()))?;
    let to_elem = |m: &Vec<Vec<GaussScalar>>| -> Vec<Vec<AlgElement>> {
        m.iter().map(|row| row.iter().map(|v| AlgElement::scalar(&wc, v.clone()).truncate(order)).collect()).collect()
    };
    let cinv_e = to_elem(&cinv);
    let c_e = to_elem(&c);
    let nil: Vec<Vec<AlgElement>> = (0..n).map(|a| (0..n).map(|b| &h[a][b] - &c_e[a][b]).collect()).collect();
    if nil.iter().flatten().any(|e| e.terms().values().any(|s| !s.coeff(0).is_zero())) {
        return Err(Error::ElementPrecondition("h has derivative terms at a0 = 0".into()));
    }
    // h⁻¹ = Σ_k (-C⁻¹ N)^k C⁻¹
    let step = mat_mul(&cinv_e, &nil).into_iter().map(|row| row.into_iter().map(|e| -&e).collect()).collect::<Vec<_>>();
    let mut term = cinv_e.clone();
    let mut acc = cinv_e;
    for _ in 0..order {
        term = mat_mul(&step, &term);
        if term.iter().flatten().all(AlgElement::is_zero) {
            break;
        }
        acc = acc.iter().zip(&term).map(|(ra, rt)| ra.iter().zip(rt).map(|(x, y)| x + y).collect()).collect();
    }
    Ok(acc)
}

fn mat_mul(a: &[Vec<AlgElement>], b: &[Vec<AlgElement>]) -> Vec<Vec<AlgElement>> {
    let n = a.len();
    let wc = a[0][0].ctx().clone();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(AlgElement::zero(&wc), |acc, k| &acc + &(&a[i][k] * &b[k][j]))).collect())
        .collect()
}

fn gauss_jordan(mut m: Vec<Vec<GaussScalar>>) -> Option<Vec<Vec<GaussScalar>>> {
    let n = m.len();
    let mut inv: Vec<Vec<GaussScalar>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { GaussScalar::one() } else { GaussScalar::zero() }).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        inv.swap(col, piv);
        let f = m[col][col].inv()?;
        for j in 0..n {
            m[col][j] = &m[col][j] * &f;
            inv[col][j] = &inv[col][j] * &f;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let g = m[r][col].clone();
                for j in 0..n {
                    let a = &m[col][j] * &g;
                    m[r][j] = &m[r][j] - &a;
                    let b = &inv[col][j] * &g;
                    inv[r][j] = &inv[r][j] - &b;
                }
            }
        }
    }
    Some(inv)
}

/// The decomposition `K = A + S` with
/// `A^λ_{μν} = ½(a_μδ_{νλ} - a_νδ_{μλ})` and
/// `S^λ_{μν} = -(i/2) Σ h⁻¹_{λα}(∂h_{αμ}/∂∂_β φ_{βν} + ∂h_{αν}/∂∂_β φ_{βμ})`.
pub fn decompose_k(c: &CalculusSet, r: &RealizationSet) -> Result<Report> {
    let mut rep = Report::new();
    let dim = r.dim();
    let n = c.order;
    let ctx = &r.ctx;
    let (k, _) = extract_k(c, r)?;
    // h_{αμ}: ξ_μ = Σ_α dx^α h_{αμ} with dx^α = η_{αα} dx_α
    let h: Vec<Vec<AlgElement>> =
        (0..dim).map(|al| (0..dim).map(|mu| c.xi[mu].dx_coefficient(al).scale_int(ctx.eta(al))).collect()).collect();
    // φ_{βν}: x̂_ν = Σ_β x^β φ_{βν}
    let phi: Vec<Vec<AlgElement>> =
        (0..dim).map(|be| (0..dim).map(|nu| r.xhat[nu].x_coefficient(be).scale_int(ctx.eta(be))).collect()).collect();
    let hinv = invert_momentum_matrix(&h)?;
    let mut dh = vec![vec![vec![]; dim]; dim];
    for al in 0..dim {
        for mu in 0..dim {
            for be in 0..dim {
                dh[al][mu].push(h[al][mu].d_by_d(be)?);
            }
        }
    }
    let coef = GaussScalar::from_ratio(-1, 2) * GaussScalar::i();
    let wc = wctx(r);
    let half = BigRational::new(1.into(), 2.into());
    for la in 0..dim {
        for mu in 0..dim {
            for nu in 0..dim {
                let mut acc = AlgElement::zero(&wc);
                for al in 0..dim {
                    let mut inner = AlgElement::zero(&wc);
                    for be in 0..dim {
                        inner = &inner + &(&(&dh[al][mu][be] * &phi[be][nu]) + &(&dh[al][nu][be] * &phi[be][mu]));
                    }
                    acc = &acc + &(&hinv[la][al] * &inner);
                }
                let s_elem = acc.scale(&coef).try_truncate(n)?;
                let name = format!("S^{la}_{mu}{nu}");
                let constant = s_elem.terms().keys().all(NormalMonomial::is_one);
                let series = s_elem.unit_coeff();
                let only_linear = series.coeffs().iter().enumerate().all(|(k, v)| k == 1 || v.is_zero());
                let s_val = series.coeff(1).clone();
                if !(constant && only_linear && s_val.is_real()) {
                    rep.check("calculus", format!("{name} is constant"), false, || format!("S = {}", s_elem.render()));
                    continue;
                }
                rep.check("calculus", format!("{name} is constant"), true, String::new);
                // A in units of a0 (a_μ = a0 e_μ)
                let mut a_val = BigRational::zero();
                if nu == la {
                    a_val += ctx.e(mu).re() * &half;
                }
                if mu == la {
                    a_val -= ctx.e(nu).re() * &half;
                }
                let total = &a_val + s_val.re();
                let got = &k.k[la][mu][nu];
                rep.check("calculus", format!("K^{la}_{mu}{nu} = A + S"), &total == got, || {
                    format!("A + S = {}*a0, K = {}*a0", format_rational(&total), format_rational(got))
                });
            }
        }
    }
    Ok(rep)
}

/// `[M_{μν}, ξ_λ]` against the closed forms, and `[M_{μν}, d̂]`.
pub fn commutators_m_xi(c: &CalculusSet, r: &RealizationSet) -> Result<Report> {
    let mut rep = Report::new();
    let dim = r.dim();
    let n = c.order;
    let params = r.noncov_params()?;
    let wc = wctx(r);
    let inv_phi = AlgElement::lift_series_in_a(&wc, &params.phi().truncate(wc.order() + 1).recip()?);
    let s = GaussScalar::real(c.params.s.clone());
    let i_a0 = AlgElement::a0_pow(&wc, GaussScalar::i(), 1);
    for i in 1..dim {
        let di_phi = &AlgElement::d(&wc, i) * &inv_phi;
        for la in 0..dim {
            let got = AlgElement::commutator(&r.m[i][0], &c.xi[la]);
            let factor = if la == 0 { -&i_a0.scale(&s) } else { -&i_a0 };
            let want = &(&factor * &c.xi[la]) * &di_phi;
            rep.identity("calculus", format!("[M{i}0, xi{la}]"), &(&got - &want).try_truncate(n)?);
        }
        for j in (i + 1)..dim {
            for la in 0..dim {
                let got = AlgElement::commutator(&r.m[i][j], &c.xi[la]);
                rep.identity("calculus", format!("[M{i}{j}, xi{la}]"), &got.try_truncate(n)?);
            }
        }
    }
    for mu in 0..dim {
        for nu in (mu + 1)..dim {
            let got = AlgElement::commutator(&r.m[mu][nu], &c.dhat).try_truncate(n)?;
            rep.check("calculus", format!("[M{mu}{nu}, dhat] != 0"), !got.is_zero(), || "commutator vanishes".into());
            // classical limit: -(dx_μ ∂_ν - dx_ν ∂_μ)
            let dx = |k| AlgElement::dx(&wc, k);
            let d = |k| AlgElement::d(&wc, k);
            let want = -&(&(&dx(mu) * &d(nu)) - &(&dx(nu) * &d(mu)));
            rep.identity(
                "calculus",
                format!("[M{mu}{nu}, dhat] classical limit"),
                &(&got.classical_limit() - &want.truncate(n)),
            );
        }
    }
    Ok(rep)
}

/// `w ▷ v` for the operator word `w = w_1 w_2 … w_k`, applied right to left.
pub fn act_word(word: &[&AlgElement], v: &AlgElement) -> Result<AlgElement> {
    word.iter().rev().try_fold(v.clone(), |acc, w| w.act_on(&acc))
}

/// `w ▷ 1`.
pub fn vacuum_word(word: &[&AlgElement]) -> Result<AlgElement> {
    let first = word.first().ok_or_else(|| Error::ElementPrecondition("empty operator word".into()))?;
    act_word(word, &AlgElement::one(first.ctx()))
}

/// `M_{μν} ▷ f = [M_{μν}, f] ▷ 1`.
pub fn lorentz_action(r: &RealizationSet, f: &AlgElement, mu: usize, nu: usize) -> Result<AlgElement> {
    lorentz_action_word(r, &[f], mu, nu)
}

/// [`lorentz_action`] on the product of `word`, evaluated as
/// `M ▷ (w ▷ 1) - w ▷ (M ▷ 1)` without forming the product.
pub fn lorentz_action_word(r: &RealizationSet, word: &[&AlgElement], mu: usize, nu: usize) -> Result<AlgElement> {
    let m = &r.m[mu][nu];
    let one = AlgElement::one(m.ctx());
    let first = m.act_on(&act_word(word, &one)?)?;
    let second = act_word(word, &m.act_on(&one)?)?;
    (&first - &second).try_truncate(r.order)
}

fn xhat_word<'a>(r: &'a RealizationSet, idx: &[usize]) -> Vec<&'a AlgElement> {
    idx.iter().map(|&k| &r.xhat[k]).collect()
}

fn xi_word<'a>(c: &'a CalculusSet, idx: &[usize]) -> Vec<&'a AlgElement> {
    idx.iter().map(|&k| &c.xi[k]).collect()
}

/// The action table on coordinates and the vanishing on pure one-forms.
pub fn check_action_table(c: &CalculusSet, r: &RealizationSet) -> Result<Report> {
    let mut rep = Report::new();
    let dim = r.dim();
    let n = r.order;
    let wc = wctx(r);
    let x = |k| AlgElement::x(&wc, k).truncate(n);
    let zero = AlgElement::zero_at(&wc, n);
    for i in 1..dim {
        let got = lorentz_action(r, &r.xhat[0], i, 0)?;
        rep.identity("actions", format!("M{i}0 > xhat0 = -x{i}"), &(&got + &x(i)));
        for k in 1..dim {
            let got = lorentz_action(r, &r.xhat[k], i, 0)?;
            let want = if i == k { -&x(0) } else { zero.clone() };
            rep.identity("actions", format!("M{i}0 > xhat{k}"), &(&got - &want));
        }
        for j in (i + 1)..dim {
            let got = lorentz_action(r, &r.xhat[0], i, j)?;
            rep.identity("actions", format!("M{i}{j} > xhat0 = 0"), &got);
            for k in 1..dim {
                let got = lorentz_action(r, &r.xhat[k], i, j)?;
                let mut want = zero.clone();
                if j == k {
                    want = &want + &x(i);
                }
                if i == k {
                    want = &want - &x(j);
                }
                rep.identity("actions", format!("M{i}{j} > xhat{k}"), &(&got - &want));
            }
        }
    }
    for g in xi_monomials(dim, 2) {
        let gx = xi_product(c, &g);
        for (mu, nu) in lorentz_pairs(dim) {
            let got = lorentz_action(r, &gx, mu, nu)?;
            rep.identity("actions", format!("M{mu}{nu} > {} = 0", label("xi", &g)), &got);
        }
    }
    Ok(rep)
}

pub(crate) fn lorentz_pairs(dim: usize) -> Vec<(usize, usize)> {
    (1..dim).map(|i| (i, 0)).chain((1..dim).flat_map(|i| ((i + 1)..dim).map(move |j| (i, j)))).collect()
}

/// Strictly increasing index lists of length 1..=max.
fn xi_monomials(dim: usize, max: usize) -> Vec<Vec<usize>> {
    index_multisets(dim, max).into_iter().filter(|m| !m.is_empty() && m.windows(2).all(|w| w[0] < w[1])).collect()
}

fn xi_product(c: &CalculusSet, idx: &[usize]) -> AlgElement {
    product_of(&AlgElement::one(c.dhat.ctx()), &xi_word(c, idx))
}

/// Coefficients of the vacuum image of an `x̂`-polynomial in the basis of
/// ordered `x̂`-monomial images; one map per one-form monomial.
pub type PbwCoefficients = BTreeMap<(Vec<usize>, u16), TruncSeries>;

/// Ordered monomial images `x̂_0^{α_0} x̂_1^{α_1} … ▷ 1` of one realization.
pub struct PbwBasis<'a> {
    r: &'a RealizationSet,
    cache: BTreeMap<Vec<u16>, AlgElement>,
}

impl<'a> PbwBasis<'a> {
    pub fn new(r: &'a RealizationSet) -> Self {
        Self { r, cache: BTreeMap::new() }
    }

    fn image(&mut self, alpha: &[u16]) -> Result<AlgElement> {
        if let Some(e) = self.cache.get(alpha) {
            return Ok(e.clone());
        }
        let word: Vec<&AlgElement> =
            alpha.iter().enumerate().flat_map(|(k, &e)| std::iter::repeat_n(&self.r.xhat[k], e as usize)).collect();
        let img = if word.is_empty() { AlgElement::one(&wctx(self.r)) } else { vacuum_word(&word)? };
        self.cache.insert(alpha.to_vec(), img.clone());
        Ok(img)
    }

    /// Decomposes a derivative-free `v` into `Σ c_α (x̂^α ▷ 1) · dx^S`. The
    /// images are triangular in the `x`-degree with unit leading
    /// coefficient, so peeling is exact.
    pub fn decompose(&mut self, v: &AlgElement, max_deg: usize) -> Result<PbwCoefficients> {
        if !v.is_derivative_free() {
            return Err(Error::ElementPrecondition("PBW decomposition needs a derivative-free element".into()));
        }
        let dim = self.r.dim();
        let n = v.order().min(self.r.order);
        let wc = wctx(self.r);
        let mut rest = v.truncate(n);
        let mut out = PbwCoefficients::new();
        while let Some((m, s)) = rest.terms().iter().next_back().map(|(m, s)| (*m, s.clone())) {
            if m.x_degree() as usize > max_deg {
                return Err(Error::ElementPrecondition("PBW decomposition exceeded its degree bound".into()));
            }
            let alpha: Vec<u16> = m.xexp()[..dim].to_vec();
            let forms = NormalMonomial::new(&[], &m.dx_indices(), &[]);
            let img = &self.image(&alpha)?.truncate(n) * &AlgElement::monomial(&wc, forms).truncate(n);
            rest = &rest - &img.scale_series(&s);
            let key = (alpha.iter().map(|&e| e as usize).collect(), m.dxmask());
            let entry = out.entry(key).or_insert_with(|| TruncSeries::zero(n));
            *entry = &*entry + &s;
        }
        out.retain(|_, s| !s.is_zero());
        Ok(out)
    }
}

/// One-shot form of [`PbwBasis::decompose`].
pub fn pbw_decompose(r: &RealizationSet, v: &AlgElement, max_deg: usize) -> Result<PbwCoefficients> {
    PbwBasis::new(r).decompose(v, max_deg)
}

/// `M ▷ (f g) = (M ▷ f)(g ▷ 1)` for `x̂`-monomials `f` and `ξ`-monomials `g`.
pub fn check_module_property(c: &CalculusSet, r: &RealizationSet, max_f: usize, max_g: usize) -> Result<Report> {
    let mut rep = Report::new();
    let dim = r.dim();
    let mut gs = vec![vec![]];
    gs.extend(xi_monomials(dim, max_g));
    for f in index_multisets(dim, max_f).iter().filter(|f| !f.is_empty()) {
        let fw = xhat_word(r, f);
        for g in &gs {
            let gw = xi_word(c, g);
            let g_vac = if gw.is_empty() { AlgElement::one(&wctx(r)) } else { vacuum_word(&gw)? };
            let fg: Vec<&AlgElement> = fw.iter().chain(&gw).copied().collect();
            for (mu, nu) in lorentz_pairs(dim) {
                let lhs = lorentz_action_word(r, &fg, mu, nu)?;
                let rhs = &lorentz_action_word(r, &fw, mu, nu)? * &g_vac;
                rep.identity(
                    "actions",
                    format!("M{mu}{nu} > ({})({}) module", label("xhat", f), label("xi", g)),
                    &(&lhs - &rhs).try_truncate(r.order)?,
                );
            }
        }
    }
    Ok(rep)
}

/// The action computed in two bases yields the same abstract element once
/// the outputs are expressed in each basis's ordered `x̂`-monomials.
pub fn check_realization_independence(
    c1: &CalculusSet,
    r1: &RealizationSet,
    c2: &CalculusSet,
    r2: &RealizationSet,
    max_f: usize,
) -> Result<Report> {
    let mut rep = Report::new();
    let dim = r1.dim();
    let n = r1.order.min(r2.order);
    let (mut b1, mut b2) = (PbwBasis::new(r1), PbwBasis::new(r2));
    let cut = |p: PbwCoefficients| -> PbwCoefficients {
        p.into_iter().map(|(k, s)| (k, s.truncate(n))).filter(|(_, s)| !s.is_zero()).collect()
    };
    for f in index_multisets(dim, max_f).iter().filter(|f| !f.is_empty()) {
        for g in [vec![], vec![1]] {
            let w1: Vec<&AlgElement> = xhat_word(r1, f).into_iter().chain(xi_word(c1, &g)).collect();
            let w2: Vec<&AlgElement> = xhat_word(r2, f).into_iter().chain(xi_word(c2, &g)).collect();
            for (mu, nu) in lorentz_pairs(dim) {
                let a = cut(b1.decompose(&lorentz_action_word(r1, &w1, mu, nu)?, max_f)?);
                let b = cut(b2.decompose(&lorentz_action_word(r2, &w2, mu, nu)?, max_f)?);
                rep.check(
                    "actions",
                    format!("M{mu}{nu} > ({})({}) basis independent", label("xhat", f), label("xi", &g)),
                    a == b,
                    || format!("{} vs {}", render_pbw(&a), render_pbw(&b)),
                );
            }
        }
    }
    Ok(rep)
}

fn render_pbw(p: &PbwCoefficients) -> String {
    let parts: Vec<String> = p.iter().map(|((a, mask), s)| format!("({})*xhat^{a:?}*dx{mask:#b}", s.render("a0"))).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// `ad(M)(f) = Σ M_(1) f S(M_(2))`.
pub fn adjoint_action(hd: &HopfData, f: &AlgElement, g: Generator) -> Result<AlgElement> {
    let mut acc = AlgElement::zero(f.ctx());
    for (a, b) in hd.coproduct_sym(g)? {
        acc = &acc + &(&(&hd.realize(&a)? * f) * &hd.antipode(&b)?);
    }
    Ok(acc)
}

/// `ad(g)(w) ▷ 1 = Σ g_(1) ▷ (w ▷ (S(g_(2)) ▷ 1))`.
pub fn adjoint_action_vacuum(hd: &HopfData, word: &[&AlgElement], g: Generator) -> Result<AlgElement> {
    let one = AlgElement::one(&wctx(&hd.r));
    let mut acc = AlgElement::zero(one.ctx());
    for (a, b) in hd.coproduct_sym(g)? {
        let right = hd.antipode(&b)?.act_on(&one)?;
        acc = &acc + &hd.realize(&a)?.act_on(&act_word(word, &right)?)?;
    }
    acc.try_truncate(hd.r.order)
}

/// Adjoint action versus the vacuum action for `x̂`-monomials up to
/// `max_f`; rotations as commutators and conjugation by `Z` as a shift up
/// to `max_full`, where full operator products are formed.
pub fn check_adjoint(hd: &HopfData, max_f: usize, max_full: usize) -> Result<Report> {
    let mut rep = Report::new();
    let r = &hd.r;
    let n = r.order;
    let dim = r.dim();
    let wc = wctx(r);
    for f in index_multisets(dim, max_f).iter().filter(|f| !f.is_empty()) {
        let fw = xhat_word(r, f);
        for (mu, nu) in lorentz_pairs(dim) {
            let lhs = adjoint_action_vacuum(hd, &fw, Generator::M(mu, nu))?;
            let rhs = lorentz_action_word(r, &fw, mu, nu)?;
            rep.identity("actions", format!("ad(M{mu}{nu})({}) > 1", label("xhat", f)), &(&lhs - &rhs));
        }
        if f.len() > max_full {
            continue;
        }
        let fe = xhat_monomial(r, f);
        for (mu, nu) in lorentz_pairs(dim).into_iter().filter(|&(_, nu)| nu != 0) {
            let ad = adjoint_action(hd, &fe, Generator::M(mu, nu))?;
            let comm = AlgElement::commutator(&r.m[mu][nu], &fe);
            rep.identity("actions", format!("ad(M{mu}{nu})({}) = commutator", label("xhat", f)), &(&ad - &comm).try_truncate(n)?);
        }
        // Z f Z⁻¹ = f(x̂ + i a)
        let conj = &(&r.z * &fe) * &r.zinv;
        let shifted: Vec<AlgElement> =
            (0..dim).map(|k| &r.xhat[k] + &AlgElement::a0_pow(&wc, r.ctx.e(k) * GaussScalar::i(), 1)).collect();
        let fs: Vec<&AlgElement> = f.iter().map(|&k| &shifted[k]).collect();
        let want = product_of(&AlgElement::one(&wc), &fs);
        rep.identity("actions", format!("Z ({}) Zinv shift", label("xhat", f)), &(&conj - &want).try_truncate(n)?);
    }
    Ok(rep)
}

/// Graded Jacobi identity for homogeneous elements.
pub fn graded_jacobi(a: &AlgElement, b: &AlgElement, c: &AlgElement) -> Result<AlgElement> {
    let sign = |x: &AlgElement, y: &AlgElement| -> Result<i64> {
        let px = x.parity().ok_or(Error::MixedParity)?;
        let py = y.parity().ok_or(Error::MixedParity)?;
        Ok(if px == Parity::Odd && py == Parity::Odd { -1 } else { 1 })
    };
    let gc = AlgElement::graded_commutator;
    // (-1)^{|a||c|}[a,[b,c]] + (-1)^{|b||a|}[b,[c,a]] + (-1)^{|c||b|}[c,[a,b]]
    let t1 = gc(a, &gc(b, c)?)?.scale_int(sign(a, c)?);
    let t2 = gc(b, &gc(c, a)?)?.scale_int(sign(b, a)?);
    let t3 = gc(c, &gc(a, b)?)?.scale_int(sign(c, b)?);
    Ok(&(&t1 + &t2) + &t3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{fixed_basis_names, named_basis_table};
    use crate::realization::{build_noncov, required_param_order};
    use crate::weyl::Context;

    fn rat(k: i64) -> BigRational {
        BigRational::from_integer(k.into())
    }

    fn setup(name: &str, dim: usize, order: usize, s: BigRational) -> (RealizationSet, CalculusSet) {
        let ctx = Context::timelike(dim, order).unwrap();
        let p = named_basis_table(name, required_param_order(order)).unwrap();
        let r = build_noncov(&ctx, &p).unwrap();
        let cp = CalcParams::new(s, &p).unwrap();
        let c = build_calculus(&r, &cp).unwrap();
        (r, c)
    }

    fn assert_report(rep: Report) {
        assert!(!rep.is_empty());
        if !rep.passed() {
            panic!("{}", rep.render_text());
        }
    }

    #[test]
    fn calculus_family_all_bases() {
        for name in fixed_basis_names() {
            for s in [rat(0), rat(1), rat(2), BigRational::new((-1).into(), 2.into())] {
                let (r, c) = setup(name, 3, 3, s);
                assert_report(check_closed_forms(&c, &r).unwrap());
                assert_report(check_d_properties(&c, &r, 2).unwrap());
                assert_report(check_closure_and_k(&c, &r).unwrap().1);
                assert_report(check_compatibility(&c, &r).unwrap());
            }
        }
    }

    #[test]
    fn k_values_bicrossproduct_s1() {
        let (r, c) = setup("bicrossproduct", 4, 3, rat(1));
        let (k, rep) = check_closure_and_k(&c, &r).unwrap();
        assert_report(rep);
        assert_eq!(k.k[0][0][0], rat(-1));
        for i in 1..4 {
            assert_eq!(k.k[i][i][0], rat(-1));
            assert_eq!(k.k[i][0][i], rat(0));
        }
    }

    #[test]
    fn k_decomposes() {
        for name in fixed_basis_names() {
            for s in [rat(0), rat(1), rat(2)] {
                let (r, c) = setup(name, 3, 3, s);
                assert_report(decompose_k(&c, &r).unwrap());
            }
        }
    }

    #[test]
    fn lorentz_on_one_forms() {
        for name in ["bicrossproduct", "weyl-symmetric"] {
            for s in [rat(0), rat(1), rat(2)] {
                let (r, c) = setup(name, 3, 3, s);
                assert_report(commutators_m_xi(&c, &r).unwrap());
            }
        }
    }

    #[test]
    fn trivial_one_forms_are_incompatible() {
        let (r, _) = setup("bicrossproduct", 3, 3, rat(1));
        let rep = check_compatibility_of(&trivial_one_forms(&r), &r, 3).unwrap();
        assert!(!rep.passed());
    }

    #[test]
    fn fault_injected_k1_breaks_closed_form() {
        let ctx = Context::timelike(3, 3).unwrap();
        let p = named_basis_table("bicrossproduct", required_param_order(3)).unwrap();
        let r = build_noncov(&ctx, &p).unwrap();
        let good = CalcParams::new(rat(1), &p).unwrap();
        let bad = good.clone().with_k1(&good.k1 + &TruncSeries::var(good.k1.order()));
        assert!(build_calculus(&r, &bad).is_err());
        let c = build_calculus_unchecked(&r, &bad).unwrap();
        assert!(!check_closed_forms(&c, &r).unwrap().passed());
        assert!(!check_closure_and_k(&c, &r).unwrap().1.passed());
    }

    #[test]
    fn action_table_and_module_property() {
        let (r, c) = setup("bicrossproduct", 3, 3, rat(1));
        assert_report(check_action_table(&c, &r).unwrap());
        assert_report(check_module_property(&c, &r, 2, 2).unwrap());
    }

    #[test]
    fn action_is_realization_independent() {
        let (r1, c1) = setup("bicrossproduct", 3, 3, rat(1));
        let (r2, c2) = setup("weyl-symmetric", 3, 3, rat(1));
        assert_report(check_realization_independence(&c1, &r1, &c2, &r2, 2).unwrap());
    }

    #[test]
    fn pbw_round_trip() {
        let (r, _) = setup("left-covariant", 3, 3, rat(1));
        let f = &(&r.xhat[0] * &r.xhat[1]) * &r.xhat[0];
        let v = f.vacuum_project().truncate(3);
        let dec = pbw_decompose(&r, &v, 3).unwrap();
        let mut rebuilt = AlgElement::zero_at(r.z.ctx(), 3);
        for ((alpha, mask), s) in &dec {
            assert_eq!(*mask, 0);
            let mut m = AlgElement::one(r.z.ctx());
            for (k, &e) in alpha.iter().enumerate() {
                for _ in 0..e {
                    m = &m * &r.xhat[k];
                }
            }
            rebuilt = &rebuilt + &m.vacuum_project().truncate(3).scale_series(s);
        }
        assert_eq!(rebuilt, v);
        // x̂0 x̂1 x̂0 = x̂0² x̂1 + i a0 x̂0 x̂1 in ordered form
        assert_eq!(dec.len(), 2);
    }

    #[test]
    fn adjoint_action_matches() {
        let (r, _) = setup("bicrossproduct", 3, 2, rat(1));
        let hd = HopfData::new(&r).unwrap();
        assert_report(check_adjoint(&hd, 2, 2).unwrap());
    }

    #[test]
    fn jacobi_on_generators() {
        let (r, c) = setup("weyl-symmetric", 3, 2, rat(1));
        let els = [&r.xhat[0], &r.xhat[1], &c.xi[0], &c.xi[2], &r.m[1][0], &c.dhat];
        for a in els {
            for b in els {
                for d in els {
                    let j = graded_jacobi(a, b, d).unwrap().try_truncate(2).unwrap();
                    assert!(j.is_zero());
                }
            }
        }
    }
}
